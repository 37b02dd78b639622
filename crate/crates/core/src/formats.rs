//! JSON readers and writers for every file the command-line tools consume or
//! emit: graphs, ranked posets, central arrangements, manifold cohomology
//! data, presheaves with optional products, and homology-page reports.
//!
//! Exact scalars travel as JSON integers or as `"p/q"` strings; readers accept
//! both, writers emit integers whenever the value is integral. Basis classes
//! may be referenced by index or by name.

use crate::field::{Field, Rat};
use crate::graph::SimpleGraph;
use crate::hyperplane::CentralArrangement;
use crate::matrix::Matrix;
use crate::oscomplex::E2Page;
use crate::poly::LaurentPoly2;
use crate::poset::{LocallyGeometricPoset, RankedPoset};
use crate::presheaf::{sign_of, GradedSpace, ManifoldData, MonoidalPresheaf, Presheaf, ProductMaps};
use crate::{Error, Result};
use num::{BigInt, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| bad(format!("malformed JSON: {e}")))
}

// ---------------------------------------------------------------------------
// Scalars and class references
// ---------------------------------------------------------------------------

/// A scalar in a JSON file: an integer, or a string such as `"-3/7"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoefJson {
    Int(i64),
    Str(String),
}

fn coef_from<F: Field>(c: &CoefJson) -> Result<F> {
    match c {
        CoefJson::Int(n) => Ok(F::from_int(*n)),
        CoefJson::Str(s) => {
            F::parse(s).ok_or_else(|| bad(format!("cannot parse scalar {s:?} over {}", F::name())))
        }
    }
}

fn coef_to<F: Field>(c: &F) -> CoefJson {
    let s = c.to_string();
    match s.parse::<i64>() {
        Ok(n) => CoefJson::Int(n),
        Err(_) => CoefJson::Str(s),
    }
}

/// A basis class in a JSON file: a 0-based index, or the class's name.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ClassRef {
    Index(usize),
    Name(String),
}

fn resolve_class(names: &[String], r: &ClassRef) -> Result<usize> {
    match r {
        ClassRef::Index(i) if *i < names.len() => Ok(*i),
        ClassRef::Index(i) => Err(bad(format!("basis index {i} out of range"))),
        ClassRef::Name(n) => names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| bad(format!("unknown basis class {n:?}"))),
    }
}

/// Parse a matrix of known shape; `[]` is accepted for a matrix with no rows.
fn matrix_from<F: Field>(entries: &[Vec<CoefJson>], rows: usize, cols: usize) -> Result<Matrix<F>> {
    if rows == 0 || cols == 0 {
        if entries.iter().any(|r| !r.is_empty()) {
            return Err(bad(format!("expected a {rows}x{cols} matrix, found entries")));
        }
        return Ok(Matrix::zero(rows, cols));
    }
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(bad(format!("expected a {rows}x{cols} matrix")));
    }
    let mut parsed = Vec::with_capacity(rows);
    for row in entries {
        parsed.push(row.iter().map(coef_from::<F>).collect::<Result<Vec<F>>>()?);
    }
    Ok(Matrix::from_rows(parsed))
}

fn check_field_tag<F: Field>(tag: &str) -> Result<()> {
    if tag != F::name() {
        return Err(bad(format!(
            "file declares field {tag:?} but the computation runs over {}",
            F::name()
        )));
    }
    Ok(())
}

/// Peek at the `"field"` tag of a manifold or presheaf file.
pub fn field_tag(s: &str) -> Result<String> {
    let v: Value = parse(s)?;
    v.get("field")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| bad("file has no \"field\" tag"))
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Read `{ "vertices": n, "edges": [[i,j],...] }` with 0-based vertices and
/// i < j on every edge.
pub fn graph_from_json(s: &str) -> Result<SimpleGraph> {
    let g: GraphJson = parse(s)?;
    for &(i, j) in &g.edges {
        if i >= j {
            return Err(bad(format!("edge [{i},{j}] must be written with i < j")));
        }
    }
    SimpleGraph::new(g.vertices, g.edges)
}

pub fn graph_to_json(g: &SimpleGraph) -> String {
    let j = GraphJson { vertices: g.num_vertices(), edges: g.edges().to_vec() };
    serde_json::to_string_pretty(&j).expect("graph serializes")
}

// ---------------------------------------------------------------------------
// Posets
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetJson {
    elements: Vec<String>,
    ranks: Vec<usize>,
    /// Pairs [q, p] meaning p covers q.
    covers: Vec<(usize, usize)>,
}

/// Read `{ "elements": [...], "ranks": [...], "covers": [[q,p],...] }`.
/// Elements are re-sorted by (rank, label) on construction.
pub fn poset_from_json(s: &str) -> Result<RankedPoset> {
    let p: PosetJson = parse(s)?;
    RankedPoset::new(p.elements, p.ranks, p.covers)
}

pub fn poset_to_json(p: &RankedPoset) -> String {
    let j = PosetJson {
        elements: (0..p.len()).map(|i| p.label(i).to_string()).collect(),
        ranks: (0..p.len()).map(|i| p.rank(i)).collect(),
        covers: p.covers().to_vec(),
    };
    serde_json::to_string_pretty(&j).expect("poset serializes")
}

// ---------------------------------------------------------------------------
// Central arrangements
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementJson {
    dim: usize,
    normals: Vec<Vec<CoefJson>>,
}

/// Read `{ "dim": d, "normals": [["p/q",...],...] }`.
pub fn arrangement_from_json(s: &str) -> Result<CentralArrangement> {
    let a: ArrangementJson = parse(s)?;
    let normals = a
        .normals
        .iter()
        .map(|row| row.iter().map(coef_from::<Rat>).collect::<Result<Vec<Rat>>>())
        .collect::<Result<Vec<_>>>()?;
    CentralArrangement::new(a.dim, normals)
}

pub fn arrangement_to_json(a: &CentralArrangement) -> String {
    let j = ArrangementJson {
        dim: a.dim(),
        normals: a.normals().iter().map(|v| v.iter().map(coef_to).collect()).collect(),
    };
    serde_json::to_string_pretty(&j).expect("arrangement serializes")
}

// ---------------------------------------------------------------------------
// Manifold cohomology data
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisJson {
    name: String,
    deg: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CupJson {
    i: ClassRef,
    j: ClassRef,
    out: Vec<(CoefJson, ClassRef)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    real_dim: usize,
    field: String,
    betti: Vec<usize>,
    basis: Vec<BasisJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cup: Vec<CupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagonal_class: Option<Vec<(CoefJson, ClassRef, ClassRef)>>,
    zero_diagonal: bool,
    projective_complex: bool,
}

/// Read manifold cohomology data. The unit must be `basis[0]`; cup products
/// of the unit are implied; a product given for (i, j) fills (j, i) with the
/// sign `(−1)^{deg i · deg j}` unless that entry is also given explicitly;
/// all structural invariants are re-verified after assembly.
pub fn manifold_from_json<F: Field>(s: &str) -> Result<ManifoldData<F>> {
    let j: ManifoldJson = parse(s)?;
    check_field_tag::<F>(&j.field)?;
    let h = j.basis.len();
    if h == 0 {
        return Err(bad("manifold needs a nonempty basis"));
    }
    let names: Vec<String> = j.basis.iter().map(|b| b.name.clone()).collect();
    let degs: Vec<usize> = j.basis.iter().map(|b| b.deg).collect();

    let max_deg = degs.iter().copied().max().unwrap_or(0);
    for d in 0..=max_deg.max(j.betti.len().saturating_sub(1)) {
        let counted = degs.iter().filter(|&&x| x == d).count();
        let declared = j.betti.get(d).copied().unwrap_or(0);
        if counted != declared {
            return Err(bad(format!(
                "betti[{d}] = {declared} but the basis has {counted} classes of degree {d}"
            )));
        }
    }

    let mut cup = vec![vec![vec![F::zero(); h]; h]; h];
    for k in 0..h {
        cup[0][k][k] = F::one();
        cup[k][0][k] = F::one();
    }
    let mut explicit: Vec<(usize, usize)> = Vec::new();
    for e in &j.cup {
        let i = resolve_class(&names, &e.i)?;
        let jj = resolve_class(&names, &e.j)?;
        if explicit.contains(&(i, jj)) {
            return Err(bad(format!("duplicate cup entry for ({}, {})", names[i], names[jj])));
        }
        explicit.push((i, jj));
        let mut out = vec![F::zero(); h];
        for (c, kref) in &e.out {
            let k = resolve_class(&names, kref)?;
            out[k] = out[k].add(&coef_from::<F>(c)?);
        }
        cup[i][jj] = out;
    }
    for &(i, jj) in &explicit {
        if i == 0 || jj == 0 || explicit.contains(&(jj, i)) {
            continue;
        }
        let sign = sign_of::<F>(degs[i] * degs[jj]);
        cup[jj][i] = cup[i][jj].iter().map(|c| c.mul(&sign)).collect();
    }

    let mut diagonal: Vec<(F, usize, usize)> = Vec::new();
    let diagonal_known = match &j.diagonal_class {
        Some(entries) => {
            for (c, a, b) in entries {
                let coef = coef_from::<F>(c)?;
                if !coef.is_zero() {
                    diagonal.push((coef, resolve_class(&names, a)?, resolve_class(&names, b)?));
                }
            }
            true
        }
        None => j.zero_diagonal,
    };
    let m = ManifoldData {
        name: j.name.unwrap_or_else(|| "manifold".into()),
        real_dim: j.real_dim,
        basis_names: names,
        basis_degs: degs,
        cup_table: cup,
        diagonal,
        diagonal_known,
        projective_complex: j.projective_complex,
    };
    if m.zero_diagonal() != j.zero_diagonal {
        return Err(bad(format!(
            "zero_diagonal is declared {} but the diagonal class says {}",
            j.zero_diagonal,
            m.zero_diagonal()
        )));
    }
    // Check every structural invariant now; whether a diagonal class is
    // required is for the consuming pipeline to decide.
    if m.diagonal_known {
        m.validate()?;
    } else {
        let mut probe = m.clone();
        probe.diagonal_known = true;
        probe.validate()?;
    }
    Ok(m)
}

pub fn manifold_to_json<F: Field>(m: &ManifoldData<F>) -> String {
    let h = m.dim();
    let max_deg = (0..h).map(|i| m.deg(i)).max().unwrap_or(0);
    let mut cup = Vec::new();
    for i in 1..h {
        for j in 1..h {
            let out: Vec<(CoefJson, ClassRef)> = m.cup_table[i][j]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (coef_to(c), ClassRef::Index(k)))
                .collect();
            if !out.is_empty() {
                cup.push(CupJson { i: ClassRef::Index(i), j: ClassRef::Index(j), out });
            }
        }
    }
    let j = ManifoldJson {
        name: Some(m.name.clone()),
        real_dim: m.real_dim,
        field: F::name().to_string(),
        betti: (0..=max_deg).map(|d| m.dim_in_degree(d)).collect(),
        basis: (0..h)
            .map(|i| BasisJson { name: m.basis_names[i].clone(), deg: m.deg(i) })
            .collect(),
        cup,
        diagonal_class: if m.diagonal_known {
            Some(
                m.diagonal
                    .iter()
                    .map(|(c, a, b)| (coef_to(c), ClassRef::Index(*a), ClassRef::Index(*b)))
                    .collect(),
            )
        } else {
            None
        },
        zero_diagonal: m.zero_diagonal(),
        projective_complex: m.projective_complex,
    };
    serde_json::to_string_pretty(&j).expect("manifold serializes")
}

// ---------------------------------------------------------------------------
// Generic presheaves
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    element: String,
    /// (degree, dimension) pairs.
    dims: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverMapJson {
    upper: String,
    lower: String,
    /// dim(lower) rows × dim(upper) columns.
    matrix: Vec<Vec<CoefJson>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentJson {
    target: String,
    /// dim(target) rows × dim(left)·dim(right) columns; the column for basis
    /// pair (i, j) is i·dim(right) + j.
    matrix: Vec<Vec<CoefJson>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductJson {
    left: String,
    right: String,
    components: Vec<ComponentJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresheafJson {
    field: String,
    spaces: Vec<SpaceJson>,
    covers: Vec<CoverMapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    products: Option<Vec<ProductJson>>,
}

/// A presheaf read from JSON, with or without product data.
pub enum PresheafData<F: Field> {
    Plain(Presheaf<F>),
    Monoidal(MonoidalPresheaf<F>),
}

/// Read a presheaf over an already-parsed poset. Elements are referenced by
/// label (labels must be unique); elements without a `spaces` entry carry the
/// zero space; every cover pair of the poset needs a restriction matrix.
pub fn presheaf_from_json<F: Field>(s: &str, poset: &RankedPoset) -> Result<PresheafData<F>> {
    let j: PresheafJson = parse(s)?;
    check_field_tag::<F>(&j.field)?;
    let n = poset.len();
    let mut by_label: HashMap<&str, usize> = HashMap::new();
    for i in 0..n {
        if by_label.insert(poset.label(i), i).is_some() {
            return Err(bad(format!(
                "poset label {:?} is not unique; presheaf files reference elements by label",
                poset.label(i)
            )));
        }
    }
    let resolve = |l: &str| -> Result<usize> {
        by_label.get(l).copied().ok_or_else(|| bad(format!("unknown poset element {l:?}")))
    };

    let mut spaces = vec![GradedSpace::empty(); n];
    let mut seen = vec![false; n];
    for sp in &j.spaces {
        let e = resolve(&sp.element)?;
        if seen[e] {
            return Err(bad(format!("element {:?} has two spaces", sp.element)));
        }
        seen[e] = true;
        spaces[e] = GradedSpace::from_dims(&sp.dims);
    }

    let mut cover_maps = HashMap::new();
    for c in &j.covers {
        let up = resolve(&c.upper)?;
        let lo = resolve(&c.lower)?;
        let mat =
            matrix_from::<F>(&c.matrix, spaces[lo].total_dim(), spaces[up].total_dim())?;
        if cover_maps.insert((up, lo), mat).is_some() {
            return Err(bad(format!("duplicate cover map {:?} :> {:?}", c.upper, c.lower)));
        }
    }

    let lgp = LocallyGeometricPoset::new(poset.clone())?;
    let base = Presheaf::new(lgp, spaces, cover_maps)?;
    match &j.products {
        None => Ok(PresheafData::Plain(base)),
        Some(prods) => {
            let mut products: ProductMaps<F> = HashMap::new();
            for p in prods {
                let l = resolve(&p.left)?;
                let r = resolve(&p.right)?;
                let cols = base.space(l).total_dim() * base.space(r).total_dim();
                let mut comps = Vec::new();
                for comp in &p.components {
                    let t = resolve(&comp.target)?;
                    comps.push((t, matrix_from::<F>(&comp.matrix, base.space(t).total_dim(), cols)?));
                }
                if products.insert((l, r), comps).is_some() {
                    return Err(bad(format!(
                        "duplicate product entry for ({:?}, {:?})",
                        p.left, p.right
                    )));
                }
            }
            Ok(PresheafData::Monoidal(MonoidalPresheaf::new(base, products)?))
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomial strings
// ---------------------------------------------------------------------------

/// Canonical text form: terms by s-exponent descending, then t-exponent
/// descending; explicit signs; caret exponents; exponent 1 bare; unit
/// coefficients omitted next to a variable.
pub fn poly_string(p: &LaurentPoly2) -> String {
    let mut terms: Vec<((i64, i64), BigInt)> =
        p.terms().map(|(k, c)| (k, c.clone())).collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    if terms.is_empty() {
        return "0".into();
    }
    let var = |name: &str, e: i64| -> String {
        match e {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{e}"),
        }
    };
    let mut out = String::new();
    for (idx, ((s, t), c)) in terms.iter().enumerate() {
        let negative = c.is_negative();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = format!("{}{}", var("s", *s), var("t", *t));
        let abs = c.abs();
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if abs != BigInt::from(1) {
                out.push_str(&abs.to_string());
            }
            out.push_str(&mono);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Homology-page reports
// ---------------------------------------------------------------------------

/// Serialize a homology page: dimensions per (column, row), the Poincaré
/// polynomial in total degree, optional weights, the degeneration flag, and
/// the product table when one was computed.
pub fn page_to_json<F: Field>(page: &E2Page<F>) -> String {
    let dims: Vec<Value> = page
        .dims
        .iter()
        .map(|(&(col, row), &d)| json!({"col": col, "row": row, "dim": d}))
        .collect();
    let mut obj = json!({
        "dims": dims,
        "poincare": poly_string(&page.poincare()),
        "collapse": page.collapse.to_string(),
    });
    if let Some(w) = &page.weights {
        obj["weights"] = Value::Array(
            w.iter()
                .map(|(&(col, row), &wt)| json!({"col": col, "row": row, "weight": wt}))
                .collect(),
        );
    }
    if let Some(table) = &page.product_table {
        obj["product_table"] = Value::Array(
            table
                .iter()
                .map(|(&((lc, lr), li, (rc, rr), ri), coeffs)| {
                    json!({
                        "left": {"col": lc, "row": lr, "index": li},
                        "right": {"col": rc, "row": rr, "index": ri},
                        "target": {"col": lc + rc, "row": lr + rr},
                        "coeffs": coeffs.iter().map(coef_to).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        );
    }
    serde_json::to_string_pretty(&obj).expect("page serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::betti_projective;
    use crate::field::GF2;
    use crate::graph::chromatic_poly_dc;
    use crate::oscomplex::OSComplex;

    #[test]
    fn graph_round_trip_and_edge_order() {
        let g = SimpleGraph::complete(4);
        let back = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(back.num_vertices(), 4);
        assert_eq!(back.edges(), g.edges());
        assert!(graph_from_json(r#"{"vertices": 3, "edges": [[2, 1]]}"#).is_err());
        assert!(graph_from_json(r#"{"vertices": 3, "edges": [[1, 1]]}"#).is_err());
        assert!(graph_from_json(r#"{"vertices": 2, "edges": [[0, 5]]}"#).is_err());
    }

    #[test]
    fn poset_round_trip() {
        let src = r#"{
            "elements": ["top", "a", "bottom", "b"],
            "ranks": [2, 1, 0, 1],
            "covers": [[2, 1], [2, 3], [1, 0], [3, 0]]
        }"#;
        let p = poset_from_json(src).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.label(0), "bottom");
        let q = poset_from_json(&poset_to_json(&p)).unwrap();
        assert_eq!(q.labels(), p.labels());
        assert_eq!(q.covers(), p.covers());
    }

    #[test]
    fn arrangement_round_trip_with_fractions() {
        let src = r#"{"dim": 2, "normals": [[1, 0], ["1/2", "-1/3"]]}"#;
        let a = arrangement_from_json(src).unwrap();
        assert_eq!(a.num_hyperplanes(), 2);
        let b = arrangement_from_json(&arrangement_to_json(&a)).unwrap();
        assert_eq!(b.normals(), a.normals());
    }

    #[test]
    fn manifold_round_trips_preserve_everything() {
        let cases_q =
            [ManifoldData::<Rat>::cp1(), ManifoldData::<Rat>::elliptic(), ManifoldData::<Rat>::circle()];
        for m in cases_q {
            let back = manifold_from_json::<Rat>(&manifold_to_json(&m)).unwrap();
            assert_eq!(back.real_dim, m.real_dim);
            assert_eq!(back.basis_degs, m.basis_degs);
            assert_eq!(back.cup_table, m.cup_table);
            assert_eq!(back.diagonal, m.diagonal);
            assert_eq!(back.diagonal_known, m.diagonal_known);
            assert_eq!(back.projective_complex, m.projective_complex);
        }
        let m = ManifoldData::<GF2>::s1_x_r();
        let back = manifold_from_json::<GF2>(&manifold_to_json(&m)).unwrap();
        assert_eq!(back.cup_table, m.cup_table);
        assert!(back.zero_diagonal());
    }

    #[test]
    fn manifold_reader_resolves_names_and_fills_commuted_products() {
        let src = r#"{
            "name": "torus",
            "real_dim": 2,
            "field": "Q",
            "betti": [1, 2, 1],
            "basis": [{"name": "1", "deg": 0}, {"name": "a", "deg": 1},
                      {"name": "b", "deg": 1}, {"name": "ab", "deg": 2}],
            "cup": [{"i": "a", "j": "b", "out": [[1, "ab"]]}],
            "diagonal_class": [[1, "1", "ab"], [1, "ab", "1"],
                               [-1, "a", "b"], [1, "b", "a"]],
            "zero_diagonal": false,
            "projective_complex": false
        }"#;
        let m = manifold_from_json::<Rat>(src).unwrap();
        assert_eq!(m.name, "torus");
        // b·a was filled as (−1)^{1·1} a·b
        assert_eq!(m.cup_table[2][1][3], Rat::from_int(-1));
        assert_eq!(m.euler_char(), 0);
    }

    #[test]
    fn manifold_reader_rejects_bad_files() {
        let base = r#"{
            "real_dim": 1, "field": "Q", "betti": [1, 1],
            "basis": [{"name": "1", "deg": 0}, {"name": "x", "deg": 1}],
            "zero_diagonal": false, "projective_complex": false
        }"#;
        assert!(manifold_from_json::<Rat>(base).is_ok());
        // wrong field tag
        assert!(manifold_from_json::<GF2>(base).is_err());
        // betti inconsistent with the basis
        let bad_betti = base.replace("\"betti\": [1, 1]", "\"betti\": [1, 2]");
        assert!(manifold_from_json::<Rat>(&bad_betti).is_err());
        // zero_diagonal flag contradicting a provided nonzero class
        let contradiction = base.replace(
            "\"zero_diagonal\": false",
            "\"diagonal_class\": [[1, 0, 1]], \"zero_diagonal\": true",
        );
        assert!(manifold_from_json::<Rat>(&contradiction).is_err());
    }

    #[test]
    fn presheaf_reader_builds_a_skyscraper_with_an_empty_space() {
        let poset = poset_from_json(
            r#"{"elements": ["a", "b"], "ranks": [0, 1], "covers": [[0, 1]]}"#,
        )
        .unwrap();
        let src = r#"{
            "field": "Q",
            "spaces": [{"element": "b", "dims": [[0, 1]]}],
            "covers": [{"upper": "b", "lower": "a", "matrix": []}]
        }"#;
        let PresheafData::Plain(ps) = presheaf_from_json::<Rat>(src, &poset).unwrap() else {
            panic!("no products were given");
        };
        assert_eq!(ps.space(0).total_dim(), 0);
        let complex = OSComplex::build(&ps).unwrap();
        let page = complex.homology();
        // one cell at column −1 from the top element, nothing else survives
        assert_eq!(page.total_dim(), 1);
    }

    #[test]
    fn presheaf_reader_accepts_products() {
        let poset =
            poset_from_json(r#"{"elements": ["pt"], "ranks": [0], "covers": []}"#).unwrap();
        let src = r#"{
            "field": "GF2",
            "spaces": [{"element": "pt", "dims": [[0, 1]]}],
            "covers": [],
            "products": [{"left": "pt", "right": "pt",
                          "components": [{"target": "pt", "matrix": [[1]]}]}]
        }"#;
        let PresheafData::Monoidal(mp) = presheaf_from_json::<GF2>(src, &poset).unwrap() else {
            panic!("products were given");
        };
        let complex = OSComplex::build_monoidal(&mp).unwrap();
        let page = complex.e2_ring().unwrap();
        assert_eq!(page.dims, std::collections::BTreeMap::from([((0, 0), 1)]));
        assert!(page.product_table.is_some());
    }

    #[test]
    fn polynomial_strings_use_the_canonical_order() {
        let chi = chromatic_poly_dc(&SimpleGraph::complete(3));
        assert_eq!(poly_string(&chi), "t^3 - 3t^2 + 2t");

        let mut p = LaurentPoly2::zero();
        p.add_term(0, 0, 1.into());
        p.add_term(-1, 2, 3.into());
        p.add_term(-2, 4, 2.into());
        assert_eq!(poly_string(&p), "1 + 3s^-1t^2 + 2s^-2t^4");

        assert_eq!(poly_string(&LaurentPoly2::zero()), "0");

        let mut q = LaurentPoly2::zero();
        q.add_term(1, 0, (-1).into());
        q.add_term(0, 0, 5.into());
        assert_eq!(poly_string(&q), "-s + 5");

        let mut r = LaurentPoly2::zero();
        r.add_term(0, 1, 1.into());
        r.add_term(0, 0, (-1).into());
        assert_eq!(poly_string(&r), "t - 1");
    }

    #[test]
    fn page_report_carries_dims_weights_and_flag() {
        let page =
            betti_projective(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(2)).unwrap();
        let v: Value = serde_json::from_str(&page_to_json(&page)).unwrap();
        assert_eq!(v["collapse"], "guaranteed");
        assert_eq!(v["poincare"], "t^2 + 1");
        assert_eq!(v["dims"].as_array().unwrap().len(), 2);
        assert!(v["weights"].as_array().unwrap().iter().any(|w| w["weight"] == 2));
        assert!(v["product_table"].as_array().is_some());
    }
}
