//! The cochain complex of a graded presheaf on a locally geometric poset.
//!
//! For each element `p`, the block at `p` is the top grade of the
//! Orlik–Solomon algebra of the lower interval `[0̂, p]`, tensored with the
//! coefficient space `C_p`. A block element `x ⊗ c` sits in bidegree
//! `(−r(p), deg c)`; the differential removes one exterior factor at a time
//! and pushes the coefficient along the restriction map to the cover below,
//! so it maps column `−i` to column `−i + 1` within each row. When the
//! presheaf carries products, the complex is a bigraded algebra: the product
//! of `x ⊗ c₁` at `p` and `y ⊗ c₂` at `q` is
//! `(−1)^{deg(c₁)·r(q)} Σ_s (x·y in [0̂,s]) ⊗ (c₁·c₂)_s` over the minimal
//! upper bounds `s` of `p` and `q`.
//!
//! Homology is taken per bidegree over the exact scalar field and returned
//! as an [`E2Page`]: dimensions, deterministic cycle representatives and —
//! for a presheaf with products — the induced ring structure on
//! representatives, which feeds the column-generation test behind the
//! [`dg1_generation_check`] degeneration criterion.

use crate::field::Field;
use crate::matrix::{complete_basis, Matrix, RowSpace};
use crate::osalg::{build_os, OSAlgebra, OSElement, OSMonomial};
use crate::poly::LaurentPoly2;
use crate::poset::LocallyGeometricPoset;
use crate::presheaf::{sign_of, MonoidalPresheaf, Presheaf};
use crate::{Error, Result};
use num::BigInt;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// `(column, row)`: column = −rank of the poset element, row = coefficient
/// degree.
pub type Bidegree = (i64, i64);

/// Position of one basis vector: `(element, monomial index within the
/// element's top-grade basis, coefficient index within C_element)`.
pub type BasisKey = (usize, usize, usize);

/// A finitely supported scalar combination of basis vectors.
pub type Chain<F> = BTreeMap<BasisKey, F>;

/// Product table on homology representatives: `(cell₁, rep₁, cell₂, rep₂)`
/// maps to the representative coordinates of the product in the cell at the
/// componentwise bidegree sum. Zero products are absent.
pub type ProductTable<F> = BTreeMap<(Bidegree, usize, Bidegree, usize), Vec<F>>;

fn chain_add<F: Field>(chain: &mut Chain<F>, key: BasisKey, v: F) {
    if v.is_zero() {
        return;
    }
    match chain.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&v);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Per-element data: the Orlik–Solomon algebra of the lower interval and
/// the dictionaries between its atom positions and the ambient poset.
struct ElementAlgebra {
    alg: OSAlgebra,
    /// Index of the element inside its own interval (the interval maximum).
    top: usize,
    /// Atom position in `alg` → ambient poset element.
    atom_global: Vec<usize>,
    /// Ambient poset element → atom position in `alg`.
    atom_pos: HashMap<usize, usize>,
}

/// How confidently the homology page describes the cohomology it models:
/// `Guaranteed` by the construction, `Detected` by the column-generation
/// test, or `Unknown`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapseFlag {
    Guaranteed,
    Detected,
    Unknown,
}

impl fmt::Display for CollapseFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CollapseFlag::Guaranteed => "guaranteed",
            CollapseFlag::Detected => "detected",
            CollapseFlag::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// Homology of an [`OSComplex`], per bidegree, with optional ring structure.
#[derive(Clone, Debug)]
pub struct E2Page<F: Field> {
    /// Nonzero homology dimensions per bidegree.
    pub dims: BTreeMap<Bidegree, usize>,
    /// Cycle representatives per bidegree, as vectors over the cell basis;
    /// chosen deterministically (kernel vectors kept in order modulo the
    /// boundary image).
    pub reps: BTreeMap<Bidegree, Vec<Vec<F>>>,
    /// Ring structure constants on representatives, if computed.
    pub product_table: Option<ProductTable<F>>,
    /// Weight labels per bidegree (set by pipelines that track them).
    pub weights: Option<BTreeMap<Bidegree, i64>>,
    pub collapse: CollapseFlag,
}

impl<F: Field> E2Page<F> {
    pub fn dim(&self, cell: Bidegree) -> usize {
        self.dims.get(&cell).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Poincaré polynomial in `t`, graded by total degree (column + row).
    pub fn poincare(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::zero();
        for (&(col, row), &d) in &self.dims {
            p.add_term(0, col + row, BigInt::from(d as i64));
        }
        p
    }

    /// Dimensions by total degree (column + row).
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(col, row), &d) in &self.dims {
            *out.entry(col + row).or_insert(0) += d;
        }
        out
    }

    /// Alternating sum of dimensions over the total degree.
    pub fn euler_char(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&(col, row), &d)| if (col + row).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Label every bidegree with its row (the coefficient degree).
    pub fn set_row_weights(&mut self) {
        self.weights = Some(self.dims.keys().map(|&(c, r)| ((c, r), r)).collect());
    }

    /// Bilinear product of representative-coordinate vectors through the
    /// stored table. Returns the target bidegree and coordinates there.
    pub fn table_mul(
        &self,
        ca: Bidegree,
        va: &[F],
        cb: Bidegree,
        vb: &[F],
    ) -> Result<(Bidegree, Vec<F>)> {
        let table = self
            .product_table
            .as_ref()
            .ok_or_else(|| Error::Presheaf("this homology page has no product table".into()))?;
        let target = (ca.0 + cb.0, ca.1 + cb.1);
        let mut out = vec![F::zero(); self.dim(target)];
        for (ia, xa) in va.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (ib, xb) in vb.iter().enumerate() {
                if xb.is_zero() {
                    continue;
                }
                if let Some(coords) = table.get(&(ca, ia, cb, ib)) {
                    let w = xa.mul(xb);
                    for (k, c) in coords.iter().enumerate() {
                        out[k] = out[k].add(&w.mul(c));
                    }
                }
            }
        }
        Ok((target, out))
    }
}

/// Result of the exhaustive product-rule check on the differential.
#[derive(Clone, Debug)]
pub struct LeibnizReport {
    pub pairs_checked: usize,
    /// A violating pair of basis elements, if any.
    pub failure: Option<String>,
}

impl LeibnizReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Inclusion of the complex over a lower interval into the ambient complex,
/// expressed on homology.
#[derive(Clone, Debug)]
pub struct SubInclusion<F: Field> {
    /// Homology page of the complex restricted to the interval.
    pub sub_page: E2Page<F>,
    /// Per bidegree: matrix from sub-page representative coordinates to
    /// ambient representative coordinates.
    pub matrices: BTreeMap<Bidegree, Matrix<F>>,
    /// Interval element index → ambient element index.
    pub to_global: Vec<usize>,
}

/// The bigraded complex of a presheaf on a locally geometric poset.
pub struct OSComplex<F: Field> {
    presheaf: Presheaf<F>,
    monoidal: Option<MonoidalPresheaf<F>>,
    /// Interval algebras for every element with a nonzero coefficient space.
    elems: HashMap<usize, ElementAlgebra>,
    /// Basis per bidegree, ordered by (element, monomial, coefficient).
    cells: BTreeMap<Bidegree, Vec<BasisKey>>,
    /// Basis key → position within its cell.
    positions: HashMap<BasisKey, usize>,
    /// Differential out of each cell, into the cell one column to the right.
    diffs: BTreeMap<Bidegree, Matrix<F>>,
}

impl<F: Field> OSComplex<F> {
    /// Build the complex of a plain presheaf. Validates functoriality of the
    /// restriction maps and checks that the assembled differential squares
    /// to zero.
    pub fn build(presheaf: &Presheaf<F>) -> Result<Self> {
        Self::assemble(presheaf.clone(), None)
    }

    /// Build the complex of a presheaf with products; enables
    /// multiplication, the product-rule check, and the homology ring.
    pub fn build_monoidal(monoidal: &MonoidalPresheaf<F>) -> Result<Self> {
        Self::assemble(monoidal.base().clone(), Some(monoidal.clone()))
    }

    fn assemble(presheaf: Presheaf<F>, monoidal: Option<MonoidalPresheaf<F>>) -> Result<Self> {
        presheaf.validate_functorial().map_err(Error::Presheaf)?;
        let mut elems = HashMap::new();
        for p in 0..presheaf.poset().len() {
            if presheaf.space(p).total_dim() == 0 {
                continue;
            }
            let interval = presheaf.poset().interval_lattice(p);
            let alg = build_os(&interval.lattice)?;
            let top = interval.from_global(p).ok_or_else(|| {
                Error::Presheaf(format!("internal: element {p} missing from its own interval"))
            })?;
            let atom_global: Vec<usize> = (0..alg.atom_count())
                .map(|a| interval.to_global[alg.atom_element(a)])
                .collect();
            let atom_pos =
                atom_global.iter().enumerate().map(|(pos, &g)| (g, pos)).collect();
            elems.insert(p, ElementAlgebra { alg, top, atom_global, atom_pos });
        }

        let mut cells: BTreeMap<Bidegree, Vec<BasisKey>> = BTreeMap::new();
        for p in 0..presheaf.poset().len() {
            let Some(ea) = elems.get(&p) else { continue };
            let col = -(presheaf.poset().poset().rank(p) as i64);
            let space = presheaf.space(p);
            for m in 0..ea.alg.dim(ea.top) {
                for c in 0..space.total_dim() {
                    let row = space.degree_of(c) as i64;
                    cells.entry((col, row)).or_default().push((p, m, c));
                }
            }
        }
        let mut positions = HashMap::new();
        for keys in cells.values() {
            for (i, &k) in keys.iter().enumerate() {
                positions.insert(k, i);
            }
        }

        let mut complex =
            OSComplex { presheaf, monoidal, elems, cells, positions, diffs: BTreeMap::new() };
        let mut diffs = BTreeMap::new();
        for (&cell, keys) in &complex.cells {
            let target = (cell.0 + 1, cell.1);
            let trows = complex.cells.get(&target).map_or(0, Vec::len);
            let mut mat = Matrix::zero(trows, keys.len());
            for (ci, &key) in keys.iter().enumerate() {
                for (tkey, v) in complex.basis_boundary(key) {
                    mat.set(complex.positions[&tkey], ci, v);
                }
            }
            diffs.insert(cell, mat);
        }
        complex.diffs = diffs;

        for (&cell, m1) in &complex.diffs {
            if let Some(m2) = complex.diffs.get(&(cell.0 + 1, cell.1)) {
                if m2.rows() > 0 && !m2.mul_mat(m1).is_zero() {
                    return Err(Error::Presheaf(format!(
                        "differential does not square to zero from bidegree ({}, {})",
                        cell.0, cell.1
                    )));
                }
            }
        }
        Ok(complex)
    }

    pub fn presheaf(&self) -> &Presheaf<F> {
        &self.presheaf
    }

    pub fn monoidal(&self) -> Option<&MonoidalPresheaf<F>> {
        self.monoidal.as_ref()
    }

    pub fn poset(&self) -> &LocallyGeometricPoset {
        self.presheaf.poset()
    }

    /// The interval algebra at `p`, if the block there is nonzero.
    pub fn os_algebra(&self, p: usize) -> Option<&OSAlgebra> {
        self.elems.get(&p).map(|ea| &ea.alg)
    }

    pub fn cells(&self) -> &BTreeMap<Bidegree, Vec<BasisKey>> {
        &self.cells
    }

    pub fn cell_basis(&self, cell: Bidegree) -> &[BasisKey] {
        self.cells.get(&cell).map_or(&[], Vec::as_slice)
    }

    pub fn cell_dims(&self) -> BTreeMap<Bidegree, usize> {
        self.cells.iter().map(|(&c, keys)| (c, keys.len())).collect()
    }

    /// Block dimensions as a polynomial: `s^column · t^row` per basis vector.
    pub fn dims_poly(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::zero();
        for (&(col, row), keys) in &self.cells {
            p.add_term(col, row, BigInt::from(keys.len() as i64));
        }
        p
    }

    /// The differential out of `cell`, mapping into `(cell.0 + 1, cell.1)`.
    pub fn differential(&self, cell: Bidegree) -> Option<&Matrix<F>> {
        self.diffs.get(&cell)
    }

    /// Bidegree of a basis key.
    pub fn key_bidegree(&self, key: BasisKey) -> Bidegree {
        let (p, _, c) = key;
        (
            -(self.presheaf.poset().poset().rank(p) as i64),
            self.presheaf.space(p).degree_of(c) as i64,
        )
    }

    /// Ambient poset elements of the atoms of a block-basis monomial.
    pub fn key_atoms(&self, p: usize, mono_idx: usize) -> Vec<usize> {
        let ea = &self.elems[&p];
        ea.alg.basis(ea.top)[mono_idx].iter().map(|&a| ea.atom_global[a]).collect()
    }

    /// Position within the block basis at `p` of the monomial with the given
    /// ambient atom elements.
    pub fn mono_index_from_atoms(&self, p: usize, atoms: &[usize]) -> Result<usize> {
        let ea = self
            .elems
            .get(&p)
            .ok_or_else(|| Error::Presheaf(format!("element {p} has an empty block")))?;
        let mono = Self::positions_of(ea, atoms)?;
        ea.alg.basis_position(&mono).ok_or_else(|| {
            Error::Presheaf(format!("monomial {atoms:?} is not basic in the block at {p}"))
        })
    }

    pub fn key_label(&self, key: BasisKey) -> String {
        let (p, m, c) = key;
        let po = self.presheaf.poset().poset();
        let atoms = self.key_atoms(p, m);
        let os_part = if atoms.is_empty() {
            "1".to_string()
        } else {
            atoms.iter().map(|&g| format!("e({})", po.label(g))).collect::<Vec<_>>().join("")
        };
        format!("{}[{}⊗{}]", po.label(p), os_part, self.presheaf.space(p).label(c))
    }

    fn positions_of(ea: &ElementAlgebra, atoms: &[usize]) -> Result<OSMonomial> {
        atoms
            .iter()
            .map(|g| {
                ea.atom_pos.get(g).copied().ok_or_else(|| {
                    Error::Presheaf(format!("atom {g} does not lie below the block element"))
                })
            })
            .collect()
    }

    /// Differential of one basis vector, as a chain in the next column.
    pub fn basis_boundary(&self, key: BasisKey) -> Chain<F> {
        let (p, mi, c) = key;
        let ea = &self.elems[&p];
        let mono = ea.alg.basis(ea.top)[mi].clone();
        let bnd: OSElement<F> = ea.alg.boundary_monomial(&mono);
        let interval = self.presheaf.poset().interval_lattice(p);
        let mut out = Chain::new();
        for (tm, tcoef) in &bnd.terms {
            let q = interval.to_global[ea.alg.monomial_join(tm)];
            if self.presheaf.space(q).total_dim() == 0 {
                continue;
            }
            let atoms: Vec<usize> = tm.iter().map(|&a| ea.atom_global[a]).collect();
            let pos = self
                .mono_index_from_atoms(q, &atoms)
                .expect("boundary term is basic in the target block");
            let f = self.presheaf.cover_map(p, q);
            for r in 0..f.rows() {
                let v = f.get(r, c);
                if !v.is_zero() {
                    chain_add(&mut out, (q, pos, r), tcoef.mul(v));
                }
            }
        }
        out
    }

    /// Differential of a chain.
    pub fn chain_boundary(&self, x: &Chain<F>) -> Chain<F> {
        let mut out = Chain::new();
        for (&k, v) in x {
            for (tk, tv) in self.basis_boundary(k) {
                chain_add(&mut out, tk, tv.mul(v));
            }
        }
        out
    }

    /// Product of two basis vectors. Requires product data on the presheaf.
    pub fn multiply_keys(&self, a: BasisKey, b: BasisKey) -> Result<Chain<F>> {
        let mp = self.monoidal.as_ref().ok_or_else(|| {
            Error::Presheaf("the coefficient presheaf carries no product data".into())
        })?;
        let (p, m1, c1) = a;
        let (q, m2, c2) = b;
        let sign = sign_of::<F>(
            self.presheaf.space(p).degree_of(c1) * self.presheaf.poset().poset().rank(q),
        );
        let atoms1 = self.key_atoms(p, m1);
        let atoms2 = self.key_atoms(q, m2);
        let mut out = Chain::new();
        for (s, coefs) in mp.product_basis(p, c1, q, c2) {
            let Some(es) = self.elems.get(&s) else { continue };
            let lm1 = Self::positions_of(es, &atoms1)?;
            let lm2 = Self::positions_of(es, &atoms2)?;
            let prod: OSElement<F> = es.alg.mul_monomials(&lm1, &lm2);
            for (tm, tc) in &prod.terms {
                debug_assert_eq!(es.alg.monomial_join(tm), es.top);
                let pos = es.alg.basis_position(tm).expect("product term is basic");
                for (r, cv) in coefs.iter().enumerate() {
                    if !cv.is_zero() {
                        chain_add(&mut out, (s, pos, r), sign.mul(tc).mul(cv));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bilinear product of two chains.
    pub fn multiply_chains(&self, a: &Chain<F>, b: &Chain<F>) -> Result<Chain<F>> {
        let mut out = Chain::new();
        for (&ka, va) in a {
            for (&kb, vb) in b {
                let w = va.mul(vb);
                for (k, v) in self.multiply_keys(ka, kb)? {
                    chain_add(&mut out, k, v.mul(&w));
                }
            }
        }
        Ok(out)
    }

    /// Chain with the given coordinates over a cell basis.
    pub fn chain_from_cell(&self, cell: Bidegree, v: &[F]) -> Chain<F> {
        let keys = self.cell_basis(cell);
        assert_eq!(keys.len(), v.len(), "vector length does not match the cell basis");
        keys.iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&k, c)| (k, c.clone()))
            .collect()
    }

    /// Coordinates of a chain supported on one cell; errors if any term lies
    /// elsewhere.
    pub fn cell_from_chain(&self, cell: Bidegree, chain: &Chain<F>) -> Result<Vec<F>> {
        let keys = self.cell_basis(cell);
        let mut v = vec![F::zero(); keys.len()];
        for (&k, c) in chain {
            if self.key_bidegree(k) != cell {
                return Err(Error::Presheaf(format!(
                    "chain term {} lies outside bidegree ({}, {})",
                    self.key_label(k),
                    cell.0,
                    cell.1
                )));
            }
            v[self.positions[&k]] = c.clone();
        }
        Ok(v)
    }

    /// Product of two cell vectors; the result lives at the componentwise
    /// bidegree sum.
    pub fn multiply_cells(
        &self,
        ca: Bidegree,
        va: &[F],
        cb: Bidegree,
        vb: &[F],
    ) -> Result<(Bidegree, Vec<F>)> {
        let target = (ca.0 + cb.0, ca.1 + cb.1);
        let chain =
            self.multiply_chains(&self.chain_from_cell(ca, va), &self.chain_from_cell(cb, vb))?;
        Ok((target, self.cell_from_chain(target, &chain)?))
    }

    fn incoming_image(&self, cell: Bidegree) -> Vec<Vec<F>> {
        match self.diffs.get(&(cell.0 - 1, cell.1)) {
            Some(m) => (0..m.cols())
                .map(|c| m.col(c))
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Homology per bidegree: dimension = dim ker − rank of the incoming
    /// differential; representatives are the kernel-basis vectors kept, in
    /// order, modulo the boundary image.
    pub fn homology(&self) -> E2Page<F> {
        let mut dims = BTreeMap::new();
        let mut reps = BTreeMap::new();
        for (&cell, keys) in &self.cells {
            let kernel = self.diffs[&cell].kernel_basis();
            let image = self.incoming_image(cell);
            let rep_vecs = complete_basis(keys.len(), &image, &kernel);
            if !rep_vecs.is_empty() {
                dims.insert(cell, rep_vecs.len());
                reps.insert(cell, rep_vecs);
            }
        }
        E2Page {
            dims,
            reps,
            product_table: None,
            weights: None,
            collapse: CollapseFlag::Unknown,
        }
    }

    /// Coordinates of a cycle at `cell` in the page's representatives,
    /// modulo boundaries. Errors if the vector is not a cycle-plus-boundary
    /// combination (i.e. the page does not belong to this complex).
    pub fn reduce_to_reps(&self, cell: Bidegree, v: &[F], page: &E2Page<F>) -> Result<Vec<F>> {
        let image = self.incoming_image(cell);
        let reps = page.reps.get(&cell).map_or(&[][..], Vec::as_slice);
        if image.is_empty() && reps.is_empty() {
            return if v.iter().all(F::is_zero) {
                Ok(Vec::new())
            } else {
                Err(Error::Presheaf(format!(
                    "nonzero vector at bidegree ({}, {}) where homology and boundaries vanish",
                    cell.0, cell.1
                )))
            };
        }
        let n = v.len();
        let mut mat = Matrix::zero(n, image.len() + reps.len());
        for (j, col) in image.iter().chain(reps.iter()).enumerate() {
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    mat.set(i, j, x.clone());
                }
            }
        }
        let sol = mat.solve(v).ok_or_else(|| {
            Error::Presheaf(format!(
                "vector at bidegree ({}, {}) is not a combination of boundaries and representatives",
                cell.0, cell.1
            ))
        })?;
        Ok(sol[image.len()..].to_vec())
    }

    /// Homology with the induced ring structure on representatives. Verifies
    /// that the table is closed (products of cycles reduce against
    /// boundaries) and associative.
    pub fn e2_ring(&self) -> Result<E2Page<F>> {
        if self.monoidal.is_none() {
            return Err(Error::Presheaf(
                "the coefficient presheaf carries no product data".into(),
            ));
        }
        let mut page = self.homology();
        let mut table: ProductTable<F> = BTreeMap::new();
        let cells: Vec<(Bidegree, usize)> = page.dims.iter().map(|(&c, &d)| (c, d)).collect();
        for &(ca, da) in &cells {
            for ia in 0..da {
                for &(cb, db) in &cells {
                    for ib in 0..db {
                        let (target, v) = self.multiply_cells(
                            ca,
                            &page.reps[&ca][ia],
                            cb,
                            &page.reps[&cb][ib],
                        )?;
                        if v.iter().all(F::is_zero) {
                            continue;
                        }
                        let coords = self.reduce_to_reps(target, &v, &page)?;
                        if coords.iter().any(|x| !x.is_zero()) {
                            table.insert((ca, ia, cb, ib), coords);
                        }
                    }
                }
            }
        }
        page.product_table = Some(table);
        self.verify_table_associative(&page)?;
        Ok(page)
    }

    fn verify_table_associative(&self, page: &E2Page<F>) -> Result<()> {
        let classes: Vec<(Bidegree, usize, usize)> = page
            .dims
            .iter()
            .flat_map(|(&c, &d)| (0..d).map(move |i| (c, d, i)))
            .collect();
        let unit = |d: usize, i: usize| {
            let mut v = vec![F::zero(); d];
            v[i] = F::one();
            v
        };
        for &(ca, da, ia) in &classes {
            let va = unit(da, ia);
            for &(cb, db, ib) in &classes {
                let vb = unit(db, ib);
                let (cab, vab) = page.table_mul(ca, &va, cb, &vb)?;
                for &(cc, dc, ic) in &classes {
                    let vc = unit(dc, ic);
                    let (_, left) = page.table_mul(cab, &vab, cc, &vc)?;
                    let (cbc, vbc) = page.table_mul(cb, &vb, cc, &vc)?;
                    let (_, right) = page.table_mul(ca, &va, cbc, &vbc)?;
                    if left != right {
                        return Err(Error::Presheaf(format!(
                            "homology product is not associative at classes \
                             ({},{})#{ia}, ({},{})#{ib}, ({},{})#{ic}",
                            ca.0, ca.1, cb.0, cb.1, cc.0, cc.1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exhaustive check of the product rule
    /// `∂(αβ) = ∂(α)β + (−1)^{deg(c₁) − r(p)} α ∂(β)` over all basis pairs.
    pub fn leibniz_check(&self) -> Result<LeibnizReport> {
        if self.monoidal.is_none() {
            return Err(Error::Presheaf(
                "the coefficient presheaf carries no product data".into(),
            ));
        }
        let keys: Vec<BasisKey> = self.cells.values().flatten().copied().collect();
        let boundaries: Vec<Chain<F>> =
            keys.iter().map(|&k| self.basis_boundary(k)).collect();
        let mut pairs = 0usize;
        for (i, &a) in keys.iter().enumerate() {
            let ca: Chain<F> = std::iter::once((a, F::one())).collect();
            let sgn = sign_of::<F>(
                self.presheaf.space(a.0).degree_of(a.2)
                    + self.presheaf.poset().poset().rank(a.0),
            );
            for (j, &b) in keys.iter().enumerate() {
                pairs += 1;
                let cb: Chain<F> = std::iter::once((b, F::one())).collect();
                let lhs = self.chain_boundary(&self.multiply_keys(a, b)?);
                let mut rhs = self.multiply_chains(&boundaries[i], &cb)?;
                for (k, v) in self.multiply_chains(&ca, &boundaries[j])? {
                    chain_add(&mut rhs, k, v.mul(&sgn));
                }
                if lhs != rhs {
                    return Ok(LeibnizReport {
                        pairs_checked: pairs,
                        failure: Some(format!(
                            "product rule fails for α = {}, β = {}",
                            self.key_label(a),
                            self.key_label(b)
                        )),
                    });
                }
            }
        }
        Ok(LeibnizReport { pairs_checked: pairs, failure: None })
    }

    /// The complex over the lower interval `[0̂, top]`, its homology page,
    /// and the map induced on homology by inclusion into this complex.
    pub fn subinclusion_e2(&self, top: usize, ambient: &E2Page<F>) -> Result<SubInclusion<F>> {
        let (sub_complex, to_global, sub_page) = if let Some(mp) = &self.monoidal {
            let (m, tg) = mp.restrict(top)?;
            let k = OSComplex::build_monoidal(&m)?;
            let pg = k.e2_ring()?;
            (k, tg, pg)
        } else {
            let (pre, tg) = self.presheaf.restrict(top)?;
            let k = OSComplex::build(&pre)?;
            let pg = k.homology();
            (k, tg, pg)
        };
        let mut matrices = BTreeMap::new();
        for (&cell, rvecs) in &sub_page.reps {
            let tdim = ambient.dim(cell);
            let mut mat = Matrix::zero(tdim, rvecs.len());
            for (k, rep) in rvecs.iter().enumerate() {
                let mut amb = Chain::new();
                for (&(lp, mi, c), v) in &sub_complex.chain_from_cell(cell, rep) {
                    let atoms: Vec<usize> =
                        sub_complex.key_atoms(lp, mi).iter().map(|&a| to_global[a]).collect();
                    let g = to_global[lp];
                    let ami = self.mono_index_from_atoms(g, &atoms)?;
                    amb.insert((g, ami, c), v.clone());
                }
                let v = self.cell_from_chain(cell, &amb)?;
                let coords = self.reduce_to_reps(cell, &v, ambient)?;
                for (r, cv) in coords.iter().enumerate() {
                    if !cv.is_zero() {
                        mat.set(r, k, cv.clone());
                    }
                }
            }
            matrices.insert(cell, mat);
        }
        Ok(SubInclusion { sub_page, matrices, to_global })
    }
}

/// True iff the subalgebra generated by columns 0 and −1 spans every
/// bidegree of the page. Success certifies that the page carries the full
/// ring (no room for higher corrections). Requires a product table.
pub fn dg1_generation_check<F: Field>(page: &E2Page<F>) -> Result<bool> {
    if page.product_table.is_none() {
        return Err(Error::Presheaf("the degeneration check needs a product table".into()));
    }
    let mut spans: BTreeMap<Bidegree, RowSpace<F>> =
        page.dims.iter().map(|(&c, &d)| (c, RowSpace::new(d))).collect();
    let mut all: Vec<(Bidegree, Vec<F>)> = Vec::new();
    for (&cell, &d) in &page.dims {
        if cell.0 == 0 || cell.0 == -1 {
            for i in 0..d {
                let mut e = vec![F::zero(); d];
                e[i] = F::one();
                if spans.get_mut(&cell).expect("cell present").insert(&e) {
                    all.push((cell, e));
                }
            }
        }
    }
    let mut frontier = 0usize;
    loop {
        let end = all.len();
        if frontier == end {
            break;
        }
        for i in frontier..end {
            for j in 0..end {
                for (x, y) in [(i, j), (j, i)] {
                    let (ca, va) = all[x].clone();
                    let (cb, vb) = all[y].clone();
                    let (t, v) = page.table_mul(ca, &va, cb, &vb)?;
                    if v.iter().any(|c| !c.is_zero()) {
                        if let Some(rs) = spans.get_mut(&t) {
                            if rs.insert(&v) {
                                all.push((t, v));
                            }
                        }
                    }
                }
            }
        }
        frontier = end;
    }
    Ok(page.dims.iter().all(|(c, &d)| spans[c].rank() == d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, GF2};
    use crate::graph::{bond_lattice, SimpleGraph};
    use crate::presheaf::{
        diagonal_presheaf, skyscraper_presheaf, GradedSpace, ManifoldData,
    };

    fn constant_presheaf<F: Field>(lgp: &LocallyGeometricPoset) -> Presheaf<F> {
        let space = GradedSpace::from_dims(&[(0, 1)]);
        let spaces = vec![space; lgp.len()];
        let mut maps = HashMap::new();
        for &(lo, up) in lgp.poset().covers() {
            maps.insert((up, lo), Matrix::<F>::identity(1));
        }
        Presheaf::new(lgp.clone(), spaces, maps).unwrap()
    }

    fn bond_poset(n: usize) -> LocallyGeometricPoset {
        let bond = bond_lattice(&SimpleGraph::complete(n)).unwrap();
        LocallyGeometricPoset::from_lattice(&bond.lattice).unwrap()
    }

    fn dims_of<F: Field>(page: &E2Page<F>) -> BTreeMap<Bidegree, usize> {
        page.dims.clone()
    }

    #[test]
    fn constant_coefficients_are_exact_above_the_bottom() {
        let lgp = bond_poset(3);
        for p in 0..lgp.len() {
            let interval = LocallyGeometricPoset::from_lattice(
                &lgp.interval_lattice(p).lattice,
            )
            .unwrap();
            let complex = OSComplex::build(&constant_presheaf::<Rat>(&interval)).unwrap();
            let page = complex.homology();
            if lgp.poset().rank(p) == 0 {
                assert_eq!(dims_of(&page), BTreeMap::from([((0, 0), 1)]));
            } else {
                assert!(page.dims.is_empty(), "nonzero homology over [0̂, {p}]");
            }
        }
    }

    #[test]
    fn skyscraper_pages_vanish_except_at_the_bottom() {
        let lgp = bond_poset(3);
        let space = GradedSpace::from_dims(&[(0, 1)]);
        for alpha in 0..lgp.len() {
            let complex =
                OSComplex::build(&skyscraper_presheaf::<Rat>(&lgp, alpha, &space)).unwrap();
            let page = complex.homology();
            if alpha == lgp.zero_hat() {
                assert_eq!(dims_of(&page), BTreeMap::from([((0, 0), 1)]));
            } else {
                assert!(page.dims.is_empty(), "skyscraper at {alpha} not exact");
            }
        }
    }

    #[test]
    fn atom_skyscraper_gives_the_identity_differential() {
        let lgp = bond_poset(2);
        let alpha = lgp.poset().maximum().unwrap();
        let space = GradedSpace::from_dims(&[(0, 1)]);
        let complex = OSComplex::build(&skyscraper_presheaf::<Rat>(&lgp, alpha, &space)).unwrap();
        assert_eq!(
            complex.cell_dims(),
            BTreeMap::from([((-1, 0), 1), ((0, 0), 1)])
        );
        assert_eq!(complex.differential((-1, 0)), Some(&Matrix::identity(1)));
        assert!(complex.homology().dims.is_empty());
    }

    #[test]
    fn circle_pair_block_dims_over_gf2() {
        let diag =
            diagonal_presheaf(&ManifoldData::<GF2>::circle(), &SimpleGraph::complete(2)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let mut expected = LaurentPoly2::zero();
        // column 0: (1+t)^2; column −1: t(1+t)
        for (t, c) in [(0, 1), (1, 2), (2, 1)] {
            expected.add_term(0, t, BigInt::from(c));
        }
        for t in [1, 2] {
            expected.add_term(-1, t, BigInt::from(1));
        }
        assert_eq!(complex.dims_poly(), expected);
    }

    #[test]
    fn circle_triple_page_over_the_rationals() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(3)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.homology();
        assert_eq!(
            dims_of(&page),
            BTreeMap::from([((0, 0), 1), ((0, 1), 1), ((-1, 1), 1), ((-1, 2), 1)])
        );
        assert_eq!(page.betti(), BTreeMap::from([(0, 2), (1, 2)]));
    }

    #[test]
    fn sphere_pair_page_over_the_rationals() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(2)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.homology();
        assert_eq!(dims_of(&page), BTreeMap::from([((0, 0), 1), ((0, 2), 1)]));
        let mut expected = LaurentPoly2::zero();
        expected.add_term(0, 0, BigInt::from(1));
        expected.add_term(0, 2, BigInt::from(1));
        assert_eq!(page.poincare(), expected);
    }

    #[test]
    fn circle_pair_block_dims_match_the_two_variable_polynomial() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(2)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        // (1+t)^2 + s^{-1} t (1+t)
        let mut expected = LaurentPoly2::zero();
        for (t, c) in [(0, 1), (1, 2), (2, 1)] {
            expected.add_term(0, t, BigInt::from(c));
        }
        expected.add_term(-1, 1, BigInt::from(1));
        expected.add_term(-1, 2, BigInt::from(1));
        assert_eq!(complex.dims_poly(), expected);
    }

    #[test]
    fn atom_products_land_in_the_top_block() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::real_space(2), &SimpleGraph::complete(3))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let po = complex.poset().poset().clone();
        let top = po.maximum().unwrap();
        let atoms = po.atoms();
        let es = complex.os_algebra(top).unwrap();
        for &p in &atoms {
            for &q in &atoms {
                let chain = complex.multiply_keys((p, 0, 0), (q, 0, 0)).unwrap();
                if p == q {
                    assert!(chain.is_empty());
                    continue;
                }
                // expected: the exterior product reduced in the top block
                let ap = complex.key_atoms(p, 0);
                let aq = complex.key_atoms(q, 0);
                let ip = complex.mono_index_from_atoms(top, &[ap[0]]).ok();
                let iq = complex.mono_index_from_atoms(top, &[aq[0]]).ok();
                let _ = (ip, iq);
                let ea_top = &complex.elems[&top];
                let lp = OSComplex::<Rat>::positions_of(ea_top, &ap).unwrap();
                let lq = OSComplex::<Rat>::positions_of(ea_top, &aq).unwrap();
                let expected: OSElement<Rat> = es.mul_monomials(&lp, &lq);
                assert!(!chain.is_empty());
                let mut seen = BTreeMap::new();
                for (&(e, m, c), v) in &chain {
                    assert_eq!(e, top, "product term outside the top block");
                    assert_eq!(c, 0);
                    seen.insert(m, v.clone());
                }
                // same monomials, same coefficients up to one overall sign
                let expected_by_pos: BTreeMap<usize, Rat> = expected
                    .terms
                    .iter()
                    .map(|(m, v)| (es.basis_position(m).unwrap(), v.clone()))
                    .collect();
                assert_eq!(
                    seen.keys().collect::<Vec<_>>(),
                    expected_by_pos.keys().collect::<Vec<_>>()
                );
                let (k0, v0) = seen.iter().next().unwrap();
                let sigma = v0.mul(&expected_by_pos[k0].inv());
                assert!(sigma.clone().mul(&sigma) == Rat::one(), "overall factor is not ±1");
                for (k, v) in &seen {
                    assert_eq!(*v, sigma.mul(&expected_by_pos[k]));
                }
            }
        }
    }

    #[test]
    fn dependent_grades_multiply_to_zero_through_the_exterior_factor() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let po = complex.poset().poset().clone();
        let top = po.maximum().unwrap();
        let atom = po.atoms()[0];
        // coefficient product is nonzero (excess class), but the exterior
        // factor is dependent, so the whole product vanishes
        for m in 0..complex.os_algebra(top).unwrap().dim(complex.elems[&top].top) {
            for c in 0..complex.presheaf().space(top).total_dim() {
                let chain = complex.multiply_keys((top, m, c), (atom, 0, 0)).unwrap();
                assert!(chain.is_empty());
            }
        }
    }

    #[test]
    fn unit_acts_as_identity_on_every_basis_vector() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let unit = (complex.poset().zero_hat(), 0, 0);
        assert_eq!(complex.presheaf().space(unit.0).degree_of(0), 0);
        let keys: Vec<BasisKey> = complex.cells.values().flatten().copied().collect();
        for &k in &keys {
            let expected: Chain<Rat> = std::iter::once((k, Rat::one())).collect();
            assert_eq!(complex.multiply_keys(unit, k).unwrap(), expected);
            assert_eq!(complex.multiply_keys(k, unit).unwrap(), expected);
        }
    }

    #[test]
    fn product_rule_holds_for_the_sphere_triple() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let report = complex.leibniz_check().unwrap();
        assert!(report.ok(), "{}", report.failure.unwrap());
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn product_rule_holds_for_the_circle_pair() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(2)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let report = complex.leibniz_check().unwrap();
        assert!(report.ok(), "{}", report.failure.unwrap());
    }

    #[test]
    fn homology_ring_of_the_plane_triple_over_gf2() {
        let diag =
            diagonal_presheaf(&ManifoldData::<GF2>::real_space(2), &SimpleGraph::complete(3))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.e2_ring().unwrap();
        assert_eq!(
            dims_of(&page),
            BTreeMap::from([((0, 0), 1), ((-1, 2), 3), ((-2, 4), 2)])
        );
        let mut expected = LaurentPoly2::zero();
        for (t, c) in [(0, 1), (1, 3), (2, 2)] {
            expected.add_term(0, t, BigInt::from(c));
        }
        assert_eq!(page.poincare(), expected);
        assert!(dg1_generation_check(&page).unwrap());
    }

    #[test]
    fn homology_ring_of_the_torus_pair_matches_the_product_of_spaces() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::elliptic(), &SimpleGraph::complete(2))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.e2_ring().unwrap();
        // (1+t)^2 (1+2t) = 1 + 4t + 5t^2 + 2t^3
        let mut expected = LaurentPoly2::zero();
        for (t, c) in [(0, 1), (1, 4), (2, 5), (3, 2)] {
            expected.add_term(0, t, BigInt::from(c));
        }
        assert_eq!(page.poincare(), expected);
        // graded commutativity with respect to the total degree
        let classes: Vec<(Bidegree, usize)> = page
            .dims
            .iter()
            .flat_map(|(&c, &d)| (0..d).map(move |i| (c, i)))
            .collect();
        for &(ca, ia) in &classes {
            let mut va = vec![Rat::zero(); page.dim(ca)];
            va[ia] = Rat::one();
            for &(cb, ib) in &classes {
                let mut vb = vec![Rat::zero(); page.dim(cb)];
                vb[ib] = Rat::one();
                let (_, xy) = page.table_mul(ca, &va, cb, &vb).unwrap();
                let (_, yx) = page.table_mul(cb, &vb, ca, &va).unwrap();
                let sgn = sign_of::<Rat>(
                    ((ca.0 + ca.1) * (cb.0 + cb.1)).rem_euclid(2) as usize,
                );
                let yx_signed: Vec<Rat> = yx.iter().map(|v| v.mul(&sgn)).collect();
                assert_eq!(xy, yx_signed, "graded commutativity fails at {ca:?}×{cb:?}");
            }
        }
    }

    #[test]
    fn top_class_of_the_sphere_pair_squares_to_zero() {
        let diag =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(2)).unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.e2_ring().unwrap();
        assert_eq!(page.dim((0, 2)), 1);
        let v = vec![Rat::one()];
        let (target, sq) = page.table_mul((0, 2), &v, (0, 2), &v).unwrap();
        assert_eq!(target, (0, 4));
        assert!(sq.iter().all(Rat::is_zero));
    }

    #[test]
    fn generation_check_rejects_an_isolated_deep_class() {
        let page = E2Page::<GF2> {
            dims: BTreeMap::from([((0, 0), 1), ((-2, 3), 1)]),
            reps: BTreeMap::new(),
            product_table: Some(BTreeMap::new()),
            weights: None,
            collapse: CollapseFlag::Unknown,
        };
        assert!(!dg1_generation_check(&page).unwrap());
        let shallow = E2Page::<GF2> {
            dims: BTreeMap::from([((0, 0), 1), ((-1, 1), 2)]),
            reps: BTreeMap::new(),
            product_table: Some(BTreeMap::new()),
            weights: None,
            collapse: CollapseFlag::Unknown,
        };
        assert!(dg1_generation_check(&shallow).unwrap());
    }

    #[test]
    fn euler_characteristic_is_conserved_per_row() {
        for (manifold, n) in
            [(ManifoldData::<Rat>::circle(), 3), (ManifoldData::<Rat>::cp1(), 2)]
        {
            let diag = diagonal_presheaf(&manifold, &SimpleGraph::complete(n)).unwrap();
            let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
            let page = complex.homology();
            let mut rows = std::collections::BTreeSet::new();
            for &(_, r) in complex.cells.keys() {
                rows.insert(r);
            }
            for &r in &rows {
                let signed = |dims: &BTreeMap<Bidegree, usize>| -> i64 {
                    dims.iter()
                        .filter(|(&(_, row), _)| row == r)
                        .map(|(&(col, _), &d)| {
                            if col.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }
                        })
                        .sum()
                };
                assert_eq!(signed(&complex.cell_dims()), signed(&page.dims), "row {r}");
            }
        }
    }

    #[test]
    fn block_bases_agree_across_covers() {
        let diag =
            diagonal_presheaf(&ManifoldData::<GF2>::real_space(2), &SimpleGraph::complete(4))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let po = complex.poset().poset().clone();
        for &(lo, up) in po.covers() {
            let (Some(ea), Some(_)) = (complex.elems.get(&up), complex.elems.get(&lo)) else {
                continue;
            };
            let interval = complex.poset().interval_lattice(up);
            let lo_local = interval.from_global(lo).unwrap();
            // the grade-lo piece inside [0̂, up], translated to ambient atoms
            let upper_view: Vec<Vec<usize>> = ea
                .alg
                .basis(lo_local)
                .iter()
                .map(|m| m.iter().map(|&a| ea.atom_global[a]).collect())
                .collect();
            let eb = &complex.elems[&lo];
            let lower_view: Vec<Vec<usize>> = eb
                .alg
                .basis(eb.top)
                .iter()
                .map(|m| m.iter().map(|&a| eb.atom_global[a]).collect())
                .collect();
            assert_eq!(upper_view, lower_view, "cover {lo} ⋖ {up}");
        }
    }

    #[test]
    fn subinclusion_at_the_maximum_is_the_identity() {
        let diag =
            diagonal_presheaf(&ManifoldData::<GF2>::real_space(2), &SimpleGraph::complete(3))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.e2_ring().unwrap();
        let top = complex.poset().poset().maximum().unwrap();
        let sub = complex.subinclusion_e2(top, &page).unwrap();
        assert_eq!(sub.sub_page.dims, page.dims);
        for (cell, mat) in &sub.matrices {
            assert_eq!(mat, &Matrix::identity(page.dim(*cell)), "at {cell:?}");
        }
    }

    #[test]
    fn subinclusion_at_the_bottom_and_at_an_atom() {
        let diag =
            diagonal_presheaf(&ManifoldData::<GF2>::real_space(2), &SimpleGraph::complete(3))
                .unwrap();
        let complex = OSComplex::build_monoidal(diag.monoidal()).unwrap();
        let page = complex.e2_ring().unwrap();

        let zero = complex.poset().zero_hat();
        let sub0 = complex.subinclusion_e2(zero, &page).unwrap();
        assert_eq!(sub0.sub_page.dims, BTreeMap::from([((0, 0), 1)]));
        assert_eq!(sub0.matrices[&(0, 0)], Matrix::identity(1));

        for &a in &complex.poset().poset().atoms() {
            let sub = complex.subinclusion_e2(a, &page).unwrap();
            assert_eq!(
                sub.sub_page.dims,
                BTreeMap::from([((0, 0), 1), ((-1, 2), 1)])
            );
            let mat = &sub.matrices[&(-1, 2)];
            assert_eq!((mat.rows(), mat.cols()), (3, 1));
            // image is the unit coordinate vector at this atom's class
            let col = mat.col(0);
            assert_eq!(col.iter().filter(|v| !v.is_zero()).count(), 1);
            // the nonzero position matches the atom's position in the cell
            let keys = complex.cell_basis((-1, 2));
            let pos = keys.iter().position(|&(p, _, _)| p == a).unwrap();
            assert!(!col[pos].is_zero());
        }
    }

    #[test]
    fn multiplication_requires_product_data() {
        let lgp = bond_poset(2);
        let complex =
            OSComplex::build(&constant_presheaf::<Rat>(&lgp)).unwrap();
        assert!(complex.multiply_keys((0, 0, 0), (0, 0, 0)).is_err());
        assert!(complex.leibniz_check().is_err());
        assert!(complex.e2_ring().is_err());
    }
}
