//! Coefficient systems on a locally geometric poset: graded vector spaces
//! attached to elements, restriction maps attached to order relations, and an
//! optional product structure.
//!
//! The centerpiece is [`diagonal_presheaf`], which builds the coefficient
//! system of a chromatic configuration space from a graph and cohomological
//! data for a manifold ([`ManifoldData`]): the block at a partition `p` is the
//! tensor power `H^*(M)^{⊗(#blocks)}` shifted up by `m·r(p)` (a Thom shift),
//! restriction maps insert the diagonal class, and products cup factors
//! block-by-block. All sign conventions were fixed by Poincaré-duality
//! computations in tori and are locked by the unit tests below; they make the
//! restriction maps strictly functorial (`f_{q,s}∘f_{p,q} = f_{p,s}`), which
//! [`Presheaf::validate_functorial`] checks exhaustively.

use crate::field::{Field, Rat};
use crate::graph::{bond_lattice_with_cap, BondLattice, SimpleGraph};
use crate::matrix::Matrix;
use crate::poly::LaurentPoly2;
use crate::poset::LocallyGeometricPoset;
use crate::{Error, Result, DEFAULT_MAX_ELEMENTS};
use std::collections::{BTreeMap, HashMap};

/// Cap on the dimension of a single coefficient block, guarding tensor-power
/// blowup before any matrix is allocated.
pub const MAX_BLOCK_DIM: usize = 100_000;

/// `(−1)^exponent` in the field `F`.
pub fn sign_of<F: Field>(exponent: usize) -> F {
    if exponent.is_multiple_of(2) {
        F::one()
    } else {
        F::one().neg()
    }
}

// ---------------------------------------------------------------------------
// Graded vector spaces
// ---------------------------------------------------------------------------

/// A finite-dimensional non-negatively graded vector space with labelled
/// basis. The total basis order is degree-major: all degree-0 vectors first
/// (in insertion order), then degree 1, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    by_degree: BTreeMap<usize, Vec<String>>,
}

impl GradedSpace {
    pub fn empty() -> Self {
        GradedSpace { by_degree: BTreeMap::new() }
    }

    /// Build from (degree, label) pairs; relative order within a degree is the
    /// order of appearance.
    pub fn from_labels(labeled: impl IntoIterator<Item = (usize, String)>) -> Self {
        let mut by_degree: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (d, l) in labeled {
            by_degree.entry(d).or_default().push(l);
        }
        GradedSpace { by_degree }
    }

    /// Build from (degree, dimension) pairs with synthetic labels.
    pub fn from_dims(dims: &[(usize, usize)]) -> Self {
        let mut by_degree: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for &(d, n) in dims {
            let v = by_degree.entry(d).or_default();
            for i in 0..n {
                v.push(format!("d{d}_{i}"));
            }
        }
        by_degree.retain(|_, v| !v.is_empty());
        GradedSpace { by_degree }
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.by_degree.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(Vec::len).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.by_degree.keys().next_back().copied()
    }

    /// Index of the first basis vector of the given degree in the total order.
    pub fn offset(&self, degree: usize) -> usize {
        self.by_degree.range(..degree).map(|(_, v)| v.len()).sum()
    }

    pub fn index(&self, degree: usize, pos: usize) -> usize {
        self.offset(degree) + pos
    }

    /// (degree, position within degree) of a total-order index.
    pub fn split_index(&self, idx: usize) -> (usize, usize) {
        let mut rest = idx;
        for (&d, v) in &self.by_degree {
            if rest < v.len() {
                return (d, rest);
            }
            rest -= v.len();
        }
        panic!("basis index {idx} out of range (dim {})", self.total_dim());
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.split_index(idx).0
    }

    pub fn label(&self, idx: usize) -> &str {
        let (d, p) = self.split_index(idx);
        &self.by_degree[&d][p]
    }

    /// Dimension generating polynomial Σ_d dim_d · t^d.
    pub fn dims_poly(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::zero();
        for (&d, v) in &self.by_degree {
            p.add_term(0, d as i64, v.len().into());
        }
        p
    }
}

// ---------------------------------------------------------------------------
// Presheaves
// ---------------------------------------------------------------------------

/// Graded vector spaces `C_p` on a locally geometric poset with a
/// degree-preserving restriction map `f_{p,q}: C_p → C_q` for every cover
/// `q ⋖ p`; maps for longer relations are composites along cover chains.
#[derive(Clone, Debug)]
pub struct Presheaf<F: Field> {
    poset: LocallyGeometricPoset,
    spaces: Vec<GradedSpace>,
    /// Keyed by (upper, lower) over the cover pairs of the poset. The matrix
    /// for (p, q) has `total_dim(C_q)` rows and `total_dim(C_p)` columns.
    cover_maps: HashMap<(usize, usize), Matrix<F>>,
}

impl<F: Field> Presheaf<F> {
    pub fn new(
        poset: LocallyGeometricPoset,
        spaces: Vec<GradedSpace>,
        cover_maps: HashMap<(usize, usize), Matrix<F>>,
    ) -> Result<Self> {
        if spaces.len() != poset.len() {
            return Err(Error::Presheaf(format!(
                "{} spaces supplied for a poset with {} elements",
                spaces.len(),
                poset.len()
            )));
        }
        let mut expected = 0usize;
        for &(lo, up) in poset.poset().covers() {
            expected += 1;
            let mat = cover_maps.get(&(up, lo)).ok_or_else(|| {
                Error::Presheaf(format!(
                    "missing restriction map for cover {} :> {}",
                    poset.poset().label(up),
                    poset.poset().label(lo)
                ))
            })?;
            if mat.rows() != spaces[lo].total_dim() || mat.cols() != spaces[up].total_dim() {
                return Err(Error::Presheaf(format!(
                    "restriction map for cover {} :> {} is {}x{}, expected {}x{}",
                    poset.poset().label(up),
                    poset.poset().label(lo),
                    mat.rows(),
                    mat.cols(),
                    spaces[lo].total_dim(),
                    spaces[up].total_dim()
                )));
            }
            for c in 0..mat.cols() {
                let dc = spaces[up].degree_of(c);
                for r in 0..mat.rows() {
                    if !mat.get(r, c).is_zero() && spaces[lo].degree_of(r) != dc {
                        return Err(Error::Presheaf(format!(
                            "restriction map for cover {} :> {} does not preserve degree \
                             (entry at row {r}, column {c})",
                            poset.poset().label(up),
                            poset.poset().label(lo)
                        )));
                    }
                }
            }
        }
        if cover_maps.len() != expected {
            return Err(Error::Presheaf(format!(
                "{} restriction maps supplied for a poset with {expected} cover pairs",
                cover_maps.len()
            )));
        }
        Ok(Presheaf { poset, spaces, cover_maps })
    }

    pub fn poset(&self) -> &LocallyGeometricPoset {
        &self.poset
    }

    pub fn space(&self, p: usize) -> &GradedSpace {
        &self.spaces[p]
    }

    pub fn spaces(&self) -> &[GradedSpace] {
        &self.spaces
    }

    /// The restriction map for a cover pair q ⋖ p.
    pub fn cover_map(&self, p: usize, q: usize) -> &Matrix<F> {
        &self.cover_maps[&(p, q)]
    }

    /// The composed restriction map C_p → C_q for any q ≤ p, following the
    /// canonical cover chain (first lower cover above the target at each
    /// step). Well-defined independently of the chain whenever
    /// [`Self::validate_functorial`] passes.
    pub fn map(&self, p: usize, q: usize) -> Result<Matrix<F>> {
        if !self.poset.poset().leq(q, p) {
            return Err(Error::BadElement(format!(
                "no restriction {} → {}: not comparable",
                self.poset.poset().label(p),
                self.poset.poset().label(q)
            )));
        }
        if p == q {
            return Ok(Matrix::identity(self.spaces[p].total_dim()));
        }
        let c = *self
            .poset
            .poset()
            .covers_down(p)
            .iter()
            .find(|&&c| self.poset.poset().leq(q, c))
            .expect("q < p has a lower cover of p above q");
        Ok(self.map(c, q)?.mul_mat(&self.cover_maps[&(p, c)]))
    }

    /// All composed maps, indexed by (upper, lower) over comparable pairs
    /// p > q, each following the canonical cover chain.
    fn composed_maps(&self) -> HashMap<(usize, usize), Matrix<F>> {
        let mut maps: HashMap<(usize, usize), Matrix<F>> = HashMap::new();
        // Element order is a linear extension, so lower elements come first.
        for p in 0..self.poset.len() {
            for q in self.poset.poset().down_bits(p).iter_ones() {
                if q == p {
                    continue;
                }
                let c = *self
                    .poset
                    .poset()
                    .covers_down(p)
                    .iter()
                    .find(|&&c| self.poset.poset().leq(q, c))
                    .expect("lower cover above target");
                let tail = &self.cover_maps[&(p, c)];
                let mat = if c == q { tail.clone() } else { maps[&(c, q)].mul_mat(tail) };
                maps.insert((p, q), mat);
            }
        }
        maps
    }

    /// Check that restriction along different cover chains agrees: for every
    /// s ≤ q ≤ p, the composite through q equals the direct map. On failure,
    /// returns a certificate naming the offending triple.
    pub fn validate_functorial(&self) -> std::result::Result<(), String> {
        let maps = self.composed_maps();
        let po = self.poset.poset();
        for p in 0..self.poset.len() {
            for q in po.down_bits(p).iter_ones().filter(|&q| q != p) {
                for s in po.down_bits(q).iter_ones().filter(|&s| s != q) {
                    let via = maps[&(q, s)].mul_mat(&maps[&(p, q)]);
                    if via != maps[&(p, s)] {
                        return Err(format!(
                            "restriction maps are not functorial: composite \
                             C_{{{}}} → C_{{{}}} → C_{{{}}} differs from the direct map",
                            po.label(p),
                            po.label(q),
                            po.label(s)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The presheaf induced on the lower interval [0̂, top]: same spaces and
    /// restriction maps, poset re-indexed to the interval. Returns the
    /// restricted presheaf and the map from its element indices back to this
    /// poset's indices.
    pub fn restrict(&self, top: usize) -> Result<(Presheaf<F>, Vec<usize>)> {
        let zero = self.poset.zero_hat();
        let sub = self.poset.poset().interval(zero, top)?;
        let lgp = LocallyGeometricPoset::new(sub.poset.clone())?;
        let spaces: Vec<GradedSpace> =
            sub.to_global.iter().map(|&g| self.spaces[g].clone()).collect();
        let mut cover_maps = HashMap::new();
        for &(lo, up) in lgp.poset().covers() {
            let key = (sub.to_global[up], sub.to_global[lo]);
            cover_maps.insert((up, lo), self.cover_maps[&key].clone());
        }
        let pre = Presheaf::new(lgp, spaces, cover_maps)?;
        Ok((pre, sub.to_global))
    }
}

/// The presheaf that is a fixed space `A` with identity restriction maps on
/// the down-set of `alpha` and zero elsewhere.
pub fn skyscraper_presheaf<F: Field>(
    poset: &LocallyGeometricPoset,
    alpha: usize,
    space: &GradedSpace,
) -> Presheaf<F> {
    let spaces: Vec<GradedSpace> = (0..poset.len())
        .map(|p| if poset.poset().leq(p, alpha) { space.clone() } else { GradedSpace::empty() })
        .collect();
    let mut cover_maps = HashMap::new();
    for &(lo, up) in poset.poset().covers() {
        let mat = if poset.poset().leq(up, alpha) {
            Matrix::identity(space.total_dim())
        } else {
            Matrix::zero(spaces[lo].total_dim(), spaces[up].total_dim())
        };
        cover_maps.insert((up, lo), mat);
    }
    Presheaf::new(poset.clone(), spaces, cover_maps).expect("skyscraper data is well-formed")
}

// ---------------------------------------------------------------------------
// Monoidal presheaves
// ---------------------------------------------------------------------------

/// Product structure maps: for each pair `(p, q)` of poset elements, the
/// components of the product as pairs of a target element and its
/// structure-constant matrix.
pub type ProductMaps<F> = HashMap<(usize, usize), Vec<(usize, Matrix<F>)>>;

/// A presheaf with products `C_p ⊗ C_q → ⊕_{s ∈ p∨̊q} C_s`, stored as one
/// structure-constant matrix per target `s`: the column for basis pair
/// `(i, j)` is `i·dim(C_q) + j` and holds the `C_s`-component of the product.
/// Pairs with no entry multiply to zero.
#[derive(Clone, Debug)]
pub struct MonoidalPresheaf<F: Field> {
    base: Presheaf<F>,
    products: ProductMaps<F>,
}

impl<F: Field> MonoidalPresheaf<F> {
    pub fn new(base: Presheaf<F>, products: ProductMaps<F>) -> Result<Self> {
        let n = base.poset().len();
        for (&(p, q), comps) in &products {
            if p >= n || q >= n {
                return Err(Error::Presheaf(format!("product pair ({p},{q}) out of range")));
            }
            let targets = base.poset().min_upper_bounds(p, q);
            let (dp, dq) = (base.space(p).total_dim(), base.space(q).total_dim());
            for (s, mat) in comps {
                if !targets.contains(s) {
                    return Err(Error::Presheaf(format!(
                        "product of {} and {} targets {}, which is not a minimal upper bound",
                        base.poset().poset().label(p),
                        base.poset().poset().label(q),
                        base.poset().poset().label(*s)
                    )));
                }
                if mat.rows() != base.space(*s).total_dim() || mat.cols() != dp * dq {
                    return Err(Error::Presheaf(format!(
                        "product table for ({}, {}) → {} has shape {}x{}, expected {}x{}",
                        base.poset().poset().label(p),
                        base.poset().poset().label(q),
                        base.poset().poset().label(*s),
                        mat.rows(),
                        mat.cols(),
                        base.space(*s).total_dim(),
                        dp * dq
                    )));
                }
                for i in 0..dp {
                    let di = base.space(p).degree_of(i);
                    for j in 0..dq {
                        let dj = base.space(q).degree_of(j);
                        for r in 0..mat.rows() {
                            if !mat.get(r, i * dq + j).is_zero()
                                && base.space(*s).degree_of(r) != di + dj
                            {
                                return Err(Error::Presheaf(format!(
                                    "product of {} and {} is not degree-additive at basis pair \
                                     ({}, {})",
                                    base.poset().poset().label(p),
                                    base.poset().poset().label(q),
                                    base.space(p).label(i),
                                    base.space(q).label(j)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(MonoidalPresheaf { base, products })
    }

    pub fn base(&self) -> &Presheaf<F> {
        &self.base
    }

    pub fn poset(&self) -> &LocallyGeometricPoset {
        self.base.poset()
    }

    pub fn space(&self, p: usize) -> &GradedSpace {
        self.base.space(p)
    }

    pub fn product_components(&self, p: usize, q: usize) -> &[(usize, Matrix<F>)] {
        self.products.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    /// Product of two basis vectors, as (target element, coordinate vector)
    /// components.
    pub fn product_basis(&self, p: usize, i: usize, q: usize, j: usize) -> Vec<(usize, Vec<F>)> {
        let dq = self.base.space(q).total_dim();
        self.product_components(p, q)
            .iter()
            .map(|(s, mat)| (*s, mat.col(i * dq + j)))
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .collect()
    }

    /// Bilinear product of two coordinate vectors.
    pub fn product(
        &self,
        p: usize,
        x: &[F],
        q: usize,
        y: &[F],
    ) -> BTreeMap<usize, Vec<F>> {
        let mut acc: BTreeMap<usize, Vec<F>> = BTreeMap::new();
        for (s, mat) in self.product_components(p, q) {
            let dq = self.base.space(q).total_dim();
            let entry =
                acc.entry(*s).or_insert_with(|| vec![F::zero(); self.base.space(*s).total_dim()]);
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if yj.is_zero() {
                        continue;
                    }
                    let coef = xi.mul(yj);
                    let col = i * dq + j;
                    for r in 0..mat.rows() {
                        let m = mat.get(r, col);
                        if !m.is_zero() {
                            entry[r] = entry[r].add(&coef.mul(m));
                        }
                    }
                }
            }
        }
        acc.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        acc
    }

    /// Sparse columns of every product table: `cols[(p,q)][i·dim_q + j]` lists
    /// (target element, row, coefficient) triples.
    #[allow(clippy::type_complexity)]
    fn sparse_product_columns(&self) -> HashMap<(usize, usize), Vec<Vec<(usize, usize, F)>>> {
        let mut out = HashMap::new();
        for (&(p, q), comps) in &self.products {
            let ncols = self.base.space(p).total_dim() * self.base.space(q).total_dim();
            let mut cols: Vec<Vec<(usize, usize, F)>> = vec![Vec::new(); ncols];
            for (s, mat) in comps {
                for c in 0..mat.cols() {
                    for r in 0..mat.rows() {
                        let v = mat.get(r, c);
                        if !v.is_zero() {
                            cols[c].push((*s, r, v.clone()));
                        }
                    }
                }
            }
            out.insert((p, q), cols);
        }
        out
    }

    /// Full validation: functoriality of the restriction maps, compatibility
    /// of products with restriction along every cover (both sides), and
    /// associativity, all exhaustively over basis elements. Returns a
    /// certificate naming the first violation found.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.base.validate_functorial()?;
        let po = self.base.poset();
        let n = po.len();
        let maps = self.base.composed_maps();
        let map_of = |p: usize, q: usize| -> Matrix<F> {
            if p == q {
                Matrix::identity(self.base.space(p).total_dim())
            } else {
                maps[&(p, q)].clone()
            }
        };
        let sparse = self.sparse_product_columns();
        let col_of = |p: usize, i: usize, q: usize, j: usize| -> &[(usize, usize, F)] {
            match sparse.get(&(p, q)) {
                Some(cols) => &cols[i * self.base.space(q).total_dim() + j],
                None => &[],
            }
        };

        // Compatibility with restriction along covers, on both sides.
        for &(lo, up) in po.poset().covers() {
            let (q, p) = (lo, up);
            let f = self.base.cover_map(p, q);
            let fcols: Vec<Vec<(usize, F)>> = (0..f.cols())
                .map(|c| {
                    (0..f.rows())
                        .filter(|&r| !f.get(r, c).is_zero())
                        .map(|r| (r, f.get(r, c).clone()))
                        .collect()
                })
                .collect();
            for s in 0..n {
                let lambda_left = po
                    .canonical_lambda(s, p, s, q)
                    .map_err(|e| format!("canonical map failed: {e}"))?;
                let lambda_right = po
                    .canonical_lambda(p, s, q, s)
                    .map_err(|e| format!("canonical map failed: {e}"))?;
                for b in 0..self.base.space(s).total_dim() {
                    for a in 0..self.base.space(p).total_dim() {
                        // Left: b · f_{p,q}(a)  vs  pushdown of b · a.
                        let mut lhs: BTreeMap<usize, Vec<F>> = BTreeMap::new();
                        for (t, coef) in &fcols[a] {
                            for (u, r, m) in col_of(s, b, q, *t) {
                                let entry = lhs.entry(*u).or_insert_with(|| {
                                    vec![F::zero(); self.base.space(*u).total_dim()]
                                });
                                entry[*r] = entry[*r].add(&coef.mul(m));
                            }
                        }
                        let mut rhs: BTreeMap<usize, Vec<F>> = BTreeMap::new();
                        for (v, r, m) in col_of(s, b, p, a) {
                            let &(_, u) =
                                lambda_left.iter().find(|&&(v2, _)| v2 == *v).expect("λ total");
                            let g = map_of(*v, u);
                            let entry = rhs.entry(u).or_insert_with(|| {
                                vec![F::zero(); self.base.space(u).total_dim()]
                            });
                            for rr in 0..g.rows() {
                                let gv = g.get(rr, *r);
                                if !gv.is_zero() {
                                    entry[rr] = entry[rr].add(&m.mul(gv));
                                }
                            }
                        }
                        if !components_equal(&lhs, &rhs) {
                            return Err(format!(
                                "product is not compatible with restriction: left action of \
                                 {}[{}] across cover {} :> {} at basis {}[{}]",
                                po.poset().label(s),
                                self.base.space(s).label(b),
                                po.poset().label(p),
                                po.poset().label(q),
                                po.poset().label(p),
                                self.base.space(p).label(a)
                            ));
                        }
                        // Right: f_{p,q}(a) · b  vs  pushdown of a · b.
                        let mut lhs: BTreeMap<usize, Vec<F>> = BTreeMap::new();
                        for (t, coef) in &fcols[a] {
                            for (u, r, m) in col_of(q, *t, s, b) {
                                let entry = lhs.entry(*u).or_insert_with(|| {
                                    vec![F::zero(); self.base.space(*u).total_dim()]
                                });
                                entry[*r] = entry[*r].add(&coef.mul(m));
                            }
                        }
                        let mut rhs: BTreeMap<usize, Vec<F>> = BTreeMap::new();
                        for (v, r, m) in col_of(p, a, s, b) {
                            let &(_, u) =
                                lambda_right.iter().find(|&&(v2, _)| v2 == *v).expect("λ total");
                            let g = map_of(*v, u);
                            let entry = rhs.entry(u).or_insert_with(|| {
                                vec![F::zero(); self.base.space(u).total_dim()]
                            });
                            for rr in 0..g.rows() {
                                let gv = g.get(rr, *r);
                                if !gv.is_zero() {
                                    entry[rr] = entry[rr].add(&m.mul(gv));
                                }
                            }
                        }
                        if !components_equal(&lhs, &rhs) {
                            return Err(format!(
                                "product is not compatible with restriction: right action of \
                                 {}[{}] across cover {} :> {} at basis {}[{}]",
                                po.poset().label(s),
                                self.base.space(s).label(b),
                                po.poset().label(p),
                                po.poset().label(q),
                                po.poset().label(p),
                                self.base.space(p).label(a)
                            ));
                        }
                    }
                }
            }
        }

        // Associativity over all basis triples.
        for p in 0..n {
            for q in 0..n {
                for t in 0..n {
                    for a in 0..self.base.space(p).total_dim() {
                        for b in 0..self.base.space(q).total_dim() {
                            for c in 0..self.base.space(t).total_dim() {
                                let mut lhs: BTreeMap<(usize, usize), F> = BTreeMap::new();
                                for (v, r, m) in col_of(p, a, q, b) {
                                    for (u, r2, m2) in col_of(*v, *r, t, c) {
                                        let e = lhs.entry((*u, *r2)).or_insert_with(F::zero);
                                        *e = e.add(&m.mul(m2));
                                    }
                                }
                                let mut rhs: BTreeMap<(usize, usize), F> = BTreeMap::new();
                                for (v, r, m) in col_of(q, b, t, c) {
                                    for (u, r2, m2) in col_of(p, a, *v, *r) {
                                        let e = rhs.entry((*u, *r2)).or_insert_with(F::zero);
                                        *e = e.add(&m.mul(m2));
                                    }
                                }
                                lhs.retain(|_, v| !v.is_zero());
                                rhs.retain(|_, v| !v.is_zero());
                                if lhs != rhs {
                                    return Err(format!(
                                        "product is not associative at ({}, {}, {}), basis \
                                         ({}, {}, {})",
                                        po.poset().label(p),
                                        po.poset().label(q),
                                        po.poset().label(t),
                                        self.base.space(p).label(a),
                                        self.base.space(q).label(b),
                                        self.base.space(t).label(c)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The monoidal presheaf induced on the lower interval [0̂, top]: the base
    /// presheaf is restricted, and each product keeps only the components
    /// whose target lies in the interval (inside the interval, the unique
    /// minimal upper bound of two elements is their join there). Returns the
    /// restriction and the element map back to this poset's indices.
    pub fn restrict(&self, top: usize) -> Result<(MonoidalPresheaf<F>, Vec<usize>)> {
        let (base, to_global) = self.base.restrict(top)?;
        let local_of: HashMap<usize, usize> =
            to_global.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let mut products = HashMap::new();
        for lp in 0..base.poset().len() {
            for lq in 0..base.poset().len() {
                let comps: Vec<(usize, Matrix<F>)> = self
                    .product_components(to_global[lp], to_global[lq])
                    .iter()
                    .filter_map(|(s, mat)| Some((*local_of.get(s)?, mat.clone())))
                    .collect();
                if !comps.is_empty() {
                    products.insert((lp, lq), comps);
                }
            }
        }
        let restricted = MonoidalPresheaf::new(base, products)?;
        Ok((restricted, to_global))
    }
}

fn components_equal<F: Field>(
    a: &BTreeMap<usize, Vec<F>>,
    b: &BTreeMap<usize, Vec<F>>,
) -> bool {
    let keys: Vec<usize> = a.keys().chain(b.keys()).copied().collect();
    for k in keys {
        let za = a.get(&k);
        let zb = b.get(&k);
        let len = za.or(zb).map_or(0, Vec::len);
        for i in 0..len {
            let va = za.map_or(F::zero(), |v| v[i].clone());
            let vb = zb.map_or(F::zero(), |v| v[i].clone());
            if va != vb {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Manifold cohomology data
// ---------------------------------------------------------------------------

/// Cohomology of a manifold, given by generators and structure constants: a
/// graded basis (index 0 is the unit, degree 0), the cup-product table, and
/// the diagonal class in `H^m(M×M)` (or an explicit statement that it is
/// zero, as for non-compact `M`).
#[derive(Clone, Debug)]
pub struct ManifoldData<F: Field> {
    /// Identifier used in messages and output.
    pub name: String,
    /// Real dimension m of the manifold.
    pub real_dim: usize,
    pub basis_names: Vec<String>,
    pub basis_degs: Vec<usize>,
    /// `cup_table[i][j]` is the coordinate vector of `basis_i ⌣ basis_j`.
    pub cup_table: Vec<Vec<Vec<F>>>,
    /// Diagonal class as terms (coefficient, i, j) meaning `c · basis_i ⊗ basis_j`.
    pub diagonal: Vec<(F, usize, usize)>,
    /// True if the diagonal class was supplied (possibly as zero). Every
    /// pipeline that restricts along the poset needs this to be true.
    pub diagonal_known: bool,
    /// True for smooth complex projective varieties; enables the
    /// degeneration-by-weight argument and the Euler-class consistency check.
    pub projective_complex: bool,
}

impl<F: Field> ManifoldData<F> {
    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn deg(&self, i: usize) -> usize {
        self.basis_degs[i]
    }

    pub fn zero_diagonal(&self) -> bool {
        self.diagonal_known && self.diagonal.is_empty()
    }

    /// Σ_i x_i · (basis_i ⌣ basis_j).
    pub fn mul_vec_basis(&self, x: &[F], j: usize) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in self.cup_table[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&xi.mul(c));
                }
            }
        }
        out
    }

    pub fn mul_vecs(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let part = self.mul_vec_basis(x, j);
            for (k, c) in part.iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&yj.mul(c));
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    pub fn dim_in_degree(&self, d: usize) -> usize {
        self.basis_degs.iter().filter(|&&x| x == d).count()
    }

    /// Poincaré polynomial Σ dim H^d · t^d.
    pub fn poincare_poly(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::zero();
        for &d in &self.basis_degs {
            p.add_term(0, d as i64, 1.into());
        }
        p
    }

    pub fn euler_char(&self) -> i64 {
        self.basis_degs.iter().map(|&d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Index of the unique top-degree (m) basis vector, if there is one.
    pub fn top_index(&self) -> Option<usize> {
        let tops: Vec<usize> = (0..self.dim()).filter(|&i| self.deg(i) == self.real_dim).collect();
        match tops.as_slice() {
            &[t] => Some(t),
            _ => None,
        }
    }

    /// Check every structural invariant; all later pipelines assume this
    /// passed.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadManifold(format!("{}: {msg}", self.name)));
        let n = self.dim();
        if n == 0 {
            return bad("empty basis".into());
        }
        if self.basis_degs.len() != n {
            return bad("basis names and degrees differ in length".into());
        }
        if self.basis_degs[0] != 0 {
            return bad("basis[0] must be the unit in degree 0".into());
        }
        if self.basis_degs.iter().filter(|&&d| d == 0).count() != 1 {
            return bad("expected a one-dimensional degree-0 part".into());
        }
        if let Some(&d) = self.basis_degs.iter().find(|&&d| d > self.real_dim) {
            return bad(format!("basis degree {d} exceeds the real dimension {}", self.real_dim));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for nm in &self.basis_names {
                if nm.is_empty() || !seen.insert(nm) {
                    return bad(format!("basis names must be nonempty and distinct (got {nm:?})"));
                }
            }
        }
        if self.cup_table.len() != n || self.cup_table.iter().any(|r| r.len() != n) {
            return bad("cup table must be square over the basis".into());
        }
        for i in 0..n {
            for j in 0..n {
                if self.cup_table[i][j].len() != n {
                    return bad(format!("cup({i},{j}) has wrong length"));
                }
            }
        }
        for j in 0..n {
            if self.cup_table[0][j] != self.basis_vec(j) || self.cup_table[j][0] != self.basis_vec(j)
            {
                return bad(format!(
                    "unit law fails at basis element {}",
                    self.basis_names[j]
                ));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let d = self.deg(i) + self.deg(j);
                for (k, c) in self.cup_table[i][j].iter().enumerate() {
                    if !c.is_zero() && self.deg(k) != d {
                        return bad(format!(
                            "cup product {}⌣{} is not degree-additive",
                            self.basis_names[i], self.basis_names[j]
                        ));
                    }
                }
                // Graded commutativity with the Koszul sign.
                let sign: F = sign_of(self.deg(i) * self.deg(j));
                let flipped: Vec<F> = self.cup_table[j][i].iter().map(|c| sign.mul(c)).collect();
                if self.cup_table[i][j] != flipped {
                    return bad(format!(
                        "cup product is not graded-commutative at ({}, {})",
                        self.basis_names[i], self.basis_names[j]
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.mul_vec_basis(&self.cup_table[i][j], k);
                    let rhs = self.mul_vecs(&self.basis_vec(i), &self.cup_table[j][k]);
                    if lhs != rhs {
                        return bad(format!(
                            "cup product is not associative at ({}, {}, {})",
                            self.basis_names[i], self.basis_names[j], self.basis_names[k]
                        ));
                    }
                }
            }
        }
        if !self.diagonal_known {
            return bad(
                "a diagonal class must be supplied or declared zero before the coefficient \
                 system can be built"
                    .into(),
            );
        }
        for (c, i, j) in &self.diagonal {
            if c.is_zero() {
                return bad("diagonal class has an explicit zero term".into());
            }
            if *i >= n || *j >= n {
                return bad("diagonal class refers to a basis index out of range".into());
            }
            if self.deg(*i) + self.deg(*j) != self.real_dim {
                return bad(format!(
                    "diagonal term {}⊗{} does not have total degree {}",
                    self.basis_names[*i], self.basis_names[*j], self.real_dim
                ));
            }
        }
        // Symmetry of the diagonal class: (x⊗1)·[Δ] = ±(1⊗x)·[Δ] for every
        // basis x, computed in H ⊗ H with Koszul signs.
        for x in 0..n {
            let mut left: BTreeMap<(usize, usize), F> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize), F> = BTreeMap::new();
            for (c, i, j) in &self.diagonal {
                // (x⊗1)(a⊗b) = (x⌣a)⊗b
                for (k, v) in self.cup_table[x][*i].iter().enumerate() {
                    if !v.is_zero() {
                        let e = left.entry((k, *j)).or_insert_with(F::zero);
                        *e = e.add(&c.mul(v));
                    }
                }
                // (1⊗x)(a⊗b) = (−1)^{|x||a|} a⊗(x⌣b)
                let sign: F = sign_of(self.deg(x) * self.deg(*i));
                for (k, v) in self.cup_table[x][*j].iter().enumerate() {
                    if !v.is_zero() {
                        let e = right.entry((*i, k)).or_insert_with(F::zero);
                        *e = e.add(&sign.mul(&c.mul(v)));
                    }
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            let negated: BTreeMap<(usize, usize), F> =
                right.iter().map(|(k, v)| (*k, v.neg())).collect();
            if left != right && left != negated {
                return bad(format!(
                    "diagonal class is not symmetric against {}",
                    self.basis_names[x]
                ));
            }
        }
        if self.projective_complex {
            if !self.real_dim.is_multiple_of(2) {
                return bad("a complex projective manifold has even real dimension".into());
            }
            let top = match self.top_index() {
                Some(t) => t,
                None => {
                    return bad(
                        "projective data needs a one-dimensional top degree".into(),
                    )
                }
            };
            // Multiplying the two legs of the diagonal class must give the
            // Euler characteristic times the top class.
            let mut mu = vec![F::zero(); n];
            for (c, i, j) in &self.diagonal {
                for (k, v) in self.cup_table[*i][*j].iter().enumerate() {
                    if !v.is_zero() {
                        mu[k] = mu[k].add(&c.mul(v));
                    }
                }
            }
            let mut expected = vec![F::zero(); n];
            expected[top] = F::from_int(self.euler_char());
            if mu != expected {
                return bad(
                    "multiplying the diagonal class does not give χ · (top class)".into(),
                );
            }
        }
        Ok(())
    }

    // -- standard examples ---------------------------------------------------

    /// The 2-sphere as the complex projective line: H* = ℚ[ω]/(ω²), |ω| = 2.
    pub fn cp1() -> Self {
        let one = F::one;
        ManifoldData {
            name: "CP1".into(),
            real_dim: 2,
            basis_names: vec!["1".into(), "w".into()],
            basis_degs: vec![0, 2],
            cup_table: vec![
                vec![vec![one(), F::zero()], vec![F::zero(), one()]],
                vec![vec![F::zero(), one()], vec![F::zero(), F::zero()]],
            ],
            diagonal: vec![(one(), 0, 1), (one(), 1, 0)],
            diagonal_known: true,
            projective_complex: true,
        }
    }

    /// An elliptic curve: 1, a, b in degree 1, w = a⌣b in degree 2.
    pub fn elliptic() -> Self {
        let n = 4usize;
        let mut cup = vec![vec![vec![F::zero(); n]; n]; n];
        let mut set = |i: usize, j: usize, k: usize, c: i64| {
            cup[i][j][k] = F::from_int(c);
        };
        for j in 0..n {
            set(0, j, j, 1);
            set(j, 0, j, 1);
        }
        set(1, 2, 3, 1); // a⌣b = w
        set(2, 1, 3, -1); // b⌣a = −w
        ManifoldData {
            name: "E".into(),
            real_dim: 2,
            basis_names: vec!["1".into(), "a".into(), "b".into(), "w".into()],
            basis_degs: vec![0, 1, 1, 2],
            cup_table: cup,
            diagonal: vec![
                (F::one(), 0, 3),
                (F::one(), 3, 0),
                (F::one().neg(), 1, 2),
                (F::one(), 2, 1),
            ],
            diagonal_known: true,
            projective_complex: true,
        }
    }

    /// The circle: H* = Λ[θ], |θ| = 1.
    pub fn circle() -> Self {
        let one = F::one;
        ManifoldData {
            name: "S1".into(),
            real_dim: 1,
            basis_names: vec!["1".into(), "t".into()],
            basis_degs: vec![0, 1],
            cup_table: vec![
                vec![vec![one(), F::zero()], vec![F::zero(), one()]],
                vec![vec![F::zero(), one()], vec![F::zero(), F::zero()]],
            ],
            diagonal: vec![(one(), 0, 1), (one().neg(), 1, 0)],
            diagonal_known: true,
            projective_complex: false,
        }
    }

    /// Euclidean space ℝ^m: trivial cohomology, zero diagonal class.
    pub fn real_space(m: usize) -> Self {
        assert!(m >= 1, "real_space needs m >= 1");
        ManifoldData {
            name: format!("R^{m}"),
            real_dim: m,
            basis_names: vec!["1".into()],
            basis_degs: vec![0],
            cup_table: vec![vec![vec![F::one()]]],
            diagonal: vec![],
            diagonal_known: true,
            projective_complex: false,
        }
    }

    /// The open cylinder S¹×ℝ: the cohomology of a circle in dimension 2,
    /// zero diagonal class (non-compact).
    pub fn s1_x_r() -> Self {
        let one = F::one;
        ManifoldData {
            name: "S1xR".into(),
            real_dim: 2,
            basis_names: vec!["1".into(), "t".into()],
            basis_degs: vec![0, 1],
            cup_table: vec![
                vec![vec![one(), F::zero()], vec![F::zero(), one()]],
                vec![vec![F::zero(), one()], vec![F::zero(), F::zero()]],
            ],
            diagonal: vec![],
            diagonal_known: true,
            projective_complex: false,
        }
    }
}

// ---------------------------------------------------------------------------
// The diagonal presheaf of a chromatic configuration space
// ---------------------------------------------------------------------------

/// The coefficient system of a chromatic configuration space: the monoidal
/// presheaf on the bond lattice of `G` whose block at a partition `p` is
/// `H^*(M)^{⊗(#blocks)}`, Thom-shifted by `m·r(p)`, together with the
/// partition bookkeeping needed to read basis vectors as tensor tuples.
#[derive(Clone, Debug)]
pub struct DiagonalData<F: Field> {
    monoidal: MonoidalPresheaf<F>,
    bond: BondLattice,
    manifold: ManifoldData<F>,
    /// Per element: lexicographic tuple index → graded-space basis index.
    tuple_space_idx: Vec<Vec<usize>>,
    /// Per element: graded-space basis index → tensor tuple (one manifold
    /// basis index per block, blocks ordered by least vertex).
    space_tuple: Vec<Vec<Vec<usize>>>,
}

impl<F: Field> DiagonalData<F> {
    pub fn monoidal(&self) -> &MonoidalPresheaf<F> {
        &self.monoidal
    }

    pub fn presheaf(&self) -> &Presheaf<F> {
        self.monoidal.base()
    }

    pub fn bond(&self) -> &BondLattice {
        &self.bond
    }

    pub fn manifold(&self) -> &ManifoldData<F> {
        &self.manifold
    }

    pub fn poset(&self) -> &LocallyGeometricPoset {
        self.monoidal.poset()
    }

    /// Basis index of a tensor tuple at element p.
    pub fn space_index(&self, p: usize, tuple: &[usize]) -> usize {
        let h = self.manifold.dim();
        let mut lex = 0usize;
        for &t in tuple {
            lex = lex * h + t;
        }
        self.tuple_space_idx[p][lex]
    }

    /// Tensor tuple of a basis index at element p.
    pub fn tuple_at(&self, p: usize, idx: usize) -> &[usize] {
        &self.space_tuple[p][idx]
    }
}

/// The per-element tensor-tuple bases and restriction maps of a diagonal
/// presheaf, before any product structure.
struct BlockModel<F: Field> {
    spaces: Vec<GradedSpace>,
    tuple_space_idx: Vec<Vec<usize>>,
    space_tuple: Vec<Vec<Vec<usize>>>,
    cover_maps: HashMap<(usize, usize), Matrix<F>>,
}

fn lex_index(h: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * h + t)
}

fn build_block_model<F: Field>(
    manifold: &ManifoldData<F>,
    bond: &BondLattice,
    poset: &LocallyGeometricPoset,
) -> Result<BlockModel<F>> {
    let n = poset.len();
    let h = manifold.dim();
    let m = manifold.real_dim;

    // Coefficient spaces: all tensor tuples, lexicographic within each degree.
    let mut spaces: Vec<GradedSpace> = Vec::with_capacity(n);
    let mut tuple_space_idx: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut space_tuple: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    for p in 0..n {
        let k = bond.partitions[p].num_blocks();
        let r = bond.lattice.rank(p);
        let count = h.checked_pow(k as u32).filter(|&c| c <= MAX_BLOCK_DIM).ok_or(
            Error::Unsupported(format!(
                "coefficient block at {} would have more than {MAX_BLOCK_DIM} basis vectors",
                bond.lattice.label(p)
            )),
        )?;
        let mut tuples: Vec<Vec<usize>> = Vec::with_capacity(count);
        let mut tup = vec![0usize; k];
        loop {
            tuples.push(tup.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tup[i] += 1;
                if tup[i] < h {
                    break;
                }
                tup[i] = 0;
            }
            if tup.iter().all(|&t| t == 0) {
                break;
            }
        }
        debug_assert_eq!(tuples.len(), count);
        let degree_of = |t: &[usize]| -> usize {
            m * r + t.iter().map(|&i| manifold.deg(i)).sum::<usize>()
        };
        let label_of = |t: &[usize]| -> String {
            if t.is_empty() {
                "1".to_string()
            } else {
                t.iter().map(|&i| manifold.basis_names[i].clone()).collect::<Vec<_>>().join("*")
            }
        };
        let space =
            GradedSpace::from_labels(tuples.iter().map(|t| (degree_of(t), label_of(t))));
        let mut pos_in_degree: BTreeMap<usize, usize> = BTreeMap::new();
        let mut idx_of: Vec<usize> = Vec::with_capacity(count);
        for t in &tuples {
            let d = degree_of(t);
            let pos = pos_in_degree.entry(d).or_insert(0);
            idx_of.push(space.index(d, *pos));
            *pos += 1;
        }
        let mut back: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (lex, &sidx) in idx_of.iter().enumerate() {
            back[sidx] = tuples[lex].clone();
        }
        spaces.push(space);
        tuple_space_idx.push(idx_of);
        space_tuple.push(back);
    }

    // Restriction maps along covers: replace the factor at the merged block D
    // by the two legs of the diagonal class — a_k at B, b_k ⌣ (old factor) at
    // B'. Signs (all exponents even when m is): each factor left of D costs
    // (−1)^{m(deg+1)}, and each factor strictly between B and B' costs
    // (−1)^{m + content·deg}.
    let mut cover_maps: HashMap<(usize, usize), Matrix<F>> = HashMap::new();
    for &(lo, up) in poset.poset().covers() {
        let (q, p) = (lo, up);
        let (beta, beta2, d) = bond.partitions[q]
            .merge_witness(&bond.partitions[p])
            .expect("bond-lattice cover merges exactly two blocks");
        debug_assert_eq!(d, beta);
        let kq = bond.partitions[q].num_blocks();
        let mut mat: Matrix<F> = Matrix::zero(spaces[q].total_dim(), spaces[p].total_dim());
        for sidx in 0..spaces[p].total_dim() {
            let x = &space_tuple[p][sidx];
            let pre_exp: usize = (0..d).map(|i| m * (manifold.deg(x[i]) + 1)).sum();
            for (c, ai, bi) in &manifold.diagonal {
                let content = &manifold.cup_table[*bi][x[d]];
                let content_deg = manifold.deg(*bi) + manifold.deg(x[d]);
                let cross_exp: usize = (beta + 1..beta2)
                    .map(|i| m + content_deg * manifold.deg(x[i]))
                    .sum();
                let sgn: F = sign_of(pre_exp + cross_exp);
                for (e, mu) in content.iter().enumerate() {
                    if mu.is_zero() {
                        continue;
                    }
                    let mut y = vec![0usize; kq];
                    for i in 0..kq {
                        if i == beta {
                            y[i] = *ai;
                        } else if i == beta2 {
                            y[i] = e;
                        } else {
                            let pp = if i > beta2 { i - 1 } else { i };
                            y[i] = x[pp];
                        }
                    }
                    let row = tuple_space_idx[q][lex_index(h, &y)];
                    let coef = c.mul(mu).mul(&sgn);
                    let cur = mat.get(row, sidx).clone();
                    mat.set(row, sidx, cur.add(&coef));
                }
            }
        }
        cover_maps.insert((p, q), mat);
    }

    Ok(BlockModel { spaces, tuple_space_idx, space_tuple, cover_maps })
}

/// Orientation parities σ(p,q) of Thom-class products for odd fiber
/// dimension: the product of the classes carried by two independent elements
/// equals the class of their join up to a sign that depends only on the pair
/// of partitions (and on m mod 2). Returns `true` for pairs where the sign
/// is −1.
///
/// The parities are extracted from the circle model: composing its known
/// restriction maps down to the discrete partition embeds each block
/// faithfully into the exterior algebra H^*((S¹)^n), where the product of
/// the two images can be compared against the image of the join directly.
fn thom_orientation_parities(
    bond: &BondLattice,
    poset: &LocallyGeometricPoset,
) -> Result<HashMap<(usize, usize), bool>> {
    let circle = ManifoldData::<Rat>::circle();
    let model = build_block_model(&circle, bond, poset)?;
    let n = poset.len();
    let zero = bond.lattice.zero_hat();
    let nverts = bond.partitions[zero].num_blocks();
    let dim0 = model.spaces[zero].total_dim();

    // Composed restriction matrices C_p → C_0̂ along a fixed cover chain
    // (elements are listed in a linear extension, so lower covers of p
    // precede p).
    let mut to_zero: Vec<Matrix<Rat>> = Vec::with_capacity(n);
    for p in 0..n {
        if p == zero {
            to_zero.push(Matrix::identity(dim0));
        } else {
            let c = poset.poset().covers_down(p)[0];
            to_zero.push(to_zero[c].mul_mat(&model.cover_maps[&(p, c)]));
        }
    }
    let images: Vec<Vec<Rat>> = (0..n)
        .map(|p| to_zero[p].col(model.tuple_space_idx[p][0]))
        .collect();

    // Cup product of two basis tuples of H^*(S¹)^{⊗nverts}: zero if any
    // position doubles the degree-1 generator, otherwise the union tuple
    // with the Koszul parity of interleaving the two factor sequences.
    let cup = |ti: &[usize], tj: &[usize]| -> Option<(usize, bool)> {
        let mut out = vec![0usize; nverts];
        for pos in 0..nverts {
            if ti[pos] == 1 && tj[pos] == 1 {
                return None;
            }
            out[pos] = ti[pos] | tj[pos];
        }
        let mut parity = false;
        for i in 0..nverts {
            if ti[i] == 1 {
                for j in 0..i {
                    if tj[j] == 1 {
                        parity = !parity;
                    }
                }
            }
        }
        Some((model.tuple_space_idx[zero][lex_index(2, &out)], parity))
    };

    let mut parities = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            let v = bond.lattice.join(p, q);
            if bond.lattice.rank(v) != bond.lattice.rank(p) + bond.lattice.rank(q) {
                continue;
            }
            let mut w = vec![<Rat as Field>::zero(); dim0];
            for (i, ci) in images[p].iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                let ti = &model.space_tuple[zero][i];
                for (j, cj) in images[q].iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    if let Some((idx, neg)) = cup(ti, &model.space_tuple[zero][j]) {
                        let term = ci.mul(cj);
                        let term = if neg { term.neg() } else { term };
                        w[idx] = w[idx].add(&term);
                    }
                }
            }
            let iv = &images[v];
            let k = iv
                .iter()
                .position(|c| !c.is_zero())
                .expect("restriction of a Thom class to the bottom is nonzero");
            let sigma = w[k].mul(&iv[k].inv());
            let minus_one = <Rat as Field>::one().neg();
            let scaled: Vec<Rat> = iv.iter().map(|c| c.mul(&sigma)).collect();
            if (sigma != <Rat as Field>::one() && sigma != minus_one) || w != scaled {
                return Err(Error::Presheaf(format!(
                    "orientation sign of the pair ({}, {}) is not ±1",
                    bond.lattice.label(p),
                    bond.lattice.label(q)
                )));
            }
            parities.insert((p, q), sigma == minus_one);
        }
    }
    Ok(parities)
}

/// Build the diagonal presheaf of (M, G) on the bond lattice of G.
pub fn diagonal_presheaf<F: Field>(
    manifold: &ManifoldData<F>,
    graph: &SimpleGraph,
) -> Result<DiagonalData<F>> {
    diagonal_presheaf_with_cap(manifold, graph, DEFAULT_MAX_ELEMENTS)
}

pub fn diagonal_presheaf_with_cap<F: Field>(
    manifold: &ManifoldData<F>,
    graph: &SimpleGraph,
    cap: usize,
) -> Result<DiagonalData<F>> {
    manifold.validate()?;
    let bond = bond_lattice_with_cap(graph, cap)?;
    let poset = LocallyGeometricPoset::from_lattice(&bond.lattice)?;
    let model = build_block_model(manifold, &bond, &poset)?;
    let BlockModel { spaces, tuple_space_idx, space_tuple, cover_maps } = model;
    let n = poset.len();
    let h = manifold.dim();
    let m = manifold.real_dim;

    // Multiplying the two legs of the diagonal class gives the excess class
    // (the Euler class of the normal bundle of a diagonal): each failure of
    // rank additivity in a product contributes one cup factor of it.
    let mut excess = vec![F::zero(); h];
    for (c, i, j) in &manifold.diagonal {
        for (k, v) in manifold.cup_table[*i][*j].iter().enumerate() {
            if !v.is_zero() {
                excess[k] = excess[k].add(&c.mul(v));
            }
        }
    }
    let excess_zero = excess.iter().all(F::is_zero);

    // Thom classes of odd fiber dimension anticommute, so the product picks
    // up a pair-dependent orientation sign; for even m all these signs are +1.
    let sigma = if m % 2 == 1 { thom_orientation_parities(&bond, &poset)? } else { HashMap::new() };

    // Products: factors of both tuples travel to their blocks of p∨q (stable
    // sort, Koszul signs on unshifted degrees) and are cupped within each
    // block in the sorted order, followed by one excess-class factor per
    // rank-additivity failure in that block. The whole product carries the
    // Thom-crossing sign (−1)^{deg(x)·m·r(q)} and the orientation sign of
    // the pair.
    let mut products: ProductMaps<F> = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            let s = bond.lattice.join(p, q);
            let ex_total =
                bond.lattice.rank(p) + bond.lattice.rank(q) - bond.lattice.rank(s);
            if ex_total > 0 && excess_zero {
                continue; // every excess factor vanishes: product is zero
            }
            let (dp, dq) = (spaces[p].total_dim(), spaces[q].total_dim());
            let mut mat: Matrix<F> = Matrix::zero(spaces[s].total_dim(), dp * dq);
            let ks = bond.partitions[s].num_blocks();
            let p_targets: Vec<usize> = bond.partitions[p]
                .blocks()
                .iter()
                .map(|b| bond.partitions[s].block_of(b[0]))
                .collect();
            let q_targets: Vec<usize> = bond.partitions[q]
                .blocks()
                .iter()
                .map(|b| bond.partitions[s].block_of(b[0]))
                .collect();
            // Excess per block D of the join: |D| + 1 − (#p-blocks in D) −
            // (#q-blocks in D); the total over blocks is ex_total.
            let block_excess: Vec<usize> = (0..ks)
                .map(|blk| {
                    bond.partitions[s].blocks()[blk].len() + 1
                        - p_targets.iter().filter(|&&t| t == blk).count()
                        - q_targets.iter().filter(|&&t| t == blk).count()
                })
                .collect();
            debug_assert_eq!(block_excess.iter().sum::<usize>(), ex_total);
            let rq = bond.lattice.rank(q);
            let pair_parity = usize::from(*sigma.get(&(p, q)).unwrap_or(&false));
            for i in 0..dp {
                let x = &space_tuple[p][i];
                let xdeg: usize = x.iter().map(|&t| manifold.deg(t)).sum();
                let thom_exp = xdeg * m * rq + pair_parity;
                for j in 0..dq {
                    let y = &space_tuple[q][j];
                    // Combined factor list with target blocks; stable sort.
                    let combined: Vec<(usize, usize, usize)> = p_targets
                        .iter()
                        .zip(x.iter())
                        .chain(q_targets.iter().zip(y.iter()))
                        .enumerate()
                        .map(|(o, (&blk, &idx))| (blk, o, idx))
                        .collect();
                    let mut sorted = combined.clone();
                    sorted.sort_by_key(|&(blk, o, _)| (blk, o));
                    let mut koszul = 0usize;
                    for a in 0..sorted.len() {
                        for b in a + 1..sorted.len() {
                            if sorted[a].1 > sorted[b].1 {
                                koszul +=
                                    manifold.deg(sorted[a].2) * manifold.deg(sorted[b].2);
                            }
                        }
                    }
                    // Cup within each target block, in sorted order, then cup
                    // in the block's excess factors (even-degree when
                    // nonzero, so their position is immaterial).
                    let mut block_vecs: Vec<Vec<F>> = Vec::with_capacity(ks);
                    for blk in 0..ks {
                        let mut vec_acc: Option<Vec<F>> = None;
                        for &(b2, _, idx) in &sorted {
                            if b2 != blk {
                                continue;
                            }
                            vec_acc = Some(match vec_acc {
                                None => manifold.basis_vec(idx),
                                Some(v) => manifold.mul_vec_basis(&v, idx),
                            });
                        }
                        let mut vec_acc = vec_acc.expect("every block of p∨q is hit");
                        for _ in 0..block_excess[blk] {
                            vec_acc = manifold.mul_vecs(&vec_acc, &excess);
                        }
                        block_vecs.push(vec_acc);
                    }
                    // Expand the tensor product of the block vectors.
                    let sgn: F = sign_of(thom_exp + koszul);
                    let mut stack: Vec<(usize, Vec<usize>, F)> = vec![(0, Vec::new(), sgn)];
                    while let Some((blk, tup, coef)) = stack.pop() {
                        if blk == ks {
                            let row = tuple_space_idx[s][lex_index(h, &tup)];
                            let cur = mat.get(row, i * dq + j).clone();
                            mat.set(row, i * dq + j, cur.add(&coef));
                            continue;
                        }
                        for (e, c) in block_vecs[blk].iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut t2 = tup.clone();
                            t2.push(e);
                            stack.push((blk + 1, t2, coef.mul(c)));
                        }
                    }
                }
            }
            if !mat.is_zero() {
                products.insert((p, q), vec![(s, mat)]);
            }
        }
    }

    let base = Presheaf::new(poset, spaces, cover_maps)?;
    let monoidal = MonoidalPresheaf::new(base, products)?;
    Ok(DiagonalData {
        monoidal,
        bond,
        manifold: manifold.clone(),
        tuple_space_idx,
        space_tuple,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, GF2};
    use crate::graph::bond_lattice;
    use crate::poset::boolean_lattice;

    fn rat(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn graded_space_indexing_roundtrip() {
        let s = GradedSpace::from_labels(vec![
            (1, "a".into()),
            (0, "u".into()),
            (1, "b".into()),
            (2, "w".into()),
        ]);
        assert_eq!(s.total_dim(), 4);
        assert_eq!(s.dim(1), 2);
        assert_eq!(s.offset(0), 0);
        assert_eq!(s.offset(1), 1);
        assert_eq!(s.offset(2), 3);
        assert_eq!(s.label(0), "u");
        assert_eq!(s.label(1), "a");
        assert_eq!(s.label(2), "b");
        assert_eq!(s.label(3), "w");
        for i in 0..4 {
            let (d, p) = s.split_index(i);
            assert_eq!(s.index(d, p), i);
        }
        assert_eq!(s.dims_poly().to_string(), "t^2 + 2t + 1");
        assert_eq!(s.max_degree(), Some(2));
    }

    #[test]
    fn standard_manifold_data_validates() {
        ManifoldData::<Rat>::cp1().validate().unwrap();
        ManifoldData::<Rat>::elliptic().validate().unwrap();
        ManifoldData::<Rat>::circle().validate().unwrap();
        ManifoldData::<Rat>::real_space(3).validate().unwrap();
        ManifoldData::<Rat>::s1_x_r().validate().unwrap();
        ManifoldData::<GF2>::cp1().validate().unwrap();
        ManifoldData::<GF2>::real_space(2).validate().unwrap();
        ManifoldData::<GF2>::s1_x_r().validate().unwrap();
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(ManifoldData::<Rat>::cp1().euler_char(), 2);
        assert_eq!(ManifoldData::<Rat>::elliptic().euler_char(), 0);
        assert_eq!(ManifoldData::<Rat>::circle().euler_char(), 0);
        assert_eq!(ManifoldData::<Rat>::real_space(5).euler_char(), 1);
        assert_eq!(ManifoldData::<Rat>::cp1().poincare_poly().to_string(), "t^2 + 1");
    }

    #[test]
    fn manifold_validation_rejects_bad_data() {
        // Unit law broken.
        let mut m = ManifoldData::<Rat>::cp1();
        m.cup_table[0][1][1] = rat(2);
        assert!(m.validate().is_err());

        // Graded commutativity broken (b⌣a should be −a⌣b in odd degree).
        let mut m = ManifoldData::<Rat>::elliptic();
        m.cup_table[2][1][3] = rat(1);
        let err = m.validate().unwrap_err().to_string();
        assert!(err.contains("graded-commutative"), "{err}");

        // No diagonal information at all.
        let mut m = ManifoldData::<Rat>::cp1();
        m.diagonal.clear();
        m.diagonal_known = false;
        m.projective_complex = false;
        let err = m.validate().unwrap_err().to_string();
        assert!(err.contains("diagonal"), "{err}");

        // Diagonal term of the wrong degree.
        let mut m = ManifoldData::<Rat>::cp1();
        m.diagonal = vec![(rat(1), 0, 0)];
        assert!(m.validate().is_err());

        // Euler-class consistency: [Δ] scaled by 3 no longer multiplies to χ·top.
        let mut m = ManifoldData::<Rat>::cp1();
        for t in &mut m.diagonal {
            t.0 = rat(3);
        }
        let err = m.validate().unwrap_err().to_string();
        assert!(err.contains("χ"), "{err}");

        // Broken symmetry: [Δ] = 1⊗w only.
        let mut m = ManifoldData::<Rat>::cp1();
        m.diagonal = vec![(rat(1), 0, 1)];
        m.projective_complex = false;
        let err = m.validate().unwrap_err().to_string();
        assert!(err.contains("symmetric"), "{err}");
    }

    #[test]
    fn skyscraper_on_boolean_lattice() {
        let b2 = boolean_lattice(2);
        let lgp = LocallyGeometricPoset::from_lattice(&b2).unwrap();
        let space = GradedSpace::from_dims(&[(0, 1), (3, 2)]);
        // Element order: 0̂, atoms "a0", "a1", then 1̂.
        let alpha = 1; // an atom
        let sky = skyscraper_presheaf::<Rat>(&lgp, alpha, &space);
        assert_eq!(sky.space(0).total_dim(), 3);
        assert_eq!(sky.space(alpha).total_dim(), 3);
        assert_eq!(sky.space(2).total_dim(), 0);
        assert_eq!(sky.space(3).total_dim(), 0);
        assert_eq!(*sky.cover_map(alpha, 0), Matrix::identity(3));
        assert_eq!(sky.cover_map(3, alpha).rows(), 3);
        assert_eq!(sky.cover_map(3, alpha).cols(), 0);
        sky.validate_functorial().unwrap();

        // α = 1̂ gives the constant presheaf.
        let sky = skyscraper_presheaf::<Rat>(&lgp, 3, &space);
        for p in 0..4 {
            assert_eq!(sky.space(p).total_dim(), 3);
        }
        sky.validate_functorial().unwrap();
    }

    #[test]
    fn diagonal_cp1_k2_restriction_is_the_diagonal_class() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(2)).unwrap();
        let l = data.bond().lattice.clone();
        let (zero, one) = (l.zero_hat(), l.one_hat());
        let f = data.presheaf().cover_map(one, zero);
        // C_1̂ basis: "1" (degree 2), "w" (degree 4).
        assert_eq!(data.presheaf().space(one).label(0), "1");
        assert_eq!(data.presheaf().space(one).label(1), "w");
        // u⊗1 ↦ 1⊗w + w⊗1.
        let col0 = f.col(0);
        let i_1w = data.space_index(zero, &[0, 1]);
        let i_w1 = data.space_index(zero, &[1, 0]);
        let i_ww = data.space_index(zero, &[1, 1]);
        assert_eq!(col0[i_1w], rat(1));
        assert_eq!(col0[i_w1], rat(1));
        assert_eq!(col0.iter().filter(|c| !c.is_zero()).count(), 2);
        // u⊗w ↦ w⊗w.
        let col1 = f.col(1);
        assert_eq!(col1[i_ww], rat(1));
        assert_eq!(col1.iter().filter(|c| !c.is_zero()).count(), 1);
    }

    #[test]
    fn diagonal_s1_k2_restriction_matches_hand_computation() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(2)).unwrap();
        let l = data.bond().lattice.clone();
        let (zero, one) = (l.zero_hat(), l.one_hat());
        let f = data.presheaf().cover_map(one, zero);
        // 1 ↦ 1⊗θ − θ⊗1, θ ↦ −θ⊗θ.
        let col0 = f.col(0);
        assert_eq!(col0[data.space_index(zero, &[0, 1])], rat(1));
        assert_eq!(col0[data.space_index(zero, &[1, 0])], rat(-1));
        let col1 = f.col(1);
        assert_eq!(col1[data.space_index(zero, &[1, 1])], rat(-1));
        assert_eq!(col1.iter().filter(|c| !c.is_zero()).count(), 1);
    }

    #[test]
    fn diagonal_presheaf_grading_matches_tensor_powers() {
        let mfd = ManifoldData::<Rat>::cp1();
        let data = diagonal_presheaf(&mfd, &SimpleGraph::complete(3)).unwrap();
        let pm = mfd.poincare_poly();
        for p in 0..data.poset().len() {
            let r = data.bond().lattice.rank(p) as i64;
            let k = data.bond().partitions[p].num_blocks();
            let expected = pm.pow(k).shifted(0, mfd.real_dim as i64 * r);
            assert_eq!(data.presheaf().space(p).dims_poly(), expected);
        }
    }

    #[test]
    fn diagonal_s1_k3_rational_is_a_valid_monoidal_presheaf() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(3)).unwrap();
        data.monoidal().validate().unwrap();
    }

    #[test]
    fn diagonal_cp1_k3_rational_is_a_valid_monoidal_presheaf() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        data.monoidal().validate().unwrap();
    }

    #[test]
    fn diagonal_elliptic_k2_rational_is_a_valid_monoidal_presheaf() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::elliptic(), &SimpleGraph::complete(2))
                .unwrap();
        data.monoidal().validate().unwrap();
    }

    #[test]
    fn diagonal_s1_k3_gf2_is_a_valid_monoidal_presheaf() {
        let data =
            diagonal_presheaf(&ManifoldData::<GF2>::circle(), &SimpleGraph::complete(3)).unwrap();
        data.monoidal().validate().unwrap();
    }

    #[test]
    fn diagonal_zero_diagonal_has_zero_restrictions() {
        let data =
            diagonal_presheaf(&ManifoldData::<GF2>::s1_x_r(), &SimpleGraph::complete(3)).unwrap();
        for &(lo, up) in data.poset().poset().covers() {
            assert!(data.presheaf().cover_map(up, lo).is_zero());
        }
        data.monoidal().validate().unwrap();
    }

    #[test]
    fn diagonal_unit_acts_as_identity() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        let zero = data.bond().lattice.zero_hat();
        let k0 = data.bond().partitions[zero].num_blocks();
        let unit = data.space_index(zero, &vec![0; k0]);
        for q in 0..data.poset().len() {
            for j in 0..data.presheaf().space(q).total_dim() {
                let comps = data.monoidal().product_basis(zero, unit, q, j);
                assert_eq!(comps.len(), 1);
                let (s, v) = &comps[0];
                assert_eq!(*s, q);
                let mut expected = vec![rat(0); data.presheaf().space(q).total_dim()];
                expected[j] = rat(1);
                assert_eq!(*v, expected);
            }
        }
    }

    #[test]
    fn corrupted_restriction_map_fails_validation_with_named_cover() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::cp1(), &SimpleGraph::complete(3)).unwrap();
        let base = data.presheaf();
        let poset = base.poset().clone();
        let spaces = base.spaces().to_vec();
        let mut maps: HashMap<(usize, usize), Matrix<Rat>> = HashMap::new();
        // Corrupt one rank-2 → rank-1 map (stays degree-preserving, so the
        // constructor accepts it and functoriality must catch it).
        let target = poset
            .poset()
            .covers()
            .iter()
            .find(|&&(lo, _)| poset.poset().rank(lo) == 1)
            .copied()
            .unwrap();
        for &(lo, up) in poset.poset().covers() {
            let mut mat = base.cover_map(up, lo).clone();
            if (lo, up) == target {
                let mut hit = false;
                'outer: for c in 0..mat.cols() {
                    for r in 0..mat.rows() {
                        if !mat.get(r, c).is_zero() {
                            let v = mat.get(r, c).clone();
                            mat.set(r, c, v.mul(&rat(2)));
                            hit = true;
                            break 'outer;
                        }
                    }
                }
                assert!(hit);
            }
            maps.insert((up, lo), mat);
        }
        let corrupted = Presheaf::new(poset, spaces, maps).unwrap();
        let err = corrupted.validate_functorial().unwrap_err();
        assert!(err.contains("not functorial"), "{err}");
    }

    #[test]
    fn corrupted_product_fails_monoidal_validation() {
        let data =
            diagonal_presheaf(&ManifoldData::<Rat>::circle(), &SimpleGraph::complete(3)).unwrap();
        let mono = data.monoidal();
        let mut products: ProductMaps<Rat> = HashMap::new();
        let po = mono.poset().poset();
        let atom = po.elements_of_rank(1)[0];
        let zero = 0usize;
        for p in 0..po.len() {
            for q in 0..po.len() {
                let comps = mono.product_components(p, q);
                if comps.is_empty() {
                    continue;
                }
                let mut comps: Vec<(usize, Matrix<Rat>)> = comps.to_vec();
                if (p, q) == (atom, zero) {
                    let (_, mat) = &mut comps[0];
                    'outer: for c in 0..mat.cols() {
                        for r in 0..mat.rows() {
                            if !mat.get(r, c).is_zero() {
                                let v = mat.get(r, c).clone();
                                mat.set(r, c, v.mul(&rat(3)));
                                break 'outer;
                            }
                        }
                    }
                }
                products.insert((p, q), comps);
            }
        }
        let corrupted = MonoidalPresheaf::new(mono.base().clone(), products).unwrap();
        let err = corrupted.validate().unwrap_err();
        assert!(
            err.contains("not compatible") || err.contains("not associative"),
            "{err}"
        );
    }

    #[test]
    fn composed_map_of_skyscraper_is_identity_on_downset() {
        let bl = bond_lattice(&SimpleGraph::complete(3)).unwrap();
        let lgp = LocallyGeometricPoset::from_lattice(&bl.lattice).unwrap();
        let space = GradedSpace::from_dims(&[(0, 2)]);
        let top = bl.lattice.one_hat();
        let sky = skyscraper_presheaf::<GF2>(&lgp, top, &space);
        let m = sky.map(top, 0).unwrap();
        assert_eq!(m, Matrix::identity(2));
        sky.validate_functorial().unwrap();
    }
}
