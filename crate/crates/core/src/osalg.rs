//! The Orlik–Solomon algebra of a geometric lattice.
//!
//! Fix a total order on the atoms. The algebra is the exterior algebra on
//! the atoms modulo the ideal generated by ∂e_S over dependent atom sets S,
//! where ∂e_S = Σ_j (−1)^{j−1} e_{S∖a_j}. It is graded by the lattice:
//! the piece at p has the no-broken-circuit (NBC) monomials with join p as a
//! basis, of size (−1)^{r(p)}·μ(0̂,p). Products and boundaries are reduced
//! to the NBC basis by rewriting along circuit relations; an independent
//! linear-algebra oracle recomputes the graded dimensions from scratch so
//! the combinatorial basis can be cross-checked.

use crate::field::Field;
use crate::matrix::Matrix;
use crate::poset::GeometricLattice;
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Strictly increasing list of atom positions (in the algebra's atom order).
pub type OSMonomial = Vec<usize>;

/// A minimal dependent set of atoms. `head` is its least atom; removing the
/// head leaves the broken circuit.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub elems: Vec<usize>,
    pub mask: u128,
    pub broken_mask: u128,
    pub head: usize,
}

/// A linear combination of NBC monomials with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OSElement<F: Field> {
    pub terms: BTreeMap<OSMonomial, F>,
}

impl<F: Field> OSElement<F> {
    pub fn zero() -> Self {
        OSElement { terms: BTreeMap::new() }
    }
    pub fn monomial(mono: OSMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mono, F::one());
        OSElement { terms }
    }
    pub fn unit() -> Self {
        Self::monomial(Vec::new())
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, mono: OSMonomial, coef: F) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&coef);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OSElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect() }
    }
    pub fn neg(&self) -> Self {
        OSElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.neg())).collect() }
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Exactness report for the ∂-complex of a lower interval.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    /// tensor degree ↦ homology dimension (only nonzero entries).
    pub homology: BTreeMap<usize, usize>,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct OSAlgebra {
    lattice: GeometricLattice,
    /// atom position → lattice element, in the chosen atom order.
    atom_elems: Vec<usize>,
    circuits: Vec<Circuit>,
    /// lattice element → NBC monomials of that grade, lex-sorted.
    nbc: Vec<Vec<OSMonomial>>,
    /// monomial → position within its grade's basis list.
    position: HashMap<OSMonomial, usize>,
}

fn mask_of(mono: &[usize]) -> u128 {
    mono.iter().fold(0u128, |m, &a| m | (1u128 << a))
}

/// Merge two strictly increasing disjoint lists; returns the merged list and
/// the sign of the shuffle (−1 per inversion). `None` if they intersect.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining elements of a
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((out, sign))
}

/// Build the algebra with atoms ordered by lattice element order (labels
/// lexicographic within rank 1).
pub fn build_os(lattice: &GeometricLattice) -> Result<OSAlgebra> {
    let order: Vec<usize> = (0..lattice.atoms().len()).collect();
    build_os_with_order(lattice, &order)
}

/// Build with an explicit atom order: `order[i]` is the index into
/// `lattice.atoms()` placed at position i.
pub fn build_os_with_order(lattice: &GeometricLattice, order: &[usize]) -> Result<OSAlgebra> {
    let atoms = lattice.atoms();
    if order.len() != atoms.len() {
        return Err(Error::BadElement("atom order must be a permutation of the atoms".into()));
    }
    let mut seen = vec![false; atoms.len()];
    for &i in order {
        if i >= atoms.len() || seen[i] {
            return Err(Error::BadElement("atom order must be a permutation of the atoms".into()));
        }
        seen[i] = true;
    }
    if atoms.len() > 128 {
        return Err(Error::Unsupported(format!(
            "at most 128 atoms supported, lattice has {}",
            atoms.len()
        )));
    }
    let atom_elems: Vec<usize> = order.iter().map(|&i| atoms[i]).collect();
    let circuits = enumerate_circuits(lattice, &atom_elems);
    let nbc = enumerate_nbc(lattice, &atom_elems, &circuits);
    let mut position = HashMap::new();
    for basis in &nbc {
        for (i, m) in basis.iter().enumerate() {
            position.insert(m.clone(), i);
        }
    }
    let alg =
        OSAlgebra { lattice: lattice.clone(), atom_elems, circuits, nbc, position };
    // The NBC count must reproduce the Möbius dimension formula.
    for p in 0..alg.lattice.len() {
        let mu = alg.lattice.mobius(alg.lattice.zero_hat(), p)?;
        let expect = if alg.lattice.rank(p).is_multiple_of(2) { mu } else { -mu };
        if expect < 0 || alg.nbc[p].len() != expect as usize {
            return Err(Error::NotGeometric(format!(
                "basis size at {} is {}, Möbius predicts {}",
                alg.lattice.label(p),
                alg.nbc[p].len(),
                expect
            )));
        }
    }
    Ok(alg)
}

/// Minimal dependent sets, found size by size: a dependent (k+1)-set whose
/// subsets of size ≤ k contain no circuit is itself a circuit.
fn enumerate_circuits(lattice: &GeometricLattice, atom_elems: &[usize]) -> Vec<Circuit> {
    let n = atom_elems.len();
    let max_size = lattice.rank(lattice.one_hat()) + 1;
    let mut circuits: Vec<Circuit> = Vec::new();
    // independent sets of the current size, with their joins
    let mut frontier: Vec<(Vec<usize>, u128, usize)> =
        vec![(Vec::new(), 0u128, lattice.zero_hat())];
    for _size in 1..=max_size {
        let mut next = Vec::new();
        for (set, mask, join) in &frontier {
            let start = set.last().map_or(0, |&l| l + 1);
            for a in start..n {
                let mask2 = mask | (1u128 << a);
                if circuits.iter().any(|c| c.mask & mask2 == c.mask) {
                    continue;
                }
                let join2 = lattice.join(*join, atom_elems[a]);
                let mut set2 = set.clone();
                set2.push(a);
                if lattice.rank(join2) == set2.len() {
                    next.push((set2, mask2, join2));
                } else {
                    // dependent, and no smaller circuit inside: minimal
                    let head = set2[0];
                    let broken_mask = mask2 & !(1u128 << head);
                    circuits.push(Circuit { elems: set2, mask: mask2, broken_mask, head });
                }
            }
        }
        frontier = next;
    }
    circuits
}

/// All monomials containing no broken circuit, grouped by grade (= join).
/// Broken-circuit-free sets are automatically independent.
fn enumerate_nbc(
    lattice: &GeometricLattice,
    atom_elems: &[usize],
    circuits: &[Circuit],
) -> Vec<Vec<OSMonomial>> {
    let n = atom_elems.len();
    let mut nbc: Vec<Vec<OSMonomial>> = vec![Vec::new(); lattice.len()];
    let mut stack: Vec<(Vec<usize>, u128, usize)> =
        vec![(Vec::new(), 0u128, lattice.zero_hat())];
    while let Some((set, mask, join)) = stack.pop() {
        nbc[join].push(set.clone());
        let start = set.last().map_or(0, |&l| l + 1);
        // push in reverse so the DFS emits extensions in lex order
        for a in (start..n).rev() {
            let mask2 = mask | (1u128 << a);
            if circuits.iter().any(|c| c.broken_mask & mask2 == c.broken_mask) {
                continue;
            }
            let join2 = lattice.join(join, atom_elems[a]);
            debug_assert_eq!(lattice.rank(join2), set.len() + 1);
            let mut set2 = set.clone();
            set2.push(a);
            stack.push((set2, mask2, join2));
        }
    }
    // `pop` reverses once more; restore lex order per grade.
    for basis in &mut nbc {
        basis.sort();
    }
    nbc
}

impl OSAlgebra {
    pub fn lattice(&self) -> &GeometricLattice {
        &self.lattice
    }
    pub fn atom_count(&self) -> usize {
        self.atom_elems.len()
    }
    /// Lattice element of the atom at a given position.
    pub fn atom_element(&self, pos: usize) -> usize {
        self.atom_elems[pos]
    }
    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }
    pub fn basis(&self, p: usize) -> &[OSMonomial] {
        &self.nbc[p]
    }
    pub fn dim(&self, p: usize) -> usize {
        self.nbc[p].len()
    }
    pub fn dims(&self) -> Vec<usize> {
        self.nbc.iter().map(Vec::len).collect()
    }
    pub fn total_dim(&self) -> usize {
        self.nbc.iter().map(Vec::len).sum()
    }
    /// Position of an NBC monomial inside its grade's basis.
    pub fn basis_position(&self, mono: &OSMonomial) -> Option<usize> {
        self.position.get(mono).copied()
    }

    pub fn monomial_join(&self, mono: &[usize]) -> usize {
        mono.iter().fold(self.lattice.zero_hat(), |j, &a| self.lattice.join(j, self.atom_elems[a]))
    }

    pub fn is_independent(&self, mono: &[usize]) -> bool {
        self.lattice.rank(self.monomial_join(mono)) == mono.len()
    }

    /// Rewrite coef·e_mono into NBC monomials, accumulating into `out`.
    /// `mono` must be strictly increasing and independent.
    fn reduce_into<F: Field>(&self, mono: OSMonomial, coef: F, out: &mut OSElement<F>) {
        let mask = mask_of(&mono);
        let Some(circuit) =
            self.circuits.iter().find(|c| c.broken_mask & mask == c.broken_mask)
        else {
            out.add_term(mono, coef);
            return;
        };
        // mono ⊇ broken circuit B = C∖head; head ∉ mono (else mono ⊇ C).
        let b: Vec<usize> = circuit.elems.iter().copied().filter(|&a| a != circuit.head).collect();
        let rest: Vec<usize> = mono.iter().copied().filter(|a| !b.contains(a)).collect();
        let (_, outer_sign) = merge_sign(&b, &rest).expect("B and rest are disjoint");
        for (j, &bj) in b.iter().enumerate() {
            // e_B = Σ_j (−1)^j e_{C∖b_j}  (0-based j)
            let cj: Vec<usize> = circuit.elems.iter().copied().filter(|&a| a != bj).collect();
            let Some((merged, inner_sign)) = merge_sign(&cj, &rest) else {
                unreachable!("head not in rest, C∖b_j ∖ head ⊂ mono")
            };
            if !self.is_independent(&merged) {
                continue;
            }
            let sign = outer_sign * inner_sign * if j % 2 == 0 { 1 } else { -1 };
            let c = if sign > 0 { coef.clone() } else { coef.neg() };
            self.reduce_into(merged, c, out);
        }
    }

    /// Product of basis monomials, reduced to the NBC basis.
    pub fn mul_monomials<F: Field>(&self, s: &[usize], t: &[usize]) -> OSElement<F> {
        let mut out = OSElement::zero();
        let Some((merged, sign)) = merge_sign(s, t) else {
            return out; // shared atom
        };
        if !self.is_independent(&merged) {
            return out; // dependent product vanishes
        }
        let coef = if sign > 0 { F::one() } else { F::one().neg() };
        self.reduce_into(merged, coef, &mut out);
        out
    }

    pub fn mul<F: Field>(&self, x: &OSElement<F>, y: &OSElement<F>) -> OSElement<F> {
        let mut out = OSElement::zero();
        for (s, cs) in &x.terms {
            for (t, ct) in &y.terms {
                let prod = self.mul_monomials::<F>(s, t);
                let c = cs.mul(ct);
                for (m, v) in prod.terms {
                    out.add_term(m, v.mul(&c));
                }
            }
        }
        out
    }

    /// ∂e_S = Σ_j (−1)^{j−1} e_{S∖a_j}, reduced to the NBC basis.
    pub fn boundary_monomial<F: Field>(&self, s: &[usize]) -> OSElement<F> {
        let mut out = OSElement::zero();
        for j in 0..s.len() {
            let sub: Vec<usize> = s.iter().copied().enumerate().filter(|&(i, _)| i != j).map(|(_, a)| a).collect();
            let coef = if j % 2 == 0 { F::one() } else { F::one().neg() };
            if self.is_independent(&sub) {
                self.reduce_into(sub, coef, &mut out);
            }
        }
        out
    }

    pub fn boundary<F: Field>(&self, x: &OSElement<F>) -> OSElement<F> {
        let mut out = OSElement::zero();
        for (m, c) in &x.terms {
            let b = self.boundary_monomial::<F>(m);
            for (bm, bc) in b.terms {
                out.add_term(bm, bc.mul(c));
            }
        }
        out
    }

    /// Coordinates of the grade-p part of x in the NBC basis at p.
    pub fn grade_vector<F: Field>(&self, x: &OSElement<F>, p: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim(p)];
        for (m, c) in &x.terms {
            if self.monomial_join(m) == p {
                let i = self.position[m];
                v[i] = v[i].add(c);
            }
        }
        v
    }

    pub fn from_grade_vector<F: Field>(&self, p: usize, v: &[F]) -> OSElement<F> {
        let mut out = OSElement::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(self.nbc[p][i].clone(), c.clone());
            }
        }
        out
    }

    /// Homology of (A*([0̂,p]), ∂), graded by tensor degree. Exact for every
    /// p ≠ 0̂; for p = 0̂ the homology is the ground field in degree 0.
    pub fn exactness<F: Field>(&self, p: usize) -> ExactnessReport {
        // Basis of the interval subcomplex: NBC monomials with grade ≤ p.
        let max_deg = self.lattice.rank(p);
        let mut by_deg: Vec<Vec<OSMonomial>> = vec![Vec::new(); max_deg + 1];
        for q in 0..self.lattice.len() {
            if self.lattice.leq(q, p) {
                for m in &self.nbc[q] {
                    by_deg[m.len()].push(m.clone());
                }
            }
        }
        for v in &mut by_deg {
            v.sort();
        }
        let index: Vec<HashMap<OSMonomial, usize>> = by_deg
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
            .collect();
        // ∂_k : degree k → degree k−1
        let mut ranks = vec![0usize; max_deg + 2];
        for k in 1..=max_deg {
            let rows = by_deg[k - 1].len();
            let cols = by_deg[k].len();
            let mut mat: Matrix<F> = Matrix::zero(rows, cols);
            for (c, mono) in by_deg[k].iter().enumerate() {
                let b = self.boundary_monomial::<F>(mono);
                for (m, v) in b.terms {
                    mat.set(index[k - 1][&m], c, v);
                }
            }
            ranks[k] = mat.rank();
        }
        let mut homology = BTreeMap::new();
        for k in 0..=max_deg {
            let h = by_deg[k].len() - ranks[k] - ranks[k + 1];
            if h > 0 {
                homology.insert(k, h);
            }
        }
        let exact = homology.is_empty();
        ExactnessReport { homology, exact }
    }

    /// Human-readable monomial (atom positions).
    pub fn format_monomial(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = m.iter().map(|a| format!("e{a}")).collect();
        parts.join("^")
    }
}

/// Independent recomputation of dim A*(L)_p by linear algebra: generators
/// e_T over size-r(p) subsets with join p, relations the grade-p parts of
/// ∂e_U over (r(p)+1)-subsets with join p.
pub fn os_dim_oracle<F: Field>(lattice: &GeometricLattice, p: usize) -> usize {
    let atoms: Vec<usize> = lattice
        .atoms()
        .iter()
        .copied()
        .filter(|&a| lattice.leq(a, p))
        .collect();
    let r = lattice.rank(p);
    let gens = subsets_with_join(lattice, &atoms, r, p);
    if r == 0 {
        return 1; // the empty monomial spans grade 0̂
    }
    let rels = subsets_with_join(lattice, &atoms, r + 1, p);
    let index: HashMap<Vec<usize>, usize> =
        gens.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mut mat: Matrix<F> = Matrix::zero(rels.len(), gens.len());
    for (row, u) in rels.iter().enumerate() {
        for j in 0..u.len() {
            let sub: Vec<usize> =
                u.iter().copied().enumerate().filter(|&(i, _)| i != j).map(|(_, a)| a).collect();
            if let Some(&col) = index.get(&sub) {
                let coef = if j % 2 == 0 { F::one() } else { F::one().neg() };
                let cur = mat.get(row, col).add(&coef);
                mat.set(row, col, cur);
            }
        }
    }
    gens.len() - mat.rank()
}

/// All size-k subsets of the given lattice atoms whose join is exactly p
/// (elements are lattice indices, listed ascending).
fn subsets_with_join(
    lattice: &GeometricLattice,
    atoms: &[usize],
    k: usize,
    p: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    #[allow(clippy::too_many_arguments)] // recursion state, not an API
    fn rec(
        lattice: &GeometricLattice,
        atoms: &[usize],
        k: usize,
        p: usize,
        start: usize,
        join: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            if join == p {
                out.push(current.clone());
            }
            return;
        }
        let need = k - current.len();
        if atoms.len() - start < need {
            return;
        }
        for i in start..atoms.len() {
            current.push(atoms[i]);
            rec(lattice, atoms, k, p, i + 1, lattice.join(join, atoms[i]), current, out);
            current.pop();
        }
    }
    rec(lattice, atoms, k, p, 0, lattice.zero_hat(), &mut current, &mut out);
    out
}
