//! Finite ranked posets, geometric lattices and locally geometric posets.
//!
//! Elements are dense integer indices sorted by (rank, label), which is a
//! linear extension of the order; labels carry the domain meaning (partition,
//! subspace, …). Comparability is precomputed as bitsets, joins/meets as flat
//! tables, and the Möbius function is filled once per poset and then shared
//! read-only.

use crate::{Error, Result, DEFAULT_MAX_ELEMENTS};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Fixed-size bitset used for reachability rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)], len }
    }
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn or_with(&mut self, other: &Bits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }
    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A finite poset with covers, ranks and labels. `covers` holds pairs
/// `(q, p)` meaning p covers q; every cover raises rank by exactly 1, and
/// every minimal element has rank 0.
#[derive(Clone, Debug)]
pub struct RankedPoset {
    labels: Vec<String>,
    ranks: Vec<usize>,
    covers: Vec<(usize, usize)>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    up: Vec<Bits>,
    down: Vec<Bits>,
    mobius_table: OnceLock<Vec<HashMap<usize, i64>>>,
}

impl RankedPoset {
    /// Build a poset, sorting elements by (rank, label) and remapping covers.
    /// Rejects: >cap elements, cover pairs whose ranks don't differ by one,
    /// minimal elements with nonzero rank.
    pub fn new(labels: Vec<String>, ranks: Vec<usize>, covers: Vec<(usize, usize)>) -> Result<Self> {
        Self::new_with_cap(labels, ranks, covers, DEFAULT_MAX_ELEMENTS)
    }

    pub fn new_with_cap(
        labels: Vec<String>,
        ranks: Vec<usize>,
        covers: Vec<(usize, usize)>,
        cap: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n > cap {
            return Err(Error::SizeGuard { cap });
        }
        if ranks.len() != n {
            return Err(Error::NotRanked("ranks and labels differ in length".into()));
        }
        // Deterministic element order: (rank, label), original index as tiebreak.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (ranks[a], &labels[a], a).cmp(&(ranks[b], &labels[b], b)));
        let mut position = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let labels: Vec<String> = order.iter().map(|&o| labels[o].clone()).collect();
        let ranks: Vec<usize> = order.iter().map(|&o| ranks[o]).collect();
        let mut covers: Vec<(usize, usize)> = covers
            .into_iter()
            .map(|(q, p)| {
                if q >= n || p >= n {
                    return Err(Error::BadElement(format!("cover ({q},{p}) out of range")));
                }
                Ok((position[q], position[p]))
            })
            .collect::<Result<_>>()?;
        covers.sort();
        covers.dedup();
        for &(q, p) in &covers {
            if ranks[p] != ranks[q] + 1 {
                return Err(Error::NotRanked(format!(
                    "cover ({}, {}) jumps rank {} -> {}",
                    labels[q], labels[p], ranks[q], ranks[p]
                )));
            }
        }
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        for &(q, p) in &covers {
            covers_up[q].push(p);
            covers_down[p].push(q);
        }
        for v in covers_up.iter_mut().chain(covers_down.iter_mut()) {
            v.sort_unstable();
        }
        for i in 0..n {
            if covers_down[i].is_empty() && ranks[i] != 0 {
                return Err(Error::NotRanked(format!(
                    "element {} has rank {} but no lower cover",
                    labels[i], ranks[i]
                )));
            }
        }
        // Reachability: element order is a linear extension, so sweep downward.
        let mut up = vec![Bits::new(n); n];
        for i in (0..n).rev() {
            let mut b = Bits::new(n);
            b.set(i);
            for &p in &covers_up[i] {
                let row = up[p].clone();
                b.or_with(&row);
            }
            up[i] = b;
        }
        let mut down = vec![Bits::new(n); n];
        for i in 0..n {
            for j in up[i].iter_ones() {
                down[j].set(i);
            }
        }
        Ok(RankedPoset {
            labels,
            ranks,
            covers,
            covers_up,
            covers_down,
            up,
            down,
            mobius_table: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }
    /// Elements covering `i`.
    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }
    /// Elements covered by `i`.
    pub fn covers_down(&self, i: usize) -> &[usize] {
        &self.covers_down[i]
    }
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].get(b)
    }
    pub fn up_bits(&self, a: usize) -> &Bits {
        &self.up[a]
    }
    pub fn down_bits(&self, a: usize) -> &Bits {
        &self.down[a]
    }
    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }
    pub fn elements_of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.ranks[i] == r).collect()
    }
    /// Rank-1 elements.
    pub fn atoms(&self) -> Vec<usize> {
        self.elements_of_rank(1)
    }
    /// The unique minimal element, if there is exactly one.
    pub fn minimum(&self) -> Option<usize> {
        let mins: Vec<usize> =
            (0..self.len()).filter(|&i| self.covers_down[i].is_empty()).collect();
        if mins.len() == 1 {
            Some(mins[0])
        } else {
            None
        }
    }
    /// The unique maximal element, if there is exactly one.
    pub fn maximum(&self) -> Option<usize> {
        let maxs: Vec<usize> = (0..self.len()).filter(|&i| self.covers_up[i].is_empty()).collect();
        if maxs.len() == 1 {
            Some(maxs[0])
        } else {
            None
        }
    }

    /// Möbius function μ(p, q). Errors unless p ≤ q. The full table is
    /// computed on first use and shared afterwards.
    pub fn mobius(&self, p: usize, q: usize) -> Result<i64> {
        if !self.leq(p, q) {
            return Err(Error::BadElement(format!(
                "mobius({}, {}): not comparable",
                self.labels[p], self.labels[q]
            )));
        }
        let table = self.mobius_table.get_or_init(|| self.fill_mobius());
        Ok(table[p][&q])
    }

    fn fill_mobius(&self) -> Vec<HashMap<usize, i64>> {
        let n = self.len();
        let mut table = vec![HashMap::new(); n];
        for p in 0..n {
            let ups: Vec<usize> = self.up[p].iter_ones().collect();
            for &q in &ups {
                let mu = if q == p {
                    1
                } else {
                    let mut s: i64 = 0;
                    for &l in &ups {
                        if l == q {
                            break; // linear extension: l ≤ q implies l appears before q
                        }
                        if self.leq(l, q) {
                            s += table[p][&l];
                        }
                    }
                    -s
                };
                table[p].insert(q, mu);
            }
        }
        table
    }

    /// The induced subposet on {x : a ≤ x ≤ b}, ranks shifted so a has rank 0.
    pub fn interval(&self, a: usize, b: usize) -> Result<SubPoset> {
        if !self.leq(a, b) {
            return Err(Error::BadElement(format!(
                "interval [{}, {}]: endpoints not comparable",
                self.labels[a], self.labels[b]
            )));
        }
        let members: Vec<usize> = self.up[a].and(&self.down[b]).iter_ones().collect();
        self.induced(members, self.ranks[a])
    }

    /// The induced poset on {q : q ≥ p}, ranks shifted by −rank(p).
    pub fn upper_set(&self, p: usize) -> Result<SubPoset> {
        let members: Vec<usize> = self.up[p].iter_ones().collect();
        self.induced(members, self.ranks[p])
    }

    /// The induced poset on elements of rank ≤ max_rank.
    pub fn truncate(&self, max_rank: usize) -> Result<SubPoset> {
        let members: Vec<usize> = (0..self.len()).filter(|&i| self.ranks[i] <= max_rank).collect();
        self.induced(members, 0)
    }

    /// Induced subposet on an order-convex member set (covers restrict).
    fn induced(&self, members: Vec<usize>, rank_shift: usize) -> Result<SubPoset> {
        let index_of: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let labels = members.iter().map(|&g| self.labels[g].clone()).collect();
        let ranks = members.iter().map(|&g| self.ranks[g] - rank_shift).collect();
        let covers = self
            .covers
            .iter()
            .filter_map(|&(q, p)| Some((*index_of.get(&q)?, *index_of.get(&p)?)))
            .collect();
        let poset = RankedPoset::new(labels, ranks, covers)?;
        // RankedPoset::new re-sorts; recover the member order it chose.
        let mut to_global = vec![0usize; members.len()];
        {
            // labels within the member set are unique per (rank,label) in all
            // our constructions; match by (rank, label) then fall back to
            // multiplicity order.
            let mut pool: HashMap<(usize, String), Vec<usize>> = HashMap::new();
            for &g in &members {
                pool.entry((self.ranks[g] - rank_shift, self.labels[g].clone()))
                    .or_default()
                    .push(g);
            }
            for v in pool.values_mut() {
                v.sort_unstable();
                v.reverse(); // pop from the back => ascending assignment
            }
            for i in 0..poset.len() {
                let key = (poset.rank(i), poset.label(i).to_string());
                to_global[i] = pool.get_mut(&key).and_then(|v| v.pop()).ok_or_else(|| {
                    Error::BadElement("internal: induced subposet relabeling failed".into())
                })?;
            }
        }
        Ok(SubPoset { poset, to_global })
    }
}

/// An induced subposet together with the map back to the parent's indices.
#[derive(Clone, Debug)]
pub struct SubPoset {
    pub poset: RankedPoset,
    /// `to_global[i]` = parent index of local element i.
    pub to_global: Vec<usize>,
}

impl SubPoset {
    pub fn from_global(&self, g: usize) -> Option<usize> {
        self.to_global.iter().position(|&x| x == g)
    }
}

/// Outcome of the geometric-lattice check; failures carry a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometricVerdict {
    Geometric,
    Empty,
    NoMinimum,
    NoMaximum,
    /// No least upper bound for the named pair.
    JoinFails { p: usize, q: usize },
    /// No greatest lower bound for the named pair.
    MeetFails { p: usize, q: usize },
    /// r(p∧q) + r(p∨q) > r(p) + r(q).
    NotSemimodular { p: usize, q: usize },
    /// Element is not the join of the atoms below it.
    NotAtomic { element: usize },
}

impl GeometricVerdict {
    pub fn is_geometric(&self) -> bool {
        matches!(self, GeometricVerdict::Geometric)
    }
}

/// A geometric lattice: ranked, atomic, semimodular, with join/meet tables.
#[derive(Clone, Debug)]
pub struct GeometricLattice {
    poset: RankedPoset,
    join: Vec<usize>,
    meet: Vec<usize>,
    atoms: Vec<usize>,
}

impl GeometricLattice {
    /// Validate and build; the Err side carries the failure certificate.
    pub fn from_poset(poset: RankedPoset) -> Result<Self> {
        match Self::try_build(&poset) {
            Ok(l) => Ok(l),
            Err(v) => Err(Error::NotGeometric(v.describe(&poset))),
        }
    }

    fn try_build(poset: &RankedPoset) -> std::result::Result<Self, GeometricVerdict> {
        let n = poset.len();
        if n == 0 {
            return Err(GeometricVerdict::Empty);
        }
        let zero = poset.minimum().ok_or(GeometricVerdict::NoMinimum)?;
        poset.maximum().ok_or(GeometricVerdict::NoMaximum)?;
        let _ = zero;
        let mut join = vec![usize::MAX; n * n];
        let mut meet = vec![usize::MAX; n * n];
        for p in 0..n {
            for q in p..n {
                let ub = poset.up_bits(p).and(poset.up_bits(q));
                let j = least_of(poset, &ub).ok_or(GeometricVerdict::JoinFails { p, q })?;
                let lb = poset.down_bits(p).and(poset.down_bits(q));
                let m = greatest_of(poset, &lb).ok_or(GeometricVerdict::MeetFails { p, q })?;
                join[p * n + q] = j;
                join[q * n + p] = j;
                meet[p * n + q] = m;
                meet[q * n + p] = m;
            }
        }
        for p in 0..n {
            for q in 0..n {
                let j = join[p * n + q];
                let m = meet[p * n + q];
                if poset.rank(m) + poset.rank(j) > poset.rank(p) + poset.rank(q) {
                    return Err(GeometricVerdict::NotSemimodular { p, q });
                }
            }
        }
        let atoms = poset.atoms();
        for p in 0..n {
            if p == zero {
                continue;
            }
            let mut acc = zero;
            for &a in &atoms {
                if poset.leq(a, p) {
                    acc = join[acc * n + a];
                }
            }
            if acc != p {
                return Err(GeometricVerdict::NotAtomic { element: p });
            }
        }
        Ok(GeometricLattice { poset: poset.clone(), join, meet, atoms })
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }
    pub fn len(&self) -> usize {
        self.poset.len()
    }
    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }
    pub fn join(&self, p: usize, q: usize) -> usize {
        self.join[p * self.len() + q]
    }
    pub fn meet(&self, p: usize, q: usize) -> usize {
        self.meet[p * self.len() + q]
    }
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }
    pub fn zero_hat(&self) -> usize {
        self.poset.minimum().expect("lattice has a minimum")
    }
    pub fn one_hat(&self) -> usize {
        self.poset.maximum().expect("lattice has a maximum")
    }
    pub fn rank(&self, p: usize) -> usize {
        self.poset.rank(p)
    }
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }
    pub fn label(&self, p: usize) -> &str {
        self.poset.label(p)
    }
    pub fn mobius(&self, p: usize, q: usize) -> Result<i64> {
        self.poset.mobius(p, q)
    }

    pub fn join_all(&self, elems: &[usize]) -> usize {
        let mut acc = self.zero_hat();
        for &e in elems {
            acc = self.join(acc, e);
        }
        acc
    }

    /// True iff rank(∨ elems) = Σ rank(elems).
    pub fn independent(&self, elems: &[usize]) -> bool {
        let total: usize = elems.iter().map(|&e| self.rank(e)).sum();
        self.rank(self.join_all(elems)) == total
    }
}

fn least_of(poset: &RankedPoset, set: &Bits) -> Option<usize> {
    let first = set.iter_ones().next()?;
    for u in set.iter_ones() {
        if !poset.leq(first, u) {
            return None;
        }
    }
    Some(first)
}

fn greatest_of(poset: &RankedPoset, set: &Bits) -> Option<usize> {
    let last = set.iter_ones().last()?;
    for u in set.iter_ones() {
        if !poset.leq(u, last) {
            return None;
        }
    }
    Some(last)
}

/// Non-erroring geometric-lattice check: verdict plus certificate.
pub fn check_geometric(poset: &RankedPoset) -> GeometricVerdict {
    match GeometricLattice::try_build(poset) {
        Ok(_) => GeometricVerdict::Geometric,
        Err(v) => v,
    }
}

/// A poset with minimum all of whose lower intervals are geometric lattices.
/// Each interval [0̂, p] is kept with its own join tables; the Orlik–Solomon
/// machinery works grade by grade inside them.
#[derive(Clone, Debug)]
pub struct LocallyGeometricPoset {
    poset: RankedPoset,
    /// intervals[p] = the lattice [0̂, p] with its element map to the parent.
    intervals: Vec<IntervalLattice>,
}

#[derive(Clone, Debug)]
pub struct IntervalLattice {
    pub lattice: GeometricLattice,
    pub to_global: Vec<usize>,
    from_global: HashMap<usize, usize>,
}

impl IntervalLattice {
    pub fn from_global(&self, g: usize) -> Option<usize> {
        self.from_global.get(&g).copied()
    }
}

impl LocallyGeometricPoset {
    pub fn new(poset: RankedPoset) -> Result<Self> {
        let zero = poset
            .minimum()
            .ok_or_else(|| Error::NotRanked("locally geometric poset needs a minimum".into()))?;
        let mut intervals = Vec::with_capacity(poset.len());
        for p in 0..poset.len() {
            let sub = poset.interval(zero, p)?;
            let lattice = GeometricLattice::from_poset(sub.poset.clone()).map_err(|e| {
                Error::NotLocallyGeometric { element: p, reason: e.to_string() }
            })?;
            let from_global = sub
                .to_global
                .iter()
                .enumerate()
                .map(|(local, &g)| (g, local))
                .collect();
            intervals.push(IntervalLattice { lattice, to_global: sub.to_global, from_global });
        }
        Ok(LocallyGeometricPoset { poset, intervals })
    }

    pub fn from_lattice(lattice: &GeometricLattice) -> Result<Self> {
        Self::new(lattice.poset().clone())
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }
    pub fn len(&self) -> usize {
        self.poset.len()
    }
    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }
    pub fn zero_hat(&self) -> usize {
        self.poset.minimum().expect("has a minimum")
    }
    pub fn interval_lattice(&self, p: usize) -> &IntervalLattice {
        &self.intervals[p]
    }

    /// All minimal upper bounds of p and q (the set p ∨̊ q; may be empty; a
    /// singleton in any lattice).
    pub fn min_upper_bounds(&self, p: usize, q: usize) -> Vec<usize> {
        let ub: Vec<usize> = self.poset.up_bits(p).and(self.poset.up_bits(q)).iter_ones().collect();
        let mut out = Vec::new();
        'outer: for (i, &u) in ub.iter().enumerate() {
            for &v in &ub[..i] {
                if self.poset.leq(v, u) {
                    continue 'outer;
                }
            }
            out.push(u);
        }
        out
    }

    /// For p2 ≤ p1, q2 ≤ q1: the canonical map sending each s ∈ p1∨̊q1 to the
    /// unique t ∈ p2∨̊q2 with t ≤ s. Errors if preconditions fail or
    /// uniqueness fails (which would mean the poset is not locally geometric).
    pub fn canonical_lambda(
        &self,
        p1: usize,
        q1: usize,
        p2: usize,
        q2: usize,
    ) -> Result<Vec<(usize, usize)>> {
        if !self.poset.leq(p2, p1) || !self.poset.leq(q2, q1) {
            return Err(Error::BadElement(format!(
                "canonical map needs p2 ≤ p1 and q2 ≤ q1 (got {}≤{}: {}, {}≤{}: {})",
                self.poset.label(p2),
                self.poset.label(p1),
                self.poset.leq(p2, p1),
                self.poset.label(q2),
                self.poset.label(q1),
                self.poset.leq(q2, q1),
            )));
        }
        let source = self.min_upper_bounds(p1, q1);
        let target = self.min_upper_bounds(p2, q2);
        let mut map = Vec::with_capacity(source.len());
        for &s in &source {
            let ts: Vec<usize> = target.iter().copied().filter(|&t| self.poset.leq(t, s)).collect();
            if ts.len() != 1 {
                return Err(Error::NotLocallyGeometric {
                    element: s,
                    reason: format!(
                        "{} elements of the target minimal-upper-bound set lie below {}",
                        ts.len(),
                        self.poset.label(s)
                    ),
                });
            }
            map.push((s, ts[0]));
        }
        Ok(map)
    }

    /// Upper set [p, ∞) as a locally geometric poset (ranks shifted by −r(p)).
    pub fn upper_set(&self, p: usize) -> Result<(LocallyGeometricPoset, Vec<usize>)> {
        let sub = self.poset.upper_set(p)?;
        Ok((LocallyGeometricPoset::new(sub.poset.clone())?, sub.to_global))
    }
}

impl GeometricVerdict {
    pub fn describe(&self, poset: &RankedPoset) -> String {
        let lbl = |i: &usize| poset.label(*i).to_string();
        match self {
            GeometricVerdict::Geometric => "geometric".into(),
            GeometricVerdict::Empty => "empty poset".into(),
            GeometricVerdict::NoMinimum => "no unique minimal element".into(),
            GeometricVerdict::NoMaximum => "no unique maximal element".into(),
            GeometricVerdict::JoinFails { p, q } => {
                format!("join of {} and {} is not defined", lbl(p), lbl(q))
            }
            GeometricVerdict::MeetFails { p, q } => {
                format!("meet of {} and {} is not defined", lbl(p), lbl(q))
            }
            GeometricVerdict::NotSemimodular { p, q } => format!(
                "semimodular inequality fails for {} and {}",
                lbl(p),
                lbl(q)
            ),
            GeometricVerdict::NotAtomic { element } => {
                format!("element {} is not a join of atoms", lbl(element))
            }
        }
    }
}

/// The Boolean lattice on n atoms (subsets of {0..n-1} by inclusion).
pub fn boolean_lattice(n: usize) -> GeometricLattice {
    let total = 1usize << n;
    let label = |mask: usize| {
        let elems: Vec<String> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
        format!("{{{}}}", elems.join(","))
    };
    let labels: Vec<String> = (0..total).map(label).collect();
    let ranks: Vec<usize> = (0..total).map(|m| m.count_ones() as usize).collect();
    let mut covers = Vec::new();
    for m in 0..total {
        for i in 0..n {
            if m >> i & 1 == 0 {
                covers.push((m, m | (1 << i)));
            }
        }
    }
    let poset = RankedPoset::new(labels, ranks, covers).expect("boolean lattice is ranked");
    GeometricLattice::from_poset(poset).expect("boolean lattice is geometric")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 0̂ < {p,q} < {s1,s2}: both s1,s2 cover both p,q. Locally geometric,
    /// not a lattice: p ∨̊ q = {s1, s2}.
    pub(crate) fn double_diamond() -> LocallyGeometricPoset {
        let labels = vec!["0", "p", "q", "s1", "s2"].into_iter().map(String::from).collect();
        let ranks = vec![0, 1, 1, 2, 2];
        let covers = vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)];
        LocallyGeometricPoset::new(RankedPoset::new(labels, ranks, covers).unwrap()).unwrap()
    }

    #[test]
    fn mobius_base_and_boolean() {
        let b3 = boolean_lattice(3);
        let p = b3.poset();
        let zero = b3.zero_hat();
        let one = b3.one_hat();
        assert_eq!(p.mobius(zero, zero).unwrap(), 1);
        assert_eq!(p.mobius(one, one).unwrap(), 1);
        // Boolean lattice: μ(0̂,1̂) = (−1)^3.
        assert_eq!(p.mobius(zero, one).unwrap(), -1);
        // Σ_{p≤l≤q} μ(p,l) = 0 for p < q, on every comparable pair.
        for a in 0..p.len() {
            for b in 0..p.len() {
                if a != b && p.leq(a, b) {
                    let s: i64 = (0..p.len())
                        .filter(|&l| p.leq(a, l) && p.leq(l, b))
                        .map(|l| p.mobius(a, l).unwrap())
                        .sum();
                    assert_eq!(s, 0, "mobius sum nonzero on [{a},{b}]");
                }
            }
        }
    }

    #[test]
    fn mobius_errors_on_incomparable() {
        let b2 = boolean_lattice(2);
        let atoms = b2.atoms().to_vec();
        assert!(b2.poset().mobius(atoms[0], atoms[1]).is_err());
    }

    #[test]
    fn boolean_lattice_is_geometric() {
        assert!(check_geometric(boolean_lattice(3).poset()).is_geometric());
    }

    #[test]
    fn chain_with_rank_jump_is_not_atomic() {
        // 0̂ < a < b ranked (0,1,2): b is not a join of atoms.
        let labels = vec!["0".into(), "a".into(), "b".into()];
        let poset = RankedPoset::new(labels, vec![0, 1, 2], vec![(0, 1), (1, 2)]).unwrap();
        let verdict = check_geometric(&poset);
        assert_eq!(verdict, GeometricVerdict::NotAtomic { element: 2 });
    }

    #[test]
    fn interval_cases() {
        let b3 = boolean_lattice(3);
        let p = b3.poset();
        // one-element interval
        let single = p.interval(3, 3).unwrap();
        assert_eq!(single.poset.len(), 1);
        // [0̂, coatom] is a Boolean lattice on 2 atoms
        let coatom = p.elements_of_rank(2)[0];
        let sub = p.interval(b3.zero_hat(), coatom).unwrap();
        assert_eq!(sub.poset.len(), 4);
        assert!(check_geometric(&sub.poset).is_geometric());
        assert_eq!(sub.poset.max_rank(), 2);
        assert!(p.interval(coatom, b3.zero_hat()).is_err());
    }

    #[test]
    fn upper_set_cases() {
        let b3 = boolean_lattice(3);
        let p = b3.poset();
        assert_eq!(p.upper_set(b3.zero_hat()).unwrap().poset.len(), 8);
        assert_eq!(p.upper_set(b3.one_hat()).unwrap().poset.len(), 1);
        let atom = b3.atoms()[0];
        let up = p.upper_set(atom).unwrap();
        assert_eq!(up.poset.len(), 4);
        assert_eq!(up.poset.rank(0), 0);
    }

    #[test]
    fn min_upper_bounds_cases() {
        let b3 = boolean_lattice(3);
        let lg = LocallyGeometricPoset::from_lattice(&b3).unwrap();
        let zero = lg.zero_hat();
        let atoms = b3.atoms().to_vec();
        // p ∨̊ 0̂ = {p}
        assert_eq!(lg.min_upper_bounds(atoms[0], zero), vec![atoms[0]]);
        // lattice: singleton join
        assert_eq!(lg.min_upper_bounds(atoms[0], atoms[1]), vec![b3.join(atoms[0], atoms[1])]);
        // genuinely multiple minimal upper bounds
        let dd = double_diamond();
        let s = lg_elem(&dd, "p");
        let t = lg_elem(&dd, "q");
        let mut mub = dd.min_upper_bounds(s, t);
        mub.sort_unstable();
        assert_eq!(mub, vec![lg_elem(&dd, "s1"), lg_elem(&dd, "s2")]);
    }

    fn lg_elem(lg: &LocallyGeometricPoset, label: &str) -> usize {
        (0..lg.len()).find(|&i| lg.poset().label(i) == label).unwrap()
    }

    #[test]
    fn canonical_lambda_cases() {
        let dd = double_diamond();
        let p = lg_elem(&dd, "p");
        let q = lg_elem(&dd, "q");
        let zero = lg_elem(&dd, "0");
        // identity when endpoints repeat
        let id = dd.canonical_lambda(p, q, p, q).unwrap();
        for (s, t) in id {
            assert_eq!(s, t);
        }
        // q2 = 0̂: forced constant target p2
        let lam = dd.canonical_lambda(p, q, p, zero).unwrap();
        assert_eq!(lam.len(), 2);
        for (_, t) in lam {
            assert_eq!(t, p);
        }
        // composition: λ_{(p,q)→(0,0)} = λ_{(p,0)→(0,0)} ∘ λ_{(p,q)→(p,0)}
        let ab = dd.canonical_lambda(p, q, p, zero).unwrap();
        let bc = dd.canonical_lambda(p, zero, zero, zero).unwrap();
        let ac = dd.canonical_lambda(p, q, zero, zero).unwrap();
        for &(s, t) in &ac {
            let mid = ab.iter().find(|&&(a, _)| a == s).unwrap().1;
            let fin = bc.iter().find(|&&(a, _)| a == mid).unwrap().1;
            assert_eq!(fin, t);
        }
        // precondition violation
        assert!(dd.canonical_lambda(zero, zero, p, q).is_err());
    }

    #[test]
    fn independence_in_boolean_lattice() {
        let b3 = boolean_lattice(3);
        let atoms = b3.atoms().to_vec();
        assert!(b3.independent(&[atoms[0]]));
        assert!(b3.independent(&[atoms[0], atoms[1], atoms[2]]));
        assert!(!b3.independent(&[atoms[0], atoms[0]]));
    }

    #[test]
    fn truncation_is_locally_geometric_not_a_lattice() {
        let b3 = boolean_lattice(3);
        let tr = b3.poset().truncate(2).unwrap();
        assert_eq!(tr.poset.len(), 7);
        let lg = LocallyGeometricPoset::new(tr.poset.clone()).unwrap();
        assert!(!check_geometric(lg.poset()).is_geometric());
        // two rank-2 elements above a common pair of atoms stay comparable-free
        let a0 = lg.poset().atoms()[0];
        let a1 = lg.poset().atoms()[1];
        assert_eq!(lg.min_upper_bounds(a0, a1).len(), 1);
    }

    #[test]
    fn size_guard_fires() {
        let labels: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let ranks = vec![0; 10];
        match RankedPoset::new_with_cap(labels, ranks, vec![], 5) {
            Err(Error::SizeGuard { cap: 5 }) => {}
            other => panic!("expected size guard, got {other:?}"),
        }
    }
}
