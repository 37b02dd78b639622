//! Simple graphs, set partitions, bond lattices and chromatic polynomials.
//!
//! The bond lattice of a graph G on n vertices consists of the partitions of
//! the vertex set whose blocks induce connected subgraphs, ordered by
//! refinement; its rank function is n − (number of blocks). The chromatic
//! polynomial is computed two independent ways (deletion–contraction and a
//! Möbius sum over the bond lattice) so each can certify the other.

use crate::poly::LaurentPoly2;
use crate::poset::{GeometricLattice, RankedPoset};
use crate::{Error, Result, DEFAULT_MAX_ELEMENTS};
use num::BigInt;
use std::collections::{HashMap, HashSet, VecDeque};

/// An undirected simple graph on vertices 0..n. Edges are stored with
/// endpoints ascending, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::BadGraph(format!("edge ({a},{b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::BadGraph(format!("loop at vertex {a} not allowed")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        es.dedup();
        Ok(SimpleGraph { n, edges: es })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        SimpleGraph::new(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        SimpleGraph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|i| (i, (i + 1) % n));
        SimpleGraph::new(n, edges).expect("cycle is simple")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.binary_search(&e).is_ok()
    }

    /// Remove one edge.
    pub fn delete_edge(&self, e: (usize, usize)) -> SimpleGraph {
        let e = (e.0.min(e.1), e.0.max(e.1));
        let edges = self.edges.iter().copied().filter(|&x| x != e);
        SimpleGraph::new(self.n, edges).expect("deletion keeps the graph simple")
    }

    /// Contract edge (i,j) with i<j: j is merged into i, vertices above j
    /// shift down by one, loops vanish and parallel edges collapse.
    pub fn contract_edge(&self, e: (usize, usize)) -> SimpleGraph {
        let (i, j) = (e.0.min(e.1), e.0.max(e.1));
        let relabel = |v: usize| {
            if v == j {
                i
            } else if v > j {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .filter(|&(a, b)| a != b);
        SimpleGraph::new(self.n - 1, edges).expect("contraction keeps the graph simple")
    }

    /// Connected components as sorted vertex lists, sorted by minimum vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// True if the given vertex set induces a connected subgraph.
    pub fn connects(&self, verts: &[usize]) -> bool {
        if verts.is_empty() {
            return false;
        }
        let set: HashSet<usize> = verts.iter().copied().collect();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([verts[0]]);
        seen.insert(verts[0]);
        while let Some(v) = queue.pop_front() {
            for &(a, b) in &self.edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if set.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Number of proper k-colorings, counted directly (exponential; for
    /// certifying small cases).
    pub fn count_proper_colorings(&self, k: usize) -> BigInt {
        let mut count = BigInt::from(0);
        let mut coloring = vec![0usize; self.n];
        self.color_rec(0, k, &mut coloring, &mut count);
        count
    }

    fn color_rec(&self, v: usize, k: usize, coloring: &mut Vec<usize>, count: &mut BigInt) {
        if v == self.n {
            *count += 1;
            return;
        }
        'colors: for c in 0..k {
            for &(a, b) in &self.edges {
                let other = if a == v && b < v {
                    b
                } else if b == v && a < v {
                    a
                } else {
                    continue;
                };
                if coloring[other] == c {
                    continue 'colors;
                }
            }
            coloring[v] = c;
            self.color_rec(v + 1, k, coloring, count);
        }
    }
}

/// A partition of {0..n-1} into nonempty blocks. Blocks are sorted
/// internally and ordered by minimum element; the label joins blocks with
/// `|` and elements with `,` (e.g. `0,1|2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition { blocks: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        let mut seen = HashSet::new();
        for b in &blocks {
            for &v in b {
                if !seen.insert(v) {
                    return Err(Error::BadPartition(format!("vertex {v} appears twice")));
                }
            }
        }
        let n = seen.len();
        if seen.iter().any(|&v| v >= n) {
            return Err(Error::BadPartition("blocks must cover 0..n exactly".into()));
        }
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Index of the block containing vertex v.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&v)).expect("vertex in some block")
    }

    /// Merge blocks with indices a and b into one (renormalizing).
    pub fn merge_blocks(&self, a: usize, b: usize) -> Partition {
        let mut blocks = self.blocks.clone();
        let (lo, hi) = (a.min(b), a.max(b));
        let moved = blocks.remove(hi);
        blocks[lo].extend(moved);
        blocks[lo].sort_unstable();
        blocks.sort_by_key(|b| b[0]);
        Partition { blocks }
    }

    /// True if every block of `self` is contained in a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut owner = HashMap::new();
        for (i, b) in other.blocks.iter().enumerate() {
            for &v in b {
                owner.insert(v, i);
            }
        }
        self.blocks.iter().all(|b| {
            let Some(&first) = b.first() else { return true };
            let Some(&o) = owner.get(&first) else { return false };
            b.iter().all(|v| owner.get(v) == Some(&o))
        })
    }

    /// If `coarser` is obtained from `self` by merging exactly two blocks,
    /// return (index of first merged block, index of second, index of the
    /// merged block in `coarser`).
    pub fn merge_witness(&self, coarser: &Partition) -> Option<(usize, usize, usize)> {
        if coarser.num_blocks() + 1 != self.num_blocks() || !self.refines(coarser) {
            return None;
        }
        let mut merged: Vec<usize> = Vec::new();
        let mut target = None;
        for (i, b) in self.blocks.iter().enumerate() {
            let d = coarser.block_of(b[0]);
            if coarser.blocks[d].len() != b.len() {
                merged.push(i);
                target = Some(d);
            }
        }
        match (merged.as_slice(), target) {
            (&[a, b], Some(d)) => Some((a, b, d)),
            _ => None,
        }
    }
}

/// The bond lattice of a graph; `partitions[i]` is the partition carried by
/// lattice element i (labels agree).
#[derive(Clone, Debug)]
pub struct BondLattice {
    pub lattice: GeometricLattice,
    pub partitions: Vec<Partition>,
}

impl BondLattice {
    pub fn element_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }
}

/// Build the bond lattice by closing the discrete partition under merges of
/// blocks joined by at least one edge.
pub fn bond_lattice(g: &SimpleGraph) -> Result<BondLattice> {
    bond_lattice_with_cap(g, DEFAULT_MAX_ELEMENTS)
}

pub fn bond_lattice_with_cap(g: &SimpleGraph, cap: usize) -> Result<BondLattice> {
    let n = g.num_vertices();
    let start = Partition::discrete(n);
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut parts: Vec<Partition> = Vec::new();
    let mut covers: Vec<(usize, usize)> = Vec::new();
    index.insert(start.label(), 0);
    parts.push(start);
    let mut head = 0;
    while head < parts.len() {
        let p = parts[head].clone();
        for a in 0..p.num_blocks() {
            for b in a + 1..p.num_blocks() {
                let joined = g.edges().iter().any(|&(u, v)| {
                    let (ba, bb) = (p.block_of(u), p.block_of(v));
                    (ba, bb) == (a, b) || (ba, bb) == (b, a)
                });
                if !joined {
                    continue;
                }
                let q = p.merge_blocks(a, b);
                let qi = match index.get(q.label().as_str()) {
                    Some(&i) => i,
                    None => {
                        let i = parts.len();
                        if i >= cap {
                            return Err(Error::SizeGuard { cap });
                        }
                        index.insert(q.label(), i);
                        parts.push(q);
                        i
                    }
                };
                covers.push((head, qi));
            }
        }
        head += 1;
    }
    let labels: Vec<String> = parts.iter().map(Partition::label).collect();
    let ranks: Vec<usize> = parts.iter().map(|p| n - p.num_blocks()).collect();
    let poset = RankedPoset::new_with_cap(labels, ranks, covers, cap)?;
    // RankedPoset sorted elements by (rank, label); realign the partitions.
    let by_label: HashMap<String, Partition> =
        parts.into_iter().map(|p| (p.label(), p)).collect();
    let partitions: Vec<Partition> = (0..poset.len())
        .map(|i| by_label[poset.label(i)].clone())
        .collect();
    let lattice = GeometricLattice::from_poset(poset)?;
    Ok(BondLattice { lattice, partitions })
}

/// Chromatic polynomial via deletion–contraction with memoization on the
/// (vertex count, edge list) encoding. Edgeless graph on n vertices ↦ t^n.
pub fn chromatic_poly_dc(g: &SimpleGraph) -> LaurentPoly2 {
    let mut memo: HashMap<SimpleGraph, LaurentPoly2> = HashMap::new();
    chromatic_rec(g, &mut memo)
}

fn chromatic_rec(g: &SimpleGraph, memo: &mut HashMap<SimpleGraph, LaurentPoly2>) -> LaurentPoly2 {
    if let Some(p) = memo.get(g) {
        return p.clone();
    }
    let out = match g.edges().first().copied() {
        None => LaurentPoly2::monomial(BigInt::from(1), 0, g.num_vertices() as i64),
        Some(e) => {
            let del = chromatic_rec(&g.delete_edge(e), memo);
            let con = chromatic_rec(&g.contract_edge(e), memo);
            del.sub(&con)
        }
    };
    memo.insert(g.clone(), out.clone());
    out
}

/// Chromatic polynomial as Σ_p μ(0̂,p)·t^{n−r(p)} over the bond lattice.
pub fn chromatic_poly_mobius(g: &SimpleGraph) -> Result<LaurentPoly2> {
    let bl = bond_lattice(g)?;
    let zero = bl.lattice.zero_hat();
    let n = g.num_vertices() as i64;
    let mut out = LaurentPoly2::zero();
    for p in 0..bl.lattice.len() {
        let mu = bl.lattice.mobius(zero, p)?;
        out.add_term(0, n - bl.lattice.rank(p) as i64, BigInt::from(mu));
    }
    Ok(out)
}

/// All simple graphs on exactly n vertices, one per isomorphism class,
/// each the lexicographically least edge-mask in its orbit. Practical for
/// n ≤ 7.
pub fn all_graphs_up_to_iso(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    // Edge-index action of each vertex permutation.
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perms.push(
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                    pair_index[&(a, b)]
                })
                .collect(),
        );
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let total = 1u64 << m;
    let mut seen = vec![false; total as usize];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask as usize] {
            continue;
        }
        reps.push(mask);
        for p in &perms {
            let mut image = 0u64;
            for (k, &pk) in p.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    image |= 1 << pk;
                }
            }
            seen[image as usize] = true;
        }
    }
    reps.into_iter()
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
            SimpleGraph::new(n, edges).expect("mask yields a simple graph")
        })
        .collect()
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
