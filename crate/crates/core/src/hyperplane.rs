//! Central hyperplane arrangements over ℚ: the intersection lattice built
//! from normal vectors, face counts by dimension, and the Poincaré
//! polynomial of the complexified complement.
//!
//! Subspaces are canonicalized as the reduced row-echelon form of their
//! defining normal vectors, so deduplication and containment are exact. The
//! lattice orders subspaces by reverse inclusion, with rank = codimension.

use crate::field::{Field, Rat};
use crate::matrix::Matrix;
use crate::osalg::build_os;
use crate::poly::LaurentPoly2;
use crate::poset::{GeometricLattice, RankedPoset};
use crate::{Error, Result};
use num::BigInt;
use std::collections::HashMap;

/// Cap on the number of hyperplanes; subset enumeration is exponential.
pub const MAX_HYPERPLANES: usize = 20;

/// A finite set of hyperplanes through the origin of ℚ^d, each given by a
/// nonzero normal vector; no two normals may be parallel.
#[derive(Clone, Debug)]
pub struct CentralArrangement {
    dim: usize,
    normals: Vec<Vec<Rat>>,
}

impl CentralArrangement {
    pub fn new(dim: usize, normals: Vec<Vec<Rat>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadArrangement("ambient dimension must be positive".into()));
        }
        if normals.len() > MAX_HYPERPLANES {
            return Err(Error::BadArrangement(format!(
                "{} hyperplanes exceed the cap of {MAX_HYPERPLANES}",
                normals.len()
            )));
        }
        let mut seen: HashMap<Vec<Rat>, usize> = HashMap::new();
        for (i, v) in normals.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::BadArrangement(format!(
                    "normal {i} has {} entries in ambient dimension {dim}",
                    v.len()
                )));
            }
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
                return Err(Error::BadArrangement(format!("normal {i} is zero")));
            };
            // scale so the leading entry is 1: parallel normals collide
            let inv = v[lead].inv();
            let canon: Vec<Rat> = v.iter().map(|x| x.mul(&inv)).collect();
            if let Some(&j) = seen.get(&canon) {
                return Err(Error::BadArrangement(format!(
                    "normals {j} and {i} define the same hyperplane"
                )));
            }
            seen.insert(canon, i);
        }
        Ok(CentralArrangement { dim, normals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<Rat>] {
        &self.normals
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.normals.len()
    }
}

/// The arrangement x_i = x_j (1 ≤ i < j ≤ n) in ℚ^n.
pub fn braid_arrangement(n: usize) -> Result<CentralArrangement> {
    if n == 0 {
        return Err(Error::BadArrangement("need at least one coordinate".into()));
    }
    let mut normals = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v[j] = Rat::one().neg();
            normals.push(v);
        }
    }
    CentralArrangement::new(n, normals)
}

/// The d coordinate hyperplanes x_i = 0 in ℚ^d.
pub fn coordinate_arrangement(d: usize) -> Result<CentralArrangement> {
    let mut normals = Vec::new();
    for i in 0..d {
        let mut v = vec![Rat::zero(); d];
        v[i] = Rat::one();
        normals.push(v);
    }
    CentralArrangement::new(d, normals)
}

/// The intersection lattice of an arrangement: one element per distinct
/// subspace arising as an intersection of hyperplanes (the ambient space is
/// the empty intersection), ordered by reverse inclusion.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    pub lattice: GeometricLattice,
    /// Per element: the sorted hyperplane indices containing the subspace.
    pub hyperplanes_through: Vec<Vec<usize>>,
    /// Per element: defining normal rows in reduced row-echelon form
    /// (codimension many).
    pub equations: Vec<Vec<Vec<Rat>>>,
}

/// Nonzero rows of the reduced row-echelon form of the given stack.
fn echelon_rows(rows: &[Vec<Rat>], extra: Option<&[Rat]>) -> Vec<Vec<Rat>> {
    let mut all: Vec<Vec<Rat>> = rows.to_vec();
    if let Some(v) = extra {
        all.push(v.to_vec());
    }
    if all.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(all).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Whether the vector lies in the row space of an echelon stack.
fn in_row_space(rows: &[Vec<Rat>], v: &[Rat]) -> bool {
    echelon_rows(rows, Some(v)).len() == rows.len()
}

pub fn intersection_lattice(a: &CentralArrangement) -> Result<IntersectionLattice> {
    // closure of {ambient} under intersecting with one hyperplane at a time
    let mut subspaces: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
    let mut index: HashMap<Vec<Vec<Rat>>, usize> = HashMap::new();
    index.insert(Vec::new(), 0);
    let mut frontier = 0;
    while frontier < subspaces.len() {
        let current = subspaces[frontier].clone();
        for normal in a.normals() {
            if in_row_space(&current, normal) {
                continue;
            }
            let next = echelon_rows(&current, Some(normal));
            if !index.contains_key(&next) {
                index.insert(next.clone(), subspaces.len());
                subspaces.push(next);
            }
        }
        frontier += 1;
    }

    let through: Vec<Vec<usize>> = subspaces
        .iter()
        .map(|rows| {
            (0..a.num_hyperplanes())
                .filter(|&i| in_row_space(rows, &a.normals()[i]))
                .collect()
        })
        .collect();
    let labels: Vec<String> = through
        .iter()
        .map(|t| {
            if t.is_empty() {
                "ambient".to_string()
            } else {
                t.iter().map(|i| format!("H{i}")).collect::<Vec<_>>().join("∩")
            }
        })
        .collect();
    let ranks: Vec<usize> = subspaces.iter().map(Vec::len).collect();

    let mut covers = Vec::new();
    for (q, rq) in subspaces.iter().enumerate() {
        for (p, rp) in subspaces.iter().enumerate() {
            if ranks[p] == ranks[q] + 1 && rq.iter().all(|row| in_row_space(rp, row)) {
                covers.push((q, p));
            }
        }
    }

    let poset = RankedPoset::new(labels.clone(), ranks, covers)?;
    let lattice = GeometricLattice::from_poset(poset)?;
    // re-order the per-element data to the lattice's canonical element order
    let position = |label: &str| -> usize {
        lattice
            .poset()
            .labels()
            .iter()
            .position(|l| l == label)
            .expect("labels are unique and preserved")
    };
    let mut hyperplanes_through = vec![Vec::new(); subspaces.len()];
    let mut equations = vec![Vec::new(); subspaces.len()];
    for (orig, label) in labels.iter().enumerate() {
        let new = position(label);
        hyperplanes_through[new] = through[orig].clone();
        equations[new] = subspaces[orig].clone();
    }
    Ok(IntersectionLattice { lattice, hyperplanes_through, equations })
}

/// Face counts `(f_0, …, f_d)` of the decomposition of ℚ^d ⊗ ℝ induced by
/// the arrangement: `f_k` sums, over the subspaces of dimension `k`, the
/// total dimension of the exterior-algebra quotient of the upper interval.
pub fn zaslavsky_f(a: &CentralArrangement) -> Result<Vec<u64>> {
    let il = intersection_lattice(a)?;
    let po = il.lattice.poset();
    let mut f = vec![0u64; a.dim() + 1];
    for p in 0..po.len() {
        let upper = po.upper_set(p)?;
        let gl = GeometricLattice::from_poset(upper.poset)?;
        let os = build_os(&gl)?;
        f[a.dim() - po.rank(p)] += os.total_dim() as u64;
    }
    Ok(f)
}

/// Poincaré polynomial of the complement of the complexified arrangement:
/// `Σ_p dim A(L)_p · t^{r(p)}` over the intersection lattice.
pub fn complex_poincare(a: &CentralArrangement) -> Result<LaurentPoly2> {
    let il = intersection_lattice(a)?;
    let os = build_os(&il.lattice)?;
    let mut poly = LaurentPoly2::zero();
    for p in 0..il.lattice.len() {
        poly.add_term(0, il.lattice.rank(p) as i64, BigInt::from(os.dim(p) as i64));
    }
    Ok(poly)
}
