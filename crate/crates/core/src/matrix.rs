//! Dense exact linear algebra: rank, kernel bases, quotient bases.
//!
//! Everything is deterministic: Gaussian elimination always picks the first
//! nonzero entry in column order, so pivot sets—and therefore every basis this
//! crate prints—are reproducible.

use crate::field::Field;

/// A dense rows×cols matrix over an exact field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Field> std::fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Matrix–vector product (vector of length `cols`).
    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for c in 0..self.cols {
                    let e = self.get(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = acc.add(&e.mul(&v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Matrix product `self * rhs`.
    pub fn mul_mat(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<F> = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c).add(&a.mul(b));
                        out.set(r, c, cur);
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form together with the pivot column indices
    /// (strictly increasing; first nonzero entry in column order).
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // Find first row at or below `row` with nonzero entry in `col`.
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = m.get(row, col).inv();
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.row_sub_scaled(r, row, &factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &F) {
        for c in 0..self.cols {
            let v = self.get(r, c).mul(factor);
            self.set(r, c, v);
        }
    }

    /// row[r] -= factor * row[src]
    fn row_sub_scaled(&mut self, r: usize, src: usize, factor: &F) {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = self.get(r, c).sub(&factor.mul(s));
                self.set(r, c, v);
            }
        }
    }

    /// Row rank by exact Gaussian elimination; 0 for empty matrices.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space {v : self·v = 0}; size = cols − rank.
    /// Deterministic: one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![F::zero(); self.cols];
            vec[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                // row i: x_p + Σ_{free cols c} r[i][c]·x_c = 0
                let coeff = r.get(i, free);
                if !coeff.is_zero() {
                    vec[p] = coeff.neg();
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve self·x = b; returns one solution if consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }
}

/// Incrementally maintained row space in reduced echelon form. The workhorse
/// behind rank bookkeeping, homology representatives and quotient dimensions.
#[derive(Clone, Debug)]
pub struct RowSpace<F: Field> {
    dim: usize,
    /// rows kept in echelon form; `pivots[i]` is the pivot column of `rows[i]`,
    /// strictly increasing.
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(ambient_dim: usize) -> Self {
        RowSpace { dim: ambient_dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows (does not insert).
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for c in p..self.dim {
                    if !row[c].is_zero() {
                        v[c] = v[c].sub(&factor.mul(&row[c]));
                    }
                }
            }
        }
        v
    }

    /// Insert `v`; returns true iff it enlarged the span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for e in v.iter_mut() {
            if !e.is_zero() {
                *e = e.mul(&inv);
            }
        }
        // Back-substitute into existing rows to stay fully reduced.
        for (row, &q) in self.rows.iter_mut().zip(&self.pivots) {
            let _ = q;
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for c in 0..self.dim {
                    if !v[c].is_zero() {
                        row[c] = row[c].sub(&factor.mul(&v[c]));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }
}

/// Vectors completing a basis of the ambient space modulo `span(image)`:
/// the standard basis vectors at the non-pivot coordinates of the image's
/// echelon form (lowest-index pivots first, so the choice is deterministic).
pub fn quotient_basis<F: Field>(space_dim: usize, image: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut rs = RowSpace::new(space_dim);
    for v in image {
        assert_eq!(v.len(), space_dim, "image vector outside ambient space");
        rs.insert(v);
    }
    let mut out = Vec::new();
    for c in 0..space_dim {
        if !rs.pivots.contains(&c) {
            let mut e = vec![F::zero(); space_dim];
            e[c] = F::one();
            out.push(e);
        }
    }
    out
}

/// From `candidates` (in order), keep those that are independent modulo
/// `base` ∪ previously kept ones. Used for homology representatives:
/// candidates = kernel basis, base = boundary image.
pub fn complete_basis<F: Field>(
    ambient_dim: usize,
    base: &[Vec<F>],
    candidates: &[Vec<F>],
) -> Vec<Vec<F>> {
    let mut rs = RowSpace::new(ambient_dim);
    for v in base {
        rs.insert(v);
    }
    let mut kept = Vec::new();
    for v in candidates {
        if rs.insert(v) {
            kept.push(v.clone());
        }
    }
    kept
}
