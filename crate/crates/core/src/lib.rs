//! Exact computational engine for Orlik–Solomon algebras with presheaf
//! coefficients.
//!
//! The crate computes, over ℚ or GF(2):
//!
//! * geometric lattices and locally geometric posets (Möbius functions,
//!   intervals, minimal upper bounds, the canonical comparison map λ),
//! * bond lattices and chromatic polynomials of simple graphs,
//! * the Orlik–Solomon algebra of a geometric lattice (NBC basis, product,
//!   boundary ∂, exactness),
//! * presheaves of graded vector spaces on such posets, including sky-scraper
//!   presheaves and the diagonal presheaf attached to a manifold's cohomology
//!   ring,
//! * the resulting bigraded complex, its homology page, the induced ring
//!   structure, and degeneration detection,
//! * intersection lattices of central hyperplane arrangements, Zaslavsky face
//!   counts, and Poincaré polynomials of complexified complements,
//! * polynomial invariants of chromatic configuration spaces (two-variable
//!   lattice polynomials, ℤ₂ Poincaré polynomials, graded presentations,
//!   rational Betti numbers for projective surfaces).
//!
//! All linear algebra is exact (arbitrary-precision rationals or GF(2)); all
//! orderings are deterministic so repeated runs are byte-identical.

// Index loops here usually walk several arrays in lockstep (matrix entries,
// basis positions, partition blocks); iterator forms hide that symmetry.
#![allow(clippy::needless_range_loop)]

pub mod chromatic;
pub mod field;
pub mod formats;
pub mod graph;
pub mod hyperplane;
pub mod matrix;
pub mod osalg;
pub mod oscomplex;
pub mod poly;
pub mod poset;
pub mod presheaf;

/// Default cap on poset size; bond lattices grow like Bell numbers.
pub const DEFAULT_MAX_ELEMENTS: usize = 50_000;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("size guard: construction would exceed {cap} elements")]
    SizeGuard { cap: usize },
    #[error("not a ranked poset: {0}")]
    NotRanked(String),
    #[error("poset element out of range or incomparable: {0}")]
    BadElement(String),
    #[error("not a geometric lattice: {0}")]
    NotGeometric(String),
    #[error("not locally geometric: interval below element {element} fails: {reason}")]
    NotLocallyGeometric { element: usize, reason: String },
    #[error("invalid graph: {0}")]
    BadGraph(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("invalid arrangement: {0}")]
    BadArrangement(String),
    #[error("invalid manifold data: {0}")]
    BadManifold(String),
    #[error("presheaf validation failed: {0}")]
    Presheaf(String),
    #[error("input format error: {0}")]
    Format(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
