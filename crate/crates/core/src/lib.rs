//! Exact computation of the cohomology of quotients of moment-angle complexes
//! by freely acting subtori.
//!
//! Given a simplicial complex `K` on `{1, …, m}` and a rank-`k` subtorus
//! `H ⊂ T^m` acting freely on the moment-angle complex `Z_K`, the engine
//! computes the graded cohomology `H*(Z_K/H; R)` for `R ∈ {Z, Q, F_p}` as the
//! cohomology of the Koszul complex `Λ[t_1, …, t_{m−k}] ⊗ R[K]` with
//! `d t_j = λ_j`, where the linear forms `λ_j` span the annihilator of the
//! subtorus lattice. Over a field the cup-product structure is computed on
//! chosen cocycle representatives.
//!
//! Everything is exact: integer work runs on arbitrary-precision matrices
//! through Smith normal form, field work on rationals or prime fields.
//! Independent combinatorial oracles (the Hochster full-subcomplex
//! decomposition, brute-force freeness, toric quotient rings) live in
//! [`oracle`] and share nothing with the Koszul engine beyond the exact
//! linear algebra kernel.

pub mod error;
pub mod exact;
pub mod face_ring;
pub mod koszul;
pub mod oracle;
pub mod report;
pub mod simplicial;
pub mod torus;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
