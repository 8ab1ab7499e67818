//! Exact linear algebra over `Z`, `Q` and `F_p`.
//!
//! The module houses the integer matrix type, Smith normal form with
//! unimodular transforms, kernels that are direct summands, rank over any
//! supported coefficient ring, homology of free chain complexes, and the
//! field-side solving used to express cocycles in a chosen basis.

mod field;
mod homology;
mod matrix;
mod snf;

pub use field::{
    express_in_quotient, express_many_in_quotient, CoefficientRing, Echelon, Prime, Scalar,
    ScalarMat,
};
pub use homology::{homology_at, merge_torsion, HomologyGroup};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, kernel_basis, rank_over, smith_normal_form, SnfResult};
