//! Exact scalar arithmetic, univariate polynomials, factorization and dense
//! linear algebra.

pub mod factor;
pub mod linalg;
pub mod scalar;
pub mod unipoly;

pub use factor::{factor_over, factor_univariate, field_norm, DEFAULT_DEGREE_BOUND};
pub use linalg::{LinearSolution, Matrix};
pub use scalar::{BaseField, CyclotomicField, Scalar};
pub use unipoly::UniPoly;
