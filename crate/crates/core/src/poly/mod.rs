//! Multivariate polynomials, ideals and Gröbner bases.

mod decompose;
mod expr;
mod groebner;
mod ideal;
mod mfactor;
mod monomial;
mod multipoly;
mod ratfn;
mod ring;
mod zerodim;

pub use expr::{parse_expr, Expr};
pub use groebner::GroebnerBasis;
pub use ideal::{CanonIdeal, Ideal};
pub use monomial::{Monomial, TermOrder};
pub use multipoly::MultiPoly;
pub use ring::{Budget, PolyRing, Ring};
pub use decompose::{decompose, total_degree, Component};
pub use mfactor::{factor as factor_multivariate, gcd as gcd_multivariate};
pub use zerodim::{point_clusters, point_count, radical_zero_dim, PointCluster, SEPARATION_ATTEMPTS};
pub use ratfn::RationalFn;
