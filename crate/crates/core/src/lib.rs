//! Exact intersection theory for rational cycles on finite quotient
//! singularities `Cⁿ/G`.

pub mod arith;
pub mod cycle;
pub mod error;
pub mod forms;
pub mod group;
pub mod poly;
pub mod quotient;

pub use arith::{BaseField, Matrix, Scalar, UniPoly};
pub use error::{Error, Result};
pub use cycle::{CycleFamily, DownstairsCycle, ModelMap, OrbitClass, UpstairsCycle};
pub use forms::DiffForm;
pub use group::FiniteMatrixGroup;
pub use poly::{Budget, Ideal, MultiPoly, PolyRing, Ring};
pub use quotient::{LocalModel, Model};
