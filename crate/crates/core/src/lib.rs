//! Exact arithmetic for generalized quadratic forms over quaternion algebras
//! `Q = (K, ι, b)`, their Morita transfer to quadratic forms over the function
//! field `F = K(t)^ι`, quadratic pairs, and the descent of isotropic vectors
//! from `F` back to `Q`.

pub mod error;
pub mod field;
pub mod linalg;
pub mod quaternion;
pub mod forms;
pub mod morita;
pub mod pairs;
pub mod descent;
pub mod random;
pub mod oracles;
pub mod parse;
pub mod report;
pub mod selftest;

pub use error::{DescentError, FieldError, MatrixError, PairError, ParseError};
pub use field::{Algebra, BaseField, Desc, Ext, ExtKind, FpFrac, Laurent, RatFn, Rational};

/// `𝔽₂(s)`.
pub type F2s = FpFrac<2>;
/// `𝔽₃(s)`.
pub type F3s = FpFrac<3>;
