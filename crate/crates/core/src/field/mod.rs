//! The scalar tower `k ⊂ K ⊂ K[t,t⁻¹] ⊂ K(t)` with the involution `ι`.

pub mod base;
pub mod ext;
pub mod fp;
pub mod laurent;
pub mod ratfn;
pub mod scalar;

pub use base::{BaseField, FieldElement, Rational, RingElement};
pub use ext::{Algebra, Desc, Ext, ExtKind};
pub use fp::{FpFrac, FpPoly};
pub use laurent::Laurent;
pub use ratfn::{decompose_over_f, RatFn};
pub use scalar::{FunctionScalar, TowerScalar};
