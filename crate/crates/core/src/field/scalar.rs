use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use super::base::BaseField;
use super::ext::{Desc, Ext};
use super::laurent::Laurent;

/// A commutative level of the tower `K ⊂ K[t,t⁻¹] ⊂ K(t)` carrying the
/// involution `ι`, over which quaternions `x0 + x1·j` are formed.
pub trait TowerScalar:
    Clone + PartialEq + Debug + Display + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    type Base: BaseField;

    fn algebra(&self) -> &Desc<Self::Base>;

    fn from_k(x: Ext<Self::Base>) -> Self;

    fn iota(&self) -> Self;

    fn is_zero(&self) -> bool;

    fn try_inverse(&self) -> Option<Self>;

    /// The value as an element of `K` when it has no `t`-dependence.
    fn as_constant(&self) -> Option<Ext<Self::Base>>;

    fn zero(alg: &Desc<Self::Base>) -> Self {
        Self::from_k(Ext::zero(alg))
    }

    fn one(alg: &Desc<Self::Base>) -> Self {
        Self::from_k(Ext::one(alg))
    }

    fn from_base(alg: &Desc<Self::Base>, c: Self::Base) -> Self {
        Self::from_k(Ext::from_base(alg, c))
    }

    fn is_iota_fixed(&self) -> bool {
        self.iota() == *self
    }
}

/// Levels containing `t`: the Laurent ring and the rational function field.
pub trait FunctionScalar: TowerScalar {
    fn from_laurent(x: Laurent<Self::Base>) -> Self;

    fn t(alg: &Desc<Self::Base>) -> Self {
        Self::from_laurent(Laurent::t(alg))
    }
}
