//! The separable quadratic extension `K = k(ℓ)` and the algebra descriptor.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::base::{BaseField, FieldElement, RingElement};
use super::scalar::TowerScalar;
use crate::error::FieldError;

/// How `ℓ` is presented over `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtKind {
    /// `ℓ² = d`, characteristic ≠ 2.
    Sqrt,
    /// `ℓ² + ℓ = d`, characteristic 2.
    ArtinSchreier,
}

impl fmt::Display for ExtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtKind::Sqrt => write!(f, "sqrt"),
            ExtKind::ArtinSchreier => write!(f, "artin-schreier"),
        }
    }
}

/// The data `(K, ι, b)` of the crossed product `Q = K ⊕ Kj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<B> {
    kind: ExtKind,
    d: B,
    b: B,
}

/// Shared handle to an algebra; every tower element carries one.
pub type Desc<B> = Arc<Algebra<B>>;

impl<B: BaseField> Algebra<B> {
    /// Validates the presentation: the extension must be a separable
    /// quadratic field extension and `b` must be a unit.
    pub fn new(kind: ExtKind, d: B, b: B) -> Result<Desc<B>, FieldError> {
        let char2 = B::CHARACTERISTIC == 2;
        match kind {
            ExtKind::Sqrt if char2 => return Err(FieldError::Inseparable),
            ExtKind::ArtinSchreier if !char2 => return Err(FieldError::WrongKind { characteristic: B::CHARACTERISTIC }),
            ExtKind::Sqrt => {
                if d.is_zero() || d.is_square() {
                    return Err(FieldError::Reducible(d.to_string()));
                }
            }
            ExtKind::ArtinSchreier => {
                if d.is_artin_schreier_value() {
                    return Err(FieldError::Reducible(d.to_string()));
                }
            }
        }
        if b.is_zero() {
            return Err(FieldError::ZeroB);
        }
        Ok(Arc::new(Algebra { kind, d, b }))
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    pub fn d(&self) -> &B {
        &self.d
    }

    pub fn b(&self) -> &B {
        &self.b
    }

    /// Coefficient `e` in the minimal polynomial `ℓ² + eℓ − d`.
    pub(crate) fn trace_coeff(&self) -> B {
        match self.kind {
            ExtKind::Sqrt => B::zero(),
            ExtKind::ArtinSchreier => B::one(),
        }
    }
}

/// Element `c0 + c1·ℓ` of `K`.
#[derive(Clone)]
pub struct Ext<B: BaseField> {
    c0: B,
    c1: B,
    alg: Desc<B>,
}

impl<B: BaseField> Ext<B> {
    pub fn new(alg: &Desc<B>, c0: B, c1: B) -> Self {
        Ext { c0, c1, alg: alg.clone() }
    }

    pub fn from_base(alg: &Desc<B>, c: B) -> Self {
        Self::new(alg, c, B::zero())
    }

    pub fn zero(alg: &Desc<B>) -> Self {
        Self::from_base(alg, B::zero())
    }

    pub fn one(alg: &Desc<B>) -> Self {
        Self::from_base(alg, B::one())
    }

    pub fn ell(alg: &Desc<B>) -> Self {
        Self::new(alg, B::zero(), B::one())
    }

    /// The skew element `u` with `ι(u) = −u`: `ℓ` for the square-root
    /// presentation, `1` in characteristic 2.
    pub fn skew_unit(alg: &Desc<B>) -> Self {
        match alg.kind {
            ExtKind::Sqrt => Self::ell(alg),
            ExtKind::ArtinSchreier => Self::one(alg),
        }
    }

    pub fn c0(&self) -> &B {
        &self.c0
    }

    pub fn c1(&self) -> &B {
        &self.c1
    }

    pub fn alg(&self) -> &Desc<B> {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// Membership in the fixed field `k` of `ι`.
    pub fn is_base(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn scale(&self, c: &B) -> Self {
        Ext { c0: self.c0.clone() * c.clone(), c1: self.c1.clone() * c.clone(), alg: self.alg.clone() }
    }

    /// `ι(c0 + c1ℓ) = c0 − c1e − c1ℓ`.
    pub fn conj(&self) -> Self {
        let e = self.alg.trace_coeff();
        Ext { c0: self.c0.clone() - self.c1.clone() * e, c1: -self.c1.clone(), alg: self.alg.clone() }
    }

    /// `N_{K/k}(x) = x·ι(x) = c0² − e·c0·c1 − d·c1²`.
    pub fn norm(&self) -> B {
        let e = self.alg.trace_coeff();
        self.c0.clone() * self.c0.clone()
            - e * self.c0.clone() * self.c1.clone()
            - self.alg.d.clone() * self.c1.clone() * self.c1.clone()
    }

    pub fn trace(&self) -> B {
        let e = self.alg.trace_coeff();
        self.c0.clone() + self.c0.clone() - e * self.c1.clone()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(self.conj().scale(&n))
    }

    pub fn height(&self) -> u64 {
        self.c0.height().max(self.c1.height())
    }
}

impl<B: BaseField> PartialEq for Ext<B> {
    fn eq(&self, other: &Self) -> bool {
        self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl<B: BaseField> Eq for Ext<B> {}

impl<B: BaseField> fmt::Debug for Ext<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({})", self)
    }
}

fn write_coeff<B: BaseField>(f: &mut fmt::Formatter<'_>, c: &B) -> fmt::Result {
    if c.is_atomic_literal() {
        write!(f, "{c}")
    } else {
        write!(f, "({c})")
    }
}

impl<B: BaseField> fmt::Display for Ext<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => write!(f, "{}", self.c0),
            (true, false) => {
                if self.c1.is_one() {
                    write!(f, "l")
                } else {
                    write_coeff(f, &self.c1)?;
                    write!(f, "*l")
                }
            }
            (false, false) => {
                write!(f, "{} + ", self.c0)?;
                if self.c1.is_one() {
                    write!(f, "l")
                } else {
                    write_coeff(f, &self.c1)?;
                    write!(f, "*l")
                }
            }
        }
    }
}

impl<B: BaseField> Add for Ext<B> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Ext { c0: self.c0 + o.c0, c1: self.c1 + o.c1, alg: self.alg }
    }
}

impl<B: BaseField> Sub for Ext<B> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Ext { c0: self.c0 - o.c0, c1: self.c1 - o.c1, alg: self.alg }
    }
}

impl<B: BaseField> Neg for Ext<B> {
    type Output = Self;
    fn neg(self) -> Self {
        Ext { c0: -self.c0, c1: -self.c1, alg: self.alg }
    }
}

impl<B: BaseField> Mul for Ext<B> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // ℓ² = d − eℓ
        let prod = |x: &B, y: &B| if x.is_zero() || y.is_zero() { B::zero() } else { x.clone() * y.clone() };
        let cc = prod(&self.c1, &o.c1);
        let mut c0 = prod(&self.c0, &o.c0);
        let mut c1 = prod(&self.c0, &o.c1) + prod(&self.c1, &o.c0);
        if !cc.is_zero() {
            c0 = c0 + cc.clone() * self.alg.d.clone();
            if self.alg.kind == ExtKind::ArtinSchreier {
                c1 = c1 - cc;
            }
        }
        Ext { c0, c1, alg: self.alg }
    }
}

impl<B: BaseField> RingElement for Ext<B> {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_of(&self) -> Self {
        Ext::zero(&self.alg)
    }
    fn one_of(&self) -> Self {
        Ext::one(&self.alg)
    }
}

impl<B: BaseField> FieldElement for Ext<B> {
    fn inv_elem(&self) -> Option<Self> {
        self.inv()
    }
}

impl<B: BaseField> TowerScalar for Ext<B> {
    type Base = B;

    fn algebra(&self) -> &Desc<B> {
        &self.alg
    }

    fn from_k(x: Ext<B>) -> Self {
        x
    }

    fn iota(&self) -> Self {
        self.conj()
    }

    fn is_zero(&self) -> bool {
        Ext::is_zero(self)
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inv()
    }

    fn as_constant(&self) -> Option<Ext<B>> {
        Some(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::base::Rational;
    use crate::field::fp::FpFrac;

    fn gaussian() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, Rational::from_i64(-1), Rational::from_i64(-1)).unwrap()
    }

    #[test]
    fn presentation_is_validated() {
        assert!(matches!(
            Algebra::new(ExtKind::Sqrt, Rational::from_i64(4), Rational::from_i64(1)),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(
            Algebra::new(ExtKind::ArtinSchreier, Rational::from_i64(3), Rational::from_i64(1)),
            Err(FieldError::WrongKind { .. })
        ));
        type F2 = FpFrac<2>;
        let s = F2::generator().unwrap();
        assert!(matches!(Algebra::new(ExtKind::Sqrt, s.clone(), s.clone()), Err(FieldError::Inseparable)));
        assert!(Algebra::new(ExtKind::ArtinSchreier, s.clone(), s).is_ok());
        assert!(matches!(
            Algebra::new(ExtKind::Sqrt, Rational::from_i64(-1), Rational::from_i64(0)),
            Err(FieldError::ZeroB)
        ));
    }

    #[test]
    fn involution_fixes_exactly_k() {
        let alg = gaussian();
        let x = Ext::new(&alg, Rational::from_i64(3), Rational::from_i64(5));
        assert_eq!(x.conj().conj(), x);
        assert_ne!(x.conj(), x);
        let c = Ext::from_base(&alg, Rational::from_i64(7));
        assert_eq!(c.conj(), c);
    }

    #[test]
    fn artin_schreier_conjugate() {
        type F2 = FpFrac<2>;
        let s = F2::generator().unwrap();
        let alg = Algebra::new(ExtKind::ArtinSchreier, s.clone(), s.clone()).unwrap();
        let l = Ext::ell(&alg);
        // ι(ℓ) = ℓ + 1 and ℓ·ι(ℓ) = ℓ² + ℓ = s
        assert_eq!(l.conj(), l.clone() + Ext::one(&alg));
        assert_eq!(l.clone() * l.conj(), Ext::from_base(&alg, s.clone()));
        assert_eq!(l.norm(), s);
        // u = 1 is ι-skew in characteristic 2
        let u = Ext::skew_unit(&alg);
        assert_eq!(u.conj(), -u);
    }

    #[test]
    fn inverse_and_norm() {
        let alg = gaussian();
        let x = Ext::new(&alg, Rational::from_i64(2), Rational::from_i64(-3));
        assert_eq!(x.norm(), Rational::from_i64(13));
        assert_eq!(x.clone() * x.inv().unwrap(), Ext::one(&alg));
        assert_eq!(Ext::ell(&alg) * Ext::ell(&alg), Ext::from_base(&alg, Rational::from_i64(-1)));
    }
}
