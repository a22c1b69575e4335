//! The crossed product `Q = (K, ι, b) = K ⊕ Kj` over each level of the tower,
//! matrices over it, and division certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::MatrixError;
use crate::field::{BaseField, Desc, Ext, ExtKind, FieldElement, FunctionScalar, Laurent, RingElement, TowerScalar};
use crate::linalg::Matrix;

/// `x0 + x1·j` with `x0, x1` in a tower level `L`.
#[derive(Clone, PartialEq)]
pub struct Quat<L> {
    pub x0: L,
    pub x1: L,
}

/// Quaternions over `K`, the constant level.
pub type QuatK<B> = Quat<Ext<B>>;
/// `Q_𝓕`.
pub type QuatLaurent<B> = Quat<Laurent<B>>;

impl<L: TowerScalar> Quat<L> {
    pub fn new(x0: L, x1: L) -> Self {
        Quat { x0, x1 }
    }

    pub fn scalar(x0: L) -> Self {
        let z = L::zero(x0.algebra());
        Quat { x0, x1: z }
    }

    pub fn zero(alg: &Desc<L::Base>) -> Self {
        Quat { x0: L::zero(alg), x1: L::zero(alg) }
    }

    pub fn one(alg: &Desc<L::Base>) -> Self {
        Quat { x0: L::one(alg), x1: L::zero(alg) }
    }

    pub fn j(alg: &Desc<L::Base>) -> Self {
        Quat { x0: L::zero(alg), x1: L::one(alg) }
    }

    pub fn ell(alg: &Desc<L::Base>) -> Self {
        Self::scalar(L::from_k(Ext::ell(alg)))
    }

    pub fn from_base(alg: &Desc<L::Base>, c: L::Base) -> Self {
        Self::scalar(L::from_base(alg, c))
    }

    pub fn alg(&self) -> &Desc<L::Base> {
        self.x0.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    fn b(&self) -> L {
        L::from_base(self.alg(), self.alg().b().clone())
    }

    /// `x̄ = ι(x0) − x1·j`.
    pub fn bar(&self) -> Self {
        Quat { x0: self.x0.iota(), x1: -self.x1.clone() }
    }

    /// `Trd(x) = x0 + ι(x0)`.
    pub fn trd(&self) -> L {
        self.x0.clone() + self.x0.iota()
    }

    /// `Nrd(x) = x0ι(x0) − b·x1ι(x1)`.
    pub fn nrd(&self) -> L {
        self.x0.clone() * self.x0.iota() - self.b() * self.x1.clone() * self.x1.iota()
    }

    /// `x̄·Nrd(x)⁻¹` when `Nrd(x)` is a unit at this level.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.nrd().try_inverse()?;
        let bar = self.bar();
        Some(Quat { x0: bar.x0 * n.clone(), x1: bar.x1 * n })
    }

    /// Right multiplication by a scalar of the level: `(x0 + x1j)·c`.
    pub fn mul_scalar_right(&self, c: &L) -> Self {
        Quat { x0: self.x0.clone() * c.clone(), x1: self.x1.clone() * c.iota() }
    }

    pub fn mul_scalar_left(&self, c: &L) -> Self {
        Quat { x0: c.clone() * self.x0.clone(), x1: c.clone() * self.x1.clone() }
    }

    /// Whether `x ∈ K` at this level (no `j`-part).
    pub fn is_scalar(&self) -> bool {
        self.x1.is_zero()
    }

    /// Whether `x` lies in the center of the level's fixed field, i.e. `x1 = 0` and `ι(x0) = x0`.
    pub fn is_central(&self) -> bool {
        self.x1.is_zero() && self.x0.is_iota_fixed()
    }
}

impl<B: BaseField> Quat<Ext<B>> {
    /// Lift to any level of the tower.
    pub fn lift<L: TowerScalar<Base = B>>(&self) -> Quat<L> {
        Quat { x0: L::from_k(self.x0.clone()), x1: L::from_k(self.x1.clone()) }
    }

    /// Membership in `k`: the zero class of `Q/k`.
    pub fn is_in_k(&self) -> bool {
        self.x1.is_zero() && self.x0.is_base()
    }

    pub fn height(&self) -> u64 {
        self.x0.height().max(self.x1.height())
    }
}

impl<B: BaseField> Quat<Laurent<B>> {
    pub fn lift<L: FunctionScalar<Base = B>>(&self) -> Quat<L> {
        Quat { x0: L::from_laurent(self.x0.clone()), x1: L::from_laurent(self.x1.clone()) }
    }

    /// The unique expression `Σ x_z t^z` with `x_z ∈ Q`, moving `j` to the left
    /// of `t` via `t^z·j = j·b^z·t^{−z}`.
    pub fn normal_form(&self) -> BTreeMap<i64, QuatK<B>> {
        let alg = self.alg().clone();
        let b = alg.b().clone();
        let mut out: BTreeMap<i64, QuatK<B>> = BTreeMap::new();
        for (z, c) in self.x0.terms() {
            out.entry(z).or_insert_with(|| Quat::zero(&alg)).x0 = c.clone();
        }
        for (z, c) in self.x1.terms() {
            // c·t^z·j = (c·b^z)·j·t^{−z}
            out.entry(-z).or_insert_with(|| Quat::zero(&alg)).x1 = c.scale(&b.pow_i64(z));
        }
        out
    }

    pub fn from_normal_form(alg: &Desc<B>, nf: &BTreeMap<i64, QuatK<B>>) -> Self {
        let b = alg.b().clone();
        let x0 = Laurent::from_terms(alg, nf.iter().map(|(&z, x)| (z, x.x0.clone())));
        let x1 = Laurent::from_terms(alg, nf.iter().map(|(&z, x)| (-z, x.x1.scale(&b.pow_i64(z)))));
        Quat { x0, x1 }
    }

    /// `deg(Σ x_z t^z) = max |z|`; `None` is `−∞`.
    pub fn degree(&self) -> Option<u64> {
        self.normal_form().keys().map(|z| z.unsigned_abs()).max()
    }

    pub fn as_constant(&self) -> Option<QuatK<B>> {
        Some(Quat { x0: self.x0.as_constant()?, x1: self.x1.as_constant()? })
    }
}

impl<L: TowerScalar> fmt::Debug for Quat<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quat({})", self)
    }
}

/// Renders `x0 + (x1)*j`, which the instance parser reads back.
impl<L: TowerScalar> fmt::Display for Quat<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = L::one(self.alg());
        let jpart = if self.x1 == one { "j".to_string() } else { format!("({})*j", self.x1) };
        match (self.x0.is_zero(), self.x1.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.x0),
            (true, false) => write!(f, "{jpart}"),
            (false, false) => write!(f, "{} + {jpart}", self.x0),
        }
    }
}

impl<L: TowerScalar> Add for Quat<L> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quat { x0: self.x0 + o.x0, x1: self.x1 + o.x1 }
    }
}

impl<L: TowerScalar> Sub for Quat<L> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quat { x0: self.x0 - o.x0, x1: self.x1 - o.x1 }
    }
}

impl<L: TowerScalar> Neg for Quat<L> {
    type Output = Self;
    fn neg(self) -> Self {
        Quat { x0: -self.x0, x1: -self.x1 }
    }
}

impl<L: TowerScalar> Mul for Quat<L> {
    type Output = Self;
    /// `(x0 + x1j)(y0 + y1j) = (x0y0 + x1ι(y1)b) + (x0y1 + x1ι(y0))j`.
    fn mul(self, o: Self) -> Self {
        let b = self.b();
        let x0 = self.x0.clone() * o.x0.clone() + self.x1.clone() * o.x1.iota() * b;
        let x1 = self.x0 * o.x1 + self.x1 * o.x0.iota();
        Quat { x0, x1 }
    }
}

impl<L: TowerScalar> RingElement for Quat<L> {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_of(&self) -> Self {
        Quat::zero(self.alg())
    }
    fn one_of(&self) -> Self {
        Quat::one(self.alg())
    }
}

/// Inversion is only through the reduced norm; over a split level a nonzero
/// element may have no inverse, which elimination reports as a zero divisor.
impl<L: TowerScalar> FieldElement for Quat<L> {
    fn inv_elem(&self) -> Option<Self> {
        self.inverse()
    }
}

pub type QuatMatrix<L> = Matrix<Quat<L>>;

/// `(M†)_{ij} = bar(M_{ji})`.
pub fn dagger<L: TowerScalar>(m: &QuatMatrix<L>) -> QuatMatrix<L> {
    Matrix::from_fn(m.cols(), m.rows(), |r, c| m.get(c, r).bar())
}

pub fn lift_matrix<B: BaseField, L: TowerScalar<Base = B>>(m: &QuatMatrix<Ext<B>>) -> QuatMatrix<L> {
    m.map(|x| x.lift())
}

/// Inverse over a division algebra by Gauss–Jordan elimination.
///
/// Any nonzero entry is invertible over a division algebra; a nonzero
/// non-invertible pivot means `Q` is split, reported as `ZeroDivisor`.
pub fn mat_inverse<B: BaseField>(m: &QuatMatrix<Ext<B>>) -> Result<QuatMatrix<Ext<B>>, MatrixError> {
    m.inverse()
}

/// Why an algebra is known to be a division algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisionReason {
    /// The reduced norm is a definite form over ℚ.
    Definite,
    /// Asserted by the caller.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate<B: BaseField> {
    Division { reason: DivisionReason },
    /// `b = N_{K/k}(witness)`, so `Q ≅ M₂(k)`.
    Split { witness: Ext<B> },
    /// No conclusion within the search height.
    Unknown { bound: u64 },
}

impl<B: BaseField> Certificate<B> {
    pub fn is_division(&self) -> bool {
        matches!(self, Certificate::Division { .. })
    }
}

impl<B: BaseField> fmt::Display for Certificate<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Division { reason: DivisionReason::Definite } => write!(f, "Division{{definite}}"),
            Certificate::Division { reason: DivisionReason::Assumed } => write!(f, "Division{{assumed}}"),
            Certificate::Split { witness } => write!(f, "Split{{y={}}}", witness),
            Certificate::Unknown { bound } => write!(f, "Unknown{{bound={}}}", bound),
        }
    }
}

/// Classifies `Q = (K, ι, b)`: definite norm forms over ℚ first, then a search
/// for `y = c0 + c1ℓ` with `N(y) = b` in order of increasing height, then by
/// `(c1, c0)` in enumeration order.
pub fn division_certificate<B: BaseField>(alg: &Desc<B>, bound: u64) -> Certificate<B> {
    use std::cmp::Ordering::Less;
    if alg.kind() == ExtKind::Sqrt && alg.d().sign() == Some(Less) && alg.b().sign() == Some(Less) {
        return Certificate::Division { reason: DivisionReason::Definite };
    }
    let elems = B::elements_up_to_height(bound);
    let heights: Vec<u64> = elems.iter().map(|e| e.height()).collect();
    for h in 0..=bound {
        for (k, c1) in elems.iter().enumerate() {
            for (i, c0) in elems.iter().enumerate() {
                if heights[i].max(heights[k]) != h {
                    continue;
                }
                let y = Ext::new(alg, c0.clone(), c1.clone());
                if y.norm() == *alg.b() {
                    return Certificate::Split { witness: y };
                }
            }
        }
    }
    Certificate::Unknown { bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Algebra, FpFrac, Rational};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn hamilton() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, r(-1), r(-1)).unwrap()
    }

    fn quat(alg: &Desc<Rational>, a: i64, b: i64, c: i64, d: i64) -> QuatK<Rational> {
        Quat::new(Ext::new(alg, r(a), r(b)), Ext::new(alg, r(c), r(d)))
    }

    #[test]
    fn j_anticommutes_with_i() {
        let alg = hamilton();
        let j = Quat::<Ext<Rational>>::j(&alg);
        let i = Quat::<Ext<Rational>>::ell(&alg);
        assert_eq!(j.clone() * i.clone(), quat(&alg, 0, 0, 0, -1));
        assert_eq!(j.clone() * j.clone(), Quat::from_base(&alg, r(-1)));
        assert_eq!(j.bar(), -j);
    }

    #[test]
    fn hamilton_norm_is_sum_of_squares() {
        let alg = hamilton();
        let x = quat(&alg, 1, 2, 3, 4);
        assert_eq!(x.nrd(), Ext::from_base(&alg, r(30)));
    }

    #[test]
    fn normal_form_examples() {
        let alg = hamilton();
        let t = Laurent::t(&alg);
        let tinv = Laurent::t_pow(&alg, -1);
        // t + j·t⁻¹: j·t⁻¹ = ι(t⁻¹)·j = −t·j, stored as x1 = −t
        let x = Quat::new(t.clone(), -t.clone());
        let nf = x.normal_form();
        assert_eq!(nf.len(), 2);
        assert_eq!(nf[&1], Quat::one(&alg));
        assert_eq!(nf[&-1], Quat::j(&alg));
        assert_eq!(x.degree(), Some(1));
        // t·j = j·(−t⁻¹)
        let tj = Quat::new(Laurent::zero(&alg), t);
        let nf = tj.normal_form();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf[&-1], -Quat::j(&alg));
        assert_eq!(Quat::<Laurent<Rational>>::zero(&alg).degree(), None);
        assert_eq!(Quat::from_normal_form(&alg, &tj.normal_form()), tj);
        let _ = tinv;
    }

    #[test]
    fn small_inverses() {
        let alg = hamilton();
        let i = Quat::<Ext<Rational>>::ell(&alg);
        let m = Matrix::from_rows(vec![vec![i.clone()]]);
        assert_eq!(mat_inverse(&m).unwrap(), Matrix::from_rows(vec![vec![-i]]));
        let one = Quat::one(&alg);
        let zero = Quat::zero(&alg);
        let m = Matrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![-one.clone(), zero.clone()]]);
        let expected = Matrix::from_rows(vec![vec![zero.clone(), -one.clone()], vec![one, zero]]);
        assert_eq!(mat_inverse(&m).unwrap(), expected);
    }

    #[test]
    fn certificates() {
        assert_eq!(
            division_certificate(&hamilton(), 2),
            Certificate::Division { reason: DivisionReason::Definite }
        );
        let split = Algebra::new(ExtKind::Sqrt, r(-1), r(1)).unwrap();
        assert_eq!(division_certificate(&split, 2), Certificate::Split { witness: Ext::one(&split) });
        type F2 = FpFrac<2>;
        let s = F2::generator().unwrap();
        let alg = Algebra::new(ExtKind::ArtinSchreier, s.clone(), s).unwrap();
        let cert = division_certificate(&alg, 1);
        let Certificate::Split { witness } = cert else { panic!("expected split, got {cert}") };
        assert_eq!(witness.norm(), *alg.b());
        assert_eq!(witness, Ext::ell(&alg));
    }

    fn arb_quat() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5)
    }

    proptest! {
        #[test]
        fn ring_laws((a, b, c, d) in arb_quat(), (e, f, g, h) in arb_quat(), (p, q, s, u) in arb_quat()) {
            let alg = Algebra::new(ExtKind::Sqrt, r(3), r(-2)).unwrap();
            let x = quat(&alg, a, b, c, d);
            let y = quat(&alg, e, f, g, h);
            let z = quat(&alg, p, q, s, u);
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!((x.clone() * y.clone()).bar(), y.bar() * x.bar());
            prop_assert_eq!(x.bar().bar(), x.clone());
            prop_assert_eq!((x.clone() * y.clone()).trd(), (y.clone() * x.clone()).trd());
            prop_assert_eq!((x.clone() * y.clone()).nrd(), x.nrd() * y.nrd());
            prop_assert!(x.trd().is_base() && x.nrd().is_base());
            prop_assert_eq!(x.clone() * x.bar(), Quat::scalar(x.nrd()));
        }

        #[test]
        fn division_algebra_has_no_zero_divisors((a, b, c, d) in arb_quat()) {
            let alg = hamilton();
            let x = quat(&alg, a, b, c, d);
            prop_assert_eq!(x.is_zero(), x.nrd().is_zero());
        }

        #[test]
        fn laurent_normal_form_roundtrip(coeffs in proptest::collection::vec((-3i64..=3, -3i64..=3, -2i64..=2), 1..5)) {
            let alg = Algebra::new(ExtKind::Sqrt, r(-1), r(-3)).unwrap();
            let mut x0 = Laurent::zero(&alg);
            let mut x1 = Laurent::zero(&alg);
            for (k, &(a, b, z)) in coeffs.iter().enumerate() {
                let c = Ext::new(&alg, r(a), r(b));
                if k % 2 == 0 {
                    x0 = x0 + Laurent::monomial(c, z);
                } else {
                    x1 = x1 + Laurent::monomial(c, z);
                }
            }
            let x = Quat::new(x0, x1);
            let nf = x.normal_form();
            prop_assert_eq!(Quat::from_normal_form(&alg, &nf), x.clone());
            // reassemble as a product of constants and powers of t
            let mut acc = Quat::<Laurent<Rational>>::zero(&alg);
            for (z, q) in &nf {
                acc = acc + q.lift::<Laurent<Rational>>() * Quat::scalar(Laurent::t_pow(&alg, *z));
            }
            prop_assert_eq!(acc, x);
        }
    }
}
