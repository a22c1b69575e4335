//! The rational function field `K(t)`, its `ι`-fixed subfield `F`, and the
//! passage between `K(t)` and `F ⊕ ℓF`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::base::{BaseField, FieldElement, RingElement};
use super::ext::{Desc, Ext};
use super::laurent::Laurent;
use super::scalar::{FunctionScalar, TowerScalar};

fn trim<B: BaseField>(p: &mut Vec<Ext<B>>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_div_rem<B: BaseField>(a: &[Ext<B>], b: &[Ext<B>]) -> (Vec<Ext<B>>, Vec<Ext<B>>) {
    let mut rem: Vec<Ext<B>> = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let alg = b[0].alg().clone();
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut quot = vec![Ext::zero(&alg); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone() * lead_inv.clone();
        if c.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            let idx = i - db + k;
            rem[idx] = rem[idx].clone() - c.clone() * bk.clone();
        }
        quot[i - db] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_monic<B: BaseField>(p: &[Ext<B>]) -> Vec<Ext<B>> {
    let inv = p.last().expect("nonzero polynomial").inv().unwrap();
    p.iter().map(|c| c.clone() * inv.clone()).collect()
}

fn poly_gcd<B: BaseField>(a: &[Ext<B>], b: &[Ext<B>]) -> Vec<Ext<B>> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_div_rem(&x, &y);
        x = y;
        y = r;
    }
    poly_monic(&x)
}

/// Element of `K(t)` stored as `num/den`: `den` is a monic ordinary
/// polynomial with nonzero constant term, coprime to `num`.
#[derive(Clone)]
pub struct RatFn<B: BaseField> {
    num: Laurent<B>,
    den: Laurent<B>,
}

impl<B: BaseField> RatFn<B> {
    pub fn new(num: Laurent<B>, den: Laurent<B>) -> Self {
        assert!(!den.is_zero(), "zero denominator in K(t)");
        let alg = num.alg().clone();
        if num.is_zero() {
            return Self::from_laurent_value(num);
        }
        let (vn, pn) = num.to_poly();
        let (vd, pd) = den.to_poly();
        let shift = vn - vd;
        if pd.len() == 1 {
            let inv = pd[0].inv().unwrap();
            return RatFn { num: num.shift(-vd).scale(&inv), den: Laurent::constant(Ext::one(&alg)) };
        }
        let g = poly_gcd(&pn, &pd);
        let (pn, _) = poly_div_rem(&pn, &g);
        let (pd, _) = poly_div_rem(&pd, &g);
        let lead_inv = pd.last().unwrap().inv().unwrap();
        let pn: Vec<_> = pn.iter().map(|c| c.clone() * lead_inv.clone()).collect();
        let pd: Vec<_> = pd.iter().map(|c| c.clone() * lead_inv.clone()).collect();
        RatFn { num: Laurent::from_poly(&alg, shift, &pn), den: Laurent::from_poly(&alg, 0, &pd) }
    }

    pub fn from_laurent_value(x: Laurent<B>) -> Self {
        let one = Laurent::constant(Ext::one(x.alg()));
        RatFn { num: x, den: one }
    }

    pub fn num(&self) -> &Laurent<B> {
        &self.num
    }

    pub fn den(&self) -> &Laurent<B> {
        &self.den
    }

    /// The value as a Laurent polynomial, when the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&Laurent<B>> {
        if self.den.max_exp() == Some(0) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn alg(&self) -> &Desc<B> {
        self.num.alg()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn conj(&self) -> Self {
        RatFn::new(self.num.conj(), self.den.conj())
    }

    pub fn scale(&self, c: &Ext<B>) -> Self {
        RatFn::new(self.num.scale(c), self.den.clone())
    }

    /// Writes `f = f0 + ℓ·f1` with `f0, f1 ∈ F`, using
    /// `f0 = (ι(ℓ)f − ℓι(f))/(ι(ℓ) − ℓ)` and `f1 = (ι(f) − f)/(ι(ℓ) − ℓ)`.
    pub fn decompose_over_f(&self) -> (Self, Self) {
        decompose_over_f(self)
    }

    /// Returns `(g, λ)` with `f·λ = g`, `g ∈ K[t,t⁻¹]`, `λ ∈ 𝓕` nonzero.
    pub fn clear_denominators(&self) -> (Laurent<B>, Laurent<B>) {
        let alg = self.alg();
        if let Some(l) = self.as_laurent() {
            return (l.clone(), Laurent::constant(Ext::one(alg)));
        }
        // g·h⁻¹ = g·ι(h)·(h·ι(h))⁻¹
        let h_conj = self.den.conj();
        let lambda = self.den.clone() * h_conj.clone();
        let g = self.num.clone() * h_conj;
        (g, lambda)
    }
}

/// Splitting `K(t) = F ⊕ ℓF`, generic over the function level so that
/// Laurent inputs stay Laurent.
pub fn decompose_over_f<L: FunctionScalar>(f: &L) -> (L, L) {
    let alg = f.algebra().clone();
    let ell = Ext::ell(&alg);
    let ell_conj = ell.conj();
    let denom_inv = (ell_conj.clone() - ell.clone()).inv().expect("separable extension");
    let fc = f.iota();
    let f0 = (L::from_k(ell_conj) * f.clone() - L::from_k(ell.clone()) * fc.clone()) * L::from_k(denom_inv.clone());
    let f1 = (fc - f.clone()) * L::from_k(denom_inv);
    (f0, f1)
}

impl<B: BaseField> PartialEq for RatFn<B> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<B: BaseField> Eq for RatFn<B> {}

impl<B: BaseField> fmt::Debug for RatFn<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({})", self)
    }
}

impl<B: BaseField> fmt::Display for RatFn<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.as_laurent().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<B: BaseField> Add for RatFn<B> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return RatFn::new(self.num + o.num, self.den);
        }
        RatFn::new(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl<B: BaseField> Sub for RatFn<B> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<B: BaseField> Neg for RatFn<B> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFn { num: -self.num, den: self.den }
    }
}

impl<B: BaseField> Mul for RatFn<B> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFn::from_laurent_value(Laurent::zero(self.alg()));
        }
        if self.as_laurent().is_some() && o.as_laurent().is_some() {
            return RatFn::from_laurent_value(self.num * o.num);
        }
        RatFn::new(self.num * o.num, self.den * o.den)
    }
}

impl<B: BaseField> RingElement for RatFn<B> {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_of(&self) -> Self {
        RatFn::from_laurent_value(Laurent::zero(self.alg()))
    }
    fn one_of(&self) -> Self {
        RatFn::from_laurent_value(Laurent::constant(Ext::one(self.alg())))
    }
}

impl<B: BaseField> FieldElement for RatFn<B> {
    fn inv_elem(&self) -> Option<Self> {
        self.inv()
    }
}

impl<B: BaseField> TowerScalar for RatFn<B> {
    type Base = B;

    fn algebra(&self) -> &Desc<B> {
        self.num.alg()
    }

    fn from_k(x: Ext<B>) -> Self {
        RatFn::from_laurent_value(Laurent::constant(x))
    }

    fn iota(&self) -> Self {
        self.conj()
    }

    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inv()
    }

    fn as_constant(&self) -> Option<Ext<B>> {
        self.as_laurent().and_then(|l| l.as_constant())
    }
}

impl<B: BaseField> FunctionScalar for RatFn<B> {
    fn from_laurent(x: Laurent<B>) -> Self {
        RatFn::from_laurent_value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::base::Rational;
    use crate::field::ext::{Algebra, ExtKind};

    fn hamilton() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, Rational::from_i64(-1), Rational::from_i64(-1)).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn k(alg: &Desc<Rational>, a: i64, b: i64) -> Ext<Rational> {
        Ext::new(alg, r(a), r(b))
    }

    #[test]
    fn normal_form_cancels_common_factors() {
        let alg = hamilton();
        let t = Laurent::t(&alg);
        let one = Laurent::constant(Ext::one(&alg));
        // (t² − 1)/(t − 1) = t + 1
        let num = t.clone() * t.clone() - one.clone();
        let den = t.clone() - one.clone();
        let f = RatFn::new(num, den);
        assert_eq!(f.as_laurent(), Some(&(t.clone() + one.clone())));
        // t/(t²) = t⁻¹ stays Laurent
        let g = RatFn::new(t.clone(), t.clone() * t.clone());
        assert_eq!(g.as_laurent(), Some(&Laurent::t_pow(&alg, -1)));
        // denominators are normalized monic
        let h = RatFn::new(one.clone(), (t.clone() + one.clone()).scale(&k(&alg, 2, 0)));
        assert_eq!(h.den(), &(t + one));
    }

    #[test]
    fn decompose_t_over_gaussian_field() {
        let alg = hamilton();
        let t = RatFn::from_laurent_value(Laurent::t(&alg));
        let (f0, f1) = t.decompose_over_f();
        let half = Ext::from_base(&alg, Rational::new(1.into(), 2.into()));
        let tinv = Laurent::t_pow(&alg, -1);
        let tl = Laurent::t(&alg);
        // f0 = (t − t⁻¹)/2, f1 = −i(t + t⁻¹)/2
        assert_eq!(f0.as_laurent().unwrap(), &(tl.clone() - tinv.clone()).scale(&half));
        assert_eq!(
            f1.as_laurent().unwrap(),
            &(tl + tinv).scale(&(half * k(&alg, 0, -1)))
        );
        assert!(f0.is_iota_fixed() && f1.is_iota_fixed());
        let ell = RatFn::from_k(Ext::ell(&alg));
        assert_eq!(f0 + ell * f1, t);
    }

    #[test]
    fn decompose_trivial_cases() {
        let alg = hamilton();
        let ell = RatFn::from_k(Ext::ell(&alg));
        let (a, b) = ell.decompose_over_f();
        assert!(a.is_zero());
        assert_eq!(b, RatFn::one(&alg));
        let fixed = RatFn::from_laurent_value(Laurent::t(&alg) + Laurent::t(&alg).conj());
        let (a, b) = fixed.decompose_over_f();
        assert_eq!(a, fixed);
        assert!(b.is_zero());
    }

    #[test]
    fn clear_denominator_of_simple_pole() {
        let alg = hamilton();
        let t = Laurent::t(&alg);
        let one = Laurent::constant(Ext::one(&alg));
        let h = t + one.clone();
        let f = RatFn::new(one, h.clone());
        let (g, lambda) = f.clear_denominators();
        assert_eq!(lambda, h.clone() * h.conj());
        assert_eq!(g, h.conj());
        assert_eq!(lambda.conj(), lambda);
        assert_eq!(f * RatFn::from_laurent_value(lambda), RatFn::from_laurent_value(g));
    }

    #[test]
    fn clear_denominator_of_laurent_input() {
        let alg = hamilton();
        // ℓ/t is already Laurent
        let f = RatFn::new(Laurent::constant(Ext::ell(&alg)), Laurent::t(&alg));
        let (g, lambda) = f.clear_denominators();
        assert_eq!(lambda.as_constant().map(|c| c.is_base()), Some(true));
        assert_eq!(f * RatFn::from_laurent_value(lambda), RatFn::from_laurent_value(g));
    }
}
