//! Laurent polynomials `K[t, t⁻¹]` with the involution `ι(t) = b·t⁻¹`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::base::{BaseField, RingElement};
use super::ext::{Desc, Ext};
use super::scalar::{FunctionScalar, TowerScalar};

/// `Σ y_z t^z`, stored without zero coefficients.
#[derive(Clone)]
pub struct Laurent<B: BaseField> {
    terms: BTreeMap<i64, Ext<B>>,
    alg: Desc<B>,
}

impl<B: BaseField> Laurent<B> {
    pub fn zero(alg: &Desc<B>) -> Self {
        Laurent { terms: BTreeMap::new(), alg: alg.clone() }
    }

    pub fn constant(c: Ext<B>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Ext<B>, z: i64) -> Self {
        let alg = c.alg().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(z, c);
        }
        Laurent { terms, alg }
    }

    pub fn t(alg: &Desc<B>) -> Self {
        Self::monomial(Ext::one(alg), 1)
    }

    /// `t^z`.
    pub fn t_pow(alg: &Desc<B>, z: i64) -> Self {
        Self::monomial(Ext::one(alg), z)
    }

    pub fn from_terms(alg: &Desc<B>, terms: impl IntoIterator<Item = (i64, Ext<B>)>) -> Self {
        let mut out = Self::zero(alg);
        for (z, c) in terms {
            out.add_term(z, c);
        }
        out
    }

    fn add_term(&mut self, z: i64, c: Ext<B>) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&z) {
            Some(old) => old + c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(z, merged);
        }
    }

    pub fn alg(&self) -> &Desc<B> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Ext<B>)> {
        self.terms.iter().map(|(&z, c)| (z, c))
    }

    pub fn coeff(&self, z: i64) -> Ext<B> {
        self.terms.get(&z).cloned().unwrap_or_else(|| Ext::zero(&self.alg))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `max |z|` over the support; `None` stands for `deg 0 = −∞`.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|z| z.unsigned_abs()).max()
    }

    pub fn scale(&self, c: &Ext<B>) -> Self {
        Self::from_terms(&self.alg, self.terms.iter().map(|(&z, y)| (z, y.clone() * c.clone())))
    }

    pub fn scale_base(&self, c: &B) -> Self {
        Self::from_terms(&self.alg, self.terms.iter().map(|(&z, y)| (z, y.scale(c))))
    }

    /// Multiplication by `t^z`.
    pub fn shift(&self, z: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e + z, c.clone())).collect(), alg: self.alg.clone() }
    }

    /// `ι(Σ y_z t^z) = Σ ι(y_z)·b^z·t^{−z}`.
    pub fn conj(&self) -> Self {
        let b = self.alg.b().clone();
        Self::from_terms(&self.alg, self.terms.iter().map(|(&z, y)| (-z, y.conj().scale(&b.pow_i64(z)))))
    }

    /// Splits `self = t^v · p(t)` with `p` an ordinary polynomial, `p(0) ≠ 0`.
    /// Returns `(v, coefficients of p, low to high)`; zero gives `(0, [])`.
    pub fn to_poly(&self) -> (i64, Vec<Ext<B>>) {
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return (0, Vec::new()),
        };
        let coeffs = (lo..=hi).map(|z| self.coeff(z)).collect();
        (lo, coeffs)
    }

    pub fn from_poly(alg: &Desc<B>, shift: i64, coeffs: &[Ext<B>]) -> Self {
        Self::from_terms(alg, coeffs.iter().enumerate().map(|(i, c)| (shift + i as i64, c.clone())))
    }

    /// Units of `K[t,t⁻¹]` are the nonzero monomials.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&z, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(c.inv()?, -z))
    }
}

impl<B: BaseField> PartialEq for Laurent<B> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<B: BaseField> Eq for Laurent<B> {}

impl<B: BaseField> fmt::Debug for Laurent<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({})", self)
    }
}

impl<B: BaseField> fmt::Display for Laurent<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&z, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if z == 0 {
                write!(f, "{}", c)?;
                continue;
            }
            let unit = c.is_base() && c.c0().is_one();
            if !unit {
                if c.is_base() && c.c0().is_atomic_literal() {
                    write!(f, "{}*", c)?;
                } else {
                    write!(f, "({})*", c)?;
                }
            }
            if z == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{}", z)?;
            }
        }
        Ok(())
    }
}

impl<B: BaseField> Add for Laurent<B> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (z, c) in o.terms {
            self.add_term(z, c);
        }
        self
    }
}

impl<B: BaseField> Neg for Laurent<B> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { terms: self.terms.into_iter().map(|(z, c)| (z, -c)).collect(), alg: self.alg }
    }
}

impl<B: BaseField> Sub for Laurent<B> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<B: BaseField> Mul for Laurent<B> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::zero(&self.alg);
        for (&z, a) in &self.terms {
            for (&w, c) in &o.terms {
                out.add_term(z + w, a.clone() * c.clone());
            }
        }
        out
    }
}

impl<B: BaseField> RingElement for Laurent<B> {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_of(&self) -> Self {
        Self::zero(&self.alg)
    }
    fn one_of(&self) -> Self {
        Self::constant(Ext::one(&self.alg))
    }
}

impl<B: BaseField> TowerScalar for Laurent<B> {
    type Base = B;

    fn algebra(&self) -> &Desc<B> {
        &self.alg
    }

    fn from_k(x: Ext<B>) -> Self {
        Self::constant(x)
    }

    fn iota(&self) -> Self {
        self.conj()
    }

    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }

    fn try_inverse(&self) -> Option<Self> {
        self.monomial_inverse()
    }

    fn as_constant(&self) -> Option<Ext<B>> {
        match self.terms.len() {
            0 => Some(Ext::zero(&self.alg)),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }
}

impl<B: BaseField> FunctionScalar for Laurent<B> {
    fn from_laurent(x: Laurent<B>) -> Self {
        x
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

    #[test]
    fn involution_on_t() {
        let alg = hamilton();
        // ι(t) = −t⁻¹ when b = −1
        let t = Laurent::t(&alg);
        assert_eq!(t.conj(), Laurent::monomial(Ext::from_base(&alg, r(-1)), -1));
        assert_eq!(t.conj().conj(), t);
    }

    #[test]
    fn involution_expands_multiplicatively() {
        let alg = hamilton();
        let i = Ext::ell(&alg);
        // ι(i·t² + 1) = −i·t⁻² + 1
        let x = Laurent::monomial(i.clone(), 2) + Laurent::constant(Ext::one(&alg));
        let expected = Laurent::monomial(-i, -2) + Laurent::constant(Ext::one(&alg));
        assert_eq!(x.conj(), expected);
    }

    #[test]
    fn degree_reads_support() {
        let alg = hamilton();
        let x = Laurent::monomial(Ext::from_base(&alg, r(3)), 2) - Laurent::monomial(Ext::one(&alg), -3);
        assert_eq!(x.degree(), Some(3));
        assert_eq!(Laurent::zero(&alg).degree(), None);
        assert_eq!(Laurent::constant(Ext::from_base(&alg, r(5))).degree(), Some(0));
    }

    #[test]
    fn display_is_stable() {
        let alg = hamilton();
        let x = Laurent::monomial(Ext::new(&alg, r(1), r(1)), 2) - Laurent::monomial(Ext::one(&alg), -1);
        assert_eq!(x.to_string(), "(1 + l)*t^2 + (-1)*t^-1");
    }
}
