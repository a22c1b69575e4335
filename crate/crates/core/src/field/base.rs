//! The base field `k` and the traits shared by every level of the tower.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Rational numbers, the characteristic-zero base field.
pub type Rational = BigRational;

/// Minimal ring interface used by the dense linear algebra in [`crate::linalg`].
///
/// `zero_of`/`one_of` take a template element because tower scalars carry
/// their algebra descriptor and have no context-free zero.
pub trait RingElement:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn is_zero_elem(&self) -> bool;
    fn zero_of(&self) -> Self;
    fn one_of(&self) -> Self;
}

pub trait FieldElement: RingElement {
    fn inv_elem(&self) -> Option<Self>;
}

/// A base field `k`: either ℚ or 𝔽_p(s).
pub trait BaseField:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + FieldElement
{
    const CHARACTERISTIC: u64;

    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    /// Parses an unsigned decimal integer literal.
    fn from_decimal(digits: &str) -> Option<Self>;

    /// The transcendental `s` of 𝔽_p(s); `None` over ℚ.
    fn generator() -> Option<Self>;

    /// Naive height: `max(|num|, den)` over ℚ, `max(deg num, deg den)` over 𝔽_p(s).
    fn height(&self) -> u64;

    /// Sign in the unique ordering of ℚ; `None` for non-ordered fields.
    fn sign(&self) -> Option<Ordering>;

    fn is_square(&self) -> bool;

    /// Whether `self = x² + x` for some `x ∈ k`.
    fn is_artin_schreier_value(&self) -> bool;

    /// Search alphabet of "integral" elements of the given size, zero first:
    /// integers in `[-size, size]` over ℚ, polynomials of degree `< size` over 𝔽_p(s).
    fn integral_elements(size: u32) -> Vec<Self>;

    /// All elements of height at most `h`, ordered by height then enumeration order.
    fn elements_up_to_height(h: u64) -> Vec<Self>;

    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self;

    /// True when `Display` output needs no parentheses inside a product.
    fn is_atomic_literal(&self) -> bool;

    fn div(self, other: Self) -> Self {
        self * other.inv().expect("division by zero in base field")
    }

    fn pow_i64(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }
}

impl RingElement for Rational {
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_of(&self) -> Self {
        Rational::zero()
    }
    fn one_of(&self) -> Self {
        Rational::one()
    }
}

impl FieldElement for Rational {
    fn inv_elem(&self) -> Option<Self> {
        BaseField::inv(self)
    }
}

fn perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

impl BaseField for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_decimal(digits: &str) -> Option<Self> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse::<BigInt>().ok().map(Rational::from_integer)
    }

    fn generator() -> Option<Self> {
        None
    }

    fn height(&self) -> u64 {
        let n = self.numer().abs().to_u64().unwrap_or(u64::MAX);
        let d = self.denom().to_u64().unwrap_or(u64::MAX);
        n.max(d)
    }

    fn sign(&self) -> Option<Ordering> {
        Some(self.cmp(&Rational::zero()))
    }

    fn is_square(&self) -> bool {
        perfect_square(self.numer()) && perfect_square(self.denom())
    }

    fn is_artin_schreier_value(&self) -> bool {
        // x² + x = c has a rational root iff 1 + 4c is a rational square.
        let disc = Rational::one() + Rational::from_i64(4) * self.clone();
        disc.is_square()
    }

    fn integral_elements(size: u32) -> Vec<Self> {
        let mut out = vec![Rational::zero()];
        for m in 1..=i64::from(size) {
            out.push(Rational::from_i64(m));
            out.push(Rational::from_i64(-m));
        }
        out
    }

    fn elements_up_to_height(h: u64) -> Vec<Self> {
        let mut out = vec![Rational::zero()];
        for level in 1..=h as i64 {
            // exactly height `level`: max(|p|, q) == level
            let mut layer = Vec::new();
            for q in 1..=level {
                for p in 1..=level {
                    if p.max(q) != level || p.gcd(&q) != 1 {
                        continue;
                    }
                    layer.push(Rational::new(BigInt::from(p), BigInt::from(q)));
                    layer.push(Rational::new(BigInt::from(-p), BigInt::from(q)));
                }
            }
            out.extend(layer);
        }
        out
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self {
        let h = i64::from(height.max(1));
        let p = rng.gen_range(-h..=h);
        let q = rng.gen_range(1..=h);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn is_atomic_literal(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_squares() {
        assert!(Rational::from_i64(9).is_square());
        assert!(Rational::new(BigInt::from(4), BigInt::from(25)).is_square());
        assert!(!Rational::from_i64(-1).is_square());
        assert!(!Rational::from_i64(2).is_square());
        assert!(Rational::zero().is_square());
    }

    #[test]
    fn rational_artin_schreier_values() {
        // 2 = 1² + 1, 6 = 2² + 2
        assert!(Rational::from_i64(2).is_artin_schreier_value());
        assert!(Rational::from_i64(6).is_artin_schreier_value());
        assert!(!Rational::from_i64(1).is_artin_schreier_value());
    }

    #[test]
    fn heights_and_enumeration() {
        let h2 = Rational::elements_up_to_height(2);
        // 0, ±1, ±2, ±1/2
        assert_eq!(h2.len(), 7);
        assert!(h2.iter().all(|x| x.height() <= 2));
        assert_eq!(Rational::integral_elements(0), vec![Rational::zero()]);
        assert_eq!(Rational::integral_elements(2).len(), 5);
    }

    #[test]
    fn negative_powers() {
        let two = Rational::from_i64(2);
        assert_eq!(two.pow_i64(-2), Rational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(two.pow_i64(0), Rational::one());
    }
}
