//! The rational function field 𝔽_p(s).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::base::{BaseField, FieldElement, RingElement};

fn mod_inv<const P: u64>(a: u64) -> u64 {
    debug_assert!(a % P != 0);
    let mut result = 1u64;
    let mut base = a % P;
    let mut e = P - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    result
}

/// Polynomial in `s` over 𝔽_p, coefficients little-endian with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FpPoly<const P: u64> {
    coeffs: Vec<u64>,
}

impl<const P: u64> FpPoly<P> {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= P;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn constant(c: u64) -> Self {
        Self::new(vec![c])
    }

    pub fn s() -> Self {
        Self::new(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * (c % P) % P).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(mod_inv::<P>(self.leading()))
    }

    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = other.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Self::default(), self.clone());
        }
        let inv_lead = mod_inv::<P>(other.leading());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * inv_lead % P;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (k, &b) in other.coeffs.iter().enumerate() {
                let idx = i - dd + k;
                rem[idx] = (rem[idx] + P - c * b % P) % P;
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Square root when `self` is a perfect square in 𝔽_p[s].
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::default());
        }
        let deg = self.degree().unwrap();
        if deg % 2 == 1 {
            return None;
        }
        if P == 2 {
            // Frobenius: squares are exactly the polynomials in s².
            if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
                return None;
            }
            return Some(Self::new(self.coeffs.iter().step_by(2).copied().collect()));
        }
        let lead = self.leading();
        let r_lead = (1..P).find(|&r| r * r % P == lead)?;
        let half = deg / 2;
        // Match coefficients from the top: root = Σ r_i s^i, r_half = r_lead.
        let mut root = vec![0u64; half + 1];
        root[half] = r_lead;
        let two_lead_inv = mod_inv::<P>(2 * r_lead % P);
        for k in (0..half).rev() {
            // coefficient of s^(half + k) in root² must equal self's
            let target = self.coeffs[half + k];
            let mut acc = 0u64;
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j <= half && j > k {
                    acc = (acc + root[i] * root[j]) % P;
                }
            }
            root[k] = (target + P - acc) % P * two_lead_inv % P;
        }
        let candidate = Self::new(root);
        if &candidate * &candidate == *self {
            Some(candidate)
        } else {
            None
        }
    }

    fn all_of_degree_below(size: u32) -> Vec<Self> {
        let mut out = vec![Self::default()];
        let mut frontier: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..size {
            let mut next = Vec::new();
            for prefix in &frontier {
                for c in 0..P {
                    let mut v = prefix.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            frontier = next;
        }
        // sort by degree, then lexicographically from the top coefficient
        let mut polys: Vec<Self> = frontier.into_iter().map(Self::new).filter(|p| !p.is_zero()).collect();
        polys.sort_by(|a, b| {
            a.coeffs
                .len()
                .cmp(&b.coeffs.len())
                .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
        });
        polys.dedup();
        out.extend(polys);
        out
    }
}

impl<const P: u64> Add for &FpPoly<P> {
    type Output = FpPoly<P>;
    fn add(self, o: &FpPoly<P>) -> FpPoly<P> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0))
            .collect();
        FpPoly::new(v)
    }
}

impl<const P: u64> Neg for &FpPoly<P> {
    type Output = FpPoly<P>;
    fn neg(self) -> FpPoly<P> {
        FpPoly::new(self.coeffs.iter().map(|&c| (P - c) % P).collect())
    }
}

impl<const P: u64> Sub for &FpPoly<P> {
    type Output = FpPoly<P>;
    fn sub(self, o: &FpPoly<P>) -> FpPoly<P> {
        self + &(-o)
    }
}

impl<const P: u64> Mul for &FpPoly<P> {
    type Output = FpPoly<P>;
    fn mul(self, o: &FpPoly<P>) -> FpPoly<P> {
        if self.is_zero() || o.is_zero() {
            return FpPoly::default();
        }
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % P;
            }
        }
        FpPoly::new(v)
    }
}

impl<const P: u64> fmt::Display for FpPoly<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "s")?,
                (1, c) => write!(f, "{c}*s")?,
                (i, 1) => write!(f, "s^{i}")?,
                (i, c) => write!(f, "{c}*s^{i}")?,
            }
        }
        Ok(())
    }
}

/// Element of 𝔽_p(s): `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpFrac<const P: u64> {
    num: FpPoly<P>,
    den: FpPoly<P>,
}

impl<const P: u64> FpFrac<P> {
    pub fn new(num: FpPoly<P>, den: FpPoly<P>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(FpPoly::default());
        }
        if den.is_one() {
            return Self::from_poly(num);
        }
        let g = FpPoly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc_inv = mod_inv::<P>(d.leading());
        FpFrac { num: n.scale(lc_inv), den: d.scale(lc_inv) }
    }

    pub fn from_poly(num: FpPoly<P>) -> Self {
        FpFrac { num, den: FpPoly::constant(1) }
    }

    pub fn num(&self) -> &FpPoly<P> {
        &self.num
    }

    pub fn den(&self) -> &FpPoly<P> {
        &self.den
    }
}

impl<const P: u64> Add for FpFrac<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.num.is_zero() {
            return o;
        }
        if o.num.is_zero() {
            return self;
        }
        if self.den == o.den {
            if self.den.is_one() {
                return FpFrac::from_poly(&self.num + &o.num);
            }
            return FpFrac::new(&self.num + &o.num, self.den);
        }
        FpFrac::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<const P: u64> Sub for FpFrac<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<const P: u64> Neg for FpFrac<P> {
    type Output = Self;
    fn neg(self) -> Self {
        FpFrac { num: -&self.num, den: self.den }
    }
}

impl<const P: u64> Mul for FpFrac<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        // Cross cancellation: both inputs are reduced, so only a/d and c/b can share factors.
        let (a, b) = cancel(&self.num, &o.den);
        let (c, d) = cancel(&o.num, &self.den);
        FpFrac { num: &a * &c, den: &b * &d }
    }
}

/// `(x/g, y/g)` for `g = gcd(x, y)`, with `y` monic and staying monic.
fn cancel<const P: u64>(x: &FpPoly<P>, y: &FpPoly<P>) -> (FpPoly<P>, FpPoly<P>) {
    if y.is_one() {
        return (x.clone(), y.clone());
    }
    let g = FpPoly::gcd(x, y);
    if g.is_one() {
        return (x.clone(), y.clone());
    }
    (x.div_rem(&g).0, y.div_rem(&g).0)
}

impl<const P: u64> Zero for FpFrac<P> {
    fn zero() -> Self {
        Self::from_poly(FpPoly::default())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<const P: u64> One for FpFrac<P> {
    fn one() -> Self {
        Self::from_poly(FpPoly::constant(1))
    }
}

impl<const P: u64> fmt::Display for FpFrac<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compound = |p: &FpPoly<P>| p.coeffs.iter().filter(|&&c| c != 0).count() > 1;
        if self.den == FpPoly::constant(1) {
            return write!(f, "{}", self.num);
        }
        if compound(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if compound(&self.den) || self.den.leading() != 1 || self.den.degree() != Some(0) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl<const P: u64> RingElement for FpFrac<P> {
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_of(&self) -> Self {
        Self::zero()
    }
    fn one_of(&self) -> Self {
        Self::one()
    }
}

impl<const P: u64> FieldElement for FpFrac<P> {
    fn inv_elem(&self) -> Option<Self> {
        BaseField::inv(self)
    }
}

impl<const P: u64> BaseField for FpFrac<P> {
    const CHARACTERISTIC: u64 = P;

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(FpFrac::new(self.den.clone(), self.num.clone()))
        }
    }

    fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(P as i64) as u64;
        Self::from_poly(FpPoly::constant(r))
    }

    fn from_decimal(digits: &str) -> Option<Self> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let big: BigInt = digits.parse().ok()?;
        let r = (big % BigInt::from(P)).to_u64()?;
        Some(Self::from_poly(FpPoly::constant(r)))
    }

    fn generator() -> Option<Self> {
        Some(Self::from_poly(FpPoly::s()))
    }

    fn height(&self) -> u64 {
        let dn = self.num.degree().unwrap_or(0) as u64;
        let dd = self.den.degree().unwrap_or(0) as u64;
        dn.max(dd)
    }

    fn sign(&self) -> Option<Ordering> {
        None
    }

    fn is_square(&self) -> bool {
        // num/den is a square iff num·den is (den monic, coprime)
        (&self.num * &self.den).sqrt().is_some()
    }

    fn is_artin_schreier_value(&self) -> bool {
        if P != 2 {
            // x² + x = c  ⇔  (2x + 1)² = 1 + 4c
            let disc = Self::one() + Self::from_i64(4) * self.clone();
            return disc.is_square();
        }
        // c = (n² + nm)/m² in lowest terms with m monic; deg n ≤ deg(n² + nm).
        let m = match self.den.sqrt() {
            Some(m) => m,
            None => return false,
        };
        let bound = self.num.degree().map_or(0, |d| d + 1) as u32;
        FpPoly::<P>::all_of_degree_below(bound)
            .iter()
            .any(|n| &(n * n) + &(n * &m) == self.num)
    }

    fn integral_elements(size: u32) -> Vec<Self> {
        FpPoly::<P>::all_of_degree_below(size).into_iter().map(Self::from_poly).collect()
    }

    fn elements_up_to_height(h: u64) -> Vec<Self> {
        let polys = FpPoly::<P>::all_of_degree_below(h as u32 + 1);
        let mut out: Vec<Self> = Vec::new();
        for num in &polys {
            for den in polys.iter().filter(|d| !d.is_zero() && d.leading() == 1) {
                let x = FpFrac::new(num.clone(), den.clone());
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort_by_key(|x| x.height());
        out
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self {
        let deg = height as usize;
        let num = FpPoly::new((0..=deg).map(|_| rng.gen_range(0..P)).collect());
        let mut den_coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..P)).collect();
        let top = rng.gen_range(0..=deg);
        den_coeffs.truncate(top + 1);
        den_coeffs[top] = 1;
        FpFrac::new(num, FpPoly::new(den_coeffs))
    }

    fn is_atomic_literal(&self) -> bool {
        self.den == FpPoly::constant(1) && self.num.coeffs.iter().filter(|&&c| c != 0).count() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F2 = FpFrac<2>;
    type F3 = FpFrac<3>;

    fn s<const P: u64>() -> FpFrac<P> {
        FpFrac::<P>::generator().unwrap()
    }

    #[test]
    fn canonical_fraction() {
        // (s² + s)/(s) reduces to s + 1
        let a = F2::new(FpPoly::new(vec![0, 1, 1]), FpPoly::new(vec![0, 1]));
        assert_eq!(a, s::<2>() + F2::one());
        assert_eq!(F2::zero().den(), &FpPoly::constant(1));
    }

    #[test]
    fn field_inverse() {
        let x = s::<3>() * s::<3>() + F3::from_i64(2);
        assert_eq!(x.clone() * x.inv().unwrap(), F3::one());
    }

    #[test]
    fn squares_in_char_three() {
        let x = s::<3>() + F3::from_i64(2);
        assert!((x.clone() * x).is_square());
        assert!(!s::<3>().is_square());
        // 2 is not a square mod 3
        assert!(!F3::from_i64(2).is_square());
    }

    #[test]
    fn artin_schreier_char_two() {
        // s is not of the form x² + x in 𝔽₂(s)
        assert!(!s::<2>().is_artin_schreier_value());
        // s² + s is
        assert!((s::<2>() * s::<2>() + s::<2>()).is_artin_schreier_value());
        // 1/(s²+s) = 1/s + 1/(s+1)... check x = 1/s: x² + x = (1 + s)/s²
        let x = F2::one().div(s::<2>());
        assert!((x.clone() * x.clone() + x).is_artin_schreier_value());
        assert!(!F2::one().is_artin_schreier_value());
    }

    #[test]
    fn display_polys() {
        let p = FpPoly::<3>::new(vec![1, 0, 2]);
        assert_eq!(p.to_string(), "2*s^2 + 1");
        let f = F2::new(FpPoly::new(vec![1]), FpPoly::new(vec![1, 1]));
        assert_eq!(f.to_string(), "1/(s + 1)");
    }
}
