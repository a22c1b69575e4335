//! Seeded instance generation and the preset algebras.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Algebra, BaseField, Desc, Ext, ExtKind, FpFrac, Laurent, Rational, TowerScalar};
use crate::forms::{invert, GramForm};
use crate::linalg::Matrix;
use crate::morita::apply_matrix;
use crate::quaternion::{lift_matrix, Quat, QuatK, QuatMatrix};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hamilton quaternions `(ℚ(i), ι, −1)`.
pub fn hamilton() -> Desc<Rational> {
    Algebra::new(ExtKind::Sqrt, Rational::from_i64(-1), Rational::from_i64(-1)).expect("valid preset")
}

/// `K = 𝔽₂(s)[ℓ]/(ℓ² + ℓ + s)` with `b = s`, which is split: `N(ℓ) = s`.
pub fn char2_split() -> Desc<FpFrac<2>> {
    let s = FpFrac::<2>::generator().expect("𝔽₂(s) has a generator");
    Algebra::new(ExtKind::ArtinSchreier, s.clone(), s).expect("valid preset")
}

/// Draws base-field elements of bounded height.
#[derive(Clone, Debug)]
pub struct Sampler<B: BaseField> {
    alg: Desc<B>,
    pool: Vec<B>,
    /// Integers, or polynomials in `s`, of the same height.
    integral: Vec<B>,
}

impl<B: BaseField> Sampler<B> {
    pub fn new(alg: &Desc<B>, height: u64) -> Self {
        let integral = B::integral_elements(height.try_into().unwrap_or(u32::MAX));
        Sampler { alg: alg.clone(), pool: B::elements_up_to_height(height), integral }
    }

    pub fn alg(&self) -> &Desc<B> {
        &self.alg
    }

    pub fn base<R: Rng + ?Sized>(&self, rng: &mut R) -> B {
        self.pool.choose(rng).expect("nonempty pool").clone()
    }

    pub fn ext<R: Rng + ?Sized>(&self, rng: &mut R) -> Ext<B> {
        Ext::new(&self.alg, self.base(rng), self.base(rng))
    }

    pub fn quat<R: Rng + ?Sized>(&self, rng: &mut R) -> QuatK<B> {
        Quat::new(self.ext(rng), self.ext(rng))
    }

    pub fn nonzero_quat<R: Rng + ?Sized>(&self, rng: &mut R) -> QuatK<B> {
        loop {
            let x = self.quat(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn vector<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<QuatK<B>> {
        (0..n).map(|_| self.quat(rng)).collect()
    }

    pub fn matrix<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> QuatMatrix<Ext<B>> {
        Matrix::from_fn(n, n, |_, _| self.quat(rng))
    }

    /// A Laurent polynomial with exponents in `[−deg, deg]`.
    pub fn laurent<R: Rng + ?Sized>(&self, rng: &mut R, deg: i64) -> Laurent<B> {
        Laurent::from_terms(&self.alg, (-deg..=deg).map(|z| (z, self.ext(rng))).collect::<Vec<_>>())
    }

    /// A nonzero `λ = g + ι(g) ∈ 𝓕` of degree at most `deg`.
    pub fn calf<R: Rng + ?Sized>(&self, rng: &mut R, deg: i64) -> Laurent<B> {
        loop {
            let g = self.laurent(rng, deg);
            let lam = g.clone() + g.iota();
            if !lam.is_zero() {
                return lam;
            }
        }
    }

    fn integral_quat<R: Rng + ?Sized>(&self, rng: &mut R) -> QuatK<B> {
        let mut c = || self.integral.choose(rng).expect("nonempty pool").clone();
        Quat::new(Ext::new(&self.alg, c(), c()), Ext::new(&self.alg, c(), c()))
    }

    /// A unipotent upper triangular matrix times a unipotent lower one, with
    /// integral entries so that the inverse is integral too.
    pub fn invertible<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> QuatMatrix<Ext<B>> {
        let zero = Quat::zero(&self.alg);
        let one = Quat::one(&self.alg);
        let upper = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Less => self.integral_quat(rng),
            std::cmp::Ordering::Equal => one.clone(),
            std::cmp::Ordering::Greater => zero.clone(),
        });
        let lower = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Greater => self.integral_quat(rng),
            std::cmp::Ordering::Equal => one.clone(),
            std::cmp::Ordering::Less => zero.clone(),
        });
        upper.mul(&lower)
    }
}

/// What kind of form [`gen_random_instance`] should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Random entries.
    Generic,
    /// A hyperbolic plane `[[0,1],[0,0]]` plus random entries, in a random basis.
    Planted,
    /// A random form with a zero row and column, in a random basis.
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct Instance<B: BaseField> {
    pub form: GramForm<B>,
    /// `P` with `S = P†·S₀·P`; planted vectors live in the basis of `S₀`.
    pub basis: QuatMatrix<Ext<B>>,
    /// `v ≠ 0` with `s(v, v) ∈ k`, for planted instances.
    pub witness: Option<Vec<QuatK<B>>>,
}

impl<B: BaseField> Instance<B> {
    /// `w = λ·P⁻¹·(h·ξ, g·ξ, 0, …)` with `g, h, λ ∈ 𝓕`: isotropic because the
    /// planted plane has `q(ξ1, ξ2) = a(ξ1, ξ2)` and `a` is `F`-bilinear.
    pub fn isotropic_morita<R: Rng + ?Sized>(&self, sampler: &Sampler<B>, rng: &mut R, deg: i64) -> Option<Vec<Laurent<B>>> {
        self.witness.as_ref()?;
        let alg = sampler.alg();
        let n = self.form.n();
        let xi = loop {
            let x = sampler.laurent(rng, deg.min(1));
            if !x.is_zero() {
                break x;
            }
        };
        let (g, h) = (sampler.calf(rng, 1), sampler.calf(rng, 1));
        let mut w0 = vec![Laurent::zero(alg); n];
        w0[1] = g * xi.clone();
        w0[0] = h * xi;
        let p_inv = invert(&self.basis).expect("basis change is invertible");
        let lam = sampler.calf(rng, deg);
        let w = apply_matrix(&lift_matrix(&p_inv), &w0);
        Some(w.into_iter().map(|f| f * lam.clone()).collect())
    }
}

pub fn gen_random_instance<B: BaseField>(alg: &Desc<B>, seed: u64, n: usize, height: u64, shape: Shape) -> Instance<B> {
    assert!(n >= 1, "forms have rank at least 1");
    let mut rng = rng_from_seed(seed);
    let sampler = Sampler::new(alg, height);
    let zero = Quat::zero(alg);
    let mut s0 = sampler.matrix(&mut rng, n);
    match shape {
        Shape::Generic => {}
        Shape::Planted => {
            assert!(n >= 2, "a hyperbolic plane needs rank 2");
            for r in 0..n {
                for c in 0..n {
                    if r < 2 || c < 2 {
                        s0.set(r, c, zero.clone());
                    }
                }
            }
            s0.set(0, 1, Quat::one(alg));
        }
        Shape::Degenerate => {
            for i in 0..n {
                s0.set(n - 1, i, zero.clone());
                s0.set(i, n - 1, zero.clone());
            }
        }
    }
    let basis = sampler.invertible(&mut rng, n);
    let form = GramForm::new(s0).change_basis(&basis);
    let witness = (shape == Shape::Planted).then(|| {
        let p_inv = invert(&basis).expect("basis change is invertible");
        p_inv.column(0)
    });
    Instance { form, basis, witness }
}

/// The rank-one form `[[ℓ]]`, anisotropic over Hamilton quaternions.
pub fn pure_diagonal<B: BaseField>(alg: &Desc<B>) -> GramForm<B> {
    GramForm::new(Matrix::from_rows(vec![vec![Quat::ell(alg)]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let alg = hamilton();
        let a = gen_random_instance(&alg, 1, 2, 3, Shape::Generic);
        let b = gen_random_instance(&alg, 1, 2, 3, Shape::Generic);
        assert_eq!(a.form.gram(), b.form.gram());
        let c = gen_random_instance(&alg, 2, 2, 3, Shape::Generic);
        assert_ne!(a.form.gram(), c.form.gram());
    }

    #[test]
    fn planted_witness_is_isotropic() {
        for seed in 0..10 {
            let alg = hamilton();
            let inst = gen_random_instance(&alg, seed, 3, 2, Shape::Planted);
            let v = inst.witness.clone().unwrap();
            assert!(v.iter().any(|x| !x.is_zero()));
            assert!(inst.form.q_value(&v).is_zero());
            let alg2 = char2_split();
            let inst = gen_random_instance(&alg2, seed, 2, 1, Shape::Planted);
            assert!(inst.form.q_value(inst.witness.as_ref().unwrap()).is_zero());
        }
    }

    #[test]
    fn planted_morita_vectors_are_isotropic() {
        let alg = hamilton();
        let sampler = Sampler::new(&alg, 2);
        let mut rng = rng_from_seed(7);
        for seed in 0..5 {
            let inst = gen_random_instance(&alg, seed, 2, 2, Shape::Planted);
            let w = inst.isotropic_morita(&sampler, &mut rng, 2).unwrap();
            assert!(crate::morita::q_f(&inst.form, &w).is_zero());
        }
    }

    #[test]
    fn degenerate_instances_are_singular() {
        let alg = hamilton();
        let inst = gen_random_instance(&alg, 3, 2, 2, Shape::Degenerate);
        assert!(!inst.form.is_nonsingular());
    }
}
