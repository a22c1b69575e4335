//! Quadratic pairs on `End_Q(V) = M_n(Q)` attached to generalized quadratic
//! forms, and their split counterparts on `End_F(V ⊗_Q I)`.
//!
//! Tensors `Σ v⊗w̄ ∈ V ⊗_Q V̄` are stored as matrices `U = Σ v·bar(w)ᵀ`, so
//! that `Φ_h(U) = U·H` and the switch map is `U ↦ U†`.

use crate::error::PairError;
use crate::field::{BaseField, Ext, FunctionScalar, Laurent, RatFn, RingElement, TowerScalar};
use crate::forms::{invert, quat_from_k_coords, quat_k_basis, quat_k_coords, GramForm};
use crate::linalg::Matrix;
use crate::morita::{alt_form, quat_from_block, MoritaGram};
use crate::quaternion::{dagger, Quat, QuatK, QuatMatrix};

/// `v·bar(w)ᵀ`, the matrix of the tensor `v⊗w̄`.
pub fn tensor<L: TowerScalar>(v: &[Quat<L>], w: &[Quat<L>]) -> QuatMatrix<L> {
    Matrix::from_fn(v.len(), w.len(), |r, c| v[r].clone() * w[c].bar())
}

/// `Φ_h(v⊗w̄) = v·h(w, ·)`.
pub fn phi<L: TowerScalar>(v: &[Quat<L>], w: &[Quat<L>], h: &QuatMatrix<L>) -> QuatMatrix<L> {
    tensor(v, w).mul(h)
}

/// `Trd_{End_Q(V)}(M) = Trd_Q(tr M)`.
pub fn trd_end<L: TowerScalar>(m: &QuatMatrix<L>) -> L {
    m.trace().trd()
}

/// The pair `(σ_{h_s}, f_{[s]})` of a nonsingular generalized quadratic form.
#[derive(Clone, Debug)]
pub struct QuadraticPair<B: BaseField> {
    form: GramForm<B>,
    h_inv: QuatMatrix<Ext<B>>,
}

impl<B: BaseField> QuadraticPair<B> {
    pub fn new(form: &GramForm<B>) -> Result<Self, PairError> {
        let h_inv = invert(form.polar_gram()).map_err(|_| PairError::SingularH)?;
        Ok(QuadraticPair { form: form.clone(), h_inv })
    }

    pub fn form(&self) -> &GramForm<B> {
        &self.form
    }

    pub fn h(&self) -> &QuatMatrix<Ext<B>> {
        self.form.polar_gram()
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn phi(&self, v: &[QuatK<B>], w: &[QuatK<B>]) -> QuatMatrix<Ext<B>> {
        phi(v, w, self.h())
    }

    /// `Φ_h⁻¹(M) = M·H⁻¹` as a tensor matrix.
    pub fn phi_inv(&self, m: &QuatMatrix<Ext<B>>) -> QuatMatrix<Ext<B>> {
        m.mul(&self.h_inv)
    }

    /// `σ(M) = H⁻¹·M†·H`.
    pub fn adjoint(&self, m: &QuatMatrix<Ext<B>>) -> QuatMatrix<Ext<B>> {
        self.h_inv.mul(&dagger(m)).mul(self.h())
    }

    pub fn is_symmetric(&self, m: &QuatMatrix<Ext<B>>) -> bool {
        self.adjoint(m) == *m
    }

    /// `f(M) = Trd_Q(tr(S·M·H⁻¹))` on `Sym(σ)`.
    pub fn semitrace(&self, m: &QuatMatrix<Ext<B>>) -> Result<B, PairError> {
        if !self.is_symmetric(m) {
            return Err(PairError::NotSymmetric);
        }
        Ok(self.semitrace_unchecked(m))
    }

    pub fn semitrace_unchecked(&self, m: &QuatMatrix<Ext<B>>) -> B {
        let u = self.phi_inv(m);
        self.t_s(&u)
    }

    /// `T_s(U) = Trd_Q(tr(S·U))`, which is `Trd_Q(s(w, v))` on `U = v⊗w̄`.
    pub fn t_s(&self, u: &QuatMatrix<Ext<B>>) -> B {
        self.form.gram().mul(u).trace().trd().c0().clone()
    }

    /// A `k`-basis of `Sym(σ)`, as the kernel of `M ↦ σ(M) − M` on `M_n(Q) ≅ k^{4n²}`.
    pub fn sym_basis(&self) -> Vec<QuatMatrix<Ext<B>>> {
        let n = self.n();
        let alg = self.form.alg().clone();
        let basis = matrix_k_basis(&alg, n);
        let cols: Vec<Vec<B>> = basis.iter().map(|m| matrix_k_coords(&self.adjoint(m).sub(m))).collect();
        let lin = Matrix::from_fn(4 * n * n, basis.len(), |r, c| cols[c][r].clone());
        lin.kernel()
            .expect("field elimination")
            .iter()
            .map(|c| matrix_from_k_coords(&alg, n, c))
            .collect()
    }

    /// Axiom (i): `dim_k Sym(σ) = ½·2n·(2n+1)` and `Trd(x) = 0` whenever `σ(x) = −x`.
    pub fn check_axiom_dimension(&self) -> bool {
        let n = self.n();
        if self.sym_basis().len() != n * (2 * n + 1) {
            return false;
        }
        // σ(x) = −x  ⟺  x = y − σ(y)
        matrix_k_basis(self.form.alg(), n)
            .iter()
            .all(|y| trd_end(&y.sub(&self.adjoint(y))).is_zero())
    }

    /// Axiom (ii) at one `x`: `f(x + σ(x)) = Trd(x)`. `σ` is an involution,
    /// so `x + σ(x)` is symmetric without checking.
    pub fn check_axiom_semitrace(&self, x: &QuatMatrix<Ext<B>>) -> bool {
        let sym = x.add(&self.adjoint(x));
        self.semitrace_unchecked(&sym) == *trd_end(x).c0()
    }

    /// Whether `u·Q` spans an isotropic right ideal `Hom(V, uQ)`:
    /// `σ(Φ(u⊗v̄))·Φ(u⊗w̄) = 0` on a `k`-basis and `f(Φ(ux⊗ū)) = 0` for `Trd(x) = 0`.
    pub fn isotropy_check(&self, u: &[QuatK<B>]) -> Result<bool, PairError> {
        if u.iter().all(|x| x.is_zero()) {
            return Err(PairError::ZeroVector);
        }
        let alg = self.form.alg();
        let basis = crate::forms::vector_k_basis(alg, self.n());
        for v in &basis {
            let left = self.adjoint(&self.phi(u, v));
            for w in &basis {
                if !left.mul(&self.phi(u, w)).is_zero() {
                    return Ok(false);
                }
            }
        }
        for x in trace_zero_basis(alg) {
            let ux: Vec<_> = u.iter().map(|c| c.clone() * x.clone()).collect();
            if !self.semitrace_unchecked(&self.phi(&ux, u)).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A `k`-basis of `{x ∈ Q : Trd(x) = 0}`.
pub fn trace_zero_basis<B: BaseField>(alg: &crate::field::Desc<B>) -> Vec<QuatK<B>> {
    let basis = quat_k_basis(alg);
    let row = Matrix::from_fn(1, 4, |_, c| basis[c].trd().c0().clone());
    row.kernel()
        .expect("field elimination")
        .iter()
        .map(|c| quat_from_k_coords(alg, c))
        .collect()
}

/// The basis `E_rc·x` of `M_n(Q)` over `k`.
pub fn matrix_k_basis<B: BaseField>(alg: &crate::field::Desc<B>, n: usize) -> Vec<QuatMatrix<Ext<B>>> {
    let mut out = Vec::with_capacity(4 * n * n);
    for r in 0..n {
        for c in 0..n {
            for x in quat_k_basis(alg) {
                let mut m = Matrix::filled(n, n, Quat::zero(alg));
                m.set(r, c, x);
                out.push(m);
            }
        }
    }
    out
}

pub fn matrix_k_coords<B: BaseField>(m: &QuatMatrix<Ext<B>>) -> Vec<B> {
    m.entries().flat_map(quat_k_coords).collect()
}

pub fn matrix_from_k_coords<B: BaseField>(alg: &crate::field::Desc<B>, n: usize, c: &[B]) -> QuatMatrix<Ext<B>> {
    Matrix::from_fn(n, n, |r, col| quat_from_k_coords(alg, &c[4 * (r * n + col)..4 * (r * n + col) + 4]))
}

/// Spanning set of `Skew(sw) = {U : U† = −U}`: `E_ab·x − E_ba·bar(x)` for
/// `a < b`, and `E_aa·x` with `Trd(x) = 0`.
pub fn skew_sw_basis<B: BaseField>(alg: &crate::field::Desc<B>, n: usize) -> Vec<QuatMatrix<Ext<B>>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for x in quat_k_basis(alg) {
                let mut m = Matrix::filled(n, n, Quat::zero(alg));
                m.set(b, a, -x.bar());
                m.set(a, b, x);
                out.push(m);
            }
        }
        for x in trace_zero_basis(alg) {
            let mut m = Matrix::filled(n, n, Quat::zero(alg));
            m.set(a, a, x);
            out.push(m);
        }
    }
    out
}

/// Recovers `[s]` from the skew-hermitian `H` and the semitrace `f`, by
/// solving `S − S† = H` and `Trd(tr(S·U)) = f(U·H)` for `U` in `Skew(sw)`.
pub fn pair_to_form<B: BaseField>(
    h: &QuatMatrix<Ext<B>>,
    f: impl Fn(&QuatMatrix<Ext<B>>) -> B,
) -> Result<GramForm<B>, PairError> {
    let n = h.rows();
    let alg = h.get(0, 0).alg().clone();
    let unknowns = matrix_k_basis(&alg, n);
    let skew = skew_sw_basis(&alg, n);
    // Each unknown contributes one column: the k-coordinates of S − S†
    // followed by Trd(tr(S·U)) for every U.
    let equations = |s: &QuatMatrix<Ext<B>>| -> Vec<B> {
        let mut row = matrix_k_coords(&s.sub(&dagger(s)));
        row.extend(skew.iter().map(|u| s.mul(u).trace().trd().c0().clone()));
        row
    };
    let cols: Vec<Vec<B>> = unknowns.iter().map(&equations).collect();
    let m = cols[0].len();
    let lin = Matrix::from_fn(m, unknowns.len(), |r, c| cols[c][r].clone());
    let mut rhs = matrix_k_coords(h);
    rhs.extend(skew.iter().map(|u| f(&u.mul(h))));
    let sol = lin.solve(&rhs).expect("field elimination").ok_or(PairError::Inconsistent)?;
    Ok(GramForm::new(matrix_from_k_coords(&alg, n, &sol)))
}

/// `σ_b(X) = G⁻¹XᵀG` for the polar Gram `G`.
pub fn split_adjoint<L: RingElement>(x: &Matrix<L>, g: &Matrix<L>, g_inv: &Matrix<L>) -> Matrix<L> {
    g_inv.mul(&x.transpose()).mul(g)
}

/// `(c, c·G⁻¹)` with `c` the least common denominator of `G⁻¹`, so both are
/// Laurent. `None` when `G` is singular.
pub fn scaled_inverse<B: BaseField>(g: &Matrix<Laurent<B>>) -> Option<(Laurent<B>, Matrix<Laurent<B>>)> {
    let inv = g.map(|x| RatFn::from_laurent_value(x.clone())).inverse().ok()?;
    let alg = g.get(0, 0).alg();
    let mut c = Laurent::constant(Ext::one(alg));
    for e in inv.entries() {
        let scaled = RatFn::from_laurent_value(c.clone()) * e.clone();
        if scaled.as_laurent().is_none() {
            c = c * scaled.den().clone();
        }
    }
    let lc = RatFn::from_laurent_value(c.clone());
    let scaled = inv.map(|e| (lc.clone() * e.clone()).as_laurent().expect("common denominator").clone());
    Some((c, scaled))
}

/// `f_q(X)`, the semitrace with `f_q(Φ_b(w⊗w)) = q(w)`: with `Y = X·G⁻¹`,
/// `f_q(X) = Σ Y_αα·q(e_α) + Σ_{α<β} Y_αβ·b(e_α, e_β)`.
/// Passing `c·G⁻¹` in place of `G⁻¹` returns `c·f_q(X)`.
pub fn split_semitrace<B: BaseField, L: FunctionScalar<Base = B> + RingElement>(x: &Matrix<L>, gram: &MoritaGram<B>, g_inv: &Matrix<L>) -> L {
    trace_pairing(x, &semitrace_matrix(gram, g_inv))
}

/// `Z = G⁻¹·W` with `W_βα = b(e_α, e_β)` for `α < β` and `W_αα = q(e_α)`,
/// so that `f_q(X) = tr(X·Z)`.
pub fn semitrace_matrix<B: BaseField, L: FunctionScalar<Base = B> + RingElement>(gram: &MoritaGram<B>, g_inv: &Matrix<L>) -> Matrix<L> {
    let alg = gram.polar.get(0, 0).alg();
    let w = Matrix::from_fn(g_inv.rows(), g_inv.rows(), |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => L::zero(alg),
        std::cmp::Ordering::Equal => L::from_laurent(gram.q_values[r].clone()),
        std::cmp::Ordering::Greater => L::from_laurent(gram.polar.get(c, r).clone()),
    });
    g_inv.mul(&w)
}

/// `tr(X·Z)` without forming the product.
pub fn trace_pairing<L: RingElement>(x: &Matrix<L>, z: &Matrix<L>) -> L {
    let mut acc = x.get(0, 0).zero_of();
    for a in 0..x.rows() {
        for k in 0..x.cols() {
            let (p, q) = (x.get(a, k), z.get(k, a));
            if !p.is_zero_elem() && !q.is_zero_elem() {
                acc = acc + p.clone() * q.clone();
            }
        }
    }
    acc
}

/// `Φ_b(x⊗y) = x·b(y, ·)`, as the matrix `x·yᵀ·G` in F-coordinates.
pub fn split_phi<L: FunctionScalar + RingElement>(x: &[L], y: &[L], g: &Matrix<L>) -> Matrix<L> {
    Matrix::from_fn(x.len(), y.len(), |r, c| x[r].clone() * y[c].clone()).mul(g)
}

/// `ξ1⊗a(ξ2, ·) ∈ I⊗I^♯ = Q_F`, for `ξ1 = fε` and `ξ2 = gε`.
pub fn rank_one_quat<L: FunctionScalar>(f: &L, g: &L) -> Quat<L> {
    let alg = f.algebra();
    let (c0, c1) = crate::field::decompose_over_f(f);
    let a1 = alt_form(g, &L::one(alg));
    let al = alt_form(g, &L::from_k(Ext::ell(alg)));
    quat_from_block(&(a1.clone() * c0.clone()), &(a1 * c1.clone()), &(al.clone() * c0), &(al * c1))
}

/// `Θ′(x⊗y)` for Morita vectors `x = Σ e_i⊗f_iε`, `y = Σ e_j⊗g_jε`, as the
/// tensor matrix with entries `f_iε⊗a(g_jε, ·)`.
pub fn theta_prime<L: FunctionScalar>(x: &[L], y: &[L]) -> QuatMatrix<L> {
    Matrix::from_fn(x.len(), y.len(), |i, j| rank_one_quat(&x[i], &y[j]))
}

pub fn polar_gram_laurent<B: BaseField>(form: &GramForm<B>) -> QuatMatrix<Laurent<B>> {
    form.polar_gram().map(|x| x.lift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Algebra, Desc, ExtKind, Rational};
    use crate::morita::{morita_basis, morita_gram, theta, to_f_coords};
    use crate::quaternion::lift_matrix;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn hamilton() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, r(-1), r(-1)).unwrap()
    }

    fn i_form(alg: &Desc<Rational>) -> GramForm<Rational> {
        GramForm::new(Matrix::from_rows(vec![vec![Quat::ell(alg)]]))
    }

    fn hyperbolic(alg: &Desc<Rational>) -> GramForm<Rational> {
        let (z, o) = (Quat::zero(alg), Quat::one(alg));
        GramForm::new(Matrix::from_rows(vec![vec![z.clone(), o], vec![z.clone(), z]]))
    }

    #[test]
    fn phi_and_semitrace_examples() {
        let alg = hamilton();
        let pair = QuadraticPair::new(&i_form(&alg)).unwrap();
        let one = vec![Quat::one(&alg)];
        let i2 = Quat::ell(&alg) + Quat::ell(&alg);
        assert_eq!(pair.phi(&one, &one), Matrix::from_rows(vec![vec![i2]]));
        let id = Matrix::identity(1, &Quat::one(&alg));
        assert_eq!(pair.semitrace(&id), Ok(r(1)));
        assert_eq!(pair.adjoint(&id), id);
        // σ(j) = (2i)⁻¹·(−j)·(2i) = j
        let j = Matrix::from_rows(vec![vec![Quat::j(&alg)]]);
        assert_eq!(pair.adjoint(&j), j);
        assert_eq!(pair.semitrace(&Matrix::from_rows(vec![vec![Quat::ell(&alg)]])), Err(PairError::NotSymmetric));
    }

    #[test]
    fn axioms_for_small_forms() {
        let alg = hamilton();
        for form in [i_form(&alg), hyperbolic(&alg)] {
            let pair = QuadraticPair::new(&form).unwrap();
            assert!(pair.check_axiom_dimension());
            for x in matrix_k_basis(&alg, form.n()) {
                assert!(pair.check_axiom_semitrace(&x));
            }
        }
    }

    #[test]
    fn recovery_roundtrips() {
        let alg = hamilton();
        for form in [i_form(&alg), hyperbolic(&alg)] {
            let pair = QuadraticPair::new(&form).unwrap();
            let back = pair_to_form(pair.h(), |m| pair.semitrace_unchecked(m)).unwrap();
            assert!(back.class_equal(&form));
            assert_eq!(back.polar_gram(), form.polar_gram());
        }
    }

    #[test]
    fn corrupted_semitrace_is_inconsistent() {
        let alg = hamilton();
        let pair = QuadraticPair::new(&hyperbolic(&alg)).unwrap();
        let target = skew_sw_basis(&alg, 2)[0].mul(pair.h());
        let res = pair_to_form(pair.h(), |m| {
            let v = pair.semitrace_unchecked(m);
            if *m == target {
                v + r(1)
            } else {
                v
            }
        });
        assert_eq!(res.err(), Some(PairError::Inconsistent));
    }

    #[test]
    fn isotropy_examples() {
        let alg = hamilton();
        let pair = QuadraticPair::new(&hyperbolic(&alg)).unwrap();
        let (o, z, i) = (Quat::one(&alg), Quat::zero(&alg), Quat::ell(&alg));
        assert_eq!(pair.isotropy_check(&[o.clone(), z.clone()]), Ok(true));
        assert_eq!(pair.isotropy_check(&[o.clone(), i]), Ok(false));
        assert_eq!(pair.isotropy_check(&[z.clone(), z]), Err(PairError::ZeroVector));
    }

    #[test]
    fn commuting_square_for_i_form() {
        let alg = hamilton();
        let form = i_form(&alg);
        let gram = morita_gram(&form);
        let h = polar_gram_laurent(&form);
        let basis: Vec<Vec<Laurent<Rational>>> = morita_basis(&form);
        for x in &basis {
            for y in &basis {
                let lhs = theta(&theta_prime(x, y).mul(&h));
                let rhs = split_phi(&to_f_coords(x), &to_f_coords(y), &gram.polar);
                assert_eq!(lhs, rhs);
            }
        }
        let m: QuatMatrix<Laurent<Rational>> = lift_matrix(&Matrix::from_rows(vec![vec![Quat::ell(&alg)]]));
        let th = theta(&m);
        assert_eq!(th.trace(), trd_end(&m));
    }

    #[test]
    fn scaled_inverse_clears_denominators() {
        let alg = hamilton();
        let g = morita_gram(&i_form(&alg)).polar;
        let (c, c_inv) = scaled_inverse(&g).unwrap();
        let one = Laurent::constant(Ext::one(&alg));
        assert_eq!(c_inv.mul(&g), Matrix::identity(g.rows(), &one).scale_left(&c));
    }
}
