//! Morita transfer over the splitting field `F = K(t)^ι`.
//!
//! `ε = 1 + j·t⁻¹` spans the left ideal `I = K(t)·ε` of `Q_F`, and a vector
//! `Σ e_i ⊗ f_i·ε` of `V ⊗_Q I` is stored as its coordinates `f ∈ K(t)ⁿ`.
//! The alternating form is `a(fε, gε) = u·(ι(f)g − fι(g))`.

use crate::error::{DescentError, MatrixError};
use crate::field::{decompose_over_f, BaseField, Ext, FunctionScalar, Laurent, RatFn};
use crate::forms::GramForm;
use crate::linalg::Matrix;
use crate::quaternion::{lift_matrix, Quat, QuatMatrix};

/// `(x0 + x1j)·(fε) = (x0·f + x1·ι(f)·ι(t))·ε`.
pub fn act<L: FunctionScalar>(x: &Quat<L>, f: &L) -> L {
    let alg = f.algebra();
    let mut out = x.x0.clone() * f.clone();
    if !x.x1.is_zero() {
        out = out + x.x1.clone() * f.iota() * L::t(alg).iota();
    }
    out
}

/// `a(fε, gε) = u(ι(f)g − fι(g))`, with `u = ℓ` or `u = 1` in characteristic 2.
pub fn alt_form<L: FunctionScalar>(f: &L, g: &L) -> L {
    let u = L::from_k(Ext::skew_unit(f.algebra()));
    u * (f.iota() * g.clone() - f.clone() * g.iota())
}

/// `q_{a*s}(Σ e_i⊗f_iε) = Σ_i a(f_i, S_ii·f_i) + Σ_{i<j} a(f_i, H_ij·f_j)`.
pub fn q_f<B: BaseField, L: FunctionScalar<Base = B>>(form: &GramForm<B>, w: &[L]) -> L {
    assert_eq!(w.len(), form.n());
    let alg = form.alg();
    let mut acc = L::zero(alg);
    for i in 0..w.len() {
        if w[i].is_zero() {
            continue;
        }
        let sii: Quat<L> = form.gram().get(i, i).lift();
        acc = acc + alt_form(&w[i], &act(&sii, &w[i]));
        for j in i + 1..w.len() {
            if w[j].is_zero() {
                continue;
            }
            let hij: Quat<L> = form.polar_gram().get(i, j).lift();
            acc = acc + alt_form(&w[i], &act(&hij, &w[j]));
        }
    }
    acc
}

/// `b_{a*s}(w1, w2) = Σ_ij a(f_i, H_ij·g_j)`.
pub fn b_f<B: BaseField, L: FunctionScalar<Base = B>>(form: &GramForm<B>, w1: &[L], w2: &[L]) -> L {
    let alg = form.alg();
    let mut acc = L::zero(alg);
    for (i, f) in w1.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for (j, g) in w2.iter().enumerate() {
            let hij = form.polar_gram().get(i, j);
            if g.is_zero() || hij.is_zero() {
                continue;
            }
            acc = acc + alt_form(f, &act(&hij.lift::<L>(), g));
        }
    }
    acc
}

/// The `F`-basis `e_i⊗ε, e_i⊗ℓε` of `V ⊗_Q I`, indexed `2i + β`.
pub fn morita_basis<B: BaseField, L: FunctionScalar<Base = B>>(form: &GramForm<B>) -> Vec<Vec<L>> {
    let alg = form.alg();
    let n = form.n();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for f in [Ext::one(alg), Ext::ell(alg)] {
            let mut w = vec![L::zero(alg); n];
            w[i] = L::from_k(f);
            out.push(w);
        }
    }
    out
}

/// Polar Gram of `b_{a*s}` and the values of `q_{a*s}` on the basis, which
/// together determine the quadratic form in every characteristic.
#[derive(Clone, Debug, PartialEq)]
pub struct MoritaGram<B: BaseField> {
    pub polar: Matrix<Laurent<B>>,
    pub q_values: Vec<Laurent<B>>,
}

pub fn morita_gram<B: BaseField>(form: &GramForm<B>) -> MoritaGram<B> {
    let basis: Vec<Vec<Laurent<B>>> = morita_basis(form);
    let m = basis.len();
    let polar = Matrix::from_fn(m, m, |a, b| b_f(form, &basis[a], &basis[b]));
    let q_values = basis.iter().map(|w| q_f(form, w)).collect();
    MoritaGram { polar, q_values }
}

impl<B: BaseField> MoritaGram<B> {
    pub fn polar_over_kt(&self) -> Matrix<RatFn<B>> {
        self.polar.map(|x| RatFn::from_laurent_value(x.clone()))
    }

    pub fn is_nonsingular(&self) -> bool {
        self.polar_over_kt().is_invertible().expect("field elimination")
    }

    /// `q(Σ c_α e_α) = Σ c_α² q(e_α) + Σ_{α<β} c_α c_β b(e_α, e_β)`.
    pub fn evaluate<L: FunctionScalar<Base = B>>(&self, c: &[L]) -> L {
        let alg = self.polar.get(0, 0).alg();
        let mut acc = L::zero(alg);
        for a in 0..c.len() {
            acc = acc + c[a].clone() * c[a].clone() * L::from_laurent(self.q_values[a].clone());
            for b in a + 1..c.len() {
                acc = acc + c[a].clone() * c[b].clone() * L::from_laurent(self.polar.get(a, b).clone());
            }
        }
        acc
    }
}

/// Coordinates in the basis `e_i⊗ε, e_i⊗ℓε` of a Morita vector.
pub fn to_f_coords<L: FunctionScalar>(w: &[L]) -> Vec<L> {
    w.iter()
        .flat_map(|f| {
            let (f0, f1) = decompose_over_f(f);
            [f0, f1]
        })
        .collect()
}

pub fn from_f_coords<L: FunctionScalar>(c: &[L]) -> Vec<L> {
    c.chunks(2)
        .map(|p| {
            let ell = L::from_k(Ext::ell(p[0].algebra()));
            p[0].clone() + ell * p[1].clone()
        })
        .collect()
}

/// Applies `M ∈ M_n(Q_F)` to `Σ e_c⊗f_cε`: the result has coordinates
/// `Σ_c M_rc·(f_cε)`.
pub fn apply_matrix<L: FunctionScalar>(m: &QuatMatrix<L>, w: &[L]) -> Vec<L> {
    (0..m.rows())
        .map(|r| {
            let mut acc = L::zero(w[0].algebra());
            for (c, f) in w.iter().enumerate() {
                acc = acc + act(m.get(r, c), f);
            }
            acc
        })
        .collect()
}

/// `Θ(M)`: the matrix of `v⊗ξ ↦ Mv⊗ξ` in the basis `e_i⊗ε, e_i⊗ℓε`.
pub fn theta<L: FunctionScalar>(m: &QuatMatrix<L>) -> Matrix<L> {
    let n = m.rows();
    let alg = m.get(0, 0).alg().clone();
    let fs = [L::one(&alg), L::from_k(Ext::ell(&alg))];
    let mut out = Matrix::filled(2 * n, 2 * n, L::zero(&alg));
    for c in 0..n {
        for (beta, f) in fs.iter().enumerate() {
            for r in 0..n {
                let (g0, g1) = decompose_over_f(&act(m.get(r, c), f));
                out.set(2 * r, 2 * c + beta, g0);
                out.set(2 * r + 1, 2 * c + beta, g1);
            }
        }
    }
    out
}

/// The unique `y ∈ Q_F` whose action on `I ≅ F²` has the given 2×2 matrix
/// in the basis `ε, ℓε`. Solves `y0 + y1ι(t) = A`, `y0ℓ + y1ι(ℓ)ι(t) = B`.
pub fn quat_from_block<L: FunctionScalar>(m00: &L, m10: &L, m01: &L, m11: &L) -> Quat<L> {
    let alg = m00.algebra().clone();
    let ell = L::from_k(Ext::ell(&alg));
    let a = m00.clone() + ell.clone() * m10.clone();
    let b = m01.clone() + ell.clone() * m11.clone();
    let it = L::t(&alg).iota();
    let det = it.clone() * (ell.iota() - ell.clone());
    let y1 = (b - ell * a.clone()) * det.try_inverse().expect("ι(t)(ι(ℓ) − ℓ) is a unit");
    let y0 = a - y1.clone() * it;
    Quat::new(y0, y1)
}

pub fn theta_inv<L: FunctionScalar>(x: &Matrix<L>) -> QuatMatrix<L> {
    assert!(x.is_square() && x.rows() % 2 == 0);
    let n = x.rows() / 2;
    Matrix::from_fn(n, n, |r, c| {
        quat_from_block(x.get(2 * r, 2 * c), x.get(2 * r + 1, 2 * c), x.get(2 * r, 2 * c + 1), x.get(2 * r + 1, 2 * c + 1))
    })
}

/// Inverse over the split algebra `Q_F`, computed on the image under `Θ`.
pub fn split_inverse<B: BaseField>(m: &QuatMatrix<RatFn<B>>) -> Result<QuatMatrix<RatFn<B>>, MatrixError> {
    Ok(theta_inv(&theta(m).inverse()?))
}

/// Given `w` with `q_F(w) = 0`, writes `w = v⊗ε` and corrects `v` by the
/// element `x ∈ Q_F` with `xε = x(ℓε) = ε`; then `s(vx, vx) ∈ F`.
pub fn transfer_isotropic<B: BaseField>(form: &GramForm<B>, w: &[RatFn<B>]) -> Result<Vec<Quat<RatFn<B>>>, DescentError> {
    // x has Laurent entries, so Laurent input never needs fractions.
    if let Some(laurent) = w.iter().map(|f| f.as_laurent().cloned()).collect::<Option<Vec<Laurent<B>>>>() {
        let vx = transfer_in(form, &laurent)?;
        return Ok(vx.iter().map(|q| q.lift()).collect());
    }
    transfer_in(form, w)
}

fn transfer_in<B: BaseField, L: FunctionScalar<Base = B>>(form: &GramForm<B>, w: &[L]) -> Result<Vec<Quat<L>>, DescentError> {
    if w.len() != form.n() {
        return Err(DescentError::Dimension(format!("expected {} coordinates, got {}", form.n(), w.len())));
    }
    if w.iter().all(|f| f.is_zero()) {
        return Err(DescentError::ZeroVector);
    }
    if !q_f(form, w).is_zero() {
        return Err(DescentError::NotIsotropic);
    }
    let alg = form.alg();
    let x = transfer_correction::<L>(alg);
    let vx: Vec<Quat<L>> = w.iter().map(|f| Quat::scalar(f.clone()) * x.clone()).collect();
    let s: QuatMatrix<L> = lift_matrix(form.gram());
    let value = crate::forms::sesq(&s, &vx, &vx);
    if !value.is_central() {
        return Err(DescentError::InternalInvariant(format!("s(vx, vx) = {} is not in F", value)));
    }
    if vx.iter().all(|q| q.is_zero()) {
        return Err(DescentError::InternalInvariant("corrected vector vanished".into()));
    }
    Ok(vx)
}

/// `x = x0 + x1j` with `x1 = (1 − ℓ)/(ι(t)(ι(ℓ) − ℓ))` and `x0 = 1 − x1ι(t)`.
pub fn transfer_correction<L: FunctionScalar>(alg: &crate::field::Desc<L::Base>) -> Quat<L> {
    let (one, zero) = (L::one(alg), L::zero(alg));
    let x = quat_from_block(&one, &zero, &one, &zero);
    debug_assert!(act(&x, &one) == one && act(&x, &L::from_k(Ext::ell(alg))) == one);
    x
}
