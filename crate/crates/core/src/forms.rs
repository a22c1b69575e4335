//! Generalized quadratic forms on `V = Qⁿ`: Gram matrices modulo even
//! hermitian matrices, the polar form `h_s = s − s†` and `q_s(v) = s(v,v) + k`.

use std::fmt;

use crate::error::MatrixError;
use crate::field::{BaseField, Desc, Ext, TowerScalar};
use crate::linalg::Matrix;
use crate::quaternion::{dagger, Quat, QuatK, QuatMatrix};

/// `Σ bar(v_i)·M_ij·w_j` at any level of the tower.
pub fn sesq<L: TowerScalar>(m: &QuatMatrix<L>, v: &[Quat<L>], w: &[Quat<L>]) -> Quat<L> {
    assert_eq!(v.len(), m.rows());
    assert_eq!(w.len(), m.cols());
    let mut acc = Quat::zero(m.get(0, 0).alg());
    for (i, vi) in v.iter().enumerate() {
        let vb = vi.bar();
        for (j, wj) in w.iter().enumerate() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            acc = acc + vb.clone() * e.clone() * wj.clone();
        }
    }
    acc
}

/// A class in `Q/k`, stored through an arbitrary representative.
#[derive(Clone, Debug)]
pub struct QModK<B: BaseField>(pub QuatK<B>);

impl<B: BaseField> QModK<B> {
    pub fn is_zero(&self) -> bool {
        self.0.is_in_k()
    }

    pub fn representative(&self) -> &QuatK<B> {
        &self.0
    }
}

impl<B: BaseField> PartialEq for QModK<B> {
    fn eq(&self, other: &Self) -> bool {
        (self.0.clone() - other.0.clone()).is_in_k()
    }
}

/// A Gram matrix `S` over `Q` together with its polar Gram `H = S − S†`.
#[derive(Clone, Debug)]
pub struct GramForm<B: BaseField> {
    s: QuatMatrix<Ext<B>>,
    h: QuatMatrix<Ext<B>>,
}

impl<B: BaseField> GramForm<B> {
    /// Panics unless `s` is square and nonempty.
    pub fn new(s: QuatMatrix<Ext<B>>) -> Self {
        assert!(s.is_square() && s.rows() > 0, "Gram matrix must be square and nonempty");
        let h = s.sub(&dagger(&s));
        GramForm { s, h }
    }

    pub fn n(&self) -> usize {
        self.s.rows()
    }

    pub fn alg(&self) -> &Desc<B> {
        self.s.get(0, 0).alg()
    }

    pub fn gram(&self) -> &QuatMatrix<Ext<B>> {
        &self.s
    }

    /// `H = S − S†`.
    pub fn polar_gram(&self) -> &QuatMatrix<Ext<B>> {
        &self.h
    }

    pub fn s(&self, v: &[QuatK<B>], w: &[QuatK<B>]) -> QuatK<B> {
        sesq(&self.s, v, w)
    }

    pub fn h_s(&self, v: &[QuatK<B>], w: &[QuatK<B>]) -> QuatK<B> {
        sesq(&self.h, v, w)
    }

    pub fn q_value(&self, v: &[QuatK<B>]) -> QModK<B> {
        QModK(self.s(v, v))
    }

    /// Whether `H` is invertible. Elimination over `Q` is exact for division
    /// algebras; a zero divisor (split `Q`) falls back to the rank of the
    /// `k`-linear map `v ↦ Hv` on `Qⁿ ≅ k^{4n}`.
    pub fn is_nonsingular(&self) -> bool {
        match self.h.inverse() {
            Ok(_) => true,
            Err(MatrixError::Singular) => false,
            Err(_) => k_linear_rank(&self.h) == 4 * self.n(),
        }
    }

    /// `S − S′` hermitian with diagonal in `k`.
    pub fn class_equal(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let g = self.s.sub(&other.s);
        dagger(&g) == g && (0..self.n()).all(|i| g.get(i, i).is_in_k())
    }

    /// The same class with representative `S + T + T†`.
    pub fn perturb(&self, t: &QuatMatrix<Ext<B>>) -> Self {
        GramForm::new(self.s.add(&t.add(&dagger(t))))
    }

    /// `P†SP`, the form in the basis given by the columns of `P`.
    pub fn change_basis(&self, p: &QuatMatrix<Ext<B>>) -> Self {
        GramForm::new(dagger(p).mul(&self.s).mul(p))
    }
}

impl<B: BaseField> fmt::Display for GramForm<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.s)
    }
}

/// The `k`-basis `1, ℓ, j, ℓj` of `Q`.
pub fn quat_k_basis<B: BaseField>(alg: &Desc<B>) -> [QuatK<B>; 4] {
    let one = Ext::one(alg);
    let ell = Ext::ell(alg);
    let zero = Ext::zero(alg);
    [
        Quat::new(one.clone(), zero.clone()),
        Quat::new(ell.clone(), zero.clone()),
        Quat::new(zero.clone(), one),
        Quat::new(zero, ell),
    ]
}

/// Coordinates of `x` in the basis `1, ℓ, j, ℓj`.
pub fn quat_k_coords<B: BaseField>(x: &QuatK<B>) -> [B; 4] {
    [x.x0.c0().clone(), x.x0.c1().clone(), x.x1.c0().clone(), x.x1.c1().clone()]
}

pub fn quat_from_k_coords<B: BaseField>(alg: &Desc<B>, c: &[B]) -> QuatK<B> {
    Quat::new(Ext::new(alg, c[0].clone(), c[1].clone()), Ext::new(alg, c[2].clone(), c[3].clone()))
}

/// The `k`-basis `e_i·x` of `Qⁿ`, with `x` running over `1, ℓ, j, ℓj`.
pub fn vector_k_basis<B: BaseField>(alg: &Desc<B>, n: usize) -> Vec<Vec<QuatK<B>>> {
    let basis = quat_k_basis(alg);
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        for x in &basis {
            let mut v = vec![Quat::zero(alg); n];
            v[i] = x.clone();
            out.push(v);
        }
    }
    out
}

/// The `4n × 4n` matrix over `k` of `v ↦ Mv` on `Qⁿ`.
pub fn k_linear_matrix<B: BaseField>(m: &QuatMatrix<Ext<B>>) -> Matrix<B> {
    let alg = m.get(0, 0).alg().clone();
    let n = m.cols();
    let cols: Vec<Vec<B>> = vector_k_basis(&alg, n)
        .iter()
        .map(|v| m.mul_vec(v).iter().flat_map(|x| quat_k_coords(x)).collect())
        .collect();
    Matrix::from_fn(4 * m.rows(), 4 * n, |r, c| cols[c][r].clone())
}

pub fn k_linear_rank<B: BaseField>(m: &QuatMatrix<Ext<B>>) -> usize {
    k_linear_matrix(m).rank().expect("field elimination")
}

/// `M⁻¹`, by elimination over `Q` and otherwise through the `k`-linear map,
/// whose inverse sends `e_c·1` to the column `c` of `M⁻¹`.
pub fn invert<B: BaseField>(m: &QuatMatrix<Ext<B>>) -> Result<QuatMatrix<Ext<B>>, MatrixError> {
    match m.inverse() {
        Err(MatrixError::ZeroDivisor) => {}
        other => return other,
    }
    let alg = m.get(0, 0).alg().clone();
    let n = m.rows();
    let lin = k_linear_matrix(m).inverse()?;
    Ok(Matrix::from_fn(n, n, |r, c| {
        let coords: Vec<B> = (0..4).map(|i| lin.get(4 * r + i, 4 * c).clone()).collect();
        quat_from_k_coords(&alg, &coords)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Algebra, ExtKind, Rational};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn hamilton() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, r(-1), r(-1)).unwrap()
    }

    fn quat(alg: &Desc<Rational>, c: [i64; 4]) -> QuatK<Rational> {
        quat_from_k_coords(alg, &c.map(r))
    }

    fn i_form(alg: &Desc<Rational>) -> GramForm<Rational> {
        GramForm::new(Matrix::from_rows(vec![vec![Quat::ell(alg)]]))
    }

    fn hyperbolic(alg: &Desc<Rational>) -> GramForm<Rational> {
        let (z, o) = (Quat::zero(alg), Quat::one(alg));
        GramForm::new(Matrix::from_rows(vec![vec![z.clone(), o], vec![z.clone(), z]]))
    }

    #[test]
    fn polar_gram_examples() {
        let alg = hamilton();
        let i = Quat::<Ext<Rational>>::ell(&alg);
        assert_eq!(i_form(&alg).polar_gram().get(0, 0), &(i.clone() + i));
        let h = hyperbolic(&alg);
        let (z, o) = (Quat::zero(&alg), Quat::one(&alg));
        assert_eq!(h.polar_gram(), &Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![-o, z]]));
    }

    #[test]
    fn q_value_examples() {
        let alg = hamilton();
        let (o, i) = (Quat::one(&alg), Quat::ell(&alg));
        assert!(!i_form(&alg).q_value(&[o.clone()]).is_zero());
        assert!(hyperbolic(&alg).q_value(&[o.clone(), o.clone()]).is_zero());
        assert!(!hyperbolic(&alg).q_value(&[o.clone(), i]).is_zero());
        assert!(hyperbolic(&alg).q_value(&[Quat::zero(&alg), Quat::zero(&alg)]).is_zero());
    }

    #[test]
    fn nonsingularity_examples() {
        let alg = hamilton();
        assert!(i_form(&alg).is_nonsingular());
        assert!(hyperbolic(&alg).is_nonsingular());
        let zero = GramForm::new(Matrix::filled(2, 2, Quat::<Ext<Rational>>::zero(&alg)));
        assert!(!zero.is_nonsingular());
    }

    #[test]
    fn class_equality_examples() {
        let alg = hamilton();
        let i = Quat::ell(&alg);
        let a = GramForm::new(Matrix::from_rows(vec![vec![i.clone()]]));
        let b = GramForm::new(Matrix::from_rows(vec![vec![i.clone() + Quat::one(&alg)]]));
        let c = GramForm::new(Matrix::from_rows(vec![vec![Quat::j(&alg)]]));
        assert!(a.class_equal(&b));
        assert!(!a.class_equal(&c));
    }

    fn arb_coords(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, len)
    }

    fn build(alg: &Desc<Rational>, n: usize, c: &[i64]) -> QuatMatrix<Ext<Rational>> {
        Matrix::from_fn(n, n, |r, col| {
            let k = 4 * (r * n + col);
            quat(alg, [c[k], c[k + 1], c[k + 2], c[k + 3]])
        })
    }

    fn vec_of(alg: &Desc<Rational>, c: &[i64]) -> Vec<QuatK<Rational>> {
        c.chunks(4).map(|q| quat(alg, [q[0], q[1], q[2], q[3]])).collect()
    }

    proptest! {
        #[test]
        fn polarization_and_scaling(s in arb_coords(16), t in arb_coords(16), v in arb_coords(8), w in arb_coords(8), x in arb_coords(4)) {
            let alg = Algebra::new(ExtKind::Sqrt, r(2), r(-3)).unwrap();
            let form = GramForm::new(build(&alg, 2, &s));
            let v = vec_of(&alg, &v);
            let w = vec_of(&alg, &w);
            let x = quat(&alg, [x[0], x[1], x[2], x[3]]);
            let sum: Vec<_> = v.iter().zip(&w).map(|(a, b)| a.clone() + b.clone()).collect();
            let lhs = form.q_value(&sum).0 - form.q_value(&v).0 - form.q_value(&w).0;
            prop_assert_eq!(QModK(lhs), QModK(form.h_s(&v, &w)));
            let vx: Vec<_> = v.iter().map(|a| a.clone() * x.clone()).collect();
            prop_assert_eq!(form.q_value(&vx), QModK(x.bar() * form.q_value(&v).0 * x.clone()));
            // class invariance under even hermitian perturbation
            let other = form.perturb(&build(&alg, 2, &t));
            prop_assert!(form.class_equal(&other));
            prop_assert!(other.class_equal(&form));
            prop_assert_eq!(other.polar_gram(), form.polar_gram());
            prop_assert_eq!(other.q_value(&v), form.q_value(&v));
            prop_assert!(form.h_s(&v, &v).trd().is_zero());
            prop_assert_eq!(dagger(form.polar_gram()), form.polar_gram().neg());
        }

        #[test]
        fn inverse_agrees_with_k_rank(c in arb_coords(36)) {
            let alg = hamilton();
            let mut c = c;
            // force some singular samples by repeating a row
            if c[0] > 1 {
                for k in 0..12 {
                    c[12 + k] = c[k];
                }
            }
            let m = build(&alg, 3, &c);
            let full = k_linear_rank(&m) == 12;
            match m.inverse() {
                Ok(inv) => {
                    prop_assert!(full);
                    prop_assert_eq!(m.mul(&inv), Matrix::identity(3, m.get(0, 0)));
                }
                Err(e) => {
                    prop_assert_eq!(e, MatrixError::Singular);
                    prop_assert!(!full);
                }
            }
        }
    }
}
