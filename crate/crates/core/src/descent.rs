//! Descent of isotropic vectors from `q_{a*s}` over `F` to `[s]` over `Q`.
//!
//! Vectors of `V ⊗_Q 𝓘` are handled in two shapes: Morita coordinates
//! `f ∈ K[t,t⁻¹]ⁿ` and filtered coefficients `(v_0, …, v_d)` with
//! `Σ v_i ⊗ tⁱε`. The conversion uses `x·tⁱε = (x0·tⁱ + x1·b^{i+1}·t^{−i−1})·ε`.

use crate::error::DescentError;
use crate::field::{BaseField, Desc, Ext, Laurent, RatFn, TowerScalar};
use crate::forms::{sesq, GramForm};
use crate::morita::{act, alt_form, q_f};
use crate::quaternion::{Certificate, Quat, QuatK, QuatMatrix};

/// `Σ x_i·tⁱε = fε` for `x_i ∈ Q`.
pub fn scalar_from_filtered<B: BaseField>(alg: &Desc<B>, xs: &[QuatK<B>]) -> Laurent<B> {
    let b = alg.b();
    let mut terms = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let i = i as i64;
        terms.push((i, x.x0.clone()));
        terms.push((-i - 1, x.x1.scale(&b.pow_i64(i + 1))));
    }
    Laurent::from_terms(alg, terms)
}

/// Inverse of [`scalar_from_filtered`]: `x_i = y_i + b^{−i−1}·y_{−i−1}·j`.
pub fn scalar_to_filtered<B: BaseField>(f: &Laurent<B>) -> Vec<QuatK<B>> {
    let alg = f.alg();
    let level = scalar_level(f);
    let b = alg.b();
    (0..level as i64)
        .map(|i| Quat::new(f.coeff(i), f.coeff(-i - 1).scale(&b.pow_i64(-i - 1))))
        .collect()
}

/// The least `d` with `fε ∈ 𝓘_{≤d}`.
pub fn scalar_level<B: BaseField>(f: &Laurent<B>) -> usize {
    f.terms().map(|(z, _)| if z >= 0 { z + 1 } else { -z } as usize).max().unwrap_or(0)
}

/// `Σ_{i=0}^{d} v_i ⊗ tⁱε`, trailing zero coefficients trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredVector<B: BaseField> {
    alg: Desc<B>,
    n: usize,
    coeffs: Vec<Vec<QuatK<B>>>,
}

impl<B: BaseField> FilteredVector<B> {
    pub fn new(alg: &Desc<B>, n: usize, mut coeffs: Vec<Vec<QuatK<B>>>) -> Self {
        assert!(coeffs.iter().all(|v| v.len() == n), "coefficient vectors must have length n");
        while coeffs.last().is_some_and(|v| v.iter().all(|x| x.is_zero())) {
            coeffs.pop();
        }
        FilteredVector { alg: alg.clone(), n, coeffs }
    }

    pub fn coeffs(&self) -> &[Vec<QuatK<B>>] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `0` for the zero vector, otherwise one more than the index of the last nonzero `v_i`.
    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn top(&self) -> Option<&Vec<QuatK<B>>> {
        self.coeffs.last()
    }

    pub fn to_morita(&self) -> Vec<Laurent<B>> {
        (0..self.n)
            .map(|r| {
                let xs: Vec<QuatK<B>> = self.coeffs.iter().map(|v| v[r].clone()).collect();
                scalar_from_filtered(&self.alg, &xs)
            })
            .collect()
    }

    pub fn from_morita(alg: &Desc<B>, f: &[Laurent<B>]) -> Self {
        let per_coord: Vec<Vec<QuatK<B>>> = f.iter().map(scalar_to_filtered).collect();
        let level = per_coord.iter().map(Vec::len).max().unwrap_or(0);
        let coeffs = (0..level)
            .map(|i| per_coord.iter().map(|xs| xs.get(i).cloned().unwrap_or_else(|| Quat::zero(alg))).collect())
            .collect();
        FilteredVector::new(alg, f.len(), coeffs)
    }

    /// `q_F` expanded over the filtration:
    /// `Σ_i a(tⁱε, s(v_i,v_i)·tⁱε) + Σ_{i<j} a(tⁱε, h_s(v_i,v_j)·tʲε)`.
    pub fn q_value(&self, form: &GramForm<B>) -> Laurent<B> {
        let alg = &self.alg;
        let mut acc = Laurent::zero(alg);
        for (i, vi) in self.coeffs.iter().enumerate() {
            let ti = Laurent::t_pow(alg, i as i64);
            acc = acc + alt_form(&ti, &act(&form.s(vi, vi).lift(), &ti));
            for (j, vj) in self.coeffs.iter().enumerate().skip(i + 1) {
                let tj = Laurent::t_pow(alg, j as i64);
                acc = acc + alt_form(&ti, &act(&form.h_s(vi, vj).lift(), &tj));
            }
        }
        acc
    }
}

/// Degree of `q_F(w)` against the bound `2d+1` at level `d+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: Option<u64>,
    pub bound: Option<u64>,
    pub strict: bool,
    /// `s(v_d, v_d) ∈ K`, the conclusion the strict case must satisfy.
    pub leading_in_k: bool,
}

impl DegreeReport {
    pub fn consistent(&self) -> bool {
        let within = match (self.degree, self.bound) {
            (None, _) => true,
            (Some(deg), Some(bound)) => deg <= bound,
            (Some(_), None) => false,
        };
        within && (!self.strict || self.leading_in_k)
    }
}

pub fn degree_of_value<B: BaseField>(form: &GramForm<B>, w: &FilteredVector<B>) -> DegreeReport {
    let degree = q_f(form, &w.to_morita()).degree();
    let Some(top) = w.top() else {
        return DegreeReport { degree, bound: None, strict: false, leading_in_k: true };
    };
    let bound = 2 * (w.level() as u64 - 1) + 1;
    DegreeReport {
        degree,
        bound: Some(bound),
        strict: degree.is_none_or(|d| d < bound),
        leading_in_k: form.s(top, top).x1.is_zero(),
    }
}

fn tensor<B: BaseField>(v: &[QuatK<B>], f: &Laurent<B>) -> Vec<Laurent<B>> {
    v.iter().map(|x| act(&x.lift(), f)).collect()
}

/// Given `v ∈ V` and `ξ = fε` of level `d+1 ≥ 2` with `deg q(v⊗ξ) ≤ 2d−1`,
/// returns `η` (as its coefficient) of level at most `d` with `q(v⊗η) = q(v⊗ξ)`.
pub fn key_reduce<B: BaseField>(form: &GramForm<B>, v: &[QuatK<B>], f: &Laurent<B>) -> Result<Laurent<B>, DescentError> {
    let alg = form.alg();
    let xs = scalar_to_filtered(f);
    if xs.len() < 2 {
        return Err(DescentError::Dimension(format!("ξ has level {}, need at least 2", xs.len())));
    }
    let d = xs.len() - 1;
    let q = q_f(form, &tensor(v, f));
    let bound = 2 * d as u64 - 1;
    if let Some(deg) = q.degree() {
        if deg > bound {
            return Err(DescentError::PreconditionDegree { actual: deg, bound });
        }
    } else {
        return Ok(Laurent::zero(alg));
    }
    // v⊗ξ = v·x_d ⊗ x_d⁻¹ξ, and x_d⁻¹ξ has leading coefficient 1.
    let xd = xs[d].clone();
    let xd_inv = xd.inverse().ok_or_else(|| DescentError::InternalInvariant(format!("leading coefficient {} is not invertible", xd)))?;
    let vn: Vec<QuatK<B>> = v.iter().map(|c| c.clone() * xd.clone()).collect();
    let z = act(&xd_inv.lift(), f);
    let svv = form.s(&vn, &vn);
    if !svv.x1.is_zero() || svv.x0.is_base() {
        return Err(DescentError::InternalInvariant(format!("s(v, v) = {} is not in K \\ k", svv)));
    }
    let xn = scalar_to_filtered(&z);
    if !xn[d - 1].x1.is_zero() {
        return Err(DescentError::ClaimViolation(format!("x_(d-1) = {} is not in K", xn[d - 1])));
    }
    let eta = act(&xd.lift(), &z.iota());
    if scalar_level(&eta) > d {
        return Err(DescentError::InternalInvariant(format!("η has level {} > {}", scalar_level(&eta), d)));
    }
    if q_f(form, &tensor(v, &eta)) != q {
        return Err(DescentError::InternalInvariant("q(v⊗η) differs from q(v⊗ξ)".into()));
    }
    Ok(eta)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step<B: BaseField> {
    Reduced(FilteredVector<B>),
    Found(Vec<QuatK<B>>),
}

fn check_isotropic<B: BaseField>(form: &GramForm<B>, w: &FilteredVector<B>) -> Result<(), DescentError> {
    if w.is_zero() {
        return Err(DescentError::ZeroVector);
    }
    if !q_f(form, &w.to_morita()).is_zero() {
        return Err(DescentError::NotIsotropic);
    }
    Ok(())
}

/// One pass of the level reduction on an isotropic `w`.
pub fn reduce_step<B: BaseField>(form: &GramForm<B>, w: &FilteredVector<B>) -> Result<Step<B>, DescentError> {
    if w.n() != form.n() {
        return Err(DescentError::Dimension(format!("expected {} coordinates, got {}", form.n(), w.n())));
    }
    check_isotropic(form, w)?;
    let alg = form.alg();
    let d = w.level() - 1;
    let vd = w.top().expect("nonzero").clone();
    if form.s(&vd, &vd).is_in_k() {
        return Ok(Step::Found(vd));
    }
    if d == 0 {
        return Err(DescentError::InternalInvariant("isotropic v⊗ε with s(v, v) ∉ k".into()));
    }
    let h = form.h_s(&vd, &vd);
    let h_inv = h.inverse().ok_or_else(|| DescentError::InternalInvariant(format!("h_s(v_d, v_d) = {} is not invertible", h)))?;
    let mut xs = Vec::with_capacity(d + 1);
    let mut rest = Vec::with_capacity(d);
    for vi in &w.coeffs()[..d] {
        let x = h_inv.clone() * form.h_s(&vd, vi);
        rest.push(vi.iter().zip(&vd).map(|(a, b)| a.clone() - b.clone() * x.clone()).collect::<Vec<_>>());
        xs.push(x);
    }
    xs.push(Quat::one(alg));
    let xi = scalar_from_filtered(alg, &xs);
    let eta = key_reduce(form, &vd, &xi)?;
    let lower = FilteredVector::new(alg, w.n(), rest).to_morita();
    let top = tensor(&vd, &eta);
    let out = FilteredVector::from_morita(alg, &top.into_iter().zip(lower).map(|(a, b)| a + b).collect::<Vec<_>>());
    if out.is_zero() {
        return Err(DescentError::InternalInvariant("reduced vector vanished".into()));
    }
    if out.level() > d {
        return Err(DescentError::InternalInvariant(format!("level did not drop: {} > {}", out.level(), d)));
    }
    if !q_f(form, &out.to_morita()).is_zero() {
        return Err(DescentError::InternalInvariant("reduced vector is not isotropic".into()));
    }
    Ok(Step::Reduced(out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Descent<B: BaseField> {
    pub v: Vec<QuatK<B>>,
    pub s_value: QuatK<B>,
    /// Number of `reduce_step` calls.
    pub iterations: usize,
    pub initial_level: usize,
    /// The common `λ ∈ 𝓕` used to clear denominators.
    pub lambda: Laurent<B>,
}

/// From `w ∈ (K(t))ⁿ` with `q_F(w) = 0` to `v ∈ Qⁿ` with `s(v, v) ∈ k`.
pub fn descend<B: BaseField>(form: &GramForm<B>, w: &[RatFn<B>], cert: &Certificate<B>) -> Result<Descent<B>, DescentError> {
    if !cert.is_division() {
        return Err(DescentError::NoCertificate(cert.to_string()));
    }
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
    let mut lambda = Laurent::constant(Ext::one(alg));
    for f in w {
        let (_, l) = f.clear_denominators();
        lambda = lambda * l;
    }
    let scaled: Vec<Laurent<B>> = w
        .iter()
        .map(|f| {
            (f.clone() * RatFn::from_laurent_value(lambda.clone()))
                .as_laurent()
                .cloned()
                .ok_or_else(|| DescentError::InternalInvariant(format!("λ·{} is not a Laurent polynomial", f)))
        })
        .collect::<Result<_, _>>()?;
    let mut cur = FilteredVector::from_morita(alg, &scaled);
    let initial_level = cur.level();
    let mut iterations = 0;
    let v = loop {
        if cur.level() == 1 {
            break cur.top().expect("nonzero").clone();
        }
        iterations += 1;
        match reduce_step(form, &cur)? {
            Step::Found(v) => break v,
            Step::Reduced(next) => cur = next,
        }
    };
    let s_value = form.s(&v, &v);
    if !s_value.is_in_k() || v.iter().all(|x| x.is_zero()) {
        return Err(DescentError::InternalInvariant(format!("descended vector has s(v, v) = {}", s_value)));
    }
    if iterations + 1 > initial_level.max(1) {
        return Err(DescentError::InternalInvariant(format!("{} steps from level {}", iterations, initial_level)));
    }
    Ok(Descent { v, s_value, iterations, initial_level, lambda })
}

/// `a(t^dε, x·t^eε)`.
pub fn degcomp_value<B: BaseField>(x: &QuatK<B>, d: i64, e: i64) -> Laurent<B> {
    let alg = x.alg();
    alt_form(&Laurent::t_pow(alg, d), &act(&x.lift(), &Laurent::t_pow(alg, e)))
}

pub fn s_of<B: BaseField>(form: &GramForm<B>, v: &[Quat<RatFn<B>>]) -> Quat<RatFn<B>> {
    let s: QuatMatrix<RatFn<B>> = crate::quaternion::lift_matrix(form.gram());
    sesq(&s, v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Algebra, ExtKind, FunctionScalar, Rational};
    use crate::linalg::Matrix;
    use crate::quaternion::DivisionReason;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn hamilton() -> Desc<Rational> {
        Algebra::new(ExtKind::Sqrt, r(-1), r(-1)).unwrap()
    }

    fn hyperbolic(alg: &Desc<Rational>) -> GramForm<Rational> {
        let (z, o) = (Quat::zero(alg), Quat::one(alg));
        GramForm::new(Matrix::from_rows(vec![vec![z.clone(), o], vec![z.clone(), z]]))
    }

    fn diag(alg: &Desc<Rational>, xs: Vec<QuatK<Rational>>) -> GramForm<Rational> {
        let n = xs.len();
        GramForm::new(Matrix::from_fn(n, n, |r, c| if r == c { xs[r].clone() } else { Quat::zero(alg) }))
    }

    fn definite() -> Certificate<Rational> {
        Certificate::Division { reason: DivisionReason::Definite }
    }

    #[test]
    fn conversion_example() {
        let alg = hamilton();
        let f = Laurent::t_pow(&alg, -1);
        let xs = scalar_to_filtered(&f);
        assert_eq!(xs, vec![-Quat::j(&alg)]);
        assert_eq!(scalar_from_filtered(&alg, &xs), f);
        assert!(scalar_to_filtered(&Laurent::zero(&alg)).is_empty());
    }

    #[test]
    fn levels() {
        let alg = hamilton();
        let (o, z) = (Quat::one(&alg), Quat::zero(&alg));
        assert_eq!(FilteredVector::new(&alg, 1, vec![vec![o.clone()]]).level(), 1);
        assert_eq!(FilteredVector::new(&alg, 1, vec![vec![z.clone()]]).level(), 0);
        assert_eq!(FilteredVector::new(&alg, 1, vec![vec![o.clone()], vec![z], vec![o]]).level(), 3);
    }

    #[test]
    fn degree_report_examples() {
        let alg = hamilton();
        let i_form = diag(&alg, vec![Quat::ell(&alg)]);
        let w = FilteredVector::new(&alg, 1, vec![vec![Quat::zero(&alg)], vec![Quat::one(&alg)]]);
        let rep = degree_of_value(&i_form, &w);
        assert_eq!((rep.degree, rep.bound, rep.strict, rep.leading_in_k), (Some(0), Some(3), true, true));
        let j_form = diag(&alg, vec![Quat::j(&alg)]);
        let w = FilteredVector::new(&alg, 1, vec![vec![Quat::one(&alg)]]);
        let rep = degree_of_value(&j_form, &w);
        assert_eq!((rep.degree, rep.bound, rep.strict, rep.leading_in_k), (Some(1), Some(1), false, false));
        let rep = degree_of_value(&j_form, &FilteredVector::new(&alg, 1, vec![]));
        assert_eq!(rep.degree, None);
    }

    #[test]
    fn key_reduce_example() {
        let alg = hamilton();
        let i_form = diag(&alg, vec![Quat::ell(&alg)]);
        let v = vec![Quat::one(&alg)];
        let eta = key_reduce(&i_form, &v, &Laurent::t(&alg)).unwrap();
        assert_eq!(eta, Laurent::t(&alg).iota());
        assert_eq!(q_f(&i_form, &[eta]), Laurent::constant(Ext::from_base(&alg, r(2))));
        let hyp = hyperbolic(&alg);
        let t = Laurent::t(&alg);
        let zero = key_reduce(&hyp, &[Quat::one(&alg), Quat::zero(&alg)], &t).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn reduce_step_examples() {
        let alg = hamilton();
        let hyp = hyperbolic(&alg);
        let (o, z, i) = (Quat::one(&alg), Quat::zero(&alg), Quat::ell(&alg));
        let w = FilteredVector::new(&alg, 2, vec![vec![z.clone(), z.clone()], vec![o.clone(), o.clone()]]);
        assert_eq!(reduce_step(&hyp, &w), Ok(Step::Found(vec![o.clone(), o.clone()])));
        let bad = FilteredVector::new(&alg, 2, vec![vec![z.clone(), z.clone()], vec![o.clone(), i.clone()]]);
        assert_eq!(reduce_step(&hyp, &bad), Err(DescentError::NotIsotropic));
    }

    #[test]
    fn descend_examples() {
        let alg = hamilton();
        let hyp = hyperbolic(&alg);
        let t = RatFn::t(&alg);
        let out = descend(&hyp, &[t.clone(), t.clone()], &definite()).unwrap();
        assert_eq!(out.v, vec![Quat::one(&alg), Quat::one(&alg)]);
        assert_eq!(out.s_value, Quat::one(&alg));
        assert_eq!(out.iterations, 1);
        let i_form = diag(&alg, vec![Quat::ell(&alg)]);
        assert_eq!(descend(&i_form, &[t.clone()], &definite()).err(), Some(DescentError::NotIsotropic));
        let unknown = Certificate::Unknown { bound: 3 };
        assert!(matches!(descend(&hyp, &[t.clone(), t], &unknown), Err(DescentError::NoCertificate(_))));
    }

    #[test]
    fn descend_recovers_from_denominators() {
        let alg = hamilton();
        let hyp = hyperbolic(&alg);
        let one = Laurent::constant(Ext::one(&alg));
        let h = Laurent::t(&alg) + one.clone();
        let lam = h.clone() * h.iota();
        let w = vec![
            RatFn::from_laurent_value(lam.clone()) * RatFn::new(one.clone(), Laurent::t(&alg) + Laurent::t_pow(&alg, 3)),
            RatFn::zero(&alg),
        ];
        let out = descend(&hyp, &w, &definite()).unwrap();
        assert!(out.s_value.is_in_k());
        assert!(out.iterations < out.initial_level.max(2));
    }

    fn arb_quat() -> impl Strategy<Value = [i64; 4]> {
        prop::array::uniform4(-3i64..=3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn filtered_roundtrip_and_q_agree(cs in prop::collection::vec((arb_quat(), arb_quat()), 0..4), s in prop::collection::vec(arb_quat(), 4)) {
            let alg = hamilton();
            let q = |c: &[i64; 4]| Quat::new(Ext::new(&alg, r(c[0]), r(c[1])), Ext::new(&alg, r(c[2]), r(c[3])));
            let coeffs: Vec<Vec<QuatK<Rational>>> = cs.iter().map(|(a, b)| vec![q(a), q(b)]).collect();
            let w = FilteredVector::new(&alg, 2, coeffs);
            let back = FilteredVector::from_morita(&alg, &w.to_morita());
            prop_assert_eq!(&back, &w);
            let form = GramForm::new(Matrix::from_fn(2, 2, |r, c| q(&s[2 * r + c])));
            prop_assert_eq!(w.q_value(&form), q_f(&form, &w.to_morita()));
            prop_assert!(degree_of_value(&form, &w).consistent());
        }

        #[test]
        fn degcomp_bound(c in arb_quat(), d in 0i64..=3, e in 0i64..=3) {
            let alg = hamilton();
            let x = Quat::new(Ext::new(&alg, r(c[0]), r(c[1])), Ext::new(&alg, r(c[2]), r(c[3])));
            let a = degcomp_value(&x, d, e);
            prop_assert!(a.is_iota_fixed());
            let bound = (d + e + 1) as u64;
            prop_assert!(a.degree().is_none_or(|g| g <= bound));
            if a.degree().is_none_or(|g| g < bound) {
                prop_assert!(x.x1.is_zero());
            }
        }
    }
}
