//! Randomized invariant checks over one algebra, for `isoquat selftest`.
//!
//! Every check draws from its own generator seeded by `(seed, check index)`,
//! so a report depends only on the algebra, the seed and the sample count.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::descent::{degcomp_value, degree_of_value, descend, FilteredVector};
use crate::field::{BaseField, Desc, Laurent, RatFn, TowerScalar};
use crate::forms::GramForm;
use crate::morita::{act, alt_form, b_f, morita_gram, q_f, transfer_isotropic};
use crate::pairs::{pair_to_form, QuadraticPair};
use crate::quaternion::{Certificate, Quat, QuatK};
use crate::random::{gen_random_instance, rng_from_seed, Sampler, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub samples: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub samples: usize,
    pub algebra: String,
    pub certificate: String,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("selftest seed={} samples={}\nalgebra: {}\ncertificate: {}\n", self.seed, self.samples, self.algebra, self.certificate);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = write!(out, "{tag} {} ({})", c.name, crate::report::plural(c.samples as u64, "sample"));
            if let Some(note) = &c.note {
                let _ = write!(out, ": {note}");
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "{} checks, {failed} failed", self.checks.len());
        out
    }
}

/// `Err` carries the counterexample.
type Sample = Result<(), String>;

struct Ctx<B: BaseField> {
    alg: Desc<B>,
    sampler: Sampler<B>,
    seed: u64,
}

impl<B: BaseField> Ctx<B> {
    fn run(&self, index: u64, name: &'static str, samples: usize, mut f: impl FnMut(&mut ChaCha8Rng, u64) -> Sample) -> CheckResult {
        let mut rng = rng_from_seed(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index));
        for i in 0..samples {
            let sub_seed = self.seed.wrapping_add(1000 * index + i as u64);
            if let Err(dump) = f(&mut rng, sub_seed) {
                return CheckResult { name, status: Status::Fail, samples: i + 1, note: Some(dump) };
            }
        }
        CheckResult { name, status: Status::Pass, samples, note: None }
    }

    fn form(&self, rng: &mut ChaCha8Rng, seed: u64) -> GramForm<B> {
        let n = rng.gen_range(1..=2);
        let shape = if rng.gen_bool(0.2) { Shape::Degenerate } else { Shape::Generic };
        gen_random_instance(&self.alg, seed, n, 2, shape).form
    }

    fn morita_vector(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Laurent<B>> {
        (0..n).map(|_| self.sampler.laurent(rng, 1)).collect()
    }
}

fn check(ok: bool, dump: impl FnOnce() -> String) -> Sample {
    if ok {
        Ok(())
    } else {
        Err(dump())
    }
}

fn show<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Runs every check on the algebra `alg`; `cert` gates the descent check.
pub fn run_selftest<B: BaseField>(alg: &Desc<B>, cert: &Certificate<B>, samples: usize, seed: u64) -> SelftestReport {
    let ctx = Ctx { alg: alg.clone(), sampler: Sampler::new(alg, 2), seed };
    let heavy = samples.div_ceil(10);
    let mut checks = Vec::new();

    checks.push(ctx.run(0, "class invariance of q and q_F", samples, |rng, s| {
        let form = ctx.form(rng, s);
        let n = form.n();
        let other = form.perturb(&ctx.sampler.matrix(rng, n));
        let v = ctx.sampler.vector(rng, n);
        let w = ctx.morita_vector(rng, n);
        check(form.q_value(&v) == other.q_value(&v) && q_f(&form, &w) == q_f(&other, &w), || {
            format!("S = {}, S' = {}, v = {}, w = {}", form, other, show(&v), show(&w))
        })
    }));

    checks.push(ctx.run(1, "polar identity of b_F", samples, |rng, s| {
        let form = ctx.form(rng, s);
        let (w1, w2) = (ctx.morita_vector(rng, form.n()), ctx.morita_vector(rng, form.n()));
        let sum: Vec<Laurent<B>> = w1.iter().zip(&w2).map(|(a, b)| a.clone() + b.clone()).collect();
        let lhs = b_f(&form, &w1, &w2);
        let rhs = q_f(&form, &sum) - q_f(&form, &w1) - q_f(&form, &w2);
        check(lhs == rhs, || format!("S = {}, w1 = {}, w2 = {}", form, show(&w1), show(&w2)))
    }));

    checks.push(ctx.run(2, "a(xi, x xi) = 0 iff x in k or xi = 0", samples, |rng, _| {
        let xi = if rng.gen_bool(0.1) { Laurent::zero(alg) } else { ctx.sampler.laurent(rng, 1) };
        let x: QuatK<B> = if rng.gen_bool(0.25) { Quat::from_base(alg, ctx.sampler.base(rng)) } else { ctx.sampler.quat(rng) };
        let value = alt_form(&xi, &act(&x.lift(), &xi));
        let expected = x.is_in_k() || xi.is_zero();
        check(value.is_zero() == expected && value.is_iota_fixed(), || format!("xi = {xi}, x = {x}, a = {value}"))
    }));

    checks.push(ctx.run(3, "nonsingularity transfer", samples, |rng, s| {
        let form = ctx.form(rng, s);
        let over_f = morita_gram(&form).is_nonsingular();
        check(form.is_nonsingular() == over_f, || format!("S = {}, over F: {over_f}", form))
    }));

    checks.push(ctx.run(4, "filtered and Morita q_F agree", samples, |rng, s| {
        let form = ctx.form(rng, s);
        let level = rng.gen_range(0..=3);
        let coeffs = (0..level).map(|_| ctx.sampler.vector(rng, form.n())).collect();
        let w = FilteredVector::new(alg, form.n(), coeffs);
        let m = w.to_morita();
        let back = FilteredVector::from_morita(alg, &m);
        check(back == w && w.q_value(&form) == q_f(&form, &m) && degree_of_value(&form, &w).consistent(), || {
            format!("S = {}, w = {}", form, show(&m))
        })
    }));

    checks.push(ctx.run(5, "degree bound of a(t^d eps, x t^e eps)", samples, |rng, _| {
        let (d, e) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let x = ctx.sampler.quat(rng);
        let a = degcomp_value(&x, d, e);
        let bound = (d + e + 1) as u64;
        let within = a.degree().is_none_or(|g| g <= bound);
        let strict_ok = a.degree().is_some_and(|g| g == bound) || x.x1.is_zero();
        check(within && strict_ok && a.is_iota_fixed(), || format!("x = {x}, d = {d}, e = {e}, a = {a}"))
    }));

    checks.push(ctx.run(6, "quadratic pair axioms and recovery", heavy, |rng, s| {
        let form = ctx.form(rng, s);
        let Ok(pair) = QuadraticPair::new(&form) else {
            return Ok(());
        };
        let x = ctx.sampler.matrix(rng, form.n());
        let ok = pair.check_axiom_semitrace(&x)
            && pair_to_form(pair.h(), |m| pair.semitrace_unchecked(m)).is_ok_and(|r| r.class_equal(&form));
        check(ok, || format!("S = {}, x = {}", form, x))
    }));

    checks.push(ctx.run(7, "isotropy transfer on planted forms", heavy, |rng, s| {
        let inst = gen_random_instance(alg, s, 2, 2, Shape::Planted);
        let v = inst.witness.clone().expect("planted");
        let w: Vec<Laurent<B>> = v.iter().map(|x| act(&x.lift(), &Laurent::constant(crate::field::Ext::one(alg)))).collect();
        let forward = q_f(&inst.form, &w).is_zero();
        let iso = inst.isotropic_morita(&ctx.sampler, rng, 1).expect("planted");
        let iso_kt: Vec<RatFn<B>> = iso.iter().map(|f| RatFn::from_laurent_value(f.clone())).collect();
        let back = transfer_isotropic(&inst.form, &iso_kt).is_ok();
        check(forward && back, || format!("S = {}, v = {}, w = {}", inst.form, show(&v), show(&iso)))
    }));

    if cert.is_division() {
        checks.push(ctx.run(8, "descent of planted isotropic vectors", heavy.min(10), |rng, s| {
            let inst = gen_random_instance(alg, s, 2, 2, Shape::Planted);
            let w = inst.isotropic_morita(&ctx.sampler, rng, 2).expect("planted");
            let kt: Vec<RatFn<B>> = w.iter().map(|f| RatFn::from_laurent_value(f.clone())).collect();
            match descend(&inst.form, &kt, cert) {
                Ok(out) if out.s_value.is_in_k() && out.iterations < out.initial_level.max(1) => Ok(()),
                Ok(out) => Err(format!("S = {}, w = {}, v = {}", inst.form, show(&w), show(&out.v))),
                Err(e) => Err(format!("S = {}, w = {}: {e}", inst.form, show(&w))),
            }
        }));
    } else {
        checks.push(CheckResult {
            name: "descent of planted isotropic vectors",
            status: Status::Skip,
            samples: 0,
            note: Some(format!("needs a division certificate, have {cert}")),
        });
    }

    SelftestReport {
        seed,
        samples,
        algebra: format!("K = k[l]/({}), d = {}, b = {}", min_poly(alg), alg.d(), alg.b()),
        certificate: cert.to_string(),
        checks,
    }
}

fn min_poly<B: BaseField>(alg: &Desc<B>) -> &'static str {
    match alg.kind() {
        crate::field::ExtKind::Sqrt => "l^2 - d",
        crate::field::ExtKind::ArtinSchreier => "l^2 + l + d",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{division_certificate, DivisionReason};
    use crate::random::{char2_split, hamilton};

    #[test]
    fn hamilton_passes_and_is_deterministic() {
        let alg = hamilton();
        let cert = Certificate::Division { reason: DivisionReason::Definite };
        let a = run_selftest(&alg, &cert, 20, 5);
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a.to_text(), run_selftest(&alg, &cert, 20, 5).to_text());
    }

    #[test]
    fn char2_split_passes() {
        let alg = char2_split();
        let cert = division_certificate(&alg, 2);
        let r = run_selftest(&alg, &cert, 20, 1);
        assert!(r.all_passed(), "{}", r.to_text());
        assert_eq!(r.checks.last().unwrap().status, Status::Skip);
    }
}
