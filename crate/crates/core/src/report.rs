//! The subcommands behind the CLI, as report values with text and JSON forms.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::descent::descend;
use crate::error::{DescentError, PairError, ParseError};
use crate::field::{BaseField, Ext, ExtKind, RatFn};
use crate::forms::k_linear_rank;
use crate::linalg::Matrix;
use crate::morita::morita_gram;
use crate::oracles::{search_isotropic_f, search_isotropic_q, SearchBudget, SearchOutcome};
use crate::pairs::{matrix_k_basis, pair_to_form, QuadraticPair};
use crate::parse::{emit_instance, parse_instance, parse_morita_block, InstanceFile};
use crate::quaternion::{division_certificate, Certificate, DivisionReason, Quat, QuatK};

/// Height searched for a norm witness `N(y) = b`.
pub const CERTIFICATE_BOUND: u64 = 3;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("certificate: {0}")]
    Certificate(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Parse(_) | CommandError::Usage(_) => 2,
            CommandError::Precondition(_) => 3,
            CommandError::Certificate(_) => 4,
            CommandError::Internal(_) => 5,
        }
    }
}

impl From<DescentError> for CommandError {
    fn from(e: DescentError) -> Self {
        match e {
            DescentError::NotIsotropic | DescentError::ZeroVector | DescentError::PreconditionDegree { .. } | DescentError::Dimension(_) => {
                CommandError::Precondition(e.to_string())
            }
            DescentError::NoCertificate(_) => CommandError::Certificate(e.to_string()),
            DescentError::ClaimViolation(_) | DescentError::InternalInvariant(_) => CommandError::Internal(e.to_string()),
        }
    }
}

impl From<PairError> for CommandError {
    fn from(e: PairError) -> Self {
        match e {
            PairError::ZeroVector => CommandError::Precondition(e.to_string()),
            _ => CommandError::Internal(e.to_string()),
        }
    }
}

pub(crate) fn plural(n: impl Into<u64>, noun: &str) -> String {
    let n = n.into();
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

/// Flag values after merging the command line over `[options]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub height: u32,
    pub filtration: usize,
    pub support: Option<usize>,
    pub samples: usize,
    pub assume_division: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 0, height: 1, filtration: 1, support: None, samples: 50, assume_division: false }
    }
}

pub fn certificate<B: BaseField>(inst: &InstanceFile<B>, settings: &Settings) -> Certificate<B> {
    let found = division_certificate(&inst.alg, CERTIFICATE_BOUND);
    match found {
        Certificate::Unknown { .. } if settings.assume_division || inst.options.assume_division => {
            Certificate::Division { reason: DivisionReason::Assumed }
        }
        other => other,
    }
}

fn base_name<B: BaseField>() -> String {
    match B::CHARACTERISTIC {
        0 => "Q".into(),
        p => format!("F{p}(s)"),
    }
}

fn kind_name(k: ExtKind) -> &'static str {
    match k {
        ExtKind::Sqrt => "sqrt",
        ExtKind::ArtinSchreier => "artin-schreier",
    }
}

/// The representative of `x + k` with no `k`-component.
fn class_rep<B: BaseField>(x: &QuatK<B>) -> QuatK<B> {
    let alg = x.alg();
    Quat::new(Ext::new(alg, B::zero(), x.x0.c1().clone()), x.x1.clone())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn matrix_strings<T: ToString + Clone>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

fn list(xs: &[String]) -> String {
    format!("[{}]", xs.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairAxioms {
    /// `None` when `H` is singular and there is no pair.
    pub available: bool,
    pub dimension: Option<bool>,
    pub sym_dimension: Option<usize>,
    pub semitrace: Option<bool>,
    pub semitrace_checked: usize,
    pub recovery: Option<bool>,
}

impl PairAxioms {
    pub fn ok(&self) -> bool {
        self.available && self.dimension == Some(true) && self.semitrace == Some(true) && self.recovery == Some(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InfoReport {
    pub characteristic: u64,
    pub base: String,
    pub kind: String,
    pub d: String,
    pub b: String,
    pub n: usize,
    pub gram: Vec<Vec<String>>,
    pub certificate: String,
    pub division: bool,
    pub nonsingular: bool,
    pub morita_nonsingular: bool,
    pub polar_k_rank: usize,
    pub pair_axioms: PairAxioms,
    /// `s(e_i, e_i) + k`, written without a `k`-component.
    pub diagonal_classes: Vec<String>,
}

pub fn cmd_info<B: BaseField>(inst: &InstanceFile<B>, settings: &Settings) -> Result<InfoReport, CommandError> {
    let form = &inst.form;
    let alg = &inst.alg;
    let n = form.n();
    let cert = certificate(inst, settings);
    let pair_axioms = match QuadraticPair::new(form) {
        Err(PairError::SingularH) => PairAxioms {
            available: false,
            dimension: None,
            sym_dimension: None,
            semitrace: None,
            semitrace_checked: 0,
            recovery: None,
        },
        Err(e) => return Err(e.into()),
        Ok(pair) => {
            let basis = matrix_k_basis(alg, n);
            let semitrace = basis.iter().all(|x| pair.check_axiom_semitrace(x));
            let recovered = pair_to_form(pair.h(), |m| pair.semitrace_unchecked(m))?;
            PairAxioms {
                available: true,
                dimension: Some(pair.check_axiom_dimension()),
                sym_dimension: Some(pair.sym_basis().len()),
                semitrace: Some(semitrace),
                semitrace_checked: basis.len(),
                recovery: Some(recovered.class_equal(form)),
            }
        }
    };
    let diagonal_classes = (0..n).map(|i| class_rep(form.gram().get(i, i)).to_string()).collect();
    Ok(InfoReport {
        characteristic: B::CHARACTERISTIC,
        base: base_name::<B>(),
        kind: kind_name(alg.kind()).into(),
        d: alg.d().to_string(),
        b: alg.b().to_string(),
        n,
        gram: matrix_strings(form.gram()),
        certificate: cert.to_string(),
        division: cert.is_division(),
        nonsingular: form.is_nonsingular(),
        morita_nonsingular: morita_gram(form).is_nonsingular(),
        polar_k_rank: k_linear_rank(form.polar_gram()),
        pair_axioms,
        diagonal_classes,
    })
}

impl InfoReport {
    pub fn summary(&self) -> String {
        let pairs = if !self.pair_axioms.available {
            "no quadratic pair (H singular)"
        } else if self.pair_axioms.ok() {
            "pair axioms OK"
        } else {
            "pair axioms FAILED"
        };
        let ns = if self.nonsingular { "nonsingular" } else { "singular" };
        format!("{ns}, {}, {pairs}", self.certificate)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.summary());
        let _ = writeln!(out, "characteristic: {}", self.characteristic);
        let _ = writeln!(out, "base field: {}", self.base);
        let _ = writeln!(out, "K: {} with d = {}", self.kind, self.d);
        let _ = writeln!(out, "b: {}", self.b);
        let _ = writeln!(out, "n: {}", self.n);
        let rows: Vec<String> = self.gram.iter().map(|r| list(r)).collect();
        let _ = writeln!(out, "S: {}", list(&rows));
        let _ = writeln!(out, "certificate: {}", self.certificate);
        let _ = writeln!(out, "nonsingular: {}", yes_no(self.nonsingular));
        let _ = writeln!(out, "morita nonsingular: {}", yes_no(self.morita_nonsingular));
        let _ = writeln!(out, "polar k-rank: {} of {}", self.polar_k_rank, 4 * self.n);
        let p = &self.pair_axioms;
        if p.available {
            let _ = writeln!(
                out,
                "pair axiom (i): {} (dim Sym = {}, expected {})",
                ok(p.dimension),
                p.sym_dimension.unwrap_or(0),
                self.n * (2 * self.n + 1)
            );
            let _ = writeln!(out, "pair axiom (ii): {} on {} basis elements", ok(p.semitrace), p.semitrace_checked);
            let _ = writeln!(out, "form recovery from pair: {}", ok(p.recovery));
        } else {
            let _ = writeln!(out, "pair axioms: not applicable (H singular)");
        }
        let _ = writeln!(out, "diagonal classes: {}", list(&self.diagonal_classes));
        out
    }
}

fn ok(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "OK",
        Some(false) => "FAILED",
        None => "n/a",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    /// The instance the values belong to, in instance-file syntax.
    #[serde(skip)]
    instance: String,
    pub n: usize,
    pub u: String,
    /// `q_F` on the basis `e_1⊗ε, e_1⊗ℓε, e_2⊗ε, …`.
    pub q: Vec<String>,
    /// Polar Gram of `b_F` in the same basis.
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
}

pub fn cmd_morita<B: BaseField>(inst: &InstanceFile<B>) -> MoritaReport {
    let gram = morita_gram(&inst.form);
    let u = if B::CHARACTERISTIC == 2 { "1" } else { "l" };
    MoritaReport {
        instance: emit_instance(&inst.alg, &inst.form, inst.vector.as_deref()),
        n: 2 * inst.form.n(),
        u: u.into(),
        q: strings(&gram.q_values),
        g: matrix_strings(&gram.polar),
    }
}

impl MoritaReport {
    /// A complete instance file with a trailing `[morita]` block.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = self.g.iter().map(|r| list(r)).collect();
        format!(
            "{}[morita]\nu = {}\nq = {}\nG = {}\n",
            self.instance,
            self.u,
            list(&self.q),
            list(&rows)
        )
    }
}

/// Parses a `morita` text report and emits it again.
pub fn reemit_morita<B: BaseField>(text: &str) -> Result<String, CommandError> {
    let inst = parse_instance::<B>(text)?;
    let (q, g) = parse_morita_block(&inst.alg, text)?;
    let fresh = cmd_morita(&inst);
    if strings(&q) != fresh.q || g.iter().map(|r| strings(r)).collect::<Vec<_>>() != fresh.g {
        return Err(CommandError::Internal("the [morita] block does not match the instance".into()));
    }
    Ok(fresh.to_text())
}

#[derive(Clone, Debug, Serialize)]
pub struct DescendReport {
    pub certificate: String,
    pub w: Vec<String>,
    pub lambda: String,
    pub initial_level: usize,
    pub iterations: usize,
    pub v: Vec<String>,
    pub s_value: String,
}

pub fn cmd_descend<B: BaseField>(
    inst: &InstanceFile<B>,
    vector: Option<&[RatFn<B>]>,
    settings: &Settings,
) -> Result<DescendReport, CommandError> {
    let w = vector
        .or(inst.vector.as_deref())
        .ok_or_else(|| CommandError::Usage("descend needs a vector: add a [vector] section or pass --vector <file>".into()))?;
    let cert = certificate(inst, settings);
    let out = descend(&inst.form, w, &cert)?;
    Ok(DescendReport {
        certificate: cert.to_string(),
        w: strings(w),
        lambda: out.lambda.to_string(),
        initial_level: out.initial_level,
        iterations: out.iterations,
        v: strings(&out.v),
        s_value: out.s_value.to_string(),
    })
}

impl DescendReport {
    pub fn to_text(&self) -> String {
        format!(
            "certificate: {}\nw: {}\nlambda: {}\ninitial level: {}\niterations: {}\nv: {}\ns(v, v): {}\n",
            self.certificate,
            list(&self.w),
            self.lambda,
            self.initial_level,
            self.iterations,
            list(&self.v),
            self.s_value
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub found: bool,
    pub witness: Option<Vec<String>>,
    pub steps: u64,
    pub truncated: bool,
}

impl SearchResult {
    fn from_outcome<T: ToString>(o: SearchOutcome<Vec<T>>) -> Self {
        match o {
            SearchOutcome::Found { witness, steps } => {
                SearchResult { found: true, witness: Some(strings(&witness)), steps, truncated: false }
            }
            SearchOutcome::Exhausted { steps, truncated, .. } => SearchResult { found: false, witness: None, steps, truncated },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub budget: SearchBudget,
    /// Over `Q`: `v ≠ 0` with `s(v, v) ∈ k`.
    pub q: SearchResult,
    /// Over `F`: a Morita vector with `q_F = 0`.
    pub f: SearchResult,
}

pub fn budget(settings: &Settings) -> SearchBudget {
    let b = SearchBudget::new(settings.height, settings.filtration);
    match settings.support {
        Some(s) => b.with_support(s),
        None => b,
    }
}

pub fn cmd_search<B: BaseField>(inst: &InstanceFile<B>, settings: &Settings) -> SearchReport {
    let budget = budget(settings);
    SearchReport {
        budget,
        q: SearchResult::from_outcome(search_isotropic_q(&inst.form, budget)),
        f: SearchResult::from_outcome(search_isotropic_f(&inst.form, budget)),
    }
}

impl SearchReport {
    pub fn to_text(&self) -> String {
        let b = &self.budget;
        let support = b.support.map_or("none".to_string(), |s| s.to_string());
        let mut out = format!("budget: height {}, filtration {}, support {}\n", b.height, b.filtration, support);
        for (name, r) in [("Q", &self.q), ("F", &self.f)] {
            match &r.witness {
                Some(w) => {
                    let _ = writeln!(out, "over {name}: found {} after {}", list(w), plural(r.steps, "step"));
                }
                None => {
                    let cut = if r.truncated { " (step limit)" } else { "" };
                    let _ = writeln!(out, "over {name}: exhausted after {}{cut}", plural(r.steps, "step"));
                }
            }
        }
        out
    }
}

pub fn render<T: Serialize>(report: &T, text: impl FnOnce(&T) -> String, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_instance;

    const HEADER: &str = "[field]\nchar = 0\n[K]\nkind = sqrt\nd = -1\n[quaternion]\nb = -1\n";

    fn inst(form: &str) -> InstanceFile<Rational> {
        parse_instance(&format!("{HEADER}{form}")).unwrap()
    }

    #[test]
    fn info_on_pure_diagonal() {
        let r = cmd_info(&inst("[form]\nn = 1\nS = [[l]]\n"), &Settings::default()).unwrap();
        assert_eq!(r.summary(), "nonsingular, Division{definite}, pair axioms OK");
    }

    #[test]
    fn info_reports_split_witness() {
        let text = "[field]\nchar = 0\n[K]\nkind = sqrt\nd = -1\n[quaternion]\nb = 1\n[form]\nn = 1\nS = [[l]]\n";
        let r = cmd_info(&parse_instance::<Rational>(text).unwrap(), &Settings::default()).unwrap();
        assert!(r.certificate.starts_with("Split{"), "{}", r.certificate);
    }

    #[test]
    fn morita_values_and_roundtrip() {
        let r = cmd_morita(&inst("[form]\nn = 1\nS = [[l]]\n"));
        assert_eq!(r.q[0], "-2");
        let text = r.to_text();
        assert_eq!(reemit_morita::<Rational>(&text).unwrap(), text);
        let h = cmd_morita(&inst("[form]\nn = 2\nS = [[0, 1], [0, 0]]\n"));
        assert!(h.q.iter().any(|q| q == "0"));
    }

    #[test]
    fn descend_hyperbolic() {
        let r = cmd_descend(&inst("[form]\nn = 2\nS = [[0, 1], [0, 0]]\n[vector]\nw = [t, t]\n"), None, &Settings::default()).unwrap();
        assert_eq!(r.v, vec!["1", "1"]);
        assert_eq!(r.s_value, "1");
        let e = cmd_descend(&inst("[form]\nn = 1\nS = [[l]]\n[vector]\nw = [t]\n"), None, &Settings::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = cmd_descend(&inst("[form]\nn = 1\nS = [[l]]\n"), None, &Settings::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn search_hyperbolic() {
        let r = cmd_search(&inst("[form]\nn = 2\nS = [[0, 1], [0, 0]]\n"), &Settings::default());
        assert_eq!(r.q.witness.as_deref(), Some(&["1".to_string(), "0".to_string()][..]));
        assert!(r.f.found);
    }
}
