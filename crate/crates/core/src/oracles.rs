//! Bounded brute-force searches for isotropic vectors, over `Q` and over `F`.
//!
//! Candidates are coordinate vectors over `k` drawn from the integral
//! alphabet `B::integral_elements(height)`. Enumeration is by layer (the
//! largest alphabet size needed by any coordinate), then by support (by
//! size, then lexicographically), then by values in odometer order. The
//! first nonzero coordinate is normalized up to prime-field units, so each
//! line through the origin is visited once.

use serde::Serialize;

use crate::descent::FilteredVector;
use crate::field::{BaseField, Desc, Laurent};
use crate::forms::{quat_from_k_coords, quat_k_basis, GramForm};
use crate::morita::{b_f, q_f};
use crate::quaternion::{Quat, QuatK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Alphabet size per coordinate.
    pub height: u32,
    /// Largest filtration level searched over `F`; unused over `Q`.
    pub filtration: usize,
    /// Largest number of nonzero `k`-coordinates, `None` for no bound.
    pub support: Option<usize>,
    /// Candidate evaluations before giving up.
    pub max_steps: Option<u64>,
}

impl SearchBudget {
    pub fn new(height: u32, filtration: usize) -> Self {
        SearchBudget { height, filtration, support: None, max_steps: None }
    }

    pub fn with_support(mut self, support: usize) -> Self {
        self.support = Some(support);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome<W> {
    Found { witness: W, steps: u64 },
    Exhausted { steps: u64, budget: SearchBudget, truncated: bool },
}

impl<W> SearchOutcome<W> {
    pub fn witness(&self) -> Option<&W> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> u64 {
        match self {
            SearchOutcome::Found { steps, .. } | SearchOutcome::Exhausted { steps, .. } => *steps,
        }
    }
}

/// A quadratic map `k^m → k^c` stored as sparse coefficient lists
/// `comp_r(x) = Σ_{a≤b} c_{rab}·x_a·x_b`.
struct QuadraticSystem<B> {
    m: usize,
    components: Vec<Vec<(usize, usize, B)>>,
}

impl<B: BaseField> QuadraticSystem<B> {
    /// `value(a, b)` returns the coordinates of `Q(e_a)` for `a = b` and of
    /// the polar value `Q(e_a + e_b) − Q(e_a) − Q(e_b)` otherwise.
    fn build(m: usize, mut value: impl FnMut(usize, usize) -> Vec<B>) -> Self {
        let mut components: Vec<Vec<(usize, usize, B)>> = Vec::new();
        for a in 0..m {
            for b in a..m {
                for (r, c) in value(a, b).into_iter().enumerate() {
                    if components.len() <= r {
                        components.resize_with(r + 1, Vec::new);
                    }
                    if !c.is_zero_elem() {
                        components[r].push((a, b, c));
                    }
                }
            }
        }
        components.retain(|c| !c.is_empty());
        // components that vanish most rarely first: dense ones reject fastest
        components.sort_by_key(|c| std::cmp::Reverse(c.len()));
        QuadraticSystem { m, components }
    }

    fn vanishes(&self, support: &[usize], x: &[B]) -> bool {
        let mut dense: Vec<Option<&B>> = vec![None; self.m];
        for (&i, v) in support.iter().zip(x) {
            dense[i] = Some(v);
        }
        self.components.iter().all(|comp| {
            let mut acc = B::zero();
            for (a, b, c) in comp {
                if let (Some(xa), Some(xb)) = (dense[*a], dense[*b]) {
                    acc = acc + c.clone() * xa.clone() * xb.clone();
                }
            }
            acc.is_zero_elem()
        })
    }
}

/// Layered enumeration of nonzero vectors of `k^m` over the integral alphabet.
struct Enumerator<B> {
    /// Nonzero alphabet elements with their layer (the least size containing them).
    letters: Vec<(B, u32)>,
    /// Letters allowed as the first nonzero coordinate.
    leading: Vec<bool>,
}

impl<B: BaseField> Enumerator<B> {
    fn new(height: u32) -> Self {
        let mut letters: Vec<(B, u32)> = Vec::new();
        for size in 1..=height {
            for x in B::integral_elements(size) {
                if !x.is_zero_elem() && !letters.iter().any(|(y, _)| *y == x) {
                    letters.push((x, size));
                }
            }
        }
        let units: Vec<B> = if B::CHARACTERISTIC == 0 {
            vec![B::from_i64(-1)]
        } else {
            (2..B::CHARACTERISTIC as i64).map(B::from_i64).collect()
        };
        let leading = letters
            .iter()
            .enumerate()
            .map(|(i, (x, _))| {
                units.iter().all(|u| {
                    let y = u.clone() * x.clone();
                    letters.iter().position(|(z, _)| *z == y).is_none_or(|j| j > i)
                })
            })
            .collect();
        Enumerator { letters, leading }
    }

    /// Calls `visit(support, values)` in enumeration order until it returns `true`.
    fn run(&self, m: usize, max_support: usize, height: u32, mut visit: impl FnMut(&[usize], &[B]) -> bool) -> bool {
        for layer in 1..=height {
            for size in 1..=max_support.min(m) {
                let mut support: Vec<usize> = (0..size).collect();
                loop {
                    if self.run_values(&support, layer, &mut visit) {
                        return true;
                    }
                    if !next_combination(&mut support, m) {
                        break;
                    }
                }
            }
        }
        false
    }

    fn run_values(&self, support: &[usize], layer: u32, visit: &mut impl FnMut(&[usize], &[B]) -> bool) -> bool {
        let allowed: Vec<usize> = (0..self.letters.len()).filter(|&i| self.letters[i].1 <= layer).collect();
        let size = support.len();
        let mut idx = vec![0usize; size];
        let mut values: Vec<B> = Vec::with_capacity(size);
        loop {
            let top = idx.iter().any(|&i| self.letters[allowed[i]].1 == layer);
            if top && self.leading[allowed[idx[0]]] {
                values.clear();
                values.extend(idx.iter().map(|&i| self.letters[allowed[i]].0.clone()));
                if visit(support, &values) {
                    return true;
                }
            }
            // odometer, last coordinate fastest
            let mut pos = size;
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < allowed.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn unit_vector<B: BaseField>(alg: &Desc<B>, n: usize, idx: usize) -> Vec<QuatK<B>> {
    let mut v = vec![Quat::zero(alg); n];
    v[idx / 4] = quat_k_basis(alg)[idx % 4].clone();
    v
}

fn vector_from_coords<B: BaseField>(alg: &Desc<B>, n: usize, c: &[B]) -> Vec<QuatK<B>> {
    (0..n).map(|r| quat_from_k_coords(alg, &c[4 * r..4 * r + 4])).collect()
}

/// The `ℓ`, `j` and `ℓj` coordinates of `s(v, v)` as a quadratic map in the
/// `k`-coordinates of `v`; `v` is isotropic iff all three vanish.
fn q_system<B: BaseField>(form: &GramForm<B>) -> QuadraticSystem<B> {
    let alg = form.alg();
    let n = form.n();
    let pure = |x: QuatK<B>| vec![x.x0.c1().clone(), x.x1.c0().clone(), x.x1.c1().clone()];
    QuadraticSystem::build(4 * n, |a, b| {
        let (ea, eb) = (unit_vector(alg, n, a), unit_vector(alg, n, b));
        if a == b {
            pure(form.s(&ea, &ea))
        } else {
            pure(form.s(&ea, &eb) + form.s(&eb, &ea))
        }
    })
}

struct Searcher<B: BaseField> {
    budget: SearchBudget,
    m: usize,
    system: QuadraticSystem<B>,
    enumerator: Enumerator<B>,
}

impl<B: BaseField> Searcher<B> {
    fn new(budget: SearchBudget, m: usize, system: QuadraticSystem<B>) -> Self {
        Searcher { budget, m, system, enumerator: Enumerator::new(budget.height) }
    }

    /// Visits every zero of the system in order; `keep` returns `false` to stop.
    fn zeros(&self, mut keep: impl FnMut(Vec<B>, u64) -> bool) -> (u64, bool) {
        let mut steps = 0u64;
        let mut truncated = false;
        let support = self.budget.support.unwrap_or(self.m);
        self.enumerator.run(self.m, support, self.budget.height, |s, x| {
            if self.budget.max_steps.is_some_and(|cap| steps >= cap) {
                truncated = true;
                return true;
            }
            steps += 1;
            if self.system.vanishes(s, x) {
                let dense = {
                    let mut d = vec![B::zero(); self.m];
                    for (&i, v) in s.iter().zip(x) {
                        d[i] = v.clone();
                    }
                    d
                };
                return !keep(dense, steps);
            }
            false
        });
        (steps, truncated)
    }

    fn first(&self) -> (Option<(Vec<B>, u64)>, u64, bool) {
        let mut found = None;
        let (steps, truncated) = self.zeros(|c, s| {
            found = Some((c, s));
            false
        });
        (found, steps, truncated)
    }
}

fn outcome<W>(found: Option<(W, u64)>, steps: u64, truncated: bool, budget: SearchBudget) -> SearchOutcome<W> {
    match found {
        Some((witness, steps)) => SearchOutcome::Found { witness, steps },
        None => SearchOutcome::Exhausted { steps, budget, truncated },
    }
}

/// First `v ∈ Qⁿ` in enumeration order with `s(v, v) ∈ k`.
pub fn search_isotropic_q<B: BaseField>(form: &GramForm<B>, budget: SearchBudget) -> SearchOutcome<Vec<QuatK<B>>> {
    let (alg, n) = (form.alg(), form.n());
    let searcher = Searcher::new(budget, 4 * n, q_system(form));
    let (found, steps, truncated) = searcher.first();
    outcome(found.map(|(c, s)| (vector_from_coords(alg, n, &c), s)), steps, truncated, budget)
}

/// All witnesses over `Q` within budget, up to `limit`.
pub fn all_isotropic_q<B: BaseField>(form: &GramForm<B>, budget: SearchBudget, limit: usize) -> Vec<Vec<QuatK<B>>> {
    let (alg, n) = (form.alg(), form.n());
    let searcher = Searcher::new(budget, 4 * n, q_system(form));
    let mut out = Vec::new();
    searcher.zeros(|c, _| {
        out.push(vector_from_coords(alg, n, &c));
        out.len() < limit
    });
    out
}

/// Index `(i·n + r)·4 + c`: level `i`, coordinate `r`, basis element `c` of `Q`.
fn filtered_from_coords<B: BaseField>(alg: &Desc<B>, n: usize, levels: usize, c: &[B]) -> FilteredVector<B> {
    let coeffs = (0..levels).map(|i| vector_from_coords(alg, n, &c[4 * n * i..4 * n * (i + 1)])).collect();
    FilteredVector::new(alg, n, coeffs)
}

/// The coefficients of `q_F` on `V ⊗ 𝓘_{≤D}` as a quadratic map over `k`,
/// one component per `(exponent, K-coordinate)`.
fn f_system<B: BaseField>(form: &GramForm<B>, levels: usize) -> QuadraticSystem<B> {
    let (alg, n) = (form.alg(), form.n());
    let m = 4 * n * levels;
    let basis: Vec<Vec<Laurent<B>>> = (0..m)
        .map(|a| {
            let mut c = vec![B::zero(); m];
            c[a] = B::one();
            filtered_from_coords(alg, n, levels, &c).to_morita()
        })
        .collect();
    let span = 2 * levels as i64 + 1;
    QuadraticSystem::build(m, |a, b| {
        let v = if a == b { q_f(form, &basis[a]) } else { b_f(form, &basis[a], &basis[b]) };
        (-span..=span).flat_map(|z| {
            let c = v.coeff(z);
            [c.c0().clone(), c.c1().clone()]
        })
        .collect()
    })
}

/// First `w ∈ V ⊗ 𝓘_{≤D}` in enumeration order with `q_F(w) = 0`, as
/// Morita coordinates.
pub fn search_isotropic_f<B: BaseField>(form: &GramForm<B>, budget: SearchBudget) -> SearchOutcome<Vec<Laurent<B>>> {
    let (alg, n) = (form.alg(), form.n());
    let levels = budget.filtration;
    if levels == 0 || budget.height == 0 {
        return SearchOutcome::Exhausted { steps: 0, budget, truncated: false };
    }
    let searcher = Searcher::new(budget, 4 * n * levels, f_system(form, levels));
    let (found, steps, truncated) = searcher.first();
    outcome(
        found.map(|(c, s)| (filtered_from_coords(alg, n, levels, &c).to_morita(), s)),
        steps,
        truncated,
        budget,
    )
}

pub fn all_isotropic_f<B: BaseField>(form: &GramForm<B>, budget: SearchBudget, limit: usize) -> Vec<Vec<Laurent<B>>> {
    let (alg, n) = (form.alg(), form.n());
    let levels = budget.filtration;
    if levels == 0 || budget.height == 0 {
        return Vec::new();
    }
    let searcher = Searcher::new(budget, 4 * n * levels, f_system(form, levels));
    let mut out = Vec::new();
    searcher.zeros(|c, _| {
        out.push(filtered_from_coords(alg, n, levels, &c).to_morita());
        out.len() < limit
    });
    out
}
