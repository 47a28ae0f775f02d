//! The random edge-deletion process on a colored complete k-partite
//! hypergraph, with exact rainbow matching counts at every step.
//!
//! Starting from `H_0`, edges are removed one at a time in a given order.
//! `phi_i` is the number of rainbow perfect matchings of `H_i`, and
//! `xi_i = 1 - phi_i / phi_(i-1)`. The weight `w_i(e, c)` of a vertex tuple `e`
//! and color `c` is the number of rainbow perfect matchings of `H_i` minus the
//! vertices of `e` that avoid color `c`; for an edge `e`, `w_i(e, color(e))`
//! counts the rainbow perfect matchings of `H_i` through `e`.

mod stats;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::fmt::Write as _;

use crate::count::{count_rainbow_pm_brute, Budget};
use crate::error::{Error, Result};
use crate::model::{ColoredEdge, ColoredHypergraph, Mode, PartiteVertex};

pub use stats::{
    chernoff_bounds, dyadic_interval_cover, entropy, gamma_cumulative, lower_median, rho, sigma,
    ChernoffBounds, DyadicCover, GammaSums, GAMMA_SUM_CONSTANT,
};

/// Thresholds for the step events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventParams {
    /// Allowed max/average weight ratio.
    pub l: f64,
    /// Relative degree tolerance.
    pub eps1: f64,
    /// Abundance constant the other two are usually derived from.
    pub k_const: f64,
}

impl EventParams {
    pub fn new(l: f64, eps1: f64, k_const: f64) -> Result<Self> {
        if !(l > 1.0 && eps1 > 0.0 && eps1 < 1.0 && k_const > 0.0) {
            return Err(Error::OutOfRange(format!(
                "need L > 1, 0 < eps1 < 1, K > 0 (got L={l}, eps1={eps1}, K={k_const})"
            )));
        }
        Ok(Self { l, eps1, k_const })
    }

    /// `L = K^(1/2)`, `eps1 = K^(-1/3)`.
    pub fn from_k(k_const: f64) -> Result<Self> {
        Self::new(k_const.sqrt(), k_const.powf(-1.0 / 3.0), k_const)
    }
}

impl Default for EventParams {
    fn default() -> Self {
        Self::from_k(64.0).expect("valid defaults")
    }
}

fn tuple_vertices(tuple: &[u32]) -> Vec<PartiteVertex> {
    tuple
        .iter()
        .enumerate()
        .map(|(part, &index)| PartiteVertex::new(part, index as usize))
        .collect()
}

/// `w(e, c)` for a vertex tuple `e` (one index per part) and color `c`.
pub fn weight(h: &ColoredHypergraph, tuple: &[u32], color: u32, budget: Budget) -> Result<u64> {
    h.require_mode(Mode::Partite)?;
    if tuple.len() != h.k() || tuple.iter().any(|&v| v as usize >= h.n()) {
        return Err(Error::OutOfRange(format!(
            "tuple {tuple:?} is not a vertex tuple"
        )));
    }
    let rest = h.restrict(&[], &tuple_vertices(tuple), &[color])?;
    Ok(count_rainbow_pm_brute(&rest, budget)?.0)
}

/// `w(e) = w(e, color(e))` for every edge of `h`, in edge order.
pub fn edge_weights(h: &ColoredHypergraph, budget: Budget) -> Result<Vec<u64>> {
    h.edges()
        .par_iter()
        .map(|e| weight(h, &e.verts, e.color, budget))
        .collect()
}

fn encode_tuple(tuple: &[u32], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * n + v as usize)
}

fn decode_tuple(mut t: usize, n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; k];
    for slot in v.iter_mut().rev() {
        *slot = (t % n) as u32;
        t /= n;
    }
    v
}

/// `w(e, c)` for every vertex tuple `e` and every color `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    n: usize,
    k: usize,
    kappa: usize,
    table: Vec<u64>,
    psi0: u64,
}

impl WeightProfile {
    pub fn compute(h: &ColoredHypergraph, budget: Budget) -> Result<Self> {
        h.require_mode(Mode::Partite)?;
        let (n, k, kappa) = (h.n(), h.k(), h.kappa());
        let tuples = n.pow(k as u32);
        let table = (0..tuples * kappa)
            .into_par_iter()
            .map(|idx| {
                weight(
                    h,
                    &decode_tuple(idx / kappa, n, k),
                    (idx % kappa) as u32,
                    budget,
                )
            })
            .collect::<Result<Vec<u64>>>()?;
        let psi0 = table.iter().copied().max().unwrap_or(0);
        Ok(Self {
            n,
            k,
            kappa,
            table,
            psi0,
        })
    }

    pub fn get(&self, tuple: &[u32], color: u32) -> u64 {
        self.table[encode_tuple(tuple, self.n) * self.kappa + color as usize]
    }

    /// `w(e, c)` over all colors `c`.
    pub fn over_colors(&self, tuple: &[u32]) -> &[u64] {
        let base = encode_tuple(tuple, self.n) * self.kappa;
        &self.table[base..base + self.kappa]
    }

    /// `w((v, x), c)` for every completion `x` of a tuple missing part `part`.
    /// `partial` holds the other `k - 1` indices in part order.
    pub fn over_completions(&self, part: usize, partial: &[u32], color: u32) -> Vec<u64> {
        let mut tuple: Vec<u32> = Vec::with_capacity(self.k);
        (0..self.n as u32)
            .map(|x| {
                tuple.clear();
                tuple.extend_from_slice(&partial[..part]);
                tuple.push(x);
                tuple.extend_from_slice(&partial[part..]);
                self.get(&tuple, color)
            })
            .collect()
    }

    /// `psi_V(v, c)`: the largest weight over completions.
    pub fn psi_v(&self, part: usize, partial: &[u32], color: u32) -> u64 {
        self.over_completions(part, partial, color)
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    /// `psi_C(v)`: the largest weight over colors.
    pub fn psi_c(&self, tuple: &[u32]) -> u64 {
        self.over_colors(tuple).iter().copied().max().unwrap_or(0)
    }

    /// `psi_0`: the largest weight in the table.
    pub fn psi0(&self) -> u64 {
        self.psi0
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.n.pow(self.k as u32)).map(|t| decode_tuple(t, self.n, self.k))
    }
}

fn ratio_ok(max: u64, median: u64, phi: &BigUint, big_n: u128, k: usize) -> bool {
    // max <= max{ phi / (2^k N), 2 med }
    if max <= 2 * median {
        return true;
    }
    BigUint::from(max) * BigUint::from(big_n) * (BigUint::from(1u32) << k) <= *phi
}

/// The median event: for every `(k-1)`-tuple and color the largest weight over
/// completions is at most `max{phi / (2^k N), 2 med}`, and likewise for every
/// `k`-tuple over colors.
pub fn event_c_from_profile(profile: &WeightProfile, phi: &BigUint) -> bool {
    let (n, k) = (profile.n, profile.k);
    let big_n = (n as u128).pow(k as u32);
    let med = |v: &[u64]| lower_median(v).expect("nonempty");
    for part in 0..k {
        for p in 0..n.pow(k as u32 - 1) {
            let partial = decode_tuple(p, n, k - 1);
            for c in 0..profile.kappa as u32 {
                let vals = profile.over_completions(part, &partial, c);
                let max = *vals.iter().max().expect("n >= 1");
                if !ratio_ok(max, med(&vals), phi, big_n, k) {
                    return false;
                }
            }
        }
    }
    profile.tuples().all(|t| {
        let vals = profile.over_colors(&t);
        let max = *vals.iter().max().expect("kappa >= 1");
        ratio_ok(max, med(vals), phi, big_n, k)
    })
}

pub fn event_c(h: &ColoredHypergraph, phi: &BigUint, budget: Budget) -> Result<bool> {
    Ok(event_c_from_profile(
        &WeightProfile::compute(h, budget)?,
        phi,
    ))
}

/// `max w / avg w <= L` over a weight multiset. Empty or all-zero multisets
/// count as ratio 1.
pub fn event_b_from_weights(weights: &[u64], params: &EventParams) -> bool {
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    if sum == 0 {
        return true;
    }
    let max = *weights.iter().max().expect("nonempty") as f64;
    max * weights.len() as f64 <= params.l * sum as f64
}

pub fn event_b(h: &ColoredHypergraph, params: &EventParams, budget: Budget) -> Result<bool> {
    Ok(event_b_from_weights(&edge_weights(h, budget)?, params))
}

/// Every vertex degree and every color degree within relative `eps1` of
/// `n^(k-1) p`.
pub fn event_r(h: &ColoredHypergraph, p: f64, params: &EventParams) -> Result<bool> {
    h.require_mode(Mode::Partite)?;
    let target = (h.n() as f64).powi(h.k() as i32 - 1) * p;
    let tol = params.eps1 * target;
    let close = |d: u64| (d as f64 - target).abs() <= tol;
    let profile = h.degree_profile();
    let active = h.active_mask();
    let vertices_ok = profile
        .vertex
        .iter()
        .zip(&active)
        .all(|(&d, &a)| !a || close(d));
    let colors_ok = profile
        .color
        .iter()
        .enumerate()
        .all(|(c, &d)| h.removed_colors().contains(&(c as u32)) || close(d));
    Ok(vertices_ok && colors_ok)
}

/// Summary of `{w_i(e) : e in E_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightStats {
    pub max: u64,
    pub sum: BigUint,
    pub avg: f64,
    pub median: u64,
}

impl WeightStats {
    fn of(weights: &[u64]) -> Option<Self> {
        if weights.is_empty() {
            return None;
        }
        let sum: BigUint = weights.iter().map(|&w| BigUint::from(w)).sum();
        Some(Self {
            max: *weights.iter().max().expect("nonempty"),
            avg: sum.to_f64().unwrap_or(f64::INFINITY) / weights.len() as f64,
            median: lower_median(weights).expect("nonempty"),
            sum,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub i: usize,
    /// Edge deleted at this step (`None` at step 0).
    pub removed: Option<ColoredEdge>,
    pub phi: BigUint,
    /// `1 - phi_i / phi_(i-1)`; undefined once `phi_(i-1) = 0`.
    pub xi: Option<Ratio<u64>>,
    /// `n / (N - i + 1)` for `i >= 1`.
    pub gamma: Option<f64>,
    /// `(N - i) / N`
    pub p: f64,
    pub weights: Option<WeightStats>,
    pub b: bool,
    pub r: bool,
    pub c: bool,
}

impl TraceStep {
    /// `sum_e w_i(e) = n phi_i`.
    pub fn weight_identity_holds(&self, n: usize) -> bool {
        let sum = self
            .weights
            .as_ref()
            .map(|w| w.sum.clone())
            .unwrap_or_default();
        sum == &self.phi * BigUint::from(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeletionTrace {
    pub n: usize,
    pub k: usize,
    pub big_n: u64,
    pub steps: Vec<TraceStep>,
    /// Step at which the counting budget ran out, if it did.
    pub truncated_at: Option<usize>,
}

pub const TRACE_CSV_HEADER: &str = "i,phi,xi,gamma,p_i,w_max,w_avg,w_med,B,R,C";

fn flag(b: bool) -> u8 {
    b as u8
}

impl DeletionTrace {
    /// `phi_0 * prod (1 - xi_i)` over the defined prefix, exactly.
    pub fn reconstruct_phi(&self, t: usize) -> Option<BigRational> {
        let mut value = BigRational::from_integer(BigInt::from(self.steps.first()?.phi.clone()));
        for step in self.steps.iter().take(t + 1).skip(1) {
            match step.xi {
                Some(xi) => {
                    let one_minus = BigRational::new(
                        BigInt::from(*xi.denom() - *xi.numer()),
                        BigInt::from(*xi.denom()),
                    );
                    value *= one_minus;
                }
                // phi already hit zero and stays there
                None => return Some(BigRational::zero()),
            }
        }
        Some(value)
    }

    pub fn csv_row(step: &TraceStep) -> String {
        let mut row = String::new();
        let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_default();
        let (w_max, w_avg, w_med) = match &step.weights {
            Some(w) => (
                w.max.to_string(),
                format!("{}", w.avg),
                w.median.to_string(),
            ),
            None => Default::default(),
        };
        write!(
            row,
            "{},{},{},{},{},{},{},{},{},{},{}",
            step.i,
            step.phi,
            opt(step.xi.map(|x| *x.numer() as f64 / *x.denom() as f64)),
            opt(step.gamma),
            step.p,
            w_max,
            w_avg,
            w_med,
            flag(step.b),
            flag(step.r),
            flag(step.c),
        )
        .expect("write to string");
        row
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_CSV_HEADER);
        out.push('\n');
        for step in &self.steps {
            out.push_str(&Self::csv_row(step));
            out.push('\n');
        }
        out
    }
}

fn trace_step(
    h: &ColoredHypergraph,
    i: usize,
    removed: Option<ColoredEdge>,
    prev_phi: Option<&BigUint>,
    big_n: u64,
    params: &EventParams,
    budget: Budget,
) -> Result<TraceStep> {
    let phi = BigUint::from(count_rainbow_pm_brute(h, budget)?.0);
    let profile = WeightProfile::compute(h, budget)?;
    let weights: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| profile.get(&e.verts, e.color))
        .collect();
    let p = (big_n - i as u64) as f64 / big_n as f64;
    let xi = match prev_phi {
        Some(prev) if !prev.is_zero() => {
            let prev = prev.to_u64().expect("counts fit u64");
            let cur = phi.to_u64().expect("counts fit u64");
            Some(Ratio::new(prev - cur, prev))
        }
        _ => None,
    };
    Ok(TraceStep {
        i,
        removed,
        xi,
        gamma: (i > 0).then(|| h.n() as f64 / (big_n - i as u64 + 1) as f64),
        p,
        b: event_b_from_weights(&weights, params),
        r: event_r(h, p, params)?,
        c: event_c_from_profile(&profile, &phi),
        weights: WeightStats::of(&weights),
        phi,
    })
}

/// Delete `ordering[0..t_max]` from the complete colored `h0` one edge at a
/// time, counting exactly at every step.
///
/// If the budget runs out the trace so far is returned with
/// [`DeletionTrace::truncated_at`] set.
pub fn run_deletion_process(
    h0: &ColoredHypergraph,
    ordering: &[usize],
    t_max: usize,
    params: &EventParams,
    budget: Budget,
) -> Result<DeletionTrace> {
    h0.require_mode(Mode::Partite)?;
    let big_n = h0.max_edges() as u64;
    if h0.edge_count() as u64 != big_n || h0.is_restricted() {
        return Err(Error::Precondition(
            "the deletion process starts from a complete colored instance".into(),
        ));
    }
    if t_max > ordering.len() {
        return Err(Error::OutOfRange(format!(
            "t_max={t_max} exceeds ordering length {}",
            ordering.len()
        )));
    }
    let mut seen = vec![false; h0.edge_count()];
    for &e in ordering {
        if e >= seen.len() || std::mem::replace(&mut seen[e], true) {
            return Err(Error::Precondition(format!(
                "ordering is not a permutation (edge {e})"
            )));
        }
    }

    let mut trace = DeletionTrace {
        n: h0.n(),
        k: h0.k(),
        big_n,
        steps: Vec::with_capacity(t_max + 1),
        truncated_at: None,
    };
    let mut deleted = vec![false; h0.edge_count()];
    for i in 0..=t_max {
        let removed = (i > 0).then(|| {
            let e = ordering[i - 1];
            deleted[e] = true;
            h0.edges()[e].clone()
        });
        let gone: Vec<usize> = (0..deleted.len()).filter(|&e| deleted[e]).collect();
        let h = h0.restrict(&gone, &[], &[])?;
        let prev = trace.steps.last().map(|s| &s.phi);
        match trace_step(&h, i, removed, prev, big_n, params, budget) {
            Ok(step) => trace.steps.push(step),
            Err(Error::BudgetExceeded { .. }) => {
                trace.truncated_at = Some(i);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(trace)
}
