//! Monte Carlo harness: threshold scans, mean counts, deletion traces and
//! Hamilton pipelines.
//!
//! Trial `j` of a cell draws from stream `j` of a seed derived from the master
//! seed and the cell's `(n, k, kappa)`, so every cell sharing those parameters
//! sees the same streams. Trials run on a dedicated pool of `jobs` threads and
//! are merged by `(cell, trial)`; outputs never depend on scheduling. Timings
//! appear only in JSON reports, never in CSV.

mod plot;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::{
    count_rainbow_pm_brute, expected_rainbow_count, find_rainbow_pm, second_moment_exact, Budget,
};
use crate::error::{Error, Result};
use crate::hamilton::{assemble_even, solve_odd, AssemblyOptions, Stage};
use crate::model::{
    complete_colored, sample_colored_graph, sample_hp_m, sample_hp_p, RandomnessSpec,
    DEFAULT_EDGE_LIMIT,
};
use crate::process::{gamma_cumulative, run_deletion_process, DeletionTrace, EventParams};

pub use plot::{emit_plot, PlotSpec};

/// One parameter point of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
    pub kappa: usize,
    /// Edge count (`HP_{n,m,k}` or `G_{n,m}`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    /// Edge probability (`HP_{n,p,k}`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

impl Cell {
    pub fn new(n: usize, k: usize, kappa: usize) -> Self {
        Self {
            n,
            k,
            kappa,
            m: None,
            p: None,
        }
    }

    pub fn with_m(self, m: u64) -> Self {
        Self { m: Some(m), ..self }
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p: Some(p), ..self }
    }

    fn salt(&self) -> u64 {
        (self.n as u64)
            .wrapping_mul(1_000_003)
            .wrapping_add((self.k as u64).wrapping_mul(10_007))
            .wrapping_add(self.kappa as u64)
    }

    /// Randomness of trial `trial`.
    pub fn randomness(&self, master_seed: u64, trial: usize) -> RandomnessSpec {
        RandomnessSpec::new(master_seed, trial as u64).derive(self.salt())
    }

    fn m_or_p(&self) -> String {
        match (self.m, self.p) {
            (Some(m), _) => m.to_string(),
            (None, Some(p)) => p.to_string(),
            (None, None) => String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Threshold,
    MeanCount,
    Trace,
    Hamilton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub grid: Vec<Cell>,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads.
    pub jobs: usize,
    pub budget: Budget,
    /// Odd-order Hamilton attempts per trial.
    #[serde(default)]
    pub retries: Option<usize>,
    /// Deletion steps per trace (all edges when `None`).
    #[serde(default)]
    pub steps: Option<usize>,
    /// Also count rainbow perfect matchings in threshold scans.
    #[serde(default)]
    pub count: bool,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, grid: Vec<Cell>, trials: usize, master_seed: u64) -> Self {
        Self {
            kind,
            grid,
            trials,
            master_seed,
            jobs: 1,
            budget: Budget::default(),
            retries: None,
            steps: None,
            count: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::OutOfRange("parameter grid is empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::OutOfRange("trials must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::OutOfRange("jobs must be at least 1".into()));
        }
        if self.budget.max_nodes == 0 {
            return Err(Error::OutOfRange("budget must be positive".into()));
        }
        if self.retries == Some(0) {
            return Err(Error::OutOfRange("retries must be at least 1".into()));
        }
        for cell in &self.grid {
            let n = cell.n as u128;
            let max = match self.kind {
                ExperimentKind::Hamilton => n * n.saturating_sub(1) / 2,
                _ => n.saturating_pow(cell.k as u32),
            };
            if let Some(m) = cell.m.filter(|&m| m as u128 > max) {
                return Err(Error::OutOfRange(format!(
                    "m={m} exceeds the {max} possible edges at n={}",
                    cell.n
                )));
            }
            if let Some(p) = cell.p.filter(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::OutOfRange(format!("p={p} is not a probability")));
            }
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::OutOfRange(format!("cannot start {} workers: {e}", self.jobs)))
    }

    /// Run `trial` for every trial of every cell, cell by cell, handing each
    /// finished cell to `sink` in order.
    fn run_cells<T, F, S>(&self, trial: F, mut sink: S) -> Result<Vec<Vec<T>>>
    where
        T: Send,
        F: Fn(usize, &Cell, usize) -> Result<T> + Sync,
        S: FnMut(usize, &[T]) -> Result<()>,
    {
        self.validate()?;
        let pool = self.pool()?;
        let mut out = Vec::with_capacity(self.grid.len());
        for (ci, cell) in self.grid.iter().enumerate() {
            let rows = pool.install(|| {
                (0..self.trials)
                    .into_par_iter()
                    .map(|t| trial(ci, cell, t))
                    .collect::<Result<Vec<T>>>()
            })?;
            sink(ci, &rows)?;
            out.push(rows);
        }
        Ok(out)
    }
}

/// Result class of a single search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    Absent,
    Budget,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Found => "found",
            Outcome::Absent => "absent",
            Outcome::Budget => "budget",
        }
    }
}

/// `sqrt(p (1 - p) / trials)`.
pub fn standard_error(p_hat: f64, trials: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

/// Weighted least-squares nondecreasing fit (pool adjacent violators).
pub fn isotonic_fit(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 {
            let (m2, w2, l2) = blocks[blocks.len() - 1];
            let (m1, w1, l1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            let w = w1 + w2;
            let mean = if w > 0.0 {
                (m1 * w1 + m2 * w2) / w
            } else {
                (m1 + m2) / 2.0
            };
            blocks.push((mean, w, l1 + l2));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, _, l)| std::iter::repeat_n(m, l))
        .collect()
}

// --- threshold scans ---

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub cell: usize,
    pub trial: usize,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: Cell,
    pub trials: usize,
    pub successes: usize,
    pub absent: usize,
    pub budget_exceeded: usize,
    pub p_hat: f64,
    pub se: f64,
}

impl CellSummary {
    fn of(cell: Cell, rows: &[TrialRow]) -> Self {
        let tally = |o| rows.iter().filter(|r| r.outcome == o).count();
        let successes = tally(Outcome::Found);
        let p_hat = successes as f64 / rows.len() as f64;
        Self {
            cell,
            trials: rows.len(),
            successes,
            absent: tally(Outcome::Absent),
            budget_exceeded: tally(Outcome::Budget),
            p_hat,
            se: standard_error(p_hat, rows.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub config: ExperimentConfig,
    pub rows: Vec<TrialRow>,
    pub cells: Vec<CellSummary>,
}

pub const THRESHOLD_CSV_HEADER: &str =
    "n,k,kappa,m,trials,successes,p_hat,se,absent,budget_exceeded";
pub const THRESHOLD_ROWS_CSV_HEADER: &str = "n,k,kappa,m,trial,outcome,count";

impl ThresholdResult {
    pub fn summary_csv_row(s: &CellSummary) -> String {
        let c = &s.cell;
        format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            c.n,
            c.k,
            c.kappa,
            c.m_or_p(),
            s.trials,
            s.successes,
            s.p_hat,
            s.se,
            s.absent,
            s.budget_exceeded
        )
    }

    pub fn trial_csv_row(cell: &Cell, r: &TrialRow) -> String {
        format!(
            "{},{},{},{},{},{},{}\n",
            cell.n,
            cell.k,
            cell.kappa,
            cell.m_or_p(),
            r.trial,
            r.outcome.name(),
            r.count.as_deref().unwrap_or("")
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{THRESHOLD_CSV_HEADER}\n");
        self.cells
            .iter()
            .for_each(|s| out.push_str(&Self::summary_csv_row(s)));
        out
    }

    pub fn rows_csv(&self) -> String {
        let mut out = format!("{THRESHOLD_ROWS_CSV_HEADER}\n");
        for r in &self.rows {
            out.push_str(&Self::trial_csv_row(&self.config.grid[r.cell], r));
        }
        out
    }
}

fn threshold_trial(
    cfg: &ExperimentConfig,
    ci: usize,
    cell: &Cell,
    trial: usize,
) -> Result<TrialRow> {
    let start = Instant::now();
    let mut rng = cell.randomness(cfg.master_seed, trial).rng();
    let h = match (cell.m, cell.p) {
        (Some(m), _) => sample_hp_m(cell.n, cell.k, cell.kappa, m, &mut rng, DEFAULT_EDGE_LIMIT)?,
        (None, Some(p)) => {
            sample_hp_p(cell.n, cell.k, cell.kappa, p, &mut rng, DEFAULT_EDGE_LIMIT)?
        }
        (None, None) => {
            return Err(Error::OutOfRange("threshold cells need m or p".into()));
        }
    };
    let found = if cfg.count {
        count_rainbow_pm_brute(&h, cfg.budget).map(|(c, _)| (c > 0, Some(c.to_string())))
    } else {
        find_rainbow_pm(&h, cfg.budget).map(|m| (m.is_some(), None))
    };
    let (outcome, count) = match found {
        Ok((true, c)) => (Outcome::Found, c),
        Ok((false, c)) => (Outcome::Absent, c),
        Err(Error::BudgetExceeded { .. }) => (Outcome::Budget, None),
        Err(e) => return Err(e),
    };
    Ok(TrialRow {
        cell: ci,
        trial,
        outcome,
        count,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Probability of a rainbow perfect matching in `HP_{n,m,k}` (or
/// `HP_{n,p,k}`) per grid cell. `sink` sees each cell as soon as it is done.
pub fn threshold_scan_with<S>(cfg: &ExperimentConfig, mut sink: S) -> Result<ThresholdResult>
where
    S: FnMut(&CellSummary, &[TrialRow]) -> Result<()>,
{
    let mut cells = Vec::new();
    let per_cell = cfg.run_cells(
        |ci, cell, t| threshold_trial(cfg, ci, cell, t),
        |ci, rows| {
            let s = CellSummary::of(cfg.grid[ci], rows);
            sink(&s, rows)?;
            cells.push(s);
            Ok(())
        },
    )?;
    Ok(ThresholdResult {
        config: cfg.clone(),
        rows: per_cell.into_iter().flatten().collect(),
        cells,
    })
}

pub fn threshold_scan(cfg: &ExperimentConfig) -> Result<ThresholdResult> {
    threshold_scan_with(cfg, |_, _| Ok(()))
}

// --- mean counts ---

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanCountSummary {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub mean: f64,
    pub se_mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    pub se_second_moment: f64,
    pub expected: f64,
    pub expected_second_moment: f64,
    pub budget_exceeded: usize,
}

impl MeanCountSummary {
    pub fn mean_within(&self, z: f64) -> bool {
        (self.mean - self.expected).abs() <= z * self.se_mean + 1e-12 * self.expected.abs()
    }

    pub fn second_moment_within(&self, z: f64) -> bool {
        (self.second_moment - self.expected_second_moment).abs()
            <= z * self.se_second_moment + 1e-12 * self.expected_second_moment.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanCountResult {
    pub config: ExperimentConfig,
    /// Exact counts per cell and trial; `None` when the budget ran out.
    pub counts: Vec<Vec<Option<u64>>>,
    pub cells: Vec<MeanCountSummary>,
}

pub const MEAN_COUNT_CSV_HEADER: &str =
    "n,k,trials,mean,se_mean,expected,second_moment,se_second_moment,expected_second_moment,variance,budget_exceeded";

impl MeanCountResult {
    pub fn summary_csv_row(s: &MeanCountSummary) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            s.n,
            s.k,
            s.trials,
            s.mean,
            s.se_mean,
            s.expected,
            s.second_moment,
            s.se_second_moment,
            s.expected_second_moment,
            s.variance,
            s.budget_exceeded
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{MEAN_COUNT_CSV_HEADER}\n");
        self.cells
            .iter()
            .for_each(|s| out.push_str(&Self::summary_csv_row(s)));
        out
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64, f64) {
    let t = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / t;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    (mean, (var / t).sqrt(), var)
}

fn summarize_counts(cell: &Cell, counts: &[Option<u64>]) -> MeanCountSummary {
    let xs: Vec<f64> = counts.iter().flatten().map(|&c| c as f64).collect();
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (mean, se_mean, variance) = if xs.is_empty() {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        mean_and_se(&xs)
    };
    let (second_moment, se_second_moment, _) = if sq.is_empty() {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        mean_and_se(&sq)
    };
    MeanCountSummary {
        n: cell.n,
        k: cell.k,
        trials: counts.len(),
        mean,
        se_mean,
        variance,
        second_moment,
        se_second_moment,
        expected: expected_rainbow_count(cell.n, cell.k),
        expected_second_moment: second_moment_exact(cell.n, cell.k),
        budget_exceeded: counts.iter().filter(|c| c.is_none()).count(),
    }
}

/// Exact rainbow counts of uniformly colored complete instances (`n` colors)
/// against the closed-form first and second moments.
pub fn mean_count_experiment_with<S>(cfg: &ExperimentConfig, mut sink: S) -> Result<MeanCountResult>
where
    S: FnMut(&MeanCountSummary) -> Result<()>,
{
    let mut cells = Vec::new();
    let counts = cfg.run_cells(
        |_, cell, t| {
            let mut rng = cell.randomness(cfg.master_seed, t).rng();
            let h = complete_colored(cell.n, cell.k, cell.n, &mut rng, DEFAULT_EDGE_LIMIT)?;
            match count_rainbow_pm_brute(&h, cfg.budget) {
                Ok((c, _)) => Ok(Some(c)),
                Err(Error::BudgetExceeded { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        },
        |ci, rows| {
            let s = summarize_counts(&cfg.grid[ci], rows);
            sink(&s)?;
            cells.push(s);
            Ok(())
        },
    )?;
    Ok(MeanCountResult {
        config: cfg.clone(),
        counts,
        cells,
    })
}

pub fn mean_count_experiment(cfg: &ExperimentConfig) -> Result<MeanCountResult> {
    mean_count_experiment_with(cfg, |_| Ok(()))
}

// --- deletion traces ---

/// Per-step comparison of the empirical `xi_i` with `gamma_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepAggregate {
    pub n: usize,
    pub k: usize,
    pub i: usize,
    /// Traces with `phi_(i-1) > 0`, where `xi_i` is defined.
    pub samples: usize,
    pub mean_xi: f64,
    pub se_xi: f64,
    pub gamma: f64,
    pub gamma_sum: f64,
    pub closed_form: f64,
    /// Steps whose row violated `sum_e w(e) = n phi`.
    pub identity_failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub config: ExperimentConfig,
    /// `(cell, trial, trace)` in grid order.
    pub traces: Vec<(usize, usize, DeletionTrace)>,
    pub aggregates: Vec<StepAggregate>,
    /// Number of traces cut short by the budget.
    pub truncated: usize,
}

pub const TRACE_ROWS_CSV_HEADER: &str =
    "n,k,trial,i,phi,xi,gamma,p_i,w_max,w_avg,w_med,B,R,C,identity";
pub const TRACE_AGGREGATE_CSV_HEADER: &str =
    "n,k,i,samples,mean_xi,se_xi,gamma,gamma_sum,closed_form,identity_failures";

impl TraceResult {
    pub fn rows_csv(&self) -> String {
        let mut out = format!("{TRACE_ROWS_CSV_HEADER}\n");
        for (_, trial, trace) in &self.traces {
            for step in &trace.steps {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    trace.n,
                    trace.k,
                    trial,
                    DeletionTrace::csv_row(step),
                    step.weight_identity_holds(trace.n) as u8
                )
                .expect("write to string");
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{TRACE_AGGREGATE_CSV_HEADER}\n");
        for a in &self.aggregates {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                a.n,
                a.k,
                a.i,
                a.samples,
                a.mean_xi,
                a.se_xi,
                a.gamma,
                a.gamma_sum,
                a.closed_form,
                a.identity_failures
            )
            .expect("write to string");
        }
        out
    }
}

fn aggregate_traces(cell: &Cell, traces: &[DeletionTrace]) -> Result<Vec<StepAggregate>> {
    let steps = traces.iter().map(|t| t.steps.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for i in 1..steps {
        let xs: Vec<f64> = traces
            .iter()
            .filter_map(|t| t.steps.get(i)?.xi)
            .map(|x| *x.numer() as f64 / *x.denom() as f64)
            .collect();
        let (mean_xi, se_xi, _) = if xs.is_empty() {
            (f64::NAN, f64::NAN, 0.0)
        } else {
            mean_and_se(&xs)
        };
        let big_n = traces[0].big_n;
        // the closed form diverges once every edge is gone
        let (gamma_sum, closed_form) = if (i as u64) < big_n {
            let sums = gamma_cumulative(cell.n, cell.k, i as u64)?;
            (sums.exact, sums.closed)
        } else {
            let exact = (1..=i as u64)
                .map(|j| cell.n as f64 / (big_n - j + 1) as f64)
                .sum();
            (exact, f64::INFINITY)
        };
        out.push(StepAggregate {
            n: cell.n,
            k: cell.k,
            i,
            samples: xs.len(),
            mean_xi,
            se_xi,
            gamma: cell.n as f64 / (big_n - i as u64 + 1) as f64,
            gamma_sum,
            closed_form,
            identity_failures: traces
                .iter()
                .filter_map(|t| t.steps.get(i))
                .filter(|s| !s.weight_identity_holds(cell.n))
                .count(),
        });
    }
    Ok(out)
}

/// Deletion processes from uniformly colored complete instances under
/// uniformly random edge orders.
pub fn trace_experiment(cfg: &ExperimentConfig) -> Result<TraceResult> {
    let params = EventParams::default();
    let per_cell = cfg.run_cells(
        |_, cell, t| {
            let mut rng = cell.randomness(cfg.master_seed, t).rng();
            let h = complete_colored(cell.n, cell.k, cell.kappa, &mut rng, DEFAULT_EDGE_LIMIT)?;
            let order = h.random_edge_ordering(&mut rng);
            let t_max = cfg.steps.unwrap_or(order.len()).min(order.len());
            run_deletion_process(&h, &order, t_max, &params, cfg.budget)
        },
        |_, _| Ok(()),
    )?;
    let mut aggregates = Vec::new();
    let mut traces = Vec::new();
    for (ci, cell_traces) in per_cell.into_iter().enumerate() {
        aggregates.extend(aggregate_traces(&cfg.grid[ci], &cell_traces)?);
        traces.extend(
            cell_traces
                .into_iter()
                .enumerate()
                .map(|(t, tr)| (ci, t, tr)),
        );
    }
    let truncated = traces
        .iter()
        .filter(|(_, _, t)| t.truncated_at.is_some())
        .count();
    Ok(TraceResult {
        config: cfg.clone(),
        traces,
        aggregates,
        truncated,
    })
}

// --- Hamilton pipelines ---

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonTrial {
    pub cell: usize,
    pub trial: usize,
    pub stage_reached: Stage,
    /// `|E_1|, ..., |E_8|` (even orders).
    pub sizes: Vec<usize>,
    pub matchings_found: usize,
    pub hc_found: bool,
    /// Attempts made (odd orders).
    pub attempts: usize,
    pub elapsed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonSummary {
    pub cell: Cell,
    pub trials: usize,
    pub histogram: BTreeMap<Stage, usize>,
    pub successes: usize,
    pub p_hat: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonResult {
    pub config: ExperimentConfig,
    pub rows: Vec<HamiltonTrial>,
    pub cells: Vec<HamiltonSummary>,
}

fn hamilton_csv_header() -> String {
    let stages: Vec<&str> = Stage::ALL.iter().map(|s| s.name()).collect();
    format!("n,kappa,m,trials,successes,p_hat,se,{}", stages.join(","))
}

impl HamiltonResult {
    pub fn csv_header() -> String {
        hamilton_csv_header()
    }

    pub fn summary_csv_row(s: &HamiltonSummary) -> String {
        let hist: Vec<String> = Stage::ALL
            .iter()
            .map(|st| s.histogram.get(st).copied().unwrap_or(0).to_string())
            .collect();
        format!(
            "{},{},{},{},{},{},{},{}\n",
            s.cell.n,
            s.cell.kappa,
            s.cell.m_or_p(),
            s.trials,
            s.successes,
            s.p_hat,
            s.se,
            hist.join(",")
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", hamilton_csv_header());
        self.cells
            .iter()
            .for_each(|s| out.push_str(&Self::summary_csv_row(s)));
        out
    }
}

fn hamilton_trial(
    cfg: &ExperimentConfig,
    ci: usize,
    cell: &Cell,
    trial: usize,
) -> Result<HamiltonTrial> {
    let start = Instant::now();
    let mut rng = cell.randomness(cfg.master_seed, trial).rng();
    let m = cell
        .m
        .ok_or_else(|| Error::OutOfRange("Hamilton cells need m".into()))?;
    let mut row = HamiltonTrial {
        cell: ci,
        trial,
        stage_reached: Stage::OddOrder,
        sizes: Vec::new(),
        matchings_found: 0,
        hc_found: false,
        attempts: 1,
        elapsed: 0.0,
    };
    if cell.n.is_multiple_of(2) {
        let g = sample_colored_graph(cell.n, m, cell.kappa, &mut rng, DEFAULT_EDGE_LIMIT)?;
        let opts = AssemblyOptions {
            budget: cfg.budget,
            size_gate: true,
        };
        let r = assemble_even(&g, &mut rng, opts)?;
        row.stage_reached = r.stage;
        row.sizes = r.plan.sizes();
        row.matchings_found = r.plan.matchings_found();
        row.hc_found = r.cycle.is_some();
    } else {
        let retries = cfg.retries.expect("checked by hamilton_experiment");
        let r = solve_odd(cell.n, m, cell.kappa, retries, &mut rng, cfg.budget)?;
        row.stage_reached = r.stage;
        row.attempts = r.attempts.len();
        row.hc_found = r.cycle.is_some();
    }
    row.elapsed = start.elapsed().as_secs_f64();
    Ok(row)
}

/// Stage histogram and end-to-end success rate of the Hamilton pipeline on
/// `G^(kappa)_{n,m}`. Odd orders use contract-and-lift and need `retries`.
pub fn hamilton_experiment_with<S>(cfg: &ExperimentConfig, mut sink: S) -> Result<HamiltonResult>
where
    S: FnMut(&HamiltonSummary, &[HamiltonTrial]) -> Result<()>,
{
    if cfg.grid.iter().any(|c| c.n % 2 == 1) && cfg.retries.is_none() {
        return Err(Error::Precondition(
            "odd n uses contract-and-lift and needs a retry count".into(),
        ));
    }
    let mut cells = Vec::new();
    let per_cell = cfg.run_cells(
        |ci, cell, t| hamilton_trial(cfg, ci, cell, t),
        |ci, rows| {
            let mut histogram = BTreeMap::new();
            for r in rows {
                *histogram.entry(r.stage_reached).or_insert(0) += 1;
            }
            let successes = histogram.get(&Stage::Success).copied().unwrap_or(0);
            let p_hat = successes as f64 / rows.len() as f64;
            let s = HamiltonSummary {
                cell: cfg.grid[ci],
                trials: rows.len(),
                histogram,
                successes,
                p_hat,
                se: standard_error(p_hat, rows.len()),
            };
            sink(&s, rows)?;
            cells.push(s);
            Ok(())
        },
    )?;
    Ok(HamiltonResult {
        config: cfg.clone(),
        rows: per_cell.into_iter().flatten().collect(),
        cells,
    })
}

pub fn hamilton_experiment(cfg: &ExperimentConfig) -> Result<HamiltonResult> {
    hamilton_experiment_with(cfg, |_, _| Ok(()))
}
