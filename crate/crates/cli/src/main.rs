//! `rainbow`: generate, solve and count rainbow matching instances and run
//! the Monte Carlo experiments.

mod grid;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rainbow_core::count::{count_rainbow_pm, find_rainbow_pm, latin_transversal, parse_matrix_csv};
use rainbow_core::experiment::{
    emit_plot, hamilton_experiment_with, mean_count_experiment_with, threshold_scan_with,
    trace_experiment, Cell, ExperimentConfig, ExperimentKind, HamiltonResult, MeanCountResult,
    PlotSpec, ThresholdResult, MEAN_COUNT_CSV_HEADER, THRESHOLD_CSV_HEADER,
    THRESHOLD_ROWS_CSV_HEADER,
};
use rainbow_core::hamilton::{find_rainbow_hc, ColoredMultigraph};
use rainbow_core::model::{
    complete_colored, sample_colored_graph, sample_hp_m, sample_hp_p, DEFAULT_EDGE_LIMIT,
};
use rainbow_core::{Budget, ColoredHypergraph, CountMethod, RandomnessSpec};

use grid::{parse_f64_list, parse_u64_list, parse_usize_list, List};

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow perfect matchings and Hamilton cycles in random colored hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Ie,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Search node budget per exact search.
    #[arg(long, default_value_t = Budget::DEFAULT_NODES)]
    budget: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an instance and print it as JSON.
    Gen {
        #[arg(long, value_enum, default_value_t = ModeArg::Partite)]
        mode: ModeArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Number of colors (defaults to n).
        #[arg(long)]
        colors: Option<usize>,
        /// Number of edges; all edges when neither --m nor --p is given.
        #[arg(long, conflicts_with = "p")]
        m: Option<u64>,
        /// Independent edge probability (partite mode).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count rainbow perfect matchings of an instance.
    Count {
        /// Instance JSON.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
        method: MethodArg,
        #[arg(long, default_value_t = Budget::DEFAULT_NODES)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a rainbow perfect matching, a latin transversal, or a rainbow
    /// Hamilton cycle.
    Solve {
        /// Instance JSON.
        #[arg(required_unless_present = "matrix")]
        input: Option<PathBuf>,
        /// Matrix CSV (entries 1..n, 0 for empty); solves for a latin transversal.
        #[arg(long, conflicts_with = "input")]
        matrix: Option<PathBuf>,
        /// Search for a rainbow Hamilton cycle (graph instances).
        #[arg(long, conflicts_with = "matrix")]
        hamilton: bool,
        #[arg(long, default_value_t = Budget::DEFAULT_NODES)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the edge-deletion process on complete colored instances.
    Trace {
        #[arg(long, value_parser = parse_usize_list)]
        n: List<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        colors: Option<usize>,
        /// Steps per trace (all edges by default).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Aggregate CSV (mean xi against gamma per step).
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate P(rainbow perfect matching) over an (n, m) or (n, p) grid.
    Threshold {
        #[arg(long, value_parser = parse_usize_list)]
        n: List<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        colors: Option<usize>,
        /// Edge counts: `a,b,c` or `start:end:step`.
        #[arg(long, value_parser = parse_u64_list, conflicts_with = "p")]
        m: Option<List<u64>>,
        #[arg(long, value_parser = parse_f64_list)]
        p: Option<List<f64>>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Record exact counts per trial.
        #[arg(long)]
        count: bool,
        /// Per-trial CSV.
        #[arg(long)]
        rows: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare sampled rainbow counts with the exact first and second moments.
    MeanCount {
        #[arg(long, value_parser = parse_usize_list)]
        n: List<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the rainbow Hamilton cycle pipeline on random colored graphs.
    Hamilton {
        #[arg(long, value_parser = parse_usize_list)]
        n: List<usize>,
        /// Edge counts (complete graph when absent).
        #[arg(long, value_parser = parse_u64_list)]
        m: Option<List<u64>>,
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Contract-and-lift attempts per trial (required for odd n).
        #[arg(long)]
        retries: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Plot columns of a CSV produced by this tool as SVG.
    Plot {
        input: PathBuf,
        #[arg(long, default_value = "m")]
        x: String,
        #[arg(long, default_value = "p_hat")]
        y: String,
        /// Error-bar column; pass an empty string for none.
        #[arg(long, default_value = "se")]
        err: String,
        /// Series column; pass an empty string for a single series.
        #[arg(long, default_value = "n")]
        group: String,
        #[arg(long, default_value = "rainbow perfect matching probability")]
        title: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Partite,
    Graph,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<ColoredHypergraph> {
    ColoredHypergraph::from_json(&read(path)?)
        .with_context(|| format!("cannot parse instance {}", path.display()))
}

fn config(
    kind: ExperimentKind,
    grid: Vec<Cell>,
    trials: usize,
    common: &Common,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, grid, trials, common.seed);
    cfg.jobs = common.jobs;
    cfg.budget = Budget::new(common.budget);
    cfg
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            mode,
            n,
            k,
            colors,
            m,
            p,
            seed,
            stream,
            out,
        } => {
            let kappa = colors.unwrap_or(n);
            let mut rng = RandomnessSpec::new(seed, stream).rng();
            let h = match (mode, m, p) {
                (ModeArg::Partite, Some(m), _) => {
                    sample_hp_m(n, k, kappa, m, &mut rng, DEFAULT_EDGE_LIMIT)?
                }
                (ModeArg::Partite, None, Some(p)) => {
                    sample_hp_p(n, k, kappa, p, &mut rng, DEFAULT_EDGE_LIMIT)?
                }
                (ModeArg::Partite, None, None) => {
                    complete_colored(n, k, kappa, &mut rng, DEFAULT_EDGE_LIMIT)?
                }
                (ModeArg::Graph, _, Some(_)) => bail!("--p applies to partite instances"),
                (ModeArg::Graph, m, None) => {
                    let m = m.unwrap_or((n * n.saturating_sub(1) / 2) as u64);
                    sample_colored_graph(n, m, kappa, &mut rng, DEFAULT_EDGE_LIMIT)?
                }
            };
            let mut w = output(out.as_deref())?;
            writeln!(w, "{}", h.to_json_pretty())?;
            w.flush()?;
        }
        Command::Count {
            input,
            method,
            budget,
            format,
            out,
        } => {
            let h = load_instance(&input)?;
            let method = match method {
                MethodArg::Brute => CountMethod::Brute,
                MethodArg::Ie => CountMethod::ColorInclusionExclusion,
            };
            let r = count_rainbow_pm(&h, method, Budget::new(budget))?;
            let mut w = output(out.as_deref())?;
            match format {
                Format::Json => writeln!(
                    w,
                    "{}",
                    json!({
                        "count": r.value.to_string(),
                        "method": r.method.to_string(),
                        "work": r.work,
                        "elapsed": r.elapsed_secs,
                    })
                )?,
                Format::Csv => {
                    writeln!(w, "count,method,work\n{},{},{}", r.value, r.method, r.work)?
                }
            }
            w.flush()?;
        }
        Command::Solve {
            input,
            matrix,
            hamilton,
            budget,
            out,
        } => {
            let budget = Budget::new(budget);
            let start = Instant::now();
            let report = if let Some(matrix) = matrix {
                let a = parse_matrix_csv(&read(&matrix)?)?;
                let cells = latin_transversal(&a, budget)?;
                json!({
                    "found": cells.is_some(),
                    "cells": cells.map(|c| c.into_iter().map(|(i, j)| [i + 1, j + 1]).collect::<Vec<_>>()),
                    "elapsed": start.elapsed().as_secs_f64(),
                })
            } else {
                let h = load_instance(input.as_deref().expect("clap requires input"))?;
                if hamilton {
                    let g = ColoredMultigraph::from_graph(&h)?;
                    let c = find_rainbow_hc(&g, budget)?;
                    json!({
                        "found": c.is_some(),
                        "cycle": c.map(|c| json!({
                            "vertices": c.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "colors": c.colors.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        })),
                        "elapsed": start.elapsed().as_secs_f64(),
                    })
                } else {
                    let m = find_rainbow_pm(&h, budget)?;
                    json!({
                        "found": m.is_some(),
                        "matching": m.map(|m| m.edges.iter().map(|e| json!({
                            "verts": e.verts.iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "color": e.color + 1,
                        })).collect::<Vec<_>>()),
                        "elapsed": start.elapsed().as_secs_f64(),
                    })
                }
            };
            let mut w = output(out.as_deref())?;
            writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
            w.flush()?;
        }
        Command::Trace {
            n,
            k,
            colors,
            steps,
            trials,
            summary,
            common,
        } => {
            let n = n.0;
            let grid = n
                .iter()
                .map(|&n| Cell::new(n, k, colors.unwrap_or(n)))
                .collect();
            let mut cfg = config(ExperimentKind::Trace, grid, trials, &common);
            cfg.steps = steps;
            let r = trace_experiment(&cfg)?;
            if r.truncated > 0 {
                eprintln!(
                    "warning: {} trace(s) truncated by the search budget",
                    r.truncated
                );
            }
            let mut w = output(common.out.as_deref())?;
            match common.format {
                Format::Csv => w.write_all(r.rows_csv().as_bytes())?,
                Format::Json => {
                    let v = json!({
                        "config": r.config,
                        "truncated": r.truncated,
                        "aggregates": r.aggregates,
                    });
                    writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?
                }
            }
            w.flush()?;
            if let Some(path) = summary {
                std::fs::write(&path, r.to_csv())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        Command::Threshold {
            n,
            k,
            colors,
            m,
            p,
            trials,
            count,
            rows,
            common,
        } => {
            let n = n.0;
            let mut grid = Vec::new();
            for &n in &n {
                let base = Cell::new(n, k, colors.unwrap_or(n));
                match (&m, &p) {
                    (Some(ms), _) => grid.extend(ms.0.iter().map(|&m| base.with_m(m))),
                    (None, Some(ps)) => grid.extend(ps.0.iter().map(|&p| base.with_p(p))),
                    (None, None) => bail!("threshold needs --m or --p"),
                }
            }
            let mut cfg = config(ExperimentKind::Threshold, grid, trials, &common);
            cfg.count = count;
            run_threshold(&cfg, &common, rows.as_deref())?;
        }
        Command::MeanCount {
            n,
            k,
            trials,
            common,
        } => {
            let n = n.0;
            let grid = n.iter().map(|&n| Cell::new(n, k, n)).collect();
            let cfg = config(ExperimentKind::MeanCount, grid, trials, &common);
            cfg.validate()?;
            let mut w = output(common.out.as_deref())?;
            let csv = common.format == Format::Csv;
            if csv {
                writeln!(w, "{MEAN_COUNT_CSV_HEADER}")?;
            }
            let r = mean_count_experiment_with(&cfg, |s| {
                if csv {
                    w.write_all(MeanCountResult::summary_csv_row(s).as_bytes())?;
                    w.flush()?;
                }
                Ok(())
            })?;
            if !csv {
                writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?;
            }
            w.flush()?;
        }
        Command::Hamilton {
            n,
            m,
            colors,
            trials,
            retries,
            common,
        } => {
            let n = n.0;
            let mut grid = Vec::new();
            for &n in &n {
                let base = Cell::new(n, 2, colors.unwrap_or(n));
                match &m {
                    Some(ms) => grid.extend(ms.0.iter().map(|&m| base.with_m(m))),
                    None => grid.push(base.with_m((n * n.saturating_sub(1) / 2) as u64)),
                }
            }
            let mut cfg = config(ExperimentKind::Hamilton, grid, trials, &common);
            cfg.retries = retries;
            if retries.is_none() && n.iter().any(|n| n % 2 == 1) {
                anyhow::bail!("odd n uses contract-and-lift; pass --retries");
            }
            cfg.validate()?;
            let mut w = output(common.out.as_deref())?;
            let csv = common.format == Format::Csv;
            if csv {
                writeln!(w, "{}", HamiltonResult::csv_header())?;
            }
            let r = hamilton_experiment_with(&cfg, |s, _| {
                if csv {
                    w.write_all(HamiltonResult::summary_csv_row(s).as_bytes())?;
                    w.flush()?;
                }
                Ok(())
            })?;
            if !csv {
                writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?;
            }
            w.flush()?;
        }
        Command::Plot {
            input,
            x,
            y,
            err,
            group,
            title,
            out,
        } => {
            let spec = PlotSpec {
                x,
                y,
                err: (!err.is_empty()).then_some(err),
                group: (!group.is_empty()).then_some(group),
                title,
            };
            let svg = emit_plot(&read(&input)?, &spec)
                .with_context(|| format!("cannot plot {}", input.display()))?;
            let mut w = output(out.as_deref())?;
            w.write_all(svg.as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run_threshold(cfg: &ExperimentConfig, common: &Common, rows: Option<&Path>) -> Result<()> {
    cfg.validate()?;
    let mut w = output(common.out.as_deref())?;
    let mut rows_w = rows.map(|p| output(Some(p))).transpose()?;
    let csv = common.format == Format::Csv;
    if csv {
        writeln!(w, "{THRESHOLD_CSV_HEADER}")?;
    }
    if let Some(rw) = rows_w.as_mut() {
        writeln!(rw, "{THRESHOLD_ROWS_CSV_HEADER}")?;
    }
    let r = threshold_scan_with(cfg, |s, trial_rows| {
        if csv {
            w.write_all(ThresholdResult::summary_csv_row(s).as_bytes())?;
            w.flush()?;
        }
        if let Some(rw) = rows_w.as_mut() {
            for row in trial_rows {
                rw.write_all(ThresholdResult::trial_csv_row(&s.cell, row).as_bytes())?;
            }
            rw.flush()?;
        }
        Ok(())
    })?;
    if !csv {
        writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?;
    }
    w.flush()?;
    if r.cells.iter().any(|c| c.budget_exceeded > 0) {
        eprintln!("warning: some trials exceeded the search budget (see budget_exceeded)");
    }
    Ok(())
}
