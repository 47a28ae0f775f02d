//! Exact rainbow perfect matching search and counting.

mod formula;
mod latin;
mod permanent;
mod reduction;
mod search;

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ColoredHypergraph, Matching, Mode};

pub use formula::{
    disjoint_completion_count, expected_rainbow_count, ln_biguint, ln_expected_rainbow_count,
    ln_second_moment_exact, second_moment_exact,
};
pub use latin::{latin_transversal, parse_matrix_csv};
pub use reduction::{count_uniform_pm, reduce_to_uniform, UniformHypergraph};

use search::PmSearch;

/// Node limit for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 100_000_000;

    pub fn new(max_nodes: u64) -> Self {
        Self { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_NODES)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    /// Exhaustive enumeration with pruning.
    Brute,
    /// Signed sum over color subsets of permanents (k = 2, colors = n).
    ColorInclusionExclusion,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountMethod::Brute => f.write_str("brute"),
            CountMethod::ColorInclusionExclusion => f.write_str("ie"),
        }
    }
}

impl std::str::FromStr for CountMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(CountMethod::Brute),
            "ie" | "inclusion-exclusion" | "color-inclusion-exclusion" => {
                Ok(CountMethod::ColorInclusionExclusion)
            }
            other => Err(Error::Parse(format!("unknown count method {other:?}"))),
        }
    }
}

/// The number of rainbow perfect matchings and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub value: BigUint,
    pub method: CountMethod,
    /// Search nodes (brute) or inner-loop steps (inclusion-exclusion).
    pub work: u64,
    pub elapsed_secs: f64,
}

/// All edge colors pairwise distinct. The empty matching is rainbow.
pub fn is_rainbow(m: &Matching) -> bool {
    m.is_rainbow()
}

/// A rainbow perfect matching of `h`, or `None` after exhaustive search.
///
/// In graph mode the matching has `n / 2` edges; in partite mode `n`.
pub fn find_rainbow_pm(h: &ColoredHypergraph, budget: Budget) -> Result<Option<Matching>> {
    match PmSearch::new(h, budget) {
        Some(mut s) => s.find(),
        None => Ok(None),
    }
}

/// Exact number of rainbow perfect matchings as a `u64`, brute force.
pub fn count_rainbow_pm_brute(h: &ColoredHypergraph, budget: Budget) -> Result<(u64, u64)> {
    match PmSearch::new(h, budget) {
        Some(mut s) => {
            let c = s.count()?;
            Ok((c, s.nodes()))
        }
        None => Ok((0, 0)),
    }
}

/// Exact number of rainbow perfect matchings.
pub fn count_rainbow_pm(
    h: &ColoredHypergraph,
    method: CountMethod,
    budget: Budget,
) -> Result<CountReport> {
    let start = Instant::now();
    let (value, work) = match method {
        CountMethod::Brute => {
            let (c, nodes) = count_rainbow_pm_brute(h, budget)?;
            (BigUint::from(c), nodes)
        }
        CountMethod::ColorInclusionExclusion => {
            h.require_mode(Mode::Partite)?;
            permanent::count_by_color_inclusion_exclusion(h, budget)?
        }
    };
    Ok(CountReport {
        value,
        method,
        work,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
