//! Eight rainbow perfect matchings assembled into an 8-regular multigraph.
//!
//! Each edge gets a label in `0..4`; the pairs `(color, label)` are split
//! uniformly into [`CLASSES`] blocks `C_i` of size `n / 2`, and an edge lands in
//! `E_i` when its pair lies in `C_i`. Inside `E_i` an edge is recolored by the
//! position of its pair within `C_i`, so a rainbow perfect matching of `E_i`
//! uses every pair of `C_i` once. The union `Gamma` of the eight matchings then
//! has every vertex of degree 8 and every original color exactly 4 times.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::{find_rainbow_pm, Budget};
use crate::error::{Error, Result};
use crate::model::{ColoredEdge, ColoredHypergraph, Mode};

use super::{find_rainbow_hc, ColoredMultigraph, HamiltonCycle, MultiEdge};

/// Number of edge labels.
pub const LABELS: usize = 4;
/// Number of edge classes and matchings.
pub const CLASSES: usize = 8;

/// Where a Hamilton pipeline stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    OddOrder,
    EdgeClassTooSmall,
    MatchingNotFound,
    MatchingBudget,
    HcAbsent,
    HcBudget,
    LiftFailed,
    Success,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::OddOrder,
        Stage::EdgeClassTooSmall,
        Stage::MatchingNotFound,
        Stage::MatchingBudget,
        Stage::HcAbsent,
        Stage::HcBudget,
        Stage::LiftFailed,
        Stage::Success,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::OddOrder => "odd_order",
            Stage::EdgeClassTooSmall => "edge_class_too_small",
            Stage::MatchingNotFound => "matching_not_found",
            Stage::MatchingBudget => "matching_budget",
            Stage::HcAbsent => "hc_absent",
            Stage::HcBudget => "hc_budget",
            Stage::LiftFailed => "lift_failed",
            Stage::Success => "success",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    pub budget: Budget,
    /// Stop with [`Stage::EdgeClassTooSmall`] unless `10 |E_i| >= m` for all `i`.
    pub size_gate: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            budget: Budget::default(),
            size_gate: true,
        }
    }
}

/// Everything the pipeline built, as far as it got.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyPlan {
    /// Label of each edge of the input, by edge index.
    pub labels: Vec<u8>,
    /// `C_i` as `(color, label)` pairs; position in the list is the pair color.
    pub classes: Vec<Vec<(u32, u8)>>,
    /// `E_i` as edge indices of the input.
    pub edge_classes: Vec<Vec<usize>>,
    /// `M_i` as edge indices of the input, when found.
    pub matchings: Vec<Option<Vec<usize>>>,
    /// The union of all `M_i`, once all were found.
    pub gamma: Option<ColoredMultigraph>,
    /// Input edge index of each edge of `gamma`.
    pub gamma_origin: Vec<usize>,
}

impl AssemblyPlan {
    pub fn sizes(&self) -> Vec<usize> {
        self.edge_classes.iter().map(Vec::len).collect()
    }

    pub fn matchings_found(&self) -> usize {
        self.matchings.iter().filter(|m| m.is_some()).count()
    }

    /// The `C_i` are disjoint blocks of size `n / 2` covering `[n] x [4]`.
    pub fn partition_is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n * LABELS];
        self.classes.len() == CLASSES
            && self.classes.iter().all(|c| c.len() * 2 == n)
            && self.classes.iter().flatten().all(|&(c, l)| {
                (c as usize) < n
                    && (l as usize) < LABELS
                    && !std::mem::replace(&mut seen[c as usize * LABELS + l as usize], true)
            })
            && seen.iter().all(|&s| s)
    }

    /// `e` lies in `E_i` exactly when `(color(e), label(e))` lies in `C_i`.
    pub fn split_is_consistent(&self, g: &ColoredHypergraph) -> bool {
        let mut class_of = std::collections::HashMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            for &pair in c {
                class_of.insert(pair, i);
            }
        }
        let mut in_class = vec![usize::MAX; g.edge_count()];
        for (i, class) in self.edge_classes.iter().enumerate() {
            for &e in class {
                if in_class[e] != usize::MAX {
                    return false;
                }
                in_class[e] = i;
            }
        }
        g.edges()
            .iter()
            .enumerate()
            .all(|(idx, e)| class_of.get(&(e.color, self.labels[idx])) == Some(&in_class[idx]))
    }

    /// `M_i`, if found, is a perfect matching of `g` whose `(color, label)`
    /// pairs are exactly `C_i`.
    pub fn matching_covers_class(&self, g: &ColoredHypergraph, i: usize) -> Option<bool> {
        let m = self.matchings.get(i)?.as_ref()?;
        let mut covered = vec![false; g.n()];
        let mut pairs: Vec<(u32, u8)> = Vec::with_capacity(m.len());
        for &idx in m {
            let e = &g.edges()[idx];
            for &v in &e.verts {
                if std::mem::replace(&mut covered[v as usize], true) {
                    return Some(false);
                }
            }
            pairs.push((e.color, self.labels[idx]));
        }
        let mut class = self.classes[i].clone();
        pairs.sort_unstable();
        class.sort_unstable();
        Some(covered.iter().all(|&c| c) && pairs == class)
    }

    /// `Gamma` is 8-regular and every color appears exactly 4 times.
    pub fn gamma_is_balanced(&self) -> Option<bool> {
        self.gamma.as_ref().map(|g| {
            g.is_regular(CLASSES) && g.color_multiplicities().iter().all(|&c| c * 2 == CLASSES)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyReport {
    pub stage: Stage,
    pub plan: AssemblyPlan,
    /// A rainbow Hamilton cycle of `plan.gamma` (edge ids index `gamma`).
    pub cycle: Option<HamiltonCycle>,
}

fn edge_index(g: &ColoredHypergraph, e: &ColoredEdge) -> usize {
    g.edges()
        .binary_search_by(|f| f.verts.cmp(&e.verts))
        .expect("matching edge comes from the input")
}

/// Run the eight-matching construction on a graph with `n` colors.
pub fn assemble_even<R: Rng + ?Sized>(
    g: &ColoredHypergraph,
    rng: &mut R,
    opts: AssemblyOptions,
) -> Result<AssemblyReport> {
    g.require_mode(Mode::Graph)?;
    let n = g.n();
    let mut plan = AssemblyPlan::default();
    if n % 2 == 1 {
        return Ok(AssemblyReport {
            stage: Stage::OddOrder,
            plan,
            cycle: None,
        });
    }
    if g.kappa() != n || g.is_restricted() {
        return Err(Error::Precondition(format!(
            "the assembly needs an unrestricted graph with exactly n colors (n={n}, colors={})",
            g.kappa()
        )));
    }
    let nu = n / 2;

    plan.labels = (0..g.edge_count())
        .map(|_| rng.gen_range(0..LABELS as u8))
        .collect();
    let mut pairs: Vec<(u32, u8)> = (0..n as u32)
        .flat_map(|c| (0..LABELS as u8).map(move |l| (c, l)))
        .collect();
    pairs.shuffle(rng);
    plan.classes = pairs.chunks(nu).map(<[_]>::to_vec).collect();

    // (class, position) of each pair
    let mut slot = vec![(0usize, 0u32); n * LABELS];
    for (i, c) in plan.classes.iter().enumerate() {
        for (j, &(color, l)) in c.iter().enumerate() {
            slot[color as usize * LABELS + l as usize] = (i, j as u32);
        }
    }
    let pair_slot = |idx: usize| {
        let e = &g.edges()[idx];
        slot[e.color as usize * LABELS + plan.labels[idx] as usize]
    };
    plan.edge_classes = vec![Vec::new(); CLASSES];
    for idx in 0..g.edge_count() {
        plan.edge_classes[pair_slot(idx).0].push(idx);
    }

    let m = g.edge_count();
    if opts.size_gate && plan.edge_classes.iter().any(|c| 10 * c.len() < m) {
        return Ok(AssemblyReport {
            stage: Stage::EdgeClassTooSmall,
            plan,
            cycle: None,
        });
    }

    let searches: Vec<Result<Option<Vec<usize>>>> = plan
        .edge_classes
        .par_iter()
        .map(|class| {
            let edges = class
                .iter()
                .map(|&idx| {
                    let e = &g.edges()[idx];
                    ColoredEdge::pair(e.verts[0], e.verts[1], pair_slot(idx).1)
                })
                .collect();
            let h = ColoredHypergraph::graph(n, nu, edges)?;
            Ok(find_rainbow_pm(&h, opts.budget)?
                .map(|pm| pm.edges.iter().map(|e| edge_index(g, e)).collect()))
        })
        .collect();

    let mut failure = None;
    for r in searches {
        match r {
            Ok(found) => {
                if found.is_none() && failure.is_none() {
                    failure = Some(Stage::MatchingNotFound);
                }
                plan.matchings.push(found);
            }
            Err(Error::BudgetExceeded { .. }) => {
                failure.get_or_insert(Stage::MatchingBudget);
                plan.matchings.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(stage) = failure {
        return Ok(AssemblyReport {
            stage,
            plan,
            cycle: None,
        });
    }

    let mut gamma_edges = Vec::with_capacity(CLASSES * nu);
    for &idx in plan.matchings.iter().flatten().flatten() {
        let e = &g.edges()[idx];
        gamma_edges.push(MultiEdge {
            u: e.verts[0],
            v: e.verts[1],
            color: e.color,
        });
        plan.gamma_origin.push(idx);
    }
    let gamma = ColoredMultigraph::new(n, n, gamma_edges)?;
    let found = find_rainbow_hc(&gamma, opts.budget);
    plan.gamma = Some(gamma);
    let (stage, cycle) = match found {
        Ok(Some(c)) => (Stage::Success, Some(c)),
        Ok(None) => (Stage::HcAbsent, None),
        Err(Error::BudgetExceeded { .. }) => (Stage::HcBudget, None),
        Err(e) => return Err(e),
    };
    Ok(AssemblyReport { stage, plan, cycle })
}
