//! Odd orders: contract one edge, solve on the even remainder, lift back.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::count::Budget;
use crate::error::{Error, Result};
use crate::model::{sample_colored_graph, DEFAULT_EDGE_LIMIT};

use super::{
    find_rainbow_hc, is_rainbow_hamilton_cycle, ColoredMultigraph, HamiltonCycle, MultiEdge, Stage,
};

/// How a contracted graph relates to the original.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    /// Index of the contracted edge in the original graph.
    pub edge: usize,
    pub x: u32,
    pub y: u32,
    /// The deleted color `c(e)`.
    pub color: u32,
    /// Id of the merged vertex in the contracted graph (always `n - 2`).
    pub xi: u32,
    /// Original id of each contracted vertex other than `xi`.
    pub original_vertex: Vec<u32>,
    /// Original edge index of each contracted edge.
    pub origin: Vec<usize>,
}

impl Contraction {
    /// The endpoint (`x` or `y`) that contracted edge `e` had before merging.
    /// `None` when `e` does not touch `xi`.
    pub fn attachment(&self, g: &ColoredMultigraph, e: usize) -> Option<u32> {
        let orig = &g.edges()[self.origin[e]];
        [self.x, self.y]
            .into_iter()
            .find(|&end| orig.u == end || orig.v == end)
    }
}

/// Merge the endpoints of edge `e` into one vertex and delete every edge of
/// color `c(e)`. Edges parallel to `e` become loops and are dropped; other
/// edges at `x` or `y` move to the merged vertex, possibly becoming parallel.
pub fn contract_color_delete(
    g: &ColoredMultigraph,
    e: usize,
) -> Result<(ColoredMultigraph, Contraction)> {
    let Some(&MultiEdge { u: x, v: y, color }) = g.edges().get(e) else {
        return Err(Error::OutOfRange(format!(
            "edge {e} is not in the graph ({} edges)",
            g.edges().len()
        )));
    };
    let n = g.n();
    let xi = (n - 2) as u32;
    let mut new_id = vec![xi; n];
    let mut original_vertex = Vec::with_capacity(n - 2);
    for v in 0..n as u32 {
        if v != x && v != y {
            new_id[v as usize] = original_vertex.len() as u32;
            original_vertex.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (idx, f) in g.edges().iter().enumerate() {
        if f.color == color {
            continue;
        }
        let (a, b) = (new_id[f.u as usize], new_id[f.v as usize]);
        if a == b {
            continue;
        }
        edges.push(MultiEdge {
            u: a.min(b),
            v: a.max(b),
            color: f.color,
        });
        origin.push(idx);
    }
    let contracted = ColoredMultigraph::new(n - 1, g.kappa(), edges)?;
    Ok((
        contracted,
        Contraction {
            edge: e,
            x,
            y,
            color,
            xi,
            original_vertex,
            origin,
        },
    ))
}

/// Expand a Hamilton cycle of the contracted graph into one of `g` through
/// the contracted edge.
///
/// Fails with [`Error::LiftFailed`] when both cycle edges at the merged vertex
/// came from the same original endpoint.
pub fn lift_cycle(
    g: &ColoredMultigraph,
    contraction: &Contraction,
    cycle: &HamiltonCycle,
) -> Result<HamiltonCycle> {
    let n = g.n();
    if cycle.len() + 1 != n || cycle.edges.len() != cycle.len() {
        return Err(Error::Precondition(format!(
            "expected a Hamilton cycle on {} vertices",
            n - 1
        )));
    }
    let len = cycle.len();
    let start = cycle
        .vertices
        .iter()
        .position(|&v| v == contraction.xi)
        .ok_or_else(|| Error::Precondition("cycle misses the merged vertex".into()))?;
    // rotate so the merged vertex comes first
    let verts: Vec<u32> = (0..len)
        .map(|i| cycle.vertices[(start + i) % len])
        .collect();
    let edges: Vec<usize> = (0..len)
        .map(|i| contraction.origin[cycle.edges[(start + i) % len]])
        .collect();

    let attach = |orig: usize| {
        let f = &g.edges()[orig];
        if f.u == contraction.x || f.v == contraction.x {
            contraction.x
        } else {
            contraction.y
        }
    };
    let p = attach(edges[0]);
    let q = attach(edges[len - 1]);
    if p == q {
        return Err(Error::LiftFailed { endpoint: p });
    }

    let mut vertices = Vec::with_capacity(n);
    vertices.push(p);
    vertices.extend(
        verts[1..]
            .iter()
            .map(|&v| contraction.original_vertex[v as usize]),
    );
    vertices.push(q);
    let mut lifted_edges = edges;
    lifted_edges.push(contraction.edge);
    let colors = lifted_edges.iter().map(|&e| g.edges()[e].color).collect();
    Ok(HamiltonCycle {
        vertices,
        edges: lifted_edges,
        colors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddReport {
    pub stage: Stage,
    /// Stage of every attempt, in order.
    pub attempts: Vec<Stage>,
    /// The graph of the successful attempt and its rainbow Hamilton cycle.
    pub graph: Option<ColoredMultigraph>,
    pub cycle: Option<HamiltonCycle>,
}

/// Up to `retries` attempts, each on a fresh `G^(kappa)_{n,m}` with a uniformly
/// chosen contraction edge, stopping at the first lifted rainbow cycle.
pub fn solve_odd<R: Rng + ?Sized>(
    n: usize,
    m: u64,
    kappa: usize,
    retries: usize,
    rng: &mut R,
    budget: Budget,
) -> Result<OddReport> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "contract-and-lift needs odd n >= 3 (n={n})"
        )));
    }
    if retries == 0 {
        return Err(Error::OutOfRange("retries must be at least 1".into()));
    }
    let mut report = OddReport {
        stage: Stage::HcAbsent,
        attempts: Vec::with_capacity(retries),
        graph: None,
        cycle: None,
    };
    for _ in 0..retries {
        let g = ColoredMultigraph::from_graph(&sample_colored_graph(
            n,
            m,
            kappa,
            rng,
            DEFAULT_EDGE_LIMIT,
        )?)?;
        let stage = if g.edges().is_empty() {
            Stage::HcAbsent
        } else {
            let e = rng.gen_range(0..g.edges().len());
            let (contracted, map) = contract_color_delete(&g, e)?;
            match find_rainbow_hc(&contracted, budget) {
                Err(Error::BudgetExceeded { .. }) => Stage::HcBudget,
                Err(err) => return Err(err),
                Ok(None) => Stage::HcAbsent,
                Ok(Some(c)) => match lift_cycle(&g, &map, &c) {
                    Err(Error::LiftFailed { .. }) => Stage::LiftFailed,
                    Err(err) => return Err(err),
                    Ok(lifted) => {
                        debug_assert!(is_rainbow_hamilton_cycle(&g, &lifted));
                        report.graph = Some(g);
                        report.cycle = Some(lifted);
                        Stage::Success
                    }
                },
            }
        };
        report.attempts.push(stage);
        report.stage = stage;
        if stage == Stage::Success {
            break;
        }
    }
    Ok(report)
}
