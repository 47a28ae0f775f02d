//! Rainbow Hamilton cycles in colored multigraphs.
//!
//! [`find_rainbow_hc`] is an exact backtracking search. [`assemble_even`]
//! builds an 8-regular multigraph from eight rainbow perfect matchings of a
//! colored graph on an even number of vertices and searches it;
//! [`contract_color_delete`] and [`lift_cycle`] reduce odd orders to even ones.

mod assembly;
mod contraction;
mod search;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ColoredHypergraph, Mode};

pub use assembly::{
    assemble_even, AssemblyOptions, AssemblyPlan, AssemblyReport, Stage, CLASSES, LABELS,
};
pub use contraction::{contract_color_delete, lift_cycle, solve_odd, Contraction, OddReport};
pub use search::find_rainbow_hc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiEdge {
    pub u: u32,
    pub v: u32,
    pub color: u32,
}

impl MultiEdge {
    pub fn other(&self, x: u32) -> u32 {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn joins(&self, a: u32, b: u32) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// A colored multigraph on `[n]` without loops. Parallel edges are distinct
/// and addressed by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredMultigraph {
    n: usize,
    kappa: usize,
    edges: Vec<MultiEdge>,
}

impl ColoredMultigraph {
    pub fn new(n: usize, kappa: usize, edges: Vec<MultiEdge>) -> Result<Self> {
        for e in &edges {
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("loop at vertex {}", e.u)));
            }
            if e.u.max(e.v) as usize >= n {
                return Err(Error::InvalidInstance(format!(
                    "vertex {} >= n={n}",
                    e.u.max(e.v)
                )));
            }
            if e.color as usize >= kappa {
                return Err(Error::InvalidInstance(format!(
                    "color {} out of range for kappa={kappa}",
                    e.color
                )));
            }
        }
        Ok(Self { n, kappa, edges })
    }

    /// Edge `i` of the result is edge `i` of `g`.
    pub fn from_graph(g: &ColoredHypergraph) -> Result<Self> {
        g.require_mode(Mode::Graph)?;
        if g.is_restricted() {
            return Err(Error::Precondition(
                "Hamilton cycles are searched on unrestricted graphs".into(),
            ));
        }
        let edges = g
            .edges()
            .iter()
            .map(|e| MultiEdge {
                u: e.verts[0],
                v: e.verts[1],
                color: e.color,
            })
            .collect();
        Self::new(g.n(), g.kappa(), edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u as usize] += 1;
            d[e.v as usize] += 1;
        }
        d
    }

    pub fn color_multiplicities(&self) -> Vec<usize> {
        let mut c = vec![0; self.kappa];
        for e in &self.edges {
            c[e.color as usize] += 1;
        }
        c
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.degrees().iter().all(|&d| d == r)
    }
}

/// A Hamilton cycle: edge `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % n]` and has color `colors[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonCycle {
    pub vertices: Vec<u32>,
    pub edges: Vec<usize>,
    pub colors: Vec<u32>,
}

impl HamiltonCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Checks coverage, adjacency and color distinctness of `c` in `g`, without
/// trusting anything the search recorded beyond the cycle itself.
pub fn is_rainbow_hamilton_cycle(g: &ColoredMultigraph, c: &HamiltonCycle) -> bool {
    let n = g.n();
    if n < 2 || c.vertices.len() != n || c.edges.len() != n || c.colors.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in &c.vertices {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    let mut edge_seen = std::collections::HashSet::new();
    let mut color_seen = vec![false; g.kappa()];
    for i in 0..n {
        let Some(e) = g.edges().get(c.edges[i]) else {
            return false;
        };
        if !edge_seen.insert(c.edges[i]) || !e.joins(c.vertices[i], c.vertices[(i + 1) % n]) {
            return false;
        }
        if e.color != c.colors[i] || std::mem::replace(&mut color_seen[e.color as usize], true) {
            return false;
        }
    }
    true
}

/// Union of `r` independent uniform perfect matchings of `[n]`, colored so
/// each of the `n` colors appears exactly `r / 2` times.
pub fn random_matching_union<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<ColoredMultigraph> {
    if n < 2 || n % 2 == 1 || r % 2 == 1 {
        return Err(Error::OutOfRange(format!(
            "need even n >= 2 and even r (got n={n}, r={r})"
        )));
    }
    let mut colors: Vec<u32> = (0..n as u32)
        .flat_map(|c| std::iter::repeat_n(c, r / 2))
        .collect();
    colors.shuffle(rng);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut edges = Vec::with_capacity(r * n / 2);
    for _ in 0..r {
        perm.shuffle(rng);
        for pair in perm.chunks(2) {
            edges.push(MultiEdge {
                u: pair[0].min(pair[1]),
                v: pair[0].max(pair[1]),
                color: colors[edges.len()],
            });
        }
    }
    ColoredMultigraph::new(n, n, edges)
}
