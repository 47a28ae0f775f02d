//! Colored k-partite hypergraphs as uncolored (k+1)-partite ones.
//!
//! An edge `(u_1, ..., u_k)` of color `c` becomes `(u_1, ..., u_k, c)`, with the
//! colors forming the last vertex class. When there are exactly `n` colors,
//! rainbow perfect matchings on one side are perfect matchings on the other.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::model::{ColoredHypergraph, Mode};

use super::Budget;

/// A (k+1)-partite (k+1)-uniform hypergraph whose classes all have size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformHypergraph {
    pub n: usize,
    /// Number of vertex classes; the last one holds the former colors.
    pub classes: usize,
    pub edges: Vec<Vec<u32>>,
}

impl UniformHypergraph {
    pub fn new(n: usize, classes: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        if edges
            .iter()
            .any(|e| e.len() != classes || e.iter().any(|&v| v as usize >= n))
        {
            return Err(Error::InvalidInstance(
                "every edge needs one vertex per class".into(),
            ));
        }
        edges.sort();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance("duplicate edge".into()));
        }
        Ok(Self { n, classes, edges })
    }
}

pub fn reduce_to_uniform(h: &ColoredHypergraph) -> Result<UniformHypergraph> {
    h.require_mode(Mode::Partite)?;
    if h.kappa() != h.n() {
        return Err(Error::Precondition(format!(
            "reduction needs as many colors as part size (kappa={}, n={})",
            h.kappa(),
            h.n()
        )));
    }
    if h.is_restricted() {
        return Err(Error::Precondition(
            "reduction is defined on unrestricted instances".into(),
        ));
    }
    let edges = h
        .edges()
        .iter()
        .map(|e| {
            let mut v = e.verts.clone();
            v.push(e.color);
            v
        })
        .collect();
    UniformHypergraph::new(h.n(), h.k() + 1, edges)
}

struct UniformSearch<'a> {
    u: &'a UniformHypergraph,
    by_first: Vec<Vec<usize>>,
    covered: Vec<Vec<bool>>,
    nodes: u64,
    limit: u64,
}

impl UniformSearch<'_> {
    fn free(&self, e: usize) -> bool {
        self.u.edges[e]
            .iter()
            .enumerate()
            .all(|(c, &v)| !self.covered[c][v as usize])
    }

    fn set(&mut self, e: usize, on: bool) {
        for c in 0..self.u.classes {
            let v = self.u.edges[e][c] as usize;
            self.covered[c][v] = on;
        }
    }

    fn rec(&mut self, pivot: usize) -> Result<u64> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded { limit: self.limit });
        }
        if pivot == self.u.n {
            return Ok(1);
        }
        let mut total = 0;
        for i in 0..self.by_first[pivot].len() {
            let e = self.by_first[pivot][i];
            if self.free(e) {
                self.set(e, true);
                total += self.rec(pivot + 1)?;
                self.set(e, false);
            }
        }
        Ok(total)
    }
}

/// Number of perfect matchings of `u`, by exhaustive search.
pub fn count_uniform_pm(u: &UniformHypergraph, budget: Budget) -> Result<BigUint> {
    let mut by_first = vec![Vec::new(); u.n];
    for (i, e) in u.edges.iter().enumerate() {
        by_first[e[0] as usize].push(i);
    }
    let mut s = UniformSearch {
        u,
        by_first,
        covered: vec![vec![false; u.n]; u.classes],
        nodes: 0,
        limit: budget.max_nodes,
    };
    Ok(BigUint::from(s.rec(0)?))
}
