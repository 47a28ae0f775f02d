//! Exhaustive rainbow Hamilton cycle search.
//!
//! Paths grow from vertex 0. A node is pruned when fewer unused colors remain
//! than edges still needed, when some unvisited vertex has fewer than two
//! usable neighbors among the unvisited vertices and the two path ends, or
//! when the unvisited vertices are not all reachable from the path end.

use crate::count::Budget;
use crate::error::{Error, Result};

use super::{ColoredMultigraph, HamiltonCycle};

/// Largest order the bitmask search supports.
pub const MAX_HC_ORDER: usize = 64;

struct HcSearch<'a> {
    g: &'a ColoredMultigraph,
    /// `(neighbor, edge id, color)` per vertex.
    adj: Vec<Vec<(u32, usize, u32)>>,
    visited: u64,
    color_used: Vec<bool>,
    colors_free: usize,
    path: Vec<u32>,
    path_edges: Vec<usize>,
    nodes: u64,
    limit: u64,
    stack: Vec<u32>,
}

impl HcSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn feasible(&mut self) -> bool {
        let n = self.n();
        let needed = n - self.path_edges.len();
        if self.colors_free < needed {
            return false;
        }
        let end = *self.path.last().expect("path starts at 0");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let unvisited = full & !self.visited;
        if unvisited == 0 {
            return true;
        }
        let allowed = unvisited | (1 << end) | 1;
        if n >= 3 {
            let mut rest = unvisited;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut nbrs = 0u64;
                for &(w, _, c) in &self.adj[v] {
                    if !self.color_used[c as usize] && allowed >> w & 1 == 1 {
                        nbrs |= 1 << w;
                    }
                }
                if nbrs.count_ones() < 2 {
                    return false;
                }
            }
        }
        // reachability of every unvisited vertex from the path end
        let mut reached = 1u64 << end;
        self.stack.clear();
        self.stack.push(end);
        while let Some(v) = self.stack.pop() {
            for &(w, _, c) in &self.adj[v as usize] {
                let bit = 1u64 << w;
                if unvisited & bit != 0 && reached & bit == 0 && !self.color_used[c as usize] {
                    reached |= bit;
                    self.stack.push(w);
                }
            }
        }
        unvisited & !reached == 0
    }

    fn push(&mut self, w: u32, e: usize, c: u32) {
        self.visited |= 1 << w;
        self.color_used[c as usize] = true;
        self.colors_free -= 1;
        self.path.push(w);
        self.path_edges.push(e);
    }

    fn pop(&mut self, c: u32) {
        let w = self.path.pop().expect("nonempty");
        self.path_edges.pop();
        self.visited &= !(1 << w);
        self.color_used[c as usize] = false;
        self.colors_free += 1;
    }

    fn rec(&mut self) -> Result<bool> {
        self.tick()?;
        let end = *self.path.last().expect("path starts at 0") as usize;
        if self.path.len() == self.n() {
            for i in 0..self.adj[end].len() {
                let (w, e, c) = self.adj[end][i];
                if w == 0 && !self.color_used[c as usize] && e != self.path_edges[0] {
                    self.path_edges.push(e);
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if !self.feasible() {
            return Ok(false);
        }
        for i in 0..self.adj[end].len() {
            let (w, e, c) = self.adj[end][i];
            if self.visited >> w & 1 == 1 || self.color_used[c as usize] {
                continue;
            }
            self.push(w, e, c);
            if self.rec()? {
                return Ok(true);
            }
            self.pop(c);
        }
        Ok(false)
    }
}

/// A rainbow Hamilton cycle of `g`, or `None` after exhaustive search.
///
/// On two vertices a Hamilton cycle is a pair of parallel edges.
pub fn find_rainbow_hc(g: &ColoredMultigraph, budget: Budget) -> Result<Option<HamiltonCycle>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition(format!(
            "Hamilton cycles need at least two vertices (n={n})"
        )));
    }
    if n > MAX_HC_ORDER {
        return Err(Error::OutOfRange(format!(
            "Hamilton cycle search supports n <= {MAX_HC_ORDER} (n={n})"
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u as usize].push((e.v, i, e.color));
        adj[e.v as usize].push((e.u, i, e.color));
    }
    let mut s = HcSearch {
        g,
        adj,
        visited: 1,
        color_used: vec![false; g.kappa()],
        colors_free: g.kappa(),
        path: vec![0],
        path_edges: Vec::with_capacity(n),
        nodes: 0,
        limit: budget.max_nodes,
        stack: Vec::new(),
    };
    if !s.rec()? {
        return Ok(None);
    }
    let colors = s.path_edges.iter().map(|&e| g.edges()[e].color).collect();
    Ok(Some(HamiltonCycle {
        vertices: s.path,
        edges: s.path_edges,
        colors,
    }))
}
