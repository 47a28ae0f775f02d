//! Backtracking over rainbow perfect matchings.
//!
//! The pivot is the lowest uncovered vertex of the pivot class (part 0 in
//! partite mode, every vertex in graph mode). Every node checks that each
//! uncovered vertex still has a live edge and that enough unused colors
//! remain on live edges to finish.

use crate::error::{Error, Result};
use crate::model::{ColoredHypergraph, Matching, Mode};

use super::Budget;

pub(crate) struct PmSearch<'a> {
    h: &'a ColoredHypergraph,
    edge_verts: Vec<Vec<usize>>,
    edge_colors: Vec<usize>,
    /// Edges incident to each pivot vertex (empty for non-pivots).
    incident: Vec<Vec<usize>>,
    pivots: Vec<usize>,
    active: Vec<bool>,
    covered: Vec<bool>,
    color_used: Vec<bool>,
    /// Edges in the perfect matching.
    target_size: usize,
    chosen: Vec<usize>,
    nodes: u64,
    limit: u64,
    // scratch
    live_mark: Vec<bool>,
    color_mark: Vec<bool>,
}

impl<'a> PmSearch<'a> {
    /// Returns `None` when the active vertex set admits no perfect matching
    /// for counting reasons alone (unequal parts, odd order).
    pub(crate) fn new(h: &'a ColoredHypergraph, budget: Budget) -> Option<Self> {
        let active = h.active_mask();
        let (pivots, target_size): (Vec<usize>, usize) = match h.mode() {
            Mode::Partite => {
                let n = h.n();
                let sizes: Vec<usize> = (0..h.k())
                    .map(|p| active[p * n..(p + 1) * n].iter().filter(|&&a| a).count())
                    .collect();
                if sizes.iter().any(|&s| s != sizes[0]) {
                    return None;
                }
                ((0..n).filter(|&i| active[i]).collect(), sizes[0])
            }
            Mode::Graph => {
                let live = active.iter().filter(|&&a| a).count();
                if live % 2 == 1 {
                    return None;
                }
                ((0..h.n()).filter(|&i| active[i]).collect(), live / 2)
            }
        };

        let slots = h.vertex_slots();
        let mut incident = vec![Vec::new(); slots];
        let mut edge_verts = Vec::with_capacity(h.edge_count());
        let mut edge_colors = Vec::with_capacity(h.edge_count());
        for e in h.edges() {
            let ids: Vec<usize> = h.edge_vertex_ids(e).collect();
            if ids.iter().any(|&id| !active[id]) || h.removed_colors().contains(&e.color) {
                continue;
            }
            let idx = edge_verts.len();
            for &id in &ids {
                if h.mode() == Mode::Graph || id < h.n() {
                    incident[id].push(idx);
                }
            }
            edge_verts.push(ids);
            edge_colors.push(e.color as usize);
        }

        Some(Self {
            h,
            edge_verts,
            edge_colors,
            incident,
            pivots,
            covered: vec![false; slots],
            color_used: vec![false; h.kappa()],
            live_mark: vec![false; slots],
            color_mark: vec![false; h.kappa()],
            active,
            target_size,
            chosen: Vec::with_capacity(target_size),
            nodes: 0,
            limit: budget.max_nodes,
        })
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn edge_free(&self, e: usize) -> bool {
        !self.color_used[self.edge_colors[e]]
            && self.edge_verts[e].iter().all(|&v| !self.covered[v])
    }

    /// Necessary conditions for completing the current partial matching.
    fn feasible(&mut self) -> bool {
        let remaining = self.target_size - self.chosen.len();
        if remaining == 0 {
            return true;
        }
        self.live_mark.iter_mut().for_each(|m| *m = false);
        self.color_mark.iter_mut().for_each(|m| *m = false);
        let mut colors_live = 0;
        for e in 0..self.edge_verts.len() {
            if self.edge_free(e) {
                for &v in &self.edge_verts[e] {
                    self.live_mark[v] = true;
                }
                let c = self.edge_colors[e];
                if !self.color_mark[c] {
                    self.color_mark[c] = true;
                    colors_live += 1;
                }
            }
        }
        if colors_live < remaining {
            return false;
        }
        (0..self.covered.len()).all(|v| !self.active[v] || self.covered[v] || self.live_mark[v])
    }

    fn next_pivot(&self) -> Option<usize> {
        self.pivots.iter().copied().find(|&v| !self.covered[v])
    }

    fn apply(&mut self, e: usize, on: bool) {
        for i in 0..self.edge_verts[e].len() {
            let v = self.edge_verts[e][i];
            self.covered[v] = on;
        }
        self.color_used[self.edge_colors[e]] = on;
        if on {
            self.chosen.push(e);
        } else {
            self.chosen.pop();
        }
    }

    fn find_rec(&mut self) -> Result<bool> {
        self.tick()?;
        if self.chosen.len() == self.target_size {
            return Ok(true);
        }
        if !self.feasible() {
            return Ok(false);
        }
        let Some(pivot) = self.next_pivot() else {
            return Ok(false);
        };
        for i in 0..self.incident[pivot].len() {
            let e = self.incident[pivot][i];
            if !self.edge_free(e) {
                continue;
            }
            self.apply(e, true);
            if self.find_rec()? {
                return Ok(true);
            }
            self.apply(e, false);
        }
        Ok(false)
    }

    fn count_rec(&mut self) -> Result<u64> {
        self.tick()?;
        if self.chosen.len() == self.target_size {
            return Ok(1);
        }
        if !self.feasible() {
            return Ok(0);
        }
        let Some(pivot) = self.next_pivot() else {
            return Ok(0);
        };
        let mut total = 0;
        for i in 0..self.incident[pivot].len() {
            let e = self.incident[pivot][i];
            if !self.edge_free(e) {
                continue;
            }
            self.apply(e, true);
            total += self.count_rec()?;
            self.apply(e, false);
        }
        Ok(total)
    }

    pub(crate) fn find(&mut self) -> Result<Option<Matching>> {
        if self.find_rec()? {
            let h = self.h;
            let edges = self
                .chosen
                .iter()
                .map(|&e| {
                    let ids = &self.edge_verts[e];
                    let verts: Vec<u32> = match h.mode() {
                        Mode::Partite => ids.iter().map(|&id| (id % h.n()) as u32).collect(),
                        Mode::Graph => ids.iter().map(|&id| id as u32).collect(),
                    };
                    h.find_edge(&verts).expect("chosen edge exists").clone()
                })
                .collect();
            Ok(Some(Matching::new(edges)))
        } else {
            Ok(None)
        }
    }

    pub(crate) fn count(&mut self) -> Result<u64> {
        self.count_rec()
    }
}
