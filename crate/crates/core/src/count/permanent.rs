//! Rainbow perfect matchings of a colored bipartite graph by inclusion-exclusion
//! over color sets.
//!
//! With `r` rows, `r` columns and exactly `r` usable colors, a perfect
//! matching is rainbow iff its color set is the whole palette, so
//!
//! ```text
//! count = sum over D subset of colors of (-1)^(r - |D|) * perm(A_D)
//! ```
//!
//! where `A_D` keeps the edges whose color lies in `D`. Each permanent is a
//! DP over column subsets.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::model::ColoredHypergraph;

use super::Budget;

/// Permanent of a 0/1 matrix given as row bitmasks over `r` columns.
pub(crate) fn permanent_01(rows: &[u32], dp: &mut Vec<u128>) -> u128 {
    let r = rows.len();
    let full = 1usize << r;
    dp.clear();
    dp.resize(full, 0);
    dp[0] = 1;
    for mask in 0..full {
        let ways = dp[mask];
        if ways == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == r {
            continue;
        }
        let mut open = rows[row] as usize & !mask & (full - 1);
        while open != 0 {
            let bit = open & open.wrapping_neg();
            dp[mask | bit] += ways;
            open ^= bit;
        }
    }
    dp[full - 1]
}

pub(crate) fn count_by_color_inclusion_exclusion(
    h: &ColoredHypergraph,
    budget: Budget,
) -> Result<(BigUint, u64)> {
    if h.k() != 2 {
        return Err(Error::MethodInapplicable(format!(
            "inclusion-exclusion needs k = 2, got k = {}",
            h.k()
        )));
    }
    let n = h.n();
    let active = h.active_mask();
    let rows: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| active[n + j]).collect();
    let palette = h.available_colors();
    if rows.len() != cols.len() {
        return Ok((BigUint::from(0u32), 0));
    }
    let r = rows.len();
    if palette.len() != r {
        return Err(Error::MethodInapplicable(format!(
            "inclusion-exclusion needs as many colors as rows ({r}), got {}",
            palette.len()
        )));
    }
    if r > 24 {
        return Err(Error::BudgetExceeded {
            limit: budget.max_nodes,
        });
    }
    let work = (1u128 << (2 * r)) * r.max(1) as u128;
    if work > budget.max_nodes as u128 {
        return Err(Error::BudgetExceeded {
            limit: budget.max_nodes,
        });
    }

    let mut row_of = vec![usize::MAX; n];
    for (i, &v) in rows.iter().enumerate() {
        row_of[v] = i;
    }
    let mut col_of = vec![usize::MAX; n];
    for (j, &v) in cols.iter().enumerate() {
        col_of[v] = j;
    }
    let mut palette_bit = vec![0u32; h.kappa()];
    for (b, &c) in palette.iter().enumerate() {
        palette_bit[c as usize] = 1 << b;
    }
    // color_bits[i][j]: palette bit of edge (row i, col j), or 0 if absent
    let mut color_bits = vec![vec![0u32; r]; r];
    for e in h.edges() {
        let (i, j) = (row_of[e.verts[0] as usize], col_of[e.verts[1] as usize]);
        if i != usize::MAX && j != usize::MAX {
            color_bits[i][j] = palette_bit[e.color as usize];
        }
    }

    let mut total = BigInt::from(0);
    let mut dp = Vec::new();
    let mut masks = vec![0u32; r];
    for d in 0u32..(1u32 << r) {
        for (i, m) in masks.iter_mut().enumerate() {
            *m = color_bits[i]
                .iter()
                .enumerate()
                .filter(|&(_, &cb)| cb & d != 0)
                .fold(0, |acc, (j, _)| acc | (1 << j));
        }
        let perm = permanent_01(&masks, &mut dp);
        if perm == 0 {
            continue;
        }
        if (r - d.count_ones() as usize).is_multiple_of(2) {
            total += BigInt::from(perm);
        } else {
            total -= BigInt::from(perm);
        }
    }
    debug_assert!(!total.is_negative());
    Ok((total.to_biguint().expect("nonnegative count"), work as u64))
}
