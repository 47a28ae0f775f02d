//! Latin transversals of partially filled `n x n` matrices.
//!
//! A transversal picks one nonzero cell per row and per column with pairwise
//! distinct values. With `n` cells and values in `[1, n]`, distinct values
//! cover every symbol, so this is the rainbow perfect matching problem on the
//! bipartite graph rows x columns colored by cell value.

use crate::error::{Error, Result};
use crate::model::{ColoredEdge, ColoredHypergraph};

use super::{find_rainbow_pm, Budget};

/// Cells `(row, col)` of a latin transversal (0-based, one per row in row
/// order), or `None` when the matrix has none. Zero entries are empty cells.
pub fn latin_transversal(a: &[Vec<u32>], budget: Budget) -> Result<Option<Vec<(usize, usize)>>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidInstance("empty matrix".into()));
    }
    if let Some(row) = a.iter().position(|r| r.len() != n) {
        return Err(Error::InvalidInstance(format!(
            "matrix is not square: row {} has {} entries, expected {n}",
            row + 1,
            a[row].len()
        )));
    }
    let mut edges = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x as usize > n {
                return Err(Error::OutOfRange(format!(
                    "entry {x} at ({}, {}) exceeds n={n}",
                    i + 1,
                    j + 1
                )));
            }
            if x != 0 {
                edges.push(ColoredEdge::new(vec![i as u32, j as u32], x - 1));
            }
        }
    }
    let h = ColoredHypergraph::partite(n, 2, n, edges)?;
    Ok(find_rainbow_pm(&h, budget)?.map(|m| {
        m.edges
            .iter()
            .map(|e| (e.verts[0] as usize, e.verts[1] as usize))
            .collect()
    }))
}

/// Parse a headerless CSV of nonnegative integers.
pub fn parse_matrix_csv(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("row {}: {f:?} is not an entry", r + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}
