//! The communication-game view: a 0/1 matrix with entry (x, y) = 1 exactly
//! when x and y agree in at least r coordinates, and an exact maximum-area
//! all-1 submatrix search.
//!
//! Rows and columns of an all-1 rectangle are precisely an
//! r-cross-intersecting pair, so the rectangle maximum independently
//! cross-checks the search engines. This module deliberately works on raw
//! matrix bits only and never calls into the family machinery.

use crate::domain::SizeVector;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::HashSet;

/// Largest domain the matrix builder accepts.
pub const MATRIX_DOMAIN_CAP: u64 = 512;

/// Largest number of distinct closed column sets the rectangle search will
/// visit before giving up.
pub const CLOSED_SET_BUDGET: usize = 1 << 18;

/// Symmetric bit matrix over the domain, in rank order on both axes.
#[derive(Debug, Clone)]
pub struct CommMatrix {
    p: SizeVector,
    r: u32,
    d: usize,
    words: usize,
    rows: Vec<u64>,
}

impl CommMatrix {
    pub fn p(&self) -> &SizeVector {
        &self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of rows (= columns = domain size).
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn bit(&self, x: usize, y: usize) -> bool {
        assert!(x < self.d && y < self.d, "matrix index out of range");
        self.rows[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// Total number of 1 entries.
    pub fn ones(&self) -> u64 {
        self.rows.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.rows[x * self.words..(x + 1) * self.words]
    }

    /// Plain-text portable bitmap (P1): header, then one line of 0/1
    /// characters per row, in rank order.
    pub fn to_pbm(&self) -> String {
        let mut out = String::with_capacity(16 + self.d * (self.d + 1));
        out.push_str(&format!("P1\n{} {}\n", self.d, self.d));
        for x in 0..self.d {
            for y in 0..self.d {
                out.push(if self.bit(x, y) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the exact agreement matrix; entry (x, y) is 1 iff the points of
/// rank x and rank y agree in at least r coordinates.
pub fn build_matrix(p: &SizeVector, r: u32) -> Result<CommMatrix> {
    let d = match p.domain_size_u64() {
        Some(d) if d <= MATRIX_DOMAIN_CAP => d as usize,
        _ => {
            return Err(Error::limit(format!(
                "matrix build capped at domain size {MATRIX_DOMAIN_CAP}"
            )))
        }
    };
    let coords: Vec<Vec<u32>> = p.points()?.map(|x| x.into_coords()).collect();
    let words = d.div_ceil(64);
    let mut rows = vec![0u64; d * words];
    for x in 0..d {
        for y in x..d {
            let agree = coords[x]
                .iter()
                .zip(&coords[y])
                .filter(|(u, v)| u == v)
                .count() as u32;
            if agree >= r {
                rows[x * words + y / 64] |= 1u64 << (y % 64);
                rows[y * words + x / 64] |= 1u64 << (x % 64);
            }
        }
    }
    Ok(CommMatrix {
        p: p.clone(),
        r,
        d,
        words,
        rows,
    })
}

/// An all-1 submatrix given by row and column rank sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub area: u64,
}

fn covering_rows(m: &CommMatrix, cols: &[u64]) -> Vec<u64> {
    (0..m.d as u64)
        .filter(|&x| {
            m.row(x as usize)
                .iter()
                .zip(cols)
                .all(|(row, need)| need & !row == 0)
        })
        .collect()
}

fn col_list(cols: &[u64], d: usize) -> Vec<u64> {
    (0..d as u64).filter(|&i| cols[i as usize / 64] >> (i % 64) & 1 == 1).collect()
}

/// Exact maximum-area all-1 submatrix.
///
/// Candidate column sets are exactly the intersections of row supports
/// (every inclusion-maximal rectangle has such a column set), enumerated
/// breadth-first from the full column set; for each, the row set is the set
/// of rows covering it. Ties on area resolve to the lexicographically
/// smallest column list.
pub fn max_all_ones_rectangle(m: &CommMatrix) -> Result<Rectangle> {
    let words = m.words;
    let mut top = vec![u64::MAX; words];
    if !m.d.is_multiple_of(64) {
        top[words - 1] = (1u64 << (m.d % 64)) - 1;
    }

    let mut best: Option<Rectangle> = None;
    let consider = |best: &mut Option<Rectangle>, cols: &[u64]| {
        let count = covering_rows(m, cols).len() as u64;
        let area = count * u64::from(cols.iter().map(|w| w.count_ones()).sum::<u32>());
        let better = match best {
            None => true,
            Some(b) => area > b.area || (area == b.area && col_list(cols, m.d) < b.cols),
        };
        if better {
            *best = Some(Rectangle {
                rows: covering_rows(m, cols),
                cols: col_list(cols, m.d),
                area,
            });
        }
    };

    let mut visited: HashSet<Vec<u64>> = HashSet::new();
    visited.insert(top.clone());
    consider(&mut best, &top);
    let mut frontier = vec![top];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(256) {
            let children: Vec<Vec<Vec<u64>>> = chunk
                .par_iter()
                .map(|c| {
                    (0..m.d)
                        .map(|x| {
                            c.iter()
                                .zip(m.row(x))
                                .map(|(a, b)| a & b)
                                .collect::<Vec<u64>>()
                        })
                        .collect()
                })
                .collect();
            for ch in children.into_iter().flatten() {
                if visited.insert(ch.clone()) {
                    next.push(ch);
                }
            }
            if visited.len() > CLOSED_SET_BUDGET {
                return Err(Error::limit(format!(
                    "rectangle search exceeded {CLOSED_SET_BUDGET} closed column sets"
                )));
            }
        }
        // Deterministic selection: row counts in parallel, fold in order.
        let counts: Vec<u64> = next
            .par_iter()
            .map(|c| covering_rows(m, c).len() as u64)
            .collect();
        for (c, count) in next.iter().zip(&counts) {
            let width = u64::from(c.iter().map(|w| w.count_ones()).sum::<u32>());
            let area = count * width;
            let worth = match &best {
                None => true,
                Some(b) => area >= b.area,
            };
            if worth {
                consider(&mut best, c);
            }
        }
        frontier = next;
    }
    Ok(best.expect("at least the full column set is considered"))
}
