//! 4-cycle detection.
//!
//! A graph is C4-free iff no two distinct vertices share two common
//! neighbors. Two independent checkers live here: a pair-marking sweep that
//! runs in `O(sum of deg^2)` and a pairwise row-intersection scan used to
//! cross-check it and to verify certificates.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// A closed walk `a - c1 - b - c2 - a` where `c1 != c2` are common neighbors
/// of `a != b`. With loops ignored the four vertices are distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C4Witness {
    pub cycle: [usize; 4],
}

impl C4Witness {
    /// Checks that the witness closes up in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let c = self.cycle;
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| c[i] != c[j]));
        distinct && (0..4).all(|i| g.has_edge(c[i], c[(i + 1) % 4]))
    }
}

const DENSE_MARK_LIMIT: usize = 4096;

enum PairMarks {
    Dense { n: usize, marks: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
}

impl PairMarks {
    fn new(n: usize) -> Self {
        if n <= DENSE_MARK_LIMIT {
            PairMarks::Dense {
                n,
                marks: vec![0; n * n.saturating_sub(1) / 2],
            }
        } else {
            PairMarks::Sparse(HashMap::new())
        }
    }

    /// Records `mid` as a common neighbor of `a < b`; returns an earlier one.
    fn mark(&mut self, a: usize, b: usize, mid: usize) -> Option<usize> {
        let tag = mid as u32 + 1;
        let slot = match self {
            PairMarks::Dense { n, marks } => {
                // row-major upper triangle
                let idx = a * (2 * *n - a - 1) / 2 + (b - a - 1);
                &mut marks[idx]
            }
            PairMarks::Sparse(map) => map.entry((a as u32, b as u32)).or_insert(0),
        };
        if *slot != 0 && *slot != tag {
            return Some(*slot as usize - 1);
        }
        *slot = tag;
        None
    }
}

/// First 4-cycle found by the pair-marking sweep (middle vertices in index
/// order), or `None` if the graph is C4-free.
///
/// With `ignore_loops` unset a loop makes a vertex its own neighbor, so the
/// returned walk may repeat a vertex; polarity graphs with loops still have
/// at most one common neighbor per pair.
pub fn find_c4(g: &Graph, ignore_loops: bool) -> Option<C4Witness> {
    let n = g.n();
    let mut marks = PairMarks::new(n);
    let mut nbrs = Vec::new();
    for mid in 0..n {
        nbrs.clear();
        nbrs.extend(g.neighbors(mid).filter(|&v| !(ignore_loops && v == mid)));
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if let Some(other) = marks.mark(a, b, mid) {
                    return Some(C4Witness {
                        cycle: [a, other, b, mid],
                    });
                }
            }
        }
    }
    None
}

pub fn is_c4_free(g: &Graph, ignore_loops: bool) -> bool {
    find_c4(g, ignore_loops).is_none()
}

/// Pairwise scan: intersects every pair of adjacency rows.
pub fn find_c4_pairwise(g: &Graph, ignore_loops: bool) -> Option<C4Witness> {
    let n = g.n();
    let rows: Vec<FixedBitSet> = (0..n)
        .map(|v| {
            let mut r = g.row(v).clone();
            if ignore_loops {
                r.set(v, false);
            }
            r
        })
        .collect();
    for a in 0..n {
        for b in a + 1..n {
            let mut common = rows[a].intersection(&rows[b]);
            if let (Some(c1), Some(c2)) = (common.next(), common.next()) {
                return Some(C4Witness {
                    cycle: [a, c1, b, c2],
                });
            }
        }
    }
    None
}
