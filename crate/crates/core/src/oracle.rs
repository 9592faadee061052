//! Exact `ex(n, C4)` for small `n` by branch and bound over edges.
//!
//! Edges are decided in the order `(0,1), (0,2), (1,2), (0,3), ...` so each
//! prefix of vertices is settled before the next vertex is touched. A branch
//! is cut when even accepting every undecided edge cannot beat the incumbent,
//! and the search stops as soon as the incumbent reaches the
//! Kővári–Sós–Turán ceiling `floor(n^{3/2}/2 + n/2)`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_MAX_N: usize = 9;
/// Hard limit of the bitmask representation.
pub const ABSOLUTE_MAX_N: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} exceeds the oracle limit {max}")]
    TooLarge { n: usize, max: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub n: usize,
    pub ex: usize,
    /// Edges of one extremal graph.
    pub witness: Vec<(usize, usize)>,
}

impl OracleResult {
    pub fn witness_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.witness.iter().copied())
    }
}

/// `floor(n^{3/2}/2 + n/2)`, computed exactly.
pub fn kst_ceiling(n: usize) -> usize {
    // largest e with 2e <= n^{3/2} + n, i.e. (2e - n)^2 <= n^3 when 2e >= n
    let n = n as u128;
    let mut e = (n + isqrt(n * n * n)) / 2;
    while 2 * (e + 1) <= n || (2 * (e + 1) - n).pow(2) <= n * n * n {
        e += 1;
    }
    while 2 * e > n && (2 * e - n).pow(2) > n * n * n {
        e -= 1;
    }
    e as usize
}

pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

struct Search {
    edges: Vec<(usize, usize)>,
    adj: Vec<u32>,
    chosen: Vec<bool>,
    count: usize,
    best: usize,
    best_set: Vec<bool>,
    ceiling: usize,
}

impl Search {
    /// Adding `ij` closes a 4-cycle iff some neighbor `x` of `i` is adjacent
    /// to a neighbor of `j` other than `i`.
    fn closes_c4(&self, i: usize, j: usize) -> bool {
        let nj = self.adj[j] & !(1 << i);
        let mut ni = self.adj[i] & !(1 << j);
        while ni != 0 {
            let x = ni.trailing_zeros() as usize;
            ni &= ni - 1;
            if self.adj[x] & nj != 0 {
                return true;
            }
        }
        false
    }

    fn run(&mut self, at: usize) {
        if self.best >= self.ceiling {
            return;
        }
        if self.count + (self.edges.len() - at) <= self.best {
            return;
        }
        if at == self.edges.len() {
            self.best = self.count;
            self.best_set.clone_from(&self.chosen);
            return;
        }
        let (i, j) = self.edges[at];
        if !self.closes_c4(i, j) {
            self.adj[i] |= 1 << j;
            self.adj[j] |= 1 << i;
            self.chosen[at] = true;
            self.count += 1;
            self.run(at + 1);
            self.count -= 1;
            self.chosen[at] = false;
            self.adj[i] &= !(1 << j);
            self.adj[j] &= !(1 << i);
        }
        // relabelling makes (0,1) an edge of some extremal graph
        if at > 0 {
            self.run(at + 1);
        }
    }
}

/// Exact `ex(n, C4)` with one extremal witness; `n` must not exceed `max_n`.
pub fn oracle_ex(n: usize, max_n: usize) -> Result<OracleResult, OracleError> {
    let max = max_n.min(ABSOLUTE_MAX_N);
    if n > max {
        return Err(OracleError::TooLarge { n, max });
    }
    let edges: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut search = Search {
        adj: vec![0; n],
        chosen: vec![false; edges.len()],
        count: 0,
        best: 0,
        best_set: vec![false; edges.len()],
        ceiling: kst_ceiling(n),
        edges,
    };
    if !search.edges.is_empty() {
        search.run(0);
    }
    let witness = search
        .edges
        .iter()
        .zip(&search.best_set)
        .filter(|(_, &on)| on)
        .map(|(&e, _)| e)
        .collect();
    Ok(OracleResult {
        n,
        ex: search.best,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c4::is_c4_free;

    #[test]
    fn tiny_values() {
        assert_eq!(oracle_ex(0, 9).unwrap().ex, 0);
        assert_eq!(oracle_ex(1, 9).unwrap().ex, 0);
        assert_eq!(oracle_ex(2, 9).unwrap().ex, 1);
        assert_eq!(oracle_ex(3, 9).unwrap().ex, 3);
    }

    #[test]
    fn witness_is_c4_free_with_ex_edges() {
        for n in 0..=7 {
            let r = oracle_ex(n, 9).unwrap();
            let g = r.witness_graph();
            assert_eq!(g.edge_count(), r.ex);
            assert!(is_c4_free(&g, true));
        }
    }

    #[test]
    fn too_large() {
        assert_eq!(
            oracle_ex(10, 9).unwrap_err(),
            OracleError::TooLarge { n: 10, max: 9 }
        );
    }

    #[test]
    fn kst_values() {
        // floor(n^1.5/2 + n/2)
        for n in 0..200usize {
            let exact = ((n as f64).powf(1.5) / 2.0 + n as f64 / 2.0).floor() as usize;
            assert_eq!(kst_ceiling(n), exact, "n = {n}");
        }
    }
}
