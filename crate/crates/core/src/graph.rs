//! Undirected graphs on `0..n` stored as one adjacency bitset per vertex.
//!
//! A loop at `v` is the bit `v` in row `v`. Degrees count a loop once.

use fixedbitset::FixedBitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from precomputed rows. Rows must be symmetric.
    pub(crate) fn from_rows(rows: Vec<FixedBitSet>) -> Self {
        Graph { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.rows[v].contains(v)
    }

    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    /// Neighbors of `v` in increasing order; includes `v` itself if it has a loop.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].ones()
    }

    /// Degree with a loop adding 1.
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(|&v| self.has_loop(v))
    }

    pub fn loop_count(&self) -> usize {
        self.loops().count()
    }

    /// Number of edges between distinct vertices.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.rows.iter().map(|r| r.count_ones(..)).sum();
        (total - self.loop_count()) / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.rows[u]
                .ones()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| self.rows[u].ones().all(|v| self.rows[v].contains(u)))
    }

    pub fn without_loops(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..g.n() {
            g.rows[v].set(v, false);
        }
        g
    }

    /// Subgraph induced on the vertices *not* in `removed`, relabelled to
    /// `0..n'` in increasing order of the original index.
    pub fn delete_vertices(&self, removed: &FixedBitSet) -> Graph {
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// Subgraph induced on `keep` (in the given order), relabelled to `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn vertex_set(&self, vertices: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.n());
        set.extend(vertices);
        set
    }
}

/// Builds a bitset over `0..n` from the given members.
pub fn bitset(n: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(n);
    set.extend(members);
    set
}
