//! Polarity graphs: `u ~ v` iff `u` lies on the polar line of `v`.
//!
//! Absolute points carry a loop, and a loop adds 1 to the degree, so every
//! vertex of a polarity graph of a plane of order `q` has degree `q + 1`.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;

use crate::field::{Field, FieldError};
use crate::graph::Graph;
use crate::plane::{orthogonal_polarity, Plane, PlaneError, Polarity};

#[derive(Clone, Debug)]
pub struct PolarityGraph {
    q: usize,
    graph: Graph,
    absolute: Vec<usize>,
}

impl PolarityGraph {
    pub fn build(plane: &Plane, polarity: &Polarity) -> Result<PolarityGraph, PlaneError> {
        let n = plane.num_points();
        let q = plane.order();
        let rows: Vec<FixedBitSet> = (0..n)
            .map(|v| plane.incidence(polarity.point_to_line(v)).clone())
            .collect();
        let graph = Graph::from_rows(rows);
        if !graph.is_symmetric() {
            return Err(PlaneError::InvalidPolarity(
                "adjacency is not symmetric".into(),
            ));
        }
        if let Some(v) = (0..n).find(|&v| graph.degree(v) != q + 1) {
            return Err(PlaneError::InvalidPolarity(format!(
                "vertex {v} has degree {} instead of {}",
                graph.degree(v),
                q + 1
            )));
        }
        let absolute = graph.loops().collect();
        Ok(PolarityGraph { q, graph, absolute })
    }

    /// The orthogonal polarity graph of PG(2,q) over `field`.
    pub fn orthogonal(field: &Field) -> PolarityGraph {
        let plane = Plane::pg(field);
        let pi = orthogonal_polarity(&plane).expect("generated plane has coordinates");
        PolarityGraph::build(&plane, &pi).expect("orthogonal polarity is valid")
    }

    /// ER_q with the default field modulus.
    pub fn er(q: u64) -> Result<PolarityGraph, FieldError> {
        Ok(PolarityGraph::orthogonal(&Field::with_order(q)?))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The graph with loops.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn loopless(&self) -> Graph {
        self.graph.without_loops()
    }

    pub fn absolute_points(&self) -> &[usize] {
        &self.absolute
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn loop_count(&self) -> usize {
        self.absolute.len()
    }

    pub fn square_identity(&self) -> SquareIdentityReport {
        square_identity_check(&self.graph, self.q)
    }

    pub fn ledger(&self, set: &FixedBitSet) -> EdgeLedger {
        edge_ledger(&self.graph, set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareViolation {
    pub row: usize,
    pub col: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareIdentityReport {
    pub q: usize,
    pub n: usize,
    pub violation: Option<SquareViolation>,
}

impl SquareIdentityReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `A^2 = J + qI` entrywise over the integers, where `A` is the
/// adjacency matrix with loops on the diagonal.
pub fn square_identity_check(g: &Graph, q: usize) -> SquareIdentityReport {
    let n = g.n();
    let mut violation = None;
    'outer: for i in 0..n {
        for j in i..n {
            let found = g.row(i).intersection_count(g.row(j));
            let expected = if i == j { q + 1 } else { 1 };
            if found != expected {
                violation = Some(SquareViolation {
                    row: i,
                    col: j,
                    expected,
                    found,
                });
                break 'outer;
            }
        }
    }
    SquareIdentityReport { q, n, violation }
}

/// Edge counts for a vertex set `S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeLedger {
    /// `e(S)`: edges inside `S`, loops counted once.
    pub edges: usize,
    /// Edges inside `S` between distinct vertices.
    pub non_loop_edges: usize,
    pub loops: usize,
    /// Edges with exactly one endpoint in `S`.
    pub cut: usize,
}

pub fn edge_ledger(g: &Graph, set: &FixedBitSet) -> EdgeLedger {
    let mut inside = 0;
    let mut cut = 0;
    let mut loops = 0;
    for v in set.ones() {
        let row = g.row(v);
        let within = row.intersection_count(set);
        inside += within;
        cut += row.count_ones(..) - within;
        loops += row.contains(v) as usize;
    }
    let non_loop_edges = (inside - loops) / 2;
    EdgeLedger {
        edges: non_loop_edges + loops,
        non_loop_edges,
        loops,
        cut,
    }
}

/// A number of the form `rational - sqrt_coeff * sqrt(radicand)` with
/// `sqrt_coeff >= 0`, compared against integers exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurdBound {
    pub rational: Ratio<i128>,
    pub sqrt_coeff: Ratio<i128>,
    pub radicand: i128,
}

impl SurdBound {
    /// Sign of `value - self`.
    pub fn cmp_value(&self, value: Ratio<i128>) -> Ordering {
        // value - rational + sqrt_coeff * sqrt(radicand)
        let d = value - self.rational;
        let zero = Ratio::from_integer(0);
        let surd_zero = self.sqrt_coeff == zero || self.radicand == 0;
        if d >= zero {
            if d == zero && surd_zero {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        } else {
            let lhs = self.sqrt_coeff * self.sqrt_coeff * Ratio::from_integer(self.radicand);
            lhs.cmp(&(d * d))
        }
    }

    /// `value >= self`, decided exactly.
    pub fn admits(&self, value: i128) -> bool {
        self.cmp_value(Ratio::from_integer(value)) != Ordering::Less
    }

    /// Smallest integer not below the bound.
    pub fn ceil(&self) -> i128 {
        let mut c = self.approx().ceil() as i128;
        while self.admits(c - 1) {
            c -= 1;
        }
        while !self.admits(c) {
            c += 1;
        }
        c
    }

    pub fn approx(&self) -> f64 {
        let f = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
        f(self.rational) - f(self.sqrt_coeff) * (self.radicand as f64).sqrt()
    }
}

/// `(q+1) s^2 / (2 (q^2+q+1)) - sqrt(q) s / 2`, a lower bound on `e(S)` for
/// any `s`-set in a polarity graph of order `q`.
pub fn mixing_lower_bound(q: u64, s: u64) -> SurdBound {
    let (q, s) = (q as i128, s as i128);
    let n = q * q + q + 1;
    SurdBound {
        rational: Ratio::new((q + 1) * s * s, 2 * n),
        sqrt_coeff: Ratio::new(s, 2),
        radicand: q,
    }
}
