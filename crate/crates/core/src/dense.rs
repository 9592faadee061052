//! Dense subgraphs anchored on an oval.
//!
//! For `S` a subset of an oval `H` in a polarity graph, `Y_S` is the set of
//! vertices with exactly two neighbors in `S` and `X_S = Y_S \ S`. Every pair
//! of oval points has exactly one common neighbor (the pole of their secant),
//! so `|Y_S| = C(|S|, 2)` and each vertex of `X_S` sends exactly two edges
//! into `S`. The subgraph induced on `W = S ∪ X_S` therefore has at least
//! `2 C(m,2) - 2m` edges, plus whatever `G[X_S]` contributes.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::bitset;
use crate::plane::Oval;
use crate::polarity_graph::{edge_ledger, EdgeLedger, PolarityGraph};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DenseError {
    #[error("m = {m} is outside 1..={max}")]
    BadM { m: usize, max: usize },
    #[error("vertex {0} is not on the oval")]
    NotSubsetOfOval(usize),
    #[error("{needed} subsets exceed the search budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("secant structure violated: {0}")]
    Invariant(String),
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `2 C(m,2) - 2m`, the edge count guaranteed between `S` and `X_S` alone.
pub fn guarantee(m: usize) -> i64 {
    let m = m as i64;
    m * (m - 1) - 2 * m
}

/// The secant poles: for each pair of oval points (by position in the oval
/// list, `i < j`) the unique vertex whose oval neighbors are exactly that
/// pair.
#[derive(Clone, Debug)]
pub struct SecantMap {
    /// `poles[i][j]` for `i < j`; unused entries are `usize::MAX`.
    poles: Vec<Vec<usize>>,
}

impl SecantMap {
    pub fn new(g: &PolarityGraph, oval: &Oval) -> Result<SecantMap, DenseError> {
        let k = oval.len();
        let pts = oval.points();
        let hset = bitset(g.n(), pts.iter().copied());
        let position = |v: usize| pts.iter().position(|&p| p == v).unwrap();
        let mut poles = vec![vec![usize::MAX; k]; k];
        let mut found = 0;
        for v in 0..g.n() {
            let row = g.graph().row(v);
            if row.intersection_count(&hset) == 2 {
                let mut it = row.intersection(&hset);
                let (a, b) = (position(it.next().unwrap()), position(it.next().unwrap()));
                let (i, j) = (a.min(b), a.max(b));
                if poles[i][j] != usize::MAX {
                    return Err(DenseError::Invariant(format!(
                        "oval points {} and {} have two common neighbors",
                        pts[i], pts[j]
                    )));
                }
                poles[i][j] = v;
                found += 1;
            }
        }
        if found != k * (k - 1) / 2 {
            return Err(DenseError::Invariant(format!(
                "{found} secant poles for {k} oval points"
            )));
        }
        Ok(SecantMap { poles })
    }

    /// Pole of the secant through oval positions `i != j`.
    pub fn pole(&self, i: usize, j: usize) -> usize {
        self.poles[i.min(j)][i.max(j)]
    }

    pub fn len(&self) -> usize {
        let k = self.poles.len();
        k * (k - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `((i, j), pole)` entries with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        let k = self.poles.len();
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| ((i, j), self.poles[i][j])))
    }
}

fn check_subset(oval: &Oval, s: &[usize]) -> Result<(), DenseError> {
    match s.iter().find(|&&v| !oval.contains(v)) {
        Some(&v) => Err(DenseError::NotSubsetOfOval(v)),
        None => Ok(()),
    }
}

/// `Y_S`: every vertex with exactly two neighbors in `S` (loops count).
pub fn y_set(g: &PolarityGraph, oval: &Oval, s: &[usize]) -> Result<Vec<usize>, DenseError> {
    check_subset(oval, s)?;
    let sset = bitset(g.n(), s.iter().copied());
    let y: Vec<usize> = (0..g.n())
        .filter(|&v| g.graph().row(v).intersection_count(&sset) == 2)
        .collect();
    let k = sset.count_ones(..);
    if y.len() != k * k.saturating_sub(1) / 2 {
        return Err(DenseError::Invariant(format!(
            "|Y_S| = {} for |S| = {k}",
            y.len()
        )));
    }
    Ok(y)
}

/// `X_S = Y_S \ S`.
pub fn x_set(g: &PolarityGraph, oval: &Oval, s: &[usize]) -> Result<Vec<usize>, DenseError> {
    let y = y_set(g, oval, s)?;
    Ok(y.into_iter().filter(|v| !s.contains(v)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseLedger {
    /// `e(S, X_S)`.
    pub s_to_x: usize,
    /// Edges of `G[X_S]`.
    pub x: EdgeLedger,
    /// Edges of `G[W]`, `W = S ∪ X_S`.
    pub w: EdgeLedger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseSubgraphResult {
    pub q: usize,
    pub m: usize,
    pub method: String,
    pub oval: Vec<usize>,
    pub s: Vec<usize>,
    pub y_s: Vec<usize>,
    pub x_s: Vec<usize>,
    pub w: Vec<usize>,
    pub ledger: DenseLedger,
    pub guarantee: i64,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub trial: Option<u64>,
    /// Vertex map of an embedded subplane copy, when one was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subfield_map: Option<Vec<usize>>,
}

impl DenseSubgraphResult {
    /// `e(G[W])`, loops counted once.
    pub fn edges(&self) -> usize {
        self.ledger.w.edges
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

/// Builds the full result for a given `S` (sorted) and `Y_S`.
pub(crate) fn assemble(
    g: &PolarityGraph,
    oval: &Oval,
    mut s: Vec<usize>,
    mut y: Vec<usize>,
    method: &str,
) -> DenseSubgraphResult {
    s.sort_unstable();
    y.sort_unstable();
    let n = g.n();
    let x: Vec<usize> = y.iter().copied().filter(|v| s.binary_search(v).is_err()).collect();
    let mut w: Vec<usize> = s.iter().chain(&x).copied().collect();
    w.sort_unstable();
    let sset = bitset(n, s.iter().copied());
    let s_to_x = x
        .iter()
        .map(|&v| g.graph().row(v).intersection_count(&sset))
        .sum();
    let ledger = DenseLedger {
        s_to_x,
        x: edge_ledger(g.graph(), &bitset(n, x.iter().copied())),
        w: edge_ledger(g.graph(), &bitset(n, w.iter().copied())),
    };
    let m = s.len();
    DenseSubgraphResult {
        q: g.q(),
        m,
        method: method.to_string(),
        oval: oval.points().to_vec(),
        s,
        y_s: y,
        x_s: x,
        w,
        ledger,
        guarantee: guarantee(m),
        seed: None,
        trials: None,
        trial: None,
        subfield_map: None,
    }
}

/// Fast evaluator reused across many subsets of one oval.
struct Scorer<'a> {
    g: &'a PolarityGraph,
    oval: &'a Oval,
    secants: SecantMap,
}

impl<'a> Scorer<'a> {
    fn new(g: &'a PolarityGraph, oval: &'a Oval) -> Result<Self, DenseError> {
        Ok(Scorer {
            g,
            oval,
            secants: SecantMap::new(g, oval)?,
        })
    }

    /// `Y_S` from oval positions via the secant poles.
    fn y_from_positions(&self, positions: &[usize]) -> Vec<usize> {
        positions
            .iter()
            .tuple_combinations()
            .map(|(&i, &j)| self.secants.pole(i, j))
            .collect()
    }

    /// `e(G[W])` and the sorted `S` for a set of oval positions.
    fn score(&self, positions: &[usize]) -> (usize, Vec<usize>) {
        let pts = self.oval.points();
        let mut s: Vec<usize> = positions.iter().map(|&i| pts[i]).collect();
        s.sort_unstable();
        let n = self.g.n();
        let mut w = FixedBitSet::with_capacity(n);
        w.extend(self.y_from_positions(positions));
        w.extend(s.iter().copied());
        (edge_ledger(self.g.graph(), &w).edges, s)
    }

    fn finish(&self, s: Vec<usize>, method: &str) -> DenseSubgraphResult {
        let pts = self.oval.points();
        let positions: Vec<usize> = s
            .iter()
            .map(|v| pts.iter().position(|p| p == v).unwrap())
            .collect();
        let y = self.y_from_positions(&positions);
        assemble(self.g, self.oval, s, y, method)
    }
}

/// Better candidate first: more edges, then lexicographically smaller `S`,
/// then earlier trial.
fn rank(a: &(usize, Vec<usize>, u64), b: &(usize, Vec<usize>, u64)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
}

fn check_m(oval: &Oval, m: usize) -> Result<(), DenseError> {
    if m == 0 || m > oval.len() {
        return Err(DenseError::BadM { m, max: oval.len() });
    }
    Ok(())
}

/// Uniform `m`-subset of `0..len` by a partial Fisher-Yates shuffle.
pub fn sample_positions(rng: &mut ChaCha8Rng, len: usize, m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    for i in 0..m {
        let j = rng.gen_range(i as u32..len as u32) as usize;
        idx.swap(i, j);
    }
    idx.truncate(m);
    idx
}

/// Generator for trial `t`: stream `t` of ChaCha8 keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws `trials` uniform `m`-subsets of the oval and keeps the one whose
/// `W` spans the most edges.
pub fn sample_dense(
    g: &PolarityGraph,
    oval: &Oval,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<DenseSubgraphResult, DenseError> {
    check_m(oval, m)?;
    if trials == 0 {
        return Err(DenseError::ZeroTrials);
    }
    let scorer = Scorer::new(g, oval)?;
    let best = (0..trials)
        .into_par_iter()
        .map(|t| {
            let positions = sample_positions(&mut trial_rng(seed, t), oval.len(), m);
            let (edges, s) = scorer.score(&positions);
            (edges, s, t)
        })
        .min_by(rank)
        .expect("trials >= 1");
    let mut r = scorer.finish(best.1, "sample");
    r.seed = Some(seed);
    r.trials = Some(trials);
    r.trial = Some(best.2);
    Ok(r)
}

/// Maximizes `e(G[W])` over every `m`-subset of the oval.
pub fn exhaustive_dense(
    g: &PolarityGraph,
    oval: &Oval,
    m: usize,
    budget: u128,
) -> Result<DenseSubgraphResult, DenseError> {
    check_m(oval, m)?;
    let needed = binomial(oval.len() as u64, m as u64);
    if needed > budget {
        return Err(DenseError::BudgetExceeded { needed, budget });
    }
    let scorer = Scorer::new(g, oval)?;
    let combos: Vec<Vec<usize>> = (0..oval.len()).combinations(m).collect();
    let best = combos
        .par_iter()
        .map(|positions| {
            let (edges, s) = scorer.score(positions);
            (edges, s, 0)
        })
        .min_by(rank)
        .expect("at least one subset");
    Ok(scorer.finish(best.1, "exhaustive"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    /// `E[e(G[X_S])]` over uniform `m`-subsets `S`.
    pub value: Ratio<i128>,
    /// Part of `value` contributed by edges of `G[X_H]`.
    pub from_x_h: Ratio<i128>,
    /// `e(G[X_H])`, loops included.
    pub x_h_edges: usize,
    /// `C(q-3, m-4) / C(q+1, m) * e(G[X_H])`.
    pub four_point_bound: Ratio<i128>,
}

impl Expectation {
    pub fn ceil(&self) -> i128 {
        self.value.ceil().to_integer()
    }
}

/// Exact expectation of `e(G[X_S])` for `S` a uniform `m`-subset of the oval.
///
/// Each edge `uv` (or loop) with `u, v` in `Y_H` survives iff the oval
/// neighbors of `u` and of `v` are all chosen while any of `u, v` lying on the
/// oval is not, so its probability is a ratio of binomials.
pub fn exact_expectation(
    g: &PolarityGraph,
    oval: &Oval,
    m: usize,
) -> Result<Expectation, DenseError> {
    if m > oval.len() {
        return Err(DenseError::BadM { m, max: oval.len() });
    }
    let k = oval.len() as u64;
    let secants = SecantMap::new(g, oval)?;
    let n = g.n();
    // oval positions adjacent to each vertex of Y_H
    let mut pair_of = vec![None; n];
    for ((i, j), v) in secants.entries() {
        pair_of[v] = Some((i, j));
    }
    let pos_of = |v: usize| oval.points().iter().position(|&p| p == v);
    let total = binomial(k, m as u64) as i128;
    let mut value = 0i128;
    let mut from_x_h = 0i128;
    let mut x_h_edges = 0usize;
    for u in 0..n {
        let Some((a, b)) = pair_of[u] else { continue };
        for v in g.graph().neighbors(u).filter(|&v| v >= u) {
            let Some((c, d)) = pair_of[v] else { continue };
            let mut need = vec![a, b, c, d];
            need.sort_unstable();
            need.dedup();
            let mut avoid: Vec<usize> = [u, v].iter().filter_map(|&x| pos_of(x)).collect();
            avoid.dedup();
            let in_x_h = avoid.is_empty();
            if in_x_h {
                x_h_edges += 1;
            }
            if avoid.iter().any(|p| need.contains(p)) {
                continue;
            }
            let free = k - need.len() as u64 - avoid.len() as u64;
            let ways = match (m as u64).checked_sub(need.len() as u64) {
                Some(rest) => binomial(free, rest) as i128,
                None => 0,
            };
            value += ways;
            if in_x_h {
                from_x_h += ways;
            }
        }
    }
    let four = if m >= 4 {
        binomial(k - 4, m as u64 - 4) as i128 * x_h_edges as i128
    } else {
        0
    };
    Ok(Expectation {
        value: Ratio::new(value, total),
        from_x_h: Ratio::new(from_x_h, total),
        x_h_edges,
        four_point_bound: Ratio::new(four, total),
    })
}
