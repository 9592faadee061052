//! C4-free graphs obtained by deleting vertices from polarity graphs, with
//! certificates that can be checked independently of how they were built.
//!
//! Deleting `X` from a polarity graph of order `q` leaves
//! `e(G) - e_hat(X) - e(X, X^c)` edges, and since every degree is `q + 1`
//! (loops adding 1) this is exactly `e(G) - (q+1)|X| + e(X)` with `e(X)`
//! counting loops. Both forms are checked against a recount on every run.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::c4::{find_c4, find_c4_pairwise, C4Witness};
use crate::dense::{sample_dense, DenseError, DenseSubgraphResult};
use crate::field::{is_prime, prime_power, FieldError};
use crate::graph::{bitset, Graph};
use crate::io::edge_hash;
use crate::oracle::isqrt;
use crate::plane::{conic_oval, Plane, PlaneError};
use crate::polarity_graph::{edge_ledger, EdgeLedger, PolarityGraph};
use crate::subfield::{subfield_dense, SubfieldError};
use crate::Field;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TuranError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error(transparent)]
    Subfield(#[from] SubfieldError),
    #[error("q = {0} is not a power of 2 with q - 1 prime")]
    NotMersenneSetting(u64),
    #[error("q = {0} is too small for this construction")]
    TooSmall(u64),
    #[error("deletion ledger mismatch: {0}")]
    Ledger(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Corollary,
    Mersenne,
    Subfield,
}

impl Construction {
    pub const ALL: [Construction; 3] = [
        Construction::Corollary,
        Construction::Mersenne,
        Construction::Subfield,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Corollary => "corollary",
            Construction::Mersenne => "mersenne",
            Construction::Subfield => "subfield",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown construction `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PadStrategy {
    /// Repeatedly add the vertex with the most edges into the current set.
    #[default]
    Greedy,
    /// Smallest indices first.
    Lex,
}

impl PadStrategy {
    pub fn name(self) -> &'static str {
        match self {
            PadStrategy::Greedy => "greedy",
            PadStrategy::Lex => "lex",
        }
    }
}

impl FromStr for PadStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(PadStrategy::Greedy),
            "lex" => Ok(PadStrategy::Lex),
            _ => Err(format!("unknown pad strategy `{s}`")),
        }
    }
}

/// Serialized form of a construction run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranCertificate {
    pub construction: String,
    pub q: u64,
    pub n: usize,
    pub edges: usize,
    pub deleted: Vec<usize>,
    pub hash: String,
    pub c4free: bool,
    pub abl_threshold: i64,
    pub beats_abl: bool,
    pub seed: u64,
    pub pad_strategy: String,
}

impl TuranCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Everything a construction produces.
#[derive(Clone, Debug)]
pub struct TuranOutput {
    pub certificate: TuranCertificate,
    /// The retained loopless graph, relabelled to `0..n`.
    pub graph: Graph,
    /// Order of the polarity graph vertices were deleted from.
    pub parent_order: usize,
    pub parent_edges: usize,
    pub deleted_ledger: EdgeLedger,
    pub dense: Option<DenseSubgraphResult>,
}

/// `floor(q^3/2 - q^2)`. For integer `e`, `e > q^3/2 - q^2` iff `e > floor(...)`.
pub fn abl_threshold(q: u64) -> i64 {
    let q = q as i64;
    (q * q * q - 2 * q * q).div_euclid(2)
}

/// `q^3/2 - q^2 + 3q/2`, the main term of the improved lower bound (the
/// `O(sqrt q)` correction is not computed).
pub fn improved_main_term(q: u64) -> f64 {
    let q = q as f64;
    q * q * q / 2.0 - q * q + 1.5 * q
}

/// Largest `m` with `m + C(m,2) <= 2q + 3`, found by search and checked
/// against `floor(sqrt(4q + 25/4) - 1/2)`.
pub fn theorem_m(q: u64) -> u64 {
    let cap = 2 * q + 3;
    let mut m = 0;
    while (m + 1) + (m + 1) * m / 2 <= cap {
        m += 1;
    }
    // sqrt(4q + 25/4) - 1/2 = (sqrt(16q + 25) - 1) / 2
    let closed = (isqrt(16 * q as u128 + 25) as u64 - 1) / 2;
    assert_eq!(m, closed, "closed form for m disagrees at q = {q}");
    m
}

/// Pads `set` to `target` vertices.
pub fn pad(g: &Graph, set: &mut FixedBitSet, target: usize, strategy: PadStrategy) {
    let n = g.n();
    while set.count_ones(..) < target {
        let next = match strategy {
            PadStrategy::Lex => (0..n).find(|&v| !set.contains(v)),
            PadStrategy::Greedy => (0..n)
                .filter(|&v| !set.contains(v))
                .map(|v| (g.row(v).intersection_count(set) + g.has_loop(v) as usize, v))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .map(|(_, v)| v),
        };
        match next {
            Some(v) => set.insert(v),
            None => break,
        }
    }
}

/// Deletes `removed` from `g`, recounts, and checks both deletion identities.
fn delete_and_certify(
    g: &PolarityGraph,
    removed: &FixedBitSet,
    construction: Construction,
    q: u64,
    seed: u64,
    pad_strategy: &str,
) -> Result<TuranOutput, TuranError> {
    let parent_edges = g.edge_count();
    let ledger = edge_ledger(g.graph(), removed);
    let graph = g.loopless().delete_vertices(removed);
    let recount = graph.edge_count();
    let by_cut = parent_edges - ledger.non_loop_edges - ledger.cut;
    let size = removed.count_ones(..);
    let by_degree = (parent_edges + ledger.edges) as i64 - ((g.q() + 1) * size) as i64;
    if recount != by_cut || recount as i64 != by_degree {
        return Err(TuranError::Ledger(format!(
            "recount {recount}, cut form {by_cut}, degree form {by_degree}"
        )));
    }
    let c4free = find_c4(&graph, true).is_none();
    let threshold = abl_threshold(q);
    let certificate = TuranCertificate {
        construction: construction.name().to_string(),
        q,
        n: graph.n(),
        edges: recount,
        deleted: removed.ones().collect(),
        hash: edge_hash(&graph),
        c4free,
        abl_threshold: threshold,
        beats_abl: recount as i64 > threshold,
        seed,
        pad_strategy: pad_strategy.to_string(),
    };
    Ok(TuranOutput {
        certificate,
        graph,
        parent_order: g.q(),
        parent_edges,
        deleted_ledger: ledger,
        dense: None,
    })
}

/// ER_q minus `2q + 3` vertices: a dense oval-anchored `W` padded out.
/// Leaves `q^2 - q - 2` vertices.
pub fn corollary_construct(
    q: u64,
    trials: u64,
    seed: u64,
    pad_strategy: PadStrategy,
) -> Result<TuranOutput, TuranError> {
    let field = Field::with_order(q)?;
    let plane = Plane::pg(&field);
    let oval = conic_oval(&plane)?;
    let g = PolarityGraph::orthogonal(&field);
    let m = (theorem_m(q) as usize).min(oval.len());
    let dense = sample_dense(&g, &oval, m, trials, seed)?;
    let mut removed = bitset(g.n(), dense.w.iter().copied());
    pad(g.graph(), &mut removed, 2 * q as usize + 3, pad_strategy);
    let mut out = delete_and_certify(
        &g,
        &removed,
        Construction::Corollary,
        q,
        seed,
        pad_strategy.name(),
    )?;
    out.dense = Some(dense);
    Ok(out)
}

/// ER_{q-1} minus three absolute points, for `q` a power of 2 with `q - 1`
/// prime. Leaves `q^2 - q - 2` vertices.
pub fn mersenne_construct(q: u64) -> Result<TuranOutput, TuranError> {
    let power_of_two = q >= 2 && q.is_power_of_two();
    if !power_of_two || !is_prime(q - 1) {
        return Err(TuranError::NotMersenneSetting(q));
    }
    let g = PolarityGraph::er(q - 1)?;
    let removed = bitset(g.n(), g.absolute_points().iter().copied().take(3));
    let loopless = g.loopless();
    if let Some(v) = removed.ones().find(|&v| loopless.degree(v) != q as usize - 1) {
        return Err(TuranError::Ledger(format!(
            "absolute point {v} has degree {} in the loopless graph",
            loopless.degree(v)
        )));
    }
    delete_and_certify(&g, &removed, Construction::Mersenne, q, 0, "none")
}

/// ER_q minus `W = S ∪ Y_S` for `S` the absolute points of the embedded
/// ER_{sqrt q}, padded to `2q + 3` vertices. Needs `q` an odd square.
pub fn subfield_construct(q: u64, pad_strategy: PadStrategy) -> Result<TuranOutput, TuranError> {
    let sd = subfield_dense(q)?;
    let g = &sd.graph;
    let mut removed = bitset(g.n(), sd.result.w.iter().copied());
    pad(g.graph(), &mut removed, 2 * q as usize + 3, pad_strategy);
    let mut out = delete_and_certify(
        g,
        &removed,
        Construction::Subfield,
        q,
        0,
        pad_strategy.name(),
    )?;
    out.dense = Some(sd.result);
    Ok(out)
}

/// Runs the named construction with the given parameters.
pub fn construct(
    construction: Construction,
    q: u64,
    trials: u64,
    seed: u64,
    pad_strategy: PadStrategy,
) -> Result<TuranOutput, TuranError> {
    if prime_power(q).is_none() && construction != Construction::Mersenne {
        return Err(FieldError::NotPrimePower(q).into());
    }
    match construction {
        Construction::Corollary => corollary_construct(q, trials, seed, pad_strategy),
        Construction::Mersenne => mersenne_construct(q),
        Construction::Subfield => subfield_construct(q, pad_strategy),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("graph contains a 4-cycle {0:?}")]
    C4Found(C4Witness),
    #[error("{field}: certificate says {claimed}, graph has {actual}")]
    CountMismatch {
        field: &'static str,
        claimed: usize,
        actual: usize,
    },
    #[error("hash mismatch: certificate {claimed}, graph {actual}")]
    HashMismatch { claimed: String, actual: String },
    #[error("certificate is internally inconsistent: {0}")]
    Inconsistent(String),
}

/// Re-checks a certificate against a graph: C4-freeness by pairwise row
/// intersection, then vertex and edge counts, then the edge-list hash.
pub fn verify_certificate(cert: &TuranCertificate, graph: &Graph) -> Result<(), VerifyError> {
    if let Some(w) = find_c4_pairwise(graph, true) {
        return Err(VerifyError::C4Found(w));
    }
    if graph.n() != cert.n {
        return Err(VerifyError::CountMismatch {
            field: "n",
            claimed: cert.n,
            actual: graph.n(),
        });
    }
    let edges = graph.without_loops().edge_count();
    if edges != cert.edges {
        return Err(VerifyError::CountMismatch {
            field: "edges",
            claimed: cert.edges,
            actual: edges,
        });
    }
    let actual = edge_hash(graph);
    if actual != cert.hash {
        return Err(VerifyError::HashMismatch {
            claimed: cert.hash.clone(),
            actual,
        });
    }
    if !cert.c4free {
        return Err(VerifyError::Inconsistent("c4free is false".into()));
    }
    if cert.abl_threshold != abl_threshold(cert.q) {
        return Err(VerifyError::Inconsistent("abl_threshold".into()));
    }
    if cert.beats_abl != (cert.edges as i64 > cert.abl_threshold) {
        return Err(VerifyError::Inconsistent("beats_abl".into()));
    }
    let parent = cert.q * cert.q + cert.q + 1;
    let parent = if cert.construction == Construction::Mersenne.name() {
        let r = cert.q.saturating_sub(1);
        r * r + r + 1
    } else {
        parent
    };
    if cert.n + cert.deleted.len() != parent as usize {
        return Err(VerifyError::Inconsistent(format!(
            "n + |deleted| = {} but the parent graph has {parent} vertices",
            cert.n + cert.deleted.len()
        )));
    }
    Ok(())
}
