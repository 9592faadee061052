//! The copy of ER_r inside ER_{r^2} coming from the subfield GF(r) of GF(r^2).
//!
//! A root `b` of the small field's modulus inside the big field gives the
//! embedding `sum c_i x^i -> sum c_i b^i`. Applied coordinatewise it sends
//! points of PG(2,r) to points of PG(2,r^2) and preserves dot products, so
//! the image induces a copy of ER_r. For odd `q` the absolute points of ER_q
//! form an oval, and the absolute points of the copy lie on it.

use thiserror::Error;

use crate::dense::{assemble, y_set, DenseError, DenseSubgraphResult};
use crate::field::{prime_power, Field, FieldElement};
use crate::graph::{bitset, Graph};
use crate::plane::{Oval, Plane, PlaneError};
use crate::polarity_graph::PolarityGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubfieldError {
    #[error("{0} is not an odd prime power with even exponent")]
    NotOddSquare(u64),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error("embedding check failed: {0}")]
    Embedding(String),
}

#[derive(Clone, Debug)]
pub struct SubfieldDense {
    pub result: DenseSubgraphResult,
    /// Degree of `G[Y_S]` when it is regular (loops ignored).
    pub y_degree: Option<usize>,
    /// The big graph, for callers that go on to delete `W`.
    pub graph: PolarityGraph,
    pub plane: Plane,
}

/// Image in `big` of each element of `small`, as a field homomorphism.
pub fn embed_field(small: &Field, big: &Field) -> Option<Vec<FieldElement>> {
    if small.characteristic() != big.characteristic() || !big.degree().is_multiple_of(small.degree()) {
        return None;
    }
    let modulus: Vec<FieldElement> = small
        .modulus()
        .iter()
        .map(|&c| big.from_int(c as i64))
        .collect();
    let root = big.elements().find(|&x| big.eval(&modulus, x).is_zero())?;
    Some(
        small
            .elements()
            .map(|a| {
                let coeffs: Vec<FieldElement> = small
                    .coeffs(a)
                    .iter()
                    .map(|&c| big.from_int(c as i64))
                    .collect();
                big.eval(&coeffs, root)
            })
            .collect(),
    )
}

/// Degree of every vertex of `G[set]` (loops ignored) if they all agree.
pub fn induced_regularity(g: &Graph, set: &[usize]) -> Option<usize> {
    let sub = g.induced(set).without_loops();
    let d = (0..sub.n()).map(|v| sub.degree(v)).collect::<Vec<_>>();
    match d.first() {
        Some(&first) if d.iter().all(|&x| x == first) => Some(first),
        Some(_) => None,
        None => Some(0),
    }
}

/// `S` = absolute points of the embedded ER_{sqrt q}, `W = S ∪ Y_S`.
pub fn subfield_dense(q: u64) -> Result<SubfieldDense, SubfieldError> {
    let (p, k) = prime_power(q).ok_or(SubfieldError::NotOddSquare(q))?;
    if p == 2 || k % 2 != 0 {
        return Err(SubfieldError::NotOddSquare(q));
    }
    let big = Field::new(p, k, None).expect("prime power");
    let small = Field::new(p, k / 2, None).expect("prime power");
    let phi = embed_field(&small, &big)
        .ok_or_else(|| SubfieldError::Embedding("no root of the subfield modulus".into()))?;

    let big_plane = Plane::pg(&big);
    let small_plane = Plane::pg(&small);
    let g = PolarityGraph::orthogonal(&big);
    let h = PolarityGraph::orthogonal(&small);

    let map: Vec<usize> = (0..small_plane.num_points())
        .map(|i| {
            let c = small_plane.coords(i).expect("generated");
            big_plane
                .point_index(c.map(|x| phi[x.index() as usize]))
                .expect("nonzero triple")
        })
        .collect();
    for a in 0..map.len() {
        for b in a..map.len() {
            if h.graph().has_edge(a, b) != g.graph().has_edge(map[a], map[b]) {
                return Err(SubfieldError::Embedding(format!(
                    "adjacency of {a}, {b} not preserved"
                )));
            }
        }
    }

    let oval = Oval::new(&big_plane, g.absolute_points().to_vec())?;
    let s: Vec<usize> = h.absolute_points().iter().map(|&v| map[v]).collect();
    let y = y_set(&g, &oval, &s)?;
    let image = bitset(g.n(), map.iter().copied());
    if let Some(&v) = y.iter().find(|&&v| !image.contains(v)) {
        return Err(SubfieldError::Embedding(format!(
            "secant pole {v} lies outside the subfield copy"
        )));
    }
    let y_degree = induced_regularity(g.graph(), &y);
    let mut result = assemble(&g, &oval, s, y, "subfield");
    result.subfield_map = Some(map);
    Ok(SubfieldDense {
        result,
        y_degree,
        graph: g,
        plane: big_plane,
    })
}
