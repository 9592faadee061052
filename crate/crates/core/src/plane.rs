//! Finite projective planes, polarities, and arcs.
//!
//! Points of PG(2,q) are homogeneous triples whose first nonzero coordinate
//! is 1, enumerated as all `(1,y,z)` (y major, z minor, both in field order),
//! then `(0,1,z)`, then `(0,0,1)`. Lines use the same triples: the line with
//! coordinates `l` holds the points `P` with `P . l = 0`.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, FieldElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlaneError {
    #[error("axiom violated for ({0}, {1}): {2}")]
    AxiomViolation(usize, usize, String),
    #[error("line {line} has {found} points, expected {expected}")]
    RaggedLine {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("parse error on row {row}: {reason}")]
    Parse { row: usize, reason: String },
    #[error("plane has no coordinates (loaded from file); supply an explicit polarity")]
    NoCoordinates,
    #[error("invalid polarity: {0}")]
    InvalidPolarity(String),
    #[error("point set is not an arc: line {line} meets it in {count} points")]
    NotAnArc { line: usize, count: usize },
    #[error("expected {expected} points in an oval, got {found}")]
    OvalSize { expected: usize, found: usize },
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
}

/// Homogeneous coordinates of a point or line.
pub type Triple = [FieldElement; 3];

#[derive(Clone, Debug)]
pub enum PlaneSource {
    Generated { field: Field, coords: Vec<Triple> },
    Loaded,
}

#[derive(Clone, Debug)]
pub struct Plane {
    order: usize,
    lines: Vec<Vec<usize>>,
    incidence: Vec<FixedBitSet>,
    point_lines: Vec<Vec<usize>>,
    source: PlaneSource,
}

/// Canonical form: scale so the first nonzero coordinate is 1.
pub fn canonicalize(f: &Field, v: Triple) -> Option<Triple> {
    let lead = v.iter().copied().find(|c| !c.is_zero())?;
    let inv = f.inv(lead)?;
    Some(v.map(|c| f.mul(c, inv)))
}

fn dot(f: &Field, a: &Triple, b: &Triple) -> FieldElement {
    (0..3).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

impl Plane {
    /// PG(2,q) over `field`.
    pub fn pg(field: &Field) -> Plane {
        let q = field.order() as usize;
        let mut coords: Vec<Triple> = Vec::with_capacity(q * q + q + 1);
        for y in field.elements() {
            for z in field.elements() {
                coords.push([FieldElement::ONE, y, z]);
            }
        }
        for z in field.elements() {
            coords.push([FieldElement::ZERO, FieldElement::ONE, z]);
        }
        coords.push([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);

        let lines: Vec<Vec<usize>> = coords
            .par_iter()
            .map(|l| {
                coords
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| dot(field, p, l).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Plane::from_lines(
            q,
            lines,
            PlaneSource::Generated {
                field: field.clone(),
                coords,
            },
        )
    }

    fn from_lines(order: usize, lines: Vec<Vec<usize>>, source: PlaneSource) -> Plane {
        let n = lines.len();
        let mut incidence = Vec::with_capacity(n);
        let mut point_lines = vec![Vec::new(); n];
        for (j, line) in lines.iter().enumerate() {
            let mut row = FixedBitSet::with_capacity(n);
            for &p in line {
                row.insert(p);
                point_lines[p].push(j);
            }
            incidence.push(row);
        }
        Plane {
            order,
            lines,
            incidence,
            point_lines,
            source,
        }
    }

    /// Parses a plane file: an optional `order q` row followed by one line
    /// per row as space-separated 0-based point indices. The plane axioms
    /// are checked before returning.
    pub fn load(text: &str) -> Result<Plane, PlaneError> {
        let mut declared = None;
        let mut lines: Vec<Vec<usize>> = Vec::new();
        for (row, raw) in text.lines().enumerate() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| PlaneError::Parse { row: row + 1, reason };
            if let Some(rest) = t.strip_prefix("order") {
                let q = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| parse_err(e.to_string()))?;
                declared = Some(q);
                continue;
            }
            let mut pts = t
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|e| parse_err(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            pts.sort_unstable();
            lines.push(pts);
        }
        let first = lines.first().ok_or(PlaneError::Parse {
            row: 0,
            reason: "no lines".into(),
        })?;
        if first.len() < 3 {
            return Err(PlaneError::RaggedLine {
                line: 0,
                expected: 3,
                found: first.len(),
            });
        }
        let q = declared.unwrap_or(first.len() - 1);
        let n = q * q + q + 1;
        for (j, line) in lines.iter().enumerate() {
            if line.len() != q + 1 {
                return Err(PlaneError::RaggedLine {
                    line: j,
                    expected: q + 1,
                    found: line.len(),
                });
            }
            if let Some(&bad) = line.iter().find(|&&p| p >= n) {
                return Err(PlaneError::PointOutOfRange(bad));
            }
            if let Some(w) = line.windows(2).find(|w| w[0] == w[1]) {
                return Err(PlaneError::AxiomViolation(
                    j,
                    w[0],
                    "point listed twice on a line".into(),
                ));
            }
        }
        if lines.len() != n {
            return Err(PlaneError::Parse {
                row: 0,
                reason: format!("order {q} needs {n} lines, found {}", lines.len()),
            });
        }
        let plane = Plane::from_lines(q, lines, PlaneSource::Loaded);
        plane.check_axioms()?;
        Ok(plane)
    }

    /// Plane file text: `order q`, then one row per line.
    pub fn export(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for line in &self.lines {
            let row: Vec<String> = line.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Verifies the projective-plane axioms; reports the first offending pair.
    pub fn check_axioms(&self) -> Result<(), PlaneError> {
        let n = self.num_points();
        // points: every pair on exactly one line
        let mut seen = vec![0u8; n * n];
        for line in &self.lines {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    let slot = &mut seen[a * n + b];
                    *slot += 1;
                    if *slot > 1 {
                        return Err(PlaneError::AxiomViolation(
                            a,
                            b,
                            "points share more than one line".into(),
                        ));
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if seen[a * n + b] == 0 {
                    return Err(PlaneError::AxiomViolation(
                        a,
                        b,
                        "points share no line".into(),
                    ));
                }
            }
        }
        // lines: every pair meets in exactly one point
        for i in 0..n {
            for j in i + 1..n {
                let common = self.incidence[i].intersection_count(&self.incidence[j]);
                if common != 1 {
                    return Err(PlaneError::AxiomViolation(
                        i,
                        j,
                        format!("lines meet in {common} points"),
                    ));
                }
            }
        }
        if self.find_quadrilateral().is_none() {
            return Err(PlaneError::AxiomViolation(
                0,
                0,
                "no four points in general position".into(),
            ));
        }
        Ok(())
    }

    /// Four points, no three collinear.
    pub fn find_quadrilateral(&self) -> Option<[usize; 4]> {
        let n = self.num_points();
        let (a, b) = (0, 1);
        let ab = self.line_through(a, b)?;
        let c = (0..n).find(|&c| !self.incidence[ab].contains(c))?;
        let (ac, bc) = (self.line_through(a, c)?, self.line_through(b, c)?);
        let d = (0..n).find(|&d| [ab, ac, bc].iter().all(|&l| !self.incidence[l].contains(d)))?;
        Some([a, b, c, d])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Points on line `l`, sorted.
    pub fn line(&self, l: usize) -> &[usize] {
        &self.lines[l]
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Lines through point `p`, sorted.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn incidence(&self, l: usize) -> &FixedBitSet {
        &self.incidence[l]
    }

    pub fn is_incident(&self, p: usize, l: usize) -> bool {
        self.incidence[l].contains(p)
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        self.point_lines[a]
            .iter()
            .copied()
            .find(|&l| self.incidence[l].contains(b))
    }

    pub fn source(&self) -> &PlaneSource {
        &self.source
    }

    pub fn field(&self) -> Option<&Field> {
        match &self.source {
            PlaneSource::Generated { field, .. } => Some(field),
            PlaneSource::Loaded => None,
        }
    }

    /// Coordinates of point `p` (and of line `p`) for generated planes.
    pub fn coords(&self, p: usize) -> Option<Triple> {
        match &self.source {
            PlaneSource::Generated { coords, .. } => coords.get(p).copied(),
            PlaneSource::Loaded => None,
        }
    }

    /// Index of the point with the given (not necessarily canonical)
    /// homogeneous coordinates.
    pub fn point_index(&self, v: Triple) -> Option<usize> {
        let f = self.field()?;
        let [x, y, z] = canonicalize(f, v)?;
        let q = self.order;
        let (yi, zi) = (y.index() as usize, z.index() as usize);
        Some(if !x.is_zero() {
            yi * q + zi
        } else if !y.is_zero() {
            q * q + zi
        } else {
            q * q + q
        })
    }

    /// Number of points of `set` on each line.
    pub fn line_hits(&self, set: &FixedBitSet) -> Vec<usize> {
        self.incidence
            .iter()
            .map(|row| row.intersection_count(set))
            .collect()
    }
}

/// An incidence-preserving involution swapping points and lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarity {
    point_to_line: Vec<usize>,
    line_to_point: Vec<usize>,
}

impl Polarity {
    /// Builds and validates a polarity from the point-to-line map.
    pub fn new(plane: &Plane, point_to_line: Vec<usize>) -> Result<Polarity, PlaneError> {
        let n = plane.num_points();
        if point_to_line.len() != n {
            return Err(PlaneError::InvalidPolarity(format!(
                "map has {} entries for {n} points",
                point_to_line.len()
            )));
        }
        let mut line_to_point = vec![usize::MAX; n];
        for (p, &l) in point_to_line.iter().enumerate() {
            if l >= n || line_to_point[l] != usize::MAX {
                return Err(PlaneError::InvalidPolarity(format!(
                    "point {p} -> line {l} breaks bijectivity"
                )));
            }
            line_to_point[l] = p;
        }
        let pol = Polarity {
            point_to_line,
            line_to_point,
        };
        pol.validate(plane)?;
        Ok(pol)
    }

    /// Parses `point_index line_index` rows.
    pub fn load(plane: &Plane, text: &str) -> Result<Polarity, PlaneError> {
        let n = plane.num_points();
        let mut map = vec![usize::MAX; n];
        for (row, raw) in text.lines().enumerate() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let parse_err = |reason: &str| PlaneError::Parse {
                row: row + 1,
                reason: reason.to_string(),
            };
            let nums = t
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| parse_err("not an integer")))
                .collect::<Result<Vec<_>, _>>()?;
            let [p, l] = nums[..] else {
                return Err(parse_err("expected `point line`"));
            };
            if p >= n {
                return Err(PlaneError::PointOutOfRange(p));
            }
            map[p] = l;
        }
        if let Some(p) = map.iter().position(|&l| l == usize::MAX) {
            return Err(PlaneError::InvalidPolarity(format!("point {p} has no image")));
        }
        Polarity::new(plane, map)
    }

    pub fn export(&self) -> String {
        self.point_to_line
            .iter()
            .enumerate()
            .map(|(p, l)| format!("{p} {l}\n"))
            .collect()
    }

    /// `P` on `L` iff `pi(L)` on `pi(P)`, for every point/line pair.
    pub fn validate(&self, plane: &Plane) -> Result<(), PlaneError> {
        let n = plane.num_points();
        for p in 0..n {
            if self.line_to_point[self.point_to_line[p]] != p {
                return Err(PlaneError::InvalidPolarity(format!(
                    "not an involution at point {p}"
                )));
            }
        }
        for l in 0..n {
            let pole = self.line_to_point[l];
            for p in 0..n {
                let lhs = plane.is_incident(p, l);
                let rhs = plane.is_incident(pole, self.point_to_line[p]);
                if lhs != rhs {
                    return Err(PlaneError::InvalidPolarity(format!(
                        "incidence of point {p} and line {l} not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn point_to_line(&self, p: usize) -> usize {
        self.point_to_line[p]
    }

    pub fn line_to_point(&self, l: usize) -> usize {
        self.line_to_point[l]
    }

    /// Points lying on their own polar line.
    pub fn absolute_points<'a>(&'a self, plane: &'a Plane) -> impl Iterator<Item = usize> + 'a {
        (0..plane.num_points()).filter(move |&p| plane.is_incident(p, self.point_to_line[p]))
    }
}

/// The orthogonal polarity of PG(2,q): the point with coordinates `v` maps to
/// the line with the same coordinates.
pub fn orthogonal_polarity(plane: &Plane) -> Result<Polarity, PlaneError> {
    if plane.field().is_none() {
        return Err(PlaneError::NoCoordinates);
    }
    Polarity::new(plane, (0..plane.num_points()).collect())
}

/// A `(q+1)`-arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oval {
    points: Vec<usize>,
    order: usize,
}

impl Oval {
    /// Validates size and the no-three-collinear condition.
    pub fn new(plane: &Plane, points: Vec<usize>) -> Result<Oval, PlaneError> {
        let q = plane.order();
        if points.len() != q + 1 {
            return Err(PlaneError::OvalSize {
                expected: q + 1,
                found: points.len(),
            });
        }
        classify_lines(plane, &points)?;
        Ok(Oval { points, order: q })
    }

    /// Members in the order they were supplied.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.contains(&p)
    }
}

/// The oval `{(1,t,t^2)}` plus one point at infinity, listed in field order
/// of `t` with the extra point last.
///
/// For even `q` the extra point is `(0,1,0)`, the nucleus of the conic
/// `y^2 = xz`. For odd `q` it is `(0,0,1)`: there `(0,1,0)` lies on the line
/// through `(1,t,t^2)` and `(1,-t,t^2)`.
pub fn conic_oval(plane: &Plane) -> Result<Oval, PlaneError> {
    let f = plane.field().ok_or(PlaneError::NoCoordinates)?.clone();
    let infinity = if f.characteristic() == 2 {
        [FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]
    } else {
        [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]
    };
    let mut points: Vec<usize> = f
        .elements()
        .map(|t| {
            plane
                .point_index([FieldElement::ONE, t, f.mul(t, t)])
                .expect("generated plane")
        })
        .collect();
    points.push(plane.point_index(infinity).expect("generated plane"));
    Oval::new(plane, points)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClassification {
    pub exterior: usize,
    pub tangent: usize,
    pub secant: usize,
    /// `|line ∩ arc|` per line.
    pub hits: Vec<u8>,
}

impl LineClassification {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.exterior, self.tangent, self.secant)
    }
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Closed-form `(exterior, tangent, secant)` counts for a k-arc in a plane of
/// order q.
pub fn arc_line_counts(q: usize, k: usize) -> (usize, usize, usize) {
    let r = q + 2 - k;
    (choose2(q) + choose2(r), k * r, choose2(k))
}

/// Labels every line by how many arc points it carries.
pub fn classify_lines(plane: &Plane, arc: &[usize]) -> Result<LineClassification, PlaneError> {
    let n = plane.num_points();
    if let Some(&bad) = arc.iter().find(|&&p| p >= n) {
        return Err(PlaneError::PointOutOfRange(bad));
    }
    let set = crate::graph::bitset(n, arc.iter().copied());
    if set.count_ones(..) != arc.len() {
        return Err(PlaneError::AxiomViolation(0, 0, "repeated arc point".into()));
    }
    let hits = plane.line_hits(&set);
    let mut out = LineClassification {
        exterior: 0,
        tangent: 0,
        secant: 0,
        hits: Vec::with_capacity(n),
    };
    for (line, &count) in hits.iter().enumerate() {
        match count {
            0 => out.exterior += 1,
            1 => out.tangent += 1,
            2 => out.secant += 1,
            _ => return Err(PlaneError::NotAnArc { line, count }),
        }
        out.hits.push(count as u8);
    }
    debug_assert_eq!(out.counts(), arc_line_counts(plane.order(), arc.len()));
    Ok(out)
}
