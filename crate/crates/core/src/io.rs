//! Graph serialization: graph6, plain edge lists, and the canonical edge list
//! used for certificate hashes.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// graph6 encoding of the loopless part of `g` (no `>>graph6<<` header, no
/// trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn from_graph6(text: &str) -> Result<Graph, FormatError> {
    let err = |m: &str| FormatError::Graph6(m.to_string());
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(err("byte outside 63..=126"));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, body) = match bytes {
        [] => return Err(err("empty input")),
        [126, 126, rest @ ..] if rest.len() >= 6 => {
            (rest[..6].iter().fold(0, |acc, &b| (acc << 6) | six(b)), &rest[6..])
        }
        [126, rest @ ..] if rest.len() >= 3 => {
            (rest[..3].iter().fold(0, |acc, &b| (acc << 6) | six(b)), &rest[3..])
        }
        [126, ..] => return Err(err("truncated size header")),
        [b, rest @ ..] => (six(*b), rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(err("body length does not match vertex count"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = six(body[k / 6]);
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// `u v` per row (`u <= v`), loops as `u u`, preceded by a `# n <n>` comment.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("# n {}\n", g.n());
    for u in 0..g.n() {
        for v in g.neighbors(u).filter(|&v| v >= u) {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

/// Parses an edge list. The vertex count comes from a `# n <n>` comment when
/// present, otherwise from the largest index mentioned.
pub fn from_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let fail = |reason: &str| FormatError::EdgeList {
            line: i + 1,
            reason: reason.to_string(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("n") {
                let n = parts
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| fail("bad vertex count"))?;
                declared = Some(n);
            }
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| fail("not an integer")))
            .collect::<Result<_, _>>()?;
        match nums[..] {
            [u, v] => edges.push((u, v)),
            _ => return Err(fail("expected two vertex indices")),
        }
    }
    let seen = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(seen);
    if seen > n {
        return Err(FormatError::EdgeList {
            line: 0,
            reason: format!("vertex index {} out of range for n = {n}", seen - 1),
        });
    }
    Ok(Graph::from_edges(n, edges))
}

/// Sorted `u v` pairs with `u < v`, newline separated, no loops, no trailing
/// newline.
pub fn canonical_edge_list(g: &Graph) -> String {
    g.edges()
        .map(|(u, v)| format!("{u} {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Lowercase hex SHA-256 of [`canonical_edge_list`].
pub fn edge_hash(g: &Graph) -> String {
    hex::encode(Sha256::digest(canonical_edge_list(g).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_small_known_value() {
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(from_graph6("DQc").unwrap(), g);
    }

    #[test]
    fn graph6_known_values() {
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(to_graph6(&Graph::empty(1)), "@");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
    }

    #[test]
    fn graph6_long_header() {
        let g = Graph::from_edges(100, [(0, 99), (5, 6)]);
        let s = to_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 63 + 36]);
        assert_eq!(from_graph6(&s).unwrap(), g);
        assert_eq!(from_graph6(&format!(">>graph6<<{s}\n")).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("D").is_err());
        assert!(from_graph6("D Qc").is_err());
    }

    #[test]
    fn graph6_drops_loops() {
        let g = Graph::from_edges(3, [(0, 0), (0, 1)]);
        assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g.without_loops());
    }

    #[test]
    fn edge_list_keeps_loops_and_isolated_vertices() {
        let g = Graph::from_edges(6, [(0, 0), (0, 1), (2, 3)]);
        let text = to_edge_list(&g);
        assert_eq!(text, "# n 6\n0 0\n0 1\n2 3\n");
        assert_eq!(from_edge_list(&text).unwrap(), g);
        assert_eq!(from_edge_list("0 1\n1 2\n").unwrap().n(), 3);
        assert!(from_edge_list("0 1 2\n").is_err());
        assert!(from_edge_list("# n 2\n0 5\n").is_err());
    }

    #[test]
    fn canonical_list_format() {
        let g = Graph::from_edges(4, [(2, 1), (0, 3), (1, 1)]);
        assert_eq!(canonical_edge_list(&g), "0 3\n1 2");
        // sha256 of the empty string
        assert_eq!(
            edge_hash(&Graph::empty(3)),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
