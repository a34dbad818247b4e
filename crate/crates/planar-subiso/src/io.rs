//! Text formats for graphs.
//!
//! Abstract format (`.g`): first line `n m`, then m lines `u v`.
//! Plane format (`.pg`): first line `n m`, then n lines `v: u1 u2 ... ud`
//! listing v's neighbors in clockwise order.
//! Both are 0-indexed, whitespace separated; `#` starts a comment line.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use crate::plane_graph::PlaneGraph;
use std::fmt::Write as _;

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_abstract(text: &str) -> Result<AbstractGraph> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_num(it.next(), "n")?;
    let m: usize = parse_num(it.next(), "m")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse("missing edge line".into()))?;
        let mut it = line.split_whitespace();
        let u: usize = parse_num(it.next(), "u")?;
        let v: usize = parse_num(it.next(), "v")?;
        edges.push((u, v));
    }
    AbstractGraph::new(n, &edges)
}

pub fn parse_plane(text: &str) -> Result<PlaneGraph> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_num(it.next(), "n")?;
    let m: usize = parse_num(it.next(), "m")?;
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse("missing rotation line".into()))?;
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("rotation line without ':': {line}")))?;
        let v: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex id: {head}")))?;
        if v >= n {
            return Err(Error::BadVertex(v, n));
        }
        if seen[v] {
            return Err(Error::Parse(format!("duplicate rotation line for {v}")));
        }
        seen[v] = true;
        for tok in rest.split_whitespace() {
            rotation[v].push(
                tok.parse()
                    .map_err(|_| Error::Parse(format!("bad neighbor id: {tok}")))?,
            );
        }
    }
    let mut edges = Vec::new();
    for (v, rot) in rotation.iter().enumerate() {
        for &u in rot {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header says {m} edges, rotations give {}",
            edges.len()
        )));
    }
    let g = AbstractGraph::new(n, &edges)?;
    PlaneGraph::build(g, rotation)
}

fn parse_num(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

pub fn write_abstract(g: &AbstractGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_plane(g: &PlaneGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.n(), g.m());
    for v in 0..g.n() {
        let _ = write!(s, "{v}:");
        for &u in &g.rotation()[v] {
            let _ = write!(s, " {u}");
        }
        let _ = writeln!(s);
    }
    s
}

/// Reads a host file, embedding it when it is abstract. `.pg` files (or
/// `embedded = true`) are taken as already drawn.
pub fn load_plane_file(path: &std::path::Path, embedded: bool) -> Result<PlaneGraph> {
    let text = std::fs::read_to_string(path)?;
    let is_pg = embedded || path.extension().is_some_and(|e| e == "pg");
    if is_pg {
        parse_plane(&text)
    } else {
        crate::embed::planar_embed(&parse_abstract(&text)?)
    }
}

pub fn load_abstract_file(path: &std::path::Path) -> Result<AbstractGraph> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "pg") {
        Ok(parse_plane(&text)?.graph().clone())
    } else {
        parse_abstract(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abstract_round_trip() {
        let g = AbstractGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = write_abstract(&g);
        assert_eq!(parse_abstract(&text).unwrap(), g);
    }

    #[test]
    fn plane_round_trip() {
        let g = AbstractGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let pg = PlaneGraph::build(g, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        let text = write_plane(&pg);
        let back = parse_plane(&text).unwrap();
        assert_eq!(back.rotation(), pg.rotation());
    }

    #[test]
    fn comments_and_errors() {
        let text = "# a triangle\n3 3\n0 1\n1 2\n# middle comment\n2 0\n";
        assert!(parse_abstract(text).is_ok());
        assert!(parse_abstract("3 9\n0 1\n").is_err());
        assert!(parse_plane("2 1\n0: 1\n0: 1\n").is_err());
    }
}
