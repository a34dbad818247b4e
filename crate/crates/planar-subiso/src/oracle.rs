//! Brute-force reference implementations. Everything here ignores embeddings
//! and works on abstract graphs by exhaustive search; the solver is tested
//! against these on every instance the tests generate.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use crate::noose::{is_combinatorial_noose_with, FaceOccurrences, NooseSeq};
use crate::plane_graph::PlaneGraph;
use std::collections::BTreeSet;

const MAX_HOST: usize = 40;
const MAX_PATTERN: usize = 9;

/// One subgraph-isomorphism match: the injective vertex map and the host
/// edge set it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    /// `vertex_map[p]` is the host vertex for pattern vertex `p`.
    pub vertex_map: Vec<usize>,
    /// Host edges used, as indices into the host edge list, sorted.
    pub edges: Vec<usize>,
}

fn check_budget(host: &AbstractGraph, pattern: &AbstractGraph) -> Result<()> {
    if host.n() > MAX_HOST || pattern.n() > MAX_PATTERN {
        return Err(Error::BudgetExceeded(format!(
            "host n = {}, pattern k = {}",
            host.n(),
            pattern.n()
        )));
    }
    Ok(())
}

/// Backtracking enumeration of injective maps with degree and adjacency
/// pruning; `emit` returns false to stop early.
fn search(
    host: &AbstractGraph,
    pattern: &AbstractGraph,
    emit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let k = pattern.n();
    if k == 0 {
        return;
    }
    // Order pattern vertices so each one after the first attaches to an
    // already-mapped neighbor (the pattern is used connected in practice).
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&p| !placed[p])
            .max_by_key(|&p| {
                (
                    pattern.neighbors(p).iter().filter(|&&q| placed[q]).count(),
                    pattern.degree(p),
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; host.n()];

    fn rec(
        host: &AbstractGraph,
        pattern: &AbstractGraph,
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return emit(map);
        }
        let p = order[depth];
        for h in 0..host.n() {
            if used[h] || host.degree(h) < pattern.degree(p) {
                continue;
            }
            let ok = pattern.neighbors(p).iter().all(|&q| {
                map[q] == usize::MAX || host.has_edge(h, map[q])
            });
            if !ok {
                continue;
            }
            map[p] = h;
            used[h] = true;
            let keep_going = rec(host, pattern, order, depth + 1, map, used, emit);
            used[h] = false;
            map[p] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
    rec(host, pattern, &order, 0, &mut map, &mut used, emit);
}

fn record_of(map: &[usize], host: &AbstractGraph, pattern: &AbstractGraph) -> MatchRecord {
    let mut edges: Vec<usize> = pattern
        .edges()
        .iter()
        .map(|&(a, b)| host.edge_index(map[a], map[b]).unwrap())
        .collect();
    edges.sort_unstable();
    MatchRecord {
        vertex_map: map.to_vec(),
        edges,
    }
}

/// Dedup key: the host subgraph (vertex set plus edge set), so automorphic
/// images of the pattern count once.
fn subgraph_key(rec: &MatchRecord) -> (Vec<usize>, Vec<usize>) {
    let mut vs = rec.vertex_map.clone();
    vs.sort_unstable();
    (vs, rec.edges.clone())
}

pub fn brute_decide(host: &AbstractGraph, pattern: &AbstractGraph) -> Result<bool> {
    check_budget(host, pattern)?;
    let mut found = false;
    search(host, pattern, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

pub fn brute_count(host: &AbstractGraph, pattern: &AbstractGraph) -> Result<u64> {
    Ok(brute_list(host, pattern)?.len() as u64)
}

/// All distinct host subgraphs isomorphic to the pattern, each returned as a
/// sorted list of host edge index pairs, sorted overall.
pub fn brute_list(host: &AbstractGraph, pattern: &AbstractGraph) -> Result<Vec<MatchRecord>> {
    check_budget(host, pattern)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    search(host, pattern, &mut |map| {
        let rec = record_of(map, host, pattern);
        if seen.insert(subgraph_key(&rec)) {
            out.push(rec);
        }
        true
    });
    Ok(out)
}

/// Exact number of simple cycles (length >= 3) by DFS path enumeration with
/// a canonical smallest start vertex.
pub fn count_simple_cycles(g: &AbstractGraph) -> Result<u64> {
    if g.n() > 16 {
        return Err(Error::BudgetExceeded(format!("cycle count n = {}", g.n())));
    }
    let n = g.n();
    let mut count = 0u64;
    let mut on_path = vec![false; n];
    fn dfs(
        g: &AbstractGraph,
        start: usize,
        cur: usize,
        second: usize,
        len: usize,
        on_path: &mut [bool],
        count: &mut u64,
    ) {
        for &w in g.neighbors(cur) {
            if w == start {
                // Close only in one direction: second vertex < last vertex.
                if len >= 3 && second < cur {
                    *count += 1;
                }
                continue;
            }
            if w < start || on_path[w] {
                continue;
            }
            on_path[w] = true;
            let second = if len == 1 { w } else { second };
            dfs(g, start, w, second, len + 1, on_path, count);
            on_path[w] = false;
        }
    }
    for start in 0..n {
        on_path[start] = true;
        dfs(g, start, start, usize::MAX, 1, &mut on_path, &mut count);
        on_path[start] = false;
    }
    Ok(count)
}

/// Definitional filter: every alternating vertex/face id sequence of length
/// up to `max_len`, kept iff it satisfies the combinatorial-noose conditions.
/// Must agree with `noose::enumerate_nooses`.
pub fn brute_nooses(h: &PlaneGraph, max_len: usize) -> Result<Vec<NooseSeq>> {
    if h.n() > 8 {
        return Err(Error::BudgetExceeded(format!("noose filter n = {}", h.n())));
    }
    let occ = FaceOccurrences::new(h);
    let mut out = Vec::new();
    let n = h.n();
    let fc = h.face_count();
    // Raw product-space enumeration: choose length, then every vertex id and
    // face id combination.
    for len in 1..=max_len {
        let mut verts = vec![0usize; len];
        let mut faces = vec![0usize; len];
        loop {
            let seq = NooseSeq::new(verts.clone(), faces.clone());
            if is_combinatorial_noose_with(&seq, h, &occ).unwrap() {
                out.push(seq);
            }
            // Odometer over (verts, faces).
            let mut i = 0;
            while i < 2 * len {
                let (cell, base) = if i < len {
                    (&mut verts[i], n)
                } else {
                    (&mut faces[i - len], fc)
                };
                *cell += 1;
                if *cell < base {
                    break;
                }
                *cell = 0;
                i += 1;
            }
            if i == 2 * len {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> AbstractGraph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        AbstractGraph::new(n, &e).unwrap()
    }

    fn cycle_graph(n: usize) -> AbstractGraph {
        AbstractGraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_count_in_k4() {
        assert_eq!(brute_count(&complete(4), &cycle_graph(3)).unwrap(), 4);
        assert!(brute_decide(&complete(4), &cycle_graph(3)).unwrap());
    }

    #[test]
    fn k2_count_is_edge_count() {
        let host = complete(4);
        let k2 = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_count(&host, &k2).unwrap(), host.m() as u64);
    }

    #[test]
    fn no_c4_in_c5() {
        assert_eq!(brute_count(&cycle_graph(5), &cycle_graph(4)).unwrap(), 0);
    }

    #[test]
    fn list_matches_count() {
        let host = complete(4);
        let c4 = cycle_graph(4);
        let l = brute_list(&host, &c4).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(brute_count(&host, &c4).unwrap(), 3);
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(count_simple_cycles(&cycle_graph(5)).unwrap(), 1);
        assert_eq!(count_simple_cycles(&complete(4)).unwrap(), 7);
    }

    #[test]
    fn budget_guard() {
        let big = cycle_graph(41);
        let k2 = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            brute_decide(&big, &k2),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
