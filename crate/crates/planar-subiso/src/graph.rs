//! Simple undirected graphs with 0-indexed vertices.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// An abstract (unembedded) simple graph. Edges are stored normalized with
/// the smaller endpoint first and sorted, so two structurally equal graphs
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl AbstractGraph {
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edge_list {
            if u >= n {
                return Err(Error::BadVertex(u, n));
            }
            if v >= n {
                return Err(Error::BadVertex(v, n));
            }
            if u == v {
                return Err(Error::NotSimple(format!("loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::NotSimple(format!("parallel edge {u}-{v}")));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge {u,v} in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut cnt = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    cnt += 1;
                    stack.push(w);
                }
            }
        }
        cnt == self.n
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut verts = vec![s];
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        verts.push(w);
                        stack.push(w);
                    }
                }
            }
            verts.sort_unstable();
            out.push(verts);
        }
        out
    }

    /// BFS distances from `root`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph induced by `verts`, with vertices relabeled 0..|verts| in the
    /// given order. Returns the graph and the old-id-per-new-id table.
    pub fn induced(&self, verts: &[usize]) -> (AbstractGraph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                edges.push((new_id[u], new_id[v]));
            }
        }
        let g = AbstractGraph::new(verts.len(), &edges).expect("induced subgraph is simple");
        (g, verts.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallels() {
        assert!(AbstractGraph::new(3, &[(0, 0)]).is_err());
        assert!(AbstractGraph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(AbstractGraph::new(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn basic_accessors() {
        let g = AbstractGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 2));
        assert!(g.is_connected());
        assert_eq!(g.bfs_distances(0), vec![0, 1, 2, 1]);
    }

    #[test]
    fn components() {
        let g = AbstractGraph::new(5, &[(0, 1), (2, 3)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }
}
