//! Planarity testing and embedding by iterative face insertion
//! (Demoucron-Malgrange-Pertuiset): embed a cycle, then repeatedly route a
//! path of some unembedded fragment through a face containing all of the
//! fragment's attachment vertices. Runs per biconnected block, then glues
//! blocks at cut vertices by concatenating rotations.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use crate::plane_graph::PlaneGraph;
use std::collections::VecDeque;

/// Computes some plane drawing of `g`, or reports that none exists.
pub fn planar_embed(g: &AbstractGraph) -> Result<PlaneGraph> {
    let n = g.n();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in blocks(g) {
        let rot = embed_block(g, &block)?;
        for (v, mut r) in rot {
            rotation[v].append(&mut r);
        }
    }
    PlaneGraph::build(g.clone(), rotation)
        .map_err(|e| match e {
            Error::NonPlanarEmbedding { .. } => Error::Internal(
                "face-insertion produced a positive-genus rotation system".into(),
            ),
            other => other,
        })
}

/// Biconnected components as edge lists (single edges form their own block).
fn blocks(g: &AbstractGraph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut time = 1usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    // Iterative DFS to keep recursion shallow on long paths.
    for root in 0..n {
        if disc[root] != 0 {
            continue;
        }
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while !frames.is_empty() {
            let top = frames.len() - 1;
            let (v, parent, idx) = frames[top];
            if idx < g.degree(v) {
                frames[top].2 += 1;
                let w = g.neighbors(v)[idx];
                if disc[w] == 0 {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(u, _, _)) = frames.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(&(a, b)) = edge_stack.last() {
                            edge_stack.pop();
                            block.push((a, b));
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        if !block.is_empty() {
                            out.push(block);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Embeds one biconnected block; returns per-vertex clockwise rotations
/// restricted to the block's edges.
fn embed_block(g: &AbstractGraph, block: &[(usize, usize)]) -> Result<Vec<(usize, Vec<usize>)>> {
    if block.len() == 1 {
        let (u, v) = block[0];
        return Ok(vec![(u, vec![v]), (v, vec![u])]);
    }
    let mut verts: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let edges: Vec<(usize, usize)> = block
        .iter()
        .map(|&(a, b)| (local[a], local[b]))
        .collect();
    let b = AbstractGraph::new(verts.len(), &edges)?;
    let rot = dmp(&b)?;
    Ok(verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, rot[i].iter().map(|&u| verts[u]).collect()))
        .collect())
}

/// Face-insertion planarity algorithm on a biconnected graph with >= 3
/// vertices. Returns clockwise rotations.
fn dmp(g: &AbstractGraph) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    // Start from any cycle, found by following DFS until a repeat.
    let cycle = find_cycle(g).ok_or(Error::Internal("biconnected block without cycle".into()))?;
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), {
        let mut r = cycle.clone();
        r[1..].reverse();
        r
    }];
    let mut in_h = vec![false; n];
    for &v in &cycle {
        in_h[v] = true;
    }
    let mut edge_embedded = vec![false; g.m()];
    for i in 0..cycle.len() {
        let e = g
            .edge_index(cycle[i], cycle[(i + 1) % cycle.len()])
            .unwrap();
        edge_embedded[e] = true;
    }
    let mut remaining = g.m() - cycle.len();

    while remaining > 0 {
        // Fragments: single unembedded chords between embedded vertices, and
        // components of G minus the embedded vertex set with their legs.
        let mut fragments: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (attachments, interior)
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if !edge_embedded[e] && in_h[a] && in_h[b] {
                fragments.push((vec![a, b], vec![]));
            }
        }
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if in_h[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = fragments.len();
            let mut interior = vec![s];
            comp[s] = id;
            let mut queue = vec![s];
            let mut attach = Vec::new();
            while let Some(v) = queue.pop() {
                for &w in g.neighbors(v) {
                    if in_h[w] {
                        attach.push(w);
                    } else if comp[w] == usize::MAX {
                        comp[w] = id;
                        interior.push(w);
                        queue.push(w);
                    }
                }
            }
            attach.sort_unstable();
            attach.dedup();
            fragments.push((attach, interior));
        }

        // Admissible faces per fragment.
        let mut best: Option<(usize, usize, Vec<usize>)> = None; // (#admissible, fragment, faces)
        for (fi, (attach, _)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, fverts)| attach.iter().all(|a| fverts.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if admissible.is_empty() {
                return Err(Error::NonPlanar);
            }
            if best.as_ref().map_or(true, |(c, _, _)| admissible.len() < *c) {
                best = Some((admissible.len(), fi, admissible));
            }
        }
        let (_, fi, admissible) =
            best.ok_or(Error::Internal("edges remain but no fragment found".into()))?;
        let (attach, interior) = &fragments[fi];
        let face_id = admissible[0];

        // A path through the fragment between two distinct attachments.
        let path = fragment_path(g, attach, interior, &in_h);
        for &v in &path {
            in_h[v] = true;
        }
        for w in path.windows(2) {
            edge_embedded[g.edge_index(w[0], w[1]).unwrap()] = true;
            remaining -= 1;
        }

        // Split the face along the path.
        let f = faces.swap_remove(face_id);
        let a = path[0];
        let b = *path.last().unwrap();
        let ia = f.iter().position(|&v| v == a).unwrap();
        let ib = f.iter().position(|&v| v == b).unwrap();
        let len = f.len();
        let arc = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(f[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % len;
            }
            out
        };
        let mut f1 = arc(ia, ib); // a .. b along f
        let mut f2 = arc(ib, ia); // b .. a along f
        let mut rev_interior: Vec<usize> = path[1..path.len() - 1].to_vec();
        rev_interior.reverse();
        f1.extend(rev_interior); // close b -> a via reversed path
        f2.extend(path[1..path.len() - 1].iter().copied()); // close a -> b via path
        faces.push(f1);
        faces.push(f2);
    }

    // Reconstruct clockwise rotations from the directed face cycles: in a
    // face [... x, v, y ...] the successor of x around v is y.
    let mut succ: Vec<std::collections::HashMap<usize, usize>> =
        vec![std::collections::HashMap::new(); n];
    for f in &faces {
        let len = f.len();
        for i in 0..len {
            let x = f[i];
            let v = f[(i + 1) % len];
            let y = f[(i + 2) % len];
            if succ[v].insert(x, y).is_some() {
                return Err(Error::Internal("directed edge on two faces".into()));
            }
        }
    }
    let mut rot = Vec::with_capacity(n);
    for v in 0..n {
        let deg = g.degree(v);
        let mut r = Vec::with_capacity(deg);
        let mut u = g.neighbors(v)[0];
        for _ in 0..deg {
            r.push(u);
            u = *succ[v]
                .get(&u)
                .ok_or(Error::Internal("rotation successor missing".into()))?;
        }
        if u != r[0] || r.len() != deg {
            return Err(Error::Internal("rotation is not a single cycle".into()));
        }
        rot.push(r);
    }
    Ok(rot)
}

fn find_cycle(g: &AbstractGraph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut state = vec![0u8; n];
    let mut stack = vec![(0usize, usize::MAX)];
    while let Some((v, p)) = stack.pop() {
        if state[v] != 0 {
            continue;
        }
        state[v] = 1;
        parent[v] = p;
        for &w in g.neighbors(v) {
            if w == p {
                continue;
            }
            if state[w] == 1 {
                // Found back edge v -> w; walk parents from v to w.
                let mut path = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    path.push(x);
                }
                return Some(path);
            }
            stack.push((w, v));
        }
    }
    None
}

/// BFS path between two distinct attachment vertices running through the
/// fragment interior (or the chord itself when the interior is empty).
fn fragment_path(
    g: &AbstractGraph,
    attach: &[usize],
    interior: &[usize],
    in_h: &[bool],
) -> Vec<usize> {
    assert!(attach.len() >= 2, "fragment of a biconnected graph has >= 2 attachments");
    if interior.is_empty() {
        return vec![attach[0], attach[1]];
    }
    let start = attach[0];
    let mut inside = vec![false; g.n()];
    for &v in interior {
        inside[v] = true;
    }
    let mut prev = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &w in g.neighbors(start) {
        if inside[w] && prev[w] == usize::MAX {
            prev[w] = start;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if inside[w] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            } else if in_h[w] && w != start {
                // Path found: start .. v, w.
                let mut path = vec![w, v];
                let mut x = v;
                while prev[x] != start {
                    x = prev[x];
                    path.push(x);
                }
                path.push(start);
                path.reverse();
                return path;
            }
        }
    }
    unreachable!("fragment with two attachments always yields a path");
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

    #[test]
    fn embeds_c4_and_k4() {
        let c4 = AbstractGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let pg = planar_embed(&c4).unwrap();
        assert_eq!(pg.face_count(), 2);
        let k4 = complete(4);
        let pg = planar_embed(&k4).unwrap();
        assert_eq!(pg.face_count(), 4);
    }

    #[test]
    fn rejects_k5_and_k33() {
        assert!(matches!(planar_embed(&complete(5)), Err(Error::NonPlanar)));
        let k33 = AbstractGraph::new(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(matches!(planar_embed(&k33), Err(Error::NonPlanar)));
    }

    #[test]
    fn embeds_trees_and_disconnected() {
        let tree = AbstractGraph::new(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        let pg = planar_embed(&tree).unwrap();
        assert_eq!(pg.face_count(), 1);
        let two = AbstractGraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let pg = planar_embed(&two).unwrap();
        assert!(pg.euler_sphere_ok());
    }

    #[test]
    fn embeds_blocks_glued_at_cut_vertices() {
        // Two triangles sharing vertex 2.
        let g = AbstractGraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let pg = planar_embed(&g).unwrap();
        assert!(pg.euler_sphere_ok());
        assert_eq!(pg.face_count(), 3);
    }

    #[test]
    fn grid_embedding() {
        // 4x4 grid.
        let r = 4;
        let idx = |x: usize, y: usize| y * r + x;
        let mut e = Vec::new();
        for y in 0..r {
            for x in 0..r {
                if x + 1 < r {
                    e.push((idx(x, y), idx(x + 1, y)));
                }
                if y + 1 < r {
                    e.push((idx(x, y), idx(x, y + 1)));
                }
            }
        }
        let g = AbstractGraph::new(r * r, &e).unwrap();
        let pg = planar_embed(&g).unwrap();
        assert_eq!(pg.face_count(), 2 + g.m() - g.n());
    }
}
