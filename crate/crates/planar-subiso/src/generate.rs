//! Deterministic instance generators for tests and benchmarks.

use crate::embed::planar_embed;
use crate::error::Result;
use crate::graph::AbstractGraph;
use crate::plane_graph::PlaneGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// r x r grid with its natural drawing.
pub fn grid(r: usize) -> PlaneGraph {
    assert!(r >= 1);
    let idx = |x: usize, y: usize| y * r + x;
    let mut edges = Vec::new();
    for y in 0..r {
        for x in 0..r {
            if x + 1 < r {
                edges.push((idx(x, y), idx(x + 1, y)));
            }
            if y + 1 < r {
                edges.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    let g = AbstractGraph::new(r * r, &edges).unwrap();
    let mut rot = Vec::with_capacity(r * r);
    for y in 0..r {
        for x in 0..r {
            // Clockwise on screen coordinates: up, right, down, left.
            let mut around = Vec::new();
            if y > 0 {
                around.push(idx(x, y - 1));
            }
            if x + 1 < r {
                around.push(idx(x + 1, y));
            }
            if y + 1 < r {
                around.push(idx(x, y + 1));
            }
            if x > 0 {
                around.push(idx(x - 1, y));
            }
            rot.push(around);
        }
    }
    PlaneGraph::build(g, rot).unwrap()
}

pub fn cycle(n: usize) -> PlaneGraph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let g = AbstractGraph::new(n, &edges).unwrap();
    let rot = (0..n)
        .map(|i| vec![(i + n - 1) % n, (i + 1) % n])
        .collect();
    PlaneGraph::build(g, rot).unwrap()
}

/// Wheel: hub 0 joined to an (n-1)-cycle rim.
pub fn wheel(n: usize) -> PlaneGraph {
    assert!(n >= 4);
    let rim = n - 1;
    let mut edges = Vec::new();
    for i in 0..rim {
        edges.push((0, 1 + i));
        edges.push((1 + i, 1 + (i + 1) % rim));
    }
    let g = AbstractGraph::new(n, &edges).unwrap();
    let mut rot = vec![(1..n).collect::<Vec<_>>()];
    for i in 0..rim {
        let prev = 1 + (i + rim - 1) % rim;
        let next = 1 + (i + 1) % rim;
        rot.push(vec![next, 0, prev]);
    }
    PlaneGraph::build(g, rot).unwrap()
}

pub fn path(n: usize) -> PlaneGraph {
    assert!(n >= 2);
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let g = AbstractGraph::new(n, &edges).unwrap();
    let rot = (0..n)
        .map(|i| {
            let mut r = Vec::new();
            if i > 0 {
                r.push(i - 1);
            }
            if i + 1 < n {
                r.push(i + 1);
            }
            r
        })
        .collect();
    PlaneGraph::build(g, rot).unwrap()
}

pub fn star(leaves: usize) -> PlaneGraph {
    let g = AbstractGraph::new(
        leaves + 1,
        &(1..=leaves).map(|i| (0, i)).collect::<Vec<_>>(),
    )
    .unwrap();
    let mut rot = vec![(1..=leaves).collect::<Vec<_>>()];
    for _ in 0..leaves {
        rot.push(vec![0]);
    }
    PlaneGraph::build(g, rot).unwrap()
}

/// Random connected planar graph: grow a random triangulation by repeatedly
/// placing a vertex inside a face, then delete a random fraction of edges
/// (keeping the graph connected) and re-verify planarity.
pub fn random_planar(n: usize, seed: u64) -> Result<PlaneGraph> {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Start from a triangle; insert each new vertex into a random face,
    // connecting it to the three corners.
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (0, 2)];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for v in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        edges.push((a.min(v), a.max(v)));
        edges.push((b.min(v), b.max(v)));
        edges.push((c.min(v), c.max(v)));
        faces.push([a, b, v]);
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    // Delete roughly a third of the edges, skipping deletions that would
    // disconnect the graph.
    edges.shuffle(&mut rng);
    let target = edges.len() - edges.len() / 3;
    let mut kept = edges.clone();
    let mut i = 0;
    while kept.len() > target && i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        let g = AbstractGraph::new(n, &trial)?;
        if g.is_connected() {
            kept = trial;
        } else {
            i += 1;
        }
    }
    let g = AbstractGraph::new(n, &kept)?;
    planar_embed(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = grid(3);
        assert_eq!((g.n(), g.m()), (9, 12));
        assert_eq!(g.face_count(), 5);
    }

    #[test]
    fn wheel_is_triangulated_inside() {
        let w = wheel(5);
        assert_eq!((w.n(), w.m()), (5, 8));
        assert!(w.euler_sphere_ok());
    }

    #[test]
    fn random_planar_is_planar_and_deterministic() {
        let a = random_planar(20, 7).unwrap();
        let b = random_planar(20, 7).unwrap();
        assert_eq!(a.rotation(), b.rotation());
        assert!(a.graph().is_connected());
        assert!(a.euler_sphere_ok());
    }
}
