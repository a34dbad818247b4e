//! Combinatorial nooses: cyclic alternating vertex-face sequences that trace
//! simple closed curves meeting the drawing only in vertices.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use crate::plane_graph::{is_triangulation, subdivide_all_edges, triangulate, PlaneGraph};
use std::collections::HashMap;

/// An oriented combinatorial noose, normalized by rotating the sequence so
/// the smallest vertex comes first (orientation is kept). `faces[i]` is the
/// face crossed between `verts[i]` and `verts[(i+1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NooseSeq {
    verts: Vec<usize>,
    faces: Vec<usize>,
}

impl NooseSeq {
    pub fn new(verts: Vec<usize>, faces: Vec<usize>) -> NooseSeq {
        assert_eq!(verts.len(), faces.len());
        assert!(!verts.is_empty());
        let mut s = NooseSeq { verts, faces };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let k = self.verts.len();
        let start = (0..k).min_by_key(|&i| self.verts[i]).unwrap();
        self.verts.rotate_left(start);
        self.faces.rotate_left(start);
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    /// Same curve traversed the other way.
    pub fn reversed(&self) -> NooseSeq {
        let k = self.len();
        let verts: Vec<usize> = std::iter::once(self.verts[0])
            .chain(self.verts[1..].iter().rev().copied())
            .collect();
        let faces: Vec<usize> = (0..k).map(|i| self.faces[(k - 1 - i) % k]).collect();
        NooseSeq::new(verts, faces)
    }
}

/// A combinatorial noose: either a closed curve through at least one vertex,
/// or a curve drawn entirely inside a single face (empty middle set).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Noose {
    Empty { face: usize },
    Seq(NooseSeq),
}

impl Noose {
    pub fn len(&self) -> usize {
        match self {
            Noose::Empty { .. } => 0,
            Noose::Seq(s) => s.len(),
        }
    }
}

/// Occurrence positions of each vertex along the boundary walk of each face.
pub struct FaceOccurrences {
    per_face: Vec<HashMap<usize, Vec<usize>>>,
    walk_len: Vec<usize>,
}

impl FaceOccurrences {
    pub fn new(h: &PlaneGraph) -> FaceOccurrences {
        let mut per_face = Vec::with_capacity(h.face_count());
        let mut walk_len = Vec::with_capacity(h.face_count());
        for f in 0..h.face_count() {
            let walk = h.face_vertex_walk(f);
            let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, &v) in walk.iter().enumerate() {
                map.entry(v).or_default().push(i);
            }
            walk_len.push(walk.len());
            per_face.push(map);
        }
        FaceOccurrences { per_face, walk_len }
    }

    pub fn vertices_on_face(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        self.per_face[f].keys().copied()
    }

    pub fn positions(&self, f: usize, v: usize) -> Option<&[usize]> {
        self.per_face[f].get(&v).map(|p| p.as_slice())
    }

    pub fn walk_len(&self, f: usize) -> usize {
        self.walk_len[f]
    }

    /// Decides whether the chords a noose draws across face `f` can attach
    /// to corner occurrences of their endpoints without any two chords
    /// crossing. A face boundary may visit a vertex several times, so this
    /// searches over the possible corner choices; chords sharing a corner
    /// can always be perturbed apart and never count as crossing.
    pub fn chords_realizable(&self, f: usize, chords: &[(usize, usize)]) -> bool {
        let len = self.walk_len[f];
        let options: Vec<Vec<(usize, usize)>> = chords
            .iter()
            .map(|&(a, b)| {
                let (Some(pa), Some(pb)) = (self.per_face[f].get(&a), self.per_face[f].get(&b))
                else {
                    return Vec::new();
                };
                let mut out = Vec::with_capacity(pa.len() * pb.len());
                for &p in pa {
                    for &q in pb {
                        out.push((p, q));
                    }
                }
                out
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            return false;
        }
        fn crossing(len: usize, c1: (usize, usize), c2: (usize, usize)) -> bool {
            let (p1, q1) = c1;
            let (p2, q2) = c2;
            if p1 == p2 || p1 == q2 || q1 == p2 || q1 == q2 || p1 == q1 || p2 == q2 {
                return false;
            }
            let inside = |x: usize| -> bool {
                // strictly between p1 and q1 going forward
                (x + len - p1) % len < (q1 + len - p1) % len && x != p1
            };
            inside(p2) != inside(q2)
        }
        fn assign(
            len: usize,
            options: &[Vec<(usize, usize)>],
            chosen: &mut Vec<(usize, usize)>,
        ) -> bool {
            if chosen.len() == options.len() {
                return true;
            }
            for &cand in &options[chosen.len()] {
                if chosen.iter().all(|&c| !crossing(len, c, cand)) {
                    chosen.push(cand);
                    if assign(len, options, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        assign(len, &options, &mut Vec::with_capacity(chords.len()))
    }
}

/// Checks the three conditions defining a combinatorial noose: each crossed
/// face is incident to the two vertices it joins, vertices are distinct, and
/// no two crossings of the same face interleave on its boundary.
pub fn is_combinatorial_noose(seq: &NooseSeq, h: &PlaneGraph) -> Result<bool> {
    let occ = FaceOccurrences::new(h);
    is_combinatorial_noose_with(seq, h, &occ)
}

pub fn is_combinatorial_noose_with(
    seq: &NooseSeq,
    h: &PlaneGraph,
    occ: &FaceOccurrences,
) -> Result<bool> {
    let k = seq.len();
    for &v in seq.verts() {
        if v >= h.n() {
            return Err(Error::UnknownId(format!("vertex {v}")));
        }
    }
    for &f in seq.faces() {
        if f >= h.face_count() {
            return Err(Error::UnknownId(format!("face {f}")));
        }
    }
    let mut vs = seq.verts().to_vec();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != k {
        return Ok(false);
    }
    for i in 0..k {
        let f = seq.faces()[i];
        let a = seq.verts()[i];
        let b = seq.verts()[(i + 1) % k];
        if !h.vertex_on_face(a, f) || !h.vertex_on_face(b, f) {
            return Ok(false);
        }
    }
    // Non-crossing: the chords drawn across each face must admit corner
    // attachments that do not interleave on the face boundary.
    let mut per_face: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..k {
        per_face
            .entry(seq.faces()[i])
            .or_default()
            .push((seq.verts()[i], seq.verts()[(i + 1) % k]));
    }
    for (f, chords) in per_face {
        if chords.len() >= 2 && !occ.chords_realizable(f, &chords) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All oriented combinatorial nooses of length 1..=max_len, deduplicated up
/// to cyclic rotation. Reversals are kept as distinct oriented nooses.
pub fn enumerate_nooses(h: &PlaneGraph, max_len: usize) -> Vec<NooseSeq> {
    assert!(max_len >= 1);
    let occ = FaceOccurrences::new(h);
    let faces_at: Vec<Vec<usize>> = (0..h.n()).map(|v| h.faces_at_vertex(v)).collect();
    let mut out = Vec::new();

    struct Search<'a> {
        h: &'a PlaneGraph,
        occ: &'a FaceOccurrences,
        faces_at: &'a [Vec<usize>],
        max_len: usize,
        verts: Vec<usize>,
        faces: Vec<usize>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        /// Realizability of the chords through faces[t]'s face after adding
        /// the chord from verts[t] to `end_t`.
        fn chord_admissible(&self, t: usize, end_t: usize) -> bool {
            let f = self.faces[t];
            let mut chords: Vec<(usize, usize)> = Vec::new();
            for j in 0..t {
                if self.faces[j] == f {
                    chords.push((self.verts[j], self.verts[j + 1]));
                }
            }
            if chords.is_empty() {
                return true;
            }
            chords.push((self.verts[t], end_t));
            self.occ.chords_realizable(f, &chords)
        }

        fn extend(&mut self, out: &mut Vec<NooseSeq>) {
            let cur = *self.verts.last().unwrap();
            let start = self.verts[0];
            for fi in 0..self.faces_at[cur].len() {
                let f = self.faces_at[cur][fi];
                self.faces.push(f);
                let t = self.faces.len() - 1;
                // Close back to the start through f.
                if self.h.vertex_on_face(start, f) && self.chord_admissible(t, start) {
                    out.push(NooseSeq::new(self.verts.clone(), self.faces.clone()));
                }
                // Extend through f to a fresh vertex above the start.
                if self.verts.len() < self.max_len {
                    let mut nexts: Vec<usize> = self.occ.vertices_on_face(f).collect();
                    nexts.sort_unstable();
                    for w in nexts {
                        if w <= start || self.used[w] || !self.chord_admissible(t, w) {
                            continue;
                        }
                        self.verts.push(w);
                        self.used[w] = true;
                        self.extend(out);
                        self.used[w] = false;
                        self.verts.pop();
                    }
                }
                self.faces.pop();
            }
        }
    }

    let mut search = Search {
        h,
        occ: &occ,
        faces_at: &faces_at,
        max_len,
        verts: Vec::new(),
        faces: Vec::new(),
        used: vec![false; h.n()],
    };
    for v0 in 0..h.n() {
        search.verts.clear();
        search.faces.clear();
        search.verts.push(v0);
        search.used[v0] = true;
        search.extend(&mut out);
        search.used[v0] = false;
    }
    out.sort();
    out.dedup();
    out
}

/// Number of unoriented noose classes (orbits under reversal).
pub fn unoriented_count(nooses: &[NooseSeq]) -> usize {
    let mut canon: Vec<NooseSeq> = nooses
        .iter()
        .map(|s| {
            let r = s.reversed();
            if r < *s {
                r
            } else {
                s.clone()
            }
        })
        .collect();
    canon.sort();
    canon.dedup();
    canon.len()
}

/// In a triangulation, consecutive noose vertices are adjacent; the vertex
/// sequence is a simple cycle (or a single edge when the noose has length 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NooseCycle {
    Edge(usize, usize),
    Cycle(Vec<usize>),
}

pub fn noose_to_cycle(t: &PlaneGraph, nc: &NooseSeq) -> Result<NooseCycle> {
    if !is_triangulation(t) {
        return Err(Error::NotTriangulation);
    }
    let k = nc.len();
    for i in 0..k {
        let a = nc.verts()[i];
        let b = nc.verts()[(i + 1) % k];
        if a != b && !t.graph().has_edge(a, b) {
            return Err(Error::Internal(format!(
                "noose vertices {a},{b} not adjacent in triangulation"
            )));
        }
    }
    if k == 2 {
        Ok(NooseCycle::Edge(nc.verts()[0], nc.verts()[1]))
    } else {
        Ok(NooseCycle::Cycle(nc.verts().to_vec()))
    }
}

/// Witness construction: a triangulation of the fully subdivided drawing in
/// which the noose's vertex sequence appears as a simple cycle. Consecutive
/// noose vertices are never adjacent after subdivision, so every chord can be
/// drawn; the chords are inserted one face split at a time.
pub fn lift_noose_via_subdivision(
    h: &PlaneGraph,
    nc: &NooseSeq,
) -> Result<(PlaneGraph, Vec<usize>)> {
    if nc.len() <= 2 {
        return Err(Error::Internal("lift needs a noose of length > 2".into()));
    }
    let star = subdivide_all_edges(h);
    // Match faces of the subdivision to faces of h by their original-vertex
    // boundary sets.
    let sub_face_key = |pg: &PlaneGraph, f: usize| -> Vec<usize> {
        let mut vs: Vec<usize> = pg
            .face_vertex_walk(f)
            .iter()
            .copied()
            .filter(|&v| v < h.n())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let mut face_map = vec![usize::MAX; h.face_count()];
    let mut taken = vec![false; star.face_count()];
    for f in 0..h.face_count() {
        let key = {
            let mut vs = h.face_vertex_walk(f);
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let sf = (0..star.face_count())
            .find(|&sf| !taken[sf] && sub_face_key(&star, sf) == key)
            .ok_or_else(|| Error::Internal("subdivided face not found".into()))?;
        taken[sf] = true;
        face_map[f] = sf;
    }

    // Pending chords carry a representative dart of their current face.
    struct Pending {
        rep: (usize, usize),
        a: usize,
        b: usize,
    }
    let k = nc.len();
    let mut cur = star;
    let mut pending: Vec<Pending> = (0..k)
        .map(|i| {
            let f = face_map[nc.faces()[i]];
            let d = cur.face_darts(f)[0];
            Pending {
                rep: (cur.dart_tail(d), cur.dart_head(d)),
                a: nc.verts()[i],
                b: nc.verts()[(i + 1) % k],
            }
        })
        .collect();

    while let Some(p) = pending.pop() {
        let f = cur.face_of_dart(cur.dart(p.rep.0, p.rep.1).unwrap());
        let (a, b) = (p.a, p.b);
        if cur.graph().has_edge(a, b) {
            return Err(Error::Internal("chord already present".into()));
        }
        let walk = cur.face_darts(f).to_vec();
        let verts: Vec<usize> = walk.iter().map(|&d| cur.dart_tail(d)).collect();
        let len = walk.len();
        let pos_a = verts
            .iter()
            .position(|&v| v == a)
            .ok_or_else(|| Error::Internal("chord endpoint not on its face".into()))?;
        let pos_b = verts
            .iter()
            .position(|&v| v == b)
            .ok_or_else(|| Error::Internal("chord endpoint not on its face".into()))?;
        let mut rot = cur.rotation().to_vec();
        let in_a = cur.dart_tail(walk[(pos_a + len - 1) % len]);
        let in_b = cur.dart_tail(walk[(pos_b + len - 1) % len]);
        insert_after(&mut rot[a], in_a, b);
        insert_after(&mut rot[b], in_b, a);
        let mut edges = cur.graph().edges().to_vec();
        edges.push((a.min(b), a.max(b)));
        let g = AbstractGraph::new(cur.n(), &edges)?;
        let next = PlaneGraph::build(g, rot)?;
        // Relocate pending chords that lived in the face just split.
        let half1 = next.face_of_dart(next.dart(a, b).unwrap());
        let half2 = next.face_of_dart(next.dart(b, a).unwrap());
        for q in pending.iter_mut() {
            let old_face = cur.face_of_dart(cur.dart(q.rep.0, q.rep.1).unwrap());
            if old_face != f {
                continue;
            }
            let target = [half1, half2]
                .into_iter()
                .find(|&nf| next.vertex_on_face(q.a, nf) && next.vertex_on_face(q.b, nf))
                .ok_or_else(|| Error::Internal("split stranded a chord".into()))?;
            let d = next.face_darts(target)[0];
            q.rep = (next.dart_tail(d), next.dart_head(d));
        }
        cur = next;
    }
    let tri = triangulate(&cur)?;
    for i in 0..k {
        let a = nc.verts()[i];
        let b = nc.verts()[(i + 1) % k];
        if !tri.graph().has_edge(a, b) {
            return Err(Error::Internal("lifted cycle edge missing".into()));
        }
    }
    Ok((tri, nc.verts().to_vec()))
}

fn insert_after(rot: &mut Vec<usize>, after: usize, item: usize) {
    let pos = rot
        .iter()
        .position(|&x| x == after)
        .expect("neighbor present in rotation");
    rot.insert(pos + 1, item);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> PlaneGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = AbstractGraph::new(n, &edges).unwrap();
        let rot = (0..n)
            .map(|i| vec![(i + n - 1) % n, (i + 1) % n])
            .collect();
        PlaneGraph::build(g, rot).unwrap()
    }

    fn k2() -> PlaneGraph {
        let g = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        PlaneGraph::build(g, vec![vec![1], vec![0]]).unwrap()
    }

    #[test]
    fn noose_predicate_on_c3() {
        let c3 = cycle(3);
        let s = NooseSeq::new(vec![0, 1], vec![0, 1]);
        assert!(is_combinatorial_noose(&s, &c3).unwrap());
        // The same face twice around an edge: allowed on C3.
        let s = NooseSeq::new(vec![0, 1], vec![0, 0]);
        assert!(is_combinatorial_noose(&s, &c3).unwrap());
        let s = NooseSeq {
            verts: vec![0, 1, 1],
            faces: vec![0, 0, 1],
        };
        assert!(!is_combinatorial_noose(&s, &c3).unwrap());
    }

    #[test]
    fn crossing_chords_rejected() {
        let c4 = cycle(4);
        // Chords 0-2 and 1-3 through one face must interleave; through
        // different faces they are fine.
        let crossing = NooseSeq::new(vec![0, 2, 1, 3], vec![0, 1, 0, 1]);
        assert!(!is_combinatorial_noose(&crossing, &c4).unwrap());
        let ok = NooseSeq::new(vec![0, 1, 2, 3], vec![0, 0, 0, 1]);
        assert!(is_combinatorial_noose(&ok, &c4).unwrap());
    }

    #[test]
    fn k2_enumeration() {
        let g = k2();
        let all = enumerate_nooses(&g, 2);
        // [0, f], [1, f] and the length-2 noose [0, f, 1, f].
        assert_eq!(all.len(), 3);
        assert!(all.iter().any(|s| s.len() == 2));
        assert_eq!(unoriented_count(&all), 3);
    }

    #[test]
    fn c3_enumeration_matches_brute() {
        let c3 = cycle(3);
        let fast = enumerate_nooses(&c3, 3);
        let brute = crate::oracle::brute_nooses(&c3, 3).unwrap();
        assert_eq!(fast, brute);
    }

    #[test]
    fn noose_to_cycle_on_triangulations() {
        let c3 = cycle(3);
        let s2 = NooseSeq::new(vec![0, 1], vec![0, 1]);
        assert_eq!(noose_to_cycle(&c3, &s2).unwrap(), NooseCycle::Edge(0, 1));
        let c4 = cycle(4);
        assert!(matches!(
            noose_to_cycle(&c4, &s2),
            Err(Error::NotTriangulation)
        ));
        // Every enumerated length-3 noose of C3 maps to the triangle.
        for s in enumerate_nooses(&c3, 3) {
            if s.len() == 3 {
                match noose_to_cycle(&c3, &s).unwrap() {
                    NooseCycle::Cycle(c) => assert_eq!(c.len(), 3),
                    _ => panic!("expected a cycle"),
                }
            }
        }
    }

    #[test]
    fn lift_on_c4() {
        let c4 = cycle(4);
        for s in enumerate_nooses(&c4, 3) {
            if s.len() == 3 {
                let (tri, cyc) = lift_noose_via_subdivision(&c4, &s).unwrap();
                assert!(is_triangulation(&tri));
                assert_eq!(cyc.len(), 3);
                return;
            }
        }
        panic!("C4 has a length-3 noose");
    }
}
