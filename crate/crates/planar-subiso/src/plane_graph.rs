//! Combinatorial plane graphs: rotation systems, face traversal, radial
//! graphs, subdivision, triangulation and drawing equivalence.
//!
//! Convention used everywhere: `rotation[v]` lists the neighbors of `v` in
//! clockwise order. Faces are traced by the rule "after the directed edge
//! (u,v) comes (v,w) where w is the clockwise successor of u around v"; the
//! face of a directed edge is the one lying to its right.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use std::collections::HashMap;

/// Directed edge of a simple plane graph. For edge index `e` with endpoints
/// `(a, b)`, `a < b`, dart `2e` runs a -> b and dart `2e+1` runs b -> a.
pub type Dart = usize;

#[derive(Debug, Clone)]
pub struct PlaneGraph {
    graph: AbstractGraph,
    rotation: Vec<Vec<usize>>,
    /// Outgoing darts per vertex, clockwise, aligned with `rotation`.
    rot_darts: Vec<Vec<Dart>>,
    /// Position of dart `d` in `rot_darts[tail(d)]`.
    dart_pos: Vec<usize>,
    /// Face boundary walks, each a cyclic dart sequence.
    faces: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
}

impl PlaneGraph {
    /// Builds the plane graph from a rotation system and verifies it has
    /// genus zero (per connected component, vertices - edges + faces = 2).
    pub fn build(graph: AbstractGraph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.n();
        if rotation.len() != n {
            return Err(Error::Parse(format!(
                "rotation table has {} rows for {} vertices",
                rotation.len(),
                n
            )));
        }
        for v in 0..n {
            let mut sorted = rotation[v].clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(Error::MalformedRotation(v));
            }
        }
        let m = graph.m();
        let mut dart_pos = vec![0usize; 2 * m];
        let mut rot_darts = vec![Vec::new(); n];
        for v in 0..n {
            for (i, &u) in rotation[v].iter().enumerate() {
                let e = graph.edge_index(v, u).unwrap();
                let d = if v < u { 2 * e } else { 2 * e + 1 };
                dart_pos[d] = i;
                rot_darts[v].push(d);
            }
        }
        let mut pg = PlaneGraph {
            graph,
            rotation,
            rot_darts,
            dart_pos,
            faces: Vec::new(),
            face_of: Vec::new(),
        };
        pg.trace_faces();
        pg.check_genus()?;
        Ok(pg)
    }

    fn trace_faces(&mut self) {
        let m = self.graph.m();
        self.face_of = vec![usize::MAX; 2 * m];
        self.faces.clear();
        for start in 0..2 * m {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let id = self.faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = id;
                walk.push(d);
                d = self.next_face_dart(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(walk);
        }
    }

    fn check_genus(&self) -> Result<()> {
        for comp in self.graph.connected_components() {
            let n_i = comp.len() as isize;
            let m_i: isize = comp
                .iter()
                .map(|&v| self.graph.degree(v) as isize)
                .sum::<isize>()
                / 2;
            if m_i == 0 {
                continue;
            }
            let mut fs = std::collections::HashSet::new();
            for &v in &comp {
                for &d in &self.rot_darts[v] {
                    fs.insert(self.face_of[d]);
                    fs.insert(self.face_of[d ^ 1]);
                }
            }
            let f_i = fs.len() as isize;
            if n_i - m_i + f_i != 2 {
                return Err(Error::NonPlanarEmbedding {
                    got: n_i - m_i + f_i,
                    expected: 2,
                });
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &AbstractGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn dart(&self, u: usize, v: usize) -> Option<Dart> {
        let e = self.graph.edge_index(u, v)?;
        Some(if u < v { 2 * e } else { 2 * e + 1 })
    }

    pub fn dart_tail(&self, d: Dart) -> usize {
        let (a, b) = self.graph.edges()[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn dart_head(&self, d: Dart) -> usize {
        self.dart_tail(d ^ 1)
    }

    /// The next dart of the same face walk.
    pub fn next_face_dart(&self, d: Dart) -> Dart {
        let v = self.dart_head(d);
        let pos = self.dart_pos[d ^ 1];
        let deg = self.rot_darts[v].len();
        self.rot_darts[v][(pos + 1) % deg]
    }

    /// The face to the right of dart `d`.
    pub fn face_of_dart(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn face_darts(&self, f: usize) -> &[Dart] {
        &self.faces[f]
    }

    /// Boundary of face `f` as the cyclic vertex sequence of dart tails.
    pub fn face_vertex_walk(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| self.dart_tail(d)).collect()
    }

    pub fn face_len(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    /// Faces incident to vertex `v`, deduplicated, in rotation order.
    pub fn faces_at_vertex(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &d in &self.rot_darts[v] {
            let f = self.face_of[d];
            if !out.contains(&f) {
                out.push(f);
            }
        }
        out
    }

    pub fn vertex_on_face(&self, v: usize, f: usize) -> bool {
        self.rot_darts[v].iter().any(|&d| self.face_of[d] == f)
    }

    /// Face count after merging the outer faces of separate components, which
    /// is the count a single drawing on the sphere exhibits.
    pub fn sphere_face_count(&self) -> usize {
        if self.graph.m() == 0 {
            return usize::from(self.graph.n() > 0);
        }
        let comps_with_edges = self
            .graph
            .connected_components()
            .iter()
            .filter(|c| c.iter().any(|&v| self.graph.degree(v) > 0))
            .count();
        self.faces.len() - (comps_with_edges - 1)
    }

    /// Euler's formula for the drawing on the sphere:
    /// |V| - |E| + |F| = 1 + number of connected components.
    pub fn euler_sphere_ok(&self) -> bool {
        if self.graph.n() == 0 {
            return true;
        }
        let c = self.graph.connected_components().len();
        self.graph.n() as isize - self.graph.m() as isize + self.sphere_face_count() as isize
            == 1 + c as isize
    }

    /// Drawing with all rotations reversed (the mirror image).
    pub fn mirrored(&self) -> PlaneGraph {
        let rot = self
            .rotation
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.reverse();
                r
            })
            .collect();
        PlaneGraph::build(self.graph.clone(), rot).expect("mirror of a plane graph is plane")
    }

    /// Restriction of the drawing to the subgraph induced by `verts`
    /// (rotations filtered to surviving neighbors).
    pub fn induced(&self, verts: &[usize]) -> PlaneGraph {
        let (g, old_of_new) = self.graph.induced(verts);
        let mut new_of_old = vec![usize::MAX; self.graph.n()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let rot = old_of_new
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&u| new_of_old[u] != usize::MAX)
                    .map(|&u| new_of_old[u])
                    .collect()
            })
            .collect();
        PlaneGraph::build(g, rot).expect("induced subdrawing of a plane graph is plane")
    }
}

/// Subdivides every edge once. Face count is preserved.
pub fn subdivide_all_edges(h: &PlaneGraph) -> PlaneGraph {
    let n = h.n();
    let m = h.m();
    let mut edges = Vec::with_capacity(2 * m);
    for (e, &(a, b)) in h.graph().edges().iter().enumerate() {
        edges.push((a, n + e));
        edges.push((n + e, b));
    }
    let g = AbstractGraph::new(n + m, &edges).unwrap();
    let mut rot: Vec<Vec<usize>> = Vec::with_capacity(n + m);
    for v in 0..n {
        rot.push(
            h.rotation()[v]
                .iter()
                .map(|&u| n + h.graph().edge_index(v, u).unwrap())
                .collect(),
        );
    }
    for &(a, b) in h.graph().edges() {
        rot.push(vec![a, b]);
    }
    PlaneGraph::build(g, rot).expect("subdivision of a plane graph is plane")
}

/// Smooths every degree-2 vertex in `smooth` (test helper, the inverse of
/// subdivision). Panics if smoothing would create a loop or parallel edge.
pub fn smooth_vertices(h: &PlaneGraph, smooth: &[usize]) -> PlaneGraph {
    let keep: Vec<usize> = (0..h.n()).filter(|v| !smooth.contains(v)).collect();
    let mut new_id = vec![usize::MAX; h.n()];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v] = i;
    }
    let resolve = |mut prev: usize, mut cur: usize| -> usize {
        while new_id[cur] == usize::MAX {
            let rot = &h.rotation()[cur];
            assert_eq!(rot.len(), 2, "can only smooth degree-2 vertices");
            let next = if rot[0] == prev { rot[1] } else { rot[0] };
            prev = cur;
            cur = next;
        }
        cur
    };
    let mut edges = Vec::new();
    let mut rot = Vec::new();
    for &v in &keep {
        let r: Vec<usize> = h.rotation()[v]
            .iter()
            .map(|&u| new_id[resolve(v, u)])
            .collect();
        for &u in &r {
            let me = new_id[v];
            assert_ne!(me, u, "smoothing created a loop");
            if me < u {
                edges.push((me, u));
            }
        }
        rot.push(r);
    }
    edges.sort_unstable();
    edges.dedup();
    let g = AbstractGraph::new(keep.len(), &edges).expect("smoothing kept the graph simple");
    PlaneGraph::build(g, rot).expect("smoothed drawing is plane")
}

pub fn is_triangulation(h: &PlaneGraph) -> bool {
    if h.n() < 3 || h.m() == 0 {
        return false;
    }
    (0..h.face_count()).all(|f| {
        let w = h.face_vertex_walk(f);
        w.len() == 3 && w[0] != w[1] && w[1] != w[2] && w[0] != w[2]
    })
}

/// Exhaustive small-scale 3-connectivity test (no cut set of size <= 2).
pub fn is_three_connected(g: &AbstractGraph) -> bool {
    let n = g.n();
    if n < 4 || !g.is_connected() {
        return false;
    }
    let connected_without = |out: &[usize]| -> bool {
        let start = (0..n).find(|v| !out.contains(v)).unwrap();
        let mut seen = vec![false; n];
        for &v in out {
            seen[v] = true;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut cnt = 1;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    cnt += 1;
                    stack.push(w);
                }
            }
        }
        cnt == n - out.len()
    };
    for a in 0..n {
        if !connected_without(&[a]) {
            return false;
        }
        for b in a + 1..n {
            if !connected_without(&[a, b]) {
                return false;
            }
        }
    }
    true
}

/// Adds edges (and, as a last resort for faces with repeated boundary
/// vertices, stellation vertices) until every face is a triangle. The input
/// drawing is a subdrawing of the result.
pub fn triangulate(h: &PlaneGraph) -> Result<PlaneGraph> {
    if h.n() < 3 {
        return Err(Error::CannotTriangulate);
    }
    if !h.graph().is_connected() {
        return Err(Error::NotConnected);
    }
    let mut n = h.n();
    let mut edges: Vec<(usize, usize)> = h.graph().edges().to_vec();
    let mut rot: Vec<Vec<usize>> = h.rotation().to_vec();
    loop {
        let g = AbstractGraph::new(n, &edges)?;
        let pg = PlaneGraph::build(g, rot.clone())?;
        let Some(f) = (0..pg.face_count()).find(|&f| pg.face_len(f) > 3) else {
            return Ok(pg);
        };
        let walk = pg.face_darts(f).to_vec();
        let verts: Vec<usize> = walk.iter().map(|&d| pg.dart_tail(d)).collect();
        let len = walk.len();
        // A chord between two corner occurrences p and q splits the face.
        let mut chord = None;
        'outer: for p in 0..len {
            for q in p + 2..len {
                if p == 0 && q == len - 1 {
                    continue;
                }
                let (a, b) = (verts[p], verts[q]);
                if a != b && !pg.graph().has_edge(a, b) {
                    chord = Some((p, q));
                    break 'outer;
                }
            }
        }
        match chord {
            Some((p, q)) => {
                let a = verts[p];
                let b = verts[q];
                // Corner p sits after the incoming neighbor of position p.
                let in_a = pg.dart_tail(walk[(p + len - 1) % len]);
                let in_b = pg.dart_tail(walk[(q + len - 1) % len]);
                insert_after(&mut rot[a], in_a, b);
                insert_after(&mut rot[b], in_b, a);
                edges.push((a.min(b), a.max(b)));
            }
            None => {
                // Everything is pairwise adjacent or repeated; stellate.
                let mut distinct = verts.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != len {
                    return Err(Error::CannotTriangulate);
                }
                let z = n;
                n += 1;
                rot.push(verts.clone());
                for p in 0..len {
                    let v = verts[p];
                    let in_v = pg.dart_tail(walk[(p + len - 1) % len]);
                    insert_after(&mut rot[v], in_v, z);
                    edges.push((v.min(z), v.max(z)));
                }
            }
        }
    }
}

fn insert_after(rot: &mut Vec<usize>, after: usize, item: usize) {
    let pos = rot.iter().position(|&x| x == after).expect("neighbor in rotation");
    rot.insert(pos + 1, item);
}

// ---------------------------------------------------------------------------
// Drawing equivalence via canonical combinatorial-map codes
// ---------------------------------------------------------------------------

const SEP: u32 = u32::MAX;

/// Breadth-first encoding of the map starting at `s`, reading each rotation
/// clockwise (`mirror = false`) or counterclockwise (`mirror = true`).
fn code_from(h: &PlaneGraph, s: Dart, mirror: bool) -> Vec<u32> {
    let n = h.n();
    let mut label = vec![u32::MAX; n];
    let mut queue: Vec<(usize, usize)> = Vec::new(); // (vertex, entry neighbor)
    let root = h.dart_tail(s);
    label[root] = 0;
    queue.push((root, h.dart_head(s)));
    let mut next = 1u32;
    let mut code = Vec::with_capacity(4 * h.m());
    let mut i = 0;
    while i < queue.len() {
        let (v, entry) = queue[i];
        i += 1;
        let rot = &h.rotation()[v];
        let deg = rot.len();
        let start = rot.iter().position(|&x| x == entry).unwrap();
        code.push(SEP);
        for j in 0..deg {
            let u = if mirror {
                rot[(start + deg - j % deg) % deg]
            } else {
                rot[(start + j) % deg]
            };
            if label[u] == u32::MAX {
                label[u] = next;
                next += 1;
                queue.push((u, v));
            }
            code.push(label[u]);
        }
    }
    code
}

fn component_code(h: &PlaneGraph, darts: &[Dart], mirror: bool) -> Vec<u32> {
    darts
        .iter()
        .map(|&d| code_from(h, d, mirror))
        .min()
        .expect("component has a dart")
}

fn all_component_dart_sets(h: &PlaneGraph) -> Vec<Vec<Dart>> {
    h.graph()
        .connected_components()
        .into_iter()
        .filter_map(|comp| {
            let mut darts = Vec::new();
            for &v in &comp {
                for &u in h.graph().neighbors(v) {
                    darts.push(h.dart(v, u).unwrap());
                }
            }
            if darts.is_empty() {
                None
            } else {
                Some(darts)
            }
        })
        .collect()
}

/// Canonical code of the drawing under orientation-preserving equivalence.
pub fn canonical_code_oriented(h: &PlaneGraph) -> Vec<Vec<u32>> {
    let mut codes: Vec<Vec<u32>> = all_component_dart_sets(h)
        .iter()
        .map(|ds| component_code(h, ds, false))
        .collect();
    codes.sort();
    codes.push(vec![h.n() as u32, h.m() as u32]);
    codes
}

/// Canonical code under equivalence including reflections.
pub fn canonical_code(h: &PlaneGraph) -> Vec<Vec<u32>> {
    canonical_code_oriented(h).min(canonical_code_oriented(&h.mirrored()))
}

/// True iff the two drawings are related by a sphere homeomorphism
/// (orientation-preserving or reversing).
pub fn equivalent_drawings(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    a.n() == b.n() && a.m() == b.m() && canonical_code(a) == canonical_code(b)
}

/// True iff the two drawings are related orientation-preservingly (there is
/// an isomorphism carrying one rotation system exactly onto the other).
pub fn oriented_equivalent(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    a.n() == b.n() && a.m() == b.m() && canonical_code_oriented(a) == canonical_code_oriented(b)
}

/// Number of automorphisms of the drawing that preserve every rotation
/// exactly. Automorphisms of a connected map act freely on darts, so this is
/// the count of darts whose code matches the canonical one.
pub fn rotation_preserving_automorphism_count(h: &PlaneGraph) -> u64 {
    if h.m() == 0 {
        return 1;
    }
    assert!(h.graph().is_connected(), "automorphism count needs a connected drawing");
    let darts: Vec<Dart> = (0..2 * h.m()).collect();
    let best = component_code(h, &darts, false);
    darts
        .iter()
        .filter(|&&d| code_from(h, d, false) == best)
        .count() as u64
}

// ---------------------------------------------------------------------------
// Radial graph
// ---------------------------------------------------------------------------

/// Which original object a radial node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialNode {
    Vertex(usize),
    Face(usize),
}

/// The vertex-face incidence multigraph of a plane graph, embedded. There is
/// one radial edge per incidence occurrence (corner), so nodes of the
/// original graph that meet a face several times get parallel edges; radial
/// edges are therefore handled at dart level.
///
/// Radial edge `d` (indexed by the darts of the base graph) joins the head of
/// dart `d` with the face of `d`. Radial dart `2d` runs vertex-node to
/// face-node, `2d+1` back.
#[derive(Debug, Clone)]
pub struct RadialGraph {
    base_n: usize,
    base_m: usize,
    face_count: usize,
    origin: Vec<RadialNode>,
    rot: Vec<Vec<usize>>,
    rdart_pos: Vec<usize>,
    /// Head and face of each base-graph dart, copied from the base drawing.
    dart_head: Vec<usize>,
    dart_face: Vec<usize>,
    /// The quadrangular radial face to the right of each radial dart,
    /// identified with the base-graph edge it contains.
    quad_of: Vec<usize>,
    /// Boundary walk (4 radial darts) per quadrangular face.
    quad_walks: Vec<Vec<usize>>,
}

pub type RDart = usize;

impl RadialGraph {
    pub fn build(g: &PlaneGraph) -> RadialGraph {
        let n = g.n();
        let m = g.m();
        let fc = g.face_count();
        let mut origin = Vec::with_capacity(n + fc);
        for v in 0..n {
            origin.push(RadialNode::Vertex(v));
        }
        for f in 0..fc {
            origin.push(RadialNode::Face(f));
        }
        // Radial edge for base dart d: head(d) <-> face_of(d), at the corner
        // that follows d along its face walk.
        let mut rot: Vec<Vec<RDart>> = vec![Vec::new(); n + fc];
        for v in 0..n {
            // Slot between consecutive rotation neighbors u_j, u_{j+1} holds
            // the corner of the incoming dart (u_j -> v).
            for &u in &g.rotation()[v] {
                let incoming = g.dart(u, v).unwrap();
                rot[v].push(2 * incoming);
            }
        }
        // Around a face node the corners appear clockwise in the reverse of
        // the boundary-walk order.
        for f in 0..fc {
            for &d in g.face_darts(f).iter().rev() {
                rot[n + f].push(2 * d + 1);
            }
        }
        let mut rdart_pos = vec![usize::MAX; 4 * m];
        for node_rot in rot.iter() {
            for (i, &rd) in node_rot.iter().enumerate() {
                rdart_pos[rd] = i;
            }
        }
        let dart_head = (0..2 * m).map(|d| g.dart_head(d)).collect();
        let dart_face = (0..2 * m).map(|d| g.face_of_dart(d)).collect();
        let mut radial = RadialGraph {
            base_n: n,
            base_m: m,
            face_count: fc,
            origin,
            rot,
            rdart_pos,
            dart_head,
            dart_face,
            quad_of: vec![usize::MAX; 4 * m],
            quad_walks: vec![Vec::new(); m],
        };
        radial.trace_quads(g);
        radial
    }

    fn trace_quads(&mut self, g: &PlaneGraph) {
        let total = 4 * self.base_m;
        let mut traced = 0usize;
        let mut quads_seen = 0usize;
        for start in 0..total {
            if self.quad_of[start] != usize::MAX {
                continue;
            }
            // Walk the radial face, collect its base-graph vertex nodes.
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                walk.push(d);
                d = self.next_face_rdart(d);
                if d == start {
                    break;
                }
            }
            assert_eq!(walk.len(), 4, "radial faces are quadrilaterals");
            let mut vs: Vec<usize> = walk
                .iter()
                .filter_map(|&rd| match self.origin[self.rtail(rd)] {
                    RadialNode::Vertex(v) => Some(v),
                    RadialNode::Face(_) => None,
                })
                .collect();
            vs.sort_unstable();
            vs.dedup();
            assert_eq!(vs.len(), 2, "radial face spans one base edge");
            let e = g
                .graph()
                .edge_index(vs[0], vs[1])
                .expect("radial face vertices form a base edge");
            for &rd in &walk {
                self.quad_of[rd] = e;
            }
            traced += walk.len();
            quads_seen += 1;
            self.quad_walks[e] = walk;
        }
        assert_eq!(traced, total);
        assert_eq!(quads_seen, self.base_m, "one radial face per base edge");
    }

    pub fn node_count(&self) -> usize {
        self.base_n + self.face_count
    }

    pub fn edge_count(&self) -> usize {
        2 * self.base_m
    }

    pub fn origin(&self, node: usize) -> RadialNode {
        self.origin[node]
    }

    pub fn vertex_node(&self, v: usize) -> usize {
        v
    }

    pub fn face_node(&self, f: usize) -> usize {
        self.base_n + f
    }

    pub fn rtwin(&self, rd: RDart) -> RDart {
        rd ^ 1
    }

    pub fn rtail(&self, rd: RDart) -> usize {
        if rd % 2 == 0 {
            // vertex node -> face node: radial edge rd/2 is base dart rd/2.
            self.base_dart_head(rd / 2)
        } else {
            self.base_n + self.base_dart_face(rd / 2)
        }
    }

    pub fn rhead(&self, rd: RDart) -> usize {
        self.rtail(rd ^ 1)
    }

    /// The base-graph edge whose quadrangular radial face lies right of `rd`.
    pub fn quad_of(&self, rd: RDart) -> usize {
        self.quad_of[rd]
    }

    pub fn rotation(&self, node: usize) -> &[RDart] {
        &self.rot[node]
    }

    pub fn rdart_pos(&self, rd: RDart) -> usize {
        self.rdart_pos[rd]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.rot[node].len()
    }

    pub fn next_face_rdart(&self, rd: RDart) -> RDart {
        let v = self.rhead(rd);
        let pos = self.rdart_pos[rd ^ 1];
        let deg = self.rot[v].len();
        self.rot[v][(pos + 1) % deg]
    }

    fn base_dart_head(&self, d: Dart) -> usize {
        self.dart_head[d]
    }

    fn base_dart_face(&self, d: Dart) -> usize {
        self.dart_face[d]
    }

    /// The radial edge (= base dart) of radial dart `rd`.
    pub fn redge(&self, rd: RDart) -> usize {
        rd / 2
    }

    /// Boundary walk of the quadrangular radial face around base edge `e`.
    pub fn quad_walk(&self, e: usize) -> &[RDart] {
        &self.quad_walks[e]
    }

    /// The radial dart of radial edge `re` leaving its vertex node.
    pub fn rdart_from_vertex(&self, re: usize) -> RDart {
        2 * re
    }
}

/// The radial (vertex-face incidence) graph of a plane graph.
pub fn radial_graph(g: &PlaneGraph) -> RadialGraph {
    RadialGraph::build(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> PlaneGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = AbstractGraph::new(n, &edges).unwrap();
        let rot = (0..n)
            .map(|i| vec![(i + n - 1) % n, (i + 1) % n])
            .collect();
        PlaneGraph::build(g, rot).unwrap()
    }

    pub(crate) fn k4() -> PlaneGraph {
        let g =
            AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // Vertex 3 in the middle of triangle 0,1,2.
        let rot = vec![
            vec![1, 3, 2],
            vec![2, 3, 0],
            vec![0, 3, 1],
            vec![0, 1, 2],
        ];
        PlaneGraph::build(g, rot).unwrap()
    }

    #[test]
    fn triangle_faces() {
        let c3 = cycle(3);
        assert_eq!(c3.face_count(), 2);
        assert!(c3.euler_sphere_ok());
    }

    #[test]
    fn k4_faces() {
        let g = k4();
        assert_eq!(g.face_count(), 4);
        assert!(g.euler_sphere_ok());
        assert!(is_triangulation(&g));
        assert!(is_three_connected(g.graph()));
    }

    #[test]
    fn k5_has_no_plane_rotation_system() {
        // Exhaustive over rotation systems of K5: all fail the genus check.
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((a, b));
            }
        }
        let g = AbstractGraph::new(5, &edges).unwrap();
        let mut any = false;
        let neighbor_sets: Vec<Vec<usize>> =
            (0..5).map(|v| g.neighbors(v).to_vec()).collect();
        // Fix first neighbor, permute the remaining three per vertex.
        fn perms(items: &[usize]) -> Vec<Vec<usize>> {
            if items.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for (i, &x) in items.iter().enumerate() {
                let rest: Vec<usize> = items
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &y)| y)
                    .collect();
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let per_vertex: Vec<Vec<Vec<usize>>> = neighbor_sets
            .iter()
            .map(|ns| {
                perms(&ns[1..])
                    .into_iter()
                    .map(|mut p| {
                        p.insert(0, ns[0]);
                        p
                    })
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; 5];
        loop {
            let rot: Vec<Vec<usize>> =
                (0..5).map(|v| per_vertex[v][idx[v]].clone()).collect();
            if PlaneGraph::build(g.clone(), rot).is_ok() {
                any = true;
                break;
            }
            let mut v = 0;
            loop {
                if v == 5 {
                    break;
                }
                idx[v] += 1;
                if idx[v] < per_vertex[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
            if v == 5 {
                break;
            }
        }
        assert!(!any, "K5 admitted a genus-0 rotation system");
    }

    #[test]
    fn subdivision() {
        let c3 = cycle(3);
        let s = subdivide_all_edges(&c3);
        assert_eq!(s.n(), 6);
        assert_eq!(s.m(), 6);
        assert_eq!(s.face_count(), 2);
        assert!(equivalent_drawings(&s, &cycle(6)));
        let k = k4();
        let sk = subdivide_all_edges(&k);
        assert_eq!((sk.n(), sk.m(), sk.face_count()), (10, 12, 4));
        // Un-subdividing restores an equivalent drawing.
        let back = smooth_vertices(&sk, &(4..10).collect::<Vec<_>>());
        assert!(equivalent_drawings(&back, &k));
    }

    #[test]
    fn triangulate_examples() {
        let c3 = cycle(3);
        let t = triangulate(&c3).unwrap();
        assert_eq!((t.n(), t.m()), (3, 3));
        // One chord leaves a quadrilateral face on the sphere, so the greedy
        // keeps going: C4 triangulates to K4.
        let c4 = cycle(4);
        let t = triangulate(&c4).unwrap();
        assert_eq!((t.n(), t.m(), t.face_count()), (4, 6, 4));
        assert!(is_triangulation(&t));
        // Star K1,3 triangulates to K4 by greedy chording.
        let g = AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let star = PlaneGraph::build(g, vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap();
        let t = triangulate(&star).unwrap();
        assert!(is_triangulation(&t));
        assert_eq!((t.n(), t.m()), (4, 6));
    }

    #[test]
    fn equivalence_basics() {
        let c4a = cycle(4);
        // A different rotation system of C4 (cycles have a unique embedding).
        let g = AbstractGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let c4b = PlaneGraph::build(g, vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        assert!(equivalent_drawings(&c4a, &c4b));
        let k = k4();
        assert!(equivalent_drawings(&k, &k.mirrored()));
        assert!(!oriented_equivalent(&cycle(3), &cycle(4)));
    }

    #[test]
    fn automorphism_counts() {
        // Orientation-preserving symmetries of the tetrahedron drawing: A4.
        assert_eq!(rotation_preserving_automorphism_count(&k4()), 12);
        // A cycle drawing: all 2n symmetries preserve the (trivial) rotations.
        assert_eq!(rotation_preserving_automorphism_count(&cycle(4)), 8);
        // K2: both endpoints swap.
        let g = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        let k2 = PlaneGraph::build(g, vec![vec![1], vec![0]]).unwrap();
        assert_eq!(rotation_preserving_automorphism_count(&k2), 2);
    }
}
