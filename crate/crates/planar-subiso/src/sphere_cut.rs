//! Sphere-cut decompositions of bounded width in near-linear time.
//!
//! The construction runs breadth-first search on the radial graph from a
//! root face, takes the dual tree of the radial graph minus the BFS-tree
//! duals (its nodes are the quadrangular radial faces, one per base edge),
//! expands every dual node into a small local ternary tree, and joins the
//! local trees along the dual edges. Every middle set then lies on a closed
//! curve in the radial graph: the fundamental cycle of a non-tree radial
//! edge for joined edges, a symmetric difference of such cycles for edges
//! inside a local tree, and the boundary of one quadrangular face for leaf
//! edges.

use crate::error::{Error, Result};
use crate::noose::NooseSeq;
use crate::plane_graph::{PlaneGraph, RDart, RadialGraph, RadialNode};
use std::collections::HashMap;
use std::fmt;

/// Breadth-first spanning tree of the radial graph.
#[derive(Debug, Clone)]
pub struct RadialBfs {
    pub root: usize,
    /// Radial dart (parent -> node) per node; `None` at the root.
    pub parent: Vec<Option<RDart>>,
    pub depth: Vec<usize>,
    /// Maximum depth over all radial nodes.
    pub eccentricity: usize,
    /// Radial edges (indexed by base dart) used by the tree.
    pub tree_edge: Vec<bool>,
}

/// BFS of the radial graph rooted at a face node. Neighbors are explored in
/// rotation order starting after the arrival dart, which makes the tree (and
/// everything derived from it) deterministic.
pub fn radial_bfs_tree(r: &RadialGraph, root_face: usize) -> Result<RadialBfs> {
    let nodes = r.node_count();
    let root = r.face_node(root_face);
    let mut parent: Vec<Option<RDart>> = vec![None; nodes];
    let mut depth = vec![usize::MAX; nodes];
    let mut tree_edge = vec![false; r.edge_count()];
    let mut queue = std::collections::VecDeque::new();
    depth[root] = 0;
    queue.push_back((root, None::<RDart>));
    let mut ecc = 0;
    let mut seen = 1usize;
    while let Some((x, arrived)) = queue.pop_front() {
        let rot = r.rotation(x);
        let deg = rot.len();
        let start = match arrived {
            Some(a) => r.rdart_pos(r.rtwin(a)) + 1,
            None => 0,
        };
        for j in 0..deg {
            let rd = rot[(start + j) % deg];
            let y = r.rhead(rd);
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                ecc = ecc.max(depth[y]);
                parent[y] = Some(rd);
                tree_edge[r.redge(rd)] = true;
                seen += 1;
                queue.push_back((y, Some(rd)));
            }
        }
    }
    if seen != nodes {
        return Err(Error::DisconnectedRadial);
    }
    Ok(RadialBfs {
        root,
        parent,
        depth,
        eccentricity: ecc,
        tree_edge,
    })
}

/// A noose stored as an oriented radial dart cycle together with its
/// alternating vertex/face reading. `darts[2i]` leaves `verts[i]`,
/// `darts[2i+1]` leaves `faces[i]`. The region the decomposition encloses
/// lies on the right of every dart.
#[derive(Debug, Clone)]
pub struct OrientedNoose {
    pub verts: Vec<usize>,
    pub faces: Vec<usize>,
    pub darts: Vec<RDart>,
}

impl OrientedNoose {
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn seq(&self) -> NooseSeq {
        NooseSeq::new(self.verts.clone(), self.faces.clone())
    }

    /// Radial edges of the curve, sorted.
    pub fn redges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.darts.iter().map(|&d| d / 2).collect();
        out.sort_unstable();
        out
    }

    /// The same curve with the other side enclosed.
    pub fn reversed(&self) -> OrientedNoose {
        let k = self.len();
        let verts: Vec<usize> = std::iter::once(self.verts[0])
            .chain(self.verts[1..].iter().rev().copied())
            .collect();
        let faces: Vec<usize> = (0..k).map(|i| self.faces[(k - 1 - i) % k]).collect();
        // Reversed order with every dart twinned is already aligned: the
        // first dart becomes v0 -> f_{k-1}.
        let darts: Vec<RDart> = self.darts.iter().rev().map(|&d| d ^ 1).collect();
        OrientedNoose { verts, faces, darts }
    }
}

/// Walks a set of radial darts into a single closed alternating curve with
/// the enclosed region on the right. Rejects sets that split into several
/// curves or revisit a vertex node.
fn extract_noose(r: &RadialGraph, darts: &[RDart]) -> Result<OrientedNoose> {
    if darts.is_empty() {
        return Err(Error::Internal("empty noose dart set".into()));
    }
    // Per node, member darts sorted by rotation position.
    let mut at_node: HashMap<usize, Vec<(usize, RDart)>> = HashMap::new();
    for &d in darts {
        at_node
            .entry(r.rtail(d))
            .or_default()
            .push((r.rdart_pos(d), d));
    }
    for list in at_node.values_mut() {
        list.sort_unstable();
    }
    let next_in_set = |d: RDart| -> Result<RDart> {
        let node = r.rhead(d);
        let list = at_node
            .get(&node)
            .ok_or_else(|| Error::Internal("curve leaves the dart set".into()))?;
        let from = r.rdart_pos(r.rtwin(d));
        // First member dart strictly after `from` in rotation order.
        let idx = list.partition_point(|&(p, _)| p <= from);
        Ok(list[idx % list.len()].1)
    };
    let start = *darts.iter().min().unwrap();
    let mut cycle = Vec::with_capacity(darts.len());
    let mut d = start;
    loop {
        cycle.push(d);
        d = next_in_set(d)?;
        if d == start {
            break;
        }
        if cycle.len() > darts.len() {
            return Err(Error::Internal("noose walk does not close".into()));
        }
    }
    if cycle.len() != darts.len() {
        return Err(Error::Internal(format!(
            "noose dart set splits into several curves ({} of {} used)",
            cycle.len(),
            darts.len()
        )));
    }
    // Rotate so the cycle starts at the smallest vertex node.
    let vert_positions: Vec<(usize, usize)> = cycle
        .iter()
        .enumerate()
        .filter_map(|(i, &d)| match r.origin(r.rtail(d)) {
            RadialNode::Vertex(v) => Some((v, i)),
            RadialNode::Face(_) => None,
        })
        .collect();
    if vert_positions.is_empty() {
        return Err(Error::Internal("noose without vertex nodes".into()));
    }
    let &(_, rot) = vert_positions.iter().min().unwrap();
    let mut cycle = cycle;
    cycle.rotate_left(rot);
    let mut verts = Vec::with_capacity(cycle.len() / 2);
    let mut faces = Vec::with_capacity(cycle.len() / 2);
    for (i, &d) in cycle.iter().enumerate() {
        match (i % 2 == 0, r.origin(r.rtail(d))) {
            (true, RadialNode::Vertex(v)) => verts.push(v),
            (false, RadialNode::Face(f)) => faces.push(f),
            _ => {
                return Err(Error::Internal("curve does not alternate".into()));
            }
        }
    }
    let mut distinct = verts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != verts.len() {
        return Err(Error::Internal("curve revisits a vertex".into()));
    }
    Ok(OrientedNoose {
        verts,
        faces,
        darts: cycle,
    })
}

/// The noose hugging one base edge: the boundary of its quadrangular radial
/// face, oriented with the edge on the right. Grazing corners of pendant
/// endpoints are not part of the boundary.
pub fn edge_disk_noose(r: &RadialGraph, gedge: usize) -> Result<OrientedNoose> {
    let walk = r.quad_walk(gedge);
    let darts: Vec<RDart> = walk
        .iter()
        .copied()
        .filter(|&d| r.quad_of(r.rtwin(d)) != gedge)
        .collect();
    extract_noose(r, &darts)
}

/// One edge of the decomposition tree.
#[derive(Debug, Clone)]
pub struct ScTreeEdge {
    pub a: usize,
    pub b: usize,
    pub noose: OrientedNoose,
    /// The endpoint on the side the noose orientation encloses.
    pub enclosed: usize,
}

impl ScTreeEdge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn mid(&self) -> &[usize] {
        &self.noose.verts
    }
}

/// Sphere-cut decomposition: unrooted ternary tree, leaf <-> edge bijection,
/// one oriented noose per tree edge.
#[derive(Debug, Clone)]
pub struct ScDecomposition {
    pub node_count: usize,
    pub edges: Vec<ScTreeEdge>,
    /// node -> incident tree-edge indices
    pub adjacency: Vec<Vec<usize>>,
    /// leaf node per base edge (mu backwards)
    pub leaf_of_gedge: Vec<usize>,
    /// base edge per node; usize::MAX for internal nodes
    pub gedge_of_leaf: Vec<usize>,
    pub width: usize,
    pub root_face: usize,
    pub radial_depth: usize,
}

impl ScDecomposition {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.gedge_of_leaf[node] != usize::MAX
    }
}

pub fn sc_decomposition(g: &PlaneGraph, root_face: usize) -> Result<ScDecomposition> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.graph().is_connected() {
        return Err(Error::NotConnected);
    }
    if root_face >= g.face_count() {
        return Err(Error::UnknownId(format!("face {root_face}")));
    }
    let r = RadialGraph::build(g);
    let bfs = radial_bfs_tree(&r, root_face)?;
    let m = g.m();

    if m == 1 {
        return Ok(ScDecomposition {
            node_count: 1,
            edges: Vec::new(),
            adjacency: vec![Vec::new()],
            leaf_of_gedge: vec![0],
            gedge_of_leaf: vec![0],
            width: 2,
            root_face,
            radial_depth: bfs.eccentricity,
        });
    }

    // Dual tree: nodes are the quadrangular radial faces (base edges); edges
    // are the non-tree radial edges.
    let mut dual_edges: Vec<(usize, usize, usize)> = Vec::new(); // (qa, qb, redge)
    for re in 0..r.edge_count() {
        if bfs.tree_edge[re] {
            continue;
        }
        let qa = r.quad_of(2 * re);
        let qb = r.quad_of(2 * re + 1);
        if qa == qb {
            return Err(Error::Internal("dual self-loop outside the BFS tree".into()));
        }
        dual_edges.push((qa, qb, re));
    }
    if dual_edges.len() != m - 1 {
        return Err(Error::Internal(format!(
            "dual tree has {} edges for {} quads",
            dual_edges.len(),
            m
        )));
    }

    // Fundamental cycles, one per dual edge, oriented toward each side.
    let fundamental: Vec<[Vec<RDart>; 2]> = dual_edges
        .iter()
        .map(|&(qa, qb, re)| {
            let toward_b = fundamental_cycle(&r, &bfs, re, qb);
            let toward_a: Vec<RDart> = toward_b.iter().map(|&d| d ^ 1).collect();
            let _ = qa;
            [toward_a, toward_b]
        })
        .collect();
    // Dart cycle enclosing the `side` quad of dual edge `de`.
    let enclosing = |de: usize, side_quad: usize| -> &Vec<RDart> {
        let (qa, _qb, _) = dual_edges[de];
        if side_quad == qa {
            &fundamental[de][0]
        } else {
            &fundamental[de][1]
        }
    };

    // Dual incidences in embedded clockwise order around each quad.
    let mut dual_of_redge: HashMap<usize, usize> = HashMap::new();
    for (de, &(_, _, re)) in dual_edges.iter().enumerate() {
        dual_of_redge.insert(re, de);
    }
    let mut dual_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut dual_pos: Vec<Vec<RDart>> = vec![Vec::new(); m]; // aligned walk darts
    for q in 0..m {
        for &d in r.quad_walk(q) {
            if let Some(&de) = dual_of_redge.get(&r.redge(d)) {
                dual_at[q].push(de);
                dual_pos[q].push(d);
            }
        }
    }

    // Build of the final tree.
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut edges: Vec<ScTreeEdge> = Vec::new();
    let mut gedge_of_leaf: Vec<usize> = Vec::new();
    let mut leaf_of_gedge = vec![usize::MAX; m];
    let mut new_node = |adjacency: &mut Vec<Vec<usize>>, gedge_of_leaf: &mut Vec<usize>, ge: usize| -> usize {
        adjacency.push(Vec::new());
        gedge_of_leaf.push(ge);
        adjacency.len() - 1
    };
    let mut push_edge = |edges: &mut Vec<ScTreeEdge>,
                         adjacency: &mut Vec<Vec<usize>>,
                         a: usize,
                         b: usize,
                         noose: OrientedNoose,
                         enclosed: usize| {
        let id = edges.len();
        adjacency[a].push(id);
        adjacency[b].push(id);
        edges.push(ScTreeEdge { a, b, noose, enclosed });
    };

    // Attachment node per (quad, incident dual edge).
    let mut attach: HashMap<(usize, usize), usize> = HashMap::new();

    for q in 0..m {
        let leaf = new_node(&mut adjacency, &mut gedge_of_leaf, q);
        leaf_of_gedge[q] = leaf;
        let dirs = dual_at[q].clone();
        let d = dirs.len();
        match d {
            0 => unreachable!("dual tree on >= 2 nodes has no isolated node"),
            1 => {
                // The leaf is its own port; the joined edge doubles as the
                // leaf edge.
                attach.insert((q, dirs[0]), leaf);
            }
            2 => {
                let z = new_node(&mut adjacency, &mut gedge_of_leaf, usize::MAX);
                push_edge(
                    &mut edges,
                    &mut adjacency,
                    z,
                    leaf,
                    extract_noose(&r, &quad_cut(&r, q))?,
                    leaf,
                );
                attach.insert((q, dirs[0]), z);
                attach.insert((q, dirs[1]), z);
            }
            3 | 4 => {
                // Dart cycle per incident dual edge, enclosing the far side.
                let away: Vec<&Vec<RDart>> = dirs
                    .iter()
                    .map(|&de| {
                        let (qa, qb, _) = dual_edges[de];
                        enclosing(de, if qa == q { qb } else { qa })
                    })
                    .collect();
                let groupings = pair_groupings(&r, &dual_pos[q], d);
                let mut built = None;
                for grouping in groupings {
                    match try_local_tree(&r, &grouping, &away) {
                        Ok(parts) => {
                            built = Some((grouping, parts));
                            break;
                        }
                        Err(_) => continue,
                    }
                }
                let (grouping, parts) = built.ok_or_else(|| {
                    Error::Internal(format!("no valid local tree at quad {q}"))
                })?;
                // Primary node carries the leaf.
                let z = new_node(&mut adjacency, &mut gedge_of_leaf, usize::MAX);
                push_edge(
                    &mut edges,
                    &mut adjacency,
                    z,
                    leaf,
                    extract_noose(&r, &quad_cut(&r, q))?,
                    leaf,
                );
                let mut part_iter = parts.into_iter();
                for group in &grouping {
                    match group.as_slice() {
                        [single] => {
                            attach.insert((q, dirs[*single]), z);
                        }
                        [x, y] => {
                            let z2 = new_node(&mut adjacency, &mut gedge_of_leaf, usize::MAX);
                            let noose = part_iter.next().expect("one noose per pair");
                            push_edge(&mut edges, &mut adjacency, z, z2, noose, z2);
                            attach.insert((q, dirs[*x]), z2);
                            attach.insert((q, dirs[*y]), z2);
                        }
                        _ => unreachable!(),
                    }
                }
            }
            _ => {
                return Err(Error::Internal(format!(
                    "quad {q} has dual degree {d} > 4"
                )))
            }
        }
    }

    // Joined edges along the dual tree.
    for (de, &(qa, qb, _re)) in dual_edges.iter().enumerate() {
        let na = *attach
            .get(&(qa, de))
            .ok_or_else(|| Error::Internal("missing port".into()))?;
        let nb = *attach
            .get(&(qb, de))
            .ok_or_else(|| Error::Internal("missing port".into()))?;
        let noose = extract_noose(&r, enclosing(de, qb))?;
        push_edge(&mut edges, &mut adjacency, na, nb, noose, nb);
    }

    let width = edges
        .iter()
        .map(|e| e.noose.len())
        .max()
        .unwrap_or(2)
        .max(2);
    let scd = ScDecomposition {
        node_count: adjacency.len(),
        edges,
        adjacency,
        leaf_of_gedge,
        gedge_of_leaf,
        width,
        root_face,
        radial_depth: bfs.eccentricity,
    };
    Ok(scd)
}

/// Boundary dart set of the region covered by one quadrangular radial face.
fn quad_cut(r: &RadialGraph, q: usize) -> Vec<RDart> {
    r.quad_walk(q)
        .iter()
        .copied()
        .filter(|&d| r.quad_of(r.rtwin(d)) != q)
        .collect()
}

/// Fundamental cycle of non-tree radial edge `re`, oriented so the region on
/// the right contains quad `far`.
fn fundamental_cycle(r: &RadialGraph, bfs: &RadialBfs, re: usize, far: usize) -> Vec<RDart> {
    let start = if r.quad_of(2 * re) == far { 2 * re } else { 2 * re + 1 };
    let s = r.rtail(start);
    let t = r.rhead(start);
    let mut up_t: Vec<RDart> = Vec::new();
    let mut up_s: Vec<RDart> = Vec::new();
    let (mut x, mut y) = (t, s);
    while bfs.depth[x] > bfs.depth[y] {
        let pd = bfs.parent[x].unwrap();
        up_t.push(pd ^ 1);
        x = r.rtail(pd);
    }
    while bfs.depth[y] > bfs.depth[x] {
        let pd = bfs.parent[y].unwrap();
        up_s.push(pd ^ 1);
        y = r.rtail(pd);
    }
    while x != y {
        let pdx = bfs.parent[x].unwrap();
        up_t.push(pdx ^ 1);
        x = r.rtail(pdx);
        let pdy = bfs.parent[y].unwrap();
        up_s.push(pdy ^ 1);
        y = r.rtail(pdy);
    }
    let mut cycle = vec![start];
    cycle.extend(up_t);
    cycle.extend(up_s.iter().rev().map(|&d| d ^ 1));
    cycle
}

/// Candidate ways to group 3 or 4 incident dual edges (given by their walk
/// darts, in embedded order) into a local ternary tree: pairs grouped under a
/// shared child node, singles attached to the primary node. Pairs whose two
/// boundary slots share a face corner are preferred; alternatives follow as
/// fallbacks.
fn pair_groupings(r: &RadialGraph, walk_darts: &[RDart], d: usize) -> Vec<Vec<Vec<usize>>> {
    let share_face_corner = |i: usize, j: usize| -> bool {
        // Darts in walk order; consecutive slots share the head of the
        // earlier dart. Non-consecutive slots never share a face corner.
        let di = walk_darts[i];
        let dj = walk_darts[j];
        let shared = if r.rhead(di) == r.rtail(dj) {
            r.rhead(di)
        } else if r.rhead(dj) == r.rtail(di) {
            r.rhead(dj)
        } else {
            return false;
        };
        matches!(r.origin(shared), RadialNode::Face(_))
    };
    let mut out = Vec::new();
    if d == 3 {
        let mut pairs: Vec<(usize, usize, usize)> = vec![(0, 1, 2), (1, 2, 0), (0, 2, 1)];
        pairs.sort_by_key(|&(i, j, _)| !share_face_corner(i, j));
        for (i, j, k) in pairs {
            out.push(vec![vec![i, j], vec![k]]);
        }
    } else {
        let mut options: Vec<((usize, usize), (usize, usize))> =
            vec![((0, 1), (2, 3)), ((1, 2), (3, 0)), ((0, 2), (1, 3))];
        options.sort_by_key(|&((a, b), (c, d))| {
            !(share_face_corner(a, b) && share_face_corner(c, d))
        });
        for ((a, b), (c, d)) in options {
            out.push(vec![vec![a, b], vec![c, d]]);
        }
    }
    out
}

/// Tries to realize a grouping: computes the symmetric-difference dart set
/// for every pair group and extracts it as a single curve. `away[i]` is the
/// cycle of incident dual edge i enclosing its far side.
fn try_local_tree(
    r: &RadialGraph,
    grouping: &[Vec<usize>],
    away: &[&Vec<RDart>],
) -> Result<Vec<OrientedNoose>> {
    let mut out = Vec::new();
    for group in grouping {
        if group.len() != 2 {
            continue;
        }
        let mut set: HashMap<usize, RDart> = HashMap::new();
        for &gi in group {
            for &dart in away[gi] {
                symdiff_insert(&mut set, r, dart)?;
            }
        }
        let darts: Vec<RDart> = set.values().copied().collect();
        out.push(extract_noose(r, &darts)?);
    }
    Ok(out)
}

fn symdiff_insert(set: &mut HashMap<usize, RDart>, r: &RadialGraph, dart: RDart) -> Result<()> {
    let re = r.redge(dart);
    match set.remove(&re) {
        None => {
            set.insert(re, dart);
            Ok(())
        }
        Some(prev) if prev == (dart ^ 1) => Ok(()),
        Some(_) => Err(Error::Internal(
            "same-direction dart met in symmetric difference".into(),
        )),
    }
}

impl fmt::Display for ScDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sc-decomposition: {} nodes, {} tree edges, width {}",
            self.node_count,
            self.edges.len(),
            self.width
        )
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Arity { node: usize, degree: usize },
    LeafBijection { detail: String },
    MiddleSet { edge: usize, expected: Vec<usize>, got: Vec<usize> },
    NotANoose { edge: usize },
    SymmetricDifference { node: usize },
    MidNotCovered { node: usize },
    WidthMismatch { stored: usize, actual: usize },
    WidthAboveRadialDepth { width: usize, depth: usize },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity { node, degree } => {
                write!(f, "node {node} has degree {degree}, expected 1 or 3")
            }
            Violation::LeafBijection { detail } => write!(f, "leaf bijection broken: {detail}"),
            Violation::MiddleSet { edge, expected, got } => write!(
                f,
                "tree edge {edge}: middle set {got:?} differs from recomputed {expected:?}"
            ),
            Violation::NotANoose { edge } => {
                write!(f, "tree edge {edge}: stored sequence is not a combinatorial noose")
            }
            Violation::SymmetricDifference { node } => {
                write!(f, "internal node {node}: nooses are not a symmetric difference")
            }
            Violation::MidNotCovered { node } => write!(
                f,
                "internal node {node}: parent middle set not inside the union of children"
            ),
            Violation::WidthMismatch { stored, actual } => {
                write!(f, "stored width {stored} differs from actual {actual}")
            }
            Violation::WidthAboveRadialDepth { width, depth } => {
                write!(f, "width {width} exceeds the radial BFS depth {depth}")
            }
            Violation::Disconnected => write!(f, "decomposition tree is not connected"),
        }
    }
}

/// Recomputes every structural invariant from scratch. Returns all
/// violations found (empty = valid).
pub fn validate(scd: &ScDecomposition, g: &PlaneGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = g.m();

    // Arity.
    for node in 0..scd.node_count {
        let deg = scd.adjacency[node].len();
        let ok = if scd.is_leaf(node) {
            deg <= 1
        } else {
            deg == 3
        };
        if !ok {
            out.push(Violation::Arity { node, degree: deg });
        }
    }

    // Leaf bijection.
    let mut count = vec![0usize; m];
    for node in 0..scd.node_count {
        let ge = scd.gedge_of_leaf[node];
        if ge != usize::MAX {
            if ge >= m {
                out.push(Violation::LeafBijection {
                    detail: format!("leaf {node} names edge {ge} out of range"),
                });
            } else {
                count[ge] += 1;
            }
        }
    }
    for (ge, &c) in count.iter().enumerate() {
        if c != 1 {
            out.push(Violation::LeafBijection {
                detail: format!("edge {ge} has {c} leaves"),
            });
        }
    }

    if scd.edges.is_empty() {
        if m > 1 {
            out.push(Violation::Disconnected);
        }
        return out;
    }

    // Below-sets by rooting at node 0 (any node works for partitioning).
    // below[e] = base edges on the side of tree edge e away from the root.
    let mut below: Vec<Vec<bool>> = vec![Vec::new(); scd.edges.len()];
    {
        let root = 0usize;
        let mut order = Vec::new();
        let mut stack = vec![(root, usize::MAX)];
        let mut seen_nodes = 0usize;
        let mut parent_edge = vec![usize::MAX; scd.node_count];
        while let Some((v, via)) = stack.pop() {
            seen_nodes += 1;
            order.push((v, via));
            for &ei in &scd.adjacency[v] {
                if ei != via {
                    parent_edge[scd.edges[ei].other(v)] = ei;
                    stack.push((scd.edges[ei].other(v), ei));
                }
            }
        }
        if seen_nodes != scd.node_count {
            out.push(Violation::Disconnected);
            return out;
        }
        for &(v, via) in order.iter().rev() {
            if via == usize::MAX {
                continue;
            }
            let mut set = vec![false; m];
            if scd.is_leaf(v) {
                set[scd.gedge_of_leaf[v]] = true;
            }
            for &ei in &scd.adjacency[v] {
                if ei != via {
                    let child = &below[ei];
                    for (i, &b) in child.iter().enumerate() {
                        if b {
                            set[i] = true;
                        }
                    }
                }
            }
            below[via] = set;
        }
    }

    // Middle sets from scratch, noose validity, orientation side.
    let occ = crate::noose::FaceOccurrences::new(g);
    for (ei, te) in scd.edges.iter().enumerate() {
        let inside = &below[ei];
        let mut mid_expected: Vec<usize> = (0..g.n())
            .filter(|&v| {
                let mut has_in = false;
                let mut has_out = false;
                for &u in g.graph().neighbors(v) {
                    let e = g.graph().edge_index(v, u).unwrap();
                    if inside[e] {
                        has_in = true;
                    } else {
                        has_out = true;
                    }
                }
                has_in && has_out
            })
            .collect();
        mid_expected.sort_unstable();
        let mut mid_got = te.noose.verts.clone();
        mid_got.sort_unstable();
        if mid_expected != mid_got {
            out.push(Violation::MiddleSet {
                edge: ei,
                expected: mid_expected,
                got: mid_got,
            });
        }
        match crate::noose::is_combinatorial_noose_with(&te.noose.seq(), g, &occ) {
            Ok(true) => {}
            _ => out.push(Violation::NotANoose { edge: ei }),
        }
    }

    // Symmetric difference at internal nodes.
    for node in 0..scd.node_count {
        if scd.adjacency[node].len() != 3 {
            continue;
        }
        let es: Vec<usize> = scd.adjacency[node].clone();
        for which in 0..3 {
            let target = es[which];
            let (x, y) = (es[(which + 1) % 3], es[(which + 2) % 3]);
            let mut sym: Vec<usize> = Vec::new();
            let mut a = scd.edges[x].noose.redges();
            let b = scd.edges[y].noose.redges();
            let mut i = 0;
            let mut j = 0;
            while i < a.len() || j < b.len() {
                if i < a.len() && (j == b.len() || a[i] < b[j]) {
                    sym.push(a[i]);
                    i += 1;
                } else if j < b.len() && (i == a.len() || b[j] < a[i]) {
                    sym.push(b[j]);
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            a = scd.edges[target].noose.redges();
            if a != sym {
                out.push(Violation::SymmetricDifference { node });
                break;
            }
            // mid(target) inside mid(x) union mid(y).
            let union: std::collections::HashSet<usize> = scd.edges[x]
                .noose
                .verts
                .iter()
                .chain(scd.edges[y].noose.verts.iter())
                .copied()
                .collect();
            if !scd.edges[target].noose.verts.iter().all(|v| union.contains(v)) {
                out.push(Violation::MidNotCovered { node });
                break;
            }
        }
    }

    // Width.
    let actual = scd.edges.iter().map(|e| e.noose.len()).max().unwrap_or(2).max(2);
    if actual != scd.width {
        out.push(Violation::WidthMismatch {
            stored: scd.width,
            actual,
        });
    }
    if scd.width > scd.radial_depth.max(2) {
        out.push(Violation::WidthAboveRadialDepth {
            width: scd.width,
            depth: scd.radial_depth,
        });
    }

    out
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

pub fn to_dot(scd: &ScDecomposition) -> String {
    use std::fmt::Write as _;
    let mut s = String::from("graph scdecomposition {\n");
    for node in 0..scd.node_count {
        if scd.is_leaf(node) {
            let _ = writeln!(
                s,
                "  n{node} [shape=box,label=\"e{}\"];",
                scd.gedge_of_leaf[node]
            );
        } else {
            let _ = writeln!(s, "  n{node} [shape=point];");
        }
    }
    for te in &scd.edges {
        let mid: Vec<String> = te.noose.verts.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "  n{} -- n{} [label=\"{{{}}}\"];", te.a, te.b, mid.join(","));
    }
    s.push_str("}\n");
    s
}

pub fn to_json(scd: &ScDecomposition, g: &PlaneGraph) -> serde_json::Value {
    let edges: Vec<serde_json::Value> = scd
        .edges
        .iter()
        .map(|te| {
            serde_json::json!({
                "a": te.a,
                "b": te.b,
                "enclosed": te.enclosed,
                "mid": te.noose.verts,
                "noose": noose_alternating(&te.noose),
            })
        })
        .collect();
    let mu: Vec<serde_json::Value> = (0..g.m())
        .map(|e| {
            let (u, v) = g.graph().edges()[e];
            serde_json::json!({
                "leaf": scd.leaf_of_gedge[e],
                "edge": [u, v],
            })
        })
        .collect();
    serde_json::json!({
        "schema": 1,
        "nodes": scd.node_count,
        "width": scd.width,
        "root_face": scd.root_face,
        "radial_depth": scd.radial_depth,
        "edges": edges,
        "mu": mu,
    })
}

fn noose_alternating(n: &OrientedNoose) -> Vec<serde_json::Value> {
    let mut out = Vec::with_capacity(2 * n.len());
    for i in 0..n.len() {
        out.push(serde_json::json!({"v": n.verts[i]}));
        out.push(serde_json::json!({"f": n.faces[i]}));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::AbstractGraph;
    use crate::plane_graph::RadialGraph;

    fn k2() -> PlaneGraph {
        let g = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        PlaneGraph::build(g, vec![vec![1], vec![0]]).unwrap()
    }

    #[test]
    fn radial_bfs_depths() {
        let c3 = generate::cycle(3);
        let r = RadialGraph::build(&c3);
        let bfs = radial_bfs_tree(&r, 0).unwrap();
        assert_eq!(bfs.eccentricity, 2);
        let r2 = RadialGraph::build(&k2());
        let bfs2 = radial_bfs_tree(&r2, 0).unwrap();
        assert_eq!(bfs2.eccentricity, 1);
        let k4 = {
            let g = AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
                .unwrap();
            PlaneGraph::build(
                g,
                vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            )
            .unwrap()
        };
        let r4 = RadialGraph::build(&k4);
        for f in 0..k4.face_count() {
            let b = radial_bfs_tree(&r4, f).unwrap();
            assert!(b.eccentricity <= 3, "2l+1 with spanning depth 1");
        }
    }

    #[test]
    fn k2_degenerate() {
        let scd = sc_decomposition(&k2(), 0).unwrap();
        assert_eq!(scd.node_count, 1);
        assert_eq!(scd.width, 2);
        assert!(validate(&scd, &k2()).is_empty());
    }

    #[test]
    fn c3_width_two() {
        let c3 = generate::cycle(3);
        let scd = sc_decomposition(&c3, 0).unwrap();
        assert!(validate(&scd, &c3).is_empty(), "{:?}", validate(&scd, &c3));
        assert_eq!(scd.width, 2);
    }

    #[test]
    fn k4_width_three() {
        let g = AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let k4 = PlaneGraph::build(
            g,
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
        )
        .unwrap();
        let scd = sc_decomposition(&k4, 0).unwrap();
        let violations = validate(&scd, &k4);
        assert!(violations.is_empty(), "{violations:?}");
        assert!(scd.width <= 3, "width {} exceeds bw(K4)", scd.width);
        let leaves = (0..scd.node_count).filter(|&v| scd.is_leaf(v)).count();
        assert_eq!(leaves, 6);
    }

    #[test]
    fn grids_validate() {
        for r in 2..=5 {
            let g = generate::grid(r);
            let scd = sc_decomposition(&g, 0).unwrap();
            let violations = validate(&scd, &g);
            assert!(violations.is_empty(), "grid {r}: {violations:?}");
        }
    }

    #[test]
    fn deterministic() {
        let g = generate::grid(4);
        let a = to_json(&sc_decomposition(&g, 0).unwrap(), &g);
        let b = to_json(&sc_decomposition(&g, 0).unwrap(), &g);
        assert_eq!(a, b);
    }

    #[test]
    fn negative_controls() {
        let c3 = generate::cycle(3);
        let mut scd = sc_decomposition(&c3, 0).unwrap();
        // Swap two leaf labels without touching middle sets.
        let leaves: Vec<usize> = (0..scd.node_count).filter(|&v| scd.is_leaf(v)).collect();
        scd.gedge_of_leaf.swap(leaves[0], leaves[1]);
        scd.leaf_of_gedge.swap(
            scd.gedge_of_leaf[leaves[0]],
            scd.gedge_of_leaf[leaves[1]],
        );
        let violations = validate(&scd, &c3);
        assert!(
            violations.iter().any(|v| matches!(v, Violation::MiddleSet { .. })),
            "stale middle sets must be reported: {violations:?}"
        );
    }
}

