//! Embedded dynamic programming over a sphere-cut decomposition.
//!
//! Instead of tracking how the pattern hits the host separators, every table
//! entry records how a separator noose of the host is routed through the
//! drawn pattern: which noose vertices sit on pattern vertices, which cross
//! pattern faces, and which pattern edges already lie on the enclosed side.
//! Tables are merged bottom-up; entries whose enclosed edge set grows to the
//! whole pattern are diverted into a completion accumulator. Every matched
//! subgraph completes once per rotation-preserving isomorphism onto the
//! pattern drawing, and the final count divides that factor out.

use crate::error::{Error, Result};
use crate::noose::{is_combinatorial_noose_with, FaceOccurrences, Noose, NooseSeq};
use crate::plane_graph::{rotation_preserving_automorphism_count, PlaneGraph};
use crate::sphere_cut::{OrientedNoose, ScDecomposition};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Decide,
    Count,
    List,
}

#[derive(Debug, Clone)]
pub struct DpOptions {
    pub mode: Mode,
    /// Maximum number of subgraphs to reconstruct in list mode.
    pub limit: usize,
    /// Shuffles the order in which ready merges run (results are invariant).
    pub schedule_seed: Option<u64>,
    pub trace: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            mode: Mode::Count,
            limit: usize::MAX,
            schedule_seed: None,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DpResult {
    pub found: bool,
    /// Number of distinct host subgraphs (automorphic images collapsed).
    pub count: u64,
    /// Host edge-index sets in list mode, deduplicated, capped at `limit`.
    pub listed: Vec<Vec<usize>>,
    /// Table size per processed tree edge when tracing.
    pub table_sizes: Vec<usize>,
    pub max_table: usize,
    pub total_tuples: usize,
}

/// Image of one host noose element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Img {
    V(u8),
    F(u8),
}

impl Img {
    fn as_vert(self) -> Option<usize> {
        match self {
            Img::V(a) => Some(a as usize),
            Img::F(_) => None,
        }
    }

    fn as_face(self) -> Option<usize> {
        match self {
            Img::F(g) => Some(g as usize),
            Img::V(_) => None,
        }
    }
}

/// Pattern-side context shared by all tables of one drawing variant.
pub struct PatternCtx {
    pub drawing: PlaneGraph,
    pub k: usize,
    pub full_mask: u32,
    /// Incident pattern-edge mask per pattern vertex.
    pub adj_mask: Vec<u32>,
    /// Endpoint mask per pattern edge.
    pub edge_verts: Vec<u32>,
    /// Oriented noose hugging pattern edge {a,b}, as
    /// [a, face(b->a), b, face(a->b)] (same convention as host leaf nooses).
    pub edge_noose: Vec<(usize, usize, usize, usize)>,
    /// Valid lens nooses [a, g, b, g]: vertex pairs on a common face whose
    /// doubled crossing does not interleave.
    pub lenses: Vec<(usize, usize, usize)>,
    /// Faces incident to each pattern vertex.
    pub faces_at: Vec<Vec<usize>>,
    pub occ: FaceOccurrences,
    /// Rotation-preserving automorphisms of the drawing.
    pub aut: u64,
    /// Optional universe of pattern nooses for cross-checks in tests.
    pub noose_universe: Option<HashSet<NooseSeq>>,
}

impl PatternCtx {
    pub fn new(drawing: PlaneGraph) -> Result<PatternCtx> {
        let k = drawing.n();
        if k < 2 {
            return Err(Error::Internal(
                "single-vertex patterns are handled by the driver".into(),
            ));
        }
        if !drawing.graph().is_connected() {
            return Err(Error::PatternDisconnected);
        }
        if drawing.m() > 32 {
            return Err(Error::PatternTooLarge(drawing.m(), 32));
        }
        let m = drawing.m();
        let full_mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        let mut adj_mask = vec![0u32; k];
        let mut edge_verts = vec![0u32; m];
        for (e, &(a, b)) in drawing.graph().edges().iter().enumerate() {
            adj_mask[a] |= 1 << e;
            adj_mask[b] |= 1 << e;
            edge_verts[e] = (1 << a) | (1 << b);
        }
        let edge_noose = drawing
            .graph()
            .edges()
            .iter()
            .map(|&(a, b)| {
                let f_ab = drawing.face_of_dart(drawing.dart(a, b).unwrap());
                let f_ba = drawing.face_of_dart(drawing.dart(b, a).unwrap());
                (a, f_ba, b, f_ab)
            })
            .collect();
        let occ = FaceOccurrences::new(&drawing);
        let faces_at: Vec<Vec<usize>> = (0..k).map(|v| drawing.faces_at_vertex(v)).collect();
        let mut lenses = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                for &g in &faces_at[a] {
                    if !drawing.vertex_on_face(b, g) {
                        continue;
                    }
                    let seq = NooseSeq::new(vec![a, b], vec![g, g]);
                    if is_combinatorial_noose_with(&seq, &drawing, &occ).unwrap_or(false) {
                        lenses.push((a, b, g));
                    }
                }
            }
        }
        let aut = rotation_preserving_automorphism_count(&drawing);
        Ok(PatternCtx {
            k,
            full_mask,
            adj_mask,
            edge_verts,
            edge_noose,
            lenses,
            faces_at,
            occ,
            aut,
            noose_universe: None,
            drawing,
        })
    }

    fn verts_of(&self, h: u32) -> u32 {
        let mut out = 0;
        let mut bits = h;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            out |= self.edge_verts[e];
            bits &= bits - 1;
        }
        out
    }
}

/// One DP entry: positional images of a host noose plus the enclosed pattern
/// edge set.
#[derive(Debug, Clone)]
pub struct Tuple {
    pub gamma: Box<[Img]>,
    pub h_sub: u32,
    pub flag: bool,
    pub mult: u64,
    /// Pattern vertices used by vertex-type images.
    v1_mask: u32,
    /// Endpoints of `h_sub`.
    verts_mask: u32,
    prov: Prov,
}

#[derive(Debug, Clone)]
enum Prov {
    /// Leaf entry; `Some(e)` when host edge `e` is matched.
    Leaf(Option<usize>),
    /// Child tuple index pairs that produced this entry.
    Pairs(Vec<(u32, u32)>),
}

#[derive(Debug, Default)]
pub struct Table {
    pub tuples: Vec<Tuple>,
    index: HashMap<(Box<[Img]>, u32, bool), u32>,
}

impl Table {
    fn insert(
        &mut self,
        gamma: Box<[Img]>,
        h_sub: u32,
        flag: bool,
        mult: u64,
        from: Option<(u32, u32)>,
    ) {
        match self.index.entry((gamma.clone(), h_sub, flag)) {
            std::collections::hash_map::Entry::Occupied(o) => {
                let t = &mut self.tuples[*o.get() as usize];
                t.mult += mult;
                if let (Prov::Pairs(ps), Some(pair)) = (&mut t.prov, from) {
                    ps.push(pair);
                }
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                let id = self.tuples.len() as u32;
                slot.insert(id);
                let prov = match from {
                    Some(pair) => Prov::Pairs(vec![pair]),
                    None => Prov::Leaf(None),
                };
                self.tuples.push(Tuple {
                    v1_mask: 0,
                    verts_mask: 0,
                    gamma,
                    h_sub,
                    flag,
                    mult,
                    prov,
                });
            }
        }
    }

    fn insert_leaf(&mut self, gamma: Box<[Img]>, h_sub: u32, flag: bool, matched: Option<usize>) {
        debug_assert!(!self.index.contains_key(&(gamma.clone(), h_sub, flag)));
        self.index
            .insert((gamma.clone(), h_sub, flag), self.tuples.len() as u32);
        self.tuples.push(Tuple {
            v1_mask: 0,
            verts_mask: 0,
            gamma,
            h_sub,
            flag,
            mult: 1,
            prov: Prov::Leaf(matched),
        });
    }

    fn finalize_masks(&mut self, ctx: &PatternCtx) {
        for t in &mut self.tuples {
            t.v1_mask = t
                .gamma
                .iter()
                .filter_map(|i| i.as_vert())
                .fold(0, |m, a| m | (1 << a));
            t.verts_mask = ctx.verts_of(t.h_sub);
        }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// The noose a table is aligned to: parallel vertex/face id slices. Image
/// slot 2i belongs to verts[i], slot 2i+1 to faces[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedNoose {
    pub verts: Vec<usize>,
    pub faces: Vec<usize>,
}

impl AlignedNoose {
    fn from_oriented(n: &OrientedNoose) -> AlignedNoose {
        AlignedNoose {
            verts: n.verts.clone(),
            faces: n.faces.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    fn slots(&self) -> usize {
        2 * self.verts.len()
    }

    fn slot_element(&self, slot: usize) -> (bool, usize) {
        if slot % 2 == 0 {
            (true, self.verts[slot / 2])
        } else {
            (false, self.faces[slot / 2])
        }
    }

    fn reversed(&self) -> AlignedNoose {
        let k = self.verts.len();
        AlignedNoose {
            verts: std::iter::once(self.verts[0])
                .chain(self.verts[1..].iter().rev().copied())
                .collect(),
            faces: (0..k).map(|i| self.faces[(k - 1 - i) % k]).collect(),
        }
    }
}

/// Checks one mapping from scratch: consistent images on repeated host
/// elements, constant face images between consecutive mapped vertices, the
/// induced sequence a combinatorial noose of the pattern, and pattern edges
/// between mapped noose vertices backed by host edges. Returns the induced
/// pattern noose when valid.
pub fn valid_mapping(
    host: &PlaneGraph,
    noose: &AlignedNoose,
    gamma: &[Img],
    ctx: &PatternCtx,
) -> Option<Noose> {
    let slots = noose.slots();
    assert_eq!(gamma.len(), slots);
    let mut vert_img: HashMap<usize, Img> = HashMap::new();
    let mut face_img: HashMap<usize, usize> = HashMap::new();
    for s in 0..slots {
        let (is_vert, id) = noose.slot_element(s);
        if is_vert {
            if *vert_img.entry(id).or_insert(gamma[s]) != gamma[s] {
                return None;
            }
        } else {
            let g = gamma[s].as_face()?;
            if *face_img.entry(id).or_insert(g) != g {
                return None;
            }
        }
    }
    induced_noose(host, noose, gamma, ctx)
}

/// Derives the pattern noose induced by the images, enforcing run-constancy
/// of face images, injectivity, the noose conditions and edge preservation.
fn induced_noose(
    host: &PlaneGraph,
    noose: &AlignedNoose,
    gamma: &[Img],
    ctx: &PatternCtx,
) -> Option<Noose> {
    let slots = noose.slots();
    let vpos: Vec<usize> = (0..slots)
        .step_by(2)
        .filter(|&s| gamma[s].as_vert().is_some())
        .collect();
    if vpos.is_empty() {
        let g0 = gamma[0].as_face()?;
        if gamma.iter().any(|i| i.as_face() != Some(g0)) {
            return None;
        }
        return Some(Noose::Empty { face: g0 });
    }
    let p = vpos.len();
    let mut pverts = Vec::with_capacity(p);
    let mut pfaces = Vec::with_capacity(p);
    let mut host_of = Vec::with_capacity(p);
    for i in 0..p {
        let s = vpos[i];
        let next = vpos[(i + 1) % p];
        pverts.push(gamma[s].as_vert().unwrap());
        host_of.push(noose.slot_element(s).1);
        // Slots strictly between s and next must carry one constant face.
        let mut t = (s + 1) % slots;
        let mut run_face: Option<usize> = None;
        loop {
            if t == next {
                break;
            }
            let g = gamma[t].as_face()?;
            match run_face {
                None => run_face = Some(g),
                Some(prev) if prev == g => {}
                Some(_) => return None,
            }
            t = (t + 1) % slots;
        }
        pfaces.push(run_face?);
    }
    let mut distinct = pverts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != p {
        return None;
    }
    let seq = NooseSeq::new(pverts.clone(), pfaces.clone());
    if !is_combinatorial_noose_with(&seq, &ctx.drawing, &ctx.occ).unwrap_or(false) {
        return None;
    }
    for i in 0..p {
        for j in i + 1..p {
            if ctx.drawing.graph().has_edge(pverts[i], pverts[j])
                && !host.graph().has_edge(host_of[i], host_of[j])
            {
                return None;
            }
        }
    }
    if let Some(universe) = &ctx.noose_universe {
        if !universe.contains(&seq) {
            return None;
        }
    }
    Some(Noose::Seq(seq))
}

#[derive(Debug, Default)]
struct Completions {
    any_flagged: bool,
    flagged_mult: u64,
    events: Vec<CompletionEvent>,
}

#[derive(Debug, Clone)]
enum CompletionEvent {
    /// Matched at a single leaf (one-edge pattern).
    Leaf { gedge: usize, flag: bool },
    /// Two child tuples that fit and cover the whole pattern.
    Pair {
        left_edge: EdgeRef,
        left: u32,
        right_edge: EdgeRef,
        right: u32,
        flag: bool,
    },
}

/// Where a table lives: a regular tree edge or the root leaf's own table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeRef {
    Tree(usize),
    RootLeaf,
    SoloLeaf,
}

struct Run<'a> {
    host: &'a PlaneGraph,
    ctx: &'a PatternCtx,
    scd: &'a ScDecomposition,
    required: &'a [bool],
    excluded: &'a [bool],
    opts: &'a DpOptions,
    tables: HashMap<usize, Table>,
    nooses: HashMap<usize, AlignedNoose>,
    root_leaf_table: Option<Table>,
    solo_table: Option<Table>,
    children: HashMap<usize, (usize, usize)>,
    completions: Completions,
    trace_sizes: Vec<usize>,
    max_table: usize,
    total_tuples: usize,
}

/// Runs the embedded dynamic program for one pattern drawing over one
/// decomposed host. `required` flags the host vertices a match must touch;
/// `excluded` vertices can never be matched (the layering apex).
pub fn run_dp(
    scd: &ScDecomposition,
    host: &PlaneGraph,
    ctx: &PatternCtx,
    required: &[bool],
    excluded: &[bool],
    opts: &DpOptions,
) -> Result<DpResult> {
    let mut run = Run {
        host,
        ctx,
        scd,
        required,
        excluded,
        opts,
        tables: HashMap::new(),
        nooses: HashMap::new(),
        root_leaf_table: None,
        solo_table: None,
        children: HashMap::new(),
        completions: Completions::default(),
        trace_sizes: Vec::new(),
        max_table: 0,
        total_tuples: 0,
    };
    run.execute()?;
    run.finish()
}

impl<'a> Run<'a> {
    fn execute(&mut self) -> Result<()> {
        if self.host.m() == 1 {
            // Single-edge host: its leaf table is the whole computation.
            let (u, v) = self.host.graph().edges()[0];
            let f_uv = self.host.face_of_dart(self.host.dart(u, v).unwrap());
            let f_vu = self.host.face_of_dart(self.host.dart(v, u).unwrap());
            let noose = AlignedNoose {
                verts: vec![u, v],
                faces: vec![f_vu, f_uv],
            };
            let table = self.leaf_table(0, &noose, EdgeRef::SoloLeaf)?;
            self.solo_table = Some(table);
            return Ok(());
        }

        // Root at the leaf of base edge 0 and process edges bottom-up.
        let root = self.scd.leaf_of_gedge[0];
        let mut parent_edge = vec![usize::MAX; self.scd.node_count];
        let mut order = Vec::new();
        let mut stack = vec![(root, usize::MAX)];
        while let Some((node, via)) = stack.pop() {
            order.push((node, via));
            for &ei in &self.scd.adjacency[node] {
                if ei != via {
                    let other = self.scd.edges[ei].other(node);
                    parent_edge[other] = ei;
                    stack.push((other, ei));
                }
            }
        }

        let mut pending_children: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut ready: Vec<usize> = Vec::new();
        for (node, via) in order.iter().copied() {
            if via == usize::MAX {
                continue;
            }
            let kids: Vec<usize> = self.scd.adjacency[node]
                .iter()
                .copied()
                .filter(|&ei| ei != via)
                .collect();
            if kids.is_empty() {
                ready.push(via);
            } else {
                pending_children.insert(via, kids);
            }
        }
        ready.sort_unstable();
        let mut rng = self.opts.schedule_seed.map(ChaCha8Rng::seed_from_u64);
        let mut done: HashSet<usize> = HashSet::new();
        while let Some(ei) = {
            if let Some(rng) = rng.as_mut() {
                ready.shuffle(rng);
            }
            ready.pop()
        } {
            self.process_edge(ei, &parent_edge, &mut rng)?;
            done.insert(ei);
            if self.opts.mode == Mode::Decide && self.completions.any_flagged {
                return Ok(());
            }
            let below = self.below_node(ei, &parent_edge);
            let up = self.scd.edges[ei].other(below);
            let parent = parent_edge[up];
            if parent != usize::MAX && !done.contains(&parent) {
                if let Some(kids) = pending_children.get(&parent) {
                    if kids.iter().all(|k| done.contains(k)) {
                        ready.push(parent);
                    }
                }
            }
        }

        let top = self.scd.adjacency[root][0];
        self.final_combine(root, top)?;
        Ok(())
    }

    /// The endpoint of tree edge `ei` on the side away from the root.
    fn below_node(&self, ei: usize, parent_edge: &[usize]) -> usize {
        let te = &self.scd.edges[ei];
        if parent_edge[te.a] == ei {
            te.a
        } else {
            te.b
        }
    }

    fn oriented_below(&self, ei: usize, parent_edge: &[usize]) -> AlignedNoose {
        let te = &self.scd.edges[ei];
        let below = self.below_node(ei, parent_edge);
        if te.enclosed == below {
            AlignedNoose::from_oriented(&te.noose)
        } else {
            AlignedNoose::from_oriented(&te.noose.reversed())
        }
    }

    fn process_edge(
        &mut self,
        ei: usize,
        parent_edge: &[usize],
        rng: &mut Option<ChaCha8Rng>,
    ) -> Result<()> {
        let below = self.below_node(ei, parent_edge);
        let noose = self.oriented_below(ei, parent_edge);
        let table = if self.scd.is_leaf(below) {
            self.leaf_table(self.scd.gedge_of_leaf[below], &noose, EdgeRef::Tree(ei))?
        } else {
            let mut kids: Vec<usize> = self.scd.adjacency[below]
                .iter()
                .copied()
                .filter(|&k| k != ei)
                .collect();
            debug_assert_eq!(kids.len(), 2);
            kids.sort_unstable();
            if let Some(rng) = rng.as_mut() {
                kids.shuffle(rng);
            }
            self.children.insert(ei, (kids[0], kids[1]));
            let nl = self.nooses[&kids[0]].clone();
            let nr = self.nooses[&kids[1]].clone();
            let tl = std::mem::take(self.tables.get_mut(&kids[0]).unwrap());
            let tr = std::mem::take(self.tables.get_mut(&kids[1]).unwrap());
            let out = self.merge_tables(
                (&tl, &nl, EdgeRef::Tree(kids[0])),
                (&tr, &nr, EdgeRef::Tree(kids[1])),
                Some(&noose),
            )?;
            if self.opts.mode == Mode::List {
                self.tables.insert(kids[0], tl);
                self.tables.insert(kids[1], tr);
            } else {
                self.tables.remove(&kids[0]);
                self.tables.remove(&kids[1]);
                self.nooses.remove(&kids[0]);
                self.nooses.remove(&kids[1]);
            }
            out
        };
        if self.opts.trace {
            self.trace_sizes.push(table.len());
        }
        self.max_table = self.max_table.max(table.len());
        self.total_tuples += table.len();
        self.tables.insert(ei, table);
        self.nooses.insert(ei, noose);
        Ok(())
    }

    /// The root leaf's own table meets the table accumulated over the rest
    /// of the tree; only completions survive.
    fn final_combine(&mut self, root: usize, top: usize) -> Result<()> {
        let below_noose = self.nooses[&top].clone();
        let leaf_noose = below_noose.reversed();
        let ge = self.scd.gedge_of_leaf[root];
        let leaf_table = self.leaf_table(ge, &leaf_noose, EdgeRef::RootLeaf)?;
        let below_table = std::mem::take(self.tables.get_mut(&top).unwrap());
        self.merge_tables(
            (&below_table, &below_noose, EdgeRef::Tree(top)),
            (&leaf_table, &leaf_noose, EdgeRef::RootLeaf),
            None,
        )?;
        if self.opts.mode == Mode::List {
            self.tables.insert(top, below_table);
            self.root_leaf_table = Some(leaf_table);
        }
        Ok(())
    }

    /// Leaf table for host edge `ge` on its disk-enclosing noose.
    fn leaf_table(&mut self, ge: usize, noose: &AlignedNoose, at: EdgeRef) -> Result<Table> {
        let (u, v) = self.host.graph().edges()[ge];
        let ctx = self.ctx;
        let mut table = Table::default();
        let fc = ctx.drawing.face_count();
        let full = ctx.full_mask;
        let mut emit = |completions: &mut Completions,
                        table: &mut Table,
                        gamma: Vec<Img>,
                        h: u32,
                        flag: bool| {
            if h == full {
                completions.record_leaf(ge, flag, at);
            } else {
                table.insert_leaf(gamma.into_boxed_slice(), h, flag, if h == 0 { None } else { Some(ge) });
            }
        };
        match noose.len() {
            2 => {
                let (x0, x1) = (noose.verts[0], noose.verts[1]);
                debug_assert_eq!((x0.min(x1), x0.max(x1)), (u.min(v), u.max(v)));
                debug_assert_eq!(
                    noose.faces[0],
                    self.host.face_of_dart(self.host.dart(x1, x0).unwrap()),
                    "leaf noose follows the edge-disk convention"
                );
                for pf in 0..fc {
                    let g = Img::F(pf as u8);
                    emit(&mut self.completions, &mut table, vec![g, g, g, g], 0, false);
                }
                for side in 0..2 {
                    let x = [x0, x1][side];
                    if self.excluded[x] {
                        continue;
                    }
                    for a in 0..ctx.k {
                        for &pf in &ctx.faces_at[a] {
                            let g = Img::F(pf as u8);
                            let mut gamma = vec![g, g, g, g];
                            gamma[2 * side] = Img::V(a as u8);
                            emit(&mut self.completions, &mut table, gamma, 0, false);
                        }
                    }
                }
                if !self.excluded[x0] && !self.excluded[x1] {
                    // Unmatched lens: both endpoints on pattern vertices, the
                    // host edge inside one pattern face.
                    for &(a, b, pf) in &ctx.lenses {
                        let g = Img::F(pf as u8);
                        for (ia, ib) in [(a, b), (b, a)] {
                            let gamma = vec![Img::V(ia as u8), g, Img::V(ib as u8), g];
                            emit(&mut self.completions, &mut table, gamma, 0, false);
                        }
                    }
                    // Matched to a pattern edge, both alignments.
                    let host_bridge = noose.faces[0] == noose.faces[1];
                    for (pe, &(a, f_ba, b, f_ab)) in ctx.edge_noose.iter().enumerate() {
                        if host_bridge && f_ba != f_ab {
                            continue;
                        }
                        let flag = self.required[x0] || self.required[x1];
                        for (va, fa, vb, fb) in [(a, f_ba, b, f_ab), (b, f_ab, a, f_ba)] {
                            let gamma = vec![
                                Img::V(va as u8),
                                Img::F(fa as u8),
                                Img::V(vb as u8),
                                Img::F(fb as u8),
                            ];
                            emit(&mut self.completions, &mut table, gamma, 1 << pe, flag);
                        }
                    }
                }
            }
            1 => {
                // Pendant host edge: only the attachment vertex is on the
                // noose; the other endpoint stays interior.
                let w = noose.verts[0];
                let p = if w == u { v } else { u };
                for pf in 0..fc {
                    let g = Img::F(pf as u8);
                    emit(&mut self.completions, &mut table, vec![g, g], 0, false);
                }
                if !self.excluded[w] {
                    for a in 0..ctx.k {
                        for &pf in &ctx.faces_at[a] {
                            emit(
                                &mut self.completions,
                                &mut table,
                                vec![Img::V(a as u8), Img::F(pf as u8)],
                                0,
                                false,
                            );
                        }
                    }
                    if !self.excluded[p] {
                        // Matched: the interior endpoint's image needs all of
                        // its pattern edges enclosed, i.e. degree one.
                        for (pe, &(a, f_ba, b, f_ab)) in ctx.edge_noose.iter().enumerate() {
                            let flag = self.required[w] || self.required[p];
                            for (vw, vp) in [(a, b), (b, a)] {
                                if ctx.adj_mask[vp] != (1 << pe) {
                                    continue;
                                }
                                debug_assert_eq!(f_ba, f_ab);
                                let gamma = vec![Img::V(vw as u8), Img::F(f_ab as u8)];
                                emit(&mut self.completions, &mut table, gamma, 1 << pe, flag);
                            }
                        }
                    }
                }
            }
            other => {
                return Err(Error::Internal(format!("leaf noose of length {other}")));
            }
        }
        table.finalize_masks(ctx);
        #[cfg(debug_assertions)]
        for t in &table.tuples {
            assert!(
                valid_mapping(self.host, noose, &t.gamma, ctx).is_some(),
                "invalid leaf tuple {:?} on noose {:?}/{:?} for host edge {:?}",
                t.gamma,
                noose.verts,
                noose.faces,
                (u, v)
            );
        }
        Ok(table)
    }

    /// Pairwise fit of two tables. With a parent noose, fitting pairs become
    /// parent entries; without one (final combination) only completions are
    /// recorded.
    fn merge_tables(
        &mut self,
        (tl, nl, le): (&Table, &AlignedNoose, EdgeRef),
        (tr, nr, re): (&Table, &AlignedNoose, EdgeRef),
        parent_noose: Option<&AlignedNoose>,
    ) -> Result<Table> {
        let ctx = self.ctx;
        let lpos = PositionMap::new(nl);
        let rpos = PositionMap::new(nr);
        let shared_verts: Vec<usize> = nl
            .verts
            .iter()
            .copied()
            .filter(|v| rpos.vert.contains_key(v))
            .collect();
        let shared_faces: Vec<usize> = {
            let mut fs: Vec<usize> = nl
                .faces
                .iter()
                .copied()
                .filter(|f| rpos.face.contains_key(f))
                .collect();
            fs.sort_unstable();
            fs.dedup();
            fs
        };
        let signature = |t: &Tuple, pos: &PositionMap| -> Vec<Img> {
            let mut sig = Vec::with_capacity(shared_verts.len() + shared_faces.len());
            for &v in &shared_verts {
                sig.push(t.gamma[2 * pos.vert[&v]]);
            }
            for &f in &shared_faces {
                sig.push(t.gamma[2 * pos.face[&f][0] + 1]);
            }
            sig
        };
        let mut buckets: HashMap<Vec<Img>, Vec<u32>> = HashMap::new();
        for (i, t) in tr.tuples.iter().enumerate() {
            buckets.entry(signature(t, &rpos)).or_default().push(i as u32);
        }
        let mut out = Table::default();
        for (li, lt) in tl.tuples.iter().enumerate() {
            let sig = signature(lt, &lpos);
            let Some(cands) = buckets.get(&sig) else {
                continue;
            };
            let shared_v1: u32 = sig
                .iter()
                .take(shared_verts.len())
                .filter_map(|i| i.as_vert())
                .fold(0, |m, a| m | (1 << a));
            for &ri in cands {
                let rt = &tr.tuples[ri as usize];
                if lt.h_sub & rt.h_sub != 0 {
                    continue;
                }
                // A pattern vertex may be used by both sides only as the
                // image of a shared boundary vertex...
                if lt.v1_mask & rt.v1_mask & !shared_v1 != 0 {
                    continue;
                }
                // ...and the matched parts may only intersect there too.
                if lt.verts_mask & rt.verts_mask & !shared_v1 != 0 {
                    continue;
                }
                let h = lt.h_sub | rt.h_sub;
                let flag = lt.flag || rt.flag;
                let mult = lt.mult * rt.mult;
                match parent_noose {
                    Some(np) => {
                        let Some(gamma) = assemble(np, &lpos, &lt.gamma, &rpos, &rt.gamma)
                        else {
                            continue;
                        };
                        if !self.exits_saturated(&lpos, &lt.gamma, np, h)
                            || !self.exits_saturated(&rpos, &rt.gamma, np, h)
                        {
                            continue;
                        }
                        if induced_noose(self.host, np, &gamma, ctx).is_none() {
                            continue;
                        }
                        if h == ctx.full_mask {
                            self.completions.record_pair(le, li as u32, re, ri, flag, mult);
                        } else {
                            out.insert(
                                gamma.into_boxed_slice(),
                                h,
                                flag,
                                mult,
                                Some((li as u32, ri)),
                            );
                        }
                    }
                    None => {
                        // Final combination: the supports coincide, so the
                        // signature already forced full agreement, and a
                        // non-full union has nowhere left to grow.
                        if h == ctx.full_mask {
                            self.completions.record_pair(le, li as u32, re, ri, flag, mult);
                        }
                    }
                }
            }
        }
        out.finalize_masks(ctx);
        Ok(out)
    }

    /// A vertex-mapped host vertex may leave the boundary only when its
    /// pattern vertex has all incident pattern edges enclosed.
    fn exits_saturated(
        &self,
        child: &PositionMap,
        gamma: &[Img],
        parent: &AlignedNoose,
        h: u32,
    ) -> bool {
        for (&v, &pos) in &child.vert {
            if let Img::V(a) = gamma[2 * pos] {
                if !parent.verts.contains(&v) && self.ctx.adj_mask[a as usize] & !h != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn finish(self) -> Result<DpResult> {
        let mut res = DpResult {
            found: self.completions.any_flagged,
            table_sizes: self.trace_sizes.clone(),
            max_table: self.max_table,
            total_tuples: self.total_tuples,
            ..DpResult::default()
        };
        if self.completions.flagged_mult % self.ctx.aut != 0 {
            return Err(Error::Internal(format!(
                "completed multiplicity {} not divisible by automorphism count {}",
                self.completions.flagged_mult, self.ctx.aut
            )));
        }
        res.count = self.completions.flagged_mult / self.ctx.aut;
        if self.opts.mode == Mode::List {
            res.listed = self.expand_completions()?;
        }
        Ok(res)
    }

    /// Walks completion provenance back to the leaves, yielding matched host
    /// edge sets until the limit is reached. Each set may recur once per
    /// automorphism, so expansion budgets carry that factor.
    fn expand_completions(&self) -> Result<Vec<Vec<usize>>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let aut = self.ctx.aut as usize;
        for ev in &self.completions.events {
            if seen.len() >= self.opts.limit {
                break;
            }
            let budget = (self.opts.limit - seen.len()).saturating_mul(aut).max(16);
            match *ev {
                CompletionEvent::Leaf { gedge, flag } => {
                    if flag {
                        seen.insert(vec![gedge]);
                    }
                }
                CompletionEvent::Pair {
                    left_edge,
                    left,
                    right_edge,
                    right,
                    flag,
                } => {
                    if !flag {
                        continue;
                    }
                    let lefts = self.expansions(left_edge, left, budget)?;
                    let rights = self.expansions(right_edge, right, budget)?;
                    'outer: for l in &lefts {
                        for r in &rights {
                            let mut s: Vec<usize> = l.iter().chain(r.iter()).copied().collect();
                            s.sort_unstable();
                            debug_assert_eq!(s.len(), self.ctx.drawing.m());
                            seen.insert(s);
                            if seen.len() >= self.opts.limit {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort();
        out.truncate(self.opts.limit);
        Ok(out)
    }

    fn expansions(&self, edge: EdgeRef, idx: u32, budget: usize) -> Result<Vec<Vec<usize>>> {
        let table = self.table_of(edge)?;
        let t = &table.tuples[idx as usize];
        match &t.prov {
            Prov::Leaf(None) => Ok(vec![vec![]]),
            Prov::Leaf(Some(ge)) => Ok(vec![vec![*ge]]),
            Prov::Pairs(pairs) => {
                let (lc, rc) = match edge {
                    EdgeRef::Tree(ei) => *self
                        .children
                        .get(&ei)
                        .ok_or_else(|| Error::Internal("merge children missing".into()))?,
                    _ => return Err(Error::Internal("leaf table with pair provenance".into())),
                };
                let mut out = Vec::new();
                for &(li, ri) in pairs {
                    if out.len() >= budget {
                        break;
                    }
                    let lefts = self.expansions(EdgeRef::Tree(lc), li, budget - out.len())?;
                    let rights = self.expansions(EdgeRef::Tree(rc), ri, budget - out.len())?;
                    'outer: for l in &lefts {
                        for r in &rights {
                            let mut s: Vec<usize> = l.iter().chain(r.iter()).copied().collect();
                            s.sort_unstable();
                            out.push(s);
                            if out.len() >= budget {
                                break 'outer;
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn table_of(&self, edge: EdgeRef) -> Result<&Table> {
        match edge {
            EdgeRef::Tree(ei) => self
                .tables
                .get(&ei)
                .ok_or_else(|| Error::Internal("table dropped before listing".into())),
            EdgeRef::RootLeaf => self
                .root_leaf_table
                .as_ref()
                .ok_or_else(|| Error::Internal("root leaf table missing".into())),
            EdgeRef::SoloLeaf => self
                .solo_table
                .as_ref()
                .ok_or_else(|| Error::Internal("solo table missing".into())),
        }
    }
}

impl Completions {
    fn record_leaf(&mut self, gedge: usize, flag: bool, _at: EdgeRef) {
        if flag {
            self.any_flagged = true;
            self.flagged_mult += 1;
        }
        self.events.push(CompletionEvent::Leaf { gedge, flag });
    }

    fn record_pair(
        &mut self,
        left_edge: EdgeRef,
        left: u32,
        right_edge: EdgeRef,
        right: u32,
        flag: bool,
        mult: u64,
    ) {
        if flag {
            self.any_flagged = true;
            self.flagged_mult += mult;
        }
        self.events.push(CompletionEvent::Pair {
            left_edge,
            left,
            right_edge,
            right,
            flag,
        });
    }
}

struct PositionMap {
    vert: HashMap<usize, usize>,
    face: HashMap<usize, Vec<usize>>,
}

impl PositionMap {
    fn new(n: &AlignedNoose) -> PositionMap {
        let mut vert = HashMap::new();
        let mut face: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &v) in n.verts.iter().enumerate() {
            vert.insert(v, i);
        }
        for (i, &f) in n.faces.iter().enumerate() {
            face.entry(f).or_default().push(i);
        }
        PositionMap { vert, face }
    }
}

/// Builds the parent's positional images from the children's. Every parent
/// element is supported by a child (the parent noose is their symmetric
/// difference).
fn assemble(
    parent: &AlignedNoose,
    lpos: &PositionMap,
    lg: &[Img],
    rpos: &PositionMap,
    rg: &[Img],
) -> Option<Vec<Img>> {
    let slots = parent.slots();
    let mut gamma = Vec::with_capacity(slots);
    for s in 0..slots {
        let (is_vert, id) = parent.slot_element(s);
        let img = if is_vert {
            if let Some(&p) = lpos.vert.get(&id) {
                lg[2 * p]
            } else if let Some(&p) = rpos.vert.get(&id) {
                rg[2 * p]
            } else {
                return None;
            }
        } else if let Some(ps) = lpos.face.get(&id) {
            lg[2 * ps[0] + 1]
        } else if let Some(ps) = rpos.face.get(&id) {
            rg[2 * ps[0] + 1]
        } else {
            return None;
        };
        gamma.push(img);
    }
    Some(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::AbstractGraph;
    use crate::sphere_cut::sc_decomposition;

    fn count_all(host: &PlaneGraph, pattern: &PlaneGraph) -> u64 {
        let scd = sc_decomposition(host, 0).unwrap();
        let ctx = PatternCtx::new(pattern.clone()).unwrap();
        let required = vec![true; host.n()];
        let excluded = vec![false; host.n()];
        let res = run_dp(
            &scd,
            host,
            &ctx,
            &required,
            &excluded,
            &DpOptions::default(),
        )
        .unwrap();
        res.count
    }

    fn k4() -> PlaneGraph {
        let g =
            AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        PlaneGraph::build(
            g,
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
        )
        .unwrap()
    }

    fn k2() -> PlaneGraph {
        let g = AbstractGraph::new(2, &[(0, 1)]).unwrap();
        PlaneGraph::build(g, vec![vec![1], vec![0]]).unwrap()
    }

    #[test]
    fn k2_pattern_counts_edges() {
        assert_eq!(count_all(&k2(), &k2()), 1);
        assert_eq!(count_all(&generate::cycle(3), &k2()), 3);
        assert_eq!(count_all(&generate::grid(3), &k2()), 12);
        assert_eq!(count_all(&generate::path(4), &k2()), 3);
    }

    #[test]
    fn self_match_counts_once() {
        assert_eq!(count_all(&generate::cycle(3), &generate::cycle(3)), 1);
        assert_eq!(count_all(&generate::cycle(6), &generate::cycle(6)), 1);
        assert_eq!(count_all(&k4(), &k4()), 1);
    }

    #[test]
    fn triangles_in_k4() {
        assert_eq!(count_all(&k4(), &generate::cycle(3)), 4);
    }

    #[test]
    fn squares_in_grid() {
        assert_eq!(count_all(&generate::grid(3), &generate::cycle(4)), 4);
        assert_eq!(count_all(&generate::grid(4), &generate::cycle(4)), 9);
    }

    #[test]
    fn paths_against_oracle() {
        let host = generate::grid(3);
        let pattern = generate::path(3);
        let expected = crate::oracle::brute_count(host.graph(), pattern.graph()).unwrap();
        assert_eq!(count_all(&host, &pattern), expected);
    }

    #[test]
    fn list_mode_returns_edge_sets() {
        let host = generate::grid(3);
        let pattern = generate::cycle(4);
        let scd = sc_decomposition(&host, 0).unwrap();
        let ctx = PatternCtx::new(pattern).unwrap();
        let required = vec![true; host.n()];
        let excluded = vec![false; host.n()];
        let opts = DpOptions {
            mode: Mode::List,
            limit: 10,
            ..DpOptions::default()
        };
        let res = run_dp(&scd, &host, &ctx, &required, &excluded, &opts).unwrap();
        assert_eq!(res.count, 4);
        assert_eq!(res.listed.len(), 4);
        for set in &res.listed {
            assert_eq!(set.len(), 4);
        }
    }

    #[test]
    fn schedule_permutation_invariant() {
        let host = generate::grid(3);
        let pattern = generate::cycle(4);
        let scd = sc_decomposition(&host, 0).unwrap();
        let ctx = PatternCtx::new(pattern).unwrap();
        let required = vec![true; host.n()];
        let excluded = vec![false; host.n()];
        let base = run_dp(
            &scd,
            &host,
            &ctx,
            &required,
            &excluded,
            &DpOptions::default(),
        )
        .unwrap()
        .count;
        for seed in 0..5 {
            let opts = DpOptions {
                schedule_seed: Some(seed),
                ..DpOptions::default()
            };
            let res = run_dp(&scd, &host, &ctx, &required, &excluded, &opts).unwrap();
            assert_eq!(res.count, base);
        }
    }

    #[test]
    fn required_set_filters() {
        // Patterns not touching the required set are not counted.
        let host = generate::path(4);
        let pattern = k2();
        let scd = sc_decomposition(&host, 0).unwrap();
        let ctx = PatternCtx::new(pattern).unwrap();
        let mut required = vec![false; host.n()];
        required[0] = true;
        let excluded = vec![false; host.n()];
        let res = run_dp(
            &scd,
            &host,
            &ctx,
            &required,
            &excluded,
            &DpOptions::default(),
        )
        .unwrap();
        assert_eq!(res.count, 1, "only the edge at vertex 0 counts");
    }
}
