//! Enumeration of all pairwise non-equivalent drawings of a pattern graph,
//! by brute force over rotation systems with genus filtering and
//! canonical-form deduplication.

use crate::error::{Error, Result};
use crate::graph::AbstractGraph;
use crate::plane_graph::{
    canonical_code, canonical_code_oriented, is_three_connected, is_triangulation, PlaneGraph,
};

pub const DEFAULT_PATTERN_BUDGET: usize = 8;
const ROTATION_SYSTEM_LIMIT: u64 = 3_000_000;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub drawing: PlaneGraph,
    /// True iff the drawing is orientedly equivalent to its own mirror.
    pub mirror_self_equivalent: bool,
}

/// All drawings of a pattern up to sphere homeomorphism (reflections
/// included), each listed once.
#[derive(Debug, Clone)]
pub struct EmbeddingCatalog {
    pub pattern: AbstractGraph,
    pub entries: Vec<CatalogEntry>,
}

impl EmbeddingCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn enumerate_embeddings(h: &AbstractGraph) -> Result<EmbeddingCatalog> {
    enumerate_embeddings_with_budget(h, DEFAULT_PATTERN_BUDGET)
}

pub fn enumerate_embeddings_with_budget(
    h: &AbstractGraph,
    budget: usize,
) -> Result<EmbeddingCatalog> {
    if !h.is_connected() {
        return Err(Error::PatternDisconnected);
    }
    if h.n() > budget {
        return Err(Error::PatternTooLarge(h.n(), budget));
    }
    let base = crate::embed::planar_embed(h).map_err(|e| match e {
        Error::NonPlanar => Error::NonPlanarPattern,
        other => other,
    })?;
    // Triangulations and 3-connected patterns embed uniquely, so the one
    // drawing we already have is the whole catalog.
    if h.n() >= 3 && (is_three_connected(h) || is_triangulation(&base)) {
        let entry = CatalogEntry {
            mirror_self_equivalent: canonical_code_oriented(&base)
                == canonical_code_oriented(&base.mirrored()),
            drawing: base,
        };
        return Ok(EmbeddingCatalog {
            pattern: h.clone(),
            entries: vec![entry],
        });
    }

    let mut combos: u64 = 1;
    for v in 0..h.n() {
        let d = h.degree(v).max(1) as u64;
        combos = combos.saturating_mul(factorial(d - 1));
        if combos > ROTATION_SYSTEM_LIMIT {
            return Err(Error::PatternTooLarge(h.n(), budget));
        }
    }

    // Per-vertex cyclic orders: first neighbor fixed, rest permuted.
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..h.n())
        .map(|v| {
            let ns = h.neighbors(v);
            if ns.len() <= 2 {
                return vec![ns.to_vec()];
            }
            permutations(&ns[1..])
                .into_iter()
                .map(|mut p| {
                    p.insert(0, ns[0]);
                    p
                })
                .collect()
        })
        .collect();

    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::new();
    let mut idx = vec![0usize; h.n()];
    loop {
        let rot: Vec<Vec<usize>> = (0..h.n()).map(|v| per_vertex[v][idx[v]].clone()).collect();
        if let Ok(pg) = PlaneGraph::build(h.clone(), rot) {
            let code = canonical_code(&pg);
            if seen.insert(code) {
                let mirror_self = canonical_code_oriented(&pg)
                    == canonical_code_oriented(&pg.mirrored());
                entries.push(CatalogEntry {
                    drawing: pg,
                    mirror_self_equivalent: mirror_self,
                });
            }
        }
        // Advance the odometer.
        let mut v = 0;
        while v < h.n() {
            idx[v] += 1;
            if idx[v] < per_vertex[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == h.n() {
            break;
        }
    }
    if entries.is_empty() {
        return Err(Error::NonPlanarPattern);
    }
    Ok(EmbeddingCatalog {
        pattern: h.clone(),
        entries,
    })
}

/// The drawings the embedded solver actually runs on: one per catalog entry,
/// plus the mirror image of every entry that is not equivalent to its own
/// reflection.
pub fn oriented_variants(catalog: &EmbeddingCatalog) -> Vec<PlaneGraph> {
    let mut out = Vec::new();
    for entry in &catalog.entries {
        out.push(entry.drawing.clone());
        if !entry.mirror_self_equivalent {
            out.push(entry.drawing.mirrored());
        }
    }
    out
}

fn factorial(x: u64) -> u64 {
    (1..=x).product::<u64>().max(1)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
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
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
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
    fn k4_unique_embedding() {
        let cat = enumerate_embeddings(&complete(4)).unwrap();
        assert_eq!(cat.len(), 1);
        assert!(cat.entries[0].mirror_self_equivalent);
        assert_eq!(oriented_variants(&cat).len(), 1);
    }

    #[test]
    fn cycles_and_stars_unique() {
        for n in 3..=6 {
            let c = AbstractGraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
                .unwrap();
            assert_eq!(enumerate_embeddings(&c).unwrap().len(), 1);
        }
        let star = AbstractGraph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let cat = enumerate_embeddings(&star).unwrap();
        assert_eq!(cat.len(), 1);
    }

    #[test]
    fn rejects_bad_patterns() {
        assert!(matches!(
            enumerate_embeddings(&complete(5)),
            Err(Error::NonPlanarPattern)
        ));
        let disc = AbstractGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            enumerate_embeddings(&disc),
            Err(Error::PatternDisconnected)
        ));
        assert!(matches!(
            enumerate_embeddings(&complete(9)),
            Err(Error::PatternTooLarge(9, 8))
        ));
    }

    #[test]
    fn k4_minus_edge_has_one_class() {
        // The diamond is 2-connected but not 3-connected; its drawings still
        // collapse to one class under reflection-inclusive equivalence.
        let g = AbstractGraph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let cat = enumerate_embeddings(&g).unwrap();
        assert_eq!(cat.len(), 1);
    }
}
