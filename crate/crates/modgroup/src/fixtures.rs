//! Hand-encoded reference subgroups and graphs, used by the test suite and
//! handy as documentation examples.
//!
//! Three subgroups H, K and L are given both as generator lists and as their
//! expected Stallings graphs (with a fixed vertex labeling); the expected
//! silhouette of L is also provided. H is free of index 6, K has an isolated
//! b-edge and a b-loop, L mixes an a-loop, a b-loop and four b-triangles.

use crate::graph::ModularGraph;
use crate::word::Word;

fn words(ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|s| Word::parse(s).unwrap()).collect()
}

/// Generators of H: a b a b⁻¹ and b a b a b.
pub fn gens_h() -> Vec<Word> {
    words(&["abaB", "babab"])
}

/// Stallings graph of H: two b-triangles joined by three a-edges, rooted at a
/// vertex of the first triangle; combinatorial type (6, 3, 0, 0, 0).
pub fn graph_h() -> ModularGraph {
    ModularGraph::from_parts(
        6,
        &[(1, 4), (2, 3), (5, 6)],
        &[(1, 5), (5, 2), (2, 1), (4, 6), (6, 3), (3, 4)],
        Some(1),
    )
    .unwrap()
}

/// Generators of K: a b a b and b a b a b⁻¹.
pub fn gens_k() -> Vec<Word> {
    words(&["abab", "babaB"])
}

/// Stallings graph of K: one b-triangle, an isolated b-edge and a b-loop;
/// combinatorial type (6, 3, 1, 0, 1).
pub fn graph_k() -> ModularGraph {
    ModularGraph::from_parts(
        6,
        &[(1, 4), (3, 5), (2, 6)],
        &[(1, 2), (2, 3), (3, 1), (4, 5), (6, 6)],
        Some(1),
    )
    .unwrap()
}

/// Generators of L: a, (ba)³b, (bab⁻¹a)²b and (bab⁻¹ab⁻¹a)²b.
pub fn gens_l() -> Vec<Word> {
    words(&["a", "bababab", "baBabaBab", "baBaBabaBaBab"])
}

/// Stallings graph of L: thirteen vertices, four b-triangles, an a-loop at the
/// root and one b-loop; combinatorial type (13, 6, 0, 1, 1).
pub fn graph_l() -> ModularGraph {
    ModularGraph::from_parts(
        13,
        &[
            (1, 1),
            (2, 3),
            (4, 5),
            (6, 7),
            (8, 9),
            (10, 11),
            (12, 13),
        ],
        &[
            (1, 2),
            (2, 11),
            (11, 1),
            (3, 12),
            (12, 4),
            (4, 3),
            (10, 9),
            (9, 13),
            (13, 10),
            (5, 8),
            (8, 6),
            (6, 5),
            (7, 7),
        ],
        Some(1),
    )
    .unwrap()
}

/// The silhouette of L (as labeled by [`graph_l`]): two b-triangles joined by
/// three a-edges, on labels 1..6 after normalization.
pub fn silhouette_of_l() -> ModularGraph {
    ModularGraph::from_parts(
        6,
        &[(1, 4), (2, 3), (5, 6)],
        &[(1, 5), (5, 2), (2, 1), (4, 3), (3, 6), (6, 4)],
        None,
    )
    .unwrap()
}
