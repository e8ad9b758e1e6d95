//! The silhouetting rewriting system: local moves that delete loop-carrying
//! and isolated-edge patterns from a cyclically reduced graph until only a
//! silhouette graph remains.
//!
//! Moves operate on [`SparseGraph`] so deleted vertices leave the label set
//! untouched; original labels of survivors are preserved until the final
//! order-preserving relabeling. The staged strategy removes all b-loops
//! first, then a-loops, then isolated b-edges, and finally canonicalizes the
//! one- and two-vertex endgames. The system is confluent, so any move order
//! reaches the same silhouette.

use serde::Serialize;

use crate::graph::{Mode, ModularGraph, SparseGraph, TypeDelta};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MoveKind {
    Lambda3,
    Lambda21,
    Lambda22,
    Kappa3,
    Exceptional,
}

impl MoveKind {
    /// Type change of one move of this kind. Exceptional moves have no fixed
    /// delta (collapse and relabel differ), so they return `None`.
    pub fn type_delta(self) -> Option<TypeDelta> {
        match self {
            MoveKind::Lambda3 => Some(TypeDelta::LAMBDA3),
            MoveKind::Lambda21 => Some(TypeDelta::LAMBDA21),
            MoveKind::Lambda22 => Some(TypeDelta::LAMBDA22),
            MoveKind::Kappa3 => Some(TypeDelta::KAPPA3),
            MoveKind::Exceptional => None,
        }
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MoveKind::Lambda3 => "lambda3",
            MoveKind::Lambda21 => "lambda21",
            MoveKind::Lambda22 => "lambda22",
            MoveKind::Kappa3 => "kappa3",
            MoveKind::Exceptional => "exceptional",
        })
    }
}

/// One rewriting step: the move kind, the vertex or vertex pair it pivots on,
/// and how it changes the combinatorial type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub pivots: Vec<u32>,
    pub delta: TypeDelta,
}

impl MoveRecord {
    fn new(kind: MoveKind, pivots: Vec<u32>, delta: TypeDelta) -> MoveRecord {
        MoveRecord {
            kind,
            pivots,
            delta,
        }
    }
}

/// A b-loop at v whose a-edge leads to another vertex: delete v, turn the
/// freed a-edge end into an a-loop.
fn lambda3_at(g: &SparseGraph, v: u32) -> Option<MoveRecord> {
    if !g.is_b_loop(v) {
        return None;
    }
    let w = g.alpha(v)?;
    if w == v {
        return None;
    }
    Some(MoveRecord::new(
        MoveKind::Lambda3,
        vec![v],
        TypeDelta::LAMBDA3,
    ))
}

/// An a-loop at v sitting on a b-triangle: delete v, leaving the opposite
/// side of the triangle as an isolated b-edge.
fn lambda21_at(g: &SparseGraph, v: u32) -> Option<MoveRecord> {
    if !g.is_a_loop(v) || !g.on_b_triangle(v) {
        return None;
    }
    Some(MoveRecord::new(
        MoveKind::Lambda21,
        vec![v],
        TypeDelta::LAMBDA21,
    ))
}

/// An a-loop at v on an isolated b-edge to w, where w has an a-edge to a
/// third vertex: delete v and w, turn the freed a-edge end into an a-loop.
fn lambda22_at(g: &SparseGraph, v: u32) -> Option<MoveRecord> {
    if !g.is_a_loop(v) {
        return None;
    }
    let (s, t) = g.isolated_b_edge_at(v)?;
    let w = if s == v { t } else { s };
    let far = g.alpha(w)?;
    if far == w {
        return None;
    }
    Some(MoveRecord::new(
        MoveKind::Lambda22,
        vec![v, w],
        TypeDelta::LAMBDA22,
    ))
}

/// An isolated b-edge v→w whose endpoints both have a-edges to outside
/// vertices: delete v and w, join the two freed a-edge ends.
fn kappa3_at(g: &SparseGraph, v: u32) -> Option<MoveRecord> {
    let w = g.beta(v)?;
    if w == v || g.beta(w).is_some() || g.beta_inv(v).is_some() {
        return None;
    }
    let vf = g.alpha(v)?;
    if vf == v || vf == w {
        return None;
    }
    let wf = g.alpha(w)?;
    if wf == w || wf == v {
        return None;
    }
    Some(MoveRecord::new(
        MoveKind::Kappa3,
        vec![v, w],
        TypeDelta::KAPPA3,
    ))
}

/// The endgame moves on one- and two-vertex graphs: collapse any two-a-loop
/// b-edge graph to the standard one-vertex graph, and relabel off-standard
/// one- and two-vertex results onto {1} and {1, 2} with b from 1 to 2.
fn exceptional_of(g: &SparseGraph) -> Option<MoveRecord> {
    let vs: Vec<u32> = g.vertices().collect();
    match vs[..] {
        [v] => {
            if g.is_a_loop(v) && g.is_b_loop(v) && v != 1 {
                return Some(MoveRecord::new(
                    MoveKind::Exceptional,
                    vec![v],
                    TypeDelta::EXCEPTIONAL_RELABEL,
                ));
            }
            None
        }
        [p, q] => {
            let b_edge = g.beta(p) == Some(q) || g.beta(q) == Some(p);
            if !b_edge {
                return None;
            }
            if g.is_a_loop(p) && g.is_a_loop(q) {
                return Some(MoveRecord::new(
                    MoveKind::Exceptional,
                    vec![p, q],
                    TypeDelta::EXCEPTIONAL_COLLAPSE,
                ));
            }
            let preferred = p == 1 && q == 2 && g.beta(1) == Some(2);
            if g.alpha(p) == Some(q) && !preferred {
                return Some(MoveRecord::new(
                    MoveKind::Exceptional,
                    vec![p, q],
                    TypeDelta::EXCEPTIONAL_RELABEL,
                ));
            }
            None
        }
        _ => None,
    }
}

/// Every move applicable to a weakly labeled graph, in kind order with ties
/// broken by pivot labels.
pub fn sparse_moves(g: &SparseGraph) -> Vec<MoveRecord> {
    let mut out = Vec::new();
    for v in g.vertices() {
        out.extend(lambda3_at(g, v));
    }
    for v in g.vertices() {
        out.extend(lambda21_at(g, v));
    }
    for v in g.vertices() {
        out.extend(lambda22_at(g, v));
    }
    for v in g.vertices() {
        out.extend(kappa3_at(g, v));
    }
    out.extend(exceptional_of(g));
    out
}

/// Every move applicable to a cyclically reduced graph.
pub fn find_moves(g: &ModularGraph) -> Result<Vec<MoveRecord>> {
    g.validate(Mode::CyclicallyReduced)?;
    Ok(sparse_moves(&SparseGraph::from_graph(g)))
}

fn not_applicable(m: &MoveRecord) -> Error {
    Error::MoveNotApplicable(format!(
        "{:?} does not match the graph at pivots {:?}",
        m.kind, m.pivots
    ))
}

/// Applies one move, returning the rewritten graph. The move must match the
/// graph exactly (same kind, pivots and delta as a freshly found move).
pub fn apply_move(g: &SparseGraph, m: &MoveRecord) -> Result<SparseGraph> {
    let found = match (m.kind, m.pivots.as_slice()) {
        (MoveKind::Lambda3, &[v]) => lambda3_at(g, v),
        (MoveKind::Lambda21, &[v]) => lambda21_at(g, v),
        (MoveKind::Lambda22, &[v, _]) => lambda22_at(g, v),
        (MoveKind::Kappa3, &[v, _]) => kappa3_at(g, v),
        (MoveKind::Exceptional, _) => exceptional_of(g),
        _ => None,
    };
    if found.as_ref() != Some(m) {
        return Err(not_applicable(m));
    }
    let mut out = g.clone();
    apply_found(&mut out, m);
    debug_assert_eq!(
        Some(out.combinatorial_type()),
        g.combinatorial_type().checked_apply(m.delta)
    );
    Ok(out)
}

/// In-place application of a move already verified against the graph.
fn apply_found(g: &mut SparseGraph, m: &MoveRecord) {
    match (m.kind, m.pivots.as_slice()) {
        (MoveKind::Lambda3, &[v]) => {
            let w = g.alpha(v).unwrap();
            g.remove_vertex(v);
            g.set_alpha(w, w);
        }
        (MoveKind::Lambda21, &[v]) => {
            g.remove_vertex(v);
        }
        (MoveKind::Lambda22, &[v, w]) => {
            let far = g.alpha(w).unwrap();
            g.remove_vertex(v);
            g.remove_vertex(w);
            g.set_alpha(far, far);
        }
        (MoveKind::Kappa3, &[v, w]) => {
            let vf = g.alpha(v).unwrap();
            let wf = g.alpha(w).unwrap();
            g.remove_vertex(v);
            g.remove_vertex(w);
            g.set_alpha(vf, wf);
        }
        (MoveKind::Exceptional, _) => {
            *g = if m.delta == TypeDelta::EXCEPTIONAL_COLLAPSE || m.pivots.len() == 1 {
                SparseGraph::from_graph(&crate::graph::delta_1())
            } else {
                SparseGraph::from_graph(&crate::graph::delta_2())
            };
        }
        _ => unreachable!(),
    }
}

/// Rewrites to the fixpoint under the staged strategy: b-loop removals first,
/// then a-loop removals, then isolated b-edge contractions, then the endgame;
/// within a stage, the smallest pivot wins.
///
/// Stages run off worklists instead of rescans: no move ever creates a
/// b-loop, only λ₃ and λ₂,₂ create an a-loop (at the freed a-edge end), and
/// only λ₂,₁ creates an isolated b-edge (the leftover triangle side), so
/// initial sweeps plus those pushes see every pivot. Entries are checked at
/// pop time; an entry whose move no longer (or never) applies concerns a
/// deleted vertex or a two-vertex remnant the endgame owns.
fn run_staged(mut g: SparseGraph, mut log: Option<&mut Vec<MoveRecord>>) -> SparseGraph {
    let record = |m: &MoveRecord, log: &mut Option<&mut Vec<MoveRecord>>| {
        if let Some(log) = log.as_deref_mut() {
            log.push(m.clone());
        }
    };

    let mut b_loops: std::collections::BTreeSet<u32> =
        g.vertices().filter(|&v| g.is_b_loop(v)).collect();
    while let Some(v) = b_loops.pop_first() {
        if let Some(m) = lambda3_at(&g, v) {
            let freed = g.alpha(v).unwrap();
            apply_found(&mut g, &m);
            record(&m, &mut log);
            debug_assert!(g.is_a_loop(freed));
        }
    }

    let mut a_loops: std::collections::BTreeSet<u32> =
        g.vertices().filter(|&v| g.is_a_loop(v)).collect();
    let mut b_edges: std::collections::BTreeSet<u32> = g
        .vertices()
        .filter(|&v| matches!(g.isolated_b_edge_at(v), Some((s, _)) if s == v))
        .collect();
    while let Some(v) = a_loops.pop_first() {
        if !g.contains(v) || !g.is_a_loop(v) {
            continue;
        }
        if let Some(m) = lambda21_at(&g, v) {
            let edge_source = g.beta(v).unwrap();
            apply_found(&mut g, &m);
            record(&m, &mut log);
            b_edges.insert(edge_source);
        } else if let Some(m) = lambda22_at(&g, v) {
            let freed = g.alpha(m.pivots[1]).unwrap();
            apply_found(&mut g, &m);
            record(&m, &mut log);
            a_loops.insert(freed);
        }
    }

    while let Some(v) = b_edges.pop_first() {
        if let Some(m) = kappa3_at(&g, v) {
            apply_found(&mut g, &m);
            record(&m, &mut log);
        }
    }

    while let Some(m) = exceptional_of(&g) {
        apply_found(&mut g, &m);
        record(&m, &mut log);
    }
    g
}

fn completed(g: &ModularGraph) -> Result<ModularGraph> {
    let base = if g.validate(Mode::CyclicallyReduced).is_ok() {
        g.clone()
    } else {
        g.complete()?
    };
    base.validate(Mode::CyclicallyReduced)?;
    Ok(base)
}

/// Rewrites to the fixpoint of the move system, keeping original vertex
/// labels on the survivors. The input must be cyclically reduced.
pub fn quasi_silhouette(g: &ModularGraph) -> Result<SparseGraph> {
    g.validate(Mode::CyclicallyReduced)?;
    Ok(run_staged(SparseGraph::from_graph(g), None))
}

/// [`quasi_silhouette`] together with the sequence of applied moves.
pub fn quasi_silhouette_trace(g: &ModularGraph) -> Result<(SparseGraph, Vec<MoveRecord>)> {
    g.validate(Mode::CyclicallyReduced)?;
    let mut log = Vec::new();
    let out = run_staged(SparseGraph::from_graph(g), Some(&mut log));
    Ok((out, log))
}

/// The silhouette: rewrite to the fixpoint and relabel onto {1..n}. Accepts
/// cyclically reduced graphs as they are; a rooted reduced graph is completed
/// at the root first.
pub fn silhouette(g: &ModularGraph) -> Result<ModularGraph> {
    let base = completed(g)?;
    let out = run_staged(SparseGraph::from_graph(&base), None).relabel_normalize();
    debug_assert!(out.validate(Mode::Silhouette).is_ok());
    Ok(out)
}

/// [`silhouette`] together with the sequence of applied moves.
pub fn silhouette_trace(g: &ModularGraph) -> Result<(ModularGraph, Vec<MoveRecord>)> {
    let base = completed(g)?;
    let mut log = Vec::new();
    let out = run_staged(SparseGraph::from_graph(&base), Some(&mut log)).relabel_normalize();
    Ok((out, log))
}
