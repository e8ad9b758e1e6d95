//! The graph model: vertex set `{1..n}` with a partial involution `alpha` (the
//! a-edges, loops allowed) and a directed partial map `beta` (the b-edges).
//! Well-formed graphs only ever carry b-components of three shapes: a loop, an
//! isolated directed edge, or a directed 3-cycle; this is the graph-side image
//! of the relation `b^3 = 1`, just as the involution condition on `alpha`
//! reflects `a^2 = 1`.
//!
//! The same structure serves as the carrier for rooted reduced graphs (every
//! non-root vertex touches an a-edge and a b-edge), cyclically reduced graphs
//! (every vertex does), and silhouette graphs. [`SparseGraph`] is the companion
//! representation with arbitrary distinct labels, used while rewriting moves
//! delete vertices without relabeling the survivors.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Counts of vertices, a-edges between distinct vertices, isolated b-edges,
/// a-loops and b-loops: the tuple (n, k2, k3, l2, l3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CombinatorialType {
    pub n: u32,
    pub k2: u32,
    pub k3: u32,
    pub l2: u32,
    pub l3: u32,
}

impl CombinatorialType {
    pub fn new(n: u32, k2: u32, k3: u32, l2: u32, l3: u32) -> CombinatorialType {
        CombinatorialType { n, k2, k3, l2, l3 }
    }

    /// Number of vertices lying on b-triangles (those not on an isolated b-edge
    /// or b-loop), assuming every vertex is b-adjacent.
    pub fn triangle_vertices(&self) -> Option<u32> {
        (self.n).checked_sub(2 * self.k3 + self.l3)
    }

    /// True when the counts can belong to a cyclically reduced graph: the
    /// a-side covers every vertex exactly once, and the vertices left over by
    /// isolated b-edges and b-loops split into triangles.
    pub fn is_consistent(&self) -> bool {
        2 * self.k2 + self.l2 == self.n
            && matches!(self.triangle_vertices(), Some(t) if t % 3 == 0)
    }

    pub fn checked_apply(&self, delta: TypeDelta) -> Option<CombinatorialType> {
        let add = |base: u32, d: i32| -> Option<u32> {
            let r = base as i64 + d as i64;
            u32::try_from(r).ok()
        };
        Some(CombinatorialType {
            n: add(self.n, delta.dn)?,
            k2: add(self.k2, delta.dk2)?,
            k3: add(self.k3, delta.dk3)?,
            l2: add(self.l2, delta.dl2)?,
            l3: add(self.l3, delta.dl3)?,
        })
    }
}

impl fmt::Display for CombinatorialType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.n, self.k2, self.k3, self.l2, self.l3
        )
    }
}

/// How one rewriting move changes a combinatorial type. Only the named
/// constants can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TypeDelta {
    pub dn: i32,
    pub dk2: i32,
    pub dk3: i32,
    pub dl2: i32,
    pub dl3: i32,
}

impl TypeDelta {
    const fn new(dn: i32, dk2: i32, dk3: i32, dl2: i32, dl3: i32) -> TypeDelta {
        TypeDelta {
            dn,
            dk2,
            dk3,
            dl2,
            dl3,
        }
    }

    /// Removing a b-loop vertex: the incident a-edge becomes an a-loop.
    pub const LAMBDA3: TypeDelta = TypeDelta::new(-1, -1, 0, 1, -1);
    /// Removing an a-loop vertex sitting on a b-triangle: the triangle becomes
    /// an isolated b-edge.
    pub const LAMBDA21: TypeDelta = TypeDelta::new(-1, 0, 1, -1, 0);
    /// Removing an a-loop vertex on an isolated b-edge, together with the other
    /// endpoint; the a-edge of that endpoint becomes an a-loop.
    pub const LAMBDA22: TypeDelta = TypeDelta::new(-2, -1, -1, 0, 0);
    /// Contracting an isolated b-edge whose endpoints carry isolated a-edges;
    /// the two far endpoints get joined by a new a-edge.
    pub const KAPPA3: TypeDelta = TypeDelta::new(-2, -1, -1, 0, 0);
    /// Collapsing the two-vertex graph with two a-loops and one b-edge to the
    /// one-vertex graph with an a-loop and a b-loop.
    pub const EXCEPTIONAL_COLLAPSE: TypeDelta = TypeDelta::new(-1, 0, -1, -1, 1);
    /// Pure relabeling; the type is unchanged.
    pub const EXCEPTIONAL_RELABEL: TypeDelta = TypeDelta::new(0, 0, 0, 0, 0);
}

/// Validation modes, from weakest to strongest structural demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Rooted; every vertex except the root touches an a-edge and a b-edge.
    Reduced,
    /// Every vertex touches an a-edge and a b-edge.
    CyclicallyReduced,
    /// Cyclically reduced and shaped like a silhouette: the one-vertex graph
    /// with both loops, the two-vertex graph with an a-edge and a b-edge, or a
    /// graph of type (n, n/2, 0, 0, 0).
    Silhouette,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reduced => "reduced",
            Mode::CyclicallyReduced => "cyclically-reduced",
            Mode::Silhouette => "silhouette",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "reduced" => Ok(Mode::Reduced),
            "cyclically-reduced" => Ok(Mode::CyclicallyReduced),
            "silhouette" => Ok(Mode::Silhouette),
            other => Err(Error::BadArgument(format!(
                "unknown mode {other:?}, expected reduced, cyclically-reduced or silhouette"
            ))),
        }
    }
}

/// A graph on vertices `1..=n`. Internally the partial maps use 0 for
/// "undefined"; slot 0 of each array is unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModularGraph {
    n: u32,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    beta_inv: Vec<u32>,
    root: Option<u32>,
}

impl ModularGraph {
    /// Builds and structurally validates a graph from edge lists: `alpha` pairs
    /// are undirected (a loop is `(v, v)`), `beta` pairs are directed.
    pub fn from_parts(
        n: u32,
        alpha_pairs: &[(u32, u32)],
        beta_pairs: &[(u32, u32)],
        root: Option<u32>,
    ) -> Result<ModularGraph> {
        if n == 0 {
            return Err(Error::Malformed("graph must have at least one vertex".into()));
        }
        let check_label = |v: u32| -> Result<()> {
            if v == 0 || v > n {
                Err(Error::Malformed(format!(
                    "vertex label {v} out of range 1..={n}"
                )))
            } else {
                Ok(())
            }
        };
        let len = n as usize + 1;
        let mut alpha = vec![0u32; len];
        for &(v, w) in alpha_pairs {
            check_label(v)?;
            check_label(w)?;
            for (x, y) in [(v, w), (w, v)] {
                let slot = &mut alpha[x as usize];
                if *slot != 0 && *slot != y {
                    return Err(Error::Malformed(format!("vertex {x} carries two a-edges")));
                }
                if *slot == y && (x, y) != (w, v) {
                    return Err(Error::Malformed(format!(
                        "duplicate a-edge between {v} and {w}"
                    )));
                }
                *slot = y;
            }
        }
        let mut beta = vec![0u32; len];
        let mut beta_inv = vec![0u32; len];
        for &(v, w) in beta_pairs {
            check_label(v)?;
            check_label(w)?;
            if beta[v as usize] != 0 {
                return Err(Error::Malformed(if beta[v as usize] == w {
                    format!("duplicate b-edge from {v} to {w}")
                } else {
                    format!("vertex {v} carries two outgoing b-edges")
                }));
            }
            if beta_inv[w as usize] != 0 {
                return Err(Error::Malformed(format!(
                    "vertex {w} carries two incoming b-edges"
                )));
            }
            beta[v as usize] = w;
            beta_inv[w as usize] = v;
        }
        for v in 1..=n {
            let w = beta[v as usize];
            if w == 0 || w == v {
                continue;
            }
            let u = beta[w as usize];
            if u == 0 {
                continue; // isolated directed edge
            }
            if u == v {
                return Err(Error::Malformed(format!(
                    "b-edges between {v} and {w} form a 2-cycle"
                )));
            }
            if beta[u as usize] != v {
                return Err(Error::Malformed(format!(
                    "b-path {v} -> {w} -> {u} does not close into a triangle"
                )));
            }
        }
        if let Some(r) = root {
            check_label(r)?;
        }
        Ok(ModularGraph {
            n,
            alpha,
            beta,
            beta_inv,
            root,
        })
    }

    /// Builds from raw arrays indexed `1..=n` with 0 meaning undefined. The
    /// caller guarantees structural validity; enumeration and sampling use this
    /// to skip re-validation on every generated graph.
    pub(crate) fn from_arrays_unchecked(
        n: u32,
        alpha: Vec<u32>,
        beta: Vec<u32>,
        root: Option<u32>,
    ) -> ModularGraph {
        debug_assert_eq!(alpha.len(), n as usize + 1);
        debug_assert_eq!(beta.len(), n as usize + 1);
        let mut beta_inv = vec![0u32; n as usize + 1];
        for v in 1..=n {
            let w = beta[v as usize];
            if w != 0 {
                debug_assert_eq!(beta_inv[w as usize], 0);
                beta_inv[w as usize] = v;
            }
        }
        let g = ModularGraph {
            n,
            alpha,
            beta,
            beta_inv,
            root,
        };
        debug_assert!(
            ModularGraph::from_parts(n, &g.alpha_pairs(), &g.beta_pairs(), root).is_ok()
        );
        g
    }

    /// Copies 1-based scratch slices (slot 0 unused, 0 means undefined) into a
    /// graph with no validation at all, not even under debug assertions. Only
    /// for enumeration loops that produce millions of already-checked leaves.
    pub(crate) fn from_slices_trusted(
        n: u32,
        alpha: &[u32],
        beta: &[u32],
        root: Option<u32>,
    ) -> ModularGraph {
        debug_assert_eq!(alpha.len(), n as usize + 1);
        debug_assert_eq!(beta.len(), n as usize + 1);
        let mut beta_inv = vec![0u32; n as usize + 1];
        for (v, &w) in beta.iter().enumerate().skip(1) {
            if w != 0 {
                beta_inv[w as usize] = v as u32;
            }
        }
        ModularGraph {
            n,
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
            beta_inv,
            root,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn root(&self) -> Option<u32> {
        self.root
    }

    pub fn with_root(&self, root: Option<u32>) -> Result<ModularGraph> {
        if let Some(r) = root {
            if r == 0 || r > self.n {
                return Err(Error::BadArgument(format!(
                    "root {r} out of range 1..={}",
                    self.n
                )));
            }
        }
        let mut g = self.clone();
        g.root = root;
        Ok(g)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn alpha(&self, v: u32) -> Option<u32> {
        match self.alpha[v as usize] {
            0 => None,
            w => Some(w),
        }
    }

    pub fn beta(&self, v: u32) -> Option<u32> {
        match self.beta[v as usize] {
            0 => None,
            w => Some(w),
        }
    }

    pub fn beta_inv(&self, v: u32) -> Option<u32> {
        match self.beta_inv[v as usize] {
            0 => None,
            w => Some(w),
        }
    }

    pub fn is_a_adjacent(&self, v: u32) -> bool {
        self.alpha[v as usize] != 0
    }

    pub fn is_b_adjacent(&self, v: u32) -> bool {
        self.beta[v as usize] != 0 || self.beta_inv[v as usize] != 0
    }

    /// The a-edges as sorted pairs (v, w) with v ≤ w; loops appear as (v, v).
    pub fn alpha_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 1..=self.n {
            let w = self.alpha[v as usize];
            if w >= v {
                out.push((v, w));
            }
        }
        out
    }

    /// The b-edges as sorted directed pairs (v, w).
    pub fn beta_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 1..=self.n {
            let w = self.beta[v as usize];
            if w != 0 {
                out.push((v, w));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    fn first_unreachable(&self) -> Option<u32> {
        let mut seen = vec![false; self.n as usize + 1];
        let mut queue = vec![1u32];
        seen[1] = true;
        while let Some(v) = queue.pop() {
            for w in [
                self.alpha[v as usize],
                self.beta[v as usize],
                self.beta_inv[v as usize],
            ] {
                if w != 0 && !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push(w);
                }
            }
        }
        (1..=self.n).find(|&v| !seen[v as usize])
    }

    pub fn combinatorial_type(&self) -> CombinatorialType {
        let mut t = CombinatorialType::new(self.n, 0, 0, 0, 0);
        for v in 1..=self.n {
            let a = self.alpha[v as usize];
            if a == v {
                t.l2 += 1;
            } else if a > v {
                t.k2 += 1;
            }
            let b = self.beta[v as usize];
            if b == v {
                t.l3 += 1;
            } else if b != 0 && self.beta[b as usize] == 0 {
                t.k3 += 1;
            }
        }
        t
    }

    /// Checks connectivity plus the per-mode adjacency and shape conditions,
    /// reporting the first violation found.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        if let Some(v) = self.first_unreachable() {
            return Err(Error::Invalid(format!(
                "graph is not connected (vertex {v} unreachable from vertex 1)"
            )));
        }
        let exempt = match mode {
            Mode::Reduced => match self.root {
                Some(r) => Some(r),
                None => {
                    return Err(Error::Invalid(
                        "mode reduced requires a root vertex".into(),
                    ))
                }
            },
            _ => None,
        };
        for v in 1..=self.n {
            if Some(v) == exempt {
                continue;
            }
            if !self.is_a_adjacent(v) {
                return Err(Error::Invalid(format!("vertex {v} has no a-edge")));
            }
            if !self.is_b_adjacent(v) {
                return Err(Error::Invalid(format!("vertex {v} has no b-edge")));
            }
        }
        if mode == Mode::Silhouette {
            let t = self.combinatorial_type();
            let ok = match self.n {
                1 => true, // forced: one vertex with an a-loop and a b-loop
                2 => t == CombinatorialType::new(2, 1, 1, 0, 0),
                n => t == CombinatorialType::new(n, n / 2, 0, 0, 0) && n % 2 == 0,
            };
            if !ok {
                return Err(Error::Invalid(format!(
                    "combinatorial type {t} is not a silhouette shape"
                )));
            }
        }
        Ok(())
    }

    /// Adds an a-loop and/or a b-loop at the root when the root lacks that kind
    /// of adjacency. On reduced inputs the result is cyclically reduced (the
    /// root is kept). Graphs whose root already has both adjacencies come back
    /// unchanged.
    pub fn complete(&self) -> Result<ModularGraph> {
        let r = self.root.ok_or_else(|| {
            Error::BadArgument("completion requires a rooted graph".into())
        })?;
        let mut g = self.clone();
        if !g.is_a_adjacent(r) {
            g.alpha[r as usize] = r;
        }
        if !g.is_b_adjacent(r) {
            g.beta[r as usize] = r;
            g.beta_inv[r as usize] = r;
        }
        Ok(g)
    }

    /// Canonical traversal encoding from `start`: breadth-first, expanding each
    /// vertex's neighbors in the order a-edge, outgoing b-edge, incoming
    /// b-edge, recording each neighbor's discovery index (0 for an absent
    /// edge). Two connected graphs admit an isomorphism mapping start to start
    /// exactly when their encodings agree.
    fn canonical_encoding(&self, start: u32) -> Vec<u32> {
        let mut index = vec![0u32; self.n as usize + 1];
        let mut order = Vec::with_capacity(self.n as usize);
        let mut next = 1u32;
        index[start as usize] = next;
        order.push(start);
        let mut out = Vec::with_capacity(3 * self.n as usize);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in [
                self.alpha[v as usize],
                self.beta[v as usize],
                self.beta_inv[v as usize],
            ] {
                if w == 0 {
                    out.push(0);
                } else {
                    if index[w as usize] == 0 {
                        next += 1;
                        index[w as usize] = next;
                        order.push(w);
                    }
                    out.push(index[w as usize]);
                }
            }
        }
        out
    }

    /// Isomorphism of connected graphs; when `rooted`, the isomorphism must
    /// also map root to root.
    pub fn is_isomorphic(&self, other: &ModularGraph, rooted: bool) -> bool {
        if self.n != other.n {
            return false;
        }
        if rooted {
            match (self.root, other.root) {
                (Some(r1), Some(r2)) => {
                    self.canonical_encoding(r1) == other.canonical_encoding(r2)
                }
                _ => false,
            }
        } else {
            let mine = (1..=self.n)
                .map(|v| self.canonical_encoding(v))
                .min()
                .expect("at least one vertex");
            let theirs = (1..=other.n)
                .map(|v| other.canonical_encoding(v))
                .min()
                .expect("at least one vertex");
            mine == theirs
        }
    }
}

/// One vertex with an a-loop and a b-loop: the smallest silhouette graph, and
/// the Stallings graph of the whole group.
pub fn delta_1() -> ModularGraph {
    ModularGraph::from_parts(1, &[(1, 1)], &[(1, 1)], None).unwrap()
}

/// Two vertices joined by an a-edge and a b-edge, in the preferred labeling
/// (b from 1 to 2).
pub fn delta_2() -> ModularGraph {
    ModularGraph::from_parts(2, &[(1, 2)], &[(1, 2)], None).unwrap()
}

/// Two vertices joined by a b-edge, each carrying an a-loop.
pub fn delta_3() -> ModularGraph {
    ModularGraph::from_parts(2, &[(1, 1), (2, 2)], &[(1, 2)], None).unwrap()
}

/// Two vertices joined by an a-edge, each carrying a b-loop.
pub fn delta_4() -> ModularGraph {
    ModularGraph::from_parts(2, &[(1, 2)], &[(1, 1), (2, 2)], None).unwrap()
}

/// A graph under rewriting: arbitrary distinct positive labels, mutable edge
/// maps. Vertices deleted by moves simply leave the label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    vertices: BTreeSet<u32>,
    alpha: BTreeMap<u32, u32>,
    beta: BTreeMap<u32, u32>,
    beta_inv: BTreeMap<u32, u32>,
}

impl SparseGraph {
    pub fn from_graph(g: &ModularGraph) -> SparseGraph {
        let mut s = SparseGraph {
            vertices: g.vertices().collect(),
            alpha: BTreeMap::new(),
            beta: BTreeMap::new(),
            beta_inv: BTreeMap::new(),
        };
        for (v, w) in g.alpha_pairs() {
            s.set_alpha(v, w);
        }
        for (v, w) in g.beta_pairs() {
            s.set_beta(v, w);
        }
        s
    }

    pub fn size(&self) -> u32 {
        self.vertices.len() as u32
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn alpha(&self, v: u32) -> Option<u32> {
        self.alpha.get(&v).copied()
    }

    pub fn beta(&self, v: u32) -> Option<u32> {
        self.beta.get(&v).copied()
    }

    pub fn beta_inv(&self, v: u32) -> Option<u32> {
        self.beta_inv.get(&v).copied()
    }

    pub fn add_vertex(&mut self, v: u32) {
        self.vertices.insert(v);
    }

    pub fn set_alpha(&mut self, v: u32, w: u32) {
        debug_assert!(self.contains(v) && self.contains(w));
        debug_assert!(!self.alpha.contains_key(&v) && (v == w || !self.alpha.contains_key(&w)));
        self.alpha.insert(v, w);
        self.alpha.insert(w, v);
    }

    pub fn unset_alpha(&mut self, v: u32) {
        if let Some(w) = self.alpha.remove(&v) {
            if w != v {
                self.alpha.remove(&w);
            }
        }
    }

    pub fn set_beta(&mut self, v: u32, w: u32) {
        debug_assert!(self.contains(v) && self.contains(w));
        debug_assert!(!self.beta.contains_key(&v) && !self.beta_inv.contains_key(&w));
        self.beta.insert(v, w);
        self.beta_inv.insert(w, v);
    }

    pub fn unset_beta_from(&mut self, v: u32) {
        if let Some(w) = self.beta.remove(&v) {
            self.beta_inv.remove(&w);
        }
    }

    /// Removes the vertex together with every incident edge.
    pub fn remove_vertex(&mut self, v: u32) {
        self.unset_alpha(v);
        self.unset_beta_from(v);
        if let Some(u) = self.beta_inv.remove(&v) {
            self.beta.remove(&u);
        }
        self.vertices.remove(&v);
    }

    pub fn is_b_loop(&self, v: u32) -> bool {
        self.beta(v) == Some(v)
    }

    pub fn is_a_loop(&self, v: u32) -> bool {
        self.alpha(v) == Some(v)
    }

    /// True when v lies on a directed b-3-cycle.
    pub fn on_b_triangle(&self, v: u32) -> bool {
        let Some(w) = self.beta(v) else { return false };
        if w == v {
            return false;
        }
        let Some(u) = self.beta(w) else { return false };
        u != w && u != v
    }

    /// The isolated b-edge through v, as (source, target), if any.
    pub fn isolated_b_edge_at(&self, v: u32) -> Option<(u32, u32)> {
        if let Some(w) = self.beta(v) {
            if w != v && self.beta(w).is_none() {
                return Some((v, w));
            }
        }
        if let Some(u) = self.beta_inv(v) {
            if u != v && self.beta(v).is_none() {
                return Some((u, v));
            }
        }
        None
    }

    pub fn combinatorial_type(&self) -> CombinatorialType {
        let mut t = CombinatorialType::new(self.size(), 0, 0, 0, 0);
        for &v in &self.vertices {
            match self.alpha(v) {
                Some(w) if w == v => t.l2 += 1,
                Some(w) if w > v => t.k2 += 1,
                _ => {}
            }
            match self.beta(v) {
                Some(w) if w == v => t.l3 += 1,
                Some(w) if self.beta(w).is_none() => t.k3 += 1,
                _ => {}
            }
        }
        t
    }

    /// Order-preserving relabeling onto {1..n}; the result is unrooted.
    pub fn relabel_normalize(&self) -> ModularGraph {
        let mut rank: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            rank.insert(v, i as u32 + 1);
        }
        let n = self.size();
        let mut alpha = vec![0u32; n as usize + 1];
        let mut beta = vec![0u32; n as usize + 1];
        for (&v, &w) in &self.alpha {
            alpha[rank[&v] as usize] = rank[&w];
        }
        for (&v, &w) in &self.beta {
            beta[rank[&v] as usize] = rank[&w];
        }
        ModularGraph::from_arrays_unchecked(n, alpha, beta, None)
    }
}
