//! Exhaustive enumeration of small graphs and exact verification of the
//! counting identities that the samplers and the rewriting system rely on.
//!
//! Everything here is brute force on purpose: the enumerator walks every
//! labeled graph of a given size and the verifiers cross-check closed-form
//! counts against raw tallies, so any algebra slip elsewhere shows up as a
//! hard integer mismatch. Sizes are capped by [`EnumLimits`] because the
//! census grows like A(n)·B(n); past the cap the caller gets a refusal that
//! quotes the estimated census size instead of an endless loop.

use std::collections::HashMap;

use crate::codec;
use crate::graph::{CombinatorialType, Mode, ModularGraph, SparseGraph};
use crate::sampler::Dsu;
use crate::silhouette::{self, MoveKind};
use crate::tables::{self, CountTables};
use crate::{Error, Result};

/// Largest sizes the exhaustive walks accept, per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub cyclically_reduced: u32,
    pub reduced_rooted: u32,
    pub silhouette: u32,
}

impl Default for EnumLimits {
    fn default() -> EnumLimits {
        EnumLimits {
            cyclically_reduced: 9,
            reduced_rooted: 8,
            silhouette: 12,
        }
    }
}

impl EnumLimits {
    fn for_mode(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Reduced => self.reduced_rooted,
            Mode::CyclicallyReduced => self.cyclically_reduced,
            Mode::Silhouette => self.silhouette,
        }
    }
}

fn refusal(n: u32, limit: u32, mode: Mode) -> Error {
    Error::EnumerationLimit {
        n,
        limit,
        mode: mode.to_string(),
        estimate: census_estimate(n, mode),
    }
}

/// Human-readable size of the census that a refused enumeration would have
/// had to walk.
fn census_estimate(n: u32, mode: Mode) -> String {
    if mode == Mode::Silhouette {
        if n > 2 && !n.is_multiple_of(6) {
            return "0 labeled graphs (sizes are 1, 2 and multiples of 6)".into();
        }
        let total = tables::fixpoint_free_involutions(n as usize)
            * tables::all_triangle_structures(n as usize);
        return format!("at most {total} labeled graphs");
    }
    if n as usize > tables::DEFAULT_EXACT_LIMIT {
        return "far more labeled graphs than could ever be walked".into();
    }
    if n <= 2_000 {
        let t = CountTables::up_to(n as usize);
        let total = t.total(n as usize);
        match mode {
            Mode::Reduced => {
                format!("at most {} labeled graphs", total * (2 * n))
            }
            _ => format!("at most {total} labeled graphs"),
        }
    } else {
        let t = CountTables::with_exact_limit(n as usize, 0);
        let digits =
            (t.log_involutions(n as usize) + t.log_b_structures(n as usize)) / 10f64.ln();
        format!("roughly 10^{digits:.0} labeled graphs")
    }
}

/// Recursive walk over all labeled graphs of one size. `alpha` is extended at
/// the lowest unpaired vertex (loop, then partners), `beta` at the lowest
/// uncovered vertex (loop, isolated edge in both directions, then oriented
/// triangles). Rooted mode may additionally leave at most one vertex without
/// an a-edge or without b-coverage; that vertex is the forced root and stands
/// for a graph whose root loop was stripped.
struct RawScan<'a, F> {
    n: usize,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    b_covered: Vec<bool>,
    a_hole: Option<u32>,
    b_hole: Option<u32>,
    matching_only: bool,
    triangles_only: bool,
    allow_holes: bool,
    partner_seq: Vec<u32>,
    dsu: Dsu,
    total: u64,
    emitted: u64,
    visit: &'a mut F,
}

impl<'a, F: FnMut(&[u32], &[u32], Option<u32>)> RawScan<'a, F> {
    fn new(n: usize, mode: Mode, visit: &'a mut F) -> RawScan<'a, F> {
        // Partners are tried in the order their decimal form sorts, which is
        // plain numeric order below ten; the stream wrapper relies on this to
        // emit blocks in encoding order.
        let mut partner_seq: Vec<u32> = (1..=n as u32).collect();
        if n >= 10 {
            partner_seq.sort_by_key(|a| a.to_string());
        }
        RawScan {
            n,
            alpha: vec![0; n + 1],
            beta: vec![0; n + 1],
            b_covered: vec![false; n + 1],
            a_hole: None,
            b_hole: None,
            matching_only: mode == Mode::Silhouette,
            triangles_only: mode == Mode::Silhouette,
            allow_holes: mode == Mode::Reduced,
            partner_seq,
            dsu: Dsu::new(n),
            total: 0,
            emitted: 0,
            visit,
        }
    }

    fn run(&mut self) {
        self.alpha_rec(1);
    }

    fn alpha_rec(&mut self, from: usize) {
        let mut v = from;
        while v <= self.n && self.alpha[v] != 0 {
            v += 1;
        }
        if v > self.n {
            self.beta_rec(1);
            return;
        }
        if !self.matching_only {
            self.alpha[v] = v as u32;
            self.alpha_rec(v + 1);
            self.alpha[v] = 0;
        }
        for i in 0..self.partner_seq.len() {
            let w = self.partner_seq[i];
            let wu = w as usize;
            if wu > v && self.alpha[wu] == 0 {
                self.alpha[v] = w;
                self.alpha[wu] = v as u32;
                self.alpha_rec(v + 1);
                self.alpha[v] = 0;
                self.alpha[wu] = 0;
            }
        }
        if self.allow_holes && self.a_hole.is_none() {
            self.a_hole = Some(v as u32);
            self.alpha_rec(v + 1);
            self.a_hole = None;
        }
    }

    fn beta_rec(&mut self, from: usize) {
        let mut v = from;
        while v <= self.n && self.b_covered[v] {
            v += 1;
        }
        if v > self.n {
            self.leaf();
            return;
        }
        let vu = v as u32;
        self.b_covered[v] = true;
        if !self.triangles_only {
            self.beta[v] = vu;
            self.beta_rec(v + 1);
            self.beta[v] = 0;
            for w in v + 1..=self.n {
                if self.b_covered[w] {
                    continue;
                }
                self.b_covered[w] = true;
                self.beta[v] = w as u32;
                self.beta_rec(v + 1);
                self.beta[v] = 0;
                self.beta[w] = vu;
                self.beta_rec(v + 1);
                self.beta[w] = 0;
                self.b_covered[w] = false;
            }
        }
        for w in v + 1..=self.n {
            if self.b_covered[w] {
                continue;
            }
            self.b_covered[w] = true;
            for x in v + 1..=self.n {
                if self.b_covered[x] {
                    continue;
                }
                self.b_covered[x] = true;
                self.beta[v] = w as u32;
                self.beta[w] = x as u32;
                self.beta[x] = vu;
                self.beta_rec(v + 1);
                self.beta[v] = 0;
                self.beta[w] = 0;
                self.beta[x] = 0;
                self.b_covered[x] = false;
            }
            self.b_covered[w] = false;
        }
        if self.allow_holes && self.a_hole.is_none() && self.b_hole.is_none() {
            self.b_hole = Some(vu);
            self.beta_rec(v + 1);
            self.b_hole = None;
        }
        self.b_covered[v] = false;
    }

    fn leaf(&mut self) {
        self.total += 1;
        self.dsu.reset();
        for v in 1..=self.n {
            if self.alpha[v] != 0 {
                self.dsu.union(v as u32, self.alpha[v]);
            }
            if self.beta[v] != 0 {
                self.dsu.union(v as u32, self.beta[v]);
            }
        }
        let root = self.dsu.find(1);
        if !(2..=self.n).all(|v| self.dsu.find(v as u32) == root) {
            return;
        }
        match (self.a_hole, self.b_hole) {
            (None, None) => {
                if self.allow_holes {
                    for r in 1..=self.n as u32 {
                        self.emitted += 1;
                        (self.visit)(&self.alpha, &self.beta, Some(r));
                    }
                } else {
                    self.emitted += 1;
                    (self.visit)(&self.alpha, &self.beta, None);
                }
            }
            (Some(h), None) | (None, Some(h)) => {
                self.emitted += 1;
                (self.visit)(&self.alpha, &self.beta, Some(h));
            }
            (Some(_), Some(_)) => unreachable!("at most one loop is ever stripped"),
        }
    }
}

/// Runs the raw walk, handing every connected leaf to `visit` as 1-based
/// scratch slices plus the root. Returns (all leaves, connected leaves); leaf
/// counts ignore root multiplicity. No limit checks: callers guard.
fn scan(n: u32, mode: Mode, visit: &mut impl FnMut(&[u32], &[u32], Option<u32>)) -> (u64, u64) {
    if mode == Mode::Silhouette {
        match n {
            1 => {
                visit(&[0, 1], &[0, 1], None);
                return (1, 1);
            }
            2 => {
                visit(&[0, 2, 1], &[0, 2, 0], None);
                visit(&[0, 2, 1], &[0, 0, 1], None);
                return (2, 2);
            }
            _ if !n.is_multiple_of(6) => return (0, 0),
            _ => {}
        }
    }
    let mut walk = RawScan::new(n as usize, mode, visit);
    walk.run();
    (walk.total, walk.emitted)
}

/// Streams every valid labeled graph of the given size and mode exactly once,
/// ordered by the canonical JSON encoding, and returns how many were emitted.
/// Sizes past the mode's limit are refused with a census estimate.
pub fn enumerate_graphs(
    n: u32,
    mode: Mode,
    visit: impl FnMut(&ModularGraph),
) -> Result<u64> {
    enumerate_graphs_with(n, mode, &EnumLimits::default(), visit)
}

pub fn enumerate_graphs_with(
    n: u32,
    mode: Mode,
    limits: &EnumLimits,
    mut visit: impl FnMut(&ModularGraph),
) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadArgument("size must be at least 1".into()));
    }
    let limit = limits.for_mode(mode);
    if n > limit {
        return Err(refusal(n, limit, mode));
    }
    // Leaves arrive grouped by alpha and the groups already ascend in encoding
    // order, so sorting inside each group by full encoding yields the global
    // order without materializing the stream.
    let mut block_alpha: Vec<u32> = Vec::new();
    let mut block: Vec<(String, ModularGraph)> = Vec::new();
    let mut count = 0u64;
    {
        let mut handle = |alpha: &[u32], beta: &[u32], root: Option<u32>| {
            if alpha != block_alpha.as_slice() {
                block.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                for (_, g) in block.drain(..) {
                    count += 1;
                    visit(&g);
                }
                block_alpha = alpha.to_vec();
            }
            let g = ModularGraph::from_slices_trusted(n, alpha, beta, root);
            block.push((codec::to_json(&g), g));
        };
        scan(n, mode, &mut handle);
    }
    block.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    for (_, g) in block.drain(..) {
        count += 1;
        visit(&g);
    }
    Ok(count)
}

fn type_of_slices(n: u32, alpha: &[u32], beta: &[u32]) -> CombinatorialType {
    let mut t = CombinatorialType::new(n, 0, 0, 0, 0);
    for v in 1..=n as usize {
        let a = alpha[v];
        if a == v as u32 {
            t.l2 += 1;
        } else if a > v as u32 {
            t.k2 += 1;
        }
        let b = beta[v];
        if b == v as u32 {
            t.l3 += 1;
        } else if b != 0 && beta[b as usize] == 0 {
            t.k3 += 1;
        }
    }
    t
}

/// Packs a labeled graph on up to 8 vertices into a u64 fiber key: one byte
/// per vertex, alpha in the low nibble and beta in the high one.
fn pack_graph(g: &ModularGraph) -> u64 {
    debug_assert!(g.n() <= 8);
    let mut key = 0u64;
    for v in 1..=g.n() {
        let a = g.alpha(v).unwrap_or(0) as u64;
        let b = g.beta(v).unwrap_or(0) as u64;
        key |= (a | (b << 4)) << (8 * (v - 1));
    }
    key
}

fn unpack_graph(n: u32, key: u64) -> ModularGraph {
    let mut alpha = vec![0u32; n as usize + 1];
    let mut beta = vec![0u32; n as usize + 1];
    for v in 1..=n as usize {
        let byte = (key >> (8 * (v - 1))) as u32;
        alpha[v] = byte & 0xf;
        beta[v] = (byte >> 4) & 0xf;
    }
    ModularGraph::from_slices_trusted(n, &alpha, &beta, None)
}

/// The count identity attached to one move kind, at a source type `tau` with
/// entries (n, k2, k3, l2, l3):
///
/// * `numerator` is the exact number of (source graph, move) pairs of this
///   kind landing on any one labeled image graph;
/// * `divisor` is how many moves of the kind each source graph carries, the
///   factor that turns pair counts into the normalized per-image value
///   numerator / divisor.
fn identity_parts(kind: MoveKind, tau: CombinatorialType) -> (u64, u64) {
    let n = tau.n as u64;
    match kind {
        MoveKind::Lambda3 => (n * (tau.l2 as u64 + 1), tau.l3 as u64),
        MoveKind::Lambda21 => (n * (tau.k3 as u64 + 1), tau.l2 as u64),
        MoveKind::Lambda22 => (2 * n * (n - 1) * tau.l2 as u64, tau.l2 as u64),
        MoveKind::Kappa3 => (2 * n * (n - 1) * (tau.k2 as u64 - 1), tau.k3 as u64),
        MoveKind::Exceptional => unreachable!("exceptional moves carry no count identity"),
    }
}

/// Checks the side conditions under which the count identity for `kind` holds.
fn check_applicability(kind: MoveKind, tau: CombinatorialType) -> Result<()> {
    if !tau.is_consistent() {
        return Err(Error::BadArgument(format!(
            "inconsistent combinatorial type {tau}"
        )));
    }
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::BadArgument(format!(
                "{kind} preimages need {what}; type {tau} violates that"
            )))
        }
    };
    match kind {
        MoveKind::Lambda3 => {
            need(tau.n >= 2, "n >= 2")?;
            need(tau.l3 > 0, "l3 > 0")
        }
        MoveKind::Lambda21 | MoveKind::Lambda22 => {
            need(tau.n >= 3, "n >= 3")?;
            need(tau.l2 > 0, "l2 > 0")
        }
        MoveKind::Kappa3 => {
            need(tau.n >= 4, "n >= 4")?;
            need(tau.l2 == 0, "l2 = 0")?;
            need(tau.k3 > 0, "k3 > 0")
        }
        MoveKind::Exceptional => Err(Error::BadArgument(
            "exceptional moves have no preimage count; pick lambda3, lambda21, lambda22 or kappa3"
                .into(),
        )),
    }
}

/// Counts, by exhaustive search, the labeled cyclically reduced graphs of type
/// `tau` from which some move of the given kind produces exactly
/// `delta_graph`. Note this counts graphs, not (graph, move) pairs: a source
/// whose several moves all land on `delta_graph` counts once.
pub fn count_move_preimages(
    delta_graph: &ModularGraph,
    kind: MoveKind,
    tau: CombinatorialType,
) -> Result<u64> {
    count_move_preimages_with(delta_graph, kind, tau, &EnumLimits::default())
}

pub fn count_move_preimages_with(
    delta_graph: &ModularGraph,
    kind: MoveKind,
    tau: CombinatorialType,
    limits: &EnumLimits,
) -> Result<u64> {
    check_applicability(kind, tau)?;
    let delta = kind
        .type_delta()
        .expect("the four counted kinds have fixed deltas");
    let image_type = tau.checked_apply(delta).ok_or_else(|| {
        Error::BadArgument(format!(
            "type {tau} admits no {kind} move (the image type would be invalid)"
        ))
    })?;
    if delta_graph.root().is_some() {
        return Err(Error::BadArgument(
            "preimage counting works on unrooted graphs; drop the root first".into(),
        ));
    }
    delta_graph.validate(Mode::CyclicallyReduced)?;
    if delta_graph.combinatorial_type() != image_type {
        return Err(Error::BadArgument(format!(
            "image graph has type {}, but tau {tau} plus a {kind} move gives {image_type}",
            delta_graph.combinatorial_type()
        )));
    }
    if tau.n > limits.cyclically_reduced {
        return Err(refusal(tau.n, limits.cyclically_reduced, Mode::CyclicallyReduced));
    }
    let mut count = 0u64;
    let mut handle = |alpha: &[u32], beta: &[u32], _root: Option<u32>| {
        if type_of_slices(tau.n, alpha, beta) != tau {
            return;
        }
        let g = ModularGraph::from_slices_trusted(tau.n, alpha, beta, None);
        let sparse = SparseGraph::from_graph(&g);
        for m in silhouette::sparse_moves(&sparse) {
            if m.kind != kind {
                continue;
            }
            let image = silhouette::apply_move(&sparse, &m)
                .expect("listed moves apply")
                .relabel_normalize();
            if image == *delta_graph {
                count += 1;
                break;
            }
        }
    };
    scan(tau.n, Mode::CyclicallyReduced, &mut handle);
    Ok(count)
}

/// One verified (kind, source type) group from [`verify_preimage_formulas`]:
/// every labeled image graph of the matching type was reached, each by exactly
/// `incidences_per_image` (source, move) pairs, and that tally equals the
/// closed-form numerator.
#[derive(Debug, Clone)]
pub struct PreimageRow {
    pub kind: MoveKind,
    pub tau: CombinatorialType,
    pub images: u64,
    pub expected_images: u64,
    pub incidences_per_image: u64,
    pub numerator: u64,
    pub divisor: u64,
}

/// Walks every connected graph of size `n`, applies every counted move, and
/// checks the per-image incidence identity for each (kind, source type) pair:
/// all labeled image graphs of the right type are reached, equally often, and
/// exactly numerator-many times. Any imbalance is a hard error.
pub fn verify_preimage_formulas(n: u32) -> Result<Vec<PreimageRow>> {
    verify_preimage_formulas_with(n, &EnumLimits::default())
}

pub fn verify_preimage_formulas_with(n: u32, limits: &EnumLimits) -> Result<Vec<PreimageRow>> {
    if n < 2 {
        return Err(Error::BadArgument(
            "preimage verification needs size at least 2".into(),
        ));
    }
    if n > limits.cyclically_reduced {
        return Err(refusal(n, limits.cyclically_reduced, Mode::CyclicallyReduced));
    }
    if n > 9 {
        return Err(Error::BadArgument(
            "fiber keys support image sizes up to 8, so the source size caps at 9".into(),
        ));
    }

    // Census of connected graphs per type at the two image sizes.
    let mut type_census: HashMap<CombinatorialType, u64> = HashMap::new();
    for m in [n - 1, n.saturating_sub(2)] {
        if m == 0 || m == n {
            continue;
        }
        let mut tally = |alpha: &[u32], beta: &[u32], _root: Option<u32>| {
            *type_census.entry(type_of_slices(m, alpha, beta)).or_insert(0) += 1;
        };
        scan(m, Mode::CyclicallyReduced, &mut tally);
    }

    let mut incidences: HashMap<(MoveKind, CombinatorialType, u64), u64> = HashMap::new();
    let mut handle = |alpha: &[u32], beta: &[u32], _root: Option<u32>| {
        let tau = type_of_slices(n, alpha, beta);
        let g = ModularGraph::from_slices_trusted(n, alpha, beta, None);
        let sparse = SparseGraph::from_graph(&g);
        for m in silhouette::sparse_moves(&sparse) {
            if m.kind == MoveKind::Exceptional {
                continue;
            }
            if m.kind == MoveKind::Kappa3 && tau.l2 > 0 {
                continue;
            }
            let image = silhouette::apply_move(&sparse, &m)
                .expect("listed moves apply")
                .relabel_normalize();
            *incidences
                .entry((m.kind, tau, pack_graph(&image)))
                .or_insert(0) += 1;
        }
    };
    scan(n, Mode::CyclicallyReduced, &mut handle);

    // Group by (kind, tau) and check each group's fiber profile.
    let mut groups: HashMap<(MoveKind, CombinatorialType), Vec<(u64, u64)>> = HashMap::new();
    for (&(kind, tau, image), &count) in &incidences {
        groups.entry((kind, tau)).or_default().push((image, count));
    }
    let mut rows = Vec::new();
    for ((kind, tau), mut fibers) in groups {
        fibers.sort_unstable();
        let (numerator, divisor) = identity_parts(kind, tau);
        let image_type = tau
            .checked_apply(kind.type_delta().expect("counted kinds have deltas"))
            .expect("realized moves have valid image types");
        let expected_images = *type_census.get(&image_type).unwrap_or(&0);
        if fibers.len() as u64 != expected_images {
            return Err(Error::VerificationFailed(format!(
                "{kind} from {tau}: reached {} of the {expected_images} labeled graphs of type {image_type}",
                fibers.len()
            )));
        }
        for &(image, count) in &fibers {
            if count != numerator {
                let g = unpack_graph(image_type.n, image);
                return Err(Error::VerificationFailed(format!(
                    "{kind} from {tau}: image {} reached by {count} (source, move) pairs, expected {numerator}",
                    codec::to_json(&g)
                )));
            }
        }
        rows.push(PreimageRow {
            kind,
            tau,
            images: fibers.len() as u64,
            expected_images,
            incidences_per_image: numerator,
            numerator,
            divisor,
        });
    }
    rows.sort_by_key(|r| (r.kind, r.tau.n, r.tau.k2, r.tau.k3, r.tau.l2, r.tau.l3));
    Ok(rows)
}

/// One fiber class over the silhouette map from the unrooted graphs of one
/// combinatorial type: all `fibers` silhouette values of size `s` were reached
/// by exactly `fiber_size` graphs each.
#[derive(Debug, Clone)]
pub struct CycFiberRow {
    pub tau: CombinatorialType,
    pub s: u32,
    pub fibers: u64,
    pub expected_fibers: u64,
    pub fiber_size: u64,
}

/// The rooted counterpart, classed by the number of loops `loops` in the
/// completed graph; fiber sizes are counts of rooted graphs.
#[derive(Debug, Clone)]
pub struct RootedFiberRow {
    pub loops: u32,
    pub s: u32,
    pub fibers: u64,
    pub expected_fibers: u64,
    pub fiber_size: u64,
}

#[derive(Debug, Clone)]
pub struct UniformityReport {
    pub n: u32,
    pub cyc: Vec<CycFiberRow>,
    pub rooted: Vec<RootedFiberRow>,
}

/// Computes the silhouette of every connected graph of size `n` and checks
/// that, within each combinatorial type and each silhouette size s, every
/// labeled silhouette graph of size s is hit by the same number of graphs.
/// The rooted classes (by completed-graph loop count) are tallied from the
/// same walk: a graph with l loops stands for n + l rooted graphs, all
/// sharing its completion and silhouette. Any skewed fiber is a hard error.
pub fn verify_uniformity(n: u32) -> Result<UniformityReport> {
    verify_uniformity_with(n, &EnumLimits::default())
}

pub fn verify_uniformity_with(n: u32, limits: &EnumLimits) -> Result<UniformityReport> {
    if n == 0 {
        return Err(Error::BadArgument("size must be at least 1".into()));
    }
    if n > limits.cyclically_reduced {
        return Err(refusal(n, limits.cyclically_reduced, Mode::CyclicallyReduced));
    }
    if n > 9 {
        return Err(Error::BadArgument(
            "fiber keys support silhouette sizes up to 8, so the size caps at 9".into(),
        ));
    }
    let mut cyc_fibers: HashMap<(CombinatorialType, u32, u64), u64> = HashMap::new();
    let mut rooted_fibers: HashMap<(u32, u32, u64), u64> = HashMap::new();
    let mut walk_error = None;
    let mut handle = |alpha: &[u32], beta: &[u32], _root: Option<u32>| {
        if walk_error.is_some() {
            return;
        }
        let tau = type_of_slices(n, alpha, beta);
        let g = ModularGraph::from_slices_trusted(n, alpha, beta, None);
        let silh = match silhouette::silhouette(&g) {
            Ok(s) => s,
            Err(e) => {
                walk_error = Some(e);
                return;
            }
        };
        let s = silh.n();
        let key = pack_graph(&silh);
        *cyc_fibers.entry((tau, s, key)).or_insert(0) += 1;
        let loops = tau.l2 + tau.l3;
        *rooted_fibers.entry((loops, s, key)).or_insert(0) += (n + loops) as u64;
    };
    scan(n, Mode::CyclicallyReduced, &mut handle);
    if let Some(e) = walk_error {
        return Err(e);
    }

    // Codomain sizes: one silhouette graph at sizes 1 and 2 (the preferred
    // labeling), the full labeled census at larger sizes.
    let mut codomain: HashMap<u32, u64> = HashMap::new();
    let mut codomain_size = |s: u32| -> u64 {
        *codomain.entry(s).or_insert_with(|| {
            if s <= 2 {
                1
            } else {
                scan(s, Mode::Silhouette, &mut |_, _, _| {}).1
            }
        })
    };

    let mut cyc_rows = Vec::new();
    {
        let mut groups: HashMap<(CombinatorialType, u32), Vec<(u64, u64)>> = HashMap::new();
        for (&(tau, s, key), &count) in &cyc_fibers {
            groups.entry((tau, s)).or_default().push((key, count));
        }
        for ((tau, s), fibers) in groups {
            let expected = codomain_size(s);
            check_even_fibers(&format!("type {tau}, silhouette size {s}"), s, &fibers, expected)?;
            cyc_rows.push(CycFiberRow {
                tau,
                s,
                fibers: fibers.len() as u64,
                expected_fibers: expected,
                fiber_size: fibers[0].1,
            });
        }
    }
    let mut rooted_rows = Vec::new();
    {
        let mut groups: HashMap<(u32, u32), Vec<(u64, u64)>> = HashMap::new();
        for (&(loops, s, key), &count) in &rooted_fibers {
            groups.entry((loops, s)).or_default().push((key, count));
        }
        for ((loops, s), fibers) in groups {
            let expected = codomain_size(s);
            check_even_fibers(
                &format!("rooted class with {loops} completion loops, silhouette size {s}"),
                s,
                &fibers,
                expected,
            )?;
            rooted_rows.push(RootedFiberRow {
                loops,
                s,
                fibers: fibers.len() as u64,
                expected_fibers: expected,
                fiber_size: fibers[0].1,
            });
        }
    }
    cyc_rows.sort_by_key(|r| (r.tau.n, r.tau.k2, r.tau.k3, r.tau.l2, r.tau.l3, r.s));
    rooted_rows.sort_by_key(|r| (r.loops, r.s));
    Ok(UniformityReport {
        n,
        cyc: cyc_rows,
        rooted: rooted_rows,
    })
}

fn check_even_fibers(
    scope: &str,
    s: u32,
    fibers: &[(u64, u64)],
    expected: u64,
) -> Result<()> {
    if fibers.len() as u64 != expected {
        return Err(Error::VerificationFailed(format!(
            "{scope}: {} of the {expected} silhouette graphs were reached",
            fibers.len()
        )));
    }
    let first = fibers[0].1;
    if let Some(&(key, count)) = fibers.iter().find(|&&(_, c)| c != first) {
        let a = unpack_graph(s, fibers[0].0);
        let b = unpack_graph(s, key);
        return Err(Error::VerificationFailed(format!(
            "{scope}: fiber over {} has size {first} but fiber over {} has size {count}",
            codec::to_json(&a),
            codec::to_json(&b)
        )));
    }
    Ok(())
}

/// One row of [`verify_counts`]: the raw walk at size `n` against the
/// recurrence tables, both for all leaves and for the connected ones.
#[derive(Debug, Clone)]
pub struct CountRow {
    pub n: u32,
    pub total: u64,
    pub expected_total: u64,
    pub connected: u64,
    pub expected_connected: u64,
}

/// Recounts every size up to `n_max` by brute force and checks the totals
/// against A(n)·B(n) and the connected census against the peeling recurrence.
pub fn verify_counts(n_max: u32) -> Result<Vec<CountRow>> {
    verify_counts_with(n_max, &EnumLimits::default())
}

pub fn verify_counts_with(n_max: u32, limits: &EnumLimits) -> Result<Vec<CountRow>> {
    if n_max == 0 {
        return Err(Error::BadArgument("size must be at least 1".into()));
    }
    if n_max > limits.cyclically_reduced {
        return Err(refusal(n_max, limits.cyclically_reduced, Mode::CyclicallyReduced));
    }
    let t = CountTables::up_to(n_max as usize);
    let connected = t.connected_counts(n_max as usize);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let (total, conn) = scan(n, Mode::CyclicallyReduced, &mut |_, _, _| {});
        let expected_total: u64 = t
            .total(n as usize)
            .try_into()
            .expect("census fits in u64 inside the enumeration limit");
        let expected_connected: u64 = connected[n as usize]
            .clone()
            .try_into()
            .expect("census fits in u64 inside the enumeration limit");
        if total != expected_total {
            return Err(Error::VerificationFailed(format!(
                "size {n}: walked {total} labeled graphs, recurrences give {expected_total}"
            )));
        }
        if conn != expected_connected {
            return Err(Error::VerificationFailed(format!(
                "size {n}: walked {conn} connected graphs, peeling gives {expected_connected}"
            )));
        }
        rows.push(CountRow {
            n,
            total,
            expected_total,
            connected: conn,
            expected_connected,
        });
    }
    Ok(rows)
}
