//! Uniform random generation of cyclically reduced, rooted reduced, and
//! silhouette graphs by the recursive method over the count tables.

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Mode, ModularGraph};
use crate::tables::CountTables;
use crate::{Error, Result};

/// Generator for one task of a seeded run. Tasks draw from distinct streams
/// of a ChaCha cipher keyed by the master seed, so any parallel schedule
/// produces the same per-task randomness.
pub fn task_rng(master_seed: u64, task_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(task_index);
    rng
}

pub(crate) struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..=n as u32).collect(),
        }
    }

    pub(crate) fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    pub(crate) fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grand = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra as usize] = rb;
    }
}

pub(crate) fn arrays_connected(n: usize, alpha: &[u32], beta: &[u32]) -> bool {
    let mut dsu = Dsu::new(n);
    for v in 1..=n {
        if alpha[v] != 0 {
            dsu.union(v as u32, alpha[v]);
        }
        if beta[v] != 0 {
            dsu.union(v as u32, beta[v]);
        }
    }
    let root = dsu.find(1);
    (2..=n).all(|v| dsu.find(v as u32) == root)
}

fn guarded_prob(log_p: f64) -> f64 {
    let p = log_p.exp();
    assert!(
        p <= 1.0 + 1e-9,
        "log-space branch probability {p} exceeds 1; count tables are inconsistent"
    );
    p.min(1.0)
}

/// Draws uniformly among labeled cyclically reduced graphs of a fixed size.
///
/// Branch thresholds are precomputed once, so reuse a sampler across draws.
/// Arithmetic is exact big-integer comparison while the tables cover the size
/// exactly; beyond that, branches fall back to log-space floating point and
/// `is_exact` reports false so callers can flag the output.
pub struct CycSampler<'a> {
    tables: &'a CountTables,
    n: usize,
    exact: bool,
    /// m -> B(m-1) + 2(m-1)B(m-2): upper threshold of the isolated-edge branch.
    b_edge_threshold: Vec<BigUint>,
    /// m -> P(a-loop at the pivot of an m-set), log-space fallback only.
    approx_a_loop: Vec<f64>,
    /// m -> (P(b-loop), P(b-loop or b-edge)), log-space fallback only.
    approx_b: Vec<(f64, f64)>,
}

impl<'a> CycSampler<'a> {
    pub fn new(tables: &'a CountTables, n: usize) -> Result<CycSampler<'a>> {
        if n == 0 {
            return Err(Error::BadArgument("sample size must be at least 1".into()));
        }
        if n > tables.n_max() {
            return Err(Error::BadArgument(format!(
                "size {n} exceeds the count tables (largest covered size {})",
                tables.n_max()
            )));
        }
        let exact = tables.is_exact(n);
        let mut b_edge_threshold = Vec::new();
        let mut approx_a_loop = Vec::new();
        let mut approx_b = Vec::new();
        if exact {
            b_edge_threshold = (0..=n)
                .map(|m| {
                    if m < 2 {
                        BigUint::zero()
                    } else {
                        tables.b_structures(m - 1)
                            + BigUint::from(2 * (m - 1)) * tables.b_structures(m - 2)
                    }
                })
                .collect();
        } else {
            approx_a_loop = (0..=n)
                .map(|m| {
                    if m < 2 {
                        1.0
                    } else {
                        guarded_prob(tables.log_involutions(m - 1) - tables.log_involutions(m))
                    }
                })
                .collect();
            approx_b = (0..=n)
                .map(|m| {
                    if m < 2 {
                        return (1.0, 1.0);
                    }
                    let p_loop =
                        guarded_prob(tables.log_b_structures(m - 1) - tables.log_b_structures(m));
                    let p_edge = guarded_prob(
                        (2.0 * (m - 1) as f64).ln() + tables.log_b_structures(m - 2)
                            - tables.log_b_structures(m),
                    );
                    (p_loop, guarded_prob((p_loop + p_edge).ln()))
                })
                .collect();
        }
        Ok(CycSampler {
            tables,
            n,
            exact,
            b_edge_threshold,
            approx_a_loop,
            approx_b,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// False when branch probabilities come from the floating-point fallback.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn draw_involution<R: Rng>(&self, rng: &mut R) -> Vec<u32> {
        let mut alpha = vec![0u32; self.n + 1];
        let mut live: Vec<u32> = (1..=self.n as u32).collect();
        while let Some(&v) = live.last() {
            let m = live.len();
            let is_loop = if m == 1 {
                true
            } else if self.exact {
                rng.gen_biguint_below(self.tables.involutions(m)) < *self.tables.involutions(m - 1)
            } else {
                rng.gen::<f64>() < self.approx_a_loop[m]
            };
            live.pop();
            if is_loop {
                alpha[v as usize] = v;
            } else {
                let w = live.swap_remove(rng.gen_range(0..m - 1));
                alpha[v as usize] = w;
                alpha[w as usize] = v;
            }
        }
        alpha
    }

    fn draw_b_structure<R: Rng>(&self, rng: &mut R) -> Vec<u32> {
        let mut beta = vec![0u32; self.n + 1];
        let mut live: Vec<u32> = (1..=self.n as u32).collect();
        while let Some(&v) = live.last() {
            let m = live.len();
            let branch = if m == 1 {
                0
            } else if self.exact {
                let u = rng.gen_biguint_below(self.tables.b_structures(m));
                if u < *self.tables.b_structures(m - 1) {
                    0
                } else if u < self.b_edge_threshold[m] {
                    1
                } else {
                    2
                }
            } else {
                let r = rng.gen::<f64>();
                let (p_loop, p_edge) = self.approx_b[m];
                if r < p_loop {
                    0
                } else if r < p_edge {
                    1
                } else {
                    2
                }
            };
            live.pop();
            match branch {
                0 => beta[v as usize] = v,
                1 => {
                    let w = live.swap_remove(rng.gen_range(0..m - 1));
                    if rng.gen_range(0..2u8) == 0 {
                        beta[v as usize] = w;
                    } else {
                        beta[w as usize] = v;
                    }
                }
                _ => {
                    debug_assert!(m >= 3);
                    let j = live.swap_remove(rng.gen_range(0..m - 1));
                    let k = live.swap_remove(rng.gen_range(0..m - 2));
                    beta[v as usize] = j;
                    beta[j as usize] = k;
                    beta[k as usize] = v;
                }
            }
        }
        beta
    }

    /// One uniform draw; disconnected candidates are rejected and redrawn.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ModularGraph {
        loop {
            let alpha = self.draw_involution(rng);
            let beta = self.draw_b_structure(rng);
            if arrays_connected(self.n, &alpha, &beta) {
                return ModularGraph::from_arrays_unchecked(self.n as u32, alpha, beta, None);
            }
        }
    }
}

/// Draws uniformly among labeled rooted reduced graphs of a fixed size, by
/// sampling a cyclically reduced graph, accepting it with probability
/// proportional to its number of rooted variants, then picking one variant:
/// root anywhere, or delete one a-loop or one b-loop and root at its vertex.
pub struct RootedSampler<'a> {
    cyc: CycSampler<'a>,
}

impl<'a> RootedSampler<'a> {
    pub fn new(tables: &'a CountTables, n: usize) -> Result<RootedSampler<'a>> {
        if n < 2 {
            return Err(Error::BadArgument(format!(
                "rooted sampling needs size at least 2, got {n}"
            )));
        }
        Ok(RootedSampler {
            cyc: CycSampler::new(tables, n)?,
        })
    }

    pub fn size(&self) -> usize {
        self.cyc.size()
    }

    pub fn is_exact(&self) -> bool {
        self.cyc.is_exact()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> ModularGraph {
        let n = self.cyc.n;
        loop {
            let g = self.cyc.sample(rng);
            let mut a_loops = Vec::new();
            let mut b_loops = Vec::new();
            for v in 1..=n as u32 {
                if g.alpha(v) == Some(v) {
                    a_loops.push(v);
                }
                if g.beta(v) == Some(v) {
                    b_loops.push(v);
                }
            }
            let weight = n + a_loops.len() + b_loops.len();
            if rng.gen_range(0..2 * n) >= weight {
                continue;
            }
            let mut alpha = vec![0u32; n + 1];
            let mut beta = vec![0u32; n + 1];
            for v in 1..=n as u32 {
                if let Some(w) = g.alpha(v) {
                    alpha[v as usize] = w;
                }
                if let Some(w) = g.beta(v) {
                    beta[v as usize] = w;
                }
            }
            let r = rng.gen_range(0..weight);
            let root = if r < n {
                r as u32 + 1
            } else if r < n + a_loops.len() {
                let v = a_loops[r - n];
                alpha[v as usize] = 0;
                v
            } else {
                let v = b_loops[r - n - a_loops.len()];
                beta[v as usize] = 0;
                v
            };
            let rooted = ModularGraph::from_arrays_unchecked(n as u32, alpha, beta, Some(root));
            debug_assert!(rooted.validate(Mode::Reduced).is_ok());
            return rooted;
        }
    }
}

/// Draws uniformly among labeled silhouette graphs of a fixed size: a
/// fixpoint-free involution paired with an all-triangle b-structure,
/// redrawn until connected.
pub struct SilhouetteSampler {
    n: usize,
}

impl SilhouetteSampler {
    pub fn new(n: usize) -> Result<SilhouetteSampler> {
        if n == 0 || !n.is_multiple_of(6) {
            return Err(Error::BadArgument(format!(
                "silhouette sampling needs a positive multiple of 6, got {n}"
            )));
        }
        Ok(SilhouetteSampler { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn draw_pair<R: Rng>(&self, rng: &mut R) -> (Vec<u32>, Vec<u32>) {
        let n = self.n;
        let mut alpha = vec![0u32; n + 1];
        let mut live: Vec<u32> = (1..=n as u32).collect();
        while let Some(&v) = live.last() {
            let m = live.len();
            live.pop();
            let w = live.swap_remove(rng.gen_range(0..m - 1));
            alpha[v as usize] = w;
            alpha[w as usize] = v;
        }
        let mut beta = vec![0u32; n + 1];
        live = (1..=n as u32).collect();
        while let Some(&v) = live.last() {
            let m = live.len();
            live.pop();
            let j = live.swap_remove(rng.gen_range(0..m - 1));
            let k = live.swap_remove(rng.gen_range(0..m - 2));
            beta[v as usize] = j;
            beta[j as usize] = k;
            beta[k as usize] = v;
        }
        (alpha, beta)
    }

    /// One raw (involution, triangle structure) draw with no connectivity
    /// rejection, reporting whether the pair happened to be connected. This is
    /// the draw `sample` repeats until it succeeds.
    pub fn raw_pair_is_connected<R: Rng>(&self, rng: &mut R) -> bool {
        let (alpha, beta) = self.draw_pair(rng);
        arrays_connected(self.n, &alpha, &beta)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> ModularGraph {
        loop {
            let (alpha, beta) = self.draw_pair(rng);
            if arrays_connected(self.n, &alpha, &beta) {
                let g = ModularGraph::from_arrays_unchecked(self.n as u32, alpha, beta, None);
                debug_assert!(g.validate(Mode::Silhouette).is_ok());
                return g;
            }
        }
    }
}

pub fn sample_cyclically_reduced<R: Rng>(
    tables: &CountTables,
    n: usize,
    rng: &mut R,
) -> Result<ModularGraph> {
    Ok(CycSampler::new(tables, n)?.sample(rng))
}

pub fn sample_reduced_rooted<R: Rng>(
    tables: &CountTables,
    n: usize,
    rng: &mut R,
) -> Result<ModularGraph> {
    Ok(RootedSampler::new(tables, n)?.sample(rng))
}

pub fn sample_silhouette<R: Rng>(n: usize, rng: &mut R) -> Result<ModularGraph> {
    Ok(SilhouetteSampler::new(n)?.sample(rng))
}
