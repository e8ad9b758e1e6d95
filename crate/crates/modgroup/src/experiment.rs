//! Seeded Monte Carlo experiments over the graph samplers: silhouette size
//! deficits, ab-cycle statistics, algebraic property frequencies and raw
//! connectivity, reported as deterministic CSV tables.
//!
//! Reports are byte-reproducible from (config, code version): every statistic
//! derives from integer tallies over per-sample results, and sample i of lane
//! l at size index s always draws from its own stream of the master seed, so
//! neither thread count nor scheduling can change a byte. Wall-clock timing is
//! left to the caller for the same reason.

use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::graph::ModularGraph;
use crate::sampler::{task_rng, CycSampler, RootedSampler, SilhouetteSampler};
use crate::silhouette;
use crate::tables::CountTables;
use crate::{Error, Result};

/// Exact positive-denominator rational for config values where floats would
/// drift. JSON form: a bare integer or a "num/den" string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "String")]
pub struct Rational {
    pub num: u32,
    pub den: u32,
}

impl Rational {
    pub fn new(num: u32, den: u32) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational { num, den }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(u32),
    Text(String),
}

impl TryFrom<RationalRepr> for Rational {
    type Error = String;

    fn try_from(repr: RationalRepr) -> std::result::Result<Rational, String> {
        match repr {
            RationalRepr::Int(n) => Ok(Rational::new(n, 1)),
            RationalRepr::Text(s) => s.parse().map_err(|e: Error| e.to_string()),
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::BadArgument(format!("expected a rational like 2/3, got {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        if den == 0 {
            return Err(Error::BadArgument(format!(
                "zero denominator in rational {s:?}"
            )));
        }
        Ok(Rational { num, den })
    }
}

/// Largest m with m^den <= n^num, floated first and then pinned by exact
/// integer comparison.
pub fn integer_power_floor(n: u64, alpha: Rational) -> u64 {
    if n == 0 {
        return 0;
    }
    let le = |m: u64| -> bool {
        if m <= 1 {
            return true;
        }
        match (
            (m as u128).checked_pow(alpha.den),
            (n as u128).checked_pow(alpha.num),
        ) {
            (Some(a), Some(b)) => a <= b,
            (None, Some(_)) => false,
            _ => alpha.den as f64 * (m as f64).ln() <= alpha.num as f64 * (n as f64).ln(),
        }
    };
    let mut m = (alpha.as_f64() * (n as f64).ln()).exp().floor().max(1.0) as u64;
    while le(m + 1) {
        m += 1;
    }
    while m > 1 && !le(m) {
        m -= 1;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SilhouetteSize,
    SmallAbCycles,
    Parabolicity,
    Malnormality,
    Connectivity,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExperimentKind::SilhouetteSize => "silhouette-size",
            ExperimentKind::SmallAbCycles => "small-ab-cycles",
            ExperimentKind::Parabolicity => "parabolicity",
            ExperimentKind::Malnormality => "malnormality",
            ExperimentKind::Connectivity => "connectivity",
        })
    }
}

/// Declarative description of one experiment run. The master seed fully
/// determines the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub sizes: Vec<u32>,
    pub samples_per_size: u32,
    #[serde(default = "default_alpha")]
    pub alpha_exponent: Rational,
    #[serde(default = "default_mu")]
    pub mu: Rational,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_alpha() -> Rational {
    Rational::new(1, 7)
}

fn default_mu() -> Rational {
    Rational::new(1, 1)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadArgument(msg));
        if self.sizes.is_empty() {
            return bad("at least one size is required".into());
        }
        if self.sizes[0] == 0 {
            return bad("sizes must be positive".into());
        }
        if !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return bad("sizes must be strictly ascending".into());
        }
        if self.samples_per_size < 100 {
            return bad(format!(
                "at least 100 samples per size are required, got {}",
                self.samples_per_size
            ));
        }
        let a = self.alpha_exponent;
        if a.num == 0 || 6 * a.num as u64 >= a.den as u64 {
            return bad(format!(
                "alpha-exponent must lie strictly between 0 and 1/6, got {a}"
            ));
        }
        if self.mu.num == 0 {
            return bad("mu must be positive".into());
        }
        if matches!(
            self.experiment,
            ExperimentKind::SmallAbCycles | ExperimentKind::Connectivity
        ) {
            if let Some(n) = self.sizes.iter().find(|&&n| n % 6 != 0) {
                return bad(format!(
                    "size {n} is not a multiple of 6; the silhouette sampler needs one"
                ));
            }
        }
        Ok(())
    }
}

/// Per-size statistics table plus the config and code version that produced
/// it. `freq_column`/`stderr_column` name the headline pair used for plot
/// data.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub version: String,
    pub note: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub freq_column: &'static str,
    pub stderr_column: &'static str,
}

impl ExperimentReport {
    fn new(
        config: &ExperimentConfig,
        note: &str,
        columns: Vec<&'static str>,
        freq_column: &'static str,
        stderr_column: &'static str,
    ) -> ExperimentReport {
        debug_assert!(columns.contains(&freq_column) && columns.contains(&stderr_column));
        ExperimentReport {
            config: config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            note: note.to_string(),
            columns,
            rows: Vec::new(),
            freq_column,
            stderr_column,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# modgroup {}", self.version);
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let _ = writeln!(out, "# config {config}");
        let _ = writeln!(out, "# note {}", self.note);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// The (n, frequency, stderr) projection for external plotting, one line
    /// per report row.
    pub fn to_plot_csv(&self) -> String {
        let fi = self
            .columns
            .iter()
            .position(|&c| c == self.freq_column)
            .expect("headline column exists");
        let si = self
            .columns
            .iter()
            .position(|&c| c == self.stderr_column)
            .expect("headline stderr column exists");
        let mut out = String::from("n,frequency,stderr\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{}", row[0], row[fi], row[si]);
        }
        out
    }
}

/// Runs the per-sample closure over its own seeded stream for each sample
/// index, in parallel, collecting results in index order.
fn lane_results<T: Send>(
    seed: u64,
    size_idx: usize,
    lane: u64,
    samples: u32,
    f: impl Fn(&mut ChaCha8Rng) -> T + Sync,
) -> Vec<T> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let stream = ((size_idx as u64) << 40) | (lane << 32) | i as u64;
            f(&mut task_rng(seed, stream))
        })
        .collect()
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn freq_stderr(hits: u64, total: u64) -> (f64, f64) {
    let p = hits as f64 / total as f64;
    (p, (p * (1.0 - p) / total as f64).sqrt())
}

/// Lower empirical quantile: the smallest value with at least ceil(q·k)
/// observations at or below it.
fn quantile(sorted: &[u32], q: f64) -> u32 {
    let k = sorted.len();
    let idx = ((q * k as f64).ceil() as usize).clamp(1, k) - 1;
    sorted[idx]
}

fn expect_kind(cfg: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<()> {
    cfg.validate()?;
    if kinds.contains(&cfg.experiment) {
        Ok(())
    } else {
        Err(Error::BadArgument(format!(
            "config asks for the {} experiment, which this runner does not handle",
            cfg.experiment
        )))
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.experiment {
        ExperimentKind::SilhouetteSize => run_silhouette_size(cfg),
        ExperimentKind::SmallAbCycles => run_small_ab_cycles(cfg),
        ExperimentKind::Parabolicity | ExperimentKind::Malnormality => {
            run_property_frequencies(cfg)
        }
        ExperimentKind::Connectivity => run_connectivity(cfg),
    }
}

/// Silhouette sizes of sampled graphs: mean size, deficit quantiles, and the
/// frequency of silhouettes smaller than n - (2+mu)·n^(2/3), for both the
/// cyclically reduced and the rooted sampler.
pub fn run_silhouette_size(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::SilhouetteSize])?;
    let tables = CountTables::up_to(*cfg.sizes.last().unwrap() as usize);
    let mut report = ExperimentReport::new(
        cfg,
        "tail cut is n - (2+mu)·n^(2/3); quantiles are lower empirical quantiles",
        vec![
            "n",
            "sampler",
            "samples",
            "mean_size",
            "mean_deficit",
            "deficit_p50",
            "deficit_p90",
            "deficit_p99",
            "deficit_max",
            "tail_cut",
            "tail_freq",
            "tail_freq_stderr",
        ],
        "tail_freq",
        "tail_freq_stderr",
    );
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let cut = n as f64 - (2.0 + cfg.mu.as_f64()) * (n as f64).powf(2.0 / 3.0);
        for (lane, name) in [(0u64, "cyclically-reduced"), (1, "rooted")] {
            let sizes: Vec<u32> = if lane == 0 {
                let s = CycSampler::new(&tables, n as usize)?;
                lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                    silhouette::silhouette(&s.sample(rng)).map(|h| h.n())
                })
            } else {
                let s = RootedSampler::new(&tables, n as usize)?;
                lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                    silhouette::silhouette(&s.sample(rng).complete()?).map(|h| h.n())
                })
            }
            .into_iter()
            .collect::<Result<_>>()?;
            let samples = sizes.len() as u64;
            let size_sum: u64 = sizes.iter().map(|&s| s as u64).sum();
            let mut deficits: Vec<u32> = sizes.iter().map(|&s| n - s).collect();
            deficits.sort_unstable();
            let deficit_sum: u64 = deficits.iter().map(|&d| d as u64).sum();
            let below = sizes.iter().filter(|&&s| (s as f64) < cut).count() as u64;
            let (p, se) = freq_stderr(below, samples);
            report.rows.push(vec![
                n.to_string(),
                name.to_string(),
                samples.to_string(),
                fmt6(size_sum as f64 / samples as f64),
                fmt6(deficit_sum as f64 / samples as f64),
                quantile(&deficits, 0.5).to_string(),
                quantile(&deficits, 0.9).to_string(),
                quantile(&deficits, 0.99).to_string(),
                deficits.last().unwrap().to_string(),
                fmt6(cut),
                fmt6(p),
                fmt6(se),
            ]);
        }
    }
    Ok(report)
}

/// The b-triangle a vertex lies on, identified by its smallest vertex; `None`
/// on b-loops, isolated b-edges and b-free vertices.
fn triangle_of(g: &ModularGraph, v: u32) -> Option<u32> {
    let b = g.beta(v)?;
    if b == v {
        return None;
    }
    let bb = g.beta(b)?;
    Some(v.min(b).min(bb))
}

/// A cycle is simple when it visits at most one vertex in each b-triangle.
fn cycle_is_simple(g: &ModularGraph, cycle: &[u32]) -> bool {
    let mut tris: Vec<u32> = cycle.iter().filter_map(|&v| triangle_of(g, v)).collect();
    tris.sort_unstable();
    tris.windows(2).all(|w| w[0] != w[1])
}

struct CycleStats {
    no_small: bool,
    no_small_simple: bool,
}

fn cycle_stats(g: &ModularGraph, bound: u64) -> CycleStats {
    let mut stats = CycleStats {
        no_small: true,
        no_small_simple: true,
    };
    for cycle in analysis::phi_cycles(g) {
        let m = cycle.len() as u64;
        if m >= 2 && m <= bound {
            stats.no_small = false;
            if cycle_is_simple(g, &cycle) {
                stats.no_small_simple = false;
            }
        }
    }
    debug_assert!(!stats.no_small || stats.no_small_simple);
    stats
}

/// Frequency of graphs without any ab-cycle of size in [2, floor(n^alpha)],
/// and without any simple such cycle, for the silhouette, cyclically reduced
/// and rooted samplers.
pub fn run_small_ab_cycles(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::SmallAbCycles])?;
    let tables = CountTables::up_to(*cfg.sizes.last().unwrap() as usize);
    let mut report = ExperimentReport::new(
        cfg,
        "cycle bound is floor(n^alpha); a cycle is simple when it meets each b-triangle \
         at most once; decay ceilings are pilot-calibrated, not asserted bounds",
        vec![
            "n",
            "sampler",
            "samples",
            "cycle_bound",
            "freq_no_small",
            "freq_no_small_stderr",
            "freq_no_small_simple",
            "freq_no_small_simple_stderr",
        ],
        "freq_no_small",
        "freq_no_small_stderr",
    );
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let bound = integer_power_floor(n as u64, cfg.alpha_exponent);
        for (lane, name) in [
            (0u64, "silhouette"),
            (1, "cyclically-reduced"),
            (2, "rooted"),
        ] {
            let stats: Vec<CycleStats> = match lane {
                0 => {
                    let s = SilhouetteSampler::new(n as usize)?;
                    lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                        Ok(cycle_stats(&s.sample(rng), bound))
                    })
                }
                1 => {
                    let s = CycSampler::new(&tables, n as usize)?;
                    lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                        Ok(cycle_stats(&s.sample(rng), bound))
                    })
                }
                _ => {
                    let s = RootedSampler::new(&tables, n as usize)?;
                    lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                        Ok(cycle_stats(&s.sample(rng).complete()?, bound))
                    })
                }
            }
            .into_iter()
            .collect::<Result<_>>()?;
            let samples = stats.len() as u64;
            let no_small = stats.iter().filter(|s| s.no_small).count() as u64;
            let no_simple = stats.iter().filter(|s| s.no_small_simple).count() as u64;
            let (p, se) = freq_stderr(no_small, samples);
            let (ps, ses) = freq_stderr(no_simple, samples);
            report.rows.push(vec![
                n.to_string(),
                name.to_string(),
                samples.to_string(),
                bound.to_string(),
                fmt6(p),
                fmt6(se),
                fmt6(ps),
                fmt6(ses),
            ]);
        }
    }
    Ok(report)
}

/// Frequency of non-parabolic (resp. almost malnormal) subgroups for the
/// rooted and cyclically reduced samplers. Parabolicity rows carry the
/// no-small-ab-cycle frequency of the same samples as a consistency companion;
/// malnormality rows count finite-index samples, each of which is checked to
/// be classified not almost malnormal.
pub fn run_property_frequencies(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(
        cfg,
        &[ExperimentKind::Parabolicity, ExperimentKind::Malnormality],
    )?;
    let malnormal = cfg.experiment == ExperimentKind::Malnormality;
    let tables = CountTables::up_to(*cfg.sizes.last().unwrap() as usize);
    let mut report = if malnormal {
        ExperimentReport::new(
            cfg,
            "finite-index samples (total edge maps, size >= 2) are cross-checked to be \
             not almost malnormal; decay ceilings are pilot-calibrated",
            vec![
                "n",
                "sampler",
                "samples",
                "freq_almost_malnormal",
                "freq_almost_malnormal_stderr",
                "finite_index_samples",
            ],
            "freq_almost_malnormal",
            "freq_almost_malnormal_stderr",
        )
    } else {
        ExperimentReport::new(
            cfg,
            "non-parabolic samples are checked to have no ab-cycle at all, so \
             freq_no_small_ab_cycle >= freq_non_parabolic on each row",
            vec![
                "n",
                "sampler",
                "samples",
                "cycle_bound",
                "freq_non_parabolic",
                "freq_non_parabolic_stderr",
                "freq_no_small_ab_cycle",
            ],
            "freq_non_parabolic",
            "freq_non_parabolic_stderr",
        )
    };
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let bound = integer_power_floor(n as u64, cfg.alpha_exponent);
        for (lane, name) in [(0u64, "rooted"), (1, "cyclically-reduced")] {
            let per_sample = |core: ModularGraph| -> (bool, bool) {
                if malnormal {
                    let (am, _) = analysis::is_almost_malnormal(&core);
                    let finite_index = analysis::is_finite_index(&core).is_some();
                    if finite_index && core.n() >= 2 {
                        assert!(!am, "finite-index sample classified almost malnormal");
                    }
                    if analysis::ab_cycle_spectrum(&core).iter().any(|&m| m >= 2) {
                        assert!(!am, "sample with a long ab-cycle classified almost malnormal");
                    }
                    (am, finite_index)
                } else {
                    let cycles = analysis::phi_cycles(&core);
                    let non_parabolic = cycles.is_empty();
                    let no_small = !cycles
                        .iter()
                        .any(|c| c.len() as u64 >= 2 && c.len() as u64 <= bound);
                    assert!(!non_parabolic || no_small);
                    (non_parabolic, no_small)
                }
            };
            let flags: Vec<(bool, bool)> = if lane == 0 {
                let s = RootedSampler::new(&tables, n as usize)?;
                lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                    Ok(per_sample(s.sample(rng).complete()?))
                })
            } else {
                let s = CycSampler::new(&tables, n as usize)?;
                lane_results(cfg.master_seed, si, lane, cfg.samples_per_size, |rng| {
                    Ok(per_sample(s.sample(rng)))
                })
            }
            .into_iter()
            .collect::<Result<_>>()?;
            let samples = flags.len() as u64;
            let primary = flags.iter().filter(|f| f.0).count() as u64;
            let secondary = flags.iter().filter(|f| f.1).count() as u64;
            let (p, se) = freq_stderr(primary, samples);
            let mut row = vec![n.to_string(), name.to_string(), samples.to_string()];
            if malnormal {
                row.extend([fmt6(p), fmt6(se), secondary.to_string()]);
            } else {
                let (q, _) = freq_stderr(secondary, samples);
                assert!(secondary >= primary);
                row.extend([bound.to_string(), fmt6(p), fmt6(se), fmt6(q)]);
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}

/// Fraction of raw (fixpoint-free involution, triangle structure) pairs that
/// are disconnected, against the asymptotic 5/(6n). The z column compares the
/// observed count to that constant using its own binomial deviation.
pub fn run_connectivity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::Connectivity])?;
    let mut report = ExperimentReport::new(
        cfg,
        "expected_freq is the asymptotic 5/(6n); z_abs uses the binomial deviation \
         at that frequency",
        vec![
            "n",
            "samples",
            "disconnected",
            "freq_disconnected",
            "freq_disconnected_stderr",
            "expected_freq",
            "z_abs",
        ],
        "freq_disconnected",
        "freq_disconnected_stderr",
    );
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let s = SilhouetteSampler::new(n as usize)?;
        let connected: Vec<bool> =
            lane_results(cfg.master_seed, si, 0, cfg.samples_per_size, |rng| {
                s.raw_pair_is_connected(rng)
            });
        let samples = connected.len() as u64;
        let disconnected = connected.iter().filter(|&&c| !c).count() as u64;
        let (p, se) = freq_stderr(disconnected, samples);
        let expected = 5.0 / (6.0 * n as f64);
        let se0 = (expected * (1.0 - expected) / samples as f64).sqrt();
        report.rows.push(vec![
            n.to_string(),
            samples.to_string(),
            disconnected.to_string(),
            fmt6(p),
            fmt6(se),
            fmt6(expected),
            fmt6((p - expected).abs() / se0),
        ]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::sample_silhouette;

    fn cfg(kind: ExperimentKind, sizes: &[u32], samples: u32) -> ExperimentConfig {
        ExperimentConfig {
            experiment: kind,
            sizes: sizes.to_vec(),
            samples_per_size: samples,
            alpha_exponent: default_alpha(),
            mu: default_mu(),
            master_seed: 42,
        }
    }

    fn column<'a>(report: &'a ExperimentReport, row: usize, name: &str) -> &'a str {
        let idx = report.columns.iter().position(|&c| c == name).unwrap();
        &report.rows[row][idx]
    }

    #[test]
    fn rationals_parse_and_power_floors_are_exact() {
        assert_eq!("2/13".parse::<Rational>().unwrap(), Rational::new(2, 13));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::new(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(
            serde_json::from_str::<Rational>("\"1/7\"").unwrap(),
            Rational::new(1, 7)
        );
        assert_eq!(
            serde_json::from_str::<Rational>("3").unwrap(),
            Rational::new(3, 1)
        );
        assert_eq!(
            serde_json::to_string(&Rational::new(1, 7)).unwrap(),
            "\"1/7\""
        );

        let seventh = Rational::new(1, 7);
        assert_eq!(integer_power_floor(60, seventh), 1);
        assert_eq!(integer_power_floor(600, seventh), 2);
        assert_eq!(integer_power_floor(6000, seventh), 3);
        assert_eq!(integer_power_floor(2187, seventh), 3);
        assert_eq!(integer_power_floor(2186, seventh), 2);
        assert_eq!(integer_power_floor(27, Rational::new(2, 3)), 9);
        assert_eq!(integer_power_floor(63, Rational::new(1, 2)), 7);
        assert_eq!(integer_power_floor(64, Rational::new(1, 2)), 8);
        assert_eq!(integer_power_floor(1, seventh), 1);
    }

    #[test]
    fn config_validation_rules() {
        assert!(cfg(ExperimentKind::Connectivity, &[6, 60], 100).validate().is_ok());
        assert!(cfg(ExperimentKind::Connectivity, &[6, 60], 99).validate().is_err());
        assert!(cfg(ExperimentKind::Connectivity, &[], 100).validate().is_err());
        assert!(cfg(ExperimentKind::Connectivity, &[6, 6], 100).validate().is_err());
        assert!(cfg(ExperimentKind::Connectivity, &[0, 6], 100).validate().is_err());
        assert!(cfg(ExperimentKind::SmallAbCycles, &[10], 100).validate().is_err());
        assert!(cfg(ExperimentKind::Parabolicity, &[10], 100).validate().is_ok());

        let mut c = cfg(ExperimentKind::Connectivity, &[6], 100);
        c.alpha_exponent = Rational::new(1, 6);
        assert!(c.validate().is_err());
        c.alpha_exponent = Rational::new(1, 5);
        assert!(c.validate().is_err());
        c.alpha_exponent = Rational::new(2, 13);
        assert!(c.validate().is_ok());
        c.mu = Rational::new(0, 1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_deserializes_kebab_names_and_defaults() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"small-ab-cycles","sizes":[6,12],"samples-per-size":100}"#,
        )
        .unwrap();
        assert_eq!(c.experiment, ExperimentKind::SmallAbCycles);
        assert_eq!(c.alpha_exponent, Rational::new(1, 7));
        assert_eq!(c.mu, Rational::new(1, 1));
        assert_eq!(c.master_seed, 0);
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"experiment":"connectivity","sizes":[6],"samples-per-size":100,"bogus":1}"#
        )
        .is_err());
        let round: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(round, c);
    }

    #[test]
    fn reports_are_byte_reproducible() {
        let c = cfg(ExperimentKind::Connectivity, &[30], 300);
        let a = run_experiment(&c).unwrap().to_csv();
        let b = run_experiment(&c).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("# modgroup "));
        assert!(a.contains("# config {\"experiment\":\"connectivity\""));
        let plot = run_experiment(&c).unwrap().to_plot_csv();
        assert!(plot.starts_with("n,frequency,stderr\n"));
        assert_eq!(plot.lines().count(), 2);
    }

    #[test]
    fn silhouette_size_rows_at_a_small_size() {
        let report = run_silhouette_size(&cfg(ExperimentKind::SilhouetteSize, &[6], 120)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in 0..2 {
            assert_eq!(column(&report, row, "tail_freq"), "0.000000");
            let mean: f64 = column(&report, row, "mean_size").parse().unwrap();
            assert!(mean > 0.0 && mean <= 6.0);
            let max: u32 = column(&report, row, "deficit_max").parse().unwrap();
            assert!(max <= 5);
        }
    }

    #[test]
    fn small_cycle_rows_are_internally_consistent() {
        let report =
            run_small_ab_cycles(&cfg(ExperimentKind::SmallAbCycles, &[132], 100)).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in 0..3 {
            assert_eq!(column(&report, row, "cycle_bound"), "2");
            let plain: f64 = column(&report, row, "freq_no_small").parse().unwrap();
            let simple: f64 = column(&report, row, "freq_no_small_simple").parse().unwrap();
            assert!((0.0..=1.0).contains(&plain));
            assert!(simple >= plain);
        }

        let mut rng = task_rng(7, 0);
        for _ in 0..20 {
            let g = sample_silhouette(132, &mut rng).unwrap();
            let total: usize = analysis::phi_cycles(&g).iter().map(Vec::len).sum();
            assert_eq!(total, 132);
        }
    }

    #[test]
    fn property_rows_run_with_their_cross_checks() {
        let report =
            run_property_frequencies(&cfg(ExperimentKind::Parabolicity, &[12], 100)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in 0..2 {
            let non_par: f64 = column(&report, row, "freq_non_parabolic").parse().unwrap();
            let no_small: f64 = column(&report, row, "freq_no_small_ab_cycle")
                .parse()
                .unwrap();
            assert!(no_small >= non_par);
        }

        let report =
            run_property_frequencies(&cfg(ExperimentKind::Malnormality, &[4], 100)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in 0..2 {
            let freq: f64 = column(&report, row, "freq_almost_malnormal").parse().unwrap();
            assert!((0.0..=1.0).contains(&freq));
        }

        let err = run_property_frequencies(&cfg(ExperimentKind::Connectivity, &[6], 100));
        assert!(err.is_err());
    }

    #[test]
    fn connectivity_tracks_the_asymptotic_constant() {
        let report = run_connectivity(&cfg(ExperimentKind::Connectivity, &[600], 2000)).unwrap();
        let z: f64 = column(&report, 0, "z_abs").parse().unwrap();
        assert!(z < 5.0, "z={z}");
    }
}
