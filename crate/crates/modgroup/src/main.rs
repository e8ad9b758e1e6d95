//! Command-line front end: every library operation as a subcommand with
//! stable exit codes (0 success, 1 domain error, 2 usage error, 3 failed
//! verification) and machine-readable output, one JSON document or one CSV
//! stream per invocation.

use std::io::{Read as _, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use modgroup::experiment::{run_experiment, ExperimentConfig};
use modgroup::graph::{Mode, ModularGraph};
use modgroup::sampler::{task_rng, CycSampler, RootedSampler, SilhouetteSampler};
use modgroup::tables::CountTables;
use modgroup::{analysis, codec, oracle, silhouette, stallings, word, Error};

#[derive(Parser)]
#[command(name = "modgroup", version, about = "Stallings graphs of modular group subgroups")]
struct Cli {
    /// Worker threads for oracle verification and experiments (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Stallings graph of the subgroup generated by words
    Stallings {
        /// Comma-separated generator words over a, b, B
        #[arg(long)]
        gens: String,
        /// Emit DOT instead of JSON
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Emit JSON (the default)
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a cyclically reduced graph to its silhouette
    Silhouette {
        /// Input graph JSON file, or - for stdin
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        /// Emit the move sequence as JSON lines before the result
        #[arg(long)]
        trace: bool,
    },
    /// Validate a graph and report algebraic properties of its subgroup
    Check {
        /// Input graph JSON file, or - for stdin
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        /// Properties to report
        #[arg(long, default_value = "free,index,parabolic,malnormal")]
        props: String,
    },
    /// Draw uniform random graphs
    Sample {
        #[arg(long, value_enum)]
        mode: SampleMode,
        /// Graph size (number of vertices)
        #[arg(long)]
        n: u32,
        /// Number of draws
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Master seed; MODGROUP_SEED overrides
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving one JSON file per draw instead of stdout output
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Re-derive counting and rewriting identities by exhaustive enumeration
    Oracle {
        #[arg(long, value_enum)]
        verify: VerifyKind,
        /// Largest size (counts) or the single size (preimages, uniformity)
        #[arg(long)]
        n: u32,
    },
    /// Run a seeded Monte Carlo experiment from a JSON config
    Experiment {
        /// Experiment configuration file
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Report CSV destination (stdout when absent)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Write (n, frequency, stderr) triples to stdout; requires --out
        #[arg(long, requires = "out")]
        emit_plot_data: bool,
    },
    /// Translate a graph between JSON and DOT
    Convert {
        /// Input graph file (JSON or DOT, detected by content), or - for stdin
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        /// Target format (default: the opposite of the input)
        #[arg(long, value_enum)]
        to: Option<GraphFormat>,
        /// Output file (stdout when absent)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleMode {
    /// Cyclically reduced graphs
    Cyc,
    /// Rooted reduced graphs
    Rooted,
    /// Silhouette graphs
    Silh,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Counts,
    Preimages,
    Uniformity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
    let result = run(cli.command, &mut out).and_then(|()| Ok(out.flush()?));
    if let Err(e) = result {
        if let Error::Io(io) = &e {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return;
            }
        }
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::EnumerationLimit { .. } | Error::BadArgument(_) => 2,
            Error::VerificationFailed(_) => 3,
            _ => 1,
        });
    }
}

fn run(command: Command, out: &mut impl Write) -> modgroup::Result<()> {
    match command {
        Command::Stallings { gens, dot, .. } => {
            let words = gens
                .split(',')
                .map(|s| word::Word::parse(s.trim()))
                .collect::<modgroup::Result<Vec<_>>>()?;
            let g = stallings::stallings_from_generators(&words);
            writeln!(out, "{}", if dot { codec::to_dot(&g) } else { codec::to_json(&g) })?;
            Ok(())
        }
        Command::Silhouette { input, trace } => {
            let g = codec::from_json(&read_input(&input)?)?;
            if trace {
                let (result, moves) = silhouette::silhouette_trace(&g)?;
                for m in &moves {
                    writeln!(out, "{}", serde_json::to_string(m)?)?;
                }
                writeln!(out, "{}", codec::to_json(&result))?;
            } else {
                writeln!(out, "{}", codec::to_json(&silhouette::silhouette(&g)?))?;
            }
            Ok(())
        }
        Command::Check { input, props } => {
            let g = codec::from_json(&read_input(&input)?)?;
            writeln!(out, "{}", check_verdict(&g, &props)?)?;
            Ok(())
        }
        Command::Sample {
            mode,
            n,
            count,
            seed,
            out: dir,
        } => run_sample(mode, n, count, override_seed(seed)?, dir.as_deref(), out),
        Command::Oracle { verify, n } => run_oracle(verify, n, out),
        Command::Experiment {
            config,
            out: dest,
            emit_plot_data,
        } => {
            let raw = std::fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&raw)?;
            cfg.master_seed = override_seed(cfg.master_seed)?;
            let start = Instant::now();
            let report = run_experiment(&cfg)?;
            eprintln!("# wall-clock {:.3}s", start.elapsed().as_secs_f64());
            match dest {
                Some(path) => std::fs::write(path, report.to_csv())?,
                None => write!(out, "{}", report.to_csv())?,
            }
            if emit_plot_data {
                write!(out, "{}", report.to_plot_csv())?;
            }
            Ok(())
        }
        Command::Convert { input, to, out: dest } => {
            let raw = read_input(&input)?;
            let (g, from) = if raw.trim_start().starts_with('{') {
                (codec::from_json(&raw)?, GraphFormat::Json)
            } else {
                (codec::from_dot(&raw)?, GraphFormat::Dot)
            };
            let to = to.unwrap_or(match from {
                GraphFormat::Json => GraphFormat::Dot,
                GraphFormat::Dot => GraphFormat::Json,
            });
            let text = match to {
                GraphFormat::Json => format!("{}\n", codec::to_json(&g)),
                GraphFormat::Dot => codec::to_dot(&g),
            };
            match dest {
                Some(path) => std::fs::write(path, text)?,
                None => write!(out, "{text}")?,
            }
            Ok(())
        }
    }
}

fn read_input(path: &str) -> modgroup::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn override_seed(seed: u64) -> modgroup::Result<u64> {
    match std::env::var("MODGROUP_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Error::BadArgument(format!("MODGROUP_SEED must be a 64-bit integer, got {s:?}"))
        }),
        Err(_) => Ok(seed),
    }
}

fn check_verdict(g: &ModularGraph, props: &str) -> modgroup::Result<String> {
    let mode = if g.root().is_some() {
        Mode::Reduced
    } else {
        Mode::CyclicallyReduced
    };
    g.validate(mode)?;
    let t = g.combinatorial_type();
    let mut doc = serde_json::json!({
        "n": g.n(),
        "root": g.root(),
        "mode": match mode {
            Mode::Reduced => "reduced",
            _ => "cyclically-reduced",
        },
        "type": {"n": t.n, "k2": t.k2, "k3": t.k3, "l2": t.l2, "l3": t.l3},
    });
    let fields = doc.as_object_mut().expect("verdict is an object");
    for prop in props.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match prop {
            "free" => {
                fields.insert("free".into(), analysis::is_free(g).into());
            }
            "index" => {
                fields.insert("index".into(), analysis::is_finite_index(g).into());
            }
            "parabolic" => {
                fields.insert("parabolic".into(), analysis::is_parabolic(g).into());
                fields.insert(
                    "ab_cycle_spectrum".into(),
                    analysis::ab_cycle_spectrum(g).into(),
                );
            }
            "malnormal" => {
                let (am, witness) = analysis::is_almost_malnormal(g);
                fields.insert("almost_malnormal".into(), am.into());
                fields.insert("witness".into(), serde_json::to_value(witness)?);
            }
            other => {
                return Err(Error::BadArgument(format!(
                    "unknown property {other:?}; pick from free, index, parabolic, malnormal"
                )));
            }
        }
    }
    Ok(doc.to_string())
}

fn run_sample(
    mode: SampleMode,
    n: u32,
    count: u64,
    seed: u64,
    dir: Option<&Path>,
    out: &mut impl Write,
) -> modgroup::Result<()> {
    let tables;
    let draw: Box<dyn Fn(u64) -> ModularGraph> = match mode {
        SampleMode::Cyc => {
            tables = CountTables::up_to(n as usize);
            let s = CycSampler::new(&tables, n as usize)?;
            Box::new(move |i| s.sample(&mut task_rng(seed, i)))
        }
        SampleMode::Rooted => {
            tables = CountTables::up_to(n as usize);
            let s = RootedSampler::new(&tables, n as usize)?;
            Box::new(move |i| s.sample(&mut task_rng(seed, i)))
        }
        SampleMode::Silh => {
            let s = SilhouetteSampler::new(n as usize)?;
            Box::new(move |i| s.sample(&mut task_rng(seed, i)))
        }
    };
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for i in 0..count {
                let path = dir.join(format!("sample-{i:06}.json"));
                std::fs::write(path, format!("{}\n", codec::to_json(&draw(i))))?;
            }
            writeln!(
                out,
                "{}",
                serde_json::json!({
                    "written": count,
                    "dir": dir.display().to_string(),
                })
            )?;
        }
        None if count == 1 => {
            writeln!(out, "{}", codec::to_json(&draw(0)))?;
        }
        None => {
            let docs: Vec<String> = (0..count).map(|i| codec::to_json(&draw(i))).collect();
            writeln!(out, "[{}]", docs.join(","))?;
        }
    }
    Ok(())
}

fn run_oracle(verify: VerifyKind, n: u32, out: &mut impl Write) -> modgroup::Result<()> {
    match verify {
        VerifyKind::Counts => {
            let rows = oracle::verify_counts(n)?;
            writeln!(out, "n,total,expected_total,connected,expected_connected")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n, r.total, r.expected_total, r.connected, r.expected_connected
                )?;
            }
        }
        VerifyKind::Preimages => {
            let rows = oracle::verify_preimage_formulas(n)?;
            writeln!(
                out,
                "kind,n,k2,k3,l2,l3,images,expected_images,incidences_per_image,numerator,divisor"
            )?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.kind,
                    r.tau.n,
                    r.tau.k2,
                    r.tau.k3,
                    r.tau.l2,
                    r.tau.l3,
                    r.images,
                    r.expected_images,
                    r.incidences_per_image,
                    r.numerator,
                    r.divisor
                )?;
            }
        }
        VerifyKind::Uniformity => {
            let report = oracle::verify_uniformity(n)?;
            writeln!(out, "lane,n,k2,k3,l2,l3,loops,s,fibers,expected_fibers,fiber_size")?;
            for r in &report.cyc {
                writeln!(
                    out,
                    "cyclically-reduced,{},{},{},{},{},,{},{},{},{}",
                    r.tau.n,
                    r.tau.k2,
                    r.tau.k3,
                    r.tau.l2,
                    r.tau.l3,
                    r.s,
                    r.fibers,
                    r.expected_fibers,
                    r.fiber_size
                )?;
            }
            for r in &report.rooted {
                writeln!(
                    out,
                    "rooted,{},,,,,{},{},{},{},{}",
                    report.n, r.loops, r.s, r.fibers, r.expected_fibers, r.fiber_size
                )?;
            }
        }
    }
    Ok(())
}
