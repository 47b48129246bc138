//! Command-line surface over the library: orbit censuses, brute-force law
//! sweeps over map space, random-map statistics, and the spin market.
//!
//! Structured results are JSON envelopes `{"schema", "config", "result"}`
//! where `config` echoes the resolved flags (excluding `--jobs`, which
//! never affects output); histograms are CSV with the config in a leading
//! comment. Exit codes: 0 success, 1 a checked law failed, 2 input error,
//! 3 capacity exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use truncator::json::SCHEMA;
use truncator::map_space::{exhaustive_limit, run_sweep, write_records, SweepOptions, Theorem};
use truncator::random_maps::{
    chapman_check, kernel_pmf_limit, kernel_size_counts, kernel_size_pmf,
    return_time_distribution, MapMeasure, DENSE_LIMIT_BITS,
};
use truncator::rng::{stream_index, stream_rng, DEFAULT_SEED};
use truncator::spin_market::{regime_report, FrozenCompilation};
use truncator::{analyze, Beta, Element, Error, ShufflingMap, SpinModel};

/// Stream id reserved for drawing a random product measure.
const MEASURE_JOB: u32 = 0x40;

/// A two-step consistency check fails when any z-score reaches this.
const Z_LIMIT: f64 = 5.0;

#[derive(Parser)]
#[command(
    name = "truncator",
    version,
    about = "Truncator dynamics of shuffling maps: orbits, law sweeps, random-map statistics, spin market"
)]
struct Cli {
    /// Worker threads for sweeps and Monte Carlo; defaults to the
    /// TRUNCATOR_JOBS environment variable, then to all cores. The output
    /// bytes never depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full orbit census of a map: attractors, basins, transients.
    Orbits(OrbitsArgs),
    /// Sweep one structural law over map space and report counterexamples.
    Verify(VerifyArgs),
    /// Kernel statistics and annealed-chain laws of random maps.
    Random(RandomArgs),
    /// Compile or sweep the spin market.
    Spin(SpinArgs),
}

#[derive(Args)]
struct OrbitsArgs {
    /// JSON file holding {"n_bits": N, "phi": [...]} with 1-based entries.
    #[arg(long, required_unless_present = "spin", conflicts_with = "spin")]
    map: Option<PathBuf>,

    /// Compile the frozen spin market instead of reading a file.
    #[arg(long, value_name = "L,D,ALPHA")]
    spin: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Law to sweep: 1 (hom transfer), 2 (commutative fixed point),
    /// 3 (polynomial powers), period, or gast4.
    #[arg(long, value_name = "LAW")]
    theorem: String,

    /// Group size M = 2^N.
    #[arg(long)]
    m: u32,

    /// Allow the larger exhaustive spaces (M = 8 for map sweeps).
    #[arg(long)]
    expensive: bool,

    /// Check this many sampled maps instead of exhausting the space.
    #[arg(long)]
    samples: Option<u64>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Highest star power compared by the polynomial sweep.
    #[arg(long, default_value_t = 16)]
    max_p: u32,

    /// Write counterexample and informational records as JSONL here
    /// (default: stderr).
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true))]
struct RandomArgs {
    /// Cube dimension N; the group has 2^N states.
    #[arg(long)]
    n: u8,

    /// Monte Carlo trials; 0 keeps exact columns only where supported.
    #[arg(long, default_value_t = 0)]
    samples: u64,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// CSV of the kernel-size law: exact, Poisson limit, empirical.
    #[arg(long, group = "mode")]
    kernel_hist: bool,

    /// First-return curve of the annealed chain started at this element.
    #[arg(long, group = "mode", value_name = "G")]
    return_time: Option<u32>,

    /// Two-step consistency z-scores of the annealed chain.
    #[arg(long, group = "mode")]
    chapman: bool,

    /// Horizon (steps) for --return-time.
    #[arg(long, default_value_t = 32)]
    horizon: u32,

    /// Per-state image law: uniform, or a product measure drawn from the
    /// seed.
    #[arg(long, value_enum, default_value_t = MeasureKind::Uniform)]
    measure: MeasureKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Uniform,
    Random,
}

#[derive(Args)]
#[command(group = ArgGroup::new("job").required(true).args(["alpha", "sweep"]))]
struct SpinArgs {
    /// Torus side length.
    #[arg(long = "L", visible_alias = "l")]
    l: u32,

    /// Torus dimension.
    #[arg(long)]
    d: u32,

    /// Global coupling; alone it compiles the frozen map.
    #[arg(long)]
    alpha: Option<f64>,

    /// Inverse temperature: a positive number builds the transition
    /// matrix, "inf" the frozen map (the default).
    #[arg(long, requires = "alpha")]
    beta: Option<Beta>,

    /// Coupling grid START:END:POINTS for a regime sweep.
    #[arg(long, value_name = "A0:A1:POINTS")]
    sweep: Option<String>,

    /// Element indices tracked across the sweep (comma separated).
    #[arg(long, value_delimiter = ',', requires = "sweep")]
    track: Vec<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_workers(cli.jobs);
    let out = cli.out.as_ref();
    let run = match &cli.command {
        Command::Orbits(args) => cmd_orbits(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Random(args) => cmd_random(args, out),
        Command::Spin(args) => cmd_spin(args, out),
    };
    match run {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_capacity() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn init_workers(flag: Option<usize>) {
    let jobs = flag.or_else(|| {
        std::env::var("TRUNCATOR_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn emit_envelope(
    out: Option<&PathBuf>,
    config: serde_json::Value,
    result: serde_json::Value,
) -> Result<(), Error> {
    let envelope = json!({ "schema": SCHEMA, "config": config, "result": result });
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    emit(out, &text)?;
    Ok(())
}

/// Accept either a bare map object or a previously emitted envelope.
fn parse_map(text: &str) -> Result<ShufflingMap, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let inner = match value.get("result") {
        Some(result) => result.clone(),
        None => value,
    };
    Ok(serde_json::from_value(inner)?)
}

fn warn_ties(compiled: &FrozenCompilation) {
    if compiled.ties().is_empty() {
        return;
    }
    let shown: Vec<u32> = compiled.ties().iter().take(100).map(Element::index).collect();
    let warning = json!({
        "warning": "tied-configurations",
        "count": compiled.ties().len(),
        "configurations": shown,
    });
    eprintln!("{warning}");
}

fn cmd_orbits(args: &OrbitsArgs, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    let (phi, config) = if let Some(path) = &args.map {
        let phi = parse_map(&fs::read_to_string(path)?)?;
        (phi, json!({ "command": "orbits", "map": path }))
    } else {
        let spec = args.spin.as_deref().expect("clap enforces map|spin");
        let (l, d, alpha) = parse_spin_spec(spec)?;
        let model = SpinModel::new(l, d, alpha, Beta::Infinite)?;
        let compiled = model.frozen_phi();
        warn_ties(&compiled);
        let config = json!({
            "command": "orbits",
            "spin": { "l": l, "d": d, "alpha": alpha },
        });
        (compiled.map().clone(), config)
    };
    let report = analyze(&phi)?;
    emit_envelope(out, config, serde_json::to_value(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_spin_spec(spec: &str) -> Result<(u32, u32, f64), Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    let parsed = match parts.as_slice() {
        [l, d, alpha] => match (
            l.trim().parse::<u32>(),
            d.trim().parse::<u32>(),
            alpha.trim().parse::<f64>(),
        ) {
            (Ok(l), Ok(d), Ok(alpha)) => Some((l, d, alpha)),
            _ => None,
        },
        _ => None,
    };
    parsed.ok_or_else(|| Error::InvalidModel {
        reason: format!("spin spec '{spec}' is not of the form L,D,ALPHA"),
    })
}

fn cmd_verify(args: &VerifyArgs, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    let theorem: Theorem = args.theorem.parse()?;
    // Map-space sweeps grow as M^M; only the polynomial sweep, which walks
    // homomorphisms instead, escapes the --expensive gate.
    if args.samples.is_none() && !matches!(theorem, Theorem::Polynomial) {
        let limit = exhaustive_limit(args.expensive);
        if args.m > limit {
            return Err(Error::Capacity {
                what: "exhaustive map sweep (pass --expensive)",
                requested: args.m as u64,
                limit: limit as u64,
            });
        }
    }
    let options = SweepOptions {
        samples: args.samples,
        seed: args.seed,
        max_p: args.max_p,
        progress: false,
    };
    let outcome = run_sweep(theorem, args.m, &options)?;

    let records: Vec<_> = outcome
        .violations
        .iter()
        .chain(&outcome.informational)
        .cloned()
        .collect();
    match &args.records {
        Some(path) => write_records(path, &records)?,
        None => {
            for record in &records {
                eprintln!("{}", serde_json::to_string(record)?);
            }
        }
    }

    let config = json!({
        "command": "verify",
        "theorem": theorem,
        "M": args.m,
        "samples": args.samples,
        "seed": args.seed,
        "max_p": args.max_p,
        "expensive": args.expensive,
    });
    let passed = outcome.passed();
    emit_envelope(out, config, serde_json::to_value(&outcome)?)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn build_measure(args: &RandomArgs) -> Result<MapMeasure, Error> {
    match args.measure {
        MeasureKind::Uniform => MapMeasure::uniform(args.n),
        MeasureKind::Random => {
            let mut rng = stream_rng(args.seed, stream_index(MEASURE_JOB, 0));
            MapMeasure::random(args.n, &mut rng)
        }
    }
}

fn measure_label(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::Uniform => "uniform",
        MeasureKind::Random => "random",
    }
}

fn cmd_random(args: &RandomArgs, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    if args.kernel_hist {
        return kernel_hist(args, out);
    }
    if let Some(start) = args.return_time {
        let measure = build_measure(args)?;
        let g = Element::new(start, args.n)?;
        let curve = return_time_distribution(&measure, g, args.horizon, args.samples, args.seed)?;
        let config = json!({
            "command": "random",
            "mode": "return-time",
            "n": args.n,
            "g": start,
            "horizon": args.horizon,
            "samples": args.samples,
            "seed": args.seed,
            "measure": measure_label(args.measure),
        });
        emit_envelope(out, config, serde_json::to_value(&curve)?)?;
        return Ok(ExitCode::SUCCESS);
    }

    let measure = build_measure(args)?;
    let check = chapman_check(&measure, args.samples, args.seed)?;
    let config = json!({
        "command": "random",
        "mode": "chapman",
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "measure": measure_label(args.measure),
    });
    let consistent = check.within(Z_LIMIT);
    emit_envelope(out, config, serde_json::to_value(&check)?)?;
    Ok(if consistent {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn kernel_hist(args: &RandomArgs, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    if args.n > DENSE_LIMIT_BITS {
        return Err(Error::Capacity {
            what: "kernel histogram dimension",
            requested: args.n as u64,
            limit: DENSE_LIMIT_BITS as u64,
        });
    }
    let m = 1u32 << args.n;
    let exact = kernel_size_pmf(m)?;
    let counts = if args.samples > 0 {
        Some(kernel_size_counts(args.n, args.samples, args.seed)?)
    } else {
        None
    };
    let config = json!({
        "command": "random",
        "mode": "kernel-hist",
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
    });
    let mut csv = format!("# config: {config}\n");
    csv.push_str("k,exact,limit,empirical,stderr\n");
    let trials = args.samples as f64;
    for k in 0..=m {
        let limit = kernel_pmf_limit(k);
        csv.push_str(&format!("{k},{},{limit}", exact[k as usize]));
        match &counts {
            Some(counts) => {
                let phat = counts[k as usize] as f64 / trials;
                let se = (phat * (1.0 - phat) / trials).sqrt();
                csv.push_str(&format!(",{phat},{se}\n"));
            }
            None => csv.push_str(",,\n"),
        }
    }
    emit(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = |reason: String| Error::InvalidModel { reason };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, points] = parts.as_slice() else {
        return Err(bad(format!(
            "sweep '{spec}' is not of the form START:END:POINTS"
        )));
    };
    let start: f64 = start
        .trim()
        .parse()
        .map_err(|_| bad(format!("sweep start '{start}' is not a number")))?;
    let end: f64 = end
        .trim()
        .parse()
        .map_err(|_| bad(format!("sweep end '{end}' is not a number")))?;
    let points: usize = points
        .trim()
        .parse()
        .map_err(|_| bad(format!("sweep point count '{points}' is not an integer")))?;
    if points == 0 {
        return Err(Error::EmptyRange {
            what: "coupling grid",
        });
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    // partial_cmp keeps NaN endpoints on the error path.
    if end.partial_cmp(&start) != Some(std::cmp::Ordering::Greater) {
        return Err(bad(format!(
            "sweep needs END > START, got {start}:{end}"
        )));
    }
    let span = end - start;
    Ok((0..points)
        .map(|i| start + span * i as f64 / (points - 1) as f64)
        .collect())
}

fn cmd_spin(args: &SpinArgs, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    if let Some(spec) = &args.sweep {
        let grid = parse_sweep(spec)?;
        let n_bits = SpinModel::new(args.l, args.d, grid[0], Beta::Infinite)?.n_bits();
        let tracked: Vec<Element> = args
            .track
            .iter()
            .map(|&index| Element::new(index, n_bits))
            .collect::<Result<_, _>>()?;
        let report = regime_report(args.l, args.d, &grid, &tracked)?;
        let config = json!({
            "command": "spin",
            "mode": "sweep",
            "l": args.l,
            "d": args.d,
            "sweep": spec,
            "track": args.track,
        });
        emit_envelope(out, config, serde_json::to_value(&report)?)?;
        return Ok(ExitCode::SUCCESS);
    }

    let alpha = args.alpha.expect("clap enforces alpha|sweep");
    let beta = args.beta.unwrap_or(Beta::Infinite);
    let model = SpinModel::new(args.l, args.d, alpha, beta)?;
    let config = json!({
        "command": "spin",
        "mode": if beta.is_infinite() { "frozen" } else { "matrix" },
        "l": args.l,
        "d": args.d,
        "alpha": alpha,
        "beta": beta,
    });
    let result = if beta.is_infinite() {
        let compiled = model.frozen_phi();
        warn_ties(&compiled);
        serde_json::to_value(compiled.map())?
    } else {
        serde_json::to_value(model.finite_beta_matrix()?)?
    };
    emit_envelope(out, config, result)?;
    Ok(ExitCode::SUCCESS)
}
