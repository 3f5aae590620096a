use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use linkscale::ingest::{read_stream, write_tsv, Format, Ingested};
use linkscale::par::Workers;
use linkscale::pipeline::{run_classic, run_distribution, run_sweep, run_validate, GridSpec};
use linkscale::report::{
    classic_csv, curve_csv, curve_file_name, icd_csv, loss_csv, node_map_tsv, InputInfo, SummaryReport, SweepReport,
};
use linkscale_core::occmetrics::DEFAULT_SHANNON_SLOTS;
use linkscale_core::validate::ElongationSampling;
use linkscale_core::{gen_two_mode, gen_uniform, LinkStream, MetricId, TwoModeSpec, UniformSpec};
use serde_json::json;

/// Saturation time scale of link streams.
#[derive(Parser)]
#[command(name = "linkscale", version, about)]
struct Cli {
    /// Worker threads (0: all available cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Occupancy metrics over a grid of aggregation periods, and γ per metric.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Metrics to select γ with: mk, stddev, cv, shannon:<k>, cre or all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        metric: Vec<String>,
        /// Also compute density, connectivity and distance statistics.
        #[arg(long)]
        classic: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Lost shortest transitions and elongation of minimal trips.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated window counts.
        #[arg(long, value_delimiter = ',', required_unless_present = "at_gamma")]
        k_list: Vec<u32>,
        /// Run a sweep first and validate at the selected γ.
        #[arg(long, conflicts_with = "k_list")]
        at_gamma: bool,
        /// Grid of the preliminary sweep.
        #[arg(long, default_value = "log:40", requires = "at_gamma")]
        grid: GridSpec,
        /// Metric selecting γ for the preliminary sweep.
        #[arg(long, default_value = "mk", requires = "at_gamma")]
        metric: String,
        /// Seed of elongation subsampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use every eligible trip below this many.
        #[arg(long, default_value_t = 1_000_000)]
        full_below: u64,
        /// Expected number of sampled trips above that.
        #[arg(long, default_value_t = 100_000)]
        sample_size: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Inverse cumulative distribution of occupancy rates at one window count.
    Distribution {
        #[command(flatten)]
        input: InputArgs,
        /// Number of windows K.
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Density, connectivity and distances over a grid.
    Classic {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write a synthetic stream as canonical TSV.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Size, period and activity of a stream.
    Summary {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// tsv or konect.
    #[arg(long, default_value = "tsv")]
    format: Format,
    /// Treat links as directed.
    #[arg(long)]
    directed: bool,
    /// Raw clock units per timestamp unit.
    #[arg(long, default_value_t = 1)]
    resolution: u64,
}

#[derive(Args)]
struct GridArgs {
    /// `log:<points>` for log-spaced aggregation periods.
    #[arg(long, default_value = "log:40")]
    grid: GridSpec,
    /// Comma-separated window counts, instead of --grid.
    #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
    k_list: Vec<u32>,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        if self.k_list.is_empty() {
            self.grid.clone()
        } else {
            GridSpec::Windows(self.k_list.clone())
        }
    }
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Every pair gets N uniform timestamps in [0, T).
    Uniform {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        links_per_pair: u64,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Alternating high (N1 over T1) and low (N2 over T2) activity.
    Twomode {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long)]
        t2: u64,
        #[arg(long, default_value_t = 10)]
        alternations: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(args: &InputArgs) -> Result<Ingested, Failure> {
    let r = read_stream(&args.input, args.format, args.directed, args.resolution)?;
    if r.stats.self_loops > 0 {
        log::warn!("dropped {} self-loop(s)", r.stats.self_loops);
    }
    log::info!(
        "{}: {} nodes, {} events ({} before deduplication), horizon {}",
        args.input.display(),
        r.stream.node_count(),
        r.stream.event_count(),
        r.stats.raw_events - r.stats.self_loops,
        r.stream.horizon()
    );
    Ok(r)
}

fn parse_metrics(names: &[String]) -> Result<Vec<MetricId>, Failure> {
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(MetricId::all(DEFAULT_SHANNON_SLOTS));
        } else {
            out.push(n.parse::<MetricId>().map_err(|e| Failure::Usage(e.to_string()))?);
        }
    }
    out.dedup();
    Ok(out)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Outcome {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

/// Writes to `dir/name` when a directory is given, else to standard output.
fn emit(dir: Option<&Path>, name: &str, contents: &str) -> Outcome {
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            write_file(d, name, contents)
        }
        None => {
            match std::io::stdout().lock().write_all(contents.as_bytes()) {
                // reader went away, e.g. `| head`
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn write_run_info(dir: &Path, workers: &Workers, started: Instant) -> Outcome {
    let info = json!({
        "threads": workers.threads(),
        "runtime_s": started.elapsed().as_secs_f64(),
    });
    write_file(dir, "run.json", &format!("{info:#}\n"))
}

fn sweep(cli: &Cli, workers: &Workers) -> Outcome {
    let Command::Sweep {
        input,
        grid,
        metric,
        classic,
        out_dir,
    } = &cli.command
    else {
        unreachable!()
    };
    let started = Instant::now();
    let metrics = parse_metrics(metric)?;
    let ingested = load(input)?;
    let spec = grid.spec();
    let delta_grid = spec.resolve(&ingested.stream)?;
    let result = run_sweep(&ingested.stream, &delta_grid, &metrics, *classic, workers)?;
    for (m, g) in &result.gamma {
        log::info!("γ[{m}] = {:.1} s (K = {})", g.delta_seconds, g.windows);
    }

    fs::create_dir_all(out_dir)?;
    let info = InputInfo::new(&input.input.display().to_string(), input.format, &ingested);
    let report = SweepReport::new(info, spec.to_string(), *classic, &result);
    write_file(out_dir, "report.json", &report.to_json())?;
    for c in &result.curves {
        write_file(out_dir, &curve_file_name(c), &curve_csv(c))?;
    }
    if *classic {
        let rows: Vec<_> = result
            .points
            .iter()
            .filter_map(|p| p.classic.map(|c| (p.windows, p.delta_seconds, c)))
            .collect();
        write_file(out_dir, "classic.csv", &classic_csv(&rows))?;
    }
    write_file(out_dir, "nodes.tsv", &node_map_tsv(&ingested.stream))?;
    write_run_info(out_dir, workers, started)
}

fn validate(cli: &Cli, workers: &Workers) -> Outcome {
    let Command::Validate {
        input,
        k_list,
        at_gamma,
        grid,
        metric,
        seed,
        full_below,
        sample_size,
        out_dir,
    } = &cli.command
    else {
        unreachable!()
    };
    let ingested = load(input)?;
    let stream = &ingested.stream;
    let windows = if *at_gamma {
        let m = parse_metrics(std::slice::from_ref(metric))?;
        let swept = run_sweep(stream, &grid.resolve(stream)?, &m, false, workers)?;
        let g = swept.gamma[0].1;
        log::info!("validating at γ = {:.1} s (K = {})", g.delta_seconds, g.windows);
        vec![g.windows]
    } else {
        k_list.clone()
    };
    let sampling = ElongationSampling {
        full_below: *full_below,
        sample_size: *sample_size,
        seed: *seed,
    };
    let rows = run_validate(stream, &GridSpec::Windows(windows).resolve(stream)?, &sampling, workers)?;
    for r in rows.iter().filter(|r| r.elongation.subsampled) {
        log::info!(
            "K = {}: elongation mean over a seeded subsample of {} trips",
            r.windows,
            r.elongation.samples
        );
    }
    emit(out_dir.as_deref(), "loss.csv", &loss_csv(&rows))
}

fn generate(kind: &GenerateKind) -> Outcome {
    let (stream, output): (LinkStream, &Option<PathBuf>) = match kind {
        GenerateKind::Uniform {
            n,
            links_per_pair,
            horizon,
            seed,
            directed,
            output,
        } => {
            let spec = UniformSpec {
                nodes: *n,
                links_per_pair: *links_per_pair,
                horizon: *horizon,
                seed: *seed,
                directed: *directed,
            };
            if !spec.is_sparse() {
                log::warn!("{links_per_pair} links per pair over {horizon} units is not sparse in time");
            }
            (gen_uniform(&spec).map_err(|e| Failure::Usage(e.to_string()))?, output)
        }
        GenerateKind::Twomode {
            n,
            n1,
            t1,
            n2,
            t2,
            alternations,
            seed,
            directed,
            output,
        } => {
            let spec = TwoModeSpec {
                nodes: *n,
                high_links: *n1,
                high_len: *t1,
                low_links: *n2,
                low_len: *t2,
                alternations: *alternations,
                seed: *seed,
                directed: *directed,
            };
            (gen_two_mode(&spec).map_err(|e| Failure::Usage(e.to_string()))?, output)
        }
    };
    let text = write_tsv(&stream);
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Data(format!("cannot write {}: {e}", p.display()))),
        None => emit(None, "", &text),
    }
}

fn run(cli: &Cli) -> Outcome {
    let workers = || Workers::new(cli.threads).map_err(|e| Failure::Usage(e.to_string()));
    match &cli.command {
        Command::Sweep { .. } => sweep(cli, &workers()?),
        Command::Validate { .. } => validate(cli, &workers()?),
        Command::Distribution { input, k, out_dir } => {
            let ingested = load(input)?;
            let (dist, survival) = run_distribution(&ingested.stream, *k, &workers()?)?;
            log::info!(
                "K = {k}: {} minimal trips, {} distinct rates",
                dist.total(),
                dist.rates().len()
            );
            emit(out_dir.as_deref(), "icd.csv", &icd_csv(&survival))
        }
        Command::Classic { input, grid, out_dir } => {
            let ingested = load(input)?;
            let g = grid.spec().resolve(&ingested.stream)?;
            let rows = run_classic(&ingested.stream, &g, &workers()?)?;
            emit(out_dir.as_deref(), "classic.csv", &classic_csv(&rows))
        }
        Command::Generate { kind } => generate(kind),
        Command::Summary { input } => {
            let ingested = load(input)?;
            let s = serde_json::to_string_pretty(&SummaryReport::new(&ingested))?;
            emit(None, "", &format!("{s}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            log::error!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            log::error!("{msg}");
            ExitCode::from(2)
        }
    }
}
