use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sdepth::bench::bench_with_progress;
use sdepth::{run, BenchSpec, CliError, CliResult, Method, MuSpec, OutputFormat, RunConfig, SigmaSpec};

#[derive(Parser)]
#[command(name = "sdepth", version, about = "Scatter halfspace depth of a positive definite matrix")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of (sigma, mu) with respect to one dataset.
    Compute(ComputeArgs),
    /// Timing and accuracy tables on standard Gaussian data.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Dataset file, one observation per line.
    #[arg(long)]
    data: PathBuf,
    /// Centre: `zero`, `mean`, a file, or an inline vector such as `0,1.5`.
    #[arg(long, default_value = "zero")]
    mu: String,
    /// Scatter: `identity`, a file, or an inline matrix such as `2,1;1,2`.
    #[arg(long, default_value = "identity")]
    sigma: String,
    /// exact, exact2d, rdirections, rpoints or oracle.
    #[arg(long)]
    method: String,
    /// Number of random directions or tuples (approximate methods only).
    #[arg(long = "N")]
    samples: Option<usize>,
    /// RNG seed (approximate methods only).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = scatter_depth::DEFAULT_EPS)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Emit a single JSON object.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "32,64")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',', default_value = "exact")]
    methods: Vec<String>,
    /// Per-trial mean time budget in seconds; slower cells are censored.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for the approximate methods.
    #[arg(long = "N", default_value_t = 10_000)]
    samples: usize,
    /// CSV output path; the aligned table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the trials of a cell concurrently (timings become contended).
    #[arg(long)]
    parallel_trials: bool,
}

fn compute(args: ComputeArgs) -> CliResult<String> {
    let method: Method = args.method.parse()?;
    let config = RunConfig {
        data_path: args.data,
        mu: MuSpec::parse(&args.mu)?,
        sigma: SigmaSpec::parse(&args.sigma)?,
        method,
        samples: args.samples,
        seed: args.seed,
        eps: args.eps,
        threads: args.threads,
        output: if args.json { OutputFormat::Json } else { OutputFormat::Plain },
    };
    Ok(run(&config)?.render(config.output))
}

fn bench(args: BenchArgs) -> CliResult<String> {
    let methods = args.methods.iter().map(|m| m.parse()).collect::<CliResult<Vec<Method>>>()?;
    let spec = BenchSpec {
        time_budget_s: args.budget,
        seed: args.seed,
        samples: args.samples,
        parallel_trials: args.parallel_trials,
        ..BenchSpec::new(args.dims, args.sizes, args.trials, methods)
    };
    let table = bench_with_progress(&spec, |c| eprintln!("finished d={} n={} {}", c.d, c.n, c.method))?;
    if let Some(path) = &args.out {
        table.write_csv(path)?;
    }
    Ok(table.to_text())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = matches!(&cli.command, Command::Compute(a) if a.json);
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => report(&e, json),
    }
}

fn report(e: &CliError, json: bool) -> ExitCode {
    if json {
        let obj = serde_json::json!({ "error": { "category": e.category(), "message": e.to_string() } });
        println!("{obj}");
    } else {
        eprintln!("sdepth: {} error: {e}", e.category());
    }
    ExitCode::from(e.exit_code())
}
