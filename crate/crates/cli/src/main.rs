use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use afkit::harness::{run_fixture, run_suite, Mode, RunConfig, RunRecord};
use clap::Parser;

/// Seeded exact verification of Alexandrov–Fenchel type inequalities.
///
/// Writes one JSON line per instance, then a summary line. Exit status is
/// 0 when every check passed, 1 when any failed, 2 on bad arguments.
#[derive(Parser, Debug)]
#[command(name = "afkit", version)]
struct Cli {
    /// discriminant | volume | shephard | torus | bm | all
    #[arg(long, default_value = "all", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Matrix size or ambient dimension.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Number of extra classes in a Gram table (table size r+1).
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Fold count for m-fold and concavity checks; defaults to n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 11)]
    grid: usize,
    /// Float tolerance for concavity checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "entry-bound", default_value_t = 3)]
    entry_bound: u32,
    /// JSONL destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip floating-point checks.
    #[arg(long = "exact-only")]
    exact_only: bool,
    /// Verify a single JSON fixture instead of generating instances.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: afkit::Error| e.to_string())
}

impl Cli {
    fn config(&self) -> RunConfig {
        RunConfig {
            mode: self.mode,
            seed: self.seed,
            trials: self.trials,
            n: self.n,
            r: self.r,
            m: self.m,
            grid: self.grid,
            tol: self.tol,
            entry_bound: self.entry_bound,
            exact_only: self.exact_only,
        }
    }
}

fn execute(cli: &Cli) -> Result<RunRecord, String> {
    let cfg = cli.config();
    match &cli.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            run_fixture(&text, &cfg).map_err(|e| e.to_string())
        }
        None => run_suite(&cfg).map_err(|e| e.to_string()),
    }
}

fn write(record: &RunRecord, out: &Option<PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => record.write_jsonl(BufWriter::new(File::create(path)?)),
        None => record.write_jsonl(BufWriter::new(io::stdout().lock())),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    let record = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("afkit: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write(&record, &cli.out) {
        eprintln!("afkit: writing output: {e}");
        return ExitCode::from(2);
    }
    let s = &record.summary;
    let _ = writeln!(
        io::stderr(),
        "afkit: {} instances, {} checks, {} failed, {:.2?}",
        s.instances,
        s.checks,
        s.failed_checks,
        start.elapsed()
    );
    if record.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
