use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fogcache_cli::tables::{render_tables, traced_outcome};
use fogcache_cli::{run_single, verify, write_csv, Fault, Mode, Settings, SweepAxis, VerifyOptions};

/// Decentralized asynchronous coded caching experiments
#[derive(Parser, Debug)]
#[command(name = "fogcache", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one configuration (one row per delta-b) and print CSV
    Simulate(SystemArgs),
    /// Sweep L, M or delta-b and write CSV
    Sweep(SystemArgs),
    /// Run the invariant suite; exits nonzero on any failure
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// Deliberately break the delivery to check the suite notices
        #[arg(long)]
        fault: Option<Fault>,
        /// Random schedules per (B, delta-b) cell
        #[arg(long, default_value_t = 4)]
        seeds: u64,
    },
    /// Print per-slot transmission tables (defaults to the four-F-AP example)
    Tables {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Print gnuplot commands mapping a sweep CSV onto the three load plots
    Plotmap {
        #[arg(default_value = "sweep.csv")]
        csv: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Tsv,
}

#[derive(Args, Debug, Default)]
struct SystemArgs {
    /// Flat key=value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of F-APs
    #[arg(long)]
    k: Option<usize>,
    /// Number of files
    #[arg(long)]
    n: Option<usize>,
    /// Cache size per F-AP, in files
    #[arg(long)]
    m: Option<f64>,
    /// File size in bits
    #[arg(long)]
    f: Option<usize>,
    /// Number of slots
    #[arg(long)]
    b: Option<usize>,
    /// Maximum delay in slots; a comma list runs each
    #[arg(long, value_delimiter = ',')]
    delta_b: Option<Vec<usize>>,
    /// Requests per slot (fixed-L schedule)
    #[arg(long, conflicts_with = "random")]
    l: Option<usize>,
    /// Seeded random surjective schedule
    #[arg(long)]
    random: bool,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    sweep: Option<SweepAxis>,
    /// Sweep values, comma separated
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Output path (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SystemArgs {
    fn settings(&self, defaults: Settings) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Settings::parse_file(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => Settings::default(),
        };
        let flags = Settings {
            k: self.k,
            n: self.n,
            m: self.m,
            f: self.f,
            b: self.b,
            delta_b: self.delta_b.clone(),
            l: self.l,
            random: self.random.then_some(true),
            trials: self.trials,
            seed: self.seed,
            mode: self.mode,
            sweep: self.sweep,
            values: self.values.clone(),
            out: self.out.clone(),
        };
        let mut merged = defaults.overlay(file).overlay(flags);
        if self.random {
            merged.l = None;
        }
        Ok(merged)
    }
}

fn emit(out: &Option<PathBuf>, text: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text)?),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate(args) => {
            let config = args.settings(Settings::desk())?.resolve()?;
            if config.sweep.is_some() {
                bail!("simulate runs a single configuration; use the sweep subcommand");
            }
            let rows = config.cells().iter().map(run_single).collect::<fogcache::Result<Vec<_>>>()?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(&config.out, &buf)?;
        }
        Command::Sweep(args) => {
            let config = args.settings(Settings::desk())?.resolve()?;
            if config.sweep.is_none() {
                bail!("sweep needs --sweep {{l,m,deltab}} and --values");
            }
            let rows = fogcache_cli::run_sweep(&config);
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(&config.out, &buf)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                eprintln!("{failed} of {} sweep cells failed; see the error column", rows.len());
            }
        }
        Command::Verify { system, fault, seeds } => {
            let settings = system.settings(Settings::default())?;
            let opts = VerifyOptions {
                ks: settings.k.map_or_else(|| VerifyOptions::default().ks, |k| vec![k]),
                file_bits: settings.f.unwrap_or(VerifyOptions::default().file_bits),
                seeds,
                fault,
            };
            let report = verify(&opts);
            print!("{}", report.render());
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Tables { system, format } => {
            let config = system.settings(Settings::example())?.resolve()?;
            let spec = config.cells().remove(0);
            let outcome = traced_outcome(&spec)?;
            let text = match format {
                TableFormat::Text => render_tables(&outcome),
                TableFormat::Tsv => outcome.log.to_tsv(),
            };
            emit(&config.out, text.as_bytes())?;
        }
        Command::Plotmap { csv } => print!("{}", fogcache_cli::plotmap::render(&csv)),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
