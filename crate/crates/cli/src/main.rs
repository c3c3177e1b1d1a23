use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gramlaw::montecarlo::{HaarSampler, McConfig};
use gramlaw::special::{alpha_constant, cosine_integral, gram_point, theta, ThetaExpansionConfig};
use gramlaw::table::{self, T4Method, TableArtifact, TableId};
use gramlaw::zeros::{find_zeros, ZeroOrdinateList};
use gramlaw::Error;

mod verify;

const CACHE_ENV: &str = "GRAMLAW_CACHE_DIR";
const ZERO_CACHE: &str = "zeros.txt";

#[derive(Parser)]
#[command(name = "gramlaw", version, about = "Gram's law statistics for zeta zeros and random unitary matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Riemann-Siegel theta θ(t)
    Theta {
        #[arg(short = 't', allow_negative_numbers = true)]
        t: f64,
        /// Terms of the asymptotic expansion
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Gram point g_M
    GramPoint {
        #[arg(short = 'M', allow_negative_numbers = true)]
        m: i64,
    },
    /// Cosine integral Ci(x)
    Ci {
        #[arg(short = 'x')]
        x: f64,
    },
    /// The constant α = 4[γ + log 2π - Ci(2π)]/π²
    Alpha,
    /// Reproduce one of the tables
    Table(TableArgs),
    /// Manage the zero cache
    Zeros {
        #[command(subcommand)]
        action: ZerosAction,
        #[arg(long, global = true)]
        cache_dir: Option<PathBuf>,
    },
    /// Cross-check independent routes
    Verify(verify::VerifyArgs),
}

#[derive(Args)]
struct TableArgs {
    /// T1, T2, T3, T4 or asymptotics
    id: String,
    #[arg(long)]
    n_max: Option<usize>,
    /// Gram indices M for T1 (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = [100i64, 1000, 10000])]
    m: Vec<i64>,
    #[arg(long, value_enum, default_value_t = T4Route::Mc)]
    method: T4Route,
    /// Zero list for T1/T3; defaults to the cache
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    mc: McArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
pub(crate) struct McArgs {
    /// Monte Carlo samples per N (accepts 1e7)
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Independent random streams; results depend on it
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, value_enum, default_value_t = Sampler::Verblunsky)]
    sampler: Sampler,
}

impl McArgs {
    pub(crate) fn config(&self) -> McConfig {
        McConfig::new(self.samples, self.seed)
            .with_workers(self.workers as usize)
            .with_sampler(match self.sampler {
                Sampler::Verblunsky => HaarSampler::Verblunsky,
                Sampler::Matrix => HaarSampler::Matrix,
            })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum T4Route {
    Corollary,
    Quadrature,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampler {
    Verblunsky,
    Matrix,
}

#[derive(Subcommand)]
enum ZerosAction {
    /// Compute zeros up to g_M and merge them into the cache
    Find {
        #[arg(long)]
        to_gram: i64,
    },
    /// Validate a zero list and merge it into the cache
    Ingest { file: PathBuf },
}

pub(crate) fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("not a positive whole number: {s}"))
    }
}

/// x with 12 significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        format!("{:.*}", (11 - mag).max(0) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

pub(crate) enum Failure {
    Verify,
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Range(_) | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("gramlaw-cache"))
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn load_zeros(file: Option<PathBuf>, cache: Option<PathBuf>) -> Result<ZeroOrdinateList, Failure> {
    let path = file.unwrap_or_else(|| cache_dir(cache).join(ZERO_CACHE));
    if !path.exists() {
        return Err(Failure::Data(format!(
            "no zero list at {}; run `gramlaw zeros find --to-gram M` or pass --zeros",
            path.display()
        )));
    }
    Ok(ZeroOrdinateList::read_path(&path)?)
}

fn with_coverage_hint(e: Error) -> Failure {
    match e {
        Error::Coverage(msg) => Failure::Data(format!(
            "{msg}; extend the zeros with `gramlaw zeros find --to-gram M`"
        )),
        e => e.into(),
    }
}

fn run_table(args: TableArgs) -> Result<(), Failure> {
    let id: TableId = args.id.parse()?;
    let artifact: TableArtifact = match id {
        TableId::T1 => {
            let zeros = load_zeros(args.zeros, args.cache_dir)?;
            table::table1(&zeros, &args.m).map_err(with_coverage_hint)?
        }
        TableId::T2 => table::table2(args.n_max.unwrap_or(21))?,
        TableId::T3 => {
            let zeros = load_zeros(args.zeros, args.cache_dir)?;
            table::table3(&zeros, args.n_max.unwrap_or(6)).map_err(with_coverage_hint)?
        }
        TableId::T4 => {
            let route = match args.method {
                T4Route::Corollary => T4Method::Corollary,
                T4Route::Quadrature => T4Method::Quadrature,
                T4Route::Mc => T4Method::MonteCarlo,
            };
            let n_max = args.n_max.unwrap_or(route.max_n().min(21));
            table::table4(n_max, route, &args.mc.config())?
        }
        TableId::Asymptotics => table::asymptotics(args.n_max.unwrap_or(21))?,
    };
    let artifact = artifact.with_command(command_line());
    let mut out: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        Format::Csv => artifact.write_csv(&mut out)?,
        Format::Json => {
            artifact.write_json(&mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn merge_into_cache(dir: &Path, new: ZeroOrdinateList) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(ZERO_CACHE);
    let merged = if path.exists() {
        let old = ZeroOrdinateList::read_path(&path)?;
        if old.covers(new.coverage().0, new.coverage().1) && old.len() >= new.len() {
            println!("{}: already covers [{}, {}], unchanged", path.display(), new.coverage().0, new.coverage().1);
            return Ok(());
        }
        old.merge(&new)?
    } else {
        new
    };
    merged.write_path(&path)?;
    let (lo, hi) = merged.coverage();
    println!("{}: {} zeros covering [{lo}, {hi}]", path.display(), merged.len());
    Ok(())
}

fn run_zeros(action: ZerosAction, dir: Option<PathBuf>) -> Result<(), Failure> {
    let dir = cache_dir(dir);
    match action {
        ZerosAction::Find { to_gram } => {
            if to_gram < 0 {
                return Err(Failure::Usage("--to-gram must be non-negative".into()));
            }
            let target = gram_point(to_gram)? + 1e-6;
            let path = dir.join(ZERO_CACHE);
            if path.exists() {
                let old = ZeroOrdinateList::read_path(&path)?;
                let (lo, hi) = old.coverage();
                if lo <= 10.0 && hi >= target {
                    println!("{}: already covers g_{to_gram}, unchanged", path.display());
                    return Ok(());
                }
                if lo <= 10.0 && hi > 10.0 {
                    return merge_into_cache(&dir, find_zeros(hi, target)?);
                }
            }
            merge_into_cache(&dir, find_zeros(10.0, target)?)
        }
        ZerosAction::Ingest { file } => merge_into_cache(&dir, ZeroOrdinateList::read_path(&file)?),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Theta { t, order } => {
            println!("{}", sig12(theta(t, ThetaExpansionConfig { order })?));
        }
        Command::GramPoint { m } => println!("{}", sig12(gram_point(m)?)),
        Command::Ci { x } => println!("{}", sig12(cosine_integral(x)?)),
        Command::Alpha => println!("{}", sig12(alpha_constant())),
        Command::Table(args) => run_table(args)?,
        Command::Zeros { action, cache_dir } => run_zeros(action, cache_dir)?,
        Command::Verify(args) => verify::run(args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
