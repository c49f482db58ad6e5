use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heckeavg_core::horizontal::{DEFAULT_EPSILON, DEFAULT_SCAN_LIMIT, DELTA_PETERSSON_NORM};
use heckeavg_core::{Error, TraceCache};

mod commands;

/// Exact Hecke traces and average sizes of Hecke eigenvalues.
#[derive(Debug, Parser)]
#[command(name = "heckeavg", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Directory holding the persistent trace cache.
    #[arg(long, global = true, env = "HECKEAVG_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SpaceArgs {
    /// Level N.
    #[arg(short = 'N', long = "level")]
    pub level: u64,
    /// Weight k (even).
    #[arg(short = 'k', long = "weight")]
    pub weight: u32,
    /// Hecke index m, coprime to N.
    #[arg(short = 'm', long = "index")]
    pub index: u64,
}

#[derive(Debug, Clone, Args)]
pub struct FormArgs {
    /// Coefficient file (`# label weight=k` header, then `m<TAB>a(m)` lines);
    /// the discriminant form Δ is used when absent.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tr T_m on S_k(Γ₀(N)), and the normalized trace when m is a square.
    Trace(SpaceArgs),
    /// The vertical quadratic mean Av_m(N,k).
    Av(SpaceArgs),
    /// Every pair (N odd, k) with Av_2(N,k) <= 1.
    Classify {
        /// Odd levels below this are searched exhaustively.
        #[arg(long, default_value_t = heckeavg_core::vertical::LEVEL_LIMIT)]
        level_limit: u64,
        /// Also write the search certificate (JSON) here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Ramanujan τ(1..=x).
    Tau {
        #[arg(short = 'x', long, default_value_t = 10)]
        x: usize,
    },
    /// Partial quadratic means Av_f(x) against the Rankin–Selberg limit.
    Horizontal {
        #[command(flatten)]
        form: FormArgs,
        /// Petersson norm ‖f‖ (not squared); defaults to ‖Δ‖ for Δ.
        #[arg(long, conflicts_with = "norm_sq")]
        norm: Option<f64>,
        /// ⟨f,f⟩ = ‖f‖².
        #[arg(long)]
        norm_sq: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
        checkpoints: Vec<usize>,
        /// Whitespace-separated columns with a `#` header.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Minimum of |a(m)|/m^((k-3)/2-ε) over nonvanishing coefficients.
    Scan {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(short = 'x', long, default_value_t = DEFAULT_SCAN_LIMIT)]
        x: usize,
    },
    /// Moments of the Serre, Sato–Tate and CM measures.
    Measures {
        /// Moment orders.
        #[arg(long = "r", value_delimiter = ',')]
        r: Vec<f64>,
        /// Primes for the Serre measures.
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
        primes: Vec<u64>,
        /// Compare Sato–Tate and CM r-th means instead.
        #[arg(long)]
        compare: bool,
    },
}

const CACHE_FILE: &str = "traces.bin";

fn load_cache(dir: Option<&Path>) -> Result<TraceCache, Error> {
    let Some(dir) = dir else {
        return Ok(TraceCache::new());
    };
    match File::open(dir.join(CACHE_FILE)) {
        Ok(f) => TraceCache::read_from(BufReader::new(f)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(TraceCache::new()),
        Err(e) => Err(e.into()),
    }
}

fn save_cache(dir: Option<&Path>, cache: &TraceCache) -> Result<(), Error> {
    let Some(dir) = dir else {
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{CACHE_FILE}.tmp"));
    let mut w = BufWriter::new(File::create(&tmp)?);
    cache.write_to(&mut w)?;
    w.flush()?;
    drop(w);
    std::fs::rename(tmp, dir.join(CACHE_FILE))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Error::Unsupported(e.to_string()))?;
    }
    let cache_dir = cli.cache_dir.as_deref();
    let uses_cache = matches!(cli.command, Command::Trace(_) | Command::Av(_) | Command::Classify { .. });
    let cache = if uses_cache { load_cache(cache_dir)? } else { TraceCache::new() };
    let text = match &cli.command {
        Command::Trace(s) => commands::trace(&cache, *s, cli.format)?,
        Command::Av(s) => commands::av(&cache, *s, cli.format)?,
        Command::Classify {
            level_limit,
            certificate,
        } => commands::classify(&cache, *level_limit, certificate.as_deref(), cli.format)?,
        Command::Tau { x } => commands::tau(*x, cli.format)?,
        Command::Horizontal {
            form,
            norm,
            norm_sq,
            checkpoints,
            gnuplot,
        } => {
            let norm_sq = match (norm, norm_sq, &form.file) {
                (Some(n), _, _) => n * n,
                (None, Some(s), _) => *s,
                (None, None, None) => DELTA_PETERSSON_NORM * DELTA_PETERSSON_NORM,
                (None, None, Some(_)) => {
                    return Err(Error::OutOfRange(
                        "a coefficient file needs --norm or --norm-sq".into(),
                    ))
                }
            };
            commands::horizontal(form, norm_sq, checkpoints, *gnuplot, cli.format)?
        }
        Command::Scan { form, epsilon, x } => commands::scan(form, *epsilon, *x, cli.format)?,
        Command::Measures { r, primes, compare } => commands::measures(r, primes, *compare, cli.format)?,
    };
    if uses_cache {
        save_cache(cache_dir, &cache)?;
    }
    emit(cli.out.as_deref(), &text)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heckeavg: error: {e}");
            ExitCode::FAILURE
        }
    }
}
