//! The `tancert` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 undecided, 3 a check failed
//! (certificate, identity, falsified inequality, missing sign change).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::analysis::{self, CrossoverResult, Identity};
use crate::certifier::{self, CertifyConfig, InequalityId, Status};
use crate::error::Error;
use crate::hexfloat;
use crate::lemma;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tancert", version, about = "Certified tangent inequalities on (0, pi/2)")]
struct Cli {
    /// Output directory (default: $TANCERT_OUT, then ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with default settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for box evaluation
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify one inequality of the catalog, or `all`
    Certify {
        id: String,
        #[command(flatten)]
        opts: CertifyOpts,
    },
    /// Re-verify a certificate file
    Check { file: PathBuf },
    /// Table of T, U, A, B with the symbolic identity checks
    Sequences {
        #[arg(long)]
        n_max: u32,
    },
    /// Sample the exponent ratio on a grid a:b:n
    Phi {
        #[arg(long)]
        grid: String,
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Bracket a crossover point between the main bounds and Qi's bounds
    Crossover {
        which: Side,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Numerically replay a proof identity
    Replay {
        identity: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args, Debug, Default)]
struct CertifyOpts {
    #[arg(long, value_parser = parse_float)]
    delta: Option<f64>,
    #[arg(long, value_parser = parse_float)]
    epsilon_max: Option<f64>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, value_parser = parse_float)]
    min_width: Option<f64>,
    /// Cover (0, delta] by boxes instead of the model about 0
    #[arg(long)]
    no_near_zero: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Upper,
    Lower,
}

/// Decimal or hex float.
fn parse_float(s: &str) -> Result<f64, String> {
    if s.trim_start_matches('-').starts_with("0x") {
        hexfloat::parse(s).map_err(|e| e.to_string())
    } else {
        s.parse().map_err(|_| format!("not a number: {s}"))
    }
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum FloatField {
    Num(f64),
    Text(String),
}

impl FloatField {
    fn value(&self) -> Result<f64, String> {
        match self {
            FloatField::Num(v) => Ok(*v),
            FloatField::Text(s) => parse_float(s),
        }
    }
}

/// Contents of a `--config` file; every field optional.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    delta: Option<FloatField>,
    epsilon_max: Option<FloatField>,
    degree: Option<usize>,
    max_depth: Option<u32>,
    min_width: Option<FloatField>,
    threads: Option<usize>,
    samples: Option<usize>,
    tol: Option<FloatField>,
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_CHECK_FAILED, message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

fn pick_float(flag: Option<f64>, file: &Option<FloatField>, default: f64) -> Result<f64, Failure> {
    match (flag, file) {
        (Some(v), _) => Ok(v),
        (None, Some(f)) => f.value().map_err(Failure::usage),
        (None, None) => Ok(default),
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else { return Ok(FileConfig::default()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))
}

fn out_dir(flag: Option<PathBuf>, file: &FileConfig) -> PathBuf {
    flag.or_else(|| file.out.clone())
        .or_else(|| std::env::var_os("TANCERT_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn catalog_listing() -> String {
    let mut s = String::from("known inequalities:\n");
    for id in InequalityId::ALL {
        s.push_str(&format!("  {:<12} {}\n", id.as_str(), id.spec().statement));
    }
    s.push_str("  all          every entry above\n");
    s
}

fn certify_config(opts: &CertifyOpts, file: &FileConfig) -> Result<CertifyConfig, Failure> {
    let d = CertifyConfig::default();
    Ok(CertifyConfig {
        delta: pick_float(opts.delta, &file.delta, d.delta)?,
        epsilon_max: pick_float(opts.epsilon_max, &file.epsilon_max, d.epsilon_max)?,
        degree: opts.degree.or(file.degree).unwrap_or(d.degree),
        max_depth: opts.max_depth.or(file.max_depth).unwrap_or(d.max_depth),
        min_width: pick_float(opts.min_width, &file.min_width, d.min_width)?,
        near_zero: !opts.no_near_zero,
    })
}

fn cmd_certify(id: &str, opts: &CertifyOpts, file: &FileConfig, threads: usize, out: &Path) -> Outcome {
    let ids: Vec<InequalityId> = if id == "all" {
        InequalityId::ALL.to_vec()
    } else {
        match id.parse() {
            Ok(id) => vec![id],
            Err(_) => return Err(Failure::usage(format!("unknown inequality {id:?}\n{}", catalog_listing()))),
        }
    };
    let cfg = certify_config(opts, file)?;
    let mut code = EXIT_OK;
    for id in ids {
        let cert = match certifier::certify(id, &cfg, threads) {
            Ok(c) => c,
            Err(e @ (Error::Domain(_) | Error::RadiusTooLarge { .. })) => return Err(Failure::usage(e.to_string())),
            Err(e) => {
                eprintln!("{id}: not certified: {e}");
                code = code.max(EXIT_UNDECIDED);
                continue;
            }
        };
        let path = write_output(out, &format!("cert-{id}.json"), &cert.to_json())?;
        println!("{id}: {} ({} boxes) -> {}", cert.status, cert.stats.box_count, path.display());
        code = code.max(match cert.status {
            Status::Certified => EXIT_OK,
            Status::Undecided => EXIT_UNDECIDED,
            Status::Falsified => EXIT_CHECK_FAILED,
        });
    }
    Ok(code)
}

fn cmd_check(file: &Path) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("cannot read {}: {e}", file.display())))?;
    let report = certifier::check_certificate_json(&text);
    if report.valid {
        println!("{}: valid", file.display());
        Ok(EXIT_OK)
    } else {
        for d in &report.diagnoses {
            println!("{}: {d}", file.display());
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

fn cmd_sequences(n_max: u32, out: &Path) -> Outcome {
    lemma::verify_shift_identities(n_max.max(8)).map_err(|e| Failure::check(e.to_string()))?;
    let rows = lemma::sequence_table(n_max).map_err(|e| Failure::check(e.to_string()))?;
    let csv = lemma::sequence_csv(&rows);
    write_output(out, "sequences.csv", &csv)?;
    print!("{csv}");
    Ok(EXIT_OK)
}

fn cmd_phi(grid: &str, bits: usize, out: &Path) -> Outcome {
    let grid = analysis::parse_grid(grid).map_err(|e| Failure::usage(e.to_string()))?;
    let report = analysis::optimality_scan_with(&grid, bits).map_err(|e| Failure::usage(e.to_string()))?;
    let path = write_output(out, "phi.csv", &analysis::scan_csv(&report))?;
    log::info!("phi: inf {} sup {} over {} samples", report.inf, report.sup, report.samples.len());
    println!(
        "phi: {} samples, inf {}, sup {}, strictly inside (1, 6/5): {} -> {}",
        report.samples.len(),
        hexfloat::format(report.inf),
        hexfloat::format(report.sup),
        report.strictly_inside,
        path.display()
    );
    Ok(if report.strictly_inside { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn crossover_json(r: &CrossoverResult, tol: f64) -> String {
    let v = serde_json::json!({
        "id": r.id,
        "bracket": r.bracket,
        "tol": hexfloat::format(tol),
        "iterations": r.iterations,
        "sign_lo": r.sign_lo,
        "sign_hi": r.sign_hi,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_crossover(side: Side, tol: f64, out: &Path) -> Outcome {
    let result = match side {
        Side::Upper => analysis::crossover_upper(tol),
        Side::Lower => analysis::crossover_lower(tol),
    };
    let r = match result {
        Ok(r) => r,
        Err(e @ Error::Domain(_)) => return Err(Failure::usage(e.to_string())),
        Err(e) => return Err(Failure::check(e.to_string())),
    };
    let path = write_output(out, &format!("crossover-{}.json", r.id.as_str()), &crossover_json(&r, tol))?;
    log::info!("{}: [{}, {}]", r.id.as_str(), r.bracket.lo(), r.bracket.hi());
    println!(
        "{}: [{}, {}] after {} iterations -> {}",
        r.id.as_str(),
        hexfloat::format(r.bracket.lo()),
        hexfloat::format(r.bracket.hi()),
        r.iterations,
        path.display()
    );
    Ok(EXIT_OK)
}

fn cmd_replay(identity: &str, samples: usize, tol: f64) -> Outcome {
    let which: Identity = identity.parse().map_err(|_| {
        let names: Vec<&str> = Identity::ALL.iter().map(|i| i.as_str()).collect();
        Failure::usage(format!("unknown identity {identity:?}; expected one of {}", names.join(", ")))
    })?;
    match analysis::replay_identity(which, samples, tol) {
        Ok(r) => {
            println!(
                "{which}: {} samples, max residual {} at x = {}",
                r.samples,
                hexfloat::format(r.max_residual),
                hexfloat::format(r.worst_x)
            );
            Ok(EXIT_OK)
        }
        Err(e @ Error::Domain(_)) => Err(Failure::usage(e.to_string())),
        Err(e) => Err(Failure::check(e.to_string())),
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let file = load_config(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads).unwrap_or(1);
    if threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let out = out_dir(cli.out, &file);
    match cli.command {
        Command::Certify { id, opts } => cmd_certify(&id, &opts, &file, threads, &out),
        Command::Check { file: path } => cmd_check(&path),
        Command::Sequences { n_max } => cmd_sequences(n_max, &out),
        Command::Phi { grid, bits } => cmd_phi(&grid, bits.unwrap_or(analysis::DEFAULT_BITS), &out),
        Command::Crossover { which, tol } => {
            let tol = pick_float(tol, &file.tol, 1e-3)?;
            cmd_crossover(which, tol, &out)
        }
        Command::Replay { identity, samples, tol } => {
            let samples = samples.or(file.samples).unwrap_or(100);
            let tol = pick_float(tol, &file.tol, analysis::DEFAULT_REPLAY_TOL)?;
            cmd_replay(&identity, samples, tol)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("tancert: {}", f.message);
            f.code
        }
    }
}
