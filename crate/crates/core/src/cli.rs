//! Command-line driver. Reports go to stdout as JSON, a short human summary
//! goes to stderr, and the exit status follows the sysexits convention:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success |
//! | 10   | the connection is not flat |
//! | 64   | usage error |
//! | 65   | malformed or out-of-range input |
//! | 70   | internal invariant breach |

use std::fmt::Display;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::connection::{curvature, Connection, ConnectionFile};
use crate::envelope::{galois_group_with_limit, group_envelope, GaloisError};
use crate::exact::Matrix;
use crate::forge::{builtin_pair, forge_connection, ForgeError, GeneratorPair};
use crate::freelie::{graded_dims_with_limit, DEFAULT_MAX_COORDINATES, DEFAULT_MAX_DEGREE};
use crate::geometry::{abelian_model, curve_model, WedgeData};
use crate::liealg::{self, generated_in, LieError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FLAT: i32 = 10;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Clone, Parser)]
#[command(name = "galois", version, about = "Exact differential Galois groups of connections on trivial bundles")]
pub struct RunConfig {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest matrix size accepted by closure, envelope and galois.
    #[arg(long, global = true, env = "GALOIS_MAX_DIM", default_value_t = liealg::DEFAULT_MAX_AMBIENT,
          value_parser = positive::<usize>)]
    pub max_dim: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Curvature of a connection; exit 10 if it is not flat.
    CheckFlat { connection: PathBuf },
    /// Lie algebra generated by a matrix list or by a connection's matrices.
    Closure { input: PathBuf },
    /// Algebraic hull of the Lie algebra generated by a matrix list.
    Envelope { input: PathBuf },
    /// Lie algebra of the differential Galois group of a flat connection.
    Galois { connection: PathBuf },
    /// Graded dimensions of the Lie algebra defined by wedge data.
    GradedDims(GradedDimsArgs),
    /// Write a connection with a prescribed semisimple Galois group.
    Forge(ForgeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Curve,
    Abelian,
}

#[derive(Debug, Clone, Args)]
pub struct GradedDimsArgs {
    /// Wedge data file.
    #[arg(long, conflicts_with_all = ["model", "genus", "dim"], required_unless_present = "model")]
    pub beta: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<Model>,
    #[arg(long)]
    pub genus: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE, value_parser = positive::<usize>)]
    pub max_degree: usize,
    /// Cap on tensor coordinates per degree.
    #[arg(long, default_value_t = DEFAULT_MAX_COORDINATES, value_parser = positive::<u128>)]
    pub max_coords: u128,
}

#[derive(Debug, Clone, Args)]
pub struct ForgeArgs {
    /// Target algebra: sl2, sl3, sl4, so5 or sp4.
    #[arg(long, required_unless_present = "pair", conflicts_with = "pair")]
    pub target: Option<String>,
    /// JSON file with {"name", "x", "y", "expected_dim"}; certified before use.
    #[arg(long)]
    pub pair: Option<PathBuf>,
    #[arg(long)]
    pub genus: usize,
}

fn positive<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr + PartialOrd + From<u8>,
    T::Err: Display,
{
    let v: T = s.parse().map_err(|e: T::Err| e.to_string())?;
    if v < T::from(1) {
        return Err("must be at least 1".into());
    }
    Ok(v)
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    /// JSON report (empty when written to `--out` or on error).
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    exit: i32,
    message: String,
}

fn fail(exit: i32, message: impl Display) -> Failure {
    Failure {
        exit,
        message: message.to_string(),
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(argv) {
        Ok(config) => run(&config),
        Err(e) => {
            use clap::error::ErrorKind;
            let exit = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if exit == EXIT_OK {
                Outcome { exit, stdout: text, stderr: String::new() }
            } else {
                Outcome { exit, stdout: String::new(), stderr: text }
            }
        }
    }
}

/// Runs a parsed configuration. Panics inside the computation are caught and
/// reported with exit status 70.
pub fn run(config: &RunConfig) -> Outcome {
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(config)));
    let (exit, report, summary) = match result {
        Ok(Ok(Report { exit, json, summary })) => (exit, Some(json), summary),
        Ok(Err(f)) => (f.exit, None, format!("error: {}", f.message)),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            (EXIT_INTERNAL, None, format!("internal error: {msg}"))
        }
    };
    let mut stdout = String::new();
    let mut stderr = summary;
    if let Some(json) = report {
        match &config.out {
            Some(path) => {
                if let Err(e) = fs::write(path, &json) {
                    return Outcome {
                        exit: EXIT_INTERNAL,
                        stdout,
                        stderr: format!("error: cannot write {}: {e}", path.display()),
                    };
                }
                stderr.push_str(&format!("\nwrote {}", path.display()));
            }
            None => stdout = json,
        }
    }
    stderr.push('\n');
    Outcome { exit, stdout, stderr }
}

struct Report {
    exit: i32,
    json: String,
    summary: String,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_DATA, format!("cannot read {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        let field = e.path().to_string();
        let at = if field == "." { String::new() } else { format!(" at field {field}") };
        fail(EXIT_DATA, format!("{}{at}: {inner}", path.display()))
    })?;
    de.end().map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    Ok(value)
}

fn read_connection(path: &Path) -> Result<Connection, Failure> {
    let file: ConnectionFile = read_json(path)?;
    file.into_connection()
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

/// A JSON array of matrices, or a connection file whose matrices are used.
fn read_matrices(path: &Path) -> Result<(usize, Vec<Matrix>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_DATA, format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('[') {
        let mats: Vec<Matrix> = read_json(path)?;
        let n = mats.first().map_or(0, Matrix::rows);
        Ok((n, mats))
    } else {
        let c = read_connection(path)?;
        Ok((c.rank(), c.matrices().to_vec()))
    }
}

fn lie_failure(e: LieError) -> Failure {
    fail(EXIT_DATA, e)
}

fn execute(config: &RunConfig) -> Result<Report, Failure> {
    match &config.command {
        Command::CheckFlat { connection } => {
            let c = read_connection(connection)?;
            let r = curvature(&c);
            let nonzero = r.components.iter().filter(|m| !m.is_zero()).count();
            let summary = if r.flat {
                format!("flat: all {} curvature components vanish", r.components.len())
            } else {
                format!("not flat: {nonzero} of {} curvature components are nonzero", r.components.len())
            };
            Ok(Report {
                exit: if r.flat { EXIT_OK } else { EXIT_NOT_FLAT },
                json: to_json(&r),
                summary,
            })
        }
        Command::Closure { input } => {
            let (n, mats) = read_matrices(input)?;
            let l = generated_in(n, &mats, config.max_dim).map_err(lie_failure)?;
            let r = liealg::report(&l);
            Ok(Report {
                exit: EXIT_OK,
                summary: format!(
                    "generated Lie algebra in gl_{n}: dimension {}, perfect {}, semisimple {}",
                    r.dim, r.perfect, r.semisimple
                ),
                json: to_json(&r),
            })
        }
        Command::Envelope { input } => {
            let (n, mats) = read_matrices(input)?;
            let l = generated_in(n, &mats, config.max_dim).map_err(lie_failure)?;
            let r = group_envelope(&l);
            Ok(Report {
                exit: EXIT_OK,
                summary: format!(
                    "algebraic hull: dimension {} -> {}{}",
                    r.input.dim(),
                    r.hull.dim(),
                    if r.exact { "" } else { " (inexact: some replicas skipped)" }
                ),
                json: to_json(&r.to_json()),
            })
        }
        Command::Galois { connection } => {
            let c = read_connection(connection)?;
            match galois_group_with_limit(&c, config.max_dim) {
                Ok(r) => Ok(Report {
                    exit: EXIT_OK,
                    summary: format!(
                        "Galois Lie algebra: dimension {}, semisimple {}{}",
                        r.hull.dim(),
                        r.invariants_of_hull.semisimple,
                        if r.exact { "" } else { " (inexact: some replicas skipped)" }
                    ),
                    json: to_json(&r.to_json()),
                }),
                Err(GaloisError::NotFlat) => Ok(Report {
                    exit: EXIT_NOT_FLAT,
                    summary: format!("error: {}", GaloisError::NotFlat),
                    json: to_json(&curvature(&c)),
                }),
                Err(GaloisError::Lie(e)) => Err(lie_failure(e)),
            }
        }
        Command::GradedDims(args) => {
            let beta = graded_beta(args)?;
            let q = graded_dims_with_limit(&beta, args.max_degree, args.max_coords).map_err(|e| fail(EXIT_DATA, e))?;
            let table = q.table();
            Ok(Report {
                exit: EXIT_OK,
                summary: format!("graded dimensions for {}: {:?}", beta.label(), table.dims),
                json: to_json(&table),
            })
        }
        Command::Forge(args) => {
            let pair = match (&args.target, &args.pair) {
                (Some(t), _) => builtin_pair(t).map_err(forge_failure)?,
                (None, Some(path)) => read_json::<GeneratorPair>(path)?
                    .recertify()
                    .map_err(|e| fail(EXIT_DATA, e))?,
                (None, None) => return Err(fail(EXIT_USAGE, "forge needs --target or --pair")),
            };
            let c = forge_connection(&pair, args.genus).map_err(forge_failure)?;
            Ok(Report {
                exit: EXIT_OK,
                summary: format!(
                    "forged rank-{} connection on a genus-{} curve with Galois Lie algebra {} (dimension {})",
                    c.rank(),
                    args.genus,
                    pair.name,
                    pair.expected_dim
                ),
                json: to_json(&ConnectionFile::from(&c)),
            })
        }
    }
}

fn forge_failure(e: ForgeError) -> Failure {
    match e {
        ForgeError::UnknownTarget(_) | ForgeError::GenusTooSmall(_) => fail(EXIT_USAGE, e),
        _ => fail(EXIT_INTERNAL, e),
    }
}

fn graded_beta(args: &GradedDimsArgs) -> Result<WedgeData, Failure> {
    if let Some(path) = &args.beta {
        return read_json(path);
    }
    match (args.model, args.genus, args.dim) {
        (Some(Model::Curve), Some(g), None) => Ok(curve_model(g)),
        (Some(Model::Abelian), None, Some(n)) => Ok(abelian_model(n)),
        (Some(Model::Curve), _, _) => Err(fail(EXIT_USAGE, "--model curve needs --genus (and no --dim)")),
        (Some(Model::Abelian), _, _) => Err(fail(EXIT_USAGE, "--model abelian needs --dim (and no --genus)")),
        (None, _, _) => Err(fail(EXIT_USAGE, "graded-dims needs --beta or --model")),
    }
}
