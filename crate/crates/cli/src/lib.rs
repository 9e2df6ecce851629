//! Command-line front end: JSON in, JSON (or CSV for sweeps) out.
//!
//! [`run`] takes the argument vector and returns the text and exit code
//! instead of touching the process, so the binary is a thin wrapper.
//! Exit codes: 0 success, 1 malformed input, 2 domain error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use symplecta::Error;

mod commands;
pub mod sweep;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "symplecta",
    version,
    about = "Polar duality, quantum blobs and symplectic capacities"
)]
pub struct Cli {
    /// Reduced Planck constant for commands that build objects from scratch.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Tolerance for boolean verdicts.
    #[arg(long, global = true, env = "SYMPLECTA_TOL")]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Payload arguments accept a file path, `-` for standard input, or inline
/// JSON starting with `{` or `[`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// ħ-polar dual of a body.
    Dual {
        #[arg(long)]
        body: String,
    },
    /// Support function h_X(u).
    Support {
        #[arg(long)]
        body: String,
        /// Direction as a JSON array.
        #[arg(long)]
        direction: String,
    },
    /// Inclusion test inner ⊆ outer with a witness direction on failure.
    Contains {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
    },
    /// Quantum polar pair test X^ħ ⊆ P; exit 2 when it fails.
    PairCheck {
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: String,
    },
    /// Mahler volume with the Santaló and Mahler bounds.
    Mahler {
        #[arg(long)]
        body: String,
    },
    /// Symplecticity residual of a matrix.
    SymplecticCheck {
        #[arg(long)]
        matrix: String,
    },
    /// Inverse of a symplectic matrix.
    Inverse {
        #[arg(long)]
        matrix: String,
    },
    /// Factorization S = V_{−P} M_L R.
    PreIwasawa {
        #[arg(long)]
        matrix: String,
    },
    /// Williamson normal form and symplectic spectrum of an SPD matrix.
    Williamson {
        #[arg(long)]
        matrix: String,
    },
    /// Seeded random symplectic matrix.
    RandomSymplectic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },
    /// Quantum blob from a symplectic matrix, or normal form of a given blob.
    Blob {
        #[arg(long, conflicts_with = "blob", required_unless_present = "blob")]
        matrix: Option<String>,
        #[arg(long)]
        blob: Option<String>,
    },
    /// Position and momentum projections of a blob.
    BlobProject {
        #[arg(long)]
        blob: String,
    },
    /// John ellipsoid of X × P, or a rescaled blob inside it.
    John {
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: String,
        /// `ab`, or a scale λ in [1, λ_max]; needs ellipsoid factors.
        #[arg(long)]
        rescale: Option<String>,
    },
    /// Blob ↔ Gaussian state correspondence.
    Gamma {
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        blob: Option<String>,
        #[arg(long)]
        state: Option<String>,
    },
    /// Wigner matrix, covariance, marginals and quantum condition.
    StateCheck {
        #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
        state: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Elementary metaplectic operator applied to a Gaussian state.
    Metaplectic {
        #[arg(long)]
        state: String,
        #[arg(long)]
        generator: String,
    },
    /// Robertson–Schrödinger margins.
    RsCheck {
        #[arg(long)]
        sigma: String,
    },
    /// Pure covariance matrices with prescribed marginal variances (n = 1).
    Pauli {
        #[arg(long)]
        sxx: f64,
        #[arg(long)]
        spp: f64,
    },
    /// Capacity of a phase-space ellipsoid or a planar polygon.
    Capacity {
        #[arg(long, conflicts_with = "polygon", required_unless_present = "polygon")]
        ellipsoid: Option<String>,
        /// Planar vertices as a JSON array of [x, p] pairs.
        #[arg(long)]
        polygon: Option<String>,
        /// Use the planar-area formula for a 2-dimensional ellipsoid.
        #[arg(long, requires = "ellipsoid")]
        planar: bool,
    },
    /// Hofer–Zehnder capacity of X × P for a quantum polar pair.
    HzPair {
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: String,
    },
    /// Area of the projection of S(B²ⁿ(R)) on the plane (x_j, p_j).
    GromovCheck {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// 1-based plane index.
        #[arg(long, default_value_t = 1)]
        plane: usize,
    },
    /// Donoho–Stark bound, from given ε values or measured on a function.
    DsCheck {
        #[arg(long, conflicts_with_all = ["eps_x", "eps_p"])]
        function: Option<String>,
        #[arg(long, required_unless_present = "function")]
        eps_x: Option<f64>,
        #[arg(long, required_unless_present = "function")]
        eps_p: Option<f64>,
        /// Half-widths of C_X as a JSON array (or a number).
        #[arg(long)]
        cx: String,
        /// Half-widths of C_P as a JSON array (or a number).
        #[arg(long)]
        cp: String,
    },
    /// Concentration bound for quantum polar pairs.
    PolarBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps_x: f64,
        #[arg(long)]
        eps_p: f64,
    },
    /// ħ-Fourier transform of a sampled function.
    Fourier {
        #[arg(long)]
        function: String,
    },
    /// Concentration ε of a sampled function on [−a, a].
    Concentration {
        #[arg(long)]
        function: String,
        #[arg(long)]
        a: f64,
    },
    /// Hardy regime of the decay pair (A, B) and its polar-pair counterpart.
    HardyCheck {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run a property suite over a range of seeds.
    Sweep {
        #[arg(long, value_enum)]
        suite: sweep::Suite,
        /// `a..b` (inclusive), `a..=b`, a single seed, or a comma list; empty for none.
        #[arg(long, default_value = "0..99")]
        seeds: String,
    },
}

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub hbar: f64,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_domain() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let message = self.to_string();
        let body = match self {
            CliError::Input(_) => json!({"kind": "malformed_input", "message": message}),
            CliError::Core(e) => {
                let mut v = json!({"kind": error_kind(e), "message": message});
                let extra = match e {
                    Error::NotQuantumPair { lambda_max, witness } => {
                        json!({"lambda_max": lambda_max, "witness": witness})
                    }
                    Error::ScaleOutOfRange { lambda, lambda_max } => {
                        json!({"lambda": lambda, "lambda_max": lambda_max})
                    }
                    Error::NoQuantumSolution { product } => json!({"product": product}),
                    Error::NotSymplectic { residual } => json!({"residual": residual}),
                    Error::NotPositiveDefinite { min_eigenvalue } => json!({"min_eigenvalue": min_eigenvalue}),
                    Error::Convergence { iterations, gap } => json!({"iterations": iterations, "gap": gap}),
                    _ => json!({}),
                };
                if let (Some(dst), Value::Object(src)) = (v.as_object_mut(), extra) {
                    dst.extend(src);
                }
                v
            }
        };
        json!({ "error": body })
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension",
        Error::NotSymplectic { .. } => "not_symplectic",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Degenerate(_) => "degenerate",
        Error::NotQuantumPair { .. } => "not_quantum_pair",
        Error::ScaleOutOfRange { .. } => "scale_out_of_range",
        Error::NoQuantumSolution { .. } => "no_quantum_solution",
        Error::InsufficientGrid(_) => "insufficient_grid",
        Error::Convergence { .. } => "convergence",
        Error::Internal(_) => "internal",
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Command output before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Csv(String),
}

impl Output {
    fn render(&self) -> CliResult<String> {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(v)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Input(format!("cannot encode result: {e}"))),
            Output::Csv(s) => Ok(s.clone()),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Reads a payload argument: inline JSON, `-` for standard input, or a path.
pub fn load<T: DeserializeOwned>(arg: &str) -> CliResult<T> {
    let text = match arg.trim_start().chars().next() {
        Some('{') | Some('[') => arg.to_string(),
        _ if arg == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            s
        }
        _ => std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON in {arg}: {e}")))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let failure = |err: CliError| Outcome {
        code: err.exit_code(),
        stdout: serde_json::to_string_pretty(&err.to_json()).unwrap_or_default() + "\n",
        stderr: format!("error: {err}\n"),
    };
    let ctx = match context(&cli) {
        Ok(ctx) => ctx,
        Err(e) => return failure(e),
    };
    let text = match commands::dispatch(&cli.command, &ctx).and_then(|o| o.render()) {
        Ok(text) => text,
        Err(e) => return failure(e),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code: 0,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => failure(CliError::Input(format!("cannot write {}: {e}", path.display()))),
        },
        None => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn context(cli: &Cli) -> CliResult<Context> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CliError::Input(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    if !(cli.hbar > 0.0) || !cli.hbar.is_finite() {
        return Err(CliError::Input(format!(
            "hbar must be positive and finite, got {}",
            cli.hbar
        )));
    }
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(CliError::Input("CSV output is only available for sweep".into()));
    }
    Ok(Context {
        hbar: cli.hbar,
        tol,
        seed: cli.seed,
        format: cli.format,
    })
}
