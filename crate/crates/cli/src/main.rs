use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyfock_cli::expr::parse_operator;
use polyfock_cli::json::{
    exp_poly_from_str, exp_poly_to_string, real_matrix_to_json, spectrum_to_string, to_json, DecompositionJson,
    ExpPolyJson, FormatError, KernelJson, MatricesJson, PaperFloatJson, UnitJson,
};
use polyfock_cli::suites::{self, Params, DEFAULT_SEED};
use polyfock_core::decomp::{
    homogeneous_membership, membership_level, multi_true_decompose, poly_to_fock, quasi_membership,
    true_decompose, zbar_coefficients,
};
use polyfock_core::kernel::{kernel_factor_check, matches_laguerre, project_true, tensor_project, true_kernel};
use polyfock_core::matrix::{float_similarity_error, matrix_units, model_matrices, paper_matrices_float};
use polyfock_core::spectral::{restrict_to_fk, spectrum};
use polyfock_core::{Error, ExpPoly, FockColumn, Method, Rational};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "polyfock", version, about = "Exact poly-Fock decompositions, kernels, matrix models and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite (seeded by PFX_SEED).
    Verify {
        suite: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
    },
    /// Split a function into its true-level components.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Project a function onto a true level.
    Project {
        #[command(flatten)]
        target: ProjectTarget,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Membership of a function in a poly-Fock, homogeneous or quasi-homogeneous space.
    Membership {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with_all = ["homogeneous", "quasi"])]
        k: Option<u32>,
        #[arg(long, conflicts_with = "quasi")]
        homogeneous: Option<u32>,
        #[arg(long, requires_all = ["m", "kvec"])]
        quasi: bool,
        #[arg(long, value_delimiter = ',', requires = "quasi")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', requires = "quasi")]
        kvec: Vec<u32>,
    },
    /// Spectrum of an operator expression restricted to the k-poly-Fock space.
    Spectrum {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        op: String,
    },
    /// Reproducing kernel of a true level.
    Kernel {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        emit: bool,
    },
    /// Convert between Fock columns and poly-analytic functions.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
    },
    /// The exact matrix model at mark k.
    Matrices {
        #[arg(long)]
        k: u32,
        #[arg(long = "paper-float")]
        paper_float: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ProjectTarget {
    #[arg(long)]
    level: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    multilevel: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Kernel,
    Gram,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    FockToPoly,
    PolyToFock,
}

enum Failure {
    Usage(String),
    Checks(String),
    Breach(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantBreach(_) => Failure::Breach(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.0)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_function(path: &Path) -> Result<ExpPoly, Failure> {
    exp_poly_from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("PFX_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("PFX_SEED must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Serialize)]
struct MembershipJson {
    space: &'static str,
    k: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    m: Vec<usize>,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
}

fn execute(cmd: Command) -> Result<String, Failure> {
    Ok(match cmd {
        Command::Verify { suite, k, d, max_degree } => {
            let params = Params { k, d, max_degree, seed: seed()? };
            let report = suites::run(&suite, &params).map_err(|e| Failure::Usage(e.to_string()))?;
            let out = to_json(&report);
            if !report.breaches.is_empty() {
                print!("{out}");
                return Err(Failure::Breach(format!("invariant breach in {}", report.breaches.join(", "))));
            }
            if !report.passed {
                print!("{out}");
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
                return Err(Failure::Checks(format!("failed checks: {}", failed.join(", "))));
            }
            out
        }
        Command::Decompose { input, d } => {
            let f = read_function(&input)?;
            if let Some(d) = d.filter(|&d| d != f.dims()) {
                return Err(Failure::Usage(format!("--d {d} does not match the input dimension {}", f.dims())));
            }
            let dec = if f.dims() == 1 { true_decompose(&f)? } else { multi_true_decompose(&f)? };
            let report = DecompositionJson::new(&f, &dec)?;
            if !report.residual.terms.is_empty() {
                return Err(Failure::Breach("decomposition leaves a residual".into()));
            }
            to_json(&report)
        }
        Command::Project { target, input, method } => {
            let f = read_function(&input)?;
            let method = match method {
                MethodArg::Kernel => Method::Kernel,
                MethodArg::Gram => Method::Gram,
            };
            let out = match (target.level, target.multilevel) {
                (Some(k), _) => project_true(&f, k, method)?,
                (None, Some(ks)) => match method {
                    Method::Kernel => tensor_project(&f, &ks)?,
                    Method::Gram => {
                        if ks.len() != f.dims() {
                            return Err(Failure::Usage(format!("--multilevel needs {} entries", f.dims())));
                        }
                        multi_true_decompose(&f)?.get(&ks)
                    }
                },
                (None, None) => unreachable!("clap requires a target"),
            };
            exp_poly_to_string(&out)
        }
        Command::Membership { input, k, homogeneous, quasi, m, kvec } => {
            let f = read_function(&input)?;
            let report = if quasi {
                MembershipJson {
                    space: "quasi-homogeneous",
                    member: quasi_membership(&f, &m, &kvec)?,
                    k: kvec,
                    m,
                    level: None,
                }
            } else if let Some(k) = homogeneous {
                MembershipJson { space: "homogeneous", member: homogeneous_membership(&f, k)?, k: vec![k], m, level: None }
            } else {
                if f.dims() != 1 {
                    return Err(Failure::Usage("use --homogeneous or --quasi for several variables".into()));
                }
                let level = membership_level(&f)?;
                let k = k.unwrap_or(level);
                MembershipJson { space: "poly-fock", member: level <= k, k: vec![k], m, level: Some(level) }
            };
            to_json(&report)
        }
        Command::Spectrum { k, op } => {
            let x = parse_operator(&op, Some(&Rational::int(k))).map_err(|e| Failure::Usage(format!("--op: {e}")))?;
            spectrum_to_string(&spectrum(&restrict_to_fk(&x, k)?)?)
        }
        Command::Kernel { level, emit } => {
            let q = true_kernel(level)?;
            let factor = kernel_factor_check(level)?;
            let report = KernelJson::new(&q, &factor, matches_laguerre(level)?);
            if emit {
                to_json(&report)
            } else {
                let p: Vec<_> = factor.iter().enumerate().map(|(j, c)| format!("{c} lambda^{j}")).collect();
                format!("level {level}: {} terms, p = {}\n", q.terms().len(), p.join(" + "))
            }
        }
        Command::Convert { direction, input } => {
            let text = read(&input)?;
            match direction {
                Direction::FockToPoly => {
                    let col: Vec<ExpPolyJson> = serde_json::from_str(&text).map_err(FormatError::from)?;
                    let col = FockColumn(col.iter().map(ExpPolyJson::to_value).collect::<Result<_, _>>()?);
                    exp_poly_to_string(&col.to_function()?)
                }
                Direction::PolyToFock => {
                    let f = exp_poly_from_str(&text)?;
                    let col = poly_to_fock(&zbar_coefficients(&f)?)?;
                    to_json(&col.0.iter().map(ExpPolyJson::from_value).collect::<Vec<_>>())
                }
            }
        }
        Command::Matrices { k, paper_float } => {
            let m = model_matrices(k)?;
            let units = matrix_units(k)?
                .into_iter()
                .map(|((m, n), u)| UnitJson { m, n, expr: u.expr.to_string() })
                .collect();
            let paper_float = if paper_float {
                let (plus, zero, minus) = paper_matrices_float(k);
                Some(PaperFloatJson { plus, zero, minus, similarity_error: float_similarity_error(k)? })
            } else {
                None
            };
            to_json(&MatricesJson {
                k,
                plus: real_matrix_to_json(&m.plus)?,
                zero: real_matrix_to_json(&m.zero)?,
                minus: real_matrix_to_json(&m.minus)?,
                units,
                paper_float,
            })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Breach(msg)) => {
            eprintln!("internal invariant breach: {msg}");
            ExitCode::from(3)
        }
    }
}
