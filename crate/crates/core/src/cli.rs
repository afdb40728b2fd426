//! Batch front end: reads a JSON problem file, runs its tasks in order against
//! one model space, and writes a JSON (or plain text) report.
//!
//! Exit codes: `0` when every task succeeded, `1` when a numerical check
//! failed (the report names the first failing residual), `2` when the input
//! was rejected (malformed file, invalid parameters, operators outside the
//! domain of a task).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::BlaschkeProduct;
use crate::crofoot_clark::{
    clark_data, classify_unitary, crofoot, crofoot_intertwine_check, crofoot_shift_residual,
    invertibility_criterion, UnitaryClass,
};
use crate::error::TtoError;
use crate::json::{chop_matrix, matrix_rows, pair, round15};
use crate::linalg::CMatrix;
use crate::model_space::{ModelSpace, SpaceConfig, Tolerances};
use crate::poly::Poly;
use crate::symbol::SymbolExpr;
use crate::tto::{build_tto, extract_symbol, is_tto, kernel_shift_identities_check};
use crate::type_algebra::{classify, rank_one_boundary, rank_one_interior};
use crate::verify::verify_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(name = "ttolab", version, about = "Truncated Toeplitz operators on finite-dimensional model spaces")]
pub struct Args {
    /// problem file (JSON); `-` reads standard input
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// multiplies every tolerance
    #[arg(long)]
    pub tol_scale: Option<f64>,
    /// fixed quadrature grid size instead of adaptive refinement
    #[arg(long)]
    pub quad_points: Option<usize>,
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub u: BlaschkeProduct,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Task {
    #[serde(rename = "classify")]
    Classify {
        #[serde(with = "crate::json::matrix")]
        matrix: CMatrix,
    },
    #[serde(rename = "is_tto")]
    IsTto {
        #[serde(with = "crate::json::matrix")]
        matrix: CMatrix,
    },
    #[serde(rename = "build")]
    Build { symbol: SymbolExpr },
    #[serde(rename = "extract")]
    Extract {
        #[serde(with = "crate::json::matrix")]
        matrix: CMatrix,
    },
    #[serde(rename = "clark")]
    Clark {
        #[serde(with = "crate::json::complex")]
        alpha: Complex64,
    },
    #[serde(rename = "crofoot")]
    Crofoot {
        #[serde(with = "crate::json::complex")]
        alpha: Complex64,
        /// analytic polynomial for the intertwining check, ascending coefficients; defaults to `z`
        #[serde(default)]
        phi: Option<Poly>,
    },
    #[serde(rename = "kernel_identities")]
    KernelIdentities {
        #[serde(with = "crate::json::complex")]
        lambda: Complex64,
    },
    #[serde(rename = "rank_one")]
    RankOne {
        #[serde(with = "crate::json::complex")]
        lambda: Complex64,
    },
    #[serde(rename = "invertibility")]
    Invertibility {
        phi: Poly,
        #[serde(with = "crate::json::complex")]
        alpha: Complex64,
    },
    #[serde(rename = "unitary")]
    Unitary {
        #[serde(with = "crate::json::matrix")]
        matrix: CMatrix,
    },
    #[serde(rename = "verify-all")]
    VerifyAll {
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        trials: Option<usize>,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Classify { .. } => "classify",
            Task::IsTto { .. } => "is_tto",
            Task::Build { .. } => "build",
            Task::Extract { .. } => "extract",
            Task::Clark { .. } => "clark",
            Task::Crofoot { .. } => "crofoot",
            Task::KernelIdentities { .. } => "kernel_identities",
            Task::RankOne { .. } => "rank_one",
            Task::Invertibility { .. } => "invertibility",
            Task::Unitary { .. } => "unitary",
            Task::VerifyAll { .. } => "verify-all",
        }
    }
}

/// Options that come from the command line rather than the problem file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub trials: usize,
    pub tol_scale: Option<f64>,
    pub quad_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskReport {
    pub kind: &'static str,
    pub status: Status,
    pub result: Value,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstFailure {
    pub task: usize,
    pub check: String,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub dimension: usize,
    pub quad_points: usize,
    pub seed: u64,
    pub exit_code: i32,
    pub first_failure: Option<FirstFailure>,
    pub tasks: Vec<TaskReport>,
}

/// A task's failure, split by whose fault it is.
enum TaskError {
    Numerical { check: String, residual: f64 },
    Rejected(String),
}

impl From<TtoError> for TaskError {
    fn from(e: TtoError) -> Self {
        match e {
            TtoError::NumericalFailure { check, residual } => TaskError::Numerical { check, residual },
            other => TaskError::Rejected(other.to_string()),
        }
    }
}

fn assert_below(check: &str, residual: f64, bound: f64) -> Result<(), TaskError> {
    if residual <= bound {
        Ok(())
    } else {
        Err(TaskError::Numerical {
            check: check.to_string(),
            residual,
        })
    }
}

fn mat(m: &CMatrix) -> Value {
    json!(matrix_rows(&chop_matrix(m)))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn run_task(space: &ModelSpace, task: &Task, opts: &RunOptions) -> Result<Value, TaskError> {
    match task {
        Task::Classify { matrix } => Ok(to_value(&classify(space, matrix)?)),
        Task::IsTto { matrix } => {
            let m = is_tto(space, matrix)?;
            Ok(json!({
                "is_tto": m.is_tto,
                "residual": round15(m.decomposition.residual),
                "tolerance": m.tolerance,
            }))
        }
        Task::Build { symbol } => Ok(json!({ "matrix": mat(&build_tto(space, symbol)?) })),
        Task::Extract { matrix } => Ok(json!({ "symbol": to_value(&extract_symbol(space, matrix)?) })),
        Task::Clark { alpha } => Ok(to_value(&clark_data(space, *alpha)?)),
        Task::Crofoot { alpha, phi } => {
            let ct = crofoot(space, *alpha)?;
            let phi = phi.clone().unwrap_or_else(|| Poly::monomial(1));
            let shift = crofoot_shift_residual(&ct)?;
            let inter = crofoot_intertwine_check(&ct, &phi)?;
            assert_below("crofoot unitarity", ct.unitarity_residual(), 1e-9)?;
            assert_below("crofoot shift intertwining", shift, 1e-8)?;
            assert_below("crofoot intertwining", inter.analytic.max(inter.coanalytic), 1e-8)?;
            assert_below("crofoot norm equality", inter.norm_gap, 1e-9)?;
            Ok(json!({
                "u_alpha": to_value(ct.source().u()),
                "matrix": mat(ct.matrix()),
                "unitarity": round15(ct.unitarity_residual()),
                "shift_intertwining": round15(shift),
                "intertwining": {
                    "analytic": round15(inter.analytic),
                    "coanalytic": round15(inter.coanalytic),
                    "norm_gap": round15(inter.norm_gap),
                },
            }))
        }
        Task::KernelIdentities { lambda } => {
            let r = kernel_shift_identities_check(space, *lambda)?;
            let scale = space.kernel(*lambda)?.norm().max(1.0);
            assert_below("kernel identities", r.max_residual() / scale, 1e-9)?;
            let opt = |x: Option<f64>| x.map(round15);
            Ok(json!({
                "adjoint_shift_kernel": round15(r.adjoint_shift_kernel),
                "shift_conjugate_kernel": round15(r.shift_conjugate_kernel),
                "shift_kernel": opt(r.shift_kernel),
                "adjoint_shift_conjugate_kernel": opt(r.adjoint_shift_conjugate_kernel),
            }))
        }
        Task::RankOne { lambda } => {
            let boundary = (lambda.norm() - 1.0).abs() <= 1e-12;
            let r = if boundary {
                rank_one_boundary(space, *lambda)?
            } else {
                rank_one_interior(space, *lambda)?
            };
            Ok(json!({
                "boundary": boundary,
                "matrix": mat(&r.matrix),
                "classification": to_value(&classify(space, &r.matrix)?),
                "expected_type": pair(r.expected_type),
                "symbol_residual": round15(r.symbol_residual),
                "type_residual": round15(r.type_residual),
            }))
        }
        Task::Invertibility { phi, alpha } => {
            let r = invertibility_criterion(space, phi, *alpha)?;
            if r.invertible != (r.sigma_min > r.threshold) {
                return Err(TaskError::Numerical {
                    check: "invertibility criterion against smallest singular value".into(),
                    residual: r.sigma_min,
                });
            }
            Ok(json!({
                "invertible": r.invertible,
                "min_abs": round15(r.min_abs),
                "threshold": round15(r.threshold),
                "sigma_min": round15(r.sigma_min),
            }))
        }
        Task::Unitary { matrix } => Ok(match classify_unitary(space, matrix)? {
            UnitaryClass::NotUnitary => json!({ "unitary": false }),
            UnitaryClass::Unitary { alpha, values, .. } => json!({
                "unitary": true,
                "classification": to_value(&classify(space, matrix)?),
                "alpha": alpha.map(pair),
                "values": values.iter().map(|&v| pair(v)).collect::<Vec<_>>(),
            }),
        }),
        Task::VerifyAll { seed, trials } => {
            let r = verify_suite(space, seed.unwrap_or(opts.seed), trials.unwrap_or(opts.trials));
            if let Some(f) = r.first_failure() {
                return Err(TaskError::Numerical {
                    check: f.key.to_string(),
                    residual: f.max_residual,
                });
            }
            Ok(to_value(&r))
        }
    }
}

/// Builds the space and runs every task. Errors only for problems that
/// prevent any task from running.
pub fn run_problem(problem: &ProblemFile, opts: &RunOptions) -> Result<Report, TtoError> {
    let mut tol = problem.tolerances.unwrap_or_default();
    if let Some(f) = opts.tol_scale {
        if !(f.is_finite() && f > 0.0) {
            return Err(TtoError::InvalidArgument(format!("tolerance scale must be positive, got {f}")));
        }
        tol = tol.scaled(f);
    }
    let space = ModelSpace::with_config(
        problem.u.clone(),
        SpaceConfig {
            quad_points: opts.quad_points,
            tolerances: tol,
        },
    )?;
    let mut tasks = Vec::with_capacity(problem.tasks.len());
    let mut first_failure = None;
    let mut exit_code = EXIT_OK;
    for (i, task) in problem.tasks.iter().enumerate() {
        let entry = match run_task(&space, task, opts) {
            Ok(result) => TaskReport {
                kind: task.kind(),
                status: Status::Ok,
                result,
                error: None,
            },
            Err(TaskError::Numerical { check, residual }) => {
                if first_failure.is_none() {
                    first_failure = Some(FirstFailure {
                        task: i,
                        check: check.clone(),
                        residual: residual.is_finite().then(|| round15(residual)),
                    });
                }
                exit_code = exit_code.max(EXIT_NUMERICAL);
                TaskReport {
                    kind: task.kind(),
                    status: Status::Failed,
                    result: Value::Null,
                    error: Some(format!("{check}: residual {residual:e}")),
                }
            }
            Err(TaskError::Rejected(msg)) => {
                exit_code = EXIT_SCHEMA;
                TaskReport {
                    kind: task.kind(),
                    status: Status::Rejected,
                    result: Value::Null,
                    error: Some(msg),
                }
            }
        };
        tasks.push(entry);
    }
    Ok(Report {
        dimension: space.dim(),
        quad_points: space.quad_points(),
        seed: opts.seed,
        exit_code,
        first_failure,
        tasks,
    })
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dimension {}  quad_points {}  seed {}  exit {}",
        report.dimension, report.quad_points, report.seed, report.exit_code
    );
    for (i, t) in report.tasks.iter().enumerate() {
        let status = match t.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
            Status::Rejected => "REJECTED",
        };
        let _ = write!(out, "[{i}] {:<18} {status}", t.kind);
        if let Some(e) = &t.error {
            let _ = write!(out, "  {e}");
        }
        out.push('\n');
        if t.kind == "verify-all" {
            if let Some(checks) = t.result.get("checks").and_then(Value::as_array) {
                for c in checks {
                    let _ = writeln!(
                        out,
                        "      {:<30} {:>6} trials  max {:>10}  bound {}",
                        c["key"].as_str().unwrap_or(""),
                        c["trials"],
                        c["max_residual"],
                        c["bound"]
                    );
                }
            }
        } else if t.status == Status::Ok {
            let _ = writeln!(out, "      {}", t.result);
        }
    }
    if let Some(f) = &report.first_failure {
        let _ = writeln!(out, "first failure: task {} {} residual {:?}", f.task, f.check, f.residual);
    }
    out
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(msg: String) -> Self {
        Outcome {
            code: EXIT_SCHEMA,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

/// Parses and runs according to `args`.
pub fn execute(args: &Args) -> Outcome {
    let raw = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map(|_| s)
    } else {
        std::fs::read_to_string(&args.input)
    };
    let raw = match raw {
        Ok(r) => r,
        Err(e) => return Outcome::error(format!("cannot read {}: {e}\n", args.input.display())),
    };
    let problem: ProblemFile = match serde_json::from_str(&raw) {
        Ok(p) => p,
        Err(e) => return Outcome::error(format!("schema error: {e}\n")),
    };
    let opts = RunOptions {
        seed: args.seed,
        trials: args.trials,
        tol_scale: args.tol_scale,
        quad_points: args.quad_points,
    };
    let report = match run_problem(&problem, &opts) {
        Ok(r) => r,
        Err(e) => return Outcome::error(format!("invalid problem: {e}\n")),
    };
    let rendered = if args.text {
        render_text(&report)
    } else {
        let mut s = serde_json::to_string_pretty(&report).unwrap_or_default();
        s.push('\n');
        s
    };
    let stderr = match &report.first_failure {
        Some(f) => format!("first failure: task {} {} residual {:?}\n", f.task, f.check, f.residual),
        None => String::new(),
    };
    let stdout = match &problem.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                return Outcome::error(format!("cannot write {}: {e}\n", path.display()));
            }
            String::new()
        }
        None => rendered,
    };
    Outcome {
        code: report.exit_code,
        stdout,
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Report {
        let p: ProblemFile = serde_json::from_str(src).unwrap();
        run_problem(&p, &RunOptions { seed: 0, trials: 5, ..Default::default() }).unwrap()
    }

    #[test]
    fn classify_task() {
        let r = run(r#"{"u":{"zeros":[[0,0],[0,0]]},"tasks":[{"kind":"classify","matrix":[[[0,0],[2,0]],[[1,0],[0,0]]]}]}"#);
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.tasks[0].result["type"], "alpha");
        assert_eq!(r.tasks[0].result["value"], json!([2.0, 0.0]));
    }

    #[test]
    fn clark_task() {
        let r = run(r#"{"u":{"zeros":[[0,0],[0,0]]},"tasks":[{"kind":"clark","alpha":[1,0]}]}"#);
        assert_eq!(r.tasks[0].result["weights"], json!([0.5, 0.5]));
        assert_eq!(r.tasks[0].result["points"], json!([[1.0, 0.0], [-1.0, 0.0]]));
    }

    #[test]
    fn rejected_tasks_exit_two() {
        let r = run(r#"{"u":{"zeros":[[0,0],[0,0]]},"tasks":[{"kind":"classify","matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}]}"#);
        assert_eq!(r.exit_code, EXIT_SCHEMA);
        assert_eq!(r.tasks[0].status, Status::Rejected);
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let bad = r#"{"u":{"zeros":[]},"tasks":[{"kind":"classify","matrix":[],"extra":1}]}"#;
        assert!(serde_json::from_str::<ProblemFile>(bad).is_err());
        let bad = r#"{"u":{"zeros":[]},"tasks":[{"kind":"frobnicate"}]}"#;
        assert!(serde_json::from_str::<ProblemFile>(bad).is_err());
    }
}
