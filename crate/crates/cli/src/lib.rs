//! Command-line front end for `semihilbert`.
//!
//! Inputs are JSON files in the matrix schema (`--a`, `--t`), vectors as
//! `n x 1` matrices (`--x`, `--y`) and sets as `{"vectors": [...]}`
//! (`--set`). The space is complex if any input is complex.
//!
//! Exit codes: 0 when the analysis was computed, 1 for a negative verdict
//! of a yes/no query (`preserves`, `isometry`, `kset`, and `oracle` when a
//! sampled verifier disagrees with the closed form), 2 for input or
//! precondition errors, reported as `{"error": {"kind", "message"}}`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use semihilbert::io::{matrix_to_value, parse_matrix, parse_set, parse_vector};
use semihilbert::oracle::{
    defn_orthogonality_oracle, sampling_norm_oracle, sampling_preservation_oracle, RngSpec,
};
use semihilbert::{
    a_adjoint, a_eigenpairs, a_orthogonal, analyze_operator, analyze_positive, classify_cone_map,
    cone_membership, global_cone_membership, is_kset, isometry_classify, preserves_at,
    preserves_directionally_at, CMatrix, CVector, DenseMatrix, Direction, Error, Field,
    IsometryKind, PositiveOperator, Tolerances,
};

#[derive(Parser, Debug)]
#[command(name = "semihilbert", version, about = "Operator analysis on semi-Hilbert spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Relative threshold for equality decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_eq: f64,
    /// Relative threshold below which eigenvalues and singular values are zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_rank: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Spectral summary of A.
    Analyze {
        #[arg(long)]
        a: PathBuf,
    },
    /// The A-adjoint T# = A† T* A.
    Adjoint {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// A-norm, minimum A-norm and their attainment subspaces.
    Norm {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// A-eigenpairs of T#T.
    Eigen {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// Whether T preserves A-orthogonality at x (along α = e^{iθ} with --alpha).
    Preserves {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        x: PathBuf,
        /// Direction angle θ in [0, π), in radians.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Cone membership of y relative to x.
    Cones {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Whether T is a scalar multiple of an A-isometry.
    Isometry {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// Whether a set is a K_A-set, with a counterexample operator if not.
    Kset {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
    /// Sampled verifiers checked against the closed forms.
    Oracle {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

/// A finished run: exit code and the rendered report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A computed report and whether it carries a negative verdict.
struct Report {
    body: Map<String, Value>,
    negative: bool,
}

impl Report {
    fn new(body: Value, negative: bool) -> Self {
        let Value::Object(body) = body else {
            unreachable!("reports are JSON objects");
        };
        Report { body, negative }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = Tolerances::new(cli.opts.tol_rank, cli.opts.tol_eq)
        .map_err(CliError::from)
        .and_then(|tol| dispatch(&cli.command, tol).map(|r| (tol, r)));
    match result {
        Ok((tol, report)) => {
            let mut body = Map::new();
            body.insert("command".into(), json!(command_name(&cli.command)));
            body.insert("tolerances".into(), json!({"rank_rel": tol.rank_rel, "eq_rel": tol.eq_rel}));
            body.extend(report.body);
            Outcome {
                code: if report.negative { 1 } else { 0 },
                output: render(&Value::Object(body), cli.opts.format),
            }
        }
        Err(e) => {
            let body = json!({"error": {"kind": e.kind, "message": e.message}});
            Outcome {
                code: 2,
                output: render(&body, cli.opts.format),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Adjoint { .. } => "adjoint",
        Command::Norm { .. } => "norm",
        Command::Eigen { .. } => "eigen",
        Command::Preserves { .. } => "preserves",
        Command::Cones { .. } => "cones",
        Command::Isometry { .. } => "isometry",
        Command::Kset { .. } => "kset",
        Command::Oracle { .. } => "oracle",
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError {
        kind: "IoError".into(),
        message: format!("{}: {e}", path.display()),
    })
}

fn with_path<T>(path: &Path, r: semihilbert::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn load_matrix(path: &Path) -> CliResult<DenseMatrix> {
    with_path(path, parse_matrix(&read(path)?))
}

fn load_vector(path: &Path) -> CliResult<(Field, CVector)> {
    with_path(path, parse_vector(&read(path)?))
}

fn load_set(path: &Path) -> CliResult<(Field, Vec<CVector>)> {
    with_path(path, parse_set(&read(path)?))
}

/// Analyzes `A` over the join of its field and the other inputs' fields.
fn space(a: DenseMatrix, others: &[Field], tol: Tolerances) -> CliResult<PositiveOperator> {
    let field = others.iter().fold(a.field(), |f, &g| f.join(g));
    Ok(analyze_positive(&a.promote(field), tol)?)
}

fn matrix(m: &CMatrix, field: Field) -> Value {
    matrix_to_value(&DenseMatrix::new(field, m.clone()).expect("matrix lies in its space"))
}

fn direction(pos: &PositiveOperator, alpha: Option<f64>) -> CliResult<(Direction, Option<&'static str>)> {
    match (pos.field(), alpha) {
        (Field::Real, Some(_)) => Ok((Direction::ONE, Some("real space: α = 1"))),
        (_, None) => Ok((Direction::ONE, None)),
        (Field::Complex, Some(theta)) => Ok((Direction::from_angle(theta)?, None)),
    }
}

fn dispatch(command: &Command, tol: Tolerances) -> CliResult<Report> {
    match command {
        Command::Analyze { a } => {
            let pos = space(load_matrix(a)?, &[], tol)?;
            let f = pos.field();
            Ok(Report::new(
                json!({
                    "field": f,
                    "dim": pos.dim(),
                    "rank": pos.rank(),
                    "eigvals": pos.eigvals(),
                    "lambda_max": pos.lambda_max(),
                    "sqrt": matrix(pos.sqrt(), f),
                    "pinv": matrix(pos.pinv(), f),
                    "sqrt_pinv": matrix(pos.sqrt_pinv(), f),
                    "proj": matrix(pos.proj(), f),
                    "null_basis": matrix(pos.null_basis(), f),
                }),
                false,
            ))
        }
        Command::Adjoint { a, t } => {
            let t = load_matrix(t)?;
            let pos = space(load_matrix(a)?, &[t.field()], tol)?;
            let sharp = a_adjoint(&pos, t.data())?;
            Ok(Report::new(json!({"sharp": matrix(&sharp, pos.field())}), false))
        }
        Command::Norm { a, t } => {
            let t = load_matrix(t)?;
            let pos = space(load_matrix(a)?, &[t.field()], tol)?;
            let an = analyze_operator(&pos, t.data())?;
            let Some(att) = an.attainment else {
                return Err(Error::NotABounded.into());
            };
            let f = pos.field();
            let mut body = json!({
                "a_bounded": an.a_bounded,
                "adjointable": an.adjointable,
                "op_a_norm": an.op_a_norm,
                "min_a_norm": an.min_a_norm,
                "max_attain": matrix(&att.max_basis(), f),
                "min_attain": matrix(&att.min_basis(), f),
            });
            if !an.adjointable {
                body["note"] = json!("T is A-bounded but admits no A-adjoint");
            }
            Ok(Report::new(body, false))
        }
        Command::Eigen { a, t } => {
            let t = load_matrix(t)?;
            let pos = space(load_matrix(a)?, &[t.field()], tol)?;
            let pairs: Vec<Value> = a_eigenpairs(&pos, t.data())?
                .iter()
                .map(|p| json!({"value": p.value, "basis": matrix(&p.basis, pos.field())}))
                .collect();
            Ok(Report::new(json!({"eigenpairs": pairs}), false))
        }
        Command::Preserves { a, t, x, alpha } => {
            let t = load_matrix(t)?;
            let (xf, x) = load_vector(x)?;
            let pos = space(load_matrix(a)?, &[t.field(), xf], tol)?;
            let report = preserves_at(&pos, t.data(), &x)?;
            let mut body = json!({"report": report, "preserves": report.preserves});
            let mut negative = !report.preserves;
            if let Some(theta) = alpha {
                let (dir, note) = direction(&pos, Some(*theta))?;
                let directional = match pos.field() {
                    Field::Real => json!({"preserves": report.preserves, "note": note}),
                    Field::Complex => {
                        let holds = preserves_directionally_at(&pos, t.data(), &x, dir)?;
                        negative = !holds;
                        json!({
                            "angle": dir.angle(),
                            "preserves": holds,
                            "cone_map": classify_cone_map(&pos, t.data(), &x, dir)?,
                        })
                    }
                };
                body["directional"] = directional;
            }
            Ok(Report::new(body, negative))
        }
        Command::Cones { a, x, y, alpha } => {
            let (xf, x) = load_vector(x)?;
            let (yf, y) = load_vector(y)?;
            let pos = space(load_matrix(a)?, &[xf, yf], tol)?;
            let (dir, note) = direction(&pos, *alpha)?;
            let mut body = json!({
                "global": global_cone_membership(&pos, &x, &y)?,
                "directional": cone_membership(&pos, &x, &y, dir)?,
                "angle": dir.angle(),
                "a_orthogonal": a_orthogonal(&pos, &x, &y)?,
            });
            if let Some(note) = note {
                body["note"] = json!(note);
            }
            Ok(Report::new(body, false))
        }
        Command::Isometry { a, t } => {
            let t = load_matrix(t)?;
            let pos = space(load_matrix(a)?, &[t.field()], tol)?;
            let v = isometry_classify(&pos, t.data())?;
            let negative = v.kind == IsometryKind::NotIsometry;
            Ok(Report::new(json!({"verdict": v, "scalar_multiple": !negative}), negative))
        }
        Command::Kset { a, set } => {
            let (sf, d) = load_set(set)?;
            let pos = space(load_matrix(a)?, &[sf], tol)?;
            let report = is_kset(&pos, &d)?;
            let mut body = json!({"report": report, "is_kset": report.is_kset});
            if let Some(w) = &report.counterexample {
                body["witness"] = matrix(w, pos.field());
            }
            Ok(Report::new(body, !report.is_kset))
        }
        Command::Oracle { a, t, x, y, seed, samples } => {
            let t = t.as_deref().map(load_matrix).transpose()?;
            let x = x.as_deref().map(load_vector).transpose()?;
            let y = y.as_deref().map(load_vector).transpose()?;
            let fields: Vec<Field> = t
                .iter()
                .map(|m| m.field())
                .chain(x.iter().chain(y.iter()).map(|v| v.0))
                .collect();
            let pos = space(load_matrix(a)?, &fields, tol)?;
            oracle_report(&pos, t.as_ref(), x.map(|v| v.1), y.map(|v| v.1), *seed, *samples)
        }
    }
}

fn oracle_report(
    pos: &PositiveOperator,
    t: Option<&DenseMatrix>,
    x: Option<CVector>,
    y: Option<CVector>,
    seed: u64,
    samples: usize,
) -> CliResult<Report> {
    let spec = RngSpec::new(seed);
    let mut body = json!({"seed": seed, "samples": samples});
    let mut agree = true;
    if let Some(t) = t {
        let an = analyze_operator(pos, t.data())?;
        let (Some(hi), Some(lo)) = (an.op_a_norm, an.min_a_norm) else {
            return Err(if an.a_bounded { Error::ZeroRank } else { Error::NotABounded }.into());
        };
        let (lower_max, upper_min) =
            sampling_norm_oracle(pos, t.data(), samples, &mut spec.derive(0).rng())?;
        let slack = pos.tol().eq_rel * hi.max(1.0);
        let bracketed = lower_max <= hi + slack && upper_min >= lo - slack;
        agree &= bracketed;
        body["norm"] = json!({
            "lower_max": lower_max,
            "upper_min": upper_min,
            "op_a_norm": hi,
            "min_a_norm": lo,
            "bracketed": bracketed,
        });
        if let Some(x) = &x {
            let closed = preserves_at(pos, t.data(), x)?.preserves;
            let sampled =
                sampling_preservation_oracle(pos, t.data(), x, samples, &mut spec.derive(1).rng())?;
            agree &= closed == sampled;
            body["preservation"] = json!({"closed_form": closed, "sampled": sampled});
        }
    }
    if let (Some(x), Some(y)) = (&x, &y) {
        let closed = a_orthogonal(pos, x, y)?;
        let sampled = defn_orthogonality_oracle(pos, x, y, 201)?;
        agree &= closed == sampled;
        body["orthogonality"] = json!({"closed_form": closed, "sampled": sampled});
    }
    body["agree"] = json!(agree);
    Ok(Report::new(body, !agree))
}

/// JSON reports are pretty-printed; text reports list one field per line.
pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("reports encode as JSON");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text(v, 0, &mut out);
            out
        }
    }
}

fn is_matrix(m: &Map<String, Value>) -> bool {
    ["field", "rows", "cols", "data"].iter().all(|k| m.contains_key(*k)) && m.len() == 4
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().unwrap_or(f64::NAN);
            let im = pair[1].as_f64().unwrap_or(f64::NAN);
            if im < 0.0 {
                format!("{re}-{}i", -im)
            } else {
                format!("{re}+{im}i")
            }
        }
        other => other.to_string(),
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if is_matrix(m) => {
            let rows = m["rows"].as_u64().unwrap_or(0) as usize;
            let cols = m["cols"].as_u64().unwrap_or(0) as usize;
            let data = m["data"].as_array().cloned().unwrap_or_default();
            let _ = writeln!(out, "{pad}{} {rows}x{cols}", m["field"].as_str().unwrap_or(""));
            for r in 0..rows {
                let row: Vec<String> = (0..cols).map(|c| scalar_text(&data[r * cols + c])).collect();
                let _ = writeln!(out, "{pad}  [{}]", row.join(", "));
            }
        }
        Value::Object(m) => {
            for (k, val) in m {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_flat(val) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text(val, depth + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", flat(val));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}- [{i}]");
                text(item, depth + 1, out);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", flat(other));
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(flat).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
