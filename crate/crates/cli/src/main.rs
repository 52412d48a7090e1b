//! `qd`: decide, construct and verify decompositions from the command line.
//!
//! Every command prints one JSON document on stdout. Exit status: 0 when the decision holds or
//! the check passes, 1 when it does not, 2 on any error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qd_core::algebra::FactorHint;
use qd_core::decompose::{construct_with_hint, decide, DecompKind};
use qd_core::infinite::{
    appendix_core_trend, core_report, graph_window_report, jordan_graph_involution_pair, jordan_graph_squarezero_pair,
    jordan_graph_unipotent_pair, named_operator, sparse_pattern_jordan_check, strict_ut_windowed_decomposition,
    windowed_kaplansky, ColumnFiniteOp, JordanGraph, PatternVerdict,
};
use qd_core::json::{
    canonical_to_json, hint_from_text, kaplansky_to_json, matrix_from_json_in, poly_from_text, poly_to_json,
    witness_from_json, witness_to_json,
};
use qd_core::kaplansky::kaplansky_invariants_with_hint;
use qd_core::oracle::{cross_check_kinds, Budget, DEFAULT_BUDGET, HARD_CAP};
use qd_core::{Error, Field, Mat};

#[derive(Parser)]
#[command(name = "qd", version, about = "Square-zero sums and quadratic products of linear operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sum2sz,
    Inv2,
    Unip2,
}

impl From<Kind> for DecompKind {
    fn from(k: Kind) -> DecompKind {
        match k {
            Kind::Sum2sz => DecompKind::SquareZeroSum,
            Kind::Inv2 => DecompKind::InvolutionProduct,
            Kind::Unip2 => DecompKind::Unipotent2Product,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Core,
    Jordan,
    Decompose,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the matrix has the requested decomposition.
    Decide {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Field to read the matrix over; must agree with the file's "field" when present.
        #[arg(long)]
        field: Option<String>,
        matrix: PathBuf,
    },
    /// Build a verified witness.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        field: Option<String>,
        /// Irreducible factors to use over Q, e.g. '[[1,0,1],[-1,1]]'.
        #[arg(long)]
        hint: Option<String>,
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recompute the identities of a witness against a matrix.
    Verify { witness: PathBuf, matrix: PathBuf },
    /// Kaplansky invariants at an irreducible polynomial.
    Invariants {
        /// Coefficients, lowest degree first.
        #[arg(long)]
        p: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        hint: Option<String>,
        matrix: PathBuf,
    },
    /// Invariant factors, elementary divisors and Frobenius form.
    Canonical {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        hint: Option<String>,
        matrix: PathBuf,
    },
    /// Compare the decision procedures with exhaustive enumeration.
    Oracle {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        /// Restrict to these kinds (default: all three).
        #[arg(long, value_enum)]
        kind: Vec<Kind>,
        /// Maximum number of matrices to enumerate.
        #[arg(long)]
        budget: Option<u64>,
        /// Needed for budgets above the default.
        #[arg(long)]
        allow_large: bool,
    },
    /// Windowed checks on a lazily presented operator.
    Infinite {
        /// appendix_M, shift, zero or graph.
        #[arg(long)]
        op: String,
        /// Jordan graph spec for `--op graph`: a file path or inline JSON.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 40)]
        window: usize,
        #[arg(long, value_enum)]
        check: Check,
        /// Restrict `--check decompose` to these kinds.
        #[arg(long, value_enum)]
        kind: Vec<Kind>,
    },
}

type Outcome = Result<(bool, Value), Error>;

fn read_text(path: &Path) -> Result<String, Error> {
    let mut s = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_field(s: Option<&str>) -> Result<Option<Field>, Error> {
    s.map(str::parse).transpose()
}

fn read_matrix(path: &Path, field: Option<&str>) -> Result<Mat, Error> {
    matrix_from_json_in(&read_json(path)?, parse_field(field)?)
}

fn hint(field: Field, s: Option<&str>) -> Result<FactorHint, Error> {
    s.map_or(Ok(FactorHint::none()), |s| hint_from_text(field, s))
}

fn kinds(ks: &[Kind]) -> Vec<DecompKind> {
    if ks.is_empty() {
        vec![DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product]
    } else {
        ks.iter().map(|&k| k.into()).collect()
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Decide { kind, field, matrix } => {
            let a = read_matrix(&matrix, field.as_deref())?;
            let kind = DecompKind::from(kind);
            let d = decide(kind, &a)?;
            Ok((
                d.holds,
                json!({
                    "kind": kind.short_name(),
                    "field": a.field().to_string(),
                    "n": a.rows(),
                    "holds": d.holds,
                    "reason": d.reason,
                    "offending": d.offending.iter().map(poly_to_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Cmd::Construct { kind, field, hint: h, matrix, output } => {
            let a = read_matrix(&matrix, field.as_deref())?;
            let kind = DecompKind::from(kind);
            match construct_with_hint(kind, &a, &hint(a.field(), h.as_deref())?) {
                Ok(w) => {
                    let v = witness_to_json(&w);
                    if let Some(out) = output {
                        let text = serde_json::to_string_pretty(&v).expect("serializable");
                        fs::write(&out, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
                    }
                    Ok((w.verified, v))
                }
                Err(Error::CriterionFails(reason)) => {
                    Ok((false, json!({"kind": kind.short_name(), "holds": false, "reason": reason})))
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Verify { witness, matrix } => {
            let w = witness_from_json(&read_json(&witness)?)?;
            let u = read_matrix(&matrix, None)?;
            let same_shape = w.first.field() == u.field()
                && w.first.is_square()
                && w.second.is_square()
                && w.first.rows() == u.rows()
                && w.second.rows() == u.rows();
            let first_ok = w.kind.is_factor(&w.first);
            let second_ok = w.kind.is_factor(&w.second);
            let combines = same_shape && w.kind.combine(&w.first, &w.second) == u;
            let ok = w.check(&u);
            Ok((
                ok,
                json!({
                    "kind": w.kind.short_name(),
                    "verified": ok,
                    "checks": {"shape": same_shape, "first": first_ok, "second": second_ok, "combines_to_matrix": combines},
                }),
            ))
        }
        Cmd::Invariants { p, field, hint: h, matrix } => {
            let a = read_matrix(&matrix, field.as_deref())?;
            let p = poly_from_text(a.field(), &p)?;
            let t = kaplansky_invariants_with_hint(&a, &p, &hint(a.field(), h.as_deref())?)?;
            let mut v = kaplansky_to_json(&t);
            v["field"] = json!(a.field().to_string());
            v["n"] = json!(a.rows());
            Ok((true, v))
        }
        Cmd::Canonical { field, hint: h, matrix } => {
            let a = read_matrix(&matrix, field.as_deref())?;
            Ok((true, canonical_to_json(&a, &hint(a.field(), h.as_deref())?)?))
        }
        Cmd::Oracle { field, n, kind, budget, allow_large } => {
            let field: Field = field.parse()?;
            let budget = match (budget, allow_large) {
                (Some(b), false) if b > DEFAULT_BUDGET => {
                    return Err(Error::Budget(format!("--budget {b} exceeds {DEFAULT_BUDGET}; pass --allow-large")))
                }
                (Some(b), false) => Budget { max_matrices: b },
                (None, false) => Budget::default(),
                (b, true) => Budget::with_override(b.unwrap_or(HARD_CAP)),
            };
            let r = cross_check_kinds(field, n, &kinds(&kind), budget)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["agrees"] = json!(r.agrees());
            Ok((r.agrees(), v))
        }
        Cmd::Infinite { op, graph, field, window, check, kind } => {
            let field: Field = field.parse()?;
            if op == "graph" {
                let spec = graph.ok_or_else(|| Error::Parse("--op graph needs --graph".into()))?;
                let text = if Path::new(&spec).is_file() { read_text(Path::new(&spec))? } else { spec };
                infinite_graph(&JordanGraph::from_json(field, &text)?, window, check, &kinds(&kind))
            } else {
                infinite_named(&op, &named_operator(&op, field)?, window, check, &kinds(&kind))
            }
        }
    }
}

fn verdict_json(v: &PatternVerdict) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn infinite_graph(g: &JordanGraph, n: usize, check: Check, ks: &[DecompKind]) -> Outcome {
    let head = json!({"op": "graph", "spec": g.spec(), "window": n});
    let (ok, body) = match check {
        Check::Core => {
            let r = core_report(g, n);
            let ok = r.stable && r.windowed_dim == r.symbolic_dim;
            (ok, json!({"core": r}))
        }
        Check::Jordan => {
            let v = sparse_pattern_jordan_check(&g.operator(), n);
            (matches!(v, PatternVerdict::Cells(_)), json!({"verdict": verdict_json(&v)}))
        }
        Check::Decompose => {
            let mut ok = true;
            let mut reports = serde_json::Map::new();
            for &k in ks {
                let pair = match k {
                    DecompKind::SquareZeroSum => jordan_graph_squarezero_pair(g),
                    DecompKind::InvolutionProduct => jordan_graph_involution_pair(g),
                    DecompKind::Unipotent2Product => jordan_graph_unipotent_pair(g),
                };
                let r = graph_window_report(&pair, n);
                ok &= r.all_pass();
                let mut v = serde_json::to_value(&r).expect("serializable");
                v["pass"] = json!(r.all_pass());
                reports.insert(k.short_name().to_string(), v);
            }
            (ok, json!({"reports": reports}))
        }
    };
    Ok((ok, merge(head, body, ok)))
}

fn infinite_named(name: &str, op: &ColumnFiniteOp, n: usize, check: Check, ks: &[DecompKind]) -> Outcome {
    let head = json!({"op": name, "field": op.field().to_string(), "window": n});
    let (ok, body) = match check {
        Check::Core => {
            let trend = appendix_core_trend(op, n, n.min(10), 8);
            let kap = windowed_kaplansky(op, n)?;
            let last = trend.last().cloned();
            (true, json!({"trend": trend, "last": last, "kaplansky": kap}))
        }
        Check::Jordan => {
            let v = sparse_pattern_jordan_check(op, n);
            (matches!(v, PatternVerdict::Cells(_)), json!({"verdict": verdict_json(&v)}))
        }
        Check::Decompose => {
            let mut ok = true;
            let mut out = serde_json::Map::new();
            for &k in ks {
                let v = match strict_ut_windowed_decomposition(op, n, k) {
                    Ok(w) => {
                        ok &= w.verified;
                        json!({"verified": w.verified, "witness": witness_to_json(&w)})
                    }
                    Err(Error::CriterionFails(reason)) => {
                        ok = false;
                        json!({"verified": false, "reason": reason})
                    }
                    Err(e) => return Err(e),
                };
                out.insert(k.short_name().to_string(), v);
            }
            (ok, json!({"windowed": out}))
        }
    };
    Ok((ok, merge(head, body, ok)))
}

fn merge(mut head: Value, body: Value, ok: bool) -> Value {
    if let (Some(h), Value::Object(b)) = (head.as_object_mut(), body) {
        h.extend(b);
        h.insert("pass".into(), json!(ok));
    }
    head
}

/// A closed pipe on stdout is not an error worth reporting.
fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&json!({"error": e.to_string().trim()}));
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok((ok, v)) => {
            emit(&v);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&json!({"error": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
