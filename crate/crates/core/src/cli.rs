//! Command-line front end. Every command returns its exit code and the text
//! destined for stdout and stderr, so it can be driven from tests.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{ExtendedComplex, C64, ZERO};
use crate::elliptic::{half_periods, WeierstrassInvariants};
use crate::equations::{classify, CanonicalForm, CanonicalKind, ClassifyError, SchwarzianEquation};
use crate::solution::{PreparedSolution, Solution, SolutionError};
use crate::solver::{generate_type1, solve, SolveOptions, SolverError};
use crate::verify::{residual_report, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "schwarzian", version, about = "Exact solutions of autonomous Schwarzian equations")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Number of generic sample points for residual checks.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Translation z0 (a number or [re, im]).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect the canonical kind of an equation.
    Classify { equation: String },
    /// Construct and certify a solution.
    Solve {
        equation: String,
        /// Kind I: use a = τᵢ closest to this value.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Kind V: phase β.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Residual report of a solution against an equation.
    Verify { equation: String, solution: String },
    /// Values and derivatives of a solution at points.
    Eval {
        solution: String,
        /// JSON list of points.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Half-periods and stationary values for invariants {"g2", "g3"}.
    Periods { invariants: String },
    /// Kind I coefficients and solution from τ, an index i and b.
    Generate {
        /// JSON list of four distinct τ.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Run the acceptance suite.
    Selftest,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        CliOutput { code, stdout: String::new(), stderr: stderr.into() }
    }
}

/// Equation input: raw coefficients or canonical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EquationDocument {
    Raw {
        p: u32,
        numerator: Vec<C64>,
        denominator: Vec<C64>,
    },
    Canonical {
        kind: CanonicalKind,
        c: C64,
        #[serde(default)]
        sigma: Vec<ExtendedComplex>,
        #[serde(default)]
        tau: Vec<C64>,
        #[serde(default)]
        p: Option<u32>,
    },
}

impl EquationDocument {
    pub fn to_equation(&self) -> Result<SchwarzianEquation, String> {
        match self {
            EquationDocument::Raw { p, numerator, denominator } => {
                SchwarzianEquation::from_coefficients(*p, numerator.clone(), denominator.clone())
                    .map_err(|e| e.to_string())
            }
            EquationDocument::Canonical { kind, c, sigma, tau, p } => {
                let p = p.or(kind.exponent()).unwrap_or(1);
                let mut sigma = sigma.clone();
                if *kind == CanonicalKind::I {
                    while sigma.len() < 4 {
                        sigma.push(ExtendedComplex::Infinity);
                    }
                }
                CanonicalForm { kind: *kind, p, c: *c, sigma, tau: tau.clone() }
                    .to_equation()
                    .map_err(|e| e.to_string())
            }
        }
    }

    pub fn from_equation(eq: &SchwarzianEquation) -> Self {
        EquationDocument::Raw {
            p: eq.p,
            numerator: eq.r.numerator().coefficients().to_vec(),
            denominator: eq.r.denominator().coefficients().to_vec(),
        }
    }
}

/// Inline JSON or a path to a JSON file.
fn read_json(arg: &str) -> Result<Value, String> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?
    };
    serde_json::from_str(&text)
        .map_err(|e| format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()))
}

fn parse_doc<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T, String> {
    serde_json::from_value(read_json(arg)?).map_err(|e| format!("invalid {what} document: {e}"))
}

fn complex_value(v: &Value) -> Option<C64> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| C64::new(x, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(C64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
    .filter(|z| z.re.is_finite() && z.im.is_finite())
}

/// A complex argument: a number or [re, im].
pub fn parse_complex(arg: &str) -> Result<C64, String> {
    let v: Value = serde_json::from_str(arg.trim()).map_err(|e| format!("{arg}: {e}"))?;
    complex_value(&v).ok_or_else(|| format!("{arg}: expected a number or [re, im]"))
}

fn parse_complex_list(arg: &str) -> Result<Vec<C64>, String> {
    match read_json(arg)? {
        Value::Array(items) => items
            .iter()
            .map(|v| complex_value(v).ok_or_else(|| format!("{v}: expected a number or [re, im]")))
            .collect(),
        v => Err(format!("{v}: expected a list of complex numbers")),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn verify_options(common: &CommonArgs) -> VerifyOptions {
    VerifyOptions {
        samples: common.samples,
        tolerance: common.tol,
        seed: common.seed,
        ..VerifyOptions::default()
    }
}

pub fn cmd_classify(equation: &str) -> CliOutput {
    let eq = match parse_doc::<EquationDocument>(equation, "equation").and_then(|d| d.to_equation()) {
        Ok(eq) => eq,
        Err(e) => return CliOutput::fail(2, e),
    };
    match classify(&eq) {
        Ok(form) => CliOutput::ok(to_json(&form)),
        Err(ClassifyError::NotCanonical(sig)) => {
            CliOutput::fail(1, format!("not canonical: {sig}\n{}", to_json(&sig)))
        }
        Err(e) => CliOutput::fail(2, e.to_string()),
    }
}

pub fn cmd_solve(equation: &str, common: &CommonArgs, a: Option<&str>, beta: Option<&str>) -> CliOutput {
    let parsed = (|| -> Result<_, String> {
        let eq = parse_doc::<EquationDocument>(equation, "equation")?.to_equation()?;
        let z0 = common.z0.as_deref().map(parse_complex).transpose()?.unwrap_or(ZERO);
        let a = a.map(parse_complex).transpose()?;
        let beta = beta.map(parse_complex).transpose()?.unwrap_or(ZERO);
        Ok((eq, z0, a, beta))
    })();
    let (eq, z0, a, beta) = match parsed {
        Ok(v) => v,
        Err(e) => return CliOutput::fail(2, e),
    };
    let opts = SolveOptions {
        z0,
        beta,
        a,
        certification: VerifyOptions {
            samples: common.samples.max(50),
            ..verify_options(common)
        },
    };
    match solve(&eq, &opts) {
        Ok(solved) => {
            log::info!(
                "certified {} at {} points, max relative residual {:.3e}",
                solved.solution.family_name(),
                solved.report.sample_count,
                solved.report.max_rel_residual
            );
            CliOutput::ok(to_json(&solved.solution))
        }
        Err(e) => {
            let code = match &e {
                SolverError::NoSolution { .. }
                | SolverError::Unresolved(_)
                | SolverError::NoTranscendental(_)
                | SolverError::DegenerateRelations
                | SolverError::NotCanonical(_) => 1,
                SolverError::InvalidArgument(_) => 2,
                SolverError::CertificationFailed(_)
                | SolverError::InternalConsistency(_)
                | SolverError::Solution(_) => 3,
            };
            let mut msg = e.to_string();
            match &e {
                SolverError::NoSolution { diagnostics, .. } => {
                    for d in diagnostics {
                        msg.push_str("\n  ");
                        msg.push_str(d);
                    }
                }
                SolverError::CertificationFailed(report) => {
                    msg.push('\n');
                    msg.push_str(&to_json(report));
                }
                _ => {}
            }
            CliOutput::fail(code, msg)
        }
    }
}

pub fn cmd_verify(equation: &str, solution: &str, common: &CommonArgs) -> CliOutput {
    let parsed = (|| -> Result<_, String> {
        let eq = parse_doc::<EquationDocument>(equation, "equation")?.to_equation()?;
        let sol = parse_doc::<Solution>(solution, "solution")?;
        Ok((eq, sol))
    })();
    let (eq, sol) = match parsed {
        Ok(v) => v,
        Err(e) => return CliOutput::fail(2, e),
    };
    if !sol.accepts_exponent(eq.p) {
        return CliOutput::fail(
            2,
            format!("a {} solution cannot satisfy an equation with p = {}", sol.family_name(), eq.p),
        );
    }
    let prepared = match PreparedSolution::new(sol) {
        Ok(p) => p,
        Err(e) => return CliOutput::fail(2, e.to_string()),
    };
    let report = residual_report(&prepared, &eq, &verify_options(common));
    if report.pass {
        CliOutput::ok(to_json(&report))
    } else {
        CliOutput {
            code: 1,
            stdout: to_json(&report),
            stderr: format!(
                "verification failed: max relative residual {:.3e} > {:.1e}",
                report.max_rel_residual, report.tolerance
            ),
        }
    }
}

pub fn cmd_eval(solution: &str, points: &str) -> CliOutput {
    let parsed = parse_doc::<Solution>(solution, "solution")
        .and_then(|s| PreparedSolution::new(s).map_err(|e| e.to_string()))
        .and_then(|p| Ok((p, parse_complex_list(points)?)));
    let (prepared, points) = match parsed {
        Ok(v) => v,
        Err(e) => return CliOutput::fail(2, e),
    };
    let rows: Vec<Value> = points
        .iter()
        .map(|&z| match prepared.jet(z) {
            Ok(jet) => {
                let [u, u1, u2, u3] = jet.derivatives();
                let critical = u1.norm() <= 1e-10 * u.norm().max(1.0);
                json!({ "z": z, "u": u, "u1": u1, "u2": u2, "u3": u3, "critical": critical })
            }
            Err(SolutionError::Pole { limit, .. }) => json!({ "z": z, "pole": true, "limit": limit }),
            Err(e) => json!({ "z": z, "error": e.to_string() }),
        })
        .collect();
    CliOutput::ok(to_json(&rows))
}

pub fn cmd_periods(invariants: &str) -> CliOutput {
    let inv = match parse_doc::<WeierstrassInvariants>(invariants, "invariants") {
        Ok(i) => i,
        Err(e) => return CliOutput::fail(2, e),
    };
    match half_periods(&inv) {
        Ok(data) => CliOutput::ok(to_json(&json!({
            "omega1": data.omega1,
            "omega2": data.omega2(),
            "omega3": data.omega3,
            "stationary_values": data.stationary_values,
            "discriminant": inv.discriminant(),
        }))),
        Err(e) => CliOutput::fail(2, e.to_string()),
    }
}

pub fn cmd_generate(tau: &str, i: usize, b: &str) -> CliOutput {
    let parsed = (|| -> Result<_, String> {
        let tau: [C64; 4] = parse_complex_list(tau)?
            .try_into()
            .map_err(|_| "expected four τ values".to_string())?;
        Ok((tau, parse_complex(b)?))
    })();
    let (tau, b) = match parsed {
        Ok(v) => v,
        Err(e) => return CliOutput::fail(2, e),
    };
    match generate_type1(tau, i, b) {
        Ok((coeffs, sol)) => {
            let eq = match coeffs.to_equation() {
                Ok(eq) => eq,
                Err(e) => return CliOutput::fail(3, e.to_string()),
            };
            CliOutput::ok(to_json(&json!({
                "r": coeffs.r,
                "tau": coeffs.tau,
                "equation": EquationDocument::from_equation(&eq),
                "solution": Solution::EllipticFractional(sol),
            })))
        }
        Err(SolverError::InternalConsistency(e)) => CliOutput::fail(3, e),
        Err(e) => CliOutput::fail(2, e.to_string()),
    }
}

pub fn cmd_selftest() -> CliOutput {
    let results = crate::acceptance::run_all();
    let pass = results.iter().all(|r| r.pass);
    let stdout = to_json(&results);
    CliOutput {
        code: if pass { 0 } else { 1 },
        stdout,
        stderr: if pass { String::new() } else { "self-test failed".into() },
    }
}

/// Parse arguments (including the program name) and run.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { CliOutput::ok(text) } else { CliOutput::fail(code, text) };
        }
    };
    let common = &cli.common;
    let mut out = match &cli.command {
        Command::Classify { equation } => cmd_classify(equation),
        Command::Solve { equation, a, beta } => cmd_solve(equation, common, a.as_deref(), beta.as_deref()),
        Command::Verify { equation, solution } => cmd_verify(equation, solution, common),
        Command::Eval { solution, points } => cmd_eval(solution, points),
        Command::Periods { invariants } => cmd_periods(invariants),
        Command::Generate { tau, i, b } => cmd_generate(tau, *i, b),
        Command::Selftest => cmd_selftest(),
    };
    if let Some(path) = &common.output {
        if out.code == 0 {
            if let Err(e) = fs::write(path, &out.stdout) {
                return CliOutput::fail(2, format!("{}: {e}", path.display()));
            }
            out.stdout.clear();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common() -> CommonArgs {
        CommonArgs { samples: 50, tol: 1e-6, seed: 42, z0: None, output: None }
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("2.5").unwrap(), C64::new(2.5, 0.0));
        assert_eq!(parse_complex("[1, -2]").unwrap(), C64::new(1.0, -2.0));
        assert!(parse_complex("[1]").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn classify_exit_codes() {
        let out = cmd_classify(r#"{"p":1,"numerator":[[5,0]],"denominator":[[1,0]]}"#);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let form: CanonicalForm = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(form.kind, CanonicalKind::VI);
        assert_eq!(form.c, C64::new(5.0, 0.0));
        let out = cmd_classify(r#"{"p":1,"numerator":[[1,0],[1,0]],"denominator":[[1,0]]}"#);
        assert_eq!(out.code, 1);
        assert!(out.stdout.is_empty());
        let out = cmd_classify(r#"{"p":1,"numerator":"#);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    }

    #[test]
    fn canonical_document_solves() {
        let doc = r#"{"kind":"V","c":[0.5,0],"sigma":[[0,1.4142135623730951],[0,-1.4142135623730951]],"tau":[[1,0],[-1,0]]}"#;
        let out = cmd_solve(doc, &common(), None, None);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let sol: Solution = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(sol.family_name(), "trig");
        let out = cmd_verify(doc, &out.stdout, &common());
        assert_eq!(out.code, 0, "{}", out.stderr);
    }

    #[test]
    fn solve_rejects_bad_sigma() {
        let doc = r#"{"kind":"II","c":[10584,0],"sigma":[[1,0],[2,0]],"tau":[[4,0],[-3,0],[0,0]]}"#;
        let out = cmd_solve(doc, &common(), None, None);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("sigma pattern inadmissible"));
        assert!(out.stdout.is_empty());
    }

    #[test]
    fn eval_jets() {
        let out = cmd_eval(r#"{"family":"exp","alpha":[1,0]}"#, "[0]");
        let rows: Vec<Value> = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(rows[0]["u3"], json!([1.0, 0.0]));
        let out = cmd_eval(r#"{"family":"trig","alpha":[1,0]}"#, "[[0,0]]");
        let rows: Vec<Value> = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(rows[0]["u1"], json!([1.0, 0.0]));
        assert_eq!(rows[0]["u3"], json!([-1.0, 0.0]));
        let ef = r#"{"family":"elliptic-fractional","a":[0,0],"b":[-1,0],"d":[1,0],"invariants":{"g2":[16,0],"g3":[0,0]}}"#;
        let out = cmd_eval(ef, "[0]");
        let rows: Vec<Value> = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(rows[0]["pole"], json!(true));
        assert_eq!(rows[0]["limit"], json!([0.0, 0.0]));
    }

    #[test]
    fn periods_of_square_lattice() {
        let out = cmd_periods(r#"{"g2":[4,0],"g3":[0,0]}"#);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        let w1 = v["omega1"][0].as_f64().unwrap();
        assert!((w1 - 1.311_028_777_146_06).abs() < 1e-12, "{w1}");
        assert_eq!(cmd_periods(r#"{"g2":[3,0],"g3":[1,0]}"#).code, 2);
    }

    #[test]
    fn run_dispatch_and_usage_errors() {
        let out = run(["schwarzian", "--bogus"]);
        assert_eq!(out.code, 2);
        let out = run(["schwarzian", "generate", "--tau", "[0,1,-1,[-0.3333333333333333,0]]", "--i", "1", "--b", "-1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["solution"]["family"], json!("elliptic-fractional"));
    }
}
