use std::process::{Command, Output};

use schwarzian::acceptance::WORKED_EXAMPLES;
use schwarzian::cli::EquationDocument;
use schwarzian::equations::CanonicalForm;
use schwarzian::solution::Solution;
use schwarzian::verify::ResidualReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarzian")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_codes() {
    let o = run(&["classify", &WORKED_EXAMPLES[0].equation_json()]);
    assert_eq!(o.status.code(), Some(0));
    let form: CanonicalForm = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(form.tau.len(), 4);
    let o = run(&["classify", r#"{"p":1,"numerator":[[1,0],[1,0]],"denominator":[[1,0]]}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let o = run(&["classify", "{\"p\":1,\n\"numerator\":[[1,0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn solve_verify_pipeline_through_files() {
    let dir = std::env::temp_dir().join(format!("schwarzian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let eq_path = dir.join("eq.json");
    let sol_path = dir.join("sol.json");
    std::fs::write(&eq_path, WORKED_EXAMPLES[3].equation_json()).unwrap();
    let o = run(&["solve", eq_path.to_str().unwrap(), "--a", "-0.3333333333333333", "--output", sol_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let sol: Solution = serde_json::from_str(&std::fs::read_to_string(&sol_path).unwrap()).unwrap();
    assert_eq!(sol.family_name(), "elliptic-fractional");
    let o = run(&["verify", eq_path.to_str().unwrap(), sol_path.to_str().unwrap(), "--samples", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let report: ResidualReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.sample_count, 100);
    assert!(report.pass);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_mismatch_codes() {
    let ex1 = &WORKED_EXAMPLES[0];
    let ex2 = &WORKED_EXAMPLES[1];
    let o = run(&["verify", &ex1.equation_json(), &ex2.solution_json()]);
    assert_eq!(o.status.code(), Some(1));
    let report: ResidualReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!report.pass);
    // an exp solution against a p = 3 equation is fine; elliptic against p = 3 is not
    let cubic = r#"{"p":3,"numerator":[[1,0]],"denominator":[[1,0]]}"#;
    let o = run(&["verify", cubic, &ex1.solution_json()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_failure_codes() {
    let o = run(&["solve", r#"{"kind":"II","c":[10584,0],"sigma":[[1,0],[2,0]],"tau":[[4,0],[-3,0],[0,0]]}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let o = run(&["solve", r#"{"kind":"V","c":[0.5,0],"sigma":[[0,2],[0,-2]],"tau":[[1,0],[-1,0]]}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unresolved"));
    let o = run(&["solve", r#"{"kind":"II","c":[1,0]}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_output_roundtrips() {
    let o = run(&["generate", "--tau", "[[0,0],[1,0],[-1,0],[-0.3333333333333333,0]]", "--i", "2", "--b", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eq: EquationDocument = serde_json::from_value(v["equation"].clone()).unwrap();
    let sol: Solution = serde_json::from_value(v["solution"].clone()).unwrap();
    assert_eq!(serde_json::to_value(sol).unwrap(), v["solution"]);
    assert_eq!(serde_json::to_value(eq).unwrap(), v["equation"]);
    let r0 = &v["r"][0];
    assert!((r0[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn periods_and_eval() {
    let o = run(&["periods", r#"{"g2":[16,0],"g3":[0,0]}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stationary_values"].as_array().unwrap().len(), 3);
    let o = run(&["eval", r#"{"family":"exp","alpha":[1,0]}"#, "--points", "[0, [1,0]]"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["eval", r#"{"family":"nope"}"#, "--points", "[0]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest"]);
    let b = run(&["selftest"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
