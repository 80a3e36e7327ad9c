use antiexact::parser::{parse_form, parse_scalar, print_form};
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiexact"))
        .args(args)
        .env_remove("ANTIEXACT_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

fn text<'a>(v: &'a Value, path: &str) -> &'a str {
    v.pointer(path).and_then(Value::as_str).unwrap_or_else(|| panic!("no string at {path}"))
}

/// Every printed form re-parses to a value that prints identically.
fn forms_round_trip(v: &Value, n: usize, paths: &[&str]) {
    for p in paths {
        let t = text(v, p);
        let back = parse_form(t, n).unwrap_or_else(|e| panic!("{p} = {t}: {e}"));
        assert_eq!(print_form(&back), t, "{p}");
    }
}

fn scalars_round_trip(v: &Value, n: usize, paths: &[&str]) {
    for p in paths {
        let t = text(v, p);
        let back = parse_scalar(t, n).unwrap_or_else(|e| panic!("{p} = {t}: {e}"));
        assert_eq!(back.to_text(n), t, "{p}");
    }
}

const FROBENIUS_FORMS: [&str; 7] = [
    "/frobenius/gamma",
    "/frobenius/eta",
    "/frobenius/sigma",
    "/frobenius/sigma_prime",
    "/frobenius/theta",
    "/frobenius/curvature",
    "/antiexact_part",
];

#[test]
fn exact_example() {
    let v = json(&["decompose", "--form", "x*dx", "--dim", "2", "--center", "0,0"]);
    assert_eq!(text(&v, "/classification"), "Exact");
    assert_eq!(parse_scalar(text(&v, "/potential"), 2).unwrap(), parse_scalar("x^2/2", 2).unwrap());
    assert_eq!(text(&v, "/antiexact_part"), "0*dx");
    assert!(v["frobenius"].is_null());
    assert_eq!(v["verification"]["passed"], true);
    forms_round_trip(&v, 2, &["/input/form", "/exact_part", "/antiexact_part"]);
    scalars_round_trip(&v, 2, &["/potential"]);
}

#[test]
fn integrating_factor_example() {
    let v = json(&["decompose", "--form", "x*dy - y*dx", "--dim", "2", "--center", "0,0", "--int-factor", "x"]);
    assert_eq!(text(&v, "/classification"), "General");
    assert_eq!(parse_form(text(&v, "/frobenius/sigma"), 2).unwrap(), parse_form("3*dx^dy", 2).unwrap());
    assert_eq!(
        parse_form(text(&v, "/frobenius/eta"), 2).unwrap(),
        parse_form("x^2*dy - x*y*dx", 2).unwrap()
    );
    assert_eq!(v["frobenius"]["gamma_choice"]["kind"], "integrating_factor");
    assert_eq!(v["frobenius"]["gamma_choice"]["value"], "x");
    forms_round_trip(&v, 2, &FROBENIUS_FORMS);
    scalars_round_trip(&v, 2, &["/potential", "/frobenius/g", "/frobenius/exp_g", "/frobenius/h"]);
}

#[test]
fn auto_gamma_example() {
    let v = json(&["decompose", "--form", "x*dx + y^2*dx", "--dim", "2", "--center", "0,0", "--auto-gamma"]);
    assert_eq!(text(&v, "/classification"), "GradientRecursive");
    assert_eq!(
        parse_scalar(text(&v, "/potential"), 2).unwrap(),
        parse_scalar("x^2/2 + x*y^2/3", 2).unwrap()
    );
    assert_eq!(v["frobenius"]["auto"], true);
    assert_eq!(
        parse_form(text(&v, "/frobenius/sigma"), 2).unwrap(),
        parse_form("0*dx^dy", 2).unwrap()
    );
    forms_round_trip(&v, 2, &FROBENIUS_FORMS);
    scalars_round_trip(&v, 2, &["/potential", "/frobenius/g", "/frobenius/exp_g", "/frobenius/h"]);
}

#[test]
fn force_input_with_metric() {
    let v = json(&["decompose", "--vector", "-y, x", "--dim", "2", "--metric", "diag(1, 1)"]);
    assert_eq!(text(&v, "/input/vector"), "(-y, x)");
    assert_eq!(parse_form(text(&v, "/input/form"), 2).unwrap(), parse_form("-y*dx + x*dy", 2).unwrap());
    assert!(v["vector_view"].is_object());
}

#[test]
fn physics_sign_negates_the_potential() {
    let args = ["decompose", "--form", "x*dx", "--dim", "1"];
    let plain = json(&args);
    let mut signed_args = args.to_vec();
    signed_args.push("--physics-sign");
    let signed = json(&signed_args);
    let f = parse_scalar(text(&plain, "/potential"), 1).unwrap();
    let minus_f = parse_scalar(text(&signed, "/potential"), 1).unwrap();
    assert_eq!(-&f, minus_f);
    assert_eq!(signed["physics_sign"], true);
    assert_eq!(plain["exact_part"], signed["exact_part"]);
}

#[test]
fn seed_comes_from_the_environment() {
    let base = ["classify", "--form", "x*dy", "--dim", "2", "--json"];
    let env = Command::new(env!("CARGO_BIN_EXE_antiexact"))
        .args(base)
        .env("ANTIEXACT_SEED", "0x2a")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let mut flagged = base.to_vec();
    flagged.extend(["--seed", "7"]);
    let f = Command::new(env!("CARGO_BIN_EXE_antiexact"))
        .args(&flagged)
        .env("ANTIEXACT_SEED", "0x2a")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&f.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn classify_verdicts() {
    let exact = json(&["classify", "--form", "x*dx", "--dim", "2"]);
    assert_eq!(exact["verdict"], "exact");
    let rotation = json(&["classify", "--form", "x*dy - y*dx", "--dim", "2"]);
    assert_eq!(rotation["verdict"], "integrable");
    assert_eq!(rotation["torsion_free_gamma"]["found"], true);
    let pfaff = json(&["classify", "--form", "z*dx + dy", "--dim", "3"]);
    assert_eq!(pfaff["verdict"], "non-integrable");
    assert!(pfaff["torsion_free_gamma"].is_null());
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["decompose", "--form", "x*dx +", "--dim", "2"][..],
        &["decompose", "--form", "dx^dy", "--dim", "2"],
        &["decompose", "--form", "w*dx", "--dim", "2"],
        &["decompose", "--form", "x*dx", "--dim", "9"],
        &["decompose", "--form", "x*dx", "--dim", "2", "--center", "0"],
        &["decompose", "--form", "x*dx", "--dim", "2", "--gamma", "dx", "--auto-gamma"],
        &["decompose", "--dim", "2"],
        &["verify", "--dims", "5..2"],
        &["classify", "--form", "x*dx", "--dim", "2", "--seed", "nope"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let out = run(&["decompose", "--form", "x*dx + (y", "--dim", "2"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("1:"), "{msg}");
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "--suite", "homotopy", "--dims", "2..4", "--trials", "20", "--samples", "4"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["dims"], serde_json::json!([2, 4]));
    let f = json(&["verify", "--suite", "frobenius", "--seed", "7", "--trials", "5", "--samples", "4"]);
    assert_eq!(f["passed"], true);
    assert_eq!(f["suites"][0]["suite"], "frobenius");
    assert_eq!(f["seed"], 7);
}

#[test]
fn text_output_and_schema_command() {
    let out = run(&["decompose", "--form", "x*dx", "--dim", "2"]);
    assert!(out.status.success());
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("classification  Exact"), "{s}");
    let schema = run(&["schema"]);
    let v: Value = serde_json::from_slice(&schema.stdout).unwrap();
    assert!(v["$defs"]["decompose"].is_object());
}

#[test]
fn failed_quadrature_exits_with_three() {
    let out = run(&["decompose", "--form", "(x^2+y^2)^(-1/4)*dx", "--dim", "2", "--center", "0,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quadrature"));
}
