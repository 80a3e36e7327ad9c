//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use antiexact::decompose::{decompose_form, GammaRequest};
use antiexact::forms::DifferentialForm;
use antiexact::frobenius::{integrability_test, torsion_split, CaseLabel, GammaChoice};
use antiexact::homotopy::homotopy;
use antiexact::parser::{parse_form, parse_scalar};
use antiexact::random::{random_form, random_polynomial, PolyShape};
use antiexact::suites::{frobenius_suite, homotopy_suite, SuiteConfig, SuiteReport};
use antiexact::verify::{check_identity, VerificationPolicy};
use antiexact::{rational, Chart, ScalarExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::{Command, ExitCode};
use std::time::Instant;

type Outcome = Result<String, String>;

fn form(text: &str) -> DifferentialForm {
    parse_form(text, 2).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

/// Center 0, box [0, 2]^2 with points closer than 0.1 to an axis rejected.
fn away_from_axes() -> (Chart, VerificationPolicy) {
    let chart = Chart::with_uniform_box(vec![rational(0, 1); 2], rational(0, 1), rational(2, 1)).unwrap();
    let policy = VerificationPolicy::default()
        .with_samples(32)
        .with_rel_tol(1e-9)
        .excluding_axes(0.1);
    (chart, policy)
}

fn example_one() -> Outcome {
    let chart = Chart::origin(2).map_err(|e| e.to_string())?;
    let r = decompose_form(&form("x*dx"), &chart, &GammaRequest::Fixed(GammaChoice::Zero), &VerificationPolicy::default())
        .map_err(|e| e.to_string())?;
    let half_x2 = parse_scalar("x^2/2", 2).unwrap();
    ensure(r.potential == half_x2, format!("f = {}", r.potential.to_text(2)))?;
    ensure(r.antiexact_part.is_zero(), "Omega is not zero")?;
    ensure(r.classification == CaseLabel::Exact, r.classification.as_str())?;
    ensure(r.passed(), "identity checks failed")?;
    Ok("f = x^2/2, Omega = 0, Exact".into())
}

fn example_two(factor: &str, sigma: &str, eta: &str) -> Outcome {
    let (chart, policy) = away_from_axes();
    let omega = form("x*dy - y*dx");
    let anti = homotopy(&omega.exterior_derivative(), &chart).map_err(|e| e.to_string())?;
    ensure(anti == omega, format!("Omega = {anti}"))?;
    let choice = GammaChoice::IntegratingFactor(parse_scalar(factor, 2).unwrap());
    let d = torsion_split(&anti, &choice, &chart, &policy).map_err(|e| e.to_string())?;
    ensure(d.sigma == form(sigma), format!("Sigma = {}", d.sigma))?;
    ensure(d.h.is_zero(), format!("h = {}", d.h.to_text(2)))?;
    ensure(d.eta == form(eta), format!("eta = {}", d.eta))?;
    let r = check_identity(&d.reconstruct(), &anti, &chart, &policy).map_err(|e| e.to_string())?;
    ensure(r.pass && r.samples == 32, format!("reconstruction error {:e}", r.max_error))?;
    Ok(format!(
        "Sigma = {}, h = 0, eta = {}, reconstruction max rel error {:.1e} over {} points",
        d.sigma, d.eta, r.max_error, r.samples
    ))
}

fn example_three() -> Outcome {
    let (chart, policy) = away_from_axes();
    let omega = form("(x + y^2)*dx");
    let r = decompose_form(&omega, &chart, &GammaRequest::Auto, &policy)
        .map_err(|e| e.to_string())?;
    let f = parse_scalar("x^2/2 + x*y^2/3", 2).unwrap();
    ensure(r.potential == f, format!("f = {}", r.potential.to_text(2)))?;
    let expected = form("2/3*(y^2*dx - x*y*dy)");
    ensure(r.antiexact_part == expected, format!("Omega = {}", r.antiexact_part))?;
    ensure(
        r.classification == CaseLabel::GradientRecursive,
        format!("classification {}", r.classification.as_str()),
    )?;
    let dlog = DifferentialForm::scalar(2, parse_scalar("ln(x/y)", 2).unwrap()).exterior_derivative();
    let rhs = dlog.mul_scalar(&parse_scalar("2/3*x*y^2", 2).unwrap());
    let check = check_identity(&r.antiexact_part, &rhs, &chart, &policy).map_err(|e| e.to_string())?;
    ensure(check.pass, format!("gradient-recursive identity error {:e}", check.max_error))?;
    Ok(format!(
        "f = x^2/2 + x*y^2/3, Omega = {}, GradientRecursive, Omega = 2/3 x y^2 d ln(x/y) to {:.1e}",
        r.antiexact_part, check.max_error
    ))
}

fn suite_cases(report: &SuiteReport, names: &[&str], trials: usize) -> Outcome {
    let mut lines = Vec::new();
    for name in names {
        let c = report
            .cases
            .iter()
            .find(|c| c.name == *name)
            .ok_or(format!("missing case {name}"))?;
        ensure(c.trials >= trials, format!("{name}: only {} trials", c.trials))?;
        ensure(c.passed(), format!("{name}: {} failures, max error {:e}", c.failures, c.max_error))?;
        lines.push(format!("{name} ({} trials)", c.trials));
    }
    Ok(format!("{} with zero failures", lines.join(", ")))
}

fn integrability() -> Outcome {
    let c3 = Chart::origin(3).unwrap();
    let pfaff = parse_form("z*dx + dy", 3).unwrap();
    ensure(!integrability_test(&pfaff, &c3).map_err(|e| e.to_string())?, "z dx + dy reported integrable")?;

    let c2 = Chart::with_uniform_box(vec![rational(1, 1); 2], rational(1, 2), rational(3, 2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut planar: Vec<DifferentialForm> = (0..100).map(|_| random_form(&mut rng, 2, 1, PolyShape::default())).collect();
    planar.extend(["exp(x*y)*dx + ln(x)*dy", "x^(1/2)*dy - y*dx", "dx"].map(form));
    for w in &planar {
        ensure(integrability_test(w, &c2).map_err(|e| e.to_string())?, format!("{w} reported non-integrable"))?;
    }

    let shape = PolyShape::default();
    let mut forms = vec![pfaff, parse_form("y*z*dx + x*z*dy + x*y*dz", 3).unwrap()];
    forms.extend((0..3).map(|_| random_form(&mut rng, 3, 1, shape)));
    for w in &forms {
        let verdict = integrability_test(w, &c3).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            // 1 + p^2 + k q^2 has no zeros.
            let p = random_polynomial(&mut rng, 3, shape);
            let q = random_polynomial(&mut rng, 3, shape);
            let k = rational(rng.gen_range(1..4), 1);
            let mu = ScalarExpr::one() + &p * &p + &q * &q.scale(&k);
            let scaled = integrability_test(&w.mul_scalar(&mu), &c3).map_err(|e| e.to_string())?;
            ensure(scaled == verdict, format!("verdict of {w} changed under a rescaling"))?;
        }
    }
    Ok(format!(
        "z dx + dy non-integrable, {} planar forms integrable, invariant under 10 rescalings of {} forms",
        planar.len(),
        forms.len()
    ))
}

const INVOCATIONS: [&[&str]; 3] = [
    &["decompose", "--form", "x*dx", "--dim", "2", "--center", "0,0"],
    &["decompose", "--form", "x*dy - y*dx", "--dim", "2", "--center", "0,0", "--int-factor", "x"],
    &["decompose", "--form", "x*dx + y^2*dx", "--dim", "2", "--center", "0,0", "--auto-gamma"],
];

fn cli_determinism() -> Outcome {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    for args in INVOCATIONS {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_antiexact"))
                .args(args)
                .args(["--json", "--seed", "17"])
                .env_remove("ANTIEXACT_SEED")
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        ensure(a.status.success(), format!("{args:?} exited with {}", a.status))?;
        ensure(a.stdout == b.stdout, format!("{args:?}: outputs differ"))?;
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
        let first = validator.iter_errors(&v).next().map(|e| format!("{e} at {}", e.instance_path()));
        if let Some(e) = first {
            return Err(format!("{args:?}: {e}"));
        }
    }
    Ok("three decompose runs are schema-valid and byte-identical across repeats".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = SuiteConfig::default();
    let homotopy_report = homotopy_suite(&cfg);
    let frobenius_report = frobenius_suite(&cfg);
    let suite = |r: &antiexact::Result<SuiteReport>, names: &[&str], trials: usize| match r {
        Ok(r) => suite_cases(r, names, trials),
        Err(e) => Err(e.to_string()),
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("x dx is exact", example_one()),
        ("x dy - y dx with factor x", example_two("x", "3*dx^dy", "x^2*dy - x*y*dx")),
        ("x dy - y dx with factor x^2", example_two("x^2", "4*dx^dy", "x^3*dy - x^2*y*dx")),
        ("(x + y^2) dx is gradient recursive", example_three()),
        (
            "operator identities",
            suite(
                &homotopy_report,
                &["H^2 = 0", "dd = 0", "dHd = d", "HdH = H", "dH + Hd = I", "(dH)^2 = dH", "(Hd)^2 = Hd"],
                500,
            ),
        ),
        ("Poincare lemma suite", suite(&homotopy_report, &["Poincare lemma: dH(d beta) = d beta"], 100)),
        ("antiexactness", suite(&homotopy_report, &["H(Hd omega) = 0", "(Hd omega)(x0) = 0"], 300)),
        (
            "Frobenius consistency",
            suite(
                &frobenius_report,
                &[
                    "dOmega = Gamma ^ Omega + Sigma",
                    "Sigma' = e^g d eta",
                    "dSigma = Gamma ^ Sigma - Theta ^ Omega",
                    "Omega = e^g (dh + eta)",
                    "h = quadrature oracle",
                    "eta = quadrature oracle",
                ],
                50,
            ),
        ),
        ("integrability oracle", integrability()),
        ("CLI determinism", cli_determinism()),
    ];
    let mut failed = 0;
    for (i, (title, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
