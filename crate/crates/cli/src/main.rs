//! `antiexact`: decompose force fields, run the identity suites, classify work forms.
//!
//! Exit codes: 0 success, 2 input error, 3 failed verification.

mod report;

use antiexact::decompose::{decompose_force, decompose_form, vector_decomposition, DecompositionReport, GammaRequest};
use antiexact::forms::{DifferentialForm, Metric};
use antiexact::frobenius::{auto_gamma, integrability_test, CaseLabel, GammaChoice};
use antiexact::homotopy::homotopy;
use antiexact::parser::{parse_box, parse_form, parse_metric, parse_point, parse_scalar, parse_vector, print_form, print_metric};
use antiexact::suites::{frobenius_suite, homotopy_suite, SuiteConfig, SuiteReport};
use antiexact::verify::{sample_points, VerificationPolicy, DEFAULT_SEED};
use antiexact::{rational, Chart, Error};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use report::*;
use std::process::ExitCode;

const SEED_ENV: &str = "ANTIEXACT_SEED";
const INPUT_ERROR: u8 = 2;
const VERIFICATION_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "antiexact", version, about = "Exact/antiexact decomposition of force fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a force or work form into potential, antiexact part and Frobenius data.
    Decompose(DecomposeArgs),
    /// Run the randomized identity suites.
    Verify(VerifyArgs),
    /// Report whether a work form is exact, integrable or non-integrable.
    Classify(ClassifyArgs),
    /// Print the JSON schema of the reports.
    Schema,
}

#[derive(Args)]
struct ChartArgs {
    /// Dimension n (1 to 8).
    #[arg(long)]
    dim: usize,
    /// Homotopy center `c1,...,cn`; the origin by default.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// Sampling box `lo:hi,...` or one `lo:hi` for every axis; `[c_i, c_i + 2]` by default.
    #[arg(long = "box", allow_hyphen_values = true)]
    bounds: Option<String>,
    /// Reject sample points with some |x_i| at or below this value; 0 disables.
    #[arg(long, default_value_t = 0.05)]
    exclude: f64,
    /// Sample points per identity check.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// RNG seed (decimal or 0x-hex); falls back to $ANTIEXACT_SEED.
    #[arg(long)]
    seed: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["form", "vector"])))]
#[command(group(ArgGroup::new("connection").args(["gamma", "int_factor", "auto_gamma"])))]
struct DecomposeArgs {
    /// Work form, e.g. "x*dy - y*dx".
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// Force field components, e.g. "-y, x".
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
    /// `euclidean`, `diag(a, ...)` or `[[a, b], [c, d]]`.
    #[arg(long, allow_hyphen_values = true)]
    metric: Option<String>,
    /// Explicit connection 1-form Gamma.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Explicit integrating factor e^{-g}.
    #[arg(long, allow_hyphen_values = true)]
    int_factor: Option<String>,
    /// Search for a torsion-free Gamma; Gamma = 0 when none of the flags is given.
    #[arg(long)]
    auto_gamma: bool,
    /// Report the physics potential -f instead of f.
    #[arg(long)]
    physics_sign: bool,
    #[command(flatten)]
    chart: ChartArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Homotopy,
    Frobenius,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Dimension range `a..b` (inclusive) or a single dimension.
    #[arg(long, default_value = "2..5")]
    dims: String,
    /// Sample points per numeric check.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Random forms per case; the built-in counts by default.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    form: String,
    #[command(flatten)]
    chart: ChartArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: INPUT_ERROR,
            message: message.into(),
        }
    }

    fn from_error(context: &str, e: Error) -> Self {
        let code = match e {
            Error::ReconstructionFailure { .. } | Error::Eval(_) => VERIFICATION_FAILED,
            _ => INPUT_ERROR,
        };
        Self {
            code,
            message: format!("{context}: {e}"),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn in_context<T>(context: &str, r: antiexact::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::from_error(context, e))
}

fn parsed<T>(flag: &str, r: Result<T, antiexact::parser::ParseError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::input(format!("{flag}: {e}")))
}

fn parse_seed(text: &str) -> Result<u64, Failure> {
    let t = text.trim();
    let v = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    v.map_err(|_| Failure::input(format!("invalid seed `{text}`")))
}

fn resolve_seed(flag: Option<&str>) -> Result<u64, Failure> {
    match flag {
        Some(s) => parse_seed(s),
        None => match std::env::var(SEED_ENV) {
            Ok(s) if !s.trim().is_empty() => parse_seed(&s),
            _ => Ok(DEFAULT_SEED),
        },
    }
}

fn build_chart(a: &ChartArgs) -> Result<(Chart, VerificationPolicy), Failure> {
    let n = a.dim;
    let center = match &a.center {
        Some(t) => parsed("--center", parse_point(t, n))?,
        None => {
            // Validates the dimension with the parser's message.
            parsed("--dim", parse_point(&vec!["0"; n.max(1)].join(","), n))?
        }
    };
    let bounds = match &a.bounds {
        Some(t) => parsed("--box", parse_box(t, n))?,
        None => center.iter().map(|c| (c.clone(), c + rational(2, 1))).collect(),
    };
    let chart = in_context("chart", Chart::new(center, bounds))?;
    if a.samples == 0 {
        return Err(Failure::input("--samples must be at least 1"));
    }
    if !(a.exclude >= 0.0 && a.exclude.is_finite()) {
        return Err(Failure::input("--exclude must be a non-negative number"));
    }
    let mut policy = VerificationPolicy::default()
        .with_samples(a.samples)
        .with_seed(resolve_seed(a.seed.as_deref())?);
    if a.exclude > 0.0 {
        policy = policy.excluding_axes(a.exclude);
    }
    Ok((chart, policy))
}

fn work_form(text: &str, n: usize) -> Result<DifferentialForm, Failure> {
    let omega = parsed("--form", parse_form(text, n))?;
    if omega.degree() != 1 {
        return Err(Failure::input(format!(
            "--form: expected a 1-form, got a {}-form",
            omega.degree()
        )));
    }
    Ok(omega)
}

fn gamma_request(a: &DecomposeArgs, n: usize) -> Result<GammaRequest, Failure> {
    if let Some(t) = &a.gamma {
        let g = parsed("--gamma", parse_form(t, n))?;
        if g.degree() != 1 {
            return Err(Failure::input("--gamma: expected a 1-form"));
        }
        return Ok(GammaRequest::Fixed(GammaChoice::Connection(g)));
    }
    if let Some(t) = &a.int_factor {
        return Ok(GammaRequest::Fixed(GammaChoice::IntegratingFactor(parsed(
            "--int-factor",
            parse_scalar(t, n),
        )?)));
    }
    if a.auto_gamma {
        return Ok(GammaRequest::Auto);
    }
    Ok(GammaRequest::Fixed(GammaChoice::Zero))
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable report"));
}

fn error_text(e: Option<f64>) -> String {
    e.map_or("n/a".to_string(), |v| format!("{v:.3e}"))
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn decompose_text(r: &DecompositionReport, j: &DecomposeJson) {
    let n = r.chart.dimension();
    println!("input           {}", j.input.form);
    if let Some(v) = &j.input.vector {
        println!("force           {v}");
    }
    println!(
        "chart           n = {n}, center ({}), metric {}",
        j.input.chart.center.join(", "),
        j.input.metric
    );
    let f = if j.physics_sign { "-f" } else { "f" };
    println!("potential       {f} = {}", j.potential);
    println!("exact part      df = {}", j.exact_part);
    println!("antiexact part  Omega = {}", j.antiexact_part);
    println!("classification  {}", j.classification);
    if let Some(fr) = &j.frobenius {
        let choice = match &fr.gamma_choice.value {
            Some(v) => format!("{} {v}", fr.gamma_choice.kind),
            None => fr.gamma_choice.kind.to_string(),
        };
        println!("gamma choice    {choice}{}", if fr.auto { " (auto)" } else { "" });
        if fr.regularized {
            println!("frobenius center ({})", fr.center.join(", "));
        }
        println!("Gamma           {}", fr.gamma);
        println!("g               {}", fr.g);
        println!("e^g             {}", fr.exp_g);
        println!("h               {}", fr.h);
        println!("eta             {}", fr.eta);
        println!("Sigma           {}", fr.sigma);
        println!("Sigma'          {}", fr.sigma_prime);
        println!("Theta = dGamma  {}", fr.curvature);
        if let Some(rec) = &fr.recursive {
            println!("recursive eta   {}", rec.eta);
            println!("  dtheta^Omega = 0: {}, reconstructs: {}", rec.constraint_holds, rec.reconstructs);
        }
    }
    if let Some(v) = &j.vector_view {
        println!("grad f          {}", v.gradient);
        println!("X               {}", v.x);
        println!("Y               {}", v.y);
    }
    println!(
        "verification    seed {:#x}, {} samples, rel tol {:e}",
        j.verification.seed, j.verification.samples, j.verification.rel_tol
    );
    for c in &j.verification.identities {
        println!(
            "  {}  {:<34} max error {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            error_text(c.max_error)
        );
    }
}

fn cmd_decompose(a: &DecomposeArgs) -> Outcome {
    let (chart, policy) = build_chart(&a.chart)?;
    let n = chart.dimension();
    let gamma = gamma_request(a, n)?;
    let metric = match &a.metric {
        Some(t) => in_context("--metric", parse_metric(t, n))?,
        None => Metric::euclidean(n),
    };
    let (report, vector_text) = if let Some(t) = &a.vector {
        let force = parsed("--vector", parse_vector(t, n))?;
        let r = in_context("decompose", decompose_force(&force, &metric, &chart, &gamma, &policy))?;
        (r, Some(antiexact::parser::print_vector(&force)))
    } else {
        let omega = work_form(a.form.as_deref().expect("input group"), n)?;
        let points = in_context("sampling", sample_points(&chart, &policy))?;
        in_context("--metric", metric.validate(&chart, &points))?;
        let mut r = in_context("decompose", decompose_form(&omega, &chart, &gamma, &policy))?;
        r.metric = metric.clone();
        r.vector_view = Some(in_context("vector view", vector_decomposition(&r, &metric))?);
        (r, None)
    };
    let j = DecomposeJson::new(&report, vector_text, &policy, a.physics_sign);
    if a.chart.json {
        print_json(&j);
    } else {
        decompose_text(&report, &j);
    }
    warn(&report.warnings);
    Ok(if report.passed() { 0 } else { VERIFICATION_FAILED })
}

fn cmd_classify(a: &ClassifyArgs) -> Outcome {
    let (chart, policy) = build_chart(&a.chart)?;
    let n = chart.dimension();
    let omega = work_form(&a.form, n)?;
    let mut warnings = Vec::new();
    if omega.evaluate(&chart.center_f64()).is_err() {
        warnings.push("input is singular at the homotopy center".to_string());
    }
    let anti = in_context("homotopy", homotopy(&omega.exterior_derivative(), &chart))?;
    let exact = in_context("classify", anti.probably_zero(&chart))?;
    let (verdict, anti_integrable, torsion_free) = if exact {
        ("exact", None, None)
    } else {
        let integrable = in_context("classify", integrability_test(&omega, &chart))?;
        let anti_integrable = in_context("classify", integrability_test(&anti, &chart))?;
        let torsion_free = if integrable {
            let data = in_context("auto gamma", auto_gamma(&anti, &chart, &policy))?;
            let found = data.case_label != CaseLabel::General;
            Some(TorsionFreeJson {
                found,
                gamma_choice: found.then(|| GammaJson::new(&data.choice, n)),
                classification: found.then(|| data.case_label.as_str()),
            })
        } else {
            None
        };
        (
            if integrable { "integrable" } else { "non-integrable" },
            Some(anti_integrable),
            torsion_free,
        )
    };
    let j = ClassifyJson {
        schema_version: SCHEMA_VERSION,
        command: "classify",
        input: chart_input(&omega, &chart, print_metric(&Metric::euclidean(n))),
        verdict,
        antiexact_part: print_form(&anti),
        antiexact_integrable: anti_integrable,
        torsion_free_gamma: torsion_free,
        seed: policy.seed,
        warnings: warnings.clone(),
    };
    if a.chart.json {
        print_json(&j);
    } else {
        println!("{verdict}");
        println!("antiexact part  Omega = {}", j.antiexact_part);
        if let Some(ai) = j.antiexact_integrable {
            println!("Omega integrable: {ai}");
        }
        if let Some(t) = &j.torsion_free_gamma {
            match (&t.gamma_choice, t.classification) {
                (Some(g), Some(c)) => println!(
                    "torsion-free Gamma found: {} {} ({c})",
                    g.kind,
                    g.value.as_deref().unwrap_or("")
                ),
                _ => println!("torsion-free Gamma found: no"),
            }
        }
    }
    warn(&warnings);
    Ok(0)
}

fn parse_dims(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::input(format!("--dims: expected `a..b` or `n`, got `{text}`"));
    let t = text.trim();
    let (lo, hi) = match t.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (t, t),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi || hi > 8 {
        return Err(Failure::input(format!("--dims: need 1 <= a <= b <= 8, got `{text}`")));
    }
    Ok((lo, hi))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let (lo, hi) = parse_dims(&a.dims)?;
    if a.samples == 0 {
        return Err(Failure::input("--samples must be at least 1"));
    }
    let cfg = SuiteConfig {
        dims: lo..=hi,
        trials: a.trials,
        policy: VerificationPolicy::default()
            .with_samples(a.samples)
            .with_seed(resolve_seed(a.seed.as_deref())?),
        ..SuiteConfig::default()
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    if matches!(a.suite, Suite::Homotopy | Suite::All) {
        reports.push(in_context("homotopy suite", homotopy_suite(&cfg))?);
    }
    if matches!(a.suite, Suite::Frobenius | Suite::All) {
        reports.push(in_context("frobenius suite", frobenius_suite(&cfg))?);
    }
    let passed = reports.iter().all(SuiteReport::passed);
    if a.json {
        print_json(&VerifyJson {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            seed: cfg.policy.seed,
            samples: cfg.policy.sample_count,
            dims: [lo, hi],
            suites: reports.iter().map(SuiteJson::new).collect(),
            passed,
        });
    } else {
        println!(
            "seed {:#x}, dims {lo}..{hi}, {} samples per numeric check",
            cfg.policy.seed, cfg.policy.sample_count
        );
        for r in &reports {
            for c in &r.cases {
                println!(
                    "{}  {:<10} {:<42} trials {:>4}  failures {:>3}  max error {}",
                    if c.passed() { "PASS" } else { "FAIL" },
                    r.suite,
                    c.name,
                    c.trials,
                    c.failures,
                    error_text(Some(c.max_error))
                );
            }
        }
        println!("{}", if passed { "all identities hold" } else { "identity failures" });
    }
    Ok(if passed { 0 } else { VERIFICATION_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Schema => {
            print!("{SCHEMA}");
            Ok(0)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
