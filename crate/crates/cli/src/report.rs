//! JSON report layouts. Field order is fixed by declaration order, so output is
//! byte-deterministic for identical inputs.

use antiexact::decompose::{DecompositionReport, VectorView};
use antiexact::forms::DifferentialForm;
use antiexact::frobenius::{FrobeniusData, GammaChoice};
use antiexact::parser::{print_form, print_metric, print_vector};
use antiexact::scalar_expr::rational_text;
use antiexact::suites::SuiteReport;
use antiexact::verify::VerificationPolicy;
use antiexact::{Chart, Rational};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1.0";
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

fn point_text(p: &[Rational]) -> Vec<String> {
    p.iter().map(rational_text).collect()
}

/// Non-finite errors are written as `null`.
fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Serialize)]
pub struct ChartJson {
    pub dimension: usize,
    pub center: Vec<String>,
    #[serde(rename = "box")]
    pub bounds: Vec<[String; 2]>,
}

impl ChartJson {
    pub fn new(chart: &Chart) -> Self {
        Self {
            dimension: chart.dimension(),
            center: point_text(chart.center()),
            bounds: chart
                .bounds()
                .iter()
                .map(|(a, b)| [rational_text(a), rational_text(b)])
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct InputJson {
    pub form: String,
    pub vector: Option<String>,
    #[serde(flatten)]
    pub chart: ChartJson,
    pub metric: String,
}

#[derive(Serialize)]
pub struct GammaJson {
    pub kind: &'static str,
    pub value: Option<String>,
}

impl GammaJson {
    pub fn new(choice: &GammaChoice, n: usize) -> Self {
        let value = match choice {
            GammaChoice::Zero => None,
            GammaChoice::Connection(g) => Some(print_form(g)),
            GammaChoice::IntegratingFactor(mu) => Some(mu.to_text(n)),
        };
        Self {
            kind: choice.kind(),
            value,
        }
    }
}

#[derive(Serialize)]
pub struct RecursiveJson {
    pub eta: String,
    pub constraint_holds: bool,
    pub reconstructs: bool,
}

#[derive(Serialize)]
pub struct FrobeniusJson {
    pub gamma_choice: GammaJson,
    pub auto: bool,
    pub center: Vec<String>,
    pub regularized: bool,
    pub gamma: String,
    pub g: String,
    pub exp_g: String,
    pub h: String,
    pub eta: String,
    pub sigma: String,
    pub sigma_prime: String,
    pub theta: String,
    pub curvature: String,
    pub recursive: Option<RecursiveJson>,
}

impl FrobeniusJson {
    pub fn new(d: &FrobeniusData, n: usize, auto: bool) -> Self {
        Self {
            gamma_choice: GammaJson::new(&d.choice, n),
            auto,
            center: point_text(&d.center),
            regularized: d.regularized,
            gamma: print_form(&d.connection),
            g: d.g.to_text(n),
            exp_g: d.exp_g.to_text(n),
            h: d.h.to_text(n),
            eta: print_form(&d.eta),
            sigma: print_form(&d.sigma),
            sigma_prime: print_form(&d.sigma_prime),
            theta: print_form(&d.theta),
            curvature: print_form(&d.curvature),
            recursive: d.recursive.as_ref().map(|r| RecursiveJson {
                eta: print_form(&r.eta),
                constraint_holds: r.constraint_holds,
                reconstructs: r.reconstructs,
            }),
        }
    }
}

#[derive(Serialize)]
pub struct VectorViewJson {
    pub gradient: String,
    pub x: String,
    pub y: String,
}

impl VectorViewJson {
    pub fn new(v: &VectorView) -> Self {
        Self {
            gradient: print_vector(&v.gradient),
            x: print_vector(&v.x),
            y: print_vector(&v.y),
        }
    }
}

#[derive(Serialize)]
pub struct IdentityJson {
    pub name: &'static str,
    pub pass: bool,
    pub max_error: Option<f64>,
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
}

#[derive(Serialize)]
pub struct VerificationJson {
    pub seed: u64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub exclusion: Option<f64>,
    pub identities: Vec<IdentityJson>,
    pub max_error: Option<f64>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct DecomposeJson {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub input: InputJson,
    pub potential: String,
    pub physics_sign: bool,
    pub exact_part: String,
    pub antiexact_part: String,
    pub classification: &'static str,
    pub frobenius: Option<FrobeniusJson>,
    pub vector_view: Option<VectorViewJson>,
    pub verification: VerificationJson,
    pub warnings: Vec<String>,
}

/// The reported potential; `−f` under the physics convention.
pub fn reported_potential(r: &DecompositionReport, physics_sign: bool) -> String {
    let n = r.chart.dimension();
    if physics_sign {
        (-&r.potential).to_text(n)
    } else {
        r.potential.to_text(n)
    }
}

impl DecomposeJson {
    pub fn new(
        r: &DecompositionReport,
        vector: Option<String>,
        policy: &VerificationPolicy,
        physics_sign: bool,
    ) -> Self {
        let n = r.chart.dimension();
        let identities = r
            .checks
            .iter()
            .map(|c| IdentityJson {
                name: c.name,
                pass: c.report.pass,
                max_error: finite(c.report.max_error),
                witness: c.report.witness.clone(),
                samples: c.report.samples,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "decompose",
            input: InputJson {
                form: print_form(&r.input),
                vector,
                chart: ChartJson::new(&r.chart),
                metric: print_metric(&r.metric),
            },
            potential: reported_potential(r, physics_sign),
            physics_sign,
            exact_part: print_form(&r.exact_part),
            antiexact_part: print_form(&r.antiexact_part),
            classification: r.classification.as_str(),
            frobenius: r.frobenius.as_ref().map(|d| FrobeniusJson::new(d, n, r.auto_gamma)),
            vector_view: r.vector_view.as_ref().map(VectorViewJson::new),
            verification: VerificationJson {
                seed: r.seed,
                samples: policy.sample_count,
                rel_tol: policy.rel_tol,
                abs_floor: policy.abs_floor,
                exclusion: policy.min_abs_coordinate,
                identities,
                max_error: finite(r.residual),
                passed: r.passed(),
            },
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct TorsionFreeJson {
    pub found: bool,
    pub gamma_choice: Option<GammaJson>,
    pub classification: Option<&'static str>,
}

#[derive(Serialize)]
pub struct ClassifyJson {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub input: InputJson,
    pub verdict: &'static str,
    pub antiexact_part: String,
    pub antiexact_integrable: Option<bool>,
    pub torsion_free_gamma: Option<TorsionFreeJson>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct CaseJson {
    pub name: &'static str,
    pub exact: bool,
    pub trials: usize,
    pub failures: usize,
    pub max_error: Option<f64>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct SuiteJson {
    pub suite: &'static str,
    pub passed: bool,
    pub cases: Vec<CaseJson>,
}

impl SuiteJson {
    pub fn new(r: &SuiteReport) -> Self {
        Self {
            suite: r.suite,
            passed: r.passed(),
            cases: r
                .cases
                .iter()
                .map(|c| CaseJson {
                    name: c.name,
                    exact: c.exact,
                    trials: c.trials,
                    failures: c.failures,
                    max_error: finite(c.max_error),
                    passed: c.passed(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub dims: [usize; 2],
    pub suites: Vec<SuiteJson>,
    pub passed: bool,
}

pub fn chart_input(form: &DifferentialForm, chart: &Chart, metric: String) -> InputJson {
    InputJson {
        form: print_form(form),
        vector: None,
        chart: ChartJson::new(chart),
        metric,
    }
}
