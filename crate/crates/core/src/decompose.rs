//! Force decomposition: work form, potential and antiexact part, then Frobenius resolution.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::{flat, sharp, DifferentialForm, Metric, VectorField};
use crate::frobenius::{attach_recursive_term, auto_gamma, torsion_split, CaseLabel, FrobeniusData, GammaChoice};
use crate::homotopy::homotopy;
use crate::scalar_expr::ScalarExpr;
use crate::verify::{check_identity, sample_points, IdentityReport, VerificationPolicy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaRequest {
    Auto,
    Fixed(GammaChoice),
}

/// `F = ∇f + X` with `X = e^g∇h + Y`; `Y` is the part that is not a scaled gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorView {
    pub gradient: VectorField,
    pub x: VectorField,
    pub y: VectorField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub report: IdentityReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub input: DifferentialForm,
    pub chart: Chart,
    pub metric: Metric,
    pub potential: ScalarExpr,
    pub exact_part: DifferentialForm,
    pub antiexact_part: DifferentialForm,
    pub frobenius: Option<FrobeniusData>,
    pub auto_gamma: bool,
    pub classification: CaseLabel,
    pub vector_view: Option<VectorView>,
    pub checks: Vec<IdentityCheck>,
    /// Largest relative error over all checks.
    pub residual: f64,
    pub seed: u64,
    pub samples: usize,
    pub warnings: Vec<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.report.pass)
    }
}

fn validate_input(omega: &DifferentialForm, chart: &Chart) -> Result<Vec<String>> {
    if omega.dimension() != chart.dimension() {
        return Err(Error::DimensionMismatch {
            expected: chart.dimension(),
            found: omega.dimension(),
        });
    }
    if omega.degree() != 1 {
        return Err(Error::Degree(format!("work form must be a 1-form, got degree {}", omega.degree())));
    }
    for (_, c) in omega.terms() {
        chart.check_expr(c)?;
    }
    let mut warnings = Vec::new();
    if omega.evaluate(&chart.center_f64()).is_err() {
        warnings.push("input is singular at the homotopy center".to_string());
    }
    Ok(warnings)
}

fn check_factor(choice: &GammaChoice, chart: &Chart, policy: &VerificationPolicy) -> Result<()> {
    if let GammaChoice::IntegratingFactor(mu) = choice {
        for p in sample_points(chart, policy)? {
            match mu.evaluate(&p) {
                Ok(v) if v.abs() > policy.abs_floor => {}
                Ok(_) => {
                    return Err(Error::InvalidGammaChoice(format!(
                        "integrating factor vanishes at {p:?}"
                    )))
                }
                Err(e) if e.is_domain() => {
                    return Err(Error::InvalidGammaChoice(format!(
                        "integrating factor is undefined at {p:?}: {e}"
                    )))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

/// Decomposes a work form `ω`: `ω = df + Ω`, and `Ω = e^g(dh + η)` when `Ω ≠ 0`.
pub fn decompose_form(
    omega: &DifferentialForm,
    chart: &Chart,
    gamma: &GammaRequest,
    policy: &VerificationPolicy,
) -> Result<DecompositionReport> {
    let warnings = validate_input(omega, chart)?;
    let n = chart.dimension();
    let potential = homotopy(omega, chart)?.as_scalar().expect("0-form");
    let exact_part = DifferentialForm::scalar(n, potential.clone()).exterior_derivative();
    let antiexact_part = homotopy(&omega.exterior_derivative(), chart)?;

    let mut checks = vec![IdentityCheck {
        name: "omega = df + Omega",
        report: check_identity(omega, &(&exact_part + &antiexact_part), chart, policy)?,
    }];

    let (frobenius, classification) = if antiexact_part.probably_zero(chart)? {
        (None, CaseLabel::Exact)
    } else {
        let mut data = match gamma {
            GammaRequest::Auto => auto_gamma(&antiexact_part, chart, policy)?,
            GammaRequest::Fixed(choice) => {
                check_factor(choice, chart, policy)?;
                torsion_split(&antiexact_part, choice, chart, policy)?
            }
        };
        if data.case_label == CaseLabel::Recursive {
            attach_recursive_term(&antiexact_part, &mut data, chart, policy)?;
        }
        checks.push(IdentityCheck {
            name: "Omega = e^g (dh + eta)",
            report: data.reconstruction.clone(),
        });
        let rhs = &data.connection.wedge(&antiexact_part)? + &data.sigma;
        checks.push(IdentityCheck {
            name: "dOmega = Gamma ^ Omega + Sigma",
            report: check_identity(&antiexact_part.exterior_derivative(), &rhs, chart, policy)?,
        });
        let lhs = data.eta.exterior_derivative().mul_scalar(&data.exp_g);
        checks.push(IdentityCheck {
            name: "Sigma' = e^g d eta",
            report: check_identity(&data.sigma_prime, &lhs, chart, policy)?,
        });
        let label = data.case_label;
        (Some(data), label)
    };

    let residual = checks.iter().fold(0.0f64, |m, c| m.max(c.report.max_error));
    let samples = checks.iter().map(|c| c.report.samples).min().unwrap_or(0);
    Ok(DecompositionReport {
        input: omega.clone(),
        chart: chart.clone(),
        metric: Metric::euclidean(n),
        potential,
        exact_part,
        antiexact_part,
        frobenius,
        auto_gamma: matches!(gamma, GammaRequest::Auto),
        classification,
        vector_view: None,
        checks,
        residual,
        seed: policy.seed,
        samples,
        warnings,
    })
}

/// Decomposes a force field via its work form `ω = g(F, ·)`, including the vector view.
pub fn decompose_force(
    force: &VectorField,
    metric: &Metric,
    chart: &Chart,
    gamma: &GammaRequest,
    policy: &VerificationPolicy,
) -> Result<DecompositionReport> {
    metric.validate(chart, &sample_points(chart, policy)?)?;
    let omega = flat(force, metric)?;
    let mut report = decompose_form(&omega, chart, gamma, policy)?;
    report.metric = metric.clone();
    report.vector_view = Some(vector_decomposition(&report, metric)?);
    Ok(report)
}

pub fn vector_decomposition(report: &DecompositionReport, metric: &Metric) -> Result<VectorView> {
    let n = report.chart.dimension();
    let gradient = sharp(&report.exact_part, metric)?;
    let x = sharp(&report.antiexact_part, metric)?;
    let y = match (&report.frobenius, report.classification) {
        (Some(d), CaseLabel::General) => sharp(&d.eta.mul_scalar(&d.exp_g), metric)?,
        (Some(d), CaseLabel::Recursive) => match &d.recursive {
            Some(r) => sharp(&r.eta.mul_scalar(&d.exp_g), metric)?,
            None => sharp(&d.eta.mul_scalar(&d.exp_g), metric)?,
        },
        _ => VectorField::zero(n),
    };
    Ok(VectorView { gradient, x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::rational;

    fn x() -> ScalarExpr {
        ScalarExpr::var(0)
    }
    fn y() -> ScalarExpr {
        ScalarExpr::var(1)
    }
    fn quadrant() -> (Chart, VerificationPolicy) {
        let c = Chart::with_uniform_box(vec![rational(0, 1); 2], rational(0, 1), rational(2, 1)).unwrap();
        (c, VerificationPolicy::default().excluding_axes(0.1))
    }

    #[test]
    fn conservative_force() {
        let (c, p) = quadrant();
        let f = VectorField::new(vec![x(), ScalarExpr::zero()]);
        let r = decompose_force(&f, &Metric::euclidean(2), &c, &GammaRequest::Auto, &p).unwrap();
        assert_eq!(r.potential, x().powi(2).scale(&rational(1, 2)));
        assert!(r.antiexact_part.is_zero());
        assert_eq!(r.classification, CaseLabel::Exact);
        let v = r.vector_view.clone().unwrap();
        assert_eq!(v.gradient, f);
        assert!(v.x.is_zero() && v.y.is_zero());
        assert!(r.passed());
    }

    #[test]
    fn rotation_with_factor_x() {
        let (c, p) = quadrant();
        let f = VectorField::new(vec![-y(), x()]);
        let req = GammaRequest::Fixed(GammaChoice::IntegratingFactor(x()));
        let r = decompose_force(&f, &Metric::euclidean(2), &c, &req, &p).unwrap();
        assert!(r.potential.is_zero());
        assert_eq!(r.classification, CaseLabel::General);
        let d = r.frobenius.as_ref().unwrap();
        assert_eq!(d.g, -x().ln());
        assert!(d.h.is_zero());
        assert_eq!(d.eta, r.antiexact_part.mul_scalar(&x()));
        assert!(r.passed());
        let v = r.vector_view.clone().unwrap();
        assert_eq!(v.x, f);
    }

    #[test]
    fn rotation_zero_connection_is_pure_remainder() {
        let (c, p) = quadrant();
        let f = VectorField::new(vec![-y(), x()]);
        let req = GammaRequest::Fixed(GammaChoice::Zero);
        let r = decompose_force(&f, &Metric::euclidean(2), &c, &req, &p).unwrap();
        let v = r.vector_view.clone().unwrap();
        assert!(v.gradient.is_zero());
        assert_eq!(v.y, v.x);
    }

    #[test]
    fn example_three() {
        let (c, p) = quadrant();
        let f = VectorField::new(vec![x() + y().powi(2), ScalarExpr::zero()]);
        let r = decompose_force(&f, &Metric::euclidean(2), &c, &GammaRequest::Auto, &p).unwrap();
        assert_eq!(
            r.potential,
            x().powi(2).scale(&rational(1, 2)) + (x() * y().powi(2)).scale(&rational(1, 3))
        );
        assert_eq!(r.classification, CaseLabel::GradientRecursive);
        assert!(r.vector_view.as_ref().unwrap().y.is_zero());
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn vanishing_factor_rejected() {
        let c = Chart::origin(2).unwrap();
        let omega = &DifferentialForm::basis(2, 1).mul_scalar(&x()) - &DifferentialForm::basis(2, 0).mul_scalar(&y());
        let req = GammaRequest::Fixed(GammaChoice::IntegratingFactor(x() - x()));
        let err = decompose_form(&omega, &c, &req, &VerificationPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidGammaChoice(_)));
    }
}
