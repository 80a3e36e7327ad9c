//! Randomized property suites over polynomial forms.
//!
//! Operator identities, the Poincaré lemma and antiexactness are compared structurally,
//! which is exact for polynomial input. The Frobenius suite works with transcendental
//! potentials and is checked at sample points.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::frobenius::{curvature, torsion_split, GammaChoice};
use crate::homotopy::{homotopy_about, vanishes_at};
use crate::random::{random_center, random_form, PolyShape};
use crate::scalar_expr::{rational, Rational};
use crate::verify::{check_identity, check_with, quadrature_h_oracle_about, IdentityReport, VerificationPolicy};
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest relative residual seen; zero for structural cases without failures.
    pub max_error: f64,
    /// Compared by structural equality rather than sampling.
    pub exact: bool,
}

impl CaseOutcome {
    fn new(name: &'static str, exact: bool) -> Self {
        Self {
            name,
            trials: 0,
            failures: 0,
            max_error: 0.0,
            exact,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, pass: bool, error: f64) {
        self.trials += 1;
        if !pass {
            self.failures += 1;
        }
        if error.is_nan() || error > self.max_error {
            self.max_error = if error.is_nan() { f64::INFINITY } else { error };
        }
    }

    fn record_report(&mut self, r: &IdentityReport) {
        self.record(r.pass, r.max_error);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseOutcome::passed)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub dims: RangeInclusive<usize>,
    /// Overrides every per-case trial count when set.
    pub trials: Option<usize>,
    pub shape: PolyShape,
    /// Sampling for numeric cases; its seed also drives form generation.
    pub policy: VerificationPolicy,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: 2..=5,
            trials: None,
            shape: PolyShape::default(),
            policy: VerificationPolicy::default(),
        }
    }
}

pub const IDENTITY_TRIALS: usize = 500;
pub const POINCARE_TRIALS: usize = 100;
pub const ANTIEXACT_TRIALS: usize = 100;
pub const FROBENIUS_TRIALS: usize = 50;
pub const ANTIEXACT_CENTERS: usize = 3;
/// Oracle comparisons happen at sample points and tolerate quadrature error.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

impl SuiteConfig {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.policy.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn dims(&self) -> Result<Vec<usize>> {
        let dims: Vec<usize> = self.dims.clone().collect();
        if dims.is_empty() || dims[0] == 0 {
            return Err(Error::InvalidChart(format!("empty dimension range {:?}", self.dims)));
        }
        Ok(dims)
    }

    /// Dimension and degree `1..=n` of trial `i`, cycling through both.
    fn shape_of(&self, dims: &[usize], i: usize) -> (usize, usize) {
        let n = dims[i % dims.len()];
        (n, 1 + (i / dims.len()) % n)
    }

    fn oracle_policy(&self) -> VerificationPolicy {
        self.policy.clone().with_rel_tol(ORACLE_TOLERANCE)
    }
}

fn unit_box(center: Vec<Rational>) -> Result<Chart> {
    Chart::with_uniform_box(center, rational(-1, 1), rational(1, 1))
}

/// Structural comparison; on mismatch the sampled residual is recorded as the error.
fn structural(
    case: &mut CaseOutcome,
    lhs: &DifferentialForm,
    rhs: &DifferentialForm,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<()> {
    if lhs == rhs {
        case.record(true, 0.0);
    } else {
        let err = check_identity(lhs, rhs, chart, policy).map_or(f64::INFINITY, |r| r.max_error);
        case.record(false, err.max(f64::MIN_POSITIVE));
    }
    Ok(())
}

/// `H² = 0`, `dd = 0`, `dHd = d`, `HdH = H`, `dH + Hd = I`, `(dH)² = dH`, `(Hd)² = Hd`,
/// symbolic `H` against the quadrature oracle, the Poincaré lemma on `a = dβ`, and
/// antiexactness of `Hdω` about several centers.
pub fn homotopy_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let dims = cfg.dims()?;
    let policy = &cfg.policy;
    let names = [
        "H^2 = 0",
        "dd = 0",
        "dHd = d",
        "HdH = H",
        "dH + Hd = I",
        "(dH)^2 = dH",
        "(Hd)^2 = Hd",
    ];
    let mut cases: Vec<CaseOutcome> = names.iter().map(|n| CaseOutcome::new(n, true)).collect();
    let mut oracle = CaseOutcome::new("H = quadrature oracle", false);
    let mut rng = cfg.rng(1);
    for i in 0..cfg.trials(IDENTITY_TRIALS) {
        let (n, k) = cfg.shape_of(&dims, i);
        let a = random_form(&mut rng, n, k, cfg.shape);
        let center = random_center(&mut rng, n);
        let chart = unit_box(center.clone())?;
        let h = |f: &DifferentialForm| homotopy_about(f, &center);
        let d = |f: &DifferentialForm| f.exterior_derivative();
        let ha = h(&a);
        let da = d(&a);
        let dha = d(&ha);
        let hda = h(&da);
        structural(&mut cases[0], &h(&ha), &DifferentialForm::zero(n, k.saturating_sub(2)), &chart, policy)?;
        structural(&mut cases[1], &d(&da), &DifferentialForm::zero(n, k + 2), &chart, policy)?;
        structural(&mut cases[2], &d(&hda), &da, &chart, policy)?;
        structural(&mut cases[3], &h(&dha), &ha, &chart, policy)?;
        structural(&mut cases[4], &(&dha + &hda), &a, &chart, policy)?;
        structural(&mut cases[5], &d(&h(&dha)), &dha, &chart, policy)?;
        structural(&mut cases[6], &h(&d(&hda)), &hda, &chart, policy)?;

        let c = chart.center_f64();
        let r = check_with(&chart, &cfg.oracle_policy(), |p| {
            Ok((ha.evaluate(p)?, quadrature_h_oracle_about(&a, &c, p)?))
        })?;
        oracle.record_report(&r);
    }
    cases.push(oracle);

    let mut poincare = CaseOutcome::new("Poincare lemma: dH(d beta) = d beta", true);
    let mut rng = cfg.rng(2);
    for i in 0..cfg.trials(POINCARE_TRIALS) {
        let (n, k) = cfg.shape_of(&dims, i);
        let beta = random_form(&mut rng, n, k - 1, cfg.shape);
        let a = beta.exterior_derivative();
        let center = random_center(&mut rng, n);
        let chart = unit_box(center.clone())?;
        let back = homotopy_about(&a, &center).exterior_derivative();
        structural(&mut poincare, &back, &a, &chart, policy)?;
    }
    cases.push(poincare);

    let mut kernel = CaseOutcome::new("H(Hd omega) = 0", true);
    let mut vanish = CaseOutcome::new("(Hd omega)(x0) = 0", true);
    let mut rng = cfg.rng(3);
    for i in 0..cfg.trials(ANTIEXACT_TRIALS) {
        let (n, k) = cfg.shape_of(&dims, i);
        let omega = random_form(&mut rng, n, k, cfg.shape);
        let d_omega = omega.exterior_derivative();
        for _ in 0..ANTIEXACT_CENTERS {
            let center = random_center(&mut rng, n);
            let chart = unit_box(center.clone())?;
            let anti = homotopy_about(&d_omega, &center);
            structural(
                &mut kernel,
                &homotopy_about(&anti, &center),
                &DifferentialForm::zero(n, k.saturating_sub(1)),
                &chart,
                policy,
            )?;
            vanish.record(vanishes_at(&anti, &center), 0.0);
        }
    }
    cases.push(kernel);
    cases.push(vanish);
    Ok(SuiteReport {
        suite: "homotopy",
        cases,
    })
}

/// Random antiexact `Ω = Hdω` with random polynomial connections `Γ`: the torsion
/// equation, the reduced torsion, the Bianchi-type identity `dΣ = Γ∧Σ − Θ∧Ω`, the
/// reconstruction and the quadrature oracle for `h` and `η`.
pub fn frobenius_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let dims = cfg.dims()?;
    let policy = cfg.oracle_policy();
    let mut torsion = CaseOutcome::new("dOmega = Gamma ^ Omega + Sigma", false);
    let mut reduced = CaseOutcome::new("Sigma' = e^g d eta", false);
    let mut bianchi = CaseOutcome::new("dSigma = Gamma ^ Sigma - Theta ^ Omega", false);
    let mut rebuild = CaseOutcome::new("Omega = e^g (dh + eta)", false);
    let mut h_oracle = CaseOutcome::new("h = quadrature oracle", false);
    let mut eta_oracle = CaseOutcome::new("eta = quadrature oracle", false);
    let shape = PolyShape {
        max_degree: cfg.shape.max_degree.min(2),
        max_terms: cfg.shape.max_terms.min(2),
    };
    let mut rng = cfg.rng(4);
    let mut done = 0;
    let trials = cfg.trials(FROBENIUS_TRIALS);
    while done < trials {
        let n = dims[done % dims.len()];
        let origin = vec![Rational::default(); n];
        let omega = homotopy_about(&random_form(&mut rng, n, 1, cfg.shape).exterior_derivative(), &origin);
        if omega.is_zero() {
            continue;
        }
        let gamma = if rng.gen_bool(0.2) {
            DifferentialForm::zero(n, 1)
        } else {
            random_form(&mut rng, n, 1, shape)
        };
        done += 1;
        let chart = Chart::origin(n)?;
        let data = match torsion_split(&omega, &GammaChoice::Connection(gamma.clone()), &chart, &policy) {
            Ok(d) => d,
            Err(Error::ReconstructionFailure { max_error, .. }) => {
                rebuild.record(false, max_error);
                continue;
            }
            Err(e) => return Err(e),
        };
        rebuild.record_report(&data.reconstruction);

        let d_omega = omega.exterior_derivative();
        let rhs = &gamma.wedge(&omega)? + &data.sigma;
        torsion.record_report(&check_identity(&d_omega, &rhs, &chart, &policy)?);

        let lhs = data.eta.exterior_derivative().mul_scalar(&data.exp_g);
        reduced.record_report(&check_identity(&data.sigma_prime, &lhs, &chart, &policy)?);

        let theta = curvature(&gamma);
        let rhs = &gamma.wedge(&data.sigma)? - &theta.wedge(&omega)?;
        bianchi.record_report(&check_identity(&data.sigma.exterior_derivative(), &rhs, &chart, &policy)?);

        let c: Vec<f64> = data.center.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let alpha = &data.alpha;
        let d_alpha = alpha.exterior_derivative();
        let r = check_with(&chart, &policy, |p| {
            Ok((vec![data.h.evaluate(p)?], quadrature_h_oracle_about(alpha, &c, p)?))
        })?;
        h_oracle.record_report(&r);
        let r = check_with(&chart, &policy, |p| {
            Ok((data.eta.evaluate(p)?, quadrature_h_oracle_about(&d_alpha, &c, p)?))
        })?;
        eta_oracle.record_report(&r);
    }
    Ok(SuiteReport {
        suite: "frobenius",
        cases: vec![torsion, reduced, bianchi, rebuild, h_oracle, eta_oracle],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            dims: 2..=3,
            trials: Some(6),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn homotopy_suite_passes_small() {
        let r = homotopy_suite(&small()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.cases.len(), 11);
        assert!(r.cases.iter().all(|c| c.trials > 0));
    }

    #[test]
    fn frobenius_suite_passes_small() {
        let r = frobenius_suite(&small()).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(homotopy_suite(&small()).unwrap(), homotopy_suite(&small()).unwrap());
    }
}
