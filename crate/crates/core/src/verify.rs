//! Numerical oracle: identities are checked by evaluation at seeded random points.

use crate::chart::{Chart, Sampler};
use crate::error::{Error, Result};
use crate::forms::{basis_tuples, DifferentialForm};
use crate::quadrature;
use crate::scalar_expr::{EvalError, ScalarExpr};

pub const DEFAULT_SEED: u64 = 0x5eed_1d3a;
const ATTEMPTS_PER_SAMPLE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationPolicy {
    pub sample_count: usize,
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub seed: u64,
    /// Reject sample points with any `|xᵢ|` at or below this value.
    pub min_abs_coordinate: Option<f64>,
}

impl Default for VerificationPolicy {
    fn default() -> Self {
        Self {
            sample_count: 32,
            rel_tol: 1e-9,
            abs_floor: 1e-12,
            seed: DEFAULT_SEED,
            min_abs_coordinate: None,
        }
    }
}

impl VerificationPolicy {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.sample_count = n.max(1);
        self
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "relative tolerance must be positive");
        self.rel_tol = tol;
        self
    }

    pub fn excluding_axes(mut self, min_abs: f64) -> Self {
        self.min_abs_coordinate = Some(min_abs);
        self
    }

    pub fn admits(&self, p: &[f64]) -> bool {
        match self.min_abs_coordinate {
            Some(m) => p.iter().all(|v| v.abs() > m),
            None => true,
        }
    }

    fn budget(&self) -> usize {
        self.sample_count * ATTEMPTS_PER_SAMPLE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub pass: bool,
    /// Largest `|lhs − rhs| / (scale + abs_floor / rel_tol)` over the sample, where `scale`
    /// is the largest coefficient magnitude at that point. A point passes exactly when this
    /// is at most `rel_tol`.
    pub max_error: f64,
    /// The point attaining `max_error`.
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
}

/// `sample_count` admissible points of the chart box.
pub fn sample_points(chart: &Chart, policy: &VerificationPolicy) -> Result<Vec<Vec<f64>>> {
    let mut sampler = Sampler::new(chart, policy.seed);
    let mut out = Vec::with_capacity(policy.sample_count);
    for _ in 0..policy.budget() {
        let p = sampler.draw();
        if policy.admits(&p) {
            out.push(p);
            if out.len() == policy.sample_count {
                return Ok(out);
            }
        }
    }
    Err(Error::SamplingExhausted {
        wanted: policy.sample_count,
        attempts: policy.budget(),
    })
}

/// Compares two vectors produced by `pair` at admissible sample points. Points where `pair`
/// reports a domain error are redrawn.
pub fn check_with<F>(chart: &Chart, policy: &VerificationPolicy, mut pair: F) -> Result<IdentityReport>
where
    F: FnMut(&[f64]) -> std::result::Result<(Vec<f64>, Vec<f64>), EvalError>,
{
    let mut sampler = Sampler::new(chart, policy.seed);
    let mut report = IdentityReport {
        pass: true,
        max_error: 0.0,
        witness: None,
        samples: 0,
    };
    for _ in 0..policy.budget() {
        let p = sampler.draw();
        if !policy.admits(&p) {
            continue;
        }
        let (a, b) = match pair(&p) {
            Ok(v) => v,
            Err(e) if e.is_domain() => continue,
            Err(e) => return Err(e.into()),
        };
        let scale = a.iter().chain(&b).fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = a.iter().zip(&b).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
        if diff > policy.rel_tol * scale + policy.abs_floor {
            report.pass = false;
        }
        let err = diff / (scale + policy.abs_floor / policy.rel_tol);
        if report.witness.is_none() || err > report.max_error {
            report.max_error = err;
            report.witness = Some(p);
        }
        report.samples += 1;
        if report.samples == policy.sample_count {
            return Ok(report);
        }
    }
    Err(Error::SamplingExhausted {
        wanted: policy.sample_count,
        attempts: policy.budget(),
    })
}

pub fn check_identity(
    lhs: &DifferentialForm,
    rhs: &DifferentialForm,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<IdentityReport> {
    if lhs.dimension() != rhs.dimension() {
        return Err(Error::DimensionMismatch {
            expected: lhs.dimension(),
            found: rhs.dimension(),
        });
    }
    if lhs.degree() != rhs.degree() {
        return Err(Error::Degree(format!(
            "identity between a {}-form and a {}-form",
            lhs.degree(),
            rhs.degree()
        )));
    }
    check_with(chart, policy, |p| Ok((lhs.evaluate(p)?, rhs.evaluate(p)?)))
}

pub fn check_scalar_identity(
    lhs: &ScalarExpr,
    rhs: &ScalarExpr,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<IdentityReport> {
    check_with(chart, policy, |p| Ok((vec![lhs.evaluate(p)?], vec![rhs.evaluate(p)?])))
}

/// `(Ha)(p)` by direct quadrature of the defining integral about `center`, independent of
/// the symbolic operator. Coefficients are dense in [`basis_tuples`] order.
pub fn quadrature_h_oracle_about(
    a: &DifferentialForm,
    center: &[f64],
    p: &[f64],
) -> std::result::Result<Vec<f64>, EvalError> {
    let n = a.dimension();
    let k = a.degree();
    if k == 0 {
        return Ok(vec![0.0]);
    }
    let keys = basis_tuples(n, k - 1);
    let mut out = vec![0.0; keys.len()];
    let d: Vec<f64> = p.iter().zip(center).map(|(x, c)| x - c).collect();
    let mut q = vec![0.0; n];
    for (key, c) in a.terms() {
        let est = quadrature::integrate_unit(|t| {
            for i in 0..n {
                q[i] = center[i] + t * d[i];
            }
            Ok::<_, EvalError>(t.powi(k as i32 - 1) * c.evaluate(&q)?)
        })?;
        if !est.within_tolerance() {
            return Err(EvalError::Quadrature {
                value: est.value,
                error: est.error,
            });
        }
        for (r, &i) in key.iter().enumerate() {
            let mut rest = key.clone();
            rest.remove(r);
            let slot = keys.binary_search(&rest).expect("basis tuple");
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            out[slot] += sign * d[i] * est.value;
        }
    }
    Ok(out)
}

pub fn quadrature_h_oracle(a: &DifferentialForm, chart: &Chart, p: &[f64]) -> Result<Vec<f64>> {
    Ok(quadrature_h_oracle_about(a, &chart.center_f64(), p)?)
}
