//! Frobenius analysis of an antiexact 1-form `Ω`.
//!
//! Given a connection 1-form `Γ` with `e^g` its integrated factor, the torsion
//! `Σ = dΩ − Γ∧Ω` measures how far `Ω` is from being recursive, and
//!
//! `Ω = e^g (dh + η)`,  `h = H(e^{−g}Ω)`,  `η = Hd(e^{−g}Ω)`,  `Σ′ = e^g dη`.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::homotopy::{homotopy_about, is_antiexact};
use crate::scalar_expr::{Rational, ScalarExpr};
use crate::verify::{check_identity, IdentityReport, VerificationPolicy};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaChoice {
    Zero,
    /// `Γ` given directly; `g = H(Γ)`.
    Connection(DifferentialForm),
    /// `e^{−g} = μ`, so `Γ = dg = −μ⁻¹dμ`.
    IntegratingFactor(ScalarExpr),
}

impl GammaChoice {
    pub fn kind(&self) -> &'static str {
        match self {
            GammaChoice::Zero => "zero",
            GammaChoice::Connection(_) => "connection",
            GammaChoice::IntegratingFactor(_) => "integrating_factor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    Exact,
    GradientRecursive,
    Recursive,
    General,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::Exact => "Exact",
            CaseLabel::GradientRecursive => "GradientRecursive",
            CaseLabel::Recursive => "Recursive",
            CaseLabel::General => "General",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The recursive-case solution `η = H(θ∧dh)` and its diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursiveTerm {
    pub eta: DifferentialForm,
    /// Whether `dθ∧Ω = 0` holds on the chart.
    pub constraint_holds: bool,
    /// Whether `Ω = e^g(dh + H(θ∧dh))` holds at the sample points.
    pub reconstructs: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData {
    pub choice: GammaChoice,
    /// Center used by every homotopy operator below.
    pub center: Vec<Rational>,
    /// True when the chart center was singular for these forms and a box point was used.
    pub regularized: bool,
    /// `Γ`.
    pub connection: DifferentialForm,
    pub g: ScalarExpr,
    pub exp_g: ScalarExpr,
    pub exp_neg_g: ScalarExpr,
    /// `Σ = dΩ − Γ∧Ω`.
    pub sigma: DifferentialForm,
    /// `Σ′ = Σ + θ∧Ω`.
    pub sigma_prime: DifferentialForm,
    /// `θ = H(dΓ)`.
    pub theta: DifferentialForm,
    /// `Θ = dΓ`.
    pub curvature: DifferentialForm,
    /// `e^{−g}Ω`.
    pub alpha: DifferentialForm,
    pub h: ScalarExpr,
    pub eta: DifferentialForm,
    pub case_label: CaseLabel,
    pub recursive: Option<RecursiveTerm>,
    /// Check of `Ω = e^g(dh + η)`.
    pub reconstruction: IdentityReport,
}

impl FrobeniusData {
    /// `e^g(dh + η)`.
    pub fn reconstruct(&self) -> DifferentialForm {
        let n = self.alpha.dimension();
        let dh = DifferentialForm::scalar(n, self.h.clone()).exterior_derivative();
        (&dh + &self.eta).mul_scalar(&self.exp_g)
    }
}

/// `dΩ − Γ∧Ω`.
pub fn covariant_residual(omega: &DifferentialForm, gamma: &DifferentialForm) -> Result<DifferentialForm> {
    omega.exterior_derivative().checked_sub(&gamma.wedge(omega)?)
}

/// `dΓ`; the `Γ∧Γ` term vanishes for a scalar connection.
pub fn curvature(gamma: &DifferentialForm) -> DifferentialForm {
    gamma.exterior_derivative()
}

fn scalar_d(n: usize, f: &ScalarExpr) -> DifferentialForm {
    DifferentialForm::scalar(n, f.clone()).exterior_derivative()
}

/// `Γ` for a choice, without any homotopy data.
pub fn connection_of(choice: &GammaChoice, n: usize) -> Result<DifferentialForm> {
    match choice {
        GammaChoice::Zero => Ok(DifferentialForm::zero(n, 1)),
        GammaChoice::Connection(g) => {
            if g.degree() != 1 || g.dimension() != n {
                return Err(Error::InvalidGammaChoice(format!(
                    "connection must be a 1-form in dimension {n}"
                )));
            }
            Ok(g.clone())
        }
        GammaChoice::IntegratingFactor(mu) => {
            if mu.is_zero() {
                return Err(Error::InvalidGammaChoice("integrating factor is zero".into()));
            }
            Ok(scalar_d(n, mu).mul_scalar(&-mu.recip()))
        }
    }
}

fn regular_at(forms: &[&DifferentialForm], p: &[f64]) -> bool {
    forms.iter().all(|f| f.evaluate(p).is_ok())
}

fn center_candidates(chart: &Chart) -> Vec<Vec<Rational>> {
    let mut out = vec![chart.center().to_vec()];
    for (p, q) in [(1, 2), (3, 4), (1, 4)] {
        let c = chart.box_point(&crate::scalar_expr::rational(p, q));
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn to_f64(p: &[Rational]) -> Vec<f64> {
    use num::ToPrimitive;
    p.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

struct Potentials {
    g: ScalarExpr,
    exp_g: ScalarExpr,
    exp_neg_g: ScalarExpr,
    alpha: DifferentialForm,
    d_alpha: DifferentialForm,
}

fn potentials(
    omega: &DifferentialForm,
    choice: &GammaChoice,
    gamma: &DifferentialForm,
    center: &[Rational],
) -> Potentials {
    let (g, exp_g, exp_neg_g) = match choice {
        GammaChoice::Zero => (ScalarExpr::zero(), ScalarExpr::one(), ScalarExpr::one()),
        GammaChoice::IntegratingFactor(mu) => (-mu.ln(), mu.recip(), mu.clone()),
        GammaChoice::Connection(_) => {
            let g = homotopy_about(gamma, center).as_scalar().expect("0-form");
            let e = g.exp();
            let en = (-&g).exp();
            (g, e, en)
        }
    };
    let alpha = omega.mul_scalar(&exp_neg_g);
    let d_alpha = alpha.exterior_derivative();
    Potentials {
        g,
        exp_g,
        exp_neg_g,
        alpha,
        d_alpha,
    }
}

/// Torsion split and general solution for a nonzero antiexact `Ω`.
pub fn torsion_split(
    omega: &DifferentialForm,
    choice: &GammaChoice,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<FrobeniusData> {
    let n = chart.dimension();
    if omega.degree() != 1 || omega.dimension() != n {
        return Err(Error::NotAntiexact(format!("expected a 1-form in dimension {n}")));
    }
    if omega.is_zero() {
        return Err(Error::NotAntiexact("the form is zero".into()));
    }
    if !is_antiexact(omega, chart)? {
        return Err(Error::NotAntiexact("H(Omega) is not zero".into()));
    }
    let gamma = connection_of(choice, n)?;
    let big_theta = curvature(&gamma);

    let mut chosen = None;
    for center in center_candidates(chart) {
        let p = to_f64(&center);
        let mut needed = vec![&big_theta];
        if matches!(choice, GammaChoice::Connection(_)) {
            needed.push(&gamma);
        }
        if !regular_at(&needed, &p) {
            continue;
        }
        let pot = potentials(omega, choice, &gamma, &center);
        if regular_at(&[&pot.alpha, &pot.d_alpha], &p) {
            chosen = Some((center, pot));
            break;
        }
    }
    let Some((center, pot)) = chosen else {
        return Err(Error::SingularCenter(format!("the {} choice", choice.kind())));
    };
    let regularized = center.as_slice() != chart.center();

    let sigma = covariant_residual(omega, &gamma)?;
    let theta = homotopy_about(&big_theta, &center);
    let sigma_prime = &sigma + &theta.wedge(omega)?;
    let h = homotopy_about(&pot.alpha, &center).as_scalar().expect("0-form");
    let eta = homotopy_about(&pot.d_alpha, &center);

    let mut data = FrobeniusData {
        choice: choice.clone(),
        center,
        regularized,
        connection: gamma,
        g: pot.g,
        exp_g: pot.exp_g,
        exp_neg_g: pot.exp_neg_g,
        sigma,
        sigma_prime,
        theta,
        curvature: big_theta,
        alpha: pot.alpha,
        h,
        eta,
        case_label: CaseLabel::General,
        recursive: None,
        reconstruction: IdentityReport {
            pass: true,
            max_error: 0.0,
            witness: None,
            samples: 0,
        },
    };
    let report = check_identity(omega, &data.reconstruct(), chart, policy)?;
    if !report.pass {
        return Err(Error::ReconstructionFailure {
            max_error: report.max_error,
            witness: report.witness.unwrap_or_default(),
        });
    }
    data.reconstruction = report;
    data.case_label = classify(omega, &data, chart)?;
    Ok(data)
}

/// Exact if `Ω = 0`; with `Σ = 0`, gradient recursive when `θ = Γ − dHΓ = 0` and recursive
/// otherwise; general when `Σ ≠ 0`.
pub fn classify(omega: &DifferentialForm, data: &FrobeniusData, chart: &Chart) -> Result<CaseLabel> {
    if omega.probably_zero(chart)? {
        return Ok(CaseLabel::Exact);
    }
    if !data.sigma.probably_zero(chart)? {
        return Ok(CaseLabel::General);
    }
    if data.theta.probably_zero(chart)? {
        Ok(CaseLabel::GradientRecursive)
    } else {
        Ok(CaseLabel::Recursive)
    }
}

/// `Ω∧dΩ = 0`; always true below three dimensions.
pub fn integrability_test(omega: &DifferentialForm, chart: &Chart) -> Result<bool> {
    if omega.degree() != 1 {
        return Err(Error::Degree(format!(
            "integrability test needs a 1-form, got degree {}",
            omega.degree()
        )));
    }
    if omega.dimension() < 3 {
        return Ok(true);
    }
    omega.wedge(&omega.exterior_derivative())?.probably_zero(chart)
}

/// Recursive case (`Σ = 0`): attaches `η = H(θ∧dh)` with its constraint diagnostics.
pub fn recursive_solution(
    omega: &DifferentialForm,
    choice: &GammaChoice,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<FrobeniusData> {
    let gamma = connection_of(choice, chart.dimension())?;
    if !covariant_residual(omega, &gamma)?.probably_zero(chart)? {
        return Err(Error::NonzeroTorsion);
    }
    let mut data = torsion_split(omega, choice, chart, policy)?;
    attach_recursive_term(omega, &mut data, chart, policy)?;
    Ok(data)
}

pub(crate) fn attach_recursive_term(
    omega: &DifferentialForm,
    data: &mut FrobeniusData,
    chart: &Chart,
    policy: &VerificationPolicy,
) -> Result<()> {
    let n = chart.dimension();
    let dh = scalar_d(n, &data.h);
    let eta = homotopy_about(&data.theta.wedge(&dh)?, &data.center);
    let constraint_holds = data
        .theta
        .exterior_derivative()
        .wedge(omega)?
        .probably_zero(chart)?;
    let candidate = (&dh + &eta).mul_scalar(&data.exp_g);
    let reconstructs = check_identity(omega, &candidate, chart, policy)?.pass;
    data.recursive = Some(RecursiveTerm {
        eta,
        constraint_holds,
        reconstructs,
    });
    Ok(())
}

/// Integrating-factor candidates for the automatic search, in trial order.
pub fn auto_candidates(omega: &DifferentialForm) -> Vec<GammaChoice> {
    let n = omega.dimension();
    let mut factors: Vec<ScalarExpr> = Vec::new();
    for i in 0..n {
        for m in 1..=2 {
            factors.push(ScalarExpr::var(i).powi(m));
        }
    }
    let coefficients: Vec<&ScalarExpr> = omega.terms().map(|(_, c)| c).collect();
    for c in &coefficients {
        factors.push(c.recip());
    }
    if let Some(parts) = common_monomial(&coefficients) {
        factors.push(parts.recip());
    }
    for a in laurent_exponents(n, 3, -3, 2) {
        let mut m = ScalarExpr::one();
        for (i, e) in a.iter().enumerate() {
            if *e != 0 {
                m = &m * &ScalarExpr::var(i).powi(*e);
            }
        }
        factors.push(m);
    }
    let mut seen = BTreeSet::new();
    let mut out = vec![GammaChoice::Zero];
    for f in factors {
        if f.is_zero() || f.as_constant().is_some() {
            continue;
        }
        if seen.insert(f.clone()) {
            out.push(GammaChoice::IntegratingFactor(f));
        }
    }
    out
}

/// `content · lcm` over all coefficient terms, when every coefficient is Laurent.
fn common_monomial(coefficients: &[&ScalarExpr]) -> Option<ScalarExpr> {
    let mut sum_parts: Option<(Rational, Vec<(usize, i64)>)> = None;
    for c in coefficients {
        let (content, lcm) = c.monomial_parts()?;
        sum_parts = Some(match sum_parts {
            None => (content, lcm),
            Some((g, l)) => (
                crate::scalar_expr::rational_gcd(&g, &content),
                merge_lcm(&l, &lcm),
            ),
        });
    }
    let (content, lcm) = sum_parts?;
    let mut m = ScalarExpr::constant(content);
    for (i, e) in lcm {
        m = &m * &ScalarExpr::var(i).powi(e);
    }
    Some(m)
}

/// Componentwise maximum of sparse exponent vectors (absent entries are 0).
fn merge_lcm(a: &[(usize, i64)], b: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let get = |v: &[(usize, i64)], i: usize| v.iter().find(|(j, _)| *j == i).map_or(0, |(_, e)| *e);
    let vars: BTreeSet<usize> = a.iter().chain(b).map(|(i, _)| *i).collect();
    vars.into_iter()
        .map(|i| (i, get(a, i).max(get(b, i))))
        .filter(|(_, e)| *e != 0)
        .collect()
}

/// Exponent vectors with entries in `lo..=hi` and `Σ|aᵢ| ≤ budget`, excluding zero,
/// ordered by `Σ|aᵢ|` then lexicographically.
fn laurent_exponents(n: usize, budget: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, lo: i64, hi: i64, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in lo..=hi {
            if e.abs() <= budget {
                cur.push(e);
                rec(n, lo, hi, budget - e.abs(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, lo, hi, budget, &mut Vec::new(), &mut out);
    out.retain(|a| a.iter().any(|&e| e != 0));
    out.sort_by_key(|a| (a.iter().map(|e| e.abs()).sum::<i64>(), a.clone()));
    out
}

/// First candidate with vanishing torsion whose split succeeds; otherwise the `Γ = 0`
/// baseline.
pub fn auto_gamma(omega: &DifferentialForm, chart: &Chart, policy: &VerificationPolicy) -> Result<FrobeniusData> {
    for choice in auto_candidates(omega) {
        let gamma = connection_of(&choice, chart.dimension())?;
        if !covariant_residual(omega, &gamma)?.probably_zero(chart)? {
            continue;
        }
        match torsion_split(omega, &choice, chart, policy) {
            Ok(d) => return Ok(d),
            Err(Error::SingularCenter(_) | Error::ReconstructionFailure { .. } | Error::Eval(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    torsion_split(omega, &GammaChoice::Zero, chart, policy)
}
