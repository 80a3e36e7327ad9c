//! The linear homotopy operator
//!
//! `(Hω)(x) = ∫₀¹ t^{k−1} (i_K ω)(x₀ + t(x − x₀)) dt`,  `K = (x − x₀)ⁱ ∂ᵢ`,
//!
//! and the split `ω = dHω + Hdω` into exact and antiexact parts.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::scalar_expr::{Rational, ScalarExpr};
use num::Zero;

/// An index for the integration variable `t` that is unused by the coordinates and by any
/// variable already bound inside the coefficients.
fn fresh_variable(n: usize, a: &DifferentialForm) -> usize {
    a.terms()
        .filter_map(|(_, c)| c.max_var_index())
        .map(|m| m + 1)
        .max()
        .unwrap_or(0)
        .max(n)
}

/// `H` about an arbitrary center. On 0-forms the result is the zero 0-form.
pub fn homotopy_about(a: &DifferentialForm, center: &[Rational]) -> DifferentialForm {
    let n = a.dimension();
    let k = a.degree();
    assert_eq!(center.len(), n, "center dimension");
    if k == 0 || a.is_zero() {
        return DifferentialForm::zero(n, k.saturating_sub(1));
    }
    let t = fresh_variable(n, a);
    let tv = ScalarExpr::var(t);
    let pulled: Vec<ScalarExpr> = center
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let c = ScalarExpr::constant(c.clone());
            &c + &(&tv * &(ScalarExpr::var(i) - &c))
        })
        .collect();
    let displacement: Vec<ScalarExpr> = center
        .iter()
        .enumerate()
        .map(|(i, c)| ScalarExpr::var(i) - ScalarExpr::constant(c.clone()))
        .collect();
    let weight = tv.powi(k as i64 - 1);
    let mut out = DifferentialForm::zero(n, k - 1);
    for (key, c) in a.terms() {
        let body = &c.substitute(&|i| (i < n).then(|| pulled[i].clone())) * &weight;
        let radial = ScalarExpr::integral01(t, &body);
        for (r, &i) in key.iter().enumerate() {
            let mut rest = key.clone();
            rest.remove(r);
            let term = &radial * &displacement[i];
            let term = if r % 2 == 0 { term } else { -term };
            out.add_term(&rest, term).expect("index tuple below degree");
        }
    }
    out
}

/// `H` about the chart center.
pub fn homotopy(a: &DifferentialForm, chart: &Chart) -> Result<DifferentialForm> {
    check_dimension(a, chart)?;
    Ok(homotopy_about(a, chart.center()))
}

fn check_dimension(a: &DifferentialForm, chart: &Chart) -> Result<()> {
    if a.dimension() != chart.dimension() {
        return Err(Error::DimensionMismatch {
            expected: chart.dimension(),
            found: a.dimension(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricDecomposition {
    /// `dHω`; zero for 0-forms.
    pub exact_part: DifferentialForm,
    /// `Hdω`; for 0-forms `f − f(x₀)`.
    pub antiexact_part: DifferentialForm,
    /// `f(x₀)` for 0-forms, zero otherwise.
    pub constant_part: ScalarExpr,
}

impl GeometricDecomposition {
    pub fn reassemble(&self) -> DifferentialForm {
        let mut sum = &self.exact_part + &self.antiexact_part;
        if !self.constant_part.is_zero() {
            sum = &sum + &DifferentialForm::scalar(sum.dimension(), self.constant_part.clone());
        }
        sum
    }
}

pub fn geometric_decompose(a: &DifferentialForm, chart: &Chart) -> Result<GeometricDecomposition> {
    check_dimension(a, chart)?;
    let n = a.dimension();
    if a.degree() == 0 {
        let f = a.as_scalar().expect("0-form");
        let f0 = f.at_point(chart.center());
        return Ok(GeometricDecomposition {
            exact_part: DifferentialForm::zero(n, 0),
            antiexact_part: DifferentialForm::scalar(n, &f - &f0),
            constant_part: f0,
        });
    }
    let x0 = chart.center();
    Ok(GeometricDecomposition {
        exact_part: homotopy_about(a, x0).exterior_derivative(),
        antiexact_part: homotopy_about(&a.exterior_derivative(), x0),
        constant_part: ScalarExpr::zero(),
    })
}

/// `Hω = 0` and `ω(x₀) = 0`, both tested with `probably_equal`.
pub fn is_antiexact(a: &DifferentialForm, chart: &Chart) -> Result<bool> {
    check_dimension(a, chart)?;
    if !a.at_point(chart.center()).probably_zero(chart)? {
        return Ok(false);
    }
    homotopy(a, chart)?.probably_zero(chart)
}

/// Is the center-frozen value of `a` identically zero? Only constant coefficients are
/// compared, so this is exact whenever `at_point` fully evaluates.
pub(crate) fn vanishes_at(a: &DifferentialForm, p: &[Rational]) -> bool {
    a.at_point(p)
        .terms()
        .all(|(_, c)| c.as_constant().is_some_and(|v| v.is_zero()))
}
