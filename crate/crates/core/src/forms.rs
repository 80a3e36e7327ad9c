//! Differential forms on a coordinate chart of ℝⁿ, vector fields and metrics.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar_expr::{probably_equal, EvalError, Rational, ScalarExpr};
use num::One;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

/// Strictly increasing 0-based index tuple `(i₁ < … < i_k)`.
pub type IndexTuple = Vec<usize>;

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn basis_tuples(n: usize, k: usize) -> Vec<IndexTuple> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Sorts `indices`, returning the permutation sign, or `None` on a repeated index.
fn sort_with_sign(indices: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(negative)
}

/// A degree-`k` differential form `Σ c_I dx^I` on ℝⁿ.
///
/// Terms are keyed by strictly increasing index tuples and structurally zero coefficients
/// are pruned, so equal polynomial forms compare equal. Degrees above `n` are allowed and
/// always hold the zero form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    n: usize,
    k: usize,
    terms: BTreeMap<IndexTuple, ScalarExpr>,
}

impl DifferentialForm {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, f: ScalarExpr) -> Self {
        let mut out = Self::zero(n, 0);
        out.accumulate(Vec::new(), f);
        out
    }

    /// The basis 1-form `dx_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i < n, "basis index {i} out of range for dimension {n}");
        let mut out = Self::zero(n, 1);
        out.accumulate(vec![i], ScalarExpr::one());
        out
    }

    /// `coefficient · dx_{i₁} ∧ … ∧ dx_{i_k}` for indices in any order.
    pub fn monomial(n: usize, indices: &[usize], coefficient: ScalarExpr) -> Result<Self> {
        let mut out = Self::zero(n, indices.len());
        out.add_term(indices, coefficient)?;
        Ok(out)
    }

    /// Builds a form from 1-forms' worth of coefficients: `Σ cᵢ dxᵢ`.
    pub fn one_form(coefficients: Vec<ScalarExpr>) -> Self {
        let n = coefficients.len();
        let mut out = Self::zero(n, 1);
        for (i, c) in coefficients.into_iter().enumerate() {
            out.accumulate(vec![i], c);
        }
        out
    }

    fn accumulate(&mut self, key: IndexTuple, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c · dx^indices`, reordering the indices with the matching sign.
    pub fn add_term(&mut self, indices: &[usize], c: ScalarExpr) -> Result<()> {
        if indices.len() != self.k {
            return Err(Error::Degree(format!(
                "term of degree {} added to a {}-form",
                indices.len(),
                self.k
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: bad + 1,
            });
        }
        let mut key = indices.to_vec();
        match sort_with_sign(&mut key) {
            None => {}
            Some(false) => self.accumulate(key, c),
            Some(true) => self.accumulate(key, -c),
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexTuple, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, indices: &[usize]) -> ScalarExpr {
        self.terms.get(indices).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    /// The coefficient of a 0-form.
    pub fn as_scalar(&self) -> Option<ScalarExpr> {
        (self.k == 0).then(|| self.coefficient(&[]))
    }

    /// Coefficients of a 1-form as a dense vector.
    pub fn components(&self) -> Option<Vec<ScalarExpr>> {
        (self.k == 1).then(|| (0..self.n).map(|i| self.coefficient(&[i])).collect())
    }

    pub fn map_coefficients(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (key, c) in &self.terms {
            out.accumulate(key.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|e| e.scale(c))
    }

    /// Multiplication by a scalar function.
    pub fn mul_scalar(&self, f: &ScalarExpr) -> Self {
        self.map_coefficients(|e| e * f)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(ScalarExpr::is_polynomial)
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.values().all(ScalarExpr::is_laurent)
    }

    /// The form with coefficients frozen at `p` (a constant-coefficient form).
    pub fn at_point(&self, p: &[Rational]) -> Self {
        self.map_coefficients(|c| c.at_point(p))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.k != other.k {
            return Err(Error::Degree(format!(
                "cannot combine a {}-form with a {}-form",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.accumulate(key.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = Self::zero(self.n, self.k + other.k);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let mut key: Vec<usize> = i.iter().chain(j).copied().collect();
                match sort_with_sign(&mut key) {
                    None => {}
                    Some(false) => out.accumulate(key, a * b),
                    Some(true) => out.accumulate(key, -(a * b)),
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative. On top-degree forms the result is the zero `(n+1)`-form.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero(self.n, self.k + 1);
        for (key, c) in &self.terms {
            for i in 0..self.n {
                if key.contains(&i) {
                    continue;
                }
                let dc = c.differentiate(i);
                if dc.is_zero() {
                    continue;
                }
                let pos = key.iter().filter(|&&j| j < i).count();
                let mut k2 = key.clone();
                k2.insert(pos, i);
                out.accumulate(k2, if pos % 2 == 0 { dc } else { -dc });
            }
        }
        out
    }

    /// Interior product `i_v`.
    pub fn interior(&self, v: &VectorField) -> Result<Self> {
        if self.k == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        if v.dimension() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.dimension(),
            });
        }
        let mut out = Self::zero(self.n, self.k - 1);
        for (key, c) in &self.terms {
            for (r, &i) in key.iter().enumerate() {
                let vi = v.component(i);
                if vi.is_zero() {
                    continue;
                }
                let mut rest = key.clone();
                rest.remove(r);
                let t = c * vi;
                out.accumulate(rest, if r % 2 == 0 { t } else { -t });
            }
        }
        Ok(out)
    }

    /// Coefficients at `p`, densely in [`basis_tuples`] order.
    pub fn evaluate(&self, p: &[f64]) -> std::result::Result<Vec<f64>, EvalError> {
        basis_tuples(self.n, self.k)
            .iter()
            .map(|key| match self.terms.get(key) {
                Some(c) => c.evaluate(p),
                None => Ok(0.0),
            })
            .collect()
    }

    /// Coefficientwise [`probably_equal`].
    pub fn probably_equal(&self, other: &Self, chart: &Chart) -> Result<bool> {
        self.check_same_shape(other)?;
        let zero = ScalarExpr::zero();
        for key in self.terms.keys().chain(other.terms.keys()) {
            let a = self.terms.get(key).unwrap_or(&zero);
            let b = other.terms.get(key).unwrap_or(&zero);
            if !probably_equal(a, b, chart)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn probably_zero(&self, chart: &Chart) -> Result<bool> {
        self.probably_equal(&Self::zero(self.n, self.k), chart)
    }
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;

    /// # Panics
    /// On dimension or degree mismatch; see [`DifferentialForm::checked_add`].
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.checked_add(rhs).expect("form addition")
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;

    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.checked_sub(rhs).expect("form subtraction")
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;

    fn add(self, rhs: DifferentialForm) -> DifferentialForm {
        &self + &rhs
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;

    fn sub(self, rhs: DifferentialForm) -> DifferentialForm {
        &self - &rhs
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;

    fn neg(self) -> DifferentialForm {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;

    fn neg(self) -> DifferentialForm {
        -&self
    }
}

/// Contravariant vector field `Σ vⁱ ∂ᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    components: Vec<ScalarExpr>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarExpr>) -> Self {
        Self { components }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![ScalarExpr::zero(); n])
    }

    /// The radial field `(x − x₀)ⁱ ∂ᵢ`.
    pub fn radial(center: &[Rational]) -> Self {
        Self::new(
            center
                .iter()
                .enumerate()
                .map(|(i, c)| ScalarExpr::var(i) - ScalarExpr::constant(c.clone()))
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &ScalarExpr {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarExpr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        Self::new(self.components.iter().map(f).collect())
    }

    pub fn evaluate(&self, p: &[f64]) -> std::result::Result<Vec<f64>, EvalError> {
        self.components.iter().map(|c| c.evaluate(p)).collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum MetricKind {
    Euclidean,
    Diagonal,
    General,
}

/// Symmetric `n×n` matrix of scalar functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    kind: MetricKind,
    entries: Vec<Vec<ScalarExpr>>,
}

const SINGULAR_DETERMINANT: f64 = 1e-12;

impl Metric {
    pub fn euclidean(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { ScalarExpr::one() } else { ScalarExpr::zero() })
                    .collect()
            })
            .collect();
        Self {
            kind: MetricKind::Euclidean,
            entries,
        }
    }

    pub fn diagonal(d: Vec<ScalarExpr>) -> Self {
        let n = d.len();
        let mut entries = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, e) in d.into_iter().enumerate() {
            entries[i][i] = e;
        }
        Self::classify(entries)
    }

    /// A full matrix. Symmetry is checked structurally here and numerically by
    /// [`Metric::validate`].
    pub fn from_matrix(rows: Vec<Vec<ScalarExpr>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidChart("empty metric".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (&rows[i][j], &rows[j][i]);
                if a != b && a.is_laurent() && b.is_laurent() {
                    return Err(Error::AsymmetricMetric(i, j));
                }
            }
        }
        Ok(Self::classify(rows))
    }

    fn classify(entries: Vec<Vec<ScalarExpr>>) -> Self {
        let n = entries.len();
        let off_zero = (0..n).all(|i| (0..n).all(|j| i == j || entries[i][j].is_zero()));
        let kind = if !off_zero {
            MetricKind::General
        } else if (0..n).all(|i| entries[i][i].is_one()) {
            MetricKind::Euclidean
        } else {
            MetricKind::Diagonal
        };
        Self { kind, entries }
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn is_euclidean(&self) -> bool {
        self.kind == MetricKind::Euclidean
    }

    /// Includes the Euclidean metric.
    pub fn is_diagonal(&self) -> bool {
        self.kind != MetricKind::General
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.entries[i][j]
    }

    pub fn determinant(&self) -> ScalarExpr {
        determinant(&self.entries)
    }

    /// Symbolic inverse matrix (adjugate over determinant).
    pub fn inverse(&self) -> Vec<Vec<ScalarExpr>> {
        let n = self.dimension();
        match self.kind {
            MetricKind::Euclidean => self.entries.clone(),
            MetricKind::Diagonal => {
                let mut out = vec![vec![ScalarExpr::zero(); n]; n];
                for (i, row) in out.iter_mut().enumerate() {
                    row[i] = self.entries[i][i].recip();
                }
                out
            }
            MetricKind::General => {
                let inv_det = self.determinant().recip();
                let mut out = vec![vec![ScalarExpr::zero(); n]; n];
                for (i, row) in out.iter_mut().enumerate() {
                    for (j, slot) in row.iter_mut().enumerate() {
                        // (A⁻¹)ᵢⱼ = (−1)^{i+j} M_{ji} / det
                        let minor = minor(&self.entries, j, i);
                        let c = determinant(&minor);
                        let c = if (i + j) % 2 == 0 { c } else { -c };
                        *slot = &c * &inv_det;
                    }
                }
                out
            }
        }
    }

    /// Checks symmetry on the chart and invertibility at the given points.
    pub fn validate(&self, chart: &Chart, points: &[Vec<f64>]) -> Result<()> {
        let n = self.dimension();
        if n != chart.dimension() {
            return Err(Error::DimensionMismatch {
                expected: chart.dimension(),
                found: n,
            });
        }
        if self.kind == MetricKind::Euclidean {
            return Ok(());
        }
        for i in 0..n {
            for j in 0..i {
                if !probably_equal(&self.entries[i][j], &self.entries[j][i], chart)? {
                    return Err(Error::AsymmetricMetric(i, j));
                }
            }
        }
        let det = self.determinant();
        for p in points {
            let d = det.evaluate(p)?;
            if d.abs() < SINGULAR_DETERMINANT {
                return Err(Error::SingularMetric {
                    point: p.clone(),
                    determinant: d,
                });
            }
        }
        Ok(())
    }
}

fn minor(m: &[Vec<ScalarExpr>], row: usize, col: usize) -> Vec<Vec<ScalarExpr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first row.
fn determinant(m: &[Vec<ScalarExpr>]) -> ScalarExpr {
    match m.len() {
        0 => ScalarExpr::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut out = ScalarExpr::zero();
            for (j, e) in m[0].iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let t = e * &determinant(&minor(m, 0, j));
                out += if j % 2 == 0 { t } else { -t };
            }
            out
        }
    }
}

/// Lowers an index: `ω_i = g_ij F^j`.
pub fn flat(f: &VectorField, g: &Metric) -> Result<DifferentialForm> {
    let n = f.dimension();
    if g.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.dimension(),
        });
    }
    if g.is_euclidean() {
        return Ok(DifferentialForm::one_form(f.components().to_vec()));
    }
    let coefficients = (0..n)
        .map(|i| {
            let mut s = ScalarExpr::zero();
            for j in 0..n {
                s += g.entry(i, j) * f.component(j);
            }
            s
        })
        .collect();
    Ok(DifferentialForm::one_form(coefficients))
}

/// Raises an index: `F^i = g^{ij} ω_j`.
pub fn sharp(a: &DifferentialForm, g: &Metric) -> Result<VectorField> {
    let Some(w) = a.components() else {
        return Err(Error::Degree(format!("sharp of a {}-form", a.degree())));
    };
    let n = w.len();
    if g.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.dimension(),
        });
    }
    if g.is_euclidean() {
        return Ok(VectorField::new(w));
    }
    let inv = g.inverse();
    Ok(VectorField::new(
        (0..n)
            .map(|i| {
                let mut s = ScalarExpr::zero();
                for (j, wj) in w.iter().enumerate() {
                    s += &inv[i][j] * wj;
                }
                s
            })
            .collect(),
    ))
}

/// Sign `(−1)^{ab}` used by graded commutativity.
pub fn graded_sign(a: usize, b: usize) -> Rational {
    if a * b % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
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
    fn dx() -> DifferentialForm {
        DifferentialForm::basis(2, 0)
    }
    fn dy() -> DifferentialForm {
        DifferentialForm::basis(2, 1)
    }

    #[test]
    fn basis_wedges() {
        let dxdy = dx().wedge(&dy()).unwrap();
        assert_eq!(dxdy.coefficient(&[0, 1]), ScalarExpr::one());
        assert_eq!(dy().wedge(&dx()).unwrap(), -&dxdy);
        assert!(dx().wedge(&dx()).unwrap().is_zero());
        let m = DifferentialForm::monomial(3, &[2, 0, 1], ScalarExpr::one()).unwrap();
        assert_eq!(m.coefficient(&[0, 1, 2]), ScalarExpr::one());
        assert!(DifferentialForm::monomial(3, &[1, 1], ScalarExpr::one()).unwrap().is_zero());
    }

    #[test]
    fn example_two_connection_wedge() {
        let gamma = dx().mul_scalar(&-x().recip());
        let omega = &dy().mul_scalar(&x()) - &dx().mul_scalar(&y());
        let w = gamma.wedge(&omega).unwrap();
        assert_eq!(w, -&dx().wedge(&dy()).unwrap());
    }

    #[test]
    fn derivatives_of_example_forms() {
        let omega = &dy().mul_scalar(&x()) - &dx().mul_scalar(&y());
        let d = omega.exterior_derivative();
        assert_eq!(d.coefficient(&[0, 1]), ScalarExpr::integer(2));
        let d = dx().mul_scalar(&y().powi(2)).exterior_derivative();
        assert_eq!(d.coefficient(&[0, 1]), y().scale(&rational(-2, 1)));
        let f = DifferentialForm::scalar(2, x().powi(2).scale(&rational(1, 2)));
        assert_eq!(f.exterior_derivative(), dx().mul_scalar(&x()));
        let top = dx().wedge(&dy()).unwrap().mul_scalar(&x());
        let d = top.exterior_derivative();
        assert!(d.is_zero());
        assert_eq!(d.degree(), 3);
    }

    #[test]
    fn interior_products() {
        let k = VectorField::new(vec![x(), y()]);
        let dxdy = dx().wedge(&dy()).unwrap();
        let r = dxdy.interior(&k).unwrap();
        assert_eq!(r, &dy().mul_scalar(&x()) - &dx().mul_scalar(&y()));
        let a = dx().mul_scalar(&(x() + y().powi(2)));
        let r = a.interior(&k).unwrap();
        assert_eq!(r.as_scalar().unwrap(), (x() + y().powi(2)) * x());
        assert!(DifferentialForm::scalar(2, x()).interior(&k).is_err());
    }

    #[test]
    fn musical_isomorphisms() {
        let e = Metric::euclidean(2);
        let f = VectorField::new(vec![x(), -y()]);
        assert_eq!(flat(&f, &e).unwrap(), &dx().mul_scalar(&x()) - &dy().mul_scalar(&y()));
        let s = sharp(&dx().mul_scalar(&x()), &e).unwrap();
        assert_eq!(s, VectorField::new(vec![x(), ScalarExpr::zero()]));
        let g = Metric::diagonal(vec![x().powi(2), ScalarExpr::one()]);
        let unit = VectorField::new(vec![ScalarExpr::one(), ScalarExpr::zero()]);
        let w = flat(&unit, &g).unwrap();
        assert_eq!(w, dx().mul_scalar(&x().powi(2)));
        assert_eq!(sharp(&w, &g).unwrap(), unit);
    }

    #[test]
    fn general_metric_inverse() {
        let m = Metric::from_matrix(vec![
            vec![ScalarExpr::integer(2), ScalarExpr::one()],
            vec![ScalarExpr::one(), ScalarExpr::integer(3)],
        ])
        .unwrap();
        assert_eq!(m.determinant(), ScalarExpr::integer(5));
        let f = VectorField::new(vec![x(), y()]);
        assert_eq!(sharp(&flat(&f, &m).unwrap(), &m).unwrap(), f);
        let bad = Metric::from_matrix(vec![
            vec![ScalarExpr::one(), x()],
            vec![y(), ScalarExpr::one()],
        ]);
        assert!(matches!(bad, Err(Error::AsymmetricMetric(1, 0))));
    }

    #[test]
    fn singular_metric_detected() {
        let chart = Chart::origin(2).unwrap();
        let g = Metric::diagonal(vec![x(), ScalarExpr::one()]);
        let err = g.validate(&chart, &[vec![0.0, 0.5]]).unwrap_err();
        assert!(matches!(err, Error::SingularMetric { .. }));
        assert!(g.validate(&chart, &[vec![0.5, 0.5]]).is_ok());
    }

    #[test]
    fn tuples() {
        assert_eq!(basis_tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(basis_tuples(2, 0), vec![Vec::<usize>::new()]);
        assert!(basis_tuples(2, 3).is_empty());
    }
}
