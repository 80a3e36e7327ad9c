use super::{Atom, Rational, ScalarExpr};
use num::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Exponent vector in sparse form: `(variable, power)` pairs sorted by variable, powers ≥ 1.
pub type Exponents = Vec<(usize, u32)>;

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("expression is not a polynomial")]
pub struct NotPolynomial;

impl Polynomial {
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[(usize, u32)]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, e: Exponents, c: Rational) {
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    /// Schoolbook product, independent of [`ScalarExpr`] multiplication.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut merged: BTreeMap<usize, u32> = e1.iter().copied().collect();
                for &(v, p) in e2 {
                    *merged.entry(v).or_insert(0) += p;
                }
                out.insert(merged.into_iter().collect(), c1 * c2);
            }
        }
        out
    }

    pub fn to_expr(&self) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (e, c) in &self.terms {
            let mut t = ScalarExpr::constant(c.clone());
            for &(v, p) in e {
                t = t * ScalarExpr::var(v).powi(p as i64);
            }
            out += t;
        }
        out
    }
}

impl ScalarExpr {
    /// The canonical sparse monomial map, or [`NotPolynomial`] if any non-polynomial atom
    /// (negative or fractional power, `exp`, `ln`, integral) is present.
    pub fn normalize_polynomial(&self) -> Result<Polynomial, NotPolynomial> {
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut e = Exponents::new();
            for (a, p) in m {
                match a {
                    Atom::Var(v) if p.is_integer() && *p >= Rational::one() => {
                        e.push((*v, p.to_integer().to_u32().ok_or(NotPolynomial)?));
                    }
                    _ => return Err(NotPolynomial),
                }
            }
            terms.insert(e, c.clone());
        }
        Ok(Polynomial { terms })
    }
}
