use super::{Atom, ScalarExpr};
use crate::quadrature;
use num::ToPrimitive;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("fractional power of negative value {0}")]
    NegativeBase(f64),
    #[error("negative power of zero")]
    Singular,
    #[error("no value supplied for variable index {0}")]
    MissingVariable(usize),
    #[error("quadrature error estimate {error:e} exceeds tolerance (value {value})")]
    Quadrature { value: f64, error: f64 },
    #[error("non-finite value")]
    NonFinite,
}

impl EvalError {
    /// True for errors meaning "this point is outside the expression's domain".
    pub fn is_domain(&self) -> bool {
        !matches!(self, EvalError::Quadrature { .. } | EvalError::MissingVariable(_))
    }
}

/// Exponent prepared for repeated evaluation.
#[derive(Debug, Clone, Copy)]
enum Power {
    One,
    Int(i32),
    Sqrt,
    Cbrt,
    Real(f64),
    Invalid,
}

impl Power {
    fn new(e: &super::Rational) -> Self {
        if e.is_integer() {
            return match e.to_integer().to_i32() {
                Some(1) => Power::One,
                Some(k) => Power::Int(k),
                None => Power::Invalid,
            };
        }
        match (e.numer().to_i64(), e.denom().to_i64()) {
            (Some(1), Some(2)) => Power::Sqrt,
            (Some(1), Some(3)) => Power::Cbrt,
            _ => e.to_f64().map_or(Power::Invalid, Power::Real),
        }
    }

    fn apply(self, base: f64) -> Result<f64, EvalError> {
        match self {
            Power::One => Ok(base),
            Power::Int(k) if base == 0.0 && k < 0 => Err(EvalError::Singular),
            Power::Int(k) => Ok(base.powi(k)),
            Power::Invalid => Err(EvalError::NonFinite),
            _ if base < 0.0 => Err(EvalError::NegativeBase(base)),
            Power::Sqrt => Ok(base.sqrt()),
            Power::Cbrt => Ok(base.cbrt()),
            Power::Real(e) if base == 0.0 && e < 0.0 => Err(EvalError::Singular),
            Power::Real(e) => Ok(base.powf(e)),
        }
    }
}

/// An expression with coefficients and exponents converted to machine numbers, so that
/// quadrature loops do not redo rational conversions at every node. Atoms shared by several
/// terms are evaluated once.
#[derive(Debug)]
struct Lowered {
    atoms: Vec<Node>,
    terms: Vec<(Option<f64>, Vec<(usize, Power)>)>,
}

#[derive(Debug)]
enum Node {
    Var(usize),
    Exp(Lowered),
    Ln(Lowered),
    Base(Lowered),
    Integral { var: usize, body: Lowered },
}

impl Lowered {
    fn new(e: &ScalarExpr) -> Self {
        let mut index: BTreeMap<&Atom, usize> = BTreeMap::new();
        let mut atoms = Vec::new();
        let terms = e
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .iter()
                    .map(|(a, p)| {
                        let slot = *index.entry(a).or_insert_with(|| {
                            atoms.push(Node::new(a));
                            atoms.len() - 1
                        });
                        (slot, Power::new(p))
                    })
                    .collect();
                (c.to_f64(), factors)
            })
            .collect();
        Self { atoms, terms }
    }

    fn eval(&self, env: &mut Vec<f64>) -> Result<f64, EvalError> {
        let values = self.atoms.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>, _>>()?;
        let mut sum = 0.0;
        for (c, factors) in &self.terms {
            let mut t = c.ok_or(EvalError::NonFinite)?;
            for (slot, p) in factors {
                t *= p.apply(values[*slot])?;
            }
            sum += t;
        }
        Ok(sum)
    }
}

impl Node {
    fn new(a: &Atom) -> Self {
        match a {
            Atom::Var(i) => Node::Var(*i),
            Atom::Exp(u) => Node::Exp(Lowered::new(u)),
            Atom::Ln(u) => Node::Ln(Lowered::new(u)),
            Atom::Base(s) => Node::Base(Lowered::new(s)),
            Atom::Integral { var, body } => Node::Integral {
                var: *var,
                body: Lowered::new(body),
            },
        }
    }

    fn eval(&self, env: &mut Vec<f64>) -> Result<f64, EvalError> {
        match self {
            Node::Var(i) => env.get(*i).copied().ok_or(EvalError::MissingVariable(*i)),
            Node::Exp(u) => Ok(u.eval(env)?.exp()),
            Node::Ln(u) => {
                let v = u.eval(env)?;
                if v <= 0.0 {
                    Err(EvalError::LogDomain(v))
                } else {
                    Ok(v.ln())
                }
            }
            Node::Base(s) => s.eval(env),
            Node::Integral { var, body } => {
                if env.len() <= *var {
                    env.resize(*var + 1, f64::NAN);
                }
                let saved = env[*var];
                let result = quadrature::integrate_unit(|t| {
                    env[*var] = t;
                    let v = body.eval(env)?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(EvalError::NonFinite)
                    }
                });
                env[*var] = saved;
                let estimate = result?;
                if estimate.within_tolerance() {
                    Ok(estimate.value)
                } else {
                    Err(EvalError::Quadrature {
                        value: estimate.value,
                        error: estimate.error,
                    })
                }
            }
        }
    }
}

impl ScalarExpr {
    /// Numeric value at `point` (coordinate `i` is `point[i]`).
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, EvalError> {
        let mut env = point.to_vec();
        let v = Lowered::new(self).eval(&mut env)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}
