use super::{Atom, Monomial, Rational, ScalarExpr};
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Coordinate names for an `n`-dimensional chart: `x, y, z` up to three dimensions,
/// `x1 … xn` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarNames {
    n: usize,
}

impl VarNames {
    pub const MAX_DIMENSION: usize = 8;

    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn name(&self, i: usize) -> String {
        if self.n <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }

    pub fn basis(&self, i: usize) -> String {
        format!("d{}", self.name(i))
    }

    /// Resolves a coordinate name to its 0-based index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if self.n <= 3 {
            if let Some(i) = ["x", "y", "z"].iter().position(|v| *v == name) {
                return (i < self.n).then_some(i);
            }
        }
        let digits = name.strip_prefix('x')?;
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: usize = digits.parse().ok()?;
        (1..=self.n).contains(&k).then(|| k - 1)
    }
}

/// `p` or `p/q`.
pub fn rational_text(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn exponent_suffix(e: &Rational) -> String {
    if e.is_one() {
        String::new()
    } else if e.is_integer() {
        format!("^{}", e.numer())
    } else {
        format!("^({})", rational_text(e))
    }
}

struct Printer {
    names: VarNames,
    bound: Vec<(usize, String)>,
}

impl Printer {
    fn var_name(&self, i: usize) -> String {
        if let Some((_, name)) = self.bound.iter().rev().find(|(v, _)| *v == i) {
            return name.clone();
        }
        if i < self.names.dimension() {
            self.names.name(i)
        } else {
            format!("x{}", i + 1)
        }
    }

    fn atom(&mut self, a: &Atom) -> String {
        match a {
            Atom::Var(i) => self.var_name(*i),
            Atom::Exp(u) => format!("exp({})", self.expr(u)),
            Atom::Ln(u) => format!("ln({})", self.expr(u)),
            Atom::Base(s) => format!("({})", self.expr(s)),
            Atom::Integral { var, body } => {
                let name = match self.bound.len() {
                    0 => "t".to_string(),
                    d => format!("t{d}"),
                };
                self.bound.push((*var, name.clone()));
                let inner = self.expr(body);
                self.bound.pop();
                format!("int01({name}, {inner})")
            }
        }
    }

    fn term(&mut self, m: &Monomial, c: &Rational) -> String {
        let factors: Vec<String> = m
            .iter()
            .map(|(a, e)| format!("{}{}", self.atom(a), exponent_suffix(e)))
            .collect();
        if factors.is_empty() {
            return rational_text(c);
        }
        let joined = factors.join("*");
        if c.is_one() {
            joined
        } else if (-c).is_one() {
            format!("-{joined}")
        } else {
            format!("{}*{joined}", rational_text(c))
        }
    }

    fn expr(&mut self, e: &ScalarExpr) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = e.terms().collect();
        terms.sort_by(|a, b| print_order(a.0, b.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            if k == 0 {
                out.push_str(&self.term(m, c));
            } else if c.is_negative() {
                out.push_str(" - ");
                out.push_str(&self.term(m, &-c));
            } else {
                out.push_str(" + ");
                out.push_str(&self.term(m, c));
            }
        }
        out
    }
}

fn polynomial_degree(m: &Monomial) -> Rational {
    m.iter()
        .filter(|(a, _)| matches!(a, Atom::Var(_)))
        .fold(Rational::zero(), |acc, (_, e)| acc + e)
}

/// Graded order: higher total degree first, constants last.
fn print_order(a: &Monomial, b: &Monomial) -> Ordering {
    match (a.is_empty(), b.is_empty()) {
        (true, false) => return Ordering::Greater,
        (false, true) => return Ordering::Less,
        _ => {}
    }
    polynomial_degree(b)
        .cmp(&polynomial_degree(a))
        .then_with(|| a.cmp(b))
}

impl ScalarExpr {
    /// Text in the input grammar, naming coordinates for an `n`-dimensional chart.
    pub fn to_text(&self, n: usize) -> String {
        Printer {
            names: VarNames::new(n),
            bound: Vec::new(),
        }
        .expr(self)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.free_vars().iter().next_back().map_or(1, |m| m + 1);
        f.write_str(&self.to_text(n))
    }
}
