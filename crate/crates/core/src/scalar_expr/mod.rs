//! Exact symbolic scalar functions.
//!
//! A [`ScalarExpr`] is stored in a single normal form: a finite sum of terms, each a
//! nonzero rational coefficient times a product of [`Atom`]s raised to nonzero rational
//! exponents. Atoms are coordinates, `exp(u)`, `ln(u)`, a non-natural power of a
//! compound base, or a `[0, 1]` integral over a bound variable.
//!
//! For polynomials (and Laurent polynomials) this representation is canonical, so two such
//! expressions are equal iff they compare equal structurally. Everything else is simplified on
//! a best-effort basis and compared numerically with [`probably_equal`].

mod equality;
mod eval;
mod polynomial;
mod print;

pub use equality::{probably_equal, probably_zero, EQUALITY_SAMPLES, EQUALITY_TOLERANCE};
pub use eval::EvalError;
pub use polynomial::{NotPolynomial, Polynomial};
pub use print::{rational_text, VarNames};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

pub type Rational = BigRational;

/// Builds a rational from a numerator/denominator pair.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A multiplicative building block of a term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// Coordinate `x_i` (0-based).
    Var(usize),
    Exp(Arc<ScalarExpr>),
    Ln(Arc<ScalarExpr>),
    /// A compound base whose exponent cannot be expanded (negative or fractional powers
    /// of sums, irrational roots of constants).
    Base(Arc<ScalarExpr>),
    /// `∫₀¹ body dt` where `t` is the variable `var`, bound inside `body`.
    Integral { var: usize, body: Arc<ScalarExpr> },
}

pub(crate) type Monomial = BTreeMap<Atom, Rational>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, Rational>,
}

fn accumulate(out: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match out.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn is_natural(q: &Rational) -> bool {
    q.is_integer() && q.is_positive()
}

/// Exact `c^q` for positive `c` when the root is rational.
fn rational_root(c: &Rational, q: &Rational) -> Option<Rational> {
    let b = q.denom().to_u32()?;
    let a = q.numer().to_i32()?;
    let root = |v: &BigInt| {
        let r = v.nth_root(b);
        (num::pow::pow(r.clone(), b as usize) == *v).then_some(r)
    };
    let n = root(c.numer())?;
    let d = root(c.denom())?;
    Some(Rational::new(n, d).pow(a))
}

enum MonoProduct {
    Simple(Monomial),
    Expr(ScalarExpr),
}

/// Restores the monomial invariants: at most one `exp` atom (exponent 1), no compound base
/// with a natural exponent.
fn normalize_monomial(m: Monomial) -> MonoProduct {
    let exp_count = m.keys().filter(|a| matches!(a, Atom::Exp(_))).count();
    let needs_fix = m.iter().any(|(a, e)| match a {
        Atom::Exp(_) => exp_count > 1 || !e.is_one(),
        Atom::Base(_) => is_natural(e),
        _ => false,
    });
    if !needs_fix {
        return MonoProduct::Simple(m);
    }
    let mut rest = Monomial::new();
    let mut exp_arg = ScalarExpr::zero();
    let mut expansions = Vec::new();
    for (a, e) in m {
        match a {
            Atom::Exp(u) => exp_arg += u.scale(&e),
            Atom::Base(s) if is_natural(&e) => expansions.push((s, e)),
            other => {
                rest.insert(other, e);
            }
        }
    }
    let mut out = ScalarExpr::from_monomial_raw(rest, Rational::one());
    for (s, e) in expansions {
        out = &out * &s.pow_nat(e.to_integer().to_u64().unwrap_or(u64::MAX));
    }
    if !exp_arg.is_zero() {
        out = &out * &exp_arg.exp();
    }
    MonoProduct::Expr(out)
}

impl ScalarExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        Self { terms }
    }

    pub fn integer(i: i64) -> Self {
        Self::constant(Rational::from_integer(i.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::constant(rational(p, q))
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(i: usize) -> Self {
        Self::from_atom(Atom::Var(i), Rational::one())
    }

    fn from_atom(a: Atom, e: Rational) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        let mut m = Monomial::new();
        m.insert(a, e);
        Self::from_monomial_raw(m, Rational::one())
    }

    fn from_monomial_raw(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, m, c);
        Self { terms }
    }

    fn from_monomial(m: Monomial, c: Rational) -> Self {
        match normalize_monomial(m) {
            MonoProduct::Simple(m) => Self::from_monomial_raw(m, c),
            MonoProduct::Expr(e) => e.scale(&c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value of a constant expression, `None` if any atom is present.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out, m.clone(), c.clone());
        }
        Self { terms: out }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = BTreeMap::new();
        let mut deferred = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                let mut merged = m1.clone();
                for (a, e) in m2 {
                    let slot = merged.entry(a.clone()).or_insert_with(Rational::zero);
                    *slot += e;
                    if slot.is_zero() {
                        merged.remove(a);
                    }
                }
                match normalize_monomial(merged) {
                    MonoProduct::Simple(m) => accumulate(&mut out, m, c),
                    MonoProduct::Expr(e) => deferred.push(e.scale(&c)),
                }
            }
        }
        let mut res = Self { terms: out };
        for e in deferred {
            res += e;
        }
        res
    }

    fn pow_nat(&self, k: u64) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(&Rational::from_integer(k.into()))
    }

    /// `self^q` for a rational exponent.
    ///
    /// Natural powers expand. Integer powers of a single term distribute over its atoms.
    /// Fractional powers distribute only where that cannot change the real value
    /// (e.g. `(x^2)^(1/2)` stays unexpanded); otherwise the base becomes an opaque atom.
    pub fn pow(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::one();
        }
        if is_natural(q) {
            return match q.to_integer().to_u64() {
                Some(k) => self.pow_nat(k),
                None => Self::from_atom(Atom::Base(Arc::new(self.clone())), q.clone()),
            };
        }
        if self.is_zero() {
            return Self::from_atom(Atom::Base(Arc::new(Self::zero())), q.clone());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if q.is_integer() {
                let Some(qi) = q.to_integer().to_i32() else {
                    return Self::from_atom(Atom::Base(Arc::new(self.clone())), q.clone());
                };
                let mut r = Self::constant(c.pow(qi));
                for (a, e) in m {
                    r = &r * &Self::atom_pow(a, &(e * q));
                }
                return r;
            }
            if m.is_empty() {
                if c.is_positive() {
                    if let Some(r) = rational_root(c, q) {
                        return Self::constant(r);
                    }
                }
                return Self::from_atom(Atom::Base(Arc::new(self.clone())), q.clone());
            }
            let even_denominator = (q.denom() % BigInt::from(2)).is_zero();
            let safe = c.is_positive()
                && m.iter().all(|(a, e)| {
                    matches!(a, Atom::Exp(_))
                        || !(even_denominator
                            && e.is_integer()
                            && (e.numer() % BigInt::from(2)).is_zero())
                });
            if safe {
                let mut r = Self::constant(c.clone()).pow(q);
                for (a, e) in m {
                    r = &r * &Self::atom_pow(a, &(e * q));
                }
                return r;
            }
        }
        Self::from_atom(Atom::Base(Arc::new(self.clone())), q.clone())
    }

    fn atom_pow(a: &Atom, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::one();
        }
        match a {
            Atom::Exp(u) => u.scale(r).exp(),
            Atom::Base(s) if is_natural(r) => s.pow(r),
            other => Self::from_atom(other.clone(), r.clone()),
        }
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if c.is_integer() && m.len() == 1 {
                if let Some((Atom::Ln(u), e)) = m.iter().next() {
                    if e.is_one() && u.is_syntactically_positive() {
                        return u.pow(c);
                    }
                }
            }
        }
        Self::from_atom(Atom::Exp(Arc::new(self.clone())), Rational::one())
    }

    pub fn ln(&self) -> Self {
        if self.is_one() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if c.is_one() && m.len() == 1 {
                if let Some((Atom::Exp(u), e)) = m.iter().next() {
                    if e.is_one() {
                        return (**u).clone();
                    }
                }
            }
        }
        Self::from_atom(Atom::Ln(Arc::new(self.clone())), Rational::one())
    }

    /// Positive coefficient with every atom an exponential or an even integer power.
    fn is_syntactically_positive(&self) -> bool {
        if self.terms.len() != 1 {
            return false;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        c.is_positive()
            && m.iter().all(|(a, e)| {
                matches!(a, Atom::Exp(_))
                    || (e.is_integer() && (e.numer() % BigInt::from(2)).is_zero())
            })
    }

    /// Rewrites `ln(c·Π aᵉ)` as `ln c + Σ e·ln a` wherever the coefficient is positive.
    pub fn expand_log(&self) -> Self {
        self.map_atoms(&|a, e| match a {
            Atom::Ln(u) => {
                let u = u.expand_log();
                let expanded = if u.terms.len() == 1 {
                    let (m, c) = u.terms.iter().next().unwrap();
                    if c.is_positive() {
                        let mut s = Self::constant(c.clone()).ln();
                        for (b, f) in m {
                            s += Self::from_atom(b.clone(), Rational::one()).ln().scale(f);
                        }
                        Some(s)
                    } else {
                        None
                    }
                } else {
                    None
                };
                expanded.unwrap_or_else(|| u.ln()).pow(e)
            }
            other => Self::from_atom(other.clone(), Rational::one()).pow(e),
        })
    }

    /// Rebuilds the expression with each atom power `a^e` replaced by `f(a, e)`.
    fn map_atoms(&self, f: &dyn Fn(&Atom, &Rational) -> Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (a, e) in m {
                t = &t * &f(a, e);
            }
            out += t;
        }
        out
    }

    /// `∫₀¹ body dt`, where `t` is the variable with index `var`.
    ///
    /// Terms in which `t` occurs only as a natural power are integrated exactly; the rest
    /// becomes a quadrature-backed integral atom with a canonically numbered bound variable.
    pub fn integral01(var: usize, body: &ScalarExpr) -> Self {
        let mut exact = BTreeMap::new();
        let mut rest = BTreeMap::new();
        for (m, c) in &body.terms {
            let free_elsewhere = m
                .iter()
                .any(|(a, _)| !matches!(a, Atom::Var(_)) && a.free_vars().contains(&var));
            let power = m.get(&Atom::Var(var)).cloned().unwrap_or_else(Rational::zero);
            if !free_elsewhere && power.is_integer() && !power.is_negative() {
                let mut reduced = m.clone();
                reduced.remove(&Atom::Var(var));
                accumulate(&mut exact, reduced, c / (power + Rational::one()));
            } else {
                accumulate(&mut rest, m.clone(), c.clone());
            }
        }
        let mut out = Self { terms: exact };
        if !rest.is_empty() {
            out += Self::integral_atom(var, Self { terms: rest });
        }
        out
    }

    fn integral_atom(var: usize, body: Self) -> Self {
        let mut free = body.free_vars();
        free.remove(&var);
        let target = free.iter().next_back().map_or(0, |m| m + 1);
        let body = if target == var {
            body
        } else {
            body.rename(var, target)
        };
        Self::from_atom(
            Atom::Integral {
                var: target,
                body: Arc::new(body),
            },
            Rational::one(),
        )
    }

    fn rename(&self, from: usize, to: usize) -> Self {
        self.substitute(&|i| (i == from).then(|| Self::var(to)))
    }

    /// Capture-avoiding substitution of free coordinates.
    pub fn substitute(&self, f: &dyn Fn(usize) -> Option<ScalarExpr>) -> Self {
        self.map_atoms(&|a, e| a.substitute(f).pow(e))
    }

    /// Partial derivative with respect to `x_i`.
    pub fn differentiate(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (a, e) in m {
                let da = a.derivative(i);
                if da.is_zero() {
                    continue;
                }
                let mut rest = m.clone();
                let lowered = e - Rational::one();
                if lowered.is_zero() {
                    rest.remove(a);
                } else {
                    rest.insert(a.clone(), lowered);
                }
                out += &Self::from_monomial(rest, c * e) * &da;
            }
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for a in m.keys() {
                s.extend(a.free_vars());
            }
        }
        s
    }

    /// Largest variable index occurring anywhere, bound variables included.
    pub fn max_var_index(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.keys())
            .filter_map(Atom::max_var_index)
            .max()
    }

    /// True when every atom is a coordinate raised to a natural power.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| {
            m.iter()
                .all(|(a, e)| matches!(a, Atom::Var(_)) && is_natural(e))
        })
    }

    /// True when every atom is a coordinate raised to an integer power.
    pub fn is_laurent(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().all(|(a, e)| matches!(a, Atom::Var(_)) && e.is_integer()))
    }

    pub fn contains_integral(&self) -> bool {
        self.terms
            .keys()
            .flat_map(|m| m.keys())
            .any(Atom::contains_integral)
    }

    /// Evaluates a constant-free-variable expression at `x = p` symbolically.
    pub fn at_point(&self, p: &[Rational]) -> Self {
        self.substitute(&|i| p.get(i).map(|c| Self::constant(c.clone())))
    }

    /// For a Laurent polynomial: the gcd of its absolute coefficients and the componentwise
    /// maximum of its term exponents (absent variables count as exponent 0).
    pub(crate) fn monomial_parts(&self) -> Option<(Rational, Vec<(usize, i64)>)> {
        if self.is_zero() || !self.is_laurent() {
            return None;
        }
        let mut content: Option<Rational> = None;
        let mut vars = BTreeSet::new();
        for m in self.terms.keys() {
            for a in m.keys() {
                if let Atom::Var(i) = a {
                    vars.insert(*i);
                }
            }
        }
        let mut lcm: BTreeMap<usize, i64> = vars.iter().map(|&i| (i, i64::MIN)).collect();
        for (m, c) in &self.terms {
            let c = c.abs();
            content = Some(match content {
                None => c,
                Some(g) => rational_gcd(&g, &c),
            });
            for (&i, slot) in lcm.iter_mut() {
                let e = match m.get(&Atom::Var(i)) {
                    Some(e) => e.to_integer().to_i64()?,
                    None => 0,
                };
                *slot = (*slot).max(e);
            }
        }
        lcm.retain(|_, e| *e != 0);
        Some((content?, lcm.into_iter().collect()))
    }
}

pub(crate) fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num::Integer;
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rational::new(num, den)
}

impl Atom {
    fn free_vars(&self) -> BTreeSet<usize> {
        match self {
            Atom::Var(i) => BTreeSet::from([*i]),
            Atom::Exp(u) | Atom::Ln(u) | Atom::Base(u) => u.free_vars(),
            Atom::Integral { var, body } => {
                let mut s = body.free_vars();
                s.remove(var);
                s
            }
        }
    }

    fn max_var_index(&self) -> Option<usize> {
        match self {
            Atom::Var(i) => Some(*i),
            Atom::Exp(u) | Atom::Ln(u) | Atom::Base(u) => u.max_var_index(),
            Atom::Integral { var, body } => Some(body.max_var_index().map_or(*var, |m| m.max(*var))),
        }
    }

    fn contains_integral(&self) -> bool {
        match self {
            Atom::Var(_) => false,
            Atom::Exp(u) | Atom::Ln(u) | Atom::Base(u) => u.contains_integral(),
            Atom::Integral { .. } => true,
        }
    }

    /// The value of this atom after substitution (to the first power).
    fn substitute(&self, f: &dyn Fn(usize) -> Option<ScalarExpr>) -> ScalarExpr {
        match self {
            Atom::Var(i) => f(*i).unwrap_or_else(|| ScalarExpr::var(*i)),
            Atom::Exp(u) => u.substitute(f).exp(),
            Atom::Ln(u) => u.substitute(f).ln(),
            Atom::Base(s) => s.substitute(f),
            Atom::Integral { var, body } => {
                let free = self.free_vars();
                let mut replacement_vars = BTreeSet::new();
                for &i in &free {
                    if let Some(r) = f(i) {
                        replacement_vars.extend(r.free_vars());
                    }
                }
                let (var, body) = if replacement_vars.contains(var) {
                    let fresh = body
                        .max_var_index()
                        .into_iter()
                        .chain(replacement_vars.iter().copied())
                        .chain(std::iter::once(*var))
                        .max()
                        .unwrap()
                        + 1;
                    (fresh, body.rename(*var, fresh))
                } else {
                    (*var, (**body).clone())
                };
                let inner = body.substitute(&|i| if free.contains(&i) { f(i) } else { None });
                ScalarExpr::integral01(var, &inner)
            }
        }
    }

    fn derivative(&self, i: usize) -> ScalarExpr {
        match self {
            Atom::Var(j) => {
                if *j == i {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                }
            }
            Atom::Exp(u) => {
                let du = u.differentiate(i);
                if du.is_zero() {
                    return du;
                }
                &ScalarExpr::from_atom(self.clone(), Rational::one()) * &du
            }
            Atom::Ln(u) => {
                let du = u.differentiate(i);
                if du.is_zero() {
                    return du;
                }
                &du * &u.recip()
            }
            Atom::Base(s) => s.differentiate(i),
            Atom::Integral { var, body } => {
                if *var == i {
                    ScalarExpr::zero()
                } else {
                    ScalarExpr::integral01(*var, &body.differentiate(i))
                }
            }
        }
    }
}

impl From<Rational> for ScalarExpr {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for ScalarExpr {
    fn from(c: i64) -> Self {
        Self::integer(c)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$imp(self, rhs)
            }
        }
        impl $tr<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$imp(&self, &rhs)
            }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$imp(&self, rhs)
            }
        }
        impl $tr<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$imp(self, &rhs)
            }
        }
    };
}

impl ScalarExpr {
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&-other)
    }
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scale(&-Rational::one())
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl AddAssign for ScalarExpr {
    fn add_assign(&mut self, rhs: ScalarExpr) {
        for (m, c) in rhs.terms {
            accumulate(&mut self.terms, m, c);
        }
    }
}
