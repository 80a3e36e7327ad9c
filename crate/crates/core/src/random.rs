//! Seeded generators of random polynomial data for property suites.

use crate::forms::{basis_tuples, DifferentialForm};
use crate::scalar_expr::{rational, Rational, ScalarExpr};
use rand::Rng;

/// Shape of generated polynomials.
#[derive(Debug, Clone, Copy)]
pub struct PolyShape {
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for PolyShape {
    fn default() -> Self {
        Self {
            max_degree: 3,
            max_terms: 3,
        }
    }
}

fn coefficient<R: Rng>(rng: &mut R) -> Rational {
    let mut p = rng.gen_range(-4..=3);
    if p >= 0 {
        p += 1;
    }
    rational(p, rng.gen_range(1..=2))
}

/// A nonzero polynomial in `n` variables.
pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, shape: PolyShape) -> ScalarExpr {
    loop {
        let mut out = ScalarExpr::zero();
        for _ in 0..rng.gen_range(1..=shape.max_terms) {
            let total = rng.gen_range(0..=shape.max_degree);
            let mut term = ScalarExpr::constant(coefficient(rng));
            for _ in 0..total {
                term = term * ScalarExpr::var(rng.gen_range(0..n));
            }
            out += term;
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// A nonzero `k`-form with polynomial coefficients; each basis slot is filled with
/// probability one half.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, k: usize, shape: PolyShape) -> DifferentialForm {
    let slots = basis_tuples(n, k);
    loop {
        let mut out = DifferentialForm::zero(n, k);
        for key in &slots {
            if rng.gen_bool(0.5) {
                out.add_term(key, random_polynomial(rng, n, shape)).expect("basis tuple");
            }
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// Coordinates `p/q` with `q ∈ 1..=4` and `|p/q| ≤ 1/2`.
pub fn random_center<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=4i64);
            rational(rng.gen_range(-q..=q), 2 * q)
        })
        .collect()
}
