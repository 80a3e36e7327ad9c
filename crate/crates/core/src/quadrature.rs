//! Gauss–Legendre rules on `[0, 1]`.
//!
//! Integrals are computed with the reference order and checked against the working order;
//! the difference serves as the error estimate.

use std::sync::OnceLock;

pub const WORKING_ORDER: usize = 32;
pub const REFERENCE_ORDER: usize = 64;
/// Largest accepted `|I₆₄ − I₃₂| / max(1, |I₆₄|)`.
pub const RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Nodes and weights of the `n`-point rule, mapped from `[-1, 1]` to `[0, 1]`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = 0.5 * (1.0 - z);
            nodes[n - 1 - i] = 0.5 * (1.0 + z);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn apply<E>(&self, mut f: impl FnMut(f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(*x)?;
        }
        Ok(sum)
    }
}

/// Returns `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

pub fn working_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::gauss_legendre(WORKING_ORDER))
}

pub fn reference_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::gauss_legendre(REFERENCE_ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn within_tolerance(&self) -> bool {
        self.error <= RELATIVE_TOLERANCE * self.value.abs().max(1.0)
    }
}

/// `∫₀¹ f(t) dt` with the reference rule, and its distance to the working rule.
pub fn integrate_unit<E>(mut f: impl FnMut(f64) -> Result<f64, E>) -> Result<Estimate, E> {
    let coarse = working_rule().apply(&mut f)?;
    let fine = reference_rule().apply(&mut f)?;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs(),
    })
}
