//! Star-shaped chart: dimension, homotopy center and the sampling box used for numeric checks.

use crate::error::{Error, Result};
use crate::scalar_expr::{Rational, ScalarExpr};
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The region is an axis-aligned box, assumed star-shaped with respect to `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    center: Vec<Rational>,
    bounds: Vec<(Rational, Rational)>,
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Chart {
    pub fn new(center: Vec<Rational>, bounds: Vec<(Rational, Rational)>) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidChart("dimension must be at least 1".into()));
        }
        if bounds.len() != center.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                found: bounds.len(),
            });
        }
        for (i, ((lo, hi), c)) in bounds.iter().zip(&center).enumerate() {
            if lo >= hi {
                return Err(Error::InvalidChart(format!("empty interval on axis {}", i + 1)));
            }
            if c < lo || c > hi {
                return Err(Error::InvalidChart(format!(
                    "center coordinate {} lies outside the box on axis {}",
                    c,
                    i + 1
                )));
            }
        }
        Ok(Self { center, bounds })
    }

    /// Center at the origin, box `[-1, 1]ⁿ`.
    pub fn origin(n: usize) -> Result<Self> {
        let one = Rational::one();
        Self::new(vec![Rational::zero(); n], vec![(-one.clone(), one); n])
    }

    /// Same box on every axis.
    pub fn with_uniform_box(center: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self> {
        let n = center.len();
        Self::new(center, vec![(lo, hi); n])
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    pub fn center_f64(&self) -> Vec<f64> {
        self.center.iter().map(to_f64).collect()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn bounds_f64(&self) -> Vec<(f64, f64)> {
        self.bounds.iter().map(|(l, h)| (to_f64(l), to_f64(h))).collect()
    }

    /// The point `lo + s·(hi − lo)` on every axis.
    pub fn box_point(&self, s: &Rational) -> Vec<Rational> {
        self.bounds.iter().map(|(l, h)| l + s * (h - l)).collect()
    }

    pub fn midpoint(&self) -> Vec<Rational> {
        self.box_point(&Rational::new(1.into(), 2.into()))
    }

    /// The same box around a different center.
    pub fn with_center(&self, center: Vec<Rational>) -> Result<Self> {
        Self::new(center, self.bounds.clone())
    }

    /// Checks that the expression only uses coordinates of this chart.
    pub fn check_expr(&self, e: &ScalarExpr) -> Result<()> {
        match e.free_vars().iter().next_back() {
            Some(&m) if m >= self.dimension() => Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: m + 1,
            }),
            _ => Ok(()),
        }
    }
}

/// Uniform points in the chart box from a seeded, portable generator.
pub(crate) struct Sampler {
    rng: ChaCha8Rng,
    bounds: Vec<(f64, f64)>,
}

impl Sampler {
    pub fn new(chart: &Chart, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bounds: chart.bounds_f64(),
        }
    }

    pub fn draw(&mut self) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| self.rng.gen_range(lo..hi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::rational;

    #[test]
    fn center_must_lie_in_box() {
        let c = Chart::with_uniform_box(vec![rational(3, 1)], rational(0, 1), rational(2, 1));
        assert!(matches!(c, Err(Error::InvalidChart(_))));
        assert!(Chart::origin(0).is_err());
        let c = Chart::with_uniform_box(vec![rational(0, 1); 2], rational(0, 1), rational(2, 1)).unwrap();
        assert_eq!(c.midpoint(), vec![rational(1, 1); 2]);
    }

    #[test]
    fn sampler_is_deterministic_and_in_box() {
        let c = Chart::origin(3).unwrap();
        let a: Vec<_> = {
            let mut s = Sampler::new(&c, 7);
            (0..5).map(|_| s.draw()).collect()
        };
        let mut s = Sampler::new(&c, 7);
        for p in &a {
            assert_eq!(&s.draw(), p);
            assert!(p.iter().all(|v| (-1.0..1.0).contains(v)));
        }
    }

    #[test]
    fn rejects_foreign_variables() {
        let c = Chart::origin(2).unwrap();
        assert!(c.check_expr(&ScalarExpr::var(1)).is_ok());
        assert!(c.check_expr(&ScalarExpr::var(2)).is_err());
    }
}
