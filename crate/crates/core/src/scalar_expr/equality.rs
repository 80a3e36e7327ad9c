use super::ScalarExpr;
use crate::chart::{Chart, Sampler};
use crate::error::{Error, Result};

pub const EQUALITY_SAMPLES: usize = 32;
pub const EQUALITY_TOLERANCE: f64 = 1e-9;
const EQUALITY_SEED: u64 = 0x5eed_c0ef;
const ATTEMPTS_PER_SAMPLE: usize = 64;

/// Exact for (Laurent) polynomials; otherwise agreement to `1e-9·(1 + |a| + |b|)` at 32
/// points drawn uniformly from the chart box. Points outside either domain are redrawn.
pub fn probably_equal(a: &ScalarExpr, b: &ScalarExpr, chart: &Chart) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if a.is_laurent() && b.is_laurent() {
        return Ok(false);
    }
    let mut sampler = Sampler::new(chart, EQUALITY_SEED);
    let budget = EQUALITY_SAMPLES * ATTEMPTS_PER_SAMPLE;
    let mut accepted = 0;
    for _ in 0..budget {
        let p = sampler.draw();
        let (Ok(va), Ok(vb)) = (a.evaluate(&p), b.evaluate(&p)) else {
            continue;
        };
        if (va - vb).abs() > EQUALITY_TOLERANCE * (1.0 + va.abs() + vb.abs()) {
            return Ok(false);
        }
        accepted += 1;
        if accepted == EQUALITY_SAMPLES {
            return Ok(true);
        }
    }
    Err(Error::SamplingExhausted {
        wanted: EQUALITY_SAMPLES,
        attempts: budget,
    })
}

pub fn probably_zero(a: &ScalarExpr, chart: &Chart) -> Result<bool> {
    probably_equal(a, &ScalarExpr::zero(), chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::rational;

    #[test]
    fn examples() {
        let x = ScalarExpr::var(0);
        let origin = Chart::origin(2).unwrap();
        assert!(probably_equal(&x.powi(2), &(&x * &x), &origin).unwrap());
        let positive =
            Chart::with_uniform_box(vec![rational(1, 1); 2], rational(1, 10), rational(2, 1)).unwrap();
        assert!(probably_equal(&x.ln().exp(), &x, &positive).unwrap());
        let shifted = &x + &ScalarExpr::ratio(1, 1000);
        assert!(!probably_equal(&x, &shifted, &origin).unwrap());
    }

    #[test]
    fn exhausted_when_nowhere_defined() {
        let x = ScalarExpr::var(0);
        let e = (-(&x * &x) - ScalarExpr::one()).ln();
        let origin = Chart::origin(1).unwrap();
        assert!(matches!(
            probably_equal(&e, &x.exp(), &origin),
            Err(Error::SamplingExhausted { .. })
        ));
    }
}
