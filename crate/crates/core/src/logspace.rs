//! Log-domain accumulation.
//!
//! Boltzmann weights `exp(βJ m m')` at low temperature span hundreds of orders
//! of magnitude, so every builder sums weights as logarithms.

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(x_i)`; `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Streaming log-sum-exp.
///
/// Keeps a running maximum and a sum of `exp(x - max)`, rescaling when a new
/// maximum arrives. When every term is `0.0` the sum counts terms exactly, so
/// multiplicities at infinite temperature come out as exact integers.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    max: f64,
    sum: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub const fn new() -> Self {
        Self { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_counts_exactly_at_zero_weight() {
        let mut acc = LogAccumulator::new();
        for _ in 0..6 {
            acc.push(0.0);
        }
        assert_eq!(acc.value(), 6f64.ln());
    }

    #[test]
    fn accumulator_matches_batch() {
        let xs = [-700.0, 3.0, 800.0, 799.5, -1.0];
        let mut acc = LogAccumulator::new();
        xs.iter().for_each(|&x| acc.push(x));
        assert!((acc.value() - log_sum_exp(&xs)).abs() < 1e-12);
        let pairwise = xs.iter().fold(f64::NEG_INFINITY, |a, &x| log_add(a, x));
        assert!((pairwise - log_sum_exp(&xs)).abs() < 1e-12);
    }

    #[test]
    fn empty_is_negative_infinity() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(LogAccumulator::new().value(), f64::NEG_INFINITY);
    }
}
