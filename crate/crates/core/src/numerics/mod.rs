//! Numerical building blocks shared by the model modules.

pub mod bernstein;
pub mod ode;
pub mod quad;

pub use bernstein::{bernstein_eval, BernsteinBasis};

/// Pairwise (cascade) summation; error grows like `log n` instead of `n`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// A real number carried as `sign * exp(ln_abs)`, for long products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln_abs: f64,
    pub negative: bool,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog {
        ln_abs: 0.0,
        negative: false,
    };

    pub fn from_f64(x: f64) -> Self {
        SignedLog {
            ln_abs: x.abs().ln(),
            negative: x < 0.0,
        }
    }

    pub fn times(self, x: f64) -> Self {
        SignedLog {
            ln_abs: self.ln_abs + x.abs().ln(),
            negative: self.negative ^ (x < 0.0),
        }
    }

    pub fn over(self, x: f64) -> Self {
        SignedLog {
            ln_abs: self.ln_abs - x.abs().ln(),
            negative: self.negative ^ (x < 0.0),
        }
    }

    /// `self * exp(-rate * t)` collapsed to an `f64`.
    pub fn times_exp(self, exponent: f64) -> f64 {
        let v = (self.ln_abs + exponent).exp();
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn to_f64(self) -> f64 {
        self.times_exp(0.0)
    }
}

/// Smallest pairwise relative gap `|a-b| / max(|a|,|b|)` in a sequence.
pub fn min_relative_gap(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted
        .windows(2)
        .map(|w| {
            let scale = w[0].abs().max(w[1].abs());
            if scale == 0.0 {
                0.0
            } else {
                (w[1] - w[0]).abs() / scale
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
    }

    #[test]
    fn signed_log_products() {
        let p = SignedLog::ONE.times(-3.0).times(4.0).over(-2.0);
        assert!((p.to_f64() - 6.0).abs() < 1e-14);
        assert!((SignedLog::from_f64(-2.0).times_exp(1.0f64.ln()) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn relative_gap() {
        assert!((min_relative_gap(&[1.0, 2.0, 1.5]) - 0.25).abs() < 1e-15);
        assert_eq!(min_relative_gap(&[3.0, 3.0]), 0.0);
        assert_eq!(min_relative_gap(&[0.0, 5.0]), 1.0);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -0.5 * x + 2.0).collect();
        assert!((ls_slope(&xs, &ys) + 0.5).abs() < 1e-14);
    }
}
