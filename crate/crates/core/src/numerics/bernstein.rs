//! Bernstein-form polynomials with log-space binomial weights.
//!
//! `C(n, r)` overflows an `f64` near `n ≈ 1030` and the products
//! `C(n, r) x^r (1-x)^(n-r)` lose precision well before that, so each weight
//! is formed as `exp(ln C(n,r) + r ln x + (n-r) ln(1-x))` and the terms are
//! summed pairwise.

use super::pairwise_sum;

/// Weights below `exp(-LOG_CUTOFF)` relative to the largest term are dropped.
const LOG_CUTOFF: f64 = 745.0;

/// Precomputed `ln C(n, r)` for `r = 0..=n`.
#[derive(Debug, Clone)]
pub struct BernsteinBasis {
    degree: usize,
    ln_binom: Vec<f64>,
}

impl BernsteinBasis {
    pub fn new(degree: usize) -> Self {
        let mut ln_binom = Vec::with_capacity(degree + 1);
        let mut acc = 0.0;
        ln_binom.push(acc);
        for r in 0..degree {
            acc += ((degree - r) as f64).ln() - ((r + 1) as f64).ln();
            ln_binom.push(acc);
        }
        // symmetric; snap the tail to the head to kill drift
        for r in 0..=degree / 2 {
            ln_binom[degree - r] = ln_binom[r];
        }
        Self { degree, ln_binom }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ln_binomial(&self, r: usize) -> f64 {
        self.ln_binom[r]
    }

    /// Basis function `b_{r,n}(x) = C(n,r) x^r (1-x)^(n-r)`.
    pub fn weight(&self, r: usize, x: f64) -> f64 {
        let n = self.degree;
        if x <= 0.0 {
            return if r == 0 { 1.0 } else { 0.0 };
        }
        if x >= 1.0 {
            return if r == n { 1.0 } else { 0.0 };
        }
        (self.ln_binom[r] + r as f64 * x.ln() + (n - r) as f64 * (-x).ln_1p()).exp()
    }

    /// Evaluates `sum_r coeffs[r] * b_{r,n}(x)`. `coeffs.len()` must be `n + 1`.
    pub fn eval(&self, coeffs: &[f64], x: f64) -> f64 {
        let n = self.degree;
        debug_assert_eq!(coeffs.len(), n + 1);
        if x <= 0.0 {
            return coeffs[0];
        }
        if x >= 1.0 {
            return coeffs[n];
        }
        let lx = x.ln();
        let l1x = (-x).ln_1p();
        // the weights are unimodal with the peak near r = n x
        let mode = ((n as f64 + 1.0) * x).floor().min(n as f64) as usize;
        let peak = self.ln_binom[mode] + mode as f64 * lx + (n - mode) as f64 * l1x;
        let mut terms = Vec::with_capacity(n + 1);
        for (r, &c) in coeffs.iter().enumerate() {
            let lw = self.ln_binom[r] + r as f64 * lx + (n - r) as f64 * l1x;
            if lw - peak < -LOG_CUTOFF {
                continue;
            }
            terms.push(c * lw.exp());
        }
        pairwise_sum(&terms)
    }
}

/// One-shot evaluation; prefer a cached [`BernsteinBasis`] in loops.
pub fn bernstein_eval(coeffs: &[f64], x: f64) -> f64 {
    assert!(!coeffs.is_empty(), "Bernstein polynomial needs a coefficient");
    BernsteinBasis::new(coeffs.len() - 1).eval(coeffs, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(coeffs: &[f64], x: f64) -> f64 {
        let n = coeffs.len() - 1;
        let mut binom = 1.0;
        let mut sum = 0.0;
        for (r, c) in coeffs.iter().enumerate() {
            sum += c * binom * x.powi(r as i32) * (1.0 - x).powi((n - r) as i32);
            binom = binom * (n - r) as f64 / (r + 1) as f64;
        }
        sum
    }

    #[test]
    fn matches_naive_for_small_degree() {
        let coeffs = [0.3, -1.0, 2.5, 0.7, 1.1, 4.0];
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let a = bernstein_eval(&coeffs, x);
            let b = naive(&coeffs, x);
            assert!((a - b).abs() < 1e-13, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn partition_of_unity_at_large_degree() {
        let basis = BernsteinBasis::new(2000);
        let ones = vec![1.0; 2001];
        for &x in &[1e-6, 0.01, 0.37, 0.5, 0.999, 1.0 - 1e-9] {
            assert!((basis.eval(&ones, x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_linear_functions() {
        // sum (r/n) b_{r,n}(x) = x
        let n = 500;
        let basis = BernsteinBasis::new(n);
        let coeffs: Vec<f64> = (0..=n).map(|r| r as f64 / n as f64).collect();
        for &x in &[0.0, 0.1, 0.5, 0.93, 1.0] {
            assert!((basis.eval(&coeffs, x) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn ln_binomial_is_exact_enough() {
        let basis = BernsteinBasis::new(30);
        // C(30, 15) = 155117520
        assert!((basis.ln_binomial(15).exp() - 155_117_520.0).abs() < 1e-3);
    }
}
