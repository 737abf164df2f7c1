//! Prize functions `V` on `[0, 1]` and the prize sequences `V_k = V(k/N)`
//! sampled from them.
//!
//! Three kinds are supported: `x^alpha`, polynomials with `V(0) = 0`, and
//! tabulated knots joined by a monotone piecewise cubic (Fritsch-Carlson),
//! which never overshoots and so keeps sampled sequences increasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to call two consecutive prize increments equal.
pub const CONVEXITY_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrizeKind {
    /// `V(x) = x^alpha`.
    Power { alpha: f64 },
    /// `V(x) = sum_j coefficients[j] x^j`.
    Polynomial { coefficients: Vec<f64> },
    /// Monotone cubic through `(x, V(x))` knots spanning `[0, 1]`.
    Table { knots: Vec<[f64; 2]> },
}

impl PrizeKind {
    pub fn power(alpha: f64) -> Self {
        PrizeKind::Power { alpha }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, PrizeKind::Table { .. })
    }
}

/// Shape of the increment sequence `c_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Convex,
    Concave,
    Linear,
    Mixed,
}

/// The JSON form of a prize: the kind's fields plus `"N"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrizeConfig {
    #[serde(flatten)]
    pub kind: PrizeKind,
    #[serde(rename = "N")]
    pub n: usize,
}

/// A validated prize function together with its sampled sequence.
///
/// `values[k-1] = V(k/N)` for `k = 1..=N`, and `diffs[r] = V_{r+2} - V_{r+1}`
/// for `r = 0..=N-2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PrizeConfig", into = "PrizeConfig")]
pub struct PrizeSpec {
    kind: PrizeKind,
    n: usize,
    values: Vec<f64>,
    diffs: Vec<f64>,
    interp: Option<MonotoneCubic>,
}

impl TryFrom<PrizeConfig> for PrizeSpec {
    type Error = Error;

    fn try_from(cfg: PrizeConfig) -> Result<Self> {
        PrizeSpec::new(cfg.kind, cfg.n)
    }
}

impl From<PrizeSpec> for PrizeConfig {
    fn from(spec: PrizeSpec) -> Self {
        PrizeConfig {
            kind: spec.kind,
            n: spec.n,
        }
    }
}

impl PartialEq for PrizeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n
    }
}

impl PrizeSpec {
    /// Builds and validates a prize spec with `n` players.
    pub fn new(kind: PrizeKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("N must be at least 2, got {n}")));
        }
        let interp = match &kind {
            PrizeKind::Power { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
                }
                None
            }
            PrizeKind::Polynomial { coefficients } => {
                validate_polynomial(coefficients)?;
                None
            }
            PrizeKind::Table { knots } => Some(MonotoneCubic::new(knots)?),
        };
        let mut spec = PrizeSpec {
            kind,
            n,
            values: Vec::new(),
            diffs: Vec::new(),
            interp,
        };
        spec.values = (1..=n).map(|k| spec.value(k as f64 / n as f64)).collect();
        for (i, w) in spec.values.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotonePrize {
                    index: i + 2,
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        if !(spec.values[0] > 0.0) {
            return Err(Error::invalid(format!(
                "V(1/N) must be positive, got {}",
                spec.values[0]
            )));
        }
        spec.diffs = spec.values.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(spec)
    }

    /// Shorthand for `PrizeSpec::new(PrizeKind::Power { alpha }, n)`.
    pub fn power(alpha: f64, n: usize) -> Result<Self> {
        Self::new(PrizeKind::power(alpha), n)
    }

    pub fn kind(&self) -> &PrizeKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `V_1, ..., V_N`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `V_k` with 1-based `k`.
    pub fn v(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// `c_0, ..., c_{N-2}`.
    pub fn diffs(&self) -> &[f64] {
        &self.diffs
    }

    /// `V(1)`, the largest prize.
    pub fn v_max(&self) -> f64 {
        self.values[self.n - 1]
    }

    pub fn is_analytic(&self) -> bool {
        self.kind.is_analytic()
    }

    /// Same prize function resampled for a different number of players.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.kind.clone(), n)
    }

    /// `V(x)` for `x` in `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.value(x))
    }

    /// `V'(x)`; infinite at `x = 0` for `x^alpha` with `alpha < 1`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(match &self.kind {
            PrizeKind::Power { alpha } => {
                if *alpha == 1.0 {
                    1.0
                } else {
                    alpha * x.powf(alpha - 1.0)
                }
            }
            PrizeKind::Polynomial { coefficients } => poly_eval(&poly_derivative(coefficients), x),
            PrizeKind::Table { .. } => self.interp.as_ref().expect("table interp").derivative(x),
        })
    }

    /// `V''(x)`. For tables this is the interpolant's piecewise second
    /// derivative, which is discontinuous at knots.
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(match &self.kind {
            PrizeKind::Power { alpha } => {
                if *alpha == 1.0 || *alpha == 2.0 {
                    alpha * (alpha - 1.0)
                } else {
                    alpha * (alpha - 1.0) * x.powf(alpha - 2.0)
                }
            }
            PrizeKind::Polynomial { coefficients } => {
                poly_eval(&poly_derivative(&poly_derivative(coefficients)), x)
            }
            PrizeKind::Table { .. } => self
                .interp
                .as_ref()
                .expect("table interp")
                .second_derivative(x),
        })
    }

    /// `V^{-1}(t)` for `t` in `[V(0), V(1)]`, accurate to
    /// `|V(x) - t| <= 1e-12 max(1, V(1))`.
    pub fn inverse(&self, t: f64) -> Result<f64> {
        let lo_v = self.value(0.0);
        let hi_v = self.value(1.0);
        if !(t >= lo_v && t <= hi_v) {
            return Err(Error::domain(t, format!("[{lo_v}, {hi_v}]")));
        }
        if let PrizeKind::Power { alpha } = self.kind {
            return Ok(t.powf(1.0 / alpha).min(1.0));
        }
        if t == lo_v {
            return Ok(0.0);
        }
        if t == hi_v {
            return Ok(1.0);
        }
        let tol = 1e-12 * hi_v.max(1.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut x = 0.5;
        for _ in 0..200 {
            let fx = self.value(x) - t;
            if fx.abs() <= 0.25 * tol {
                return Ok(x);
            }
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            // Newton step, falling back to bisection when it leaves the bracket
            let d = self.derivative(x).unwrap_or(0.0);
            let newton = x - fx / d;
            x = if d.is_finite() && d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-17 {
                break;
            }
        }
        Ok(x)
    }

    /// Classifies the sampled increments `c_r` (ties within
    /// [`CONVEXITY_TIE_TOL`] relative count as equal).
    pub fn convexity(&self) -> Convexity {
        let mut up = false;
        let mut down = false;
        for w in self.diffs.windows(2) {
            let scale = w[0].abs().max(w[1].abs());
            let d = w[1] - w[0];
            if d > CONVEXITY_TIE_TOL * scale {
                up = true;
            } else if d < -CONVEXITY_TIE_TOL * scale {
                down = true;
            }
        }
        match (up, down) {
            (false, false) => Convexity::Linear,
            (true, false) => Convexity::Convex,
            (false, true) => Convexity::Concave,
            (true, true) => Convexity::Mixed,
        }
    }

    /// Unchecked evaluation.
    pub(crate) fn value(&self, x: f64) -> f64 {
        match &self.kind {
            PrizeKind::Power { alpha } => {
                if *alpha == 1.0 {
                    x
                } else if *alpha == 2.0 {
                    x * x
                } else {
                    x.powf(*alpha)
                }
            }
            PrizeKind::Polynomial { coefficients } => poly_eval(coefficients, x),
            PrizeKind::Table { .. } => self.interp.as_ref().expect("table interp").eval(x),
        }
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(x, "[0, 1]"))
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| j as f64 * c)
        .collect()
}

fn validate_polynomial(coeffs: &[f64]) -> Result<()> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("polynomial coefficients must be finite"));
    }
    if coeffs.first().copied().unwrap_or(0.0) != 0.0 {
        return Err(Error::invalid("polynomial prize must satisfy V(0) = 0"));
    }
    // strictly increasing on a fine grid
    const M: usize = 4096;
    let mut prev = 0.0;
    for i in 1..=M {
        let x = i as f64 / M as f64;
        let v = poly_eval(coeffs, x);
        if !(v > prev) {
            return Err(Error::NonMonotonePrize {
                index: i,
                prev,
                next: v,
            });
        }
        prev = v;
    }
    Ok(())
}

/// Fritsch-Carlson monotone cubic Hermite interpolant.
#[derive(Debug, Clone)]
struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    fn new(knots: &[[f64; 2]]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::invalid("table prize needs at least two knots"));
        }
        if knots.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("table knots must be finite"));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 {
            return Err(Error::invalid("table knots must span exactly [0, 1]"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("table knot abscissae must be strictly increasing"));
        }
        for (i, w) in ys.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotonePrize {
                    index: i + 1,
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        if ys[0] != 0.0 {
            log::warn!("table prize has V(0) = {} (expected 0)", ys[0]);
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                let (d0, d1) = (delta[k - 1], delta[k]);
                if d0 * d1 > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { xs, ys, slopes })
    }

    fn cell(&self, x: f64) -> (usize, f64, f64) {
        let k = match self.xs.partition_point(|&xi| xi <= x) {
            0 => 0,
            p => (p - 1).min(self.xs.len() - 2),
        };
        let h = self.xs[k + 1] - self.xs[k];
        (k, h, (x - self.xs[k]) / h)
    }

    fn eval(&self, x: f64) -> f64 {
        let (k, h, s) = self.cell(x);
        let (y0, y1, d0, d1) = (self.ys[k], self.ys[k + 1], self.slopes[k], self.slopes[k + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * h * d1
    }

    fn derivative(&self, x: f64) -> f64 {
        let (k, h, s) = self.cell(x);
        let (y0, y1, d0, d1) = (self.ys[k], self.ys[k + 1], self.slopes[k], self.slopes[k + 1]);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * y0 + (-6.0 * s2 + 6.0 * s) * y1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (3.0 * s2 - 2.0 * s) * d1
    }

    fn second_derivative(&self, x: f64) -> f64 {
        let (k, h, s) = self.cell(x);
        let (y0, y1, d0, d1) = (self.ys[k], self.ys[k + 1], self.slopes[k], self.slopes[k + 1]);
        ((12.0 * s - 6.0) * y0 + (-12.0 * s + 6.0) * y1) / (h * h)
            + ((6.0 * s - 4.0) * d0 + (6.0 * s - 2.0) * d1) / h
    }
}

/// Shape-preserving three-point end slope.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
