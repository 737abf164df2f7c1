//! Explicit Runge-Kutta integrators: classical fixed-step RK4 and an
//! adaptive Dormand-Prince 5(4) pair.

use crate::error::{Error, Result};

/// A first-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// One classical RK4 step of size `h`, in place.
pub fn rk4_step<S: OdeSystem + ?Sized>(sys: &S, t: f64, y: &mut [f64], h: f64) {
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    sys.rhs(t, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    sys.rhs(t + 0.5 * h, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    sys.rhs(t + 0.5 * h, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    sys.rhs(t + h, &tmp, &mut k4);
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Scalar autonomous RK4 step for `y' = f(y)`.
pub fn rk4_scalar(f: impl Fn(f64) -> f64, y: f64, h: f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Adaptive Dormand-Prince 5(4) with standard PI-free step control.
#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for DormandPrince {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// error coefficients: b - b*
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

impl DormandPrince {
    pub fn with_rtol(rtol: f64) -> Self {
        Self {
            rtol,
            ..Self::default()
        }
    }

    /// Integrates from `t0` and reports the state at every entry of `times`
    /// (non-decreasing, all `>= t0`).
    pub fn integrate_to<S: OdeSystem + ?Sized>(
        &self,
        sys: &S,
        t0: f64,
        y0: &[f64],
        times: &[f64],
    ) -> Result<Vec<Vec<f64>>> {
        let n = y0.len();
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut out = Vec::with_capacity(times.len());
        let mut k = vec![vec![0.0; n]; 7];
        let mut tmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        sys.rhs(t, &y, &mut k[0]);
        let mut h = self.initial_step(&y, &k[0]);
        let mut steps = 0usize;

        for &target in times {
            if target < t {
                return Err(Error::invalid(format!(
                    "output times must be non-decreasing ({target} < {t})"
                )));
            }
            while t < target {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::NumericalFailure(format!(
                        "Dormand-Prince exceeded {} steps at t = {t}",
                        self.max_steps
                    )));
                }
                let mut last = false;
                let proposed = h;
                if t + h >= target {
                    h = target - t;
                    last = true;
                }
                self.stages(sys, t, &y, h, &mut k, &mut tmp, &mut y_new);
                let err = self.error_norm(&y, &y_new, &k, h);
                if err <= 1.0 || h < 1e-300 {
                    t = if last { target } else { t + h };
                    std::mem::swap(&mut y, &mut y_new);
                    let (first, rest) = k.split_at_mut(1);
                    first[0].copy_from_slice(&rest[5]); // rest[5] is k[6]
                    let factor = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    h = if last { proposed.max(h * factor) } else { h * factor };
                } else {
                    h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                }
                if !h.is_finite() || h <= 0.0 {
                    return Err(Error::NumericalFailure("step size collapsed".into()));
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }

    fn initial_step(&self, y: &[f64], f0: &[f64]) -> f64 {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for (yi, fi) in y.iter().zip(f0) {
            let sc = self.atol + self.rtol * yi.abs();
            d0 = d0.max(yi.abs() / sc);
            d1 = d1.max(fi.abs() / sc);
        }
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            (0.01 * d0 / d1).min(1.0)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn stages<S: OdeSystem + ?Sized>(
        &self,
        sys: &S,
        t: f64,
        y: &[f64],
        h: f64,
        k: &mut [Vec<f64>],
        tmp: &mut [f64],
        y_new: &mut [f64],
    ) {
        let n = y.len();
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k[0][i];
        }
        sys.rhs(t + C2 * h, tmp, &mut k[1]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        sys.rhs(t + C3 * h, tmp, &mut k[2]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        sys.rhs(t + C4 * h, tmp, &mut k[3]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        sys.rhs(t + C5 * h, tmp, &mut k[4]);
        for i in 0..n {
            tmp[i] = y[i]
                + h * (A61 * k[0][i]
                    + A62 * k[1][i]
                    + A63 * k[2][i]
                    + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        sys.rhs(t + h, tmp, &mut k[5]);
        for i in 0..n {
            y_new[i] = y[i]
                + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        // FSAL stage, reused as k[0] of the next step
        sys.rhs(t + h, y_new, &mut k[6]);
    }

    fn error_norm(&self, y: &[f64], y_new: &[f64], k: &[Vec<f64>], h: f64) -> f64 {
        let n = y.len();
        let mut acc = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k[0][i]
                    + E3 * k[2][i]
                    + E4 * k[3][i]
                    + E5 * k[4][i]
                    + E6 * k[5][i]
                    + E7 * k[6][i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            acc += (e / sc) * (e / sc);
        }
        (acc / n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay(f64);
    impl OdeSystem for Decay {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = -self.0 * y[0];
        }
    }

    struct Oscillator;
    impl OdeSystem for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -y[0];
        }
    }

    #[test]
    fn dormand_prince_exponential_decay() {
        let times = [0.0, 0.5, 1.0, 3.0, 10.0];
        let out = DormandPrince::default()
            .integrate_to(&Decay(2.0), 0.0, &[1.0], &times)
            .unwrap();
        for (t, y) in times.iter().zip(&out) {
            let exact = (-2.0 * t).exp();
            assert!((y[0] - exact).abs() <= 1e-9 * exact + 1e-13, "t={t}");
        }
    }

    #[test]
    fn dormand_prince_oscillator_returns_after_period() {
        let period = 2.0 * std::f64::consts::PI;
        let out = DormandPrince::default()
            .integrate_to(&Oscillator, 0.0, &[1.0, 0.0], &[period, 2.0 * period])
            .unwrap();
        for y in out {
            assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8, "{y:?}");
        }
    }

    #[test]
    fn dormand_prince_rejects_backwards_times() {
        let r = DormandPrince::default().integrate_to(&Decay(1.0), 0.0, &[1.0], &[1.0, 0.5]);
        assert!(r.is_err());
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |h: f64| {
            let steps = (1.0 / h).round() as usize;
            let mut y = 1.0;
            for _ in 0..steps {
                y = rk4_scalar(|y| y, y, h);
            }
            (y - std::f64::consts::E).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn rk4_step_matches_scalar() {
        let mut y = [1.0];
        rk4_step(&Decay(1.5), 0.0, &mut y, 0.1);
        assert_eq!(y[0], rk4_scalar(|v| -1.5 * v, 1.0, 0.1));
    }
}
