//! Quadrature on uniform grids and on intervals.

/// Composite Simpson rule on uniformly spaced samples; an odd number of
/// intervals gets a trapezoid panel at the end.
pub fn simpson(ys: &[f64], h: f64) -> f64 {
    let n = ys.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (ys[0] + ys[1]),
        _ => {
            let intervals = n - 1;
            if intervals % 2 == 1 {
                // 3/8 rule on the last three intervals keeps fourth order
                let head = simpson(&ys[..n - 3], h);
                let t = &ys[n - 4..];
                head + 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
            } else {
                let mut odd = 0.0;
                let mut even = 0.0;
                for (i, y) in ys.iter().enumerate().take(n - 1).skip(1) {
                    if i % 2 == 1 {
                        odd += y;
                    } else {
                        even += y;
                    }
                }
                h / 3.0 * (ys[0] + ys[n - 1] + 4.0 * odd + 2.0 * even)
            }
        }
    }
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(ys: &[f64], h: f64) -> f64 {
    if ys.len() < 2 {
        return 0.0;
    }
    let inner: f64 = ys[1..ys.len() - 1].iter().sum();
    h * (0.5 * (ys[0] + ys[ys.len() - 1]) + inner)
}

/// Trapezoid rule on arbitrary (sorted) abscissae.
pub fn trapezoid_xy(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

/// Five-point Gauss-Legendre rule on `[a, b]` (exact for degree 9).
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite Gauss-Legendre on `panels` equal panels of `[a, b]`.
pub fn gauss_legendre_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            gauss_legendre(&f, lo, lo + h)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [3usize, 4, 5, 8, 11] {
            let h = 1.0 / (n - 1) as f64;
            let ys: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!((simpson(&ys, h) - 0.25).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn gauss_legendre_on_exp() {
        let v = gauss_legendre_composite(f64::exp, 0.0, 1.0, 4);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_variants_agree() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!((trapezoid(&ys, 0.1) - trapezoid_xy(&xs, &ys)).abs() < 1e-15);
    }
}
