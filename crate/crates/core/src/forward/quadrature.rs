//! Trapezoid-rule pieces for periodic integrands with a logarithmic
//! singularity, on `Q = 2n` equispaced nodes `s_j = pi j / n`.

use std::f64::consts::PI;

/// Weights `R_j(s)` with
/// `int_0^{2pi} ln(4 sin^2((s - sigma)/2)) g(sigma) dsigma ~ sum_j R_j(s) g(s_j)`,
/// exact for trigonometric polynomials of degree `n - 1` plus `cos(n .)`.
pub fn log_weight(n: usize, s_minus_sj: f64) -> f64 {
    let mut acc = 0.0;
    for l in 1..n {
        acc += (l as f64 * s_minus_sj).cos() / l as f64;
    }
    let nf = n as f64;
    -2.0 * PI / nf * acc - PI / (nf * nf) * (nf * s_minus_sj).cos()
}

/// `R_{m}` for `m = 0..2n`, i.e. `log_weight(n, pi m / n)`.
pub fn log_weights(n: usize) -> Vec<f64> {
    (0..2 * n).map(|m| log_weight(n, PI * m as f64 / n as f64)).collect()
}

/// Lagrange basis of the degree-`n` trigonometric interpolant at offset
/// `s - s_j`.
pub fn trig_cardinal(n: usize, s_minus_sj: f64) -> f64 {
    let mut acc = 1.0;
    for l in 1..n {
        acc += 2.0 * (l as f64 * s_minus_sj).cos();
    }
    acc += (n as f64 * s_minus_sj).cos();
    acc / (2 * n) as f64
}

/// `ln(4 sin^2(x / 2))`.
#[inline]
pub fn log_sin2(x: f64) -> f64 {
    (4.0 * (0.5 * x).sin().powi(2)).ln()
}

/// Smooth cut-off: 1 for `|d| <= half / 2`, 0 for `|d| >= half`, C-infinity
/// in between.
#[inline]
pub fn window(d: f64, half: f64) -> f64 {
    let a = d.abs();
    if a <= 0.5 * half {
        return 1.0;
    }
    if a >= half {
        return 0.0;
    }
    let u = (a - 0.5 * half) / (0.5 * half);
    let psi = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    let (p, q) = (psi(1.0 - u), psi(u));
    p / (p + q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_rule_is_exact_on_cosines() {
        // int ln(4 sin^2((s - sigma)/2)) cos(m sigma) dsigma = -(2 pi / m) cos(m s), m >= 1; 0 for m = 0.
        let n = 16;
        let s = 0.77;
        for m in 0..n {
            let approx: f64 = (0..2 * n)
                .map(|j| {
                    let sj = PI * j as f64 / n as f64;
                    log_weight(n, s - sj) * (m as f64 * sj).cos()
                })
                .sum();
            let exact = if m == 0 {
                0.0
            } else {
                -2.0 * PI / m as f64 * (m as f64 * s).cos()
            };
            assert!((approx - exact).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn log_rule_converges_on_smooth_function() {
        // g(sigma) = exp(cos sigma) against a fine reference computed with
        // the same rule at large n.
        let g = |x: f64| x.cos().exp();
        let integrate = |n: usize, s: f64| -> f64 {
            (0..2 * n)
                .map(|j| {
                    let sj = PI * j as f64 / n as f64;
                    log_weight(n, s - sj) * g(sj)
                })
                .sum()
        };
        let reference = integrate(128, 0.3);
        assert!((integrate(24, 0.3) - reference).abs() < 1e-12);
    }

    #[test]
    fn weights_table_matches_pointwise() {
        let n = 10;
        let w = log_weights(n);
        for (m, &v) in w.iter().enumerate() {
            assert_eq!(v, log_weight(n, PI * m as f64 / n as f64));
        }
    }

    #[test]
    fn cardinal_interpolates() {
        let n = 8;
        for j in 0..2 * n {
            let v = trig_cardinal(n, PI * j as f64 / n as f64);
            assert!((v - if j == 0 { 1.0 } else { 0.0 }).abs() < 1e-14);
        }
        // Reproduces cos(3 s) between nodes.
        let s = 0.4321;
        let v: f64 = (0..2 * n)
            .map(|j| {
                let sj = PI * j as f64 / n as f64;
                trig_cardinal(n, s - sj) * (3.0 * sj).cos()
            })
            .sum();
        assert!((v - (3.0 * s).cos()).abs() < 1e-14);
    }

    #[test]
    fn window_shape() {
        assert_eq!(window(0.0, 2.0), 1.0);
        assert_eq!(window(1.0, 2.0), 1.0);
        assert_eq!(window(-2.0, 2.0), 0.0);
        assert!((window(1.5, 2.0) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = window(1.0 + i as f64 / 100.0, 2.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}
