//! Bessel functions of the first and second kind (orders 0 and 1) and the
//! Hankel function of the first kind for real nonnegative arguments.
//!
//! Three evaluation branches are used:
//!
//! * `t <= SERIES_MAX`: ascending power series,
//! * `SERIES_MAX < t < ASYMPTOTIC_MIN`: Miller backward recurrence for `J_n`
//!   normalised by `J_0 + 2 sum J_2k = 1`, with `Y_0`, `Y_1` from the Neumann
//!   expansions in even-order `J`,
//! * `t >= ASYMPTOTIC_MIN`: Hankel asymptotic expansion, summed up to the
//!   smallest term.
//!
//! All branches are exposed in [`branch`] so they can be cross-checked on
//! overlapping bands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper end of the power-series branch.
pub const SERIES_MAX: f64 = 8.0;
/// Lower end of the asymptotic branch.
pub const ASYMPTOTIC_MIN: f64 = 25.0;

/// `J0, J1, Y0, Y1` evaluated at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPair {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BesselPair {
    #[inline]
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    #[inline]
    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

/// `J_n(t)` for `n` in {0, 1} and `t >= 0`.
pub fn bessel_j(n: u32, t: f64) -> Result<f64> {
    if n > 1 {
        return Err(Error::OrderOutOfRange(n));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("Bessel argument {t} < 0")));
    }
    let (j0, j1) = j01(t);
    Ok(if n == 0 { j0 } else { j1 })
}

/// `Y_n(t)` for `n` in {0, 1} and `t > 0`.
pub fn bessel_y(n: u32, t: f64) -> Result<f64> {
    if n > 1 {
        return Err(Error::OrderOutOfRange(n));
    }
    if !(t > 0.0) {
        return Err(Error::SingularArgument("Y_n(t)"));
    }
    let b = jy01(t);
    Ok(if n == 0 { b.y0 } else { b.y1 })
}

/// `H^(1)_n(t) = J_n(t) + i Y_n(t)` for `n` in {0, 1} and `t > 0`.
pub fn hankel1(n: u32, t: f64) -> Result<Complex64> {
    if n > 1 {
        return Err(Error::OrderOutOfRange(n));
    }
    if !(t > 0.0) {
        return Err(Error::SingularArgument("H^(1)_n(t)"));
    }
    let b = jy01(t);
    Ok(if n == 0 { b.h0() } else { b.h1() })
}

/// `(J0(t), J1(t))` for `t >= 0`, no argument checks.
#[inline]
pub fn j01(t: f64) -> (f64, f64) {
    if t <= SERIES_MAX {
        branch::series_j(t)
    } else if t < ASYMPTOTIC_MIN {
        let m = branch::miller(t, false);
        (m.j0, m.j1)
    } else {
        let b = branch::asymptotic(t);
        (b.j0, b.j1)
    }
}

/// All four functions at `t > 0`, no argument checks.
#[inline]
pub fn jy01(t: f64) -> BesselPair {
    if t <= SERIES_MAX {
        branch::series(t)
    } else if t < ASYMPTOTIC_MIN {
        branch::miller(t, true)
    } else {
        branch::asymptotic(t)
    }
}

pub mod branch {
    use super::*;

    /// Power series for `J0`, `J1` only.
    pub fn series_j(t: f64) -> (f64, f64) {
        let q = -0.25 * t * t;
        let mut term0 = 1.0;
        let mut term1 = 0.5 * t;
        let mut j0 = term0;
        let mut j1 = term1;
        let mut p = 1.0;
        loop {
            term0 *= q / (p * p);
            term1 *= q / (p * (p + 1.0));
            j0 += term0;
            j1 += term1;
            if term0.abs() <= 1e-18 * j0.abs().max(1e-300) && term1.abs() <= 1e-18 {
                break;
            }
            if p > 200.0 {
                break;
            }
            p += 1.0;
        }
        (j0, j1)
    }

    /// Ascending series for all four functions. Accurate to ~1e-13 up to
    /// `t = 8` and usable (with growing cancellation) to about `t = 20`.
    pub fn series(t: f64) -> BesselPair {
        let q = -0.25 * t * t;
        let log_term = (0.5 * t).ln() + EULER_GAMMA;

        // J0 / Y0 share (q^p / p!^2); J1 / Y1 share (t/2) q^p / (p! (p+1)!).
        let mut a0 = 1.0;
        let mut a1 = 0.5 * t;
        let mut j0 = a0;
        let mut j1 = a1;
        // H_p harmonic numbers.
        let mut harm = 0.0;
        let mut y0_sum = 0.0;
        // (H_p + H_{p+1}) weights for Y1; p = 0 term has H_0 + H_1 = 1.
        let mut y1_sum = a1;
        let mut p = 1.0;
        loop {
            a0 *= q / (p * p);
            a1 *= q / (p * (p + 1.0));
            harm += 1.0 / p;
            let harm_next = harm + 1.0 / (p + 1.0);
            j0 += a0;
            j1 += a1;
            y0_sum += harm * a0;
            y1_sum += (harm + harm_next) * a1;
            if (harm * a0).abs() < 1e-18 && ((harm + harm_next) * a1).abs() < 1e-18 {
                break;
            }
            if p > 300.0 {
                break;
            }
            p += 1.0;
        }
        let y0 = FRAC_2_PI * (log_term * j0 - y0_sum);
        let y1 = -FRAC_2_PI / t + FRAC_2_PI * log_term * j1 - y1_sum / PI;
        BesselPair { j0, j1, y0, y1 }
    }

    /// Miller backward recurrence. When `with_y` is false the Y fields are NaN.
    pub fn miller(t: f64, with_y: bool) -> BesselPair {
        let two_over_t = 2.0 / t;
        let mut j_next = 0.0; // J_{n+1}
        let mut j_cur = 1e-30; // J_n
        let mut norm_sum = 0.0; // sum_{k>=1} J_2k
        let mut y0_sum = 0.0; // sum_{k>=1} (-1)^k J_2k / k
        let mut y1_sum = 0.0; // sum_{k>=1} (-1)^k (J_{2k-1} - J_{2k+1}) / k
        let mut n = start_order(t);
        while n >= 1 {
            let j_prev = n as f64 * two_over_t * j_cur - j_next;
            if n % 2 == 0 {
                let k = (n / 2) as f64;
                let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
                norm_sum += j_cur;
                y0_sum += sign * j_cur / k;
                y1_sum += sign * (j_prev - j_next) / k;
            }
            j_next = j_cur;
            j_cur = j_prev;
            n -= 1;
            if j_cur.abs() > 1e250 {
                let s = 1e-250;
                j_cur *= s;
                j_next *= s;
                norm_sum *= s;
                y0_sum *= s;
                y1_sum *= s;
            }
        }
        let scale = 1.0 / (j_cur + 2.0 * norm_sum);
        let j0 = j_cur * scale;
        let j1 = j_next * scale;
        if !with_y {
            return BesselPair {
                j0,
                j1,
                y0: f64::NAN,
                y1: f64::NAN,
            };
        }
        let log_term = (0.5 * t).ln() + EULER_GAMMA;
        let y0 = FRAC_2_PI * log_term * j0 - 2.0 * FRAC_2_PI * y0_sum * scale;
        let y1 = -FRAC_2_PI * j0 / t + FRAC_2_PI * log_term * j1 + FRAC_2_PI * y1_sum * scale;
        BesselPair { j0, j1, y0, y1 }
    }

    fn start_order(t: f64) -> usize {
        let n = (t + 12.0 * t.cbrt() + 24.0).ceil() as usize;
        n + (n % 2)
    }

    /// Hankel asymptotic expansion, truncated at the smallest term.
    pub fn asymptotic(t: f64) -> BesselPair {
        let (p0, q0) = pq(0.0, t);
        let (p1, q1) = pq(4.0, t);
        let (s, c) = t.sin_cos();
        let amp = (FRAC_2_PI / t).sqrt();
        // chi0 = t - pi/4, chi1 = t - 3pi/4
        let c0 = FRAC_1_SQRT_2 * (c + s);
        let s0 = FRAC_1_SQRT_2 * (s - c);
        let c1 = FRAC_1_SQRT_2 * (s - c);
        let s1 = -FRAC_1_SQRT_2 * (s + c);
        BesselPair {
            j0: amp * (p0 * c0 - q0 * s0),
            y0: amp * (p0 * s0 + q0 * c0),
            j1: amp * (p1 * c1 - q1 * s1),
            y1: amp * (p1 * s1 + q1 * c1),
        }
    }

    /// P and Q sums for `mu = 4 nu^2`.
    fn pq(mu: f64, t: f64) -> (f64, f64) {
        let mut p = 1.0;
        let mut q = 0.0;
        let mut a: f64 = 1.0;
        let mut last = f64::INFINITY;
        for k in 1..200usize {
            let odd = (2 * k - 1) as f64;
            let next = a * (mu - odd * odd) / (k as f64 * 8.0 * t);
            if next.abs() >= last || next.abs() < 1e-18 {
                break;
            }
            last = next.abs();
            a = next;
            // a_k enters P for even k, Q for odd k, with alternating signs.
            match k % 4 {
                0 => p += a,
                1 => q += a,
                2 => p -= a,
                _ => q -= a,
            }
        }
        (p, q)
    }
}
