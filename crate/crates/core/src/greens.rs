//! Free-space Green's tensor of the 2D Navier equation and derived kernels.
//!
//! With `r = |x - z|`, `rh = (x - z) / r`, `beta = kp / ks` and
//! `g(r) = (H1(ks r) - beta H1(kp r)) / (ks r)`, the tensor reduces to
//!
//! ```text
//! Pi = i/(4 mu) [ A(r) I + B(r) rh rh^T ]
//! A  = H0(ks r) - g
//! B  = -H0(ks r) + beta^2 H0(kp r) + 2 g
//! ```
//!
//! Replacing every `H_n` by `J_n` and `i/(4 mu)` by `1/(4 mu)` gives `Im Pi`;
//! this is the route-(b) closed form with
//! `F1 = A|_J` and `F2 = B|_J`. The printed `F2` carries `-(kp/t) J1(kp t)`
//! where the reduction gives `-(2 kp / (ks^2 t)) J1(kp t)`; both are kept
//! ([`f2`], [`f2_printed`]) and the three-route check settles which holds.

use crate::error::{Error, Result};
use crate::medium::{ElasticMedium, Point, StressParams};
use crate::specfun::{j01, jy01, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_PI, PI};
use std::ops::{Add, Mul, Neg, Sub};

/// 2x2 complex tensor, row-major.
pub type Tensor2 = [[Complex64; 2]; 2];
/// 2x2 real tensor, row-major.
pub type RealTensor2 = [[f64; 2]; 2];

pub const ZERO2: Tensor2 = [[Complex64::new(0.0, 0.0); 2]; 2];

/// Point on a curve with its unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub y: Point,
    pub normal: Point,
}

/// Separation below which two points are treated as coincident.
const COINCIDENT: f64 = 1e-300;

#[inline]
fn sep(x: Point, z: Point) -> (f64, Point) {
    let d = [x[0] - z[0], x[1] - z[1]];
    let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
    (r, d)
}

/// Helmholtz fundamental solution `(i/4) H0(k |x - z|)`.
pub fn phi_k(x: Point, z: Point, k: f64) -> Result<Complex64> {
    let (r, _) = sep(x, z);
    if r <= COINCIDENT {
        return Err(Error::SingularPoint);
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("wavenumber {k} must be > 0")));
    }
    Ok(Complex64::new(0.0, 0.25) * jy01(k * r).h0())
}

/// `A`, `B` and their radial derivatives.
#[derive(Clone, Copy, Debug)]
struct Radial<T> {
    a: T,
    b: T,
    da: T,
    db: T,
}

trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Neg<Output = Self> {}
impl Field for f64 {}
impl Field for Complex64 {}

/// Radial parts from `[Z0(ks r), Z1(ks r), Z0(kp r), Z1(kp r)]` with `Z = H`
/// or `Z = J`.
#[inline]
fn radial<T: Field>(z: [T; 4], ks: f64, kp: f64, r: f64) -> Radial<T> {
    let [z0s, z1s, z0p, z1p] = z;
    let beta = kp / ks;
    let beta2 = beta * beta;
    let inv_r = 1.0 / r;
    let g = (z1s - z1p * beta) * (inv_r / ks);
    let dg = (z0s - z0p * beta2) * inv_r - g * (2.0 * inv_r);
    Radial {
        a: z0s - g,
        b: -z0s + z0p * beta2 + g * 2.0,
        da: -(z1s * ks) - dg,
        db: z1s * ks - z1p * (beta2 * kp) + dg * 2.0,
    }
}

#[inline]
fn tensor_from<T: Field>(rad: &Radial<T>, rh: Point, scale: impl Fn(T) -> T) -> [[T; 2]; 2] {
    let mut out = [[rad.a; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let iso = if i == j { rad.a } else { rad.a * 0.0 };
            out[i][j] = scale(iso + rad.b * (rh[i] * rh[j]));
        }
    }
    out
}

/// `P_y` applied column-wise to `A I + B rh rh^T` as a function of the
/// source point `y` (the tensor argument is `x - y`).
#[inline]
fn stress_from<T: Field>(
    rad: &Radial<T>,
    r: f64,
    rh: Point,
    n: Point,
    m: &ElasticMedium,
    sp: &StressParams,
    scale: impl Fn(T) -> T,
) -> [[T; 2]; 2] {
    let c_norm = m.mu + sp.mu_t;
    let n_dot = n[0] * rh[0] + n[1] * rh[1];
    let n_perp = [-n[1], n[0]];
    let rh_perp = [-rh[1], rh[0]];
    let b_r = rad.b * (1.0 / r);
    let div = rad.da + rad.db + b_r;
    let curl = rad.da - b_r;
    let mut out = [[rad.a; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let normal_deriv = (rad.da * delta + rad.db * (rh[i] * rh[j])) * n_dot
                + b_r * (n[i] * rh[j] + rh[i] * n[j] - 2.0 * n_dot * rh[i] * rh[j]);
            let v =
                normal_deriv * c_norm + div * (sp.lambda_t * n[i] * rh[j]) - curl * (sp.mu_t * n_perp[i] * rh_perp[j]);
            out[i][j] = scale(-v);
        }
    }
    out
}

#[inline]
fn hankel_radial(m: &ElasticMedium, r: f64) -> Radial<Complex64> {
    let (ks, kp) = (m.ks(), m.kp());
    let s = jy01(ks * r);
    let p = jy01(kp * r);
    radial([s.h0(), s.h1(), p.h0(), p.h1()], ks, kp, r)
}

#[inline]
fn bessel_radial(m: &ElasticMedium, r: f64) -> Radial<f64> {
    let (ks, kp) = (m.ks(), m.kp());
    let (j0s, j1s) = j01(ks * r);
    let (j0p, j1p) = j01(kp * r);
    radial([j0s, j1s, j0p, j1p], ks, kp, r)
}

#[inline]
fn i_over_4mu(m: &ElasticMedium) -> impl Fn(Complex64) -> Complex64 {
    let c = Complex64::new(0.0, 0.25 / m.mu);
    move |v| v * c
}

/// Free-space Green's tensor `Pi(x, z)`.
pub fn navier_green(x: Point, z: Point, m: &ElasticMedium) -> Result<Tensor2> {
    let (r, d) = sep(x, z);
    if r <= COINCIDENT {
        return Err(Error::SingularPoint);
    }
    let rh = [d[0] / r, d[1] / r];
    Ok(tensor_from(&hankel_radial(m, r), rh, i_over_4mu(m)))
}

/// `P_y[Pi(x, y)]` with the normal taken at the source point `yp`.
pub fn stress_kernel(x: Point, yp: &CurvePoint, m: &ElasticMedium, sp: &StressParams) -> Result<Tensor2> {
    Ok(green_and_stress(x, yp, m, sp)?.1)
}

/// `(Pi(x, y), P_y[Pi(x, y)])` sharing one set of Hankel evaluations.
pub fn green_and_stress(x: Point, yp: &CurvePoint, m: &ElasticMedium, sp: &StressParams) -> Result<(Tensor2, Tensor2)> {
    let (r, d) = sep(x, yp.y);
    if r <= COINCIDENT {
        return Err(Error::SingularPoint);
    }
    let rh = [d[0] / r, d[1] / r];
    let rad = hankel_radial(m, r);
    let scale = i_over_4mu(m);
    Ok((
        tensor_from(&rad, rh, &scale),
        stress_from(&rad, r, rh, yp.normal, m, sp, &scale),
    ))
}

/// `(Im Pi(x, y), P_y[Im Pi(x, y)])`. Both are entire in `x - y`; at
/// coincidence the values are `F1(0)/(4 mu) I` and zero.
pub fn im_green_and_stress(
    x: Point,
    yp: &CurvePoint,
    m: &ElasticMedium,
    sp: &StressParams,
) -> (RealTensor2, RealTensor2) {
    let (r, d) = sep(x, yp.y);
    if r <= COINCIDENT {
        let v = f1(0.0, m) / (4.0 * m.mu);
        return ([[v, 0.0], [0.0, v]], [[0.0; 2]; 2]);
    }
    let rh = [d[0] / r, d[1] / r];
    let rad = bessel_radial(m, r);
    let s = 0.25 / m.mu;
    let scale = move |v: f64| v * s;
    (
        tensor_from(&rad, rh, scale),
        stress_from(&rad, r, rh, yp.normal, m, sp, scale),
    )
}

/// `F1(t) = J0(ks t) - (J1(ks t) - (kp/ks) J1(kp t)) / (ks t)`.
pub fn f1(t: f64, m: &ElasticMedium) -> f64 {
    let (ks, kp) = (m.ks(), m.kp());
    let beta = kp / ks;
    if t == 0.0 {
        return 0.5 * (1.0 + beta * beta);
    }
    let (j0s, j1s) = j01(ks * t);
    let (_, j1p) = j01(kp * t);
    j0s - (j1s - beta * j1p) / (ks * t)
}

/// `F2(t) = 2 J1(ks t)/(ks t) - J0(ks t) - 2 kp J1(kp t)/(ks^2 t) + (kp/ks)^2 J0(kp t)`.
pub fn f2(t: f64, m: &ElasticMedium) -> f64 {
    let (ks, kp) = (m.ks(), m.kp());
    if t == 0.0 {
        return 0.0;
    }
    let (j0s, j1s) = j01(ks * t);
    let (j0p, j1p) = j01(kp * t);
    let beta = kp / ks;
    2.0 * j1s / (ks * t) - j0s - 2.0 * kp * j1p / (ks * ks * t) + beta * beta * j0p
}

/// `F2` exactly as printed: the `J1(kp t)` term reads `-(kp / t) J1(kp t)`.
pub fn f2_printed(t: f64, m: &ElasticMedium) -> f64 {
    let (ks, kp) = (m.ks(), m.kp());
    if t == 0.0 {
        return -0.5 * kp * kp;
    }
    let (j0s, j1s) = j01(ks * t);
    let (j0p, j1p) = j01(kp * t);
    let beta = kp / ks;
    2.0 * j1s / (ks * t) - j0s - kp / t * j1p + beta * beta * j0p
}

fn im_closed_with(x: Point, z: Point, m: &ElasticMedium, f2_fn: fn(f64, &ElasticMedium) -> f64) -> RealTensor2 {
    let (r, d) = sep(x, z);
    let a = f1(r, m) / (4.0 * m.mu);
    if r <= COINCIDENT {
        return [[a, 0.0], [0.0, a]];
    }
    let b = f2_fn(r, m) / (4.0 * m.mu);
    let rh = [d[0] / r, d[1] / r];
    [
        [a + b * rh[0] * rh[0], b * rh[0] * rh[1]],
        [b * rh[1] * rh[0], a + b * rh[1] * rh[1]],
    ]
}

/// `Im Pi` from the `F1`/`F2` closed form (corrected `F2`).
pub fn im_green_closed(x: Point, z: Point, m: &ElasticMedium) -> RealTensor2 {
    im_closed_with(x, z, m, f2)
}

/// `Im Pi` from the closed form with `F2` as printed.
pub fn im_green_closed_printed(x: Point, z: Point, m: &ElasticMedium) -> RealTensor2 {
    im_closed_with(x, z, m, f2_printed)
}

/// Result of a full-circle plane-wave superposition.
#[derive(Clone, Copy, Debug)]
pub struct FunkQuadrature {
    pub value: RealTensor2,
    /// Largest imaginary part left by the quadrature.
    pub imag_residue: f64,
}

/// `Im Pi` as a superposition of plane waves over the unit circle,
/// trapezoid rule with `mq` points.
pub fn im_green_funk(x: Point, z: Point, m: &ElasticMedium, mq: usize) -> FunkQuadrature {
    let mq = mq.max(8);
    let (ks, kp) = (m.ks(), m.kp());
    let rho = [x[0] - z[0], x[1] - z[1]];
    let w = 2.0 * PI / mq as f64;
    let cp = 1.0 / (m.lambda + 2.0 * m.mu);
    let cs = 1.0 / m.mu;
    let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
    for q in 0..mq {
        let (s, c) = (q as f64 * w).sin_cos();
        let d = [c, s];
        let proj = rho[0] * d[0] + rho[1] * d[1];
        let ep = Complex64::from_polar(1.0, kp * proj) * cp;
        let es = Complex64::from_polar(1.0, ks * proj) * cs;
        for i in 0..2 {
            for j in 0..2 {
                let dd = d[i] * d[j];
                let delta = if i == j { 1.0 } else { 0.0 };
                acc[i][j] += ep * dd + es * (delta - dd);
            }
        }
    }
    let s = w / (8.0 * PI);
    let mut value = [[0.0; 2]; 2];
    let mut imag_residue: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            value[i][j] = acc[i][j].re * s;
            imag_residue = imag_residue.max((acc[i][j].im * s).abs());
        }
    }
    FunkQuadrature { value, imag_residue }
}

/// `(1/2pi) \oint exp(i k (x - z).d) ds(d)` by the `mq`-point trapezoid rule.
pub fn funk_hecke_mean(x: Point, z: Point, k: f64, mq: usize) -> Complex64 {
    let rho = [x[0] - z[0], x[1] - z[1]];
    let w = 2.0 * PI / mq as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for q in 0..mq {
        let (s, c) = (q as f64 * w).sin_cos();
        acc += Complex64::from_polar(1.0, k * (rho[0] * c + rho[1] * s));
    }
    acc / mq as f64
}

/// `lim (Pi + (2/pi) Im Pi ln r)` as `x - y -> 0` along the unit direction
/// `tangent`.
pub fn green_regular_limit(m: &ElasticMedium, tangent: Point) -> Tensor2 {
    let (ks, kp) = (m.ks(), m.kp());
    let beta2 = (kp / ks).powi(2);
    let ls = (0.5 * ks).ln() + EULER_GAMMA;
    let lp = (0.5 * kp).ln() + EULER_GAMMA;
    let iso = Complex64::new(0.0, 0.25 / m.mu)
        * Complex64::new(
            0.5 * (1.0 + beta2),
            FRAC_1_PI * (ls + beta2 * lp) + 0.5 * FRAC_1_PI * (1.0 - beta2),
        );
    let b = (1.0 - beta2) / (4.0 * PI * m.mu);
    let mut out = ZERO2;
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { iso } else { Complex64::new(0.0, 0.0) };
            out[i][j] = delta + b * tangent[i] * tangent[j];
        }
    }
    out
}

/// Limit of `P_y[Pi(x, y)]` as `x -> y` along a curve with unit normal
/// `normal` (at `y`) and signed curvature `curvature` (positive when the
/// curve bends towards the normal).
pub fn stress_curvature_limit(m: &ElasticMedium, sp: &StressParams, normal: Point, curvature: f64) -> RealTensor2 {
    let beta2 = (m.kp() / m.ks()).powi(2);
    let a = -(1.0 + beta2) / (4.0 * PI * m.mu);
    let b = (1.0 - beta2) / (4.0 * PI * m.mu);
    let c_norm = m.mu + sp.mu_t;
    let nn_coef = c_norm * (a + 2.0 * b) + sp.lambda_t * (a + b);
    let tt_coef = c_norm * (a - 2.0 * b) - sp.mu_t * (a - b);
    let t = [normal[1], -normal[0]];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = -0.5 * curvature * (nn_coef * normal[i] * normal[j] + tt_coef * t[i] * t[j]);
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::validation::{navier_residual, stress_by_differences};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn medium(omega: f64) -> ElasticMedium {
        ElasticMedium::new(1.0, 1.0, omega).unwrap()
    }

    fn max_diff_c(a: &Tensor2, b: &Tensor2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((a[i][j] - b[i][j]).norm());
            }
        }
        m
    }

    fn max_abs_c(a: &Tensor2) -> f64 {
        a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn phi_imaginary_part_and_singularity() {
        let k = 7.0;
        let x = [0.3, -0.2];
        for r in [0.01, 0.5, 3.0, 40.0] {
            let z = [x[0] + r * 0.6, x[1] + r * 0.8];
            let p = phi_k(x, z, k).unwrap();
            assert!((p.im - j01(k * r).0 / 4.0).abs() < 1e-15);
        }
        assert!(matches!(phi_k(x, x, k), Err(Error::SingularPoint)));
        let r0 = 2.404825557695773 / k;
        assert!(phi_k([0.0, 0.0], [r0, 0.0], k).unwrap().im.abs() < 1e-10);
        // Re phi + ln(r)/(2 pi) tends to -(ln(k/2) + gamma)/(2 pi).
        let limit = -((0.5 * k).ln() + EULER_GAMMA) / (2.0 * PI);
        let r = 1e-7;
        let p = phi_k([0.0, 0.0], [r, 0.0], k).unwrap();
        assert!((p.re + r.ln() / (2.0 * PI) - limit).abs() < 1e-10);
    }

    #[test]
    fn green_is_transpose_symmetric() {
        let m = medium(12.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let z = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let a = navier_green(x, z, &m).unwrap();
            let b = navier_green(z, x, &m).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a[i][j] - b[j][i]).norm() < 1e-14);
                }
            }
        }
        assert!(navier_green([1.0, 1.0], [1.0, 1.0], &m).is_err());
    }

    #[test]
    fn green_entry_matches_second_differences() {
        let m = medium(10.0);
        let (ks, kp) = (m.ks(), m.kp());
        let h = 1e-4;
        for r in [0.3, 1.1, 2.7] {
            let x = [r, 0.0];
            let z = [0.0, 0.0];
            let diff = |p: Point| phi_k(p, z, ks).unwrap() - phi_k(p, z, kp).unwrap();
            let d2 = (diff([r + h, 0.0]) - diff(x) * 2.0 + diff([r - h, 0.0])) / (h * h);
            let expect = phi_k(x, z, ks).unwrap() / m.mu + d2 / (m.omega * m.omega);
            let got = navier_green(x, z, &m).unwrap()[0][0];
            assert!((got - expect).norm() / expect.norm() < 1e-5, "r = {r}");
        }
    }

    #[test]
    fn im_green_at_coincidence() {
        let m = medium(9.0);
        let t = im_green_closed([1.0, 2.0], [1.0, 2.0], &m);
        let expect = (1.0 / (m.lambda + 2.0 * m.mu) + 1.0 / m.mu) / 8.0;
        assert!((t[0][0] - expect).abs() < 1e-15 && t[0][1] == 0.0);
        let f = im_green_funk([1.0, 2.0], [1.0, 2.0], &m, 64);
        assert!((f.value[0][0] - expect).abs() < 1e-14);
        assert!((f.value[1][1] - expect).abs() < 1e-14);
        assert!(f.value[0][1].abs() < 1e-15);
        // Direct imaginary part approaches the same limit.
        let g = navier_green([1.0, 2.0], [1.0 + 1e-6, 2.0], &m).unwrap();
        assert!((g[0][0].im - expect).abs() < 1e-8);
    }

    #[test]
    fn closed_form_structure() {
        let m = medium(20.0);
        let t = im_green_closed([0.7, 0.4], [0.1, 0.4], &m);
        assert_eq!(t[0][1], 0.0);
        assert_eq!(t[1][0], 0.0);
        let x = [0.3, 0.9];
        let z = [-0.4, 0.2];
        let r = ((0.7f64).powi(2) * 2.0).sqrt();
        let t = im_green_closed(x, z, &m);
        let trace = (2.0 * f1(r, &m) + f2(r, &m)) / (4.0 * m.mu);
        assert!((t[0][0] + t[1][1] - trace).abs() < 1e-15);
    }

    #[test]
    fn funk_hecke_scalar_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let k = rng.random_range(0.5..20.0);
            let r = rng.random_range(0.0..(40.0 / k));
            let th = rng.random_range(0.0..2.0 * PI);
            let x = [r * th.cos(), r * th.sin()];
            let v = funk_hecke_mean(x, [0.0, 0.0], k, 1024);
            assert!((v.re - j01(k * r).0).abs() < 1e-10);
            assert!(v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn funk_route_matches_direct_imaginary_part() {
        let m = medium(20.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let r = rng.random_range(0.01..(40.0 / m.ks()));
            let th = rng.random_range(0.0..2.0 * PI);
            let x = [r * th.cos() + 0.2, r * th.sin() - 0.1];
            let z = [0.2, -0.1];
            let f = im_green_funk(x, z, &m, 1024);
            assert!(f.imag_residue < 1e-12);
            let g = navier_green(x, z, &m).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((f.value[i][j] - g[i][j].im).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn printed_f2_disagrees_corrected_agrees() {
        let m = medium(20.0);
        let x = [0.37, 0.11];
        let z = [0.0, 0.0];
        let funk = im_green_funk(x, z, &m, 1024).value;
        let good = im_green_closed(x, z, &m);
        let bad = im_green_closed_printed(x, z, &m);
        let err = |t: &RealTensor2| {
            (0..4)
                .map(|q| (t[q / 2][q % 2] - funk[q / 2][q % 2]).abs())
                .fold(0.0, f64::max)
        };
        assert!(err(&good) < 1e-10);
        assert!(err(&bad) > 1e-3);
    }

    #[test]
    fn stress_coefficients_unit_lame() {
        let m = medium(1.0);
        let sp = m.stress_params();
        assert_eq!((m.mu + sp.mu_t, sp.lambda_t, sp.mu_t), (1.5, 1.5, 0.5));
    }

    #[test]
    fn stress_kernel_matches_finite_differences() {
        let m = medium(15.0);
        let sp = m.stress_params();
        let lam = m.shear_wavelength();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let r = rng.random_range(0.5 * lam..6.0 * lam);
            let th = rng.random_range(0.0..2.0 * PI);
            let nth = rng.random_range(0.0..2.0 * PI);
            let yp = CurvePoint {
                y: [0.1, 0.2],
                normal: [nth.cos(), nth.sin()],
            };
            let x = [0.1 + r * th.cos(), 0.2 + r * th.sin()];
            let k = stress_kernel(x, &yp, &m, &sp).unwrap();
            let fd = stress_by_differences(x, &yp, &m, 1e-5);
            assert!(max_diff_c(&k, &fd) / max_abs_c(&fd) < 1e-5);
        }
    }

    #[test]
    fn stress_kernel_decays_like_inverse_sqrt() {
        let m = medium(5.0);
        let sp = m.stress_params();
        let yp = CurvePoint {
            y: [0.0, 0.0],
            normal: [0.0, 1.0],
        };
        let scaled: Vec<f64> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&r| max_abs_c(&stress_kernel([r * 0.6, r * 0.8], &yp, &m, &sp).unwrap()) * r.sqrt())
            .collect();
        let (lo, hi) = scaled
            .iter()
            .fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo < 1.5, "{scaled:?}");
        assert!(stress_kernel([0.0, 0.0], &yp, &m, &sp).is_err());
    }

    #[test]
    fn navier_equation_residual() {
        let m = medium(10.0);
        let lam = m.shear_wavelength();
        for &(r, th) in &[(1.0 * lam, 0.3), (1.7 * lam, 2.0), (3.1 * lam, -1.2)] {
            let x = [r * f64::cos(th), r * f64::sin(th)];
            let res = navier_residual(x, [0.0, 0.0], &m, 1e-3);
            assert!(res < 1e-4, "r = {r}: {res}");
        }
    }

    #[test]
    fn im_green_bounded_and_decaying() {
        let m = medium(20.0);
        let lam = m.shear_wavelength();
        let mx = |r: f64| {
            let t = im_green_closed([r * 0.8, r * 0.6], [0.0, 0.0], &m);
            t.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
        };
        assert!(mx(100.0 * lam) <= 0.2 * mx(1.0 * lam));
    }

    #[test]
    fn regular_part_limit() {
        let m = medium(20.0);
        let t = [0.6, 0.8];
        let r: f64 = 1e-5;
        let x = [r * t[0], r * t[1]];
        let g = navier_green(x, [0.0, 0.0], &m).unwrap();
        let im = im_green_closed(x, [0.0, 0.0], &m);
        let lim = green_regular_limit(&m, t);
        for i in 0..2 {
            for j in 0..2 {
                let v = g[i][j] + 2.0 / PI * im[i][j] * r.ln();
                assert!((v - lim[i][j]).norm() < 1e-6, "{i}{j}: {v} vs {}", lim[i][j]);
            }
        }
    }

    #[test]
    fn stress_limit_along_curve() {
        // Parabola y = c x^2 through the origin, normal (-f', 1)/|.|.
        let m = medium(20.0);
        let sp = m.stress_params();
        let c = 0.8;
        let curve = |s: f64| {
            let fp = 2.0 * c * s;
            let nrm = (1.0 + fp * fp).sqrt();
            CurvePoint {
                y: [s, c * s * s],
                normal: [-fp / nrm, 1.0 / nrm],
            }
        };
        let x0 = 0.3;
        let fp: f64 = 2.0 * c * x0;
        let kappa = 2.0 * c / (1.0 + fp * fp).powf(1.5);
        let p = curve(x0);
        let lim = stress_curvature_limit(&m, &sp, p.normal, kappa);
        for eps in [1e-5, -1e-5] {
            let k = stress_kernel(curve(x0 + eps).y, &p, &m, &sp).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (k[i][j] - lim[i][j]).norm() < 1e-3,
                        "{i}{j}: {} vs {}",
                        k[i][j],
                        lim[i][j]
                    );
                }
            }
        }
        // Flat curve: the limit vanishes.
        let flat = CurvePoint {
            y: [0.0, 0.0],
            normal: [0.0, 1.0],
        };
        let k = stress_kernel([1e-5, 0.0], &flat, &m, &sp).unwrap();
        assert!(max_abs_c(&k) < 1e-3, "{k:?}");
    }
}
