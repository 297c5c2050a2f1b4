//! Closed-form reflection of a plane wave by a rigid flat surface `x2 = c`.
//!
//! The incident wave and the two reflected waves share the horizontal
//! wavenumber `xi`; vertical wavenumbers are `q = sqrt(k^2 - xi^2)` on the
//! branch `Im q >= 0`, so a converted wave past its critical angle decays
//! away from the surface.

use crate::error::{Error, Result};
use crate::medium::{ElasticMedium, Point, WaveKind};
use num_complex::Complex64;

use super::IncidentWave;

type CVec = [Complex64; 2];

/// Reflection data for one incident plane wave.
#[derive(Clone, Copy, Debug)]
pub struct FlatReflection {
    pub height: f64,
    pub xi: f64,
    pub kp: f64,
    pub ks: f64,
    pub q_p: Complex64,
    pub q_s: Complex64,
    /// Amplitudes of the reflected P and S waves, referenced to `x2 = c`.
    pub r_p: Complex64,
    pub r_s: Complex64,
    pub pol_p: CVec,
    pub pol_s: CVec,
    incident: IncidentWave,
}

#[inline]
fn vertical(k: f64, xi: f64) -> Complex64 {
    Complex64::new(k * k - xi * xi, 0.0).sqrt()
}

/// Cramer's rule for `[c0 c1] x = rhs`.
fn cramer(c0: CVec, c1: CVec, rhs: CVec) -> Result<(Complex64, Complex64)> {
    let det = c0[0] * c1[1] - c0[1] * c1[0];
    if det.norm() < 1e-14 {
        return Err(Error::SingularSystem);
    }
    Ok((
        (rhs[0] * c1[1] - rhs[1] * c1[0]) / det,
        (c0[0] * rhs[1] - c0[1] * rhs[0]) / det,
    ))
}

/// Gaussian elimination with partial pivoting, kept separate from
/// [`cramer`] as a cross-check.
fn eliminate(c0: CVec, c1: CVec, rhs: CVec) -> Result<(Complex64, Complex64)> {
    let mut a = [[c0[0], c1[0], rhs[0]], [c0[1], c1[1], rhs[1]]];
    if a[1][0].norm() > a[0][0].norm() {
        a.swap(0, 1);
    }
    if a[0][0].norm() < 1e-14 {
        return Err(Error::SingularSystem);
    }
    let f = a[1][0] / a[0][0];
    for c in 0..3 {
        let v = a[0][c];
        a[1][c] -= f * v;
    }
    if a[1][1].norm() < 1e-14 {
        return Err(Error::SingularSystem);
    }
    let x1 = a[1][2] / a[1][1];
    let x0 = (a[0][2] - a[0][1] * x1) / a[0][0];
    Ok((x0, x1))
}

impl FlatReflection {
    pub fn new(m: &ElasticMedium, inc: IncidentWave, height: f64) -> Result<Self> {
        let d = inc.direction;
        if !(d.y() < 0.0) {
            return Err(Error::InvalidParameter(
                "flat oracle needs a downgoing incident wave".into(),
            ));
        }
        let (kp, ks) = (m.kp(), m.ks());
        let k_in = inc.kind.wavenumber(m);
        let xi = k_in * d.x();
        let q_p = vertical(kp, xi);
        let q_s = vertical(ks, xi);
        let pol_p = [Complex64::new(xi / kp, 0.0), q_p / kp];
        let pol_s = [-q_s / ks, Complex64::new(xi / ks, 0.0)];
        // Incident trace on x2 = c at x1 = 0.
        let phase = Complex64::from_polar(1.0, k_in * d.y() * height);
        let pol_in = inc.kind.polarization(d);
        let rhs = [-phase * pol_in[0], -phase * pol_in[1]];
        let (r_p, r_s) = cramer(pol_p, pol_s, rhs)?;
        let (e_p, e_s) = eliminate(pol_p, pol_s, rhs)?;
        let scale = r_p.norm().max(r_s.norm()).max(1.0);
        if (r_p - e_p).norm() > 1e-10 * scale || (r_s - e_s).norm() > 1e-10 * scale {
            return Err(Error::SingularSystem);
        }
        Ok(FlatReflection {
            height,
            xi,
            kp,
            ks,
            q_p,
            q_s,
            r_p,
            r_s,
            pol_p,
            pol_s,
            incident: inc,
        })
    }

    /// Scattered (reflected) field at `x`.
    pub fn scattered(&self, x: Point) -> CVec {
        let h = Complex64::from_polar(1.0, self.xi * x[0]);
        let dz = x[1] - self.height;
        let ep = h * (Complex64::i() * self.q_p * dz).exp() * self.r_p;
        let es = h * (Complex64::i() * self.q_s * dz).exp() * self.r_s;
        [
            ep * self.pol_p[0] + es * self.pol_s[0],
            ep * self.pol_p[1] + es * self.pol_s[1],
        ]
    }

    /// `sum |R|^2 (q_r / k_r^2) / (q_in / k_in^2)` over propagating
    /// reflected waves; equals one by energy conservation.
    pub fn flux_ratio(&self) -> f64 {
        let (k_in, q_in) = match self.incident.kind {
            WaveKind::P => (self.kp, self.q_p.re),
            WaveKind::S => (self.ks, self.q_s.re),
        };
        let mut out = 0.0;
        if self.q_p.im == 0.0 && self.q_p.re > 0.0 {
            out += self.r_p.norm_sqr() * self.q_p.re / (self.kp * self.kp);
        }
        if self.q_s.im == 0.0 && self.q_s.re > 0.0 {
            out += self.r_s.norm_sqr() * self.q_s.re / (self.ks * self.ks);
        }
        out / (q_in / (k_in * k_in))
    }

    /// Whether the mode-converted wave is evanescent.
    pub fn converted_evanescent(&self) -> bool {
        self.q_p.im > 0.0 || self.q_s.im > 0.0
    }
}

/// Scattered field of a downgoing plane wave over the rigid plane `x2 = c`.
pub fn flat_oracle(m: &ElasticMedium, inc: IncidentWave, x: Point, height: f64) -> Result<CVec> {
    Ok(FlatReflection::new(m, inc, height)?.scattered(x))
}
