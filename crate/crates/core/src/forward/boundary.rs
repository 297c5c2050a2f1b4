//! Truncated, tapered discretisation of the surface graph.

use crate::error::{Error, Result};
use crate::greens::CurvePoint;
use crate::medium::{ElasticMedium, Point};
use crate::surface::SurfaceProfile;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Illumination window `exp(-((|t| - t0)_+ / width)^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Taper {
    pub t0: f64,
    pub width: f64,
}

impl Taper {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let e = (t.abs() - self.t0).max(0.0) / self.width;
        (-e * e).exp()
    }
}

/// Solver knobs as they appear in the config file; `None` means default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub nodes_per_wavelength: f64,
    pub q: Option<usize>,
    pub half_width: Option<f64>,
    pub taper_flat: Option<f64>,
    pub taper_width: Option<f64>,
    /// Coupling parameter as `[re, im]`.
    pub eta: Option<[f64; 2]>,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            nodes_per_wavelength: MIN_NODES_PER_WAVELENGTH,
            q: None,
            half_width: None,
            taper_flat: None,
            taper_width: None,
            eta: None,
        }
    }
}

pub const MIN_NODES_PER_WAVELENGTH: f64 = 10.0;

/// Fully resolved solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedSolver {
    pub half_width: f64,
    pub q: usize,
    pub taper: Taper,
    pub eta: Complex64,
}

impl SolverParams {
    /// Fill in defaults relative to the measurement half-length `a_half`.
    pub fn resolve(&self, surface: &SurfaceProfile, m: &ElasticMedium, a_half: f64) -> Result<ResolvedSolver> {
        let lam = m.shear_wavelength();
        let half_width = self.half_width.unwrap_or(a_half + 8.0 * lam);
        let taper = Taper {
            t0: self.taper_flat.unwrap_or(a_half + 2.0 * lam),
            width: self.taper_width.unwrap_or(3.0 * lam),
        };
        if !(half_width > 0.0) || !(taper.width > 0.0) || !(taper.t0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "boundary half-width {half_width}, taper t0 {}, width {} must be positive",
                taper.t0, taper.width
            )));
        }
        let eta = match self.eta {
            Some([re, im]) => Complex64::new(re, im),
            None => Complex64::new(m.ks(), 0.0),
        };
        if !(eta.re > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling eta = {eta} needs Re(eta) > 0"
            )));
        }
        if !(self.nodes_per_wavelength >= MIN_NODES_PER_WAVELENGTH) {
            return Err(Error::Resolution {
                got: self.nodes_per_wavelength,
                need: MIN_NODES_PER_WAVELENGTH,
            });
        }
        let need = required_nodes(surface, half_width, lam, self.nodes_per_wavelength);
        let q = match self.q {
            None => need,
            Some(q) if q % 2 != 0 || q < 4 => {
                return Err(Error::InvalidParameter(format!(
                    "node count Q = {q} must be even and >= 4"
                )))
            }
            Some(q) => q,
        };
        Ok(ResolvedSolver {
            half_width,
            q,
            taper,
            eta,
        })
    }
}

fn max_speed(surface: &SurfaceProfile, half_width: f64) -> f64 {
    let samples = 20_000;
    (0..=samples)
        .map(|i| {
            let t = -half_width + 2.0 * half_width * i as f64 / samples as f64;
            let fp = surface.deriv(t);
            (1.0 + fp * fp).sqrt()
        })
        .fold(1.0, f64::max)
}

/// Smallest even `Q` with arc-length spacing at most `lam / npw`.
pub fn required_nodes(surface: &SurfaceProfile, half_width: f64, lam: f64, npw: f64) -> usize {
    let speed = max_speed(surface, half_width);
    let q = (2.0 * half_width * speed * npw / lam).ceil() as usize;
    (q + q % 2).max(4)
}

/// Nodes `t_q = -L + 2 L q / Q`, `q = 0..Q`, on the graph of `f`, treated
/// as one period of a closed parameter `s = pi (t + L) / L`.
#[derive(Clone, Debug)]
pub struct TruncatedBoundary {
    pub half_width: f64,
    pub taper: Taper,
    pub t: Vec<f64>,
    pub points: Vec<CurvePoint>,
    /// `sqrt(1 + f'^2)` at each node.
    pub speed: Vec<f64>,
    /// Signed curvature `f'' / (1 + f'^2)^(3/2)`.
    pub curvature: Vec<f64>,
    /// Closed curve: parameter differences are taken modulo the period.
    pub closed: bool,
}

impl TruncatedBoundary {
    pub fn new(surface: &SurfaceProfile, half_width: f64, q: usize, taper: Taper) -> Result<Self> {
        if q % 2 != 0 || q < 4 {
            return Err(Error::InvalidParameter(format!(
                "node count Q = {q} must be even and >= 4"
            )));
        }
        let dt = 2.0 * half_width / q as f64;
        let t: Vec<f64> = (0..q).map(|i| -half_width + i as f64 * dt).collect();
        let mut points = Vec::with_capacity(q);
        let mut speed = Vec::with_capacity(q);
        let mut curvature = Vec::with_capacity(q);
        for &ti in &t {
            let fp = surface.deriv(ti);
            let sp = (1.0 + fp * fp).sqrt();
            points.push(CurvePoint {
                y: [ti, surface.eval(ti)],
                normal: [-fp / sp, 1.0 / sp],
            });
            speed.push(sp);
            curvature.push(surface.second_deriv(ti) / (sp * sp * sp));
        }
        Ok(TruncatedBoundary {
            half_width,
            taper,
            t,
            points,
            speed,
            curvature,
            closed: false,
        })
    }

    pub fn from_resolved(surface: &SurfaceProfile, r: &ResolvedSolver) -> Result<Self> {
        Self::new(surface, r.half_width, r.q, r.taper)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.t.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `n` with `Q = 2n`.
    #[inline]
    pub fn half_count(&self) -> usize {
        self.len() / 2
    }

    #[inline]
    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / self.len() as f64
    }

    /// Arc-length quadrature weight `dt * sqrt(1 + f'^2)`.
    #[inline]
    pub fn weight(&self, q: usize) -> f64 {
        self.dt() * self.speed[q]
    }

    /// Periodic parameter of `t`.
    #[inline]
    pub fn param(&self, t: f64) -> f64 {
        PI * (t + self.half_width) / self.half_width
    }

    /// Largest arc-length node spacing.
    pub fn max_spacing(&self) -> f64 {
        self.dt() * self.speed.iter().cloned().fold(0.0, f64::max)
    }

    /// Fails unless the arc spacing gives at least `npw` nodes per shear
    /// wavelength.
    pub fn check_resolution(&self, m: &ElasticMedium, npw: f64) -> Result<()> {
        let got = m.shear_wavelength() / self.max_spacing();
        if got + 1e-9 < npw {
            return Err(Error::Resolution { got, need: npw });
        }
        Ok(())
    }

    pub fn node(&self, q: usize) -> Point {
        self.points[q].y
    }

    /// `t - tau`, wrapped into `(-L, L]` on closed curves.
    #[inline]
    pub fn separation(&self, t: f64, tau: f64) -> f64 {
        let d = t - tau;
        if !self.closed {
            return d;
        }
        let p = 2.0 * self.half_width;
        d - p * ((d + self.half_width) / p).ceil() + p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::surface_registry;

    #[test]
    fn taper_profile() {
        let tp = Taper { t0: 2.0, width: 0.5 };
        assert_eq!(tp.eval(0.0), 1.0);
        assert_eq!(tp.eval(-2.0), 1.0);
        assert!((tp.eval(2.5) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(tp.eval(3.0), tp.eval(-3.0));
    }

    #[test]
    fn defaults_follow_wavelength() {
        let m = ElasticMedium::new(1.0, 1.0, 20.0).unwrap();
        let f = surface_registry("f2").unwrap();
        let r = SolverParams::default().resolve(&f, &m, 8.0).unwrap();
        let lam = m.shear_wavelength();
        assert!((r.half_width - (8.0 + 8.0 * lam)).abs() < 1e-12);
        assert!((r.taper.t0 - (8.0 + 2.0 * lam)).abs() < 1e-12);
        assert!((r.taper.width - 3.0 * lam).abs() < 1e-12);
        assert_eq!(r.eta, Complex64::new(20.0, 0.0));
        assert_eq!(r.q % 2, 0);
        let b = TruncatedBoundary::from_resolved(&f, &r).unwrap();
        b.check_resolution(&m, 10.0).unwrap();
        let coarser = TruncatedBoundary::new(&f, r.half_width, r.q - 40, r.taper).unwrap();
        assert!(matches!(
            coarser.check_resolution(&m, 10.0),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        let m = ElasticMedium::new(1.0, 1.0, 5.0).unwrap();
        let f = SurfaceProfile::flat(0.0);
        let p = SolverParams {
            eta: Some([0.0, 1.0]),
            ..Default::default()
        };
        assert!(p.resolve(&f, &m, 4.0).is_err());
        let p = SolverParams {
            q: Some(101),
            ..Default::default()
        };
        assert!(p.resolve(&f, &m, 4.0).is_err());
        let p = SolverParams {
            nodes_per_wavelength: 6.0,
            ..Default::default()
        };
        assert!(matches!(p.resolve(&f, &m, 4.0), Err(Error::Resolution { .. })));
    }

    #[test]
    fn nodes_lie_on_graph() {
        let f = surface_registry("f3").unwrap();
        let b = TruncatedBoundary::new(&f, 6.0, 64, Taper { t0: 3.0, width: 1.0 }).unwrap();
        for (i, p) in b.points.iter().enumerate() {
            assert_eq!(p.y[1], f.eval(b.t[i]));
            let n = p.normal;
            assert!(((n[0] * n[0] + n[1] * n[1]).sqrt() - 1.0).abs() < 1e-15);
            assert!(n[1] > 0.0);
            // Normal is orthogonal to the tangent (1, f').
            assert!((n[0] + n[1] * f.deriv(b.t[i])).abs() < 1e-15);
        }
        assert_eq!(b.param(-6.0), 0.0);
        assert!((b.param(b.t[1]) - PI / 32.0).abs() < 1e-15);
    }
}
