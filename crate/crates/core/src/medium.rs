//! Elastic medium, incident directions and measurement geometry.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A point or vector in the plane.
pub type Point = [f64; 2];

/// Homogeneous isotropic elastic medium with unit density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
}

impl ElasticMedium {
    pub fn new(lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        let m = ElasticMedium { lambda, mu, omega };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu = {} must be > 0", self.mu)));
        }
        if !(self.lambda + self.mu >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda + mu = {} must be >= 0",
                self.lambda + self.mu
            )));
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega = {} must be > 0", self.omega)));
        }
        Ok(())
    }

    /// Compressional wavenumber `omega / sqrt(lambda + 2 mu)`.
    #[inline]
    pub fn kp(&self) -> f64 {
        self.omega / (self.lambda + 2.0 * self.mu).sqrt()
    }

    /// Shear wavenumber `omega / sqrt(mu)`.
    #[inline]
    pub fn ks(&self) -> f64 {
        self.omega / self.mu.sqrt()
    }

    #[inline]
    pub fn shear_wavelength(&self) -> f64 {
        2.0 * PI / self.ks()
    }

    pub fn stress_params(&self) -> StressParams {
        StressParams::special(self)
    }
}

/// Coefficients of the generalised stress operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressParams {
    pub mu_t: f64,
    pub lambda_t: f64,
}

impl StressParams {
    /// The choice that removes the Cauchy-type singularity from the
    /// double-layer kernel.
    pub fn special(m: &ElasticMedium) -> Self {
        let (l, mu) = (m.lambda, m.mu);
        StressParams {
            mu_t: mu * (mu + l) / (3.0 * mu + l),
            lambda_t: (2.0 * mu + l) * (mu + l) / (3.0 * mu + l),
        }
    }
}

/// Unit vector in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction(Point);

impl Direction {
    pub fn new(d: Point) -> Result<Self> {
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("direction norm {n} != 1")));
        }
        Ok(Direction(d))
    }

    /// `(cos theta, sin theta)`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Direction([c, s])
    }

    #[inline]
    pub fn vec(&self) -> Point {
        self.0
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.0[1]
    }

    /// Rotation by +pi/2: `(-d2, d1)`.
    #[inline]
    pub fn perp(&self) -> Direction {
        Direction([-self.0[1], self.0[0]])
    }

    /// Reflection across the horizontal axis: `(d1, -d2)`.
    #[inline]
    pub fn mirror(&self) -> Direction {
        Direction([self.0[0], -self.0[1]])
    }

    /// `(d')^perp = (d2, d1)`.
    #[inline]
    pub fn mirror_perp(&self) -> Direction {
        self.mirror().perp()
    }

    #[inline]
    pub fn dot(&self, x: Point) -> f64 {
        self.0[0] * x[0] + self.0[1] * x[1]
    }
}

/// Compressional or shear plane wave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    P,
    S,
}

impl WaveKind {
    pub const ALL: [WaveKind; 2] = [WaveKind::P, WaveKind::S];

    #[inline]
    pub fn wavenumber(self, m: &ElasticMedium) -> f64 {
        match self {
            WaveKind::P => m.kp(),
            WaveKind::S => m.ks(),
        }
    }

    /// Polarisation of a plane wave travelling along `d`: `d` or `d^perp`.
    #[inline]
    pub fn polarization(self, d: Direction) -> Point {
        match self {
            WaveKind::P => d.vec(),
            WaveKind::S => d.perp().vec(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            WaveKind::P => 0,
            WaveKind::S => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WaveKind::P => "P",
            WaveKind::S => "S",
        }
    }
}

/// `(x1, -x2)`.
#[inline]
pub fn mirror_point(x: Point) -> Point {
    [x[0], -x[1]]
}

/// Horizontal measurement segment `{x2 = a, |x1| <= A}` sampled at `2N + 1`
/// equispaced nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementLine {
    pub height: f64,
    pub half_length: f64,
    pub n: usize,
}

impl MeasurementLine {
    pub fn new(height: f64, half_length: f64, n: usize) -> Result<Self> {
        if !(half_length > 0.0) || n == 0 || !height.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "measurement line needs A > 0 and N >= 1 (got A = {half_length}, N = {n})"
            )));
        }
        Ok(MeasurementLine { height, half_length, n })
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.half_length / self.n as f64
    }

    #[inline]
    pub fn len(&self) -> usize {
        2 * self.n + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn node(&self, j: usize) -> Point {
        [-self.half_length + j as f64 * self.spacing(), self.height]
    }

    pub fn nodes(&self) -> Vec<Point> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }

    /// Trapezoid weights `h` with `h/2` at the two endpoints.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let last = self.len() - 1;
        (0..self.len())
            .map(|j| if j == 0 || j == last { 0.5 * h } else { h })
            .collect()
    }
}

/// Uniform discretisation of the lower half circle by `M + 1` directions
/// `(cos t_k, sin t_k)`, `t_k = -pi + k pi / M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    pub m: usize,
}

impl DirectionGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::InvalidGrid(format!("M = {m} must be even and >= 2")));
        }
        Ok(DirectionGrid { m })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> f64 {
        PI / self.m as f64
    }

    #[inline]
    pub fn angle(&self, k: usize) -> f64 {
        -PI + k as f64 * self.step()
    }

    pub fn direction(&self, k: usize) -> Direction {
        // Exact values at the grazing ends and the nadir.
        if k == 0 {
            Direction([-1.0, 0.0])
        } else if k == self.m {
            Direction([1.0, 0.0])
        } else if 2 * k == self.m {
            Direction([0.0, -1.0])
        } else {
            Direction::from_angle(self.angle(k))
        }
    }

    pub fn directions(&self) -> Vec<Direction> {
        (0..self.len()).map(|k| self.direction(k)).collect()
    }

    /// Trapezoid weights on the half circle; they sum to `pi`.
    pub fn weights(&self) -> Vec<f64> {
        let dt = self.step();
        (0..self.len())
            .map(|k| if k == 0 || k == self.m { 0.5 * dt } else { dt })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_for_unit_lame() {
        let m = ElasticMedium::new(1.0, 1.0, 15.0).unwrap();
        assert!((m.kp() - 8.660254037844386).abs() < 1e-12);
        assert_eq!(m.ks(), 15.0);
        assert!((m.kp() / m.ks() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(m.kp() < m.ks());
    }

    #[test]
    fn stress_params_unit_lame() {
        let m = ElasticMedium::new(1.0, 1.0, 1.0).unwrap();
        let sp = m.stress_params();
        assert!((sp.mu_t - 0.5).abs() < 1e-15);
        assert!((sp.lambda_t - 1.5).abs() < 1e-15);
        let m2 = ElasticMedium::new(2.3, 0.7, 1.0).unwrap();
        let sp2 = m2.stress_params();
        assert!((sp2.mu_t + sp2.lambda_t - 3.0).abs() < 1e-14);
    }

    #[test]
    fn medium_rejects_bad_constants() {
        assert!(ElasticMedium::new(1.0, 0.0, 1.0).is_err());
        assert!(ElasticMedium::new(-2.0, 1.0, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn perp_and_mirror() {
        let e1 = Direction::new([1.0, 0.0]).unwrap();
        assert_eq!(e1.perp().vec(), [0.0, 1.0]);
        let down = Direction::new([0.0, -1.0]).unwrap();
        assert_eq!(down.perp().vec(), [1.0, 0.0]);
        assert_eq!(down.mirror().vec(), [0.0, 1.0]);
        let d = Direction::from_angle(-2.1);
        let pp = d.perp().perp().vec();
        assert!((pp[0] + d.x()).abs() < 1e-15 && (pp[1] + d.y()).abs() < 1e-15);
        assert_eq!(d.mirror_perp().vec(), [d.y(), d.x()]);
        assert_eq!(mirror_point([3.0, 2.0]), [3.0, -2.0]);
    }

    #[test]
    fn direction_grid_layout() {
        let g = DirectionGrid::new(2).unwrap();
        let d: Vec<_> = g.directions().iter().map(|d| d.vec()).collect();
        assert_eq!(d, vec![[-1.0, 0.0], [0.0, -1.0], [1.0, 0.0]]);

        let g = DirectionGrid::new(256).unwrap();
        assert_eq!(g.direction(128).vec(), [0.0, -1.0]);
        for k in 1..256 {
            assert!(g.direction(k).y() < 0.0);
            let a = g.direction(k);
            let b = g.direction(256 - k);
            assert!((a.x() + b.x()).abs() < 1e-14 && (a.y() - b.y()).abs() < 1e-14);
            assert!(((a.x() * a.x() + a.y() * a.y()).sqrt() - 1.0).abs() < 1e-14);
        }
        let s: f64 = g.weights().iter().sum();
        assert!((s - PI).abs() < 1e-13);

        assert!(DirectionGrid::new(3).is_err());
        assert!(DirectionGrid::new(0).is_err());
    }

    #[test]
    fn measurement_nodes() {
        let l = MeasurementLine::new(2.0, 8.0, 200).unwrap();
        let nodes = l.nodes();
        assert_eq!(nodes.len(), 401);
        assert_eq!(nodes[0], [-8.0, 2.0]);
        assert!((nodes[400][0] - 8.0).abs() < 1e-12);
        assert!((l.spacing() - 0.04).abs() < 1e-15);
        let s: f64 = l.weights().iter().sum();
        assert!((s - 16.0).abs() < 1e-12);
    }
}
