//! Nystrom discretisation of `(I + D - i eta S) phi = 2 taper u_in` on the
//! truncated boundary.
//!
//! The kernel `K = P_y[Pi]^T - i eta Pi` is split as
//! `K = K1 ln(4 sin^2((s - sigma)/2)) + K2` with
//! `K1 = -(1/pi) (P_y[Im Pi]^T - i eta Im Pi)` localised by a smooth window, so
//! the log part is integrated with the periodic log-weights and `K2` with the
//! plain trapezoid rule.

use crate::error::{Error, Result};
use crate::greens::{
    green_and_stress, green_regular_limit, im_green_and_stress, stress_curvature_limit, CurvePoint, RealTensor2,
    Tensor2,
};
use crate::medium::{ElasticMedium, Point, StressParams};
use crate::surface::SurfaceProfile;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::f64::consts::{FRAC_1_PI, PI};
use std::time::Instant;

use super::boundary::{TruncatedBoundary, MIN_NODES_PER_WAVELENGTH};
use super::quadrature::{log_sin2, log_weight, log_weights, trig_cardinal, window};
use super::IncidentWave;

/// Density values `phi(y_q)`, one complex 2-vector per node.
pub type Density = Vec<[Complex64; 2]>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Assembled and factorised boundary system. Depends on the surface, the
/// medium and `eta` only.
pub struct BieSystem {
    surface: SurfaceProfile,
    boundary: TruncatedBoundary,
    medium: ElasticMedium,
    stress: StressParams,
    eta: Complex64,
    log_w: Vec<f64>,
    lu: PartialPivLu<Complex64>,
    hash: String,
}

/// `K` and its log coefficient `K1` for target `x` and source `src`.
#[inline]
fn kernel_pair(
    x: Point,
    src: &CurvePoint,
    m: &ElasticMedium,
    sp: &StressParams,
    eta: Complex64,
) -> Result<(Tensor2, Tensor2)> {
    let (g, pg) = green_and_stress(x, src, m, sp)?;
    let (ig, ipg) = im_green_and_stress(x, src, m, sp);
    let ie = Complex64::i() * eta;
    let mut k = [[ZERO; 2]; 2];
    let mut k1 = [[ZERO; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            // The double layer acts through the transpose of P_y[Pi]: the
            // first index of Pi is the component of the field at x.
            k[a][b] = pg[b][a] - ie * g[a][b];
            k1[a][b] = (ie * ig[a][b] - ipg[b][a]) * FRAC_1_PI;
        }
    }
    Ok((k, k1))
}

impl BieSystem {
    /// Assemble and factorise. Rows are filled in parallel.
    pub fn assemble(
        surface: &SurfaceProfile,
        medium: &ElasticMedium,
        eta: Complex64,
        boundary: TruncatedBoundary,
    ) -> Result<Self> {
        let start = Instant::now();
        if !(eta.re > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling eta = {eta} needs Re(eta) > 0"
            )));
        }
        boundary.check_resolution(medium, MIN_NODES_PER_WAVELENGTH)?;
        let sp = medium.stress_params();
        let q = boundary.len();
        let n = boundary.half_count();
        let dim = 2 * q;
        let log_w = log_weights(n);
        let diag = diagonal_blocks(&boundary, medium, &sp, eta);
        let lw = boundary.half_width;
        let step = PI / n as f64;

        // Column pair j holds the source node j; faer is column-major.
        let mut data = vec![ZERO; dim * dim];
        data.par_chunks_mut(2 * dim)
            .enumerate()
            .try_for_each(|(j, cols)| -> Result<()> {
                let src = &boundary.points[j];
                let scale = 2.0 * boundary.speed[j] * lw * FRAC_1_PI;
                for i in 0..q {
                    let r = log_w[(i + q - j) % q];
                    let block = if i == j {
                        let (k1, k2) = &diag[j];
                        let mut b = [[ZERO; 2]; 2];
                        for a in 0..2 {
                            for c in 0..2 {
                                b[a][c] = (k1[a][c] * r + k2[a][c] * step) * scale;
                            }
                        }
                        b
                    } else {
                        let (k, k1) = kernel_pair(boundary.points[i].y, src, medium, &sp, eta)?;
                        let chi = window(boundary.separation(boundary.t[i], boundary.t[j]), lw);
                        let lg = log_sin2(step * (i as f64 - j as f64));
                        let mut b = [[ZERO; 2]; 2];
                        for a in 0..2 {
                            for c in 0..2 {
                                let k2 = k[a][c] - k1[a][c] * (chi * lg);
                                b[a][c] = (k1[a][c] * (chi * r) + k2 * step) * scale;
                            }
                        }
                        b
                    };
                    for c in 0..2 {
                        for a in 0..2 {
                            let mut v = block[a][c];
                            if i == j && a == c {
                                v += 1.0;
                            }
                            cols[c * dim + 2 * i + a] = v;
                        }
                    }
                }
                Ok(())
            })?;

        let mut hasher = Sha256::new();
        for v in &data {
            hasher.update(v.re.to_le_bytes());
            hasher.update(v.im.to_le_bytes());
        }
        let hash = format!("{:x}", hasher.finalize());

        let mat = Mat::from_fn(dim, dim, |i, j| data[j * dim + i]);
        drop(data);
        log::info!("filled {dim}x{dim} matrix in {:.2?}", start.elapsed());
        let start = Instant::now();
        let lu = mat.partial_piv_lu();
        let u = lu.U();
        let mut umax: f64 = 0.0;
        let mut umin = f64::INFINITY;
        for i in 0..dim {
            let v = u[(i, i)].norm();
            umax = umax.max(v);
            umin = umin.min(v);
        }
        if !umin.is_finite() || !umax.is_finite() || umin <= 1e-14 * umax {
            return Err(Error::SingularSystem);
        }
        log::info!("factorised in {:.2?}, pivot ratio {:.3e}", start.elapsed(), umin / umax);
        Ok(BieSystem {
            surface: surface.clone(),
            boundary,
            medium: *medium,
            stress: sp,
            eta,
            log_w,
            lu,
            hash,
        })
    }

    pub fn boundary(&self) -> &TruncatedBoundary {
        &self.boundary
    }

    pub fn medium(&self) -> &ElasticMedium {
        &self.medium
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// SHA-256 of the assembled matrix entries.
    pub fn assembly_hash(&self) -> &str {
        &self.hash
    }

    pub fn dim(&self) -> usize {
        2 * self.boundary.len()
    }

    /// Right-hand side `2 taper(t_q) u_in(y_q)`.
    pub fn rhs(&self, inc: &IncidentWave) -> Vec<Complex64> {
        let b = &self.boundary;
        let mut out = Vec::with_capacity(self.dim());
        for (q, p) in b.points.iter().enumerate() {
            let u = inc.trace(p.y, &self.medium);
            let w = 2.0 * b.taper.eval(b.t[q]);
            out.push(u[0] * w);
            out.push(u[1] * w);
        }
        out
    }

    /// Solve for an arbitrary right-hand side vector of length `2Q`.
    pub fn solve_rhs(&self, rhs: &[Complex64]) -> Result<Density> {
        if rhs.len() != self.dim() {
            return Err(Error::Shape(format!(
                "rhs has {} entries, expected {}",
                rhs.len(),
                self.dim()
            )));
        }
        let b = Mat::from_fn(self.dim(), 1, |i, _| rhs[i]);
        let x = self.lu.solve(&b);
        Ok((0..self.boundary.len())
            .map(|q| [x[(2 * q, 0)], x[(2 * q + 1, 0)]])
            .collect())
    }

    pub fn solve_density(&self, inc: &IncidentWave) -> Result<Density> {
        self.solve_rhs(&self.rhs(inc))
    }

    /// One blocked solve for many incident waves; column `c` of the result
    /// belongs to `incs[c]`.
    pub fn solve_many(&self, incs: &[IncidentWave]) -> Mat<Complex64> {
        let cols: Vec<Vec<Complex64>> = incs.par_iter().map(|inc| self.rhs(inc)).collect();
        let b = Mat::from_fn(self.dim(), incs.len(), |i, j| cols[j][i]);
        self.lu.solve(&b)
    }

    fn check_domain(&self, x: Point) -> Result<()> {
        if !(x[0].is_finite() && x[1].is_finite()) || x[1] <= self.surface.eval(x[0]) {
            return Err(Error::Domain(x[0], x[1]));
        }
        Ok(())
    }

    /// `u_sc(x) = -sum_q w_q K(x, y_q) phi_q`.
    pub fn scattered_field(&self, density: &[[Complex64; 2]], x: Point) -> Result<[Complex64; 2]> {
        self.check_domain(x)?;
        if density.len() != self.boundary.len() {
            return Err(Error::Shape(format!(
                "density has {} nodes, expected {}",
                density.len(),
                self.boundary.len()
            )));
        }
        let mut u = [ZERO; 2];
        for (q, src) in self.boundary.points.iter().enumerate() {
            let k = self.kernel_only(x, src)?;
            let w = self.boundary.weight(q);
            for a in 0..2 {
                u[a] -= (k[a][0] * density[q][0] + k[a][1] * density[q][1]) * w;
            }
        }
        Ok(u)
    }

    #[inline]
    fn kernel_only(&self, x: Point, src: &CurvePoint) -> Result<Tensor2> {
        let (g, pg) = green_and_stress(x, src, &self.medium, &self.stress)?;
        let ie = Complex64::i() * self.eta;
        let mut k = [[ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                k[a][b] = pg[b][a] - ie * g[a][b];
            }
        }
        Ok(k)
    }

    /// Matrix mapping stacked densities to stacked fields at `points`:
    /// rows `2p + a`, columns `2q + b`.
    pub fn field_operator(&self, points: &[Point]) -> Result<Mat<Complex64>> {
        for &x in points {
            self.check_domain(x)?;
        }
        let q = self.boundary.len();
        let rows: Vec<Vec<Complex64>> = points
            .par_iter()
            .map(|&x| -> Result<Vec<Complex64>> {
                let mut row = vec![ZERO; 4 * q];
                for (j, src) in self.boundary.points.iter().enumerate() {
                    let k = self.kernel_only(x, src)?;
                    let w = -self.boundary.weight(j);
                    for a in 0..2 {
                        for b in 0..2 {
                            row[a * 2 * q + 2 * j + b] = k[a][b] * w;
                        }
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(Mat::from_fn(2 * points.len(), 2 * q, |r, c| {
            rows[r / 2][(r % 2) * 2 * q + c]
        }))
    }

    /// Trigonometric interpolant of the density at parameter `t`.
    pub fn interpolate_density(&self, density: &[[Complex64; 2]], t: f64) -> [Complex64; 2] {
        let b = &self.boundary;
        let n = b.half_count();
        let s = b.param(t);
        let mut out = [ZERO; 2];
        for (j, d) in density.iter().enumerate() {
            let c = trig_cardinal(n, s - b.param(b.t[j]));
            out[0] += d[0] * c;
            out[1] += d[1] * c;
        }
        out
    }

    /// Boundary trace of the scattered field at the surface point above
    /// `t`: `-(1/2) (phi(t) + (D - i eta S) phi (t))`, with the integral
    /// taken by the same split quadrature as the matrix. `t` must not be a
    /// node.
    pub fn boundary_trace(&self, density: &[[Complex64; 2]], t: f64) -> Result<[Complex64; 2]> {
        self.boundary_trace_at(density, t, [t, self.surface.eval(t)])
    }

    /// [`Self::boundary_trace`] with the curve point `x = y(t)` supplied.
    pub fn boundary_trace_at(&self, density: &[[Complex64; 2]], t: f64, x: Point) -> Result<[Complex64; 2]> {
        let b = &self.boundary;
        let n = b.half_count();
        let s = b.param(t);
        let step = PI / n as f64;
        let mut acc = [ZERO; 2];
        for (j, src) in b.points.iter().enumerate() {
            let (k, k1) = kernel_pair(x, src, &self.medium, &self.stress, self.eta)?;
            let ds = s - b.param(b.t[j]);
            let chi = window(b.separation(t, b.t[j]), b.half_width);
            let r = log_weight(n, ds);
            let lg = log_sin2(ds);
            let scale = 2.0 * b.speed[j] * b.half_width * FRAC_1_PI;
            for a in 0..2 {
                for c in 0..2 {
                    let k2 = k[a][c] - k1[a][c] * (chi * lg);
                    let e = (k1[a][c] * (chi * r) + k2 * step) * scale;
                    acc[a] += e * density[j][c];
                }
            }
        }
        let phi = self.interpolate_density(density, t);
        Ok([(phi[0] + acc[0]) * -0.5, (phi[1] + acc[1]) * -0.5])
    }

    /// The log-weights `R_m` used by the matrix.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }
}

/// Diagonal `(K1, K2)` blocks at each node.
fn diagonal_blocks(
    b: &TruncatedBoundary,
    m: &ElasticMedium,
    sp: &StressParams,
    eta: Complex64,
) -> Vec<(Tensor2, Tensor2)> {
    let ie = Complex64::i() * eta;
    let beta2 = (m.kp() / m.ks()).powi(2);
    let im0 = 0.5 * (1.0 + beta2) / (4.0 * m.mu);
    (0..b.len())
        .map(|q| {
            let p = &b.points[q];
            let tangent = [p.normal[1], -p.normal[0]];
            let reg = green_regular_limit(m, tangent);
            let d: RealTensor2 = stress_curvature_limit(m, sp, p.normal, b.curvature[q]);
            let log_arc = (b.speed[q] * b.half_width * FRAC_1_PI).ln();
            let mut k1 = [[ZERO; 2]; 2];
            let mut k2 = [[ZERO; 2]; 2];
            for a in 0..2 {
                for c in 0..2 {
                    let im = if a == c { im0 } else { 0.0 };
                    let s_diag = reg[a][c] - 2.0 * FRAC_1_PI * im * log_arc;
                    k2[a][c] = Complex64::new(d[a][c], 0.0) - ie * s_diag;
                    k1[a][c] = ie * (im * FRAC_1_PI);
                }
            }
            (k1, k2)
        })
        .collect()
}
