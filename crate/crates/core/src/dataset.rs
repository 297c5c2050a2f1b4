//! Near-field measurements `u_sc(x_j; d_k)` for both incident wave kinds.

use crate::error::{Error, Result};
use crate::medium::{DirectionGrid, ElasticMedium, MeasurementLine, WaveKind};
use num_complex::Complex64;

pub type Sample = [Complex64; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct NearFieldDataset {
    pub medium: ElasticMedium,
    pub line: MeasurementLine,
    pub grid: DirectionGrid,
    pub label: String,
    /// `data[kind][k * (2N + 1) + j]`.
    data: [Vec<Sample>; 2],
}

impl NearFieldDataset {
    pub fn new(
        medium: ElasticMedium,
        line: MeasurementLine,
        grid: DirectionGrid,
        label: impl Into<String>,
        p: Vec<Sample>,
        s: Vec<Sample>,
    ) -> Result<Self> {
        let expect = line.len() * grid.len();
        for (name, v) in [("P", &p), ("S", &s)] {
            if v.len() != expect {
                return Err(Error::Shape(format!(
                    "{name} block has {} samples, expected {} x {} = {expect}",
                    v.len(),
                    grid.len(),
                    line.len()
                )));
            }
            if v.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} block has non-finite samples")));
            }
        }
        Ok(NearFieldDataset {
            medium,
            line,
            grid,
            label: label.into(),
            data: [p, s],
        })
    }

    /// All-zero dataset with the given geometry.
    pub fn zeros(medium: ElasticMedium, line: MeasurementLine, grid: DirectionGrid, label: impl Into<String>) -> Self {
        let n = line.len() * grid.len();
        let z = vec![[Complex64::new(0.0, 0.0); 2]; n];
        NearFieldDataset {
            medium,
            line,
            grid,
            label: label.into(),
            data: [z.clone(), z],
        }
    }

    #[inline]
    pub fn receivers(&self) -> usize {
        self.line.len()
    }

    #[inline]
    pub fn directions(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn get(&self, kind: WaveKind, k: usize, j: usize) -> Sample {
        self.data[kind.index()][k * self.receivers() + j]
    }

    #[inline]
    pub fn set(&mut self, kind: WaveKind, k: usize, j: usize, v: Sample) {
        let r = self.receivers();
        self.data[kind.index()][k * r + j] = v;
    }

    /// Samples for one direction, ordered by receiver.
    pub fn row(&self, kind: WaveKind, k: usize) -> &[Sample] {
        let r = self.receivers();
        &self.data[kind.index()][k * r..(k + 1) * r]
    }

    pub fn samples(&self, kind: WaveKind) -> &[Sample] {
        &self.data[kind.index()]
    }

    pub fn samples_mut(&mut self, kind: WaveKind) -> &mut [Sample] {
        &mut self.data[kind.index()]
    }

    /// Multiply every sample by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for kind in WaveKind::ALL {
            for v in out.samples_mut(kind) {
                v[0] *= c;
                v[1] *= c;
            }
        }
        out
    }

    /// Largest sample modulus `max_j |u(x_j)|` for one kind and direction.
    pub fn max_modulus(&self, kind: WaveKind, k: usize) -> f64 {
        self.row(kind, k)
            .iter()
            .map(|v| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    /// Same medium, line and grid (labels may differ).
    pub fn same_geometry(&self, other: &Self) -> bool {
        self.medium == other.medium && self.line == other.line && self.grid == other.grid
    }
}
