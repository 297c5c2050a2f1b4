//! Forward scattering by a rigid rough surface.

pub mod boundary;
pub mod oracle;
pub mod quadrature;
pub mod system;

pub use boundary::{ResolvedSolver, SolverParams, Taper, TruncatedBoundary};
pub use oracle::{flat_oracle, FlatReflection};
pub use system::{BieSystem, Density};

use crate::dataset::{NearFieldDataset, Sample};
use crate::error::{Error, Result};
use crate::medium::{Direction, DirectionGrid, ElasticMedium, MeasurementLine, Point, WaveKind};
use crate::surface::SurfaceProfile;
use num_complex::Complex64;
use std::time::Instant;

/// Unit-amplitude plane wave `d e^{i kp d.x}` or `d^perp e^{i ks d.x}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncidentWave {
    pub kind: WaveKind,
    pub direction: Direction,
}

impl IncidentWave {
    pub fn new(kind: WaveKind, direction: Direction) -> Self {
        IncidentWave { kind, direction }
    }

    pub fn trace(&self, x: Point, m: &ElasticMedium) -> [Complex64; 2] {
        let k = self.kind.wavenumber(m);
        let e = Complex64::from_polar(1.0, k * self.direction.dot(x));
        let p = self.kind.polarization(self.direction);
        [e * p[0], e * p[1]]
    }

    pub fn is_downgoing(&self) -> bool {
        self.direction.y() < 0.0
    }
}

/// Assemble the system for `surface` with settings resolved against a
/// measurement half-length.
pub fn build_system(
    surface: &SurfaceProfile,
    medium: &ElasticMedium,
    params: &SolverParams,
    a_half: f64,
) -> Result<BieSystem> {
    let r = params.resolve(surface, medium, a_half)?;
    let boundary = TruncatedBoundary::from_resolved(surface, &r)?;
    BieSystem::assemble(surface, medium, r.eta, boundary)
}

/// Scattered fields at `points` for every wave in `incs`; entry
/// `[c][p]` belongs to wave `c` and point `p`.
pub fn sample_fields(system: &BieSystem, incs: &[IncidentWave], points: &[Point]) -> Result<Vec<Vec<Sample>>> {
    let start = Instant::now();
    let phi = system.solve_many(incs);
    let solve = start.elapsed();
    log::info!(
        "solved {} right-hand sides in {solve:.2?} ({:.2?} each)",
        incs.len(),
        solve / incs.len().max(1) as u32
    );
    let start = Instant::now();
    let op = system.field_operator(points)?;
    let u = &op * &phi;
    log::info!("evaluated fields at {} points in {:.2?}", points.len(), start.elapsed());
    Ok((0..incs.len())
        .map(|c| (0..points.len()).map(|p| [u[(2 * p, c)], u[(2 * p + 1, c)]]).collect())
        .collect())
}

/// Dataset on `line` for all directions of `grid`, both wave kinds, from an
/// already assembled system.
pub fn dataset_from_system(
    system: &BieSystem,
    line: MeasurementLine,
    grid: DirectionGrid,
    label: impl Into<String>,
) -> Result<NearFieldDataset> {
    let dirs = grid.directions();
    let incs: Vec<IncidentWave> = WaveKind::ALL
        .iter()
        .flat_map(|&kind| dirs.iter().map(move |&d| IncidentWave::new(kind, d)))
        .collect();
    let fields = sample_fields(system, &incs, &line.nodes())?;
    let nd = dirs.len();
    let mut blocks = [Vec::new(), Vec::new()];
    for (c, f) in fields.into_iter().enumerate() {
        blocks[c / nd].extend(f);
    }
    let [p, s] = blocks;
    NearFieldDataset::new(*system.medium(), line, grid, label, p, s)
}

/// Full forward run: one assembly and `2(M + 1)` solves.
pub fn generate_dataset(
    surface: &SurfaceProfile,
    medium: &ElasticMedium,
    line: MeasurementLine,
    grid: DirectionGrid,
    params: &SolverParams,
    label: impl Into<String>,
) -> Result<NearFieldDataset> {
    if !(line.height > surface.f_sup()) {
        return Err(Error::InvalidParameter(format!(
            "measurement height a = {} must exceed sup f = {}",
            line.height,
            surface.f_sup()
        )));
    }
    let start = Instant::now();
    let system = build_system(surface, medium, params, line.half_length)?;
    log::info!(
        "system with Q = {} nodes ready in {:.2?} (hash {})",
        system.boundary().len(),
        start.elapsed(),
        &system.assembly_hash()[..12]
    );
    let ds = dataset_from_system(&system, line, grid, label)?;
    log::info!("forward run finished in {:.2?}", start.elapsed());
    Ok(ds)
}
