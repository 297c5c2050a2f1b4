//! Subcommand implementations.

use crate::config::{ExperimentConfig, SweepAxis, SweepValue};
use crate::presets::preset;
use crate::render::render;
use rayon::prelude::*;
use roughscat::dataset::NearFieldDataset;
use roughscat::forward::{generate_dataset, FlatReflection, IncidentWave};
use roughscat::imaging::{extract_surface, image_grid, CurveMetrics, ImagingResult};
use roughscat::medium::WaveKind;
use roughscat::surface::{surface_registry, SurfaceProfile};
use roughscat::synthkit::{add_noise, load_dataset, save_dataset};
use roughscat::validation::{run_all, ValidationReport};
use roughscat::Error;
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Failure classes, one per nonzero exit status.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Version { .. } | Error::Checksum | Error::Format(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Config from exactly one of `--config` and `--preset`, with the
/// `--out` and `--seed` overrides applied.
pub fn resolve_config(
    config: Option<&Path>,
    preset_name: Option<&str>,
    out: Option<&Path>,
    seed: Option<u64>,
) -> CliResult<ExperimentConfig> {
    let mut cfg = match (config, preset_name) {
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        (None, Some(name)) => preset(name)?,
        (Some(_), Some(_)) => return Err(CliError::Config("give either --config or --preset, not both".into())),
        (None, None) => return Err(CliError::Config("one of --config or --preset is required".into())),
    };
    if let Some(o) = out {
        cfg.output.dir = o.to_path_buf();
    }
    if let Some(s) = seed {
        cfg.noise.seed = s;
    }
    Ok(cfg)
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

pub fn cmd_validate(quick: bool, out: Option<&Path>) -> CliResult<ValidationReport> {
    let report = run_all(quick)?;
    for c in &report.checks {
        println!("{}", c.line());
    }
    println!("F2 audit: {}", report.f2_audit.outcome);
    if let Some(dir) = out {
        create_dir(dir)?;
        write_json(&dir.join("validation.json"), &report)?;
    }
    if !report.all_passed {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("[{}] {}", c.criterion, c.name))
            .collect();
        return Err(CliError::Validation(failed.join(", ")));
    }
    Ok(report)
}

pub const DATASET_FILE: &str = "dataset.bin";

/// Largest relative L2 error over incident directions within this angle
/// of the downward normal, central half of the line.
pub const FLAT_CHECK_MAX_DEG: f64 = 70.0;
/// S directions this close to the shear critical angle are reported but
/// not checked: the truncated surface resolves the head wave poorly there.
pub const FLAT_CHECK_CRITICAL_BAND_DEG: f64 = 4.0;
pub const FLAT_CHECK_TOL: f64 = 2e-2;

/// Forward run; writes the clean dataset and a copy of the config to the
/// output directory.
pub fn cmd_forward(cfg: &ExperimentConfig, check_flat: bool) -> CliResult<PathBuf> {
    cfg.validate()?;
    let dir = &cfg.output.dir;
    create_dir(dir)?;
    std::fs::write(dir.join("config.toml"), cfg.to_toml())?;
    let ds = forward_dataset(cfg)?;
    let path = dir.join(DATASET_FILE);
    save_dataset(&ds, &path)?;
    log::info!("wrote {}", path.display());
    if check_flat {
        let FlatError {
            checked: err,
            critical_band,
        } = flat_error(cfg, &ds)?;
        println!(
            "flat oracle check: max relative error {err:.3e} (tolerance {FLAT_CHECK_TOL:e}); \
             S within {FLAT_CHECK_CRITICAL_BAND_DEG} deg of the critical angle: {critical_band:.3e} (not checked)"
        );
        if !(err <= FLAT_CHECK_TOL) {
            return Err(CliError::Validation(format!(
                "flat dataset deviates from the oracle by {err:.3e}"
            )));
        }
    }
    Ok(path)
}

fn forward_dataset(cfg: &ExperimentConfig) -> CliResult<NearFieldDataset> {
    let start = Instant::now();
    let ds = generate_dataset(
        &cfg.surface_profile()?,
        &cfg.elastic_medium()?,
        cfg.line()?,
        cfg.direction_grid()?,
        &cfg.solver,
        cfg.surface.id.clone(),
    )?;
    log::info!(
        "dataset {} x {} x 2 in {:.2?}",
        ds.receivers(),
        ds.directions(),
        start.elapsed()
    );
    Ok(ds)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatError {
    pub checked: f64,
    pub critical_band: f64,
}

/// Worst relative error of a flat-surface dataset against the exact
/// reflection.
pub fn flat_error(cfg: &ExperimentConfig, ds: &NearFieldDataset) -> CliResult<FlatError> {
    let f = cfg.surface_profile()?;
    let c = f
        .flat_height()
        .ok_or_else(|| CliError::Config("flat check needs a flat surface".into()))?;
    let critical = (ds.medium.kp() / ds.medium.ks()).asin().to_degrees();
    let nodes = ds.line.nodes();
    let central: Vec<usize> = (0..nodes.len())
        .filter(|&j| nodes[j][0].abs() <= 0.5 * ds.line.half_length + 1e-12)
        .collect();
    let mut out = FlatError {
        checked: 0.0,
        critical_band: 0.0,
    };
    for kind in WaveKind::ALL {
        for k in 0..ds.directions() {
            let d = ds.grid.direction(k);
            let angle = (-d.y()).acos().to_degrees();
            if angle > FLAT_CHECK_MAX_DEG + 1e-9 {
                continue;
            }
            let refl = FlatReflection::new(&ds.medium, IncidentWave::new(kind, d), c)?;
            let row = ds.row(kind, k);
            let (mut num, mut den) = (0.0, 0.0);
            for &j in &central {
                let e = refl.scattered(nodes[j]);
                num += (row[j][0] - e[0]).norm_sqr() + (row[j][1] - e[1]).norm_sqr();
                den += e[0].norm_sqr() + e[1].norm_sqr();
            }
            let err = (num / den).sqrt();
            if kind == WaveKind::S && (angle - critical).abs() < FLAT_CHECK_CRITICAL_BAND_DEG {
                out.critical_band = out.critical_band.max(err);
            } else {
                out.checked = out.checked.max(err);
            }
        }
    }
    Ok(out)
}

/// Files and numbers produced by one imaging run.
#[derive(Clone, Debug, Serialize)]
pub struct ImageOutcome {
    pub csv: PathBuf,
    pub heatmap: PathBuf,
    pub mode: String,
    pub delta: f64,
    pub peak: f64,
    pub metrics: Option<CurveMetrics>,
    pub seconds: f64,
    /// Argmax height per column.
    pub argmax_z2: Vec<f64>,
}

fn check_geometry(cfg: &ExperimentConfig, ds: &NearFieldDataset) -> CliResult<()> {
    let want = (cfg.elastic_medium()?, cfg.line()?, cfg.direction_grid()?);
    let mut diffs = Vec::new();
    if ds.medium != want.0 {
        diffs.push(format!("medium {:?} vs config {:?}", ds.medium, want.0));
    }
    if ds.line != want.1 {
        diffs.push(format!("measurement line {:?} vs config {:?}", ds.line, want.1));
    }
    if ds.grid != want.2 {
        diffs.push(format!("direction grid M = {} vs config M = {}", ds.grid.m, want.2.m));
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(CliError::Config(Error::Mismatch(diffs.join("; ")).to_string()))
    }
}

/// Loads the dataset (read only), adds the configured noise and writes
/// the indicator table, heatmap and metrics into `dir`.
pub fn cmd_image(cfg: &ExperimentConfig, dataset: Option<&Path>) -> CliResult<ImageOutcome> {
    cfg.validate()?;
    let path = dataset
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.output.dir.join(DATASET_FILE));
    let ds = load_dataset(&path).map_err(|e| match e {
        Error::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        e => e.into(),
    })?;
    check_geometry(cfg, &ds)?;
    image_dataset(cfg, &ds, &cfg.output.dir)
}

fn image_dataset(cfg: &ExperimentConfig, clean: &NearFieldDataset, dir: &Path) -> CliResult<ImageOutcome> {
    let start = Instant::now();
    let ds = add_noise(clean, &cfg.noise)?;
    let mut result = image_grid(&cfg.sampling_grid()?, &ds, cfg.imaging.mode)?;
    result.label = cfg.surface.id.clone();
    let seconds = start.elapsed().as_secs_f64();
    let truth = cfg.surface_profile()?;
    let est = extract_surface(&result, Some((&truth, cfg.imaging.window)));
    create_dir(dir)?;
    let stem = format!("image-{}", cfg.imaging.mode.label());
    let csv = dir.join(format!("{stem}.csv"));
    result.write(&csv)?;
    let heatmap = dir.join(format!("{stem}.ppm"));
    std::fs::write(&heatmap, render(&result, Some(&truth)).to_ppm())?;
    let outcome = ImageOutcome {
        csv,
        heatmap,
        mode: cfg.imaging.mode.label().into(),
        delta: cfg.noise.delta,
        peak: result.min_max().1,
        metrics: est.metrics,
        seconds,
        argmax_z2: est.z2,
    };
    write_json(&dir.join(format!("{stem}-metrics.json")), &outcome)?;
    if let Some(m) = &outcome.metrics {
        log::info!(
            "{}: mean |error| {:.4}, max {:.4} over |z1| <= {}",
            stem,
            m.mean_abs,
            m.max_abs,
            m.window
        );
    }
    Ok(outcome)
}

/// One row of the sweep table.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: String,
    pub mean_abs: f64,
    pub max_abs: f64,
    pub peak: f64,
    pub seconds: f64,
}

pub const SWEEP_HEADER: &str = "axis,value,mean_abs_error,max_abs_error,peak,seconds";

impl SweepRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{:.6e},{:.3}",
            self.axis, self.value, self.mean_abs, self.max_abs, self.peak, self.seconds
        )
    }
}

fn row(axis: &str, value: String, o: &ImageOutcome, seconds: f64) -> SweepRow {
    let m = o.metrics.expect("true surface known");
    SweepRow {
        axis: axis.into(),
        value,
        mean_abs: m.mean_abs,
        max_abs: m.max_abs,
        peak: o.peak,
        seconds,
    }
}

fn ensure_dataset(cfg: &ExperimentConfig) -> CliResult<NearFieldDataset> {
    let path = cfg.output.dir.join(DATASET_FILE);
    if path.exists() {
        if let Ok(ds) = load_dataset(&path) {
            if check_geometry(cfg, &ds).is_ok() && ds.label == cfg.surface.id {
                log::info!("reusing {}", path.display());
                return Ok(ds);
            }
        }
    }
    cmd_forward(cfg, false)?;
    Ok(load_dataset(&path)?)
}

/// Runs every sweep entry and writes `sweep.csv`. Without a sweep (or
/// with no values) this is a single forward-if-needed plus image run.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let values = cfg.sweep.as_ref().map(|s| s.values.clone()).unwrap_or_default();
    let rows = if values.is_empty() {
        let start = Instant::now();
        ensure_dataset(cfg)?;
        let o = cmd_image(cfg, None)?;
        vec![row("none", "-".into(), &o, start.elapsed().as_secs_f64())]
    } else {
        let axis = cfg.sweep.as_ref().map(|s| s.axis).unwrap_or(SweepAxis::Delta);
        let entry = |v: &SweepValue| -> CliResult<ExperimentConfig> {
            let mut c = cfg.with_sweep_value(axis, v)?;
            c.validate()?;
            c.sweep = None;
            c.output.dir = cfg.output.dir.join(format!("{}-{v}", axis.label()));
            Ok(c)
        };
        let entries: Vec<(SweepValue, ExperimentConfig)> = values
            .iter()
            .map(|v| Ok((v.clone(), entry(v)?)))
            .collect::<CliResult<_>>()?;
        if axis.imaging_only() {
            let mut base = cfg.clone();
            base.sweep = None;
            let ds = ensure_dataset(&base)?;
            entries
                .par_iter()
                .map(|(v, c)| {
                    let start = Instant::now();
                    let o = image_dataset(c, &ds, &c.output.dir)?;
                    Ok(row(axis.label(), v.to_string(), &o, start.elapsed().as_secs_f64()))
                })
                .collect::<CliResult<Vec<_>>>()?
        } else {
            entries
                .par_iter()
                .map(|(v, c)| {
                    let start = Instant::now();
                    let ds = ensure_dataset(c)?;
                    let o = image_dataset(c, &ds, &c.output.dir)?;
                    Ok(row(axis.label(), v.to_string(), &o, start.elapsed().as_secs_f64()))
                })
                .collect::<CliResult<Vec<_>>>()?
        }
    };
    create_dir(&cfg.output.dir)?;
    let mut table = String::from(SWEEP_HEADER);
    table.push('\n');
    for r in &rows {
        table.push_str(&r.csv());
        table.push('\n');
    }
    std::fs::write(cfg.output.dir.join("sweep.csv"), &table)?;
    print!("{table}");
    Ok(rows)
}

/// Writes a PPM next to `result` (or at `out`). The true profile comes
/// from `truth`, else from the registry entry named by the result label.
pub fn cmd_render(result: &Path, truth: Option<&SurfaceProfile>, out: Option<&Path>) -> CliResult<PathBuf> {
    if !result.exists() {
        return Err(CliError::Io(format!("{}: no such result", result.display())));
    }
    let r = ImagingResult::read(result)?;
    let registry = surface_registry(&r.label).ok();
    let truth = truth.or(registry.as_ref());
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| result.with_extension("ppm"));
    std::fs::write(&path, render(&r, truth).to_ppm()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}
