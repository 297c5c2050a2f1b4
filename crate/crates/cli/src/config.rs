//! Experiment configuration file (TOML).

use roughscat::forward::SolverParams;
use roughscat::imaging::{PolarizationMode, SamplingGrid};
use roughscat::medium::{DirectionGrid, ElasticMedium, MeasurementLine};
use roughscat::surface::{surface_registry, SurfaceProfile, SurfaceSpec};
use roughscat::synthkit::NoiseSpec;
use roughscat::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub surface: SurfaceConfig,
    pub medium: MediumConfig,
    pub measurement: MeasurementConfig,
    pub directions: DirectionsConfig,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub imaging: ImagingConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// `id` names a registry profile; `id = "flat"` takes `height`; any
/// other id with `spec` defines a custom profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SurfaceSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
}

/// Receivers at `(x1, a)`, `|x1| <= half_length`, `2n + 1` of them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    pub a: f64,
    pub half_length: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionsConfig {
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    pub n1: usize,
    pub n2: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            z1: [-5.0, 5.0],
            z2: [0.0, 1.2],
            n1: 201,
            n2: 61,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImagingConfig {
    pub mode: PolarizationMode,
    /// Columns with `|z1| <= window` enter the error metrics.
    pub window: f64,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        ImagingConfig {
            mode: PolarizationMode::Both,
            window: 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: "out".into() }
    }
}

/// Config field varied by `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Omega,
    A,
    HalfLength,
    Delta,
    Mode,
}

impl SweepAxis {
    /// Axes that leave the forward data unchanged.
    pub fn imaging_only(self) -> bool {
        matches!(self, SweepAxis::Delta | SweepAxis::Mode)
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Omega => "omega",
            SweepAxis::A => "a",
            SweepAxis::HalfLength => "half-length",
            SweepAxis::Delta => "delta",
            SweepAxis::Mode => "mode",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Number(f64),
    Text(String),
}

impl std::fmt::Display for SweepValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepValue::Number(v) => write!(f, "{v}"),
            SweepValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    #[serde(default)]
    pub values: Vec<SweepValue>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| span_field(text, s.start)).unwrap_or_default();
            Error::config(field, e.message().trim())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always serialisable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn surface_profile(&self) -> Result<SurfaceProfile> {
        let s = &self.surface;
        match (s.id.as_str(), s.height, &s.spec) {
            ("flat", h, None) => Ok(SurfaceProfile::flat(h.unwrap_or(0.5))),
            ("flat", _, Some(_)) => Err(Error::config("surface.spec", "not allowed for the flat surface")),
            (id, None, Some(spec)) => SurfaceProfile::custom(id, spec.clone()),
            (id, None, None) => surface_registry(id).map_err(|e| Error::config("surface.id", e.to_string())),
            (_, Some(_), _) => Err(Error::config("surface.height", "only used with id = \"flat\"")),
        }
    }

    pub fn elastic_medium(&self) -> Result<ElasticMedium> {
        let m = &self.medium;
        ElasticMedium::new(m.lambda, m.mu, m.omega).map_err(|e| Error::config("medium", e.to_string()))
    }

    pub fn line(&self) -> Result<MeasurementLine> {
        let m = &self.measurement;
        MeasurementLine::new(m.a, m.half_length, m.n).map_err(|e| Error::config("measurement", e.to_string()))
    }

    pub fn direction_grid(&self) -> Result<DirectionGrid> {
        DirectionGrid::new(self.directions.m).map_err(|e| Error::config("directions.m", e.to_string()))
    }

    pub fn sampling_grid(&self) -> Result<SamplingGrid> {
        let g = &self.grid;
        SamplingGrid::new(g.z1, g.z2, g.n1, g.n2).map_err(|e| Error::config("grid", e.to_string()))
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<()> {
        let f = self.surface_profile()?;
        let m = self.elastic_medium()?;
        self.line()?;
        self.direction_grid()?;
        self.sampling_grid()?;
        if !(self.measurement.a > f.f_sup()) {
            return Err(Error::config(
                "measurement.a",
                format!("a = {} must exceed sup f = {:.6}", self.measurement.a, f.f_sup()),
            ));
        }
        self.solver
            .resolve(&f, &m, self.measurement.half_length)
            .map_err(|e| Error::config("solver", e.to_string()))?;
        self.noise
            .validate()
            .map_err(|e| Error::config("noise.delta", e.to_string()))?;
        if !(self.imaging.window > 0.0) {
            return Err(Error::config("imaging.window", "must be positive"));
        }
        if let Some(sw) = &self.sweep {
            for v in &sw.values {
                self.with_sweep_value(sw.axis, v)?;
            }
        }
        Ok(())
    }

    /// Copy of the config with one sweep value applied (not re-validated).
    pub fn with_sweep_value(&self, axis: SweepAxis, v: &SweepValue) -> Result<Self> {
        let mut c = self.clone();
        let field = format!("sweep.values ({})", axis.label());
        match (axis, v) {
            (SweepAxis::Mode, SweepValue::Text(s)) => {
                c.imaging.mode = s
                    .parse()
                    .map_err(|_| Error::config(field, format!("unknown mode `{s}`")))?
            }
            (SweepAxis::Mode, SweepValue::Number(_)) => return Err(Error::config(field, "expected a mode name")),
            (_, SweepValue::Text(s)) => return Err(Error::config(field, format!("expected a number, got `{s}`"))),
            (SweepAxis::Omega, SweepValue::Number(x)) => c.medium.omega = *x,
            (SweepAxis::A, SweepValue::Number(x)) => c.measurement.a = *x,
            (SweepAxis::HalfLength, SweepValue::Number(x)) => c.measurement.half_length = *x,
            (SweepAxis::Delta, SweepValue::Number(x)) => c.noise.delta = *x,
        }
        Ok(c)
    }
}

/// Dotted path of the innermost `[section]` / `key` before `offset`.
fn span_field(text: &str, offset: usize) -> String {
    let head = &text[..offset.min(text.len())];
    let section = head.lines().rev().find_map(|l| {
        let l = l.trim();
        (l.starts_with('[') && l.ends_with(']')).then(|| l.trim_matches(|c| c == '[' || c == ']').to_string())
    });
    let line = text[offset.min(text.len())..].lines().next().unwrap_or("");
    let key = head.lines().last().map(|l| format!("{l}{line}")).unwrap_or_default();
    let key = key.split('=').next().unwrap_or("").trim().to_string();
    match (section, key.is_empty() || key.starts_with('[')) {
        (Some(s), false) => format!("{s}.{key}"),
        (Some(s), true) => s,
        (None, false) => key,
        (None, true) => String::new(),
    }
}
