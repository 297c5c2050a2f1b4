//! Named configurations for the numerical studies.

use crate::config::{
    DirectionsConfig, ExperimentConfig, GridConfig, ImagingConfig, MeasurementConfig, MediumConfig, OutputConfig,
    SurfaceConfig, SweepAxis, SweepSpec, SweepValue,
};
use roughscat::forward::SolverParams;
use roughscat::imaging::PolarizationMode;
use roughscat::synthkit::NoiseSpec;
use roughscat::{Error, Result};

pub const PRESET_NAMES: [&str; 18] = [
    "fig3-a",
    "fig3-b",
    "fig3-c",
    "fig4-a",
    "fig4-b",
    "fig4-c",
    "fig5-a",
    "fig5-b",
    "fig5-c",
    "fig6-a",
    "fig6-b",
    "fig6-c",
    "fig7-a",
    "fig7-b",
    "fig7-c",
    "flat",
    "sweep-noise",
    "sweep-frequency",
];

/// Noise seed shared by every preset.
pub const PRESET_SEED: u64 = 20;

/// Flat preset surface height.
pub const FLAT_HEIGHT: f64 = 0.5;

fn base(name: &str, surface: &str, omega: f64, a: f64, half_length: f64, delta: f64) -> ExperimentConfig {
    ExperimentConfig {
        surface: SurfaceConfig {
            id: surface.into(),
            height: None,
            spec: None,
        },
        medium: MediumConfig {
            lambda: 1.0,
            mu: 1.0,
            omega,
        },
        measurement: MeasurementConfig { a, half_length, n: 200 },
        directions: DirectionsConfig { m: 256 },
        solver: SolverParams::default(),
        grid: GridConfig::default(),
        noise: NoiseSpec {
            delta,
            seed: PRESET_SEED,
            ..Default::default()
        },
        imaging: ImagingConfig::default(),
        output: OutputConfig {
            dir: format!("out/{name}").into(),
        },
        sweep: None,
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let pick = |xs: [f64; 3]| match name.as_bytes().last() {
        Some(b'a') => xs[0],
        Some(b'b') => xs[1],
        _ => xs[2],
    };
    let c = match name {
        "fig3-a" | "fig3-b" | "fig3-c" => base(name, "f1", pick([15.0, 20.0, 25.0]), 2.0, 8.0, 0.2),
        "fig4-a" | "fig4-b" | "fig4-c" => base(name, "f2", 20.0, pick([1.1, 2.0, 2.9]), 8.0, 0.2),
        "fig5-a" | "fig5-b" | "fig5-c" => base(name, "f3", 20.0, 2.0, pick([5.0, 8.0, 11.0]), 0.2),
        "fig6-a" | "fig6-b" | "fig6-c" => base(name, "f4", 20.0, 2.0, 8.0, pick([0.0, 0.2, 0.4])),
        "fig7-a" | "fig7-b" | "fig7-c" => {
            let mut c = base(name, "f4", 20.0, 2.0, 8.0, 0.0);
            c.imaging.mode =
                [PolarizationMode::E1, PolarizationMode::E2, PolarizationMode::Both][(pick([0.0, 1.0, 2.0])) as usize];
            c
        }
        "flat" => {
            let mut c = base(name, "flat", 20.0, 2.0, 8.0, 0.0);
            c.surface.height = Some(FLAT_HEIGHT);
            let lam = 2.0 * std::f64::consts::PI / 20.0;
            c.solver.half_width = Some(8.0 + 40.0 * lam);
            c.solver.taper_flat = Some(8.0 + 10.0 * lam);
            c.solver.taper_width = Some(10.0 * lam);
            c
        }
        "sweep-noise" => {
            let mut c = base(name, "f4", 20.0, 2.0, 8.0, 0.0);
            c.sweep = Some(SweepSpec {
                axis: SweepAxis::Delta,
                values: [0.0, 0.2, 0.4].map(SweepValue::Number).to_vec(),
            });
            c
        }
        "sweep-frequency" => {
            let mut c = base(name, "f1", 20.0, 2.0, 8.0, 0.2);
            c.sweep = Some(SweepSpec {
                axis: SweepAxis::Omega,
                values: [15.0, 20.0, 25.0].map(SweepValue::Number).to_vec(),
            });
            c
        }
        _ => {
            return Err(Error::config(
                "--preset",
                format!("unknown preset `{name}` (known: {})", PRESET_NAMES.join(", ")),
            ))
        }
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid_and_round_trips() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c, "{name}");
        }
        assert!(preset("fig8-a").is_err());
    }

    #[test]
    fn preset_parameters() {
        assert_eq!(preset("fig3-c").unwrap().medium.omega, 25.0);
        assert_eq!(preset("fig4-a").unwrap().measurement.a, 1.1);
        assert_eq!(preset("fig5-b").unwrap().measurement.half_length, 8.0);
        assert_eq!(preset("fig6-c").unwrap().noise.delta, 0.4);
        assert_eq!(preset("fig7-b").unwrap().imaging.mode, PolarizationMode::E2);
        let f2 = preset("fig4-b").unwrap();
        assert_eq!((f2.measurement.n, f2.directions.m), (200, 256));
    }
}
