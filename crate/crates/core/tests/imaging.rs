use num_complex::Complex64 as C;
use roughscat::dataset::NearFieldDataset;
use roughscat::forward::{flat_oracle, IncidentWave};
use roughscat::imaging::*;
use roughscat::medium::*;
use roughscat::surface::SurfaceProfile;

/// Exact flat-surface data; the two grazing directions are cancelled
/// outright (`u_sc = -u_in`).
fn oracle_dataset(m: ElasticMedium, line: MeasurementLine, grid: DirectionGrid, c: f64) -> NearFieldDataset {
    let mut ds = NearFieldDataset::zeros(m, line, grid, "flat-oracle");
    for kind in WaveKind::ALL {
        for k in 0..grid.len() {
            let inc = IncidentWave::new(kind, grid.direction(k));
            for j in 0..line.len() {
                let x = line.node(j);
                let v = if k == 0 || k == grid.m {
                    inc.trace(x, &m).map(|v| -v)
                } else {
                    flat_oracle(&m, inc, x, c).unwrap()
                };
                ds.set(kind, k, j, v);
            }
        }
    }
    ds
}

fn setup() -> (NearFieldDataset, f64) {
    let m = ElasticMedium::new(1.0, 1.0, 20.0).unwrap();
    let c = 0.3;
    let ds = oracle_dataset(
        m,
        MeasurementLine::new(2.0, 8.0, 200).unwrap(),
        DirectionGrid::new(128).unwrap(),
        c,
    );
    (ds, c)
}

#[test]
fn grid_matches_pointwise_indicator() {
    let (ds, _) = setup();
    let g = SamplingGrid::new([-0.5, 0.7], [0.2, 0.9], 2, 2).unwrap();
    for mode in PolarizationMode::ALL {
        let r = image_grid(&g, &ds, mode).unwrap();
        for p in 0..2 {
            for q in 0..2 {
                let direct = indicator(g.point(p, q), &ds, mode).unwrap();
                let v = r.value(p, q);
                assert!((v - direct).abs() <= 1e-10 * direct, "{mode}: {v} vs {direct}");
            }
        }
    }
}

#[test]
fn both_is_sum_and_nonnegative_and_deterministic() {
    let (ds, _) = setup();
    let g = SamplingGrid::new([-2.0, 2.0], [0.0, 1.2], 21, 31).unwrap();
    let e1 = image_grid(&g, &ds, PolarizationMode::E1).unwrap();
    let e2 = image_grid(&g, &ds, PolarizationMode::E2).unwrap();
    let both = image_grid(&g, &ds, PolarizationMode::Both).unwrap();
    for i in 0..g.len() {
        assert_eq!(both.values[i], e1.values[i] + e2.values[i]);
        assert!(e1.values[i] >= 0.0 && e2.values[i] >= 0.0);
    }
    let again = image_grid(&g, &ds, PolarizationMode::Both).unwrap();
    assert_eq!(again.values, both.values);
}

#[test]
fn joint_scaling_keeps_argmax() {
    let (ds, _) = setup();
    let g = SamplingGrid::new([-2.0, 2.0], [0.0, 1.2], 21, 31).unwrap();
    let c = C::new(-1.7, 0.6);
    for mode in PolarizationMode::ALL {
        let a = image_grid(&g, &ds, mode).unwrap();
        let b = image_grid_scaled(&g, &ds.scaled(c), mode, c).unwrap();
        assert_eq!(a.argmax_indices(), b.argmax_indices());
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((y - c.norm_sqr() * x).abs() <= 1e-12 * y.abs().max(1e-300));
        }
        // Data only: quadratic in the data.
        let d0 = image_grid_scaled(&g, &ds, mode, C::new(0.0, 0.0)).unwrap();
        let d1 = image_grid_scaled(&g, &ds.scaled(c), mode, C::new(0.0, 0.0)).unwrap();
        for (x, y) in d0.values.iter().zip(&d1.values) {
            assert!((y - c.norm_sqr() * x).abs() <= 1e-12 * y.abs());
        }
    }
}

// Flat data: the column peak sits on the surface. Away from it the
// indicator settles on a background of roughly three quarters of the peak
// rather than decaying, because the synthesised field on the line is the sum
// of two upgoing expansions centred at z and at its image, which add
// coherently only for z on the surface.
#[test]
fn flat_data_peaks_at_surface() {
    let (ds, c) = setup();
    let g = SamplingGrid::new([-3.0, 3.0], [0.0, 1.2], 13, 61).unwrap();
    let r = image_grid(&g, &ds, PolarizationMode::Both).unwrap();
    let est = extract_surface(&r, Some((&SurfaceProfile::flat(c), 3.0)));
    let lam = ds.medium.shear_wavelength();
    for (p, &q) in est.index.iter().enumerate() {
        assert!(
            (g.z2_at(q) - c).abs() <= g.dz2() + 1e-12,
            "column {p}: peak at {}",
            g.z2_at(q)
        );
        let col = r.column(p);
        for (qq, v) in col.iter().enumerate() {
            if (g.z2_at(qq) - c).abs() >= 0.5 * lam {
                assert!(*v <= 0.85 * col[q], "column {p} row {qq}: {}", v / col[q]);
            }
        }
    }
    let m = est.metrics.unwrap();
    assert_eq!(m.columns, 13);
    assert!(m.max_abs <= g.dz2() + 1e-12);
}

#[test]
fn synthesised_field_is_largest_at_surface_height() {
    let (ds, c) = setup();
    let w = ds.line.weights();
    let energy = |z2: f64, j: usize| -> f64 {
        (0..ds.receivers())
            .map(|i| {
                let u = usc_superposition(i, [0.0, z2], j, &ds).unwrap();
                w[i] * (u[0].norm_sqr() + u[1].norm_sqr())
            })
            .sum()
    };
    for j in 0..2 {
        let at = energy(c, j);
        for s in 1..=8 {
            let z2 = c + 0.1 * s as f64;
            assert!(energy(z2, j) < at, "j = {j}, z2 = {z2}");
        }
    }
}

#[test]
fn csv_round_trip() {
    let (ds, _) = setup();
    let g = SamplingGrid::new([-1.0, 1.0], [0.0, 1.0], 5, 7).unwrap();
    let r = image_grid(&g, &ds, PolarizationMode::E2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("img.csv");
    r.write(&path).unwrap();
    assert!(sidecar_path(&path).exists());
    let back = ImagingResult::read(&path).unwrap();
    assert_eq!(back, r);
    let meta = back.meta();
    assert_eq!(meta.argmax_z2.len(), 5);
    std::fs::write(&path, "z1,z2,I\n0,0,1\n").unwrap();
    assert!(ImagingResult::read(&path).is_err());
}

#[test]
fn shape_errors() {
    let (ds, _) = setup();
    assert!(usc_superposition(ds.receivers(), [0.0, 0.5], 0, &ds).is_err());
    assert!(usc_superposition(0, [0.0, 0.5], 2, &ds).is_err());
}
