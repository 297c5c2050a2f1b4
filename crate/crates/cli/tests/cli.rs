use roughscat_cli::ExperimentConfig;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[surface]
id = "f2"

[medium]
lambda = 1.0
mu = 1.0
omega = 10.0

[measurement]
a = 2.0
half_length = 4.0
n = 40

[directions]
m = 32

[grid]
z1 = [-3.0, 3.0]
z2 = [0.0, 1.2]
n1 = 61
n2 = 25

[noise]
delta = 0.1
seed = 3

[imaging]
mode = "both"
window = 2.0
"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughscat"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let out = dir.join("out");
    let text = format!("{text}\n[output]\ndir = {:?}\n", out.to_str().unwrap());
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn forward_image_render_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");

    let o = run(&["forward", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dataset = out.join("dataset.bin");
    let before = std::fs::read(&dataset).unwrap();
    let saved = ExperimentConfig::load(&out.join("config.toml")).unwrap();
    assert_eq!(saved, ExperimentConfig::load(Path::new(&cfg)).unwrap());

    let o = run(&["image", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = out.join("image-both.csv");
    let first = std::fs::read(&csv).unwrap();
    assert_eq!(
        std::fs::read(&dataset).unwrap(),
        before,
        "image must not touch the dataset"
    );
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("image-both-metrics.json")).unwrap()).unwrap();
    let mean = metrics["metrics"]["mean_abs"].as_f64().unwrap();
    assert!(mean < 0.5 * 2.0 * std::f64::consts::PI / 10.0, "mean error {mean}");

    // Same seed, same bytes.
    let o = run(&["image", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), first);
    // A different seed changes the noisy image.
    let o = run(&[
        "image",
        "--config",
        &cfg,
        "--seed",
        "4",
        "--out",
        tmp.path().join("seed4").to_str().unwrap(),
        "--dataset",
        dataset.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_ne!(std::fs::read(tmp.path().join("seed4/image-both.csv")).unwrap(), first);

    let o = run(&[
        "render",
        csv.to_str().unwrap(),
        "--out",
        tmp.path().join("img").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ppm = std::fs::read(tmp.path().join("img/image-both.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n244 100\n255\n"));
    assert_eq!(ppm, std::fs::read(out.join("image-both.ppm")).unwrap());
}

#[test]
fn empty_sweep_matches_image_and_mode_sweep_reuses_data() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");
    let o = run(&["sweep", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let swept = std::fs::read(out.join("image-both.csv")).unwrap();
    let o = run(&["image", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(out.join("image-both.csv")).unwrap(), swept);
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);

    let text = format!("{SMALL}\n[sweep]\naxis = \"mode\"\nvalues = [\"e1\", \"e2\", \"both\"]\n");
    let cfg = write_config(tmp.path(), "modes.toml", &text);
    let stamp = std::fs::metadata(out.join("dataset.bin")).unwrap().modified().unwrap();
    let o = run(&["sweep", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::metadata(out.join("dataset.bin")).unwrap().modified().unwrap(),
        stamp
    );
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "axis,value,mean_abs_error,max_abs_error,peak,seconds");
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("mode,e1,") && rows[3].starts_with("mode,both,"));
    assert!(out.join("mode-e2/image-e2.csv").exists());
    // The "both" entry reproduces the plain image.
    assert_eq!(std::fs::read(out.join("mode-both/image-both.csv")).unwrap(), swept);
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let low = write_config(tmp.path(), "low.toml", &SMALL.replace("a = 2.0", "a = 0.6"));
    let o = run(&["forward", "--config", &low]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("measurement.a"), "{}", stderr(&o));
    assert!(!tmp.path().join("out").exists(), "rejected before any output");

    let extra = write_config(tmp.path(), "extra.toml", &SMALL.replace("m = 32", "m = 32\ncount = 1"));
    let o = run(&["forward", "--config", &extra]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("directions"), "{}", stderr(&o));

    let o = run(&["forward", "--preset", "fig9-z"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["forward", "--preset", "flat", "--config", &low]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["forward"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let o = run(&["image", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = run(&["render", tmp.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["forward", "--config", tmp.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    // Truncated dataset.
    let o = run(&["forward", "--config", &cfg]);
    assert!(o.status.success());
    let ds = tmp.path().join("out/dataset.bin");
    let bytes = std::fs::read(&ds).unwrap();
    std::fs::write(&ds, &bytes[..bytes.len() / 2]).unwrap();
    let o = run(&["image", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
}

#[test]
fn geometry_mismatch_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    assert!(run(&["forward", "--config", &cfg]).status.success());
    let other = write_config(tmp.path(), "other.toml", &SMALL.replace("n = 40", "n = 30"));
    let o = run(&["image", "--config", &other]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("geometry mismatch"), "{}", stderr(&o));
}

#[test]
fn quick_validate_reports_every_criterion() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["validate", "--quick", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    for n in 1..=10 {
        assert!(text.contains(&format!(" [{n}] ")), "{text}");
    }
    assert!(text.contains("F2 audit"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 10);
    assert_eq!(report["all_passed"], true);
}

#[test]
fn full_size_presets() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("f2");
    let o = run(&[
        "forward",
        "--preset",
        "fig4-b",
        "--out",
        dir.to_str().unwrap(),
        "--threads",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ds = roughscat::synthkit::load_dataset(&dir.join("dataset.bin")).unwrap();
    assert_eq!((ds.receivers(), ds.directions()), (401, 257));

    // The flat preset checks itself against the exact reflection.
    let dir = tmp.path().join("flat");
    let o = run(&["forward", "--preset", "flat", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("flat oracle check"));
}
