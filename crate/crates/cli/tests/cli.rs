use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use shrinkset::geometry::{ConvexPolygon, RoundedSet};
use shrinkset::simulate;

const SQUARE: &str = r#"{"kernel":[[0,0],[1,0],[1,1],[0,1]]}"#;
const BALL: &str = r#"{"kernel":[[0,0]],"radius":1}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shrinkset")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// `(t, a)` columns and the `# key=value` comments of a trace CSV.
fn parse_csv(text: &str) -> (Vec<(f64, f64)>, Vec<(String, f64)>) {
    let mut rows = Vec::new();
    let mut events = Vec::new();
    for line in text.lines().skip(1) {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once('=').unwrap();
            events.push((k.to_string(), v.parse().unwrap()));
        } else {
            let f: Vec<&str> = line.split(',').collect();
            rows.push((f[0].parse().unwrap(), f[1].parse().unwrap()));
        }
    }
    (rows, events)
}

fn event(events: &[(String, f64)], key: &str) -> Option<f64> {
    events.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("scene.json");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["simulate", "--bogus"])), 1);
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["simulate", "--config", "/nonexistent/scene.json"])), 1);
    assert_eq!(code(&run(&["simulate", "--geometry", SQUARE, "--horizon", "1"])), 1, "missing M");
    assert_eq!(code(&run(&["simulate", "--geometry", SQUARE, "--M", "NaN", "--horizon", "1"])), 1);
    let reflex = r#"{"kernel":[[0,0],[2,0],[1,0.2],[1,2]]}"#;
    assert_eq!(code(&run(&["one-step", "--geometry", reflex, "--a", "0.1"])), 1);
}

#[test]
fn simulate_unit_square_reports_extinction() {
    let o = run(&["simulate", "--geometry", SQUARE, "--M", "4", "--horizon", "5", "--dt", "0.01"]);
    assert_eq!(code(&o), 0);
    let (rows, events) = parse_csv(&stdout(&o));
    let expected = simulate(&RoundedSet::polygon(ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0)), 4.0, 5.0, 0.01).unwrap();
    let ts = event(&events, "T_star").expect("T_star line");
    assert_eq!(ts, expected.t_star().unwrap());
    assert!(event(&events, "T_dagger").is_some());
    assert!(event(&events, "J").is_some());
    assert_eq!(rows.last().unwrap().1, 0.0);
}

#[test]
fn simulate_stationary_ball() {
    let o = run(&["simulate", "--geometry", BALL, "--M", &format!("{}", 2.0 * PI), "--horizon", "3", "--dt", "0.01"]);
    assert_eq!(code(&o), 0);
    let (rows, events) = parse_csv(&stdout(&o));
    assert!(rows.len() > 100);
    for (_, a) in rows {
        assert!((a - PI).abs() <= 1e-8);
    }
    assert!(event(&events, "T_star").is_none());
}

#[test]
fn simulate_without_budget_grows_quadratically() {
    let o = run(&["simulate", "--geometry", SQUARE, "--M", "0", "--horizon", "2", "--dt", "0.01", "--c1", "1", "--c2", "0"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (rows, events) = parse_csv(&text);
    for (t, a) in rows {
        let exact = 1.0 + 4.0 * t + PI * t * t;
        assert!((a - exact).abs() <= 1e-12 * exact);
    }
    // ∫₀² (1 + 4t + πt²) dt = 2 + 8 + 8π/3
    let j = event(&events, "J").unwrap();
    assert!((j - (10.0 + 8.0 * PI / 3.0)).abs() < 1e-10);
    // Seventeen significant digits in every numeric field.
    let first = text.lines().nth(2).unwrap();
    for field in first.split(',').filter(|f| f.parse::<f64>().is_ok()) {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }
}

#[test]
fn simulate_writes_files_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let svg = dir.path().join("frames.svg");
    let cfg = write_config(
        dir.path(),
        &format!(
            r#"{{"geometry": {SQUARE}, "M": 6, "horizon": 2, "dt": 0.01, "svg_every": 0.1,
                "output": {{"csv": {:?}, "svg": {:?}}}}}"#,
            csv.to_str().unwrap(),
            svg.to_str().unwrap()
        ),
    );
    let o = run(&["simulate", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let (_, events) = parse_csv(&std::fs::read_to_string(&csv).unwrap());
    let ts6 = event(&events, "T_star").unwrap();
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg"));
    let frames = doc.matches("<title>").count();
    assert_eq!(frames, (ts6 / 0.1).ceil() as usize);

    // Command-line values override the file.
    let o = run(&["simulate", "--config", &cfg, "--M", "8", "--output", dir.path().join("b.csv").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (_, events) = parse_csv(&std::fs::read_to_string(dir.path().join("b.csv")).unwrap());
    assert!(event(&events, "T_star").unwrap() < ts6);
}

#[test]
fn svg_needs_a_path() {
    let o = run(&["simulate", "--geometry", SQUARE, "--M", "6", "--horizon", "1", "--svg-every", "0.1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["simulate", "--geometry", SQUARE, "--M", "4.5", "--horizon", "3", "--dt", "0.01"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["threshold", "--geometry", BALL, "--tol", "1e-2", "--dt", "0.01"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

fn threshold_report(geometry: &str) -> serde_json::Value {
    let o = run(&["threshold", "--geometry", geometry, "--tol", "1e-3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn threshold_of_unit_ball() {
    let r = threshold_report(BALL);
    let m0 = r["M0"].as_f64().unwrap();
    assert!((m0 - 2.0 * PI).abs() < 1e-2, "{r}");
    let [lo, hi] = [r["bracket"][0].as_f64().unwrap(), r["bracket"][1].as_f64().unwrap()];
    assert!(lo <= m0 && m0 <= hi && hi - lo <= 1e-3);
    assert!(r["iterations"].as_u64().unwrap() > 0);
    assert!(r.get("T_dagger").is_some());
}

#[test]
fn threshold_of_unit_square() {
    let r = threshold_report(SQUARE);
    let m0 = r["M0"].as_f64().unwrap();
    assert!((m0 - 2.7966).abs() <= 0.03, "{r}");
}

#[test]
fn threshold_rejects_degenerate_domain() {
    let o = run(&["threshold", "--geometry", r#"{"kernel":[[0,0],[1,0]]}"#]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

fn one_step(a: &str) -> Output {
    run(&["one-step", "--geometry", SQUARE, "--a", a])
}

#[test]
fn one_step_regimes() {
    let o = one_step("0.5");
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["regime"], "Ball");
    assert_eq!(r["geometry"]["kernel"].as_array().unwrap().len(), 1);
    let rho = r["rho"].as_f64().unwrap();
    assert!((PI * rho * rho - 0.5).abs() < 1e-12);
    assert!((r["kappa"].as_f64().unwrap() - 1.0 / rho).abs() < 1e-9);

    let r: serde_json::Value = serde_json::from_slice(&one_step("0.9").stdout).unwrap();
    assert_eq!(r["regime"], "Opening");
    // Opening of the unit square: 1 − (4 − π)ρ² = a, perimeter 4 − (8 − 2π)ρ.
    let rho = ((1.0 - 0.9) / (4.0 - PI)).sqrt();
    let p = r["perimeter"].as_f64().unwrap();
    assert!((p - (4.0 - (8.0 - 2.0 * PI) * rho)).abs() < 1e-12);
    assert!((p - 3.41398).abs() < 1e-4);

    let r: serde_json::Value = serde_json::from_slice(&one_step("1").stdout).unwrap();
    assert!(r["kappa"].is_null());
    assert_eq!(r["perimeter"].as_f64().unwrap(), 4.0);
}

#[test]
fn one_step_rejects_oversized_area() {
    let o = one_step("2");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
}

#[test]
fn validate_default_suite_passes() {
    let o = run(&["validate"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("raster_opening") && text.contains("curvature_law"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_detects_perturbation() {
    let o = run(&["validate", "--suites", "invariants", "--perturb", "0.01"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn validate_empty_selection_is_a_pass() {
    let o = run(&["validate", "--suites", ""]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 checks, 0 failed"));
}

#[test]
fn validate_unknown_suite_fails() {
    assert_eq!(code(&run(&["validate", "--suites", "nonsense"])), 3);
}

#[test]
fn validate_is_seeded() {
    let args = ["validate", "--suites", "invariants,raster", "--seed", "7", "--raster-sets", "2", "--raster-resolution", "4e-3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
