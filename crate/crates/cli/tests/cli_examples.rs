use std::path::Path;
use std::process::{Command, Output};

fn rgflow(dir: &Path, args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_rgflow"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv(dir: &Path, command: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(dir.join(format!("{command}.csv"))).unwrap();
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = rows[0].iter().position(|h| h == name).unwrap();
    rows[1..].iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn collapsing_sphere_reports_extinction() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&rgflow(
        dir.path(),
        &["constant-curvature", "--K", "1", "--n", "3", "--alpha", "1"],
    ));
    assert!(text.contains("regime: CollapsingSphere"));
    let line = text.lines().find(|l| l.starts_with("extinction time:")).unwrap();
    let t: f64 = line.trim_start_matches("extinction time:").trim().parse().unwrap();
    assert!((t - 0.11268).abs() < 1e-5);
    let rows = csv(dir.path(), "constant-curvature");
    assert_eq!(rows[0], ["t", "phi", "phi_closed_form", "implicit_residual", "regime"]);
}

#[test]
fn flat_and_expanding_cases() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&rgflow(dir.path(), &["constant-curvature", "--K", "0"]));
    assert!(text.contains("regime: FixedFlat"));
    assert!(column(&csv(dir.path(), "constant-curvature"), "phi")
        .iter()
        .all(|p| *p == 1.0));

    let text = stdout(&rgflow(
        dir.path(),
        &["constant-curvature", "--K", "-0.5", "--n", "3", "--alpha", "1"],
    ));
    assert!(text.contains("regime: ExpandingHyperbolic"));
    assert!(text.contains("extinction time: none"));
}

#[test]
fn fixed_point_tables() {
    let dir = tempfile::tempdir().unwrap();
    rgflow(dir.path(), &["fixed-points", "--alpha", "1", "--csv"]);
    let rows = csv(dir.path(), "fixed-points");
    assert_eq!(rows.len(), 5);
    assert!(!dir.path().join("fixed-points.svg").exists());

    rgflow(dir.path(), &["fixed-points", "--alpha", "-1", "--csv"]);
    let rows = csv(dir.path(), "fixed-points");
    assert!(rows
        .iter()
        .any(|r| r[3] == "Sphere_S3" && r[0].parse::<f64>().unwrap() == 4.0));

    rgflow(dir.path(), &["fixed-points", "--alpha", "2", "--csv"]);
    let lambdas: Vec<f64> = column(&csv(dir.path(), "fixed-points"), "lambda");
    assert!(lambdas.iter().any(|l| (l + 2.0).abs() < 1e-12));
}

#[test]
fn cigar_examples() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&rgflow(dir.path(), &["cigar", "--c", "1", "--alpha", "1", "--compare"]));
    let line = text.lines().find(|l| l.starts_with("max soliton residual:")).unwrap();
    let residual: f64 = line.trim_start_matches("max soliton residual:").trim().parse().unwrap();
    assert!(residual <= 1e-8);
    let svg = std::fs::read_to_string(dir.path().join("cigar.svg")).unwrap();
    assert_eq!(svg.matches("stroke-width=\"1.5\"").count(), 2);

    let text = stdout(&rgflow(
        dir.path(),
        &["cigar", "--c", "1", "--alpha", "0.001", "--compare"],
    ));
    let line = text.lines().find(|l| l.starts_with("sup gap to Ricci cigar:")).unwrap();
    assert!(
        line.trim_start_matches("sup gap to Ricci cigar:")
            .trim()
            .parse::<f64>()
            .unwrap()
            <= 1e-2
    );

    rgflow(dir.path(), &["cigar", "--c", "2", "--alpha", "0"]);
    let rows = csv(dir.path(), "cigar");
    for (s, phi) in column(&rows, "s").iter().zip(column(&rows, "phi")) {
        assert!((phi - s.tanh()).abs() <= 1e-8, "s = {s}");
    }
}

#[test]
fn phase_plane_examples() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&rgflow(
        dir.path(),
        &[
            "phase-plane",
            "--family",
            "su2",
            "--alpha",
            "1",
            "--nx",
            "8",
            "--ny",
            "8",
        ],
    ));
    assert!(text.contains("FiniteTimeShrinker: 64"));
    let text = stdout(&rgflow(
        dir.path(),
        &["phase-plane", "--family", "euclidean", "--nx", "6", "--ny", "6"],
    ));
    assert!(text.contains("Static: 36"));
    let rows = csv(dir.path(), "phase-plane");
    assert_eq!(rows[0], ["x", "y", "A0", "B0", "C0", "class"]);
    assert_eq!(rows.len(), 37);
}

#[test]
fn homogeneous_reports_fate() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&rgflow(
        dir.path(),
        &["homogeneous", "--family", "nil", "--alpha", "1000"],
    ));
    assert!(text.contains("asymptotics: FiniteTimeShrinker"));
    let text = stdout(&rgflow(
        dir.path(),
        &["homogeneous", "--family", "nil", "--alpha", "0.001"],
    ));
    assert!(text.contains("asymptotics: ImmortalPancake"));
}

#[test]
fn manifest_path_override() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("elsewhere").join("run.json");
    rgflow(dir.path(), &["fixed-points", "--manifest", manifest.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(value["parameters"]["seed_grid"], 17);
}
