use std::path::Path;
use std::process::{Command, Output};

fn yamabe_lab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yamabe-lab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_names_every_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let out = yamabe_lab(&["list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "schwarzschild",
        "rp3-model",
        "antipodal-s3",
        "lens-3",
        "s2xs1-circle-z2",
        "flat-r3",
        "custom",
    ] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn reports_are_reproducible_without_timestamps() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = yamabe_lab(
            &["run", "antipodal-s3", "--no-timestamps", "--out-dir", run],
            dir.path(),
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        reports.push(std::fs::read(dir.path().join(run).join("report.json")).unwrap());
        assert!(dir.path().join(run).join("scan_G.csv").exists());
    }
    assert_eq!(reports[0], reports[1]);
    let report: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(report["exit_code"], 0);
    assert!(report.get("timings").is_none_or(serde_json::Value::is_null));
}

#[test]
fn scan_writes_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = yamabe_lab(
        &["scan", "schwarzschild", "--t-max", "2", "--out-dir", "s"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_dir(dir.path().join("s"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "csv"))
        .expect("a csv table");
    let csv = std::fs::read_to_string(table).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,r,area,flux,W,bound,slack"));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((last[0] - 2.0).abs() < 1e-12);
}

#[test]
fn toml_config_with_tabulated_factor() {
    let dir = tempfile::tempdir().unwrap();
    // φ = 1 + 1/r sampled in s = 1/r: Schwarzschild with m = 2
    let s: Vec<String> = (0..=40).map(|i| format!("{}", i as f64 * 0.05)).collect();
    let phi: Vec<String> = (0..=40)
        .map(|i| format!("{}", 1.0 + i as f64 * 0.05))
        .collect();
    let text = format!(
        "name = \"tabulated\"\n\n[model]\nkind = \"table\"\ns = [{}]\nphi = [{}]\nboundary_radius = 1.0\n\n[solver]\nt_max = 3.0\nlevels = 31\n",
        s.join(", "),
        phi.join(", ")
    );
    std::fs::write(dir.path().join("tab.toml"), text).unwrap();
    let out = yamabe_lab(
        &["run", "tab.toml", "--no-timestamps", "--out-dir", "o"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}\n{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/report.json")).unwrap()).unwrap();
    let c0 = report["levelset"]["ends"][0]["c0"].as_f64().unwrap();
    assert!((c0 - 8.0 * std::f64::consts::PI).abs() < 1e-6, "c0 = {c0}");
}

#[test]
fn json_config_with_inline_topology() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "name": "inline",
        "topology": {
            "scenario": {
                "regions": [{"name": "N1", "exterior": true}, {"name": "N2", "exterior": true}],
                "spheres": [{"name": "H", "joins": ["N1", "N2"]}],
                "generators": [{"regions": {"N1": "N2", "N2": "N1"}}]
            },
            "summary": {"min_card": 2}
        }
    }"#;
    std::fs::write(dir.path().join("inline.json"), text).unwrap();
    let out = yamabe_lab(&["check-topology", "inline.json"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}\n{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("topology"));
}

#[test]
fn topology_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = yamabe_lab(&["check-topology", "s2xs1-circle-z2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn configuration_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = yamabe_lab(&["run", "antipodal-s4"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did you mean `antipodal-s3`"));

    std::fs::write(
        dir.path().join("bad.toml"),
        "name = \"x\"\nunknown_key = 1\n",
    )
    .unwrap();
    assert_eq!(
        yamabe_lab(&["run", "bad.toml"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(yamabe_lab(&["run"], dir.path()).status.code(), Some(1));
    assert_eq!(
        yamabe_lab(&["run", "schwarzschild", "--t-max", "-1"], dir.path())
            .status
            .code(),
        Some(1)
    );
}
