use std::process::Command;

use rigid_core::{
    build_hopf_example, find_limit_cycles, normalize_a4, AbelCoeffs, IntegratorSettings, RawParams, RigidParams,
};
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rigid").chain(args.iter().copied());
    let code = rigid_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn flags(p: &RigidParams) -> Vec<String> {
    let mut v = Vec::new();
    for (k, x) in ["--b1", "--b2", "--a1", "--a2", "--a3"].iter().zip(p.as_array()) {
        v.push(k.to_string());
        v.push(x.to_string());
    }
    v
}

fn with<'a>(base: &'a [String], extra: &[&'a str]) -> Vec<&'a str> {
    extra.iter().copied().chain(base.iter().map(String::as_str)).collect()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn json_rows(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn normalize_matches_the_library() {
    let (code, out, _) = cli(&["normalize", "--a4", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let row = &csv_rows(&out)[0];
    let got: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
    let (q, phi) = normalize_a4(&RawParams::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0).unwrap());
    let mut want = q.as_array().to_vec();
    want.push(phi.radians());
    assert_eq!(got, want);

    let (code, out, _) = cli(&["normalize", "--b1", "0.5", "--a1", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let got: Vec<f64> = csv_rows(&out)[0].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(got, vec![0.5, 0.0, 2.0, 0.0, 0.0, 0.0]);
}

#[test]
fn malformed_input_exits_with_one() {
    for args in [
        &["normalize", "--b1", "1.2.3"][..],
        &["center", "--a1", "abc"],
        &["frobnicate"],
        &["center", "--rel-tol", "-1"],
        &["infinity"],
    ] {
        let (code, out, err) = cli(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn process_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rigid");
    let ok = Command::new(bin).args(["center", "--a1", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "HomogeneousCenter\n");
    let bad = Command::new(bin).args(["center", "--a1", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    let escape = Command::new(bin).args(["cycles", "--b2", "1000", "--a1", "1"]).output().unwrap();
    assert_eq!(escape.status.code(), Some(2));
    assert_eq!(Command::new(bin).arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn center_reports() {
    assert_eq!(cli(&["center", "--a1", "1", "--a2", "-1", "--a3", "2"]).1, "HomogeneousCenter\n");
    let (_, out, _) = cli(&["center", "--b1", "3", "--a1", "1", "--a3", "2"]);
    assert!(out.starts_with("ReversibleCenter"));
    let hopf = flags(&build_hopf_example(-0.05, 0.0));
    let (code, out, _) = cli(&with(&hopf, &["center", "--format", "json-lines"]));
    assert_eq!(code, 0);
    let row = &json_rows(&out)[0];
    assert_eq!(row["class"], "NotCenter");
    assert!((row["l2"].as_f64().unwrap() + 0.05).abs() < 1e-15);
    let (_, out, _) = cli(&with(&hopf, &["lyapunov", "--format", "csv"]));
    let l3: f64 = csv_rows(&out)[0][1].parse().unwrap();
    assert!((l3 - 1.0).abs() < 1e-13);
}

#[test]
fn infinity_report() {
    let (code, out, _) = cli(&["infinity", "--a1", "1", "--a3", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "3 cusps (6 on sphere), D=4");
    let (_, out, _) = cli(&["infinity", "--b2", "2", "--a1", "1", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..4], ["U2", "0.0000000000000000e0", "3", "TwoHypTwoPar"]);
}

#[test]
fn cycles_round_trip() {
    let p = build_hopf_example(-0.05, 0.0);
    let (code, out, _) = cli(&with(&flags(&p), &["cycles", "--r-max", "1", "--format", "json-lines"]));
    assert_eq!(code, 0);
    let rows = json_rows(&out);
    let set = find_limit_cycles(&AbelCoeffs::from(&p), 1.0, 256, &IntegratorSettings::default()).unwrap();
    assert_eq!(rows.len(), set.cycles.len());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["r_star"].as_f64().unwrap(), set.cycles[0].r_star);
    assert_eq!(rows[0]["multiplier"].as_f64().unwrap(), set.cycles[0].multiplier);
    assert_eq!(rows[0]["stability"], "unstable");

    let (_, out, _) = cli(&with(&flags(&p), &["cycles", "--r-max", "1", "--format", "csv"]));
    let r: f64 = csv_rows(&out)[0][0].parse().unwrap();
    assert_eq!(r, set.cycles[0].r_star);
    let (_, human, _) = cli(&with(&flags(&p), &["cycles", "--r-max", "1"]));
    assert!(human.starts_with("1 limit cycle (2 on sphere)"));
}

#[test]
fn sphere_cycle_reports() {
    let (code, out, _) = cli(&["sphere-cycle", "--a1", "1", "--a2", "-1", "--a3", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv_rows(&out)[0][0], "center-annulus");
    let (code, out, _) = cli(&["sphere-cycle", "--b1", "5", "--b2", "1", "--a1", "1", "--a3", "2", "--format", "json-lines"]);
    assert_eq!(code, 0);
    let row = &json_rows(&out)[0];
    assert_eq!(row["outcome"], "found");
    assert_eq!(row["crossing_count"], 2);
    assert!(row["closure_residual"].as_f64().unwrap() <= 1e-6);
    let (code, _, _) = cli(&["sphere-cycle", "--b1", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn line_report() {
    let (code, out, _) = cli(&["line", "--b2", "1", "--a1", "1", "--a2", "-2", "--a3", "1", "--format", "json-lines"]);
    assert_eq!(code, 0);
    let row = &json_rows(&out)[0];
    assert_eq!(row["present"], true);
    assert_eq!(row["residual"].as_f64(), Some(0.0));
    assert_eq!(row["direction"].as_f64(), Some(1.0));
    let (_, out, _) = cli(&["line", "--a1", "1"]);
    assert_eq!(out, "no invariant line\n");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.conf");
    std::fs::write(&path, "# sample system\na1 = 1\na2 = 1\na3 = 2\nb1 = 2\nformat = csv\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = cli(&["center", "--config", p]);
    assert_eq!(code, 0);
    assert_eq!(csv_rows(&out)[0][0], "NotCenter");
    let (_, out, _) = cli(&["center", "--config", p, "--b1", "0"]);
    assert_eq!(csv_rows(&out)[0][0], "HomogeneousCenter");
    std::fs::write(&path, "a1 = 1\nwobble = 3\n").unwrap();
    assert_eq!(cli(&["center", "--config", p]).0, 1);
    assert_eq!(cli(&["center", "--config", "/nonexistent/file"]).0, 1);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    let (code, out, _) = cli(&["lyapunov", "--b1", "1", "--a2", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("l2,l3\n"));
}

#[test]
fn portrait_of_a_center_closes() {
    let (code, out, _) = cli(&[
        "portrait", "--a1", "1", "--a2", "-1", "--a3", "2", "--start", "0.3,0", "--start", "0,-0.5", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    for id in ["0", "1"] {
        let orbit: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == id).collect();
        let first: Vec<f64> = orbit[0][2..].iter().map(|s| s.parse().unwrap()).collect();
        let last: Vec<f64> = orbit.last().unwrap()[2..].iter().map(|s| s.parse().unwrap()).collect();
        assert!((first[0] - last[0]).hypot(first[1] - last[1]) <= 1e-4);
    }
}

#[test]
fn portrait_edge_cases() {
    let (code, out, _) = cli(&["portrait", "--a1", "1", "--format", "csv"]);
    assert_eq!((code, out.as_str()), (0, "orbit_id,t,x,y\n"));
    let (code, out, _) = cli(&["portrait", "--mode", "sphere", "--a1", "1", "--format", "csv"]);
    assert_eq!((code, out.as_str()), (0, "orbit_id,t,z1,z2,z3\n"));
    let (code, _, _) = cli(&["portrait", "--a4", "10", "--a1", "1", "--start", "3,0", "--start", "0,4"]);
    assert_eq!(code, 2);
    assert_eq!(cli(&["portrait", "--a1", "1", "--start", "1"]).0, 1);
    assert_eq!(cli(&["portrait", "--a1", "1", "--overlay-cycle"]).0, 1);
}

#[test]
fn sphere_portrait_with_overlay() {
    let base = ["--b1", "5", "--b2", "1", "--a1", "1", "--a3", "2"];
    let mut args = vec!["portrait", "--mode", "sphere", "--start", "0.2,0.1", "--start", "0,0.6,-0.8", "--overlay-cycle"];
    args.extend(base);
    let (code, out, _) = cli(&[args.as_slice(), &["--format", "csv"]].concat());
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert!(rows.iter().any(|r| r[0] == "2"), "overlay orbit missing");
    for r in &rows {
        let z: Vec<f64> = r[2..].iter().map(|s| s.parse().unwrap()).collect();
        assert!((z[0] * z[0] + z[1] * z[1] + z[2] * z[2] - 1.0).abs() <= 1e-9);
    }
    let (code, svg, _) = cli(&[args.as_slice(), &["--format", "svg"]].concat());
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("stroke=\"red\"") && svg.contains("<polyline"));
    // two cusp pairs at infinity, drawn as round glyphs
    assert_eq!(svg.matches(r#" r="6""#).count(), 2);
}

#[test]
fn sweep_records_respect_the_certificates() {
    let (code, out, err) = cli(&["sweep", "--grid", "b1=0,b2=-1:1:3,a1=0.5:1:2,a2=-1:1:3,a3=0.2", "--format", "json-lines"]);
    assert_eq!(code, 0);
    let rows = json_rows(&out);
    assert_eq!(rows.len(), 18);
    for r in &rows {
        assert_eq!(r["no_cycle_certificate"], true);
        assert_eq!(r["n_planar_cycles"], 0, "{r}");
        if r["center_class"] != "NotCenter" {
            assert_eq!(r["sphere_orbit"], "center-annulus");
        }
    }
    assert!(rows.iter().any(|r| r["center_class"] == "HomogeneousCenter"));
    assert!(err.starts_with("18 samples"));
    let lower = err.to_lowercase();
    assert!(!lower.contains("proved") && !lower.contains("theorem"));
}

#[test]
fn sweep_is_deterministic_across_job_counts() {
    let (c1, a, _) = cli(&["sweep", "--random", "6", "--seed", "3", "--format", "csv", "--jobs", "1"]);
    let (c2, b, _) = cli(&["sweep", "--random", "6", "--seed", "3", "--format", "csv", "--jobs", "4"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(csv_rows(&a).len(), 6);
    assert_eq!(cli(&["sweep"]).0, 1);
    assert_eq!(cli(&["sweep", "--grid", "q=1"]).0, 1);
}
