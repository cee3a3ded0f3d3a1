//! End-to-end checks of the command-line surface: exit codes, round-trip
//! fidelity of CSV/JSON output, and OBJ mesh validity.

use lorheis::family_one::{self, Chart1, SphereSpec};
use lorheis::Epsilon;

fn run(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out");
    let mut argv = vec!["lorheis".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".to_string());
    argv.push(path.to_str().unwrap().to_string());
    let code = lorheis_cli::execute(argv);
    let content = std::fs::read_to_string(&path).unwrap_or_default();
    (code, content)
}

#[test]
fn exp_trivial_point() {
    let (code, out) = run(&["exp", "--family", "1", "--eps", "1", "--theta", "0", "--phi", "0",
        "--t", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,y,z"));
    let vals: Vec<f64> =
        lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(vals, vec![2.0, 0.0, 0.0]);
}

#[test]
fn dist_analytic_row() {
    let (code, out) = run(&["dist", "--eps", "1", "--x", "2", "--y", "0", "--z", "0"]);
    assert_eq!(code, 0);
    let d: f64 = out.lines().nth(1).unwrap().parse().unwrap();
    assert!((d - 2.0).abs() <= 1e-12);
}

#[test]
fn dist_outside_shadow_is_domain_error() {
    let (code, _) = run(&["dist", "--eps", "1", "--x", "-5", "--y", "0", "--z", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn unknown_flag_is_usage_error() {
    let (code, _) = run(&["exp", "--bogus", "1"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["exp", "--family", "7", "--t", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn sphere_csv_reparses_bit_for_bit() {
    let (code, out) = run(&["sphere", "--eps", "1", "--radius", "1.5", "--n-theta", "5",
        "--n-phi", "6"]);
    assert_eq!(code, 0);
    let spec = SphereSpec {
        radius: 1.5,
        theta_min: -2.0,
        theta_max: 2.0,
        n_theta: 5,
        phi_min: 0.0,
        phi_max: std::f64::consts::TAU,
        n_phi: 6,
    };
    let samples = family_one::sphere1(Epsilon::new(1.0).unwrap(), &spec);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("theta,phi,t,x,y,z"));
    let mut count = 0;
    for (line, s) in lines.zip(&samples) {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let expect = [s.chart.theta, s.chart.phi, s.chart.t, s.point.x, s.point.y, s.point.z];
        for (got, want) in vals.iter().zip(expect) {
            assert_eq!(got.to_bits(), want.to_bits(), "csv not bit-exact: {got} vs {want}");
        }
        count += 1;
    }
    assert_eq!(count, samples.len());
    assert_eq!(count, 30);
}

#[test]
fn periodic_json_reparses_bit_for_bit() {
    let (code, out) = run(&["periodic", "--eps", "1", "--t1", "6", "--t2", "15", "--format",
        "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid json");
    let plan = lorheis::family_two::periodic_plan(Epsilon::new(1.0).unwrap(), 6.0, 15.0).unwrap();
    let len = v["lorentz_length"].as_f64().unwrap();
    assert_eq!(len.to_bits(), plan.lorentz_length.to_bits());
    assert!((len - 27.0_f64.sqrt()).abs() <= 1e-10);
    assert!(v["closure_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["segments"].as_array().unwrap().len(), 3);
    let w = &v["waypoints"][1];
    assert_eq!(w["z"].as_f64().unwrap().to_bits(), plan.waypoints[1].z.to_bits());
}

#[test]
fn periodic_inadmissible_pair_is_domain_error() {
    let (code, _) = run(&["periodic", "--eps", "1", "--t1", "6", "--t2", "7"]);
    assert_eq!(code, 1);
}

#[test]
fn sphere_obj_is_a_valid_mesh() {
    let (code, out) = run(&["sphere", "--eps", "1", "--radius", "1", "--n-theta", "5",
        "--n-phi", "6", "--format", "obj"]);
    assert_eq!(code, 0);
    let mut n_verts = 0usize;
    let mut n_faces = 0usize;
    for line in out.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let coords: Vec<f64> = parts.map(|p| p.parse().unwrap()).collect();
                assert_eq!(coords.len(), 3);
                n_verts += 1;
            }
            Some("f") => {
                let idx: Vec<usize> = parts.map(|p| p.parse().unwrap()).collect();
                assert_eq!(idx.len(), 4);
                assert!(idx.iter().all(|&i| i >= 1 && i <= 30), "face index out of range");
                n_faces += 1;
            }
            other => panic!("unexpected obj line {other:?}"),
        }
    }
    assert_eq!(n_verts, 30, "vertex count must equal the grid size");
    assert_eq!(n_faces, 4 * 5);
}

#[test]
fn invert_round_trips_through_the_csv() {
    let e = Epsilon::new(1.0).unwrap();
    let q = family_one::exp1(e, Chart1::new(0.8, 1.1, 1.7));
    let (code, out) = run(&["invert", "--eps", "1", "--x", &format!("{:.17e}", q.x), "--y",
        &format!("{:.17e}", q.y), "--z", &format!("{:.17e}", q.z)]);
    assert_eq!(code, 0);
    let vals: Vec<f64> =
        out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let again = family_one::exp1(e, Chart1::new(vals[0], vals[1], vals[2]));
    assert!((again.inverse() * q).norm_inf() <= 1e-8);
    assert!((vals[2] - 1.7).abs() <= 1e-6);
}

#[test]
fn converge_exp_errors_decrease() {
    let (code, out) = run(&["converge-exp", "--psi", "0.5", "--c", "-1.0", "--t", "2"]);
    assert_eq!(code, 0);
    let errs: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 3);
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);
}

#[test]
fn oracle_check_reports_small_error() {
    let (code, out) = run(&["oracle-check", "--family", "2", "--eps", "0.8", "--theta", "0.4",
        "--phi", "1.2", "--t", "1.5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["error"].as_f64().unwrap() <= 1e-8);
    assert!(v["hamiltonian_drift"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn oracle_ledger_passes() {
    let (code, out) = run(&["oracle-check", "--ledger", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 8);
    for e in entries {
        assert_eq!(e["adopted_agrees"], serde_json::Value::Bool(true), "{}", e["id"]);
        assert_eq!(e["rejected_all_disagree"], serde_json::Value::Bool(true), "{}", e["id"]);
    }
}

#[test]
fn attain_family_zero_matches_quadratic_region() {
    let (code, out) = run(&["attain", "--family", "0", "--x", "2", "--y", "0", "--z", "0.5"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("interior,"));
    let (code, out) = run(&["attain", "--family", "0", "--x", "2", "--y", "0", "--z", "1.5"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("exterior,"));
}

#[test]
fn obj_rejected_for_non_mesh_commands() {
    let (code, _) = run(&["dist", "--eps", "1", "--x", "2", "--y", "0", "--z", "0", "--format",
        "obj"]);
    assert_eq!(code, 2);
}
