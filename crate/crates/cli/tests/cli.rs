use std::process::{Command, Output};

use tetra_core::domains::{in_symmetrized_bidisc, in_tetrablock};
use tetra_core::geodesic::GeodesicSpec;
use tetra_core::sampling::{random_feasible_nontriangular, random_triangular, random_triangular_geodesic, task_rng};
use tetra_core::{c64, Point3};

fn tetra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetra"))
        .args(args)
        .env_remove("TETRA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<f64>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn member_origin_is_inside() {
    let o = tetra(&["member", "--domain", "tetrablock", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["inside"], true);
    assert_eq!(v["margin"], 1.0);
}

#[test]
fn member_boundary_exits_one() {
    let o = tetra(&["member", "--domain", "tetrablock", "1", "0", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["margin"], 0.0);
    assert_eq!(v["boundary"], true);
}

#[test]
fn member_g2_matches_library() {
    let o = tetra(&["member", "--domain", "g2", "0.3", "0.1"]);
    let lib = in_symmetrized_bidisc(c64(0.3, 0.0), c64(0.1, 0.0));
    assert_eq!(json(&o)["inside"], lib.inside);
    assert_eq!(o.status.code(), Some(if lib.inside { 0 } else { 1 }));
}

#[test]
fn member_accepts_negative_and_complex_coordinates() {
    let o = tetra(&["member", "-0.2,0.1", "0.3,-0.4", "-0.05"]);
    let lib = in_tetrablock(&Point3::new(c64(-0.2, 0.1), c64(0.3, -0.4), c64(-0.05, 0.0)));
    assert_eq!(json(&o)["margin"].as_f64().unwrap(), lib.margin);
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(tetra(&["member", "0", "x", "0"]).status.code(), Some(2));
    assert_eq!(tetra(&["member", "0", "0"]).status.code(), Some(2));
    assert_eq!(tetra(&["--tol.nonsense=1", "member", "0", "0", "0"]).status.code(), Some(2));
    assert_eq!(tetra(&["--tol.eq=-1", "member", "0", "0", "0"]).status.code(), Some(2));
    assert_eq!(tetra(&["geodesic", "{\"kind\":\"nope\"}"]).status.code(), Some(2));
    assert_eq!(tetra(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn tolerance_override_is_accepted() {
    let o = tetra(&["--tol.boundary", "1e-3", "member", "0.9995", "0", "0"]);
    assert_eq!(json(&o)["boundary"], true);
}

#[test]
fn trivial_geodesic_rows() {
    let o = tetra(&["geodesic", "{\"kind\":\"trivial\",\"theta\":0}", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(&r[3..7], &[0.0; 4]);
        assert_eq!(r[7], r[1]);
        assert_eq!(r[8], r[2]);
        assert!(r[9] > 0.0);
    }
}

#[test]
fn nontriangular_geodesic_passes_origin_row() {
    let spec = random_feasible_nontriangular(&mut task_rng(3, 0));
    let text = serde_json::to_string(&GeodesicSpec::NonTriangular(spec)).unwrap();
    let o = tetra(&["geodesic", &text, "--samples", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    let r0 = &rows[0];
    assert_eq!((r0[1], r0[2]), (0.0, 0.0));
    assert!(r0[3..7].iter().all(|x| x.abs() < 1e-15));
    assert!((r0[7] + spec.beta * spec.beta).abs() < 1e-15 && r0[8].abs() < 1e-15);
    // re-validate every row with the membership oracle
    for r in &rows {
        let p = Point3::new(c64(r[3], r[4]), c64(r[5], r[6]), c64(r[7], r[8]));
        let m = in_tetrablock(&p);
        assert!(m.inside);
        assert!((m.margin - r[9]).abs() < 1e-14);
    }
}

#[test]
fn leftinv_certifies_generated_specs() {
    let mut rng = task_rng(5, 1);
    let specs = [
        GeodesicSpec::Triangular(random_triangular_geodesic(&mut rng)),
        GeodesicSpec::NonTriangular(random_feasible_nontriangular(&mut rng)),
        GeodesicSpec::Trivial { theta: 1.1 },
    ];
    for spec in specs {
        let text = serde_json::to_string(&spec).unwrap();
        let o = tetra(&["leftinv", &text, "--samples", "32"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(json(&o)["residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn leftinv_rejects_non_extremal_record() {
    // |c| far from |(UV)_12| does not give a geodesic
    let mut s = random_triangular(&mut task_rng(5, 2), true);
    let k12 = (s.u * s.v).e12.norm();
    s.c = c64(if k12 > 0.5 { 0.0 } else { 0.95 }, 0.0);
    let text = serde_json::to_string(&GeodesicSpec::Triangular(s)).unwrap();
    assert_eq!(tetra(&["leftinv", &text]).status.code(), Some(1));
}

#[test]
fn lift_of_trivial_geodesic() {
    let o = tetra(&["lift", "{\"kind\":\"trivial\",\"theta\":0.3}"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["certificate"]["projection_residual"].as_f64().unwrap() < 1e-10);
    assert!(v["certificate"]["max_norm"].as_f64().unwrap() <= 1.0 + 1e-9);
}

#[test]
fn rho_and_aut() {
    let v = json(&tetra(&["rho", "0", "0", "0.5"]));
    assert!((v["rho"].as_f64().unwrap() - 0.5_f64.sqrt()).abs() < 1e-12);
    let o = tetra(&["aut", "0.1", "0.2", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let img = &json(&o)["image"];
    assert_eq!(img["z1"][0], 0.1);
    assert_eq!(img["z3"][0], 0.05);
}

#[test]
fn verify_equality_is_deterministic() {
    let args = ["verify", "--suite", "equality", "--n", "12", "--seed", "7"];
    let a = tetra(&args);
    let b = tetra(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<_> = stdout(&a).lines().map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l["pass"] == true));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tetra"));
        c.args(args).env_remove("TETRA_SEED");
        if let Some(s) = env {
            c.env("TETRA_SEED", s);
        }
        c.output().unwrap().stdout
    };
    let args = ["verify", "--suite", "psh", "--n", "3"];
    let flag: Vec<&str> = args.iter().copied().chain(["--seed", "11"]).collect();
    assert_eq!(run(Some("11"), &args), run(None, &flag));
    assert_ne!(run(Some("11"), &args), run(Some("12"), &args));
}

#[test]
fn nonconvex_suite_finds_witness() {
    let o = tetra(&["verify", "--suite", "nonconvex", "--budget", "1000000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["found"], true);
    assert!(v["midpoint_margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn out_writes_file_and_nothing_on_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let p = path.to_str().unwrap();
    let o = tetra(&["geodesic", "{\"kind\":\"trivial\",\"theta\":0}", "--samples", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);

    let missing = dir.path().join("never.json");
    let o = tetra(&["geodesic", "{\"kind\":\"trivial\"}", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!missing.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, "{\"kind\":\"trivial\",\"theta\":0.5}").unwrap();
    let o = tetra(&["geodesic", path.to_str().unwrap(), "--samples", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}
