use serde_json::Value;
use symplecta_cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut full = vec!["symplecta"];
    full.extend_from_slice(args);
    let o = run(full);
    (o.code, o.stdout)
}

fn json_of(args: &[&str]) -> Value {
    let (code, out) = call(args);
    assert_eq!(code, 0, "{args:?} failed: {out}");
    serde_json::from_str(&out).unwrap()
}

const BALL_X: &str = r#"{"kind":"ellipsoid","space":"x","hbar":1.0,"Q":[[1.0,0.0],[0.0,1.0]]}"#;
const SMALL_P: &str = r#"{"kind":"ellipsoid","space":"p","hbar":1.0,"Q":[[4.0,0.0],[0.0,4.0]]}"#;

#[test]
fn dual_of_ball_is_ball_in_momentum_space() {
    let v = json_of(&["dual", "--body", BALL_X]);
    assert_eq!(v["space"], "p");
    let q = &v["Q"];
    assert!((q[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(q[0][1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn dual_reads_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    std::fs::write(&path, BALL_X).unwrap();
    let v = json_of(&["dual", "--body", path.to_str().unwrap()]);
    assert_eq!(v["kind"], "ellipsoid");
}

#[test]
fn non_pair_exits_2_with_witness() {
    let (code, out) = call(&["pair-check", "--x", BALL_X, "--p", SMALL_P]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "not_quantum_pair");
    assert!((v["error"]["lambda_max"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["error"]["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn pair_passes_with_report() {
    let p = r#"{"kind":"ellipsoid","space":"p","hbar":1.0,"Q":[[1.0,0.0],[0.0,1.0]]}"#;
    let v = json_of(&["pair-check", "--x", BALL_X, "--p", p]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["saturated"], true);
}

#[test]
fn malformed_input_exits_1() {
    let (code, out) = call(&["dual", "--body", "{not json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "malformed_input");
    assert_eq!(call(&["no-such-command"]).0, 1);
    assert_eq!(call(&["dual"]).0, 1);
    let ragged = r#"{"kind":"ellipsoid","space":"x","hbar":1.0,"Q":[[1.0],[0.0,1.0]]}"#;
    assert_eq!(call(&["dual", "--body", ragged]).0, 1);
}

#[test]
fn csv_only_for_sweep() {
    assert_eq!(call(&["--format", "csv", "dual", "--body", BALL_X]).0, 1);
}

#[test]
fn pauli_partners_and_infeasible_case() {
    let v = json_of(&["pauli", "--sxx", "1", "--spp", "1"]);
    assert_eq!(v["partners"].as_array().unwrap().len(), 2);
    let (code, out) = call(&["pauli", "--sxx", "0.25", "--spp", "0.25"]);
    assert_eq!(code, 2);
    assert!(out.contains("no_quantum_solution"));
}

#[test]
fn gamma_round_trip() {
    let state = r#"{"n":1,"hbar":1.0,"W":[[1.0]],"Y":[[1.0]]}"#;
    let blob = json_of(&["gamma", "--state", state]);
    let g = &blob["G"];
    assert_eq!(g[0][0].as_f64().unwrap(), 2.0);
    assert_eq!(g[0][1].as_f64().unwrap(), 1.0);
    let back = json_of(&["gamma", "--blob", &blob.to_string()]);
    assert!((back["W"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((back["Y"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn blob_and_projection() {
    let s = r#"{"n":2,"rows":[[1.0,0.0],[-1.0,1.0]]}"#;
    let v = json_of(&["blob", "--matrix", s]);
    assert_eq!(v["blob"]["n"], 1);
    let g = v["blob"].to_string();
    let pr = json_of(&["blob-project", "--blob", &g]);
    assert_eq!(pr["saturated"], false);
    let qp = pr["p"]["Q"][0][0].as_f64().unwrap();
    assert!((qp - 0.5).abs() < 1e-12);
    let lambda = pr["lambda_max"].as_f64().unwrap();
    assert!((lambda - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn state_check_reports_verdict() {
    let v = json_of(&[
        "state-check",
        "--state",
        r#"{"n":1,"hbar":1.0,"W":[[1.0]],"Y":[[0.0]]}"#,
    ]);
    assert_eq!(v["verdict"]["passes"], true);
    assert_eq!(v["verdict"]["blob_unique"], true);
    let bad = r#"{"n":1,"hbar":1.0,"Sigma":[[0.25,0.0],[0.0,0.25]]}"#;
    let v = json_of(&["state-check", "--sigma", bad]);
    assert_eq!(v["verdict"]["passes"], false);
}

#[test]
fn capacity_and_hz_pair() {
    let e = r#"{"n":1,"hbar":1.0,"M":[[4.0,0.0],[0.0,1.0]]}"#;
    let v = json_of(&["capacity", "--ellipsoid", e]);
    assert_eq!(v["method"], "ellipsoid_formula");
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let v = json_of(&["capacity", "--polygon", "[[1,1],[-1,1],[-1,-1],[1,-1]]"]);
    assert_eq!(v["value"].as_f64().unwrap(), 4.0);
    let x = r#"{"kind":"polytope","space":"x","hbar":1.0,"vertices":[[1.0],[-1.0]]}"#;
    let p = r#"{"kind":"polytope","space":"p","hbar":1.0,"vertices":[[2.0],[-2.0]]}"#;
    let v = json_of(&["hz-pair", "--x", x, "--p", p]);
    assert!((v["value"].as_f64().unwrap() - 8.0).abs() < 1e-9);
    assert_eq!(v["planar_area"].as_f64().unwrap(), 8.0);
}

#[test]
fn concentration_commands() {
    let v = json_of(&[
        "ds-check", "--eps-x", "0.3966", "--eps-p", "0.3966", "--cx", "1", "--cp", "[1]",
    ]);
    assert_eq!(v["consistent"], true);
    let v = json_of(&["polar-bound", "--n", "1", "--eps-x", "0", "--eps-p", "0"]);
    assert_eq!(v["rhs"].as_f64().unwrap(), 4.0);
    assert_eq!(v["consistent"], false);
    let a = r#"{"n":1,"rows":[[2.0]]}"#;
    let b = r#"{"n":1,"rows":[[1.0]]}"#;
    let v = json_of(&["hardy-check", "--a", a, "--b", b]);
    assert_eq!(v["regime"], "fail");
}

#[test]
fn fourier_of_sampled_gaussian() {
    let n = 256;
    let l = 12.0;
    let h = 2.0 * l / n as f64;
    let re: Vec<f64> = (0..n)
        .map(|k| {
            let x = -l + k as f64 * h;
            std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp()
        })
        .collect();
    let f = serde_json::json!({"hbar": 1.0, "L": l, "samples_re": re, "samples_im": vec![0.0; n]}).to_string();
    let g = json_of(&["fourier", "--function", &f]);
    let mid = g["samples_re"][n / 2].as_f64().unwrap();
    assert!((mid - std::f64::consts::PI.powf(-0.25)).abs() < 1e-6);
    let eps = json_of(&["concentration", "--function", &f, "--a", "12"]);
    assert_eq!(eps["eps"].as_f64().unwrap(), 0.0);
    let ds = json_of(&["ds-check", "--function", &f, "--cx", "1", "--cp", "1"]);
    assert_eq!(ds["ds"]["consistent"], true);
}

#[test]
fn symplectic_commands() {
    let s = json_of(&["--seed", "4", "random-symplectic", "--n", "2"]);
    let text = s.to_string();
    assert_eq!(json_of(&["symplectic-check", "--matrix", &text])["holds"], true);
    let f = json_of(&["pre-iwasawa", "--matrix", &text]);
    assert!(f["reconstruction_error"].as_f64().unwrap() < 1e-9);
    let inv = json_of(&["inverse", "--matrix", &text]);
    assert_eq!(inv["n"], 4);
    let w = json_of(&["williamson", "--matrix", r#"{"n":2,"rows":[[2.0,0.0],[0.0,8.0]]}"#]);
    assert!((w["spectrum"][0].as_f64().unwrap() - 4.0).abs() < 1e-12);
    let g = json_of(&["gromov-check", "--matrix", &text, "--plane", "2"]);
    assert_eq!(g["passes"], true);
}

#[test]
fn john_commands() {
    let v = json_of(&["john", "--x", BALL_X, "--p", BALL_X.replace("\"x\"", "\"p\"").as_str()]);
    assert_eq!(v["is_blob"], true);
    let x = r#"{"kind":"ellipsoid","space":"x","hbar":1.0,"Q":[[1.0]]}"#;
    let p = r#"{"kind":"ellipsoid","space":"p","hbar":1.0,"Q":[[0.25]]}"#;
    let v = json_of(&["john", "--x", x, "--p", p, "--rescale", "2"]);
    assert_eq!(v["contained"], true);
    let (code, out) = call(&["john", "--x", x, "--p", p, "--rescale", "3"]);
    assert_eq!(code, 2);
    assert!(out.contains("scale_out_of_range"));
    let sq = r#"{"kind":"polytope","space":"x","hbar":1.0,"vertices":[[1.0],[-1.0]]}"#;
    let sp = r#"{"kind":"polytope","space":"p","hbar":1.0,"vertices":[[1.0],[-1.0]]}"#;
    let v = json_of(&["john", "--x", sq, "--p", sp]);
    assert!((v["ellipsoid"]["M"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn metaplectic_and_rs() {
    let st = r#"{"n":1,"hbar":1.0,"W":[[1.0]],"Y":[[0.0]]}"#;
    let v = json_of(&[
        "metaplectic",
        "--state",
        st,
        "--generator",
        r#"{"kind":"vp","p":[[1.0]]}"#,
    ]);
    assert_eq!(v["Y"][0][0].as_f64().unwrap(), 1.0);
    let v = json_of(&[
        "rs-check",
        "--sigma",
        r#"{"n":1,"hbar":1.0,"Sigma":[[0.5,-0.5],[-0.5,1.0]]}"#,
    ]);
    assert_eq!(v["passes"], true);
}

#[test]
fn mahler_support_contains() {
    let sq = r#"{"kind":"polytope","space":"x","hbar":1.0,"vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}"#;
    let m = json_of(&["mahler", "--body", sq]);
    assert!((m["mahler"].as_f64().unwrap() - 8.0).abs() < 1e-10);
    let s = json_of(&["support", "--body", sq, "--direction", "[1, 1]"]);
    assert_eq!(s["value"].as_f64().unwrap(), 2.0);
    let c = json_of(&["contains", "--outer", sq, "--inner", BALL_X]);
    assert_eq!(c["holds"], true);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sweep_capacities_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    let o = run([
        "symplecta",
        "sweep",
        "--suite",
        "capacities",
        "--seeds",
        "0..99",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,property,seed,measured,bound,margin,pass\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r[6] == "pass"));
}

#[test]
fn empty_sweep_is_header_only() {
    let (code, out) = call(&["sweep", "--suite", "polar", "--seeds", "", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "suite,property,seed,measured,bound,margin,pass\n");
}

#[test]
fn hz_pair_sweep_margins() {
    let (_, out) = call(&["sweep", "--suite", "hz-pair", "--seeds", "0..19", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r[5].parse::<f64>().unwrap() <= 1e-9));
}

#[test]
fn rs_sweep_margins() {
    let (_, out) = call(&["sweep", "--suite", "rs", "--seeds", "0..49", "--format", "csv"]);
    assert!(csv_rows(&out).iter().all(|r| r[5].parse::<f64>().unwrap() >= -1e-9));
}

#[test]
fn output_is_deterministic() {
    for suite in [
        "symplectic",
        "polar",
        "blobs",
        "states",
        "concentration",
        "hardy",
        "gromov",
    ] {
        let a = call(&["sweep", "--suite", suite, "--seeds", "0..9", "--format", "csv"]);
        let b = call(&["sweep", "--suite", suite, "--seeds", "0..9", "--format", "csv"]);
        assert_eq!(a, b, "{suite}");
        assert!(csv_rows(&a.1).iter().all(|r| r[6] == "pass"), "{suite}");
    }
    let j1 = call(&["sweep", "--suite", "blobs", "--seeds", "3"]);
    let j2 = call(&["sweep", "--suite", "blobs", "--seeds", "3"]);
    assert_eq!(j1, j2);
}
