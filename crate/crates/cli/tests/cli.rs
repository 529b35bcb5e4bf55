use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pennerlab"));
    c.env_remove("PENNERLAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn seed_file(dir: &Path, surface: &str, twist: Option<&str>) -> String {
    let p = dir.join(format!("{surface}.json"));
    let mut args = vec!["seed", surface, "--out", p.to_str().unwrap()];
    if let Some(t) = twist {
        args.extend(["--twist", t]);
    }
    assert_eq!(code(&run(&args)), 0);
    p.to_str().unwrap().to_string()
}

fn cross_block(v: &Value) -> Vec<Vec<String>> {
    let om = &v["result"]["omega"];
    (0..3).map(|r| (3..6).map(|c| om[r][c].as_str().unwrap().to_string()).collect()).collect()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn line_system() -> Value {
    serde_json::json!({
        "labels": ["a1", "a2", "b1", "b2"],
        "partition": [[0, 1], [2, 3]],
        "omega": [[0, 0, 1, 2], [0, 0, 3, 4], [1, 3, 0, 0], [2, 4, 0, 0]],
    })
}

#[test]
fn seeds() {
    let s06 = json(&run(&["seed", "S_0_6"]));
    assert_eq!(cross_block(&s06), [["12", "8", "4"], ["8", "8", "4"], ["4", "4", "4"]]);
    assert_eq!(s06["config"]["command"], "seed");
    assert_eq!(s06["input_sha256"].as_str().unwrap().len(), 64);
    let s20 = json(&run(&["seed", "S_2"]));
    assert_eq!(cross_block(&s20), [["2", "2", "1"], ["2", "4", "2"], ["1", "2", "3"]]);
    assert_eq!(code(&run(&["seed", "S_9_9"])), 1);
    assert_eq!(code(&run(&["seed", "S_0_6", "--twist", "1,-1,1"])), 1);
}

#[test]
fn rich_check() {
    let dir = tempfile::tempdir().unwrap();
    let seed = seed_file(dir.path(), "S_1_3", None);
    let r = json(&run(&["rich-check", "--omega", &seed]));
    assert_eq!(r["status"], "pass");

    let mut sys: Value = serde_json::from_str(&std::fs::read_to_string(&seed).unwrap()).unwrap();
    let sys = sys["result"].take();
    let mut zeroed = sys.clone();
    zeroed["omega"][0][3] = "0".into();
    zeroed["omega"][3][0] = "0".into();
    let f = write(dir.path(), "zero.json", &zeroed);
    let o = run(&["rich-check", "--omega", &f]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["result"]["positive"], false);

    let f = write(dir.path(), "rank2.json", &serde_json::json!([[1, 2, 3], [1, 2, 3], [2, 3, 5]]));
    let o = run(&["rich-check", "--omega", &f]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["result"]["rank"], 2);
}

#[test]
fn fgamma_line_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.json", &line_system());
    let a = json(&run(&["fgamma", "--omega", &f, "--path", "1,4,2,3"]));
    let factors: Vec<Value> = a["result"]["factors"].as_array().unwrap().iter().map(|x| x["factor"].clone()).collect();
    assert!(factors.contains(&serde_json::json!(["-2/1", "3/1"])), "{factors:?}");
    let b = json(&run(&["fgamma", "--omega", &f, "--path", "1,4,2,3,2,3,1"]));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(code(&run(&["fgamma", "--omega", &f, "--path", "1,2"])), 1);
}

#[test]
fn approx_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let seed = seed_file(dir.path(), "S_1_3", Some("1,2,5"));
    let out1 = dir.path().join("a1.json");
    let out2 = dir.path().join("a2.json");
    for out in [&out1, &out2] {
        let o = run(&[
            "approx",
            "--omega",
            &seed,
            "--theta",
            "1,1",
            "--eps",
            "0.1",
            "--budget",
            "100000",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(&out1).unwrap();
    assert_eq!(a, std::fs::read(&out2).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    let err = v["result"]["coeff_error"].as_array().unwrap();
    assert!(err.iter().all(|e| e.as_f64().unwrap() < 0.1));
    assert_eq!(v["config"]["theta"], serde_json::json!([1.0, 1.0]));

    let o = run(&["approx", "--omega", &seed, "--theta", "-0.5,1.3", "--eps", "0.001", "--budget", "50"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "exhausted");
}

#[test]
fn verify_toy_trace() {
    let dir = tempfile::tempdir().unwrap();
    let toy = serde_json::json!({ "labels": ["a", "b"], "partition": [[0], [1]], "omega": [[0, 1], [1, 0]] });
    let f = write(dir.path(), "toy.json", &toy);
    let o = run(&["verify", "--omega", &f, "--path", "1,2", "--theta", "0,0", "--k-max", "10"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# config="));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "k,lambda,theta_re,theta_im,residual,conjugate,defl_dist");
    let d: Vec<f64> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(d.len(), 10);
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(code(&run(&["verify", "--omega", &f, "--path", "1,2", "--theta", "0,0", "--k-max", "61"])), 1);
}

#[test]
fn scan_grid() {
    let dir = tempfile::tempdir().unwrap();
    let seed = seed_file(dir.path(), "S_1_3", Some("1,2,5"));
    let args = [
        "scan",
        "--omega",
        &seed,
        "--region",
        "0.4,0.6,1.1,1.3",
        "--grid",
        "0.1",
        "--eps",
        "0.1",
        "--k-max",
        "25",
        "--budget",
        "50000",
    ];
    let a = bin().args(args).output().unwrap();
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let b = bin().args(args).env("PENNERLAB_THREADS", "1").output().unwrap();
    assert_eq!(code(&b), 0);
    let (ta, tb) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    let rows = data_lines(&ta);
    assert_eq!(rows[0], "target_re,target_im,best_re,best_im,dist,word_len,k,verdict");
    assert_eq!(rows.len(), 10);
    assert_eq!(rows, data_lines(&tb));
    assert!(tb.contains("\"threads\":1"));

    let bad = bin().args(args).env("PENNERLAB_THREADS", "0").output().unwrap();
    assert_eq!(code(&bad), 1);
}

#[test]
fn argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let seed = seed_file(dir.path(), "S_0_6", None);
    assert_eq!(code(&run(&["approx", "--omega", &seed, "--theta", "1"])), 1);
    assert_eq!(code(&run(&["approx", "--omega", &seed, "--theta", "0,0"])), 1);
    assert_eq!(code(&run(&["scan", "--omega", &seed, "--grid", "0"])), 1);
    assert_eq!(code(&run(&["verify", "--omega", &seed, "--theta", "1,0"])), 1);
    assert_eq!(code(&run(&["rich-check", "--omega", "/nonexistent/file.json"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
