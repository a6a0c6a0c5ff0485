use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn gen(dir: &Path, name: &str, tasks: &str) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let o = gma(&["gen", "--seed", "3", "--tasks", tasks, "-o", &path]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn gen_solve_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "inst.json", "12");
    for alg in ["gma", "zsg", "ldm"] {
        let out = dir.path().join(format!("{alg}.json")).to_string_lossy().into_owned();
        let o = gma(&["solve", &inst, "--alg", alg, "-o", &out]);
        assert_eq!(code(&o), 0, "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert!(doc["assignment"]["objective_j"].as_f64().unwrap() >= 0.0);
        let v = gma(&["validate", &inst, &out]);
        assert_eq!(code(&v), 0, "{alg}: {}", String::from_utf8_lossy(&v.stdout));
    }
}

#[test]
fn gen_is_deterministic() {
    let a = gma(&["gen", "--seed", "9", "--tasks", "7"]);
    let b = gma(&["gen", "--seed", "9", "--tasks", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, gma(&["gen", "--seed", "10", "--tasks", "7"]).stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json").to_string_lossy().into_owned();
    assert_eq!(code(&gma(&["solve", &missing])), 1);

    let junk = dir.path().join("junk.json");
    fs::write(&junk, r#"{"tasks": []}"#).unwrap();
    assert_eq!(code(&gma(&["solve", junk.to_str().unwrap()])), 2);

    let inst = gen(dir.path(), "big.json", "12");
    assert_eq!(code(&gma(&["solve", &inst, "--alg", "oracle"])), 4);
    assert_eq!(code(&gma(&["solve", &inst, "--epsilon", "-1"])), 2);

    // break a valid answer: claim more bandwidth than any AP allows
    let out = dir.path().join("gma.json");
    assert_eq!(code(&gma(&["solve", &inst, "-o", out.to_str().unwrap()])), 0);
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let tasks = doc["assignment"]["tasks"].as_array_mut().unwrap();
    let placed = tasks.iter_mut().find(|t| t.get("ap").is_some()).expect("something offloaded");
    placed["bw_units"] = serde_json::json!(10_000);
    fs::write(&out, doc.to_string()).unwrap();
    let v = gma(&["validate", &inst, out.to_str().unwrap()]);
    assert_eq!(code(&v), 5);
    assert!(String::from_utf8_lossy(&v.stdout).contains("allocation_bound"));
}

#[test]
fn oracle_on_a_tiny_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("tiny.json");
    fs::write(
        &inst,
        r#"{
          "units": {"bandwidth_hz": 1e6, "compute_cps": 1e9, "power_w": 0.1, "rho": 1e-27},
          "alpha": 0.5, "p_max": 4, "noise_w": 8e-8,
          "aps": [{"b_units": 6}], "servers": [{"c_units": 6}], "delay_s": [[0.0]],
          "tasks": [
            {"s_bits": 1e5, "eta": 150, "f_cps": 1e9, "d_s": 0.05, "aps": [0], "gain": [1e-5]},
            {"s_bits": 1e5, "eta": 150, "f_cps": 2e9, "d_s": 0.04, "aps": [0], "gain": [1e-5]}
          ]
        }"#,
    )
    .unwrap();
    let o = gma(&["solve", inst.to_str().unwrap(), "--alg", "oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["report"]["optimum"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["report"]["proven_optimal"], serde_json::json!(true));
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(
        &cfg,
        "seed = 7\ntasks = [5, 12]\npairs_per_combo = 1\nsizes_per_pair = 2\n",
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = gma(&["bench", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out.join("results.csv")).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let text = String::from_utf8(a).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "instance_id,seed,r_b,r_c,I,alpha,epsilon,alg,objective_j,upper_bound_j,ratio,acceptance,runtime_ms,feasible"
    );
    // 8 instances, 3 bounds, 3 algorithms
    assert_eq!(text.lines().count(), 1 + 8 * 3 * 3);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "seed = 1\nmystery = true\n").unwrap();
    assert_eq!(code(&gma(&["bench", "--config", bad.to_str().unwrap()])), 2);
}
