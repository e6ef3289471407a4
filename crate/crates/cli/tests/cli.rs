use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semifredkin"))
        .args(args)
        .env_remove("SEMIFREDKIN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

/// Data lines of a CSV run, without the metadata record.
fn csv(args: &[&str]) -> Vec<String> {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {\"tool\":\"semifredkin-cli\""));
    lines.map(str::to_string).collect()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(
        csv(&["count", "--phase", "1", "--n", "4", "--class", "11"]),
        ["phase,n,h,a,b,count", "I,4,0,1,1,6"]
    );
    assert_eq!(
        csv(&["count", "--dyck", "--n", "4", "--h", "0"]),
        ["phase,n,h,a,b,count", "dyck,4,0,,,2"]
    );
    assert_eq!(
        csv(&["count", "--phase", "3", "--class", "22", "--n", "6"])[1],
        "III,6,0,2,2,1"
    );
}

#[test]
fn json_echoes_the_config() {
    let v = json(&["count", "--phase", "1", "--n", "4", "--class", "11"]);
    assert_eq!(v["metadata"]["config"]["command"]["command"], "count");
    assert_eq!(v["metadata"]["config"]["command"]["n"], 4);
    assert_eq!(v["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["metadata"]["wall_clock_s"].is_number());
    assert_eq!(v["rows"][0]["count"], "6");
}

#[test]
fn unmixed_table_from_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "count", "--phase", "2", "--n-max", "8", "--class", "11", "--format", "csv",
    ];
    let first = Command::new(env!("CARGO_BIN_EXE_semifredkin"))
        .args(args)
        .env("SEMIFREDKIN_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(dir.path().join("counts-II-n8-h0.json").exists());
    let second = Command::new(env!("CARGO_BIN_EXE_semifredkin"))
        .args(args)
        .env("SEMIFREDKIN_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    let rows = |o: &Output| {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .lines()
            .skip(1)
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    assert_eq!(rows(&first), rows(&second));
    // (length, count) on even lengths
    let even: Vec<(usize, String)> = rows(&first)[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[5].to_string())
        })
        .filter(|(n, _)| n % 2 == 0)
        .collect();
    let counts: Vec<&str> = even.iter().map(|(_, c)| c.as_str()).collect();
    assert_eq!(counts, ["1", "2", "5", "13", "34"]);
}

#[test]
fn degeneracies() {
    let rows = csv(&["gsd", "--n", "4", "--phase", "2"]);
    assert!(rows[1].starts_with("4,0.0,0.0,8,8,"));
    let rows = csv(&["gsd", "--n", "6", "--phase", "3"]);
    assert!(rows[1].starts_with("6,0.0,1.0,2,2,"));
    let v = json(&["gsd", "--n", "4", "--phase", "1"]);
    assert_eq!(v["rows"][0]["gsd"], 4);
    assert!(v["rows"][0]["ground_energy"].as_f64().unwrap() < 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--phase", "1", "--n", "9000"]).status.code(), Some(2));
    assert_eq!(run(&["gsd", "--n", "9", "--phase", "1"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--n", "20", "--class", "11"]).status.code(), Some(2));
    assert_eq!(
        run(&["gsd", "--n", "4", "--phase", "1", "--tol", "0.3"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["count", "--phase", "7", "--n", "4"]).status.code(), Some(1));
}

#[test]
fn entropy_scan() {
    let rows = csv(&[
        "ee", "--phase", "1", "--class", "11", "--two-n", "4,6", "--r", "0,1", "--method", "all",
    ]);
    assert_eq!(rows[0], "phase,class,two_n,r,method,S,delta_s");
    for line in rows.iter().filter(|l| l.contains("rdm_numeric")) {
        let delta: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(delta < 1e-8, "{line}");
    }
    assert_eq!(
        csv(&["ee", "--phase", "3", "--class", "22", "--two-n", "200"])[1],
        "III,22,200,0,schmidt_counts,0.0,"
    );
}

#[test]
fn correlator_pair_and_summary() {
    let rows = csv(&[
        "correlator",
        "--state",
        "he:5:1",
        "--a",
        "flip(13;12)@1",
        "--b",
        "flip(21;31)@4",
        "--times",
        "0.5,5",
    ]);
    assert_eq!(
        rows[0],
        "n,state_id,i,delta,j,delta_prime,t,re,im,abs,overlap_flag,relation,op_i,op_j"
    );
    assert_eq!(rows.len(), 3);
    for line in &rows[1..] {
        let abs: f64 = line.split(',').nth(9).unwrap().parse().unwrap();
        assert!(abs < 1e-10);
    }
    let v = json(&["correlator", "--state", "he:5:1", "--times", "1", "--summary"]);
    let rows = v["rows"].as_array().unwrap();
    let max = |rel: &str| {
        rows.iter().find(|r| r["relation"] == rel).unwrap()["max_abs"]
            .as_f64()
            .unwrap()
    };
    assert!(max("separated") < 1e-10);
    assert!(max("overlap") > 1e-6);
}

#[test]
fn enumerate_and_closure() {
    let rows = csv(&["enumerate", "--n", "4", "--class", "11"]);
    assert_eq!(rows.len(), 7);
    let rows = csv(&["closure", "--path", "1,2 2,1 1,2 2,1"]);
    assert_eq!(rows.len(), 6);
    let out = run(&["closure", "--path", "1,2 | 3,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn quick_verify_subset() {
    let out = run(&["verify", "--quick", "--only", "1,2,5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS [1]"));
    let out = run(&["verify", "--quick", "--only", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_are_reproducible() {
    let strip = |o: Output| {
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .collect::<Vec<_>>()
            .join("\n")
    };
    let args = [
        "ee", "--phase", "2", "--two-n", "4,8", "--r", "0,1", "--method", "all", "--format", "csv",
    ];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}
