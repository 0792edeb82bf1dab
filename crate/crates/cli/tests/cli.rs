use std::process::{Command, Output};

use serde_json::Value;

fn grossen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grossen"))
        .args(args)
        .env_remove("GROSSEN_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn result(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    v["result"].clone()
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn deg2_table_has_23_fields() {
    let r = result(&grossen(&["table", "deg2"]));
    assert_eq!(r["entries"].as_array().unwrap().len(), 23);
    assert_eq!(r["matches_reference"], Value::Bool(true));
    let first = &r["entries"][0];
    assert_eq!(first["delta_K"], "5");
    assert_eq!(strs(&first["delta_E"]), ["-15", "-20", "-35", "-40", "-115", "-235"]);
    for row in r["rows"].as_array().unwrap() {
        assert_eq!(row["degree"], "2");
        assert_eq!(row["witness"]["weight"], "2");
    }
}

#[test]
fn deg3_and_quadratic_modulus_tables_match() {
    for (which, rows) in [("deg3", 18), ("quadodd", 11), ("quadeven", 4), ("quade3", 16)] {
        let r = result(&grossen(&["table", which]));
        assert_eq!(r["matches_reference"], Value::Bool(true), "{which}");
        assert_eq!(r["rows"].as_array().unwrap().len(), rows, "{which}");
    }
}

#[test]
fn class_group_of_5460() {
    let r = result(&grossen(&["classgroup", "-d", "-5460"]));
    assert_eq!(strs(&r["invariants"]), ["2", "2", "2", "2"]);
    assert_eq!(r["h"], "16");
}

#[test]
fn gaussian_q_expansion() {
    let out = grossen(&["qexp", "-d", "-4", "-m", "gen:2,2", "-l", "1", "-B", "10"]);
    let r = result(&out);
    assert_eq!(r["header"]["level"], "32");
    assert_eq!(r["header"]["weight"], "2");
    let a = r["coefficients"].as_array().unwrap();
    assert_eq!(a.len(), 10);
    assert_eq!(strs(&a[0]), ["1.000000000000", "0.000000000000"]);
    for n in [2, 3, 4, 6, 7, 8] {
        assert_eq!(strs(&a[n - 1]), ["0.000000000000", "0.000000000000"], "a_{n}");
    }
    // 5 = 1 + 4, so a_5 = +-2
    let a5: f64 = a[4][0].as_str().unwrap().parse().unwrap();
    assert!((a5.abs() - 2.0).abs() < 1e-9);
    assert_eq!(r["hecke"]["ok"], Value::Bool(true));
}

#[test]
fn output_is_byte_stable() {
    let args = ["qexp", "-d", "-7", "-m", "3d", "-l", "1", "-B", "60", "--order", "4"];
    let a = grossen(&args);
    let b = grossen(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("units.json");
    let out = grossen(&["units", "-d", "-4", "-m", "gen:2,2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["command"], "units");
    assert_eq!(v["config"]["delta"], "-4");
    assert_eq!(v["config"]["conductor"], "gen:2,2");
    assert_eq!(v["config"]["precision_bits"], "256");
    // (Z[i]/(2 + 2i))^x has order 4
    let orders: u64 = strs(&v["result"]["orders"]).iter().map(|s| s.parse::<u64>().unwrap()).product();
    assert_eq!(orders, 4);
}

#[test]
fn precision_is_recorded() {
    let out = Command::new(env!("CARGO_BIN_EXE_grossen"))
        .args(["classgroup", "-d", "-23"])
        .env("GROSSEN_PRECISION_BITS", "512")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision_bits"], "512");
    let bad = Command::new(env!("CARGO_BIN_EXE_grossen"))
        .args(["classgroup", "-d", "-23"])
        .env("GROSSEN_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classgroup", "-d", "-23", "--frobnicate"],
        vec!["nonsense"],
        vec!["classgroup", "-d", "-5"],
        vec!["units", "-d", "-4", "-m", "3,1,1"],
        vec!["table", "deg9"],
        vec!["qexp", "-d", "-4", "-m", "1", "-l", "1", "-B", "10"],
    ] {
        let out = grossen(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(grossen(&["--help"]).status.code(), Some(0));
}

#[test]
fn chars_respect_the_unit_condition() {
    let all = result(&grossen(&["chars", "-d", "-4", "-m", "gen:2,2"]));
    assert_eq!(all["count"], "4");
    let adm = result(&grossen(&["chars", "-d", "-4", "-m", "gen:2,2", "-l", "1"]));
    // eta(i) = i^-1 fixes eta on the image of the units, which is all of (o/m)^x here
    assert_eq!(adm["count"], "1");
}

#[test]
fn build_and_evaluate() {
    let b = result(&grossen(&[
        "gross", "build", "-d", "-7", "-m", "3d", "-l", "1", "--order", "4", "--trivial-nebentypus",
    ]));
    assert_eq!(b["value_field_degree"], "2");
    assert_eq!(b["nebentypus_trivial"], Value::Bool(true));
    let disc = b["rationality_field"]["disc"].as_str().unwrap().to_string();
    assert!(disc == "21" || disc == "28", "{disc}");

    let e = result(&grossen(&[
        "gross", "eval", "-d", "-4", "-m", "gen:2,2", "-l", "1", "--at", "gen:1,1", "--at", "gen:3,1", "--at", "3",
    ]));
    let vals = e["values"].as_array().unwrap();
    // 1 + w = -1 + i is not prime to m; 3 + w = 1 + i is not either; 3 is, with |psi(3)| = 3
    assert_eq!(vals[0]["coprime"], Value::Bool(false));
    assert_eq!(vals[1]["coprime"], Value::Bool(false));
    assert_eq!(vals[2]["coprime"], Value::Bool(true));
    let z: Vec<f64> = strs(&vals[2]["complex"]).iter().map(|s| s.parse().unwrap()).collect();
    assert!((z[0].hypot(z[1]) - 3.0).abs() < 1e-9);
}
