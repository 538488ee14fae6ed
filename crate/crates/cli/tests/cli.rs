use serde_json::Value;
use std::process::{Command, Output};

use khscan::cube::kh_cube;
use khscan::diagram::{braid_closure, BraidWord};
use khscan::homology::HomologyTable;
use khscan::ring::Coefficients;

fn khscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khscan")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn table(v: &Value, coeff: Coefficients) -> HomologyTable {
    HomologyTable::from_json(coeff, &v["groups"]).unwrap()
}

fn weaving_word(n: usize) -> String {
    vec!["-1 2"; n].join(" ")
}

#[test]
fn trefoil_by_oracle() {
    let v = json(&khscan(&["kh", "--braid", "1 1 1", "--strands", "2", "--method", "oracle"]));
    assert_eq!(v["meta"]["method"], "oracle");
    let groups: Vec<(i64, i64, i64)> = v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["i"].as_i64().unwrap(), g["j"].as_i64().unwrap(), g["rank"].as_i64().unwrap()))
        .collect();
    assert_eq!(groups, vec![(0, 1, 1), (0, 3, 1), (2, 5, 1), (3, 7, 0), (3, 9, 1)]);
    assert_eq!(v["groups"][3]["torsion"], serde_json::json!([[2, 1, 1]]));
}

#[test]
fn auto_uses_threebraid_and_matches_scan() {
    let auto = json(&khscan(&["kh", "--braid", "1 2 -1 2 2", "--strands", "3"]));
    assert_eq!(auto["meta"]["method"], "threebraid");
    let scan = json(&khscan(&["kh", "--braid", "1 2 -1 2 2", "--strands", "3", "--method", "scan"]));
    assert_eq!(table(&auto, Coefficients::Integers), table(&scan, Coefficients::Integers));
    assert!(scan["meta"]["bound_checks"].as_u64().is_some());
}

#[test]
fn weaving_20_threebraid_completes_and_scan_refuses() {
    let word = weaving_word(20);
    let v = json(&khscan(&["kh", "--braid", &word, "--method", "threebraid"]));
    assert_eq!(v["meta"]["normal_form"], "Omega6(k=0, p=[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1], q=[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1])");
    let out = khscan(&["kh", "--braid", &word, "--method", "scan"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn determinants() {
    let v = json(&khscan(&["det", "--family", "weaving", "--n", "20"]));
    assert_eq!(v["det"], 228826125);
    let out = khscan(&["det", "--braid", "1", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
    let v = json(&khscan(&["det", "--braid", &weaving_word(20)]));
    assert_eq!(v["det"], 228826125);
}

#[test]
fn jones_of_figure_eight() {
    let v = json(&khscan(&["jones", "--braid", "-1 2 -1 2"]));
    assert_eq!(v["terms"], serde_json::json!([[-4, 1], [-2, -1], [0, 1], [2, -1], [4, 1]]));
}

#[test]
fn exit_codes() {
    assert_eq!(khscan(&["kh", "--braid", "1 2 3", "--method", "threebraid"]).status.code(), Some(3));
    assert_eq!(khscan(&["kh", "--braid", "1 0 2"]).status.code(), Some(2));
    assert_eq!(khscan(&["kh", "--braid", "1 1", "--coeff", "Fp:4"]).status.code(), Some(2));
    assert_eq!(khscan(&["kh", "--braid", "1 1", "--method", "truncated"]).status.code(), Some(2));
    let long = vec!["1"; 16].join(" ");
    assert_eq!(khscan(&["kh", "--braid", &long, "--method", "oracle"]).status.code(), Some(4));
}

#[test]
fn field_coefficients() {
    let v = json(&khscan(&["kh", "--braid", "-1 2 -1 2 -1", "--strands", "3", "--coeff", "Fp:3"]));
    let b = BraidWord::new(3, vec![-1, 2, -1, 2, -1]).unwrap();
    let p3 = Coefficients::Prime(3);
    assert_eq!(table(&v, p3), kh_cube(&braid_closure(&b), p3).unwrap());
}

#[test]
fn pd_input_from_file() {
    let b = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
    let d = braid_closure(&b);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("knot.json");
    std::fs::write(&path, d.to_pd_json().to_string()).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&khscan(&["kh", "--pd", p]));
    assert_eq!(v["meta"]["method"], "scan");
    assert_eq!(table(&v, Coefficients::Integers), kh_cube(&d, Coefficients::Integers).unwrap());
    let t = json(&khscan(&["kh", "--pd", p, "--method", "truncated", "-k", "1"]));
    let want = kh_cube(&d, Coefficients::Integers).unwrap().restrict_rows(|i| i <= 1 - 2);
    assert_eq!(table(&t, Coefficients::Integers), want);
    assert_eq!(khscan(&["kh", "--pd", p, "--method", "threebraid"]).status.code(), Some(3));
    let j = json(&khscan(&["jones", "--pd", p]));
    assert_eq!(j["polynomial"], "q^-4 - q^-2 + 1 - q^2 + q^4");
}

#[test]
fn truncated_braid_rows() {
    let v = json(&khscan(&["kh", "--braid", "1 2 1 1 2", "--method", "truncated", "-k", "1"]));
    let b = BraidWord::new(3, vec![1, 2, 1, 1, 2]).unwrap();
    let full = kh_cube(&braid_closure(&b), Coefficients::Integers).unwrap();
    assert_eq!(table(&v, Coefficients::Integers), full.restrict_rows(|i| i <= 1 || i >= 4));
}

#[test]
fn disk_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_khscan"))
            .args(["kh", "--braid", "1 2 1 2 1 2 1 2 1 2 1 2 -1 -1"])
            .env("KH_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = json(&run());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(!files.is_empty());
    assert!(files.iter().all(|f| f.to_string_lossy().starts_with("kh-v1-")));
    let second = json(&run());
    assert_eq!(first["groups"], second["groups"]);
}

#[test]
fn text_output() {
    let out = khscan(&["kh", "--braid", "1 1", "--strands", "2", "--format", "text"]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("j\\i"));
    assert!(s.lines().any(|l| l.trim_start().starts_with("6 |")));
}

#[test]
fn bench_csv() {
    let out = khscan(&["bench", "--family", "weaving", "--from", "1", "--to", "4", "--jobs", "2"]);
    let s = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[0].starts_with("family,param,strands,crossings,method,wall_ms"));
    assert_eq!(lines.len(), 6);
    assert!(lines[2].starts_with("weaving,2,3,4,threebraid,"));
    assert!(lines[2].contains(",5,6,"));
    assert!(lines[5].starts_with("# log-log slope"));
    let lt = khscan(&["bench", "--family", "Lt", "--to", "1", "-k", "1"]);
    let s = String::from_utf8_lossy(&lt.stdout);
    assert!(s.lines().nth(1).unwrap().ends_with(",1,1,ok"), "{s}");
}
