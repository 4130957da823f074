use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-spectra")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_paper_succeeds() {
    let o = run(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn jacobi_csv() {
    let o = run(&["jacobi", "--k", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("jpsi,1,-1/2,4"), "{out}");
    assert!(out.contains("jpsi,1,7/2,4"), "{out}");
}

#[test]
fn bienergy_json_and_matrix() {
    let o = run(&["bienergy", "--k", "0", "--format", "json", "--print-matrix"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["operator"], "iphi");
    assert_eq!(v["index"], 1);
    assert_eq!(v["nullity"], 2);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 3);
}

#[test]
fn index_reports_coverage_gap() {
    let o = run(&["index", "--operator", "iphi", "--kmax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["index"].as_u64(), v["nullity"].as_u64()), (Some(11), Some(8)));
    assert_eq!(v["complete"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("coverage incomplete above k=2"));

    let strict = run(&["index", "--operator", "iphi", "--kmax", "2", "--require-complete"]);
    assert_ne!(strict.status.code(), Some(0));

    let j = run(&["index", "--operator", "jpsi", "--kmax", "2", "--require-complete", "--format", "json"]);
    assert_eq!(j.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!((v["index"].as_u64(), v["nullity"].as_u64()), (Some(4), Some(8)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["basic", "--kmax", "3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["jacobi", "--k", "1", "--exact", "--float"]).status.code(), Some(2));
    assert_eq!(run(&["jacobi", "--k", "1000"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("hopf-spectra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kernel.json");
    let o = run(&["kernel", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["kernel"]["total"], 8);
    std::fs::remove_dir_all(&dir).unwrap();

    let bad = run(&["kernel", "--output", "/nonexistent/dir/out.txt"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn vertical_spectrum_methods_agree() {
    let o = run(&["vertical-spectrum", "--k", "4", "--format", "json", "--dump-chains"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("chains"), "{v}");
}

#[test]
fn small_oracle_run() {
    let o = run(&["oracle-check", "--samples", "200000", "--seed", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
