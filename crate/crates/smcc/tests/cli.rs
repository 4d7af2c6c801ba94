use std::fs;
use std::process::Command;

fn smcc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smcc"))
}

#[test]
fn gen_ba_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let status = smcc()
            .args(["gen", "ba", "--n", "1000", "--m", "2", "--seed", "7", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2 * 998);
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let results = dir.path().join("r.csv");
    let summary = dir.path().join("s.csv");
    assert!(smcc()
        .args(["gen", "ba", "--n", "400", "--m", "3", "--out"])
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    let status = smcc()
        .args(["run", "--algo", "r-dash,med+rg", "--objective", "maxcover", "--k", "3,6"])
        .args(["--ell", "4", "--seeds", "0..3", "--dataset"])
        .arg(&graph)
        .arg("--out")
        .arg(&results)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = fs::read_to_string(&results).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 3);
    assert!(csv.starts_with("algo,objective,n,k,ell,eps,seed,value,"));
    assert!(smcc().arg("report").arg(&results).arg("--out").arg(&summary).status().unwrap().success());
    let report = fs::read_to_string(&summary).unwrap();
    assert_eq!(report.lines().count(), 1 + 2 * 2);
}

#[test]
fn config_file_and_generator_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        "algorithms = [\"greedy\"]\nobjective = \"imagesumm\"\nk = [3]\nseeds = [0]\n[dataset]\nkind = \"features\"\nn = 40\n",
    )
    .unwrap();
    let out = smcc().arg("run").arg("--config").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("greedy,imagesumm,40,3,"));
}

#[test]
fn exit_codes() {
    let config_error = smcc()
        .args(["run", "--algo", "nope", "--objective", "maxcover", "--k", "3"])
        .args(["--dataset", "ba:n=100,m=2"])
        .status()
        .unwrap();
    assert_eq!(config_error.code(), Some(2));
    let infeasible = smcc()
        .args(["run", "--algo", "r-dash", "--objective", "maxcover", "--k", "90", "--ell", "4"])
        .args(["--dataset", "ba:n=200,m=2"])
        .output()
        .unwrap();
    assert_eq!(infeasible.status.code(), Some(3));
    assert!(String::from_utf8(infeasible.stdout).unwrap().contains(",infeasible"));
    let missing = smcc()
        .args(["run", "--algo", "rg", "--objective", "maxcover", "--k", "3", "--dataset", "/no/such/file"])
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));
    assert_eq!(smcc().args(["frobnicate"]).status().unwrap().code(), Some(2));
}

#[test]
fn verify_selected_suites() {
    let out = smcc()
        .args(["verify", "--quick", "--suite", "mr-rounds,ltc-chain"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert_eq!(smcc().args(["verify", "--suite", "nope"]).status().unwrap().code(), Some(2));
}
