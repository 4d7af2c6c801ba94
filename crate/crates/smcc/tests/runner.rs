use smcc::config::{DatasetSpec, PartialConfig};
use smcc::report::aggregate;
use smcc::runner::{read_rows, run_experiment, write_rows, RunStatus, CSV_HEADER};
use smcc::suites::{Scale, Suite};

fn config(extra: &str) -> smcc::config::ExperimentConfig {
    let text = format!(
        r#"
algorithms = ["rg", "r-dash", "l-dist", "med+rg", "greedy", "ltc"]
objective = "maxcover"
k = [4, 8]
ell = 4
psi = 300
eps = 0.2
seeds = [0, 1, 2]
parallelism = 4
{extra}
[dataset]
kind = "ba"
n = 600
m = 3
seed = 9
"#
    );
    PartialConfig::from_toml(&text).unwrap().finish().unwrap()
}

fn csv_without_wall(rows: &[smcc::runner::Row]) -> String {
    let rows: Vec<_> = rows.iter().cloned().map(|r| smcc::runner::Row { wall_ms: 0, ..r }).collect();
    let mut out = Vec::new();
    write_rows(&mut out, &rows).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn empty_seed_list_gives_header_only() {
    let mut cfg = config("");
    cfg.seeds.clear();
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.is_empty());
    let mut out = Vec::new();
    write_rows(&mut out, &rows).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
}

#[test]
fn rows_are_ordered_and_repeatable() {
    let cfg = config("");
    let a = run_experiment(&cfg).unwrap();
    assert_eq!(a.len(), 6 * 2 * 3);
    assert_eq!((a[0].algo.as_str(), a[0].k, a[0].seed), ("rg", 4, 0));
    assert_eq!((a[5].algo.as_str(), a[5].k, a[5].seed), ("rg", 8, 2));
    assert_eq!(a.last().unwrap().algo, "ltc");
    assert!(a.iter().all(|r| r.status.finished()), "{a:?}");
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(csv_without_wall(&a), csv_without_wall(&b));
    let greedy = a.iter().find(|r| r.algo == "greedy").unwrap();
    assert_eq!((greedy.mr_rounds, greedy.elements_communicated), (Some(0), Some(0)));
    assert_eq!(a.iter().find(|r| r.algo == "rg").unwrap().mr_rounds, Some(2));
}

#[test]
fn csv_round_trip() {
    let rows = run_experiment(&config("")).unwrap();
    let mut out = Vec::new();
    write_rows(&mut out, &rows).unwrap();
    assert_eq!(read_rows(out.as_slice()).unwrap(), rows);
    assert!(read_rows("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn infeasible_k_is_a_status() {
    let mut cfg = config("");
    cfg.k = vec![200];
    cfg.algorithms = vec!["r-dash".parse().unwrap()];
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.status == RunStatus::Infeasible && r.value.is_none()));
}

#[test]
fn timeout_is_a_status() {
    let mut cfg = config("timeout_s = 0.000001");
    cfg.dataset = DatasetSpec::Ba { n: 200_000, m: 5, seed: 1 };
    cfg.algorithms = vec!["lag".parse().unwrap()];
    cfg.k = vec![50];
    cfg.seeds = vec![0];
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows[0].status, RunStatus::Timeout);
}

#[test]
fn t_dash_opt_brute_forces_small_instances() {
    let text = r#"
algorithms = ["t-dash-opt"]
objective = "maxcover"
k = [2]
ell = 2
psi = 20
seeds = [0]
[dataset]
kind = "er"
n = 16
p = 0.2
"#;
    let cfg = PartialConfig::from_toml(text).unwrap().finish().unwrap();
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows[0].status.finished());
    let mut big = config("");
    big.algorithms = vec!["t-dash-opt".parse().unwrap()];
    assert!(matches!(run_experiment(&big), Err(smcc::Error::Config(_))));
}

#[test]
fn report_groups_by_algorithm_and_k() {
    let rows = run_experiment(&config("")).unwrap();
    let agg = aggregate(&rows);
    assert_eq!(agg.len(), 6 * 2);
    assert_eq!((agg[0].algo.as_str(), agg[0].k), ("rg", 4));
    assert_eq!((agg[1].algo.as_str(), agg[1].k), ("rg", 8));
    for a in &agg {
        assert_eq!(a.runs, 3);
        assert_eq!(a.failed, 0);
        assert!(a.value.min <= a.value.mean && a.value.mean <= a.value.max);
    }
}

#[test]
fn quick_suites_pass_except_known() {
    for suite in Suite::ALL {
        if suite == Suite::Consistency {
            continue;
        }
        let outcome = suite.run(Scale::Quick).unwrap();
        assert!(outcome.pass, "{}: {}", outcome.name, outcome.detail);
    }
}
