use std::fs;
use std::path::Path;

use smcc::io::{
    load_edge_list, load_similarity_csv, parse_edge_list, parse_similarity_csv, write_edge_list, write_similarity_csv,
};
use smcc::Error;
use smcc_core::data::{generate_ba, generate_erdos_renyi, generate_features};
use smcc_core::{Objective, SubmodularInstance};

fn p() -> &'static Path {
    Path::new("inline")
}

#[test]
fn empty_edge_list() {
    let g = parse_edge_list("", false, p()).unwrap();
    assert_eq!(g.n, 0);
    assert!(g.edges.is_empty());
}

#[test]
fn path_graph() {
    let g = parse_edge_list("0 1\n1 2\n", false, p()).unwrap();
    assert_eq!(g.n, 3);
    assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
    let inst = SubmodularInstance::new(Objective::max_cover(&g));
    assert_eq!(inst.evaluate_uncounted(&[1]).unwrap(), 3.0);
}

#[test]
fn comments_header_and_self_loops() {
    let g = parse_edge_list("# a comment\n# n=6\n0 1\n\n2 2\n3 4\n", false, p()).unwrap();
    assert_eq!(g.n, 6);
    assert_eq!(g.edges, vec![(0, 1), (3, 4)]);
}

#[test]
fn malformed_lines_report_position() {
    match parse_edge_list("0 1\n1 x\n", false, p()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    match parse_edge_list("0 1\n1\n", false, p()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_edge_list("# n=2\n0 5\n", false, p()), Err(Error::Validation(_))));
}

#[test]
fn negative_weight_is_a_validation_error() {
    assert!(matches!(parse_edge_list("0 1 -0.5\n", true, p()), Err(Error::Validation(_))));
    let g = parse_edge_list("0 1 0.5\n1 2\n", true, p()).unwrap();
    assert_eq!(g.weights, Some(vec![0.5, 1.0]));
}

#[test]
fn edge_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (i, g) in [
        generate_ba(200, 3, 4).unwrap(),
        generate_erdos_renyi(150, 0.05, true, 2).unwrap(),
        generate_erdos_renyi(10, 0.0, false, 2).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let path = dir.path().join(format!("g{i}.txt"));
        write_edge_list(&path, &g).unwrap();
        assert_eq!(load_edge_list(&path, g.weights.is_some()).unwrap(), g);
    }
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(load_edge_list(Path::new("/nonexistent/graph.txt"), false), Err(Error::Io { .. })));
}

#[test]
fn similarity_single_entry() {
    let s = parse_similarity_csv("1.0\n", p()).unwrap();
    assert_eq!(s.n(), 1);
}

#[test]
fn identity_similarity_evaluates_to_one() {
    let s = parse_similarity_csv("1,0,0\n0,1,0\n0,0,1\n", p()).unwrap();
    let inst = SubmodularInstance::new(Objective::image_summ(s));
    assert_eq!(inst.evaluate_uncounted(&[0]).unwrap(), 1.0);
}

#[test]
fn similarity_policies() {
    let s = parse_similarity_csv("1,0.2\n0.6,1\n", p()).unwrap();
    assert_eq!((s.get(0, 1), s.get(1, 0)), (0.2, 0.6));
    let s = parse_similarity_csv("1,-0.3\n-0.3,1\n", p()).unwrap();
    assert_eq!(s.get(0, 1), 0.0);
    match parse_similarity_csv("1,0\n0\n", p()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(parse_similarity_csv("1,0\n0,1\n0,0\n", p()).is_err());
    assert!(parse_similarity_csv("1,abc\n0,1\n", p()).is_err());
}

#[test]
fn similarity_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sim.csv");
    let s = generate_features(12, 4, 0.5, 3).unwrap();
    write_similarity_csv(&path, &s).unwrap();
    let back = load_similarity_csv(&path).unwrap();
    assert_eq!(back.to_dense(), s.to_dense());
    assert!(fs::read_to_string(&path).unwrap().lines().count() == 12);
}
