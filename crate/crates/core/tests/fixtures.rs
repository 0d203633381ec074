//! Solver results on the bundled fixture files.

use std::path::PathBuf;

use macw_core::explore::gap_report;
use macw_core::rational::{int, ratio};
use macw_core::{
    parse_instance_file, reproduce_table, solve_exact, solve_local_search, solve_zero_offset, InstanceFile,
    LocalSearchParams, Rational,
};

fn fixture(name: &str) -> InstanceFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_instance_file(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse_row(s: &str) -> Vec<Rational> {
    s.split_whitespace().map(|x| macw_core::parse_rational(x).unwrap()).collect()
}

/// Frozen from an independent fraction-arithmetic enumeration of `v_i(A_j) - v_i(A_i)`.
const EX1_TABLE: [&str; 6] = [
    "-3/2 -2 1/2 -1/3 -5/3",
    "-3 -1 -1/2 -5/3 -4/3",
    "3/2 -1 1 4/3 -1/3",
    "-3/2 1 -1 -4/3 1/3",
    "3 1 1/2 5/3 4/3",
    "3/2 2 -1/2 1/3 5/3",
];

const EX2_TABLE: [&str; 6] = [
    "-3/2 -2 3/2 1/3 -5/3",
    "-3 -1 1/2 -1 -4/3",
    "3/2 -1 2 2 -1/3",
    "-3/2 1 0 -2/3 1/3",
    "3 1 3/2 7/3 4/3",
    "3/2 2 1/2 1 5/3",
];

#[test]
fn example_tables() {
    for (name, expected) in [("ex1.json", EX1_TABLE), ("ex2.json", EX2_TABLE)] {
        let file = fixture(name);
        let t = reproduce_table(&file.instance, file.has_offset().then_some(&file.offset)).unwrap();
        for (row, want) in t.rows.iter().zip(expected) {
            assert_eq!(row.averages, parse_row(want), "{name} row {}", row.allocation);
        }
    }
}

#[test]
fn example1_solvers() {
    let file = fixture("ex1.json");
    let s = solve_zero_offset(&file.instance).unwrap();
    assert_eq!((s.allocation.to_string(), s.macw.clone(), s.total_value.clone()), ("(o1,o3,o2)".into(), ratio(-1, 2), int(18)));
    assert_eq!(solve_exact(&file.instance, &file.offset).unwrap().macw, s.macw);
}

#[test]
fn example2_solvers() {
    let file = fixture("ex2.json");
    let exact = solve_exact(&file.instance, &file.offset).unwrap();
    assert_eq!(exact.allocation.to_string(), "(o1,o3,o2)");
    assert_eq!(exact.macw, ratio(1, 2));
    let local = solve_local_search(&file.instance, &file.offset, LocalSearchParams::default()).unwrap();
    assert_eq!(local.macw, exact.macw);
    assert_eq!(gap_report(&file.instance, &file.offset).unwrap().gap, int(0));
}

#[test]
fn positive_gap_fixture() {
    let file = fixture("gap3.json");
    let r = gap_report(&file.instance, &file.offset).unwrap();
    assert_eq!(r.exact_allocation.to_string(), "(o3,o1,o2)");
    assert_eq!(r.exact_macw, ratio(-1, 3));
    assert_eq!(r.best_matching.to_string(), "(o1,o3,o2)");
    assert_eq!(r.best_matching_macw, ratio(3, 2));
    assert_eq!(r.gap, ratio(11, 6));
}
