use std::collections::BTreeSet;

use dirac_cli::tables::*;
use dirac_cli::validate::{validate, Expectations};
use dirac_core::exact::{frac, rat};
use dirac_core::presets::real_form;
use dirac_core::Error;

const DATA: &str = include_str!("../data/e6q_tables.tsv");
const EXPECT: &str = include_str!("../data/e6q_expected.toml");

fn records() -> Vec<RepRecord> {
    parse_tables(DATA, 6, "e6q_tables.tsv").unwrap()
}

fn find<'a>(rs: &'a [RepRecord], table: &str, x: u32) -> &'a RepRecord {
    rs.iter().find(|r| r.table == table && r.x == Some(x)).unwrap()
}

#[test]
fn first_row_and_its_fold() {
    let rf = real_form("e6q").unwrap();
    let all = expand_folds(&records(), &rf).unwrap();
    let r = find(&all, "100111", 1686);
    assert_eq!(r.lambda, [3, -4, -2, 5, 3, 1].map(rat).to_vec());
    assert_eq!(r.nu, [1, -2, -2, 3, 1, 1].map(rat).to_vec());
    assert_eq!(r.spin_lkts, vec![vec![0, 0, 2, 2, 0, 2]]);
    let f = find(&all, "100111", 1687);
    assert!(f.folded);
    assert_eq!(f.fold, Some(1686));
    assert_eq!(f.inf_char, vec![1, 0, 1, 1, 0, 1]);
    assert_eq!(f.lambda, [1, -4, 3, 5, -2, 3].map(rat).to_vec());
}

#[test]
fn half_integers_parse_exactly() {
    let r = records();
    let r = find(&r, "100111", 1592);
    assert_eq!(r.nu, vec![rat(0), rat(-2), frac(-3, 2), frac(7, 2), rat(0), frac(3, 2)]);
}

#[test]
fn empty_input() {
    assert!(parse_tables("", 6, "empty").unwrap().is_empty());
    assert!(parse_tables(&(HEADER.join("\t") + "\n"), 6, "h").unwrap().is_empty());
}

#[test]
fn round_trip_is_byte_identical() {
    assert_eq!(to_tsv(&records()), DATA);
}

#[test]
fn tally_flags_and_folds() {
    let rf = real_form("e6q").unwrap();
    let primary = records();
    let all = expand_folds(&primary, &rf).unwrap();
    assert_eq!(primary.len(), 39);
    assert_eq!(all.len(), 56);
    assert_eq!(all.iter().filter(|r| r.star).count(), 10);
    assert_eq!(all.iter().filter(|r| r.club).count(), 9);
    let ids: BTreeSet<String> = all.iter().map(|r| r.id()).collect();
    assert_eq!(ids.len(), all.len());
}

#[test]
fn fold_is_an_involution() {
    let rf = real_form("e6q").unwrap();
    for r in records().iter().filter(|r| r.fold.is_some()) {
        let mut back = fold_record(&fold_record(r, &rf).unwrap(), &rf).unwrap();
        back.spin_lkts.sort();
        let mut orig = r.clone();
        orig.spin_lkts.sort();
        assert_eq!(back, orig, "{}", r.id());
    }
}

#[test]
fn fold_permutation_is_the_diagram_swap() {
    assert_eq!(fold_permutation(&real_form("e6q").unwrap()), vec![5, 1, 4, 3, 2, 0]);
    assert_eq!(fold_permutation(&real_form("f4s").unwrap()), vec![0, 1, 2, 3]);
}

#[test]
fn minimal_and_trivial_norms() {
    let rf = real_form("e6q").unwrap();
    let rs = records();
    assert_eq!(find(&rs, "111011", 1789).nu_norm_sq(&rf), rat(42));
    let trivial = rs.iter().find(|r| r.x.is_none()).unwrap();
    assert_eq!(trivial.nu_norm_sq(&rf), rat(78));
}

#[test]
fn full_dataset_validates() {
    let rf = real_form("e6q").unwrap();
    let all = expand_folds(&records(), &rf).unwrap();
    let expect = Expectations::parse(EXPECT, "expected.toml").unwrap();
    let report = validate(&all, &rf, &expect);
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:#?}");
    for check in ["lemma", "hp", "inf_char", "parity", "spin_equality", "usmall", "fold", "dirac_index", "nu_statistic"] {
        assert!(report.checks.iter().any(|c| c.check == check), "{check} missing");
    }
    assert_eq!(report.notes, vec!["56 records observed, 56 expected".to_string()]);
}

#[test]
fn perturbed_lkt_fails_its_row() {
    let rf = real_form("e6q").unwrap();
    let mut rs = records();
    rs[0].spin_lkts[0][5] += 1;
    let bad_id = rs[0].id();
    let report = validate(&rs[..1], &rf, &Expectations::default());
    let failed: Vec<_> = report.failures().collect();
    assert!(failed.iter().any(|c| c.check == "spin_equality" && c.record_id == bad_id));
}

#[test]
fn wrong_statistic_fails() {
    let rf = real_form("e6q").unwrap();
    let all = expand_folds(&records(), &rf).unwrap();
    let expect = Expectations::parse("nu_norm_sq = [\"42*56\"]", "x").unwrap();
    let report = validate(&all[..0], &rf, &expect);
    assert!(!report.passed());
}

fn parse_err(text: &str) -> (usize, usize) {
    match parse_tables(text, 6, "bad.tsv") {
        Err(Error::Parse { line, column, .. }) => (line, column),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn positioned_errors() {
    let header = HEADER.join("\t");
    let row = |lambda: &str, flags: &str| format!("{header}\nt\t1\t{lambda}\t1,1,1,1,1,1\t1,1,1,1,1,1\t0,0,0,0,0,0\t-\t{flags}\n");
    // Malformed rational: third entry of lambda.
    assert_eq!(parse_err(&row("1,2,x/3,4,5,6", "-")), (2, 9));
    // Wrong arity.
    assert_eq!(parse_err(&row("1,2,3", "-")).0, 2);
    // Unknown flag.
    assert_eq!(parse_err(&row("1,2,3,4,5,6", "diamond")).0, 2);
    // Unknown column.
    assert_eq!(parse_err("table\tx\tlambda\tmu\n"), (1, 16));
    // Missing field.
    assert_eq!(parse_err(&format!("{header}\nt\t1\n")), (2, 1));
}
