use std::collections::BTreeSet;

use dirac_core::exact::rat;
use dirac_core::induction::hp_check;
use dirac_core::presets::real_form;
use dirac_core::rootsys::{Basis, Weight};
use dirac_core::series::*;
use dirac_core::Error;

const LISTED_21: [[i64; 6]; 21] = [
    [0, 0, 1, 1, 0, 1],
    [0, 0, 1, 1, 1, 0],
    [0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 1, 0],
    [0, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 1],
    [0, 1, 1, 1, 1, 0],
    [0, 1, 1, 1, 1, 1],
    [1, 0, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0],
    [1, 0, 0, 1, 1, 1],
    [1, 0, 1, 1, 0, 1],
    [1, 0, 1, 1, 1, 0],
    [1, 0, 1, 1, 1, 1],
    [1, 1, 0, 1, 0, 1],
    [1, 1, 0, 1, 1, 0],
    [1, 1, 0, 1, 1, 1],
    [1, 1, 1, 0, 1, 0],
    [1, 1, 1, 0, 1, 1],
    [1, 1, 1, 1, 0, 1],
    [1, 1, 1, 1, 1, 0],
];

fn listed_21() -> BTreeSet<Vec<i64>> {
    LISTED_21.iter().map(|v| v.to_vec()).collect()
}

fn binary(mask: u32) -> Vec<i64> {
    (0..6).map(|i| ((mask >> i) & 1) as i64).collect()
}

fn fold(v: &[i64]) -> Vec<i64> {
    vec![v[5], v[1], v[4], v[3], v[2], v[0]]
}

#[test]
fn lemma_examples() {
    let rf = real_form("e6q").unwrap();
    assert!(lemma_filter(&[1, 0, 0, 1, 0, 1], &rf));
    assert!(!lemma_filter(&[0, 1, 0, 1, 1, 1], &rf));
}

#[test]
fn lemma_truth_table() {
    let rf = real_form("e6q").unwrap();
    for mask in 0..64 {
        let v = binary(mask);
        let (a, b, c, d, e, f) = (v[0], v[1], v[2], v[3], v[4], v[5]);
        let expected = a + c > 0 && b + d > 0 && c + d > 0 && d + e > 0 && e + f > 0;
        assert_eq!(lemma_filter(&v, &rf), expected, "{v:?}");
    }
}

/// Each vanishing pair forces a zero k-coordinate on every W¹ translate, so
/// no K-type can satisfy the HP condition there.
#[test]
fn vanishing_pairs_kill_every_coset_translate() {
    let rf = real_form("e6q").unwrap();
    for &[i, j] in rf.vanishing_pairs().unwrap() {
        for mask in 0..64u32 {
            let mut v = binary(mask).iter().map(|x| x + 1).collect::<Vec<_>>();
            v[i] = 0;
            v[j] = 0;
            for w in rf.coset_reps_w1() {
                let k = rf.gfund_to_kfund().mul_vec(&w.matrix().mul_vec(&v));
                assert!(k.contains(&0), "pair {i},{j} Λ={v:?}");
            }
            assert!(hp_check(&Weight::from_ints(&v, Basis::GFund), &rf).unwrap().is_none());
        }
    }
}

#[test]
fn omega_full_support_gives_the_listed_vectors() {
    let rf = real_form("e6q").unwrap();
    let got: BTreeSet<Vec<i64>> = omega_set(&[0, 1, 2, 3, 4, 5], &rf)
        .unwrap()
        .into_iter()
        .map(|c| c.coords)
        .filter(|v| v.contains(&0))
        .collect();
    assert_eq!(got, listed_21());
}

#[test]
fn omega_empty_support_is_all_ones() {
    let rf = real_form("e6q").unwrap();
    let got = omega_set(&[], &rf).unwrap();
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].coords, vec![1; 6]);
}

#[test]
fn omega_outputs_pass_lemma_and_are_one_off_support() {
    let rf = real_form("e6q").unwrap();
    for support in [vec![0, 2], vec![1, 3, 4], vec![0, 1, 2, 3, 4]] {
        for c in omega_set(&support, &rf).unwrap() {
            assert!(lemma_filter(&c.coords, &rf));
            for i in 0..6 {
                if !support.contains(&i) {
                    assert_eq!(c.coords[i], 1);
                }
            }
        }
    }
    assert!(matches!(omega_set(&[6], &rf), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn phi_cardinality_and_binary_slice() {
    let rf = real_form("e6q").unwrap();
    let inv = fully_supported_involutions(&rf).unwrap();
    assert_eq!(inv.len(), 571);
    let phi = enumerate_phi(&rf, &inv, &rat(312)).unwrap();
    assert_eq!(phi.candidates.len(), 58061);
    assert!(phi.caps.iter().all(|&c| c >= 1));

    let set: BTreeSet<Vec<i64>> = phi.candidates.iter().cloned().collect();
    let binary_slice: BTreeSet<Vec<i64>> = set.iter().filter(|v| v.iter().all(|&x| x <= 1)).cloned().collect();
    assert_eq!(binary_slice, listed_21());
    assert!(!set.contains(&vec![1; 6]));

    for v in &set {
        assert!(v.contains(&0) && lemma_filter(v, &rf));
        assert!(set.contains(&fold(v)), "fold of {v:?}");
    }
}

#[test]
fn phi_is_monotone_in_the_involution_set() {
    let rf = real_form("e6q").unwrap();
    let inv = fully_supported_involutions(&rf).unwrap();
    let small = enumerate_phi(&rf, &inv[..40], &rat(312)).unwrap();
    let large = enumerate_phi(&rf, &inv[..120], &rat(312)).unwrap();
    let large: BTreeSet<_> = large.candidates.into_iter().collect();
    assert!(small.candidates.iter().all(|v| large.contains(v)));
}

#[test]
fn phi_rejects_degenerate_involutions() {
    let rf = real_form("e6q").unwrap();
    let id = rf.g().identity();
    assert!(matches!(enumerate_phi(&rf, &[id], &rat(312)), Err(Error::Precondition(_))));
}

fn shipped_counts() -> CountTable {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/e6q_strings.tsv")).unwrap();
    CountTable::parse(&text, 6, "e6q_strings.tsv").unwrap()
}

#[test]
fn string_counts() {
    let (n, total) = count_strings(&shipped_counts());
    assert_eq!(n, vec![36, 60, 80, 115, 151, 134]);
    assert_eq!(total, 576);
}

#[test]
fn empty_count_table() {
    assert_eq!(count_strings(&CountTable::new(6)), (vec![0; 6], 0));
    let t = CountTable::parse("", 6, "x").unwrap();
    assert_eq!(count_strings(&t).1, 0);
}

#[test]
fn count_table_round_trip() {
    let t = shipped_counts();
    let again = CountTable::parse(&t.to_tsv(), 6, "again").unwrap();
    assert_eq!(t, again);
}

#[test]
fn count_table_rejects_bad_input() {
    let bad = [
        "support\tcount\n0,7\t3\n",
        "support\tcount\n0,1,2,3,4,5\t3\n",
        "support\tcount\n0,1\tmany\n",
        "supp\tcount\n",
        "support\tcount\n0,1\n",
        "support\tcount\nsize=2\t4\n0,1\t3\n",
    ];
    for text in bad {
        match CountTable::parse(text, 6, "bad.tsv") {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}
