use dirac_core::exact::{frac, rat, rat_vec, QMatrix, Rational};
use dirac_core::induction::*;
use dirac_core::presets::{real_form, PresetFile};
use dirac_core::rootsys::{Basis, Weight};
use dirac_core::spin::{dirac_test, spin_norm_sq, DiracVerdict};
use proptest::prelude::*;

fn gw(v: &[i64]) -> Weight {
    Weight::from_ints(v, Basis::GFund)
}

fn kw(v: &[i64]) -> Weight {
    Weight::from_ints(v, Basis::KFund)
}

/// Atlas coordinates (numerator over a common denominator) for the F4
/// preset, reordered into its own numbering.
fn f4_atlas(num: &[i64], den: i64) -> Weight {
    let p = PresetFile::builtin();
    let f4 = p.get("f4s").unwrap();
    let v: Vec<Rational> = num.iter().map(|&x| frac(x, den)).collect();
    Weight::new(f4.from_atlas(&v), Basis::GFund)
}

#[test]
fn zero_grading_gives_everything_to_l() {
    for name in ["e6q", "f4s"] {
        let rf = real_form(name).unwrap();
        let q = build_parabolic(&gw(&vec![0; rf.rank()]), &rf).unwrap();
        assert!(q.u_roots().is_empty());
        assert_eq!(q.l_roots().len(), rf.g().num_roots());
        assert_eq!(q.s(), 0);
    }
}

#[test]
fn regular_grading_gives_the_borel() {
    for name in ["e6q", "f4s", "sl2r"] {
        let rf = real_form(name).unwrap();
        let q = build_parabolic(&rf.rho(), &rf).unwrap();
        assert_eq!(q.u_roots().len(), rf.g().positive_roots().len());
        assert_eq!(*q.rho_u(), rf.rho());
        assert_eq!(q.s(), rf.compact_positive_roots().len());
        assert_eq!(q.rho_u_p(), &rf.rho().sub(&rf.rho_k()));
    }
}

#[test]
fn f4_single_root_levi_rho_u() {
    let rf = real_form("f4s").unwrap();
    // Atlas support [1] is the third simple root here.
    let q = parabolic_from_support(&[2], &rf).unwrap();
    assert_eq!(q.rho_u(), &f4_atlas(&[3, 0, 4, 2], 2));
    assert_eq!(q.l_roots().len(), 2);
}

#[test]
fn f4_range_examples() {
    let rf = real_form("f4s").unwrap();
    let q = parabolic_from_support(&[2], &rf).unwrap();
    assert_eq!(range_test(&f4_atlas(&[-1, 2, -2, 0], 2), &q, &rf).unwrap(), RangeVerdict::Good);
    assert_eq!(
        range_test(&f4_atlas(&[-3, 2, -4, 0], 2), &q, &rf).unwrap(),
        RangeVerdict::WeaklyGood
    );
    let far = q.rho_u().scale(&rat(-3));
    assert_eq!(range_test(&far, &q, &rf).unwrap(), RangeVerdict::Neither);
}

#[test]
fn weakly_good_module_is_rejected_by_transfer() {
    let rf = real_form("f4s").unwrap();
    let q = parabolic_from_support(&[2], &rf).unwrap();
    let lambda_l = f4_atlas(&[-3, 2, -4, 0], 2);
    let err = transfer_nonvanishing(&gw(&[0, 0, 0, 0]), &lambda_l, &q, &rf).unwrap_err();
    assert_eq!(err, TransferFailure::NotGoodRange(RangeVerdict::WeaklyGood));
}

#[test]
fn hp_examples() {
    let rf = real_form("e6q").unwrap();
    let lambda = gw(&[1, 0, 0, 1, 0, 1]);
    let wit = hp_check(&lambda, &rf).unwrap().expect("witness");
    assert!(rf.ktype_test(&wit.delta).unwrap());
    // {δ − ρ_n^(j)} + ρ_K = wΛ.
    let rho_n = kw(&rf.rho_n_ints()[wit.j]);
    let lhs = dirac_core::spin::prv_dominant(&wit.delta.sub(&rho_n), &rf)
        .unwrap()
        .add(&kw(&rf.rho_k_ints()));
    let rhs = Weight::new(wit.w.apply_coords(lambda.coords()), Basis::GFund);
    assert_eq!(rf.basis_change(&lhs, Basis::GFund).unwrap(), rhs);

    assert!(hp_check(&rf.rho(), &rf).unwrap().is_some());
    for v in [[0, 1, 0, 1, 1, 1], [0, 2, 0, 1, 3, 1], [0, 0, 0, 0, 0, 0]] {
        assert!(hp_check(&gw(&v), &rf).unwrap().is_none(), "{v:?}");
    }
}

#[test]
fn hp_check_is_weyl_invariant() {
    let rf = real_form("e6q").unwrap();
    let group = rf.g().weyl_group().unwrap();
    for lambda in [[1, 0, 0, 1, 0, 1], [0, 1, 0, 1, 1, 1], [1, 1, 1, 1, 1, 1], [0, 1, 1, 0, 1, 0]] {
        let base = hp_check(&gw(&lambda), &rf).unwrap().is_some();
        for w in group.elements().iter().step_by(997) {
            let img = gw(&w.apply_ints(&lambda));
            assert_eq!(hp_check(&img, &rf).unwrap().is_some(), base);
        }
    }
}

#[test]
fn borel_transfer_of_zero_is_rho_minus_rho_k() {
    let rf = real_form("e6q").unwrap();
    let q = build_parabolic(&rf.rho(), &rf).unwrap();
    // l = t, so λ_L is any weight and γ_L + ρ_{L∩K} = γ_L.
    let lambda_l = gw(&[0; 6]);
    let got = transfer_nonvanishing(&lambda_l, &lambda_l, &q, &rf).unwrap();
    assert_eq!(rf.basis_change(&got, Basis::GFund).unwrap(), rf.rho().sub(&rf.rho_k()));
}

#[test]
fn string_spin_lkts_arise_by_transfer() {
    // The string Λ = [a,1,1,0,1,f] carries spin lowest K-types
    // [1,a+1,1,f+1,1,1] and [2,a,2,f,2,2]. Its Levi on the middle four roots
    // is so(4,4): among the W¹-translates of the standard parabolic it is the
    // one with 8 compact roots in l.
    let rf = real_form("e6q").unwrap();
    let (w, q) = rf
        .coset_reps_w1()
        .iter()
        .map(|w| (w, parabolic_from_support_at(&[1, 2, 3, 4], w, &rf).unwrap()))
        .find(|(_, q)| q.l_roots().iter().filter(|r| rf.diagram().is_compact(r)).count() == 8)
        .expect("so(4,4) Levi");
    let standard = parabolic_from_support(&[1, 2, 3, 4], &rf).unwrap();
    assert_eq!(standard.l_roots().iter().filter(|r| rf.diagram().is_compact(r)).count(), 12);
    for a in 0..3 {
        for f in 0..3 {
            let lambda = gw(&[a, 1, 1, 0, 1, f]);
            let lambda_l = Weight::new(w.apply_coords(lambda.coords()), Basis::GFund).sub(q.rho_u());
            let verdict = range_test(&lambda_l, &q, &rf).unwrap();
            let expect = if a > 0 && f > 0 { RangeVerdict::Good } else { RangeVerdict::WeaklyGood };
            assert_eq!(verdict, expect, "a={a} f={f}");
            for lkt in [[1, a + 1, 1, f + 1, 1, 1], [2, a, 2, f, 2, 2]] {
                let spin = spin_norm_sq(&kw(&lkt), &rf, None).unwrap();
                assert_eq!(dirac_test(&spin.norm_sq, &lambda, &rf).unwrap(), DiracVerdict::Equality);
                for m in &spin.minimizers {
                    let gamma_g = rf.basis_change(&m.conjugate, Basis::GFund).unwrap();
                    let gamma_l = gamma_g.sub(q.rho_u_p());
                    let got = transfer_nonvanishing(&gamma_l, &lambda_l, &q, &rf);
                    if verdict == RangeVerdict::Good {
                        assert_eq!(got.unwrap(), m.conjugate);
                    } else {
                        assert_eq!(got.unwrap_err(), TransferFailure::NotGoodRange(verdict));
                    }
                }
            }
        }
    }
}

#[test]
fn levi_weyl_group_stabilizes_u() {
    for (name, support) in [("e6q", vec![1, 2, 3, 4]), ("f4s", vec![2]), ("f4s", vec![0, 1])] {
        let rf = real_form(name).unwrap();
        let q = parabolic_from_support(&support, &rf).unwrap();
        for r in q.l_simple() {
            let m = dirac_core::realform::root_reflection_matrix(rf.g(), &r);
            assert!(stabilizes_u(&m, &q, &rf));
        }
    }
}

#[test]
fn inf_char_edge_cases() {
    let lambda = Weight::new(rat_vec(&[1, 2, 3]), Basis::GFund);
    let nu = Weight::new(vec![frac(1, 2), rat(0), rat(-1)], Basis::GFund);
    let id = QMatrix::identity(3);
    assert_eq!(inf_char_from_parameter(&lambda, &nu, &id).unwrap(), lambda.add(&nu));
    let minus = id.scaled(&rat(-1));
    assert_eq!(inf_char_from_parameter(&lambda, &nu, &minus).unwrap(), nu);
    let bad = QMatrix::from_int_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert!(inf_char_from_parameter(&lambda, &nu, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parabolic_invariants(h in prop::collection::vec(-3i64..4, 6)) {
        let rf = real_form("e6q").unwrap();
        let q = build_parabolic(&gw(&h), &rf).unwrap();
        prop_assert_eq!(q.rho_u().clone(), q.rho_u_k().add(q.rho_u_p()));
        prop_assert!(q.s() <= rf.compact_positive_roots().len());
        for r in q.l_roots() {
            let neg: Vec<i64> = r.iter().map(|c| -c).collect();
            prop_assert!(q.l_roots().contains(&neg));
        }
        for r in q.u_roots() {
            let neg: Vec<i64> = r.iter().map(|c| -c).collect();
            prop_assert!(!q.u_roots().contains(&neg));
        }
    }

    #[test]
    fn inf_char_matches_direct_arithmetic(
        l in prop::collection::vec(-5i64..5, 2),
        n in prop::collection::vec(-5i64..5, 2),
        swap in any::<bool>(),
    ) {
        let theta = if swap {
            QMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
        } else {
            QMatrix::identity(2)
        };
        let got = inf_char_from_parameter(&gw(&l), &gw(&n), &theta).unwrap();
        let expect: Vec<Rational> = if swap {
            vec![frac(l[0] + l[1], 2) + rat(n[0]), frac(l[0] + l[1], 2) + rat(n[1])]
        } else {
            vec![rat(l[0] + n[0]), rat(l[1] + n[1])]
        };
        prop_assert_eq!(got.coords(), expect.as_slice());
    }
}
