//! End-to-end examples across modules, with frozen expected values.

use num_bigint::BigInt;

use freetorus_core::bundle::{a_ki, circle_bundle, suspend, torus_bundle, torus_bundle_over_4, FourManifoldSpec};
use freetorus_core::catalog::{stabilization_m0, table1_base, table1_json, WitnessBase};
use freetorus_core::error::Error;
use freetorus_core::feasibility::{
    chi_iter, cohom2_check, cohom4_classify, free_torus_feasible, max_star_quotient_torus, quotient_tower,
};
use freetorus_core::lattice::{IntMat, IntVec};
use freetorus_core::manifold::{from_betti, is_diffeomorphic, BettiProfile, ConnectedSumExpr, ManifoldInput, Summand};
use freetorus_core::oracle::{exhaustive_row_sweep, invert_recurrence};

fn prof(n: usize, lower: &[i64], spin: bool) -> BettiProfile {
    BettiProfile::from_lower_i64(n, lower, spin).unwrap()
}

fn expr(n: usize, s: Vec<Summand>) -> ConnectedSumExpr {
    ConnectedSumExpr::new(n, s).unwrap()
}

fn sp(k: usize, l: usize) -> Summand {
    Summand::sphere_product(k, l)
}

fn v(xs: &[i64]) -> IntVec {
    IntVec::from(xs.to_vec())
}

#[test]
fn circle_bundles_over_small_bases() {
    let cp3 = expr(6, vec![Summand::cp(3)]);
    assert_eq!(circle_bundle(&cp3, &v(&[1])).unwrap(), BettiProfile::sphere(7));

    let tw = expr(5, vec![Summand::twisted(5)]);
    assert_eq!(circle_bundle(&tw, &v(&[1])).unwrap(), prof(6, &[0, 2], true));

    // b_3 picks up b_2 + b_3 of the base
    let two = expr(5, vec![sp(2, 3), sp(2, 3)]);
    assert_eq!(circle_bundle(&two, &v(&[1, 0])).unwrap(), prof(6, &[1, 4], true));

    let s2s4 = expr(6, vec![sp(2, 4)]);
    assert_eq!(circle_bundle(&s2s4, &v(&[1])).unwrap(), prof(7, &[0, 1], true));

    let err = circle_bundle(&s2s4, &v(&[2])).unwrap_err();
    assert_eq!(err.code(), "not_primitive");
}

#[test]
fn suspension_examples() {
    let s3s3 = expr(6, vec![sp(3, 3)]);
    let got = suspend(&s3s3, &v(&[]), false).unwrap();
    assert!(is_diffeomorphic(&got, &expr(7, vec![sp(3, 4), sp(3, 4)])).unwrap());

    let s2s4 = expr(6, vec![sp(2, 4)]);
    let got = suspend(&s2s4, &v(&[2]), false).unwrap();
    assert_eq!(got.canonicalize().unwrap(), expr(7, vec![sp(2, 5), sp(3, 4)]));

    let s5 = ConnectedSumExpr::sphere(5).unwrap();
    assert_eq!(suspend(&s5, &v(&[]), true).unwrap().betti_profile(), BettiProfile::sphere(6));
}

#[test]
fn torus_bundles() {
    let base = expr(5, vec![Summand::twisted(5), sp(2, 3)]);
    let r = torus_bundle(&base, &IntMat::from_i64(&[&[1, 0], &[0, 1]])).unwrap();
    assert_eq!(r.stages.len(), 2);
    assert_eq!(r.total, prof(7, &[0, 5], true));

    let err = torus_bundle(&base, &IntMat::from_i64(&[&[2, 0], &[0, 1]])).unwrap_err();
    match err {
        Error::NotBasis { free_rank, torsion } => assert_eq!((free_rank, torsion), (0, vec!["2".to_string()])),
        other => panic!("{other:?}"),
    }

    let cp2 = FourManifoldSpec::cp2_sum(1);
    assert_eq!(torus_bundle_over_4(&cp2, &IntMat::from_i64(&[&[1]])).unwrap(), BettiProfile::sphere(5));
    let two = FourManifoldSpec::cp2_sum(2);
    let e = IntMat::from_i64(&[&[1, 1], &[0, 1]]);
    assert_eq!(torus_bundle_over_4(&two, &e).unwrap(), prof(6, &[0, 2], true));
    let three = FourManifoldSpec::cp2_sum(3);
    assert_eq!(torus_bundle_over_4(&three, &IntMat::from_i64(&[&[1, 0, 0]])).unwrap(), prof(5, &[2], false));
}

#[test]
fn aki_values() {
    let a = |k, i, r: i64| a_ki(k, i, &BigInt::from(r)).unwrap();
    assert_eq!(a(3, 2, 5), BigInt::from(5));
    assert_eq!(a(2, 3, 0), BigInt::from(2));
    assert_eq!(a(0, 2, 7), BigInt::from(7));
    assert_eq!(a(3, 3, 0), BigInt::from(5));
}

#[test]
fn feasibility_examples() {
    let s3s3 = prof(6, &[0, 2], true);
    assert_eq!(chi_iter(&s3s3, 1, 2), BigInt::from(1));
    assert_eq!(chi_iter(&prof(6, &[1, 0], true), 1, 6), BigInt::from(4));
    assert!(free_torus_feasible(&s3s3, 1).unwrap().verdict);
    assert!(!free_torus_feasible(&prof(6, &[1, 0], true), 1).unwrap().verdict);

    let r = free_torus_feasible(&prof(9, &[0, 3, 0], true), 1).unwrap();
    assert!(!r.verdict);
    let json = r.to_json();
    let first = &json["per_m"][0]["condition1"];
    let chi4 = first.as_array().unwrap().iter().find(|c| c["i"] == 4).unwrap();
    assert_eq!(chi4["value"], -2);

    let t = quotient_tower(&s3s3, 1).unwrap();
    assert_eq!(t.stages.len(), 1);
    assert_eq!(t.stages[0].base, prof(5, &[1], false));
    assert_eq!(t.stages[0].euler, v(&[1]));
    assert!(t.stages[0].verified);

    let err = quotient_tower(&prof(7, &[1, 1], true), 1).unwrap_err();
    assert_eq!(err.code(), "infeasible");
}

#[test]
fn cohomogeneity_examples() {
    assert!(cohom4_classify(&prof(6, &[0, 2], true)).unwrap().is_some());
    for n in 7..=10 {
        assert!(cohom4_classify(&BettiProfile::sphere(n)).unwrap().is_none(), "S^{n}");
    }
    assert!(cohom2_check(&prof(6, &[0, 2], true)).unwrap());
    assert!(!cohom2_check(&prof(7, &[0, 2], true)).unwrap());
    assert_eq!(cohom2_check(&BettiProfile::sphere(5)).unwrap_err().code(), "dimension");

    assert_eq!(max_star_quotient_torus(&prof(6, &[0, 2], true)).unwrap(), 2);
    assert_eq!(max_star_quotient_torus(&prof(9, &[0, 3, 0], true)).unwrap(), 0);
    assert_eq!(max_star_quotient_torus(&prof(5, &[1], true)).unwrap(), 1);
}

#[test]
fn catalog_witnesses_reproduce_targets() {
    for p in [prof(7, &[0, 0], true), prof(7, &[2, 1], false), prof(8, &[0, 1, 0], true), prof(10, &[1, 2, 0, 0], true)] {
        let w = table1_base(&p).unwrap().unwrap();
        match &w.base {
            WitnessBase::Expr(b) => assert_eq!(circle_bundle(b, &w.euler).unwrap(), p, "{}", w.source),
            WitnessBase::FourManifold(_) => panic!("unexpected 4-manifold witness"),
        }
    }
    assert!(table1_base(&prof(9, &[0, 3, 0], true)).unwrap().is_none());
    assert_eq!(table1_json().as_array().unwrap().len(), 23);
}

#[test]
fn stabilization_m0_values() {
    let cases = [
        (BettiProfile::sphere(7), false, 0),
        (BettiProfile::sphere(7), true, 3),
        (prof(7, &[0, 2], true), false, 1),
        (prof(7, &[0, 2], true), true, 1),
        (BettiProfile::sphere(9), false, 0),
        (BettiProfile::sphere(9), true, 3),
        (prof(9, &[0, 1, 0], true), false, 0),
        (prof(9, &[0, 1, 0], true), true, 0),
    ];
    for (m, twisted, m0) in cases {
        assert_eq!(stabilization_m0(&m, twisted).unwrap().m0, m0, "{m} twisted={twisted}");
    }
    assert_eq!(stabilization_m0(&BettiProfile::sphere(8), false).unwrap_err().code(), "dimension");
}

#[test]
fn json_round_trips() {
    let e = expr(7, vec![Summand::twisted(7), sp(3, 4), Summand::cp_sphere_bundle(2, 3, false)]);
    let back = ConnectedSumExpr::from_json(&e.to_json()).unwrap();
    assert_eq!(back, e);
    let p = prof(9, &[2, 1, 3], false);
    assert_eq!(BettiProfile::from_json(&p.to_json()).unwrap(), p);
    let input = ManifoldInput::from_json(&serde_json::json!({"dim": 6, "betti": {"3": 2}, "spin": true})).unwrap();
    assert_eq!(input.form_star_profile().unwrap(), prof(6, &[0, 2], true));
    assert_eq!(from_betti(&prof(6, &[1, 2], true)).unwrap(), expr(6, vec![sp(2, 4), sp(3, 3)]));
}

#[test]
fn inversion_and_sweep() {
    let c = invert_recurrence(&prof(6, &[0, 2], true)).unwrap();
    assert_eq!(c.base, prof(5, &[1], false));
    let r = exhaustive_row_sweep(4).unwrap();
    assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
    assert!(r.cases > 0 && r.witnesses > 0);
}
