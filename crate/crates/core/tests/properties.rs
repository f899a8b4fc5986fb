use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use freetorus_core::bundle::{a_ki, circle_bundle, torus_bundle};
use freetorus_core::catalog::{table1_base, WitnessBase};
use freetorus_core::feasibility::{chi_iter, cohom4_classify, free_torus_feasible};
use freetorus_core::lattice::{cokernel, content, extends_to_basis, gf2_in_span, IntMat, IntVec};
use freetorus_core::manifold::{from_betti, BettiProfile, ConnectedSumExpr, Summand};
use freetorus_core::oracle::{chi_iter_direct, invert_recurrence};

fn int_vec(len: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> impl Strategy<Value = IntVec> {
    prop::collection::vec(lo..=hi, len).prop_map(IntVec::from)
}

fn int_mat(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMat> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(lo..=hi, c), r).prop_map(move |rows| {
            IntMat::from_rows(c, rows.into_iter().map(IntVec::from).collect()).unwrap()
        })
    })
}

/// Unsorted form-(*) connected sums, possibly with several twisted summands.
fn form_star_expr(max_summands: usize) -> impl Strategy<Value = ConnectedSumExpr> {
    (5usize..=10).prop_flat_map(move |n| {
        prop::collection::vec(1..=n / 2, 0..=max_summands).prop_map(move |ks| {
            let s = ks
                .into_iter()
                .map(|k| if k == 1 { Summand::twisted(n) } else { Summand::sphere_product(k, n - k) })
                .collect();
            ConnectedSumExpr::new(n, s).unwrap()
        })
    })
}

/// A form-(*) base with at least one H2 generator and a primitive class on it.
fn base_and_euler() -> impl Strategy<Value = (ConnectedSumExpr, IntVec)> {
    form_star_expr(6)
        .prop_filter("needs H2", |e| !e.h2_basis().is_empty())
        .prop_flat_map(|e| {
            let h = e.h2_basis().len();
            (Just(e), int_vec(h..=h, -3, 3).prop_filter("primitive", |v| content(v).is_one()))
        })
}

fn form_star_profile() -> impl Strategy<Value = BettiProfile> {
    (6usize..=11, prop::collection::vec(0i64..=4, 5), any::<bool>()).prop_filter_map(
        "not form (*)",
        |(n, mut lower, spin)| {
            lower.truncate(n / 2 - 1);
            if n % 2 == 0 {
                *lower.last_mut().unwrap() &= !1;
            }
            let p = BettiProfile::from_lower_i64(n, &lower, spin).ok()?;
            p.check_form_star().ok()?;
            Some(p)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn content_divides_and_scales(v in int_vec(0..=6, -30, 30), c in -7i64..=7) {
        let g = content(&v);
        for x in v.entries() {
            let divides = if g.is_zero() { x.is_zero() } else { (x % &g).is_zero() };
            prop_assert!(divides);
        }
        let c = BigInt::from(c);
        prop_assert_eq!(content(&v.scaled(&c)), c.abs() * g);
    }

    #[test]
    fn basis_extension_matches_cokernel(a in int_mat(5, -4, 4)) {
        prop_assume!(a.rows() <= a.cols());
        let c = cokernel(&a);
        let trivial = c.free_rank == 0 && c.torsion.is_empty();
        prop_assert_eq!(extends_to_basis(&a).unwrap(), trivial);
    }

    #[test]
    fn gf2_span_matches_enumeration(a in int_mat(6, -3, 3), seed in any::<u64>()) {
        let cols = a.cols();
        let w = IntVec::from((0..cols).map(|j| ((seed >> j) & 1) as i64).collect::<Vec<_>>());
        let target: Vec<bool> = w.parity();
        let rows: Vec<Vec<bool>> = a.row_vecs().iter().map(IntVec::parity).collect();
        let mut found = false;
        for mask in 0u32..1 << rows.len() {
            let mut acc = vec![false; cols];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in acc.iter_mut().zip(r) {
                        *x ^= y;
                    }
                }
            }
            if acc == target {
                found = true;
                break;
            }
        }
        prop_assert_eq!(gf2_in_span(&w, &a).unwrap(), found);
    }

    #[test]
    fn realization_inverts_profile(p in form_star_profile()) {
        let e = from_betti(&p).unwrap();
        prop_assert_eq!(e.betti_profile(), p);
    }

    #[test]
    fn canonical_form_is_stable(e in form_star_expr(6)) {
        let c = e.canonicalize().unwrap();
        prop_assert_eq!(c.canonicalize().unwrap(), c.clone());
        prop_assert_eq!(c.betti_profile(), e.betti_profile());
        prop_assert_eq!(from_betti(&c.betti_profile()).unwrap(), c);
    }

    #[test]
    fn form_star_profiles_satisfy_duality(e in form_star_expr(6)) {
        let p = e.betti_profile();
        let n = p.dim();
        for i in 2..=n - 2 {
            prop_assert_eq!(p.b(i), p.b(n - i));
        }
        if n % 2 == 0 {
            prop_assert!(p.b(n / 2).is_even());
        }
        let w2_zero = e.h2_basis().w2_bits().iter().all(|b| !b);
        prop_assert_eq!(e.is_spin(), w2_zero && e.summands().iter().all(Summand::is_spin));
    }

    #[test]
    fn circle_bundles_have_vanishing_euler_characteristic((base, e) in base_and_euler()) {
        let p = circle_bundle(&base, &e).unwrap();
        prop_assert!(p.euler_characteristic().is_zero());
        prop_assert!(p.satisfies_duality());
        let row = IntMat::from_rows(e.len(), vec![e.clone()]).unwrap();
        prop_assert_eq!(torus_bundle(&base, &row).unwrap().total, p);
    }

    #[test]
    fn aki_recurrence_and_symmetry(k in 1usize..=12, r in 1i64..=20, i in 2usize..=14) {
        prop_assume!(i <= k + 2);
        let r = BigInt::from(r);
        let v = a_ki(k, i, &r).unwrap();
        prop_assert_eq!(&v, &a_ki(k, k + 4 - i, &r).unwrap());
        if i >= 3 {
            let lhs = a_ki(k + 1, i, &(&r - 1)).unwrap();
            prop_assert_eq!(lhs, a_ki(k, i - 1, &r).unwrap() + v);
        }
    }

    #[test]
    fn feasibility_is_monotone_in_k(p in form_star_profile()) {
        let top = p.dim() - 5;
        let verdicts: Vec<bool> =
            (1..=top).map(|k| free_torus_feasible(&p, k).unwrap().verdict).collect();
        for w in verdicts.windows(2) {
            prop_assert!(w[0] || !w[1], "{} {:?}", p, verdicts);
        }
    }

    #[test]
    fn chi_iter_telescopes(p in form_star_profile(), m in 1usize..=5) {
        let mut running = BigInt::zero();
        for i in 0..=p.dim() {
            running += chi_iter(&p, m - 1, i);
            prop_assert_eq!(chi_iter(&p, m, i), running.clone());
            prop_assert_eq!(chi_iter(&p, m, i), chi_iter_direct(&p, m, i));
        }
    }

    #[test]
    fn cohom4_witnesses_are_dual(p in form_star_profile()) {
        if cohom4_classify(&p).unwrap().is_some() {
            let n = p.dim();
            if n % 2 == 0 {
                prop_assert!(p.euler_characteristic().is_zero());
            }
            for i in 2..=n - 2 {
                prop_assert_eq!(p.b(i), p.b(n - i));
            }
        }
    }

    #[test]
    fn inversion_round_trips(p in form_star_profile()) {
        if let Some(c) = invert_recurrence(&p) {
            let e = IntVec(c.euler_parity.iter().map(|&x| BigInt::from(x as u8)).collect());
            let base = from_betti(&c.base).unwrap();
            prop_assert_eq!(circle_bundle(&base, &e).unwrap(), p);
        }
    }

    #[test]
    fn catalog_witnesses_verify(p in form_star_profile().prop_filter("n <= 10", |p| p.dim() <= 10)) {
        if let Some(w) = table1_base(&p).unwrap() {
            if let WitnessBase::Expr(base) = &w.base {
                prop_assert_eq!(circle_bundle(base, &w.euler).unwrap(), p);
            }
        }
    }
}

#[test]
fn negative_cases_at_nine() {
    for m in 3..=6 {
        let p = BettiProfile::from_lower_i64(9, &[0, m, 0], true).unwrap();
        assert!(chi_iter(&p, 1, 4).is_negative());
        assert!(table1_base(&p).unwrap().is_none());
        assert!(!free_torus_feasible(&p, 1).unwrap().verdict);
    }
}
