mod common;

use common::{arb_poly, q};
use num::{One, Zero};
use proptest::prelude::*;
use qtoda::flow::hamiltonian_normalization;
use qtoda::lax::{native_table, to_native_coordinates};
use qtoda::weyl::pairwise_commute_check;
use qtoda::{
    build_hamiltonian, build_lax, check_annihilation, conserved_quantities, normalized_integrals, quadratic_relation,
    quantize_integral, solve_series, to_p_coordinates, Family, Polynomial, Rational, RootSystem, WeylOp,
};

fn rs(f: Family, n: usize) -> RootSystem {
    RootSystem::new(f, n).unwrap()
}

/// For rank one the quotient is `Q[p]/(p^2)`, and the sector is
/// `c^d / Π_k G((p + kℏ)^2 − p^2)`, which expands to
/// `(c/G)^d / (d!^2 ℏ^{2d}) · (1 − 2 H_d p / ℏ)` with `H_d` the harmonic number.
#[test]
fn rank_one_sectors_match_closed_form() {
    let r = rs(Family::A, 1);
    let c = &r.diag()[0] / &r.gram()[0][0];
    let s = solve_series(&r, 6).unwrap();
    let p = Polynomial::parse("p1", s.vars()).unwrap();
    let mut fact = Rational::one();
    let mut harmonic = Rational::zero();
    for d in 1..=6i64 {
        fact *= q(d, 1);
        harmonic += q(1, d);
        let lead = (0..d).fold(Rational::one(), |acc, _| acc * &c) / (&fact * &fact);
        let got = s.get(&[d as u32]).unwrap();
        assert_eq!(got.terms().count(), 2, "d = {d}");
        assert_eq!(
            got.coefficient(-2 * d as i32),
            Polynomial::constant(s.vars(), lead.clone())
        );
        let want = p.scale(&(-&lead * q(2, 1) * &harmonic));
        assert_eq!(got.coefficient(-2 * d as i32 - 1), want, "d = {d}");
    }
}

#[test]
fn sectors_are_homogeneous() {
    for (f, n, cutoff) in [(Family::A, 2, 3), (Family::B, 2, 3), (Family::A, 3, 2)] {
        let s = solve_series(&rs(f, n), cutoff).unwrap();
        for (d, v) in s.sectors() {
            let k: u32 = d.iter().sum();
            assert_eq!(v.homogeneous_degree(), Some(-2 * k as i64), "{f}{n} {d:?}");
        }
    }
}

#[test]
fn quantized_integrals_annihilate_the_series() {
    for (f, n, cutoff) in [(Family::A, 2, 3), (Family::B, 2, 3)] {
        let r = rs(f, n);
        let h = build_hamiltonian(&r);
        let us = normalized_integrals(&r).unwrap();
        assert_eq!(quantize_integral(&r, &us[0]).unwrap().representative, h);
        let mut ops = vec![h];
        for u in &us[1..] {
            ops.push(quantize_integral(&r, u).unwrap().representative);
        }
        assert!(pairwise_commute_check(&ops).unwrap().commute, "{f}{n}");
        let s = solve_series(&r, cutoff).unwrap();
        for v in check_annihilation(&s, &ops).unwrap() {
            assert!(v.annihilates, "{f}{n}: {} {:?}", v.operator, v.witness);
        }
    }
}

#[test]
fn normalization_constant_per_family() {
    for n in 1..=4 {
        assert_eq!(hamiltonian_normalization(&rs(Family::A, n)).unwrap(), q(2, 1));
    }
    for n in 2..=4 {
        let r = rs(Family::B, n);
        assert_eq!(hamiltonian_normalization(&r).unwrap(), q(1, 1));
        let j1 = conserved_quantities(&build_lax(&r)).items[0].clone();
        assert_eq!(to_p_coordinates(&r, &-&j1).unwrap(), quadratic_relation(&r));
    }
}

fn arb_op_pair() -> impl Strategy<Value = (WeylOp, WeylOp, Rational)> {
    let term = (
        prop::collection::vec(0..2u32, 2),
        0..2u32,
        prop::collection::vec(0..3u32, 2),
        -3i64..=3,
    );
    let op = prop::collection::vec(term, 1..4).prop_map(|ts| {
        ts.into_iter().fold(WeylOp::zero(2), |acc, (a, b, m, c)| {
            acc.checked_add(&WeylOp::term(2, qtoda::weyl::OpKey { a, b, m }, q(c, 1)))
                .unwrap()
        })
    });
    (op.clone(), op, (-5i64..=5).prop_map(|c| q(c, 2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn operator_action_is_linear((a, b, c) in arb_op_pair()) {
        let s = solve_series(&rs(Family::A, 2), 3).unwrap();
        let lhs = s.apply_operator(&a.checked_add(&b.scale(&c)).unwrap()).unwrap();
        let ra = s.apply_operator(&a).unwrap();
        let rb = s.apply_operator(&b).unwrap();
        let checked = lhs.len().min(ra.len()).min(rb.len());
        for i in 0..checked {
            let (d, l) = &lhs[i];
            let ia = ra.iter().position(|(x, _)| x == d).unwrap();
            let ib = rb.iter().position(|(x, _)| x == d).unwrap();
            prop_assert_eq!(l, &ra[ia].1.plus(&rb[ib].1.scale(&c)));
        }
    }

    #[test]
    fn b_coordinates_round_trip(f in arb_poly(native_table(&rs(Family::B, 3)), 5, 3)) {
        let r = rs(Family::B, 3);
        let p = to_p_coordinates(&r, &f).unwrap();
        prop_assert_eq!(to_native_coordinates(&r, &p).unwrap(), f);
    }
}
