mod common;

use common::{arb_poly, monomials_of_degree, q, rank};
use num::Zero;
use proptest::prelude::*;
use qtoda::qhring::specialized_dimension;
use qtoda::{build_presentation, Coords, Family, GroebnerBasis, Monomial, Polynomial, Rational, RootSystem, VarTable};

/// Hilbert function of a homogeneous ideal computed from the degree-`d`
/// pieces `Σ R_{d - deg f} f` by rank counting; no Gröbner basis involved.
fn hilbert_oracle(gens: &[Polynomial], top: u32) -> Vec<usize> {
    let vars = gens[0].vars().clone();
    let w = vars.weights();
    (0..=top)
        .map(|d| {
            let basis = monomials_of_degree(&w, d);
            let mut rows = Vec::new();
            for g in gens {
                let gd = g.homogeneous_degree().unwrap();
                if gd > d {
                    continue;
                }
                for m in monomials_of_degree(&w, d - gd) {
                    let prod = g.mul_monomial(&m, &Rational::from_integer(1.into()));
                    rows.push(basis.iter().map(|b| prod.coefficient(b)).collect());
                }
            }
            basis.len() - if rows.is_empty() { 0 } else { rank(rows) }
        })
        .collect()
}

#[test]
fn classical_hilbert_functions_match_oracle() {
    for (f, n) in [
        (Family::A, 1),
        (Family::A, 2),
        (Family::A, 3),
        (Family::B, 2),
        (Family::B, 3),
    ] {
        let rs = RootSystem::new(f, n).unwrap();
        let pres = build_presentation(&rs, Coords::P).unwrap();
        let gb = pres.classical_groebner();
        let counts = gb.hilbert_counts().unwrap();
        let top = rs.positive_roots();
        let oracle = hilbert_oracle(gb.generators(), top + 1);
        assert_eq!(oracle[top as usize + 1], 0, "{f}{n}: socle degree");
        assert_eq!(&oracle[..=top as usize], &counts[..], "{f}{n}");
        assert_eq!(counts.iter().sum::<usize>() as u64, rs.weyl_order());
    }
}

#[test]
fn standard_monomials_are_reduced_and_independent() {
    let rs = RootSystem::new(Family::A, 2).unwrap();
    let pres = build_presentation(&rs, Coords::P).unwrap();
    let gb = pres.classical_groebner();
    for m in gb.standard_monomials(None).unwrap() {
        let p = Polynomial::monomial(gb.vars(), m, Rational::from_integer(1.into()));
        assert_eq!(gb.normal_form(&p).unwrap(), p);
    }
}

#[test]
fn specialized_rings_have_weyl_order_dimension() {
    let rs = RootSystem::new(Family::A, 2).unwrap();
    let pres = build_presentation(&rs, Coords::P).unwrap();
    for qs in [[q(1, 1), q(1, 1)], [q(-3, 2), q(7, 1)], [q(0, 1), q(5, 3)]] {
        assert_eq!(specialized_dimension(&pres, &qs).unwrap(), 6);
    }
}

fn three_vars() -> std::sync::Arc<VarTable> {
    VarTable::from_names(["a", "b", "c"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn basis_independent_of_generator_order(
        gens in prop::collection::vec(arb_poly(three_vars(), 3, 3), 1..4)
    ) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let fwd = GroebnerBasis::grevlex(&gens).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let back = GroebnerBasis::grevlex(&rev).unwrap();
        prop_assert_eq!(fwd.generators(), back.generators());
        prop_assert!(fwd.verify());
    }

    #[test]
    fn normal_form_is_linear_and_kills_members(
        gens in prop::collection::vec(arb_poly(three_vars(), 3, 3), 1..3),
        cofactors in prop::collection::vec(arb_poly(three_vars(), 3, 2), 3),
        f in arb_poly(three_vars(), 4, 3),
        g in arb_poly(three_vars(), 4, 3),
    ) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let gb = GroebnerBasis::grevlex(&gens).unwrap();
        let nf = |p: &Polynomial| gb.normal_form(p).unwrap();
        prop_assert_eq!(nf(&(&f + &g)), &nf(&f) + &nf(&g));
        prop_assert_eq!(nf(&f.scale(&q(3, 2))), nf(&f).scale(&q(3, 2)));
        let mut member = Polynomial::zero(gb.vars());
        for (c, g) in cofactors.iter().zip(&gens) {
            member = &member + &(c * g);
        }
        prop_assert!(nf(&member).is_zero());
        let lms = gb.leading_monomials();
        let r = nf(&f);
        for (m, _) in r.terms() {
            prop_assert!(!lms.iter().any(|l: &Monomial| l.divides(m)));
        }
    }

    #[test]
    fn reduction_preserves_weighted_degree(
        c in prop::collection::vec(-4i64..=4, 4)
    ) {
        let rs = RootSystem::new(Family::B, 2).unwrap();
        let pres = build_presentation(&rs, Coords::P).unwrap();
        let mut f = Polynomial::zero(pres.vars());
        for (k, m) in c.iter().zip(["p1^3", "p1*q1", "p2*q2", "p1^2*p2"]) {
            f = &f + &pres.parse(m).unwrap().scale(&q(*k, 1));
        }
        let r = pres.reduce_class(&f).unwrap();
        prop_assert!(r.is_zero() || r.homogeneous_degree() == Some(3));
        prop_assert!(!r.is_zero() || c.iter().all(|x| x.is_zero()) || pres.groebner().contains(&f).unwrap());
    }
}
