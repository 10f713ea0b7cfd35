mod common;

use common::{arb_poly, elementary, leibniz_det};
use proptest::prelude::*;
use qtoda::{build_lax, conserved_quantities, Family, PolyMatrix, Polynomial, RootSystem, VarTable};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn memoised_laplace_matches_leibniz(entries in prop::collection::vec(
        arb_poly(VarTable::from_names(["a", "b"]).unwrap(), 2, 2), 16)) {
        let vars = entries[0].vars().clone();
        let rows: Vec<Vec<Polynomial>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let m = PolyMatrix::from_rows(&vars, rows.clone()).unwrap();
        prop_assert_eq!(m.determinant().unwrap(), leibniz_det(&rows, &vars));
    }

    #[test]
    fn transpose_preserves_determinant(entries in prop::collection::vec(
        arb_poly(VarTable::from_names(["a"]).unwrap(), 2, 3), 9)) {
        let vars = entries[0].vars().clone();
        let rows: Vec<Vec<Polynomial>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let m = PolyMatrix::from_rows(&vars, rows).unwrap();
        prop_assert_eq!(m.determinant().unwrap(), m.transpose().determinant().unwrap());
    }
}

/// `det(t + X)` expanded by Leibniz, coefficients read off by `t`-degree.
fn oracle_char_poly(lax: &PolyMatrix) -> Vec<Polynomial> {
    let ext = lax.vars().extended([("t", 1)]).unwrap();
    let t = Polynomial::var(&ext, "t").unwrap();
    let n = lax.rows();
    let rows: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = lax.get(i, j).embed(&ext).unwrap();
                    if i == j {
                        &e + &t
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let det = leibniz_det(&rows, &ext);
    let ti = ext.index_of("t").unwrap();
    (0..=n)
        .map(|k| {
            let terms = det
                .terms()
                .filter(|(m, _)| m.exponents()[ti] == k as u32)
                .map(|(m, c)| {
                    let mut e = m.exponents().to_vec();
                    e.pop();
                    (qtoda::Monomial::from_exponents(e), c.clone())
                });
            Polynomial::from_terms(lax.vars(), terms)
        })
        .collect()
}

#[test]
fn conserved_quantities_match_cofactor_oracle() {
    for (f, n) in [
        (Family::A, 1),
        (Family::A, 2),
        (Family::A, 3),
        (Family::B, 2),
        (Family::B, 3),
    ] {
        let rs = RootSystem::new(f, n).unwrap();
        let lax = build_lax(&rs);
        let coeffs = oracle_char_poly(lax.matrix());
        let js = conserved_quantities(&lax);
        for v in 1..=n {
            let idx = match f {
                Family::A => n - v,
                Family::B => 2 * (n - v),
            };
            assert_eq!(js.get(v), &coeffs[idx], "{f}{n} J{v}");
        }
    }
}

#[test]
fn diagonal_limits_are_elementary_symmetric() {
    for n in 1..=4 {
        let rs = RootSystem::new(Family::A, n).unwrap();
        let lax = build_lax(&rs);
        let vars = lax.vars().clone();
        let d: Vec<Polynomial> = (0..=n).map(|i| lax.matrix().get(i, i).clone()).collect();
        for (v, j) in conserved_quantities(&lax).items.iter().enumerate() {
            assert_eq!(
                qtoda::lax::at_q_zero(j),
                elementary(&d, v + 2, &vars),
                "A{n} J{}",
                v + 1
            );
        }
    }
    for n in 2..=4 {
        let rs = RootSystem::new(Family::B, n).unwrap();
        let lax = build_lax(&rs);
        let vars = lax.vars().clone();
        let sq: Vec<Polynomial> = (0..n).map(|i| Polynomial::var_at(&vars, i).pow(2)).collect();
        for (v, j) in conserved_quantities(&lax).items.iter().enumerate() {
            let e = elementary(&sq, v + 1, &vars);
            let want = if (v + 1) % 2 == 0 { e } else { -e };
            assert_eq!(qtoda::lax::at_q_zero(j), want, "B{n} J{}", v + 1);
        }
    }
}

#[test]
fn conserved_quantities_are_homogeneous() {
    for (f, n) in [(Family::A, 4), (Family::B, 4)] {
        let rs = RootSystem::new(f, n).unwrap();
        let js = conserved_quantities(&build_lax(&rs));
        for v in 1..=n {
            assert_eq!(
                js.get(v).homogeneous_degree(),
                Some(qtoda::ConservedSet::expected_degree(f, v))
            );
        }
    }
}

#[test]
fn b4_char_poly_is_fast() {
    let rs = RootSystem::new(Family::B, 4).unwrap();
    let start = std::time::Instant::now();
    let js = conserved_quantities(&build_lax(&rs));
    assert_eq!(js.items.len(), 4);
    assert!(start.elapsed().as_secs_f64() < 5.0);
}
