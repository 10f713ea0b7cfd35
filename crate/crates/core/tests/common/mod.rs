#![allow(dead_code)]

use std::sync::Arc;

use num::{BigInt, One, Zero};
use proptest::prelude::*;
use qtoda::{Monomial, Polynomial, Rational, VarTable};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Random polynomial with up to `terms` terms, exponents below `max_exp`.
pub fn arb_poly(vars: Arc<VarTable>, terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..max_exp, n), -5i64..=5, 1i64..=3), 0..=terms).prop_map(move |ts| {
        Polynomial::from_terms(
            &vars,
            ts.into_iter().map(|(e, a, b)| (Monomial::from_exponents(e), q(a, b))),
        )
    })
}

/// All monomials of weighted degree exactly `d`.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Monomial> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(cur.clone()));
            }
            return;
        }
        let mut e = 0;
        while e * weights[i] <= left {
            cur.push(e);
            go(weights, i + 1, left - e * weights[i], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Rank of a rational matrix by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, |x| x.len());
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() * inv.clone();
                for j in c..cols {
                    let d = f.clone() * rows[r][j].clone();
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by the Leibniz formula over all permutations.
pub fn leibniz_det(m: &[Vec<Polynomial>], vars: &Arc<VarTable>) -> Polynomial {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Polynomial::zero(vars);
    loop {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = Polynomial::one(vars);
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
        }
        total = if inversions % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

/// Elementary symmetric polynomial `e_k` of the given polynomials.
pub fn elementary(xs: &[Polynomial], k: usize, vars: &Arc<VarTable>) -> Polynomial {
    // e_k via the recurrence on prefixes
    let mut e = vec![Polynomial::zero(vars); k + 1];
    e[0] = Polynomial::one(vars);
    for x in xs {
        for j in (1..=k).rev() {
            e[j] = &e[j] + &(&e[j - 1] * x);
        }
    }
    e[k].clone()
}
