use num::{BigInt, Integer, One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Solution set `particular + span(nullspace)` of a consistent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
    /// Columns without a pivot; `nullspace[k]` has a 1 at `free[k]`.
    pub free: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solved(AffineSolution),
    Infeasible,
}

impl LinearSolution {
    pub fn solved(self) -> Option<AffineSolution> {
        match self {
            LinearSolution::Solved(s) => Some(s),
            LinearSolution::Infeasible => None,
        }
    }
}

fn row_to_integers(row: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Solve `a * x = b` exactly.
///
/// Forward elimination is fraction-free (Bareiss) on the integer-scaled
/// augmented matrix; back substitution produces the reduced echelon form.
/// The particular solution sets every free variable to zero.
pub fn linear_solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{m} rows but right-hand side of length {}",
            b.len()
        )));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("ragged coefficient matrix".into()));
    }

    let mut mat: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            row_to_integers(&full)
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..=n {
                let v = &mat[r][c] * &mat[i][j] - &mat[i][c] * &mat[r][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                mat[i][j] = q;
            }
            mat[i][c] = BigInt::zero();
        }
        prev = mat[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    if mat[rank..].iter().any(|row| !row[n].is_zero()) {
        return Ok(LinearSolution::Infeasible);
    }

    // reduced echelon form over the rationals
    let mut red: Vec<Vec<Rational>> = mat[..rank]
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for (k, &c) in pivots.iter().enumerate().rev() {
        let inv = red[k][c].recip();
        for x in red[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..k {
            if red[i][c].is_zero() {
                continue;
            }
            let f = red[i][c].clone();
            for j in c..=n {
                let d = &f * &red[k][j];
                red[i][j] -= d;
            }
        }
    }

    let mut particular = vec![Rational::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = red[k][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -red[k][f].clone();
            }
            v
        })
        .collect();

    let sol = AffineSolution {
        particular,
        nullspace,
        free,
    };
    if !residual_is_zero(a, b, &sol.particular) {
        return Err(Error::Infeasible("particular solution failed verification".into()));
    }
    Ok(LinearSolution::Solved(sol))
}

fn residual_is_zero(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    a.iter().zip(b).all(|(row, rhs)| {
        let s: Rational = row.iter().zip(x).map(|(u, v)| u * v).sum();
        &s == rhs
    })
}
