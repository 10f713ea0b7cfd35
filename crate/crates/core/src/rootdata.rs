//! Root data for the supported families and their Langlands duals.
//!
//! All inner products use the form with `(ε_i, ε_j) = δ_ij` on the canonical
//! ε-coordinates: `ℝ^{n+1}` for `A_n`, `ℝ^n` for `B_n` (whose dual is of
//! type `C_n`). With this form the dual gram matrix of `A_n` is its Cartan
//! matrix and the `B_n` dual has one long simple root `2ε_n`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{int, rat, Polynomial, Rational, VarTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    simple_roots: Vec<Vec<Rational>>,
    dual_roots: Vec<Vec<Rational>>,
    gram: Vec<Vec<Rational>>,
    diag: Vec<Rational>,
    degrees: Vec<u32>,
    weyl_order: u64,
    rho: Vec<Rational>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Exact determinant of a small rational matrix by Gaussian elimination.
pub(crate) fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        match family {
            Family::A if rank < 1 => {
                return Err(Error::InvalidRank {
                    family,
                    rank,
                    reason: "family A requires rank >= 1",
                })
            }
            Family::B if rank < 2 => {
                return Err(Error::InvalidRank {
                    family,
                    rank,
                    reason: "family B requires rank >= 2",
                })
            }
            _ => {}
        }
        let n = rank;
        let (dim, simple_roots): (usize, Vec<Vec<Rational>>) = match family {
            Family::A => (
                n + 1,
                (0..n).map(|i| sub(&unit(n + 1, i), &unit(n + 1, i + 1))).collect(),
            ),
            Family::B => (
                n,
                (0..n)
                    .map(|i| {
                        if i + 1 < n {
                            sub(&unit(n, i), &unit(n, i + 1))
                        } else {
                            unit(n, n - 1)
                        }
                    })
                    .collect(),
            ),
        };
        // α^∨ = 2α / (α, α)
        let dual_roots: Vec<Vec<Rational>> = simple_roots
            .iter()
            .map(|a| {
                let s = int(2) / dot(a, a);
                a.iter().map(|x| x * &s).collect()
            })
            .collect();
        let gram: Vec<Vec<Rational>> = dual_roots
            .iter()
            .map(|a| dual_roots.iter().map(|b| dot(a, b)).collect())
            .collect();
        let diag = (0..n).map(|i| gram[i][i].clone()).collect();
        let (degrees, weyl_order, rho) = match family {
            Family::A => {
                let degrees: Vec<u32> = (2..=n as u32 + 1).collect();
                let order = (1..=n as u64 + 1).product();
                // half sum of ε_i - ε_j, i < j
                let rho = (0..dim).map(|k| rat(n as i64 - 2 * k as i64, 2)).collect();
                (degrees, order, rho)
            }
            Family::B => {
                let degrees: Vec<u32> = (1..=n as u32).map(|i| 2 * i).collect();
                let order = (1u64 << n) * (1..=n as u64).product::<u64>();
                let rho = (0..dim).map(|k| rat(2 * (n - k) as i64 - 1, 2)).collect();
                (degrees, order, rho)
            }
        };
        Ok(RootSystem {
            family,
            rank,
            simple_roots,
            dual_roots,
            gram,
            diag,
            degrees,
            weyl_order,
            rho,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Simple roots of the flag-side group in ε-coordinates.
    pub fn simple_roots(&self) -> &[Vec<Rational>] {
        &self.simple_roots
    }

    /// Simple roots of the Langlands dual in ε-coordinates.
    pub fn dual_roots(&self) -> &[Vec<Rational>] {
        &self.dual_roots
    }

    /// `G_ij = (α_i^∨, α_j^∨)`.
    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// `c_i = (α_i^∨, α_i^∨)`.
    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    /// Fundamental degrees of the Weyl group invariants.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl_order
    }

    pub fn rho(&self) -> &[Rational] {
        &self.rho
    }

    /// Number of ε-coordinates (also the number of diagonal variables).
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B => self.rank,
        }
    }

    /// Number of positive roots, the complex dimension of G/B.
    pub fn positive_roots(&self) -> u32 {
        self.degrees.iter().map(|d| d - 1).sum()
    }

    /// Leading principal minors of the gram matrix.
    pub fn principal_minors(&self) -> Vec<Rational> {
        (1..=self.rank)
            .map(|k| {
                let sub: Vec<Vec<Rational>> = self.gram[..k].iter().map(|row| row[..k].to_vec()).collect();
                rational_det(&sub)
            })
            .collect()
    }

    pub fn is_gram_positive_definite(&self) -> bool {
        self.principal_minors().iter().all(|m| m.is_positive())
    }

    /// `Π_i (1 + t + … + t^{d_i - 1})` as a polynomial in `t`.
    pub fn poincare_polynomial(&self) -> Polynomial {
        let v = VarTable::from_names(["t"]).unwrap();
        let t = Polynomial::var_at(&v, 0);
        let mut acc = Polynomial::one(&v);
        for &d in &self.degrees {
            let mut f = Polynomial::zero(&v);
            for k in 0..d {
                f = &f + &t.pow(k);
            }
            acc = &acc * &f;
        }
        acc
    }

    /// Table of diagonal (Chern-root style) variables `x1..xN`.
    pub fn diagonal_table(&self) -> Arc<VarTable> {
        VarTable::indexed("x", self.ambient_dim())
    }

    /// Generators of the Weyl group as signed permutations of the diagonal
    /// variables: adjacent transpositions, plus the last sign flip for B.
    pub fn weyl_generators(&self) -> Vec<SignedPermutation> {
        let dim = self.ambient_dim();
        let mut gens: Vec<SignedPermutation> = (0..dim - 1)
            .map(|i| SignedPermutation::transposition(dim, i, i + 1))
            .collect();
        if self.family == Family::B {
            gens.push(SignedPermutation::sign_flip(dim, dim - 1));
        }
        gens
    }

    /// Apply a Weyl group element to a polynomial in the diagonal variables:
    /// `x_i ↦ sign_i · x_{perm(i)}`.
    pub fn weyl_action(&self, w: &SignedPermutation, poly: &Polynomial) -> Result<Polynomial> {
        let dim = self.ambient_dim();
        if w.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "group element acts on {} letters, family needs {dim}",
                w.len()
            )));
        }
        if self.family == Family::A && w.signs.iter().any(|&s| s < 0) {
            return Err(Error::InvalidArgument(
                "sign changes are not in the Weyl group of type A".into(),
            ));
        }
        let vars = poly.vars().clone();
        let diag_index = |name: &str| -> Option<usize> {
            let k: usize = name.strip_prefix('x')?.parse().ok()?;
            (1..=dim).contains(&k).then(|| k - 1)
        };
        let mut slot = vec![None; dim];
        for i in poly.support() {
            match diag_index(vars.name(i)) {
                Some(k) => slot[k] = Some(i),
                None => return Err(Error::ForbiddenVariable(vars.name(i).to_string())),
            }
        }
        // images must exist in the polynomial's table
        let mut images: Vec<Polynomial> = (0..vars.len()).map(|i| Polynomial::var_at(&vars, i)).collect();
        for k in 0..dim {
            let Some(i) = slot[k] else { continue };
            let target = w.perm[k];
            let name = format!("x{}", target + 1);
            let j = vars.require(&name)?;
            let mut img = Polynomial::var_at(&vars, j);
            if w.signs[k] < 0 {
                img = -img;
            }
            images[i] = img;
        }
        poly.compose(&vars, &images)
    }
}

/// Signed permutation `x_i ↦ signs[i] · x_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch("perm and signs differ in length".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(n);
        w.perm.swap(i, j);
        w
    }

    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut w = Self::identity(n);
        w.signs[i] = -1;
        w
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn a2_data() {
        let rs = RootSystem::new(Family::A, 2).unwrap();
        assert_eq!(rs.gram(), grid(&[&[2, -1], &[-1, 2]]).as_slice());
        assert_eq!(rs.weyl_order(), 6);
        assert_eq!(rs.degrees(), &[2, 3]);
    }

    #[test]
    fn b2_dual_is_c2() {
        let rs = RootSystem::new(Family::B, 2).unwrap();
        assert_eq!(rs.gram(), grid(&[&[2, -2], &[-2, 4]]).as_slice());
        assert_eq!(rs.diag(), &[int(2), int(4)]);
        assert_eq!(rs.weyl_order(), 8);
        assert_eq!(rs.dual_roots()[1], vec![int(0), int(2)]);
    }

    #[test]
    fn a1_rank_one() {
        let rs = RootSystem::new(Family::A, 1).unwrap();
        assert_eq!(rs.gram(), grid(&[&[2]]).as_slice());
        assert_eq!(rs.weyl_order(), 2);
        assert_eq!(rs.degrees(), &[2]);
    }

    #[test]
    fn rank_out_of_range_names_parameter() {
        let e = RootSystem::new(Family::B, 1).unwrap_err();
        assert!(e.to_string().contains("rank"));
        assert!(matches!(
            e,
            Error::InvalidRank {
                family: Family::B,
                rank: 1,
                ..
            }
        ));
        assert!(RootSystem::new(Family::A, 0).is_err());
    }

    #[test]
    fn gram_shapes_for_all_small_ranks() {
        for n in 1..=6 {
            let rs = RootSystem::new(Family::A, n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(rs.gram()[i][j], int(want));
                }
            }
            assert!(rs.is_gram_positive_definite());
            assert_eq!(rs.weyl_order(), (1..=n as u64 + 1).product::<u64>());
        }
        for n in 2..=6 {
            let rs = RootSystem::new(Family::B, n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j {
                        if i == n - 1 {
                            4
                        } else {
                            2
                        }
                    } else if (i, j) == (n - 2, n - 1) || (i, j) == (n - 1, n - 2) {
                        -2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(rs.gram()[i][j], int(want), "B{n} G[{i}][{j}]");
                }
                assert_eq!(rs.diag()[i], rs.gram()[i][i]);
            }
            assert!(rs.is_gram_positive_definite());
        }
    }

    #[test]
    fn poincare_polynomials() {
        let t = VarTable::from_names(["t"]).unwrap();
        let cases = [
            (Family::A, 2, "t^3 + 2*t^2 + 2*t + 1"),
            (Family::A, 1, "t + 1"),
            (Family::B, 2, "t^4 + 2*t^3 + 2*t^2 + 2*t + 1"),
        ];
        for (f, n, want) in cases {
            let rs = RootSystem::new(f, n).unwrap();
            assert_eq!(rs.poincare_polynomial(), Polynomial::parse(want, &t).unwrap());
        }
        for (f, n) in [(Family::A, 3), (Family::A, 4), (Family::B, 3), (Family::B, 4)] {
            let rs = RootSystem::new(f, n).unwrap();
            assert_eq!(rs.poincare_polynomial().eval(&[int(1)]), int(rs.weyl_order() as i64));
        }
    }

    #[test]
    fn weyl_action_examples() {
        let a2 = RootSystem::new(Family::A, 2).unwrap();
        let v = a2.diagonal_table();
        let p = |s: &str| Polynomial::parse(s, &v).unwrap();
        let swap = SignedPermutation::transposition(3, 0, 1);
        let e2 = p("x1*x2 + x1*x3 + x2*x3");
        assert_eq!(a2.weyl_action(&swap, &e2).unwrap(), e2);
        assert_eq!(a2.weyl_action(&swap, &p("x1 - x2")).unwrap(), p("x2 - x1"));

        let b2 = RootSystem::new(Family::B, 2).unwrap();
        let vb = b2.diagonal_table();
        let flip = SignedPermutation::sign_flip(2, 1);
        let f = Polynomial::parse("x1^2 + x2^2", &vb).unwrap();
        assert_eq!(b2.weyl_action(&flip, &f).unwrap(), f);
    }

    #[test]
    fn weyl_action_rejects_foreign_variables() {
        let a2 = RootSystem::new(Family::A, 2).unwrap();
        let v = VarTable::from_names(["x1", "x2", "x3", "q1"]).unwrap();
        let f = Polynomial::parse("x1 + q1", &v).unwrap();
        let swap = SignedPermutation::transposition(3, 0, 1);
        assert!(matches!(
            a2.weyl_action(&swap, &f),
            Err(Error::ForbiddenVariable(ref n)) if n == "q1"
        ));
        // unused foreign variables in the table are fine
        let g = Polynomial::parse("x1", &v).unwrap();
        assert_eq!(a2.weyl_action(&swap, &g).unwrap(), Polynomial::parse("x2", &v).unwrap());
    }
}
