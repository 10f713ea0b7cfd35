//! Series solution `s = Σ_d s^(d) e^{dt}` of the quantum differential
//! equation and residuals of operators applied to it.
//!
//! Coefficients live in the classical quotient ring (relations at `q = 0`,
//! `p`-coordinates) tensored with Laurent polynomials in `ℏ`. An operator
//! `Q^a ℏ^b P^m` sends sector `d - a` to sector `d`, with `P_i` acting as
//! multiplication by `p_i + ℏ (d - a)_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{format_monomial, GroebnerBasis, Polynomial, Rational, VarTable};
use crate::qhring::{build_presentation, Coords};
use crate::rootdata::{Family, RootSystem};
use crate::weyl::WeylOp;

/// Finite sum `Σ_e c_e ℏ^e` with `c_e` reduced classical classes.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentH {
    vars: Arc<VarTable>,
    terms: BTreeMap<i32, Polynomial>,
}

impl LaurentH {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        LaurentH {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        LaurentH::monomial(Polynomial::one(vars), 0)
    }

    pub fn monomial(c: Polynomial, e: i32) -> Self {
        let mut out = LaurentH::zero(c.vars());
        out.add(e, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(ℏ-exponent, coefficient)` pairs, ascending in the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Polynomial)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, e: i32) -> Polynomial {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add(&mut self, e: i32, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn plus(&self, other: &LaurentH) -> LaurentH {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LaurentH {
        let mut out = LaurentH::zero(&self.vars);
        for (e, p) in &self.terms {
            out.add(*e, p.scale(c));
        }
        out
    }

    pub fn shift(&self, k: i32) -> LaurentH {
        LaurentH {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Multiply by a class and reduce.
    pub fn mul_class(&self, f: &Polynomial, gb: &GroebnerBasis) -> Result<LaurentH> {
        let mut out = LaurentH::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add(*e, gb.normal_form(&(c * f))?);
        }
        Ok(out)
    }

    /// Weighted degree of every term with `deg ℏ = 1`, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.iter().flat_map(|(e, c)| {
            let w = self.vars.weights();
            c.terms()
                .map(move |(m, _)| m.weighted_degree(&w) as i64 + *e as i64)
                .collect::<Vec<_>>()
        });
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for LaurentH {
    /// Terms by descending ℏ-exponent, each coefficient in canonical order,
    /// e.g. `h^-2 - 2*p1*h^-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = crate::poly::MonomialOrder::grevlex(&self.vars);
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let h = match *e {
                0 => String::new(),
                1 => "h".to_string(),
                e => format!("h^{e}"),
            };
            for (m, coef) in c.sorted_terms(&order) {
                let neg = coef.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut factors: Vec<String> = Vec::new();
                let mono = format_monomial(&self.vars, m);
                if !mono.is_empty() {
                    factors.push(mono);
                }
                if !h.is_empty() {
                    factors.push(h.clone());
                }
                let abs = coef.abs();
                if factors.is_empty() {
                    write!(f, "{abs}")?;
                } else if abs.is_one() {
                    write!(f, "{}", factors.join("*"))?;
                } else {
                    write!(f, "{abs}*{}", factors.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentH({self})")
    }
}

#[derive(Clone, Debug)]
pub struct SeriesSolution {
    rs: RootSystem,
    cutoff: u32,
    classical: GroebnerBasis,
    sectors: BTreeMap<Vec<u32>, LaurentH>,
}

/// Multi-degrees `d ≥ 0` with `|d| = k`, lexicographically ascending.
fn degrees_of_size(rank: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(rank: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == rank {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(rank, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(rank, k, &mut Vec::new(), &mut out);
    out
}

/// Solve the recursion
/// `ℏ (a ℏ + L) s^(d) = Σ_{d_i > 0} c_i s^(d - a_i)`
/// with `a = dᵀ G d` and `L` multiplication by `2 Σ d_i G_ij p_j`, inverting
/// `a ℏ + L` by a finite geometric series (`L` is nilpotent).
pub fn solve_series(rs: &RootSystem, cutoff: u32) -> Result<SeriesSolution> {
    let pres = build_presentation(rs, Coords::P)?;
    let gb = pres.classical_groebner().clone();
    let vars = gb.vars().clone();
    let n = rs.rank();
    let g = rs.gram();
    let c = rs.diag();
    let mut sectors: BTreeMap<Vec<u32>, LaurentH> = BTreeMap::new();
    sectors.insert(vec![0; n], LaurentH::one(&vars));
    for k in 1..=cutoff {
        for d in degrees_of_size(n, k) {
            let mut rhs = LaurentH::zero(&vars);
            for i in 0..n {
                if d[i] > 0 {
                    let mut src = d.clone();
                    src[i] -= 1;
                    rhs = rhs.plus(&sectors[&src].scale(&c[i]));
                }
            }
            let mut a = Rational::zero();
            let mut l = Polynomial::zero(&vars);
            for i in 0..n {
                for j in 0..n {
                    let dij = Rational::from_integer((d[i] * d[j]).into());
                    a += &dij * &g[i][j];
                    let coef = &g[i][j] * Rational::from_integer((2 * d[i]).into());
                    l = &l + &Polynomial::var_at(&vars, j).scale(&coef);
                }
            }
            debug_assert!(a.is_positive());
            // s = Σ_k (-1)^k L^k rhs / (a^{k+1} ℏ^{k+2})
            let mut s = LaurentH::zero(&vars);
            let mut term = rhs;
            let mut scale = a.recip();
            let mut step = 0i32;
            while !term.is_zero() {
                s = s.plus(&term.scale(&scale).shift(-(step + 2)));
                term = term.mul_class(&l, &gb)?;
                scale = -scale / &a;
                step += 1;
            }
            sectors.insert(d, s);
        }
    }
    Ok(SeriesSolution {
        rs: rs.clone(),
        cutoff,
        classical: gb,
        sectors,
    })
}

impl SeriesSolution {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.classical.vars()
    }

    pub fn classical(&self) -> &GroebnerBasis {
        &self.classical
    }

    pub fn get(&self, d: &[u32]) -> Option<&LaurentH> {
        self.sectors.get(d)
    }

    /// Sectors sorted by `(|d|, d)`.
    pub fn sectors(&self) -> Vec<(&[u32], &LaurentH)> {
        let mut v: Vec<_> = self.sectors.iter().map(|(d, s)| (d.as_slice(), s)).collect();
        v.sort_by_key(|(d, _)| (d.iter().sum::<u32>(), d.to_vec()));
        v
    }

    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc {
            family: self.rs.family(),
            rank: self.rs.rank(),
            cutoff: self.cutoff,
            sectors: self
                .sectors()
                .into_iter()
                .map(|(d, s)| SectorDoc {
                    d: d.to_vec(),
                    value: s.to_string(),
                })
                .collect(),
        }
    }

    /// Residual of `op · s` in every sector `d` with `|d| ≤ cutoff − max_shift(op)`,
    /// sorted by `(|d|, d)`.
    pub fn apply_operator(&self, op: &WeylOp) -> Result<Vec<(Vec<u32>, LaurentH)>> {
        let n = self.rs.rank();
        if op.rank() != n {
            return Err(Error::RankMismatch(op.rank(), n));
        }
        let shift = op.max_shift();
        if shift > self.cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                shift,
            });
        }
        let vars = self.vars().clone();
        let mut out = Vec::new();
        for k in 0..=self.cutoff - shift {
            for d in degrees_of_size(n, k) {
                let mut acc = LaurentH::zero(&vars);
                for (key, c) in op.terms() {
                    if key.a.iter().zip(&d).any(|(a, di)| a > di) {
                        continue;
                    }
                    let src: Vec<u32> = d.iter().zip(&key.a).map(|(di, a)| di - a).collect();
                    let mut v = self.sectors[&src].clone();
                    for i in 0..n {
                        let factor = Polynomial::var_at(&vars, i);
                        let e = Rational::from_integer(src[i].into());
                        for _ in 0..key.m[i] {
                            // (p_i + ℏ e) v
                            v = v.mul_class(&factor, &self.classical)?.plus(&v.scale(&e).shift(1));
                        }
                    }
                    acc = acc.plus(&v.scale(c).shift(key.b as i32));
                }
                out.push((d, acc));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorDoc {
    pub d: Vec<u32>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesDoc {
    pub family: Family,
    pub rank: usize,
    pub cutoff: u32,
    pub sectors: Vec<SectorDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilationVerdict {
    pub operator: String,
    pub annihilates: bool,
    pub sectors_checked: usize,
    /// First sector with a nonzero residual and that residual.
    pub witness: Option<SectorDoc>,
}

/// Whether each operator kills the series in every checkable sector.
pub fn check_annihilation(series: &SeriesSolution, ops: &[WeylOp]) -> Result<Vec<AnnihilationVerdict>> {
    ops.iter()
        .map(|op| {
            let res = series.apply_operator(op)?;
            let witness = res.iter().find(|(_, r)| !r.is_zero()).map(|(d, r)| SectorDoc {
                d: d.clone(),
                value: r.to_string(),
            });
            Ok(AnnihilationVerdict {
                operator: op.to_string(),
                annihilates: witness.is_none(),
                sectors_checked: res.len(),
                witness,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::build_hamiltonian;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(f, n).unwrap()
    }

    #[test]
    fn a1_first_sector() {
        let s = solve_series(&rs(Family::A, 1), 2).unwrap();
        assert_eq!(s.get(&[0]).unwrap().to_string(), "1");
        assert_eq!(s.get(&[1]).unwrap().to_string(), "h^-2 - 2*p1*h^-3");
    }

    #[test]
    fn sector_order_and_doc() {
        let s = solve_series(&rs(Family::A, 2), 2).unwrap();
        let ds: Vec<Vec<u32>> = s.sectors().iter().map(|(d, _)| d.to_vec()).collect();
        assert_eq!(
            ds,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(s.to_doc().sectors[0].value, "1");
    }

    #[test]
    fn hamiltonian_annihilates() {
        for (f, n, cutoff) in [(Family::A, 1, 4), (Family::A, 2, 3), (Family::B, 2, 2)] {
            let r = rs(f, n);
            let s = solve_series(&r, cutoff).unwrap();
            let v = check_annihilation(&s, &[build_hamiltonian(&r)]).unwrap();
            assert!(v[0].annihilates, "{f}{n}: {:?}", v[0].witness);
            assert!(v[0].sectors_checked > 0);
        }
    }

    #[test]
    fn trivial_operators() {
        let s = solve_series(&rs(Family::A, 1), 2).unwrap();
        let id = s.apply_operator(&WeylOp::one(1)).unwrap();
        for (d, r) in &id {
            assert_eq!(r, s.get(d).unwrap());
        }
        let q = s.apply_operator(&WeylOp::q(1, 0)).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q[0].1.is_zero());
        assert_eq!(q[1].1.to_string(), "1");
        let v = check_annihilation(&s, &[WeylOp::p(1, 0)]).unwrap();
        assert!(!v[0].annihilates);
        assert_eq!(v[0].witness.as_ref().unwrap().d, vec![0]);
        assert_eq!(v[0].witness.as_ref().unwrap().value, "p1");
    }

    #[test]
    fn cutoff_too_small() {
        let s = solve_series(&rs(Family::A, 1), 0).unwrap();
        assert!(matches!(
            s.apply_operator(&WeylOp::q(1, 0)),
            Err(Error::CutoffTooSmall { cutoff: 0, shift: 1 })
        ));
    }

    #[test]
    fn sectors_are_homogeneous() {
        let r = rs(Family::A, 2);
        let s = solve_series(&r, 3).unwrap();
        for (d, v) in s.sectors() {
            let k: u32 = d.iter().sum();
            if k == 0 {
                continue;
            }
            assert_eq!(v.homogeneous_degree(), Some(-2 * k as i64));
            let top = r.positive_roots() as i32;
            assert!(v.max_exponent().unwrap() <= -2 * k as i32);
            assert!(v.min_exponent().unwrap() >= -2 * k as i32 - top);
        }
    }
}
