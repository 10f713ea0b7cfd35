//! Normal-ordered operators `Σ c · Q^a ℏ^b P^m` with `[P_i, Q_j] = δ_ij ℏ Q_j`,
//! the quantum Hamiltonian, and quantisation of classical integrals by
//! solving for the commutant of the Hamiltonian.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lax::pq_table;
use crate::poly::{linear_solve, LinearSolution, Monomial, Polynomial, Rational, VarTable};
use crate::rootdata::RootSystem;

/// Exponents of one normal-ordered term `Q^a ℏ^b P^m`. The derived order is
/// the canonical `(a, b, m)` lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub a: Vec<u32>,
    pub b: u32,
    pub m: Vec<u32>,
}

impl OpKey {
    pub fn degree(&self) -> u32 {
        2 * self.a.iter().sum::<u32>() + self.b + self.m.iter().sum::<u32>()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp {
    rank: usize,
    terms: BTreeMap<OpKey, Rational>,
}

impl WeylOp {
    pub fn zero(rank: usize) -> Self {
        WeylOp {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(rank: usize, key: OpKey, c: Rational) -> Self {
        assert!(key.a.len() == rank && key.m.len() == rank, "term rank");
        let mut op = WeylOp::zero(rank);
        op.add_term(key, c);
        op
    }

    pub fn constant(rank: usize, c: Rational) -> Self {
        WeylOp::term(
            rank,
            OpKey {
                a: vec![0; rank],
                b: 0,
                m: vec![0; rank],
            },
            c,
        )
    }

    pub fn one(rank: usize) -> Self {
        WeylOp::constant(rank, Rational::one())
    }

    /// `Q_j` (0-based `j`), multiplication by `exp t_j`.
    pub fn q(rank: usize, j: usize) -> Self {
        let mut a = vec![0; rank];
        a[j] = 1;
        WeylOp::term(
            rank,
            OpKey {
                a,
                b: 0,
                m: vec![0; rank],
            },
            Rational::one(),
        )
    }

    /// `P_i` (0-based `i`), the operator `ℏ ∂/∂t_i`.
    pub fn p(rank: usize, i: usize) -> Self {
        let mut m = vec![0; rank];
        m[i] = 1;
        WeylOp::term(
            rank,
            OpKey {
                a: vec![0; rank],
                b: 0,
                m,
            },
            Rational::one(),
        )
    }

    pub fn hbar(rank: usize) -> Self {
        WeylOp::term(
            rank,
            OpKey {
                a: vec![0; rank],
                b: 1,
                m: vec![0; rank],
            },
            Rational::one(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &OpKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, key: OpKey, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Degree if every term has the same weighted degree; zero has none.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(OpKey::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Largest `|a|` over the terms.
    pub fn max_shift(&self) -> u32 {
        self.terms.keys().map(|k| k.a.iter().sum()).max().unwrap_or(0)
    }

    fn check_rank(&self, other: &WeylOp) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WeylOp) -> Result<WeylOp> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> WeylOp {
        let mut out = WeylOp::zero(self.rank);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    /// Normal-ordered product, moving `P^m` past `Q^a'` by
    /// `P^m Q^a' = Q^a' Π_i (P_i + a'_i ℏ)^{m_i}`.
    pub fn op_mul(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_rank(other)?;
        let n = self.rank;
        let mut out = WeylOp::zero(n);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                // per variable: Σ_j C(m_i, j) (a'_i)^{m_i - j} ℏ^{m_i - j} P_i^j
                let mut partial: Vec<(u32, Vec<u32>, Rational)> = vec![(0, Vec::new(), c1 * c2)];
                for i in 0..n {
                    let mi = k1.m[i];
                    let ai = k2.a[i];
                    let mut next = Vec::new();
                    for (hb, ms, c) in &partial {
                        if ai == 0 || mi == 0 {
                            let mut ms = ms.clone();
                            ms.push(mi + k2.m[i]);
                            next.push((*hb, ms, c.clone()));
                            continue;
                        }
                        let mut binom = Rational::one();
                        for j in (0..=mi).rev() {
                            // binom = C(mi, j)
                            let shift = mi - j;
                            let coef =
                                c * &binom * Rational::from_integer(num::pow(num::BigInt::from(ai), shift as usize));
                            let mut ms = ms.clone();
                            ms.push(j + k2.m[i]);
                            next.push((hb + shift, ms, coef));
                            if j > 0 {
                                binom = binom * Rational::from_integer(j.into())
                                    / Rational::from_integer((mi - j + 1).into());
                            }
                        }
                    }
                    partial = next;
                }
                let a: Vec<u32> = k1.a.iter().zip(&k2.a).map(|(x, y)| x + y).collect();
                for (hb, m, c) in partial {
                    out.add_term(
                        OpKey {
                            a: a.clone(),
                            b: k1.b + k2.b + hb,
                            m,
                        },
                        c,
                    );
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp> {
        self.op_mul(other)?.checked_sub(&other.op_mul(self)?)
    }

    /// Principal symbol: drop ℏ-divisible terms, `Q^a P^m ↦ q^a p^m`, over
    /// `p1..pl, q1..ql`.
    pub fn symbol(&self) -> Polynomial {
        let vars = pq_table(self.rank);
        Polynomial::from_terms(
            &vars,
            self.terms.iter().filter(|(k, _)| k.b == 0).map(|(k, c)| {
                let mut e = k.m.clone();
                e.extend_from_slice(&k.a);
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    }

    /// Reduction modulo the `Q`'s: `ℏ^b P^m ↦ h^b p^m` over `p1..pl, h`.
    pub fn mod_q(&self) -> Polynomial {
        let vars = p_h_table(self.rank);
        Polynomial::from_terms(
            &vars,
            self.terms
                .iter()
                .filter(|(k, _)| k.a.iter().all(|&x| x == 0))
                .map(|(k, c)| {
                    let mut e = k.m.clone();
                    e.push(k.b);
                    (Monomial::from_exponents(e), c.clone())
                }),
        )
    }

    /// Operator with the same coefficients as a polynomial in `p*, q*`
    /// (each `q^a p^m` becomes the normal-ordered `Q^a P^m`).
    pub fn from_classical(rank: usize, poly: &Polynomial) -> Result<WeylOp> {
        let f = poly.embed(&pq_table(rank))?;
        let mut out = WeylOp::zero(rank);
        for (mono, c) in f.terms() {
            let e = mono.exponents();
            out.add_term(
                OpKey {
                    a: e[rank..].to_vec(),
                    b: 0,
                    m: e[..rank].to_vec(),
                },
                c.clone(),
            );
        }
        Ok(out)
    }
}

/// `p1..pl, h`, all of weight 1.
pub fn p_h_table(rank: usize) -> Arc<VarTable> {
    let names: Vec<(String, u32)> = (1..=rank)
        .map(|i| (format!("p{i}"), 1))
        .chain(std::iter::once(("h".to_string(), 1)))
        .collect();
    VarTable::new(names).unwrap()
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            let mut push = |name: String, e: u32| match e {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{e}")),
            };
            for (j, &e) in k.a.iter().enumerate() {
                push(format!("q{}", j + 1), e);
            }
            push("h".into(), k.b);
            for (i, &e) in k.m.iter().enumerate() {
                push(format!("P{}", i + 1), e);
            }
            if factors.is_empty() {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{} * {}", c.abs(), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({self})")
    }
}

/// `Ĥ = Σ_ij G_ij P_i P_j − Σ_i c_i Q_i`.
pub fn build_hamiltonian(rs: &RootSystem) -> WeylOp {
    let n = rs.rank();
    let mut h = WeylOp::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut m = vec![0; n];
            m[i] += 1;
            m[j] += 1;
            h.add_term(OpKey { a: vec![0; n], b: 0, m }, rs.gram()[i][j].clone());
        }
        let mut a = vec![0; n];
        a[i] = 1;
        h.add_term(OpKey { a, b: 0, m: vec![0; n] }, -rs.diag()[i].clone());
    }
    h
}

/// All keys of weighted degree `k`.
fn keys_of_degree(rank: usize, k: u32) -> Vec<OpKey> {
    fn compositions(n: usize, total: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
        if cur.len() + 1 == n {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=total {
            cur.push(x);
            compositions(n, total - x, out, cur);
            cur.pop();
        }
    }
    let vectors = |total: u32| {
        let mut out = Vec::new();
        compositions(rank, total, &mut out, &mut Vec::new());
        out
    };
    let mut keys = Vec::new();
    for qa in 0..=k / 2 {
        for b in 0..=k - 2 * qa {
            let pm = k - 2 * qa - b;
            for a in vectors(qa) {
                for m in vectors(pm) {
                    keys.push(OpKey { a: a.clone(), b, m });
                }
            }
        }
    }
    keys.sort();
    keys
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quantization {
    /// Particular solution with every free unknown set to zero.
    pub representative: WeylOp,
    /// Directions spanning the solution space (each commutes with `Ĥ`).
    pub directions: Vec<WeylOp>,
    /// Number of unknown coefficients in the ansatz.
    pub unknowns: usize,
}

impl Quantization {
    pub fn dimension(&self) -> usize {
        self.directions.len()
    }
}

/// Find `D` of the input's weighted degree with symbol `u`, `[D, Ĥ] = 0`,
/// and no ℏ-dependence in its `Q`-free part.
///
/// The `ℏ`-free terms of `D` are fixed by the symbol and the `Q`-free,
/// ℏ-divisible terms vanish; the remaining coefficients (terms with both
/// `Q` and `ℏ`) are solved for exactly.
pub fn quantize_integral(rs: &RootSystem, u: &Polynomial) -> Result<Quantization> {
    let n = rs.rank();
    let u = u.embed(&pq_table(n))?;
    let k = match u.homogeneous_degree() {
        Some(k) => k,
        None if u.is_zero() => return Err(Error::InvalidArgument("cannot quantise zero".into())),
        None => return Err(Error::NotHomogeneous),
    };
    let ham = build_hamiltonian(rs);
    let base = WeylOp::from_classical(n, &u)?;
    let unknown_keys: Vec<OpKey> = keys_of_degree(n, k)
        .into_iter()
        .filter(|key| key.b > 0 && key.a.iter().any(|&x| x > 0))
        .collect();

    let base_comm = base.commutator(&ham)?;
    let cols: Vec<WeylOp> = unknown_keys
        .iter()
        .map(|key| WeylOp::term(n, key.clone(), Rational::one()).commutator(&ham))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<&OpKey, usize> = BTreeMap::new();
    for op in std::iter::once(&base_comm).chain(cols.iter()) {
        for key in op.terms.keys() {
            let next = rows.len();
            rows.entry(key).or_insert(next);
        }
    }
    let mut a = vec![vec![Rational::zero(); cols.len()]; rows.len()];
    let mut b = vec![Rational::zero(); rows.len()];
    for (j, op) in cols.iter().enumerate() {
        for (key, c) in &op.terms {
            a[rows[key]][j] = c.clone();
        }
    }
    for (key, c) in &base_comm.terms {
        b[rows[key]] = -c.clone();
    }
    let sol = match linear_solve(&a, &b)? {
        LinearSolution::Solved(s) => s,
        LinearSolution::Infeasible => {
            return Err(Error::Infeasible(format!(
                "no operator of degree {k} with symbol {u} commutes with the Hamiltonian"
            )))
        }
    };
    let combine = |coeffs: &[Rational]| {
        let mut op = WeylOp::zero(n);
        for (key, c) in unknown_keys.iter().zip(coeffs) {
            op.add_term(key.clone(), c.clone());
        }
        op
    };
    let representative = base.checked_add(&combine(&sol.particular))?;
    debug_assert!(representative.commutator(&ham).unwrap().is_zero());
    Ok(Quantization {
        representative,
        directions: sol.nullspace.iter().map(|v| combine(v)).collect(),
        unknowns: unknown_keys.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommuteVerdict {
    pub commute: bool,
    /// First failing pair `(i, j)` and their commutator in text form.
    pub witness: Option<(usize, usize, String)>,
}

pub fn pairwise_commute_check(ops: &[WeylOp]) -> Result<CommuteVerdict> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let c = ops[i].commutator(&ops[j])?;
            if !c.is_zero() {
                return Ok(CommuteVerdict {
                    commute: false,
                    witness: Some((i, j, c.to_string())),
                });
            }
        }
    }
    Ok(CommuteVerdict {
        commute: true,
        witness: None,
    })
}
