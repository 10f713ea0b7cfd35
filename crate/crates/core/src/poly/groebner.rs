//! Buchberger's algorithm with the sugar selection strategy and the
//! Gebauer–Möller pair criteria, over exact rationals.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use num::{One, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::polynomial::Polynomial;
use super::vars::{same_table, VarTable};
use super::Rational;
use crate::error::{Error, Result};

type Key = Box<[i64]>;

#[derive(Clone, Debug)]
struct Term {
    key: Key,
    mono: Monomial,
    coef: Rational,
}

/// Polynomial with terms sorted by descending order key.
type OPoly = Vec<Term>;

fn add_keys(a: &[i64], b: &[i64]) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn to_opoly(p: &Polynomial, order: &MonomialOrder) -> OPoly {
    let mut v: OPoly = p
        .terms()
        .map(|(m, c)| Term {
            key: order.key(m),
            mono: m.clone(),
            coef: c.clone(),
        })
        .collect();
    v.sort_by(|a, b| b.key.cmp(&a.key));
    v
}

fn from_opoly(p: &OPoly, vars: &Arc<VarTable>) -> Polynomial {
    Polynomial::from_terms(vars, p.iter().map(|t| (t.mono.clone(), t.coef.clone())))
}

fn make_monic(p: &mut OPoly) {
    if let Some(lc) = p.first().map(|t| t.coef.clone()) {
        if !lc.is_one() {
            let inv = lc.recip();
            for t in p.iter_mut() {
                t.coef *= &inv;
            }
        }
    }
}

/// Working polynomial during reduction: largest term is the last entry.
struct Work {
    terms: BTreeMap<Key, (Monomial, Rational)>,
}

impl Work {
    fn from_opoly(p: &OPoly) -> Self {
        Work {
            terms: p
                .iter()
                .map(|t| (t.key.clone(), (t.mono.clone(), t.coef.clone())))
                .collect(),
        }
    }

    /// `self -= c * m * g`, skipping g's leading term (assumed to cancel).
    fn sub_multiple_tail(&mut self, g: &OPoly, mkey: &[i64], m: &Monomial, c: &Rational) {
        for t in g.iter().skip(1) {
            let key = add_keys(&t.key, mkey);
            let delta = c * &t.coef;
            match self.terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((t.mono.mul(m), -delta));
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    e.get_mut().1 -= delta;
                    if e.get().1.is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }
}

/// Full reduction of `f` by `basis` (every element monic, nonzero).
fn reduce(f: Work, basis: &[&OPoly], order: &MonomialOrder) -> OPoly {
    let mut work = f;
    let mut rem: OPoly = Vec::new();
    while let Some((key, (mono, coef))) = work.terms.pop_last() {
        let reducer = basis.iter().find(|g| g[0].mono.divides(&mono));
        match reducer {
            Some(g) => {
                let q = g[0].mono.quotient_of(&mono);
                let qkey = order.key(&q);
                work.sub_multiple_tail(g, &qkey, &q, &coef);
            }
            None => rem.push(Term { key, mono, coef }),
        }
    }
    rem
}

fn s_polynomial(f: &OPoly, g: &OPoly, order: &MonomialOrder) -> Work {
    let lcm = f[0].mono.lcm(&g[0].mono);
    let mf = f[0].mono.quotient_of(&lcm);
    let mg = g[0].mono.quotient_of(&lcm);
    let kf = order.key(&mf);
    let kg = order.key(&mg);
    // both monic: S = mf*f - mg*g, leading terms cancel
    let mut w = Work { terms: BTreeMap::new() };
    for t in f.iter().skip(1) {
        w.terms.insert(add_keys(&t.key, &kf), (t.mono.mul(&mf), t.coef.clone()));
    }
    w.sub_multiple_tail(g, &kg, &mg, &Rational::one());
    w
}

/// Reduced Gröbner basis of an ideal under a fixed monomial order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: Arc<VarTable>,
    order: MonomialOrder,
    elems: Vec<OPoly>,
    gens: Vec<Polynomial>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PairRank {
    sugar: u32,
    seq: u64,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

impl GroebnerBasis {
    /// Compute the reduced Gröbner basis of `gens` under `order`.
    pub fn new(gens: &[Polynomial], order: MonomialOrder) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyIdeal)?;
        let vars = first.vars().clone();
        if gens.iter().any(|g| !same_table(g.vars(), &vars)) {
            return Err(Error::VarTableMismatch);
        }
        if order.nvars() != vars.len() {
            return Err(Error::DimensionMismatch(
                "monomial order built for another table".into(),
            ));
        }
        let weights = vars.weights();
        let wdeg = |m: &Monomial| m.weighted_degree(&weights);

        let mut basis: Vec<OPoly> = Vec::new();
        let mut sugar: Vec<u32> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: BTreeMap<PairRank, Pair> = BTreeMap::new();
        let mut seq = 0u64;

        // input polynomials are reduced against what is already there and
        // inserted one at a time, through the same update as S-polynomials
        let mut pending: VecDeque<(OPoly, u32)> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let s = g.weighted_degree().unwrap_or(0);
                (to_opoly(g, &order), s)
            })
            .collect();
        let mut sorted: Vec<_> = pending.drain(..).collect();
        sorted.sort_by_key(|(_, s)| *s);
        pending.extend(sorted);

        let mut insert = |h: OPoly,
                          s: u32,
                          basis: &mut Vec<OPoly>,
                          sugar: &mut Vec<u32>,
                          active: &mut Vec<bool>,
                          pairs: &mut BTreeMap<PairRank, Pair>| {
            let k = basis.len();
            let lm_h = h[0].mono.clone();
            // Gebauer–Möller update
            let mut cand: Vec<(usize, Monomial)> = (0..k)
                .filter(|&i| active[i])
                .map(|i| (i, basis[i][0].mono.lcm(&lm_h)))
                .collect();
            let mut kept: Vec<(usize, Monomial)> = Vec::new();
            while let Some((i, l)) = cand.pop() {
                let coprime = basis[i][0].mono.coprime(&lm_h);
                let dominated = cand.iter().chain(kept.iter()).any(|(_, l2)| l2.divides(&l));
                if coprime || !dominated {
                    kept.push((i, l));
                }
            }
            let new_pairs: Vec<(usize, Monomial)> = kept
                .into_iter()
                .filter(|(i, _)| !basis[*i][0].mono.coprime(&lm_h))
                .collect();
            pairs.retain(|_, p| {
                !(lm_h.divides(&p.lcm)
                    && basis[p.i][0].mono.lcm(&lm_h) != p.lcm
                    && basis[p.j][0].mono.lcm(&lm_h) != p.lcm)
            });
            for i in 0..k {
                if active[i] && lm_h.divides(&basis[i][0].mono) {
                    active[i] = false;
                }
            }
            basis.push(h);
            sugar.push(s);
            active.push(true);
            let mut new_pairs = new_pairs;
            new_pairs.sort_by_key(|(i, _)| *i);
            for (i, l) in new_pairs {
                let wl = wdeg(&l);
                let si = sugar[i] + wl - wdeg(&basis[i][0].mono);
                let sk = sugar[k] + wl - wdeg(&basis[k][0].mono);
                pairs.insert(PairRank { sugar: si.max(sk), seq }, Pair { i, j: k, lcm: l });
                seq += 1;
            }
        };

        loop {
            // feed any remaining input of lower sugar first
            let next_pair_sugar = pairs.keys().next().map(|r| r.sugar);
            let take_input = match (pending.front(), next_pair_sugar) {
                (Some((_, s)), Some(ps)) => *s <= ps,
                (Some(_), None) => true,
                (None, _) => false,
            };
            let (h, s) = if take_input {
                let (g, s) = pending.pop_front().unwrap();
                let act: Vec<&OPoly> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
                (reduce(Work::from_opoly(&g), &act, &order), s)
            } else if let Some((rank, pair)) = pairs.pop_first() {
                let sp = s_polynomial(&basis[pair.i], &basis[pair.j], &order);
                let act: Vec<&OPoly> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
                (reduce(sp, &act, &order), rank.sugar)
            } else {
                break;
            };
            if h.is_empty() {
                continue;
            }
            let mut h = h;
            make_monic(&mut h);
            insert(h, s, &mut basis, &mut sugar, &mut active, &mut pairs);
        }

        let elems = interreduce(
            basis
                .into_iter()
                .zip(active)
                .filter(|(_, a)| *a)
                .map(|(b, _)| b)
                .collect(),
            &order,
        );
        let gens = elems.iter().map(|e| from_opoly(e, &vars)).collect();
        Ok(GroebnerBasis {
            vars,
            order,
            elems,
            gens,
        })
    }

    /// Basis under the default weighted grevlex order of the generators' table.
    pub fn grevlex(gens: &[Polynomial]) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyIdeal)?;
        let order = MonomialOrder::grevlex(first.vars());
        Self::new(gens, order)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Reduced generators, monic, sorted by ascending leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().map(|e| e[0].mono.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.len() == 1 && self.elems[0][0].mono.is_one()
    }

    /// Complete reduction of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_table(f.vars(), &self.vars) {
            return Err(Error::VarTableMismatch);
        }
        let refs: Vec<&OPoly> = self.elems.iter().collect();
        let r = reduce(Work::from_opoly(&to_opoly(f, &self.order)), &refs, &self.order);
        Ok(from_opoly(&r, &self.vars))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        !self.elems.iter().any(|e| e[0].mono.divides(m))
    }

    /// Check that every variable has a pure power among the leading monomials.
    pub fn check_zero_dimensional(&self) -> Result<()> {
        let lms = self.leading_monomials();
        for i in 0..self.vars.len() {
            let ok = lms.iter().any(|m| m.pure_power_of() == Some(i) || m.is_one());
            if !ok {
                return Err(Error::NotZeroDimensional(self.vars.name(i).to_string()));
            }
        }
        Ok(())
    }

    /// Monomials outside the leading-term ideal, ascending in the basis order.
    ///
    /// With `max_degree = None` the full (finite) list is returned, which
    /// requires a zero-dimensional quotient; otherwise only monomials of
    /// weighted degree at most the bound.
    pub fn standard_monomials(&self, max_degree: Option<u32>) -> Result<Vec<Monomial>> {
        if max_degree.is_none() {
            self.check_zero_dimensional()?;
        }
        let n = self.vars.len();
        let weights = self.vars.weights();
        let one = Monomial::one(n);
        if !self.is_standard(&one) {
            return Ok(Vec::new());
        }
        let mut seen: HashSet<Monomial> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(one.clone());
        queue.push_back(one);
        while let Some(m) = queue.pop_front() {
            for i in 0..n {
                let next = m.mul(&Monomial::var(n, i));
                if let Some(b) = max_degree {
                    if next.weighted_degree(&weights) > b {
                        continue;
                    }
                }
                if seen.contains(&next) || !self.is_standard(&next) {
                    continue;
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        let mut out: Vec<Monomial> = seen.into_iter().collect();
        out.sort_by_key(|m| self.order.key(m));
        Ok(out)
    }

    /// Number of standard monomials in each weighted degree.
    pub fn hilbert_counts(&self) -> Result<Vec<usize>> {
        let weights = self.vars.weights();
        let mut counts: Vec<usize> = Vec::new();
        for m in self.standard_monomials(None)? {
            let d = m.weighted_degree(&weights) as usize;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Ok(counts)
    }

    pub fn quotient_dimension(&self) -> Result<usize> {
        Ok(self.standard_monomials(None)?.len())
    }

    /// Whether every S-polynomial of the stored generators reduces to zero.
    pub fn verify(&self) -> bool {
        let refs: Vec<&OPoly> = self.elems.iter().collect();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                let sp = s_polynomial(&self.elems[i], &self.elems[j], &self.order);
                if !reduce(sp, &refs, &self.order).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn interreduce(elems: Vec<OPoly>, order: &MonomialOrder) -> Vec<OPoly> {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<OPoly> = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let redundant = elems
            .iter()
            .enumerate()
            .any(|(j, f)| j != i && f[0].mono.divides(&e[0].mono) && (f[0].mono != e[0].mono || j < i));
        if !redundant {
            minimal.push(e.clone());
        }
    }
    let mut out: Vec<OPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&OPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| e)
            .collect();
        let head = minimal[i][0].clone();
        let tail = Work {
            terms: minimal[i]
                .iter()
                .skip(1)
                .map(|t| (t.key.clone(), (t.mono.clone(), t.coef.clone())))
                .collect(),
        };
        let mut r = vec![head];
        r.extend(reduce(tail, &others, order));
        make_monic(&mut r);
        out.push(r);
    }
    out.sort_by(|a, b| a[0].key.cmp(&b[0].key));
    out
}
