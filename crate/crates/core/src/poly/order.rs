use std::cmp::Ordering;

use super::monomial::Monomial;
use super::vars::VarTable;

/// Monomial orders used by the Gröbner engine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Weighted degree, ties broken reverse-lexicographically.
    WeightedGrevlex,
    /// Elimination order: the first `split` variables compared by weighted
    /// grevlex first, the remaining ones only on ties.
    Block { split: usize },
}

/// A concrete order over a fixed variable table.
///
/// Both supported orders are realised through an integer sort key that is
/// linear in the exponent vector, so `key(a * b) = key(a) + key(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn grevlex(vars: &VarTable) -> Self {
        MonomialOrder {
            kind: OrderKind::WeightedGrevlex,
            weights: vars.weights(),
        }
    }

    pub fn block(vars: &VarTable, split: usize) -> Self {
        assert!(split <= vars.len(), "block split beyond table length");
        MonomialOrder {
            kind: OrderKind::Block { split },
            weights: vars.weights(),
        }
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    fn block_key(&self, exps: &[u32], lo: usize, hi: usize, out: &mut Vec<i64>) {
        let wdeg: i64 = (lo..hi).map(|i| self.weights[i] as i64 * exps[i] as i64).sum();
        out.push(wdeg);
        for i in (lo..hi).rev() {
            out.push(-(exps[i] as i64));
        }
    }

    pub fn key(&self, m: &Monomial) -> Box<[i64]> {
        let exps = m.exponents();
        let n = exps.len();
        let mut out = Vec::with_capacity(n + 2);
        match self.kind {
            OrderKind::WeightedGrevlex => self.block_key(exps, 0, n, &mut out),
            OrderKind::Block { split } => {
                self.block_key(exps, 0, split, &mut out);
                self.block_key(exps, split, n, &mut out);
            }
        }
        out.into_boxed_slice()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}
