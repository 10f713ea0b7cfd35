use std::collections::HashMap;
use std::sync::Arc;

use super::polynomial::Polynomial;
use super::vars::{same_table, VarTable};
use crate::error::{Error, Result};

/// Dense matrix of polynomials over one variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    vars: Arc<VarTable>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(vars: &Arc<VarTable>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            vars: vars.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(vars); rows * cols],
        }
    }

    pub fn from_rows(vars: &Arc<VarTable>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for e in row {
                if !same_table(e.vars(), vars) {
                    return Err(Error::VarTableMismatch);
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix {
            vars: vars.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert!(same_table(p.vars(), &self.vars));
        self.entries[i * self.cols + j] = p;
    }

    pub fn trace(&self) -> Polynomial {
        let mut t = Polynomial::zero(&self.vars);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.vars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Same entries re-expressed over `target` (variables matched by name).
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<PolyMatrix> {
        Ok(PolyMatrix {
            vars: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.embed(target)).collect::<Result<_>>()?,
        })
    }

    /// Determinant by Laplace expansion along rows, memoising minors by the
    /// set of columns still available. Sound for up to 63 columns; cost is
    /// `O(2^n * n)` polynomial products.
    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.vars));
        }
        assert!(n < 64, "determinant size limit");
        // minors[mask] = det of rows (n - |mask|)..n with the columns in mask
        let mut minors: HashMap<u64, Polynomial> = HashMap::new();
        minors.insert(0, Polynomial::one(&self.vars));
        let mut layer: Vec<u64> = vec![0];
        for size in 1..=n {
            let row = n - size;
            let mut next: Vec<u64> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for &mask in &layer {
                for j in 0..n {
                    if mask & (1 << j) == 0 {
                        let m = mask | (1 << j);
                        if seen.insert(m) {
                            next.push(m);
                        }
                    }
                }
            }
            for &mask in &next {
                let mut acc = Polynomial::zero(&self.vars);
                let mut pos = 0usize;
                for j in 0..n {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let a = self.get(row, j);
                    if !a.is_zero() {
                        let sub = &minors[&(mask & !(1 << j))];
                        if !sub.is_zero() {
                            let prod = a * sub;
                            acc = if pos.is_multiple_of(2) {
                                &acc + &prod
                            } else {
                                &acc - &prod
                            };
                        }
                    }
                    pos += 1;
                }
                minors.insert(mask, acc);
            }
            // minors of the previous layer are no longer needed
            for m in &layer {
                if size > 1 {
                    minors.remove(m);
                }
            }
            layer = next;
        }
        Ok(minors.remove(&((1u64 << n) - 1)).unwrap())
    }

    /// `det(t * Id + self)` with `t` a new variable appended to the table.
    ///
    /// Returns the coefficients of `t^0, t^1, ..., t^n` as polynomials over
    /// the original table.
    pub fn char_poly(&self, t: &str) -> Result<Vec<Polynomial>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.vars.index_of(t).is_some() {
            return Err(Error::DuplicateVariable(t.to_string()));
        }
        let ext = self.vars.extended([(t, 1)])?;
        let ti = ext.len() - 1;
        let mut m = self.embed(&ext)?;
        let tv = Polynomial::var_at(&ext, ti);
        for i in 0..self.rows {
            let e = m.get(i, i) + &tv;
            m.set(i, i, e);
        }
        let det = m.determinant()?;
        let mut coeffs = vec![Polynomial::zero(&self.vars); self.rows + 1];
        let mut buckets: Vec<Vec<_>> = vec![Vec::new(); self.rows + 1];
        for (mono, c) in det.terms() {
            let k = mono.exponents()[ti] as usize;
            let mut e = mono.exponents().to_vec();
            e.pop();
            buckets[k].push((super::Monomial::from_exponents(e), c.clone()));
        }
        for (k, b) in buckets.into_iter().enumerate() {
            coeffs[k] = Polynomial::from_terms(&self.vars, b);
        }
        Ok(coeffs)
    }
}
