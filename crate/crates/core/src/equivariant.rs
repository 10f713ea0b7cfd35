//! Type-A equivariant presentations: relations `J_v(p, q) − J_v(u, 0)` with
//! equivariant parameters `u1..un`, and the projective-line example.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lax::{build_lax, conserved_quantities};
use crate::poly::{int, GroebnerBasis, Polynomial, Rational, VarTable};
use crate::qhring::{build_presentation, variable_docs, Coords, Presentation, VariableDoc};
use crate::rootdata::{Family, RootSystem};

/// Largest supported rank.
pub const MAX_RANK: usize = 4;

#[derive(Clone, Debug)]
pub struct EquivariantPresentation {
    base: Presentation,
    vars: Arc<VarTable>,
    relations: Vec<Polynomial>,
}

/// `J_v(X(p, q)) − J_v(X(u, 0))`: the second term is the same conserved
/// quantity on the `q = 0` Lax matrix with `p` replaced by `u`, so for
/// `n = 1` it is built on `diag(u1, −u1)`.
pub fn build_equivariant(rs: &RootSystem) -> Result<EquivariantPresentation> {
    if rs.family() != Family::A {
        return Err(Error::UnsupportedFamily(rs.family()));
    }
    let n = rs.rank();
    if n > MAX_RANK {
        return Err(Error::InvalidRank {
            family: rs.family(),
            rank: n,
            reason: "equivariant presentations support rank at most 4",
        });
    }
    let base = build_presentation(rs, Coords::P)?;
    let vars = base.vars().extended((1..=n).map(|i| (format!("u{i}"), 1)))?;
    let native = conserved_quantities(&build_lax(rs)).items;
    // p_i ↦ u_i, q_j ↦ 0
    let images: Vec<Polynomial> = (0..n)
        .map(|i| Polynomial::var_at(&vars, 2 * n + i))
        .chain((0..n).map(|_| Polynomial::zero(&vars)))
        .collect();
    let relations = native
        .iter()
        .map(|j| Ok(&j.embed(&vars)? - &j.compose(&vars, &images)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantPresentation { base, vars, relations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivariantDoc {
    pub family: Family,
    pub rank: usize,
    pub variables: Vec<VariableDoc>,
    pub relations: Vec<String>,
    pub weyl_order: u64,
    pub poincare: String,
    pub equivariant_variables: Vec<VariableDoc>,
    pub equivariant_relations: Vec<String>,
}

impl EquivariantPresentation {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    /// `p*, q*, u*`.
    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    fn rank(&self) -> usize {
        self.base.root_system().rank()
    }

    fn u_index(&self, i: usize) -> usize {
        2 * self.rank() + i
    }

    /// Relations with every `u` set to zero, moved to the base table.
    pub fn at_u_zero(&self) -> Result<Vec<Polynomial>> {
        let zeros: Vec<(usize, Rational)> = (0..self.rank()).map(|i| (self.u_index(i), int(0))).collect();
        self.relations
            .iter()
            .map(|r| r.specialize(&zeros).embed(self.base.vars()))
            .collect()
    }

    /// Whether the `u = 0` relations are exactly the base generators.
    pub fn recovers_base(&self) -> Result<bool> {
        Ok(self.at_u_zero()? == self.base.relations())
    }

    /// Quotient dimension in `p` at `q = 0` and the given parameter values.
    pub fn dimension_at(&self, u: &[Rational]) -> Result<usize> {
        let n = self.rank();
        if u.len() != n {
            return Err(Error::DimensionMismatch(format!("{} u-values for rank {n}", u.len())));
        }
        let values: Vec<(usize, Rational)> = (0..n)
            .map(|j| (n + j, int(0)))
            .chain(u.iter().enumerate().map(|(i, v)| (self.u_index(i), v.clone())))
            .collect();
        let rels = self
            .relations
            .iter()
            .map(|r| r.specialize(&values).embed(self.base.classical_vars()))
            .collect::<Result<Vec<_>>>()?;
        GroebnerBasis::grevlex(&rels)?.quotient_dimension()
    }

    /// Dimensions at `q = 0` for `samples` seeded random rational `u`.
    pub fn parameter_probe(&self, samples: usize, seed: u64) -> Result<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let u: Vec<Rational> = (0..self.rank())
                    .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into()))
                    .collect();
                self.dimension_at(&u)
            })
            .collect()
    }

    pub fn to_doc(&self) -> EquivariantDoc {
        let base = self.base.to_doc();
        let n = self.rank();
        EquivariantDoc {
            family: base.family,
            rank: base.rank,
            variables: base.variables,
            relations: base.relations,
            weyl_order: base.weyl_order,
            poincare: base.poincare,
            equivariant_variables: variable_docs(&self.vars)[2 * n..].to_vec(),
            equivariant_relations: self.relations.iter().map(|r| r.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1Report {
    pub relation: String,
    pub x0: String,
    pub x_infinity: String,
    /// Identification used for the two fixed-point classes.
    pub convention: String,
    /// `(relation) = (X0·X∞ − q1)` as ideals.
    pub factorization: bool,
    /// At `q1 = 0` the ideal is `(X0·X∞)`.
    pub q_zero: bool,
    /// At `u1 = 0` the ideal is `(p1^2 − q1)`.
    pub u_zero: bool,
}

impl P1Report {
    pub fn passed(&self) -> bool {
        self.factorization && self.q_zero && self.u_zero
    }
}

fn same_ideal(a: &Polynomial, b: &Polynomial) -> Result<bool> {
    let ga = GroebnerBasis::grevlex(std::slice::from_ref(a))?;
    let gb = GroebnerBasis::grevlex(std::slice::from_ref(b))?;
    Ok(ga.generators() == gb.generators())
}

/// The rank-one equivariant relation against `X0 X∞ = q1` with
/// `X0 = p1 + u1`, `X∞ = p1 − u1`.
pub fn p1_example_check() -> Result<P1Report> {
    let rs = RootSystem::new(Family::A, 1)?;
    let eq = build_equivariant(&rs)?;
    let v = eq.vars().clone();
    let rel = eq.relations()[0].clone();
    let p = Polynomial::parse("p1", &v)?;
    let u = Polynomial::parse("u1", &v)?;
    let q = Polynomial::parse("q1", &v)?;
    let x0 = &p + &u;
    let xi = &p - &u;
    let product = &x0 * &xi;
    let q_idx = v.require("q1")?;
    let u_idx = v.require("u1")?;
    let factorization = same_ideal(&rel, &(&product - &q))?;
    let q_zero = same_ideal(&rel.specialize(&[(q_idx, int(0))]), &product)?;
    let u_zero = same_ideal(&rel.specialize(&[(u_idx, int(0))]), &(&p.pow(2) - &q))?;
    Ok(P1Report {
        relation: rel.to_string(),
        x0: x0.to_string(),
        x_infinity: xi.to_string(),
        convention: "X0 = p1 + u1, X_inf = p1 - u1".into(),
        factorization,
        q_zero,
        u_zero,
    })
}
