//! The quotient ring `Q[p, q] / (J_1, …, J_l)` and its checks: the quadratic
//! relation, the classical limit at `q = 0`, and freeness over `Q[q]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lax::{
    at_q_zero, build_lax, conserved_quantities, diagonal_invariants, native_table, pq_table, quadratic_relation,
    to_native_coordinates, to_p_coordinates,
};
use crate::poly::{GroebnerBasis, Monomial, MonomialOrder, Polynomial, Rational, VarTable};
use crate::rootdata::{Family, RootSystem};

/// Coordinates in which a presentation is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    /// `p*` for type A, the Lax diagonal `x*` for type B.
    Native,
    /// Fundamental-weight coordinates `p*`.
    P,
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coords::Native => "native",
            Coords::P => "p",
        })
    }
}

impl FromStr for Coords {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "native" => Ok(Coords::Native),
            "p" => Ok(Coords::P),
            _ => Err(Error::InvalidArgument(format!("unknown coordinates `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    rs: RootSystem,
    coords: Coords,
    vars: Arc<VarTable>,
    relations: Vec<Polynomial>,
    basis: GroebnerBasis,
    classical_vars: Arc<VarTable>,
    classical: GroebnerBasis,
    quadratic: Polynomial,
    quadratic_in_ideal: bool,
}

/// Build the presentation and its Gröbner bases (full ring and `q = 0`).
pub fn build_presentation(rs: &RootSystem, coords: Coords) -> Result<Presentation> {
    let n = rs.rank();
    let native = conserved_quantities(&build_lax(rs)).items;
    let use_p = rs.family() == Family::A || coords == Coords::P;
    let (vars, relations) = if use_p {
        let rels = native
            .iter()
            .map(|j| match rs.family() {
                Family::A => Ok(j.clone()),
                Family::B => to_p_coordinates(rs, j),
            })
            .collect::<Result<Vec<_>>>()?;
        (pq_table(n), rels)
    } else {
        (native_table(rs), native)
    };
    let quadratic = if use_p {
        quadratic_relation(rs)
    } else {
        to_native_coordinates(rs, &quadratic_relation(rs))?
    };
    let basis = GroebnerBasis::grevlex(&relations)?;
    let quadratic_in_ideal = basis.contains(&quadratic)?;

    let classical_vars = VarTable::new(vars.vars()[..n].iter().map(|v| (v.name.as_str(), v.weight)))?;
    let classical_rels = relations
        .iter()
        .map(|r| at_q_zero(r).embed(&classical_vars))
        .collect::<Result<Vec<_>>>()?;
    let classical = GroebnerBasis::grevlex(&classical_rels)?;

    Ok(Presentation {
        rs: rs.clone(),
        coords: if use_p { Coords::P } else { Coords::Native },
        vars,
        relations,
        basis,
        classical_vars,
        classical,
        quadratic,
        quadratic_in_ideal,
    })
}

impl Presentation {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// Effective coordinates; type A is always reported as `p`.
    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.basis
    }

    /// Table of the first `rank` variables (no `q`).
    pub fn classical_vars(&self) -> &Arc<VarTable> {
        &self.classical_vars
    }

    /// Gröbner basis of the relations at `q = 0`, over [`Self::classical_vars`].
    pub fn classical_groebner(&self) -> &GroebnerBasis {
        &self.classical
    }

    /// Quadratic relation written in this presentation's coordinates.
    pub fn quadratic(&self) -> &Polynomial {
        &self.quadratic
    }

    /// Whether the quadratic relation lies in the ideal (checked at build).
    pub fn quadratic_in_ideal(&self) -> bool {
        self.quadratic_in_ideal
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(text, &self.vars)
    }

    /// Normal form modulo the ideal; zero exactly for members.
    pub fn reduce_class(&self, f: &Polynomial) -> Result<Polynomial> {
        self.basis.normal_form(&f.embed(&self.vars)?)
    }

    pub fn quotient_multiply(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let f = f.embed(&self.vars)?;
        let g = g.embed(&self.vars)?;
        self.basis.normal_form(&(&f * &g))
    }

    /// Basis of the quotient as a module over `Q[q]`: the monomials in the
    /// first `rank` variables not divisible by any leading monomial of a
    /// Gröbner basis for the block order that eliminates those variables.
    ///
    /// Fails with [`Error::NotZeroDimensional`] when some leading monomial
    /// involves `q`, which would mean the basis is not a free one.
    pub fn module_basis(&self) -> Result<Vec<Monomial>> {
        let n = self.rs.rank();
        let order = MonomialOrder::block(&self.vars, n);
        let gb = GroebnerBasis::new(&self.relations, order)?;
        let mut lead = Vec::new();
        for m in gb.leading_monomials() {
            if m.exponents()[n..].iter().any(|&e| e > 0) {
                return Err(Error::NotZeroDimensional(format!(
                    "leading monomial {} involves q",
                    crate::poly::format_monomial(&self.vars, &m)
                )));
            }
            lead.push(Polynomial::monomial(
                &self.classical_vars,
                trim(&m, n),
                Rational::from_integer(1.into()),
            ));
        }
        GroebnerBasis::grevlex(&lead)?.standard_monomials(None)
    }

    /// Serializable summary with polynomials in canonical text form.
    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            family: self.rs.family(),
            rank: self.rs.rank(),
            variables: variable_docs(&self.vars),
            relations: self.relations.iter().map(|r| r.to_string()).collect(),
            weyl_order: self.rs.weyl_order(),
            poincare: self.rs.poincare_polynomial().to_string(),
        }
    }
}

fn trim(m: &Monomial, n: usize) -> Monomial {
    Monomial::from_exponents(m.exponents()[..n].to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableDoc {
    pub name: String,
    pub weight: u32,
}

pub(crate) fn variable_docs(vars: &VarTable) -> Vec<VariableDoc> {
    vars.vars()
        .iter()
        .map(|v| VariableDoc {
            name: v.name.clone(),
            weight: v.weight,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDoc {
    pub family: Family,
    pub rank: usize,
    pub variables: Vec<VariableDoc>,
    pub relations: Vec<String>,
    pub weyl_order: u64,
    pub poincare: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalLimitReport {
    pub dimension: usize,
    pub weyl_order: u64,
    pub poincare: String,
    pub expected_poincare: String,
    pub poincare_matches: bool,
    /// Per `J_v`: `J_v(·, 0)` in diagonal variables is fixed by every Weyl generator.
    pub weyl_invariant: Vec<bool>,
    /// Per `J_v`: the diagonal form agrees with the relation at `q = 0`.
    pub matches_relation: Vec<bool>,
}

impl ClassicalLimitReport {
    pub fn passed(&self) -> bool {
        self.dimension as u64 == self.weyl_order
            && self.poincare_matches
            && self.weyl_invariant.iter().all(|&b| b)
            && self.matches_relation.iter().all(|&b| b)
    }
}

pub fn classical_limit_report(pres: &Presentation) -> Result<ClassicalLimitReport> {
    let rs = &pres.rs;
    let counts = pres.classical.hilbert_counts()?;
    let dimension = counts.iter().sum();
    let tv = VarTable::from_names(["t"])?;
    let poincare = Polynomial::from_terms(
        &tv,
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, &c)| {
            (
                Monomial::from_exponents(vec![d as u32]),
                Rational::from_integer(c.into()),
            )
        }),
    );
    let expected = rs.poincare_polynomial();

    let gens = rs.weyl_generators();
    let mut weyl_invariant = Vec::new();
    let mut matches_relation = Vec::new();
    for (v, diag) in diagonal_invariants(rs).iter().enumerate() {
        let mut inv = true;
        for w in &gens {
            if &rs.weyl_action(w, diag)? != diag {
                inv = false;
            }
        }
        weyl_invariant.push(inv);
        let in_coords = match (rs.family(), pres.coords) {
            (Family::B, Coords::Native) => diag.embed(&pres.vars)?,
            _ => to_p_coordinates(rs, diag)?.embed(&pres.vars)?,
        };
        matches_relation.push(in_coords == at_q_zero(&pres.relations[v]));
    }

    Ok(ClassicalLimitReport {
        dimension,
        weyl_order: rs.weyl_order(),
        poincare_matches: poincare == expected,
        poincare: poincare.to_string(),
        expected_poincare: expected.to_string(),
        weyl_invariant,
        matches_relation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankSample {
    /// Values of `q1..ql` in rational text form.
    pub q: Vec<String>,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeRankReport {
    pub seed: u64,
    pub weyl_order: u64,
    /// The `q = 0` sample first, then the random ones.
    pub samples: Vec<RankSample>,
}

impl FreeRankReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.dimension as u64 == self.weyl_order)
    }

    pub fn first_mismatch(&self) -> Option<&RankSample> {
        self.samples.iter().find(|s| s.dimension as u64 != self.weyl_order)
    }
}

/// Nonzero rational with numerator in `[-9, 9]` and denominator in `[1, 4]`.
fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num: i64 = 0;
    while num == 0 {
        num = rng.gen_range(-9..=9);
    }
    let den: i64 = rng.gen_range(1..=4);
    Rational::new(num.into(), den.into())
}

/// Quotient dimension of the relations with `q` set to the given values.
pub fn specialized_dimension(pres: &Presentation, q: &[Rational]) -> Result<usize> {
    let n = pres.rs.rank();
    if q.len() != n {
        return Err(Error::DimensionMismatch(format!("{} q-values for rank {n}", q.len())));
    }
    let values: Vec<(usize, Rational)> = q.iter().enumerate().map(|(j, v)| (n + j, v.clone())).collect();
    let rels = pres
        .relations
        .iter()
        .map(|r| r.specialize(&values).embed(&pres.classical_vars))
        .collect::<Result<Vec<_>>>()?;
    GroebnerBasis::grevlex(&rels)?.quotient_dimension()
}

/// Quotient dimensions at `q = 0` and at `samples` seeded random nonzero
/// rational points.
pub fn free_rank_probe(pres: &Presentation, samples: usize, seed: u64) -> Result<FreeRankReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let n = pres.rs.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![vec![Rational::from_integer(0.into()); n]];
    for _ in 0..samples {
        points.push((0..n).map(|_| random_rational(&mut rng)).collect());
    }
    let samples = points
        .iter()
        .map(|q| {
            Ok(RankSample {
                q: q.iter().map(|v| v.to_string()).collect(),
                dimension: specialized_dimension(pres, q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeRankReport {
        seed,
        weyl_order: pres.rs.weyl_order(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn pres(f: Family, n: usize, c: Coords) -> Presentation {
        build_presentation(&RootSystem::new(f, n).unwrap(), c).unwrap()
    }

    #[test]
    fn a2_quadratic_relation_in_ideal() {
        let p = pres(Family::A, 2, Coords::Native);
        assert!(p.quadratic_in_ideal());
        let f = p.parse("2*p1^2 + 2*p2^2 - 2*p1*p2 - 2*q1 - 2*q2").unwrap();
        assert!(p.reduce_class(&f).unwrap().is_zero());
        assert!(p.reduce_class(&p.relations()[0]).unwrap().is_zero());
    }

    #[test]
    fn b2_both_coordinate_systems() {
        let native = pres(Family::B, 2, Coords::Native);
        assert_eq!(native.vars().name(0), "x1");
        assert!(native.quadratic_in_ideal());
        let pc = pres(Family::B, 2, Coords::P);
        assert_eq!(pc.vars().name(0), "p1");
        assert!(pc.quadratic_in_ideal());
        assert_eq!(pc.relations()[0], -pc.quadratic());
    }

    #[test]
    fn p1_ring() {
        let p = pres(Family::A, 1, Coords::Native);
        assert_eq!(p.relations()[0].to_string(), "-p1^2 + q1");
        let p1 = p.parse("p1").unwrap();
        assert_eq!(p.reduce_class(&p.parse("p1^2").unwrap()).unwrap().to_string(), "q1");
        assert_eq!(p.quotient_multiply(&p1, &p1).unwrap().to_string(), "q1");
        let rep = free_rank_probe(&p, 1, 0).unwrap();
        assert!(rep.passed());
        assert_eq!(specialized_dimension(&p, &[int(1)]).unwrap(), 2);
    }

    #[test]
    fn classical_reports() {
        for (f, n, dim, poin) in [
            (Family::A, 1, 2, "t + 1"),
            (Family::A, 2, 6, "t^3 + 2*t^2 + 2*t + 1"),
            (Family::B, 2, 8, "t^4 + 2*t^3 + 2*t^2 + 2*t + 1"),
        ] {
            for c in [Coords::Native, Coords::P] {
                let r = classical_limit_report(&pres(f, n, c)).unwrap();
                assert_eq!(r.dimension, dim);
                assert_eq!(r.poincare, poin);
                assert!(r.passed(), "{f}{n} {c}: {r:?}");
            }
        }
    }

    #[test]
    fn module_basis_has_weyl_order_elements() {
        assert_eq!(pres(Family::A, 2, Coords::P).module_basis().unwrap().len(), 6);
        assert_eq!(pres(Family::B, 2, Coords::P).module_basis().unwrap().len(), 8);
    }

    #[test]
    fn probe_is_deterministic() {
        let p = pres(Family::A, 2, Coords::P);
        let a = free_rank_probe(&p, 3, 7).unwrap();
        let b = free_rank_probe(&p, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.samples.len(), 4);
        assert!(a.samples[1..].iter().all(|s| s.q.iter().all(|v| v != "0")));
    }

    #[test]
    fn product_of_degree_three() {
        let p = pres(Family::A, 2, Coords::P);
        let r = p
            .quotient_multiply(&p.parse("p1").unwrap(), &p.parse("p1*p2").unwrap())
            .unwrap();
        assert_eq!(r.homogeneous_degree(), Some(3));
        let one = Polynomial::one(p.vars());
        let f = p.parse("p1^3 - q2*p2").unwrap();
        assert_eq!(p.quotient_multiply(&one, &f).unwrap(), p.reduce_class(&f).unwrap());
    }
}
