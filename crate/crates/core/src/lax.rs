//! Lax matrices of the dual Toda lattice and their conserved quantities.
//!
//! Family `A_n` works in fundamental-weight coordinates `p1..pn` directly.
//! Family `B_n` uses the diagonal coordinates `x1..xn` of the symplectic
//! Lax matrix; [`to_p_coordinates`] moves polynomials to `p1..pn`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{int, rat, PolyMatrix, Polynomial, VarTable};
use crate::rootdata::{Family, RootSystem};

/// Variable table of the Lax entries: `p*` (A) or `x*` (B), then `q*`.
pub fn native_table(rs: &RootSystem) -> Arc<VarTable> {
    match rs.family() {
        Family::A => VarTable::with_q("p", rs.rank()),
        Family::B => VarTable::with_q("x", rs.rank()),
    }
}

/// `p1..pn, q1..qn`.
pub fn pq_table(rank: usize) -> Arc<VarTable> {
    VarTable::with_q("p", rank)
}

#[derive(Clone, Debug)]
pub struct LaxMatrix {
    rs: RootSystem,
    matrix: PolyMatrix,
}

impl LaxMatrix {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.matrix.vars()
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

/// The Lax matrix `X(p, q)` for the dual root system of `rs`.
pub fn build_lax(rs: &RootSystem) -> LaxMatrix {
    let n = rs.rank();
    let vars = native_table(rs);
    let var = |name: String| Polynomial::var(&vars, &name).unwrap();
    let c = |k: i64| Polynomial::from_int(&vars, k);
    let matrix = match rs.family() {
        Family::A => {
            let mut m = PolyMatrix::zeros(&vars, n + 1, n + 1);
            for (i, d) in a_diagonal(&vars, n).into_iter().enumerate() {
                m.set(i, i, d);
            }
            for i in 0..n {
                m.set(i, i + 1, c(-1));
                m.set(i + 1, i, var(format!("q{}", i + 1)));
            }
            m
        }
        Family::B => {
            // blocks (A, B, C) with lower-right block -A^T
            let mut m = PolyMatrix::zeros(&vars, 2 * n, 2 * n);
            for i in 0..n {
                let x = var(format!("x{}", i + 1));
                m.set(n + i, n + i, -&x);
                m.set(i, i, x);
            }
            for i in 0..n - 1 {
                let q = var(format!("q{}", i + 1));
                m.set(i, i + 1, c(-1));
                m.set(i + 1, i, q.clone());
                m.set(n + i, n + i + 1, -&q);
                m.set(n + i + 1, n + i, c(1));
            }
            m.set(n - 1, 2 * n - 1, c(-2));
            let qn = var(format!("q{n}"));
            m.set(2 * n - 1, n - 1, &c(2) * &qn);
            m
        }
    };
    LaxMatrix { rs: rs.clone(), matrix }
}

/// Diagonal entries `p1, p2 - p1, …, pn - p(n-1), -pn` of the type-A Lax matrix.
fn a_diagonal(vars: &Arc<VarTable>, n: usize) -> Vec<Polynomial> {
    let p = |i: usize| Polynomial::var(vars, &format!("p{i}")).unwrap();
    let mut out = Vec::with_capacity(n + 1);
    out.push(p(1));
    for i in 2..=n {
        out.push(&p(i) - &p(i - 1));
    }
    out.push(-&p(n));
    out
}

/// Conserved quantities `J_1..J_l`, indexed as coefficients of `det(t + X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservedSet {
    pub family: Family,
    pub rank: usize,
    pub items: Vec<Polynomial>,
}

impl ConservedSet {
    /// Weighted degree of `J_v` (1-based `v`).
    pub fn expected_degree(family: Family, v: usize) -> u32 {
        match family {
            Family::A => v as u32 + 1,
            Family::B => 2 * v as u32,
        }
    }

    pub fn get(&self, v: usize) -> &Polynomial {
        &self.items[v - 1]
    }
}

/// Coefficients of `det(t + X)`: `J_v` multiplies `t^{n-v}` (A, size n+1)
/// or `t^{2(n-v)}` (B, size 2n).
pub fn conserved_quantities(lax: &LaxMatrix) -> ConservedSet {
    let n = lax.rs.rank();
    let coeffs = lax.matrix.char_poly("t").expect("Lax matrices are square");
    let items = match lax.rs.family() {
        Family::A => {
            debug_assert!(coeffs[n].is_zero(), "type A Lax matrix is traceless");
            (1..=n).map(|v| coeffs[n - v].clone()).collect()
        }
        Family::B => {
            debug_assert!(
                (0..n).all(|k| coeffs[2 * k + 1].is_zero()),
                "odd coefficients vanish on sp(2n)"
            );
            (1..=n).map(|v| coeffs[2 * (n - v)].clone()).collect()
        }
    };
    ConservedSet {
        family: lax.rs.family(),
        rank: n,
        items,
    }
}

/// `−J_v` in `p1..pn, q1..qn`, scaled by the normalization that turns
/// `−J_1` into [`quadratic_relation`]: 2 for type A, 1 for type B.
pub fn normalized_integrals(rs: &RootSystem) -> Result<Vec<Polynomial>> {
    let scale = match rs.family() {
        Family::A => int(-2),
        Family::B => int(-1),
    };
    conserved_quantities(&build_lax(rs))
        .items
        .iter()
        .map(|j| {
            let in_p = match rs.family() {
                Family::A => j.embed(&pq_table(rs.rank()))?,
                Family::B => to_p_coordinates(rs, j)?,
            };
            Ok(in_p.scale(&scale))
        })
        .collect()
}

/// `Σ_ij G_ij p_i p_j - Σ_i c_i q_i` over `p1..pn, q1..qn`.
pub fn quadratic_relation(rs: &RootSystem) -> Polynomial {
    let n = rs.rank();
    let vars = pq_table(n);
    let mut out = Polynomial::zero(&vars);
    for i in 0..n {
        let pi = Polynomial::var_at(&vars, i);
        for j in 0..n {
            let pj = Polynomial::var_at(&vars, j);
            out = &out + &(&pi * &pj).scale(&rs.gram()[i][j]);
        }
        out = &out - &Polynomial::var_at(&vars, n + i).scale(&rs.diag()[i]);
    }
    out
}

/// Rewrite a polynomial in diagonal variables `x*` (and `q*`) in terms of
/// `p1..pn, q1..qn`.
///
/// Type A sends `x_i` to the i-th diagonal Lax entry; type B inverts
/// `p_j = x_1 + … + x_j` (j < n), `p_n = (x_1 + … + x_n) / 2`.
pub fn to_p_coordinates(rs: &RootSystem, poly: &Polynomial) -> Result<Polynomial> {
    let n = rs.rank();
    let target = pq_table(n);
    let p = |i: usize| Polynomial::var(&target, &format!("p{i}")).unwrap();
    let x_images: Vec<Polynomial> = match rs.family() {
        Family::A => a_diagonal(&target, n),
        Family::B => {
            let mut v = vec![p(1)];
            for j in 2..n {
                v.push(&p(j) - &p(j - 1));
            }
            v.push(&p(n).scale(&int(2)) - &p(n - 1));
            v
        }
    };
    let src = poly.vars();
    let mut images = Vec::with_capacity(src.len());
    for var in src.vars() {
        let name = var.name.as_str();
        let img = if let Some(k) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            x_images.get(k.wrapping_sub(1)).cloned()
        } else if name.starts_with('q') {
            Polynomial::var(&target, name).ok()
        } else {
            None
        };
        // unused variables map to zero; used ones must be known
        images.push(img.unwrap_or_else(|| Polynomial::zero(&target)));
    }
    for i in poly.support() {
        let name = src.name(i);
        let ok = match name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            Some(k) => (1..=x_images.len()).contains(&k),
            None => name.starts_with('q') && target.index_of(name).is_some(),
        };
        if !ok {
            return Err(Error::ForbiddenVariable(name.to_string()));
        }
    }
    poly.compose(&target, &images)
}

/// Inverse of [`to_p_coordinates`] for type B: `p*` to native `x*`.
/// For type A the native coordinates are already `p*`.
pub fn to_native_coordinates(rs: &RootSystem, poly: &Polynomial) -> Result<Polynomial> {
    let n = rs.rank();
    let target = native_table(rs);
    match rs.family() {
        Family::A => poly.embed(&target),
        Family::B => {
            let x = |i: usize| Polynomial::var(&target, &format!("x{i}")).unwrap();
            let src = poly.vars();
            let mut images = Vec::with_capacity(src.len());
            for var in src.vars() {
                let name = var.name.as_str();
                let img = if let Some(k) = name.strip_prefix('p').and_then(|s| s.parse::<usize>().ok()) {
                    if (1..=n).contains(&k) {
                        let mut s = Polynomial::zero(&target);
                        for i in 1..=k {
                            s = &s + &x(i);
                        }
                        Some(if k == n { s.scale(&rat(1, 2)) } else { s })
                    } else {
                        None
                    }
                } else if name.starts_with('q') {
                    Polynomial::var(&target, name).ok()
                } else {
                    None
                };
                images.push(img);
            }
            for i in poly.support() {
                if images[i].is_none() {
                    return Err(Error::ForbiddenVariable(src.name(i).to_string()));
                }
            }
            let images: Vec<Polynomial> = images
                .into_iter()
                .map(|o| o.unwrap_or_else(|| Polynomial::zero(&target)))
                .collect();
            poly.compose(&target, &images)
        }
    }
}

/// `J_v` at `q = 0` written in the diagonal variables `x1..xN`: the
/// coefficient of the same power of `t` in `det(t + diag)`, where `diag`
/// is `diag(x1..x(n+1))` (A) or `diag(x1..xn, -x1..-xn)` (B).
pub fn diagonal_invariants(rs: &RootSystem) -> Vec<Polynomial> {
    let n = rs.rank();
    let vars = rs.diagonal_table();
    let x = |i: usize| Polynomial::var_at(&vars, i);
    let (size, entries): (usize, Vec<Polynomial>) = match rs.family() {
        Family::A => (n + 1, (0..=n).map(x).collect()),
        Family::B => (2 * n, (0..n).map(x).chain((0..n).map(|i| -&x(i))).collect()),
    };
    let mut m = PolyMatrix::zeros(&vars, size, size);
    for (i, e) in entries.into_iter().enumerate() {
        m.set(i, i, e);
    }
    let coeffs = m.char_poly("t").expect("square");
    match rs.family() {
        Family::A => (1..=n).map(|v| coeffs[n - v].clone()).collect(),
        Family::B => (1..=n).map(|v| coeffs[2 * (n - v)].clone()).collect(),
    }
}

/// Set every `q*` variable of `poly` to zero.
pub fn at_q_zero(poly: &Polynomial) -> Polynomial {
    let vars = poly.vars();
    let zeros: Vec<_> = (0..vars.len())
        .filter(|&i| vars.name(i).starts_with('q'))
        .map(|i| (i, int(0)))
        .collect();
    poly.specialize(&zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(f, n).unwrap()
    }

    fn parse(s: &str, v: &Arc<VarTable>) -> Polynomial {
        Polynomial::parse(s, v).unwrap()
    }

    #[test]
    fn a1_lax_matrix() {
        let lax = build_lax(&rs(Family::A, 1));
        let v = lax.vars().clone();
        let want = [["p1", "-1"], ["q1", "-p1"]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(lax.matrix().get(i, j), &parse(want[i][j], &v));
            }
        }
    }

    #[test]
    fn a2_lax_matrix() {
        let lax = build_lax(&rs(Family::A, 2));
        let v = lax.vars().clone();
        let want = [["p1", "-1", "0"], ["q1", "p2 - p1", "-1"], ["0", "q2", "-p2"]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lax.matrix().get(i, j), &parse(want[i][j], &v), "({i},{j})");
            }
        }
        assert!(lax.matrix().trace().is_zero());
    }

    #[test]
    fn b2_lax_matrix() {
        let lax = build_lax(&rs(Family::B, 2));
        let v = lax.vars().clone();
        let want = [
            ["x1", "-1", "0", "0"],
            ["q1", "x2", "0", "-2"],
            ["0", "0", "-x1", "-q1"],
            ["0", "2*q2", "1", "-x2"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(lax.matrix().get(i, j), &parse(want[i][j], &v), "({i},{j})");
            }
        }
    }

    #[test]
    fn b_lax_is_symplectic() {
        for n in 2..=4 {
            let lax = build_lax(&rs(Family::B, n));
            let m = lax.matrix();
            for i in 0..n {
                for j in 0..n {
                    // B and C blocks symmetric, D = -A^T
                    assert_eq!(m.get(i, n + j), m.get(j, n + i));
                    assert_eq!(m.get(n + i, j), m.get(n + j, i));
                    assert_eq!(m.get(n + i, n + j), &-m.get(j, i));
                }
            }
        }
    }

    #[test]
    fn conserved_quantities_examples() {
        let a2 = conserved_quantities(&build_lax(&rs(Family::A, 2)));
        let v = pq_table(2);
        assert_eq!(a2.items[0], parse("-p1^2 - p2^2 + p1*p2 + q1 + q2", &v));
        assert_eq!(a2.items[1], parse("p1^2*p2 - p1*p2^2 + p1*q2 - p2*q1", &v));

        let b2 = conserved_quantities(&build_lax(&rs(Family::B, 2)));
        let vb = native_table(&rs(Family::B, 2));
        assert_eq!(b2.items[0], parse("-x1^2 - x2^2 + 2*q1 + 4*q2", &vb));
        assert_eq!(b2.items[1], parse("x1^2*x2^2 - 4*q2*x1^2 + 2*q1*x1*x2 + q1^2", &vb));

        let a1 = conserved_quantities(&build_lax(&rs(Family::A, 1)));
        assert_eq!(a1.items[0], parse("q1 - p1^2", &pq_table(1)));
    }

    #[test]
    fn quadratic_relations() {
        let v2 = pq_table(2);
        assert_eq!(
            quadratic_relation(&rs(Family::A, 2)),
            parse("2*p1^2 + 2*p2^2 - 2*p1*p2 - 2*q1 - 2*q2", &v2)
        );
        assert_eq!(
            quadratic_relation(&rs(Family::A, 1)),
            parse("2*p1^2 - 2*q1", &pq_table(1))
        );
        assert_eq!(
            quadratic_relation(&rs(Family::B, 2)),
            parse("2*p1^2 + 4*p2^2 - 4*p1*p2 - 2*q1 - 4*q2", &v2)
        );
    }

    #[test]
    fn b2_coordinate_change() {
        let b2 = rs(Family::B, 2);
        let vx = native_table(&b2);
        let vp = pq_table(2);
        assert_eq!(
            to_p_coordinates(&b2, &parse("x1^2 + x2^2", &vx)).unwrap(),
            parse("2*p1^2 - 4*p1*p2 + 4*p2^2", &vp)
        );
        assert_eq!(to_p_coordinates(&b2, &parse("x1", &vx)).unwrap(), parse("p1", &vp));
        let j1 = conserved_quantities(&build_lax(&b2)).items[0].clone();
        assert_eq!(to_p_coordinates(&b2, &-&j1).unwrap(), quadratic_relation(&b2));
    }

    #[test]
    fn coordinate_round_trip() {
        for n in 2..=4 {
            let b = rs(Family::B, n);
            for j in conserved_quantities(&build_lax(&b)).items {
                let p = to_p_coordinates(&b, &j).unwrap();
                assert_eq!(to_native_coordinates(&b, &p).unwrap(), j);
            }
        }
    }

    #[test]
    fn transform_rejects_foreign_variables() {
        let b2 = rs(Family::B, 2);
        let v = VarTable::from_names(["x1", "x2", "u1"]).unwrap();
        assert!(matches!(
            to_p_coordinates(&b2, &parse("x1 + u1", &v)),
            Err(Error::ForbiddenVariable(ref n)) if n == "u1"
        ));
        let v3 = VarTable::from_names(["x1", "x2", "x3"]).unwrap();
        assert!(to_p_coordinates(&b2, &parse("x3", &v3)).is_err());
    }

    #[test]
    fn first_normalized_integral_is_the_quadratic_relation() {
        for (f, n) in [(Family::A, 1), (Family::A, 3), (Family::B, 2), (Family::B, 4)] {
            let rs = RootSystem::new(f, n).unwrap();
            assert_eq!(normalized_integrals(&rs).unwrap()[0], quadratic_relation(&rs));
        }
    }
}
