//! Classical Toda flow: exact Poisson brackets of the conserved quantities
//! and numerical integration of `H = −J_1` with drift reporting.
//!
//! Momenta `m` are the native Lax variables (`p*` for A, `x*` for B) and
//! positions `y` enter through `q_j = σ e^{y_j}`. Brackets are
//! `{m_i, q_j} = κ_ij q_j`; with `∂/∂y_j = q_j ∂/∂q_j` the equations of
//! motion are `ẏ_j = Σ_i κ_ij ∂H/∂m_i`, `ṁ_i = −Σ_j κ_ij ∂H/∂y_j`.

mod ddouble;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{ToPrimitive, Zero};
use serde::Serialize;

pub use ddouble::DoubleDouble;

use crate::error::{Error, Result};
use crate::lax::{build_lax, conserved_quantities, native_table, quadratic_relation, to_p_coordinates};
use crate::poly::{int, Polynomial, Rational};
use crate::rootdata::{Family, RootSystem};

/// Constants `κ_ij` with `{m_i, q_j} = κ_ij q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub kappa: Vec<Vec<Rational>>,
}

/// `κ = Id` for A; `κ_ij = (α_j^∨, ε_i)` for B, the dual roots written in the
/// diagonal coordinates.
pub fn bracket_table(rs: &RootSystem) -> BracketTable {
    let n = rs.rank();
    let kappa = match rs.family() {
        Family::A => (0..n).map(|i| (0..n).map(|j| int((i == j) as i64)).collect()).collect(),
        Family::B => {
            let dual = rs.dual_roots();
            (0..n).map(|i| (0..n).map(|j| dual[j][i].clone()).collect()).collect()
        }
    };
    BracketTable { kappa }
}

/// `{f, g} = Σ_ij κ_ij q_j (∂f/∂m_i ∂g/∂q_j − ∂f/∂q_j ∂g/∂m_i)` over the
/// native Lax variables.
pub fn poisson_bracket(rs: &RootSystem, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let n = rs.rank();
    let vars = native_table(rs);
    let f = f.embed(&vars)?;
    let g = g.embed(&vars)?;
    let table = bracket_table(rs);
    let mut out = Polynomial::zero(&vars);
    for i in 0..n {
        let fm = f.derivative(i);
        let gm = g.derivative(i);
        for j in 0..n {
            let k = &table.kappa[i][j];
            if k.is_zero() {
                continue;
            }
            let term = &(&fm * &g.derivative(n + j)) - &(&f.derivative(n + j) * &gm);
            let qj = Polynomial::var_at(&vars, n + j);
            out = &out + &(&qj * &term).scale(k);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketEntry {
    pub u: usize,
    pub v: usize,
    pub bracket: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservationReport {
    pub family: Family,
    pub rank: usize,
    /// `{H, J_v}` with `H = −J_1`, for every `v`.
    pub hamiltonian: Vec<BracketEntry>,
    /// `{J_u, J_v}` for `u < v`.
    pub pairs: Vec<BracketEntry>,
}

impl ConservationReport {
    pub fn passed(&self) -> bool {
        self.hamiltonian.iter().chain(&self.pairs).all(|e| e.bracket == "0")
    }
}

pub fn conservation_selfcheck(rs: &RootSystem) -> Result<ConservationReport> {
    let js = conserved_quantities(&build_lax(rs)).items;
    let h = -&js[0];
    let mut hamiltonian = Vec::new();
    for (v, j) in js.iter().enumerate() {
        hamiltonian.push(BracketEntry {
            u: 0,
            v: v + 1,
            bracket: poisson_bracket(rs, &h, j)?.to_string(),
        });
    }
    let mut pairs = Vec::new();
    for u in 0..js.len() {
        for v in u + 1..js.len() {
            pairs.push(BracketEntry {
                u: u + 1,
                v: v + 1,
                bracket: poisson_bracket(rs, &js[u], &js[v])?.to_string(),
            });
        }
    }
    Ok(ConservationReport {
        family: rs.family(),
        rank: rs.rank(),
        hamiltonian,
        pairs,
    })
}

/// The constant `κ` with `κ · (−J_1 in p-coordinates) = Σ G_ij p_i p_j − Σ c_i q_i`.
pub fn hamiltonian_normalization(rs: &RootSystem) -> Result<Rational> {
    let j1 = conserved_quantities(&build_lax(rs)).items[0].clone();
    let h = match rs.family() {
        Family::A => -&j1,
        Family::B => to_p_coordinates(rs, &-&j1)?,
    };
    let target = quadratic_relation(rs);
    let (m, c) = h
        .terms()
        .next()
        .ok_or_else(|| Error::InvalidArgument("zero Hamiltonian".into()))?;
    let k = target.coefficient(m) / c;
    if h.scale(&k) != target {
        return Err(Error::InvalidArgument(
            "Hamiltonian is not proportional to the quadratic relation".into(),
        ));
    }
    Ok(k)
}

/// Arithmetic needed by the integrators.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn from_f64(x: f64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn from_rational(r: &Rational) -> Self {
        DoubleDouble::from_rational(r)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
}

/// Polynomial flattened for repeated numeric evaluation.
#[derive(Clone, Debug)]
struct Compiled<S> {
    terms: Vec<(S, Vec<(usize, u32)>)>,
}

impl<S: Scalar> Compiled<S> {
    fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                (S::from_rational(c), factors)
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, x: &[S]) -> S {
        let mut acc = S::from_f64(0.0);
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                for _ in 0..e {
                    t = t * x[i];
                }
            }
            acc = acc + t;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Rk4,
    Leapfrog,
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::Rk4 => "rk4",
            Integrator::Leapfrog => "leapfrog",
        })
    }
}

impl FromStr for Integrator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Integrator::Rk4),
            "leapfrog" => Ok(Integrator::Leapfrog),
            _ => Err(Error::InvalidArgument(format!("unknown integrator `{s}`"))),
        }
    }
}

/// Sign `σ` in `q_j = σ e^{y_j}`.
///
/// With `σ = −1` the potential of `H = −J_1` is `+Σ c_i e^{y_i}` up to the
/// normalization, bounded below, and trajectories stay bounded. With `σ = +1`
/// the potential is unbounded below and generic trajectories reach infinity
/// in finite time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    #[default]
    Negative,
    Positive,
}

impl Chart {
    fn sign(self) -> f64 {
        match self {
            Chart::Negative => -1.0,
            Chart::Positive => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowState {
    pub m: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

impl FlowState {
    pub fn new(m: Vec<f64>, y: Vec<f64>) -> Self {
        FlowState { m, y, t: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub chart: Chart,
    pub precision: Precision,
    /// Keep the initial state and this many evenly spaced states after it
    /// (0 keeps none).
    pub samples: usize,
}

impl FlowConfig {
    pub fn new(dt: f64, t_end: f64, integrator: Integrator) -> Self {
        FlowConfig {
            dt,
            t_end,
            integrator,
            chart: Chart::default(),
            precision: Precision::default(),
            samples: 0,
        }
    }

    fn steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InitialDoc {
    pub m: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowReport {
    pub family: Family,
    pub rank: usize,
    pub integrator: Integrator,
    pub dt: f64,
    pub t_end: f64,
    pub initial: InitialDoc,
    pub max_rel_drift: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<FlowState>>,
    #[serde(skip)]
    pub final_state: FlowState,
    #[serde(skip)]
    pub steps: usize,
}

struct System<S> {
    n: usize,
    sigma: S,
    kappa: Vec<Vec<S>>,
    /// `∂H/∂m_i` and `∂H/∂q_j` over `(m, q)`.
    dh_dm: Vec<Compiled<S>>,
    dh_dq: Vec<Compiled<S>>,
    integrals: Vec<Compiled<S>>,
}

impl<S: Scalar> System<S> {
    fn new(rs: &RootSystem, chart: Chart) -> Self {
        let n = rs.rank();
        let js = conserved_quantities(&build_lax(rs)).items;
        let h = -&js[0];
        let table = bracket_table(rs);
        System {
            n,
            sigma: S::from_f64(chart.sign()),
            kappa: table
                .kappa
                .iter()
                .map(|row| row.iter().map(S::from_rational).collect())
                .collect(),
            dh_dm: (0..n).map(|i| Compiled::new(&h.derivative(i))).collect(),
            dh_dq: (0..n).map(|j| Compiled::new(&h.derivative(n + j))).collect(),
            integrals: js.iter().map(Compiled::new).collect(),
        }
    }

    fn point(&self, m: &[S], y: &[S]) -> Vec<S> {
        let mut x = m.to_vec();
        x.extend(y.iter().map(|&v| self.sigma * v.exp()));
        x
    }

    /// `(ẏ, ṁ)`.
    fn rhs(&self, m: &[S], y: &[S]) -> (Vec<S>, Vec<S>) {
        let x = self.point(m, y);
        let hm: Vec<S> = self.dh_dm.iter().map(|c| c.eval(&x)).collect();
        let hy: Vec<S> = (0..self.n).map(|j| x[self.n + j] * self.dh_dq[j].eval(&x)).collect();
        self.combine(&hm, &hy)
    }

    fn combine(&self, hm: &[S], hy: &[S]) -> (Vec<S>, Vec<S>) {
        let zero = S::from_f64(0.0);
        let mut dy = vec![zero; self.n];
        let mut dm = vec![zero; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let k = self.kappa[i][j];
                dy[j] = dy[j] + k * hm[i];
                dm[i] = dm[i] - k * hy[j];
            }
        }
        (dy, dm)
    }

    fn integrals(&self, m: &[S], y: &[S]) -> Vec<S> {
        let x = self.point(m, y);
        self.integrals.iter().map(|c| c.eval(&x)).collect()
    }

    fn rk4(&self, m: &mut [S], y: &mut [S], h: S) {
        let half = S::from_f64(0.5) * h;
        let axpy = |a: &[S], s: S, b: &[S]| -> Vec<S> { a.iter().zip(b).map(|(&u, &v)| u + s * v).collect() };
        let (ky1, km1) = self.rhs(m, y);
        let (ky2, km2) = self.rhs(&axpy(m, half, &km1), &axpy(y, half, &ky1));
        let (ky3, km3) = self.rhs(&axpy(m, half, &km2), &axpy(y, half, &ky2));
        let (ky4, km4) = self.rhs(&axpy(m, h, &km3), &axpy(y, h, &ky3));
        let sixth = h * S::from_f64(1.0 / 6.0);
        let two = S::from_f64(2.0);
        for i in 0..self.n {
            y[i] = y[i] + sixth * (ky1[i] + two * ky2[i] + two * ky3[i] + ky4[i]);
            m[i] = m[i] + sixth * (km1[i] + two * km2[i] + two * km3[i] + km4[i]);
        }
    }

    /// Kick–drift–kick; valid because `H` is quadratic in `m` plus linear in `q`.
    fn leapfrog(&self, m: &mut [S], y: &mut [S], h: S) {
        let half = S::from_f64(0.5) * h;
        let (_, dm) = self.rhs(m, y);
        for i in 0..self.n {
            m[i] = m[i] + half * dm[i];
        }
        let (dy, _) = self.rhs(m, y);
        for i in 0..self.n {
            y[i] = y[i] + h * dy[i];
        }
        let (_, dm) = self.rhs(m, y);
        for i in 0..self.n {
            m[i] = m[i] + half * dm[i];
        }
    }
}

fn validate(rs: &RootSystem, initial: &FlowState, cfg: &FlowConfig) -> Result<()> {
    let n = rs.rank();
    if initial.m.len() != n || initial.y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "initial state needs {n} momenta and {n} positions"
        )));
    }
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(Error::InvalidArgument("t_end must be positive".into()));
    }
    if initial.m.iter().chain(&initial.y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    Ok(())
}

struct Run {
    drift: Vec<f64>,
    samples: Vec<FlowState>,
    end: FlowState,
    steps: usize,
}

fn run<S: Scalar>(rs: &RootSystem, initial: &FlowState, cfg: &FlowConfig, reverse: bool) -> Result<Run> {
    let sys: System<S> = System::new(rs, cfg.chart);
    let steps = cfg.steps();
    let h_f = cfg.t_end / steps as f64;
    let h = S::from_f64(if reverse { -h_f } else { h_f });
    let mut m: Vec<S> = initial.m.iter().map(|&v| S::from_f64(v)).collect();
    let mut y: Vec<S> = initial.y.iter().map(|&v| S::from_f64(v)).collect();
    let j0 = sys.integrals(&m, &y);
    let mut drift = vec![0.0; j0.len()];
    let stride = steps.checked_div(cfg.samples).map_or(0, |s| s.max(1));
    let snapshot = |m: &[S], y: &[S], k: usize| FlowState {
        m: m.iter().map(|v| v.to_f64()).collect(),
        y: y.iter().map(|v| v.to_f64()).collect(),
        t: initial.t + if reverse { -1.0 } else { 1.0 } * h_f * k as f64,
    };
    let mut samples = Vec::new();
    if stride > 0 {
        samples.push(snapshot(&m, &y, 0));
    }
    for step in 1..=steps {
        match cfg.integrator {
            Integrator::Rk4 => sys.rk4(&mut m, &mut y, h),
            Integrator::Leapfrog => sys.leapfrog(&mut m, &mut y, h),
        }
        if m.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(step));
        }
        let j = sys.integrals(&m, &y);
        if j.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(step));
        }
        for (v, (now, start)) in j.iter().zip(&j0).enumerate() {
            let rel = (*now - *start).to_f64().abs() / start.to_f64().abs().max(1.0);
            if rel > drift[v] {
                drift[v] = rel;
            }
        }
        if stride > 0 && step % stride == 0 && samples.len() < cfg.samples + 1 {
            samples.push(snapshot(&m, &y, step));
        }
    }
    Ok(Run {
        drift,
        samples,
        end: snapshot(&m, &y, steps),
        steps,
    })
}

fn run_any(rs: &RootSystem, initial: &FlowState, cfg: &FlowConfig, reverse: bool) -> Result<Run> {
    validate(rs, initial, cfg)?;
    match cfg.precision {
        Precision::Double => run::<f64>(rs, initial, cfg, reverse),
        Precision::DoubleDouble => run::<DoubleDouble>(rs, initial, cfg, reverse),
    }
}

/// Integrate `H = −J_1` from `initial` for `t_end` and report the largest
/// relative drift `|J_v(t) − J_v(0)| / max(1, |J_v(0)|)` of every `J_v`.
pub fn hamiltonian_flow(rs: &RootSystem, initial: &FlowState, cfg: &FlowConfig) -> Result<FlowReport> {
    let r = run_any(rs, initial, cfg, false)?;
    Ok(FlowReport {
        family: rs.family(),
        rank: rs.rank(),
        integrator: cfg.integrator,
        dt: cfg.dt,
        t_end: cfg.t_end,
        initial: InitialDoc {
            m: initial.m.clone(),
            y: initial.y.clone(),
        },
        max_rel_drift: r.drift,
        samples: (cfg.samples > 0).then_some(r.samples),
        final_state: r.end,
        steps: r.steps,
    })
}

/// Integrate forward for `t_end`, then backward for `t_end`, and return the
/// largest coordinate difference from the initial state.
pub fn round_trip_error(rs: &RootSystem, initial: &FlowState, cfg: &FlowConfig) -> Result<f64> {
    let fwd = run_any(rs, initial, cfg, false)?;
    let back = run_any(rs, &fwd.end, cfg, true)?;
    Ok(initial
        .m
        .iter()
        .chain(&initial.y)
        .zip(back.end.m.iter().chain(&back.end.y))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
