use serde::Serialize;
use serde_json::{json, Value};

use qtoda::dmodule::AnnihilationVerdict;
use qtoda::flow::{conservation_selfcheck, round_trip_error};
use qtoda::lax::ConservedSet;
use qtoda::weyl::pairwise_commute_check;
use qtoda::{
    build_equivariant, build_hamiltonian, build_presentation, check_annihilation, classical_limit_report,
    free_rank_probe, hamiltonian_flow, normalized_integrals, p1_example_check, quantize_integral, solve_series, Error,
    Family, FlowConfig, FlowState, Polynomial, Presentation, RootSystem, WeylOp,
};

use crate::args::{Command, Target};

/// A rendered command result; `passed` is false for negative verdicts.
pub struct Outcome {
    pub value: Value,
    /// Plain-text payload when the generic text view is not wanted.
    pub text: Option<String>,
    pub passed: bool,
}

pub enum Failure {
    /// Bad input; nothing is printed except the diagnostic.
    Usage(String),
    Runtime(String),
}

type Run = std::result::Result<Outcome, Failure>;

fn usage(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for '{flag}': {e}"))
}

fn runtime(e: Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("payload serialization")
}

fn verdict<T: Serialize>(doc: &T, passed: bool) -> Outcome {
    Outcome {
        value: to_value(doc),
        text: None,
        passed,
    }
}

fn root_system(t: &Target) -> std::result::Result<RootSystem, Failure> {
    RootSystem::new(t.family, t.rank).map_err(|e| usage("--rank", e))
}

fn presentation(t: &Target, coords: qtoda::Coords) -> std::result::Result<Presentation, Failure> {
    build_presentation(&root_system(t)?, coords).map_err(runtime)
}

fn parse_expr(pres: &Presentation, text: &str) -> std::result::Result<Polynomial, Failure> {
    pres.parse(text).map_err(|e| usage("--expr", e))
}

fn header(rs: &RootSystem) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("family".into(), json!(rs.family()));
    m.insert("rank".into(), json!(rs.rank()));
    m
}

fn with(mut m: serde_json::Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(e) = extra {
        m.extend(e);
    }
    Value::Object(m)
}

#[derive(Serialize)]
struct QuantizeDoc {
    family: Family,
    rank: usize,
    input: String,
    degree: u32,
    unknowns: usize,
    dimension: usize,
    representative: String,
    directions: Vec<String>,
    commutes_with_hamiltonian: bool,
    symbol_matches: bool,
    mod_q_matches: bool,
}

fn quantize(rs: &RootSystem, u: &Polynomial) -> std::result::Result<(QuantizeDoc, WeylOp), Failure> {
    let degree = u
        .homogeneous_degree()
        .ok_or_else(|| usage("--expr", Error::NotHomogeneous))?;
    let sol = quantize_integral(rs, u).map_err(|e| match e {
        Error::NotHomogeneous | Error::UnknownVariable(_) | Error::ForbiddenVariable(_) => usage("--expr", e),
        e => runtime(e),
    })?;
    let d = sol.representative.clone();
    let n = rs.rank();
    let classical = WeylOp::from_classical(n, u).map_err(runtime)?;
    let at_zero = WeylOp::from_classical(n, &qtoda::lax::at_q_zero(u)).map_err(runtime)?;
    let commutes = d.commutator(&build_hamiltonian(rs)).map_err(runtime)?.is_zero();
    let doc = QuantizeDoc {
        family: rs.family(),
        rank: n,
        input: u.to_string(),
        degree,
        unknowns: sol.unknowns,
        dimension: sol.dimension(),
        representative: d.to_string(),
        directions: sol.directions.iter().map(|o| o.to_string()).collect(),
        commutes_with_hamiltonian: commutes,
        symbol_matches: d.symbol() == classical.symbol(),
        mod_q_matches: d.mod_q() == at_zero.mod_q(),
    };
    Ok((doc, d))
}

fn integral_of_degree(rs: &RootSystem, degree: u32) -> std::result::Result<Polynomial, Failure> {
    let v = (1..=rs.rank())
        .find(|&v| ConservedSet::expected_degree(rs.family(), v) == degree)
        .ok_or_else(|| usage("--degree", format!("no conserved quantity of degree {degree}")))?;
    Ok(normalized_integrals(rs).map_err(runtime)?.swap_remove(v - 1))
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Present { target, coords, .. } => {
            let pres = presentation(target, coords.coords)?;
            Ok(verdict(&pres.to_doc(), true))
        }
        Command::Reduce {
            target, coords, expr, ..
        } => {
            let pres = presentation(target, coords.coords)?;
            let f = parse_expr(&pres, expr)?;
            let r = pres.reduce_class(&f).map_err(runtime)?;
            let value = with(
                header(pres.root_system()),
                json!({"coords": pres.coords(), "input": f.to_string(), "normal_form": r.to_string()}),
            );
            Ok(Outcome {
                value,
                text: Some(format!("{r}\n")),
                passed: true,
            })
        }
        Command::Multiply {
            target, coords, expr, ..
        } => {
            if expr.len() != 2 {
                return Err(usage(
                    "--expr",
                    format!("expected exactly 2 factors, got {}", expr.len()),
                ));
            }
            let pres = presentation(target, coords.coords)?;
            let f = parse_expr(&pres, &expr[0])?;
            let g = parse_expr(&pres, &expr[1])?;
            let r = pres.quotient_multiply(&f, &g).map_err(runtime)?;
            let value = with(
                header(pres.root_system()),
                json!({
                    "coords": pres.coords(),
                    "factors": [f.to_string(), g.to_string()],
                    "product": r.to_string(),
                }),
            );
            Ok(Outcome {
                value,
                text: Some(format!("{r}\n")),
                passed: true,
            })
        }
        Command::Basis {
            target, coords, degree, ..
        } => {
            let pres = presentation(target, coords.coords)?;
            let vars = pres.classical_vars().clone();
            let w = vars.weights();
            let basis: Vec<String> = pres
                .module_basis()
                .map_err(runtime)?
                .into_iter()
                .filter(|m| degree.is_none_or(|d| m.weighted_degree(&w) == d))
                .map(|m| Polynomial::monomial(&vars, m, qtoda::poly::int(1)).to_string())
                .collect();
            let mut value = header(pres.root_system());
            value.insert("coords".into(), json!(pres.coords()));
            if let Some(d) = degree {
                value.insert("degree".into(), json!(d));
            }
            value.insert("size".into(), json!(basis.len()));
            value.insert("basis".into(), json!(basis));
            Ok(verdict(&value, true))
        }
        Command::ClassicalCheck { target, coords, .. } => {
            let pres = presentation(target, coords.coords)?;
            let r = classical_limit_report(&pres).map_err(runtime)?;
            let value = with(header(pres.root_system()), to_value(&r));
            Ok(verdict(&value, r.passed()))
        }
        Command::RankProbe {
            target, samples, seed, ..
        } => {
            let pres = presentation(target, qtoda::Coords::P)?;
            let r = free_rank_probe(&pres, *samples, *seed).map_err(runtime)?;
            let value = with(header(pres.root_system()), to_value(&r));
            Ok(verdict(&value, r.passed()))
        }
        Command::Dsolve { target, cutoff, .. } => {
            let rs = root_system(target)?;
            let s = solve_series(&rs, *cutoff).map_err(runtime)?;
            Ok(verdict(&s.to_doc(), true))
        }
        Command::Quantize {
            target, expr, degree, ..
        } => {
            let rs = root_system(target)?;
            let u = match (expr, degree) {
                (Some(text), _) => {
                    Polynomial::parse(text, &qtoda::lax::pq_table(rs.rank())).map_err(|e| usage("--expr", e))?
                }
                (None, Some(d)) => integral_of_degree(&rs, *d)?,
                (None, None) => return Err(Failure::Usage("one of '--expr' or '--degree' is required".into())),
            };
            let (doc, _) = quantize(&rs, &u)?;
            let passed = doc.commutes_with_hamiltonian && doc.symbol_matches && doc.mod_q_matches;
            Ok(verdict(&doc, passed))
        }
        Command::Annihilate { target, cutoff, .. } => {
            let rs = root_system(target)?;
            let mut ops = vec![build_hamiltonian(&rs)];
            for u in &normalized_integrals(&rs).map_err(runtime)?[1..] {
                ops.push(quantize(&rs, u)?.1);
            }
            let series = solve_series(&rs, *cutoff).map_err(runtime)?;
            let verdicts: Vec<AnnihilationVerdict> = check_annihilation(&series, &ops).map_err(|e| match e {
                Error::CutoffTooSmall { .. } => usage("--cutoff", e),
                e => runtime(e),
            })?;
            let commuting = pairwise_commute_check(&ops).map_err(runtime)?;
            let passed = commuting.commute && verdicts.iter().all(|v| v.annihilates);
            let value = with(
                header(&rs),
                json!({"cutoff": cutoff, "commuting": to_value(&commuting), "verdicts": to_value(&verdicts)}),
            );
            Ok(verdict(&value, passed))
        }
        Command::Flow {
            target,
            m,
            y,
            dt,
            t_end,
            integrator,
            samples,
            ..
        } => {
            let rs = root_system(target)?;
            let n = rs.rank();
            if m.len() != n {
                return Err(usage("--m", format!("expected {n} values, got {}", m.len())));
            }
            let y = if y.is_empty() { vec![0.0; n] } else { y.clone() };
            if y.len() != n {
                return Err(usage("--y", format!("expected {n} values, got {}", y.len())));
            }
            if m.iter().chain(&y).any(|x| !x.is_finite()) {
                return Err(Failure::Usage("initial values must be finite".into()));
            }
            if !(dt.is_finite() && *dt > 0.0) {
                return Err(usage("--dt", "must be positive"));
            }
            if !(t_end.is_finite() && *t_end > 0.0) {
                return Err(usage("--t-end", "must be positive"));
            }
            let mut cfg = FlowConfig::new(*dt, *t_end, *integrator);
            cfg.samples = *samples;
            let initial = FlowState::new(m.clone(), y);
            let report = hamiltonian_flow(&rs, &initial, &cfg).map_err(runtime)?;
            let mut value = to_value(&report);
            if let Value::Object(obj) = &mut value {
                let rt = round_trip_error(&rs, &initial, &cfg).map_err(runtime)?;
                obj.insert("round_trip_error".into(), json!(rt));
            }
            Ok(verdict(&value, true))
        }
        Command::PoissonCheck { target, .. } => {
            let rs = root_system(target)?;
            let r = conservation_selfcheck(&rs).map_err(runtime)?;
            Ok(verdict(&r, r.passed()))
        }
        Command::Equivariant { target, .. } => {
            let rs = root_system(target)?;
            let eq = build_equivariant(&rs).map_err(|e| match e {
                Error::UnsupportedFamily(_) => usage("--family", e),
                Error::InvalidRank { .. } => usage("--rank", e),
                e => runtime(e),
            })?;
            Ok(verdict(&eq.to_doc(), true))
        }
        Command::P1Example { .. } => {
            let r = p1_example_check().map_err(runtime)?;
            Ok(verdict(&r, r.passed()))
        }
    }
}
