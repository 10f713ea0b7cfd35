use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// A named indeterminate together with its grading weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

/// Ordered list of variables. Position in the table is the variable's
/// priority in every monomial order: earlier variables are larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    vars: Vec<Variable>,
}

/// Grading weight implied by a variable name: `q*` carries weight 2, every
/// other recognised family weight 1.
pub fn default_weight(name: &str) -> u32 {
    if name.starts_with('q') {
        2
    } else {
        1
    }
}

impl VarTable {
    pub fn new<I, S>(vars: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut out: Vec<Variable> = Vec::new();
        for (name, weight) in vars {
            let name = name.into();
            if weight == 0 {
                return Err(Error::InvalidArgument(format!(
                    "variable `{name}` must have positive weight"
                )));
            }
            if out.iter().any(|v| v.name == name) {
                return Err(Error::DuplicateVariable(name));
            }
            out.push(Variable { name, weight });
        }
        Ok(Arc::new(VarTable { vars: out }))
    }

    /// Table whose weights follow [`default_weight`].
    pub fn from_names<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(names.into_iter().map(|n| {
            let n = n.into();
            let w = default_weight(&n);
            (n, w)
        }))
    }

    /// `prefix1..prefixN` followed by `q1..qN`.
    pub fn with_q(prefix: &str, rank: usize) -> Arc<Self> {
        let names = (1..=rank)
            .map(|i| format!("{prefix}{i}"))
            .chain((1..=rank).map(|i| format!("q{i}")));
        Self::from_names(names).expect("generated names are unique")
    }

    /// `prefix1..prefixN`.
    pub fn indexed(prefix: &str, count: usize) -> Arc<Self> {
        Self::from_names((1..=count).map(|i| format!("{prefix}{i}"))).expect("generated names are unique")
    }

    /// New table with extra variables appended.
    pub fn extended<I, S>(&self, extra: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let iter = self
            .vars
            .iter()
            .map(|v| (v.name.clone(), v.weight))
            .chain(extra.into_iter().map(|(n, w)| (n.into(), w)));
        Self::new(iter)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.vars[i].weight
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.weight).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
