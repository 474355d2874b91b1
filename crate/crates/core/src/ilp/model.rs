use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Index of a binary variable in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[bool]) -> f64 {
        self.terms.iter().filter(|(v, _)| x[v.0]).map(|(_, a)| a).sum()
    }

    pub fn satisfied(&self, x: &[bool], tol: f64) -> bool {
        let a = self.activity(x);
        match self.cmp {
            Cmp::Le => a <= self.rhs + tol,
            Cmp::Ge => a >= self.rhs - tol,
            Cmp::Eq => (a - self.rhs).abs() <= tol,
        }
    }
}

/// A pure 0/1 integer linear program.
#[derive(Debug, Clone, Default)]
pub struct IlpModel {
    names: Vec<String>,
    index: HashMap<String, VarId>,
    constraints: Vec<Constraint>,
    row_names: HashMap<String, usize>,
    sense: Sense,
    objective: Vec<(VarId, f64)>,
    constant: f64,
}

/// LP-file safe identifiers: ASCII letters, digits, `_` and `.`, not
/// starting with a digit or a period.
fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s.len() <= 255 && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> Result<VarId> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::Model(format!("invalid variable name {name:?}")));
        }
        if self.index.contains_key(&name) {
            return Err(Error::Model(format!("duplicate variable {name}")));
        }
        let id = VarId(self.names.len());
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Add `Σ terms cmp rhs`. Repeated variables are merged; zero
    /// coefficients are dropped.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        cmp: Cmp,
        rhs: f64,
    ) -> Result<()> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::Model(format!("invalid constraint name {name:?}")));
        }
        if self.row_names.contains_key(&name) {
            return Err(Error::Model(format!("duplicate constraint {name}")));
        }
        if !rhs.is_finite() {
            return Err(Error::Model(format!("constraint {name}: non-finite right-hand side")));
        }
        let terms = self.merge_terms(terms, &name)?;
        self.row_names.insert(name.clone(), self.constraints.len());
        self.constraints.push(Constraint { name, terms, cmp, rhs });
        Ok(())
    }

    pub fn set_objective(
        &mut self,
        sense: Sense,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        constant: f64,
    ) -> Result<()> {
        if !constant.is_finite() {
            return Err(Error::Model("non-finite objective constant".into()));
        }
        self.objective = self.merge_terms(terms, "objective")?;
        self.sense = sense;
        self.constant = constant;
        Ok(())
    }

    fn merge_terms(&self, terms: impl IntoIterator<Item = (VarId, f64)>, what: &str) -> Result<Vec<(VarId, f64)>> {
        let mut merged: BTreeMap<VarId, f64> = BTreeMap::new();
        for (v, a) in terms {
            if v.0 >= self.names.len() {
                return Err(Error::Model(format!("{what}: undeclared variable #{}", v.0)));
            }
            if !a.is_finite() {
                return Err(Error::Model(format!("{what}: non-finite coefficient on {}", self.names[v.0])));
            }
            *merged.entry(v).or_insert(0.0) += a;
        }
        Ok(merged.into_iter().filter(|&(_, a)| a != 0.0).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v.0]
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[(VarId, f64)] {
        &self.objective
    }

    pub fn objective_constant(&self) -> f64 {
        self.constant
    }

    pub fn evaluate(&self, x: &[bool]) -> f64 {
        self.constant + self.objective.iter().filter(|(v, _)| x[v.0]).map(|(_, c)| c).sum::<f64>()
    }

    pub fn is_feasible(&self, x: &[bool]) -> bool {
        x.len() == self.names.len() && self.constraints.iter().all(|c| c.satisfied(x, 1e-6))
    }
}
