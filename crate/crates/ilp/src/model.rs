//! Integer linear program representation.
//!
//! Every variable is integral with an integer lower bound (usually 0) and an
//! optional integer upper bound. The objective is always minimized.

use std::collections::HashMap;
use std::fmt;

use crate::IlpError;

/// Index of a variable inside an [`IlpModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    /// `true` when `lhs (sense) rhs` holds up to `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs >= rhs - tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    /// `None` is +infinity.
    pub upper: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    pub fn activity_int(&self, values: &[i64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0] as f64).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IlpModel {
    name: String,
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(VarId, f64)>,
    by_name: HashMap<String, VarId>,
}

impl IlpModel {
    pub fn new(name: impl Into<String>) -> Self {
        IlpModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: i64,
        upper: Option<i64>,
    ) -> Result<VarId, IlpError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(IlpError::DuplicateVariable(name));
        }
        if let Some(u) = upper {
            if u < lower {
                return Err(IlpError::InvertedBounds { name, lower, upper: u });
            }
        }
        let id = VarId(self.vars.len());
        self.by_name.insert(name.clone(), id);
        self.vars.push(Variable { name, lower, upper });
        Ok(id)
    }

    /// Adds a linear constraint. Repeated variables are merged and zero
    /// coefficients dropped.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<usize, IlpError> {
        let name = name.into();
        let terms = self.normalize_terms(terms, &name)?;
        if !rhs.is_finite() {
            return Err(IlpError::NonFinite(name));
        }
        self.constraints.push(Constraint { name, terms, sense, rhs });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_objective(
        &mut self,
        terms: impl IntoIterator<Item = (VarId, f64)>,
    ) -> Result<(), IlpError> {
        self.objective = self.normalize_terms(terms, "objective")?;
        Ok(())
    }

    fn normalize_terms(
        &self,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        what: &str,
    ) -> Result<Vec<(VarId, f64)>, IlpError> {
        let mut out: Vec<(VarId, f64)> = Vec::new();
        for (v, c) in terms {
            if v.0 >= self.vars.len() {
                return Err(IlpError::UnknownVariable {
                    index: v.0,
                    count: self.vars.len(),
                });
            }
            if !c.is_finite() {
                return Err(IlpError::NonFinite(what.to_string()));
            }
            match out.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += c,
                None => out.push((v, c)),
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        Ok(out)
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(VarId, f64)] {
        &self.objective
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    pub fn objective_value_int(&self, values: &[i64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v.0] as f64).sum()
    }

    /// Checks bounds and every constraint for an integer assignment.
    /// Returns the name of the first violated item.
    pub fn check_assignment(&self, values: &[i64], tol: f64) -> Result<(), String> {
        if values.len() != self.vars.len() {
            return Err(format!(
                "assignment has {} values for {} variables",
                values.len(),
                self.vars.len()
            ));
        }
        for (var, &x) in self.vars.iter().zip(values) {
            if x < var.lower || var.upper.is_some_and(|u| x > u) {
                return Err(format!("bound of `{}` violated by {x}", var.name));
            }
        }
        for con in &self.constraints {
            let lhs = con.activity_int(values);
            if !con.sense.holds(lhs, con.rhs, tol) {
                return Err(format!(
                    "constraint `{}` violated: {lhs} {} {}",
                    con.name, con.sense, con.rhs
                ));
            }
        }
        Ok(())
    }

    /// `true` when every objective coefficient is integral, so any integer
    /// assignment has an integral objective value.
    pub fn has_integral_objective(&self) -> bool {
        self.objective
            .iter()
            .all(|&(_, c)| (c - c.round()).abs() < 1e-9)
    }
}
