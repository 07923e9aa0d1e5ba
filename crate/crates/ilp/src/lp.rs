//! LP relaxation of an [`IlpModel`].
//!
//! Two engines are available. `Sparse` (the default) hands the relaxation to
//! `minilp`, a revised simplex with sparse LU factors. `Dense` is the
//! textbook bounded primal simplex in [`crate::simplex`]; it is exact enough
//! for desk-scale models and serves as an independent second route in tests.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::model::{IlpModel, Sense};
use crate::simplex;
use crate::IlpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpEngine {
    #[default]
    Sparse,
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    pub engine: LpEngine,
    pub pivot_tol: f64,
    pub feas_tol: f64,
    pub opt_tol: f64,
    /// Largest tableau entry (or inverse pivot) tolerated before the solve is
    /// abandoned as numerically unstable.
    pub max_entry: f64,
    pub max_iterations: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            engine: LpEngine::Sparse,
            pivot_tol: 1e-9,
            feas_tol: 1e-6,
            opt_tol: 1e-9,
            max_entry: 1e12,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// One value per model variable; empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    pub objective: f64,
    /// Simplex pivots, when the engine reports them.
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Column-bounded LP in plain vectors; branch-and-bound edits the bounds.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Relaxation {
    pub cost: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Relaxation {
    pub fn from_model(model: &IlpModel) -> Self {
        let n = model.var_count();
        let mut cost = vec![0.0; n];
        for &(v, c) in model.objective() {
            cost[v.0] += c;
        }
        let rows = model
            .constraints()
            .iter()
            .map(|c| Row {
                terms: c.terms.iter().map(|&(v, a)| (v.0, a)).collect(),
                sense: c.sense,
                rhs: c.rhs,
            })
            .collect();
        let lower = model.vars().iter().map(|v| v.lower as f64).collect();
        let upper = model
            .vars()
            .iter()
            .map(|v| v.upper.map_or(f64::INFINITY, |u| u as f64))
            .collect();
        Relaxation { cost, rows, lower, upper }
    }

    pub fn objective(&self, values: &[f64]) -> f64 {
        self.cost.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Largest scaled violation of rows or bounds.
    fn violation(&self, values: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for r in &self.rows {
            let lhs: f64 = r.terms.iter().map(|&(j, c)| c * values[j]).sum();
            let scale = 1.0 + r.rhs.abs();
            let v = match r.sense {
                Sense::Le => lhs - r.rhs,
                Sense::Ge => r.rhs - lhs,
                Sense::Eq => (lhs - r.rhs).abs(),
            };
            worst = worst.max(v / scale);
        }
        for (j, &x) in values.iter().enumerate() {
            worst = worst.max(self.lower[j] - x).max(x - self.upper[j]);
        }
        worst
    }

    pub fn solve(&self, opts: &LpOptions) -> Result<LpSolution, IlpError> {
        let sol = match opts.engine {
            LpEngine::Dense => {
                let out = simplex::solve_dense(self, opts)?;
                let objective = if out.status == LpStatus::Optimal {
                    self.objective(&out.values)
                } else {
                    0.0
                };
                LpSolution {
                    status: out.status,
                    values: out.values,
                    objective,
                    iterations: out.iterations,
                }
            }
            LpEngine::Sparse => self.solve_sparse(),
        };
        if sol.status == LpStatus::Optimal {
            let v = self.violation(&sol.values);
            if !(v <= 100.0 * opts.feas_tol) {
                return Err(IlpError::Instability(format!(
                    "relaxation solution violates constraints by {v:e}"
                )));
            }
        }
        Ok(sol)
    }

    fn solve_sparse(&self) -> LpSolution {
        let n = self.cost.len();
        if (0..n).any(|j| self.upper[j] < self.lower[j]) {
            return infeasible();
        }
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = (0..n)
            .map(|j| problem.add_var(self.cost[j], (self.lower[j], self.upper[j])))
            .collect();
        for r in &self.rows {
            let op = match r.sense {
                Sense::Le => ComparisonOp::Le,
                Sense::Ge => ComparisonOp::Ge,
                Sense::Eq => ComparisonOp::Eq,
            };
            let terms: Vec<_> = r.terms.iter().map(|&(j, c)| (vars[j], c)).collect();
            problem.add_constraint(terms.as_slice(), op, r.rhs);
        }
        match problem.solve() {
            // minilp reports some unbounded problems as a solution at -inf.
            Ok(sol) if !sol.objective().is_finite() => LpSolution {
                status: LpStatus::Unbounded,
                values: Vec::new(),
                objective: f64::NEG_INFINITY,
                iterations: 0,
            },
            Ok(sol) => {
                let values: Vec<f64> = vars.iter().map(|&v| *sol.var_value(v)).collect();
                LpSolution {
                    status: LpStatus::Optimal,
                    objective: self.objective(&values),
                    values,
                    iterations: 0,
                }
            }
            Err(minilp::Error::Infeasible) => infeasible(),
            Err(minilp::Error::Unbounded) => LpSolution {
                status: LpStatus::Unbounded,
                values: Vec::new(),
                objective: f64::NEG_INFINITY,
                iterations: 0,
            },
        }
    }
}

fn infeasible() -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        values: Vec::new(),
        objective: f64::INFINITY,
        iterations: 0,
    }
}

/// Solves the continuous relaxation of `model` with default options.
pub fn solve_lp_relaxation(model: &IlpModel) -> Result<LpSolution, IlpError> {
    solve_lp_relaxation_with(model, &LpOptions::default())
}

pub fn solve_lp_relaxation_with(
    model: &IlpModel,
    opts: &LpOptions,
) -> Result<LpSolution, IlpError> {
    Relaxation::from_model(model).solve(opts)
}
