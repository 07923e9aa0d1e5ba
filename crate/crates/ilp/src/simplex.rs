//! Dense-tableau primal simplex over bounded variables.
//!
//! Two phases: phase I minimizes the sum of artificials, phase II the real
//! cost with artificials fixed at zero. Nonbasic variables sit at one of
//! their bounds; the ratio test handles bound flips of the entering column.
//! Pricing is Dantzig's largest reduced cost until a run of degenerate
//! pivots is seen, after which Bland's smallest-index rule takes over for
//! the rest of the phase so the method cannot cycle.

use crate::lp::{LpOptions, LpStatus, Relaxation};
use crate::model::Sense;
use crate::IlpError;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structural,
    Slack,
    Artificial,
}

pub(crate) struct DenseOutcome {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub iterations: usize,
}

struct Tableau<'o> {
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols`, holds B^-1 A.
    t: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    kind: Vec<Kind>,
    /// Current value of every column variable (basic and nonbasic).
    x: Vec<f64>,
    basis: Vec<usize>,
    /// Row of each basic column, `usize::MAX` when nonbasic.
    row_of: Vec<usize>,
    iterations: usize,
    opts: &'o LpOptions,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl<'o> Tableau<'o> {
    fn build(lp: &Relaxation, opts: &'o LpOptions) -> Result<Self, IlpError> {
        let n = lp.cost.len();
        let m = lp.rows.len();
        let slack_count = lp.rows.iter().filter(|r| r.sense != Sense::Eq).count();

        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut kind = vec![Kind::Structural; n];
        let mut x: Vec<f64> = lower.clone();
        for j in 0..n {
            if !lower[j].is_finite() {
                return Err(IlpError::NonFinite(format!("lower bound of column {j}")));
            }
        }

        // Residual of each row with every structural at its lower bound.
        let residual: Vec<f64> = lp
            .rows
            .iter()
            .map(|r| r.rhs - r.terms.iter().map(|&(j, c)| c * x[j]).sum::<f64>())
            .collect();

        // Decide each row's initial basic column: the slack when it can take
        // the residual with a feasible sign, otherwise an artificial.
        let mut slack_col = vec![None; m];
        let mut next = n;
        for (r, row) in lp.rows.iter().enumerate() {
            if row.sense != Sense::Eq {
                slack_col[r] = Some(next);
                next += 1;
            }
        }
        let mut artificial_rows = Vec::new();
        for (r, row) in lp.rows.iter().enumerate() {
            let slack_ok = match row.sense {
                Sense::Le => residual[r] >= 0.0,
                Sense::Ge => residual[r] <= 0.0,
                Sense::Eq => false,
            };
            if !slack_ok {
                artificial_rows.push(r);
            }
        }
        let cols = n + slack_count + artificial_rows.len();
        lower.resize(cols, 0.0);
        upper.resize(cols, f64::INFINITY);
        kind.resize(cols, Kind::Slack);
        x.resize(cols, 0.0);

        let mut t = vec![0.0; m * cols];
        let mut basis = vec![usize::MAX; m];
        for (r, row) in lp.rows.iter().enumerate() {
            let line = &mut t[r * cols..(r + 1) * cols];
            for &(j, c) in &row.terms {
                line[j] += c;
            }
            if let Some(s) = slack_col[r] {
                line[s] = if row.sense == Sense::Le { 1.0 } else { -1.0 };
            }
        }
        for (k, &r) in artificial_rows.iter().enumerate() {
            let a = n + slack_count + k;
            kind[a] = Kind::Artificial;
            let sign = if residual[r] >= 0.0 { 1.0 } else { -1.0 };
            t[r * cols + a] = sign;
            basis[r] = a;
        }
        for r in 0..m {
            if basis[r] == usize::MAX {
                basis[r] = slack_col[r].expect("row without artificial has a slack");
            }
        }
        // Scale rows so every basic column is +e_r.
        for r in 0..m {
            let b = basis[r];
            let piv = t[r * cols + b];
            if piv != 1.0 {
                for v in &mut t[r * cols..(r + 1) * cols] {
                    *v /= piv;
                }
            }
            x[b] = residual[r] / piv;
        }
        let mut row_of = vec![usize::MAX; cols];
        for (r, &b) in basis.iter().enumerate() {
            row_of[b] = r;
        }
        Ok(Tableau {
            rows: m,
            cols,
            t,
            lower,
            upper,
            kind,
            x,
            basis,
            row_of,
            iterations: 0,
            opts,
        })
    }

    fn entry(&self, r: usize, j: usize) -> f64 {
        self.t[r * self.cols + j]
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let line = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, &a) in d.iter_mut().zip(line) {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn run_phase(&mut self, cost: &[f64]) -> Result<PhaseEnd, IlpError> {
        let opt_tol = self.opts.opt_tol;
        let piv_tol = self.opts.pivot_tol;
        let limit = self.opts.max_iterations.unwrap_or(50 * (self.rows + self.cols) + 1000);
        let mut d = self.reduced_costs(cost);
        let mut degenerate = 0usize;
        let mut bland = false;

        loop {
            if self.iterations >= limit {
                return Err(IlpError::IterationLimit(limit));
            }
            // Pricing.
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols {
                if self.row_of[j] != usize::MAX || self.upper[j] - self.lower[j] <= 0.0 {
                    continue;
                }
                let at_lower = self.x[j] <= self.lower[j];
                let score = if at_lower { -d[j] } else { d[j] };
                if score > opt_tol {
                    if bland {
                        entering = Some((j, score));
                        break;
                    }
                    if entering.is_none_or(|(_, s)| score > s) {
                        entering = Some((j, score));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let dir = if self.x[q] <= self.lower[q] { 1.0 } else { -1.0 };

            // Ratio test.
            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = dir * self.entry(r, q);
                if a.abs() <= piv_tol {
                    continue;
                }
                let b = self.basis[r];
                let limit = if a > 0.0 {
                    (self.x[b] - self.lower[b]) / a
                } else if self.upper[b].is_finite() {
                    (self.upper[b] - self.x[b]) / -a
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let better = match leave {
                    None => limit < theta,
                    Some((lr, _)) => {
                        if limit < theta - piv_tol {
                            true
                        } else if limit <= theta + piv_tol {
                            if bland {
                                b < self.basis[lr]
                            } else {
                                a.abs() > self.entry(lr, q).abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    theta = theta.min(limit);
                    leave = Some((r, limit));
                }
            }
            if !theta.is_finite() {
                return Ok(PhaseEnd::Unbounded);
            }
            self.iterations += 1;

            if theta <= piv_tol {
                degenerate += 1;
                if degenerate >= DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            // Move the basic variables along the edge.
            let step = dir * theta;
            for r in 0..self.rows {
                let a = self.entry(r, q);
                if a != 0.0 {
                    let b = self.basis[r];
                    self.x[b] -= step * a;
                }
            }
            self.x[q] += step;

            match leave {
                None => {
                    // Bound flip: entering column jumps to its other bound.
                    self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Some((r, _)) => {
                    let b = self.basis[r];
                    // Snap the leaving variable onto the bound it reached.
                    let a = dir * self.entry(r, q);
                    self.x[b] = if a > 0.0 { self.lower[b] } else { self.upper[b] };
                    self.pivot(r, q, &mut d)?;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [f64]) -> Result<(), IlpError> {
        let cols = self.cols;
        let piv = self.entry(r, q);
        if piv.abs() < self.opts.pivot_tol {
            return Err(IlpError::Instability(format!("pivot {piv:e} below tolerance")));
        }
        let inv = 1.0 / piv;
        if inv.abs() > self.opts.max_entry {
            return Err(IlpError::Instability(format!("pivot {piv:e} too small")));
        }
        {
            let line = &mut self.t[r * cols..(r + 1) * cols];
            for v in line.iter_mut() {
                *v *= inv;
            }
            line[q] = 1.0;
        }
        let pivot_row: Vec<f64> = self.t[r * cols..(r + 1) * cols].to_vec();
        let mut growth = 0.0f64;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + q];
            if f == 0.0 {
                continue;
            }
            let line = &mut self.t[i * cols..(i + 1) * cols];
            for (v, &p) in line.iter_mut().zip(&pivot_row) {
                if p != 0.0 {
                    *v -= f * p;
                    growth = growth.max(v.abs());
                }
            }
            line[q] = 0.0;
        }
        if growth > self.opts.max_entry {
            return Err(IlpError::Instability(format!(
                "tableau entry magnitude {growth:e} exceeds {:e}",
                self.opts.max_entry
            )));
        }
        let dq = d[q];
        if dq != 0.0 {
            for (dj, &p) in d.iter_mut().zip(&pivot_row) {
                *dj -= dq * p;
            }
            d[q] = 0.0;
        }
        let old = self.basis[r];
        self.row_of[old] = usize::MAX;
        self.basis[r] = q;
        self.row_of[q] = r;
        Ok(())
    }

    /// Pivots zero-valued artificials out of the basis where a non-artificial
    /// column can replace them; rows where none can are redundant.
    fn expel_artificials(&mut self) -> Result<(), IlpError> {
        let mut dummy = vec![0.0; self.cols];
        for r in 0..self.rows {
            if self.kind[self.basis[r]] != Kind::Artificial {
                continue;
            }
            let candidate = (0..self.cols).find(|&j| {
                self.kind[j] != Kind::Artificial
                    && self.row_of[j] == usize::MAX
                    && self.entry(r, j).abs() > 1e-7
            });
            if let Some(j) = candidate {
                self.pivot(r, j, &mut dummy)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn solve_dense(lp: &Relaxation, opts: &LpOptions) -> Result<DenseOutcome, IlpError> {
    let n = lp.cost.len();
    for j in 0..n {
        if lp.upper[j] < lp.lower[j] {
            return Ok(DenseOutcome {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                iterations: 0,
            });
        }
    }
    let mut tab = Tableau::build(lp, opts)?;
    let cols = tab.cols;

    let has_artificial = tab.kind.contains(&Kind::Artificial);
    if has_artificial {
        let phase1: Vec<f64> = tab
            .kind
            .iter()
            .map(|k| if *k == Kind::Artificial { 1.0 } else { 0.0 })
            .collect();
        tab.run_phase(&phase1)?;
        let infeasibility: f64 = (0..cols)
            .filter(|&j| tab.kind[j] == Kind::Artificial)
            .map(|j| tab.x[j])
            .sum();
        let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > opts.feas_tol * scale {
            return Ok(DenseOutcome {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                iterations: tab.iterations,
            });
        }
        for j in 0..cols {
            if tab.kind[j] == Kind::Artificial {
                tab.upper[j] = 0.0;
                tab.x[j] = 0.0;
            }
        }
        tab.expel_artificials()?;
    }

    let mut phase2 = lp.cost.clone();
    phase2.resize(cols, 0.0);
    let end = tab.run_phase(&phase2)?;
    let status = match end {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
    };
    let values = tab.x[..n].to_vec();
    Ok(DenseOutcome {
        status,
        values,
        iterations: tab.iterations,
    })
}
