//! Self-contained dense two-phase simplex for covering-style programs:
//! minimize `c x` subject to `A x >= b`, `x >= 0` with `b >= 0`.
//!
//! The entering column is chosen by steepest reduced cost; after a run of
//! degenerate pivots the solver switches permanently to Bland's rule
//! (lowest eligible index for entering and leaving), which cannot cycle,
//! so every solve terminates.

use thiserror::Error;

pub const FEASIBILITY_TOL: f64 = 1e-9;
const STALL_LIMIT: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("program is infeasible")]
    Infeasible,
    #[error("program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Reduced costs of the active objective, kept in sync by pivoting.
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= scale;
        }
        self.rhs[row] /= scale;
        let pivot_row = std::mem::take(&mut self.rows[row]);
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor != 0.0 {
                for (dst, src) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *dst -= factor * src;
                }
                self.rhs[i] -= factor * self.rhs[row];
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for (dst, src) in self.cost.iter_mut().zip(&pivot_row) {
                *dst -= factor * src;
            }
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Installs an objective and reduces it against the current basis.
    fn set_objective(&mut self, objective: &[f64]) {
        self.cost = objective.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = self.cost[b];
            if cb != 0.0 {
                let row = &self.rows[i];
                for (dst, src) in self.cost.iter_mut().zip(row) {
                    *dst -= cb * src;
                }
            }
        }
    }

    /// Pivots until no column below `limit` has negative reduced cost.
    fn optimize(&mut self, limit: usize) -> Result<(), LpError> {
        let mut bland = false;
        let mut stalled = 0usize;
        loop {
            let entering = if bland {
                (0..limit).find(|&j| self.cost[j] < -FEASIBILITY_TOL)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..limit {
                    let c = self.cost[j];
                    if c < -FEASIBILITY_TOL && best.is_none_or(|(_, bc)| c < bc) {
                        best = Some((j, c));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(e) = entering else {
                return Ok(());
            };
            // Exact comparisons: a tolerance window here would let a
            // non-minimal ratio win and defeat Bland's anti-cycling rule.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][e];
                if a > FEASIBILITY_TOL {
                    let ratio = self.rhs[i] / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr || (ratio == lr && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                return Err(LpError::Unbounded);
            };
            if ratio.abs() <= FEASIBILITY_TOL {
                stalled += 1;
                if stalled >= STALL_LIMIT {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            self.pivot(row, e);
        }
    }
}

/// Covering programs (`c >= 0`, `b >= 0`) solved through the dual
/// `max b y` s.t. `A^T y <= c`, `y >= 0`: the slack basis is feasible from
/// the start (no artificials), degeneracy bites far less, and the optimal
/// primal vector falls out of the final reduced-cost row over the slack
/// columns.
pub fn solve_covering_min(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
) -> Result<LpSolution, LpError> {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m);
    assert!(objective.iter().all(|&c| c >= 0.0), "covering needs c >= 0");
    assert!(rhs.iter().all(|&b| b >= 0.0), "covering needs b >= 0");
    if m == 0 || n == 0 {
        if n == 0 && rhs.iter().any(|&b| b > FEASIBILITY_TOL) {
            return Err(LpError::Infeasible);
        }
        return Ok(LpSolution {
            x: vec![0.0; n],
            objective: 0.0,
        });
    }
    // Dual tableau: one row per primal column, one variable per primal row.
    let n_total = m + n;
    let mut tab = Tableau {
        rows: Vec::with_capacity(n),
        rhs: objective.to_vec(),
        cost: Vec::new(),
        basis: (0..n).map(|j| m + j).collect(),
    };
    for j in 0..n {
        let mut full = vec![0.0; n_total];
        for i in 0..m {
            full[i] = rows[i][j];
        }
        full[m + j] = 1.0; // dual slack
        tab.rows.push(full);
    }
    // Maximize b y == minimize -b y.
    let mut dual_cost = vec![0.0; n_total];
    for i in 0..m {
        dual_cost[i] = -rhs[i];
    }
    tab.set_objective(&dual_cost);
    match tab.optimize(n_total) {
        Ok(()) => {}
        // Unbounded dual means the primal covering program is infeasible.
        Err(LpError::Unbounded) => return Err(LpError::Infeasible),
        Err(e) => return Err(e),
    }
    // Complementary primal solution: reduced costs over the slack columns.
    let x: Vec<f64> = (0..n).map(|j| tab.cost[m + j].max(0.0)).collect();
    let objective_value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        x,
        objective: objective_value,
    })
}

/// Minimizes `objective . x` subject to `rows[i] . x >= rhs[i]` and
/// `x >= 0`. Right-hand sides must be nonnegative.
pub fn solve_min_geq(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
) -> Result<LpSolution, LpError> {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m);
    assert!(rhs.iter().all(|&b| b >= 0.0), "rhs must be nonnegative");
    if m == 0 {
        return Ok(LpSolution {
            x: vec![0.0; n],
            objective: 0.0,
        });
    }
    let n_total = n + 2 * m;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: rhs.to_vec(),
        cost: Vec::new(),
        basis: (0..m).map(|i| n + m + i).collect(),
    };
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.len(), n);
        let mut full = vec![0.0; n_total];
        full[..n].copy_from_slice(r);
        full[n + i] = -1.0; // surplus
        full[n + m + i] = 1.0; // artificial
        tab.rows.push(full);
    }

    // Phase 1: drive the artificials to zero.
    let mut phase1 = vec![0.0; n_total];
    for j in (n + m)..n_total {
        phase1[j] = 1.0;
    }
    tab.set_objective(&phase1);
    tab.optimize(n_total)?;
    let infeasibility: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n + m)
        .map(|(i, _)| tab.rhs[i])
        .sum();
    if infeasibility > 1e-7 {
        return Err(LpError::Infeasible);
    }
    // Pivot leftover artificials out of the basis where possible; rows
    // where none is available are redundant and stay at value zero.
    for i in 0..m {
        if tab.basis[i] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| tab.rows[i][j].abs() > FEASIBILITY_TOL) {
                tab.pivot(i, j);
            }
        }
    }

    // Phase 2 over the original objective; artificials may not re-enter.
    let mut phase2 = vec![0.0; n_total];
    phase2[..n].copy_from_slice(objective);
    tab.set_objective(&phase2);
    tab.optimize(n + m)?;

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs[i];
        }
    }
    let objective_value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        x,
        objective: objective_value,
    })
}
