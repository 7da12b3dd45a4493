//! Upwind value iteration for the planner's Bellman equation.
//!
//! With the upwind discretization each node update reads
//!
//! ```text
//! V(S,I) = min_L [ f(S,I,L) + qS V(S-h,I) + qI V(S,I±h) ] / (rho + qS + qI)
//! ```
//!
//! where `qS = beta S I (1-theta L)^2 / hS`, `qI = |drift_I| / hI` and the
//! I neighbour is chosen by the sign of the I drift. This is a pseudo-time
//! step at the node's own CFL limit. Because the S drift is never positive,
//! a column only depends on the column to its left, so columns are solved
//! in order of increasing S with alternating Gauss-Seidel sweeps in I.

use crate::epidemic::PlannerParams;
use crate::error::{Error, Result};

use super::cost::{boundary_value_unchecked, flow_cost_at};
use super::grid::{GridSpec, PolicyField, ValueField};

/// Control candidates scanned at every node.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ControlSet {
    /// `n_l` evenly spaced points on `[0, l_bar]` plus one quadratic refinement.
    #[default]
    Uniform,
    /// Exactly these lockdown levels, no refinement.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Stop when the sup-norm Bellman residual drops below this value.
    pub tol: f64,
    /// Maximum Gauss-Seidel sweeps per column.
    pub max_iters: usize,
    pub controls: ControlSet,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 100_000,
            controls: ControlSet::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub value: ValueField,
    pub policy: PolicyField,
    /// Sup-norm of `T(V) - V` over the grid at the returned value.
    pub residual: f64,
    /// Total Gauss-Seidel column sweeps performed.
    pub sweeps: usize,
}

/// Solves on `grid` with the uniform control scan.
pub fn solve_value_function(
    params: &PlannerParams,
    grid: GridSpec,
    tol: f64,
    max_iters: usize,
) -> Result<Solution> {
    solve_with(
        params,
        grid,
        &SolveOptions {
            tol,
            max_iters,
            controls: ControlSet::Uniform,
        },
    )
}

struct NodeProblem<'a> {
    params: &'a PlannerParams,
    inv_ds: f64,
    inv_di: f64,
    rho: f64,
    top: usize,
}

impl NodeProblem<'_> {
    /// Candidate value at one node for lockdown `l`, given neighbour values.
    #[inline]
    fn candidate(&self, s: f64, i: f64, ii: usize, l: f64, left: f64, col: &[f64]) -> f64 {
        let p = self.params;
        let new_inf = p.infection_flow(s, i, l);
        let drift_i = new_inf - p.gamma * i;
        let q_s = new_inf * self.inv_ds;
        let (q_i, neighbour) = if drift_i > 0.0 {
            if ii < self.top {
                (drift_i * self.inv_di, col[ii + 1])
            } else {
                (0.0, 0.0)
            }
        } else {
            (-drift_i * self.inv_di, col[ii - 1])
        };
        (flow_cost_at(s, i, l, p) + q_s * left + q_i * neighbour) / (self.rho + q_s + q_i)
    }

    /// Best value and lockdown over `controls`, ties toward smaller `l`.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn minimize(
        &self,
        s: f64,
        i: f64,
        ii: usize,
        controls: &[f64],
        refine: bool,
        left: f64,
        col: &[f64],
    ) -> (f64, f64) {
        let mut best_k = 0;
        let mut best_v = self.candidate(s, i, ii, controls[0], left, col);
        for (k, &l) in controls.iter().enumerate().skip(1) {
            let v = self.candidate(s, i, ii, l, left, col);
            if v < best_v {
                best_v = v;
                best_k = k;
            }
        }
        let mut best_l = controls[best_k];
        if refine && best_k > 0 && best_k + 1 < controls.len() {
            let lo = self.candidate(s, i, ii, controls[best_k - 1], left, col);
            let hi = self.candidate(s, i, ii, controls[best_k + 1], left, col);
            let curvature = lo - 2.0 * best_v + hi;
            if curvature > 0.0 {
                let step = controls[best_k + 1] - controls[best_k];
                let offset = 0.5 * (lo - hi) / curvature;
                let l = (best_l + offset * step).clamp(controls[best_k - 1], controls[best_k + 1]);
                let v = self.candidate(s, i, ii, l, left, col);
                if v < best_v {
                    best_v = v;
                    best_l = l;
                }
            }
        }
        (best_v, best_l)
    }
}

pub fn solve_with(params: &PlannerParams, grid: GridSpec, opts: &SolveOptions) -> Result<Solution> {
    params.validate()?;
    grid.validate()?;
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::param("tol", opts.tol, "must be finite and > 0"));
    }
    if opts.max_iters == 0 {
        return Err(Error::param("max_iters", 0.0, "must be >= 1"));
    }
    let (controls, refine) = match &opts.controls {
        ControlSet::Uniform => (grid.controls(params.l_bar), true),
        ControlSet::Fixed(levels) => {
            if levels.is_empty() {
                return Err(Error::param("controls", 0.0, "fixed control set is empty"));
            }
            for &l in levels {
                params.check_lockdown(l)?;
            }
            (levels.clone(), false)
        }
    };

    let problem = NodeProblem {
        params,
        inv_ds: 1.0 / grid.ds(),
        inv_di: 1.0 / grid.di(),
        rho: params.discount(),
        top: grid.n_i - 1,
    };

    let n_i = grid.n_i;
    let mut values = vec![0.0; grid.len()];
    let mut lockdown = vec![0.0; grid.len()];
    for ii in 0..n_i {
        values[grid.index(0, ii)] = boundary_value_unchecked(grid.i_at(ii), params);
    }

    let mut sweeps = 0usize;
    let half_tol = 0.5 * opts.tol;
    for is in 1..grid.n_s {
        let s = grid.s_at(is);
        let (done, rest) = values.split_at_mut(is * n_i);
        let left = &done[(is - 1) * n_i..];
        let col = &mut rest[..n_i];
        // warm start from the column to the left
        col[1..].copy_from_slice(&left[1..n_i]);
        col[0] = 0.0;

        let mut iters = 0;
        loop {
            let mut change: f64 = 0.0;
            let ascending = iters % 2 == 0;
            for step in 1..n_i {
                let ii = if ascending { step } else { n_i - step };
                let i = grid.i_at(ii);
                let (v, _) = problem.minimize(s, i, ii, &controls, refine, left[ii], col);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        s_index: is,
                        i_index: ii,
                    });
                }
                change = change.max((v - col[ii]).abs());
                col[ii] = v;
            }
            iters += 1;
            if change < half_tol {
                break;
            }
            if iters >= opts.max_iters {
                return Err(Error::NonConvergence {
                    iters,
                    column: is,
                    residual: change,
                });
            }
        }
        sweeps += iters;
    }

    // Jacobi pass at the converged value: residual and the attaining control.
    let mut residual: f64 = 0.0;
    for is in 1..grid.n_s {
        let s = grid.s_at(is);
        let left = &values[(is - 1) * n_i..is * n_i];
        let col = &values[is * n_i..(is + 1) * n_i];
        for ii in 1..n_i {
            let (v, l) = problem.minimize(s, grid.i_at(ii), ii, &controls, refine, left[ii], col);
            residual = residual.max((v - col[ii]).abs());
            lockdown[grid.index(is, ii)] = l;
        }
    }
    if residual >= opts.tol {
        return Err(Error::NonConvergence {
            iters: sweeps,
            column: grid.n_s - 1,
            residual,
        });
    }

    Ok(Solution {
        value: ValueField { grid, values },
        policy: PolicyField {
            grid,
            l_bar: params.l_bar,
            lockdown,
        },
        residual,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::cost::boundary_value_s_zero;

    fn small() -> GridSpec {
        GridSpec::new(41, 41, 11).unwrap()
    }

    #[test]
    fn zero_death_cost_gives_zero_value_and_policy() {
        let p = PlannerParams {
            cost_per_death: 0.0,
            chi: 0.0,
            ..PlannerParams::default()
        };
        let sol = solve_value_function(&p, small(), 1e-10, 1000).unwrap();
        assert!(sol.value.values.iter().all(|&v| v == 0.0));
        assert!(sol.policy.lockdown.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn boundaries_pinned() {
        let p = PlannerParams::default();
        let g = small();
        let sol = solve_value_function(&p, g, 1e-9, 10_000).unwrap();
        for is in 0..g.n_s {
            assert_eq!(sol.value.at(is, 0), 0.0);
        }
        for ii in 0..g.n_i {
            let exact = boundary_value_s_zero(g.i_at(ii), &p).unwrap();
            assert!((sol.value.at(0, ii) - exact).abs() <= 1e-10);
            assert_eq!(sol.policy.at(0, ii), 0.0);
        }
        assert!(sol.residual < 1e-9);
    }

    #[test]
    fn policy_within_cap_and_value_nonnegative() {
        let p = PlannerParams::default();
        let sol = solve_value_function(&p, small(), 1e-9, 10_000).unwrap();
        assert!(sol
            .policy
            .lockdown
            .iter()
            .all(|&l| (0.0..=p.l_bar).contains(&l)));
        assert!(sol.value.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn rejects_bad_options() {
        let p = PlannerParams::default();
        let bad_tol = SolveOptions {
            tol: 0.0,
            ..SolveOptions::default()
        };
        assert!(solve_with(&p, small(), &bad_tol).is_err());
        let bad_control = SolveOptions {
            controls: ControlSet::Fixed(vec![0.9]),
            ..SolveOptions::default()
        };
        assert!(solve_with(&p, small(), &bad_control).is_err());
    }

    #[test]
    fn non_convergence_reports_residual() {
        let p = PlannerParams::default();
        let err = solve_value_function(&p, small(), 1e-14, 1).unwrap_err();
        match err {
            Error::NonConvergence { residual, .. } => assert!(residual > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_aborts_with_node() {
        let p = PlannerParams {
            cost_per_death: f64::MAX,
            chi: f64::MAX,
            ..PlannerParams::default()
        };
        // death_price overflows to infinity; validation allows finite inputs
        let err = solve_value_function(&p, small(), 1e-9, 100).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }), "{err:?}");
    }
}
