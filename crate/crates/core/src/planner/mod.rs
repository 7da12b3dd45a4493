//! The social planner's lockdown problem: flow costs, the Bellman solve on an
//! `(S, I)` grid, and closed-loop evaluation of policies.

mod cost;
mod grid;
mod simulate;
mod solver;

pub use cost::{boundary_value_s_zero, flow_cost};
pub use grid::{write_fields_csv, write_policy_csv, GridSpec, PolicyField, ValueField};
pub use simulate::{
    evaluate_policy, run_controlled, simulate_optimal, simulate_policy, simulate_uncontrolled,
    Scenario, ScenarioSummary, HORIZON_TAIL, LOCKDOWN_THRESHOLD,
};
pub use solver::{solve_value_function, solve_with, ControlSet, Solution, SolveOptions};
