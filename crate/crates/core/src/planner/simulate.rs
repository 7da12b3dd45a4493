use crate::epidemic::{integrate_with, EpidemicState, PlannerParams, Trajectory};
use crate::error::{Error, Result};
use crate::output::KeyValueBlock;

use super::cost::{death_cost_at, gdp_loss_at};
use super::grid::{GridSpec, PolicyField};
use super::solver::{solve_with, Solution, SolveOptions};

/// Lockdown level above which a sample counts as "in lockdown".
pub const LOCKDOWN_THRESHOLD: f64 = 0.01;

/// Discounted mass left beyond the horizon must stay below this.
pub const HORIZON_TAIL: f64 = 1e-6;

/// Integrals and extrema of one closed-loop run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    /// Cumulative dead share at the horizon.
    pub total_deaths: f64,
    pub discounted_gdp_loss: f64,
    pub discounted_death_cost: f64,
    pub peak_infected: f64,
    pub peak_lockdown: f64,
    /// Years spent with lockdown above [`LOCKDOWN_THRESHOLD`].
    pub lockdown_years: f64,
    /// Last sampled time with lockdown above [`LOCKDOWN_THRESHOLD`], 0 if never.
    pub lockdown_end: f64,
}

impl ScenarioSummary {
    pub fn discounted_total(&self) -> f64 {
        self.discounted_gdp_loss + self.discounted_death_cost
    }

    pub fn to_key_values(&self) -> KeyValueBlock {
        let mut kv = KeyValueBlock::new();
        kv.push("total_deaths", self.total_deaths)
            .push("discounted_gdp_loss", self.discounted_gdp_loss)
            .push("discounted_death_cost", self.discounted_death_cost)
            .push("discounted_total", self.discounted_total())
            .push("peak_infected", self.peak_infected)
            .push("peak_lockdown", self.peak_lockdown)
            .push("lockdown_years", self.lockdown_years)
            .push("lockdown_end", self.lockdown_end);
        kv
    }

    fn from_run(traj: &Trajectory, costs: [f64; 2]) -> Self {
        let mut peak_infected: f64 = 0.0;
        let mut peak_lockdown: f64 = 0.0;
        let mut lockdown_years = 0.0;
        let mut lockdown_end = 0.0;
        for (k, p) in traj.points.iter().enumerate() {
            peak_infected = peak_infected.max(p.state.i);
            peak_lockdown = peak_lockdown.max(p.lockdown);
            if p.lockdown > LOCKDOWN_THRESHOLD {
                lockdown_end = p.state.t;
                if let Some(next) = traj.points.get(k + 1) {
                    lockdown_years += next.state.t - p.state.t;
                }
            }
        }
        Self {
            total_deaths: traj.last().map_or(0.0, |p| p.state.d),
            discounted_gdp_loss: costs[0],
            discounted_death_cost: costs[1],
            peak_infected,
            peak_lockdown,
            lockdown_years,
            lockdown_end,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub trajectory: Trajectory,
    pub summary: ScenarioSummary,
}

fn check_horizon(params: &PlannerParams, horizon: f64) -> Result<()> {
    let tail = (-params.discount() * horizon).exp();
    if tail < HORIZON_TAIL {
        Ok(())
    } else {
        Err(Error::param(
            "horizon",
            horizon,
            format!("discounted tail exp(-(r+nu) horizon) = {tail:e} must be < {HORIZON_TAIL:e}"),
        ))
    }
}

/// Runs `control` and accumulates the discounted GDP loss and death cost.
pub fn run_controlled<C>(
    control: C,
    params: &PlannerParams,
    state0: &EpidemicState,
    horizon: f64,
    dt: f64,
) -> Result<Scenario>
where
    C: Fn(&EpidemicState) -> f64,
{
    let rho = params.discount();
    let t0 = state0.t;
    let (trajectory, costs) = integrate_with(state0, control, params, horizon, dt, |st, l| {
        let discount = (-rho * (st.t - t0)).exp();
        [
            discount * gdp_loss_at(st.s, st.i, l, params),
            discount * death_cost_at(st.i, params),
        ]
    })?;
    let summary = ScenarioSummary::from_run(&trajectory, costs);
    Ok(Scenario {
        trajectory,
        summary,
    })
}

/// Discounted total cost of following `policy` from `state0`.
pub fn evaluate_policy(
    policy: &PolicyField,
    params: &PlannerParams,
    state0: &EpidemicState,
    horizon: f64,
    dt: f64,
) -> Result<f64> {
    check_horizon(params, horizon)?;
    let scenario = run_controlled(
        |st| policy.interpolate(st.s, st.i),
        params,
        state0,
        horizon,
        dt,
    )?;
    Ok(scenario.summary.discounted_total())
}

/// Closed-loop run under a solved policy.
pub fn simulate_policy(
    policy: &PolicyField,
    params: &PlannerParams,
    state0: &EpidemicState,
    horizon: f64,
    dt: f64,
) -> Result<Scenario> {
    run_controlled(
        |st| policy.interpolate(st.s, st.i),
        params,
        state0,
        horizon,
        dt,
    )
}

pub fn simulate_uncontrolled(
    params: &PlannerParams,
    state0: &EpidemicState,
    horizon: f64,
    dt: f64,
) -> Result<Scenario> {
    run_controlled(|_| 0.0, params, state0, horizon, dt)
}

/// Solves the planner problem and follows the resulting policy from `state0`.
pub fn simulate_optimal(
    params: &PlannerParams,
    grid: GridSpec,
    opts: &SolveOptions,
    state0: &EpidemicState,
    horizon: f64,
    dt: f64,
) -> Result<(Solution, Scenario)> {
    state0.validate()?;
    let solution = solve_with(params, grid, opts)?;
    let scenario = simulate_policy(&solution.policy, params, state0, horizon, dt)?;
    Ok((solution, scenario))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT: f64 = 1.0 / 1460.0;

    #[test]
    fn no_infected_costs_nothing() {
        let p = PlannerParams::default();
        let g = GridSpec::new(3, 3, 2).unwrap();
        let pol = PolicyField::constant(g, p.l_bar, 0.0).unwrap();
        let st = EpidemicState::new(0.9, 0.0, 0.1, 0.0, 0.0).unwrap();
        assert_eq!(evaluate_policy(&pol, &p, &st, 20.0, DT).unwrap(), 0.0);
    }

    #[test]
    fn short_horizon_rejected() {
        let p = PlannerParams::default();
        let g = GridSpec::new(3, 3, 2).unwrap();
        let pol = PolicyField::constant(g, p.l_bar, 0.0).unwrap();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        assert!(evaluate_policy(&pol, &p, &st, 5.0, DT).is_err());
    }

    #[test]
    fn constant_lockdown_without_death_cost_is_pure_gdp_loss() {
        let p = PlannerParams {
            cost_per_death: 0.0,
            ..PlannerParams::default()
        };
        let g = GridSpec::new(3, 3, 2).unwrap();
        let pol = PolicyField::constant(g, p.l_bar, 0.35).unwrap();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        let cost = evaluate_policy(&pol, &p, &st, 20.0, DT).unwrap();
        assert!(cost > 0.0);
        // bounded by locking down the whole population forever
        assert!(cost < 0.35 / p.discount());
    }

    #[test]
    fn summary_tracks_lockdown_window() {
        let p = PlannerParams::default();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        let sc = run_controlled(|s| if s.t < 0.25 { 0.5 } else { 0.0 }, &p, &st, 1.0, DT).unwrap();
        assert!((sc.summary.lockdown_end - 0.25).abs() <= DT + 1e-12);
        assert!((sc.summary.lockdown_years - 0.25).abs() <= 2.0 * DT);
        assert_eq!(sc.summary.peak_lockdown, 0.5);
        let kv = sc.summary.to_key_values();
        assert!(kv.get("total_deaths").is_some());
    }
}
