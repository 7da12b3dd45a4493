use crate::epidemic::{EpidemicState, PlannerParams};
use crate::error::{Error, Result};

/// Output lost per year: lockdown cost plus priced deaths.
pub fn flow_cost(state: &EpidemicState, lockdown: f64, params: &PlannerParams) -> Result<f64> {
    params.check_lockdown(lockdown)?;
    Ok(flow_cost_at(state.s, state.i, lockdown, params))
}

/// GDP-loss part of the flow cost.
#[inline]
pub(crate) fn gdp_loss_at(s: f64, i: f64, lockdown: f64, params: &PlannerParams) -> f64 {
    let tau = params.testing.tau();
    params.w * lockdown * (tau * (s + i) + 1.0 - tau)
}

/// Death part of the flow cost.
#[inline]
pub(crate) fn death_cost_at(i: f64, params: &PlannerParams) -> f64 {
    params.phi_unchecked(i) * i * params.death_price()
}

#[inline]
pub(crate) fn flow_cost_at(s: f64, i: f64, lockdown: f64, params: &PlannerParams) -> f64 {
    gdp_loss_at(s, i, lockdown, params) + death_cost_at(i, params)
}

/// Planner value on the `S = 0` edge.
///
/// Without susceptibles nothing can be gained by locking down, infections
/// decay as `I e^{-gamma t}` and the value is the discounted death cost of
/// that decay in closed form.
pub fn boundary_value_s_zero(infected: f64, params: &PlannerParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&infected) {
        return Err(Error::OutOfDomain {
            what: "I",
            value: infected,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(boundary_value_unchecked(infected, params))
}

#[inline]
pub(crate) fn boundary_value_unchecked(infected: f64, params: &PlannerParams) -> f64 {
    let rho = params.discount();
    params.death_price()
        * (params.phi0 * infected / (rho + params.gamma)
            + params.kappa * infected * infected / (rho + 2.0 * params.gamma))
}
