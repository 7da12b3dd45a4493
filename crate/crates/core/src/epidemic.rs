//! SIR dynamics with a lockdown control.
//!
//! The population is normalised to one at `t = 0`. Infected individuals exit
//! at total rate `gamma`; of that exit flow a state-dependent share
//! `phi(I) = phi0 + kappa * I` dies and the rest recovers. A lockdown of
//! fraction `L` with effectiveness `theta` scales new infections by
//! `(1 - theta * L)^2`. Time is measured in years throughout.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::output::decimal;

/// Slack allowed on each compartment before an integration step is rejected.
pub const COMPARTMENT_SLACK: f64 = 1e-12;

/// Whether recovered individuals can be identified and exempted from lockdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Testing {
    /// `tau = 0`: the lockdown hits everyone alive.
    None,
    /// `tau = 1`: only `S + I` is locked down.
    Recovered,
}

impl Testing {
    pub fn tau(self) -> f64 {
        match self {
            Testing::None => 0.0,
            Testing::Recovered => 1.0,
        }
    }

    pub fn from_tau(tau: u8) -> Option<Self> {
        match tau {
            0 => Some(Testing::None),
            1 => Some(Testing::Recovered),
            _ => None,
        }
    }
}

/// Model constants for the epidemic and the planner's objective.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerParams {
    /// New-infection contacts per infected per year.
    pub beta_contact: f64,
    /// Exit rate from infection per year.
    pub gamma: f64,
    /// Baseline death-rate coefficient per year.
    pub phi0: f64,
    /// Congestion slope of the death rate, per year per unit of infected.
    pub kappa: f64,
    /// Lockdown effectiveness in (0, 1).
    pub theta: f64,
    /// Maximal lockdown fraction in (0, 1].
    pub l_bar: f64,
    pub testing: Testing,
    /// Pure discount rate per year.
    pub r: f64,
    /// Vaccine-arrival hazard per year.
    pub nu: f64,
    /// Output per worker per year.
    pub w: f64,
    /// Output units lost per death.
    pub cost_per_death: f64,
    /// Additional death penalty in output units.
    pub chi: f64,
}

impl Default for PlannerParams {
    /// Benchmark calibration. `beta_contact`, `gamma` and `l_bar` are not
    /// pinned by the calibration anchors and use 0.2/day, 1/18 per day and
    /// 0.7 respectively, expressed in years.
    fn default() -> Self {
        let gamma = 365.0 / 18.0;
        Self {
            beta_contact: 0.2 * 365.0,
            gamma,
            phi0: 0.01 * gamma,
            kappa: 0.05 * gamma,
            theta: 0.5,
            l_bar: 0.7,
            testing: Testing::Recovered,
            r: 0.05,
            nu: 1.0 / 1.5,
            w: 1.0,
            cost_per_death: 20.0,
            chi: 0.0,
        }
    }
}

impl PlannerParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("beta_contact", self.beta_contact),
            ("gamma", self.gamma),
            ("r", self.r),
            ("nu", self.nu),
            ("w", self.w),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::param(name, value, "must be finite and > 0"));
            }
        }
        if !(self.phi0.is_finite() && self.phi0 > 0.0 && self.phi0 <= self.gamma) {
            return Err(Error::param("phi0", self.phi0, "must lie in (0, gamma]"));
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::param("kappa", self.kappa, "must be finite and >= 0"));
        }
        if self.phi0 + self.kappa > self.gamma {
            return Err(Error::param(
                "kappa",
                self.kappa,
                format!("phi0 + kappa must not exceed gamma = {}", self.gamma),
            ));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::param("theta", self.theta, "must lie in (0, 1)"));
        }
        if !(self.l_bar > 0.0 && self.l_bar <= 1.0) {
            return Err(Error::param("l_bar", self.l_bar, "must lie in (0, 1]"));
        }
        for (name, value) in [("cost_per_death", self.cost_per_death), ("chi", self.chi)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::param(name, value, "must be finite and >= 0"));
            }
        }
        Ok(())
    }

    /// Effective discount rate of the planner, `r + nu`.
    pub fn discount(&self) -> f64 {
        self.r + self.nu
    }

    /// Price of one death in output units.
    pub fn death_price(&self) -> f64 {
        self.cost_per_death + self.chi
    }

    /// Largest integration step accepted by [`integrate_trajectory`].
    pub fn max_dt(&self) -> f64 {
        0.1 / self.beta_contact.max(self.gamma)
    }

    pub(crate) fn check_lockdown(&self, lockdown: f64) -> Result<()> {
        if (0.0..=self.l_bar).contains(&lockdown) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "lockdown",
                value: lockdown,
                lo: 0.0,
                hi: self.l_bar,
            })
        }
    }

    #[inline]
    pub(crate) fn phi_unchecked(&self, infected: f64) -> f64 {
        self.phi0 + self.kappa * infected
    }

    /// New infections per year, `beta * S * I * (1 - theta L)^2`.
    #[inline]
    pub(crate) fn infection_flow(&self, s: f64, i: f64, lockdown: f64) -> f64 {
        let damp = 1.0 - self.theta * lockdown;
        self.beta_contact * s * i * damp * damp
    }
}

/// Death rate per year at infected fraction `infected`.
pub fn fatality_rate(infected: f64, params: &PlannerParams) -> Result<f64> {
    check_fraction("I", infected)?;
    Ok(params.phi_unchecked(infected))
}

/// Diagnostic `beta / gamma`.
pub fn basic_reproduction_number(params: &PlannerParams) -> f64 {
    params.beta_contact / params.gamma
}

fn check_fraction(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// Compartment fractions at time `t` (years).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicState {
    pub s: f64,
    pub i: f64,
    pub r: f64,
    pub d: f64,
    pub t: f64,
}

impl EpidemicState {
    pub fn new(s: f64, i: f64, r: f64, d: f64, t: f64) -> Result<Self> {
        let state = Self { s, i, r, d, t };
        state.validate()?;
        Ok(state)
    }

    /// State at `t = 0` with nobody recovered or dead yet beyond `1 - s - i`.
    pub fn initial(s: f64, i: f64) -> Result<Self> {
        Self::new(s, i, (1.0 - s - i).max(0.0), 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction("S", self.s)?;
        check_fraction("I", self.i)?;
        check_fraction("R", self.r)?;
        check_fraction("D", self.d)?;
        let total = self.total();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("S+I+R+D", total, "must equal 1 within 1e-9"));
        }
        Ok(())
    }

    pub fn total(&self) -> f64 {
        self.s + self.i + self.r + self.d
    }

    pub fn alive(&self) -> f64 {
        self.s + self.i + self.r
    }

    fn as_array(&self) -> [f64; 4] {
        [self.s, self.i, self.r, self.d]
    }

    fn from_array(y: &[f64], t: f64) -> Self {
        Self {
            s: y[0],
            i: y[1],
            r: y[2],
            d: y[3],
            t,
        }
    }
}

/// Time derivatives of the four compartments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub ds: f64,
    pub di: f64,
    pub dr: f64,
    pub dd: f64,
}

impl Derivatives {
    pub fn sum(&self) -> f64 {
        self.ds + self.di + self.dr + self.dd
    }
}

pub fn sir_derivatives(
    state: &EpidemicState,
    lockdown: f64,
    params: &PlannerParams,
) -> Result<Derivatives> {
    state.validate()?;
    params.check_lockdown(lockdown)?;
    Ok(derivatives_unchecked(state.s, state.i, lockdown, params))
}

#[inline]
fn derivatives_unchecked(s: f64, i: f64, lockdown: f64, params: &PlannerParams) -> Derivatives {
    let new_infections = params.infection_flow(s, i, lockdown);
    let exits = params.gamma * i;
    let deaths = params.phi_unchecked(i) * i;
    Derivatives {
        ds: -new_infections,
        di: new_infections - exits,
        dr: exits - deaths,
        dd: deaths,
    }
}

/// One sample of a trajectory: the state and the lockdown applied there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub state: EpidemicState,
    pub lockdown: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes `t,S,I,R,D,L`, keeping every `stride`-th sample and always the last one.
    pub fn write_csv<W: Write>(&self, mut out: W, stride: usize) -> std::io::Result<()> {
        let stride = stride.max(1);
        writeln!(out, "t,S,I,R,D,L")?;
        let n = self.points.len();
        for (k, p) in self.points.iter().enumerate() {
            if k % stride != 0 && k + 1 != n {
                continue;
            }
            let st = &p.state;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                decimal(st.t),
                decimal(st.s),
                decimal(st.i),
                decimal(st.r),
                decimal(st.d),
                decimal(p.lockdown)
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for EpidemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} S={} I={} R={} D={}",
            self.t, self.s, self.i, self.r, self.d
        )
    }
}

/// Fixed-step RK4 over the epidemic state.
///
/// `control` is evaluated at every stage, so closed-loop policies see the
/// stage states.
pub fn integrate_trajectory<C>(
    state0: &EpidemicState,
    control: C,
    params: &PlannerParams,
    horizon: f64,
    dt: f64,
) -> Result<Trajectory>
where
    C: Fn(&EpidemicState) -> f64,
{
    integrate_with(state0, control, params, horizon, dt, |_, _| [0.0; 0]).map(|(traj, _)| traj)
}

/// RK4 integration that also accumulates `K` running integrals of
/// `accumulate(state, lockdown)` along the path.
pub fn integrate_with<C, A, const K: usize>(
    state0: &EpidemicState,
    control: C,
    params: &PlannerParams,
    horizon: f64,
    dt: f64,
    accumulate: A,
) -> Result<(Trajectory, [f64; K])>
where
    C: Fn(&EpidemicState) -> f64,
    A: Fn(&EpidemicState, f64) -> [f64; K],
{
    params.validate()?;
    state0.validate()?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::param("horizon", horizon, "must be finite and > 0"));
    }
    let max_dt = params.max_dt();
    if !(dt > 0.0 && dt <= max_dt) {
        return Err(Error::param(
            "dt",
            dt,
            format!("must lie in (0, {max_dt}] = (0, 0.1 / max(beta, gamma)]"),
        ));
    }

    let steps = (horizon / dt - 1e-9).ceil().max(1.0) as usize;

    // Stage evaluation: compartment rates plus accumulator rates.
    let rates = |y: &[f64; 4], t: f64| -> Result<([f64; 4], [f64; K])> {
        let st = EpidemicState::from_array(y, t);
        let l = control(&st);
        params.check_lockdown(l)?;
        let d = derivatives_unchecked(y[0], y[1], l, params);
        Ok(([d.ds, d.di, d.dr, d.dd], accumulate(&st, l)))
    };

    let mut points = Vec::with_capacity(steps + 1);
    let mut y = state0.as_array();
    let mut acc = [0.0; K];
    let mut t = state0.t;
    let first_l = control(state0);
    params.check_lockdown(first_l)?;
    points.push(TrajectoryPoint {
        state: *state0,
        lockdown: first_l,
    });

    for step in 1..=steps {
        let t_next = if step == steps {
            state0.t + horizon
        } else {
            state0.t + step as f64 * dt
        };
        let h = t_next - t;
        let (k1, a1) = rates(&y, t)?;
        let (k2, a2) = rates(&axpy(&y, 0.5 * h, &k1), t + 0.5 * h)?;
        let (k3, a3) = rates(&axpy(&y, 0.5 * h, &k2), t + 0.5 * h)?;
        let (k4, a4) = rates(&axpy(&y, h, &k3), t + h)?;
        for c in 0..4 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        for c in 0..K {
            acc[c] += h / 6.0 * (a1[c] + 2.0 * a2[c] + 2.0 * a3[c] + a4[c]);
        }
        t = t_next;
        for (c, name) in ["S", "I", "R", "D"].into_iter().enumerate() {
            let v = y[c];
            if !(-COMPARTMENT_SLACK..=1.0 + COMPARTMENT_SLACK).contains(&v) {
                return Err(Error::Integration {
                    step,
                    t,
                    compartment: name,
                    value: v,
                });
            }
        }
        let state = EpidemicState::from_array(&y, t);
        let l = control(&state);
        params.check_lockdown(l)?;
        points.push(TrajectoryPoint { state, lockdown: l });
    }
    Ok((Trajectory { points }, acc))
}

#[inline]
fn axpy(y: &[f64; 4], h: f64, k: &[f64; 4]) -> [f64; 4] {
    [
        y[0] + h * k[0],
        y[1] + h * k[1],
        y[2] + h * k[2],
        y[3] + h * k[3],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bench() -> PlannerParams {
        PlannerParams::default()
    }

    #[test]
    fn fatality_anchors() {
        let p = bench();
        assert_eq!(fatality_rate(0.0, &p).unwrap(), 0.01 * p.gamma);
        assert_relative_eq!(
            fatality_rate(0.4, &p).unwrap(),
            0.03 * p.gamma,
            max_relative = 4.0 * f64::EPSILON
        );
        assert_relative_eq!(
            fatality_rate(0.2, &p).unwrap(),
            0.02 * p.gamma,
            max_relative = 4.0 * f64::EPSILON
        );
        assert!(fatality_rate(1.0, &p).unwrap() <= p.gamma);
    }

    #[test]
    fn fatality_rejects_out_of_range() {
        let p = bench();
        assert!(fatality_rate(-0.01, &p).is_err());
        assert!(fatality_rate(1.01, &p).is_err());
        assert!(fatality_rate(f64::NAN, &p).is_err());
    }

    #[test]
    fn derivatives_at_disease_free_state_vanish() {
        let p = bench();
        let st = EpidemicState::new(0.7, 0.0, 0.3, 0.0, 0.0).unwrap();
        for l in [0.0, 0.3, p.l_bar] {
            let d = sir_derivatives(&st, l, &p).unwrap();
            assert_eq!((d.ds, d.di, d.dr, d.dd), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn derivatives_direct_substitution() {
        let p = bench();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        let d = sir_derivatives(&st, 0.0, &p).unwrap();
        assert_relative_eq!(d.ds, -p.beta_contact * 0.0196, max_relative = 1e-15);
        assert!(d.sum().abs() < 1e-14);
    }

    #[test]
    fn full_lockdown_quarters_infection_flow() {
        let p = PlannerParams {
            l_bar: 1.0,
            ..bench()
        };
        let st = EpidemicState::initial(0.6, 0.3).unwrap();
        let open = sir_derivatives(&st, 0.0, &p).unwrap();
        let closed = sir_derivatives(&st, 1.0, &p).unwrap();
        assert_relative_eq!(closed.ds, 0.25 * open.ds, max_relative = 1e-15);
    }

    #[test]
    fn lockdown_outside_cap_rejected() {
        let p = bench();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        assert!(sir_derivatives(&st, p.l_bar + 1e-9, &p).is_err());
        assert!(sir_derivatives(&st, -1e-9, &p).is_err());
    }

    #[test]
    fn reproduction_number() {
        let mut p = bench();
        p.beta_contact = p.gamma;
        assert_eq!(basic_reproduction_number(&p), 1.0);
        p.beta_contact = 2.0 * p.gamma;
        assert_eq!(basic_reproduction_number(&p), 2.0);
    }

    #[test]
    fn equilibrium_trajectory_is_constant() {
        let p = bench();
        let st = EpidemicState::new(0.5, 0.0, 0.5, 0.0, 0.0).unwrap();
        let traj = integrate_trajectory(&st, |_| 0.3, &p, 1.0, 1.0 / 1460.0).unwrap();
        for pt in &traj.points {
            assert_eq!(
                (pt.state.s, pt.state.i, pt.state.r, pt.state.d),
                (0.5, 0.0, 0.5, 0.0)
            );
        }
    }

    #[test]
    fn dt_above_stability_bound_rejected() {
        let p = bench();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        let err = integrate_trajectory(&st, |_| 0.0, &p, 1.0, 1.0 / 365.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "dt", .. }));
        assert!(integrate_trajectory(&st, |_| 0.0, &p, 0.0, 1e-4).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = bench();
        p.theta = 1.5;
        assert!(p.validate().is_err());
        let mut p = bench();
        p.kappa = p.gamma;
        assert!(p.validate().is_err());
        let mut p = bench();
        p.l_bar = 0.0;
        assert!(p.validate().is_err());
        assert!(Testing::from_tau(2).is_none());
    }

    #[test]
    fn csv_header_and_stride() {
        let p = bench();
        let st = EpidemicState::initial(0.98, 0.02).unwrap();
        let traj = integrate_trajectory(&st, |_| 0.0, &p, 0.01, 0.001).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,S,I,R,D,L");
        // samples 0, 4, 8 and the final sample 10
        assert_eq!(lines.len(), 1 + 4);
    }
}
