//! Prices a death with a welfare criterion and re-solves the planner problem
//! under each price.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::epidemic::{EpidemicState, PlannerParams};
use crate::error::{Error, Result};
use crate::ethics::{criterion_value, csv_field, Allocation, WelfareCriterion};
use crate::output::decimal;
use crate::planner::{simulate_optimal, GridSpec, Scenario, Solution, SolveOptions};

/// Benchmark cost of a death in multiples of annual output `w`.
pub const BENCHMARK_DEATH_MULTIPLE: f64 = 20.0;
/// Ladder of flat death costs, in multiples of `w`.
pub const COST_LADDER: [f64; 4] = [0.0, 10.0, 20.0, 40.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VictimProfile {
    /// Well-being accrued before death.
    pub lived: f64,
    /// Well-being lost if the life ends now.
    pub remaining: f64,
    /// Output units per well-being unit.
    pub exchange_rate: f64,
}

impl Default for VictimProfile {
    fn default() -> Self {
        Self {
            lived: 30.0,
            remaining: 20.0,
            exchange_rate: 1.0,
        }
    }
}

impl VictimProfile {
    pub fn validate(&self) -> Result<()> {
        if !self.lived.is_finite() {
            return Err(Error::param("victim_lived", self.lived, "must be finite"));
        }
        if !(self.remaining.is_finite() && self.remaining >= 0.0) {
            return Err(Error::param(
                "victim_remaining",
                self.remaining,
                "must be >= 0",
            ));
        }
        if !(self.exchange_rate.is_finite() && self.exchange_rate > 0.0) {
            return Err(Error::param(
                "exchange_rate",
                self.exchange_rate,
                "must be > 0",
            ));
        }
        Ok(())
    }
}

/// Default reference population the victim is added to.
pub fn default_reference_pop() -> Allocation {
    Allocation::new(vec![50.0, 50.0]).expect("nonempty")
}

/// Welfare lost, in output units, when the victim's life stops at `lived`
/// instead of reaching `lived + remaining`.
pub fn death_cost_from_criterion(
    crit: &WelfareCriterion,
    reference_pop: &Allocation,
    victim: &VictimProfile,
) -> Result<f64> {
    victim.validate()?;
    let alive = reference_pop.with(victim.lived + victim.remaining);
    let dead = reference_pop.with(victim.lived);
    let loss = criterion_value(&alive, crit)? - criterion_value(&dead, crit)?;
    Ok(victim.exchange_rate * loss)
}

/// How a row prices a death.
#[derive(Debug, Clone, PartialEq)]
pub enum RowSpec {
    /// Flat benchmark cost with `chi = 0`.
    Baseline,
    Criterion(WelfareCriterion),
    /// Flat cost in multiples of `w`.
    Flat(f64),
}

impl fmt::Display for RowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowSpec::Baseline => f.write_str("baseline"),
            RowSpec::Criterion(c) => write!(f, "{c}"),
            RowSpec::Flat(m) => write!(f, "flat:{m}w"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SensitivityInput {
    pub params: PlannerParams,
    pub grid: GridSpec,
    pub options: SolveOptions,
    pub state0: EpidemicState,
    pub horizon: f64,
    pub dt: f64,
    pub reference_pop: Allocation,
    pub victim: VictimProfile,
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub solution: Solution,
    pub scenario: Scenario,
    /// Planner value interpolated at the initial state.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct SensitivityRow {
    pub spec: RowSpec,
    /// `None` when the criterion could not price a death.
    pub cost_per_death: Option<f64>,
    pub outcome: std::result::Result<RowOutcome, String>,
}

impl SensitivityRow {
    pub fn label(&self) -> String {
        self.spec.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct SensitivityReport {
    pub rows: Vec<SensitivityRow>,
}

fn row_params(input: &SensitivityInput, spec: &RowSpec) -> Result<PlannerParams> {
    let mut p = input.params.clone();
    match spec {
        RowSpec::Baseline => {
            p.cost_per_death = BENCHMARK_DEATH_MULTIPLE * p.w;
            p.chi = 0.0;
        }
        RowSpec::Criterion(c) => {
            p.cost_per_death = death_cost_from_criterion(c, &input.reference_pop, &input.victim)?;
        }
        RowSpec::Flat(m) => p.cost_per_death = m * p.w,
    }
    p.validate()?;
    Ok(p)
}

fn run_row(input: &SensitivityInput, spec: RowSpec) -> SensitivityRow {
    let params = match row_params(input, &spec) {
        Ok(p) => p,
        Err(e) => {
            return SensitivityRow {
                spec,
                cost_per_death: None,
                outcome: Err(e.to_string()),
            }
        }
    };
    let outcome = simulate_optimal(
        &params,
        input.grid,
        &input.options,
        &input.state0,
        input.horizon,
        input.dt,
    )
    .map(|(solution, scenario)| RowOutcome {
        value: solution.value.interpolate(input.state0.s, input.state0.i),
        solution,
        scenario,
    })
    .map_err(|e| e.to_string());
    SensitivityRow {
        spec,
        cost_per_death: Some(params.cost_per_death),
        outcome,
    }
}

/// Solves one row per spec; rows run in parallel and keep input order.
pub fn run_rows(input: &SensitivityInput, specs: Vec<RowSpec>) -> Result<SensitivityReport> {
    if specs.is_empty() {
        return Err(Error::param("criteria", 0.0, "at least one row required"));
    }
    input.params.validate()?;
    input.grid.validate()?;
    input.state0.validate()?;
    input.victim.validate()?;
    let rows = specs.into_par_iter().map(|s| run_row(input, s)).collect();
    Ok(SensitivityReport { rows })
}

/// Baseline row followed by one row per criterion.
pub fn run_sensitivity(
    input: &SensitivityInput,
    criteria: &[WelfareCriterion],
) -> Result<SensitivityReport> {
    if criteria.is_empty() {
        return Err(Error::param(
            "criteria",
            0.0,
            "at least one criterion required",
        ));
    }
    let mut specs = vec![RowSpec::Baseline];
    specs.extend(criteria.iter().cloned().map(RowSpec::Criterion));
    run_rows(input, specs)
}

/// Flat-cost rows over [`COST_LADDER`].
pub fn run_cost_ladder(input: &SensitivityInput) -> Result<SensitivityReport> {
    run_rows(
        input,
        COST_LADDER.iter().map(|&m| RowSpec::Flat(m)).collect(),
    )
}

impl SensitivityReport {
    pub fn find(&self, spec: &RowSpec) -> Option<&SensitivityRow> {
        self.rows.iter().find(|r| &r.spec == spec)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SensitivityRow> {
        self.rows.iter().filter(|r| r.outcome.is_err())
    }

    /// `criterion,cost_per_death,peak_L,lockdown_years,deaths,gdp_loss,value`;
    /// failed rows carry `failed` in every result column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "criterion,cost_per_death,peak_L,lockdown_years,deaths,gdp_loss,value"
        )?;
        for row in &self.rows {
            let cost = row
                .cost_per_death
                .map(decimal)
                .unwrap_or_else(|| "failed".into());
            write!(out, "{},{}", csv_field(&row.label()), cost)?;
            match &row.outcome {
                Ok(o) => {
                    let s = &o.scenario.summary;
                    writeln!(
                        out,
                        ",{},{},{},{},{}",
                        decimal(s.peak_lockdown),
                        decimal(s.lockdown_years),
                        decimal(s.total_deaths),
                        decimal(s.discounted_gdp_loss),
                        decimal(o.value)
                    )?;
                }
                Err(_) => writeln!(out, ",failed,failed,failed,failed,failed")?,
            }
        }
        Ok(())
    }

    /// Sup-norm policy difference for every unordered pair of rows.
    pub fn write_policy_diff_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "criterion_a,criterion_b,policy_supnorm_diff")?;
        for (k, a) in self.rows.iter().enumerate() {
            for b in &self.rows[k + 1..] {
                let diff = match (&a.outcome, &b.outcome) {
                    (Ok(x), Ok(y)) => x
                        .solution
                        .policy
                        .sup_diff(&y.solution.policy)
                        .map(decimal)
                        .unwrap_or_else(|| "grid-mismatch".into()),
                    _ => "failed".into(),
                };
                writeln!(
                    out,
                    "{},{},{}",
                    csv_field(&a.label()),
                    csv_field(&b.label()),
                    diff
                )?;
            }
        }
        Ok(())
    }

    /// Error messages of failed rows, one per line.
    pub fn failure_log(&self) -> String {
        self.failures()
            .map(|r| format!("{}: {}\n", r.label(), r.outcome.as_ref().err().unwrap()))
            .collect()
    }
}
