//! Plain `key=value` run configuration with `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::epidemic::{EpidemicState, PlannerParams, Testing};
use crate::error::{Error, Result};
use crate::ethics::{parse_criteria, Allocation, CheckConfig, WelfareCriterion};
use crate::planner::{ControlSet, GridSpec, SolveOptions};
use crate::sensitivity::{default_reference_pop, SensitivityInput, VictimProfile};

/// Accepted keys, in serialization order.
pub const KEYS: [&str; 34] = [
    "beta",
    "gamma",
    "phi0",
    "kappa",
    "theta",
    "l_bar",
    "tau",
    "r",
    "nu",
    "w",
    "cost_per_death",
    "chi",
    "n_s",
    "n_i",
    "n_l",
    "tol",
    "max_iters",
    "s0",
    "i0",
    "horizon",
    "dt",
    "output_stride",
    "seed",
    "out_dir",
    "criteria",
    "samples",
    "pop_cap",
    "level_min",
    "level_max",
    "reference_pop",
    "victim_lived",
    "victim_remaining",
    "exchange_rate",
    "n_max",
];

pub const DEFAULT_CRITERIA: &str = "cu|tu|clu:c=1|au|rdclu:beta=0.9,c=1";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PlannerParams,
    pub grid: GridSpec,
    pub tol: f64,
    pub max_iters: usize,
    pub s0: f64,
    pub i0: f64,
    pub horizon: f64,
    pub dt: f64,
    /// Every `output_stride`-th integration step is written to trajectory files.
    pub output_stride: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub criteria: Vec<WelfareCriterion>,
    pub samples: usize,
    pub pop_cap: usize,
    pub level_min: f64,
    pub level_max: f64,
    pub reference_pop: Allocation,
    pub victim: VictimProfile,
    /// Population cap of the witness searches.
    pub n_max: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let check = CheckConfig::default();
        Self {
            params: PlannerParams::default(),
            grid: GridSpec::default(),
            tol: 1e-8,
            max_iters: 100_000,
            s0: 0.98,
            i0: 0.02,
            horizon: 20.0,
            dt: 1.0 / 1460.0,
            output_stride: 4,
            seed: check.seed,
            out_dir: PathBuf::from("out"),
            criteria: parse_criteria(DEFAULT_CRITERIA).expect("default criteria parse"),
            samples: check.samples,
            pop_cap: check.pop_cap,
            level_min: check.range.0,
            level_max: check.range.1,
            reference_pop: default_reference_pop(),
            victim: VictimProfile::default(),
            n_max: 100_000,
        }
    }
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

fn config_err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(e: &Entry<'_>, key: &str, what: &str) -> Result<T> {
    e.value
        .parse::<T>()
        .map_err(|_| config_err(e.line, key, format!("`{}` is not {what}", e.value)))
}

/// Config key that carries a validated parameter.
fn key_for(param: &str) -> &str {
    match param {
        "beta_contact" => "beta",
        other => other,
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, Entry<'_>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected key=value"))?;
            let key = key.trim();
            let known = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| config_err(line, key, "unknown key"))?;
            if let Some(prev) = entries.get(known) {
                return Err(config_err(
                    line,
                    key,
                    format!("duplicate key, first set on line {}", prev.line),
                ));
            }
            entries.insert(
                known,
                Entry {
                    line,
                    value: value.trim(),
                },
            );
        }

        let mut cfg = RunConfig::default();
        let f = |key: &str, default: f64| -> Result<f64> {
            match entries.get(key) {
                Some(e) => {
                    let v: f64 = parse_value(e, key, "a number")?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(config_err(e.line, key, "must be finite"))
                    }
                }
                None => Ok(default),
            }
        };
        let u = |key: &str, default: usize| -> Result<usize> {
            entries.get(key).map_or(Ok(default), |e| {
                parse_value(e, key, "a non-negative integer")
            })
        };

        let p = &mut cfg.params;
        p.beta_contact = f("beta", p.beta_contact)?;
        p.gamma = f("gamma", p.gamma)?;
        p.phi0 = f("phi0", 0.01 * p.gamma)?;
        p.kappa = f("kappa", 0.05 * p.gamma)?;
        p.theta = f("theta", p.theta)?;
        p.l_bar = f("l_bar", p.l_bar)?;
        if let Some(e) = entries.get("tau") {
            let tau: u8 = parse_value(e, "tau", "0 or 1")?;
            p.testing = Testing::from_tau(tau)
                .ok_or_else(|| config_err(e.line, "tau", "must be 0 or 1"))?;
        }
        p.r = f("r", p.r)?;
        p.nu = f("nu", p.nu)?;
        p.w = f("w", p.w)?;
        p.cost_per_death = f("cost_per_death", p.cost_per_death)?;
        p.chi = f("chi", p.chi)?;

        cfg.grid = GridSpec {
            n_s: u("n_s", cfg.grid.n_s)?,
            n_i: u("n_i", cfg.grid.n_i)?,
            n_l: u("n_l", cfg.grid.n_l)?,
        };
        cfg.tol = f("tol", cfg.tol)?;
        cfg.max_iters = u("max_iters", cfg.max_iters)?;
        cfg.s0 = f("s0", cfg.s0)?;
        cfg.i0 = f("i0", cfg.i0)?;
        cfg.horizon = f("horizon", cfg.horizon)?;
        cfg.dt = f("dt", cfg.dt)?;
        cfg.output_stride = u("output_stride", cfg.output_stride)?;
        if let Some(e) = entries.get("seed") {
            cfg.seed = parse_value(e, "seed", "a non-negative integer")?;
        }
        if let Some(e) = entries.get("out_dir") {
            if e.value.is_empty() {
                return Err(config_err(e.line, "out_dir", "must not be empty"));
            }
            cfg.out_dir = PathBuf::from(e.value);
        }
        if let Some(e) = entries.get("criteria") {
            cfg.criteria = parse_criteria(e.value)
                .map_err(|err| config_err(e.line, "criteria", err.to_string()))?;
        }
        cfg.samples = u("samples", cfg.samples)?;
        cfg.pop_cap = u("pop_cap", cfg.pop_cap)?;
        cfg.level_min = f("level_min", cfg.level_min)?;
        cfg.level_max = f("level_max", cfg.level_max)?;
        if let Some(e) = entries.get("reference_pop") {
            cfg.reference_pop = e
                .value
                .parse()
                .map_err(|err: Error| config_err(e.line, "reference_pop", err.to_string()))?;
        }
        cfg.victim.lived = f("victim_lived", cfg.victim.lived)?;
        cfg.victim.remaining = f("victim_remaining", cfg.victim.remaining)?;
        cfg.victim.exchange_rate = f("exchange_rate", cfg.victim.exchange_rate)?;
        cfg.n_max = u("n_max", cfg.n_max)?;

        cfg.validate().map_err(|err| match err {
            Error::Config { key, message, .. } => {
                let line = entries.get(key.as_str()).map_or(0, |e| e.line);
                Error::Config { line, key, message }
            }
            other => other,
        })?;
        Ok(cfg)
    }

    /// Re-checks every invariant. Errors are [`Error::Config`] with line 0;
    /// [`RunConfig::parse`] fills in the line of the offending key.
    pub fn validate(&self) -> Result<()> {
        let wrap = |err: Error| match err {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => config_err(0, key_for(name), format!("{value} {reason}")),
            other => config_err(0, "config", other.to_string()),
        };
        self.params.validate().map_err(wrap)?;
        self.grid.validate().map_err(wrap)?;
        let checks: [(&str, bool, String); 11] = [
            ("tol", self.tol > 0.0, format!("{} must be > 0", self.tol)),
            ("max_iters", self.max_iters >= 1, "must be >= 1".into()),
            (
                "s0",
                (0.0..=1.0).contains(&self.s0),
                format!("{} must lie in [0, 1]", self.s0),
            ),
            (
                "i0",
                (0.0..=1.0).contains(&self.i0) && self.s0 + self.i0 <= 1.0,
                format!("s0 + i0 = {} must lie in [0, 1]", self.s0 + self.i0),
            ),
            (
                "horizon",
                self.horizon > 0.0,
                format!("{} must be > 0", self.horizon),
            ),
            (
                "dt",
                self.dt > 0.0 && self.dt <= self.params.max_dt(),
                format!(
                    "{} must lie in (0, {}] = (0, 0.1 / max(beta, gamma)]",
                    self.dt,
                    self.params.max_dt()
                ),
            ),
            (
                "output_stride",
                self.output_stride >= 1,
                "must be >= 1".into(),
            ),
            (
                "criteria",
                !self.criteria.is_empty(),
                "must list at least one criterion".into(),
            ),
            (
                "level_max",
                self.level_min < self.level_max,
                format!(
                    "level_min {} must be < level_max {}",
                    self.level_min, self.level_max
                ),
            ),
            ("n_max", self.n_max >= 1, "must be >= 1".into()),
            ("samples", self.samples >= 1, "must be >= 1".into()),
        ];
        for (key, ok, message) in checks {
            if !ok {
                return Err(config_err(0, key, message));
            }
        }
        if self.pop_cap < 2 {
            return Err(config_err(0, "pop_cap", "must be >= 2"));
        }
        self.victim.validate().map_err(wrap)?;
        Ok(())
    }

    /// Canonical `key=value` form with every key present; parsing it yields
    /// an equal config.
    pub fn serialize(&self) -> String {
        let p = &self.params;
        let criteria: Vec<String> = self.criteria.iter().map(|c| c.to_string()).collect();
        let tau = match p.testing {
            Testing::None => 0,
            Testing::Recovered => 1,
        };
        let values: [String; 34] = [
            p.beta_contact.to_string(),
            p.gamma.to_string(),
            p.phi0.to_string(),
            p.kappa.to_string(),
            p.theta.to_string(),
            p.l_bar.to_string(),
            tau.to_string(),
            p.r.to_string(),
            p.nu.to_string(),
            p.w.to_string(),
            p.cost_per_death.to_string(),
            p.chi.to_string(),
            self.grid.n_s.to_string(),
            self.grid.n_i.to_string(),
            self.grid.n_l.to_string(),
            self.tol.to_string(),
            self.max_iters.to_string(),
            self.s0.to_string(),
            self.i0.to_string(),
            self.horizon.to_string(),
            self.dt.to_string(),
            self.output_stride.to_string(),
            self.seed.to_string(),
            self.out_dir.display().to_string(),
            criteria.join("|"),
            self.samples.to_string(),
            self.pop_cap.to_string(),
            self.level_min.to_string(),
            self.level_max.to_string(),
            self.reference_pop.to_string(),
            self.victim.lived.to_string(),
            self.victim.remaining.to_string(),
            self.victim.exchange_rate.to_string(),
            self.n_max.to_string(),
        ];
        let mut out = String::new();
        for (key, value) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn state0(&self) -> Result<EpidemicState> {
        EpidemicState::initial(self.s0, self.i0)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            controls: ControlSet::Uniform,
        }
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig {
            samples: self.samples,
            seed: self.seed,
            pop_cap: self.pop_cap,
            range: (self.level_min, self.level_max),
        }
    }

    pub fn sensitivity_input(&self) -> Result<SensitivityInput> {
        Ok(SensitivityInput {
            params: self.params.clone(),
            grid: self.grid,
            options: self.solve_options(),
            state0: self.state0()?,
            horizon: self.horizon,
            dt: self.dt,
            reference_pop: self.reference_pop.clone(),
            victim: self.victim,
        })
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Self::parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(
            cfg.serialize(),
            RunConfig::parse("# nothing\n\n").unwrap().serialize()
        );
    }

    #[test]
    fn theta_out_of_range_names_key_and_bound() {
        let err = RunConfig::parse("s0 = 0.9\ntheta=1.5\n").unwrap_err();
        match &err {
            Error::Config { line, key, message } => {
                assert_eq!((*line, key.as_str()), (2, "theta"));
                assert!(message.contains("(0, 1)"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(err.to_string().contains("theta"));
    }

    #[test]
    fn unknown_and_malformed_keys_rejected() {
        let e = RunConfig::parse("\n\nbogus=1").unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, ref key, .. } if key == "bogus"));
        let e = RunConfig::parse("gamma=fast").unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, ref key, .. } if key == "gamma"));
        let e = RunConfig::parse("tau=2").unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "tau"));
        assert!(RunConfig::parse("theta").is_err());
        assert!(RunConfig::parse("r=0.05\nr=0.04").is_err());
        assert!(RunConfig::parse("criteria=clu").is_err());
        assert!(RunConfig::parse("gamma=inf").is_err());
    }

    #[test]
    fn initial_state_must_fit_the_simplex() {
        let e = RunConfig::parse("s0=0.9\ni0=0.2").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, ref key, .. } if key == "i0"));
    }

    #[test]
    fn phi0_and_kappa_follow_gamma() {
        let cfg = RunConfig::parse("gamma=10").unwrap();
        assert_eq!(cfg.params.phi0, 0.1);
        assert_eq!(cfg.params.kappa, 0.5);
    }

    #[test]
    fn beta_key_maps_to_contact_rate() {
        let e = RunConfig::parse("beta=-1").unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, ref key, .. } if key == "beta"));
    }

    #[test]
    fn serialize_round_trips() {
        let text = "beta=50.5\ngamma=12.25\ntheta=0.3\ntau=0\ncriteria=au|rdclu:beta=0.75,c=0.5,u=power:0.5\n\
                    reference_pop=1.5,-2,3\nseed=42\nout_dir=runs/a\ndt=0.001\n";
        let cfg = RunConfig::parse(text).unwrap();
        let again = RunConfig::parse(&cfg.serialize()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.serialize(), again.serialize());
        assert_eq!(cfg.params.testing, Testing::None);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn default_dt_respects_stability_bound() {
        let cfg = RunConfig::default();
        assert!(cfg.dt <= cfg.params.max_dt());
        assert!(RunConfig::parse("dt=0.0027397260273972603").is_err());
    }
}
