//! Subcommand orchestration and file emission.
//!
//! Every file written is a pure function of the effective config, so two runs
//! with the same config and seed produce identical bytes. Wall time is left
//! to the caller.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ethics::{
    axiom_suite, property_matrix, render_axiom_reports, repugnant_witness, very_sadistic_witness,
    write_axiom_reports_csv, Allocation, REPUGNANT_BASE, REPUGNANT_EPSILON,
};
use crate::output::{digest_hex, KeyValueBlock, OutputDir};
use crate::planner::{
    simulate_optimal, simulate_uncontrolled, solve_with, write_fields_csv, write_policy_csv,
};
use crate::sensitivity::{run_rows, RowSpec, COST_LADDER};

/// Population cap of the Very Sadistic search; the scan is quadratic in it.
pub const VERY_SADISTIC_N_MAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Simulate { no_control: bool },
    Ethics,
    Sensitivity,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Simulate { .. } => "simulate",
            Command::Ethics => "ethics",
            Command::Sensitivity => "sensitivity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Files written, manifest last.
    pub files: Vec<PathBuf>,
    /// Rows that failed without aborting the run.
    pub row_failures: Vec<String>,
}

/// Digest of the canonical config without `out_dir`, which only routes files.
pub fn config_digest(cfg: &RunConfig) -> String {
    let text: String = cfg
        .serialize()
        .lines()
        .filter(|l| !l.starts_with("out_dir="))
        .map(|l| format!("{l}\n"))
        .collect();
    digest_hex(text.as_bytes())
}

/// Runs `cmd` and writes its files plus `run_manifest` into `cfg.out_dir`.
pub fn execute(cfg: &RunConfig, cmd: Command) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut dir = OutputDir::create(&cfg.out_dir)?;
    let mut manifest = KeyValueBlock::new();
    manifest
        .push("subcommand", cmd.name())
        .push("version", env!("CARGO_PKG_VERSION"))
        .push("seed", cfg.seed)
        .push("config_sha256", config_digest(cfg));
    let row_failures = match cmd {
        Command::Solve => solve(cfg, &mut dir, &mut manifest)?,
        Command::Simulate { no_control } => simulate(cfg, no_control, &mut dir, &mut manifest)?,
        Command::Ethics => ethics(cfg, &mut dir)?,
        Command::Sensitivity => sensitivity(cfg, &mut dir)?,
    };
    for path in dir.written().to_vec() {
        let bytes = std::fs::read(&path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        manifest.push(format!("sha256.{name}"), digest_hex(&bytes));
    }
    dir.write_text("run_manifest", &manifest.render())?;
    Ok(RunOutcome {
        files: dir.written().to_vec(),
        row_failures,
    })
}

fn solve(
    cfg: &RunConfig,
    dir: &mut OutputDir,
    manifest: &mut KeyValueBlock,
) -> Result<Vec<String>> {
    let sol = solve_with(&cfg.params, cfg.grid, &cfg.solve_options())?;
    dir.write_with("value.csv", |w| {
        write_fields_csv(w, &sol.value, &sol.policy)
    })?;
    dir.write_with("policy.csv", |w| write_policy_csv(w, &sol.policy))?;
    manifest
        .push("sweeps", sol.sweeps)
        .push("residual", sol.residual)
        .push("value_at_state0", sol.value.interpolate(cfg.s0, cfg.i0));
    Ok(Vec::new())
}

fn simulate(
    cfg: &RunConfig,
    no_control: bool,
    dir: &mut OutputDir,
    manifest: &mut KeyValueBlock,
) -> Result<Vec<String>> {
    let state0 = cfg.state0()?;
    let mut summary = KeyValueBlock::new();
    summary
        .push("control", if no_control { "none" } else { "optimal" })
        .push("tau", cfg.params.testing.tau());
    let scenario = if no_control {
        simulate_uncontrolled(&cfg.params, &state0, cfg.horizon, cfg.dt)?
    } else {
        let (sol, scenario) = simulate_optimal(
            &cfg.params,
            cfg.grid,
            &cfg.solve_options(),
            &state0,
            cfg.horizon,
            cfg.dt,
        )?;
        summary.push("value_at_state0", sol.value.interpolate(cfg.s0, cfg.i0));
        manifest
            .push("sweeps", sol.sweeps)
            .push("residual", sol.residual);
        scenario
    };
    let kv = scenario.summary.to_key_values();
    let mut text = summary.render();
    text.push_str(&kv.render());
    dir.write_with("trajectory.csv", |w| {
        scenario.trajectory.write_csv(w, cfg.output_stride)
    })?;
    dir.write_text("summary.txt", &text)?;
    Ok(Vec::new())
}

fn ethics(cfg: &RunConfig, dir: &mut OutputDir) -> Result<Vec<String>> {
    let check = cfg.check_config();
    let reports = axiom_suite(&cfg.criteria, &check)?;
    let matrix = property_matrix(&cfg.criteria, &check)?;
    dir.write_with("axioms.csv", |w| write_axiom_reports_csv(w, &reports))?;
    dir.write_with("property_matrix.csv", |w| matrix.write_csv(w))?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "seed={} samples={} pop_cap={} levels=[{}, {}]\n",
        check.seed, check.samples, check.pop_cap, check.range.0, check.range.1
    );
    text.push_str("axioms\n");
    text.push_str(&render_axiom_reports(&reports));
    text.push_str("\nproperty matrix (table: reference checkmark, no-row when unlisted)\n");
    text.push_str(&matrix.render_text());
    text.push_str("\nwitness searches\n");
    let base = Allocation::new(vec![REPUGNANT_BASE])?;
    for crit in &cfg.criteria {
        let repugnant = match repugnant_witness(crit, &base, REPUGNANT_EPSILON, cfg.n_max)? {
            Some(w) => format!(
                "{} copies of {} beat ({}): {} > {}",
                w.n, w.epsilon, REPUGNANT_BASE, w.clones_value, w.base_value
            ),
            None => format!("none up to n={}", cfg.n_max),
        };
        let sadistic = match very_sadistic_witness(crit, VERY_SADISTIC_N_MAX.min(cfg.n_max))? {
            Some(w) => format!(
                "({}) ranked below ({}): {} < {}",
                w.positive, w.negative, w.positive_value, w.negative_value
            ),
            None => format!("none up to n={}", VERY_SADISTIC_N_MAX.min(cfg.n_max)),
        };
        let _ = writeln!(text, "{crit} repugnant: {repugnant}");
        let _ = writeln!(text, "{crit} very-sadistic: {sadistic}");
        if let Some(bound) = crit.rank_discount_bound(REPUGNANT_EPSILON) {
            let _ = writeln!(
                text,
                "{crit} value of {} copies of {}: {} (bound {})",
                cfg.n_max,
                REPUGNANT_EPSILON,
                crit.egalitarian_value(REPUGNANT_EPSILON, cfg.n_max),
                bound
            );
        }
    }
    dir.write_text("ethics_report.txt", &text)?;
    Ok(Vec::new())
}

fn sensitivity(cfg: &RunConfig, dir: &mut OutputDir) -> Result<Vec<String>> {
    let input = cfg.sensitivity_input()?;
    let mut specs = vec![RowSpec::Baseline];
    specs.extend(cfg.criteria.iter().cloned().map(RowSpec::Criterion));
    specs.extend(COST_LADDER.iter().map(|&m| RowSpec::Flat(m)));
    let report = run_rows(&input, specs)?;
    dir.write_with("sensitivity.csv", |w| report.write_csv(w))?;
    dir.write_with("policy_diff.csv", |w| report.write_policy_diff_csv(w))?;
    Ok(report.failure_log().lines().map(str::to_string).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(dir: &std::path::Path) -> RunConfig {
        let mut cfg = RunConfig::parse("n_s=21\nn_i=21\nn_l=6\nsamples=50\nn_max=200").unwrap();
        cfg.out_dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn solve_writes_contract_files() {
        let tmp = tempfile::tempdir().unwrap();
        let out = execute(&small(tmp.path()), Command::Solve).unwrap();
        let names: Vec<_> = out
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names, ["value.csv", "policy.csv", "run_manifest"]);
        let manifest = std::fs::read_to_string(tmp.path().join("run_manifest")).unwrap();
        assert!(manifest.starts_with("subcommand=solve\n"));
        assert!(manifest.contains("sha256.value.csv="));
    }

    #[test]
    fn digest_ignores_output_directory() {
        let a = small(std::path::Path::new("a"));
        let b = small(std::path::Path::new("b"));
        assert_eq!(config_digest(&a), config_digest(&b));
        let mut c = a.clone();
        c.seed = 9;
        assert_ne!(config_digest(&a), config_digest(&c));
    }

    #[test]
    fn simulate_header() {
        let tmp = tempfile::tempdir().unwrap();
        execute(&small(tmp.path()), Command::Simulate { no_control: true }).unwrap();
        let traj = std::fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
        assert!(traj.starts_with("t,S,I,R,D,L\n"));
        let summary = std::fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
        assert!(summary.contains("control=none"));
        assert!(summary.contains("peak_lockdown=0\n"));
    }

    #[test]
    fn non_convergence_surfaces() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = small(tmp.path());
        cfg.max_iters = 1;
        let err = execute(&cfg, Command::Solve).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
