//! Machine-checkable columns of the population-ethics property table.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};

use super::allocation::Allocation;
use super::axioms::{check_axiom, Axiom, AxiomReport, CheckConfig, Universe, Verdict, Witness};
use super::conclusions::repugnant_witness;
use super::criterion::{CriterionKind, WelfareCriterion};

/// Population cap of the repugnance search in the matrix.
pub const REPUGNANT_N_MAX: usize = 100_000;
/// Excellent reference population of the repugnance search.
pub const REPUGNANT_BASE: f64 = 100.0;
/// Barely-worth-living level of the repugnance search.
pub const REPUGNANT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellVerdict {
    Pass,
    Fail,
    NotFoundWithinBudget,
    NotMachineChecked,
}

impl From<Verdict> for CellVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => CellVerdict::Pass,
            Verdict::Fail => CellVerdict::Fail,
            Verdict::NotFoundWithinBudget => CellVerdict::NotFoundWithinBudget,
        }
    }
}

impl fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellVerdict::Pass => "pass",
            CellVerdict::Fail => "fail",
            CellVerdict::NotFoundWithinBudget => "not-found-within-budget",
            CellVerdict::NotMachineChecked => "not-machine-checked",
        })
    }
}

/// Columns of the reference property table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TableColumn {
    UtilityIndependence,
    ExistenceIndependence,
    NegativeExpansion,
    RepugnanceAvoidance,
    PriorityLivesWorthLiving,
}

/// Reference checkmarks for the rows that correspond to a criterion here.
fn reference_cell(crit: &WelfareCriterion, column: TableColumn) -> Option<bool> {
    use TableColumn::*;
    let row: [bool; 5] = match crit.kind {
        CriterionKind::Cu => [true, true, true, true, false],
        CriterionKind::Clu if crit.critical_level > 0.0 => [true, true, true, true, false],
        CriterionKind::Au => [false, false, false, true, true],
        CriterionKind::Rdclu => [false, false, true, true, true],
        _ => return None,
    };
    let idx = match column {
        UtilityIndependence => 0,
        ExistenceIndependence => 1,
        NegativeExpansion => 2,
        RepugnanceAvoidance => 3,
        PriorityLivesWorthLiving => 4,
    };
    Some(row[idx])
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCell {
    pub property: &'static str,
    pub verdict: CellVerdict,
    pub witness: Option<String>,
    /// Checkmark of the reference table, when the criterion has a row there.
    pub reference: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRow {
    pub criterion: WelfareCriterion,
    pub cells: Vec<MatrixCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyMatrix {
    pub rows: Vec<MatrixRow>,
}

fn negative_expansion(crit: &WelfareCriterion, cfg: &CheckConfig) -> (CellVerdict, Option<String>) {
    let mut uni = Universe::new(cfg);
    for _ in 0..cfg.samples {
        let x = uni.allocation();
        let level = uni.negative_level();
        let w = Witness::NegativeExpansion { x, level };
        if w.replay(crit) {
            return (CellVerdict::Fail, Some(w.shrink(crit).serialize()));
        }
    }
    (CellVerdict::Pass, None)
}

fn axiom_cell(report: &AxiomReport) -> (CellVerdict, Option<String>) {
    let witness = match report.verdict {
        Verdict::Fail => report.witness.as_ref().map(Witness::serialize),
        _ => None,
    };
    (report.verdict.into(), witness)
}

pub fn property_matrix(criteria: &[WelfareCriterion], cfg: &CheckConfig) -> Result<PropertyMatrix> {
    cfg.validate()?;
    let base = Allocation::new(vec![REPUGNANT_BASE])?;
    let mut rows = Vec::with_capacity(criteria.len());
    for crit in criteria {
        crit.validate()?;
        let mut cells = Vec::new();
        let mut push = |property: &'static str,
                        (verdict, witness): (CellVerdict, Option<String>),
                        column: Option<TableColumn>| {
            cells.push(MatrixCell {
                property,
                verdict,
                witness,
                reference: column.and_then(|c| reference_cell(crit, c)),
            })
        };

        push(
            "negative_expansion",
            negative_expansion(crit, cfg),
            Some(TableColumn::NegativeExpansion),
        );
        let repugnant = match repugnant_witness(crit, &base, REPUGNANT_EPSILON, REPUGNANT_N_MAX)? {
            Some(w) => (
                CellVerdict::Fail,
                Some(format!(
                    "base={};clones={}x{};values={}<{}",
                    REPUGNANT_BASE, w.n, w.epsilon, w.base_value, w.clones_value
                )),
            ),
            None => (CellVerdict::Pass, None),
        };
        push(
            "repugnance_avoidance",
            repugnant,
            Some(TableColumn::RepugnanceAvoidance),
        );
        for (axiom, name) in [
            (Axiom::A4, "A4_best_off_independence"),
            (Axiom::A5, "A5_worst_off_independence"),
        ] {
            let rep = check_axiom(crit, axiom, cfg)?;
            push(
                name,
                axiom_cell(&rep),
                Some(TableColumn::ExistenceIndependence),
            );
        }
        let rep = check_axiom(crit, Axiom::A8, cfg)?;
        push("A8_same_number_independence", axiom_cell(&rep), None);
        push(
            "utility_independence",
            (CellVerdict::NotMachineChecked, None),
            Some(TableColumn::UtilityIndependence),
        );
        push(
            "priority_for_lives_worth_living",
            (CellVerdict::NotMachineChecked, None),
            Some(TableColumn::PriorityLivesWorthLiving),
        );
        rows.push(MatrixRow {
            criterion: crit.clone(),
            cells,
        });
    }
    Ok(PropertyMatrix { rows })
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn reference_label(p: Option<bool>) -> &'static str {
    match p {
        Some(true) => "checked",
        Some(false) => "blank",
        None => "no-row",
    }
}

impl PropertyMatrix {
    pub fn cell(&self, criterion: usize, property: &str) -> Option<&MatrixCell> {
        self.rows
            .get(criterion)?
            .cells
            .iter()
            .find(|c| c.property == property)
    }

    /// `criterion,property,verdict,witness`; reference cells follow as
    /// `<property>@table` rows with verdict `checked`, `blank` or `no-row`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "criterion,property,verdict,witness")?;
        for row in &self.rows {
            let name = csv_field(&row.criterion.to_string());
            for cell in &row.cells {
                writeln!(
                    out,
                    "{},{},{},{}",
                    name,
                    cell.property,
                    cell.verdict,
                    csv_field(cell.witness.as_deref().unwrap_or(""))
                )?;
            }
            for cell in &row.cells {
                if cell.reference.is_some() {
                    writeln!(
                        out,
                        "{},{}@table,{},",
                        name,
                        cell.property,
                        reference_label(cell.reference)
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let crit_w = self
            .rows
            .iter()
            .map(|r| r.criterion.to_string().len())
            .max()
            .unwrap_or(9)
            .max(9);
        out.push_str(&format!(
            "{:<crit_w$}  {:<32}  {:<24}  {:<8}  witness\n",
            "criterion", "property", "verdict", "table"
        ));
        for row in &self.rows {
            for cell in &row.cells {
                out.push_str(&format!(
                    "{:<crit_w$}  {:<32}  {:<24}  {:<8}  {}\n",
                    row.criterion.to_string(),
                    cell.property,
                    cell.verdict.to_string(),
                    reference_label(cell.reference),
                    cell.witness.as_deref().unwrap_or("-")
                ));
            }
        }
        out
    }
}

/// `criterion,property,verdict,witness` rows for a set of axiom reports.
pub fn write_axiom_reports_csv<W: Write>(
    mut out: W,
    reports: &[AxiomReport],
) -> std::io::Result<()> {
    writeln!(out, "criterion,property,verdict,witness")?;
    for rep in reports {
        let witness = rep
            .witness
            .as_ref()
            .map(Witness::serialize)
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            csv_field(&rep.criterion.to_string()),
            rep.axiom,
            rep.verdict,
            csv_field(&witness)
        )?;
    }
    Ok(())
}

/// Flat text table of axiom reports.
pub fn render_axiom_reports(reports: &[AxiomReport]) -> String {
    let mut out = String::new();
    for rep in reports {
        out.push_str(&format!(
            "{:<28} {:<3} {:<40} {:<24} samples={} seed={}",
            rep.criterion.to_string(),
            rep.axiom.to_string(),
            rep.axiom.title(),
            rep.verdict.to_string(),
            rep.samples_tested,
            rep.seed
        ));
        if let Some(w) = &rep.witness {
            out.push_str(&format!(" witness={}", w.serialize()));
        }
        if let Some(n) = &rep.note {
            out.push_str(&format!(" note=\"{n}\""));
        }
        out.push('\n');
    }
    out
}

/// Runs every axiom for every criterion.
pub fn axiom_suite(criteria: &[WelfareCriterion], cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    if criteria.is_empty() {
        return Err(Error::param(
            "criteria",
            0.0,
            "at least one criterion required",
        ));
    }
    let mut reports = Vec::new();
    for crit in criteria {
        for axiom in Axiom::ALL {
            reports.push(check_axiom(crit, axiom, cfg)?);
        }
    }
    Ok(reports)
}
