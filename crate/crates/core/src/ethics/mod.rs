//! Social welfare orders over variable-population allocations of lifetime
//! well-being, randomized axiom checks, and witness searches.

mod allocation;
mod axioms;
mod conclusions;
mod criterion;
mod matrix;

pub use allocation::Allocation;
pub use axioms::{check_axiom, Axiom, AxiomReport, CheckConfig, Verdict, Witness};
pub use conclusions::{
    repugnant_witness, very_sadistic_witness, RepugnantWitness, VerySadisticWitness,
    NEGATIVE_LEVELS, POSITIVE_LEVELS,
};
pub use criterion::{
    compare, criterion_value, parse_criteria, CriterionKind, Ordering, UtilityTransform,
    WelfareCriterion, INDIFFERENCE_TOL,
};
pub use matrix::{
    axiom_suite, csv_field, property_matrix, render_axiom_reports, write_axiom_reports_csv,
    CellVerdict, MatrixCell, MatrixRow, PropertyMatrix, REPUGNANT_BASE, REPUGNANT_EPSILON,
    REPUGNANT_N_MAX,
};
