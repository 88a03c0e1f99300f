//! Manufactured-solution benchmarks and convergence studies.

mod examples;
mod jet;
mod study;

pub use examples::{example2_with_epsilon, make_example1, make_example2, Field, ManufacturedCase, TxDefinition};
pub use jet::Jet;
pub use study::{
    compute_errors, convergence_rate, run_level, run_study, ConvergenceTable, ErrorTriple, StudyConfig, TableRow,
};
