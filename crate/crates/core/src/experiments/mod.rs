//! Config-driven experiment pipelines: solve, check suites, convergence tables.

mod config;
mod convergence;
mod run;

pub use config::{
    CosineTerm, CurvatureConfig, ExperimentConfig, FieldExpr, GridConfig, HarnackPair, LadderLevel, MeasureConfig,
    NumberOrWord, Setup, TimeConfig, ChecksConfig,
};
pub use convergence::{convergence_table, ConvergenceRow, ConvergenceTable, ExpectedOrder};
pub use run::{
    evaluate_checks, random_fields, run, solve, write_fields_csv, CheckOutcome, ReportEntry, RunManifest,
    MANIFEST_SCHEMA_VERSION,
};

/// Check names accepted in `checks.run`.
pub const CHECK_NAMES: &[&str] = &[
    "conservation",
    "semigroup",
    "variance",
    "li-yau",
    "li-yau-psi",
    "gradient",
    "log-sobolev",
    "lipschitz",
    "entropy",
    "harnack",
];
