//! Construction and verification of ultra-resilient superimposed codes.

mod check;
mod classic;
mod construct;
mod matrix;
mod oracle;
mod params;
mod stats;

use thiserror::Error;

use crate::codeword::CodewordError;

pub use check::{
    check_against_header, check_cbp, check_collision_weight_inequality, check_weight_inequality,
    collision_threshold, CheckMode, CheckReport, InequalityKind, Violation,
};
pub use classic::{verify_classic, ClassicWitness};
pub use construct::{
    construct_ursc, construct_ursc_with_length, sample_matrix, sample_matrix_with_length,
    Construction,
};
pub use matrix::CodeMatrix;
pub use oracle::{
    certified_capacity, oracle_configurations, verify_ursc_bruteforce, OracleOutcome, UrscWitness,
};
pub use params::{
    block_probability, raw_tau1, raw_tau2, CodeHeader, ConstructionParams, ElongationPair,
    ElongationTable, MAX_LENGTH,
};
pub use stats::{
    empirical_segment_stats, expectation_bounds, ExpectationBounds, Interval, SegmentStats,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodesError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("k={k} is outside 2..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("row {index} is outside 0..{t}")]
    IndexOutOfRange { index: usize, t: usize },
    #[error("elongation pair ({tau1}, {tau2}) is invalid for length {t}")]
    InvalidElongation { tau1: usize, tau2: usize, t: usize },
    #[error("length {t_target} supports no k >= 2 (k=2 needs {needed})")]
    NoSupportedK { t_target: usize, needed: u64 },
    #[error("no matrix passed the check within {iterations} iterations")]
    IterationsExhausted {
        iterations: usize,
        last_report: Box<CheckReport>,
    },
    #[error("{configurations} configurations exceed the budget of {budget}")]
    BudgetExceeded { configurations: u128, budget: u128 },
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Codeword(#[from] CodewordError),
}
