//! Security experiments.
//!
//! [`run_evpke`] runs the deletion experiment against the real scheme.
//! [`run_hyb`] runs the hybrids of the security proof: the same experiment on
//! a wrapped `x0 ^ x1` (`Hyb0`), with the phase replaced by a purifying
//! register C measured after the adversary (`Hyb1`), and with an extra
//! Hadamard-basis check on C (`Hyb2`). [`hybrid_chain_report`] evaluates all
//! three and checks the inequalities that link their advantages.

mod adversary;
mod checks;
mod config;
mod engine;
mod outcome;
mod preimage;
mod report;
pub mod stats;

pub use adversary::{AdversaryStrategy, CertificatePolicy, CircuitSpec, Retained};
pub use checks::{
    run_check, CheckConfig, CheckSuite, CheckSummary, CHECK_MAX_DIM, SAMPLER_MAX_BITS,
    SAMPLER_P_THRESHOLD,
};
pub use config::{ExperimentConfig, Mode, SchemeConfig, WrapperKind};
pub use engine::{abort_probability, run_evpke, run_game, run_hyb, AbortEstimate, Game};
pub use outcome::{tv_distance, Outcome, OutcomeDistribution, Transcript, TvDistance};
pub use preimage::{other_preimage_game, GameOutcome, PreimageAdversary, PreimageConfig};
pub use report::{
    abort_report, chain_report, evpke_report, hybrid_chain_report, hybrid_report, preimage_report,
    ChainReport, Inequality, Interval, Report, REPORT_SCHEMA,
};

use thiserror::Error;

use crate::primitives::PrimitiveError;
use crate::pvd::PvdError;
use crate::qstate::QStateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Pvd(#[from] PvdError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error(transparent)]
    State(#[from] QStateError),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("outcome alphabets differ: {left} vs {right} residual bits")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
