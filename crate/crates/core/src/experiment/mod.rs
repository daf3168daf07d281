//! Experiment orchestration behind the command-line tool.

pub mod config;
pub mod runner;
pub mod verify;

pub use config::{ExperimentConfig, GroupSpec, OmegaRestriction, RepresentationSpec, Solver};
pub use runner::{
    run_delta_scaling, run_delta_scaling_with, run_phase_transition, threads_from_env, with_threads, ResultRow,
    ResultTable, SlopeFit,
};
pub use verify::{
    builtin_representations, representation_checks, run_verification_suite, run_verification_suite_with, Check,
    VerificationReport,
};
