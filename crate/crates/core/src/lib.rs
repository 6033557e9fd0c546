//! Generalized Rényi divergence of deformed exponential families.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deformed_exp;
pub mod divergences;
pub mod error;
pub mod existence;
pub mod ext_real;
pub mod kappa_solver;
pub mod measures;
pub mod par;

pub use deformed_exp::{DeformedExp, Family, Knot, ValidationReport};
pub use divergences::{
    alpha_sweep, classical_renyi, generalized_renyi, kl_divergence, limit_divergence,
    phi_divergence, tsallis_relative_entropy, DivergenceReport, Endpoint, LimitEstimate,
};
pub use error::{Error, Result};
pub use existence::{
    adversarial_nonexistence_demo, construct_u0_sequence, growth_envelope_check,
    pointwise_inequality_probe, ratio_limsup_probe, verify_kaniadakis_u0, AdversarialPair,
    AdversarialRegime, ConditionProbeReport, U0Construction, Verdict,
};
pub use kappa_solver::{
    normalization_functional, solve_functional, solve_kappa, CoordinatePair, KappaSolveResult,
    NormalizationFunctional, SolveStatus, SolverConfig, TailRemainder, U0,
};
pub use measures::{MeasureKind, MeasureModel, Piece, ProbabilityPair, TruncatedSum};
pub use par::Execution;
