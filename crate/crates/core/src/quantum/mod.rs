//! Small-scale exact quantum computations: basis identities, overlap
//! values, projective/POVM measurements and min-entropy oracles used to
//! verify the structural claims behind the finite-size bound at desk
//! scale.
//!
//! Tolerance hierarchy: `1e-12` for algebraic identities, `1e-10` for
//! composed linear-algebra pipelines.
//!
//! Verification trials are independent; each derives its generator stream
//! from `(seed, trial index)` and may run concurrently.

mod basis;
mod entropy;
mod measure;
mod state;
mod verify;

pub use basis::{bell_word_state, build_basis, overlap_matrix, BasisFamily, BasisKind};
pub use entropy::{min_entropy_classical, min_entropy_helstrom};
pub use measure::{
    measure_and_trace, MeasurePattern, MeasurementOutcome, MeasurementResult, QubitRole,
};
pub use state::{
    DensityMatrix, StateVector, MAX_DENSITY_QUBITS, MAX_QUBITS,
};
pub use verify::{
    bell_superposition, build_depolarizing_state, verify_ideal_ideal, verify_ideal_projection,
    verify_lemma3, verify_superposition_lemma, CheckRow, VerificationReport,
};

use thiserror::Error;

use crate::math::MathError;
use crate::sampling::SamplingError;
use crate::uncertainty::BoundError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("qubit budget exceeded: requested {requested}, limit {limit}")]
    QubitBudget { requested: usize, limit: usize },
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("state not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("cannot normalize a (near-)zero vector")]
    ZeroNorm,
    #[error("matrix not Hermitian: max deviation {0}")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("matrix not positive semidefinite: eigenvalue {0}")]
    NotPositive(f64),
    #[error("dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("invalid measurement pattern: {0}")]
    BadPattern(String),
    #[error("probabilities must be nonnegative and sum to 1, got sum {0}")]
    BadDistribution(f64),
    #[error("{words} index words but {amplitudes} amplitudes")]
    AmplitudeCount { words: usize, amplitudes: usize },
    #[error("index words must be distinct quaternary words of the stated length")]
    BadIndexWords,
}
