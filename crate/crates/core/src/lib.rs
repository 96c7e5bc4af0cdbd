//! Min-entropy bounds and finite-size bit-generation rates for protocols
//! that measure in a biased basis pair, with exact small-scale quantum
//! oracles for the structural claims behind them.
//!
//! Modules:
//! - [`math`]: entropy primitives, Hamming/word utilities, tail bounds.
//! - [`sampling`]: binary and quaternary subset-sampling strategies, their
//!   analytic failure bounds, and a seeded Monte Carlo estimator.
//! - [`uncertainty`]: the finite-size min-entropy bound with its
//!   deviation, smoothing and failure parameters, and both asymptotic
//!   relations for comparison.
//! - [`protocols`]: QRNG and QKD bit-generation rates under the new and
//!   prior bounds, plus parameter sweeps.
//! - [`quantum`]: a dense few-qubit simulator with basis builders,
//!   projective/POVM measurement, min-entropy oracles and the
//!   verification suites.

pub mod math;
pub mod protocols;
pub mod quantum;
pub mod sampling;
pub mod uncertainty;

pub use math::{MathError, Probability, SubsetIndex, Word};
pub use protocols::{
    Protocol, ProtocolError, RateBreakdown, RatePoint, SecurityBudget, SweepAxis, SweepPoint,
    SweepSpec,
};
pub use quantum::{QuantumError, StateVector, VerificationReport};
pub use sampling::{ErrorProbabilityReport, SamplingError, SamplingStrategy};
pub use uncertainty::{BiasParameter, BoundError, FiniteSizeParams, UncertaintyBound};
