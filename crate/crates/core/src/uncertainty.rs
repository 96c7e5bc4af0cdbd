//! Min-entropy lower bounds for `Z` versus biased-`X` measurements.
//!
//! The finite-size bound certifies, for a depolarizing-source state on
//! `N = m + n` qubit pairs sampled with a random size-`m` subset, a smooth
//! min entropy of at least `n (1 - h_hat(w + nu + delta))` bits over the
//! unsampled `n` signals, where `w` is the observed error rate,
//! `nu = 4 b^2 + ln(1/(2 eps)) / sqrt(m)` absorbs the basis bias, and
//! `delta` is the sampling deviation. The smoothing is
//! `8 eps + 3 (2 eps)^(1/3)` and the statement fails with probability at
//! most `(16 eps)^(1/3)`.
//!
//! The asymptotic (`N -> infinity`) form `1 - h(min(1/2, q + 4 b^2))` is
//! provided alongside the standard overlap-based relation
//! `-log2(1/2 + b) - h(q)` so callers can take the pointwise maximum.
//!
//! Negative biases are mirrored to `|b|` everywhere except
//! [`asymptotic_bound_standard`], which is stated for `b >= 0` only and
//! requires the caller to mirror explicitly.

use thiserror::Error;

use crate::math::{binary_entropy, bounded_binary_entropy, MathError, Probability};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("bias {0} outside [-0.5, 0.5]")]
    BiasRange(f64),
    #[error("bias {0} must be nonnegative here; mirror negative biases to |b| explicitly")]
    NegativeBias(f64),
    #[error("epsilon {epsilon} outside ({low}, {high})")]
    EpsilonRange { epsilon: f64, low: f64, high: f64 },
    #[error("signal counts must satisfy 0 < m < N/2, got m = {sample}, N = {total}")]
    SignalCounts { total: u64, sample: u64 },
    #[error("count {0} must be positive")]
    ZeroCount(u64),
    #[error("epsilon {0} too large: smoothing or failure probability would exceed 1")]
    EpsilonInsecure(f64),
    #[error("failure level {0} outside (0, 1]")]
    FailureRange(f64),
}

/// Measurement-basis bias `b`, with derived amplitudes
/// `alpha = sqrt(1/2 + b)`, `beta = sqrt(1/2 - b)` and `p = 4 b^2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BiasParameter(f64);

impl BiasParameter {
    pub const ZERO: BiasParameter = BiasParameter(0.0);

    pub fn new(b: f64) -> Result<Self, BoundError> {
        if b.is_finite() && (-0.5..=0.5).contains(&b) {
            Ok(Self(b))
        } else {
            Err(BoundError::BiasRange(b))
        }
    }

    pub fn b(self) -> f64 {
        self.0
    }

    pub fn alpha(self) -> f64 {
        (0.5 + self.0).sqrt()
    }

    pub fn beta(self) -> f64 {
        (0.5 - self.0).sqrt()
    }

    /// The basis-mixing probability `p = (beta^2 - alpha^2)^2 = 4 b^2`.
    pub fn p(self) -> f64 {
        4.0 * self.0 * self.0
    }

    /// Mirror to the nonnegative bias with identical `p`.
    pub fn abs(self) -> BiasParameter {
        BiasParameter(self.0.abs())
    }
}

/// Signal counts `(N, m)` with `n = N - m` kept signals and `0 < m < N/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteSizeParams {
    total: u64,
    sample: u64,
}

impl FiniteSizeParams {
    pub fn new(total: u64, sample: u64) -> Result<Self, BoundError> {
        if sample == 0 || 2 * sample >= total {
            return Err(BoundError::SignalCounts { total, sample });
        }
        Ok(Self { total, sample })
    }

    /// Round `fraction * total` to the nearest valid sample size.
    pub fn from_fraction(total: u64, fraction: f64) -> Result<Self, BoundError> {
        let sample = (fraction * total as f64).round().max(1.0) as u64;
        Self::new(total, sample)
    }

    pub fn total(self) -> u64 {
        self.total
    }

    pub fn sample(self) -> u64 {
        self.sample
    }

    pub fn kept(self) -> u64 {
        self.total - self.sample
    }
}

/// A min-entropy lower bound (bits, total over the kept signals) with its
/// smoothing and failure probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyBound {
    pub min_entropy_lower_bound: f64,
    pub smoothing: Probability,
    pub failure_probability: Probability,
    /// The value fed to the bounded binary entropy: `w + nu + delta`.
    pub argument: f64,
}

fn check_epsilon(epsilon: f64, high: f64) -> Result<(), BoundError> {
    if !epsilon.is_finite() || epsilon <= 0.0 || epsilon >= high {
        return Err(BoundError::EpsilonRange {
            epsilon,
            low: 0.0,
            high,
        });
    }
    Ok(())
}

/// Sampling deviation `delta = sqrt((m + n + 2) / (m (m + n)) * ln(2 / eps^2))`.
pub fn delta_param(sample: u64, kept: u64, epsilon: f64) -> Result<f64, BoundError> {
    if sample == 0 {
        return Err(BoundError::ZeroCount(sample));
    }
    if kept == 0 {
        return Err(BoundError::ZeroCount(kept));
    }
    check_epsilon(epsilon, 1.0)?;
    let m = sample as f64;
    let n = kept as f64;
    // ln(2/eps^2) written as ln 2 - 2 ln eps to survive eps down to 1e-300
    let log_term = 2f64.ln() - 2.0 * epsilon.ln();
    Ok(((m + n + 2.0) / (m * (m + n)) * log_term).sqrt())
}

/// Bias-plus-finite-size deviation `nu = 4 b^2 + ln(1/(2 eps)) / sqrt(m)`.
pub fn nu_param(bias: BiasParameter, sample: u64, epsilon: f64) -> Result<f64, BoundError> {
    if sample == 0 {
        return Err(BoundError::ZeroCount(sample));
    }
    check_epsilon(epsilon, 0.5)?;
    let log_term = -(2.0 * epsilon).ln();
    Ok(bias.p() + log_term / (sample as f64).sqrt())
}

/// Smoothing parameter `8 eps + 3 (2 eps)^(1/3)` of the finite-size bound.
pub fn smoothing_param(epsilon: f64) -> f64 {
    8.0 * epsilon + 3.0 * (2.0 * epsilon).cbrt()
}

/// Failure probability `(16 eps)^(1/3)` of the finite-size bound.
pub fn failure_probability(epsilon: f64) -> f64 {
    (16.0 * epsilon).cbrt()
}

/// Invert `failure_probability`: the `eps = f^3 / 16` achieving an overall
/// failure level `f` (e.g. `f ~ 10^-12` needs `eps = 10^-36 / 16`-ish).
pub fn epsilon_for_failure(failure: f64) -> Result<f64, BoundError> {
    if !failure.is_finite() || failure <= 0.0 || failure > 1.0 {
        return Err(BoundError::FailureRange(failure));
    }
    Ok(failure.powi(3) / 16.0)
}

/// The finite-size min-entropy bound for observed error rate `w_q`.
///
/// Returns the total bound `n (1 - h_hat(w_q + nu + delta))`, clamped to
/// `[0, n]`; an argument at or above 1/2 yields the trivial bound 0 rather
/// than an error. Fails if `epsilon` is large enough that the smoothing or
/// failure probability would exceed 1 (the statement then certifies
/// nothing).
pub fn theorem_bound(
    params: FiniteSizeParams,
    bias: BiasParameter,
    epsilon: f64,
    w_q: Probability,
) -> Result<UncertaintyBound, BoundError> {
    check_epsilon(epsilon, 0.5)?;
    let smoothing = smoothing_param(epsilon);
    let failure = failure_probability(epsilon);
    if smoothing > 1.0 || failure > 1.0 {
        return Err(BoundError::EpsilonInsecure(epsilon));
    }
    let delta = delta_param(params.sample(), params.kept(), epsilon)?;
    let nu = nu_param(bias, params.sample(), epsilon)?;
    let argument = w_q.value() + nu + delta;
    let n = params.kept() as f64;
    let entropy = (n * (1.0 - bounded_binary_entropy(argument)?)).clamp(0.0, n);
    Ok(UncertaintyBound {
        min_entropy_lower_bound: entropy,
        smoothing: Probability::new(smoothing)?,
        failure_probability: Probability::new(failure)?,
        argument,
    })
}

/// Asymptotic per-signal bound `1 - h(min(1/2, q + 4 b^2))`.
pub fn asymptotic_bound_ours(bias: BiasParameter, q: Probability) -> f64 {
    let arg = (q.value() + bias.p()).min(0.5);
    1.0 - binary_entropy(Probability::new(arg).expect("min with 1/2 stays in range"))
}

/// Standard overlap relation `max(0, -log2(1/2 + b) - h(q))`, stated for
/// `b >= 0`; negative biases are the caller's responsibility to mirror.
pub fn asymptotic_bound_standard(bias: BiasParameter, q: Probability) -> Result<f64, BoundError> {
    if bias.b() < 0.0 {
        return Err(BoundError::NegativeBias(bias.b()));
    }
    let value = -(0.5 + bias.b()).log2() - binary_entropy(q);
    Ok(value.max(0.0))
}

/// Pointwise maximum of the two asymptotic bounds (both are valid lower
/// bounds); mirrors negative bias internally.
pub fn best_asymptotic_bound(bias: BiasParameter, q: Probability) -> f64 {
    let ours = asymptotic_bound_ours(bias, q);
    let standard = asymptotic_bound_standard(bias.abs(), q)
        .expect("mirrored bias is nonnegative");
    ours.max(standard)
}
