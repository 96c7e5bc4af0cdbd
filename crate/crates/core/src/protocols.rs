//! Finite-size bit-generation rates for the source-independent QRNG and
//! biased-basis BB84 protocols, under both the sampling-based bound and
//! the prior standard-relation bounds, plus grid sweeps for comparisons.
//!
//! All rates are per emitted signal (divided by `N`) and are reported both
//! raw (possibly negative, so plots can show crossings below zero) and
//! clamped to `[0, 1]`.
//!
//! Error-correction leakage is modeled as `lambda_EC = ec_factor * n * h(.)`:
//! the efficiency factor multiplies a per-signal entropy, so the total
//! leakage scales with the `n` kept signals, the standard finite-key
//! convention. The correctness-check leakage `log(1/eps_cor)` is omitted
//! from both QKD formulas alike; it would cancel in any comparison.

use rayon::prelude::*;
use thiserror::Error;

use crate::math::{binary_entropy, bounded_binary_entropy, MathError, Probability};
use crate::uncertainty::{delta_param, nu_param, BiasParameter, BoundError, FiniteSizeParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("gamma is defined for nonnegative arguments, got {0}")]
    GammaDomain(f64),
    #[error("epsilon {epsilon} outside ({low}, {high})")]
    EpsilonRange { epsilon: f64, low: f64, high: f64 },
    #[error("error-correction factor {0} must be >= 1")]
    EcFactorRange(f64),
    #[error("entropy argument {0} exceeds 1; parameters out of the valid region")]
    ArgumentRange(f64),
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("grid value {0} is not a valid signal count")]
    BadSignalCount(f64),
}

/// The epsilon family and error-correction efficiency used by the rate
/// formulas. Defaults mirror the evaluation constants: `eps = 1e-36` for
/// the sampling-based bound, `eps' = eps-hat = 1e-12` for the prior
/// bounds (all three give failure levels near `1e-12`), and a leakage
/// factor of 1.2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityBudget {
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub epsilon_hat: f64,
    pub ec_factor: f64,
}

impl Default for SecurityBudget {
    fn default() -> Self {
        Self {
            epsilon: 1e-36,
            epsilon_prime: 1e-12,
            epsilon_hat: 1e-12,
            ec_factor: 1.2,
        }
    }
}

impl SecurityBudget {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        for eps in [self.epsilon, self.epsilon_prime, self.epsilon_hat] {
            if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
                return Err(ProtocolError::EpsilonRange {
                    epsilon: eps,
                    low: 0.0,
                    high: 1.0,
                });
            }
        }
        if !self.ec_factor.is_finite() || self.ec_factor < 1.0 {
            return Err(ProtocolError::EcFactorRange(self.ec_factor));
        }
        Ok(())
    }
}

/// Per-signal rate with its signed contributions:
/// `raw = entropy_term + leakage_term + correction_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    /// Extractable-entropy contribution (nonnegative).
    pub entropy_term: f64,
    /// Error-correction leakage contribution (nonpositive; zero for QRNG).
    pub leakage_term: f64,
    /// Security/sampling correction contribution (signed).
    pub correction_term: f64,
    /// The value fed to the entropy or gamma correction function.
    pub argument: f64,
    pub raw: f64,
    pub clamped: f64,
}

impl RateBreakdown {
    fn assemble(entropy_term: f64, leakage_term: f64, correction_term: f64, argument: f64) -> Self {
        let raw = entropy_term + leakage_term + correction_term;
        Self {
            entropy_term,
            leakage_term,
            correction_term,
            argument,
            raw,
            clamped: raw.clamp(0.0, 1.0),
        }
    }
}

/// Both rates at one parameter point, with component breakdowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub total: u64,
    pub sample: u64,
    pub kept: u64,
    pub bias: f64,
    pub error_rate: f64,
    /// Sampling-based bound (`r_ours` / `r_new`).
    pub ours: RateBreakdown,
    /// Prior standard-relation bound (`r_other` / `r_old`).
    pub other: RateBreakdown,
}

impl RatePoint {
    pub fn rate_ours(&self) -> f64 {
        self.ours.clamped
    }

    pub fn rate_other(&self) -> f64 {
        self.other.clamped
    }

    pub fn rate_max(&self) -> f64 {
        self.rate_ours().max(self.rate_other())
    }
}

/// The correction function `gamma(x) = (x + sqrt(1+x^2)) (x / (sqrt(1+x^2) - 1))^x`
/// from the prior QRNG rate, extended continuously with `gamma(0) = 1`.
pub fn gamma_fn(x: f64) -> Result<f64, ProtocolError> {
    if !(x >= 0.0) {
        return Err(ProtocolError::GammaDomain(x));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let root = (1.0 + x * x).sqrt();
    // sqrt(1+x^2) - 1 rewritten to avoid cancellation for small x
    let root_minus_one = x * x / (root + 1.0);
    Ok((x + root) * (x / root_minus_one).powf(x))
}

/// Finite-size deviation `delta' = 2 sqrt(N^2 / (n^2 m) ln(4 / eps'))` of
/// the prior QRNG bound.
pub fn delta_prime(
    total: u64,
    kept: u64,
    sample: u64,
    epsilon_prime: f64,
) -> Result<f64, ProtocolError> {
    FiniteSizeParams::new(total, sample)?;
    if !epsilon_prime.is_finite() || epsilon_prime <= 0.0 || epsilon_prime >= 4.0 {
        return Err(ProtocolError::EpsilonRange {
            epsilon: epsilon_prime,
            low: 0.0,
            high: 4.0,
        });
    }
    let n = total as f64;
    let k = kept as f64;
    let m = sample as f64;
    let log_term = 4f64.ln() - epsilon_prime.ln();
    Ok(2.0 * (n * n / (k * k * m) * log_term).sqrt())
}

/// Finite-size deviation `mu = sqrt(N (m+1) / (n m^2) ln(2 / eps-hat))` of
/// the prior QKD bound.
pub fn mu_param(total: u64, sample: u64, kept: u64, epsilon_hat: f64) -> Result<f64, ProtocolError> {
    FiniteSizeParams::new(total, sample)?;
    if !epsilon_hat.is_finite() || epsilon_hat <= 0.0 || epsilon_hat >= 2.0 {
        return Err(ProtocolError::EpsilonRange {
            epsilon: epsilon_hat,
            low: 0.0,
            high: 2.0,
        });
    }
    let n = total as f64;
    let k = kept as f64;
    let m = sample as f64;
    let log_term = 2f64.ln() - epsilon_hat.ln();
    Ok((n * (m + 1.0) / (k * m * m) * log_term).sqrt())
}

/// Sign convention for the `2 log2(1/eps)` security correction in the
/// sampling-based QRNG rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrectionSign {
    /// Added, matching the published rate expression verbatim.
    #[default]
    PaperPlus,
    /// Subtracted, the conservative reading implied by the
    /// privacy-amplification relation. At practical `N` the term is
    /// negligible either way (`~2.4e-8` per signal at `N = 1e10`).
    ConservativeMinus,
}

/// Sampling-based QRNG rate `(n (1 - h_hat(w + nu + delta)) + 2 log2(1/eps)) / N`.
pub fn qrng_rate_ours(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    epsilon: f64,
    w_q: Probability,
) -> Result<RateBreakdown, ProtocolError> {
    qrng_rate_ours_with_sign(total, sample, bias, epsilon, w_q, CorrectionSign::default())
}

/// [`qrng_rate_ours`] with an explicit [`CorrectionSign`].
pub fn qrng_rate_ours_with_sign(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    epsilon: f64,
    w_q: Probability,
    sign: CorrectionSign,
) -> Result<RateBreakdown, ProtocolError> {
    let params = FiniteSizeParams::new(total, sample)?;
    let delta = delta_param(params.sample(), params.kept(), epsilon)?;
    let nu = nu_param(bias, params.sample(), epsilon)?;
    let argument = w_q.value() + nu + delta;
    let n = total as f64;
    let entropy = params.kept() as f64 * (1.0 - bounded_binary_entropy(argument)?) / n;
    let magnitude = 2.0 * (-epsilon.log2()) / n;
    let correction = match sign {
        CorrectionSign::PaperPlus => magnitude,
        CorrectionSign::ConservativeMinus => -magnitude,
    };
    Ok(RateBreakdown::assemble(entropy, 0.0, correction, argument))
}

/// Prior QRNG rate `(-n log2(1/2 + b) - n log2 gamma(w + delta')) / N`.
pub fn qrng_rate_other(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    epsilon_prime: f64,
    w_q: Probability,
) -> Result<RateBreakdown, ProtocolError> {
    let params = FiniteSizeParams::new(total, sample)?;
    let dp = delta_prime(total, params.kept(), params.sample(), epsilon_prime)?;
    let argument = w_q.value() + dp;
    let n = total as f64;
    let k = params.kept() as f64;
    let overlap = -(0.5 + bias.abs().b()).log2();
    let entropy = k * overlap / n;
    let correction = -k * gamma_fn(argument)?.log2() / n;
    Ok(RateBreakdown::assemble(entropy, 0.0, correction, argument))
}

/// Prior QKD rate `(n (c - h(w + mu)) - lambda_EC - log2(2/eps-hat^2)) / N`
/// with `c = -log2(1/2 + b)` and `lambda_EC = ec_factor * n * h(w + mu)`.
pub fn qkd_rate_old(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    epsilon_hat: f64,
    w_q: Probability,
    ec_factor: f64,
) -> Result<RateBreakdown, ProtocolError> {
    if !ec_factor.is_finite() || ec_factor < 1.0 {
        return Err(ProtocolError::EcFactorRange(ec_factor));
    }
    let params = FiniteSizeParams::new(total, sample)?;
    let mu = mu_param(total, sample, params.kept(), epsilon_hat)?;
    let argument = w_q.value() + mu;
    if argument > 1.0 {
        return Err(ProtocolError::ArgumentRange(argument));
    }
    let h = binary_entropy(Probability::new(argument)?);
    let n = total as f64;
    let k = params.kept() as f64;
    let overlap = -(0.5 + bias.abs().b()).log2();
    let entropy = k * (overlap - h) / n;
    let leakage = -ec_factor * k * h / n;
    let correction = -(2f64.log2() - 2.0 * epsilon_hat.log2()) / n;
    Ok(RateBreakdown::assemble(entropy, leakage, correction, argument))
}

/// Sampling-based QKD rate
/// `(n (1 - h_hat(w + nu + delta)) - lambda_EC - log2(1/eps)) / N`
/// with `lambda_EC = ec_factor * n * h(w + delta)`.
pub fn qkd_rate_new(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    epsilon: f64,
    w_q: Probability,
    ec_factor: f64,
) -> Result<RateBreakdown, ProtocolError> {
    if !ec_factor.is_finite() || ec_factor < 1.0 {
        return Err(ProtocolError::EcFactorRange(ec_factor));
    }
    let params = FiniteSizeParams::new(total, sample)?;
    let delta = delta_param(params.sample(), params.kept(), epsilon)?;
    let nu = nu_param(bias, params.sample(), epsilon)?;
    let argument = w_q.value() + nu + delta;
    let leak_arg = w_q.value() + delta;
    if leak_arg > 1.0 {
        return Err(ProtocolError::ArgumentRange(leak_arg));
    }
    let n = total as f64;
    let k = params.kept() as f64;
    let entropy = k * (1.0 - bounded_binary_entropy(argument)?) / n;
    let leakage = -ec_factor * k * binary_entropy(Probability::new(leak_arg)?) / n;
    let correction = epsilon.log2() / n;
    Ok(RateBreakdown::assemble(entropy, leakage, correction, argument))
}

/// Evaluate both QRNG rates at one point.
pub fn qrng_point(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    budget: &SecurityBudget,
    w_q: Probability,
) -> Result<RatePoint, ProtocolError> {
    budget.validate()?;
    Ok(RatePoint {
        total,
        sample,
        kept: total.saturating_sub(sample),
        bias: bias.b(),
        error_rate: w_q.value(),
        ours: qrng_rate_ours(total, sample, bias, budget.epsilon, w_q)?,
        other: qrng_rate_other(total, sample, bias, budget.epsilon_prime, w_q)?,
    })
}

/// Evaluate both QKD rates at one point (`ours` = sampling-based `r_new`,
/// `other` = prior `r_old`).
pub fn qkd_point(
    total: u64,
    sample: u64,
    bias: BiasParameter,
    budget: &SecurityBudget,
    w_q: Probability,
) -> Result<RatePoint, ProtocolError> {
    budget.validate()?;
    Ok(RatePoint {
        total,
        sample,
        kept: total.saturating_sub(sample),
        bias: bias.b(),
        error_rate: w_q.value(),
        ours: qkd_rate_new(total, sample, bias, budget.epsilon, w_q, budget.ec_factor)?,
        other: qkd_rate_old(total, sample, bias, budget.epsilon_hat, w_q, budget.ec_factor)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Qrng,
    Qkd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Vary `N`; the sample size follows `sample_fraction`.
    TotalSignals,
    /// Vary the bias `b`.
    Bias,
    /// Vary the observed error rate `w_q`.
    ErrorRate,
}

/// A sweep over one axis with the remaining parameters fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub protocol: Protocol,
    pub axis: SweepAxis,
    pub total: u64,
    pub sample_fraction: f64,
    pub bias: f64,
    pub error_rate: f64,
    pub budget: SecurityBudget,
    pub grid: Vec<f64>,
}

/// One evaluated grid point; parameter-domain failures are carried as
/// per-point errors rather than aborting the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub point: Result<RatePoint, ProtocolError>,
}

fn evaluate_at(spec: &SweepSpec, axis_value: f64) -> Result<RatePoint, ProtocolError> {
    let (total, bias, w_q) = match spec.axis {
        SweepAxis::TotalSignals => {
            if !axis_value.is_finite() || axis_value < 2.0 || axis_value > 1e18 {
                return Err(ProtocolError::BadSignalCount(axis_value));
            }
            (axis_value.round() as u64, spec.bias, spec.error_rate)
        }
        SweepAxis::Bias => (spec.total, axis_value, spec.error_rate),
        SweepAxis::ErrorRate => (spec.total, spec.bias, axis_value),
    };
    let params = FiniteSizeParams::from_fraction(total, spec.sample_fraction)?;
    let bias = BiasParameter::new(bias)?;
    let w_q = Probability::new(w_q)?;
    match spec.protocol {
        Protocol::Qrng => qrng_point(total, params.sample(), bias, &spec.budget, w_q),
        Protocol::Qkd => qkd_point(total, params.sample(), bias, &spec.budget, w_q),
    }
}

/// Evaluate the sweep; points come back in grid order regardless of the
/// parallel execution order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>, ProtocolError> {
    if spec.grid.is_empty() {
        return Err(ProtocolError::EmptyGrid);
    }
    spec.budget.validate()?;
    Ok(spec
        .grid
        .par_iter()
        .map(|&axis_value| SweepPoint {
            axis_value,
            point: evaluate_at(spec, axis_value),
        })
        .collect())
}

/// Log-spaced grid from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    let (a, b) = (start.log10(), stop.log10());
    (0..points)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64))
        .collect()
}

/// Linear grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    (0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect()
}
