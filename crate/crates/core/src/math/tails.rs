//! Hamming-ball volumes and binomial/Hoeffding tail bounds.

use num_bigint::BigUint;

use super::{MathError, Probability};

/// Largest word length for which exact big-integer ball sizes are offered.
pub const HAMMING_BALL_EXACT_LIMIT: u64 = 64;

/// Largest trial count for which the exact binomial tail is summed.
/// Above this, callers should use [`hoeffding_tail_bound`].
pub const BINOMIAL_EXACT_LIMIT: u64 = 100_000;

/// Exact size of the Hamming ball of the given radius in `{0,1}^n`:
/// `sum_{k=0}^{radius} C(n, k)`.
pub fn hamming_ball_size(n: u64, radius: u64) -> Result<BigUint, MathError> {
    if n > HAMMING_BALL_EXACT_LIMIT {
        return Err(MathError::ExactLimit {
            n,
            limit: HAMMING_BALL_EXACT_LIMIT,
        });
    }
    if radius > n {
        return Err(MathError::RadiusRange { radius, n });
    }
    let mut total = BigUint::from(1u32);
    let mut binom = BigUint::from(1u32);
    for k in 1..=radius {
        // C(n, k) = C(n, k-1) * (n - k + 1) / k, exact at every step
        binom = binom * BigUint::from(n - k + 1) / BigUint::from(k);
        total += &binom;
    }
    Ok(total)
}

/// Log-space Hamming-ball bound `n * h_hat(Q)`, which dominates
/// `log2(hamming_ball_size(n, floor(n Q)))`.
pub fn hamming_ball_log_bound(n: u64, q: f64) -> Result<f64, MathError> {
    if n == 0 {
        return Err(MathError::ZeroCount(n));
    }
    let h = super::bounded_binary_entropy(q)?;
    Ok(n as f64 * h)
}

/// Exact upper binomial tail `sum_{d=k_min}^{m} C(m,d) p^d (1-p)^{m-d}`,
/// summed term-by-term in log space.
pub fn binomial_tail(m: u64, p: Probability, k_min: u64) -> Result<Probability, MathError> {
    if m > BINOMIAL_EXACT_LIMIT {
        return Err(MathError::ExactLimit {
            n: m,
            limit: BINOMIAL_EXACT_LIMIT,
        });
    }
    if k_min > m {
        return Err(MathError::CutoffRange { k_min, m });
    }
    let p = p.value();
    if k_min == 0 {
        return Ok(Probability::ONE);
    }
    if p == 0.0 {
        return Ok(Probability::ZERO);
    }
    if p == 1.0 {
        return Ok(Probability::ONE);
    }

    // ln C(m, d) via a cumulative ln-factorial table
    let mut ln_fact = Vec::with_capacity(m as usize + 1);
    ln_fact.push(0.0f64);
    for k in 1..=m {
        ln_fact.push(ln_fact[k as usize - 1] + (k as f64).ln());
    }
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let mut sum = 0.0f64;
    for d in k_min..=m {
        let ln_term = ln_fact[m as usize] - ln_fact[d as usize] - ln_fact[(m - d) as usize]
            + d as f64 * ln_p
            + (m - d) as f64 * ln_q;
        sum += ln_term.exp();
    }
    Probability::clamped(sum)
}

/// Hoeffding tail bound `exp(-2 m (nu - p)^2)`, valid for `nu >= p`;
/// dominates `binomial_tail(m, p, ceil(m nu))`.
pub fn hoeffding_tail_bound(m: u64, p: Probability, nu: f64) -> Result<Probability, MathError> {
    if nu.is_nan() || nu < p.value() {
        return Err(MathError::HoeffdingDomain { nu, p: p.value() });
    }
    let gap = nu - p.value();
    Probability::clamped((-2.0 * m as f64 * gap * gap).exp())
}
