//! Classical sampling strategies over binary and quaternary words.
//!
//! A strategy observes a random size-`m` subset of an `N`-symbol word and
//! guesses a statistic of the unobserved rest. A word is *ideal* for a
//! subset when the guess lands within `delta` of the target. The analytic
//! failure bound `2 exp(-delta^2 m N / (N + 2))` applies to the binary
//! relative-weight strategy and, through the symbol reduction
//! `{0,2} -> 0, {1,3} -> 1`, equally to the quaternary `{1,3}`-count
//! strategy on `N = n + m` symbols.
//!
//! Everything is pure except the Monte Carlo estimator, which derives one
//! independent generator stream per trial from `(seed, trial index)`, so
//! trials run concurrently with a deterministic aggregate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::math::{MathError, Probability, SubsetIndex, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("sample size {sample} must satisfy 0 < m < N/2 for population {population}")]
    SampleSize { population: u64, sample: u64 },
    #[error("delta must be positive and finite, got {0}")]
    DeltaRange(f64),
    #[error("subset parent length {subset} does not match word length {word}")]
    ParentMismatch { subset: usize, word: usize },
    #[error("subset must observe a strict portion of the word (|t| = {sample}, |q| = {word})")]
    SubsetTooLarge { sample: usize, word: usize },
    #[error("at least one trial is required")]
    NoTrials,
}

/// A subset-sampling strategy: uniform size-`m` subsets of an `N`-symbol
/// word over a `d`-character alphabet, with closeness threshold `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingStrategy {
    population: u64,
    sample: u64,
    alphabet: u8,
    delta: f64,
}

impl SamplingStrategy {
    pub fn new(population: u64, sample: u64, alphabet: u8, delta: f64) -> Result<Self, SamplingError> {
        if alphabet != 2 && alphabet != 4 {
            return Err(MathError::BadAlphabet(alphabet).into());
        }
        check_sample_size(population, sample)?;
        check_delta(delta)?;
        Ok(Self {
            population,
            sample,
            alphabet,
            delta,
        })
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn sample(&self) -> u64 {
        self.sample
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Analytic failure bound next to an optional seeded empirical estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProbabilityReport {
    pub analytic_bound: Probability,
    pub empirical_estimate: Option<Probability>,
    pub trials: u64,
    pub seed: u64,
}

fn check_sample_size(population: u64, sample: u64) -> Result<(), SamplingError> {
    if sample == 0 || 2 * sample >= population {
        return Err(SamplingError::SampleSize { population, sample });
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<(), SamplingError> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(SamplingError::DeltaRange(delta));
    }
    Ok(())
}

fn check_subset(q: &Word, t: &SubsetIndex) -> Result<(), SamplingError> {
    if t.parent_len() != q.len() {
        return Err(SamplingError::ParentMismatch {
            subset: t.parent_len(),
            word: q.len(),
        });
    }
    if t.is_empty() || t.len() >= q.len() {
        return Err(SamplingError::SubsetTooLarge {
            sample: t.len(),
            word: q.len(),
        });
    }
    Ok(())
}

/// Fraction of observed/unobserved positions holding a counted symbol.
fn split_fractions(q: &Word, t: &SubsetIndex, counted: &[u8]) -> (f64, f64) {
    let symbols = q.symbols();
    let mut inside = 0usize;
    let mut total = 0usize;
    for (pos, s) in symbols.iter().enumerate() {
        if counted.contains(s) {
            total += 1;
            if t.contains(pos + 1) {
                inside += 1;
            }
        }
    }
    let m = t.len();
    let n = q.len() - m;
    (
        inside as f64 / m as f64,
        (total - inside) as f64 / n as f64,
    )
}

/// Binary strategy predicate: is `|w(q_t) - w(q_-t)| <= delta`?
pub fn ideal_word_binary(q: &Word, t: &SubsetIndex, delta: f64) -> Result<bool, SamplingError> {
    if q.alphabet() != 2 {
        return Err(MathError::AlphabetExpected {
            expected: 2,
            got: q.alphabet(),
        }
        .into());
    }
    check_subset(q, t)?;
    check_delta(delta)?;
    let (observed, rest) = split_fractions(q, t, &[1]);
    Ok((observed - rest).abs() <= delta)
}

/// Quaternary strategy predicate on the relative number of 1s and 3s:
/// is `|#_{1,3}(q_t)/|t| - #_{1,3}(q_-t)/(|q|-|t|)| <= delta`?
pub fn ideal_word_quaternary(q: &Word, t: &SubsetIndex, delta: f64) -> Result<bool, SamplingError> {
    if q.alphabet() != 4 {
        return Err(MathError::AlphabetExpected {
            expected: 4,
            got: q.alphabet(),
        }
        .into());
    }
    check_subset(q, t)?;
    check_delta(delta)?;
    let (observed, rest) = split_fractions(q, t, &[1, 3]);
    Ok((observed - rest).abs() <= delta)
}

/// Map a quaternary word to the binary word with `{0,2} -> 0` and
/// `{1,3} -> 1`, preserving length. Binary input passes through unchanged.
pub fn reduce_quaternary_to_binary(q: &Word) -> Word {
    let symbols = q
        .symbols()
        .iter()
        .map(|&s| u8::from(s == 1 || s == 3))
        .collect();
    Word::new(2, symbols).expect("reduction preserves non-emptiness and stays binary")
}

/// Analytic bound `min(1, 2 exp(-delta^2 m N / (N + 2)))` on the failure
/// probability of the relative-weight strategy with uniform size-`m`
/// subsets of `{1..N}`.
pub fn classical_error_bound(
    population: u64,
    sample: u64,
    delta: f64,
) -> Result<Probability, SamplingError> {
    check_sample_size(population, sample)?;
    check_delta(delta)?;
    let n = population as f64;
    let m = sample as f64;
    let raw = 2.0 * (-delta * delta * m * n / (n + 2.0)).exp();
    Ok(Probability::clamped(raw)?)
}

/// The quaternary strategy's bound, stated in terms of the unobserved
/// count `n` and sample count `m`: identical to the binary formula with
/// `N = n + m`.
pub fn classical_error_bound_quaternary(
    unobserved: u64,
    sample: u64,
    delta: f64,
) -> Result<Probability, SamplingError> {
    classical_error_bound(unobserved + sample, sample, delta)
}

/// Draw a uniform size-`sample` subset of `{1..population}` by partial
/// Fisher-Yates shuffle; returned indices are 1-based and sorted.
pub fn sample_subset<R: Rng>(rng: &mut R, population: usize, sample: usize) -> Vec<usize> {
    debug_assert!(sample <= population);
    let mut pool: Vec<usize> = (1..=population).collect();
    for i in 0..sample {
        let j = rng.gen_range(i..population);
        pool.swap(i, j);
    }
    let mut picked = pool[..sample].to_vec();
    picked.sort_unstable();
    picked
}

/// Estimate the true failure probability of the subset strategy on a fixed
/// word by seeded Monte Carlo, next to the analytic bound.
///
/// Deterministic in `(q, sample, delta, trials, seed)`: trial `i` uses
/// generator stream `i` of a ChaCha generator seeded with `seed`.
pub fn monte_carlo_failure_estimate(
    q: &Word,
    sample: u64,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<ErrorProbabilityReport, SamplingError> {
    check_sample_size(q.len() as u64, sample)?;
    check_delta(delta)?;
    if trials == 0 {
        return Err(SamplingError::NoTrials);
    }

    let counted: &[u8] = if q.alphabet() == 4 { &[1, 3] } else { &[1] };
    // 1 for every position holding a counted symbol
    let marks: Vec<u8> = q
        .symbols()
        .iter()
        .map(|s| u8::from(counted.contains(s)))
        .collect();
    let total: u64 = marks.iter().map(|&b| u64::from(b)).sum();
    let population = q.len();
    let m = sample as usize;
    let n = population - m;

    let base = ChaCha8Rng::seed_from_u64(seed);
    let violations: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0u32; population],
            |pool, trial| {
                let mut rng = base.clone();
                rng.set_stream(trial);
                for (i, v) in pool.iter_mut().enumerate() {
                    *v = i as u32;
                }
                // partial Fisher-Yates over positions 0..population
                let mut inside = 0u64;
                for i in 0..m {
                    let j = rng.gen_range(i..population);
                    pool.swap(i, j);
                    inside += u64::from(marks[pool[i] as usize]);
                }
                let observed = inside as f64 / m as f64;
                let rest = (total - inside) as f64 / n as f64;
                u64::from((observed - rest).abs() > delta)
            },
        )
        .sum();

    let analytic_bound = classical_error_bound(population as u64, sample, delta)?;
    Ok(ErrorProbabilityReport {
        analytic_bound,
        empirical_estimate: Some(Probability::new(violations as f64 / trials as f64)?),
        trials,
        seed,
    })
}

/// The alternating word `0101..`, the empirically worst case for the
/// two-sided weight deviation (weight exactly 1/2 at even length).
pub fn balanced_word(len: usize) -> Result<Word, SamplingError> {
    let symbols = (0..len).map(|i| (i % 2) as u8).collect();
    Ok(Word::new(2, symbols)?)
}
