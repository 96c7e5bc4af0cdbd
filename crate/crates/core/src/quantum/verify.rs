//! Randomized verification suites for the structural claims: the
//! superposition min-entropy lemma, the Bell-superposition bound, and the
//! subset-projection construction behind the sampling theorem.
//!
//! Each suite draws seeded random states, computes exact quantities with
//! the simulator, and reports measured value vs bound per check. Reports
//! serialize as CSV rows `(claim, parameters, measured, bound, pass, seed)`.
//!
//! Conditional min entropy with a nontrivial environment is verified only
//! where a closed form exists: a binary register via Helstrom
//! discrimination, or a trivial environment via the max outcome
//! probability. No general guessing-probability optimization is attempted.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::basis::{bell_word_state, build_basis, BasisKind};
use super::entropy::{min_entropy_classical, min_entropy_helstrom};
use super::measure::{measure_and_trace, MeasurePattern, QubitRole};
use super::state::{StateVector, MAX_QUBITS};
use super::QuantumError;
use crate::math::{binomial_tail, bounded_binary_entropy, Probability, SubsetIndex, Word};
use crate::sampling::{classical_error_bound_quaternary, ideal_word_quaternary};
use crate::uncertainty::BiasParameter;

/// Tolerance for assertions composed of linear-algebra pipelines.
const PIPELINE_TOL: f64 = 1e-9;

/// One verified claim.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub claim: String,
    pub parameters: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    pub seed: u64,
}

/// A list of check rows; clean when every row passed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<CheckRow>,
}

impl VerificationReport {
    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.rows.extend(other.rows);
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }

    /// Overwrite the seed column (for suites fed externally built states).
    pub fn with_seed(mut self, seed: u64) -> Self {
        for row in &mut self.rows {
            row.seed = seed;
        }
        self
    }

    pub fn csv_header() -> &'static str {
        "claim,parameters,measured,bound,pass,seed"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for row in &self.rows {
            let clean = |s: &str| s.replace(',', ";");
            out.push_str(&format!(
                "{},{},{:.9e},{:.9e},{},{}\n",
                clean(&row.claim),
                clean(&row.parameters),
                row.measured,
                row.bound,
                row.pass,
                row.seed
            ));
        }
        out
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Normalized complex Gaussian amplitudes (Box-Muller).
fn random_amplitudes(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(count);
    for _ in 0..count {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        amps.push(Complex64::new(r * theta.cos(), r * theta.sin()));
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter().map(|a| a / norm).collect()
}

fn check_index_words(pairs: usize, words: &[Word]) -> Result<(), QuantumError> {
    if words.is_empty()
        || words
            .iter()
            .any(|w| w.alphabet() != 4 || w.len() != pairs)
    {
        return Err(QuantumError::BadIndexWords);
    }
    for (i, w) in words.iter().enumerate() {
        if words[..i].contains(w) {
            return Err(QuantumError::BadIndexWords);
        }
    }
    Ok(())
}

/// `sum_i alpha_i |phi_i>` over Bell words, trivial environment.
pub fn bell_superposition(
    pairs: usize,
    words: &[Word],
    amplitudes: &[Complex64],
) -> Result<StateVector, QuantumError> {
    check_index_words(pairs, words)?;
    if words.len() != amplitudes.len() {
        return Err(QuantumError::AmplitudeCount {
            words: words.len(),
            amplitudes: amplitudes.len(),
        });
    }
    let qubits = 2 * pairs;
    if qubits > MAX_QUBITS {
        return Err(QuantumError::QubitBudget {
            requested: qubits,
            limit: MAX_QUBITS,
        });
    }
    let mut amps = vec![Complex64::ZERO; 1 << qubits];
    for (word, &alpha) in words.iter().zip(amplitudes) {
        let phi = bell_word_state(word)?;
        for (idx, &a) in phi.amplitudes().iter().enumerate() {
            amps[idx] += alpha * a;
        }
    }
    StateVector::new(qubits, amps)
}

/// `sum_i alpha_i |phi_i>|E_i>` with mutually orthogonal computational
/// environment states, one per index word (a depolarizing-source state by
/// construction). The environment register holds `ceil(log2 |J|)` qubits.
pub fn build_depolarizing_state(
    pairs: usize,
    words: &[Word],
    amplitudes: &[Complex64],
) -> Result<StateVector, QuantumError> {
    check_index_words(pairs, words)?;
    if words.len() != amplitudes.len() {
        return Err(QuantumError::AmplitudeCount {
            words: words.len(),
            amplitudes: amplitudes.len(),
        });
    }
    if pairs > 4 {
        return Err(QuantumError::QubitBudget {
            requested: pairs,
            limit: 4,
        });
    }
    let env_qubits = if words.len() == 1 {
        0
    } else {
        (words.len() as f64).log2().ceil() as usize
    };
    let qubits = 2 * pairs + env_qubits;
    if qubits > MAX_QUBITS {
        return Err(QuantumError::QubitBudget {
            requested: qubits,
            limit: MAX_QUBITS,
        });
    }
    let env_dim = 1usize << env_qubits;
    let mut amps = vec![Complex64::ZERO; 1 << qubits];
    for (env_index, (word, &alpha)) in words.iter().zip(amplitudes).enumerate() {
        let phi = bell_word_state(word)?;
        for (p, &a) in phi.amplitudes().iter().enumerate() {
            amps[p * env_dim + env_index] += alpha * a;
        }
    }
    StateVector::new(qubits, amps)
}

/// All quaternary words of the given length with `#_{1,3}(i)/n <= q_cap`.
fn words_with_13_fraction_at_most(len: usize, q_cap: f64) -> Vec<Word> {
    let mut words = Vec::new();
    for raw in 0..4u32.pow(len as u32) {
        let symbols: Vec<u8> = (0..len)
            .map(|k| ((raw >> (2 * (len - 1 - k))) & 3) as u8)
            .collect();
        let count = symbols.iter().filter(|&&s| s == 1 || s == 3).count();
        if count as f64 / len as f64 <= q_cap {
            words.push(Word::quaternary(&symbols).unwrap());
        }
    }
    words
}

fn summary_row(
    claim: &str,
    parameters: String,
    worst: f64,
    bound: f64,
    seed: u64,
    tol: f64,
) -> CheckRow {
    CheckRow {
        claim: claim.to_string(),
        parameters,
        measured: worst,
        bound,
        pass: worst >= bound - tol,
        seed,
    }
}

/// Verify the Bell-superposition min-entropy bound at desk scale: for
/// random amplitude draws over `J = {i : #_{1,3}(i)/n <= Q}` with trivial
/// environment, the `Z` register of the first particles (second particles
/// traced out) has min entropy at least `n (1 - h_hat(Q))`; for `n = 1`
/// the same is checked with orthogonal environments via Helstrom.
pub fn verify_lemma3(
    pairs: usize,
    q_cap: f64,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport, QuantumError> {
    if pairs == 0 || pairs > 3 {
        return Err(QuantumError::QubitBudget {
            requested: pairs,
            limit: 3,
        });
    }
    if !(0.0..=1.0).contains(&q_cap) {
        return Err(QuantumError::BadDistribution(q_cap));
    }
    let words = words_with_13_fraction_at_most(pairs, q_cap);
    let bound = pairs as f64 * (1.0 - bounded_binary_entropy(q_cap)?);

    let mut roles = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        roles.push(QubitRole::MeasureZ);
        roles.push(QubitRole::TraceOut);
    }
    let pattern = MeasurePattern::new(roles, BiasParameter::ZERO)?;

    let entropies: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let amplitudes = random_amplitudes(&mut rng, words.len());
            let state = bell_superposition(pairs, &words, &amplitudes)?;
            let result = measure_and_trace(&state, &pattern)?;
            let dist: Vec<f64> = result.outcomes.iter().map(|o| o.probability).collect();
            min_entropy_classical(&dist)
        })
        .collect::<Result<_, _>>()?;

    let mut report = VerificationReport::default();
    let worst = entropies.iter().copied().fold(f64::INFINITY, f64::min);
    report.push(summary_row(
        "bell-superposition min-entropy bound (trivial environment)",
        format!("n={pairs} Q={q_cap} |J|={} trials={trials}", words.len()),
        worst,
        bound,
        seed,
        PIPELINE_TOL,
    ));
    for (trial, h) in entropies.iter().enumerate() {
        if *h < bound - PIPELINE_TOL {
            report.push(CheckRow {
                claim: "bell-superposition bound violation".into(),
                parameters: format!("n={pairs} Q={q_cap} trial={trial}"),
                measured: *h,
                bound,
                pass: false,
                seed,
            });
        }
    }

    if pairs == 1 {
        report.extend(verify_lemma3_helstrom(q_cap, trials, seed)?);
    }
    Ok(report)
}

/// The `n = 1` case with nontrivial orthogonal environments: conditional
/// min entropy of the binary `Z` register given the environment, computed
/// exactly via Helstrom discrimination.
fn verify_lemma3_helstrom(
    q_cap: f64,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport, QuantumError> {
    let words = words_with_13_fraction_at_most(1, q_cap);
    let bound = 1.0 - bounded_binary_entropy(q_cap)?;
    let env_qubits = if words.len() == 1 { 0 } else { (words.len() as f64).log2().ceil() as usize };

    let mut roles = vec![QubitRole::MeasureZ, QubitRole::TraceOut];
    roles.extend(std::iter::repeat(QubitRole::Keep).take(env_qubits));
    let pattern = MeasurePattern::new(roles, BiasParameter::ZERO)?;

    let entropies: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            // offset the stream so draws differ from the trivial-env suite
            let mut rng = trial_rng(seed, trial + (1 << 32));
            let amplitudes = random_amplitudes(&mut rng, words.len());
            let state = build_depolarizing_state(1, &words, &amplitudes)?;
            let result = measure_and_trace(&state, &pattern)?;
            let p0 = result.outcomes[0].probability;
            let p1 = result.outcomes[1].probability;
            let rho0 = result.outcomes[0]
                .conditional
                .as_ref()
                .ok_or(QuantumError::BadDistribution(p0))?;
            let rho1 = result.outcomes[1]
                .conditional
                .as_ref()
                .ok_or(QuantumError::BadDistribution(p1))?;
            min_entropy_helstrom(p0, rho0, p1, rho1)
        })
        .collect::<Result<_, _>>()?;

    let mut report = VerificationReport::default();
    let worst = entropies.iter().copied().fold(f64::INFINITY, f64::min);
    report.push(summary_row(
        "bell-superposition conditional bound (Helstrom, orthogonal environments)",
        format!("n=1 Q={q_cap} |J|={} trials={trials}", words.len()),
        worst,
        bound,
        seed,
        PIPELINE_TOL,
    ));
    for (trial, h) in entropies.iter().enumerate() {
        if *h < bound - PIPELINE_TOL {
            report.push(CheckRow {
                claim: "bell-superposition conditional bound violation".into(),
                parameters: format!("n=1 Q={q_cap} trial={trial}"),
                measured: *h,
                bound,
                pass: false,
                seed,
            });
        }
    }
    Ok(report)
}

/// Verify the superposition lemma: measuring a pure computational-basis
/// superposition over `J` in the `X` (Hadamard) basis loses at most
/// `log2 |J|` bits of min entropy against the dephased mixture.
pub fn verify_superposition_lemma(
    qubits: usize,
    j_words: &[Word],
    trials: u64,
    seed: u64,
) -> Result<VerificationReport, QuantumError> {
    if qubits == 0 || qubits > 3 {
        return Err(QuantumError::QubitBudget {
            requested: qubits,
            limit: 3,
        });
    }
    if j_words.is_empty()
        || j_words
            .iter()
            .any(|w| w.alphabet() != 2 || w.len() != qubits)
    {
        return Err(QuantumError::BadIndexWords);
    }
    for (i, w) in j_words.iter().enumerate() {
        if j_words[..i].contains(w) {
            return Err(QuantumError::BadIndexWords);
        }
    }

    let dim = 1usize << qubits;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let h_matrix = [
        [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
        [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
    ];
    let hadamard_all = |state: &mut StateVector| {
        for q in 0..qubits {
            state.apply_single_qubit_matrix(q, &h_matrix);
        }
    };

    let indices: Vec<usize> = j_words
        .iter()
        .map(|w| w.symbols().iter().fold(0usize, |acc, &s| acc << 1 | s as usize))
        .collect();

    // X-outcome profiles of each basis state, for the dephased mixture
    let mut basis_profiles = Vec::with_capacity(indices.len());
    for &i in &indices {
        let mut basis = StateVector::basis_state(qubits, i)?;
        hadamard_all(&mut basis);
        basis_profiles.push(
            basis
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .collect::<Vec<f64>>(),
        );
    }

    let penalty = (j_words.len() as f64).log2();
    let margins: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let amplitudes = random_amplitudes(&mut rng, indices.len());
            let mut amps = vec![Complex64::ZERO; dim];
            for (&i, &a) in indices.iter().zip(&amplitudes) {
                amps[i] = a;
            }
            let mut pure = StateVector::new(qubits, amps)?;
            hadamard_all(&mut pure);
            let p_pure: Vec<f64> = pure.amplitudes().iter().map(|a| a.norm_sqr()).collect();

            let mut p_mixed = vec![0.0f64; dim];
            for (profile, &a) in basis_profiles.iter().zip(&amplitudes) {
                let w = a.norm_sqr();
                for (x, &px) in profile.iter().enumerate() {
                    p_mixed[x] += w * px;
                }
            }
            let h_pure = min_entropy_classical(&p_pure)?;
            let h_mixed = min_entropy_classical(&p_mixed)?;
            Ok((h_pure, h_mixed - penalty))
        })
        .collect::<Result<_, QuantumError>>()?;

    let mut report = VerificationReport::default();
    let worst = margins
        .iter()
        .map(|(h, b)| h - b)
        .fold(f64::INFINITY, f64::min);
    report.push(summary_row(
        "superposition min-entropy lemma (X measurement)",
        format!("n={qubits} |J|={} trials={trials}", j_words.len()),
        worst,
        0.0,
        seed,
        PIPELINE_TOL,
    ));
    for (trial, (h, b)) in margins.iter().enumerate() {
        if h - b < -PIPELINE_TOL {
            report.push(CheckRow {
                claim: "superposition lemma violation".into(),
                parameters: format!("n={qubits} trial={trial}"),
                measured: *h,
                bound: *b,
                pass: false,
                seed,
            });
        }
    }
    Ok(report)
}

/// Per-word coefficient vectors of `state` in the Bell basis of the
/// selected pairs: entry `i` is the unnormalized vector on the remaining
/// qubits (original order) multiplying `|phi_i>` on those pairs.
fn bell_components(
    state: &StateVector,
    selected_pairs: &[usize],
    total_pairs: usize,
) -> Result<Vec<Vec<Complex64>>, QuantumError> {
    let qubits = state.qubits();
    let sel_qubits: Vec<usize> = selected_pairs
        .iter()
        .flat_map(|&p| [2 * p, 2 * p + 1])
        .collect();
    if sel_qubits.iter().any(|&q| q >= qubits) || 2 * total_pairs > qubits {
        return Err(QuantumError::BadPattern(
            "selected pairs outside the state".into(),
        ));
    }
    let rest_qubits: Vec<usize> = (0..qubits).filter(|q| !sel_qubits.contains(q)).collect();
    let m = selected_pairs.len();
    let sel_dim = 1usize << (2 * m);
    let rest_dim = 1usize << rest_qubits.len();

    // per-index (selected config, rest config) split
    let bit = |idx: usize, q: usize| idx >> (qubits - 1 - q) & 1;
    let mut sel_cfg = vec![0usize; state.dim()];
    let mut rest_cfg = vec![0usize; state.dim()];
    for idx in 0..state.dim() {
        sel_cfg[idx] = sel_qubits.iter().fold(0, |acc, &q| acc << 1 | bit(idx, q));
        rest_cfg[idx] = rest_qubits.iter().fold(0, |acc, &q| acc << 1 | bit(idx, q));
    }

    let mut components = Vec::with_capacity(4usize.pow(m as u32));
    for raw in 0..4u32.pow(m as u32) {
        let symbols: Vec<u8> = (0..m)
            .map(|k| ((raw >> (2 * (m - 1 - k))) & 3) as u8)
            .collect();
        let phi = bell_word_state(&Word::quaternary(&symbols).unwrap())?;
        debug_assert_eq!(phi.dim(), sel_dim);
        let mut out = vec![Complex64::ZERO; rest_dim];
        for (idx, &amp) in state.amplitudes().iter().enumerate() {
            let c = phi.amplitudes()[sel_cfg[idx]];
            if c != Complex64::ZERO {
                out[rest_cfg[idx]] += c.conj() * amp;
            }
        }
        components.push(out);
    }
    Ok(components)
}

fn vec_norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn quaternary_words(len: usize) -> Vec<Word> {
    (0..4u32.pow(len as u32))
        .map(|raw| {
            let symbols: Vec<u8> = (0..len)
                .map(|k| ((raw >> (2 * (len - 1 - k))) & 3) as u8)
                .collect();
            Word::quaternary(&symbols).unwrap()
        })
        .collect()
}

fn subsets_of_size(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, current: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            all.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, m, current, all);
            current.pop();
        }
    }
    rec(0, n, m, &mut current, &mut all);
    all
}

/// Verify the subset-projection construction on a small composite state:
/// for every size-`sample` subset `t` of the `pairs` Bell pairs, project
/// onto the span of the ideal words, and check that (a) the projection is
/// supported on the ideal subspace, (b) the subset-averaged trace distance
/// obeys both the exact identity route and the analytic sampling bound,
/// and (c) a depolarizing-source input projects to a depolarizing-source
/// state.
pub fn verify_ideal_projection(
    pairs: usize,
    sample: usize,
    delta: f64,
    state: &StateVector,
) -> Result<VerificationReport, QuantumError> {
    if pairs == 0 || pairs > 4 {
        return Err(QuantumError::QubitBudget {
            requested: pairs,
            limit: 4,
        });
    }
    if sample == 0 || sample >= pairs {
        return Err(QuantumError::BadPattern(format!(
            "sample size {sample} must satisfy 0 < m < {pairs}"
        )));
    }
    if state.qubits() < 2 * pairs {
        return Err(QuantumError::WrongLength {
            expected: 2 * pairs,
            got: state.qubits(),
        });
    }

    let all_pairs: Vec<usize> = (0..pairs).collect();
    let components = bell_components(state, &all_pairs, pairs)?;
    let words = quaternary_words(pairs);
    let weights: Vec<f64> = components.iter().map(|v| vec_norm_sq(v)).collect();

    // depolarizing input: distinct Bell components carry orthogonal
    // environment vectors
    let mut input_gram_offdiag = 0.0f64;
    for i in 0..components.len() {
        if weights[i] < 1e-12 {
            continue;
        }
        for j in (i + 1)..components.len() {
            if weights[j] < 1e-12 {
                continue;
            }
            let dot: Complex64 = components[i]
                .iter()
                .zip(&components[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            input_gram_offdiag = input_gram_offdiag.max(dot.norm());
        }
    }
    let input_is_depolarizing = input_gram_offdiag <= 1e-8;

    let subsets = subsets_of_size(pairs, sample);
    let mut report = VerificationReport::default();
    let mut distances = Vec::with_capacity(subsets.len());
    let mut bad_masses = Vec::with_capacity(subsets.len());
    let mut word_fail_counts = vec![0usize; words.len()];
    let mut max_leak = 0.0f64;
    let mut max_projected_offdiag = 0.0f64;

    for subset in &subsets {
        let t = SubsetIndex::from_zero_based(subset, pairs)?;
        let ideal: Vec<bool> = words
            .iter()
            .map(|w| ideal_word_quaternary(w, &t, delta))
            .collect::<Result<_, _>>()?;
        for (w, ok) in word_fail_counts.iter_mut().zip(&ideal) {
            if !ok {
                *w += 1;
            }
        }
        let mass: f64 = weights
            .iter()
            .zip(&ideal)
            .filter(|(_, &ok)| ok)
            .map(|(w, _)| w)
            .sum();
        bad_masses.push((1.0 - mass).max(0.0));
        distances.push((1.0 - mass).max(0.0).sqrt());

        if mass > 1e-12 {
            // reconstruct the normalized projection and re-decompose it
            let scale = mass.sqrt().recip();
            let env_dim = components[0].len();
            let mut proj = vec![Complex64::ZERO; state.dim()];
            for (i, word) in words.iter().enumerate() {
                if !ideal[i] || weights[i] < 1e-300 {
                    continue;
                }
                let phi = bell_word_state(word)?;
                for (p, &c) in phi.amplitudes().iter().enumerate() {
                    if c == Complex64::ZERO {
                        continue;
                    }
                    for (e, &mu) in components[i].iter().enumerate() {
                        proj[p * env_dim + e] += c * mu * scale;
                    }
                }
            }
            let projected = StateVector::new(state.qubits(), proj)?;
            let re_components = bell_components(&projected, &all_pairs, pairs)?;
            let leak: f64 = re_components
                .iter()
                .zip(&ideal)
                .filter(|(_, &ok)| !ok)
                .map(|(v, _)| vec_norm_sq(v))
                .sum();
            max_leak = max_leak.max(leak);

            if input_is_depolarizing {
                for i in 0..re_components.len() {
                    for j in (i + 1)..re_components.len() {
                        let dot: Complex64 = re_components[i]
                            .iter()
                            .zip(&re_components[j])
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        max_projected_offdiag = max_projected_offdiag.max(dot.norm());
                    }
                }
            }
        }
    }

    let subset_count = subsets.len() as f64;
    let avg_distance: f64 = distances.iter().sum::<f64>() / subset_count;
    let avg_bad: f64 = bad_masses.iter().sum::<f64>() / subset_count;

    report.push(CheckRow {
        claim: "projection supported on ideal subspace".into(),
        parameters: format!("N={pairs} m={sample} delta={delta}"),
        measured: max_leak,
        bound: 1e-10,
        pass: max_leak <= 1e-10,
        seed: 0,
    });

    // exact identity: E_t[bad mass] = sum_i w_i Pr_t(i not ideal)
    let identity_rhs: f64 = weights
        .iter()
        .zip(&word_fail_counts)
        .map(|(w, &f)| w * f as f64 / subset_count)
        .sum();
    report.push(CheckRow {
        claim: "averaged bad mass equals weighted word failure rate".into(),
        parameters: format!("N={pairs} m={sample} delta={delta}"),
        measured: (avg_bad - identity_rhs).abs(),
        bound: 1e-10,
        pass: (avg_bad - identity_rhs).abs() <= 1e-10,
        seed: 0,
    });

    // Jensen route: E_t[sqrt(bad)] <= sqrt(E_t[bad])
    report.push(CheckRow {
        claim: "averaged trace distance within exact sampling route".into(),
        parameters: format!("N={pairs} m={sample} delta={delta}"),
        measured: avg_distance,
        bound: avg_bad.sqrt() + 1e-10,
        pass: avg_distance <= avg_bad.sqrt() + 1e-10,
        seed: 0,
    });

    // analytic route via the quaternary sampling bound
    let analytic = classical_error_bound_quaternary((pairs - sample) as u64, sample as u64, delta)?
        .value();
    report.push(CheckRow {
        claim: "averaged trace distance within analytic sampling bound".into(),
        parameters: format!("N={pairs} m={sample} delta={delta}"),
        measured: avg_distance,
        bound: analytic.sqrt(),
        pass: avg_distance <= analytic.sqrt() + 1e-10,
        seed: 0,
    });

    // the worst word's exact failure probability also sits under the bound
    let worst_word_fail = weights
        .iter()
        .zip(&word_fail_counts)
        .filter(|(&w, _)| w > 1e-12)
        .map(|(_, &f)| f as f64 / subset_count)
        .fold(0.0f64, f64::max);
    report.push(CheckRow {
        claim: "worst-word exact failure within analytic bound".into(),
        parameters: format!("N={pairs} m={sample} delta={delta}"),
        measured: worst_word_fail,
        bound: analytic,
        pass: worst_word_fail <= analytic + 1e-12,
        seed: 0,
    });

    if input_is_depolarizing {
        report.push(CheckRow {
            claim: "projection preserves depolarizing source".into(),
            parameters: format!("N={pairs} m={sample} delta={delta}"),
            measured: max_projected_offdiag,
            bound: 1e-10,
            pass: max_projected_offdiag <= 1e-10,
            seed: 0,
        });
    }
    Ok(report)
}

/// End-to-end check of the good/bad split behind the main bound: for each
/// subset `t`, expand the ideal state over the `X_alpha`-Bell basis of the
/// sampled pairs, discard components farther than `m nu` in Hamming
/// distance, and verify the discarded weight `1 - M` against the binomial
/// tail `sum_{d=floor(m nu)}^{m} C(m,d) p^d (1-p)^(m-d)` with `p = 4 b^2`.
/// Tightness is not asserted, only the bound direction.
pub fn verify_ideal_ideal(
    pairs: usize,
    sample: usize,
    delta: f64,
    bias: BiasParameter,
    nu: f64,
    state: &StateVector,
) -> Result<VerificationReport, QuantumError> {
    if pairs == 0 || pairs > 4 {
        return Err(QuantumError::QubitBudget {
            requested: pairs,
            limit: 4,
        });
    }
    if sample == 0 || sample >= pairs {
        return Err(QuantumError::BadPattern(format!(
            "sample size {sample} must satisfy 0 < m < {pairs}"
        )));
    }
    if !(nu >= 0.0) {
        return Err(QuantumError::BadDistribution(nu));
    }

    // single-pair overlap coefficients <phi_j^X | phi_i>
    let bell = build_basis(BasisKind::Bell, bias)?;
    let xbell = build_basis(BasisKind::XAlphaBell, bias)?;
    let mut coeff = [[Complex64::ZERO; 4]; 4];
    for j in 0..4 {
        for i in 0..4 {
            coeff[j][i] = xbell.vectors()[j].inner(&bell.vectors()[i])?;
        }
    }

    let all_pairs: Vec<usize> = (0..pairs).collect();
    let full_components = bell_components(state, &all_pairs, pairs)?;
    let full_words = quaternary_words(pairs);
    let weights: Vec<f64> = full_components.iter().map(|v| vec_norm_sq(v)).collect();

    let sample_words = quaternary_words(sample);
    let threshold = sample as f64 * nu;
    let k_min = threshold.floor() as u64;
    let tail_bound = if k_min > sample as u64 {
        0.0
    } else {
        binomial_tail(
            sample as u64,
            Probability::new(bias.p())?,
            k_min,
        )?
        .value()
    };

    let mut report = VerificationReport::default();
    let mut worst_discard = 0.0f64;
    let mut worst_norm_dev = 0.0f64;
    let mut avg_ideal_ideal_dist = 0.0f64;
    let subsets = subsets_of_size(pairs, sample);

    for subset in &subsets {
        let t = SubsetIndex::from_zero_based(subset, pairs)?;
        // project onto the ideal words for this subset
        let mass: f64 = full_words
            .iter()
            .zip(&weights)
            .filter(|(w, _)| ideal_word_quaternary(w, &t, delta).unwrap_or(false))
            .map(|(_, &wt)| wt)
            .sum();
        if mass <= 1e-12 {
            continue;
        }
        let env_dim = full_components[0].len();
        let scale = mass.sqrt().recip();
        let mut proj = vec![Complex64::ZERO; state.dim()];
        for (i, word) in full_words.iter().enumerate() {
            if !ideal_word_quaternary(word, &t, delta)? || weights[i] < 1e-300 {
                continue;
            }
            let phi = bell_word_state(word)?;
            for (p, &c) in phi.amplitudes().iter().enumerate() {
                if c == Complex64::ZERO {
                    continue;
                }
                for (e, &mu) in full_components[i].iter().enumerate() {
                    proj[p * env_dim + e] += c * mu * scale;
                }
            }
        }
        let ideal_state = StateVector::new(state.qubits(), proj)?;

        // expand over the sampled pairs' Bell words
        let mu_components = bell_components(&ideal_state, subset, pairs)?;

        // good/bad split per X-Bell word j of the sampled pairs
        let mut total_good = 0.0f64;
        let mut total_bad = 0.0f64;
        let rest_dim = mu_components[0].len();
        for j_word in &sample_words {
            let mut good = vec![Complex64::ZERO; rest_dim];
            let mut bad = vec![Complex64::ZERO; rest_dim];
            for (i_idx, i_word) in sample_words.iter().enumerate() {
                let mut overlap = Complex64::ONE;
                for (js, is) in j_word.symbols().iter().zip(i_word.symbols()) {
                    overlap *= coeff[*js as usize][*is as usize];
                }
                if overlap == Complex64::ZERO {
                    continue;
                }
                let distance = crate::math::hamming_distance(j_word, i_word)?;
                let target = if distance as f64 <= threshold {
                    &mut good
                } else {
                    &mut bad
                };
                for (acc, &mu) in target.iter_mut().zip(&mu_components[i_idx]) {
                    *acc += overlap * mu;
                }
            }
            total_good += vec_norm_sq(&good);
            total_bad += vec_norm_sq(&bad);
        }
        worst_norm_dev = worst_norm_dev.max((total_good + total_bad - 1.0).abs());
        worst_discard = worst_discard.max(total_bad);
        avg_ideal_ideal_dist += total_bad.max(0.0).sqrt() / subsets.len() as f64;
    }

    report.push(CheckRow {
        claim: "good/bad split preserves normalization".into(),
        parameters: format!("N={pairs} m={sample} b={} nu={nu}", bias.b()),
        measured: worst_norm_dev,
        bound: PIPELINE_TOL,
        pass: worst_norm_dev <= PIPELINE_TOL,
        seed: 0,
    });
    report.push(CheckRow {
        claim: "discarded weight within binomial tail".into(),
        parameters: format!(
            "N={pairs} m={sample} b={} nu={nu} k_min={k_min}",
            bias.b()
        ),
        measured: worst_discard,
        bound: tail_bound,
        pass: worst_discard <= tail_bound + 1e-10,
        seed: 0,
    });
    // composite triangle-inequality distance: sampling step plus
    // good/bad truncation step
    let analytic = classical_error_bound_quaternary((pairs - sample) as u64, sample as u64, delta)?
        .value();
    report.push(CheckRow {
        claim: "composite ideal-ideal distance within triangle bound".into(),
        parameters: format!("N={pairs} m={sample} b={} nu={nu}", bias.b()),
        measured: avg_ideal_ideal_dist,
        bound: analytic.sqrt() + tail_bound.sqrt(),
        pass: avg_ideal_ideal_dist <= analytic.sqrt() + tail_bound.sqrt() + 1e-10,
        seed: 0,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qw(s: &[u8]) -> Word {
        Word::quaternary(s).unwrap()
    }

    fn bweq(s: &[u8]) -> Word {
        Word::binary(s).unwrap()
    }

    #[test]
    fn random_amplitudes_are_normalized_and_deterministic() {
        let mut rng = trial_rng(5, 0);
        let a = random_amplitudes(&mut rng, 8);
        assert!((a.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        let mut rng = trial_rng(5, 0);
        let b = random_amplitudes(&mut rng, 8);
        assert_eq!(a, b);
        let mut rng = trial_rng(5, 1);
        let c = random_amplitudes(&mut rng, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn depolarizing_state_has_orthogonal_environments() {
        let words = [qw(&[0]), qw(&[2])];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
        let state = build_depolarizing_state(1, &words, &amps).unwrap();
        assert_eq!(state.qubits(), 3); // 2 pair qubits + 1 env qubit
        assert!((state.norm_sq() - 1.0).abs() < 1e-10);

        let components = bell_components(&state, &[0], 1).unwrap();
        let dot: Complex64 = components[0]
            .iter()
            .zip(&components[2])
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(dot.norm() < 1e-12);
    }

    #[test]
    fn depolarizing_state_random_draw_is_normalized() {
        let mut rng = trial_rng(17, 3);
        let words: Vec<Word> = [
            [0u8, 0], [0, 1], [1, 2], [2, 0], [3, 3], [1, 1],
        ]
        .iter()
        .map(|s| qw(s))
        .collect();
        let amps = random_amplitudes(&mut rng, words.len());
        let state = build_depolarizing_state(2, &words, &amps).unwrap();
        assert!((state.norm_sq() - 1.0).abs() < 1e-10);
        // 4 pair qubits + 3 env qubits for 6 words
        assert_eq!(state.qubits(), 7);
    }

    #[test]
    fn depolarizing_state_rejects_bad_input() {
        let words = [qw(&[0]), qw(&[0])];
        let amps = [Complex64::ONE, Complex64::ZERO];
        assert!(build_depolarizing_state(1, &words, &amps).is_err());
        let words = [qw(&[0])];
        assert!(build_depolarizing_state(1, &words, &amps).is_err());
        assert!(build_depolarizing_state(5, &[qw(&[0, 0, 0, 0, 0])], &[Complex64::ONE]).is_err());
    }

    #[test]
    fn single_bell_pair_superposition() {
        let state = bell_superposition(1, &[qw(&[0])], &[Complex64::ONE]).unwrap();
        let phi0 = bell_word_state(&qw(&[0])).unwrap();
        assert!((state.inner(&phi0).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lemma3_small_cases() {
        // Q = 0, n = 1: J = {0, 2}, bound 1, met exactly
        let report = verify_lemma3(1, 0.0, 200, 42).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
        // Q >= 1/2: bound 0, vacuous
        let report = verify_lemma3(2, 0.6, 50, 42).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.rows[0].bound, 0.0);
    }

    #[test]
    fn lemma3_n3_matches_expected_bound() {
        let report = verify_lemma3(3, 1.0 / 3.0, 300, 7).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
        let row = &report.rows[0];
        assert!((row.bound - 0.2451).abs() < 1e-4);
        assert!(row.measured >= row.bound - 1e-9);
    }

    #[test]
    fn lemma3_rejects_out_of_scope_sizes() {
        assert!(verify_lemma3(0, 0.3, 10, 0).is_err());
        assert!(verify_lemma3(4, 0.3, 10, 0).is_err());
        assert!(verify_lemma3(2, 1.5, 10, 0).is_err());
    }

    #[test]
    fn superposition_lemma_examples() {
        // |J| = 1: pure basis state, both sides equal
        let report = verify_superposition_lemma(2, &[bweq(&[1, 0])], 50, 3).unwrap();
        assert!(report.is_clean());

        // n = 2, J = {00, 11}
        let report =
            verify_superposition_lemma(2, &[bweq(&[0, 0]), bweq(&[1, 1])], 500, 3).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);

        // n = 3, full cube
        let words: Vec<Word> = (0..8u8)
            .map(|i| bweq(&[(i >> 2) & 1, (i >> 1) & 1, i & 1]))
            .collect();
        let report = verify_superposition_lemma(3, &words, 300, 9).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
    }

    #[test]
    fn superposition_lemma_rejects_bad_j() {
        assert!(verify_superposition_lemma(2, &[], 10, 0).is_err());
        assert!(verify_superposition_lemma(2, &[bweq(&[0])], 10, 0).is_err());
        assert!(verify_superposition_lemma(2, &[bweq(&[0, 0]), bweq(&[0, 0])], 10, 0).is_err());
        assert!(verify_superposition_lemma(2, &[qw(&[0, 0])], 10, 0).is_err());
    }

    #[test]
    fn ideal_projection_on_word_state_already_ideal() {
        // a word with evenly spread 1s is ideal for every singleton subset
        // at delta = 1: distance must be 0
        let state = bell_superposition(3, &[qw(&[1, 1, 1])], &[Complex64::ONE]).unwrap();
        let report = verify_ideal_projection(3, 1, 1.0, &state).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
        let dist_row = report
            .rows
            .iter()
            .find(|r| r.claim.contains("exact sampling route"))
            .unwrap();
        assert!(dist_row.measured < 1e-12);
    }

    #[test]
    fn ideal_projection_on_never_ideal_word() {
        // q = (1, 1, 0): every singleton subset misses the other
        // positions' fraction by at least 0.5 > delta, so the state is
        // orthogonal to every ideal subspace and the distance is 1
        let state = bell_superposition(3, &[qw(&[1, 1, 0])], &[Complex64::ONE]).unwrap();
        let report = verify_ideal_projection(3, 1, 0.3, &state).unwrap();
        let dist_row = report
            .rows
            .iter()
            .find(|r| r.claim.contains("exact sampling route"))
            .unwrap();
        assert!((dist_row.measured - 1.0).abs() < 1e-12);
        // the bad mass identity still holds and the analytic bound is
        // clamped at 1, so no row fails
        assert!(report.is_clean(), "{:?}", report.rows);
    }

    #[test]
    fn ideal_projection_random_depolarizing_state() {
        let mut rng = trial_rng(23, 0);
        let words = quaternary_words(3);
        let amps = random_amplitudes(&mut rng, words.len());
        let state = build_depolarizing_state(3, &words, &amps).unwrap();
        let report = verify_ideal_projection(3, 1, 0.4, &state).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
        assert!(report
            .rows
            .iter()
            .any(|r| r.claim.contains("depolarizing source")));
    }

    #[test]
    fn ideal_ideal_split_bounded_by_binomial_tail() {
        let mut rng = trial_rng(31, 1);
        let words = quaternary_words(3);
        let amps = random_amplitudes(&mut rng, words.len());
        let state = build_depolarizing_state(3, &words, &amps).unwrap();
        let report = verify_ideal_ideal(
            3,
            1,
            0.4,
            BiasParameter::new(0.1).unwrap(),
            0.3,
            &state,
        )
        .unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
    }

    #[test]
    fn ideal_ideal_zero_bias_discards_nothing_at_positive_nu() {
        // p = 0: the X-Bell expansion never moves weight across words
        // farther than 0, so any nu > 0 keeps everything
        let mut rng = trial_rng(37, 2);
        let words = quaternary_words(3);
        let amps = random_amplitudes(&mut rng, words.len());
        let state = build_depolarizing_state(3, &words, &amps).unwrap();
        let report =
            verify_ideal_ideal(3, 1, 0.6, BiasParameter::ZERO, 0.5, &state).unwrap();
        assert!(report.is_clean(), "{:?}", report.rows);
        let discard = report
            .rows
            .iter()
            .find(|r| r.claim.contains("discarded weight"))
            .unwrap();
        assert!(discard.measured < 1e-12);
    }

    #[test]
    fn report_csv_round_trip_shape() {
        let report = verify_lemma3(1, 0.0, 5, 1).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], VerificationReport::csv_header());
        assert_eq!(lines.len(), report.rows.len() + 1);
        let remapped = report.clone().with_seed(99);
        assert!(remapped.rows.iter().all(|r| r.seed == 99));
    }
}
