//! Acceptance suite: every release criterion as one test printing a
//! PASS/FAIL line, with the stated tolerances and runtime limits pinned.

use std::time::Instant;

use beu_core::math::{
    binary_entropy, binomial_tail, hamming_ball_log_bound, hamming_ball_size,
    hoeffding_tail_bound, Probability, Word,
};
use beu_core::protocols::{qkd_point, qrng_point, SecurityBudget};
use beu_core::quantum::{overlap_matrix, verify_lemma3, verify_superposition_lemma};
use beu_core::sampling::{balanced_word, monte_carlo_failure_estimate};
use beu_core::uncertainty::{
    asymptotic_bound_ours, asymptotic_bound_standard, failure_probability, theorem_bound,
    BiasParameter, FiniteSizeParams,
};

fn prob(p: f64) -> Probability {
    Probability::new(p).unwrap()
}

fn bias(b: f64) -> BiasParameter {
    BiasParameter::new(b).unwrap()
}

fn report(number: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {number:02} ({name}): {detail}");
    assert!(pass, "criterion {number:02} ({name}) failed: {detail}");
}

fn within_runtime(start: Instant, limit_s: f64) -> (bool, f64) {
    let elapsed = start.elapsed().as_secs_f64();
    (elapsed < limit_s, elapsed)
}

#[test]
fn criterion_01_zero_bias_agreement() {
    let start = Instant::now();
    let mut max_dev = 0.0f64;
    for k in 0..=10 {
        let q = prob(k as f64 * 0.05);
        let ours = asymptotic_bound_ours(BiasParameter::ZERO, q);
        let standard = asymptotic_bound_standard(BiasParameter::ZERO, q).unwrap();
        let reference = 1.0 - binary_entropy(q);
        max_dev = max_dev
            .max((ours - standard).abs())
            .max((ours - reference).abs());
    }
    let (in_time, elapsed) = within_runtime(start, 1.0);
    report(
        1,
        "zero-bias agreement",
        max_dev <= 1e-12 && in_time,
        format!("max deviation {max_dev:.3e}, {elapsed:.3} s"),
    );
}

#[test]
fn criterion_02_fig1_crossover() {
    let ours = asymptotic_bound_ours(bias(0.1), prob(0.2));
    let standard = asymptotic_bound_standard(bias(0.1), prob(0.2)).unwrap();
    let quantitative = (ours - 0.204958).abs() <= 1e-4
        && (standard - 0.015038).abs() <= 1e-4
        && ours > standard;

    // fresh closed-form evaluation, independent of the library path
    let h_ref = |x: f64| -> f64 {
        if x <= 0.0 || x >= 1.0 {
            0.0
        } else {
            -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
        }
    };
    let (b, q) = (0.1f64, 0.01f64);
    let ours_ref = 1.0 - h_ref((q + 4.0 * b * b).min(0.5));
    let std_ref = (-(0.5f64 + b).log2() - h_ref(q)).max(0.0);
    let lib_ours = asymptotic_bound_ours(bias(b), prob(q));
    let lib_std = asymptotic_bound_standard(bias(b), prob(q)).unwrap();
    let direction = (lib_ours > lib_std) == (ours_ref > std_ref);

    report(
        2,
        "fig1 crossover",
        quantitative && direction,
        format!(
            "ours {ours:.6}, standard {standard:.6}; low-noise direction match: {direction}"
        ),
    );
}

#[test]
fn criterion_03_failure_probability_constant() {
    let f = failure_probability(1e-36);
    let dev = (f - 2.52e-12).abs();
    report(
        3,
        "failure-probability constant",
        dev <= 1e-14,
        format!("(16e-36)^(1/3) = {f:.6e}, deviation {dev:.2e}"),
    );
}

#[test]
fn criterion_04_qrng_rates() {
    let start = Instant::now();
    let params = FiniteSizeParams::from_fraction(10_000_000_000, 0.07).unwrap();
    let point = qrng_point(
        params.total(),
        params.sample(),
        bias(0.2),
        &SecurityBudget::default(),
        prob(0.05),
    )
    .unwrap();
    let ours = point.rate_ours();
    let other = point.rate_other();
    let (in_time, elapsed) = within_runtime(start, 1.0);
    report(
        4,
        "QRNG rate reproduction",
        (ours - 0.234).abs() <= 0.002 && (other - 0.162).abs() <= 0.002 && ours > other && in_time,
        format!("rate_ours {ours:.4}, rate_other {other:.4}, {elapsed:.3} s"),
    );
}

#[test]
fn criterion_05_qkd_rates_and_reversal() {
    let params = FiniteSizeParams::from_fraction(10_000_000_000, 0.07).unwrap();
    let point = qkd_point(
        params.total(),
        params.sample(),
        bias(0.1),
        &SecurityBudget::default(),
        prob(0.05),
    )
    .unwrap();
    let new = point.rate_ours();
    let old = point.rate_other();
    let quantitative = (new - 0.191).abs() <= 0.002 && (old - 0.098).abs() <= 0.002 && new > old;

    // no noise, no bias, small N: the prior bound must win
    let small = FiniteSizeParams::from_fraction(1_000_000, 0.07).unwrap();
    let point = qkd_point(
        small.total(),
        small.sample(),
        BiasParameter::ZERO,
        &SecurityBudget::default(),
        prob(0.0),
    )
    .unwrap();
    let reversal = point.rate_other() >= point.rate_ours();

    report(
        5,
        "QKD rate reproduction and reversal",
        quantitative && reversal,
        format!(
            "rate_new {new:.4}, rate_old {old:.4}; small-N no-noise reversal: {reversal}"
        ),
    );
}

#[test]
fn criterion_06_sampling_bound_property() {
    let start = Instant::now();
    let trials = 100_000u64;
    let mut detail = String::new();
    let mut pass = true;
    for (population, sample, delta) in [(1000u64, 100u64, 0.2f64), (2000, 200, 0.15)] {
        let word = balanced_word(population as usize).unwrap();
        let rep = monte_carlo_failure_estimate(&word, sample, delta, trials, 20260810).unwrap();
        let bound = rep.analytic_bound.value();
        let estimate = rep.empirical_estimate.unwrap().value();
        let margin = bound + 3.0 * (bound / trials as f64).sqrt();
        pass &= estimate <= margin;
        detail.push_str(&format!(
            "(N={population}, m={sample}, d={delta}): est {estimate:.5} vs bound {bound:.5}; "
        ));
    }
    let (in_time, elapsed) = within_runtime(start, 30.0);
    report(
        6,
        "Monte Carlo within sampling bound",
        pass && in_time,
        format!("{detail}{elapsed:.2} s"),
    );
}

#[test]
fn criterion_07_hamming_ball_bound() {
    let start = Instant::now();
    let mut pass = true;
    let mut worst_gap = f64::INFINITY;
    for n in 1u64..=16 {
        // brute-force weight histogram of {0,1}^n
        let mut counts = vec![0u64; n as usize + 1];
        for w in 0u64..(1 << n) {
            counts[w.count_ones() as usize] += 1;
        }
        let mut cumulative = 0u64;
        for radius in 0..=n {
            cumulative += counts[radius as usize];
            let exact = hamming_ball_size(n, radius).unwrap();
            pass &= exact == cumulative.into();
            let bound = hamming_ball_log_bound(n, radius as f64 / n as f64).unwrap();
            let log_exact = (cumulative as f64).log2();
            pass &= log_exact <= bound + 1e-9;
            worst_gap = worst_gap.min(bound - log_exact);
        }
    }
    let (in_time, elapsed) = within_runtime(start, 10.0);
    report(
        7,
        "Hamming-ball bound (exhaustive n <= 16)",
        pass && in_time,
        format!("smallest bound slack {worst_gap:.4} bits, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_08_hoeffding_dominance() {
    let start = Instant::now();
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for m in [10u64, 100, 1000] {
        for p in [0.01, 0.04, 0.16] {
            let p = prob(p);
            let steps = 200;
            for i in 0..=steps {
                let nu = p.value() + (0.5 - p.value()) * i as f64 / steps as f64;
                let k_min = (m as f64 * nu).ceil() as u64;
                if k_min > m {
                    continue;
                }
                let tail = binomial_tail(m, p, k_min).unwrap().value();
                let bound = hoeffding_tail_bound(m, p, nu).unwrap().value();
                pass &= tail <= bound + 1e-12;
                if bound > 0.0 {
                    worst_ratio = worst_ratio.max(tail / bound);
                }
            }
        }
    }
    let (in_time, elapsed) = within_runtime(start, 10.0);
    report(
        8,
        "Hoeffding dominates exact binomial tail",
        pass && in_time,
        format!("worst tail/bound ratio {worst_ratio:.4}, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_09_overlap_identities() {
    let mut max_dev = 0.0f64;
    for k in 0..=100 {
        let b = bias(-0.5 + k as f64 / 100.0);
        let p = b.p();
        let m = overlap_matrix(b).unwrap();
        let mut expected = [[0.0f64; 4]; 4];
        expected[0][0] = 1.0;
        expected[3][3] = 1.0;
        expected[1][1] = 1.0 - p;
        expected[2][2] = 1.0 - p;
        expected[1][2] = p;
        expected[2][1] = p;
        for i in 0..4 {
            for j in 0..4 {
                max_dev = max_dev.max((m[i][j] - expected[i][j]).abs());
            }
        }
    }
    report(
        9,
        "overlap identities over 101 biases",
        max_dev <= 1e-12,
        format!("max deviation from 4b^2 pattern: {max_dev:.3e}"),
    );
}

#[test]
fn criterion_10_lemma_oracle_suites() {
    let start = Instant::now();
    let mut violations = 0usize;
    let mut draws = 0u64;

    // Bell-superposition bound, trivial environment, n = 1..3
    // (the n = 1 call also runs the Helstrom orthogonal-environment case)
    for (pairs, q_cap) in [(1, 0.0), (1, 0.3), (2, 0.25), (2, 0.5), (3, 1.0 / 3.0)] {
        let trials = 1000;
        let report = verify_lemma3(pairs, q_cap, trials, 0xBE11).unwrap();
        violations += report.violations();
        draws += trials;
    }

    // superposition lemma, n = 1..3 over several index sets
    let word = |bits: &[u8]| Word::binary(bits).unwrap();
    let configs: Vec<(usize, Vec<Word>)> = vec![
        (1, vec![word(&[0]), word(&[1])]),
        (2, vec![word(&[0, 0]), word(&[1, 1])]),
        (2, vec![word(&[0, 0]), word(&[0, 1]), word(&[1, 0]), word(&[1, 1])]),
        (3, vec![word(&[0, 0, 0]), word(&[0, 1, 1]), word(&[1, 0, 1]), word(&[1, 1, 0])]),
    ];
    for (qubits, j_words) in &configs {
        let trials = 1000;
        let report = verify_superposition_lemma(*qubits, j_words, trials, 0x1E44A).unwrap();
        violations += report.violations();
        draws += trials;
    }

    let (in_time, elapsed) = within_runtime(start, 60.0);
    report(
        10,
        "lemma oracle suites",
        violations == 0 && in_time,
        format!("{draws} draws, {violations} violations, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_11_theorem_to_corollary_convergence() {
    let params = FiniteSizeParams::from_fraction(100_000_000_000_000, 0.07).unwrap();
    let mut max_gap = 0.0f64;
    for b in [0.0, 0.1, 0.2] {
        for w in [0.0, 0.05, 0.2] {
            let bound = theorem_bound(params, bias(b), 1e-36, prob(w)).unwrap();
            let per_signal = bound.min_entropy_lower_bound / params.kept() as f64;
            let corollary = asymptotic_bound_ours(bias(b), prob(w));
            max_gap = max_gap.max((per_signal - corollary).abs());
        }
    }
    report(
        11,
        "theorem-to-corollary convergence at N = 1e14",
        max_gap <= 1e-3,
        format!("max per-signal gap {max_gap:.3e}"),
    );
}
