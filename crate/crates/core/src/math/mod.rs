//! Entropy primitives, word/Hamming utilities, and tail bounds.
//!
//! Everything here is pure and stateless; functions may be called
//! concurrently from any number of threads.

mod tails;

pub use tails::{
    binomial_tail, hamming_ball_log_bound, hamming_ball_size, hoeffding_tail_bound,
    BINOMIAL_EXACT_LIMIT, HAMMING_BALL_EXACT_LIMIT,
};

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(f64),
    #[error("entropy argument {0} must be nonnegative")]
    NegativeArgument(f64),
    #[error("word must be non-empty")]
    EmptyWord,
    #[error("alphabet size {0} unsupported (expected 2 or 4)")]
    BadAlphabet(u8),
    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolRange { symbol: u8, alphabet: u8 },
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("alphabet sizes differ: {0} vs {1}")]
    AlphabetMismatch(u8, u8),
    #[error("expected a word over alphabet size {expected}, got {got}")]
    AlphabetExpected { expected: u8, got: u8 },
    #[error("subset index {index} invalid for parent length {parent}")]
    SubsetRange { index: usize, parent: usize },
    #[error("subset indices must be strictly increasing")]
    SubsetOrder,
    #[error("radius {radius} exceeds word length {n}")]
    RadiusRange { radius: u64, n: u64 },
    #[error("exact arithmetic limited to n <= {limit}, got {n}")]
    ExactLimit { n: u64, limit: u64 },
    #[error("tail cutoff {k_min} exceeds trial count {m}")]
    CutoffRange { k_min: u64, m: u64 },
    #[error("Hoeffding bound requires nu >= p, got nu = {nu}, p = {p}")]
    HoeffdingDomain { nu: f64, p: f64 },
    #[error("count {0} must be positive")]
    ZeroCount(u64),
}

/// A real number constrained to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);
    pub const HALF: Probability = Probability(0.5);

    pub fn new(value: f64) -> Result<Self, MathError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(MathError::ProbabilityRange(value))
        }
    }

    /// Clamp a finite value into `[0, 1]`.
    pub fn clamped(value: f64) -> Result<Self, MathError> {
        if value.is_nan() {
            return Err(MathError::ProbabilityRange(value));
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = MathError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-empty word over the alphabet `{0, .., d-1}` with `d` = 2 or 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(alphabet: u8, symbols: Vec<u8>) -> Result<Self, MathError> {
        if alphabet != 2 && alphabet != 4 {
            return Err(MathError::BadAlphabet(alphabet));
        }
        if symbols.is_empty() {
            return Err(MathError::EmptyWord);
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(MathError::SymbolRange { symbol, alphabet });
        }
        Ok(Self { symbols, alphabet })
    }

    pub fn binary(symbols: &[u8]) -> Result<Self, MathError> {
        Self::new(2, symbols.to_vec())
    }

    pub fn quaternary(symbols: &[u8]) -> Result<Self, MathError> {
        Self::new(4, symbols.to_vec())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A strictly increasing set of 1-based positions within a parent word.
///
/// May be empty; every index satisfies `1 <= index <= parent_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndex {
    indices: Vec<usize>,
    parent_len: usize,
}

impl SubsetIndex {
    pub fn new(indices: Vec<usize>, parent_len: usize) -> Result<Self, MathError> {
        let mut prev = 0usize;
        for &index in &indices {
            if index == 0 || index > parent_len {
                return Err(MathError::SubsetRange {
                    index,
                    parent: parent_len,
                });
            }
            if index <= prev {
                return Err(MathError::SubsetOrder);
            }
            prev = index;
        }
        Ok(Self {
            indices,
            parent_len,
        })
    }

    /// Build from 0-based positions (sorted ascending, no duplicates).
    pub fn from_zero_based(positions: &[usize], parent_len: usize) -> Result<Self, MathError> {
        Self::new(positions.iter().map(|&p| p + 1).collect(), parent_len)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn parent_len(&self) -> usize {
        self.parent_len
    }

    /// 1-based indices, strictly increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index_1based: usize) -> bool {
        self.indices.binary_search(&index_1based).is_ok()
    }

    /// Positions of this subset within the parent, 0-based.
    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|&i| i - 1)
    }

    /// The complementary subset of the same parent.
    pub fn complement(&self) -> SubsetIndex {
        let indices = (1..=self.parent_len)
            .filter(|i| !self.contains(*i))
            .collect();
        SubsetIndex {
            indices,
            parent_len: self.parent_len,
        }
    }
}

/// Binary entropy `h(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 := 0`.
pub fn binary_entropy(p: Probability) -> f64 {
    let p = p.value();
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Bounded binary entropy: `h(x)` for `x < 1/2`, saturating at 1 otherwise.
///
/// Arguments above 1 are accepted and also return 1: finite-size bound
/// arguments of the form `w + nu + delta` can exceed 1, and the entropy
/// saturates either way.
pub fn bounded_binary_entropy(x: f64) -> Result<f64, MathError> {
    if !(x >= 0.0) {
        return Err(MathError::NegativeArgument(x));
    }
    if x < 0.5 {
        Ok(binary_entropy(Probability(x)))
    } else {
        Ok(1.0)
    }
}

/// Relative Hamming weight `#_1(x) / |x|` of a binary word.
pub fn relative_hamming_weight(x: &Word) -> Result<Probability, MathError> {
    if x.alphabet() != 2 {
        return Err(MathError::AlphabetExpected {
            expected: 2,
            got: x.alphabet(),
        });
    }
    let ones = x.symbols().iter().filter(|&&s| s == 1).count();
    Ok(Probability(ones as f64 / x.len() as f64))
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize, MathError> {
    if a.len() != b.len() {
        return Err(MathError::LengthMismatch(a.len(), b.len()));
    }
    if a.alphabet() != b.alphabet() {
        return Err(MathError::AlphabetMismatch(a.alphabet(), b.alphabet()));
    }
    Ok(a.symbols()
        .iter()
        .zip(b.symbols())
        .filter(|(x, y)| x != y)
        .count())
}

/// Number of positions of `a` holding any of the given symbols
/// (the `#_i` and `#_{i,j}` counts).
pub fn count_symbols(a: &Word, symbols: &[u8]) -> Result<usize, MathError> {
    if let Some(&symbol) = symbols.iter().find(|&&s| s >= a.alphabet()) {
        return Err(MathError::SymbolRange {
            symbol,
            alphabet: a.alphabet(),
        });
    }
    Ok(a.symbols()
        .iter()
        .filter(|s| symbols.contains(s))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn probability_bounds() {
        assert!(Probability::new(0.0).is_ok());
        assert!(Probability::new(1.0).is_ok());
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::clamped(1.5).unwrap().value(), 1.0);
        assert_eq!(Probability::clamped(-3.0).unwrap().value(), 0.0);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(Probability::HALF), 1.0);
        assert_eq!(binary_entropy(Probability::ZERO), 0.0);
        assert_eq!(binary_entropy(Probability::ONE), 0.0);
        // h(1/4) = 2 - (3/4) log2 3
        let expected = 2.0 - 0.75 * 3.0f64.log2();
        let got = binary_entropy(Probability::new(0.25).unwrap());
        assert!(close(got, expected, 1e-15));
        assert!(close(got, 0.811278, 1e-6));
    }

    #[test]
    fn bounded_binary_entropy_examples() {
        assert_eq!(bounded_binary_entropy(0.6).unwrap(), 1.0);
        assert_eq!(bounded_binary_entropy(0.0).unwrap(), 0.0);
        assert!(close(
            bounded_binary_entropy(0.24).unwrap(),
            0.795040,
            1e-6
        ));
        // arguments past 1 saturate instead of erroring
        assert_eq!(bounded_binary_entropy(1.7).unwrap(), 1.0);
        assert!(bounded_binary_entropy(-0.01).is_err());
        assert!(bounded_binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn relative_weight_examples() {
        let w = |s: &[u8]| relative_hamming_weight(&Word::binary(s).unwrap()).unwrap();
        assert_eq!(w(&[0, 1, 1, 0]).value(), 0.5);
        assert_eq!(w(&[0, 0, 0, 0]).value(), 0.0);
        assert_eq!(w(&[1, 0, 1, 1, 0]).value(), 0.6);
        assert_eq!(Word::binary(&[]), Err(MathError::EmptyWord));
        let quat = Word::quaternary(&[0, 1, 2]).unwrap();
        assert!(relative_hamming_weight(&quat).is_err());
    }

    #[test]
    fn hamming_distance_examples() {
        let q = |s: &[u8]| Word::quaternary(s).unwrap();
        assert_eq!(hamming_distance(&q(&[0, 1, 2, 3]), &q(&[0, 1, 2, 3])).unwrap(), 0);
        let b = |s: &[u8]| Word::binary(s).unwrap();
        assert_eq!(hamming_distance(&b(&[0, 0]), &b(&[1, 1])).unwrap(), 2);
        assert_eq!(hamming_distance(&q(&[0, 1, 3, 2]), &q(&[0, 3, 1, 2])).unwrap(), 2);
        assert!(hamming_distance(&b(&[0, 0]), &b(&[0, 0, 0])).is_err());
        assert!(hamming_distance(&b(&[0, 0]), &q(&[0, 0])).is_err());
    }

    #[test]
    fn count_symbols_examples() {
        let q = |s: &[u8]| Word::quaternary(s).unwrap();
        assert_eq!(count_symbols(&q(&[0, 1, 2, 3]), &[1, 3]).unwrap(), 2);
        assert_eq!(count_symbols(&q(&[0, 0, 0, 0]), &[1, 3]).unwrap(), 0);
        assert_eq!(count_symbols(&q(&[1, 1, 3, 3, 1, 0]), &[1, 3]).unwrap(), 5);
        assert!(count_symbols(&Word::binary(&[0, 1]).unwrap(), &[3]).is_err());
    }

    #[test]
    fn subset_index_validation() {
        assert!(SubsetIndex::new(vec![1, 3, 5], 5).is_ok());
        assert!(SubsetIndex::new(vec![], 5).is_ok());
        assert_eq!(
            SubsetIndex::new(vec![0, 1], 5),
            Err(MathError::SubsetRange { index: 0, parent: 5 })
        );
        assert!(SubsetIndex::new(vec![1, 6], 5).is_err());
        assert_eq!(SubsetIndex::new(vec![2, 2], 5), Err(MathError::SubsetOrder));
        assert_eq!(SubsetIndex::new(vec![3, 1], 5), Err(MathError::SubsetOrder));

        let t = SubsetIndex::new(vec![1, 4], 5).unwrap();
        assert_eq!(t.complement().indices(), &[2, 3, 5]);
        assert_eq!(t.zero_based().collect::<Vec<_>>(), vec![0, 3]);
    }

    proptest! {
        // h(p) = h(1 - p)
        #[test]
        fn entropy_symmetric(p in 0.0f64..=1.0) {
            let a = binary_entropy(Probability::new(p).unwrap());
            let b = binary_entropy(Probability::new(1.0 - p).unwrap());
            prop_assert!(close(a, b, 1e-12));
        }

        // h((p+q)/2) >= (h(p)+h(q))/2
        #[test]
        fn entropy_concave(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
            let mid = binary_entropy(Probability::new(0.5 * (p + q)).unwrap());
            let avg = 0.5 * binary_entropy(Probability::new(p).unwrap())
                + 0.5 * binary_entropy(Probability::new(q).unwrap());
            prop_assert!(mid >= avg - 1e-12);
        }

        // h-hat agrees with h below 1/2, is 1 at or above, and is nondecreasing
        #[test]
        fn bounded_entropy_shape(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            let hx = bounded_binary_entropy(x).unwrap();
            if x < 0.5 {
                prop_assert!(close(hx, binary_entropy(Probability::new(x).unwrap()), 1e-15));
            } else {
                prop_assert_eq!(hx, 1.0);
            }
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(
                bounded_binary_entropy(lo).unwrap() <= bounded_binary_entropy(hi).unwrap() + 1e-15
            );
        }
    }

    #[test]
    fn entropy_symmetry_dense_grid() {
        for k in 0..=10_000 {
            let p = k as f64 / 10_000.0;
            let a = binary_entropy(Probability::new(p).unwrap());
            let b = binary_entropy(Probability::new(1.0 - p).unwrap());
            assert!(close(a, b, 1e-12), "asymmetry at p = {p}: {a} vs {b}");
        }
    }
}
