//! Min-entropy oracles with closed forms: the unconditional
//! `-log2 max p(a)` for a classical register, and the exact conditional
//! min entropy of a binary classical register given a quantum environment
//! via optimal (Helstrom) discrimination,
//! `p_guess = 1/2 + ||p0 rho0 - p1 rho1||_tr / 2`.

use super::state::{hermitian_trace_norm, DensityMatrix};
use super::QuantumError;

/// Unconditional min entropy `-log2 max_a p(a)` of a distribution.
pub fn min_entropy_classical(dist: &[f64]) -> Result<f64, QuantumError> {
    if dist.is_empty() || dist.iter().any(|&p| !(p >= 0.0)) {
        return Err(QuantumError::BadDistribution(f64::NAN));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(QuantumError::BadDistribution(sum));
    }
    let max = dist.iter().copied().fold(0.0f64, f64::max);
    Ok(-(max.log2()))
}

/// Exact conditional min entropy `-log2 p_guess` of a binary register
/// with conditional environment states `rho0`, `rho1` occurring with
/// probabilities `p0`, `p1`.
pub fn min_entropy_helstrom(
    p0: f64,
    rho0: &DensityMatrix,
    p1: f64,
    rho1: &DensityMatrix,
) -> Result<f64, QuantumError> {
    if !(p0 >= 0.0) || !(p1 >= 0.0) || (p0 + p1 - 1.0).abs() > 1e-9 {
        return Err(QuantumError::BadDistribution(p0 + p1));
    }
    if rho0.dim() != rho1.dim() {
        return Err(QuantumError::DimensionMismatch {
            a: rho0.dim(),
            b: rho1.dim(),
        });
    }
    rho0.validate()?;
    rho1.validate()?;
    let diff = rho0.matrix() * num_complex::Complex64::new(p0, 0.0)
        - rho1.matrix() * num_complex::Complex64::new(p1, 0.0);
    let p_guess = 0.5 * (1.0 + hermitian_trace_norm(&diff));
    Ok(-(p_guess.log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pure(v: &[Complex64]) -> DensityMatrix {
        let n = v.len();
        let mat = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        DensityMatrix::new(mat).unwrap()
    }

    #[test]
    fn classical_examples() {
        assert!((min_entropy_classical(&[0.25; 4]).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(min_entropy_classical(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((min_entropy_classical(&[0.5, 0.25, 0.25]).unwrap() - 1.0).abs() < 1e-12);
        assert!(min_entropy_classical(&[0.5, 0.4]).is_err());
        assert!(min_entropy_classical(&[]).is_err());
        assert!(min_entropy_classical(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn helstrom_indistinguishable_environments() {
        let rho = pure(&[c(1.0), c(0.0)]);
        let h = min_entropy_helstrom(0.5, &rho, 0.5, &rho).unwrap();
        assert!((h - 1.0).abs() < 1e-10);
        // identical environments reduce to the classical marginal
        let h = min_entropy_helstrom(0.7, &rho, 0.3, &rho).unwrap();
        let classical = min_entropy_classical(&[0.7, 0.3]).unwrap();
        assert!((h - classical).abs() < 1e-10);
    }

    #[test]
    fn helstrom_orthogonal_environments() {
        let rho0 = pure(&[c(1.0), c(0.0)]);
        let rho1 = pure(&[c(0.0), c(1.0)]);
        let h = min_entropy_helstrom(0.5, &rho0, 0.5, &rho1).unwrap();
        assert!(h.abs() < 1e-10);
    }

    #[test]
    fn helstrom_partial_overlap() {
        // pure states with |<u|v>|^2 = 1/2:
        // p_guess = 1/2 + sqrt(1 - 1/2)/2 = (2 + sqrt 2)/4
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rho0 = pure(&[c(1.0), c(0.0)]);
        let rho1 = pure(&[c(r), c(r)]);
        let h = min_entropy_helstrom(0.5, &rho0, 0.5, &rho1).unwrap();
        let expected = -((2.0 + 2f64.sqrt()) / 4.0).log2();
        assert!((h - expected).abs() < 1e-10);
        assert!((h - 0.2284).abs() < 1e-3);
    }

    #[test]
    fn helstrom_rejects_bad_inputs() {
        let rho = pure(&[c(1.0), c(0.0)]);
        let big = pure(&[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert!(min_entropy_helstrom(0.6, &rho, 0.6, &rho).is_err());
        assert!(min_entropy_helstrom(0.5, &rho, 0.5, &big).is_err());
    }
}
