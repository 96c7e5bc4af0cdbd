//! Dense state vectors and density matrices for few-qubit exact
//! computations.
//!
//! Qubit 0 is the most significant bit of a basis index, so a basis label
//! reads left to right: `|q0 q1 .. qk>`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::QuantumError;

/// Budget for pure-state simulation.
pub const MAX_QUBITS: usize = 24;
/// Budget for density matrices (dimension `2^12`).
pub const MAX_DENSITY_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-10;

/// A normalized pure state on `qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    qubits: usize,
}

impl StateVector {
    /// Wrap amplitudes that are already normalized (within `1e-10`).
    pub fn new(qubits: usize, amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        Self::check_shape(qubits, amps.len())?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm_sq));
        }
        Ok(Self { amps, qubits })
    }

    /// Normalize arbitrary amplitudes; rejects the zero vector.
    pub fn normalized(qubits: usize, amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        Self::check_shape(qubits, amps.len())?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < 1e-24 {
            return Err(QuantumError::ZeroNorm);
        }
        let scale = norm_sq.sqrt().recip();
        Ok(Self {
            amps: amps.into_iter().map(|a| a * scale).collect(),
            qubits,
        })
    }

    fn check_shape(qubits: usize, len: usize) -> Result<(), QuantumError> {
        if qubits > MAX_QUBITS {
            return Err(QuantumError::QubitBudget {
                requested: qubits,
                limit: MAX_QUBITS,
            });
        }
        if len != 1 << qubits {
            return Err(QuantumError::WrongLength {
                expected: 1 << qubits,
                got: len,
            });
        }
        Ok(())
    }

    /// The computational basis state `|index>`.
    pub fn basis_state(qubits: usize, index: usize) -> Result<Self, QuantumError> {
        if qubits > MAX_QUBITS {
            return Err(QuantumError::QubitBudget {
                requested: qubits,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(QuantumError::WrongLength {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { amps, qubits })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QuantumError> {
        if self.qubits != other.qubits {
            return Err(QuantumError::DimensionMismatch {
                a: self.dim(),
                b: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self (x) other`; `self`'s qubits stay most
    /// significant.
    pub fn kron(&self, other: &StateVector) -> Result<Self, QuantumError> {
        let qubits = self.qubits + other.qubits;
        if qubits > MAX_QUBITS {
            return Err(QuantumError::QubitBudget {
                requested: qubits,
                limit: MAX_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << qubits);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { amps, qubits })
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.qubits - 1 - qubit)
    }

    /// Apply a 2x2 matrix to one qubit (in place, no renormalization).
    pub(crate) fn apply_single_qubit_matrix(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = self.bit_mask(qubit);
        for idx in 0..self.amps.len() {
            if idx & mask == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | mask];
                self.amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Apply a 4x4 matrix to the ordered qubit pair `(q1, q2)`, indexed as
    /// `|b1 b2> -> 2 b1 + b2` (no renormalization).
    pub(crate) fn apply_two_qubit_matrix(
        &mut self,
        q1: usize,
        q2: usize,
        m: &[[Complex64; 4]; 4],
    ) {
        debug_assert_ne!(q1, q2);
        let m1 = self.bit_mask(q1);
        let m2 = self.bit_mask(q2);
        for idx in 0..self.amps.len() {
            if idx & m1 == 0 && idx & m2 == 0 {
                let ix = [idx, idx | m2, idx | m1, idx | m1 | m2];
                let a = ix.map(|i| self.amps[i]);
                for (row, &i) in ix.iter().enumerate() {
                    self.amps[i] = (0..4).map(|col| m[row][col] * a[col]).sum();
                }
            }
        }
    }

    /// Partial trace onto the `keep` qubits (sorted, distinct), from the
    /// pure state `|self><self|`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, QuantumError> {
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&q| q >= self.qubits) {
            return Err(QuantumError::BadPattern(
                "keep qubits must be sorted, distinct and in range".into(),
            ));
        }
        if keep.len() > MAX_DENSITY_QUBITS {
            return Err(QuantumError::QubitBudget {
                requested: keep.len(),
                limit: MAX_DENSITY_QUBITS,
            });
        }
        let kd = 1usize << keep.len();
        let rest: Vec<usize> = (0..self.qubits).filter(|q| !keep.contains(q)).collect();
        let rd = 1usize << rest.len();

        // regroup amplitudes as arr[rest_config][keep_config]
        let mut arr = vec![Complex64::ZERO; self.amps.len()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            let mut kcfg = 0usize;
            for &q in keep {
                kcfg = (kcfg << 1) | usize::from(idx & self.bit_mask(q) != 0);
            }
            let mut rcfg = 0usize;
            for &q in &rest {
                rcfg = (rcfg << 1) | usize::from(idx & self.bit_mask(q) != 0);
            }
            arr[rcfg * kd + kcfg] = amp;
        }

        let mut mat = DMatrix::<Complex64>::zeros(kd, kd);
        for r in 0..rd {
            let row = &arr[r * kd..(r + 1) * kd];
            for a in 0..kd {
                if row[a] == Complex64::ZERO {
                    continue;
                }
                for b in 0..kd {
                    mat[(a, b)] += row[a] * row[b].conj();
                }
            }
        }
        Ok(DensityMatrix { mat })
    }
}

/// A density matrix: Hermitian, unit-trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wrap and validate an externally supplied matrix.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let dm = Self { mat };
        dm.validate()?;
        Ok(dm)
    }

    /// Check the Hermiticity (1e-10), unit-trace (1e-10) and positivity
    /// (eigenvalues above -1e-10) invariants.
    pub fn validate(&self) -> Result<(), QuantumError> {
        let n = self.mat.nrows();
        if n != self.mat.ncols() || n == 0 || n > 1 << MAX_DENSITY_QUBITS {
            return Err(QuantumError::WrongLength {
                expected: 1 << MAX_DENSITY_QUBITS,
                got: n,
            });
        }
        let mut herm_dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm_dev = herm_dev.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        if herm_dev > 1e-10 {
            return Err(QuantumError::NotHermitian(herm_dev));
        }
        let trace: Complex64 = self.mat.diagonal().iter().sum();
        if (trace - Complex64::ONE).norm() > 1e-10 {
            return Err(QuantumError::BadTrace(trace.re));
        }
        let min_eig = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(QuantumError::NotPositive(min_eig));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().sum::<Complex64>().re
    }
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub(crate) fn hermitian_trace_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum()
}
