//! The four basis families: computational `Z`, the biased single-qubit
//! `X_alpha` with `|x0> = alpha|0> + beta|1>`, `|x1> = beta|0> - alpha|1>`
//! (`alpha = sqrt(1/2 + b)`), the two-qubit Bell basis, and the
//! `X_alpha`-Bell basis built from `X_alpha` product states. At `b = 0`
//! the `X_alpha`-Bell basis coincides with the Bell basis up to phase.

use num_complex::Complex64;

use super::state::StateVector;
use super::QuantumError;
use crate::math::Word;
use crate::uncertainty::BiasParameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Z,
    XAlpha,
    Bell,
    XAlphaBell,
}

/// An orthonormal basis family (1 or 2 qubits).
#[derive(Debug, Clone)]
pub struct BasisFamily {
    kind: BasisKind,
    bias: BiasParameter,
    vectors: Vec<StateVector>,
}

impl BasisFamily {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn bias(&self) -> BiasParameter {
        self.bias
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn qubits(&self) -> usize {
        self.vectors[0].qubits()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let g = a.inner(b).expect("same dimension");
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                dev = dev.max((g - expected).norm());
            }
        }
        dev
    }
}

fn real_state(qubits: usize, amps: &[f64]) -> StateVector {
    let amps = amps.iter().map(|&re| Complex64::new(re, 0.0)).collect();
    StateVector::new(qubits, amps).expect("hand-built basis vector is normalized")
}

fn x_alpha_vectors(bias: BiasParameter) -> [StateVector; 2] {
    let (a, b) = (bias.alpha(), bias.beta());
    [real_state(1, &[a, b]), real_state(1, &[b, -a])]
}

/// Build one of the basis families; `bias` is ignored by the `Z` and
/// `Bell` kinds.
pub fn build_basis(kind: BasisKind, bias: BiasParameter) -> Result<BasisFamily, QuantumError> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let vectors = match kind {
        BasisKind::Z => vec![
            StateVector::basis_state(1, 0)?,
            StateVector::basis_state(1, 1)?,
        ],
        BasisKind::XAlpha => x_alpha_vectors(bias).to_vec(),
        BasisKind::Bell => vec![
            real_state(2, &[r, 0.0, 0.0, r]),
            real_state(2, &[r, 0.0, 0.0, -r]),
            real_state(2, &[0.0, r, r, 0.0]),
            real_state(2, &[0.0, r, -r, 0.0]),
        ],
        BasisKind::XAlphaBell => {
            let [x0, x1] = x_alpha_vectors(bias);
            let x00 = x0.kron(&x0)?;
            let x01 = x0.kron(&x1)?;
            let x10 = x1.kron(&x0)?;
            let x11 = x1.kron(&x1)?;
            let combine = |u: &StateVector, v: &StateVector, sign: f64| {
                let amps = u
                    .amplitudes()
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| (a + sign * b) * r)
                    .collect();
                StateVector::new(2, amps).expect("equal-weight combination is normalized")
            };
            vec![
                combine(&x00, &x11, 1.0),
                combine(&x01, &x10, 1.0),
                combine(&x00, &x11, -1.0),
                combine(&x01, &x10, -1.0),
            ]
        }
    };
    Ok(BasisFamily {
        kind,
        bias,
        vectors,
    })
}

/// The 4x4 matrix of squared overlaps `|<phi_j^X | phi_i>|^2`, rows
/// indexed by the Bell state `i`, columns by the `X_alpha`-Bell state `j`.
///
/// Closed form: diagonal `(1, q, q, 1)`, anti-diagonal block entries
/// `(1,2)` and `(2,1)` equal to `p = 4 b^2`, everything else 0, with
/// `q = 1 - p`.
pub fn overlap_matrix(bias: BiasParameter) -> Result<[[f64; 4]; 4], QuantumError> {
    let bell = build_basis(BasisKind::Bell, bias)?;
    let xbell = build_basis(BasisKind::XAlphaBell, bias)?;
    let mut m = [[0.0f64; 4]; 4];
    for (i, phi) in bell.vectors().iter().enumerate() {
        for (j, phi_x) in xbell.vectors().iter().enumerate() {
            m[i][j] = phi_x.inner(phi)?.norm_sqr();
        }
    }
    Ok(m)
}

/// `|phi_w> = phi_{w_1} (x) .. (x) phi_{w_k}` for a quaternary word `w`:
/// one Bell pair per symbol, `2 |w|` qubits in total.
pub fn bell_word_state(word: &Word) -> Result<StateVector, QuantumError> {
    if word.alphabet() != 4 {
        return Err(crate::math::MathError::AlphabetExpected {
            expected: 4,
            got: word.alphabet(),
        }
        .into());
    }
    let bell = build_basis(BasisKind::Bell, BiasParameter::ZERO)?;
    let mut state = StateVector::basis_state(0, 0)?;
    for &s in word.symbols() {
        state = state.kron(&bell.vectors()[s as usize])?;
    }
    Ok(state)
}
