//! Projective measurement patterns with partial tracing.
//!
//! A pattern assigns each qubit a role: measure in `Z`, measure in
//! `X_alpha`, take part in the paired two-outcome parity POVM
//! `X_0 = |x0 x0><x0 x0| + |x1 x1><x1 x1|` / `X_1` = its complement on the
//! pair, be traced out, or be kept. Measured and traced qubits are
//! consumed; each outcome carries the exact probability and the
//! conditional density matrix on the kept qubits.

use num_complex::Complex64;

use super::state::{DensityMatrix, StateVector};
use super::QuantumError;
use crate::uncertainty::BiasParameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRole {
    MeasureZ,
    /// Measure in the biased `X_alpha` basis.
    MeasureX,
    /// Jointly measure this qubit and its partner in the parity POVM.
    PovmPair(usize),
    TraceOut,
    Keep,
}

/// A validated per-qubit measurement assignment.
#[derive(Debug, Clone)]
pub struct MeasurePattern {
    roles: Vec<QubitRole>,
    bias: BiasParameter,
}

/// One measurement element in qubit order.
#[derive(Debug, Clone, Copy)]
enum Element {
    Z(usize),
    X(usize),
    Povm(usize, usize),
}

impl MeasurePattern {
    pub fn new(roles: Vec<QubitRole>, bias: BiasParameter) -> Result<Self, QuantumError> {
        for (q, &role) in roles.iter().enumerate() {
            if let QubitRole::PovmPair(partner) = role {
                if partner == q || partner >= roles.len() {
                    return Err(QuantumError::BadPattern(format!(
                        "qubit {q} paired with invalid partner {partner}"
                    )));
                }
                if roles[partner] != QubitRole::PovmPair(q) {
                    return Err(QuantumError::BadPattern(format!(
                        "POVM pairing of qubits {q} and {partner} is not mutual"
                    )));
                }
            }
        }
        Ok(Self { roles, bias })
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    pub fn bias(&self) -> BiasParameter {
        self.bias
    }

    fn elements(&self) -> Vec<Element> {
        let mut elements = Vec::new();
        for (q, &role) in self.roles.iter().enumerate() {
            match role {
                QubitRole::MeasureZ => elements.push(Element::Z(q)),
                QubitRole::MeasureX => elements.push(Element::X(q)),
                QubitRole::PovmPair(partner) if q < partner => {
                    elements.push(Element::Povm(q, partner))
                }
                _ => {}
            }
        }
        elements
    }

    fn keep_qubits(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, &r)| r == QubitRole::Keep)
            .map(|(q, _)| q)
            .collect()
    }
}

/// One joint outcome: a symbol per measurement element (in qubit order of
/// the element's first qubit), its probability, and the conditional state
/// on the kept qubits (absent for zero-probability branches).
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub label: Vec<u8>,
    pub probability: f64,
    pub conditional: Option<DensityMatrix>,
}

#[derive(Debug, Clone)]
pub struct MeasurementResult {
    pub outcomes: Vec<MeasurementOutcome>,
}

impl MeasurementResult {
    /// Probability of the outcome with the given label.
    pub fn probability_of(&self, label: &[u8]) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|o| o.label == label)
            .map(|o| o.probability)
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

fn projector_1q(v: &[Complex64; 2]) -> [[Complex64; 2]; 2] {
    let mut m = [[Complex64::ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = v[r] * v[c].conj();
        }
    }
    m
}

/// Rank-2 projector onto the span of two orthogonal product vectors.
fn projector_2q(u: &[Complex64; 4], v: &[Complex64; 4]) -> [[Complex64; 4]; 4] {
    let mut m = [[Complex64::ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] = u[r] * u[c].conj() + v[r] * v[c].conj();
        }
    }
    m
}

fn product_4(a: &[Complex64; 2], b: &[Complex64; 2]) -> [Complex64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

const PROB_CUTOFF: f64 = 1e-14;

/// Measure every element of the pattern jointly, returning the exact
/// outcome distribution and, per outcome, the conditional density matrix
/// on the kept qubits (a 1x1 matrix when nothing is kept).
pub fn measure_and_trace(
    state: &StateVector,
    pattern: &MeasurePattern,
) -> Result<MeasurementResult, QuantumError> {
    if pattern.roles.len() != state.qubits() {
        return Err(QuantumError::BadPattern(format!(
            "pattern covers {} qubits, state has {}",
            pattern.roles.len(),
            state.qubits()
        )));
    }
    let elements = pattern.elements();
    let keep = pattern.keep_qubits();

    let x = {
        let (a, b) = (pattern.bias.alpha(), pattern.bias.beta());
        [
            [Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
            [Complex64::new(b, 0.0), Complex64::new(-a, 0.0)],
        ]
    };
    let z = [
        [Complex64::ONE, Complex64::ZERO],
        [Complex64::ZERO, Complex64::ONE],
    ];
    // parity POVM elements on a pair: agree (x0x0, x1x1) and disagree
    let povm = [
        projector_2q(&product_4(&x[0], &x[0]), &product_4(&x[1], &x[1])),
        projector_2q(&product_4(&x[0], &x[1]), &product_4(&x[1], &x[0])),
    ];

    let mut outcomes = Vec::with_capacity(1 << elements.len());
    for combo in 0u32..(1 << elements.len()) {
        let mut projected = state.clone();
        let mut label = Vec::with_capacity(elements.len());
        for (slot, element) in elements.iter().enumerate() {
            let outcome = (combo >> slot & 1) as u8;
            label.push(outcome);
            match *element {
                Element::Z(q) => {
                    projected.apply_single_qubit_matrix(q, &projector_1q(&z[outcome as usize]))
                }
                Element::X(q) => {
                    projected.apply_single_qubit_matrix(q, &projector_1q(&x[outcome as usize]))
                }
                Element::Povm(q1, q2) => {
                    projected.apply_two_qubit_matrix(q1, q2, &povm[outcome as usize])
                }
            }
        }
        let probability = projected.norm_sq();
        let conditional = if probability > PROB_CUTOFF {
            let normalized = StateVector::normalized(
                projected.qubits(),
                projected.amplitudes().to_vec(),
            )?;
            Some(normalized.reduced_density(&keep)?)
        } else {
            None
        };
        outcomes.push(MeasurementOutcome {
            label,
            probability,
            conditional,
        });
    }
    Ok(MeasurementResult { outcomes })
}
