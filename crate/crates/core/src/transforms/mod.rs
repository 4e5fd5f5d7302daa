//! Circuit builders for the quantum Fourier, Hartley and type-I sine
//! transforms over `Z_N`, `N = 2^n`.
//!
//! Builders emit gates against a logical-to-physical qubit map instead of
//! inserting swaps; each finished circuit ends with one zero-cost relabel
//! that puts every output bit back on its own index.

mod cost;
mod qft;
mod qht;
mod qst;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use cost::{analytic_count_model, fit_quadratic, CountModel, ModelKind, QuadraticFit};
pub use qft::{build_inverse_qft, build_qft};
pub use qht::{build_qht_recursive, build_qht_via_qft};
pub use qst::{build_qst1, qst1_apply, MAX_SINE_QUBITS};

use crate::circuit::{Circuit, GateTally};
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};

/// Largest transform size the builders accept.
pub const MAX_TRANSFORM_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct TransformCircuit {
    pub circuit: Circuit,
    pub n_data_qubits: usize,
    pub n_ancilla: usize,
    pub count_model: CountModel,
    /// Number of whole transform sub-circuits the construction invokes
    /// (QFTs for the Fourier-based Hartley, Hartleys for the sine).
    pub subcircuit_calls: usize,
}

impl TransformCircuit {
    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    pub fn tally(&self) -> GateTally {
        self.circuit.tally()
    }

    /// Action on the data register with ancillas in `|0⟩`, plus the largest
    /// ancilla leakage over all basis inputs.
    pub fn induced_unitary(&self) -> Result<(DMatrix<Complex64>, f64)> {
        self.circuit.induced_unitary(self.n_data_qubits)
    }

    /// The circuit placed on `placement` (data qubits first, then ancillas)
    /// inside a `total`-qubit register.
    pub fn embed(&self, total: usize, placement: &[usize]) -> Result<Circuit> {
        self.circuit.embed(total, placement)
    }
}

fn check_size(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min,
            max,
        });
    }
    Ok(())
}

fn push_controlled(c: &mut Circuit, gate: Gate, controls: &[Control]) -> Result<()> {
    c.push(gate.controlled_by(controls)?)
}

/// `|c⟩|y⟩ ↦ |c⟩|(2^m − y) mod 2^m⟩` when `c = 1`, on `register` (`m` bits,
/// least significant first) controlled by `control`.
fn negation_gate(register: &[usize], control: usize, cost: u64) -> Result<Gate> {
    let m = register.len();
    let size = 1usize << m;
    let map = (0..2 * size)
        .map(|v| {
            if v < size {
                v
            } else {
                size + (size - (v - size)) % size
            }
        })
        .collect();
    let qubits = register.iter().copied().chain([control]).collect();
    Ok(Gate::permutation(qubits, map, "NEG")?.with_cost(cost))
}
