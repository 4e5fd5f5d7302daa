use std::f64::consts::TAU;

use super::{
    check_size, push_controlled, CountModel, ModelKind, TransformCircuit, MAX_TRANSFORM_QUBITS,
};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::{phase_matrix, Control, Gate};

/// Emits `QFT_{2^k}` on `qubits` (least significant first), every gate
/// conditioned on `controls`. Returns the output layout: logical output bit
/// `j` is held by physical qubit `out[j]`.
pub(crate) fn emit_qft(
    c: &mut Circuit,
    qubits: &[usize],
    controls: &[Control],
) -> Result<Vec<usize>> {
    let (&low, rest) = qubits.split_first().expect("non-empty register");
    let mut out = if rest.is_empty() {
        Vec::new()
    } else {
        emit_qft(c, rest, controls)?
    };
    let big_n = 1u64 << qubits.len();
    for (j, &yq) in out.iter().enumerate() {
        let theta = TAU * (1u64 << j) as f64 / big_n as f64;
        let gate = Gate::controlled(vec![Control::one(low)], yq, phase_matrix(theta), "P_j")?;
        push_controlled(c, gate, controls)?;
    }
    push_controlled(c, Gate::h(low), controls)?;
    out.push(low);
    Ok(out)
}

/// `QFT_N` on `n` qubits, `|a⟩ ↦ N^{-1/2} Σ_y e^{2πi ay/N} |y⟩`.
pub fn build_qft(n: usize) -> Result<TransformCircuit> {
    check_size(n, 1, MAX_TRANSFORM_QUBITS)?;
    let mut c = Circuit::new(n);
    let qubits: Vec<usize> = (0..n).collect();
    let layout = emit_qft(&mut c, &qubits, &[])?;
    c.restore_layout(&layout)?;
    Ok(TransformCircuit {
        circuit: c,
        n_data_qubits: n,
        n_ancilla: 0,
        count_model: CountModel::new(ModelKind::Qft),
        subcircuit_calls: 0,
    })
}

/// `QFT_N†`.
pub fn build_inverse_qft(n: usize) -> Result<TransformCircuit> {
    let mut t = build_qft(n)?;
    t.circuit = t.circuit.inverse();
    Ok(t)
}
