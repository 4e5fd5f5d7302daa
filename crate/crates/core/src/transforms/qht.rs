use std::f64::consts::TAU;

use num_complex::Complex64;

use super::qft::emit_qft;
use super::{
    check_size, negation_gate, CountModel, ModelKind, TransformCircuit, MAX_TRANSFORM_QUBITS,
};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::{rotation_matrix, Control, Gate};

/// Emits `QHT_{2^k}` on `qubits` using the shared ancilla `anc`, which must
/// start and ends in `|0⟩`. Returns the output layout.
pub(crate) fn emit_qht(c: &mut Circuit, qubits: &[usize], anc: usize) -> Result<Vec<usize>> {
    let (&low, rest) = qubits.split_first().expect("non-empty register");
    if rest.is_empty() {
        c.push(Gate::h(low))?;
        return Ok(vec![low]);
    }
    let n = qubits.len();
    let cost = n as u64;
    let big_n = 1u64 << n;
    let y = emit_qht(c, rest, anc)?;

    c.push(Gate::h(anc))?;
    c.push(negation_gate(&y, anc, cost)?)?;
    // Rotation of the ancilla by 2π·b·y/N, one factor per bit of y.
    for (j, &yq) in y.iter().enumerate() {
        let theta = TAU * (1u64 << j) as f64 / big_n as f64;
        c.push(Gate::controlled(
            vec![Control::one(low), Control::one(yq)],
            anc,
            rotation_matrix(theta),
            "R_j",
        )?)?;
    }
    c.push(negation_gate(&y, anc, cost)?)?;

    // Phase (-1)^b on the |1⟩|0⟩ term left by the negation.
    let controls = std::iter::once(Control::one(anc))
        .chain(y.iter().map(|&q| Control::zero(q)))
        .collect();
    c.push(Gate::h(low))?;
    c.push(Gate::mcx(controls, low)?.with_cost(cost))?;
    c.push(Gate::h(low))?;

    c.push(Gate::h(anc))?;
    c.push(Gate::cnot(low, anc)?)?;
    c.push(Gate::h(low))?;

    let mut out = y;
    out.push(low);
    Ok(out)
}

/// Recursive `QHT_N` on `n` data qubits plus one ancilla (qubit `n`).
pub fn build_qht_recursive(n: usize) -> Result<TransformCircuit> {
    check_size(n, 1, MAX_TRANSFORM_QUBITS)?;
    let mut c = Circuit::new(n + 1);
    let qubits: Vec<usize> = (0..n).collect();
    let layout = emit_qht(&mut c, &qubits, n)?;
    c.restore_layout(&layout)?;
    Ok(TransformCircuit {
        circuit: c,
        n_data_qubits: n,
        n_ancilla: 1,
        count_model: CountModel::new(ModelKind::RecursiveQht),
        subcircuit_calls: n - 1,
    })
}

/// `½[[1−i, 1+i], [1+i, 1−i]]`.
fn mixing_matrix() -> [[Complex64; 2]; 2] {
    let a = Complex64::new(0.5, -0.5);
    let b = Complex64::new(0.5, 0.5);
    [[a, b], [b, a]]
}

/// `QHT_N = ((1−i)/2) QFT_N + ((1+i)/2) QFT_N†` realised with one control
/// ancilla (qubit `n`) and five QFT invocations.
pub fn build_qht_via_qft(n: usize) -> Result<TransformCircuit> {
    check_size(n, 1, MAX_TRANSFORM_QUBITS)?;
    let anc = n;
    let on = [Control::one(anc)];
    let mut c = Circuit::new(n + 1);
    let qubits: Vec<usize> = (0..n).collect();

    c.push(Gate::h(anc))?;
    let layout = emit_qft(&mut c, &qubits, &[])?;
    // A QFT reverses the bit layout, so two in a row leave it unchanged and
    // both ancilla branches stay aligned.
    let mid = emit_qft(&mut c, &layout, &on)?;
    let back = emit_qft(&mut c, &mid, &on)?;
    c.push(Gate::single(anc, mixing_matrix(), "R")?)?;
    let mid = emit_qft(&mut c, &back, &on)?;
    let back = emit_qft(&mut c, &mid, &on)?;
    debug_assert_eq!(back, layout);
    c.push(Gate::h(anc))?;

    c.restore_layout(&back)?;
    Ok(TransformCircuit {
        circuit: c,
        n_data_qubits: n,
        n_ancilla: 1,
        count_model: CountModel::new(ModelKind::QftBasedQht),
        subcircuit_calls: 5,
    })
}
