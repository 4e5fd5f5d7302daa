use super::qht::emit_qht;
use super::{check_size, negation_gate, CountModel, ModelKind, TransformCircuit};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::statevec::StateVector;

/// Largest sine-transform size: the embedded Hartley runs on `n + 1` qubits.
pub const MAX_SINE_QUBITS: usize = 11;

/// `QS^I_{N−1}` as `T_N† · QHT_{2N} · T_N` with `T_N = U_N (H ⊗ 1)(X ⊗ 1)`.
///
/// Layout: data on qubits `0..n`, the `T_N` qubit at `n` (the high bit of
/// the `2N` register), the Hartley ancilla at `n + 1`. Valid inputs are
/// `|0⟩|a⟩` with `1 ≤ a ≤ N − 1`.
pub fn build_qst1(n: usize) -> Result<TransformCircuit> {
    check_size(n, 1, MAX_SINE_QUBITS)?;
    let high = n;
    let anc = n + 1;
    let cost = n as u64;
    let mut c = Circuit::new(n + 2);
    let data: Vec<usize> = (0..n).collect();

    c.push(Gate::x(high))?;
    c.push(Gate::h(high))?;
    c.push(negation_gate(&data, high, cost)?)?;

    let wide: Vec<usize> = (0..=n).collect();
    let layout = emit_qht(&mut c, &wide, anc)?;

    let (out_data, out_high) = (&layout[..n], layout[n]);
    c.push(negation_gate(out_data, out_high, cost)?)?;
    c.push(Gate::h(out_high))?;
    c.push(Gate::x(out_high))?;

    c.restore_layout(&layout)?;
    Ok(TransformCircuit {
        circuit: c,
        n_data_qubits: n,
        n_ancilla: 2,
        count_model: CountModel::new(ModelKind::RecursiveQht),
        subcircuit_calls: 1,
    })
}

/// `QS^I_{N−1}|a⟩` on the data register, computed by running the circuit on
/// `|0⟩|a⟩`. The transform is indexed by `1..N`, so `a = 0` is rejected.
pub fn qst1_apply(t: &TransformCircuit, a: usize) -> Result<StateVector> {
    let big_n = 1usize << t.n_data_qubits;
    if a == 0 {
        return Err(Error::SineInputZero(a));
    }
    if a >= big_n {
        return Err(Error::OutOfRange {
            what: "a",
            value: a,
            min: 1,
            max: big_n - 1,
        });
    }
    let mut s = StateVector::basis(t.n_qubits(), a);
    t.circuit.apply(&mut s)?;
    let (data, leak) = s.unpad(t.n_ancilla);
    if leak > crate::EPS_STATE {
        return Err(Error::ImpossibleBranch(leak));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{dst_dct_matrix, TransformLabel};
    use crate::statevec::StateVector;
    use crate::transforms::build_qht_recursive;

    fn run(n: usize, a: usize) -> StateVector {
        let t = build_qst1(n).unwrap();
        let mut s = StateVector::basis(n + 2, a);
        t.circuit.apply(&mut s).unwrap();
        s
    }

    #[test]
    fn four_point_column_two() {
        let s = run(2, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [0.0, h, 0.0, -h];
        for (i, e) in expected.iter().enumerate() {
            assert!((s.amplitudes()[i].re - e).abs() < 1e-12, "{i}");
        }
        assert!(s.amplitudes()[4..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn matches_sine_matrix_on_valid_inputs() {
        for n in 1..=6 {
            let big_n = 1usize << n;
            let oracle = dst_dct_matrix(TransformLabel::SineI, big_n).unwrap().matrix;
            for a in 1..big_n {
                let s = run(n, a);
                for y in 0..s.dim() {
                    let expected = if (1..big_n).contains(&y) {
                        oracle[(y - 1, a - 1)].re
                    } else {
                        0.0
                    };
                    assert!((s.amplitudes()[y].re - expected).abs() <= 1e-9);
                    assert!(s.amplitudes()[y].im.abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn tally_is_hartley_plus_linear() {
        for n in 1..=10 {
            let sine = build_qst1(n).unwrap().tally().total();
            let qht = build_qht_recursive(n + 1).unwrap().tally().total();
            assert_eq!(sine, qht + 2 * n as u64 + 4);
        }
    }

    #[test]
    fn two_point_transform_is_trivial() {
        let s = qst1_apply(&build_qst1(1).unwrap(), 1).unwrap();
        assert!(s.max_diff(&StateVector::basis(1, 1)) < 1e-12);
        // a = 1 column at N = 4 is (1/2, 1/√2, 1/2).
        let s = qst1_apply(&build_qst1(2).unwrap(), 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (i, e) in [0.0, 0.5, h, 0.5].iter().enumerate() {
            assert!((s.amplitudes()[i].re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_input_rejected() {
        let t = build_qst1(3).unwrap();
        assert!(matches!(qst1_apply(&t, 0), Err(Error::SineInputZero(0))));
        assert!(qst1_apply(&t, 8).is_err());
    }

    #[test]
    fn size_out_of_range() {
        assert!(build_qst1(0).is_err());
        assert!(build_qst1(12).is_err());
    }
}
