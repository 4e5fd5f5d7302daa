//! Gate sequences, their tallies, and the induced-unitary oracle hooks.

use std::collections::BTreeMap;
use std::ops::Add;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::statevec::StateVector;

/// Elementary-gate counts per tally family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTally {
    pub counts: BTreeMap<String, u64>,
}

impl GateTally {
    pub fn record(&mut self, gate: &Gate) {
        *self.counts.entry(gate.family().to_string()).or_insert(0) += gate.cost();
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, family: &str) -> u64 {
        self.counts.get(family).copied().unwrap_or(0)
    }
}

impl Add for GateTally {
    type Output = GateTally;

    fn add(mut self, rhs: GateTally) -> GateTally {
        for (family, n) in rhs.counts {
            *self.counts.entry(family).or_insert(0) += n;
        }
        self
    }
}

/// Ordered gate list followed by a zero-cost qubit relabeling:
/// the content of qubit `p` ends up on qubit `final_relabel[p]`.
#[derive(Clone, Debug)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    final_relabel: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            final_relabel: (0..n_qubits).collect(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn final_relabel(&self) -> &[usize] {
        &self.final_relabel
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Replaces the final relabeling; `relabel` must be a permutation of the
    /// qubit indices.
    pub fn set_final_relabel(&mut self, relabel: Vec<usize>) -> Result<()> {
        if relabel.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: relabel.len(),
            });
        }
        let mut seen = vec![false; self.n_qubits];
        for &q in &relabel {
            if q >= self.n_qubits || seen[q] {
                return Err(Error::NotAPermutation);
            }
            seen[q] = true;
        }
        self.final_relabel = relabel;
        Ok(())
    }

    /// Relabeling that moves logical bit `j`, currently held by physical
    /// qubit `layout[j]`, back onto qubit `j`. Qubits not named in `layout`
    /// must already sit at their own index.
    pub fn restore_layout(&mut self, layout: &[usize]) -> Result<()> {
        let mut relabel: Vec<usize> = (0..self.n_qubits).collect();
        for (j, &p) in layout.iter().enumerate() {
            relabel[p] = j;
        }
        self.set_final_relabel(relabel)
    }

    pub fn tally(&self) -> GateTally {
        let mut t = GateTally::default();
        for g in &self.gates {
            t.record(g);
        }
        t
    }

    /// Reversed, inverted gates. The relabeling is conjugated through so the
    /// result still ends with a single relabel.
    pub fn inverse(&self) -> Circuit {
        let pi = &self.final_relabel;
        let mut inv = vec![0; self.n_qubits];
        for (p, &q) in pi.iter().enumerate() {
            inv[q] = p;
        }
        Circuit {
            n_qubits: self.n_qubits,
            gates: self
                .gates
                .iter()
                .rev()
                .map(|g| g.inverse().remap(|q| pi[q]))
                .collect(),
            final_relabel: inv,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Circuit) -> Result<Circuit> {
        if next.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: next.n_qubits,
            });
        }
        // Gates of `next` act on logical qubits; after `self` those live at
        // the pre-relabel positions, i.e. π⁻¹(q).
        let pi = &self.final_relabel;
        let mut inv = vec![0; self.n_qubits];
        for (p, &q) in pi.iter().enumerate() {
            inv[q] = p;
        }
        let mut gates = self.gates.clone();
        gates.extend(next.gates.iter().map(|g| g.remap(|q| inv[q])));
        let final_relabel = (0..self.n_qubits)
            .map(|p| next.final_relabel[pi[p]])
            .collect();
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
            final_relabel,
        })
    }

    /// Places this circuit inside a `total`-qubit register, sending qubit
    /// `i` to `placement[i]`.
    pub fn embed(&self, total: usize, placement: &[usize]) -> Result<Circuit> {
        if placement.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: placement.len(),
            });
        }
        let mut out = Circuit::new(total);
        for g in &self.gates {
            out.push(g.remap(|q| placement[q]))?;
        }
        let mut relabel: Vec<usize> = (0..total).collect();
        for (i, &p) in placement.iter().enumerate() {
            relabel[p] = placement[self.final_relabel[i]];
        }
        out.set_final_relabel(relabel)?;
        Ok(out)
    }

    /// Applies the circuit in place.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        state.relabel(&self.final_relabel);
        Ok(())
    }

    /// Columns `U|a⟩` for every data basis state `a < 2^n_data`, with all
    /// qubits above the data register starting in `|0⟩`. Returns the data
    /// block and the largest norm left outside it (ancilla leakage).
    pub fn induced_unitary(&self, n_data: usize) -> Result<(DMatrix<Complex64>, f64)> {
        let dim = 1usize << n_data;
        let mut m = DMatrix::zeros(dim, dim);
        let mut leak: f64 = 0.0;
        for a in 0..dim {
            let mut s = StateVector::basis(self.n_qubits, a);
            self.apply(&mut s)?;
            let (data, residual) = s.unpad(self.n_qubits - n_data);
            leak = leak.max(residual);
            for (r, amp) in data.amplitudes().iter().enumerate() {
                m[(r, a)] = *amp;
            }
        }
        Ok((m, leak))
    }
}

/// Runs `circuit` on a copy of `state` and reports the gates it used.
pub fn run_circuit(state: &StateVector, circuit: &Circuit) -> Result<(StateVector, GateTally)> {
    let mut out = state.clone();
    circuit.apply(&mut out)?;
    Ok((out, circuit.tally()))
}
