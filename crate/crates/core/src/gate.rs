//! Elementary gates and their state-vector kernels.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::EPS_UNITARY;

/// Row-major 2x2 block.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for dense multi-qubit blocks, which accumulate rounding from
/// their construction.
const EPS_DENSE_UNITARY: f64 = 1e-10;

/// A control condition on one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    /// Fire when the qubit is `|1⟩` (otherwise when it is `|0⟩`).
    pub on_one: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control {
            qubit,
            on_one: true,
        }
    }

    pub fn zero(qubit: usize) -> Self {
        Control {
            qubit,
            on_one: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum GateKind {
    Single {
        target: usize,
        matrix: Mat2,
    },
    Controlled {
        controls: Vec<Control>,
        target: usize,
        matrix: Mat2,
    },
    /// Basis permutation on a qubit subrange: the local value formed by
    /// `qubits` (entry 0 least significant) is sent to `map[value]`.
    Permutation {
        qubits: Vec<usize>,
        map: Vec<usize>,
    },
    /// Row-major unitary on `qubits`, applied when every control fires.
    Dense {
        qubits: Vec<usize>,
        controls: Vec<Control>,
        matrix: Vec<Complex64>,
    },
}

/// A gate together with its accounting: the family it is tallied under and
/// its weight in elementary gates.
#[derive(Clone, Debug)]
pub struct Gate {
    kind: GateKind,
    family: &'static str,
    cost: u64,
}

pub fn hadamard_matrix() -> Mat2 {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x_matrix() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// `[[cos θ, sin θ], [-sin θ, cos θ]]`.
pub fn rotation_matrix(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// `diag(1, e^{iθ})`.
pub fn phase_matrix(theta: f64) -> Mat2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]]
}

fn mat2_deviation(m: &Mat2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let s: Complex64 = m.iter().map(|row| row[i].conj() * row[j]).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

fn mat2_adjoint(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Max-norm deviation of `M†M` from the identity for a row-major `dim`x`dim` block.
pub fn dense_deviation(matrix: &[Complex64], dim: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut s = ZERO;
            for k in 0..dim {
                s += matrix[k * dim + i].conj() * matrix[k * dim + j];
            }
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

fn check_distinct(qubits: impl IntoIterator<Item = usize>) -> Result<()> {
    let mut seen = Vec::new();
    for q in qubits {
        if seen.contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
        seen.push(q);
    }
    Ok(())
}

fn check_bijection(map: &[usize]) -> Result<()> {
    let mut hit = vec![false; map.len()];
    for &v in map {
        if v >= map.len() || hit[v] {
            return Err(Error::NotAPermutation);
        }
        hit[v] = true;
    }
    Ok(())
}

fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, want), c| {
        let bit = 1usize << c.qubit;
        (mask | bit, if c.on_one { want | bit } else { want })
    })
}

fn scatter_table(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|v| {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| v >> j & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect()
}

impl Gate {
    fn new(kind: GateKind, family: &'static str) -> Self {
        Gate {
            kind,
            family,
            cost: 1,
        }
    }

    pub fn single(target: usize, matrix: Mat2, family: &'static str) -> Result<Self> {
        let dev = mat2_deviation(&matrix);
        if dev > EPS_UNITARY {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Gate::new(GateKind::Single { target, matrix }, family))
    }

    pub fn controlled(
        controls: Vec<Control>,
        target: usize,
        matrix: Mat2,
        family: &'static str,
    ) -> Result<Self> {
        let dev = mat2_deviation(&matrix);
        if dev > EPS_UNITARY {
            return Err(Error::NonUnitary(dev));
        }
        check_distinct(controls.iter().map(|c| c.qubit).chain([target]))?;
        if controls.is_empty() {
            return Ok(Gate::new(GateKind::Single { target, matrix }, family));
        }
        Ok(Gate::new(
            GateKind::Controlled {
                controls,
                target,
                matrix,
            },
            family,
        ))
    }

    pub fn permutation(qubits: Vec<usize>, map: Vec<usize>, family: &'static str) -> Result<Self> {
        check_distinct(qubits.iter().copied())?;
        if map.len() != 1 << qubits.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits.len(),
                found: map.len(),
            });
        }
        check_bijection(&map)?;
        Ok(Gate::new(GateKind::Permutation { qubits, map }, family))
    }

    pub fn dense(
        qubits: Vec<usize>,
        controls: Vec<Control>,
        matrix: Vec<Complex64>,
        family: &'static str,
    ) -> Result<Self> {
        check_distinct(
            qubits
                .iter()
                .copied()
                .chain(controls.iter().map(|c| c.qubit)),
        )?;
        let dim = 1 << qubits.len();
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        let dev = dense_deviation(&matrix, dim);
        if dev > EPS_DENSE_UNITARY {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Gate::new(
            GateKind::Dense {
                qubits,
                controls,
                matrix,
            },
            family,
        ))
    }

    pub fn h(q: usize) -> Self {
        Gate::new(
            GateKind::Single {
                target: q,
                matrix: hadamard_matrix(),
            },
            "H",
        )
    }

    pub fn x(q: usize) -> Self {
        Gate::new(
            GateKind::Single {
                target: q,
                matrix: pauli_x_matrix(),
            },
            "X",
        )
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Gate::controlled(
            vec![Control::one(control)],
            target,
            pauli_x_matrix(),
            "CNOT",
        )
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Result<Self> {
        Gate::controlled(controls, target, pauli_x_matrix(), "MCX")
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        Gate::permutation(vec![a, b], vec![0, 2, 1, 3], "SWAP")
    }

    /// Multiplies every amplitude by `e^{iθ}`; tallied as `PHASE`.
    pub fn global_phase(q: usize, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        Gate::new(
            GateKind::Single {
                target: q,
                matrix: [[p, ZERO], [ZERO, p]],
            },
            "PHASE",
        )
    }

    /// Sets the elementary-gate weight this gate is tallied with.
    pub fn with_cost(mut self, cost: u64) -> Self {
        self.cost = cost;
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn family(&self) -> &'static str {
        self.family
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    /// Every qubit the gate reads or writes.
    pub fn qubits(&self) -> Vec<usize> {
        match &self.kind {
            GateKind::Single { target, .. } => vec![*target],
            GateKind::Controlled {
                controls, target, ..
            } => controls.iter().map(|c| c.qubit).chain([*target]).collect(),
            GateKind::Permutation { qubits, .. } => qubits.clone(),
            GateKind::Dense {
                qubits, controls, ..
            } => qubits
                .iter()
                .copied()
                .chain(controls.iter().map(|c| c.qubit))
                .collect(),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        match self.qubits().into_iter().find(|&q| q >= n_qubits) {
            Some(qubit) => Err(Error::QubitOutOfRange { qubit, n_qubits }),
            None => Ok(()),
        }
    }

    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Single { target, matrix } => GateKind::Single {
                target: *target,
                matrix: mat2_adjoint(matrix),
            },
            GateKind::Controlled {
                controls,
                target,
                matrix,
            } => GateKind::Controlled {
                controls: controls.clone(),
                target: *target,
                matrix: mat2_adjoint(matrix),
            },
            GateKind::Permutation { qubits, map } => {
                let mut inv = vec![0; map.len()];
                for (i, &v) in map.iter().enumerate() {
                    inv[v] = i;
                }
                GateKind::Permutation {
                    qubits: qubits.clone(),
                    map: inv,
                }
            }
            GateKind::Dense {
                qubits,
                controls,
                matrix,
            } => {
                let dim = 1 << qubits.len();
                let mut adj = vec![ZERO; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        adj[c * dim + r] = matrix[r * dim + c].conj();
                    }
                }
                GateKind::Dense {
                    qubits: qubits.clone(),
                    controls: controls.clone(),
                    matrix: adj,
                }
            }
        };
        Gate {
            kind,
            family: self.family,
            cost: self.cost,
        }
    }

    /// Same gate acting on `f(q)` instead of each qubit `q`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        let remap_controls = |cs: &[Control]| {
            cs.iter()
                .map(|c| Control {
                    qubit: f(c.qubit),
                    ..*c
                })
                .collect()
        };
        let kind = match &self.kind {
            GateKind::Single { target, matrix } => GateKind::Single {
                target: f(*target),
                matrix: *matrix,
            },
            GateKind::Controlled {
                controls,
                target,
                matrix,
            } => GateKind::Controlled {
                controls: remap_controls(controls),
                target: f(*target),
                matrix: *matrix,
            },
            GateKind::Permutation { qubits, map } => GateKind::Permutation {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                map: map.clone(),
            },
            GateKind::Dense {
                qubits,
                controls,
                matrix,
            } => GateKind::Dense {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                controls: remap_controls(controls),
                matrix: matrix.clone(),
            },
        };
        Gate {
            kind,
            family: self.family,
            cost: self.cost,
        }
    }

    /// The gate conditioned on additional controls.
    pub fn controlled_by(&self, extra: &[Control]) -> Result<Gate> {
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let touched = self.qubits();
        if let Some(c) = extra.iter().find(|c| touched.contains(&c.qubit)) {
            return Err(Error::DuplicateQubit(c.qubit));
        }
        let kind = match &self.kind {
            GateKind::Single { target, matrix } => GateKind::Controlled {
                controls: extra.to_vec(),
                target: *target,
                matrix: *matrix,
            },
            GateKind::Controlled {
                controls,
                target,
                matrix,
            } => GateKind::Controlled {
                controls: controls.iter().chain(extra).copied().collect(),
                target: *target,
                matrix: *matrix,
            },
            GateKind::Dense {
                qubits,
                controls,
                matrix,
            } => GateKind::Dense {
                qubits: qubits.clone(),
                controls: controls.iter().chain(extra).copied().collect(),
                matrix: matrix.clone(),
            },
            GateKind::Permutation { qubits, map } => {
                // Controls become extra high bits of the local value; the map
                // only fires on the value where every control is satisfied.
                let k = qubits.len();
                let (_, want) = control_mask(
                    &extra
                        .iter()
                        .enumerate()
                        .map(|(j, c)| Control {
                            qubit: j,
                            on_one: c.on_one,
                        })
                        .collect::<Vec<_>>(),
                );
                let low = (1usize << k) - 1;
                let full: Vec<usize> = (0..1usize << (k + extra.len()))
                    .map(|v| {
                        if v >> k == want {
                            (v & !low) | map[v & low]
                        } else {
                            v
                        }
                    })
                    .collect();
                GateKind::Permutation {
                    qubits: qubits
                        .iter()
                        .copied()
                        .chain(extra.iter().map(|c| c.qubit))
                        .collect(),
                    map: full,
                }
            }
        };
        Ok(Gate {
            kind,
            family: self.family,
            cost: self.cost,
        })
    }

    /// Applies the gate in place. Qubit indices must already be validated.
    pub(crate) fn apply_to(&self, amps: &mut Vec<Complex64>) {
        match &self.kind {
            GateKind::Single { target, matrix } => apply_block(amps, 0, 0, *target, matrix),
            GateKind::Controlled {
                controls,
                target,
                matrix,
            } => {
                let (mask, want) = control_mask(controls);
                apply_block(amps, mask, want, *target, matrix)
            }
            GateKind::Permutation { qubits, map } => {
                let scatter = scatter_table(qubits);
                let qmask = scatter[scatter.len() - 1];
                let mut out = vec![ZERO; amps.len()];
                for base in (0..amps.len()).filter(|i| i & qmask == 0) {
                    for (loc, &dst) in map.iter().enumerate() {
                        out[base | scatter[dst]] = amps[base | scatter[loc]];
                    }
                }
                *amps = out;
            }
            GateKind::Dense {
                qubits,
                controls,
                matrix,
            } => {
                let scatter = scatter_table(qubits);
                let dim = scatter.len();
                let qmask = scatter[dim - 1];
                let (cmask, cwant) = control_mask(controls);
                let mut buf = vec![ZERO; dim];
                for base in (0..amps.len()).filter(|i| i & qmask == 0 && i & cmask == cwant) {
                    for (slot, &off) in buf.iter_mut().zip(&scatter) {
                        *slot = amps[base | off];
                    }
                    for (r, &off) in scatter.iter().enumerate() {
                        let row = &matrix[r * dim..(r + 1) * dim];
                        amps[base | off] = row.iter().zip(&buf).map(|(m, v)| m * v).sum();
                    }
                }
            }
        }
    }
}

fn apply_block(amps: &mut [Complex64], mask: usize, want: usize, target: usize, m: &Mat2) {
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & tbit != 0 || i & mask != want {
            continue;
        }
        let j = i | tbit;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a + m[0][1] * b;
        amps[j] = m[1][0] * a + m[1][1] * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary_block() {
        let bad = [[ONE, ONE], [ZERO, ONE]];
        assert!(matches!(
            Gate::single(0, bad, "BAD"),
            Err(Error::NonUnitary(_))
        ));
    }

    #[test]
    fn rejects_non_bijective_map() {
        assert!(matches!(
            Gate::permutation(vec![0], vec![0, 0], "P"),
            Err(Error::NotAPermutation)
        ));
    }

    #[test]
    fn rejects_control_on_target() {
        assert!(Gate::cnot(1, 1).is_err());
    }

    #[test]
    fn controlled_permutation_only_fires_on_control() {
        // X on qubit 0 as a permutation, controlled on qubit 1 = CNOT(1 -> 0).
        let g = Gate::permutation(vec![0], vec![1, 0], "X")
            .unwrap()
            .controlled_by(&[Control::one(1)])
            .unwrap();
        for (input, expected) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            let mut amps = vec![ZERO; 4];
            amps[input] = ONE;
            g.apply_to(&mut amps);
            assert_eq!(amps[expected], ONE);
        }
    }

    #[test]
    fn inverse_of_dense_block_is_adjoint() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, FRAC_1_SQRT_2);
        let g = Gate::dense(vec![0], vec![], vec![h, i, i, h], "D").unwrap();
        let mut amps = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let before = amps.clone();
        g.apply_to(&mut amps);
        g.inverse().apply_to(&mut amps);
        for (a, b) in amps.iter().zip(&before) {
            assert!((a - b).norm() < 1e-15);
        }
    }
}
