//! The dense state vector and its measurement primitives.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::rng::{self, SimRng};
use crate::{EPS_BRANCH, EPS_PROB};

/// Unit-norm amplitudes over `n_qubits` qubits. Qubit 0 is the least
/// significant bit of the basis index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "AmplitudeList", try_from = "AmplitudeList")]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Wire form: amplitudes as `(re, im)` pairs.
#[derive(Serialize, Deserialize)]
struct AmplitudeList {
    amplitudes: Vec<(f64, f64)>,
}

impl From<StateVector> for AmplitudeList {
    fn from(s: StateVector) -> Self {
        AmplitudeList {
            amplitudes: s.amps.iter().map(|a| (a.re, a.im)).collect(),
        }
    }
}

impl TryFrom<AmplitudeList> for StateVector {
    type Error = Error;

    fn try_from(list: AmplitudeList) -> Result<Self> {
        StateVector::from_amplitudes(
            list.amplitudes
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// `|index⟩`.
    ///
    /// Panics when `index` does not fit in `n_qubits` bits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = crate::log2_exact(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > EPS_PROB {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Normalizes `amps` and wraps them.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = crate::log2_exact(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < EPS_BRANCH {
            return Err(Error::NotNormalized(norm * norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n_qubits, amps })
    }

    /// Haar-like random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random(n_qubits: usize, rng: &mut SimRng) -> Self {
        let amps = (0..1usize << n_qubits)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        Self::normalized(amps).expect("gaussian vector is nonzero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// `self ⊗ low`: `self` occupies the high qubits.
    pub fn tensor(&self, low: &StateVector) -> StateVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|h| low.amps.iter().map(move |l| h * l))
            .collect();
        StateVector {
            n_qubits: self.n_qubits + low.n_qubits,
            amps,
        }
    }

    /// Embeds the state in a register with `extra` more qubits, all `|0⟩`
    /// and placed above the existing ones.
    pub fn pad(&self, extra: usize) -> StateVector {
        let mut amps = self.amps.clone();
        amps.resize(self.amps.len() << extra, Complex64::new(0.0, 0.0));
        StateVector {
            n_qubits: self.n_qubits + extra,
            amps,
        }
    }

    /// Drops the top `extra` qubits, which must be `|0⟩`. Returns the reduced
    /// state together with the norm of the discarded part.
    pub fn unpad(&self, extra: usize) -> (StateVector, f64) {
        let keep = self.amps.len() >> extra;
        let residual = self.amps[keep..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        (
            StateVector {
                n_qubits: self.n_qubits - extra,
                amps: self.amps[..keep].to_vec(),
            },
            residual,
        )
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        gate.apply_to(&mut self.amps);
        Ok(())
    }

    /// Outcome distribution of the register above the lowest `n_low` qubits.
    pub fn marginal_high(&self, n_low: usize) -> Vec<f64> {
        let mut probs = vec![0.0; self.amps.len() >> n_low];
        for (i, a) in self.amps.iter().enumerate() {
            probs[i >> n_low] += a.norm_sqr();
        }
        probs
    }

    /// The normalized low-register state conditioned on the register above
    /// the lowest `n_low` qubits holding `high`.
    pub fn slice_high(&self, n_low: usize, high: usize) -> Result<StateVector> {
        let width = 1usize << n_low;
        let start = high * width;
        if start >= self.amps.len() {
            return Err(Error::OutOfRange {
                what: "high register value",
                value: high,
                min: 0,
                max: (self.amps.len() >> n_low) - 1,
            });
        }
        StateVector::normalized(self.amps[start..start + width].to_vec())
            .map_err(|_| Error::ImpossibleBranch(0.0))
    }

    /// Moves the content of qubit `p` to qubit `relabel[p]`.
    pub(crate) fn relabel(&mut self, relabel: &[usize]) {
        if relabel.iter().enumerate().all(|(p, &q)| p == q) {
            return;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let j = relabel
                .iter()
                .enumerate()
                .filter(|(p, _)| i >> p & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q);
            out[j] = *a;
        }
        self.amps = out;
    }

    /// Max-norm distance to `other`.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(inner_product(self, other)?.norm_sqr())
    }

    /// Measures the qubits in `qubits` (entry 0 least significant) in the
    /// computational basis.
    pub fn measure_qubits(
        &self,
        qubits: &[usize],
        rng: &mut SimRng,
    ) -> Result<(usize, StateVector)> {
        if let Some(&qubit) = qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let value_of = |i: usize| {
            qubits
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &q)| acc | (i >> q & 1) << j)
        };
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[value_of(i)] += a.norm_sqr();
        }
        let r: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
        let mut acc = 0.0;
        let mut outcome = probs.len() - 1;
        for (v, p) in probs.iter().enumerate() {
            acc += p;
            if r < acc {
                outcome = v;
                break;
            }
        }
        if probs[outcome] < EPS_BRANCH {
            return Err(Error::ImpossibleBranch(probs[outcome]));
        }
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if value_of(i) == outcome {
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((outcome, StateVector::normalized(amps)?))
    }
}

/// Two-outcome projective observable: `M₀` projects onto the listed basis
/// indices and `M₁` onto the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable2 {
    dim: usize,
    in_m0: Vec<bool>,
}

impl Observable2 {
    pub fn new(dim: usize, m0: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut in_m0 = vec![false; dim];
        for k in m0 {
            if k >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k + 1,
                });
            }
            in_m0[k] = true;
        }
        Ok(Observable2 { dim, in_m0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, index: usize) -> bool {
        self.in_m0[index]
    }

    /// Probability of outcome 0.
    pub fn prob0(&self, state: &StateVector) -> Result<f64> {
        self.check(state)?;
        Ok(state
            .amps
            .iter()
            .zip(&self.in_m0)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.norm_sqr())
            .sum())
    }

    /// Renormalized projection of `state` onto outcome `outcome`.
    pub fn project(&self, state: &StateVector, outcome: u8) -> Result<StateVector> {
        self.check(state)?;
        let keep = outcome == 0;
        let amps: Vec<Complex64> = state
            .amps
            .iter()
            .zip(&self.in_m0)
            .map(|(a, &m)| {
                if m == keep {
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let p = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if p < EPS_BRANCH {
            return Err(Error::ImpossibleBranch(p));
        }
        StateVector::normalized(amps)
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcome: u8,
    pub post_state: StateVector,
    pub prob0: f64,
}

/// Applies `gate` to a copy of `state`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨a|b⟩`, conjugating `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Measures `obs` on `state` with randomness drawn from `rng`.
pub fn measure_observable_with(
    state: &StateVector,
    obs: &Observable2,
    rng: &mut SimRng,
) -> Result<Measurement> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > EPS_PROB {
        return Err(Error::NotNormalized(norm));
    }
    let prob0 = obs.prob0(state)?;
    let outcome = rng::sample_binary(prob0, rng);
    let post_state = obs.project(state, outcome)?;
    Ok(Measurement {
        outcome,
        post_state,
        prob0,
    })
}

/// Measures `obs` on `state`, seeding the outcome draw from `rng_seed`.
pub fn measure_observable(
    state: &StateVector,
    obs: &Observable2,
    rng_seed: u64,
) -> Result<Measurement> {
    measure_observable_with(state, obs, &mut rng::stream(rng_seed, 0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(&StateVector::zero(1), &Gate::h(0)).unwrap();
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn x_flips_zero_to_one() {
        let s = apply_gate(&StateVector::zero(1), &Gate::x(0)).unwrap();
        assert_eq!(s, StateVector::basis(1, 1));
    }

    #[test]
    fn negation_permutation_mod_half() {
        // y -> (8 - y) mod 8 on three qubits sends |3> to |5>.
        let map = (0..8).map(|y| (8 - y) % 8).collect();
        let g = Gate::permutation(vec![0, 1, 2], map, "NEG").unwrap();
        let s = apply_gate(&StateVector::basis(3, 3), &g).unwrap();
        assert_eq!(s, StateVector::basis(3, 5));
    }

    #[test]
    fn apply_rejects_out_of_range_target() {
        let err = apply_gate(&StateVector::zero(2), &Gate::h(2)).unwrap_err();
        assert!(matches!(
            err,
            Error::QubitOutOfRange {
                qubit: 2,
                n_qubits: 2
            }
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rng::stream(5, 0);
        let psi = StateVector::random(3, &mut rng);
        let text = serde_json::to_string(&psi).unwrap();
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, psi);
        assert!(
            serde_json::from_str::<StateVector>(r#"{"amplitudes":[[1.0,0.0],[1.0,0.0]]}"#).is_err()
        );
    }

    #[test]
    fn marginal_and_slice() {
        let s = StateVector::zero(1).tensor(&StateVector::basis(2, 3));
        let joint = apply_gate(&s, &Gate::h(2)).unwrap();
        assert_eq!(joint.marginal_high(2).len(), 2);
        assert!((joint.marginal_high(2)[1] - 0.5).abs() < 1e-15);
        assert_eq!(joint.slice_high(2, 1).unwrap(), StateVector::basis(2, 3));
        assert!(StateVector::basis(3, 0).slice_high(2, 1).is_err());
    }

    #[test]
    fn inner_products() {
        let mut rng = rng::stream(3, 0);
        let psi = StateVector::random(4, &mut rng);
        assert!((inner_product(&psi, &psi).unwrap() - c(1.0)).norm() < 1e-12);
        let z = inner_product(&StateVector::basis(1, 0), &StateVector::basis(1, 1)).unwrap();
        assert_eq!(z, c(0.0));
        assert!(inner_product(&StateVector::zero(1), &StateVector::zero(2)).is_err());
    }

    #[test]
    fn observable_on_basis_and_pair() {
        let obs = Observable2::new(16, [3, 13]).unwrap();
        let m = measure_observable(&StateVector::basis(4, 3), &obs, 9).unwrap();
        assert_eq!((m.outcome, m.prob0), (0, 1.0));

        let mut amps = vec![c(0.0); 4];
        amps[1] = c(FRAC_1_SQRT_2);
        amps[2] = c(FRAC_1_SQRT_2);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let obs = Observable2::new(4, [1]).unwrap();
        assert!((obs.prob0(&s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projecting_onto_empty_branch_fails() {
        let obs = Observable2::new(2, [0]).unwrap();
        let err = obs.project(&StateVector::basis(1, 0), 1).unwrap_err();
        assert!(matches!(err, Error::ImpossibleBranch(_)));
    }

    #[test]
    fn measurement_statistics_within_five_sigma() {
        let mut rng = rng::stream(11, 0);
        let psi = StateVector::random(3, &mut rng);
        let obs = Observable2::new(8, [0, 2, 5]).unwrap();
        let p = obs.prob0(&psi).unwrap();
        let trials = 10_000;
        let zeros = (0..trials)
            .filter(|&t| measure_observable(&psi, &obs, t).unwrap().outcome == 0)
            .count();
        let freq = zeros as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() <= 5.0 * sigma, "freq {freq} vs {p}");
    }

    #[test]
    fn pad_and_unpad_round_trip() {
        let mut rng = rng::stream(5, 0);
        let psi = StateVector::random(2, &mut rng);
        let (back, residual) = psi.pad(2).unpad(2);
        assert_eq!(back, psi);
        assert_eq!(residual, 0.0);
    }
}
