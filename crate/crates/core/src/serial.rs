//! Serial-number recovery from a Hartley banknote by phase estimation of
//! Cayley-graph walks, plus the sparse-simulation cost record used for
//! reporting.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::action::{ActionState, ToyGroupAction};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::money::Distinguisher;
use crate::rng::{self, sample_binary, SimRng};
use crate::statevec::StateVector;
use crate::transforms::build_inverse_qft;
use crate::walk::{exact_ctqw, WalkSpec};
use crate::{check_budget, EPS_BRANCH};

/// Largest number of phase-estimation control qubits.
pub const MAX_PRECISION_BITS: usize = 12;
/// Walk time used for recovery: the eigenphase `λ_h·t/2π` becomes
/// `cos(2πuh/N)/2`, which never wraps.
pub const RECOVERY_TIME: f64 = FRAC_PI_2;

/// Phase-estimation circuit for `e^{iAt}`: the `X` register on qubits
/// `0..n`, control `j` on qubit `n + j`.
#[derive(Clone, Debug)]
pub struct PhaseEstimator {
    n: usize,
    bits: usize,
    circuit: Circuit,
}

impl PhaseEstimator {
    pub fn new(ga: &ToyGroupAction, spec: &WalkSpec, precision_bits: usize) -> Result<Self> {
        if precision_bits == 0 || precision_bits > MAX_PRECISION_BITS {
            return Err(Error::OutOfRange {
                what: "precision bits",
                value: precision_bits,
                min: 1,
                max: MAX_PRECISION_BITS,
            });
        }
        let n = ga.n_qubits();
        let total = n + precision_bits;
        check_budget(total)?;
        let register: Vec<usize> = (0..n).collect();
        let mut circuit = Circuit::new(total);
        for j in 0..precision_bits {
            circuit.push(Gate::h(n + j))?;
        }
        for j in 0..precision_bits {
            // W^{2^j} straight from the spectral form.
            let power = exact_ctqw(ga, &spec.with_time(spec.time() * (1u64 << j) as f64))?;
            circuit.push(Gate::dense(
                register.clone(),
                vec![Control::one(n + j)],
                power.row_major(),
                "CW",
            )?)?;
        }
        let controls: Vec<usize> = (n..total).collect();
        let iqft = build_inverse_qft(precision_bits)?.embed(total, &controls)?;
        Ok(PhaseEstimator {
            n,
            bits: precision_bits,
            circuit: circuit.then(&iqft)?,
        })
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    /// Measures the control register; returns `θ = x/2^p` and the `X`
    /// register's post-measurement state.
    pub fn run(&self, state: &StateVector, rng: &mut SimRng) -> Result<(f64, StateVector)> {
        if state.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n,
                found: state.dim(),
            });
        }
        let mut s = state.pad(self.bits);
        self.circuit.apply(&mut s)?;
        let probs = s.marginal_high(self.n);
        let mut draw = rng::split(rng);
        let outcome = sample_index(&probs, &mut draw);
        let post = s.slice_high(self.n, outcome)?;
        Ok((outcome as f64 / (1u64 << self.bits) as f64, post))
    }
}

/// Inverse-CDF draw from `probs` seeded by `seed`.
fn sample_index(probs: &[f64], seed: &mut u64) -> usize {
    let mut rng = rng::stream(*seed, 0);
    let total: f64 = probs.iter().sum();
    let mut remaining = total;
    for (i, &p) in probs.iter().enumerate() {
        if p < EPS_BRANCH {
            remaining -= p;
            continue;
        }
        // Binary decision "i versus everything after it", keeping the draw
        // on the shared two-outcome sampling rule.
        if sample_binary(p / remaining, &mut rng) == 0 {
            return i;
        }
        remaining -= p;
    }
    probs
        .iter()
        .rposition(|&p| p >= EPS_BRANCH)
        .unwrap_or(probs.len() - 1)
}

/// One phase-estimation run of `e^{iAt}` on `state`.
pub fn phase_estimate(
    ga: &ToyGroupAction,
    spec: &WalkSpec,
    state: &ActionState,
    precision_bits: usize,
    rng_seed: u64,
) -> Result<f64> {
    state.check_owner(ga)?;
    let pe = PhaseEstimator::new(ga, spec, precision_bits)?;
    Ok(pe.run(state.state(), &mut rng::stream(rng_seed, 0))?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerialEstimate {
    /// `(u, θ_u)` for each step of the schedule.
    pub estimates: Vec<(usize, f64)>,
    /// The best-scoring pair `{h', −h'}` before sign resolution.
    pub candidates: (usize, usize),
    pub recovered_h: usize,
    pub sign_resolved: bool,
    /// Score difference between the best and the runner-up pair.
    pub score_gap: f64,
}

/// `u = 1, 2, 4, …, N/2`.
pub fn u_schedule(order: usize) -> Vec<usize> {
    (0..order.trailing_zeros()).map(|j| 1usize << j).collect()
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Phase `λ_h·t/2π mod 1` the walk with generators `±u` imprints on
/// `hartley_state(h)`.
pub fn predicted_phase(spec: &WalkSpec, h: usize) -> f64 {
    (spec.eigenvalue(h) * spec.time() / TAU).rem_euclid(1.0)
}

/// Sum of squared circular distances between measured and predicted
/// phases, for every candidate serial.
pub fn candidate_scores(order: usize, estimates: &[(usize, f64)], time: f64) -> Result<Vec<f64>> {
    let specs: Vec<(WalkSpec, f64)> = estimates
        .iter()
        .map(|&(u, theta)| Ok((WalkSpec::pair(order, u, time)?, theta)))
        .collect::<Result<_>>()?;
    Ok((0..order)
        .map(|h| {
            specs
                .iter()
                .map(|(s, theta)| circular_distance(*theta, predicted_phase(s, h)).powi(2))
                .sum()
        })
        .collect())
}

/// Estimates the serial of a Hartley note: phase estimation for every `u`
/// in [`u_schedule`], brute-force scoring of all candidates, and the sign
/// distinguisher to split `h` from `−h`. Returns the estimate and the note
/// as it stands afterwards.
pub fn recover_serial(
    ga: &ToyGroupAction,
    note: &ActionState,
    precision_bits: usize,
    rng_seed: u64,
) -> Result<(SerialEstimate, ActionState)> {
    note.check_owner(ga)?;
    let order = ga.order();
    let mut rng = rng::stream(rng_seed, 0);
    let mut state = note.state().clone();
    let mut estimates = Vec::new();
    for u in u_schedule(order) {
        let spec = WalkSpec::pair(order, u, RECOVERY_TIME)?;
        let (theta, post) =
            PhaseEstimator::new(ga, &spec, precision_bits)?.run(&state, &mut rng)?;
        estimates.push((u, theta));
        state = post;
    }

    let scores = candidate_scores(order, &estimates, RECOVERY_TIME)?;
    let pair_of = |h: usize| h.min(ga.neg(h));
    let mut ranked: Vec<usize> = (0..order).filter(|&h| pair_of(h) == h).collect();
    ranked.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let best = ranked[0];
    let gap = ranked
        .get(1)
        .map_or(f64::INFINITY, |&r| scores[r] - scores[best]);
    let tolerance = (2.0f64).powi(-2 * precision_bits as i32);
    if gap < tolerance {
        return Err(Error::AmbiguousSerial { gap, tolerance });
    }
    if best.is_multiple_of(2) {
        return Err(Error::InvalidSerial {
            serial: best,
            order,
        });
    }

    let split = Distinguisher::new(ga, best)?.split(&state)?;
    let bit = sample_binary(split.prob0, &mut rng);
    let post = split.branches[bit as usize]
        .clone()
        .ok_or(Error::ImpossibleBranch(0.0))?;
    let recovered_h = if bit == 0 { best } else { ga.neg(best) };
    Ok((
        SerialEstimate {
            estimates,
            candidates: (best, ga.neg(best)),
            recovered_h,
            sign_resolved: true,
            score_gap: gap,
        },
        ActionState::new(ga, post)?,
    ))
}

/// Record of one recovery experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryManifest {
    #[serde(rename = "N")]
    pub order: usize,
    pub seed: u64,
    pub u_schedule: Vec<usize>,
    pub precision_bits: usize,
    pub t: f64,
    pub estimates: Vec<(usize, f64)>,
    pub generated_h: usize,
    pub recovered_h: usize,
    pub fidelity: f64,
}

impl RecoveryManifest {
    pub fn new(
        order: usize,
        seed: u64,
        precision_bits: usize,
        generated_h: usize,
        estimate: &SerialEstimate,
        fidelity: f64,
    ) -> Self {
        RecoveryManifest {
            order,
            seed,
            u_schedule: estimate.estimates.iter().map(|e| e.0).collect(),
            precision_bits,
            t: RECOVERY_TIME,
            estimates: estimate.estimates.clone(),
            generated_h,
            recovered_h: estimate.recovered_h,
            fidelity,
        }
    }

    pub fn succeeded(&self) -> bool {
        self.generated_h == self.recovered_h
    }
}

/// Query and gate counts for simulating `e^{-iHt}` of a `d`-sparse
/// Hamiltonian on `n` qubits to error `ε`, leading order with unit
/// constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSimulationCost {
    pub sparsity: usize,
    pub max_norm: f64,
    pub time: f64,
    pub n_qubits: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub queries: f64,
    pub gates: f64,
    pub query_formula: String,
    pub gate_formula: String,
}

impl SparseSimulationCost {
    pub const QUERY_FORMULA: &'static str = "O(tau * log(tau/eps) / log(log(tau/eps)))";
    pub const GATE_FORMULA: &'static str =
        "O(tau * (n + log(tau/eps)^(5/2)) * log(tau/eps) / log(log(tau/eps)))";

    pub fn new(sparsity: usize, max_norm: f64, time: f64, n_qubits: usize, epsilon: f64) -> Self {
        let tau = sparsity as f64 * max_norm * time;
        let l = (tau / epsilon).ln().max(std::f64::consts::E);
        let ratio = l / l.ln().max(1.0);
        SparseSimulationCost {
            sparsity,
            max_norm,
            time,
            n_qubits,
            epsilon,
            tau,
            queries: tau * ratio,
            gates: tau * (n_qubits as f64 + l.powf(2.5)) * ratio,
            query_formula: Self::QUERY_FORMULA.to_string(),
            gate_formula: Self::GATE_FORMULA.to_string(),
        }
    }

    /// Cost record for the Cayley-graph walk of `spec`: sparsity `|Q|` and
    /// unit max-norm.
    pub fn for_walk(spec: &WalkSpec, epsilon: f64) -> Self {
        SparseSimulationCost::new(
            spec.generators().len(),
            1.0,
            spec.time().abs(),
            spec.order().trailing_zeros() as usize,
            epsilon,
        )
    }
}
