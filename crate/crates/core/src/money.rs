//! Fourier and Hartley banknotes over the toy group action.
//!
//! Joint registers share one layout: the `X` register on qubits `0..n`, the
//! `Z_N` index register on `n..2n` and, for Hartley circuits, the transform
//! ancilla on qubit `2n`. A joint basis index is `k·N + y`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::action::{ActionState, ToyGroupAction};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::rng::{self, sample_binary, SimRng};
use crate::statevec::{inner_product, Observable2, StateVector};
use crate::transforms::{build_inverse_qft, build_qft, build_qht_recursive};
use crate::{check_budget, EPS_BRANCH, EPS_STATE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Fourier,
    Hartley,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Fourier => "fourier",
            Flavor::Hartley => "hartley",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Flavor::Fourier),
            "hartley" => Ok(Flavor::Hartley),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// Smallest group order with a valid Hartley serial.
pub const MIN_HARTLEY_ORDER: usize = 8;

/// Hartley serials must be odd so that `u·h ≡ N/8 (mod N)` is solvable.
pub fn is_valid_hartley_serial(order: usize, h: usize) -> bool {
    order >= MIN_HARTLEY_ORDER && h < order && h % 2 == 1
}

fn check_hartley_serial(order: usize, h: usize) -> Result<()> {
    if !is_valid_hartley_serial(order, h) {
        return Err(Error::InvalidSerial { serial: h, order });
    }
    Ok(())
}

fn check_dimension(ga: &ToyGroupAction, state: &StateVector) -> Result<()> {
    if state.dim() != ga.order() {
        return Err(Error::DimensionMismatch {
            expected: ga.order(),
            found: state.dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Banknote {
    pub serial: usize,
    pub flavor: Flavor,
    pub note: ActionState,
}

/// JSON form of a [`Banknote`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BanknoteDocument {
    #[serde(rename = "N")]
    pub order: usize,
    pub serial: usize,
    pub flavor: Flavor,
    pub amplitudes: Vec<(f64, f64)>,
}

impl Banknote {
    pub fn document(&self) -> BanknoteDocument {
        BanknoteDocument {
            order: self.note.order(),
            serial: self.serial,
            flavor: self.flavor,
            amplitudes: self
                .note
                .state()
                .amplitudes()
                .iter()
                .map(|a| (a.re, a.im))
                .collect(),
        }
    }

    pub fn from_document(ga: &ToyGroupAction, doc: BanknoteDocument) -> Result<Self> {
        if doc.order != ga.order() {
            return Err(Error::ActionMismatch);
        }
        let amps = doc
            .amplitudes
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        Ok(Banknote {
            serial: doc.serial,
            flavor: doc.flavor,
            note: ActionState::new(ga, StateVector::from_amplitudes(amps)?)?,
        })
    }
}

fn index_qubits(n: usize) -> Vec<usize> {
    (n..2 * n).collect()
}

/// `last·CACT(sign)·first` on the joint register, where `first` and `last`
/// are the index-register transforms of the flavor.
fn phase_kickback(
    ga: &ToyGroupAction,
    flavor: Flavor,
    sign: i8,
    invert_last: bool,
) -> Result<Circuit> {
    let n = ga.n_qubits();
    let total = 2 * n + 1;
    check_budget(total)?;
    let index = index_qubits(n);
    let (first, last) = match flavor {
        Flavor::Fourier => {
            let qft = build_qft(n)?.embed(total, &index)?;
            let tail = if invert_last {
                build_inverse_qft(n)?.embed(total, &index)?
            } else {
                qft.clone()
            };
            (qft, tail)
        }
        Flavor::Hartley => {
            let mut placement = index;
            placement.push(2 * n);
            let qht = build_qht_recursive(n)?.embed(total, &placement)?;
            (qht.clone(), qht)
        }
    };
    let kick = Circuit::from_gates(total, vec![ga.conditional_action(sign)])?;
    first.then(&kick)?.then(&last)
}

/// The `cmpIndex` unitary and its inverse on the joint register.
#[derive(Clone, Debug)]
pub struct CmpIndex {
    flavor: Flavor,
    n: usize,
    forward: Circuit,
    backward: Circuit,
}

impl CmpIndex {
    pub fn new(ga: &ToyGroupAction, flavor: Flavor) -> Result<Self> {
        let forward = phase_kickback(ga, flavor, -1, true)?;
        let backward = forward.inverse();
        Ok(CmpIndex {
            flavor,
            n: ga.n_qubits(),
            forward,
            backward,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn circuit(&self) -> &Circuit {
        &self.forward
    }

    /// `|ψ⟩ ↦` joint state over `Z_N ⊗ C^X` (index register high).
    pub fn apply(&self, x_state: &StateVector) -> Result<StateVector> {
        let mut s = x_state.pad(self.n + 1);
        self.forward.apply(&mut s)?;
        let (joint, leak) = s.unpad(1);
        if leak > EPS_STATE {
            return Err(Error::ImpossibleBranch(leak));
        }
        Ok(joint)
    }

    /// Inverse of [`CmpIndex::apply`]. Returns the `X` state and the norm
    /// left outside `|0⟩` on the index register.
    pub fn apply_inverse(&self, joint: &StateVector) -> Result<(StateVector, f64)> {
        let mut s = joint.pad(1);
        self.backward.apply(&mut s)?;
        let (x, leak) = s.unpad(self.n + 1);
        Ok((x, leak))
    }
}

pub fn cmp_index(ga: &ToyGroupAction, state: &ActionState, flavor: Flavor) -> Result<StateVector> {
    state.check_owner(ga)?;
    CmpIndex::new(ga, flavor)?.apply(state.state())
}

/// `N^{-1/2} Σ_h |h⟩ ⊗ note(h)`, the state `Gen` measures.
pub fn gen_pre_measurement(ga: &ToyGroupAction, flavor: Flavor) -> Result<StateVector> {
    let n = ga.n_qubits();
    let mut s = StateVector::basis(2 * n + 1, ga.base_point());
    phase_kickback(ga, flavor, 1, false)?.apply(&mut s)?;
    let (joint, leak) = s.unpad(1);
    if leak > EPS_STATE {
        return Err(Error::ImpossibleBranch(leak));
    }
    Ok(joint)
}

fn gen_with(ga: &ToyGroupAction, flavor: Flavor, rng: &mut SimRng) -> Result<Banknote> {
    let n = ga.n_qubits();
    let joint = gen_pre_measurement(ga, flavor)?;
    let index = index_qubits(n);
    loop {
        let (h, post) = joint.measure_qubits(&index, rng)?;
        if flavor == Flavor::Hartley && !is_valid_hartley_serial(ga.order(), h) {
            continue;
        }
        let note = ActionState::new(ga, post.slice_high(n, h)?)?;
        return Ok(Banknote {
            serial: h,
            flavor,
            note,
        });
    }
}

/// Mints a Fourier banknote: measuring the index register of
/// [`gen_pre_measurement`] leaves `fourier_state(h)` behind.
pub fn gen_fourier(ga: &ToyGroupAction, rng_seed: u64) -> Result<Banknote> {
    gen_with(ga, Flavor::Fourier, &mut rng::stream(rng_seed, 0))
}

/// Mints a real Hartley banknote, remeasuring until the serial is odd.
pub fn gen_hartley(ga: &ToyGroupAction, rng_seed: u64) -> Result<Banknote> {
    if ga.order() < MIN_HARTLEY_ORDER {
        return Err(Error::OutOfRange {
            what: "N",
            value: ga.order(),
            min: MIN_HARTLEY_ORDER,
            max: usize::MAX,
        });
    }
    gen_with(ga, Flavor::Hartley, &mut rng::stream(rng_seed, 0))
}

/// Flag-qubit unitary telling `hartley_state(h)` (flag 0) from
/// `hartley_state(−h)` (flag 1). Register: `X` on `0..n`, flag at `n`.
#[derive(Clone, Debug)]
pub struct Distinguisher {
    serial: usize,
    shift: usize,
    n: usize,
    circuit: Circuit,
}

/// Outcome probabilities and post-measurement `X` states of one
/// distinguisher run.
#[derive(Clone, Debug)]
pub struct SignSplit {
    pub prob0: f64,
    pub branches: [Option<StateVector>; 2],
}

impl Distinguisher {
    pub fn new(ga: &ToyGroupAction, h: usize) -> Result<Self> {
        let order = ga.order();
        let target = order / 8;
        let shift = (0..order)
            .find(|u| (u * h) % order == target)
            .filter(|_| order >= MIN_HARTLEY_ORDER && h < order)
            .ok_or(Error::NoDistinguisherShift { h, order })?;
        let n = ga.n_qubits();
        check_budget(n + 1)?;
        let flag = n;
        let twist = ga.twist_unitary().controlled_by(&[Control::one(flag)])?;
        let circuit = Circuit::from_gates(
            n + 1,
            vec![
                ga.action_unitary(ga.neg(shift)),
                Gate::h(flag),
                twist,
                Gate::h(flag),
                ga.action_unitary(shift),
            ],
        )?;
        Ok(Distinguisher {
            serial: h,
            shift,
            n,
            circuit,
        })
    }

    pub fn serial(&self) -> usize {
        self.serial
    }

    /// `u` with `u·h ≡ N/8 (mod N)`.
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn split(&self, x_state: &StateVector) -> Result<SignSplit> {
        let mut s = x_state.pad(1);
        self.circuit.apply(&mut s)?;
        let probs = s.marginal_high(self.n);
        let branch = |bit: usize| {
            if probs[bit] < EPS_BRANCH {
                Ok(None)
            } else {
                s.slice_high(self.n, bit).map(Some)
            }
        };
        Ok(SignSplit {
            prob0: probs[0],
            branches: [branch(0)?, branch(1)?],
        })
    }
}

/// Runs the distinguisher on `state` and measures the flag.
pub fn distinguish_sign(
    ga: &ToyGroupAction,
    state: &ActionState,
    h: usize,
    rng_seed: u64,
) -> Result<(u8, ActionState)> {
    state.check_owner(ga)?;
    let split = Distinguisher::new(ga, h)?.split(state.state())?;
    let bit = sample_binary(split.prob0, &mut rng::stream(rng_seed, 0));
    let post = split.branches[bit as usize]
        .clone()
        .ok_or(Error::ImpossibleBranch(0.0))?;
    Ok((bit, ActionState::new(ga, post)?))
}

/// One entry of a verifier's step log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u8,
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

impl StepRecord {
    fn new(step: u8, action: &'static str) -> Self {
        StepRecord {
            step,
            action: action.to_string(),
            outcome: None,
            probability: None,
        }
    }

    fn measured(step: u8, action: &'static str, outcome: u64, probability: f64) -> Self {
        StepRecord {
            step,
            action: action.to_string(),
            outcome: Some(outcome),
            probability: Some(probability),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictTrace {
    pub accepted: bool,
    pub acceptance_probability: f64,
    pub post_state: Option<StateVector>,
    pub step_log: Vec<StepRecord>,
}

/// The deterministic part of `Ver_new` for one `(serial, state)` pair:
/// branch probabilities and the accepted post-state. Sampling a verdict
/// from it costs two random draws.
#[derive(Clone, Debug)]
pub struct VerifierRun {
    serial: usize,
    support_prob: Option<f64>,
    step3_prob0: f64,
    flag_prob0: f64,
    accepted_state: Option<StateVector>,
}

impl VerifierRun {
    /// Steps 2–6 on a state already known to lie in `C^X`.
    pub fn prepare(ga: &ToyGroupAction, h: usize, state: &StateVector) -> Result<Self> {
        check_hartley_serial(ga.order(), h)?;
        check_dimension(ga, state)?;
        let cmp = CmpIndex::new(ga, Flavor::Hartley)?;
        VerifierRun::prepare_with(ga, &cmp, &Distinguisher::new(ga, h)?, h, state)
    }

    /// As [`VerifierRun::prepare`] with the circuits supplied by the caller,
    /// so repeated verifications can share them.
    pub fn prepare_with(
        ga: &ToyGroupAction,
        cmp: &CmpIndex,
        dist: &Distinguisher,
        h: usize,
        state: &StateVector,
    ) -> Result<Self> {
        check_hartley_serial(ga.order(), h)?;
        check_dimension(ga, state)?;
        if cmp.flavor() != Flavor::Hartley || dist.serial() != h {
            return Err(Error::ActionMismatch);
        }
        let order = ga.order();
        let n = ga.n_qubits();
        let joint = cmp.apply(state)?;

        let pair = [h, ga.neg(h)];
        let obs = Observable2::new(
            joint.dim(),
            pair.iter()
                .flat_map(|&k| (0..order).map(move |y| k * order + y)),
        )?;
        let step3_prob0 = obs.prob0(&joint)?;
        let mut run = VerifierRun {
            serial: h,
            support_prob: None,
            step3_prob0,
            flag_prob0: 0.0,
            accepted_state: None,
        };
        if step3_prob0 < EPS_BRANCH {
            return Ok(run);
        }

        let (x, leak) = cmp.apply_inverse(&obs.project(&joint, 0)?)?;
        let plus = ga.hartley_state(h);
        let minus = ga.hartley_state(ga.neg(h));
        let in_span = inner_product(plus.state(), &x)?.norm_sqr()
            + inner_product(minus.state(), &x)?.norm_sqr();
        let deficit = leak.max((1.0 - in_span).abs());
        if deficit > EPS_STATE {
            return Err(Error::UnreachableBranch(deficit));
        }
        debug_assert_eq!(x.n_qubits(), n);

        let split = dist.split(&x)?;
        run.flag_prob0 = split.prob0;
        run.accepted_state = split.branches[0].clone();
        Ok(run)
    }

    /// Step 1 on an ambient register of `n + extra` qubits whose labels
    /// `≥ N` lie outside `X`, followed by steps 2–6.
    pub fn prepare_ambient(ga: &ToyGroupAction, h: usize, ambient: &StateVector) -> Result<Self> {
        let n = ga.n_qubits();
        if ambient.n_qubits() < n {
            return Err(Error::DimensionMismatch {
                expected: ga.order(),
                found: ambient.dim(),
            });
        }
        let check = support_check(ga, ambient)?;
        let mut run = match &check.inside {
            Some(x) => VerifierRun::prepare(ga, h, x)?,
            None => {
                check_hartley_serial(ga.order(), h)?;
                VerifierRun {
                    serial: h,
                    support_prob: None,
                    step3_prob0: 0.0,
                    flag_prob0: 0.0,
                    accepted_state: None,
                }
            }
        };
        run.support_prob = Some(check.prob_inside);
        Ok(run)
    }

    pub fn serial(&self) -> usize {
        self.serial
    }

    pub fn acceptance_probability(&self) -> f64 {
        self.support_prob.unwrap_or(1.0) * self.step3_prob0 * self.flag_prob0
    }

    pub fn sample(&self, rng: &mut SimRng) -> VerdictTrace {
        let mut log = Vec::with_capacity(6);
        let reject = |log: Vec<StepRecord>| VerdictTrace {
            accepted: false,
            acceptance_probability: self.acceptance_probability(),
            post_state: None,
            step_log: log,
        };
        match self.support_prob {
            Some(p) => {
                let bit = sample_binary(p, rng);
                log.push(StepRecord::measured(1, "support_check", bit.into(), p));
                if bit == 1 {
                    return reject(log);
                }
            }
            None => log.push(StepRecord::new(1, "support_check")),
        }
        log.push(StepRecord::new(2, "cmp_index"));
        let outcome = sample_binary(self.step3_prob0, rng);
        log.push(StepRecord::measured(
            3,
            "measure_pair",
            outcome.into(),
            self.step3_prob0,
        ));
        if outcome == 1 {
            log.push(StepRecord::new(4, "reject"));
            return reject(log);
        }
        log.push(StepRecord::new(5, "uncompute_index"));
        let bit = sample_binary(self.flag_prob0, rng);
        log.push(StepRecord::measured(
            6,
            "distinguish_sign",
            bit.into(),
            self.flag_prob0,
        ));
        if bit == 1 {
            return reject(log);
        }
        VerdictTrace {
            accepted: true,
            acceptance_probability: self.acceptance_probability(),
            post_state: self.accepted_state.clone(),
            step_log: log,
        }
    }
}

/// Result of the ambient-register membership test.
#[derive(Clone, Debug)]
pub struct SupportCheck {
    pub prob_inside: f64,
    /// The state restricted to `X` (present when `prob_inside > 0`).
    pub inside: Option<StateVector>,
}

/// Flags labels `≥ N` onto an extra qubit and measures it.
pub fn support_check(ga: &ToyGroupAction, ambient: &StateVector) -> Result<SupportCheck> {
    let width = ambient.n_qubits();
    check_budget(width + 1)?;
    let dim = ambient.dim();
    let order = ga.order();
    let map = (0..2 * dim)
        .map(|v| if v % dim >= order { v ^ dim } else { v })
        .collect();
    let flagger = Gate::permutation((0..=width).collect(), map, "FLAG")?;
    let mut s = ambient.pad(1);
    s.apply(&flagger)?;
    let probs = s.marginal_high(width);
    let inside = if probs[0] < EPS_BRANCH {
        None
    } else {
        let restricted = s.slice_high(width, 0)?.into_amplitudes();
        Some(StateVector::from_amplitudes(restricted[..order].to_vec())?)
    };
    Ok(SupportCheck {
        prob_inside: probs[0],
        inside,
    })
}

/// Twist-based verification of a Hartley banknote.
pub fn ver_new(
    ga: &ToyGroupAction,
    h: usize,
    state: &StateVector,
    rng_seed: u64,
) -> Result<VerdictTrace> {
    Ok(VerifierRun::prepare(ga, h, state)?.sample(&mut rng::stream(rng_seed, 0)))
}

/// [`ver_new`] on a state over a label space larger than `X`.
pub fn ver_new_ambient(
    ga: &ToyGroupAction,
    h: usize,
    ambient: &StateVector,
    rng_seed: u64,
) -> Result<VerdictTrace> {
    Ok(VerifierRun::prepare_ambient(ga, h, ambient)?.sample(&mut rng::stream(rng_seed, 0)))
}

/// Fourier verification: measure the `cmpIndex` register, accept on `h`.
pub fn ver_fourier(
    ga: &ToyGroupAction,
    h: usize,
    state: &StateVector,
    rng_seed: u64,
) -> Result<VerdictTrace> {
    check_dimension(ga, state)?;
    if h >= ga.order() {
        return Err(Error::InvalidSerial {
            serial: h,
            order: ga.order(),
        });
    }
    let n = ga.n_qubits();
    let joint = CmpIndex::new(ga, Flavor::Fourier)?.apply(state)?;
    let probs = joint.marginal_high(n);
    let (k, post) = joint.measure_qubits(&index_qubits(n), &mut rng::stream(rng_seed, 0))?;
    let accepted = k == h;
    Ok(VerdictTrace {
        accepted,
        acceptance_probability: probs[h],
        post_state: if accepted {
            Some(post.slice_high(n, k)?)
        } else {
            None
        },
        step_log: vec![
            StepRecord::new(1, "cmp_index"),
            StepRecord::measured(2, "measure_index", k as u64, probs[k]),
        ],
    })
}
