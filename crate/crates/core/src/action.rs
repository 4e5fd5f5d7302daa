//! A toy regular action of `Z_N` on `N` opaque labels, with its twist.
//!
//! The labelling `φ: Z_N → X` is a seeded random permutation. Everything
//! outside this module sees the action only through [`ToyGroupAction::act`]
//! and the gates built from it.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classical::{angle, cas};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::rng;
use crate::statevec::StateVector;

/// Wire form of a [`ToyGroupAction`].
#[derive(Serialize, Deserialize)]
struct ActionDocument {
    #[serde(rename = "N")]
    order: usize,
    seed: Option<u64>,
    permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ActionDocument", try_from = "ActionDocument")]
pub struct ToyGroupAction {
    order: usize,
    seed: Option<u64>,
    secret_bijection: Vec<usize>,
    inverse: Vec<usize>,
}

impl From<ToyGroupAction> for ActionDocument {
    fn from(ga: ToyGroupAction) -> Self {
        ActionDocument {
            order: ga.order,
            seed: ga.seed,
            permutation: ga.secret_bijection,
        }
    }
}

impl TryFrom<ActionDocument> for ToyGroupAction {
    type Error = Error;

    fn try_from(doc: ActionDocument) -> Result<Self> {
        if doc.permutation.len() != doc.order {
            return Err(Error::DimensionMismatch {
                expected: doc.order,
                found: doc.permutation.len(),
            });
        }
        ToyGroupAction::from_permutation(doc.permutation, doc.seed)
    }
}

impl ToyGroupAction {
    /// Action of `Z_order` with labels shuffled by `seed`. `order` must be a
    /// power of two, at least 2.
    pub fn new(order: usize, seed: u64) -> Result<Self> {
        check_order(order)?;
        let mut perm: Vec<usize> = (0..order).collect();
        perm.shuffle(&mut rng::stream(seed, 0));
        ToyGroupAction::from_permutation(perm, Some(seed))
    }

    /// Action whose labels coincide with group elements.
    pub fn with_identity(order: usize) -> Result<Self> {
        check_order(order)?;
        ToyGroupAction::from_permutation((0..order).collect(), None)
    }

    fn from_permutation(perm: Vec<usize>, seed: Option<u64>) -> Result<Self> {
        check_order(perm.len())?;
        let mut inverse = vec![usize::MAX; perm.len()];
        for (g, &x) in perm.iter().enumerate() {
            if x >= perm.len() || inverse[x] != usize::MAX {
                return Err(Error::NotAPermutation);
            }
            inverse[x] = g;
        }
        Ok(ToyGroupAction {
            order: perm.len(),
            seed,
            secret_bijection: perm,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Qubits in an `X` (or `Z_N`) register.
    pub fn n_qubits(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `x₀ = 0 * x₀`.
    pub fn base_point(&self) -> usize {
        self.secret_bijection[0]
    }

    /// `-g mod N`.
    pub fn neg(&self, g: usize) -> usize {
        (self.order - g % self.order) % self.order
    }

    /// `g * y`. `g` is read modulo `N`.
    pub fn act(&self, g: usize, y: usize) -> Result<usize> {
        if y >= self.order {
            return Err(Error::LabelOutsideX(y));
        }
        Ok(self.act_unchecked(g, y))
    }

    fn act_unchecked(&self, g: usize, y: usize) -> usize {
        self.secret_bijection[(g % self.order + self.inverse[y]) % self.order]
    }

    /// `TWIST(g * x₀) = (−g) * x₀`.
    pub fn twist(&self, y: usize) -> Result<usize> {
        if y >= self.order {
            return Err(Error::LabelOutsideX(y));
        }
        Ok(self.secret_bijection[self.neg(self.inverse[y])])
    }

    /// Short digest of the labelling, used to tag states.
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a over the permutation.
        self.secret_bijection
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &x| {
                (h ^ x as u64).wrapping_mul(0x0000_0100_0000_01b3)
            })
    }

    fn register(&self) -> Vec<usize> {
        (0..self.n_qubits()).collect()
    }

    /// `U_k: |y⟩ ↦ |k * y⟩` on qubits `0..n`.
    pub fn action_unitary(&self, k: usize) -> Gate {
        let map = (0..self.order).map(|y| self.act_unchecked(k, y)).collect();
        Gate::permutation(self.register(), map, "ACT").expect("action is a bijection")
    }

    /// `|y⟩|k⟩ ↦ |(sign·k) * y⟩|k⟩` with `X` on qubits `0..n` and the `Z_N`
    /// register on `n..2n`.
    pub fn conditional_action(&self, sign: i8) -> Gate {
        let n = self.order;
        let map = (0..n * n)
            .map(|v| {
                let (y, k) = (v % n, v / n);
                let g = if sign < 0 { self.neg(k) } else { k };
                self.act_unchecked(g, y) + n * k
            })
            .collect();
        Gate::permutation((0..2 * self.n_qubits()).collect(), map, "CACT")
            .expect("conditional action is a bijection")
    }

    /// The twist as a permutation gate on qubits `0..n`.
    pub fn twist_unitary(&self) -> Gate {
        let map = (0..self.order)
            .map(|y| self.secret_bijection[self.neg(self.inverse[y])])
            .collect();
        Gate::permutation(self.register(), map, "TWIST").expect("twist is a bijection")
    }

    /// Places `amp(g)` on label `g * x₀`.
    fn state_from(&self, amp: impl Fn(usize) -> Complex64) -> ActionState {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.order];
        let x0 = self.base_point();
        for g in 0..self.order {
            amps[self.act_unchecked(g, x0)] = amp(g);
        }
        let state = StateVector::from_amplitudes(amps).expect("orthonormal basis state");
        ActionState::wrap(self, state)
    }

    /// `N^{-1/2} Σ_g ω^{gh} |g * x₀⟩`.
    pub fn fourier_state(&self, h: usize) -> ActionState {
        let scale = 1.0 / (self.order as f64).sqrt();
        self.state_from(|g| Complex64::from_polar(scale, angle(g * h, self.order)))
    }

    /// `N^{-1/2} Σ_g cas(2πgh/N) |g * x₀⟩`.
    pub fn hartley_state(&self, h: usize) -> ActionState {
        let scale = 1.0 / (self.order as f64).sqrt();
        self.state_from(|g| Complex64::new(scale * cas(angle(g * h, self.order)), 0.0))
    }

    /// `Σ_g f(g) |g * x₀⟩` for an arbitrary normalizable `f`.
    pub fn state_from_group_function(&self, f: impl Fn(usize) -> Complex64) -> Result<ActionState> {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.order];
        let x0 = self.base_point();
        for g in 0..self.order {
            amps[self.act_unchecked(g, x0)] = f(g);
        }
        Ok(ActionState::wrap(self, StateVector::normalized(amps)?))
    }

    /// `cos(2πgh/N)` profile, the image of a Hartley state under the
    /// distinguisher's shift.
    pub fn cosine_state(&self, h: usize) -> Result<ActionState> {
        self.state_from_group_function(|g| {
            Complex64::new(
                (TAU * ((g * h) % self.order) as f64 / self.order as f64).cos(),
                0.0,
            )
        })
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(order));
    }
    Ok(())
}

/// A state over `C^X`, tagged with the action that owns the labels.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionState {
    state: StateVector,
    order: usize,
    fingerprint: u64,
}

impl ActionState {
    fn wrap(ga: &ToyGroupAction, state: StateVector) -> Self {
        ActionState {
            state,
            order: ga.order,
            fingerprint: ga.fingerprint(),
        }
    }

    pub fn new(ga: &ToyGroupAction, state: StateVector) -> Result<Self> {
        if state.dim() != ga.order {
            return Err(Error::DimensionMismatch {
                expected: ga.order,
                found: state.dim(),
            });
        }
        Ok(ActionState::wrap(ga, state))
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn belongs_to(&self, ga: &ToyGroupAction) -> bool {
        self.order == ga.order && self.fingerprint == ga.fingerprint()
    }

    pub(crate) fn check_owner(&self, ga: &ToyGroupAction) -> Result<()> {
        if !self.belongs_to(ga) {
            return Err(Error::ActionMismatch);
        }
        Ok(())
    }
}
