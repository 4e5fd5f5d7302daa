//! Dense state-vector simulation of real quantum transforms and the
//! group-action quantum money scheme built on them.
//!
//! The crate is layered bottom-up:
//!
//! * [`statevec`], [`gate`], [`circuit`]: the simulator and its gate-count
//!   instrumentation.
//! * [`classical`]: dense reference matrices for every transform.
//! * [`transforms`]: circuit builders for QFT, two QHT constructions and the
//!   type-I quantum sine transform, plus the analytic cost model.
//! * [`action`]: a toy regular action of `Z_N` with twists.
//! * [`money`]: Fourier and Hartley banknotes, `cmpIndex`, the sign
//!   distinguisher and the twist-based verifier.
//! * [`walk`], [`serial`]: Cayley-graph walks over the action and
//!   serial-number recovery by phase estimation.
//!
//! Qubit 0 is always the least significant bit of a basis-state index.

pub mod action;
pub mod circuit;
pub mod classical;
pub mod error;
pub mod gate;
pub mod money;
pub mod rng;
pub mod serial;
pub mod statevec;
pub mod transforms;
pub mod walk;

pub use num_complex::Complex64;

pub use action::{ActionState, ToyGroupAction};
pub use circuit::{run_circuit, Circuit, GateTally};
pub use error::{Error, Result};
pub use gate::{Control, Gate};
pub use statevec::{inner_product, measure_observable, Measurement, Observable2, StateVector};

/// Unitarity tolerance for 2x2 gate blocks.
pub const EPS_UNITARY: f64 = 1e-12;
/// Max-norm tolerance for state and circuit equality.
pub const EPS_STATE: f64 = 1e-9;
/// Normalization tolerance.
pub const EPS_PROB: f64 = 1e-10;
/// Branches below this probability are treated as impossible.
pub const EPS_BRANCH: f64 = 1e-14;

/// Environment variable capping the number of simulated qubits.
pub const QUBIT_BUDGET_ENV: &str = "HARTLEY_MAX_QUBITS";
const DEFAULT_QUBIT_BUDGET: usize = 24;

/// Largest register the simulator will allocate, honouring
/// [`QUBIT_BUDGET_ENV`] when it is set to a valid integer.
pub fn qubit_budget() -> usize {
    std::env::var(QUBIT_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_QUBIT_BUDGET)
}

pub(crate) fn check_budget(qubits: usize) -> Result<()> {
    let limit = qubit_budget();
    if qubits > limit {
        return Err(Error::BudgetExceeded { qubits, limit });
    }
    Ok(())
}

/// `log2(n)` when `n` is a power of two.
pub fn log2_exact(n: usize) -> Result<usize> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros() as usize)
}
