//! The four subcommands. Each returns a serializable report; the caller
//! wraps it in the versioned envelope.

use hartley_core::classical::{
    dft_matrix, dht_matrix, dst_dct_matrix, max_abs_diff, TransformLabel,
};
use hartley_core::money::{gen_hartley, ver_new, BanknoteDocument, VerdictTrace};
use hartley_core::rng;
use hartley_core::serial::{
    recover_serial, u_schedule, RecoveryManifest, SparseSimulationCost, RECOVERY_TIME,
};
use hartley_core::transforms::{
    analytic_count_model, build_inverse_qft, build_qft, build_qht_recursive, build_qht_via_qft,
    build_qst1, fit_quadratic, ModelKind, QuadraticFit, TransformCircuit,
};
use hartley_core::walk::WalkSpec;
use hartley_core::{qubit_budget, Error, StateVector, ToyGroupAction};
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const TRANSFORM_CHECK_MAX_N: usize = 10;
pub const GATE_BENCH_MAX_N: usize = 12;
pub const DEMO_MAX_ORDER: usize = 256;
pub const RECOVER_MAX_BITS: usize = 10;
pub const TRANSFORM_TOLERANCE: f64 = 1e-9;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Precondition(String),
    Budget(String),
    Ambiguous(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::AmbiguousSerial { .. } => Failure::Ambiguous(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

fn check_budget(qubits: usize) -> Result<(), Failure> {
    let limit = qubit_budget();
    if qubits > limit {
        return Err(Error::BudgetExceeded { qubits, limit }.into());
    }
    Ok(())
}

fn check_range(what: &str, value: usize, min: usize, max: usize) -> Result<(), Failure> {
    if value < min || value > max {
        return Err(Failure::Precondition(format!(
            "{what} = {value} outside {min}..={max}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformCheckRow {
    pub circuit: String,
    pub reference: String,
    pub max_error: f64,
    pub ancilla_residual: f64,
    pub gate_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformCheckReport {
    pub n: usize,
    pub tolerance: f64,
    pub rows: Vec<TransformCheckRow>,
    pub passed: bool,
}

fn row(
    name: &str,
    reference: &str,
    t: &TransformCircuit,
    oracle: &DMatrix<hartley_core::Complex64>,
) -> Result<TransformCheckRow, Failure> {
    let (u, leak) = t.induced_unitary()?;
    Ok(TransformCheckRow {
        circuit: name.to_string(),
        reference: reference.to_string(),
        max_error: max_abs_diff(&u, oracle),
        ancilla_residual: leak,
        gate_count: t.tally().total(),
    })
}

/// Every transform circuit at size `2^n` against its classical matrix.
pub fn transform_check(n: usize) -> Result<TransformCheckReport, Failure> {
    check_range("n", n, 1, TRANSFORM_CHECK_MAX_N)?;
    check_budget(n + 2)?;
    let big_n = 1usize << n;
    let dft = dft_matrix(big_n)?.matrix;
    let dht = dht_matrix(big_n)?.matrix;
    let mut rows = vec![
        row("qft", "DFT", &build_qft(n)?, &dft)?,
        row(
            "inverse_qft",
            "DFT^-1",
            &build_inverse_qft(n)?,
            &dft.adjoint(),
        )?,
        row("qht_recursive", "DHT", &build_qht_recursive(n)?, &dht)?,
        row("qht_via_qft", "DHT", &build_qht_via_qft(n)?, &dht)?,
    ];

    // The sine transform acts on inputs 1..N only.
    let qst = build_qst1(n)?;
    let sine = dst_dct_matrix(TransformLabel::SineI, big_n)?.matrix;
    let (mut err, mut leak) = (0.0f64, 0.0f64);
    for a in 1..big_n {
        let mut s = StateVector::basis(qst.n_qubits(), a);
        qst.circuit.apply(&mut s)?;
        let (data, out) = s.unpad(qst.n_ancilla);
        leak = leak.max(out);
        for (y, amp) in data.amplitudes().iter().enumerate() {
            let want = if y == 0 { 0.0 } else { sine[(y - 1, a - 1)].re };
            err = err.max((amp - want).norm());
        }
    }
    rows.push(TransformCheckRow {
        circuit: "qst1".to_string(),
        reference: TransformLabel::SineI.to_string(),
        max_error: err,
        ancilla_residual: leak,
        gate_count: qst.tally().total(),
    });
    let passed = rows
        .iter()
        .all(|r| r.max_error <= TRANSFORM_TOLERANCE && r.ancilla_residual <= TRANSFORM_TOLERANCE);
    Ok(TransformCheckReport {
        n,
        tolerance: TRANSFORM_TOLERANCE,
        rows,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateBenchRow {
    pub n: usize,
    pub tally_recursive: u64,
    pub tally_qft_based: u64,
    #[serde(rename = "model_2n2")]
    pub model_recursive: f64,
    #[serde(rename = "model_2.5n2")]
    pub model_qft_based: f64,
    /// Measured recursive tally over measured QFT-based tally.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateBenchFit {
    pub n_min: usize,
    pub recursive: QuadraticFit,
    pub qft_based: QuadraticFit,
    /// Ratio of the fitted leading coefficients.
    pub leading_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateBenchReport {
    pub rows: Vec<GateBenchRow>,
    pub fit: Option<GateBenchFit>,
}

/// Below this size the base cases dominate the tallies, so the quadratic
/// fit starts here when enough rows exist.
const FIT_MIN_N: usize = 4;

pub fn gate_bench(n_max: usize) -> Result<GateBenchReport, Failure> {
    check_range("n", n_max, 1, GATE_BENCH_MAX_N)?;
    let rows: Vec<GateBenchRow> = (1..=n_max)
        .map(|n| {
            let rec = build_qht_recursive(n)?.tally().total();
            let qft = build_qht_via_qft(n)?.tally().total();
            Ok(GateBenchRow {
                n,
                tally_recursive: rec,
                tally_qft_based: qft,
                model_recursive: analytic_count_model(ModelKind::RecursiveQht, n),
                model_qft_based: analytic_count_model(ModelKind::QftBasedQht, n),
                ratio: rec as f64 / qft as f64,
            })
        })
        .collect::<Result<_, Error>>()?;
    let n_min = if n_max >= FIT_MIN_N + 2 { FIT_MIN_N } else { 1 };
    let points = |pick: fn(&GateBenchRow) -> u64| -> Vec<(usize, u64)> {
        rows.iter()
            .filter(|r| r.n >= n_min)
            .map(|r| (r.n, pick(r)))
            .collect()
    };
    let fit = match (
        fit_quadratic(&points(|r| r.tally_recursive)),
        fit_quadratic(&points(|r| r.tally_qft_based)),
    ) {
        (Ok(recursive), Ok(qft_based)) => Some(GateBenchFit {
            n_min,
            leading_ratio: recursive.a / qft_based.a,
            recursive,
            qft_based,
        }),
        _ => None,
    };
    Ok(GateBenchReport { rows, fit })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoVerdict {
    pub presented: String,
    pub claimed_serial: usize,
    pub verdict: String,
    pub trace: VerdictTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoneyTranscript {
    #[serde(rename = "N")]
    pub order: usize,
    pub seed: u64,
    pub banknote: BanknoteDocument,
    pub verifications: Vec<DemoVerdict>,
}

/// Mint a note, then verify it, a tampered note and the twisted note.
pub fn money_demo(order: usize, seed: u64) -> Result<MoneyTranscript, Failure> {
    check_range(
        "N",
        order,
        hartley_core::money::MIN_HARTLEY_ORDER,
        DEMO_MAX_ORDER,
    )?;
    let ga = ToyGroupAction::new(order, seed)?;
    check_budget(2 * ga.n_qubits() + 1)?;
    let note = gen_hartley(&ga, seed)?;
    let h = note.serial;

    let tampered = ga.hartley_state((h + 2) % order).into_state();
    let mut twisted = note.note.state().clone();
    twisted.apply(&ga.twist_unitary())?;

    let mut seeds = rng::stream(seed, 1);
    let mut verdicts = Vec::new();
    for (label, state) in [
        ("genuine", note.note.state().clone()),
        ("tampered", tampered),
        ("twisted", twisted),
    ] {
        let trace = ver_new(&ga, h, &state, seeds.random())?;
        verdicts.push(DemoVerdict {
            presented: label.to_string(),
            claimed_serial: h,
            verdict: if trace.accepted { "accept" } else { "reject" }.to_string(),
            trace,
        });
    }
    Ok(MoneyTranscript {
        order,
        seed,
        banknote: note.document(),
        verifications: verdicts,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkRecoverReport {
    pub manifest: RecoveryManifest,
    pub success: bool,
    pub simulation_cost: Vec<SparseSimulationCost>,
}

/// Cost records use this target error.
const COST_EPSILON: f64 = 1e-3;

/// Mint a note and recover its serial from the note alone.
pub fn walk_recover(order: usize, bits: usize, seed: u64) -> Result<WalkRecoverReport, Failure> {
    check_range(
        "N",
        order,
        hartley_core::money::MIN_HARTLEY_ORDER,
        DEMO_MAX_ORDER,
    )?;
    check_range("bits", bits, 1, RECOVER_MAX_BITS)?;
    let ga = ToyGroupAction::new(order, seed)?;
    check_budget(ga.n_qubits() + bits)?;
    let note = gen_hartley(&ga, seed)?;
    let (estimate, post) = recover_serial(&ga, &note.note, bits, seed)?;
    let fidelity = post.state().fidelity(note.note.state())?;
    let manifest = RecoveryManifest::new(order, seed, bits, note.serial, &estimate, fidelity);
    let simulation_cost = u_schedule(order)
        .into_iter()
        .map(|u| {
            Ok(SparseSimulationCost::for_walk(
                &WalkSpec::pair(order, u, RECOVERY_TIME)?,
                COST_EPSILON,
            ))
        })
        .collect::<Result<_, Error>>()?;
    Ok(WalkRecoverReport {
        success: manifest.succeeded(),
        manifest,
        simulation_cost,
    })
}
