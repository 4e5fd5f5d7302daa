//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use hartley_core::money::{
    distinguish_sign, gen_hartley, CmpIndex, Distinguisher, Flavor, VerifierRun,
};
use hartley_core::rng;
use hartley_core::serial::recover_serial;
use hartley_core::transforms::{
    analytic_count_model, build_qht_recursive, build_qht_via_qft, build_qst1, fit_quadratic,
    qst1_apply, ModelKind, TransformCircuit,
};
use hartley_core::walk::{build_walk_isometry, exact_ctqw, WalkSpec};
use hartley_core::{Complex64, StateVector, ToyGroupAction};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const TRANSFORM_TOL: f64 = 1e-9;
const INVOLUTION_TOL: f64 = 1e-9;
const RECURSIVE_A: (f64, f64) = (1.8, 2.2);
const QFT_BASED_A: (f64, f64) = (2.3, 2.7);
const VERIFIER_SIGMAS: f64 = 5.0;
const VERIFIER_TRIALS: usize = 40_000;
const POST_FIDELITY_TOL: f64 = 1e-9;
const TWIST_TOL: f64 = 1e-10;
const DISTINGUISHER_TRIALS: usize = 10_000;
const EXPM_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-9;
const RECOVERY_MIN_SUCCESSES: usize = 19;
const RECOVERY_FIDELITY_TOL: f64 = 1e-6;
const GRAM_TOL: f64 = 1e-10;
const REFLECTION_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn cas(x: f64) -> f64 {
    x.cos() + x.sin()
}

/// Hartley kernel written out entry by entry.
fn hartley_oracle(n_pts: usize) -> DMatrix<Complex64> {
    let s = 1.0 / (n_pts as f64).sqrt();
    DMatrix::from_fn(n_pts, n_pts, |r, col| {
        c(s * cas(TAU * (r * col) as f64 / n_pts as f64))
    })
}

/// Type-I sine kernel on indices `1..N`.
fn sine_oracle(n_pts: usize) -> DMatrix<Complex64> {
    let s = (2.0 / n_pts as f64).sqrt();
    DMatrix::from_fn(n_pts - 1, n_pts - 1, |r, col| {
        c(s * (PI * ((r + 1) * (col + 1)) as f64 / n_pts as f64).sin())
    })
}

/// `Σ_g amp(g)|g * x₀⟩` built from the public action.
fn orbit_state(ga: &ToyGroupAction, amp: impl Fn(usize) -> Complex64) -> StateVector {
    let x0 = ga.base_point();
    let mut amps = vec![c(0.0); ga.order()];
    for g in 0..ga.order() {
        amps[ga.act(g, x0).unwrap()] = amp(g);
    }
    StateVector::normalized(amps).unwrap()
}

fn hartley_ref(ga: &ToyGroupAction, h: usize) -> StateVector {
    let order = ga.order();
    orbit_state(ga, |g| {
        c(cas(TAU * ((g * h) % order) as f64 / order as f64))
    })
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        let oracle = hartley_oracle(1 << n);
        let builds: [fn(usize) -> hartley_core::Result<TransformCircuit>; 2] =
            [build_qht_recursive, build_qht_via_qft];
        for build in builds {
            let (u, leak) = build(n).unwrap().induced_unitary().unwrap();
            worst = worst.max(max_diff(&u, &oracle)).max(leak);
        }
    }
    for n in 2..=8 {
        let big_n = 1usize << n;
        // Input 0 lies outside the transform's domain; every other column
        // must land on indices 1..N with the ancillas back in |0⟩.
        let t = build_qst1(n).unwrap();
        let oracle = sine_oracle(big_n);
        for a in 1..big_n {
            let out = qst1_apply(&t, a).unwrap();
            worst = worst.max(out.amplitudes()[0].norm());
            for y in 1..big_n {
                worst = worst.max((out.amplitudes()[y] - oracle[(y - 1, a - 1)]).norm());
            }
        }
    }
    let detail = format!("max error {worst:.2e} (tol {TRANSFORM_TOL:.0e})");
    if worst <= TRANSFORM_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut r = rng::stream(2002, 0);
    for n in 1..=8 {
        for t in [
            build_qht_recursive(n).unwrap(),
            build_qht_via_qft(n).unwrap(),
        ] {
            let twice = t.circuit.then(&t.circuit).unwrap();
            for _ in 0..100 {
                let psi = StateVector::random(n, &mut r).pad(t.n_ancilla);
                let mut s = psi.clone();
                twice.apply(&mut s).unwrap();
                worst = worst.max(s.max_diff(&psi));
            }
        }
    }
    let detail =
        format!("max |QHT²ψ − ψ| {worst:.2e} over 100 states per n ≤ 8 (tol {INVOLUTION_TOL:.0e})");
    if worst <= INVOLUTION_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Outcome {
    let tallies =
        |build: fn(usize) -> hartley_core::Result<TransformCircuit>| -> Vec<(usize, u64)> {
            (4..=12)
                .map(|n| (n, build(n).unwrap().tally().total()))
                .collect()
        };
    let rec = fit_quadratic(&tallies(build_qht_recursive)).unwrap();
    let qft = fit_quadratic(&tallies(build_qht_via_qft)).unwrap();
    let ratios_exact = (4..=12).all(|n| {
        analytic_count_model(ModelKind::QftBasedQht, n)
            / analytic_count_model(ModelKind::RecursiveQht, n)
            == 1.25
    });
    let in_band = |a: f64, band: (f64, f64)| a >= band.0 && a <= band.1;
    let detail = format!(
        "recursive a={:.4} in {:?}, qft-based a={:.4} in {:?}, analytic ratio 1.25 exact: {}",
        rec.a, RECURSIVE_A, qft.a, QFT_BASED_A, ratios_exact
    );
    if in_band(rec.a, RECURSIVE_A) && in_band(qft.a, QFT_BASED_A) && ratios_exact {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4() -> Outcome {
    let order = 64;
    let ga = ToyGroupAction::new(order, 404).unwrap();
    let cmp = CmpIndex::new(&ga, Flavor::Hartley).unwrap();
    let mut r = rng::stream(4004, 0);
    let mut worst_sigma: f64 = 0.0;
    let mut worst_fidelity: f64 = 0.0;
    for i in 0..50 {
        let h = 2 * r.random_range(0..order / 2) + 1;
        let plus = hartley_ref(&ga, h);
        let minus = hartley_ref(&ga, order - h);
        let noise = StateVector::random(ga.n_qubits(), &mut r);
        // Spread of weights: pure notes, pure wrong-sign notes and mixes.
        let (wp, wm, wn) = match i {
            0 => (1.0, 0.0, 0.0),
            1 => (0.0, 1.0, 0.0),
            2 => (0.0, 0.0, 1.0),
            _ => (r.random::<f64>(), r.random::<f64>(), r.random::<f64>()),
        };
        let phase = |w: f64, r: &mut rng::SimRng| Complex64::from_polar(w, r.random::<f64>() * TAU);
        let (cp, cm, cn) = (phase(wp, &mut r), phase(wm, &mut r), phase(wn, &mut r));
        let amps: Vec<Complex64> = (0..order)
            .map(|y| {
                cp * plus.amplitudes()[y] + cm * minus.amplitudes()[y] + cn * noise.amplitudes()[y]
            })
            .collect();
        let psi = StateVector::normalized(amps).unwrap();
        let expected: f64 = psi
            .amplitudes()
            .iter()
            .zip(plus.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr();

        let run =
            VerifierRun::prepare_with(&ga, &cmp, &Distinguisher::new(&ga, h).unwrap(), h, &psi)
                .unwrap();
        let mut trial_rng = rng::stream(4004, 1 + i as u64);
        let mut accepted = 0usize;
        for _ in 0..VERIFIER_TRIALS {
            let v = run.sample(&mut trial_rng);
            if v.accepted {
                accepted += 1;
                let post = v.post_state.expect("accepted run keeps its state");
                worst_fidelity = worst_fidelity.max(1.0 - post.fidelity(&plus).unwrap());
            }
        }
        let t = VERIFIER_TRIALS as f64;
        let p = expected.clamp(1.0 / t, 1.0 - 1.0 / t);
        let sigma = (p * (1.0 - p) / t).sqrt();
        worst_sigma = worst_sigma.max((accepted as f64 / t - expected).abs() / sigma);
    }
    let detail = format!(
        "worst deviation {worst_sigma:.2}σ (limit {VERIFIER_SIGMAS}σ), worst post-state infidelity {worst_fidelity:.2e} (tol {POST_FIDELITY_TOL:.0e})"
    );
    if worst_sigma <= VERIFIER_SIGMAS && worst_fidelity <= POST_FIDELITY_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut wrong = 0usize;
    let mut total = 0usize;
    for order in [16, 64] {
        let ga = ToyGroupAction::new(order, 505).unwrap();
        let twist = ga.twist_unitary();
        for h in 0..order {
            let mut s = ga.hartley_state(h).into_state();
            s.apply(&twist).unwrap();
            worst = worst.max(s.max_diff(&hartley_ref(&ga, (order - h) % order)));
        }
        for h in (1..order).step_by(2) {
            for (input, want) in [(h, 0u8), (order - h, 1u8)] {
                let note = ga.hartley_state(input);
                for k in 0..DISTINGUISHER_TRIALS {
                    let seed = ((order * order + input) * DISTINGUISHER_TRIALS + k) as u64;
                    let (bit, _) = distinguish_sign(&ga, &note, h, seed).unwrap();
                    total += 1;
                    if bit != want {
                        wrong += 1;
                    }
                }
            }
        }
    }
    let detail = format!(
        "twist error {worst:.2e} (tol {TWIST_TOL:.0e}), distinguisher {}/{} correct",
        total - wrong,
        total
    );
    if worst <= TWIST_TOL && wrong == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// `e^{M}` by scaling and squaring with a Taylor series.
fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = norm.max(1.0).log2().ceil() as u32 + 4;
    let scaled = m / c(2f64.powi(squarings as i32));
    let dim = m.nrows();
    let mut result = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = result.clone();
    for k in 1..40 {
        term = &term * &scaled / c(k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn criterion_6() -> Outcome {
    let mut worst_expm: f64 = 0.0;
    let mut worst_eigen: f64 = 0.0;
    let cases: [(usize, &[usize]); 6] = [
        (4, &[1, 3]),
        (8, &[1, 7, 4]),
        (16, &[3, 13]),
        (32, &[1, 31, 5, 27, 16]),
        (64, &[1, 63]),
        (64, &[3, 61, 10, 54, 32]),
    ];
    for (order, gens) in cases {
        let ga = ToyGroupAction::new(order, 606 + order as u64).unwrap();
        // Adjacency enumerated over labels: y ~ q * y.
        let mut adj = DMatrix::<Complex64>::zeros(order, order);
        for y in 0..order {
            for &q in gens {
                adj[(ga.act(q, y).unwrap(), y)] += c(1.0);
            }
        }
        for t in [0.3, FRAC_PI_2, 2.7] {
            let spec = WalkSpec::new(order, gens, t).unwrap();
            let w = exact_ctqw(&ga, &spec).unwrap();
            let oracle = expm(&(&adj * Complex64::new(0.0, t)));
            let got = DMatrix::from_row_slice(order, order, &w.row_major());
            worst_expm = worst_expm.max(max_diff(&got, &oracle));
            for h in 0..order {
                let note = hartley_ref(&ga, h);
                let v = DVector::from_column_slice(note.amplitudes());
                let lambda: f64 = gens
                    .iter()
                    .map(|&q| (TAU * (h * q) as f64 / order as f64).cos())
                    .sum();
                worst_eigen = worst_eigen.max((&adj * &v - &v * c(lambda)).camax());
                let evolved = w.apply(&note).unwrap();
                let want = &v * Complex64::from_polar(1.0, lambda * t);
                let got = DVector::from_column_slice(evolved.amplitudes());
                worst_eigen = worst_eigen.max((got - want).camax());
            }
        }
    }
    let detail = format!(
        "expm error {worst_expm:.2e} (tol {EXPM_TOL:.0e}), eigen residual {worst_eigen:.2e} (tol {EIGEN_TOL:.0e})"
    );
    if worst_expm <= EXPM_TOL && worst_eigen <= EIGEN_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let ga = ToyGroupAction::new(64, 707).unwrap();
    let mut successes = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let note = gen_hartley(&ga, seed).unwrap();
        match recover_serial(&ga, &note.note, 9, 7000 + seed) {
            Ok((est, post)) => {
                if est.recovered_h == note.serial {
                    successes += 1;
                }
                worst = worst.max(1.0 - post.state().fidelity(note.note.state()).unwrap());
            }
            Err(_) => worst = worst.max(1.0),
        }
    }
    let detail = format!(
        "{successes}/20 recovered (need {RECOVERY_MIN_SUCCESSES}), worst infidelity {worst:.2e} (tol {RECOVERY_FIDELITY_TOL:.0e})"
    );
    if successes >= RECOVERY_MIN_SUCCESSES && worst <= RECOVERY_FIDELITY_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Outcome {
    let order = 16;
    let two_n = 2 * order;
    let ga = ToyGroupAction::new(order, 808).unwrap();
    let mut worst_gram: f64 = 0.0;
    let mut worst_refl: f64 = 0.0;
    let mut r = rng::stream(8008, 0);
    for gens in [&[1usize, 15][..], &[3, 13, 8][..], &[1, 15, 5, 11][..]] {
        let spec = WalkSpec::new(order, gens, 1.0).unwrap();
        let iso = build_walk_isometry(&ga, &spec).unwrap();
        let t = iso.isometry_matrix().unwrap();
        // |φ_y⟩ = |y,0⟩ ⊗ |Q|^{-1/2} Σ_q |q*y,0⟩, |φ_{y+N}⟩ = |y,1⟩|0,1⟩.
        let mut oracle = DMatrix::<Complex64>::zeros(two_n * two_n, two_n);
        let amp = 1.0 / (gens.len() as f64).sqrt();
        for y in 0..order {
            for &q in gens {
                oracle[(y + two_n * ga.act(q, y).unwrap(), y)] += c(amp);
            }
            oracle[(y + order + two_n * order, y + order)] = c(1.0);
        }
        let gram = t.adjoint() * &t;
        worst_gram = worst_gram
            .max(max_diff(&gram, &DMatrix::identity(two_n, two_n)))
            .max(max_diff(&t, &oracle));
        let refl =
            &oracle * oracle.adjoint() * c(2.0) - DMatrix::identity(two_n * two_n, two_n * two_n);
        for _ in 0..100 {
            let psi = StateVector::random(iso.layout.y().len() * 2 + 2, &mut r);
            let mut s = psi.pad(iso.layout.k);
            iso.reflection.apply(&mut s).unwrap();
            let (inside, leak) = s.unpad(iso.layout.k);
            let want = &refl * DVector::from_column_slice(psi.amplitudes());
            let got = DVector::from_column_slice(inside.amplitudes());
            worst_refl = worst_refl.max((got - want).camax()).max(leak);
        }
    }
    let detail = format!(
        "T†T error {worst_gram:.2e} (tol {GRAM_TOL:.0e}), reflection error {worst_refl:.2e} over 100 states (tol {REFLECTION_TOL:.0e})"
    );
    if worst_gram <= GRAM_TOL && worst_refl <= REFLECTION_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("transform correctness", criterion_1),
        ("Hartley involution", criterion_2),
        ("gate-count fit", criterion_3),
        ("verifier acceptance statistics", criterion_4),
        ("twist and sign distinguisher", criterion_5),
        ("exact walk vs matrix exponential", criterion_6),
        ("serial recovery", criterion_7),
        ("walk isometry structure", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {} PASS {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
