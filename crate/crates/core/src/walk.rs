//! Cayley-graph walks over the toy action: the exact continuous-time walk
//! `e^{iAt}` and the discrete-time isometry walk `iS(2TT† − 1)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::action::{ActionState, ToyGroupAction};
use crate::check_budget;
use crate::circuit::Circuit;
use crate::classical::angle;
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::statevec::StateVector;

/// Largest generating set accepted.
pub const MAX_GENERATORS: usize = 16;
/// Largest group order for which dense walk matrices are built.
pub const MAX_WALK_ORDER: usize = 4096;

/// A symmetric generating set `Q ⊂ Z_N` and an evolution time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkSpec {
    order: usize,
    generators: Vec<usize>,
    time: f64,
}

impl WalkSpec {
    /// `generators` are reduced mod `order` and deduplicated; the set must
    /// be closed under negation.
    pub fn new(order: usize, generators: &[usize], time: f64) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(order));
        }
        let mut q: Vec<usize> = generators.iter().map(|g| g % order).collect();
        q.sort_unstable();
        q.dedup();
        if q.is_empty() {
            return Err(Error::EmptyFactors);
        }
        if q.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(q.len()));
        }
        if let Some(&g) = q
            .iter()
            .find(|&&g| q.binary_search(&((order - g) % order)).is_err())
        {
            return Err(Error::AsymmetricGenerators(g));
        }
        Ok(WalkSpec {
            order,
            generators: q,
            time,
        })
    }

    /// `Q = {u, −u}`.
    pub fn pair(order: usize, u: usize, time: f64) -> Result<Self> {
        WalkSpec::new(order, &[u, order - u % order], time)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Same generators, evolution time `time`.
    pub fn with_time(&self, time: f64) -> WalkSpec {
        WalkSpec {
            time,
            ..self.clone()
        }
    }

    /// `λ_h = Σ_{q∈Q} cos(2πhq/N)`.
    pub fn eigenvalue(&self, h: usize) -> f64 {
        self.generators
            .iter()
            .map(|&q| angle(h * q, self.order).cos())
            .sum()
    }
}

/// `(h, λ_h)` for every `h ∈ Z_N`.
pub fn adjacency_spectrum(spec: &WalkSpec) -> Vec<(usize, f64)> {
    (0..spec.order).map(|h| (h, spec.eigenvalue(h))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    ExactCtqw,
    DiscreteIsometry,
}

#[derive(Clone, Debug)]
pub struct WalkOperator {
    pub spec: WalkSpec,
    pub mode: WalkMode,
    pub matrix: DMatrix<Complex64>,
}

impl WalkOperator {
    pub fn unitarity_error(&self) -> f64 {
        let d = self.matrix.nrows();
        let prod = self.matrix.adjoint() * &self.matrix;
        crate::classical::max_abs_diff(&prod, &DMatrix::identity(d, d))
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.ncols(),
                found: state.dim(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        StateVector::from_amplitudes((&self.matrix * v).as_slice().to_vec())
    }

    /// Row-major entries, the layout dense gates expect.
    pub fn row_major(&self) -> Vec<Complex64> {
        self.matrix.transpose().as_slice().to_vec()
    }
}

/// `e^{iAt} = Σ_h e^{iλ_h t} |F_h⟩⟨F_h|` over the Fourier states of `ga`.
/// The result is circulant in group coordinates, so only `N` kernel values
/// are summed.
pub fn exact_ctqw(ga: &ToyGroupAction, spec: &WalkSpec) -> Result<WalkOperator> {
    let order = ga.order();
    if spec.order != order {
        return Err(Error::ActionMismatch);
    }
    if order > MAX_WALK_ORDER {
        return Err(Error::OutOfRange {
            what: "N",
            value: order,
            min: 2,
            max: MAX_WALK_ORDER,
        });
    }
    let phases: Vec<Complex64> = (0..order)
        .map(|h| Complex64::from_polar(1.0, spec.eigenvalue(h) * spec.time))
        .collect();
    let kernel: Vec<Complex64> = (0..order)
        .map(|d| {
            phases
                .iter()
                .enumerate()
                .map(|(h, p)| p * Complex64::from_polar(1.0, angle(d * h, order)))
                .sum::<Complex64>()
                / order as f64
        })
        .collect();
    let x0 = ga.base_point();
    let labels: Vec<usize> = (0..order).map(|g| ga.act(g, x0)).collect::<Result<_>>()?;
    let mut matrix = DMatrix::zeros(order, order);
    for (g, &row) in labels.iter().enumerate() {
        for (g2, &col) in labels.iter().enumerate() {
            matrix[(row, col)] = kernel[(g + order - g2) % order];
        }
    }
    Ok(WalkOperator {
        spec: spec.clone(),
        mode: WalkMode::ExactCtqw,
        matrix,
    })
}

/// Applies the exact walk to an action state.
pub fn evolve(walk: &WalkOperator, state: &ActionState) -> Result<StateVector> {
    walk.apply(state.state())
}

/// Qubit layout of the discrete walk register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkLayout {
    /// Qubits per `X` label.
    pub n: usize,
    /// Qubits of the generator-index register.
    pub k: usize,
}

impl WalkLayout {
    pub fn y(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn b(&self) -> usize {
        self.n
    }

    pub fn y2(&self) -> Vec<usize> {
        (self.n + 1..2 * self.n + 1).collect()
    }

    pub fn b2(&self) -> usize {
        2 * self.n + 1
    }

    pub fn q(&self) -> Vec<usize> {
        (2 * self.n + 2..2 * self.n + 2 + self.k).collect()
    }

    pub fn total(&self) -> usize {
        2 * self.n + 2 + self.k
    }

    /// Dimension of `C^{2N} ⊗ C^{2N}` (generator register in `|0⟩`).
    pub fn pair_dim(&self) -> usize {
        1 << (2 * self.n + 2)
    }
}

/// Circuits for `U_T`, the reflection `2TT† − 1` and `W = iS(2TT† − 1)`.
#[derive(Clone, Debug)]
pub struct WalkIsometry {
    pub spec: WalkSpec,
    pub layout: WalkLayout,
    pub prepare: Circuit,
    pub reflection: Circuit,
    pub walk: Circuit,
}

/// Dense `V_Q` with `V_Q|0⟩ = |Q|^{-1/2} Σ_{i<|Q|} |i⟩`: a Householder
/// reflection taking `e₀` to the uniform vector on the first `|Q|` entries.
fn uniform_preparation(dim: usize, count: usize) -> Vec<Complex64> {
    let mut target = vec![0.0; dim];
    target[..count]
        .iter_mut()
        .for_each(|t| *t = 1.0 / (count as f64).sqrt());
    if count == 1 {
        return (0..dim * dim)
            .map(|i| Complex64::new(if i / dim == i % dim { 1.0 } else { 0.0 }, 0.0))
            .collect();
    }
    // H = I − 2vvᵀ/(vᵀv) with v = e₀ − target.
    let mut v = target.iter().map(|t| -t).collect::<Vec<_>>();
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    (0..dim * dim)
        .map(|i| {
            let (r, c) = (i / dim, i % dim);
            let id = if r == c { 1.0 } else { 0.0 };
            Complex64::new(id - 2.0 * v[r] * v[c] / vv, 0.0)
        })
        .collect()
}

/// Builds the walk isometry circuits for `spec` over `ga` (with `K = 1`).
pub fn build_walk_isometry(ga: &ToyGroupAction, spec: &WalkSpec) -> Result<WalkIsometry> {
    let order = ga.order();
    if spec.order != order {
        return Err(Error::ActionMismatch);
    }
    let gens = spec.generators();
    let k = (usize::BITS - (gens.len() - 1).leading_zeros()).max(1) as usize;
    let layout = WalkLayout {
        n: ga.n_qubits(),
        k,
    };
    check_budget(layout.total())?;
    let (y, b, y2, b2, q) = (layout.y(), layout.b(), layout.y2(), layout.b2(), layout.q());
    let on_b0 = [Control::zero(b)];
    let qdim = 1usize << k;

    let mut prepare = Circuit::new(layout.total());
    prepare.push(Gate::dense(
        q.clone(),
        on_b0.to_vec(),
        uniform_preparation(qdim, gens.len()),
        "V_Q",
    )?)?;

    // V₁: y2 ^= q_i * y.
    let joint: Vec<usize> = y.iter().chain(&y2).chain(&q).copied().collect();
    let v1_map = (0..order * order * qdim)
        .map(|v| {
            let (yy, rest) = (v % order, v / order);
            let (yy2, i) = (rest % order, rest / order);
            let out2 = match gens.get(i) {
                Some(&g) => yy2 ^ ga.act(g, yy).expect("label in range"),
                None => yy2,
            };
            yy + order * (out2 + order * i)
        })
        .collect();
    prepare.push(Gate::permutation(joint.clone(), v1_map, "V_1")?.controlled_by(&on_b0)?)?;

    // V₂: q ^= i' where q_{i'} * y = y2.
    let mut lookup = vec![None; order * order];
    for (i, &g) in gens.iter().enumerate() {
        for yy in 0..order {
            let slot = &mut lookup[yy + order * ga.act(g, yy)?];
            if let Some(prev) = *slot {
                return Err(Error::RecoveryCollision(prev, i));
            }
            *slot = Some(i);
        }
    }
    let v2_map = (0..order * order * qdim)
        .map(|v| {
            let (pair, i) = (v % (order * order), v / (order * order));
            let i2 = lookup[pair].map_or(i, |found| i ^ found);
            pair + order * order * i2
        })
        .collect();
    prepare.push(Gate::permutation(joint, v2_map, "V_2")?.controlled_by(&on_b0)?)?;

    // U₁: |y,1⟩|0,0⟩ ↦ |y,1⟩|0,1⟩.
    prepare.push(Gate::cnot(b, b2)?)?;

    // 2Π − 1 with Π = |0⟩⟨0|_q ⊗ 1 ⊗ |0,0⟩⟨0,0|, as a sign flip on Π
    // followed by a global −1.
    let mut reflection = prepare.inverse();
    let zero_controls: Vec<Control> = q.iter().chain(&y2).map(|&c| Control::zero(c)).collect();
    let flip = [
        [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let tail = Circuit::from_gates(
        layout.total(),
        vec![
            Gate::controlled(zero_controls, b2, flip, "Z0")?,
            Gate::global_phase(0, std::f64::consts::PI),
        ],
    )?;
    reflection = reflection.then(&tail)?.then(&prepare)?;

    let mut swaps: Vec<Gate> = y
        .iter()
        .zip(&y2)
        .map(|(&a, &c)| Gate::swap(a, c))
        .collect::<Result<_>>()?;
    swaps.push(Gate::swap(b, b2)?);
    swaps.push(Gate::global_phase(0, std::f64::consts::FRAC_PI_2));
    let walk = reflection.then(&Circuit::from_gates(layout.total(), swaps)?)?;

    Ok(WalkIsometry {
        spec: spec.clone(),
        layout,
        prepare,
        reflection,
        walk,
    })
}

impl WalkIsometry {
    /// Restriction of `circuit` to the generator register in `|0⟩`, a
    /// `(2N)² × cols` block; also returns the largest leakage out of it.
    fn restricted(&self, circuit: &Circuit, cols: usize) -> Result<(DMatrix<Complex64>, f64)> {
        let rows = self.layout.pair_dim();
        let mut m = DMatrix::zeros(rows, cols);
        let mut leak: f64 = 0.0;
        for c in 0..cols {
            let mut s = StateVector::basis(self.layout.total(), c);
            circuit.apply(&mut s)?;
            let (inside, out) = s.unpad(self.layout.k);
            leak = leak.max(out);
            for (r, a) in inside.amplitudes().iter().enumerate() {
                m[(r, c)] = *a;
            }
        }
        Ok((m, leak))
    }

    /// `T: C^{2N} → C^{2N} ⊗ C^{2N}`; column `y + N·b`, row `j₁ + 2N·j₂`.
    pub fn isometry_matrix(&self) -> Result<DMatrix<Complex64>> {
        let (m, _) = self.restricted(&self.prepare, 2 << self.layout.n)?;
        Ok(m)
    }

    /// `iS(2TT† − 1)` on `C^{2N} ⊗ C^{2N}`.
    pub fn walk_operator(&self) -> Result<WalkOperator> {
        let (matrix, _) = self.restricted(&self.walk, self.layout.pair_dim())?;
        Ok(WalkOperator {
            spec: self.spec.clone(),
            mode: WalkMode::DiscreteIsometry,
            matrix,
        })
    }

    /// Norm that the reflection moves out of the `|0⟩` generator subspace,
    /// maximised over basis inputs.
    pub fn reflection_leakage(&self) -> Result<f64> {
        let (_, leak) = self.restricted(&self.reflection, self.layout.pair_dim())?;
        Ok(leak)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::max_abs_diff;
    use crate::rng;
    use std::f64::consts::FRAC_PI_2;

    fn ga(order: usize) -> ToyGroupAction {
        ToyGroupAction::new(order, 31).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        let spec = WalkSpec::pair(8, 1, 1.0).unwrap();
        assert!(spec.eigenvalue(2).abs() < 1e-15);
        assert_eq!(spec.eigenvalue(0), 2.0);
        let spec = WalkSpec::new(32, &[1, 31, 3, 29, 16], 1.0).unwrap();
        for (h, l) in adjacency_spectrum(&spec) {
            assert!((l - spec.eigenvalue((32 - h) % 32)).abs() < 1e-12);
        }
    }

    #[test]
    fn walk_spec_validation() {
        assert!(matches!(
            WalkSpec::new(8, &[1, 2, 7], 1.0),
            Err(Error::AsymmetricGenerators(2))
        ));
        let many: Vec<usize> = (1..=17).flat_map(|g| [g, 64 - g]).collect();
        assert!(matches!(
            WalkSpec::new(64, &many, 1.0),
            Err(Error::TooManyGenerators(_))
        ));
        assert!(WalkSpec::new(12, &[1, 11], 1.0).is_err());
        assert_eq!(WalkSpec::pair(8, 4, 1.0).unwrap().generators(), &[4]);
    }

    #[test]
    fn ctqw_basic_properties() {
        let g = ga(16);
        let spec = WalkSpec::pair(16, 3, 0.7).unwrap();
        let w = exact_ctqw(&g, &spec).unwrap();
        assert!(w.unitarity_error() <= 1e-10);
        let id = exact_ctqw(&g, &spec.with_time(0.0)).unwrap();
        assert!(max_abs_diff(&id.matrix, &DMatrix::identity(16, 16)) < 1e-12);
        let w2 = exact_ctqw(&g, &spec.with_time(1.1)).unwrap();
        let w3 = exact_ctqw(&g, &spec.with_time(1.8)).unwrap();
        assert!(max_abs_diff(&(&w.matrix * &w2.matrix), &w3.matrix) <= 1e-9);
    }

    #[test]
    fn ctqw_hartley_eigenstates() {
        for order in [8, 16, 32] {
            let g = ga(order);
            let spec = WalkSpec::pair(order, 1, FRAC_PI_2).unwrap();
            let w = exact_ctqw(&g, &spec).unwrap();
            for h in (1..order).step_by(2) {
                let note = g.hartley_state(h);
                let out = evolve(&w, &note).unwrap();
                let phase = Complex64::from_polar(1.0, spec.eigenvalue(h) * spec.time());
                let expected: Vec<_> = note
                    .state()
                    .amplitudes()
                    .iter()
                    .map(|a| a * phase)
                    .collect();
                assert!(out.max_diff(&StateVector::from_amplitudes(expected).unwrap()) <= 1e-9);
            }
        }
    }

    #[test]
    fn uniform_preparation_is_unitary() {
        for (dim, count) in [(2, 2), (4, 3), (8, 5), (16, 16), (2, 1)] {
            let m = uniform_preparation(dim, count);
            assert!(crate::gate::dense_deviation(&m, dim) < 1e-12);
            for r in 0..dim {
                let want = if r < count {
                    1.0 / (count as f64).sqrt()
                } else {
                    0.0
                };
                assert!((m[r * dim].re - want).abs() < 1e-12);
            }
        }
    }

    fn direct_isometry(g: &ToyGroupAction, spec: &WalkSpec) -> DMatrix<Complex64> {
        let order = g.order();
        let two_n = 2 * order;
        let mut t = DMatrix::zeros(two_n * two_n, two_n);
        let amp = 1.0 / (spec.generators().len() as f64).sqrt();
        for y in 0..order {
            for &q in spec.generators() {
                let j2 = g.act(q, y).unwrap();
                t[(y + two_n * j2, y)] += Complex64::new(amp, 0.0);
            }
            let j1 = y + order;
            t[(j1 + two_n * order, j1)] = Complex64::new(1.0, 0.0);
        }
        t
    }

    #[test]
    fn isometry_matches_definition() {
        for (order, gens) in [
            (8, vec![1, 7]),
            (8, vec![1, 7, 4]),
            (16, vec![3, 13, 5, 11]),
        ] {
            let g = ga(order);
            let spec = WalkSpec::new(order, &gens, 1.0).unwrap();
            let iso = build_walk_isometry(&g, &spec).unwrap();
            let t = iso.isometry_matrix().unwrap();
            assert!(max_abs_diff(&t, &direct_isometry(&g, &spec)) < 1e-12);
            let gram = t.adjoint() * &t;
            assert!(max_abs_diff(&gram, &DMatrix::identity(2 * order, 2 * order)) <= 1e-10);
        }
    }

    #[test]
    fn prepare_then_inverse_is_identity() {
        let g = ga(8);
        let iso = build_walk_isometry(&g, &WalkSpec::new(8, &[1, 7, 4], 1.0).unwrap()).unwrap();
        let both = iso.prepare.then(&iso.prepare.inverse()).unwrap();
        let mut r = rng::stream(2, 0);
        for _ in 0..20 {
            let psi = StateVector::random(iso.layout.total(), &mut r);
            let mut s = psi.clone();
            both.apply(&mut s).unwrap();
            assert!(s.max_diff(&psi) < 1e-12);
        }
    }

    #[test]
    fn reflection_matches_projector_identity() {
        let g = ga(8);
        let spec = WalkSpec::pair(8, 3, 1.0).unwrap();
        let iso = build_walk_isometry(&g, &spec).unwrap();
        let t = iso.isometry_matrix().unwrap();
        let refl = &t * t.adjoint() * Complex64::new(2.0, 0.0) - DMatrix::identity(256, 256);
        let mut r = rng::stream(5, 0);
        for _ in 0..5 {
            let psi = StateVector::random(8, &mut r);
            let mut s = psi.pad(iso.layout.k);
            iso.reflection.apply(&mut s).unwrap();
            let (inside, leak) = s.unpad(iso.layout.k);
            assert!(leak < 1e-12);
            let expected = &refl * nalgebra::DVector::from_column_slice(psi.amplitudes());
            let got = nalgebra::DVector::from_column_slice(inside.amplitudes());
            assert!((got - expected).camax() < 1e-10);
        }
        assert!(iso.reflection_leakage().unwrap() < 1e-12);
    }

    #[test]
    fn discrete_walk_is_unitary_and_swaps() {
        let g = ga(8);
        let spec = WalkSpec::pair(8, 1, 1.0).unwrap();
        let iso = build_walk_isometry(&g, &spec).unwrap();
        let w = iso.walk_operator().unwrap();
        assert!(w.unitarity_error() <= 1e-10);
        let t = iso.isometry_matrix().unwrap();
        let refl = &t * t.adjoint() * Complex64::new(2.0, 0.0) - DMatrix::identity(256, 256);
        let swap = DMatrix::from_fn(256, 256, |r, c| {
            let (j1, j2) = (c % 16, c / 16);
            Complex64::new(if r == j2 + 16 * j1 { 1.0 } else { 0.0 }, 0.0)
        });
        let expected = swap * refl * Complex64::new(0.0, 1.0);
        assert!(max_abs_diff(&w.matrix, &expected) < 1e-10);
    }

    #[test]
    fn phi_states_are_orthonormal() {
        let g = ga(16);
        let iso = build_walk_isometry(&g, &WalkSpec::pair(16, 5, 1.0).unwrap()).unwrap();
        let t = iso.isometry_matrix().unwrap();
        for y in 0..16 {
            let c0 = t.column(y);
            let c1 = t.column(y + 16);
            assert!((c0.norm() - 1.0).abs() < 1e-12);
            assert!(c0.dotc(&c1).norm() < 1e-12);
        }
    }
}
