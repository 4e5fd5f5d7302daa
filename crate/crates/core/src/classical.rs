//! Dense reference matrices for the Fourier, Hartley, sine and cosine
//! transforms. Every circuit in [`crate::transforms`] is checked against
//! these.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformLabel {
    Dft,
    DhtAdditive,
    DhtMultiplicative,
    SineI,
    SineII,
    SineIII,
    SineIV,
    CosineI,
    CosineII,
    CosineIII,
    CosineIV,
}

impl TransformLabel {
    pub const SINE_COSINE: [TransformLabel; 8] = [
        TransformLabel::SineI,
        TransformLabel::SineII,
        TransformLabel::SineIII,
        TransformLabel::SineIV,
        TransformLabel::CosineI,
        TransformLabel::CosineII,
        TransformLabel::CosineIII,
        TransformLabel::CosineIV,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformLabel::Dft => "DFT",
            TransformLabel::DhtAdditive => "DHT_add",
            TransformLabel::DhtMultiplicative => "DHT_mult",
            TransformLabel::SineI => "S_I",
            TransformLabel::SineII => "S_II",
            TransformLabel::SineIII => "S_III",
            TransformLabel::SineIV => "S_IV",
            TransformLabel::CosineI => "C_I",
            TransformLabel::CosineII => "C_II",
            TransformLabel::CosineIII => "C_III",
            TransformLabel::CosineIV => "C_IV",
        }
    }
}

impl fmt::Display for TransformLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            TransformLabel::Dft,
            TransformLabel::DhtAdditive,
            TransformLabel::DhtMultiplicative,
        ]
        .into_iter()
        .chain(TransformLabel::SINE_COSINE)
        .find(|l| l.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct TransformMatrix {
    pub label: TransformLabel,
    pub matrix: DMatrix<Complex64>,
}

impl TransformMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        max_abs_diff(&prod, &DMatrix::identity(self.dim(), self.dim()))
    }

    /// `‖M² − I‖_max`.
    pub fn involution_error(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        max_abs_diff(&sq, &DMatrix::identity(self.dim(), self.dim()))
    }
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `cas(x) = cos x + sin x`.
pub fn cas(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    c + s
}

/// `2π·(k mod n)/n`, reducing the integer product before converting.
pub(crate) fn angle(k: usize, n: usize) -> f64 {
    TAU * (k % n) as f64 / n as f64
}

fn real_matrix(
    dim: usize,
    label: TransformLabel,
    f: impl Fn(usize, usize) -> f64,
) -> TransformMatrix {
    TransformMatrix {
        label,
        matrix: DMatrix::from_fn(dim, dim, |r, c| Complex64::new(f(r, c), 0.0)),
    }
}

/// Cyclic Hartley matrix: `entries[a][y] = cas(2πay/N)/√N`.
pub fn dht_matrix(n: usize) -> Result<TransformMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(real_matrix(n, TransformLabel::DhtAdditive, |a, y| {
        scale * cas(angle(a * y, n))
    }))
}

/// Digits of `index` in the mixed radix `factors`, leftmost most significant.
fn mixed_radix(mut index: usize, factors: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; factors.len()];
    for (d, &f) in digits.iter_mut().zip(factors).rev() {
        *d = index % f;
        index /= f;
    }
    digits
}

fn check_factors(factors: &[usize]) -> Result<usize> {
    if factors.is_empty() {
        return Err(Error::EmptyFactors);
    }
    if factors.contains(&0) {
        return Err(Error::ZeroDimension);
    }
    Ok(factors.iter().product())
}

/// Hartley transform over `Z_{N1} ⊕ … ⊕ Z_{Nk}` with the phases summed
/// inside a single `cas`.
pub fn dht_matrix_additive(factors: &[usize]) -> Result<TransformMatrix> {
    let dim = check_factors(factors)?;
    let scale = 1.0 / (dim as f64).sqrt();
    Ok(real_matrix(dim, TransformLabel::DhtAdditive, |r, c| {
        let (a, y) = (mixed_radix(r, factors), mixed_radix(c, factors));
        let turns: f64 = factors
            .iter()
            .enumerate()
            .map(|(i, &f)| ((a[i] * y[i]) % f) as f64 / f as f64)
            .sum();
        scale * cas(TAU * turns.fract())
    }))
}

/// Multiplicative Hartley transform: the Kronecker product of the per-factor
/// cyclic matrices, in factor order.
pub fn dht_matrix_multiplicative(factors: &[usize]) -> Result<TransformMatrix> {
    check_factors(factors)?;
    let mut acc = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for &f in factors {
        acc = acc.kronecker(&dht_matrix(f)?.matrix);
    }
    Ok(TransformMatrix {
        label: TransformLabel::DhtMultiplicative,
        matrix: acc,
    })
}

/// Unitary DFT: `entries[a][y] = ω_N^{ay}/√N` with `ω_N = e^{2πi/N}`.
pub fn dft_matrix(n: usize) -> Result<TransformMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(TransformMatrix {
        label: TransformLabel::Dft,
        matrix: DMatrix::from_fn(n, n, |a, y| Complex64::from_polar(scale, angle(a * y, n))),
    })
}

/// The eight orthogonal sine/cosine variants. `S_I` is `(N−1)×(N−1)`
/// (indices `1..N`), `C_I` is `(N+1)×(N+1)` (indices `0..=N`), the rest
/// are `N×N`.
pub fn dst_dct_matrix(label: TransformLabel, n: usize) -> Result<TransformMatrix> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            min: 2,
            max: usize::MAX,
        });
    }
    let nf = n as f64;
    let scale = (2.0 / nf).sqrt();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    // k_j for the sine family (only j = N is damped) and the cosine family
    // (j = 0 and j = N).
    let ks = |j: usize| if j == n { half } else { 1.0 };
    let kc = |j: usize| if j == 0 || j == n { half } else { 1.0 };
    let m = match label {
        TransformLabel::SineI => real_matrix(n - 1, label, |r, c| {
            let (m, k) = (r + 1, c + 1);
            scale * (PI * ((m * k) % (2 * n)) as f64 / nf).sin()
        }),
        TransformLabel::SineII => real_matrix(n, label, |r, c| {
            let (m, k) = ((r + 1) as f64, (c + 1) as f64);
            scale * ks(r + 1) * (m * (k - 0.5) * PI / nf).sin()
        }),
        TransformLabel::SineIII => real_matrix(n, label, |r, c| {
            let (m, k) = ((r + 1) as f64, (c + 1) as f64);
            scale * ks(c + 1) * ((m - 0.5) * k * PI / nf).sin()
        }),
        TransformLabel::SineIV => real_matrix(n, label, |r, c| {
            scale * ((r as f64 + 0.5) * (c as f64 + 0.5) * PI / nf).sin()
        }),
        TransformLabel::CosineI => real_matrix(n + 1, label, |r, c| {
            scale * kc(r) * kc(c) * (PI * ((r * c) % (2 * n)) as f64 / nf).cos()
        }),
        TransformLabel::CosineII => real_matrix(n, label, |r, c| {
            scale * kc(r) * (r as f64 * (c as f64 + 0.5) * PI / nf).cos()
        }),
        TransformLabel::CosineIII => real_matrix(n, label, |r, c| {
            scale * kc(c) * ((r as f64 + 0.5) * c as f64 * PI / nf).cos()
        }),
        TransformLabel::CosineIV => real_matrix(n, label, |r, c| {
            scale * ((r as f64 + 0.5) * (c as f64 + 0.5) * PI / nf).cos()
        }),
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    Ok(m)
}
