//! Leading-order gate-count models and a least-squares fit for measured
//! tallies.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RecursiveQht,
    QftBasedQht,
    DecompositionQht,
    Qft,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::RecursiveQht,
        ModelKind::QftBasedQht,
        ModelKind::DecompositionQht,
        ModelKind::Qft,
    ];

    /// Coefficient `a` of the leading `a·log²N` term.
    pub fn leading_coefficient(self) -> f64 {
        match self {
            ModelKind::RecursiveQht => 2.0,
            ModelKind::QftBasedQht | ModelKind::DecompositionQht => 2.5,
            ModelKind::Qft => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::RecursiveQht => "recursive_qht",
            ModelKind::QftBasedQht => "qft_based_qht",
            ModelKind::DecompositionQht => "decomposition_qht",
            ModelKind::Qft => "qft",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// `a·log²N + lower order`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountModel {
    pub kind: ModelKind,
    pub leading: f64,
}

impl CountModel {
    pub fn new(kind: ModelKind) -> Self {
        CountModel {
            kind,
            leading: kind.leading_coefficient(),
        }
    }

    pub fn value(&self, n: usize) -> f64 {
        self.leading * (n * n) as f64
    }
}

/// Leading-term gate count of `which` at `n = log₂N`.
pub fn analytic_count_model(which: ModelKind, n: usize) -> f64 {
    CountModel::new(which).value(n)
}

/// `count ≈ a·n² + b·n + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Least-squares quadratic through `(n, count)` points. Needs three
/// distinct `n`.
pub fn fit_quadratic(points: &[(usize, u64)]) -> Result<QuadraticFit> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::OutOfRange {
            what: "distinct sizes",
            value: ns.len(),
            min: 3,
            max: usize::MAX,
        });
    }
    let design = DMatrix::from_fn(points.len(), 3, |r, col| {
        (points[r].0 as f64).powi(2 - col as i32)
    });
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1 as f64));
    let coef = design
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|_| Error::ZeroDimension)?;
    Ok(QuadraticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
    })
}
