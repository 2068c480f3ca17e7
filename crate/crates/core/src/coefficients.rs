//! Recurrence coefficients `b_n` feeding every operator in the crate.
//!
//! `Paper` uses the printed values (`b_0 = 1/sqrt(2)`, `b_n = 1/2` for both
//! kinds). `Derived` recomputes each `b_n` from quadrature and snaps it to
//! `1/2` or `1/sqrt(2)` when within [`SNAP_TOLERANCE`].

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::basis::Kind;
use crate::quadrature::{derive_recurrence_coefficient, gauss_chebyshev_rule};

pub const SNAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSource {
    Paper,
    #[default]
    Derived,
}

impl CoefficientSource {
    pub const ALL: [CoefficientSource; 2] = [CoefficientSource::Paper, CoefficientSource::Derived];
}

impl fmt::Display for CoefficientSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSource::Paper => f.write_str("paper"),
            CoefficientSource::Derived => f.write_str("derived"),
        }
    }
}

/// The printed coefficient values, identical for both kinds.
pub fn paper_coefficient(n: usize) -> f64 {
    if n == 0 {
        FRAC_1_SQRT_2
    } else {
        0.5
    }
}

fn snap(b: f64) -> f64 {
    [0.5, FRAC_1_SQRT_2]
        .into_iter()
        .find(|exact| (b - exact).abs() < SNAP_TOLERANCE)
        .unwrap_or(b)
}

/// `b_0 .. b_{len-1}` for one kind and source.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    pub kind: Kind,
    pub source: CoefficientSource,
    values: Vec<f64>,
}

impl RecurrenceCoefficients {
    pub fn new(kind: Kind, source: CoefficientSource, len: usize) -> Self {
        let values = match source {
            CoefficientSource::Paper => (0..len).map(paper_coefficient).collect(),
            CoefficientSource::Derived => raw_derived(kind, len).into_iter().map(snap).collect(),
        };
        RecurrenceCoefficients { kind, source, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `b_n`; panics past the computed length.
    pub fn b(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `b_{n-1}`, with `b_{-1} = 0`.
    pub fn b_prev(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.values[n - 1]
        }
    }
}

/// Unsnapped quadrature values of `b_0 .. b_{len-1}`.
pub fn raw_derived(kind: Kind, len: usize) -> Vec<f64> {
    let rule = gauss_chebyshev_rule(kind, len + 2).expect("rule size is positive");
    (0..len)
        .map(|n| derive_recurrence_coefficient(kind, n, &rule).expect("rule is exact to degree 2n+3"))
        .collect()
}
