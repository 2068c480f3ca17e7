//! Orthonormal Chebyshev bases and their measures.
//!
//! First kind: `psi_0 = 1`, `psi_n = sqrt(2) T_n` on `dx / (pi sqrt(1 - x^2))`.
//! Second kind: `psi_n = U_n` on `2 sqrt(1 - x^2) dx / pi`.

use std::f64::consts::{FRAC_1_PI, PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::First, Kind::Second];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::First => f.write_str("first"),
            Kind::Second => f.write_str("second"),
        }
    }
}

/// Raw `T_n(x)` by forward recurrence.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    raw_recurrence(n, x, 1.0, x)
}

/// Raw `U_n(x)` by forward recurrence.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    raw_recurrence(n, x, 1.0, 2.0 * x)
}

fn raw_recurrence(n: usize, x: f64, p0: f64, p1: f64) -> f64 {
    if n == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// One of the two Chebyshev families together with its normalized measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecurrenceSystem {
    pub kind: Kind,
}

impl RecurrenceSystem {
    pub const SUPPORT: (f64, f64) = (-1.0, 1.0);

    pub fn new(kind: Kind) -> Self {
        RecurrenceSystem { kind }
    }

    /// Factor turning the raw polynomial of degree `n` into `psi_n`.
    pub fn basis_norm(&self, n: usize) -> f64 {
        match (self.kind, n) {
            (Kind::First, 0) => 1.0,
            (Kind::First, _) => SQRT_2,
            (Kind::Second, _) => 1.0,
        }
    }

    fn raw(&self, n: usize, x: f64) -> f64 {
        match self.kind {
            Kind::First => chebyshev_t(n, x),
            Kind::Second => chebyshev_u(n, x),
        }
    }

    pub fn eval_basis(&self, n: usize, x: f64) -> Result<f64> {
        check_support(x)?;
        Ok(self.basis_norm(n) * self.raw(n, x))
    }

    /// `psi_0(x) .. psi_{count-1}(x)` in one recurrence pass.
    pub fn eval_basis_all(&self, count: usize, x: f64) -> Result<Vec<f64>> {
        check_support(x)?;
        let mut out = Vec::with_capacity(count);
        let (mut prev, mut cur) = (
            1.0,
            match self.kind {
                Kind::First => x,
                Kind::Second => 2.0 * x,
            },
        );
        for n in 0..count {
            let raw = match n {
                0 => 1.0,
                1 => cur,
                _ => {
                    let next = 2.0 * x * cur - prev;
                    prev = cur;
                    cur = next;
                    cur
                }
            };
            out.push(self.basis_norm(n) * raw);
        }
        Ok(out)
    }

    /// Basis value from the trigonometric closed form at `theta = arccos x`.
    ///
    /// At `theta` = 0 or pi the second-kind quotient is replaced by its
    /// limit `(n + 1) (+-1)^n`.
    pub fn eval_trig(&self, n: usize, theta: f64) -> f64 {
        let nf = n as f64;
        let raw = match self.kind {
            Kind::First => (nf * theta).cos(),
            Kind::Second => {
                let s = theta.sin();
                if s.abs() > 1e-300 && theta > 0.0 && theta < PI {
                    ((nf + 1.0) * theta).sin() / s
                } else if theta < PI / 2.0 || n.is_multiple_of(2) {
                    nf + 1.0
                } else {
                    -(nf + 1.0)
                }
            }
        };
        self.basis_norm(n) * raw
    }

    /// Normalized weight: `1 / (pi sqrt(1 - x^2))` or `2 sqrt(1 - x^2) / pi`.
    pub fn measure_density(&self, x: f64) -> Result<f64> {
        match self.kind {
            Kind::First => {
                if x.is_nan() || x.abs() >= 1.0 {
                    return Err(Error::DensityUndefined { x });
                }
                Ok(FRAC_1_PI / (1.0 - x * x).sqrt())
            }
            Kind::Second => {
                check_support(x)?;
                Ok(2.0 * FRAC_1_PI * (1.0 - x * x).max(0.0).sqrt())
            }
        }
    }
}

impl From<Kind> for RecurrenceSystem {
    fn from(kind: Kind) -> Self {
        RecurrenceSystem::new(kind)
    }
}

fn check_support(x: f64) -> Result<()> {
    if x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideSupport { x })
    }
}

/// `count` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}
