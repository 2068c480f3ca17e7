//! Barut-Girardello coherent states: eigenvectors `a_minus |z> = z |z>`.
//!
//! Coefficients are fixed by `d_0 = 1` and `d_{n+1} = z d_n / (sqrt(2) b_n)`.
//! With derived coefficients this gives `d_n = sqrt(2)^{n-1} z^n` (n >= 1) for
//! the first kind and `d_n = (sqrt(2) z)^n` for the second. The series
//! converges for `|z| < 1/sqrt(2)`.
//!
//! The printed first-kind series `sum z^n sqrt(2)^{n+1} T_n(x)` is `sqrt(2)`
//! times the state built here; see [`CoherentStateVector::paper_scaled_coeffs`].

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Kind, RecurrenceSystem};
use crate::coefficients::{CoefficientSource, RecurrenceCoefficients};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Radius of the convergence disk.
pub const DISK_RADIUS: f64 = FRAC_1_SQRT_2;

/// Default distance kept from the disk boundary when building states.
pub const DEFAULT_MARGIN: f64 = 1e-6;

fn check_disk(z: Complex64, limit: f64) -> Result<()> {
    let modulus = z.norm();
    if modulus < limit {
        Ok(())
    } else {
        Err(Error::OutsideDisk { modulus, limit })
    }
}

/// `d_0 .. d_{dim-1}` at any `z`, without the convergence check.
pub fn coefficient_vector(kind: Kind, source: CoefficientSource, z: Complex64, dim: usize) -> Vec<Complex64> {
    let b = RecurrenceCoefficients::new(kind, source, dim.max(1));
    recursion(&b, z, dim)
}

fn recursion(b: &RecurrenceCoefficients, z: Complex64, dim: usize) -> Vec<Complex64> {
    let mut d = Vec::with_capacity(dim);
    if dim == 0 {
        return d;
    }
    d.push(Complex64::from(1.0));
    for n in 0..dim - 1 {
        let next = z * d[n] / (SQRT_2 * b.b(n));
        d.push(next);
    }
    d
}

/// `1 / (2 b_0)`: the factor by which `d_n` (n >= 1) differs from `(sqrt(2) z)^n`.
fn tail_scale(kind: Kind, source: CoefficientSource) -> f64 {
    0.5 / RecurrenceCoefficients::new(kind, source, 1).b(0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentStateVector {
    pub kind: Kind,
    pub source: CoefficientSource,
    pub z: Complex64,
    pub dim: usize,
    pub coeffs: Vec<Complex64>,
    /// `sum_{n < dim} |d_n|^2`.
    pub norm_sq_series: f64,
    /// Upper bound on `sum_{n >= dim} |d_n|^2` from the tail ratio `2|z|^2`.
    pub tail_bound: f64,
    b: RecurrenceCoefficients,
}

pub fn bg_state(kind: Kind, z: Complex64, dim: usize, source: CoefficientSource) -> Result<CoherentStateVector> {
    bg_state_with_margin(kind, z, dim, source, DEFAULT_MARGIN)
}

pub fn bg_state_with_margin(
    kind: Kind,
    z: Complex64,
    dim: usize,
    source: CoefficientSource,
    margin: f64,
) -> Result<CoherentStateVector> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall {
            what: "coherent state",
            min: 2,
            got: dim,
        });
    }
    if margin.is_nan() || margin < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "margin must be nonnegative, got {margin}"
        )));
    }
    check_disk(z, DISK_RADIUS - margin)?;
    let b = RecurrenceCoefficients::new(kind, source, dim);
    let coeffs = recursion(&b, z, dim);
    let norm_sq_series = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let ratio = 2.0 * z.norm_sqr();
    let last = coeffs[dim - 1].norm_sqr();
    // |d_{n+1}|^2 = |z|^2 / (2 b_n^2) |d_n|^2 and b_n = 1/2 beyond index 0
    let tail_bound = last * ratio / (1.0 - ratio);
    Ok(CoherentStateVector {
        kind,
        source,
        z,
        dim,
        coeffs,
        norm_sq_series,
        tail_bound,
        b,
    })
}

impl CoherentStateVector {
    pub fn norm(&self) -> f64 {
        self.norm_sq_series.sqrt()
    }

    /// Coefficients in the printed normalization `sqrt(2)^{n+1} z^n T_n`,
    /// i.e. `sqrt(2) d_n` in the `psi_n` basis (first kind).
    pub fn paper_scaled_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c * SQRT_2).collect()
    }

    /// `max_n |sqrt(2) b_n d_{n+1} - z d_n|` over `n < dim - 1`.
    pub fn eigen_recursion_residual(&self) -> f64 {
        (0..self.dim - 1)
            .map(|n| (SQRT_2 * self.b.b(n) * self.coeffs[n + 1] - self.z * self.coeffs[n]).norm())
            .fold(0.0, f64::max)
    }

    /// `|z d_{dim-1}| / ||d||`: the component of `(a_minus - z) d` on the last
    /// basis vector, which equals `sqrt(2) b_{dim-1} |d_dim|` for the first
    /// dropped coefficient.
    pub fn boundary_leakage(&self) -> f64 {
        (self.z * self.coeffs[self.dim - 1]).norm() / self.norm()
    }

    /// Unnormalized `sum_n d_n psi_n(x)`.
    pub fn wavefunction(&self, x: f64) -> Result<Complex64> {
        let psi = RecurrenceSystem::new(self.kind).eval_basis_all(self.dim, x)?;
        // summed from the small tail terms upward
        Ok(self
            .coeffs
            .iter()
            .zip(&psi)
            .rev()
            .fold(Complex64::from(0.0), |acc, (d, p)| acc + d * p))
    }
}

/// `||(a_minus - z) d||` over components `0 .. dim-2`, relative to `||d||`.
pub fn annihilation_residual(state: &CoherentStateVector) -> f64 {
    let dim = state.dim;
    let sq: f64 = (0..dim - 1)
        .map(|m| (SQRT_2 * state.b.b(m) * state.coeffs[m + 1] - state.z * state.coeffs[m]).norm_sqr())
        .sum();
    sq.sqrt() / state.norm()
}

pub fn wavefunction_series(state: &CoherentStateVector, x: f64) -> Result<Complex64> {
    state.wavefunction(x)
}

/// Closed-form norm alongside the printed `1 / (1 - 2|z|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormComparison {
    /// `sum |d_n|^2`: `(1 - |z|^2)/(1 - 2|z|^2)` first kind,
    /// `1/(1 - 2|z|^2)` second kind (derived coefficients).
    pub closed: f64,
    pub paper_claimed: f64,
}

pub fn norm_squared_closed(kind: Kind, z: Complex64, source: CoefficientSource) -> Result<NormComparison> {
    let closed = overlap_kernel(kind, z, z, source)?.re;
    Ok(NormComparison {
        closed,
        paper_claimed: paper_claimed_norm(z)?,
    })
}

pub fn paper_claimed_norm(z: Complex64) -> Result<f64> {
    check_disk(z, DISK_RADIUS)?;
    Ok(1.0 / (1.0 - 2.0 * z.norm_sqr()))
}

/// Generating-function sum of the state at `x`.
///
/// First kind: `(1 - sqrt(2) z x) / (1 - 2 sqrt(2) z x + 2 z^2)`.
/// Second kind: `1 / (1 - 2 sqrt(2) z x + 2 z^2)`.
pub fn wavefunction_closed(kind: Kind, z: Complex64, x: f64, source: CoefficientSource) -> Result<Complex64> {
    check_disk(z, DISK_RADIUS)?;
    if x.abs() > 1.0 {
        return Err(Error::OutsideSupport { x });
    }
    let r = z * SQRT_2;
    let denom = Complex64::from(1.0) - r * (2.0 * x) + r * r;
    let scale = tail_scale(kind, source);
    Ok(match kind {
        Kind::First => {
            let g = (Complex64::from(1.0) - r * x) / denom;
            // psi_n = sqrt(2) T_n for n >= 1
            let w = scale * SQRT_2;
            if w == 1.0 {
                g
            } else {
                1.0 + (g - 1.0) * w
            }
        }
        Kind::Second => {
            let g = denom.inv();
            if scale == 1.0 {
                g
            } else {
                1.0 + (g - 1.0) * scale
            }
        }
    })
}

/// `sum_n conj(d_n(z1)) d_n(z2)`: `(1 - w)/(1 - 2w)` first kind,
/// `1/(1 - 2w)` second kind, with `w = conj(z1) z2`.
pub fn overlap_kernel(kind: Kind, z1: Complex64, z2: Complex64, source: CoefficientSource) -> Result<Complex64> {
    check_disk(z1, DISK_RADIUS)?;
    check_disk(z2, DISK_RADIUS)?;
    let w = z1.conj() * z2;
    let k2 = tail_scale(kind, source).powi(2);
    let one = Complex64::from(1.0);
    Ok(one + w * (2.0 * k2) / (one - w * 2.0))
}

/// Truncated `sum_n conj(d_n(z1)) d_n(z2)`.
pub fn overlap_series(a: &CoherentStateVector, b: &CoherentStateVector) -> Complex64 {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .rev()
        .fold(Complex64::from(0.0), |acc, (p, q)| acc + p.conj() * q)
}

/// Boundary average `(1/2pi) int d(theta) d(theta)^dagger dtheta` at
/// `z = e^{i theta} / sqrt(2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIdentity {
    pub kind: Kind,
    pub dim: usize,
    pub n_samples: usize,
    pub diagonal: Vec<f64>,
    /// `prod_{k<n} 1 / (4 b_k^2)`, the exact `|d_n|^2` on the circle.
    pub predicted_diagonal: Vec<f64>,
    pub off_diagonal_max: f64,
}

pub fn boundary_identity(
    kind: Kind,
    dim: usize,
    n_samples: usize,
    source: CoefficientSource,
) -> Result<BoundaryIdentity> {
    boundary_identity_with(kind, dim, n_samples, source, Execution::default())
}

pub fn boundary_identity_with(
    kind: Kind,
    dim: usize,
    n_samples: usize,
    source: CoefficientSource,
    exec: Execution,
) -> Result<BoundaryIdentity> {
    if dim < 1 {
        return Err(Error::DimensionTooSmall {
            what: "boundary identity",
            min: 1,
            got: dim,
        });
    }
    if n_samples < 4 * dim {
        return Err(Error::TooFewSamples {
            min: 4 * dim,
            got: n_samples,
        });
    }
    let b = RecurrenceCoefficients::new(kind, source, dim);
    let samples = exec.map_range(n_samples, |k| {
        let theta = 2.0 * PI * k as f64 / n_samples as f64;
        recursion(&b, Complex64::from_polar(DISK_RADIUS, theta), dim)
    });
    let weight = 1.0 / n_samples as f64;
    let rows = exec.map_range(dim, |m| {
        (0..dim)
            .map(|n| samples.iter().map(|d| d[m] * d[n].conj()).sum::<Complex64>() * weight)
            .collect::<Vec<_>>()
    });
    let diagonal = (0..dim).map(|n| rows[n][n].re).collect();
    let off_diagonal_max = (0..dim)
        .flat_map(|m| (0..dim).filter(move |&n| n != m).map(move |n| (m, n)))
        .map(|(m, n)| rows[m][n].norm())
        .fold(0.0, f64::max);
    let mut predicted_diagonal = Vec::with_capacity(dim);
    let mut acc = 1.0;
    for n in 0..dim {
        predicted_diagonal.push(acc);
        acc /= 4.0 * b.b(n).powi(2);
    }
    Ok(BoundaryIdentity {
        kind,
        dim,
        n_samples,
        diagonal,
        predicted_diagonal,
        off_diagonal_max,
    })
}

pub fn boundary_identity_diagonal(kind: Kind, dim: usize, n_samples: usize) -> Result<Vec<f64>> {
    Ok(boundary_identity(kind, dim, n_samples, CoefficientSource::Derived)?.diagonal)
}

/// One grid point of a series-versus-closed-form sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub series: Complex64,
    pub closed: Complex64,
    pub abs_diff: f64,
}

pub fn wavefunction_sweep(state: &CoherentStateVector, xs: &[f64], exec: Execution) -> Result<Vec<SweepRow>> {
    exec.map_slice(xs, |&x| {
        let series = state.wavefunction(x)?;
        let closed = wavefunction_closed(state.kind, state.z, x, state.source)?;
        Ok(SweepRow {
            x,
            series,
            closed,
            abs_diff: (series - closed).norm(),
        })
    })
    .into_iter()
    .collect()
}
