//! Truncated matrix representations of the Chebyshev oscillator algebra.
//!
//! All operators act on `span{psi_0 .. psi_{dim-1}}`; column `n` is the image
//! of `psi_n`. Identities are only asserted on each operator's interior
//! columns, where truncation drops nothing.

use std::f64::consts::SQRT_2;
use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::Kind;
use crate::coefficients::{CoefficientSource, RecurrenceCoefficients};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub entries: CMatrix,
    /// Columns on which the truncated matrix agrees with the full operator.
    pub interior: Range<usize>,
}

impl TruncatedOperator {
    pub fn new(entries: CMatrix, interior: Range<usize>) -> Self {
        let dim = entries.nrows();
        debug_assert_eq!(dim, entries.ncols());
        debug_assert!(interior.end <= dim);
        TruncatedOperator { dim, entries, interior }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim), 0..dim)
    }

    fn diagonal_from(values: impl IntoIterator<Item = f64>, dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for (n, v) in values.into_iter().take(dim).enumerate() {
            m[(n, n)] = Complex64::from(v);
        }
        Self::new(m, 0..dim)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|n| self.entries[(n, n)]).collect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(v);
        (&self.entries * v).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.entries.adjoint(), self.interior.clone())
    }

    /// Product `self * rhs` (apply `rhs` first) with the given interior.
    pub fn compose(&self, rhs: &Self, interior: Range<usize>) -> Self {
        Self::new(&self.entries * &rhs.entries, interior)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::new(self.entries.map(|e| e * c), self.interior.clone())
    }

    /// Largest `|self - other|` entry over all rows of the given columns.
    pub fn max_deviation_on(&self, other: &Self, cols: Range<usize>) -> f64 {
        cols.flat_map(|c| (0..self.dim).map(move |r| (r, c)))
            .map(|(r, c)| (self.entries[(r, c)] - other.entries[(r, c)]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|A - A^dagger|` entry on the interior x interior block.
    pub fn hermiticity_defect(&self) -> f64 {
        let r = self.interior.clone();
        r.clone()
            .flat_map(|i| r.clone().map(move |j| (i, j)))
            .map(|(i, j)| (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm())
            .fold(0.0, f64::max)
    }
}

fn coefficients(kind: Kind, dim: usize, source: CoefficientSource) -> RecurrenceCoefficients {
    RecurrenceCoefficients::new(kind, source, dim.max(1))
}

fn require(what: &'static str, dim: usize, min: usize) -> Result<()> {
    if dim < min {
        Err(Error::DimensionTooSmall { what, min, got: dim })
    } else {
        Ok(())
    }
}

fn interior_raising(dim: usize) -> Range<usize> {
    0..dim.saturating_sub(1)
}

/// Jacobi matrix: `X[n+1, n] = X[n, n+1] = b_n`, zero diagonal.
pub fn position_matrix(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    require("position operator", dim, 1)?;
    let b = coefficients(kind, dim, source);
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        m[(n + 1, n)] = b.b(n).into();
        m[(n, n + 1)] = b.b(n).into();
    }
    Ok(TruncatedOperator::new(m, interior_raising(dim)))
}

/// `P[n-1, n] = i b_{n-1}`, `P[n+1, n] = -i b_n`.
pub fn momentum_matrix(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    require("momentum operator", dim, 1)?;
    let b = coefficients(kind, dim, source);
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        m[(n + 1, n)] = -I * b.b(n);
        m[(n, n + 1)] = I * b.b(n);
    }
    Ok(TruncatedOperator::new(m, interior_raising(dim)))
}

/// `(a_minus, a_plus)` with `a_minus psi_n = sqrt(2) b_{n-1} psi_{n-1}` and
/// `a_plus psi_n = sqrt(2) b_n psi_{n+1}`.
pub fn ladder_matrices(
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
) -> Result<(TruncatedOperator, TruncatedOperator)> {
    require("ladder operators", dim, 2)?;
    let b = coefficients(kind, dim, source);
    let mut lower = CMatrix::zeros(dim, dim);
    let mut raise = CMatrix::zeros(dim, dim);
    for n in 0..dim - 1 {
        lower[(n, n + 1)] = (SQRT_2 * b.b(n)).into();
        raise[(n + 1, n)] = (SQRT_2 * b.b(n)).into();
    }
    Ok((
        TruncatedOperator::new(lower, 0..dim),
        TruncatedOperator::new(raise, interior_raising(dim)),
    ))
}

pub fn number_matrix(dim: usize) -> Result<TruncatedOperator> {
    require("number operator", dim, 1)?;
    Ok(TruncatedOperator::diagonal_from((0..dim).map(|n| n as f64), dim))
}

pub fn identity_matrix(dim: usize) -> TruncatedOperator {
    TruncatedOperator::diagonal_from(std::iter::repeat(1.0), dim)
}

/// `B(N) = diag(b_{-1}^2, b_0^2, .., b_{dim-2}^2)`.
pub fn b_of_n_matrix(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    require("B(N)", dim, 1)?;
    let b = coefficients(kind, dim, source);
    Ok(TruncatedOperator::diagonal_from(
        (0..dim).map(|n| b.b_prev(n).powi(2)),
        dim,
    ))
}

/// `B(N + I) = diag(b_0^2, .., b_{dim-1}^2)`.
pub fn b_of_n_plus_one_matrix(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    require("B(N+I)", dim, 1)?;
    let b = coefficients(kind, dim, source);
    Ok(TruncatedOperator::diagonal_from((0..dim).map(|n| b.b(n).powi(2)), dim))
}

fn commutator(a: &TruncatedOperator, b: &TruncatedOperator, interior: Range<usize>) -> TruncatedOperator {
    TruncatedOperator::new(&a.entries * &b.entries - &b.entries * &a.entries, interior)
}

/// Residuals of `[a-, a+] = 2(B(N+I) - B(N))` and `[N, a+-] = +-a+-` on
/// columns `0..dim-2`.
pub fn verify_commutators(kind: Kind, dim: usize, source: CoefficientSource, tol: f64) -> Result<VerificationReport> {
    require("commutator check", dim, 4)?;
    let interior = 0..dim - 2;
    let (lower, raise) = ladder_matrices(kind, dim, source)?;
    let n = number_matrix(dim)?;
    let bn = b_of_n_matrix(kind, dim, source)?;
    let bn1 = b_of_n_plus_one_matrix(kind, dim, source)?;
    let rhs = TruncatedOperator::new((&bn1.entries - &bn.entries) * Complex64::from(2.0), 0..dim);

    let mut report = VerificationReport::new();
    let lr = commutator(&lower, &raise, interior.clone());
    report.hard(
        "commutator_lower_raise",
        lr.max_deviation_on(&rhs, interior.clone()),
        tol,
    );
    let nr = commutator(&n, &raise, interior.clone());
    report.hard(
        "commutator_number_raise",
        nr.max_deviation_on(&raise, interior.clone()),
        tol,
    );
    let nl = commutator(&n, &lower, interior.clone());
    report.hard(
        "commutator_number_lower",
        nl.max_deviation_on(&lower.scaled((-1.0).into()), interior),
        tol,
    );
    Ok(report)
}

/// `[a-, a+]` on interior columns, as a diagonal.
pub fn lower_raise_commutator_diagonal(kind: Kind, dim: usize, source: CoefficientSource) -> Result<Vec<f64>> {
    require("commutator check", dim, 4)?;
    let (lower, raise) = ladder_matrices(kind, dim, source)?;
    let c = commutator(&lower, &raise, 0..dim - 2);
    Ok((0..dim - 2).map(|n| c.entries[(n, n)].re).collect())
}

/// `H = X^2 + P^2`, exact on columns `0..dim-2`.
pub fn hamiltonian(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    require("Hamiltonian", dim, 3)?;
    let x = position_matrix(kind, dim, source)?;
    let p = momentum_matrix(kind, dim, source)?;
    let h = &x.entries * &x.entries + &p.entries * &p.entries;
    Ok(TruncatedOperator::new(h, 0..dim - 2))
}

/// Printed spectrum: `1/2` for the ground state, `1` above it.
pub fn paper_claimed_energy(n: usize) -> f64 {
    if n == 0 {
        0.5
    } else {
        1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted eigenvalues of the interior block.
    pub eigenvalues: Vec<f64>,
    /// Interior diagonal, in basis order.
    pub diagonal_form: Vec<f64>,
    /// `2 (b_{n-1}^2 + b_n^2)` on the same indices.
    pub predicted_diagonal: Vec<f64>,
    /// Largest off-diagonal magnitude in interior columns.
    pub off_diagonal_max: f64,
    pub paper_claim_deviation: f64,
    pub matches_paper_claim: bool,
}

pub fn hamiltonian_spectrum(kind: Kind, dim: usize, source: CoefficientSource, tol: f64) -> Result<Spectrum> {
    let h = hamiltonian(kind, dim, source)?;
    let b = coefficients(kind, dim, source);
    let interior = h.interior.clone();
    let diagonal_form: Vec<f64> = interior.clone().map(|n| h.entries[(n, n)].re).collect();
    let predicted_diagonal: Vec<f64> = interior
        .clone()
        .map(|n| 2.0 * (b.b_prev(n).powi(2) + b.b(n).powi(2)))
        .collect();
    let off_diagonal_max = interior
        .clone()
        .flat_map(|c| (0..dim).filter(move |&r| r != c).map(move |r| (r, c)))
        .map(|(r, c)| h.entries[(r, c)].norm())
        .fold(0.0, f64::max);
    let block = h.entries.view((0, 0), (interior.end, interior.end)).into_owned();
    let eigenvalues = hermitian_eigenvalues(&block)?;
    let paper_claim_deviation = diagonal_form
        .iter()
        .enumerate()
        .map(|(n, v)| (v - paper_claimed_energy(n)).abs())
        .fold(0.0, f64::max);
    Ok(Spectrum {
        eigenvalues,
        diagonal_form,
        predicted_diagonal,
        off_diagonal_max,
        paper_claim_deviation,
        matches_paper_claim: paper_claim_deviation < tol,
    })
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    let defect = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
        .fold(0.0, f64::max);
    let scale = m.iter().map(|e| e.norm()).fold(1.0, f64::max);
    if defect > 1e-12 * scale {
        return Err(Error::InvalidArgument(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Hermiticity, ladder reconstruction and adjoint relations.
pub fn verify_structure(kind: Kind, dim: usize, source: CoefficientSource, tol: f64) -> Result<VerificationReport> {
    require("structure check", dim, 3)?;
    let x = position_matrix(kind, dim, source)?;
    let p = momentum_matrix(kind, dim, source)?;
    let n = number_matrix(dim)?;
    let bn = b_of_n_matrix(kind, dim, source)?;
    let h = hamiltonian(kind, dim, source)?;
    let (lower, raise) = ladder_matrices(kind, dim, source)?;
    let all = 0..dim;
    let mut report = VerificationReport::new();

    let herm = [&x, &p, &n, &bn, &h]
        .iter()
        .map(|op| op.hermiticity_defect())
        .fold(0.0, f64::max);
    report.hard("hermiticity", herm, tol);

    let x_rec = TruncatedOperator::new((&raise.entries + &lower.entries) / Complex64::from(SQRT_2), 0..dim);
    let p_rec = TruncatedOperator::new((&raise.entries - &lower.entries) / (I * SQRT_2), 0..dim);
    report.hard(
        "ladder_reconstruction",
        x_rec
            .max_deviation_on(&x, all.clone())
            .max(p_rec.max_deviation_on(&p, all.clone())),
        tol,
    );

    let xp_plus = TruncatedOperator::new((&x.entries + &p.entries * I) / Complex64::from(SQRT_2), 0..dim);
    let xp_minus = TruncatedOperator::new((&x.entries - &p.entries * I) / Complex64::from(SQRT_2), 0..dim);
    report.hard(
        "ladder_from_position_momentum",
        xp_plus
            .max_deviation_on(&raise, all.clone())
            .max(xp_minus.max_deviation_on(&lower, all)),
        tol,
    );

    report.hard(
        "raise_is_adjoint_of_lower",
        raise.max_deviation_on(&lower.adjoint(), raise.interior.clone()),
        tol,
    );

    let b = coefficients(kind, dim, source);
    let jacobi = (0..dim)
        .flat_map(|c| (0..dim).map(move |r| (r, c)))
        .map(|(r, c)| {
            let expect = if r == c + 1 {
                b.b(c)
            } else if c == r + 1 {
                b.b(r)
            } else {
                0.0
            };
            (x.entries[(r, c)] - expect).norm()
        })
        .fold(0.0, f64::max);
    report.hard("position_is_jacobi_matrix", jacobi, tol);
    Ok(report)
}

/// Entry-wise comparison of the algebra matrices across the two kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindComparison {
    pub source: CoefficientSource,
    pub max_abs_difference: f64,
    /// Every differing entry lies in the leading 2x2 block, the only entries
    /// that involve `b_0`.
    pub differences_confined_to_b0: bool,
}

pub fn compare_kinds(dim: usize, source: CoefficientSource) -> Result<KindComparison> {
    require("kind comparison", dim, 3)?;
    let build = |kind| -> Result<Vec<TruncatedOperator>> {
        let (lower, raise) = ladder_matrices(kind, dim, source)?;
        Ok(vec![
            lower,
            raise,
            number_matrix(dim)?,
            b_of_n_matrix(kind, dim, source)?,
            hamiltonian(kind, dim, source)?,
        ])
    };
    let first = build(Kind::First)?;
    let second = build(Kind::Second)?;
    let mut max_abs_difference: f64 = 0.0;
    let mut confined = true;
    for (a, b) in first.iter().zip(&second) {
        for r in 0..dim {
            for c in 0..dim {
                let d = (a.entries[(r, c)] - b.entries[(r, c)]).norm();
                max_abs_difference = max_abs_difference.max(d);
                if d > 0.0 && r.max(c) > 1 {
                    confined = false;
                }
            }
        }
    }
    Ok(KindComparison {
        source,
        max_abs_difference,
        differences_confined_to_b0: confined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    const D: CoefficientSource = CoefficientSource::Derived;
    const P: CoefficientSource = CoefficientSource::Paper;

    fn re(v: Complex64) -> f64 {
        assert_eq!(v.im, 0.0);
        v.re
    }

    #[test]
    fn position_examples() {
        let x = position_matrix(Kind::First, 2, D).unwrap();
        assert_eq!(re(x.entry(0, 1)), FRAC_1_SQRT_2);
        assert_eq!(re(x.entry(1, 0)), FRAC_1_SQRT_2);
        assert_eq!(re(x.entry(0, 0)), 0.0);
        let x1 = position_matrix(Kind::First, 1, D).unwrap();
        assert_eq!(x1.entries, CMatrix::zeros(1, 1));
        assert!(position_matrix(Kind::First, 0, D).is_err());
    }

    #[test]
    fn position_spectrum_inside_support() {
        let x = position_matrix(Kind::First, 64, D).unwrap();
        let ev = hermitian_eigenvalues(&x.entries).unwrap();
        assert_eq!(ev.len(), 64);
        assert!(ev.iter().all(|&e| e > -1.0 && e < 1.0));
    }

    #[test]
    fn ladder_examples() {
        let (lower, raise) = ladder_matrices(Kind::First, 6, D).unwrap();
        let e = |k: usize| {
            let mut v = vec![Complex64::from(0.0); 6];
            v[k] = 1.0.into();
            v
        };
        let l1 = lower.apply(&e(1));
        assert!((l1[0].re - 1.0).abs() < 1e-15);
        assert!(lower.apply(&e(0)).iter().all(|c| c.norm() == 0.0));
        let r1 = raise.apply(&e(1));
        assert!((r1[2].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(ladder_matrices(Kind::First, 1, D).is_err());
    }

    #[test]
    fn diagonal_examples() {
        let b = b_of_n_matrix(Kind::First, 3, D).unwrap();
        let d: Vec<f64> = b.diagonal().into_iter().map(re).collect();
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 0.5).abs() < 1e-15);
        assert_eq!(d[2], 0.25);
        let b2 = b_of_n_matrix(Kind::Second, 3, D).unwrap();
        assert_eq!(
            b2.diagonal().into_iter().map(re).collect::<Vec<_>>(),
            vec![0.0, 0.25, 0.25]
        );
        let n = number_matrix(2).unwrap();
        assert_eq!(n.diagonal().into_iter().map(re).collect::<Vec<_>>(), vec![0.0, 1.0]);
    }

    #[test]
    fn commutator_diagonals() {
        let first = lower_raise_commutator_diagonal(Kind::First, 16, D).unwrap();
        assert!((first[0] - 1.0).abs() < 1e-15);
        assert!((first[1] + 0.5).abs() < 1e-15);
        assert!(first[2..].iter().all(|v| v.abs() < 1e-15));
        let second = lower_raise_commutator_diagonal(Kind::Second, 16, D).unwrap();
        assert!((second[0] - 0.5).abs() < 1e-15);
        assert!(second[1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn commutators_hold_on_interior() {
        for kind in Kind::ALL {
            for source in CoefficientSource::ALL {
                let r = verify_commutators(kind, 64, source, 1e-13).unwrap();
                assert!(r.passed(), "{kind} {source}: {:?}", r.checks);
                assert!(r.get("commutator_number_raise").unwrap().residual < 1e-14);
            }
        }
        assert!(verify_commutators(Kind::First, 3, D, 1e-13).is_err());
    }

    #[test]
    fn hamiltonian_second_derived_matches_claim() {
        let s = hamiltonian_spectrum(Kind::Second, 12, D, 1e-13).unwrap();
        assert_eq!(s.diagonal_form[0], 0.5);
        assert!(s.diagonal_form[1..].iter().all(|&v| v == 1.0));
        assert!(s.matches_paper_claim);
        assert!(s.off_diagonal_max < 1e-15);
    }

    #[test]
    fn hamiltonian_first_differs_from_claim() {
        let s = hamiltonian_spectrum(Kind::First, 12, D, 1e-13).unwrap();
        let expect = [1.0, 1.5, 1.0, 1.0];
        for (v, e) in s.diagonal_form.iter().zip(expect) {
            assert!((v - e).abs() < 1e-15);
        }
        assert!(!s.matches_paper_claim);
        assert!((s.paper_claim_deviation - 0.5).abs() < 1e-15);
        for (d, p) in s.diagonal_form.iter().zip(&s.predicted_diagonal) {
            assert!((d - p).abs() < 1e-13);
        }
        let mut sorted = s.diagonal_form.clone();
        sorted.sort_by(f64::total_cmp);
        for (a, b) in sorted.iter().zip(&s.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_holds() {
        for kind in Kind::ALL {
            for source in CoefficientSource::ALL {
                let r = verify_structure(kind, 24, source, 1e-15).unwrap();
                assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn kinds_identical_under_paper_source() {
        let c = compare_kinds(16, P).unwrap();
        assert_eq!(c.max_abs_difference, 0.0);
        let d = compare_kinds(16, D).unwrap();
        assert!(d.max_abs_difference > 0.1);
        assert!(d.differences_confined_to_b0);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0.into();
        assert!(hermitian_eigenvalues(&m).is_err());
    }
}
