//! The operator `A = (1 - x^2) d/dx` in the Chebyshev bases, and the
//! composite formulas expressing the ladder and momentum operators through
//! `A`, `X`, `N` and shifted-number resolvents.
//!
//! Products follow the usual convention: in `M K`, `K` acts first.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    identity_matrix, ladder_matrices, momentum_matrix, number_matrix, position_matrix, CMatrix, TruncatedOperator,
};
use crate::basis::{chebyshev_u, Kind, RecurrenceSystem};
use crate::coefficients::{CoefficientSource, RecurrenceCoefficients};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Residuals below this count as an exact match.
pub const MATCH_TOLERANCE: f64 = 1e-13;

/// Numerator coefficients below this are treated as exact zeros when they
/// meet a singular resolvent entry.
pub const ZERO_NUMERATOR: f64 = 1e-14;

/// `A psi_n` from the basis-action formulas:
/// first kind `n b_{n-1} psi_{n-1} - n b_n psi_{n+1}`,
/// second kind `(n+2) b_{n-1} psi_{n-1} - n b_n psi_{n+1}`.
pub fn a_matrix(kind: Kind, dim: usize, source: CoefficientSource) -> Result<TruncatedOperator> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall {
            what: "A operator",
            min: 2,
            got: dim,
        });
    }
    let b = RecurrenceCoefficients::new(kind, source, dim);
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        let nf = n as f64;
        let down = match kind {
            Kind::First => nf,
            Kind::Second => nf + 2.0,
        };
        if n > 0 {
            m[(n - 1, n)] = (down * b.b_prev(n)).into();
        }
        if n + 1 < dim {
            m[(n + 1, n)] = (-nf * b.b(n)).into();
        }
    }
    Ok(TruncatedOperator::new(m, 0..dim - 1))
}

/// `(1 - x^2) psi_n'(x)` from the definition of the derivative.
///
/// First kind uses `T_n' = n U_{n-1}`; second kind differentiates
/// `sin((n+1) t) / sin t` in `t = arccos x`. Requires `|x| < 1`.
pub fn analytic_a_action(kind: Kind, n: usize, x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "derivative grid point {x} must lie strictly inside (-1, 1)"
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(match kind {
        Kind::First => {
            let norm = RecurrenceSystem::new(kind).basis_norm(n);
            norm * nf * (1.0 - x * x) * chebyshev_u(n - 1, x)
        }
        Kind::Second => {
            let t = x.acos();
            let s = t.sin();
            let k = nf + 1.0;
            -(k * (k * t).cos() - (k * t).sin() * t.cos() / s)
        }
    })
}

/// Largest `|(1 - x^2) psi_n'(x) - sum_m A[m, n] psi_m(x)|` over `n <= dim - 2`
/// and the grid.
pub fn validate_a_numerically(kind: Kind, dim: usize, source: CoefficientSource, grid: &[f64]) -> Result<f64> {
    validate_a_numerically_with(kind, dim, source, grid, Execution::default())
}

pub fn validate_a_numerically_with(
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
    grid: &[f64],
    exec: Execution,
) -> Result<f64> {
    let a = a_matrix(kind, dim, source)?;
    let sys = RecurrenceSystem::new(kind);
    let per_point = exec.map_slice(grid, |&x| -> Result<f64> {
        let psi = sys.eval_basis_all(dim, x)?;
        let mut worst: f64 = 0.0;
        for n in a.interior.clone() {
            let expansion: f64 = (0..dim).map(|m| a.entries[(m, n)].re * psi[m]).sum();
            worst = worst.max((analytic_a_action(kind, n, x)? - expansion).abs());
        }
        Ok(worst)
    });
    per_point.into_iter().try_fold(0.0, |acc: f64, r| r.map(|v| acc.max(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    A1Minus,
    A1Plus,
    A2Minus,
    A2Plus,
    P1,
    P2,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::A1Minus,
        Target::A1Plus,
        Target::A2Minus,
        Target::A2Plus,
        Target::P1,
        Target::P2,
    ];

    /// The operator the formula is meant to reproduce.
    pub fn canonical(self) -> Canonical {
        match self {
            Target::A1Minus | Target::A2Minus => Canonical::Lower,
            Target::A1Plus | Target::A2Plus => Canonical::Raise,
            Target::P1 | Target::P2 => Canonical::Momentum,
        }
    }

    /// Kind whose oscillator the printed formula is stated for.
    pub fn stated_kind(self) -> Kind {
        match self {
            Target::A1Minus | Target::A1Plus | Target::P1 => Kind::First,
            Target::A2Minus | Target::A2Plus | Target::P2 => Kind::Second,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::A1Minus => "a1_minus",
            Target::A1Plus => "a1_plus",
            Target::A2Minus => "a2_minus",
            Target::A2Plus => "a2_plus",
            Target::P1 => "p1",
            Target::P2 => "p2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Canonical {
    Lower,
    Raise,
    Momentum,
}

/// Where the resolvent factors sit relative to the polynomial part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `R M`: the polynomial part acts first, the resolvent last (as printed).
    InverseAppliedLast,
    /// `M R`: the resolvent acts on the input vector first.
    InverseAppliedFirst,
}

impl Ordering {
    pub const ALL: [Ordering; 2] = [Ordering::InverseAppliedLast, Ordering::InverseAppliedFirst];
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::InverseAppliedLast => "inverse_applied_last",
            Ordering::InverseAppliedFirst => "inverse_applied_first",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormulaSpec {
    pub target: Target,
    pub ordering: Ordering,
}

impl FormulaSpec {
    pub fn new(target: Target, ordering: Ordering) -> Self {
        FormulaSpec { target, ordering }
    }

    pub fn all() -> impl Iterator<Item = FormulaSpec> {
        Target::ALL
            .into_iter()
            .flat_map(|t| Ordering::ALL.into_iter().map(move |o| FormulaSpec::new(t, o)))
    }

    fn prefactor(&self) -> Complex64 {
        match self.target {
            Target::P1 | Target::P2 => Complex64::i(),
            _ => FRAC_1_SQRT_2.into(),
        }
    }

    /// Shifts `s` of the resolvent factors `(N + s I)^{-1}`.
    pub fn resolvent_shifts(&self) -> &'static [i64] {
        match self.target {
            Target::A1Minus | Target::A2Minus => &[1],
            Target::A1Plus => &[-1],
            Target::A2Plus => &[0],
            Target::P1 => &[-1, 1],
            Target::P2 => &[0, 2],
        }
    }

    fn numerator(&self, p: &Primitives) -> CMatrix {
        let xn = &p.x * &p.n;
        match self.target {
            Target::A1Minus | Target::A2Minus => &p.a + &xn,
            Target::A1Plus => -&p.a + &xn,
            Target::A2Plus => -&p.a + &xn + &p.x * &p.id * Complex64::from(2.0),
            Target::P1 => &p.n * &p.a - &xn,
            Target::P2 => &p.n * &p.a + &p.id * &p.a + &xn - &p.x,
        }
    }
}

impl fmt::Display for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.target, self.ordering)
    }
}

struct Primitives {
    a: CMatrix,
    x: CMatrix,
    n: CMatrix,
    id: CMatrix,
}

impl Primitives {
    fn new(kind: Kind, dim: usize, source: CoefficientSource) -> Result<Self> {
        Ok(Primitives {
            a: a_matrix(kind, dim, source)?.entries,
            x: position_matrix(kind, dim, source)?.entries,
            n: number_matrix(dim)?.entries,
            id: identity_matrix(dim).entries,
        })
    }
}

/// Diagonal of the combined resolvent `prod_s (N + s I)^{-1}` with the
/// zero-entry pseudo-inverse; `None` marks a singular index.
pub fn resolvent_diagonal(shifts: &[i64], dim: usize) -> Vec<Option<f64>> {
    (0..dim as i64)
        .map(|n| {
            shifts.iter().try_fold(1.0, |acc, s| {
                let d = n + s;
                (d != 0).then(|| acc / d as f64)
            })
        })
        .collect()
}

/// A singular resolvent entry met while evaluating a formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularEntry {
    /// Input basis index.
    pub column: usize,
    /// Index at which the resolvent is singular.
    pub row: usize,
    /// Magnitude of the coefficient the singular entry multiplies.
    pub coefficient: f64,
    /// True when the coefficient is nonzero, i.e. a genuine `c / 0`.
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltFormula {
    pub spec: FormulaSpec,
    pub operator: TruncatedOperator,
    pub singular: Vec<SingularEntry>,
}

pub fn build_formula(spec: FormulaSpec, kind: Kind, dim: usize, source: CoefficientSource) -> Result<BuiltFormula> {
    if dim < 4 {
        return Err(Error::DimensionTooSmall {
            what: "realization formula",
            min: 4,
            got: dim,
        });
    }
    let prims = Primitives::new(kind, dim, source)?;
    let numer = spec.numerator(&prims);
    let resolvent = resolvent_diagonal(spec.resolvent_shifts(), dim);
    let r_matrix = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            resolvent[i].unwrap_or(0.0).into()
        } else {
            Complex64::from(0.0)
        }
    });

    let mut singular = Vec::new();
    let product = match spec.ordering {
        Ordering::InverseAppliedLast => {
            for col in 0..dim {
                for (row, r) in resolvent.iter().enumerate() {
                    if r.is_none() {
                        let c = numer[(row, col)].norm();
                        if c != 0.0 {
                            singular.push(SingularEntry {
                                column: col,
                                row,
                                coefficient: c,
                                nonzero: c > ZERO_NUMERATOR,
                            });
                        }
                    }
                }
            }
            &r_matrix * &numer
        }
        Ordering::InverseAppliedFirst => {
            for (col, r) in resolvent.iter().enumerate() {
                if r.is_none() {
                    singular.push(SingularEntry {
                        column: col,
                        row: col,
                        coefficient: 1.0,
                        nonzero: true,
                    });
                }
            }
            &numer * &r_matrix
        }
    };
    let entries = product * spec.prefactor();
    Ok(BuiltFormula {
        spec,
        operator: TruncatedOperator::new(entries, 0..dim - 1),
        singular,
    })
}

pub fn canonical_operator(
    canonical: Canonical,
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
) -> Result<TruncatedOperator> {
    match canonical {
        Canonical::Lower => Ok(ladder_matrices(kind, dim, source)?.0),
        Canonical::Raise => Ok(ladder_matrices(kind, dim, source)?.1),
        Canonical::Momentum => momentum_matrix(kind, dim, source),
    }
}

/// Comparison of one formula against its canonical operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationEntry {
    pub target: Target,
    pub ordering: Ordering,
    pub canonical: Canonical,
    /// Largest residual over interior columns.
    pub max_residual: f64,
    /// Largest residual over interior columns with `n >= 1`.
    pub max_residual_excluding_vacuum: f64,
    /// Per-column residual, interior columns only.
    pub column_residuals: Vec<f64>,
    /// Maximal runs of columns whose residual is below [`MATCH_TOLERANCE`].
    pub exact_columns: Vec<Range<usize>>,
    pub singular: Vec<SingularEntry>,
}

impl RealizationEntry {
    pub fn matches_all_columns(&self) -> bool {
        self.max_residual < MATCH_TOLERANCE
    }

    pub fn flagged_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.singular.iter().filter(|s| s.nonzero).map(|s| s.column).collect();
        cols.dedup();
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub kind: Kind,
    pub dim: usize,
    pub source: CoefficientSource,
    pub entries: Vec<RealizationEntry>,
}

impl RealizationReport {
    pub fn entry(&self, target: Target, ordering: Ordering) -> &RealizationEntry {
        self.entries
            .iter()
            .find(|e| e.target == target && e.ordering == ordering)
            .expect("report covers every target and ordering")
    }

    /// Smallest residual over the two orderings.
    pub fn best(&self, target: Target) -> &RealizationEntry {
        Ordering::ALL
            .iter()
            .map(|&o| self.entry(target, o))
            .min_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
            .unwrap()
    }
}

fn runs_below(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &v) in values.iter().enumerate() {
        match (v < tol, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(s..values.len());
    }
    runs
}

pub fn compare_realization(
    spec: FormulaSpec,
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
) -> Result<RealizationEntry> {
    let built = build_formula(spec, kind, dim, source)?;
    let canonical = spec.target.canonical();
    let reference = canonical_operator(canonical, kind, dim, source)?;
    let column_residuals: Vec<f64> = built
        .operator
        .interior
        .clone()
        .map(|c| built.operator.max_deviation_on(&reference, c..c + 1))
        .collect();
    let max_residual = column_residuals.iter().copied().fold(0.0, f64::max);
    let max_residual_excluding_vacuum = column_residuals.iter().skip(1).copied().fold(0.0, f64::max);
    Ok(RealizationEntry {
        target: spec.target,
        ordering: spec.ordering,
        canonical,
        max_residual,
        max_residual_excluding_vacuum,
        exact_columns: runs_below(&column_residuals, MATCH_TOLERANCE),
        column_residuals,
        singular: built.singular,
    })
}

/// Every target under both orderings.
pub fn compare_all_realizations(kind: Kind, dim: usize, source: CoefficientSource) -> Result<RealizationReport> {
    compare_all_realizations_with(kind, dim, source, Execution::default())
}

pub fn compare_all_realizations_with(
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
    exec: Execution,
) -> Result<RealizationReport> {
    if dim < 8 {
        return Err(Error::DimensionTooSmall {
            what: "realization table",
            min: 8,
            got: dim,
        });
    }
    let specs: Vec<FormulaSpec> = FormulaSpec::all().collect();
    let entries = exec
        .map_slice(&specs, |&spec| compare_realization(spec, kind, dim, source))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(RealizationReport {
        kind,
        dim,
        source,
        entries,
    })
}
