//! Gauss-Chebyshev rules for the two normalized measures, and recurrence
//! coefficients recovered from inner products.

use std::f64::consts::PI;

use crate::basis::{Kind, RecurrenceSystem};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Nodes and weights for `integral f dmu ~ sum w_k f(x_k)`, exact for
/// polynomials of degree `<= 2m - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: Kind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        2 * self.len() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

pub fn gauss_chebyshev_rule(kind: Kind, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::EmptyRule);
    }
    let mf = m as f64;
    let (nodes, weights) = match kind {
        Kind::First => (1..=m)
            .map(|k| (((2 * k - 1) as f64 * PI / (2.0 * mf)).cos(), 1.0 / mf))
            .unzip(),
        Kind::Second => (1..=m)
            .map(|k| {
                let t = k as f64 * PI / (mf + 1.0);
                (t.cos(), 2.0 / (mf + 1.0) * t.sin().powi(2))
            })
            .unzip(),
    };
    Ok(QuadratureRule { kind, nodes, weights })
}

pub fn inner_product(rule: &QuadratureRule, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> f64 {
    rule.integrate(|x| f(x) * g(x))
}

/// `<x psi_n, psi_{n+1}>` under the rule's measure.
pub fn derive_recurrence_coefficient(kind: Kind, n: usize, rule: &QuadratureRule) -> Result<f64> {
    let needed = 2 * n + 3;
    if rule.kind != kind || rule.exactness_degree() < needed {
        return Err(Error::InsufficientExactness {
            nodes: rule.len(),
            exact: if rule.kind == kind { rule.exactness_degree() } else { 0 },
            needed,
        });
    }
    let sys = RecurrenceSystem::new(kind);
    Ok(rule.integrate(|x| {
        let v = sys.eval_basis_all(n + 2, x).expect("nodes lie inside the support");
        x * v[n] * v[n + 1]
    }))
}

/// `<x psi_n, psi_n>`; zero for both symmetric measures.
pub fn diagonal_recurrence_coefficient(kind: Kind, n: usize, rule: &QuadratureRule) -> Result<f64> {
    let needed = 2 * n + 1;
    if rule.kind != kind || rule.exactness_degree() < needed {
        return Err(Error::InsufficientExactness {
            nodes: rule.len(),
            exact: rule.exactness_degree(),
            needed,
        });
    }
    let sys = RecurrenceSystem::new(kind);
    Ok(rule.integrate(|x| {
        let v = sys.eval_basis(n, x).expect("nodes lie inside the support");
        x * v * v
    }))
}

/// Gram matrix `G[m][n] = <psi_m, psi_n>` for `psi_0 .. psi_{count-1}`.
pub fn gram_matrix(kind: Kind, count: usize, rule: &QuadratureRule) -> Result<Vec<Vec<f64>>> {
    gram_matrix_with(kind, count, rule, Execution::default())
}

pub fn gram_matrix_with(kind: Kind, count: usize, rule: &QuadratureRule, exec: Execution) -> Result<Vec<Vec<f64>>> {
    let needed = 2 * count.saturating_sub(1);
    if rule.kind != kind || rule.exactness_degree() < needed {
        return Err(Error::InsufficientExactness {
            nodes: rule.len(),
            exact: rule.exactness_degree(),
            needed,
        });
    }
    let sys = RecurrenceSystem::new(kind);
    // basis values at every node, one row per node
    let table = exec.map_slice(&rule.nodes, |&x| {
        sys.eval_basis_all(count, x).expect("nodes lie inside the support")
    });
    Ok(exec.map_range(count, |m| {
        (0..count)
            .map(|n| {
                table
                    .iter()
                    .zip(&rule.weights)
                    .map(|(row, w)| w * row[m] * row[n])
                    .sum()
            })
            .collect()
    }))
}

/// Largest `|G - I|` entry.
pub fn identity_deviation(gram: &[Vec<f64>]) -> f64 {
    gram.iter()
        .enumerate()
        .flat_map(|(m, row)| {
            row.iter()
                .enumerate()
                .map(move |(n, &g)| (g - if m == n { 1.0 } else { 0.0 }).abs())
        })
        .fold(0.0, f64::max)
}
