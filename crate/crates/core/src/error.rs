use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the support [-1, 1]")]
    OutsideSupport { x: f64 },

    #[error("density of the first-kind measure is undefined at x = {x} (requires |x| < 1)")]
    DensityUndefined { x: f64 },

    #[error("|z| = {modulus} is outside the convergence disk |z| < 1/sqrt(2) (limit {limit})")]
    OutsideDisk { modulus: f64, limit: f64 },

    #[error("{what} requires dimension >= {min}, got {got}")]
    DimensionTooSmall { what: &'static str, min: usize, got: usize },

    #[error("quadrature rule needs at least one node")]
    EmptyRule,

    #[error("rule with {nodes} nodes is exact to degree {exact}, but degree {needed} is required")]
    InsufficientExactness { nodes: usize, exact: usize, needed: usize },

    #[error("boundary quadrature needs n_samples >= 4 * dim = {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
