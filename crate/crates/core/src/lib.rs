//! Chebyshev oscillators: the deformed Heisenberg algebras built from the
//! three-term recurrences of Chebyshev polynomials of the first and second
//! kind, their Barut-Girardello coherent states, and numerical checks of the
//! operator identities and closed forms associated with them.

pub mod algebra;
pub mod basis;
pub mod cli;
pub mod coefficients;
pub mod coherent;
pub mod diffop;
pub mod error;
pub mod exec;
pub mod quadrature;
pub mod report;

pub use basis::{Kind, RecurrenceSystem};
pub use coefficients::{CoefficientSource, RecurrenceCoefficients};
pub use error::{Error, Result};
pub use exec::Execution;
pub use report::{CheckRecord, VerificationReport};
