//! State-vector simulation of programmable quantum gate arrays.
//!
//! A processor holds a program register and a data register; the program's
//! basis state selects which unitary acts on the data. Program registers may
//! be finite-dimensional or periodic continuous variables truncated to `M`
//! integer momenta.

pub mod error;
pub mod gates;
pub mod processor;
pub mod qstate;
pub mod random;
pub mod stochastic;

pub use error::{QprocError, Result};
pub use qstate::{FactorRole, StateVector, Unitary, C64, CMatrix};
