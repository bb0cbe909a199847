//! Compact Lie algebras, Samelson complex structures and invariant Hermitian
//! metrics: exact exterior calculus, SKT and CYT conditions, and the rigidity
//! of metrics that are both.

pub mod cli;
pub mod compact_algebra;
pub mod error;
pub mod exterior;
pub mod hermitian;
pub mod linalg;
pub mod report;
pub mod root_data;
pub mod scalar;
pub mod so9;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::{Scalar, Surd, Q};
