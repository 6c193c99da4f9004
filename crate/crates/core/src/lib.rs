//! Exact calculus of Jacobi diagrams.

pub mod diagrams;
pub mod error;
pub mod rational;

pub use diagrams::{Attach, Component, ComponentKind, Diagram, Graph, Signature};
pub use error::{Error, Result};
pub use rational::Q;
pub mod calculus;
pub mod report;
pub mod series;
pub mod sl2;
pub mod spaces;
pub mod wheels;

#[cfg(test)]
mod properties;

pub use report::{VerificationReport, Violation};
pub use spaces::{Engine, EngineConfig, Filter, LinComb};
