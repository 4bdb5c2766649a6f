//! Information-theoretic analysis of oracle algorithms: class ensembles,
//! Holevo and mutual-information bounds, discord and coherence at each stage
//! of single- and non-adaptive multi-query algorithms.

pub mod densemat;
pub mod ensembles;
mod error;
pub mod hspkit;
pub mod infometrics;
pub mod limits;
pub mod optimizer;
pub mod problems;
pub mod random;
pub mod simulator;
pub mod tables;
pub mod tolerance;

pub use densemat::{Complex64, ComplexMatrix};
pub use ensembles::{ClassEnsemble, ClassState, StageLabel};
pub use error::{Error, Result};
pub use infometrics::{analyze, MetricsRow};
pub use problems::OracleProblem;
pub use simulator::{run_stages, AlgorithmSpec, StageReport};
