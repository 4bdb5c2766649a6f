//! Numerical tolerances shared across the crate.
//!
//! Entropies are reported to four decimals; every threshold below sits well
//! under that resolution.

/// Eigenvalues at or below this are treated as zero inside `-x log x`.
pub const EIGEN_FLOOR: f64 = 1e-12;
/// Allowed Hermitian defect `max |a - a^†|`.
pub const HERMITIAN: f64 = 1e-10;
/// Allowed unitarity defect `max |U^†U - I|`.
pub const UNITARY: f64 = 1e-10;
/// Allowed deviation of a density-matrix trace from one.
pub const TRACE: f64 = 1e-9;
/// Eigenvalues below this are an error, not rounding noise.
pub const NEGATIVE_EIGEN: f64 = -1e-8;
/// Slack within which small negative information quantities are clamped.
pub const CLAMP: f64 = 1e-9;
/// Allowed deviation of a probability vector's total from one.
pub const PROBABILITY_SUM: f64 = 1e-9;
/// Agreement demanded between the two discord formulas.
pub const DISCORD_AGREEMENT: f64 = 1e-8;
/// Disagreement between the two discord formulas that is reported as failure.
pub const DISCORD_FAILURE: f64 = 1e-6;
/// Pairwise overlap `tr(σσ')` below which supports are orthogonal.
pub const ORTHOGONAL_OVERLAP: f64 = 1e-10;
/// Commutator max-norm below which two states commute.
pub const COMMUTATOR: f64 = 1e-9;
/// Off-diagonal mass allowed after simultaneous diagonalization.
pub const DIAGONALIZED: f64 = 1e-8;
/// Entry magnitude below which a matrix entry is structurally zero.
pub const STRUCTURAL_ZERO: f64 = 1e-10;
