//! Numerical tolerances shared by every module.

/// Maximum elementwise deviation `|M - M†|` accepted for Hermitian operators.
pub const HERMITIAN: f64 = 1e-10;
/// Most negative eigenvalue accepted for positive semidefinite operators.
pub const PSD: f64 = 1e-10;
/// Accepted deviation of a density matrix trace from one.
pub const TRACE: f64 = 1e-10;
/// Residual accepted for reconstructions, completeness and trace preservation.
pub const RECONSTRUCTION: f64 = 1e-9;
/// Singular values, eigenvalues and coefficients below this are treated as zero.
pub const RANK: f64 = 1e-10;
/// A partial-transpose eigenvalue below `-NPT` certifies entanglement.
pub const NPT: f64 = 1e-9;
/// A game payoff above this certifies the quantum domain.
pub const CERTIFICATION_MARGIN: f64 = 1e-9;
/// Most negative probability accepted in a correlation.
pub const PROBABILITY: f64 = 1e-12;
/// Default cap on instrument branches in a supermap.
pub const MAX_BRANCHES: usize = 64;
