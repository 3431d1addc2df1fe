//! Certification of quantum memories.
//!
//! Given a finite-dimensional quantum channel, this crate decides whether its
//! Choi operator is entangled (the channel preserves entanglement, so the memory
//! is in the quantum domain) and compiles an explicit semiquantum signaling game
//! that certifies it: trusted input states for the two question rounds and a
//! payoff table whose value is positive for the channel and nonpositive for any
//! measure-and-prepare (entanglement-breaking) simulation.
//!
//! Layout:
//! - [`operator`]: dense complex linear algebra on bipartite operators.
//! - [`channels`]: Kraus/Choi channels, POVMs, instruments and classically
//!   correlated supermaps.
//! - [`certification`]: partial-transpose test, witness construction and
//!   product-state witness decompositions.
//! - [`games`]: scenarios, correlations, payoffs, loss handling, tomography and
//!   the end-to-end [`games::certify`] pipeline.
//! - [`formats`]: JSON/CSV exchange formats used by the command-line tool.
//! - [`random`]: seeded samplers for states, channels and strategies.

pub mod certification;
pub mod channels;
mod error;
pub mod formats;
pub mod games;
pub mod operator;
pub mod random;
pub mod tol;

pub use certification::{
    build_witness, ppt_check, sparse_decompose, tomographic_decompose, PptReport,
    PptVerdict, SparseDecomposition, Witness,
};
pub use channels::{
    apply_channel, apply_supermap, choi_to_kraus, compose, depolarizing_channel,
    duality_pairing, erasure_channel, identity_channel, kraus_to_choi, measure_and_prepare,
    ChoiOperator, Instrument, Povm, QuantumChannel, Supermap,
};
pub use error::{Error, Result, Side};
pub use games::{
    admissible_correlation, certify, eb_strategy_correlation, expected_payoff,
    game_from_witness, loss_extend, reconstruct_choi, signature_correlation,
    signature_scenario, CertifyOptions, Certification, Correlation, DecompositionMode,
    Game, InputFamily, Payoff, Scenario, SignatureScenario, Verdict,
};
pub use operator::{
    eig_hermitian, frobenius_inner, kron, max_entangled, operator_schmidt, partial_trace,
    partial_transpose, BipartiteDims, CMatrix, CVector, DensityMatrix, Hermitian,
    OperatorSchmidt, Subsystem,
};
