//! Semiquantum signaling games: scenarios, strategies, payoffs, loss handling
//! and tomography from signature data.

mod certify;
mod correlation;
mod game;
mod scenario;
mod strategy;
mod tomography;

pub use certify::{certify, CertifyOptions, Certification, DecompositionMode, Verdict};
pub use correlation::{Correlation, OutcomeTensor, Payoff};
pub use game::{expected_payoff, game_from_witness, loss_extend, Game};
pub use scenario::{
    bell_measurement, signature_scenario, InputFamily, Scenario, SignatureScenario,
};
pub use strategy::{
    admissible_correlation, eb_strategy_correlation, signature_correlation, strategy_correlation,
    Strategy,
};
pub use tomography::{reconstruct_choi, reconstruct_choi_with_tolerance};
