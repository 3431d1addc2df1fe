//! Fixtures shared by the pipeline benchmarks.

use qmem_core::random::Sampler;
use qmem_core::{kraus_to_choi, BipartiteDims, ChoiOperator, QuantumChannel, Witness};

/// Random isometric channel `d → d` (entangling, so certification runs every stage).
pub fn isometry(d: usize, seed: u64) -> QuantumChannel {
    Sampler::seeded(seed).channel(d, d, 1)
}

pub fn choi(d: usize, seed: u64) -> ChoiOperator {
    kraus_to_choi(&isometry(d, seed))
}

/// Random Hermitian operator on `C^d ⊗ C^d` wrapped as a witness.
pub fn random_witness(d: usize, seed: u64) -> Witness {
    let w = Sampler::seeded(seed).hermitian(d * d);
    Witness::new(w, BipartiteDims::new(d, d).expect("positive dimensions")).expect("square operator")
}
