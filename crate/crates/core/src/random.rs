//! Seeded samplers. Every draw is a deterministic function of the seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{Instrument, Povm, QuantumChannel, Supermap};
use crate::operator::{inverse_sqrt, CMatrix, CVector, DensityMatrix, Hermitian};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn seeded(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Matrix with i.i.d. standard complex Gaussian entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(self.normal(), self.normal())
        })
    }

    /// Haar-random unit vector.
    pub fn pure_vector(&mut self, d: usize) -> CVector {
        let v = CVector::from_fn(d, |_, _| Complex64::new(self.normal(), self.normal()));
        let norm = v.norm();
        v.unscale(norm)
    }

    pub fn pure_state(&mut self, d: usize) -> DensityMatrix {
        DensityMatrix::trusted(Hermitian::projector(&self.pure_vector(d)))
    }

    /// Hilbert-Schmidt random mixed state.
    pub fn density_matrix(&mut self, d: usize) -> DensityMatrix {
        let g = self.ginibre(d, d);
        let rho = &g * g.adjoint();
        let trace = rho.trace().re;
        DensityMatrix::trusted(Hermitian::symmetrized(rho.unscale(trace)))
    }

    /// Hermitian matrix with Gaussian entries.
    pub fn hermitian(&mut self, d: usize) -> Hermitian {
        let g = self.ginibre(d, d);
        Hermitian::symmetrized((&g + g.adjoint()).scale(0.5))
    }

    pub fn unitary(&mut self, d: usize) -> CMatrix {
        let g = self.ginibre(d, d);
        let gram = Hermitian::symmetrized(g.adjoint() * &g);
        &g * inverse_sqrt(&gram).expect("Ginibre matrices are almost surely invertible")
    }

    /// Operators `K_k` normalized so that `Σ K_k† K_k = 1`.
    fn normalized_kraus(&mut self, din: usize, dout: usize, count: usize) -> Vec<CMatrix> {
        let raw: Vec<CMatrix> = (0..count).map(|_| self.ginibre(dout, din)).collect();
        let mut gram = CMatrix::zeros(din, din);
        for k in &raw {
            gram += k.adjoint() * k;
        }
        let inv = inverse_sqrt(&Hermitian::symmetrized(gram)).expect("full-rank Kraus sum");
        raw.into_iter().map(|k| k * &inv).collect()
    }

    /// Random channel with `kraus_count` Kraus operators, raised to
    /// `⌈din/dout⌉` when fewer cannot be trace preserving.
    pub fn channel(&mut self, din: usize, dout: usize, kraus_count: usize) -> QuantumChannel {
        let kraus = self.normalized_kraus(din, dout, kraus_count.max(din.div_ceil(dout)));
        QuantumChannel::new(din, dout, kraus).expect("normalized Kraus operators")
    }

    /// Random full-rank POVM with `n` elements.
    pub fn povm(&mut self, d: usize, n: usize) -> Povm {
        let raw: Vec<CMatrix> = (0..n)
            .map(|_| {
                let g = self.ginibre(d, d);
                &g * g.adjoint()
            })
            .collect();
        let total = raw.iter().fold(CMatrix::zeros(d, d), |acc, e| acc + e);
        let inv = inverse_sqrt(&Hermitian::symmetrized(total)).expect("full-rank POVM sum");
        let elements = raw
            .iter()
            .map(|e| Hermitian::symmetrized(&inv * e * &inv))
            .collect();
        Povm::new(elements).expect("normalized POVM")
    }

    /// Random instrument with `branches` branches of `kraus_per_branch`
    /// Kraus operators each, raised when too few to be trace preserving.
    pub fn instrument(
        &mut self,
        din: usize,
        dout: usize,
        branches: usize,
        kraus_per_branch: usize,
    ) -> Instrument {
        let per = kraus_per_branch.max(din.div_ceil(dout * branches)).max(1);
        let mut kraus = self.normalized_kraus(din, dout, branches * per).into_iter();
        let branches = (0..branches)
            .map(|_| kraus.by_ref().take(per).collect())
            .collect();
        Instrument::new(din, dout, branches).expect("normalized instrument")
    }

    /// Entanglement-breaking channel `ρ ↦ Σ_k Tr(E_k ρ) σ_k` with `n` outcomes.
    pub fn measure_and_prepare(&mut self, din: usize, dout: usize, n: usize) -> QuantumChannel {
        let povm = self.povm(din, n);
        let preps: Vec<DensityMatrix> = (0..n).map(|_| self.density_matrix(dout)).collect();
        crate::channels::measure_and_prepare(&povm, &preps).expect("matching counts")
    }

    /// Random classically correlated supermap turning channels `d_mid_in → d_mid_out`
    /// into channels `d_in → d_out`.
    pub fn supermap(
        &mut self,
        d_in: usize,
        d_mid_in: usize,
        d_mid_out: usize,
        d_out: usize,
        branches: usize,
    ) -> Supermap {
        let instrument = self.instrument(d_in, d_mid_in, branches, 1);
        let decoders = (0..branches)
            .map(|_| self.channel(d_mid_out, d_out, 2))
            .collect();
        Supermap::new(instrument, decoders).expect("consistent supermap")
    }

    /// Random mixture of `terms` product states.
    pub fn separable_state(&mut self, da: usize, db: usize, terms: usize) -> DensityMatrix {
        let weights: Vec<f64> = (0..terms).map(|_| self.uniform() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let mut m = CMatrix::zeros(da * db, da * db);
        for w in weights {
            let product = self.density_matrix(da).kron(&self.density_matrix(db));
            m += product.matrix().scale(w / total);
        }
        DensityMatrix::trusted(Hermitian::symmetrized(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{identity, max_abs};

    #[test]
    fn same_seed_same_draws() {
        let a = Sampler::seeded(3).density_matrix(3);
        let b = Sampler::seeded(3).density_matrix(3);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn samples_are_valid() {
        let mut s = Sampler::seeded(11);
        let u = s.unitary(3);
        assert!(max_abs(&(u.adjoint() * &u - identity(3))) < 1e-12);
        assert!(s.density_matrix(4).hermitian().min_eigenvalue() > -1e-12);
        let ch = s.channel(2, 3, 3);
        assert_eq!((ch.input_dim(), ch.output_dim(), ch.kraus().len()), (2, 3, 3));
        assert_eq!(s.povm(3, 5).len(), 5);
        assert_eq!(s.instrument(2, 2, 3, 2).branch_count(), 3);
        let sep = s.separable_state(2, 2, 4);
        assert!((sep.hermitian().trace() - 1.0).abs() < 1e-12);
    }
}
