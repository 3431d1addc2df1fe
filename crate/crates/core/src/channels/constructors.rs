use num_complex::Complex64;

use crate::operator::{eig_hermitian, identity, max_abs, paulis, CMatrix, DensityMatrix};
use crate::{tol, Error, Result};

use super::{Povm, QuantumChannel};

pub fn identity_channel(d: usize) -> QuantumChannel {
    QuantumChannel {
        input_dim: d,
        output_dim: d,
        kraus: vec![identity(d)],
    }
}

/// `ρ ↦ U ρ U†`.
pub fn unitary_channel(u: CMatrix) -> Result<QuantumChannel> {
    let d = u.nrows();
    QuantumChannel::new(u.ncols(), d, vec![u])
}

/// Qubit depolarizing channel `N_ν(ρ) = νρ + (1 - ν) 1/2`.
pub fn depolarizing_channel(nu: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::OutOfRange {
            name: "depolarizing visibility",
            value: nu,
            range: "[0, 1]",
        });
    }
    let mut kraus = vec![identity(2).scale(((1.0 + 3.0 * nu) / 4.0).sqrt())];
    let weight = ((1.0 - nu) / 4.0).sqrt();
    if weight > 0.0 {
        kraus.extend(paulis().iter().map(|p| p.scale(weight)));
    }
    QuantumChannel::new(2, 2, kraus)
}

/// Erasure channel `E_η(ρ) = ηρ + (1 - η)|∅⟩⟨∅|` on dimension `d`.
///
/// The erasure flag `|∅⟩` is an extra basis vector appended at index `d`, so
/// the output dimension is `d + 1` and the flag lies outside the range of any
/// channel feeding into it.
pub fn erasure_channel(eta: f64, d: usize) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            name: "erasure transmission",
            value: eta,
            range: "[0, 1]",
        });
    }
    let mut kraus = Vec::with_capacity(d + 1);
    if eta > 0.0 {
        let s = Complex64::new(eta.sqrt(), 0.0);
        kraus.push(CMatrix::from_fn(d + 1, d, |r, c| if r == c { s } else { Complex64::new(0.0, 0.0) }));
    }
    if eta < 1.0 {
        let s = Complex64::new((1.0 - eta).sqrt(), 0.0);
        for j in 0..d {
            let mut k = CMatrix::zeros(d + 1, d);
            k[(d, j)] = s;
            kraus.push(k);
        }
    }
    QuantumChannel::new(d, d + 1, kraus)
}

/// Measure-and-prepare channel `N(ρ) = Σ_i ρ'_i Tr[Π_i ρ]`.
///
/// Kraus operators are `√(λ_k p_l) |f_l⟩⟨e_k|` from the spectral decompositions
/// `Π_i = Σ λ_k |e_k⟩⟨e_k|` and `ρ'_i = Σ p_l |f_l⟩⟨f_l|`.
pub fn measure_and_prepare(povm: &Povm, preparations: &[DensityMatrix]) -> Result<QuantumChannel> {
    if povm.len() != preparations.len() {
        return Err(Error::CountMismatch {
            context: "measure-and-prepare preparations",
            expected: povm.len(),
            found: preparations.len(),
        });
    }
    let da = povm.dim();
    let db = preparations[0].dim();
    let mut kraus = Vec::new();
    for (element, prep) in povm.elements().iter().zip(preparations) {
        if prep.dim() != db {
            return Err(Error::DimensionMismatch {
                context: "measure-and-prepare preparation",
                expected: db,
                found: prep.dim(),
            });
        }
        let measured = eig_hermitian(element);
        let prepared = eig_hermitian(prep.hermitian());
        for (k, &lambda) in measured.values.iter().enumerate() {
            if lambda <= tol::RANK {
                continue;
            }
            let e = measured.vector(k);
            for (l, &p) in prepared.values.iter().enumerate() {
                if p <= tol::RANK {
                    continue;
                }
                let f = prepared.vector(l);
                let op = (&f * e.adjoint()).scale((lambda * p).sqrt());
                if max_abs(&op) > 0.0 {
                    kraus.push(op);
                }
            }
        }
    }
    QuantumChannel::new(da, db, kraus)
}
