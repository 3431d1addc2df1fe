//! Quantum channels in Kraus and Choi form, measurements, instruments and
//! classically correlated supermaps.

mod constructors;
mod povm;
mod supermap;

use num_complex::Complex64;

use crate::operator::{
    eig_hermitian, identity, kron, max_abs, partial_trace, BipartiteDims, CMatrix, DensityMatrix,
    Hermitian, Subsystem,
};
use crate::{tol, Error, Result};

pub use constructors::{
    depolarizing_channel, erasure_channel, identity_channel, measure_and_prepare, unitary_channel,
};
pub use povm::{Instrument, Povm};
pub use supermap::{apply_supermap, Supermap};

/// Completely positive trace-preserving map stored as Kraus operators
/// `K_k : C^{dA} → C^{dB}`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    input_dim: usize,
    output_dim: usize,
    kraus: Vec<CMatrix>,
}

/// `max |Σ K†K - 1|` over a Kraus family acting on dimension `d`.
pub(crate) fn completeness_residual<'a>(kraus: impl IntoIterator<Item = &'a CMatrix>, d: usize) -> f64 {
    let mut sum = CMatrix::zeros(d, d);
    for k in kraus {
        sum += k.adjoint() * k;
    }
    max_abs(&(sum - identity(d)))
}

impl QuantumChannel {
    pub fn new(input_dim: usize, output_dim: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        let context = "quantum channel";
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::OutOfRange {
                name: "channel dimension",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        if kraus.is_empty() {
            return Err(Error::Empty {
                context,
                what: "Kraus list",
            });
        }
        for k in &kraus {
            if k.nrows() != output_dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator rows",
                    expected: output_dim,
                    found: k.nrows(),
                });
            }
            if k.ncols() != input_dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator columns",
                    expected: input_dim,
                    found: k.ncols(),
                });
            }
            if !k.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { context });
            }
        }
        let residual = completeness_residual(&kraus, input_dim);
        if residual > tol::RECONSTRUCTION {
            return Err(Error::NotTracePreserving { context, residual });
        }
        Ok(QuantumChannel {
            input_dim,
            output_dim,
            kraus,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `Σ_k K_k X K_k†` for an arbitrary operator `X` on the input.
    pub fn apply_operator(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.output_dim, self.output_dim);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    /// Heisenberg picture `Σ_k K_k† Y K_k` for an operator `Y` on the output.
    pub fn apply_adjoint(&self, y: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        out
    }

    /// The channel tensored with the identity on an extra right factor of
    /// dimension `d`.
    pub fn tensor_identity(&self, d: usize) -> QuantumChannel {
        let id = identity(d);
        QuantumChannel {
            input_dim: self.input_dim * d,
            output_dim: self.output_dim * d,
            kraus: self.kraus.iter().map(|k| kron(k, &id)).collect(),
        }
    }
}

/// `N(ρ) = Σ_k K_k ρ K_k†`.
pub fn apply_channel(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != channel.input_dim {
        return Err(Error::DimensionMismatch {
            context: "channel input",
            expected: channel.input_dim,
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::trusted(Hermitian::symmetrized(
        channel.apply_operator(rho.matrix()),
    )))
}

/// Choi state `J = (1 ⊗ N)(Φ₊)` on `A ⊗ B`, normalized to unit trace.
#[derive(Clone, Debug)]
pub struct ChoiOperator {
    matrix: Hermitian,
    dims: BipartiteDims,
}

impl ChoiOperator {
    /// Validates positivity and the marginal `Tr_B J = 1/dA`.
    pub fn new(matrix: CMatrix, dims: BipartiteDims) -> Result<Self> {
        let context = "Choi operator";
        dims.check(&matrix, context)?;
        let matrix = Hermitian::with_context(matrix, context)?;
        let min_eigenvalue = matrix.min_eigenvalue();
        if min_eigenvalue < -tol::PSD {
            return Err(Error::NotPositive {
                context,
                min_eigenvalue,
            });
        }
        let marginal = partial_trace(matrix.matrix(), dims, Subsystem::First)?;
        let residual = max_abs(&(marginal - identity(dims.left).scale(1.0 / dims.left as f64)));
        if residual > tol::RECONSTRUCTION {
            return Err(Error::BadMarginal { context, residual });
        }
        Ok(ChoiOperator { matrix, dims })
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.matrix
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims.left
    }

    pub fn output_dim(&self) -> usize {
        self.dims.right
    }
}

/// Choi state of a channel.
pub fn kraus_to_choi(channel: &QuantumChannel) -> ChoiOperator {
    let (da, db) = (channel.input_dim, channel.output_dim);
    let n = da * db;
    let mut j = CMatrix::zeros(n, n);
    for k in &channel.kraus {
        // (1 ⊗ K)|Φ₊⟩ has amplitude K[b, i] / √dA at |i⟩⊗|b⟩.
        let v = CMatrix::from_fn(n, 1, |r, _| k[(r % db, r / db)]);
        j += &v * v.adjoint();
    }
    ChoiOperator {
        matrix: Hermitian::symmetrized(j.scale(1.0 / da as f64)),
        dims: BipartiteDims {
            left: da,
            right: db,
        },
    }
}

/// Kraus form recovered from the eigendecomposition of the Choi state.
///
/// Eigenvalues below [`tol::RANK`] are dropped.
pub fn choi_to_kraus(choi: &ChoiOperator) -> Result<QuantumChannel> {
    let (da, db) = (choi.dims.left, choi.dims.right);
    let eig = eig_hermitian(&choi.matrix);
    let kraus = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &lambda)| lambda > tol::RANK)
        .map(|(k, &lambda)| {
            let scale = Complex64::new((da as f64 * lambda).sqrt(), 0.0);
            let v = eig.vectors.column(k);
            CMatrix::from_fn(db, da, |b, i| v[i * db + b] * scale)
        })
        .collect();
    QuantumChannel::new(da, db, kraus)
}

/// `dA · Tr[J (Aᵀ ⊗ B)]`, equal to `Tr[N(A) B]`.
pub fn duality_pairing(choi: &ChoiOperator, a: &Hermitian, b: &Hermitian) -> Result<f64> {
    if a.dim() != choi.dims.left {
        return Err(Error::DimensionMismatch {
            context: "duality pairing input operator",
            expected: choi.dims.left,
            found: a.dim(),
        });
    }
    if b.dim() != choi.dims.right {
        return Err(Error::DimensionMismatch {
            context: "duality pairing output operator",
            expected: choi.dims.right,
            found: b.dim(),
        });
    }
    let probe = a.transpose().kron(b);
    Ok(choi.dims.left as f64 * choi.matrix.pair(&probe))
}

/// `second ∘ first`.
pub fn compose(second: &QuantumChannel, first: &QuantumChannel) -> Result<QuantumChannel> {
    if first.output_dim != second.input_dim {
        return Err(Error::DimensionMismatch {
            context: "channel composition",
            expected: second.input_dim,
            found: first.output_dim,
        });
    }
    let mut kraus = Vec::with_capacity(first.kraus.len() * second.kraus.len());
    for k2 in &second.kraus {
        for k1 in &first.kraus {
            let k = k2 * k1;
            if max_abs(&k) > 0.0 {
                kraus.push(k);
            }
        }
    }
    QuantumChannel::new(first.input_dim, second.output_dim, kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{frobenius_norm, max_entangled};

    fn ket0() -> Hermitian {
        DensityMatrix::basis(2, 0).hermitian().clone()
    }

    #[test]
    fn identity_channel_choi_is_max_entangled() {
        let j = kraus_to_choi(&identity_channel(2));
        assert!(max_abs(&(j.matrix() - max_entangled(2).matrix())) < 1e-15);
    }

    #[test]
    fn identity_channel_leaves_state() {
        let rho = DensityMatrix::basis(3, 1);
        let out = apply_channel(&identity_channel(3), &rho).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn apply_checks_dimension() {
        let err = apply_channel(&identity_channel(2), &DensityMatrix::basis(3, 0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn choi_round_trip_for_max_entangled() {
        let j = ChoiOperator::new(max_entangled(2).matrix().clone(), BipartiteDims::new(2, 2).unwrap()).unwrap();
        let n = choi_to_kraus(&j).unwrap();
        assert_eq!(n.kraus().len(), 1);
        let k = &n.kraus()[0];
        // a single Kraus operator equal to the identity up to a global phase
        let phase = k[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(max_abs(&(k - identity(2) * phase)) < 1e-12);
    }

    #[test]
    fn maximally_mixed_choi_is_completely_depolarizing() {
        let j = ChoiOperator::new(identity(4).scale(0.25), BipartiteDims::new(2, 2).unwrap()).unwrap();
        let n = choi_to_kraus(&j).unwrap();
        for k in 0..2 {
            let out = apply_channel(&n, &DensityMatrix::basis(2, k)).unwrap();
            assert!(max_abs(&(out.matrix() - identity(2).scale(0.5))) < 1e-12);
        }
    }

    #[test]
    fn choi_validation_names_invariant() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut m = identity(4).scale(0.25);
        m[(0, 0)] += Complex64::new(0.1, 0.0);
        m[(1, 1)] -= Complex64::new(0.1, 0.0);
        m[(2, 2)] += Complex64::new(0.1, 0.0);
        m[(3, 3)] -= Complex64::new(0.1, 0.0);
        assert!(ChoiOperator::new(m, dims).is_ok());
        let mut m = identity(4).scale(0.25);
        m[(0, 0)] += Complex64::new(0.2, 0.0);
        m[(3, 3)] -= Complex64::new(0.2, 0.0);
        let err = ChoiOperator::new(m, dims).unwrap_err();
        assert!(err.to_string().contains("marginal"), "{err}");
        let err = ChoiOperator::new(identity(4).scale(-0.25), dims).unwrap_err();
        assert!(err.to_string().contains("positivity"), "{err}");
    }

    #[test]
    fn trace_preservation_is_checked() {
        let err = QuantumChannel::new(2, 2, vec![identity(2).scale(0.9)]).unwrap_err();
        match err {
            Error::NotTracePreserving { residual, .. } => assert!((residual - 0.19).abs() < 1e-12),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duality_for_identity_and_depolarizing() {
        let j = kraus_to_choi(&identity_channel(2));
        assert!((duality_pairing(&j, &ket0(), &ket0()).unwrap() - 1.0).abs() < 1e-14);
        for nu in [0.0, 0.3, 0.8, 1.0] {
            let j = kraus_to_choi(&depolarizing_channel(nu).unwrap());
            let value = duality_pairing(&j, &ket0(), &ket0()).unwrap();
            assert!((value - (1.0 + nu) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn compose_with_identity_is_noop() {
        let n = depolarizing_channel(0.4).unwrap();
        let composed = compose(&identity_channel(2), &n).unwrap();
        let diff = kraus_to_choi(&composed).matrix() - kraus_to_choi(&n).matrix();
        assert!(frobenius_norm(&diff) < 1e-12);
        assert!(compose(&identity_channel(3), &n).is_err());
    }
}
