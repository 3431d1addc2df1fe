use nalgebra::DMatrix;

use super::basis::{from_basis_coefficients, hermitian_basis};
use super::{jacobi_svd, kron, BipartiteDims, CMatrix, Hermitian};
use crate::{tol, Result};

/// `W = Σ_k γ_k A_k ⊗ B_k` with orthonormal Hermitian factors.
#[derive(Clone, Debug)]
pub struct OperatorSchmidt {
    pub dims: BipartiteDims,
    /// Nonnegative, descending, each above [`tol::RANK`].
    pub coefficients: Vec<f64>,
    pub left: Vec<Hermitian>,
    pub right: Vec<Hermitian>,
}

impl OperatorSchmidt {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dims.total();
        let mut out = CMatrix::zeros(n, n);
        for ((g, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            out += kron(a.matrix(), b.matrix()).scale(*g);
        }
        out
    }
}

/// Real coordinates `C_ij = Tr[M (G_i ⊗ H_j)]` of a bipartite operator in a
/// product of Hermitian bases.
pub(crate) fn product_coefficients(
    m: &CMatrix,
    dims: BipartiteDims,
    left_basis: &[Hermitian],
    right_basis: &[Hermitian],
) -> DMatrix<f64> {
    let (dl, dr) = (dims.left, dims.right);
    // contracted[j][(a, c)] = Σ_{b,d} M[(a,b),(c,d)] H_j[d,b]
    let contracted: Vec<CMatrix> = right_basis
        .iter()
        .map(|h| {
            let h = h.matrix();
            CMatrix::from_fn(dl, dl, |a, c| {
                let mut acc = super::ZERO;
                for b in 0..dr {
                    for d in 0..dr {
                        acc += m[(a * dr + b, c * dr + d)] * h[(d, b)];
                    }
                }
                acc
            })
        })
        .collect();
    DMatrix::<f64>::from_fn(left_basis.len(), right_basis.len(), |i, j| {
        super::trace_product(&contracted[j], left_basis[i].matrix()).re
    })
}

/// `Σ_ij C_ij G_i ⊗ H_j`.
pub(crate) fn from_product_coefficients(
    coeffs: &DMatrix<f64>,
    left_basis: &[Hermitian],
    right_basis: &[Hermitian],
) -> Hermitian {
    let n = left_basis[0].dim() * right_basis[0].dim();
    let mut out = CMatrix::zeros(n, n);
    for (i, g) in left_basis.iter().enumerate() {
        for (j, h) in right_basis.iter().enumerate() {
            let c = coeffs[(i, j)];
            if c != 0.0 {
                out += kron(g.matrix(), h.matrix()).scale(c);
            }
        }
    }
    Hermitian::symmetrized(out)
}

/// Operator-Schmidt decomposition of a Hermitian bipartite operator.
///
/// `W` is expanded as `Σ_ij C_ij G_i ⊗ H_j` in the orthonormal Hermitian bases of
/// [`hermitian_basis`]; the real coefficient matrix `C` is then factored by SVD.
/// Factors are real combinations of Hermitian basis elements, hence Hermitian.
pub fn operator_schmidt(w: &Hermitian, dims: BipartiteDims) -> Result<OperatorSchmidt> {
    dims.check(w.matrix(), "operator-Schmidt decomposition")?;
    let left_basis = hermitian_basis(dims.left);
    let right_basis = hermitian_basis(dims.right);
    let coeffs = product_coefficients(w.matrix(), dims, &left_basis, &right_basis);

    let svd = jacobi_svd(&coeffs);
    let mut out = OperatorSchmidt {
        dims,
        coefficients: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for (k, &gamma) in svd.singular.iter().enumerate() {
        if gamma < tol::RANK {
            continue;
        }
        let u: Vec<f64> = svd.u.column(k).iter().copied().collect();
        let v: Vec<f64> = svd.v.column(k).iter().copied().collect();
        out.coefficients.push(gamma);
        out.left.push(from_basis_coefficients(&u, &left_basis));
        out.right.push(from_basis_coefficients(&v, &right_basis));
    }
    Ok(out)
}
