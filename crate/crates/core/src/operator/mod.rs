//! Dense complex matrices on bipartite systems.
//!
//! Subsystems are ordered row-major with the left factor as the most significant
//! index: basis vector `|i⟩⊗|k⟩` sits at position `i * right + k`.

mod basis;
mod schmidt;
mod svd;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{tol, Error, Result};

pub use basis::{basis_coefficients, from_basis_coefficients, hermitian_basis};
pub use schmidt::{operator_schmidt, OperatorSchmidt};
pub(crate) use schmidt::{from_product_coefficients, product_coefficients};
pub(crate) use svd::{jacobi_svd, pseudo_inverse};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Real matrix promoted to complex entries.
pub fn complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

fn check_finite(m: &CMatrix, context: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

fn check_square(m: &CMatrix, context: &'static str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            context,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Square matrix equal to its conjugate transpose.
///
/// Construction accepts deviations up to [`tol::HERMITIAN`] and stores the
/// exactly Hermitian part `(M + M†)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(CMatrix);

impl Hermitian {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_context(m, "Hermitian operator")
    }

    pub(crate) fn with_context(m: CMatrix, context: &'static str) -> Result<Self> {
        check_square(&m, context)?;
        check_finite(&m, context)?;
        let residual = max_abs(&(&m - m.adjoint()));
        if residual > tol::HERMITIAN {
            return Err(Error::NotHermitian { context, residual });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part of `m`, skipping validation.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Hermitian((m + adj).scale(0.5))
    }

    pub fn identity(d: usize) -> Self {
        Hermitian(identity(d))
    }

    pub fn zeros(d: usize) -> Self {
        Hermitian(CMatrix::zeros(d, d))
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Hermitian(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// Rank-one operator `|v⟩⟨v|`.
    pub fn projector(v: &CVector) -> Self {
        Hermitian(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Transpose in the computational basis (equal to complex conjugation).
    pub fn transpose(&self) -> Self {
        Hermitian(self.0.transpose())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Hermitian(self.0.scale(factor))
    }

    pub fn add(&self, other: &Hermitian) -> Self {
        Hermitian(&self.0 + &other.0)
    }

    /// `self + shift * 1`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        Hermitian(m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eig_hermitian(self).values[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *eig_hermitian(self).values.last().expect("nonempty spectrum")
    }

    /// Real expectation `Tr(self · other)` for a Hermitian pair.
    pub fn pair(&self, other: &Hermitian) -> f64 {
        trace_product(&self.0, &other.0).re
    }

    pub fn kron(&self, other: &Hermitian) -> Hermitian {
        Hermitian(kron(&self.0, &other.0))
    }
}

impl AsRef<CMatrix> for Hermitian {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

/// Unit-trace positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Hermitian);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::from_hermitian(Hermitian::with_context(m, "density matrix")?)
    }

    pub fn from_hermitian(h: Hermitian) -> Result<Self> {
        let context = "density matrix";
        let trace = h.trace();
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::TraceNotOne { context, trace });
        }
        let min_eigenvalue = h.min_eigenvalue();
        if min_eigenvalue < -tol::PSD {
            return Err(Error::NotPositive {
                context,
                min_eigenvalue,
            });
        }
        Ok(DensityMatrix(h))
    }

    /// Wraps an operator already known to be a state.
    pub(crate) fn trusted(h: Hermitian) -> Self {
        DensityMatrix(h)
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::OutOfRange {
                name: "state vector norm",
                value: norm,
                range: "(0, inf)",
            });
        }
        Ok(DensityMatrix(Hermitian::projector(&v.unscale(norm))))
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = CVector::zeros(d);
        v[k] = ONE;
        DensityMatrix(Hermitian::projector(&v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(Hermitian::identity(d).scale(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn transpose(&self) -> Self {
        DensityMatrix(self.0.transpose())
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0.kron(&other.0))
    }
}

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        self.0.matrix()
    }
}

/// Dimensions of the two factors of `H_X ⊗ H_Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    pub left: usize,
    pub right: usize,
}

impl BipartiteDims {
    pub fn new(left: usize, right: usize) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::OutOfRange {
                name: "subsystem dimension",
                value: left.min(right) as f64,
                range: "[1, inf)",
            });
        }
        Ok(BipartiteDims { left, right })
    }

    pub fn total(&self) -> usize {
        self.left * self.right
    }

    /// Checks that `m` is a square operator on the full space.
    pub fn check(&self, m: &CMatrix, context: &'static str) -> Result<()> {
        let n = check_square(m, context)?;
        if n != self.total() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.total(),
                found: n,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product, left factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Reduced operator on the `keep` subsystem.
pub fn partial_trace(m: &CMatrix, dims: BipartiteDims, keep: Subsystem) -> Result<CMatrix> {
    dims.check(m, "partial trace")?;
    let (dl, dr) = (dims.left, dims.right);
    Ok(match keep {
        Subsystem::First => CMatrix::from_fn(dl, dl, |i, j| {
            (0..dr).map(|k| m[(i * dr + k, j * dr + k)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(dr, dr, |k, l| {
            (0..dl).map(|i| m[(i * dr + k, i * dr + l)]).sum()
        }),
    })
}

/// Transpose of the `on` factor in the computational basis.
pub fn partial_transpose(m: &CMatrix, dims: BipartiteDims, on: Subsystem) -> Result<CMatrix> {
    dims.check(m, "partial transpose")?;
    let dr = dims.right;
    let n = dims.total();
    Ok(CMatrix::from_fn(n, n, |r, c| {
        let (i, k) = (r / dr, r % dr);
        let (j, l) = (c / dr, c % dr);
        match on {
            Subsystem::Second => m[(i * dr + l, j * dr + k)],
            Subsystem::First => m[(j * dr + k, i * dr + l)],
        }
    }))
}

/// Spectrum of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

/// Eigendecomposition with eigenvalues sorted ascending.
///
/// Ties keep the order produced by the underlying solver, so results are
/// deterministic for a given input.
pub fn eig_hermitian(h: &Hermitian) -> HermitianEigen {
    let eig = h.matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = h.dim();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// `Tr(A† B)`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            context: "Frobenius inner product",
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// `Φ₊ = (1/d) Σ_ij |ii⟩⟨jj|`.
pub fn max_entangled(d: usize) -> DensityMatrix {
    DensityMatrix::trusted(Hermitian::projector(&max_entangled_vector(d)))
}

/// `(1/√d) Σ_i |ii⟩`.
pub fn max_entangled_vector(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn paulis() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Inverse square root of a positive definite operator.
pub(crate) fn inverse_sqrt(h: &Hermitian) -> Result<CMatrix> {
    let eig = eig_hermitian(h);
    if eig.values[0] <= tol::RANK {
        return Err(Error::NotPositive {
            context: "inverse square root",
            min_eigenvalue: eig.values[0],
        });
    }
    let n = h.dim();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        out += (&v * v.adjoint()).scale(1.0 / lambda.sqrt());
    }
    Ok(out)
}
