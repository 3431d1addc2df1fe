use num_complex::Complex64;

use super::{trace_product, CMatrix, Hermitian, ONE, I};

/// Orthonormal Hermitian operator basis of dimension `d²`.
///
/// Order: `1/√d`, then for each pair `j < k` the symmetric and antisymmetric
/// off-diagonal elements, then the `d - 1` traceless diagonal elements. Every
/// element `G` satisfies `Tr(G_a G_b) = δ_ab`. For `d = 2` this is
/// `(1, σ_x, σ_y, σ_z) / √2`.
pub fn hermitian_basis(d: usize) -> Vec<Hermitian> {
    let mut basis = Vec::with_capacity(d * d);
    basis.push(Hermitian::identity(d).scale(1.0 / (d as f64).sqrt()));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = ONE * h;
            sym[(k, j)] = ONE * h;
            basis.push(Hermitian::symmetrized(sym));
            let mut anti = CMatrix::zeros(d, d);
            anti[(j, k)] = -I * h;
            anti[(k, j)] = I * h;
            basis.push(Hermitian::symmetrized(anti));
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for m in 0..l {
            diag[(m, m)] = Complex64::new(norm, 0.0);
        }
        diag[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        basis.push(Hermitian::symmetrized(diag));
    }
    basis
}

/// Real coordinates `Tr(G_a M)` of `m` in `basis`.
pub fn basis_coefficients(m: &CMatrix, basis: &[Hermitian]) -> Vec<f64> {
    basis.iter().map(|g| trace_product(g.matrix(), m).re).collect()
}

/// `Σ_a c_a G_a`.
pub fn from_basis_coefficients(coefficients: &[f64], basis: &[Hermitian]) -> Hermitian {
    let d = basis[0].dim();
    let mut out = CMatrix::zeros(d, d);
    for (c, g) in coefficients.iter().zip(basis) {
        if *c != 0.0 {
            out += g.matrix().scale(*c);
        }
    }
    Hermitian::symmetrized(out)
}
