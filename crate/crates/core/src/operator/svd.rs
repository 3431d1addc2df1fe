use nalgebra::DMatrix;

/// Relative inner-product threshold below which two columns count as orthogonal.
const ORTHOGONALITY: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Thin singular value decomposition `A = U diag(s) Vᵀ`.
pub(crate) struct RealSvd {
    /// `m × n`; columns for zero singular values are zero.
    pub u: DMatrix<f64>,
    /// Descending.
    pub singular: Vec<f64>,
    /// `n × n` orthogonal.
    pub v: DMatrix<f64>,
}

/// One-sided Jacobi (Hestenes) SVD.
///
/// Columns that are already mutually orthogonal are never rotated, so inputs
/// that are diagonal in the working basis keep that basis even when singular
/// values are degenerate. Sorting is stable.
pub(crate) fn jacobi_svd(a: &DMatrix<f64>) -> RealSvd {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma == 0.0 || gamma.abs() <= ORTHOGONALITY * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = DMatrix::<f64>::zeros(m, n);
    let mut v_sorted = DMatrix::<f64>::zeros(n, n);
    let mut singular = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        singular.push(s);
        if s > 0.0 {
            u.set_column(dst, &(w.column(src) / s));
        }
        v_sorted.set_column(dst, &v.column(src));
    }
    RealSvd {
        u,
        singular,
        v: v_sorted,
    }
}

/// Moore-Penrose pseudo-inverse and numerical rank.
///
/// Singular values at or below `rel_tol * s_max` are treated as zero.
pub(crate) fn pseudo_inverse(a: &DMatrix<f64>, rel_tol: f64) -> (DMatrix<f64>, usize) {
    let svd = jacobi_svd(a);
    let (m, n) = a.shape();
    let cutoff = rel_tol * svd.singular.first().copied().unwrap_or(0.0);
    let mut pinv = DMatrix::<f64>::zeros(n, m);
    let mut rank = 0;
    for (k, &s) in svd.singular.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            rank += 1;
            pinv += (svd.v.column(k) * svd.u.column(k).transpose()) / s;
        }
    }
    (pinv, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(svd: &RealSvd) -> DMatrix<f64> {
        let k = svd.singular.len();
        let s = DMatrix::from_fn(k, k, |i, j| if i == j { svd.singular[i] } else { 0.0 });
        &svd.u * s * svd.v.transpose()
    }

    #[test]
    fn reconstructs_rectangular() {
        let a = DMatrix::from_row_slice(3, 4, &[
            1.0, 2.0, 0.5, -1.0, 0.0, 3.0, 1.0, 2.0, -2.0, 0.1, 0.7, 0.0,
        ]);
        let svd = jacobi_svd(&a);
        assert!((reconstruct(&svd) - &a).abs().max() < 1e-12);
        assert!(svd.singular.windows(2).all(|w| w[0] >= w[1]));
        let vtv = svd.v.transpose() * &svd.v;
        assert!((vtv - DMatrix::identity(4, 4)).abs().max() < 1e-12);
        assert!(svd.singular[3] < 1e-12);
    }

    #[test]
    fn degenerate_diagonal_keeps_basis() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-0.5, 0.5, -0.5, 0.5]));
        let svd = jacobi_svd(&a);
        assert_eq!(svd.v, DMatrix::identity(4, 4));
        assert_eq!(svd.singular, vec![0.5; 4]);
        assert_eq!(svd.u, a * 2.0);
    }

    #[test]
    fn pseudo_inverse_of_full_rank_square_is_inverse() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let (p, rank) = pseudo_inverse(&a, 1e-12);
        assert_eq!(rank, 2);
        assert!((p * a - DMatrix::identity(2, 2)).abs().max() < 1e-12);
    }
}
