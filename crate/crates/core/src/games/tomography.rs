use nalgebra::DMatrix;

use super::{Correlation, SignatureScenario};
use crate::certification::{frame_matrix, invert_frame};
use crate::channels::ChoiOperator;
use crate::operator::{from_product_coefficients, hermitian_basis, BipartiteDims};
use crate::{tol, Error, Result, Side};

/// Choi state recovered from signature data by linear inversion of
/// `Tr[J (ξ_xᵀ ⊗ ψ_yᵀ)] = (dB/dA) σ(1|x,y)`.
///
/// Data carrying an erasure outcome `b = 0` are conditioned on no erasure
/// first.
pub fn reconstruct_choi(sigma: &Correlation, scenario: &SignatureScenario) -> Result<ChoiOperator> {
    reconstruct_choi_with_tolerance(sigma, scenario, tol::RECONSTRUCTION).map(|(j, _)| j)
}

/// [`reconstruct_choi`] with a custom bound on the fit residual, which is
/// returned alongside the Choi state.
pub fn reconstruct_choi_with_tolerance(
    sigma: &Correlation,
    scenario: &SignatureScenario,
    tolerance: f64,
) -> Result<(ChoiOperator, f64)> {
    let s = scenario.scenario();
    let t = sigma.tensor();
    let (nx, ny) = (s.inputs_x().len(), s.inputs_y().len());
    if (t.inputs_x(), t.inputs_y()) != (nx, ny) || !t.labels().contains(&1) {
        return Err(Error::LabelMismatch {
            context: "correlation vs signature scenario",
        });
    }
    let (da, db) = (scenario.dim_a(), scenario.dim_b());
    let ratio = db as f64 / da as f64;
    let mut target = DMatrix::<f64>::zeros(nx, ny);
    for x in 0..nx {
        for y in 0..ny {
            let kept = if t.first_label() == 0 { 1.0 - t.get(0, x, y) } else { 1.0 };
            if kept <= tol::RANK {
                return Err(Error::OutOfRange {
                    name: "non-erased probability",
                    value: kept,
                    range: "(0, 1]",
                });
            }
            target[(x, y)] = ratio * t.get(1, x, y) / kept;
        }
    }
    let left_basis = hermitian_basis(da);
    let right_basis = hermitian_basis(db);
    // target = Fxᵀ C Fy with frames over the transposed inputs.
    let fx = frame_matrix(s.inputs_x(), &left_basis, true);
    let fy = frame_matrix(s.inputs_y(), &right_basis, true);
    let coeffs = invert_frame(&fx, Side::X)?.transpose() * &target * invert_frame(&fy, Side::Y)?;
    let fitted = fx.transpose() * &coeffs * &fy;
    let residual = (fitted - &target).norm();
    if residual > tolerance {
        return Err(Error::InconsistentData { residual, tolerance });
    }
    let j = from_product_coefficients(&coeffs, &left_basis, &right_basis);
    let choi = ChoiOperator::new(j.into_matrix(), BipartiteDims::new(da, db)?)?;
    Ok((choi, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing_channel, kraus_to_choi};
    use crate::games::{signature_correlation, signature_scenario, InputFamily};
    use crate::operator::{frobenius_norm, max_entangled, CMatrix};
    use crate::random::Sampler;

    #[test]
    fn depolarizing_round_trip() {
        let sig = SignatureScenario::new(2, 2, InputFamily::Tetrahedral).unwrap();
        let nu = 0.4;
        let p = signature_correlation(&depolarizing_channel(nu).unwrap(), &sig).unwrap();
        let j = reconstruct_choi(&p, &sig).unwrap();
        let expected = max_entangled(2).matrix().scale(nu) + CMatrix::identity(4, 4).scale((1.0 - nu) / 4.0);
        assert!(frobenius_norm(&(j.matrix() - expected)) < 1e-12);
    }

    #[test]
    fn rectangular_round_trip() {
        let mut s = Sampler::seeded(21);
        let channel = s.channel(3, 2, 3);
        let sig = signature_scenario(3, 2);
        let p = signature_correlation(&channel, &sig).unwrap();
        let j = reconstruct_choi(&p, &sig).unwrap();
        assert!(frobenius_norm(&(j.matrix() - kraus_to_choi(&channel).matrix())) < 1e-10);
    }
}
