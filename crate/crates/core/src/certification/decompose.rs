use nalgebra::DMatrix;

use super::Witness;
use crate::operator::{
    basis_coefficients, eig_hermitian, frobenius_norm, hermitian_basis,
    kron, max_abs, operator_schmidt, product_coefficients, pseudo_inverse, BipartiteDims, CMatrix,
    DensityMatrix, Hermitian,
};
use crate::{tol, Error, Result, Side};

/// Relative singular-value cutoff used for frame ranks.
const FRAME_RANK: f64 = 1e-10;
/// States closer than this (max entry) are merged.
const SAME_STATE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficient {
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

/// `W = Σ_xy ω_xy (ξ_xᵀ ⊗ ψ_yᵀ)`, equivalently `Wᵀ = Σ_xy ω_xy (ξ_x ⊗ ψ_y)`.
#[derive(Clone, Debug)]
pub struct SparseDecomposition {
    pub states_x: Vec<DensityMatrix>,
    pub states_y: Vec<DensityMatrix>,
    /// Nonzero coefficients in `(x, y)` order.
    pub omega: Vec<Coefficient>,
}

impl SparseDecomposition {
    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            left: self.states_x[0].dim(),
            right: self.states_y[0].dim(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.omega.iter().filter(|c| c.value.abs() > tol::RANK).count()
    }

    /// `Σ ω_xy ξ_xᵀ ⊗ ψ_yᵀ`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dims().total();
        let mut out = CMatrix::zeros(n, n);
        for c in &self.omega {
            let term = kron(
                self.states_x[c.x].transpose().matrix(),
                self.states_y[c.y].transpose().matrix(),
            );
            out += term.scale(c.value);
        }
        out
    }

    /// Frobenius distance between the reconstruction and `w`.
    pub fn residual(&self, w: &Witness) -> f64 {
        frobenius_norm(&(self.reconstruct() - w.operator().matrix()))
    }

    pub fn coefficient(&self, x: usize, y: usize) -> f64 {
        self.omega
            .iter()
            .find(|c| c.x == x && c.y == y)
            .map_or(0.0, |c| c.value)
    }
}

/// Columns are the basis coordinates of each state (optionally transposed).
pub(crate) fn frame_matrix(states: &[DensityMatrix], basis: &[Hermitian], transpose: bool) -> DMatrix<f64> {
    let columns: Vec<Vec<f64>> = states
        .iter()
        .map(|s| {
            if transpose {
                basis_coefficients(s.transpose().matrix(), basis)
            } else {
                basis_coefficients(s.matrix(), basis)
            }
        })
        .collect();
    DMatrix::from_fn(basis.len(), states.len(), |i, x| columns[x][i])
}

/// Pseudo-inverse of a frame, failing unless it spans the full operator space.
pub(crate) fn invert_frame(frame: &DMatrix<f64>, side: Side) -> Result<DMatrix<f64>> {
    let required = frame.nrows();
    let (pinv, rank) = pseudo_inverse(frame, FRAME_RANK);
    if rank < required {
        return Err(Error::RankDeficient {
            side,
            rank,
            required,
        });
    }
    Ok(pinv)
}

/// Linear-inversion coefficients of `w` over tomographically complete families.
///
/// With basis coordinates `C` of `Wᵀ` and frames `F`, `G` whose columns are the
/// coordinates of `ξ_x`, `ψ_y`, the coefficients solve `C = F Ω Gᵀ`. Families
/// larger than `d²` get the minimum-norm solution.
pub fn tomographic_decompose(
    w: &Witness,
    inputs_x: &[DensityMatrix],
    inputs_y: &[DensityMatrix],
) -> Result<SparseDecomposition> {
    let dims = w.dims();
    check_family(inputs_x, dims.left, "first-round inputs")?;
    check_family(inputs_y, dims.right, "second-round inputs")?;
    let left_basis = hermitian_basis(dims.left);
    let right_basis = hermitian_basis(dims.right);
    let target = product_coefficients(w.operator().transpose().matrix(), dims, &left_basis, &right_basis);
    let fx = frame_matrix(inputs_x, &left_basis, false);
    let fy = frame_matrix(inputs_y, &right_basis, false);
    let omega = invert_frame(&fx, Side::X)? * &target * invert_frame(&fy, Side::Y)?.transpose();

    let mut coefficients = Vec::new();
    for x in 0..inputs_x.len() {
        for y in 0..inputs_y.len() {
            let value = omega[(x, y)];
            if value.abs() > tol::RANK {
                coefficients.push(Coefficient { x, y, value });
            }
        }
    }
    let dec = SparseDecomposition {
        states_x: inputs_x.to_vec(),
        states_y: inputs_y.to_vec(),
        omega: coefficients,
    };
    let residual = dec.residual(w);
    if residual > tol::RECONSTRUCTION {
        return Err(Error::InconsistentData {
            residual,
            tolerance: tol::RECONSTRUCTION,
        });
    }
    Ok(dec)
}

fn check_family(states: &[DensityMatrix], d: usize, context: &'static str) -> Result<()> {
    if states.is_empty() {
        return Err(Error::Empty {
            context,
            what: "state family",
        });
    }
    for s in states {
        if s.dim() != d {
            return Err(Error::DimensionMismatch {
                context,
                expected: d,
                found: s.dim(),
            });
        }
    }
    Ok(())
}

/// A Hermitian operator written as `sign · (state - shift · 1)` with `state`
/// positive semidefinite and `shift ≥ 0` minimal.
struct Shifted {
    sign: f64,
    shift: f64,
    state: Hermitian,
}

/// Picks the orientation `±op` needing the smaller identity shift to become
/// positive semidefinite. On a tie, the orientation whose first nonzero
/// traceless coordinate is positive wins.
fn shift_to_psd(op: &Hermitian, basis: &[Hermitian]) -> Shifted {
    let eig = eig_hermitian(op);
    let lo = eig.values[0];
    let hi = *eig.values.last().expect("nonempty spectrum");
    let plus = (-lo).max(0.0);
    let minus = hi.max(0.0);
    let sign = if (plus - minus).abs() > tol::RANK {
        if plus < minus {
            1.0
        } else {
            -1.0
        }
    } else {
        let coords = basis_coefficients(op.matrix(), basis);
        match coords[1..].iter().find(|c| c.abs() > tol::RANK) {
            Some(c) if *c < 0.0 => -1.0,
            Some(_) => 1.0,
            None if coords[0] < 0.0 => -1.0,
            None => 1.0,
        }
    };
    let shift = if sign > 0.0 { plus } else { minus };
    Shifted {
        sign,
        shift,
        state: op.scale(sign).shifted(shift),
    }
}

/// Collects unnormalized product terms, normalizes them to states and merges
/// coinciding states.
struct TermCollector {
    states_x: Vec<DensityMatrix>,
    states_y: Vec<DensityMatrix>,
    omega: Vec<Coefficient>,
}

impl TermCollector {
    fn new() -> Self {
        TermCollector {
            states_x: Vec::new(),
            states_y: Vec::new(),
            omega: Vec::new(),
        }
    }

    fn index_of(states: &mut Vec<DensityMatrix>, state: DensityMatrix) -> usize {
        if let Some(k) = states
            .iter()
            .position(|s| max_abs(&(s.matrix() - state.matrix())) <= SAME_STATE)
        {
            return k;
        }
        states.push(state);
        states.len() - 1
    }

    /// Adds `weight · (x ⊗ y)` for positive semidefinite `x`, `y`.
    fn push(&mut self, weight: f64, x: &Hermitian, y: &Hermitian) {
        let (tx, ty) = (x.trace(), y.trace());
        if tx <= tol::RANK || ty <= tol::RANK || weight == 0.0 {
            return;
        }
        let xi = Self::index_of(&mut self.states_x, DensityMatrix::trusted(x.scale(1.0 / tx)));
        let yi = Self::index_of(&mut self.states_y, DensityMatrix::trusted(y.scale(1.0 / ty)));
        let value = weight * tx * ty;
        match self.omega.iter_mut().find(|c| c.x == xi && c.y == yi) {
            Some(c) => c.value += value,
            None => self.omega.push(Coefficient { x: xi, y: yi, value }),
        }
    }

    /// Drops vanishing coefficients and unused states, renumbering the rest in
    /// order of first appearance.
    fn finish(self) -> SparseDecomposition {
        let omega: Vec<Coefficient> = self
            .omega
            .into_iter()
            .filter(|c| c.value.abs() > tol::RANK)
            .collect();
        let keep = |n: usize, pick: &dyn Fn(&Coefficient) -> usize| -> Vec<Option<usize>> {
            let mut map = vec![None; n];
            let mut next = 0;
            for (k, slot) in map.iter_mut().enumerate() {
                if omega.iter().any(|c| pick(c) == k) {
                    *slot = Some(next);
                    next += 1;
                }
            }
            map
        };
        let map_x = keep(self.states_x.len(), &|c| c.x);
        let map_y = keep(self.states_y.len(), &|c| c.y);
        let filter = |states: Vec<DensityMatrix>, map: &[Option<usize>]| -> Vec<DensityMatrix> {
            states
                .into_iter()
                .zip(map)
                .filter_map(|(s, m)| m.map(|_| s))
                .collect()
        };
        let mut omega: Vec<Coefficient> = omega
            .iter()
            .map(|c| Coefficient {
                x: map_x[c.x].expect("used state"),
                y: map_y[c.y].expect("used state"),
                value: c.value,
            })
            .collect();
        omega.sort_by_key(|c| (c.x, c.y));
        SparseDecomposition {
            states_x: filter(self.states_x, &map_x),
            states_y: filter(self.states_y, &map_y),
            omega,
        }
    }
}

/// Decomposition with at most `d² + 3` nonzero coefficients, `d = min(dX, dY)`.
///
/// Steps, all on `Wᵀ`:
/// 1. operator-Schmidt decomposition `Wᵀ = Σ_i γ_i A_i ⊗ B_i`;
/// 2. each factor is written as `±(ξ̃_i - a_i 1)` (resp. `±(ψ̃_i - b_i 1)`) with
///    the minimal shift `a_i, b_i ≥ 0` that makes `ξ̃_i, ψ̃_i` positive;
/// 3. the cross terms collect into `Ã ⊗ 1 + 1 ⊗ B̃ + μ 1 ⊗ 1`, and `Ã`, `B̃`
///    are shifted the same way;
/// 4. every term is normalized to unit-trace states with the traces moved into
///    the coefficients, and coinciding states are merged.
///
/// The result is expressed in the `W = Σ ω ξᵀ ⊗ ψᵀ` convention, which has the
/// same states and coefficients as the `Wᵀ = Σ ω ξ ⊗ ψ` form.
pub fn sparse_decompose(w: &Witness) -> Result<SparseDecomposition> {
    let dims = w.dims();
    let schmidt = operator_schmidt(&w.operator().transpose(), dims)?;
    let left_basis = hermitian_basis(dims.left);
    let right_basis = hermitian_basis(dims.right);
    let one_x = Hermitian::identity(dims.left);
    let one_y = Hermitian::identity(dims.right);

    let mut agg_x = Hermitian::zeros(dims.left);
    let mut agg_y = Hermitian::zeros(dims.right);
    let mut mu = 0.0;
    let mut products = Vec::with_capacity(schmidt.len());
    for ((gamma, a), b) in schmidt.coefficients.iter().zip(&schmidt.left).zip(&schmidt.right) {
        let sx = shift_to_psd(a, &left_basis);
        let sy = shift_to_psd(b, &right_basis);
        // γ A ⊗ B = c (ξ̃ - a)(ψ̃ - b)
        let c = gamma * sx.sign * sy.sign;
        agg_x = agg_x.add(&sx.state.scale(-c * sy.shift));
        agg_y = agg_y.add(&sy.state.scale(-c * sx.shift));
        mu += c * sx.shift * sy.shift;
        products.push((c, sx.state, sy.state));
    }
    let tx = shift_to_psd(&agg_x, &left_basis);
    let ty = shift_to_psd(&agg_y, &right_basis);

    let mut terms = TermCollector::new();
    terms.push(mu - tx.sign * tx.shift - ty.sign * ty.shift, &one_x, &one_y);
    for (c, x, y) in &products {
        terms.push(*c, x, y);
    }
    terms.push(ty.sign, &one_x, &ty.state);
    terms.push(tx.sign, &tx.state, &one_y);
    let dec = terms.finish();
    debug_assert!(dec.residual(w) <= tol::RECONSTRUCTION);
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{identity, max_entangled, paulis};

    fn phi_witness() -> Witness {
        let w = max_entangled(2).hermitian().shifted(-0.5);
        Witness::new(w, BipartiteDims::new(2, 2).unwrap()).unwrap()
    }

    fn qubit_state(bloch: [f64; 3]) -> CMatrix {
        let [x, y, z] = paulis();
        (identity(2) + x.scale(bloch[0]) + y.scale(bloch[1]) + z.scale(bloch[2])).scale(0.5)
    }

    #[test]
    fn sparse_decomposition_of_phi_witness() {
        let dec = sparse_decompose(&phi_witness()).unwrap();
        assert_eq!(dec.nonzero_count(), 6);
        assert!(dec.residual(&phi_witness()) < 1e-12);
        let r3 = 1.0 / 3f64.sqrt();
        let expected_states = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [r3, -r3, r3],
        ];
        for (k, bloch) in expected_states.iter().enumerate() {
            assert!(max_abs(&(dec.states_x[k].matrix() - qubit_state(*bloch))) < 1e-12, "xi_{k}");
            assert!(max_abs(&(dec.states_y[k].matrix() - qubit_state(*bloch))) < 1e-12, "psi_{k}");
        }
        let s3 = 3f64.sqrt();
        let expected = [
            (0, 0, 2.0 * (s3 - 1.0)),
            (0, 4, -s3),
            (4, 0, -s3),
            (1, 1, 1.0),
            (2, 2, -1.0),
            (3, 3, 1.0),
        ];
        for (x, y, value) in expected {
            assert!((dec.coefficient(x, y) - value).abs() < 1e-12, "omega_{x}{y}");
        }
    }

    #[test]
    fn sparse_decomposition_of_product_operator() {
        let rho = DensityMatrix::new(qubit_state([0.3, -0.2, 0.5])).unwrap();
        let sigma = DensityMatrix::new(qubit_state([0.0, 0.6, -0.1])).unwrap();
        let op = rho.transpose().kron(&sigma.transpose()).hermitian().scale(2.5);
        let w = Witness::new(op, BipartiteDims::new(2, 2).unwrap()).unwrap();
        let dec = sparse_decompose(&w).unwrap();
        assert!(dec.residual(&w) < 1e-9);
        assert!(dec.nonzero_count() <= 7);
    }

    #[test]
    fn tomographic_decomposition_of_basis_element() {
        let states: Vec<DensityMatrix> = [
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, -1.0],
        ]
        .iter()
        .map(|b| DensityMatrix::new(qubit_state(*b)).unwrap())
        .collect();
        let op = states[1].transpose().kron(&states[1].transpose()).hermitian().clone();
        let w = Witness::new(op, BipartiteDims::new(2, 2).unwrap()).unwrap();
        let dec = tomographic_decompose(&w, &states, &states).unwrap();
        assert_eq!(dec.nonzero_count(), 1);
        assert!((dec.coefficient(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tomographic_rejects_incomplete_family() {
        let states = vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)];
        let err = tomographic_decompose(&phi_witness(), &states, &states).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { side: Side::X, rank: 2, required: 4 }), "{err}");
    }
}
