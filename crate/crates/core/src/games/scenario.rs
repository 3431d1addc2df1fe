use num_complex::Complex64;

use crate::certification::{frame_matrix, invert_frame};
use crate::channels::Povm;
use crate::operator::{hermitian_basis, identity, paulis, CMatrix, CVector, DensityMatrix, Hermitian, ONE, ZERO};
use crate::{Error, Result, Side};

/// Trusted question families and the number of answers.
#[derive(Clone, Debug)]
pub struct Scenario {
    inputs_x: Vec<DensityMatrix>,
    inputs_y: Vec<DensityMatrix>,
    outcome_count: usize,
}

impl Scenario {
    pub fn new(
        inputs_x: Vec<DensityMatrix>,
        inputs_y: Vec<DensityMatrix>,
        outcome_count: usize,
    ) -> Result<Self> {
        check_family(&inputs_x, "first-round inputs")?;
        check_family(&inputs_y, "second-round inputs")?;
        if outcome_count == 0 {
            return Err(Error::Empty {
                context: "scenario",
                what: "outcome set",
            });
        }
        Ok(Scenario {
            inputs_x,
            inputs_y,
            outcome_count,
        })
    }

    pub fn inputs_x(&self) -> &[DensityMatrix] {
        &self.inputs_x
    }

    pub fn inputs_y(&self) -> &[DensityMatrix] {
        &self.inputs_y
    }

    pub fn outcome_count(&self) -> usize {
        self.outcome_count
    }

    pub fn dim_x(&self) -> usize {
        self.inputs_x[0].dim()
    }

    pub fn dim_y(&self) -> usize {
        self.inputs_y[0].dim()
    }
}

impl AsRef<Scenario> for Scenario {
    fn as_ref(&self) -> &Scenario {
        self
    }
}

fn check_family(states: &[DensityMatrix], context: &'static str) -> Result<()> {
    let first = states.first().ok_or(Error::Empty {
        context,
        what: "state family",
    })?;
    for s in states {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: first.dim(),
                found: s.dim(),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InputFamily {
    /// `|j⟩`, `(|j⟩+|k⟩)/√2`, `(|j⟩+i|k⟩)/√2` for `j < k`.
    #[default]
    Standard,
    /// Qubit only: `U τ U†` with `U ∈ {1, X, Y, Z}` and
    /// `τ = 1/2 + (X + Y + Z)/√12`.
    Tetrahedral,
}

impl InputFamily {
    /// The `d²` states of the family.
    pub fn states(self, d: usize) -> Result<Vec<DensityMatrix>> {
        match self {
            InputFamily::Standard => Ok(standard_family(d)),
            InputFamily::Tetrahedral if d == 2 => Ok(tetrahedral_family()),
            InputFamily::Tetrahedral => Err(Error::DimensionMismatch {
                context: "tetrahedral input family",
                expected: 2,
                found: d,
            }),
        }
    }
}

fn standard_family(d: usize) -> Vec<DensityMatrix> {
    let ket = |entries: &[(usize, Complex64)]| {
        let mut v = CVector::zeros(d);
        for &(k, c) in entries {
            v[k] = c;
        }
        DensityMatrix::pure(&v).expect("nonzero vector")
    };
    let mut states: Vec<DensityMatrix> = (0..d).map(|j| DensityMatrix::basis(d, j)).collect();
    for j in 0..d {
        for k in j + 1..d {
            states.push(ket(&[(j, ONE), (k, ONE)]));
            states.push(ket(&[(j, ONE), (k, Complex64::i())]));
        }
    }
    states
}

fn tetrahedral_family() -> Vec<DensityMatrix> {
    let [x, y, z] = paulis();
    let tau = identity(2).scale(0.5) + (&x + &y + &z).scale(1.0 / 12f64.sqrt());
    [identity(2), x, y, z]
        .iter()
        .map(|u| DensityMatrix::new(u * &tau * u.adjoint()).expect("unitary conjugate of a state"))
        .collect()
}

/// Generalized Bell basis on `C^d ⊗ C^d`.
///
/// Element `(a, b)` (lexicographic, `(0, 0)` first) projects onto
/// `Σ_{jl} M_ab[j, l] |j⟩|l⟩` with `M_ab[j, l] = ω^{bj} δ_{l, j+a} / √d`, so
/// the first element is `Φ₊`.
pub fn bell_measurement(d: usize) -> Povm {
    Povm::trusted(
        bell_matrices(d)
            .iter()
            .map(|m| {
                let v = CVector::from_fn(d * d, |r, _| m[(r / d, r % d)]);
                Hermitian::projector(&v)
            })
            .collect(),
    )
}

/// The matrices `M_ab` reshaping each Bell vector, in outcome order.
pub(crate) fn bell_matrices(d: usize) -> Vec<CMatrix> {
    let norm = 1.0 / (d as f64).sqrt();
    let omega = |k: usize| Complex64::from_polar(norm, 2.0 * std::f64::consts::PI * k as f64 / d as f64);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            out.push(CMatrix::from_fn(d, d, |j, l| {
                if l == (j + a) % d {
                    omega((b * j) % d)
                } else {
                    ZERO
                }
            }));
        }
    }
    out
}

/// Scenario with tomographically complete inputs and a Bell measurement on
/// the channel output and the second input, outcome `1` being `Φ₊`.
#[derive(Clone, Debug)]
pub struct SignatureScenario {
    scenario: Scenario,
    bell: Povm,
}

impl SignatureScenario {
    pub fn new(da: usize, db: usize, family: InputFamily) -> Result<Self> {
        let scenario = Scenario::new(family.states(da)?, family.states(db)?, db * db)?;
        Self::from_scenario(scenario)
    }

    /// Checks completeness of both families and the outcome count `dB²`.
    pub fn from_scenario(scenario: Scenario) -> Result<Self> {
        let db = scenario.dim_y();
        if scenario.outcome_count != db * db {
            return Err(Error::CountMismatch {
                context: "signature scenario outcomes",
                expected: db * db,
                found: scenario.outcome_count,
            });
        }
        let basis_x = hermitian_basis(scenario.dim_x());
        let basis_y = hermitian_basis(db);
        invert_frame(&frame_matrix(&scenario.inputs_x, &basis_x, false), Side::X)?;
        invert_frame(&frame_matrix(&scenario.inputs_y, &basis_y, false), Side::Y)?;
        Ok(SignatureScenario {
            scenario,
            bell: bell_measurement(db),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn bell_measurement(&self) -> &Povm {
        &self.bell
    }

    pub fn dim_a(&self) -> usize {
        self.scenario.dim_x()
    }

    pub fn dim_b(&self) -> usize {
        self.scenario.dim_y()
    }
}

impl AsRef<Scenario> for SignatureScenario {
    fn as_ref(&self) -> &Scenario {
        &self.scenario
    }
}

/// Signature scenario with the standard input family.
pub fn signature_scenario(da: usize, db: usize) -> SignatureScenario {
    SignatureScenario::new(da, db, InputFamily::Standard).expect("standard family is complete")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{max_abs, max_entangled};

    #[test]
    fn bell_measurement_is_orthonormal() {
        for d in 1..=4 {
            let povm = bell_measurement(d);
            assert_eq!(povm.len(), d * d);
            let total = povm
                .elements()
                .iter()
                .fold(CMatrix::zeros(d * d, d * d), |acc, e| acc + e.matrix());
            assert!(max_abs(&(total - CMatrix::identity(d * d, d * d))) < 1e-10);
            assert!(max_abs(&(povm.elements()[0].matrix() - max_entangled(d).matrix())) < 1e-12);
        }
    }

    #[test]
    fn families_are_complete() {
        for d in 1..=4 {
            let states = InputFamily::Standard.states(d).unwrap();
            assert_eq!(states.len(), d * d);
            let (_, rank) = crate::operator::pseudo_inverse(
                &frame_matrix(&states, &hermitian_basis(d), false),
                1e-10,
            );
            assert_eq!(rank, d * d);
        }
        assert!(SignatureScenario::new(2, 2, InputFamily::Tetrahedral).is_ok());
        assert!(InputFamily::Tetrahedral.states(3).is_err());
    }

    #[test]
    fn tetrahedral_states_have_expected_bloch_vectors() {
        let states = InputFamily::Tetrahedral.states(2).unwrap();
        let [x, y, z] = paulis();
        let r = 1.0 / 3f64.sqrt();
        let expected = [[r, r, r], [r, -r, -r], [-r, r, -r], [-r, -r, r]];
        for (s, e) in states.iter().zip(expected) {
            let bloch: Vec<f64> = [&x, &y, &z]
                .iter()
                .map(|p| (s.matrix() * *p).trace().re)
                .collect();
            for k in 0..3 {
                assert!((bloch[k] - e[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn incomplete_scenario_is_rejected() {
        let states = vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)];
        let s = Scenario::new(states.clone(), InputFamily::Standard.states(2).unwrap(), 4).unwrap();
        assert!(matches!(
            SignatureScenario::from_scenario(s),
            Err(Error::RankDeficient { side: Side::X, .. })
        ));
    }
}
