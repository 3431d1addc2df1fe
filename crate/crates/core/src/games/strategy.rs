use super::scenario::{bell_matrices, bell_measurement};
use super::{Correlation, OutcomeTensor, Scenario};
use crate::channels::{Instrument, Povm, QuantumChannel, Supermap};
use crate::operator::{kron, CMatrix, Hermitian};
use crate::{Error, Result};

/// Player strategy: a pre-processing instrument applied to the first
/// question and, for each instrument branch `i`, a joint measurement
/// `{B_{b|i}}` on the memory output and the second question.
#[derive(Clone, Debug)]
pub struct Strategy {
    instrument: Instrument,
    responses: Vec<Povm>,
}

impl Strategy {
    pub fn new(instrument: Instrument, responses: Vec<Povm>) -> Result<Self> {
        if responses.len() != instrument.branch_count() {
            return Err(Error::CountMismatch {
                context: "strategy responses",
                expected: instrument.branch_count(),
                found: responses.len(),
            });
        }
        let (dim, len) = (responses[0].dim(), responses[0].len());
        for r in &responses {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "strategy response",
                    expected: dim,
                    found: r.dim(),
                });
            }
            if r.len() != len {
                return Err(Error::CountMismatch {
                    context: "strategy response outcomes",
                    expected: len,
                    found: r.len(),
                });
            }
        }
        Ok(Strategy {
            instrument,
            responses,
        })
    }

    /// Identity pre-processing and the Bell measurement: the strategy behind
    /// signature correlations.
    pub fn signature(da: usize, db: usize) -> Self {
        Strategy {
            instrument: Instrument::identity(da),
            responses: vec![bell_measurement(db)],
        }
    }

    pub fn instrument(&self) -> &Instrument {
        &self.instrument
    }

    pub fn responses(&self) -> &[Povm] {
        &self.responses
    }

    pub fn outcome_count(&self) -> usize {
        self.responses[0].len()
    }

    /// Strategy for `N` reproducing what `self` achieves with `Λ[N]`.
    ///
    /// With `Λ[N] = Σ_i D_i ∘ N ∘ E_i`, the instrument becomes `E ∘ I` with
    /// branch `(j, i)` at `j · |E| + i`, and its response is
    /// `(D_i† ⊗ 1)(B_{b|j})`.
    pub fn through_supermap(&self, map: &Supermap) -> Result<Strategy> {
        let instrument = Instrument::sequence(&self.instrument, map.instrument())?;
        let d_out = map.decoders()[0].output_dim();
        let joint = self.responses[0].dim();
        if !joint.is_multiple_of(d_out) {
            return Err(Error::DimensionMismatch {
                context: "response measurement vs supermap output",
                expected: d_out,
                found: joint,
            });
        }
        let dy = joint / d_out;
        let lifted: Vec<QuantumChannel> = map.decoders().iter().map(|d| d.tensor_identity(dy)).collect();
        let mut responses = Vec::with_capacity(instrument.branch_count());
        for response in &self.responses {
            for decoder in &lifted {
                let elements = response
                    .elements()
                    .iter()
                    .map(|e| Hermitian::symmetrized(decoder.apply_adjoint(e.matrix())))
                    .collect();
                responses.push(Povm::new(elements)?);
            }
        }
        Strategy::new(instrument, responses)
    }
}

fn check_dims(channel: &QuantumChannel, scenario: &Scenario, instrument: &Instrument) -> Result<()> {
    if instrument.input_dim() != scenario.dim_x() {
        return Err(Error::DimensionMismatch {
            context: "instrument input vs first-round inputs",
            expected: scenario.dim_x(),
            found: instrument.input_dim(),
        });
    }
    if instrument.output_dim() != channel.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "instrument output vs channel input",
            expected: channel.input_dim(),
            found: instrument.output_dim(),
        });
    }
    Ok(())
}

/// `p(b|x,y) = Σ_i Tr[((N ∘ I_i)(ξ_x) ⊗ ψ_y) B_{b|i}]`, outcomes labelled
/// `1..=|B|`.
pub fn admissible_correlation(
    channel: &QuantumChannel,
    scenario: &Scenario,
    instrument: &Instrument,
    responses: &[Povm],
) -> Result<Correlation> {
    let strategy = Strategy::new(instrument.clone(), responses.to_vec())?;
    strategy_correlation(channel, scenario, &strategy)
}

/// Correlation of `strategy` played with `channel`.
pub fn strategy_correlation(
    channel: &QuantumChannel,
    scenario: &Scenario,
    strategy: &Strategy,
) -> Result<Correlation> {
    check_dims(channel, scenario, &strategy.instrument)?;
    let joint = channel.output_dim() * scenario.dim_y();
    if strategy.responses[0].dim() != joint {
        return Err(Error::DimensionMismatch {
            context: "response measurement",
            expected: joint,
            found: strategy.responses[0].dim(),
        });
    }
    if strategy.outcome_count() != scenario.outcome_count() {
        return Err(Error::CountMismatch {
            context: "response outcomes vs scenario",
            expected: scenario.outcome_count(),
            found: strategy.outcome_count(),
        });
    }
    let (nx, ny) = (scenario.inputs_x().len(), scenario.inputs_y().len());
    let mut p = OutcomeTensor::zeros(1, scenario.outcome_count(), nx, ny);
    for (x, xi) in scenario.inputs_x().iter().enumerate() {
        for (i, response) in strategy.responses.iter().enumerate() {
            let rho = channel.apply_operator(&strategy.instrument.apply_branch(i, xi.matrix()));
            for (y, psi) in scenario.inputs_y().iter().enumerate() {
                let joint_state = Hermitian::symmetrized(kron(&rho, psi.matrix()));
                for (k, element) in response.elements().iter().enumerate() {
                    let b = k + 1;
                    p.set(b, x, y, p.get(b, x, y) + element.pair(&joint_state));
                }
            }
        }
    }
    Correlation::new(p)
}

/// `σ_N(b|x,y) = Tr[(N(ξ_x) ⊗ ψ_y) B_b]` with the Bell measurement `B`.
pub fn signature_correlation(
    channel: &QuantumChannel,
    scenario: impl AsRef<Scenario>,
) -> Result<Correlation> {
    let scenario = scenario.as_ref();
    let db = channel.output_dim();
    check_dims(channel, scenario, &Instrument::identity(channel.input_dim()))?;
    if scenario.dim_y() != db {
        return Err(Error::DimensionMismatch {
            context: "second-round inputs vs channel output",
            expected: db,
            found: scenario.dim_y(),
        });
    }
    if scenario.outcome_count() != db * db {
        return Err(Error::CountMismatch {
            context: "Bell measurement outcomes vs scenario",
            expected: db * db,
            found: scenario.outcome_count(),
        });
    }
    let bell = bell_matrices(db);
    let (nx, ny) = (scenario.inputs_x().len(), scenario.inputs_y().len());
    let mut p = OutcomeTensor::zeros(1, db * db, nx, ny);
    for (x, xi) in scenario.inputs_x().iter().enumerate() {
        let rho = channel.apply_operator(xi.matrix());
        for (k, m) in bell.iter().enumerate() {
            // ⟨Φ_M| ρ ⊗ ψ |Φ_M⟩ = Tr[M† ρ M ψᵀ] = Σ_{lm} (M† ρ M)[l, m] ψ[l, m]
            let rotated: CMatrix = m.adjoint() * &rho * m;
            for (y, psi) in scenario.inputs_y().iter().enumerate() {
                p.set(k + 1, x, y, rotated.component_mul(psi.matrix()).sum().re);
            }
        }
    }
    Correlation::new(p)
}

/// Classical-memory adversary: measure the first question with `{Π_i}`, then
/// answer the second with `{B_{b|i}}`.
/// `p(b|x,y) = Σ_i Tr[ξ_x Π_i] Tr[ψ_y B_{b|i}]`.
pub fn eb_strategy_correlation(
    scenario: &Scenario,
    first: &Povm,
    responses: &[Povm],
) -> Result<Correlation> {
    if first.dim() != scenario.dim_x() {
        return Err(Error::DimensionMismatch {
            context: "first measurement",
            expected: scenario.dim_x(),
            found: first.dim(),
        });
    }
    if responses.len() != first.len() {
        return Err(Error::CountMismatch {
            context: "classical responses",
            expected: first.len(),
            found: responses.len(),
        });
    }
    for r in responses {
        if r.dim() != scenario.dim_y() {
            return Err(Error::DimensionMismatch {
                context: "classical response",
                expected: scenario.dim_y(),
                found: r.dim(),
            });
        }
        if r.len() != scenario.outcome_count() {
            return Err(Error::CountMismatch {
                context: "classical response outcomes",
                expected: scenario.outcome_count(),
                found: r.len(),
            });
        }
    }
    let (nx, ny) = (scenario.inputs_x().len(), scenario.inputs_y().len());
    let mut p = OutcomeTensor::zeros(1, scenario.outcome_count(), nx, ny);
    for (x, xi) in scenario.inputs_x().iter().enumerate() {
        for (pi, response) in first.elements().iter().zip(responses) {
            let weight = pi.pair(xi.hermitian());
            for (y, psi) in scenario.inputs_y().iter().enumerate() {
                for (k, element) in response.elements().iter().enumerate() {
                    let b = k + 1;
                    p.set(b, x, y, p.get(b, x, y) + weight * element.pair(psi.hermitian()));
                }
            }
        }
    }
    Correlation::new(p)
}
