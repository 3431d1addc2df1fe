use super::{Correlation, OutcomeTensor, Payoff, Scenario};
use crate::certification::SparseDecomposition;
use crate::{Error, Result};

/// Scenario plus payoff table. `eb_threshold` is the score every
/// entanglement-breaking memory shares (zero for witness games).
#[derive(Clone, Debug)]
pub struct Game {
    scenario: Scenario,
    payoff: Payoff,
    eb_threshold: f64,
}

impl Game {
    pub fn new(scenario: Scenario, payoff: Payoff, eb_threshold: f64) -> Result<Self> {
        let t = payoff.tensor();
        if t.outcomes() != scenario.outcome_count() {
            return Err(Error::CountMismatch {
                context: "payoff outcomes vs scenario",
                expected: scenario.outcome_count(),
                found: t.outcomes(),
            });
        }
        if t.inputs_x() != scenario.inputs_x().len() {
            return Err(Error::CountMismatch {
                context: "payoff first-round inputs vs scenario",
                expected: scenario.inputs_x().len(),
                found: t.inputs_x(),
            });
        }
        if t.inputs_y() != scenario.inputs_y().len() {
            return Err(Error::CountMismatch {
                context: "payoff second-round inputs vs scenario",
                expected: scenario.inputs_y().len(),
                found: t.inputs_y(),
            });
        }
        if !eb_threshold.is_finite() {
            return Err(Error::NonFinite {
                context: "EB threshold",
            });
        }
        Ok(Game {
            scenario,
            payoff,
            eb_threshold,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn payoff(&self) -> &Payoff {
        &self.payoff
    }

    pub fn eb_threshold(&self) -> f64 {
        self.eb_threshold
    }
}

/// `Σ_{b,x,y} ℘(b,x,y) p(b|x,y)`, without input weights.
pub fn expected_payoff(game: &Game, p: &Correlation) -> Result<f64> {
    let (w, p) = (game.payoff.tensor(), p.tensor());
    if !w.same_shape(p) {
        return Err(Error::LabelMismatch {
            context: "payoff vs correlation shape",
        });
    }
    Ok(w.entries().map(|(b, x, y, v)| v * p.get(b, x, y)).sum())
}

/// Game rewarding outcome `1` with `℘(1,x,y) = (dY/dX) ω_xy` and every other
/// outcome with zero.
///
/// The factor `dY/dX` makes the Bell-measurement score of a channel equal to
/// `Tr[W J]`, since `σ(1|x,y) = (dX/dY) Tr[J (ξ_xᵀ ⊗ ψ_yᵀ)]`; it is `1` for
/// equal dimensions.
pub fn game_from_witness(dec: &SparseDecomposition, outcome_count: usize) -> Result<Game> {
    let scenario = Scenario::new(dec.states_x.clone(), dec.states_y.clone(), outcome_count)?;
    let scale = scenario.dim_y() as f64 / scenario.dim_x() as f64;
    let mut table = OutcomeTensor::zeros(1, outcome_count, dec.states_x.len(), dec.states_y.len());
    for c in &dec.omega {
        table.set(1, c.x, c.y, table.get(1, c.x, c.y) + scale * c.value);
    }
    Game::new(scenario, Payoff::new(table)?, 0.0)
}

/// Adds the erasure outcome `b = 0` with zero payoff and maps the correlation
/// to `p'(0|x,y) = 1 - η`, `p'(b|x,y) = η p(b|x,y)`.
pub fn loss_extend(game: &Game, p: &Correlation, eta: f64) -> Result<(Game, Correlation)> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::OutOfRange {
            name: "transmission eta",
            value: eta,
            range: "(0, 1]",
        });
    }
    let (w, q) = (game.payoff.tensor(), p.tensor());
    if !w.same_shape(q) || w.first_label() != 1 {
        return Err(Error::LabelMismatch {
            context: "loss extension expects outcomes labelled from 1",
        });
    }
    let outcomes = w.outcomes() + 1;
    let mut payoff = OutcomeTensor::zeros(0, outcomes, w.inputs_x(), w.inputs_y());
    let mut lossy = payoff.clone();
    for (b, x, y, v) in w.entries() {
        payoff.set(b, x, y, v);
        lossy.set(b, x, y, eta * q.get(b, x, y));
    }
    for x in 0..w.inputs_x() {
        for y in 0..w.inputs_y() {
            lossy.set(0, x, y, 1.0 - eta);
        }
    }
    let s = &game.scenario;
    let scenario = Scenario::new(s.inputs_x().to_vec(), s.inputs_y().to_vec(), outcomes)?;
    Ok((
        Game::new(scenario, Payoff::new(payoff)?, game.eb_threshold)?,
        Correlation::new(lossy)?,
    ))
}
