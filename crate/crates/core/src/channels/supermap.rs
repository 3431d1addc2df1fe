use crate::operator::max_abs;
use crate::{tol, Error, Result};

use super::{Instrument, QuantumChannel};

/// Classically correlated supermap `Λ[N] = Σ_i D_i ∘ N ∘ I_i`.
///
/// Shared randomness is folded into the instrument branch index.
#[derive(Clone, Debug)]
pub struct Supermap {
    instrument: Instrument,
    decoders: Vec<QuantumChannel>,
}

impl Supermap {
    pub fn new(instrument: Instrument, decoders: Vec<QuantumChannel>) -> Result<Self> {
        Self::with_branch_limit(instrument, decoders, tol::MAX_BRANCHES)
    }

    pub fn with_branch_limit(
        instrument: Instrument,
        decoders: Vec<QuantumChannel>,
        limit: usize,
    ) -> Result<Self> {
        if instrument.branch_count() > limit {
            return Err(Error::TooManyBranches {
                count: instrument.branch_count(),
                limit,
            });
        }
        if decoders.len() != instrument.branch_count() {
            return Err(Error::CountMismatch {
                context: "supermap decoders",
                expected: instrument.branch_count(),
                found: decoders.len(),
            });
        }
        let (din, dout) = (decoders[0].input_dim(), decoders[0].output_dim());
        for d in &decoders {
            if d.input_dim() != din || d.output_dim() != dout {
                return Err(Error::DimensionMismatch {
                    context: "supermap decoder",
                    expected: din * dout,
                    found: d.input_dim() * d.output_dim(),
                });
            }
        }
        Ok(Supermap {
            instrument,
            decoders,
        })
    }

    /// Single identity branch with an identity decoder on `d_out`.
    pub fn trivial(d_in: usize, d_out: usize) -> Self {
        Supermap {
            instrument: Instrument::identity(d_in),
            decoders: vec![super::identity_channel(d_out)],
        }
    }

    pub fn instrument(&self) -> &Instrument {
        &self.instrument
    }

    pub fn decoders(&self) -> &[QuantumChannel] {
        &self.decoders
    }
}

/// `Λ[N](ρ) = Σ_i D_i(N(I_i(ρ)))`.
pub fn apply_supermap(map: &Supermap, channel: &QuantumChannel) -> Result<QuantumChannel> {
    if map.instrument.output_dim() != channel.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "supermap instrument output",
            expected: channel.input_dim(),
            found: map.instrument.output_dim(),
        });
    }
    if map.decoders[0].input_dim() != channel.output_dim() {
        return Err(Error::DimensionMismatch {
            context: "supermap decoder input",
            expected: channel.output_dim(),
            found: map.decoders[0].input_dim(),
        });
    }
    let mut kraus = Vec::new();
    for (branch, decoder) in map.instrument.branches().iter().zip(&map.decoders) {
        for d in decoder.kraus() {
            for n in channel.kraus() {
                let dn = d * n;
                for i in branch {
                    let k = &dn * i;
                    if max_abs(&k) > 0.0 {
                        kraus.push(k);
                    }
                }
            }
        }
    }
    QuantumChannel::new(map.instrument.input_dim(), map.decoders[0].output_dim(), kraus)
}

#[cfg(test)]
mod tests {
    use super::super::{depolarizing_channel, identity_channel, kraus_to_choi};
    use super::*;
    use crate::operator::frobenius_norm;

    #[test]
    fn trivial_supermap_is_identity_on_channels() {
        let n = depolarizing_channel(0.7).unwrap();
        let out = apply_supermap(&Supermap::trivial(2, 2), &n).unwrap();
        assert!(frobenius_norm(&(kraus_to_choi(&out).matrix() - kraus_to_choi(&n).matrix())) < 1e-14);
    }

    #[test]
    fn identity_resource_simulates_any_channel() {
        let n = depolarizing_channel(0.3).unwrap();
        let map = Supermap::new(Instrument::identity(2), vec![n.clone()]).unwrap();
        let out = apply_supermap(&map, &identity_channel(2)).unwrap();
        assert!(frobenius_norm(&(kraus_to_choi(&out).matrix() - kraus_to_choi(&n).matrix())) < 1e-14);
    }

    #[test]
    fn branch_limit_and_counts() {
        let err = Supermap::with_branch_limit(Instrument::identity(2), vec![identity_channel(2)], 0).unwrap_err();
        assert!(matches!(err, Error::TooManyBranches { count: 1, limit: 0 }));
        let err = Supermap::new(Instrument::identity(2), vec![]).unwrap_err();
        assert!(matches!(err, Error::CountMismatch { .. }));
    }
}
