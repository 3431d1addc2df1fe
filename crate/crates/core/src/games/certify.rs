use super::{expected_payoff, game_from_witness, signature_correlation, Correlation, Game, InputFamily};
use crate::certification::{
    build_witness, ppt_check, sparse_decompose, tomographic_decompose, PptReport, PptVerdict,
    SparseDecomposition, Witness,
};
use crate::channels::{kraus_to_choi, QuantumChannel};
use crate::operator::BipartiteDims;
use crate::{tol, Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecompositionMode {
    /// At most `d² + 3` coefficients.
    #[default]
    Sparse,
    /// Linear inversion over a complete input family.
    Tomographic,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Input family for [`DecompositionMode::Tomographic`].
    pub family: InputFamily,
    pub decomposition: DecompositionMode,
    /// Overrides the partial-transpose witness.
    pub witness: Option<Witness>,
    /// The payoff must exceed this to certify.
    pub margin: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            family: InputFamily::Standard,
            decomposition: DecompositionMode::Sparse,
            witness: None,
            margin: tol::CERTIFICATION_MARGIN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Clone, Debug)]
pub struct Certification {
    pub dims: BipartiteDims,
    pub ppt: PptReport,
    pub witness: Option<Witness>,
    pub decomposition: Option<SparseDecomposition>,
    pub game: Option<Game>,
    /// Signature correlation of the channel on the game inputs.
    pub correlation: Option<Correlation>,
    /// Bell-measurement score of the channel in the game.
    pub payoff: Option<f64>,
    pub verdict: Verdict,
}

impl Certification {
    /// Why a negative verdict does not mean the memory is entanglement
    /// breaking, if that is the case.
    pub fn caveat(&self) -> Option<&'static str> {
        match self.verdict {
            Verdict::Certified => None,
            Verdict::NotCertified if self.ppt.verdict == PptVerdict::EbCompatible && !self.ppt.is_conclusive() => {
                Some("Choi state has positive partial transpose; for dA*dB > 6 this does not rule out entanglement, so the channel is not certified but not shown to be entanglement breaking either")
            }
            Verdict::NotCertified => None,
        }
    }
}

/// Choi state, witness, decomposition, game, and the channel's score.
pub fn certify(channel: &QuantumChannel, options: &CertifyOptions) -> Result<Certification> {
    let choi = kraus_to_choi(channel);
    let dims = choi.dims();
    let ppt = ppt_check(&choi);
    let witness = match &options.witness {
        Some(w) => {
            if w.dims() != dims {
                return Err(Error::DimensionMismatch {
                    context: "witness vs channel dimensions",
                    expected: dims.total(),
                    found: w.dims().total(),
                });
            }
            w.clone()
        }
        None if ppt.verdict == PptVerdict::QuantumDomainCertified => build_witness(&choi)?,
        None => {
            return Ok(Certification {
                dims,
                ppt,
                witness: None,
                decomposition: None,
                game: None,
                correlation: None,
                payoff: None,
                verdict: Verdict::NotCertified,
            })
        }
    };
    let decomposition = match options.decomposition {
        DecompositionMode::Sparse => sparse_decompose(&witness)?,
        DecompositionMode::Tomographic => tomographic_decompose(
            &witness,
            &options.family.states(dims.left)?,
            &options.family.states(dims.right)?,
        )?,
    };
    let game = game_from_witness(&decomposition, dims.right * dims.right)?;
    let correlation = signature_correlation(channel, game.scenario())?;
    let payoff = expected_payoff(&game, &correlation)?;
    let verdict = if payoff > options.margin {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    Ok(Certification {
        dims,
        ppt,
        witness: Some(witness),
        decomposition: Some(decomposition),
        game: Some(game),
        correlation: Some(correlation),
        payoff: Some(payoff),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, depolarizing_channel, erasure_channel};

    #[test]
    fn depolarizing_verdicts() {
        let options = CertifyOptions::default();
        let good = certify(&depolarizing_channel(0.8).unwrap(), &options).unwrap();
        assert_eq!(good.verdict, Verdict::Certified);
        assert!((good.payoff.unwrap() - 0.35).abs() < 1e-12);
        let bad = certify(&depolarizing_channel(0.2).unwrap(), &options).unwrap();
        assert_eq!(bad.verdict, Verdict::NotCertified);
        assert!(bad.payoff.is_none());
        assert!(bad.caveat().is_none());
    }

    #[test]
    fn erased_depolarizing() {
        let lossy = compose(&erasure_channel(0.3, 2).unwrap(), &depolarizing_channel(1.0).unwrap()).unwrap();
        for mode in [DecompositionMode::Sparse, DecompositionMode::Tomographic] {
            let options = CertifyOptions {
                decomposition: mode,
                ..CertifyOptions::default()
            };
            let report = certify(&lossy, &options).unwrap();
            assert_eq!(report.verdict, Verdict::Certified);
            assert!((report.payoff.unwrap() - 0.15).abs() < 1e-12, "{mode:?}");
        }
    }
}
