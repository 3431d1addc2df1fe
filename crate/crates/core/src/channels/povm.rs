use crate::operator::{identity, max_abs, CMatrix, Hermitian};
use crate::{tol, Error, Result};

use super::completeness_residual;

/// Positive operators summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<Hermitian>,
}

impl Povm {
    pub fn new(elements: Vec<Hermitian>) -> Result<Self> {
        let context = "POVM";
        let first = elements.first().ok_or(Error::Empty {
            context,
            what: "element list",
        })?;
        let d = first.dim();
        let mut sum = CMatrix::zeros(d, d);
        for e in &elements {
            if e.dim() != d {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: d,
                    found: e.dim(),
                });
            }
            let min_eigenvalue = e.min_eigenvalue();
            if min_eigenvalue < -tol::PSD {
                return Err(Error::NotPositive {
                    context,
                    min_eigenvalue,
                });
            }
            sum += e.matrix();
        }
        let residual = max_abs(&(sum - identity(d)));
        if residual > tol::RECONSTRUCTION {
            return Err(Error::Incomplete { context, residual });
        }
        Ok(Povm { elements })
    }

    /// Measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        let elements = (0..d)
            .map(|k| {
                let mut diag = vec![0.0; d];
                diag[k] = 1.0;
                Hermitian::diagonal(&diag)
            })
            .collect();
        Povm { elements }
    }

    /// The single-outcome measurement `{1}`.
    pub fn trivial(d: usize) -> Self {
        Povm {
            elements: vec![Hermitian::identity(d)],
        }
    }

    /// `n` outcomes, each `1/n`.
    pub fn uniform(d: usize, n: usize) -> Self {
        Povm {
            elements: vec![Hermitian::identity(d).scale(1.0 / n as f64); n],
        }
    }

    pub(crate) fn trusted(elements: Vec<Hermitian>) -> Self {
        Povm { elements }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Hermitian] {
        &self.elements
    }
}

/// Quantum instrument: CP branches `I_i(ρ) = Σ_k K_ik ρ K_ik†` whose sum is
/// trace preserving. Shared randomness is folded into the branch index.
#[derive(Clone, Debug)]
pub struct Instrument {
    input_dim: usize,
    output_dim: usize,
    branches: Vec<Vec<CMatrix>>,
}

impl Instrument {
    pub fn new(input_dim: usize, output_dim: usize, branches: Vec<Vec<CMatrix>>) -> Result<Self> {
        let context = "instrument";
        if branches.is_empty() {
            return Err(Error::Empty {
                context,
                what: "branch list",
            });
        }
        for k in branches.iter().flatten() {
            if k.shape() != (output_dim, input_dim) {
                return Err(Error::DimensionMismatch {
                    context: "instrument Kraus operator",
                    expected: output_dim * input_dim,
                    found: k.nrows() * k.ncols(),
                });
            }
        }
        let residual = completeness_residual(branches.iter().flatten(), input_dim);
        if residual > tol::RECONSTRUCTION {
            return Err(Error::NotTracePreserving { context, residual });
        }
        Ok(Instrument {
            input_dim,
            output_dim,
            branches,
        })
    }

    /// Single branch doing nothing.
    pub fn identity(d: usize) -> Self {
        Instrument {
            input_dim: d,
            output_dim: d,
            branches: vec![vec![identity(d)]],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Vec<CMatrix>] {
        &self.branches
    }

    /// Unnormalized output of branch `i`.
    pub fn apply_branch(&self, i: usize, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.output_dim, self.output_dim);
        for k in &self.branches[i] {
            out += k * x * k.adjoint();
        }
        out
    }

    /// Sequential instrument: `first` then `second`.
    ///
    /// Branch `(j, i)` (first outcome `j`, second outcome `i`) sits at index
    /// `j * second.branch_count() + i`.
    pub fn sequence(first: &Instrument, second: &Instrument) -> Result<Instrument> {
        if first.output_dim != second.input_dim {
            return Err(Error::DimensionMismatch {
                context: "instrument sequence",
                expected: second.input_dim,
                found: first.output_dim,
            });
        }
        let mut branches = Vec::with_capacity(first.branch_count() * second.branch_count());
        for bj in &first.branches {
            for bi in &second.branches {
                let mut kraus = Vec::with_capacity(bj.len() * bi.len());
                for k2 in bi {
                    for k1 in bj {
                        kraus.push(k2 * k1);
                    }
                }
                branches.push(kraus);
            }
        }
        Instrument::new(first.input_dim, second.output_dim, branches)
    }

    /// Convex mixture `weight · self + (1 - weight) · other`, realized by
    /// concatenating branches with rescaled Kraus operators.
    pub fn mix(&self, other: &Instrument, weight: f64) -> Result<Instrument> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::OutOfRange {
                name: "mixing weight",
                value: weight,
                range: "[0, 1]",
            });
        }
        if (self.input_dim, self.output_dim) != (other.input_dim, other.output_dim) {
            return Err(Error::DimensionMismatch {
                context: "instrument mixture",
                expected: self.input_dim * self.output_dim,
                found: other.input_dim * other.output_dim,
            });
        }
        let scaled = |branches: &[Vec<CMatrix>], w: f64| -> Vec<Vec<CMatrix>> {
            branches
                .iter()
                .map(|b| b.iter().map(|k| k.scale(w.sqrt())).collect())
                .collect()
        };
        let mut branches = scaled(&self.branches, weight);
        branches.extend(scaled(&other.branches, 1.0 - weight));
        Instrument::new(self.input_dim, self.output_dim, branches)
    }
}
