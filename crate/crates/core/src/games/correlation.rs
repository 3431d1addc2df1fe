use crate::{tol, Error, Result};

/// Real tensor indexed by `(b, x, y)` with `b` running over
/// `first_label .. first_label + outcomes`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeTensor {
    first_label: usize,
    outcomes: usize,
    inputs_x: usize,
    inputs_y: usize,
    values: Vec<f64>,
}

impl OutcomeTensor {
    pub fn zeros(first_label: usize, outcomes: usize, inputs_x: usize, inputs_y: usize) -> Self {
        OutcomeTensor {
            first_label,
            outcomes,
            inputs_x,
            inputs_y,
            values: vec![0.0; outcomes * inputs_x * inputs_y],
        }
    }

    pub fn first_label(&self) -> usize {
        self.first_label
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn inputs_x(&self) -> usize {
        self.inputs_x
    }

    pub fn inputs_y(&self) -> usize {
        self.inputs_y
    }

    /// Outcome labels in storage order.
    pub fn labels(&self) -> std::ops::Range<usize> {
        self.first_label..self.first_label + self.outcomes
    }

    fn offset(&self, b: usize, x: usize, y: usize) -> usize {
        assert!(
            self.labels().contains(&b) && x < self.inputs_x && y < self.inputs_y,
            "index ({b}, {x}, {y}) out of range"
        );
        ((b - self.first_label) * self.inputs_x + x) * self.inputs_y + y
    }

    pub fn get(&self, b: usize, x: usize, y: usize) -> f64 {
        self.values[self.offset(b, x, y)]
    }

    pub fn set(&mut self, b: usize, x: usize, y: usize, value: f64) {
        let k = self.offset(b, x, y);
        self.values[k] = value;
    }

    /// `(b, x, y, value)` in `b`-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.labels().flat_map(move |b| {
            (0..self.inputs_x)
                .flat_map(move |x| (0..self.inputs_y).map(move |y| (b, x, y, self.get(b, x, y))))
        })
    }

    pub fn same_shape(&self, other: &OutcomeTensor) -> bool {
        (self.first_label, self.outcomes, self.inputs_x, self.inputs_y)
            == (other.first_label, other.outcomes, other.inputs_x, other.inputs_y)
    }

    fn check_finite(&self, context: &'static str) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { context })
        }
    }
}

/// Conditional distribution `p(b|x,y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlation(OutcomeTensor);

impl Correlation {
    /// Checks `p ≥ -1e-12` and `Σ_b p(b|x,y) = 1` within `1e-9`.
    pub fn new(tensor: OutcomeTensor) -> Result<Self> {
        let context = "correlation";
        tensor.check_finite(context)?;
        if let Some(&min) = tensor.values.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -tol::PROBABILITY {
                return Err(Error::NotPositive {
                    context,
                    min_eigenvalue: min,
                });
            }
        }
        let mut residual: f64 = 0.0;
        for x in 0..tensor.inputs_x {
            for y in 0..tensor.inputs_y {
                let total: f64 = tensor.labels().map(|b| tensor.get(b, x, y)).sum();
                residual = residual.max((total - 1.0).abs());
            }
        }
        if residual > tol::RECONSTRUCTION {
            return Err(Error::Incomplete { context, residual });
        }
        Ok(Correlation(tensor))
    }

    pub fn tensor(&self) -> &OutcomeTensor {
        &self.0
    }

    pub fn get(&self, b: usize, x: usize, y: usize) -> f64 {
        self.0.get(b, x, y)
    }

    /// Elementwise `weight · self + (1 - weight) · other`.
    pub fn mix(&self, other: &Correlation, weight: f64) -> Result<Correlation> {
        if !self.0.same_shape(&other.0) {
            return Err(Error::LabelMismatch {
                context: "correlation mixture",
            });
        }
        let mut out = self.0.clone();
        for (v, w) in out.values.iter_mut().zip(&other.0.values) {
            *v = weight * *v + (1.0 - weight) * w;
        }
        Correlation::new(out)
    }

    /// Largest elementwise difference.
    pub fn max_difference(&self, other: &Correlation) -> Result<f64> {
        if !self.0.same_shape(&other.0) {
            return Err(Error::LabelMismatch {
                context: "correlation comparison",
            });
        }
        Ok(self
            .0
            .values
            .iter()
            .zip(&other.0.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Payoff table `℘(b, x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Payoff(OutcomeTensor);

impl Payoff {
    pub fn new(tensor: OutcomeTensor) -> Result<Self> {
        tensor.check_finite("payoff")?;
        Ok(Payoff(tensor))
    }

    pub fn tensor(&self) -> &OutcomeTensor {
        &self.0
    }

    pub fn get(&self, b: usize, x: usize, y: usize) -> f64 {
        self.0.get(b, x, y)
    }
}
