//! Exchange formats: JSON for channels, witnesses, games, decompositions and
//! Choi states; CSV for correlations.
//!
//! Reals are written with 17 significant digits so that they round-trip.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::certification::{Coefficient, SparseDecomposition, Witness};
use crate::channels::{choi_to_kraus, ChoiOperator, QuantumChannel};
use crate::games::{Correlation, Game, OutcomeTensor, Payoff, Scenario};
use crate::operator::{BipartiteDims, CMatrix, DensityMatrix, Hermitian};
use crate::{Error, Result};

/// `f64` written with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

/// Decimal text of `v` with 17 significant digits.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        // Keeps negative zero from leaking into otherwise identical output.
        return "0.0000000000000000e0".to_string();
    }
    format!("{v:.16e}")
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        let raw = RawValue::from_string(format_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Real)
    }
}

/// Row-major complex matrix as separate real and imaginary parts. A missing
/// imaginary part means zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<Real>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<Real>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<Real>> {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| Real(f(&m[(r, c)]))).collect())
                .collect()
        };
        MatrixJson {
            re: part(|z| z.re),
            im: Some(part(|z| z.im)),
        }
    }

    pub fn to_matrix(&self, context: &'static str) -> Result<CMatrix> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let bad_shape = |what: &str| Error::Format {
            context,
            message: format!("{what} rows must all have length {cols}"),
        };
        if self.re.iter().any(|r| r.len() != cols) {
            return Err(bad_shape("real part"));
        }
        if let Some(im) = &self.im {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(Error::Format {
                    context,
                    message: format!("imaginary part must be {rows}x{cols}"),
                });
            }
        }
        let m = CMatrix::from_fn(rows, cols, |r, c| {
            let im = self.im.as_ref().map_or(0.0, |im| im[r][c].0);
            Complex64::new(self.re[r][c].0, im)
        });
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { context });
        }
        Ok(m)
    }
}

fn states_json(states: &[DensityMatrix]) -> Vec<MatrixJson> {
    states.iter().map(|s| MatrixJson::from_matrix(s.matrix())).collect()
}

fn states_from_json(states: &[MatrixJson], context: &'static str) -> Result<Vec<DensityMatrix>> {
    states
        .iter()
        .map(|s| DensityMatrix::new(s.to_matrix(context)?).map_err(|e| relabel(e, context)))
        .collect()
}

fn relabel(e: Error, context: &'static str) -> Error {
    match e {
        Error::NotPositive { min_eigenvalue, .. } => Error::NotPositive {
            context,
            min_eigenvalue,
        },
        Error::NotHermitian { residual, .. } => Error::NotHermitian { context, residual },
        Error::TraceNotOne { trace, .. } => Error::TraceNotOne { context, trace },
        other => other,
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, context: &'static str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format {
        context,
        message: e.to_string(),
    })
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("finite values serialize");
    s.push('\n');
    s
}

/// Channel given by Kraus operators or by its Choi state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choi: Option<MatrixJson>,
}

impl ChannelJson {
    pub fn from_channel(channel: &QuantumChannel) -> Self {
        ChannelJson {
            da: channel.input_dim(),
            db: channel.output_dim(),
            kraus: Some(channel.kraus().iter().map(MatrixJson::from_matrix).collect()),
            choi: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text, "channel JSON")
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_channel(&self) -> Result<QuantumChannel> {
        match (&self.kraus, &self.choi) {
            (Some(kraus), None) => {
                let kraus = kraus
                    .iter()
                    .map(|k| k.to_matrix("Kraus operator"))
                    .collect::<Result<Vec<_>>>()?;
                QuantumChannel::new(self.da, self.db, kraus)
            }
            (None, Some(choi)) => {
                let j = ChoiOperator::new(choi.to_matrix("Choi matrix")?, BipartiteDims::new(self.da, self.db)?)?;
                choi_to_kraus(&j)
            }
            _ => Err(Error::Format {
                context: "channel JSON",
                message: "exactly one of \"kraus\" or \"choi\" must be given".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(rename = "dX")]
    pub dx: usize,
    #[serde(rename = "dY")]
    pub dy: usize,
    pub matrix: MatrixJson,
}

impl WitnessJson {
    pub fn from_witness(w: &Witness) -> Self {
        WitnessJson {
            dx: w.dims().left,
            dy: w.dims().right,
            matrix: MatrixJson::from_matrix(w.operator().matrix()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text, "witness JSON")
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_witness(&self) -> Result<Witness> {
        let m = self.matrix.to_matrix("witness matrix")?;
        let dims = BipartiteDims::new(self.dx, self.dy)?;
        dims.check(&m, "witness matrix")?;
        Witness::new(Hermitian::with_context(m, "witness matrix")?, dims)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub x: usize,
    pub y: usize,
    pub value: Real,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub states_x: Vec<MatrixJson>,
    pub states_y: Vec<MatrixJson>,
    pub omega: Vec<CoefficientJson>,
}

impl DecompositionJson {
    pub fn from_decomposition(dec: &SparseDecomposition) -> Self {
        DecompositionJson {
            states_x: states_json(&dec.states_x),
            states_y: states_json(&dec.states_y),
            omega: dec
                .omega
                .iter()
                .map(|c| CoefficientJson {
                    x: c.x,
                    y: c.y,
                    value: Real(c.value),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text, "decomposition JSON")
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_decomposition(&self) -> Result<SparseDecomposition> {
        let states_x = states_from_json(&self.states_x, "decomposition state")?;
        let states_y = states_from_json(&self.states_y, "decomposition state")?;
        for c in &self.omega {
            if c.x >= states_x.len() || c.y >= states_y.len() {
                return Err(Error::Format {
                    context: "decomposition JSON",
                    message: format!("coefficient ({}, {}) refers to a missing state", c.x, c.y),
                });
            }
        }
        Ok(SparseDecomposition {
            states_x,
            states_y,
            omega: self
                .omega
                .iter()
                .map(|c| Coefficient {
                    x: c.x,
                    y: c.y,
                    value: c.value.0,
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PayoffEntryJson {
    pub b: usize,
    pub x: usize,
    pub y: usize,
    pub value: Real,
}

/// Game table. Only nonzero payoff entries are listed. `outcomes` defaults
/// to `dY²` and `first_label` to `1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameJson {
    pub inputs_x: Vec<MatrixJson>,
    pub inputs_y: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_label: Option<usize>,
    pub payoff: Vec<PayoffEntryJson>,
    pub eb_threshold: Real,
}

impl GameJson {
    pub fn from_game(game: &Game) -> Self {
        let s = game.scenario();
        let t = game.payoff().tensor();
        GameJson {
            inputs_x: states_json(s.inputs_x()),
            inputs_y: states_json(s.inputs_y()),
            outcomes: Some(t.outcomes()),
            first_label: Some(t.first_label()),
            payoff: t
                .entries()
                .filter(|e| e.3 != 0.0)
                .map(|(b, x, y, v)| PayoffEntryJson { b, x, y, value: Real(v) })
                .collect(),
            eb_threshold: Real(game.eb_threshold()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text, "game JSON")
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_game(&self) -> Result<Game> {
        let inputs_x = states_from_json(&self.inputs_x, "game input state")?;
        let inputs_y = states_from_json(&self.inputs_y, "game input state")?;
        let dy = inputs_y.first().map_or(0, DensityMatrix::dim);
        let outcomes = self.outcomes.unwrap_or(dy * dy);
        let first_label = self.first_label.unwrap_or(1);
        let mut table = OutcomeTensor::zeros(first_label, outcomes, inputs_x.len(), inputs_y.len());
        for e in &self.payoff {
            if !table.labels().contains(&e.b) || e.x >= inputs_x.len() || e.y >= inputs_y.len() {
                return Err(Error::Format {
                    context: "game JSON",
                    message: format!("payoff entry (b={}, x={}, y={}) is out of range", e.b, e.x, e.y),
                });
            }
            table.set(e.b, e.x, e.y, table.get(e.b, e.x, e.y) + e.value.0);
        }
        let scenario = Scenario::new(inputs_x, inputs_y, outcomes)?;
        Game::new(scenario, Payoff::new(table)?, self.eb_threshold.0)
    }
}

/// Question families and outcome count, as consumed by tomography.
/// `outcomes` defaults to `dY²`, so game files are accepted as well.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub inputs_x: Vec<MatrixJson>,
    pub inputs_y: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<usize>,
}

impl ScenarioJson {
    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioJson {
            inputs_x: states_json(s.inputs_x()),
            inputs_y: states_json(s.inputs_y()),
            outcomes: Some(s.outcome_count()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text, "scenario JSON")
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let inputs_x = states_from_json(&self.inputs_x, "scenario input state")?;
        let inputs_y = states_from_json(&self.inputs_y, "scenario input state")?;
        let dy = inputs_y.first().map_or(0, DensityMatrix::dim);
        Scenario::new(inputs_x, inputs_y, self.outcomes.unwrap_or(dy * dy))
    }
}

/// Reconstructed Choi state with the fit residual.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiJson {
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    pub choi: MatrixJson,
    pub residual: Real,
}

impl ChoiJson {
    pub fn new(choi: &ChoiOperator, residual: f64) -> Self {
        ChoiJson {
            da: choi.input_dim(),
            db: choi.output_dim(),
            choi: MatrixJson::from_matrix(choi.matrix()),
            residual: Real(residual),
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    b: usize,
    x: usize,
    y: usize,
    p: String,
}

/// Writes `b,x,y,p` rows in `b`-major order.
pub fn write_correlation_csv<W: Write>(p: &Correlation, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Format {
        context: "correlation CSV",
        message: e.to_string(),
    };
    let mut writer = csv::Writer::from_writer(out);
    for (b, x, y, v) in p.tensor().entries() {
        writer
            .serialize(CsvRow {
                b,
                x,
                y,
                p: format_real(v),
            })
            .map_err(io)?;
    }
    writer.flush().map_err(|e| io(e.into()))
}

pub fn correlation_csv_string(p: &Correlation) -> String {
    let mut buf = Vec::new();
    write_correlation_csv(p, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

/// Reads `b,x,y,p` rows. Every `(b, x, y)` in the bounding box must appear
/// exactly once. Errors name the offending data row (1-based, header
/// excluded).
pub fn read_correlation_csv<R: Read>(input: R) -> Result<Correlation> {
    let context = "correlation CSV";
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (k, record) in reader.deserialize::<CsvRow>().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| Error::Format {
            context,
            message: format!("row {row}: {e}"),
        })?;
        let value: f64 = record.p.trim().parse().map_err(|_| Error::Format {
            context,
            message: format!("row {row}: probability {:?} is not a number", record.p),
        })?;
        if !value.is_finite() {
            return Err(Error::Format {
                context,
                message: format!("row {row}: probability must be finite"),
            });
        }
        rows.push((row, record.b, record.x, record.y, value));
    }
    if rows.is_empty() {
        return Err(Error::Empty {
            context,
            what: "row list",
        });
    }
    let first = rows.iter().map(|r| r.1).min().unwrap_or(0);
    let last = rows.iter().map(|r| r.1).max().unwrap_or(0);
    let nx = rows.iter().map(|r| r.2).max().unwrap_or(0) + 1;
    let ny = rows.iter().map(|r| r.3).max().unwrap_or(0) + 1;
    let outcomes = last - first + 1;
    let mut seen = vec![false; outcomes * nx * ny];
    let mut tensor = OutcomeTensor::zeros(first, outcomes, nx, ny);
    for &(row, b, x, y, value) in &rows {
        let k = ((b - first) * nx + x) * ny + y;
        if seen[k] {
            return Err(Error::Format {
                context,
                message: format!("row {row}: duplicate entry (b={b}, x={x}, y={y})"),
            });
        }
        seen[k] = true;
        tensor.set(b, x, y, value);
    }
    if rows.len() != seen.len() {
        return Err(Error::Format {
            context,
            message: format!("expected {} rows, found {}", seen.len(), rows.len()),
        });
    }
    Correlation::new(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing_channel;
    use crate::games::{signature_correlation, signature_scenario};

    #[test]
    fn reals_use_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(-0.0), format_real(0.0));
        let json = serde_json::to_string(&vec![Real(0.35), Real(-2.0)]).unwrap();
        assert_eq!(json, "[3.4999999999999998e-1,-2.0000000000000000e0]");
        let back: Vec<Real> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[0].0, 0.35);
    }

    #[test]
    fn channel_round_trip() {
        let ch = depolarizing_channel(0.7).unwrap();
        let json = ChannelJson::from_channel(&ch).to_json();
        let back = ChannelJson::parse(&json).unwrap().to_channel().unwrap();
        assert_eq!(back.kraus(), ch.kraus());
    }

    #[test]
    fn channel_errors_name_invariant() {
        let text = r#"{"dA": 2, "dB": 2, "kraus": [{"re": [[1, 0], [0, 0.5]]}]}"#;
        let err = ChannelJson::parse(text).unwrap().to_channel().unwrap_err();
        assert!(err.to_string().contains("trace preservation"), "{err}");
        assert!(ChannelJson::parse("{\"dA\": 2,").is_err());
    }

    #[test]
    fn csv_round_trip_and_row_errors() {
        let p = signature_correlation(&depolarizing_channel(0.5).unwrap(), signature_scenario(2, 2)).unwrap();
        let text = correlation_csv_string(&p);
        assert!(text.starts_with("b,x,y,p\n1,0,0,"));
        let back = read_correlation_csv(text.as_bytes()).unwrap();
        assert_eq!(back, p);
        let corrupted = text.replacen("\n1,0,1,", "\n1,0,1,abc", 1);
        let err = read_correlation_csv(corrupted.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
    }
}
