use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use qmem_core::channels::{erasure_channel, measure_and_prepare, Povm};
use qmem_core::formats::{
    correlation_csv_string, read_correlation_csv, ChannelJson, ChoiJson, DecompositionJson, GameJson,
    Real, ScenarioJson, WitnessJson,
};
use qmem_core::games::reconstruct_choi_with_tolerance;
use qmem_core::random::Sampler;
use qmem_core::{
    certify, depolarizing_channel, expected_payoff, identity_channel, loss_extend, signature_correlation,
    sparse_decompose, tol, tomographic_decompose, CertifyOptions, DecompositionMode, InputFamily,
    QuantumChannel, SignatureScenario, Verdict,
};
use serde::Serialize;

use crate::{ChannelKind, Command, Family, Mode};

impl From<Family> for InputFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Standard => InputFamily::Standard,
            Family::Tetrahedral => InputFamily::Tetrahedral,
        }
    }
}

impl From<Mode> for DecompositionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sparse => DecompositionMode::Sparse,
            Mode::Tomographic => DecompositionMode::Tomographic,
        }
    }
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::MakeChannel {
            kind,
            param,
            kind_flag,
            param_flag,
            dim,
            seed,
            out,
        } => {
            let kind = kind.or(kind_flag).context("a channel kind is required")?;
            let channel = make_channel(kind, param.or(param_flag), dim, seed)?;
            emit(out.as_deref(), &ChannelJson::from_channel(&channel).to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            channel,
            mode,
            family,
            witness,
            out,
            tolerance,
            max_dim,
            timing,
        } => cmd_certify(CertifyArgs {
            channel,
            mode,
            family,
            witness,
            out,
            tolerance,
            max_dim,
            timing,
        }),
        Command::Simulate {
            channel,
            game,
            eta,
            out,
            max_dim,
        } => cmd_simulate(&channel, &game, eta, out.as_deref(), max_dim),
        Command::Decompose {
            witness,
            mode,
            family,
            out,
            tolerance,
        } => cmd_decompose(&witness, mode, family, out.as_deref(), tolerance),
        Command::Tomography {
            correlation,
            scenario,
            out,
            tolerance,
        } => cmd_tomography(&correlation, &scenario, out.as_deref(), tolerance),
        Command::MakeScenario {
            dim_a,
            dim_b,
            family,
            out,
        } => {
            check_dim(dim_a, DEFAULT_CAP)?;
            check_dim(dim_b, DEFAULT_CAP)?;
            let s = SignatureScenario::new(dim_a, dim_b, family.into())?;
            emit(out.as_deref(), &ScenarioJson::from_scenario(s.scenario()).to_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

const DEFAULT_CAP: usize = crate::DEFAULT_MAX_DIM;

fn make_channel(kind: ChannelKind, param: Option<f64>, dim: usize, seed: u64) -> Result<QuantumChannel> {
    check_dim(dim, DEFAULT_CAP)?;
    let need = |name: &str| param.with_context(|| format!("{name} channels need a parameter"));
    Ok(match kind {
        ChannelKind::Depolarizing => {
            if dim != 2 {
                bail!("depolarizing channels are qubit channels; --dim must be 2");
            }
            depolarizing_channel(need("depolarizing")?)?
        }
        ChannelKind::Erasure => erasure_channel(need("erasure")?, dim)?,
        ChannelKind::Identity => identity_channel(dim),
        ChannelKind::MeasurePrepare => {
            let outcomes = match param {
                None => dim,
                Some(p) if p >= 1.0 && p.fract() == 0.0 && p <= 64.0 => p as usize,
                Some(p) => bail!("measure-prepare outcome count must be an integer in [1, 64], got {p}"),
            };
            let mut sampler = Sampler::seeded(seed);
            let povm: Povm = sampler.povm(dim, outcomes);
            let preps: Vec<_> = (0..outcomes).map(|_| sampler.density_matrix(dim)).collect();
            measure_and_prepare(&povm, &preps)?
        }
    })
}

fn check_dim(d: usize, cap: usize) -> Result<()> {
    if d == 0 || d > cap {
        bail!("dimension {d} is outside the supported range 1..={cap}");
    }
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<(String, String)> {
    match path {
        Some(p) if p != Path::new("-") => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok((text, p.display().to_string()))
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).context("reading standard input")?;
            Ok((text, "-".to_string()))
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_channel(text: &str, source: &str, cap: usize) -> Result<QuantumChannel> {
    let spec = ChannelJson::parse(text).with_context(|| format!("parsing channel {source}"))?;
    check_dim(spec.da, cap)?;
    check_dim(spec.db, cap)?;
    spec.to_channel().with_context(|| format!("validating channel {source}"))
}

/// Writes `text` to `path`, or to standard output.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

struct CertifyArgs {
    channel: Option<PathBuf>,
    mode: Mode,
    family: Family,
    witness: Option<PathBuf>,
    out: Option<PathBuf>,
    tolerance: Option<f64>,
    max_dim: usize,
    timing: bool,
}

#[derive(Serialize)]
struct ChannelSummary {
    #[serde(rename = "dA")]
    da: usize,
    #[serde(rename = "dB")]
    db: usize,
    source: String,
}

#[derive(Serialize)]
struct CertificationReport {
    channel: ChannelSummary,
    ppt_min_eigenvalue: Real,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    payoff: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    game_inputs: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    game_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<Real>,
}

fn cmd_certify(args: CertifyArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let (text, source) = read_input(args.channel.as_deref())?;
    let channel = load_channel(&text, &source, args.max_dim)?;
    let witness = match &args.witness {
        Some(p) => Some(
            WitnessJson::parse(&read_file(p)?)
                .and_then(|w| w.to_witness())
                .with_context(|| format!("loading witness {}", p.display()))?,
        ),
        None => None,
    };
    let margin = args.tolerance.unwrap_or(tol::CERTIFICATION_MARGIN);
    if !(margin.is_finite() && margin >= 0.0) {
        bail!("--tolerance must be a nonnegative number, got {margin}");
    }
    let options = CertifyOptions {
        family: args.family.into(),
        decomposition: args.mode.into(),
        witness,
        margin,
    };
    let report = certify(&channel, &options)?;
    let game_path = match (&report.game, &args.out) {
        (Some(game), Some(path)) => {
            emit(Some(path), &GameJson::from_game(game).to_json())?;
            Some(path.display().to_string())
        }
        _ => None,
    };
    let certified = report.verdict == Verdict::Certified;
    let summary = CertificationReport {
        channel: ChannelSummary {
            da: channel.input_dim(),
            db: channel.output_dim(),
            source,
        },
        ppt_min_eigenvalue: Real(report.ppt.min_eigenvalue),
        verdict: if certified { "certified" } else { "not_certified" },
        payoff: report.payoff.filter(|_| certified).map(Real),
        game_inputs: report
            .game
            .as_ref()
            .map(|g| [g.scenario().inputs_x().len(), g.scenario().inputs_y().len()]),
        game_path,
        caveat: report.caveat(),
        timing_ms: args
            .timing
            .then(|| Real(start.elapsed().as_secs_f64() * 1e3)),
    };
    emit(None, &to_json(&summary))?;
    Ok(if certified { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize)]
struct SimulationSummary {
    payoff: Real,
    rows: usize,
    out: String,
}

fn cmd_simulate(channel: &Path, game: &Path, eta: Option<f64>, out: Option<&Path>, cap: usize) -> Result<ExitCode> {
    let channel = load_channel(&read_file(channel)?, &channel.display().to_string(), cap)?;
    let game = GameJson::parse(&read_file(game)?)
        .and_then(|g| g.to_game())
        .with_context(|| format!("loading game {}", game.display()))?;
    let p = signature_correlation(&channel, game.scenario()).context("game and channel are incompatible")?;
    let (game, p) = match eta {
        Some(eta) => loss_extend(&game, &p, eta)?,
        None => (game, p),
    };
    let payoff = expected_payoff(&game, &p)?;
    let csv = correlation_csv_string(&p);
    let rows = csv.lines().count() - 1;
    match out {
        Some(path) => {
            emit(Some(path), &csv)?;
            emit(
                None,
                &to_json(&SimulationSummary {
                    payoff: Real(payoff),
                    rows,
                    out: path.display().to_string(),
                }),
            )?;
        }
        None => {
            emit(None, &csv)?;
            eprintln!("payoff {}", qmem_core::formats::format_real(payoff));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DecompositionSummary {
    nonzero: usize,
    residual: Real,
    inputs: [usize; 2],
    out: String,
}

fn cmd_decompose(
    witness: &Path,
    mode: Mode,
    family: Family,
    out: Option<&Path>,
    tolerance: Option<f64>,
) -> Result<ExitCode> {
    let w = WitnessJson::parse(&read_file(witness)?)
        .and_then(|w| w.to_witness())
        .with_context(|| format!("loading witness {}", witness.display()))?;
    let dec = match mode {
        Mode::Sparse => sparse_decompose(&w)?,
        Mode::Tomographic => {
            let family = InputFamily::from(family);
            tomographic_decompose(&w, &family.states(w.dims().left)?, &family.states(w.dims().right)?)?
        }
    };
    let residual = dec.residual(&w);
    let bound = tolerance.unwrap_or(tol::RECONSTRUCTION);
    if residual > bound {
        bail!("reconstruction residual {residual:e} exceeds {bound:e}");
    }
    let json = DecompositionJson::from_decomposition(&dec).to_json();
    let summary = DecompositionSummary {
        nonzero: dec.nonzero_count(),
        residual: Real(residual),
        inputs: [dec.states_x.len(), dec.states_y.len()],
        out: out.map_or("-".to_string(), |p| p.display().to_string()),
    };
    match out {
        Some(path) => {
            emit(Some(path), &json)?;
            emit(None, &to_json(&summary))?;
        }
        None => {
            emit(None, &json)?;
            eprint!("{}", to_json(&summary));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tomography(correlation: &Path, scenario: &Path, out: Option<&Path>, tolerance: Option<f64>) -> Result<ExitCode> {
    let file = fs::File::open(correlation).with_context(|| format!("reading {}", correlation.display()))?;
    let p = read_correlation_csv(file).with_context(|| format!("loading correlation {}", correlation.display()))?;
    let scenario = ScenarioJson::parse(&read_file(scenario)?)
        .and_then(|s| s.to_scenario())
        .and_then(SignatureScenario::from_scenario)
        .with_context(|| format!("loading scenario {}", scenario.display()))?;
    let (choi, residual) = reconstruct_choi_with_tolerance(&p, &scenario, tolerance.unwrap_or(tol::RECONSTRUCTION))?;
    emit(out, &ChoiJson::new(&choi, residual).to_json())?;
    Ok(ExitCode::SUCCESS)
}
