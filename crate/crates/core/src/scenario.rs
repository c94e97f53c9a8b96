//! Scenario files, experiment dispatch and result serialization.
//!
//! A scenario is a TOML document naming one experiment plus its parameters.
//! Unknown keys are rejected at every level. Command-line flags are applied on
//! top of the parsed file through [`Overrides`], so the precedence is
//! built-in default < file < flag.
//!
//! [`run`] returns a [`ResultEnvelope`] echoing the config next to an
//! experiment-specific payload. For a fixed config and seed the payload and
//! every CSV table are byte-identical between runs; the only varying field is
//! the timestamp supplied by the caller.

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bsm::{BellState, BsmNetwork, Port, PortMap};
use crate::calibrate::{calibrate, Calibration};
use crate::error::{Error, Result};
use crate::hom::{dip_half_width, scan_grid, CurvePoint, DelayModel, HomSource, ProjectionBasisOam};
use crate::rng;
use crate::teleport::{
    run_teleport_suite, six_poles, CorrectionMode, InputQubit, NoiseConfig, Shots, TeleportConfig, TeleportResult,
};
use crate::tomography::{tomo_report, ComplexMatrix, TomoReport, TomoSettings};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    HomScan,
    SourceVerify,
    BsmVerify,
    Teleport,
    Tomo,
    Calibrate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::HomScan => "hom-scan",
            Experiment::SourceVerify => "source-verify",
            Experiment::BsmVerify => "bsm-verify",
            Experiment::Teleport => "teleport",
            Experiment::Tomo => "tomo",
            Experiment::Calibrate => "calibrate",
        }
    }
}

/// A named pole (`H`, `V`, `D`, `A`, `R`, `L`), the whole alphabet
/// (`six-poles`), or explicit amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Named(String),
    Explicit(InputQubit),
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec::Named("six-poles".into())
    }
}

impl InputSpec {
    pub fn resolve(&self) -> Result<Vec<(String, InputQubit)>> {
        match self {
            InputSpec::Explicit(q) => Ok(vec![("custom".into(), *q)]),
            InputSpec::Named(n) if n.eq_ignore_ascii_case("six-poles") => Ok(six_poles()),
            InputSpec::Named(n) => six_poles()
                .into_iter()
                .find(|(l, _)| l.eq_ignore_ascii_case(n.trim()))
                .map(|p| vec![p])
                .ok_or_else(|| Error::invalid("input", format!("unknown pole `{n}`; expected H, V, D, A, R, L or six-poles"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HomScanSettings {
    pub points: usize,
    pub min_mm: f64,
    pub max_mm: f64,
    /// Analyzer settings `[basis_a, basis_b]`, one curve each.
    pub bases: Vec<[ProjectionBasisOam; 2]>,
}

impl Default for HomScanSettings {
    fn default() -> Self {
        use ProjectionBasisOam::{A, D};
        HomScanSettings {
            points: 121,
            min_mm: -0.6,
            max_mm: 0.6,
            bases: vec![[D, D], [D, A]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationTargets {
    pub source_fidelity: f64,
    pub average_fidelity: f64,
}

impl Default for CalibrationTargets {
    fn default() -> Self {
        CalibrationTargets {
            source_fidelity: 0.9255,
            average_fidelity: 0.918,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

fn default_ell0() -> i32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub input: InputSpec,
    /// Events per input; absent means exact probabilities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    /// Absent means the seed comes from the environment or the built-in default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_ell0")]
    pub ell0: i32,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub delay: DelayModel,
    #[serde(default)]
    pub correction: CorrectionMode,
    #[serde(default)]
    pub port_map: PortMap,
    #[serde(default)]
    pub hom_scan: HomScanSettings,
    #[serde(default)]
    pub tomo: TomoSettings,
    #[serde(default)]
    pub calibrate: CalibrationTargets,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ScenarioConfig {
    pub fn new(experiment: Experiment) -> Self {
        ScenarioConfig {
            experiment,
            input: InputSpec::default(),
            shots: None,
            seed: None,
            ell0: default_ell0(),
            noise: NoiseConfig::default(),
            delay: DelayModel::default(),
            correction: CorrectionMode::default(),
            port_map: PortMap::default(),
            hom_scan: HomScanSettings::default(),
            tomo: TomoSettings::default(),
            calibrate: CalibrationTargets::default(),
            output: OutputPaths::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses a file whose `experiment` key is replaced (or supplied) by `experiment`.
    pub fn from_toml_for(text: &str, experiment: Experiment) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        table.insert("experiment".into(), toml::Value::String(experiment.name().into()));
        let cfg: ScenarioConfig = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.teleport_config(0).validate()?;
        self.input.resolve()?;
        let h = &self.hom_scan;
        if h.points < 3 || !(h.min_mm.is_finite() && h.max_mm.is_finite() && h.min_mm < h.max_mm) {
            return Err(Error::invalid("hom_scan", "need at least 3 points over a finite, increasing range"));
        }
        if h.bases.is_empty() {
            return Err(Error::invalid("hom_scan.bases", "at least one basis pair is required"));
        }
        if self.tomo.shots_per_basis == 0 {
            return Err(Error::invalid("tomo.shots_per_basis", "must be positive"));
        }
        Ok(())
    }

    pub fn resolved_seed(&self) -> u64 {
        self.seed.unwrap_or_else(rng::default_seed)
    }

    pub fn teleport_config(&self, seed: u64) -> TeleportConfig {
        TeleportConfig {
            shots: self.shots.map_or(Shots::Exact, Shots::Sampled),
            noise: self.noise,
            seed,
            ell0: self.ell0,
            delay: self.delay,
            correction: self.correction,
            port_map: self.port_map,
        }
    }
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub input: Option<InputSpec>,
    pub shots: Option<u64>,
    pub exact: bool,
    pub seed: Option<u64>,
    pub ell0: Option<i32>,
    pub depolarizing_p: Option<f64>,
    pub source_delay_mm: Option<f64>,
    pub feedforward_flip_prob: Option<f64>,
    pub sigma_mm: Option<f64>,
    pub verify_only: bool,
    pub shots_per_basis: Option<u64>,
    pub bootstrap: Option<usize>,
    pub target_source: Option<f64>,
    pub target_average: Option<f64>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) -> Result<()> {
        fn set<T: Clone>(slot: &mut T, v: &Option<T>) {
            if let Some(v) = v {
                *slot = v.clone();
            }
        }
        if let Some(i) = &self.input {
            cfg.input = i.clone();
        }
        if self.shots.is_some() {
            cfg.shots = self.shots;
        }
        if self.exact {
            cfg.shots = None;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        set(&mut cfg.ell0, &self.ell0);
        set(&mut cfg.noise.depolarizing_p, &self.depolarizing_p);
        set(&mut cfg.noise.source_delay_mm, &self.source_delay_mm);
        set(&mut cfg.noise.feedforward_flip_prob, &self.feedforward_flip_prob);
        set(&mut cfg.delay.sigma_mm, &self.sigma_mm);
        if self.verify_only {
            cfg.correction = CorrectionMode::VerifyOnly;
        }
        set(&mut cfg.tomo.shots_per_basis, &self.shots_per_basis);
        set(&mut cfg.tomo.bootstrap, &self.bootstrap);
        set(&mut cfg.calibrate.source_fidelity, &self.target_source);
        set(&mut cfg.calibrate.average_fidelity, &self.target_average);
        if self.json.is_some() {
            cfg.output.json = self.json.clone();
        }
        if self.csv.is_some() {
            cfg.output.csv = self.csv.clone();
        }
        cfg.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomCurve {
    pub basis_a: ProjectionBasisOam,
    pub basis_b: ProjectionBasisOam,
    pub points: Vec<CurvePoint>,
    /// Half width at half depth, when the curve has a dip or a peak.
    pub half_width_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomScanResult {
    pub sigma_mm: f64,
    pub curves: Vec<HomCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceVerifyResult {
    pub delta_x_mm: f64,
    pub fidelity: f64,
    pub coincidence_probability: f64,
    pub rho: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsmVerifyResult {
    /// Rows in Bell order (omega+, omega-, xi+, xi-), columns ports A..D.
    pub port_matrix: [[f64; 4]; 4],
    pub assignment: Vec<(BellState, Port)>,
    pub max_misroute: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "result", rename_all = "kebab-case")]
pub enum Payload {
    HomScan(HomScanResult),
    SourceVerify(SourceVerifyResult),
    BsmVerify(BsmVerifyResult),
    Teleport(TeleportResult),
    Tomo(TomoReport),
    Calibrate(Calibration),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub config: ScenarioConfig,
    pub tool_version: String,
    pub seed: u64,
    pub timestamp_unix: u64,
    pub payload: Payload,
}

impl ResultEnvelope {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

pub fn run(config: &ScenarioConfig, timestamp_unix: u64) -> Result<ResultEnvelope> {
    config.validate()?;
    let seed = config.resolved_seed();
    let payload = run_payload(config, seed)?;
    Ok(ResultEnvelope {
        config: config.clone(),
        tool_version: TOOL_VERSION.to_string(),
        seed,
        timestamp_unix,
        payload,
    })
}

fn run_payload(config: &ScenarioConfig, seed: u64) -> Result<Payload> {
    let tcfg = config.teleport_config(seed);
    Ok(match config.experiment {
        Experiment::HomScan => {
            let source = tcfg.source()?;
            let h = &config.hom_scan;
            let grid = scan_grid(h.points, h.min_mm, h.max_mm);
            let curves = h
                .bases
                .iter()
                .map(|&[a, b]| {
                    let points = source.coincidence_curve(a, b, &grid)?;
                    Ok(HomCurve {
                        basis_a: a,
                        basis_b: b,
                        half_width_mm: dip_half_width(&points),
                        points,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Payload::HomScan(HomScanResult {
                sigma_mm: config.delay.sigma_mm,
                curves,
            })
        }
        Experiment::SourceVerify => {
            let source: HomSource = tcfg.source()?;
            let pair = source.entangled_source(config.noise.source_delay_mm)?;
            Payload::SourceVerify(SourceVerifyResult {
                delta_x_mm: config.noise.source_delay_mm,
                fidelity: pair.fidelity,
                coincidence_probability: pair.coincidence_probability,
                rho: ComplexMatrix::from(&pair.rho),
            })
        }
        Experiment::BsmVerify => {
            let bsm = BsmNetwork::new(config.ell0, config.port_map);
            let port_matrix = bsm.verification_matrix()?;
            let assignment = BellState::ALL.iter().map(|&b| (b, config.port_map.port(b))).collect();
            let mut max_misroute: f64 = 0.0;
            for b in BellState::ALL {
                for p in Port::ALL {
                    if p != config.port_map.port(b) {
                        max_misroute = max_misroute.max(port_matrix[b.index()][p.index()]);
                    }
                }
            }
            Payload::BsmVerify(BsmVerifyResult {
                port_matrix,
                assignment,
                max_misroute,
            })
        }
        Experiment::Teleport => Payload::Teleport(run_teleport_suite(&config.input.resolve()?, &tcfg)?),
        Experiment::Tomo => Payload::Tomo(tomo_report(&config.input.resolve()?, &tcfg, &config.tomo)?),
        Experiment::Calibrate => {
            let t = config.calibrate;
            Payload::Calibrate(calibrate(t.source_fidelity, t.average_fidelity, &tcfg)?)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomScanRow {
    pub delta_x_mm: f64,
    pub basis_a: ProjectionBasisOam,
    pub basis_b: ProjectionBasisOam,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortCsvRow {
    pub port: Port,
    pub theory_pct: f64,
    pub observed_pct: f64,
    pub stderr_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub state: String,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortMatrixRow {
    pub bell_state: BellState,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

fn write_rows<W: Write, R: Serialize>(out: W, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the payload's CSV table, if the experiment has one.
///
/// * hom-scan: `delta_x_mm, basis_a, basis_b, probability`
/// * bsm-verify: `bell_state, A, B, C, D`
/// * teleport: `port, theory_pct, observed_pct, stderr_pct`
/// * tomo: `state, F, stderr`
///
/// Returns `false` for source-verify and calibrate, which only produce JSON.
pub fn write_csv<W: Write>(payload: &Payload, out: W) -> Result<bool> {
    match payload {
        Payload::HomScan(r) => write_rows(
            out,
            r.curves.iter().flat_map(|c| {
                c.points.iter().map(|p| HomScanRow {
                    delta_x_mm: p.delta_x_mm,
                    basis_a: c.basis_a,
                    basis_b: c.basis_b,
                    probability: p.probability,
                })
            }),
        )?,
        Payload::BsmVerify(r) => write_rows(
            out,
            BellState::ALL.iter().map(|&s| {
                let row = r.port_matrix[s.index()];
                PortMatrixRow {
                    bell_state: s,
                    a: row[0],
                    b: row[1],
                    c: row[2],
                    d: row[3],
                }
            }),
        )?,
        Payload::Teleport(r) => write_rows(
            out,
            r.ports.iter().map(|p| PortCsvRow {
                port: p.port,
                theory_pct: p.theory_pct,
                observed_pct: p.observed_pct,
                stderr_pct: p.stderr_pct,
            }),
        )?,
        Payload::Tomo(r) => write_rows(
            out,
            r.entries.iter().map(|e| FidelityRow {
                state: e.state.clone(),
                fidelity: e.fidelity,
                stderr: e.stderr,
            }),
        )?,
        Payload::SourceVerify(_) | Payload::Calibrate(_) => return Ok(false),
    }
    Ok(true)
}

pub fn read_csv<R: std::io::Read, T: serde::de::DeserializeOwned>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Process exit status for an error: 1 for invalid input, 3 when the
/// estimator did not converge, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. }
        | Error::Config(_)
        | Error::OverlappingPaths(_)
        | Error::TooManyPhotons(_)
        | Error::MixedPhotonNumber(..)
        | Error::ZeroNorm
        | Error::OamOutsideQubit { .. }
        | Error::PhotonCount { .. } => 1,
        Error::NotConverged { .. } => 3,
        Error::Unattainable { .. } | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 2,
    }
}
