//! Teleportation of a polarization qubit onto an OAM qubit.
//!
//! Photon `c` carries the input polarization qubit and, after the source,
//! photon `a` and Bob's photon `b` share the OAM pair. Photons `c` and `a` are
//! the same physical photon, so the joint state lives on 8 dimensions ordered
//! `c * 4 + a * 2 + b`. The hybrid Bell measurement acts on `(c, a)`; Bob
//! applies a Pauli frame correction that depends on the announced outcome.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsm::{bell_vector, BellState, BsmNetwork, Port, PortMap};
use crate::error::{Error, Result};
use crate::hom::{DelayModel, HomSource};
use crate::linalg::{c, kron, outer, partial_trace_last, pauli_x, pauli_z, re, Mat2, Mat4, Mat8, Vec2, FRAC_1_SQRT_2};
use crate::rng;
use crate::tomography::{fidelity, DensityMatrix2};

/// Events per sampling block; each block draws from its own RNG stream.
pub const BLOCK: u64 = 4096;

/// Polarization input qubit `alpha |H> + beta |V>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InputQubitRepr", into = "InputQubitRepr")]
pub struct InputQubit {
    alpha: crate::linalg::C64,
    beta: crate::linalg::C64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputQubitRepr {
    alpha: [f64; 2],
    beta: [f64; 2],
}

impl TryFrom<InputQubitRepr> for InputQubit {
    type Error = Error;
    fn try_from(r: InputQubitRepr) -> Result<Self> {
        InputQubit::new(c(r.alpha[0], r.alpha[1]), c(r.beta[0], r.beta[1]))
    }
}

impl From<InputQubit> for InputQubitRepr {
    fn from(q: InputQubit) -> Self {
        InputQubitRepr {
            alpha: [q.alpha.re, q.alpha.im],
            beta: [q.beta.re, q.beta.im],
        }
    }
}

impl InputQubit {
    pub fn new(alpha: crate::linalg::C64, beta: crate::linalg::C64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("input", format!("|alpha|^2 + |beta|^2 = {n}, expected 1")));
        }
        Ok(InputQubit { alpha, beta })
    }

    /// Bloch-sphere parametrization `cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        InputQubit {
            alpha: re((theta / 2.0).cos()),
            beta: c(phi.cos(), phi.sin()) * (theta / 2.0).sin(),
        }
    }

    pub fn alpha(&self) -> crate::linalg::C64 {
        self.alpha
    }

    pub fn beta(&self) -> crate::linalg::C64 {
        self.beta
    }

    pub fn vector(&self) -> Vec2 {
        Vec2::new(self.alpha, self.beta)
    }
}

/// The six polarization eigenstates used as the test alphabet.
pub fn six_poles() -> Vec<(String, InputQubit)> {
    let s = FRAC_1_SQRT_2;
    [
        ("H", re(1.0), re(0.0)),
        ("V", re(0.0), re(1.0)),
        ("D", re(s), re(s)),
        ("A", re(s), re(-s)),
        ("R", re(s), c(0.0, s)),
        ("L", re(s), c(0.0, -s)),
    ]
    .into_iter()
    .map(|(l, a, b)| (l.to_string(), InputQubit { alpha: a, beta: b }))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Weight of white noise mixed into the post-selected source pair.
    pub depolarizing_p: f64,
    /// Residual path-length mismatch at the source beam splitter.
    pub source_delay_mm: f64,
    /// Probability that Bob's correction is driven by a wrong outcome.
    pub feedforward_flip_prob: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            depolarizing_p: 0.0,
            source_delay_mm: 0.0,
            feedforward_flip_prob: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarizing_p) {
            return Err(Error::invalid("depolarizing_p", "must lie in [0, 1]"));
        }
        if !self.source_delay_mm.is_finite() {
            return Err(Error::invalid("source_delay_mm", "must be finite"));
        }
        if !(0.0..=1.0).contains(&self.feedforward_flip_prob) {
            return Err(Error::invalid("feedforward_flip_prob", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Shots {
    /// Outcome probabilities are used directly.
    #[default]
    Exact,
    /// Monte Carlo with the given number of events per input.
    Sampled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionMode {
    /// Bob applies the Pauli correction to his photon.
    #[default]
    Apply,
    /// Bob keeps his photon untouched and rotates the reference frame of the
    /// fidelity estimate instead.
    VerifyOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TeleportConfig {
    pub shots: Shots,
    pub noise: NoiseConfig,
    pub seed: u64,
    pub ell0: i32,
    pub delay: DelayModel,
    pub correction: CorrectionMode,
    pub port_map: PortMap,
}

impl Default for TeleportConfig {
    fn default() -> Self {
        TeleportConfig {
            shots: Shots::Exact,
            noise: NoiseConfig::default(),
            seed: rng::DEFAULT_SEED,
            ell0: 1,
            delay: DelayModel::default(),
            correction: CorrectionMode::Apply,
            port_map: PortMap::default(),
        }
    }
}

impl TeleportConfig {
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        self.delay.validate()?;
        if self.ell0 < 1 {
            return Err(Error::invalid("ell0", "must be at least 1"));
        }
        if self.shots == Shots::Sampled(0) {
            return Err(Error::invalid("shots", "must be positive"));
        }
        Ok(())
    }

    pub fn source(&self) -> Result<HomSource> {
        HomSource::new(self.delay, self.noise.depolarizing_p, self.ell0)
    }
}

/// Input qubit on `c` tensored with the shared pair on `(a, b)`.
pub fn compose_full_state(input: &InputQubit, channel: &Mat4) -> Mat8 {
    let v = input.vector();
    kron::<2, 4, 8>(&outer(&v, &v), channel)
}

/// `(<Bell_k|_{ca} (x) I_b)`, as a 2x8 map onto Bob's qubit.
fn bell_bra(which: BellState) -> nalgebra::SMatrix<crate::linalg::C64, 2, 8> {
    let bell = bell_vector(which);
    let mut m = nalgebra::SMatrix::<crate::linalg::C64, 2, 8>::zeros();
    for ca in 0..4 {
        for b in 0..2 {
            m[(b, 2 * ca + b)] = bell[ca].conj();
        }
    }
    m
}

/// Bob's unnormalized conditional state for a pure joint state.
pub fn bell_branch(joint: &nalgebra::SVector<crate::linalg::C64, 8>, which: BellState) -> Vec2 {
    bell_bra(which) * joint
}

/// Bob's unnormalized conditional density matrix; its trace is the outcome probability.
pub fn conditional_state(rho8: &Mat8, which: BellState) -> Mat2 {
    let m = bell_bra(which);
    m * rho8 * m.adjoint()
}

/// Pauli frame correction for each Bell outcome.
pub fn correction_unitary(which: BellState) -> Mat2 {
    match which {
        BellState::OmegaMinus => Mat2::identity(),
        BellState::OmegaPlus => pauli_z(),
        BellState::XiPlus => pauli_z() * pauli_x(),
        BellState::XiMinus => pauli_x(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub label: String,
    pub input: InputQubit,
    /// Outcome probabilities from the sorter, in Bell order.
    pub outcome_probabilities: [f64; 4],
    /// Observed events per Bell outcome (sampled mode only).
    pub outcome_counts: Option<[u64; 4]>,
    /// Events where the correction used a wrong outcome (sampled mode only).
    pub flipped_corrections: Option<u64>,
    /// Bob's averaged output state; in verify-only mode this is his uncorrected photon.
    pub output: crate::tomography::ComplexMatrix,
    pub fidelity: f64,
}

impl InputRecord {
    pub fn output_matrix(&self) -> Result<DensityMatrix2> {
        DensityMatrix2::new(self.output.to_mat2()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortRow {
    pub port: Port,
    pub theory_pct: f64,
    pub observed_pct: f64,
    pub stderr_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportResult {
    pub source_fidelity: f64,
    pub records: Vec<InputRecord>,
    pub average_fidelity: f64,
    pub ports: Vec<PortRow>,
}

struct Branches {
    probs: [f64; 4],
    /// Normalized conditional states, zero where the outcome cannot occur.
    states: [Mat2; 4],
}

fn branches(rho8: &Mat8, bsm: &BsmNetwork) -> Result<Branches> {
    let rho_ca: Mat4 = partial_trace_last::<4, 2, 8>(rho8);
    let dist = bsm.sort_density(&rho_ca)?;
    let mut probs = [0.0; 4];
    let mut states = [Mat2::zeros(); 4];
    for b in BellState::ALL {
        let p = dist.get(bsm.port_map.port(b));
        probs[b.index()] = p;
        if p > 1e-15 {
            states[b.index()] = conditional_state(rho8, b) / re(p);
        }
    }
    Ok(Branches { probs, states })
}

/// `w[k][j]`: weight of outcome `k` with Bob acting on outcome `j`.
fn exact_weights(probs: &[f64; 4], q: f64) -> [[f64; 4]; 4] {
    let mut w = [[0.0; 4]; 4];
    for k in 0..4 {
        for j in 0..4 {
            w[k][j] = probs[k] * if j == k { 1.0 - q } else { q / 3.0 };
        }
    }
    w
}

struct Tally {
    counts: [[u64; 4]; 4],
}

fn sample_tally(probs: &[f64; 4], bsm: &BsmNetwork, q: f64, shots: u64, seed: u64) -> Tally {
    use rand::Rng as _;
    let dist = {
        let mut d = [0.0; 4];
        for b in BellState::ALL {
            d[bsm.port_map.port(b).index()] = probs[b.index()];
        }
        crate::bsm::PortDistribution(d)
    };
    let blocks = shots.div_ceil(BLOCK);
    let per_block: Vec<[[u64; 4]; 4]> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut r = rng::stream(seed, blk);
            let n = BLOCK.min(shots - blk * BLOCK);
            let mut t = [[0u64; 4]; 4];
            for _ in 0..n {
                let k = bsm.port_map.state(dist.sample(&mut r)).index();
                let j = if q > 0.0 && r.random::<f64>() < q {
                    let off = r.random_range(1..4);
                    (k + off) % 4
                } else {
                    k
                };
                t[k][j] += 1;
            }
            t
        })
        .collect();
    let mut counts = [[0u64; 4]; 4];
    for t in per_block {
        for k in 0..4 {
            for j in 0..4 {
                counts[k][j] += t[k][j];
            }
        }
    }
    Tally { counts }
}

fn teleport_one(
    label: &str,
    input: &InputQubit,
    channel: &Mat4,
    bsm: &BsmNetwork,
    cfg: &TeleportConfig,
    seed: u64,
) -> Result<InputRecord> {
    let rho8 = compose_full_state(input, channel);
    let br = branches(&rho8, bsm)?;
    let q = cfg.noise.feedforward_flip_prob;
    let (weights, counts, flipped) = match cfg.shots {
        Shots::Exact => (exact_weights(&br.probs, q), None, None),
        Shots::Sampled(n) => {
            let t = sample_tally(&br.probs, bsm, q, n, seed);
            let w = t.counts.map(|row| row.map(|x| x as f64 / n as f64));
            let per_outcome = t.counts.map(|row| row.iter().sum::<u64>());
            let flipped = (0..4).map(|k| per_outcome[k] - t.counts[k][k]).sum();
            (w, Some(per_outcome), Some(flipped))
        }
    };
    let psi = input.vector();
    let mut out = Mat2::zeros();
    let mut fid = 0.0;
    for k in 0..4 {
        for j in 0..4 {
            let w = weights[k][j];
            if w == 0.0 {
                continue;
            }
            let u = correction_unitary(BellState::from_index(j));
            let rho_k = br.states[k];
            match cfg.correction {
                CorrectionMode::Apply => {
                    out += u * rho_k * u.adjoint() * re(w);
                }
                CorrectionMode::VerifyOnly => {
                    out += rho_k * re(w);
                    let frame = u.adjoint() * psi;
                    fid += w * fidelity(&DensityMatrix2::from_psd_unchecked(rho_k), &frame);
                }
            }
        }
    }
    let total: f64 = weights.iter().flatten().sum();
    let out = out / re(total);
    let rho_out = DensityMatrix2::from_psd_unchecked(out);
    let fid = match cfg.correction {
        CorrectionMode::Apply => fidelity(&rho_out, &psi),
        CorrectionMode::VerifyOnly => fid / total,
    };
    Ok(InputRecord {
        label: label.to_string(),
        input: *input,
        outcome_probabilities: br.probs,
        outcome_counts: counts,
        flipped_corrections: flipped,
        output: rho_out.to_json(),
        fidelity: fid,
    })
}

/// Teleports each input through the configured source and sorter.
pub fn run_teleport_suite(inputs: &[(String, InputQubit)], cfg: &TeleportConfig) -> Result<TeleportResult> {
    cfg.validate()?;
    if inputs.is_empty() {
        return Err(Error::invalid("inputs", "at least one input is required"));
    }
    let pair = cfg.source()?.entangled_source(cfg.noise.source_delay_mm)?;
    let bsm = BsmNetwork::new(cfg.ell0, cfg.port_map);
    let records = inputs
        .iter()
        .enumerate()
        .map(|(i, (label, q))| teleport_one(label, q, &pair.rho, &bsm, cfg, rng::child_seed(cfg.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let average_fidelity = records.iter().map(|r| r.fidelity).sum::<f64>() / records.len() as f64;
    let ports = port_table(&records, &bsm.port_map, cfg.shots);
    Ok(TeleportResult {
        source_fidelity: pair.fidelity,
        records,
        average_fidelity,
        ports,
    })
}

pub fn run_teleport(input: &InputQubit, cfg: &TeleportConfig) -> Result<TeleportResult> {
    run_teleport_suite(&[("input".to_string(), *input)], cfg)
}

fn port_table(records: &[InputRecord], map: &PortMap, shots: Shots) -> Vec<PortRow> {
    let n_inputs = records.len() as f64;
    Port::ALL
        .iter()
        .map(|&port| {
            let k = map.state(port).index();
            let theory = records.iter().map(|r| r.outcome_probabilities[k]).sum::<f64>() / n_inputs;
            let (observed, stderr) = match shots {
                Shots::Exact => (theory, 0.0),
                Shots::Sampled(n) => {
                    let total = n as f64 * n_inputs;
                    let hits: u64 = records.iter().filter_map(|r| r.outcome_counts).map(|c| c[k]).sum();
                    let f = hits as f64 / total;
                    (f, (f * (1.0 - f) / total).sqrt())
                }
            };
            PortRow {
                port,
                theory_pct: 100.0 * theory,
                observed_pct: 100.0 * observed,
                stderr_pct: 100.0 * stderr,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureBasis {
    HV,
    DA,
    RL,
}

impl MeasureBasis {
    pub const ALL: [MeasureBasis; 3] = [MeasureBasis::HV, MeasureBasis::DA, MeasureBasis::RL];

    fn eigenvectors(self) -> [Vec2; 2] {
        let s = FRAC_1_SQRT_2;
        match self {
            MeasureBasis::HV => [Vec2::new(re(1.0), re(0.0)), Vec2::new(re(0.0), re(1.0))],
            MeasureBasis::DA => [Vec2::new(re(s), re(s)), Vec2::new(re(s), re(-s))],
            MeasureBasis::RL => [Vec2::new(re(s), c(0.0, s)), Vec2::new(re(s), c(0.0, -s))],
        }
    }
}

/// Measure-and-prepare strategy without a shared entangled resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalStrategy {
    /// Uniformly random basis among the three mutually unbiased ones.
    RandomBasis,
    /// The same basis for every input.
    FixedBasis(MeasureBasis),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEstimate {
    pub mean_fidelity: f64,
    pub stderr: f64,
}

/// Average fidelity of a measure-and-prepare strategy over `inputs`.
///
/// In sampled mode the inputs are cycled shot by shot so each gets the same
/// number of events.
pub fn classical_baseline(
    inputs: &[(String, InputQubit)],
    strategy: ClassicalStrategy,
    shots: Shots,
    seed: u64,
) -> Result<ClassicalEstimate> {
    use rand::Rng as _;
    if inputs.is_empty() {
        return Err(Error::invalid("inputs", "at least one input is required"));
    }
    let bases: Vec<MeasureBasis> = match strategy {
        ClassicalStrategy::RandomBasis => MeasureBasis::ALL.to_vec(),
        ClassicalStrategy::FixedBasis(b) => vec![b],
    };
    let outcome_fid = |psi: &Vec2, basis: MeasureBasis| {
        basis.eigenvectors().map(|e| {
            let p = e.dotc(psi).norm_sqr();
            (p, p)
        })
    };
    match shots {
        Shots::Exact => {
            let mut total = 0.0;
            for (_, q) in inputs {
                let psi = q.vector();
                for &b in &bases {
                    // probability of outcome times its overlap with the input
                    total += outcome_fid(&psi, b).iter().map(|(p, f)| p * f).sum::<f64>() / bases.len() as f64;
                }
            }
            Ok(ClassicalEstimate {
                mean_fidelity: total / inputs.len() as f64,
                stderr: 0.0,
            })
        }
        Shots::Sampled(0) => Err(Error::invalid("shots", "must be positive")),
        Shots::Sampled(n) => {
            let blocks = n.div_ceil(BLOCK);
            let sums: Vec<(f64, f64)> = (0..blocks)
                .into_par_iter()
                .map(|blk| {
                    let mut r = rng::stream(seed, blk);
                    let (mut s, mut s2) = (0.0, 0.0);
                    for i in blk * BLOCK..n.min((blk + 1) * BLOCK) {
                        let psi = inputs[(i % inputs.len() as u64) as usize].1.vector();
                        let b = bases[r.random_range(0..bases.len())];
                        let outs = outcome_fid(&psi, b);
                        let f = if r.random::<f64>() < outs[0].0 { outs[0].1 } else { outs[1].1 };
                        s += f;
                        s2 += f * f;
                    }
                    (s, s2)
                })
                .collect();
            let (s, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            let nf = n as f64;
            let mean = s / nf;
            let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
            Ok(ClassicalEstimate {
                mean_fidelity: mean,
                stderr: (var / nf).sqrt(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::phi_minus;
    use crate::linalg::{kron_vec, phase_free_overlap};

    #[test]
    fn each_branch_is_a_pauli_image_of_the_input() {
        let psi = InputQubit::from_angles(1.1, 0.7);
        let joint: nalgebra::SVector<_, 8> = kron_vec::<2, 4, 8>(&psi.vector(), &phi_minus());
        for b in BellState::ALL {
            let branch = bell_branch(&joint, b);
            assert!((branch.norm_squared() - 0.25).abs() < 1e-12);
            let fixed = correction_unitary(b) * branch;
            assert!((phase_free_overlap(&fixed.normalize(), &psi.vector()) - 1.0).abs() < 1e-12, "{b:?}");
        }
    }

    #[test]
    fn ideal_six_poles_are_perfect() {
        let res = run_teleport_suite(&six_poles(), &TeleportConfig::default()).unwrap();
        for r in &res.records {
            assert!((r.fidelity - 1.0).abs() < 1e-9, "{}: {}", r.label, r.fidelity);
            for p in r.outcome_probabilities {
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
        for row in &res.ports {
            assert!((row.theory_pct - 25.0).abs() < 1e-9);
        }
    }

    #[test]
    fn verify_only_matches_apply() {
        let mut cfg = TeleportConfig {
            noise: NoiseConfig {
                depolarizing_p: 0.1,
                source_delay_mm: 0.05,
                feedforward_flip_prob: 0.05,
            },
            ..Default::default()
        };
        let a = run_teleport_suite(&six_poles(), &cfg).unwrap();
        cfg.correction = CorrectionMode::VerifyOnly;
        let v = run_teleport_suite(&six_poles(), &cfg).unwrap();
        for (x, y) in a.records.iter().zip(&v.records) {
            assert!((x.fidelity - y.fidelity).abs() < 1e-12);
        }
        // Bob's uncorrected photon carries no information about the input
        let m = v.records[2].output_matrix().unwrap();
        assert!(m.trace_distance(&DensityMatrix2::maximally_mixed()) < 1e-12);
    }

    #[test]
    fn depolarized_fidelity_closed_form() {
        for p in [0.0, 0.1, 0.37] {
            for q in [0.0, 0.08] {
                let cfg = TeleportConfig {
                    noise: NoiseConfig {
                        depolarizing_p: p,
                        source_delay_mm: 0.0,
                        feedforward_flip_prob: q,
                    },
                    ..Default::default()
                };
                let res = run_teleport_suite(&six_poles(), &cfg).unwrap();
                let expected = 1.0 - p / 2.0 - 2.0 / 3.0 * q * (1.0 - p);
                assert!((res.average_fidelity - expected).abs() < 1e-12, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_and_unbiased() {
        let cfg = TeleportConfig {
            shots: Shots::Sampled(20_000),
            seed: 9,
            ..Default::default()
        };
        let a = run_teleport_suite(&six_poles(), &cfg).unwrap();
        let b = run_teleport_suite(&six_poles(), &cfg).unwrap();
        assert_eq!(a, b);
        for row in &a.ports {
            assert!((row.observed_pct - 25.0).abs() < 5.0 * row.stderr_pct);
        }
    }

    #[test]
    fn classical_strategies_reach_two_thirds() {
        let poles = six_poles();
        let r = classical_baseline(&poles, ClassicalStrategy::RandomBasis, Shots::Exact, 0).unwrap();
        assert!((r.mean_fidelity - 2.0 / 3.0).abs() < 1e-12);
        for b in MeasureBasis::ALL {
            let r = classical_baseline(&poles, ClassicalStrategy::FixedBasis(b), Shots::Exact, 0).unwrap();
            assert!((r.mean_fidelity - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn input_validation() {
        assert!(InputQubit::new(re(1.0), re(1.0)).is_err());
        let json = r#"{"alpha":[0.6,0.0],"beta":[0.0,0.8]}"#;
        let q: InputQubit = serde_json::from_str(json).unwrap();
        assert!((q.beta().im - 0.8).abs() < 1e-15);
        assert!(serde_json::from_str::<InputQubit>(r#"{"alpha":[1,0],"beta":[1,0]}"#).is_err());
    }
}
