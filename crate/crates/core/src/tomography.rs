//! Six-projector qubit tomography with a maximum-likelihood estimator.
//!
//! Bob's OAM qubit is measured on the three mutually unbiased bases
//! `{+l, -l}`, `{D, A}`, `{R, L}`. Counts are simulated with Poisson or
//! per-basis binomial noise (or taken as exact expectations), and the density
//! matrix is reconstructed with the diluted `R rho R` iteration: each step moves
//! along `rho -> (I + e(R - I)) rho (I + e(R - I))` with `e` picked by a line
//! search on the log-likelihood. Every iterate is positive semidefinite with
//! unit trace by construction.
//!
//! With a fixed number of shots per basis the Poisson and multinomial
//! likelihoods differ only by a constant, so one estimator serves both.

use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::ProjectionBasisOam;
use crate::linalg::{hermitian_eigenvalues, outer, re, trace, trace_distance, Mat2, Vec2};
use crate::rng;
use crate::teleport::{run_teleport_suite, InputQubit, TeleportConfig};

/// Log-likelihood gain below which the estimator stops.
pub const LL_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_BOOTSTRAP: usize = 200;

/// Projector order used by [`CountRecord`].
pub const PROJECTORS: [ProjectionBasisOam; 6] = ProjectionBasisOam::ALL;

const TOL: f64 = 1e-9;

/// Validated 2x2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m: Mat2,
}

impl DensityMatrix2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let herm = crate::linalg::hermitian_defect(&m);
        if herm > TOL {
            return Err(Error::invalid("density matrix", format!("not Hermitian (defect {herm:e})")));
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(Error::invalid("density matrix", format!("trace {tr} is not 1")));
        }
        let min_ev = hermitian_eigenvalues(&m)[0];
        if min_ev < -TOL {
            return Err(Error::invalid("density matrix", format!("negative eigenvalue {min_ev:e}")));
        }
        Ok(DensityMatrix2 { m })
    }

    /// Nearest density matrix to a matrix that is PSD up to rounding:
    /// hermitize, clip negative eigenvalues and renormalize.
    pub(crate) fn from_psd_unchecked(m: Mat2) -> Self {
        DensityMatrix2 { m: psd_project(&m) }
    }

    pub fn pure(psi: &Vec2) -> Self {
        let v = psi.normalize();
        DensityMatrix2 { m: outer(&v, &v) }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix2 {
            m: Mat2::identity() * re(0.5),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn trace_distance(&self, other: &DensityMatrix2) -> f64 {
        trace_distance(&self.m, &other.m)
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let ev = hermitian_eigenvalues(&self.m);
        [ev[0], ev[1]]
    }

    /// `Tr(rho |b><b|)` for each of the six projectors.
    pub fn projector_probabilities(&self) -> [f64; 6] {
        PROJECTORS.map(|b| {
            let v = b.vector();
            (v.adjoint() * self.m * v)[(0, 0)].re.clamp(0.0, 1.0)
        })
    }

    pub fn to_json(&self) -> ComplexMatrix {
        ComplexMatrix::from(&self.m)
    }
}

/// Density matrix serialized as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl<const N: usize> From<&nalgebra::SMatrix<crate::linalg::C64, N, N>> for ComplexMatrix {
    fn from(m: &nalgebra::SMatrix<crate::linalg::C64, N, N>) -> Self {
        let part = |f: fn(&crate::linalg::C64) -> f64| (0..N).map(|r| (0..N).map(|c| f(&m[(r, c)])).collect()).collect();
        ComplexMatrix {
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

impl ComplexMatrix {
    pub fn to_mat2(&self) -> Result<Mat2> {
        let ok = |p: &Vec<Vec<f64>>| p.len() == 2 && p.iter().all(|r| r.len() == 2);
        if !ok(&self.re) || !ok(&self.im) {
            return Err(Error::invalid("matrix", "expected 2x2 real and imaginary parts"));
        }
        Ok(Mat2::from_fn(|r, c| crate::linalg::c(self.re[r][c], self.im[r][c])))
    }
}

/// `<psi|rho|psi>` for a normalized `psi`.
pub fn fidelity(rho: &DensityMatrix2, psi: &Vec2) -> f64 {
    let v = psi.normalize();
    let f = (v.adjoint() * rho.matrix() * v)[(0, 0)];
    assert!(f.im.abs() <= 1e-9, "fidelity has imaginary part {}", f.im);
    f.re.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CountModel {
    /// Independent Poisson counts per projector.
    #[default]
    Poisson,
    /// Binomial split of a fixed number of shots in each basis.
    Multinomial,
    /// Noise-free expected counts.
    Exact,
}

/// Observed counts for the six projectors, in [`PROJECTORS`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub counts: [f64; 6],
    pub shots_per_basis: u64,
    pub seed: Option<u64>,
}

pub fn simulate_counts(rho: &DensityMatrix2, shots_per_basis: u64, model: CountModel, seed: u64) -> CountRecord {
    let probs = rho.projector_probabilities();
    let n = shots_per_basis as f64;
    let mut rng = rng::stream(seed, 0);
    let counts = match model {
        CountModel::Exact => probs.map(|p| n * p),
        CountModel::Poisson => probs.map(|p| {
            let mean = n * p;
            if mean <= 0.0 {
                0.0
            } else {
                Poisson::new(mean).expect("positive mean").sample(&mut rng)
            }
        }),
        CountModel::Multinomial => {
            let mut out = [0.0; 6];
            for basis in 0..3 {
                let p = (probs[2 * basis] / (probs[2 * basis] + probs[2 * basis + 1])).clamp(0.0, 1.0);
                let k = Binomial::new(shots_per_basis, p).expect("valid binomial").sample(&mut rng) as f64;
                out[2 * basis] = k;
                out[2 * basis + 1] = n - k;
            }
            out
        }
    };
    CountRecord {
        counts,
        shots_per_basis,
        seed: (model != CountModel::Exact).then_some(seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub rho: DensityMatrix2,
    pub iterations: usize,
    pub log_likelihood: f64,
}

fn projector_matrices() -> [Mat2; 6] {
    PROJECTORS.map(|b| {
        let v = b.vector();
        outer(&v, &v)
    })
}

fn log_likelihood(counts: &[f64; 6], projectors: &[Mat2; 6], rho: &Mat2) -> f64 {
    counts
        .iter()
        .zip(projectors)
        .filter(|(n, _)| **n > 0.0)
        .map(|(n, p)| n * trace(&(rho * p)).re.max(1e-300).ln())
        .sum()
}

fn psd_project(m: &Mat2) -> Mat2 {
    let h = (m + m.adjoint()) * re(0.5);
    let eig = h.symmetric_eigen();
    let mut out = Mat2::zeros();
    for (i, &w) in eig.eigenvalues.iter().enumerate() {
        if w > 0.0 {
            let v = eig.eigenvectors.column(i).into_owned();
            out += outer(&v, &v) * re(w);
        }
    }
    out / trace(&out)
}

/// `(I + e R) rho (I + e R)^dagger`, renormalized. `M` is scaled by `1/(1+e)`
/// first so large steps do not lose precision; `None` when the step
/// annihilates `rho`.
fn dilute(rho: &Mat2, r: &Mat2, eps: f64) -> Option<Mat2> {
    let m = (Mat2::identity() + r * re(eps)) / re(1.0 + eps);
    let out = m * rho * m.adjoint();
    if trace(&out).re <= 1e-14 {
        return None;
    }
    Some(psd_project(&out))
}

/// Maximizes `L(e)` over `e in [0, 1e6]`: a coarse logarithmic scan brackets
/// the best region and a golden-section search refines it.
fn line_search<F: Fn(f64) -> f64>(ll: F) -> (f64, f64) {
    const SCAN: usize = 32;
    let u_max = (1.0f64 + 1e6).ln();
    let at = |u: f64| ll(u.exp() - 1.0);
    let grid: Vec<(f64, f64)> = (0..=SCAN)
        .map(|i| {
            let u = u_max * i as f64 / SCAN as f64;
            (u, at(u))
        })
        .collect();
    let best = grid
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut lo = grid[best.saturating_sub(1)].0;
    let mut hi = grid[(best + 1).min(SCAN)].0;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (at(x1), at(x2));
    for _ in 0..80 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = at(x2);
        }
    }
    let (u, f) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let (u, f) = if f >= grid[best].1 { (u, f) } else { grid[best] };
    (u.exp() - 1.0, f)
}

/// Maximum-likelihood density matrix for a set of six-projector counts.
///
/// Stops once the log-likelihood gain of a step drops below [`LL_TOLERANCE`];
/// after [`MAX_ITERATIONS`] steps returns [`Error::NotConverged`] carrying the
/// last iterate.
pub fn mle_reconstruct(record: &CountRecord) -> Result<MleFit> {
    let counts = &record.counts;
    if counts.iter().any(|n| !n.is_finite() || *n < 0.0) {
        return Err(Error::invalid("counts", "must be finite and non-negative"));
    }
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("counts", "no events recorded"));
    }
    let projectors = projector_matrices();
    let mut rho = Mat2::identity() * re(0.5);
    let mut ll = log_likelihood(counts, &projectors, &rho);
    let mut last_gain = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let mut r = Mat2::zeros();
        for (n, p) in counts.iter().zip(&projectors) {
            if *n > 0.0 {
                let prob = trace(&(rho * p)).re.max(1e-300);
                r += p * re(n / (total * prob));
            }
        }
        let r = r - Mat2::identity();
        let eval = |eps: f64| dilute(&rho, &r, eps).map_or(f64::NEG_INFINITY, |m| log_likelihood(counts, &projectors, &m));
        let (eps, f) = line_search(eval);
        let plain = eval(1.0);
        let (eps, f) = if plain > f { (1.0, plain) } else { (eps, f) };
        last_gain = f - ll;
        if last_gain > 0.0 {
            rho = dilute(&rho, &r, eps).expect("accepted step is finite");
            ll = f;
        }
        if last_gain < LL_TOLERANCE {
            return Ok(MleFit {
                rho: DensityMatrix2::from_psd_unchecked(rho),
                iterations: it,
                log_likelihood: ll,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        last_gain,
        last: Box::new(DensityMatrix2::from_psd_unchecked(rho)),
    })
}

/// Standard deviation of the fidelity over parametric-bootstrap resamples
/// drawn from `rho_hat`.
pub fn bootstrap_fidelity_stderr(
    rho_hat: &DensityMatrix2,
    target: &Vec2,
    shots_per_basis: u64,
    model: CountModel,
    resamples: usize,
    seed: u64,
) -> Result<f64> {
    if resamples < 2 || model == CountModel::Exact {
        return Ok(0.0);
    }
    let fids = (0..resamples)
        .map(|r| {
            let counts = simulate_counts(rho_hat, shots_per_basis, model, rng::child_seed(seed, r as u64));
            let fit = match mle_reconstruct(&counts) {
                Ok(fit) => fit.rho,
                Err(Error::NotConverged { last, .. }) => *last,
                Err(e) => return Err(e),
            };
            Ok(fidelity(&fit, target))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(sample_std(&fids))
}

pub(crate) fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomoSettings {
    pub shots_per_basis: u64,
    pub count_model: CountModel,
    pub bootstrap: usize,
}

impl Default for TomoSettings {
    fn default() -> Self {
        TomoSettings {
            shots_per_basis: 10_000,
            count_model: CountModel::Poisson,
            bootstrap: DEFAULT_BOOTSTRAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoEntry {
    pub state: String,
    pub rho: ComplexMatrix,
    pub fidelity: f64,
    pub stderr: f64,
    pub counts: [f64; 6],
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoReport {
    /// Fidelity of the post-selected source pair with `|phi->`, before teleportation.
    pub source_fidelity: f64,
    pub entries: Vec<TomoEntry>,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub classical_bound: f64,
}

/// Teleports every input, tomographs Bob's corrected qubit and reports the
/// fidelities with the input (mapped `H -> +l`, `V -> -l`).
pub fn tomo_report(inputs: &[(String, InputQubit)], teleport: &TeleportConfig, tomo: &TomoSettings) -> Result<TomoReport> {
    let teleported = run_teleport_suite(inputs, teleport)?;
    let entries = teleported
        .records
        .par_iter()
        .enumerate()
        .map(|(i, rec)| {
            let seed = rng::child_seed(teleport.seed ^ 0x70_6d6f_74, i as u64);
            let truth = rec.output_matrix()?;
            let counts = simulate_counts(&truth, tomo.shots_per_basis, tomo.count_model, seed);
            let fit = mle_reconstruct(&counts)?;
            let target = inputs[i].1.vector();
            let f = fidelity(&fit.rho, &target);
            let stderr = bootstrap_fidelity_stderr(
                &fit.rho,
                &target,
                tomo.shots_per_basis,
                tomo.count_model,
                tomo.bootstrap,
                rng::child_seed(seed, u64::MAX),
            )?;
            Ok(TomoEntry {
                state: rec.label.clone(),
                rho: fit.rho.to_json(),
                fidelity: f,
                stderr,
                counts: counts.counts,
                iterations: fit.iterations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fids: Vec<f64> = entries.iter().map(|e| e.fidelity).collect();
    Ok(TomoReport {
        source_fidelity: teleported.source_fidelity,
        mean_fidelity: fids.iter().sum::<f64>() / fids.len().max(1) as f64,
        std_fidelity: sample_std(&fids),
        entries,
        classical_bound: 2.0 / 3.0,
    })
}
