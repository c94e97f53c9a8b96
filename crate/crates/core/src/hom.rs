//! Two-photon OAM Hong-Ou-Mandel source.
//!
//! A type-II pair `|1;H>|1;V>` is split on a PBS, the V photon is rotated to H,
//! both photons pick up `+ell0` from spiral phase plates and meet on a 50:50
//! beam splitter. The translation stage delays photon `b`; its wavepacket is
//! written as `sqrt(g)|t0> + sqrt(1-g)|t1>` with overlap `g = exp(-(dx/sigma)^2)`,
//! so the `t1` part never interferes and is traced out at detection.
//!
//! Coincidences between the two output ports post-select
//! `|phi-> = (|+l,+l> - |-l,-l>)/sqrt(2)` at zero delay.

use serde::{Deserialize, Serialize};

use crate::elements::{apply_bs, apply_pbs, apply_spp, apply_waveplate, WavePlate};
use crate::error::{Error, Result};
use crate::linalg::{c, outer, re, Mat4, Vec2, Vec4, FRAC_1_SQRT_2};
use crate::state::{ModeLabel, Path, PhotonicState, Polarization};

pub const CRYSTAL: Path = Path("crystal");
pub const SRC_A: Path = Path("src_a");
pub const SRC_B: Path = Path("src_b");
pub const PORT_A: Path = Path("a");
pub const PORT_B: Path = Path("b");

/// Reported HOM dip half width, mm.
pub const REPORTED_HALF_WIDTH_MM: f64 = 0.194;

/// Gaussian temporal-overlap model as a function of stage position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayModel {
    pub sigma_mm: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        DelayModel::with_half_width(REPORTED_HALF_WIDTH_MM)
    }
}

impl DelayModel {
    /// Chooses `sigma` so that the overlap falls to 1/2 at `half_width_mm`.
    pub fn with_half_width(half_width_mm: f64) -> Self {
        DelayModel {
            sigma_mm: half_width_mm / std::f64::consts::LN_2.sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_mm.is_finite() && self.sigma_mm > 0.0) {
            return Err(Error::invalid("delay.sigma_mm", "must be a positive finite length"));
        }
        Ok(())
    }

    pub fn overlap(&self, delta_x_mm: f64) -> f64 {
        (-(delta_x_mm / self.sigma_mm).powi(2)).exp()
    }

    /// Delay at which the overlap is 1/2, i.e. the (D,D) dip half width at half depth.
    pub fn half_width_mm(&self) -> f64 {
        self.sigma_mm * std::f64::consts::LN_2.sqrt()
    }
}

/// OAM projection bases used by the SLM + fiber analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectionBasisOam {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    D,
    A,
    R,
    L,
}

impl ProjectionBasisOam {
    pub const ALL: [ProjectionBasisOam; 6] = [
        ProjectionBasisOam::Plus,
        ProjectionBasisOam::Minus,
        ProjectionBasisOam::D,
        ProjectionBasisOam::A,
        ProjectionBasisOam::R,
        ProjectionBasisOam::L,
    ];

    /// Amplitudes over `(|+ell0>, |-ell0>)`.
    pub fn vector(self) -> Vec2 {
        let k = FRAC_1_SQRT_2;
        match self {
            ProjectionBasisOam::Plus => Vec2::new(re(1.0), re(0.0)),
            ProjectionBasisOam::Minus => Vec2::new(re(0.0), re(1.0)),
            ProjectionBasisOam::D => Vec2::new(re(k), re(k)),
            ProjectionBasisOam::A => Vec2::new(re(k), re(-k)),
            ProjectionBasisOam::R => Vec2::new(re(k), c(0.0, k)),
            ProjectionBasisOam::L => Vec2::new(re(k), c(0.0, -k)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProjectionBasisOam::Plus => "+",
            ProjectionBasisOam::Minus => "-",
            ProjectionBasisOam::D => "D",
            ProjectionBasisOam::A => "A",
            ProjectionBasisOam::R => "R",
            ProjectionBasisOam::L => "L",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.label().eq_ignore_ascii_case(s.trim()))
    }
}

/// `(|+l,+l> - |-l,-l>)/sqrt(2)` over `oam_a (x) oam_b`, index `2*a + b`.
pub fn phi_minus() -> Vec4 {
    Vec4::new(re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(-FRAC_1_SQRT_2))
}

/// Post-selected two-OAM-qubit source state.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePair {
    pub rho: Mat4,
    /// Probability of a coincidence between the two output ports.
    pub coincidence_probability: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub delta_x_mm: f64,
    pub probability: f64,
}

/// HOM pair source with a delay stage and a depolarizing mix on the post-selected pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomSource {
    pub delay: DelayModel,
    pub depolarizing_p: f64,
    pub ell0: i32,
}

impl Default for HomSource {
    fn default() -> Self {
        HomSource {
            delay: DelayModel::default(),
            depolarizing_p: 0.0,
            ell0: 1,
        }
    }
}

/// Delays `path` so that a fraction `overlap` of its wavepacket stays in tag 0.
fn delay_line(s: &PhotonicState, path: Path, overlap: f64) -> PhotonicState {
    let keep = overlap.clamp(0.0, 1.0).sqrt();
    let shift = (1.0 - overlap.clamp(0.0, 1.0)).sqrt();
    s.apply_linear(|m| {
        if m.path != path {
            return vec![(*m, re(1.0))];
        }
        let t = m.wavepacket.0;
        vec![(*m, re(keep)), (m.with_wavepacket(t + 1), re(shift))]
    })
}

impl HomSource {
    pub fn new(delay: DelayModel, depolarizing_p: f64, ell0: i32) -> Result<Self> {
        let src = HomSource {
            delay,
            depolarizing_p,
            ell0,
        };
        src.validate()?;
        Ok(src)
    }

    pub fn validate(&self) -> Result<()> {
        self.delay.validate()?;
        if !(0.0..=1.0).contains(&self.depolarizing_p) {
            return Err(Error::invalid("depolarizing_p", "must lie in [0, 1]"));
        }
        if self.ell0 < 1 {
            return Err(Error::invalid("ell0", "must be at least 1"));
        }
        Ok(())
    }

    /// Two-photon state after the beam splitter, before post-selection.
    pub fn interfere_pair(&self, delta_x_mm: f64) -> PhotonicState {
        let pair = PhotonicState::ket(&[
            ModeLabel::new(CRYSTAL, Polarization::H, 0),
            ModeLabel::new(CRYSTAL, Polarization::V, 0),
        ])
        .expect("two-photon ket");
        let s = apply_pbs(&pair, CRYSTAL, Path("unused"), SRC_A, SRC_B);
        let s = apply_waveplate(&s, SRC_B, WavePlate::Half, 45.0);
        let s = apply_spp(&s, SRC_A, self.ell0);
        let s = apply_spp(&s, SRC_B, self.ell0);
        let s = delay_line(&s, SRC_B, self.delay.overlap(delta_x_mm));
        apply_bs(&s, SRC_A, SRC_B, PORT_A, PORT_B)
    }

    /// Coincidence-post-selected OAM pair with wavepacket tags traced out and the
    /// depolarizing mix applied.
    pub fn entangled_source(&self, delta_x_mm: f64) -> Result<SourcePair> {
        let out = self.interfere_pair(delta_x_mm);
        let ps = out.post_select_coincidence(PORT_A, PORT_B)?;
        let kept = ps.state.ok_or(Error::ZeroNorm)?;
        let pure = reduce_oam_pair(&kept, PORT_A, PORT_B, self.ell0)?;
        let p = self.depolarizing_p;
        let rho = pure * re(1.0 - p) + Mat4::identity() * re(p / 4.0);
        let phi = phi_minus();
        let fidelity = (phi.adjoint() * rho * phi)[(0, 0)].re;
        Ok(SourcePair {
            rho,
            coincidence_probability: ps.probability,
            fidelity,
        })
    }

    /// Probability of a coincidence with port `a` projected on `basis_a` and
    /// port `b` on `basis_b`.
    pub fn coincidence(&self, basis_a: ProjectionBasisOam, basis_b: ProjectionBasisOam, delta_x_mm: f64) -> Result<f64> {
        let pair = self.entangled_source(delta_x_mm)?;
        let proj: Vec4 = crate::linalg::kron_vec(&basis_a.vector(), &basis_b.vector());
        let conditional = (proj.adjoint() * pair.rho * proj)[(0, 0)].re;
        Ok((pair.coincidence_probability * conditional).clamp(0.0, 1.0))
    }

    pub fn coincidence_curve(
        &self,
        basis_a: ProjectionBasisOam,
        basis_b: ProjectionBasisOam,
        positions: &[f64],
    ) -> Result<Vec<CurvePoint>> {
        positions
            .iter()
            .map(|&x| {
                Ok(CurvePoint {
                    delta_x_mm: x,
                    probability: self.coincidence(basis_a, basis_b, x)?,
                })
            })
            .collect()
    }
}

/// Reduces a post-selected two-photon state to the OAM qubits on `path_a` and
/// `path_b`, tracing out polarization and wavepacket tags.
pub fn reduce_oam_pair(s: &PhotonicState, path_a: Path, path_b: Path, ell0: i32) -> Result<Mat4> {
    use std::collections::BTreeMap;
    type Env = (Polarization, u32, Polarization, u32);
    let mut branches: BTreeMap<Env, Vec4> = BTreeMap::new();
    for (k, amp) in s.terms() {
        let pa = k.photons().iter().find(|m| m.path == path_a);
        let pb = k.photons().iter().find(|m| m.path == path_b);
        let (Some(ma), Some(mb)) = (pa, pb) else {
            return Err(Error::PhotonCount {
                expected: 2,
                found: k.photon_number(),
            });
        };
        let qa = ma.oam.qubit_index(ell0).ok_or(Error::OamOutsideQubit {
            path: path_a.to_string(),
            ell: ma.oam.0,
            ell0,
        })?;
        let qb = mb.oam.qubit_index(ell0).ok_or(Error::OamOutsideQubit {
            path: path_b.to_string(),
            ell: mb.oam.0,
            ell0,
        })?;
        let env = (ma.pol, ma.wavepacket.0, mb.pol, mb.wavepacket.0);
        branches.entry(env).or_insert_with(Vec4::zeros)[2 * qa + qb] += amp;
    }
    let rho: Mat4 = branches.values().map(|v| outer(v, v)).sum();
    let tr = crate::linalg::trace(&rho).re;
    Ok(rho / re(tr))
}

/// Evenly spaced stage positions, inclusive of both ends.
pub fn scan_grid(points: usize, min_mm: f64, max_mm: f64) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (min_mm + max_mm)],
        n => (0..n)
            .map(|i| min_mm + (max_mm - min_mm) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 121 points over [-0.6, 0.6] mm.
pub fn default_scan_grid() -> Vec<f64> {
    scan_grid(121, -0.6, 0.6)
}

/// Half width at half depth of a dip, measured on a scanned curve whose edges
/// sit on the baseline. Averages the left and right crossings, with linear
/// interpolation between grid points.
pub fn dip_half_width(curve: &[CurvePoint]) -> Option<f64> {
    if curve.len() < 3 {
        return None;
    }
    let centre = curve
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.delta_x_mm.abs().total_cmp(&b.1.delta_x_mm.abs()))?
        .0;
    let floor = curve[centre].probability;
    let baseline = 0.5 * (curve[0].probability + curve[curve.len() - 1].probability);
    let level = 0.5 * (floor + baseline);
    let crossing = |range: &mut dyn Iterator<Item = usize>, step: isize| -> Option<f64> {
        for i in range {
            let j = (i as isize + step) as usize;
            let (p0, p1) = (&curve[i], &curve[j]);
            if (p0.probability - level) * (p1.probability - level) <= 0.0 && p0.probability != p1.probability {
                let t = (level - p0.probability) / (p1.probability - p0.probability);
                return Some(p0.delta_x_mm + t * (p1.delta_x_mm - p0.delta_x_mm));
            }
        }
        None
    };
    let right = crossing(&mut (centre..curve.len() - 1), 1)?;
    let left = crossing(&mut (1..=centre).rev(), -1)?;
    Some(0.5 * ((right - curve[centre].delta_x_mm).abs() + (curve[centre].delta_x_mm - left).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, phase_free_overlap};
    use ProjectionBasisOam::*;

    #[test]
    fn projection_pairs_are_orthonormal() {
        for (x, y) in [(Plus, Minus), (D, A), (R, L)] {
            assert!((x.vector().norm() - 1.0).abs() < 1e-15);
            assert!(x.vector().dotc(&y.vector()).norm() < 1e-15);
        }
    }

    #[test]
    fn overlap_model() {
        let d = DelayModel::default();
        assert_eq!(d.overlap(0.0), 1.0);
        assert!((d.overlap(d.half_width_mm()) - 0.5).abs() < 1e-12);
        assert!((d.half_width_mm() - REPORTED_HALF_WIDTH_MM).abs() < 1e-12);
        assert!(d.overlap(0.1) > d.overlap(0.2));
        assert!(DelayModel { sigma_mm: 0.0 }.validate().is_err());
    }

    #[test]
    fn zero_delay_source_is_phi_minus() {
        let pair = HomSource::default().entangled_source(0.0).unwrap();
        assert!((pair.fidelity - 1.0).abs() < 1e-12);
        assert!((pair.coincidence_probability - 0.5).abs() < 1e-12);
        let phi = phi_minus();
        assert!(max_abs_diff(&pair.rho, &outer(&phi, &phi)) < 1e-12);
    }

    #[test]
    fn distinguishable_limit_is_classical_mixture() {
        let pair = HomSource::default().entangled_source(50.0).unwrap();
        assert!((pair.fidelity - 0.5).abs() < 1e-12);
        let mut mix = Mat4::zeros();
        mix[(0, 0)] = re(0.5);
        mix[(3, 3)] = re(0.5);
        assert!(max_abs_diff(&pair.rho, &mix) < 1e-12);
    }

    #[test]
    fn depolarizing_mix_of_ten_percent() {
        let src = HomSource::new(DelayModel::default(), 0.10, 1).unwrap();
        let f = src.entangled_source(0.0).unwrap().fidelity;
        assert!((f - 0.925).abs() < 1e-12);
    }

    #[test]
    fn zero_delay_pre_selection_state_matches_expansion() {
        let out = HomSource::default().interfere_pair(0.0);
        let m = |p: Path, l: i32| ModeLabel::new(p, Polarization::H, l);
        let expected = PhotonicState::from_terms([
            (vec![m(PORT_A, 1), m(PORT_A, -1)], re(-0.5)),
            (vec![m(PORT_B, 1), m(PORT_B, -1)], re(0.5)),
            (vec![m(PORT_A, 1), m(PORT_B, 1)], re(0.5)),
            (vec![m(PORT_A, -1), m(PORT_B, -1)], re(-0.5)),
        ])
        .unwrap();
        assert!(out.approx_eq_up_to_phase(&expected, 1e-12));
    }

    #[test]
    fn dd_dip_and_da_peak() {
        let src = HomSource::default();
        assert!(src.coincidence(D, D, 0.0).unwrap().abs() < 1e-15);
        let base = src.coincidence(D, D, 10.0).unwrap();
        assert!((base - 0.125).abs() < 1e-12);
        let peak = src.coincidence(D, A, 0.0).unwrap();
        assert!((peak - 2.0 * base).abs() < 1e-12);
        let half = src.coincidence(D, D, src.delay.half_width_mm()).unwrap();
        assert!((half - 0.5 * base).abs() < 1e-12);
    }

    #[test]
    fn grid_and_half_width() {
        let grid = default_scan_grid();
        assert_eq!(grid.len(), 121);
        assert!((grid[1] - grid[0] - 0.01).abs() < 1e-12);
        let src = HomSource::default();
        let curve = src.coincidence_curve(D, D, &grid).unwrap();
        let hw = dip_half_width(&curve).unwrap();
        assert!((hw - 0.194).abs() < 0.01, "{hw}");
    }

    #[test]
    fn rho_is_phase_consistent_with_phi_minus() {
        let pair = HomSource::default().entangled_source(0.0).unwrap();
        let ev = crate::linalg::hermitian_eigenvalues(&pair.rho);
        assert!((ev[3] - 1.0).abs() < 1e-12);
        let v = pair.rho.column(0).into_owned() * re(2.0f64.sqrt());
        assert!(phase_free_overlap(&v, &phi_minus()) > 1.0 - 1e-12);
    }
}
