//! Complete single-photon polarization-OAM Bell-state measurement.
//!
//! The four hybrid Bell states of one photon,
//!
//! ```text
//! omega+- = (|H,+l> +- |V,-l>)/sqrt(2)
//! xi+-    = (|H,-l> +- |V,+l>)/sqrt(2)
//! ```
//!
//! are separated into four detectors by a four-stage network:
//!
//! 1. a PBS-headed Mach-Zehnder whose V arm has one more reflection (so V's OAM
//!    is flipped relative to H) and a quarter-turn path phase, followed by a
//!    QWP at 45 degrees. This maps omega+ -> |H,+l>, omega- -> |V,+l>,
//!    xi+ -> |H,-l>, xi- -> |V,-l>, each up to a phase;
//! 2. a PBS splitting H from V;
//! 3. an OAM sorter on each PBS output;
//! 4. spiral phase plates flattening every output to `l = 0` for fiber coupling.
//!
//! [`BsmNetwork`] runs this element by element on a [`PhotonicState`] and also
//! carries the equivalent closed-form 4x4 matrix; the two are cross-checked in tests.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::elements::{smf_project, Element, Network, WavePlate};
use crate::error::{Error, Result};
use crate::linalg::{c, re, Mat4, Vec4, C64, FRAC_1_SQRT_2};
use crate::rng::{self, Rng};
use crate::state::{ModeLabel, Oam, Path, PhotonicState, Polarization, NORM_TOL};

pub const BSM_IN: Path = Path("bsm_in");
const MZ_H: Path = Path("mz_h");
const MZ_V: Path = Path("mz_v");
const MZ_OUT: Path = Path("mz_out");
const MZ_DUMP: Path = Path("mz_dump");
const UNUSED: Path = Path("unused");
const SPLIT_T: Path = Path("split_t");
const SPLIT_R: Path = Path("split_r");

/// Detector fibers, in the order of the Bell state that lands on each.
pub const DETECTORS: [Path; 4] = [Path("det_t+"), Path("det_r-"), Path("det_t-"), Path("det_r+")];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    OmegaPlus,
    OmegaMinus,
    XiPlus,
    XiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::OmegaPlus,
        BellState::OmegaMinus,
        BellState::XiPlus,
        BellState::XiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::OmegaPlus => "omega+",
            BellState::OmegaMinus => "omega-",
            BellState::XiPlus => "xi+",
            BellState::XiMinus => "xi-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Port {
    A,
    B,
    C,
    D,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::A, Port::B, Port::C, Port::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }
}

/// Bijection from Bell state to detector port label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[Port; 4]", into = "[Port; 4]")]
pub struct PortMap([Port; 4]);

impl Default for PortMap {
    fn default() -> Self {
        PortMap([Port::A, Port::B, Port::C, Port::D])
    }
}

impl TryFrom<[Port; 4]> for PortMap {
    type Error = Error;

    fn try_from(ports: [Port; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for p in ports {
            if std::mem::replace(&mut seen[p.index()], true) {
                return Err(Error::invalid("port_map", format!("port {p:?} assigned twice")));
            }
        }
        Ok(PortMap(ports))
    }
}

impl From<PortMap> for [Port; 4] {
    fn from(m: PortMap) -> Self {
        m.0
    }
}

impl PortMap {
    pub fn port(&self, state: BellState) -> Port {
        self.0[state.index()]
    }

    pub fn state(&self, port: Port) -> BellState {
        BellState::from_index(self.0.iter().position(|&p| p == port).expect("bijection"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellOutcome {
    pub state: BellState,
    pub port: Port,
}

/// One photon's polarization (x) OAM qubit pair, index `2*pol + oam` with `H`
/// and `+ell0` as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePhotonTwoDof {
    vec: Vec4,
}

impl SinglePhotonTwoDof {
    pub fn new(vec: Vec4) -> Result<Self> {
        let n2 = vec.norm_squared();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid("two-dof state", format!("norm^2 = {n2} is not 1")));
        }
        Ok(SinglePhotonTwoDof { vec })
    }

    pub fn basis(pol: Polarization, oam_index: usize) -> Self {
        let mut vec = Vec4::zeros();
        vec[2 * pol.index() + oam_index] = re(1.0);
        SinglePhotonTwoDof { vec }
    }

    pub fn vector(&self) -> &Vec4 {
        &self.vec
    }

    pub fn to_photonic(&self, path: Path, ell0: i32) -> PhotonicState {
        let terms = (0..4).map(|i| {
            let m = ModeLabel::new(path, Polarization::from_index(i / 2), 0).with_oam(Oam::from_qubit_index(i % 2, ell0));
            (vec![m], self.vec[i])
        });
        PhotonicState::from_terms(terms).expect("unit-norm input")
    }

    /// Reads back the amplitudes of a single photon on `path`.
    pub fn from_photonic(s: &PhotonicState, path: Path, ell0: i32) -> Result<Self> {
        if s.photon_number() != 1 {
            return Err(Error::PhotonCount {
                expected: 1,
                found: s.photon_number(),
            });
        }
        let mut vec = Vec4::zeros();
        for (k, a) in s.terms() {
            let m = k.photons()[0];
            if m.path != path {
                return Err(Error::invalid("state", format!("amplitude on unexpected path {}", m.path)));
            }
            let q = m.oam.qubit_index(ell0).ok_or(Error::OamOutsideQubit {
                path: path.to_string(),
                ell: m.oam.0,
                ell0,
            })?;
            vec[2 * m.pol.index() + q] += a;
        }
        Self::new(vec)
    }
}

pub fn bell_vector(which: BellState) -> Vec4 {
    let k = FRAC_1_SQRT_2;
    // index 2*pol + oam: H+ = 0, H- = 1, V+ = 2, V- = 3
    match which {
        BellState::OmegaPlus => Vec4::new(re(k), re(0.0), re(0.0), re(k)),
        BellState::OmegaMinus => Vec4::new(re(k), re(0.0), re(0.0), re(-k)),
        BellState::XiPlus => Vec4::new(re(0.0), re(k), re(k), re(0.0)),
        BellState::XiMinus => Vec4::new(re(0.0), re(k), re(-k), re(0.0)),
    }
}

pub fn bell_state(which: BellState) -> SinglePhotonTwoDof {
    SinglePhotonTwoDof { vec: bell_vector(which) }
}

/// Probability per port, indexed by [`Port::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortDistribution(pub [f64; 4]);

impl PortDistribution {
    pub fn get(&self, port: Port) -> f64 {
        self.0[port.index()]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn sample(&self, rng: &mut Rng) -> Port {
        let u: f64 = rng.random::<f64>() * self.total();
        let mut acc = 0.0;
        for (i, p) in self.0.iter().enumerate() {
            acc += p;
            if u < acc {
                return Port::from_index(i);
            }
        }
        // u landed in the rounding gap at the top; pick the last port with mass
        Port::from_index(self.0.iter().rposition(|&p| p > 0.0).unwrap_or(3))
    }
}

/// Phase picked up by each Bell state on its way to its detector.
const DETECTOR_PHASES: [(f64, f64); 4] = [
    (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
];

#[derive(Debug, Clone)]
pub struct BsmNetwork {
    pub ell0: i32,
    pub port_map: PortMap,
    step1: Network,
    sorter: Network,
}

impl Default for BsmNetwork {
    fn default() -> Self {
        BsmNetwork::new(1, PortMap::default())
    }
}

impl BsmNetwork {
    pub fn new(ell0: i32, port_map: PortMap) -> Self {
        let step1 = Network::new()
            .push(Element::PolarizingBeamSplitter {
                inputs: [BSM_IN, UNUSED],
                outputs: [MZ_H, MZ_V],
                flips_oam: true,
            })
            .push(Element::Mirror { path: MZ_H, flips_oam: true })
            .push(Element::Mirror { path: MZ_H, flips_oam: true })
            .push(Element::Mirror { path: MZ_V, flips_oam: true })
            .push(Element::PhaseShift {
                path: MZ_V,
                radians: -std::f64::consts::FRAC_PI_2,
            })
            .push(Element::PolarizingBeamSplitter {
                inputs: [MZ_H, MZ_V],
                outputs: [MZ_OUT, MZ_DUMP],
                flips_oam: true,
            })
            .push(Element::WavePlate {
                path: MZ_OUT,
                kind: WavePlate::Quarter,
                angle_deg: 45.0,
            });
        let [t_plus, r_minus, t_minus, r_plus] = DETECTORS;
        let sorter = Network::new()
            .push(Element::PolarizingBeamSplitter {
                inputs: [MZ_OUT, UNUSED],
                outputs: [SPLIT_T, SPLIT_R],
                flips_oam: true,
            })
            .push(Element::OamSorter {
                input: SPLIT_T,
                plus: t_plus,
                minus: t_minus,
                ell0,
            })
            .push(Element::OamSorter {
                input: SPLIT_R,
                plus: r_plus,
                minus: r_minus,
                ell0,
            })
            .push(Element::SpiralPhasePlate { path: t_plus, charge: -ell0 })
            .push(Element::SpiralPhasePlate { path: r_plus, charge: -ell0 })
            .push(Element::SpiralPhasePlate { path: t_minus, charge: ell0 })
            .push(Element::SpiralPhasePlate { path: r_minus, charge: ell0 });
        BsmNetwork {
            ell0,
            port_map,
            step1,
            sorter,
        }
    }

    /// Step 1, simulated element by element.
    pub fn disentangle_stage(&self, s: &SinglePhotonTwoDof) -> Result<SinglePhotonTwoDof> {
        let out = self.step1.apply(&s.to_photonic(BSM_IN, self.ell0))?;
        SinglePhotonTwoDof::from_photonic(&out, MZ_OUT, self.ell0)
    }

    /// Closed form of step 1 in the `(H+, H-, V+, V-)` basis.
    pub fn disentangle_matrix() -> Mat4 {
        // V arm: OAM flip and phase -i; then QWP(45) = [[1-i, 1+i], [1+i, 1-i]]/2 on polarization.
        let (a, b) = (c(0.5, -0.5), c(0.5, 0.5));
        let zero = re(0.0);
        #[rustfmt::skip]
        let mz = Mat4::new(
            re(1.0), zero, zero, zero,
            zero, re(1.0), zero, zero,
            zero, zero, zero, c(0.0, -1.0),
            zero, zero, c(0.0, -1.0), zero,
        );
        #[rustfmt::skip]
        let qwp = Mat4::new(
            a, zero, b, zero,
            zero, a, zero, b,
            b, zero, a, zero,
            zero, b, zero, a,
        );
        qwp * mz
    }

    /// Full network, returning the fiber-coupled amplitude at each detector in
    /// [`DETECTORS`] order.
    pub fn network_amplitudes(&self, s: &SinglePhotonTwoDof) -> Result<[C64; 4]> {
        let out = self.step1.apply(&s.to_photonic(BSM_IN, self.ell0))?;
        let out = self.sorter.apply(&out)?;
        let mut amps = [re(0.0); 4];
        for (i, det) in DETECTORS.iter().enumerate() {
            let on_det: Vec<(ModeLabel, C64)> = out
                .terms()
                .filter(|(k, _)| k.photons()[0].path == *det)
                .map(|(k, a)| (k.photons()[0], *a))
                .collect();
            if on_det.is_empty() {
                continue;
            }
            let fiber = smf_project(&out, *det);
            let leaked = on_det.iter().any(|(m, _)| m.oam.0 != 0);
            if leaked || fiber.probability < 1.0 - NORM_TOL || on_det.len() != 1 {
                return Err(Error::invalid(
                    "bsm network",
                    format!("detector {det} did not receive a single fiber-coupled mode"),
                ));
            }
            amps[i] = on_det[0].1;
        }
        Ok(amps)
    }

    /// Closed-form detector amplitudes: `phase_k <bell_k|s>`.
    pub fn closed_form_amplitudes(s: &SinglePhotonTwoDof) -> [C64; 4] {
        std::array::from_fn(|k| {
            let (re_, im_) = DETECTOR_PHASES[k];
            c(re_, im_) * bell_vector(BellState::from_index(k)).dotc(s.vector())
        })
    }

    fn by_port(&self, per_bell: [f64; 4]) -> PortDistribution {
        let mut out = [0.0; 4];
        for (k, p) in per_bell.into_iter().enumerate() {
            out[self.port_map.port(BellState::from_index(k)).index()] = p;
        }
        PortDistribution(out)
    }

    /// Port probabilities for a pure input, from the element-level network.
    pub fn sort(&self, s: &SinglePhotonTwoDof) -> Result<PortDistribution> {
        let amps = self.network_amplitudes(s)?;
        Ok(self.by_port(amps.map(|a| a.norm_sqr())))
    }

    /// Port probabilities for a mixed input: the network is run on each
    /// eigenvector and the results are weighted by the eigenvalues.
    pub fn sort_density(&self, rho: &Mat4) -> Result<PortDistribution> {
        let h = (rho + rho.adjoint()) * re(0.5);
        let eig = h.symmetric_eigen();
        let mut per_bell = [0.0; 4];
        for (i, &w) in eig.eigenvalues.iter().enumerate() {
            if w.abs() < 1e-15 {
                continue;
            }
            let v: Vec4 = eig.eigenvectors.column(i).into_owned();
            let amps = self.network_amplitudes(&SinglePhotonTwoDof::new(v.normalize())?)?;
            for k in 0..4 {
                per_bell[k] += w * amps[k].norm_sqr();
            }
        }
        Ok(self.by_port(per_bell.map(|p| p.max(0.0))))
    }

    pub fn measure(&self, s: &SinglePhotonTwoDof, seed: u64) -> Result<BellOutcome> {
        self.measure_with(s, &mut rng::stream(seed, 0))
    }

    pub fn measure_with(&self, s: &SinglePhotonTwoDof, rng: &mut Rng) -> Result<BellOutcome> {
        let port = self.sort(s)?.sample(rng);
        Ok(BellOutcome {
            state: self.port_map.state(port),
            port,
        })
    }

    /// `M[i][j]` = probability that Bell input `i` lands on port `j`.
    pub fn verification_matrix(&self) -> Result<[[f64; 4]; 4]> {
        let mut m = [[0.0; 4]; 4];
        for b in BellState::ALL {
            m[b.index()] = self.sort(&bell_state(b))?.0;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, phase_free_overlap};
    use Polarization::{H, V};

    #[test]
    fn bell_vectors_match_definitions() {
        let op = bell_vector(BellState::OmegaPlus);
        assert!((op[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (op[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        let xm = bell_vector(BellState::XiMinus);
        assert!((xm[1].re - FRAC_1_SQRT_2).abs() < 1e-15 && (xm[2].re + FRAC_1_SQRT_2).abs() < 1e-15);
        for a in BellState::ALL {
            for b in BellState::ALL {
                let ip = bell_vector(a).dotc(&bell_vector(b)).norm();
                assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn step1_separates_bell_states() {
        let net = BsmNetwork::default();
        let targets = [(H, 0), (V, 0), (H, 1), (V, 1)];
        for (b, (pol, q)) in BellState::ALL.into_iter().zip(targets) {
            let out = net.disentangle_stage(&bell_state(b)).unwrap();
            let target = SinglePhotonTwoDof::basis(pol, q);
            assert!(phase_free_overlap(out.vector(), target.vector()) > 1.0 - 1e-12, "{b:?}");
        }
    }

    #[test]
    fn step1_matches_closed_form() {
        let net = BsmNetwork::default();
        let m = BsmNetwork::disentangle_matrix();
        for i in 0..4 {
            let e = SinglePhotonTwoDof::basis(Polarization::from_index(i / 2), i % 2);
            let sim = net.disentangle_stage(&e).unwrap();
            let col: Vec4 = m.column(i).into_owned();
            assert!(max_abs_diff(sim.vector(), &col) < 1e-12, "column {i}");
        }
        assert!(max_abs_diff(&(m.adjoint() * m), &Mat4::identity()) < 1e-12);
    }

    #[test]
    fn each_bell_state_hits_its_own_port() {
        let net = BsmNetwork::default();
        let m = net.verification_matrix().unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                assert!((p - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_input_splits_over_two_ports() {
        let net = BsmNetwork::default();
        let d = net.sort(&SinglePhotonTwoDof::basis(H, 0)).unwrap();
        assert!((d.get(Port::A) - 0.5).abs() < 1e-12);
        assert!((d.get(Port::B) - 0.5).abs() < 1e-12);
        assert!(d.get(Port::C).abs() < 1e-12 && d.get(Port::D).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_input_is_uniform() {
        let net = BsmNetwork::default();
        let d = net.sort_density(&(Mat4::identity() * re(0.25))).unwrap();
        for p in d.0 {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn measure_is_deterministic_on_bell_inputs() {
        let net = BsmNetwork::default();
        for seed in 0..20 {
            let o = net.measure(&bell_state(BellState::OmegaMinus), seed).unwrap();
            assert_eq!(o.port, Port::B);
            assert_eq!(o.state, BellState::OmegaMinus);
        }
    }

    #[test]
    fn custom_port_map() {
        let map = PortMap::try_from([Port::D, Port::C, Port::B, Port::A]).unwrap();
        let net = BsmNetwork::new(1, map);
        let o = net.measure(&bell_state(BellState::OmegaPlus), 1).unwrap();
        assert_eq!(o.port, Port::D);
        assert_eq!(map.state(Port::D), BellState::OmegaPlus);
        assert!(PortMap::try_from([Port::A, Port::A, Port::B, Port::C]).is_err());
    }

    #[test]
    fn higher_charge_network() {
        let net = BsmNetwork::new(3, PortMap::default());
        let m = net.verification_matrix().unwrap();
        assert!((m[3][3] - 1.0).abs() < 1e-12);
    }
}
