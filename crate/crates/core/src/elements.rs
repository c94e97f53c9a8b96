//! Optical elements acting on [`PhotonicState`]s.
//!
//! Conventions:
//! * 50:50 beam splitter: `t = 1/sqrt(2)` from both sides, `r = +1/sqrt(2)` from
//!   the first input and `r = -1/sqrt(2)` from the second. With this choice the
//!   anti-bunched output of `|1;+l>|1;+l>` is exactly `(|+l,+l> - |-l,-l>)/sqrt(2)`.
//! * Reflections (beam splitter, PBS, mirror) negate the OAM charge when
//!   `flips_oam` is set, which is the default.
//! * PBS transmits H and reflects V with reflection phase `+1`.
//! * `HWP(t) = R(t) diag(1,-1) R(-t)`, `QWP(t) = R(t) diag(1,-i) R(-t)`, angles in degrees.

use crate::error::{Error, Result};
use crate::linalg::{c, re, Mat2, C64, FRAC_1_SQRT_2};
use crate::state::{ModeLabel, Oam, Path, PhotonicState, Polarization, PostSelection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavePlate {
    Half,
    Quarter,
}

/// One element of a linear-optical network.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    BeamSplitter {
        inputs: [Path; 2],
        outputs: [Path; 2],
        flips_oam: bool,
    },
    PolarizingBeamSplitter {
        inputs: [Path; 2],
        outputs: [Path; 2],
        flips_oam: bool,
    },
    WavePlate {
        path: Path,
        kind: WavePlate,
        angle_deg: f64,
    },
    SpiralPhasePlate {
        path: Path,
        charge: i32,
    },
    Mirror {
        path: Path,
        flips_oam: bool,
    },
    /// Ideal `+-ell0` sorter, routing `+ell0` to `plus` and `-ell0` to `minus`.
    OamSorter {
        input: Path,
        plus: Path,
        minus: Path,
        ell0: i32,
    },
    /// Path-length phase `exp(i phase)` on every mode of `path`.
    PhaseShift {
        path: Path,
        radians: f64,
    },
}

impl Element {
    pub fn apply(&self, s: &PhotonicState) -> Result<PhotonicState> {
        match *self {
            Element::BeamSplitter {
                inputs,
                outputs,
                flips_oam,
            } => Ok(beam_splitter(s, inputs, outputs, flips_oam)),
            Element::PolarizingBeamSplitter {
                inputs,
                outputs,
                flips_oam,
            } => Ok(polarizing_beam_splitter(s, inputs, outputs, flips_oam)),
            Element::WavePlate { path, kind, angle_deg } => Ok(apply_waveplate(s, path, kind, angle_deg)),
            Element::SpiralPhasePlate { path, charge } => Ok(apply_spp(s, path, charge)),
            Element::Mirror { path, flips_oam } => Ok(mirror(s, path, flips_oam)),
            Element::OamSorter {
                input,
                plus,
                minus,
                ell0,
            } => apply_oam_sorter(s, input, plus, minus, ell0),
            Element::PhaseShift { path, radians } => Ok(apply_phase(s, path, radians)),
        }
    }
}

/// Ordered sequence of elements.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    pub elements: Vec<Element>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, e: Element) -> Self {
        self.elements.push(e);
        self
    }

    pub fn apply(&self, s: &PhotonicState) -> Result<PhotonicState> {
        self.elements.iter().try_fold(s.clone(), |acc, e| e.apply(&acc))
    }
}

fn identity(m: &ModeLabel) -> Vec<(ModeLabel, C64)> {
    vec![(*m, c(1.0, 0.0))]
}

fn reflect(m: &ModeLabel, to: Path, flips_oam: bool) -> ModeLabel {
    let m = m.with_path(to);
    if flips_oam {
        m.with_oam(m.oam.flipped())
    } else {
        m
    }
}

fn beam_splitter(s: &PhotonicState, [in1, in2]: [Path; 2], [out1, out2]: [Path; 2], flips_oam: bool) -> PhotonicState {
    let k = FRAC_1_SQRT_2;
    s.apply_linear(|m| {
        if m.path == in1 {
            vec![(m.with_path(out1), re(k)), (reflect(m, out2, flips_oam), re(k))]
        } else if m.path == in2 {
            vec![(reflect(m, out1, flips_oam), re(-k)), (m.with_path(out2), re(k))]
        } else {
            identity(m)
        }
    })
}

/// 50:50 beam splitter with OAM flip on reflection.
pub fn apply_bs(s: &PhotonicState, in1: Path, in2: Path, out1: Path, out2: Path) -> PhotonicState {
    beam_splitter(s, [in1, in2], [out1, out2], true)
}

fn polarizing_beam_splitter(
    s: &PhotonicState,
    [in1, in2]: [Path; 2],
    [out1, out2]: [Path; 2],
    flips_oam: bool,
) -> PhotonicState {
    s.apply_linear(|m| {
        let (transmit, reflected) = if m.path == in1 {
            (out1, out2)
        } else if m.path == in2 {
            (out2, out1)
        } else {
            return identity(m);
        };
        match m.pol {
            Polarization::H => vec![(m.with_path(transmit), re(1.0))],
            Polarization::V => vec![(reflect(m, reflected, flips_oam), re(1.0))],
        }
    })
}

/// PBS: H transmitted (`in1 -> out1`), V reflected (`in1 -> out2`) with OAM flipped.
pub fn apply_pbs(s: &PhotonicState, in1: Path, in2: Path, out1: Path, out2: Path) -> PhotonicState {
    polarizing_beam_splitter(s, [in1, in2], [out1, out2], true)
}

/// Jones matrix in the `(H, V)` basis.
pub fn jones(kind: WavePlate, angle_deg: f64) -> Mat2 {
    let theta = angle_deg.rem_euclid(180.0).to_radians();
    let (s, co) = theta.sin_cos();
    let rot = Mat2::new(re(co), re(-s), re(s), re(co));
    let retarder = match kind {
        WavePlate::Half => Mat2::new(re(1.0), re(0.0), re(0.0), re(-1.0)),
        WavePlate::Quarter => Mat2::new(re(1.0), re(0.0), re(0.0), c(0.0, -1.0)),
    };
    rot * retarder * rot.transpose()
}

pub fn apply_jones(s: &PhotonicState, path: Path, u: &Mat2) -> PhotonicState {
    s.apply_linear(|m| {
        if m.path != path {
            return identity(m);
        }
        let col = m.pol.index();
        [Polarization::H, Polarization::V]
            .into_iter()
            .map(|p| (m.with_pol(p), u[(p.index(), col)]))
            .filter(|(_, a)| a.norm() > 0.0)
            .collect()
    })
}

pub fn apply_waveplate(s: &PhotonicState, path: Path, kind: WavePlate, angle_deg: f64) -> PhotonicState {
    apply_jones(s, path, &jones(kind, angle_deg))
}

/// Spiral phase plate: adds `charge` to the OAM of every mode on `path`.
pub fn apply_spp(s: &PhotonicState, path: Path, charge: i32) -> PhotonicState {
    s.apply_linear(|m| {
        if m.path == path {
            vec![(m.with_oam(Oam(m.oam.0 + charge)), re(1.0))]
        } else {
            identity(m)
        }
    })
}

fn mirror(s: &PhotonicState, path: Path, flips_oam: bool) -> PhotonicState {
    s.apply_linear(|m| {
        if m.path == path {
            vec![(reflect(m, path, flips_oam), re(1.0))]
        } else {
            identity(m)
        }
    })
}

/// Mirror: negates OAM on `path`.
pub fn apply_mirror(s: &PhotonicState, path: Path) -> PhotonicState {
    mirror(s, path, true)
}

pub fn apply_phase(s: &PhotonicState, path: Path, radians: f64) -> PhotonicState {
    let ph = C64::from_polar(1.0, radians);
    s.apply_linear(|m| {
        if m.path == path {
            vec![(*m, ph)]
        } else {
            identity(m)
        }
    })
}

pub fn apply_oam_sorter(s: &PhotonicState, input: Path, plus: Path, minus: Path, ell0: i32) -> Result<PhotonicState> {
    for (k, _) in s.terms() {
        if let Some(bad) = k
            .photons()
            .iter()
            .find(|m| m.path == input && m.oam.qubit_index(ell0).is_none())
        {
            return Err(Error::OamOutsideQubit {
                path: input.to_string(),
                ell: bad.oam.0,
                ell0,
            });
        }
    }
    Ok(s.apply_linear(|m| {
        if m.path != input {
            return identity(m);
        }
        let to = if m.oam.0 == ell0 { plus } else { minus };
        vec![(m.with_path(to), re(1.0))]
    }))
}

/// Single-mode-fiber coupling: keeps terms whose photons on `path` are all in
/// the Gaussian `l = 0` mode.
pub fn smf_project(s: &PhotonicState, path: Path) -> PostSelection {
    s.project(|k| k.photons().iter().all(|m| m.path != path || m.oam.0 == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, Mat2};
    use Polarization::{H, V};

    const A: Path = Path("a");
    const B: Path = Path("b");
    const T: Path = Path("t");
    const R: Path = Path("r");

    fn single(path: Path, pol: Polarization, ell: i32) -> PhotonicState {
        PhotonicState::single(ModeLabel::new(path, pol, ell))
    }

    fn pol_state(path: Path, h: C64, v: C64) -> PhotonicState {
        PhotonicState::from_terms([
            (vec![ModeLabel::new(path, H, 0)], h),
            (vec![ModeLabel::new(path, V, 0)], v),
        ])
        .unwrap()
    }

    #[test]
    fn pbs_transmits_h() {
        let out = apply_pbs(&single(A, H, 1), A, B, T, R);
        assert!(out.approx_eq_up_to_phase(&single(T, H, 1), 1e-12));
    }

    #[test]
    fn pbs_reflects_v_with_oam_flip() {
        let out = apply_pbs(&single(A, V, 1), A, B, T, R);
        assert!(out.approx_eq_up_to_phase(&single(R, V, -1), 1e-12));
    }

    #[test]
    fn pbs_on_diagonal_makes_path_entangled_state() {
        let s = pol_state(A, re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2));
        let out = apply_pbs(&s, A, B, T, R);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(out.paths().len(), 2);
    }

    #[test]
    fn hwp_22_5_rotates_h_to_d() {
        let out = apply_waveplate(&single(A, H, 0), A, WavePlate::Half, 22.5);
        let d = pol_state(A, re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2));
        assert!((out.inner(&d).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hwp_0_on_v_gives_minus_v() {
        let out = apply_waveplate(&single(A, V, 0), A, WavePlate::Half, 0.0);
        assert!((out.amplitude(&[ModeLabel::new(A, V, 0)]) - re(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn qwp_45_on_h_gives_right_circular() {
        let out = apply_waveplate(&single(A, H, 0), A, WavePlate::Quarter, 45.0);
        let r = pol_state(A, re(FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2));
        assert!(out.approx_eq_up_to_phase(&r, 1e-12));
    }

    #[test]
    fn hwp_squared_is_identity_up_to_phase() {
        for angle in [0.0, 22.5, 45.0, 67.5] {
            let u = jones(WavePlate::Half, angle);
            assert!(max_abs_diff(&(u * u), &Mat2::identity()) < 1e-12, "angle {angle}");
        }
    }

    #[test]
    fn angles_reduce_mod_180() {
        assert!(max_abs_diff(&jones(WavePlate::Quarter, 200.0), &jones(WavePlate::Quarter, 20.0)) < 1e-12);
        assert!(max_abs_diff(&jones(WavePlate::Half, -22.5), &jones(WavePlate::Half, 157.5)) < 1e-12);
    }

    #[test]
    fn spp_shifts_charge_and_inverts() {
        assert!(apply_spp(&single(A, H, 0), A, 1).approx_eq_up_to_phase(&single(A, H, 1), 1e-12));
        assert!(apply_spp(&single(A, H, 1), A, -1).approx_eq_up_to_phase(&single(A, H, 0), 1e-12));
        let s = pol_state(A, re(0.6), c(0.0, 0.8));
        assert_eq!(apply_spp(&apply_spp(&s, A, 1), A, -1), s);
    }

    #[test]
    fn mirror_flips_and_is_involution() {
        assert!(apply_mirror(&single(A, H, 1), A).approx_eq_up_to_phase(&single(A, H, -1), 1e-12));
        assert!(apply_mirror(&single(A, H, -1), A).approx_eq_up_to_phase(&single(A, H, 1), 1e-12));
        let s = single(A, V, 3);
        assert_eq!(apply_mirror(&apply_mirror(&s, A), A), s);
    }

    #[test]
    fn sorter_routes_by_charge() {
        let out = apply_oam_sorter(&single(A, H, 1), A, T, R, 1).unwrap();
        assert!(out.approx_eq_up_to_phase(&single(T, H, 1), 1e-12));
        let out = apply_oam_sorter(&single(A, H, -1), A, T, R, 1).unwrap();
        assert!(out.approx_eq_up_to_phase(&single(R, H, -1), 1e-12));
        let sup = PhotonicState::from_terms([
            (vec![ModeLabel::new(A, H, 1)], re(1.0)),
            (vec![ModeLabel::new(A, H, -1)], re(1.0)),
        ])
        .unwrap();
        let out = apply_oam_sorter(&sup, A, T, R, 1).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((out.amplitude(&[ModeLabel::new(T, H, 1)]).norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sorter_rejects_foreign_charge() {
        assert!(matches!(
            apply_oam_sorter(&single(A, H, 2), A, T, R, 1),
            Err(Error::OamOutsideQubit { ell: 2, .. })
        ));
    }

    #[test]
    fn smf_projection() {
        assert_eq!(smf_project(&single(A, H, 0), A).probability, 1.0);
        let p = smf_project(&single(A, H, 1), A);
        assert_eq!(p.probability, 0.0);
        assert!(p.state.is_none());
        let flat = apply_spp(&single(A, H, 1), A, -1);
        assert!((smf_project(&flat, A).probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sorter_then_flatten_is_deterministic() {
        for (ell, port, charge) in [(1, T, -1), (-1, R, 1)] {
            let s = apply_oam_sorter(&single(A, H, ell), A, T, R, 1).unwrap();
            let s = apply_spp(&s, port, charge);
            let p = smf_project(&s, port);
            assert!((p.probability - 1.0).abs() < 1e-12);
        }
    }
}
