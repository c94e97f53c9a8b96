//! Sparse second-quantized photonic states.
//!
//! A [`PhotonicState`] is a superposition over occupation configurations
//! ([`FockBasisState`]) of bosonic modes ([`ModeLabel`]). Amplitudes are stored
//! for *normalized* occupation kets: `|2;m>` has unit norm, and the `sqrt(n!)`
//! factors produced by creation operators are applied inside
//! [`PhotonicState::apply_linear`]. Under this convention a 50:50 beam splitter
//! acting on `|1;H>_a |1;H>_b` yields bunched amplitudes of magnitude `1/sqrt(2)`.
//!
//! At most two photons are supported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, C64, Vec8};

/// Amplitudes with modulus below this are dropped.
pub const AMPLITUDE_EPS: f64 = 1e-12;
/// Tolerance on unit norm.
pub const NORM_TOL: f64 = 1e-9;
pub const MAX_PHOTONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }
}

/// Spatial path identifier (a beam-splitter port, an interferometer arm, a detector).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub &'static str);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// OAM topological charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Oam(pub i32);

impl Oam {
    pub fn flipped(self) -> Self {
        Oam(-self.0)
    }

    /// Index in the qubit subspace `{+ell0, -ell0}` (0 for `+ell0`).
    pub fn qubit_index(self, ell0: i32) -> Option<usize> {
        if self.0 == ell0 {
            Some(0)
        } else if self.0 == -ell0 {
            Some(1)
        } else {
            None
        }
    }

    pub fn from_qubit_index(i: usize, ell0: i32) -> Self {
        if i == 0 {
            Oam(ell0)
        } else {
            Oam(-ell0)
        }
    }
}

/// Temporal-wavepacket tag. Distinct tags are orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Wavepacket(pub u32);

/// One bosonic mode. Ordering is field-wise and serves as the canonical sort key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub path: Path,
    pub pol: Polarization,
    pub oam: Oam,
    pub wavepacket: Wavepacket,
}

impl ModeLabel {
    pub fn new(path: Path, pol: Polarization, oam: i32) -> Self {
        ModeLabel {
            path,
            pol,
            oam: Oam(oam),
            wavepacket: Wavepacket(0),
        }
    }

    pub fn with_wavepacket(self, tag: u32) -> Self {
        ModeLabel {
            wavepacket: Wavepacket(tag),
            ..self
        }
    }

    pub fn with_path(self, path: Path) -> Self {
        ModeLabel { path, ..self }
    }

    pub fn with_pol(self, pol: Polarization) -> Self {
        ModeLabel { pol, ..self }
    }

    pub fn with_oam(self, oam: Oam) -> Self {
        ModeLabel { oam, ..self }
    }
}

/// Occupation configuration: a multiset of modes kept in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockBasisState {
    modes: Vec<ModeLabel>,
}

impl FockBasisState {
    pub fn new(mut modes: Vec<ModeLabel>) -> Self {
        modes.sort();
        FockBasisState { modes }
    }

    pub fn photon_number(&self) -> usize {
        self.modes.len()
    }

    /// Photons in sorted order; repeated entries are multiply occupied modes.
    pub fn photons(&self) -> &[ModeLabel] {
        &self.modes
    }

    /// Distinct occupied modes with their occupation numbers.
    pub fn occupations(&self) -> Vec<(ModeLabel, usize)> {
        let mut out: Vec<(ModeLabel, usize)> = Vec::new();
        for m in &self.modes {
            match out.last_mut() {
                Some((last, n)) if last == m => *n += 1,
                _ => out.push((*m, 1)),
            }
        }
        out
    }

    pub fn photons_on(&self, path: Path) -> usize {
        self.modes.iter().filter(|m| m.path == path).count()
    }

    pub fn paths(&self) -> BTreeSet<Path> {
        self.modes.iter().map(|m| m.path).collect()
    }

    /// `sqrt(prod_k n_k!)` over occupied modes.
    fn bosonic_norm(&self) -> f64 {
        self.occupations()
            .iter()
            .map(|&(_, n)| (1..=n).product::<usize>() as f64)
            .product::<f64>()
            .sqrt()
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return f.write_str("|vac>");
        }
        let mut by_path: BTreeMap<Path, Vec<&ModeLabel>> = BTreeMap::new();
        for m in &self.modes {
            by_path.entry(m.path).or_default().push(m);
        }
        for (path, ms) in by_path {
            let labels: Vec<String> = ms
                .iter()
                .map(|m| {
                    let mut s = format!("{:?},{:+}", m.pol, m.oam.0);
                    if m.wavepacket.0 != 0 {
                        s.push_str(&format!(",t{}", m.wavepacket.0));
                    }
                    s
                })
                .collect();
            write!(f, "|{};{}>_{}", ms.len(), labels.join(";"), path)?;
        }
        Ok(())
    }
}

/// Sparse complex superposition over occupation configurations sharing one photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    terms: BTreeMap<FockBasisState, C64>,
    photons: usize,
}

/// Outcome of a projective filter: the renormalized surviving state (if any) and
/// the probability mass that survived.
#[derive(Debug, Clone)]
pub struct PostSelection {
    pub state: Option<PhotonicState>,
    pub probability: f64,
}

impl PhotonicState {
    /// Normalized superposition of the given configurations. Repeated
    /// configurations (in any mode order) accumulate.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<ModeLabel>, C64)>,
    {
        let mut map = BTreeMap::new();
        for (modes, amp) in terms {
            *map.entry(FockBasisState::new(modes)).or_insert(c(0.0, 0.0)) += amp;
        }
        Self::from_map(map)?.normalized()
    }

    /// A single occupation ket with amplitude 1.
    pub fn ket(modes: &[ModeLabel]) -> Result<Self> {
        Self::from_terms([(modes.to_vec(), c(1.0, 0.0))])
    }

    pub fn single(mode: ModeLabel) -> Self {
        Self::ket(&[mode]).expect("single photon is always valid")
    }

    fn from_map(mut map: BTreeMap<FockBasisState, C64>) -> Result<Self> {
        map.retain(|_, a| a.norm() >= AMPLITUDE_EPS);
        let mut photons = None;
        for k in map.keys() {
            let n = k.photon_number();
            if n > MAX_PHOTONS {
                return Err(Error::TooManyPhotons(n));
            }
            match photons {
                None => photons = Some(n),
                Some(p) if p != n => return Err(Error::MixedPhotonNumber(p, n)),
                _ => {}
            }
        }
        Ok(PhotonicState {
            terms: map,
            photons: photons.unwrap_or(0),
        })
    }

    pub fn photon_number(&self) -> usize {
        self.photons
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < AMPLITUDE_EPS {
            return Err(Error::ZeroNorm);
        }
        Ok(PhotonicState {
            terms: self.terms.into_iter().map(|(k, a)| (k, a / n)).collect(),
            photons: self.photons,
        })
    }

    /// Amplitude of a configuration; the mode order of `modes` is irrelevant.
    pub fn amplitude(&self, modes: &[ModeLabel]) -> C64 {
        self.terms
            .get(&FockBasisState::new(modes.to_vec()))
            .copied()
            .unwrap_or(c(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn paths(&self) -> BTreeSet<Path> {
        self.terms.keys().flat_map(|k| k.paths()).collect()
    }

    /// `<self|other>`, conjugate-linear in `self`. Zero when photon numbers differ.
    pub fn inner(&self, other: &PhotonicState) -> C64 {
        if self.photons != other.photons {
            return c(0.0, 0.0);
        }
        self.terms
            .iter()
            .filter_map(|(k, a)| other.terms.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// True when the states agree up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &PhotonicState, tol: f64) -> bool {
        (self.inner(other).norm() - 1.0).abs() <= tol
            && (self.norm_sqr() - 1.0).abs() <= tol
            && (other.norm_sqr() - 1.0).abs() <= tol
    }

    /// Tensor product of states living on disjoint paths.
    pub fn tensor(&self, other: &PhotonicState) -> Result<PhotonicState> {
        let shared: Vec<String> = self
            .paths()
            .intersection(&other.paths())
            .map(|p| p.to_string())
            .collect();
        if !shared.is_empty() {
            return Err(Error::OverlappingPaths(shared));
        }
        let mut map = BTreeMap::new();
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let mut modes = ka.modes.clone();
                modes.extend_from_slice(&kb.modes);
                *map.entry(FockBasisState::new(modes)).or_insert(c(0.0, 0.0)) += a * b;
            }
        }
        Self::from_map(map)?.normalized()
    }

    /// Applies a linear map on single-photon modes, `a_m^dag -> sum_k u_k a_{m_k}^dag`,
    /// to every photon. The result is not renormalized, so unitary maps can be
    /// checked for norm preservation and non-unitary ones lose mass.
    pub fn apply_linear<F>(&self, map: F) -> PhotonicState
    where
        F: Fn(&ModeLabel) -> Vec<(ModeLabel, C64)>,
    {
        let mut out: BTreeMap<FockBasisState, C64> = BTreeMap::new();
        for (basis, amp) in &self.terms {
            let images: Vec<Vec<(ModeLabel, C64)>> = basis.modes.iter().map(&map).collect();
            let inv_norm = 1.0 / basis.bosonic_norm();
            // Expand the product of creation operators over every choice of image mode.
            let mut partial: Vec<(Vec<ModeLabel>, C64)> = vec![(Vec::new(), *amp * inv_norm)];
            for img in &images {
                let mut next = Vec::with_capacity(partial.len() * img.len());
                for (modes, coeff) in &partial {
                    for (m, u) in img {
                        let mut ms = modes.clone();
                        ms.push(*m);
                        next.push((ms, coeff * u));
                    }
                }
                partial = next;
            }
            for (modes, coeff) in partial {
                let key = FockBasisState::new(modes);
                // a^dag...a^dag|0> = sqrt(prod n!) |normalized ket>
                let factor = key.bosonic_norm();
                *out.entry(key).or_insert(c(0.0, 0.0)) += coeff * factor;
            }
        }
        out.retain(|_, a| a.norm() >= AMPLITUDE_EPS);
        PhotonicState {
            terms: out,
            photons: self.photons,
        }
    }

    /// Keeps the configurations accepted by `keep`, renormalizing the survivors.
    pub fn project<F>(&self, keep: F) -> PostSelection
    where
        F: Fn(&FockBasisState) -> bool,
    {
        let total = self.norm_sqr();
        let kept: BTreeMap<FockBasisState, C64> = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        let mass: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        let probability = if total > 0.0 { mass / total } else { 0.0 };
        let state = if mass < AMPLITUDE_EPS * AMPLITUDE_EPS {
            None
        } else {
            PhotonicState {
                terms: kept,
                photons: self.photons,
            }
            .normalized()
            .ok()
        };
        PostSelection { state, probability }
    }

    /// Coincidence post-selection: one photon in `path_a` and one in `path_b`.
    pub fn post_select_coincidence(&self, path_a: Path, path_b: Path) -> Result<PostSelection> {
        if self.photons != 2 {
            return Err(Error::PhotonCount {
                expected: 2,
                found: self.photons,
            });
        }
        Ok(self.project(|k| k.photons_on(path_a) == 1 && k.photons_on(path_b) == 1))
    }

    /// Relabels a post-selected two-photon state into the 8-dim space
    /// `pol_c (x) oam_a (x) oam_b`. The photon on `path_ca` carries the
    /// polarization and first OAM qubit; the photon on `path_b` carries the
    /// second OAM qubit and must have the same polarization in every term.
    pub fn to_hybrid(&self, path_ca: Path, path_b: Path, ell0: i32) -> Result<HybridState> {
        if self.photons != 2 {
            return Err(Error::PhotonCount {
                expected: 2,
                found: self.photons,
            });
        }
        let mut vec = Vec8::zeros();
        let mut b_pol: Option<Polarization> = None;
        for (k, amp) in &self.terms {
            let ca = k.modes.iter().find(|m| m.path == path_ca);
            let b = k.modes.iter().find(|m| m.path == path_b);
            let (ca, b) = match (ca, b) {
                (Some(ca), Some(b)) if k.photons_on(path_ca) == 1 && k.photons_on(path_b) == 1 => (ca, b),
                _ => {
                    return Err(Error::invalid(
                        "state",
                        format!("term {k} does not have one photon on each of {path_ca} and {path_b}"),
                    ))
                }
            };
            if let Some(p) = b_pol {
                if p != b.pol {
                    return Err(Error::invalid("state", "photon on path_b carries a polarization superposition"));
                }
            }
            b_pol = Some(b.pol);
            let qa = ca.oam.qubit_index(ell0).ok_or(Error::OamOutsideQubit {
                path: path_ca.to_string(),
                ell: ca.oam.0,
                ell0,
            })?;
            let qb = b.oam.qubit_index(ell0).ok_or(Error::OamOutsideQubit {
                path: path_b.to_string(),
                ell: b.oam.0,
                ell0,
            })?;
            vec[HybridState::index(ca.pol, qa, qb)] += amp;
        }
        HybridState::new(vec)
    }
}

impl fmt::Display for PhotonicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "({:+.4}{:+.4}i) {}", a.re, a.im, k)?;
        }
        Ok(())
    }
}

/// Two-photon pure state in `pol_c (x) oam_a (x) oam_b`, index `4*pol + 2*oam_a + oam_b`
/// with `H` and `+ell0` as index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    vec: Vec8,
}

impl HybridState {
    pub fn index(pol: Polarization, oam_a: usize, oam_b: usize) -> usize {
        4 * pol.index() + 2 * oam_a + oam_b
    }

    pub fn new(vec: Vec8) -> Result<Self> {
        let n = vec.norm();
        if (n * n - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid("hybrid state", format!("norm^2 = {} is not 1", n * n)));
        }
        Ok(HybridState { vec })
    }

    pub fn basis(i: usize) -> Self {
        let mut vec = Vec8::zeros();
        vec[i] = c(1.0, 0.0);
        HybridState { vec }
    }

    pub fn vector(&self) -> &Vec8 {
        &self.vec
    }

    /// Inverse of [`PhotonicState::to_hybrid`].
    pub fn to_photonic(&self, path_ca: Path, path_b: Path, ell0: i32, b_pol: Polarization) -> PhotonicState {
        let terms = (0..8).map(|i| {
            let pol = Polarization::from_index(i / 4);
            let qa = (i / 2) % 2;
            let qb = i % 2;
            let m_ca = ModeLabel::new(path_ca, pol, 0).with_oam(Oam::from_qubit_index(qa, ell0));
            let m_b = ModeLabel::new(path_b, b_pol, 0).with_oam(Oam::from_qubit_index(qb, ell0));
            (vec![m_ca, m_b], self.vec[i])
        });
        PhotonicState::from_terms(terms).expect("unit-norm hybrid state maps to a valid photonic state")
    }
}
