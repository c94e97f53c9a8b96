//! Fits the noise model to a target source fidelity and a target average
//! teleportation fidelity.
//!
//! The depolarizing weight `p` is fixed by the source fidelity alone. For any
//! shared pair the six-pole average after ideal Pauli corrections is
//! `(2 F_source + 1) / 3`, so a lower teleportation fidelity has to come from
//! the measurement side; the remaining gap is absorbed by the feed-forward
//! error probability `q`. Both fidelities are monotone in their parameter and
//! are inverted by bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::teleport::{run_teleport_suite, six_poles, NoiseConfig, Shots, TeleportConfig};

pub const TARGET_TOLERANCE: f64 = 1e-4;
const BISECTION_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub noise: NoiseConfig,
    pub source_fidelity: f64,
    pub average_fidelity: f64,
    /// Six-pole average with `q = 0`, i.e. what the source noise alone explains.
    pub source_only_average: f64,
}

fn check_target(name: &str, t: f64) -> Result<()> {
    if !t.is_finite() || t <= 2.0 / 3.0 || t > 1.0 {
        return Err(Error::invalid(name, format!("{t} is outside (2/3, 1]")));
    }
    Ok(())
}

/// Largest `x` in `[0, 1]` with `f(x) >= target` for a non-increasing `f`.
fn bisect_decreasing<F: Fn(f64) -> Result<f64>>(f: F, target: f64, what: &str) -> Result<f64> {
    let (f0, f1) = (f(0.0)?, f(1.0)?);
    if target > f0 + TARGET_TOLERANCE || target < f1 - TARGET_TOLERANCE {
        return Err(Error::Unattainable {
            target,
            reason: format!("{what} ranges over [{f1:.6}, {f0:.6}]"),
        });
    }
    if f0 <= target + 1e-12 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn with_noise(base: &TeleportConfig, noise: NoiseConfig) -> TeleportConfig {
    TeleportConfig {
        noise,
        shots: Shots::Exact,
        ..*base
    }
}

/// Solves for `depolarizing_p` and `feedforward_flip_prob`, keeping the rest of
/// `base` (delay offset, OAM charge, port map) fixed.
pub fn calibrate(target_source: f64, target_average: f64, base: &TeleportConfig) -> Result<Calibration> {
    check_target("target_source_fidelity", target_source)?;
    check_target("target_avg_fidelity", target_average)?;
    base.validate()?;
    let poles = six_poles();
    let noise_at = |p: f64, q: f64| NoiseConfig {
        depolarizing_p: p,
        feedforward_flip_prob: q,
        ..base.noise
    };
    let source = |p: f64| -> Result<f64> {
        let cfg = with_noise(base, noise_at(p, 0.0));
        Ok(cfg.source()?.entangled_source(cfg.noise.source_delay_mm)?.fidelity)
    };
    let p = bisect_decreasing(source, target_source, "source fidelity")?;
    let average = |q: f64| -> Result<f64> {
        Ok(run_teleport_suite(&poles, &with_noise(base, noise_at(p, q)))?.average_fidelity)
    };
    let source_only_average = average(0.0)?;
    let q = bisect_decreasing(average, target_average, "average fidelity at the calibrated source")?;
    let noise = noise_at(p, q);
    Ok(Calibration {
        noise,
        source_fidelity: source(p)?,
        average_fidelity: average(q)?,
        source_only_average,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_targets_need_no_noise() {
        let cal = calibrate(1.0, 1.0, &TeleportConfig::default()).unwrap();
        assert_eq!(cal.noise.depolarizing_p, 0.0);
        assert_eq!(cal.noise.feedforward_flip_prob, 0.0);
    }

    #[test]
    fn recovers_closed_form_parameters() {
        let cal = calibrate(0.9255, 0.918, &TeleportConfig::default()).unwrap();
        // source fidelity (1 - p)(1 + 1)/2 + p/4 = 1 - 3p/4
        let p = (1.0 - 0.9255) * 4.0 / 3.0;
        assert!((cal.noise.depolarizing_p - p).abs() < 1e-9);
        assert!((cal.source_only_average - (2.0 * 0.9255 + 1.0) / 3.0).abs() < 1e-9);
        let q = (1.0 - p / 2.0 - 0.918) * 3.0 / (2.0 * (1.0 - p));
        assert!((cal.noise.feedforward_flip_prob - q).abs() < 1e-9);
        assert!((cal.average_fidelity - 0.918).abs() < TARGET_TOLERANCE);
    }

    #[test]
    fn rejects_targets_out_of_range() {
        let base = TeleportConfig::default();
        assert!(matches!(calibrate(0.5, 0.9, &base), Err(Error::InvalidParameter { .. })));
        assert!(matches!(calibrate(0.9, 1.2, &base), Err(Error::InvalidParameter { .. })));
        // the average cannot exceed what the source noise already allows
        assert!(matches!(calibrate(0.8, 0.99, &base), Err(Error::Unattainable { .. })));
    }
}
