//! Fits the two noise knobs to a target source fidelity and teleportation
//! fidelity, then shows how much of the gap the source alone explains.

use hybrid_teleport::calibrate::calibrate;
use hybrid_teleport::teleport::TeleportConfig;

fn main() -> hybrid_teleport::error::Result<()> {
    let cal = calibrate(0.9255, 0.918, &TeleportConfig::default())?;
    println!("depolarizing_p        = {:.5}", cal.noise.depolarizing_p);
    println!("feedforward_flip_prob = {:.5}", cal.noise.feedforward_flip_prob);
    println!("source fidelity       = {:.5}", cal.source_fidelity);
    println!("average fidelity      = {:.5}", cal.average_fidelity);
    println!("source noise alone    = {:.5}", cal.source_only_average);
    match calibrate(0.8, 0.99, &TeleportConfig::default()) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("infeasible request rejected: {e}"),
    }
    Ok(())
}
