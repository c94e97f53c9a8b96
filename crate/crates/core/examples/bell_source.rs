//! Post-selected OAM pair: fidelity with the singlet-like target as the
//! delay stage walks off and as white noise is mixed in.

use hybrid_teleport::hom::{DelayModel, HomSource};

fn main() -> hybrid_teleport::error::Result<()> {
    for p in [0.0, 0.05, 0.0993] {
        let source = HomSource::new(DelayModel::default(), p, 1)?;
        for dx in [0.0, 0.1, 0.2, 0.4] {
            let pair = source.entangled_source(dx)?;
            println!(
                "p = {p:<6}  dx = {dx:.1} mm  fidelity = {:.4}  coincidence = {:.4}",
                pair.fidelity, pair.coincidence_probability
            );
        }
    }
    Ok(())
}
