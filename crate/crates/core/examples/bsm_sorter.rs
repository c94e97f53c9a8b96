//! Sends each single-photon Bell state through the sorter network and draws
//! a few sampled detector clicks.

use hybrid_teleport::bsm::{bell_state, BellState, BsmNetwork};

fn main() -> hybrid_teleport::error::Result<()> {
    let net = BsmNetwork::default();
    let matrix = net.verification_matrix()?;
    println!("{:<8} {:>6} {:>6} {:>6} {:>6}", "state", "A", "B", "C", "D");
    for (row, which) in matrix.iter().zip(BellState::ALL) {
        println!(
            "{:<8} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
            which.label(),
            row[0],
            row[1],
            row[2],
            row[3]
        );
    }
    let amps = BsmNetwork::closed_form_amplitudes(&bell_state(BellState::XiPlus));
    println!("closed-form port amplitudes for xi+: {amps:?}");
    for seed in 0..4 {
        let out = net.measure(&bell_state(BellState::OmegaMinus), seed)?;
        println!("seed {seed}: omega- clicked port {:?} ({})", out.port, out.state.label());
    }
    Ok(())
}
