//! Maximum-likelihood reconstruction of one qubit from simulated counts.

use hybrid_teleport::linalg::{c, Vec2};
use hybrid_teleport::tomography::{fidelity, mle_reconstruct, simulate_counts, CountModel, DensityMatrix2};

fn main() -> hybrid_teleport::error::Result<()> {
    let psi = Vec2::new(c(0.8, 0.0), c(0.0, 0.6));
    let truth = DensityMatrix2::pure(&psi);
    for shots in [100, 1_000, 10_000, 100_000] {
        let record = simulate_counts(&truth, shots, CountModel::Poisson, 7);
        let fit = mle_reconstruct(&record)?;
        println!(
            "{shots:>7} shots/basis: fidelity {:.5}, trace distance {:.2e}, {} iterations",
            fidelity(&fit.rho, &psi),
            fit.rho.trace_distance(&truth),
            fit.iterations
        );
    }
    Ok(())
}
