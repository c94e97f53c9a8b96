//! Measure-and-prepare baselines without entanglement.

use hybrid_teleport::teleport::{classical_baseline, six_poles, ClassicalStrategy, MeasureBasis, Shots};

fn main() -> hybrid_teleport::error::Result<()> {
    let inputs = six_poles();
    let strategies = [
        ("random basis", ClassicalStrategy::RandomBasis),
        ("always H/V", ClassicalStrategy::FixedBasis(MeasureBasis::HV)),
        ("always D/A", ClassicalStrategy::FixedBasis(MeasureBasis::DA)),
    ];
    for (name, s) in strategies {
        let exact = classical_baseline(&inputs, s, Shots::Exact, 0)?;
        let mc = classical_baseline(&inputs, s, Shots::Sampled(60_000), 9)?;
        println!(
            "{name:<13} exact {:.4}   sampled {:.4} +- {:.4}",
            exact.mean_fidelity, mc.mean_fidelity, mc.stderr
        );
    }
    Ok(())
}
