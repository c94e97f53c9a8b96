//! Teleports the six polarization poles onto OAM, exactly and with sampling.

use hybrid_teleport::teleport::{run_teleport_suite, six_poles, NoiseConfig, Shots, TeleportConfig};

fn main() -> hybrid_teleport::error::Result<()> {
    let inputs = six_poles();
    let ideal = run_teleport_suite(&inputs, &TeleportConfig::default())?;
    println!("ideal average fidelity: {:.6}", ideal.average_fidelity);

    let noisy = TeleportConfig {
        shots: Shots::Sampled(20_000),
        noise: NoiseConfig {
            depolarizing_p: 0.1,
            ..NoiseConfig::default()
        },
        seed: 42,
        ..TeleportConfig::default()
    };
    let result = run_teleport_suite(&inputs, &noisy)?;
    println!("source fidelity {:.4}", result.source_fidelity);
    for r in &result.records {
        println!("  {:<2} F = {:.4}  outcomes {:?}", r.label, r.fidelity, r.outcome_counts.unwrap_or_default());
    }
    println!("average {:.4}", result.average_fidelity);
    for p in &result.ports {
        println!(
            "  port {:?}: {:.2}% +- {:.2}% (theory {:.0}%)",
            p.port, p.observed_pct, p.stderr_pct, p.theory_pct
        );
    }
    Ok(())
}
