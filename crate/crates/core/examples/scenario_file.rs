//! Loads a scenario file, overrides the seed and prints the JSON envelope
//! followed by its CSV table.
//!
//!     cargo run --example scenario_file -- crates/core/scenarios/hom_scan.toml

use hybrid_teleport::scenario::{run, write_csv, Overrides, ScenarioConfig};

fn main() -> hybrid_teleport::error::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/teleport_calibrated.toml").to_string());
    let mut cfg = ScenarioConfig::from_toml(&std::fs::read_to_string(path)?)?;
    Overrides {
        seed: Some(2024),
        ..Overrides::default()
    }
    .apply(&mut cfg)?;
    let envelope = run(&cfg, 0)?;
    print!("{}", envelope.to_json()?);
    write_csv(&envelope.payload, &mut std::io::stdout())?;
    Ok(())
}
