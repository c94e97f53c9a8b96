//! Scans the delay stage and prints both coincidence curves as a text plot.

use hybrid_teleport::hom::{dip_half_width, scan_grid, HomSource, ProjectionBasisOam as B};

fn main() -> hybrid_teleport::error::Result<()> {
    let source = HomSource::default();
    let grid = scan_grid(25, -0.6, 0.6);
    let dip = source.coincidence_curve(B::D, B::D, &grid)?;
    let peak = source.coincidence_curve(B::D, B::A, &grid)?;
    println!("{:>8}  {:>6}  {:>6}", "dx (mm)", "DD", "DA");
    for (d, p) in dip.iter().zip(&peak) {
        let bar = "#".repeat((p.probability * 80.0).round() as usize);
        println!("{:>8.3}  {:>6.4}  {:>6.4}  {bar}", d.delta_x_mm, d.probability, p.probability);
    }
    let fine = source.coincidence_curve(B::D, B::D, &scan_grid(1201, -0.6, 0.6))?;
    if let Some(hw) = dip_half_width(&fine) {
        println!("dip half width at half depth: {:.1} um", hw * 1000.0);
    }
    Ok(())
}
