//! Coherence distance of the reference link on both shift planes.

use oirs::coherence::{coherence_distance, shift_axes, taylor_coeffs, ShiftPlane};
use oirs::experiment::ExperimentConfig;

fn main() -> oirs::Result<()> {
    let cfg = ExperimentConfig::default();
    let link = cfg.link_geometry()?;
    let grid = cfg.grid()?;

    let coeffs = taylor_coeffs(&link)?;
    println!("s1 = {:?}", coeffs.s1.as_slice());
    println!("S2 diagonal = {:?}", coeffs.s2.diagonal().as_slice());

    for plane in [ShiftPlane::Mirror, ShiftPlane::Grid] {
        let axes = shift_axes(&link, &grid, plane)?;
        let report = coherence_distance(&link, axes, cfg.coherence.xi_c, cfg.coherence.angular_samples)?;
        let dir = report.argmin_direction;
        println!(
            "{plane:?}: d_c = {:.4} m along ({:.3}, {:.3}, {:.3}), interval [{:.4}, {:.4}]",
            report.d_c, dir.x, dir.y, dir.z, report.interval.lower, report.interval.upper
        );
    }
    Ok(())
}
