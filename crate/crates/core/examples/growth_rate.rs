//! Exact versus second-order growth rate for shifts along one axis.

use oirs::channel::GainConstant;
use oirs::coherence::{coherence_interval, growth_rate_exact, taylor_coeffs};
use oirs::experiment::ExperimentConfig;
use oirs::geometry::Vec3;

fn main() -> oirs::Result<()> {
    let link = ExperimentConfig::default().link_geometry()?;
    let coeffs = taylor_coeffs(&link)?;
    let axis = Vec3::x();

    println!("{:>8} {:>12} {:>12}", "shift", "exact", "taylor");
    for k in -5..=5 {
        let dr = axis * (0.04 * k as f64);
        let exact = growth_rate_exact(&link, &dr, GainConstant::Unit)?;
        println!("{:>8.2} {:>12.6} {:>12.6}", 0.04 * k as f64, exact, coeffs.growth(&dr));
    }

    let (a, b) = coeffs.along(&axis);
    let interval = coherence_interval(a, b, 0.04)?;
    println!("A = {a:.4}, B = {b:.4}, |xi| <= 0.04 on [{:.4}, {:.4}]", interval.lower, interval.upper);
    Ok(())
}
