//! Natural cubic spline on a coarse lattice, refined onto every element.

use nalgebra::DMatrix;
use oirs::estimator::interp::{interpolate_lattice, NaturalCubicSpline};

fn main() -> oirs::Result<()> {
    let x = [0.0, 3.0, 6.0, 9.0, 12.0];
    let y: Vec<f64> = x.iter().map(|t: &f64| (t / 4.0).sin()).collect();
    let spline = NaturalCubicSpline::new(&x, &y)?;
    for t in [1.5, 4.5, 7.5, 13.0] {
        println!("s({t}) = {:.5}   sin = {:.5}", spline.eval(t), (t / 4.0).sin());
    }

    let knots: [f64; 4] = [0.0, 3.0, 6.0, 9.0];
    let samples = DMatrix::from_fn(4, 4, |i, j| (knots[i] - 4.0).powi(2) + knots[j]);
    let targets: Vec<f64> = (0..10).map(f64::from).collect();
    let field = interpolate_lattice(&samples, &knots, &knots, &targets, &targets)?;
    println!("refined 4x4 -> {}x{}; corner {:.3}", field.nrows(), field.ncols(), field[(9, 9)]);
    Ok(())
}
