use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Natural cubic spline through `(x_k, y_k)`, extended linearly beyond the
/// end knots.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalCubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

fn check_knots(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("at least one knot is required".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("knots must be strictly increasing".into()));
    }
    Ok(())
}

impl NaturalCubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        check_knots(x)?;
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidArgument(
                "spline needs at least two knots and one value per knot".into(),
            ));
        }
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i]);
            }
            for i in 1..k {
                let w = h[i] / diag[i - 1];
                diag[i] -= w * h[i];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - h[i + 1] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x: x.to_vec(), y: y.to_vec(), m })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (x, y, m) = (&self.x, &self.y, &self.m);
        let n = x.len();
        if t <= x[0] {
            let h = x[1] - x[0];
            let slope = (y[1] - y[0]) / h - h * m[1] / 6.0;
            return y[0] + slope * (t - x[0]);
        }
        if t >= x[n - 1] {
            let h = x[n - 1] - x[n - 2];
            let slope = (y[n - 1] - y[n - 2]) / h + h * m[n - 2] / 6.0;
            return y[n - 1] + slope * (t - x[n - 1]);
        }
        let i = x.partition_point(|&k| k <= t).clamp(1, n - 1) - 1;
        let h = x[i + 1] - x[i];
        let (a, b) = ((x[i + 1] - t) / h, (t - x[i]) / h);
        y[i] + b * (y[i + 1] - y[i]) + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0
    }
}

/// One-dimensional interpolant of the kind chosen by [`InterpMethod`].
#[derive(Debug, Clone, PartialEq)]
pub enum Interpolant {
    Constant(f64),
    Linear { x: Vec<f64>, y: Vec<f64> },
    Spline(NaturalCubicSpline),
}

impl Interpolant {
    /// Single knots always give a constant.
    pub fn new(x: &[f64], y: &[f64], method: InterpMethod) -> Result<Self> {
        check_knots(x)?;
        if x.len() != y.len() {
            return Err(Error::Shape(format!("{} knots but {} values", x.len(), y.len())));
        }
        if x.len() == 1 {
            return Ok(Interpolant::Constant(y[0]));
        }
        match method {
            InterpMethod::Constant => Err(Error::InvalidArgument(
                "constant interpolation needs a single knot".into(),
            )),
            InterpMethod::Linear => Ok(Interpolant::Linear { x: x.to_vec(), y: y.to_vec() }),
            InterpMethod::CubicSpline => NaturalCubicSpline::new(x, y).map(Interpolant::Spline),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Interpolant::Constant(c) => *c,
            Interpolant::Linear { x, y } => {
                let i = x.partition_point(|&k| k <= t).clamp(1, x.len() - 1) - 1;
                let lambda = (t - x[i]) / (x[i + 1] - x[i]);
                y[i] + lambda * (y[i + 1] - y[i])
            }
            Interpolant::Spline(s) => s.eval(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpMethod {
    Constant,
    Linear,
    CubicSpline,
}

impl InterpMethod {
    /// Spline on lattices with at least four samples per axis, linear
    /// otherwise.
    pub fn for_lattice(rows: usize, cols: usize) -> Self {
        if rows.min(cols) >= 4 {
            InterpMethod::CubicSpline
        } else {
            InterpMethod::Linear
        }
    }
}

fn linear_weights(knots: &[f64], t: f64, out: &mut [f64]) {
    let n = knots.len();
    let i = knots.partition_point(|&k| k <= t).clamp(1, n - 1) - 1;
    let lambda = (t - knots[i]) / (knots[i + 1] - knots[i]);
    out[i] = 1.0 - lambda;
    out[i + 1] = lambda;
}

/// `targets.len() x knots.len()` matrix mapping knot values to values at
/// `targets`. Axes with a single knot are always constant.
pub fn axis_weights(knots: &[f64], targets: &[f64], method: InterpMethod) -> Result<DMatrix<f64>> {
    check_knots(knots)?;
    let n = knots.len();
    let mut w = DMatrix::zeros(targets.len(), n);
    let method = if n == 1 { InterpMethod::Constant } else { method };
    match method {
        InterpMethod::Constant => {
            if n != 1 {
                return Err(Error::InvalidArgument(
                    "constant interpolation needs a single knot".into(),
                ));
            }
            w.fill(1.0);
        }
        InterpMethod::Linear => {
            let mut row = vec![0.0; n];
            for (r, &t) in targets.iter().enumerate() {
                row.fill(0.0);
                linear_weights(knots, t, &mut row);
                for (c, v) in row.iter().enumerate() {
                    w[(r, c)] = *v;
                }
            }
        }
        InterpMethod::CubicSpline => {
            let mut unit = vec![0.0; n];
            for c in 0..n {
                unit[c] = 1.0;
                let spline = NaturalCubicSpline::new(knots, &unit)?;
                unit[c] = 0.0;
                for (r, &t) in targets.iter().enumerate() {
                    w[(r, c)] = spline.eval(t);
                }
            }
        }
    }
    Ok(w)
}

/// Tensor-product interpolation of `samples` (taken at `row_knots x
/// col_knots`) onto `row_targets x col_targets`: first along columns, then
/// along rows. Equivalent to `Wv S Wh^T` with the [`axis_weights`]
/// matrices, but reproduces constant samples exactly.
pub fn interpolate_lattice(
    samples: &DMatrix<f64>,
    row_knots: &[f64],
    col_knots: &[f64],
    row_targets: &[f64],
    col_targets: &[f64],
) -> Result<DMatrix<f64>> {
    if samples.shape() != (row_knots.len(), col_knots.len()) {
        return Err(Error::Shape(format!(
            "{}x{} samples on a {}x{} lattice",
            samples.nrows(),
            samples.ncols(),
            row_knots.len(),
            col_knots.len()
        )));
    }
    let method = InterpMethod::for_lattice(row_knots.len(), col_knots.len());
    let mut along_cols = DMatrix::zeros(row_knots.len(), col_targets.len());
    for a in 0..row_knots.len() {
        let values: Vec<f64> = samples.row(a).iter().copied().collect();
        let f = Interpolant::new(col_knots, &values, method)?;
        for (c, &t) in col_targets.iter().enumerate() {
            along_cols[(a, c)] = f.eval(t);
        }
    }
    let mut out = DMatrix::zeros(row_targets.len(), col_targets.len());
    for c in 0..col_targets.len() {
        let f = Interpolant::new(row_knots, along_cols.column(c).as_slice(), method)?;
        for (r, &t) in row_targets.iter().enumerate() {
            out[(r, c)] = f.eval(t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_interpolates_knots_and_extends_linearly() {
        let x = [0.0, 1.0, 2.5, 3.0, 4.0];
        let y = [1.0, -2.0, 0.5, 3.0, 2.0];
        let s = NaturalCubicSpline::new(&x, &y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((s.eval(*a) - b).abs() < 1e-14);
        }
        let d = s.eval(-1.0) - s.eval(-2.0);
        assert!((s.eval(-3.0) - s.eval(-2.0) + d).abs() < 1e-12);
    }

    #[test]
    fn spline_reproduces_lines() {
        let x = [0.0, 0.5, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|t| 2.0 - 0.5 * t).collect();
        let s = NaturalCubicSpline::new(&x, &y).unwrap();
        for t in [-1.0, 0.2, 1.3, 2.9, 5.0] {
            assert!((s.eval(t) - (2.0 - 0.5 * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn spline_second_derivative_matches_hand_solution() {
        // Three knots at 0, 1, 2 with y = 0, 1, 0: m1 = 6 (0 - 2) / 4 = -3.
        let s = NaturalCubicSpline::new(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!((s.m[1] + 3.0).abs() < 1e-15);
        assert!((s.eval(0.5) - (0.5 + (0.125 - 0.5) * -3.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn weights_are_a_partition_of_unity() {
        let knots = [1.0, 3.0, 5.0, 7.0, 9.0];
        let targets: Vec<f64> = (0..12).map(|t| t as f64).collect();
        for method in [InterpMethod::Linear, InterpMethod::CubicSpline] {
            let w = axis_weights(&knots, &targets, method).unwrap();
            for r in 0..w.nrows() {
                assert!((w.row(r).sum() - 1.0).abs() < 1e-13);
            }
        }
        let single = axis_weights(&[2.0], &targets, InterpMethod::CubicSpline).unwrap();
        assert!(single.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn direct_evaluation_matches_weight_matrices() {
        let rk = [0.0, 2.0, 4.0, 6.0, 8.0];
        let ck = [1.0, 3.0, 5.0, 7.0];
        let s = DMatrix::from_fn(5, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.5);
        let rt: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let ct: Vec<f64> = (0..9).map(|k| k as f64).collect();
        let m = InterpMethod::CubicSpline;
        let by_weights = axis_weights(&rk, &rt, m).unwrap() * &s * axis_weights(&ck, &ct, m).unwrap().transpose();
        let direct = interpolate_lattice(&s, &rk, &ck, &rt, &ct).unwrap();
        assert!((by_weights - direct).amax() < 1e-13);
    }

    #[test]
    fn constants_are_reproduced_bit_exactly() {
        let s = DMatrix::from_element(4, 5, 0.1234567);
        let rk = [0.0, 3.0, 6.0, 9.0];
        let ck = [1.0, 4.0, 7.0, 10.0, 13.0];
        let t: Vec<f64> = (0..15).map(|k| k as f64 * 0.9 - 1.0).collect();
        let out = interpolate_lattice(&s, &rk, &ck, &t, &t).unwrap();
        assert!(out.iter().all(|&v| v == 0.1234567));
    }

    #[test]
    fn bad_knots_rejected() {
        assert!(axis_weights(&[0.0, 0.0], &[0.5], InterpMethod::Linear).is_err());
        assert!(axis_weights(&[], &[0.5], InterpMethod::Linear).is_err());
        assert!(interpolate_lattice(&DMatrix::zeros(2, 2), &[0.0, 1.0, 2.0], &[0.0, 1.0], &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn small_lattices_fall_back_to_bilinear() {
        let samples = DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 2.0, 1.0, 2.0, 3.0]);
        let out = interpolate_lattice(&samples, &[0.0, 2.0], &[0.0, 2.0, 4.0], &[1.0], &[1.0, 3.0, 5.0]).unwrap();
        // Field is 0.5 * row + 0.5 * col.
        for (c, t) in [1.0, 3.0, 5.0].iter().enumerate() {
            assert!((out[(0, c)] - (0.5 + 0.5 * t)).abs() < 1e-14);
        }
    }
}
