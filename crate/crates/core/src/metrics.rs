use crate::channel::CsiTensor;
use crate::error::{Error, Result};

/// Lowest value reported by [`to_db`].
pub const DB_FLOOR: f64 = -300.0;

/// `||est - truth||_F^2 / ||truth||_F^2`.
pub fn nmse(est: &CsiTensor, truth: &CsiTensor) -> Result<f64> {
    if est.matrix().shape() != truth.matrix().shape() || est.nt() != truth.nt() {
        return Err(Error::Shape(format!(
            "estimate is {:?} but truth is {:?}",
            est.matrix().shape(),
            truth.matrix().shape()
        )));
    }
    let denom = truth.matrix().norm_squared();
    if denom == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((est.matrix() - truth.matrix()).norm_squared() / denom)
}

/// `10 log10(x)`, clipped at [`DB_FLOOR`].
pub fn to_db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn tensor(scale: f64) -> CsiTensor {
        CsiTensor::new(DMatrix::from_fn(3, 4, |i, j| scale * (1.0 + i as f64 + 0.5 * j as f64)), 2, 2).unwrap()
    }

    #[test]
    fn identities() {
        let t = tensor(1.0);
        assert_eq!(nmse(&t, &t).unwrap(), 0.0);
        assert_eq!(nmse(&tensor(0.0), &t).unwrap(), 1.0);
        assert!((nmse(&tensor(2.0), &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_truth_and_shape() {
        assert_eq!(nmse(&tensor(1.0), &tensor(0.0)), Err(Error::ZeroReference));
        let other = CsiTensor::zeros(2, 2, 2);
        assert!(matches!(nmse(&other, &tensor(1.0)), Err(Error::Shape(_))));
    }

    #[test]
    fn decibels() {
        assert!((to_db(1e-3) + 30.0).abs() < 1e-12);
        assert_eq!(to_db(0.0), DB_FLOOR);
        assert_eq!(to_db(1e-40), DB_FLOOR);
    }
}
