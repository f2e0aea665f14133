use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Ridge estimate `Y X^T (X X^T + sigma^2 I)^-1` of an `Nr x Nt` channel from
/// `Nr x P` observations `y` and `Nt x P` pilots `x`.
///
/// Solved as `(X X^T + sigma^2 I) H^T = X Y^T` by Cholesky factorisation.
pub fn mmse_estimate(y: &DMatrix<f64>, x: &DMatrix<f64>, sigma: f64) -> Result<DMatrix<f64>> {
    if y.ncols() != x.ncols() {
        return Err(Error::Shape(format!(
            "Y has {} slots but X has {}",
            y.ncols(),
            x.ncols()
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise deviation {sigma} must be >= 0")));
    }
    let nt = x.nrows();
    let mut gram = x * x.transpose();
    for k in 0..nt {
        gram[(k, k)] += sigma * sigma;
    }
    let scale = gram.diagonal().max();
    if !(scale > 0.0) {
        return Err(Error::SingularSystem);
    }
    let chol = gram.cholesky().ok_or(Error::SingularSystem)?;
    let l = chol.l_dirty();
    let min_pivot = (0..nt).map(|k| l[(k, k)]).fold(f64::INFINITY, f64::min);
    if min_pivot * min_pivot <= 1e-13 * scale {
        return Err(Error::SingularSystem);
    }
    Ok(chol.solve(&(x * y.transpose())).transpose())
}
