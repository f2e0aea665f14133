use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::seed::rng;

/// Nonnegative intensity pilots, i.i.d. uniform on `[0, 2 * power]`.
///
/// Draws are repeated in the (probability-zero) event that the rows come out
/// linearly dependent.
pub fn generate_pilots_with<R: Rng + ?Sized>(
    rng: &mut R,
    nt: usize,
    slots: usize,
    power: f64,
) -> Result<DMatrix<f64>> {
    if slots < nt {
        return Err(Error::Identifiability {
            pilots: slots,
            transmitters: nt,
        });
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidArgument(format!("pilot power {power} must be positive")));
    }
    let dist = Uniform::new_inclusive(0.0, 2.0 * power).expect("finite bounds");
    for _ in 0..16 {
        let x = DMatrix::from_fn(nt, slots, |_, _| dist.sample(rng));
        if has_full_row_rank(&x) {
            return Ok(x);
        }
    }
    Err(Error::SingularSystem)
}

pub fn generate_pilots(nt: usize, slots: usize, power: f64, seed: u64) -> Result<DMatrix<f64>> {
    generate_pilots_with(&mut rng(seed), nt, slots, power)
}

fn has_full_row_rank(x: &DMatrix<f64>) -> bool {
    let gram = x * x.transpose();
    let scale = gram.diagonal().max();
    scale > 0.0 && gram.symmetric_eigenvalues().min() > 1e-12 * scale
}

/// `Y = H X + Z` with `Z` i.i.d. `N(0, sigma^2)`.
pub fn simulate_rx_with<R: Rng + ?Sized>(
    rng: &mut R,
    h: &DMatrix<f64>,
    x: &DMatrix<f64>,
    sigma: f64,
) -> Result<DMatrix<f64>> {
    if h.ncols() != x.nrows() {
        return Err(Error::Shape(format!(
            "H has {} columns but X has {} rows",
            h.ncols(),
            x.nrows()
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise deviation {sigma} must be >= 0")));
    }
    let mut y = h * x;
    if sigma > 0.0 {
        let noise = Normal::new(0.0, sigma).expect("valid deviation");
        y.iter_mut().for_each(|v| *v += noise.sample(rng));
    }
    Ok(y)
}

pub fn simulate_rx(h: &DMatrix<f64>, x: &DMatrix<f64>, sigma: f64, seed: u64) -> Result<DMatrix<f64>> {
    simulate_rx_with(&mut rng(seed), h, x, sigma)
}

/// Pilots and received samples of one time block.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBlock {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub sigma: f64,
    pub seed: u64,
}

impl PilotBlock {
    /// Sends `slots` pilots through `h`; pilots and noise share one stream
    /// seeded by `seed`.
    pub fn transmit(h: &DMatrix<f64>, slots: usize, power: f64, sigma: f64, seed: u64) -> Result<Self> {
        let mut r = rng(seed);
        let x = generate_pilots_with(&mut r, h.ncols(), slots, power)?;
        let y = simulate_rx_with(&mut r, h, &x, sigma)?;
        Ok(Self { x, y, sigma, seed })
    }

    pub fn slots(&self) -> usize {
        self.x.ncols()
    }
}
