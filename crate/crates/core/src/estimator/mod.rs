//! Spatial-sampling channel estimation.
//!
//! 1. [`SubarrayLayout`] assigns, for every time block, one aligned element
//!    per (LED, PD) pair.
//! 2. Each block is estimated with the ridge estimator [`mmse_estimate`].
//! 3. Per pair, the block estimates form a regular lattice that is
//!    interpolated back onto the full grid ([`interpolate_full`]).

mod algorithm;
pub mod interp;
mod layout;
mod mmse;

pub use algorithm::{
    flops_estimate, gather_samples, interpolate_full, run_algorithm1, EstimationResult, Estimator,
};
pub use layout::{design_pattern, PairLattice, SubarrayLayout};
pub use mmse::mmse_estimate;
