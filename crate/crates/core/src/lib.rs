//! Channel estimation for optical intelligent reflecting surfaces (OIRS) in
//! visible light communication links.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, unit vectors, the OIRS element grid and the
//!   specular alignment normal.
//! - [`channel`]: Lambertian reflected gain, ground-truth CSI tensors, the
//!   association model and the pilot/noise signal model.
//! - [`coherence`]: growth rate of the reflected gain under a position shift,
//!   its second-order expansion and the resulting coherence distance.
//! - [`estimator`]: subarray association design, per-block MMSE estimation
//!   and spline recovery of the full CSI.
//! - [`experiment`]: configuration, seeded sweeps and CSV output.
//!
//! Runnable walkthroughs live in `examples/`; the `oirs` binary wraps the
//! experiment sweeps.

pub mod channel;
pub mod coherence;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod geometry;
pub mod metrics;
pub mod seed;

pub use error::{Error, Result};
