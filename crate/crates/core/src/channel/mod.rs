//! Reflected-path channel model.
//!
//! Gains follow the point-source Lambertian model for a single mirror
//! element; [`patch_gain_quadrature`] averages it over the element aperture
//! and serves as the ground-truth generator. The association model maps a
//! per-element CSI tensor and a binary alignment pattern to the `Nr x Nt`
//! MIMO channel seen by the receiver.

mod association;
mod gain;
mod scene;
mod signal;

pub use association::{assemble_h, blkdiag, vec_h_blkdiag, Alignment, AssociationPattern};
pub use gain::{
    aperture_gain, midpoint_mean, patch_gain_quadrature, point_gain, GainConstant, LinkGeometry,
};
pub use scene::{build_csi_tensor, CsiTensor, GainConstantMode, SceneConfig, TruthModel};
pub use signal::{generate_pilots, generate_pilots_with, simulate_rx, simulate_rx_with, PilotBlock};
