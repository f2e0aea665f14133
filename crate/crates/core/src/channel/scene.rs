use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, DVectorView};
use serde::{Deserialize, Serialize};

use super::gain::{patch_gain_quadrature, point_gain, GainConstant, LinkGeometry};
use crate::error::{Error, Result};
use crate::geometry::{normalize, OirsGrid, Point3, UnitVec3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainConstantMode {
    #[default]
    Unit,
    Lambertian,
}

/// How ground-truth gains are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthModel {
    /// Point-source gain at each element center.
    Point,
    /// `K x K` midpoint average over the aligned element aperture.
    Quadrature(usize),
}

/// Room, transmitter array, receiver array and OIRS.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    /// Room extents; the room occupies `[0, x] x [0, y] x [0, z]`.
    pub room: Vec3,
    pub led_positions: Vec<Point3>,
    pub led_normal: UnitVec3,
    pub lambertian_order: f64,
    pub pd_positions: Vec<Point3>,
    pub pd_normal: UnitVec3,
    /// PD side length in meters; the PD area is `pd_side^2`.
    pub pd_side: f64,
    pub fov_semi_angle: f64,
    pub grid: OirsGrid,
    pub gain_constant: GainConstantMode,
}

impl Default for SceneConfig {
    /// 4 m x 4 m x 3 m room, two ceiling LEDs, two floor PDs and a 24 x 24
    /// OIRS on the `y = 0` wall centred at (2, 0, 1.5).
    fn default() -> Self {
        let grid = OirsGrid::new(
            Point3::new(2.0, 0.0, 1.5),
            Vec3::x(),
            -Vec3::z(),
            24,
            24,
            0.05,
            0.1,
            0.9,
        )
        .expect("reference grid is valid");
        Self {
            room: Vec3::new(4.0, 4.0, 3.0),
            led_positions: vec![Point3::new(0.9, 2.0, 3.0), Point3::new(1.1, 2.0, 3.0)],
            led_normal: normalize(&-Vec3::z()).unwrap(),
            lambertian_order: 1.0,
            pd_positions: vec![Point3::new(1.8, 2.0, 0.0), Point3::new(2.2, 2.0, 0.0)],
            pd_normal: normalize(&Vec3::z()).unwrap(),
            pd_side: 0.05,
            fov_semi_angle: FRAC_PI_2,
            grid,
            gain_constant: GainConstantMode::Unit,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.room.iter().all(|&e| e > 0.0 && e.is_finite()) {
            return Err(Error::InvalidArgument("room extents must be positive".into()));
        }
        if self.led_positions.is_empty() || self.pd_positions.is_empty() {
            return Err(Error::InvalidArgument(
                "scene needs at least one LED and one PD".into(),
            ));
        }
        if !(self.pd_side > 0.0 && self.pd_side.is_finite()) {
            return Err(Error::InvalidArgument("PD side must be positive".into()));
        }
        let inside = |p: &Point3| {
            (0..3).all(|k| p[k] >= -1e-12 && p[k] <= self.room[k] + 1e-12)
        };
        for (what, points) in [("LED", &self.led_positions), ("PD", &self.pd_positions)] {
            if let Some(p) = points.iter().find(|p| !inside(p)) {
                return Err(Error::InvalidArgument(format!(
                    "{what} at {:?} lies outside the room",
                    p.coords.as_slice()
                )));
            }
        }
        if let Some(p) = self.grid.positions().iter().find(|p| !inside(p)) {
            return Err(Error::InvalidArgument(format!(
                "OIRS element at {:?} lies outside the room",
                p.coords.as_slice()
            )));
        }
        // Exercises the order and field-of-view checks.
        self.link(0, 0, 0)?;
        Ok(())
    }

    pub fn nt(&self) -> usize {
        self.led_positions.len()
    }

    pub fn nr(&self) -> usize {
        self.pd_positions.len()
    }

    pub fn gain_constant(&self) -> GainConstant {
        match self.gain_constant {
            GainConstantMode::Unit => GainConstant::Unit,
            GainConstantMode::Lambertian => GainConstant::Lambertian {
                reflectivity: self.grid.reflectivity(),
                pd_area: self.pd_side * self.pd_side,
            },
        }
    }

    /// Link from LED `led` via element `element` to PD `pd` (all 0-based).
    pub fn link(&self, led: usize, element: usize, pd: usize) -> Result<LinkGeometry> {
        let l = self
            .led_positions
            .get(led)
            .ok_or_else(|| Error::InvalidArgument(format!("no LED {led}")))?;
        let u = self
            .pd_positions
            .get(pd)
            .ok_or_else(|| Error::InvalidArgument(format!("no PD {pd}")))?;
        LinkGeometry::new(
            *l,
            self.grid.position(element)?,
            *u,
            self.led_normal,
            self.pd_normal,
            self.lambertian_order,
            self.fov_semi_angle,
        )
    }
}

/// Per-element gains for every (LED, PD) pair: an `N x (Nt Nr)` matrix whose
/// column `pd + led * Nr` is the gain vector of that pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiTensor {
    gains: DMatrix<f64>,
    nt: usize,
    nr: usize,
}

impl CsiTensor {
    pub fn new(gains: DMatrix<f64>, nt: usize, nr: usize) -> Result<Self> {
        if nt == 0 || nr == 0 || gains.ncols() != nt * nr {
            return Err(Error::Shape(format!(
                "{} columns do not match Nt * Nr = {} * {}",
                gains.ncols(),
                nt,
                nr
            )));
        }
        if !gains.iter().all(|g| g.is_finite()) {
            return Err(Error::InvalidArgument("CSI entries must be finite".into()));
        }
        Ok(Self { gains, nt, nr })
    }

    pub fn zeros(elements: usize, nt: usize, nr: usize) -> Self {
        Self {
            gains: DMatrix::zeros(elements, nt * nr),
            nt,
            nr,
        }
    }

    pub fn column_index(&self, pd: usize, led: usize) -> usize {
        pd + led * self.nr
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn elements(&self) -> usize {
        self.gains.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.gains
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.gains
    }

    pub fn pair(&self, pd: usize, led: usize) -> DVectorView<'_, f64> {
        self.gains.column(self.column_index(pd, led))
    }

    pub fn gain(&self, element: usize, pd: usize, led: usize) -> f64 {
        self.gains[(element, self.column_index(pd, led))]
    }

    /// Column-stacked `vec(H_c)`.
    pub fn vec(&self) -> DVector<f64> {
        DVector::from_column_slice(self.gains.as_slice())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.gains.iter().all(|&g| g >= 0.0)
    }

    /// Copy with negative entries set to zero.
    pub fn clamped(&self) -> Self {
        Self {
            gains: self.gains.map(|g| g.max(0.0)),
            ..*self
        }
    }
}

/// Ground-truth CSI for every (LED, element, PD) link of `scene`.
///
/// Each element's mirror is aligned to the link being evaluated.
pub fn build_csi_tensor(scene: &SceneConfig, model: TruthModel) -> Result<CsiTensor> {
    scene.validate()?;
    let (nt, nr, n) = (scene.nt(), scene.nr(), scene.grid.len());
    let constant = scene.gain_constant();
    let mut gains = DMatrix::zeros(n, nt * nr);
    for led in 0..nt {
        for pd in 0..nr {
            let col = pd + led * nr;
            for element in 0..n {
                let link = scene.link(led, element, pd)?;
                link.aligned_normal()?;
                gains[(element, col)] = match model {
                    TruthModel::Point => point_gain(&link, constant),
                    TruthModel::Quadrature(order) => {
                        patch_gain_quadrature(&scene.grid, element, &link, order, constant)?
                    }
                };
            }
        }
    }
    CsiTensor::new(gains, nt, nr)
}
