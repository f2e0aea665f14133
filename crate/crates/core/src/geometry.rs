//! Points, unit vectors and the OIRS element grid.
//!
//! Elements are indexed column-major, `n = i + j * rows`, so that stacking a
//! `rows x cols` field column by column gives the per-element vector.

use nalgebra::{Unit, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Point3 = nalgebra::Point3<f64>;
pub type UnitVec3 = Unit<Vec3>;

/// Tolerance used for orthogonality and unit-norm checks.
pub const ORTHO_TOL: f64 = 1e-9;

/// `v / |v|`, rejecting zero and non-finite input.
pub fn normalize(v: &Vec3) -> Result<UnitVec3> {
    if !v.iter().all(|c| c.is_finite()) {
        return Err(Error::DegenerateGeometry(format!(
            "non-finite vector {:?}",
            v.as_slice()
        )));
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateGeometry("zero-length vector".into()));
    }
    Ok(Unit::new_unchecked(v / norm))
}

/// Mirror normal at `element` that reflects light from `led` onto `pd`.
///
/// This is the bisector of the two unit rays leaving the element.
pub fn alignment_normal(led: &Point3, element: &Point3, pd: &Point3) -> Result<UnitVec3> {
    let to_led = normalize(&(led - element))
        .map_err(|_| Error::DegenerateGeometry("LED coincides with the element".into()))?;
    let to_pd = normalize(&(pd - element))
        .map_err(|_| Error::DegenerateGeometry("PD coincides with the element".into()))?;
    let bisector = to_led.into_inner() + to_pd.into_inner();
    if bisector.norm() < 1e-12 {
        return Err(Error::DegenerateGeometry(
            "LED and PD rays are antiparallel (grazing reflection)".into(),
        ));
    }
    normalize(&bisector)
}

/// Two orthonormal axes spanning the plane perpendicular to `normal`.
///
/// The first axis is `guide` projected onto the plane; if `guide` is parallel
/// to `normal` another coordinate axis is used instead.
pub fn plane_axes(normal: &UnitVec3, guide: &Vec3) -> (UnitVec3, UnitVec3) {
    let n = normal.into_inner();
    let candidates = [*guide, Vec3::x(), Vec3::y(), Vec3::z()];
    let first = candidates
        .iter()
        .map(|g| g - n * n.dot(g))
        .find(|p| p.norm() > 1e-6)
        .expect("one coordinate axis is always off the normal");
    let a1 = Unit::new_normalize(first);
    let a2 = Unit::new_normalize(n.cross(&a1));
    (a1, a2)
}

/// Rectangular OIRS element grid centred on `center`.
///
/// Rows advance along `v`, columns along `u`, and the reflecting side faces
/// `normal = u x v`.
#[derive(Debug, Clone, PartialEq)]
pub struct OirsGrid {
    center: Point3,
    u: UnitVec3,
    v: UnitVec3,
    normal: UnitVec3,
    rows: usize,
    cols: usize,
    element_size: f64,
    element_pitch: f64,
    reflectivity: f64,
}

impl OirsGrid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        center: Point3,
        u: Vec3,
        v: Vec3,
        rows: usize,
        cols: usize,
        element_size: f64,
        element_pitch: f64,
        reflectivity: f64,
    ) -> Result<Self> {
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateGeometry("grid center is not finite".into()));
        }
        let u = normalize(&u)?;
        let v = normalize(&v)?;
        if u.dot(&v).abs() > ORTHO_TOL {
            return Err(Error::DegenerateGeometry(format!(
                "grid axes are not orthogonal (u.v = {})",
                u.dot(&v)
            )));
        }
        let normal = normalize(&u.cross(&v))?;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("grid needs at least one row and column".into()));
        }
        if !(element_pitch > 0.0 && element_pitch.is_finite()) {
            return Err(Error::InvalidArgument("element pitch must be positive".into()));
        }
        if !(element_size > 0.0 && element_size <= element_pitch) {
            return Err(Error::InvalidArgument(format!(
                "element size {element_size} must lie in (0, pitch = {element_pitch}]"
            )));
        }
        if !(reflectivity > 0.0 && reflectivity <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "reflectivity {reflectivity} must lie in (0, 1]"
            )));
        }
        Ok(Self {
            center,
            u,
            v,
            normal,
            rows,
            cols,
            element_size,
            element_pitch,
            reflectivity,
        })
    }

    pub fn center(&self) -> &Point3 {
        &self.center
    }

    pub fn u(&self) -> &UnitVec3 {
        &self.u
    }

    pub fn v(&self) -> &UnitVec3 {
        &self.v
    }

    pub fn normal(&self) -> &UnitVec3 {
        &self.normal
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn element_size(&self) -> f64 {
        self.element_size
    }

    pub fn element_pitch(&self) -> f64 {
        self.element_pitch
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    /// Number of elements `N = rows * cols`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row + col * self.rows
    }

    pub fn row_col(&self, index: usize) -> (usize, usize) {
        (index % self.rows, index / self.rows)
    }

    /// In-plane offsets (along `u`, along `v`) of element `(row, col)` from the
    /// grid center, in meters.
    pub fn plane_coords(&self, row: usize, col: usize) -> (f64, f64) {
        let du = (col as f64 - (self.cols as f64 - 1.0) / 2.0) * self.element_pitch;
        let dv = (row as f64 - (self.rows as f64 - 1.0) / 2.0) * self.element_pitch;
        (du, dv)
    }

    pub fn element_position(&self, row: usize, col: usize) -> Result<Point3> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::Index {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (du, dv) = self.plane_coords(row, col);
        Ok(self.center + self.u.into_inner() * du + self.v.into_inner() * dv)
    }

    /// Position of the element with column-major index `n`.
    pub fn position(&self, n: usize) -> Result<Point3> {
        let (row, col) = self.row_col(n);
        self.element_position(row, col)
    }

    /// Every element position in index order.
    pub fn positions(&self) -> Vec<Point3> {
        (0..self.len())
            .map(|n| self.position(n).expect("index in range"))
            .collect()
    }
}
