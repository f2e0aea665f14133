use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{alignment_normal, normalize, plane_axes, OirsGrid, Point3, UnitVec3, Vec3};

/// Proportionality constant in front of the reflected Lambertian gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainConstant {
    /// `C = 1`. Growth rates and NMSE are invariant to the constant.
    Unit,
    /// `C = rho (m + 1) A_pd / (2 pi)`.
    Lambertian { reflectivity: f64, pd_area: f64 },
}

impl GainConstant {
    pub fn value(&self, lambertian_order: f64) -> f64 {
        match *self {
            GainConstant::Unit => 1.0,
            GainConstant::Lambertian {
                reflectivity,
                pd_area,
            } => reflectivity * (lambertian_order + 1.0) * pd_area / (2.0 * PI),
        }
    }
}

/// One LED -> mirror element -> PD path.
///
/// The rays `led_ray` and `pd_ray` point from the LED and PD toward the
/// element, so both cosines are positive for a ceiling LED facing down and a
/// floor PD facing up.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGeometry {
    led: Point3,
    element: Point3,
    pd: Point3,
    led_normal: UnitVec3,
    pd_normal: UnitVec3,
    lambertian_order: f64,
    fov_semi_angle: f64,
}

impl LinkGeometry {
    pub fn new(
        led: Point3,
        element: Point3,
        pd: Point3,
        led_normal: UnitVec3,
        pd_normal: UnitVec3,
        lambertian_order: f64,
        fov_semi_angle: f64,
    ) -> Result<Self> {
        if !(lambertian_order >= 1.0 && lambertian_order.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Lambertian order {lambertian_order} must be >= 1"
            )));
        }
        if !(fov_semi_angle > 0.0 && fov_semi_angle <= FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "field-of-view semi-angle {fov_semi_angle} must lie in (0, pi/2]"
            )));
        }
        let link = Self {
            led,
            element,
            pd,
            led_normal,
            pd_normal,
            lambertian_order,
            fov_semi_angle,
        };
        link.check_distances()?;
        Ok(link)
    }

    fn check_distances(&self) -> Result<()> {
        let finite = [&self.led, &self.element, &self.pd]
            .iter()
            .all(|p| p.iter().all(|c| c.is_finite()));
        if !finite {
            return Err(Error::DegenerateGeometry("non-finite link endpoint".into()));
        }
        if self.d1() == 0.0 {
            return Err(Error::DegenerateGeometry("LED coincides with the element".into()));
        }
        if self.d2() == 0.0 {
            return Err(Error::DegenerateGeometry("PD coincides with the element".into()));
        }
        Ok(())
    }

    /// Same link with the element moved to `element`.
    pub fn with_element(&self, element: Point3) -> Result<Self> {
        let link = Self {
            element,
            ..self.clone()
        };
        link.check_distances()?;
        Ok(link)
    }

    pub fn shifted(&self, shift: &Vec3) -> Result<Self> {
        self.with_element(self.element + shift)
    }

    pub fn led(&self) -> &Point3 {
        &self.led
    }

    pub fn element(&self) -> &Point3 {
        &self.element
    }

    pub fn pd(&self) -> &Point3 {
        &self.pd
    }

    pub fn led_normal(&self) -> &UnitVec3 {
        &self.led_normal
    }

    pub fn pd_normal(&self) -> &UnitVec3 {
        &self.pd_normal
    }

    pub fn lambertian_order(&self) -> f64 {
        self.lambertian_order
    }

    pub fn fov_semi_angle(&self) -> f64 {
        self.fov_semi_angle
    }

    /// LED to element distance.
    pub fn d1(&self) -> f64 {
        (self.element - self.led).norm()
    }

    /// PD to element distance.
    pub fn d2(&self) -> f64 {
        (self.element - self.pd).norm()
    }

    pub fn led_ray(&self) -> UnitVec3 {
        normalize(&(self.element - self.led)).expect("validated at construction")
    }

    pub fn pd_ray(&self) -> UnitVec3 {
        normalize(&(self.element - self.pd)).expect("validated at construction")
    }

    /// Cosine of the emission angle at the LED.
    pub fn cos_theta(&self) -> f64 {
        self.led_normal.dot(&self.led_ray()).clamp(-1.0, 1.0)
    }

    /// Cosine of the incidence angle at the PD.
    pub fn cos_phi(&self) -> f64 {
        self.pd_normal.dot(&self.pd_ray()).clamp(-1.0, 1.0)
    }

    /// Mirror normal that satisfies the reflection law for this link.
    pub fn aligned_normal(&self) -> Result<UnitVec3> {
        alignment_normal(&self.led, &self.element, &self.pd)
    }
}

/// Reflected gain `C cos^m(theta) cos(phi) / (d1 + d2)^2`, zero when the PD
/// sees the element outside its field of view or the element is behind the
/// LED.
pub fn point_gain(link: &LinkGeometry, constant: GainConstant) -> f64 {
    let cos_theta = link.cos_theta();
    let cos_phi = link.cos_phi();
    if cos_theta <= 0.0 || cos_phi <= 0.0 || cos_phi < link.fov_semi_angle.cos() {
        return 0.0;
    }
    let path = link.d1() + link.d2();
    constant.value(link.lambertian_order) * cos_theta.powf(link.lambertian_order) * cos_phi
        / (path * path)
}

/// Mean of `f(s, t)` over the `order x order` midpoint lattice on
/// `[-1/2, 1/2]^2`.
pub fn midpoint_mean<F>(order: usize, mut f: F) -> f64
where
    F: FnMut(f64, f64) -> f64,
{
    let k = order as f64;
    let mut sum = 0.0;
    for a in 0..order {
        let s = (a as f64 + 0.5) / k - 0.5;
        for b in 0..order {
            let t = (b as f64 + 0.5) / k - 0.5;
            sum += f(s, t);
        }
    }
    sum / (k * k)
}

/// Aperture-averaged gain of a square mirror of side `side` centred on the
/// link's element and lying in the plane perpendicular to `mirror_normal`.
///
/// `guide` fixes the in-plane rotation of the square (it is projected onto
/// the mirror plane).
pub fn aperture_gain(
    link: &LinkGeometry,
    mirror_normal: &UnitVec3,
    side: f64,
    guide: &Vec3,
    order: usize,
    constant: GainConstant,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be >= 1".into()));
    }
    let (a1, a2) = plane_axes(mirror_normal, guide);
    let center = *link.element();
    let mut failure = None;
    let mean = midpoint_mean(order, |s, t| {
        let p = center + a1.into_inner() * (s * side) + a2.into_inner() * (t * side);
        match link.with_element(p) {
            Ok(sub) => point_gain(&sub, constant),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(mean),
    }
}

/// Gain of grid element `index` for `link`'s LED and PD, averaged over the
/// element's square aperture with its mirror aligned to that LED/PD pair.
///
/// `order = 1` reduces to [`point_gain`] at the element center.
pub fn patch_gain_quadrature(
    grid: &OirsGrid,
    index: usize,
    link: &LinkGeometry,
    order: usize,
    constant: GainConstant,
) -> Result<f64> {
    let link = link.with_element(grid.position(index)?)?;
    let normal = link.aligned_normal()?;
    aperture_gain(
        &link,
        &normal,
        grid.element_size(),
        &grid.u().into_inner(),
        order,
        constant,
    )
}
