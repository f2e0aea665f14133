//! Growth rate of the reflected gain under an element shift, its
//! second-order expansion and the coherence distance derived from it.
//!
//! For a shift `dR` of the element position,
//! `xi(dR) = h(R + dR) / h(R) - 1 ~ s1 . dR + dR^T S2 dR / 2`.
//! Along a unit direction `e` this is the quadratic `A r^2 + B r` with
//! `A = e^T S2 e / 2` and `B = s1 . e`; the coherence length is the width of
//! the interval around `r = 0` on which `|A r^2 + B r| <= xi_c`, and the
//! coherence distance is its minimum over in-plane directions.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::channel::{point_gain, GainConstant, LinkGeometry};
use crate::error::{Error, Result};
use crate::geometry::{normalize, plane_axes, OirsGrid, UnitVec3, Vec3};

const COSINE_EPS: f64 = 1e-9;
const TIE_RTOL: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-6;

/// First- and second-order growth coefficients of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorCoeffs {
    pub s1: Vec3,
    pub s2: Matrix3<f64>,
}

impl TaylorCoeffs {
    pub fn growth(&self, dr: &Vec3) -> f64 {
        growth_rate_taylor(self, dr)
    }

    /// `(A, B)` of the 1-D quadratic along `direction`.
    pub fn along(&self, direction: &Vec3) -> (f64, f64) {
        (
            0.5 * direction.dot(&(self.s2 * direction)),
            self.s1.dot(direction),
        )
    }
}

/// Exact relative gain change when the element moves by `dr` with its mirror
/// orientation held fixed.
pub fn growth_rate_exact(link: &LinkGeometry, dr: &Vec3, constant: GainConstant) -> Result<f64> {
    let h0 = point_gain(link, constant);
    if h0 == 0.0 {
        return Err(Error::ZeroGain);
    }
    let h1 = point_gain(&link.shifted(dr)?, constant);
    Ok(h1 / h0 - 1.0)
}

/// Gradient `s1` and Hessian `S2` of the growth rate at zero shift.
pub fn taylor_coeffs(link: &LinkGeometry) -> Result<TaylorCoeffs> {
    let (ct, cp) = (link.cos_theta(), link.cos_phi());
    if ct <= COSINE_EPS || cp <= COSINE_EPS {
        return Err(Error::SingularGeometry(format!(
            "emission cosine {ct:.3e} or incidence cosine {cp:.3e} is not positive"
        )));
    }
    let m = link.lambertian_order();
    let (d1, d2) = (link.d1(), link.d2());
    let d = d1 + d2;
    let n1 = link.led_normal().into_inner();
    let n2 = link.pd_normal().into_inner();
    let a = link.led_ray().into_inner();
    let b = link.pd_ray().into_inner();

    let s1 = n1 * (m / (d1 * ct)) + n2 / (d2 * cp) - a * (m / d1 + 2.0 / d) - b * (1.0 / d2 + 2.0 / d);

    let hess_ln = -n1 * n1.transpose() * (m / (d1 * d1 * ct * ct))
        - n2 * n2.transpose() / (d2 * d2 * cp * cp)
        + a * a.transpose() * (2.0 * (m / (d1 * d1) + 1.0 / (d * d) + 1.0 / (d1 * d)))
        + b * b.transpose() * (2.0 * (1.0 / (d2 * d2) + 1.0 / (d * d) + 1.0 / (d2 * d)))
        + (a * b.transpose() + b * a.transpose()) * (2.0 / (d * d))
        - Matrix3::identity()
            * (m / (d1 * d1) + 1.0 / (d2 * d2) + 2.0 / (d1 * d) + 2.0 / (d2 * d));
    let s2 = hess_ln + s1 * s1.transpose();
    let s2 = (s2 + s2.transpose()) * 0.5;
    Ok(TaylorCoeffs { s1, s2 })
}

pub fn growth_rate_taylor(coeffs: &TaylorCoeffs, dr: &Vec3) -> f64 {
    coeffs.s1.dot(dr) + 0.5 * dr.dot(&(coeffs.s2 * dr))
}

/// Interval `[lower, upper]` around zero on which `|A r^2 + B r| <= xi_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl CoherenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn check_threshold(xi_c: f64) -> Result<()> {
    if xi_c > 0.0 && xi_c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("threshold {xi_c} must be positive")))
    }
}

fn quadratic_branch(a: f64, b: f64, xi_c: f64) -> bool {
    b * b <= 4.0 * a.abs() * xi_c * (1.0 + TIE_RTOL)
}

/// Smallest `r > 0` with `|a r^2 + b r| = xi_c`.
fn first_crossing(a: f64, b: f64, xi_c: f64) -> f64 {
    let (a, b) = if a < 0.0 { (-a, -b) } else { (a, b) };
    if a == 0.0 {
        return if b == 0.0 { f64::INFINITY } else { xi_c / b.abs() };
    }
    let plus = (b * b + 4.0 * a * xi_c).sqrt();
    if b >= 0.0 {
        2.0 * xi_c / (b + plus)
    } else if quadratic_branch(a, b, xi_c) {
        (-b + plus) / (2.0 * a)
    } else {
        let minus = (b * b - 4.0 * a * xi_c).max(0.0).sqrt();
        2.0 * xi_c / (-b + minus)
    }
}

pub fn coherence_interval(a: f64, b: f64, xi_c: f64) -> Result<CoherenceInterval> {
    check_threshold(xi_c)?;
    if a == 0.0 && b == 0.0 {
        return Err(Error::InfiniteCoherence);
    }
    Ok(CoherenceInterval {
        lower: -first_crossing(a, -b, xi_c),
        upper: first_crossing(a, b, xi_c),
    })
}

/// Width of the coherence interval of `A r^2 + B r` at threshold `xi_c`.
///
/// `sqrt(B^2 + 4|A| xi_c) / |A|` when `B^2 <= 4|A| xi_c`, otherwise
/// `4 xi_c / (sqrt(B^2 + 4|A| xi_c) + sqrt(B^2 - 4|A| xi_c))`, which tends to
/// `2 xi_c / |B|` as `A -> 0`.
pub fn coherence_length_1d(a: f64, b: f64, xi_c: f64) -> Result<f64> {
    check_threshold(xi_c)?;
    if a == 0.0 && b == 0.0 {
        return Err(Error::InfiniteCoherence);
    }
    let plus = (b * b + 4.0 * a.abs() * xi_c).sqrt();
    if a != 0.0 && quadratic_branch(a, b, xi_c) {
        Ok(plus / a.abs())
    } else {
        let minus = (b * b - 4.0 * a.abs() * xi_c).max(0.0).sqrt();
        Ok(4.0 * xi_c / (plus + minus))
    }
}

/// Coherence distance over the plane spanned by two orthonormal axes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub d_c: f64,
    pub argmin_angle: f64,
    pub argmin_direction: UnitVec3,
    pub xi_c: f64,
    pub coeffs: TaylorCoeffs,
    pub interval: CoherenceInterval,
    /// `(angle, length)` pairs sorted by angle in `[0, pi)`; infinite
    /// lengths mark directions of flat gain.
    pub profile: Vec<(f64, f64)>,
}

fn direction(axes: &(UnitVec3, UnitVec3), alpha: f64) -> Vec3 {
    axes.0.into_inner() * alpha.cos() + axes.1.into_inner() * alpha.sin()
}

fn length_at(coeffs: &TaylorCoeffs, axes: &(UnitVec3, UnitVec3), alpha: f64, xi_c: f64) -> Result<f64> {
    let (a, b) = coeffs.along(&direction(axes, alpha));
    match coherence_length_1d(a, b, xi_c) {
        Err(Error::InfiniteCoherence) => Ok(f64::INFINITY),
        other => other,
    }
}

fn golden_min<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum coherence length over directions `cos(a) u + sin(a) v`, sampled
/// at `a = k pi / M` and refined by golden-section search around the best
/// sample.
pub fn coherence_distance_from_coeffs(
    coeffs: TaylorCoeffs,
    axes: (UnitVec3, UnitVec3),
    xi_c: f64,
    angular_samples: usize,
) -> Result<CoherenceReport> {
    check_threshold(xi_c)?;
    if angular_samples < 8 {
        return Err(Error::InvalidArgument(format!(
            "angular_samples = {angular_samples} must be >= 8"
        )));
    }
    if axes.0.dot(&axes.1).abs() > 1e-9 {
        return Err(Error::InvalidArgument("plane axes must be orthogonal".into()));
    }
    let step = PI / angular_samples as f64;
    let mut profile = (0..angular_samples)
        .map(|k| {
            let alpha = k as f64 * step;
            length_at(&coeffs, &axes, alpha, xi_c).map(|len| (alpha, len))
        })
        .collect::<Result<Vec<_>>>()?;
    let (best_alpha, best_len) = profile
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("at least eight samples");
    if best_len.is_infinite() {
        return Err(Error::InfiniteCoherence);
    }

    let (refined, refined_len) = golden_min(best_alpha - step, best_alpha + step, GOLDEN_TOL, |alpha| {
        length_at(&coeffs, &axes, alpha, xi_c).unwrap_or(f64::INFINITY)
    });
    if refined_len < best_len {
        let alpha = refined.rem_euclid(PI);
        let at = profile.partition_point(|&(x, _)| x < alpha);
        if profile.get(at).map(|p| p.0) != Some(alpha) {
            profile.insert(at, (alpha, refined_len));
        }
    }

    let (argmin_angle, d_c) = profile
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty profile");
    let dir = direction(&axes, argmin_angle);
    let (a, b) = coeffs.along(&dir);
    let interval = coherence_interval(a, b, xi_c)?;
    Ok(CoherenceReport {
        d_c,
        argmin_angle,
        argmin_direction: normalize(&dir)?,
        xi_c,
        coeffs,
        interval,
        profile,
    })
}

pub fn coherence_distance(
    link: &LinkGeometry,
    axes: (UnitVec3, UnitVec3),
    xi_c: f64,
    angular_samples: usize,
) -> Result<CoherenceReport> {
    coherence_distance_from_coeffs(taylor_coeffs(link)?, axes, xi_c, angular_samples)
}

/// Which surface the element shifts are confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftPlane {
    /// The tilted reflecting surface, perpendicular to the link's aligned
    /// mirror normal.
    #[default]
    Mirror,
    /// The plane of the OIRS grid.
    Grid,
}

/// Orthonormal axes of `plane` for `link`; the first axis follows the grid's
/// `u` axis.
pub fn shift_axes(link: &LinkGeometry, grid: &OirsGrid, plane: ShiftPlane) -> Result<(UnitVec3, UnitVec3)> {
    match plane {
        ShiftPlane::Mirror => Ok(plane_axes(&link.aligned_normal()?, &grid.u().into_inner())),
        ShiftPlane::Grid => Ok((*grid.u(), *grid.v())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    fn fig4_link() -> LinkGeometry {
        LinkGeometry::new(
            Point3::new(1.0, 2.0, 3.0),
            Point3::new(1.0, 2.0, 1.5),
            Point3::new(2.0, 2.0, 0.0),
            normalize(&-Vec3::z()).unwrap(),
            normalize(&Vec3::z()).unwrap(),
            1.0,
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap()
    }

    fn basis() -> [Vec3; 3] {
        [Vec3::x(), Vec3::y(), Vec3::z()]
    }

    #[test]
    fn zero_shift_has_zero_growth() {
        let link = fig4_link();
        assert_eq!(growth_rate_exact(&link, &Vec3::zeros(), GainConstant::Unit).unwrap(), 0.0);
        let c = taylor_coeffs(&link).unwrap();
        assert_eq!(growth_rate_taylor(&c, &Vec3::zeros()), 0.0);
    }

    #[test]
    fn exact_growth_is_ratio_of_gains() {
        let link = fig4_link();
        let dr = Vec3::new(0.05, 0.0, 0.0);
        let h0 = point_gain(&link, GainConstant::Unit);
        let h1 = point_gain(&link.shifted(&dr).unwrap(), GainConstant::Unit);
        let xi = growth_rate_exact(&link, &dr, GainConstant::Unit).unwrap();
        assert!((xi - (h1 / h0 - 1.0)).abs() < 1e-15);
        let small = dr / 50.0;
        let fwd = growth_rate_exact(&link, &small, GainConstant::Unit).unwrap();
        let back = growth_rate_exact(&link, &-small, GainConstant::Unit).unwrap();
        assert!((fwd + back).abs() < 0.01 * fwd.abs());
    }

    #[test]
    fn growth_is_independent_of_gain_constant() {
        let link = fig4_link();
        let lam = GainConstant::Lambertian { reflectivity: 0.9, pd_area: 0.0025 };
        for dr in [Vec3::new(0.1, 0.0, 0.0), Vec3::new(0.0, 0.2, -0.1)] {
            let u = growth_rate_exact(&link, &dr, GainConstant::Unit).unwrap();
            let l = growth_rate_exact(&link, &dr, lam).unwrap();
            assert!((u - l).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_reference_gain_is_an_error() {
        let link = LinkGeometry::new(
            Point3::new(1.0, 2.0, 3.0),
            Point3::new(1.0, 2.0, 3.5),
            Point3::new(2.0, 2.0, 0.0),
            normalize(&-Vec3::z()).unwrap(),
            normalize(&Vec3::z()).unwrap(),
            1.0,
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap();
        assert_eq!(
            growth_rate_exact(&link, &Vec3::x(), GainConstant::Unit),
            Err(Error::ZeroGain)
        );
        assert!(matches!(taylor_coeffs(&link), Err(Error::SingularGeometry(_))));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let link = fig4_link();
        let c = taylor_coeffs(&link).unwrap();
        let r = 1e-5;
        for (k, e) in basis().iter().enumerate() {
            let fd = (growth_rate_exact(&link, &(e * r), GainConstant::Unit).unwrap()
                - growth_rate_exact(&link, &(e * -r), GainConstant::Unit).unwrap())
                / (2.0 * r);
            assert!((fd - c.s1[k]).abs() <= 1e-5 * c.s1[k].abs() + 1e-9, "{k}: {fd} vs {}", c.s1[k]);
        }
    }

    #[test]
    fn hessian_matches_second_differences() {
        let link = fig4_link();
        let c = taylor_coeffs(&link).unwrap();
        let r = 1e-4;
        let dirs = [Vec3::x(), Vec3::y(), Vec3::z(), Vec3::new(1.0, 1.0, 0.0).normalize(), Vec3::new(0.3, -0.5, 0.8).normalize()];
        for e in dirs {
            let fd = (growth_rate_exact(&link, &(e * r), GainConstant::Unit).unwrap()
                + growth_rate_exact(&link, &(e * -r), GainConstant::Unit).unwrap())
                / (r * r);
            let q = e.dot(&(c.s2 * e));
            assert!((fd - q).abs() <= 1e-4 * q.abs() + 1e-6, "{fd} vs {q}");
        }
        assert!((c.s2 - c.s2.transpose()).norm() <= 1e-12 * c.s2.norm());
    }

    #[test]
    fn normal_incidence_gradient_by_hand() {
        let d = 1.5;
        let link = LinkGeometry::new(
            Point3::new(0.0, 0.0, 2.0 * d),
            Point3::new(0.0, 0.0, d),
            Point3::new(0.0, 0.0, 0.0),
            normalize(&-Vec3::z()).unwrap(),
            normalize(&Vec3::z()).unwrap(),
            1.0,
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap();
        let c = taylor_coeffs(&link).unwrap();
        // Axial shifts keep the path length and both cosines: s1 = 0.
        assert!(c.s1.norm() < 1e-15);
        // Transverse: cos^2 terms and the path each give -x^2/d^2.
        assert!((c.s2[(0, 0)] + 4.0 / (d * d)).abs() < 1e-12);
        assert!((c.s2[(1, 1)] + 4.0 / (d * d)).abs() < 1e-12);
    }

    #[test]
    fn pure_linear_taylor() {
        let c = TaylorCoeffs { s1: Vec3::x(), s2: Matrix3::zeros() };
        assert!((growth_rate_taylor(&c, &Vec3::new(0.1, 0.0, 0.0)) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn remainder_is_third_order() {
        let link = fig4_link();
        let c = taylor_coeffs(&link).unwrap();
        let (a1, _) = shift_axes(&link, &crate::channel::SceneConfig::default().grid, ShiftPlane::Grid).unwrap();
        let e = a1.into_inner();
        let rem = |r: f64| {
            (growth_rate_exact(&link, &(e * r), GainConstant::Unit).unwrap() - c.growth(&(e * r))).abs()
        };
        for (big, small) in [(0.08, 0.04), (0.04, 0.02)] {
            let ratio = rem(big) / rem(small);
            assert!((4.0..=16.0).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn one_dimensional_examples() {
        assert!((coherence_length_1d(0.0, 1.0, 0.04).unwrap() - 0.08).abs() < 1e-15);
        assert!((coherence_length_1d(1.0, 0.0, 0.04).unwrap() - 0.4).abs() < 1e-15);
        assert!((coherence_length_1d(0.5, 0.1, 0.04).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(coherence_length_1d(0.0, 0.0, 0.04), Err(Error::InfiniteCoherence));
        assert!(coherence_length_1d(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn length_is_sign_symmetric() {
        for (a, b) in [(0.7, 0.2), (0.1, 3.0), (2.0, 0.01)] {
            let l = coherence_length_1d(a, b, 0.05).unwrap();
            for (sa, sb) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
                assert_eq!(coherence_length_1d(sa * a, sb * b, 0.05).unwrap(), l);
            }
        }
    }

    #[test]
    fn branches_jump_by_factor_two_at_the_boundary() {
        let (a, xi) = (0.8f64, 0.03);
        let b = (4.0 * a * xi).sqrt();
        let on = coherence_length_1d(a, b, xi).unwrap();
        let past = coherence_length_1d(a, b * (1.0 + 1e-9), xi).unwrap();
        assert!((on - 2f64.sqrt() * b / a).abs() < 1e-12 * on);
        assert!((past - b / (2f64.sqrt() * a)).abs() < 1e-4 * past);
        assert!((on / past - 2.0).abs() < 1e-4);
    }

    #[test]
    fn interval_width_matches_length_and_bounds_growth() {
        for (a, b) in [(0.5, 0.1), (-0.5, 0.1), (0.2, -1.0), (0.0, 2.0), (3.0, 0.0), (-1.0, -0.3)] {
            let xi = 0.04;
            let iv = coherence_interval(a, b, xi).unwrap();
            let len = coherence_length_1d(a, b, xi).unwrap();
            assert!((iv.width() - len).abs() <= 1e-12 * len, "{a} {b}");
            assert!(iv.lower < 0.0 && iv.upper > 0.0);
            for k in 0..=100 {
                let r = iv.lower + iv.width() * k as f64 / 100.0;
                assert!((a * r * r + b * r).abs() <= xi + 1e-9);
            }
        }
    }

    #[test]
    fn linear_only_coefficients_minimise_along_u() {
        let c = TaylorCoeffs { s1: Vec3::x(), s2: Matrix3::zeros() };
        let axes = (normalize(&Vec3::x()).unwrap(), normalize(&Vec3::z()).unwrap());
        let rep = coherence_distance_from_coeffs(c, axes, 0.04, 64).unwrap();
        assert!((rep.d_c - 0.08).abs() < 1e-12);
        assert!(rep.argmin_direction.x.abs() > 1.0 - 1e-9);
    }

    #[test]
    fn flat_coefficients_are_infinite() {
        let c = TaylorCoeffs { s1: Vec3::zeros(), s2: Matrix3::zeros() };
        let axes = (normalize(&Vec3::x()).unwrap(), normalize(&Vec3::z()).unwrap());
        assert_eq!(coherence_distance_from_coeffs(c, axes, 0.04, 16), Err(Error::InfiniteCoherence));
    }

    #[test]
    fn report_invariants_and_convergence() {
        let link = fig4_link();
        let grid = crate::channel::SceneConfig::default().grid;
        for plane in [ShiftPlane::Mirror, ShiftPlane::Grid] {
            let axes = shift_axes(&link, &grid, plane).unwrap();
            let normal = axes.0.cross(&axes.1);
            let coarse = coherence_distance(&link, axes, 0.04, 64).unwrap();
            let fine = coherence_distance(&link, axes, 0.04, 512).unwrap();
            assert!((coarse.d_c - fine.d_c).abs() <= 0.01 * fine.d_c);
            let min = coarse.profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            assert!((coarse.d_c - min).abs() <= 1e-12);
            assert!(coarse.argmin_direction.dot(&normal).abs() <= 1e-9);
            assert!(coarse.profile.windows(2).all(|w| w[0].0 < w[1].0));
            assert!((coarse.interval.width() - coarse.d_c).abs() <= 1e-9 * coarse.d_c);
        }
    }

    #[test]
    fn taylor_growth_stays_within_threshold_on_the_interval() {
        let link = fig4_link();
        let grid = crate::channel::SceneConfig::default().grid;
        let axes = shift_axes(&link, &grid, ShiftPlane::Mirror).unwrap();
        let rep = coherence_distance(&link, axes, 0.04, 128).unwrap();
        let e = rep.argmin_direction.into_inner();
        for k in 0..100 {
            let r = rep.interval.lower + rep.interval.width() * k as f64 / 99.0;
            assert!(rep.coeffs.growth(&(e * r)).abs() <= 0.04 + 1e-9);
        }
    }

    #[test]
    fn too_few_angles_rejected() {
        let link = fig4_link();
        let axes = (normalize(&Vec3::x()).unwrap(), normalize(&Vec3::z()).unwrap());
        assert!(coherence_distance(&link, axes, 0.04, 4).is_err());
    }
}
