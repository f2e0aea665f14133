use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{GainConstantMode, LinkGeometry, SceneConfig, TruthModel};
use crate::coherence::ShiftPlane;
use crate::error::{Error, Result};
use crate::geometry::{normalize, OirsGrid, Point3, Vec3};

type Triple = [f64; 3];

fn point(t: &Triple) -> Point3 {
    Point3::new(t[0], t[1], t[2])
}

fn vector(t: &Triple) -> Vec3 {
    Vec3::new(t[0], t[1], t[2])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub center: Triple,
    pub u: Triple,
    pub v: Triple,
    pub rows: usize,
    pub cols: usize,
    pub element_size: f64,
    pub element_pitch: f64,
    pub reflectivity: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            center: [2.0, 0.0, 1.5],
            u: [1.0, 0.0, 0.0],
            v: [0.0, 0.0, -1.0],
            rows: 24,
            cols: 24,
            element_size: 0.05,
            element_pitch: 0.1,
            reflectivity: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneSection {
    pub room: Triple,
    pub led_positions: Vec<Triple>,
    pub led_normal: Triple,
    pub lambertian_order: f64,
    pub pd_positions: Vec<Triple>,
    pub pd_normal: Triple,
    pub pd_side: f64,
    pub fov_deg: f64,
    pub gain_constant: GainConstantMode,
    pub grid: GridSection,
}

impl Default for SceneSection {
    fn default() -> Self {
        Self {
            room: [4.0, 4.0, 3.0],
            led_positions: vec![[0.9, 2.0, 3.0], [1.1, 2.0, 3.0]],
            led_normal: [0.0, 0.0, -1.0],
            lambertian_order: 1.0,
            pd_positions: vec![[1.8, 2.0, 0.0], [2.2, 2.0, 0.0]],
            pd_normal: [0.0, 0.0, 1.0],
            pd_side: 0.05,
            fov_deg: 90.0,
            gain_constant: GainConstantMode::Unit,
            grid: GridSection::default(),
        }
    }
}

/// Single link used by the gain-profile and coherence experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub led: Triple,
    pub pd: Triple,
    pub element: Triple,
}

impl Default for LinkSection {
    fn default() -> Self {
        Self {
            led: [1.0, 2.0, 3.0],
            pd: [2.0, 2.0, 0.0],
            element: [1.0, 2.0, 1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoherenceSection {
    pub xi_c: f64,
    pub angular_samples: usize,
    pub plane: ShiftPlane,
}

impl Default for CoherenceSection {
    fn default() -> Self {
        Self {
            xi_c: 0.04,
            angular_samples: 256,
            plane: ShiftPlane::Mirror,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Section {
    pub shift_extent: f64,
    pub shift_points: usize,
    pub quadrature_order: usize,
}

impl Default for Fig4Section {
    fn default() -> Self {
        Self {
            shift_extent: 1.0,
            shift_points: 201,
            quadrature_order: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthKind {
    Point,
    #[default]
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimationSection {
    pub spacings: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub pilots: usize,
    pub pilot_power: f64,
    pub master_seed: u64,
    pub truth_model: TruthKind,
    pub quadrature_order: usize,
}

impl Default for EstimationSection {
    fn default() -> Self {
        Self {
            spacings: vec![2, 3, 4],
            sigmas: vec![1e-6, 1e-5, 1e-4, 1e-3, 1e-2],
            trials: 100,
            pilots: 100,
            pilot_power: 1.0,
            master_seed: 2024,
            truth_model: TruthKind::Quadrature,
            quadrature_order: 8,
        }
    }
}

impl EstimationSection {
    pub fn truth(&self) -> TruthModel {
        match self.truth_model {
            TruthKind::Point => TruthModel::Point,
            TruthKind::Quadrature => TruthModel::Quadrature(self.quadrature_order),
        }
    }

    /// Baseline spacing 1 followed by the configured spacings, deduplicated.
    pub fn spacings_with_baseline(&self) -> Vec<usize> {
        let mut out = vec![1];
        for &s in &self.spacings {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

/// Complete experiment configuration; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    pub scene: SceneSection,
    pub link: LinkSection,
    pub coherence: CoherenceSection,
    pub fig4: Fig4Section,
    pub estimation: EstimationSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("results"),
            scene: SceneSection::default(),
            link: LinkSection::default(),
            coherence: CoherenceSection::default(),
            fig4: Fig4Section::default(),
            estimation: EstimationSection::default(),
        }
    }
}

fn positive(key: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be positive, got {x}")))
    }
}

fn relabel(key: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Config { .. } => e,
        other => Error::config(key, other.to_string()),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scene_config()?;
        self.link_geometry()?;
        positive("coherence.xi_c", self.coherence.xi_c)?;
        if self.coherence.angular_samples < 8 {
            return Err(Error::config("coherence.angular_samples", "must be >= 8"));
        }
        positive("fig4.shift_extent", self.fig4.shift_extent)?;
        if self.fig4.shift_points < 3 || self.fig4.shift_points % 2 == 0 {
            return Err(Error::config(
                "fig4.shift_points",
                "must be odd and >= 3 so that the profile contains zero shift",
            ));
        }
        if self.fig4.quadrature_order == 0 {
            return Err(Error::config("fig4.quadrature_order", "must be >= 1"));
        }
        let est = &self.estimation;
        if let Some(i) = est.spacings.iter().position(|&s| s == 0) {
            return Err(Error::config(format!("estimation.spacings[{i}]"), "must be >= 1"));
        }
        if let Some(i) = est.sigmas.iter().position(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::config(
                format!("estimation.sigmas[{i}]"),
                format!("must be >= 0, got {}", est.sigmas[i]),
            ));
        }
        if est.trials == 0 {
            return Err(Error::config("estimation.trials", "must be >= 1"));
        }
        if est.pilots < self.scene.led_positions.len() {
            return Err(Error::config(
                "estimation.pilots",
                format!(
                    "{} pilot slots cannot identify {} LEDs",
                    est.pilots,
                    self.scene.led_positions.len()
                ),
            ));
        }
        positive("estimation.pilot_power", est.pilot_power)?;
        if est.quadrature_order == 0 {
            return Err(Error::config("estimation.quadrature_order", "must be >= 1"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<OirsGrid> {
        let g = &self.scene.grid;
        OirsGrid::new(
            point(&g.center),
            vector(&g.u),
            vector(&g.v),
            g.rows,
            g.cols,
            g.element_size,
            g.element_pitch,
            g.reflectivity,
        )
        .map_err(relabel("scene.grid"))
    }

    pub fn scene_config(&self) -> Result<SceneConfig> {
        let s = &self.scene;
        if !(s.fov_deg > 0.0 && s.fov_deg <= 90.0) {
            return Err(Error::config("scene.fov_deg", format!("must lie in (0, 90], got {}", s.fov_deg)));
        }
        let scene = SceneConfig {
            room: vector(&s.room),
            led_positions: s.led_positions.iter().map(point).collect(),
            led_normal: normalize(&vector(&s.led_normal)).map_err(relabel("scene.led_normal"))?,
            lambertian_order: s.lambertian_order,
            pd_positions: s.pd_positions.iter().map(point).collect(),
            pd_normal: normalize(&vector(&s.pd_normal)).map_err(relabel("scene.pd_normal"))?,
            pd_side: s.pd_side,
            fov_semi_angle: s.fov_deg.to_radians(),
            grid: self.grid()?,
            gain_constant: s.gain_constant,
        };
        scene.validate().map_err(relabel("scene"))?;
        Ok(scene)
    }

    /// The single link of `[link]` with the scene's normals, order and
    /// field of view.
    pub fn link_geometry(&self) -> Result<LinkGeometry> {
        let s = &self.scene;
        let link = LinkGeometry::new(
            point(&self.link.led),
            point(&self.link.element),
            point(&self.link.pd),
            normalize(&vector(&s.led_normal)).map_err(relabel("scene.led_normal"))?,
            normalize(&vector(&s.pd_normal)).map_err(relabel("scene.pd_normal"))?,
            s.lambertian_order,
            s.fov_deg.to_radians(),
        )
        .map_err(relabel("link"))?;
        link.aligned_normal().map_err(relabel("link"))?;
        Ok(link)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serialisable")
    }

    /// SHA-256 of the canonical TOML serialisation.
    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
