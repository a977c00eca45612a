//! TOML run configuration with a versioned schema.
//!
//! Every section defaults to the reference desk-scale setup (4-element
//! half-wavelength ULA, 90 degree Gaussian elements, 65 degree Gaussian
//! target, phase-only conjugate-paired synthesis with 20 restarts), so a
//! config file only has to name what it changes. Unknown keys are rejected.

use std::fs;
use std::path::Path;

use dpbf_core::companion::CompositionMode;
use dpbf_core::pattern::AngularGrid;
use dpbf_core::synthesis::{SynthesisConfig, TaperMode, TargetPattern};
use dpbf_core::{ArrayGeometry, ArrayKind, ElementPattern};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONFIG_SCHEMA: &str = "dpbf-config/1";

fn input(msg: String) -> CliError {
    CliError::Input(msg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub schema: String,
    pub array: ArraySection,
    pub element: ElementSection,
    pub target: TargetSection,
    pub synthesis: SynthesisSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: CONFIG_SCHEMA.to_string(),
            array: ArraySection::default(),
            element: ElementSection::default(),
            target: TargetSection::default(),
            synthesis: SynthesisSection::default(),
            grid: GridSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    /// "ula" or "ura".
    pub kind: String,
    pub n_cols: usize,
    pub n_rows: usize,
    pub col_spacing_wl: f64,
    pub row_spacing_wl: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            kind: "ula".to_string(),
            n_cols: 4,
            n_rows: 1,
            col_spacing_wl: 0.5,
            row_spacing_wl: 0.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElementSection {
    pub hpbw_az_deg: f64,
    pub hpbw_el_deg: f64,
}

impl Default for ElementSection {
    fn default() -> Self {
        ElementSection { hpbw_az_deg: 90.0, hpbw_el_deg: 90.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TargetSection {
    /// "gaussian" or "tabulated".
    pub shape: String,
    /// Azimuth beamwidth of a Gaussian target.
    pub hpbw_deg: f64,
    /// Elevation beamwidth of a Gaussian target (rectangular arrays).
    pub hpbw_el_deg: f64,
    /// dB samples aligned with the evaluation grid ("tabulated" shape).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_db: Option<Vec<f64>>,
}

impl Default for TargetSection {
    fn default() -> Self {
        TargetSection {
            shape: "gaussian".to_string(),
            hpbw_deg: 65.0,
            hpbw_el_deg: 65.0,
            samples_db: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthesisSection {
    /// "dpbf" or "spbf" (linear arrays; rectangular arrays use `ura_mode`).
    pub method: String,
    /// "phase-only" or "amplitude-and-phase".
    pub taper_mode: String,
    pub conjugate_pair: bool,
    pub cost_window_db: f64,
    pub cost_weights: [f64; 2],
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// "dpbf-both" or "spbf-elevation" (rectangular arrays).
    pub ura_mode: String,
}

impl Default for SynthesisSection {
    fn default() -> Self {
        SynthesisSection {
            method: "dpbf".to_string(),
            taper_mode: "phase-only".to_string(),
            conjugate_pair: true,
            cost_window_db: 10.0,
            cost_weights: [1.0, 1.0],
            restarts: 20,
            max_evals: 2000,
            seed: 1,
            tolerance: 1e-10,
            ura_mode: "dpbf-both".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub step_deg: f64,
    pub phi_min_deg: f64,
    pub phi_max_deg: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            step_deg: 1.0,
            phi_min_deg: -90.0,
            phi_max_deg: 90.0,
            theta_min_deg: 0.0,
            theta_max_deg: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    /// "csv" or "json".
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: ".".to_string(), format: "csv".to_string() }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| input(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level checks beyond what deserialization enforces. Messages
    /// name the offending key.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != CONFIG_SCHEMA {
            return Err(input(format!("schema must be \"{CONFIG_SCHEMA}\", got \"{}\"", self.schema)));
        }
        match self.array.kind.as_str() {
            "ula" | "ura" => {}
            other => return Err(input(format!("array.kind must be \"ula\" or \"ura\", got \"{other}\""))),
        }
        if self.array.n_cols == 0 {
            return Err(input("array.n_cols must be >= 1".to_string()));
        }
        if self.array.n_rows == 0 {
            return Err(input("array.n_rows must be >= 1".to_string()));
        }
        if self.array.kind == "ula" && self.array.n_rows != 1 {
            return Err(input("array.n_rows must be 1 when array.kind is \"ula\"".to_string()));
        }
        if !(self.array.col_spacing_wl.is_finite() && self.array.col_spacing_wl > 0.0) {
            return Err(input("array.col_spacing_wl must be > 0".to_string()));
        }
        if !(self.array.row_spacing_wl.is_finite() && self.array.row_spacing_wl > 0.0) {
            return Err(input("array.row_spacing_wl must be > 0".to_string()));
        }
        for (key, v) in [
            ("element.hpbw_az_deg", self.element.hpbw_az_deg),
            ("element.hpbw_el_deg", self.element.hpbw_el_deg),
        ] {
            if !(v.is_finite() && v > 0.0 && v <= 180.0) {
                return Err(input(format!("{key} must lie in (0, 180]")));
            }
        }
        match self.target.shape.as_str() {
            "gaussian" => {
                for (key, v) in [
                    ("target.hpbw_deg", self.target.hpbw_deg),
                    ("target.hpbw_el_deg", self.target.hpbw_el_deg),
                ] {
                    if !(v.is_finite() && v > 0.0 && v <= 180.0) {
                        return Err(input(format!("{key} must lie in (0, 180]")));
                    }
                }
            }
            "tabulated" => {
                let samples = self
                    .target
                    .samples_db
                    .as_ref()
                    .ok_or_else(|| input("target.samples_db is required when target.shape is \"tabulated\"".to_string()))?;
                if samples.is_empty() {
                    return Err(input("target.samples_db must not be empty".to_string()));
                }
                if samples.iter().any(|v| !v.is_finite()) {
                    return Err(input("target.samples_db must contain only finite dB values".to_string()));
                }
            }
            other => {
                return Err(input(format!(
                    "target.shape must be \"gaussian\" or \"tabulated\", got \"{other}\""
                )))
            }
        }
        match self.synthesis.method.as_str() {
            "dpbf" | "spbf" => {}
            other => {
                return Err(input(format!(
                    "synthesis.method must be \"dpbf\" or \"spbf\", got \"{other}\""
                )))
            }
        }
        match self.synthesis.taper_mode.as_str() {
            "phase-only" | "amplitude-and-phase" => {}
            other => {
                return Err(input(format!(
                    "synthesis.taper_mode must be \"phase-only\" or \"amplitude-and-phase\", got \"{other}\""
                )))
            }
        }
        match self.synthesis.ura_mode.as_str() {
            "dpbf-both" | "spbf-elevation" => {}
            other => {
                return Err(input(format!(
                    "synthesis.ura_mode must be \"dpbf-both\" or \"spbf-elevation\", got \"{other}\""
                )))
            }
        }
        if self.synthesis.restarts == 0 {
            return Err(input("synthesis.restarts must be >= 1".to_string()));
        }
        if self.synthesis.max_evals == 0 {
            return Err(input("synthesis.max_evals must be >= 1".to_string()));
        }
        if !(self.synthesis.cost_window_db.is_finite() && self.synthesis.cost_window_db > 0.0) {
            return Err(input("synthesis.cost_window_db must be > 0".to_string()));
        }
        let [l1, l2] = self.synthesis.cost_weights;
        if !(l1.is_finite() && l2.is_finite() && l1 >= 0.0 && l2 >= 0.0) {
            return Err(input("synthesis.cost_weights must be finite and >= 0".to_string()));
        }
        if l1 == 0.0 && l2 == 0.0 {
            return Err(input("synthesis.cost_weights must not both be 0".to_string()));
        }
        if !(self.synthesis.tolerance.is_finite() && self.synthesis.tolerance >= 0.0) {
            return Err(input("synthesis.tolerance must be >= 0".to_string()));
        }
        if !(self.grid.step_deg.is_finite() && self.grid.step_deg > 0.0) {
            return Err(input("grid.step_deg must be > 0".to_string()));
        }
        if !(self.grid.phi_min_deg < self.grid.phi_max_deg) {
            return Err(input("grid.phi_min_deg must be < grid.phi_max_deg".to_string()));
        }
        if !(self.grid.theta_min_deg <= self.grid.theta_max_deg) {
            return Err(input("grid.theta_min_deg must be <= grid.theta_max_deg".to_string()));
        }
        match self.output.format.as_str() {
            "csv" | "json" => {}
            other => {
                return Err(input(format!(
                    "output.format must be \"csv\" or \"json\", got \"{other}\""
                )))
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ArrayGeometry, CliError> {
        match self.array.kind.as_str() {
            "ula" => ArrayGeometry::ula(self.array.n_cols, self.array.col_spacing_wl),
            _ => ArrayGeometry::ura(
                self.array.n_rows,
                self.array.n_cols,
                self.array.row_spacing_wl,
                self.array.col_spacing_wl,
            ),
        }
        .map_err(|e| input(format!("array: {e}")))
    }

    pub fn element(&self) -> Result<ElementPattern, CliError> {
        ElementPattern::new(self.element.hpbw_az_deg, self.element.hpbw_el_deg)
            .map_err(|e| input(format!("element: {e}")))
    }

    pub fn evaluation_grid(&self) -> Result<AngularGrid, CliError> {
        AngularGrid::from_ranges_deg(
            self.grid.theta_min_deg,
            self.grid.theta_max_deg,
            self.grid.phi_min_deg,
            self.grid.phi_max_deg,
            self.grid.step_deg,
        )
        .map_err(|e| input(format!("grid: {e}")))
    }

    pub fn azimuth_target(&self) -> Result<TargetPattern, CliError> {
        match self.target.shape.as_str() {
            "gaussian" => TargetPattern::gaussian(self.target.hpbw_deg),
            _ => TargetPattern::tabulated(self.target.samples_db.clone().unwrap_or_default()),
        }
        .map_err(|e| input(format!("target: {e}")))
    }

    pub fn elevation_target(&self) -> Result<TargetPattern, CliError> {
        if self.target.shape != "gaussian" {
            return Err(input(
                "target.shape: rectangular synthesis supports only \"gaussian\" targets".to_string(),
            ));
        }
        TargetPattern::gaussian(self.target.hpbw_el_deg)
            .map_err(|e| input(format!("target: {e}")))
    }

    pub fn synthesis_config(&self) -> Result<SynthesisConfig, CliError> {
        let taper_mode = match self.synthesis.taper_mode.as_str() {
            "phase-only" => TaperMode::PhaseOnly,
            _ => TaperMode::AmplitudeAndPhase,
        };
        let cfg = SynthesisConfig {
            taper_mode,
            conjugate_pair: self.synthesis.conjugate_pair,
            cost_window_db: self.synthesis.cost_window_db,
            cost_weights: (self.synthesis.cost_weights[0], self.synthesis.cost_weights[1]),
            restarts: self.synthesis.restarts,
            max_evals: self.synthesis.max_evals,
            seed: self.synthesis.seed,
            tolerance: self.synthesis.tolerance,
        };
        cfg.validate().map_err(|e| input(format!("synthesis: {e}")))?;
        Ok(cfg)
    }

    pub fn ura_mode(&self) -> CompositionMode {
        match self.synthesis.ura_mode.as_str() {
            "spbf-elevation" => CompositionMode::SpbfElevation,
            _ => CompositionMode::DpbfBoth,
        }
    }

    /// Echo helper for commands that start from a weights file instead of a
    /// config: defaults overlaid with the file's geometry and the flags in
    /// effect.
    pub fn echo_for_weights(
        geom: &ArrayGeometry,
        hpbw_az_deg: f64,
        hpbw_el_deg: f64,
        step_deg: f64,
    ) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.array.kind = match geom.kind() {
            ArrayKind::Ula => "ula".to_string(),
            ArrayKind::Ura => "ura".to_string(),
        };
        cfg.array.n_cols = geom.n_cols();
        cfg.array.n_rows = geom.n_rows();
        cfg.array.col_spacing_wl = geom.col_spacing_wl();
        cfg.array.row_spacing_wl = geom.row_spacing_wl();
        cfg.element.hpbw_az_deg = hpbw_az_deg;
        cfg.element.hpbw_el_deg = hpbw_el_deg;
        cfg.grid.step_deg = step_deg;
        if geom.kind() == ArrayKind::Ura {
            cfg.grid.theta_min_deg = -90.0;
            cfg.grid.theta_max_deg = 90.0;
        }
        cfg
    }
}
