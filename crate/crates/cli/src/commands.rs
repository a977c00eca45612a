//! Subcommand implementations.
//!
//! Every command is deterministic: outputs depend only on the inputs and the
//! config seed, never on wall-clock or environment, so repeated runs produce
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use dpbf_core::companion::{companion_ula, companion_ura};
use dpbf_core::pattern::{
    measure_hpbw, normalize_total_power, parallelity, polarization_ellipse, power, radiate,
    weighting_loss_db, AngularGrid, DualPolWeights, FieldPattern, PowerPattern, DB_FLOOR_DEFAULT,
};
use dpbf_core::synthesis::{
    synthesize_dpbf, synthesize_spbf, synthesize_ura, SynthesisError, SynthesisResult,
};
use dpbf_core::{tol, ArrayGeometry, ArrayKind, ElementPattern};
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{MetricsReport, METRICS_SCHEMA};
use crate::weights_io::{read_weights, write_weights, WeightsFile};
use crate::CliError;

fn db_floor(p: f64) -> f64 {
    dpbf_core::pattern::to_db(p, DB_FLOOR_DEFAULT)
}

fn map_synthesis_error(e: SynthesisError) -> CliError {
    match e {
        SynthesisError::Companion(inner) => CliError::Invariant(inner.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create output dir {}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Grid the verification metrics run on: the azimuth cut for linear arrays,
/// the full rectangle for rectangular ones.
fn verification_grid(kind: ArrayKind, step_deg: f64) -> Result<AngularGrid, CliError> {
    match kind {
        ArrayKind::Ula => AngularGrid::azimuth_cut_deg(-90.0, 90.0, step_deg),
        ArrayKind::Ura => AngularGrid::from_ranges_deg(-90.0, 90.0, -90.0, 90.0, step_deg),
    }
    .map_err(|e| CliError::Input(format!("grid: {e}")))
}

/// Companion-pair quality: parallelity on unit-energy weights, total-power
/// mismatch on the raw patterns relative to the first beam's peak.
fn pair_metrics(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    w1: &DualPolWeights,
    w2: &DualPolWeights,
    grid: &AngularGrid,
) -> Result<(f64, f64), CliError> {
    let f1 = radiate(geom, elem, w1, grid).map_err(|e| CliError::Input(e.to_string()))?;
    let f2 = radiate(geom, elem, w2, grid).map_err(|e| CliError::Input(e.to_string()))?;
    let xi_raw = parallelity(&f1, &f2).map_err(|e| CliError::Input(e.to_string()))?;
    // Parallelity is bilinear in the fields, so unit-energy normalization is
    // a scale factor rather than a second radiation pass.
    let scale = (w1.energy() * w2.energy()).sqrt();
    let max_xi = if scale > 0.0 {
        xi_raw.iter().fold(0.0f64, |m, v| m.max(v / scale))
    } else {
        0.0
    };
    let p1 = power(&f1);
    let p2 = power(&f2);
    let peak = p1.p_total.iter().fold(0.0f64, |m, &v| m.max(v));
    if peak <= 0.0 {
        return Err(CliError::Invariant("first beam radiates no power".to_string()));
    }
    let max_mismatch = p1
        .p_total
        .iter()
        .zip(p2.p_total.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs() / peak));
    Ok((max_xi, max_mismatch))
}

#[derive(Serialize)]
struct PatternRow {
    theta_deg: f64,
    phi_deg: f64,
    p_total_db: f64,
    p_a_db: f64,
    p_b_db: f64,
    /// `None` in JSON (null) when the ellipse is degenerate or linear.
    axis_ratio: Option<f64>,
    tilt_deg: f64,
    linear_flag: u8,
}

fn pattern_rows(grid: &AngularGrid, p: &PowerPattern, f: &FieldPattern) -> Vec<PatternRow> {
    let mut rows = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let dir = grid.direction(idx);
        let (axis_ratio, tilt_deg, linear) = match polarization_ellipse(f.e_a[idx], f.e_b[idx]) {
            Ok(e) => (e.axis_ratio, e.tilt_deg, e.linear),
            // No field at this point: report as degenerate linear.
            Err(_) => (f64::INFINITY, 0.0, true),
        };
        rows.push(PatternRow {
            theta_deg: dir.theta.to_degrees(),
            phi_deg: dir.phi.to_degrees(),
            p_total_db: db_floor(p.p_total[idx]),
            p_a_db: db_floor(p.p_a[idx]),
            p_b_db: db_floor(p.p_b[idx]),
            axis_ratio: axis_ratio.is_finite().then_some(axis_ratio),
            tilt_deg,
            linear_flag: linear as u8,
        });
    }
    rows
}

fn render_pattern(rows: &[PatternRow], format: &str) -> Result<String, CliError> {
    if format == "json" {
        return serde_json::to_string_pretty(rows)
            .map_err(|e| CliError::Invariant(format!("cannot serialize pattern: {e}")));
    }
    let mut out = String::from("theta_deg,phi_deg,p_total_db,p_a_db,p_b_db,axis_ratio,tilt_deg,linear_flag\n");
    for r in rows {
        let axis = match r.axis_ratio {
            Some(v) => format!("{v:.6}"),
            None => "inf".to_string(),
        };
        out.push_str(&format!(
            "{:.3},{:.3},{:.6},{:.6},{:.6},{},{:.6},{}\n",
            r.theta_deg, r.phi_deg, r.p_total_db, r.p_a_db, r.p_b_db, axis, r.tilt_deg, r.linear_flag
        ));
    }
    Ok(out)
}

/// Radiate, normalize to total power 2 pi, and render rows for export.
fn export_pattern(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    w: &DualPolWeights,
    grid: &AngularGrid,
    format: &str,
) -> Result<String, CliError> {
    let f = radiate(geom, elem, w, grid).map_err(|e| CliError::Input(e.to_string()))?;
    let p = power(&f);
    let p = normalize_total_power(&p, grid, 2.0 * std::f64::consts::PI)
        .map_err(|e| CliError::Invariant(e.to_string()))?;
    render_pattern(&pattern_rows(grid, &p, &f), format)
}

fn pattern_filename(format: &str) -> &'static str {
    if format == "json" {
        "pattern.json"
    } else {
        "pattern.csv"
    }
}

pub fn cmd_synthesize(cfg: &RunConfig) -> Result<(), CliError> {
    let geom = cfg.geometry()?;
    let elem = cfg.element()?;
    let syn = cfg.synthesis_config()?;
    let grid = cfg.evaluation_grid()?;

    let result: SynthesisResult = match geom.kind() {
        ArrayKind::Ula => {
            let target = cfg.azimuth_target()?;
            match cfg.synthesis.method.as_str() {
                "spbf" => synthesize_spbf(&geom, &elem, &target, &grid, &syn),
                _ => synthesize_dpbf(&geom, &elem, &target, &grid, &syn),
            }
            .map_err(map_synthesis_error)?
        }
        ArrayKind::Ura => {
            if grid.n_theta() < 2 {
                return Err(CliError::Input(
                    "grid.theta_min_deg/theta_max_deg: rectangular synthesis needs a theta range"
                        .to_string(),
                ));
            }
            let t_az = cfg.azimuth_target()?;
            let t_el = cfg.elevation_target()?;
            synthesize_ura(&geom, &elem, &t_az, &t_el, &grid, &syn, cfg.ura_mode())
                .map_err(map_synthesis_error)?
        }
    };

    let out_dir = PathBuf::from(&cfg.output.dir);
    ensure_dir(&out_dir)?;
    write_weights(&out_dir.join("weights.txt"), &geom, &result.weights)?;

    let rendered = export_pattern(&geom, &elem, &result.weights, &grid, &cfg.output.format)?;
    write_text(&out_dir.join(pattern_filename(&cfg.output.format)), &rendered)?;

    // The companion beam exists for every synthesis result; its agreement
    // metrics go into the report.
    let companion = match geom.kind() {
        ArrayKind::Ula => companion_ula(&result.weights),
        ArrayKind::Ura => companion_ura(&result.weights),
    }
    .map_err(|e| CliError::Invariant(e.to_string()))?;
    let (max_xi, max_mismatch) = pair_metrics(&geom, &elem, &result.weights, &companion, &grid)?;

    let report = MetricsReport {
        schema: METRICS_SCHEMA,
        weighting_loss_db: weighting_loss_db(&result.weights),
        cost1: Some(result.cost1),
        cost2: Some(result.cost2),
        measured_hpbw_deg: result.measured_hpbw_deg,
        max_parallelity: max_xi,
        max_power_mismatch: max_mismatch,
        seed: result.seed,
        config: cfg.clone(),
    };
    write_text(&out_dir.join("metrics.json"), &report.to_json()?)?;
    Ok(())
}

pub struct WeightsCommandOptions {
    pub grid_step_deg: f64,
    pub hpbw_az_deg: f64,
    pub hpbw_el_deg: f64,
    pub out_dir: PathBuf,
    pub format: String,
}

fn element_from_options(opts: &WeightsCommandOptions) -> Result<ElementPattern, CliError> {
    ElementPattern::new(opts.hpbw_az_deg, opts.hpbw_el_deg)
        .map_err(|e| CliError::Input(format!("element: {e}")))
}

pub fn cmd_companion(
    input: &Path,
    output: &Path,
    opts: &WeightsCommandOptions,
) -> Result<(), CliError> {
    let WeightsFile { geometry, weights } = read_weights(input)?;
    let elem = element_from_options(opts)?;
    let companion = match geometry.kind() {
        ArrayKind::Ula => companion_ula(&weights),
        ArrayKind::Ura => companion_ura(&weights),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    write_weights(output, &geometry, &companion)?;

    let grid = verification_grid(geometry.kind(), opts.grid_step_deg)?;
    let (max_xi, max_mismatch) = pair_metrics(&geometry, &elem, &weights, &companion, &grid)?;
    let report = MetricsReport {
        schema: METRICS_SCHEMA,
        weighting_loss_db: weighting_loss_db(&companion),
        cost1: None,
        cost2: None,
        measured_hpbw_deg: None,
        max_parallelity: max_xi,
        max_power_mismatch: max_mismatch,
        seed: 0,
        config: RunConfig::echo_for_weights(
            &geometry,
            opts.hpbw_az_deg,
            opts.hpbw_el_deg,
            opts.grid_step_deg,
        ),
    };
    ensure_dir(&opts.out_dir)?;
    write_text(&opts.out_dir.join("metrics.json"), &report.to_json()?)?;
    Ok(())
}

pub fn cmd_pattern(weights_path: &Path, opts: &WeightsCommandOptions) -> Result<(), CliError> {
    let WeightsFile { geometry, weights } = read_weights(weights_path)?;
    let elem = element_from_options(opts)?;
    let grid = verification_grid(geometry.kind(), opts.grid_step_deg)?;
    let rendered = export_pattern(&geometry, &elem, &weights, &grid, &opts.format)?;
    ensure_dir(&opts.out_dir)?;
    write_text(&opts.out_dir.join(pattern_filename(&opts.format)), &rendered)?;
    Ok(())
}

/// Check a weights file (with its companion, computed or supplied) against
/// the library tolerances. Prints the metrics JSON to stdout; a violated
/// tolerance is an invariant failure (exit 1).
pub fn cmd_verify(
    weights_path: &Path,
    companion_path: Option<&Path>,
    opts: &WeightsCommandOptions,
) -> Result<(), CliError> {
    let WeightsFile { geometry, weights } = read_weights(weights_path)?;
    let elem = element_from_options(opts)?;
    let companion = match companion_path {
        Some(path) => {
            let second = read_weights(path)?;
            if second.geometry != geometry {
                return Err(CliError::Input(format!(
                    "weights files declare different geometries: {} vs {}",
                    weights_path.display(),
                    path.display()
                )));
            }
            second.weights
        }
        None => match geometry.kind() {
            ArrayKind::Ula => companion_ula(&weights),
            ArrayKind::Ura => companion_ura(&weights),
        }
        .map_err(|e| CliError::Input(e.to_string()))?,
    };

    let grid = verification_grid(geometry.kind(), opts.grid_step_deg)?;
    let (max_xi, max_mismatch) = pair_metrics(&geometry, &elem, &weights, &companion, &grid)?;

    // Beamwidth of the first beam's azimuth cut, when it has one.
    let az_grid = AngularGrid::azimuth_cut_deg(-90.0, 90.0, opts.grid_step_deg)
        .map_err(|e| CliError::Input(format!("grid: {e}")))?;
    let measured_hpbw_deg = radiate(&geometry, &elem, &weights, &az_grid)
        .ok()
        .and_then(|f| measure_hpbw(&power(&f), &az_grid).ok());

    let report = MetricsReport {
        schema: METRICS_SCHEMA,
        weighting_loss_db: weighting_loss_db(&weights),
        cost1: None,
        cost2: None,
        measured_hpbw_deg,
        max_parallelity: max_xi,
        max_power_mismatch: max_mismatch,
        seed: 0,
        config: RunConfig::echo_for_weights(
            &geometry,
            opts.hpbw_az_deg,
            opts.hpbw_el_deg,
            opts.grid_step_deg,
        ),
    };
    let json = report.to_json()?;
    {
        use std::io::Write;
        // A closed pipe downstream is not an error worth failing over.
        if let Err(e) = writeln!(std::io::stdout(), "{json}") {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                return Err(CliError::Input(format!("cannot write to stdout: {e}")));
            }
        }
    }

    if max_xi > tol::PARALLELITY_TOL {
        return Err(CliError::Invariant(format!(
            "max_parallelity {max_xi:e} exceeds {:e}",
            tol::PARALLELITY_TOL
        )));
    }
    if max_mismatch > tol::POWER_IDENTITY_REL_TOL {
        return Err(CliError::Invariant(format!(
            "max_power_mismatch {max_mismatch:e} exceeds {:e}",
            tol::POWER_IDENTITY_REL_TOL
        )));
    }
    Ok(())
}
