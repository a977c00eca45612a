//! Multi-objective wide-beam synthesis.
//!
//! Two costs: the sample variance of the dB difference between the
//! synthesized and target patterns over the target's top window (shape
//! fidelity), and the weighting loss in dB (amplifier power usage). They are
//! scalarized as a weighted sum and minimized by multi-start Nelder-Mead.
//!
//! Single-polarization synthesis (SPBF) optimizes free complex weights on
//! one polarization and needs an amplitude taper to widen the beam.
//! Dual-polarization synthesis (DPBF) optimizes phases only; with the
//! conjugate pairing `w_b = conj(w_a)` the total pattern is shaped purely by
//! how power splits between the polarizations, the weighting loss is exactly
//! 0 dB, and the second cost vanishes by construction.
//!
//! Everything is deterministic: restart initializations come from a counter
//! mode stream cipher keyed by the config seed, each restart on its own
//! stream, and the final argmin is ordered by (cost, restart index).
//!
//! Cost-1 evaluation pipeline, fixed: evaluate both patterns on the grid,
//! normalize each to total power 2 pi by the trapezoidal rule, convert to dB
//! with the -60 dB floor, keep grid points where the target is within the
//! window of its peak, take the sample variance (n-1 denominator) of the
//! difference. The variance removes constant dB offsets, so the result is
//! invariant to common scaling of either pattern.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;

use num_complex::Complex64;
// Inherent f64 methods shadow this under std; no_std resolves through it.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::array::{cis, ArrayGeometry, ArrayKind, ElementPattern};
use crate::companion::{compose_ura, CompanionError, CompositionMode, UraComposition};
use crate::pattern::{
    integrate_samples, integrate_total_power, measure_hpbw, power, radiate, to_db,
    weighting_loss_db, AngularGrid, DualPolWeights, PatternError, PowerPattern,
    DB_FLOOR_DEFAULT,
};
use crate::simplex::{nelder_mead, SimplexOptions};

/// Coordinate offset used to build initial simplices from a random start.
const INIT_STEP: f64 = 0.25;

/// Errors from synthesis configuration and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisError {
    /// Configuration violates an invariant (message names the field).
    InvalidConfig(&'static str),
    /// Target specification is invalid.
    BadTarget(&'static str),
    /// Tabulated target length does not match the grid.
    TargetGridMismatch { expected: usize, got: usize },
    /// Geometry kind unsupported by the requested synthesis.
    UnsupportedGeometry(&'static str),
    /// No grid points fall inside the cost window.
    EmptyWindow,
    /// Pattern-level failure.
    Pattern(PatternError),
    /// Companion or composition failure (includes partition violations).
    Companion(CompanionError),
}

impl fmt::Display for SynthesisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthesisError::InvalidConfig(what) => write!(f, "invalid config: {what}"),
            SynthesisError::BadTarget(what) => write!(f, "bad target: {what}"),
            SynthesisError::TargetGridMismatch { expected, got } => write!(
                f,
                "tabulated target has {got} samples but the grid has {expected} points"
            ),
            SynthesisError::UnsupportedGeometry(what) => write!(f, "{what}"),
            SynthesisError::EmptyWindow => write!(f, "cost window contains no grid points"),
            SynthesisError::Pattern(e) => write!(f, "{e}"),
            SynthesisError::Companion(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SynthesisError {}

impl From<PatternError> for SynthesisError {
    fn from(e: PatternError) -> Self {
        SynthesisError::Pattern(e)
    }
}

impl From<CompanionError> for SynthesisError {
    fn from(e: CompanionError) -> Self {
        SynthesisError::Companion(e)
    }
}

/// Desired power shape over the azimuth angle of a cut.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetPattern {
    /// Gaussian power shape `exp(-4 ln2 (phi/hpbw)^2)`.
    Gaussian {
        /// Half-power beamwidth, degrees, in (0, 180].
        hpbw_deg: f64,
    },
    /// dB samples aligned with the evaluation grid (theta-major).
    Tabulated { samples_db: Vec<f64> },
}

impl TargetPattern {
    pub fn gaussian(hpbw_deg: f64) -> Result<Self, SynthesisError> {
        if !(hpbw_deg.is_finite() && hpbw_deg > 0.0 && hpbw_deg <= 180.0) {
            return Err(SynthesisError::BadTarget("hpbw_deg must lie in (0, 180]"));
        }
        Ok(TargetPattern::Gaussian { hpbw_deg })
    }

    pub fn tabulated(samples_db: Vec<f64>) -> Result<Self, SynthesisError> {
        if samples_db.is_empty() {
            return Err(SynthesisError::BadTarget("tabulated target has no samples"));
        }
        if samples_db.iter().any(|v| !v.is_finite()) {
            return Err(SynthesisError::BadTarget("tabulated target has non-finite dB values"));
        }
        Ok(TargetPattern::Tabulated { samples_db })
    }

    /// Linear power samples on the grid (theta-major). The Gaussian shape
    /// depends on the phi coordinate of each point; elevation targets are
    /// evaluated on cuts whose phi axis carries the elevation angle.
    pub fn evaluate_linear(&self, grid: &AngularGrid) -> Result<Vec<f64>, SynthesisError> {
        match self {
            TargetPattern::Gaussian { hpbw_deg } => {
                let mut out = Vec::with_capacity(grid.len());
                for it in 0..grid.n_theta() {
                    let _ = it;
                    for &phi in grid.phis() {
                        let r = phi.to_degrees() / hpbw_deg;
                        out.push((-4.0 * LN_2 * r * r).exp());
                    }
                }
                Ok(out)
            }
            TargetPattern::Tabulated { samples_db } => {
                if samples_db.len() != grid.len() {
                    return Err(SynthesisError::TargetGridMismatch {
                        expected: grid.len(),
                        got: samples_db.len(),
                    });
                }
                Ok(samples_db.iter().map(|db| (10.0f64).powf(db / 10.0)).collect())
            }
        }
    }
}

/// Which degrees of freedom the optimizer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaperMode {
    /// Unit-modulus weights; only phases vary. Weighting loss is 0 dB.
    PhaseOnly,
    /// Free amplitudes and phases.
    AmplitudeAndPhase,
}

/// Synthesis settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisConfig {
    pub taper_mode: TaperMode,
    /// Constrain `w_b = conj(w_a)` (DPBF only).
    pub conjugate_pair: bool,
    /// Cost-1 window: grid points where the target is within this many dB of
    /// its peak.
    pub cost_window_db: f64,
    /// Scalarization weights (lambda1 for pattern variance, lambda2 for
    /// weighting loss).
    pub cost_weights: (f64, f64),
    /// Independent random restarts, >= 1.
    pub restarts: usize,
    /// Objective evaluation budget per restart.
    pub max_evals: usize,
    /// Seed for all restart initializations.
    pub seed: u64,
    /// Simplex spread below which a restart stops early.
    pub tolerance: f64,
}

impl Default for SynthesisConfig {
    /// Phase-only conjugate-paired synthesis with a 10 dB window, equal cost
    /// weights, and 20 restarts.
    fn default() -> Self {
        SynthesisConfig {
            taper_mode: TaperMode::PhaseOnly,
            conjugate_pair: true,
            cost_window_db: 10.0,
            cost_weights: (1.0, 1.0),
            restarts: 20,
            max_evals: 2000,
            seed: 1,
            tolerance: 1e-10,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<(), SynthesisError> {
        let (l1, l2) = self.cost_weights;
        if !(l1.is_finite() && l2.is_finite() && l1 >= 0.0 && l2 >= 0.0) {
            return Err(SynthesisError::InvalidConfig("cost_weights must be finite and >= 0"));
        }
        if l1 == 0.0 && l2 == 0.0 {
            return Err(SynthesisError::InvalidConfig("cost_weights must not both be 0"));
        }
        if self.restarts == 0 {
            return Err(SynthesisError::InvalidConfig("restarts must be >= 1"));
        }
        if self.max_evals == 0 {
            return Err(SynthesisError::InvalidConfig("max_evals must be >= 1"));
        }
        if !(self.cost_window_db.is_finite() && self.cost_window_db > 0.0) {
            return Err(SynthesisError::InvalidConfig("cost_window_db must be > 0"));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(SynthesisError::InvalidConfig("tolerance must be >= 0"));
        }
        Ok(())
    }
}

/// Synthesis output: optimized weights plus the cost breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub weights: DualPolWeights,
    /// Pattern-variance cost, dB^2.
    pub cost1: f64,
    /// Weighting loss, dB.
    pub cost2: f64,
    /// `lambda1 * cost1 + lambda2 * cost2`.
    pub scalar_cost: f64,
    /// Half-power beamwidth of the total pattern on the evaluation cut;
    /// `None` when the grid is not a cut or the beam exceeds it.
    pub measured_hpbw_deg: Option<f64>,
    /// Total objective evaluations across restarts.
    pub evals_used: usize,
    /// Seed the run was keyed by.
    pub seed: u64,
    /// Best scalar cost after each optimizer iteration, non-increasing.
    pub trace: Vec<f64>,
}

/// Sample variance (n-1 denominator) of the dB difference between `p` and
/// the target over the target's top `window_db`, after normalizing both to
/// total power 2 pi over the grid. See the module docs for the fixed
/// pipeline. Constant scale factors on either pattern cancel.
pub fn cost_pattern_variance(
    p: &PowerPattern,
    t: &TargetPattern,
    grid: &AngularGrid,
    window_db: f64,
) -> Result<f64, SynthesisError> {
    if !(window_db.is_finite() && window_db > 0.0) {
        return Err(SynthesisError::InvalidConfig("cost_window_db must be > 0"));
    }
    let t_lin = t.evaluate_linear(grid)?;
    let p_integral = integrate_total_power(p, grid)?;
    let t_integral = integrate_samples(&t_lin, grid)?;
    if !(p_integral.is_finite() && p_integral > 0.0) {
        return Err(SynthesisError::Pattern(PatternError::ZeroPower));
    }
    if !(t_integral.is_finite() && t_integral > 0.0) {
        return Err(SynthesisError::BadTarget("target integrates to zero"));
    }
    let sp = 2.0 * PI / p_integral;
    let st = 2.0 * PI / t_integral;

    let mut t_db = Vec::with_capacity(grid.len());
    let mut t_peak = f64::NEG_INFINITY;
    for v in &t_lin {
        let db = to_db(st * v, DB_FLOOR_DEFAULT);
        if db > t_peak {
            t_peak = db;
        }
        t_db.push(db);
    }

    let mut n = 0usize;
    let mut mean = 0.0;
    let mut diffs = Vec::new();
    for (i, tdb) in t_db.iter().enumerate() {
        if *tdb >= t_peak - window_db {
            let pdb = to_db(sp * p.p_total[i], DB_FLOOR_DEFAULT);
            let d = pdb - tdb;
            diffs.push(d);
            mean += d;
            n += 1;
        }
    }
    if n == 0 {
        return Err(SynthesisError::EmptyWindow);
    }
    if n == 1 {
        return Ok(0.0);
    }
    mean /= n as f64;
    let mut var = 0.0;
    for d in diffs {
        var += (d - mean) * (d - mean);
    }
    Ok(var / (n as f64 - 1.0))
}

/// Weighted-sum scalarization of the two costs.
pub fn scalarize(cost1: f64, cost2: f64, cfg: &SynthesisConfig) -> f64 {
    cfg.cost_weights.0 * cost1 + cfg.cost_weights.1 * cost2
}

/// How optimizer parameters map to weights.
#[derive(Debug, Clone, Copy)]
enum Parameterization {
    /// Free complex weights on polarization A, first fixed to 1;
    /// `2 (n-1)` parameters as re/im pairs.
    SpbfComplex { n: usize },
    /// Unit-modulus weights; first phase of each optimized polarization
    /// fixed to 0. `n-1` parameters when conjugate-paired, else `2 (n-1)`.
    DpbfPhases { n: usize, conjugate: bool },
    /// Phases plus log-amplitudes, first of each fixed (0 phase, unit
    /// amplitude). `2 (n-1)` parameters when conjugate-paired, else
    /// `4 (n-1)`.
    DpbfAmpPhase { n: usize, conjugate: bool },
}

impl Parameterization {
    fn dim(&self) -> usize {
        match *self {
            Parameterization::SpbfComplex { n } => 2 * (n - 1),
            Parameterization::DpbfPhases { n, conjugate } => {
                (n - 1) * if conjugate { 1 } else { 2 }
            }
            Parameterization::DpbfAmpPhase { n, conjugate } => {
                2 * (n - 1) * if conjugate { 1 } else { 2 }
            }
        }
    }

    /// Random start within the natural range of each coordinate.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim());
        match *self {
            Parameterization::SpbfComplex { n } => {
                for _ in 0..2 * (n - 1) {
                    x.push(rng.gen_range(-1.0..1.0));
                }
            }
            Parameterization::DpbfPhases { n, conjugate } => {
                let groups = if conjugate { 1 } else { 2 };
                for _ in 0..groups * (n - 1) {
                    x.push(rng.gen_range(-PI..PI));
                }
            }
            Parameterization::DpbfAmpPhase { n, conjugate } => {
                let groups = if conjugate { 1 } else { 2 };
                for _ in 0..groups {
                    for _ in 0..n - 1 {
                        x.push(rng.gen_range(-PI..PI));
                    }
                    for _ in 0..n - 1 {
                        x.push(rng.gen_range(-0.5..0.5));
                    }
                }
            }
        }
        x
    }

    /// Decode a parameter vector into per-polarization weights.
    fn decode(&self, x: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let unit_phases = |phases: &mut dyn Iterator<Item = f64>, n: usize| -> Vec<Complex64> {
            let mut w = Vec::with_capacity(n);
            w.push(Complex64::new(1.0, 0.0));
            for _ in 1..n {
                w.push(cis(phases.next().expect("parameter count")));
            }
            w
        };
        match *self {
            Parameterization::SpbfComplex { n } => {
                let mut w_a = Vec::with_capacity(n);
                w_a.push(Complex64::new(1.0, 0.0));
                for k in 1..n {
                    w_a.push(Complex64::new(x[2 * (k - 1)], x[2 * (k - 1) + 1]));
                }
                let w_b = alloc::vec![Complex64::new(0.0, 0.0); n];
                (w_a, w_b)
            }
            Parameterization::DpbfPhases { n, conjugate } => {
                let mut it = x.iter().copied();
                let w_a = unit_phases(&mut it, n);
                let w_b = if conjugate {
                    w_a.iter().map(|v| v.conj()).collect()
                } else {
                    unit_phases(&mut it, n)
                };
                (w_a, w_b)
            }
            Parameterization::DpbfAmpPhase { n, conjugate } => {
                let decode_group = |x: &[f64]| -> Vec<Complex64> {
                    let mut w = Vec::with_capacity(n);
                    w.push(Complex64::new(1.0, 0.0));
                    for k in 1..n {
                        let amp = x[n - 1 + (k - 1)].exp();
                        w.push(cis(x[k - 1]) * amp);
                    }
                    w
                };
                let w_a = decode_group(&x[..2 * (n - 1)]);
                let w_b = if conjugate {
                    w_a.iter().map(|v| v.conj()).collect()
                } else {
                    decode_group(&x[2 * (n - 1)..])
                };
                (w_a, w_b)
            }
        }
    }
}

/// Multi-start driver: independent seeded restarts, global best-so-far
/// trace, argmin by (cost, restart index).
struct Multistart {
    x: Vec<f64>,
    evals: usize,
    trace: Vec<f64>,
}

fn multistart(
    param: &Parameterization,
    cfg: &SynthesisConfig,
    mut obj: impl FnMut(&[f64]) -> f64,
) -> Multistart {
    let opts = SimplexOptions {
        max_evals: cfg.max_evals,
        f_tol: cfg.tolerance,
        init_step: INIT_STEP,
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut trace = Vec::new();
    let mut evals = 0usize;
    let mut global_best = f64::INFINITY;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let x0 = param.sample(&mut rng);
        let outcome = nelder_mead(&mut obj, &x0, &opts);
        evals += outcome.evals;
        for v in outcome.trace {
            if v < global_best {
                global_best = v;
            }
            trace.push(global_best);
        }
        let better = match &best {
            None => true,
            Some((f, _)) => outcome.f < *f,
        };
        if better {
            best = Some((outcome.f, outcome.x));
        }
    }
    let (_, x) = best.expect("restarts >= 1");
    Multistart { x, evals, trace }
}

/// Shared tail: decode the winner, evaluate the final pattern and costs.
#[allow(clippy::too_many_arguments)]
fn finish_cut_synthesis(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    target: &TargetPattern,
    grid: &AngularGrid,
    cfg: &SynthesisConfig,
    param: &Parameterization,
    ms: Multistart,
) -> Result<SynthesisResult, SynthesisError> {
    let (w_a, w_b) = param.decode(&ms.x);
    let weights = DualPolWeights::ula(w_a, w_b)?;
    let p = power(&radiate(geom, elem, &weights, grid)?);
    let cost1 = cost_pattern_variance(&p, target, grid, cfg.cost_window_db)?;
    let cost2 = weighting_loss_db(&weights);
    let scalar_cost = scalarize(cost1, cost2, cfg);
    let measured_hpbw_deg = measure_hpbw(&p, grid).ok();
    let mut trace = ms.trace;
    if trace.is_empty() {
        trace.push(scalar_cost);
    }
    Ok(SynthesisResult {
        weights,
        cost1,
        cost2,
        scalar_cost,
        measured_hpbw_deg,
        evals_used: ms.evals.max(1),
        seed: cfg.seed,
        trace,
    })
}

fn cut_objective<'a>(
    geom: &'a ArrayGeometry,
    elem: &'a ElementPattern,
    target: &'a TargetPattern,
    grid: &'a AngularGrid,
    cfg: &'a SynthesisConfig,
    param: Parameterization,
) -> impl FnMut(&[f64]) -> f64 + 'a {
    move |x: &[f64]| {
        let (w_a, w_b) = param.decode(x);
        let weights = match DualPolWeights::ula(w_a, w_b) {
            Ok(w) => w,
            Err(_) => return f64::INFINITY,
        };
        let field = match radiate(geom, elem, &weights, grid) {
            Ok(f) => f,
            Err(_) => return f64::INFINITY,
        };
        let p = power(&field);
        let cost1 = match cost_pattern_variance(&p, target, grid, cfg.cost_window_db) {
            Ok(c) => c,
            Err(_) => return f64::INFINITY,
        };
        let cost2 = weighting_loss_db(&weights);
        scalarize(cost1, cost2, cfg)
    }
}

fn run_cut_synthesis(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    target: &TargetPattern,
    grid: &AngularGrid,
    cfg: &SynthesisConfig,
    param: Parameterization,
) -> Result<SynthesisResult, SynthesisError> {
    let ms = if param.dim() == 0 {
        // Nothing to optimize (single element): one evaluation for the record.
        let f = cut_objective(geom, elem, target, grid, cfg, param)(&[]);
        Multistart { x: Vec::new(), evals: 1, trace: alloc::vec![f] }
    } else {
        multistart(&param, cfg, cut_objective(geom, elem, target, grid, cfg, param))
    };
    finish_cut_synthesis(geom, elem, target, grid, cfg, &param, ms)
}

/// Single-polarization synthesis on a ULA: free complex weights on
/// polarization A (`w_b = 0`), first weight gauge-fixed to 1. Requires the
/// amplitude-and-phase taper mode; beam widening costs weighting loss here.
pub fn synthesize_spbf(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    target: &TargetPattern,
    grid: &AngularGrid,
    cfg: &SynthesisConfig,
) -> Result<SynthesisResult, SynthesisError> {
    cfg.validate()?;
    if geom.kind() != ArrayKind::Ula {
        return Err(SynthesisError::UnsupportedGeometry(
            "synthesize_spbf runs on ULA geometry",
        ));
    }
    if cfg.taper_mode != TaperMode::AmplitudeAndPhase {
        return Err(SynthesisError::InvalidConfig(
            "SPBF needs taper_mode = amplitude-and-phase",
        ));
    }
    run_cut_synthesis(geom, elem, target, grid, cfg, Parameterization::SpbfComplex {
        n: geom.n_cols(),
    })
}

/// Dual-polarization synthesis on a ULA. Phase-only mode optimizes unit
/// modulus weights (first phase gauge-fixed to 0), so the weighting loss is
/// exactly 0 dB; with `conjugate_pair` set, `w_b = conj(w_a)` and the total
/// pattern `|e_a|^2 + |e_b|^2` is shaped by the phase taper alone.
pub fn synthesize_dpbf(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    target: &TargetPattern,
    grid: &AngularGrid,
    cfg: &SynthesisConfig,
) -> Result<SynthesisResult, SynthesisError> {
    cfg.validate()?;
    if geom.kind() != ArrayKind::Ula {
        return Err(SynthesisError::UnsupportedGeometry(
            "synthesize_dpbf runs on ULA geometry; rectangular arrays go through synthesize_ura",
        ));
    }
    let n = geom.n_cols();
    let param = match cfg.taper_mode {
        TaperMode::PhaseOnly => Parameterization::DpbfPhases { n, conjugate: cfg.conjugate_pair },
        TaperMode::AmplitudeAndPhase => {
            Parameterization::DpbfAmpPhase { n, conjugate: cfg.conjugate_pair }
        }
    };
    run_cut_synthesis(geom, elem, target, grid, cfg, param)
}

/// Dual-polarization synthesis on a URA via per-dimension factorization:
/// a 1D elevation synthesis (over the non-zero-power row support in
/// dpbf-both mode, all rows in spbf-elevation mode), a 1D azimuth synthesis,
/// composition through [`compose_ura`] with partition validation, and a 2D
/// cost evaluation against the separable product target on the full grid.
///
/// The elevation restart stream is keyed by `cfg.seed`, the azimuth stream
/// by `cfg.seed + 1`. dpbf-both uses the default half-row partition and
/// requires an even row count.
pub fn synthesize_ura(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    target_az: &TargetPattern,
    target_el: &TargetPattern,
    grid: &AngularGrid,
    cfg: &SynthesisConfig,
    mode: CompositionMode,
) -> Result<SynthesisResult, SynthesisError> {
    cfg.validate()?;
    if geom.kind() != ArrayKind::Ura {
        return Err(SynthesisError::UnsupportedGeometry(
            "synthesize_ura runs on URA geometry",
        ));
    }
    if grid.n_theta() < 2 || grid.n_phi() < 2 {
        return Err(SynthesisError::InvalidConfig(
            "URA synthesis needs a full theta-phi grid",
        ));
    }
    let m = geom.n_rows();
    let n = geom.n_cols();

    // 1D elevation synthesis on a virtual cut: the sub-array lies along the
    // grid's theta axis, evaluated through the element's elevation beamwidth.
    let el_grid = AngularGrid::new(alloc::vec![0.0], grid.thetas().to_vec())?;
    let el_elem = ElementPattern::new(elem.hpbw_el_deg(), elem.hpbw_el_deg())
        .expect("beamwidth already validated");
    let (u1_a, u1_b, el_evals) = match mode {
        CompositionMode::DpbfBoth => {
            if m % 2 != 0 {
                return Err(SynthesisError::InvalidConfig(
                    "dpbf-both needs an even row count for the half-row partition",
                ));
            }
            let sub = ArrayGeometry::ula(m / 2, geom.row_spacing_wl())
                .map_err(|_| SynthesisError::InvalidConfig("invalid row geometry"))?;
            let r = synthesize_dpbf(&sub, &el_elem, target_el, &el_grid, cfg)?;
            let pad = |w: &[Complex64]| {
                let mut v = w.to_vec();
                v.resize(m, Complex64::new(0.0, 0.0));
                v
            };
            (pad(r.weights.w_a()), pad(r.weights.w_b()), r.evals_used)
        }
        CompositionMode::SpbfElevation => {
            let sub = ArrayGeometry::ula(m, geom.row_spacing_wl())
                .map_err(|_| SynthesisError::InvalidConfig("invalid row geometry"))?;
            let mut el_cfg = cfg.clone();
            el_cfg.taper_mode = TaperMode::AmplitudeAndPhase; // SPBF needs taper
            let r = synthesize_spbf(&sub, &el_elem, target_el, &el_grid, &el_cfg)?;
            let zeros = alloc::vec![Complex64::new(0.0, 0.0); m];
            (r.weights.w_a().to_vec(), zeros, r.evals_used)
        }
    };

    // 1D azimuth synthesis across the columns.
    let az_grid = AngularGrid::new(alloc::vec![0.0], grid.phis().to_vec())?;
    let az_elem = ElementPattern::new(elem.hpbw_az_deg(), elem.hpbw_az_deg())
        .expect("beamwidth already validated");
    let az_geom = ArrayGeometry::ula(n, geom.col_spacing_wl())
        .map_err(|_| SynthesisError::InvalidConfig("invalid column geometry"))?;
    let mut az_cfg = cfg.clone();
    az_cfg.seed = cfg.seed.wrapping_add(1);
    let r_az = synthesize_dpbf(&az_geom, &az_elem, target_az, &az_grid, &az_cfg)?;
    let v_alpha = r_az.weights.w_a().to_vec();
    let v_beta = r_az.weights.w_b().to_vec();

    let composition = UraComposition { u1_a, u1_b, v_alpha, v_beta, mode };
    let weights = compose_ura(&composition)?;

    // 2D evaluation against the separable product target.
    let p = power(&radiate(geom, elem, &weights, grid)?);
    let t_el = target_el.evaluate_linear(&el_grid)?;
    let t_az = target_az.evaluate_linear(&az_grid)?;
    let mut samples_db = Vec::with_capacity(grid.len());
    for te in &t_el {
        for ta in &t_az {
            let prod = te * ta;
            samples_db.push(if prod > 0.0 { 10.0 * prod.log10() } else { -400.0 });
        }
    }
    let target_2d = TargetPattern::Tabulated { samples_db };
    let cost1 = cost_pattern_variance(&p, &target_2d, grid, cfg.cost_window_db)?;
    let cost2 = weighting_loss_db(&weights);
    let scalar_cost = scalarize(cost1, cost2, cfg);

    // Beamwidth is reported for the azimuth cut of the assembled pattern.
    let az_field = radiate(geom, elem, &weights, &az_grid)?;
    let measured_hpbw_deg = measure_hpbw(&power(&az_field), &az_grid).ok();

    Ok(SynthesisResult {
        weights,
        cost1,
        cost2,
        scalar_cost,
        measured_hpbw_deg,
        evals_used: el_evals + r_az.evals_used,
        seed: cfg.seed,
        trace: alloc::vec![scalar_cost],
    })
}
