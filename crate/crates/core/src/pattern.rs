//! Far-field evaluation and pattern metrics for dual-polarized arrays.
//!
//! Fields are evaluated per grid point as `e = g(dir) * (w^T a(dir))` with
//! `g` the element amplitude and the dot product unconjugated. Total power is
//! the sum of the two per-polarization powers. Grids are rectangular
//! `theta x phi` products stored theta-major; an azimuth cut is the grid
//! `thetas = [0]`.
//!
//! Integration uses the trapezoidal rule over the provided grid. Azimuth-cut
//! normalization integrates over phi only; full grids integrate over the
//! theta-phi rectangle. dB conversion floors at [`DB_FLOOR_DEFAULT`] to keep
//! pattern nulls finite for display and cost evaluation.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// Inherent f64 methods shadow this under std; no_std resolves through it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::array::{
    axis_steering, element_amplitude, ArrayGeometry, ArrayKind, Direction, ElementPattern,
};

/// Default dB floor for display and cost conversion of power values.
pub const DB_FLOOR_DEFAULT: f64 = -60.0;

/// Internal floor used while locating half-power crossings, deep enough to
/// never interfere with the -3 dB threshold.
const HPBW_SEARCH_FLOOR_DB: f64 = -300.0;

/// Axis-ratio threshold above which a polarization ellipse is reported as
/// linear.
pub const AXIS_RATIO_LINEAR_THRESHOLD: f64 = 20.0;

/// Errors from pattern construction and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternError {
    /// Weight or field shapes do not agree with the geometry or grid.
    ShapeMismatch(&'static str),
    /// Both polarization excitations are identically zero.
    AllZeroWeights,
    /// Grid axes must be nonempty and strictly increasing.
    BadGrid(&'static str),
    /// Normalization target must be positive and finite.
    BadTarget(f64),
    /// Pattern integrates to zero (or the peak is zero), nothing to scale.
    ZeroPower,
    /// Beamwidth measurement needs a single-cut grid.
    NotACut,
    /// Pattern peak sits on the grid edge, beamwidth undefined.
    EdgePeak,
    /// No half-power crossing inside the grid (beam wider than the grid).
    NoCrossing,
    /// Polarization state of a zero field is undefined.
    ZeroField,
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::ShapeMismatch(what) => write!(f, "shape mismatch: {what}"),
            PatternError::AllZeroWeights => {
                write!(f, "both polarization excitations are identically zero")
            }
            PatternError::BadGrid(what) => write!(f, "bad angular grid: {what}"),
            PatternError::BadTarget(t) => write!(f, "normalization target {t} must be > 0"),
            PatternError::ZeroPower => write!(f, "pattern has zero total power"),
            PatternError::NotACut => {
                write!(f, "beamwidth is defined on single-cut grids only")
            }
            PatternError::EdgePeak => write!(f, "pattern peak lies on the grid edge"),
            PatternError::NoCrossing => {
                write!(f, "no half-power crossing inside the grid")
            }
            PatternError::ZeroField => write!(f, "polarization of a zero field is undefined"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PatternError {}

/// Per-element complex excitations for the two polarizations.
///
/// Stored flat in the element order of
/// [`element_positions`](crate::array::element_positions): column-major,
/// `k = n * M + m`. A ULA has one row; its vectors have length N.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolWeights {
    kind: ArrayKind,
    n_rows: usize,
    n_cols: usize,
    w_a: Vec<Complex64>,
    w_b: Vec<Complex64>,
}

impl DualPolWeights {
    /// ULA weights, one complex excitation per column and polarization.
    pub fn ula(w_a: Vec<Complex64>, w_b: Vec<Complex64>) -> Result<Self, PatternError> {
        let n = w_a.len();
        Self::from_parts(ArrayKind::Ula, 1, n, w_a, w_b)
    }

    /// URA weights as flattened column-major `M x N` matrices.
    pub fn ura(
        n_rows: usize,
        n_cols: usize,
        w_a: Vec<Complex64>,
        w_b: Vec<Complex64>,
    ) -> Result<Self, PatternError> {
        Self::from_parts(ArrayKind::Ura, n_rows, n_cols, w_a, w_b)
    }

    /// Central validating constructor.
    pub fn from_parts(
        kind: ArrayKind,
        n_rows: usize,
        n_cols: usize,
        w_a: Vec<Complex64>,
        w_b: Vec<Complex64>,
    ) -> Result<Self, PatternError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(PatternError::ShapeMismatch("weight shape has a zero dimension"));
        }
        if kind == ArrayKind::Ula && n_rows != 1 {
            return Err(PatternError::ShapeMismatch("ULA weights must have one row"));
        }
        let len = n_rows * n_cols;
        if w_a.len() != len || w_b.len() != len {
            return Err(PatternError::ShapeMismatch(
                "weight vectors do not match the declared shape",
            ));
        }
        let zero = Complex64::new(0.0, 0.0);
        if w_a.iter().all(|v| *v == zero) && w_b.iter().all(|v| *v == zero) {
            return Err(PatternError::AllZeroWeights);
        }
        Ok(DualPolWeights { kind, n_rows, n_cols, w_a, w_b })
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Elements per polarization.
    pub fn len(&self) -> usize {
        self.w_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w_a.is_empty()
    }

    pub fn w_a(&self) -> &[Complex64] {
        &self.w_a
    }

    pub fn w_b(&self) -> &[Complex64] {
        &self.w_b
    }

    /// True when the shape and kind agree with `geom`.
    pub fn matches(&self, geom: &ArrayGeometry) -> bool {
        self.kind == geom.kind()
            && self.n_rows == geom.n_rows()
            && self.n_cols == geom.n_cols()
    }

    /// Total excitation energy over both polarizations.
    pub fn energy(&self) -> f64 {
        let mut s = 0.0;
        for v in self.w_a.iter().chain(self.w_b.iter()) {
            s += v.norm_sqr();
        }
        s
    }

    /// Both polarizations scaled by a common complex factor (nonzero, or the
    /// result would violate the not-all-zero invariant).
    pub fn scaled(&self, factor: Complex64) -> Result<Self, PatternError> {
        Self::from_parts(
            self.kind,
            self.n_rows,
            self.n_cols,
            self.w_a.iter().map(|v| v * factor).collect(),
            self.w_b.iter().map(|v| v * factor).collect(),
        )
    }
}

/// Weighting loss in dB: how far total radiated power falls below driving
/// every active element at the largest weight magnitude.
///
/// `-10 log10( sum |w_i|^2 / (K max |w_i|^2) )` where the sum and the count
/// `K` run over the non-zero-power entries of both polarizations; exact
/// zeros (ZP elements) are excluded. Unit-modulus phase-only weights give
/// exactly 0 dB.
pub fn weighting_loss_db(w: &DualPolWeights) -> f64 {
    let mut sum = 0.0;
    let mut max = 0.0f64;
    let mut count = 0usize;
    for v in w.w_a().iter().chain(w.w_b().iter()) {
        let p = v.norm_sqr();
        if p > 0.0 {
            sum += p;
            count += 1;
            if p > max {
                max = p;
            }
        }
    }
    // Construction guarantees at least one NZP entry.
    let loss = -10.0 * (sum / (count as f64 * max)).log10();
    loss + 0.0 // fold -0.0 into +0.0
}

/// A rectangular angular grid, radians, stored as its two sorted axes.
/// An azimuth cut is `thetas = [0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    thetas: Vec<f64>,
    phis: Vec<f64>,
}

impl AngularGrid {
    /// Axes must be nonempty, strictly increasing, and inside the valid
    /// direction ranges.
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self, PatternError> {
        for (name, axis) in [("thetas", &thetas), ("phis", &phis)] {
            if axis.is_empty() {
                return Err(PatternError::BadGrid("axis is empty"));
            }
            if axis.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(PatternError::BadGrid("axis is not strictly increasing"));
            }
            let _ = name;
        }
        for &t in &thetas {
            Direction::new(t, 0.0).map_err(|_| PatternError::BadGrid("theta out of range"))?;
        }
        for &p in &phis {
            Direction::new(0.0, p).map_err(|_| PatternError::BadGrid("phi out of range"))?;
        }
        Ok(AngularGrid { thetas, phis })
    }

    /// Azimuth cut `theta = 0` from a degree range and step.
    pub fn azimuth_cut_deg(
        phi_min_deg: f64,
        phi_max_deg: f64,
        step_deg: f64,
    ) -> Result<Self, PatternError> {
        Self::from_ranges_deg(0.0, 0.0, phi_min_deg, phi_max_deg, step_deg)
    }

    /// Default azimuth cut: 1 degree steps over the front hemisphere.
    pub fn default_azimuth_cut() -> Self {
        Self::azimuth_cut_deg(-90.0, 90.0, 1.0).expect("default cut is valid")
    }

    /// Rectangular grid from inclusive degree ranges and a common step.
    /// A range with `min == max` produces a single sample.
    pub fn from_ranges_deg(
        theta_min_deg: f64,
        theta_max_deg: f64,
        phi_min_deg: f64,
        phi_max_deg: f64,
        step_deg: f64,
    ) -> Result<Self, PatternError> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(PatternError::BadGrid("step must be > 0"));
        }
        let axis = |min_deg: f64, max_deg: f64| -> Result<Vec<f64>, PatternError> {
            if !(min_deg.is_finite() && max_deg.is_finite() && min_deg <= max_deg) {
                return Err(PatternError::BadGrid("range must be finite with min <= max"));
            }
            let mut out = Vec::new();
            let mut i = 0usize;
            loop {
                let v = min_deg + i as f64 * step_deg;
                if v > max_deg + step_deg * 1e-9 {
                    break;
                }
                out.push(v.to_radians());
                i += 1;
            }
            Ok(out)
        };
        Self::new(axis(theta_min_deg, theta_max_deg)?, axis(phi_min_deg, phi_max_deg)?)
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    /// Total grid points, theta-major layout `idx = i_theta * n_phi + i_phi`.
    pub fn len(&self) -> usize {
        self.thetas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Direction at flat index (theta-major).
    pub fn direction(&self, idx: usize) -> Direction {
        let it = idx / self.phis.len();
        let ip = idx % self.phis.len();
        Direction { theta: self.thetas[it], phi: self.phis[ip] }
    }
}

/// Two-component complex far field sampled on an [`AngularGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPattern {
    n_theta: usize,
    n_phi: usize,
    /// Polarization A component per grid point, theta-major.
    pub e_a: Vec<Complex64>,
    /// Polarization B component per grid point, theta-major.
    pub e_b: Vec<Complex64>,
}

impl FieldPattern {
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.e_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e_a.is_empty()
    }
}

/// Normalization state of a [`PowerPattern`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// As computed from fields, no scaling applied.
    Raw,
    /// Scaled so the trapezoidal integral of total power equals `target`.
    TotalPower { target: f64 },
}

/// Real total and per-polarization power on an angular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPattern {
    pub(crate) n_theta: usize,
    pub(crate) n_phi: usize,
    /// `p_a + p_b` per grid point.
    pub p_total: Vec<f64>,
    /// Polarization A power per grid point.
    pub p_a: Vec<f64>,
    /// Polarization B power per grid point.
    pub p_b: Vec<f64>,
    /// Scaling state.
    pub normalization: Normalization,
}

impl PowerPattern {
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.p_total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_total.is_empty()
    }
}

/// Far field of `w` on `grid`: per point, `e_x = g(dir) * sum_k w_x[k] a_k(dir)`
/// for both polarizations, with `g` the element amplitude and `a` the
/// steering vector. The element sum runs in flat element order, fixed, so
/// results are bit-reproducible.
pub fn radiate(
    geom: &ArrayGeometry,
    elem: &ElementPattern,
    w: &DualPolWeights,
    grid: &AngularGrid,
) -> Result<FieldPattern, PatternError> {
    if !w.matches(geom) {
        return Err(PatternError::ShapeMismatch("weights do not match the geometry"));
    }
    let (m_rows, n_cols) = (geom.n_rows(), geom.n_cols());
    let mut e_a = Vec::with_capacity(grid.len());
    let mut e_b = Vec::with_capacity(grid.len());
    let mut col = Vec::with_capacity(n_cols);
    let mut row = Vec::with_capacity(m_rows);
    for &theta in grid.thetas() {
        // Row factors depend on theta only; reuse across the phi sweep.
        let u_v = theta.sin();
        axis_steering(m_rows, geom.row_spacing_wl(), u_v, &mut row);
        let cos_theta = theta.cos();
        for &phi in grid.phis() {
            let dir = Direction { theta, phi };
            let u_h = phi.sin() * cos_theta;
            axis_steering(n_cols, geom.col_spacing_wl(), u_h, &mut col);
            let g = element_amplitude(elem, &dir);
            let mut acc_a = Complex64::new(0.0, 0.0);
            let mut acc_b = Complex64::new(0.0, 0.0);
            let mut k = 0usize;
            for cf in &col {
                for rf in &row {
                    let a = cf * rf;
                    acc_a += w.w_a()[k] * a;
                    acc_b += w.w_b()[k] * a;
                    k += 1;
                }
            }
            e_a.push(g * acc_a);
            e_b.push(g * acc_b);
        }
    }
    Ok(FieldPattern { n_theta: grid.n_theta(), n_phi: grid.n_phi(), e_a, e_b })
}

/// Power pattern of a field: `p_a = |e_a|^2`, `p_b = |e_b|^2`, total the sum.
pub fn power(f: &FieldPattern) -> PowerPattern {
    let mut p_a = Vec::with_capacity(f.len());
    let mut p_b = Vec::with_capacity(f.len());
    let mut p_total = Vec::with_capacity(f.len());
    for (a, b) in f.e_a.iter().zip(f.e_b.iter()) {
        let pa = a.norm_sqr();
        let pb = b.norm_sqr();
        p_a.push(pa);
        p_b.push(pb);
        p_total.push(pa + pb);
    }
    PowerPattern {
        n_theta: f.n_theta,
        n_phi: f.n_phi,
        p_total,
        p_a,
        p_b,
        normalization: Normalization::Raw,
    }
}

/// Polarization parallelity of two fields per grid point:
/// `xi = |conj(e1_a) e2_a + conj(e1_b) e2_b|`. Zero means orthogonal
/// polarizations in that direction.
pub fn parallelity(f1: &FieldPattern, f2: &FieldPattern) -> Result<Vec<f64>, PatternError> {
    if f1.n_theta != f2.n_theta || f1.n_phi != f2.n_phi {
        return Err(PatternError::ShapeMismatch("fields sampled on different grids"));
    }
    let mut out = Vec::with_capacity(f1.len());
    for i in 0..f1.len() {
        let inner = f1.e_a[i].conj() * f2.e_a[i] + f1.e_b[i].conj() * f2.e_b[i];
        out.push(inner.norm_sqr().sqrt());
    }
    Ok(out)
}

/// Trapezoidal integral of samples indexed by `value` over axis `xs`.
fn trapezoid(xs: &[f64], value: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..xs.len().saturating_sub(1) {
        acc += 0.5 * (value(i) + value(i + 1)) * (xs[i + 1] - xs[i]);
    }
    acc
}

/// Trapezoidal integral of theta-major samples over the grid. Single-sample
/// axes are skipped: an azimuth cut integrates over phi only, a full grid
/// over the theta-phi rectangle. Both axes singleton has no measure and
/// errors.
pub fn integrate_samples(values: &[f64], grid: &AngularGrid) -> Result<f64, PatternError> {
    if values.len() != grid.len() {
        return Err(PatternError::ShapeMismatch("samples do not match the grid"));
    }
    let (nt, np) = (grid.n_theta(), grid.n_phi());
    let integral = if nt == 1 && np == 1 {
        return Err(PatternError::ZeroPower);
    } else if nt == 1 {
        trapezoid(grid.phis(), |i| values[i])
    } else if np == 1 {
        trapezoid(grid.thetas(), |i| values[i])
    } else {
        let mut row_integrals = Vec::with_capacity(nt);
        for it in 0..nt {
            row_integrals.push(trapezoid(grid.phis(), |ip| values[it * np + ip]));
        }
        trapezoid(grid.thetas(), |it| row_integrals[it])
    };
    Ok(integral)
}

/// Trapezoidal integral of total power over the grid; see
/// [`integrate_samples`] for the axis conventions.
pub fn integrate_total_power(p: &PowerPattern, grid: &AngularGrid) -> Result<f64, PatternError> {
    if p.n_theta != grid.n_theta() || p.n_phi != grid.n_phi() {
        return Err(PatternError::ShapeMismatch("pattern does not match the grid"));
    }
    integrate_samples(&p.p_total, grid)
}

/// Scales all three power components so the trapezoidal integral of total
/// power over the grid equals `target` (2 pi for azimuth cuts by the total
/// radiated power convention; pass pi for a single-polarization pattern
/// under the per-polarization convention).
pub fn normalize_total_power(
    p: &PowerPattern,
    grid: &AngularGrid,
    target: f64,
) -> Result<PowerPattern, PatternError> {
    if !(target.is_finite() && target > 0.0) {
        return Err(PatternError::BadTarget(target));
    }
    let integral = integrate_total_power(p, grid)?;
    if !(integral.is_finite() && integral > 0.0) {
        return Err(PatternError::ZeroPower);
    }
    let s = target / integral;
    Ok(PowerPattern {
        n_theta: p.n_theta,
        n_phi: p.n_phi,
        p_total: p.p_total.iter().map(|v| v * s).collect(),
        p_a: p.p_a.iter().map(|v| v * s).collect(),
        p_b: p.p_b.iter().map(|v| v * s).collect(),
        normalization: Normalization::TotalPower { target },
    })
}

/// Power to dB with a floor: `max(10 log10(p), floor_db)`.
pub fn to_db(p: f64, floor_db: f64) -> f64 {
    (10.0 * p.log10()).max(floor_db)
}

/// Half-power beamwidth of a single-cut pattern, degrees.
///
/// Finds the global peak, then the first crossings of the half-power level
/// (10 log10(0.5) = -3.0103 dB) walking outward on each side, locating each
/// by linear interpolation in dB versus angle. Errors when the grid is not a
/// single cut, the peak sits on the grid edge, or a side never crosses
/// (beam wider than the grid).
pub fn measure_hpbw(p: &PowerPattern, grid: &AngularGrid) -> Result<f64, PatternError> {
    if p.len() != grid.len() || p.n_theta != grid.n_theta() || p.n_phi != grid.n_phi() {
        return Err(PatternError::ShapeMismatch("pattern does not match the grid"));
    }
    let axis: &[f64] = match (grid.n_theta(), grid.n_phi()) {
        (1, np) if np > 1 => grid.phis(),
        (nt, 1) if nt > 1 => grid.thetas(),
        _ => return Err(PatternError::NotACut),
    };
    let vals = &p.p_total;
    let mut ipk = 0usize;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[ipk] {
            ipk = i;
        }
    }
    let peak = vals[ipk];
    if !(peak.is_finite() && peak > 0.0) {
        return Err(PatternError::ZeroPower);
    }
    if ipk == 0 || ipk == vals.len() - 1 {
        return Err(PatternError::EdgePeak);
    }
    let db = |i: usize| (10.0 * (vals[i] / peak).log10()).max(HPBW_SEARCH_FLOOR_DB);
    let threshold = 10.0 * (0.5f64).log10();
    let interp = |i: usize, j: usize| {
        let (di, dj) = (db(i), db(j));
        axis[i] + (threshold - di) / (dj - di) * (axis[j] - axis[i])
    };
    let mut right = None;
    for i in ipk..vals.len() - 1 {
        if db(i) >= threshold && db(i + 1) < threshold {
            right = Some(interp(i, i + 1));
            break;
        }
    }
    let mut left = None;
    for i in (1..=ipk).rev() {
        if db(i) >= threshold && db(i - 1) < threshold {
            left = Some(interp(i, i - 1));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok((r - l).to_degrees()),
        _ => Err(PatternError::NoCrossing),
    }
}

/// Rotation sense of a polarization ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizationSense {
    Left,
    Right,
    /// Linear (or numerically indistinguishable from linear).
    None,
}

/// Polarization ellipse parameters derived from the Stokes parameters of a
/// field sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationEllipse {
    /// Major-to-minor axis ratio, >= 1; infinite for exactly linear states.
    pub axis_ratio: f64,
    /// Major-axis orientation, degrees.
    pub tilt_deg: f64,
    /// True when `axis_ratio` exceeds [`AXIS_RATIO_LINEAR_THRESHOLD`].
    pub linear: bool,
    /// Rotation sense; `None` for linear states.
    pub sense: PolarizationSense,
}

/// Polarization ellipse of one field sample `(e_a, e_b)`.
///
/// Stokes parameters: `S0 = |e_a|^2 + |e_b|^2`, `S1 = |e_a|^2 - |e_b|^2`,
/// `S2 = 2 Re(e_a conj(e_b))`, `S3 = 2 Im(e_a conj(e_b))`. Ellipticity angle
/// `chi = asin(S3/S0) / 2`, axis ratio `1/|tan chi|`, tilt
/// `atan2(S2, S1) / 2`. Positive `S3` is reported as left sense; nothing in
/// the library depends on the handedness convention.
pub fn polarization_ellipse(
    e_a: Complex64,
    e_b: Complex64,
) -> Result<PolarizationEllipse, PatternError> {
    let s0 = e_a.norm_sqr() + e_b.norm_sqr();
    if s0 <= 0.0 {
        return Err(PatternError::ZeroField);
    }
    let cross = e_a * e_b.conj();
    let s1 = e_a.norm_sqr() - e_b.norm_sqr();
    let s2 = 2.0 * cross.re;
    let s3 = 2.0 * cross.im;
    let chi = 0.5 * (s3 / s0).clamp(-1.0, 1.0).asin();
    let tan_chi = chi.tan();
    let axis_ratio = if tan_chi == 0.0 { f64::INFINITY } else { 1.0 / tan_chi.abs() };
    let linear = axis_ratio > AXIS_RATIO_LINEAR_THRESHOLD;
    let sense = if linear {
        PolarizationSense::None
    } else if s3 > 0.0 {
        PolarizationSense::Left
    } else {
        PolarizationSense::Right
    };
    Ok(PolarizationEllipse {
        axis_ratio,
        tilt_deg: (0.5 * s2.atan2(s1)).to_degrees(),
        linear,
        sense,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::ArrayKind;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ones(n: usize) -> Vec<Complex64> {
        vec![c(1.0, 0.0); n]
    }

    fn zeros(n: usize) -> Vec<Complex64> {
        vec![c(0.0, 0.0); n]
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn weights_reject_bad_shapes() {
        assert!(DualPolWeights::ula(ones(4), zeros(3)).is_err());
        assert!(DualPolWeights::ula(zeros(4), zeros(4)).is_err());
        assert!(DualPolWeights::ura(2, 3, ones(6), zeros(5)).is_err());
        assert!(DualPolWeights::from_parts(ArrayKind::Ula, 2, 2, ones(4), zeros(4)).is_err());
        assert!(DualPolWeights::ura(2, 3, ones(6), zeros(6)).is_ok());
    }

    #[test]
    fn grid_construction_checks_axes() {
        assert!(AngularGrid::new(vec![0.0], vec![0.0, 0.1, 0.2]).is_ok());
        assert!(AngularGrid::new(vec![], vec![0.0]).is_err());
        assert!(AngularGrid::new(vec![0.0], vec![0.1, 0.1]).is_err());
        assert!(AngularGrid::new(vec![0.0], vec![0.2, 0.1]).is_err());
        assert!(AngularGrid::new(vec![2.0], vec![0.0]).is_err()); // theta > pi/2
    }

    #[test]
    fn default_cut_spans_front_hemisphere() {
        let g = AngularGrid::default_azimuth_cut();
        assert_eq!(g.n_theta(), 1);
        assert_eq!(g.n_phi(), 181);
        assert_close(g.phis()[0].to_degrees(), -90.0, 1e-12);
        assert_close(g.phis()[180].to_degrees(), 90.0, 1e-12);
    }

    #[test]
    fn radiate_single_element_boresight() {
        let geom = ArrayGeometry::ula(1, 0.5).unwrap();
        let elem = ElementPattern::new(90.0, 90.0).unwrap();
        let w = DualPolWeights::ula(ones(1), zeros(1)).unwrap();
        let grid = AngularGrid::new(vec![0.0], vec![-0.1, 0.0, 0.1]).unwrap();
        let f = radiate(&geom, &elem, &w, &grid).unwrap();
        assert_close(f.e_a[1].re, 1.0, 1e-15);
        assert_close(f.e_a[1].im, 0.0, 1e-15);
        assert_eq!(f.e_b[1], c(0.0, 0.0));
    }

    #[test]
    fn radiate_coherent_sum_and_cancellation() {
        let elem = ElementPattern::new(90.0, 90.0).unwrap();
        let grid = AngularGrid::new(vec![0.0], vec![-0.01, 0.0, 0.01]).unwrap();

        let geom4 = ArrayGeometry::ula(4, 0.5).unwrap();
        let w4 = DualPolWeights::ula(ones(4), zeros(4)).unwrap();
        let f4 = radiate(&geom4, &elem, &w4, &grid).unwrap();
        assert_close(f4.e_a[1].re, 4.0, 1e-12);

        let geom2 = ArrayGeometry::ula(2, 0.5).unwrap();
        let w2 = DualPolWeights::ula(vec![c(1.0, 0.0), c(-1.0, 0.0)], zeros(2)).unwrap();
        let f2 = radiate(&geom2, &elem, &w2, &grid).unwrap();
        assert_close(f2.e_a[1].norm_sqr(), 0.0, 1e-28);
    }

    #[test]
    fn radiate_rejects_shape_mismatch() {
        let geom = ArrayGeometry::ula(4, 0.5).unwrap();
        let elem = ElementPattern::new(90.0, 90.0).unwrap();
        let w = DualPolWeights::ula(ones(3), zeros(3)).unwrap();
        let grid = AngularGrid::default_azimuth_cut();
        assert!(radiate(&geom, &elem, &w, &grid).is_err());
    }

    #[test]
    fn power_components_sum() {
        let f = FieldPattern {
            n_theta: 1,
            n_phi: 2,
            e_a: vec![c(1.0, 0.0), c(3.0, 0.0)],
            e_b: vec![c(0.0, 0.0), c(0.0, 4.0)],
        };
        let p = power(&f);
        assert_eq!(p.p_total[0], 1.0);
        assert_eq!(p.p_total[1], 25.0);
        assert_eq!(p.normalization, Normalization::Raw);
    }

    #[test]
    fn parallelity_basic_cases() {
        let unit = FieldPattern { n_theta: 1, n_phi: 1, e_a: ones(1), e_b: zeros(1) };
        assert_close(parallelity(&unit, &unit).unwrap()[0], 1.0, 1e-15);

        let other = FieldPattern { n_theta: 1, n_phi: 1, e_a: zeros(1), e_b: ones(1) };
        assert_close(parallelity(&unit, &other).unwrap()[0], 0.0, 1e-15);

        let wrong = FieldPattern { n_theta: 1, n_phi: 2, e_a: ones(2), e_b: zeros(2) };
        assert!(parallelity(&unit, &wrong).is_err());
    }

    #[test]
    fn normalization_scales_to_target() {
        let grid = AngularGrid::new(vec![0.0], (0..=180).map(|i| {
            (i as f64 - 90.0).to_radians()
        }).collect()).unwrap();
        let n = grid.len();
        let p = PowerPattern {
            n_theta: 1,
            n_phi: n,
            p_total: vec![2.0; n],
            p_a: vec![1.0; n],
            p_b: vec![1.0; n],
            normalization: Normalization::Raw,
        };
        let q = normalize_total_power(&p, &grid, 2.0 * core::f64::consts::PI).unwrap();
        // Constant 2 over a pi-long interval integrates to 2 pi: unchanged.
        assert_close(q.p_total[0], 2.0, 1e-12);
        let back = integrate_total_power(&q, &grid).unwrap();
        assert_close(back, 2.0 * core::f64::consts::PI, 1e-12);

        let zero = PowerPattern {
            n_theta: 1,
            n_phi: n,
            p_total: vec![0.0; n],
            p_a: vec![0.0; n],
            p_b: vec![0.0; n],
            normalization: Normalization::Raw,
        };
        assert_eq!(
            normalize_total_power(&zero, &grid, 1.0).unwrap_err(),
            PatternError::ZeroPower
        );
        assert!(normalize_total_power(&p, &grid, 0.0).is_err());
    }

    #[test]
    fn weighting_loss_reference_and_phase_only() {
        let w = DualPolWeights::ula(
            vec![c(1.0, 0.0), c(1.0, 0.0), c(-0.48, 0.0), c(0.24, 0.0)],
            zeros(4),
        )
        .unwrap();
        assert_close(weighting_loss_db(&w), 2.426, 1e-3);

        let phases = [0.3, -1.0, 2.0, 0.0];
        let pw = DualPolWeights::ula(
            phases.iter().map(|p| c(p.cos(), p.sin())).collect(),
            phases.iter().map(|p| c(p.cos(), -p.sin())).collect(),
        )
        .unwrap();
        assert_eq!(weighting_loss_db(&pw), 0.0);

        let zp = DualPolWeights::ula(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], zeros(4))
            .unwrap();
        assert_eq!(weighting_loss_db(&zp), 0.0); // ZP entries excluded
    }

    #[test]
    fn hpbw_recovers_gaussian_width() {
        let grid = AngularGrid::default_azimuth_cut();
        let hpbw = 65.0f64;
        let p_total: Vec<f64> = grid
            .phis()
            .iter()
            .map(|phi| {
                let r = phi.to_degrees() / hpbw;
                (-4.0 * core::f64::consts::LN_2 * r * r).exp()
            })
            .collect();
        let n = p_total.len();
        let p = PowerPattern {
            n_theta: 1,
            n_phi: n,
            p_total,
            p_a: vec![0.0; n],
            p_b: vec![0.0; n],
            normalization: Normalization::Raw,
        };
        let measured = measure_hpbw(&p, &grid).unwrap();
        assert_close(measured, hpbw, 0.1);
    }

    #[test]
    fn hpbw_errors_on_degenerate_input() {
        let grid =
            AngularGrid::new(vec![0.0], (0..=20).map(|i| i as f64 * 0.01).collect()).unwrap();
        let n = grid.len();
        // Monotone ramp: peak at the edge.
        let p = PowerPattern {
            n_theta: 1,
            n_phi: n,
            p_total: (0..n).map(|i| 1.0 + i as f64).collect(),
            p_a: vec![0.0; n],
            p_b: vec![0.0; n],
            normalization: Normalization::Raw,
        };
        assert_eq!(measure_hpbw(&p, &grid).unwrap_err(), PatternError::EdgePeak);

        // Too flat: never drops 3 dB inside the grid.
        let flat = PowerPattern {
            n_theta: 1,
            n_phi: n,
            p_total: (0..n)
                .map(|i| 1.0 - 1e-3 * (i as f64 - 10.0).powi(2) / 100.0)
                .collect(),
            p_a: vec![0.0; n],
            p_b: vec![0.0; n],
            normalization: Normalization::Raw,
        };
        assert_eq!(measure_hpbw(&flat, &grid).unwrap_err(), PatternError::NoCrossing);
    }

    #[test]
    fn ellipse_canonical_states() {
        let lin = polarization_ellipse(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(lin.linear);
        assert_eq!(lin.sense, PolarizationSense::None);
        assert_close(lin.tilt_deg, 0.0, 1e-12);

        let circ = polarization_ellipse(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(!circ.linear);
        assert_close(circ.axis_ratio, 1.0, 1e-12);

        let diag = polarization_ellipse(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(diag.linear);
        assert_close(diag.tilt_deg, 45.0, 1e-12);

        assert_eq!(
            polarization_ellipse(c(0.0, 0.0), c(0.0, 0.0)).unwrap_err(),
            PatternError::ZeroField
        );
    }

    #[test]
    fn to_db_floors() {
        assert_close(to_db(1.0, DB_FLOOR_DEFAULT), 0.0, 1e-15);
        assert_eq!(to_db(0.0, DB_FLOOR_DEFAULT), DB_FLOOR_DEFAULT);
        assert_eq!(to_db(1e-30, DB_FLOOR_DEFAULT), DB_FLOOR_DEFAULT);
    }
}
