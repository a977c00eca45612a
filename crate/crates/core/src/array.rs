//! Array geometry, steering vectors, and idealized element patterns.
//!
//! Conventions, used consistently everywhere:
//!
//! - Boresight is the array normal, direction `(theta, phi) = (0, 0)`.
//! - A ULA lies along the horizontal axis; an azimuth cut means `theta = 0`.
//! - Elements are numbered column-major from one array edge, so reversing the
//!   flat element index reflects the array through its center.
//! - Positions are centered: the position centroid is the phase center.
//! - Steering phases use the positive exponent `exp(+i 2 pi <pos, u>)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, LN_2, PI};
use core::fmt;

use num_complex::Complex64;
// Inherent f64 methods shadow this under std; no_std resolves through it.
#[allow(unused_imports)]
use num_traits::Float;

/// Slack for angle range checks, so grid endpoints generated from degrees
/// (for example 90 deg -> pi/2) are not rejected over one rounding step.
const ANGLE_RANGE_SLACK: f64 = 1e-9;

/// Errors from geometry and element-pattern construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrayError {
    /// Angle outside its valid range (value, bound description).
    AngleOutOfRange(&'static str, f64),
    /// Element count must be at least 1.
    BadElementCount(usize),
    /// Spacing in wavelengths must be positive and finite.
    BadSpacing(f64),
    /// Half-power beamwidth must lie in (0, 180] degrees.
    BadBeamwidth(f64),
    /// Aperture in wavelengths must be positive and finite.
    BadAperture(f64),
}

impl fmt::Display for ArrayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayError::AngleOutOfRange(which, v) => {
                write!(f, "{which} angle {v} rad is outside its valid range")
            }
            ArrayError::BadElementCount(n) => write!(f, "element count {n} must be >= 1"),
            ArrayError::BadSpacing(s) => write!(f, "element spacing {s} wl must be > 0"),
            ArrayError::BadBeamwidth(b) => {
                write!(f, "half-power beamwidth {b} deg must lie in (0, 180]")
            }
            ArrayError::BadAperture(d) => write!(f, "aperture {d} wl must be > 0"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ArrayError {}

/// A far-field direction in radians. Boresight is `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    /// Elevation angle, `[-pi/2, pi/2]`.
    pub theta: f64,
    /// Azimuth angle, `[-pi, pi]`.
    pub phi: f64,
}

impl Direction {
    /// Validates the angle ranges.
    pub fn new(theta: f64, phi: f64) -> Result<Self, ArrayError> {
        if !theta.is_finite() || theta.abs() > FRAC_PI_2 + ANGLE_RANGE_SLACK {
            return Err(ArrayError::AngleOutOfRange("elevation", theta));
        }
        if !phi.is_finite() || phi.abs() > PI + ANGLE_RANGE_SLACK {
            return Err(ArrayError::AngleOutOfRange("azimuth", phi));
        }
        Ok(Direction { theta, phi })
    }

    /// Azimuth-cut direction (`theta = 0`).
    pub fn azimuth(phi: f64) -> Result<Self, ArrayError> {
        Direction::new(0.0, phi)
    }

    /// Boresight.
    pub fn boresight() -> Self {
        Direction { theta: 0.0, phi: 0.0 }
    }

    /// Direction cosines `(u_h, u_v) = (sin phi cos theta, sin theta)`,
    /// the horizontal and vertical projections a planar array sees.
    pub fn direction_cosines(&self) -> (f64, f64) {
        (self.phi.sin() * self.theta.cos(), self.theta.sin())
    }
}

/// Array topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayKind {
    /// Uniform linear array, one horizontal row.
    Ula,
    /// Uniform rectangular array, M rows x N columns.
    Ura,
}

/// A dual-polarized uniform array on a centered regular grid.
///
/// `n_cols` (N) counts horizontal positions spaced `col_spacing_wl` (dH)
/// apart; `n_rows` (M) counts vertical positions spaced `row_spacing_wl`
/// (dV). A ULA has exactly one row. Each grid position carries one element
/// per polarization; per-polarization element count is `M * N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    kind: ArrayKind,
    n_cols: usize,
    n_rows: usize,
    col_spacing_wl: f64,
    row_spacing_wl: f64,
}

impl ArrayGeometry {
    /// A ULA with `n_cols` elements spaced `col_spacing_wl` apart.
    pub fn ula(n_cols: usize, col_spacing_wl: f64) -> Result<Self, ArrayError> {
        Self::checked(ArrayKind::Ula, 1, n_cols, col_spacing_wl, col_spacing_wl)
    }

    /// A URA with `n_rows` x `n_cols` elements.
    pub fn ura(
        n_rows: usize,
        n_cols: usize,
        row_spacing_wl: f64,
        col_spacing_wl: f64,
    ) -> Result<Self, ArrayError> {
        Self::checked(ArrayKind::Ura, n_rows, n_cols, col_spacing_wl, row_spacing_wl)
    }

    fn checked(
        kind: ArrayKind,
        n_rows: usize,
        n_cols: usize,
        col_spacing_wl: f64,
        row_spacing_wl: f64,
    ) -> Result<Self, ArrayError> {
        if n_cols == 0 {
            return Err(ArrayError::BadElementCount(n_cols));
        }
        if n_rows == 0 {
            return Err(ArrayError::BadElementCount(n_rows));
        }
        if !col_spacing_wl.is_finite() || col_spacing_wl <= 0.0 {
            return Err(ArrayError::BadSpacing(col_spacing_wl));
        }
        if !row_spacing_wl.is_finite() || row_spacing_wl <= 0.0 {
            return Err(ArrayError::BadSpacing(row_spacing_wl));
        }
        Ok(ArrayGeometry { kind, n_cols, n_rows, col_spacing_wl, row_spacing_wl })
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn col_spacing_wl(&self) -> f64 {
        self.col_spacing_wl
    }

    pub fn row_spacing_wl(&self) -> f64 {
        self.row_spacing_wl
    }

    /// Per-polarization element count `M * N`.
    pub fn len(&self) -> usize {
        self.n_rows * self.n_cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Centered coordinates of a uniform axis: `(i - (count-1)/2) * spacing`.
pub(crate) fn axis_coord(index: usize, count: usize, spacing_wl: f64) -> f64 {
    (index as f64 - 0.5 * (count as f64 - 1.0)) * spacing_wl
}

/// Element positions `(x, y)` in wavelengths, column-major per-column bottom
/// to top, columns left to right: flat index `k = n * M + m`.
///
/// The centroid is the origin, so reversing the flat index reflects every
/// position through the phase center.
pub fn element_positions(geom: &ArrayGeometry) -> Vec<(f64, f64)> {
    let (m_rows, n_cols) = (geom.n_rows, geom.n_cols);
    let mut out = Vec::with_capacity(geom.len());
    for n in 0..n_cols {
        let x = axis_coord(n, n_cols, geom.col_spacing_wl);
        for m in 0..m_rows {
            let y = axis_coord(m, m_rows, geom.row_spacing_wl);
            out.push((x, y));
        }
    }
    out
}

/// `exp(i t)` without going through a complex exponential.
pub(crate) fn cis(t: f64) -> Complex64 {
    Complex64::new(t.cos(), t.sin())
}

/// Per-axis steering factors `exp(i 2 pi x_j u)` for a centered uniform axis.
pub(crate) fn axis_steering(count: usize, spacing_wl: f64, u: f64, out: &mut Vec<Complex64>) {
    out.clear();
    for j in 0..count {
        out.push(cis(2.0 * PI * axis_coord(j, count, spacing_wl) * u));
    }
}

/// Steering vector toward `dir`: `a_k = exp(+i 2 pi <pos_k, u(dir)>)`,
/// flattened column-major to match [`element_positions`].
///
/// Because positions are centered, the elementwise conjugate of the result
/// equals its index reversal.
pub fn steering_vector(geom: &ArrayGeometry, dir: &Direction) -> Vec<Complex64> {
    let (u_h, u_v) = dir.direction_cosines();
    let mut col = Vec::new();
    let mut row = Vec::new();
    axis_steering(geom.n_cols, geom.col_spacing_wl, u_h, &mut col);
    axis_steering(geom.n_rows, geom.row_spacing_wl, u_v, &mut row);
    let mut out = Vec::with_capacity(geom.len());
    for cf in &col {
        for rf in &row {
            out.push(cf * rf);
        }
    }
    out
}

/// Idealized dual-polarized element: Gaussian power shape per cut, identical
/// for both polarizations, no backlobe model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPattern {
    hpbw_az_deg: f64,
    hpbw_el_deg: f64,
}

impl ElementPattern {
    /// Both half-power beamwidths in degrees, each in (0, 180].
    pub fn new(hpbw_az_deg: f64, hpbw_el_deg: f64) -> Result<Self, ArrayError> {
        for b in [hpbw_az_deg, hpbw_el_deg] {
            if !b.is_finite() || b <= 0.0 || b > 180.0 {
                return Err(ArrayError::BadBeamwidth(b));
            }
        }
        Ok(ElementPattern { hpbw_az_deg, hpbw_el_deg })
    }

    /// Isotropic-like stand-in: the widest allowed Gaussian.
    pub fn widest() -> Self {
        ElementPattern { hpbw_az_deg: 180.0, hpbw_el_deg: 180.0 }
    }

    pub fn hpbw_az_deg(&self) -> f64 {
        self.hpbw_az_deg
    }

    pub fn hpbw_el_deg(&self) -> f64 {
        self.hpbw_el_deg
    }
}

/// Element field amplitude toward `dir`: the square root of the product of
/// the two Gaussian power cuts, `exp(-2 ln2 ((phi/phi3dB)^2 + (theta/theta3dB)^2))`.
///
/// 1 at boresight; exactly half power at `phi = hpbw/2` on the azimuth cut.
pub fn element_amplitude(pat: &ElementPattern, dir: &Direction) -> f64 {
    let r_az = dir.phi / pat.hpbw_az_deg.to_radians();
    let r_el = dir.theta / pat.hpbw_el_deg.to_radians();
    (-2.0 * LN_2 * (r_az * r_az + r_el * r_el)).exp()
}

/// Half-power beamwidth estimate for a uniformly excited aperture of
/// `d_over_lambda` wavelengths: `0.88 / d_over_lambda`, in radians.
///
/// The estimate is stated for apertures of at least one wavelength; smaller
/// (positive) inputs are accepted as extrapolation.
pub fn hpbw_uniform_estimate(d_over_lambda: f64) -> Result<f64, ArrayError> {
    if !d_over_lambda.is_finite() || d_over_lambda <= 0.0 {
        return Err(ArrayError::BadAperture(d_over_lambda));
    }
    Ok(0.88 / d_over_lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn direction_rejects_out_of_range() {
        assert!(Direction::new(2.0, 0.0).is_err());
        assert!(Direction::new(0.0, 4.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
        assert!(Direction::new(FRAC_PI_2, PI).is_ok());
        assert!(Direction::new((90.0f64).to_radians(), (-180.0f64).to_radians()).is_ok());
    }

    #[test]
    fn geometry_rejects_degenerate_input() {
        assert!(ArrayGeometry::ula(0, 0.5).is_err());
        assert!(ArrayGeometry::ula(4, 0.0).is_err());
        assert!(ArrayGeometry::ula(4, -0.5).is_err());
        assert!(ArrayGeometry::ura(0, 4, 0.7, 0.5).is_err());
        assert!(ArrayGeometry::ura(6, 4, 0.7, f64::INFINITY).is_err());
    }

    #[test]
    fn ula_positions_are_centered() {
        let geom = ArrayGeometry::ula(4, 0.5).unwrap();
        let pos = element_positions(&geom);
        let xs: Vec<f64> = pos.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![-0.75, -0.25, 0.25, 0.75]);
        assert!(pos.iter().all(|p| p.1 == 0.0));

        let single = element_positions(&ArrayGeometry::ula(1, 0.5).unwrap());
        assert_eq!(single, vec![(0.0, 0.0)]);
    }

    #[test]
    fn ura_positions_are_centered_column_major() {
        let geom = ArrayGeometry::ura(2, 2, 0.7, 0.5).unwrap();
        let pos = element_positions(&geom);
        assert_eq!(
            pos,
            vec![(-0.25, -0.35), (-0.25, 0.35), (0.25, -0.35), (0.25, 0.35)]
        );
        let (cx, cy) = pos
            .iter()
            .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        assert!(cx.abs() < crate::tol::CENTROID_TOL && cy.abs() < crate::tol::CENTROID_TOL);
    }

    #[test]
    fn steering_boresight_is_all_ones() {
        let geom = ArrayGeometry::ura(3, 5, 0.7, 0.5).unwrap();
        let a = steering_vector(&geom, &Direction::boresight());
        assert_eq!(a.len(), 15);
        for v in a {
            assert_close(v.re, 1.0, 1e-15);
            assert_close(v.im, 0.0, 1e-15);
        }
    }

    #[test]
    fn steering_half_wavelength_endfire() {
        let geom = ArrayGeometry::ula(2, 0.5).unwrap();
        let dir = Direction::azimuth(FRAC_PI_2).unwrap();
        let a = steering_vector(&geom, &dir);
        // exp(-i pi/2) = -i, exp(+i pi/2) = +i.
        assert_close(a[0].re, 0.0, 1e-15);
        assert_close(a[0].im, -1.0, 1e-15);
        assert_close(a[1].re, 0.0, 1e-15);
        assert_close(a[1].im, 1.0, 1e-15);
    }

    #[test]
    fn steering_conjugate_equals_reversal() {
        let geom = ArrayGeometry::ula(4, 0.5).unwrap();
        for k in -90..=90 {
            let dir = Direction::azimuth((k as f64).to_radians()).unwrap();
            let a = steering_vector(&geom, &dir);
            for (i, v) in a.iter().enumerate() {
                let r = a[a.len() - 1 - i];
                assert!((v.conj() - r).norm_sqr().sqrt() < 1e-12);
            }
        }
    }

    #[test]
    fn steering_entries_have_unit_magnitude() {
        let geom = ArrayGeometry::ura(4, 3, 0.7, 0.5).unwrap();
        let dir = Direction::new(0.4, -1.1).unwrap();
        for v in steering_vector(&geom, &dir) {
            assert_close(v.norm_sqr(), 1.0, crate::tol::STEERING_UNIT_MAG_TOL);
        }
    }

    #[test]
    fn element_amplitude_matches_gaussian_power() {
        let pat = ElementPattern::new(90.0, 90.0).unwrap();
        assert_eq!(element_amplitude(&pat, &Direction::boresight()), 1.0);

        let amp45 = element_amplitude(&pat, &Direction::azimuth((45.0f64).to_radians()).unwrap());
        assert_close(amp45, 1.0 / (2.0f64).sqrt(), 1e-12);

        let amp90 = element_amplitude(&pat, &Direction::azimuth(FRAC_PI_2).unwrap());
        assert_close(amp90 * amp90, (-4.0 * LN_2).exp(), 1e-12);
        assert_close(amp90 * amp90, 0.0625, 1e-12);
    }

    #[test]
    fn element_pattern_rejects_bad_beamwidth() {
        assert!(ElementPattern::new(0.0, 90.0).is_err());
        assert!(ElementPattern::new(90.0, 181.0).is_err());
        assert!(ElementPattern::new(-10.0, 90.0).is_err());
    }

    #[test]
    fn hpbw_estimate_formula() {
        assert_close(hpbw_uniform_estimate(0.88).unwrap(), 1.0, 1e-15);
        assert_close(hpbw_uniform_estimate(2.0).unwrap(), 0.44, 1e-15);
        assert_close(
            hpbw_uniform_estimate(1.0).unwrap().to_degrees(),
            50.419,
            1e-2,
        );
        assert!(hpbw_uniform_estimate(0.0).is_err());
        assert!(hpbw_uniform_estimate(-1.0).is_err());
    }
}
