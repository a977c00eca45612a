//! Closed-form companion beams and the rectangular weight composition.
//!
//! For a centered array the elementwise conjugate of a steering vector
//! equals its index reversal. Because of that symmetry, reversing a beam's
//! weights, conjugating them, swapping the polarizations, and negating one
//! side produces a second beam whose total power pattern is identical in
//! every direction and whose polarization is everywhere orthogonal to the
//! first. No optimization is involved; the construction is exact.
//!
//! Rectangular (URA) weights are composed from per-dimension vectors: an
//! elevation pair `u1_a, u1_b` and an azimuth pair `v_alpha, v_beta`. Each
//! polarization's weight matrix is the sum of two outer products, and the
//! zero-power / non-zero-power partition keeps those two contributions on
//! disjoint element sets so no amplifier ever sums two terms coherently.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::array::ArrayKind;
use crate::pattern::{DualPolWeights, PatternError};

/// Errors from companion construction and composition.
#[derive(Debug, Clone, PartialEq)]
pub enum CompanionError {
    /// Input weights have the wrong kind for the requested operation.
    ShapeMismatch(&'static str),
    /// The composition would sum two contributions on one element.
    Partition(PartitionViolation),
    /// Underlying weight construction failed.
    Pattern(PatternError),
}

impl fmt::Display for CompanionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompanionError::ShapeMismatch(what) => write!(f, "shape mismatch: {what}"),
            CompanionError::Partition(v) => write!(f, "{v}"),
            CompanionError::Pattern(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CompanionError {}

impl From<PatternError> for CompanionError {
    fn from(e: PatternError) -> Self {
        CompanionError::Pattern(e)
    }
}

/// Matrix axis selector for [`reverse_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
    Both,
}

/// Index reversal of a vector. Applying it twice is the identity.
pub fn reverse<T: Clone>(xs: &[T]) -> Vec<T> {
    xs.iter().rev().cloned().collect()
}

/// Index reversal of a column-major `n_rows x n_cols` matrix along the given
/// axis. Reversing both axes is a 180 degree rotation of the entries, which
/// for column-major storage equals flat reversal.
pub fn reverse_matrix<T: Clone>(
    data: &[T],
    n_rows: usize,
    n_cols: usize,
    axis: Axis,
) -> Vec<T> {
    assert_eq!(data.len(), n_rows * n_cols, "matrix data does not match its shape");
    let mut out = Vec::with_capacity(data.len());
    for n in 0..n_cols {
        for m in 0..n_rows {
            let (sm, sn) = match axis {
                Axis::Rows => (n_rows - 1 - m, n),
                Axis::Cols => (m, n_cols - 1 - n),
                Axis::Both => (n_rows - 1 - m, n_cols - 1 - n),
            };
            out.push(data[sn * n_rows + sm].clone());
        }
    }
    out
}

/// Shared companion body: reverse both weight sets through the array center,
/// conjugate, swap polarizations, negate the A side. Column-major storage
/// makes the (for URA: both-axis) reversal a flat reversal.
fn companion_flat(w: &DualPolWeights) -> Result<DualPolWeights, CompanionError> {
    let w2_a: Vec<Complex64> = w.w_b().iter().rev().map(|v| -v.conj()).collect();
    let w2_b: Vec<Complex64> = w.w_a().iter().rev().map(|v| v.conj()).collect();
    DualPolWeights::from_parts(w.kind(), w.n_rows(), w.n_cols(), w2_a, w2_b)
        .map_err(CompanionError::Pattern)
}

/// Companion beam of ULA weights:
/// `w2_a = -reverse(conj(w_b))`, `w2_b = +reverse(conj(w_a))`.
///
/// The result has the identical total power pattern and everywhere
/// orthogonal polarization. Applying the construction twice negates the
/// original weights, which leaves the power pattern unchanged.
pub fn companion_ula(w: &DualPolWeights) -> Result<DualPolWeights, CompanionError> {
    if w.kind() != ArrayKind::Ula {
        return Err(CompanionError::ShapeMismatch("companion_ula expects ULA weights"));
    }
    companion_flat(w)
}

/// Companion beam of URA weights: reversal along both axes,
/// `W2_a = -reverse_both(conj(W_b))`, `W2_b = +reverse_both(conj(W_a))`.
/// Element `(m, n)` of beam 1 maps to `(M-1-m, N-1-n)` of beam 2 with
/// conjugation, polarization swap, and A-side negation.
pub fn companion_ura(w: &DualPolWeights) -> Result<DualPolWeights, CompanionError> {
    if w.kind() != ArrayKind::Ura {
        return Err(CompanionError::ShapeMismatch("companion_ura expects URA weights"));
    }
    companion_flat(w)
}

/// How a rectangular composition uses the two polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionMode {
    /// Dual-polarization beamforming in both dimensions: the elevation pair
    /// `u1_a, u1_b` shares a support that must be disjoint from its own
    /// reversal (default scheme: first half of the rows).
    DpbfBoth,
    /// Single-polarization elevation: `u1_b` is identically zero and the
    /// azimuth pair carries the dual-polarization structure.
    SpbfElevation,
}

/// Per-dimension factors for composing URA weights.
///
/// `u1_a`, `u1_b` excite the M rows (the virtual column element); `v_alpha`,
/// `v_beta` excite the N columns. `compose_ura` turns these into full M x N
/// weight matrices per polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct UraComposition {
    /// Elevation excitation, polarization A port, length M.
    pub u1_a: Vec<Complex64>,
    /// Elevation excitation, polarization B port, length M.
    pub u1_b: Vec<Complex64>,
    /// Azimuth excitation multiplying the direct elevation terms, length N.
    pub v_alpha: Vec<Complex64>,
    /// Azimuth excitation multiplying the reversed-conjugate terms, length N.
    pub v_beta: Vec<Complex64>,
    /// Polarization usage scheme.
    pub mode: CompositionMode,
}

/// Report of elements that would receive two coherent contributions, plus
/// mode-invariant breaches.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionViolation {
    /// Rows of polarization A receiving contributions from both outer
    /// products (support of `u1_a` meets the reversed support of `u1_b`).
    pub rows_a: Vec<usize>,
    /// Rows of polarization B receiving contributions from both outer
    /// products.
    pub rows_b: Vec<usize>,
    /// Columns where both azimuth factors are nonzero; an overlap needs at
    /// least one such column.
    pub cols: Vec<usize>,
    /// dpbf-both only: rows where the supports of `u1_a` and `u1_b` differ.
    pub support_mismatch: Vec<usize>,
    /// spbf-elevation only: rows where `u1_b` is nonzero but must be ZP.
    pub nonzero_u1_b: Vec<usize>,
}

impl PartitionViolation {
    pub fn is_violation(&self) -> bool {
        let overlap = !self.cols.is_empty() && (!self.rows_a.is_empty() || !self.rows_b.is_empty());
        overlap || !self.support_mismatch.is_empty() || !self.nonzero_u1_b.is_empty()
    }
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "partition violation:")?;
        if !self.rows_a.is_empty() {
            write!(f, " polarization A rows {:?} receive two contributions;", self.rows_a)?;
        }
        if !self.rows_b.is_empty() {
            write!(f, " polarization B rows {:?} receive two contributions;", self.rows_b)?;
        }
        if !self.cols.is_empty() {
            write!(f, " overlapping columns {:?};", self.cols)?;
        }
        if !self.support_mismatch.is_empty() {
            write!(
                f,
                " u1_a/u1_b supports differ at rows {:?} (dpbf-both needs equal supports);",
                self.support_mismatch
            )?;
        }
        if !self.nonzero_u1_b.is_empty() {
            write!(
                f,
                " u1_b nonzero at rows {:?} (spbf-elevation needs u1_b = 0);",
                self.nonzero_u1_b
            )?;
        }
        Ok(())
    }
}

fn support(xs: &[Complex64]) -> Vec<bool> {
    xs.iter().map(|v| *v != Complex64::new(0.0, 0.0)).collect()
}

/// Checks the zero-power / non-zero-power partition of a composition.
///
/// Ok iff, per polarization, the element supports of the two outer-product
/// terms are disjoint (no element sums two coherent contributions), and the
/// mode invariants hold: equal `u` supports for dpbf-both, zero `u1_b` for
/// spbf-elevation. The violation is a return value, not a fault.
pub fn validate_partition(c: &UraComposition) -> Result<(), PartitionViolation> {
    assert_eq!(c.u1_a.len(), c.u1_b.len(), "elevation vectors must have equal length");
    assert_eq!(c.v_alpha.len(), c.v_beta.len(), "azimuth vectors must have equal length");
    let m = c.u1_a.len();
    let sup_a = support(&c.u1_a);
    let sup_b = support(&c.u1_b);
    let sup_va = support(&c.v_alpha);
    let sup_vb = support(&c.v_beta);

    let mut v = PartitionViolation::default();
    for (n, (a, b)) in sup_va.iter().zip(sup_vb.iter()).enumerate() {
        if *a && *b {
            v.cols.push(n);
        }
    }
    // Polarization A terms occupy supp(u1_a) and reverse(supp(u1_b));
    // polarization B terms occupy supp(u1_b) and reverse(supp(u1_a)).
    for mm in 0..m {
        if sup_a[mm] && sup_b[m - 1 - mm] {
            v.rows_a.push(mm);
        }
        if sup_b[mm] && sup_a[m - 1 - mm] {
            v.rows_b.push(mm);
        }
    }
    match c.mode {
        CompositionMode::DpbfBoth => {
            for mm in 0..m {
                if sup_a[mm] != sup_b[mm] {
                    v.support_mismatch.push(mm);
                }
            }
        }
        CompositionMode::SpbfElevation => {
            for (mm, s) in sup_b.iter().enumerate() {
                if *s {
                    v.nonzero_u1_b.push(mm);
                }
            }
        }
    }
    if v.is_violation() {
        Err(v)
    } else {
        Ok(())
    }
}

/// Composes URA weights from per-dimension factors:
///
/// `W1_a = u1_a v_alpha^T - reverse(conj(u1_b)) v_beta^T`
/// `W1_b = u1_b v_alpha^T + reverse(conj(u1_a)) v_beta^T`
///
/// The second terms are the elevation companion pair, so each column of the
/// array radiates the wide elevation beam on both polarization ports while
/// the azimuth factors shape the horizontal cut. The partition is validated
/// first; with it satisfied, every element receives at most one contribution.
/// Amplitude-tapered factors are permitted; the resulting taper shows up as
/// a positive weighting loss rather than an error.
pub fn compose_ura(c: &UraComposition) -> Result<DualPolWeights, CompanionError> {
    let m = c.u1_a.len();
    let n = c.v_alpha.len();
    if m == 0 || n == 0 {
        return Err(CompanionError::ShapeMismatch("composition vectors must be nonempty"));
    }
    if c.u1_b.len() != m {
        return Err(CompanionError::ShapeMismatch("u1_a and u1_b lengths differ"));
    }
    if c.v_beta.len() != n {
        return Err(CompanionError::ShapeMismatch("v_alpha and v_beta lengths differ"));
    }
    validate_partition(c).map_err(CompanionError::Partition)?;
    let mut w_a = Vec::with_capacity(m * n);
    let mut w_b = Vec::with_capacity(m * n);
    for nn in 0..n {
        for mm in 0..m {
            let u2_b = c.u1_a[m - 1 - mm].conj(); // elevation companion, B side
            let u2_a = -c.u1_b[m - 1 - mm].conj(); // elevation companion, A side
            w_a.push(c.u1_a[mm] * c.v_alpha[nn] + u2_a * c.v_beta[nn]);
            w_b.push(c.u1_b[mm] * c.v_alpha[nn] + u2_b * c.v_beta[nn]);
        }
    }
    DualPolWeights::ura(m, n, w_a, w_b).map_err(CompanionError::Pattern)
}

/// The azimuth-factor substitution that realizes the companion beam at the
/// factor level: `v2_alpha = -reverse(conj(v_beta))`,
/// `v2_beta = +reverse(conj(v_alpha))`, elevation vectors unchanged.
/// Composing the result equals applying [`companion_ura`] to the composed
/// matrix.
pub fn companion_v_factors(c: &UraComposition) -> UraComposition {
    UraComposition {
        u1_a: c.u1_a.clone(),
        u1_b: c.u1_b.clone(),
        v_alpha: c.v_beta.iter().rev().map(|v| -v.conj()).collect(),
        v_beta: c.v_alpha.iter().rev().map(|v| v.conj()).collect(),
        mode: c.mode,
    }
}
