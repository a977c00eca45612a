//! Numeric tolerances for the identities the library guarantees.
//!
//! Each constant documents why its magnitude is what it is. Exact identities
//! (sign flips, conjugations, index reversals) get tolerances near machine
//! epsilon; anything that accumulates rounding through sums or transcendental
//! functions gets proportionally more headroom.

/// Steering-vector entries are single `cos`/`sin` pairs, so their magnitude
/// deviates from 1 by at most a few ulps.
pub const STEERING_UNIT_MAG_TOL: f64 = 1e-14;

/// Element position centroids cancel exactly for a centered uniform grid;
/// the tolerance only covers the summation rounding.
pub const CENTROID_TOL: f64 = 1e-14;

/// Pointwise `p_total = p_a + p_b` holds by construction; relative slack for
/// one floating add.
pub const POWER_SPLIT_REL_TOL: f64 = 1e-12;

/// Polarization parallelity of a beam and its companion. The cancellation is
/// algebraically exact for centered arrays; the residual is rounding in the
/// field sums, normalized here for unit-energy weights.
pub const PARALLELITY_TOL: f64 = 1e-12;

/// Relative total-power mismatch between a beam and its companion.
pub const POWER_IDENTITY_REL_TOL: f64 = 1e-12;

/// Companion construction permutes, conjugates, and negates weights, all of
/// which preserve per-entry magnitude exactly; only the energy summation
/// order differs.
pub const ENERGY_REL_TOL: f64 = 1e-14;

/// Applying the companion twice negates the original weights exactly.
pub const INVOLUTION_TOL: f64 = 1e-14;

/// Factor-level and matrix-level rectangular companion paths evaluate the
/// same products in a commuted order, so they agree to rounding.
pub const PATH_AGREEMENT_TOL: f64 = 1e-12;

/// Phase-only weights have unit modulus by construction; the weighting loss
/// is an exact 0 up to the final logarithm.
pub const PHASE_ONLY_LOSS_TOL: f64 = 1e-10;

/// Shifting all phases by a constant rotates fields without changing powers;
/// slack covers the trigonometric round-trip.
pub const GAUGE_TOL: f64 = 1e-10;

/// A normalized pattern re-integrated over the same grid returns the target
/// to within trapezoid summation rounding.
pub const NORMALIZATION_REL_TOL: f64 = 1e-9;

/// Variance of a dB difference is unchanged when the synthesized pattern is
/// scaled by a constant factor (constant dB offset).
pub const DB_OFFSET_INVARIANCE_TOL: f64 = 1e-12;
