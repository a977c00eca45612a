//! Dual-polarization beamforming for uniform linear and rectangular arrays.
//!
//! A dual-polarized array drives every radiating element through two
//! orthogonally polarized ports. The total radiated power in a direction is
//! the sum of the two per-polarization powers, which makes it possible to
//! synthesize wide shaped beams with phase-only tapers: the amplitude degrees
//! of freedom that single-polarization synthesis spends on the taper are
//! replaced by the freedom to split power between the two ports. Phase-only
//! tapers drive every power amplifier at full magnitude, so the weighting
//! loss is 0 dB.
//!
//! The crate provides:
//!
//! - [`array`]: geometry, steering vectors, and Gaussian element patterns,
//! - [`pattern`]: far-field evaluation, power patterns, normalization,
//!   beamwidth measurement, and polarization metrics,
//! - [`companion`]: the closed-form second beam with identical total power
//!   pattern and everywhere-orthogonal polarization, plus the rectangular
//!   composition with its zero-power / non-zero-power row partition,
//! - [`synthesis`]: deterministic multi-start derivative-free synthesis
//!   against Gaussian or tabulated targets,
//! - [`tol`]: the numeric tolerances the invariants are verified against.
//!
//! The core is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature to build it for embedded targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod array;
pub mod companion;
pub mod pattern;
pub mod simplex;
pub mod synthesis;
pub mod tol;

pub use num_complex::Complex64;

pub use array::{ArrayGeometry, ArrayKind, Direction, ElementPattern};
pub use companion::{
    companion_ula, companion_ura, compose_ura, validate_partition, CompositionMode,
    UraComposition,
};
pub use pattern::{AngularGrid, DualPolWeights, FieldPattern, PolarizationEllipse, PowerPattern};
pub use synthesis::{
    synthesize_dpbf, synthesize_spbf, synthesize_ura, SynthesisConfig, SynthesisResult,
    TaperMode, TargetPattern,
};
