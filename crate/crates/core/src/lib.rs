//! Conditional spin squeezing of two-level emitter ensembles by postselected
//! photon detection.
//!
//! An ensemble of N two-level emitters prepared in a separable state becomes
//! entangled when photon detections along chosen far-field directions are
//! postselected. This crate quantifies that entanglement through field-based
//! squeezing parameters and witnesses, with two interchangeable engines:
//!
//! * [`exact`] — a brute-force dense engine (2^N vectors and density
//!   matrices) that conditions states on detection records with no
//!   approximation; the ground truth at small N.
//! * [`analytic`] — closed-form evaluation of the same quantities where a
//!   formula exists (Dicke cascade, fully mixed states, population states,
//!   arbitrary product states after a single detection), scaling to
//!   hundreds of emitters via factorized distinct-index sums.
//!
//! [`witness`] converts field moments into squeezing parameters and
//! entanglement witnesses, and [`runner`] drives parameter sweeps and the
//! `postselect-squeeze` CLI that emits figure data as CSV.

pub mod analytic;
pub mod config;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod moments;
pub mod runner;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{Geometry, WaveDirection};
pub use moments::FieldMoments;
pub use states::{DetectionPlan, EmitterState, ProductState};
