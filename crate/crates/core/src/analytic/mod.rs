//! Closed-form engine.
//!
//! Everything here evaluates postselection quantities without touching a
//! 2^N object: Dicke-cascade and fully-mixed squeezing parameters, population
//! states after ν same-direction detections, and the single-detection moments
//! of an arbitrary product state. Restricted (pairwise-distinct-index) sums
//! are factorized through [`distinct_product_sum`], which keeps a single
//! evaluation linear in N and lets sweeps reach hundreds of emitters.
//!
//! The dense engine in [`crate::exact`] is the ground truth these formulas
//! are tested against; no closed form exists for multi-photon detection from
//! states with optical coherences, and such cases are deliberately not
//! handled here.

mod closed_form;
mod distinct_sum;
mod single_photon;

pub use closed_form::{
    optimal_nu_fully_mixed, population_event_weight, population_moments, population_threshold,
    xi2_fully_excited, xi2_fully_mixed, xi2_population, OptimalNu,
};
pub use distinct_sum::{distinct_product_sum, DistinctSumInput};
pub use single_photon::{homogeneous_css_moments, single_photon_intensity, single_photon_moments};
