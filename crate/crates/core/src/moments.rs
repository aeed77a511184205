//! First and second moments of the far-field triple (X_kw, Y_kw, Z).

use nalgebra::{Matrix3, Vector3};

/// Moments of the quadrature/inversion triple for an N-emitter state.
///
/// `second[(i, j)]` holds the symmetrized moment ⟨(E_i E_j + E_j E_i)/2⟩ over
/// the ordered triple (X, Y, Z). `weight` carries the unnormalized trace of
/// the postselected state that produced these moments (the detection-event
/// weight), or 1 for moments of an already-normalized state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMoments {
    pub n: usize,
    pub first: Vector3<f64>,
    pub second: Matrix3<f64>,
    pub weight: f64,
}

impl FieldMoments {
    /// Variance of component `i` of the triple.
    pub fn variance(&self, i: usize) -> f64 {
        self.second[(i, i)] - self.first[i] * self.first[i]
    }

    /// ⟨X²⟩ + ⟨Y²⟩ + ⟨Z²⟩.
    pub fn total_second(&self) -> f64 {
        self.second.trace()
    }
}
