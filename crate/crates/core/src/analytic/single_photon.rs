//! Moments of an arbitrary product state conditioned on one photon
//! detection, evaluated through factorized distinct-index sums.
//!
//! The conditioned state Ê⁺ρ₀Ê⁻/F expands, for a product ρ₀, into sums over
//! pairwise-distinct emitters of per-emitter factors. Every such sum has
//! order ≤ 4 and is evaluated with [`super::distinct_sum`], so one full
//! moment set costs O(N) after the per-emitter precomputation — the quadruple
//! sums never run as explicit loops.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::distinct_sum::{d1, d2, d3, d4};
use crate::error::{Error, Result};
use crate::geometry::WaveDirection;
use crate::moments::FieldMoments;
use crate::states::ProductState;

const ZERO_WEIGHT_TOL: f64 = 1e-12;

/// Per-emitter factor arrays entering the restricted sums for a detection
/// direction k_d: u_p = e^{-i k_d·r_p} ρ_p^{eg} and its conjugate, the
/// quadrature combinations x = u + ū and (u − ū), populations and inversions.
struct Factors {
    ee: Vec<Complex64>,
    z: Vec<Complex64>,
    u: Vec<Complex64>,
    ubar: Vec<Complex64>,
    x: Vec<Complex64>,
    udiff: Vec<Complex64>,
}

impl Factors {
    fn build(state: &ProductState, k_d: WaveDirection) -> Self {
        let phases = state.geometry().detection_phases(k_d);
        let n = state.len();
        let mut f = Factors {
            ee: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            ubar: Vec::with_capacity(n),
            x: Vec::with_capacity(n),
            udiff: Vec::with_capacity(n),
        };
        for (e, d) in state.emitters().iter().zip(&phases) {
            let u = d * e.eg();
            f.ee.push(Complex64::new(e.ee(), 0.0));
            f.z.push(Complex64::new(e.inversion(), 0.0));
            f.u.push(u);
            f.ubar.push(u.conj());
            f.x.push(u + u.conj());
            f.udiff.push(u - u.conj());
        }
        f
    }

    /// Detection-event weight F = Σ_p ρ_p^{ee} + Σ_{p≠q} u_p ū_q.
    fn weight(&self) -> f64 {
        (d1(&self.ee) + d2(&self.u, &self.ubar)).re
    }
}

/// All six k_d-aligned moments (first and diagonal second) of an arbitrary
/// product state after one detection at k_d, measured at k_w = k_d, plus the
/// event weight F.
///
/// Cross moments of the triple are not covered by these closed forms and are
/// left zero; the fixed-triple squeezing parameter needs only the diagonal.
pub fn single_photon_moments(state: &ProductState, k_d: WaveDirection) -> Result<FieldMoments> {
    let n = state.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "single-photon moments need at least 2 emitters".into(),
        ));
    }
    let f = Factors::build(state, k_d);
    let weight = f.weight();
    if weight <= ZERO_WEIGHT_TOL {
        return Err(Error::ImpossibleDetection);
    }
    let nf = n as f64;
    let i = Complex64::i();

    let x_mean = d2(&f.x, &f.ee) + d2(&f.ee, &f.ubar) + d2(&f.ee, &f.u) + d3(&f.x, &f.u, &f.ubar);

    let y_mean = i
        * (d2(&f.udiff, &f.ee) - d2(&f.ee, &f.ubar)
            + d2(&f.ee, &f.u)
            + d3(&f.udiff, &f.u, &f.ubar));

    let z_mean = -d1(&f.ee) + d2(&f.z, &f.ee) - d2(&f.u, &f.ubar) - d2(&f.ubar, &f.u)
        + d3(&f.z, &f.u, &f.ubar);

    let xx = d3(&f.x, &f.x, &f.ee)
        + 2.0 * d2(&f.ee, &f.ee)
        + 2.0 * d3(&f.ee, &f.x, &f.ubar)
        + 2.0 * d3(&f.ee, &f.x, &f.u)
        + d4(&f.x, &f.x, &f.u, &f.ubar);

    let yy = -d3(&f.udiff, &f.udiff, &f.ee)
        + 2.0 * d2(&f.ee, &f.ee)
        + 2.0 * d3(&f.ee, &f.udiff, &f.ubar)
        - 2.0 * d3(&f.ee, &f.udiff, &f.u)
        - d4(&f.udiff, &f.udiff, &f.u, &f.ubar);

    let zz = -d2(&f.ee, &f.z) - d2(&f.z, &f.ee) + d3(&f.z, &f.z, &f.ee) + 2.0 * d2(&f.u, &f.ubar)
        - 4.0 * d3(&f.u, &f.z, &f.ubar)
        + d4(&f.z, &f.z, &f.u, &f.ubar);

    let first = Vector3::new(x_mean.re, y_mean.re, z_mean.re) / weight;
    let second = Matrix3::from_diagonal(&Vector3::new(
        nf + xx.re / weight,
        nf + yy.re / weight,
        nf + zz.re / weight,
    ));

    Ok(FieldMoments {
        n,
        first,
        second,
        weight,
    })
}

/// O(1) moment set for the phase-free homogeneous case: a coherent spin
/// state driven, detected, and measured along one common direction, so that
/// every optical phase cancels. Equals [`single_photon_moments`] for any
/// geometry when k_d = k_w = k_L.
pub fn homogeneous_css_moments(n: usize, theta: f64) -> Result<FieldMoments> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "homogeneous moments need at least 2 emitters".into(),
        ));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "CSS polar angle must lie in [0, π], got {theta}"
        )));
    }
    let nf = n as f64;
    let ree = (theta / 2.0).sin().powi(2);
    let rgg = 1.0 - ree;
    let reg = (theta / 2.0).sin() * (theta / 2.0).cos();
    let rge = reg;
    let z = ree - rgg;

    let c1 = nf * (nf - 1.0);
    let c2 = c1 * (nf - 2.0);
    let c3 = c2 * (nf - 3.0);

    let weight = nf * ree + c1 * reg * rge;
    if weight <= ZERO_WEIGHT_TOL {
        return Err(Error::ImpossibleDetection);
    }

    let x_mean =
        (ree * (reg + rge) * c1 + ree * rge * c1 + ree * reg * c1 + reg * rge * (reg + rge) * c2)
            / weight;
    let y_mean = 0.0;
    let z_mean = (-nf * ree + c1 * ree * z - 2.0 * c1 * reg * rge + c2 * reg * rge * z) / weight;

    let sum_eg = reg + rge;
    let diff_eg = reg - rge;
    let xx = nf
        + (c2 * ree * sum_eg * sum_eg
            + 2.0 * c1 * ree * ree
            + 2.0 * c2 * ree * sum_eg * rge
            + 2.0 * c2 * ree * sum_eg * reg
            + c3 * sum_eg * sum_eg * reg * rge)
            / weight;
    let yy = nf
        + (-c2 * ree * diff_eg * diff_eg + 2.0 * c1 * ree * ree + 2.0 * c2 * ree * diff_eg * rge
            - 2.0 * c2 * ree * diff_eg * reg
            - c3 * diff_eg * diff_eg * reg * rge)
            / weight;
    let zz = nf
        + (-2.0 * c1 * ree * z + c2 * z * z * ree + 2.0 * c1 * reg * rge
            - 4.0 * c2 * reg * z * rge
            + c3 * z * z * reg * rge)
            / weight;

    Ok(FieldMoments {
        n,
        first: Vector3::new(x_mean, y_mean, z_mean),
        second: Matrix3::from_diagonal(&Vector3::new(xx, yy, zz)),
        weight,
    })
}

/// Scattered intensity ⟨Ê⁻_kw Ê⁺_kw⟩ of a product state conditioned on one
/// detection at k_d, for an arbitrary measurement direction k_w.
///
/// Seven distinct-index terms of order ≤ 4; the per-emitter factors combine
/// detection phases (u_p), measurement phases (m_p = e^{-i k_w·r_p} ρ_p^{eg})
/// and the mixed population factor g_p = e^{-i(k_d−k_w)·r_p} ρ_p^{ee}.
pub fn single_photon_intensity(
    state: &ProductState,
    k_d: WaveDirection,
    k_w: WaveDirection,
) -> Result<f64> {
    let n = state.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "single-photon intensity needs at least 2 emitters".into(),
        ));
    }
    let f = Factors::build(state, k_d);
    let weight = f.weight();
    if weight <= ZERO_WEIGHT_TOL {
        return Err(Error::ImpossibleDetection);
    }

    let w_phases = state.geometry().detection_phases(k_w);
    let d_phases = state.geometry().detection_phases(k_d);
    let mut m = Vec::with_capacity(n);
    let mut mbar = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut gbar = Vec::with_capacity(n);
    for ((e, w), d) in state.emitters().iter().zip(&w_phases).zip(&d_phases) {
        let mp = w * e.eg();
        let gp = d * w.conj() * e.ee();
        m.push(mp);
        mbar.push(mp.conj());
        g.push(gp);
        gbar.push(gp.conj());
    }

    let total = d2(&f.ee, &f.ee)
        + d3(&f.u, &f.ubar, &f.ee)
        + d3(&f.ee, &m, &mbar)
        + d2(&g, &gbar)
        + d3(&f.u, &gbar, &mbar)
        + d3(&g, &f.ubar, &m)
        + d4(&f.u, &f.ubar, &m, &mbar);

    Ok(total.re / weight)
}
