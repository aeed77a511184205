//! Closed forms for same-direction multi-photon postselection: the Dicke
//! cascade (fully excited), the fully mixed state, and homogeneous
//! population states.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::moments::FieldMoments;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 emitters, got {n}"
        )));
    }
    Ok(())
}

fn check_nu(n: usize, nu: usize, min: usize) -> Result<()> {
    if nu < min || nu > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "photon number ν = {nu} outside [{min}, N−1 = {}]",
            n - 1
        )));
    }
    Ok(())
}

/// ξ² after ν same-direction detections from the fully excited state:
/// (N − 2ν)² / N². Direction-independent.
pub fn xi2_fully_excited(n: usize, nu: usize) -> Result<f64> {
    check_n(n)?;
    check_nu(n, nu, 0)?;
    let nf = n as f64;
    let d = nf - 2.0 * nu as f64;
    Ok(d * d / (nf * nf))
}

/// ξ² after ν detections along k_d from the fully mixed state, measured
/// along k_w, with `f` the structure factor f(k_d − k_w):
///
///   ξ² = (ν² + N(N−ν)) / (N + ν(ν−1) + 2ν(N−ν)·f/(N(N−1))).
pub fn xi2_fully_mixed(n: usize, nu: usize, f: f64) -> Result<f64> {
    check_n(n)?;
    check_nu(n, nu, 1)?;
    let nf = n as f64;
    if f < -nf {
        return Err(Error::InvalidParameter(format!(
            "structure factor below its bound: f = {f} < −N = {}",
            -nf
        )));
    }
    let nuf = nu as f64;
    let numerator = nuf * nuf + nf * (nf - nuf);
    let denominator = nf + nuf * (nuf - 1.0) + 2.0 * nuf * (nf - nuf) * f / (nf * (nf - 1.0));
    if denominator <= 0.0 {
        return Err(Error::IndeterminateWitness);
    }
    Ok(numerator / denominator)
}

/// Optimal photon number for the fully mixed state at k_d = k_w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalNu {
    /// Continuous minimizer (−N − N² + √(N² + 3N⁴))/(N − 1).
    pub nu_real: f64,
    /// Best integer in {1..N−1} among floor/ceil of `nu_real`.
    pub nu_int: usize,
    /// ξ² evaluated at `nu_int` with f = N(N−1).
    pub xi2_at_opt: f64,
}

/// Minimizes ξ² of the fully mixed state over the photon number.
///
/// The continuous minimizer converges to (√3 − 1)·N for large N, where the
/// squeezing parameter approaches its bound √3/2 (≈ 0.62 dB). At small N the
/// floor and ceil of the continuous value can differ in ξ², so both are
/// evaluated rather than trusting the asymptotic floor.
pub fn optimal_nu_fully_mixed(n: usize) -> Result<OptimalNu> {
    check_n(n)?;
    let nf = n as f64;
    let nu_real = (-nf - nf * nf + (nf * nf + 3.0 * nf.powi(4)).sqrt()) / (nf - 1.0);
    let f = nf * (nf - 1.0);
    let clamp = |v: f64| -> usize { (v.max(1.0) as usize).min(n - 1).max(1) };
    let lo = clamp(nu_real.floor());
    let hi = clamp(nu_real.ceil());
    let xi_lo = xi2_fully_mixed(n, lo, f)?;
    let xi_hi = xi2_fully_mixed(n, hi, f)?;
    let (nu_int, xi2_at_opt) = if xi_hi < xi_lo {
        (hi, xi_hi)
    } else {
        (lo, xi_lo)
    };
    Ok(OptimalNu {
        nu_real,
        nu_int,
        xi2_at_opt,
    })
}

/// Field moments of a homogeneous population state (inversion
/// vᶻ = −cos θ̄ on every emitter) after ν detections along k_d, measured
/// along k_w with structure factor `f  = f(k_d − k_w)`:
///
///   ⟨Z⟩  = −ν + vᶻ(N−ν)
///   ⟨X²⟩ = ⟨Y²⟩ = N + (1+vᶻ)·ν(N−ν)·f/(N(N−1))
///   ⟨Z²⟩ = N + ν(ν−1) − 2ν(N−ν)vᶻ + g·(N−ν)(N−ν−1)(vᶻ)²
///
/// with first transverse moments and all cross moments zero. The guard g
/// drops the last ⟨Z²⟩ term when N = 2 or ν = N−1, where fewer than two
/// undetected emitters remain and the corresponding restricted sum is empty.
pub fn population_moments(n: usize, nu: usize, theta_bar: f64, f: f64) -> Result<FieldMoments> {
    check_n(n)?;
    check_nu(n, nu, 1)?;
    check_theta_bar(theta_bar)?;
    let nf = n as f64;
    if f < -nf {
        return Err(Error::InvalidParameter(format!(
            "structure factor below its bound: f = {f} < −N = {}",
            -nf
        )));
    }
    let nuf = nu as f64;
    let vz = -theta_bar.cos();
    let xx = nf + (1.0 + vz) * nuf * (nf - nuf) * f / (nf * (nf - 1.0));
    let edge = if n == 2 || nu == n - 1 { 0.0 } else { 1.0 };
    let zz = nf + nuf * (nuf - 1.0) - 2.0 * nuf * (nf - nuf) * vz
        + edge * (nf - nuf) * (nf - nuf - 1.0) * vz * vz;
    let z_mean = -nuf + vz * (nf - nuf);

    let weight = population_event_weight(n, nu, (1.0 + vz) / 2.0);

    Ok(FieldMoments {
        n,
        first: Vector3::new(0.0, 0.0, z_mean),
        second: Matrix3::from_diagonal(&Vector3::new(xx, xx, zz)),
        weight,
    })
}

/// Detection-event weight Tr[Ê⁺ᵛ ρ₀ Ê⁻ᵛ] = ν!·N!/(N−ν)!·ρ_ee^ν of a
/// homogeneous population state, as a running product of per-photon factors
/// (k+1)(N−k)·ρ_ee. Overflows to +∞ for factorially large records near
/// N = 100, ν = N−1.
pub fn population_event_weight(n: usize, nu: usize, ee: f64) -> f64 {
    let nf = n as f64;
    (0..nu).fold(1.0f64, |w, k| w * (k + 1) as f64 * (nf - k as f64) * ee)
}

fn check_theta_bar(theta_bar: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&theta_bar) {
        return Err(Error::InvalidParameter(format!(
            "population angle must lie in [0, π], got {theta_bar}"
        )));
    }
    if theta_bar == 0.0 {
        // Ground state: every detection record has zero weight.
        return Err(Error::ImpossibleDetection);
    }
    Ok(())
}

/// ξ² of a homogeneous population state after ν detections, k_d = k_w:
///
///   ξ² = [N² + (ν² − νN)(1 − cos θ̄)²]
///      / [N + N(N−1)cos²θ̄ − (ν² − ν(2N−1))sin²θ̄].
pub fn xi2_population(n: usize, nu: usize, theta_bar: f64) -> Result<f64> {
    check_n(n)?;
    check_nu(n, nu, 1)?;
    check_theta_bar(theta_bar)?;
    let nf = n as f64;
    let nuf = nu as f64;
    let cos = theta_bar.cos();
    let sin2 = theta_bar.sin().powi(2);
    let one_minus_cos = 1.0 - cos;
    let numerator = nf * nf + (nuf * nuf - nuf * nf) * one_minus_cos * one_minus_cos;
    let denominator =
        nf + nf * (nf - 1.0) * cos * cos - (nuf * nuf - nuf * (2.0 * nf - 1.0)) * sin2;
    if denominator <= 0.0 {
        return Err(Error::IndeterminateWitness);
    }
    Ok(numerator / denominator)
}

/// Smallest photon number that squeezes a population state:
/// the least integer ν with ν > (N−1)·cos²(θ̄/2).
///
/// Returns [`Error::NoSqueezingPossible`] when that integer exceeds N−1
/// (numerically possible only as θ̄ → 0).
pub fn population_threshold(n: usize, theta_bar: f64) -> Result<usize> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "population threshold is derived for N > 2, got {n}"
        )));
    }
    check_theta_bar(theta_bar)?;
    let bound = (n - 1) as f64 * (theta_bar / 2.0).cos().powi(2);
    let nu = bound.floor() as usize + 1;
    if nu > n - 1 {
        return Err(Error::NoSqueezingPossible);
    }
    Ok(nu)
}
