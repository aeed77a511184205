//! Exact dense engine: realize a [`ProductState`] as a full 2^N object, apply
//! far-field detection operators, and evaluate moments with no approximation.
//!
//! Basis convention: computational basis over n two-level emitters, bit
//! b_p = 1 means emitter p excited, emitter 0 is the least-significant bit.
//! Operators built from sums of single-site terms are applied on the fly via
//! bit manipulation; no 2^N × 2^N operator matrix is ever materialized.

use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, WaveDirection};
use crate::moments::FieldMoments;
use crate::states::{DetectionPlan, ProductState};

/// Largest ensemble stored as a pure 2^N vector.
pub const MAX_PURE: usize = 20;
/// Largest ensemble stored as a dense 2^N × 2^N density matrix.
pub const MAX_MIXED: usize = 12;

const ZERO_WEIGHT_TOL: f64 = 1e-12;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A dense 2^N quantum state, either a pure vector or a density matrix.
#[derive(Debug, Clone)]
pub enum DenseQuantumState {
    Pure { n: usize, amps: Vec<Complex64> },
    Mixed { n: usize, rho: Vec<Complex64> },
}

impl DenseQuantumState {
    pub fn n(&self) -> usize {
        match self {
            DenseQuantumState::Pure { n, .. } | DenseQuantumState::Mixed { n, .. } => *n,
        }
    }

    pub fn dim(&self) -> usize {
        1usize << self.n()
    }

    pub fn is_pure_kind(&self) -> bool {
        matches!(self, DenseQuantumState::Pure { .. })
    }

    /// Trace of the state (squared norm for the pure kind).
    pub fn trace(&self) -> f64 {
        match self {
            DenseQuantumState::Pure { amps, .. } => amps.iter().map(|a| a.norm_sqr()).sum(),
            DenseQuantumState::Mixed { n, rho } => {
                let dim = 1usize << n;
                (0..dim).map(|i| rho[i * dim + i].re).sum()
            }
        }
    }

    /// Largest entry of |ρ − ρ†| (0 for the pure kind).
    pub fn hermiticity_error(&self) -> f64 {
        match self {
            DenseQuantumState::Pure { .. } => 0.0,
            DenseQuantumState::Mixed { n, rho } => {
                let dim = 1usize << n;
                let mut worst: f64 = 0.0;
                for r in 0..dim {
                    for c in r..dim {
                        let d = (rho[r * dim + c] - rho[c * dim + r].conj()).norm();
                        worst = worst.max(d);
                    }
                }
                worst
            }
        }
    }

    /// Density-matrix entry ⟨r|ρ|c⟩, available for either kind.
    pub fn matrix_element(&self, r: usize, c: usize) -> Complex64 {
        match self {
            DenseQuantumState::Pure { amps, .. } => amps[r] * amps[c].conj(),
            DenseQuantumState::Mixed { n, rho } => rho[r * (1usize << n) + c],
        }
    }

    /// Debug dump as CSV rows `index,re,im`: amplitudes for the pure kind,
    /// row-major density-matrix entries for the mixed kind. Limited to n ≤ 6.
    pub fn dump_csv<W: Write>(&self, mut w: W) -> Result<()> {
        if self.n() > 6 {
            return Err(Error::InvalidParameter(format!(
                "debug CSV dump supports n ≤ 6, got n = {}",
                self.n()
            )));
        }
        writeln!(w, "index,re,im")?;
        let body: &[Complex64] = match self {
            DenseQuantumState::Pure { amps, .. } => amps,
            DenseQuantumState::Mixed { rho, .. } => rho,
        };
        for (i, v) in body.iter().enumerate() {
            writeln!(w, "{},{},{}", i, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Ladder coefficients for an operator Σ_p (lo_p σ_p⁻ + hi_p σ_p⁺).
struct Ladder {
    lo: Vec<Complex64>,
    hi: Vec<Complex64>,
}

impl Ladder {
    /// Ê⁺ for detection phases w_p = e^{-i k·r_p}.
    fn e_plus(phases: &[Complex64]) -> Self {
        Ladder {
            lo: phases.to_vec(),
            hi: vec![C_ZERO; phases.len()],
        }
    }

    /// Ê⁻ = (Ê⁺)†.
    fn e_minus(phases: &[Complex64]) -> Self {
        Ladder {
            lo: vec![C_ZERO; phases.len()],
            hi: phases.iter().map(|w| w.conj()).collect(),
        }
    }

    /// X̂ = Ê⁺ + Ê⁻.
    fn x(phases: &[Complex64]) -> Self {
        Ladder {
            lo: phases.to_vec(),
            hi: phases.iter().map(|w| w.conj()).collect(),
        }
    }

    /// Ŷ = i(Ê⁺ − Ê⁻).
    fn y(phases: &[Complex64]) -> Self {
        let i = Complex64::i();
        Ladder {
            lo: phases.iter().map(|w| i * w).collect(),
            hi: phases.iter().map(|w| -i * w.conj()).collect(),
        }
    }
}

fn inversion_of(index: usize, n: usize) -> f64 {
    2.0 * index.count_ones() as f64 - n as f64
}

fn pure_apply_ladder(n: usize, op: &Ladder, psi: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = vec![C_ZERO; dim];
    for p in 0..n {
        let bit = 1usize << p;
        let (lp, hp) = (op.lo[p], op.hi[p]);
        if lp == C_ZERO && hp == C_ZERO {
            continue;
        }
        for i in 0..dim {
            let coeff = if i & bit != 0 { lp } else { hp };
            out[i ^ bit] += coeff * psi[i];
        }
    }
    out
}

fn pure_apply_z(n: usize, psi: &[Complex64]) -> Vec<Complex64> {
    psi.iter()
        .enumerate()
        .map(|(i, a)| a * inversion_of(i, n))
        .collect()
}

/// Left multiplication: out = Op · ρ.
fn mixed_left_ladder(n: usize, op: &Ladder, rho: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = vec![C_ZERO; rho.len()];
    for p in 0..n {
        let bit = 1usize << p;
        let (lp, hp) = (op.lo[p], op.hi[p]);
        for r in 0..dim {
            let coeff = if r & bit != 0 { lp } else { hp };
            if coeff == C_ZERO {
                continue;
            }
            let src = r * dim;
            let dst = (r ^ bit) * dim;
            for c in 0..dim {
                out[dst + c] += coeff * rho[src + c];
            }
        }
    }
    out
}

fn mixed_left_z(n: usize, rho: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = vec![C_ZERO; rho.len()];
    for r in 0..dim {
        let z = inversion_of(r, n);
        for c in 0..dim {
            out[r * dim + c] = z * rho[r * dim + c];
        }
    }
    out
}

/// Right multiplication: out = ρ · Op.
fn mixed_right_ladder(n: usize, op: &Ladder, rho: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = vec![C_ZERO; rho.len()];
    for p in 0..n {
        let bit = 1usize << p;
        let (lp, hp) = (op.lo[p], op.hi[p]);
        for r in 0..dim {
            let row = r * dim;
            for c in 0..dim {
                let coeff = if c & bit != 0 { lp } else { hp };
                if coeff == C_ZERO {
                    continue;
                }
                out[row + c] += coeff * rho[row + (c ^ bit)];
            }
        }
    }
    out
}

fn mixed_trace(n: usize, rho: &[Complex64]) -> Complex64 {
    let dim = 1usize << n;
    (0..dim).map(|i| rho[i * dim + i]).sum()
}

/// tr(Op · σ) for a ladder operator, without materializing the product.
fn mixed_trace_ladder(n: usize, op: &Ladder, sigma: &[Complex64]) -> Complex64 {
    let dim = 1usize << n;
    let mut acc = C_ZERO;
    for p in 0..n {
        let bit = 1usize << p;
        let (lp, hp) = (op.lo[p], op.hi[p]);
        if lp == C_ZERO && hp == C_ZERO {
            continue;
        }
        for c in 0..dim {
            let coeff = if c & bit != 0 { lp } else { hp };
            acc += coeff * sigma[c * dim + (c ^ bit)];
        }
    }
    acc
}

fn mixed_trace_z(n: usize, sigma: &[Complex64]) -> Complex64 {
    let dim = 1usize << n;
    (0..dim)
        .map(|r| sigma[r * dim + r] * inversion_of(r, n))
        .sum()
}

/// Expands a separable state into its dense form.
///
/// The result is the pure kind iff every factor is rank one; otherwise the
/// full density matrix is built. Capacity caps differ per kind because the
/// mixed kind squares the storage.
pub fn realize(state: &ProductState) -> Result<DenseQuantumState> {
    let n = state.len();
    if state.is_pure() {
        if n > MAX_PURE {
            return Err(Error::CapacityExceeded {
                n,
                cap: MAX_PURE,
                kind: "pure",
            });
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for e in state.emitters() {
            let (ce, cg) = e.pure_amplitudes();
            let half = amps.len();
            let mut next = vec![C_ZERO; half * 2];
            for (i, a) in amps.iter().enumerate() {
                next[i] = cg * a;
                next[i + half] = ce * a;
            }
            amps = next;
        }
        Ok(DenseQuantumState::Pure { n, amps })
    } else {
        if n > MAX_MIXED {
            return Err(Error::CapacityExceeded {
                n,
                cap: MAX_MIXED,
                kind: "mixed",
            });
        }
        let mut rho = vec![Complex64::new(1.0, 0.0)];
        let mut dim = 1usize;
        for e in state.emitters() {
            // factor[row_bit][col_bit] with bit 1 = excited
            let factor = [
                [Complex64::new(e.gg(), 0.0), e.ge()],
                [e.eg(), Complex64::new(e.ee(), 0.0)],
            ];
            let ndim = dim * 2;
            let mut next = vec![C_ZERO; ndim * ndim];
            for (br, row_block) in factor.iter().enumerate() {
                for (bc, &fv) in row_block.iter().enumerate() {
                    if fv == C_ZERO {
                        continue;
                    }
                    for r in 0..dim {
                        for c in 0..dim {
                            next[(r + br * dim) * ndim + (c + bc * dim)] = fv * rho[r * dim + c];
                        }
                    }
                }
            }
            rho = next;
            dim = ndim;
        }
        Ok(DenseQuantumState::Mixed { n, rho })
    }
}

/// Conditions the state on the detection record: applies Ê⁺ for every
/// direction in the plan, then normalizes.
///
/// Returns the normalized state and the event weight — the squared norm
/// (pure) or trace (mixed) accumulated before normalization. The Ê⁺ factors
/// commute, so the order of the plan is irrelevant.
pub fn postselect(
    state: &DenseQuantumState,
    plan: &DetectionPlan,
    geometry: &Geometry,
) -> Result<(DenseQuantumState, f64)> {
    plan.validate_for(state.n())?;
    let n = state.n();
    match state {
        DenseQuantumState::Pure { amps, .. } => {
            let mut cur = amps.clone();
            for dir in plan.directions() {
                let phases = geometry.detection_phases(*dir);
                cur = pure_apply_ladder(n, &Ladder::e_plus(&phases), &cur);
            }
            let weight: f64 = cur.iter().map(|a| a.norm_sqr()).sum();
            if weight <= ZERO_WEIGHT_TOL {
                return Err(Error::ImpossibleDetection);
            }
            let scale = weight.sqrt().recip();
            for a in &mut cur {
                *a *= scale;
            }
            Ok((DenseQuantumState::Pure { n, amps: cur }, weight))
        }
        DenseQuantumState::Mixed { rho, .. } => {
            let mut cur = rho.clone();
            for dir in plan.directions() {
                let phases = geometry.detection_phases(*dir);
                cur = mixed_left_ladder(n, &Ladder::e_plus(&phases), &cur);
                cur = mixed_right_ladder(n, &Ladder::e_minus(&phases), &cur);
            }
            let weight = mixed_trace(n, &cur).re;
            if weight <= ZERO_WEIGHT_TOL {
                return Err(Error::ImpossibleDetection);
            }
            let scale = weight.recip();
            for v in &mut cur {
                *v *= scale;
            }
            Ok((DenseQuantumState::Mixed { n, rho: cur }, weight))
        }
    }
}

/// All first and symmetrized second moments of (X_kw, Y_kw, Z).
///
/// Expects a normalized state; the returned weight is 1.
pub fn field_moments(
    state: &DenseQuantumState,
    k_w: WaveDirection,
    geometry: &Geometry,
) -> FieldMoments {
    let n = state.n();
    let phases = geometry.detection_phases(k_w);
    let mut first = Vector3::zeros();
    let mut second = Matrix3::zeros();

    match state {
        DenseQuantumState::Pure { amps, .. } => {
            let applied = [
                pure_apply_ladder(n, &Ladder::x(&phases), amps),
                pure_apply_ladder(n, &Ladder::y(&phases), amps),
                pure_apply_z(n, amps),
            ];
            for (j, phi) in applied.iter().enumerate() {
                first[j] = amps.iter().zip(phi).map(|(a, b)| (a.conj() * b).re).sum();
            }
            for i in 0..3 {
                for j in i..3 {
                    // ⟨(A_i A_j + A_j A_i)/2⟩ = Re⟨A_i ψ | A_j ψ⟩ for Hermitian A.
                    let m: f64 = applied[i]
                        .iter()
                        .zip(&applied[j])
                        .map(|(a, b)| (a.conj() * b).re)
                        .sum();
                    second[(i, j)] = m;
                    second[(j, i)] = m;
                }
            }
        }
        DenseQuantumState::Mixed { rho, .. } => {
            let x = Ladder::x(&phases);
            let y = Ladder::y(&phases);
            for j in 0..3 {
                let sigma = match j {
                    0 => mixed_left_ladder(n, &x, rho),
                    1 => mixed_left_ladder(n, &y, rho),
                    _ => mixed_left_z(n, rho),
                };
                first[j] = mixed_trace(n, &sigma).re;
                for i in 0..=j {
                    // Symmetrized moment: Re tr(A_i A_j ρ), since
                    // tr(A_j A_i ρ) is its complex conjugate.
                    let m = match i {
                        0 => mixed_trace_ladder(n, &x, &sigma),
                        1 => mixed_trace_ladder(n, &y, &sigma),
                        _ => mixed_trace_z(n, &sigma),
                    }
                    .re;
                    second[(i, j)] = m;
                    second[(j, i)] = m;
                }
            }
        }
    }

    FieldMoments {
        n,
        first,
        second,
        weight: 1.0,
    }
}

/// Tr(ρ²): exactly 1 for the pure kind.
pub fn purity(state: &DenseQuantumState) -> f64 {
    match state {
        DenseQuantumState::Pure { .. } => 1.0,
        DenseQuantumState::Mixed { rho, .. } => rho.iter().map(|v| v.norm_sqr()).sum(),
    }
}

/// Scattered intensity ⟨Ê⁻_kw Ê⁺_kw⟩ of a normalized state.
pub fn intensity(state: &DenseQuantumState, k_w: WaveDirection, geometry: &Geometry) -> f64 {
    let n = state.n();
    let phases = geometry.detection_phases(k_w);
    match state {
        DenseQuantumState::Pure { amps, .. } => {
            pure_apply_ladder(n, &Ladder::e_plus(&phases), amps)
                .iter()
                .map(|a| a.norm_sqr())
                .sum()
        }
        DenseQuantumState::Mixed { rho, .. } => {
            let lowered = mixed_left_ladder(n, &Ladder::e_plus(&phases), rho);
            mixed_trace_ladder(n, &Ladder::e_minus(&phases), &lowered).re
        }
    }
}
