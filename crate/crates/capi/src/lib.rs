//! C ABI over the postselect-squeeze engines.
//!
//! Conventions: every function returns a [`PsStatus`] code and writes results
//! through out-pointers; geometries, product states, and dense states are
//! opaque handles created and released by `ps_*_new`/`ps_*_free` pairs.
//! Directions are passed as 3-vectors and normalized internally; angles are
//! radians; positions are dimensionless (k·r). The header
//! `include/postselect_squeeze.h` is generated by cbindgen at build time.

use std::os::raw::c_char;

use nalgebra::{Matrix3, Vector3};

use postselect_squeeze::analytic;
use postselect_squeeze::exact::{self, DenseQuantumState};
use postselect_squeeze::geometry::{Geometry, WaveDirection};
use postselect_squeeze::moments::FieldMoments;
use postselect_squeeze::states::{DetectionPlan, ProductState};
use postselect_squeeze::witness::{self, Minimizer, SqueezingReport, Verdict};
use postselect_squeeze::Error;

/// Result code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGeometry = 3,
    InvalidParameter = 4,
    CapacityExceeded = 5,
    ImpossibleDetection = 6,
    IndeterminateWitness = 7,
    UnsupportedOrder = 8,
    NoSqueezingPossible = 9,
    IoError = 10,
}

fn status_of(e: &Error) -> PsStatus {
    match e {
        Error::InvalidGeometry(_) => PsStatus::InvalidGeometry,
        Error::InvalidParameter(_) => PsStatus::InvalidParameter,
        Error::CapacityExceeded { .. } => PsStatus::CapacityExceeded,
        Error::ImpossibleDetection => PsStatus::ImpossibleDetection,
        Error::IndeterminateWitness => PsStatus::IndeterminateWitness,
        Error::UnsupportedOrder(_) => PsStatus::UnsupportedOrder,
        Error::NoSqueezingPossible => PsStatus::NoSqueezingPossible,
        Error::InvalidConfig(_) => PsStatus::InvalidArgument,
        Error::Io(_) => PsStatus::IoError,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ps_status_message(status: PsStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        PsStatus::Ok => b"ok\0",
        PsStatus::NullPointer => b"null pointer argument\0",
        PsStatus::InvalidArgument => b"invalid argument\0",
        PsStatus::InvalidGeometry => b"invalid geometry\0",
        PsStatus::InvalidParameter => b"invalid parameter\0",
        PsStatus::CapacityExceeded => b"capacity exceeded\0",
        PsStatus::ImpossibleDetection => b"impossible detection (zero-weight record)\0",
        PsStatus::IndeterminateWitness => b"indeterminate witness (nonpositive denominator)\0",
        PsStatus::UnsupportedOrder => b"unsupported distinct-sum order\0",
        PsStatus::NoSqueezingPossible => b"no squeezing possible at any photon number\0",
        PsStatus::IoError => b"i/o error\0",
    };
    text.as_ptr() as *const c_char
}

/// Opaque emitter geometry.
pub struct PsGeometry(Geometry);
/// Opaque separable initial state.
pub struct PsProductState(ProductState);
/// Opaque dense 2^N state (pure vector or density matrix).
pub struct PsDenseState(DenseQuantumState);

/// Moments of the (X, Y, Z) triple; `second` is row-major 3×3.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsFieldMoments {
    pub n: usize,
    pub first: [f64; 3],
    pub second: [f64; 9],
    pub weight: f64,
}

impl From<FieldMoments> for PsFieldMoments {
    fn from(m: FieldMoments) -> Self {
        let mut second = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                second[r * 3 + c] = m.second[(r, c)];
            }
        }
        PsFieldMoments {
            n: m.n,
            first: [m.first[0], m.first[1], m.first[2]],
            second,
            weight: m.weight,
        }
    }
}

impl PsFieldMoments {
    fn to_moments(self) -> FieldMoments {
        let mut second = Matrix3::zeros();
        for r in 0..3 {
            for c in 0..3 {
                second[(r, c)] = self.second[r * 3 + c];
            }
        }
        FieldMoments {
            n: self.n,
            first: Vector3::new(self.first[0], self.first[1], self.first[2]),
            second,
            weight: self.weight,
        }
    }
}

/// Operator that minimized the squeezing functional.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsMinimizer {
    X = 0,
    Y = 1,
    Z = 2,
    /// Optimized variant: see the `direction` field of the report.
    Direction = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsVerdict {
    Entangled = 0,
    NotDetected = 1,
    Indeterminate = 2,
}

/// Squeezing-parameter outcome. When `verdict` is indeterminate, `xi2` and
/// `db` are NaN; ξ² = 0 reports `db` = +∞.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsSqueezingReport {
    pub xi2: f64,
    pub db: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub minimizer: PsMinimizer,
    pub direction: [f64; 3],
    pub verdict: PsVerdict,
}

impl From<SqueezingReport> for PsSqueezingReport {
    fn from(r: SqueezingReport) -> Self {
        let (minimizer, direction) = match r.minimizer {
            Minimizer::Axis(witness::Axis::X) => (PsMinimizer::X, [1.0, 0.0, 0.0]),
            Minimizer::Axis(witness::Axis::Y) => (PsMinimizer::Y, [0.0, 1.0, 0.0]),
            Minimizer::Axis(witness::Axis::Z) => (PsMinimizer::Z, [0.0, 0.0, 1.0]),
            Minimizer::Direction(d) => (PsMinimizer::Direction, [d[0], d[1], d[2]]),
        };
        PsSqueezingReport {
            xi2: r.xi2.unwrap_or(f64::NAN),
            db: r.db.unwrap_or(f64::NAN),
            numerator: r.numerator,
            denominator: r.denominator,
            minimizer,
            direction,
            verdict: match r.verdict {
                Verdict::Entangled => PsVerdict::Entangled,
                Verdict::NotDetected => PsVerdict::NotDetected,
                Verdict::Indeterminate => PsVerdict::Indeterminate,
            },
        }
    }
}

unsafe fn read_vec3(ptr: *const f64) -> Option<Vector3<f64>> {
    if ptr.is_null() {
        return None;
    }
    Some(Vector3::new(*ptr, *ptr.add(1), *ptr.add(2)))
}

unsafe fn direction_from(ptr: *const f64) -> Result<WaveDirection, PsStatus> {
    let v = read_vec3(ptr).ok_or(PsStatus::NullPointer)?;
    WaveDirection::from_vector(v).map_err(|e| status_of(&e))
}

macro_rules! out_write {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            return PsStatus::NullPointer;
        }
        unsafe { *$ptr = $value };
    }};
}

macro_rules! deref {
    ($ptr:expr) => {{
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => return PsStatus::NullPointer,
        }
    }};
}

macro_rules! try_status {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        }
    };
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Regular chain of `n` emitters spaced by `step` along `axis` (3-vector,
/// normalized internally).
///
/// # Safety
/// `axis` must point to 3 doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_chain(
    n: usize,
    step: f64,
    axis: *const f64,
    out: *mut *mut PsGeometry,
) -> PsStatus {
    let axis = match direction_from(axis) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let g = try_status!(Geometry::chain(n, step, axis));
    out_write!(out, Box::into_raw(Box::new(PsGeometry(g))));
    PsStatus::Ok
}

/// Ring of `n` emitters with the given radius in the plane spanned by the
/// orthonormal pair (`e1`, `e2`).
///
/// # Safety
/// `e1`/`e2` must point to 3 doubles each; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_ring(
    n: usize,
    radius: f64,
    e1: *const f64,
    e2: *const f64,
    out: *mut *mut PsGeometry,
) -> PsStatus {
    let (e1, e2) = match (read_vec3(e1), read_vec3(e2)) {
        (Some(a), Some(b)) => (a, b),
        _ => return PsStatus::NullPointer,
    };
    let g = try_status!(Geometry::ring(n, radius, (e1, e2)));
    out_write!(out, Box::into_raw(Box::new(PsGeometry(g))));
    PsStatus::Ok
}

/// `n` points uniform in a ball; bit-reproducible for a fixed seed.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_sphere(
    n: usize,
    radius: f64,
    seed: u64,
    out: *mut *mut PsGeometry,
) -> PsStatus {
    let g = try_status!(Geometry::random_sphere(n, radius, seed));
    out_write!(out, Box::into_raw(Box::new(PsGeometry(g))));
    PsStatus::Ok
}

/// # Safety
/// `geometry` must come from a `ps_geometry_*` constructor (or be null).
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_free(geometry: *mut PsGeometry) {
    if !geometry.is_null() {
        drop(Box::from_raw(geometry));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_len(geometry: *const PsGeometry, out: *mut usize) -> PsStatus {
    let g = deref!(geometry);
    out_write!(out, g.0.len());
    PsStatus::Ok
}

/// Writes position `index` as 3 doubles.
///
/// # Safety
/// `out` must point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_geometry_position(
    geometry: *const PsGeometry,
    index: usize,
    out: *mut f64,
) -> PsStatus {
    let g = deref!(geometry);
    if index >= g.0.len() {
        return PsStatus::InvalidArgument;
    }
    if out.is_null() {
        return PsStatus::NullPointer;
    }
    let p = g.0.positions()[index];
    *out = p.x;
    *out.add(1) = p.y;
    *out.add(2) = p.z;
    PsStatus::Ok
}

/// Structure factor f(Δ) = |Σ_p e^{-iΔ·r_p}|² − N for a 3-vector Δ.
///
/// # Safety
/// `delta` must point to 3 doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_structure_factor(
    geometry: *const PsGeometry,
    delta: *const f64,
    out: *mut f64,
) -> PsStatus {
    let g = deref!(geometry);
    let d = match read_vec3(delta) {
        Some(d) => d,
        None => return PsStatus::NullPointer,
    };
    out_write!(out, g.0.structure_factor(d));
    PsStatus::Ok
}

// ---------------------------------------------------------------------------
// Initial states
// ---------------------------------------------------------------------------

/// Coherent spin state at polar angle `theta` with drive direction `k_l`.
///
/// # Safety
/// `k_l` must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_state_css(
    theta: f64,
    k_l: *const f64,
    geometry: *const PsGeometry,
    out: *mut *mut PsProductState,
) -> PsStatus {
    let g = deref!(geometry);
    let k_l = match direction_from(k_l) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let st = try_status!(ProductState::css(theta, k_l, &g.0));
    out_write!(out, Box::into_raw(Box::new(PsProductState(st))));
    PsStatus::Ok
}

/// Driven steady state at saturation `s` (INFINITY gives the fully mixed
/// state).
///
/// # Safety
/// `k_l` must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_state_steady(
    s: f64,
    k_l: *const f64,
    geometry: *const PsGeometry,
    out: *mut *mut PsProductState,
) -> PsStatus {
    let g = deref!(geometry);
    let k_l = match direction_from(k_l) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let st = try_status!(ProductState::steady(s, k_l, &g.0));
    out_write!(out, Box::into_raw(Box::new(PsProductState(st))));
    PsStatus::Ok
}

/// Coherence-free population state at angle `theta_bar`.
///
/// # Safety
/// Handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_state_population(
    theta_bar: f64,
    geometry: *const PsGeometry,
    out: *mut *mut PsProductState,
) -> PsStatus {
    let g = deref!(geometry);
    let st = try_status!(ProductState::population(theta_bar, &g.0));
    out_write!(out, Box::into_raw(Box::new(PsProductState(st))));
    PsStatus::Ok
}

/// # Safety
/// `state` must come from a `ps_state_*` constructor (or be null).
#[no_mangle]
pub unsafe extern "C" fn ps_state_free(state: *mut PsProductState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

// ---------------------------------------------------------------------------
// Exact engine
// ---------------------------------------------------------------------------

/// Expands a product state into its dense 2^N form (pure vector when every
/// factor is rank one, density matrix otherwise).
///
/// # Safety
/// Handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_dense_realize(
    state: *const PsProductState,
    out: *mut *mut PsDenseState,
) -> PsStatus {
    let st = deref!(state);
    let dense = try_status!(exact::realize(&st.0));
    out_write!(out, Box::into_raw(Box::new(PsDenseState(dense))));
    PsStatus::Ok
}

/// Conditions a dense state on `nu` detections whose directions are packed
/// as `nu` consecutive 3-vectors in `directions`. Writes the normalized
/// state and the event weight.
///
/// # Safety
/// `directions` must point to 3·nu doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_dense_postselect(
    dense: *const PsDenseState,
    geometry: *const PsGeometry,
    directions: *const f64,
    nu: usize,
    out: *mut *mut PsDenseState,
    weight: *mut f64,
) -> PsStatus {
    let d = deref!(dense);
    let g = deref!(geometry);
    if nu > 0 && directions.is_null() {
        return PsStatus::NullPointer;
    }
    let mut dirs = Vec::with_capacity(nu);
    for k in 0..nu {
        match direction_from(directions.add(3 * k)) {
            Ok(dir) => dirs.push(dir),
            Err(s) => return s,
        }
    }
    let (post, w) = try_status!(exact::postselect(&d.0, &DetectionPlan::new(dirs), &g.0));
    out_write!(weight, w);
    out_write!(out, Box::into_raw(Box::new(PsDenseState(post))));
    PsStatus::Ok
}

/// First and symmetrized second moments of (X_kw, Y_kw, Z).
///
/// # Safety
/// `k_w` must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_dense_field_moments(
    dense: *const PsDenseState,
    geometry: *const PsGeometry,
    k_w: *const f64,
    out: *mut PsFieldMoments,
) -> PsStatus {
    let d = deref!(dense);
    let g = deref!(geometry);
    let k_w = match direction_from(k_w) {
        Ok(dir) => dir,
        Err(s) => return s,
    };
    out_write!(out, exact::field_moments(&d.0, k_w, &g.0).into());
    PsStatus::Ok
}

/// # Safety
/// Handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_dense_purity(dense: *const PsDenseState, out: *mut f64) -> PsStatus {
    let d = deref!(dense);
    out_write!(out, exact::purity(&d.0));
    PsStatus::Ok
}

/// Scattered intensity ⟨Ê⁻_kw Ê⁺_kw⟩.
///
/// # Safety
/// `k_w` must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_dense_intensity(
    dense: *const PsDenseState,
    geometry: *const PsGeometry,
    k_w: *const f64,
    out: *mut f64,
) -> PsStatus {
    let d = deref!(dense);
    let g = deref!(geometry);
    let k_w = match direction_from(k_w) {
        Ok(dir) => dir,
        Err(s) => return s,
    };
    out_write!(out, exact::intensity(&d.0, k_w, &g.0));
    PsStatus::Ok
}

/// # Safety
/// `dense` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn ps_dense_free(dense: *mut PsDenseState) {
    if !dense.is_null() {
        drop(Box::from_raw(dense));
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// ξ² = (N − 2ν)²/N² for the fully excited state.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi2_fully_excited(n: usize, nu: usize, out: *mut f64) -> PsStatus {
    let v = try_status!(analytic::xi2_fully_excited(n, nu));
    out_write!(out, v);
    PsStatus::Ok
}

/// ξ² of the fully mixed state after ν detections, with structure factor f.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi2_fully_mixed(
    n: usize,
    nu: usize,
    f: f64,
    out: *mut f64,
) -> PsStatus {
    let v = try_status!(analytic::xi2_fully_mixed(n, nu, f));
    out_write!(out, v);
    PsStatus::Ok
}

/// Optimal photon number for the fully mixed state (k_d = k_w).
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_optimal_nu_fully_mixed(
    n: usize,
    nu_real: *mut f64,
    nu_int: *mut usize,
    xi2: *mut f64,
) -> PsStatus {
    let opt = try_status!(analytic::optimal_nu_fully_mixed(n));
    out_write!(nu_real, opt.nu_real);
    out_write!(nu_int, opt.nu_int);
    out_write!(xi2, opt.xi2_at_opt);
    PsStatus::Ok
}

/// ξ² of a homogeneous population state after ν detections (k_d = k_w).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi2_population(
    n: usize,
    nu: usize,
    theta_bar: f64,
    out: *mut f64,
) -> PsStatus {
    let v = try_status!(analytic::xi2_population(n, nu, theta_bar));
    out_write!(out, v);
    PsStatus::Ok
}

/// Smallest squeezing photon number of a population state.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_population_threshold(
    n: usize,
    theta_bar: f64,
    out: *mut usize,
) -> PsStatus {
    let v = try_status!(analytic::population_threshold(n, theta_bar));
    out_write!(out, v);
    PsStatus::Ok
}

/// Population-state moments after ν detections with structure factor f.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_population_moments(
    n: usize,
    nu: usize,
    theta_bar: f64,
    f: f64,
    out: *mut PsFieldMoments,
) -> PsStatus {
    let m = try_status!(analytic::population_moments(n, nu, theta_bar, f));
    out_write!(out, m.into());
    PsStatus::Ok
}

/// Moments of an arbitrary product state after one detection at `k_d`,
/// measured along k_w = k_d.
///
/// # Safety
/// `k_d` must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_single_photon_moments(
    state: *const PsProductState,
    k_d: *const f64,
    out: *mut PsFieldMoments,
) -> PsStatus {
    let st = deref!(state);
    let k_d = match direction_from(k_d) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let m = try_status!(analytic::single_photon_moments(&st.0, k_d));
    out_write!(out, m.into());
    PsStatus::Ok
}

/// Phase-free homogeneous CSS moments after one detection.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_homogeneous_css_moments(
    n: usize,
    theta: f64,
    out: *mut PsFieldMoments,
) -> PsStatus {
    let m = try_status!(analytic::homogeneous_css_moments(n, theta));
    out_write!(out, m.into());
    PsStatus::Ok
}

/// Intensity at `k_w` of a product state conditioned on one detection at
/// `k_d`.
///
/// # Safety
/// Direction pointers must point to 3 doubles; handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_single_photon_intensity(
    state: *const PsProductState,
    k_d: *const f64,
    k_w: *const f64,
    out: *mut f64,
) -> PsStatus {
    let st = deref!(state);
    let k_d = match direction_from(k_d) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let k_w = match direction_from(k_w) {
        Ok(d) => d,
        Err(s) => return s,
    };
    let v = try_status!(analytic::single_photon_intensity(&st.0, k_d, k_w));
    out_write!(out, v);
    PsStatus::Ok
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// Squeezing parameter minimized over the fixed (X, Y, Z) triple.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi2_fixed(
    moments: *const PsFieldMoments,
    out: *mut PsSqueezingReport,
) -> PsStatus {
    let m = deref!(moments).to_moments();
    out_write!(out, witness::xi2_fixed(&m).into());
    PsStatus::Ok
}

/// Squeezing parameter minimized over every direction of the triple.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi2_optimal(
    moments: *const PsFieldMoments,
    out: *mut PsSqueezingReport,
) -> PsStatus {
    let m = deref!(moments).to_moments();
    out_write!(out, witness::xi2_optimal(&m).into());
    PsStatus::Ok
}

/// ξ₁² = Σ variances / 2N.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi1(moments: *const PsFieldMoments, out: *mut f64) -> PsStatus {
    let m = deref!(moments).to_moments();
    out_write!(out, witness::xi1(&m));
    PsStatus::Ok
}

/// ξ₃², minimized over the axis assignment; indeterminate when every
/// denominator is nonpositive.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_xi3(moments: *const PsFieldMoments, out: *mut f64) -> PsStatus {
    let m = deref!(moments).to_moments();
    match witness::xi3(&m) {
        Some(v) => {
            out_write!(out, v);
            PsStatus::Ok
        }
        None => PsStatus::IndeterminateWitness,
    }
}

/// Witness triple (w₁, w₂, w₃); negative values signal entanglement.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_witness_values(
    moments: *const PsFieldMoments,
    w1: *mut f64,
    w2: *mut f64,
    w3: *mut f64,
) -> PsStatus {
    let m = deref!(moments).to_moments();
    let (a, b, c) = witness::witness_values(&m);
    out_write!(w1, a);
    out_write!(w2, b);
    out_write!(w3, c);
    PsStatus::Ok
}
