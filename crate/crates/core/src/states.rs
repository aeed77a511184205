//! Separable initial states: one 2×2 density matrix per emitter.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, WaveDirection};

const POSITIVITY_TOL: f64 = 1e-12;

/// Single-emitter density matrix, stored as the excited population and the
/// e-g coherence. The remaining entries are implied: gg = 1 − ee and
/// ge = conj(eg).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterState {
    ee: f64,
    eg: Complex64,
}

impl EmitterState {
    pub fn new(ee: f64, eg: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ee) || !ee.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "excited population must lie in [0,1], got {ee}"
            )));
        }
        if !eg.re.is_finite() || !eg.im.is_finite() {
            return Err(Error::InvalidParameter("coherence must be finite".into()));
        }
        if eg.norm_sqr() > ee * (1.0 - ee) + POSITIVITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "coherence too large for a positive 2×2 state: |eg|² = {} > ee·gg = {}",
                eg.norm_sqr(),
                ee * (1.0 - ee)
            )));
        }
        Ok(Self { ee, eg })
    }

    pub fn ground() -> Self {
        Self {
            ee: 0.0,
            eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            ee: 1.0,
            eg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn ee(&self) -> f64 {
        self.ee
    }

    pub fn gg(&self) -> f64 {
        1.0 - self.ee
    }

    pub fn eg(&self) -> Complex64 {
        self.eg
    }

    pub fn ge(&self) -> Complex64 {
        self.eg.conj()
    }

    /// Population inversion ⟨σᶻ⟩ = ee − gg.
    pub fn inversion(&self) -> f64 {
        2.0 * self.ee - 1.0
    }

    /// True when the factor is rank one, i.e. |eg|² = ee·gg within 1e-12.
    pub fn is_pure(&self) -> bool {
        (self.eg.norm_sqr() - self.ee * self.gg()).abs() <= POSITIVITY_TOL
    }

    /// Tr(ρ²) of the single factor.
    pub fn purity(&self) -> f64 {
        let gg = self.gg();
        self.ee * self.ee + gg * gg + 2.0 * self.eg.norm_sqr()
    }

    /// Amplitudes (c_e, c_g) of a rank-one factor, with c_g chosen real ≥ 0
    /// (global phase convention). Only meaningful when [`Self::is_pure`].
    pub fn pure_amplitudes(&self) -> (Complex64, Complex64) {
        let gg = self.gg();
        if gg <= POSITIVITY_TOL {
            return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        }
        let cg = gg.sqrt();
        let ce = self.eg / cg;
        let norm = (ce.norm_sqr() + cg * cg).sqrt();
        (ce / norm, Complex64::new(cg / norm, 0.0))
    }
}

/// A separable ensemble: a geometry plus one [`EmitterState`] per position.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    geometry: Geometry,
    emitters: Vec<EmitterState>,
}

impl ProductState {
    pub fn new(geometry: Geometry, emitters: Vec<EmitterState>) -> Result<Self> {
        if emitters.len() != geometry.len() {
            return Err(Error::InvalidParameter(format!(
                "{} emitter states for {} positions",
                emitters.len(),
                geometry.len()
            )));
        }
        Ok(Self { geometry, emitters })
    }

    /// Coherent spin state: every factor at polar angle `theta` on the Bloch
    /// sphere, with the drive-imprinted phase φ_p = k_L·r_p.
    ///
    /// Each factor is pure: ee = sin²(θ/2), eg = e^{iφ_p}·sin(θ)/2.
    pub fn css(theta: f64, k_l: WaveDirection, geometry: &Geometry) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "CSS polar angle must lie in [0, π], got {theta}"
            )));
        }
        let ee = (theta / 2.0).sin().powi(2);
        let half_sin = theta.sin() / 2.0;
        let emitters = geometry
            .positions()
            .iter()
            .map(|r| {
                let phi = k_l.unit().dot(r);
                let eg = Complex64::from_polar(1.0, phi) * half_sin;
                EmitterState::new(ee, eg)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(geometry.clone(), emitters)
    }

    /// Steady state of independent emitters driven at saturation parameter
    /// `s`: ee = s/(2(1+s)), eg = i·e^{iφ_p}·√(s/2)/(1+s).
    ///
    /// `s = f64::INFINITY` is accepted and produces the fully mixed state.
    pub fn steady(s: f64, k_l: WaveDirection, geometry: &Geometry) -> Result<Self> {
        if s < 0.0 || s.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "saturation parameter must be ≥ 0, got {s}"
            )));
        }
        let (ee, amp) = if s.is_infinite() {
            (0.5, 0.0)
        } else {
            (s / (2.0 * (1.0 + s)), (s / 2.0).sqrt() / (1.0 + s))
        };
        let emitters = geometry
            .positions()
            .iter()
            .map(|r| {
                let phi = k_l.unit().dot(r);
                let eg = Complex64::i() * Complex64::from_polar(1.0, phi) * amp;
                EmitterState::new(ee, eg)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(geometry.clone(), emitters)
    }

    /// Coherence-free (population) state with excited population
    /// sin²(θ̄/2) on every emitter.
    pub fn population(theta_bar: f64, geometry: &Geometry) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta_bar) {
            return Err(Error::InvalidParameter(format!(
                "population angle must lie in [0, π], got {theta_bar}"
            )));
        }
        let ee = (theta_bar / 2.0).sin().powi(2);
        let emitters = (0..geometry.len())
            .map(|_| EmitterState::new(ee, Complex64::new(0.0, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(geometry.clone(), emitters)
    }

    pub fn len(&self) -> usize {
        self.emitters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitters.is_empty()
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn emitters(&self) -> &[EmitterState] {
        &self.emitters
    }

    pub fn is_pure(&self) -> bool {
        self.emitters.iter().all(EmitterState::is_pure)
    }
}

/// An ordered record of detected photons, one far-field direction each.
#[derive(Debug, Clone)]
pub struct DetectionPlan {
    directions: Vec<WaveDirection>,
}

impl DetectionPlan {
    pub fn new(directions: Vec<WaveDirection>) -> Self {
        Self { directions }
    }

    /// `nu` photons all detected along the same direction.
    pub fn repeated(direction: WaveDirection, nu: usize) -> Self {
        Self {
            directions: vec![direction; nu],
        }
    }

    pub fn none() -> Self {
        Self {
            directions: Vec::new(),
        }
    }

    pub fn nu(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[WaveDirection] {
        &self.directions
    }

    /// Checks ν ≤ n − 1 against a given ensemble size.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.nu() + 1 > n {
            return Err(Error::InvalidParameter(format!(
                "cannot postselect ν = {} photons from {} emitters (ν ≤ N−1)",
                self.nu(),
                n
            )));
        }
        Ok(())
    }
}
