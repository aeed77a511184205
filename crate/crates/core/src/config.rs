//! Sweep configuration: a JSON-compatible description of one experiment
//! family (geometry, initial state, detection record, measurement, optional
//! parameter sweep, engine choice, output path).

use std::path::PathBuf;

use serde::{Deserialize, Deserializer};

use crate::error::{Error, Result};
use crate::geometry::{xy_plane, xz_plane, yz_plane, Geometry, WaveDirection};
use crate::states::{DetectionPlan, ProductState};

/// A direction given as spherical angles (radians): polar from +z, azimuth
/// from +x.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleDir {
    pub polar: f64,
    #[serde(default)]
    pub azimuth: f64,
}

impl AngleDir {
    pub fn direction(&self) -> WaveDirection {
        WaveDirection::from_polar(self.polar, self.azimuth)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometrySpec {
    Chain {
        n: usize,
        step: f64,
        #[serde(default = "default_axis")]
        axis: AngleDir,
    },
    Ring {
        n: usize,
        radius: f64,
        #[serde(default)]
        plane: PlaneName,
    },
    Sphere {
        n: usize,
        radius: f64,
        seed: u64,
    },
}

fn default_axis() -> AngleDir {
    AngleDir {
        polar: 0.0,
        azimuth: 0.0,
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PlaneName {
    Xy,
    #[default]
    Xz,
    Yz,
}

impl GeometrySpec {
    pub fn build(&self) -> Result<Geometry> {
        match self {
            GeometrySpec::Chain { n, step, axis } => Geometry::chain(*n, *step, axis.direction()),
            GeometrySpec::Ring { n, radius, plane } => {
                let plane = match plane {
                    PlaneName::Xy => xy_plane(),
                    PlaneName::Xz => xz_plane(),
                    PlaneName::Yz => yz_plane(),
                };
                Geometry::ring(*n, *radius, plane)
            }
            GeometrySpec::Sphere { n, radius, seed } => Geometry::random_sphere(*n, *radius, *seed),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GeometrySpec::Chain { n, .. }
            | GeometrySpec::Ring { n, .. }
            | GeometrySpec::Sphere { n, .. } => *n,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    Css {
        theta: f64,
        k_l: AngleDir,
    },
    Steady {
        #[serde(deserialize_with = "de_saturation")]
        s: f64,
        k_l: AngleDir,
    },
    Population {
        theta_bar: f64,
    },
}

/// Accepts a JSON number or the string "inf" (the fully mixed sentinel).
fn de_saturation<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(x),
        Raw::Text(s) if s == "inf" => Ok(f64::INFINITY),
        Raw::Text(s) => Err(serde::de::Error::custom(format!(
            "saturation must be a number or \"inf\", got {s:?}"
        ))),
    }
}

impl StateSpec {
    /// Instantiates the state, optionally overriding the swept parameter.
    pub fn build(&self, geometry: &Geometry, param: Option<f64>) -> Result<ProductState> {
        match self {
            StateSpec::Css { theta, k_l } => {
                ProductState::css(param.unwrap_or(*theta), k_l.direction(), geometry)
            }
            StateSpec::Steady { s, k_l } => {
                ProductState::steady(param.unwrap_or(*s), k_l.direction(), geometry)
            }
            StateSpec::Population { theta_bar } => {
                ProductState::population(param.unwrap_or(*theta_bar), geometry)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum DetectionSpec {
    Repeated { direction: AngleDir, nu: usize },
    Listed { directions: Vec<AngleDir> },
}

impl DetectionSpec {
    pub fn plan(&self) -> DetectionPlan {
        match self {
            DetectionSpec::Repeated { direction, nu } => {
                DetectionPlan::repeated(direction.direction(), *nu)
            }
            DetectionSpec::Listed { directions } => {
                DetectionPlan::new(directions.iter().map(AngleDir::direction).collect())
            }
        }
    }

    pub fn nu(&self) -> usize {
        match self {
            DetectionSpec::Repeated { nu, .. } => *nu,
            DetectionSpec::Listed { directions } => directions.len(),
        }
    }

    /// The common direction when every detected photon shares one.
    pub fn common_direction(&self) -> Option<WaveDirection> {
        match self {
            DetectionSpec::Repeated { direction, .. } => Some(direction.direction()),
            DetectionSpec::Listed { directions } => {
                let first = directions.first()?;
                let d0 = first.direction();
                let all_same = directions
                    .iter()
                    .all(|d| (d.direction().unit() - d0.unit()).norm() < 1e-12);
                all_same.then_some(d0)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasurementSpec {
    /// Measure along the (common) detection direction.
    SameAsDetection,
    Fixed {
        direction: AngleDir,
    },
    /// Sweep the measurement polar angle at fixed azimuth.
    Sweep {
        polar_start: f64,
        polar_stop: f64,
        points: usize,
        #[serde(default)]
        azimuth: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    Theta,
    ThetaBar,
    S,
}

impl SweepVariable {
    pub fn column(&self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta",
            SweepVariable::ThetaBar => "theta_bar",
            SweepVariable::S => "s",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSweep {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Logarithmically spaced grid (start and stop must be positive).
    #[serde(default)]
    pub log: bool,
}

impl ParamSweep {
    pub fn grid(&self) -> Vec<f64> {
        grid_points(self.start, self.stop, self.points, self.log)
    }
}

/// Evenly spaced grid, linear or logarithmic, endpoints included.
pub fn grid_points(start: f64, stop: f64, points: usize, log: bool) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if log {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum EngineChoice {
    Exact,
    Analytic,
    #[default]
    Auto,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometrySpec,
    pub initial_state: StateSpec,
    pub detection: DetectionSpec,
    pub measurement: MeasurementSpec,
    #[serde(default)]
    pub sweep: Option<ParamSweep>,
    #[serde(default)]
    pub engine: EngineChoice,
    pub output: PathBuf,
}

/// The engine a config actually runs on after auto-routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedEngine {
    Exact,
    /// Homogeneous population closed forms (any ν, one detection direction).
    AnalyticPopulation,
    /// Arbitrary product state after a single detection, measured along it.
    AnalyticSinglePhoton,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.geometry.n();
        if self.detection.nu() + 1 > n {
            return Err(Error::InvalidConfig(format!(
                "detection requests ν = {} photons from N = {n} emitters (need ν ≤ N−1)",
                self.detection.nu()
            )));
        }
        if let Some(sweep) = &self.sweep {
            let compatible = matches!(
                (&self.initial_state, sweep.variable),
                (StateSpec::Css { .. }, SweepVariable::Theta)
                    | (StateSpec::Steady { .. }, SweepVariable::S)
                    | (StateSpec::Population { .. }, SweepVariable::ThetaBar)
            );
            if !compatible {
                return Err(Error::InvalidConfig(format!(
                    "sweep variable `{}` does not belong to the configured initial state",
                    sweep.variable.column()
                )));
            }
            if sweep.points == 0 {
                return Err(Error::InvalidConfig(
                    "sweep needs at least one point".into(),
                ));
            }
            if sweep.log && (sweep.start <= 0.0 || sweep.stop <= 0.0) {
                return Err(Error::InvalidConfig(
                    "log-spaced sweep requires positive bounds".into(),
                ));
            }
        }
        if matches!(self.measurement, MeasurementSpec::SameAsDetection)
            && self.detection.common_direction().is_none()
        {
            return Err(Error::InvalidConfig(
                "measurement `same-as-detection` requires a single detection direction".into(),
            ));
        }
        if let MeasurementSpec::Sweep { points, .. } = self.measurement {
            if points == 0 {
                return Err(Error::InvalidConfig(
                    "measurement sweep needs at least one point".into(),
                ));
            }
        }
        self.resolve_engine()?;
        Ok(())
    }

    /// Decides which engine serves this config; `engine = analytic` on an
    /// uncovered case is an invalid config.
    pub fn resolve_engine(&self) -> Result<ResolvedEngine> {
        let covered = self.closed_form_route();
        match (self.engine, covered) {
            (EngineChoice::Exact, _) => Ok(ResolvedEngine::Exact),
            (EngineChoice::Analytic, Some(route)) => Ok(route),
            (EngineChoice::Analytic, None) => Err(Error::InvalidConfig(
                "engine = analytic, but no closed form covers this case \
                 (multi-photon detection from a state with optical coherences)"
                    .into(),
            )),
            (EngineChoice::Auto, Some(route)) => Ok(route),
            (EngineChoice::Auto, None) => Ok(ResolvedEngine::Exact),
        }
    }

    fn closed_form_route(&self) -> Option<ResolvedEngine> {
        let nu = self.detection.nu();
        let common = self.detection.common_direction();
        if nu == 0 || common.is_none() {
            return None;
        }
        // Coherence-free homogeneous states: population formulas hold for
        // every ν and measurement direction.
        let populationish = match &self.initial_state {
            StateSpec::Population { .. } => true,
            StateSpec::Css { theta, .. } => *theta == std::f64::consts::PI && self.sweep.is_none(),
            StateSpec::Steady { s, .. } => s.is_infinite() && self.sweep.is_none(),
        };
        if populationish {
            return Some(ResolvedEngine::AnalyticPopulation);
        }
        // One photon, measured along the detection direction: arbitrary
        // product states have closed-form moments.
        if nu == 1 && self.measured_along_detection() {
            return Some(ResolvedEngine::AnalyticSinglePhoton);
        }
        None
    }

    fn measured_along_detection(&self) -> bool {
        match (&self.measurement, self.detection.common_direction()) {
            (MeasurementSpec::SameAsDetection, Some(_)) => true,
            (MeasurementSpec::Fixed { direction }, Some(kd)) => {
                (direction.direction().unit() - kd.unit()).norm() < 1e-12
            }
            _ => false,
        }
    }

    /// The population angle θ̄ when this config routes to the population
    /// closed forms.
    pub fn population_angle(&self, param: Option<f64>) -> Option<f64> {
        match &self.initial_state {
            StateSpec::Population { theta_bar } => Some(param.unwrap_or(*theta_bar)),
            StateSpec::Css { theta, .. } => {
                (param.unwrap_or(*theta) == std::f64::consts::PI).then_some(std::f64::consts::PI)
            }
            StateSpec::Steady { s, .. } => param
                .unwrap_or(*s)
                .is_infinite()
                .then_some(std::f64::consts::FRAC_PI_2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json(engine: &str, state: &str, detection: &str) -> String {
        format!(
            r#"{{
  "geometry": {{"kind": "chain", "n": 10, "step": 6.283185307179586}},
  "initial_state": {state},
  "detection": {detection},
  "measurement": {{"kind": "same-as-detection"}},
  "engine": "{engine}",
  "output": "out.csv"
}}"#
        )
    }

    #[test]
    fn parses_and_routes_single_photon() {
        let json = base_json(
            "auto",
            r#"{"kind": "css", "theta": 1.5, "k_l": {"polar": 1.5707963267948966}}"#,
            r#"{"direction": {"polar": 1.5707963267948966}, "nu": 1}"#,
        );
        let cfg = RunConfig::from_json(&json).unwrap();
        assert_eq!(
            cfg.resolve_engine().unwrap(),
            ResolvedEngine::AnalyticSinglePhoton
        );
    }

    #[test]
    fn steady_multiphoton_has_no_closed_form() {
        let json = base_json(
            "analytic",
            r#"{"kind": "steady", "s": 1.0, "k_l": {"polar": 1.0}}"#,
            r#"{"direction": {"polar": 1.0}, "nu": 3}"#,
        );
        let err = RunConfig::from_json(&json).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)), "{err}");
    }

    #[test]
    fn population_routes_analytic_for_any_nu() {
        let json = base_json(
            "auto",
            r#"{"kind": "population", "theta_bar": 1.0}"#,
            r#"{"direction": {"polar": 0.3}, "nu": 7}"#,
        );
        let cfg = RunConfig::from_json(&json).unwrap();
        assert_eq!(
            cfg.resolve_engine().unwrap(),
            ResolvedEngine::AnalyticPopulation
        );
    }

    #[test]
    fn css_multiphoton_autoroutes_to_exact() {
        let json = base_json(
            "auto",
            r#"{"kind": "css", "theta": 2.0, "k_l": {"polar": 1.0}}"#,
            r#"{"direction": {"polar": 1.0}, "nu": 4}"#,
        );
        let cfg = RunConfig::from_json(&json).unwrap();
        assert_eq!(cfg.resolve_engine().unwrap(), ResolvedEngine::Exact);
    }

    #[test]
    fn saturation_accepts_inf_sentinel() {
        let json = base_json(
            "auto",
            r#"{"kind": "steady", "s": "inf", "k_l": {"polar": 1.0}}"#,
            r#"{"direction": {"polar": 1.0}, "nu": 4}"#,
        );
        let cfg = RunConfig::from_json(&json).unwrap();
        assert_eq!(
            cfg.resolve_engine().unwrap(),
            ResolvedEngine::AnalyticPopulation
        );
    }

    #[test]
    fn rejects_excess_photons_and_bad_sweeps() {
        let json = base_json(
            "auto",
            r#"{"kind": "css", "theta": 2.0, "k_l": {"polar": 1.0}}"#,
            r#"{"direction": {"polar": 1.0}, "nu": 10}"#,
        );
        assert!(RunConfig::from_json(&json).is_err());

        let json = r#"{
  "geometry": {"kind": "chain", "n": 6, "step": 6.283185307179586},
  "initial_state": {"kind": "population", "theta_bar": 1.0},
  "detection": {"direction": {"polar": 0.0}, "nu": 1},
  "measurement": {"kind": "same-as-detection"},
  "sweep": {"variable": "s", "start": 0.1, "stop": 1.0, "points": 5},
  "output": "out.csv"
}"#;
        let err = RunConfig::from_json(json).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn unknown_fields_are_diagnosed() {
        let json = r#"{
  "geometry": {"kind": "chain", "n": 6, "step": 1.0, "stepp": 2.0},
  "initial_state": {"kind": "population", "theta_bar": 1.0},
  "detection": {"direction": {"polar": 0.0}, "nu": 1},
  "measurement": {"kind": "same-as-detection"},
  "output": "out.csv"
}"#;
        let err = RunConfig::from_json(json).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("invalid config"), "{msg}");
    }

    #[test]
    fn grid_spacing() {
        let lin = grid_points(0.0, 1.0, 5, false);
        assert_eq!(lin, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = grid_points(1e-2, 1e2, 5, true);
        for (a, b) in log.iter().zip([1e-2, 1e-1, 1.0, 1e1, 1e2]) {
            assert!((a / b - 1.0).abs() < 1e-12);
        }
    }
}
