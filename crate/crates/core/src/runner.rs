//! Sweep execution and figure-data reproduction.
//!
//! Every output is CSV with full-precision `{}` formatting of f64 ('.'
//! separator, no locale), the token `inf` for the +∞ dB sentinel, and empty
//! cells for indeterminate witness outcomes. Sweep points are evaluated as
//! independent parallel tasks and written in input order, so the bytes never
//! depend on the worker count.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analytic;
use crate::config::{grid_points, MeasurementSpec, ResolvedEngine, RunConfig};
use crate::error::{Error, Result};
use crate::exact;
use crate::geometry::{xz_plane, Geometry, WaveDirection};
use crate::states::{DetectionPlan, ProductState};
use crate::witness::{self, Minimizer, SqueezingReport, Verdict};

/// Figure datasets reproducible via [`figure`].
pub const FIGURE_NAMES: [&str; 8] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4a", "fig4b", "fig4c",
];

/// Seed of the N = 100 random sphere used by fig3/fig4a-style data.
pub const SPHERE_SEED: u64 = 7;

/// Polar-angle grid for initial-state sweeps: k·π/180 for k = 1..=180
/// (θ = 0 is excluded; detection from the ground state has zero weight).
pub fn theta_grid() -> Vec<f64> {
    (1..=180)
        .map(|k| std::f64::consts::PI * k as f64 / 180.0)
        .collect()
}

/// Measurement-angle grid: k·π/180 for k = 0..=180 (181 points).
pub fn theta_w_grid() -> Vec<f64> {
    (0..=180)
        .map(|k| std::f64::consts::PI * k as f64 / 180.0)
        .collect()
}

/// Saturation grid: 61 points log-spaced over [1e-3, 1e3].
pub fn s_grid() -> Vec<f64> {
    grid_points(1e-3, 1e3, 61, true)
}

fn fmt(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

struct Row {
    report: SqueezingReport,
    weight: Option<f64>,
    purity: Option<f64>,
}

impl Row {
    fn minimizer_label(&self) -> String {
        match self.report.minimizer {
            Minimizer::Axis(a) => a.label().to_string(),
            Minimizer::Direction(d) => format!("({};{};{})", fmt(d.x), fmt(d.y), fmt(d.z)),
        }
    }

    fn core_cells(&self) -> String {
        format!(
            "{},{},{},{}",
            fmt_opt(self.report.xi2),
            fmt_opt(self.report.db),
            self.report.verdict.label(),
            self.minimizer_label()
        )
    }
}

/// Executes a sweep config and writes its CSV; returns the output path.
pub fn run(config: &RunConfig) -> Result<PathBuf> {
    let csv = run_to_string(config)?;
    if let Some(parent) = config.output.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&config.output, csv)?;
    Ok(config.output.clone())
}

/// Executes a sweep config and returns its CSV as a string.
pub fn run_to_string(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let engine = config.resolve_engine()?;
    let geometry = config.geometry.build()?;
    let plan = config.detection.plan();
    plan.validate_for(geometry.len())?;

    let param_grid: Option<Vec<f64>> = config.sweep.as_ref().map(|s| s.grid());
    let theta_w_grid: Option<Vec<f64>> = match &config.measurement {
        MeasurementSpec::Sweep {
            polar_start,
            polar_stop,
            points,
            ..
        } => Some(grid_points(*polar_start, *polar_stop, *points, false)),
        _ => None,
    };

    let mut points: Vec<(Option<f64>, Option<f64>)> = Vec::new();
    match (&param_grid, &theta_w_grid) {
        (Some(ps), Some(ws)) => {
            for &p in ps {
                for &w in ws {
                    points.push((Some(p), Some(w)));
                }
            }
        }
        (Some(ps), None) => points.extend(ps.iter().map(|&p| (Some(p), None))),
        (None, Some(ws)) => points.extend(ws.iter().map(|&w| (None, Some(w)))),
        (None, None) => points.push((None, None)),
    }

    let rows: Vec<Row> = points
        .par_iter()
        .map(|&(param, theta_w)| eval_point(config, engine, &geometry, &plan, param, theta_w))
        .collect::<Result<Vec<_>>>()?;

    let mut header = Vec::new();
    if let Some(sweep) = &config.sweep {
        header.push(sweep.variable.column().to_string());
    }
    if theta_w_grid.is_some() {
        header.push("theta_w".to_string());
    }
    header.extend(
        ["xi2", "db", "verdict", "minimizer", "weight", "purity"]
            .iter()
            .map(|s| s.to_string()),
    );

    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for ((param, theta_w), row) in points.iter().zip(&rows) {
        let mut cells = Vec::new();
        if let Some(p) = param {
            cells.push(fmt(*p));
        }
        if let Some(w) = theta_w {
            cells.push(fmt(*w));
        }
        out.push_str(&cells.join(","));
        if !cells.is_empty() {
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{}\n",
            row.core_cells(),
            fmt_opt(row.weight),
            fmt_opt(row.purity)
        ));
    }
    Ok(out)
}

fn measurement_direction(
    config: &RunConfig,
    plan: &DetectionPlan,
    theta_w: Option<f64>,
) -> WaveDirection {
    match &config.measurement {
        MeasurementSpec::SameAsDetection => config
            .detection
            .common_direction()
            .expect("validated: same-as-detection requires a common direction"),
        MeasurementSpec::Fixed { direction } => direction.direction(),
        MeasurementSpec::Sweep { azimuth, .. } => {
            let polar = theta_w.expect("sweep points carry theta_w");
            let _ = plan;
            WaveDirection::from_polar(polar, *azimuth)
        }
    }
}

fn eval_point(
    config: &RunConfig,
    engine: ResolvedEngine,
    geometry: &Geometry,
    plan: &DetectionPlan,
    param: Option<f64>,
    theta_w: Option<f64>,
) -> Result<Row> {
    let k_w = measurement_direction(config, plan, theta_w);
    match engine {
        ResolvedEngine::Exact => {
            let state = config.initial_state.build(geometry, param)?;
            let dense = exact::realize(&state)?;
            let (post, weight) = if plan.nu() == 0 {
                (dense, 1.0)
            } else {
                exact::postselect(&dense, plan, geometry)?
            };
            let m = exact::field_moments(&post, k_w, geometry);
            Ok(Row {
                report: witness::xi2_fixed(&m),
                weight: Some(weight),
                purity: Some(exact::purity(&post)),
            })
        }
        ResolvedEngine::AnalyticPopulation => {
            let theta_bar = config
                .population_angle(param)
                .expect("routed as population");
            let k_d = config
                .detection
                .common_direction()
                .expect("routed with a common direction");
            let f = geometry.structure_factor(k_d.unit() - k_w.unit());
            let m = analytic::population_moments(geometry.len(), plan.nu(), theta_bar, f)?;
            Ok(Row {
                report: witness::xi2_fixed(&m),
                weight: Some(m.weight),
                purity: None,
            })
        }
        ResolvedEngine::AnalyticSinglePhoton => {
            let state = config.initial_state.build(geometry, param)?;
            let k_d = config
                .detection
                .common_direction()
                .expect("routed with a common direction");
            let m = analytic::single_photon_moments(&state, k_d)?;
            Ok(Row {
                report: witness::xi2_fixed(&m),
                weight: Some(m.weight),
                purity: None,
            })
        }
    }
}

/// Reproduces one figure dataset into `<out_dir>/<name>.csv`.
///
/// Grid resolutions and parameter lists are fixed constants (documented in
/// the CLI help); the published captions fix ranges but not grids.
pub fn figure(name: &str, out_dir: &Path) -> Result<PathBuf> {
    let csv = figure_to_string(name)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{name}.csv"));
    fs::write(&path, csv)?;
    Ok(path)
}

/// Computes a figure dataset as CSV text.
pub fn figure_to_string(name: &str) -> Result<String> {
    match name {
        "fig2a" => fig2a(),
        "fig2b" => fig2b(),
        "fig2c" => fig2c(),
        "fig2d" => fig2d(),
        "fig3" => fig3(),
        "fig4a" => fig4a(),
        "fig4b" => fig4b(),
        "fig4c" => fig4c(),
        other => Err(Error::InvalidConfig(format!(
            "unknown figure `{other}`; available: {}",
            FIGURE_NAMES.join(", ")
        ))),
    }
}

const FIG2_N_LIST: [usize; 5] = [50, 100, 200, 400, 800];
const FIG2_CHAIN_STEP: f64 = 2.0 * std::f64::consts::PI;
const FIG2_THETA_L: f64 = std::f64::consts::PI / 3.0;
const FIG2B_N: usize = 10;

fn chain_z(n: usize) -> Result<Geometry> {
    Geometry::chain(n, FIG2_CHAIN_STEP, WaveDirection::z())
}

/// Single-photon ξ²(θ) for CSSs on chains of N = 50..800, everything along x̂.
fn fig2a() -> Result<String> {
    let k = WaveDirection::x();
    let thetas = theta_grid();
    let mut out = String::from("n,theta,xi2,db,verdict,minimizer,weight\n");
    for n in FIG2_N_LIST {
        let geometry = chain_z(n)?;
        let rows: Vec<String> = thetas
            .par_iter()
            .map(|&theta| -> Result<String> {
                let state = ProductState::css(theta, k, &geometry)?;
                let m = analytic::single_photon_moments(&state, k)?;
                let r = witness::xi2_fixed(&m);
                Ok(format!(
                    "{},{},{},{}\n",
                    n,
                    fmt(theta),
                    row_core(&r),
                    fmt(m.weight)
                ))
            })
            .collect::<Result<_>>()?;
        out.extend(rows);
    }
    Ok(out)
}

/// Multi-photon ξ²(θ) for the N = 10 chain, ν = 1..8, exact pure engine.
fn fig2b() -> Result<String> {
    let k = WaveDirection::x();
    let geometry = chain_z(FIG2B_N)?;
    let thetas = theta_grid();
    // One detection chain per θ, snapshotting every ν.
    let per_theta: Vec<Vec<(SqueezingReport, f64)>> = thetas
        .par_iter()
        .map(|&theta| -> Result<Vec<(SqueezingReport, f64)>> {
            let state = ProductState::css(theta, k, &geometry)?;
            let mut dense = exact::realize(&state)?;
            let mut weight = 1.0;
            let one = DetectionPlan::repeated(k, 1);
            let mut snaps = Vec::with_capacity(8);
            for _ in 1..=8 {
                let (next, w) = exact::postselect(&dense, &one, &geometry)?;
                dense = next;
                weight *= w;
                let m = exact::field_moments(&dense, k, &geometry);
                snaps.push((witness::xi2_fixed(&m), weight));
            }
            Ok(snaps)
        })
        .collect::<Result<_>>()?;

    let mut out = String::from("nu,theta,xi2,db,verdict,minimizer,weight\n");
    for nu in 1..=8usize {
        for (ti, theta) in thetas.iter().enumerate() {
            let (r, w) = &per_theta[ti][nu - 1];
            out.push_str(&format!(
                "{},{},{},{}\n",
                nu,
                fmt(*theta),
                row_core(r),
                fmt(*w)
            ));
        }
    }
    Ok(out)
}

/// Single-photon ξ²(s) for driven steady states, N = 50..800, analytic.
fn fig2c() -> Result<String> {
    let k_l = WaveDirection::from_polar(FIG2_THETA_L, 0.0);
    let grid = s_grid();
    let mut out = String::from("n,s,xi2,db,verdict,minimizer,weight\n");
    for n in FIG2_N_LIST {
        let geometry = chain_z(n)?;
        let rows: Vec<String> = grid
            .par_iter()
            .map(|&s| -> Result<String> {
                let state = ProductState::steady(s, k_l, &geometry)?;
                let m = analytic::single_photon_moments(&state, k_l)?;
                let r = witness::xi2_fixed(&m);
                Ok(format!(
                    "{},{},{},{}\n",
                    n,
                    fmt(s),
                    row_core(&r),
                    fmt(m.weight)
                ))
            })
            .collect::<Result<_>>()?;
        out.extend(rows);
    }
    Ok(out)
}

/// ξ²(s) and purity for the N = 10 chain at ν ∈ {1,3,5,8}, exact mixed
/// engine.
fn fig2d() -> Result<String> {
    const NU_LIST: [usize; 4] = [1, 3, 5, 8];
    let k_l = WaveDirection::from_polar(FIG2_THETA_L, 0.0);
    let geometry = chain_z(FIG2B_N)?;
    let grid = s_grid();
    let per_s: Vec<Vec<(SqueezingReport, f64, f64)>> = grid
        .par_iter()
        .map(|&s| -> Result<Vec<(SqueezingReport, f64, f64)>> {
            let state = ProductState::steady(s, k_l, &geometry)?;
            let mut dense = exact::realize(&state)?;
            let mut weight = 1.0;
            let one = DetectionPlan::repeated(k_l, 1);
            let mut snaps = Vec::with_capacity(NU_LIST.len());
            for nu in 1..=8 {
                let (next, w) = exact::postselect(&dense, &one, &geometry)?;
                dense = next;
                weight *= w;
                if NU_LIST.contains(&nu) {
                    let m = exact::field_moments(&dense, k_l, &geometry);
                    snaps.push((witness::xi2_fixed(&m), weight, exact::purity(&dense)));
                }
            }
            Ok(snaps)
        })
        .collect::<Result<_>>()?;

    let mut out = String::from("nu,s,xi2,db,verdict,minimizer,weight,purity\n");
    for (ni, nu) in NU_LIST.iter().enumerate() {
        for (si, s) in grid.iter().enumerate() {
            let (r, w, p) = &per_s[si][ni];
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                nu,
                fmt(*s),
                row_core(r),
                fmt(*w),
                fmt(*p)
            ));
        }
    }
    Ok(out)
}

/// Population-state ξ²(θ̄) closed form for N = 100, ν ∈ {10,…,90,99}.
fn fig3() -> Result<String> {
    const N: usize = 100;
    let nus: Vec<usize> = (1..=9).map(|k| 10 * k).chain([99]).collect();
    let mut out = String::from("nu,theta_bar,xi2,db,verdict\n");
    for nu in nus {
        for theta_bar in theta_grid() {
            let cells = match analytic::xi2_population(N, nu, theta_bar) {
                Ok(xi2) => {
                    let verdict = if xi2 < 1.0 {
                        Verdict::Entangled
                    } else {
                        Verdict::NotDetected
                    };
                    format!(
                        "{},{},{}",
                        fmt(xi2),
                        fmt(witness::db_of(xi2)),
                        verdict.label()
                    )
                }
                Err(Error::IndeterminateWitness) => {
                    format!(",,{}", Verdict::Indeterminate.label())
                }
                Err(e) => return Err(e),
            };
            out.push_str(&format!("{},{},{}\n", nu, fmt(theta_bar), cells));
        }
    }
    Ok(out)
}

/// Squeezing vs measurement angle for three detection angles, population
/// state on the fixed random sphere (moments with the geometry's structure
/// factor).
fn fig4a() -> Result<String> {
    const N: usize = 100;
    const NU: usize = 50;
    let theta_bar = std::f64::consts::PI / 3.0;
    let geometry = Geometry::random_sphere(N, 200.0 * std::f64::consts::PI, SPHERE_SEED)?;
    let theta_ds = [
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_4,
    ];
    let mut out = String::from("theta_d,theta_w,xi2,db,verdict,minimizer\n");
    for theta_d in theta_ds {
        let k_d = WaveDirection::from_polar(theta_d, 0.0);
        for theta_w in theta_w_grid() {
            let k_w = WaveDirection::from_polar(theta_w, 0.0);
            let f = geometry.structure_factor(k_d.unit() - k_w.unit());
            let m = analytic::population_moments(N, NU, theta_bar, f)?;
            let r = witness::xi2_fixed(&m);
            out.push_str(&format!(
                "{},{},{}\n",
                fmt(theta_d),
                fmt(theta_w),
                row_core(&r)
            ));
        }
    }
    Ok(out)
}

const FIG4_RING_N: usize = 10;
const FIG4_CSS_THETA: f64 = 3.0 * std::f64::consts::PI / 4.0;
const FIG4_THETA_L: f64 = std::f64::consts::FRAC_PI_4;

fn fig4_ring() -> Result<(Geometry, WaveDirection)> {
    let geometry = Geometry::ring(FIG4_RING_N, 2.0 * std::f64::consts::PI, xz_plane())?;
    Ok((geometry, WaveDirection::from_polar(FIG4_THETA_L, 0.0)))
}

/// Ring CSS: ξ²(θ_w) after five detections along the drive, plus the
/// radiated intensity after a single detection.
fn fig4b() -> Result<String> {
    let (geometry, k_l) = fig4_ring()?;
    let state = ProductState::css(FIG4_CSS_THETA, k_l, &geometry)?;
    let dense = exact::realize(&state)?;
    let (post5, weight5) = exact::postselect(&dense, &DetectionPlan::repeated(k_l, 5), &geometry)?;
    let (post1, _) = exact::postselect(&dense, &DetectionPlan::repeated(k_l, 1), &geometry)?;

    let mut out = String::from("theta_w,xi2,db,verdict,minimizer,weight,intensity\n");
    for theta_w in theta_w_grid() {
        let k_w = WaveDirection::from_polar(theta_w, 0.0);
        let m = exact::field_moments(&post5, k_w, &geometry);
        let r = witness::xi2_fixed(&m);
        let intensity = exact::intensity(&post1, k_w, &geometry);
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(theta_w),
            row_core(&r),
            fmt(weight5),
            fmt(intensity)
        ));
    }
    Ok(out)
}

/// Ring CSS: same-direction vs spread detection angles, ν ∈ {1,3,5}.
fn fig4c() -> Result<String> {
    const SPREAD_ANGLES: [f64; 5] = [
        0.0,
        std::f64::consts::FRAC_PI_3,
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_2,
        std::f64::consts::PI,
    ];
    let (geometry, k_l) = fig4_ring()?;
    let state = ProductState::css(FIG4_CSS_THETA, k_l, &geometry)?;
    let dense = exact::realize(&state)?;

    let mut out = String::from("mode,nu,theta_w,xi2,db,verdict,minimizer,weight\n");
    for nu in [1usize, 3, 5] {
        let plans = [
            ("same-direction", DetectionPlan::repeated(k_l, nu)),
            (
                "spread",
                DetectionPlan::new(
                    SPREAD_ANGLES[..nu]
                        .iter()
                        .map(|&a| WaveDirection::from_polar(a, 0.0))
                        .collect(),
                ),
            ),
        ];
        for (mode, plan) in plans {
            let (post, weight) = exact::postselect(&dense, &plan, &geometry)?;
            for theta_w in theta_w_grid() {
                let k_w = WaveDirection::from_polar(theta_w, 0.0);
                let m = exact::field_moments(&post, k_w, &geometry);
                let r = witness::xi2_fixed(&m);
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    mode,
                    nu,
                    fmt(theta_w),
                    row_core(&r),
                    fmt(weight)
                ));
            }
        }
    }
    Ok(out)
}

fn row_core(r: &SqueezingReport) -> String {
    let minimizer = match r.minimizer {
        Minimizer::Axis(a) => a.label().to_string(),
        Minimizer::Direction(d) => format!("({};{};{})", fmt(d.x), fmt(d.y), fmt(d.z)),
    };
    format!(
        "{},{},{},{}",
        fmt_opt(r.xi2),
        fmt_opt(r.db),
        r.verdict.label(),
        minimizer
    )
}

/// One-point closed-form queries for the `single` subcommand.
#[derive(Debug, Clone)]
pub enum SingleQuery {
    FullyExcited { n: usize, nu: usize },
    FullyMixed { n: usize, nu: usize, f: Option<f64> },
    Population { n: usize, nu: usize, theta_bar: f64 },
    PopulationThreshold { n: usize, theta_bar: f64 },
}

/// Evaluates a single closed-form case as one machine-readable line of
/// `key=value` pairs.
pub fn single(query: &SingleQuery) -> Result<String> {
    let line = |xi2: Result<f64>, weight: Option<f64>| -> Result<String> {
        let weight_cell = fmt_opt(weight);
        match xi2 {
            Ok(v) => {
                let verdict = if v < 1.0 {
                    Verdict::Entangled
                } else {
                    Verdict::NotDetected
                };
                Ok(format!(
                    "xi2={} db={} verdict={} weight={}",
                    fmt(v),
                    fmt(witness::db_of(v)),
                    verdict.label(),
                    weight_cell
                ))
            }
            Err(Error::IndeterminateWitness) => Ok(format!(
                "xi2= db= verdict={} weight={}",
                Verdict::Indeterminate.label(),
                weight_cell
            )),
            Err(e) => Err(e),
        }
    };

    match query {
        SingleQuery::FullyExcited { n, nu } => {
            let weight = (*nu >= 1).then(|| analytic::population_event_weight(*n, *nu, 1.0));
            line(analytic::xi2_fully_excited(*n, *nu), weight)
        }
        SingleQuery::FullyMixed { n, nu, f } => {
            let f = f.unwrap_or((n * (n - 1)) as f64);
            let weight = Some(analytic::population_event_weight(*n, *nu, 0.5));
            line(analytic::xi2_fully_mixed(*n, *nu, f), weight)
        }
        SingleQuery::Population { n, nu, theta_bar } => {
            let weight = analytic::population_moments(*n, *nu, *theta_bar, 0.0)
                .ok()
                .map(|m| m.weight);
            line(analytic::xi2_population(*n, *nu, *theta_bar), weight)
        }
        SingleQuery::PopulationThreshold { n, theta_bar } => {
            match analytic::population_threshold(*n, *theta_bar) {
                Ok(nu) => Ok(format!("threshold={nu}")),
                Err(Error::NoSqueezingPossible) => Ok("threshold= reachable=false".to_string()),
                Err(e) => Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_fixed_size() {
        assert_eq!(theta_grid().len(), 180);
        assert_eq!(theta_w_grid().len(), 181);
        assert_eq!(s_grid().len(), 61);
        assert_eq!(theta_w_grid()[0], 0.0);
        assert_eq!(theta_grid()[179], std::f64::consts::PI);
    }

    #[test]
    fn single_reference_lines() {
        let line = single(&SingleQuery::FullyMixed {
            n: 11,
            nu: 6,
            f: None,
        })
        .unwrap();
        assert!(
            line.starts_with("xi2=0.900990099009901"),
            "unexpected line: {line}"
        );
        assert!(line.contains("verdict=entangled"));

        let line = single(&SingleQuery::FullyExcited { n: 10, nu: 5 }).unwrap();
        assert!(line.contains("xi2=0 "), "{line}");
        assert!(line.contains("db=inf"), "{line}");

        let line = single(&SingleQuery::PopulationThreshold {
            n: 101,
            theta_bar: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        assert_eq!(line, "threshold=51");
    }

    #[test]
    fn unknown_figure_is_invalid() {
        assert!(matches!(
            figure_to_string("fig9z"),
            Err(Error::InvalidConfig(_))
        ));
    }
}
