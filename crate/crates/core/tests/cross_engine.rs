//! Closed forms against the dense oracle on small ensembles.
//!
//! Every analytic path must reproduce the exact engine to tight tolerance
//! wherever both apply; these fixtures cover arbitrary (including
//! heterogeneous) product states for single-photon formulas and homogeneous
//! population states for the multi-photon ones.

use num_complex::Complex64;
use std::f64::consts::PI;

use postselect_squeeze::analytic;
use postselect_squeeze::exact;
use postselect_squeeze::geometry::{Geometry, WaveDirection};
use postselect_squeeze::moments::FieldMoments;
use postselect_squeeze::states::{DetectionPlan, EmitterState, ProductState};
use postselect_squeeze::witness;

/// Small deterministic generator for fixture states.
struct TestRng(u64);

impl TestRng {
    fn new(seed: u64) -> Self {
        TestRng(
            seed.wrapping_mul(0x9E3779B97F4A7C15)
                .wrapping_add(0x1234567),
        )
    }

    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn random_geometry(rng: &mut TestRng, n: usize) -> Geometry {
    let positions = (0..n)
        .map(|_| {
            nalgebra::Vector3::new(
                4.0 * PI * (rng.next_f64() - 0.5),
                4.0 * PI * (rng.next_f64() - 0.5),
                4.0 * PI * (rng.next_f64() - 0.5),
            )
        })
        .collect();
    Geometry::new(positions).unwrap()
}

/// A product state with independently random factors (mixed purity).
fn random_state(rng: &mut TestRng, geometry: &Geometry) -> ProductState {
    let emitters = (0..geometry.len())
        .map(|_| {
            let ee = 0.05 + 0.9 * rng.next_f64();
            // coherence radius strictly inside the positivity ball
            let r = (ee * (1.0 - ee)).sqrt() * rng.next_f64().sqrt();
            let phase = 2.0 * PI * rng.next_f64();
            EmitterState::new(ee, Complex64::from_polar(r, phase)).unwrap()
        })
        .collect();
    ProductState::new(geometry.clone(), emitters).unwrap()
}

fn fixture_states(seed: u64, geometry: &Geometry) -> Vec<(&'static str, ProductState)> {
    let mut rng = TestRng::new(seed);
    let theta = 0.3 + 2.7 * rng.next_f64();
    let s = 0.1 + 5.0 * rng.next_f64();
    let k_l = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
    vec![
        ("css", ProductState::css(theta, k_l, geometry).unwrap()),
        ("steady", ProductState::steady(s, k_l, geometry).unwrap()),
        (
            "population",
            ProductState::population(theta, geometry).unwrap(),
        ),
        ("random-mix", random_state(&mut rng, geometry)),
    ]
}

fn assert_moments_close(label: &str, analytic: &FieldMoments, dense: &FieldMoments, tol: f64) {
    for i in 0..3 {
        let d = (analytic.first[i] - dense.first[i]).abs();
        assert!(
            d <= tol * dense.first[i].abs().max(1.0),
            "{label}: first[{i}] analytic {} vs dense {}",
            analytic.first[i],
            dense.first[i]
        );
        let d = (analytic.second[(i, i)] - dense.second[(i, i)]).abs();
        assert!(
            d <= tol * dense.second[(i, i)].abs().max(1.0),
            "{label}: second[{i}] analytic {} vs dense {}",
            analytic.second[(i, i)],
            dense.second[(i, i)]
        );
    }
}

#[test]
fn single_photon_moments_match_dense_oracle() {
    for seed in 0..12u64 {
        let n = 2 + (seed as usize % 7); // 2..=8
        let mut rng = TestRng::new(seed.wrapping_add(1000));
        let geometry = random_geometry(&mut rng, n);
        let k_d = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
        for (label, state) in fixture_states(seed, &geometry) {
            let analytic_m = match analytic::single_photon_moments(&state, k_d) {
                Ok(m) => m,
                Err(postselect_squeeze::Error::ImpossibleDetection) => continue,
                Err(e) => panic!("{label}: {e}"),
            };
            let dense = exact::realize(&state).unwrap();
            let (post, weight) =
                exact::postselect(&dense, &DetectionPlan::repeated(k_d, 1), &geometry).unwrap();
            let dense_m = exact::field_moments(&post, k_d, &geometry);
            assert!(
                (analytic_m.weight - weight).abs() <= 1e-9 * weight.max(1.0),
                "{label} seed {seed}: weight {} vs {}",
                analytic_m.weight,
                weight
            );
            assert_moments_close(
                &format!("{label} seed {seed} n {n}"),
                &analytic_m,
                &dense_m,
                1e-9,
            );
        }
    }
}

#[test]
fn single_photon_intensity_matches_dense_oracle() {
    for seed in 0..12u64 {
        let n = 2 + (seed as usize % 7);
        let mut rng = TestRng::new(seed.wrapping_add(2000));
        let geometry = random_geometry(&mut rng, n);
        let k_d = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
        let k_w = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
        for (label, state) in fixture_states(seed.wrapping_add(7), &geometry) {
            let i_analytic = match analytic::single_photon_intensity(&state, k_d, k_w) {
                Ok(v) => v,
                Err(postselect_squeeze::Error::ImpossibleDetection) => continue,
                Err(e) => panic!("{label}: {e}"),
            };
            let dense = exact::realize(&state).unwrap();
            let (post, _) =
                exact::postselect(&dense, &DetectionPlan::repeated(k_d, 1), &geometry).unwrap();
            let i_dense = exact::intensity(&post, k_w, &geometry);
            assert!(
                (i_analytic - i_dense).abs() <= 1e-9 * i_dense.abs().max(1.0),
                "{label} seed {seed}: intensity {i_analytic} vs {i_dense}"
            );
        }
    }
}

#[test]
fn population_moments_match_dense_for_general_directions() {
    // k_w ≠ k_d exercises the structure-factor term of ⟨X²⟩.
    for seed in 0..6u64 {
        let mut rng = TestRng::new(seed.wrapping_add(3000));
        for n in [2usize, 3, 5, 7] {
            let geometry = random_geometry(&mut rng, n);
            let k_d = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
            let k_w = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
            let theta_bar = 0.4 + 2.7 * rng.next_f64();
            let state = ProductState::population(theta_bar, &geometry).unwrap();
            let dense = exact::realize(&state).unwrap();
            for nu in 1..n {
                let f = geometry.structure_factor(k_d.unit() - k_w.unit());
                let analytic_m = analytic::population_moments(n, nu, theta_bar, f).unwrap();
                let (post, weight) =
                    exact::postselect(&dense, &DetectionPlan::repeated(k_d, nu), &geometry)
                        .unwrap();
                let dense_m = exact::field_moments(&post, k_w, &geometry);
                assert_moments_close(
                    &format!("population n {n} nu {nu} seed {seed}"),
                    &analytic_m,
                    &dense_m,
                    1e-9,
                );
                assert!(
                    (analytic_m.weight - weight).abs() <= 1e-9 * weight.max(1.0),
                    "weight {} vs {}",
                    analytic_m.weight,
                    weight
                );
            }
        }
    }
}

#[test]
fn population_edge_guards_match_dense() {
    // N = 2 and ν = N−1 drop the (vᶻ)² term of ⟨Z²⟩; the dense engine is the
    // arbiter that the guarded formula is the right one.
    let k = WaveDirection::z();
    for (n, nu) in [(2usize, 1usize), (4, 3), (5, 4), (6, 5)] {
        let geometry = Geometry::chain(n, 1.3, WaveDirection::x()).unwrap();
        for theta_bar in [PI / 3.0, 2.0 * PI / 3.0, 2.9] {
            let state = ProductState::population(theta_bar, &geometry).unwrap();
            let dense = exact::realize(&state).unwrap();
            let (post, _) =
                exact::postselect(&dense, &DetectionPlan::repeated(k, nu), &geometry).unwrap();
            let dense_m = exact::field_moments(&post, k, &geometry);
            let f = geometry.structure_factor(nalgebra::Vector3::zeros());
            let analytic_m = analytic::population_moments(n, nu, theta_bar, f).unwrap();
            assert_moments_close(&format!("edge n {n} nu {nu}"), &analytic_m, &dense_m, 1e-9);
        }
    }
}

#[test]
fn xi2_population_matches_dense_squeezing() {
    let k = WaveDirection::from_polar(1.1, 0.4);
    for n in [3usize, 5, 8] {
        let geometry = Geometry::chain(n, 2.0 * PI, WaveDirection::z()).unwrap();
        for theta_bar in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
            let state = ProductState::population(theta_bar, &geometry).unwrap();
            let dense = exact::realize(&state).unwrap();
            for nu in 1..n {
                let xi2 = analytic::xi2_population(n, nu, theta_bar).unwrap();
                let (post, _) =
                    exact::postselect(&dense, &DetectionPlan::repeated(k, nu), &geometry).unwrap();
                let m = exact::field_moments(&post, k, &geometry);
                let r = witness::xi2_fixed(&m);
                let got = r.xi2.expect("denominator positive on this grid");
                assert!(
                    (xi2 - got).abs() <= 1e-9 * xi2.max(1.0),
                    "n {n} nu {nu} θ̄ {theta_bar}: closed form {xi2} vs dense {got}"
                );
            }
        }
    }
}

#[test]
fn homogeneous_css_matches_dense_on_a_ring() {
    // Drive, detection and measurement aligned: phase-free formulas hold on
    // any geometry.
    let k = WaveDirection::from_polar(0.9, 0.0);
    let geometry = Geometry::ring(6, 2.0 * PI, postselect_squeeze::geometry::xz_plane()).unwrap();
    for theta in [0.5, 1.5, 2.0, 2.8] {
        let state = ProductState::css(theta, k, &geometry).unwrap();
        let homog = analytic::homogeneous_css_moments(6, theta).unwrap();
        let dense = exact::realize(&state).unwrap();
        let (post, weight) =
            exact::postselect(&dense, &DetectionPlan::repeated(k, 1), &geometry).unwrap();
        let dense_m = exact::field_moments(&post, k, &geometry);
        assert!((homog.weight - weight).abs() <= 1e-9 * weight.max(1.0));
        assert_moments_close(&format!("homog θ {theta}"), &homog, &dense_m, 1e-9);
    }
}

#[test]
fn optimized_witness_on_postselected_css() {
    // The direction-optimized parameter can only improve on the fixed
    // triple, and reduces to it for coherence-free states.
    for seed in 0..8u64 {
        let mut rng = TestRng::new(seed.wrapping_add(4000));
        let geometry = random_geometry(&mut rng, 5);
        let k_l = WaveDirection::from_polar(PI * rng.next_f64(), 0.0);
        let k_d = WaveDirection::from_polar(PI * rng.next_f64(), 0.3);
        let theta = 0.5 + 2.5 * rng.next_f64();
        let state = ProductState::css(theta, k_l, &geometry).unwrap();
        let dense = exact::realize(&state).unwrap();
        let nu = 1 + (seed as usize % 3);
        let (post, _) =
            exact::postselect(&dense, &DetectionPlan::repeated(k_d, nu), &geometry).unwrap();
        let m = exact::field_moments(&post, k_d, &geometry);
        let fixed = witness::xi2_fixed(&m);
        let optimal = witness::xi2_optimal(&m);
        if let (Some(a), Some(b)) = (optimal.xi2, fixed.xi2) {
            assert!(a <= b + 1e-12, "seed {seed}: optimal {a} > fixed {b}");
        }
    }

    // Population states after detection: zero first transverse moments and
    // diagonal second moments make both variants coincide.
    let geometry = Geometry::chain(6, 2.0 * PI, WaveDirection::z()).unwrap();
    let state = ProductState::population(2.0, &geometry).unwrap();
    let dense = exact::realize(&state).unwrap();
    let k = WaveDirection::from_polar(0.7, 0.0);
    let (post, _) = exact::postselect(&dense, &DetectionPlan::repeated(k, 3), &geometry).unwrap();
    let m = exact::field_moments(&post, k, &geometry);
    let fixed = witness::xi2_fixed(&m).xi2.unwrap();
    let optimal = witness::xi2_optimal(&m).xi2.unwrap();
    assert!((fixed - optimal).abs() <= 1e-9 * fixed.max(1.0));
}

#[test]
fn fully_mixed_closed_form_matches_dense() {
    // Fully-mixed closed form against the dense engine at k_d = k_w.
    let k = WaveDirection::from_polar(0.5, 1.0);
    for n in [4usize, 6] {
        let geometry = Geometry::chain(n, 2.0 * PI, WaveDirection::z()).unwrap();
        let state = ProductState::steady(f64::INFINITY, WaveDirection::x(), &geometry).unwrap();
        let dense = exact::realize(&state).unwrap();
        for nu in 1..n {
            let xi2 = analytic::xi2_fully_mixed(n, nu, (n * (n - 1)) as f64).unwrap();
            let (post, _) =
                exact::postselect(&dense, &DetectionPlan::repeated(k, nu), &geometry).unwrap();
            let m = exact::field_moments(&post, k, &geometry);
            let got = witness::xi2_fixed(&m).xi2.unwrap();
            assert!(
                (xi2 - got).abs() <= 1e-9 * xi2.max(1.0),
                "n {n} nu {nu}: {xi2} vs {got}"
            );
        }
    }
}

#[test]
fn fully_mixed_formula_limit_at_zero_detections() {
    // ν = 0 is rejected by the closed-form routine, but its formal value
    // (ν² + N(N−ν))/(N + ν(ν−1) + 0) → N must match the measured ξ² of the
    // undisturbed maximally mixed state.
    for n in [4usize, 6] {
        let nf = n as f64;
        let formal = (0.0 + nf * nf) / nf;
        let geometry = Geometry::chain(n, 2.0 * PI, WaveDirection::z()).unwrap();
        let state = ProductState::steady(f64::INFINITY, WaveDirection::x(), &geometry).unwrap();
        let dense = exact::realize(&state).unwrap();
        let m = exact::field_moments(&dense, WaveDirection::x(), &geometry);
        let got = witness::xi2_fixed(&m).xi2.unwrap();
        assert!((got - formal).abs() <= 1e-9, "n={n}: {got} vs {formal}");
        assert!(analytic::xi2_fully_mixed(n, 0, nf * (nf - 1.0)).is_err());
    }
}

#[test]
fn w2_sign_matches_xi2_on_postselected_fixtures() {
    for seed in 0..10u64 {
        let mut rng = TestRng::new(seed.wrapping_add(9000));
        let n = 3 + (seed as usize % 5);
        let geometry = random_geometry(&mut rng, n);
        let k_d = WaveDirection::from_polar(PI * rng.next_f64(), 2.0 * PI * rng.next_f64());
        for (label, state) in fixture_states(seed.wrapping_add(17), &geometry) {
            let dense = exact::realize(&state).unwrap();
            let nu = 1 + (seed as usize % (n - 1));
            let Ok((post, _)) =
                exact::postselect(&dense, &DetectionPlan::repeated(k_d, nu), &geometry)
            else {
                continue;
            };
            let m = exact::field_moments(&post, k_d, &geometry);
            let r = witness::xi2_fixed(&m);
            if r.denominator > 0.0 {
                let (_, w2, _) = witness::witness_values(&m);
                assert_eq!(
                    w2 < 0.0,
                    r.xi2.unwrap() < 1.0,
                    "{label} seed {seed}: w₂ = {w2} vs ξ² = {:?}",
                    r.xi2
                );
            }
        }
    }
}

#[test]
fn analytic_runtime_scales_to_fig2a_sizes() {
    // One N = 800 single-photon evaluation must be far under a second.
    let geometry = Geometry::chain(800, 2.0 * PI, WaveDirection::z()).unwrap();
    let state = ProductState::css(2.8, WaveDirection::x(), &geometry).unwrap();
    let start = std::time::Instant::now();
    let m = analytic::single_photon_moments(&state, WaveDirection::x()).unwrap();
    let elapsed = start.elapsed();
    assert!(m.weight > 0.0);
    assert!(
        elapsed < std::time::Duration::from_secs(1),
        "N = 800 evaluation took {elapsed:?}"
    );
}
