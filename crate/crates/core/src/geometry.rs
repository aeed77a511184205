//! Emitter geometries and observation directions.
//!
//! Positions are stored in dimensionless units: each component is the
//! physical coordinate multiplied by the transition wavenumber k (i.e. k·r).
//! Observation/drive wavevectors are therefore plain unit vectors and every
//! optical phase in the crate is computed as `direction.unit() · position`.

use std::io::{BufRead, Write};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

/// A far-field direction (detection, measurement, or drive).
///
/// Wraps a unit 3-vector; the associated physical wavevector is k·n̂, so with
/// positions stored as k·r the phase k·n̂·r reduces to `unit · position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveDirection {
    unit: Vector3<f64>,
}

impl WaveDirection {
    /// Builds a direction from an explicit vector, which must already be
    /// normalized to within 1e-12.
    pub fn new(unit: Vector3<f64>) -> Result<Self> {
        if !unit.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter(
                "wave direction has non-finite components".into(),
            ));
        }
        if (unit.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "wave direction must be a unit vector, |v| = {}",
                unit.norm()
            )));
        }
        Ok(Self { unit })
    }

    /// Normalizes an arbitrary nonzero vector into a direction.
    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero or non-finite vector into a direction".into(),
            ));
        }
        Ok(Self { unit: v / n })
    }

    /// Spherical angles: polar angle from +z, azimuth from +x in the xy-plane.
    pub fn from_polar(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self {
            unit: Vector3::new(sp * ca, sp * sa, cp),
        }
    }

    pub fn x() -> Self {
        Self {
            unit: Vector3::new(1.0, 0.0, 0.0),
        }
    }

    pub fn y() -> Self {
        Self {
            unit: Vector3::new(0.0, 1.0, 0.0),
        }
    }

    pub fn z() -> Self {
        Self {
            unit: Vector3::new(0.0, 0.0, 1.0),
        }
    }

    pub fn unit(&self) -> Vector3<f64> {
        self.unit
    }
}

/// Ordered emitter positions in dimensionless (k·r) units.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    positions: Vec<Vector3<f64>>,
}

impl Geometry {
    /// Builds a geometry from explicit positions (at least two, all finite).
    pub fn new(positions: Vec<Vector3<f64>>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 2 emitters, got {}",
                positions.len()
            )));
        }
        if !positions.iter().all(|p| p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidGeometry(
                "positions must have finite components".into(),
            ));
        }
        Ok(Self { positions })
    }

    /// Regular chain of `n` emitters with spacing `step` along `axis`,
    /// starting at the origin. A lattice step of one wavelength is
    /// `step = 2π` in these units.
    pub fn chain(n: usize, step: f64, axis: WaveDirection) -> Result<Self> {
        if step <= 0.0 || !step.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "chain step must be positive and finite, got {step}"
            )));
        }
        let positions = (0..n).map(|p| step * p as f64 * axis.unit()).collect();
        Self::new(positions)
    }

    /// Ring of `n` equally spaced emitters with the given radius, lying in the
    /// plane spanned by the orthonormal pair `(e1, e2)`.
    pub fn ring(n: usize, radius: f64, plane: (Vector3<f64>, Vector3<f64>)) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "ring radius must be positive and finite, got {radius}"
            )));
        }
        let (e1, e2) = plane;
        let orthonormal = (e1.norm() - 1.0).abs() <= UNIT_TOL
            && (e2.norm() - 1.0).abs() <= UNIT_TOL
            && e1.dot(&e2).abs() <= UNIT_TOL;
        if !orthonormal {
            return Err(Error::InvalidGeometry(
                "ring plane must be spanned by an orthonormal vector pair".into(),
            ));
        }
        let positions = (0..n)
            .map(|p| {
                let phi = 2.0 * std::f64::consts::PI * p as f64 / n as f64;
                radius * (phi.cos() * e1 + phi.sin() * e2)
            })
            .collect();
        Self::new(positions)
    }

    /// `n` points drawn uniformly from the ball of the given radius.
    ///
    /// The draw is fully specified so that identical `(n, radius, seed)`
    /// produce bit-identical geometries on every platform; see
    /// [`SphereSampler`] for the generator definition.
    pub fn random_sphere(n: usize, radius: f64, seed: u64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "sphere radius must be positive and finite, got {radius}"
            )));
        }
        let mut rng = SphereSampler::new(seed);
        let positions = (0..n).map(|_| rng.next_point(radius)).collect();
        Self::new(positions)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vector3<f64>] {
        &self.positions
    }

    /// Per-emitter factors e^{-i d·r_p} for a phase difference vector `d`
    /// (typically a direction unit vector, or a difference of two).
    pub fn phases(&self, d: Vector3<f64>) -> Vec<Complex64> {
        self.positions
            .iter()
            .map(|r| (-Complex64::i() * d.dot(r)).exp())
            .collect()
    }

    /// Detection phase factors e^{-i k·r_p} for a wave direction.
    pub fn detection_phases(&self, k: WaveDirection) -> Vec<Complex64> {
        self.phases(k.unit())
    }

    /// Structure factor f(Δ) = |Σ_p e^{-iΔ·r_p}|² − N.
    ///
    /// Bounded below by −N; can be negative under destructive interference.
    pub fn structure_factor(&self, delta: Vector3<f64>) -> f64 {
        let sum: Complex64 = self.phases(delta).into_iter().sum();
        sum.norm_sqr() - self.len() as f64
    }

    /// Writes the geometry as CSV with header `index,x,y,z` in emitter order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,x,y,z")?;
        for (i, p) in self.positions.iter().enumerate() {
            writeln!(w, "{},{},{},{}", i, p.x, p.y, p.z)?;
        }
        Ok(())
    }

    /// Reads a geometry previously written by [`Geometry::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "index,x,y,z" => {}
            _ => {
                return Err(Error::InvalidGeometry(
                    "geometry CSV must start with header `index,x,y,z`".into(),
                ))
            }
        }
        let mut positions = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::InvalidGeometry(format!(
                    "geometry CSV row {} has {} fields, expected 4",
                    lineno + 2,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| {
                    Error::InvalidGeometry(format!("bad number {s:?} in geometry CSV"))
                })
            };
            positions.push(Vector3::new(
                parse(fields[1])?,
                parse(fields[2])?,
                parse(fields[3])?,
            ));
        }
        Self::new(positions)
    }
}

/// Deterministic sampler for uniform points in a ball.
///
/// The stream is xoshiro256** seeded through SplitMix64, with all constants
/// fixed here so that geometries are reproducible across implementations:
///
/// * SplitMix64: state += 0x9E3779B97F4A7C15; mixing multipliers
///   0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with shifts 30/27/31.
/// * xoshiro256**: output rotl(s1·5, 7)·9; update s2^=s0, s3^=s1, s1^=s2,
///   s0^=s3, s2 ^= s1<<17, s3 = rotl(s3, 45).
/// * uniform f64 in [0,1): top 53 bits, `(x >> 11) · 2⁻⁵³`.
///
/// Each point consumes exactly three uniforms (u1, u2, u3) and maps them to
/// r = R·u1^(1/3), cosθ = 1 − 2·u2, φ = 2π·u3.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    s: [u64; 4],
}

impl SphereSampler {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9E3779B97F4A7C15);
            let mut x = sm;
            x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
            x ^ (x >> 31)
        };
        Self {
            s: [next(), next(), next(), next()],
        }
    }

    fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next_point(&mut self, radius: f64) -> Vector3<f64> {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let u3 = self.next_f64();
        let r = radius * u1.cbrt();
        let cos_theta = 1.0 - 2.0 * u2;
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u3;
        Vector3::new(
            r * sin_theta * phi.cos(),
            r * sin_theta * phi.sin(),
            r * cos_theta,
        )
    }
}

/// Convenience pair for the xy-plane.
pub fn xy_plane() -> (Vector3<f64>, Vector3<f64>) {
    (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0))
}

/// Convenience pair for the xz-plane.
pub fn xz_plane() -> (Vector3<f64>, Vector3<f64>) {
    (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 0.0, 1.0))
}

/// Convenience pair for the yz-plane.
pub fn yz_plane() -> (Vector3<f64>, Vector3<f64>) {
    (Vector3::new(0.0, 1.0, 0.0), Vector3::new(0.0, 0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn chain_positions_follow_axis() {
        let g = Geometry::chain(4, 2.0 * PI, WaveDirection::z()).unwrap();
        let z: Vec<f64> = g.positions().iter().map(|p| p.z).collect();
        assert_eq!(z, vec![0.0, 2.0 * PI, 4.0 * PI, 6.0 * PI]);
        assert!(g.positions().iter().all(|p| p.x == 0.0 && p.y == 0.0));

        let g = Geometry::chain(2, 1.0, WaveDirection::x()).unwrap();
        assert_eq!(g.positions()[0], Vector3::zeros());
        assert_eq!(g.positions()[1], Vector3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn chain_rejects_degenerate_input() {
        assert!(matches!(
            Geometry::chain(1, 1.0, WaveDirection::z()),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(Geometry::chain(3, 0.0, WaveDirection::z()).is_err());
    }

    #[test]
    fn ring_hits_cardinal_points() {
        let g = Geometry::ring(4, 1.0, xy_plane()).unwrap();
        let expected = [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(-1.0, 0.0, 0.0),
            Vector3::new(0.0, -1.0, 0.0),
        ];
        for (p, e) in g.positions().iter().zip(expected) {
            assert_relative_eq!((p - e).norm(), 0.0, epsilon = 1e-15);
        }

        let g = Geometry::ring(2, 1.0, xy_plane()).unwrap();
        assert_relative_eq!(
            (g.positions()[0] - Vector3::new(1.0, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            (g.positions()[1] - Vector3::new(-1.0, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ring_rejects_non_orthonormal_plane() {
        let skewed = (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.5, 0.5, 0.0));
        assert!(matches!(
            Geometry::ring(4, 1.0, skewed),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn random_sphere_is_reproducible_and_bounded() {
        let r = 200.0 * PI;
        let a = Geometry::random_sphere(100, r, 12345).unwrap();
        let b = Geometry::random_sphere(100, r, 12345).unwrap();
        assert_eq!(a, b);
        assert!(a.positions().iter().all(|p| p.norm() <= r));

        let c = Geometry::random_sphere(100, r, 12346).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_sphere_fills_the_ball_uniformly() {
        // For uniform draws in a ball, |r|³/R³ is uniform on [0,1): mean 1/2.
        let radius = 3.0;
        let g = Geometry::random_sphere(1000, radius, 99).unwrap();
        let mean_cubed: f64 = g
            .positions()
            .iter()
            .map(|p| (p.norm() / radius).powi(3))
            .sum::<f64>()
            / 1000.0;
        assert!(
            (mean_cubed - 0.5).abs() < 0.025,
            "mean |r|³/R³ = {mean_cubed}, expected ≈ 0.5"
        );
    }

    #[test]
    fn structure_factor_at_zero_counts_pairs() {
        for g in [
            Geometry::chain(5, 1.7, WaveDirection::x()).unwrap(),
            Geometry::ring(10, 2.0 * PI, xz_plane()).unwrap(),
            Geometry::random_sphere(17, 5.0, 3).unwrap(),
        ] {
            let n = g.len() as f64;
            assert_relative_eq!(
                g.structure_factor(Vector3::zeros()),
                n * (n - 1.0),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn structure_factor_destructive_pair() {
        // Two emitters half a target-wavevector period apart cancel exactly:
        // |1 + e^{-iπ}|² − 2 = −2.
        let g = Geometry::chain(2, PI, WaveDirection::z()).unwrap();
        assert_relative_eq!(
            g.structure_factor(Vector3::new(0.0, 0.0, 1.0)),
            -2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn structure_factor_bragg_condition() {
        // A 2π-step chain probed at integer multiples of the axis direction
        // has all phases equal mod 2π, giving the full n(n−1).
        let g = Geometry::chain(10, 2.0 * PI, WaveDirection::z()).unwrap();
        for m in 1..=3 {
            assert_relative_eq!(
                g.structure_factor(Vector3::new(0.0, 0.0, m as f64)),
                90.0,
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn wave_direction_must_be_unit() {
        assert!(WaveDirection::new(Vector3::new(1.0, 1.0, 0.0)).is_err());
        let d = WaveDirection::from_polar(1.0, 2.0);
        assert_relative_eq!(d.unit().norm(), 1.0, epsilon = 1e-15);
        let d = WaveDirection::from_vector(Vector3::new(0.0, 3.0, 4.0)).unwrap();
        assert_relative_eq!(d.unit().y, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn geometry_csv_round_trip() {
        let g = Geometry::random_sphere(7, 2.5, 11).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("index,x,y,z\n"));
        let parsed = Geometry::read_csv(&buf[..]).unwrap();
        assert_eq!(parsed, g);
    }
}
