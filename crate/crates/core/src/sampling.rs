//! Seeded uniform samplers for points in bodies and directions on spheres.
//!
//! Streams come from ChaCha8 with the stream id as the cipher's stream
//! selector. A `(seed, stream_id)` pair gives the same sequence on every
//! platform, and different stream ids never overlap.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bodies::{polygon_vertices, BodyKind, ConvexBody};
use crate::error::{Error, Result};

/// Consecutive rejections after which bounding-box sampling gives up.
pub const MAX_REJECTIONS: u64 = 1_000_000;

/// One independent random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// Draws a uniform point of `body`.
pub fn sample_point(body: &ConvexBody, rng: &mut RngStream) -> Result<Vec<f64>> {
    let sampler = PointSampler::new(body);
    let mut x = vec![0.0; body.dim()];
    sampler.sample_into(rng, &mut x)?;
    Ok(x)
}

/// Draws a uniform direction on `S^{d-1}`. With `hemisphere` set the sign is
/// chosen so the first nonzero coordinate is positive, so each line through
/// the origin is represented once.
pub fn sample_direction(d: usize, rng: &mut RngStream, hemisphere: bool) -> Vec<f64> {
    let mut u = vec![0.0; d];
    direction_into(rng, hemisphere, &mut u);
    u
}

pub(crate) fn direction_into(rng: &mut RngStream, hemisphere: bool, u: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for v in u.iter_mut() {
            *v = rng.normal();
            n2 += *v * *v;
        }
        if n2 > 0.0 {
            let inv = 1.0 / libm::sqrt(n2);
            u.iter_mut().for_each(|v| *v *= inv);
            break;
        }
    }
    if hemisphere {
        if let Some(first) = u.iter().find(|v| **v != 0.0) {
            if *first < 0.0 {
                u.iter_mut().for_each(|v| *v = -*v);
            }
        }
    }
}

/// Reusable per-body sampler; precomputes what each draw needs.
#[derive(Debug, Clone)]
pub struct PointSampler<'a> {
    body: &'a ConvexBody,
    polygon: Vec<Vec<f64>>,
    bbox: (Vec<f64>, Vec<f64>),
}

impl<'a> PointSampler<'a> {
    pub fn new(body: &'a ConvexBody) -> Self {
        let polygon = match body.kind() {
            BodyKind::RegularPolygon { n_sides, circumradius } => polygon_vertices(*n_sides, *circumradius),
            _ => Vec::new(),
        };
        let bbox = match body.kind() {
            BodyKind::VPolytope { .. } => body.bounding_box(),
            _ => (Vec::new(), Vec::new()),
        };
        Self { body, polygon, bbox }
    }

    pub fn body(&self) -> &ConvexBody {
        self.body
    }

    /// Writes a uniform point of the body into `x` (length `d`).
    pub fn sample_into(&self, rng: &mut RngStream, x: &mut [f64]) -> Result<()> {
        let d = self.body.dim();
        match self.body.kind() {
            BodyKind::Box { lower, upper } => {
                for k in 0..d {
                    x[k] = lower[k] + (upper[k] - lower[k]) * rng.uniform();
                }
            }
            BodyKind::Ball { center, radius } => {
                direction_into(rng, false, x);
                let r = radius * libm::pow(rng.uniform(), 1.0 / d as f64);
                for k in 0..d {
                    x[k] = center[k] + r * x[k];
                }
            }
            BodyKind::Ellipsoid { center, semi_axes } => {
                direction_into(rng, false, x);
                let r = libm::pow(rng.uniform(), 1.0 / d as f64);
                for k in 0..d {
                    x[k] = center[k] + semi_axes[k] * r * x[k];
                }
            }
            BodyKind::Simplex { vertices } => {
                // Spacings of d sorted uniforms are Dirichlet(1, ..., 1).
                let mut cuts: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
                cuts.sort_by(f64::total_cmp);
                x.iter_mut().for_each(|v| *v = 0.0);
                let mut prev = 0.0;
                for (i, vert) in vertices.iter().enumerate() {
                    let next = if i < d { cuts[i] } else { 1.0 };
                    let w = next - prev;
                    prev = next;
                    for k in 0..d {
                        x[k] += w * vert[k];
                    }
                }
            }
            BodyKind::RegularPolygon { n_sides, .. } => {
                // Fan of congruent triangles about the centre.
                let k = rng.index(*n_sides);
                let a = &self.polygon[k];
                let b = &self.polygon[(k + 1) % n_sides];
                let (mut s, mut t) = (rng.uniform(), rng.uniform());
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                x[0] = s * a[0] + t * b[0];
                x[1] = s * a[1] + t * b[1];
            }
            BodyKind::VPolytope { .. } => {
                let (lo, hi) = &self.bbox;
                let mut attempts = 0u64;
                loop {
                    for k in 0..d {
                        x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
                    }
                    if self.body.contains_unchecked(x) {
                        break;
                    }
                    attempts += 1;
                    if attempts >= MAX_REJECTIONS {
                        return Err(Error::ThinBody { attempts });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Welford;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut r = RngStream::new(7, 3);
            (0..16).map(|_| r.uniform()).collect()
        };
        let b: Vec<f64> = {
            let mut r = RngStream::new(7, 3);
            (0..16).map(|_| r.uniform()).collect()
        };
        let c: Vec<f64> = {
            let mut r = RngStream::new(7, 4);
            (0..16).map(|_| r.uniform()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn box_points_stay_inside() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let p = sample_point(&sq, &mut rng).unwrap();
            assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn d1_direction_is_a_fair_sign() {
        let mut rng = RngStream::new(5, 0);
        let n = 100_000;
        let plus = (0..n).filter(|_| sample_direction(1, &mut rng, false)[0] > 0.0).count();
        // Binomial(n, 1/2): 4 sigma band.
        assert!((plus as f64 - n as f64 / 2.0).abs() < 4.0 * libm::sqrt(n as f64 / 4.0));
    }

    #[test]
    fn hemisphere_sign_convention() {
        let mut rng = RngStream::new(9, 2);
        for _ in 0..10_000 {
            let u = sample_direction(2, &mut rng, true);
            assert!(u[0] >= 0.0);
            assert!((u[0] * u[0] + u[1] * u[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn isotropy_second_moment_d3() {
        let mut rng = RngStream::new(11, 0);
        let n = 1_000_000;
        let acc: Welford = (0..n)
            .map(|_| {
                let u = sample_direction(3, &mut rng, false);
                u[0] * u[0]
            })
            .collect();
        // Var(u₁²) = E u₁⁴ − 1/9 = 1/5 − 1/9 for d = 3.
        let sigma = libm::sqrt((1.0 / 5.0 - 1.0 / 9.0) / n as f64);
        assert!((acc.mean() - 1.0 / 3.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn disc_mean_is_centered() {
        let disc = ConvexBody::ball(vec![0.3, -0.2], 1.0).unwrap();
        let s = PointSampler::new(&disc);
        let mut rng = RngStream::new(2, 0);
        let n = 1_000_000;
        let mut x = [0.0; 2];
        let mut m = [Welford::new(), Welford::new()];
        for _ in 0..n {
            s.sample_into(&mut rng, &mut x).unwrap();
            m[0].push(x[0]);
            m[1].push(x[1]);
        }
        // Coordinate variance of the uniform unit disc is 1/4.
        let sigma = 0.5 / libm::sqrt(n as f64);
        assert!((m[0].mean() - 0.3).abs() < 3.0 * sigma);
        assert!((m[1].mean() + 0.2).abs() < 3.0 * sigma);
    }

    #[test]
    fn simplex_mean_is_centroid() {
        let s = ConvexBody::simplex(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let sampler = PointSampler::new(&s);
        let mut rng = RngStream::new(3, 0);
        let n = 1_000_000;
        let mut x = [0.0; 2];
        let mut m = [Welford::new(), Welford::new()];
        for _ in 0..n {
            sampler.sample_into(&mut rng, &mut x).unwrap();
            m[0].push(x[0]);
            m[1].push(x[1]);
        }
        // Coordinate variance on this triangle is 1/18.
        let sigma = libm::sqrt(1.0 / 18.0 / n as f64);
        for acc in &m {
            assert!((acc.mean() - 1.0 / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn every_sample_is_contained() {
        let bodies = [
            ConvexBody::unit_ball(3).unwrap(),
            ConvexBody::ellipsoid(vec![1.0, 0.0, 0.0], vec![0.5, 2.0, 1.0]).unwrap(),
            ConvexBody::simplex(vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, 3.0],
            ])
            .unwrap(),
            ConvexBody::regular_polygon(7, 2.0).unwrap(),
            ConvexBody::vpolytope(vec![
                vec![0.0, 0.0],
                vec![2.0, 0.1],
                vec![1.5, 1.0],
                vec![0.2, 1.3],
                vec![-0.4, 0.6],
            ])
            .unwrap(),
        ];
        let mut rng = RngStream::new(4, 1);
        for body in &bodies {
            let s = PointSampler::new(body);
            let mut x = vec![0.0; body.dim()];
            for _ in 0..20_000 {
                s.sample_into(&mut rng, &mut x).unwrap();
                // Rounding in affine combinations can leave a point 1 ulp out.
                let inside = body.contains_unchecked(&x)
                    || body.scaled(1.0 + 1e-12).unwrap().contains_unchecked(&x);
                assert!(inside, "{:?} produced {:?}", body.kind(), x);
            }
        }
    }

    #[test]
    fn thin_vpolytope_reports_thin_body() {
        // A needle along the diagonal fills a vanishing fraction of its box.
        let eps = 1e-9;
        let body = ConvexBody::vpolytope(vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.5 + eps, 0.5 - eps],
        ])
        .unwrap();
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(sample_point(&body, &mut rng), Err(Error::ThinBody { .. })));
    }
}
