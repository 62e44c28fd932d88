//! Mean distance `Δ(K) = E|X₁ − X₂|` and Sylvester's `p(4, K)`.
//!
//! Two independent estimators are provided:
//!
//! * [`mc_mean_distance`] averages `|X₁ − X₂|` over uniform pairs.
//! * [`chord_mean_distance`] uses the chord-power identity
//!
//!   ```text
//!   Δ(K) = 2 / ((d+1)(d+2)|K|²) ∫_{S^{d-1}} ∫_{u^⊥} |x_u ∩ K|^{d+2} dx μ(du)
//!   ```
//!
//!   where `μ` is the surface measure on a hemisphere (each line counted once,
//!   total mass `|S^{d-1}|/2`). The disc fixes this: with mass `π` the formula
//!   gives `2/(12π²) · π · 256/15 = 128/(45π)`.
//!
//! [`exact_mean_distance`] evaluates the known closed forms.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bodies::{BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::exec::{split_budget, Executor};
use crate::linalg::{distance, orthonormal_complement};
use crate::quadrature::sphere_integral;
use crate::sampling::{direction_into, PointSampler, RngStream};
use crate::special::sphere_area;
use crate::stats::{Estimate, Method, Welford};

/// Pair Monte Carlo estimate of `Δ(K)` from `n` independent pairs, split over
/// `streams` RNG streams and reduced in stream order.
pub fn mc_mean_distance<E: Executor>(
    body: &ConvexBody,
    n: u64,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    if n < 2 {
        return Err(Error::invalid("samples", "need at least 2 pairs"));
    }
    let streams = streams.max(1);
    let d = body.dim();
    let parts = exec.map_streams(streams, |i| -> Result<Welford> {
        let sampler = PointSampler::new(body);
        let mut rng = RngStream::new(seed, i as u64);
        let (mut a, mut b) = (vec![0.0; d], vec![0.0; d]);
        let mut acc = Welford::new();
        for _ in 0..split_budget(n, streams, i) {
            sampler.sample_into(&mut rng, &mut a)?;
            sampler.sample_into(&mut rng, &mut b)?;
            acc.push(distance(&a, &b));
        }
        Ok(acc)
    });
    let acc = reduce(parts)?;
    Ok(Estimate::from_welford(&acc, seed, Method::McPairs))
}

fn reduce(parts: Vec<Result<Welford>>) -> Result<Welford> {
    let mut acc = Welford::new();
    for p in parts {
        acc.merge(&p?);
    }
    Ok(acc)
}

/// Chord-power estimate of `Δ(K)`.
///
/// Each of the `n_dirs` hemisphere directions contributes one sample: the mean
/// of `chord^{d+2}` over `n_offsets` uniform offsets in the bounding box of
/// the shadow of `K` on `u^⊥`, times that box's `(d-1)`-volume. The reported
/// `n_samples` is `n_dirs`.
pub fn chord_mean_distance<E: Executor>(
    body: &ConvexBody,
    n_dirs: u64,
    n_offsets: u64,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    if n_dirs < 2 || n_offsets < 1 {
        return Err(Error::invalid("samples", "need at least 2 directions and 1 offset"));
    }
    let streams = streams.max(1);
    let d = body.dim();
    let power = (d + 2) as i32;
    let parts = exec.map_streams(streams, |i| -> Result<Welford> {
        let mut rng = RngStream::new(seed, i as u64);
        let mut u = vec![0.0; d];
        let mut x = vec![0.0; d];
        let mut acc = Welford::new();
        for _ in 0..split_budget(n_dirs, streams, i) {
            direction_into(&mut rng, true, &mut u);
            let basis = orthonormal_complement(&u);
            let bounds: Vec<(f64, f64)> = basis
                .iter()
                .map(|b| {
                    let neg: Vec<f64> = b.iter().map(|v| -v).collect();
                    (-body.support_unchecked(&neg), body.support_unchecked(b))
                })
                .collect();
            let measure: f64 = bounds.iter().map(|(lo, hi)| hi - lo).product();
            let mut sum = 0.0;
            for _ in 0..n_offsets {
                x.iter_mut().for_each(|v| *v = 0.0);
                for (b, (lo, hi)) in basis.iter().zip(&bounds) {
                    let c = lo + (hi - lo) * rng.uniform();
                    for k in 0..d {
                        x[k] += c * b[k];
                    }
                }
                let chord = body.chord_unchecked(&x, &u);
                sum += libm::pow(chord, power as f64);
            }
            acc.push(measure * sum / n_offsets as f64);
        }
        Ok(acc)
    });
    let acc = reduce(parts)?;
    let vol = body.volume();
    let df = d as f64;
    let constant = 2.0 / ((df + 1.0) * (df + 2.0) * vol * vol) * 0.5 * sphere_area(d);
    Ok(Estimate {
        value: constant * acc.mean(),
        std_error: constant * acc.std_error(),
        n_samples: acc.count(),
        seed,
        method: Method::Chord,
    })
}

/// Shapes with a closed-form mean distance.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogShape {
    Disc { r: f64 },
    EquilateralTriangle { a: f64 },
    /// Side lengths with `0 < a ≤ b`.
    Rectangle { a: f64, b: f64 },
    RegularHexagon { a: f64 },
    Ball { d: usize, r: f64 },
    /// Axis-aligned ellipsoid by semi-axes.
    Ellipsoid { semi_axes: Vec<f64> },
    /// `[0, s]³`; `s = 1` gives the Robbins constant.
    Cube3 { side: f64 },
}

/// Closed-form `Δ` for a catalog shape.
pub fn exact_mean_distance(shape: &CatalogShape) -> Result<f64> {
    let positive = |field: &'static str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(field, "must be positive"))
        }
    };
    match shape {
        CatalogShape::Disc { r } => {
            positive("r", *r)?;
            Ok(128.0 / (45.0 * PI) * r)
        }
        CatalogShape::EquilateralTriangle { a } => {
            positive("a", *a)?;
            Ok(a * (0.2 + 0.15 * libm::log(3.0)))
        }
        CatalogShape::Rectangle { a, b } => {
            positive("a", *a)?;
            positive("b", *b)?;
            if a > b {
                return Err(Error::invalid("a", "rectangle sides must satisfy a <= b"));
            }
            Ok(rectangle(*a, *b))
        }
        CatalogShape::RegularHexagon { a } => {
            positive("a", *a)?;
            let s3 = libm::sqrt(3.0);
            let logs = 28.0 * libm::log(2.0 * s3 + 3.0) + 29.0 * libm::log(2.0 * s3 - 3.0);
            Ok(a * (7.0 * s3 / 30.0 - 7.0 / 90.0 + logs / 60.0))
        }
        CatalogShape::Ball { d, r } => {
            positive("r", *r)?;
            if *d == 0 {
                return Err(Error::invalid("d", "dimension must be at least 1"));
            }
            Ok(ball(*d) * r)
        }
        CatalogShape::Ellipsoid { semi_axes } => {
            if semi_axes.is_empty() {
                return Err(Error::invalid("semi_axes", "need at least one semi-axis"));
            }
            for a in semi_axes {
                positive("semi_axes", *a)?;
            }
            Ok(ellipsoid(semi_axes))
        }
        CatalogShape::Cube3 { side } => {
            positive("side", *side)?;
            Ok(robbins() * side)
        }
    }
}

/// `Δ(B^d)` for the unit ball: `2^{2d+2} d Γ(d/2+1)² / ((2d+1)!! (d+1) π)`.
fn ball(d: usize) -> f64 {
    let df = d as f64;
    // (2d+1)!! = Γ(2d+2) / (2^d Γ(d+1)), all in logs.
    let log_dfact = libm::lgamma(2.0 * df + 2.0) - df * libm::log(2.0) - libm::lgamma(df + 1.0);
    let log_num = (2.0 * df + 2.0) * libm::log(2.0) + libm::log(df) + 2.0 * libm::lgamma(df / 2.0 + 1.0);
    libm::exp(log_num - log_dfact) / ((df + 1.0) * PI)
}

fn rectangle(a: f64, b: f64) -> f64 {
    let diag = libm::hypot(a, b);
    let (a2, b2) = (a * a, b * b);
    (a * a2 / b2 + b * b2 / a2 + diag * (3.0 - a2 / b2 - b2 / a2)
        + 2.5 * (b2 / a * libm::log((a + diag) / b) + a2 / b * libm::log((b + diag) / a)))
        / 15.0
}

fn robbins() -> f64 {
    let (s2, s3) = (libm::sqrt(2.0), libm::sqrt(3.0));
    (4.0 + 17.0 * s2 - 6.0 * s3 + 21.0 * libm::log(1.0 + s2) + 42.0 * libm::log(2.0 + s3) - 7.0 * PI) / 105.0
}

/// Ellipsoid formula: `c_d ∫_{S^{d-1}} √(Σ aᵢ² uᵢ²) μ(du)` with `μ` the
/// unnormalized full-sphere measure. With all `aᵢ = 1` the integral is
/// `|S^{d-1}|` and the value reduces to the ball formula.
fn ellipsoid(semi_axes: &[f64]) -> f64 {
    let d = semi_axes.len();
    let df = d as f64;
    let log_c = (df + 1.0) * libm::log(2.0) + 3.0 * libm::lgamma(df / 2.0 + 1.0)
        - (df + 1.0) / 2.0 * libm::log(PI)
        - libm::lgamma(df + 1.5);
    let c = libm::exp(log_c) / (df + 1.0);
    // Product rule size n^{d-1}; keep it near a million nodes.
    let n = match d {
        1..=3 => 96,
        4 => 64,
        5 => 24,
        6 => 12,
        _ => 8,
    };
    let integral = sphere_integral(d, n, |u| {
        libm::sqrt(semi_axes.iter().zip(u).map(|(a, v)| a * a * v * v).sum())
    });
    c * integral
}

/// Catalog entry matching a body, when one exists.
pub fn catalog_shape(body: &ConvexBody) -> Option<CatalogShape> {
    match body.kind() {
        BodyKind::Ball { radius, .. } => Some(if body.dim() == 2 {
            CatalogShape::Disc { r: *radius }
        } else {
            CatalogShape::Ball { d: body.dim(), r: *radius }
        }),
        BodyKind::Ellipsoid { semi_axes, .. } => Some(CatalogShape::Ellipsoid { semi_axes: semi_axes.clone() }),
        BodyKind::Box { lower, upper } => {
            let sides: Vec<f64> = lower.iter().zip(upper).map(|(l, h)| h - l).collect();
            match sides.len() {
                1 => Some(CatalogShape::Ball { d: 1, r: sides[0] / 2.0 }),
                2 => Some(CatalogShape::Rectangle { a: sides[0].min(sides[1]), b: sides[0].max(sides[1]) }),
                3 if sides.iter().all(|s| libm::fabs(s - sides[0]) <= 1e-12 * sides[0]) => {
                    Some(CatalogShape::Cube3 { side: sides[0] })
                }
                _ => None,
            }
        }
        BodyKind::RegularPolygon { n_sides: 3, circumradius } => {
            Some(CatalogShape::EquilateralTriangle { a: circumradius * libm::sqrt(3.0) })
        }
        BodyKind::RegularPolygon { n_sides: 6, circumradius } => {
            Some(CatalogShape::RegularHexagon { a: *circumradius })
        }
        _ => None,
    }
}

/// Monte Carlo estimate of `p(4, K) = 4 E[A(conv(X₁, X₂, X₃))] / A(K)` for a
/// planar body.
pub fn sylvester_p4<E: Executor>(
    body: &ConvexBody,
    n: u64,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    if body.dim() != 2 {
        return Err(Error::invalid("body", "Sylvester's p(4, K) is defined for planar bodies only"));
    }
    if n < 2 {
        return Err(Error::invalid("samples", "need at least 2 triangles"));
    }
    let streams = streams.max(1);
    let scale = 4.0 / body.volume();
    let parts = exec.map_streams(streams, |i| -> Result<Welford> {
        let sampler = PointSampler::new(body);
        let mut rng = RngStream::new(seed, i as u64);
        let mut p = [[0.0; 2]; 3];
        let mut acc = Welford::new();
        for _ in 0..split_budget(n, streams, i) {
            for q in p.iter_mut() {
                sampler.sample_into(&mut rng, q)?;
            }
            acc.push(scale * triangle_area(&p[0], &p[1], &p[2]));
        }
        Ok(acc)
    });
    let acc = reduce(parts)?;
    Ok(Estimate::from_welford(&acc, seed, Method::McPairs))
}

/// Shoelace area of a triangle.
pub fn triangle_area(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> f64 {
    0.5 * libm::fabs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    #[test]
    fn catalog_values() {
        let disc = exact_mean_distance(&CatalogShape::Disc { r: 1.0 }).unwrap();
        assert!((disc - 0.905414787368).abs() < 1e-12);
        let ball2 = exact_mean_distance(&CatalogShape::Ball { d: 2, r: 1.0 }).unwrap();
        assert!((ball2 - 128.0 / (45.0 * PI)).abs() < 1e-13);
        let ball3 = exact_mean_distance(&CatalogShape::Ball { d: 3, r: 1.0 }).unwrap();
        assert!((ball3 - 36.0 / 35.0).abs() < 1e-13);
        // Unit interval as the d = 1 ball of radius 1/2.
        let seg = exact_mean_distance(&CatalogShape::Ball { d: 1, r: 0.5 }).unwrap();
        assert!((seg - 1.0 / 3.0).abs() < 1e-14);
        let tri = exact_mean_distance(&CatalogShape::EquilateralTriangle { a: 1.0 }).unwrap();
        assert!((tri - 0.364791843300).abs() < 1e-11);
    }

    #[test]
    fn rectangle_requires_ordered_sides() {
        assert!(exact_mean_distance(&CatalogShape::Rectangle { a: 2.0, b: 1.0 }).is_err());
    }

    #[test]
    fn ellipsoid_with_equal_axes_is_the_ball() {
        for d in 1..=4 {
            let e = exact_mean_distance(&CatalogShape::Ellipsoid { semi_axes: vec![1.0; d] }).unwrap();
            let b = exact_mean_distance(&CatalogShape::Ball { d, r: 1.0 }).unwrap();
            assert!((e - b).abs() < 1e-9, "d={d}: {e} vs {b}");
        }
    }

    #[test]
    fn ellipsoid_is_one_homogeneous() {
        let e1 = exact_mean_distance(&CatalogShape::Ellipsoid { semi_axes: vec![1.0, 2.0, 0.5] }).unwrap();
        let e2 = exact_mean_distance(&CatalogShape::Ellipsoid { semi_axes: vec![3.0, 6.0, 1.5] }).unwrap();
        assert!((e2 - 3.0 * e1).abs() < 1e-10);
    }

    #[test]
    fn sylvester_rejects_non_planar() {
        let ball = ConvexBody::unit_ball(3).unwrap();
        assert!(sylvester_p4(&ball, 100, 0, 1, &Sequential).is_err());
    }

    #[test]
    fn mc_rejects_tiny_budget() {
        let ball = ConvexBody::unit_ball(2).unwrap();
        assert!(mc_mean_distance(&ball, 1, 0, 1, &Sequential).is_err());
    }

    #[test]
    fn segment_chord_estimate_is_exact() {
        // In d = 1 the hemisphere is one point and every chord is the segment.
        let seg = ConvexBody::cuboid(vec![-1.0], vec![1.0]).unwrap();
        let est = chord_mean_distance(&seg, 4, 3, 0, 2, &Sequential).unwrap();
        assert!((est.value - 2.0 / 3.0).abs() < 1e-14);
        assert!(est.std_error < 1e-14);
    }

    #[test]
    fn stream_count_changes_partition_not_law() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let a = mc_mean_distance(&sq, 200_000, 3, 1, &Sequential).unwrap();
        let b = mc_mean_distance(&sq, 200_000, 3, 4, &Sequential).unwrap();
        assert_ne!(a.value, b.value);
        let band = 4.0 * (a.std_error + b.std_error);
        assert!((a.value - b.value).abs() < band);
        let again = mc_mean_distance(&sq, 200_000, 3, 4, &Sequential).unwrap();
        assert_eq!(b, again);
    }
}
