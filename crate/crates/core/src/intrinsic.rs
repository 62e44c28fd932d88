//! Mean width, the first intrinsic volume and the ratio `Δ/V₁`.
//!
//! The mean width here is the average of `|P_u K|` under the uniform
//! probability measure on `S^{d-1}`. With that normalization
//! `V₁ = √π Γ((d+1)/2)/Γ(d/2) · W` gives `V₁(segment) = length` and
//! `V₁ = perimeter/2` in the plane.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::exec::{split_budget, Executor};
use crate::meandist::{catalog_shape, chord_mean_distance, exact_mean_distance, mc_mean_distance};
use crate::sampling::{direction_into, RngStream};
use crate::special::v1_factor;
use crate::stats::{Estimate, Method, Welford};

/// Rule for averaging over directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereQuadrature {
    /// `n_dirs` uniform random directions.
    Mc { n_dirs: u64, seed: u64 },
    /// Midpoint rule on `[0, π)` in the plane, one node per line.
    Grid2d { n_angles: u64 },
}

impl SphereQuadrature {
    fn validate(&self, d: usize) -> Result<()> {
        match *self {
            SphereQuadrature::Mc { n_dirs, .. } if n_dirs < 8 => {
                Err(Error::invalid("dirs", "need at least 8 directions"))
            }
            SphereQuadrature::Grid2d { n_angles } if n_angles < 8 => {
                Err(Error::invalid("dirs", "need at least 8 angles"))
            }
            SphereQuadrature::Grid2d { .. } if d != 2 => {
                Err(Error::invalid("quadrature", "the angular grid is only defined for d = 2"))
            }
            _ => Ok(()),
        }
    }
}

/// Mean width with its quadrature standard error (zero for the grid).
pub fn mean_width_estimate<E: Executor>(
    body: &ConvexBody,
    q: SphereQuadrature,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    q.validate(body.dim())?;
    match q {
        SphereQuadrature::Grid2d { n_angles } => {
            let sum: f64 = (0..n_angles)
                .map(|j| {
                    let t = PI * (j as f64 + 0.5) / n_angles as f64;
                    body.width_unchecked(&[libm::cos(t), libm::sin(t)])
                })
                .sum();
            Ok(Estimate {
                value: sum / n_angles as f64,
                std_error: 0.0,
                n_samples: n_angles,
                seed: 0,
                method: Method::Exact,
            })
        }
        SphereQuadrature::Mc { n_dirs, seed } => {
            let streams = streams.max(1);
            let d = body.dim();
            let parts = exec.map_streams(streams, |i| {
                let mut rng = RngStream::new(seed, i as u64);
                let mut u = vec![0.0; d];
                let mut acc = Welford::new();
                for _ in 0..split_budget(n_dirs, streams, i) {
                    direction_into(&mut rng, false, &mut u);
                    acc.push(body.width_unchecked(&u));
                }
                acc
            });
            let mut acc = Welford::new();
            for p in &parts {
                acc.merge(p);
            }
            Ok(Estimate {
                value: acc.mean(),
                std_error: acc.std_error(),
                n_samples: acc.count(),
                seed,
                method: Method::McPairs,
            })
        }
    }
}

/// Average projection length over uniform directions.
pub fn mean_width<E: Executor>(body: &ConvexBody, q: SphereQuadrature, streams: usize, exec: &E) -> Result<f64> {
    Ok(mean_width_estimate(body, q, streams, exec)?.value)
}

/// First intrinsic volume with its quadrature standard error.
pub fn v1_estimate<E: Executor>(
    body: &ConvexBody,
    q: SphereQuadrature,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    let w = mean_width_estimate(body, q, streams, exec)?;
    let c = v1_factor(body.dim());
    Ok(Estimate { value: c * w.value, std_error: c * w.std_error, ..w })
}

pub fn v1<E: Executor>(body: &ConvexBody, q: SphereQuadrature, streams: usize, exec: &E) -> Result<f64> {
    Ok(v1_estimate(body, q, streams, exec)?.value)
}

/// How `Δ` is obtained inside [`ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMethod {
    Mc { samples: u64 },
    Chord { n_dirs: u64, n_offsets: u64 },
    /// Closed form; fails for bodies without a catalog entry.
    Exact,
}

/// `Δ` by the chosen method.
pub fn delta_estimate<E: Executor>(
    body: &ConvexBody,
    method: DeltaMethod,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<Estimate> {
    match method {
        DeltaMethod::Mc { samples } => mc_mean_distance(body, samples, seed, streams, exec),
        DeltaMethod::Chord { n_dirs, n_offsets } => {
            chord_mean_distance(body, n_dirs, n_offsets, seed, streams, exec)
        }
        DeltaMethod::Exact => {
            let shape = catalog_shape(body)
                .ok_or_else(|| Error::invalid("method", "no closed form is known for this body"))?;
            Ok(Estimate::exact(exact_mean_distance(&shape)?))
        }
    }
}

/// Result of [`ratio`]: the quotient and both ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub value: f64,
    pub std_error: f64,
    pub delta: Estimate,
    pub v1: Estimate,
}

/// `Δ(K) / V₁(K)` with first-order error propagation from both estimates.
pub fn ratio<E: Executor>(
    body: &ConvexBody,
    delta_method: DeltaMethod,
    v1_quadrature: SphereQuadrature,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<RatioEstimate> {
    let delta = delta_estimate(body, delta_method, seed, streams, exec)?;
    let v1 = v1_estimate(body, v1_quadrature, streams, exec)?;
    Ok(combine(delta, v1))
}

pub(crate) fn combine(delta: Estimate, v1: Estimate) -> RatioEstimate {
    let value = delta.value / v1.value;
    let rel = libm::hypot(delta.std_error / delta.value, v1.std_error / v1.value);
    RatioEstimate { value, std_error: libm::fabs(value) * rel, delta, v1 }
}

/// Directions used by the planar grid, exposed for callers that need the
/// same nodes.
pub fn grid2d_directions(n_angles: u64) -> Vec<[f64; 2]> {
    (0..n_angles)
        .map(|j| {
            let t = PI * (j as f64 + 0.5) / n_angles as f64;
            [libm::cos(t), libm::sin(t)]
        })
        .collect()
}
