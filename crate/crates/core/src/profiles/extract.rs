//! Cross-section profiles of convex bodies.

use alloc::vec::Vec;

use super::optimize::project_concave;
use super::Profile;
use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::orthonormal_complement;
use crate::sampling::RngStream;

/// Monte Carlo settings for section volumes when `d ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Points per section.
    pub inner_samples: u64,
    pub seed: u64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self { inner_samples: 20_000, seed: 0 }
    }
}

/// The normalized section profile of `body` along unit direction `u`,
/// sampled at `n_knots` equally spaced stations.
///
/// Planar sections are exact chord lengths. In higher dimension section
/// volumes are estimated by hit-or-miss sampling in the shadow box of the
/// section, one random stream per station, and the noisy roots are projected
/// back onto concave functions.
pub fn profile_from_body(body: &ConvexBody, u: &[f64], n_knots: usize, opts: &ExtractOptions) -> Result<Profile> {
    let d = body.dim();
    if d < 2 {
        return Err(Error::invalid("body", "section profiles need d >= 2"));
    }
    if n_knots < 3 {
        return Err(Error::invalid("knots", "need at least 3 knots"));
    }
    let hi = body.support(u)?;
    let neg: Vec<f64> = u.iter().map(|v| -v).collect();
    let lo = -body.support_unchecked(&neg);
    let knots = Profile::uniform_knots(n_knots);
    let station = |t: f64| lo + 0.5 * (t + 1.0) * (hi - lo);

    let basis = orthonormal_complement(u);
    let f: Vec<f64> = if d == 2 {
        let v = &basis[0];
        knots
            .iter()
            .map(|&t| {
                let s = station(t);
                let x = [s * u[0], s * u[1]];
                body.chord_unchecked(&x, v)
            })
            .collect()
    } else {
        if opts.inner_samples == 0 {
            return Err(Error::invalid("inner_samples", "must be positive"));
        }
        let ranges: Vec<(f64, f64)> = basis
            .iter()
            .map(|b| {
                let nb: Vec<f64> = b.iter().map(|v| -v).collect();
                (-body.support_unchecked(&nb), body.support_unchecked(b))
            })
            .collect();
        let box_measure: f64 = ranges.iter().map(|(a, b)| b - a).product();
        let root = 1.0 / (d as f64 - 1.0);
        let raw: Vec<f64> = knots
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let s = station(t);
                let mut rng = RngStream::new(opts.seed, i as u64);
                let mut y = alloc::vec![0.0; d];
                let mut hits = 0u64;
                for _ in 0..opts.inner_samples {
                    for (yk, uk) in y.iter_mut().zip(u) {
                        *yk = s * uk;
                    }
                    for (b, (a0, a1)) in basis.iter().zip(&ranges) {
                        let c = a0 + (a1 - a0) * rng.uniform();
                        for (yk, bk) in y.iter_mut().zip(b) {
                            *yk += c * bk;
                        }
                    }
                    if body.contains_unchecked(&y) {
                        hits += 1;
                    }
                }
                libm::pow(box_measure * hits as f64 / opts.inner_samples as f64, root)
            })
            .collect();
        project_concave(&knots, &raw)
    };
    Profile::new(d, knots, f)?.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::functional_i;
    use core::f64::consts::PI;

    #[test]
    fn square_profile_is_uniform() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let p = profile_from_body(&sq, &[1.0, 0.0], 33, &ExtractOptions::default()).unwrap();
        assert!(p.l1_distance(&Profile::uniform(2).unwrap()) < 1e-12);
    }

    #[test]
    fn disc_profile_gives_disc_ratio() {
        let disc = ConvexBody::unit_ball(2).unwrap();
        let p = profile_from_body(&disc, &[0.6, 0.8], 401, &ExtractOptions::default()).unwrap();
        assert!(p.validate().all_passed());
        let i = functional_i(&p).unwrap();
        assert!((i - 128.0 / (45.0 * PI * PI)).abs() < 2e-3, "{i}");
    }

    #[test]
    fn triangle_profile_along_its_axis_is_a_ramp() {
        let tri = ConvexBody::simplex(alloc::vec![
            alloc::vec![0.0, 0.0],
            alloc::vec![1.0, 0.0],
            alloc::vec![0.0, 1.0]
        ])
        .unwrap();
        let p = profile_from_body(&tri, &[1.0, 0.0], 9, &ExtractOptions::default()).unwrap();
        assert!((functional_i(&p).unwrap() - 4.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn cube_profile_is_close_to_uniform() {
        let c = ConvexBody::unit_cube(3).unwrap();
        let opts = ExtractOptions { inner_samples: 4000, seed: 9 };
        let p = profile_from_body(&c, &[0.0, 0.0, 1.0], 17, &opts).unwrap();
        assert!(p.validate().all_passed());
        assert!((functional_i(&p).unwrap() - 1.0 / 3.0).abs() < 1e-2);
    }
}
