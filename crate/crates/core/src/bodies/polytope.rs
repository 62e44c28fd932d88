//! Vertex-described polytopes with a derived facet list.
//!
//! Facets are found by testing every hyperplane through `d` vertices for the
//! supporting property. That is `O(C(n, d) · n)` and meant for the small
//! vertex counts this crate works with (tens of points, `d ≤ 5`).

use alloc::vec::Vec;

use crate::linalg::{cross_normal, dot, norm, orthonormal_complement, sub};

/// `normal · x ≤ offset`, with `|normal| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Largest absolute coordinate spread, used to scale tolerances.
pub(crate) fn extent(points: &[Vec<f64>]) -> f64 {
    let d = points.first().map_or(0, Vec::len);
    (0..d)
        .map(|k| {
            let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[k]), hi.max(p[k]))
            });
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Supporting hyperplanes of `conv(points)` for a full-dimensional point set.
pub(crate) fn facets(points: &[Vec<f64>]) -> Vec<Halfspace> {
    let d = points.first().map_or(0, Vec::len);
    let scale = extent(points).max(f64::MIN_POSITIVE);
    let tol = 1e-10 * scale;
    let mut out: Vec<Halfspace> = Vec::new();

    if d == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        out.push(Halfspace { normal: alloc::vec![1.0], offset: hi });
        out.push(Halfspace { normal: alloc::vec![-1.0], offset: -lo });
        return out;
    }

    let n = points.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let base = &points[idx[0]];
        let edges: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let raw = cross_normal(&edges, d);
        let len = norm(&raw);
        // Reject nearly dependent d-subsets; their hyperplane is ill-defined.
        if len > 1e-12 * libm::pow(scale, (d - 1) as f64) {
            let mut normal: Vec<f64> = raw.iter().map(|v| v / len).collect();
            let mut offset = dot(&normal, base);
            let (mut above, mut below) = (false, false);
            for p in points {
                let s = dot(&normal, p) - offset;
                above |= s > tol;
                below |= s < -tol;
                if above && below {
                    break;
                }
            }
            if !(above && below) {
                if above {
                    normal.iter_mut().for_each(|v| *v = -*v);
                    offset = -offset;
                }
                let duplicate = out.iter().any(|h| {
                    libm::fabs(h.offset - offset) <= 1e-9 * scale
                        && h.normal.iter().zip(&normal).all(|(a, b)| libm::fabs(a - b) <= 1e-9)
                });
                if !duplicate {
                    out.push(Halfspace { normal, offset });
                }
            }
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Volume of `conv(points)` by coning every facet from the vertex centroid.
/// Facet volumes recurse one dimension down in facet-local coordinates.
pub(crate) fn volume(points: &[Vec<f64>], hull: &[Halfspace]) -> f64 {
    let d = points.first().map_or(0, Vec::len);
    if d == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        return hi - lo;
    }
    let centroid: Vec<f64> = (0..d)
        .map(|k| points.iter().map(|p| p[k]).sum::<f64>() / points.len() as f64)
        .collect();
    let tol = 1e-10 * extent(points).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for h in hull {
        let on: Vec<&Vec<f64>> = points
            .iter()
            .filter(|p| libm::fabs(h.slack(p)) <= tol)
            .collect();
        let basis = orthonormal_complement(&h.normal);
        let origin = on[0];
        let local: Vec<Vec<f64>> = on
            .iter()
            .map(|p| {
                let rel = sub(p, origin);
                basis.iter().map(|b| dot(b, &rel)).collect()
            })
            .collect();
        let sub_hull = facets(&local);
        let area = volume(&local, &sub_hull);
        total += h.slack(&centroid) * area / d as f64;
    }
    total
}
