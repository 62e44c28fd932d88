//! The two degenerating families that make both bounds on `Δ/V₁` sharp,
//! the bound constants, and a numerical check of the limits.
//!
//! `K_δ = conv(±e₁, δe₂, …, δe_d)` collapses onto a segment from a simplex
//! and drives `Δ/V₁` down to `(3d+1)/(2(d+1)(2d+1))`; the slab
//! `K'_δ = [−1, 1] × [0, δ]^{d−1}` collapses uniformly and drives it up to
//! `1/3`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::intrinsic::{combine, v1_estimate, RatioEstimate, SphereQuadrature};
use crate::meandist::mc_mean_distance;
use crate::stats::{kendall_tau, Estimate, KendallTau};

fn check(d: usize, delta: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("d", "the extremal families need d >= 2"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta", alloc::format!("need delta > 0, got {delta}")));
    }
    Ok(())
}

/// `conv(e₁, −e₁, δe₂, …, δe_d)`.
pub fn k_delta(d: usize, delta: f64) -> Result<ConvexBody> {
    check(d, delta)?;
    let mut vertices = Vec::with_capacity(d + 1);
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    vertices.push(e1.clone());
    e1[0] = -1.0;
    vertices.push(e1);
    for k in 1..d {
        let mut v = vec![0.0; d];
        v[k] = delta;
        vertices.push(v);
    }
    ConvexBody::simplex(vertices)
}

/// `[−1, 1] × [0, δ]^{d−1}`.
pub fn k_prime_delta(d: usize, delta: f64) -> Result<ConvexBody> {
    check(d, delta)?;
    let mut lower = vec![0.0; d];
    let mut upper = vec![delta; d];
    lower[0] = -1.0;
    upper[0] = 1.0;
    ConvexBody::cuboid(lower, upper)
}

/// Constants bounding `Δ/V₁` and `Δ/diam` in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub d: usize,
    /// Sharp lower bound on `Δ/V₁` (and on `Δ/diam`).
    pub lower: f64,
    /// Sharp upper bound on `Δ/V₁`.
    pub upper: f64,
    /// Upper bound on `Δ/diam` from `V₁ ≤ ` the `V₁` of a ball of the same
    /// diameter.
    pub diam_upper_new: f64,
    /// The earlier upper bound on `Δ/diam`.
    pub diam_upper_bp09: f64,
}

impl BoundConstants {
    /// Bounds on `Δ/perimeter` for planar bodies, where `V₁` is half the
    /// perimeter.
    pub fn perimeter_bounds(&self) -> Option<(f64, f64)> {
        (self.d == 2).then(|| (self.lower / 2.0, self.upper / 2.0))
    }
}

pub fn bound_constants(d: usize) -> Result<BoundConstants> {
    if d < 2 {
        return Err(Error::invalid("d", "bounds are stated for d >= 2"));
    }
    let df = d as f64;
    let lower = (3.0 * df + 1.0) / (2.0 * (df + 1.0) * (2.0 * df + 1.0));
    let diam_upper_new =
        libm::sqrt(PI) / 3.0 * libm::exp(libm::lgamma((df + 1.0) / 2.0) - libm::lgamma(df / 2.0));
    let log_bp09 = (df - 2.0) * core::f64::consts::LN_2 + 2.0 * libm::lgamma(df / 2.0) - libm::lgamma(df - 0.5);
    let diam_upper_bp09 = libm::sqrt(2.0 * df / (PI * (df + 1.0))) * libm::exp(log_bp09);
    Ok(BoundConstants { d, lower, upper: 1.0 / 3.0, diam_upper_new, diam_upper_bp09 })
}

/// Sampling budgets for [`verify_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitBudgets {
    /// Point pairs per `Δ` estimate.
    pub samples: u64,
    /// Directions per `V₁` estimate (angles of the planar grid when `d = 2`).
    pub dirs: u64,
}

impl Default for LimitBudgets {
    fn default() -> Self {
        Self { samples: 1_000_000, dirs: 10_000 }
    }
}

/// Estimates for both families at one `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub delta: f64,
    pub simplex: RatioEstimate,
    pub slab: RatioEstimate,
}

/// One checked quantity in a limit report.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub quantity: &'static str,
    pub delta: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub d: usize,
    pub bounds: BoundConstants,
    pub rows: Vec<LimitRow>,
    pub checks: Vec<LimitCheck>,
    /// Rank correlation of `δ` with the ratio of `K_δ` (expected positive).
    pub simplex_trend: KendallTau,
    /// Rank correlation of `δ` with the ratio of `K'_δ` (expected negative).
    pub slab_trend: KendallTau,
}

impl LimitReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Mixes the row index into the seed so each `δ` gets its own streams.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Estimates `Δ`, `V₁` and their ratio for `K_δ` and `K'_δ` along a
/// decreasing sequence of `δ` and checks them against the limits.
///
/// Both families have exact uniform samplers, so `Δ` is always estimated
/// from point pairs. `V₁` uses the midpoint grid in the plane and random
/// directions otherwise. The checks are:
///
/// * at the smallest `δ`, `|ratio(K_δ) − lower| ≤ 2δ + 3σ` and
///   `|ratio(K'_δ) − 1/3| ≤ 2δ + 3σ` (the envelope for `K'_δ` is a
///   heuristic; only the simplex family has a proven rate);
/// * at every `δ`, `Δ(K_δ) ≤ (3d+1)/((d+1)(2d+1)) + δ + 3σ` and
///   `Δ(K'_δ) ≥ 2/3 − 3σ`;
/// * at every `δ`, both ratios lie in `(lower − 3σ, 1/3 + 3σ)`;
/// * consecutive ratios never move against the expected trend by more than
///   `3σ` of their difference.
pub fn verify_limits<E: Executor>(
    d: usize,
    deltas: &[f64],
    budgets: LimitBudgets,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<LimitReport> {
    let bounds = bound_constants(d)?;
    if deltas.is_empty() {
        return Err(Error::invalid("deltas", "need at least one delta"));
    }
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("deltas", "deltas must be strictly decreasing"));
    }
    for &delta in deltas {
        check(d, delta)?;
    }

    let mut rows = Vec::with_capacity(deltas.len());
    for (i, &delta) in deltas.iter().enumerate() {
        let s = row_seed(seed, i);
        let q = if d == 2 {
            SphereQuadrature::Grid2d { n_angles: budgets.dirs }
        } else {
            SphereQuadrature::Mc { n_dirs: budgets.dirs, seed: s }
        };
        let estimate = |body: &ConvexBody, stream_seed: u64| -> Result<RatioEstimate> {
            let delta_est = mc_mean_distance(body, budgets.samples, stream_seed, streams, exec)?;
            let v1 = v1_estimate(body, q, streams, exec)?;
            Ok(combine(delta_est, v1))
        };
        let simplex = estimate(&k_delta(d, delta)?, s)?;
        let slab = estimate(&k_prime_delta(d, delta)?, s.wrapping_add(1))?;
        rows.push(LimitRow { delta, simplex, slab });
    }

    let df = d as f64;
    let delta_limit = (3.0 * df + 1.0) / ((df + 1.0) * (2.0 * df + 1.0));
    let mut checks = Vec::new();
    let last = rows[rows.len() - 1];
    let env = 2.0 * last.delta;
    checks.push(LimitCheck {
        quantity: "ratio_k_delta_limit",
        delta: last.delta,
        estimate: last.simplex.value,
        std_error: last.simplex.std_error,
        target: bounds.lower,
        pass: libm::fabs(last.simplex.value - bounds.lower) <= env + 3.0 * last.simplex.std_error,
    });
    checks.push(LimitCheck {
        quantity: "ratio_k_prime_delta_limit",
        delta: last.delta,
        estimate: last.slab.value,
        std_error: last.slab.std_error,
        target: bounds.upper,
        pass: libm::fabs(last.slab.value - bounds.upper) <= env + 3.0 * last.slab.std_error,
    });
    for row in &rows {
        let dk = row.simplex.delta;
        checks.push(LimitCheck {
            quantity: "delta_k_delta_upper",
            delta: row.delta,
            estimate: dk.value,
            std_error: dk.std_error,
            target: delta_limit + row.delta,
            pass: dk.value <= delta_limit + row.delta + 3.0 * dk.std_error,
        });
        let dp = row.slab.delta;
        checks.push(LimitCheck {
            quantity: "delta_k_prime_delta_lower",
            delta: row.delta,
            estimate: dp.value,
            std_error: dp.std_error,
            target: 2.0 / 3.0,
            pass: dp.value >= 2.0 / 3.0 - 3.0 * dp.std_error,
        });
        for (quantity, r) in [("ratio_k_delta_inside", row.simplex), ("ratio_k_prime_delta_inside", row.slab)] {
            checks.push(LimitCheck {
                quantity,
                delta: row.delta,
                estimate: r.value,
                std_error: r.std_error,
                target: if quantity == "ratio_k_delta_inside" { bounds.lower } else { bounds.upper },
                pass: r.value > bounds.lower - 3.0 * r.std_error && r.value < bounds.upper + 3.0 * r.std_error,
            });
        }
    }
    for w in rows.windows(2) {
        // δ decreases from w[0] to w[1]: the simplex ratio should fall, the
        // slab ratio should rise.
        let (a, b) = (w[0].simplex, w[1].simplex);
        let sigma = libm::hypot(a.std_error, b.std_error);
        checks.push(LimitCheck {
            quantity: "ratio_k_delta_monotone",
            delta: w[1].delta,
            estimate: b.value - a.value,
            std_error: sigma,
            target: 0.0,
            pass: b.value - a.value <= 3.0 * sigma,
        });
        let (a, b) = (w[0].slab, w[1].slab);
        let sigma = libm::hypot(a.std_error, b.std_error);
        checks.push(LimitCheck {
            quantity: "ratio_k_prime_delta_monotone",
            delta: w[1].delta,
            estimate: b.value - a.value,
            std_error: sigma,
            target: 0.0,
            pass: b.value - a.value >= -3.0 * sigma,
        });
    }

    let ds: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let simplex_trend = kendall_tau(&ds, &rows.iter().map(|r| r.simplex.value).collect::<Vec<_>>());
    let slab_trend = kendall_tau(&ds, &rows.iter().map(|r| r.slab.value).collect::<Vec<_>>());
    Ok(LimitReport { d, bounds, rows, checks, simplex_trend, slab_trend })
}

/// `Δ` estimates for both families at one `δ`, for callers that want the
/// raw numbers.
pub fn family_deltas<E: Executor>(
    d: usize,
    delta: f64,
    samples: u64,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<(Estimate, Estimate)> {
    let a = mc_mean_distance(&k_delta(d, delta)?, samples, seed, streams, exec)?;
    let b = mc_mean_distance(&k_prime_delta(d, delta)?, samples, seed.wrapping_add(1), streams, exec)?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    #[test]
    fn family_geometry() {
        let t = k_delta(2, 0.5).unwrap();
        assert_eq!(t.vertices().unwrap(), vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 0.5]]);
        for &delta in &[1.0, 0.3, 0.01] {
            assert!((k_delta(2, delta).unwrap().volume() - delta).abs() < 1e-14);
            assert!((k_delta(3, delta).unwrap().volume() - delta * delta / 3.0).abs() < 1e-14);
            for d in 2..=4 {
                let b = k_prime_delta(d, delta).unwrap();
                assert!((b.volume() - 2.0 * libm::pow(delta, (d - 1) as f64)).abs() < 1e-14);
                let mut e1 = vec![0.0; d];
                e1[0] = 1.0;
                assert!((b.width(&e1).unwrap() - 2.0).abs() < 1e-15);
            }
        }
        assert!(k_delta(2, 0.0).is_err());
        assert!(k_prime_delta(3, -1.0).is_err());
        assert!(k_delta(1, 0.5).is_err());
    }

    #[test]
    fn constants_in_the_plane() {
        let c = bound_constants(2).unwrap();
        assert!((c.lower - 7.0 / 30.0).abs() < 1e-15);
        assert!((c.diam_upper_new - PI / 6.0).abs() < 1e-14);
        assert!((c.diam_upper_bp09 - 0.735105193895723).abs() < 1e-12);
        let (lo, hi) = c.perimeter_bounds().unwrap();
        assert!((lo - 7.0 / 60.0).abs() < 1e-15 && (hi - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_decreases() {
        let mut prev = 1.0;
        for d in 2..=50 {
            let c = bound_constants(d).unwrap();
            assert!(0.0 < c.lower && c.lower < c.upper && c.lower < prev);
            prev = c.lower;
        }
    }

    #[test]
    fn diameter_bounds_cross_between_four_and_five() {
        for d in 2..=4 {
            let c = bound_constants(d).unwrap();
            assert!(c.diam_upper_new < c.diam_upper_bp09, "d={d}");
        }
        for d in 5..=12 {
            let c = bound_constants(d).unwrap();
            assert!(c.diam_upper_bp09 < c.diam_upper_new, "d={d}");
        }
    }

    #[test]
    fn diameter_bound_asymptotics() {
        let c = bound_constants(400).unwrap();
        assert!((c.diam_upper_bp09 / (1.0 - 5.0 / 3200.0) - 1.0).abs() < 1e-2);
        assert!((c.diam_upper_new / libm::sqrt(PI * 400.0 / 18.0) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn small_limit_run() {
        let r = verify_limits(
            2,
            &[0.1, 0.01],
            LimitBudgets { samples: 20_000, dirs: 720 },
            3,
            2,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.checks.iter().any(|c| c.quantity == "ratio_k_delta_limit"));
        // V₁ of the slab is the sum of its edge lengths along the axes.
        assert!((r.rows[0].slab.v1.value - 2.1).abs() < 1e-5);
        assert!(verify_limits(2, &[0.01, 0.1], LimitBudgets::default(), 0, 1, &Sequential).is_err());
    }
}
