//! Numerical search for the extremes of `I` over piecewise-linear profiles.

use alloc::vec::Vec;

use super::functional::functional_i_raw;
use super::{Profile, EVEN_TOL};
use crate::error::{Error, Result};
use crate::sampling::RngStream;

/// Least-squares-style projection of knot values onto nonnegative concave
/// functions: slopes are made nonincreasing by weighted pool-adjacent-
/// violators, the integral of `f` is restored, and the result is lifted if it
/// dips below zero.
pub fn project_concave(knots: &[f64], f: &[f64]) -> Vec<f64> {
    let n = knots.len();
    let widths: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
    // Blocks of (weighted slope sum, weight, cell count).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let w = widths[i];
        blocks.push(((f[i + 1] - f[i]), w, 1));
        while blocks.len() > 1 {
            let (s1, w1, _) = blocks[blocks.len() - 1];
            let (s0, w0, _) = blocks[blocks.len() - 2];
            if s0 / w0 >= s1 / w1 {
                break;
            }
            let last = blocks.pop().unwrap();
            let prev = blocks.last_mut().unwrap();
            prev.0 += last.0;
            prev.1 += last.1;
            prev.2 += last.2;
        }
    }
    let mut g = Vec::with_capacity(n);
    g.push(0.0);
    let mut i = 0;
    for (s, w, count) in blocks {
        let slope = s / w;
        for _ in 0..count {
            let next = g[i] + slope * widths[i];
            g.push(next);
            i += 1;
        }
    }
    let integral = |v: &[f64]| -> f64 { (0..n - 1).map(|i| 0.5 * widths[i] * (v[i] + v[i + 1])).sum() };
    let shift = (integral(f) - integral(&g)) / (knots[n - 1] - knots[0]);
    g.iter_mut().for_each(|v| *v += shift);
    let lo = g.iter().copied().fold(f64::INFINITY, f64::min);
    if lo < 0.0 {
        g.iter_mut().for_each(|v| *v -= lo);
    }
    g
}

/// Outcome of a profile search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub profile: Profile,
    pub value: f64,
    pub accepted_moves: u64,
    pub iterations: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Max,
    Min,
}

/// Searches for the maximizer of `I` among profiles on `m` uniform knots,
/// starting from a tent.
pub fn maximize_i(d: usize, m: usize, iters: u64, seed: u64) -> Result<OptimizeResult> {
    let knots = check_knots(d, m)?;
    let f: Vec<f64> = knots.iter().map(|t| 1.0 - libm::fabs(*t) + 0.05).collect();
    let start = Profile::new(d, knots, f)?.normalize()?;
    search(start, iters, seed, Goal::Max)
}

/// Searches for the minimizer of `I` among even profiles on `m` uniform
/// knots, starting from the uniform density.
pub fn minimize_i(d: usize, m: usize, iters: u64, seed: u64) -> Result<OptimizeResult> {
    let knots = check_knots(d, m)?;
    let f = alloc::vec![1.0; m];
    let start = Profile::new(d, knots, f)?.normalize()?;
    search(start, iters, seed, Goal::Min)
}

/// [`maximize_i`] from a given start; even starts stay even.
pub fn maximize_i_from(start: &Profile, iters: u64, seed: u64) -> Result<OptimizeResult> {
    search(start.normalize()?, iters, seed, Goal::Max)
}

/// [`minimize_i`] from a given start; even starts stay even.
pub fn minimize_i_from(start: &Profile, iters: u64, seed: u64) -> Result<OptimizeResult> {
    search(start.normalize()?, iters, seed, Goal::Min)
}

fn check_knots(d: usize, m: usize) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::invalid("d", "profiles need d >= 2"));
    }
    if m < 3 {
        return Err(Error::invalid("knots", "need at least 3 knots"));
    }
    Ok(Profile::uniform_knots(m))
}

fn search(start: Profile, iters: u64, seed: u64, goal: Goal) -> Result<OptimizeResult> {
    let report = start.validate();
    if !report.all_passed() {
        return Err(Error::invalid("start", alloc::format!("start profile violates the profile constraints: {report:?}")));
    }
    let even = start.is_even();
    let d = start.d();
    let knots = start.knots().to_vec();
    let n = knots.len();
    let mut rng = RngStream::new(seed, 0);
    let mut best = start;
    let mut value = functional_i_raw(&best);
    let mut sigma = 0.1;
    let mut accepted = 0;
    let better = |new: f64, old: f64| match goal {
        Goal::Max => new > old + 1e-15,
        Goal::Min => new < old - 1e-15,
    };

    for _ in 0..iters {
        let mut f = best.f_values().to_vec();
        if rng.uniform() < 0.7 {
            let k = rng.index(n);
            let step = sigma * rng.normal();
            f[k] += step;
            if even {
                f[n - 1 - k] = f[k];
            }
        } else {
            for k in 0..n {
                f[k] += 0.3 * sigma * rng.normal();
            }
            if even {
                for k in 0..n / 2 {
                    f[n - 1 - k] = f[k];
                }
            }
        }
        let mut g = project_concave(&knots, &f);
        if even {
            for k in 0..n / 2 {
                let v = 0.5 * (g[k] + g[n - 1 - k]);
                g[k] = v;
                g[n - 1 - k] = v;
            }
        }
        let Ok(candidate) = Profile::new(d, knots.clone(), g).and_then(|p| p.normalize()) else {
            sigma = (sigma * 0.95).max(1e-9);
            continue;
        };
        if !candidate.validate().all_passed() || (even && !is_mirror(&candidate)) {
            sigma = (sigma * 0.95).max(1e-9);
            continue;
        }
        let v = functional_i_raw(&candidate);
        if better(v, value) {
            best = candidate;
            value = v;
            accepted += 1;
            sigma = (sigma * 1.5).min(1.0);
        } else {
            sigma = (sigma * 0.97).max(1e-9);
        }
    }
    Ok(OptimizeResult { profile: best, value, accepted_moves: accepted, iterations: iters })
}

fn is_mirror(p: &Profile) -> bool {
    let f = p.f_values();
    let n = f.len();
    (0..n / 2).all(|k| libm::fabs(f[k] - f[n - 1 - k]) <= EVEN_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{functional_i, AffineProfileParams};

    #[test]
    fn projection_keeps_concave_input() {
        let k = Profile::uniform_knots(5);
        let f = [0.0, 0.5, 0.8, 0.9, 0.6];
        let g = project_concave(&k, &f);
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_output_is_concave_and_nonnegative() {
        let k = Profile::uniform_knots(7);
        let f = [0.3, -0.2, 1.0, 0.1, 0.9, 0.0, 0.4];
        let g = project_concave(&k, &f);
        assert!(g.iter().all(|v| *v >= 0.0));
        assert!(super::super::concavity_defect(&k, &g) <= 1e-12);
    }

    #[test]
    fn minimum_from_tent_makes_no_moves() {
        let tent = Profile::h0(3).unwrap();
        let r = minimize_i_from(&tent, 500, 1).unwrap();
        assert_eq!(r.accepted_moves, 0);
        assert!((r.value - 5.0 / 28.0).abs() < 1e-14);
    }

    #[test]
    fn minimizer_approaches_the_tent() {
        for d in [2, 3] {
            let r = minimize_i(d, 9, 4000, 5).unwrap();
            let lower = (3 * d + 1) as f64 / (2.0 * (d + 1) as f64 * (2 * d + 1) as f64);
            assert!(r.value - lower < 1e-3, "d={d}: {}", r.value);
            assert!(r.value >= lower - 1e-12);
            assert!(r.profile.l1_distance(&Profile::h0(d).unwrap()) < 5e-2);
        }
    }

    #[test]
    fn maximizer_approaches_one_third() {
        for d in [2, 3] {
            let r = maximize_i(d, 9, 4000, 5).unwrap();
            assert!(1.0 / 3.0 - r.value < 1e-3, "d={d}: {}", r.value);
            assert!(r.value <= 1.0 / 3.0 + 1e-12);
            assert!((functional_i(&r.profile).unwrap() - r.value).abs() < 1e-15);
            // Maximizers are affine in f.
            let p = &r.profile;
            let (k, f) = (p.knots(), p.f_values());
            let n = f.len();
            let dev = (0..n)
                .map(|i| (f[i] - (f[0] + (k[i] + 1.0) / 2.0 * (f[n - 1] - f[0]))).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-2, "d={d}: affine defect {dev}");
            let fit = AffineProfileParams::new(d, 0.0, 1.0).unwrap();
            assert!(r.value <= crate::profiles::affine_i(&fit) + 1e-12);
        }
    }
}
