//! Symmetric decreasing rearrangement of a profile.

use alloc::vec::Vec;

use super::Profile;
use crate::error::Result;

/// `|{t : f(t) ≥ τ}|` for piecewise-linear `f`.
fn superlevel_measure(p: &Profile, tau: f64) -> f64 {
    p.cells()
        .map(|(a, b, fa, fb)| {
            let len = b - a;
            match (fa >= tau, fb >= tau) {
                (true, true) => len,
                (false, false) => 0.0,
                (true, false) => len * (fa - tau) / (fa - fb),
                (false, true) => len * (fb - tau) / (fb - fa),
            }
        })
        .sum()
}

/// The even profile, nonincreasing on `[0, 1]`, equimeasurable with `p`.
///
/// Between consecutive knot values of `f` every superlevel measure is affine
/// in the level, so the rearranged root is again piecewise linear with knots
/// at `±|{f ≥ τ}|/2` for the distinct knot values `τ`. Since `x ↦ x^{d-1}` is
/// increasing, rearranging `f` rearranges `h`.
pub fn rearrange(p: &Profile) -> Result<Profile> {
    let mut levels: Vec<f64> = p.f_values().to_vec();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();

    // (half-width, value) with half-width increasing from 0 to 1.
    let mut half: Vec<(f64, f64)> = Vec::with_capacity(levels.len() + 1);
    let top = levels[0];
    let plateau = 0.5 * superlevel_measure(p, top);
    if plateau > 0.0 {
        half.push((0.0, top));
    }
    for &tau in &levels {
        let s = (0.5 * superlevel_measure(p, tau)).min(1.0);
        match half.last() {
            Some(&(prev, _)) if s <= prev => continue,
            _ => half.push((s, tau)),
        }
    }
    let last = half.len() - 1;
    half[last].0 = 1.0;

    let mut knots = Vec::with_capacity(2 * half.len());
    let mut f = Vec::with_capacity(2 * half.len());
    for &(s, v) in half.iter().rev() {
        knots.push(-s);
        f.push(v);
    }
    for &(s, v) in half.iter() {
        if s > 0.0 {
            knots.push(s);
            f.push(v);
        }
    }
    let mut out = Profile::new(p.d(), knots, f)?;
    out.normalized = p.is_normalized();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{functional_i, AffineProfileParams};
    use crate::sampling::RngStream;

    #[test]
    fn planar_ramp_becomes_tent() {
        let ramp = AffineProfileParams::new(2, 1.0, 1.0).unwrap().profile().unwrap();
        let r = rearrange(&ramp).unwrap();
        let tent = Profile::h0(2).unwrap();
        assert!(r.l1_distance(&tent) < 1e-14);
        assert!((functional_i(&r).unwrap() - 7.0 / 30.0).abs() < 1e-14);
    }

    #[test]
    fn rearrangement_is_even_equimeasurable_and_idempotent() {
        let mut rng = RngStream::new(3, 0);
        for d in 2..=5 {
            for _ in 0..20 {
                let p = Profile::random(d, 9, false, &mut rng).unwrap();
                let r = rearrange(&p).unwrap();
                assert!(r.is_even());
                assert!((r.mass() - 1.0).abs() < 1e-12);
                assert!(r.validate().all_passed(), "{:?}", r.validate());
                for k in 0..30 {
                    let tau = p.f_values().iter().copied().fold(0.0, f64::max) * k as f64 / 30.0;
                    assert!((superlevel_measure(&p, tau) - superlevel_measure(&r, tau)).abs() < 1e-12);
                }
                let rr = rearrange(&r).unwrap();
                assert!(rr.l1_distance(&r) < 1e-12);
                // The rearrangement never increases I.
                assert!(functional_i(&r).unwrap() <= functional_i(&p).unwrap() + 1e-14);
            }
        }
    }

    #[test]
    fn uniform_is_fixed() {
        let u = Profile::uniform(3).unwrap();
        let r = rearrange(&u).unwrap();
        assert!(r.l1_distance(&u) < 1e-15);
    }
}
