//! The functional `I(h) = ½ ∬ |t₁ − t₂| h(t₁) h(t₂) dt₁ dt₂`.

use alloc::vec::Vec;

use super::{cell_mass, power_sum, powi, Profile};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

fn require_normalized(p: &Profile) -> Result<()> {
    if !p.is_normalized() {
        return Err(Error::invalid("profile", "I(h) is defined for normalized profiles; call normalize() first"));
    }
    Ok(())
}

/// `I(h)` for a normalized profile.
///
/// Off-diagonal cell pairs separate into products of per-cell moments, so
/// only the diagonal cells need a two-dimensional rule; there the triangle
/// `t₂ < t₁` is mapped to the unit square. Every integrand is polynomial and
/// the rules are exact for it.
pub fn functional_i(p: &Profile) -> Result<f64> {
    require_normalized(p)?;
    Ok(functional_i_raw(p))
}

pub(crate) fn functional_i_raw(p: &Profile) -> f64 {
    let d = p.d();
    let rule = GaussLegendre::new(d + 2);
    let nodes: Vec<(f64, f64)> = rule.on(0.0, 1.0).collect();
    let k = d - 1;

    let (mut p0, mut p1) = (0.0, 0.0);
    let mut off = 0.0;
    let mut diag = 0.0;
    for (a, b, fa, fb) in p.cells() {
        let len = b - a;
        let df = fb - fa;
        let (mut m0, mut m1) = (0.0, 0.0);
        for &(x, w) in &nodes {
            let h = powi(fa + x * df, k);
            m0 += w * h;
            m1 += w * h * (a + x * len);
        }
        m0 *= len;
        m1 *= len;
        off += m1 * p0 - m0 * p1;
        p0 += m0;
        p1 += m1;

        let mut s = 0.0;
        for &(x, wx) in &nodes {
            let h1 = powi(fa + x * df, k);
            let mut inner = 0.0;
            for &(y, wy) in &nodes {
                inner += wy * (1.0 - y) * powi(fa + x * y * df, k);
            }
            s += wx * x * x * h1 * inner;
        }
        diag += len * len * len * s;
    }
    off + diag
}

/// `I(h)` through the identity `I(h) = ½ − 2 ∫₀¹ H̃(t)² dt` with
/// `H̃(t) = ∫₀ᵗ h`, valid for even normalized profiles.
pub fn functional_i_via_h(p: &Profile) -> Result<f64> {
    require_normalized(p)?;
    if !p.is_even() {
        return Err(Error::invalid("profile", "the cumulative identity needs an even profile"));
    }
    let d = p.d();
    let rule = GaussLegendre::new(d + 1);
    let mut cum = 0.0;
    let mut sq = 0.0;
    for (a, b, fa, fb) in p.cells() {
        if b <= 0.0 {
            continue;
        }
        let (a, fa) = if a < 0.0 { (0.0, p.f_at(0.0)) } else { (a, fa) };
        let len = b - a;
        sq += rule.integrate(a, b, |t| {
            let ft = fa + (t - a) / len * (fb - fa);
            let h = cum + (t - a) * power_sum(d, ft, fa) / d as f64;
            h * h
        });
        cum += cell_mass(d, len, fa, fb);
    }
    Ok(0.5 - 2.0 * sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RngStream;

    #[test]
    fn uniform_gives_one_third() {
        for d in 2..=8 {
            let p = Profile::uniform(d).unwrap();
            assert!((functional_i(&p).unwrap() - 1.0 / 3.0).abs() < 1e-14);
            assert!((functional_i_via_h(&p).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn h0_closed_form() {
        for d in 2..=12 {
            let p = Profile::h0(d).unwrap();
            let want = (3 * d + 1) as f64 / (2.0 * (d + 1) as f64 * (2 * d + 1) as f64);
            assert!((functional_i(&p).unwrap() - want).abs() < 1e-13, "d={d}");
            assert!((functional_i_via_h(&p).unwrap() - want).abs() < 1e-13, "d={d}");
        }
        assert!((functional_i(&Profile::h0(2).unwrap()).unwrap() - 7.0 / 30.0).abs() < 1e-14);
        assert!((functional_i(&Profile::h0(3).unwrap()).unwrap() - 5.0 / 28.0).abs() < 1e-14);
    }

    #[test]
    fn planar_ramp() {
        let p = Profile::new(2, alloc::vec![-1.0, 1.0], alloc::vec![0.0, 1.0]).unwrap();
        assert!((functional_i(&p.normalize().unwrap()).unwrap() - 4.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn matches_brute_force_double_integral() {
        let mut rng = RngStream::new(7, 0);
        for d in 2..=4 {
            let p = Profile::random(d, 7, false, &mut rng).unwrap();
            let rule = GaussLegendre::new(40);
            let mut brute = 0.0;
            let k = p.knots();
            for i in 0..k.len() - 1 {
                for j in 0..k.len() - 1 {
                    brute += rule.integrate(k[i], k[i + 1], |t1| {
                        let inner = if i == j {
                            rule.integrate(k[j], t1, |t2| (t1 - t2) * p.h_at(t2))
                                + rule.integrate(t1, k[j + 1], |t2| (t2 - t1) * p.h_at(t2))
                        } else {
                            rule.integrate(k[j], k[j + 1], |t2| libm::fabs(t1 - t2) * p.h_at(t2))
                        };
                        p.h_at(t1) * inner
                    });
                }
            }
            let got = functional_i(&p).unwrap();
            assert!((got - 0.5 * brute).abs() < 1e-10, "d={d}: {got} vs {}", 0.5 * brute);
        }
    }

    #[test]
    fn identities_agree_on_random_even_profiles() {
        let mut rng = RngStream::new(11, 0);
        for d in 2..=6 {
            for m in [3, 4, 8, 13] {
                let p = Profile::random(d, m, true, &mut rng).unwrap();
                let a = functional_i(&p).unwrap();
                let b = functional_i_via_h(&p).unwrap();
                assert!((a - b).abs() < 1e-12, "d={d} m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_unnormalized_and_odd_inputs() {
        let p = Profile::new(2, alloc::vec![-1.0, 1.0], alloc::vec![1.0, 1.0]).unwrap();
        assert!(functional_i(&p).is_err());
        let ramp = Profile::new(2, alloc::vec![-1.0, 1.0], alloc::vec![0.0, 1.0]).unwrap().normalize().unwrap();
        assert!(functional_i_via_h(&ramp).is_err());
    }
}
