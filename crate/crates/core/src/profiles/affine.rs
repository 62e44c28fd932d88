//! Profiles `h(t) = C (a t + b)^{d-1}` and their closed-form `I`.

use alloc::vec;

use super::{power_sum, Profile};
use crate::error::{Error, Result};

/// Parameters of an affine profile, `a ≥ 0` and `b ≥ a` with `b > 0`.
/// Reflecting `t ↦ −t` covers `a < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineProfileParams {
    d: usize,
    a: f64,
    b: f64,
}

impl AffineProfileParams {
    pub fn new(d: usize, a: f64, b: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("d", "profiles need d >= 2"));
        }
        if !(a.is_finite() && b.is_finite()) || a < 0.0 {
            return Err(Error::invalid("a", "need finite a >= 0"));
        }
        if !(b > 0.0 && b >= a) {
            return Err(Error::invalid("b", "need b > 0 and b >= a so that at + b >= 0 on [-1, 1]"));
        }
        Ok(Self { d, a, b })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `f(−1) = b − a` up to the normalizing factor.
    pub fn r1(&self) -> f64 {
        self.b - self.a
    }

    /// `f(1) = a + b` up to the normalizing factor.
    pub fn r2(&self) -> f64 {
        self.a + self.b
    }

    /// `r₂/r₁ − 1`; infinite when `r₁ = 0`.
    pub fn p(&self) -> f64 {
        if self.r1() == 0.0 {
            f64::INFINITY
        } else {
            2.0 * self.a / self.r1()
        }
    }

    /// The constant `C` making `∫h = 1`.
    pub fn normalization(&self) -> f64 {
        // (r₂^d − r₁^d)/(r₂ − r₁) without cancellation.
        self.d as f64 / (2.0 * power_sum(self.d, self.r2(), self.r1()))
    }

    pub fn profile(&self) -> Result<Profile> {
        let s = libm::pow(self.normalization(), 1.0 / (self.d as f64 - 1.0));
        let mut p = Profile::new(self.d, vec![-1.0, 1.0], vec![s * self.r1(), s * self.r2()])?;
        p.normalized = true;
        Ok(p)
    }
}

/// `I(h_{a,b})` in closed form.
pub fn affine_i(params: &AffineProfileParams) -> f64 {
    let d = params.d as f64;
    if params.a == 0.0 {
        1.0 / 3.0
    } else if params.r1() == 0.0 {
        2.0 * d / ((d + 1.0) * (2.0 * d + 1.0))
    } else {
        ell_d(params.d, params.p())
    }
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    libm::round(r)
}

/// `ℓ_d(p)` for `p > 0`, evaluated as a ratio of polynomials with the
/// leading zeros of numerator and denominator divided out, so small `p` does
/// not cancel. `ℓ_d(0⁺) = 1/3`.
pub fn ell_d(d: usize, p: f64) -> f64 {
    let dd = d as f64;
    let n = 2 * d - 2;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in (0..=n).rev() {
        let mut a = binom(2 * d + 1, k + 3);
        let mut b = binom(2 * d, k + 2);
        if k + 2 <= d {
            a -= (2 * d + 1) as f64 * binom(d, k + 2);
            b -= 2.0 * binom(d, k + 2);
        }
        num = num * p + a;
        den = den * p + b;
    }
    2.0 * dd / ((dd + 1.0) * (2.0 * dd + 1.0)) * num / den
}

/// `ℓ_d(p)` straight from its defining expression; loses accuracy as
/// `p → 0`.
pub fn ell_d_direct(d: usize, p: f64) -> f64 {
    let dd = d as f64;
    let q = p + 1.0;
    let qd = libm::pow(q, dd);
    let pre = 2.0 * dd / ((dd + 1.0) * p * (qd - 1.0) * (qd - 1.0));
    pre * ((libm::pow(q, 2.0 * dd + 1.0) - 1.0) / (2.0 * dd + 1.0) - qd * p)
}
