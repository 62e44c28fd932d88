//! Densities on `[-1, 1]` whose `(d-1)`-th root is concave.
//!
//! For a body `K` and direction `u`, the normalized cross-section volumes of
//! `K` along `u`, rescaled to `[-1, 1]`, form a density `h` with
//!
//! * (a) `h ≥ 0`,
//! * (b) support exactly `[-1, 1]`,
//! * (c) `∫ h = 1`,
//! * (d) `h^{1/(d-1)}` concave (Brunn).
//!
//! and `E|P_u X₁ − P_u X₂| = |P_u K| · I(h)` with
//! `I(h) = ½ ∬ |t₁ − t₂| h(t₁) h(t₂)`. Bounding `I` over this class bounds
//! `Δ/V₁`. A [`Profile`] stores the concave root `f = h^{1/(d-1)}` as a
//! piecewise-linear function, so (d) is a linear constraint on knot values
//! and every integral of `h` is a piecewise polynomial integral done exactly.

mod affine;
mod extract;
mod functional;
mod optimize;
mod rearrange;

use alloc::vec;
use alloc::vec::Vec;

pub use affine::{affine_i, ell_d, ell_d_direct, AffineProfileParams};
pub use extract::{profile_from_body, ExtractOptions};
pub use functional::{functional_i, functional_i_via_h};
pub use optimize::{maximize_i, minimize_i, minimize_i_from, maximize_i_from, project_concave, OptimizeResult};
pub use rearrange::rearrange;

use crate::error::{Error, Result};
use crate::sampling::RngStream;

/// Tolerance on `|∫h − 1|` for a profile flagged as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Tolerance on slope increases for property (d).
pub const CONCAVITY_TOL: f64 = 1e-12;
/// Tolerance on mirrored knots and values for even profiles.
pub const EVEN_TOL: f64 = 1e-12;

/// A density `h = f^{d-1}` on `[-1, 1]` with `f` piecewise linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    d: usize,
    knots: Vec<f64>,
    f: Vec<f64>,
    normalized: bool,
}

impl Profile {
    /// Builds an (unnormalized) profile. Knots must increase strictly from
    /// `-1` to `1`; `f` must be finite and nonnegative.
    pub fn new(d: usize, knots: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("d", "profiles need d >= 2"));
        }
        if knots.len() < 2 || knots.len() != f.len() {
            return Err(Error::invalid("knots", "need at least two knots and one value per knot"));
        }
        if knots[0] != -1.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::invalid("knots", "knots must start at -1 and end at 1"));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("knots", "knots must be strictly increasing"));
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("f", "values must be finite"));
        }
        Ok(Self { d, knots, f, normalized: false })
    }

    /// Builds a profile and marks it normalized; fails if `∫h` is not 1.
    pub fn new_normalized(d: usize, knots: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let mut p = Self::new(d, knots, f)?;
        let defect = libm::fabs(p.mass() - 1.0);
        if defect > NORMALIZATION_TOL {
            return Err(Error::invalid("f", alloc::format!("integral of h differs from 1 by {defect:e}")));
        }
        p.normalized = true;
        Ok(p)
    }

    /// Uniform knots on `[-1, 1]`.
    pub fn uniform_knots(m: usize) -> Vec<f64> {
        assert!(m >= 2);
        let mut k: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
        k[m - 1] = 1.0;
        if m % 2 == 1 {
            k[m / 2] = 0.0;
        }
        // Exact mirror symmetry.
        for i in 0..m / 2 {
            k[m - 1 - i] = -k[i];
        }
        k
    }

    /// `h = 1/2` on `[-1, 1]`.
    pub fn uniform(d: usize) -> Result<Self> {
        let c = libm::pow(0.5, 1.0 / (d as f64 - 1.0));
        Self::new(d, vec![-1.0, 0.0, 1.0], vec![c; 3])?.normalize()
    }

    /// The extremal density `h₀(t) = (d/2)(1 − |t|)^{d−1}`.
    pub fn h0(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("d", "h0 needs d >= 2"));
        }
        let peak = libm::pow(d as f64 / 2.0, 1.0 / (d as f64 - 1.0));
        let mut p = Self::new(d, vec![-1.0, 0.0, 1.0], vec![0.0, peak, 0.0])?;
        p.normalized = true;
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knot values of the concave root `f = h^{1/(d-1)}`.
    pub fn f_values(&self) -> &[f64] {
        &self.f
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.knots.len() - 1).map(move |i| (self.knots[i], self.knots[i + 1], self.f[i], self.f[i + 1]))
    }

    /// `f(t)` by linear interpolation (zero outside `[-1, 1]`).
    pub fn f_at(&self, t: f64) -> f64 {
        if !(-1.0..=1.0).contains(&t) {
            return 0.0;
        }
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => return self.f[i],
            Err(i) => i - 1,
        };
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        let s = (t - a) / (b - a);
        self.f[i] + s * (self.f[i + 1] - self.f[i])
    }

    pub fn h_at(&self, t: f64) -> f64 {
        powi(self.f_at(t), self.d - 1)
    }

    /// `∫_{-1}^{1} h`, exact.
    pub fn mass(&self) -> f64 {
        self.cells().map(|(a, b, fa, fb)| cell_mass(self.d, b - a, fa, fb)).sum()
    }

    /// Rescales `f` so that `∫h = 1`.
    pub fn normalize(&self) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::invalid("f", "profile has zero mass"));
        }
        let s = libm::pow(m, -1.0 / (self.d as f64 - 1.0));
        Ok(Self {
            d: self.d,
            knots: self.knots.clone(),
            f: self.f.iter().map(|v| v * s).collect(),
            normalized: true,
        })
    }

    /// True when knots and values are mirror images about `0`.
    pub fn is_even(&self) -> bool {
        let n = self.knots.len();
        (0..n).all(|i| {
            libm::fabs(self.knots[i] + self.knots[n - 1 - i]) <= EVEN_TOL
                && libm::fabs(self.f[i] - self.f[n - 1 - i]) <= EVEN_TOL
        })
    }

    /// `t ↦ h(−t)`.
    pub fn reflected(&self) -> Self {
        Self {
            d: self.d,
            knots: self.knots.iter().rev().map(|t| -t).collect(),
            f: self.f.iter().rev().copied().collect(),
            normalized: self.normalized,
        }
    }

    /// `∫ |h − g|` between two profiles, by Gauss–Legendre on the union of
    /// their knots.
    pub fn l1_distance(&self, other: &Profile) -> f64 {
        let mut ts: Vec<f64> = self.knots.iter().chain(other.knots.iter()).copied().collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let rule = crate::quadrature::GaussLegendre::new(16);
        ts.windows(2)
            .map(|w| rule.integrate(w[0], w[1], |t| libm::fabs(self.h_at(t) - other.h_at(t))))
            .sum()
    }

    /// Checks properties (a)–(d).
    pub fn validate(&self) -> ValidationReport {
        let n = self.f.len();
        let min_f = self.f.iter().copied().fold(f64::INFINITY, f64::min);
        let nonneg_defect = (-min_f).max(0.0);

        let support = if n == 2 {
            let ok = self.f[0] >= 0.0 && self.f[1] >= 0.0 && self.f[0].max(self.f[1]) > 0.0;
            Check::from_bool(ok, if ok { 0.0 } else { 1.0 })
        } else {
            let interior_min = self.f[1..n - 1].iter().copied().fold(f64::INFINITY, f64::min);
            let ok = interior_min > 0.0 && self.f[0] >= 0.0 && self.f[n - 1] >= 0.0;
            Check::from_bool(ok, (-interior_min).max(0.0))
        };

        let normalization = if self.normalized {
            let defect = libm::fabs(self.mass() - 1.0);
            Check::from_bool(defect <= NORMALIZATION_TOL, defect)
        } else {
            Check::not_applicable()
        };

        let concavity_defect = concavity_defect(&self.knots, &self.f);
        ValidationReport {
            nonnegative: Check::from_bool(nonneg_defect == 0.0, nonneg_defect),
            support,
            normalization,
            concavity: Check::from_bool(concavity_defect <= CONCAVITY_TOL, concavity_defect),
        }
    }

    /// Draws a random valid normalized profile on `m` knots. Even profiles
    /// use mirrored uniform knots; others use jittered knots.
    pub fn random(d: usize, m: usize, even: bool, rng: &mut RngStream) -> Result<Self> {
        if m < 3 {
            return Err(Error::invalid("knots", "need at least 3 knots"));
        }
        let knots = if even {
            Self::uniform_knots(m)
        } else {
            let mut k = Self::uniform_knots(m);
            let h = 2.0 / (m - 1) as f64;
            for t in k[1..m - 1].iter_mut() {
                *t += 0.4 * h * (rng.uniform() - 0.5);
            }
            k
        };
        let f = if even {
            // Build the right half on knots >= 0, nonincreasing and concave.
            let half: Vec<f64> = knots.iter().copied().filter(|t| *t >= 0.0).collect();
            let right = random_concave(&half, rng, true);
            let mut f = vec![0.0; m];
            let off = m - half.len();
            for (j, v) in right.iter().enumerate() {
                f[off + j] = *v;
                f[m - 1 - off - j] = *v;
            }
            f
        } else {
            random_concave(&knots, rng, false)
        };
        Self::new(d, knots, f)?.normalize()
    }
}

/// Random concave values on `knots`. With `decreasing` the first slope is
/// nonpositive so a mirror image about the first knot stays concave.
fn random_concave(knots: &[f64], rng: &mut RngStream, decreasing: bool) -> Vec<f64> {
    let cells = knots.len() - 1;
    let spread = 4.0 * rng.uniform();
    let shift = if decreasing { 0.0 } else { 2.0 * rng.uniform() - 1.0 };
    let mut slopes: Vec<f64> = (0..cells).map(|_| shift + spread * (rng.uniform() - 0.5)).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    if decreasing {
        let top = slopes[0];
        slopes.iter_mut().for_each(|s| *s -= top.max(0.0));
    }
    let mut f = vec![0.0; knots.len()];
    for i in 0..cells {
        f[i + 1] = f[i] + slopes[i] * (knots[i + 1] - knots[i]);
    }
    // Lift so the smaller endpoint sits at zero or slightly above.
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let lift = if rng.uniform() < 0.5 { 0.0 } else { 0.5 * rng.uniform() };
    let mut out: Vec<f64> = f.iter().map(|v| v - lo + lift).collect();
    if out.iter().all(|v| *v <= 0.0) {
        out.iter_mut().for_each(|v| *v = 1.0);
    }
    // A concave function attains its minimum at an endpoint; guard interior
    // zeros from flat pieces.
    let n = out.len();
    for v in out[1..n - 1].iter_mut() {
        if *v <= 0.0 {
            *v = 1e-9;
        }
    }
    out
}

pub(crate) fn concavity_defect(knots: &[f64], f: &[f64]) -> f64 {
    let slopes: Vec<f64> = (0..knots.len() - 1)
        .map(|i| (f[i + 1] - f[i]) / (knots[i + 1] - knots[i]))
        .collect();
    slopes.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max)
}

#[inline]
pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// `Σ_{j<d} A^j B^{d-1-j}`, the divided difference of `x^d` between `A` and
/// `B` (times `A − B`), without cancellation.
#[inline]
pub(crate) fn power_sum(d: usize, a: f64, b: f64) -> f64 {
    let mut s = 0.0;
    let mut pa = 1.0;
    for j in 0..d {
        s += pa * powi(b, d - 1 - j);
        pa *= a;
    }
    s
}

/// `∫ f^{d-1}` over a cell of width `w` where `f` runs linearly from `fa`
/// to `fb`.
#[inline]
pub(crate) fn cell_mass(d: usize, w: f64, fa: f64, fb: f64) -> f64 {
    w * power_sum(d, fa, fb) / d as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of one property check with its measured defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub status: CheckStatus,
    pub defect: f64,
}

impl Check {
    fn from_bool(ok: bool, defect: f64) -> Self {
        Self { status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, defect }
    }

    fn not_applicable() -> Self {
        Self { status: CheckStatus::NotApplicable, defect: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// (a)
    pub nonnegative: Check,
    /// (b)
    pub support: Check,
    /// (c), only checked for normalized profiles.
    pub normalization: Check,
    /// (d)
    pub concavity: Check,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        [self.nonnegative, self.support, self.normalization, self.concavity]
            .iter()
            .all(Check::passed)
    }
}
