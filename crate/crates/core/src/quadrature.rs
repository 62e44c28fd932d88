//! Gauss–Legendre rules.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Integral of `f` over `S^{d-1}` against the unnormalized surface measure,
/// by a product rule in hyperspherical coordinates: `n` Gauss–Legendre nodes
/// per polar angle and `2n` midpoint nodes in azimuth. Weights are rescaled
/// so the rule integrates constants exactly.
pub fn sphere_integral(d: usize, n: usize, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    assert!(d >= 1 && n >= 1);
    let area = crate::special::sphere_area(d);
    if d == 1 {
        return 0.5 * area * (f(&[1.0]) + f(&[-1.0]));
    }
    let rule = GaussLegendre::new(n);
    let polar: Vec<(f64, f64)> = rule.on(0.0, PI).collect();
    let n_phi = 2 * n;
    let mut u = alloc::vec![0.0; d];
    let mut total = 0.0;
    let mut mass = 0.0;
    let mut state = alloc::vec![0usize; d - 2];
    loop {
        // Polar angles θ_1..θ_{d-2} carry weights sin^{d-1-k} θ_k.
        let mut prefix = 1.0;
        let mut w = 1.0;
        for (k, &i) in state.iter().enumerate() {
            let (theta, wt) = polar[i];
            u[k] = prefix * libm::cos(theta);
            w *= wt * libm::pow(libm::sin(theta), (d - 2 - k) as f64);
            prefix *= libm::sin(theta);
        }
        for j in 0..n_phi {
            let phi = 2.0 * PI * (j as f64 + 0.5) / n_phi as f64;
            u[d - 2] = prefix * libm::cos(phi);
            u[d - 1] = prefix * libm::sin(phi);
            let wj = w * 2.0 * PI / n_phi as f64;
            total += wj * f(&u);
            mass += wj;
        }
        // Advance the polar multi-index.
        let mut k = state.len();
        loop {
            if k == 0 {
                return total / mass * area;
            }
            k -= 1;
            state[k] += 1;
            if state[k] < n {
                break;
            }
            state[k] = 0;
        }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
