//! Gamma-function constants that recur across the crate.

use core::f64::consts::PI;

/// Volume of the unit ball in ℝ^d, `π^{d/2} / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    libm::exp(h * libm::log(PI) - libm::lgamma(h + 1.0))
}

/// Surface area of `S^{d-1}`, `2 π^{d/2} / Γ(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * libm::exp(h * libm::log(PI) - libm::lgamma(h))
}

/// Ratio `Γ(x + a) / Γ(x)` through log-Gamma so large `x` does not overflow.
pub fn gamma_ratio(x: f64, a: f64) -> f64 {
    libm::exp(libm::lgamma(x + a) - libm::lgamma(x))
}

/// The factor `√π Γ((d+1)/2) / Γ(d/2)` that turns the normalized mean width
/// into the first intrinsic volume.
pub fn v1_factor(d: usize) -> f64 {
    libm::sqrt(PI) * gamma_ratio(d as f64 / 2.0, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_dimensional_values() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        // d = 1: two points; the factor is 1 so V₁(segment) = length.
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((v1_factor(1) - 1.0).abs() < 1e-14);
        assert!((v1_factor(2) - PI / 2.0).abs() < 1e-14);
        assert!((v1_factor(3) - 2.0).abs() < 1e-14);
    }
}
