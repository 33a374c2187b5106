//! Log-Gamma based ratios.
//!
//! Every Gamma ratio in the crate goes through [`ln_gamma`] so that weights and
//! degrees in the hundreds stay representable.

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with non-positive argument {x}");
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(f64::from(n) + 1.0)
    }
}

/// `ln B(x, y) = ln Γ(x) + ln Γ(y) − ln Γ(x + y)`.
pub fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn factorials() {
        let mut acc = 1.0f64;
        for n in 1..=20u32 {
            acc *= f64::from(n);
            assert_relative_eq!(ln_factorial(n).exp(), acc, max_relative = 1e-13);
        }
    }

    #[test]
    fn half_integer_gamma() {
        // Γ(1/2) = √π
        assert_relative_eq!(
            ln_gamma(0.5).exp(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(ln_beta(2.0, 3.0).exp(), 1.0 / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn large_arguments_stay_finite() {
        assert!(ln_gamma(400.0).is_finite());
        assert!(ln_gamma(1e6).is_finite());
    }
}
