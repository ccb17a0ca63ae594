//! Thin wrappers over the gamma-function routines.

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_integer_values() {
        let pi = std::f64::consts::PI;
        assert_relative_eq!(gamma(0.5), pi.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), pi.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(11.0), 3628800f64.ln(), max_relative = 1e-14);
        assert!(ln_gamma(400.0).is_finite());
    }
}
