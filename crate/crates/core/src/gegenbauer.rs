//! Gegenbauer (ultraspherical) polynomials `C_n^λ`.
//!
//! Evaluation uses the forward three-term recurrence
//!
//! ```text
//! n C_n(x) = 2x (n + λ - 1) C_{n-1}(x) - (n + 2λ - 2) C_{n-2}(x),   C_0 = 1, C_1 = 2λx
//! ```
//!
//! which is stable on `[-1, 1]` for the degrees used here. The parameter
//! `λ = 0` does not follow the limit of the recurrence; it selects the
//! Chebyshev convention `C_n^0(cos θ) = cos(nθ)`.

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Slack allowed outside `[-1, 1]` before an argument is rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Below this value of `sin θ` the Chebyshev derivative switches to its endpoint limit.
const ENDPOINT_SIN: f64 = 1e-8;

/// Degree and parameter of a Gegenbauer polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyIndex {
    pub n: usize,
    pub lambda: f64,
}

impl PolyIndex {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Gegenbauer parameter must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { n, lambda })
    }

    /// The parameter attached to the sphere `S^d`, `λ = (d - 1) / 2`.
    pub fn for_dimension(n: usize, d: usize) -> Self {
        Self {
            n,
            lambda: (d as f64 - 1.0) / 2.0,
        }
    }
}

fn check_domain(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { value: x });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// `C_n^λ(x)`.
pub fn gegenbauer_eval(idx: PolyIndex, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    if idx.lambda == 0.0 {
        return Ok((idx.n as f64 * x.acos()).cos());
    }
    Ok(recurrence(idx.n, idx.lambda, x))
}

fn recurrence(n: usize, lambda: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * x;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// All values `C_0^λ(x), …, C_{n_max}^λ(x)` from a single recurrence sweep.
pub fn gegenbauer_table(lambda: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    let x = check_domain(x)?;
    if lambda == 0.0 {
        let theta = x.acos();
        return Ok((0..=n_max).map(|k| (k as f64 * theta).cos()).collect());
    }
    Ok(table_recurrence(lambda, x, n_max))
}

/// Same as [`gegenbauer_table`] at `x = cos θ`, but takes the angle so that the
/// Chebyshev case avoids a round trip through `acos`.
pub fn gegenbauer_table_angle(lambda: f64, theta: f64, n_max: usize) -> Vec<f64> {
    if lambda == 0.0 {
        return (0..=n_max).map(|k| (k as f64 * theta).cos()).collect();
    }
    table_recurrence(lambda, theta.cos().clamp(-1.0, 1.0), n_max)
}

fn table_recurrence(lambda: f64, x: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * lambda * x);
    for k in 2..=n_max {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * out[k - 1]
            - (kf + 2.0 * lambda - 2.0) * out[k - 2])
            / kf;
        out.push(next);
    }
    out
}

/// Normalized values `R_n(x) = C_n^λ(x) / C_n^λ(1)` for `n = 0..=n_max`.
///
/// Runs the recurrence on the normalized quantities directly,
/// `(n + 2λ - 1) R_n = 2x (n + λ - 1) R_{n-1} - (n - 1) R_{n-2}`, which stays bounded by 1
/// on `[-1, 1]` and reduces to the Chebyshev recurrence at `λ = 0`.
pub fn normalized_table(lambda: f64, x: f64, n_max: usize) -> Vec<f64> {
    let x = x.clamp(-1.0, 1.0);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(x);
    for k in 2..=n_max {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * out[k - 1] - (kf - 1.0) * out[k - 2])
            / (kf + 2.0 * lambda - 1.0);
        out.push(next);
    }
    out
}

/// `d/dθ R_n(cos θ)` for `n = 0..=n_max`, where `R_n` is the normalized polynomial of
/// [`normalized_table`]:
///
/// ```text
/// d/dθ R_n(cos θ) = -sin θ · n (n + 2λ) / (2λ + 1) · R^{λ+1}_{n-1}(cos θ)
/// ```
pub fn normalized_derivative_table_angle(lambda: f64, theta: f64, n_max: usize) -> Vec<f64> {
    let s = theta.sin();
    let upper = normalized_table(lambda + 1.0, theta.cos(), n_max.saturating_sub(1));
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                let nf = n as f64;
                -s * nf * (nf + 2.0 * lambda) / (2.0 * lambda + 1.0) * upper[n - 1]
            }
        })
        .collect()
}

/// `C_n^λ(1) = Γ(n + 2λ) / (n! Γ(2λ))`, evaluated in log space.
///
/// For `λ = 0` the Chebyshev convention gives `1` for every degree.
pub fn gegenbauer_at_one(idx: PolyIndex) -> f64 {
    if idx.n == 0 || idx.lambda == 0.0 {
        return 1.0;
    }
    let n = idx.n as f64;
    let two_lambda = 2.0 * idx.lambda;
    (ln_gamma(n + two_lambda) - ln_gamma(n + 1.0) - ln_gamma(two_lambda)).exp()
}

/// First derivative `d/dx C_n^λ(x)`.
///
/// Uses `d/dx C_n^λ = 2λ C_{n-1}^{λ+1}` for `λ > 0`; for `λ = 0` it is
/// `n sin(nθ) / sin θ` with `θ = arccos x`, replaced by the limit `(±1)^{n+1} n²`
/// at the endpoints.
pub fn gegenbauer_derivative(idx: PolyIndex, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    if idx.n == 0 {
        return Ok(0.0);
    }
    if idx.lambda > 0.0 {
        return Ok(2.0 * idx.lambda * recurrence(idx.n - 1, idx.lambda + 1.0, x));
    }
    let n = idx.n as f64;
    let theta = x.acos();
    let s = theta.sin();
    if s.abs() < ENDPOINT_SIN {
        let sign = if x > 0.0 || idx.n % 2 == 1 { 1.0 } else { -1.0 };
        return Ok(sign * n * n);
    }
    Ok(n * (n * theta).sin() / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn idx(n: usize, lambda: f64) -> PolyIndex {
        PolyIndex::new(n, lambda).unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(gegenbauer_eval(idx(0, 0.5), 0.3).unwrap(), 1.0);
        assert_relative_eq!(
            gegenbauer_eval(idx(2, 0.0), 0.0).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            gegenbauer_eval(idx(1, 1.0), 0.5).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn low_degrees_match_generating_function_expansion() {
        // Coefficients of r^n in (1 - 2xr + r^2)^{-λ}, expanded by hand to order r^3.
        for &lambda in &[0.5, 1.0, 1.5, 2.5] {
            for &x in &[-0.9f64, -0.2, 0.0, 0.4, 0.95] {
                let c2 = 2.0 * lambda * (lambda + 1.0) * x * x - lambda;
                let c3 = 4.0 / 3.0 * lambda * (lambda + 1.0) * (lambda + 2.0) * x.powi(3)
                    - 2.0 * lambda * (lambda + 1.0) * x;
                assert_relative_eq!(
                    gegenbauer_eval(idx(2, lambda), x).unwrap(),
                    c2,
                    epsilon = 1e-14,
                    max_relative = 1e-14
                );
                assert_relative_eq!(
                    gegenbauer_eval(idx(3, lambda), x).unwrap(),
                    c3,
                    epsilon = 1e-14,
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn value_at_one() {
        assert_relative_eq!(gegenbauer_at_one(idx(2, 0.5)), 1.0, max_relative = 1e-14);
        assert_eq!(gegenbauer_at_one(idx(0, 3.7)), 1.0);
        assert_relative_eq!(gegenbauer_at_one(idx(3, 1.5)), 10.0, max_relative = 1e-13);
        assert_eq!(gegenbauer_at_one(idx(9, 0.0)), 1.0);
    }

    #[test]
    fn recurrence_matches_closed_form_at_one() {
        for &lambda in &[0.5, 1.0, 1.5, 2.0, 3.0] {
            for n in 0..=64 {
                let r = gegenbauer_eval(idx(n, lambda), 1.0).unwrap();
                let c = gegenbauer_at_one(idx(n, lambda));
                assert_relative_eq!(r, c, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn large_degree_at_one_does_not_overflow() {
        let v = gegenbauer_at_one(idx(400, 60.0));
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn domain_error_outside_slack() {
        assert!(gegenbauer_eval(idx(3, 1.0), 1.0 + 1e-13).is_ok());
        assert_eq!(
            gegenbauer_eval(idx(3, 1.0), 1.001),
            Err(Error::Domain { value: 1.001 })
        );
        assert!(PolyIndex::new(1, -0.5).is_err());
    }

    #[test]
    fn derivative_values() {
        assert_relative_eq!(
            gegenbauer_derivative(idx(1, 1.0), 0.2).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            gegenbauer_derivative(idx(2, 0.0), 1.0).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            gegenbauer_derivative(idx(3, 0.0), -1.0).unwrap(),
            9.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            gegenbauer_derivative(idx(2, 0.0), -1.0).unwrap(),
            -4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-5;
        for &(n, lambda) in &[(3usize, 0.5), (5, 0.0), (7, 1.0), (4, 2.5)] {
            for &x in &[-0.7, -0.1, 0.4, 0.8] {
                let i = idx(n, lambda);
                let fd = (gegenbauer_eval(i, x + h).unwrap() - gegenbauer_eval(i, x - h).unwrap())
                    / (2.0 * h);
                let d = gegenbauer_derivative(i, x).unwrap();
                assert!(
                    (fd - d).abs() < 1e-8 * d.abs().max(1.0),
                    "n={n} λ={lambda} x={x}"
                );
            }
        }
    }

    #[test]
    fn parity() {
        for &lambda in &[0.0, 0.5, 1.0, 2.0] {
            for n in 0..20 {
                let a = gegenbauer_eval(idx(n, lambda), 0.37).unwrap();
                let b = gegenbauer_eval(idx(n, lambda), -0.37).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_relative_eq!(b, sign * a, epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sin_squared_contiguous_identity() {
        // C_n^{(d+1)/2} sin²θ expressed through C_n^{(d-1)/2} and C_{n+2}^{(d-1)/2}.
        for d in 2..=5usize {
            let lo = (d as f64 - 1.0) / 2.0;
            let hi = (d as f64 + 1.0) / 2.0;
            let df = d as f64;
            for n in 0..=32usize {
                let nf = n as f64;
                for k in 0..20 {
                    let theta = 0.05 + k as f64 * (std::f64::consts::PI - 0.1) / 19.0;
                    let x = theta.cos();
                    let lhs = gegenbauer_eval(idx(n, hi), x).unwrap() * theta.sin().powi(2);
                    let rhs = ((nf + df - 1.0)
                        * (nf + df)
                        * gegenbauer_eval(idx(n, lo), x).unwrap()
                        - (nf + 1.0) * (nf + 2.0) * gegenbauer_eval(idx(n + 2, lo), x).unwrap())
                        / ((df - 1.0) * (2.0 * nf + df + 1.0));
                    let scale = lhs.abs().max(1.0);
                    assert!((lhs - rhs).abs() <= 1e-9 * scale, "d={d} n={n} θ={theta}");
                }
            }
        }
    }

    #[test]
    fn weighted_derivative_identity() {
        // d/dx[(1-x²)^{d/2} C_{n-1}^{(d+1)/2}(x)] = -(n(n+d-1)/(d-1)) (1-x²)^{(d-2)/2} C_n^{(d-1)/2}(x)
        let h = 1e-6;
        for d in 2..=5usize {
            let df = d as f64;
            for n in 1..=12usize {
                let nf = n as f64;
                let g = |x: f64| {
                    (1.0 - x * x).powf(df / 2.0)
                        * gegenbauer_eval(idx(n - 1, (df + 1.0) / 2.0), x).unwrap()
                };
                for &x in &[-0.8, -0.3, 0.1, 0.6] {
                    let fd = (g(x + h) - g(x - h)) / (2.0 * h);
                    let rhs = -(nf * (nf + df - 1.0) / (df - 1.0))
                        * (1.0 - x * x).powf((df - 2.0) / 2.0)
                        * gegenbauer_eval(idx(n, (df - 1.0) / 2.0), x).unwrap();
                    assert!(
                        (fd - rhs).abs() < 1e-6 * rhs.abs().max(1.0),
                        "d={d} n={n} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_agrees_with_single_evaluations() {
        for &lambda in &[0.0, 0.5, 1.0, 2.0] {
            let t = gegenbauer_table(lambda, 0.3, 40).unwrap();
            let ta = gegenbauer_table_angle(lambda, 0.3f64.acos(), 40);
            for n in 0..=40 {
                let e = gegenbauer_eval(idx(n, lambda), 0.3).unwrap();
                assert_relative_eq!(t[n], e, epsilon = 1e-12, max_relative = 1e-12);
                assert_relative_eq!(ta[n], e, epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn normalized_tables() {
        for &lambda in &[0.0, 0.5, 1.0, 2.5] {
            let theta = 0.83f64;
            let r = normalized_table(lambda, theta.cos(), 50);
            let dr = normalized_derivative_table_angle(lambda, theta, 50);
            let h = 1e-6;
            let rp = normalized_table(lambda, (theta + h).cos(), 50);
            let rm = normalized_table(lambda, (theta - h).cos(), 50);
            for n in 0..=50 {
                let i = idx(n, lambda);
                let want = gegenbauer_eval(i, theta.cos()).unwrap() / gegenbauer_at_one(i);
                assert!((r[n] - want).abs() < 1e-12, "λ={lambda} n={n}");
                let fd = (rp[n] - rm[n]) / (2.0 * h);
                assert!(
                    (dr[n] - fd).abs() < 1e-6 * (n * n).max(1) as f64,
                    "λ={lambda} n={n}"
                );
            }
        }
    }
}
