//! Schoenberg coefficients of isotropic functions.
//!
//! A function `ψ` on `[0, π]` is positive definite on `S^d` exactly when
//!
//! ```text
//! ψ(θ) = Σ_n b_{d,n} C_n^{(d-1)/2}(cos θ) / C_n^{(d-1)/2}(1),    b_{d,n} ≥ 0,  Σ b_{d,n} < ∞.
//! ```
//!
//! This module computes the `b_{d,n}` by quadrature, evaluates truncated series,
//! converts to the orthonormal Gegenbauer basis, and reports on nonnegativity and
//! tail decay of finite coefficient lists.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::convolution::GegenbauerCoeffs;
use crate::error::{Error, Result};
use crate::gegenbauer::{gegenbauer_at_one, normalized_table, PolyIndex};
use crate::special::ln_gamma;
use crate::sphere::{schoenberg_per_gegenbauer, Dimension, QuadratureRule};

/// Default truncation index for coefficient computations.
pub const DEFAULT_N_MAX: usize = 64;

/// A real function of the geodesic angle `θ ∈ [0, π]`.
///
/// `breakpoints` lists angles where the function is not smooth (kinks, jumps,
/// support edges); quadrature and the direct convolution oracle split there.
#[derive(Clone)]
pub struct IsotropicFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
    breakpoints: Vec<f64>,
}

impl IsotropicFunction {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            label: label.into(),
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.eval)(theta)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Quadrature suited to this function in dimension `d`: a Gauss rule when the
    /// function is smooth, otherwise a composite rule split at the breakpoints.
    pub fn quadrature(&self, d: Dimension, n_nodes: usize) -> Result<QuadratureRule> {
        if self.breakpoints.iter().any(|b| *b > 0.0 && *b < PI) {
            let order = 16;
            QuadratureRule::composite(d, &self.breakpoints, n_nodes.div_ceil(order).max(4), order)
        } else {
            QuadratureRule::gauss(d, n_nodes)
        }
    }
}

impl fmt::Debug for IsotropicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IsotropicFunction")
            .field("label", &self.label)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

/// Truncated Schoenberg coefficients `b_{d,0..=N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoenbergSequence {
    pub d: Dimension,
    pub coeffs: Vec<f64>,
    /// Every coefficient is `≥ -tol` for the tolerance used at construction.
    pub declared_nonneg: bool,
    /// Bound on `Σ_{n>N} b_{d,n}`; `f64::INFINITY` when no bound is available.
    pub tail_bound: f64,
}

impl SchoenbergSequence {
    /// An exactly finite series; the tail is zero.
    pub fn new(d: Dimension, coeffs: Vec<f64>) -> Self {
        let tol = default_negative_tol(&coeffs);
        let declared_nonneg = coeffs.iter().all(|b| *b >= -tol);
        Self {
            d,
            coeffs,
            declared_nonneg,
            tail_bound: 0.0,
        }
    }

    /// Truncation of a series whose value at zero is `value_at_zero`.
    ///
    /// For nonnegative sequences `Σ b_{d,n} = ψ(0)`, so the missing mass
    /// `ψ(0) - Σ_{n≤N} b_{d,n}` bounds the tail; otherwise the bound is infinite.
    pub fn from_truncation(d: Dimension, coeffs: Vec<f64>, value_at_zero: f64) -> Self {
        let mut seq = Self::new(d, coeffs);
        seq.tail_bound = if seq.declared_nonneg && value_at_zero.is_finite() {
            (value_at_zero - seq.sum()).max(0.0)
        } else {
            f64::INFINITY
        };
        seq
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Highest index `N` of the stored coefficients.
    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Indices with `b_{d,n} < -tol`.
    pub fn negative_indices(&self, tol: f64) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, b)| **b < -tol)
            .map(|(n, _)| n)
            .collect()
    }

    /// Partial sum of the series at `θ`.
    pub fn eval(&self, theta: f64) -> f64 {
        evaluate_series(self, theta)
    }
}

/// Tolerance below which a negative coefficient is attributed to quadrature noise.
pub fn default_negative_tol(coeffs: &[f64]) -> f64 {
    1e-10 * coeffs.iter().map(|b| b.abs()).sum::<f64>().max(1.0)
}

/// Prefactor turning `∫_0^π C_n(cos θ) (sin θ)^{d-1} ψ(θ) dθ` into `b_{d,n}`.
fn schoenberg_prefactor(d: Dimension, n: usize) -> f64 {
    if d.get() == 1 {
        return if n == 0 { 1.0 / PI } else { 2.0 / PI };
    }
    let df = d.get() as f64;
    let lambda = d.lambda();
    let ln = 2.0 * ln_gamma(lambda) - ln_gamma(df - 1.0) - (3.0 - df) * 2f64.ln() - PI.ln();
    (2.0 * n as f64 + df - 1.0) * ln.exp()
}

/// `b_{d,0..=n_max}` of `f` computed with `rule`.
///
/// The integrals are evaluated against normalized polynomials `R_n = C_n / C_n(1)` and
/// rescaled, which keeps the accumulation bounded for large `n`. Negative
/// coefficients are not an error; they clear `declared_nonneg` and drop the tail bound.
pub fn schoenberg_coefficients(
    f: &IsotropicFunction,
    d: Dimension,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<SchoenbergSequence> {
    if rule.d != d {
        return Err(Error::DimensionMismatch {
            expected: d.get(),
            found: rule.d.get(),
        });
    }
    if let Some(deg) = rule.exact_degree {
        if deg < n_max {
            return Err(Error::InvalidArgument(format!(
                "quadrature exact to degree {deg} cannot resolve coefficients up to {n_max}"
            )));
        }
    }
    let lambda = d.lambda();
    let mut acc = vec![0.0; n_max + 1];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fw = w * f.eval(t);
        if fw == 0.0 {
            continue;
        }
        let r = normalized_table(lambda, t.cos(), n_max);
        for (a, rn) in acc.iter_mut().zip(&r) {
            *a += fw * rn;
        }
    }
    let coeffs = acc
        .into_iter()
        .enumerate()
        .map(|(n, a)| {
            let c1 = gegenbauer_at_one(PolyIndex::for_dimension(n, d.get()));
            schoenberg_prefactor(d, n) * c1 * a
        })
        .collect();
    Ok(SchoenbergSequence::from_truncation(d, coeffs, f.eval(0.0)))
}

/// `Σ_{n≤N} b_{d,n} C_n(cos θ) / C_n(1)`.
pub fn evaluate_series(seq: &SchoenbergSequence, theta: f64) -> f64 {
    if seq.coeffs.is_empty() {
        return 0.0;
    }
    let r = normalized_table(seq.d.lambda(), theta.cos(), seq.n_max());
    seq.coeffs.iter().zip(&r).map(|(b, rn)| b * rn).sum()
}

/// Re-expands the finite series `seq` in the Gegenbauer polynomials of another dimension.
///
/// The truncated series is a polynomial of degree `N` in `cos θ`, so a Gauss rule
/// with `N + 2` nodes recovers its coefficients in `target` exactly (up to rounding).
/// The result describes the same polynomial, hence its tail is zero.
pub fn project_series(seq: &SchoenbergSequence, target: Dimension) -> Result<SchoenbergSequence> {
    let n = seq.n_max();
    let rule = QuadratureRule::gauss(target, n + 2)?;
    let src = seq.clone();
    let f = IsotropicFunction::new("projection", move |t| evaluate_series(&src, t));
    let mut out = schoenberg_coefficients(&f, target, n, &rule)?;
    out.tail_bound = 0.0;
    Ok(out)
}

/// `<ψ, E_{d,n}> = b_{d,n} c̄_{d,n} / α_d` for `d ≥ 2`; for `d = 1`,
/// `<ψ, E_{1,0}> = 2π b_{1,0}` and `<ψ, E_{1,n}> = (2π/√2) b_{1,n}`.
pub fn gegenbauer_from_schoenberg(seq: &SchoenbergSequence) -> GegenbauerCoeffs {
    let a = seq
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, b)| b / schoenberg_per_gegenbauer(seq.d, n))
        .collect();
    GegenbauerCoeffs::new(seq.d, a)
}

/// Inverse of [`gegenbauer_from_schoenberg`]. The result is an exact finite series.
pub fn schoenberg_from_gegenbauer(g: &GegenbauerCoeffs) -> SchoenbergSequence {
    let b =
        g.a.iter()
            .enumerate()
            .map(|(n, a)| a * schoenberg_per_gegenbauer(g.d, n))
            .collect();
    SchoenbergSequence::new(g.d, b)
}

/// Heuristic strict positive definiteness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrictPd {
    /// Enough strictly positive even- and odd-index coefficients in the truncation.
    Likely {
        even_positive: usize,
        odd_positive: usize,
    },
    /// Too few positive coefficients of one parity to say anything.
    Inconclusive {
        even_positive: usize,
        odd_positive: usize,
    },
    /// No coefficient criterion is available on the circle.
    Unsupported,
}

impl fmt::Display for StrictPd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrictPd::Likely { even_positive, odd_positive } => write!(
                f,
                "LIKELY (heuristic; {even_positive} even / {odd_positive} odd positive coefficients)"
            ),
            StrictPd::Inconclusive { even_positive, odd_positive } => write!(
                f,
                "INCONCLUSIVE ({even_positive} even / {odd_positive} odd positive coefficients)"
            ),
            StrictPd::Unsupported => write!(f, "UNSUPPORTED (d = 1)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdReport {
    pub min_coefficient: f64,
    pub min_index: usize,
    pub tol: f64,
    pub nonneg: bool,
    pub strict: StrictPd,
}

/// Minimum number of positive coefficients of each parity for a `Likely` verdict.
pub const DEFAULT_PARITY_THRESHOLD: usize = 3;

/// Nonnegativity check plus the parity-count heuristic for strict positive definiteness.
pub fn pd_check(seq: &SchoenbergSequence, tol: f64) -> PdReport {
    pd_check_with_threshold(seq, tol, DEFAULT_PARITY_THRESHOLD)
}

pub fn pd_check_with_threshold(seq: &SchoenbergSequence, tol: f64, threshold: usize) -> PdReport {
    let (min_index, min_coefficient) =
        seq.coeffs
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (n, b)| if b < acc.1 { (n, b) } else { acc },
            );
    let nonneg = seq.coeffs.iter().all(|b| *b >= -tol);
    let strict = if seq.d.get() == 1 {
        StrictPd::Unsupported
    } else {
        let count = |parity: usize| {
            seq.coeffs
                .iter()
                .enumerate()
                .filter(|(n, b)| n % 2 == parity && **b > tol)
                .count()
        };
        let (even_positive, odd_positive) = (count(0), count(1));
        if even_positive >= threshold && odd_positive >= threshold {
            StrictPd::Likely {
                even_positive,
                odd_positive,
            }
        } else {
            StrictPd::Inconclusive {
                even_positive,
                odd_positive,
            }
        }
    };
    PdReport {
        min_coefficient,
        min_index,
        tol,
        nonneg,
        strict,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    /// `b_n ≥ α_n b_{n+1}` for every checked `n ≥ 1`.
    pub hypothesis_holds: bool,
    pub violations: Vec<usize>,
    /// `n b_n` for `n = 0..=N`.
    pub trajectory: Vec<f64>,
    /// The trajectory does not increase over the second half of the range.
    pub eventually_decreasing: bool,
    /// `N b_N`.
    pub boundary: f64,
}

/// Default ratio sequence `α_n = 1 - 1/(n + 2)`: increasing to 1 with `α_n^n → e^{-1}`.
pub fn default_ratio(n: usize) -> f64 {
    1.0 - 1.0 / (n as f64 + 2.0)
}

pub fn tail_decay_check(seq: &SchoenbergSequence) -> TailReport {
    tail_decay_check_with(seq, default_ratio)
}

/// Checks `b_n ≥ α_n b_{n+1}` for `1 ≤ n < N` and reports the trajectory `n b_n`.
pub fn tail_decay_check_with<A: Fn(usize) -> f64>(
    seq: &SchoenbergSequence,
    alpha: A,
) -> TailReport {
    let b = &seq.coeffs;
    let violations: Vec<usize> = (1..b.len().saturating_sub(1))
        .filter(|&n| b[n] < alpha(n) * b[n + 1])
        .collect();
    let trajectory: Vec<f64> = b.iter().enumerate().map(|(n, bn)| n as f64 * bn).collect();
    let half = trajectory.len() / 2;
    let eventually_decreasing = trajectory[half.max(1).min(trajectory.len())..]
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    TailReport {
        hypothesis_holds: violations.is_empty(),
        violations,
        boundary: trajectory.last().copied().unwrap_or(0.0),
        trajectory,
        eventually_decreasing,
    }
}

/// Circle coefficients of the triangular function `max{0, 1 - θ/c}`:
/// `b_{1,0} = c/(2π)`, `b_{1,n} = 2(1 - cos(nc)) / (π n² c)`.
pub fn truncated_power_circle_coeffs(c: f64, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                c / (2.0 * PI)
            } else {
                let nf = n as f64;
                2.0 * (1.0 - (nf * c).cos()) / (PI * nf * nf * c)
            }
        })
        .collect()
}
