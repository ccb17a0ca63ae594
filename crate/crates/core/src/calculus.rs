//! Derivatives of Schoenberg series, the coefficient shift `τ_k`, the turning-bands pair
//! linking `S^d` and `S^{d+2}`, and the odd-dimensional roughness construction.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gegenbauer::normalized_derivative_table_angle;
use crate::schoenberg::{
    default_negative_tol, evaluate_series, project_series, truncated_power_circle_coeffs,
    SchoenbergSequence,
};
use crate::sphere::{Dimension, GaussLegendre};

/// `(β∘τ_k)_n = β_{n-k}`, with zeros below index `k` when `k > 0`.
pub fn shift_sequence(beta: &[f64], k: isize) -> Vec<f64> {
    if k >= 0 {
        let mut out = vec![0.0; k as usize];
        out.extend_from_slice(beta);
        out
    } else {
        beta.iter().skip(k.unsigned_abs()).copied().collect()
    }
}

/// `ψ'(θ)` of a truncated series, differentiated term by term.
pub fn evaluate_series_derivative(seq: &SchoenbergSequence, theta: f64) -> f64 {
    if seq.coeffs.is_empty() {
        return 0.0;
    }
    let dr = normalized_derivative_table_angle(seq.d.lambda(), theta, seq.n_max());
    seq.coeffs.iter().zip(&dr).map(|(b, r)| b * r).sum()
}

/// `ψ' = (f₁ - f₂) / sin θ` with `f₁, f₂` Schoenberg series in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeDecomposition {
    pub d: Dimension,
    pub f1: SchoenbergSequence,
    pub f2: SchoenbergSequence,
    /// Some input coefficient was below `-tol`: the inputs do not describe a member
    /// of the positive definite class and `f₁, f₂` need not be nonnegative.
    pub negative_input: bool,
}

impl DerivativeDecomposition {
    pub fn derivative(&self, theta: f64) -> f64 {
        (self.f1.eval(theta) - self.f2.eval(theta)) / theta.sin()
    }
}

/// Builds `β⁽¹⁾` from the `S^{d+2}` coefficients and `β⁽²⁾` from the `S^d` coefficients:
///
/// ```text
/// β⁽¹⁾_0 = 0,  β⁽¹⁾_n = d (n-1) / (n+d-1) · b_{d+2,n-1}
/// β⁽²⁾_n = d (2n+d-1)(n+1) / ((2n+d+1)(n+d-1)) · b_{d,n+1}
/// ```
///
/// with `β⁽²⁾_0 = b_{1,1} / 2` on the circle.
pub fn derivative_decomposition(
    psi_d: &SchoenbergSequence,
    psi_d2: &SchoenbergSequence,
) -> Result<DerivativeDecomposition> {
    let d = psi_d.d;
    if psi_d2.d != d.raised(2) {
        return Err(Error::DimensionMismatch {
            expected: d.get() + 2,
            found: psi_d2.d.get(),
        });
    }
    let df = d.get() as f64;
    let b_up = &psi_d2.coeffs;
    let b = &psi_d.coeffs;
    let beta1: Vec<f64> = (0..=b_up.len())
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                let nf = n as f64;
                df * (nf - 1.0) / (nf + df - 1.0) * b_up[n - 1]
            }
        })
        .collect();
    let beta2: Vec<f64> = (0..b.len().saturating_sub(1))
        .map(|n| {
            let nf = n as f64;
            if d.get() == 1 && n == 0 {
                0.5 * b[1]
            } else {
                df * (2.0 * nf + df - 1.0) * (nf + 1.0) / ((2.0 * nf + df + 1.0) * (nf + df - 1.0))
                    * b[n + 1]
            }
        })
        .collect();
    let negative_input = b.iter().any(|x| *x < -default_negative_tol(b))
        || b_up.iter().any(|x| *x < -default_negative_tol(b_up));
    Ok(DerivativeDecomposition {
        d,
        f1: SchoenbergSequence::new(d, beta1),
        f2: SchoenbergSequence::new(d, beta2),
        negative_input,
    })
}

/// Decomposition of the finite series `psi_d2` on `S^{d+2}`, re-expanded exactly on `S^d`.
///
/// Both inputs then describe the same polynomial, so no truncation terms are lost and
/// `(f₁ - f₂) / sin θ` equals the derivative of `psi_d2` up to rounding.
pub fn decompose_series(psi_d2: &SchoenbergSequence) -> Result<DerivativeDecomposition> {
    if psi_d2.d.get() < 3 {
        return Err(Error::InvalidDimension(psi_d2.d.get()));
    }
    let d = Dimension::new(psi_d2.d.get() - 2)?;
    let psi_d = project_series(psi_d2, d)?;
    derivative_decomposition(&psi_d, psi_d2)
}

/// Number of continuous derivatives guaranteed on `S^d`: `⌊(d-1)/2⌋`.
pub fn iterated_smoothness_order(d: Dimension) -> usize {
    (d.get() - 1) / 2
}

/// `ψ_{d+2}(β∘τ_{-1}, ·)` as a series on `S^{d+2}`.
pub fn turning_bands_series(beta: &SchoenbergSequence) -> SchoenbergSequence {
    let shifted = shift_sequence(&beta.coeffs, -1);
    let mut s = SchoenbergSequence::new(beta.d.raised(2), shifted);
    s.tail_bound = beta.tail_bound;
    s
}

/// `ψ_{d+2}(β∘τ_{-1}, r) = d (sin r)^{-d} ∫_0^r (sin θ)^{d-1} (ψ_d(β, θ) - β_0) dθ`.
///
/// The integrand has zero mean over `[0, π]`, so for `r > π/2` the integral is taken
/// over `[r, π]` with the opposite sign. At `r = 0` and `r = π` the series is
/// evaluated directly.
pub fn turning_bands_up(beta: &SchoenbergSequence, r: f64) -> f64 {
    turning_bands_up_with(beta, r, default_turning_bands_panels(beta))
}

/// Gauss–Legendre order per panel used by [`turning_bands_up`].
pub const TURNING_BANDS_ORDER: usize = 32;

/// Panel count of [`turning_bands_up`]: enough that each panel sees a polynomial of
/// modest degree in `θ`.
pub fn default_turning_bands_panels(beta: &SchoenbergSequence) -> usize {
    beta.len() / 24 + 2
}

/// [`turning_bands_up`] with an explicit number of quadrature panels.
pub fn turning_bands_up_with(beta: &SchoenbergSequence, r: f64, panels: usize) -> f64 {
    let d = beta.d.get();
    let s = r.sin();
    if r <= 0.0 || r == PI || s == 0.0 {
        return evaluate_series(&turning_bands_series(beta), r);
    }
    let b0 = beta.coeffs.first().copied().unwrap_or(0.0);
    let integrand = |t: f64| t.sin().powi(d as i32 - 1) * (evaluate_series(beta, t) - b0);
    let gl = GaussLegendre::new(TURNING_BANDS_ORDER);
    let panels = panels.max(1);
    let integral = if r <= PI / 2.0 {
        gl.integrate_composite(0.0, r, panels, integrand)
    } else {
        -gl.integrate_composite(r, PI, panels, integrand)
    };
    d as f64 * integral / s.powi(d as i32)
}

/// `β_0 + cos r ψ_{d+2}(β∘τ_{-1}, r) + (1/d) sin r ψ'_{d+2}(β∘τ_{-1}, r)`, which equals
/// `ψ_d(β, r)`.
pub fn turning_bands_down(beta: &SchoenbergSequence, r: f64) -> f64 {
    let up = turning_bands_series(beta);
    let b0 = beta.coeffs.first().copied().unwrap_or(0.0);
    b0 + r.cos() * evaluate_series(&up, r)
        + r.sin() / beta.d.get() as f64 * evaluate_series_derivative(&up, r)
}

/// The right-hand side of [`turning_bands_down`] with `ψ_{d+2}` and its derivative taken
/// from [`turning_bands_up`] (derivative by Richardson-extrapolated central differences
/// with step `h`), so that composing both directions can be compared with `ψ_d(β, r)`.
pub fn turning_bands_down_after_up(beta: &SchoenbergSequence, r: f64, h: f64) -> f64 {
    let up = |x: f64| turning_bands_up(beta, x);
    let b0 = beta.coeffs.first().copied().unwrap_or(0.0);
    b0 + r.cos() * up(r) + r.sin() / beta.d.get() as f64 * richardson_derivative(up, r, h)
}

/// `f'(x)` from central differences at `h` and `h/2`, combined to fourth order.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let h2 = h / 2.0;
    let c2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    (4.0 * c2 - c1) / 3.0
}

pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Schoenberg sequence on `S^d` (odd `d ≥ 3`) of `β∘τ_{-(d-1)/2}`, where `β` are the circle
/// coefficients of the triangular function `max{0, 1 - θ/c}`.
///
/// The result has `(d-1)/2` continuous derivatives and a kink in the next one at `θ = c`.
pub fn rough_example(d: Dimension, c: f64, n_max: usize) -> Result<SchoenbergSequence> {
    let dv = d.get();
    if dv.is_multiple_of(2) {
        return Err(Error::EvenDimension(dv));
    }
    if dv < 3 {
        return Err(Error::InvalidDimension(dv));
    }
    if !(c > 0.0 && c < PI) {
        return Err(Error::KernelParameter(format!("c = {c} outside (0, pi)")));
    }
    let k = (dv - 1) / 2;
    let beta = truncated_power_circle_coeffs(c, n_max + k);
    let dropped: f64 = beta[..k].iter().sum();
    Ok(SchoenbergSequence::from_truncation(
        d,
        shift_sequence(&beta, -(k as isize)),
        1.0 - dropped,
    ))
}

/// Finite-difference weights for the `m`-th derivative at `x0` on the given nodes.
pub fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// One-sided estimate of the `order`-th derivative at `x` using `x, x ± h, …, x ± (order+1)h`
/// on the side given by `sign`.
pub fn one_sided_derivative<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    order: usize,
    h: f64,
    sign: f64,
) -> f64 {
    let nodes: Vec<f64> = (0..=order + 1).map(|j| x + sign * j as f64 * h).collect();
    let w = fd_weights(x, &nodes, order);
    nodes.iter().zip(&w).map(|(t, wi)| wi * f(*t)).sum()
}

/// Left and right one-sided derivative estimates at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkProbe {
    pub at: f64,
    pub order: usize,
    pub h: f64,
    pub left: f64,
    pub right: f64,
}

impl KinkProbe {
    pub fn measure<F: Fn(f64) -> f64>(f: F, at: f64, order: usize, h: f64) -> Self {
        Self {
            at,
            order,
            h,
            left: one_sided_derivative(&f, at, order, h, -1.0),
            right: one_sided_derivative(&f, at, order, h, 1.0),
        }
    }

    pub fn jump(&self) -> f64 {
        (self.right - self.left).abs()
    }

    pub fn relative_jump(&self) -> f64 {
        let scale = self.left.abs().max(self.right.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.jump() / scale
        }
    }
}

/// Relative jump below which a derivative counts as continuous.
pub const CONTINUITY_TOL: f64 = 1e-3;
/// Factor by which a kink must exceed the smooth-point baseline.
pub const KINK_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughnessReport {
    /// Derivative of order `(d-1)/2` across `c`.
    pub continuity: KinkProbe,
    /// Derivative of order `(d-1)/2 + 1` across `c`.
    pub kink: KinkProbe,
    /// Derivative of order `(d-1)/2 + 1` at a smooth reference point.
    pub baseline: KinkProbe,
}

impl RoughnessReport {
    pub fn continuous(&self) -> bool {
        self.continuity.relative_jump() < CONTINUITY_TOL
    }

    pub fn kinked(&self) -> bool {
        self.kink.jump() > KINK_FACTOR * self.baseline.jump()
    }
}

/// Probes the series of [`rough_example`] around `c` and at the reference point `c/2`.
pub fn probe_roughness(seq: &SchoenbergSequence, c: f64, h: f64) -> RoughnessReport {
    let m = iterated_smoothness_order(seq.d);
    let f = |t: f64| evaluate_series(seq, t);
    RoughnessReport {
        continuity: KinkProbe::measure(f, c, m, h),
        kink: KinkProbe::measure(f, c, m + 1, h),
        baseline: KinkProbe::measure(f, c / 2.0, m + 1, h),
    }
}
