//! Spherical convolution of isotropic functions in the Gegenbauer basis.
//!
//! With `a_n = <f, E_{d,n}>` the convolution is diagonal,
//! `(f ⊛ g)_n = c̄_{d,n} a_n b_n`, so roots, norms and products reduce to
//! componentwise arithmetic. [`direct_convolution_oracle`] evaluates the defining
//! sphere integral by brute-force quadrature for `d ≤ 2`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::gegenbauer::{gegenbauer_at_one, normalized_table, PolyIndex};
use crate::schoenberg::IsotropicFunction;
use crate::sphere::{basis_constant, conv_eigen, sphere_surface, Dimension, GaussLegendre};

/// Coefficients `a_n = <f, E_{d,n}>` of an isotropic function.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerCoeffs {
    pub d: Dimension,
    pub a: Vec<f64>,
}

impl GegenbauerCoeffs {
    pub fn new(d: Dimension, a: Vec<f64>) -> Self {
        Self { d, a }
    }

    pub fn zeros(d: Dimension, len: usize) -> Self {
        Self::new(d, vec![0.0; len])
    }

    /// `E_{d,n}` truncated to `len` entries.
    pub fn one_hot(d: Dimension, n: usize, len: usize) -> Self {
        let mut a = vec![0.0; len.max(n + 1)];
        a[n] = 1.0;
        Self::new(d, a)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.d, self.a.iter().map(|x| x * s).collect())
    }

    /// `Σ_n a_n c_{d,n} C_n^{(d-1)/2}(cos θ)`.
    pub fn eval(&self, theta: f64) -> f64 {
        if self.a.is_empty() {
            return 0.0;
        }
        let d = self.d;
        let r = normalized_table(d.lambda(), theta.cos(), self.a.len() - 1);
        self.a
            .iter()
            .zip(&r)
            .enumerate()
            .map(|(n, (a, rn))| {
                a * basis_constant(d, n)
                    * gegenbauer_at_one(PolyIndex::for_dimension(n, d.get()))
                    * rn
            })
            .sum()
    }
}

fn check_same(f: &GegenbauerCoeffs, g: &GegenbauerCoeffs) -> Result<()> {
    if f.d != g.d {
        return Err(Error::DimensionMismatch {
            expected: f.d.get(),
            found: g.d.get(),
        });
    }
    Ok(())
}

/// `(f ⊛ g)_n = c̄_{d,n} a_n b_n`, truncated to the shorter input.
pub fn convolve(f: &GegenbauerCoeffs, g: &GegenbauerCoeffs) -> Result<GegenbauerCoeffs> {
    check_same(f, g)?;
    let a =
        f.a.iter()
            .zip(&g.a)
            .enumerate()
            .map(|(n, (x, y))| conv_eigen(f.d, n) * (x * y))
            .collect();
    Ok(GegenbauerCoeffs::new(f.d, a))
}

/// `(g ⊛ g)_n = c̄_{d,n} g_n²`.
pub fn self_convolve_coeffs(g: &GegenbauerCoeffs) -> GegenbauerCoeffs {
    let a =
        g.a.iter()
            .enumerate()
            .map(|(n, x)| conv_eigen(g.d, n) * (x * x))
            .collect();
    GegenbauerCoeffs::new(g.d, a)
}

pub fn l2_norm(f: &GegenbauerCoeffs) -> f64 {
    f.a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn inner(f: &GegenbauerCoeffs, g: &GegenbauerCoeffs) -> Result<f64> {
    check_same(f, g)?;
    Ok(f.a.iter().zip(&g.a).map(|(x, y)| x * y).sum())
}

/// Uniform bound `σ_d^{-1} ||g|| ||g - g_N||` on `|g ⊛ g - (g ⊛ g)_N|`, where `g_N`
/// keeps the indices `0..=n_keep`.
pub fn uniform_tail_bound(g: &GegenbauerCoeffs, n_keep: usize) -> f64 {
    let tail: f64 = g.a.iter().skip(n_keep + 1).map(|x| x * x).sum();
    l2_norm(g) * tail.sqrt() / sphere_surface(g.d)
}

/// Signs `σ_n ∈ {-1, +1}` selecting one of the convolution roots.
#[derive(Debug, Clone, PartialEq)]
pub struct SignSequence {
    signs: Vec<f64>,
}

impl SignSequence {
    pub fn new(signs: Vec<f64>) -> Result<Self> {
        if let Some(s) = signs.iter().find(|s| **s != 1.0 && **s != -1.0) {
            return Err(Error::InvalidSign(*s));
        }
        Ok(Self { signs })
    }

    /// `σ_n = 1`.
    pub fn ones(len: usize) -> Self {
        Self {
            signs: vec![1.0; len],
        }
    }

    /// `σ_n = (-1)^n`.
    pub fn alternating(len: usize) -> Self {
        Self {
            signs: (0..len)
                .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    /// `σ_n = (-1)^{⌊n/2⌋}`.
    pub fn alternating_pairs(len: usize) -> Self {
        Self {
            signs: (0..len)
                .map(|n| if (n / 2) % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Default relative tolerance for treating negative coefficients as rounding noise.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// The root `g_n = σ_n c̄_{d,n}^{-1/2} a_n^{1/2}` of `f`, so that `g ⊛ g = f`.
pub fn convolution_root(f: &GegenbauerCoeffs, signs: &SignSequence) -> Result<GegenbauerCoeffs> {
    convolution_root_with_tol(f, signs, DEFAULT_ROOT_TOL)
}

/// As [`convolution_root`]; entries in `[-tol · max|a|, 0)` are clamped to zero and
/// anything more negative is rejected.
pub fn convolution_root_with_tol(
    f: &GegenbauerCoeffs,
    signs: &SignSequence,
    tol: f64,
) -> Result<GegenbauerCoeffs> {
    if signs.len() < f.len() {
        return Err(Error::SignSequenceTooShort {
            needed: f.len(),
            found: signs.len(),
        });
    }
    let scale = f.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut g = Vec::with_capacity(f.len());
    for (n, (&a, &s)) in f.a.iter().zip(&signs.signs).enumerate() {
        if a < -tol * scale {
            return Err(Error::NegativeCoefficient { index: n, value: a });
        }
        g.push(s * (a.max(0.0) / conv_eigen(f.d, n)).sqrt());
    }
    Ok(GegenbauerCoeffs::new(f.d, g))
}

/// Verdict of the finite-range root existence heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootVerdict {
    ConvergentAtResolution,
    DivergentTrend,
    Inconclusive,
}

impl fmt::Display for RootVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootVerdict::ConvergentAtResolution => "CONVERGENT-AT-RESOLUTION",
            RootVerdict::DivergentTrend => "DIVERGENT-TREND",
            RootVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    /// `S_N = Σ_{n≤N} c̄_{d,n}^{-1} |a_n|`.
    pub partial_sums: Vec<f64>,
    /// Share of the final partial sum contributed by the last quarter of the terms.
    pub tail_share: f64,
    pub verdict: RootVerdict,
}

impl RootReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Thresholds on the last-quarter share: below `convergent` the sums look settled,
/// above `divergent` they still grow steadily.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootThresholds {
    pub convergent: f64,
    pub divergent: f64,
}

impl Default for RootThresholds {
    fn default() -> Self {
        Self {
            convergent: 0.05,
            divergent: 0.2,
        }
    }
}

pub fn root_exists(f: &GegenbauerCoeffs, n_max: usize) -> RootReport {
    root_exists_with(f, n_max, RootThresholds::default())
}

pub fn root_exists_with(f: &GegenbauerCoeffs, n_max: usize, th: RootThresholds) -> RootReport {
    let mut partial_sums = Vec::new();
    let mut s = 0.0;
    for (n, a) in f.a.iter().enumerate().take(n_max.saturating_add(1)) {
        s += a.abs() / conv_eigen(f.d, n);
        partial_sums.push(s);
    }
    let len = partial_sums.len();
    if len == 0 {
        return RootReport {
            partial_sums,
            tail_share: 0.0,
            verdict: RootVerdict::Inconclusive,
        };
    }
    let cut = len - len / 4;
    let before = if cut == 0 { 0.0 } else { partial_sums[cut - 1] };
    let tail_share = if s > 0.0 { (s - before) / s } else { 0.0 };
    let verdict = if len < 4 && tail_share > 0.0 {
        RootVerdict::Inconclusive
    } else if tail_share < th.convergent {
        RootVerdict::ConvergentAtResolution
    } else if tail_share > th.divergent {
        RootVerdict::DivergentTrend
    } else {
        RootVerdict::Inconclusive
    };
    RootReport {
        partial_sums,
        tail_share,
        verdict,
    }
}

/// Discretization of [`direct_convolution_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Panels over the full circle for `d = 1`.
    pub panels_circle: usize,
    /// Panels over the polar angle for `d = 2`.
    pub panels_polar: usize,
    /// Panels over the azimuth for `d = 2`.
    pub panels_azimuth: usize,
    /// Gauss–Legendre order per panel.
    pub order: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            panels_circle: 2048,
            panels_polar: 512,
            panels_azimuth: 512,
            order: 4,
        }
    }
}

/// `(f ⊛ g)(u, v) = ∫_{S^d} f̄(θ(u,w)) ḡ(θ(w,v)) dw` at `θ(u,v) = theta`.
pub fn direct_convolution_oracle(
    fbar: &IsotropicFunction,
    gbar: &IsotropicFunction,
    d: Dimension,
    theta: f64,
) -> Result<f64> {
    direct_convolution_oracle_with(fbar, gbar, d, theta, OracleConfig::default())
}

pub fn direct_convolution_oracle_with(
    fbar: &IsotropicFunction,
    gbar: &IsotropicFunction,
    d: Dimension,
    theta: f64,
    cfg: OracleConfig,
) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!(
            "angle {theta} outside [0, pi]"
        )));
    }
    let gl = GaussLegendre::new(cfg.order);
    match d.get() {
        1 => Ok(circle_oracle(fbar, gbar, theta, cfg.panels_circle, &gl)),
        2 => Ok(sphere_oracle(fbar, gbar, theta, cfg, &gl)),
        other => Err(Error::InvalidDimension(other)),
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let x = (a - b).rem_euclid(2.0 * PI);
    x.min(2.0 * PI - x)
}

/// Splits `[lo, hi]` at `cuts`, returning sorted, deduplicated segment ends.
fn segments(lo: f64, hi: f64, cuts: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = cuts
        .into_iter()
        .filter(|c| c.is_finite() && *c > lo && *c < hi)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    pts
}

/// Composite Gauss–Legendre over the segments, distributing `panels` by length.
fn integrate_segments<F: Fn(f64) -> f64>(
    gl: &GaussLegendre,
    pts: &[f64],
    panels: usize,
    f: F,
) -> f64 {
    let span = pts[pts.len() - 1] - pts[0];
    pts.windows(2)
        .map(|w| {
            let p = ((panels as f64 * (w[1] - w[0]) / span).ceil() as usize).max(1);
            gl.integrate_composite(w[0], w[1], p, &f)
        })
        .sum()
}

fn circle_oracle(
    f: &IsotropicFunction,
    g: &IsotropicFunction,
    theta: f64,
    panels: usize,
    gl: &GaussLegendre,
) -> f64 {
    let tau = 2.0 * PI;
    let mut cuts = vec![PI, theta, (theta + PI).rem_euclid(tau)];
    for &b in f.breakpoints() {
        cuts.push(b);
        cuts.push(tau - b);
    }
    for &b in g.breakpoints() {
        cuts.push((theta + b).rem_euclid(tau));
        cuts.push((theta - b).rem_euclid(tau));
    }
    let pts = segments(0.0, tau, cuts);
    integrate_segments(gl, &pts, panels, |phi| {
        f.eval(circle_distance(phi, 0.0)) * g.eval(circle_distance(phi, theta))
    })
}

/// `u` at the north pole, `v` at polar angle `theta` and azimuth zero, `w` at
/// polar angle `α` and azimuth `β`; the azimuthal integral is folded onto `[0, π]`.
fn sphere_oracle(
    f: &IsotropicFunction,
    g: &IsotropicFunction,
    theta: f64,
    cfg: OracleConfig,
    gl: &GaussLegendre,
) -> f64 {
    let (st, ct) = theta.sin_cos();
    let inner = |alpha: f64| -> f64 {
        let (sa, ca) = alpha.sin_cos();
        let dist = |beta: f64| (ca * ct + sa * st * beta.cos()).clamp(-1.0, 1.0).acos();
        let denom = sa * st;
        let cuts = g.breakpoints().iter().filter_map(|&b| {
            if denom <= 0.0 {
                return None;
            }
            let c = (b.cos() - ca * ct) / denom;
            (c > -1.0 && c < 1.0).then(|| c.acos())
        });
        let pts = segments(0.0, PI, cuts.collect::<Vec<_>>());
        2.0 * integrate_segments(gl, &pts, cfg.panels_azimuth, |beta| g.eval(dist(beta)))
    };
    let mut cuts = vec![theta, PI - theta];
    cuts.extend_from_slice(f.breakpoints());
    for &b in g.breakpoints() {
        cuts.push((theta - b).abs());
        cuts.push(theta + b);
        cuts.push(2.0 * PI - theta - b);
    }
    let pts = segments(0.0, PI, cuts);
    integrate_segments(gl, &pts, cfg.panels_polar, |alpha| {
        alpha.sin() * f.eval(alpha) * inner(alpha)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn orthogonal_basis_elements() {
        let d = dim(3);
        let c = convolve(
            &GegenbauerCoeffs::one_hot(d, 2, 6),
            &GegenbauerCoeffs::one_hot(d, 3, 6),
        )
        .unwrap();
        assert!(c.a.iter().all(|x| *x == 0.0));
        let e5 = GegenbauerCoeffs::one_hot(dim(1), 5, 6);
        let c = convolve(&e5, &e5).unwrap();
        assert_relative_eq!(c.a[5], std::f64::consts::FRAC_1_SQRT_2);
        assert!(convolve(&e5, &GegenbauerCoeffs::one_hot(dim(2), 1, 3)).is_err());
    }

    #[test]
    fn truncates_to_shorter() {
        let d = dim(2);
        let c = convolve(
            &GegenbauerCoeffs::new(d, vec![1.0; 4]),
            &GegenbauerCoeffs::new(d, vec![1.0; 7]),
        )
        .unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn self_convolution() {
        let d = dim(1);
        assert_eq!(
            self_convolve_coeffs(&GegenbauerCoeffs::one_hot(d, 0, 1)).a,
            vec![1.0]
        );
        let g = GegenbauerCoeffs::new(dim(2), vec![0.3, -1.2, 0.7]);
        assert_eq!(self_convolve_coeffs(&g), convolve(&g, &g).unwrap());
        assert!(self_convolve_coeffs(&GegenbauerCoeffs::zeros(d, 4))
            .a
            .iter()
            .all(|x| *x == 0.0));
    }

    #[test]
    fn root_fixed_point_and_errors() {
        let d = dim(2);
        let f = GegenbauerCoeffs::new(d, vec![conv_eigen(d, 0), 0.0]);
        let g = convolution_root(&f, &SignSequence::ones(2)).unwrap();
        assert_relative_eq!(g.a[0], 1.0, max_relative = 1e-15);
        assert_eq!(g.a[1], 0.0);
        assert!(matches!(
            convolution_root(
                &GegenbauerCoeffs::new(d, vec![1.0, -0.5]),
                &SignSequence::ones(2)
            ),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
        assert!(matches!(
            convolution_root(&f, &SignSequence::ones(1)),
            Err(Error::SignSequenceTooShort {
                needed: 2,
                found: 1
            })
        ));
        let noisy = GegenbauerCoeffs::new(d, vec![1.0, -1e-14]);
        assert_eq!(
            convolution_root(&noisy, &SignSequence::ones(2)).unwrap().a[1],
            0.0
        );
    }

    #[test]
    fn sign_sequences() {
        assert_eq!(
            SignSequence::alternating(4).as_slice(),
            &[1.0, -1.0, 1.0, -1.0]
        );
        assert_eq!(
            SignSequence::alternating_pairs(5).as_slice(),
            &[1.0, 1.0, -1.0, -1.0, 1.0]
        );
        assert!(SignSequence::new(vec![1.0, 0.5]).is_err());
    }

    #[test]
    fn norms_and_tail_bound() {
        let d = dim(2);
        let e = GegenbauerCoeffs::one_hot(d, 3, 5);
        assert_eq!(l2_norm(&e), 1.0);
        assert_eq!(uniform_tail_bound(&e, 10), 0.0);
        assert_relative_eq!(uniform_tail_bound(&e, 0), 1.0 / (4.0 * PI));
        let f = GegenbauerCoeffs::new(d, vec![0.5, -0.25, 2.0]);
        assert_relative_eq!(inner(&f, &f).unwrap(), l2_norm(&f).powi(2));
    }

    #[test]
    fn root_heuristic() {
        let d = dim(2);
        let r = root_exists(
            &GegenbauerCoeffs::new(d, vec![2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            64,
        );
        assert_eq!(r.verdict, RootVerdict::ConvergentAtResolution);
        assert_relative_eq!(r.total(), 2.0 / conv_eigen(d, 0));
        let flat = GegenbauerCoeffs::new(d, (0..64).map(|n| conv_eigen(d, n)).collect());
        assert_eq!(root_exists(&flat, 63).verdict, RootVerdict::DivergentTrend);
    }

    #[test]
    fn basis_function_values() {
        // E_{2,1}(θ) = c_{2,1} cos θ.
        let e = GegenbauerCoeffs::one_hot(dim(2), 1, 2);
        assert_relative_eq!(
            e.eval(0.4),
            basis_constant(dim(2), 1) * 0.4f64.cos(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn oracle_simple_cases() {
        let one = IsotropicFunction::new("one", |_| 1.0);
        let cfg = OracleConfig {
            panels_polar: 32,
            panels_azimuth: 32,
            ..OracleConfig::default()
        };
        let v = direct_convolution_oracle_with(&one, &one, dim(2), 0.8, cfg).unwrap();
        assert_relative_eq!(v, 4.0 * PI, max_relative = 1e-12);

        let r = 1.2;
        let cap = IsotropicFunction::new("cap", move |t| if t <= r { 1.0 } else { 0.0 })
            .with_breakpoints(vec![r]);
        let at0 = direct_convolution_oracle(&cap, &cap, dim(1), 0.0).unwrap();
        assert_relative_eq!(at0, 2.4, max_relative = 1e-12);
        let at1 = direct_convolution_oracle(&cap, &cap, dim(1), 1.0).unwrap();
        assert_relative_eq!(at1, 1.4, max_relative = 1e-12);
        assert!(direct_convolution_oracle(&cap, &cap, dim(3), 1.0).is_err());
    }
}
