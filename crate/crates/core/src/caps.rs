//! Spherical caps, their normalized self-convolution `ι_d`, and parametric kernels.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::convolution::GegenbauerCoeffs;
use crate::error::{Error, Result};
use crate::gegenbauer::{gegenbauer_at_one, normalized_table, PolyIndex};
use crate::schoenberg::{IsotropicFunction, SchoenbergSequence};
use crate::special::ln_gamma;
use crate::sphere::{basis_constant, sphere_surface, surface_measure, Dimension, GaussLegendre};

/// A cap of geodesic radius `r ∈ (0, π/2]` on `S^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSpec {
    d: Dimension,
    r: f64,
}

impl CapSpec {
    pub fn new(d: Dimension, r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= PI / 2.0) {
            return Err(Error::CapRadius(r));
        }
        Ok(Self { d, r })
    }

    pub fn d(&self) -> Dimension {
        self.d
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// `∫_0^x (sin t)^k dt` by the reduction `I_k = -sin^{k-1} x cos x / k + (k-1)/k I_{k-2}`.
pub fn sine_power_partial(k: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let mut even = x;
    let mut odd = 1.0 - c;
    if k == 0 {
        return even;
    }
    if k == 1 {
        return odd;
    }
    let mut result = 0.0;
    for j in 2..=k {
        let jf = j as f64;
        let prev = if j % 2 == 0 { even } else { odd };
        let next = -s.powi(j as i32 - 1) * c / jf + (jf - 1.0) / jf * prev;
        if j % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
        result = next;
    }
    result
}

/// Surface area `ν_d(r)` of the cap; `ν_1(r) = 2r`.
pub fn cap_normalizer(spec: &CapSpec) -> f64 {
    cap_area(spec.d, spec.r)
}

fn cap_area(d: Dimension, r: f64) -> f64 {
    if d.get() == 1 {
        return 2.0 * r;
    }
    surface_measure(d.get() - 1) * sine_power_partial(d.get() - 1, r)
}

/// Gegenbauer coefficients `ω_{d,n}` of the cap indicator `1{θ(·,·) ≤ r}`.
pub fn cap_gegenbauer(spec: &CapSpec, n_max: usize) -> GegenbauerCoeffs {
    indicator_gegenbauer(spec.d, spec.r, n_max)
}

/// The closed form behind [`cap_gegenbauer`] without the radius restriction, valid for
/// `r ∈ (0, π]`.
pub fn indicator_gegenbauer(d: Dimension, r: f64, n_max: usize) -> GegenbauerCoeffs {
    let mut a = Vec::with_capacity(n_max + 1);
    a.push(cap_area(d, r));
    if d.get() == 1 {
        a.extend((1..=n_max).map(|n| 2.0 * SQRT_2 / n as f64 * (n as f64 * r).sin()));
        return GegenbauerCoeffs::new(d, a);
    }
    let df = d.get() as f64;
    let upper = normalized_table(d.lambda() + 1.0, r.cos(), n_max.saturating_sub(1));
    let pre = sphere_surface(d)
        * surface_measure(d.get() - 1)
        * (df - 1.0)
        * r.sin().powi(d.get() as i32);
    for n in 1..=n_max {
        let nf = n as f64;
        let c_up = gegenbauer_at_one(PolyIndex::for_dimension(n - 1, d.get() + 2));
        a.push(basis_constant(d, n) * pre / (nf * (nf + df - 1.0)) * c_up * upper[n - 1]);
    }
    GegenbauerCoeffs::new(d, a)
}

/// `γ_d(r) = Γ((d-1)/2)² 2^{d-2} π^{(d-2)/2} (sin r)^{2d} / (Γ(d-1) Γ(d/2) d² ν_d(r))`.
pub fn iota_gamma(spec: &CapSpec) -> Result<f64> {
    let d = spec.d;
    if d.get() < 2 {
        return Err(Error::InvalidDimension(d.get()));
    }
    let df = d.get() as f64;
    let ln = 2.0 * ln_gamma(d.lambda()) + (df - 2.0) * 2f64.ln() + (df - 2.0) / 2.0 * PI.ln()
        - ln_gamma(df - 1.0)
        - ln_gamma(df / 2.0)
        - 2.0 * df.ln()
        + 2.0 * df * spec.r.sin().ln();
    Ok(ln.exp() / cap_normalizer(spec))
}

/// Schoenberg coefficients of `ι_d = (1_cap ⊛ 1_cap) / ν_d(r)`.
///
/// For `d ≥ 2`, `b_{d,0} = α_d ν_d(r)` and
/// `b_{d,n} = γ_d(r) (2n+d-1) C_n^{(d-1)/2}(1) (C_{n-1}^{(d+1)/2}(cos r) / C_{n-1}^{(d+1)/2}(1))²`.
/// On the circle `ι_1(θ) = max{0, 1 - θ/(2r)}`, with `b_{1,0} = r/π` and
/// `b_{1,n} = 2 sin²(nr) / (π r n²)`.
pub fn iota_schoenberg(spec: &CapSpec, n_max: usize) -> SchoenbergSequence {
    let d = spec.d;
    let r = spec.r;
    let coeffs: Vec<f64> = if d.get() == 1 {
        (0..=n_max)
            .map(|n| {
                if n == 0 {
                    r / PI
                } else {
                    let nf = n as f64;
                    2.0 * (nf * r).sin().powi(2) / (PI * r * nf * nf)
                }
            })
            .collect()
    } else {
        let df = d.get() as f64;
        let gamma = iota_gamma(spec).expect("d >= 2");
        let alpha = crate::sphere::alpha_const(d).expect("d >= 2");
        let upper = normalized_table(d.lambda() + 1.0, r.cos(), n_max.saturating_sub(1));
        (0..=n_max)
            .map(|n| {
                if n == 0 {
                    alpha * cap_normalizer(spec)
                } else {
                    let c1 = gegenbauer_at_one(PolyIndex::for_dimension(n, d.get()));
                    gamma * (2.0 * n as f64 + df - 1.0) * c1 * upper[n - 1].powi(2)
                }
            })
            .collect()
    };
    SchoenbergSequence::from_truncation(d, coeffs, 1.0)
}

/// `ι_d(θ)` evaluated geometrically as the normalized overlap of two caps.
///
/// A point at angle `α` from the first center lies in the second cap when its
/// azimuthal angle `β` on `S^{d-1}` satisfies `cos β ≥ t(α)`; the share of such `β`
/// is a ratio of sine-power integrals and the remaining `α` integral is done by
/// composite Gauss–Legendre quadrature split at the edges of the lens.
pub fn iota_eval(spec: &CapSpec, theta: f64) -> f64 {
    let d = spec.d.get();
    let r = spec.r;
    if theta >= 2.0 * r {
        return 0.0;
    }
    if d == 1 {
        return 1.0 - theta / (2.0 * r);
    }
    if theta == 0.0 {
        return 1.0;
    }
    let (st, ct) = theta.sin_cos();
    let full = sine_power_partial(d - 2, PI);
    let share = |alpha: f64| -> f64 {
        let (sa, ca) = alpha.sin_cos();
        if sa == 0.0 {
            return if alpha < r && theta <= r { 1.0 } else { 0.0 };
        }
        let t = (r.cos() - ca * ct) / (sa * st);
        if t <= -1.0 {
            1.0
        } else if t >= 1.0 {
            0.0
        } else {
            sine_power_partial(d - 2, t.acos()) / full
        }
    };
    let gl = GaussLegendre::new(16);
    let mut pts = vec![0.0, r];
    let edge = (theta - r).abs();
    if edge > 0.0 && edge < r {
        pts.insert(1, edge);
    }
    let area: f64 = pts
        .windows(2)
        .map(|w| {
            gl.integrate_composite(w[0], w[1], 64, |alpha| {
                alpha.sin().powi(d as i32 - 1) * share(alpha)
            })
        })
        .sum();
    surface_measure(d - 1) * area / cap_normalizer(spec)
}

/// `ι_d` as an evaluable function, with a breakpoint at the support edge `2r`.
pub fn iota_function(spec: &CapSpec) -> IsotropicFunction {
    let s = *spec;
    IsotropicFunction::new(format!("iota_{}(r={})", s.d, s.r), move |t| {
        iota_eval(&s, t)
    })
    .with_breakpoints(vec![2.0 * s.r])
}

/// Parametric kernel families on `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// `exp(-(θ/c)^α)`, `c > 0`, `α ∈ (0, 1]`.
    PoweredExponential { c: f64, alpha: f64 },
    /// `1 - sin(θ/2)^α`, `α ∈ (0, 2]`.
    SinePower { alpha: f64 },
    /// `max{0, 1 - θ/c}^τ`, `c ∈ (0, π)`, `τ ≥ 1`.
    TruncatedPower { c: f64, tau: f64 },
}

impl KernelFamily {
    pub fn powered_exponential(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) || !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::KernelParameter(format!(
                "powered_exponential needs c > 0 and alpha in (0, 1], got c = {c}, alpha = {alpha}"
            )));
        }
        Ok(Self::PoweredExponential { c, alpha })
    }

    pub fn sine_power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::KernelParameter(format!(
                "sine_power needs alpha in (0, 2], got {alpha}"
            )));
        }
        Ok(Self::SinePower { alpha })
    }

    pub fn truncated_power(c: f64, tau: f64) -> Result<Self> {
        if !(c > 0.0 && c < PI) || !(tau >= 1.0 && tau.is_finite()) {
            return Err(Error::KernelParameter(format!(
                "truncated_power needs c in (0, pi) and tau >= 1, got c = {c}, tau = {tau}"
            )));
        }
        Ok(Self::TruncatedPower { c, tau })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PoweredExponential { .. } => "powered_exponential",
            Self::SinePower { .. } => "sine_power",
            Self::TruncatedPower { .. } => "truncated_power",
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::TruncatedPower { c, .. } => vec![*c],
            _ => Vec::new(),
        }
    }

    pub fn to_function(&self) -> IsotropicFunction {
        let fam = *self;
        IsotropicFunction::new(fam.to_string(), move |t| kernel_eval(&fam, t))
            .with_breakpoints(fam.breakpoints())
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PoweredExponential { c, alpha } => {
                write!(f, "powered_exponential(c={c}, alpha={alpha})")
            }
            Self::SinePower { alpha } => write!(f, "sine_power(alpha={alpha})"),
            Self::TruncatedPower { c, tau } => write!(f, "truncated_power(c={c}, tau={tau})"),
        }
    }
}

pub fn kernel_eval(fam: &KernelFamily, theta: f64) -> f64 {
    match *fam {
        KernelFamily::PoweredExponential { c, alpha } => (-(theta / c).powf(alpha)).exp(),
        KernelFamily::SinePower { alpha } => 1.0 - (theta / 2.0).sin().powf(alpha),
        KernelFamily::TruncatedPower { c, tau } => (1.0 - theta / c).max(0.0).powf(tau),
    }
}

/// Positive definiteness class of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdClass {
    /// Positive definite on every sphere.
    AllSpheres,
    /// Positive definite on `S^d` for `d ≤` the given dimension.
    UpTo(usize),
}

/// One-sided derivative at `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    NegativeInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    /// Class established for the given parameters.
    pub proven: PdClass,
    /// Larger class suggested but not established, if any.
    pub conjectured: Option<PdClass>,
    pub slope_at_zero: Slope,
}

impl Membership {
    /// Whether positive definiteness on `S^d` is established.
    pub fn proven_on(&self, d: Dimension) -> bool {
        match self.proven {
            PdClass::AllSpheres => true,
            PdClass::UpTo(m) => d.get() <= m,
        }
    }
}

pub fn kernel_membership(fam: &KernelFamily) -> Membership {
    match *fam {
        KernelFamily::PoweredExponential { c, alpha } => Membership {
            proven: PdClass::AllSpheres,
            conjectured: None,
            slope_at_zero: if alpha == 1.0 {
                Slope::Finite(-1.0 / c)
            } else {
                Slope::NegativeInfinity
            },
        },
        KernelFamily::SinePower { alpha } => Membership {
            proven: PdClass::AllSpheres,
            conjectured: None,
            slope_at_zero: if alpha < 1.0 {
                Slope::NegativeInfinity
            } else if alpha == 1.0 {
                Slope::Finite(-0.5)
            } else {
                Slope::Finite(0.0)
            },
        },
        KernelFamily::TruncatedPower { c, tau } => {
            let proven = [7usize, 5, 3, 1]
                .into_iter()
                .find(|&d| tau >= (d as f64 + 1.0) / 2.0)
                .unwrap_or(1);
            let guess = (2.0 * tau - 1.0).floor() as usize;
            Membership {
                proven: PdClass::UpTo(proven),
                conjectured: (guess > proven).then_some(PdClass::UpTo(guess)),
                slope_at_zero: Slope::Finite(-tau / c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::self_convolve_coeffs;
    use crate::schoenberg::{schoenberg_coefficients, schoenberg_from_gegenbauer};
    use approx::assert_relative_eq;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn radius_is_validated() {
        assert!(CapSpec::new(dim(2), 0.0).is_err());
        assert!(CapSpec::new(dim(2), 2.0).is_err());
        assert!(CapSpec::new(dim(2), PI / 2.0).is_ok());
    }

    #[test]
    fn normalizer_values() {
        assert_eq!(cap_normalizer(&CapSpec::new(dim(1), 1.2).unwrap()), 2.4);
        assert_relative_eq!(
            cap_normalizer(&CapSpec::new(dim(2), PI / 2.0).unwrap()),
            2.0 * PI,
            max_relative = 1e-14
        );
        let small = cap_normalizer(&CapSpec::new(dim(2), 1e-4).unwrap());
        assert_relative_eq!(small / (PI * 1e-8), 1.0, max_relative = 1e-7);
        // S^3 cap: 4π (r/2 - sin 2r / 4).
        let r = 0.9;
        assert_relative_eq!(
            cap_normalizer(&CapSpec::new(dim(3), r).unwrap()),
            4.0 * PI * (r / 2.0 - (2.0 * r).sin() / 4.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn sine_power_partial_matches_quadrature() {
        let gl = GaussLegendre::new(24);
        for k in 0..9 {
            for &x in &[0.3, 1.2, PI] {
                let q = gl.integrate(0.0, x, |t| t.sin().powi(k as i32));
                assert!((sine_power_partial(k, x) - q).abs() < 1e-13, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn cap_coefficients_closed_forms() {
        assert!(indicator_gegenbauer(dim(1), PI, 1).a[1].abs() < 1e-15);
        let w = cap_gegenbauer(&CapSpec::new(dim(1), 1.2).unwrap(), 2);
        assert_relative_eq!(w.a[2], SQRT_2 * 2.4f64.sin(), max_relative = 1e-14);
    }

    #[test]
    fn cap_coefficients_against_quadrature() {
        let gl = GaussLegendre::new(32);
        let d = dim(2);
        for &r in &[0.5, 1.2] {
            let w = cap_gegenbauer(&CapSpec::new(d, r).unwrap(), 20);
            for n in 0..=20 {
                let q = gl.integrate_composite(0.0, r, 4, |t| {
                    crate::gegenbauer::gegenbauer_eval(PolyIndex::for_dimension(n, 2), t.cos())
                        .unwrap()
                        * t.sin()
                });
                let want = sphere_surface(d) * surface_measure(1) * basis_constant(d, n) * q;
                assert!((w.a[n] - want).abs() < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn iota_chain() {
        for d in [2, 3, 4] {
            let spec = CapSpec::new(dim(d), 1.1).unwrap();
            let w = cap_gegenbauer(&spec, 32).scaled(cap_normalizer(&spec).sqrt().recip());
            let chain = schoenberg_from_gegenbauer(&self_convolve_coeffs(&w));
            let iota = iota_schoenberg(&spec, 32);
            for (a, b) in chain.coeffs.iter().zip(&iota.coeffs) {
                assert!((a - b).abs() < 1e-12, "d={d}");
            }
        }
    }

    #[test]
    fn circle_iota_sums_to_one() {
        let r = 1.2;
        let s = iota_schoenberg(&CapSpec::new(dim(1), r).unwrap(), 2000);
        assert!((s.sum() - 1.0).abs() < 1e-3);
        assert!(s.coeffs.iter().all(|b| *b >= 0.0));
    }

    #[test]
    fn geometric_iota_matches_series() {
        let spec = CapSpec::new(dim(3), 1.0).unwrap();
        assert_eq!(iota_eval(&spec, 0.0), 1.0);
        assert_eq!(iota_eval(&spec, 2.5), 0.0);
        let f = iota_function(&spec);
        let q = f.quadrature(dim(3), 4096).unwrap();
        let s = schoenberg_coefficients(&f, dim(3), 24, &q).unwrap();
        let exact = iota_schoenberg(&spec, 24);
        for (a, b) in s.coeffs.iter().zip(&exact.coeffs) {
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn kernels() {
        let pe = KernelFamily::powered_exponential(1.0, 1.0).unwrap();
        assert_eq!(kernel_eval(&pe, 0.0), 1.0);
        let sp = KernelFamily::sine_power(2.0).unwrap();
        assert!(kernel_eval(&sp, PI).abs() < 1e-15);
        let tp = KernelFamily::truncated_power(2.0, 1.0).unwrap();
        assert_eq!(kernel_eval(&tp, 1.0), 0.5);
        assert!(KernelFamily::powered_exponential(1.0, 1.5).is_err());
        assert!(KernelFamily::truncated_power(4.0, 1.0).is_err());
        assert!(KernelFamily::truncated_power(1.0, 0.5).is_err());
    }

    #[test]
    fn membership_records() {
        let m = kernel_membership(&KernelFamily::powered_exponential(1.0, 0.5).unwrap());
        assert_eq!(m.proven, PdClass::AllSpheres);
        assert_eq!(m.slope_at_zero, Slope::NegativeInfinity);
        let m = kernel_membership(&KernelFamily::sine_power(1.0).unwrap());
        assert_eq!(m.slope_at_zero, Slope::Finite(-0.5));
        let m = kernel_membership(&KernelFamily::truncated_power(2.0, 1.0).unwrap());
        assert_eq!(m.proven, PdClass::UpTo(1));
        assert!(!m.proven_on(dim(2)));
        let m = kernel_membership(&KernelFamily::truncated_power(2.0, 2.5).unwrap());
        assert_eq!(m.proven, PdClass::UpTo(3));
        assert_eq!(m.conjectured, Some(PdClass::UpTo(4)));
    }
}
