//! Dimensional constants of `S^d` and quadrature for the weight `(sin θ)^{d-1}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gegenbauer::{gegenbauer_at_one, PolyIndex};
use crate::special::ln_gamma;

/// Dimension `d ≥ 1` of the sphere `S^d ⊂ R^{d+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Gegenbauer parameter `λ = (d - 1) / 2`.
    pub fn lambda(self) -> f64 {
        (self.0 as f64 - 1.0) / 2.0
    }

    /// `S^{d+k}`.
    pub fn raised(self, k: usize) -> Self {
        Self(self.0 + k)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Surface measure of `S^k` for any `k ≥ 0`; `σ_0 = 2` counts the two points of `S^0`.
pub fn surface_measure(k: usize) -> f64 {
    let a = (k as f64 + 1.0) / 2.0;
    2.0 * (a * PI.ln() - ln_gamma(a)).exp()
}

/// `σ_d = 2π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn sphere_surface(d: Dimension) -> f64 {
    surface_measure(d.get())
}

/// Normalizing constant `c_{d,n}` of the Gegenbauer basis function
/// `E_{d,n} = c_{d,n} C_n^{(d-1)/2}(<·,·>)`.
pub fn basis_constant(d: Dimension, n: usize) -> f64 {
    if d.get() == 1 {
        return if n == 0 {
            1.0 / (2.0 * PI)
        } else {
            std::f64::consts::SQRT_2 / (2.0 * PI)
        };
    }
    let df = d.get() as f64;
    let c1 = gegenbauer_at_one(PolyIndex::for_dimension(n, d.get()));
    ((2.0 * n as f64 + df - 1.0) / ((df - 1.0) * c1)).sqrt() / sphere_surface(d)
}

/// Convolution eigenvalue `c̄_{d,n}`: `E_{d,k} ⊛ E_{d,n} = δ_{kn} c̄_{d,n} E_{d,n}`.
pub fn conv_eigen(d: Dimension, n: usize) -> f64 {
    if d.get() == 1 {
        return if n == 0 {
            1.0
        } else {
            std::f64::consts::FRAC_1_SQRT_2
        };
    }
    let df = d.get() as f64;
    let c1 = gegenbauer_at_one(PolyIndex::for_dimension(n, d.get()));
    ((df - 1.0) / ((2.0 * n as f64 + df - 1.0) * c1)).sqrt()
}

/// The constant `α_d` with `b_{d,n} = α_d c̄_{d,n}^{-1} <E_{d,n}, ψ>` for `d ≥ 2`:
///
/// ```text
/// α_d = Γ((d-1)/2)² Γ(d/2) (d-1) / (Γ(d-1) 2^{4-d} π^{(d+2)/2})
/// ```
///
/// so that `α_2 = 1/(4π)` and `α_3 = 1/(2π²)`, i.e. `α_d σ_d = 1` reproduces the constant
/// function. `d = 1` has no single constant and is rejected.
pub fn alpha_const(d: Dimension) -> Result<f64> {
    if d.get() < 2 {
        return Err(Error::InvalidDimension(d.get()));
    }
    let df = d.get() as f64;
    let lambda = d.lambda();
    let ln = 2.0 * ln_gamma(lambda) + ln_gamma(df / 2.0) + (df - 1.0).ln()
        - ln_gamma(df - 1.0)
        - (4.0 - df) * 2f64.ln()
        - (df + 2.0) / 2.0 * PI.ln();
    Ok(ln.exp())
}

/// Ratio `b_{d,n} / <E_{d,n}, ψ>` linking Schoenberg and Gegenbauer coefficients.
pub fn schoenberg_per_gegenbauer(d: Dimension, n: usize) -> f64 {
    if d.get() == 1 {
        return basis_constant(d, n);
    }
    alpha_const(d).expect("d >= 2") / conv_eigen(d, n)
}

/// `∫_0^π (sin θ)^{k} dθ = √π Γ((k+1)/2) / Γ(k/2 + 1)`.
pub fn sine_power_integral(k: f64) -> f64 {
    (0.5 * PI.ln() + ln_gamma((k + 1.0) / 2.0) - ln_gamma(k / 2.0 + 1.0)).exp()
}

/// Nodes and weights of a rule for `∫_0^π f(θ) (sin θ)^{d-1} dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub d: Dimension,
    /// Angles in `(0, π)`, increasing.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Largest `k` such that `(cos θ)^k` is integrated exactly; `None` for composite rules.
    pub exact_degree: Option<usize>,
}

impl QuadratureRule {
    /// Gauss rule for the weight `(1 - u²)^{(d-2)/2}` on `[-1, 1]`, mapped to `θ = arccos u`.
    ///
    /// Nodes are eigenvalues of the Jacobi matrix, polished by Newton steps on the
    /// orthonormal recurrence; weights come from the Christoffel function.
    pub fn gauss(d: Dimension, n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::InvalidArgument(format!(
                "quadrature needs at least 2 nodes, got {n_nodes}"
            )));
        }
        let jac = JacobiMatrix::new(d.lambda(), n_nodes);
        let mut eig = symmetric_tridiagonal_eigenvalues(&vec![0.0; n_nodes], &jac.off_diagonal);
        // Descending u gives increasing θ.
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        for u0 in eig {
            let u = jac.polish(u0);
            weights.push(jac.christoffel_weight(u));
            nodes.push(u.clamp(-1.0, 1.0).acos());
        }
        Ok(Self {
            d,
            nodes,
            weights,
            exact_degree: Some(2 * n_nodes - 1),
        })
    }

    /// Composite Gauss–Legendre rule in `θ`, with the weight `(sin θ)^{d-1}` folded
    /// into the weights. Panels never straddle a breakpoint, so piecewise-smooth
    /// integrands with known kinks or jumps converge rapidly.
    pub fn composite(
        d: Dimension,
        breakpoints: &[f64],
        panels: usize,
        order: usize,
    ) -> Result<Self> {
        if panels == 0 || order == 0 {
            return Err(Error::InvalidArgument(
                "composite rule needs panels and order".into(),
            ));
        }
        let gl = GaussLegendre::new(order);
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|b| *b > 0.0 && *b < PI)
            .collect();
        cuts.push(0.0);
        cuts.push(PI);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

        let power = d.get() as i32 - 1;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for seg in cuts.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let count = ((panels as f64 * (b - a) / PI).ceil() as usize).max(1);
            let h = (b - a) / count as f64;
            for p in 0..count {
                let lo = a + p as f64 * h;
                for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                    let t = lo + 0.5 * h * (x + 1.0);
                    nodes.push(t);
                    weights.push(0.5 * h * w * t.sin().powi(power));
                }
            }
        }
        Ok(Self {
            d,
            nodes,
            weights,
            exact_degree: None,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_j f(θ_j) ≈ ∫_0^π f(θ) (sin θ)^{d-1} dθ`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Gauss rule convenience wrapper matching the original operation name.
pub fn make_quadrature(d: Dimension, n_nodes: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss(d, n_nodes)
}

/// Jacobi matrix of the orthonormal Gegenbauer polynomials for weight `(1-u²)^{λ-1/2}`.
struct JacobiMatrix {
    /// `b_k = sqrt(β_k)`, `k = 1..n-1` stored at index `k-1`.
    off_diagonal: Vec<f64>,
    /// `b_n`, needed for the Newton step on the degree-n polynomial.
    b_last: f64,
    mu0: f64,
    n: usize,
}

impl JacobiMatrix {
    fn new(lambda: f64, n: usize) -> Self {
        let beta = |k: usize| -> f64 {
            let kf = k as f64;
            if lambda == 0.0 {
                if k == 1 {
                    0.5
                } else {
                    0.25
                }
            } else {
                kf * (kf + 2.0 * lambda - 1.0) / (4.0 * (kf + lambda) * (kf + lambda - 1.0))
            }
        };
        let off_diagonal = (1..n).map(|k| beta(k).sqrt()).collect();
        let mu0 = (0.5 * PI.ln() + ln_gamma(lambda + 0.5) - ln_gamma(lambda + 1.0)).exp();
        Self {
            off_diagonal,
            b_last: beta(n).sqrt(),
            mu0,
            n,
        }
    }

    fn b(&self, k: usize) -> f64 {
        if k == self.n {
            self.b_last
        } else {
            self.off_diagonal[k - 1]
        }
    }

    /// Value and derivative of the degree-n orthonormal polynomial.
    fn eval_top(&self, x: f64) -> (f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        for k in 0..self.n {
            let bk = if k == 0 { 0.0 } else { self.b(k) };
            let b_next = self.b(k + 1);
            let p_next = (x * p - bk * p_prev) / b_next;
            let dp_next = (p + x * dp - bk * dp_prev) / b_next;
            p_prev = p;
            p = p_next;
            dp_prev = dp;
            dp = dp_next;
        }
        (p, dp)
    }

    fn polish(&self, mut x: f64) -> f64 {
        for _ in 0..3 {
            let (p, dp) = self.eval_top(x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x
    }

    fn christoffel_weight(&self, x: f64) -> f64 {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut sum = p * p;
        for k in 0..self.n - 1 {
            let bk = if k == 0 { 0.0 } else { self.b(k) };
            let p_next = (x * p - bk * p_prev) / self.b(k + 1);
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        1.0 / sum
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        if order == 1 {
            return Self {
                nodes: vec![0.0],
                weights: vec![2.0],
            };
        }
        // Legendre weight is the d = 2 case of the Gegenbauer weight.
        let rule = QuadratureRule::gauss(Dimension(2), order).expect("order >= 2");
        let nodes = rule.nodes.iter().map(|t| t.cos()).collect();
        Self {
            nodes,
            weights: rule.weights,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Composite rule over `panels` equal sub-intervals of `[a, b]`.
    pub fn integrate_composite<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * h;
                self.integrate(lo, lo + h, &f)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gegenbauer::gegenbauer_eval;
    use approx::assert_relative_eq;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn surfaces() {
        assert_relative_eq!(sphere_surface(dim(1)), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(dim(2)), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(dim(3)), 2.0 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(surface_measure(0), 2.0, max_relative = 1e-14);
        assert!(Dimension::new(0).is_err());
    }

    #[test]
    fn circle_constants() {
        assert_relative_eq!(basis_constant(dim(1), 0), 1.0 / (2.0 * PI));
        assert_relative_eq!(basis_constant(dim(1), 3), 2f64.sqrt() / (2.0 * PI));
        assert_eq!(conv_eigen(dim(1), 0), 1.0);
        assert_relative_eq!(conv_eigen(dim(1), 5), 2f64.sqrt() / 2.0);
    }

    #[test]
    fn higher_dimensional_constants() {
        assert_relative_eq!(
            basis_constant(dim(2), 0),
            1.0 / (4.0 * PI),
            max_relative = 1e-14
        );
        assert_relative_eq!(conv_eigen(dim(3), 0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            alpha_const(dim(2)).unwrap(),
            1.0 / (4.0 * PI),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            alpha_const(dim(3)).unwrap(),
            1.0 / (2.0 * PI * PI),
            max_relative = 1e-13
        );
        assert!(alpha_const(dim(1)).is_err());
    }

    #[test]
    fn alpha_reproduces_constant_function() {
        // ψ ≡ 1 has <E_{d,0}, ψ> = c_{d,0} σ_d² = σ_d and b_{d,0} = 1.
        for d in 2..=7 {
            let a0 = sphere_surface(dim(d));
            let b0 = alpha_const(dim(d)).unwrap() / conv_eigen(dim(d), 0) * a0;
            assert_relative_eq!(b0, 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn quadrature_examples() {
        let q1 = make_quadrature(dim(1), 64).unwrap();
        assert!(q1.integrate(|t| (3.0 * t).cos()).abs() < 1e-13);
        let q2 = make_quadrature(dim(2), 64).unwrap();
        assert!((q2.integrate(|_| 1.0) - 2.0).abs() < 1e-13);
        let q3 = make_quadrature(dim(3), 64).unwrap();
        assert!((q3.integrate(|_| 1.0) - PI / 2.0).abs() < 1e-13);
        assert!(make_quadrature(dim(2), 1).is_err());
    }

    #[test]
    fn chebyshev_rule_has_closed_form() {
        let q = make_quadrature(dim(1), 17).unwrap();
        for (j, (t, w)) in q.nodes.iter().zip(&q.weights).enumerate() {
            let expected = (2.0 * j as f64 + 1.0) * PI / 34.0;
            assert!((t - expected).abs() < 1e-13);
            assert!((w - PI / 17.0).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_sum_to_total_mass() {
        for d in 1..=8 {
            for &n in &[2usize, 7, 64, 300] {
                let q = make_quadrature(dim(d), n).unwrap();
                let total: f64 = q.weights.iter().sum();
                assert_relative_eq!(
                    total,
                    sine_power_integral(d as f64 - 1.0),
                    max_relative = 1e-12
                );
                assert!(q.weights.iter().all(|w| *w > 0.0));
                assert!(q.nodes.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn moments_exact_to_declared_degree() {
        // ∫ u^k (1-u²)^{(d-2)/2} du = B((k+1)/2, d/2) for even k, 0 for odd k.
        for d in 1..=5 {
            let n = 12;
            let q = make_quadrature(dim(d), n).unwrap();
            let deg = q.exact_degree.unwrap();
            for k in 0..=deg {
                let got = q.integrate(|t| t.cos().powi(k as i32));
                let want = if k % 2 == 1 {
                    0.0
                } else {
                    let a = (k as f64 + 1.0) / 2.0;
                    let b = d as f64 / 2.0;
                    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
                };
                assert!((got - want).abs() < 1e-13, "d={d} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn composite_rule_handles_kink() {
        let q = QuadratureRule::composite(dim(1), &[2.0], 64, 8).unwrap();
        let v = q.integrate(|t| (1.0 - t / 2.0).max(0.0));
        assert!((v - 1.0).abs() < 1e-14);
        let q3 = QuadratureRule::composite(dim(3), &[], 16, 8).unwrap();
        assert!((q3.integrate(|_| 1.0) - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormality_reduced_to_one_dimension() {
        for d in 1..=3usize {
            let q = make_quadrature(dim(d), 40).unwrap();
            let lambda = dim(d).lambda();
            for m in 0..=10usize {
                for n in 0..=10usize {
                    let ip = q.integrate(|t| {
                        let x = t.cos();
                        gegenbauer_eval(PolyIndex::new(m, lambda).unwrap(), x).unwrap()
                            * gegenbauer_eval(PolyIndex::new(n, lambda).unwrap(), x).unwrap()
                    });
                    let v = sphere_surface(dim(d))
                        * surface_measure(d - 1)
                        * basis_constant(dim(d), m)
                        * basis_constant(dim(d), n)
                        * ip;
                    let want = if m == n { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-10, "d={d} m={m} n={n}: {v}");
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_interval() {
        let gl = GaussLegendre::new(6);
        assert_relative_eq!(gl.integrate(0.0, PI, |t| t.sin()), 2.0, max_relative = 1e-6);
        assert_relative_eq!(
            gl.integrate_composite(0.0, PI, 32, |t| t.sin()),
            2.0,
            max_relative = 1e-14
        );
    }
}
