//! Green kernel of the flat Yamabe operator `L_0 = b Δ_0`, its normalising
//! constant, and a numerical check of the reproducing property.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::heisenberg::{gauge_norm, h_inv, h_mul, FdSpec, HPoint, ScalarField};
use crate::octonion::Octonion;
use crate::yamabe::{yamabe_op_flat, B, Q};

/// Guard radius around the diagonal of the kernel.
pub const DEFAULT_POLE_EPS: f64 = 1e-10;

/// `(Q+2)(Q-2)b`, the factor in front of the normalising integral.
pub const CQ_PREFACTOR: f64 = (Q + 2.0) * (Q - 2.0) * B;

/// `Γ(m/2)` for a positive integer `m`.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "gamma_half needs m >= 1");
    let (mut g, mut k) = if m.is_multiple_of(2) { (1.0, 2) } else { (PI.sqrt(), 1) };
    while k < m {
        g *= f64::from(k) / 2.0;
        k += 2;
    }
    g
}

/// Area of the unit sphere in `R^n`.
pub fn sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(f64::from(n) / 2.0) / gamma_half(n)
}

/// `C_Q |ξ^{-1} η|^{-20}`.
pub fn green0(xi: &HPoint, eta: &HPoint, cq: f64) -> Result<f64> {
    let n = gauge_norm(&h_mul(&h_inv(xi), eta));
    if n <= DEFAULT_POLE_EPS {
        return Err(GeometryError::Pole { index: None, norm: n });
    }
    Ok(cq * n.powf(2.0 - Q))
}

/// `G_0(ξ, ζ)^{δ/10}`: the kernel moment whose power mean defines the
/// Nayatani factor. For one atom this is the whole factor.
pub fn green_moment(xi: &HPoint, zeta: &HPoint, delta: f64, cq: f64) -> Result<f64> {
    Ok(green0(xi, zeta, cq)?.powf(2.0 * delta / (Q - 2.0)))
}

/// Quadrature configuration for the normalising constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per axis.
    pub nodes: usize,
    pub mc_samples: usize,
    pub seed: u64,
    /// Largest accepted relative change between `nodes` and `2·nodes`.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes: 64, mc_samples: 400_000, seed: 7, tolerance: 1e-8 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 {
            return Err(GeometryError::Domain(format!("need at least 16 nodes, got {}", self.nodes)));
        }
        if !(self.tolerance > 0.0) {
            return Err(GeometryError::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }
}

fn rule(n: usize) -> Result<GaussLegendre> {
    let n = std::num::NonZeroUsize::new(n).ok_or_else(|| GeometryError::Domain("zero nodes".into()))?;
    Ok(GaussLegendre::new(n))
}

/// Nodes and weights on `[0, 1]`.
fn unit_nodes(n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(rule(n)?
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect())
}

/// Pairwise sum, so the reduction order is fixed by the data layout.
fn tree_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => tree_sum(&v[..n / 2]) + tree_sum(&v[n / 2..]),
    }
}

/// `∫_0^∞ ∫_0^∞ r^9 ρ^6 / (r^4 + ρ^2 + 1)^7 dr dρ` on the unit square with
/// `r = s/(1-s)` and `ρ = A σ/(1-σ)`, `A = (r^4 + 1)^{1/2}`. The scale `A`
/// follows the ridge `ρ ~ r^2` of the integrand, which an unscaled map
/// pushes into the corner `σ → 1`.
pub fn cq_radial_integral(nodes: usize) -> Result<f64> {
    let pts = unit_nodes(nodes)?;
    let mut terms = Vec::with_capacity(nodes * nodes);
    for &(s, ws) in &pts {
        let r = s / (1.0 - s);
        let wr = ws / ((1.0 - s) * (1.0 - s));
        let r4 = r.powi(4);
        let a = (r4 + 1.0).sqrt();
        for &(sig, wsig) in &pts {
            let rho = a * sig / (1.0 - sig);
            let wp = a * wsig / ((1.0 - sig) * (1.0 - sig));
            let den = r4 + rho * rho + 1.0;
            terms.push(wr * wp * r.powi(9) * rho.powi(6) / den.powi(7));
        }
    }
    Ok(sphere_area(8) * sphere_area(7) * tree_sum(&terms))
}

/// Report for one constant computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CqReport {
    pub cq: f64,
    pub nodes: usize,
    /// `|C(nodes) - C(2 nodes)| / C(2 nodes)`.
    pub relative_change: f64,
}

/// `C_Q` from the radial quadrature with `nodes` and `2·nodes` points.
pub fn compute_cq(q: &QuadratureSpec) -> Result<CqReport> {
    q.validate()?;
    let coarse = 1.0 / (CQ_PREFACTOR * cq_radial_integral(q.nodes)?);
    let fine = 1.0 / (CQ_PREFACTOR * cq_radial_integral(2 * q.nodes)?);
    let relative_change = ((coarse - fine) / fine).abs();
    if relative_change > q.tolerance {
        return Err(GeometryError::Convergence { relative_change, tolerance: q.tolerance });
    }
    Ok(CqReport { cq: fine, nodes: q.nodes, relative_change })
}

/// Monte Carlo estimate of the normalising integral over `R^15`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub integral: f64,
    pub integral_stderr: f64,
    pub cq: f64,
    /// Propagated to first order.
    pub cq_stderr: f64,
    pub samples: usize,
}

/// Multivariate Student-t proposal in `dim` dimensions.
struct StudentT {
    dim: u32,
    nu: f64,
    scale: f64,
    log_norm: f64,
}

impl StudentT {
    fn new(dim: u32, nu: u32, scale: f64) -> Self {
        let d = f64::from(dim);
        let nuf = f64::from(nu);
        let log_norm = gamma_half(nu + dim).ln()
            - gamma_half(nu).ln()
            - 0.5 * d * (nuf * PI).ln()
            - d * scale.ln();
        StudentT { dim, nu: nuf, scale, log_norm }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, chi: &ChiSquared<f64>, out: &mut [f64]) -> f64 {
        let w: f64 = chi.sample(rng);
        let f = self.scale / (w / self.nu).sqrt();
        let mut r2 = 0.0;
        for v in out.iter_mut().take(self.dim as usize) {
            let z: f64 = StandardNormal.sample(rng);
            *v = f * z;
            r2 += *v * *v;
        }
        r2
    }

    fn log_density(&self, r2: f64) -> f64 {
        let d = f64::from(self.dim);
        self.log_norm - 0.5 * (self.nu + d) * (1.0 + r2 / (self.nu * self.scale * self.scale)).ln()
    }
}

/// Importance-sampled estimate of `∫ |x|^2 (|x|^4 + |t|^2 + 1)^{-7} dx dt`
/// and of the constant derived from it. Independent of the radial reduction.
pub fn cq_monte_carlo(samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(GeometryError::InsufficientData { have: samples, need: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nu = 3;
    let chi = ChiSquared::new(f64::from(nu)).expect("valid degrees of freedom");
    let px = StudentT::new(8, nu, 0.7);
    let pt = StudentT::new(7, nu, 0.6);
    let mut buf = [0.0; 8];
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..samples {
        let x2 = px.sample(&mut rng, &chi, &mut buf);
        let t2 = pt.sample(&mut rng, &chi, &mut buf);
        let f = x2 / (x2 * x2 + t2 + 1.0).powi(7);
        let v = f * (-(px.log_density(x2) + pt.log_density(t2))).exp();
        // Welford update keeps the variance accurate.
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = samples as f64;
    let stderr = (m2 / (n - 1.0) / n).sqrt();
    let cq = 1.0 / (CQ_PREFACTOR * mean);
    Ok(McEstimate {
        integral: mean,
        integral_stderr: stderr,
        cq,
        cq_stderr: cq * stderr / mean,
        samples,
    })
}

/// `∫ G_0(0, η) L_0 u(η) dη` for a compactly supported field `u` that is
/// invariant under Spin(7), i.e. depends only on `(|x|, |t|)`, and vanishes
/// outside the gauge ball of radius `support`.
///
/// Spin(7) acts transitively on pairs of unit spheres in `x` and `t`, so
/// `L_0 u` is sampled on the slice `(r e0, ρ e1)`. The slice is parametrised
/// by `r^2 = N^2 cos θ`, `ρ = N^2 sin θ`; in these coordinates the kernel
/// singularity cancels against the volume element and the integrand is
/// smooth.
pub fn green_reproduce(
    u: &dyn ScalarField,
    support: f64,
    q: &QuadratureSpec,
    cq: f64,
    fd: &FdSpec,
) -> Result<f64> {
    q.validate()?;
    if !(support > 0.0 && support.is_finite()) {
        return Err(GeometryError::Domain("support radius must be positive".into()));
    }
    let pts = unit_nodes(q.nodes)?;
    let mut terms = Vec::with_capacity(q.nodes * q.nodes);
    for &(sn, wn) in &pts {
        let n = support * sn;
        for &(st, wt) in &pts {
            let theta = 0.5 * PI * st;
            let (sin, cos) = theta.sin_cos();
            let point = HPoint::new(
                Octonion::real(n * cos.sqrt()),
                Octonion::basis(1).scale(n * n * sin),
            );
            let lu = yamabe_op_flat(u, &point, fd)?;
            terms.push(wn * wt * n * cos.powi(3) * sin.powi(6) * lu);
        }
    }
    let jac = support * 0.5 * PI;
    Ok(sphere_area(8) * sphere_area(7) * cq * jac * tree_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_matches_factorials() {
        assert!((gamma_half(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half(8) - 6.0).abs() < 1e-13);
        assert!((gamma_half(3) - 0.5 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn small_node_counts_are_refused() {
        let q = QuadratureSpec { nodes: 8, ..Default::default() };
        assert!(compute_cq(&q).is_err());
    }

    #[test]
    fn kernel_refuses_the_diagonal() {
        let p = HPoint::IDENTITY;
        assert!(matches!(green0(&p, &p, 1.0), Err(GeometryError::Pole { .. })));
    }
}
