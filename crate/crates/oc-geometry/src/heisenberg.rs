//! The octonionic Heisenberg group, its gauge norm and contact forms, and a
//! finite-difference horizontal calculus.
//!
//! Left-invariant fields are differentiated along their one-parameter
//! subgroups: `X_a f(p) = d/ds f(p · (s e_a, 0))` at `s = 0`, and
//! `X_a^2 f(p)` is the second derivative along the same curve. This keeps
//! every stencil exact for the group law instead of linearising the drift.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::octonion::Octonion;
use crate::spin_frames::e;

/// A point `(x, t)` with `x` in the octonions and `t` purely imaginary.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct HPoint {
    pub x: Octonion,
    pub t: Octonion,
}

impl HPoint {
    pub const IDENTITY: HPoint = HPoint { x: Octonion::ZERO, t: Octonion::ZERO };

    /// Builds a point, discarding any real part of `t`.
    pub fn new(x: Octonion, t: Octonion) -> Self {
        HPoint { x, t: t.im() }
    }

    pub fn from_parts(x: [f64; 8], t: [f64; 7]) -> Self {
        HPoint { x: Octonion(x), t: Octonion::from_imag(&t) }
    }

    /// Coordinates `(x0..x7, t1..t7)`.
    pub fn coords(&self) -> [f64; 15] {
        let mut c = [0.0; 15];
        c[..8].copy_from_slice(&self.x.0);
        c[8..].copy_from_slice(&self.t.0[1..]);
        c
    }

    pub fn from_coords(c: &[f64; 15]) -> Self {
        let mut x = [0.0; 8];
        let mut t = [0.0; 7];
        x.copy_from_slice(&c[..8]);
        t.copy_from_slice(&c[8..]);
        HPoint::from_parts(x, t)
    }

    pub fn mul(&self, q: &HPoint) -> HPoint {
        h_mul(self, q)
    }

    pub fn inv(&self) -> HPoint {
        h_inv(self)
    }

    pub fn norm(&self) -> f64 {
        gauge_norm(self)
    }

    pub fn max_abs_diff(&self, o: &HPoint) -> f64 {
        self.x.max_abs_diff(&o.x).max(self.t.max_abs_diff(&o.t))
    }
}

/// `(x, t)(y, s) = (x + y, t + s + 2 Im(x ȳ))`.
pub fn h_mul(p: &HPoint, q: &HPoint) -> HPoint {
    let twist = p.x.mul(&q.x.conj()).im().scale(2.0);
    HPoint { x: p.x + q.x, t: p.t + q.t + twist }
}

pub fn h_inv(p: &HPoint) -> HPoint {
    HPoint { x: -p.x, t: -p.t }
}

/// `(|x|^4 + |t|^2)^{1/4}`.
pub fn gauge_norm(p: &HPoint) -> f64 {
    let x2 = p.x.norm_sq();
    (x2 * x2 + p.t.norm_sq()).sqrt().sqrt()
}

/// Fourth power of the gauge norm, cheaper and smooth everywhere.
pub fn gauge_norm4(p: &HPoint) -> f64 {
    let x2 = p.x.norm_sq();
    x2 * x2 + p.t.norm_sq()
}

/// Tangent vector of `X_a` at `p` in coordinates `(x0..x7, t1..t7)`.
pub fn x_field_vector(a: usize, p: &HPoint) -> Result<[f64; 15]> {
    if a > 7 {
        return Err(GeometryError::Index { what: "horizontal field", value: a });
    }
    let mut v = [0.0; 15];
    v[a] = 1.0;
    for beta in 1..8 {
        let eb = e(beta);
        v[7 + beta] = 2.0 * (0..8).map(|b| eb[(b, a)] * p.x[b]).sum::<f64>();
    }
    Ok(v)
}

/// `θ_β = dt_β - 2 E^β_{ba} x_b dx_a` evaluated on a tangent vector at `p`.
pub fn contact_form(beta: usize, p: &HPoint, v: &[f64; 15]) -> Result<f64> {
    if !(1..=7).contains(&beta) {
        return Err(GeometryError::Index { what: "contact form", value: beta });
    }
    let eb = e(beta);
    let mut drift = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            drift += eb[(b, a)] * p.x[b] * v[a];
        }
    }
    Ok(v[7 + beta] - 2.0 * drift)
}

/// Real-valued function on the group. Evaluators must be callable from
/// several threads at once.
pub trait ScalarField: Sync {
    fn eval(&self, p: &HPoint) -> f64;
}

impl<F: Fn(&HPoint) -> f64 + Sync> ScalarField for F {
    fn eval(&self, p: &HPoint) -> f64 {
        self(p)
    }
}

/// How a finite-difference step is chosen at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StepRule {
    /// `c · (1 + |p|)`.
    Scaled(f64),
    /// `c · |p|`, for fields with a singularity at the identity.
    Relative(f64),
    Fixed(f64),
}

impl StepRule {
    pub fn at(&self, p: &HPoint) -> f64 {
        match *self {
            StepRule::Scaled(c) => c * (1.0 + gauge_norm(p)),
            StepRule::Relative(c) => c * gauge_norm(p),
            StepRule::Fixed(h) => h,
        }
    }
}

/// Central-difference configuration. `levels` is the number of step
/// halvings combined by Richardson extrapolation (1 = plain central
/// differences, 2 = extrapolate from `h` and `h/2`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdSpec {
    pub first: StepRule,
    pub second: StepRule,
    pub levels: usize,
}

impl Default for FdSpec {
    fn default() -> Self {
        FdSpec { first: StepRule::Scaled(1e-3), second: StepRule::Scaled(1e-2), levels: 2 }
    }
}

impl FdSpec {
    /// Default steps with one more extrapolation level, for checks at the
    /// 1e-6 level on fields with large high-order derivatives.
    pub fn precise() -> Self {
        FdSpec { levels: 3, ..FdSpec::default() }
    }

    /// Singular fields such as powers of the gauge norm: steps shrink with
    /// the distance to the identity.
    pub fn singular() -> Self {
        FdSpec::uniform(StepRule::Relative(5e-3), 3)
    }

    /// Same rule for first and second derivatives.
    pub fn uniform(rule: StepRule, levels: usize) -> Self {
        FdSpec { first: rule, second: rule, levels }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |r: &StepRule| match *r {
            StepRule::Scaled(c) | StepRule::Relative(c) | StepRule::Fixed(c) => c > 0.0 && c.is_finite(),
        };
        if ok(&self.first) && ok(&self.second) && self.levels >= 1 {
            Ok(())
        } else {
            Err(GeometryError::Domain("finite-difference steps must be positive".into()))
        }
    }
}

/// Richardson extrapolation of an even-order-error estimator `d(h)`.
pub(crate) fn richardson(h: f64, levels: usize, mut d: impl FnMut(f64) -> f64) -> f64 {
    let levels = levels.max(1);
    let mut table: Vec<f64> = (0..levels).map(|k| d(h / f64::from(1u32 << k))).collect();
    for k in 1..levels {
        let f = 4f64.powi(k as i32);
        for i in (k..levels).rev() {
            table[i] = (f * table[i] - table[i - 1]) / (f - 1.0);
        }
    }
    table[levels - 1]
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GeometryError::NonFinite)
    }
}

fn shifted(p: &HPoint, a: usize, s: f64) -> HPoint {
    h_mul(p, &HPoint { x: Octonion::basis(a).scale(s), t: Octonion::ZERO })
}

fn check_axis(a: usize) -> Result<()> {
    if a > 7 {
        Err(GeometryError::Index { what: "horizontal field", value: a })
    } else {
        Ok(())
    }
}

/// `X_a f(p)`.
pub fn apply_x(a: usize, f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    check_axis(a)?;
    let h = fd.first.at(p);
    let v = richardson(h, fd.levels, |h| {
        (f.eval(&shifted(p, a, h)) - f.eval(&shifted(p, a, -h))) / (2.0 * h)
    });
    finite(v)
}

/// `X_a X_a f(p)`.
pub fn apply_xx(a: usize, f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    check_axis(a)?;
    let h = fd.second.at(p);
    let f0 = f.eval(p);
    let v = richardson(h, fd.levels, |h| {
        (f.eval(&shifted(p, a, h)) - 2.0 * f0 + f.eval(&shifted(p, a, -h))) / (h * h)
    });
    finite(v)
}

/// `X_c (X_a f)(p)`, differentiating along `p · (s e_c) · (u e_a)`.
pub fn apply_xy(c: usize, a: usize, f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    check_axis(c)?;
    check_axis(a)?;
    if c == a {
        return apply_xx(a, f, p, fd);
    }
    let h = fd.second.at(p);
    let g = |s: f64, u: f64| f.eval(&shifted(&shifted(p, c, s), a, u));
    let v = richardson(h, fd.levels, |h| {
        (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h)
    });
    finite(v)
}

/// Plain coordinate derivative `∂f/∂t_β`, which is also the Reeb field `R_β`.
pub fn partial_t(beta: usize, f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    if !(1..=7).contains(&beta) {
        return Err(GeometryError::Index { what: "vertical direction", value: beta });
    }
    let h = fd.first.at(p);
    let shift = |s: f64| {
        let mut q = *p;
        q.t[beta] += s;
        q
    };
    let v = richardson(h, fd.levels, |h| (f.eval(&shift(h)) - f.eval(&shift(-h))) / (2.0 * h));
    finite(v)
}

/// `(X_0 f, ..., X_7 f)`.
pub fn horizontal_gradient(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<[f64; 8]> {
    let mut g = [0.0; 8];
    for (a, slot) in g.iter_mut().enumerate() {
        *slot = apply_x(a, f, p, fd)?;
    }
    Ok(g)
}

/// `H[c][a] = X_a X_c f`: row `c` is the horizontal gradient of `X_c f`.
pub fn horizontal_hessian(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<[[f64; 8]; 8]> {
    let mut m = [[0.0; 8]; 8];
    for (c, row) in m.iter_mut().enumerate() {
        for (a, slot) in row.iter_mut().enumerate() {
            *slot = apply_xy(a, c, f, p, fd)?;
        }
    }
    Ok(m)
}

/// `Δ_0 f = -Σ_a X_a^2 f`.
pub fn sublaplacian(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    let mut s = 0.0;
    for a in 0..8 {
        s += apply_xx(a, f, p, fd)?;
    }
    Ok(-s)
}

/// `Σ_a (X_a f)^2`.
pub fn horizontal_grad_sq(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    Ok(horizontal_gradient(f, p, fd)?.iter().map(|v| v * v).sum())
}

/// `φ(p)^{11/5}`, the density of the conformally changed volume.
pub fn volume_density(phi: &dyn ScalarField, p: &HPoint) -> Result<f64> {
    let v = phi.eval(p);
    if v.is_nan() || v <= 0.0 {
        return Err(GeometryError::Domain(format!("conformal factor {v} is not positive")));
    }
    Ok(v.powf(crate::yamabe::VOLUME_EXPONENT))
}
