//! The octonionic Siegel domain `2 Re y + |x|^2 < 0`: pairing, hyperbolic
//! distance, Cayley transform, boundary identification with the Heisenberg
//! group, and the generator action in homogeneous coordinates `(y, x, z)`.
//!
//! Conventions are chosen so that the boundary identification intertwines
//! the Siegel action with the Heisenberg action generator by generator:
//! the boundary point `(X, Y)` corresponds to `(X̄/√2, -(|X|^2/2 + Y))`,
//! rotations act by `(Y, X) ↦ (μ Y μ̄, X μ̄)`, and the translation by
//! `(a, s)` is the unipotent matrix with entries `-√2 a`, `-(|a|^2 + s)`
//! and `√2 ā`. The unit translation `a = 1/√2, s = 0` is the classical
//! generator `T`. The projective inversion corresponds to the Heisenberg
//! inversion composed with `(x, t) ↦ (-x, t)`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::conformal::{GroupGen, GroupWord};
use crate::error::{GeometryError, Result};
use crate::heisenberg::HPoint;
use crate::octonion::Octonion;

/// Third homogeneous coordinates below this are treated as zero.
pub const DEFAULT_PROJECTIVE_EPS: f64 = 1e-300;
/// Guard radius around the southern point of the sphere.
pub const DEFAULT_SOUTH_EPS: f64 = 1e-8;
/// Relative tolerance for membership in the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// A point `(x, y)` of `O^2`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub x: Octonion,
    pub y: Octonion,
}

impl SiegelPoint {
    pub fn new(x: Octonion, y: Octonion) -> Self {
        SiegelPoint { x, y }
    }

    /// The base point `(0, -1)`, centre of the ball model.
    pub fn base() -> Self {
        SiegelPoint { x: Octonion::ZERO, y: Octonion::real(-1.0) }
    }

    /// `2 Re y + |x|^2`: negative inside, zero on the boundary.
    pub fn height(&self) -> f64 {
        2.0 * self.y.re() + self.x.norm_sq()
    }

    pub fn is_interior(&self) -> bool {
        self.height() < 0.0
    }

    fn boundary_scale(&self) -> f64 {
        1.0 + self.x.norm_sq() + self.y.norm()
    }

    pub fn lift(&self) -> [Octonion; 3] {
        [self.y, self.x, Octonion::ONE]
    }

    pub fn max_abs_diff(&self, o: &SiegelPoint) -> f64 {
        self.x.max_abs_diff(&o.x).max(self.y.max_abs_diff(&o.y))
    }
}

/// Generators of the isometry group acting on homogeneous coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SiegelGen {
    /// Unipotent translation by the Heisenberg element `(a, s)`.
    Translation { a: Octonion, s: Octonion },
    /// `diag(δ, 1, 1/δ)`.
    Dilation(f64),
    /// The antidiagonal involution `(y, x, z) ↦ (z, -x, y)`.
    Inversion,
    Rotation(Octonion),
}

impl SiegelGen {
    /// The classical unit translation matrix.
    pub fn unit_translation() -> Self {
        SiegelGen::Translation { a: Octonion::real(1.0 / SQRT_2), s: Octonion::ZERO }
    }

    pub fn check(&self) -> Result<()> {
        match *self {
            SiegelGen::Dilation(d) if d == 0.0 || !d.is_finite() => {
                Err(GeometryError::Domain("dilation needs a nonzero factor".into()))
            }
            SiegelGen::Rotation(mu) if mu.re().abs() > 1e-12 || (mu.norm() - 1.0).abs() > 1e-12 => {
                Err(GeometryError::Domain("rotation needs a unit imaginary octonion".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Left action of a generator on a homogeneous triple `(y, x, z)`.
pub fn act_homogeneous(g: &SiegelGen, v: &[Octonion; 3]) -> [Octonion; 3] {
    let [y, x, z] = *v;
    match *g {
        SiegelGen::Dilation(d) => [y.scale(d), x, z.scale(1.0 / d)],
        SiegelGen::Inversion => [z, -x, y],
        SiegelGen::Rotation(mu) => [mu.mul(&y).mul(&mu.conj()), x.mul(&mu.conj()), z],
        SiegelGen::Translation { a, s } => {
            let corner = Octonion::real(a.norm_sq()) + s.im();
            [
                y - a.mul(&x).scale(SQRT_2) - corner.mul(&z),
                x + a.conj().scale(SQRT_2).mul(&z),
                z,
            ]
        }
    }
}

/// Right projection `(y z^{-1}, x z^{-1})`.
pub fn project(v: &[Octonion; 3]) -> Result<SiegelPoint> {
    if v[2].norm() <= DEFAULT_PROJECTIVE_EPS {
        return Err(GeometryError::Projective);
    }
    let zi = v[2].inverse()?;
    Ok(SiegelPoint { y: v[0].mul(&zi), x: v[1].mul(&zi) })
}

/// `2 Re(v1 v̄3) + |v2|^2`, the form the generators preserve.
pub fn hermitian_form(v: &[Octonion; 3]) -> f64 {
    2.0 * v[0].mul(&v[2].conj()).re() + v[1].norm_sq()
}

pub fn apply_siegel(g: &SiegelGen, v: &SiegelPoint) -> Result<SiegelPoint> {
    g.check()?;
    project(&act_homogeneous(g, &v.lift()))
}

/// Applies a word right to left, projecting after every generator.
pub fn apply_siegel_word(w: &[SiegelGen], v: &SiegelPoint) -> Result<SiegelPoint> {
    let mut p = *v;
    for g in w.iter().rev() {
        p = apply_siegel(g, &p)?;
    }
    Ok(p)
}

/// The Siegel generators realising a Heisenberg generator on the boundary.
pub fn siegel_counterpart(g: &GroupGen) -> Vec<SiegelGen> {
    match *g {
        GroupGen::Dilation(d) => vec![SiegelGen::Dilation(d)],
        GroupGen::Translation(q) => vec![SiegelGen::Translation { a: q.x, s: q.t }],
        GroupGen::Rotation(mu) => vec![SiegelGen::Rotation(mu)],
        GroupGen::Inversion => {
            // Two rotations by e1 give x ↦ -x, which reconciles the two inversions.
            let e1 = Octonion::basis(1);
            vec![SiegelGen::Inversion, SiegelGen::Rotation(e1), SiegelGen::Rotation(e1)]
        }
    }
}

pub fn siegel_word(w: &GroupWord) -> Vec<SiegelGen> {
    w.0.iter().flat_map(siegel_counterpart).collect()
}

/// `ṽ* D_1 w̃ = ȳ_v + x̄_v x_w + y_w`.
pub fn pairing_value(v: &SiegelPoint, w: &SiegelPoint) -> Octonion {
    v.y.conj() + v.x.conj().mul(&w.x) + w.y
}

/// `|ṽ* D_1 w̃|^2`.
pub fn pairing(v: &SiegelPoint, w: &SiegelPoint) -> f64 {
    pairing_value(v, w).norm_sq()
}

/// `cosh(d/2)`, clamped below at 1.
pub fn cosh_half_distance(v: &SiegelPoint, w: &SiegelPoint) -> Result<f64> {
    for p in [v, w] {
        if !p.is_interior() {
            return Err(GeometryError::Domain(format!(
                "point is not interior (height {:e})",
                p.height()
            )));
        }
    }
    let num = pairing_value(v, w).norm();
    let den = (v.height().abs() * w.height().abs()).sqrt();
    Ok((num / den).max(1.0))
}

/// Hyperbolic distance with `cosh(d/2) = (v, w)`.
pub fn hyp_distance(v: &SiegelPoint, w: &SiegelPoint) -> Result<f64> {
    Ok(2.0 * cosh_half_distance(v, w)?.acosh())
}

/// Same formula as the Cayley transform, for any point of the ball.
pub fn cayley_ball(v1: &Octonion, v2: &Octonion) -> Result<SiegelPoint> {
    let one_plus = Octonion::ONE + *v2;
    if one_plus.norm() <= DEFAULT_SOUTH_EPS {
        return Err(GeometryError::SouthPole);
    }
    let inv = one_plus.inverse()?;
    Ok(SiegelPoint {
        x: inv.mul(v1).scale(SQRT_2),
        y: -(Octonion::ONE - *v2).mul(&inv),
    })
}

/// Cayley transform from the unit sphere of `O^2` to the Siegel boundary.
pub fn cayley(v1: &Octonion, v2: &Octonion) -> Result<SiegelPoint> {
    let r = v1.norm_sq() + v2.norm_sq();
    if (r - 1.0).abs() > 1e-10 {
        return Err(GeometryError::Domain(format!("point is not on the sphere (|v|^2 = {r})")));
    }
    cayley_ball(v1, v2)
}

/// Ball coordinates of a Siegel point: `v2 = (1-y)^{-1}(1+y)`,
/// `v1 = √2 (1-y)^{-1} x`.
pub fn inverse_cayley(p: &SiegelPoint) -> Result<(Octonion, Octonion)> {
    let inv = (Octonion::ONE - p.y).inverse()?;
    Ok((inv.mul(&p.x).scale(SQRT_2), inv.mul(&(Octonion::ONE + p.y))))
}

/// Siegel boundary point to the Heisenberg group.
pub fn boundary_to_h(b: &SiegelPoint) -> Result<HPoint> {
    let residual = b.height().abs();
    if residual > BOUNDARY_TOL * b.boundary_scale() {
        return Err(GeometryError::NotOnBoundary { residual });
    }
    let x2 = b.x.norm_sq();
    Ok(HPoint::new(b.x.conj().scale(1.0 / SQRT_2), -(Octonion::real(x2 / 2.0) + b.y)))
}

/// Inverse of [`boundary_to_h`].
pub fn h_to_boundary(p: &HPoint) -> SiegelPoint {
    SiegelPoint { x: p.x.conj().scale(SQRT_2), y: -p.t - Octonion::real(p.x.norm_sq()) }
}

/// A boundary point: finite points are Heisenberg points, plus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(HPoint),
    Infinity,
}

/// `φ(η) = |z̃* D_1 η̃|^2` for the base point `z = (0, -1)`, and
/// `χ = φ^{δ/2}`.
pub fn phi_chi(eta: &SiegelPoint, delta: f64) -> (f64, f64) {
    let phi = pairing(&SiegelPoint::base(), eta);
    (phi, phi.powf(delta / 2.0))
}
