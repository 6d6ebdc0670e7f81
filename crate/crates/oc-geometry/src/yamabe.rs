//! The Yamabe operator on the flat model and the scalar curvature of a
//! conformally flat metric, computed by three independent routes:
//! the exponential formula in `h`, the Yamabe equation in `φ = e^{10h}`,
//! and direct assembly of the connection change for `f = e^h`.

use crate::error::{GeometryError, Result};
use crate::heisenberg::{
    horizontal_grad_sq, horizontal_gradient, horizontal_hessian, partial_t, sublaplacian, FdSpec,
    HPoint, ScalarField,
};
use crate::spin_frames::{e, project_so7, skew, So8Decomposition, Matrix8, Vector8};

/// Homogeneous dimension `8 + 2·7`.
pub const Q: f64 = 22.0;
/// `b = 4(Q-1)/(Q-2)`.
pub const B: f64 = 21.0 / 5.0;
/// `4/(Q-2)`: a metric `φ^{1/5} g0` has conformal factor `φ`.
pub const METRIC_EXPONENT: f64 = 1.0 / 5.0;
/// `(Q+2)/(Q-2)`.
pub const YAMABE_EXPONENT: f64 = 6.0 / 5.0;
/// `2Q/(Q-2)`.
pub const VOLUME_EXPONENT: f64 = 11.0 / 5.0;
/// `(Q-1)(Q-2)`.
pub const CURVATURE_CONSTANT: f64 = 420.0;
/// `(Q-2)/2`: `φ = e^{10h}` for the metric `e^{2h} g0`.
pub const HALF_WEIGHT: f64 = 10.0;

/// The numeric constants of the Yamabe problem on the flat model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YamabeConstants {
    pub q: f64,
    pub b: f64,
    pub metric_exponent: f64,
    pub yamabe_exponent: f64,
    pub volume_exponent: f64,
    pub curvature_constant: f64,
}

impl YamabeConstants {
    pub const FLAT: YamabeConstants = YamabeConstants {
        q: Q,
        b: B,
        metric_exponent: METRIC_EXPONENT,
        yamabe_exponent: YAMABE_EXPONENT,
        volume_exponent: VOLUME_EXPONENT,
        curvature_constant: CURVATURE_CONSTANT,
    };

    /// Recomputes every constant from `q` alone.
    pub fn from_dimension(q: f64) -> Self {
        YamabeConstants {
            q,
            b: 4.0 * (q - 1.0) / (q - 2.0),
            metric_exponent: 4.0 / (q - 2.0),
            yamabe_exponent: (q + 2.0) / (q - 2.0),
            volume_exponent: 2.0 * q / (q - 2.0),
            curvature_constant: (q - 1.0) * (q - 2.0),
        }
    }
}

fn positive_at(f: &dyn ScalarField, p: &HPoint) -> Result<f64> {
    let v = f.eval(p);
    if v.is_nan() || v <= 0.0 {
        Err(GeometryError::Domain(format!("field value {v} must be positive")))
    } else {
        Ok(v)
    }
}

/// `L_0 φ = b Δ_0 φ`.
pub fn yamabe_op_flat(phi: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    Ok(B * sublaplacian(phi, p, fd)?)
}

/// Scalar curvature of `e^{2h} g0`: `e^{-2h}(42 Δ_0 h - 420 |∇_0 h|^2)`.
pub fn scalar_curv_exp(h: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    let lap = sublaplacian(h, p, fd)?;
    let grad = horizontal_grad_sq(h, p, fd)?;
    let h0 = h.eval(p);
    Ok((-2.0 * h0).exp() * (B * HALF_WEIGHT * lap - CURVATURE_CONSTANT * grad))
}

/// Scalar curvature of `φ^{1/5} g0` from the Yamabe equation:
/// `b Δ_0 φ · φ^{-6/5}`.
pub fn scalar_curv_yamabe(phi: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    let v = positive_at(phi, p)?;
    Ok(B * sublaplacian(phi, p, fd)? * v.powf(-YAMABE_EXPONENT))
}

/// `Δ_g̃ u = φ^{-6/5} (Δ_0(φu) - u Δ_0 φ)` for `g̃ = φ^{1/5} g0`.
pub fn conformal_sublaplacian(
    phi: &dyn ScalarField,
    u: &dyn ScalarField,
    p: &HPoint,
    fd: &FdSpec,
) -> Result<f64> {
    let v = positive_at(phi, p)?;
    let prod = |q: &HPoint| phi.eval(q) * u.eval(q);
    let lap_prod = sublaplacian(&prod, p, fd)?;
    let lap_phi = sublaplacian(phi, p, fd)?;
    Ok(v.powf(-YAMABE_EXPONENT) * (lap_prod - lap_phi * u.eval(p)))
}

/// Change of connection for `g̃ = f^2 g0` at one point, built from the
/// derivatives of `ln f`.
#[derive(Clone, Debug)]
pub struct ConnectionPerturbation {
    /// `K_a = X_a ln f`.
    pub k: [f64; 8],
    /// `∂_{t_β} ln f`, the Reeb derivatives.
    pub k_vert: [f64; 7],
    /// `grad_k[c][a] = X_a K_c`.
    pub grad_k: [[f64; 8]; 8],
    /// `A_{X_a}`, scalar part included.
    pub a_x: [Matrix8; 8],
    /// `A_{R_β}`, scalar part included.
    pub a_r: [Matrix8; 7],
    /// Splitting of the antisymmetrised Reeb perturbation.
    pub u_r_split: Vec<So8Decomposition>,
}

/// Antisymmetric part of `A_{X_a}` for a horizontal covector `k`.
fn horizontal_u(k: &Vector8, a: usize) -> Matrix8 {
    let mut ea = Vector8::zeros();
    ea[a] = 1.0;
    // K^♯ ∧ X acting as Z ↦ <K,Z> X - <X,Z> K.
    let mut m = ea * k.transpose() - k * ea.transpose();
    for alpha in 1..8 {
        let ik = e(alpha) * k;
        let ix = e(alpha) * ea;
        m += e(alpha) * ik[a];
        m += ix * ik.transpose() - ik * ix.transpose();
    }
    m
}

fn horizontal_a(k: &Vector8, a: usize) -> Matrix8 {
    Matrix8::identity() * k[a] + horizontal_u(k, a)
}

/// The Reeb perturbation `U_{R_α}` as a matrix on the horizontal space.
fn reeb_u(k: &Vector8, grad: &Matrix8, alpha: usize) -> Matrix8 {
    let ea = e(alpha);
    let mut m = ea * grad * 2.0;
    for beta in 1..8 {
        let ibk = e(beta) * k;
        m += (ea * ibk) * ibk.transpose() * 4.0;
        if beta != alpha {
            m -= ibk * (e(beta) * ea * k).transpose() * 4.0;
        }
    }
    m
}

impl ConnectionPerturbation {
    /// Builds every endomorphism from given derivative data.
    pub fn from_derivatives(k: [f64; 8], k_vert: [f64; 7], grad_k: [[f64; 8]; 8]) -> Result<Self> {
        let kv = Vector8::from_row_slice(&k);
        let grad = Matrix8::from_fn(|c, a| grad_k[c][a]);
        let a_x = std::array::from_fn(|a| horizontal_a(&kv, a));
        let mut a_r = [Matrix8::zeros(); 7];
        let mut split = Vec::with_capacity(7);
        for alpha in 1..8 {
            // The bilinear K-terms are not antisymmetric by themselves; only
            // the antisymmetric part is an endomorphism in so(8).
            let d = project_so7(&skew(&reeb_u(&kv, &grad, alpha)))?;
            a_r[alpha - 1] = Matrix8::identity() * k_vert[alpha - 1] + d.so7_part;
            split.push(d);
        }
        Ok(ConnectionPerturbation { k, k_vert, grad_k, a_x, a_r, u_r_split: split })
    }

    /// Finite-difference derivatives of `ln f` at `p`.
    pub fn assemble(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<Self> {
        positive_at(f, p)?;
        let ln_f = |q: &HPoint| f.eval(q).ln();
        let k = horizontal_gradient(&ln_f, p, fd)?;
        let grad_k = horizontal_hessian(&ln_f, p, fd)?;
        let mut k_vert = [0.0; 7];
        for (i, slot) in k_vert.iter_mut().enumerate() {
            *slot = partial_t(i + 1, &ln_f, p, fd)?;
        }
        Self::from_derivatives(k, k_vert, grad_k)
    }

    /// `f^2 s̃`: the horizontal trace of the curvature of the perturbed
    /// connection, with the flat connection differentiating entries.
    pub fn curvature_trace(&self) -> f64 {
        let grad = Matrix8::from_fn(|c, a| self.grad_k[c][a]);
        let mut total = 0.0;
        for a in 0..8 {
            // X_a applied to A_{X_b}: A is linear in K, so differentiate K.
            let dk_a: Vector8 = grad.column(a).into();
            for b in 0..8 {
                let dk_b: Vector8 = grad.column(b).into();
                let d_ab = horizontal_a(&dk_a, b)[(a, b)];
                let d_ba = horizontal_a(&dk_b, a)[(a, b)];
                let ab = (self.a_x[a] * self.a_x[b].column(b))[a];
                let ba = (self.a_x[b] * self.a_x[a].column(b))[a];
                // [X_a, X_b] = 4 E^β_{ab} R_β.
                let mut bracket = 0.0;
                for beta in 1..8 {
                    let c = e(beta)[(a, b)];
                    if c != 0.0 {
                        bracket += 4.0 * c * self.a_r[beta - 1][(a, b)];
                    }
                }
                total += d_ab - d_ba + ab - ba - bracket;
            }
        }
        total
    }

    /// Closed form `-(42 tr ∇K + 420 |K|^2)` of the same trace.
    pub fn closed_form_trace(&self) -> f64 {
        let tr: f64 = (0..8).map(|a| self.grad_k[a][a]).sum();
        let k2: f64 = self.k.iter().map(|v| v * v).sum();
        -(B * HALF_WEIGHT * tr + CURVATURE_CONSTANT * k2)
    }
}

/// Scalar curvature of `f^2 g0` by assembling the connection change.
pub fn scalar_curv_connection(f: &dyn ScalarField, p: &HPoint, fd: &FdSpec) -> Result<f64> {
    let v = positive_at(f, p)?;
    let cp = ConnectionPerturbation::assemble(f, p, fd)?;
    Ok(cp.curvature_trace() / (v * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_follow_from_dimension() {
        let c = YamabeConstants::from_dimension(22.0);
        let f = YamabeConstants::FLAT;
        assert_eq!(c.b, f.b);
        assert!((c.metric_exponent - f.metric_exponent).abs() < 1e-15);
        assert!((c.yamabe_exponent - f.yamabe_exponent).abs() < 1e-15);
        assert!((c.volume_exponent - f.volume_exponent).abs() < 1e-15);
        assert_eq!(c.curvature_constant, f.curvature_constant);
    }

    #[test]
    fn nonpositive_factors_are_refused() {
        let f = |_: &HPoint| -1.0;
        let fd = FdSpec::default();
        assert!(scalar_curv_yamabe(&f, &HPoint::IDENTITY, &fd).is_err());
        assert!(scalar_curv_connection(&f, &HPoint::IDENTITY, &fd).is_err());
    }
}
