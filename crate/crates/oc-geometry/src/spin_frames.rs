//! Left-multiplication frames `E^β`, associator matrices `N^{ab}`, and the
//! splitting `so(8) = so(7) ⊕ R^7`.

use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};

use crate::error::{GeometryError, Result};
use crate::octonion::{EPS3, EPS4, MUL};

pub type Matrix8 = SMatrix<f64, 8, 8>;
pub type Vector8 = SVector<f64, 8>;

/// Antisymmetry tolerance accepted by [`project_so7`].
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

fn check_unit(beta: usize) -> Result<()> {
    if (1..=7).contains(&beta) {
        Ok(())
    } else {
        Err(GeometryError::Index { what: "imaginary unit", value: beta })
    }
}

/// Matrix of `x ↦ e_β x` on R^8.
pub fn build_e(beta: usize) -> Result<Matrix8> {
    check_unit(beta)?;
    let mut m = Matrix8::zeros();
    m[(0, beta)] = -1.0;
    m[(beta, 0)] = 1.0;
    for a in 1..8 {
        for g in 1..8 {
            m[(a, g)] = f64::from(EPS3.get(g, a, beta));
        }
    }
    Ok(m)
}

/// `N^{ab}` with entries `N_{dc} = 2 ε_{abcd}`, so that
/// `E^a E^b = sign · E^β - N^{ab}` where `e_a e_b = sign · e_β`.
pub fn build_n(a: usize, b: usize) -> Result<Matrix8> {
    check_unit(a)?;
    check_unit(b)?;
    if a == b {
        return Err(GeometryError::Degenerate(format!("N^{{ab}} needs a != b, got a = b = {a}")));
    }
    let mut m = Matrix8::zeros();
    for d in 0..8 {
        for c in 0..8 {
            m[(d, c)] = 2.0 * f64::from(EPS4.get(a, b, c, d));
        }
    }
    Ok(m)
}

/// `(sign, β)` with `e_a e_b = sign · e_β` for distinct imaginary units.
pub fn unit_product(a: usize, b: usize) -> Result<(i8, usize)> {
    check_unit(a)?;
    check_unit(b)?;
    if a == b {
        return Err(GeometryError::Degenerate("product of a unit with itself is real".into()));
    }
    Ok(MUL.0[a][b])
}

/// The seven frames, index 0 holds `E^1`.
pub fn frames() -> &'static [Matrix8; 7] {
    static FRAMES: OnceLock<[Matrix8; 7]> = OnceLock::new();
    FRAMES.get_or_init(|| std::array::from_fn(|i| build_e(i + 1).expect("index in range")))
}

/// Frame `E^β` for `β` in 1..7, from the cached table.
pub fn e(beta: usize) -> &'static Matrix8 {
    &frames()[beta - 1]
}

/// Result of [`project_so7`].
#[derive(Clone, Debug, PartialEq)]
pub struct So8Decomposition {
    pub so7_part: Matrix8,
    /// Coefficients on `E^1..E^7`.
    pub r7_coeffs: [f64; 7],
}

impl So8Decomposition {
    pub fn reassemble(&self) -> Matrix8 {
        let mut m = self.so7_part;
        for (i, c) in self.r7_coeffs.iter().enumerate() {
            m += frames()[i] * *c;
        }
        m
    }
}

/// Split an antisymmetric matrix into its `so(7)` part and the `R^7` part
/// spanned by the frames, using `D_α = (1/8) Σ_a <D e_a, E^α e_a>`.
pub fn project_so7(d: &Matrix8) -> Result<So8Decomposition> {
    let residual = (d + d.transpose()).abs().max();
    let scale = d.abs().max().max(1.0);
    if residual > ANTISYMMETRY_TOL * scale {
        return Err(GeometryError::NotAntisymmetric { residual });
    }
    let mut coeffs = [0.0; 7];
    let mut so7 = *d;
    for (i, ea) in frames().iter().enumerate() {
        // Σ_a <D e_a, E e_a> is the Frobenius product of the two matrices.
        coeffs[i] = d.component_mul(ea).sum() / 8.0;
        so7 -= ea * coeffs[i];
    }
    Ok(So8Decomposition { so7_part: so7, r7_coeffs: coeffs })
}

/// Antisymmetric part `(M - M^T)/2`.
pub fn skew(m: &Matrix8) -> Matrix8 {
    (m - m.transpose()) * 0.5
}

/// Rank-2 antisymmetric matrix `u v^T - v u^T`.
pub fn wedge(u: &Vector8, v: &Vector8) -> Matrix8 {
    u * v.transpose() - v * u.transpose()
}
