//! Smooth test fields used by the verification suites and the CLI.

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::heisenberg::{gauge_norm, gauge_norm4, HPoint};
use crate::octonion::Octonion;

/// `f = 1 + a · exp(-c |ξ - ξ0|^4)` with the Euclidean coordinate norm.
/// Strictly positive and smooth with bounded derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpField {
    pub amplitude: f64,
    pub width: f64,
    pub center: [f64; 15],
}

impl BumpField {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut center = [0.0; 15];
        for c in center.iter_mut() {
            *c = rng.random_range(-0.5..0.5);
        }
        BumpField {
            amplitude: rng.random_range(0.05..0.5),
            width: rng.random_range(0.5..2.0),
            center,
        }
    }

    fn dist4(&self, p: &HPoint) -> f64 {
        let c = p.coords();
        let r2: f64 = c.iter().zip(self.center.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        r2 * r2
    }

    /// The factor `f`.
    pub fn factor(&self, p: &HPoint) -> f64 {
        1.0 + self.amplitude * (-self.width * self.dist4(p)).exp()
    }

    /// `h = ln f`.
    pub fn log_factor(&self, p: &HPoint) -> f64 {
        self.factor(p).ln()
    }

    /// `φ = f^{10}`.
    pub fn yamabe_factor(&self, p: &HPoint) -> f64 {
        self.factor(p).powi(10)
    }

    /// A point where the bump is active: within the width scale of the centre.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> HPoint {
        let r = self.width.powf(-0.25);
        let mut c = self.center;
        for v in c.iter_mut() {
            *v += rng.random_range(-0.4..0.4) * r;
        }
        HPoint::from_coords(&c)
    }
}

/// Spin(7)-invariant compactly supported bump `u = ψ(|ξ|^4 / R^4)` with
/// `ψ(s) = exp(1 - 1/(1 - s))` on `[0, 1)`, so `u(0) = 1`. With `inner > 0`
/// the bump becomes a shell supported in `inner < |ξ| < R` that vanishes
/// near the identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialBump {
    pub radius: f64,
    pub inner: f64,
}

impl RadialBump {
    pub fn centered(radius: f64) -> Self {
        RadialBump { radius, inner: 0.0 }
    }

    pub fn shell(inner: f64, radius: f64) -> Self {
        RadialBump { radius, inner }
    }

    pub fn value(&self, p: &HPoint) -> f64 {
        let n4 = gauge_norm4(p);
        if self.inner <= 0.0 {
            let s = n4 / self.radius.powi(4);
            if s >= 1.0 {
                0.0
            } else {
                (1.0 - 1.0 / (1.0 - s)).exp()
            }
        } else {
            let (a, b) = (self.inner.powi(4), self.radius.powi(4));
            if n4 <= a || n4 >= b {
                return 0.0;
            }
            // Maps (a, b) onto (-1, 1) and reuses the same profile.
            let s = (2.0 * n4 - a - b) / (b - a);
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    }
}

/// `f = |ξ|^{-1}`, whose metric `g0/|ξ|^2` is the cylinder metric.
pub fn inverse_norm(p: &HPoint) -> f64 {
    1.0 / gauge_norm(p)
}

/// Closed-form scalar curvature of the cylinder metric: `420 |x|^2 / |ξ|^2`.
pub fn cylinder_curvature(p: &HPoint) -> f64 {
    let n = gauge_norm(p);
    crate::yamabe::CURVATURE_CONSTANT * p.x.norm_sq() / (n * n)
}

/// A random point with gauge norm uniform in `(lo, hi)`: a uniform draw from
/// the coordinate cube, dilated onto the chosen sphere.
pub fn sample_shell<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> HPoint {
    loop {
        let x = Octonion(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let t = Octonion(std::array::from_fn(|i| if i == 0 { 0.0 } else { rng.random_range(-1.0..1.0) }));
        let p = HPoint::new(x, t);
        let n = gauge_norm(&p);
        if n > 1e-3 {
            let d = rng.random_range(lo..hi) / n;
            return HPoint { x: p.x.scale(d), t: p.t.scale(d * d) };
        }
    }
}
