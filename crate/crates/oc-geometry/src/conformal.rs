//! Generators of the conformal group acting on the Heisenberg group:
//! dilations, left translations, Spin(7) rotations and the inversion.
//!
//! Conformal factors are stored as `λ` with `γ* g0 = λ² g0`; the factor of
//! the Yamabe convention is `λ^10`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::heisenberg::{gauge_norm, h_inv, h_mul, HPoint};
use crate::octonion::Octonion;

/// Default guard radius around the pole of the inversion.
pub const DEFAULT_INVERSION_EPS: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;

/// One generator of the conformal group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GenRecord", into = "GenRecord")]
pub enum GroupGen {
    Dilation(f64),
    Translation(HPoint),
    Rotation(Octonion),
    Inversion,
}

/// Serialized form of a generator, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenRecord {
    Dilation { delta: f64 },
    Translation { x: [f64; 8], t: [f64; 7] },
    Rotation { mu: [f64; 8] },
    Inversion,
}

impl TryFrom<GenRecord> for GroupGen {
    type Error = GeometryError;
    fn try_from(r: GenRecord) -> Result<Self> {
        match r {
            GenRecord::Dilation { delta } => GroupGen::dilation(delta),
            GenRecord::Translation { x, t } => Ok(GroupGen::Translation(HPoint::from_parts(x, t))),
            GenRecord::Rotation { mu } => GroupGen::rotation(Octonion(mu)),
            GenRecord::Inversion => Ok(GroupGen::Inversion),
        }
    }
}

impl From<GroupGen> for GenRecord {
    fn from(g: GroupGen) -> Self {
        match g {
            GroupGen::Dilation(delta) => GenRecord::Dilation { delta },
            GroupGen::Translation(q) => GenRecord::Translation { x: q.x.0, t: q.t.imag_coords() },
            GroupGen::Rotation(mu) => GenRecord::Rotation { mu: mu.0 },
            GroupGen::Inversion => GenRecord::Inversion,
        }
    }
}

impl GroupGen {
    pub fn dilation(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta.is_finite() {
            Ok(GroupGen::Dilation(delta))
        } else {
            Err(GeometryError::Domain(format!("dilation factor {delta} must be positive")))
        }
    }

    pub fn rotation(mu: Octonion) -> Result<Self> {
        if mu.re().abs() > UNIT_TOL || (mu.norm() - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::Domain("rotation needs a unit imaginary octonion".into()));
        }
        Ok(GroupGen::Rotation(mu))
    }

    pub fn translation(q: HPoint) -> Self {
        GroupGen::Translation(q)
    }

    /// The inverse generator.
    pub fn inverse(&self) -> GroupGen {
        match *self {
            GroupGen::Dilation(d) => GroupGen::Dilation(1.0 / d),
            GroupGen::Translation(q) => GroupGen::Translation(h_inv(&q)),
            // μ(μx) = -x, so S_{-μ} undoes S_μ.
            GroupGen::Rotation(mu) => GroupGen::Rotation(-mu),
            GroupGen::Inversion => GroupGen::Inversion,
        }
    }
}

fn inversion_guard(p: &HPoint) -> Result<f64> {
    let n = gauge_norm(p);
    if n <= DEFAULT_INVERSION_EPS {
        Err(GeometryError::Pole { index: None, norm: n })
    } else {
        Ok(n)
    }
}

/// Image of `p` under a generator.
pub fn apply_gen(g: &GroupGen, p: &HPoint) -> Result<HPoint> {
    Ok(match *g {
        GroupGen::Dilation(d) => HPoint { x: p.x.scale(d), t: p.t.scale(d * d) },
        GroupGen::Translation(q) => h_mul(&q, p),
        GroupGen::Rotation(mu) => HPoint { x: mu.mul(&p.x), t: mu.mul(&p.t).mul(&mu.conj()) },
        GroupGen::Inversion => {
            inversion_guard(p)?;
            // q = |x|^2 - t, and |q|^2 = |x|^4 + |t|^2.
            let q = Octonion::real(p.x.norm_sq()) - p.t;
            let q_inv = q.inverse()?;
            let n4 = q.norm_sq();
            HPoint { x: -q_inv.mul(&p.x), t: -p.t.scale(1.0 / n4) }
        }
    })
}

/// Conformal factor `λ` of `g` at `p`.
pub fn conf_factor(g: &GroupGen, p: &HPoint) -> Result<f64> {
    Ok(match *g {
        GroupGen::Dilation(d) => d,
        GroupGen::Translation(_) | GroupGen::Rotation(_) => 1.0,
        GroupGen::Inversion => {
            let n = inversion_guard(p)?;
            1.0 / (n * n)
        }
    })
}

/// Sequence of generators, applied right to left.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupWord(pub Vec<GroupGen>);

impl GroupWord {
    pub fn new(gens: Vec<GroupGen>) -> Self {
        GroupWord(gens)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Word of the inverse map: reversed, each generator inverted.
    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(GroupGen::inverse).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn apply(&self, p: &HPoint) -> Result<(HPoint, f64)> {
        apply_word(self, p)
    }
}

/// `(w(p), λ_w(p))` with the factor accumulated through the cocycle.
pub fn apply_word(w: &GroupWord, p: &HPoint) -> Result<(HPoint, f64)> {
    let mut q = *p;
    let mut lambda = 1.0;
    for (i, g) in w.0.iter().enumerate().rev() {
        let tag = |e: GeometryError| match e {
            GeometryError::Pole { norm, .. } => GeometryError::Pole { index: Some(i), norm },
            other => other,
        };
        lambda *= conf_factor(g, &q).map_err(tag)?;
        q = apply_gen(g, &q).map_err(tag)?;
    }
    Ok((q, lambda))
}

/// Glue map `D_t ∘ R ∘ A` between the inner and outer collars of the
/// annulus `t < |ξ| < 1` used for connected sums.
pub fn glue_map(t: f64, rotations: &GroupWord, p: &HPoint) -> Result<HPoint> {
    if !(t > 0.0 && t < 1.0) {
        return Err(GeometryError::Domain(format!("glue parameter {t} must lie in (0, 1)")));
    }
    if rotations.0.iter().any(|g| !matches!(g, GroupGen::Rotation(_))) {
        return Err(GeometryError::Domain("glue map accepts rotation words only".into()));
    }
    let (q, _) = apply_word(rotations, p)?;
    let n = gauge_norm(&q);
    if !(t < n && n < 1.0) {
        return Err(GeometryError::Annulus { t, norm: n });
    }
    let r = apply_gen(&GroupGen::Inversion, &q)?;
    apply_gen(&GroupGen::Dilation(t), &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_generators_are_refused() {
        assert!(GroupGen::dilation(0.0).is_err());
        assert!(GroupGen::rotation(Octonion::ONE).is_err());
        assert!(GroupGen::rotation(Octonion::basis(2).scale(2.0)).is_err());
    }

    #[test]
    fn pole_reports_generator_index() {
        let w = GroupWord(vec![GroupGen::Dilation(2.0), GroupGen::Inversion]);
        match apply_word(&w, &HPoint::IDENTITY) {
            Err(GeometryError::Pole { index, .. }) => assert_eq!(index, Some(1)),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn glue_map_checks_annulus() {
        let p = HPoint::new(Octonion::real(0.1), Octonion::ZERO);
        assert!(matches!(
            glue_map(0.25, &GroupWord::default(), &p),
            Err(GeometryError::Annulus { .. })
        ));
    }
}
