//! Schottky-type groups: loxodromic generators, reduced-word enumeration,
//! orbit counting and the critical exponent, Patterson–Sullivan atoms, the
//! Nayatani factor `φ_Γ` and the curvature of the invariant metric.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::{apply_gen, apply_word, GroupGen, GroupWord};
use crate::error::{GeometryError, Result};
use crate::fields::sample_shell;
use crate::green::{green_moment, DEFAULT_POLE_EPS};
use crate::heisenberg::{gauge_norm, h_inv, h_mul, FdSpec, HPoint};
use crate::octonion::Octonion;
use crate::siegel::{
    act_homogeneous, boundary_to_h, hyp_distance,
    pairing_value, phi_chi, project, siegel_word, BoundaryPoint, SiegelGen, SiegelPoint,
    DEFAULT_SOUTH_EPS,
};
use crate::yamabe::{scalar_curv_yamabe, HALF_WEIGHT, Q};

/// Default cap on the number of enumerated words.
pub const DEFAULT_WORD_BUDGET: usize = 4_000_000;
/// Fewest orbit points accepted by [`estimate_delta`].
pub const MIN_ORBIT_POINTS: usize = 50;

/// A finitely generated group given by generator words in the Heisenberg
/// model; the Siegel words are derived from them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchottkyGroup {
    pub generators: Vec<GroupWord>,
    #[serde(default = "SiegelPoint::base")]
    pub base_z: SiegelPoint,
    #[serde(default = "SiegelPoint::base")]
    pub base_w: SiegelPoint,
}

impl SchottkyGroup {
    pub fn new(generators: Vec<GroupWord>) -> Result<Self> {
        let g = SchottkyGroup { generators, base_z: SiegelPoint::base(), base_w: SiegelPoint::base() };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() || self.generators.iter().any(GroupWord::is_empty) {
            return Err(GeometryError::Degenerate("generators must be nonempty words".into()));
        }
        if !self.base_z.is_interior() || !self.base_w.is_interior() {
            return Err(GeometryError::Domain("base points must be interior".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Heisenberg word of a letter.
    pub fn letter_word(&self, l: Letter) -> GroupWord {
        let w = &self.generators[l.generator];
        if l.inverse {
            w.inverse()
        } else {
            w.clone()
        }
    }

    fn siegel_letters(&self) -> Vec<Vec<SiegelGen>> {
        // Index 2i is generator i, 2i+1 its inverse.
        self.generators
            .iter()
            .flat_map(|w| [siegel_word(w), siegel_word(&w.inverse())])
            .collect()
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn code(&self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word, read left to right as a composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ReducedWord(pub Vec<Letter>);

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_group_word(&self, g: &SchottkyGroup) -> GroupWord {
        self.0.iter().fold(GroupWord::default(), |acc, l| acc.compose(&g.letter_word(*l)))
    }
}

fn check_budget(k: usize, max_len: usize, budget: usize) -> Result<()> {
    let mut total: usize = 0;
    let mut level: usize = 2 * k;
    for _ in 0..max_len {
        total = total.saturating_add(level);
        if total > budget {
            return Err(GeometryError::Capacity { requested: total, budget });
        }
        level = level.saturating_mul((2 * k).saturating_sub(1).max(1));
    }
    Ok(())
}

/// Letters that may precede `first` in a reduced word.
fn prefixes(k: usize, first: Option<Letter>) -> impl Iterator<Item = Letter> {
    (0..k)
        .flat_map(|g| [false, true].map(move |inverse| Letter { generator: g, inverse }))
        .filter(move |l| first.is_none_or(|f| !l.cancels(&f)))
}

/// All reduced words of length `1..=max_len`, shortest first.
pub fn enumerate_words(g: &SchottkyGroup, max_len: usize) -> Result<Vec<ReducedWord>> {
    enumerate_words_with_budget(g, max_len, DEFAULT_WORD_BUDGET)
}

pub fn enumerate_words_with_budget(
    g: &SchottkyGroup,
    max_len: usize,
    budget: usize,
) -> Result<Vec<ReducedWord>> {
    if max_len == 0 {
        return Err(GeometryError::Domain("word length must be at least 1".into()));
    }
    let k = g.rank();
    check_budget(k, max_len, budget)?;
    let mut out = Vec::new();
    let mut frontier = vec![ReducedWord::default()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in prefixes(k, w.0.first().copied()) {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(l);
                v.extend_from_slice(&w.0);
                next.push(ReducedWord(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// One orbit point `γ(w)` with its distance from `z`.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub word: ReducedWord,
    pub point: SiegelPoint,
    /// `2 Re y + |x|^2`, propagated multiplicatively so it keeps full
    /// relative precision when the point approaches the boundary.
    pub height: f64,
    pub distance: f64,
}

/// Applies a Siegel word to a point whose height is known. The form
/// `2 Re(y z̄) + |x|^2` is invariant, so only the division by `|z|^2` at
/// each projection changes the height.
fn step(w: &[SiegelGen], p: &SiegelPoint, height: f64) -> Result<(SiegelPoint, f64)> {
    let mut p = *p;
    let mut h = height;
    for g in w.iter().rev() {
        g.check()?;
        let v = act_homogeneous(g, &p.lift());
        h /= v[2].norm_sq();
        p = project(&v)?;
    }
    Ok((p, h))
}

/// Distance from heights supplied by the caller.
fn distance_with_heights(z: &SiegelPoint, hz: f64, w: &SiegelPoint, hw: f64) -> Result<f64> {
    if !(hz < 0.0 && hw < 0.0) {
        return Err(GeometryError::Domain(format!("point is not interior (height {:e})", hz.max(hw))));
    }
    let c = pairing_value(z, w).norm() / (hz * hw).sqrt();
    Ok(2.0 * c.max(1.0).acosh())
}

/// Orbit of the base point `w` under every reduced word of length
/// `1..=max_len`. Words are grown by prefixing a letter, so each new point
/// costs one generator application.
pub fn orbit(g: &SchottkyGroup, max_len: usize) -> Result<Vec<OrbitPoint>> {
    if max_len == 0 {
        return Err(GeometryError::Domain("word length must be at least 1".into()));
    }
    let k = g.rank();
    check_budget(k, max_len, DEFAULT_WORD_BUDGET)?;
    let letters = g.siegel_letters();
    let hz = g.base_z.height();
    let mut out: Vec<OrbitPoint> = Vec::new();
    let mut frontier = vec![OrbitPoint {
        word: ReducedWord::default(),
        point: g.base_w,
        height: g.base_w.height(),
        distance: hyp_distance(&g.base_z, &g.base_w)?,
    }];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * (2 * k).max(2));
        for op in &frontier {
            for l in prefixes(k, op.word.0.first().copied()) {
                let (point, height) = step(&letters[l.code()], &op.point, op.height)?;
                let distance = distance_with_heights(&g.base_z, hz, &point, height)?;
                let mut v = Vec::with_capacity(op.word.len() + 1);
                v.push(l);
                v.extend_from_slice(&op.word.0);
                next.push(OrbitPoint { word: ReducedWord(v), point, height, distance });
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Critical exponent estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    /// Twice the slope of `log N(T)` against `T`, clamped to `[0, Q]`.
    pub value: f64,
    pub word_length: usize,
    /// RMS residual of the log-count fit.
    pub fit_residual: f64,
    /// Fit window `[T_c/2, T_c]`, where `T_c` is the smallest distance
    /// reached by a word of maximal length: below it the count is complete.
    pub window: (f64, f64),
    /// Root of `Z_L(s) = Z_{L-1}(s)` for the level sums
    /// `Z_l(s) = Σ_{|γ| = l} e^{-s d/2}`, an independent cross-check.
    pub pressure: f64,
    pub s_low: f64,
    pub s_high: f64,
    /// Partial Poincaré sums at `s_low` and `s_high`.
    pub series: (f64, f64),
    pub orbit_points: usize,
}

fn level_sum(points: &[OrbitPoint], level: usize, s: f64) -> f64 {
    points.iter().filter(|p| p.word.len() == level).map(|p| (-0.5 * s * p.distance).exp()).sum()
}

fn pressure_root(points: &[OrbitPoint], max_len: usize) -> f64 {
    if max_len < 2 {
        return f64::NAN;
    }
    let f = |s: f64| level_sum(points, max_len, s).ln() - level_sum(points, max_len - 1, s).ln();
    let (mut lo, mut hi) = (0.0, Q);
    if f(lo) <= 0.0 {
        return 0.0;
    }
    if f(hi) >= 0.0 {
        return Q;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Estimates the critical exponent from an already computed orbit.
pub fn estimate_delta_from_orbit(points: &[OrbitPoint], max_len: usize) -> Result<DeltaEstimate> {
    if points.len() < MIN_ORBIT_POINTS {
        return Err(GeometryError::InsufficientData { have: points.len(), need: MIN_ORBIT_POINTS });
    }
    let t_c = points
        .iter()
        .filter(|p| p.word.len() == max_len)
        .map(|p| p.distance)
        .fold(f64::INFINITY, f64::min);
    let mut d: Vec<f64> = points.iter().map(|p| p.distance).collect();
    d.sort_by(f64::total_cmp);
    let lo = 0.5 * t_c;
    // (T, log N(T)) at every distinct distance inside the window.
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut i = 0;
    while i < d.len() {
        let mut j = i;
        while j + 1 < d.len() && d[j + 1] == d[i] {
            j += 1;
        }
        if d[i] >= lo && d[i] <= t_c {
            xs.push(d[i]);
            ys.push(((j + 1) as f64).ln());
        }
        i = j + 1;
    }
    if xs.len() < 2 {
        return Err(GeometryError::InsufficientData { have: xs.len(), need: 2 });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let resid = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (my + slope * (x - mx));
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let value = (2.0 * slope).clamp(0.0, Q);
    let s_low = (value - 0.25).max(0.0);
    let s_high = value + 0.25;
    let series = (
        points.iter().map(|p| (-0.5 * s_low * p.distance).exp()).sum(),
        points.iter().map(|p| (-0.5 * s_high * p.distance).exp()).sum(),
    );
    Ok(DeltaEstimate {
        value,
        word_length: max_len,
        fit_residual: resid,
        window: (lo, t_c),
        pressure: pressure_root(points, max_len),
        s_low,
        s_high,
        series,
        orbit_points: points.len(),
    })
}

pub fn estimate_delta(g: &SchottkyGroup, max_len: usize) -> Result<DeltaEstimate> {
    estimate_delta_from_orbit(&orbit(g, max_len)?, max_len)
}

fn translation(q: &HPoint) -> Option<GroupGen> {
    (q.max_abs_diff(&HPoint::IDENTITY) > 0.0).then_some(GroupGen::Translation(*q))
}

/// Conjugate of the dilation `D_δ` by a map sending `0 ↦ p` and `∞ ↦ q`,
/// so that `p` attracts and `q` repels.
pub fn make_loxodromic(p: &HPoint, q: &BoundaryPoint, delta: f64) -> Result<GroupWord> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GeometryError::Domain(format!("contraction {delta} must lie in (0, 1)")));
    }
    let d = GroupGen::Dilation(delta);
    match q {
        BoundaryPoint::Infinity => {
            let mut w = Vec::new();
            w.extend(translation(p));
            w.push(d);
            w.extend(translation(&h_inv(p)));
            Ok(GroupWord(w))
        }
        BoundaryPoint::Finite(q) => {
            let rel = h_mul(&h_inv(q), p);
            if gauge_norm(&rel) <= 1e-12 {
                return Err(GeometryError::Degenerate("fixed points coincide".into()));
            }
            let r = apply_gen(&GroupGen::Inversion, &rel)?;
            let conj = GroupWord(
                [translation(q), Some(GroupGen::Inversion), translation(&r)].into_iter().flatten().collect(),
            );
            Ok(conj.compose(&GroupWord(vec![d])).compose(&conj.inverse()))
        }
    }
}

/// One atom of a discrete measure on the Heisenberg group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub zeta: HPoint,
    pub m: f64,
}

/// Finite atomic approximation of a conformal density of exponent `delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
    pub delta: f64,
}

impl AtomicMeasure {
    pub fn single(zeta: HPoint, delta: f64) -> Self {
        AtomicMeasure { atoms: vec![Atom { zeta, m: 1.0 }], delta }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.m).sum()
    }

    pub fn normalized(mut self) -> Self {
        let t = self.total_mass();
        if t > 0.0 {
            for a in &mut self.atoms {
                a.m /= t;
            }
        }
        self
    }

    /// Transport by `γ` as a conformal density: atoms move to `γζ` and
    /// masses pick up `λ(γ, ζ)^δ`.
    pub fn conformal_transport(&self, gamma: &GroupWord) -> Result<AtomicMeasure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let (z, lambda) = apply_word(gamma, &a.zeta)?;
                Ok(Atom { zeta: z, m: a.m * lambda.powf(self.delta) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomicMeasure { atoms, delta: self.delta })
    }

    /// Smallest gauge distance from `xi` to an atom.
    pub fn distance_to_atoms(&self, xi: &HPoint) -> f64 {
        self.atoms
            .iter()
            .map(|a| gauge_norm(&h_mul(&h_inv(xi), &a.zeta)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Patterson–Sullivan approximation plus bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PattersonSullivan {
    pub measure: AtomicMeasure,
    pub s: f64,
    pub word_length: usize,
    /// Atoms whose shadow fell on the excluded point at infinity.
    pub dropped: usize,
}

/// Boundary shadow of an interior point: radial projection in the ball
/// model, then back to the Siegel boundary.
pub fn shadow(p: &SiegelPoint) -> Result<SiegelPoint> {
    shadow_with_height(p, p.height())
}

/// [`shadow`] with a caller-supplied height. The composition of inverse
/// Cayley, radial scaling by `1/r` and Cayley is evaluated in closed form:
/// with `ε = 1/r - 1` and `A = (2 + ε) + ε y`,
/// `x' = (2/r) A^{-1} x` and `y' = (ε + (2 + ε) y) A^{-1}`, where
/// `1 - r^2 = -2 h / |1 - y|^2`. This avoids forming `1 + v2` near the
/// southern pole.
pub fn shadow_with_height(p: &SiegelPoint, height: f64) -> Result<SiegelPoint> {
    if !(height < 0.0) {
        return Err(GeometryError::Domain(format!("point is not interior (height {height:e})")));
    }
    let one_minus_y = Octonion::ONE - p.y;
    let u = -2.0 * height / one_minus_y.norm_sq();
    if u >= 1.0 {
        return Err(GeometryError::Degenerate("the ball centre has no shadow".into()));
    }
    let r = (1.0 - u).sqrt();
    let eps = u / ((1.0 + r) * r);
    let a = Octonion::real(2.0 + eps) + p.y.scale(eps);
    if a.norm() <= DEFAULT_SOUTH_EPS * one_minus_y.norm() {
        return Err(GeometryError::SouthPole);
    }
    let ai = a.inverse()?;
    Ok(SiegelPoint {
        x: ai.mul(&p.x).scale(2.0 / r),
        y: (Octonion::real(eps) + p.y.scale(2.0 + eps)).mul(&ai),
    })
}

/// Atoms at the shadows of `γ(w)` with weights `e^{-s d(z, γw)/2} χ`,
/// normalised to mass 1. `delta` is the exponent carried by the measure.
pub fn patterson_sullivan_from_orbit(
    points: &[OrbitPoint],
    s: f64,
    delta: f64,
    word_length: usize,
) -> Result<PattersonSullivan> {
    if !(s > delta) {
        return Err(GeometryError::Domain(format!("s = {s} must exceed the exponent {delta}")));
    }
    let mut logs = Vec::with_capacity(points.len());
    let mut dropped = 0;
    for op in points {
        let b = match shadow_with_height(&op.point, op.height) {
            Ok(b) => b,
            Err(GeometryError::SouthPole) => {
                dropped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let zeta = boundary_to_h(&b)?;
        let (phi, _) = phi_chi(&b, delta);
        logs.push((zeta, -0.5 * s * op.distance + 0.5 * delta * phi.ln()));
    }
    if logs.is_empty() {
        return Err(GeometryError::InsufficientData { have: 0, need: 1 });
    }
    let top = logs.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    let atoms = logs.into_iter().map(|(zeta, l)| Atom { zeta, m: (l - top).exp() }).collect();
    Ok(PattersonSullivan {
        measure: AtomicMeasure { atoms, delta }.normalized(),
        s,
        word_length,
        dropped,
    })
}

/// Builds the orbit once, estimates the exponent on it and uses that
/// estimate as the exponent of the measure.
pub fn patterson_sullivan(g: &SchottkyGroup, s: f64, max_len: usize) -> Result<(PattersonSullivan, DeltaEstimate)> {
    let points = orbit(g, max_len)?;
    let est = estimate_delta_from_orbit(&points, max_len)?;
    Ok((patterson_sullivan_from_orbit(&points, s, est.value, max_len)?, est))
}

/// Measure with a frozen exponent, for comparing approximations at several
/// word lengths against one limiting density.
pub fn patterson_sullivan_with_exponent(
    g: &SchottkyGroup,
    s: f64,
    delta: f64,
    max_len: usize,
) -> Result<PattersonSullivan> {
    patterson_sullivan_from_orbit(&orbit(g, max_len)?, s, delta, max_len)
}

/// Largest relative mismatch between the weights of the orbit measure based
/// at `z` and the measure based at `γz` on the translated orbit points.
/// Distance invariance makes the two agree term by term.
pub fn base_change_residual(g: &SchottkyGroup, gamma: &GroupWord, s: f64, max_len: usize) -> Result<f64> {
    let gw = siegel_word(gamma);
    let (gz, hgz) = step(&gw, &g.base_z, g.base_z.height())?;
    let mut worst: f64 = 0.0;
    for op in orbit(g, max_len)? {
        let (moved, hm) = step(&gw, &op.point, op.height)?;
        let a = -0.5 * s * op.distance;
        let b = -0.5 * s * distance_with_heights(&gz, hgz, &moved, hm)?;
        worst = worst.max(((b - a).exp() - 1.0).abs());
    }
    Ok(worst)
}

/// `φ_Γ(ξ) = (Σ_i m_i G_0(ξ, ζ_i)^κ)^{1/κ}` with `κ = δ/10`.
pub fn phi_gamma(xi: &HPoint, mu: &AtomicMeasure, cq: f64) -> Result<f64> {
    if !(mu.delta > 0.0) {
        return Err(GeometryError::Degenerate("exponent must be positive for the power mean".into()));
    }
    let kappa = mu.delta / HALF_WEIGHT;
    let mut logs = Vec::with_capacity(mu.atoms.len());
    for a in mu.atoms.iter().filter(|a| a.m > 0.0) {
        let n = gauge_norm(&h_mul(&h_inv(xi), &a.zeta));
        if n <= DEFAULT_POLE_EPS {
            return Err(GeometryError::Pole { index: None, norm: n });
        }
        logs.push(a.m.ln() + kappa * (cq.ln() + (2.0 - Q) * n.ln()));
    }
    if logs.is_empty() {
        return Err(GeometryError::Degenerate("measure has no mass".into()));
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    Ok((lse / kappa).exp())
}

/// `|φ_Γ(γξ) / (λ(γ,ξ)^{-10} φ_Γ(ξ)) - 1|`.
pub fn equivariance_residual(xi: &HPoint, mu: &AtomicMeasure, gamma: &GroupWord, cq: f64) -> Result<f64> {
    let (gx, lambda) = apply_word(gamma, xi)?;
    let lhs = phi_gamma(&gx, mu, cq)?;
    let rhs = lambda.powf(-HALF_WEIGHT) * phi_gamma(xi, mu, cq)?;
    Ok((lhs / rhs - 1.0).abs())
}

/// Scalar curvature of `φ_Γ^{1/5} g0` at `ξ`.
pub fn nayatani_curvature(xi: &HPoint, mu: &AtomicMeasure, cq: f64, fd: &FdSpec) -> Result<f64> {
    phi_gamma(xi, mu, cq)?;
    let field = |p: &HPoint| phi_gamma(p, mu, cq).unwrap_or(f64::NAN);
    scalar_curv_yamabe(&field, xi, fd)
}

/// Curvature of the metric built from the Green-kernel moment
/// `G_0(·, ζ)^{δ/10}`, the one-atom member of the exponent family. Its sign
/// is the sign of `10 - δ` off the vertical axis through `ζ`.
pub fn moment_curvature(xi: &HPoint, zeta: &HPoint, delta: f64, cq: f64, fd: &FdSpec) -> Result<f64> {
    green_moment(xi, zeta, delta, cq)?;
    let field = |p: &HPoint| green_moment(p, zeta, delta, cq).unwrap_or(f64::NAN);
    scalar_curv_yamabe(&field, xi, fd)
}

/// Flat export form of a measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureExport {
    pub delta_hat: f64,
    pub atoms: Vec<AtomExport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomExport {
    pub zeta: Vec<f64>,
    pub m: f64,
}

impl From<&AtomicMeasure> for MeasureExport {
    fn from(mu: &AtomicMeasure) -> Self {
        MeasureExport {
            delta_hat: mu.delta,
            atoms: mu.atoms.iter().map(|a| AtomExport { zeta: a.zeta.coords().to_vec(), m: a.m }).collect(),
        }
    }
}

impl TryFrom<&MeasureExport> for AtomicMeasure {
    type Error = GeometryError;
    fn try_from(e: &MeasureExport) -> Result<Self> {
        let atoms = e
            .atoms
            .iter()
            .map(|a| {
                let c: [f64; 15] = a.zeta.as_slice().try_into().map_err(|_| GeometryError::Index {
                    what: "atom coordinates",
                    value: a.zeta.len(),
                })?;
                Ok(Atom { zeta: HPoint::from_coords(&c), m: a.m })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomicMeasure { atoms, delta: e.delta_hat })
    }
}

/// `n` points in the gauge annulus `r_min < |ξ| < r_max`, each at least
/// `clearance` from every atom.
pub fn sample_regular_points<R: Rng + ?Sized>(
    mu: &AtomicMeasure,
    n: usize,
    (r_min, r_max): (f64, f64),
    clearance: f64,
    rng: &mut R,
) -> Result<Vec<HPoint>> {
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > 1000 * n.max(1) {
            return Err(GeometryError::InsufficientData { have: out.len(), need: n });
        }
        let p = sample_shell(rng, r_min, r_max);
        if mu.distance_to_atoms(&p) >= clearance {
            out.push(p);
        }
    }
    Ok(out)
}
