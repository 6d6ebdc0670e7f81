//! Exhaustive and randomized checks of the octonion and frame algebra,
//! parameterized by the multiplication table so that a corrupted table can
//! be run as a negative control.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::octonion::{associator_with, MulTable, Octonion, EPS4};
use crate::spin_frames::{build_n, e, Matrix8};

/// Outcome of one named identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

impl AlgebraReport {
    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }
}

fn record(name: &'static str, cases: usize, max_residual: f64, tolerance: f64) -> IdentityCheck {
    IdentityCheck { name, cases, max_residual, tolerance, passed: max_residual <= tolerance }
}

pub fn random_octonion(rng: &mut ChaCha8Rng) -> Octonion {
    Octonion(std::array::from_fn(|_| StandardNormal.sample(rng)))
}

fn mat_of_left_mul(t: &MulTable, beta: usize) -> Matrix8 {
    let eb = Octonion::basis(beta);
    let mut m = Matrix8::zeros();
    for c in 0..8 {
        let col = t.mul(&eb, &Octonion::basis(c));
        for r in 0..8 {
            m[(r, c)] = col[r];
        }
    }
    m
}

/// Runs every algebra identity against the given table.
pub fn verify_algebra(t: &MulTable, samples: usize, seed: u64) -> AlgebraReport {
    let mut checks = Vec::new();

    // All 8^3 basis associators against the four-index symbol.
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let got = associator_with(t, &Octonion::basis(a), &Octonion::basis(b), &Octonion::basis(c));
                let want = Octonion(std::array::from_fn(|d| 2.0 * f64::from(EPS4.get(a, b, c, d))));
                worst = worst.max(got.max_abs_diff(&want));
                cases += 1;
            }
        }
    }
    checks.push(record("basis associators equal 2 eps_abcd e_d", cases, worst, 0.0));

    // Frames represent left multiplication by the table.
    let mut worst: f64 = 0.0;
    for beta in 1..8 {
        worst = worst.max((mat_of_left_mul(t, beta) - e(beta)).abs().max());
    }
    checks.push(record("E^beta is left multiplication", 7, worst, 0.0));

    let mut sq: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut nab: f64 = 0.0;
    for a in 1..8 {
        sq = sq.max((e(a) * e(a) + Matrix8::identity()).abs().max());
        for b in 1..8 {
            if a == b {
                continue;
            }
            anti = anti.max((e(a) * e(b) + e(b) * e(a)).abs().max());
            let (sign, beta) = t.0[a][b];
            let n = build_n(a, b).expect("distinct units");
            let lhs = e(a) * e(b);
            let rhs = if beta == 0 { -n } else { e(beta) * f64::from(sign) - n };
            nab = nab.max((lhs - rhs).abs().max());
        }
    }
    checks.push(record("(E^beta)^2 = -I", 7, sq, 0.0));
    checks.push(record("E^a E^b = -E^b E^a", 42, anti, 0.0));
    checks.push(record("E^a E^b = E^(ab) - N^ab", 42, nab, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut moufang, mut alt, mut normres, mut conjres): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let m = |a: &Octonion, b: &Octonion| t.mul(a, b);
    for _ in 0..samples {
        let u = random_octonion(&mut rng);
        let v = random_octonion(&mut rng);
        let x = random_octonion(&mut rng);
        let y = random_octonion(&mut rng);
        let scale = u.norm_sq() * v.norm() * x.norm();
        let uvu = m(&m(&u, &v), &u);
        let r1 = m(&uvu, &x).max_abs_diff(&m(&u, &m(&v, &m(&u, &x))));
        let r2 = m(&x, &uvu).max_abs_diff(&m(&m(&m(&x, &u), &v), &u));
        let s3 = u.norm_sq() * x.norm() * y.norm();
        let r3 = m(&m(&u, &m(&x, &y)), &u).max_abs_diff(&m(&m(&u, &x), &m(&y, &u)));
        moufang = moufang.max(r1.max(r2) / scale).max(r3 / s3);

        let s = u.norm_sq() * v.norm();
        let a1 = associator_with(t, &u, &u, &v).norm();
        let a2 = associator_with(t, &v, &u, &u).norm();
        let a3 = associator_with(t, &u, &v, &u).norm();
        alt = alt.max(a1.max(a2).max(a3) / s);

        let uv = m(&u, &v);
        normres = normres.max((uv.norm() - u.norm() * v.norm()).abs() / (u.norm() * v.norm()));
        conjres = conjres.max(uv.conj().max_abs_diff(&m(&v.conj(), &u.conj())) / (u.norm() * v.norm()));
    }
    checks.push(record("Moufang identities", samples, moufang, 1e-12));
    checks.push(record("alternativity", samples, alt, 1e-13));
    checks.push(record("|ab| = |a||b|", samples, normres, 1e-12));
    checks.push(record("conj(ab) = conj(b) conj(a)", samples, conjres, 1e-12));

    let passed = checks.iter().all(|c| c.passed);
    AlgebraReport { checks, passed }
}
