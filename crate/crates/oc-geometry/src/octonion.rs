//! Octonion arithmetic over the fixed seven-triple multiplication rule.
//!
//! The basis is `e0 = 1, e1..e7` with `e_a e_b = -δ_ab + ε_abc e_c` for
//! imaginary units. Products are evaluated through a signed lookup table so
//! that every structure constant is an exact integer.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// The seven oriented triples that fix the multiplication rule.
pub const OMEGA: [[usize; 3]; 7] = [
    [1, 2, 3],
    [2, 4, 6],
    [4, 3, 5],
    [3, 6, 7],
    [6, 5, 1],
    [5, 7, 2],
    [7, 1, 4],
];

/// The seven oriented quadruples carrying the associator. The orientation
/// of the last one is the one forced by [`OMEGA`]: `(e2 e6) e5 - e2 (e6 e5) = 2 e3`.
pub const LAMBDA: [[usize; 4]; 7] = [
    [5, 4, 6, 7],
    [7, 3, 5, 1],
    [1, 6, 7, 2],
    [2, 5, 1, 4],
    [4, 7, 2, 3],
    [3, 1, 4, 6],
    [2, 6, 5, 3],
];

/// Below this magnitude an octonion is treated as zero by [`Octonion::inverse`].
pub const DEFAULT_ZERO_EPS: f64 = 1e-300;

const fn parity(p: &[usize]) -> i8 {
    let mut inv = 0;
    let mut i = 0;
    while i < p.len() {
        let mut j = i + 1;
        while j < p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
            j += 1;
        }
        i += 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Totally antisymmetric three-index symbol on indices 1..7 (index 0 unused).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsTable3(pub [[[i8; 8]; 8]; 8]);

/// Totally antisymmetric four-index symbol on indices 0..7.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsTable4(pub [[[[i8; 8]; 8]; 8]; 8]);

impl EpsTable3 {
    pub const fn canonical() -> Self {
        let mut t = [[[0i8; 8]; 8]; 8];
        let mut q = 0;
        while q < 7 {
            let tri = OMEGA[q];
            let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
            let mut k = 0;
            while k < 6 {
                let p = perms[k];
                t[tri[p[0]]][tri[p[1]]][tri[p[2]]] = parity(&p);
                k += 1;
            }
            q += 1;
        }
        EpsTable3(t)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> i8 {
        self.0[a][b][c]
    }
}

impl EpsTable4 {
    pub const fn canonical() -> Self {
        let mut t = [[[[0i8; 8]; 8]; 8]; 8];
        let mut q = 0;
        while q < 7 {
            let quad = LAMBDA[q];
            let mut i = 0;
            while i < 4 {
                let mut j = 0;
                while j < 4 {
                    let mut k = 0;
                    while k < 4 {
                        let l = if i + j + k <= 6 { 6 - i - j - k } else { 4 };
                        if i != j && j != k && i != k && l < 4 && l != i && l != j && l != k {
                            t[quad[i]][quad[j]][quad[k]][quad[l]] = parity(&[i, j, k, l]);
                        }
                        k += 1;
                    }
                    j += 1;
                }
                i += 1;
            }
            q += 1;
        }
        EpsTable4(t)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> i8 {
        self.0[a][b][c][d]
    }
}

pub static EPS3: EpsTable3 = EpsTable3::canonical();
pub static EPS4: EpsTable4 = EpsTable4::canonical();

/// Signed basis products: `e_a e_b = sign * e_index`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MulTable(pub [[(i8, usize); 8]; 8]);

impl MulTable {
    pub const fn from_eps(eps: &EpsTable3) -> Self {
        let mut t = [[(0i8, 0usize); 8]; 8];
        let mut a = 0;
        while a < 8 {
            let mut b = 0;
            while b < 8 {
                t[a][b] = if a == 0 {
                    (1, b)
                } else if b == 0 {
                    (1, a)
                } else if a == b {
                    (-1, 0)
                } else {
                    let mut c = 1;
                    let mut found = (0, 0);
                    while c < 8 {
                        if eps.0[a][b][c] != 0 {
                            found = (eps.0[a][b][c], c);
                        }
                        c += 1;
                    }
                    found
                };
                b += 1;
            }
            a += 1;
        }
        MulTable(t)
    }

    /// Table with the sign of one triple (and its permutations) reversed.
    /// Only used as a negative control for the verification suite.
    pub fn with_flipped_triple(triple: usize) -> Self {
        let mut eps = EpsTable3::canonical();
        let tri = OMEGA[triple % 7];
        for &a in &tri {
            for &b in &tri {
                for &c in &tri {
                    eps.0[a][b][c] = -eps.0[a][b][c];
                }
            }
        }
        MulTable::from_eps(&eps)
    }

    pub fn mul(&self, a: &Octonion, b: &Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for i in 0..8 {
            if a.0[i] == 0.0 {
                continue;
            }
            for j in 0..8 {
                let (s, k) = self.0[i][j];
                out[k] += f64::from(s) * a.0[i] * b.0[j];
            }
        }
        Octonion(out)
    }
}

pub static MUL: MulTable = MulTable::from_eps(&EpsTable3::canonical());

/// An element of the octonion algebra, coefficients on `e0..e7`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn new(c: [f64; 8]) -> Self {
        Octonion(c)
    }

    /// Basis unit `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub fn real(r: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = r;
        Octonion(c)
    }

    /// Purely imaginary octonion from its seven imaginary coordinates.
    pub fn from_imag(v: &[f64; 7]) -> Self {
        let mut c = [0.0; 8];
        c[1..].copy_from_slice(v);
        Octonion(c)
    }

    pub fn imag_coords(&self) -> [f64; 7] {
        let mut v = [0.0; 7];
        v.copy_from_slice(&self.0[1..]);
        v
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn im(&self) -> Octonion {
        let mut c = self.0;
        c[0] = 0.0;
        Octonion(c)
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0.map(|v| -v);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &Octonion) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Octonion {
        Octonion(self.0.map(|v| v * s))
    }

    pub fn mul(&self, other: &Octonion) -> Octonion {
        MUL.mul(self, other)
    }

    /// Inverse `conj(a)/|a|^2`, refused when `|a| <= zero_eps`.
    pub fn inverse_with(&self, zero_eps: f64) -> Result<Octonion> {
        let n2 = self.norm_sq();
        if n2.sqrt() <= zero_eps {
            return Err(GeometryError::Domain(format!(
                "octonion of norm {:e} has no inverse",
                n2.sqrt()
            )));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn inverse(&self) -> Result<Octonion> {
        self.inverse_with(DEFAULT_ZERO_EPS)
    }

    pub fn max_abs_diff(&self, other: &Octonion) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `(ab)c - a(bc)`.
pub fn associator(a: &Octonion, b: &Octonion, c: &Octonion) -> Octonion {
    associator_with(&MUL, a, b, c)
}

pub fn associator_with(t: &MulTable, a: &Octonion, b: &Octonion, c: &Octonion) -> Octonion {
    t.mul(&t.mul(a, b), c) - t.mul(a, &t.mul(b, c))
}

impl Index<usize> for Octonion {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Octonion {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, o: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(o.0.iter()) {
            *x += y;
        }
        Octonion(c)
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, o: Octonion) {
        *self = *self + o;
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, o: Octonion) -> Octonion {
        self + (-o)
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, o: Octonion) {
        *self = *self - o;
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|v| -v))
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, o: Octonion) -> Octonion {
        MUL.mul(&self, &o)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, s: f64) -> Octonion {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_antisymmetric() {
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    assert_eq!(EPS3.0[a][b][c], -EPS3.0[b][a][c]);
                    assert_eq!(EPS3.0[a][b][c], -EPS3.0[a][c][b]);
                    for d in 0..8 {
                        assert_eq!(EPS4.get(a, b, c, d), -EPS4.get(b, a, c, d));
                        assert_eq!(EPS4.get(a, b, c, d), -EPS4.get(a, b, d, c));
                        assert_eq!(EPS4.get(a, b, c, d), -EPS4.get(a, c, b, d));
                    }
                }
            }
        }
    }

    #[test]
    fn each_distinct_pair_lies_in_exactly_one_triple() {
        for a in 1..8 {
            for b in 1..8 {
                let hits = (1..8).filter(|&c| EPS3.get(a, b, c) != 0).count();
                assert_eq!(hits, usize::from(a != b));
            }
        }
    }

    #[test]
    fn inverse_refuses_zero() {
        assert!(Octonion::ZERO.inverse().is_err());
    }
}
