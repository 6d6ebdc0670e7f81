#![allow(dead_code)]

use oc_geometry::{HPoint, Octonion};
use proptest::prelude::*;
use rand::{Rng, RngExt};

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> HPoint {
    let x = Octonion(std::array::from_fn(|_| rng.random_range(-scale..scale)));
    let t = std::array::from_fn(|_| rng.random_range(-scale..scale));
    HPoint::from_parts(x.0, t)
}

pub fn point_in_shell<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> HPoint {
    loop {
        let p = random_point(rng, 1.0);
        let n = p.norm();
        if n > 1e-3 {
            let target = rng.random_range(lo..hi);
            let d = target / n;
            return HPoint { x: p.x.scale(d), t: p.t.scale(d * d) };
        }
    }
}

pub fn unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    let v: [f64; 7] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let o = Octonion::from_imag(&v);
    o.scale(1.0 / o.norm())
}

pub fn hpoint(scale: f64) -> impl Strategy<Value = HPoint> {
    (prop::array::uniform8(-scale..scale), prop::array::uniform7(-scale..scale))
        .prop_map(|(x, t)| HPoint::from_parts(x, t))
}

pub fn unit_imag() -> impl Strategy<Value = Octonion> {
    prop::array::uniform7(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|a| a * a).sum::<f64>() > 1e-4)
        .prop_map(|v| {
            let o = Octonion::from_imag(&v);
            o.scale(1.0 / o.norm())
        })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
