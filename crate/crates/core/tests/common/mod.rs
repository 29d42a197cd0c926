#![allow(dead_code)]

use polyfock_core::{ExpPoly, GaussianRational, MultiMonomial, Rational};
use proptest::prelude::*;

pub fn rat() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rational::frac(n, d))
}

/// Gaussian rational, real about half the time.
pub fn gr() -> impl Strategy<Value = GaussianRational> {
    (rat(), rat(), any::<bool>()).prop_map(|(re, im, real)| {
        if real {
            GaussianRational::real(re)
        } else {
            GaussianRational::new(re, im)
        }
    })
}

pub fn small_gr() -> impl Strategy<Value = GaussianRational> {
    (-2i64..=2, -2i64..=2, 1i64..=2)
        .prop_map(|(a, b, d)| GaussianRational::new(Rational::frac(a, d), Rational::frac(b, d)))
}

/// Polynomial in `d` variables with every monomial of total degree `<= max_deg`.
pub fn poly(d: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = ExpPoly> {
    let mono = (
        proptest::collection::vec(0..=max_deg, d),
        proptest::collection::vec(0..=max_deg, d),
    )
        .prop_filter_map("degree bound", move |(z, zb)| {
            let total: u32 = z.iter().chain(&zb).sum();
            (total <= max_deg).then(|| MultiMonomial::new(z, zb))
        });
    proptest::collection::vec((mono, gr()), 0..=max_terms)
        .prop_map(move |t| ExpPoly::from_terms(d, t).expect("matching dimensions"))
}

pub fn poly1(max_deg: u32) -> impl Strategy<Value = ExpPoly> {
    poly(1, max_deg, 6)
}

/// Analytic polynomial in one variable.
pub fn analytic1(max_deg: u32) -> impl Strategy<Value = ExpPoly> {
    proptest::collection::vec((0..=max_deg, gr()), 0..=4).prop_map(|t| {
        ExpPoly::poly1(&t.into_iter().map(|(n, c)| (n, 0, c)).collect::<Vec<_>>())
    })
}

/// A polynomial times `exp(x + u.z + v.zbar)` with small data.
pub fn exp_poly(d: usize, max_deg: u32) -> impl Strategy<Value = ExpPoly> {
    (
        poly(d, max_deg, 4),
        small_gr(),
        proptest::collection::vec(small_gr(), d),
        proptest::collection::vec(small_gr(), d),
    )
        .prop_map(|(p, x, u, v)| if p.is_zero() { p } else { p.with_exponential(u, v).with_prefactor_exponent(x) })
}

pub fn g(n: i64) -> GaussianRational {
    GaussianRational::int(n)
}

pub fn mono(z: &[u32], zb: &[u32]) -> MultiMonomial {
    MultiMonomial::new(z.to_vec(), zb.to_vec())
}

/// Exact unitary matrices: phases times rational rotations.
pub fn unitary2() -> impl Strategy<Value = Vec<Vec<GaussianRational>>> {
    let phases = [
        GaussianRational::one(),
        GaussianRational::i(),
        GaussianRational::new(Rational::frac(3, 5), Rational::frac(4, 5)),
        GaussianRational::new(Rational::frac(5, 13), Rational::frac(-12, 13)),
    ];
    let rots = [(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17)];
    (0..4usize, 0..4usize, 0..4usize, 0..4usize).prop_map(move |(p, q, r, s)| {
        let (c, sn, h) = rots[r];
        let c = GaussianRational::frac(c, h);
        let sn = GaussianRational::frac(sn, h);
        let (a, b) = (&phases[p], &phases[q]);
        let w = &phases[s];
        vec![vec![a * &c * w, -(a * &sn)], vec![b * &sn * w, b * &c]]
    })
}
