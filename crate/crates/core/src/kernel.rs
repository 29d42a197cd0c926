//! Reproducing kernels of the true-poly-Fock spaces and kernel projections.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::decomp::true_decompose;
use crate::error::{Error, Result};
use crate::poly::{ExpPoly, MultiMonomial};
use crate::scalar::{GaussianRational, Rational};

/// Exponents of `(zeta, zeta_bar, z, z_bar)`.
pub type KernelExp = [u32; 4];

const ZETA: usize = 0;
const ZETA_BAR: usize = 1;
const Z: usize = 2;
const Z_BAR: usize = 3;

/// `q_z(zeta) = Q(zeta, zeta_bar, z, z_bar) exp(zeta z_bar)` for one level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelFunc {
    level: u32,
    terms: BTreeMap<KernelExp, Rational>,
}

fn push(terms: &mut BTreeMap<KernelExp, Rational>, e: KernelExp, c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = terms.entry(e).or_insert_with(Rational::zero);
    *entry += &c;
    if entry.is_zero() {
        terms.remove(&e);
    }
}

type Poly4 = BTreeMap<KernelExp, Rational>;

fn shifted(e: KernelExp, var: usize) -> KernelExp {
    let mut e = e;
    e[var] += 1;
    e
}

/// `x P - y P - d/dvar P`.
fn first_order(p: &Poly4, plus: usize, minus: usize, diff: usize) -> Poly4 {
    let mut out = Poly4::new();
    for (e, c) in p {
        push(&mut out, shifted(*e, plus), c.clone());
        push(&mut out, shifted(*e, minus), -c.clone());
        if e[diff] > 0 {
            let mut d = *e;
            d[diff] -= 1;
            push(&mut out, d, -(c * &Rational::int(e[diff])));
        }
    }
    out
}

impl KernelFunc {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Polynomial part, keyed by `(zeta, zeta_bar, z, z_bar)` exponents.
    pub fn terms(&self) -> &BTreeMap<KernelExp, Rational> {
        &self.terms
    }

    /// `zeta -> q_{z0}(zeta)` as a one-variable function.
    pub fn at(&self, z0: &GaussianRational) -> ExpPoly {
        let zb0 = z0.conj();
        let terms = self.terms.iter().map(|(e, c)| {
            let w = z0.pow(e[Z]) * zb0.pow(e[Z_BAR]);
            (MultiMonomial::new(vec![e[ZETA]], vec![e[ZETA_BAR]]), w.scale(c))
        });
        let f = ExpPoly::from_terms(1, terms).expect("one-dimensional terms");
        if f.is_zero() {
            f
        } else {
            f.with_exponential(vec![zb0], vec![GaussianRational::zero()])
        }
    }

    /// `q_z(zeta) = conj(q_zeta(z))`, compared term by term after swapping.
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mirrored = [e[Z_BAR], e[Z], e[ZETA_BAR], e[ZETA]];
            self.terms.get(&mirrored) == Some(c)
        })
    }
}

/// `(1/(k-1)!) (zeta_bar - d/dzeta)^{k-1} (z - d/dz_bar)^{k-1} exp(zeta z_bar)`.
pub fn true_kernel(k: u32) -> Result<KernelFunc> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut p = Poly4::new();
    p.insert([0; 4], Rational::one());
    // moving d/dz_bar past exp(zeta z_bar) contributes -zeta
    for _ in 1..k {
        p = first_order(&p, Z, ZETA, Z_BAR);
    }
    // moving d/dzeta past exp(zeta z_bar) contributes -z_bar
    for _ in 1..k {
        p = first_order(&p, ZETA_BAR, Z_BAR, ZETA);
    }
    let scale = Rational::factorial(k - 1).recip()?;
    let terms = p.into_iter().map(|(e, c)| (e, &c * &scale)).collect();
    Ok(KernelFunc { level: k, terms })
}

/// Expands `sum_j c_j lambda^j` with `lambda = (z - zeta)(zeta_bar - z_bar)`.
pub fn expand_in_lambda(coeffs: &[Rational]) -> BTreeMap<KernelExp, Rational> {
    let mut lambda = Poly4::new();
    for (e, c) in [
        ([0, 1, 1, 0], 1),
        ([0, 0, 1, 1], -1),
        ([1, 1, 0, 0], -1),
        ([1, 0, 0, 1], 1),
    ] {
        lambda.insert(e, Rational::int(c));
    }
    let mut power = Poly4::new();
    power.insert([0; 4], Rational::one());
    let mut out = Poly4::new();
    for c in coeffs {
        for (e, x) in &power {
            push(&mut out, *e, x * c);
        }
        let mut next = Poly4::new();
        for (e1, x1) in &power {
            for (e2, x2) in &lambda {
                push(&mut next, [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]], x1 * x2);
            }
        }
        power = next;
    }
    out
}

/// Coefficients of `p_{k-1}` with `true_kernel(k) = exp(zeta z_bar) p_{k-1}(lambda)`.
///
/// Read off at `zeta = z_bar = 0`, where `lambda = z zeta_bar`, then
/// certified by expanding back and comparing with the full kernel.
pub fn kernel_factor_check(k: u32) -> Result<Vec<Rational>> {
    let q = true_kernel(k)?;
    let mut coeffs = vec![Rational::zero(); k as usize];
    for (e, c) in &q.terms {
        if e[ZETA] == 0 && e[Z_BAR] == 0 {
            if e[Z] != e[ZETA_BAR] || e[Z] >= k {
                return Err(Error::InvariantBreach("kernel is not a polynomial in lambda".into()));
            }
            coeffs[e[Z] as usize] = c.clone();
        }
    }
    if expand_in_lambda(&coeffs) != q.terms {
        return Err(Error::InvariantBreach("kernel is not a polynomial in lambda".into()));
    }
    Ok(coeffs)
}

/// `L_n(-x) = sum_j C(n, j) x^j / j!`.
pub fn laguerre_at_minus(n: u32) -> Vec<Rational> {
    (0..=n).map(|j| &Rational::binomial(n, j) / &Rational::factorial(j)).collect()
}

/// Informational: whether `p_{k-1}(lambda)` equals the Laguerre polynomial `L_{k-1}(-lambda)`.
pub fn matches_laguerre(k: u32) -> Result<bool> {
    Ok(kernel_factor_check(k)? == laguerre_at_minus(k - 1))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Kernel,
    Gram,
}

fn require_polynomial(f: &ExpPoly) -> Result<()> {
    if !f.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    Ok(())
}

/// Projects coordinate `j` of a polynomial onto the true level `k` by
/// integrating against the kernel in that coordinate.
fn kernel_project_coordinate(f: &ExpPoly, j: usize, q: &KernelFunc) -> Result<ExpPoly> {
    if j >= f.dims() {
        return Err(Error::CoordinateOutOfRange { coord: j, dims: f.dims() });
    }
    let mut out = Vec::new();
    for (m, cf) in f.terms() {
        for (e, cq) in &q.terms {
            // conj(q_z(zeta)) = sum c zeta_bar^a zeta^b z_bar^c z^d exp(zeta_bar z)
            let p = m.z[j] + e[ZETA_BAR];
            let r = m.zb[j] + e[ZETA];
            if p < r {
                continue;
            }
            let w = &Rational::factorial(p) / &Rational::factorial(p - r);
            let mut mono = m.clone();
            mono.z[j] = e[Z_BAR] + p - r;
            mono.zb[j] = e[Z];
            out.push((mono, cf.scale(&(cq * &w))));
        }
    }
    ExpPoly::from_terms(f.dims(), out)
}

/// Orthogonal projection of a one-variable polynomial onto the true level `k`.
pub fn project_true(f: &ExpPoly, k: u32, method: Method) -> Result<ExpPoly> {
    require_polynomial(f)?;
    if f.dims() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dims() });
    }
    match method {
        Method::Kernel => kernel_project_coordinate(f, 0, &true_kernel(k)?),
        Method::Gram => {
            if k == 0 {
                return Err(Error::InvalidArgument("k must be at least 1".into()));
            }
            Ok(true_decompose(f)?.level(k))
        }
    }
}

/// Tensor product of one-variable kernel projections, one level per coordinate.
pub fn tensor_project(f: &ExpPoly, k: &[u32]) -> Result<ExpPoly> {
    require_polynomial(f)?;
    if k.len() != f.dims() {
        return Err(Error::DimensionMismatch { expected: f.dims(), found: k.len() });
    }
    k.iter().enumerate().try_fold(f.clone(), |g, (j, &kj)| kernel_project_coordinate(&g, j, &true_kernel(kj)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(t: &[(u32, u32, i64)]) -> ExpPoly {
        ExpPoly::poly1(&t.iter().map(|&(m, n, c)| (m, n, GaussianRational::int(c))).collect::<Vec<_>>())
    }

    fn r(n: i64) -> Rational {
        Rational::int(n)
    }

    #[test]
    fn level_one_kernel_is_classical() {
        let q = true_kernel(1).unwrap();
        assert_eq!(q.terms().len(), 1);
        assert_eq!(q.terms()[&[0; 4]], r(1));
    }

    #[test]
    fn level_two_kernel() {
        // 1 + (z - zeta)(zeta_bar - z_bar), expanded by hand
        let mut expect = BTreeMap::new();
        expect.insert([0, 0, 0, 0], r(1));
        expect.insert([0, 1, 1, 0], r(1));
        expect.insert([0, 0, 1, 1], r(-1));
        expect.insert([1, 1, 0, 0], r(-1));
        expect.insert([1, 0, 0, 1], r(1));
        assert_eq!(true_kernel(2).unwrap().terms(), &expect);
    }

    #[test]
    fn factor_examples() {
        assert_eq!(kernel_factor_check(1).unwrap(), vec![r(1)]);
        assert_eq!(kernel_factor_check(2).unwrap(), vec![r(1), r(1)]);
        let p2 = kernel_factor_check(3).unwrap();
        assert_eq!(p2.len(), 3);
        assert_eq!(p2[0], r(1));
        assert!(!p2[2].is_zero());
    }

    #[test]
    fn conjugate_symmetry() {
        for k in 1..=4 {
            assert!(true_kernel(k).unwrap().is_conjugate_symmetric());
        }
    }

    #[test]
    fn kernel_at_point_has_its_level() {
        let z0 = GaussianRational::new(Rational::frac(1, 2), Rational::frac(-2, 3));
        for k in 1..=4 {
            let f = true_kernel(k).unwrap().at(&z0);
            assert_eq!(crate::decomp::membership_level(&f).unwrap(), k);
        }
    }

    #[test]
    fn projection_examples() {
        let f = p1(&[(1, 1, 1)]);
        for m in [Method::Kernel, Method::Gram] {
            assert_eq!(project_true(&f, 2, m).unwrap(), p1(&[(1, 1, 1), (0, 0, -1)]));
            assert_eq!(project_true(&f, 1, m).unwrap(), ExpPoly::one(1));
        }
        let g = p1(&[(3, 0, 2), (1, 0, -1)]);
        assert_eq!(project_true(&g, 1, Method::Kernel).unwrap(), g);
        let e = ExpPoly::one(1).with_exponential(vec![GaussianRational::one()], vec![GaussianRational::zero()]);
        assert_eq!(project_true(&e, 1, Method::Kernel), Err(Error::NotPolynomial));
    }

    #[test]
    fn tensor_examples() {
        let f = ExpPoly::from_terms(2, [(MultiMonomial::new(vec![1, 0], vec![1, 0]), GaussianRational::one())])
            .unwrap();
        let expect = ExpPoly::from_terms(
            2,
            [
                (MultiMonomial::new(vec![1, 0], vec![1, 0]), GaussianRational::one()),
                (MultiMonomial::one(2), GaussianRational::int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(tensor_project(&f, &[2, 1]).unwrap(), expect);
        let g = ExpPoly::from_terms(2, [(MultiMonomial::new(vec![2, 1], vec![0, 0]), GaussianRational::int(3))])
            .unwrap();
        assert_eq!(tensor_project(&g, &[1, 1]).unwrap(), g);
        let h = ExpPoly::from_terms(2, [(MultiMonomial::new(vec![0, 0], vec![0, 1]), GaussianRational::one())])
            .unwrap();
        assert!(tensor_project(&h, &[2, 1]).unwrap().is_zero());
        assert_eq!(tensor_project(&h, &[1, 2]).unwrap(), h);
    }

    #[test]
    fn laguerre_comparison_runs() {
        assert!(matches_laguerre(2).unwrap());
        let _ = matches_laguerre(5).unwrap();
    }
}
