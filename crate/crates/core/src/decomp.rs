//! Membership tests for poly-Fock, homogeneous and quasi-homogeneous spaces,
//! true-level decompositions, and the lift/lower and Fock/poly-analytic
//! conversions.
//!
//! Lifts are un-normalized: `lift(g, k) = (a^dag)^{k-1} g`, so that every
//! quantity stays Gaussian rational and `norm_sq(lift(g, k)) = (k-1)! norm_sq(g)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ops::{level_product, NormalForm};
use crate::poly::{graded_lex, ExpPoly, MultiMonomial};
use crate::scalar::{GaussianRational, Rational};

/// Level multi-index `(p_1, .., p_d)`, each `p_i >= 1`, ordered graded-lex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LevelIndex(pub Vec<u32>);

impl Ord for LevelIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex((&self.0, &[]), (&other.0, &[]))
    }
}

impl PartialOrd for LevelIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Mutually orthogonal true-level components of a function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrueLevelDecomposition {
    pub dims: usize,
    pub components: BTreeMap<LevelIndex, ExpPoly>,
}

impl TrueLevelDecomposition {
    /// Component at a one-dimensional level (zero if absent).
    pub fn level(&self, l: u32) -> ExpPoly {
        self.get(&[l])
    }

    pub fn get(&self, index: &[u32]) -> ExpPoly {
        self.components.get(&LevelIndex(index.to_vec())).cloned().unwrap_or_else(|| ExpPoly::zero(self.dims))
    }

    /// Sum of all components.
    pub fn sum(&self) -> Result<ExpPoly> {
        self.components.values().try_fold(ExpPoly::zero(self.dims), |acc, c| acc.try_add(c))
    }

    /// Every pair of distinct components has exactly zero inner product.
    pub fn is_orthogonal(&self) -> Result<bool> {
        let comps: Vec<&ExpPoly> = self.components.values().collect();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                if !comps[i].inner_product(comps[j])?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn require_dims(f: &ExpPoly, d: usize) -> Result<()> {
    if f.dims() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.dims() });
    }
    Ok(())
}

fn require_poly_analytic(f: &ExpPoly) -> Result<()> {
    if f.has_zbar_exponential() {
        return Err(Error::NotPolyAnalytic);
    }
    Ok(())
}

/// Smallest `k >= 1` with `a^k f = 0` (one dimension; `1` for zero).
pub fn membership_level(f: &ExpPoly) -> Result<u32> {
    require_dims(f, 1)?;
    require_poly_analytic(f)?;
    Ok(1 + f.zbar_degree(0))
}

/// `prod_{m<k} (a^dag a - m) f = 0`, evaluated by operator application.
pub fn euler_cartan_membership(f: &ExpPoly, k: u32) -> Result<bool> {
    require_dims(f, 1)?;
    require_poly_analytic(f)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(level_product(1, &[0], k).apply(f)?.is_zero())
}

/// `(a_j^dag)^n f`.
fn raise(f: &ExpPoly, j: usize, n: u32) -> Result<ExpPoly> {
    (0..n).try_fold(f.clone(), |g, _| g.apply_raising(j))
}

/// `a_j^n f`.
fn lower_n(f: &ExpPoly, j: usize, n: u32) -> Result<ExpPoly> {
    (0..n).try_fold(f.clone(), |g, _| g.apply_lowering(j))
}

/// `(a^dag)^{k-1} g` for analytic `g` in one dimension.
pub fn lift(g: &ExpPoly, k: u32) -> Result<ExpPoly> {
    require_dims(g, 1)?;
    multi_true_represent(g, &[k])
}

/// Inverse of [`lift`]: `a^{k-1} psi / (k-1)!`, checked to re-lift to `psi`.
pub fn lower(psi: &ExpPoly, k: u32) -> Result<ExpPoly> {
    require_dims(psi, 1)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let fact = Rational::factorial(k - 1).recip()?;
    let g = lower_n(psi, 0, k - 1)?.scale(&GaussianRational::real(fact));
    if !g.is_analytic() || &lift(&g, k)? != psi {
        return Err(Error::NotPureLevel(k));
    }
    Ok(g)
}

/// Splits `f` along coordinate `j` into pieces `(a_j^dag)^{l-1} g_l`, with
/// `a_j g_l = 0`, for `l = 1..=K`, by peeling off the top level.
fn peel(f: &ExpPoly, j: usize) -> Result<Vec<ExpPoly>> {
    let top = 1 + f.zbar_degree(j);
    let mut parts = vec![ExpPoly::zero(f.dims()); top as usize];
    let mut rest = f.clone();
    while !rest.is_zero() {
        let level = 1 + rest.zbar_degree(j);
        let fact = Rational::factorial(level - 1).recip()?;
        let g = lower_n(&rest, j, level - 1)?.scale(&GaussianRational::real(fact));
        let h = raise(&g, j, level - 1)?;
        let next = rest.try_sub(&h)?;
        if !next.is_zero() && next.zbar_degree(j) >= rest.zbar_degree(j) {
            return Err(Error::InvariantBreach("peeling did not lower the level".into()));
        }
        parts[(level - 1) as usize] = h;
        rest = next;
    }
    Ok(parts)
}

/// True-level decomposition in one variable: components `h_(1) ..= h_(K)`
/// with `K = membership_level(f)`, zero components included.
pub fn true_decompose(f: &ExpPoly) -> Result<TrueLevelDecomposition> {
    require_dims(f, 1)?;
    require_poly_analytic(f)?;
    let parts = peel(f, 0)?;
    let components = parts
        .into_iter()
        .enumerate()
        .map(|(i, h)| (LevelIndex(vec![i as u32 + 1]), h))
        .collect();
    Ok(TrueLevelDecomposition { dims: 1, components })
}

/// True-level decomposition over `C^d` into tensor components indexed by
/// multi-indices `p >= (1, .., 1)`; only nonzero components are kept (a zero
/// input yields a single zero component at `(1, .., 1)`).
pub fn multi_true_decompose(f: &ExpPoly) -> Result<TrueLevelDecomposition> {
    require_poly_analytic(f)?;
    let d = f.dims();
    let mut current: Vec<(Vec<u32>, ExpPoly)> = vec![(Vec::new(), f.clone())];
    for j in 0..d {
        let mut next = Vec::new();
        for (idx, g) in current {
            for (l, h) in peel(&g, j)?.into_iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                let mut idx = idx.clone();
                idx.push(l as u32 + 1);
                next.push((idx, h));
            }
        }
        current = next;
    }
    let mut components: BTreeMap<LevelIndex, ExpPoly> =
        current.into_iter().map(|(i, h)| (LevelIndex(i), h)).collect();
    if components.is_empty() {
        components.insert(LevelIndex(vec![1; d]), ExpPoly::zero(d));
    }
    Ok(TrueLevelDecomposition { dims: d, components })
}

/// `prod_j (a_j^dag)^{k_j - 1} phi` for analytic `phi`.
pub fn multi_true_represent(phi: &ExpPoly, k: &[u32]) -> Result<ExpPoly> {
    require_dims(phi, k.len())?;
    if k.iter().any(|&x| x == 0) {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    if !phi.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    k.iter().enumerate().try_fold(phi.clone(), |g, (j, &kj)| raise(&g, j, kj - 1))
}

/// Column `(g_1, .., g_k)` of analytic functions standing for
/// `sum_j (a^dag)^{j-1} g_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockColumn(pub Vec<ExpPoly>);

impl FockColumn {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// The function `sum_j (a^dag)^{j-1} g_j`.
    pub fn to_function(&self) -> Result<ExpPoly> {
        let mut acc = ExpPoly::zero(1);
        for (j, g) in self.0.iter().enumerate() {
            acc = acc.try_add(&lift(g, j as u32 + 1)?)?;
        }
        Ok(acc)
    }
}

fn d_z_n(f: &ExpPoly, n: u32) -> Result<ExpPoly> {
    (0..n).try_fold(f.clone(), |g, _| g.d_z(0))
}

/// `(p-1)! / ((p-l)! (l-1)!)` with alternating sign `(-1)^{p-l}`.
fn conversion_weight(p: u32, l: u32) -> GaussianRational {
    let w = &Rational::factorial(p - 1) / &(&Rational::factorial(p - l) * &Rational::factorial(l - 1));
    let w = if (p - l) % 2 == 1 { -w } else { w };
    GaussianRational::real(w)
}

fn check_analytic_column(fs: &[ExpPoly]) -> Result<()> {
    for f in fs {
        require_dims(f, 1)?;
        if !f.is_analytic() {
            return Err(Error::NotAnalytic);
        }
    }
    Ok(())
}

/// Analytic coefficients `phi_l` with `sum_l zbar^{l-1} phi_l = sum_p (a^dag)^{p-1} g_p`.
pub fn fock_to_poly(col: &FockColumn) -> Result<Vec<ExpPoly>> {
    check_analytic_column(&col.0)?;
    let k = col.k() as u32;
    let mut out = Vec::with_capacity(k as usize);
    for l in 1..=k {
        let mut phi = ExpPoly::zero(1);
        for p in l..=k {
            let g = &col.0[(p - 1) as usize];
            phi = phi.try_add(&d_z_n(g, p - l)?.scale(&conversion_weight(p, l)))?;
        }
        out.push(phi);
    }
    Ok(out)
}

/// Inverse of [`fock_to_poly`], by back substitution from the top level.
pub fn poly_to_fock(phis: &[ExpPoly]) -> Result<FockColumn> {
    check_analytic_column(phis)?;
    let k = phis.len() as u32;
    let mut gs = vec![ExpPoly::zero(1); k as usize];
    for l in (1..=k).rev() {
        let mut g = phis[(l - 1) as usize].clone();
        for p in l + 1..=k {
            let gp = &gs[(p - 1) as usize];
            g = g.try_sub(&d_z_n(gp, p - l)?.scale(&conversion_weight(p, l)))?;
        }
        gs[(l - 1) as usize] = g;
    }
    Ok(FockColumn(gs))
}

/// Splits a one-dimensional function into its `zbar`-power coefficients
/// `phi_1, .., phi_K`, so that `f = sum_l zbar^{l-1} phi_l`.
pub fn zbar_coefficients(f: &ExpPoly) -> Result<Vec<ExpPoly>> {
    require_dims(f, 1)?;
    require_poly_analytic(f)?;
    let top = 1 + f.zbar_degree(0);
    let mut buckets: Vec<Vec<(MultiMonomial, GaussianRational)>> = vec![Vec::new(); top as usize];
    for (m, c) in f.terms() {
        buckets[m.zb[0] as usize].push((MultiMonomial::new(m.z.clone(), vec![0]), c.clone()));
    }
    buckets
        .into_iter()
        .map(|b| {
            let p = ExpPoly::from_terms(1, b)?;
            Ok(if p.is_zero() {
                p
            } else {
                p.with_exponential(f.u().to_vec(), f.v().to_vec())
                    .with_prefactor_exponent(f.prefactor_exponent().clone())
            })
        })
        .collect()
}

/// `prod_{m<k} (sum_i a_i^dag a_i - m) f = 0`.
pub fn homogeneous_membership(f: &ExpPoly, k: u32) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let coords: Vec<usize> = (0..f.dims()).collect();
    Ok(level_product(f.dims(), &coords, k).apply(f)?.is_zero())
}

/// All multi-indices of length `n` with entries summing to `total`.
pub fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Mixed `zbar` derivatives over `coords` of total order `k` all vanish.
fn derivative_form(f: &ExpPoly, coords: &[usize], k: u32) -> Result<bool> {
    for p in compositions(coords.len(), k) {
        let mut g = f.clone();
        for (&c, &e) in coords.iter().zip(&p) {
            g = lower_n(&g, c, e)?;
        }
        if !g.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `d^{|p|} f / dzbar^p = 0` for every `|p| = k`.
pub fn homogeneous_alt_membership(f: &ExpPoly, k: u32) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let coords: Vec<usize> = (0..f.dims()).collect();
    derivative_form(f, &coords, k)
}

fn groups(dims: usize, m: &[usize], k: &[u32]) -> Result<Vec<Vec<usize>>> {
    if m.len() != k.len() {
        return Err(Error::InvalidArgument("group sizes and levels differ in length".into()));
    }
    if m.iter().sum::<usize>() != dims || m.iter().any(|&x| x == 0) {
        return Err(Error::InvalidArgument(alloc::format!("group sizes {m:?} do not partition {dims}")));
    }
    if k.iter().any(|&x| x == 0) {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    let mut start = 0;
    Ok(m.iter()
        .map(|&size| {
            let g: Vec<usize> = (start..start + size).collect();
            start += size;
            g
        })
        .collect())
}

/// Quasi-homogeneous membership for the composition `m` of `d` with group
/// levels `k`. Both the operator form and the groupwise derivative form are
/// evaluated; disagreement is reported as an invariant breach.
pub fn quasi_membership(f: &ExpPoly, m: &[usize], k: &[u32]) -> Result<bool> {
    let gs = groups(f.dims(), m, k)?;
    let mut by_operator = true;
    let mut by_derivative = true;
    for (g, &kj) in gs.iter().zip(k) {
        by_operator &= level_product(f.dims(), g, kj).apply(f)?.is_zero();
        by_derivative &= derivative_form(f, g, kj)?;
    }
    if by_operator != by_derivative {
        return Err(Error::InvariantBreach("operator and derivative membership forms disagree".into()));
    }
    Ok(by_operator)
}

/// Number of analytic functions determining a `k`-homogeneous element:
/// `C(d+k-1, d)`.
pub fn homogeneous_component_count(d: u32, k: u32) -> Result<BigUint> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidArgument("d and k must be at least 1".into()));
    }
    Ok(Rational::binomial(d + k - 1, d).numer().to_biguint().expect("non-negative"))
}

/// The operator whose kernel is the `k`-homogeneous space.
pub fn homogeneous_operator(dims: usize, k: u32) -> NormalForm {
    let coords: Vec<usize> = (0..dims).collect();
    level_product(dims, &coords, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::int(n)
    }

    fn p1(t: &[(u32, u32, i64)]) -> ExpPoly {
        ExpPoly::poly1(&t.iter().map(|&(m, n, c)| (m, n, g(c))).collect::<Vec<_>>())
    }

    fn p2(t: &[([u32; 2], [u32; 2], i64)]) -> ExpPoly {
        ExpPoly::from_terms(2, t.iter().map(|(z, zb, c)| (MultiMonomial::new(z.to_vec(), zb.to_vec()), g(*c))))
            .unwrap()
    }

    #[test]
    fn membership_level_examples() {
        assert_eq!(membership_level(&ExpPoly::one(1)).unwrap(), 1);
        assert_eq!(membership_level(&p1(&[(1, 2, 1), (0, 1, 1)])).unwrap(), 3);
        let e = ExpPoly::one(1).with_exponential(vec![g(0)], vec![g(1)]);
        assert_eq!(membership_level(&e), Err(Error::NotPolyAnalytic));
        assert_eq!(membership_level(&ExpPoly::zero(1)).unwrap(), 1);
    }

    #[test]
    fn euler_cartan_membership_examples() {
        assert!(euler_cartan_membership(&p1(&[(0, 1, 1)]), 2).unwrap());
        assert!(!euler_cartan_membership(&p1(&[(0, 2, 1)]), 2).unwrap());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&ExpPoly::one(1), 3).unwrap(), p1(&[(0, 2, 1)]));
        assert_eq!(lift(&p1(&[(1, 0, 1)]), 2).unwrap(), p1(&[(1, 1, 1), (0, 0, -1)]));
        let gz = p1(&[(3, 0, 2), (0, 0, 5)]);
        assert_eq!(lift(&gz, 1).unwrap(), gz);
        assert_eq!(lift(&p1(&[(0, 1, 1)]), 2), Err(Error::NotAnalytic));
    }

    #[test]
    fn lower_examples() {
        assert_eq!(lower(&p1(&[(0, 2, 1)]), 3).unwrap(), ExpPoly::one(1));
        assert_eq!(lower(&p1(&[(1, 1, 1), (0, 0, -1)]), 2).unwrap(), p1(&[(1, 0, 1)]));
        assert_eq!(lower(&p1(&[(0, 1, 1)]), 3), Err(Error::NotPureLevel(3)));
    }

    #[test]
    fn true_decompose_examples() {
        let dec = true_decompose(&p1(&[(1, 1, 1)])).unwrap();
        assert_eq!(dec.level(2), p1(&[(1, 1, 1), (0, 0, -1)]));
        assert_eq!(dec.level(1), ExpPoly::one(1));
        let dec = true_decompose(&p1(&[(0, 1, 1)])).unwrap();
        assert_eq!(dec.level(2), p1(&[(0, 1, 1)]));
        assert!(dec.level(1).is_zero());
        let f = p1(&[(3, 0, 1), (0, 0, 2)]);
        let dec = true_decompose(&f).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.level(1), f);
    }

    #[test]
    fn conversion_examples() {
        let col = FockColumn(vec![p1(&[(1, 0, 1)]), ExpPoly::one(1)]);
        assert_eq!(fock_to_poly(&col).unwrap(), vec![p1(&[(1, 0, 1)]), ExpPoly::one(1)]);
        let col = FockColumn(vec![ExpPoly::one(1), p1(&[(1, 0, 1)])]);
        assert_eq!(fock_to_poly(&col).unwrap(), vec![ExpPoly::zero(1), p1(&[(1, 0, 1)])]);
        assert_eq!(col.to_function().unwrap(), p1(&[(1, 1, 1)]));
        let single = FockColumn(vec![p1(&[(2, 0, 3)])]);
        assert_eq!(fock_to_poly(&single).unwrap(), single.0);

        let back = poly_to_fock(&[ExpPoly::zero(1), p1(&[(1, 0, 1)])]).unwrap();
        assert_eq!(back.0, vec![ExpPoly::one(1), p1(&[(1, 0, 1)])]);
        let back = poly_to_fock(&[p1(&[(1, 0, 1)]), ExpPoly::one(1)]).unwrap();
        assert_eq!(back.0, vec![p1(&[(1, 0, 1)]), ExpPoly::one(1)]);
        assert_eq!(poly_to_fock(&[p1(&[(4, 0, 1)])]).unwrap().0, vec![p1(&[(4, 0, 1)])]);
    }

    #[test]
    fn zbar_coefficients_split() {
        let f = p1(&[(1, 1, 1)]);
        assert_eq!(zbar_coefficients(&f).unwrap(), vec![ExpPoly::zero(1), p1(&[(1, 0, 1)])]);
    }

    #[test]
    fn multi_decompose_examples() {
        let dec = multi_true_decompose(&p2(&[([0, 0], [1, 0], 1)])).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.get(&[2, 1]), p2(&[([0, 0], [1, 0], 1)]));
        let dec = multi_true_decompose(&p2(&[([1, 0], [1, 0], 1)])).unwrap();
        assert_eq!(dec.get(&[2, 1]), p2(&[([1, 0], [1, 0], 1), ([0, 0], [0, 0], -1)]));
        assert_eq!(dec.get(&[1, 1]), ExpPoly::one(2));
        let f = p2(&[([2, 1], [0, 0], 3)]);
        let dec = multi_true_decompose(&f).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.get(&[1, 1]), f);
    }

    #[test]
    fn multi_represent_examples() {
        assert_eq!(multi_true_represent(&ExpPoly::one(2), &[2, 2]).unwrap(), p2(&[([0, 0], [1, 1], 1)]));
        let phi = p2(&[([1, 2], [0, 0], 1)]);
        assert_eq!(multi_true_represent(&phi, &[1, 1]).unwrap(), phi);
        let z1 = p2(&[([1, 0], [0, 0], 1)]);
        assert_eq!(
            multi_true_represent(&z1, &[2, 1]).unwrap(),
            p2(&[([1, 0], [1, 0], 1), ([0, 0], [0, 0], -1)])
        );
    }

    #[test]
    fn homogeneous_examples() {
        let analytic = p2(&[([1, 3], [0, 0], 1)]);
        assert!(homogeneous_membership(&analytic, 1).unwrap());
        let f = p2(&[([0, 0], [1, 1], 1)]);
        assert!(!homogeneous_membership(&f, 2).unwrap());
        assert!(homogeneous_membership(&f, 3).unwrap());
        let h = p1(&[(2, 1, 1), (0, 2, 3)]);
        for k in 1..5 {
            assert_eq!(homogeneous_membership(&h, k).unwrap(), euler_cartan_membership(&h, k).unwrap());
        }
    }

    #[test]
    fn homogeneous_alt_examples() {
        assert!(!homogeneous_alt_membership(&p2(&[([0, 0], [2, 0], 1)]), 2).unwrap());
        let f = p2(&[([0, 0], [1, 1], 1)]);
        assert!(!homogeneous_alt_membership(&f, 2).unwrap());
        assert!(homogeneous_alt_membership(&f, 3).unwrap());
        assert!(homogeneous_alt_membership(&p2(&[([4, 1], [0, 0], 1)]), 1).unwrap());
    }

    #[test]
    fn quasi_examples() {
        assert!(quasi_membership(&p2(&[([0, 0], [1, 0], 1)]), &[1, 1], &[2, 1]).unwrap());
        assert!(!quasi_membership(&p2(&[([0, 0], [0, 1], 1)]), &[1, 1], &[2, 1]).unwrap());
        let f = p2(&[([0, 0], [1, 1], 1), ([1, 0], [0, 0], 1)]);
        for k in 1..5 {
            assert_eq!(quasi_membership(&f, &[2], &[k]).unwrap(), homogeneous_membership(&f, k).unwrap());
        }
        assert!(matches!(quasi_membership(&f, &[1], &[1]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn component_count_examples() {
        assert_eq!(homogeneous_component_count(2, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(homogeneous_component_count(2, 2).unwrap(), BigUint::from(3u32));
        // enumerate |m| <= 2 in three variables
        let brute: usize = (0..=2).map(|t| compositions(3, t).len()).sum();
        assert_eq!(brute, 10);
        assert_eq!(homogeneous_component_count(3, 3).unwrap(), BigUint::from(10u32));
    }
}
