//! Restriction of Wick-ordered operators to a poly-Fock level and exact
//! spectral analysis of the resulting matrices.
//!
//! A level-`k` element is written `sum_j (a^dag)^j f_j` with analytic `f_j`,
//! `j = 0..k`; on such columns an operator acts by a `k x k` matrix because
//! `a^q (a^dag)^j f = j!/(j-q)! (a^dag)^{j-q} f` for analytic `f`.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ops::NormalForm;
use crate::poly::ExpPoly;
use crate::scalar::{GaussianRational, Rational};
use crate::upoly::UPoly;

/// An operator restricted to the first `k` levels, in the basis `(a^dag)^j f`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RestrictedMatrix {
    pub k: u32,
    pub matrix: ExactMatrix,
    pub source: NormalForm,
}

pub fn restrict_to_fk(x: &NormalForm, k: u32) -> Result<RestrictedMatrix> {
    if x.dims() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: x.dims() });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = k as usize;
    let mut m = ExactMatrix::zero(n);
    let mut overflow: BTreeMap<(usize, usize), GaussianRational> = BTreeMap::new();
    for (mono, c) in x.terms() {
        let (p, q) = (mono.adag[0] as usize, mono.a[0] as usize);
        for j in q..n {
            let w = c.scale(&Rational::falling(j as u32, q as u32));
            let row = j - q + p;
            if row < n {
                let cur = m.get(row, j) + &w;
                m.set(row, j, cur);
            } else {
                *overflow.entry((row, j)).or_default() += &w;
            }
        }
    }
    if overflow.values().any(|c| !c.is_zero()) {
        return Err(Error::NotInvariant(k));
    }
    Ok(RestrictedMatrix { k, matrix: m, source: x.clone() })
}

/// `det(x I - A)` by fraction-free (Bareiss) elimination.
pub fn char_poly_bareiss(a: &ExactMatrix) -> Result<UPoly> {
    let n = a.size();
    let mut m: Vec<Vec<UPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a.get(i, j).clone();
                    if i == j {
                        UPoly::linear(GaussianRational::one(), c)
                    } else {
                        UPoly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = UPoly::one();
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(UPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.scale(&-GaussianRational::one()) } else { det })
}

/// `det(x I - A)` by the Faddeev–LeVerrier recursion.
pub fn char_poly_leverrier(a: &ExactMatrix) -> UPoly {
    let n = a.size();
    let mut c = vec![GaussianRational::zero(); n + 1];
    c[n] = GaussianRational::one();
    let mut mk = ExactMatrix::zero(n);
    for i in 1..=n {
        mk = a.mul(&mk).add(&ExactMatrix::identity(n).scale(&c[n - i + 1]));
        let tr = a.mul(&mk).trace();
        c[n - i] = -tr.scale(&Rational::frac(1, i as i64));
    }
    UPoly::new(c)
}

/// How an eigenvalue is known.
#[derive(Clone, PartialEq, Debug)]
pub enum Eigenvalue {
    /// A Gaussian-rational root, verified by substitution.
    Exact(GaussianRational),
    /// A root of the irreducible `x^2 + b x + c`: `(-b + sign sqrt(b^2 - 4c)) / 2`.
    Quadratic { b: GaussianRational, c: GaussianRational, sign: i8, approx: Complex64 },
    /// A root of an irreducible factor of degree at least three.
    Float { approx: Complex64, residual: f64 },
}

impl Eigenvalue {
    pub fn approx(&self) -> Complex64 {
        match self {
            Eigenvalue::Exact(x) => x.to_complex(),
            Eigenvalue::Quadratic { approx, .. } | Eigenvalue::Float { approx, .. } => *approx,
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            Eigenvalue::Exact(x) => Some(x),
            _ => None,
        }
    }

    /// `exact`, `quadratic-closed-form` or `float`.
    pub fn provenance(&self) -> &'static str {
        match self {
            Eigenvalue::Exact(_) => "exact",
            Eigenvalue::Quadratic { .. } => "quadratic-closed-form",
            Eigenvalue::Float { .. } => "float",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum EigenColumns {
    Exact(Vec<Vec<GaussianRational>>),
    Float(Vec<Vec<Complex64>>),
}

#[derive(Clone, PartialEq, Debug)]
pub struct EigenEntry {
    pub value: Eigenvalue,
    pub algebraic: u32,
    pub geometric: u32,
    /// Dimension of the generalized eigenspace.
    pub generalized: u32,
    pub columns: EigenColumns,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SpectrumReport {
    pub k: u32,
    pub char_poly: UPoly,
    pub eigenvalues: Vec<EigenEntry>,
}

impl SpectrumReport {
    /// Exact eigenvalues with multiplicity, in ascending order.
    pub fn exact_values(&self) -> Vec<GaussianRational> {
        let mut out = Vec::new();
        for e in &self.eigenvalues {
            if let Some(x) = e.value.exact() {
                out.extend(core::iter::repeat_n(x.clone(), e.algebraic as usize));
            }
        }
        out.sort();
        out
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.eigenvalues.iter().all(|e| e.algebraic == e.geometric)
    }
}

fn round_gaussian(x: Complex64, scale: &GaussianRational) -> Option<GaussianRational> {
    let y = x * scale.to_complex();
    if !y.is_finite() || y.re.abs() > 1e15 || y.im.abs() > 1e15 {
        return None;
    }
    let r = GaussianRational::new(Rational::int(Float::round(y.re) as i64), Rational::int(Float::round(y.im) as i64));
    r.checked_div(scale).ok()
}

/// Splits off every Gaussian-rational root of a squarefree polynomial.
///
/// For integral coefficients with leading coefficient `l`, `l * r` is a
/// Gaussian integer for every Gaussian-rational root `r`, so rounding
/// `l * x` at each float root `x` finds all of them.
fn split_exact_roots(p: &UPoly) -> (Vec<GaussianRational>, UPoly) {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    'outer: while rest.degree().unwrap_or(0) > 0 {
        let integral = rest.integral();
        let lead = integral.leading().expect("nonzero").clone();
        for x in rest.float_roots() {
            if let Some(r) = round_gaussian(x, &lead) {
                if rest.eval(&r).is_zero() {
                    rest = rest.exact_div(&UPoly::linear_root(&r)).expect("root divides");
                    roots.push(r);
                    continue 'outer;
                }
            }
        }
        break;
    }
    (roots, rest)
}

fn nullity(m: &ExactMatrix) -> u32 {
    (m.size() - m.rank()) as u32
}

/// Null space of a complex matrix, with pivots below `tol` treated as zero.
fn float_nullspace(mut rows: Vec<Vec<Complex64>>, tol: f64) -> Vec<Vec<Complex64>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let (p, best) = (r..rows.len())
            .map(|i| (i, rows[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        rows.swap(r, p);
        let inv = Complex64::new(1.0, 0.0) / rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][c];
                for j in 0..n {
                    let t = f * rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[f] = Complex64::new(1.0, 0.0);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f];
            }
            v
        })
        .collect()
}

fn float_shifted(a: &ExactMatrix, x: Complex64) -> Vec<Vec<Complex64>> {
    (0..a.size())
        .map(|i| {
            (0..a.size())
                .map(|j| a.get(i, j).to_complex() - if i == j { x } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

fn exact_entry(a: &ExactMatrix, r: GaussianRational, algebraic: u32) -> EigenEntry {
    let n = a.size();
    let shifted = a.sub(&ExactMatrix::identity(n).scale(&r));
    EigenEntry {
        geometric: nullity(&shifted),
        generalized: nullity(&shifted.pow(n as u32)),
        columns: EigenColumns::Exact(shifted.nullspace()),
        value: Eigenvalue::Exact(r),
        algebraic,
    }
}

pub fn spectrum(rm: &RestrictedMatrix) -> Result<SpectrumReport> {
    let a = &rm.matrix;
    let n = a.size();
    let cp = char_poly_bareiss(a)?;
    if cp != char_poly_leverrier(a) {
        return Err(Error::InvariantBreach("characteristic polynomial methods disagree".into()));
    }
    let mut exact = Vec::new();
    let mut other = Vec::new();
    for (i, part) in cp.squarefree_parts().iter().enumerate() {
        let mult = i as u32 + 1;
        let (roots, rest) = split_exact_roots(part);
        for r in roots {
            exact.push(exact_entry(a, r, mult));
        }
        match rest.degree() {
            Some(0) | None => {}
            Some(1) => {
                let r = -(&rest.coeff(0) / &rest.coeff(1));
                exact.push(exact_entry(a, r, mult));
            }
            Some(2) => {
                let q = rest.monic();
                let (b, c) = (q.coeff(1), q.coeff(0));
                let qa = a.eval_poly(&q);
                let geometric = nullity(&qa) / 2;
                let generalized = nullity(&qa.pow(n as u32)) / 2;
                let disc = (b.to_complex() * b.to_complex() - c.to_complex() * 4.0).sqrt();
                for sign in [1i8, -1] {
                    let approx = (-b.to_complex() + disc * f64::from(sign)) / 2.0;
                    let cols = float_nullspace(float_shifted(a, approx), 1e-8);
                    other.push(EigenEntry {
                        value: Eigenvalue::Quadratic { b: b.clone(), c: c.clone(), sign, approx },
                        algebraic: mult,
                        geometric,
                        generalized,
                        columns: EigenColumns::Float(cols),
                    });
                }
            }
            Some(_) => {
                let monic = rest.monic();
                for x in monic.float_roots() {
                    let cols = float_nullspace(float_shifted(a, x), 1e-8);
                    other.push(EigenEntry {
                        value: Eigenvalue::Float { approx: x, residual: monic.eval_complex(x).norm() },
                        algebraic: mult,
                        geometric: cols.len() as u32,
                        generalized: mult,
                        columns: EigenColumns::Float(cols),
                    });
                }
            }
        }
    }
    exact.sort_by(|x, y| x.value.exact().cmp(&y.value.exact()));
    other.sort_by(|x, y| {
        let (p, q) = (x.value.approx(), y.value.approx());
        p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
    });
    exact.extend(other);
    Ok(SpectrumReport { k: rm.k, char_poly: cp, eigenvalues: exact })
}

/// Exact null-space basis of `rm - lambda I`.
pub fn eigenfunctions(rm: &RestrictedMatrix, lambda: &GaussianRational) -> Result<Vec<Vec<GaussianRational>>> {
    let n = rm.matrix.size();
    let ns = rm.matrix.sub(&ExactMatrix::identity(n).scale(lambda)).nullspace();
    if ns.is_empty() {
        return Err(Error::NotAnEigenvalue(lambda.to_string()));
    }
    Ok(ns)
}

/// `sum_j c_j (a^dag)^j f`.
pub fn column_function(col: &[GaussianRational], f: &ExpPoly) -> Result<ExpPoly> {
    let mut acc = ExpPoly::zero(1);
    let mut power = f.clone();
    for c in col {
        acc = acc.try_add(&power.scale(c))?;
        power = power.apply_raising(0)?;
    }
    Ok(acc)
}

/// Checks `source(psi) = lambda psi` exactly for `psi = sum_j c_j (a^dag)^j z^n`, `n <= max_n`.
pub fn eigenfunction_certificate(
    rm: &RestrictedMatrix,
    col: &[GaussianRational],
    lambda: &GaussianRational,
    max_n: u32,
) -> Result<bool> {
    for n in 0..=max_n {
        let psi = column_function(col, &ExpPoly::poly1(&[(n, 0, GaussianRational::one())]))?;
        if rm.source.apply(&psi)? != psi.scale(lambda) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a^dag a`.
pub fn landau_hamiltonian() -> NormalForm {
    NormalForm::number(1)
}

/// `a^dag a + alpha a^dag (a^dag a - I) + beta a`.
pub fn modified_landau(alpha: &GaussianRational, beta: &GaussianRational) -> NormalForm {
    let one = GaussianRational::one();
    NormalForm::term1(1, 1, one.clone())
        + NormalForm::term1(2, 1, alpha.clone())
        - NormalForm::term1(1, 0, alpha.clone())
        + NormalForm::term1(0, 1, beta.clone())
}

/// `(a^dag + beta)^{j-1} f`, an eigenfunction of `a^dag a + beta a` with
/// eigenvalue `j - 1` for analytic `f`.
pub fn shifted_ladder_eigenfunction(beta: &GaussianRational, j: u32, f: &ExpPoly) -> Result<ExpPoly> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    (1..j).try_fold(f.clone(), |g, _| g.apply_raising(0)?.try_add(&g.scale(beta)))
}
