//! Exponential polynomials on `C^d`: `e^x * P(z, zbar) * exp(u.z + v.zbar)`
//! with Gaussian-rational data, their Gaussian-measure inner products, and
//! the action of the ladder operators, rotations and Weyl shifts.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{ExpScalar, GaussianRational, Rational};

/// Graded-lexicographic comparison of a pair of multi-indices.
pub(crate) fn graded_lex(a: (&[u32], &[u32]), b: (&[u32], &[u32])) -> Ordering {
    let da: u64 = a.0.iter().chain(a.1).map(|&e| e as u64).sum();
    let db: u64 = b.0.iter().chain(b.1).map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.0.cmp(b.0)).then_with(|| a.1.cmp(b.1))
}

/// `z^z * zbar^zb` in `d` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiMonomial {
    pub z: Vec<u32>,
    pub zb: Vec<u32>,
}

impl MultiMonomial {
    pub fn new(z: Vec<u32>, zb: Vec<u32>) -> Self {
        debug_assert_eq!(z.len(), zb.len());
        MultiMonomial { z, zb }
    }

    pub fn one(dims: usize) -> Self {
        MultiMonomial { z: vec![0; dims], zb: vec![0; dims] }
    }

    pub fn dims(&self) -> usize {
        self.z.len()
    }

    pub fn degree(&self) -> u32 {
        self.z.iter().chain(&self.zb).sum()
    }

    pub fn zbar_degree(&self) -> u32 {
        self.zb.iter().sum()
    }

    pub fn is_analytic(&self) -> bool {
        self.zb.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &MultiMonomial) -> MultiMonomial {
        MultiMonomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zb: self.zb.iter().zip(&other.zb).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Ord for MultiMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex((&self.z, &self.zb), (&other.z, &other.zb))
    }
}

impl PartialOrd for MultiMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type Terms = BTreeMap<MultiMonomial, GaussianRational>;

pub(crate) fn add_term(terms: &mut Terms, m: MultiMonomial, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(existing) => {
            *existing += &c;
            if existing.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

pub(crate) fn terms_mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(&mut out, ma.mul(mb), ca * cb);
        }
    }
    out
}

/// A function on `C^d` of the form
/// `e^prefactor * (sum c_{m,n} z^m zbar^n) * exp(u.z + v.zbar)`.
///
/// The constant part of the prefactor is always folded into the term
/// coefficients, so only its exponent is stored. The zero function has no
/// terms, prefactor exponent zero and `u = v = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpPoly {
    dims: usize,
    prefactor: GaussianRational,
    terms: Terms,
    u: Vec<GaussianRational>,
    v: Vec<GaussianRational>,
}

impl ExpPoly {
    pub fn zero(dims: usize) -> Self {
        ExpPoly {
            dims,
            prefactor: GaussianRational::zero(),
            terms: Terms::new(),
            u: vec![GaussianRational::zero(); dims],
            v: vec![GaussianRational::zero(); dims],
        }
    }

    pub fn constant(dims: usize, c: GaussianRational) -> Self {
        Self::monomial(MultiMonomial::one(dims), c)
    }

    pub fn one(dims: usize) -> Self {
        Self::constant(dims, GaussianRational::one())
    }

    pub fn monomial(m: MultiMonomial, c: GaussianRational) -> Self {
        let mut f = Self::zero(m.dims());
        add_term(&mut f.terms, m, c);
        f
    }

    /// Single-variable polynomial from `(z power, zbar power, coefficient)` triples.
    pub fn poly1(terms: &[(u32, u32, GaussianRational)]) -> Self {
        Self::from_terms(
            1,
            terms.iter().map(|(m, n, c)| (MultiMonomial::new(vec![*m], vec![*n]), c.clone())),
        )
        .expect("one-dimensional monomials")
    }

    /// Polynomial from monomial/coefficient pairs; repeated monomials are summed.
    pub fn from_terms(
        dims: usize,
        terms: impl IntoIterator<Item = (MultiMonomial, GaussianRational)>,
    ) -> Result<Self> {
        let mut f = Self::zero(dims);
        for (m, c) in terms {
            if m.dims() != dims || m.zb.len() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: m.dims() });
            }
            add_term(&mut f.terms, m, c);
        }
        Ok(f)
    }

    /// Full constructor; the prefactor's coefficient is folded into the terms.
    pub fn from_parts(
        dims: usize,
        prefactor: ExpScalar,
        terms: Terms,
        u: Vec<GaussianRational>,
        v: Vec<GaussianRational>,
    ) -> Result<Self> {
        for len in [u.len(), v.len()] {
            if len != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: len });
            }
        }
        let mut out = Terms::new();
        for (m, c) in terms {
            if m.z.len() != dims || m.zb.len() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: m.dims() });
            }
            add_term(&mut out, m, &c * prefactor.coeff());
        }
        let mut f = ExpPoly { dims, prefactor: prefactor.exponent().clone(), terms: out, u, v };
        f.canonicalize();
        Ok(f)
    }

    /// Replaces the exponential factor `exp(u.z + v.zbar)`.
    pub fn with_exponential(mut self, u: Vec<GaussianRational>, v: Vec<GaussianRational>) -> Self {
        assert_eq!(u.len(), self.dims);
        assert_eq!(v.len(), self.dims);
        self.u = u;
        self.v = v;
        self.canonicalize();
        self
    }

    /// Replaces the exponent of the constant prefactor.
    pub fn with_prefactor_exponent(mut self, x: GaussianRational) -> Self {
        self.prefactor = x;
        self.canonicalize();
        self
    }

    fn canonicalize(&mut self) {
        if self.terms.is_empty() {
            self.prefactor = GaussianRational::zero();
            self.u.iter_mut().for_each(|x| *x = GaussianRational::zero());
            self.v.iter_mut().for_each(|x| *x = GaussianRational::zero());
        }
    }

    fn with_terms(&self, terms: Terms) -> Self {
        let mut f = ExpPoly {
            dims: self.dims,
            prefactor: self.prefactor.clone(),
            terms,
            u: self.u.clone(),
            v: self.v.clone(),
        };
        f.canonicalize();
        f
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &MultiMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant factor `1 * e^x`.
    pub fn prefactor(&self) -> ExpScalar {
        ExpScalar::new(GaussianRational::one(), self.prefactor.clone())
    }

    pub fn prefactor_exponent(&self) -> &GaussianRational {
        &self.prefactor
    }

    pub fn u(&self) -> &[GaussianRational] {
        &self.u
    }

    pub fn v(&self) -> &[GaussianRational] {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No exponential factor of any kind.
    pub fn is_polynomial(&self) -> bool {
        self.prefactor.is_zero() && self.has_no_exponential()
    }

    fn has_no_exponential(&self) -> bool {
        self.u.iter().chain(&self.v).all(GaussianRational::is_zero)
    }

    pub fn has_zbar_exponential(&self) -> bool {
        self.v.iter().any(|x| !x.is_zero())
    }

    /// Annihilated by every lowering operator.
    pub fn is_analytic(&self) -> bool {
        !self.has_zbar_exponential() && self.terms.keys().all(MultiMonomial::is_analytic)
    }

    /// Highest power of `zbar_j` present (zero for the zero function).
    pub fn zbar_degree(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m.zb[j]).max().unwrap_or(0)
    }

    pub fn total_zbar_degree(&self) -> u32 {
        self.terms.keys().map(MultiMonomial::zbar_degree).max().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiMonomial::degree).max().unwrap_or(0)
    }

    fn same_exponential(&self, other: &ExpPoly) -> bool {
        self.prefactor == other.prefactor && self.u == other.u && self.v == other.v
    }

    fn check_dims(&self, other: &ExpPoly) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        Ok(())
    }

    fn check_coord(&self, j: usize) -> Result<()> {
        if j >= self.dims {
            return Err(Error::CoordinateOutOfRange { coord: j, dims: self.dims });
        }
        Ok(())
    }

    /// Sum of two functions; fails unless they share the exponential data
    /// (the zero function is compatible with everything).
    pub fn try_add(&self, other: &ExpPoly) -> Result<ExpPoly> {
        self.check_dims(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if !self.same_exponential(other) {
            return Err(Error::IncommensurableExponents(
                alloc::format!("{:?}/{:?}/{}", self.u, self.v, self.prefactor),
                alloc::format!("{:?}/{:?}/{}", other.u, other.v, other.prefactor),
            ));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(self.with_terms(terms))
    }

    pub fn try_sub(&self, other: &ExpPoly) -> Result<ExpPoly> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero(self.dims);
        }
        self.with_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    pub fn neg(&self) -> ExpPoly {
        self.with_terms(self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect())
    }

    /// Multiplies by the monomial `z^m zbar^n`.
    pub fn mul_monomial(&self, mono: &MultiMonomial) -> ExpPoly {
        self.with_terms(self.terms.iter().map(|(m, x)| (m.mul(mono), x.clone())).collect())
    }

    /// Multiplies by a polynomial (exponential data of `p` must be trivial).
    pub fn mul_poly(&self, p: &ExpPoly) -> Result<ExpPoly> {
        self.check_dims(p)?;
        if !p.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        Ok(self.with_terms(terms_mul(&self.terms, &p.terms)))
    }

    fn derivative(&self, j: usize, zbar: bool) -> ExpPoly {
        let factor = if zbar { &self.v[j] } else { &self.u[j] };
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let e = if zbar { m.zb[j] } else { m.z[j] };
            if e > 0 {
                let mut dm = m.clone();
                if zbar {
                    dm.zb[j] -= 1;
                } else {
                    dm.z[j] -= 1;
                }
                add_term(&mut terms, dm, c.scale(&Rational::int(e)));
            }
            if !factor.is_zero() {
                add_term(&mut terms, m.clone(), c * factor);
            }
        }
        self.with_terms(terms)
    }

    /// Exact `d/dz_j`, including the contribution of the exponential factor.
    pub fn d_z(&self, j: usize) -> Result<ExpPoly> {
        self.check_coord(j)?;
        Ok(self.derivative(j, false))
    }

    /// Exact `d/dzbar_j`, including the contribution of the exponential factor.
    pub fn d_zbar(&self, j: usize) -> Result<ExpPoly> {
        self.check_coord(j)?;
        Ok(self.derivative(j, true))
    }

    /// Lowering operator `a_j = d/dzbar_j` (coordinates are zero-based).
    pub fn apply_lowering(&self, j: usize) -> Result<ExpPoly> {
        self.d_zbar(j)
    }

    /// Raising operator `a_j^dag = zbar_j - d/dz_j` (coordinates are zero-based).
    pub fn apply_raising(&self, j: usize) -> Result<ExpPoly> {
        self.check_coord(j)?;
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let mut up = m.clone();
            up.zb[j] += 1;
            add_term(&mut terms, up, c.clone());
            if m.z[j] > 0 {
                let mut dm = m.clone();
                dm.z[j] -= 1;
                add_term(&mut terms, dm, -c.scale(&Rational::int(m.z[j])));
            }
            if !self.u[j].is_zero() {
                add_term(&mut terms, m.clone(), -(c * &self.u[j]));
            }
        }
        Ok(self.with_terms(terms))
    }

    /// `<f, g> = integral of f * conj(g)` against the Gaussian measure on `C^d`.
    ///
    /// Coordinate-wise the moment identity
    /// `int z^p zbar^q e^{sz + t zbar} dmu = e^{st} sum_j C(p,j) C(q,j) j! s^{q-j} t^{p-j}`
    /// is used, so every summand shares the exponent `sum_i s_i t_i` and the
    /// result is a single exact [`ExpScalar`].
    pub fn inner_product(&self, other: &ExpPoly) -> Result<ExpScalar> {
        self.check_dims(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ExpScalar::zero());
        }
        let d = self.dims;
        let s: Vec<GaussianRational> = (0..d).map(|i| &self.u[i] + &other.v[i].conj()).collect();
        let t: Vec<GaussianRational> = (0..d).map(|i| &self.v[i] + &other.u[i].conj()).collect();
        let mut tables: Vec<MomentTable> =
            (0..d).map(|i| MomentTable::new(s[i].clone(), t[i].clone())).collect();

        let mut acc = GaussianRational::zero();
        for (mf, cf) in &self.terms {
            for (mg, cg) in &other.terms {
                let mut prod = cf * &cg.conj();
                for i in 0..d {
                    let p = mf.z[i] + mg.zb[i];
                    let q = mf.zb[i] + mg.z[i];
                    let mom = tables[i].get(p, q);
                    if mom.is_zero() {
                        prod = GaussianRational::zero();
                        break;
                    }
                    prod *= &mom;
                }
                acc += &prod;
            }
        }
        let mut exponent = &self.prefactor + &other.prefactor.conj();
        for i in 0..d {
            exponent += &(&s[i] * &t[i]);
        }
        Ok(ExpScalar::new(acc, exponent))
    }

    /// `<f, f>`.
    pub fn norm_sq(&self) -> ExpScalar {
        self.inner_product(self).expect("same dimension")
    }

    /// `(U f)(w) = f(U^{-1} w)` for an exactly unitary `U` (rows of the matrix).
    pub fn rotate(&self, u_mat: &[Vec<GaussianRational>]) -> Result<ExpPoly> {
        let d = self.dims;
        if u_mat.len() != d || u_mat.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: u_mat.len() });
        }
        for i in 0..d {
            for j in 0..d {
                // (U^* U)_{ij} = sum_k conj(U_{ki}) U_{kj}
                let mut e = GaussianRational::zero();
                for row in u_mat {
                    e += &(&row[i].conj() * &row[j]);
                }
                let expect = if i == j { GaussianRational::one() } else { GaussianRational::zero() };
                if e != expect {
                    return Err(Error::NotUnitary);
                }
            }
        }
        // z = U^* w, zbar = U^T wbar
        let lin = |i: usize, bar: bool| -> Terms {
            let mut t = Terms::new();
            for (j, row) in u_mat.iter().enumerate() {
                let mut m = MultiMonomial::one(d);
                let c = if bar {
                    m.zb[j] = 1;
                    row[i].clone()
                } else {
                    m.z[j] = 1;
                    row[i].conj()
                };
                add_term(&mut t, m, c);
            }
            t
        };
        let mut z_pows: Vec<Vec<Terms>> = Vec::with_capacity(d);
        let mut zb_pows: Vec<Vec<Terms>> = Vec::with_capacity(d);
        for i in 0..d {
            let (mz, mzb) = self
                .terms
                .keys()
                .fold((0, 0), |(a, b), m| (a.max(m.z[i]), b.max(m.zb[i])));
            z_pows.push(powers(&lin(i, false), mz, d));
            zb_pows.push(powers(&lin(i, true), mzb, d));
        }
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let mut acc = Terms::new();
            add_term(&mut acc, MultiMonomial::one(d), c.clone());
            for i in 0..d {
                acc = terms_mul(&acc, &z_pows[i][m.z[i] as usize]);
                acc = terms_mul(&acc, &zb_pows[i][m.zb[i] as usize]);
            }
            for (mm, cc) in acc {
                add_term(&mut terms, mm, cc);
            }
        }
        // u.(U^* w) = (conj(U) u).w and v.(U^T wbar) = (U v).wbar
        let mut nu = vec![GaussianRational::zero(); d];
        let mut nv = vec![GaussianRational::zero(); d];
        for (j, row) in u_mat.iter().enumerate() {
            for i in 0..d {
                nu[j] += &(&row[i].conj() * &self.u[i]);
                nv[j] += &(&row[i] * &self.v[i]);
            }
        }
        let mut f = self.with_terms(terms);
        if !f.is_zero() {
            f.u = nu;
            f.v = nv;
        }
        Ok(f)
    }

    /// `(W_a f)(w) = e^{conj(a).w - |a|^2/2} f(w - a)`; the constant
    /// `e^{-|a|^2/2}` is applied only when `include_gauge` is set.
    pub fn weyl_shift(&self, a: &[GaussianRational], include_gauge: bool) -> Result<ExpPoly> {
        let d = self.dims;
        if a.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.len() });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            terms = shift_coordinate(&terms, i, ai);
        }
        let mut f = self.with_terms(terms);
        if f.is_zero() {
            return Ok(f);
        }
        let mut x = self.prefactor.clone();
        for i in 0..d {
            // exp(u (w - a) + v (wbar - abar)) leaves the constant -(u a + v abar)
            x -= &(&self.u[i] * &a[i]);
            x -= &(&self.v[i] * &a[i].conj());
            f.u[i] = &self.u[i] + &a[i].conj();
            if include_gauge {
                x -= &GaussianRational::real(a[i].norm_sq() * Rational::frac(1, 2));
            }
        }
        f.prefactor = x;
        Ok(f)
    }

    /// Floating-point evaluation at `point` (no exactness contract).
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, z) in point.iter().enumerate().take(self.dims) {
                t *= z.powu(m.z[i]) * z.conj().powu(m.zb[i]);
            }
            sum += t;
        }
        let mut x = self.prefactor.to_complex();
        for (i, z) in point.iter().enumerate().take(self.dims) {
            x += self.u[i].to_complex() * z + self.v[i].to_complex() * z.conj();
        }
        sum * x.exp()
    }
}

fn powers(base: &Terms, max: u32, d: usize) -> Vec<Terms> {
    let mut one = Terms::new();
    add_term(&mut one, MultiMonomial::one(d), GaussianRational::one());
    let mut out = vec![one];
    for k in 1..=max as usize {
        out.push(terms_mul(&out[k - 1], base));
    }
    out
}

/// Substitutes `z_i -> z_i - a`, `zbar_i -> zbar_i - conj(a)`.
fn shift_coordinate(terms: &Terms, i: usize, a: &GaussianRational) -> Terms {
    let neg_a = -a;
    let neg_ab = neg_a.conj();
    let mut out = Terms::new();
    for (m, c) in terms {
        let (p, q) = (m.z[i], m.zb[i]);
        for j in 0..=p {
            let cj = c * &neg_a.pow(p - j).scale(&Rational::binomial(p, j));
            for l in 0..=q {
                let cl = &cj * &neg_ab.pow(q - l).scale(&Rational::binomial(q, l));
                let mut nm = m.clone();
                nm.z[i] = j;
                nm.zb[i] = l;
                add_term(&mut out, nm, cl);
            }
        }
    }
    out
}

/// Memoized values of `sum_j C(p,j) C(q,j) j! s^{q-j} t^{p-j}`.
struct MomentTable {
    s: GaussianRational,
    t: GaussianRational,
    cache: BTreeMap<(u32, u32), GaussianRational>,
}

impl MomentTable {
    fn new(s: GaussianRational, t: GaussianRational) -> Self {
        MomentTable { s, t, cache: BTreeMap::new() }
    }

    fn get(&mut self, p: u32, q: u32) -> GaussianRational {
        if self.s.is_zero() && self.t.is_zero() {
            return if p == q {
                GaussianRational::real(Rational::factorial(p))
            } else {
                GaussianRational::zero()
            };
        }
        if let Some(v) = self.cache.get(&(p, q)) {
            return v.clone();
        }
        let v = gaussian_moment(p, q, &self.s, &self.t);
        self.cache.insert((p, q), v.clone());
        v
    }
}

/// `e^{-st} * int z^p zbar^q e^{sz + t zbar} dmu(z)`.
pub fn gaussian_moment(p: u32, q: u32, s: &GaussianRational, t: &GaussianRational) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for j in 0..=p.min(q) {
        let c = &(&Rational::binomial(p, j) * &Rational::binomial(q, j)) * &Rational::factorial(j);
        acc += &(&s.pow(q - j) * &t.pow(p - j)).scale(&c);
    }
    acc
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.prefactor.is_zero() {
            write!(f, "e^{} * ", self.prefactor)?;
        }
        write!(f, "(")?;
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for i in 0..self.dims {
                let suffix = if self.dims == 1 { alloc::string::String::new() } else { alloc::format!("{}", i + 1) };
                match m.z[i] {
                    0 => {}
                    1 => write!(f, " z{suffix}")?,
                    e => write!(f, " z{suffix}^{e}")?,
                }
                match m.zb[i] {
                    0 => {}
                    1 => write!(f, " zb{suffix}")?,
                    e => write!(f, " zb{suffix}^{e}")?,
                }
            }
        }
        write!(f, ")")?;
        if !self.has_no_exponential() {
            write!(f, " * exp(u={:?}, v={:?})", self.u.iter().map(|x| alloc::format!("{x}")).collect::<Vec<_>>(), self.v.iter().map(|x| alloc::format!("{x}")).collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::int(n)
    }

    fn p1(t: &[(u32, u32, i64)]) -> ExpPoly {
        ExpPoly::poly1(&t.iter().map(|&(m, n, c)| (m, n, q(c))).collect::<Vec<_>>())
    }

    fn exp_z() -> ExpPoly {
        ExpPoly::one(1).with_exponential(vec![q(1)], vec![q(0)])
    }

    fn exp_zb() -> ExpPoly {
        ExpPoly::one(1).with_exponential(vec![q(0)], vec![q(1)])
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(p1(&[(1, 1, 1)]).inner_product(&ExpPoly::one(1)).unwrap(), ExpScalar::one());
        assert!(p1(&[(2, 0, 1)]).inner_product(&p1(&[(0, 1, 1)])).unwrap().is_zero());
        assert_eq!(exp_z().inner_product(&exp_z()).unwrap(), ExpScalar::new(q(1), q(1)));
    }

    // <z^a zbar^b, z^c zbar^d> = delta_{a+d, b+c} (a+d)! from polar coordinates
    #[test]
    fn monomial_moments_match_polar_oracle() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let ip = p1(&[(a, b, 1)]).inner_product(&p1(&[(c, d, 1)])).unwrap();
                        let expect = if a + d == b + c {
                            ExpScalar::from_coeff(GaussianRational::real(Rational::factorial(a + d)))
                        } else {
                            ExpScalar::zero()
                        };
                        assert_eq!(ip, expect, "{a} {b} {c} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(ExpPoly::one(1).norm_sq(), ExpScalar::one());
        assert_eq!(p1(&[(0, 2, 1)]).norm_sq(), ExpScalar::from_coeff(q(2)));
        assert_eq!(exp_z().norm_sq(), ExpScalar::new(q(1), q(1)));
    }

    #[test]
    fn lowering_examples() {
        assert_eq!(p1(&[(0, 2, 1)]).apply_lowering(0).unwrap(), p1(&[(0, 1, 2)]));
        assert!(p1(&[(1, 0, 1)]).apply_lowering(0).unwrap().is_zero());
        let f = exp_zb().mul_monomial(&MultiMonomial::new(vec![0], vec![1]));
        let expect = p1(&[(0, 0, 1), (0, 1, 1)]).with_exponential(vec![q(0)], vec![q(1)]);
        assert_eq!(f.apply_lowering(0).unwrap(), expect);
        assert!(matches!(f.apply_lowering(1), Err(Error::CoordinateOutOfRange { .. })));
    }

    #[test]
    fn raising_examples() {
        assert_eq!(ExpPoly::one(1).apply_raising(0).unwrap(), p1(&[(0, 1, 1)]));
        assert_eq!(p1(&[(1, 0, 1)]).apply_raising(0).unwrap(), p1(&[(1, 1, 1), (0, 0, -1)]));
        assert_eq!(p1(&[(0, 1, 1)]).apply_raising(0).unwrap(), p1(&[(0, 2, 1)]));
        // e^z is analytic with a = 0, and a^dag e^z = (zbar - 1) e^z
        let expect = p1(&[(0, 1, 1), (0, 0, -1)]).with_exponential(vec![q(1)], vec![q(0)]);
        assert_eq!(exp_z().apply_raising(0).unwrap(), expect);
    }

    #[test]
    fn rotate_examples() {
        let i = GaussianRational::i();
        let zb = p1(&[(0, 1, 1)]);
        assert_eq!(zb.rotate(&[vec![i.clone()]]).unwrap(), zb.scale(&i));
        let alpha = GaussianRational::new(Rational::frac(3, 5), Rational::frac(4, 5));
        let z = p1(&[(1, 0, 1)]);
        assert_eq!(z.rotate(&[vec![alpha.clone()]]).unwrap(), z.scale(&alpha.conj()));
        let f = p1(&[(2, 1, 3), (0, 1, -1)]);
        assert_eq!(f.rotate(&[vec![q(1)]]).unwrap(), f);
        assert_eq!(f.rotate(&[vec![q(2)]]), Err(Error::NotUnitary));
    }

    #[test]
    fn weyl_examples() {
        let f = p1(&[(2, 1, 3), (0, 1, -1)]);
        assert_eq!(f.weyl_shift(&[q(0)], true).unwrap(), f);
        let w = ExpPoly::one(1).weyl_shift(&[q(1)], true).unwrap();
        assert_eq!(w.prefactor(), ExpScalar::new(q(1), GaussianRational::frac(-1, 2)));
        assert_eq!(w.u(), &[q(1)]);
        assert_eq!(w.v(), &[q(0)]);
        assert_eq!(w.coeff(&MultiMonomial::one(1)), q(1));
        assert_eq!(w.norm_sq(), ExpScalar::one());
    }

    #[test]
    fn evaluate_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert!((p1(&[(1, 1, 1)]).evaluate(&[one]) - one).norm() < 1e-15);
        assert!((ExpPoly::one(1).evaluate(&[Complex64::new(0.3, -2.0)]) - one).norm() < 1e-15);
        assert!((exp_z().evaluate(&[Complex64::new(0.0, 0.0)]) - one).norm() < 1e-15);
        let e = exp_z().evaluate(&[one]);
        assert!((e.re - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn zero_is_canonical() {
        let f = p1(&[(1, 0, 1)]).with_exponential(vec![q(2)], vec![q(0)]);
        let z = f.try_sub(&f).unwrap();
        assert_eq!(z, ExpPoly::zero(1));
        assert!(f.try_add(&exp_zb()).is_err());
    }
}
