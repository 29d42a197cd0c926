//! Operator words in the ladder operators and their Wick normal form.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{graded_lex, ExpPoly};
use crate::scalar::{GaussianRational, Rational};

/// `(a^dag)^adag a^a`, multi-indexed over the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LadderMonomial {
    pub adag: Vec<u32>,
    pub a: Vec<u32>,
}

impl LadderMonomial {
    pub fn identity(dims: usize) -> Self {
        LadderMonomial { adag: vec![0; dims], a: vec![0; dims] }
    }

    pub fn dims(&self) -> usize {
        self.adag.len()
    }

    pub fn degree(&self) -> u32 {
        self.adag.iter().chain(&self.a).sum()
    }
}

impl Ord for LadderMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex((&self.adag, &self.a), (&other.adag, &other.a))
    }
}

impl PartialOrd for LadderMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Wick-ordered operator `sum c_{p,q} (a^dag)^p a^q`: raising powers to
/// the left of lowering powers in every term.
///
/// Arithmetic operators panic when the dimensions differ; the `compose` and
/// `commutator` methods report that as an error instead.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm {
    dims: usize,
    terms: BTreeMap<LadderMonomial, GaussianRational>,
}

fn push(terms: &mut BTreeMap<LadderMonomial, GaussianRational>, m: LadderMonomial, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(e) => {
            *e += &c;
            if e.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

impl NormalForm {
    pub fn zero(dims: usize) -> Self {
        NormalForm { dims, terms: BTreeMap::new() }
    }

    pub fn scalar(dims: usize, c: GaussianRational) -> Self {
        let mut nf = Self::zero(dims);
        push(&mut nf.terms, LadderMonomial::identity(dims), c);
        nf
    }

    pub fn identity(dims: usize) -> Self {
        Self::scalar(dims, GaussianRational::one())
    }

    pub fn monomial(m: LadderMonomial, c: GaussianRational) -> Self {
        let mut nf = Self::zero(m.dims());
        push(&mut nf.terms, m, c);
        nf
    }

    /// `a_j`, zero-based coordinate.
    pub fn lowering(dims: usize, j: usize) -> Self {
        let mut m = LadderMonomial::identity(dims);
        m.a[j] = 1;
        Self::monomial(m, GaussianRational::one())
    }

    /// `a_j^dag`, zero-based coordinate.
    pub fn raising(dims: usize, j: usize) -> Self {
        let mut m = LadderMonomial::identity(dims);
        m.adag[j] = 1;
        Self::monomial(m, GaussianRational::one())
    }

    /// `sum_i a_i^dag a_i`.
    pub fn number(dims: usize) -> Self {
        (0..dims).fold(Self::zero(dims), |acc, i| acc + Self::raising(dims, i) * Self::lowering(dims, i))
    }

    /// One-dimensional `c (a^dag)^p a^q`.
    pub fn term1(p: u32, q: u32, c: GaussianRational) -> Self {
        Self::monomial(LadderMonomial { adag: vec![p], a: vec![q] }, c)
    }

    pub fn from_terms(
        dims: usize,
        terms: impl IntoIterator<Item = (LadderMonomial, GaussianRational)>,
    ) -> Result<Self> {
        let mut nf = Self::zero(dims);
        for (m, c) in terms {
            if m.adag.len() != dims || m.a.len() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: m.dims() });
            }
            push(&mut nf.terms, m, c);
        }
        Ok(nf)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LadderMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &LadderMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.dims);
        for (m, x) in &self.terms {
            push(&mut out.terms, m.clone(), x * c);
        }
        out
    }

    fn check_dims(&self, other: &NormalForm) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        Ok(())
    }

    /// Normal-ordered product `self * other` (apply `other` first).
    ///
    /// Uses `a^q (a^dag)^p = sum_j C(q,j) C(p,j) j! (a^dag)^{p-j} a^{q-j}`
    /// in every coordinate.
    pub fn compose(&self, other: &NormalForm) -> Result<NormalForm> {
        self.check_dims(other)?;
        let d = self.dims;
        let mut out = Self::zero(d);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let base = c1 * c2;
                // per coordinate: list of (j, weight)
                let choices: Vec<Vec<(u32, Rational)>> = (0..d)
                    .map(|i| {
                        let (q, p) = (m1.a[i], m2.adag[i]);
                        (0..=q.min(p))
                            .map(|j| {
                                let w = &(&Rational::binomial(q, j) * &Rational::binomial(p, j))
                                    * &Rational::factorial(j);
                                (j, w)
                            })
                            .collect()
                    })
                    .collect();
                let mut idx = vec![0usize; d];
                loop {
                    let mut m = LadderMonomial::identity(d);
                    let mut w = Rational::one();
                    for i in 0..d {
                        let (j, ref wi) = choices[i][idx[i]];
                        m.adag[i] = m1.adag[i] + m2.adag[i] - j;
                        m.a[i] = m1.a[i] - j + m2.a[i];
                        w *= wi;
                    }
                    push(&mut out.terms, m, base.scale(&w));
                    // odometer over the per-coordinate choices
                    let mut i = 0;
                    while i < d {
                        idx[i] += 1;
                        if idx[i] < choices[i].len() {
                            break;
                        }
                        idx[i] = 0;
                        i += 1;
                    }
                    if i == d {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self * other - other * self`.
    pub fn commutator(&self, other: &NormalForm) -> Result<NormalForm> {
        Ok(self.compose(other)? - other.compose(self)?)
    }

    pub fn pow(&self, n: u32) -> NormalForm {
        let mut acc = NormalForm::identity(self.dims);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Exact action on a function: lowering powers first, then raising powers.
    pub fn apply(&self, f: &ExpPoly) -> Result<ExpPoly> {
        if f.dims() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: f.dims() });
        }
        let mut acc = ExpPoly::zero(self.dims);
        // group by the lowering part so shared a^q f is computed once
        let mut lowered: BTreeMap<Vec<u32>, ExpPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let g = match lowered.get(&m.a) {
                Some(g) => g.clone(),
                None => {
                    let mut g = f.clone();
                    for (i, &q) in m.a.iter().enumerate() {
                        for _ in 0..q {
                            g = g.apply_lowering(i)?;
                        }
                    }
                    lowered.insert(m.a.clone(), g.clone());
                    g
                }
            };
            if g.is_zero() {
                continue;
            }
            let mut h = g;
            for (i, &p) in m.adag.iter().enumerate() {
                for _ in 0..p {
                    h = h.apply_raising(i)?;
                }
            }
            acc = acc.try_add(&h.scale(c))?;
        }
        Ok(acc)
    }

    /// Largest total lowering order among the terms.
    pub fn lowering_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.a.iter().sum()).max().unwrap_or(0)
    }
}

impl Add<&NormalForm> for &NormalForm {
    type Output = NormalForm;
    fn add(self, rhs: &NormalForm) -> NormalForm {
        assert_eq!(self.dims, rhs.dims, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            push(&mut out.terms, m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&NormalForm> for &NormalForm {
    type Output = NormalForm;
    fn sub(self, rhs: &NormalForm) -> NormalForm {
        self + &(-rhs)
    }
}

impl Mul<&NormalForm> for &NormalForm {
    type Output = NormalForm;
    fn mul(self, rhs: &NormalForm) -> NormalForm {
        self.compose(rhs).expect("dimension mismatch")
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<NormalForm> for NormalForm {
            type Output = NormalForm;
            fn $m(self, rhs: NormalForm) -> NormalForm {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NormalForm> for NormalForm {
            type Output = NormalForm;
            fn $m(self, rhs: &NormalForm) -> NormalForm {
                (&self).$m(rhs)
            }
        }
        impl $tr<NormalForm> for &NormalForm {
            type Output = NormalForm;
            fn $m(self, rhs: NormalForm) -> NormalForm {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for &NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        self.scale(&-GaussianRational::one())
    }
}

impl Neg for NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        -&self
    }
}

/// One-dimensional operators print in the operator-expression syntax,
/// e.g. `ad^2 a - 1/2 I`; several dimensions use indexed atoms `ad1`, `a2`.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 I");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let negative = if c.im.is_zero() { c.re.is_negative() } else { c.re.is_zero() && c.im.is_negative() };
            let mag = if negative { -c } else { c.clone() };
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut atoms = Vec::new();
            for i in 0..self.dims {
                let idx = if self.dims == 1 { alloc::string::String::new() } else { alloc::format!("{}", i + 1) };
                match m.adag[i] {
                    0 => {}
                    1 => atoms.push(alloc::format!("ad{idx}")),
                    e => atoms.push(alloc::format!("ad{idx}^{e}")),
                }
            }
            for i in 0..self.dims {
                let idx = if self.dims == 1 { alloc::string::String::new() } else { alloc::format!("{}", i + 1) };
                match m.a[i] {
                    0 => {}
                    1 => atoms.push(alloc::format!("a{idx}")),
                    e => atoms.push(alloc::format!("a{idx}^{e}")),
                }
            }
            if atoms.is_empty() {
                atoms.push("I".into());
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{}", atoms.join(" "))?;
        }
        Ok(())
    }
}

/// A letter of a free operator word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Letter {
    Raising(usize),
    Lowering(usize),
}

/// Scalar times a product of letters, leftmost letter applied last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorWord {
    pub dims: usize,
    pub scalar: GaussianRational,
    pub letters: Vec<Letter>,
}

impl OperatorWord {
    pub fn new(dims: usize, letters: Vec<Letter>) -> Self {
        OperatorWord { dims, scalar: GaussianRational::one(), letters }
    }

    /// Letter-by-letter action, rightmost letter first.
    pub fn apply(&self, f: &ExpPoly) -> Result<ExpPoly> {
        let mut g = f.clone();
        for l in self.letters.iter().rev() {
            g = match *l {
                Letter::Raising(j) => g.apply_raising(j)?,
                Letter::Lowering(j) => g.apply_lowering(j)?,
            };
        }
        Ok(g.scale(&self.scalar))
    }
}

/// Wick normal form of a free word.
pub fn normal_order(w: &OperatorWord) -> Result<NormalForm> {
    let mut acc = NormalForm::scalar(w.dims, w.scalar.clone());
    for l in &w.letters {
        let (Letter::Raising(j) | Letter::Lowering(j)) = *l;
        if j >= w.dims {
            return Err(Error::CoordinateOutOfRange { coord: j, dims: w.dims });
        }
        let nf = match l {
            Letter::Raising(_) => NormalForm::raising(w.dims, j),
            Letter::Lowering(_) => NormalForm::lowering(w.dims, j),
        };
        acc = acc.compose(&nf)?;
    }
    Ok(acc)
}

/// The one-dimensional sl(2) generators at mark `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sl2Triple {
    /// `(a^dag)^2 a - (k-1) a^dag`
    pub plus: NormalForm,
    /// `a^dag a - (k-1)/2 I`
    pub zero: NormalForm,
    /// `a`
    pub minus: NormalForm,
}

pub fn sl2_generators(k: &Rational) -> Sl2Triple {
    let km1 = GaussianRational::real(k - Rational::one());
    let plus = NormalForm::term1(2, 1, GaussianRational::one()) - NormalForm::term1(1, 0, km1.clone());
    let zero = NormalForm::term1(1, 1, GaussianRational::one())
        - NormalForm::scalar(1, km1.scale(&Rational::frac(1, 2)));
    let minus = NormalForm::lowering(1, 0);
    Sl2Triple { plus, zero, minus }
}

/// Euler–Cartan operator `a^dag a - m I`.
pub fn euler_cartan(m: u32) -> NormalForm {
    NormalForm::term1(1, 1, GaussianRational::one()) - NormalForm::scalar(1, GaussianRational::int(m as i64))
}

/// `prod_{m=0}^{k-1} (N - m I)` for `N = sum_i a_i^dag a_i` over the given
/// coordinates of a `dims`-dimensional space.
pub fn level_product(dims: usize, coords: &[usize], k: u32) -> NormalForm {
    let n = coords
        .iter()
        .fold(NormalForm::zero(dims), |acc, &i| acc + NormalForm::raising(dims, i) * NormalForm::lowering(dims, i));
    (0..k).fold(NormalForm::identity(dims), |acc, m| {
        acc * (&n - &NormalForm::scalar(dims, GaussianRational::int(m as i64)))
    })
}

/// The sl(d+1) family built from `d` pairs of ladder operators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlGenerators {
    /// `J_i^- = a_i`
    pub minus: Vec<NormalForm>,
    /// `J_{i,j}^0 = a_i^dag a_j`, indexed `[i][j]`
    pub zero: Vec<Vec<NormalForm>>,
    /// `J_i^+ = a_i^dag (sum_j a_j^dag a_j - k I)`
    pub plus: Vec<NormalForm>,
}

impl SlGenerators {
    /// All `d + d^2 + d` generators in a fixed order: minus, zero (row-major), plus.
    pub fn all(&self) -> Vec<&NormalForm> {
        self.minus.iter().chain(self.zero.iter().flatten()).chain(self.plus.iter()).collect()
    }
}

pub fn sld_generators(d: usize, k: &Rational) -> Result<SlGenerators> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let minus = (0..d).map(|i| NormalForm::lowering(d, i)).collect();
    let zero = (0..d)
        .map(|i| (0..d).map(|j| NormalForm::raising(d, i) * NormalForm::lowering(d, j)).collect())
        .collect();
    let shifted = NormalForm::number(d) - NormalForm::scalar(d, GaussianRational::real(k.clone()));
    let plus = (0..d).map(|i| NormalForm::raising(d, i) * &shifted).collect();
    Ok(SlGenerators { minus, zero, plus })
}
