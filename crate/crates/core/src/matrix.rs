//! Exact matrices, the finite matrix model of the sl(2) action on a
//! poly-Fock level, and matrix-unit synthesis from the generators.
//!
//! The model works in the basis `(a^dag)^j g`, `j = 0..k`, with `g` analytic.
//! In that basis all three generators have rational entries; the orthonormal
//! form is recovered by conjugating with `diag(sqrt(j!))`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::decomp::{lift, lower, true_decompose, FockColumn};
use crate::error::{Error, Result};
use crate::ops::{sl2_generators, NormalForm};
use crate::poly::ExpPoly;
use crate::scalar::{GaussianRational, Rational};
use crate::upoly::UPoly;

/// Square matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    n: usize,
    rows: Vec<Vec<GaussianRational>>,
}

impl ExactMatrix {
    pub fn zero(n: usize) -> Self {
        ExactMatrix { n, rows: vec![vec![GaussianRational::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        Ok(ExactMatrix { n, rows })
    }

    /// Matrix with a single entry `1` at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.rows[i][j] = GaussianRational::one();
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<GaussianRational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: GaussianRational) {
        self.rows[i][j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(GaussianRational::is_zero)
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &ExactMatrix, f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        ExactMatrix { n: self.n, rows }
    }

    pub fn scale(&self, c: &GaussianRational) -> ExactMatrix {
        ExactMatrix { n: self.n, rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for l in 0..self.n {
                let a = &self.rows[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    out.rows[i][j] += &(a * &other.rows[l][j]);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ExactMatrix {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &ExactMatrix) -> ExactMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        self.rows.iter().map(|r| r.iter().zip(v).fold(GaussianRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn trace(&self) -> GaussianRational {
        (0..self.n).fold(GaussianRational::zero(), |acc, i| acc + &self.rows[i][i])
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &UPoly) -> ExactMatrix {
        p.coeffs().iter().rev().fold(Self::zero(self.n), |acc, c| {
            acc.mul(self).add(&Self::identity(self.n).scale(c))
        })
    }

    pub fn rank(&self) -> usize {
        rank(self.rows.clone())
    }

    /// Basis of the right null space, in reduced echelon normalization.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        nullspace(self.rows.clone(), self.n)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.re.to_f64()).collect()).collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| alloc::format!("{x}")).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<GaussianRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of a list of equal-length row vectors.
pub fn rank(mut rows: Vec<Vec<GaussianRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    rref(&mut rows, cols).len()
}

/// Right null space of a `rows x cols` matrix.
pub fn nullspace(mut rows: Vec<Vec<GaussianRational>>, cols: usize) -> Vec<Vec<GaussianRational>> {
    let pivots = rref(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); cols];
            v[f] = GaussianRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// The three generators as `k x k` matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelMatrices {
    pub plus: ExactMatrix,
    pub zero: ExactMatrix,
    pub minus: ExactMatrix,
}

/// Model matrices in the basis `(a^dag)^j g`, `j = 0..k`.
pub fn model_matrices(k: u32) -> Result<ModelMatrices> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = k as usize;
    let mut plus = ExactMatrix::zero(n);
    let mut zero = ExactMatrix::zero(n);
    let mut minus = ExactMatrix::zero(n);
    let half = Rational::frac(1, 2);
    for j in 0..n {
        zero.rows[j][j] = GaussianRational::real(Rational::int(j) - (Rational::int(k) - Rational::one()) * &half);
        if j >= 1 {
            minus.rows[j - 1][j] = GaussianRational::int(j as i64);
        }
        if j + 1 < n {
            plus.rows[j + 1][j] = GaussianRational::int(j as i64 - k as i64 + 1);
        }
    }
    Ok(ModelMatrices { plus, zero, minus })
}

/// Float matrices in the orthonormal basis, `(plus, zero, minus)`.
pub type FloatTriple = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// The generators in the orthonormal basis `(a^dag)^j g / sqrt(j!)`.
pub fn paper_matrices_float(k: u32) -> FloatTriple {
    let n = k as usize;
    let mut plus = vec![vec![0.0; n]; n];
    let mut zero = vec![vec![0.0; n]; n];
    let mut minus = vec![vec![0.0; n]; n];
    for j in 0..n {
        zero[j][j] = j as f64 - (k as f64 - 1.0) / 2.0;
        if j + 1 < n {
            let s = Float::sqrt((j + 1) as f64);
            minus[j][j + 1] = s;
            plus[j + 1][j] = -s * (k as f64 - 1.0 - j as f64);
        }
    }
    (plus, zero, minus)
}

/// `max |D N D^-1 - M|` over the three generators, `D = diag(sqrt(j!))`.
pub fn float_similarity_error(k: u32) -> Result<f64> {
    let exact = model_matrices(k)?;
    let (p, z, m) = paper_matrices_float(k);
    let sqrt_fact: Vec<f64> = (0..k).map(|j| Float::sqrt(Rational::factorial(j).to_f64())).collect();
    let mut err = 0.0f64;
    for (e, fl) in [(&exact.plus, &p), (&exact.zero, &z), (&exact.minus, &m)] {
        for i in 0..k as usize {
            for j in 0..k as usize {
                let conj = sqrt_fact[i] * e.get(i, j).re.to_f64() / sqrt_fact[j];
                err = err.max((conj - fl[i][j]).abs());
            }
        }
    }
    Ok(err)
}

/// The function-side action of `op` on a Fock column, read back as a column
/// of analytic functions of the same length.
pub fn column_action(op: &NormalForm, col: &FockColumn) -> Result<FockColumn> {
    let k = col.k() as u32;
    let image = op.apply(&col.to_function()?)?;
    let dec = true_decompose(&image)?;
    let top = dec.components.len() as u32;
    if (k + 1..=top).any(|l| !dec.level(l).is_zero()) {
        return Err(Error::NotInvariant(k));
    }
    (1..=k).map(|l| lower(&dec.level(l), l)).collect::<Result<Vec<_>>>().map(FockColumn)
}

/// The matrix-side action `N g` on a column of analytic functions.
pub fn matrix_column_action(m: &ExactMatrix, col: &FockColumn) -> Result<FockColumn> {
    let mut out = Vec::with_capacity(m.size());
    for i in 0..m.size() {
        let mut acc = ExpPoly::zero(1);
        for (j, g) in col.0.iter().enumerate() {
            acc = acc.try_add(&g.scale(m.get(i, j)))?;
        }
        out.push(acc);
    }
    Ok(FockColumn(out))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntertwineReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl IntertwineReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares function-side and matrix-side actions of all three generators on
/// every single-entry column `z^n e_j` with `n <= degree_bound`.
pub fn intertwine_check(k: u32, degree_bound: u32) -> Result<IntertwineReport> {
    let mm = model_matrices(k)?;
    let gens = sl2_generators(&Rational::int(k));
    let mut report = IntertwineReport::default();
    for (name, op, m) in [("plus", &gens.plus, &mm.plus), ("zero", &gens.zero, &mm.zero), ("minus", &gens.minus, &mm.minus)] {
        for j in 0..k as usize {
            for n in 0..=degree_bound {
                let mut col = vec![ExpPoly::zero(1); k as usize];
                col[j] = ExpPoly::poly1(&[(n, 0, GaussianRational::one())]);
                let col = FockColumn(col);
                report.checks += 1;
                if column_action(op, &col)? != matrix_column_action(m, &col)? {
                    report.failures.push(alloc::format!("{name} on z^{n} at position {}", j + 1));
                }
            }
        }
    }
    Ok(report)
}

/// Lifts a column `(g_1, .., g_k)` entry by entry; convenience for callers
/// building single-level columns.
pub fn pure_column(k: u32, level: u32, g: &ExpPoly) -> Result<FockColumn> {
    if level == 0 || level > k {
        return Err(Error::InvalidArgument(alloc::format!("level {level} outside 1..={k}")));
    }
    lift(g, level)?;
    let mut col = vec![ExpPoly::zero(1); k as usize];
    col[level as usize - 1] = g.clone();
    Ok(FockColumn(col))
}

/// A generator of the sl(2) triple.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Plus,
    Zero,
    Minus,
}

impl Generator {
    fn atom(self) -> &'static str {
        match self {
            Generator::Plus => "Jp",
            Generator::Zero => "J0",
            Generator::Minus => "Jm",
        }
    }
}

/// Non-commutative polynomial in the generators: a sum of scaled words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneratorPoly(pub Vec<(GaussianRational, Vec<Generator>)>);

impl GeneratorPoly {
    /// `c * (this word) * other` for every pair of terms.
    pub fn then(&self, other: &GeneratorPoly) -> GeneratorPoly {
        let mut out = Vec::new();
        for (c1, w1) in &self.0 {
            for (c2, w2) in &other.0 {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push((c1 * c2, w));
            }
        }
        GeneratorPoly(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> GeneratorPoly {
        GeneratorPoly(self.0.iter().map(|(x, w)| (x * c, w.clone())).collect())
    }

    fn word(g: Generator, e: u32) -> GeneratorPoly {
        GeneratorPoly(vec![(GaussianRational::one(), vec![g; e as usize])])
    }

    /// Evaluates with the generators replaced by the model matrices.
    pub fn to_matrix(&self, m: &ModelMatrices) -> ExactMatrix {
        let n = m.zero.size();
        self.0.iter().fold(ExactMatrix::zero(n), |acc, (c, w)| {
            let prod = w.iter().fold(ExactMatrix::identity(n), |p, g| {
                p.mul(match g {
                    Generator::Plus => &m.plus,
                    Generator::Zero => &m.zero,
                    Generator::Minus => &m.minus,
                })
            });
            acc.add(&prod.scale(c))
        })
    }

    /// Evaluates with the generators replaced by ladder-operator expressions at mark `k`.
    pub fn to_operator(&self, k: &Rational) -> NormalForm {
        let g = sl2_generators(k);
        self.0.iter().fold(NormalForm::zero(1), |acc, (c, w)| {
            let prod = w.iter().fold(NormalForm::identity(1), |p, x| {
                p * match x {
                    Generator::Plus => &g.plus,
                    Generator::Zero => &g.zero,
                    Generator::Minus => &g.minus,
                }
            });
            acc + prod.scale(c)
        })
    }
}

/// Prints in the operator-expression syntax, e.g. `Jm J0 - 1/2 I`.
impl fmt::Display for GeneratorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.0.iter().filter(|(c, _)| !c.is_zero()).collect();
        if terms.is_empty() {
            return write!(f, "0 I");
        }
        for (n, (c, w)) in terms.iter().enumerate() {
            let negative = if c.im.is_zero() { c.re.is_negative() } else { c.re.is_zero() && c.im.is_negative() };
            let mag = if negative { -c.clone() } else { c.clone() };
            match (n == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            if w.is_empty() {
                write!(f, "I")?;
                continue;
            }
            let mut atoms: Vec<String> = Vec::new();
            let mut i = 0;
            while i < w.len() {
                let run = w[i..].iter().take_while(|&&g| g == w[i]).count();
                atoms.push(if run == 1 { w[i].atom().into() } else { alloc::format!("{}^{run}", w[i].atom()) });
                i += run;
            }
            write!(f, "{}", atoms.join(" "))?;
        }
        Ok(())
    }
}

/// An elementary matrix and the generator polynomial producing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixUnit {
    pub matrix: ExactMatrix,
    pub expr: GeneratorPoly,
}

fn zero_eigenvalue(k: u32, m: u32) -> Rational {
    Rational::int(m) - (Rational::int(k) - Rational::one()) * Rational::frac(1, 2)
}

/// Diagonal idempotent at position `m` (zero-based), by Lagrange
/// interpolation in the diagonal generator.
fn diagonal_idempotent(k: u32, m: u32) -> GeneratorPoly {
    let mut p = UPoly::one();
    let mu = zero_eigenvalue(k, m);
    for l in (0..k).filter(|&l| l != m) {
        let nu = zero_eigenvalue(k, l);
        let denom = (&mu - &nu).recip().expect("distinct eigenvalues");
        let factor = UPoly::linear(GaussianRational::one(), GaussianRational::real(-nu)).scale(&denom.into());
        p = p.mul(&factor);
    }
    GeneratorPoly(
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), vec![Generator::Zero; i]))
            .collect(),
    )
}

/// Matrix units `E_{m,n}`, keyed by one-based `(m, n)`.
///
/// Diagonal units interpolate the diagonal generator; off-diagonal ones
/// transport with powers of the lowering or raising generator, rescaled.
pub fn matrix_units(k: u32) -> Result<BTreeMap<(u32, u32), MatrixUnit>> {
    let mm = model_matrices(k)?;
    let mut out = BTreeMap::new();
    for n in 0..k {
        let d = diagonal_idempotent(k, n);
        for m in 0..k {
            let expr = match m.cmp(&n) {
                core::cmp::Ordering::Equal => d.clone(),
                core::cmp::Ordering::Less => {
                    let c = &Rational::factorial(m) / &Rational::factorial(n);
                    GeneratorPoly::word(Generator::Minus, n - m).then(&d).scale(&c.into())
                }
                core::cmp::Ordering::Greater => {
                    let mut c = Rational::one();
                    for j in n..m {
                        c *= &(Rational::int(j) - Rational::int(k) + Rational::one());
                    }
                    GeneratorPoly::word(Generator::Plus, m - n).then(&d).scale(&c.recip()?.into())
                }
            };
            let matrix = expr.to_matrix(&mm);
            if matrix != ExactMatrix::unit(k as usize, m as usize, n as usize) {
                return Err(Error::InvariantBreach(alloc::format!("matrix unit ({}, {}) is wrong", m + 1, n + 1)));
            }
            out.insert((m + 1, n + 1), MatrixUnit { matrix, expr });
        }
    }
    Ok(out)
}

/// Coefficients `s_{m,n}` with `t = sum s_{m,n} E_{m,n}`, checked by reconstruction.
pub fn scalar_operator_decompose(t: &ExactMatrix, k: u32) -> Result<Vec<Vec<GaussianRational>>> {
    if t.size() != k as usize {
        return Err(Error::DimensionMismatch { expected: k as usize, found: t.size() });
    }
    let units = matrix_units(k)?;
    let s = t.rows.clone();
    let rebuilt = units.iter().fold(ExactMatrix::zero(k as usize), |acc, ((m, n), u)| {
        acc.add(&u.matrix.scale(&s[*m as usize - 1][*n as usize - 1]))
    });
    if &rebuilt != t {
        return Err(Error::InvariantBreach("matrix-unit reconstruction failed".into()));
    }
    Ok(s)
}
