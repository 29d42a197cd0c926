//! Dense univariate polynomials over the Gaussian rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};

/// Coefficients from the constant term up; never has a zero leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly(Vec<GaussianRational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: GaussianRational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(GaussianRational::one())
    }

    /// `x - r`.
    pub fn linear_root(r: &GaussianRational) -> Self {
        UPoly::new(vec![-r.clone(), GaussianRational::one()])
    }

    /// `c x + d`.
    pub fn linear(c: GaussianRational, d: GaussianRational) -> Self {
        UPoly::new(vec![d, c])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize) -> GaussianRational {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> UPoly {
        (0..n).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rational::int(i))).collect())
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let lead_inv = d.leading().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[i + j] -= &(&c * dj);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((UPoly::new(quot), UPoly::new(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &UPoly) -> Result<UPoly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InvariantBreach("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => UPoly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.0.iter().rev().fold(GaussianRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    /// Squarefree factorization `p = lead * prod_i s_i^i`; entry `i - 1` holds `s_i`.
    pub fn squarefree_parts(&self) -> Vec<UPoly> {
        let p = self.monic();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.exact_div(&a0).expect("gcd divides");
        let mut c = dp.exact_div(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            out.push(a);
        }
        out
    }

    /// Multiplicity of `f` (of positive degree) as a factor.
    pub fn multiplicity_of(&self, f: &UPoly) -> u32 {
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            match p.div_rem(f) {
                Ok((q, r)) if r.is_zero() => {
                    p = q;
                    m += 1;
                }
                _ => break,
            }
        }
        m
    }

    /// All complex roots by simultaneous (Durand–Kerner) iteration, then a
    /// few Newton steps on each root.
    pub fn float_roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(n) if n > 0 => n,
            _ => return Vec::new(),
        };
        let lead = self.leading().expect("nonzero").to_complex();
        let c: Vec<Complex64> = self.0.iter().map(|x| x.to_complex() / lead).collect();
        let eval = |x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ci| acc * x + ci);
        let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * bound).collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= z[i] - z[j];
                    }
                }
                let step = eval(z[i]) / denom;
                if step.is_finite() {
                    z[i] -= step;
                    delta = delta.max(step.norm());
                }
            }
            if delta < 1e-15 {
                break;
            }
        }
        let dc: Vec<Complex64> = (1..=n).map(|i| c[i] * i as f64).collect();
        for zi in &mut z {
            for _ in 0..3 {
                let dv = dc.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * *zi + x);
                let step = eval(*zi) / dv;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
        z
    }

    /// Scales to coprime Gaussian-integer coefficients (as Gaussian rationals).
    pub fn integral(&self) -> UPoly {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::from(1);
        for c in &self.0 {
            l = l.lcm(c.re.denom()).lcm(c.im.denom());
        }
        self.scale(&GaussianRational::real(Rational::int(l)))
    }
}

/// Prints in the variable `x`, highest power first.
impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.im.is_zero() && c.re.is_negative();
            let mag = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match i {
                0 => alloc::string::String::new(),
                1 => "x".into(),
                _ => alloc::format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag} {var}")?;
            }
        }
        Ok(())
    }
}
