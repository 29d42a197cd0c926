//! Operator expressions: tokenizer, recursive-descent parser, canonical
//! printer and elaboration into normal forms.
//!
//! ```text
//! expr   := sign? term (("+" | "-") sign? term)*
//! term   := scalar? factor+
//! factor := (atom | "(" expr ")") ("^" uint)?
//! atom   := "a" | "ad" | "Jp" | "J0" | "Jm" | "I"     ("a2", "ad1", ... index a coordinate)
//! scalar := rational "i"? | "(" "-"? rational "," "-"? rational ")"
//! ```

use std::fmt;

use polyfock_core::ops::sl2_generators;
use polyfock_core::{GaussianRational, NormalForm, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) | Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        if c == '\n' {
            chars.next();
            pos.line += 1;
            pos.column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            pos.column += 1;
            continue;
        }
        if c.is_ascii_digit() || c.is_ascii_alphabetic() {
            let mut word = String::new();
            let digits = c.is_ascii_digit();
            while let Some(&d) = chars.peek() {
                let take = if digits { d.is_ascii_digit() } else { d.is_ascii_alphanumeric() };
                if !take {
                    break;
                }
                word.push(d);
                chars.next();
                pos.column += 1;
            }
            out.push((if digits { Tok::Num(word) } else { Tok::Ident(word) }, here));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(here.error(format!("unexpected character '{c}'"))),
        };
        chars.next();
        pos.column += 1;
        out.push((tok, here));
    }
    out.push((Tok::End, pos));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AtomKind {
    Lower,
    Raise,
    Plus,
    Zero,
    Minus,
    Identity,
}

/// An atom; ladder atoms may carry a one-based coordinate index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub kind: AtomKind,
    pub index: Option<u32>,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Base {
    Atom(Atom),
    Group(Sum),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factor {
    pub base: Base,
    pub power: u32,
}

/// A signed, optionally scaled product of factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub negative: bool,
    pub scalar: Option<GaussianRational>,
    pub factors: Vec<Factor>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sum {
    pub terms: Vec<Term>,
}

fn atom_from_ident(word: &str, pos: Pos) -> Result<Atom, ParseError> {
    let fixed = match word {
        "Jp" => Some(AtomKind::Plus),
        "J0" => Some(AtomKind::Zero),
        "Jm" => Some(AtomKind::Minus),
        "I" => Some(AtomKind::Identity),
        _ => None,
    };
    if let Some(kind) = fixed {
        return Ok(Atom { kind, index: None, pos });
    }
    let (kind, rest) = if let Some(rest) = word.strip_prefix("ad") {
        (AtomKind::Raise, rest)
    } else if let Some(rest) = word.strip_prefix('a') {
        (AtomKind::Lower, rest)
    } else {
        return Err(pos.error(format!("unknown atom '{word}'")));
    };
    if rest.is_empty() {
        return Ok(Atom { kind, index: None, pos });
    }
    match rest.parse::<u32>() {
        Ok(i) if i >= 1 && !rest.starts_with('0') => Ok(Atom { kind, index: Some(i), pos }),
        _ => Err(pos.error(format!("unknown atom '{word}'"))),
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.at + n).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.pos().error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn starts_term(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn sum(&mut self) -> Result<Sum, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if matches!(self.peek(), Tok::Plus | Tok::Minus) {
            let (op, pos) = self.bump();
            negative = op == Tok::Minus;
            if !self.starts_term() {
                return Err(pos.error(format!("expected a term after {}", op.describe())));
            }
        }
        loop {
            terms.push(self.term(negative)?);
            if !matches!(self.peek(), Tok::Plus | Tok::Minus) {
                break;
            }
            let (op, pos) = self.bump();
            negative = op == Tok::Minus;
            if *self.peek() == Tok::Minus {
                self.bump();
                negative = !negative;
            }
            if !self.starts_term() {
                return Err(pos.error(format!("expected a term after {}", op.describe())));
            }
        }
        Ok(Sum { terms })
    }

    fn uint(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let pos = self.pos();
        let n = self.uint()?;
        let text = if *self.peek() == Tok::Slash {
            self.bump();
            format!("{n}/{}", self.uint()?)
        } else {
            n
        };
        text.parse().map_err(|_| pos.error(format!("invalid rational '{text}'")))
    }

    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.rational()?);
        }
        self.rational()
    }

    /// `(` opening a complex scalar rather than a group.
    fn at_pair(&self) -> bool {
        if *self.peek() != Tok::LParen {
            return false;
        }
        let mut n = 1;
        if *self.peek_at(n) == Tok::Minus {
            n += 1;
        }
        if !matches!(self.peek_at(n), Tok::Num(_)) {
            return false;
        }
        n += 1;
        if *self.peek_at(n) == Tok::Slash {
            n += 2;
        }
        *self.peek_at(n) == Tok::Comma
    }

    fn scalar(&mut self) -> Result<Option<GaussianRational>, ParseError> {
        if self.at_pair() {
            self.bump();
            let re = self.signed_rational()?;
            self.expect(Tok::Comma, "','")?;
            let im = self.signed_rational()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Some(GaussianRational::new(re, im)));
        }
        if !matches!(self.peek(), Tok::Num(_)) {
            return Ok(None);
        }
        let r = self.rational()?;
        if *self.peek() == Tok::Ident("i".into()) {
            self.bump();
            return Ok(Some(GaussianRational::new(Rational::zero(), r)));
        }
        Ok(Some(GaussianRational::real(r)))
    }

    fn term(&mut self, negative: bool) -> Result<Term, ParseError> {
        let scalar = self.scalar()?;
        let mut factors = Vec::new();
        while matches!(self.peek(), Tok::Ident(_) | Tok::LParen) {
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            return Err(self.unexpected("an operator atom"));
        }
        Ok(Term { negative, scalar, factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let base = match self.bump() {
            (Tok::Ident(word), pos) => Base::Atom(atom_from_ident(&word, pos)?),
            (Tok::LParen, _) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Base::Group(inner)
            }
            _ => unreachable!("factor starts with an identifier or '('"),
        };
        let mut power = 1;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            let digits = self.uint()?;
            power = digits.parse().map_err(|_| pos.error(format!("exponent '{digits}' is too large")))?;
        }
        Ok(Factor { base, power })
    }
}

pub fn parse(src: &str) -> Result<Sum, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    if *p.peek() == Tok::End {
        return Err(p.unexpected("an expression"));
    }
    let sum = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("'+', '-' or end of input"));
    }
    Ok(sum)
}

/// Moves a leading minus from the scalar onto the term sign.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    let negative = if c.im.is_zero() { c.re.is_negative() } else { c.re.is_zero() && c.im.is_negative() };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            AtomKind::Lower => "a",
            AtomKind::Raise => "ad",
            AtomKind::Plus => "Jp",
            AtomKind::Zero => "J0",
            AtomKind::Minus => "Jm",
            AtomKind::Identity => "I",
        };
        write!(f, "{name}")?;
        if let Some(i) = self.index {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Base::Atom(a) => write!(f, "{a}")?,
            Base::Group(s) => write!(f, "({s})")?,
        }
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

/// Canonical form: one space between tokens of a product, signs pulled out
/// of scalars, unit scalars and unit exponents dropped.
impl fmt::Display for Sum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in self.terms.iter().enumerate() {
            let (flip, mag) = match &t.scalar {
                Some(c) => split_sign(c),
                None => (false, GaussianRational::one()),
            };
            let negative = t.negative != flip;
            match (n == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            let factors: Vec<String> = t.factors.iter().map(Factor::to_string).collect();
            write!(f, "{}", factors.join(" "))?;
        }
        Ok(())
    }
}

/// Canonical rendering of `src`.
pub fn canonical(src: &str) -> Result<String, ParseError> {
    Ok(parse(src)?.to_string())
}

impl Sum {
    /// The largest coordinate index used, at least one.
    pub fn dims(&self) -> usize {
        let mut d = 1;
        self.visit_atoms(&mut |a| d = d.max(a.index.unwrap_or(1) as usize));
        d
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        for t in &self.terms {
            for fac in &t.factors {
                match &fac.base {
                    Base::Atom(a) => f(a),
                    Base::Group(s) => s.visit_atoms(f),
                }
            }
        }
    }

    /// Elaborates into a normal form on [`Sum::dims`] coordinates; `k` is
    /// the mark used by `Jp`, `J0` and `Jm`.
    pub fn elaborate(&self, k: Option<&Rational>) -> Result<NormalForm, ParseError> {
        self.elaborate_in(self.dims(), k)
    }

    pub fn elaborate_in(&self, dims: usize, k: Option<&Rational>) -> Result<NormalForm, ParseError> {
        let mut acc = NormalForm::zero(dims);
        for t in &self.terms {
            let mut prod = NormalForm::identity(dims);
            for fac in &t.factors {
                let base = match &fac.base {
                    Base::Atom(a) => atom_operator(a, dims, k)?,
                    Base::Group(s) => s.elaborate_in(dims, k)?,
                };
                prod = prod * base.pow(fac.power);
            }
            let mut c = t.scalar.clone().unwrap_or_else(GaussianRational::one);
            if t.negative {
                c = -c;
            }
            acc = acc + prod.scale(&c);
        }
        Ok(acc)
    }
}

fn atom_operator(a: &Atom, dims: usize, k: Option<&Rational>) -> Result<NormalForm, ParseError> {
    let coord = a.index.unwrap_or(1) as usize - 1;
    if coord >= dims {
        return Err(a.pos.error(format!("atom '{a}' is outside {dims} coordinates")));
    }
    let generators = || {
        if dims != 1 {
            return Err(a.pos.error(format!("atom '{a}' needs a one-dimensional expression")));
        }
        k.map(sl2_generators).ok_or_else(|| a.pos.error(format!("atom '{a}' needs a value for k")))
    };
    Ok(match a.kind {
        AtomKind::Lower => NormalForm::lowering(dims, coord),
        AtomKind::Raise => NormalForm::raising(dims, coord),
        AtomKind::Identity => NormalForm::identity(dims),
        AtomKind::Plus => generators()?.plus,
        AtomKind::Zero => generators()?.zero,
        AtomKind::Minus => generators()?.minus,
    })
}

/// Parses and elaborates in one step.
pub fn parse_operator(src: &str, k: Option<&Rational>) -> Result<NormalForm, ParseError> {
    parse(src)?.elaborate(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> ParseError {
        parse_operator(src, Some(&Rational::int(2))).unwrap_err()
    }

    #[test]
    fn dangling_plus_points_at_the_operator() {
        let e = err("ad +");
        assert_eq!((e.line, e.column), (1, 4));
    }

    #[test]
    fn positions_track_lines() {
        let e = err("ad a +\n  b");
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown atom 'b'"));
    }

    #[test]
    fn missing_k_is_reported() {
        let e = parse_operator("J0 + a", None).unwrap_err();
        assert_eq!(e.column, 1);
        assert!(e.message.contains("k"));
    }

    #[test]
    fn number_operator() {
        assert_eq!(parse_operator("ad a", None).unwrap(), NormalForm::number(1));
    }

    #[test]
    fn pair_scalar_and_group_are_told_apart() {
        let a = parse_operator("(1/2, -3) a", None).unwrap();
        let expect = NormalForm::lowering(1, 0).scale(&GaussianRational::new(Rational::frac(1, 2), Rational::int(-3)));
        assert_eq!(a, expect);
        let g = parse_operator("(2 a + ad)^2", None).unwrap();
        let base = NormalForm::lowering(1, 0).scale(&GaussianRational::int(2)) + NormalForm::raising(1, 0);
        assert_eq!(g, base.pow(2));
    }

    #[test]
    fn canonical_form_moves_signs() {
        assert_eq!(canonical("a + -3 i ad").unwrap(), "a - 3 i ad");
        assert_eq!(canonical("  -  (-1,0)  a^1").unwrap(), "a");
        assert_eq!(canonical("1 ad2 a1").unwrap(), "ad2 a1");
    }
}
