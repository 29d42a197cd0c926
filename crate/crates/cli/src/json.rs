//! JSON file formats. Exact numbers are strings (`"p/q"` or `"p"`), Gaussian
//! rationals are `[re, im]` pairs, and every float field is named `*_float`.
//!
//! Field order is fixed by the struct declarations and term order by the
//! canonical monomial order, so equal values always serialize to equal bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use polyfock_core::kernel::KernelFunc;
use polyfock_core::ops::LadderMonomial;
use polyfock_core::spectral::{EigenColumns, EigenEntry, Eigenvalue};
use polyfock_core::{
    ExactMatrix, ExpPoly, ExpScalar, GaussianRational, MultiMonomial, NormalForm, Rational, SpectrumReport,
    TrueLevelDecomposition, UPoly,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError(e.to_string())
    }
}

impl From<polyfock_core::Error> for FormatError {
    fn from(e: polyfock_core::Error) -> Self {
        FormatError(e.to_string())
    }
}

type Res<T> = Result<T, FormatError>;

pub type GrJson = [String; 2];

pub fn rational_to_json(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_from_json(s: &str) -> Res<Rational> {
    let digits = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    let ok = match s.split_once('/') {
        Some((n, d)) => digits(n) && !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()),
        None => digits(s),
    };
    if !ok {
        return Err(FormatError(format!("malformed rational '{s}'")));
    }
    s.parse().map_err(|e: polyfock_core::Error| FormatError(format!("'{s}': {e}")))
}

pub fn gr_to_json(c: &GaussianRational) -> GrJson {
    [rational_to_json(&c.re), rational_to_json(&c.im)]
}

pub fn gr_from_json(c: &GrJson) -> Res<GaussianRational> {
    Ok(GaussianRational::new(rational_from_json(&c[0])?, rational_from_json(&c[1])?))
}

fn grs_from_json(v: &[GrJson]) -> Res<Vec<GaussianRational>> {
    v.iter().map(gr_from_json).collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpScalarJson {
    pub coeff: GrJson,
    pub exp: GrJson,
}

impl ExpScalarJson {
    pub fn from_value(x: &ExpScalar) -> Self {
        ExpScalarJson { coeff: gr_to_json(x.coeff()), exp: gr_to_json(x.exponent()) }
    }

    pub fn to_value(&self) -> Res<ExpScalar> {
        Ok(ExpScalar::new(gr_from_json(&self.coeff)?, gr_from_json(&self.exp)?))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    pub z: Vec<u32>,
    pub zb: Vec<u32>,
    pub c: GrJson,
}

/// A function `prefactor * sum c z^z zbar^zb * exp(exp_u . z + exp_v . zbar)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpPolyJson {
    pub dims: usize,
    pub prefactor: ExpScalarJson,
    pub exp_u: Vec<GrJson>,
    pub exp_v: Vec<GrJson>,
    pub terms: Vec<PolyTermJson>,
}

impl ExpPolyJson {
    pub fn from_value(f: &ExpPoly) -> Self {
        ExpPolyJson {
            dims: f.dims(),
            prefactor: ExpScalarJson::from_value(&f.prefactor()),
            exp_u: f.u().iter().map(gr_to_json).collect(),
            exp_v: f.v().iter().map(gr_to_json).collect(),
            terms: f.terms().map(|(m, c)| PolyTermJson { z: m.z.clone(), zb: m.zb.clone(), c: gr_to_json(c) }).collect(),
        }
    }

    pub fn to_value(&self) -> Res<ExpPoly> {
        let d = self.dims;
        if self.exp_u.len() != d || self.exp_v.len() != d {
            return Err(FormatError(format!("exp_u and exp_v need {d} entries")));
        }
        let mut terms = BTreeMap::new();
        for t in &self.terms {
            if t.z.len() != d || t.zb.len() != d {
                return Err(FormatError(format!("term exponents need {d} entries")));
            }
            let m = MultiMonomial::new(t.z.clone(), t.zb.clone());
            if terms.insert(m, gr_from_json(&t.c)?).is_some() {
                return Err(FormatError(format!("duplicate monomial z^{:?} zb^{:?}", t.z, t.zb)));
            }
        }
        Ok(ExpPoly::from_parts(
            d,
            self.prefactor.to_value()?,
            terms,
            grs_from_json(&self.exp_u)?,
            grs_from_json(&self.exp_v)?,
        )?)
    }
}

pub fn exp_poly_to_string(f: &ExpPoly) -> String {
    to_json(&ExpPolyJson::from_value(f))
}

pub fn exp_poly_from_str(s: &str) -> Res<ExpPoly> {
    serde_json::from_str::<ExpPolyJson>(s)?.to_value()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpTermJson {
    pub adag: Vec<u32>,
    pub a: Vec<u32>,
    pub c: GrJson,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormJson {
    pub dims: usize,
    pub terms: Vec<OpTermJson>,
}

impl NormalFormJson {
    pub fn from_value(x: &NormalForm) -> Self {
        NormalFormJson {
            dims: x.dims(),
            terms: x
                .terms()
                .map(|(m, c)| OpTermJson { adag: m.adag.clone(), a: m.a.clone(), c: gr_to_json(c) })
                .collect(),
        }
    }

    pub fn to_value(&self) -> Res<NormalForm> {
        let mut seen = BTreeSet::new();
        let mut terms = Vec::new();
        for t in &self.terms {
            let m = LadderMonomial { adag: t.adag.clone(), a: t.a.clone() };
            if !seen.insert(m.clone()) {
                return Err(FormatError(format!("duplicate monomial adag^{:?} a^{:?}", t.adag, t.a)));
            }
            terms.push((m, gr_from_json(&t.c)?));
        }
        Ok(NormalForm::from_terms(self.dims, terms)?)
    }
}

pub fn normal_form_to_string(x: &NormalForm) -> String {
    to_json(&NormalFormJson::from_value(x))
}

pub fn normal_form_from_str(s: &str) -> Res<NormalForm> {
    serde_json::from_str::<NormalFormJson>(s)?.to_value()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticJson {
    pub b: GrJson,
    pub c: GrJson,
    pub sign: i8,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenJson {
    pub provenance: String,
    pub value: Option<GrJson>,
    pub quadratic: Option<QuadraticJson>,
    pub value_float: [f64; 2],
    pub residual_float: Option<f64>,
    pub algebraic: u32,
    pub geometric: u32,
    pub generalized: u32,
    pub columns: Option<Vec<Vec<GrJson>>>,
    pub columns_float: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumJson {
    pub k: u32,
    /// Coefficients from the constant term up.
    pub char_poly: Vec<GrJson>,
    pub char_poly_text: String,
    pub diagonalizable: bool,
    pub eigenvalues: Vec<EigenJson>,
}

fn c_to_json(c: &Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn c_from_json(c: &[f64; 2]) -> Complex64 {
    Complex64::new(c[0], c[1])
}

impl EigenJson {
    fn from_value(e: &EigenEntry) -> Self {
        let (value, quadratic, residual_float) = match &e.value {
            Eigenvalue::Exact(x) => (Some(gr_to_json(x)), None, None),
            Eigenvalue::Quadratic { b, c, sign, .. } => {
                (None, Some(QuadraticJson { b: gr_to_json(b), c: gr_to_json(c), sign: *sign }), None)
            }
            Eigenvalue::Float { residual, .. } => (None, None, Some(*residual)),
        };
        let (columns, columns_float) = match &e.columns {
            EigenColumns::Exact(cols) => (Some(cols.iter().map(|c| c.iter().map(gr_to_json).collect()).collect()), None),
            EigenColumns::Float(cols) => (None, Some(cols.iter().map(|c| c.iter().map(c_to_json).collect()).collect())),
        };
        EigenJson {
            provenance: e.value.provenance().into(),
            value,
            quadratic,
            value_float: c_to_json(&e.value.approx()),
            residual_float,
            algebraic: e.algebraic,
            geometric: e.geometric,
            generalized: e.generalized,
            columns,
            columns_float,
        }
    }

    fn to_value(&self) -> Res<EigenEntry> {
        let approx = c_from_json(&self.value_float);
        let value = match (self.provenance.as_str(), &self.value, &self.quadratic, self.residual_float) {
            ("exact", Some(x), None, None) => Eigenvalue::Exact(gr_from_json(x)?),
            ("quadratic-closed-form", None, Some(q), None) => {
                if q.sign != 1 && q.sign != -1 {
                    return Err(FormatError("quadratic sign must be 1 or -1".into()));
                }
                Eigenvalue::Quadratic { b: gr_from_json(&q.b)?, c: gr_from_json(&q.c)?, sign: q.sign, approx }
            }
            ("float", None, None, Some(residual)) => Eigenvalue::Float { approx, residual },
            (p, ..) => return Err(FormatError(format!("eigenvalue fields do not match provenance '{p}'"))),
        };
        let columns = match (&self.columns, &self.columns_float) {
            (Some(cols), None) => EigenColumns::Exact(cols.iter().map(|c| grs_from_json(c)).collect::<Res<_>>()?),
            (None, Some(cols)) => EigenColumns::Float(cols.iter().map(|c| c.iter().map(c_from_json).collect()).collect()),
            _ => return Err(FormatError("exactly one of columns and columns_float is required".into())),
        };
        Ok(EigenEntry {
            value,
            algebraic: self.algebraic,
            geometric: self.geometric,
            generalized: self.generalized,
            columns,
        })
    }
}

impl SpectrumJson {
    pub fn from_value(r: &SpectrumReport) -> Self {
        SpectrumJson {
            k: r.k,
            char_poly: r.char_poly.coeffs().iter().map(gr_to_json).collect(),
            char_poly_text: r.char_poly.to_string(),
            diagonalizable: r.is_diagonalizable(),
            eigenvalues: r.eigenvalues.iter().map(EigenJson::from_value).collect(),
        }
    }

    pub fn to_value(&self) -> Res<SpectrumReport> {
        let char_poly = UPoly::new(grs_from_json(&self.char_poly)?);
        if char_poly.to_string() != self.char_poly_text {
            return Err(FormatError("char_poly_text does not match char_poly".into()));
        }
        Ok(SpectrumReport {
            k: self.k,
            char_poly,
            eigenvalues: self.eigenvalues.iter().map(EigenJson::to_value).collect::<Res<_>>()?,
        })
    }
}

pub fn spectrum_to_string(r: &SpectrumReport) -> String {
    to_json(&SpectrumJson::from_value(r))
}

pub fn spectrum_from_str(s: &str) -> Res<SpectrumReport> {
    serde_json::from_str::<SpectrumJson>(s)?.to_value()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelJson {
    pub index: Vec<u32>,
    pub component: ExpPolyJson,
    pub normsq: ExpScalarJson,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionJson {
    pub levels: Vec<LevelJson>,
    pub residual: ExpPolyJson,
}

impl DecompositionJson {
    pub fn new(f: &ExpPoly, dec: &TrueLevelDecomposition) -> Res<Self> {
        let residual = f.try_sub(&dec.sum()?)?;
        Ok(DecompositionJson {
            levels: dec
                .components
                .iter()
                .map(|(idx, h)| LevelJson {
                    index: idx.0.clone(),
                    component: ExpPolyJson::from_value(h),
                    normsq: ExpScalarJson::from_value(&h.norm_sq()),
                })
                .collect(),
            residual: ExpPolyJson::from_value(&residual),
        })
    }
}

/// One kernel term, keyed by the variable tags.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KernelTermJson {
    #[serde(rename = "ζ")]
    pub zeta: u32,
    #[serde(rename = "ζ̄")]
    pub zeta_bar: u32,
    pub z: u32,
    #[serde(rename = "z̄")]
    pub z_bar: u32,
    pub c: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactoredJson {
    pub lambda: String,
    /// Coefficients of the factor polynomial in `lambda`, constant term first.
    pub p: Vec<String>,
    pub certified: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KernelJson {
    pub level: u32,
    pub variables: [String; 4],
    pub exponential: String,
    pub terms: Vec<KernelTermJson>,
    pub factored: FactoredJson,
    /// Informational comparison with `L_{k-1}(-lambda)`.
    pub matches_laguerre: bool,
}

impl KernelJson {
    pub fn new(q: &KernelFunc, factor: &[Rational], matches_laguerre: bool) -> Self {
        KernelJson {
            level: q.level(),
            variables: ["ζ", "ζ̄", "z", "z̄"].map(String::from),
            exponential: "ζ z̄".into(),
            terms: q
                .terms()
                .iter()
                .map(|(e, c)| KernelTermJson { zeta: e[0], zeta_bar: e[1], z: e[2], z_bar: e[3], c: rational_to_json(c) })
                .collect(),
            factored: FactoredJson {
                lambda: "(z - ζ)(ζ̄ - z̄)".into(),
                p: factor.iter().map(rational_to_json).collect(),
                certified: true,
            },
            matches_laguerre,
        }
    }
}

/// Rows of Rational strings; fails on a non-real entry.
pub fn real_matrix_to_json(m: &ExactMatrix) -> Res<Vec<Vec<String>>> {
    m.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    if c.is_real() {
                        Ok(rational_to_json(&c.re))
                    } else {
                        Err(FormatError(format!("matrix entry {c} is not real")))
                    }
                })
                .collect()
        })
        .collect()
}

pub fn real_matrix_from_json(rows: &[Vec<String>]) -> Res<ExactMatrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| rational_from_json(s).map(GaussianRational::real)).collect())
        .collect::<Res<_>>()?;
    Ok(ExactMatrix::from_rows(rows)?)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UnitJson {
    pub m: u32,
    pub n: u32,
    pub expr: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PaperFloatJson {
    pub plus: Vec<Vec<f64>>,
    pub zero: Vec<Vec<f64>>,
    pub minus: Vec<Vec<f64>>,
    pub similarity_error: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MatricesJson {
    pub k: u32,
    pub plus: Vec<Vec<String>>,
    pub zero: Vec<Vec<String>>,
    pub minus: Vec<Vec<String>>,
    pub units: Vec<UnitJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub paper_float: Option<PaperFloatJson>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
