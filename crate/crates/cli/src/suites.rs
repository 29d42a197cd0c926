//! Seeded verification suites. Each suite expands into independent checks
//! that run on a worker pool; results are merged in check-id order.

use std::collections::VecDeque;
use std::sync::Mutex;
use std::thread;

use polyfock_core::decomp::{
    compositions, fock_to_poly, homogeneous_alt_membership, homogeneous_component_count, homogeneous_membership,
    lift, lower, membership_level, multi_true_decompose, poly_to_fock, quasi_membership, true_decompose,
    zbar_coefficients,
};
use polyfock_core::kernel::{kernel_factor_check, matches_laguerre, project_true, true_kernel, Method};
use polyfock_core::matrix::{float_similarity_error, intertwine_check, matrix_units, model_matrices, rank};
use polyfock_core::ops::{
    euler_cartan, normal_order, sl2_generators, sld_generators, LadderMonomial, Letter, OperatorWord,
};
use polyfock_core::spectral::{
    eigenfunction_certificate, landau_hamiltonian, modified_landau, restrict_to_fk, shifted_ladder_eigenfunction,
    spectrum, EigenColumns,
};
use polyfock_core::{Error, ExactMatrix, ExpPoly, GaussianRational, MultiMonomial, NormalForm, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const SUITES: [&str; 8] =
    ["commutators", "factorization", "decomposition", "kernels", "matrices", "spectra", "multidim", "symmetry"];

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, Default)]
pub struct Params {
    pub k: Option<u32>,
    pub d: Option<u32>,
    pub max_degree: Option<u32>,
    pub seed: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Informational comparisons; they never affect `passed`.
    pub notes: Vec<Check>,
    /// Internal invariant breaches, by check id.
    pub breaches: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SuiteError {
    Unknown(String),
}

impl std::fmt::Display for SuiteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteError::Unknown(name) => {
                write!(f, "unknown suite '{name}' (expected one of {} or all)", SUITES.join(", "))
            }
        }
    }
}

impl std::error::Error for SuiteError {}

/// Why a check did not pass: a failed comparison or an error from the core.
enum Fail {
    Check(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type Outcome = Result<(), Fail>;
type Body = Box<dyn FnOnce() -> Outcome + Send>;

struct Job {
    id: String,
    anchor: &'static str,
    informational: bool,
    run: Body,
}

struct Jobs {
    suite: &'static str,
    jobs: Vec<Job>,
}

impl Jobs {
    fn new(suite: &'static str) -> Self {
        Jobs { suite, jobs: Vec::new() }
    }

    fn add(&mut self, id: String, anchor: &'static str, f: impl FnOnce() -> Outcome + Send + 'static) {
        self.jobs.push(Job { id: format!("{}/{id}", self.suite), anchor, informational: false, run: Box::new(f) });
    }

    fn note(&mut self, id: String, anchor: &'static str, f: impl FnOnce() -> Outcome + Send + 'static) {
        self.jobs.push(Job { id: format!("{}/{id}", self.suite), anchor, informational: true, run: Box::new(f) });
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Fail::Check(detail()))
    }
}

/// Runs a named suite, or every suite for `"all"`.
pub fn run(name: &str, params: &Params) -> Result<Report, SuiteError> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(SuiteError::Unknown(n.into())),
    };
    let mut jobs = Vec::new();
    for n in names {
        jobs.extend(build(n, params).jobs);
    }
    let mut results = execute(jobs);
    results.sort_by(|a, b| a.1.id.cmp(&b.1.id));
    let mut report = Report {
        suite: name.into(),
        seed: params.seed,
        passed: true,
        checks: Vec::new(),
        notes: Vec::new(),
        breaches: Vec::new(),
    };
    for (informational, check, breach) in results {
        if breach {
            report.breaches.push(check.id.clone());
        }
        if informational {
            report.notes.push(check);
        } else {
            report.passed &= check.passed;
            report.checks.push(check);
        }
    }
    Ok(report)
}

fn execute(jobs: Vec<Job>) -> Vec<(bool, Check, bool)> {
    let queue = Mutex::new(jobs.into_iter().collect::<VecDeque<_>>());
    let results = Mutex::new(Vec::new());
    let workers = thread::available_parallelism().map_or(4, |n| n.get());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let Some(job) = queue.lock().expect("queue lock").pop_front() else {
                    break;
                };
                let (passed, detail, breach) = match (job.run)() {
                    Ok(()) => (true, String::new(), false),
                    Err(Fail::Check(d)) => (false, d, false),
                    Err(Fail::Core(e @ Error::InvariantBreach(_))) => (false, e.to_string(), true),
                    Err(Fail::Core(e)) => (false, e.to_string(), false),
                };
                let check = Check { id: job.id, anchor: job.anchor.into(), passed, detail };
                results.lock().expect("results lock").push((job.informational, check, breach));
            });
        }
    });
    results.into_inner().expect("results lock")
}

fn build(name: &str, p: &Params) -> Jobs {
    // one stream per suite, so a suite samples the same inputs alone or within "all"
    let offset = SUITES.iter().position(|&s| s == name).expect("known suite") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(offset));
    match name {
        "commutators" => commutators(p),
        "factorization" => factorization(p),
        "decomposition" => decomposition(p, &mut rng),
        "kernels" => kernels(p, &mut rng),
        "matrices" => matrices(p),
        "spectra" => spectra(p),
        "multidim" => multidim(p, &mut rng),
        "symmetry" => symmetry(p, &mut rng),
        _ => unreachable!("suite names are checked by run"),
    }
}

fn rat(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.random_range(-5..=5), rng.random_range(1..=3))
}

fn gr(rng: &mut ChaCha8Rng) -> GaussianRational {
    if rng.random_bool(0.5) {
        GaussianRational::real(rat(rng))
    } else {
        GaussianRational::new(rat(rng), rat(rng))
    }
}

fn small_gr(rng: &mut ChaCha8Rng) -> GaussianRational {
    let d = rng.random_range(1..=2);
    GaussianRational::new(Rational::frac(rng.random_range(-2..=2), d), Rational::frac(rng.random_range(-2..=2), d))
}

/// Splits `total` into `parts` random non-negative pieces.
fn split(rng: &mut ChaCha8Rng, total: u32, parts: usize) -> Vec<u32> {
    let mut out = vec![0; parts];
    for _ in 0..total {
        out[rng.random_range(0..parts)] += 1;
    }
    out
}

/// Up to `max_terms` monomials in `d` variables, total degree at most
/// `max_deg` and zbar degree at most `max_zbar`.
fn poly(rng: &mut ChaCha8Rng, d: usize, max_deg: u32, max_zbar: u32, max_terms: usize) -> ExpPoly {
    let n = rng.random_range(1..=max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let zb_total = rng.random_range(0..=max_zbar.min(max_deg));
            let z_total = rng.random_range(0..=max_deg - zb_total);
            (MultiMonomial::new(split(rng, z_total, d), split(rng, zb_total, d)), gr(rng))
        })
        .collect();
    ExpPoly::from_terms(d, terms).expect("matching dimensions")
}

fn analytic(rng: &mut ChaCha8Rng, max_deg: u32) -> ExpPoly {
    poly(rng, 1, max_deg, 0, 4)
}

fn unitary2(rng: &mut ChaCha8Rng) -> Vec<Vec<GaussianRational>> {
    let phases = [
        GaussianRational::one(),
        GaussianRational::i(),
        GaussianRational::new(Rational::frac(3, 5), Rational::frac(4, 5)),
        GaussianRational::new(Rational::frac(5, 13), Rational::frac(-12, 13)),
    ];
    let rots = [(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17)];
    let (c, s, h) = rots[rng.random_range(0..rots.len())];
    let p = phases[rng.random_range(0..phases.len())].clone();
    let q = phases[rng.random_range(0..phases.len())].clone();
    let c = GaussianRational::frac(c, h);
    let s = GaussianRational::frac(s, h);
    // [[p c, -p s], [q s, q c]] with |p| = |q| = 1
    vec![vec![&p * &c, -(&p * &s)], vec![&q * &s, &q * &c]]
}

fn marks(max: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max).map(Rational::int).collect();
    out.push(Rational::frac(1, 2));
    out.push(Rational::frac(-3, 7));
    out
}

const SL2: &str = "obeying the sl(2)-algebra commutation relations";

fn commutators(p: &Params) -> Jobs {
    let mut jobs = Jobs::new("commutators");
    for k in marks(p.k.unwrap_or(8)) {
        jobs.add(format!("sl2/k={k}"), SL2, move || {
            let j = sl2_generators(&k);
            ensure(j.minus.commutator(&j.plus)? == j.zero.scale(&GaussianRational::int(2)), || "[J-, J+] != 2 J0".into())?;
            ensure(j.plus.commutator(&j.zero)? == -j.plus.clone(), || "[J+, J0] != -J+".into())?;
            ensure(j.minus.commutator(&j.zero)? == j.minus, || "[J-, J0] != J-".into())
        });
    }
    let max_d = p.d.unwrap_or(3) as usize;
    for d in 1..=max_d {
        jobs.add(format!("heisenberg/d={d}"), "[a_i, a_j^dag] = delta_ij I", move || {
            for i in 0..d {
                for j in 0..d {
                    let delta = if i == j { NormalForm::identity(d) } else { NormalForm::zero(d) };
                    let (ai, aj) = (NormalForm::lowering(d, i), NormalForm::lowering(d, j));
                    let (bi, bj) = (NormalForm::raising(d, i), NormalForm::raising(d, j));
                    ensure(ai.commutator(&bj)? == delta, || format!("[a{i}, ad{j}]"))?;
                    ensure(ai.commutator(&aj)?.is_zero() && bi.commutator(&bj)?.is_zero(), || format!("({i}, {j})"))?;
                }
            }
            Ok(())
        });
        for k in [Rational::int(1), Rational::int(3), Rational::frac(1, 2)] {
            jobs.add(format!("sld/d={d}/k={k}"), "closure of the sl(d+1) generators", move || sld_closure(d, &k));
        }
    }
    jobs
}

/// Every bracket of two generators lies in the span of the generators and `I`.
fn sld_closure(d: usize, k: &Rational) -> Outcome {
    let gens = sld_generators(d, k)?;
    let mut span: Vec<NormalForm> = gens.all().into_iter().cloned().collect();
    span.push(NormalForm::identity(d));
    let mut brackets = Vec::new();
    for x in gens.all() {
        for y in gens.all() {
            brackets.push(x.commutator(y)?);
        }
    }
    let mut basis: Vec<LadderMonomial> = Vec::new();
    for x in span.iter().chain(&brackets) {
        for (m, _) in x.terms() {
            if !basis.contains(m) {
                basis.push(m.clone());
            }
        }
    }
    let flat = |x: &NormalForm| basis.iter().map(|m| x.coeff(m)).collect::<Vec<_>>();
    let rows: Vec<_> = span.iter().map(flat).collect();
    let base = rank(rows.clone());
    if base != span.len() {
        return Err(Fail::Check(format!("generators are dependent: rank {base}")));
    }
    for (n, b) in brackets.iter().enumerate() {
        let mut with = rows.clone();
        with.push(flat(b));
        if rank(with) != base {
            return Err(Fail::Check(format!("bracket {n} leaves the span")));
        }
    }
    Ok(())
}

fn factorization(p: &Params) -> Jobs {
    let mut jobs = Jobs::new("factorization");
    for k in 1..=p.k.unwrap_or(8) {
        jobs.add(format!("euler-cartan/k={k}"), "a product of the so-called Euler-Cartan operators", move || {
            let mut letters = vec![Letter::Raising(0); k as usize];
            letters.extend(vec![Letter::Lowering(0); k as usize]);
            let word = normal_order(&OperatorWord::new(1, letters))?;
            let product = (0..k).fold(NormalForm::identity(1), |acc, m| acc * euler_cartan(m));
            ensure(word == product, || format!("{word} != {product}"))
        });
    }
    jobs
}

fn decomposition(p: &Params, rng: &mut ChaCha8Rng) -> Jobs {
    let mut jobs = Jobs::new("decomposition");
    let deg = p.max_degree.unwrap_or(8);
    for n in 0..200 {
        let f = poly(rng, 1, deg, deg, 8);
        let g = f.clone();
        jobs.add(format!("orthogonal-sum/sample-{n:03}"), "Different subspaces $L_n$ and $L_m$ are orthogonal", move || {
            let dec = true_decompose(&f)?;
            ensure(dec.components.len() as u32 == membership_level(&f)?, || "wrong number of levels".into())?;
            ensure(dec.is_orthogonal()?, || "components are not orthogonal".into())?;
            ensure(dec.sum()? == f, || "components do not sum to the input".into())?;
            for (idx, h) in &dec.components {
                let l = idx.0[0];
                ensure(lift(&lower(h, l)?, l)? == *h, || format!("lift(lower) differs at level {l}"))?;
            }
            Ok(())
        });
        jobs.add(format!("fock-round-trip/sample-{n:03}"), "uniquely defined by $k$ functions", move || {
            let phis = zbar_coefficients(&g)?;
            let col = poly_to_fock(&phis)?;
            ensure(fock_to_poly(&col)? == phis, || "fock_to_poly(poly_to_fock) differs".into())?;
            ensure(col.to_function()? == g, || "column does not reassemble the input".into())
        });
    }
    let top = p.k.unwrap_or(6);
    for n in 0..24 {
        let g = analytic(rng, 5);
        jobs.add(format!("isometry/sample-{n:02}"), "is an isometric isomorphism, and the lowering operator", move || {
            let base = g.norm_sq();
            for k in 1..=top {
                let psi = lift(&g, k)?;
                let fact = Rational::factorial(k - 1);
                let lifted = psi.norm_sq();
                ensure(*lifted.coeff() == base.coeff().scale(&fact) && lifted.exponent() == base.exponent(), || {
                    format!("lift norm at k = {k}")
                })?;
                let raised = psi.apply_raising(0)?.norm_sq();
                ensure(*raised.coeff() == lifted.coeff().scale(&Rational::int(k)), || format!("raising norm at level {k}"))?;
            }
            Ok(())
        });
    }
    jobs
}

fn kernels(p: &Params, rng: &mut ChaCha8Rng) -> Jobs {
    let mut jobs = Jobs::new("kernels");
    let top = p.k.unwrap_or(4);
    let deg = p.max_degree.unwrap_or(6);
    for n in 0..48 {
        let f = poly(rng, 1, deg, deg, 6);
        jobs.add(format!("projection/sample-{n:02}"), "each true-$k$-Fock space is a reproducing kernel Hilbert space", move || {
            let mut acc = ExpPoly::zero(1);
            let level = membership_level(&f)?;
            for k in 1..=top.max(level) {
                let by_kernel = project_true(&f, k, Method::Kernel)?;
                if k <= top {
                    ensure(by_kernel == project_true(&f, k, Method::Gram)?, || format!("methods differ at k = {k}"))?;
                }
                acc = acc.try_add(&by_kernel)?;
            }
            ensure(acc == f, || "projections do not sum to the input".into())
        });
    }
    for k in 1..=top + 1 {
        jobs.add(format!("factor/k={k}"), "for certain real coefficient polynomial $p_{k-1}(\\lambda)$", move || {
            let p = kernel_factor_check(k)?;
            ensure(p.len() == k as usize && p[0].is_one(), || "p(0) != 1".into())?;
            ensure(!p[k as usize - 1].is_zero(), || "degree of p is below k - 1".into())
        });
        jobs.add(format!("kernel-level/k={k}"), "where the reproducing kernel $q_z^{\\{k\\}}(\\zeta)$ is given by", move || {
            let q = true_kernel(k)?;
            ensure(q.is_conjugate_symmetric(), || "kernel is not conjugate symmetric".into())?;
            for z0 in [GaussianRational::zero(), GaussianRational::new(Rational::frac(-1, 3), Rational::frac(5, 2))] {
                ensure(membership_level(&q.at(&z0))? == k, || format!("kernel at {z0} has the wrong level"))?;
            }
            Ok(())
        });
        jobs.note(format!("laguerre/k={k}"), "p_{k-1}(lambda) against L_{k-1}(-lambda)", move || {
            ensure(matches_laguerre(k)?, || "differs from L_{k-1}(-lambda)".into())
        });
    }
    jobs
}

fn matrices(p: &Params) -> Jobs {
    let mut jobs = Jobs::new("matrices");
    let top = p.k.unwrap_or(8);
    let deg = p.max_degree.unwrap_or(8);
    for k in 1..=top {
        jobs.add(format!("sl2/k={k}"), SL2, move || {
            let m = model_matrices(k)?;
            ensure(m.minus.commutator(&m.plus) == m.zero.scale(&GaussianRational::int(2)), || "[N-, N+] != 2 N0".into())?;
            ensure(m.plus.commutator(&m.zero) == m.plus.scale(&GaussianRational::int(-1)), || "[N+, N0] != -N+".into())?;
            ensure(m.minus.commutator(&m.zero) == m.minus, || "[N-, N0] != N-".into())
        });
        jobs.add(format!("float-similarity/k={k}"), "the matrices $M^+_k$, $M^0_k$, and $M^-_k$", move || {
            let err = float_similarity_error(k)?;
            ensure(err < 1e-12, || format!("max deviation {err:e}"))
        });
    }
    for k in 1..=top.min(5) {
        jobs.add(format!("units/k={k}"), "realizing matrix-units of (k x k)-matrix", move || {
            let units = matrix_units(k)?;
            ensure(units.len() == (k * k) as usize, || "wrong number of units".into())?;
            for ((m, n), e1) in &units {
                for ((p, q), e2) in &units {
                    let expect = if n == p { units[&(*m, *q)].matrix.clone() } else { ExactMatrix::zero(k as usize) };
                    ensure(e1.matrix.mul(&e2.matrix) == expect, || format!("E{m}{n} E{p}{q}"))?;
                }
            }
            let flat = units.values().map(|u| u.matrix.rows().iter().flatten().cloned().collect()).collect();
            ensure(rank(flat) == (k * k) as usize, || "units do not span".into())?;
            let mark = Rational::int(k);
            for ((m, n), u) in &units {
                let restricted = restrict_to_fk(&u.expr.to_operator(&mark), k)?;
                ensure(restricted.matrix == u.matrix, || format!("expression for E{m}{n} acts differently"))?;
            }
            Ok(())
        });
    }
    for k in 1..=top.min(4) {
        jobs.add(format!("intertwine/k={k}"), "is invariant under the action of the operators $J^+_k$, $J^0_k$ and $J^-_k$", move || {
            let r = intertwine_check(k, deg)?;
            ensure(r.passed(), || r.failures.join("; "))
        });
    }
    jobs
}

fn spectra(p: &Params) -> Jobs {
    let mut jobs = Jobs::new("spectra");
    let top = p.k.unwrap_or(6);
    for k in 1..=top {
        jobs.add(format!("landau/k={k}"), "\\lambda_k = k-1", move || {
            let rm = restrict_to_fk(&landau_hamiltonian(), k)?;
            let rep = spectrum(&rm)?;
            let expect: Vec<_> = (0..k as i64).map(GaussianRational::int).collect();
            ensure(rep.exact_values() == expect, || format!("eigenvalues {:?}", rep.exact_values()))?;
            for (j, e) in rep.eigenvalues.iter().enumerate() {
                let mut unit = vec![GaussianRational::zero(); k as usize];
                unit[j] = GaussianRational::one();
                ensure(e.columns == EigenColumns::Exact(vec![unit.clone()]), || format!("eigenspace {j} is not a pure level"))?;
                let value = e.value.exact().expect("exact eigenvalue");
                ensure(eigenfunction_certificate(&rm, &unit, value, 4)?, || format!("certificate fails at {value}"))?;
            }
            Ok(())
        });
        jobs.add(format!("restriction/k={k}"), "acts invariantly on each $k$-poly-Fock space", move || {
            let j = sl2_generators(&Rational::int(k));
            let m = model_matrices(k)?;
            ensure(restrict_to_fk(&j.plus, k)?.matrix == m.plus, || "J+".into())?;
            ensure(restrict_to_fk(&j.zero, k)?.matrix == m.zero, || "J0".into())?;
            ensure(restrict_to_fk(&j.minus, k)?.matrix == m.minus, || "J-".into())?;
            let gate = restrict_to_fk(&NormalForm::raising(1, 0), k);
            ensure(gate == Err(Error::NotInvariant(k)), || "bare raising operator was accepted".into())
        });
    }
    jobs.add("modified-landau/alpha=1/2,beta=3/8".into(), "the second order operator $\\widetilde{\\Delta_2}$", || {
        let (alpha, beta) = (GaussianRational::frac(1, 2), GaussianRational::frac(3, 8));
        let rm = restrict_to_fk(&modified_landau(&alpha, &beta), 2)?;
        let rep = spectrum(&rm)?;
        let expect_poly = vec![GaussianRational::frac(3, 16), GaussianRational::int(-1), GaussianRational::one()];
        ensure(rep.char_poly.coeffs() == expect_poly.as_slice(), || format!("char poly {}", rep.char_poly))?;
        ensure(rep.exact_values() == vec![GaussianRational::frac(1, 4), GaussianRational::frac(3, 4)], || {
            format!("eigenvalues {:?}", rep.exact_values())
        })?;
        let disc = (1.0 - 4.0 * (&alpha * &beta).re.to_f64()).sqrt();
        for (e, closed) in rep.eigenvalues.iter().zip([(1.0 - disc) / 2.0, (1.0 + disc) / 2.0]) {
            ensure((e.value.approx().re - closed).abs() < 1e-12, || format!("closed form {closed}"))?;
            let (EigenColumns::Exact(cols), Some(x)) = (&e.columns, e.value.exact()) else {
                return Err(Fail::Check("eigenvalue is not exact".into()));
            };
            for c in cols {
                ensure(eigenfunction_certificate(&rm, c, x, 4)?, || format!("certificate fails at {x}"))?;
            }
        }
        Ok(())
    });
    jobs.add("degenerate-locus/alpha=1,beta=1/4".into(), "double root reported with its Jordan structure", || {
        let rm = restrict_to_fk(&modified_landau(&GaussianRational::one(), &GaussianRational::frac(1, 4)), 2)?;
        let rep = spectrum(&rm)?;
        let e = &rep.eigenvalues[..];
        ensure(
            e.len() == 1
                && e[0].value.exact() == Some(&GaussianRational::frac(1, 2))
                && (e[0].algebraic, e[0].geometric, e[0].generalized) == (2, 1, 2),
            || format!("{e:?}"),
        )
    });
    for beta in [Rational::frac(3, 8), Rational::int(-2), Rational::frac(5, 7)] {
        for k in 1..=top {
            let beta = beta.clone();
            jobs.add(format!("isospectral/beta={beta}/k={k}"), "is isospectral to $\\widetilde{\\Delta}$", move || {
                let beta = GaussianRational::real(beta);
                let h = modified_landau(&GaussianRational::zero(), &beta);
                let rep = spectrum(&restrict_to_fk(&h, k)?)?;
                let expect: Vec<_> = (0..k as i64).map(GaussianRational::int).collect();
                ensure(rep.exact_values() == expect, || format!("eigenvalues {:?}", rep.exact_values()))?;
                for j in 1..=k {
                    for n in 0..=4 {
                        let f = ExpPoly::poly1(&[(n, 0, GaussianRational::one())]);
                        let psi = shifted_ladder_eigenfunction(&beta, j, &f)?;
                        let lambda = GaussianRational::int(j as i64 - 1);
                        ensure(h.apply(&psi)? == psi.scale(&lambda), || format!("j = {j}, f = z^{n}"))?;
                        ensure(membership_level(&psi)? <= k, || format!("eigenfunction j = {j} leaves the space"))?;
                    }
                }
                Ok(())
            });
        }
    }
    jobs
}

/// Every term has zbar degree over `coords` below `k`.
fn degree_oracle(f: &ExpPoly, coords: &[usize], k: u32) -> bool {
    f.terms().all(|(m, _)| coords.iter().map(|&i| m.zb[i]).sum::<u32>() < k)
}

/// Multi-indices in `[0, k)^d` with entry sum below `k`, by exhaustive search.
fn brute_count(d: u32, k: u32) -> u64 {
    let mut count = 0;
    let mut idx = vec![0u32; d as usize];
    loop {
        if idx.iter().sum::<u32>() < k {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return count;
            }
            idx[i] += 1;
            if idx[i] < k {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn multidim(p: &Params, rng: &mut ChaCha8Rng) -> Jobs {
    let mut jobs = Jobs::new("multidim");
    let max_d = p.d.unwrap_or(3);
    let top = p.k.unwrap_or(4);
    let deg = p.max_degree.unwrap_or(5);
    for n in 0..100 {
        let d = rng.random_range(1..=max_d) as usize;
        let k = rng.random_range(1..=top);
        // about half the samples stay inside the space
        let zbar = if rng.random_bool(0.5) { k - 1 } else { deg };
        let f = poly(rng, d, deg, zbar, 5);
        jobs.add(format!("homogeneous/sample-{n:03}"), "alternatively the $k$-homogeneous-Fock space", move || {
            let by_op = homogeneous_membership(&f, k)?;
            ensure(by_op == homogeneous_alt_membership(&f, k)?, || "operator and derivative forms disagree".into())?;
            let coords: Vec<usize> = (0..d).collect();
            ensure(by_op == degree_oracle(&f, &coords, k), || "membership disagrees with zbar degree".into())
        });
    }
    for d in 1..=max_d {
        for k in 1..=top + 1 {
            jobs.add(format!("count/d={d}/k={k}"), "uniquely defined by $C^{k-1}_{d+k-1}$", move || {
                let brute = brute_count(d, k);
                let binom = Rational::binomial(d + k - 1, d);
                ensure(binom == Rational::int(brute), || format!("C(d+k-1, d) = {binom}, enumeration {brute}"))?;
                ensure(homogeneous_component_count(d, k)? == brute.into(), || "component count".into())?;
                let generic = ExpPoly::from_terms(
                    d as usize,
                    (0..k)
                        .flat_map(|t| compositions(d as usize, t))
                        .map(|m| (MultiMonomial::new(vec![0; d as usize], m), GaussianRational::one())),
                )?;
                ensure(homogeneous_membership(&generic, k)?, || "generic element is outside the space".into())?;
                let parts = multi_true_decompose(&generic)?.components.len() as u64;
                ensure(parts == brute, || format!("generic element has {parts} components"))
            });
        }
    }
    for n in 0..50 {
        let (k1, k2) = (rng.random_range(1..=top), rng.random_range(1..=top));
        let zbar = if rng.random_bool(0.5) { k1.min(k2) - 1 } else { deg };
        let f2 = poly(rng, 2, deg, zbar, 5);
        let f3 = poly(rng, 3, deg, zbar, 5);
        jobs.add(format!("quasi/sample-{n:02}"), "$m_1 +m_2+\\ldots +m_n=d$", move || {
            let expect = degree_oracle(&f2, &[0], k1) && degree_oracle(&f2, &[1], k2);
            ensure(quasi_membership(&f2, &[1, 1], &[k1, k2])? == expect, || "m = (1, 1)".into())?;
            let expect3 = degree_oracle(&f3, &[0, 1], k1) && degree_oracle(&f3, &[2], k2);
            ensure(quasi_membership(&f3, &[2, 1], &[k1, k2])? == expect3, || "m = (2, 1)".into())
        });
    }
    jobs
}

const ISOMETRIC: &str = "where they act isometrically";

fn symmetry(p: &Params, rng: &mut ChaCha8Rng) -> Jobs {
    let mut jobs = Jobs::new("symmetry");
    let deg = p.max_degree.unwrap_or(6);
    let top = p.k.unwrap_or(5);
    let phase = GaussianRational::new(Rational::frac(3, 5), Rational::frac(4, 5));
    for n in 0..40 {
        let f1 = poly(rng, 1, deg, deg, 5);
        let f2 = poly(rng, 2, deg.min(5), deg.min(5), 5);
        let u = unitary2(rng);
        let shift = gr(rng);
        let shift2 = [gr(rng), gr(rng)];
        let small = [small_gr(rng), small_gr(rng)];
        let phase = phase.clone();
        let tilted = {
            let f = poly(rng, 2, 3, 3, 4);
            let (x, u, v) = (small_gr(rng), vec![small_gr(rng), small_gr(rng)], vec![small_gr(rng), small_gr(rng)]);
            if f.is_zero() { f } else { f.with_exponential(u, v).with_prefactor_exponent(x) }
        };
        let g1 = f1.clone();
        let g2 = f2.clone();
        jobs.add(format!("rotation/sample-{n:02}"), ISOMETRIC, move || {
            let r = f1.rotate(&[vec![phase]])?;
            ensure(membership_level(&r)? == membership_level(&f1)?, || "level changed".into())?;
            ensure(r.norm_sq() == f1.norm_sq(), || "norm changed".into())?;
            let r2 = f2.rotate(&u)?;
            for k in 1..=top {
                ensure(homogeneous_membership(&r2, k)? == homogeneous_membership(&f2, k)?, || format!("k = {k}"))?;
            }
            ensure(r2.norm_sq() == f2.norm_sq(), || "unitary rotation changed the norm".into())
        });
        jobs.add(format!("weyl/sample-{n:02}"), "invariant under the action of the operators $U_{\\alpha}$", move || {
            for gauge in [false, true] {
                let w = g1.weyl_shift(&[shift.clone()], gauge)?;
                ensure(membership_level(&w)? == membership_level(&g1)?, || format!("level changed, gauge {gauge}"))?;
            }
            let w2 = g2.weyl_shift(&shift2, true)?;
            for k in 1..=top {
                ensure(homogeneous_membership(&w2, k)? == homogeneous_membership(&g2, k)?, || format!("k = {k}"))?;
            }
            let before: Vec<_> = multi_true_decompose(&g2)?.components.into_keys().collect();
            let after: Vec<_> = multi_true_decompose(&w2)?.components.into_keys().collect();
            ensure(before == after, || "level indices changed".into())
        });
        jobs.add(format!("weyl-norm/sample-{n:02}"), ISOMETRIC, move || {
            let w = tilted.weyl_shift(&small, true)?;
            ensure(w.norm_sq() == tilted.norm_sq(), || "gauged shift changed the norm".into())
        });
    }
    jobs
}
