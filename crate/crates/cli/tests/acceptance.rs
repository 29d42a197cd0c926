//! One test per acceptance criterion. Each prints a single
//! `criterion NN PASS|FAIL: ...` line before asserting.
//!
//! The tests hold a shared lock so that wall-clock budgets are measured
//! without competing for the CPU.

use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use polyfock_cli::expr::{canonical, parse_operator};
use polyfock_cli::json::{
    exp_poly_from_str, exp_poly_to_string, normal_form_from_str, normal_form_to_string, spectrum_from_str,
    spectrum_to_string,
};
use polyfock_cli::suites::{self, Params, Report};
use polyfock_core::decomp::{homogeneous_component_count, lift, true_decompose};
use polyfock_core::kernel::kernel_factor_check;
use polyfock_core::matrix::{float_similarity_error, matrix_units, model_matrices, Generator, GeneratorPoly};
use polyfock_core::ops::{euler_cartan, sl2_generators, LadderMonomial};
use polyfock_core::spectral::{
    column_function, landau_hamiltonian, modified_landau, restrict_to_fk, shifted_ladder_eigenfunction, spectrum,
    EigenColumns,
};
use polyfock_core::{ExactMatrix, ExpPoly, GaussianRational, MultiMonomial, NormalForm, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

type Outcome = Result<String, String>;

fn verdict(n: u32, outcome: Outcome) {
    match outcome {
        Ok(summary) => println!("criterion {n:02} PASS: {summary}"),
        Err(why) => {
            println!("criterion {n:02} FAIL: {why}");
            panic!("criterion {n:02} failed: {why}");
        }
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("{what} took {took:?}, budget {budget:?}"))
}

fn g(n: i64) -> GaussianRational {
    GaussianRational::int(n)
}

fn z_zb(p: u32, q: u32) -> ExpPoly {
    ExpPoly::poly1(&[(p, q, g(1))])
}

fn random_gr(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = Rational::frac(rng.random_range(-9..=9), rng.random_range(1..=6));
    let im = if rng.random_bool(0.5) { Rational::frac(rng.random_range(-9..=9), rng.random_range(1..=6)) } else { Rational::zero() };
    GaussianRational::new(re, im)
}

fn random_poly(rng: &mut ChaCha8Rng, dims: usize, max_deg: u32) -> ExpPoly {
    let n = rng.random_range(1..=5);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let z = (0..dims).map(|_| rng.random_range(0..=max_deg)).collect();
            let zb = (0..dims).map(|_| rng.random_range(0..=max_deg)).collect();
            (MultiMonomial::new(z, zb), random_gr(rng))
        })
        .collect();
    ExpPoly::from_terms(dims, terms).unwrap()
}

fn suite(name: &str, seed: u64) -> Report {
    suites::run(name, &Params { seed, ..Params::default() }).unwrap()
}

/// Passing checks whose id starts with one of `prefixes`; fails on any
/// failing check in the report or if nothing matched.
fn suite_checks(report: &Report, prefixes: &[&str]) -> Result<usize, String> {
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(format!("{} failed: {}", c.id, c.detail));
    }
    ensure(report.breaches.is_empty(), || format!("breaches: {:?}", report.breaches))?;
    let mut total = 0;
    for p in prefixes {
        let n = report.checks.iter().filter(|c| c.id.starts_with(p)).count();
        ensure(n > 0, || format!("no checks under {p}"))?;
        total += n;
    }
    Ok(total)
}

fn marks() -> Vec<Rational> {
    let mut ks: Vec<_> = (1..=8).map(Rational::int).collect();
    ks.push(Rational::frac(1, 2));
    ks.push(Rational::frac(-3, 7));
    ks
}

#[test]
fn c01_sl2_relations() {
    let _lock = serial();
    let start = Instant::now();
    let outcome = (|| {
        for k in marks() {
            let t = sl2_generators(&k);
            let err = |what: &str| format!("{what} at k = {k}");
            let two_zero = t.zero.scale(&g(2));
            ensure(t.minus.commutator(&t.plus).unwrap() == two_zero, || err("[J-, J+] = 2 J0"))?;
            ensure(t.plus.commutator(&t.zero).unwrap() == -&t.plus, || err("[J+, J0] = -J+"))?;
            ensure(t.minus.commutator(&t.zero).unwrap() == t.minus, || err("[J-, J0] = J-"))?;
            // the same relations acting on functions, without normal ordering
            for (p, q) in [(0, 0), (3, 0), (2, 2), (1, 4)] {
                let f = z_zb(p, q);
                let ab = |x: &NormalForm, y: &NormalForm| {
                    x.apply(&y.apply(&f).unwrap()).unwrap().try_sub(&y.apply(&x.apply(&f).unwrap()).unwrap()).unwrap()
                };
                ensure(ab(&t.minus, &t.plus) == two_zero.apply(&f).unwrap(), || err("action of [J-, J+]"))?;
                ensure(ab(&t.plus, &t.zero) == t.plus.apply(&f).unwrap().neg(), || err("action of [J+, J0]"))?;
                ensure(ab(&t.minus, &t.zero) == t.minus.apply(&f).unwrap(), || err("action of [J-, J0]"))?;
            }
        }
        within(start, Duration::from_secs(1), "relations")?;
        Ok(format!("exact for k in 1..8, 1/2, -3/7 in {:?}", start.elapsed()))
    })();
    verdict(1, outcome);
}

#[test]
fn c02_euler_cartan_factorization() {
    let _lock = serial();
    let start = Instant::now();
    let outcome = (|| {
        for k in 1..=8u32 {
            let lhs = NormalForm::term1(k, k, g(1));
            let rhs = (0..k).fold(NormalForm::identity(1), |acc, m| acc.compose(&euler_cartan(m)).unwrap());
            ensure(lhs == rhs, || format!("normal forms differ at k = {k}"))?;
            // oracle: (a^dag)^k a^k z^p zb^q = q!/(q-k)! zb^k ... evaluated by repeated single-letter action
            for (p, q) in [(2, k), (0, k + 1), (3, 2)] {
                let f = z_zb(p, q);
                let mut lowered = f.clone();
                for _ in 0..k {
                    lowered = lowered.apply_lowering(0).unwrap();
                }
                let mut raised = lowered;
                for _ in 0..k {
                    raised = raised.apply_raising(0).unwrap();
                }
                ensure(rhs.apply(&f).unwrap() == raised, || format!("action differs at k = {k}, z^{p} zb^{q}"))?;
            }
        }
        within(start, Duration::from_secs(1), "factorization")?;
        Ok(format!("k <= 8 in {:?}", start.elapsed()))
    })();
    verdict(2, outcome);
}

#[test]
fn c03_decomposition_suite() {
    let _lock = serial();
    let start = Instant::now();
    let report = suite("decomposition", 1);
    let outcome = (|| {
        within(start, Duration::from_secs(10), "decomposition suite")?;
        let n = suite_checks(&report, &["decomposition/orthogonal-sum", "decomposition/fock-round-trip"])?;
        ensure(n == 400, || format!("expected 400 sample checks, got {n}"))?;
        Ok(format!("200 orthogonal sums and 200 round trips in {:?}", start.elapsed()))
    })();
    verdict(3, outcome);
}

/// `||sum c_n z^n||^2 = sum |c_n|^2 n!` for analytic polynomials.
fn analytic_norm(g: &ExpPoly) -> Rational {
    g.terms().fold(Rational::zero(), |acc, (m, c)| {
        assert_eq!(m.zb, vec![0]);
        acc + c.norm_sq() * Rational::factorial(m.z[0])
    })
}

#[test]
fn c04_isometry() {
    let _lock = serial();
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut samples = 0;
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let terms: Vec<_> = (0..n).map(|_| (rng.random_range(0..=6), 0, random_gr(&mut rng))).collect();
            let gz = ExpPoly::poly1(&terms);
            let base = analytic_norm(&gz);
            for k in 1..=6u32 {
                let psi = lift(&gz, k).unwrap();
                let lifted = psi.norm_sq();
                let want = base.clone() * Rational::factorial(k - 1);
                ensure(lifted.exponent().is_zero() && *lifted.coeff() == GaussianRational::real(want.clone()), || {
                    format!("lift norm at k = {k} for {gz}")
                })?;
                let raised = psi.apply_raising(0).unwrap().norm_sq();
                ensure(*raised.coeff() == GaussianRational::real(want * Rational::int(k)), || {
                    format!("raising norm at level {k} for {gz}")
                })?;
                samples += 1;
            }
        }
        let n = suite_checks(&suite("decomposition", 1), &["decomposition/isometry"])?;
        Ok(format!("{samples} analytic-oracle cases and {n} suite samples"))
    })();
    verdict(4, outcome);
}

#[test]
fn c05_kernels() {
    let _lock = serial();
    let start = Instant::now();
    let report = suite("kernels", 1);
    let outcome = (|| {
        within(start, Duration::from_secs(30), "kernels suite")?;
        let n = suite_checks(&report, &["kernels/projection", "kernels/factor"])?;
        for k in 1..=5u32 {
            let p = kernel_factor_check(k).map_err(|e| format!("k = {k}: {e}"))?;
            ensure(p[0].is_one(), || format!("p(0) = {} at k = {k}", p[0]))?;
        }
        Ok(format!("{n} checks, p(0) = 1 for k <= 5, in {:?}", start.elapsed()))
    })();
    verdict(5, outcome);
}

#[test]
fn c06_landau_spectrum() {
    let _lock = serial();
    let outcome = (|| {
        for k in 1..=6u32 {
            let rm = restrict_to_fk(&landau_hamiltonian(), k).unwrap();
            let rep = spectrum(&rm).unwrap();
            let want: Vec<_> = (0..k as i64).map(g).collect();
            ensure(rep.exact_values() == want, || format!("eigenvalues at k = {k}: {:?}", rep.exact_values()))?;
            for e in &rep.eigenvalues {
                let lambda = e.value.exact().ok_or("inexact eigenvalue")?;
                let EigenColumns::Exact(cols) = &e.columns else { return Err("float columns".into()) };
                ensure(cols.len() == 1, || format!("eigenspace dimension at k = {k}"))?;
                let level = (1..=k).find(|&l| *lambda == g(l as i64 - 1)).ok_or("eigenvalue outside 0..k-1")?;
                for n in 0..=3 {
                    let psi = column_function(&cols[0], &z_zb(n, 0)).unwrap();
                    let dec = true_decompose(&psi).unwrap();
                    let pure = (1..=k).all(|l| (l == level) != dec.level(l).is_zero());
                    ensure(pure, || format!("eigenvalue {lambda} at k = {k} is not the pure level {level}"))?;
                }
            }
        }
        Ok("eigenvalues 0..k-1 on pure levels for k <= 6".into())
    })();
    verdict(6, outcome);
}

#[test]
fn c07_modified_landau() {
    let _lock = serial();
    let outcome = (|| {
        let (alpha, beta) = (GaussianRational::frac(1, 2), GaussianRational::frac(3, 8));
        let rep = spectrum(&restrict_to_fk(&modified_landau(&alpha, &beta), 2).unwrap()).unwrap();
        let want = vec![GaussianRational::frac(3, 16), g(-1), g(1)];
        ensure(rep.char_poly.coeffs() == want.as_slice(), || format!("char poly {}", rep.char_poly))?;
        // closed form (1 +- sqrt(1 - 4 alpha beta)) / 2 with the root taken by hand
        let disc = g(1) - alpha.clone() * beta.clone() * g(4);
        let root = GaussianRational::frac(1, 2);
        ensure(root.clone() * root.clone() == disc, || format!("discriminant {disc}"))?;
        let half = GaussianRational::frac(1, 2);
        let closed = vec![(g(1) - root.clone()) * half.clone(), (g(1) + root) * half];
        ensure(rep.exact_values() == closed, || format!("roots {:?}", rep.exact_values()))?;

        for beta in [GaussianRational::frac(3, 8), g(-2), GaussianRational::frac(5, 7), GaussianRational::new(Rational::one(), Rational::frac(-1, 3))] {
            let op = modified_landau(&GaussianRational::zero(), &beta);
            for k in 1..=6u32 {
                let rep = spectrum(&restrict_to_fk(&op, k).unwrap()).unwrap();
                let want: Vec<_> = (0..k as i64).map(g).collect();
                ensure(rep.exact_values() == want, || format!("beta = {beta}, k = {k}: {:?}", rep.exact_values()))?;
                for j in 1..=k {
                    for n in 0..=4 {
                        let psi = shifted_ladder_eigenfunction(&beta, j, &z_zb(n, 0)).unwrap();
                        let lambda = g(j as i64 - 1);
                        ensure(op.apply(&psi).unwrap() == psi.scale(&lambda), || {
                            format!("certificate fails for beta = {beta}, j = {j}, n = {n}")
                        })?;
                        ensure(psi.total_zbar_degree() < k, || "certificate leaves F_k".into())?;
                    }
                }
            }
        }
        Ok("x^2 - x + 3/16 with roots 1/4, 3/4; alpha = 0 isospectral for k <= 6".into())
    })();
    verdict(7, outcome);
}

#[test]
fn c08_matrix_model() {
    let _lock = serial();
    let outcome = (|| {
        for k in 1..=8u32 {
            let m = model_matrices(k).unwrap();
            ensure(m.minus.commutator(&m.plus) == m.zero.scale(&g(2)), || format!("[N-, N+] at k = {k}"))?;
            ensure(m.plus.commutator(&m.zero) == m.plus.scale(&g(-1)), || format!("[N+, N0] at k = {k}"))?;
            ensure(m.minus.commutator(&m.zero) == m.minus, || format!("[N-, N0] at k = {k}"))?;
            let err = float_similarity_error(k).unwrap();
            ensure(err < 1e-12, || format!("float similarity {err:e} at k = {k}"))?;
        }
        for k in 1..=5u32 {
            let m = model_matrices(k).unwrap();
            let units = matrix_units(k).unwrap();
            let n = k as usize;
            ensure(units.len() == n * n, || format!("{} units at k = {k}", units.len()))?;
            for (&(a, b), u) in &units {
                ensure(u.matrix == ExactMatrix::unit(n, a as usize - 1, b as usize - 1), || format!("E_{a}{b} at k = {k}"))?;
                ensure(u.expr.to_matrix(&m) == u.matrix, || format!("expression for E_{a}{b} at k = {k}"))?;
                for (&(c, d), v) in &units {
                    let want = if b == c { units[&(a, d)].matrix.clone() } else { ExactMatrix::zero(n) };
                    ensure(u.matrix.mul(&v.matrix) == want, || format!("E_{a}{b} E_{c}{d} at k = {k}"))?;
                }
            }
            let flat: Vec<Vec<GaussianRational>> =
                units.values().map(|u| u.matrix.rows().iter().flatten().cloned().collect()).collect();
            ensure(polyfock_core::matrix::rank(flat) == n * n, || format!("units do not span at k = {k}"))?;
        }
        let n = suite_checks(&suite("matrices", 1), &["matrices/sl2", "matrices/units", "matrices/float-similarity"])?;
        Ok(format!("commutators k <= 8, units k <= 5, similarity < 1e-12, {n} suite checks"))
    })();
    verdict(8, outcome);
}

fn binomial(n: u64, r: u64) -> u64 {
    (1..=r).fold(1, |acc, i| acc * (n - r + i) / i)
}

#[test]
fn c09_multidimensional() {
    let _lock = serial();
    let start = Instant::now();
    let report = suite("multidim", 1);
    let outcome = (|| {
        within(start, Duration::from_secs(30), "multidim suite")?;
        let n = suite_checks(&report, &["multidim/homogeneous", "multidim/count", "multidim/quasi"])?;
        let samples = report.checks.iter().filter(|c| c.id.starts_with("multidim/homogeneous")).count();
        ensure(samples == 100, || format!("{samples} homogeneous samples"))?;
        for d in 1..=3u32 {
            for k in 1..=5u32 {
                let count = homogeneous_component_count(d, k).unwrap();
                let want = binomial((d + k - 1) as u64, d as u64);
                ensure(count == want.into(), || format!("count {count} at d = {d}, k = {k}"))?;
            }
        }
        Ok(format!("{n} checks in {:?}", start.elapsed()))
    })();
    verdict(9, outcome);
}

#[test]
fn c10_symmetry() {
    let _lock = serial();
    let outcome = (|| {
        let report = suite("symmetry", 1);
        let n = suite_checks(&report, &["symmetry/rotation", "symmetry/weyl/", "symmetry/weyl-norm"])?;
        // direct rotation by (3 + 4i)/5 on one mixed-level sample
        let alpha = GaussianRational::new(Rational::frac(3, 5), Rational::frac(4, 5));
        let f = ExpPoly::poly1(&[(2, 3, g(1)), (1, 0, GaussianRational::frac(-2, 3)), (0, 1, g(5))]);
        let rotated = f.rotate(&[vec![alpha]]).unwrap();
        ensure(rotated.norm_sq() == f.norm_sq(), || "rotation changes the norm".into())?;
        ensure(rotated.total_zbar_degree() == f.total_zbar_degree(), || "rotation changes the level".into())?;
        let shift = GaussianRational::new(Rational::frac(1, 2), Rational::frac(-1, 3));
        let w = f.weyl_shift(&[shift], true).unwrap();
        ensure(w.norm_sq() == f.norm_sq(), || format!("gauged shift norm {} vs {}", w.norm_sq(), f.norm_sq()))?;
        Ok(format!("{n} suite checks"))
    })();
    verdict(10, outcome);
}

const HALF_WIDTH: f64 = 11.0;
const STEP: f64 = 0.125;

#[test]
fn c11_quadrature_oracle() {
    let _lock = serial();
    let outcome = (|| {
        // table of z^p zb^q e^{-|z|^2} on the grid, p, q <= 6
        let n = (HALF_WIDTH / STEP) as i64;
        let mut table = vec![Vec::new(); 49];
        for i in -n..=n {
            for j in -n..=n {
                let z = Complex64::new(i as f64 * STEP, j as f64 * STEP);
                let w = (-z.norm_sqr()).exp();
                for p in 0..7 {
                    for q in 0..7 {
                        table[p * 7 + q].push(z.powu(p as u32) * z.conj().powu(q as u32) * w.sqrt());
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for a in 0..49 {
            for b in 0..49 {
                let numeric: Complex64 =
                    table[a].iter().zip(&table[b]).map(|(x, y)| x * y.conj()).sum::<Complex64>() * STEP * STEP
                        / std::f64::consts::PI;
                let f = z_zb(a as u32 / 7, a as u32 % 7);
                let h = z_zb(b as u32 / 7, b as u32 % 7);
                let exact = f.inner_product(&h).unwrap().to_complex();
                // orthogonal pairs are measured against the Cauchy-Schwarz bound
                let scale = if exact.norm() > 0.0 {
                    exact.norm()
                } else {
                    (f.norm_sq().to_complex().re * h.norm_sq().to_complex().re).sqrt()
                };
                let rel = (exact - numeric).norm() / scale;
                worst = worst.max(rel);
                ensure(rel < 1e-8, || format!("<z^{} zb^{}, z^{} zb^{}>: exact {exact}, numeric {numeric}", a / 7, a % 7, b / 7, b % 7))?;
            }
        }
        Ok(format!("2401 monomial pairs, worst relative error {worst:.1e}"))
    })();
    verdict(11, outcome);
}

#[derive(Deserialize)]
struct Golden {
    input: String,
    canonical: String,
}

fn round_trips(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0;
    for _ in 0..40 {
        let dims = rng.random_range(1..=3);
        let mut f = random_poly(&mut rng, dims, 4);
        if rng.random_bool(0.5) {
            let u = (0..dims).map(|_| random_gr(&mut rng)).collect();
            let v = (0..dims).map(|_| random_gr(&mut rng)).collect();
            f = f.with_exponential(u, v).with_prefactor_exponent(random_gr(&mut rng));
        }
        let text = exp_poly_to_string(&f);
        let back = exp_poly_from_str(&text).map_err(|e| e.0)?;
        ensure(back == f && exp_poly_to_string(&back) == text, || format!("function round trip for {f}"))?;

        let terms: Vec<_> = (0..rng.random_range(0..=5))
            .map(|_| {
                let adag = (0..dims).map(|_| rng.random_range(0..=3)).collect();
                let a = (0..dims).map(|_| rng.random_range(0..=3)).collect();
                (LadderMonomial { adag, a }, random_gr(&mut rng))
            })
            .collect();
        let x = NormalForm::from_terms(dims, terms).unwrap();
        let text = normal_form_to_string(&x);
        let back = normal_form_from_str(&text).map_err(|e| e.0)?;
        ensure(back == x && normal_form_to_string(&back) == text, || format!("operator round trip for {x}"))?;

        let gens = [Generator::Plus, Generator::Zero, Generator::Minus];
        let p = GeneratorPoly(
            (0..rng.random_range(1..=3))
                .map(|_| (random_gr(&mut rng), (0..rng.random_range(0..=3)).map(|_| gens[rng.random_range(0..3)]).collect()))
                .collect(),
        );
        let k = rng.random_range(1..=4);
        let rep = spectrum(&restrict_to_fk(&p.to_operator(&Rational::int(k)), k).unwrap()).unwrap();
        let text = spectrum_to_string(&rep);
        let back = spectrum_from_str(&text).map_err(|e| e.0)?;
        ensure(back == rep && spectrum_to_string(&back) == text, || format!("spectrum round trip for {p} at k = {k}"))?;
        count += 3;
    }
    Ok(count)
}

#[test]
fn c12_cli() {
    let _lock = serial();
    let outcome = (|| {
        let corpus: Vec<Golden> = serde_json::from_str(include_str!("golden/expressions.json")).unwrap();
        ensure(corpus.len() == 30, || format!("{} golden expressions", corpus.len()))?;
        for e in &corpus {
            let printed = canonical(&e.input).map_err(|err| format!("{:?}: {err}", e.input))?;
            ensure(printed == e.canonical, || format!("{:?} printed as {printed:?}", e.input))?;
            ensure(canonical(&printed).as_deref() == Ok(printed.as_str()), || format!("{printed:?} is not stable"))?;
        }
        let op = parse_operator("J0 + 1/2 I + 1/2 Jp + 3/8 Jm", Some(&Rational::int(2))).map_err(|e| e.to_string())?;
        ensure(op == modified_landau(&GaussianRational::frac(1, 2), &GaussianRational::frac(3, 8)), || {
            "modified Landau expression".into()
        })?;
        let trips = round_trips(12)?;

        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_polyfock")).args(["verify", "all"]).env("PFX_SEED", "1").output().unwrap();
        let took = start.elapsed();
        ensure(out.status.code() == Some(0), || {
            format!("verify all exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        within(start, Duration::from_secs(120), "verify all")?;
        let report: Report = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure(report.passed && report.checks.iter().all(|c| c.passed), || "report marks a failure".into())?;
        Ok(format!(
            "30 golden expressions, {trips} byte-exact round trips, verify all: {} checks in {took:?}",
            report.checks.len()
        ))
    })();
    verdict(12, outcome);
}

