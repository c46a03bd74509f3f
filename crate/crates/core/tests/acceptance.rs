//! Acceptance run: one PASS/FAIL line per criterion, plus companion lines
//! where the stated data contains a known defect.
//!
//! Criteria listed in `KNOWN_DEFECTS` fail as stated because of errors in
//! the transcribed operator data (see README). They are computed faithfully
//! and reported, but do not fail the run; every other line must pass.

use std::fmt::Write as _;
use std::thread;
use std::time::Instant;

use commuting_ops::curve::{bc_function_identity_on, chi_series, CurveDef};
use commuting_ops::diffop::{eval_poly_at_pair, DiffOp};
use commuting_ops::exact::{int, rat, Rational, XLaurent, ZSeries};
use commuting_ops::kncheck::{gamma_equation_residual, verify_kn, KnConfig};
use commuting_ops::opdata::{bc_polynomial, make_cal_l, make_l1, make_l2, make_l2_mu};
use commuting_ops::pipeline::{derive_l1_coeffs, find_bc_relation, in_span, solve_commuting, verify_rank3, Ansatz};
use commuting_ops::Result;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

mod common;
use common::*;

type Op = DiffOp<XLaurent>;

const STATED_Q: &str = "w^3 - (eps^4/15552)*w^2 - z^4 - z^3";
const SERIES_ORDER: usize = 16;
const RANK3_MIN_ORDERS: usize = 8;
const KN_RESIDUAL_EXP: u32 = 40;
const GAMMA_RESIDUAL_EXP: u32 = 50;
const DOUBLING_GAIN: f64 = 10.0;
const PROPERTY_CASES: u32 = 1000;
const PROPERTY_SEED: [u8; 32] = *b"commuting-ops acceptance seed 01";

/// Criteria that fail as stated because the transcribed data is inconsistent.
const KNOWN_DEFECTS: &[&str] = &["02", "04", "05", "08"];

struct Line {
    id: &'static str,
    label: String,
    passed: bool,
    detail: String,
    seconds: f64,
}

fn line(id: &'static str, label: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Line {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Line { id, label: label.into(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

fn x(c: Rational, e: u32, n: i32) -> XLaurent {
    XLaurent::term(c, e, n)
}

fn chi_and_eigen() -> Result<([ZSeries; 3], ZSeries, ZSeries)> {
    let curve = CurveDef::standard();
    Ok((
        chi_series(curve, SERIES_ORDER)?,
        curve.lambda().to_series(SERIES_ORDER)?,
        curve.mu().to_series(SERIES_ORDER)?,
    ))
}

fn commutation() -> Line {
    line("01", "[L1, L2] = 0 with eps symbolic", || {
        let c = make_l1().commutator(&make_l2());
        let nonzero = c.coeffs().iter().filter(|k| !k.is_zero()).count();
        Ok((c.is_zero(), format!("{nonzero} nonzero coefficients among D^0..D^18")))
    })
}

fn bc_identity(id: &'static str, label: &str, l2: Op) -> Line {
    line(id, label, || {
        let q = bc_polynomial();
        if q.display() != STATED_Q {
            return Ok((false, format!("polynomial is {}", q.display())));
        }
        let r = eval_poly_at_pair(&q, &make_l1(), &l2)?;
        let detail = match r.order() {
            None => "Q(L1, L2) = 0 exactly".into(),
            Some(k) => format!("Q(L1, L2) has order {k}, leading coefficient {}", r.coeff(k)),
        };
        Ok((r.is_zero(), detail))
    })
}

fn degeneration() -> Line {
    line("03", "eps = 0: L1 = calL^3 - 1, L2 = calL^4 - calL", || {
        let l = make_cal_l();
        let zero = int(0);
        let a = make_l1().specialize_eps(&zero) == l.power(3).sub(&Op::identity());
        let b = make_l2().specialize_eps(&zero) == l.power(4).sub(&l);
        Ok((a && b, format!("L1 {}, L2 {}", if a { "matches" } else { "differs" }, if b { "matches" } else { "differs" })))
    })
}

fn series_terms(id: &'static str, label: &str, expected: [(usize, i32, XLaurent); 4]) -> Line {
    line(id, label, || {
        let (chi, _, _) = chi_and_eigen()?;
        let mut ok = 0;
        let mut detail = String::new();
        for (j, e, want) in expected {
            let got = chi[j].coeff(e).unwrap_or_default();
            if got == want {
                ok += 1;
            } else {
                let _ = write!(detail, "; chi{j} z^{e}: got {got}, stated {want}");
            }
        }
        Ok((ok == 4, format!("{ok} of 4 coefficients match{detail}")))
    })
}

fn rank3(id: &'static str, label: &str, l: Op, use_mu: bool, offset: Option<XLaurent>, expect_pass: bool) -> Line {
    line(id, label, || {
        let (chi, lam, mu) = chi_and_eigen()?;
        let mut eigen = if use_mu { mu } else { lam };
        if let Some(o) = offset {
            eigen = &eigen + &ZSeries::constant(o);
        }
        let r = verify_rank3(&l, &chi, &eigen, RANK3_MIN_ORDERS)?;
        let detail = match (&r.failure, r.verified_through) {
            (Some((j, e, c)), _) => format!("D^{j} remainder differs at z^{e} by {c}"),
            (None, Some(v)) => format!("{} non-negative orders match (through z^{v})", r.nonnegative_orders),
            (None, None) => "no orders compared".into(),
        };
        Ok((r.passed == expect_pass, detail))
    })
}

fn derivation() -> Line {
    line("06", "L1 re-derived from the chi series", || {
        let (chi, lam, _) = chi_and_eigen()?;
        let f = derive_l1_coeffs(&chi, &lam)?;
        let l1 = make_l1();
        let same = (0..9).filter(|&k| f[k] == l1.coeff(k)).count();
        Ok((same == 9 && f.len() == 9, format!("{same} of f_0..f_8 equal the transcription")))
    })
}

fn commutant() -> Line {
    line("07", "order-12 commutant of L1: dimension 2, contains L2", || {
        let l1 = make_l1();
        let set = solve_commuting(&l1, &Ansatz::new(12, -16..=28, 8))?;
        let all_commute = std::iter::once(&set.particular)
            .chain(&set.homogeneous_basis)
            .all(|m| m.commutator(&l1).is_zero());
        let eps2 = Op::multiplication(x(int(1), 2, 0));
        let spans = [Op::identity(), l1.clone(), eps2.clone(), eps2.compose(&l1)]
            .iter()
            .all(|g| in_span(&set.homogeneous_basis, g));
        let contains = set.contains(&make_l2());
        let passed = set.dimension() == 2 && all_commute && spans && contains;
        Ok((
            passed,
            format!(
                "dimension {} over Q[eps] ({} over Q); members commute: {all_commute}; spans 1, L1: {spans}; contains L2: {contains}",
                set.dimension(),
                set.rational_dimension()
            ),
        ))
    })
}

fn discovery(id: &'static str, label: &str, l2: Op) -> Line {
    line(id, label, || {
        let found = find_bc_relation(&make_l1(), &l2, 36)?;
        Ok(match found {
            Some(r) => (r.display() == STATED_Q, format!("found {}", r.display())),
            None => (false, "no relation of weight <= 36".into()),
        })
    })
}

fn function_identity() -> Line {
    line("09", "Q(lambda, mu) = 0 on the curve, not on the eps^2 variant", || {
        let standard = bc_function_identity_on(CurveDef::standard());
        let variant = bc_function_identity_on(CurveDef::eps2_variant());
        Ok((standard && !variant, format!("standard curve {standard}, eps^2 variant {variant}")))
    })
}

fn kn() -> Line {
    line("10", "KN residuals at eps = -1, 60 digits", || {
        let eps = int(-1);
        let points = [rat(1, 1), rat(3, 2), int(2), int(3), int(5)];
        let base = KnConfig { eps: eps.clone(), ..KnConfig::with_digits(60) };
        let r60 = verify_kn(&points, &base)?;
        let r120 = verify_kn(&points, &KnConfig { eps: eps.clone(), ..KnConfig::with_digits(120) })?;
        let w60 = r60.log10_max_residual.unwrap_or(f64::NEG_INFINITY);
        let w120 = r120.log10_max_residual.unwrap_or(f64::NEG_INFINITY);
        let mut gamma_worst = f64::NEG_INFINITY;
        let mut gamma_ok = true;
        for p in &points {
            let g = gamma_equation_residual(p, &eps, 60)?;
            gamma_ok &= g.below_pow10(GAMMA_RESIDUAL_EXP);
            gamma_worst = gamma_worst.max(g.log10_abs());
        }
        let residual_ok = w60 < -(KN_RESIDUAL_EXP as f64);
        let gain = w60 - w120;
        let passed = residual_ok && gamma_ok && gain >= DOUBLING_GAIN;
        Ok((
            passed,
            format!(
                "max residual 1e{w60:.1} (< 1e-{KN_RESIDUAL_EXP}), gamma equation 1e{gamma_worst:.1} (< 1e-{GAMMA_RESIDUAL_EXP}), \
                 120 digits gain {gain:.1} orders (>= {DOUBLING_GAIN}), branches {}",
                r60.branches
            ),
        ))
    })
}

fn run_property<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &PROPERTY_SEED));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn properties() -> Line {
    line("11", "seeded property suites, 1000 cases each", || {
        let suites: [(&str, std::result::Result<(), String>); 6] = [
            (
                "ring axioms",
                run_property((coefficient(), coefficient(), coefficient()), |(f, g, h)| {
                    prop_assert_eq!(&f * &g, &g * &f);
                    prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
                    prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
                    Ok(())
                }),
            ),
            (
                "Leibniz",
                run_property((coefficient(), coefficient(), 0usize..=4), |(f, g, k)| {
                    let lhs = Op::d_pow(k).apply(&(&f * &g));
                    let rhs = Op::d_pow(k).compose(&Op::multiplication(f.clone())).apply(&g);
                    prop_assert_eq!(lhs, rhs);
                    prop_assert_eq!(
                        Op::d_pow(1).commutator(&Op::multiplication(f.clone())),
                        Op::multiplication(f.derive())
                    );
                    Ok(())
                }),
            ),
            (
                "associativity",
                run_property((operator(3), operator(3), operator(3)), |(a, b, c)| {
                    prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
                    Ok(())
                }),
            ),
            (
                "Jacobi",
                run_property((operator(2), operator(2), operator(2)), |(a, b, c)| {
                    let j = a
                        .commutator(&b.commutator(&c))
                        .add(&b.commutator(&c.commutator(&a)))
                        .add(&c.commutator(&a.commutator(&b)));
                    prop_assert!(j.is_zero());
                    Ok(())
                }),
            ),
            (
                "reduction round trip",
                run_property((operator(5), operator(2)), |(a, t)| {
                    let t = t.add(&Op::d_pow(3));
                    let (q, r) = a.right_reduce(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    prop_assert_eq!(q.compose(&t).add(&r), a);
                    prop_assert!(r.order().is_none_or(|o| o < 3));
                    Ok(())
                }),
            ),
            (
                "parser round trip",
                run_property((operator(4), expr()), |(a, e)| {
                    prop_assert_eq!(commuting_ops::cli::parse_op(&a.to_string()).unwrap(), a);
                    prop_assert_eq!(commuting_ops::cli::parse_op(&e.text()).unwrap(), e.value());
                    Ok(())
                }),
            ),
        ];
        let failed: Vec<String> = suites.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
        let names: Vec<&str> = suites.iter().map(|(n, _)| *n).collect();
        Ok(if failed.is_empty() {
            (true, format!("{} passed", names.join(", ")))
        } else {
            (false, failed.join("; "))
        })
    })
}

fn main() {
    let started = Instant::now();
    let offset = || commuting_ops::opdata::l2_eigen_offset();
    let jobs: Vec<Box<dyn FnOnce() -> Line + Send>> = vec![
        Box::new(commutation),
        Box::new(|| bc_identity("02", "Q(L1, L2) = 0 for the stated Q", make_l2())),
        Box::new(|| bc_identity("02+", "companion: Q(L1, L2 + 1541 eps^4/11337408) = 0", make_l2_mu())),
        Box::new(degeneration),
        Box::new(|| {
            series_terms(
                "04",
                "chi series terms as stated",
                [
                    (1, 0, x(int(26), 0, -2)),
                    (0, 0, &(&x(int(28), 0, -2) - &x(rat(1, 5832), 2, 3)) - &x(rat(1, 5832), 0, 6)),
                    (0, 1, x(rat(-1, 216), 2, 0)),
                    (0, 2, x(rat(2, 3), 2, -2)),
                ],
            )
        }),
        Box::new(|| {
            series_terms(
                "04+",
                "companion: chi0 terms 28/x^3 and 2 eps^2/(3 x^3)",
                [
                    (1, 0, x(int(26), 0, -2)),
                    (0, 0, &(&x(int(28), 0, -3) - &x(rat(1, 5832), 2, 3)) - &x(rat(1, 5832), 0, 6)),
                    (0, 1, x(rat(-1, 216), 2, 0)),
                    (0, 2, x(rat(2, 3), 2, -3)),
                ],
            )
        }),
        Box::new(|| rank3("05a", "L1 mod T = lambda through >= 8 orders", make_l1(), false, None, true)),
        Box::new(|| rank3("05", "L2 mod T = mu through >= 8 orders", make_l2(), true, None, true)),
        Box::new(move || {
            rank3("05+", "companion: L2 mod T = mu - 1541 eps^4/11337408", make_l2(), true, Some(offset()), true)
        }),
        Box::new(|| rank3("05b", "L1 + D is rejected", make_l1().add(&Op::d_pow(1)), false, None, false)),
        Box::new(derivation),
        Box::new(commutant),
        Box::new(|| discovery("08", "relation discovered for (L1, L2) equals the stated Q", make_l2())),
        Box::new(|| discovery("08+", "companion: relation for (L1, L2 + 1541 eps^4/11337408)", make_l2_mu())),
        Box::new(function_identity),
        Box::new(kn),
        Box::new(properties),
    ];
    let lines: Vec<Line> = thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });

    let mut unexpected = Vec::new();
    println!("acceptance");
    for l in &lines {
        let known = KNOWN_DEFECTS.contains(&l.id);
        let status = if l.passed { "PASS" } else { "FAIL" };
        let note = if !l.passed && known { " (known data defect)" } else { "" };
        println!("  [{:>3}] {status} {}: {} ({:.1} s){note}", l.id, l.label, l.detail, l.seconds);
        if !l.passed && !known {
            unexpected.push(l.id);
        }
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!(
        "acceptance: {} of {} lines pass, {} unexpected failures, {:.1} s",
        lines.len() - failed,
        lines.len(),
        unexpected.len(),
        started.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
