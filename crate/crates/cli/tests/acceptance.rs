//! End-to-end acceptance run for the weight 16 example. Prints one PASS/FAIL
//! line per criterion and fails if any gating criterion fails.
//!
//! `cargo test -p symsq --test acceptance -- --nocapture`

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use symsq::audit::audit;
use symsq::config::{PrimeSpec, RunConfig};
use symsq::pipeline::{joint_digits, joint_digits_c, padic_section, Form};
use symsq::report::{Section, Status};
use symsq_core::dirichlet::{gauss_sum, gen_bernoulli, kl_padic_value, DirichletCharacter};
use symsq_core::exact::{gcd_u64, is_prime_u64, Cyclotomic, ExactPoly, QuadraticNumber};
use symsq_core::galois::*;
use symsq_core::modforms::{level1_eigenform, HeckeData, QExpansion, SUPPORTED_WEIGHTS};
use symsq_core::padic::{hensel_root, ordinary_roots, PadicEmbedding, PadicNumber};
use symsq_core::real::{Ball, CBall, EmbedComplex};
use symsq_core::symsq::*;

const N_MAX: usize = 10_000;

// Stored values of the weight 16 example, copied verbatim.
const PETERSSON: &str = "0.00000216906134759";
const RATIO_A: &str = "136547867422656337144320";
const RATIO_B: &str = "102994007489228654461440";
const RATIO_D: &str = "17433892055631543710491";
const BIG_PRP: &str = "141264461964750634089522953623";

type Outcome = Result<String, String>;

struct Line {
    id: u32,
    name: &'static str,
    gating: bool,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn psi7() -> DirichletCharacter {
    DirichletCharacter::from_label("7.2").unwrap()
}

fn exact_ratio() -> QuadraticNumber {
    let d: BigInt = RATIO_D.parse().unwrap();
    QuadraticNumber::new(-3, BigRational::new(RATIO_A.parse().unwrap(), d.clone()), BigRational::new(RATIO_B.parse().unwrap(), d))
}

fn digits_of(x: &PadicNumber, n: i64) -> Option<Vec<u64>> {
    (0..n).map(|i| x.digit(i)).collect()
}

fn fixture_entries_pass(sec: &Section, names: &[&str]) -> Result<(), String> {
    for n in names {
        let e = sec.entries.iter().find(|e| e.name == *n).ok_or_else(|| format!("{}: no entry {}", sec.name, n))?;
        ensure(e.status == Status::Pass, || format!("{}: {} is {:?} (expected {:?}, computed {:?})", sec.name, n, e.status, e.expected, e.computed))?;
    }
    Ok(())
}

struct Shared {
    f: QExpansion,
    h: HeckeData,
    pet: Option<Ball>,
    ratio: Option<CBall>,
}

fn c1_petersson(sh: &mut Shared) -> Outcome {
    let t = Instant::now();
    let pet = petersson_norm(&sh.f, 20).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let want = Ball::from_decimal_str(PETERSSON, 128).unwrap();
    let rel = (&pet - &want).abs_upper().to_f64() / want.to_f64();
    sh.pet = Some(pet.clone());
    ensure(rel <= 1e-11, || format!("relative difference {:.3e} > 1e-11 ({})", rel, pet))?;
    ensure(secs <= 300.0, || format!("took {:.1} s > 300 s", secs))?;
    Ok(format!("{} vs {}, relative difference {:.2e}, {:.1} s", pet.to_decimal_string(16), PETERSSON, rel, secs))
}

fn c2_ratio(sh: &mut Shared) -> Outcome {
    let t = Instant::now();
    let psi = psi7();
    let desc = SymSqDescriptor::new(&sh.f, &psi);
    let l = L_direct(&desc, &CBall::from_i64(22, 160), 20, N_MAX).map_err(|e| e.to_string())?;
    let pet = match &sh.pet {
        Some(p) => p.clone(),
        None => petersson_norm(&sh.f, 20).map_err(|e| e.to_string())?,
    };
    let ratio = tilde_ratio(16, 22, &gauss_sum(&psi.conj()), &l, &pet);
    let secs = t.elapsed().as_secs_f64();
    let exact = exact_ratio().embed_complex(200);
    sh.ratio = Some(ratio.clone());
    ensure(ratio.overlaps(&exact), || format!("{} does not contain the exact value", ratio))?;
    let dr = joint_digits(&ratio.re, &exact.re);
    let di = joint_digits(&ratio.im, &exact.im);
    let cr = ratio.re.certified_digits();
    let ci = ratio.im.certified_digits();
    ensure(cr >= 15.0 && ci >= 15.0, || format!("certified digits re {:.2}, im {:.2}", cr, ci))?;
    ensure(dr >= 15.0 && di >= 15.0, || format!("agreement re {:.2}, im {:.2} digits", dr, di))?;
    ensure(secs <= 600.0, || format!("took {:.1} s > 600 s", secs))?;
    Ok(format!("{}; certified re {:.1} / im {:.1} digits, agreement {:.1} / {:.1}, {:.1} s", ratio.to_decimal_string(18), cr, ci, dr, di, secs))
}

fn c2_stretch(sh: &Shared) -> Outcome {
    let ratio = sh.ratio.as_ref().ok_or("no ratio")?;
    let got = ratio.re.certified_digits().min(ratio.im.certified_digits());
    let height: BigInt = num_traits::pow(BigInt::from(10), 25);
    let rec = recognize_quadratic(ratio, -3, &height);
    let recovered = rec.as_ref() == Some(&exact_ratio());
    ensure(got >= 110.0 && recovered, || format!("{:.1} certified digits (110 wanted); recognition at height 1e25: {}", got, if recovered { "exact" } else { "none" }))?;
    Ok(String::from("110 digits and exact recovery"))
}

fn c3_factor() -> Outcome {
    let au = audit(&exact_ratio())?;
    let den: Vec<u64> = au.denominator_factors.iter().map(|f| f.prime.to_u64().unwrap()).collect();
    ensure(den.iter().all(|p| [7, 13].contains(p)), || format!("denominator primes {:?}", den))?;
    let norm: Vec<BigUint> = au.norm_factors.iter().map(|f| f.prime.clone()).collect();
    let want: Vec<BigUint> = [2u32, 3, 5, 43, 67, 103].iter().map(|&p| BigUint::from(p)).chain([BIG_PRP.parse().unwrap()]).collect();
    for p in &want {
        ensure(norm.contains(p), || format!("{} missing from the numerator norm", p))?;
    }
    // independent oracle: the factors multiply back to the norm
    let mut prod = BigUint::from(1u32);
    for f in &au.norm_factors {
        prod *= num_traits::pow(f.prime.clone(), f.exponent as usize);
    }
    ensure(prod == *au.norm.magnitude(), || String::from("norm factors do not multiply back"))?;
    let mut dprod = BigUint::from(1u32);
    for f in &au.denominator_factors {
        dprod *= num_traits::pow(f.prime.clone(), f.exponent as usize);
    }
    ensure(dprod == RATIO_D.parse::<BigUint>().unwrap(), || String::from("denominator factors do not multiply back"))?;
    let big = au.norm_factors.iter().find(|f| f.prime.to_string() == BIG_PRP).unwrap();
    Ok(format!("D = {}; norm primes {}; 30-digit factor {}", symsq::audit::format_factors(&au.denominator_factors), norm.len(), if big.probable { "probable prime" } else { "prime" }))
}

fn padic_run(sh: &Shared, p: u64, a: i64, b: i64) -> (Section, Duration) {
    let cfg = RunConfig::default();
    let form = Form { f: sh.f.clone(), h: sh.h.clone(), warnings: Vec::new() };
    let t = Instant::now();
    let sec = padic_section(&cfg, &form, &psi7(), 22, &PrimeSpec { p, a, b }, Some(&exact_ratio()), true);
    (sec, t.elapsed())
}

fn embedding(a: i64, b: i64) -> PadicEmbedding {
    PadicEmbedding::from_generator(&QuadraticNumber::from_ints(-3, a, b), 12).unwrap()
}

fn c4_p37(sh: &Shared) -> Outcome {
    let (sec, dt) = padic_run(sh, 37, 5, -2);
    fixture_entries_pass(&sec, &["alpha_p", "e_prime", "kl_congruent_point", "verdict"])?;
    // independent recomputation from the core routines
    let emb = embedding(5, -2);
    let v = padic_symsq_L_value(22, &exact_ratio(), &emb, &sh.h, &psi7(), 12).map_err(|e| e.to_string())?;
    ensure(digits_of(&v.multiplier.alpha, 3) == Some(vec![11, 7, 25]), || format!("alpha_37 = {}", v.multiplier.alpha))?;
    ensure(v.multiplier.value.congruent(&PadicNumber::from_i64(1, 37, 6), 6), || format!("E' = {}", v.multiplier.value))?;
    let kl = kl_padic_value(&psi7(), -29, &emb, 12).map_err(|e| e.to_string())?;
    ensure(digits_of(&kl.value, 3) == Some(vec![12, 36, 23]), || format!("L_p(psi, -29) = {}", kl.value))?;
    ensure(v.valuation == Some(0), || format!("v(L_p) = {:?}", v.valuation))?;
    let pred = predict_selmer_order(37, 0, 1, &BigUint::from(1u32)).map_err(|e| e.to_string())?;
    ensure(pred.trivial, || pred.statement.clone())?;
    ensure(dt.as_secs_f64() <= 60.0, || format!("p = 37 section took {:.1} s", dt.as_secs_f64()))?;
    let verdict = sec.values.get("verdict").cloned().unwrap_or_default();
    Ok(format!("alpha = {}..., E' = 1 mod 37^6, KL(-29) = 12 + 36*37 + 23*37^2 + ..., \"{}\", {:.2} s", digits_of(&v.multiplier.alpha, 3).unwrap().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","), verdict, dt.as_secs_f64()))
}

fn c5_p67(sh: &Shared) -> Outcome {
    let (sec, _) = padic_run(sh, 67, 8, 1);
    fixture_entries_pass(&sec, &["ratio_valuation", "selmer_bound"])?;
    let emb = embedding(8, 1);
    ensure(emb.p() == 67, || format!("8 + sqrt(-3) lies over {}", emb.p()))?;
    let v = padic_symsq_L_value(22, &exact_ratio(), &emb, &sh.h, &psi7(), 12).map_err(|e| e.to_string())?;
    ensure(v.valuation == Some(1), || format!("valuation {:?} of {}", v.valuation, v.value))?;
    let bound = sec.values.get("selmer_bound").cloned().unwrap_or_default();
    ensure(bound == "order <= 67", || format!("bound reads {:?}", bound))?;
    Ok(format!("v_67 = 1 ({}), bound \"{}\"", v.value, bound))
}

fn c6_p439(sh: &Shared) -> Outcome {
    let (sec, _) = padic_run(sh, 439, 14, 9);
    fixture_entries_pass(&sec, &["ratio_valuation", "dirichlet_factor", "selmer_bound", "selmer_prediction"])?;
    let emb = embedding(14, 9);
    let v = padic_symsq_L_value(22, &exact_ratio(), &emb, &sh.h, &psi7(), 12).map_err(|e| e.to_string())?;
    ensure(v.valuation == Some(0), || format!("L_p valuation {:?}", v.valuation))?;
    let kt = kl_padic_value(&psi7(), 7, &emb, 12).map_err(|e| e.to_string())?;
    let want = PadicNumber::from_i64(148 * 439 + 232 * 439 * 439, 439, 3);
    ensure(kt.value.congruent(&want, 3), || format!("L_p(psi, 7) = {}", kt.value))?;
    let note = sec.entries.iter().find(|e| e.name == "selmer_prediction").and_then(|e| e.note.clone()).unwrap_or_default();
    ensure(note.contains("at most p") && note.contains("prediction is 0"), || format!("report does not state the discrepancy: {:?}", note))?;
    Ok(format!("L_p unit, L_p(psi,7) = {}; {}", kt.value, note))
}

fn c7_cross(sh: &Shared) -> Outcome {
    let psi = psi7();
    let desc = SymSqDescriptor::new(&sh.f, &psi);
    let cfg = AfeConfig::standard(&desc).map_err(|e| e.to_string())?;
    // the tail decays like n^(k + 1/2 - s), so s = 20 needs a longer sum
    let long = level1_eigenform(16, 4 * N_MAX).map_err(|e| e.to_string())?;
    let long_desc = SymSqDescriptor::new(&long, &psi);
    let mut parts = Vec::new();
    for s in [20, 22, 24] {
        let sb = CBall::from_i64(s, 128);
        let (dd, n) = if s == 20 { (&long_desc, 4 * N_MAX) } else { (&desc, N_MAX) };
        let d = L_direct(dd, &sb, 14, n).map_err(|e| format!("direct at {}: {}", s, e))?;
        let a = L_afe(&desc, &cfg, &sb, 16).map_err(|e| format!("afe at {}: {}", s, e))?;
        ensure(a.value.overlaps(&d), || format!("s = {}: {} and {} are disjoint", s, a.value, d))?;
        let jd = joint_digits_c(&a.value, &d).min(d.certified_digits()).min(a.value.certified_digits());
        ensure(jd >= 12.0, || format!("s = {}: {:.2} joint certified digits", s, jd))?;
        parts.push(format!("s={}: {:.1}", s, jd));
    }
    let pet = sh.pet.clone().ok_or("no Petersson norm")?;
    let triv = DirichletCharacter::trivial(1);
    let d1 = SymSqDescriptor::new(&sh.f, &triv);
    let c1 = AfeConfig::standard(&d1).map_err(|e| e.to_string())?;
    let v = L_afe(&d1, &c1, &CBall::from_i64(16, 128), 15).map_err(|e| e.to_string())?;
    let fact: BigInt = (1..16).map(BigInt::from).product();
    let rhs = (&Ball::pi(128).pow_u(17) * &pet).mul_2exp(31).div(&Ball::from_bigint(&fact, 128));
    let dig = joint_digits(&v.value.re, &rhs);
    ensure(dig >= 10.0 && v.value.im.abs_upper().to_f64() < 1e-10 * rhs.to_f64(), || format!("adjoint identity to {:.2} digits", dig))?;
    parts.push(format!("s=16 identity: {:.1}", dig));
    Ok(parts.join(", "))
}

fn c8_identities(sh: &Shared) -> Outcome {
    let primes: Vec<u64> = (2..100).filter(|&n| is_prime_u64(n)).collect();
    let units: Vec<(u64, u64)> = (1..30u64).flat_map(|n| (0..n.max(1)).filter(move |&i| gcd_u64(i, n) == 1 || n == 1).map(move |i| (n, i))).collect();
    let strat = (2u32..40, prop::sample::select(primes.clone()), -100_000i64..100_000, prop::sample::select(units));
    let mut runner = TestRunner::new_with_rng(Config { failure_persistence: None, ..Config::with_cases(100) }, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let count = std::cell::Cell::new(0);
    runner
        .run(&strat, |(k, l, a, (n, i))| {
            count.set(count.get() + 1);
            let psi = if n == 1 { DirichletCharacter::trivial(1) } else { DirichletCharacter::new(n, i).unwrap() };
            let mut ap = BTreeMap::new();
            ap.insert(l, BigInt::from(a));
            let h = HeckeData::new(k, DirichletCharacter::trivial(1), ap).unwrap();
            let c = factorization_identity_check(&h, 1, &psi, l).unwrap();
            prop_assert!(c.holds, "k={} l={} a={} psi={}", k, l, a, psi.label());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    // the quartic on the weight 16 form itself
    let triv = DirichletCharacter::trivial(1);
    let mut quartic = 0;
    for &l in &primes {
        let c = factorization_identity_check(&sh.h, 1, &triv, l).map_err(|e| e.to_string())?;
        ensure(c.holds && c.quartic_holds == Some(true), || format!("quartic fails at l = {}", l))?;
        quartic += 1;
    }
    for psi in [psi7(), triv] {
        let bad = rankin_coefficient_identity(&sh.f, &psi, 1000).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("coefficient identity fails for {} at n = {:?}", psi.label(), &bad[..bad.len().min(5)]))?;
    }
    Ok(format!("{} random instances, quartic at {} primes, coefficient identity n <= 1000 for 7.2 and 1.1", count.get(), quartic))
}

/// Critical iff neither gamma factor of `s` nor of `2k - 1 - s` has a pole.
fn critical_by_gamma(s: i64, k: i64, parity: i32) -> bool {
    let e = if (parity == 1) == (k % 2 == 0) { 1 } else { 0 };
    let finite = |z: i64| {
        let r = z - k + 1 + e;
        !((r <= 0 && r % 2 == 0) || z <= 0)
    };
    finite(s) && finite(2 * k - 1 - s)
}

fn input<'a>(psi: &'a DirichletCharacter, eps: &'a DirichletCharacter, chi: &'a DirichletCharacter) -> ClassifyInput<'a> {
    ClassifyInput { k: 16, p: 37, level: 1, psi, eps, chi, regular: Some(true), c_bound: 200 }
}

fn c9_classifier() -> Outcome {
    let mut n = 0;
    for parity in [1, -1] {
        for j in -5..=37 {
            ensure(critical_delta(j, 16, parity).is_some() == critical_by_gamma(j, 16, parity), || format!("criticality differs at j = {}, parity {}", j, parity))?;
            n += 1;
        }
    }
    // E / E' vanishing: the computed multiplier against the case table
    let p = 5u64;
    let kk = 12u32;
    let teich2 = hensel_root(&ExactPoly::from_ints(&[-1, 0, 0, 0, 1]), p, &BigInt::from(2), kk).map_err(|e| e.to_string())?;
    let psi_values = [PadicNumber::from_i64(1, p, 30), PadicNumber::from_i64(-1, p, 30), teich2];
    let mut grid = 0;
    for k in [4u32, 6] {
        for eps in [1i64, -1] {
            let eps_p = PadicNumber::from_i64(eps, p, 30);
            for a_p in [1i64, 2, 3, 7] {
                let (alpha, beta) = ordinary_roots(&BigInt::from(a_p), k, &eps_p, kk).map_err(|e| e.to_string())?;
                for psi_p in &psi_values {
                    let one = eps_p.mul(psi_p).congruent(&PadicNumber::from_i64(1, p, 30), 20);
                    for s in 1..=(2 * k as i64 - 2) {
                        for r in 0..3 {
                            for kind in [MultiplierKind::E, MultiplierKind::EPrime] {
                                let m = interp_multiplier(kind, s, r, &alpha, &beta, psi_p, &eps_p, k).map_err(|e| e.to_string())?;
                                ensure(m.vanishes == multiplier_vanishes(kind, s, k, r, one), || format!("{:?} at s={} r={} a_p={}", kind, s, r, a_p))?;
                                grid += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    // constructed instances for the exceptional and unfortunate flags
    let one = DirichletCharacter::trivial(1);
    let psi = psi7();
    let quad = DirichletCharacter::new(5, 4).unwrap();
    let chi37 = DirichletCharacter::new(37, 2).unwrap();
    let cls = |j: i64, psi: &DirichletCharacter, chi: &DirichletCharacter| classify_point(j, &input(psi, &one, chi)).map_err(|e| e.to_string());
    let c = cls(22, &psi, &one)?;
    ensure(c.critical && c.delta == Some(1) && c.m == 2 && !c.exceptional && !c.e_vanishes && !c.e_prime_vanishes, || format!("reference point: {:?}", c))?;
    ensure(c.unfortunate.as_ref().is_some_and(|u| !u.unfortunate && u.witness.is_some()), || String::from("reference point has no c witness"))?;
    let c = cls(16, &one, &one)?;
    ensure(c.exceptional && c.e_prime_vanishes, || format!("j = k, chi = 1, eps psi(p) = 1: {:?}", c))?;
    ensure(!cls(15, &one, &one)?.exceptional, || String::from("exceptional away from j = k"))?;
    ensure(!cls(16, &psi, &one)?.exceptional, || String::from("exceptional with psi(p) != 1"))?;
    ensure(!cls(16, &one, &chi37)?.exceptional, || String::from("exceptional with chi ramified"))?;
    let c = cls(16, &quad, &one)?;
    ensure(c.unfortunate.as_ref().is_some_and(|u| u.unfortunate && u.obstruction.is_some()), || format!("quadratic eps psi at j = k: {:?}", c.unfortunate))?;
    let c = cls(18, &quad, &one)?;
    ensure(c.unfortunate.as_ref().is_some_and(|u| !u.unfortunate), || String::from("quadratic eps psi away from j = k"))?;
    Ok(format!("{} criticality points, {} multiplier cases, 7 constructed instances", n, grid))
}

fn c10_galois(sh: &Shared) -> Outcome {
    let t = Instant::now();
    let gens: Vec<Mat3> = sl2_generators(7).iter().map(|g| sym2_mod_p(g, 7)).collect();
    let h1 = h1_brute_force(&gens, 7, false).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    ensure(h1.h1 == 0, || format!("h1 = {} on a group of order {}", h1.h1, h1.order))?;
    ensure(secs <= 120.0, || format!("h1 took {:.1} s", secs))?;
    let one = DirichletCharacter::trivial(1);
    let tau = find_tau(37, 1, &psi7(), &one).map_err(|e| format!("find_tau(37, 7.2): {}", e))?;
    ensure(find_tau(37, 1, &DirichletCharacter::trivial(7), &one).is_err(), || String::from("find_tau succeeded for trivial psi"))?;
    let scan = prime_scan(37, &sh.h, 1, &one, &psi7(), 10_000).map_err(|e| e.to_string())?;
    ensure(!scan.accepted.is_empty(), || String::from("no Kolyvagin primes up to 10^4"))?;
    let red = FpReduction::new(37).map_err(|e| e.to_string())?;
    for m in &scan.accepted {
        // Smith form over Z of a lift of A - 1: the cokernel mod 37 is cyclic
        let rows: Vec<Vec<BigInt>> = (0..3).map(|i| (0..3).map(|j| BigInt::from(m.a[i][j] as i64 - if i == j { 1 } else { 0 })).collect()).collect();
        let inv = smith_invariants(&rows);
        let p_divisible = 3 - inv.len() + inv.iter().filter(|d| (*d % 37u32).is_zero()).count();
        ensure(m.l % 37 == 1 && p_divisible <= 1 && m.t_prime % 37 != 1, || format!("l = {} fails Smith re-verification ({:?})", m.l, inv))?;
        ensure(frobenius_matches_euler(m, &sh.h, &psi7(), &red).map_err(|e| e.to_string())?, || format!("l = {}: model does not match the Euler factor", m.l))?;
    }
    Ok(format!("h1 = 0 (order {}, {:.2} s); tau from u = {}; {} scan witnesses re-verified, {} ambiguous", h1.order, secs, tau.u, scan.accepted.len(), scan.ambiguous.len()))
}

fn runner_1000() -> TestRunner {
    TestRunner::new_with_rng(Config { failure_persistence: None, ..Config::with_cases(1000) }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c11_properties() -> Outcome {
    let forms: Vec<QExpansion> = SUPPORTED_WEIGHTS.iter().map(|&k| level1_eigenform(k, 400).unwrap()).collect();
    let mut done = Vec::new();

    let strat = (0..forms.len(), 1u64..20, 1u64..20, prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..4);
    runner_1000()
        .run(&strat, |(idx, m, n, p, r)| {
            let f = &forms[idx];
            if gcd_u64(m, n) == 1 {
                prop_assert_eq!(f.coeff((m * n) as usize).clone(), f.coeff(m as usize) * f.coeff(n as usize));
            }
            let mut r = r;
            while p.pow(r + 1) > 400 {
                r -= 1;
            }
            let pk = num_traits::pow(BigInt::from(p), (f.weight - 1) as usize);
            let c = |e: u32| f.coeff(p.pow(e) as usize);
            prop_assert_eq!(c(r + 1).clone(), c(1) * c(r) - pk * c(r - 1));
            Ok(())
        })
        .map_err(|e| format!("Hecke relations: {}", e))?;
    done.push("Hecke relations");

    let primitive: Vec<DirichletCharacter> =
        (3..64u64).flat_map(|n| (1..n).filter(move |&i| gcd_u64(i, n) == 1).map(move |i| DirichletCharacter::new(n, i).unwrap())).filter(|c| c.is_primitive()).collect();
    runner_1000()
        .run(&prop::sample::select(primitive), |chi| {
            let g = gauss_sum(&chi);
            let nn = &g * &g.conj();
            prop_assert_eq!(nn, Cyclotomic::from_int(1, chi.modulus() as i64).promote(g.order()));
            Ok(())
        })
        .map_err(|e| format!("Gauss sums: {}", e))?;
    done.push("Gauss-sum norms");

    let chars: Vec<DirichletCharacter> = (2..40u64).flat_map(|n| (1..n).filter(move |&i| gcd_u64(i, n) == 1).map(move |i| DirichletCharacter::new(n, i).unwrap())).collect();
    runner_1000()
        .run(&(prop::sample::select(chars), 0u32..6), |(chi, m)| {
            // a weight of the wrong parity
            let m = 2 * m + if chi.parity() == 1 { 1 } else { 2 };
            prop_assert!(gen_bernoulli(m, &chi).value.is_zero(), "B_{} of {}", m, chi.label());
            Ok(())
        })
        .map_err(|e| format!("Bernoulli parity: {}", e))?;
    done.push("Bernoulli parity vanishing");

    runner_1000()
        .run(&(-10_000i64..10_000, 1i64..1000, -10_000i64..10_000, 1i64..1000), |(a, b, c, d)| {
            let p = 96;
            let (x, y) = (q(a, b), q(c, d));
            let (bx, by) = (Ball::from_rational(&x, p), Ball::from_rational(&y, p));
            prop_assert!((&bx + &by).contains(&Ball::from_rational(&(&x + &y), p + 64)));
            prop_assert!((&bx * &by).contains(&Ball::from_rational(&(&x * &y), p + 64)));
            if !y.is_zero() {
                prop_assert!(bx.div(&by).contains(&Ball::from_rational(&(&x / &y), p + 64)));
            }
            prop_assert!(bx.sqr().sqrt().overlaps(&Ball::from_rational(&x.abs(), p)));
            Ok(())
        })
        .map_err(|e| format!("ball containment: {}", e))?;
    done.push("ball containment");

    let primes: Vec<u64> = (2..60).filter(|&n| is_prime_u64(n)).collect();
    let strat = (prop::sample::select(primes), 0i64..1000, -50i64..50, -50i64..50, 2u32..20).prop_filter("simple root", |(p, r0, b, c, _)| {
        let r0 = r0 % *p as i64;
        (r0 * r0 + b * r0 + c).rem_euclid(*p as i64) != 0
    });
    runner_1000()
        .run(&strat, |(p, r0, b, c, kk)| {
            let r0 = r0 % p as i64;
            let f = ExactPoly::from_ints(&[-r0 * c, c - r0 * b, b - r0, 1]);
            let root = hensel_root(&f, p, &BigInt::from(r0), kk).unwrap();
            let mut val = PadicNumber::from_i64(0, p, kk as i64 + 4);
            let mut pw = PadicNumber::from_i64(1, p, kk as i64 + 4);
            for co in &f.integer_coeffs().unwrap() {
                val = val.add(&pw.mul(&PadicNumber::from_integer(co, p, kk as i64 + 4)));
                pw = pw.mul(&root);
            }
            prop_assert!(val.congruent(&PadicNumber::from_i64(0, p, kk as i64), kk as i64));
            prop_assert_eq!(root.residue(), Some(r0 as u64));
            Ok(())
        })
        .map_err(|e| format!("Hensel residuals: {}", e))?;
    done.push("Hensel residuals");

    Ok(format!("{} x 1000 cases: {}", done.len(), done.join(", ")))
}

#[test]
fn acceptance() {
    let f = level1_eigenform(16, N_MAX).unwrap();
    let h = f.hecke_data();
    let mut sh = Shared { f, h, pet: None, ratio: None };
    let mut lines = Vec::new();
    let run = |id: u32, name: &'static str, gating: bool, out: &mut Vec<Line>, body: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let r = body();
        let (ok, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let line = Line { id, name, gating, ok, detail, elapsed: t.elapsed() };
        println!(
            "{} [{}] {}{}: {} ({:.1} s)",
            if line.ok { "PASS" } else { "FAIL" },
            line.id,
            line.name,
            if line.gating { "" } else { " (stretch, non-gating)" },
            line.detail,
            line.elapsed.as_secs_f64()
        );
        out.push(line);
    };
    run(1, "Petersson norm", true, &mut lines, &mut || c1_petersson(&mut sh));
    run(2, "ratio at s = 22", true, &mut lines, &mut || c2_ratio(&mut sh));
    run(2, "ratio to 110 digits with exact recovery", false, &mut lines, &mut || c2_stretch(&sh));
    run(3, "factor audit", true, &mut lines, &mut c3_factor);
    run(4, "p = 37 pipeline", true, &mut lines, &mut || c4_p37(&sh));
    run(5, "p = 67 pipeline", true, &mut lines, &mut || c5_p67(&sh));
    run(6, "p = 439 pipeline", true, &mut lines, &mut || c6_p439(&sh));
    run(7, "AFE against direct summation", true, &mut lines, &mut || c7_cross(&sh));
    run(8, "identity suite", true, &mut lines, &mut || c8_identities(&sh));
    run(9, "classifier suite", true, &mut lines, &mut c9_classifier);
    run(10, "Galois suite", true, &mut lines, &mut || c10_galois(&sh));
    run(11, "property suites", true, &mut lines, &mut c11_properties);
    let failed: Vec<String> = lines.iter().filter(|l| l.gating && !l.ok).map(|l| format!("[{}] {}", l.id, l.name)).collect();
    println!("{} of {} gating criteria pass", lines.iter().filter(|l| l.gating && l.ok).count(), lines.iter().filter(|l| l.gating).count());
    assert!(failed.is_empty(), "failed: {}", failed.join(", "));
}
