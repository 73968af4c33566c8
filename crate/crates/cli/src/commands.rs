//! One function per subcommand; each returns a finished report.

use std::fs;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use symsq_core::exact::QuadraticNumber;
use symsq_core::modforms::{level1_eigenform, parse_coeffs};
use symsq_core::padic::PadicEmbedding;
use symsq_core::real::{Ball, CBall, Mag};
use symsq_core::symsq::recognize_quadratic;

use crate::charspec;
use crate::config::{parse_primes, PrimeSpec, RunConfig};
use crate::pipeline::*;
use crate::report::{run_section, Entry, Origin, Report};
use crate::CliError;

fn finish(mut r: Report, start: Instant) -> Report {
    r.finish(start.elapsed().as_millis() as u64);
    r
}

fn new_report(cmd: &str, cfg: &RunConfig) -> Report {
    Report::new(cmd, cfg.echo(), Some(cfg.char_echo.clone()))
}

pub fn eigenform(cfg: &RunConfig, n: usize, out: Option<&Path>) -> Result<Report, CliError> {
    let start = Instant::now();
    let f = level1_eigenform(cfg.form.weight(), n)?;
    if let Some(path) = out {
        fs::write(path, f.to_csv())?;
    }
    let form = Form { h: f.hecke_data(), f, warnings: Vec::new() };
    let mut r = new_report("eigenform", cfg);
    let mut sec = eigenform_section(cfg, &form);
    if let Some(path) = out {
        sec.value("csv", path.display());
    }
    r.sections.push(sec);
    Ok(finish(r, start))
}

/// Reads a coefficient file; with `compare`, checks it against the built-in form.
pub fn ingest(cfg: &RunConfig, path: &Path, compare: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
    let ing = parse_coeffs(&text, cfg.form.weight(), cfg.form.level(), None)?;
    let n = ing.form.len();
    let form = Form { h: ing.form.hecke_data(), f: ing.form, warnings: ing.warnings };
    let mut r = new_report("ingest", cfg);
    let mut sec = eigenform_section(cfg, &form);
    sec.value("path", path.display());
    if compare {
        let e = match level1_eigenform(cfg.form.weight(), n) {
            Ok(b) => {
                let first = (1..=n).find(|&i| b.coeff(i) != form.f.coeff(i));
                Entry::compare(
                    "builtin_match",
                    Origin::Oracle,
                    format!("{} coefficients equal", n),
                    match first {
                        None => String::from("all equal"),
                        Some(i) => format!("differs at n = {}", i),
                    },
                    first.is_none(),
                )
            }
            Err(e) => Entry::failed("builtin_match", e),
        };
        sec.push(e);
    }
    r.sections.push(sec);
    Ok(finish(r, start))
}

pub fn lvalue(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let mut r = new_report("lvalue", cfg);
    let mut out = None;
    r.sections.push(lvalue_section(cfg, &form, &cfg.psi, cfg.s, &mut out));
    Ok(finish(r, start))
}

pub fn ratio(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let golden = cfg.is_reference_setup() && cfg.s == 22;
    let mut r = new_report("ratio", cfg);
    let (mut pet, mut l) = (None, None);
    let (ps, ls) = std::thread::scope(|sc| {
        let a = sc.spawn(|| petersson_section(cfg, &form, &mut pet));
        let b = sc.spawn(|| lvalue_section(cfg, &form, &cfg.psi, cfg.s, &mut l));
        (a.join().expect("petersson thread"), b.join().expect("l-value thread"))
    });
    r.sections.push(ps);
    r.sections.push(ls);
    if let (Some(l), Some(p)) = (&l, &pet) {
        let mut exact = None;
        r.sections.push(ratio_section(cfg, form.f.weight, &cfg.psi, cfg.s, l, p, golden, &mut exact));
    }
    Ok(finish(r, start))
}

fn decimals(s: &str) -> u32 {
    s.split_once('.').map(|(_, f)| f.trim_end_matches(|c: char| !c.is_ascii_digit()).len() as u32).unwrap_or(0)
}

/// Decimal strings are read with a radius of one unit in their last place.
pub fn recognize(cfg: &RunConfig, re: &str, im: &str, height: &str) -> Result<Report, CliError> {
    let start = Instant::now();
    let bits = 64 + 4 * (re.len() + im.len()) as u32;
    let parse = |s: &str| -> Result<Ball, CliError> {
        let b = Ball::from_decimal_str(s, bits).ok_or_else(|| CliError::Usage(format!("not a decimal number: {:?}", s)))?;
        Ok(b.add_error(Mag::from_f64(10f64.powi(-(decimals(s) as i32)))))
    };
    let z = CBall::new(parse(re)?, parse(im)?);
    let h: BigInt = height.parse().map_err(|_| CliError::Usage(format!("bad height {:?}", height)))?;
    let mut r = new_report("recognize", cfg);
    r.sections.push(run_section("recognize", |sec| {
        sec.value("input", z.to_decimal_string(40));
        sec.value("d", cfg.field_d);
        sec.value("height", &h);
        match recognize_quadratic(&z, cfg.field_d, &h) {
            Some(q) => sec.push(Entry::info("recognized", q)),
            None => sec.push(Entry::info("recognized", "none").note("no relation within the height at this precision")),
        }
        Ok(())
    }));
    Ok(finish(r, start))
}

/// `A,B,D` for `(A + B sqrt d)/D`.
pub fn parse_ratio(text: &str, d: i64) -> Result<QuadraticNumber, CliError> {
    let bad = || CliError::Usage(format!("ratio: expected A,B,D, found {:?}", text));
    let parts: Vec<BigInt> = text.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [a, b, den] = <[BigInt; 3]>::try_from(parts).map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(QuadraticNumber::new(d, BigRational::new(a, den.clone()), BigRational::new(b, den)))
}

fn select_primes(cfg: &RunConfig, p: Option<u64>, gen: Option<&str>) -> Result<Vec<PrimeSpec>, CliError> {
    match (p, gen) {
        (None, None) => Ok(cfg.primes.clone()),
        (Some(p), None) => cfg
            .primes
            .iter()
            .find(|s| s.p == p)
            .cloned()
            .map(|s| vec![s])
            .ok_or_else(|| CliError::Usage(format!("no generator configured for p = {}; pass --gen a,b", p))),
        (p, Some(g)) => {
            let spec = parse_primes(&format!("{}:{}", p.unwrap_or(0), g))?.remove(0);
            let emb = PadicEmbedding::from_generator(&spec.generator(cfg.field_d), 1)
                .map_err(|e| CliError::Usage(format!("gen {}: {}", g, e)))?;
            if p.is_some_and(|p| p != emb.p()) {
                return Err(CliError::Usage(format!("gen {} lies above {}, not {}", g, emb.p(), spec.p)));
            }
            Ok(vec![PrimeSpec { p: emb.p(), ..spec }])
        }
    }
}

pub fn padic(cfg: &RunConfig, p: Option<u64>, gen: Option<&str>, ratio: Option<&str>) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let primes = select_primes(cfg, p, gen)?;
    let golden = cfg.is_reference_setup() && cfg.s == 22;
    let exact = match ratio {
        Some(t) => parse_ratio(t, cfg.field_d)?,
        None if golden => reference_ratio(),
        None => return Err(CliError::Usage(String::from("--ratio A,B,D is required outside the reference example"))),
    };
    let golden = golden && ratio.is_none_or(|_| exact == reference_ratio());
    let mut r = new_report("padic", cfg);
    for ps in &primes {
        r.sections.push(padic_section(cfg, &form, &cfg.psi, cfg.s, ps, Some(&exact), golden));
    }
    Ok(finish(r, start))
}

pub fn classify(cfg: &RunConfig, j: i64, chi: &str, p: Option<u64>) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let (chi, _) = charspec::from_label(chi).map_err(CliError::into_usage)?;
    let primes: Vec<u64> = match p {
        Some(p) => vec![p],
        None => cfg.primes.iter().map(|s| s.p).collect(),
    };
    let golden = cfg.is_reference_setup();
    let mut r = new_report("classify", cfg);
    r.sections.push(classification_section(&form, &cfg.psi, &chi, j, &primes, golden));
    Ok(finish(r, start))
}

pub fn primescan(cfg: &RunConfig, p: Option<u64>) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let primes: Vec<u64> = match p {
        Some(p) => vec![p],
        None => cfg.primes.iter().map(|s| s.p).collect(),
    };
    let mut r = new_report("primescan", cfg);
    r.sections.push(prime_scan_section(cfg, &form, &cfg.psi, &primes));
    Ok(finish(r, start))
}

pub fn htest(cfg: &RunConfig, p: Option<u64>) -> Result<Report, CliError> {
    let start = Instant::now();
    let form = load_form(cfg)?;
    let primes: Vec<u64> = match p {
        Some(p) => vec![p],
        None => cfg.primes.iter().map(|s| s.p).collect(),
    };
    let mut r = new_report("htest", cfg);
    r.sections.push(hypotheses_section(cfg, &form, &cfg.psi, &primes));
    Ok(finish(r, start))
}

pub fn reproduce(cfg: &RunConfig) -> Result<Report, CliError> {
    run_reproduce(cfg)
}
