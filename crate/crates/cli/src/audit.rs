//! Prime support of `(A + B sqrt(d)) / D` in `Q(sqrt d)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use symsq_core::exact::{factor_integer, kronecker, ExactPoly, PrimeFactor, QuadraticNumber};
use symsq_core::padic::hensel_root;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Net valuations at the primes above one rational prime `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeAbove {
    pub q: BigUint,
    pub splitting: Splitting,
    /// `v_P(A + B sqrt d) - v_P(D)` for each prime `P | q`.
    pub net: Vec<i64>,
    pub probable: bool,
}

#[derive(Clone, Debug)]
pub struct Audit {
    pub norm: BigInt,
    pub norm_factors: Vec<PrimeFactor>,
    pub denominator_factors: Vec<PrimeFactor>,
    pub primes: Vec<PrimeAbove>,
}

impl Audit {
    /// Rational primes below a prime ideal dividing the reduced numerator.
    pub fn numerator_support(&self) -> Vec<BigUint> {
        self.primes.iter().filter(|p| p.net.iter().any(|&v| v > 0)).map(|p| p.q.clone()).collect()
    }

    pub fn denominator_support(&self) -> Vec<BigUint> {
        self.primes.iter().filter(|p| p.net.iter().any(|&v| v < 0)).map(|p| p.q.clone()).collect()
    }
}

fn vq(n: &BigInt, q: &BigUint) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let qi = BigInt::from_biguint(Sign::Plus, q.clone());
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &qi).is_zero() {
        m /= &qi;
        v += 1;
    }
    v
}

fn splitting(disc: i64, q: &BigUint, v_norm: u32) -> Option<Splitting> {
    match q.to_u64() {
        Some(q) => Some(match kronecker(disc, q) {
            0 => Splitting::Ramified,
            -1 => Splitting::Inert,
            _ => Splitting::Split,
        }),
        // an odd norm valuation rules out inert, and `q` does not divide `disc`
        None if v_norm % 2 == 1 => Some(Splitting::Split),
        None => None,
    }
}

/// `v_P(A + B r)` for the prime `P = (q, sqrt d - r)`, known exactly when below `bound`.
fn split_valuation(a: &BigInt, b: &BigInt, d: i64, q: u64, bound: u32) -> Result<u32, String> {
    if q > 10_000_000 {
        return Err(format!("splitting {} is beyond the search range", q));
    }
    let r0 = (0..q)
        .find(|&r| ((r as u128 * r as u128) as i128 - d as i128).rem_euclid(q as i128) == 0)
        .ok_or_else(|| format!("{} does not split", q))?;
    let f = ExactPoly::from_ints(&[-d, 0, 1]);
    let r = hensel_root(&f, q, &BigInt::from(r0), bound + 1).map_err(|e| e.to_string())?;
    let r = r.to_integer().ok_or("root has no integer representative")?;
    let m = num_traits::pow(BigInt::from(q), (bound + 1) as usize);
    let x = ((a + b * &r) % &m + &m) % &m;
    Ok(vq(&x, &BigUint::from(q)).min(bound))
}

pub fn audit(x: &QuadraticNumber) -> Result<Audit, String> {
    let d = x.d();
    let (da, db) = (x.a.denom().clone(), x.b.denom().clone());
    let den = num_integer::Integer::lcm(&da, &db);
    let a = x.a.numer() * (&den / &da);
    let b = x.b.numer() * (&den / &db);
    let norm = &a * &a - BigInt::from(d) * &b * &b;
    if norm.is_zero() {
        return Err(String::from("zero numerator"));
    }
    let norm_factors = factor_integer(&norm.magnitude().clone()).map_err(|e| e.to_string())?;
    let denominator_factors = factor_integer(den.magnitude()).map_err(|e| e.to_string())?;
    let disc = QuadraticNumber::discriminant(d);
    let mut qs: BTreeMap<BigUint, bool> = BTreeMap::new();
    for f in norm_factors.iter().chain(denominator_factors.iter()) {
        let e = qs.entry(f.prime.clone()).or_insert(false);
        *e |= f.probable;
    }
    let mut primes = Vec::new();
    for (q, probable) in qs {
        let vn = vq(&norm, &q) as i64;
        let vd = vq(&den, &q) as i64;
        let sp = splitting(disc, &q, vn as u32).ok_or_else(|| format!("cannot decide how {} splits", q))?;
        let net = match sp {
            Splitting::Ramified => vec![vn - 2 * vd],
            Splitting::Inert => vec![vn / 2 - vd],
            Splitting::Split if vd == 0 => {
                // only the sum is needed to decide support
                if vn == 0 {
                    vec![0, 0]
                } else {
                    vec![vn, 0]
                }
            }
            Splitting::Split => {
                let qq = q.to_u64().ok_or("large split prime in the denominator")?;
                let v1 = split_valuation(&a, &b, d, qq, vn as u32)? as i64;
                vec![v1 - vd, vn - v1 - vd]
            }
        };
        primes.push(PrimeAbove { q, splitting: sp, net, probable });
    }
    Ok(Audit { norm, norm_factors, denominator_factors, primes })
}

pub fn format_factors(f: &[PrimeFactor]) -> String {
    if f.is_empty() {
        return String::from("1");
    }
    f.iter()
        .map(|p| {
            let base = if p.probable { format!("{}(prp)", p.prime) } else { p.prime.to_string() };
            if p.exponent == 1 {
                base
            } else {
                format!("{}^{}", base, p.exponent)
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}
