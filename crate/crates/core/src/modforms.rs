//! q-expansions of level one forms, Hecke recursions and coefficient ingestion.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dirichlet::DirichletCharacter;
use crate::exact::{bernoulli_numbers, primes_up_to, small_factor};
use crate::{Error, Result};

/// Truncated q-expansion `a_0 + a_1 q + ... + a_n q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: u32,
    pub level: u64,
    pub nebentypus: DirichletCharacter,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(weight: u32, level: u64, nebentypus: DirichletCharacter, coeffs: Vec<BigInt>) -> Self {
        QExpansion { weight, level, nebentypus, coeffs }
    }

    /// Truncation length `n`.
    pub fn len(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coeff(&self, m: usize) -> &BigInt {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.len() > 1 && self.coeffs[1].is_one()
    }

    /// Prime data `l -> a_l` for primes up to the truncation.
    pub fn hecke_data(&self) -> HeckeData {
        let ap = primes_up_to(self.len() as u64).into_iter().map(|p| (p, self.coeffs[p as usize].clone())).collect();
        HeckeData { weight: self.weight, nebentypus: self.nebentypus.clone(), ap }
    }

    /// Violations of multiplicativity and the prime-power recursion among
    /// coefficients indexed by numbers whose prime factors are at most `bound`.
    pub fn hecke_violations(&self, bound: u64) -> Vec<HeckeViolation> {
        let n = self.len() as u64;
        let mut out = Vec::new();
        for m in 2..=n {
            let f = small_factor(m);
            if f.iter().any(|&(p, _)| p > bound) {
                continue;
            }
            if f.len() > 1 {
                let (p, e) = f[0];
                let u = p.pow(e);
                let v = m / u;
                let prod = &self.coeffs[u as usize] * &self.coeffs[v as usize];
                if prod != self.coeffs[m as usize] {
                    out.push(HeckeViolation { n: m, expected: prod, found: self.coeffs[m as usize].clone() });
                }
            } else if f[0].1 >= 2 {
                let (p, e) = f[0];
                let Some(eps) = real_character_value(&self.nebentypus, p) else { continue };
                let a = &self.coeffs[p as usize];
                let prev = &self.coeffs[p.pow(e - 1) as usize];
                let prev2 = &self.coeffs[p.pow(e - 2) as usize];
                let expect = a * prev - num_traits::pow(BigInt::from(p), (self.weight - 1) as usize) * eps * prev2;
                if expect != self.coeffs[m as usize] {
                    out.push(HeckeViolation { n: m, expected: expect, found: self.coeffs[m as usize].clone() });
                }
            }
        }
        out
    }

    /// First prime `l <= bound` with `a_l^2 > 4 l^(k-1)`, if any.
    pub fn deligne_violation(&self, bound: u64) -> Option<u64> {
        let lim = bound.min(self.len() as u64);
        primes_up_to(lim).into_iter().find(|&p| {
            let a = &self.coeffs[p as usize];
            a * a > BigInt::from(4) * num_traits::pow(BigInt::from(p), (self.weight - 1) as usize)
        })
    }

    /// CSV rows `n,a_n` for `n = 1 .. len`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,a_n\n");
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            s.push_str(&format!("{},{}\n", n, a));
        }
        s
    }
}

/// A failed Hecke relation at index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeViolation {
    pub n: u64,
    pub expected: BigInt,
    pub found: BigInt,
}

fn real_character_value(chi: &DirichletCharacter, a: u64) -> Option<BigInt> {
    match chi.exponent(a as i64) {
        None => Some(BigInt::zero()),
        Some(0) => Some(BigInt::one()),
        Some(e) if 2 * e == chi.order() => Some(-BigInt::one()),
        _ => None,
    }
}

/// Hecke eigenvalues at primes for a normalized eigenform with real nebentypus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeData {
    pub weight: u32,
    pub nebentypus: DirichletCharacter,
    pub ap: BTreeMap<u64, BigInt>,
}

impl HeckeData {
    pub fn new(weight: u32, nebentypus: DirichletCharacter, ap: BTreeMap<u64, BigInt>) -> Result<Self> {
        if nebentypus.order() > 2 {
            return Err(Error::InvalidCharacter(String::from("integral Hecke data needs a real nebentypus")));
        }
        Ok(HeckeData { weight, nebentypus, ap })
    }

    /// Primes up to `bound` without an eigenvalue.
    pub fn missing(&self, bound: u64) -> Vec<u64> {
        primes_up_to(bound).into_iter().filter(|p| !self.ap.contains_key(p)).collect()
    }

    /// `a_{l^0}, ..., a_{l^r}` from `a_{l^{j+1}} = a_l a_{l^j} - l^(k-1) eps(l) a_{l^{j-1}}`.
    pub fn prime_power_table(&self, l: u64, r: u32) -> Result<Vec<BigInt>> {
        let a = self.ap.get(&l).ok_or_else(|| Error::MissingPrimes(vec![l]))?;
        let eps = real_character_value(&self.nebentypus, l)
            .ok_or_else(|| Error::InvalidCharacter(String::from("nebentypus is not real")))?;
        let c = num_traits::pow(BigInt::from(l), (self.weight - 1) as usize) * eps;
        let mut t = vec![BigInt::one()];
        if r >= 1 {
            t.push(a.clone());
        }
        for j in 2..=r as usize {
            let v = a * &t[j - 1] - &c * &t[j - 2];
            t.push(v);
        }
        Ok(t)
    }

    /// `a_m` by multiplicativity.
    pub fn coefficient(&self, m: u64) -> Result<BigInt> {
        let mut acc = BigInt::one();
        let f = small_factor(m);
        let missing: Vec<u64> = f.iter().map(|&(p, _)| p).filter(|p| !self.ap.contains_key(p)).collect();
        if !missing.is_empty() {
            return Err(Error::MissingPrimes(missing));
        }
        for (p, e) in f {
            acc *= &self.prime_power_table(p, e)?[e as usize];
        }
        Ok(acc)
    }

    /// `a_{d^2}` for `d = 1 .. n` (index 0 unused).
    pub fn square_coefficients(&self, n: u64) -> Result<Vec<BigInt>> {
        let missing = self.missing(n);
        if !missing.is_empty() {
            return Err(Error::MissingPrimes(missing));
        }
        let mut tables: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
        for p in primes_up_to(n) {
            let mut r = 0u32;
            let mut q = 1u64;
            while q <= n / p {
                q *= p;
                r += 1;
            }
            tables.insert(p, self.prime_power_table(p, 2 * r)?);
        }
        let mut out = vec![BigInt::zero(); n as usize + 1];
        for d in 1..=n {
            let mut acc = BigInt::one();
            for (p, e) in small_factor(d) {
                acc *= &tables[&p][2 * e as usize];
            }
            out[d as usize] = acc;
        }
        Ok(out)
    }
}

/// All `a_m` for `m <= n` from prime data.
pub fn extend_multiplicatively(h: &HeckeData, n: u64, level: u64) -> Result<QExpansion> {
    let missing = h.missing(n);
    if !missing.is_empty() {
        return Err(Error::MissingPrimes(missing));
    }
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[1] = BigInt::one();
    for m in 2..=n {
        coeffs[m as usize] = h.coefficient(m)?;
    }
    Ok(QExpansion::new(h.weight, level, h.nebentypus.clone(), coeffs))
}

/// Coefficients of `prod_{m>=1} (1 - q^m)` up to `q^n` (Euler's pentagonal theorem).
pub fn euler_product(n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 > n {
            break;
        }
        c[g1] = sign;
        if g2 <= n {
            c[g2] = sign;
        }
        k += 1;
    }
    c
}

/// `tau(1) .. tau(n)` with index 0 set to zero, from `Delta = q prod (1 - q^m)^24`.
pub fn delta(n: usize) -> Vec<BigInt> {
    // f = P^24 with P sparse: m f_m = sum_j (25 j - m) P_j f_{m-j}.
    let p = euler_product(n);
    let nz: Vec<(usize, i64)> = p.iter().enumerate().skip(1).filter(|(_, &v)| v != 0).map(|(j, &v)| (j, v)).collect();
    let mut f = vec![BigInt::zero(); n];
    if n == 0 {
        return vec![BigInt::zero()];
    }
    f[0] = BigInt::one();
    for m in 1..n {
        let mut acc = BigInt::zero();
        for &(j, pj) in &nz {
            if j > m {
                break;
            }
            let c = (25 * j as i64 - m as i64) * pj;
            if c != 0 {
                acc += &f[m - j] * c;
            }
        }
        f[m] = acc / BigInt::from(m);
    }
    let mut out = vec![BigInt::zero(); n + 1];
    out[1..].clone_from_slice(&f);
    out
}

/// `sigma_r(m)` for `m = 0 .. n` (index 0 unused).
pub fn divisor_sums(r: u32, n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let dp = num_traits::pow(BigInt::from(d), r as usize);
        let mut m = d;
        while m <= n {
            s[m] += &dp;
            m += d;
        }
    }
    s
}

/// Eisenstein series `E_k = 1 - (2k / B_k) sum sigma_{k-1}(m) q^m` up to `q^n`.
pub fn eisenstein(k: u32, n: usize) -> Result<Vec<BigInt>> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k));
    }
    let b = &bernoulli_numbers(k as usize)[k as usize];
    let c = num_rational::BigRational::from_integer(BigInt::from(-2 * k as i64)) / b;
    if !c.is_integer() {
        return Err(Error::UnsupportedWeight(k));
    }
    let c = c.to_integer();
    let s = divisor_sums(k - 1, n);
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = BigInt::one();
    for m in 1..=n {
        out[m] = &c * &s[m];
    }
    Ok(out)
}

/// Coefficient of `q^m` in `a * b`.
fn product_coeff(a: &[BigInt], b: &[BigInt], m: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=m {
        if !a[j].is_zero() && !b[m - j].is_zero() {
            acc += &a[j] * &b[m - j];
        }
    }
    acc
}

/// Full exact product of two series truncated at `q^n`.
pub fn series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..=n).map(|m| product_coeff(a, b, m)).collect()
}

/// Weights with a one-dimensional cusp space in level one.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// The normalized cusp eigenform of level one and weight `k`, as `E_{k-12} Delta`.
///
/// Coefficients at primes come from the exact convolution; the others follow
/// from the Hecke relations, which the eigenform satisfies.
pub fn level1_eigenform(k: u32, n: usize) -> Result<QExpansion> {
    if !SUPPORTED_WEIGHTS.contains(&k) {
        return Err(Error::UnsupportedWeight(k));
    }
    if n == 0 {
        return Err(Error::Domain(String::from("truncation must be positive")));
    }
    let d = delta(n);
    let trivial = DirichletCharacter::trivial(1);
    if k == 12 {
        return Ok(QExpansion::new(k, 1, trivial, d));
    }
    let e = eisenstein(k - 12, n)?;
    let ap: BTreeMap<u64, BigInt> =
        primes_up_to(n as u64).into_iter().map(|p| (p, product_coeff(&e, &d, p as usize))).collect();
    let h = HeckeData::new(k, trivial, ap)?;
    extend_multiplicatively(&h, n as u64, 1)
}

/// Parsed coefficient file plus warnings from the Hecke-consistency check.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub form: QExpansion,
    pub warnings: Vec<String>,
}

/// Parses CSV rows `n,a_n` (optional header, `n` contiguous from 1) and checks
/// the Hecke relations on indices built from primes up to 100.
pub fn parse_coeffs(text: &str, weight: u32, level: u64, nebentypus: Option<DirichletCharacter>) -> Result<Ingested> {
    let mut coeffs = vec![BigInt::zero()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let (Some(n), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse { line: lineno, msg: String::from("expected two fields n,a_n") });
        };
        let Ok(n) = n.parse::<u64>() else {
            if coeffs.len() == 1 && n.chars().any(|c| c.is_alphabetic()) {
                continue;
            }
            return Err(Error::Parse { line: lineno, msg: format!("bad index {:?}", n) });
        };
        if n != coeffs.len() as u64 {
            return Err(Error::Parse { line: lineno, msg: format!("index {} out of sequence, expected {}", n, coeffs.len()) });
        }
        let a = crate::exact::bigint_from_str(a)
            .ok_or_else(|| Error::Parse { line: lineno, msg: format!("bad coefficient {:?}", a) })?;
        coeffs.push(a);
    }
    if coeffs.len() == 1 {
        return Err(Error::Parse { line: 1, msg: String::from("no coefficients") });
    }
    let neb = nebentypus.unwrap_or_else(|| DirichletCharacter::trivial(level));
    let form = QExpansion::new(weight, level, neb, coeffs);
    let mut warnings = Vec::new();
    if !form.is_normalized() {
        warnings.push(format!("a_1 = {} (form is not normalized)", form.coeff(1)));
    }
    for v in form.hecke_violations(100) {
        warnings.push(format!("Hecke relation fails at n = {}: expected {}, found {}", v.n, v.expected, v.found));
    }
    if warnings.iter().any(|w| w.starts_with("Hecke")) {
        warnings.push(String::from("data may not be an eigenform"));
    }
    Ok(Ingested { form, warnings })
}

/// `|a_l| / (2 l^((k-1)/2))` as an f64, for reporting.
pub fn deligne_ratio(a: &BigInt, l: u64, k: u32) -> f64 {
    let af = a.abs().to_f64().unwrap_or(f64::INFINITY);
    af / (2.0 * libm::pow(l as f64, (k as f64 - 1.0) / 2.0))
}

impl core::fmt::Display for QExpansion {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().enumerate().skip(1).take(8).map(|(n, a)| format!("{} q^{}", a, n)).collect();
        write!(f, "weight {} level {}: {} + O(q^{})", self.weight, self.level, shown.join(" + "), self.len() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_delta(n: usize) -> Vec<BigInt> {
        // q prod (1 - q^m)^24 by repeated multiplication.
        let mut f = vec![BigInt::zero(); n + 1];
        f[0] = BigInt::one();
        for m in 1..=n {
            for _ in 0..24 {
                for i in (m..=n).rev() {
                    let t = f[i - m].clone();
                    f[i] -= t;
                }
            }
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for i in 1..=n {
            out[i] = f[i - 1].clone();
        }
        out
    }

    #[test]
    fn ramanujan_tau() {
        let d = delta(40);
        assert_eq!(d[1], BigInt::from(1));
        assert_eq!(d[2], BigInt::from(-24));
        assert_eq!(d[3], BigInt::from(252));
        assert_eq!(d[4], BigInt::from(-1472));
        assert_eq!(d[5], BigInt::from(4830));
        assert_eq!(d, naive_delta(40));
    }

    #[test]
    fn weight_sixteen() {
        let f = level1_eigenform(16, 200).unwrap();
        assert_eq!(f.coeff(1), &BigInt::one());
        assert_eq!(f.coeff(2), &BigInt::from(216));
        assert_eq!(f.coeff(4), &BigInt::from(13888));
        let full = series_mul(&eisenstein(4, 200).unwrap(), &delta(200), 200);
        assert_eq!(f.coeffs(), &full[..]);
        assert!(f.hecke_violations(200).is_empty());
        assert_eq!(f.deligne_violation(200), None);
    }

    #[test]
    fn all_weights_match_products() {
        let n = 60;
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let d = delta(n);
        let e8 = series_mul(&e4, &e4, n);
        let e10 = series_mul(&e4, &e6, n);
        let e14 = series_mul(&e8, &e6, n);
        assert_eq!(e8, eisenstein(8, n).unwrap());
        for (k, e) in [(18, &e6), (20, &e8), (22, &e10), (26, &e14)] {
            assert_eq!(level1_eigenform(k, n).unwrap().coeffs(), &series_mul(e, &d, n)[..], "k = {}", k);
        }
        assert_eq!(level1_eigenform(14, 5), Err(Error::UnsupportedWeight(14)));
        assert_eq!(level1_eigenform(24, 5), Err(Error::UnsupportedWeight(24)));
    }

    #[test]
    fn extension_and_squares() {
        let f = level1_eigenform(16, 100).unwrap();
        let h = f.hecke_data();
        let g = extend_multiplicatively(&h, 100, 1).unwrap();
        assert_eq!(f, g);
        let sq = h.square_coefficients(10).unwrap();
        let big = level1_eigenform(16, 100).unwrap();
        for d in 1..=10usize {
            assert_eq!(sq[d], *big.coeff(d * d));
        }
        let mut partial = h.clone();
        partial.ap.remove(&7);
        assert_eq!(extend_multiplicatively(&partial, 10, 1), Err(Error::MissingPrimes(vec![7])));
    }

    #[test]
    fn ingestion() {
        let d = level1_eigenform(12, 10).unwrap();
        let text = d.to_csv();
        let got = parse_coeffs(&text, 12, 1, None).unwrap();
        assert_eq!(got.form, d);
        assert!(got.warnings.is_empty());
        assert!(matches!(parse_coeffs("", 12, 1, None), Err(Error::Parse { .. })));
        let bad = text.replace("6,-6048", "6,1");
        let got = parse_coeffs(&bad, 12, 1, None).unwrap();
        assert!(got.warnings.iter().any(|w| w.contains("n = 6")));
        assert!(matches!(parse_coeffs("1,1\n3,5\n", 12, 1, None), Err(Error::Parse { line: 2, .. })));
    }
}
