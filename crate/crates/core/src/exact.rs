//! Exact arithmetic: rationals, cyclotomic fields `Q(zeta_n)`, quadratic
//! fields `Q(sqrt d)`, polynomials over cyclotomic fields and integer
//! factorization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub use num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

pub fn small_factor(n: u64) -> Vec<(u64, u32)> {
    let mut m = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    miller_rabin(&BigUint::from(n))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Integer coefficients (constant term first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d);
            num = div_monic(&num, &den);
        }
    }
    num
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let qlen = r.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = r[i + dd].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
        }
        q[i] = c;
    }
    q
}

/// Element of `Q(zeta_n)` in the power basis `1, z, ..., z^(phi(n)-1)`,
/// reduced modulo the n-th cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<BigRational>,
}

fn reduce_mod(mut c: Vec<BigRational>, modulus: &[BigInt]) -> Vec<BigRational> {
    let deg = modulus.len() - 1;
    if c.len() > deg {
        for i in (deg..c.len()).rev() {
            let lead = core::mem::replace(&mut c[i], BigRational::zero());
            if lead.is_zero() {
                continue;
            }
            for (j, mj) in modulus.iter().enumerate().take(deg) {
                if !mj.is_zero() {
                    c[i - deg + j] -= &lead * BigRational::from_integer(mj.clone());
                }
            }
        }
        c.truncate(deg);
    }
    c.resize(deg, BigRational::zero());
    c
}

impl Cyclotomic {
    /// Builds from an arbitrary-length coefficient vector in powers of `zeta_n`.
    pub fn from_coeffs(n: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(n >= 1);
        let m = cyclotomic_poly(n);
        Cyclotomic { n, coeffs: reduce_mod(coeffs, &m) }
    }

    pub fn from_rational(n: u32, q: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); euler_phi(n as u64) as usize];
        coeffs[0] = q;
        Cyclotomic { n, coeffs }
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, rat_int(v))
    }

    pub fn zero(n: u32) -> Self {
        Self::from_int(n, 0)
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    /// `zeta_n^k`.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::from_coeffs(n, c)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(zeta_m)`; requires `n | m`.
    pub fn promote(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "promote: {} does not divide {}", self.n, m);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut c = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            c[i * step] = ci.clone();
        }
        Self::from_coeffs(m, c)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.n == other.n {
            return (self.clone(), other.clone());
        }
        let m = lcm_u32(self.n, other.n);
        (self.promote(m), other.promote(m))
    }

    /// Galois automorphism `zeta_n -> zeta_n^a`; `a` must be coprime to `n`.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.n as i64;
        assert!(a.gcd(&n) == 1, "galois: exponent not coprime to order");
        let mut c = vec![BigRational::zero(); self.n as usize];
        for (i, ci) in self.coeffs.iter().enumerate() {
            let j = ((i as i64) * a).rem_euclid(n) as usize;
            c[j] += ci;
        }
        Self::from_coeffs(self.n, c)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        out
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.coeffs.len();
        // Columns of the multiplication-by-self matrix are self * z^j.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            let col = &*self * &Self::zeta_pow(self.n, j as i64);
            for i in 0..d {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m[0][d] = BigRational::one();
        let sol = solve_rational(m)?;
        Some(Cyclotomic { n: self.n, coeffs: sol })
    }

    /// Trace from `Q(zeta_n)` down to `Q`.
    pub fn trace(&self) -> BigRational {
        let mut acc = Self::zero(self.n);
        for a in 1..=self.n as i64 {
            if a.gcd(&(self.n as i64)) == 1 {
                acc = &acc + &self.galois(a);
            }
        }
        acc.as_rational().expect("trace is rational")
    }

    /// Absolute norm to `Q`.
    pub fn norm(&self) -> BigRational {
        let mut acc = Self::one(self.n);
        for a in 1..=self.n as i64 {
            if a.gcd(&(self.n as i64)) == 1 {
                acc = &acc * &self.galois(a);
            }
        }
        acc.as_rational().expect("norm is rational")
    }
}

/// Solves an augmented square system over Q; `None` if singular.
pub(crate) fn solve_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let d = m.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=d {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let la = a.coeffs.len();
        let lb = b.coeffs.len();
        let mut c = vec![BigRational::zero(); la + lb - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_coeffs(a.n, c)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Cyclotomic {
    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("zeta{}", self.n),
                _ => format!("zeta{}^{}", self.n, i),
            };
            let mag = c.abs();
            let body = if i == 0 {
                format!("{}", mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{}", mag, mono)
            };
            if terms.is_empty() {
                terms.push(if c.is_negative() { format!("-{}", body) } else { body });
            } else {
                terms.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" "))
        }
    }
}

/// Kronecker symbol `(d / a)` for a discriminant `d`.
pub fn kronecker(d: i64, a: u64) -> i32 {
    if a == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut res = 1i32;
    let mut tw = 0;
    while a % 2 == 0 {
        a /= 2;
        tw += 1;
    }
    if tw > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && tw % 2 == 1 {
            res = -res;
        }
    }
    // Jacobi (d / a) for odd a, with the sign of d handled by reciprocity on |d|.
    res * jacobi(d.rem_euclid(a as i64) as u64, a)
}

/// Jacobi symbol for odd positive `n`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut res = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let m = d.unsigned_abs();
    small_factor(m).iter().all(|&(_, e)| e == 1)
}

/// `a + b*sqrt(d)` with `d` square-free, `d != 0, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticNumber {
    d: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticNumber {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Self {
        assert!(d != 0 && d != 1 && is_squarefree(d), "d must be square-free and not 0, 1");
        QuadraticNumber { d, a, b }
    }

    pub fn from_ints(d: i64, a: i64, b: i64) -> Self {
        Self::new(d, rat_int(a), rat_int(b))
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn conj(&self) -> Self {
        QuadraticNumber { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.a * rat_int(2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadraticNumber { d: self.d, a: &self.a / &n, b: -&self.b / &n })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self * &other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QuadraticNumber { d: self.d, a: &self.a * q, b: &self.b * q }
    }

    /// Fundamental discriminant of `Q(sqrt d)`.
    pub fn discriminant(d: i64) -> i64 {
        if d.rem_euclid(4) == 1 {
            d
        } else {
            4 * d
        }
    }

    /// `sqrt(d)` as an element of `Q(zeta_|D|)`, via the quadratic Gauss sum.
    pub fn sqrt_d_cyclotomic(d: i64) -> Cyclotomic {
        let disc = Self::discriminant(d);
        let m = disc.unsigned_abs() as u32;
        let mut c = vec![BigRational::zero(); m as usize];
        for a in 1..m as u64 {
            c[a as usize] = rat_int(kronecker(disc, a) as i64);
        }
        let g = Cyclotomic::from_coeffs(m, c);
        if disc == d {
            g
        } else {
            g.scale(&rat(1, 2))
        }
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let s = Self::sqrt_d_cyclotomic(self.d);
        let n = s.order();
        &Cyclotomic::from_rational(n, self.a.clone()) + &s.scale(&self.b)
    }

    /// Writes a cyclotomic element as `a + b sqrt(d)` when it lies in that field.
    pub fn from_cyclotomic(x: &Cyclotomic, d: i64) -> Option<Self> {
        let s = Self::sqrt_d_cyclotomic(d);
        let m = lcm_u32(x.order(), s.order());
        let xs = x.promote(m);
        let ss = s.promote(m);
        let j = (1..ss.coeffs.len()).find(|&j| !ss.coeffs[j].is_zero())?;
        let b = &xs.coeffs[j] / &ss.coeffs[j];
        let a = &xs.coeffs[0] - &b * &ss.coeffs[0];
        let q = QuadraticNumber::new(d, a, b);
        if q.to_cyclotomic() == *x {
            Some(q)
        } else {
            None
        }
    }
}

impl<'a> Add<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, o: &QuadraticNumber) -> QuadraticNumber {
        assert_eq!(self.d, o.d);
        QuadraticNumber { d: self.d, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, o: &QuadraticNumber) -> QuadraticNumber {
        assert_eq!(self.d, o.d);
        QuadraticNumber { d: self.d, a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, o: &QuadraticNumber) -> QuadraticNumber {
        assert_eq!(self.d, o.d);
        let d = rat_int(self.d);
        QuadraticNumber {
            d: self.d,
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { d: self.d, a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d)
    }
}

/// Polynomial in `X` with coefficients in one cyclotomic field, constant term first.
#[derive(Clone, Debug)]
pub struct ExactPoly {
    n: u32,
    coeffs: Vec<Cyclotomic>,
}

impl ExactPoly {
    pub fn new(coeffs: Vec<Cyclotomic>) -> Self {
        let n = coeffs.iter().fold(1, |acc, c| lcm_u32(acc, c.order()));
        let mut p = ExactPoly { n, coeffs: coeffs.into_iter().map(|c| c.promote(n)).collect() };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Cyclotomic::from_int(1, c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| Cyclotomic::from_rational(1, rat_int(c.clone()))).collect())
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Cyclotomic {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Cyclotomic::zero(self.n))
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn field_order(&self) -> u32 {
        self.n
    }

    /// Integer coefficients if every coefficient is a rational integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer()))
            .collect()
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&rat_int(i as i64)))
                .collect(),
        )
    }
}

impl PartialEq for ExactPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(other.coeffs.iter()).all(|(a, b)| a == b)
    }
}

impl<'a> Add<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn add(self, o: &ExactPoly) -> ExactPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        ExactPoly::new((0..len).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn sub(self, o: &ExactPoly) -> ExactPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        ExactPoly::new((0..len).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn mul(self, o: &ExactPoly) -> ExactPoly {
        if self.is_zero() || o.is_zero() {
            return ExactPoly::new(Vec::new());
        }
        let n = lcm_u32(self.n, o.n);
        let mut c = vec![Cyclotomic::zero(n); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        ExactPoly::new(c)
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", c),
                1 => format!("({})*X", c),
                _ => format!("({})*X^{}", c, i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bernoulli numbers `B_0, ..., B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    // Binomial row C(m+1, j), updated in place.
    let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for m in 1..=n {
        let mut next = vec![BigInt::one(); m + 2];
        for j in 1..=m {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                s += bj * BigRational::from_integer(row[j].clone());
            }
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

/// One prime-power factor; `probable` marks primes above `2^64` accepted by
/// Miller-Rabin without a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactor {
    pub prime: BigUint,
    pub exponent: u32,
    pub probable: bool,
}

const MR_BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller-Rabin; the first 12 bases make it deterministic below 3.3e24.
pub fn miller_rabin(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in MR_BASES.iter() {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in MR_BASES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let m = 64;
    let mut g;
    let mut x;
    let mut ys;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            g = q.gcd(n);
            k += m;
            if *budget < m {
                return None;
            }
            *budget -= m;
            if k >= r || !g.is_one() {
                break;
            }
        }
        r *= 2;
        if !g.is_one() {
            break;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n {
        None
    } else {
        Some(g)
    }
}

/// Default Pollard-rho iteration budget of [`factor_integer`].
pub const DEFAULT_FACTOR_BUDGET: u64 = 20_000_000;

pub fn factor_integer(n: &BigUint) -> Result<Vec<PrimeFactor>> {
    factor_integer_with_budget(n, DEFAULT_FACTOR_BUDGET)
}

/// Trial division, then Miller-Rabin and Brent's rho under an iteration budget.
/// On exhaustion the error carries the partial factorization and the cofactor.
pub fn factor_integer_with_budget(n: &BigUint, budget: u64) -> Result<Vec<PrimeFactor>> {
    assert!(!n.is_zero(), "factor_integer needs n >= 1");
    let mut primes: Vec<BigUint> = Vec::new();
    let mut m = n.clone();
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut budget = budget;
    let mut stack = vec![m];
    let mut leftover = BigUint::one();
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if x.to_u64().is_some_and(|v| v < 100_000_000) || miller_rabin(&x) {
            // Anything below 10^8 surviving trial division to 10^4 is prime.
            primes.push(x);
            continue;
        }
        if let Some(r) = x.sqrt().pow(2).eq(&x).then(|| x.sqrt()) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let mut found = None;
        for c in 1..64u64 {
            if budget == 0 {
                break;
            }
            if let Some(g) = pollard_brent(&x, c, &mut budget) {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => {
                stack.push(&x / &g);
                stack.push(g);
            }
            None => leftover *= x,
        }
    }
    primes.sort();
    let mut out: Vec<PrimeFactor> = Vec::new();
    let limit = BigUint::from(u64::MAX);
    for q in primes {
        match out.last_mut() {
            Some(last) if last.prime == q => last.exponent += 1,
            _ => {
                let probable = q > limit;
                out.push(PrimeFactor { prime: q, exponent: 1, probable })
            }
        }
    }
    if leftover.is_one() {
        Ok(out)
    } else {
        Err(Error::FactorBudget { partial: out, cofactor: leftover })
    }
}

pub fn bigint_from_str(s: &str) -> Option<BigInt> {
    BigInt::parse_bytes(s.trim().as_bytes(), 10)
}

pub fn biguint_pow(b: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(b), e as usize)
}

pub fn bigint_pow(b: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

/// `a mod m` as a non-negative value.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub fn sign_of(a: &BigInt) -> Sign {
    a.sign()
}

/// Numerator and denominator of a rational.
pub fn num_den(q: &BigRational) -> (BigInt, BigInt) {
    (q.numer().clone(), q.denom().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let p = cyclotomic_poly(12);
        let want: Vec<BigInt> = [1, 0, -1, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(p, want);
        assert_eq!(cyclotomic_poly(7).len(), 7);
        assert_eq!(cyclotomic_poly(1), vec![BigInt::from(-1), BigInt::one()]);
    }

    #[test]
    fn zeta3_relations() {
        let z = Cyclotomic::zeta_pow(3, 1);
        let one = Cyclotomic::one(3);
        let s = &(&one + &z) + &(&z * &z);
        assert!(s.is_zero());
        assert_eq!(z.pow(3), one);
        assert_eq!(&z * &z.inv().unwrap(), one);
        assert_eq!(z.norm(), rat_int(1));
        assert_eq!(z.trace(), rat_int(-1));
    }

    #[test]
    fn promote_keeps_value() {
        let z3 = Cyclotomic::zeta_pow(3, 1);
        let z21 = Cyclotomic::zeta_pow(21, 7);
        assert_eq!(z3.promote(21), z21);
        assert_eq!(z3, z21);
    }

    #[test]
    fn sqrt_minus3() {
        let s = QuadraticNumber::sqrt_d_cyclotomic(-3);
        let want = &Cyclotomic::zeta_pow(3, 1).scale(&rat_int(2)) + &Cyclotomic::one(3);
        assert_eq!(s, want);
        assert_eq!(&s * &s, Cyclotomic::from_int(3, -3));
        let s5 = QuadraticNumber::sqrt_d_cyclotomic(5);
        assert_eq!(&s5 * &s5, Cyclotomic::from_int(5, 5));
        let s2 = QuadraticNumber::sqrt_d_cyclotomic(2);
        assert_eq!(&s2 * &s2, Cyclotomic::from_int(8, 2));
    }

    #[test]
    fn quadratic_round_trip() {
        let x = QuadraticNumber::new(-3, rat(3, 7), rat(2, 7));
        let c = x.to_cyclotomic();
        assert_eq!(QuadraticNumber::from_cyclotomic(&c, -3), Some(x.clone()));
        assert_eq!(QuadraticNumber::from_cyclotomic(&Cyclotomic::zeta_pow(7, 1), -3), None);
        let y = QuadraticNumber::from_ints(-3, 14, 9);
        assert_eq!(y.norm(), rat_int(439));
        assert_eq!((&x * &y).to_cyclotomic(), &x.to_cyclotomic() * &y.to_cyclotomic());
    }

    #[test]
    fn poly_ops() {
        let p = ExactPoly::from_ints(&[1, 1]);
        let q = ExactPoly::from_ints(&[-1, 1]);
        assert_eq!(&p * &q, ExactPoly::from_ints(&[-1, 0, 1]));
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(ExactPoly::from_ints(&[0, 0, 3]).derivative(), ExactPoly::from_ints(&[0, 6]));
    }

    #[test]
    fn factor_small() {
        assert!(factor_integer(&BigUint::one()).unwrap().is_empty());
        let f = factor_integer(&BigUint::from(360u32)).unwrap();
        let got: Vec<(u64, u32)> = f.iter().map(|x| (x.prime.to_u64().unwrap(), x.exponent)).collect();
        assert_eq!(got, vec![(2, 3), (3, 2), (5, 1)]);
        let n = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        let f = factor_integer(&n).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn factor_budget_reports_cofactor() {
        let p = BigUint::from(18446744073709551557u64);
        let q = BigUint::from(18446744073709551533u64);
        match factor_integer_with_budget(&(&p * &q * 12u32), 10) {
            Err(Error::FactorBudget { partial, cofactor }) => {
                assert_eq!(partial.len(), 2);
                assert_eq!(cofactor, &p * &q);
            }
            other => panic!("expected budget error, got {:?}", other),
        }
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(8, 7), 1);
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[11].is_zero());
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
