//! Fixed-precision p-adic numbers, Hensel lifting, embeddings of split
//! quadratic fields into `Q_p`, and group rings `(Z/p^K)[G]` of finite
//! abelian groups.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{BigRational, Cyclotomic, ExactPoly, QuadraticNumber};
use crate::{Error, Result};

/// Default absolute precision, in p-adic digits.
pub const DEFAULT_K: u32 = 12;

fn ppow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `v_p(n)` for nonzero `n`; also returns `n / p^v`.
fn split_val(n: &BigInt, p: u64) -> (i64, BigInt) {
    assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// Inverse of a unit modulo `m`.
fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// Element of `Q_p` known modulo `p^N` (`N` the absolute precision), stored as
/// `p^val * unit` with `unit` a unit modulo `p^rel`, `N = val + rel`. Exact zero
/// is a separate state with infinite valuation; an inexact zero is `O(p^val)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigInt,
    rel: u32,
    exact_zero: bool,
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PadicNumber { p, val: 0, unit: BigInt::zero(), rel: 0, exact_zero: true }
    }

    /// `O(p^n)`.
    pub fn big_o(p: u64, n: i64) -> Self {
        PadicNumber { p, val: n, unit: BigInt::zero(), rel: 0, exact_zero: false }
    }

    /// The rational `q` known to absolute precision `O(p^k)`.
    pub fn from_rational(q: &BigRational, p: u64, k: i64) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let (vn, un) = split_val(q.numer(), p);
        let (vd, ud) = split_val(q.denom(), p);
        let val = vn - vd;
        if val >= k {
            return Self::big_o(p, k);
        }
        let rel = (k - val) as u32;
        let m = ppow(p, rel);
        let unit = (un * inv_mod(&ud, &m).expect("unit denominator")).mod_floor(&m);
        PadicNumber { p, val, unit, rel, exact_zero: false }
    }

    pub fn from_integer(n: &BigInt, p: u64, k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()), p, k)
    }

    pub fn from_i64(n: i64, p: u64, k: i64) -> Self {
        Self::from_integer(&BigInt::from(n), p, k)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Zero to the known precision (exact or `O(p^n)`).
    pub fn is_zero(&self) -> bool {
        self.exact_zero || self.unit.is_zero()
    }

    /// Valuation, `None` when the value is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for the valuation (the precision for inexact zeros).
    pub fn valuation_lower(&self) -> i64 {
        if self.exact_zero {
            i64::MAX
        } else {
            self.val
        }
    }

    /// Absolute precision `N` in `O(p^N)`; `None` for exact zero.
    pub fn abs_prec(&self) -> Option<i64> {
        if self.exact_zero {
            None
        } else {
            Some(self.val + self.rel as i64)
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    pub fn unit_part(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    fn abs_or(&self, other: i64) -> i64 {
        self.abs_prec().unwrap_or(other)
    }

    /// Representative integer `0 <= r < p^N` (for `val >= 0`).
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * ppow(self.p, self.val as u32))
    }

    /// Reduces the absolute precision to `k` (never increases it).
    pub fn truncate(&self, k: i64) -> Self {
        if self.exact_zero {
            return Self::big_o(self.p, k);
        }
        let n = self.abs_prec().unwrap();
        if k >= n {
            return self.clone();
        }
        if self.is_zero() || self.val >= k {
            return Self::big_o(self.p, k.min(n));
        }
        let rel = (k - self.val) as u32;
        PadicNumber {
            p: self.p,
            val: self.val,
            unit: self.unit.mod_floor(&ppow(self.p, rel)),
            rel,
            exact_zero: false,
        }
    }

    fn build(p: u64, val: i64, raw: BigInt, abs: i64) -> Self {
        // `raw * p^val` known modulo p^abs; normalizes the unit.
        if val >= abs {
            return Self::big_o(p, abs);
        }
        let m = ppow(p, (abs - val) as u32);
        let r = raw.mod_floor(&m);
        if r.is_zero() {
            return Self::big_o(p, abs);
        }
        let (v2, u) = split_val(&r, p);
        let val = val + v2;
        let rel = (abs - val) as u32;
        PadicNumber { p, val, unit: u.mod_floor(&ppow(p, rel)), rel, exact_zero: false }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixed primes");
        if self.exact_zero {
            return o.clone();
        }
        if o.exact_zero {
            return self.clone();
        }
        let abs = self.abs_or(i64::MAX).min(o.abs_or(i64::MAX));
        let v = self.val.min(o.val);
        let raw = &self.unit * ppow(self.p, (self.val - v) as u32) + &o.unit * ppow(self.p, (o.val - v) as u32);
        Self::build(self.p, v, raw, abs)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.rel);
        PadicNumber { unit: (-&self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixed primes");
        if self.exact_zero || o.exact_zero {
            return Self::exact_zero(self.p);
        }
        if self.is_zero() || o.is_zero() {
            // O(p^a) * x has precision a + v(x).
            return Self::big_o(self.p, self.val + o.val);
        }
        let rel = self.rel.min(o.rel);
        let m = ppow(self.p, rel);
        PadicNumber {
            p: self.p,
            val: self.val + o.val,
            unit: (&self.unit * &o.unit).mod_floor(&m),
            rel,
            exact_zero: false,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain(String::from("inverse of p-adic zero")));
        }
        let m = ppow(self.p, self.rel);
        Ok(PadicNumber {
            p: self.p,
            val: -self.val,
            unit: inv_mod(&self.unit, &m).expect("unit"),
            rel: self.rel,
            exact_zero: false,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(PadicNumber::from_i64(1, self.p, self.rel.max(1) as i64));
        }
        let mut b = if e < 0 { self.inv()? } else { self.clone() };
        let mut out: Option<PadicNumber> = None;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                out = Some(match out {
                    None => b.clone(),
                    Some(o) => o.mul(&b),
                });
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Ok(out.unwrap())
    }

    /// Digits `c_i` for `i = val .. N-1` in `[0, p)`.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let bp = BigInt::from(self.p);
        let mut u = self.unit.clone();
        for _ in 0..self.rel {
            let (q, r) = u.div_rem(&bp);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }

    /// Digit `c_i` (the coefficient of `p^i`), if known.
    pub fn digit(&self, i: i64) -> Option<u64> {
        match self.abs_prec() {
            Some(n) if i < n => {}
            Some(_) => return None,
            None => return Some(0),
        }
        if self.is_zero() || i < self.val {
            return Some(0);
        }
        self.digits().get((i - self.val) as usize).copied()
    }

    /// Whether `self - other` vanishes modulo `p^k`.
    pub fn congruent(&self, other: &Self, k: i64) -> bool {
        let d = self.sub(other);
        d.valuation_lower() >= k || d.valuation().is_none() && d.abs_or(i64::MAX) >= k
    }

    /// Reduction modulo `p` of a `p`-integral value.
    pub fn residue(&self) -> Option<u64> {
        self.digit(0)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0");
        }
        let p = self.p;
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.digits().iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let e = self.val + i as i64;
            parts.push(match e {
                0 => format!("{}", c),
                1 => format!("{}*{}", c, p),
                _ => format!("{}*{}^{}", c, p, e),
            });
        }
        let n = self.val + self.rel as i64;
        parts.push(format!("O({}^{})", p, n));
        write!(f, "{}", parts.join(" + "))
    }
}

fn eval_int_poly(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for ci in c.iter().rev() {
        acc = (acc * x + ci).mod_floor(m);
    }
    acc
}

/// Lifts a simple root `r0` of `f` modulo `p` to a root modulo `p^k`.
pub fn hensel_root(f: &ExactPoly, p: u64, r0: &BigInt, k: u32) -> Result<PadicNumber> {
    let c = f
        .integer_coeffs()
        .ok_or_else(|| Error::Domain(String::from("polynomial must have integer coefficients")))?;
    let df: Vec<BigInt> = c.iter().enumerate().skip(1).map(|(i, x)| x * i).collect();
    let bp = BigInt::from(p);
    if !eval_int_poly(&c, r0, &bp).is_zero() {
        return Err(Error::NotARoot);
    }
    if eval_int_poly(&df, r0, &bp).is_zero() {
        return Err(Error::NonSimpleRoot);
    }
    let m = ppow(p, k);
    let mut r = r0.mod_floor(&m);
    for _ in 0..64 {
        let fr = eval_int_poly(&c, &r, &m);
        if fr.is_zero() {
            break;
        }
        let d = eval_int_poly(&df, &r, &m);
        let di = inv_mod(&d, &m).expect("derivative is a unit");
        r = (r - fr * di).mod_floor(&m);
    }
    Ok(PadicNumber::from_integer(&r, p, k as i64))
}

/// Unit root `alpha` and non-unit root `beta` of `X^2 - a X + p^(k-1) e` where
/// `e` is the nebentypus value at `p` given as a p-adic unit.
pub fn ordinary_roots(a_p: &BigInt, weight: u32, eps_p: &PadicNumber, k: u32) -> Result<(PadicNumber, PadicNumber)> {
    let p = eps_p.p();
    let bp = BigInt::from(p);
    if a_p.mod_floor(&bp).is_zero() {
        return Err(Error::NonOrdinary(p));
    }
    let work = k + weight;
    let e = eps_p
        .to_integer()
        .ok_or_else(|| Error::Domain(String::from("nebentypus value must be integral")))?;
    let c0 = ppow(p, weight - 1) * e;
    let poly = ExactPoly::from_bigints(&[c0.clone(), -a_p.clone(), BigInt::one()]);
    let alpha = hensel_root(&poly, p, &a_p.mod_floor(&bp), work)?;
    // beta = a - alpha keeps full absolute precision; its valuation is k-1.
    let beta = PadicNumber::from_integer(a_p, p, work as i64).sub(&alpha);
    Ok((alpha.truncate(k as i64), beta.truncate(k as i64 + weight as i64 - 1)))
}

/// Embedding of `Q(sqrt d)` into `Q_p` for a split prime, fixed by a generator
/// `a + b sqrt d` of one prime above `p`: `sqrt d` maps to the root `r` with
/// `r = -a/b mod p`, so that the generator maps to a non-unit.
#[derive(Clone, Debug)]
pub struct PadicEmbedding {
    d: i64,
    p: u64,
    k: u32,
    root: PadicNumber,
    generator: QuadraticNumber,
}

impl PadicEmbedding {
    /// `p` is `|N(a + b sqrt d)|`, which must be an odd prime not dividing `b`.
    pub fn from_generator(generator: &QuadraticNumber, k: u32) -> Result<Self> {
        let d = generator.d();
        let n = generator.norm();
        if !n.is_integer() || !generator.a.is_integer() || !generator.b.is_integer() {
            return Err(Error::Domain(String::from("generator must be integral")));
        }
        let pn = n.to_integer().abs();
        let p = pn
            .to_u64()
            .filter(|&p| p > 2 && crate::exact::is_prime_u64(p))
            .ok_or_else(|| Error::Domain(format!("norm {} of the generator is not an odd prime", pn)))?;
        let bp = BigInt::from(p);
        let a = generator.a.to_integer();
        let b = generator.b.to_integer();
        let binv = inv_mod(&b, &bp).ok_or_else(|| Error::Domain(String::from("p divides b")))?;
        let r0 = (-a * binv).mod_floor(&bp);
        let poly = ExactPoly::from_ints(&[-d, 0, 1]);
        let root = hensel_root(&poly, p, &r0, k + 2)?;
        Ok(PadicEmbedding { d, p, k, root, generator: generator.clone() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn generator(&self) -> &QuadraticNumber {
        &self.generator
    }

    /// Image of `sqrt d`.
    pub fn sqrt_d(&self) -> &PadicNumber {
        &self.root
    }

    /// Image of a rational, checking that `p` does not divide its denominator.
    pub fn embed_rational(&self, q: &BigRational, k: u32) -> Result<PadicNumber> {
        if q.denom().mod_floor(&BigInt::from(self.p)).is_zero() {
            return Err(Error::DenominatorDivisibleByP(self.p));
        }
        Ok(PadicNumber::from_rational(q, self.p, k as i64))
    }

    pub fn embed_quadratic(&self, x: &QuadraticNumber, k: u32) -> Result<PadicNumber> {
        if x.d() != self.d {
            return Err(Error::Domain(format!("element of Q(sqrt {}) under an embedding of Q(sqrt {})", x.d(), self.d)));
        }
        let a = self.embed_rational(&x.a, k + 2)?;
        let b = self.embed_rational(&x.b, k + 2)?;
        let r = self.root.truncate(k as i64 + 2);
        Ok(a.add(&b.mul(&r)).truncate(k as i64))
    }

    /// Image of a cyclotomic number lying in `Q(sqrt d)` (e.g. values of a cubic
    /// character when `d = -3`).
    pub fn embed_cyclotomic(&self, x: &Cyclotomic, k: u32) -> Result<PadicNumber> {
        if let Some(q) = x.as_rational() {
            return self.embed_rational(&q, k);
        }
        let qn = QuadraticNumber::from_cyclotomic(x, self.d)
            .ok_or_else(|| Error::Domain(format!("{} does not lie in Q(sqrt {})", x, self.d)))?;
        self.embed_quadratic(&qn, k)
    }
}

/// Convenience wrapper with the argument order of the other embedding helpers.
pub fn embed_quadratic(x: &QuadraticNumber, emb: &PadicEmbedding, k: u32) -> Result<PadicNumber> {
    emb.embed_quadratic(x, k)
}

/// Element of `(Z/p^K)[G]` for `G = Z/n_1 x ... x Z/n_r`, with coefficients
/// indexed in mixed radix (first factor fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElt {
    p: u64,
    k: u32,
    modulus: u64,
    orders: Vec<u64>,
    coeffs: Vec<u64>,
}

/// Outcome of an inversion attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inversion {
    Invertible(GroupRingElt),
    NotInvertible,
}

impl GroupRingElt {
    /// The zero element; `p^k` must stay below `2^62`.
    pub fn zero(p: u64, k: u32, orders: &[u64]) -> Self {
        let modulus = p.checked_pow(k).filter(|&m| m < (1 << 62)).expect("p^k too large");
        let size: u64 = orders.iter().product();
        GroupRingElt { p, k, modulus, orders: orders.to_vec(), coeffs: vec![0; size as usize] }
    }

    pub fn one(p: u64, k: u32, orders: &[u64]) -> Self {
        let mut z = Self::zero(p, k, orders);
        z.coeffs[0] = 1 % z.modulus;
        z
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index_of(&self, g: &[u64]) -> usize {
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (gi, ni) in g.iter().zip(self.orders.iter()) {
            idx += (gi % ni) * stride;
            stride *= ni;
        }
        idx as usize
    }

    fn element_of(&self, mut idx: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|n| {
                let r = idx % n;
                idx /= n;
                r
            })
            .collect()
    }

    /// Adds `c * g` to the element.
    pub fn add_term(&mut self, g: &[u64], c: i64) {
        let i = self.index_of(g);
        let m = self.modulus as i128;
        self.coeffs[i] = ((self.coeffs[i] as i128 + c as i128).rem_euclid(m)) as u64;
    }

    /// `1 - u g`.
    pub fn one_minus(p: u64, k: u32, orders: &[u64], u: i64, g: &[u64]) -> Self {
        let mut x = Self::one(p, k, orders);
        x.add_term(g, -u);
        x
    }

    fn mul_index(&self, a: usize, b: usize) -> usize {
        let ea = self.element_of(a as u64);
        let eb = self.element_of(b as u64);
        let s: Vec<u64> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(o.coeffs.iter()) {
            *x = (*x + *y) % self.modulus;
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(o.coeffs.iter()) {
            *x = (*x + self.modulus - *y) % self.modulus;
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x = ((*x as u128 * c as u128) % self.modulus as u128) as u64;
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.orders, o.orders);
        let mut out = Self::zero(self.p, self.k, &self.orders);
        let m = self.modulus as u128;
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.coeffs.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let t = self.mul_index(i, j);
                out.coeffs[t] = ((out.coeffs[t] as u128 + x as u128 * y as u128) % m) as u64;
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.p, self.k, &self.orders)
    }

    /// Augmentation `sum of coefficients`.
    pub fn augmentation(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |a, &c| (a + c) % self.modulus)
    }

    /// Inverse by Gaussian elimination on the multiplication matrix over the
    /// local ring `Z/p^K`: a pivot must be a unit, and a column without one
    /// means the matrix is singular modulo `p`, hence `self` is not invertible.
    pub fn invert(&self) -> Inversion {
        let n = self.order();
        let m = self.modulus as u128;
        // Column j of the matrix is self * g_j.
        let mut a = vec![vec![0u64; n + 1]; n];
        for j in 0..n {
            for (i, &c) in self.coeffs.iter().enumerate() {
                if c != 0 {
                    a[self.mul_index(i, j)][j] = c;
                }
            }
        }
        a[0][n] = 1 % self.modulus;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] % self.p != 0);
            let Some(piv) = piv else {
                return Inversion::NotInvertible;
            };
            a.swap(col, piv);
            let inv = inv_mod(&BigInt::from(a[col][col]), &BigInt::from(self.modulus))
                .and_then(|x| x.to_u64())
                .expect("unit pivot");
            for x in a[col].iter_mut() {
                *x = ((*x as u128 * inv as u128) % m) as u64;
            }
            for r in 0..n {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let f = a[r][col] as u128;
                for c in col..=n {
                    let sub = (f * a[col][c] as u128) % m;
                    a[r][c] = ((a[r][c] as u128 + m - sub) % m) as u64;
                }
            }
        }
        let mut y = Self::zero(self.p, self.k, &self.orders);
        for (i, row) in a.iter().enumerate() {
            y.coeffs[i] = row[n];
        }
        Inversion::Invertible(y)
    }
}

/// Inverse in `(Z/p^K)[G]` or the verdict that none exists.
pub fn groupring_invert(x: &GroupRingElt) -> Inversion {
    x.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn arithmetic_and_rendering() {
        let p = 37;
        let a = PadicNumber::from_i64(12 + 36 * 37 + 23 * 37 * 37, p, 3);
        assert_eq!(format!("{}", a), "12 + 36*37 + 23*37^2 + O(37^3)");
        let b = PadicNumber::from_rational(&rat(1, 37), p, 3);
        assert_eq!(b.valuation(), Some(-1));
        assert_eq!(b.abs_prec(), Some(3));
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Some(-1));
        let x = PadicNumber::from_i64(5, 7, 6);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).congruent(&PadicNumber::from_i64(1, 7, 6), 6));
        let z = PadicNumber::from_i64(49, 7, 6).sub(&PadicNumber::from_i64(49, 7, 6));
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(PadicNumber::from_i64(0, 7, 5), PadicNumber::exact_zero(7));
    }

    #[test]
    fn hensel_examples() {
        let f = ExactPoly::from_ints(&[-1, 0, 1]);
        let r = hensel_root(&f, 7, &BigInt::from(1), 10).unwrap();
        assert_eq!(r.to_integer().unwrap(), BigInt::one());
        let g = ExactPoly::from_ints(&[-2, 0, 1]);
        let r = hensel_root(&g, 7, &BigInt::from(3), 12).unwrap();
        let sq = r.mul(&r).sub(&PadicNumber::from_i64(2, 7, 12));
        assert!(sq.valuation_lower() >= 12);
        assert_eq!(hensel_root(&g, 7, &BigInt::from(2), 5), Err(Error::NotARoot));
        let h = ExactPoly::from_ints(&[0, 0, 1]);
        assert_eq!(hensel_root(&h, 7, &BigInt::from(0), 5), Err(Error::NonSimpleRoot));
    }

    #[test]
    fn embedding_by_generator() {
        let gen = QuadraticNumber::from_ints(-3, 14, 9);
        let emb = PadicEmbedding::from_generator(&gen, 6).unwrap();
        assert_eq!(emb.p(), 439);
        let v = emb.embed_quadratic(&gen, 6).unwrap();
        assert!(v.valuation_lower() >= 1);
        let conj = emb.embed_quadratic(&gen.conj(), 6).unwrap();
        assert_eq!(conj.valuation(), Some(0));
        let one = QuadraticNumber::new(-3, rat_int(1), rat_int(0));
        assert_eq!(emb.embed_quadratic(&one, 6).unwrap(), PadicNumber::from_i64(1, 439, 6));
        let bad = QuadraticNumber::new(-3, rat(1, 439), rat_int(0));
        assert_eq!(emb.embed_quadratic(&bad, 6), Err(Error::DenominatorDivisibleByP(439)));
    }

    #[test]
    fn groupring_examples() {
        assert!(matches!(groupring_invert(&GroupRingElt::one(5, 2, &[5])), Inversion::Invertible(y) if y.is_one()));
        let x = GroupRingElt::one_minus(5, 2, &[5], 6, &[1]);
        assert_eq!(groupring_invert(&x), Inversion::NotInvertible);
        let x = GroupRingElt::one_minus(37, 2, &[37], 2, &[1]);
        match groupring_invert(&x) {
            Inversion::Invertible(y) => assert!(x.mul(&y).is_one()),
            Inversion::NotInvertible => panic!("1 - 2g should be invertible"),
        }
    }
}
