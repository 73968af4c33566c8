//! Ball arithmetic: binary floating-point midpoints with rigorous,
//! upward-rounded error radii, plus the elementary functions, complex balls,
//! the Gamma function and tanh-sinh quadrature built on top.

mod consts;
mod gamma;
mod quad;

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{BigRational, Cyclotomic, QuadraticNumber};

pub use gamma::{gamma, GammaCtx};
pub use quad::{integrate_2d, tanh_sinh, FundamentalRegion, Quadrature};

/// Default mantissa size.
pub const DEFAULT_PREC: u32 = 128;

/// Bits needed to carry `digits` decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * core::f64::consts::LOG2_10) as u32 + 1 + 24
}

fn split_f64(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut x = x;
    let mut adj = 0i64;
    if x < f64::MIN_POSITIVE {
        x *= pow2_f64(64);
        adj = -64;
    }
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & ((1u64 << 52) - 1)) | (1023u64 << 52));
    (m, e + adj)
}

/// Nonnegative magnitude `m * 2^e` with `m` in `[1, 2)`, used for radii.
/// Every operation rounds upward unless its name says otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };
    pub const INF: Mag = Mag { m: f64::INFINITY, e: 0 };

    fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        if !m.is_finite() {
            return Mag::INF;
        }
        let (mm, ee) = split_f64(m);
        Mag { m: mm, e: e + ee }
    }

    pub fn pow2(e: i64) -> Mag {
        Mag { m: 1.0, e }
    }

    /// Upper bound for a nonnegative `f64`.
    pub fn from_f64(x: f64) -> Mag {
        assert!(!(x < 0.0), "negative magnitude");
        if x.is_nan() {
            return Mag::INF;
        }
        Mag::norm(x, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite()
    }

    /// Approximate value; saturates to 0 or infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() || !self.is_finite() {
            return self.m;
        }
        if self.e > 1023 {
            f64::INFINITY
        } else if self.e < -1074 {
            0.0
        } else {
            self.m * pow2_f64(self.e)
        }
    }

    /// `log2` of the value, approximate; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else if !self.is_finite() {
            f64::INFINITY
        } else {
            self.e as f64 + libm::log2(self.m)
        }
    }

    pub fn add(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 60 {
            return Mag::norm(big.m.next_up(), big.e);
        }
        Mag::norm((big.m + small.m * pow2_f64(-d)).next_up(), big.e)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        Mag::norm((self.m * o.m).next_up(), self.e + o.e)
    }

    /// Upper bound for `self / o`, where `o` is a lower bound of the divisor.
    pub fn div(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if o.is_zero() || !self.is_finite() {
            return Mag::INF;
        }
        if !o.is_finite() {
            return Mag::ZERO;
        }
        Mag::norm((self.m / o.m).next_up(), self.e - o.e)
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        Mag { m: self.m, e: self.e + k }
    }

    pub fn max(&self, o: &Mag) -> Mag {
        if self.cmp_mag(o) == Ordering::Less {
            *o
        } else {
            *self
        }
    }

    pub fn cmp_mag(&self, o: &Mag) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match (self.is_finite(), o.is_finite()) {
            (false, false) => return Ordering::Equal,
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m).unwrap_or(Ordering::Equal))
    }

    /// Lower bound for `self - o`, clamped at zero.
    pub fn sub_lower(&self, o: &Mag) -> Mag {
        if o.is_zero() {
            return *self;
        }
        if self.cmp_mag(o) != Ordering::Greater || !self.is_finite() {
            return if self.is_finite() { Mag::ZERO } else { Mag::INF };
        }
        let d = self.e - o.e;
        if d > 60 {
            return Mag::norm(self.m.next_down(), self.e);
        }
        let v = (self.m - (o.m * pow2_f64(-d)).next_up()).next_down();
        if v <= 0.0 {
            Mag::ZERO
        } else {
            Mag::norm(v, self.e)
        }
    }

    /// Lower bound for the square root.
    pub fn sqrt_lower(&self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        let (m, e) = if self.e % 2 == 0 { (self.m, self.e) } else { (self.m * 2.0, self.e - 1) };
        Mag::norm(libm::sqrt(m).next_down(), e / 2)
    }

    pub fn sqrt_upper(&self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        let (m, e) = if self.e % 2 == 0 { (self.m, self.e) } else { (self.m * 2.0, self.e - 1) };
        Mag::norm(libm::sqrt(m).next_up(), e / 2)
    }

    /// Exact conversion to a binary float.
    pub fn to_float(&self) -> Float {
        if self.is_zero() {
            return Float::zero();
        }
        assert!(self.is_finite(), "infinite magnitude");
        let man = (self.m * pow2_f64(52)) as u64;
        Float::new(BigInt::from(man), self.e - 52)
    }
}

fn pow2_f64(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// Binary floating-point number `man * 2^exp` with an arbitrary mantissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Float {
    man: BigInt,
    exp: i64,
}

impl Float {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            Float { man, exp: 0 }
        } else {
            Float { man, exp }
        }
    }

    pub fn zero() -> Self {
        Float { man: BigInt::zero(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Float::new(BigInt::from(v), 0)
    }

    /// Exact conversion.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Float::zero();
        }
        let (m, e) = split_f64(x.abs());
        let man = (m * pow2_f64(52)) as i64;
        Float::new(BigInt::from(if x < 0.0 { -man } else { man }), e - 52)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    /// Smallest `t` with `|self| < 2^t`.
    pub fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn neg(&self) -> Float {
        Float { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Float {
        Float { man: self.man.abs(), exp: self.exp }
    }

    pub fn mul(&self, o: &Float) -> Float {
        Float::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn add(&self, o: &Float) -> Float {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.exp >= o.exp {
            Float::new((&self.man << (self.exp - o.exp) as usize) + &o.man, o.exp)
        } else {
            Float::new(&self.man + (&o.man << (o.exp - self.exp) as usize), self.exp)
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Float {
        Float::new(self.man.clone(), self.exp + k)
    }

    /// Truncates to at most `prec` mantissa bits; returns the error bound.
    pub fn round(&self, prec: u32) -> (Float, Mag) {
        let b = self.man.bits();
        if b <= prec as u64 {
            return (self.clone(), Mag::ZERO);
        }
        let shift = b - prec as u64;
        let man = if self.man.is_negative() {
            -((-&self.man) >> shift as usize)
        } else {
            &self.man >> shift as usize
        };
        (Float::new(man, self.exp + shift as i64), Mag::pow2(self.exp + shift as i64))
    }

    pub fn mag_upper(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let a = self.man.magnitude();
        let b = a.bits();
        if b <= 53 {
            return Mag::norm(a.to_u64().unwrap() as f64, self.exp);
        }
        let shift = b - 53;
        let top = (a >> shift as usize).to_u64().unwrap() + 1;
        Mag::norm((top as f64).next_up(), self.exp + shift as i64)
    }

    pub fn mag_lower(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let a = self.man.magnitude();
        let b = a.bits();
        if b <= 53 {
            return Mag::norm(a.to_u64().unwrap() as f64, self.exp);
        }
        let shift = b - 53;
        let top = (a >> shift as usize).to_u64().unwrap();
        Mag::norm(top as f64, self.exp + shift as i64)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.man.bits() as i64;
        let shift = (b - 60).max(0);
        let top = (&self.man >> shift as usize).to_f64().unwrap();
        let e = self.exp + shift;
        // Apply the exponent in two steps to avoid spurious overflow.
        let h = e / 2;
        top * pow2_f64(h) * pow2_f64(e - h)
    }

    /// `floor(self * 2^w)` as an integer.
    pub fn to_fixed(&self, w: u32) -> BigInt {
        let s = self.exp + w as i64;
        if s >= 0 {
            &self.man << s as usize
        } else {
            self.man.div_floor(&(BigInt::one() << (-s) as usize))
        }
    }

    /// Quotient truncated to about `prec` bits; second value is the error bound.
    pub fn div(&self, o: &Float, prec: u32) -> (Float, Mag) {
        assert!(!o.is_zero());
        if self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        let shift = (prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0);
        let q = (&self.man << shift as usize) / &o.man;
        let e = self.exp - o.exp - shift;
        (Float::new(q, e), Mag::pow2(e))
    }

    pub fn cmp_value(&self, o: &Float) -> Ordering {
        let d = self.add(&o.neg());
        match d.man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }
}

fn hex_table_fixed(table: &[&str], w: u32) -> BigInt {
    let mut s = String::new();
    for part in table {
        s.push_str(part);
    }
    let full = BigInt::parse_bytes(s.as_bytes(), 16).expect("constant table");
    full >> (consts::TABLE_BITS - w) as usize
}

/// `floor(pi * 2^w)`, error below one unit.
pub fn pi_fixed(w: u32) -> BigInt {
    if w <= consts::TABLE_BITS {
        (BigInt::from(3) << w as usize) + hex_table_fixed(&consts::PI_FRAC_HEX, w)
    } else {
        pi_machin(w)
    }
}

/// `floor(ln2 * 2^w)`, error below one unit.
pub fn ln2_fixed(w: u32) -> BigInt {
    if w <= consts::TABLE_BITS {
        hex_table_fixed(&consts::LN2_HEX, w)
    } else {
        ln2_series(w)
    }
}

fn atan_inv_fixed(x: u64, w: u32) -> BigInt {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
    let one = BigInt::one() << w as usize;
    let x2 = BigInt::from(x * x);
    let mut pow = one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        let t = &pow / (2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        pow /= &x2;
        k += 1;
    }
    sum
}

/// Machin's formula, for precisions beyond the embedded table.
pub fn pi_machin(w: u32) -> BigInt {
    let g = w + 32;
    let v = atan_inv_fixed(5, g) * 16 - atan_inv_fixed(239, g) * 4;
    v >> 32usize
}

/// `ln 2 = 2 atanh(1/3)`, for precisions beyond the embedded table.
pub fn ln2_series(w: u32) -> BigInt {
    let g = w + 32;
    let one = BigInt::one() << g as usize;
    let mut pow = one / 3u32;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        sum += &pow / (2 * k + 1);
        pow /= 9u32;
        k += 1;
    }
    (sum * 2) >> 32usize
}

/// `x / 2^k` truncated toward zero, so that series terms reach exactly zero.
fn shr_tz(x: &BigInt, k: u32) -> BigInt {
    if x.is_negative() {
        -((-x) >> k as usize)
    } else {
        x >> k as usize
    }
}

fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// `exp(r)` for a fixed-point `r` (scale `2^W`, `|r| <= 1`), same scale.
/// Absolute error below `2^(g - W)` where `g` is small (argument halving
/// `m` times followed by `m` squarings; the guard covers the growth).
fn exp_fixed_small(r: &BigInt, w: u32, m: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let x = shr_tz(r, m);
    let mut sum = one.clone();
    let mut term = one;
    let mut n = 1u64;
    loop {
        term = shr_tz(&(&term * &x), w);
        term /= n;
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..m {
        sum = (&sum * &sum) >> w as usize;
    }
    sum
}

/// `exp(x)` with relative error at most `2^-prec`.
fn exp_float(x: &Float, prec: u32) -> Option<Float> {
    if x.is_zero() {
        return Some(Float::from_i64(1));
    }
    if x.top() > 40 {
        return None;
    }
    let xf = x.to_f64();
    let k = libm::round(xf / core::f64::consts::LN_2) as i64;
    let m = 8 + libm::sqrt(prec as f64) as u32 / 2;
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + m + 24;
    let wl = w + kbits + 4;
    let ln2 = ln2_fixed(wl);
    let r = x.to_fixed(w) - ((ln2 * k) >> (wl - w) as usize);
    let e = exp_fixed_small(&r, w, m);
    Some(Float::new(e, k - w as i64))
}

/// `sin(r)`, `cos(r)` for fixed-point `|r| <= 1`.
fn sin_cos_fixed(r: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w as usize;
    let r2 = (r * r) >> w as usize;
    let mut s = r.clone();
    let mut term = r.clone();
    let mut n = 1u64;
    loop {
        term = -shr_tz(&(&term * &r2), w) / ((n + 1) * (n + 2));
        if term.is_zero() {
            break;
        }
        s += &term;
        n += 2;
    }
    let mut c = one.clone();
    let mut term = one;
    let mut n = 0u64;
    loop {
        term = -shr_tz(&(&term * &r2), w) / ((n + 1) * (n + 2));
        if term.is_zero() {
            break;
        }
        c += &term;
        n += 2;
    }
    (s, c)
}

/// `(sin x, cos x)` with absolute error at most `2^-prec`.
fn sin_cos_float(x: &Float, prec: u32) -> Option<(Float, Float)> {
    if x.top() > 48 {
        return None;
    }
    let half_pi = core::f64::consts::FRAC_PI_2;
    let k = libm::round(x.to_f64() / half_pi) as i64;
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + 24;
    let wp = w + kbits + 4;
    let hp = pi_fixed(wp) >> 1usize;
    let r = x.to_fixed(w) - ((hp * k) >> (wp - w) as usize);
    let (s, c) = sin_cos_fixed(&r, w);
    let (s, c) = match k.rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    Some((Float::new(s, -(w as i64)), Float::new(c, -(w as i64))))
}

/// `atan(t)` for fixed-point `|t| <= 1`.
fn atan_fixed(t: &BigInt, w: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let mut t = t.clone();
    let halvings = 4u32;
    for _ in 0..halvings {
        // t / (1 + sqrt(1 + t^2))
        let s = isqrt(&((&one << w as usize) + &t * &t));
        t = (&t << w as usize) / (&one + s);
    }
    let t2 = (&t * &t) >> w as usize;
    let mut pow = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        let term = &pow / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow = shr_tz(&(&pow * &t2), w);
        k += 1;
    }
    sum << halvings as usize
}

/// `atan2(y, x)` with absolute error at most `2^-prec`; both zero is `None`.
fn atan2_float(y: &Float, x: &Float, prec: u32) -> Option<Float> {
    if y.is_zero() && x.is_zero() {
        return None;
    }
    let w = prec + 24;
    let pi = pi_fixed(w);
    let ax = x.abs();
    let ay = y.abs();
    let v = if ay.cmp_value(&ax) != Ordering::Greater {
        // |y/x| <= 1
        let (q, _) = y.div(x, w + 8);
        let a = atan_fixed(&q.to_fixed(w), w);
        if x.sign() == Sign::Minus {
            if y.sign() == Sign::Minus {
                a - pi
            } else {
                a + pi
            }
        } else {
            a
        }
    } else {
        let (q, _) = x.div(y, w + 8);
        let a = atan_fixed(&q.to_fixed(w), w);
        let hp = &pi >> 1usize;
        if y.sign() == Sign::Minus {
            -hp - a
        } else {
            hp - a
        }
    };
    Some(Float::new(v, -(w as i64)))
}

/// `ln(x)` for `x > 0`, absolute error at most `2^-prec`.
fn ln_float(x: &Float, prec: u32) -> Float {
    assert!(x.sign() == Sign::Plus);
    let b = x.man.bits() as i64;
    let mut e = x.exp + b;
    let w = prec + 32 + (64 - e.unsigned_abs().leading_zeros());
    // f = man / 2^b in [1/2, 1), moved to [1/sqrt 2, sqrt 2).
    let mut f = if b as u32 >= w { &x.man >> (b as u32 - w) as usize } else { &x.man << (w - b as u32) as usize };
    let one = BigInt::one() << w as usize;
    if (&f * &f) << 1usize < (&one << w as usize) {
        f <<= 1usize;
        e -= 1;
    }
    let z = ((&f - &one) << w as usize) / (&f + &one);
    let z2 = (&z * &z) >> w as usize;
    let mut pow = z;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        sum += &pow / (2 * k + 1);
        pow = shr_tz(&(&pow * &z2), w);
        k += 1;
    }
    let v = (sum << 1usize) + ln2_fixed(w) * e;
    Float::new(v, -(w as i64))
}

/// Real ball `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: Float,
    rad: Mag,
    prec: u32,
}

impl Ball {
    pub fn from_float(mid: Float, prec: u32) -> Ball {
        let (m, e) = mid.round(prec);
        Ball { mid: m, rad: e, prec }
    }

    pub fn from_parts(mid: Float, rad: Mag, prec: u32) -> Ball {
        let (m, e) = mid.round(prec);
        Ball { mid: m, rad: rad.add(&e), prec }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball { mid: Float::zero(), rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::from_float(Float::from_i64(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        Ball::from_float(Float::new(v.clone(), 0), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Ball {
        Ball::from_float(Float::from_f64(x), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Ball {
        let n = Float::new(q.numer().clone(), 0);
        let d = Float::new(q.denom().clone(), 0);
        if d.man.is_one() {
            return Ball::from_float(n, prec);
        }
        let (m, e) = n.div(&d, prec);
        Ball::from_parts(m, e, prec)
    }

    /// Parses a decimal string such as `-0.00000216906134759` or `1.5e-7` exactly.
    pub fn from_decimal_str(s: &str, prec: u32) -> Option<Ball> {
        Some(Ball::from_rational(&parse_decimal(s)?, prec))
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        let (m, e) = self.mid.round(prec);
        Ball { mid: m, rad: self.rad.add(&e), prec }
    }

    pub fn add_error(&self, err: Mag) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.add(&err), prec: self.prec }
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid.mag_upper().add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero if the ball straddles zero).
    pub fn abs_lower(&self) -> Mag {
        self.mid.mag_lower().sub_lower(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mid.sign() == Sign::Plus && !self.abs_lower().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.sign() == Sign::Minus && !self.abs_lower().is_zero()
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        if !self.is_finite() {
            return true;
        }
        if !other.is_finite() {
            return false;
        }
        // |m1 - m2| + r2 <= r1, checked exactly.
        let d = self.mid.add(&other.mid.neg()).abs();
        let lhs = d.add(&other.rad.to_float());
        lhs.cmp_value(&self.rad.to_float()) != Ordering::Greater
    }

    /// Whether the exact rational lies in the ball.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        if !self.is_finite() {
            return true;
        }
        let d = (self.mid.to_rational() - q).abs();
        d <= self.rad.to_float().to_rational()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        if !self.is_finite() || !other.is_finite() {
            return true;
        }
        let d = self.mid.add(&other.mid.neg()).abs();
        let r = self.rad.add(&other.rad).to_float();
        d.cmp_value(&r) != Ordering::Greater
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad, prec: self.prec }
    }

    pub fn abs(&self) -> Ball {
        Ball { mid: self.mid.abs(), rad: self.rad, prec: self.prec }
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball { mid: self.mid.mul_2exp(k), rad: self.rad.mul_2exp(k), prec: self.prec }
    }

    fn sum(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        if !self.mid.is_zero() && !o.mid.is_zero() {
            let gap = self.mid.top() - o.mid.top();
            // Absorb a negligible operand into the radius instead of shifting.
            if gap > prec as i64 + 64 {
                let r = self.rad.add(&o.rad).add(&o.mid.mag_upper());
                return Ball { mid: self.mid.clone(), rad: r, prec };
            }
            if -gap > prec as i64 + 64 {
                let r = self.rad.add(&o.rad).add(&self.mid.mag_upper());
                return Ball { mid: o.mid.clone(), rad: r, prec };
            }
        }
        let (m, e) = self.mid.add(&o.mid).round(prec);
        Ball { mid: m, rad: self.rad.add(&o.rad).add(&e), prec }
    }

    fn product(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let (m, e) = self.mid.mul(&o.mid).round(prec);
        let r = self
            .mid
            .mag_upper()
            .mul(&o.rad)
            .add(&o.mid.mag_upper().mul(&self.rad))
            .add(&self.rad.mul(&o.rad))
            .add(&e);
        Ball { mid: m, rad: r, prec }
    }

    pub fn sqr(&self) -> Ball {
        self.product(self)
    }

    pub fn mul_i64(&self, v: i64) -> Ball {
        self.product(&Ball::from_i64(v, self.prec))
    }

    pub fn div_i64(&self, v: i64) -> Ball {
        self.div(&Ball::from_i64(v, self.prec))
    }

    /// Quotient; the radius is infinite if the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let lb = o.abs_lower();
        if lb.is_zero() || !self.is_finite() {
            return Ball { mid: Float::zero(), rad: Mag::INF, prec };
        }
        let (q, e) = self.mid.div(&o.mid, prec);
        let (q, e2) = q.round(prec);
        // |a/b - a'/b'| <= (|a'| rb + |b'| ra) / (|b'| (|b'| - rb))
        let num = self.mid.mag_upper().mul(&o.rad).add(&o.mid.mag_upper().mul(&self.rad));
        let den = o.mid.mag_lower().mul(&lb);
        let r = num.div(&den).add(&e).add(&e2);
        Ball { mid: q, rad: r, prec }
    }

    pub fn inv(&self) -> Ball {
        Ball::one(self.prec).div(self)
    }

    pub fn pow_u(&self, n: u64) -> Ball {
        let mut out = Ball::one(self.prec);
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = &out * &b;
            }
            n >>= 1;
            if n > 0 {
                b = b.sqr();
            }
        }
        out
    }

    pub fn pow_i(&self, n: i64) -> Ball {
        if n >= 0 {
            self.pow_u(n as u64)
        } else {
            self.pow_u(n.unsigned_abs()).inv()
        }
    }

    pub fn sqrt(&self) -> Ball {
        let prec = self.prec;
        if self.mid.sign() == Sign::Minus || !self.is_finite() {
            if self.mid.sign() == Sign::Minus && self.abs_lower().is_zero() {
                // Straddles zero: enclose [0, sqrt(mid + rad)].
                return self.sqrt_of_upper_half();
            }
            return Ball { mid: Float::zero(), rad: Mag::INF, prec };
        }
        if self.mid.is_zero() {
            let r = self.rad.sqrt_upper();
            return Ball { mid: Float::zero(), rad: r, prec };
        }
        let lower = self.abs_lower();
        if lower.is_zero() {
            return self.sqrt_of_upper_half();
        }
        let (m, e) = sqrt_float(&self.mid, prec);
        let r = self.rad.div(&lower.sqrt_lower()).add(&e);
        Ball { mid: m, rad: r, prec }
    }

    fn sqrt_of_upper_half(&self) -> Ball {
        let up = self.abs_upper().sqrt_upper().mul_2exp(-1);
        Ball { mid: up.to_float(), rad: up.add(&Mag::pow2(-(self.prec as i64))), prec: self.prec }
    }

    pub fn exp(&self) -> Ball {
        let prec = self.prec;
        if !self.is_finite() {
            return Ball { mid: Float::zero(), rad: Mag::INF, prec };
        }
        let e = match exp_float(&self.mid, prec + 4) {
            Some(e) => e,
            None => {
                if self.mid.sign() == Sign::Minus {
                    // exp(x) < 2^-(2^40): enclose [0, tiny].
                    let up = Mag::pow2(-(1i64 << 40));
                    return Ball { mid: Float::zero(), rad: up, prec };
                }
                return Ball { mid: Float::zero(), rad: Mag::INF, prec };
            }
        };
        let (m, re) = e.round(prec);
        let ab = e.mag_upper();
        let comp = ab.mul_2exp(-(prec as i64 + 4));
        let r = self.rad;
        let expm1 = if r.to_f64() <= 1.0 {
            r.mul(&Mag::from_f64(1.0).add(&r.mul_2exp(1)))
        } else {
            Mag::from_f64(libm::expm1(r.to_f64()) * (1.0 + 1e-12))
        };
        let rad = ab.add(&comp).mul(&expm1).add(&comp).add(&re);
        Ball { mid: m, rad, prec }
    }

    /// Natural logarithm; infinite radius if the ball is not positive.
    pub fn ln(&self) -> Ball {
        let prec = self.prec;
        if !self.is_positive() || !self.is_finite() {
            return Ball { mid: Float::zero(), rad: Mag::INF, prec };
        }
        let v = ln_float(&self.mid, prec + 8);
        let (m, re) = v.round(prec);
        let r = self.rad.div(&self.abs_lower()).add(&Mag::pow2(-(prec as i64 + 8))).add(&re);
        Ball { mid: m, rad: r, prec }
    }

    pub fn sin_cos(&self) -> (Ball, Ball) {
        let prec = self.prec;
        match sin_cos_float(&self.mid, prec + 8) {
            Some((s, c)) if self.is_finite() => {
                let comp = Mag::pow2(-(prec as i64 + 8));
                let (sm, se) = s.round(prec);
                let (cm, ce) = c.round(prec);
                let r = self.rad.add(&comp);
                (
                    Ball { mid: sm, rad: r.add(&se), prec },
                    Ball { mid: cm, rad: r.add(&ce), prec },
                )
            }
            _ => (
                Ball { mid: Float::zero(), rad: Mag::from_f64(1.0), prec },
                Ball { mid: Float::zero(), rad: Mag::from_f64(1.0), prec },
            ),
        }
    }

    pub fn sin(&self) -> Ball {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Ball {
        self.sin_cos().1
    }

    pub fn atan(&self) -> Ball {
        let prec = self.prec;
        let v = atan2_float(&self.mid, &Float::from_i64(1), prec + 8).unwrap();
        let (m, re) = v.round(prec);
        Ball { mid: m, rad: self.rad.add(&Mag::pow2(-(prec as i64 + 8))).add(&re), prec }
    }

    pub fn pi(prec: u32) -> Ball {
        let w = prec + 8;
        Ball::from_parts(Float::new(pi_fixed(w), -(w as i64)), Mag::pow2(-(w as i64)), prec)
    }

    pub fn ln2(prec: u32) -> Ball {
        let w = prec + 8;
        Ball::from_parts(Float::new(ln2_fixed(w), -(w as i64)), Mag::pow2(-(w as i64)), prec)
    }

    /// Decimal digits certified relative to the midpoint magnitude.
    pub fn certified_digits(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        if self.mid.is_zero() || !self.rad.is_finite() {
            return 0.0;
        }
        let lm = self.mid.mag_lower().log2();
        ((lm - self.rad.log2()) * core::f64::consts::LOG10_2).max(0.0)
    }

    /// Midpoint rendered with `digits` significant decimals.
    pub fn mid_decimal(&self, digits: usize) -> String {
        float_to_decimal(&self.mid, digits)
    }

    /// `mid +/- rad` rendering.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!("{} +/- {}", self.mid_decimal(digits), mag_to_decimal(&self.rad))
    }
}

fn sqrt_float(x: &Float, prec: u32) -> (Float, Mag) {
    // Scale so that the shifted mantissa has about 2*prec + 4 bits and an even exponent.
    let b = x.man.bits() as i64;
    let mut shift = 2 * prec as i64 + 4 - b;
    if (x.exp - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let m = if shift >= 0 { &x.man << shift as usize } else { &x.man >> (-shift) as usize };
    let extra = if shift < 0 { Mag::pow2(x.exp) } else { Mag::ZERO };
    let r = isqrt(&m);
    let e = (x.exp - shift) / 2;
    // Truncation inside the root (if any) perturbs the result by at most sqrt of it.
    (Float::new(r, e), Mag::pow2(e).add(&extra.sqrt_upper()))
}

/// Exact value of a decimal literal.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    let mut digits = String::from(ip);
    digits.push_str(fp);
    if !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let e10 = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e10 >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e10 as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e10) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let digits = digits.max(1);
    let q = x.to_rational().abs();
    let est = libm::floor((x.top() - 1) as f64 * core::f64::consts::LOG10_2) as i64;
    let ten = BigInt::from(10);
    let lo = num_traits::pow(ten.clone(), digits - 1);
    let hi = &lo * &ten;
    let mut e10 = est;
    let mut n;
    loop {
        let t = digits as i64 - 1 - e10;
        let scaled = if t >= 0 {
            &q * BigRational::from_integer(num_traits::pow(ten.clone(), t as usize))
        } else {
            &q / BigRational::from_integer(num_traits::pow(ten.clone(), (-t) as usize))
        };
        n = scaled.round().to_integer();
        if n >= hi {
            e10 += 1;
        } else if n < lo {
            e10 -= 1;
        } else {
            break;
        }
    }
    let s = n.to_str_radix(10);
    let sign = if x.sign() == Sign::Minus { "-" } else { "" };
    if digits == 1 {
        format!("{}{}e{}", sign, s, e10)
    } else {
        format!("{}{}.{}e{}", sign, &s[..1], &s[1..], e10)
    }
}

fn mag_to_decimal(m: &Mag) -> String {
    if m.is_zero() {
        return String::from("0");
    }
    if !m.is_finite() {
        return String::from("inf");
    }
    let l10 = m.log2() * core::f64::consts::LOG10_2;
    let e = libm::floor(l10);
    let f = libm::pow(10.0, l10 - e);
    format!("{:.3}e{}", f, e as i64)
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        self.sum(o)
    }
}

impl<'a> Sub<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        self.sum(&o.neg())
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        self.product(o)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = (self.certified_digits().min(self.prec as f64 * 0.30103) as usize).clamp(1, 60);
        write!(f, "{}", self.to_decimal_string(d + 1))
    }
}

/// Complex ball with independent real and imaginary balls.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn from_real(re: Ball) -> CBall {
        let p = re.prec;
        CBall { re, im: Ball::zero(p) }
    }

    pub fn from_i64(v: i64, prec: u32) -> CBall {
        CBall::from_real(Ball::from_i64(v, prec))
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> CBall {
        CBall::from_i64(1, prec)
    }

    pub fn i(prec: u32) -> CBall {
        CBall { re: Ball::zero(prec), im: Ball::one(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn scale(&self, r: &Ball) -> CBall {
        CBall { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_2exp(&self, k: i64) -> CBall {
        CBall { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    pub fn mul_i(&self) -> CBall {
        CBall { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> Ball {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> Ball {
        self.norm_sqr().sqrt()
    }

    /// Upper bound on the modulus.
    pub fn abs_upper(&self) -> Mag {
        self.re.abs_upper().add(&self.im.abs_upper())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, o: &CBall) -> bool {
        self.re.contains(&o.re) && self.im.contains(&o.im)
    }

    pub fn overlaps(&self, o: &CBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn inv(&self) -> CBall {
        let n = self.norm_sqr();
        CBall { re: self.re.div(&n), im: self.im.neg().div(&n) }
    }

    pub fn div(&self, o: &CBall) -> CBall {
        if o.im.is_exact() && o.im.mid.is_zero() {
            return CBall { re: self.re.div(&o.re), im: self.im.div(&o.re) };
        }
        let n = o.norm_sqr();
        let p = self * &o.conj();
        CBall { re: p.re.div(&n), im: p.im.div(&n) }
    }

    pub fn sqr(&self) -> CBall {
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).mul_2exp(1);
        CBall { re, im }
    }

    pub fn pow_u(&self, n: u64) -> CBall {
        let mut out = CBall::one(self.prec());
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = &out * &b;
            }
            n >>= 1;
            if n > 0 {
                b = b.sqr();
            }
        }
        out
    }

    pub fn exp(&self) -> CBall {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CBall { re: &m * &c, im: &m * &s }
    }

    /// `exp(i t)` for real `t`.
    pub fn expi(t: &Ball) -> CBall {
        let (s, c) = t.sin_cos();
        CBall { re: c, im: s }
    }

    /// Principal argument; the radius is infinite if the ball meets zero.
    pub fn arg(&self) -> Ball {
        let prec = self.prec();
        let a = match atan2_float(&self.im.mid, &self.re.mid, prec + 8) {
            Some(a) => a,
            None => return Ball { mid: Float::zero(), rad: Mag::INF, prec },
        };
        // |z| >= max(|re|, |im|) at the midpoint.
        let lower = self.re.mid.mag_lower().max(&self.im.mid.mag_lower());
        let rsum = self.re.rad.add(&self.im.rad);
        let r = if lower.cmp_mag(&rsum.mul_2exp(1)) != Ordering::Greater {
            Mag::INF
        } else {
            // The argument moves by at most asin(r/|z|) <= (pi/2) r / |z|.
            rsum.mul(&Mag::from_f64(1.5708)).div(&lower)
        };
        let (m, re) = a.round(prec);
        Ball { mid: m, rad: r.add(&re).add(&Mag::pow2(-(prec as i64 + 8))), prec }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> CBall {
        let re = self.norm_sqr().ln().mul_2exp(-1);
        CBall { re, im: self.arg() }
    }

    /// `exp(w ln z)` with the principal branch.
    pub fn pow(&self, w: &CBall) -> CBall {
        (w * &self.ln()).exp()
    }

    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!("{} + i*({})", self.re.to_decimal_string(digits), self.im.to_decimal_string(digits))
    }

    /// Minimum certified digits across both components, measured against
    /// the modulus so that a tiny component does not dominate.
    pub fn certified_digits(&self) -> f64 {
        let m = self.abs_upper();
        let r = self.re.rad.add(&self.im.rad);
        if r.is_zero() {
            return f64::INFINITY;
        }
        ((m.log2() - r.log2()) * core::f64::consts::LOG10_2).max(0.0)
    }
}

impl<'a> Add<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn add(self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn sub(self, o: &CBall) -> CBall {
        CBall { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CBall> for &'a CBall {
    type Output = CBall;
    fn mul(self, o: &CBall) -> CBall {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        CBall { re, im }
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i*({})", self.re, self.im)
    }
}

/// Complex embedding with `zeta_n -> exp(2 pi i / n)` and the principal square root.
pub trait EmbedComplex {
    fn embed_complex(&self, digits: u32) -> CBall;
}

/// `exp(2 pi i j / n)`.
pub fn root_of_unity(j: i64, n: u32, prec: u32) -> CBall {
    let j = j.rem_euclid(n as i64);
    if j == 0 {
        return CBall::one(prec);
    }
    if 4 * j == n as i64 {
        return CBall::i(prec);
    }
    if 2 * j == n as i64 {
        return CBall::from_i64(-1, prec);
    }
    if 4 * j == 3 * n as i64 {
        return CBall::i(prec).neg();
    }
    let wp = prec + 16;
    let t = Ball::pi(wp).mul_i64(2 * j).div_i64(n as i64);
    let z = CBall::expi(&t);
    CBall { re: z.re.with_prec(prec), im: z.im.with_prec(prec) }
}

/// Complex embedding at a given working precision in bits.
pub fn embed_cyclotomic_prec(x: &Cyclotomic, prec: u32) -> CBall {
    let mut acc = CBall::zero(prec);
    for (j, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let z = root_of_unity(j as i64, x.order(), prec);
        acc = &acc + &z.scale(&Ball::from_rational(c, prec));
    }
    acc
}

impl EmbedComplex for Cyclotomic {
    fn embed_complex(&self, digits: u32) -> CBall {
        embed_cyclotomic_prec(self, bits_for_digits(digits) + coeff_bits(self.coeffs()))
    }
}

impl EmbedComplex for QuadraticNumber {
    fn embed_complex(&self, digits: u32) -> CBall {
        let prec = bits_for_digits(digits) + coeff_bits(&[self.a.clone(), self.b.clone()]);
        let a = Ball::from_rational(&self.a, prec);
        let b = Ball::from_rational(&self.b, prec);
        let r = Ball::from_i64(self.d().abs(), prec).sqrt();
        if self.d() > 0 {
            CBall::from_real(&a + &(&b * &r))
        } else {
            CBall::new(a, &b * &r)
        }
    }
}

fn coeff_bits(c: &[BigRational]) -> u32 {
    // Extra working bits to absorb cancellation between large coefficients.
    c.iter().map(|q| q.numer().bits().saturating_sub(q.denom().bits()) as u32).max().unwrap_or(0) + 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn close(b: &Ball, x: f64, tol: f64) {
        assert!((b.to_f64() - x).abs() <= tol * x.abs().max(1.0), "{} vs {}", b, x);
    }

    #[test]
    fn embedded_constants_match_series() {
        for w in [64u32, 300, 1000, 4160] {
            let t = pi_fixed(w);
            let m = pi_machin(w);
            assert!((&t - &m).abs() <= BigInt::from(2), "pi at {}", w);
            let l = ln2_fixed(w);
            let s = ln2_series(w);
            assert!((&l - &s).abs() <= BigInt::from(2), "ln2 at {}", w);
        }
    }

    #[test]
    fn arithmetic_basics() {
        let p = 128;
        let a = Ball::from_rational(&rat(1, 3), p);
        let b = &(&a + &a) + &a;
        assert!(b.contains_rational(&rat(1, 1)));
        let c = a.mul_i64(3).div(&Ball::from_i64(7, p));
        assert!(c.contains_rational(&rat(1, 7)));
        assert!(Ball::from_i64(2, p).sqrt().sqr().contains_rational(&rat(2, 1)));
    }

    #[test]
    fn elementary_functions() {
        let p = 200;
        let one = Ball::one(p);
        close(&one.exp(), core::f64::consts::E, 1e-15);
        close(&Ball::from_i64(10, p).ln(), core::f64::consts::LN_10, 1e-15);
        close(&Ball::from_i64(-40, p).exp(), 4.248354255291589e-18, 1e-14);
        let (s, c) = Ball::from_i64(100, p).sin_cos();
        close(&s, -0.5063656411097588, 1e-14);
        close(&c, 0.8623188722876839, 1e-14);
        close(&Ball::from_i64(3, p).atan(), 1.2490457723982544, 1e-15);
        let x = Ball::from_rational(&rat(7, 5), p);
        let back = x.ln().exp();
        assert!(back.contains_rational(&rat(7, 5)));
        assert!(back.rad_f64() < 1e-55);
        // atan(1) * 4 = pi
        let four_atan = Ball::one(p).atan().mul_i64(4);
        assert!(four_atan.overlaps(&Ball::pi(p)));
    }

    #[test]
    fn complex_roots() {
        let z = root_of_unity(1, 3, 128);
        close(&z.re, -0.5, 1e-30);
        close(&z.im, 0.8660254037844386, 1e-15);
        let c = z.pow_u(3);
        assert!(c.re.contains_rational(&rat(1, 1)));
        assert!(c.im.contains_rational(&rat(0, 1)));
        let a = CBall::new(Ball::from_i64(3, 128), Ball::from_i64(4, 128));
        close(&a.abs(), 5.0, 1e-30);
        close(&a.arg(), 0.9272952180016122, 1e-15);
        let l = a.ln();
        let back = l.exp();
        assert!(back.re.contains_rational(&rat(3, 1)) && back.im.contains_rational(&rat(4, 1)));
    }

    #[test]
    fn decimal_round_trip() {
        let b = Ball::from_decimal_str("0.00000216906134759", 128).unwrap();
        assert_eq!(b.mid_decimal(12), "2.16906134759e-6");
        let b = Ball::from_decimal_str("-1.5e3", 64).unwrap();
        assert_eq!(b.mid_decimal(3), "-1.50e3");
        assert!(parse_decimal("1.2.3").is_none());
    }

    #[test]
    fn embed_examples() {
        let z = Cyclotomic::zeta_pow(3, 1).embed_complex(20);
        assert!(z.re.contains_rational(&rat(-1, 2)));
        assert!(z.im.rad_f64() < 1e-20);
        assert_eq!(z.im.mid_decimal(21), "8.66025403784438646764e-1");
        let one = Cyclotomic::one(7).embed_complex(10);
        assert!(one.re.is_exact() && one.im.is_exact());
    }

    #[test]
    fn mag_ops_bound() {
        let a = Mag::from_f64(0.1);
        let b = Mag::from_f64(0.2);
        assert!(a.add(&b).to_f64() >= 0.30000000000000004);
        assert!(a.mul(&b).to_f64() >= 0.02);
        assert!(b.sub_lower(&a).to_f64() <= 0.1);
        assert_eq!(Mag::pow2(-3).to_f64(), 0.125);
    }
}
