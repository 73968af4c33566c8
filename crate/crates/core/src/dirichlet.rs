//! Dirichlet characters with Conrey labels, Gauss sums, generalized Bernoulli
//! numbers, L-values with Euler factors removed, Kubota-Leopoldt values and
//! regularity of primes.
#![allow(non_snake_case)]

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{bernoulli_numbers, binomial, euler_phi, rat_int, small_factor, BigRational, Cyclotomic};
use crate::padic::{PadicEmbedding, PadicNumber};
use crate::real::{embed_cyclotomic_prec, Ball, CBall};
use crate::{Error, Result};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if g.gcd.is_one() {
        g.x.mod_floor(&BigInt::from(m)).to_u64()
    } else {
        None
    }
}

/// Smallest generator of `(Z/p^e)^x` for an odd prime `p`.
fn primitive_root(p: u64, e: u32) -> u64 {
    let m = p.pow(e);
    let phi = euler_phi(m);
    let fs = small_factor(phi);
    (2..m)
        .find(|&g| g % p != 0 && fs.iter().all(|&(q, _)| pow_mod(g, phi / q, m) != 1))
        .expect("cyclic group has a generator")
}

/// Phase of `chi_{p^e}(i, a)` as a fraction of a full turn with denominator `phi(p^e)`.
struct Component {
    q: u64,
    p: u64,
    e: u32,
    phi: u64,
    log: Vec<u64>,
}

impl Component {
    fn new(p: u64, e: u32) -> Self {
        let q = p.pow(e);
        let phi = euler_phi(q);
        let mut log = vec![u64::MAX; q as usize];
        if p == 2 {
            // a = (+-1) * 5^k; stored as k + (phi/2 if a = -5^k).
            if e >= 3 {
                let mut x = 1u64;
                for k in 0..phi / 2 {
                    log[x as usize] = k;
                    log[(q - x) as usize] = k + phi / 2;
                    x = x * 5 % q;
                }
            } else if e == 2 {
                log[1] = 0;
                log[3] = 1;
            } else {
                log[1 % q as usize] = 0;
            }
        } else {
            let g = primitive_root(p, e);
            let mut x = 1u64;
            for k in 0..phi {
                log[x as usize] = k;
                x = x * g % q;
            }
        }
        Component { q, p, e, phi, log }
    }

    /// Numerator of the phase over `phi`.
    fn phase(&self, i: u64, a: u64) -> u64 {
        let (li, la) = (self.log[(i % self.q) as usize], self.log[(a % self.q) as usize]);
        if self.p != 2 {
            return (li as u128 * la as u128 % self.phi as u128) as u64;
        }
        match self.e {
            1 => 0,
            2 => {
                if li == 1 && la == 1 {
                    1
                } else {
                    0
                }
            }
            _ => {
                let h = self.phi / 2;
                let (si, ki) = (li >= h, li % h);
                let (sa, ka) = (la >= h, la % h);
                // (1-eps_i)(1-eps_a)/8 + k_i k_a / 2^(e-2), scaled by phi = 2^(e-1).
                let mut t = (ki as u128 * ka as u128 % h as u128) as u64 * 2;
                if si && sa {
                    t += h;
                }
                t % self.phi
            }
        }
    }
}

/// Dirichlet character `chi_N(i, .)` in Conrey's labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    order: u32,
    /// `chi(a) = zeta_order^exps[a]`, or `None` when `gcd(a, N) > 1`.
    exps: Vec<Option<u32>>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 || modulus > 10_000_000 {
            return Err(Error::InvalidCharacter(format!("modulus {} out of range", modulus)));
        }
        let index = index % modulus;
        let index = if modulus == 1 { 1 } else { index };
        if index.gcd(&modulus) != 1 {
            return Err(Error::InvalidCharacter(format!("index {} not coprime to {}", index, modulus)));
        }
        let comps: Vec<Component> = small_factor(modulus).into_iter().map(|(p, e)| Component::new(p, e)).collect();
        let d = comps.iter().fold(1u64, |acc, c| acc.lcm(&c.phi));
        let raw: Vec<Option<u64>> = (0..modulus)
            .map(|a| {
                if a.gcd(&modulus) != 1 && modulus > 1 {
                    return None;
                }
                let mut t = 0u64;
                for c in &comps {
                    t = (t + c.phase(index, a) * (d / c.phi)) % d;
                }
                Some(t)
            })
            .collect();
        let g = raw.iter().flatten().fold(d, |acc, &x| acc.gcd(&x));
        let order = (d / g) as u32;
        let exps = raw.iter().map(|x| x.map(|t| (t / g) as u32)).collect();
        Ok(DirichletCharacter { modulus, index, order, exps })
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::new(modulus, 1).expect("trivial character")
    }

    /// Parses a label `N.i`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (n, i) = label
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::InvalidCharacter(format!("label {:?} is not of the form N.i", label)))?;
        let n: u64 = n.parse().map_err(|_| Error::InvalidCharacter(format!("bad modulus in {:?}", label)))?;
        let i: u64 = i.parse().map_err(|_| Error::InvalidCharacter(format!("bad index in {:?}", label)))?;
        Self::new(n, i)
    }

    /// The character mod `N` with the prescribed values, e.g. `chi(3) = zeta3`.
    pub fn from_values(modulus: u64, values: &[(u64, Cyclotomic)]) -> Result<Self> {
        for i in 1..=modulus.max(1) {
            if i.gcd(&modulus) != 1 && modulus > 1 {
                continue;
            }
            let chi = Self::new(modulus, i)?;
            if values.iter().all(|(a, v)| chi.value(*a as i64) == *v) {
                return Ok(chi);
            }
        }
        Err(Error::InvalidCharacter(format!("no character mod {} has the given values", modulus)))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.modulus, self.index)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent `e` with `chi(a) = zeta_order^e`, or `None` if `chi(a) = 0`.
    pub fn exponent(&self, a: i64) -> Option<u32> {
        self.exps[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, a: i64) -> Cyclotomic {
        match self.exponent(a) {
            None => Cyclotomic::zero(self.order),
            Some(e) => Cyclotomic::zeta_pow(self.order, e as i64),
        }
    }

    /// `chi(-1)` as `+1` or `-1`.
    pub fn parity(&self) -> i32 {
        match self.exponent(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        let mut divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        divs.sort_unstable();
        for d in divs {
            let ok = (1..n)
                .filter(|a| a.gcd(&n) == 1 && a % d == 1 % d)
                .all(|a| self.exps[a as usize] == Some(0));
            if ok {
                return d;
            }
        }
        n
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing `self`.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        if f == self.modulus {
            return self.clone();
        }
        let n = self.modulus as i64;
        for i in 1..=f {
            if i.gcd(&f) != 1 && f > 1 {
                continue;
            }
            let c = Self::new(f, i).unwrap();
            if (1..n).filter(|a| a.gcd(&n) == 1).all(|a| c.exponent(a).map(|e| self.scaled(&c, e)) == self.exponent(a)) {
                return c;
            }
        }
        unreachable!("a primitive character induces every character")
    }

    /// Re-expresses an exponent of `other` in units of `1/self.order`, if possible.
    fn scaled(&self, other: &Self, e: u32) -> u32 {
        let num = e as u64 * self.order as u64;
        if num % other.order as u64 == 0 {
            (num / other.order as u64) as u32 % self.order
        } else {
            u32::MAX
        }
    }

    /// The character mod `m` (a multiple of the modulus) induced by `self`.
    pub fn induce(&self, m: u64) -> Result<Self> {
        if m % self.modulus != 0 {
            return Err(Error::InvalidCharacter(format!("{} is not a multiple of {}", m, self.modulus)));
        }
        if m == self.modulus {
            return Ok(self.clone());
        }
        let gens: Vec<u64> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
        for i in 1..m {
            if i.gcd(&m) != 1 {
                continue;
            }
            let c = Self::new(m, i)?;
            if c.order != self.order {
                continue;
            }
            if gens.iter().all(|&a| c.exponent(a as i64) == self.exponent(a as i64)) {
                return Ok(c);
            }
        }
        unreachable!("induced character exists")
    }

    pub fn conj(&self) -> Self {
        let j = inv_mod_u64(self.index, self.modulus).unwrap_or(1);
        Self::new(self.modulus, j).unwrap()
    }

    /// Product of two characters of the same modulus.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.modulus != o.modulus {
            return Err(Error::InvalidCharacter(String::from("moduli differ")));
        }
        Self::new(self.modulus, (self.index as u128 * o.index as u128 % self.modulus as u128) as u64)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.modulus, pow_mod(self.index, e as u64, self.modulus)).unwrap()
    }

    /// Table `a,value` for `a = 0 .. N-1`.
    pub fn table_csv(&self) -> String {
        let mut s = String::from("a,value\n");
        for a in 0..self.modulus {
            s.push_str(&format!("{},{}\n", a, self.value(a as i64)));
        }
        s
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// `G(chi) = sum chi*(a) exp(2 pi i a / f)` over the primitive character of
/// conductor `f`; equals 1 for the trivial character.
pub fn gauss_sum(chi: &DirichletCharacter) -> Cyclotomic {
    let c = chi.primitive();
    let f = c.modulus();
    let l = (f as u32).lcm(&c.order());
    let mut coeffs = vec![BigRational::zero(); l as usize];
    for a in 0..f {
        if let Some(e) = c.exponent(a as i64) {
            let k = (a * (l as u64 / f) + e as u64 * (l / c.order()) as u64) % l as u64;
            coeffs[k as usize] += BigRational::one();
        }
    }
    Cyclotomic::from_coeffs(l, coeffs)
}

/// Generalized Bernoulli number `B_{n,psi}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenBernoulli {
    pub n: u32,
    pub character: DirichletCharacter,
    pub value: Cyclotomic,
}

/// `B_{n,psi} = N^(n-1) sum_{a=1}^{N} psi(a) B_n(a/N)` with `N` the modulus of `psi`.
pub fn gen_bernoulli(n: u32, psi: &DirichletCharacter) -> GenBernoulli {
    let bern = bernoulli_numbers(n as usize);
    let big_n = psi.modulus();
    let ord = psi.order();
    let mut classes = vec![BigRational::zero(); ord as usize];
    let nn = rat_int(big_n as i64);
    for a in 1..=big_n {
        let Some(e) = psi.exponent(a as i64) else { continue };
        // N^(n-1) B_n(a/N) = sum_j C(n,j) B_j a^(n-j) N^(j-1)
        let mut t = BigRational::zero();
        for j in 0..=n {
            if bern[j as usize].is_zero() {
                continue;
            }
            let term = &bern[j as usize]
                * BigRational::from_integer(binomial(n as u64, j as u64))
                * BigRational::from_integer(num_traits::pow(BigInt::from(a), (n - j) as usize))
                * pow_rat(&nn, j as i64 - 1);
            t += term;
        }
        classes[e as usize] += t;
    }
    let value = Cyclotomic::from_coeffs(ord, classes);
    GenBernoulli { n, character: psi.clone(), value }
}

fn pow_rat(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// `n^(-s)` for a positive real ball `n`.
fn real_pow_neg(n: &Ball, s: &CBall) -> CBall {
    let l = n.ln();
    CBall::new(&s.re.neg() * &l, &s.im.neg() * &l).exp()
}

/// Hurwitz zeta `zeta(s, a)` for `Re s > 1` and `a > 0` by Euler-Maclaurin
/// summation with an explicit remainder bound.
pub fn hurwitz_zeta(s: &CBall, a: &Ball, prec: u32) -> Result<CBall> {
    let sigma = s.re.to_f64() - s.re.rad_f64();
    if !(sigma > 1.0) {
        return Err(Error::Domain(String::from("Hurwitz zeta needs Re(s) > 1")));
    }
    let wp = prec + 20;
    let sabs = libm::hypot(s.re.to_f64(), s.im.to_f64()) + 1.0;
    let m_terms = (prec as f64 / 3.0 + sabs) as i64 + 8;
    let ma = &Ball::from_i64(m_terms, wp) + a;
    let target = -(prec as f64) - 8.0;
    // Choose J from an f64 estimate, then bound rigorously below.
    let maf = ma.to_f64();
    let mut jj = 1u32;
    loop {
        let mut lg = 2.0;
        for i in 0..2 * jj {
            lg += libm::log2(libm::hypot(s.re.to_f64() + i as f64, s.im.to_f64()));
        }
        lg -= 2.0 * jj as f64 * libm::log2(2.0 * core::f64::consts::PI);
        lg += (1.0 - sigma - 2.0 * jj as f64) * libm::log2(maf);
        if lg < target || jj > 400 {
            break;
        }
        jj += 1;
    }
    let mut acc = CBall::zero(wp);
    for k in 0..m_terms {
        let x = &Ball::from_i64(k, wp) + a;
        acc = &acc + &real_pow_neg(&x, s);
    }
    let ms = real_pow_neg(&ma, s);
    let one = CBall::one(wp);
    let sm1 = &CBall::new(s.re.with_prec(wp), s.im.with_prec(wp)) - &one;
    acc = &acc + &(&CBall::from_real(ma.clone()) * &ms).div(&sm1);
    acc = &acc + &ms.mul_2exp(-1);
    let bern = bernoulli_numbers(2 * jj as usize);
    let sw = CBall::new(s.re.with_prec(wp), s.im.with_prec(wp));
    let inv_ma = ma.inv();
    let inv_ma2 = inv_ma.sqr();
    // rising factorial (s)_{2j-1} and (M+a)^(-s-2j+1)
    let mut rising = sw.clone();
    let mut pw = ms.scale(&inv_ma);
    let mut fact = BigInt::from(2);
    for j in 1..=jj as usize {
        if j > 1 {
            let f1 = &sw + &CBall::from_i64(2 * j as i64 - 3, wp);
            let f2 = &sw + &CBall::from_i64(2 * j as i64 - 2, wp);
            rising = &(&rising * &f1) * &f2;
            pw = pw.scale(&inv_ma2);
            fact *= BigInt::from((2 * j - 1) * (2 * j));
        }
        let c = &bern[2 * j] / BigRational::from_integer(fact.clone());
        acc = &acc + &(&rising * &pw).scale(&Ball::from_rational(&c, wp));
    }
    // |R| <= 4 |(s)_{2J}| / (2 pi)^{2J} * (M+a)^{1-sigma-2J} / (sigma+2J-1)
    let lp = 64;
    let mut r = Ball::from_i64(4, lp);
    for i in 0..2 * jj as i64 {
        let f = CBall::new(&s.re.with_prec(lp) + &Ball::from_i64(i, lp), s.im.with_prec(lp));
        r = &r * &f.abs();
    }
    let two_pi = Ball::pi(lp).mul_2exp(1);
    r = r.div(&two_pi.pow_u(2 * jj as u64));
    let ex = Ball::from_f64(1.0 - sigma - 2.0 * jj as f64, lp);
    r = &r * &(&ex * &ma.with_prec(lp).ln()).exp();
    r = r.div(&Ball::from_f64(sigma + 2.0 * jj as f64 - 1.0, lp));
    let err = r.abs_upper();
    let re = acc.re.add_error(err);
    let im = acc.im.add_error(err);
    Ok(CBall::new(re.with_prec(prec), im.with_prec(prec)))
}

/// `L(chi, s) * prod_{l in strip} (1 - chi(l) l^(-s))` for `Re s > 1`.
pub fn dirichlet_L_stripped(chi: &DirichletCharacter, s: &CBall, strip: &[u64], digits: u32) -> Result<CBall> {
    let sigma = s.re.to_f64() - s.re.rad_f64();
    if !(sigma > 1.0) {
        return Err(Error::Domain(String::from("direct summation requires Re(s) > 1")));
    }
    let prec = crate::real::bits_for_digits(digits) + 16;
    let n = chi.modulus();
    let nb = Ball::from_i64(n as i64, prec);
    let mut acc = CBall::zero(prec);
    for a in 1..=n {
        let Some(e) = chi.exponent(a as i64) else { continue };
        let x = Ball::from_i64(a as i64, prec).div(&nb);
        let z = hurwitz_zeta(s, &x, prec)?;
        let w = crate::real::root_of_unity(e as i64, chi.order(), prec);
        acc = &acc + &(&w * &z);
    }
    acc = &acc * &real_pow_neg(&nb, s);
    for &l in strip {
        let Some(e) = chi.exponent(l as i64) else { continue };
        let w = crate::real::root_of_unity(e as i64, chi.order(), prec);
        let f = &CBall::one(prec) - &(&w * &real_pow_neg(&Ball::from_i64(l as i64, prec), s));
        acc = &acc * &f;
    }
    Ok(acc)
}

/// Direct partial sum `sum_{n <= terms} chi(n) n^(-s)` with the tail
/// `sum_{n > M} n^(-sigma) <= M^(1-sigma)/(sigma-1)` added to the radius.
pub fn dirichlet_L_direct(chi: &DirichletCharacter, s: &CBall, terms: u64, prec: u32) -> Result<CBall> {
    let sigma = s.re.to_f64() - s.re.rad_f64();
    if !(sigma > 1.0) {
        return Err(Error::Domain(String::from("direct summation requires Re(s) > 1")));
    }
    let mut acc = CBall::zero(prec);
    for m in 1..=terms {
        let Some(e) = chi.exponent(m as i64) else { continue };
        let w = crate::real::root_of_unity(e as i64, chi.order(), prec);
        acc = &acc + &(&w * &real_pow_neg(&Ball::from_i64(m as i64, prec), s));
    }
    let lp = 64;
    let sg = Ball::from_f64(sigma, lp);
    let one = Ball::one(lp);
    let tail = (&(&one - &sg) * &Ball::from_i64(terms as i64, lp).ln()).exp().div(&(&sg - &one));
    let t = tail.abs_upper();
    Ok(CBall::new(acc.re.add_error(t), acc.im.add_error(t)))
}

/// Value of `L_p(psi, s)` at an integer `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlValue {
    pub value: PadicNumber,
    /// `s = 1 - n` with `n >= 1` of the right parity: the value is exact to `O(p^K)`.
    pub interpolation: bool,
    /// Interpolation point `s' = 1 - n'` with `s' = s mod (p-1)`.
    pub congruent_point: i64,
    /// Whether `value` agrees modulo `p` with the exact formula at `congruent_point`.
    pub mod_p_certified: bool,
}

/// Bernoulli numbers `B_0 .. B_m` modulo `p` (with `B_1 = -1/2`), `m < p - 1`.
pub fn bernoulli_mod_p(p: u64, m: usize) -> Vec<u64> {
    assert!((m as u64) < p.saturating_sub(1) || m == 0);
    // x/(e^x - 1) = 1 / sum_{j>=0} x^j/(j+1)!
    let mut invfact = vec![1u64; m + 2];
    let mut f = 1u64;
    for j in 1..=m + 1 {
        f = f * j as u64 % p;
        invfact[j] = inv_mod_u64(f, p).unwrap();
    }
    let d: Vec<u64> = (0..=m).map(|j| invfact[j + 1]).collect();
    let mut c = vec![0u64; m + 1];
    c[0] = 1;
    for n in 1..=m {
        let mut s = 0u128;
        for j in 1..=n {
            s += d[j] as u128 * c[n - j] as u128;
            if j % 16 == 0 {
                s %= p as u128;
            }
        }
        c[n] = (p - (s % p as u128) as u64) % p;
    }
    // B_n = n! c_n
    let mut f = 1u64;
    (0..=m)
        .map(|n| {
            if n > 0 {
                f = f * n as u64 % p;
            }
            (c[n] as u128 * f as u128 % p as u128) as u64
        })
        .collect()
}

/// `L_p(psi, s)` as a p-adic number.
///
/// At interpolation points `s = 1 - n` the value is
/// `(1 - psi(p) p^(n-1)) (-B_{n,psi} / n)`. Elsewhere the series
/// `1/(F(s-1)) sum_{a <= F, p !| a} psi(a) a^(1-s) sum_j C(1-s, j) B_j (F/a)^j`
/// with `F = N p` is summed; it reproduces the formula above at interpolation
/// points and is congruent modulo `p` across `s mod (p-1)`.
pub fn kl_padic_value(psi: &DirichletCharacter, s: i64, emb: &PadicEmbedding, k: u32) -> Result<KlValue> {
    let p = emb.p();
    let n_mod = psi.modulus();
    if n_mod % p == 0 {
        return Err(Error::PrimeDividesConductor(p));
    }
    if s == 1 {
        return Err(Error::Pole);
    }
    let n0 = 1 - s;
    let parity_ok = (psi.parity() == 1) == (n0.rem_euclid(2) == 0);
    if !parity_ok {
        return Err(Error::ParityMismatch { n: n0 });
    }
    let pm1 = p as i64 - 1;
    let mut n1 = n0.rem_euclid(pm1);
    if n1 == 0 {
        n1 = pm1;
    }
    let congruent_point = 1 - n1;
    if n0 >= 1 {
        let value = kl_exact(psi, n0 as u32, emb, k)?;
        let cert = kl_mod_p(psi, n1 as usize, emb)?;
        let ok = value.valuation_lower() < 0 || value.residue() == Some(cert);
        return Ok(KlValue { value, interpolation: true, congruent_point, mod_p_certified: ok });
    }
    let value = kl_series(psi, s, emb, k)?;
    let cert = kl_mod_p(psi, n1 as usize, emb)?;
    let ok = value.valuation_lower() >= 0 && value.residue() == Some(cert);
    Ok(KlValue { value, interpolation: false, congruent_point, mod_p_certified: ok })
}

fn kl_exact(psi: &DirichletCharacter, n: u32, emb: &PadicEmbedding, k: u32) -> Result<PadicNumber> {
    let p = emb.p();
    let b = gen_bernoulli(n, psi).value;
    let psip = psi.value(p as i64);
    let pn = Cyclotomic::from_rational(1, rat_int(num_traits::pow(BigInt::from(p), (n - 1) as usize)));
    let euler = &Cyclotomic::one(1) - &(&psip * &pn);
    let v = (&euler * &b).scale(&BigRational::new((-1).into(), n.into()));
    emb.embed_cyclotomic(&v, k)
}

/// Exact formula at `s = 1 - n` reduced modulo `p` (Bernoulli numbers mod `p`).
fn kl_mod_p(psi: &DirichletCharacter, n: usize, emb: &PadicEmbedding) -> Result<u64> {
    let p = emb.p();
    let bm = bernoulli_mod_p(p, n.min(p as usize - 2));
    let big_n = psi.modulus();
    let mut total = 0u64;
    let zeta_img = |e: u32| -> Result<u64> {
        let z = emb.embed_cyclotomic(&Cyclotomic::zeta_pow(psi.order(), e as i64), 1)?;
        Ok(z.residue().unwrap_or(0))
    };
    if n > p as usize - 2 {
        return Err(Error::InsufficientPrecision(String::from("congruent point outside Bernoulli range")));
    }
    for a in 1..=big_n {
        let Some(e) = psi.exponent(a as i64) else { continue };
        // N^(n-1) B_n(a/N) mod p
        let mut t = 0u64;
        for j in 0..=n {
            let c = binomial(n as u64, j as u64).mod_floor(&BigInt::from(p)).to_u64().unwrap();
            let nj = if j >= 1 {
                pow_mod(big_n, (j - 1) as u64, p)
            } else {
                inv_mod_u64(big_n % p, p).unwrap()
            };
            let term = (c as u128 * bm[j] as u128 % p as u128 * pow_mod(a, (n - j) as u64, p) as u128 % p as u128
                * nj as u128
                % p as u128) as u64;
            t = (t + term) % p;
        }
        total = (total + t * zeta_img(e)? % p) % p;
    }
    // (1 - psi(p) p^(n-1)) (-B/n); the Euler factor is 1 mod p for n >= 2.
    let mut euler = 1u64;
    if n == 1 {
        let e = psi.exponent(p as i64).unwrap();
        euler = (1 + p - zeta_img(e)?) % p;
    }
    let ninv = inv_mod_u64(n as u64 % p, p).ok_or(Error::DenominatorDivisibleByP(p))?;
    Ok((p - total % p) % p * euler % p * ninv % p)
}

fn kl_series(psi: &DirichletCharacter, s: i64, emb: &PadicEmbedding, k: u32) -> Result<PadicNumber> {
    let p = emb.p();
    let big_n = psi.modulus();
    let f = big_n * p;
    let w = k as i64 + 6;
    let jmax = (k + 8) as usize;
    let bern = bernoulli_numbers(jmax);
    let bern_p: Vec<PadicNumber> = bern.iter().map(|b| PadicNumber::from_rational(b, p, w)).collect();
    let e1 = 1 - s;
    // C(1-s, j)
    let mut binoms = vec![BigRational::one()];
    for j in 1..=jmax {
        let prev = binoms[j - 1].clone();
        binoms.push(prev * BigRational::new(BigInt::from(e1 - j as i64 + 1), BigInt::from(j as i64)));
    }
    let binoms_p: Vec<PadicNumber> = binoms.iter().map(|b| PadicNumber::from_rational(b, p, w)).collect();
    let fp = PadicNumber::from_i64(f as i64, p, w);
    let mut classes: Vec<PadicNumber> = vec![PadicNumber::exact_zero(p); psi.order() as usize];
    for a in 1..=f {
        if a % p == 0 {
            continue;
        }
        let Some(e) = psi.exponent(a as i64) else { continue };
        let ap = PadicNumber::from_i64(a as i64, p, w);
        let ratio = fp.div(&ap)?;
        let mut inner = PadicNumber::exact_zero(p);
        let mut pw = PadicNumber::from_i64(1, p, w);
        for j in 0..=jmax {
            if !bern[j].is_zero() && !binoms[j].is_zero() {
                inner = inner.add(&binoms_p[j].mul(&bern_p[j]).mul(&pw));
            }
            pw = pw.mul(&ratio);
        }
        let apow = ap.pow(e1)?;
        classes[e as usize] = classes[e as usize].add(&apow.mul(&inner));
    }
    let mut total = PadicNumber::exact_zero(p);
    for (e, c) in classes.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        let z = emb.embed_cyclotomic(&Cyclotomic::zeta_pow(psi.order(), e as i64), w as u32)?;
        total = total.add(&c.mul(&z));
    }
    let denom = PadicNumber::from_i64(f as i64 * (s - 1), p, w);
    let v = total.div(&denom)?;
    // Truncating the j-sum at jmax costs terms of valuation >= jmax - 2.
    let v = v.truncate((jmax as i64 - 3).min(k as i64 + v.valuation_lower().min(0)));
    match v.abs_prec() {
        Some(n) if n < k as i64 + v.valuation_lower().min(k as i64).min(0) => {
            Err(Error::InsufficientPrecision(format!("p-adic series reached O(p^{})", n)))
        }
        _ => Ok(v.truncate(k as i64)),
    }
}

/// Regularity of `p` with the irregular indices `2k <= p - 3` as witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub p: u64,
    pub regular: bool,
    pub irregular_indices: Vec<u64>,
}

/// Tests `p | B_2, B_4, ..., B_{p-3}` via the even series
/// `(x/2) coth(x/2) = sum B_{2k} x^{2k} / (2k)!` modulo `p`.
pub fn is_regular_prime(p: u64) -> Result<Regularity> {
    if p < 3 || !crate::exact::is_prime_u64(p) {
        return Err(Error::Domain(format!("{} is not an odd prime", p)));
    }
    let m = ((p - 3) / 2) as usize;
    if m == 0 {
        return Ok(Regularity { p, regular: true, irregular_indices: Vec::new() });
    }
    let mut invfact = vec![1u64; 2 * m + 2];
    let mut f = 1u64;
    for j in 1..2 * m + 2 {
        f = f * j as u64 % p;
        invfact[j] = inv_mod_u64(f, p).unwrap();
    }
    let inv4 = inv_mod_u64(4, p).unwrap();
    // C(t) = sum t^k / (4^k (2k)!), S(t) = sum t^k / (4^k (2k+1)!), t = x^2.
    let mut cs = vec![0u64; m + 1];
    let mut ss = vec![0u64; m + 1];
    let mut q = 1u64;
    for kk in 0..=m {
        cs[kk] = q * invfact[2 * kk] % p;
        ss[kk] = q * invfact[2 * kk + 1] % p;
        q = q * inv4 % p;
    }
    // r = C / S, S(0) = 1.
    let mut r = vec![0u64; m + 1];
    for n in 0..=m {
        let mut acc = cs[n] as u128;
        let mut sub = 0u128;
        for j in 1..=n {
            sub += ss[j] as u128 * r[n - j] as u128;
            if j % 16 == 0 {
                sub %= p as u128;
            }
        }
        acc += p as u128 - sub % p as u128;
        r[n] = (acc % p as u128) as u64;
    }
    // B_{2k} = (2k)! r_k
    let mut irregular = Vec::new();
    for kk in 1..=m {
        if r[kk] == 0 {
            irregular.push(2 * kk as u64);
        }
    }
    Ok(Regularity { p, regular: irregular.is_empty(), irregular_indices: irregular })
}

/// Complex embedding of a character value at working precision `prec`.
pub fn character_value_complex(chi: &DirichletCharacter, a: i64, prec: u32) -> CBall {
    match chi.exponent(a) {
        None => CBall::zero(prec),
        Some(e) => crate::real::root_of_unity(e as i64, chi.order(), prec),
    }
}

/// Complex embedding of a cyclotomic number at working precision `prec`.
pub fn cyclotomic_complex(x: &Cyclotomic, prec: u32) -> CBall {
    embed_cyclotomic_prec(x, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, QuadraticNumber};
    use crate::real::EmbedComplex;

    fn psi7() -> DirichletCharacter {
        DirichletCharacter::from_label("7.2").unwrap()
    }

    #[test]
    fn conrey_seven_two() {
        let psi = psi7();
        assert_eq!(psi.order(), 3);
        assert_eq!(psi.value(3), Cyclotomic::zeta_pow(3, 1));
        assert!(psi.is_even());
        assert_eq!(psi.conductor(), 7);
        let found = DirichletCharacter::from_values(7, &[(3, Cyclotomic::zeta_pow(3, 1))]).unwrap();
        assert_eq!(found.label(), "7.2");
    }

    #[test]
    fn multiplicativity_and_conductors() {
        for n in [1u64, 4, 8, 9, 12, 15, 16, 21, 24, 25] {
            for i in 1..n.max(2) {
                if i.gcd(&n) != 1 {
                    continue;
                }
                let c = DirichletCharacter::new(n, i).unwrap();
                for a in 0..n as i64 {
                    for b in 0..n as i64 {
                        assert_eq!(c.value(a * b), &c.value(a) * &c.value(b), "{} at {} {}", c, a, b);
                    }
                }
                let prim = c.primitive();
                assert_eq!(prim.induce(n).unwrap(), c);
            }
        }
        // The quadratic character mod 8 with index 5 has conductor 8; 7 -> conductor 8.
        assert_eq!(DirichletCharacter::new(8, 5).unwrap().conductor(), 8);
        assert_eq!(DirichletCharacter::new(4, 3).unwrap().parity(), -1);
    }

    #[test]
    fn gauss_sums() {
        assert_eq!(gauss_sum(&DirichletCharacter::trivial(7)), Cyclotomic::one(1));
        let q5 = DirichletCharacter::new(5, 4).unwrap();
        let g = gauss_sum(&q5);
        assert_eq!(g, QuadraticNumber::sqrt_d_cyclotomic(5));
        let psi = psi7();
        let g = gauss_sum(&psi);
        let gb = gauss_sum(&psi.conj());
        assert_eq!(&g * &gb, Cyclotomic::from_int(1, 7));
        let z = g.embed_complex(20);
        let n = z.norm_sqr();
        assert!(n.contains(&Ball::from_i64(7, 64)) || (n.to_f64() - 7.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_values() {
        let t = DirichletCharacter::trivial(1);
        assert_eq!(gen_bernoulli(1, &t).value, Cyclotomic::from_rational(1, rat(1, 2)));
        assert_eq!(gen_bernoulli(2, &t).value, Cyclotomic::from_rational(1, rat(1, 6)));
        assert!(gen_bernoulli(3, &psi7()).value.is_zero());
        // B_{1,chi} = -1/2 * (h of Q(i)) * 2 / w... for chi_4: B_{1,chi} = -1/2.
        let c4 = DirichletCharacter::new(4, 3).unwrap();
        assert_eq!(gen_bernoulli(1, &c4).value, Cyclotomic::from_rational(1, rat(-1, 2)));
    }

    #[test]
    fn zeta_two() {
        let t = DirichletCharacter::trivial(1);
        let s = CBall::from_i64(2, 128);
        let z = dirichlet_L_stripped(&t, &s, &[], 30).unwrap();
        let pi = Ball::pi(160);
        let expect = pi.sqr().div_i64(6);
        assert!(z.re.overlaps(&expect), "{}", z);
        assert!(z.re.certified_digits() > 30.0);
        let z2 = dirichlet_L_stripped(&t, &s, &[2], 30).unwrap();
        assert!(z2.re.overlaps(&expect.mul_i64(3).div_i64(4)));
    }

    #[test]
    fn l_value_matches_direct_sum() {
        let psi2 = psi7().pow(2);
        let s = CBall::from_i64(14, 128);
        let a = dirichlet_L_stripped(&psi2, &s, &[7], 25).unwrap();
        let b = dirichlet_L_direct(&psi2, &s, 1000, 128).unwrap();
        assert!(a.overlaps(&b));
        assert!(!a.contains_zero());
    }

    #[test]
    fn regular_primes() {
        assert!(is_regular_prime(5).unwrap().regular);
        assert!(is_regular_prime(7).unwrap().regular);
        let r = is_regular_prime(37).unwrap();
        assert_eq!(r.irregular_indices, vec![32]);
        // Exact Bernoulli numerators as an independent route.
        let b = bernoulli_numbers(160);
        for p in crate::exact::primes_up_to(160).into_iter().filter(|&p| p > 3) {
            let exact: Vec<u64> = (1..=(p - 3) / 2)
                .map(|k| 2 * k)
                .filter(|&k| b[k as usize].numer().mod_floor(&BigInt::from(p)).is_zero())
                .collect();
            assert_eq!(is_regular_prime(p).unwrap().irregular_indices, exact, "p = {}", p);
        }
    }

    fn emb(a: i64, b: i64) -> PadicEmbedding {
        PadicEmbedding::from_generator(&QuadraticNumber::from_ints(-3, a, b), 12).unwrap()
    }

    #[test]
    fn kl_at_minus_29() {
        let e = emb(5, -2);
        let v = kl_padic_value(&psi7(), -29, &e, 3).unwrap();
        assert!(v.interpolation && v.mod_p_certified);
        assert_eq!(format!("{}", v.value), "12 + 36*37 + 23*37^2 + O(37^3)");
        // The series route reproduces the closed formula.
        let s = kl_series(&psi7(), -29, &e, 6).unwrap();
        let x = kl_exact(&psi7(), 30, &e, 6).unwrap();
        assert!(s.congruent(&x, 6), "{} vs {}", s, x);
    }

    #[test]
    fn kl_at_seven() {
        let v = kl_padic_value(&psi7(), 7, &emb(5, -2), 3).unwrap();
        assert!(!v.interpolation && v.mod_p_certified);
        assert_eq!(v.value.residue(), Some(12));
        assert_eq!(v.congruent_point, -29);
        let w = kl_padic_value(&psi7(), 7, &emb(14, 9), 4).unwrap();
        assert_eq!(w.value.valuation(), Some(1));
        assert_eq!(format!("{}", w.value), "148*439 + 232*439^2 + 352*439^3 + O(439^4)");
        assert!(w.mod_p_certified);
    }

    #[test]
    fn kl_errors() {
        let e = emb(5, -2);
        assert_eq!(kl_padic_value(&psi7(), -30, &e, 3), Err(Error::ParityMismatch { n: 31 }));
        assert_eq!(kl_padic_value(&psi7(), 1, &e, 3), Err(Error::Pole));
        let c37 = DirichletCharacter::new(37, 2).unwrap();
        assert_eq!(kl_padic_value(&c37, -1, &e, 3), Err(Error::PrimeDividesConductor(37)));
    }

    #[test]
    fn bernoulli_mod_p_matches_exact() {
        let b = bernoulli_numbers(40);
        let m = bernoulli_mod_p(43, 40);
        for (j, bj) in b.iter().enumerate() {
            let pp = BigInt::from(43);
            let v = (bj.numer() * BigInt::from(inv_mod_u64(bj.denom().mod_floor(&pp).to_u64().unwrap(), 43).unwrap()))
                .mod_floor(&pp);
            assert_eq!(v.to_u64().unwrap(), m[j], "B_{}", j);
        }
    }
}
