//! Symmetric square L-functions of modular forms: Euler factors, Dirichlet
//! coefficients, complex values (direct sums and an approximate functional
//! equation), Petersson norms, rationality ratios and their p-adic images.
#![allow(non_snake_case)]

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dirichlet::{gauss_sum, DirichletCharacter};
use crate::exact::{rat_int, small_factor, Cyclotomic, ExactPoly, QuadraticNumber};
use crate::modforms::{HeckeData, QExpansion};
use crate::padic::{PadicEmbedding, PadicNumber};
use crate::real::{bits_for_digits, integrate_2d, root_of_unity, Ball, CBall, EmbedComplex, FundamentalRegion, GammaCtx, Mag};
use crate::{Error, Result};

/// `L^imp(Sym^2 f, chi, s)` for an eigenform `f` of level `level`.
#[derive(Clone, Debug)]
pub struct SymSqDescriptor {
    pub f: HeckeData,
    pub level: u64,
    pub chi: DirichletCharacter,
    /// Primitive and imprimitive L-functions coincide for level one.
    pub primitive: bool,
}

impl SymSqDescriptor {
    pub fn new(f: &QExpansion, chi: &DirichletCharacter) -> Self {
        SymSqDescriptor { f: f.hecke_data(), level: f.level, chi: chi.clone(), primitive: f.level == 1 }
    }

    pub fn weight(&self) -> u32 {
        self.f.weight
    }

    /// Largest `n` such that every prime up to `n` has a known `a_l`.
    pub fn coefficient_bound(&self) -> usize {
        let top = self.f.ap.keys().next_back().copied().unwrap_or(1);
        match crate::exact::primes_up_to(top).into_iter().find(|q| !self.f.ap.contains_key(q)) {
            Some(q) => q as usize - 1,
            None => top as usize,
        }
    }

    /// Primes dividing `N_f N_chi`.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = small_factor(self.level * self.chi.modulus()).into_iter().map(|(p, _)| p).collect();
        v.dedup();
        v
    }
}

fn eps_value(h: &HeckeData, l: u64) -> BigInt {
    match h.nebentypus.exponent(l as i64) {
        None => BigInt::zero(),
        Some(0) => BigInt::one(),
        Some(_) => -BigInt::one(),
    }
}

fn a_and_p(h: &HeckeData, l: u64) -> Result<(BigInt, BigInt)> {
    let a = h.ap.get(&l).cloned().ok_or_else(|| Error::MissingPrimes(vec![l]))?;
    let p = num_traits::pow(BigInt::from(l), (h.weight - 1) as usize) * eps_value(h, l);
    Ok((a, p))
}

fn cyc(order: u32, v: BigInt) -> Cyclotomic {
    Cyclotomic::from_rational(order, BigRational::from_integer(v))
}

/// `(1 - chi(l) alpha^2 X)(1 - chi(l) alpha beta X)(1 - chi(l) beta^2 X)` from
/// `alpha + beta = a_l` and `alpha beta = l^(k-1) eps(l)`.
pub fn euler_factor_symsq(f: &HeckeData, chi: &DirichletCharacter, l: u64) -> Result<ExactPoly> {
    let (a, p) = a_and_p(f, l)?;
    let ord = chi.order();
    let c = chi.value(l as i64);
    let e1 = &a * &a - &p;
    let e2 = &p * &e1;
    let e3 = &p * &p * &p;
    let c2 = &c * &c;
    let c3 = &c2 * &c;
    Ok(ExactPoly::new(vec![
        Cyclotomic::one(ord),
        -(&cyc(ord, e1) * &c),
        &cyc(ord, e2) * &c2,
        -(&cyc(ord, e3) * &c3),
    ]))
}

/// `det(1 - X psi(l) g (x) g)` for the companion matrix `g` of
/// `X^2 - a X + p`, via Newton's identities on traces of powers.
pub fn rankin_euler_factor(a: &BigInt, p: &BigInt, psi_l: &Cyclotomic) -> ExactPoly {
    let g = [[BigInt::zero(), -p.clone()], [BigInt::one(), a.clone()]];
    let mut m = vec![vec![BigInt::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = &g[i][j] * &g[k][l];
                }
            }
        }
    }
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        let mut z = vec![vec![BigInt::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    z[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
        z
    };
    let mut pw = m.clone();
    let mut ps = Vec::new();
    for _ in 0..4 {
        ps.push((0..4).fold(BigInt::zero(), |acc, i| acc + &pw[i][i]));
        pw = mul(&pw, &m);
    }
    // k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    let mut e = vec![BigRational::one()];
    for k in 1..=4usize {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * BigRational::from_integer(ps[i - 1].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    let ord = psi_l.order();
    let mut coeffs = Vec::new();
    let mut pp = Cyclotomic::one(ord);
    for (k, ek) in e.iter().enumerate() {
        let sign = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        coeffs.push(pp.scale(&(ek * sign)));
        pp = &pp * psi_l;
    }
    ExactPoly::new(coeffs)
}

/// Outcome of the local factorization identity at `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub l: u64,
    /// `P_l(f x f x psi) = (1 - l^(k-1) psi eps(l) X) P_l(Sym^2 f x psi)`.
    pub holds: bool,
    /// For level one and trivial `psi`: both sides equal
    /// `(1 - l^(k-1) X)^2 (1 - (a^2 - 2 l^(k-1)) X + l^(2k-2) X^2)`.
    pub quartic_holds: Option<bool>,
}

pub fn factorization_identity_check(f: &HeckeData, level: u64, psi: &DirichletCharacter, l: u64) -> Result<IdentityCheck> {
    let (a, p) = a_and_p(f, l)?;
    let psi_l = psi.value(l as i64);
    let ord = psi_l.order();
    let lhs = rankin_euler_factor(&a, &p, &psi_l);
    let sym = euler_factor_symsq(f, psi, l)?;
    let lin = ExactPoly::new(vec![Cyclotomic::one(ord), -(&cyc(ord, p.clone()) * &psi_l)]);
    let rhs = &lin * &sym;
    let holds = lhs == rhs;
    let quartic_holds = if level == 1 && psi_l == Cyclotomic::one(ord) {
        let one_minus = ExactPoly::from_bigints(&[BigInt::one(), -p.clone()]);
        let quad = ExactPoly::from_bigints(&[BigInt::one(), -(&a * &a - &p * BigInt::from(2)), &p * &p]);
        let q = &(&one_minus * &one_minus) * &quad;
        Some(q == lhs && q == rhs)
    } else {
        None
    };
    Ok(IdentityCheck { l, holds, quartic_holds })
}

/// Coefficients `b_n` of `L^imp(Sym^2 f, chi, s) = sum b_n n^(-s)`, stored by
/// powers of `zeta_order`: `b_n = sum_e classes[n][e] zeta^e`.
#[derive(Clone, Debug)]
pub struct SymSqCoeffs {
    pub order: u32,
    pub classes: Vec<Vec<BigInt>>,
}

impl SymSqCoeffs {
    pub fn len(&self) -> usize {
        self.classes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coefficient(&self, n: usize) -> Cyclotomic {
        Cyclotomic::from_coeffs(self.order, self.classes[n].iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Coefficients of the dual series (complex conjugates).
    pub fn conj(&self) -> SymSqCoeffs {
        let o = self.order as usize;
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let mut d = vec![BigInt::zero(); o];
                for (e, v) in c.iter().enumerate() {
                    d[(o - e) % o] = v.clone();
                }
                d
            })
            .collect();
        SymSqCoeffs { order: self.order, classes }
    }
}

/// `b_n = sum_{m^2 d = n} chi^2 eps^2(m) m^(2k-2) a_{d^2} chi(d)`, with `m`
/// restricted to integers prime to `N_f N_chi`.
pub fn symsq_dirichlet_coeffs(desc: &SymSqDescriptor, n_max: usize) -> Result<SymSqCoeffs> {
    let k = desc.weight();
    let chi = &desc.chi;
    let ord = chi.order() as usize;
    let sq = desc.f.square_coefficients(n_max as u64)?;
    let bad = desc.bad_primes();
    let mut classes = vec![vec![BigInt::zero(); ord]; n_max + 1];
    let mut m = 1usize;
    while m * m <= n_max {
        if bad.iter().all(|&p| m as u64 % p != 0) {
            if let Some(em) = chi.exponent(m as i64) {
                let mw = num_traits::pow(BigInt::from(m), (2 * k - 2) as usize);
                for d in 1..=n_max / (m * m) {
                    let Some(ed) = chi.exponent(d as i64) else { continue };
                    let e = (2 * em as usize + ed as usize) % ord;
                    classes[m * m * d][e] += &mw * &sq[d];
                }
            }
        }
        m += 1;
    }
    Ok(SymSqCoeffs { order: chi.order(), classes })
}

/// Checks `a_n^2 chi(n) = sum_{m d = n} (chi eps)(m) m^(k-1) a_{d^2} chi(d)`
/// for `n <= n_max` (`m` prime to `N_f N_chi`); returns the failing indices.
pub fn rankin_coefficient_identity(f: &QExpansion, chi: &DirichletCharacter, n_max: usize) -> Result<Vec<usize>> {
    let h = f.hecke_data();
    let sq = h.square_coefficients(n_max as u64)?;
    let desc = SymSqDescriptor::new(f, chi);
    let bad = desc.bad_primes();
    let mut bad_n = Vec::new();
    for n in 1..=n_max {
        let lhs = cyc(1, f.coeff(n) * f.coeff(n)) * chi.value(n as i64);
        let mut rhs = Cyclotomic::zero(chi.order());
        for m in (1..=n).filter(|m| n % m == 0) {
            if bad.iter().any(|&p| m as u64 % p == 0) {
                continue;
            }
            let d = n / m;
            let e = eps_value(&h, m as u64);
            let c = num_traits::pow(BigInt::from(m), (f.weight - 1) as usize) * e * &sq[d];
            rhs = &rhs + &(&(&cyc(chi.order(), c) * &chi.value(m as i64)) * &chi.value(d as i64));
        }
        if lhs != rhs {
            bad_n.push(n);
        }
    }
    Ok(bad_n)
}

/// Rigorous bound for `sum_{n > N} d_3(n) n^(k-1-sigma)`, `sigma > k`, from
/// `sum_{n <= x} d_3(n) <= x (1 + ln x)^2` and partial summation.
pub fn direct_tail_bound(k: u32, sigma: f64, n: u64) -> Mag {
    let lp = 64;
    let beta = &Ball::from_f64(sigma, lp) - &Ball::from_i64(k as i64 - 1, lp);
    let g = &beta - &Ball::one(lp);
    let nb = Ball::from_i64(n as i64, lp);
    let l = &Ball::one(lp) + &nb.ln();
    let ng = (&g.neg() * &nb.ln()).exp();
    let t = &(&l.sqr().div(&g) + &l.mul_2exp(1).div(&g.sqr())) + &Ball::from_i64(2, lp).div(&g.pow_u(3));
    (&(&beta * &ng) * &t).abs_upper()
}

fn s_is_real_integer(s: &CBall) -> Option<i64> {
    if s.im.is_exact() && s.im.mid().is_zero() && s.re.is_exact() {
        let q = s.re.mid().to_rational();
        if q.is_integer() {
            return q.to_integer().to_i64();
        }
    }
    None
}

/// `n^(-s)` as a complex ball.
fn n_pow_neg(n: u64, s: &CBall, prec: u32) -> CBall {
    if let Some(si) = s_is_real_integer(s) {
        return CBall::from_real(Ball::from_i64(n as i64, prec).pow_i(-si));
    }
    let l = Ball::from_i64(n as i64, prec).ln();
    CBall::new(&s.re.with_prec(prec).neg() * &l, &s.im.with_prec(prec).neg() * &l).exp()
}

fn class_sum(c: &SymSqCoeffs, sums: &[CBall], prec: u32) -> CBall {
    let mut acc = CBall::zero(prec);
    for (e, s) in sums.iter().enumerate() {
        acc = &acc + &(&root_of_unity(e as i64, c.order, prec) * s);
    }
    acc
}

/// `L^imp(Sym^2 f, chi, s)` by direct summation of `n_max` terms plus a
/// rigorous tail, for `Re s > k`.
pub fn L_direct(desc: &SymSqDescriptor, s: &CBall, digits: u32, n_max: usize) -> Result<CBall> {
    let k = desc.weight();
    let sigma = s.re.to_f64() - s.re.rad_f64();
    if !(sigma > k as f64) {
        return Err(Error::Domain(format!("direct summation needs Re(s) > {}", k)));
    }
    let prec = bits_for_digits(digits) + 24;
    let coeffs = symsq_dirichlet_coeffs(desc, n_max)?;
    let mut sums = vec![CBall::zero(prec); coeffs.order as usize];
    for n in 1..=n_max {
        let c = &coeffs.classes[n];
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let w = n_pow_neg(n as u64, s, prec);
        for (e, v) in c.iter().enumerate() {
            if !v.is_zero() {
                sums[e] = &sums[e] + &w.scale(&Ball::from_bigint(v, prec));
            }
        }
    }
    let value = class_sum(&coeffs, &sums, prec);
    let tail = direct_tail_bound(k, sigma, n_max as u64);
    let value = CBall::new(value.re.add_error(tail), value.im.add_error(tail));
    let target = value.abs().abs_lower().to_f64() * libm::pow(10.0, -(digits as f64));
    if tail.to_f64() > target {
        return Err(Error::TailDominates { tail: tail.to_f64(), target });
    }
    Ok(value)
}

/// Truncated Euler product `prod_{l <= P} P_l(l^(-s))^(-1)` with the
/// enclosure `|L - L_P| <= |L_P| * tail(P)`.
pub fn euler_product_partial(desc: &SymSqDescriptor, s: &CBall, bound: u64, prec: u32) -> Result<CBall> {
    let k = desc.weight();
    let sigma = s.re.to_f64() - s.re.rad_f64();
    if !(sigma > k as f64) {
        return Err(Error::Domain(format!("Euler product needs Re(s) > {}", k)));
    }
    let mut acc = CBall::one(prec);
    for l in crate::exact::primes_up_to(bound) {
        let poly = euler_factor_symsq(&desc.f, &desc.chi, l)?;
        let x = n_pow_neg(l, s, prec);
        let mut val = CBall::zero(prec);
        let mut xp = CBall::one(prec);
        for c in poly.coeffs() {
            val = &val + &(&crate::real::embed_cyclotomic_prec(c, prec) * &xp);
            xp = &xp * &x;
        }
        acc = acc.div(&val);
    }
    let t = direct_tail_bound(k, sigma, bound);
    let err = acc.abs_upper().mul(&t);
    Ok(CBall::new(acc.re.add_error(err), acc.im.add_error(err)))
}

/// Data of the completed L-function `Lambda(s) = Q^(s/2) gamma(s) L(s)` with
/// `gamma(s) = Gamma_R(s + r) Gamma_C(s + c)` and `Lambda(s) = w conj(Lambda)(center - s)`.
#[derive(Clone, Debug)]
pub struct AfeConfig {
    pub conductor: u64,
    pub gamma_r_shift: i64,
    pub gamma_c_shift: i64,
    pub center: i64,
    /// Root number; solved from the consistency test when absent.
    pub sign: Option<CBall>,
    pub max_terms: usize,
    /// Smoothing parameters: the first two determine `w`, the third checks it.
    pub t_values: [f64; 3],
}

impl AfeConfig {
    /// Gamma factor `Gamma_R(s - k + 1 + e) Gamma_C(s)` (`e = 1` when `chi(-1) = (-1)^k`)
    /// and conductor `N_chi^3` for a level one form and primitive `chi`.
    pub fn standard(desc: &SymSqDescriptor) -> Result<Self> {
        if desc.level != 1 {
            return Err(Error::Domain(String::from("standard functional equation data is only built for level one")));
        }
        let k = desc.weight() as i64;
        let prim = desc.chi.primitive();
        let e = if (prim.parity() == 1) == (k % 2 == 0) { 1 } else { 0 };
        Ok(AfeConfig {
            conductor: prim.modulus().pow(3),
            gamma_r_shift: -k + 1 + e,
            gamma_c_shift: 0,
            center: 2 * k - 1,
            sign: None,
            max_terms: 4000,
            t_values: [1.0, 1.1, 0.9],
        })
    }
}

/// A value from the approximate functional equation.
#[derive(Clone, Debug)]
pub struct AfeValue {
    pub value: CBall,
    pub sign: CBall,
    /// Relative disagreement between smoothing parameters (plus `||w| - 1|`).
    pub residual: f64,
    pub terms: usize,
}

struct GammaWeights {
    c: f64,
    h: f64,
    /// `gamma(c + i j h)` for `j = 0 .. J`.
    g: Vec<CBall>,
}

fn gamma_factor(ctx: &GammaCtx, cfg: &AfeConfig, z: &CBall, prec: u32) -> Result<CBall> {
    let pi = Ball::pi(prec);
    let lnpi = pi.ln();
    let ln2pi = pi.mul_2exp(1).ln();
    let zr = z + &CBall::from_i64(cfg.gamma_r_shift, prec);
    let half = zr.mul_2exp(-1);
    let gr = &CBall::new(&half.re.neg() * &lnpi, &half.im.neg() * &lnpi).exp() * &ctx.gamma(&half)?;
    let zc = z + &CBall::from_i64(cfg.gamma_c_shift, prec);
    let gc = (&CBall::new(&zc.re.neg() * &ln2pi, &zc.im.neg() * &ln2pi).exp() * &ctx.gamma(&zc)?).mul_2exp(1);
    Ok(&gr * &gc)
}

fn gamma_weights(ctx: &GammaCtx, cfg: &AfeConfig, c: f64, h: f64, digits: u32, wp: u32) -> Result<GammaWeights> {
    let cb = Ball::from_f64(c, wp);
    let hb = Ball::from_f64(h, wp);
    let mut g = Vec::new();
    let mut g0 = 0.0f64;
    for j in 0.. {
        let z = CBall::new(cb.clone(), hb.mul_i64(j));
        let v = gamma_factor(ctx, cfg, &z, wp)?;
        let m = v.abs_upper().log2();
        if j == 0 {
            g0 = m;
        }
        g.push(v);
        let drop = (digits as f64 + 10.0) * core::f64::consts::LOG2_10 + 10.0;
        if (m < g0 - drop && j as f64 * h > 4.0) || j > 200_000 {
            break;
        }
    }
    Ok(GammaWeights { c, h, g })
}

/// `G(s0, y) = (h / 2 pi) sum_j gamma(z_j) y^(s0 - z_j) / (z_j - s0)` over `z_j = c + i j h`.
struct Kernel {
    s0: CBall,
    w_pos: Vec<CBall>,
    w_neg: Vec<CBall>,
    scale: Ball,
    c: Ball,
    h: Ball,
    /// Real `s0`: the terms for `-j` are conjugates of those for `j`.
    real: bool,
}

impl Kernel {
    fn new(gw: &GammaWeights, s0: &CBall, wp: u32) -> Kernel {
        let c = Ball::from_f64(gw.c, wp);
        let h = Ball::from_f64(gw.h, wp);
        let mut w_pos = Vec::with_capacity(gw.g.len());
        let mut w_neg = Vec::with_capacity(gw.g.len());
        for (j, g) in gw.g.iter().enumerate() {
            let z = CBall::new(c.clone(), h.mul_i64(j as i64));
            w_pos.push(g.div(&(&z - s0)));
            let zc = z.conj();
            w_neg.push(g.conj().div(&(&zc - s0)));
        }
        let scale = h.div(&Ball::pi(wp).mul_2exp(1));
        let real = s0.im.is_exact() && s0.im.mid().is_zero();
        Kernel { s0: s0.clone(), w_pos, w_neg, scale, c, h, real }
    }

    fn eval(&self, y: &Ball) -> CBall {
        let wp = y.prec();
        let ly = y.ln();
        // y^(s0 - c)
        let e = &self.s0 - &CBall::from_real(self.c.clone());
        let front = CBall::new(&e.re * &ly, &e.im * &ly).exp();
        // v = y^(-i h)
        let v = CBall::expi(&(&self.h * &ly).neg());
        let mut pp = CBall::one(wp);
        let sum = if self.real {
            let mut acc = CBall::zero(wp);
            for j in 1..self.w_pos.len() {
                pp = &pp * &v;
                acc = &acc + &(&self.w_pos[j] * &pp);
            }
            &self.w_pos[0] + &CBall::from_real(acc.re.mul_2exp(1))
        } else {
            let vc = v.conj();
            let mut sum = self.w_pos[0].clone();
            let mut pn = CBall::one(wp);
            for j in 1..self.w_pos.len() {
                pp = &pp * &v;
                pn = &pn * &vc;
                sum = &sum + &(&self.w_pos[j] * &pp);
                sum = &sum + &(&self.w_neg[j] * &pn);
            }
            sum
        };
        (&front * &sum).scale(&self.scale)
    }
}

fn complex_pow_real(x: &Ball, s: &CBall) -> CBall {
    let l = x.ln();
    CBall::new(&s.re * &l, &s.im * &l).exp()
}

/// `L(s)` from the approximate functional equation, valid for any `s` in the
/// critical strip. The sign is solved from two smoothing parameters unless
/// supplied, and a third parameter must reproduce the value to `digits`.
pub fn L_afe(desc: &SymSqDescriptor, cfg: &AfeConfig, s: &CBall, digits: u32) -> Result<AfeValue> {
    let prec = bits_for_digits(digits) + 16;
    let wp = prec + 48;
    let s = CBall::new(s.re.with_prec(wp), s.im.with_prec(wp));
    let kp = cfg.center as f64;
    let sigma = s.re.to_f64();
    let pole_edge = (-(cfg.gamma_r_shift) as f64).max(-(cfg.gamma_c_shift) as f64);
    let c = libm::ceil(sigma.max(kp - sigma).max(pole_edge)) + 2.0;
    // Trapezoid error decays like exp(-2 pi d / h) with d = 2 the distance to the nearest pole.
    let h = 4.0 * core::f64::consts::PI / ((digits as f64 + 12.0) * core::f64::consts::LN_10);
    let ctx = GammaCtx::new(wp);
    let gw = gamma_weights(&ctx, cfg, c, h, digits, wp)?;
    let s_dual = &CBall::from_i64(cfg.center, wp) - &s;
    let k1 = Kernel::new(&gw, &s, wp);
    let k2 = Kernel::new(&gw, &s_dual, wp);
    let n_cap = cfg.max_terms.min(desc.coefficient_bound());
    let coeffs = symsq_dirichlet_coeffs(desc, n_cap)?;
    let dual = coeffs.conj();
    let q = Ball::from_i64(cfg.conductor as i64, wp);
    let rq = q.sqrt();
    let k = desc.weight() as i32;
    let eps = libm::pow(2.0, -(wp as f64));
    let cut = libm::pow(10.0, -(digits as f64) - 6.0);

    // Per-n quantities shared by the three parameter values.
    let t_balls: Vec<Ball> = cfg.t_values.iter().map(|&t| Ball::from_f64(t, wp)).collect();
    let mut s1 = vec![CBall::zero(wp); 3];
    let mut s2 = vec![CBall::zero(wp); 3];
    let mut terms = 0usize;
    let mut tail_est = 0.0f64;
    let mut quiet = 0;
    for n in 1..=n_cap {
        let nb = Ball::from_i64(n as i64, wp);
        let base = rq.div(&nb);
        let f1 = complex_pow_real(&base, &s);
        let f2 = complex_pow_real(&base, &s_dual);
        let b1 = class_sum(&coeffs, &coeffs.classes[n].iter().map(|v| CBall::from_real(Ball::from_bigint(v, wp))).collect::<Vec<_>>(), wp);
        let b2 = class_sum(&dual, &dual.classes[n].iter().map(|v| CBall::from_real(Ball::from_bigint(v, wp))).collect::<Vec<_>>(), wp);
        let mut proxy = 0.0f64;
        for (i, t) in t_balls.iter().enumerate() {
            let y1 = (&nb * t).div(&rq);
            let y2 = nb.div(&(t * &rq));
            let g1 = k1.eval(&y1);
            let g2 = k2.eval(&y2);
            // |b_n| <= d_3(n) n^(k-1), with d_3(n) replaced by (1 + ln n)^2.
            let pf = libm::pow(n as f64, (k - 1) as f64) * libm::pow(1.0 + libm::log(n as f64), 2.0);
            proxy = proxy.max(pf * f1.abs_upper().to_f64() * g1.abs_upper().to_f64());
            proxy = proxy.max(pf * f2.abs_upper().to_f64() * g2.abs_upper().to_f64());
            if !b1.contains_zero() || !b2.contains_zero() {
                s1[i] = &s1[i] + &(&(&b1 * &f1) * &g1);
                s2[i] = &s2[i] + &(&(&b2 * &f2) * &g2);
            }
        }
        terms = n;
        let size = s1[0].abs_upper().to_f64().max(s2[0].abs_upper().to_f64());
        if proxy < cut * size {
            quiet += 1;
            tail_est = tail_est.max(proxy);
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        if n == n_cap {
            return Err(Error::NonConvergence { achieved: proxy / size.max(f64::MIN_POSITIVE), requested: cut });
        }
    }
    let lam = |w: &CBall, i: usize| &s1[i] + &(w * &s2[i]);
    let mut pinned = true;
    let (w, mut residual) = match &cfg.sign {
        Some(w) => {
            let a = lam(w, 0);
            let b = lam(w, 1);
            let r = (&a - &b).abs().to_f64() / a.abs().to_f64();
            (w.clone(), r)
        }
        None => {
            let w = (&s1[1] - &s1[0]).div(&(&s2[0] - &s2[1]));
            if w.is_finite() && w.re.rad_f64() < 1.0 && w.im.rad_f64() < 1.0 {
                (w, 0.0)
            } else {
                // s2 is too small to pin w down; |w| = 1 still bounds its effect
                pinned = false;
                let unit = Ball::zero(wp).add_error(Mag::from_f64(1.0));
                (CBall::new(unit.clone(), unit), 0.0)
            }
        }
    };
    let l0 = lam(&w, 0);
    let l2 = lam(&w, 2);
    let l0abs = l0.abs().to_f64();
    residual = residual.max((&l0 - &l2).abs().to_f64() / l0abs);
    // |w| = 1, weighted by how far an error in w moves Lambda: far from the
    // centre s2 is tiny and w is only loosely determined.
    let w_dev = if pinned { (&w.abs() - &Ball::one(wp)).abs().to_f64() } else { 0.0 };
    residual = residual.max(w_dev * s2[0].abs().to_f64() / l0abs);
    let target = libm::pow(10.0, -(digits as f64));
    if !(residual <= target) {
        return Err(Error::Inconsistent { residual });
    }
    // Lambda(s) / (Q^(s/2) gamma(s))
    let gs = gamma_factor(&ctx, cfg, &s, wp)?;
    let qs = complex_pow_real(&q, &s.mul_2exp(-1));
    let mut value = l0.div(&(&qs * &gs));
    // The mid-point of l0 is rigorous up to kernel discretization and truncation,
    // which are estimated by the residual and the last term sizes.
    let est = (residual.max(tail_est / l0abs) * 8.0 + eps) * value.abs_upper().to_f64();
    let err = Mag::from_f64(est);
    value = CBall::new(value.re.add_error(err).with_prec(prec), value.im.add_error(err).with_prec(prec));
    Ok(AfeValue { value, sign: w, residual, terms })
}

/// `<f, f> = int |f|^2 y^(k-2) dx dy` over the fundamental domain of `SL_2(Z)`.
///
/// The part above `y = 1` is summed exactly by Parseval; below it the
/// truncated expansion is integrated, with the truncation bounded by
/// `sum_{n > N} sqrt(3) n^(k/2) e^(-2 pi n y)` from `|a_n| <= d(n) n^((k-1)/2)`
/// and `d(n) <= sqrt(3n)`.
pub fn petersson_norm(f: &QExpansion, digits: u32) -> Result<Ball> {
    if f.level != 1 {
        return Err(Error::Domain(String::from("Petersson norm is implemented for level one")));
    }
    let k = f.weight as i64;
    let m = (k - 2) as u64;
    let prec = bits_for_digits(digits) + 24;
    let lp = 64;
    let two_pi = Ball::pi(prec).mul_2exp(1);
    // Truncation point at y = sqrt(3)/2.
    let ymin = Ball::from_i64(3, lp).sqrt().mul_2exp(-1);
    let goal = -(digits as f64 + 12.0) * core::f64::consts::LOG2_10 - 20.0;
    let mut big_n = 1u64;
    let term_bound = |n: u64| -> Ball {
        let nb = Ball::from_i64(n as i64, lp);
        let a = &Ball::from_i64(3, lp).sqrt() * &nb.pow_u(k as u64).sqrt();
        &a * &(&(&two_pi.with_prec(lp) * &nb) * &ymin).neg().exp()
    };
    while term_bound(big_n + 1).abs_upper().log2() > goal {
        big_n += 1;
    }
    // Terms decay at least geometrically with ratio <= 1/2 beyond N.
    let delta = term_bound(big_n + 1).abs_upper().mul_2exp(1);
    if big_n as usize > f.len() {
        return Err(Error::InsufficientPrecision(format!("need {} coefficients, have {}", big_n, f.len())));
    }
    let a: Vec<Ball> = (0..=big_n as usize).map(|n| Ball::from_bigint(f.coeff(n), prec)).collect();

    // Tail above y = 1: sum a_n^2 e^(-A) sum_j m!/(m-j)! / A^(j+1), A = 4 pi n.
    let four_pi = two_pi.mul_2exp(1);
    let upper = |coef: &Ball, n: u64, p: u32| -> Ball {
        let aa = four_pi.with_prec(p).mul_i64(n as i64);
        let inv = aa.inv();
        let mut s = Ball::zero(p);
        let mut fall = Ball::one(p);
        let mut pw = inv.clone();
        for j in 0..=m {
            s = &s + &(&fall * &pw);
            fall = fall.mul_i64((m - j) as i64);
            pw = &pw * &inv;
        }
        &(coef * &aa.neg().exp()) * &s
    };
    let mut tail = Ball::zero(prec);
    for n in 1..=big_n {
        tail = &tail + &upper(&a[n as usize].sqr(), n, prec);
    }
    let nb = big_n + 1;
    let rest = upper(&Ball::from_i64(nb as i64, lp).pow_u(k as u64).mul_i64(3), nb, lp);
    tail = tail.add_error(rest.abs_upper().mul_2exp(1));

    let kk = k as u64 - 2;
    let integrand = |x: &Ball, y: &Ball| -> Ball {
        let r = (&two_pi * y).neg().exp();
        let (sn, cs) = (&two_pi * x).sin_cos();
        let q = CBall::new(&r * &cs, &r * &sn);
        let mut qp = q.clone();
        let mut acc = CBall::zero(prec);
        for n in 1..=big_n as usize {
            acc = &acc + &qp.scale(&a[n]);
            qp = &qp * &q;
        }
        let acc = CBall::new(acc.re.add_error(delta), acc.im.add_error(delta));
        &acc.norm_sqr() * &y.pow_u(kk)
    };
    let region = FundamentalRegion { y_cut: Ball::one(prec), even_in_x: true };
    let tol = tail.to_f64().abs() * libm::pow(10.0, -(digits as f64) - 1.0);
    let q = integrate_2d(integrand, &region, &tail, tol, prec)?;
    Ok(q.value)
}

/// `delta` for a critical `s`: 0 on `1..k-1` with `(-1)^s = -chi(-1)`, 1 on
/// `k..2k-2` with `(-1)^s = chi(-1)`; `None` if `s` is not critical.
pub fn critical_delta(s: i64, k: u32, chi_parity: i32) -> Option<u32> {
    let k = k as i64;
    let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
    if (1..=k - 1).contains(&s) && sign == -chi_parity {
        Some(0)
    } else if (k..=2 * k - 2).contains(&s) && sign == chi_parity {
        Some(1)
    } else {
        None
    }
}

/// `I(f, chi, s) = L / (pi^(k-1) <f,f>) * (G(chi^-1 eps^-1) / (2 pi i)^(s-k+1))^(1+delta)`.
pub fn schmidt_ratio(desc: &SymSqDescriptor, s: i64, l_value: &CBall, petersson: &Ball) -> Result<CBall> {
    let k = desc.weight();
    let delta = critical_delta(s, k, desc.chi.parity()).ok_or(Error::NonCritical(s))?;
    let prec = l_value.prec().min(petersson.prec());
    let eps_inv = desc.f.nebentypus.conj();
    let chi_inv = desc.chi.conj();
    let g = gauss_sum_of_product(&chi_inv, &eps_inv)?;
    let gz = crate::real::embed_cyclotomic_prec(&g, prec + 16);
    let pi = Ball::pi(prec + 16);
    let two_pi_i = CBall::new(Ball::zero(prec + 16), pi.mul_2exp(1));
    let n = s - k as i64 + 1;
    let factor = gz.div(&pow_signed(&two_pi_i, n));
    let mut r = l_value.div(&CBall::from_real(&pi.pow_u(k as u64 - 1) * petersson));
    for _ in 0..=delta {
        r = &r * &factor;
    }
    Ok(r)
}

fn pow_signed(z: &CBall, n: i64) -> CBall {
    if n >= 0 {
        z.pow_u(n as u64)
    } else {
        z.pow_u((-n) as u64).inv()
    }
}

/// Gauss sum of the primitive character attached to `chi * eps`.
fn gauss_sum_of_product(chi: &DirichletCharacter, eps: &DirichletCharacter) -> Result<Cyclotomic> {
    let m = chi.modulus().lcm(&eps.modulus());
    let a = chi.induce(m)?;
    let b = eps.induce(m)?;
    Ok(gauss_sum(&a.mul(&b)?))
}

/// `(s-1)! (s-k)! G^2 / (2^(2s+1) pi^(2s-k+1) <f,f>) * L`.
pub fn tilde_ratio(k: u32, s: i64, gauss: &Cyclotomic, l_value: &CBall, petersson: &Ball) -> CBall {
    let prec = l_value.prec().min(petersson.prec()) + 16;
    let fact = |n: i64| (1..=n).fold(BigInt::one(), |acc, i| acc * i);
    let num = Ball::from_bigint(&(fact(s - 1) * fact(s - k as i64)), prec);
    let g = crate::real::embed_cyclotomic_prec(gauss, prec).sqr();
    let pi = Ball::pi(prec);
    let den = &(&pi.pow_u((2 * s - k as i64 + 1) as u64) * petersson).mul_2exp(2 * s + 1);
    (&g * l_value).scale(&num.div(den))
}

/// Numerical inputs behind a ratio.
#[derive(Clone, Debug)]
pub struct RatioRecord {
    pub ratio: CBall,
    pub l_value: CBall,
    pub petersson: Ball,
    pub method: &'static str,
}

/// The ratio for the weight 16 eigenform twisted by the cubic character
/// `7.2` (`psi(3) = zeta3`), with `G(psi^-1)^2` in the numerator.
pub fn tilde_ratio_w16(s: i64, digits: u32, n_max: usize) -> Result<RatioRecord> {
    let f = crate::modforms::level1_eigenform(16, n_max)?;
    let psi = DirichletCharacter::from_label("7.2")?;
    let desc = SymSqDescriptor::new(&f, &psi);
    if critical_delta(s, 16, psi.parity()).is_none() {
        return Err(Error::NonCritical(s));
    }
    let sb = CBall::from_i64(s, bits_for_digits(digits) + 32);
    let (l_value, method) = if s > 16 {
        (L_direct(&desc, &sb, digits + 2, n_max)?, "direct")
    } else {
        (L_afe(&desc, &AfeConfig::standard(&desc)?, &sb, digits + 2)?.value, "afe")
    };
    let pet = petersson_norm(&f, digits + 2)?;
    let g = gauss_sum(&psi.conj());
    let ratio = tilde_ratio(16, s, &g, &l_value, &pet);
    Ok(RatioRecord { ratio, l_value, petersson: pet, method })
}

fn lll(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    let dot = |x: &[BigRational], y: &[BigRational]| x.iter().zip(y).fold(BigRational::zero(), |a, (p, q)| a + p * q);
    let to_q = |v: &[BigInt]| v.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>();
    let gso = |b: &Vec<Vec<BigInt>>| {
        let mut bs: Vec<Vec<BigRational>> = Vec::new();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let bi = to_q(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                let bj2 = dot(&bs[j], &bs[j]);
                mu[i][j] = if bj2.is_zero() { BigRational::zero() } else { dot(&bi, &bs[j]) / bj2 };
                for (x, y) in v.iter_mut().zip(bs[j].iter()) {
                    *x -= &mu[i][j] * y;
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(bj.iter()) {
                    *x -= &q * y;
                }
            }
        }
        let (bs, mu) = gso(&b);
        let lhs = dot(&bs[k], &bs[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&bs[k - 1], &bs[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Integer-relation search for `z = (a + b sqrt d)/c` with `|a|, |b|, |c| <= height`.
/// Returns a candidate only if it re-embeds within ten times the radius of `z`.
pub fn recognize_quadratic(z: &CBall, d: i64, height: &BigInt) -> Option<QuadraticNumber> {
    let rad = z.re.rad().max(&z.im.rad()).to_f64();
    let mag = z.abs_upper().to_f64().max(1.0);
    let bits = if rad > 0.0 { libm::floor(libm::log2(mag) - libm::log2(rad)) as i64 } else { z.prec() as i64 };
    if bits < 8 {
        return None;
    }
    let scale_bits = (bits - 4).max(8) as usize;
    let scale = BigRational::from_integer(BigInt::one() << scale_bits);
    let round = |q: BigRational| (q * &scale).round().to_integer();
    let re = z.re.mid().to_rational();
    let im = z.im.mid().to_rational();
    let sq = Ball::from_i64(d.abs(), z.prec() + 32).sqrt().mid().to_rational();
    let basis = if d < 0 {
        vec![
            vec![BigInt::one(), BigInt::zero(), BigInt::zero(), round(re.clone()), round(im.clone())],
            vec![BigInt::zero(), BigInt::one(), BigInt::zero(), round(-BigRational::one()), BigInt::zero()],
            vec![BigInt::zero(), BigInt::zero(), BigInt::one(), BigInt::zero(), round(-sq.clone())],
        ]
    } else {
        vec![
            vec![BigInt::one(), BigInt::zero(), BigInt::zero(), round(re.clone())],
            vec![BigInt::zero(), BigInt::one(), BigInt::zero(), round(-BigRational::one())],
            vec![BigInt::zero(), BigInt::zero(), BigInt::one(), round(-sq.clone())],
        ]
    };
    let red = lll(basis);
    for v in red.iter().take(2) {
        let (c, a, b) = (v[0].clone(), v[1].clone(), v[2].clone());
        if c.is_zero() || c.abs() > *height || a.abs() > *height || b.abs() > *height {
            continue;
        }
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        let cand = QuadraticNumber::new(d, BigRational::new(a, c.clone()), BigRational::new(b, c));
        let emb = cand.embed_complex((bits as f64 * 0.30103) as u32 + 10);
        let infl = Mag::from_f64(rad * 10.0);
        let zz = CBall::new(z.re.add_error(infl), z.im.add_error(infl));
        if zz.contains(&emb) || zz.overlaps(&emb) && emb.re.rad_f64() < rad && emb.im.rad_f64() < rad {
            return Some(cand);
        }
    }
    None
}

/// Which p-adic multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// Interpolation factor for `s <= k - 1`.
    E,
    /// Interpolation factor for `k <= s <= 2k - 2`.
    EPrime,
}

/// Evaluated interpolation multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpMultiplier {
    pub kind: MultiplierKind,
    pub s: i64,
    /// `chi` has conductor `p^r`.
    pub r: u32,
    pub alpha: PadicNumber,
    pub beta: PadicNumber,
    pub psi_p: PadicNumber,
    pub eps_p: PadicNumber,
    pub value: PadicNumber,
    pub vanishes: bool,
}

/// Vanishing predicted by the case table: only for `r = 0`, `eps psi(p) = 1`,
/// and `s = k - 1` (for `E`) or `s = k` (for `E'`).
pub fn multiplier_vanishes(kind: MultiplierKind, s: i64, k: u32, r: u32, eps_psi_p_is_one: bool) -> bool {
    r == 0
        && eps_psi_p_is_one
        && match kind {
            MultiplierKind::E => s == k as i64 - 1,
            MultiplierKind::EPrime => s == k as i64,
        }
}

/// Evaluates `E_p(s, chi)` or `E'_p(s, chi)` from the ordinary pair.
#[allow(clippy::too_many_arguments)]
pub fn interp_multiplier(
    kind: MultiplierKind,
    s: i64,
    r: u32,
    alpha: &PadicNumber,
    beta: &PadicNumber,
    psi_p: &PadicNumber,
    eps_p: &PadicNumber,
    k: u32,
) -> Result<InterpMultiplier> {
    let p = alpha.p();
    if alpha.valuation() != Some(0) {
        return Err(Error::NonOrdinary(p));
    }
    let kk = k as i64 + (s.abs() + 4) + 2 * beta.valuation_lower().max(0);
    let one = PadicNumber::from_i64(1, p, kk);
    let ps = PadicNumber::from_i64(1, p, kk).mul(&PadicNumber::from_integer(&num_traits::pow(BigInt::from(p), 1), p, kk).pow(s)?);
    let ps1 = ps.div(&PadicNumber::from_i64(p as i64, p, kk))?;
    let ps_inv = ps.inv()?;
    let psi_inv = psi_p.inv()?;
    let a_inv = alpha.inv()?;
    let a_inv2 = a_inv.mul(&a_inv);
    let first = ps1.mul(&psi_inv).mul(&a_inv2);
    let value = match (kind, r) {
        (MultiplierKind::E, 0) => {
            let f1 = one.sub(&first);
            let f2 = one.sub(&psi_p.mul(alpha).mul(beta).mul(&ps_inv));
            let f3 = one.sub(&psi_p.mul(beta).mul(beta).mul(&ps_inv));
            f1.mul(&f2).mul(&f3)
        }
        (MultiplierKind::EPrime, 0) => {
            let f1 = one.sub(&first);
            let f2 = one.sub(&ps1.mul(&psi_inv).mul(&a_inv).mul(&beta.inv()?));
            let f3 = one.sub(&psi_p.mul(beta).mul(beta).mul(&ps_inv));
            f1.mul(&f2).mul(&f3)
        }
        (MultiplierKind::E, r) => first.pow(r as i64)?,
        (MultiplierKind::EPrime, r) => ps1.mul(&psi_inv).mul(&psi_inv).mul(&eps_p.inv()?).mul(&a_inv2).pow(r as i64)?,
    };
    let vanishes = value.is_zero();
    Ok(InterpMultiplier {
        kind,
        s,
        r,
        alpha: alpha.clone(),
        beta: beta.clone(),
        psi_p: psi_p.clone(),
        eps_p: eps_p.clone(),
        value,
        vanishes,
    })
}

/// p-adic value of the symmetric square L-function at `s` with trivial `chi`.
#[derive(Clone, Debug)]
pub struct PadicSymSqValue {
    pub p: u64,
    pub s: i64,
    /// `E'_p(s, 1)` times the embedded algebraic ratio. The ratio carries the
    /// factor `G(psi^-1)^2`, a unit at `p` not dividing `N_psi`, so the value
    /// agrees with the interpolated one up to that unit.
    pub value: PadicNumber,
    pub ratio_image: PadicNumber,
    pub multiplier: InterpMultiplier,
    pub valuation: Option<i64>,
    pub unit: bool,
    pub exceptional_zero: bool,
}

/// Combines the complex-side algebraic ratio with `E'_p` under `emb`.
#[allow(clippy::too_many_arguments)]
pub fn padic_symsq_L_value(
    s: i64,
    ratio: &QuadraticNumber,
    emb: &PadicEmbedding,
    f: &HeckeData,
    psi: &DirichletCharacter,
    k_digits: u32,
) -> Result<PadicSymSqValue> {
    let p = emb.p();
    let k = f.weight;
    if psi.modulus() % p == 0 {
        return Err(Error::PrimeDividesConductor(p));
    }
    let ratio_image = emb.embed_quadratic(ratio, k_digits)?;
    let psi_p = emb.embed_cyclotomic(&psi.value(p as i64), k_digits + k + 4)?;
    let eps = eps_value(f, p);
    let eps_p = PadicNumber::from_integer(&eps, p, (k_digits + k + 4) as i64);
    let a_p = f.ap.get(&p).ok_or_else(|| Error::MissingPrimes(vec![p]))?;
    let (alpha, beta) = crate::padic::ordinary_roots(a_p, k, &eps_p, k_digits + s.unsigned_abs() as u32 + 4)?;
    let multiplier = interp_multiplier(MultiplierKind::EPrime, s, 0, &alpha, &beta, &psi_p, &eps_p, k)?;
    let value = multiplier.value.mul(&ratio_image).truncate(k_digits as i64);
    let valuation = value.valuation();
    let exceptional_zero = multiplier.vanishes;
    Ok(PadicSymSqValue {
        p,
        s,
        unit: valuation == Some(0),
        value,
        ratio_image,
        multiplier,
        valuation,
        exceptional_zero,
    })
}

/// The scalar `(-1)^s (c^2 - c^(2s-2k+2) psi eps(c)^(-2)) G(psi^-1)^2 G(eps^-1)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reciprocity {
    pub value: Cyclotomic,
    /// `c > 1` and coprime to `6 p N_f N_psi`.
    pub admissible: bool,
    pub vanishes: bool,
}

pub fn reciprocity_multiplier(
    s: i64,
    c: u64,
    psi: &DirichletCharacter,
    eps: &DirichletCharacter,
    k: u32,
    p: u64,
    level: u64,
) -> Result<Reciprocity> {
    let admissible = c > 1 && c.gcd(&(6 * p * level * psi.modulus())) == 1;
    let pe = &psi.value(c as i64) * &eps.value(c as i64);
    let e = 2 * s - 2 * k as i64 + 2;
    let ce = if e >= 0 {
        Cyclotomic::from_rational(1, rat_int(num_traits::pow(BigInt::from(c), e as usize)))
    } else {
        Cyclotomic::from_rational(1, BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(c), (-e) as usize)))
    };
    let inner = if pe.is_zero() {
        Cyclotomic::from_int(1, (c * c) as i64)
    } else {
        let inv2 = pe.inv().expect("nonzero").pow(2);
        &Cyclotomic::from_int(1, (c * c) as i64) - &(&ce * &inv2)
    };
    let g1 = gauss_sum(&psi.conj());
    let g2 = gauss_sum(&eps.conj());
    let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
    let value = (&(&inner * &(&g1 * &g1)) * &(&g2 * &g2)).scale(&rat_int(sign));
    let vanishes = value.is_zero();
    Ok(Reciprocity { value, admissible, vanishes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::level1_eigenform;

    fn f16(n: usize) -> QExpansion {
        level1_eigenform(16, n).unwrap()
    }

    fn psi7() -> DirichletCharacter {
        DirichletCharacter::from_label("7.2").unwrap()
    }

    #[test]
    fn euler_factor_weight_sixteen() {
        let f = f16(10).hecke_data();
        let t = DirichletCharacter::trivial(1);
        let e = euler_factor_symsq(&f, &t, 2).unwrap();
        let p = BigInt::from(1u64 << 15);
        let a = BigInt::from(216);
        assert_eq!(e.coeff(1), Cyclotomic::from_rational(1, BigRational::from_integer(-(&a * &a - &p))));
        let c = factorization_identity_check(&f, 1, &t, 2).unwrap();
        assert!(c.holds);
        assert_eq!(c.quartic_holds, Some(true));
        let c = factorization_identity_check(&f, 1, &psi7(), 3).unwrap();
        assert!(c.holds);
        let e7 = euler_factor_symsq(&f, &psi7(), 7).unwrap();
        assert_eq!(e7, ExactPoly::one());
    }

    #[test]
    fn coefficient_identity() {
        let f = f16(200);
        assert!(rankin_coefficient_identity(&f, &psi7(), 200).unwrap().is_empty());
        let d = SymSqDescriptor::new(&f, &psi7());
        let c = symsq_dirichlet_coeffs(&d, 100).unwrap();
        assert_eq!(c.coefficient(1), Cyclotomic::one(1));
        assert!(c.coefficient(7).is_zero());
        assert!(c.coefficient(49).is_zero());
    }

    #[test]
    fn direct_vs_euler_product() {
        let f = f16(3000);
        let d = SymSqDescriptor::new(&f, &psi7());
        let s = CBall::from_i64(30, 128);
        let a = L_direct(&d, &s, 20, 3000).unwrap();
        let b = euler_product_partial(&d, &s, 200, 128).unwrap();
        assert!(a.overlaps(&b), "{} vs {}", a, b);
        let big = L_direct(&d, &CBall::from_i64(60, 128), 12, 200).unwrap();
        assert!((big.re.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn critical_points() {
        assert_eq!(critical_delta(22, 16, 1), Some(1));
        assert_eq!(critical_delta(21, 16, 1), None);
        assert_eq!(critical_delta(3, 16, 1), Some(0));
        assert_eq!(critical_delta(31, 16, 1), None);
    }

    #[test]
    fn recognition_round_trip() {
        let x = QuadraticNumber::new(-3, crate::exact::rat(3, 7), crate::exact::rat(2, 7));
        let z = x.embed_complex(40);
        assert_eq!(recognize_quadratic(&z, -3, &BigInt::from(1000)), Some(x));
        let pi = CBall::from_real(Ball::pi(140));
        assert_eq!(recognize_quadratic(&pi, -3, &BigInt::from(1000)), None);
    }

    #[test]
    fn reciprocity_example() {
        let t = DirichletCharacter::trivial(1);
        let r = reciprocity_multiplier(22, 2, &psi7(), &t, 16, 37, 1).unwrap();
        assert!(!r.admissible);
        let g = gauss_sum(&psi7().conj());
        let inner = &Cyclotomic::from_int(1, 4) - &Cyclotomic::zeta_pow(3, -4).scale(&rat_int(1 << 14));
        assert_eq!(r.value, &inner * &(&g * &g));
        // Quadratic psi eps at s = k: c^2 - c^2 = 0 for every c.
        let q = DirichletCharacter::new(5, 4).unwrap();
        for c in [2u64, 3, 7, 11] {
            assert!(reciprocity_multiplier(16, c, &q, &t, 16, 37, 1).unwrap().vanishes);
        }
    }
}
