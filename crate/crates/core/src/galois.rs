//! Galois-side bookkeeping: graded pieces of the ordinary filtration,
//! classification of twists, Selmer predictions, hypothesis checks and
//! finite-level linear algebra over `F_p`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dirichlet::DirichletCharacter;
use crate::exact::{euler_phi, gcd_u64, small_factor, Cyclotomic};
use crate::modforms::HeckeData;
use crate::padic::PadicNumber;
use crate::symsq::{critical_delta, euler_factor_symsq, multiplier_vanishes, MultiplierKind};
use crate::{Error, Result};

pub type Mat3 = [[u64; 3]; 3];
pub type Mat2 = [[u64; 2]; 2];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

fn neg_mod(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

fn bigint_mod(a: &BigInt, p: u64) -> u64 {
    let m = a.mod_floor(&BigInt::from(p));
    m.iter_u64_digits().next().unwrap_or(0)
}

/// Reduction of cyclotomic integers modulo a degree one prime above `p`,
/// sending `zeta_n` to `g^((p-1)/n)` for the least primitive root `g`.
#[derive(Clone, Debug)]
pub struct FpReduction {
    pub p: u64,
    pub root: u64,
}

impl FpReduction {
    pub fn new(p: u64) -> Result<Self> {
        if !crate::exact::is_prime_u64(p) {
            return Err(Error::Domain(format!("{} is not prime", p)));
        }
        if p == 2 {
            return Ok(FpReduction { p, root: 1 });
        }
        let fs: Vec<u64> = small_factor(p - 1).into_iter().map(|(q, _)| q).collect();
        let root = (2..p).find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap();
        Ok(FpReduction { p, root })
    }

    /// Image of `zeta_n`, if `n | p - 1`.
    pub fn zeta(&self, n: u32) -> Option<u64> {
        if (self.p - 1) % n as u64 != 0 {
            return None;
        }
        Some(pow_mod(self.root, (self.p - 1) / n as u64, self.p))
    }

    pub fn reduce(&self, x: &Cyclotomic) -> Option<u64> {
        let z = self.zeta(x.order())?;
        let p = self.p;
        let mut acc = 0u64;
        let mut zp = 1u64;
        for c in x.coeffs() {
            let num = bigint_mod(c.numer(), p);
            let den = inv_mod(bigint_mod(c.denom(), p), p)?;
            acc = (acc + mul_mod(mul_mod(num, den, p), zp, p)) % p;
            zp = mul_mod(zp, z, p);
        }
        Some(acc)
    }

    /// `chi(a) mod p`; zero when `gcd(a, N) > 1`.
    pub fn char_value(&self, chi: &DirichletCharacter, a: i64) -> Option<u64> {
        match chi.exponent(a) {
            None => Some(0),
            Some(e) => Some(pow_mod(self.zeta(chi.order())?, e as u64, self.p)),
        }
    }
}

/// `kappa^r x unram(lambda)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub r: i64,
    pub lambda: PadicNumber,
    /// `log_p |lambda|` for the complex absolute value.
    pub archimedean_log_p: i64,
}

#[derive(Clone, Debug)]
pub struct GradedTriple {
    pub pieces: [GradedCharacter; 3],
    /// Whether `H^0(Q_{p,infty}, Gr^i)` vanishes.
    pub h0_vanishes: [bool; 3],
}

/// Characters on `Gr^0, Gr^1, Gr^2`: `kappa unram(alpha^2 psi(p))`,
/// `kappa^k unram(eps psi(p))`, `kappa^(2k-1) unram(beta^2 psi(p) / p^(2k-2))`.
///
/// `Gr^0` and `Gr^2` have `|lambda| = p^(k-1)` and `p^(1-k)`, so their
/// invariants vanish for `k >= 2`; `Gr^1` has invariants iff `eps psi(p) = 1`.
pub fn graded_characters(
    k: u32,
    alpha: &PadicNumber,
    beta: &PadicNumber,
    psi_p: &PadicNumber,
    eps_p: &PadicNumber,
    eps_psi_p: &Cyclotomic,
) -> Result<GradedTriple> {
    let p = alpha.p();
    let kk = k as i64;
    let lam0 = alpha.mul(alpha).mul(psi_p);
    let lam1 = eps_p.mul(psi_p);
    let pk = PadicNumber::from_integer(&num_traits::pow(BigInt::from(p), (2 * k - 2) as usize), p, 4 * kk + 8);
    let lam2 = beta.mul(beta).mul(psi_p).div(&pk)?;
    let a0 = kk - 1;
    let a2 = 1 - kk;
    let g1_trivial = eps_psi_p.is_rational() && eps_psi_p.as_rational() == Some(num_rational::BigRational::one());
    let pieces = [
        GradedCharacter { r: 1, lambda: lam0, archimedean_log_p: a0 },
        GradedCharacter { r: kk, lambda: lam1, archimedean_log_p: 0 },
        GradedCharacter { r: 2 * kk - 1, lambda: lam2, archimedean_log_p: a2 },
    ];
    Ok(GradedTriple { pieces, h0_vanishes: [a0 != 0, !g1_trivial, a2 != 0] })
}

/// Rank difference for `e_eta`: `2 - i` when `eta(-1) = psi(-1)`, else `1 - i`.
/// Transcribed table.
pub fn rank_table(i: u32, same_parity: bool) -> Result<i64> {
    if i > 3 {
        return Err(Error::Domain(format!("index {} outside 0..=3", i)));
    }
    Ok(if same_parity { 2 - i as i64 } else { 1 - i as i64 })
}

/// `m(j)`: 0 for `j <= 0`, 1 on `1..k-1`, 2 on `k..2k-2`, 3 beyond.
pub fn filtration_index(j: i64, k: u32) -> u32 {
    let k = k as i64;
    if j <= 0 {
        0
    } else if j <= k - 1 {
        1
    } else if j <= 2 * k - 2 {
        2
    } else {
        3
    }
}

/// Predicted Selmer order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelmerPrediction {
    pub order: BigUint,
    pub trivial: bool,
    pub statement: String,
}

/// `p^(c n) / h0` from the descent formula.
pub fn predict_selmer_order(p: u64, n: u32, c: u32, h0: &BigUint) -> Result<SelmerPrediction> {
    let total = num_traits::pow(BigUint::from(p), (c * n) as usize);
    if h0.is_zero() || !(&total % h0).is_zero() {
        return Err(Error::Divisibility(format!("{}", h0), format!("{}", total)));
    }
    let order = &total / h0;
    let trivial = order.is_one();
    let statement = if trivial {
        String::from("H^1_f = 0")
    } else if order == BigUint::from(p) {
        format!("trivial or cyclic of order {}", p)
    } else {
        format!("order at most {}", order)
    };
    Ok(SelmerPrediction { order, trivial, statement })
}

/// Verdict on whether `j + chi` is unfortunate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnfortunateVerdict {
    pub unfortunate: bool,
    pub witness: Option<u64>,
    pub obstruction: Option<String>,
}

/// Everything known about the twist point `j + chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointClass {
    pub j: i64,
    pub critical: bool,
    pub delta: Option<u32>,
    pub m: u32,
    pub e_vanishes: bool,
    pub e_prime_vanishes: bool,
    pub exceptional: bool,
    /// Only defined for `k <= j <= 2k-2` with `(-1)^j chi(-1) = psi(-1)`.
    pub unfortunate: Option<UnfortunateVerdict>,
    /// Nonvanishing of a p-adic Dirichlet L-value at `n >= 2` is assumed.
    pub schneider_caveat: bool,
}

/// Inputs for [`classify_point`].
#[derive(Clone, Debug)]
pub struct ClassifyInput<'a> {
    pub k: u32,
    pub p: u64,
    pub level: u64,
    pub psi: &'a DirichletCharacter,
    pub eps: &'a DirichletCharacter,
    /// Character of `Gamma`, of conductor `p^r` (trivial for `r = 0`).
    pub chi: &'a DirichletCharacter,
    /// `None` when regularity of `p` is unknown.
    pub regular: Option<bool>,
    pub c_bound: u64,
}

fn is_one(x: &Cyclotomic) -> bool {
    x.as_rational() == Some(num_rational::BigRational::one())
}

fn conductor_exponent(chi: &DirichletCharacter, p: u64) -> u32 {
    let mut c = chi.conductor();
    let mut r = 0;
    while c % p == 0 && c > 1 {
        c /= p;
        r += 1;
    }
    r
}

pub fn classify_point(j: i64, inp: &ClassifyInput) -> Result<PointClass> {
    let k = inp.k;
    let kk = k as i64;
    let p = inp.p;
    let eps_psi_p = &inp.eps.value(p as i64) * &inp.psi.value(p as i64);
    let eps_psi_p_one = is_one(&eps_psi_p);
    let chi_trivial = inp.chi.is_trivial();
    let r = conductor_exponent(inp.chi, p);
    let parity = inp.psi.parity() * inp.chi.parity();
    let delta = critical_delta(j, k, parity);
    let exceptional = eps_psi_p_one && j == kk && chi_trivial;
    let e_vanishes = multiplier_vanishes(MultiplierKind::E, j, k, r, eps_psi_p_one);
    let e_prime_vanishes = multiplier_vanishes(MultiplierKind::EPrime, j, k, r, eps_psi_p_one);

    let mut schneider_caveat = false;
    let in_range = (kk..=2 * kk - 2).contains(&j) && (if j % 2 == 0 { 1 } else { -1 }) * inp.chi.parity() == inp.psi.parity();
    let unfortunate = if in_range {
        let m = inp.eps.modulus().lcm(&inp.psi.modulus());
        let ep = inp.eps.induce(m)?.mul(&inp.psi.induce(m)?)?;
        let ep_trivial = ep.primitive().is_trivial();
        let ep_sq_trivial = ep.pow(2).primitive().is_trivial();
        let chi_sq_trivial = inp.chi.pow(2).primitive().is_trivial();
        if j == kk && ep_sq_trivial && chi_sq_trivial && !(ep_trivial && chi_trivial) {
            Some(UnfortunateVerdict {
                unfortunate: true,
                witness: None,
                obstruction: Some(String::from("j = k with chi and eps psi quadratic: the c factor vanishes identically")),
            })
        } else {
            let modulus = 6 * p * inp.level * inp.psi.modulus();
            let mut witness = None;
            for c in 2..=inp.c_bound {
                if gcd_u64(c, modulus) != 1 {
                    continue;
                }
                let f = c_factor(c, j, kk, inp.chi, &ep);
                // At j = k with chi and eps psi trivial the factor cancels the pole.
                if !f.is_zero() || (j == kk && ep_trivial && chi_trivial) {
                    witness = Some(c);
                    break;
                }
            }
            // Nonvanishing of L_p(eps psi, s - k + 1) at s = j + chi.
            // At j = k the value is nonzero (or its pole is cancelled by the c factor).
            // Otherwise it is known only for the zeta function at a regular prime
            // or on the component of k.
            let l_known = j == kk || (ep_trivial && (inp.regular == Some(true) || (j - kk) as u64 % (p - 1) == 0));
            schneider_caveat = !l_known;
            Some(UnfortunateVerdict { unfortunate: witness.is_none(), witness, obstruction: None })
        }
    } else {
        None
    };
    Ok(PointClass {
        j,
        critical: delta.is_some(),
        delta,
        m: filtration_index(j, k),
        e_vanishes,
        e_prime_vanishes,
        exceptional,
        unfortunate,
        schneider_caveat,
    })
}

/// `c^2 - c^(2j-2k+2) chi(c)^2 (eps psi)(c)^(-2)`.
fn c_factor(c: u64, j: i64, k: i64, chi: &DirichletCharacter, ep: &DirichletCharacter) -> Cyclotomic {
    let e = (2 * j - 2 * k + 2) as usize;
    let chi_c = chi.value(c as i64);
    let ep_c = ep.value(c as i64).inv().unwrap_or_else(|| Cyclotomic::zero(1));
    let t = &(&chi_c * &chi_c) * &(&ep_c * &ep_c);
    let ce = num_traits::pow(BigInt::from(c), e);
    &Cyclotomic::from_int(1, (c * c) as i64) - &t.scale(&num_rational::BigRational::from_integer(ce))
}

/// Finitely checkable hypotheses on `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub p: u64,
    pub p_at_least_7: bool,
    /// The character values generate a field in which `p` has a degree one prime.
    pub degree_one: bool,
    pub big_image: bool,
    /// Least `u` in `(Z/N_f N_psi)^x` with `eps psi(u) != +-1` and `psi(u)` a square mod p.
    pub u_witness: Option<u64>,
    pub eps_psi_p_not_one: bool,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.p_at_least_7 && self.degree_one && self.big_image && self.u_witness.is_some() && self.eps_psi_p_not_one
    }
}

fn is_square_mod(a: u64, p: u64) -> bool {
    a % p == 0 || p == 2 || pow_mod(a, (p - 1) / 2, p) == 1
}

fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    if !is_square_mod(a, p) {
        return None;
    }
    if a % p == 0 {
        return Some(0);
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| !is_square_mod(z, p)).unwrap();
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

fn u_search(red: &FpReduction, level: u64, psi: &DirichletCharacter, eps: &DirichletCharacter) -> Option<u64> {
    let n = level * psi.modulus();
    let p = red.p;
    (1..n.max(2)).filter(|&u| gcd_u64(u, n) == 1).find(|&u| {
        let (Some(e), Some(s)) = (red.char_value(eps, u as i64), red.char_value(psi, u as i64)) else { return false };
        let ep = mul_mod(e, s, p);
        ep != 1 && ep != p - 1 && is_square_mod(s, p)
    })
}

pub fn hypothesis_check(
    p: u64,
    level: u64,
    psi: &DirichletCharacter,
    eps: &DirichletCharacter,
    exceptional_primes: &[u64],
) -> Result<HypothesisReport> {
    let red = FpReduction::new(p)?;
    let order = crate::exact::lcm_u32(psi.order(), eps.order());
    let degree_one = (p - 1) % order as u64 == 0;
    let big_image = !exceptional_primes.contains(&p);
    let u_witness = if degree_one { u_search(&red, level, psi, eps) } else { None };
    let ep = &eps.value(p as i64) * &psi.value(p as i64);
    let mut notes = vec![String::from("image hypothesis taken from the supplied exceptional-prime set")];
    if !degree_one {
        notes.push(format!("character values of order {} do not reduce into F_{}", order, p));
    }
    Ok(HypothesisReport {
        p,
        p_at_least_7: p >= 7,
        degree_one,
        big_image,
        u_witness,
        eps_psi_p_not_one: !is_one(&ep),
        notes,
    })
}

fn mat_mul3(a: &Mat3, b: &Mat3, p: u64) -> Mat3 {
    let mut c = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0u64;
            for k in 0..3 {
                s = (s + mul_mod(a[i][k], b[k][j], p)) % p;
            }
            c[i][j] = s;
        }
    }
    c
}

/// Action on `x^2, xy, y^2` of `g = [[a, b], [c, d]]`.
pub fn sym2_mod_p(g: &Mat2, p: u64) -> Mat3 {
    let [[a, b], [c, d]] = *g;
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    [
        [m(a, a), m(a, b), m(b, b)],
        [m(2, m(a, c)), (m(a, d) + m(b, c)) % p, m(2, m(b, d))],
        [m(c, c), m(c, d), m(d, d)],
    ]
}

fn scale3(a: &Mat3, s: u64, p: u64) -> Mat3 {
    let mut b = *a;
    for row in b.iter_mut() {
        for x in row.iter_mut() {
            *x = mul_mod(*x, s, p);
        }
    }
    b
}

fn minus_identity(a: &Mat3, p: u64) -> Mat3 {
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    b
}

/// Rank over `F_p` of a dense matrix.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][col], p).unwrap();
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let prow = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank3(a: &Mat3, p: u64) -> usize {
    rank_mod_p(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), p)
}

/// Invariant factors of an integer matrix.
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()).unwrap_or(true) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let pr = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut() {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility condition
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            out.push(a[t][t].abs());
            t += 1;
        }
    }
    while out.len() < rows.min(cols) {
        out.push(BigInt::zero());
    }
    out
}

/// Dimension of `coker(M) / p` from the Smith form of the integer lift of `M`.
pub fn smith_cokernel_dim_mod_p(m: &Mat3, p: u64) -> usize {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let pb = BigInt::from(p);
    smith_invariants(&rows).iter().filter(|d| (*d % &pb).is_zero()).count()
}

/// Frobenius at `l` on `T/pT` and `T'/pT'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusModel {
    pub l: u64,
    pub g: Mat2,
    pub a: Mat3,
    pub t_prime: u64,
    pub regular_semisimple: bool,
}

impl FrobeniusModel {
    /// `det(1 - X A)` coefficients mod p.
    pub fn char_poly(&self, p: u64) -> [u64; 4] {
        let a = &self.a;
        let tr = (a[0][0] + a[1][1] + a[2][2]) % p;
        let mut c2 = 0u64;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let minor = (mul_mod(a[i][i], a[j][j], p) + p - mul_mod(a[i][j], a[j][i], p)) % p;
            c2 = (c2 + minor) % p;
        }
        let det = det3(a, p);
        [1, neg_mod(tr, p), c2, neg_mod(det, p)]
    }

    /// The conditions at mod p level: cyclic cokernel of `A - 1`, and `t' != 1`.
    pub fn passes(&self, p: u64) -> bool {
        self.l % p == 1 && rank3(&minus_identity(&self.a, p), p) >= 2 && self.t_prime != 1
    }
}

fn det3(a: &Mat3, p: u64) -> u64 {
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    let t1 = m(a[0][0], (m(a[1][1], a[2][2]) + p - m(a[1][2], a[2][1])) % p);
    let t2 = m(a[0][1], (m(a[1][0], a[2][2]) + p - m(a[1][2], a[2][0])) % p);
    let t3 = m(a[0][2], (m(a[1][0], a[2][1]) + p - m(a[1][1], a[2][0])) % p);
    (t1 + p - t2 + t3) % p
}

pub fn frobenius_model(
    red: &FpReduction,
    k: u32,
    l: u64,
    a_l: &BigInt,
    eps: &DirichletCharacter,
    psi: &DirichletCharacter,
) -> Option<FrobeniusModel> {
    let p = red.p;
    let e = red.char_value(eps, l as i64)?;
    let s = red.char_value(psi, l as i64)?;
    let det = mul_mod(pow_mod(l, (k - 1) as u64, p), e, p);
    let a = bigint_mod(a_l, p);
    let g = [[0, neg_mod(det, p)], [1, a]];
    let am = scale3(&sym2_mod_p(&g, p), s, p);
    let t_prime = mul_mod(mul_mod(det, s, p), l % p, p);
    let disc = (mul_mod(a, a, p) + p - mul_mod(4, det, p)) % p;
    Some(FrobeniusModel { l, g, a: am, t_prime, regular_semisimple: disc != 0 })
}

/// Outcome of a scan for primes in the Kolyvagin set.
#[derive(Clone, Debug, Default)]
pub struct PrimeScan {
    pub accepted: Vec<FrobeniusModel>,
    /// Repeated eigenvalue mod p: not classified.
    pub ambiguous: Vec<FrobeniusModel>,
    pub rejected: usize,
}

pub fn prime_scan(
    p: u64,
    h: &HeckeData,
    level: u64,
    eps: &DirichletCharacter,
    psi: &DirichletCharacter,
    l_max: u64,
) -> Result<PrimeScan> {
    let red = FpReduction::new(p)?;
    if red.zeta(psi.order()).is_none() || red.zeta(eps.order()).is_none() {
        return Err(Error::Domain(format!("character values do not reduce into F_{}", p)));
    }
    let bad = p * level * psi.modulus();
    let mut out = PrimeScan::default();
    for l in crate::exact::primes_up_to(l_max) {
        if l % p != 1 || bad % l == 0 {
            continue;
        }
        let a_l = h.ap.get(&l).ok_or_else(|| Error::MissingPrimes(vec![l]))?;
        let Some(m) = frobenius_model(&red, h.weight, l, a_l, eps, psi) else { continue };
        if !m.regular_semisimple {
            out.ambiguous.push(m);
        } else if m.passes(p) {
            out.accepted.push(m);
        } else {
            out.rejected += 1;
        }
    }
    Ok(out)
}

/// Checks the model against the Euler factor at `l` reduced mod p.
pub fn frobenius_matches_euler(m: &FrobeniusModel, h: &HeckeData, psi: &DirichletCharacter, red: &FpReduction) -> Result<bool> {
    let e = euler_factor_symsq(h, psi, m.l)?;
    let cp = m.char_poly(red.p);
    for i in 0..4 {
        if red.reduce(&e.coeff(i)) != Some(cp[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A `u` and the action of a lift `tau` at mod p level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauWitness {
    pub p: u64,
    pub u: u64,
    /// `diag(eps(u) psi(u)^(1/2), psi(u)^(-1/2))` on `M`.
    pub m_diag: [u64; 2],
    /// `psi(u) Sym^2` of the above on `T/pT`.
    pub a: Mat3,
    pub t_prime: u64,
}

/// `coker(A - 1)` is one dimensional and `t' != 1`.
pub fn verify_tau_action(a: &Mat3, t_prime: u64, p: u64) -> bool {
    rank3(&minus_identity(a, p), p) == 2 && t_prime % p != 1
}

pub fn tau_model(p: u64, u: u64, psi: &DirichletCharacter, eps: &DirichletCharacter) -> Result<TauWitness> {
    let red = FpReduction::new(p)?;
    let bad = || Error::NoWitness(format!("u = {} does not reduce into F_{}", u, p));
    let s = red.char_value(psi, u as i64).ok_or_else(bad)?;
    let e = red.char_value(eps, u as i64).ok_or_else(bad)?;
    let r = sqrt_mod(s, p).ok_or_else(|| Error::NoWitness(format!("psi({}) is not a square mod {}", u, p)))?;
    let rinv = inv_mod(r, p).ok_or_else(bad)?;
    let d = [[mul_mod(e, r, p), 0], [0, rinv]];
    let a = scale3(&sym2_mod_p(&d, p), s, p);
    let t_prime = mul_mod(e, s, p);
    if !verify_tau_action(&a, t_prime, p) {
        return Err(Error::NoWitness(format!("u = {} fails the cokernel test", u)));
    }
    Ok(TauWitness { p, u, m_diag: [d[0][0], d[1][1]], a, t_prime })
}

pub fn find_tau(p: u64, level: u64, psi: &DirichletCharacter, eps: &DirichletCharacter) -> Result<TauWitness> {
    let red = FpReduction::new(p)?;
    let u = u_search(&red, level, psi, eps).ok_or_else(|| Error::NoWitness(String::from("no u with eps psi(u) != +-1 and psi(u) a square")))?;
    tau_model(p, u, psi, eps)
}

/// Conjugate `P A P^(-1)` for invertible `P`.
pub fn conjugate(a: &Mat3, pm: &Mat3, p: u64) -> Option<Mat3> {
    let inv = inverse3(pm, p)?;
    Some(mat_mul3(&mat_mul3(pm, a, p), &inv, p))
}

pub fn inverse3(a: &Mat3, p: u64) -> Option<Mat3> {
    let d = inv_mod(det3(a, p), p)?;
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    let mut adj = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            adj[i][j] = (m(a[r0][c0], a[r1][c1]) + p - m(a[r0][c1], a[r1][c0])) % p;
        }
    }
    Some(scale3(&adj, d, p))
}

/// Closure of a generating set in `GL_3(F_p)`.
pub fn group_closure(gens: &[Mat3], p: u64, limit: usize) -> Result<Vec<Mat3>> {
    let id: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut seen: BTreeMap<Mat3, usize> = BTreeMap::new();
    let mut elems = vec![id];
    seen.insert(id, 0);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = mat_mul3(&elems[i], g, p);
            if !seen.contains_key(&h) {
                if elems.len() >= limit {
                    return Err(Error::GroupTooLarge(limit));
                }
                seen.insert(h, elems.len());
                elems.push(h);
            }
        }
        i += 1;
    }
    Ok(elems)
}

/// Dimensions of the cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Result {
    pub order: usize,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

/// `dim H^1(G, F_p^3)` as `dim Z^1 - dim B^1`.
///
/// Cocycles are functions `f: G -> F_p^3` with `f(gh) = f(g) + g f(h)`. With
/// `full` unset only the pairs `(g, s)` with `s` a generator are imposed;
/// the solution space is the same since the set of admissible `h` is closed
/// under products.
pub fn h1_brute_force(gens: &[Mat3], p: u64, full: bool) -> Result<H1Result> {
    let elems = group_closure(gens, p, 10_000)?;
    let n = elems.len();
    let index: BTreeMap<Mat3, usize> = elems.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
    let hs: Vec<usize> = if full { (0..n).collect() } else { gen_idx };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    // f(1) = 0 is implied by g = h = 1; keep it explicit.
    for c in 0..3 {
        let mut r = vec![0u64; 3 * n];
        r[c] = 1;
        rows.push(r);
    }
    for (gi, g) in elems.iter().enumerate() {
        for &hi in &hs {
            let gh = index[&mat_mul3(g, &elems[hi], p)];
            for c in 0..3 {
                let mut r = vec![0u64; 3 * n];
                r[3 * gh + c] = (r[3 * gh + c] + 1) % p;
                r[3 * gi + c] = (r[3 * gi + c] + p - 1) % p;
                for d in 0..3 {
                    r[3 * hi + d] = (r[3 * hi + d] + p - g[c][d]) % p;
                }
                rows.push(r);
            }
        }
    }
    let z1 = 3 * n - rank_mod_p(&rows, p);
    // B^1 is the image of v -> (g v - v); its kernel is the fixed space.
    let mut fix = Vec::new();
    for g in gens {
        for r in minus_identity(g, p).iter() {
            fix.push(r.to_vec());
        }
    }
    let fixed = 3 - rank_mod_p(&fix, p);
    let b1 = 3 - fixed;
    Ok(H1Result { order: n, z1, b1, h1: z1 - b1 })
}

/// Generators of `SL_2(F_p)`.
pub fn sl2_generators(p: u64) -> [Mat2; 2] {
    [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]
        .map(|m: Mat2| m.map(|r| r.map(|x| x % p)))
}

/// Number of `u` coprime to `N` tested by [`find_tau`].
pub fn u_candidates(level: u64, psi: &DirichletCharacter) -> u64 {
    euler_phi(level * psi.modulus())
}

/// `v_p` of an integer.
pub fn valuation_u(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi7() -> DirichletCharacter {
        DirichletCharacter::from_label("7.2").unwrap()
    }

    #[test]
    fn selmer_predictions() {
        let one = BigUint::one();
        assert_eq!(predict_selmer_order(37, 0, 1, &one).unwrap().statement, "H^1_f = 0");
        assert_eq!(predict_selmer_order(67, 1, 1, &one).unwrap().order, BigUint::from(67u32));
        assert!(predict_selmer_order(67, 0, 2, &one).unwrap().trivial);
        assert!(predict_selmer_order(5, 1, 1, &BigUint::from(25u32)).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_table(0, true).unwrap(), 2);
        assert_eq!(rank_table(2, true).unwrap(), 0);
        assert_eq!(rank_table(0, false).unwrap(), 1);
    }

    #[test]
    fn tau_for_37() {
        let t = DirichletCharacter::trivial(1);
        let w = find_tau(37, 1, &psi7(), &t).unwrap();
        assert!(verify_tau_action(&w.a, w.t_prime, 37));
        let w3 = tau_model(37, 3, &psi7(), &t).unwrap();
        let red = FpReduction::new(37).unwrap();
        let s = red.char_value(&psi7(), 3).unwrap();
        let diag = [mul_mod(s, s, 37), s, 1];
        for i in 0..3 {
            assert_eq!(w3.a[i][i], diag[i]);
        }
        assert!(find_tau(37, 1, &DirichletCharacter::trivial(7), &t).is_err());
        let pm = [[1, 2, 0], [0, 1, 5], [3, 0, 1]];
        let c = conjugate(&w3.a, &pm, 37).unwrap();
        assert!(verify_tau_action(&c, w3.t_prime, 37));
    }

    #[test]
    fn smith_agrees_with_rank() {
        let m: Mat3 = [[1, 2, 3], [4, 5, 6], [7, 8, 9]];
        assert_eq!(smith_cokernel_dim_mod_p(&m, 3), 3 - rank3(&m, 3));
        assert_eq!(smith_cokernel_dim_mod_p(&m, 5), 3 - rank3(&m, 5));
        let id: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(rank3(&minus_identity(&id, 7), 7), 0);
    }

    #[test]
    fn cohomology_small_groups() {
        let id: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(h1_brute_force(&[id], 7, true).unwrap().h1, 0);
        let u: Mat3 = [[1, 1, 0], [0, 1, 1], [0, 0, 1]];
        let full = h1_brute_force(&[u], 7, true).unwrap();
        let gens = h1_brute_force(&[u], 7, false).unwrap();
        assert_eq!(full, gens);
        // crossed homomorphisms of a cyclic group: ker(1 + g + ... + g^(n-1))
        let elems = group_closure(&[u], 7, 100).unwrap();
        let mut norm = [[0u64; 3]; 3];
        for g in &elems {
            for i in 0..3 {
                for j in 0..3 {
                    norm[i][j] = (norm[i][j] + g[i][j]) % 7;
                }
            }
        }
        assert_eq!(full.z1, 3 - rank3(&norm, 7));
        assert_eq!(full.h1, 1);
    }

    #[test]
    fn sym2_sl2_f7_has_no_h1() {
        let gens: Vec<Mat3> = sl2_generators(7).iter().map(|g| sym2_mod_p(g, 7)).collect();
        let r = h1_brute_force(&gens, 7, false).unwrap();
        assert_eq!(r.order, 168);
        assert_eq!(r.h1, 0);
    }
}
