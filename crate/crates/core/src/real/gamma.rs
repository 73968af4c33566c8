//! Complex Gamma function by Stirling's series with an explicit remainder.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{Ball, CBall, Mag};
use crate::exact::bernoulli_numbers;
use crate::{Error, Result};

/// Stirling coefficients `B_2j / (2j (2j - 1))` at a fixed precision.
/// Build once and reuse across many evaluations.
pub struct GammaCtx {
    prec: u32,
    coeffs: Vec<Ball>,
    coeff_mags: Vec<Mag>,
    half_ln_2pi: Ball,
    shift_radius: f64,
}

impl GammaCtx {
    pub fn new(prec: u32) -> GammaCtx {
        let wp = prec + 16;
        // With |w| >= R the optimal Stirling truncation error is about
        // exp(-4.4 R) even after the 2^M sector factor, so R ~ wp/5 suffices.
        let shift_radius = wp as f64 / 5.0 + 8.0;
        let m_max = (wp as usize) / 3 + 24;
        let b = bernoulli_numbers(2 * m_max + 2);
        let mut coeffs = Vec::with_capacity(m_max + 1);
        let mut coeff_mags = Vec::with_capacity(m_max + 1);
        for j in 1..=m_max + 1 {
            let d = BigInt::from((2 * j * (2 * j - 1)) as u64);
            let c = &b[2 * j] / num_rational::BigRational::from_integer(d);
            let cb = Ball::from_rational(&c, wp);
            coeff_mags.push(cb.abs_upper());
            coeffs.push(cb);
        }
        let two_pi = Ball::pi(wp).mul_i64(2);
        let half_ln_2pi = two_pi.ln().mul_2exp(-1);
        GammaCtx { prec, coeffs, coeff_mags, half_ln_2pi, shift_radius }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `ln Gamma(w)` on the principal branch for `Re w >= R`.
    fn stirling(&self, w: &CBall) -> CBall {
        let wp = self.prec + 16;
        let lw = w.ln();
        let half = CBall::from_real(Ball::one(wp).mul_2exp(-1));
        let mut s = &(&(w - &half) * &lw) - w;
        s.re = &s.re + &self.half_ln_2pi;
        let winv = w.inv();
        let winv2 = winv.sqr();
        let winv_mag = winv.abs_upper();
        let winv2_mag = winv_mag.mul(&winv_mag);
        let target = Mag::pow2(-(wp as i64));
        let mut p = winv.clone();
        let mut pmag = winv_mag;
        for j in 1..self.coeffs.len() {
            s = &s + &p.scale(&self.coeffs[j - 1]);
            p = &p * &winv2;
            pmag = pmag.mul(&winv2_mag);
            // Remainder after j terms, with the sector factor sec^(2j+2)(arg/2) <= 2^(j+1).
            let bound = self.coeff_mags[j].mul(&pmag).mul_2exp(j as i64 + 1);
            if bound.cmp_mag(&target) == core::cmp::Ordering::Less || j + 1 == self.coeffs.len() {
                s.re = s.re.add_error(bound);
                s.im = s.im.add_error(bound);
                break;
            }
        }
        s
    }

    pub fn gamma(&self, z: &CBall) -> Result<CBall> {
        let wp = self.prec + 16;
        if encloses_nonpositive_integer(z) {
            return Err(Error::Pole);
        }
        if let Some(n) = exact_positive_integer(z) {
            if n <= 2000 {
                let mut f = BigInt::one();
                for i in 2..n {
                    f *= i;
                }
                return Ok(CBall::from_real(Ball::from_bigint(&f, self.prec.max(f.bits() as u32))));
            }
        }
        let zw = CBall::new(z.re.with_prec(wp), z.im.with_prec(wp));
        if zw.re.to_f64() < 0.5 {
            // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
            let one_minus = &CBall::one(wp) - &zw;
            let g = self.gamma(&one_minus)?;
            let pi = Ball::pi(wp);
            let s = sin_complex(&zw.scale(&pi));
            let out = CBall::from_real(pi).div(&(&s * &g));
            return Ok(round_to(&out, self.prec));
        }
        let shift = (self.shift_radius - zw.re.to_f64()).ceil_nonneg();
        let mut w = zw.clone();
        let mut prod = CBall::one(wp);
        for _ in 0..shift {
            prod = &prod * &w;
            w = &w + &CBall::one(wp);
        }
        let lg = self.stirling(&w);
        let out = lg.exp().div(&prod);
        Ok(round_to(&out, self.prec))
    }
}

trait CeilNonneg {
    fn ceil_nonneg(self) -> u64;
}

impl CeilNonneg for f64 {
    fn ceil_nonneg(self) -> u64 {
        if self <= 0.0 {
            0
        } else {
            libm::ceil(self) as u64
        }
    }
}

fn round_to(z: &CBall, prec: u32) -> CBall {
    CBall::new(z.re.with_prec(prec), z.im.with_prec(prec))
}

fn sin_complex(z: &CBall) -> CBall {
    // sin(x + iy) = sin x cosh y + i cos x sinh y
    let (s, c) = z.re.sin_cos();
    let ey = z.im.exp();
    let emy = ey.inv();
    let ch = (&ey + &emy).mul_2exp(-1);
    let sh = (&ey - &emy).mul_2exp(-1);
    CBall::new(&s * &ch, &c * &sh)
}

fn exact_positive_integer(z: &CBall) -> Option<u64> {
    if !z.re.is_exact() || !z.im.is_exact() || !z.im.mid().is_zero() {
        return None;
    }
    let m = z.re.mid();
    if m.exponent() < 0 || m.sign() != num_bigint::Sign::Plus {
        return None;
    }
    (m.mantissa() << m.exponent() as usize).to_u64()
}

fn encloses_nonpositive_integer(z: &CBall) -> bool {
    if !z.im.contains_zero() {
        return false;
    }
    let x = z.re.to_f64();
    if x > 0.5 {
        // Only possible with an enormous radius.
        return z.re.contains_zero() || !z.re.is_finite();
    }
    let n = libm::round(x) as i64;
    [n - 1, n, n + 1]
        .iter()
        .any(|&k| k <= 0 && z.re.overlaps(&Ball::from_i64(k, z.re.prec())))
}

/// `Gamma(s)` at the precision carried by `s`.
pub fn gamma(s: &CBall) -> Result<CBall> {
    GammaCtx::new(s.prec()).gamma(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn integer_values() {
        let g = gamma(&CBall::from_i64(22, 128)).unwrap();
        assert_eq!(g.re.mid_decimal(20), "5.1090942171709440000e19");
        assert!(g.re.is_exact());
        assert!(gamma(&CBall::from_i64(1, 128)).unwrap().re.contains_rational(&rat(1, 1)));
        assert!(gamma(&CBall::from_i64(7, 128)).unwrap().re.contains_rational(&rat(720, 1)));
    }

    #[test]
    fn poles_rejected() {
        assert_eq!(gamma(&CBall::from_i64(0, 64)).unwrap_err(), Error::Pole);
        assert_eq!(gamma(&CBall::from_i64(-3, 64)).unwrap_err(), Error::Pole);
    }

    #[test]
    fn half_integer_and_complex() {
        let ctx = GammaCtx::new(160);
        let half = CBall::from_real(Ball::from_rational(&rat(1, 2), 160));
        let g = ctx.gamma(&half).unwrap();
        let sqrt_pi = Ball::pi(160).sqrt();
        assert!(g.re.overlaps(&sqrt_pi));
        assert!(g.re.rad_f64() < 1e-40);
        // Gamma(1 + i) = 0.498015668118356 - 0.154949828301811 i
        let z = CBall::new(Ball::one(160), Ball::one(160));
        let g = ctx.gamma(&z).unwrap();
        assert!((g.re.to_f64() - 0.498015668118356).abs() < 1e-14);
        assert!((g.im.to_f64() + 0.154949828301811).abs() < 1e-14);
        // Reflection branch: Gamma(-1/2) = -2 sqrt(pi)
        let mh = CBall::from_real(Ball::from_rational(&rat(-1, 2), 160));
        let g = ctx.gamma(&mh).unwrap();
        assert!(g.re.overlaps(&sqrt_pi.mul_i64(-2)));
    }
}
