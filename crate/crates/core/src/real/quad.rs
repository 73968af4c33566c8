//! Tanh-sinh quadrature on intervals and on the truncated modular
//! fundamental domain.

use alloc::vec::Vec;

use super::{Ball, Mag};
use crate::{Error, Result};

/// Result of a quadrature: enclosure plus the refinement history that produced it.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Ball,
    pub level: u32,
    pub evaluations: usize,
    /// Difference between the last two levels, used as the discretization radius.
    pub discretization: Mag,
}

/// Standard tanh-sinh abscissae and weights on `[-1, 1]` at step `2^-level`.
fn nodes(level: u32, prec: u32) -> Vec<(Ball, Ball)> {
    let h = Ball::one(prec).mul_2exp(-(level as i64));
    // Weights fall below 2^-prec once pi sinh(t) exceeds prec ln 2.
    let tmax = libm::asinh(prec as f64 * core::f64::consts::LN_2 / core::f64::consts::PI) + 0.5;
    let kmax = (tmax * (1u64 << level) as f64) as i64;
    let half_pi = Ball::pi(prec).mul_2exp(-1);
    let mut out = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let t = h.mul_i64(k);
        let et = t.exp();
        let eti = et.inv();
        let sinh = (&et - &eti).mul_2exp(-1);
        let cosh = (&et + &eti).mul_2exp(-1);
        let u = &half_pi * &sinh;
        let e2u = u.mul_2exp(1).exp();
        let one = Ball::one(prec);
        let denom = &one + &e2u;
        let x = (&e2u - &one).div(&denom);
        // (pi/2) cosh t / cosh^2 u = (pi/2) cosh t * 4 e^{2u} / (1 + e^{2u})^2
        let w = (&(&half_pi * &cosh) * &e2u).mul_2exp(2).div(&denom.sqr());
        out.push((x, &w * &h));
    }
    out
}

/// One-dimensional tanh-sinh on `[a, b]`, refining until successive levels
/// differ by less than `tol`.
pub fn tanh_sinh<F>(f: F, a: &Ball, b: &Ball, tol: f64, prec: u32) -> Result<Quadrature>
where
    F: Fn(&Ball) -> Ball,
{
    let half = (b - a).mul_2exp(-1);
    let center = (a + b).mul_2exp(-1);
    let mut prev: Option<Ball> = None;
    let mut evaluations = 0;
    for level in 1..=12u32 {
        let mut s = Ball::zero(prec);
        let ns = nodes(level, prec);
        for (x, w) in ns.iter() {
            let y = &center + &(&half * x);
            s = &s + &(w * &f(&y));
        }
        evaluations += ns.len();
        let s = &s * &half;
        if let Some(p) = prev {
            let diff = (&s - &p).abs_upper();
            if diff.to_f64() <= tol / 4.0 && level >= 3 {
                return Ok(Quadrature { value: s.add_error(diff), level, evaluations, discretization: diff });
            }
        }
        prev = Some(s);
    }
    let achieved = prev.map(|p| p.rad_f64()).unwrap_or(f64::INFINITY);
    Err(Error::NonConvergence { achieved, requested: tol })
}

/// `{ |x| <= 1/2, x^2 + y^2 >= 1, y <= y_cut }`. When `even_in_x` is set the
/// integrand is promised to satisfy `f(-x, y) = f(x, y)` and only `x >= 0` is sampled.
#[derive(Clone, Debug)]
pub struct FundamentalRegion {
    pub y_cut: Ball,
    pub even_in_x: bool,
}

/// Integrates `f(x, y)` over the truncated fundamental domain and adds the
/// caller's enclosure `tail` of the part above `y_cut`. Refinement stops once
/// the radius drops below `tol`; the discretization part of the radius is the
/// difference between the last two levels.
pub fn integrate_2d<F>(f: F, region: &FundamentalRegion, tail: &Ball, tol: f64, prec: u32) -> Result<Quadrature>
where
    F: Fn(&Ball, &Ball) -> Ball,
{
    let one = Ball::one(prec);
    let ycut = region.y_cut.with_prec(prec);
    let mut prev: Option<Ball> = None;
    let mut evaluations = 0usize;
    let mut last_rad = f64::INFINITY;
    for level in 1..=9u32 {
        let ns = nodes(level, prec);
        let mut total = Ball::zero(prec);
        for (xo, wo) in ns.iter() {
            // Outer variable on [-1/2, 1/2], or on [0, 1/2] for even integrands.
            let (x, wx) = if region.even_in_x {
                ((&one + xo).mul_2exp(-2), wo.mul_2exp(-2))
            } else {
                (xo.mul_2exp(-1), wo.mul_2exp(-1))
            };
            let lo = (&one - &x.sqr()).sqrt();
            let half = (&ycut - &lo).mul_2exp(-1);
            let center = (&ycut + &lo).mul_2exp(-1);
            let mut inner = Ball::zero(prec);
            for (yi, wi) in ns.iter() {
                let y = &center + &(&half * yi);
                inner = &inner + &(wi * &f(&x, &y));
            }
            evaluations += ns.len();
            total = &total + &(&wx * &(&inner * &half));
        }
        if region.even_in_x {
            total = total.mul_2exp(1);
        }
        if let Some(p) = prev {
            let diff = (&total - &p).abs_upper();
            let value = (&total + tail).add_error(diff);
            last_rad = value.rad_f64();
            if level >= 3 && last_rad <= tol {
                return Ok(Quadrature { value, level, evaluations, discretization: diff });
            }
        }
        prev = Some(total);
    }
    Err(Error::NonConvergence { achieved: last_rad, requested: tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional() {
        let p = 128;
        let q = tanh_sinh(|x| x.sqr(), &Ball::zero(p), &Ball::one(p), 1e-30, p).unwrap();
        assert!(q.value.overlaps(&Ball::from_rational(&crate::exact::rat(1, 3), p)));
        assert!(q.value.rad_f64() < 1e-29);
    }

    #[test]
    fn region_area_and_symmetry() {
        let p = 128;
        // 1 - sqrt(3)/4 - pi/6
        let area = &(&Ball::one(p) - &Ball::from_i64(3, p).sqrt().mul_2exp(-2)) - &Ball::pi(p).div_i64(6);
        for even in [false, true] {
            let r = FundamentalRegion { y_cut: Ball::one(p), even_in_x: even };
            let q = integrate_2d(|_x, _y| Ball::one(p), &r, &Ball::zero(p), 1e-25, p).unwrap();
            assert!(q.value.overlaps(&area), "{}", q.value);
            let q = integrate_2d(|x, y| &x.sqr() * y, &r, &Ball::zero(p), 1e-25, p).unwrap();
            assert!(q.value.overlaps(&Ball::from_rational(&crate::exact::rat(1, 160), p)), "{}", q.value);
        }
    }

    #[test]
    fn hyperbolic_mass() {
        let p = 128;
        let ten = Ball::from_i64(10, p);
        let r = FundamentalRegion { y_cut: ten.clone(), even_in_x: true };
        let third = Ball::pi(p).div_i64(3);
        let q = integrate_2d(|_x, y| y.sqr().inv(), &r, &Ball::zero(p), 1e-25, p).unwrap();
        assert!(q.value.overlaps(&(&third - &ten.inv())), "{}", q.value);
        let q = integrate_2d(|_x, y| y.sqr().inv(), &r, &ten.inv(), 1e-25, p).unwrap();
        assert!(q.value.overlaps(&third), "{}", q.value);
        assert!(q.value.rad_f64() < 1e-24);
    }
}
