use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use symsq_core::dirichlet::{gauss_sum, gen_bernoulli, DirichletCharacter};
use symsq_core::exact::{gcd_u64, is_prime_u64, Cyclotomic, ExactPoly, QuadraticNumber};
use symsq_core::galois::rank_mod_p;
use symsq_core::modforms::{level1_eigenform, HeckeData, QExpansion, SUPPORTED_WEIGHTS};
use symsq_core::padic::{hensel_root, GroupRingElt, Inversion, PadicEmbedding, PadicNumber};
use symsq_core::real::Ball;
use symsq_core::symsq::factorization_identity_check;

const CASES: u32 = 1000;

fn forms() -> &'static Vec<QExpansion> {
    static F: OnceLock<Vec<QExpansion>> = OnceLock::new();
    F.get_or_init(|| SUPPORTED_WEIGHTS.iter().map(|&k| level1_eigenform(k, 400).unwrap()).collect())
}

fn small_primes() -> Vec<u64> {
    (2..60).filter(|&n| is_prime_u64(n)).collect()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn hecke_multiplicativity(idx in 0usize..6, m in 1u64..20, n in 1u64..20) {
        let f = &forms()[idx];
        if gcd_u64(m, n) == 1 {
            prop_assert_eq!(f.coeff((m * n) as usize).clone(), f.coeff(m as usize) * f.coeff(n as usize));
        }
    }

    #[test]
    fn hecke_prime_powers(idx in 0usize..6, pi in 0usize..8, r in 1u32..4) {
        let f = &forms()[idx];
        let p = [2u64, 3, 5, 7][pi % 4];
        let mut r = r;
        while p.pow(r + 1) > 400 {
            r -= 1;
        }
        let pk = num_traits::pow(BigInt::from(p), (f.weight - 1) as usize);
        let c = |e: u32| f.coeff(p.pow(e) as usize);
        prop_assert_eq!(c(r + 1).clone(), c(1) * c(r) - pk * c(r - 1));
    }

    #[test]
    fn gauss_sum_norm(n in 3u64..64, i in 1u64..64) {
        if gcd_u64(i % n, n) == 1 && i % n != 0 {
            let chi = DirichletCharacter::new(n, i % n).unwrap();
            if chi.is_primitive() {
                let g = gauss_sum(&chi);
                let nn = &g * &g.conj();
                prop_assert_eq!(nn, Cyclotomic::from_int(1, n as i64).promote(g.order()));
            }
        }
    }

    #[test]
    fn bernoulli_parity(n in 1u64..40, i in 1u64..40, m in 1u32..12) {
        if gcd_u64(i % n, n) == 1 {
            let chi = DirichletCharacter::new(n, i % n).unwrap();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            if chi.parity() != sign && !(m == 1 && n == 1) {
                prop_assert!(gen_bernoulli(m, &chi).value.is_zero());
            }
        }
    }

    #[test]
    fn ball_containment(a in -10_000i64..10_000, b in 1i64..1000, c in -10_000i64..10_000, d in 1i64..1000) {
        let p = 96;
        let x = q(a, b);
        let y = q(c, d);
        let bx = Ball::from_rational(&x, p);
        let by = Ball::from_rational(&y, p);
        prop_assert!((&bx + &by).contains(&Ball::from_rational(&(&x + &y), p + 64)));
        prop_assert!((&bx * &by).contains(&Ball::from_rational(&(&x * &y), p + 64)));
        if !y.is_zero() {
            prop_assert!(bx.div(&by).contains(&Ball::from_rational(&(&x / &y), p + 64)));
        }
        let sx = Ball::from_rational(&(&x / BigRational::from_integer(1000.into())), p);
        let sy = Ball::from_rational(&(&y / BigRational::from_integer(1000.into())), p);
        prop_assert!((&sx + &sy).exp().overlaps(&(&sx.exp() * &sy.exp())));
        prop_assert!(sx.exp().ln().overlaps(&sx));
        prop_assert!(bx.sqr().sqrt().overlaps(&Ball::from_rational(&num_traits::Signed::abs(&x), p)));
    }

    #[test]
    fn hensel_residual(pi in 0usize..17, r0 in 0i64..1000, b in -50i64..50, c in -50i64..50, kk in 2u32..20) {
        let p = small_primes()[pi];
        let r0 = r0 % p as i64;
        // (X - r0)(X^2 + bX + c), with r0 a simple root mod p
        let quad_at_r0 = r0 * r0 + b * r0 + c;
        if quad_at_r0.rem_euclid(p as i64) != 0 {
            let f = ExactPoly::from_ints(&[-r0 * c, c - r0 * b, b - r0, 1]);
            let root = hensel_root(&f, p, &BigInt::from(r0), kk).unwrap();
            let coeffs = f.integer_coeffs().unwrap();
            let mut val = PadicNumber::from_i64(0, p, kk as i64 + 4);
            let mut pw = PadicNumber::from_i64(1, p, kk as i64 + 4);
            for co in &coeffs {
                val = val.add(&pw.mul(&PadicNumber::from_integer(co, p, kk as i64 + 4)));
                pw = pw.mul(&root);
            }
            prop_assert!(val.congruent(&PadicNumber::from_i64(0, p, kk as i64), kk as i64));
            prop_assert_eq!(root.residue(), Some(r0 as u64));
        }
    }

    #[test]
    fn embedding_multiplicative(a in -40i64..40, b in -40i64..40, c in -40i64..40, d in -40i64..40, den in 1i64..20) {
        let den = if den % 37 == 0 { 1 } else { den };
        let emb = PadicEmbedding::from_generator(&QuadraticNumber::from_ints(-3, 5, -2), 12).unwrap();
        let x = QuadraticNumber::new(-3, q(a, den), q(b, den));
        let y = QuadraticNumber::from_ints(-3, c, d);
        let ex = emb.embed_quadratic(&x, 12).unwrap();
        let ey = emb.embed_quadratic(&y, 12).unwrap();
        let exy = emb.embed_quadratic(&(&x * &y), 12).unwrap();
        let prod = ex.mul(&ey);
        if let Some(k) = prod.abs_prec().zip(exy.abs_prec()).map(|(u, v)| u.min(v)) {
            prop_assert!(prod.congruent(&exy, k));
        }
        let esum = emb.embed_quadratic(&(&x + &y), 12).unwrap();
        prop_assert!(ex.add(&ey).congruent(&esum, 8));
    }

    #[test]
    fn groupring_inverse_verdict(pi in 0usize..6, n in 1u64..7, cs in proptest::collection::vec(-5i64..5, 7)) {
        let p = [3u64, 5, 7, 11, 13, 37][pi];
        let k = 4;
        let orders = [n];
        let mut x = GroupRingElt::zero(p, k, &orders);
        for (j, c) in cs.iter().take(n as usize).enumerate() {
            x.add_term(&[j as u64], *c);
        }
        match x.invert() {
            Inversion::Invertible(y) => prop_assert!(x.mul(&y).is_one()),
            Inversion::NotInvertible => {
                // the multiplication matrix is singular mod p
                let mut cols = Vec::new();
                for j in 0..n {
                    let mut g = GroupRingElt::zero(p, k, &orders);
                    g.add_term(&[j], 1);
                    cols.push(x.mul(&g).coeffs().iter().map(|c| c % p).collect::<Vec<_>>());
                }
                prop_assert!(rank_mod_p(&cols, p) < n as usize);
            }
        }
    }

    #[test]
    fn local_factorization_identity(k in 2u32..30, li in 0usize..17, a in -1000i64..1000, n in 1u64..30, i in 1u64..30) {
        let l = small_primes()[li];
        if gcd_u64(i % n, n) == 1 {
            let psi = DirichletCharacter::new(n, i % n).unwrap();
            let mut ap = BTreeMap::new();
            ap.insert(l, BigInt::from(a));
            let h = HeckeData::new(k, DirichletCharacter::trivial(1), ap).unwrap();
            let c = factorization_identity_check(&h, 1, &psi, l).unwrap();
            prop_assert!(c.holds);
            if psi.is_trivial() && n % l != 0 {
                prop_assert_eq!(c.quartic_holds, Some(true));
            }
        }
    }
}

#[test]
fn one_is_unit() {
    let x = GroupRingElt::one(5, 3, &[4]);
    assert!(matches!(x.invert(), Inversion::Invertible(ref y) if y.is_one()));
    assert!(BigInt::one() > BigInt::zero());
}
