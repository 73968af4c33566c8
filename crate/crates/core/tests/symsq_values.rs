use num_bigint::BigInt;
use symsq_core::dirichlet::DirichletCharacter;
use symsq_core::exact::QuadraticNumber;
use symsq_core::modforms::level1_eigenform;
use symsq_core::real::{Ball, CBall, EmbedComplex};
use symsq_core::symsq::*;

fn psi7() -> DirichletCharacter {
    DirichletCharacter::from_label("7.2").unwrap()
}

fn reference_l22() -> CBall {
    CBall::new(
        Ball::from_decimal_str("0.998407750967419546583", 80).unwrap(),
        Ball::from_decimal_str("-0.00295712911510708676", 80).unwrap(),
    )
}

fn close(a: &CBall, b: &CBall, tol: f64) -> bool {
    (a - b).abs_upper().to_f64() < tol
}

#[test]
fn direct_value_at_22() {
    let f = level1_eigenform(16, 10000).unwrap();
    let d = SymSqDescriptor::new(&f, &psi7());
    let l = L_direct(&d, &CBall::from_i64(22, 128), 20, 10000).unwrap();
    assert!(close(&l, &reference_l22(), 1e-19), "{}", l);
    assert!(l.certified_digits() >= 20.0);
}

#[test]
fn afe_matches_direct() {
    let f = level1_eigenform(16, 4000).unwrap();
    let d = SymSqDescriptor::new(&f, &psi7());
    let cfg = AfeConfig::standard(&d).unwrap();
    let v = L_afe(&d, &cfg, &CBall::from_i64(22, 128), 22).unwrap();
    assert!(close(&v.value, &reference_l22(), 1e-19), "{} residual {}", v.value, v.residual);
    assert!((v.sign.abs().to_f64() - 1.0).abs() < 1e-15);
}

#[test]
fn afe_rejects_wrong_conductor() {
    let f = level1_eigenform(16, 4000).unwrap();
    let d = SymSqDescriptor::new(&f, &psi7());
    let mut cfg = AfeConfig::standard(&d).unwrap();
    cfg.conductor = 341;
    assert!(matches!(L_afe(&d, &cfg, &CBall::from_i64(22, 128), 15), Err(symsq_core::Error::Inconsistent { .. })));
}

#[test]
fn petersson_and_adjoint_value() {
    let f = level1_eigenform(16, 200).unwrap();
    let pet = petersson_norm(&f, 20).unwrap();
    let want = Ball::from_decimal_str("0.00000216906134759", 80).unwrap();
    assert!((&pet - &want).abs_upper().to_f64() < 1e-11 * want.to_f64(), "{}", pet);
    // L(Sym^2 f, k) = 2^(2k-1) pi^(k+1) / (k-1)! <f,f>
    let t = DirichletCharacter::trivial(1);
    let d = SymSqDescriptor::new(&f, &t);
    let cfg = AfeConfig::standard(&d).unwrap();
    let v = L_afe(&d, &cfg, &CBall::from_i64(16, 128), 15).unwrap();
    let pi = Ball::pi(128);
    let fact: BigInt = (1..16).map(BigInt::from).product();
    let rhs = (&pi.pow_u(17) * &pet).mul_2exp(31).div(&Ball::from_bigint(&fact, 128));
    assert!((&v.value.re - &rhs).abs_upper().to_f64() < 1e-10 * rhs.to_f64(), "{} vs {}", v.value, rhs);
}

#[test]
fn ratio_at_22() {
    let r = tilde_ratio_w16(22, 18, 10000).unwrap();
    let want = QuadraticNumber::new(
        -3,
        num_rational::BigRational::new(
            "136547867422656337144320".parse().unwrap(),
            "17433892055631543710491".parse().unwrap(),
        ),
        num_rational::BigRational::new(
            "102994007489228654461440".parse().unwrap(),
            "17433892055631543710491".parse().unwrap(),
        ),
    );
    let w = want.embed_complex(40);
    assert!(close(&r.ratio, &w, 1e-14), "{}", r.ratio);
}

fn ratio22() -> QuadraticNumber {
    QuadraticNumber::new(
        -3,
        num_rational::BigRational::new(
            "136547867422656337144320".parse().unwrap(),
            "17433892055631543710491".parse().unwrap(),
        ),
        num_rational::BigRational::new(
            "102994007489228654461440".parse().unwrap(),
            "17433892055631543710491".parse().unwrap(),
        ),
    )
}

#[test]
fn padic_values_at_22() {
    use symsq_core::padic::{PadicEmbedding, PadicNumber};
    let f = level1_eigenform(16, 500).unwrap().hecke_data();
    let psi = psi7();
    let cases = [((5, -2), 37u64, Some(0i64)), ((8, 1), 67, Some(1)), ((14, 9), 439, Some(0))];
    for ((a, b), p, val) in cases {
        let emb = PadicEmbedding::from_generator(&QuadraticNumber::from_ints(-3, a, b), 12).unwrap();
        assert_eq!(emb.p(), p);
        let v = padic_symsq_L_value(22, &ratio22(), &emb, &f, &psi, 12).unwrap();
        assert_eq!(v.valuation, val, "p = {}", p);
        assert!(!v.exceptional_zero);
        if p == 37 {
            let one = PadicNumber::from_i64(1, 37, 6);
            assert!(v.multiplier.value.congruent(&one, 6));
            assert!(v.multiplier.alpha.congruent(&PadicNumber::from_i64(11 + 7 * 37 + 25 * 37 * 37, 37, 3), 3));
        }
    }
}

#[test]
fn schmidt_ratio_is_conjugation_equivariant() {
    let f = level1_eigenform(16, 4000).unwrap();
    let pet = petersson_norm(&f, 20).unwrap();
    let s = CBall::from_i64(22, 128);
    let psi = psi7();
    let bar = psi.conj();
    let d = SymSqDescriptor::new(&f, &psi);
    let db = SymSqDescriptor::new(&f, &bar);
    let r = schmidt_ratio(&d, 22, &L_direct(&d, &s, 18, 4000).unwrap(), &pet).unwrap();
    let rb = schmidt_ratio(&db, 22, &L_direct(&db, &s, 18, 4000).unwrap(), &pet).unwrap();
    assert!(rb.overlaps(&r.conj()), "{} vs {}", rb, r);
    assert!(r.certified_digits() >= 15.0);
    // psi is even, so s = 21 has the wrong parity on the delta = 1 range
    assert!(matches!(schmidt_ratio(&d, 21, &s, &pet), Err(symsq_core::Error::NonCritical(21))));
}
