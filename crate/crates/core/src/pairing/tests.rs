use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::costmodel::counter::{Op, OpCounter};
use crate::params::{derive_params_with, reference_params, DeriveOptions};

fn tiny() -> BnParams {
    derive_params_with(1, DeriveOptions::default()).unwrap()
}

fn scalar(params: &BnParams, rng: &mut impl Rng) -> BigUint {
    BigUint::from(rng.gen_range(1u64..u64::MAX)) % (&params.r - 1u32) + 1u32
}

fn points(params: &BnParams, a: &BigUint, b: &BigUint) -> (G1Point, G2Affine) {
    let c = params.ctx();
    let p = g1_mul(params.modulus(), &params.g1_gen, a);
    let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&params.g2_gen), b));
    (p, q)
}

#[test]
fn bilinear_and_nondegenerate() {
    for params in [tiny(), reference_params().unwrap()] {
        let c = params.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = optimal_ate(&params, &params.g1_gen, &params.g2_gen).unwrap().value;
        assert_ne!(base, Fp12::one(c.tower));
        assert_eq!(c.fp12_pow(&base, &params.r), Fp12::one(c.tower));
        for _ in 0..3 {
            let a = scalar(&params, &mut rng);
            let b = scalar(&params, &mut rng);
            let (p, q) = points(&params, &a, &b);
            let e = optimal_ate(&params, &p, &q).unwrap().value;
            assert_eq!(e, c.fp12_pow(&base, &(&a * &b)));
        }
    }
}

#[test]
fn final_exponentiation_matches_pow() {
    for params in [tiny(), reference_params().unwrap()] {
        let c = params.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..2 {
            let f = Fp12::random(c.tower, &mut rng);
            let m = easy_part(&c, &f).unwrap();
            let easy = (params.p.pow(6) - 1u32) * (params.p.pow(2) + 1u32);
            assert_eq!(m, c.fp12_pow(&f, &easy));
            assert_eq!(hard_part(&c, &params, &m), c.fp12_pow(&m, &hard_exponent(&params)));
            assert_eq!(final_exponentiation(&c, &params, &f).unwrap(), c.fp12_pow(&f, &final_exponent(&params)));
        }
        assert_eq!(easy_part(&c, &Fp12::zero()).unwrap_err(), Error::NotInvertible);
    }
}

#[test]
fn rejects_bad_inputs() {
    let params = tiny();
    let c = params.ctx();
    let g = params.g1_gen;
    assert_eq!(optimal_ate(&params, &G1Point::INFINITY, &params.g2_gen).unwrap_err(), Error::Infinity);
    assert_eq!(optimal_ate(&params, &g, &G2Affine::INFINITY).unwrap_err(), Error::Infinity);
    let off = G1Point::new(g.x, params.modulus().add(&g.y, &params.modulus().one()));
    assert_eq!(optimal_ate(&params, &off, &params.g2_gen).unwrap_err(), Error::NotOnCurve);
    // a twist point outside G2: any point whose order is not r
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let b2 = params.b_twist;
    let outside = loop {
        let x = crate::tower::Fp2::random(c.tower, &mut rng);
        let rhs = c.fp2_add(&c.fp2_mul(&c.fp2_sqr(&x), &x), &b2);
        if let Some(y) = c.fp2_sqrt(&rhs) {
            let q = G2Affine::new(x, y);
            if !c.g2_mul(&c.g2_from_affine(&q), &params.r).is_infinity() {
                break q;
            }
        }
    };
    assert_eq!(optimal_ate(&params, &g, &outside).unwrap_err(), Error::WrongSubgroup);
}

#[test]
fn reference_loop_counts() {
    let params = reference_params().unwrap();
    let counter = OpCounter::new();
    let c = params.tower.counting_ctx(&counter);
    miller_loop(&c, &params, &params.g1_gen, &params.g2_gen).unwrap();
    let k = counter.snapshot();
    assert_eq!(k.get(Op::DoublingStep), 64);
    assert_eq!(k.get(Op::AdditionStep), 6 + 2);
    assert_eq!(k.get(Op::Fp12Sqr), 63);
    assert_eq!(k.get(Op::SparseMul), 72);

    let counter = OpCounter::new();
    let c = params.tower.counting_ctx(&counter);
    let f = Fp12::random(c.tower, &mut ChaCha8Rng::seed_from_u64(14));
    let m = easy_part(&c.uncounted(), &f).unwrap();
    hard_part(&c, &params, &m);
    let k = counter.snapshot();
    // three exponentiations by t, each with one cyclotomic square per bit below the top
    let per_t = (REFERENCE_T_BITS - 1) as u64;
    assert_eq!(k.get(Op::CyclotomicSqr), 3 * per_t + 4);
}

const REFERENCE_T_BITS: u32 = 63;

#[test]
fn deterministic() {
    let params = reference_params().unwrap();
    let a = optimal_ate(&params, &params.g1_gen, &params.g2_gen).unwrap();
    let b = optimal_ate(&params, &params.g1_gen, &params.g2_gen).unwrap();
    assert_eq!(a, b);
}
