mod common;

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{f12, Oracle};
use optate::costmodel::schedule::{simulate, kernel_graph};
use optate::costmodel::symbolic::KERNELS;
use optate::costmodel::CycleModel;
use optate::curve::g1_mul;
use optate::fp::FpElement;
use optate::pairing::optimal_ate;
use optate::params::{derive_params, naf_recode, digits_value, reference_params, BnParams};
use optate::tower::{Fp12, Fp2, Fp6};

fn reference() -> &'static BnParams {
    static P: OnceLock<BnParams> = OnceLock::new();
    P.get_or_init(|| reference_params().unwrap())
}

fn tiny() -> &'static BnParams {
    static P: OnceLock<BnParams> = OnceLock::new();
    P.get_or_init(|| derive_params(1, 5).unwrap())
}

fn below_p() -> impl Strategy<Value = BigUint> {
    prop::collection::vec(any::<u32>(), 8).prop_map(|limbs| BigUint::from_slice(&limbs) % &reference().p)
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn canonical(e: &FpElement) -> bool {
    reference().modulus().check_canonical(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn montgomery_quotient_digits_clear_the_low_limb(a in below_p(), b in below_p()) {
        let m = reference().modulus();
        let (x, y) = (m.to_mont(&a).unwrap(), m.to_mont(&b).unwrap());
        let (out, steps) = m.mont_mul_traced(&x, &y);
        prop_assert_eq!(steps.len(), 8);
        prop_assert!(steps.iter().all(|s| s.dropped_digit == 0));
        prop_assert_eq!(out, m.mont_mul(&x, &y));
        prop_assert!(canonical(&out));
    }

    #[test]
    fn base_field_outputs_are_canonical(a in below_p(), b in below_p()) {
        let m = reference().modulus();
        let (x, y) = (m.to_mont(&a).unwrap(), m.to_mont(&b).unwrap());
        for v in [m.add(&x, &y), m.sub(&x, &y), m.neg(&x), m.double(&x), m.mont_mul(&x, &y), m.square(&x)] {
            prop_assert!(canonical(&v));
        }
        prop_assert_eq!(m.from_mont(&m.add(&x, &y)), (&a + &b) % &reference().p);
    }

    #[test]
    fn inversion_is_an_involution(a in below_p()) {
        prop_assume!(a != BigUint::from(0u32));
        let m = reference().modulus();
        let x = m.to_mont(&a).unwrap();
        let inv = m.inv(&x).unwrap();
        prop_assert_eq!(m.inv(&inv).unwrap(), x);
        prop_assert_eq!(m.mont_mul(&x, &inv), m.one());
    }

    #[test]
    fn naf_recoding(n in any::<u128>().prop_map(|n| n | 1)) {
        let v = BigUint::from(n);
        let d = naf_recode(&v);
        prop_assert_eq!(digits_value(&d), num_bigint::BigInt::from(v));
        prop_assert!(d.iter().all(|x| (-1..=1).contains(x)));
        prop_assert!(d.windows(2).all(|w| w[0] == 0 || w[1] == 0));
    }

    #[test]
    fn fp2_ring_axioms(seed in any::<u64>()) {
        let (t, c) = (&reference().tower, reference().ctx());
        let mut r = rng_from(seed);
        let (a, b, d) = (Fp2::random(t, &mut r), Fp2::random(t, &mut r), Fp2::random(t, &mut r));
        prop_assert_eq!(c.fp2_mul(&a, &b), c.fp2_mul(&b, &a));
        prop_assert_eq!(c.fp2_mul(&c.fp2_mul(&a, &b), &d), c.fp2_mul(&a, &c.fp2_mul(&b, &d)));
        prop_assert_eq!(c.fp2_mul(&a, &c.fp2_add(&b, &d)), c.fp2_add(&c.fp2_mul(&a, &b), &c.fp2_mul(&a, &d)));
        prop_assert_eq!(c.fp2_conj(&c.fp2_conj(&a)), a);
    }

    #[test]
    fn fp6_ring_axioms(seed in any::<u64>()) {
        let (t, c) = (&reference().tower, reference().ctx());
        let mut r = rng_from(seed);
        let (a, b, d) = (Fp6::random(t, &mut r), Fp6::random(t, &mut r), Fp6::random(t, &mut r));
        prop_assert_eq!(c.fp6_mul(&a, &b), c.fp6_mul(&b, &a));
        prop_assert_eq!(c.fp6_mul(&c.fp6_mul(&a, &b), &d), c.fp6_mul(&a, &c.fp6_mul(&b, &d)));
        prop_assert_eq!(c.fp6_mul(&a, &c.fp6_add(&b, &d)), c.fp6_add(&c.fp6_mul(&a, &b), &c.fp6_mul(&a, &d)));
        if !a.is_zero() {
            prop_assert_eq!(c.fp6_mul(&a, &c.fp6_inv(&a).unwrap()), Fp6::one(t));
        }
    }

    #[test]
    fn fp12_ring_axioms(seed in any::<u64>()) {
        let (t, c) = (&reference().tower, reference().ctx());
        let mut r = rng_from(seed);
        let (a, b, d) = (Fp12::random(t, &mut r), Fp12::random(t, &mut r), Fp12::random(t, &mut r));
        prop_assert_eq!(c.fp12_mul(&a, &b), c.fp12_mul(&b, &a));
        prop_assert_eq!(c.fp12_mul(&c.fp12_mul(&a, &b), &d), c.fp12_mul(&a, &c.fp12_mul(&b, &d)));
        prop_assert_eq!(c.fp12_mul(&a, &c.fp12_add(&b, &d)), c.fp12_add(&c.fp12_mul(&a, &b), &c.fp12_mul(&a, &d)));
        prop_assert_eq!(c.fp12_conj(&c.fp12_conj(&a)), a);
    }

    #[test]
    fn frobenius_is_the_p_power(seed in any::<u64>()) {
        let (t, c) = (&reference().tower, reference().ctx());
        let o = Oracle::new(reference());
        let m = reference().modulus();
        let a = Fp12::random(t, &mut rng_from(seed));
        let fa = c.frobenius_p(&a);
        prop_assert_eq!(f12(m, &fa), o.f12_pow(&f12(m, &a), &reference().p));
        prop_assert_eq!(c.frobenius_p2(&a), c.frobenius_p(&fa));
        prop_assert_eq!(c.frobenius_p3(&a), c.frobenius_p(&c.frobenius_p2(&a)));
    }

    #[test]
    fn psi_is_additive(a in 1u64.., b in 1u64..) {
        let params = reference();
        let c = params.ctx();
        let g = c.g2_from_affine(&params.g2_gen);
        let qa = c.g2_to_affine(&c.g2_mul(&g, &BigUint::from(a)));
        let qb = c.g2_to_affine(&c.g2_mul(&g, &BigUint::from(b)));
        let sum = c.g2_to_affine(&c.g2_add(&c.g2_from_affine(&qa), &c.g2_from_affine(&qb)));
        for k in [1, 2] {
            let lhs = c.g2_frobenius_psi(&sum, k);
            let (pa, pb) = (c.g2_frobenius_psi(&qa, k), c.g2_frobenius_psi(&qb, k));
            let rhs = c.g2_to_affine(&c.g2_add(&c.g2_from_affine(&pa), &c.g2_from_affine(&pb)));
            prop_assert_eq!(lhs, rhs);
            prop_assert!(c.g2_affine_is_on_curve(&lhs, &params.b_twist));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tiny_pairing_is_bilinear_in_each_slot(a in 1u32..97, b in 1u32..97, k in 1u32..97) {
        let params = tiny();
        let m = params.modulus();
        let c = params.ctx();
        let p = g1_mul(m, &params.g1_gen, &BigUint::from(a));
        let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&params.g2_gen), &BigUint::from(b)));
        let e = optimal_ate(params, &p, &q).unwrap().value;
        let p2 = g1_mul(m, &p, &BigUint::from(k));
        let q2 = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&q), &BigUint::from(k)));
        let ek = c.fp12_pow(&e, &BigUint::from(k));
        prop_assert_eq!(optimal_ate(params, &p2, &q).unwrap().value, ek);
        prop_assert_eq!(optimal_ate(params, &p, &q2).unwrap().value, ek);
        prop_assert_eq!(c.fp12_pow(&e, &params.r), Fp12::one(&params.tower));
    }

    #[test]
    fn pairing_is_deterministic(a in 1u64.., b in 1u64..) {
        let params = reference();
        let c = params.ctx();
        let p = g1_mul(params.modulus(), &params.g1_gen, &BigUint::from(a));
        let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&params.g2_gen), &BigUint::from(b)));
        let e = optimal_ate(params, &p, &q).unwrap();
        prop_assert_eq!(e, optimal_ate(params, &p, &q).unwrap());
        prop_assert!(!e.value.is_zero());
    }

    #[test]
    fn schedules_respect_busy_bounds(fsl in 1u64..2000) {
        let mut model = CycleModel::default();
        model.constants.fsl_t = fsl;
        model.constants.fsl_r = fsl;
        for &op in KERNELS {
            let tr = simulate(&kernel_graph(op.symbol()).unwrap(), &model.constants).unwrap();
            prop_assert!(tr.critical_path >= tr.master_busy.max(tr.slave_busy));
            prop_assert!(tr.master_utilization > 0.0 && tr.master_utilization <= 100.0);
            prop_assert!(tr.slave_utilization > 0.0 && tr.slave_utilization <= 100.0);
            for p in [optate::costmodel::schedule::Processor::Master, optate::costmodel::schedule::Processor::Slave] {
                let mut spans: Vec<(u64, u64)> = tr.on(p).map(|e| (e.start, e.end)).collect();
                spans.sort();
                prop_assert!(spans.windows(2).all(|w| w[0].1 <= w[1].0));
            }
        }
    }
}
