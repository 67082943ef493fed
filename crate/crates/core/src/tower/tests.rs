use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fp12::naf_u64;
use super::*;
use crate::costmodel::counter::{Op, OpCounter};

fn bn_p(t: u64) -> BigUint {
    let t = BigUint::from(t);
    BigUint::from(36u32) * t.pow(4) + BigUint::from(36u32) * t.pow(3) + BigUint::from(24u32) * t.pow(2) + BigUint::from(6u32) * &t + 1u32
}

fn reference_tower() -> Tower {
    let t = (1u64 << 62) - (1u64 << 54) + (1u64 << 44);
    Tower::new(PrimeModulus::new(&bn_p(t)).unwrap(), -5, 0).unwrap()
}

fn tiny_tower() -> Tower {
    Tower::search(PrimeModulus::new(&BigUint::from(103u32)).unwrap(), -1).unwrap()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

// Independent schoolbook arithmetic over F_p2, using only the base field.
fn sb2_mul(t: &Tower, a: &Fp2, b: &Fp2) -> Fp2 {
    let m = t.modulus();
    let c0 = m.add(&m.mont_mul(&a.c0, &b.c0), &m.mont_mul(&t.beta_fe(), &m.mont_mul(&a.c1, &b.c1)));
    let c1 = m.add(&m.mont_mul(&a.c0, &b.c1), &m.mont_mul(&a.c1, &b.c0));
    Fp2 { c0, c1 }
}

fn sb2_add(t: &Tower, a: &Fp2, b: &Fp2) -> Fp2 {
    let m = t.modulus();
    Fp2 { c0: m.add(&a.c0, &b.c0), c1: m.add(&a.c1, &b.c1) }
}

/// Product of polynomials in one variable `w` over F_p2 reduced by `w^n = ξ`.
fn sb_poly(t: &Tower, a: &[Fp2], b: &[Fp2]) -> Vec<Fp2> {
    let n = a.len();
    let mut full = vec![Fp2::zero(); 2 * n];
    for i in 0..n {
        for j in 0..n {
            full[i + j] = sb2_add(t, &full[i + j], &sb2_mul(t, &a[i], &b[j]));
        }
    }
    let mut out = full[..n].to_vec();
    for k in n..2 * n {
        out[k - n] = sb2_add(t, &out[k - n], &sb2_mul(t, &full[k], &t.xi()));
    }
    out
}

fn sb6_mul(t: &Tower, a: &Fp6, b: &Fp6) -> Fp6 {
    let r = sb_poly(t, &[a.c0, a.c1, a.c2], &[b.c0, b.c1, b.c2]);
    Fp6::new(r[0], r[1], r[2])
}

fn sb12_mul(t: &Tower, a: &Fp12, b: &Fp12) -> Fp12 {
    let r = sb_poly(t, &a.omega_coeffs(), &b.omega_coeffs());
    Fp12::from_omega_coeffs([r[0], r[1], r[2], r[3], r[4], r[5]])
}

fn easy_part(c: &Ctx, f: &Fp12) -> Fp12 {
    let m = c.fp12_mul(&c.fp12_conj(f), &c.fp12_inv(f).unwrap());
    c.fp12_mul(&c.frobenius_p2(&m), &m)
}

#[test]
fn reference_tower_uses_mu_as_xi() {
    let t = reference_tower();
    assert_eq!(t.xi0(), 0);
    let c = t.ctx();
    let mu = Fp2::mu(&t);
    assert_eq!(c.fp2_mul(&mu, &mu), Fp2::from_fp(t.modulus().from_i64(-5)));
}

#[test]
fn tiny_tower_needs_shifted_xi() {
    let t = tiny_tower();
    assert_eq!(t.xi0(), 2);
    assert!(Tower::new(t.modulus().clone(), -1, 0).is_err());
    assert!(Tower::new(t.modulus().clone(), 1, 2).is_err());
}

#[test]
fn fp2_matches_schoolbook() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let mut r = rng();
        for _ in 0..300 {
            let a = Fp2::random(&t, &mut r);
            let b = Fp2::random(&t, &mut r);
            assert_eq!(c.fp2_mul(&a, &b), sb2_mul(&t, &a, &b));
            assert_eq!(c.fp2_sqr(&a), c.fp2_mul(&a, &a));
            assert_eq!(c.fp2_mul_xi(&a), sb2_mul(&t, &a, &t.xi()));
            if !a.is_zero() {
                assert_eq!(c.fp2_mul(&a, &c.fp2_inv(&a).unwrap()), Fp2::one(&t));
            }
        }
        assert!(c.fp2_inv(&Fp2::zero()).is_err());
    }
}

#[test]
fn fp2_sqrt_roundtrip() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let mut r = rng();
        for _ in 0..50 {
            let a = Fp2::random(&t, &mut r);
            let sq = c.fp2_sqr(&a);
            let root = c.fp2_sqrt(&sq).unwrap();
            assert_eq!(c.fp2_sqr(&root), sq);
        }
        assert!(c.fp2_sqrt(&t.xi()).is_none());
    }
}

#[test]
fn fp6_matches_schoolbook() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let mut r = rng();
        for _ in 0..100 {
            let a = Fp6::random(&t, &mut r);
            let b = Fp6::random(&t, &mut r);
            assert_eq!(c.fp6_mul(&a, &b), sb6_mul(&t, &a, &b));
            assert_eq!(c.fp6_sqr(&a), c.fp6_mul(&a, &a));
            assert_eq!(c.fp6_mul(&a, &c.fp6_inv(&a).unwrap()), Fp6::one(&t));
            let nu = Fp6::new(Fp2::zero(), Fp2::one(&t), Fp2::zero());
            assert_eq!(c.fp6_mul_by_nu(&a), c.fp6_mul(&a, &nu));
            let b01 = Fp6::new(b.c0, b.c1, Fp2::zero());
            assert_eq!(c.fp6_mul_by_01(&a, &b.c0, &b.c1), c.fp6_mul(&a, &b01));
        }
        let nu = Fp6::new(Fp2::zero(), Fp2::one(&t), Fp2::zero());
        let nu2 = Fp6::new(Fp2::zero(), Fp2::zero(), Fp2::one(&t));
        assert_eq!(c.fp6_mul(&nu, &nu2), Fp6::new(t.xi(), Fp2::zero(), Fp2::zero()));
    }
}

#[test]
fn fp12_matches_schoolbook() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let mut r = rng();
        for _ in 0..50 {
            let a = Fp12::random(&t, &mut r);
            let b = Fp12::random(&t, &mut r);
            assert_eq!(c.fp12_mul(&a, &b), sb12_mul(&t, &a, &b));
            assert_eq!(c.fp12_sqr(&a), c.fp12_mul(&a, &a));
            assert_eq!(c.fp12_mul(&a, &c.fp12_inv(&a).unwrap()), Fp12::one(&t));
            assert_eq!(c.fp12_conj(&c.fp12_conj(&a)), a);
            let l = SparseLine { a: a.c0.c0, b: b.c0.c0, c: b.c1.c1 };
            assert_eq!(c.sparse_mul(&b, &l), c.fp12_mul(&b, &l.embed()));
        }
        assert!(c.fp12_inv(&Fp12::zero()).is_err());
    }
}

#[test]
fn sparse_identities() {
    let t = reference_tower();
    let c = t.ctx();
    let mut r = rng();
    let f = Fp12::random(&t, &mut r);
    assert_eq!(c.sparse_mul(&f, &SparseLine::one(&t)), f);
    let l = SparseLine { a: Fp2::random(&t, &mut r), b: Fp2::random(&t, &mut r), c: Fp2::random(&t, &mut r) };
    assert_eq!(c.sparse_mul(&Fp12::one(&t), &l), l.embed());
}

#[test]
fn cyclotomic_square_on_subgroup() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let mut r = rng();
        for _ in 0..30 {
            let m = easy_part(&c, &Fp12::random(&t, &mut r));
            assert_eq!(c.cyclotomic_sqr(&m), c.fp12_sqr(&m));
        }
        assert_eq!(c.cyclotomic_sqr(&Fp12::one(&t)), Fp12::one(&t));
    }
}

#[test]
fn frobenius_matches_pow() {
    for t in [reference_tower(), tiny_tower()] {
        let c = t.ctx();
        let p = t.modulus().value().clone();
        let mut r = rng();
        for _ in 0..5 {
            let f = Fp12::random(&t, &mut r);
            let fp = c.frobenius_p(&f);
            assert_eq!(fp, c.fp12_pow(&f, &p));
            assert_eq!(c.frobenius_p(&fp), c.frobenius_p2(&f));
            assert_eq!(c.frobenius_p(&c.frobenius_p2(&f)), c.frobenius_p3(&f));
            let mut g = f;
            for _ in 0..12 {
                g = c.frobenius_p(&g);
            }
            assert_eq!(g, f);
        }
        assert_eq!(c.frobenius_p(&Fp12::one(&t)), Fp12::one(&t));
        for k in 1..=3 {
            assert_eq!(t.frobenius_constant(k, 0), Fp2::one(&t));
        }
    }
}

#[test]
fn cyclotomic_pow_matches_pow() {
    let t = reference_tower();
    let c = t.ctx();
    let mut r = rng();
    let m = easy_part(&c, &Fp12::random(&t, &mut r));
    for e in [0i64, 1, 2, 7, -7, 4611686018427387904 - 18014398509481984 + 17592186044416, -1234567] {
        let want = c.fp12_pow(&m, &BigUint::from(e.unsigned_abs()));
        let want = if e < 0 { c.fp12_inv(&want).unwrap() } else { want };
        assert_eq!(c.cyclotomic_pow(&m, e), want, "e = {e}");
    }
}

#[test]
fn naf_digits() {
    assert_eq!(naf_u64(0), Vec::<i8>::new());
    assert_eq!(naf_u64(1), vec![1]);
    assert_eq!(naf_u64(7), vec![-1, 0, 0, 1]);
    for n in [3u64, 12345, u64::MAX, (1 << 62) - (1 << 54) + (1 << 44)] {
        let d = naf_u64(n);
        let v: i128 = d.iter().enumerate().map(|(i, &x)| (x as i128) << i).sum();
        assert_eq!(v, n as i128);
        assert!(d.windows(2).all(|w| w[0] == 0 || w[1] == 0));
    }
}

fn counts_of<R>(t: &Tower, f: impl FnOnce(Ctx<'_>) -> R) -> crate::costmodel::counter::OpCounts {
    let counter = OpCounter::new();
    let _ = f(t.counting_ctx(&counter));
    counter.snapshot()
}

#[test]
fn base_operation_counts() {
    let t = reference_tower();
    let mut r = rng();
    let a = Fp2::random(&t, &mut r);
    let b = Fp2::random(&t, &mut r);

    let k = counts_of(&t, |c| {
        c.fp2_mul(&a, &b);
    });
    assert_eq!((k.get(Op::FpMul), k.get(Op::FpMulBeta), k.get(Op::FpAdd)), (3, 1, 5));
    let k = counts_of(&t, |c| {
        c.fp2_sqr(&a);
    });
    assert_eq!((k.get(Op::FpMul), k.get(Op::FpMulBeta), k.get(Op::FpAdd)), (2, 2, 5));
    let k = counts_of(&t, |c| {
        c.fp2_inv(&a).unwrap();
    });
    assert_eq!((k.get(Op::FpMul), k.get(Op::FpMulBeta), k.get(Op::FpAdd), k.get(Op::FpInv)), (4, 1, 2, 1));
}

#[test]
fn extension_operation_counts() {
    let t = reference_tower();
    let mut r = rng();
    let a = Fp12::random(&t, &mut r);
    let b = Fp12::random(&t, &mut r);
    let ops = |k: &crate::costmodel::counter::OpCounts| {
        (k.get(Op::Fp2Mul), k.get(Op::Fp2Sqr), k.get(Op::Fp2MulXi), k.get(Op::Fp2Add), k.get(Op::Fp2Inv))
    };
    assert_eq!(ops(&counts_of(&t, |c| c.fp6_mul(&a.c0, &b.c0))), (6, 0, 2, 15, 0));
    assert_eq!(ops(&counts_of(&t, |c| c.fp6_sqr(&a.c0))), (2, 3, 2, 10, 0));
    assert_eq!(ops(&counts_of(&t, |c| c.fp6_inv(&a.c0))), (9, 3, 4, 5, 1));
    assert_eq!(ops(&counts_of(&t, |c| c.fp12_mul(&a, &b))), (18, 0, 7, 60, 0));
    assert_eq!(ops(&counts_of(&t, |c| c.fp12_sqr(&a))), (12, 0, 6, 45, 0));
    assert_eq!(ops(&counts_of(&t, |c| c.fp12_inv(&a))), (25, 9, 13, 61, 1));
    assert_eq!(ops(&counts_of(&t, |c| c.cyclotomic_sqr(&a))), (6, 0, 6, 39, 0));
    let l = SparseLine { a: b.c0.c0, b: b.c1.c0, c: b.c1.c1 };
    assert_eq!(ops(&counts_of(&t, |c| c.sparse_mul(&a, &l))), (13, 0, 3, 25, 0));
}

#[test]
fn counted_scopes_nest() {
    let t = reference_tower();
    let outer = OpCounter::new();
    let c = t.counting_ctx(&outer);
    let a = Fp2::one(&t);
    let (_, inner) = c.counted(|c| c.fp2_mul(&a, &a));
    c.fp2_mul(&a, &a);
    assert_eq!(inner.get(Op::Fp2Mul), 1);
    assert_eq!(outer.snapshot().get(Op::Fp2Mul), 2);
    let (_, none) = t.ctx().counted(|_| ());
    assert!(none.is_empty());
}
