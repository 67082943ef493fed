use rand::Rng;

use super::{Ctx, Fp2, Tower};
use crate::costmodel::counter::Op;
use crate::error::Result;

/// `c0 + c1·ν + c2·ν²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp6 {
    pub c0: Fp2,
    pub c1: Fp2,
    pub c2: Fp2,
}

impl Fp6 {
    pub fn new(c0: Fp2, c1: Fp2, c2: Fp2) -> Fp6 {
        Fp6 { c0, c1, c2 }
    }

    pub fn zero() -> Fp6 {
        Fp6 { c0: Fp2::zero(), c1: Fp2::zero(), c2: Fp2::zero() }
    }

    pub fn one(t: &Tower) -> Fp6 {
        Fp6 { c0: Fp2::one(t), ..Fp6::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn random<R: Rng + ?Sized>(t: &Tower, rng: &mut R) -> Fp6 {
        Fp6 { c0: Fp2::random(t, rng), c1: Fp2::random(t, rng), c2: Fp2::random(t, rng) }
    }
}

impl Ctx<'_> {
    pub fn fp6_add(&self, a: &Fp6, b: &Fp6) -> Fp6 {
        Fp6 {
            c0: self.fp2_add(&a.c0, &b.c0),
            c1: self.fp2_add(&a.c1, &b.c1),
            c2: self.fp2_add(&a.c2, &b.c2),
        }
    }

    pub fn fp6_sub(&self, a: &Fp6, b: &Fp6) -> Fp6 {
        Fp6 {
            c0: self.fp2_sub(&a.c0, &b.c0),
            c1: self.fp2_sub(&a.c1, &b.c1),
            c2: self.fp2_sub(&a.c2, &b.c2),
        }
    }

    pub fn fp6_neg(&self, a: &Fp6) -> Fp6 {
        Fp6 { c0: self.fp2_neg(&a.c0), c1: self.fp2_neg(&a.c1), c2: self.fp2_neg(&a.c2) }
    }

    /// Interleaved Karatsuba over three coefficients: six products, two
    /// reductions by ξ, fifteen additions.
    pub fn fp6_mul(&self, a: &Fp6, b: &Fp6) -> Fp6 {
        let _g = self.guard(Op::Fp6Mul);
        let ta01 = self.fp2_add(&a.c0, &a.c1);
        let tb01 = self.fp2_add(&b.c0, &b.c1);
        let t0 = self.fp2_mul(&a.c0, &b.c0);
        let ta02 = self.fp2_add(&a.c0, &a.c2);
        let tb02 = self.fp2_add(&b.c0, &b.c2);
        let t1 = self.fp2_mul(&a.c1, &b.c1);
        let ta12 = self.fp2_add(&a.c1, &a.c2);
        let tb12 = self.fp2_add(&b.c1, &b.c2);
        let t2 = self.fp2_mul(&a.c2, &b.c2);

        let m12 = self.fp2_mul(&ta12, &tb12);
        let m12 = self.fp2_sub(&self.fp2_sub(&m12, &t1), &t2);
        let m01 = self.fp2_mul(&ta01, &tb01);
        let m01 = self.fp2_sub(&self.fp2_sub(&m01, &t0), &t1);
        let m02 = self.fp2_mul(&ta02, &tb02);
        let m02 = self.fp2_sub(&self.fp2_sub(&m02, &t0), &t2);

        let c0 = self.fp2_add(&t0, &self.fp2_mul_xi(&m12));
        let c1 = self.fp2_add(&m01, &self.fp2_mul_xi(&t2));
        let c2 = self.fp2_add(&m02, &t1);
        Fp6 { c0, c1, c2 }
    }

    /// Chung-Hasan SQR2.
    pub fn fp6_sqr(&self, a: &Fp6) -> Fp6 {
        let _g = self.guard(Op::Fp6Sqr);
        let s0 = self.fp2_sqr(&a.c0);
        let s1 = self.fp2_double(&self.fp2_mul(&a.c1, &a.c2));
        let s2 = self.fp2_add(&self.fp2_sub(&a.c0, &a.c1), &a.c2);
        let s2 = self.fp2_sqr(&s2);
        let s3 = self.fp2_double(&self.fp2_mul(&a.c0, &a.c1));
        let s4 = self.fp2_sqr(&a.c2);
        let c0 = self.fp2_add(&s0, &self.fp2_mul_xi(&s1));
        let c1 = self.fp2_add(&s3, &self.fp2_mul_xi(&s4));
        let c2 = self.fp2_add(&s1, &s2);
        let c2 = self.fp2_add(&c2, &s3);
        let c2 = self.fp2_sub(&c2, &s0);
        let c2 = self.fp2_sub(&c2, &s4);
        Fp6 { c0, c1, c2 }
    }

    pub fn fp6_inv(&self, a: &Fp6) -> Result<Fp6> {
        let _g = self.guard(Op::Fp6Inv);
        let c0 = self.fp2_sub(&self.fp2_sqr(&a.c0), &self.fp2_mul_xi(&self.fp2_mul(&a.c1, &a.c2)));
        let c1 = self.fp2_sub(&self.fp2_mul_xi(&self.fp2_sqr(&a.c2)), &self.fp2_mul(&a.c0, &a.c1));
        let c2 = self.fp2_sub(&self.fp2_sqr(&a.c1), &self.fp2_mul(&a.c0, &a.c2));
        let t = self.fp2_mul(&a.c0, &c0);
        let t = self.fp2_add(&t, &self.fp2_mul_xi(&self.fp2_mul(&a.c2, &c1)));
        let t = self.fp2_add(&t, &self.fp2_mul_xi(&self.fp2_mul(&a.c1, &c2)));
        let ti = self.fp2_inv(&t)?;
        Ok(Fp6 { c0: self.fp2_mul(&c0, &ti), c1: self.fp2_mul(&c1, &ti), c2: self.fp2_mul(&c2, &ti) })
    }

    /// `a·ν`.
    pub fn fp6_mul_by_nu(&self, a: &Fp6) -> Fp6 {
        Fp6 { c0: self.fp2_mul_xi(&a.c2), c1: a.c0, c2: a.c1 }
    }

    pub fn fp6_mul_fp2(&self, a: &Fp6, s: &Fp2) -> Fp6 {
        Fp6 { c0: self.fp2_mul(&a.c0, s), c1: self.fp2_mul(&a.c1, s), c2: self.fp2_mul(&a.c2, s) }
    }

    /// `a · (b0 + b1·ν)`: five products, one ξ, six additions.
    pub fn fp6_mul_by_01(&self, a: &Fp6, b0: &Fp2, b1: &Fp2) -> Fp6 {
        let t0 = self.fp2_mul(&a.c0, b0);
        let t1 = self.fp2_mul(&a.c1, b1);
        let c0 = self.fp2_add(&t0, &self.fp2_mul_xi(&self.fp2_mul(&a.c2, b1)));
        let c1 = self.fp2_mul(&self.fp2_add(&a.c0, &a.c1), &self.fp2_add(b0, b1));
        let c1 = self.fp2_sub(&self.fp2_sub(&c1, &t0), &t1);
        let c2 = self.fp2_add(&self.fp2_mul(&a.c2, b0), &t1);
        Fp6 { c0, c1, c2 }
    }
}
