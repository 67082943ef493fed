use num_bigint::BigUint;
use rand::Rng;

use super::{Ctx, Tower};
use crate::costmodel::counter::Op;
use crate::error::Result;
use crate::fp::FpElement;

/// `c0 + c1·μ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp2 {
    pub c0: FpElement,
    pub c1: FpElement,
}

impl Fp2 {
    pub fn new(c0: FpElement, c1: FpElement) -> Fp2 {
        Fp2 { c0, c1 }
    }

    pub fn zero() -> Fp2 {
        Fp2 { c0: FpElement::ZERO, c1: FpElement::ZERO }
    }

    pub fn one(t: &Tower) -> Fp2 {
        Fp2 { c0: t.modulus().one(), c1: FpElement::ZERO }
    }

    /// `μ` itself.
    pub fn mu(t: &Tower) -> Fp2 {
        Fp2 { c0: FpElement::ZERO, c1: t.modulus().one() }
    }

    pub fn from_fp(c0: FpElement) -> Fp2 {
        Fp2 { c0, c1: FpElement::ZERO }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn random<R: Rng + ?Sized>(t: &Tower, rng: &mut R) -> Fp2 {
        Fp2 { c0: t.modulus().random(rng), c1: t.modulus().random(rng) }
    }
}

impl Ctx<'_> {
    pub fn fp2_add(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2Add);
        Fp2 { c0: self.fp_add(&a.c0, &b.c0), c1: self.fp_add(&a.c1, &b.c1) }
    }

    pub fn fp2_sub(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2Add);
        Fp2 { c0: self.fp_sub(&a.c0, &b.c0), c1: self.fp_sub(&a.c1, &b.c1) }
    }

    pub fn fp2_neg(&self, a: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2Add);
        Fp2 { c0: self.fp_neg(&a.c0), c1: self.fp_neg(&a.c1) }
    }

    pub fn fp2_double(&self, a: &Fp2) -> Fp2 {
        self.fp2_add(a, a)
    }

    /// `c0 − c1·μ`, one base-field negation.
    pub fn fp2_conj(&self, a: &Fp2) -> Fp2 {
        Fp2 { c0: a.c0, c1: self.fp_neg(&a.c1) }
    }

    /// Karatsuba: three products, one multiplication by β, five additions.
    pub fn fp2_mul(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2Mul);
        let v0 = self.fp_mul(&a.c0, &b.c0);
        let v1 = self.fp_mul(&a.c1, &b.c1);
        let c0 = self.fp_add(&v0, &self.fp_mul_beta(&v1));
        let sa = self.fp_add(&a.c0, &a.c1);
        let sb = self.fp_add(&b.c0, &b.c1);
        let c1 = self.fp_mul(&sa, &sb);
        let c1 = self.fp_sub(&self.fp_sub(&c1, &v0), &v1);
        Fp2 { c0, c1 }
    }

    /// Complex squaring: `(a0 + a1)(a0 + β·a1) − v − β·v` and `2v`, `v = a0·a1`.
    pub fn fp2_sqr(&self, a: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2Sqr);
        let v = self.fp_mul(&a.c0, &a.c1);
        let s1 = self.fp_add(&a.c0, &a.c1);
        let s2 = self.fp_add(&a.c0, &self.fp_mul_beta(&a.c1));
        let c0 = self.fp_mul(&s1, &s2);
        let c0 = self.fp_sub(&c0, &v);
        let c0 = self.fp_sub(&c0, &self.fp_mul_beta(&v));
        Fp2 { c0, c1: self.fp_double(&v) }
    }

    pub fn fp2_mul_beta(&self, a: &Fp2) -> Fp2 {
        Fp2 { c0: self.fp_mul_beta(&a.c0), c1: self.fp_mul_beta(&a.c1) }
    }

    /// Multiplication by ξ, the reduction step of the F_p6 layer.
    pub fn fp2_mul_xi(&self, a: &Fp2) -> Fp2 {
        let _g = self.guard(Op::Fp2MulXi);
        if self.tower.xi0 == 0 {
            // (c0 + c1·μ)·μ = β·c1 + c0·μ
            return Fp2 { c0: self.fp_mul_beta(&a.c1), c1: a.c0 };
        }
        let c0 = self.fp_add(&self.fp_mul_xi0(&a.c0), &self.fp_mul_beta(&a.c1));
        let c1 = self.fp_add(&self.fp_mul_xi0(&a.c1), &a.c0);
        Fp2 { c0, c1 }
    }

    /// Scaling by a base-field element, two products.
    pub fn fp2_mul_fp(&self, a: &Fp2, s: &FpElement) -> Fp2 {
        Fp2 { c0: self.fp_mul(&a.c0, s), c1: self.fp_mul(&a.c1, s) }
    }

    /// `(c0 − c1·μ) · (c0² − β·c1²)⁻¹`.
    pub fn fp2_inv(&self, a: &Fp2) -> Result<Fp2> {
        let _g = self.guard(Op::Fp2Inv);
        let t0 = self.fp_mul(&a.c0, &a.c0);
        let t1 = self.fp_mul(&a.c1, &a.c1);
        let n = self.fp_sub(&t0, &self.fp_mul_beta(&t1));
        let ni = self.fp_inv(&n)?;
        let c0 = self.fp_mul(&a.c0, &ni);
        let c1 = self.fp_neg(&self.fp_mul(&a.c1, &ni));
        Ok(Fp2 { c0, c1 })
    }

    pub fn fp2_pow(&self, a: &Fp2, e: &BigUint) -> Fp2 {
        let mut acc = Fp2::one(self.tower);
        for i in (0..e.bits()).rev() {
            acc = self.fp2_sqr(&acc);
            if e.bit(i) {
                acc = self.fp2_mul(&acc, a);
            }
        }
        acc
    }

    pub fn fp2_is_square(&self, a: &Fp2) -> bool {
        if a.is_zero() {
            return true;
        }
        let p = self.modulus().value();
        let e = (p * p - 1u32) >> 1;
        self.uncounted().fp2_pow(a, &e) == Fp2::one(self.tower)
    }

    /// Square root through the norm map. Returns `None` for non-squares.
    pub fn fp2_sqrt(&self, a: &Fp2) -> Option<Fp2> {
        let c = self.uncounted();
        let m = c.modulus();
        if a.c1.is_zero() {
            if let Some(r) = m.sqrt(&a.c0) {
                return Some(Fp2::from_fp(r));
            }
            // a0 = β·y²  →  sqrt = y·μ
            let y = m.sqrt(&m.mont_mul(&a.c0, &m.inv(&self.tower.beta_fe).ok()?))?;
            return Some(Fp2 { c0: FpElement::ZERO, c1: y });
        }
        let norm = m.sub(&m.square(&a.c0), &m.mont_mul(&self.tower.beta_fe, &m.square(&a.c1)));
        let n = m.sqrt(&norm)?;
        let half = m.inv(&m.from_u64(2)).ok()?;
        for cand in [m.add(&a.c0, &n), m.sub(&a.c0, &n)] {
            let x0sq = m.mont_mul(&cand, &half);
            if let Some(x0) = m.sqrt(&x0sq) {
                if x0.is_zero() {
                    continue;
                }
                let x1 = m.mont_mul(&a.c1, &m.inv(&m.double(&x0)).ok()?);
                let r = Fp2 { c0: x0, c1: x1 };
                if c.fp2_sqr(&r) == *a {
                    return Some(r);
                }
            }
        }
        None
    }
}
