use num_bigint::BigUint;
use rand::Rng;

use super::{Ctx, Fp2, Fp6, Tower};
use crate::costmodel::counter::Op;
use crate::error::Result;
use crate::fp::FpElement;

/// `g + h·ω`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp12 {
    pub c0: Fp6,
    pub c1: Fp6,
}

/// A line value with nonzero coefficients only at `1`, `ω` and `ω³`.
///
/// With `ω³ = ν·ω` these sit at `c0.c0`, `c1.c0` and `c1.c1` of an [`Fp12`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SparseLine {
    pub a: Fp2,
    pub b: Fp2,
    pub c: Fp2,
}

impl SparseLine {
    pub fn embed(&self) -> Fp12 {
        Fp12 {
            c0: Fp6 { c0: self.a, ..Fp6::zero() },
            c1: Fp6 { c0: self.b, c1: self.c, c2: Fp2::zero() },
        }
    }

    pub fn one(t: &Tower) -> SparseLine {
        SparseLine { a: Fp2::one(t), b: Fp2::zero(), c: Fp2::zero() }
    }
}

impl Fp12 {
    pub fn new(c0: Fp6, c1: Fp6) -> Fp12 {
        Fp12 { c0, c1 }
    }

    pub fn zero() -> Fp12 {
        Fp12 { c0: Fp6::zero(), c1: Fp6::zero() }
    }

    pub fn one(t: &Tower) -> Fp12 {
        Fp12 { c0: Fp6::one(t), c1: Fp6::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn random<R: Rng + ?Sized>(t: &Tower, rng: &mut R) -> Fp12 {
        Fp12 { c0: Fp6::random(t, rng), c1: Fp6::random(t, rng) }
    }

    /// F_p2 coefficients of `1, ω, …, ω⁵`.
    pub fn omega_coeffs(&self) -> [Fp2; 6] {
        [self.c0.c0, self.c1.c0, self.c0.c1, self.c1.c1, self.c0.c2, self.c1.c2]
    }

    pub fn from_omega_coeffs(c: [Fp2; 6]) -> Fp12 {
        Fp12 { c0: Fp6::new(c[0], c[2], c[4]), c1: Fp6::new(c[1], c[3], c[5]) }
    }

    /// The twelve base-field components in storage order
    /// `c0.c0.c0, c0.c0.c1, c0.c1.c0, …, c1.c2.c1`.
    pub fn to_fp_array(&self) -> [FpElement; 12] {
        let mut out = [FpElement::ZERO; 12];
        for (i, f2) in [self.c0.c0, self.c0.c1, self.c0.c2, self.c1.c0, self.c1.c1, self.c1.c2].iter().enumerate() {
            out[2 * i] = f2.c0;
            out[2 * i + 1] = f2.c1;
        }
        out
    }

    pub fn from_fp_array(a: &[FpElement; 12]) -> Fp12 {
        let f2 = |i: usize| Fp2::new(a[2 * i], a[2 * i + 1]);
        Fp12 { c0: Fp6::new(f2(0), f2(1), f2(2)), c1: Fp6::new(f2(3), f2(4), f2(5)) }
    }
}

impl Ctx<'_> {
    pub fn fp12_add(&self, a: &Fp12, b: &Fp12) -> Fp12 {
        Fp12 { c0: self.fp6_add(&a.c0, &b.c0), c1: self.fp6_add(&a.c1, &b.c1) }
    }

    pub fn fp12_sub(&self, a: &Fp12, b: &Fp12) -> Fp12 {
        Fp12 { c0: self.fp6_sub(&a.c0, &b.c0), c1: self.fp6_sub(&a.c1, &b.c1) }
    }

    /// `g − h·ω`. This is the `p⁶`-power Frobenius, and the inverse on the
    /// cyclotomic subgroup.
    pub fn fp12_conj(&self, a: &Fp12) -> Fp12 {
        Fp12 { c0: a.c0, c1: self.fp6_neg(&a.c1) }
    }

    /// Karatsuba over F_p6: `t0 + ν·t1` and `(g0+h0)(g1+h1) − t0 − t1`.
    pub fn fp12_mul(&self, a: &Fp12, b: &Fp12) -> Fp12 {
        let _g = self.guard(Op::Fp12Mul);
        let t0 = self.fp6_mul(&a.c0, &b.c0);
        let t1 = self.fp6_mul(&a.c1, &b.c1);
        let c0 = self.fp6_add(&t0, &self.fp6_mul_by_nu(&t1));
        let sa = self.fp6_add(&a.c0, &a.c1);
        let sb = self.fp6_add(&b.c0, &b.c1);
        let c1 = self.fp6_mul(&sa, &sb);
        let c1 = self.fp6_sub(&self.fp6_sub(&c1, &t0), &t1);
        Fp12 { c0, c1 }
    }

    /// Complex squaring over F_p6.
    pub fn fp12_sqr(&self, a: &Fp12) -> Fp12 {
        let _g = self.guard(Op::Fp12Sqr);
        let v = self.fp6_mul(&a.c0, &a.c1);
        let s1 = self.fp6_add(&a.c0, &a.c1);
        let s2 = self.fp6_add(&a.c0, &self.fp6_mul_by_nu(&a.c1));
        let c0 = self.fp6_mul(&s1, &s2);
        let c0 = self.fp6_sub(&c0, &v);
        let c0 = self.fp6_sub(&c0, &self.fp6_mul_by_nu(&v));
        Fp12 { c0, c1: self.fp6_add(&v, &v) }
    }

    /// `(g − h·ω) · (g² − ν·h²)⁻¹`.
    pub fn fp12_inv(&self, a: &Fp12) -> Result<Fp12> {
        let _g = self.guard(Op::Fp12Inv);
        let g2 = self.fp6_sqr(&a.c0);
        let h2 = self.fp6_sqr(&a.c1);
        let t = self.fp6_sub(&g2, &self.fp6_mul_by_nu(&h2));
        let ti = self.fp6_inv(&t)?;
        let c0 = self.fp6_mul(&a.c0, &ti);
        let c1 = self.fp6_neg(&self.fp6_mul(&a.c1, &ti));
        Ok(Fp12 { c0, c1 })
    }

    /// Multiplication by a line value: thirteen F_p2 products.
    pub fn sparse_mul(&self, f: &Fp12, l: &SparseLine) -> Fp12 {
        let _g = self.guard(Op::SparseMul);
        // line = L0 + L1·ω with L0 = (a, 0, 0), L1 = (b, c, 0)
        let g_l0 = self.fp6_mul_fp2(&f.c0, &l.a);
        let h_l1 = self.fp6_mul_by_01(&f.c1, &l.b, &l.c);
        let gh = self.fp6_add(&f.c0, &f.c1);
        let ab = self.fp2_add(&l.a, &l.b);
        let cross = self.fp6_mul_by_01(&gh, &ab, &l.c);
        let c0 = self.fp6_add(&g_l0, &self.fp6_mul_by_nu(&h_l1));
        let c1 = self.fp6_sub(&self.fp6_sub(&cross, &g_l0), &h_l1);
        Fp12 { c0, c1 }
    }

    /// Granger-Scott squaring, valid only on the cyclotomic subgroup.
    ///
    /// The element is viewed as three F_p4 values `(z0, z1)`, `(z2, z3)`,
    /// `(z4, z5)`, each squared with the complex method over ξ.
    pub fn cyclotomic_sqr(&self, f: &Fp12) -> Fp12 {
        let _g = self.guard(Op::CyclotomicSqr);
        let (z0, z4, z3) = (f.c0.c0, f.c0.c1, f.c0.c2);
        let (z2, z1, z5) = (f.c1.c0, f.c1.c1, f.c1.c2);

        // (x + y·w)² over F_p2[w]/(w² − ξ) is even + 2·tmp·w; ξ·tmp is kept
        let fp4_sqr = |x: &Fp2, y: &Fp2| {
            let tmp = self.fp2_mul(x, y);
            let xi_tmp = self.fp2_mul_xi(&tmp);
            let s = self.fp2_add(x, y);
            let u = self.fp2_add(&self.fp2_mul_xi(y), x);
            let even = self.fp2_sub(&self.fp2_sub(&self.fp2_mul(&s, &u), &tmp), &xi_tmp);
            (even, tmp, xi_tmp)
        };
        let (t0, tmp_a, _) = fp4_sqr(&z0, &z1);
        let t1 = self.fp2_double(&tmp_a);
        let (t2, tmp_b, _) = fp4_sqr(&z2, &z3);
        let t3 = self.fp2_double(&tmp_b);
        let (t4, _, xi_tmp_c) = fp4_sqr(&z4, &z5);
        // ξ·t5 without a third reduction
        let xi_t5 = self.fp2_double(&xi_tmp_c);

        // 3t − 2z and 3t + 2z
        let minus = |t: &Fp2, z: &Fp2| {
            let r = self.fp2_add(&self.fp2_double(t), t);
            self.fp2_sub(&self.fp2_sub(&r, z), z)
        };
        let plus = |t: &Fp2, z: &Fp2| {
            let r = self.fp2_add(&self.fp2_double(t), t);
            self.fp2_add(&self.fp2_add(&r, z), z)
        };

        Fp12 {
            c0: Fp6::new(minus(&t0, &z0), minus(&t2, &z4), minus(&t4, &z3)),
            c1: Fp6::new(plus(&xi_t5, &z2), plus(&t1, &z1), plus(&t3, &z5)),
        }
    }

    /// `f^(p^k)` for `k = 1, 2, 3`: conjugate each coefficient `k` times and
    /// scale the `ω^i` coefficient by `ξ^(i·(p^k − 1)/6)`.
    pub fn frobenius(&self, f: &Fp12, k: usize) -> Fp12 {
        let _g = self.guard(Op::Frobenius);
        let mut c = f.omega_coeffs();
        for (i, ci) in c.iter_mut().enumerate() {
            if k % 2 == 1 {
                *ci = self.fp2_conj(ci);
            }
            if i > 0 {
                *ci = self.fp2_mul(ci, &self.tower.frobenius_constant(k, i));
            }
        }
        Fp12::from_omega_coeffs(c)
    }

    pub fn frobenius_p(&self, f: &Fp12) -> Fp12 {
        self.frobenius(f, 1)
    }

    pub fn frobenius_p2(&self, f: &Fp12) -> Fp12 {
        self.frobenius(f, 2)
    }

    pub fn frobenius_p3(&self, f: &Fp12) -> Fp12 {
        self.frobenius(f, 3)
    }

    /// Left-to-right square-and-multiply.
    pub fn fp12_pow(&self, f: &Fp12, e: &BigUint) -> Fp12 {
        let mut acc = Fp12::one(self.tower);
        for i in (0..e.bits()).rev() {
            acc = self.fp12_sqr(&acc);
            if e.bit(i) {
                acc = self.fp12_mul(&acc, f);
            }
        }
        acc
    }

    /// `f^e` for `f` in the cyclotomic subgroup, using cyclotomic squarings
    /// and the NAF of `|e|`. Negative digits and a negative exponent cost a
    /// conjugation each.
    pub fn cyclotomic_pow(&self, f: &Fp12, e: i64) -> Fp12 {
        let one = Fp12::one(self.tower);
        if e == 0 {
            return one;
        }
        let digits = naf_u64(e.unsigned_abs());
        let f_inv = self.fp12_conj(f);
        let mut acc = *f;
        for &d in digits.iter().rev().skip(1) {
            acc = self.cyclotomic_sqr(&acc);
            match d {
                1 => acc = self.fp12_mul(&acc, f),
                -1 => acc = self.fp12_mul(&acc, &f_inv),
                _ => {}
            }
        }
        if e < 0 {
            acc = self.fp12_conj(&acc);
        }
        acc
    }
}

/// Non-adjacent form, least significant digit first.
pub(crate) fn naf_u64(n: u64) -> Vec<i8> {
    let mut v = n as u128;
    let mut out = Vec::new();
    while v > 0 {
        let d: i8 = if v & 1 == 0 {
            0
        } else if v & 3 == 1 {
            1
        } else {
            -1
        };
        v = ((v as i128 - d as i128) as u128) >> 1;
        out.push(d);
    }
    out
}
