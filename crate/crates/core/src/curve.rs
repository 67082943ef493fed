//! Points on `E: y² = x³ + b` over F_p and on the D-type sextic twist
//! `E': y² = x³ + b/ξ` over F_p2.
//!
//! The twist maps into `E(F_p12)` by `(x, y) ↦ (x·ω², y·ω³)`, so a line through
//! twist points evaluated at `P ∈ E(F_p)` only has coefficients at `1`, `ω`
//! and `ω³`.

use num_bigint::BigUint;

use crate::costmodel::counter::Op;
use crate::error::{Error, Result};
use crate::fp::{FpElement, PrimeModulus};
use crate::tower::{Ctx, Fp2, SparseLine};

/// Affine point on `E(F_p)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G1Point {
    pub x: FpElement,
    pub y: FpElement,
    pub infinity: bool,
}

/// Jacobian point on the twist: `x = X/Z²`, `y = Y/Z³`, infinity iff `Z = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G2Point {
    pub x: Fp2,
    pub y: Fp2,
    pub z: Fp2,
}

/// Affine point on the twist.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G2Affine {
    pub x: Fp2,
    pub y: Fp2,
    pub infinity: bool,
}

/// Affine addend of a mixed addition, with `y²` computed once up front.
#[derive(Clone, Copy, Debug)]
pub struct MixedAddend {
    pub point: G2Affine,
    pub y_sq: Fp2,
}

impl G1Point {
    pub const INFINITY: G1Point = G1Point { x: FpElement::ZERO, y: FpElement::ZERO, infinity: true };

    pub fn new(x: FpElement, y: FpElement) -> G1Point {
        G1Point { x, y, infinity: false }
    }
}

impl G2Affine {
    pub const INFINITY: G2Affine = G2Affine {
        x: Fp2 { c0: FpElement::ZERO, c1: FpElement::ZERO },
        y: Fp2 { c0: FpElement::ZERO, c1: FpElement::ZERO },
        infinity: true,
    };

    pub fn new(x: Fp2, y: Fp2) -> G2Affine {
        G2Affine { x, y, infinity: false }
    }
}

impl G2Point {
    pub fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }
}

pub fn g1_is_on_curve(m: &PrimeModulus, p: &G1Point, b: &FpElement) -> bool {
    if p.infinity {
        return true;
    }
    let rhs = m.add(&m.mont_mul(&m.square(&p.x), &p.x), b);
    m.square(&p.y) == rhs
}

pub fn g1_neg(m: &PrimeModulus, p: &G1Point) -> G1Point {
    if p.infinity {
        return *p;
    }
    G1Point::new(p.x, m.neg(&p.y))
}

pub fn g1_add(m: &PrimeModulus, p: &G1Point, q: &G1Point) -> G1Point {
    if p.infinity {
        return *q;
    }
    if q.infinity {
        return *p;
    }
    let lambda = if p.x == q.x {
        if m.add(&p.y, &q.y).is_zero() {
            return G1Point::INFINITY;
        }
        let num = m.mont_mul(&m.from_u64(3), &m.square(&p.x));
        m.mont_mul(&num, &m.inv(&m.double(&p.y)).expect("nonzero"))
    } else {
        let num = m.sub(&q.y, &p.y);
        m.mont_mul(&num, &m.inv(&m.sub(&q.x, &p.x)).expect("nonzero"))
    };
    let x3 = m.sub(&m.sub(&m.square(&lambda), &p.x), &q.x);
    let y3 = m.sub(&m.mont_mul(&lambda, &m.sub(&p.x, &x3)), &p.y);
    G1Point::new(x3, y3)
}

/// Plain double-and-add.
pub fn g1_mul(m: &PrimeModulus, p: &G1Point, k: &BigUint) -> G1Point {
    let mut acc = G1Point::INFINITY;
    for i in (0..k.bits()).rev() {
        acc = g1_add(m, &acc, &acc);
        if k.bit(i) {
            acc = g1_add(m, &acc, p);
        }
    }
    acc
}

impl Ctx<'_> {
    pub fn g2_infinity(&self) -> G2Point {
        let one = Fp2::one(self.tower);
        G2Point { x: one, y: one, z: Fp2::zero() }
    }

    pub fn g2_from_affine(&self, q: &G2Affine) -> G2Point {
        if q.infinity {
            return self.g2_infinity();
        }
        G2Point { x: q.x, y: q.y, z: Fp2::one(self.tower) }
    }

    pub fn g2_to_affine(&self, q: &G2Point) -> G2Affine {
        if q.is_infinity() {
            return G2Affine::INFINITY;
        }
        let zi = self.fp2_inv(&q.z).expect("nonzero");
        let zi2 = self.fp2_sqr(&zi);
        let x = self.fp2_mul(&q.x, &zi2);
        let y = self.fp2_mul(&q.y, &self.fp2_mul(&zi2, &zi));
        G2Affine::new(x, y)
    }

    pub fn g2_affine_is_on_curve(&self, q: &G2Affine, b2: &Fp2) -> bool {
        if q.infinity {
            return true;
        }
        let c = self.uncounted();
        let rhs = c.fp2_add(&c.fp2_mul(&c.fp2_sqr(&q.x), &q.x), b2);
        c.fp2_sqr(&q.y) == rhs
    }

    pub fn g2_is_on_curve(&self, q: &G2Point, b2: &Fp2) -> bool {
        self.g2_affine_is_on_curve(&self.uncounted().g2_to_affine(q), b2)
    }

    pub fn g2_eq(&self, a: &G2Point, b: &G2Point) -> bool {
        let c = self.uncounted();
        c.g2_to_affine(a) == c.g2_to_affine(b)
    }

    pub fn g2_neg(&self, q: &G2Point) -> G2Point {
        G2Point { y: self.fp2_neg(&q.y), ..*q }
    }

    pub fn g2_affine_neg(&self, q: &G2Affine) -> G2Affine {
        if q.infinity {
            return *q;
        }
        G2Affine::new(q.x, self.fp2_neg(&q.y))
    }

    /// Jacobian doubling for `a = 0`.
    pub fn g2_double(&self, t: &G2Point) -> G2Point {
        if t.is_infinity() || t.y.is_zero() {
            return self.g2_infinity();
        }
        let a = self.fp2_sqr(&t.x);
        let b = self.fp2_sqr(&t.y);
        let c = self.fp2_sqr(&b);
        let d = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&t.x, &b)), &a), &c);
        let d = self.fp2_double(&d);
        let e = self.fp2_add(&self.fp2_double(&a), &a);
        let f = self.fp2_sqr(&e);
        let x3 = self.fp2_sub(&f, &self.fp2_double(&d));
        let c8 = self.fp2_double(&self.fp2_double(&self.fp2_double(&c)));
        let y3 = self.fp2_sub(&self.fp2_mul(&e, &self.fp2_sub(&d, &x3)), &c8);
        let z3 = self.fp2_double(&self.fp2_mul(&t.y, &t.z));
        G2Point { x: x3, y: y3, z: z3 }
    }

    /// General Jacobian addition.
    pub fn g2_add(&self, p: &G2Point, q: &G2Point) -> G2Point {
        if p.is_infinity() {
            return *q;
        }
        if q.is_infinity() {
            return *p;
        }
        let z1z1 = self.fp2_sqr(&p.z);
        let z2z2 = self.fp2_sqr(&q.z);
        let u1 = self.fp2_mul(&p.x, &z2z2);
        let u2 = self.fp2_mul(&q.x, &z1z1);
        let s1 = self.fp2_mul(&p.y, &self.fp2_mul(&q.z, &z2z2));
        let s2 = self.fp2_mul(&q.y, &self.fp2_mul(&p.z, &z1z1));
        if u1 == u2 {
            return if s1 == s2 { self.g2_double(p) } else { self.g2_infinity() };
        }
        let h = self.fp2_sub(&u2, &u1);
        let i = self.fp2_sqr(&self.fp2_double(&h));
        let j = self.fp2_mul(&h, &i);
        let r = self.fp2_double(&self.fp2_sub(&s2, &s1));
        let v = self.fp2_mul(&u1, &i);
        let x3 = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&r), &j), &self.fp2_double(&v));
        let y3 = self.fp2_sub(
            &self.fp2_mul(&r, &self.fp2_sub(&v, &x3)),
            &self.fp2_double(&self.fp2_mul(&s1, &j)),
        );
        let zs = self.fp2_add(&p.z, &q.z);
        let z3 = self.fp2_mul(&self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&zs), &z1z1), &z2z2), &h);
        G2Point { x: x3, y: y3, z: z3 }
    }

    pub fn g2_mul(&self, q: &G2Point, k: &BigUint) -> G2Point {
        let mut acc = self.g2_infinity();
        for i in (0..k.bits()).rev() {
            acc = self.g2_double(&acc);
            if k.bit(i) {
                acc = self.g2_add(&acc, q);
            }
        }
        acc
    }

    /// `ψ^k(Q)` for `k = 1, 2`: the twist image of the `p^k`-power Frobenius.
    pub fn g2_frobenius_psi(&self, q: &G2Affine, k: usize) -> G2Affine {
        if q.infinity {
            return *q;
        }
        let t = self.tower;
        match k {
            1 => G2Affine::new(
                self.fp2_mul(&self.fp2_conj(&q.x), &t.frobenius_constant(1, 2)),
                self.fp2_mul(&self.fp2_conj(&q.y), &t.frobenius_constant(1, 3)),
            ),
            2 => G2Affine::new(
                self.fp2_mul(&q.x, &t.frobenius_constant(2, 2)),
                self.fp2_mul(&q.y, &t.frobenius_constant(2, 3)),
            ),
            _ => panic!("psi power must be 1 or 2"),
        }
    }

    pub fn mixed_addend(&self, q: &G2Affine) -> MixedAddend {
        MixedAddend { point: *q, y_sq: self.fp2_sqr(&q.y) }
    }

    /// Doubles `T` and evaluates the tangent at `P`.
    ///
    /// With `A = X², B = Y², E = 3A`, the line, scaled by `4·Y·Z³`, is
    /// `4·Y·Z³·y_P  −  6·X²·Z²·x_P·ω  +  (6·X³ − 4·Y²)·ω³`.
    /// Here `4·Y·Z³ = 2·Z3·Z²` with `Z3 = 2·Y·Z`.
    pub fn doubling_step(&self, t: &G2Point, p: &G1Point) -> Result<(G2Point, SparseLine)> {
        if t.is_infinity() || p.infinity {
            return Err(Error::Infinity);
        }
        let _g = self.guard(Op::DoublingStep);
        let a = self.fp2_sqr(&t.x);
        let b = self.fp2_sqr(&t.y);
        let c = self.fp2_sqr(&b);
        let zz = self.fp2_sqr(&t.z);
        let d = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&t.x, &b)), &a), &c);
        let d = self.fp2_double(&d);
        let e = self.fp2_add(&self.fp2_double(&a), &a);
        let f = self.fp2_sqr(&e);
        let x3 = self.fp2_sub(&f, &self.fp2_double(&d));
        let c8 = self.fp2_double(&self.fp2_double(&self.fp2_double(&c)));
        let y3 = self.fp2_sub(&self.fp2_mul(&e, &self.fp2_sub(&d, &x3)), &c8);
        let z3 = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&t.y, &t.z)), &b), &zz);

        let l0 = self.fp2_double(&self.fp2_mul(&z3, &zz));
        let l0 = self.fp2_mul_fp(&l0, &p.y);
        let ez = self.fp2_mul(&e, &zz);
        let l1 = self.fp2_neg(&self.fp2_add(&ez, &ez));
        let l1 = self.fp2_mul_fp(&l1, &p.x);
        // (E + X)² − E² − X² = 2·E·X = 6·X³
        let l3 = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&e, &t.x)), &f), &a);
        let l3 = self.fp2_sub(&l3, &self.fp2_double(&self.fp2_double(&b)));

        Ok((G2Point { x: x3, y: y3, z: z3 }, SparseLine { a: l0, b: l1, c: l3 }))
    }

    /// Mixed addition `T + Q` with `Q` affine, and the line through them at `P`.
    ///
    /// With `H = x_Q·Z² − X` and `r = 2·(y_Q·Z³ − Y)`, the line scaled by
    /// `2·Z3 = 4·Z·H` is `2·Z3·y_P − 2·r·x_P·ω + 2·(r·x_Q − Z3·y_Q)·ω³`.
    ///
    /// Fails when `Q = ±T`: the formulas do not cover doubling, and `T − T`
    /// has no affine line through it.
    pub fn addition_step(&self, t: &G2Point, q: &MixedAddend, p: &G1Point) -> Result<(G2Point, SparseLine)> {
        if t.is_infinity() || q.point.infinity || p.infinity {
            return Err(Error::Infinity);
        }
        let _g = self.guard(Op::AdditionStep);
        let (xq, yq) = (&q.point.x, &q.point.y);
        let z1z1 = self.fp2_sqr(&t.z);
        let z1_4 = self.fp2_sqr(&z1z1);
        // (Z + Z²)² − Z² − Z⁴ = 2·Z³
        let w = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&t.z, &z1z1)), &z1z1), &z1_4);
        let u2 = self.fp2_mul(xq, &z1z1);
        let s2x2 = self.fp2_mul(yq, &w);
        let h = self.fp2_sub(&u2, &t.x);
        let y1x2 = self.fp2_double(&t.y);
        let r = self.fp2_sub(&s2x2, &y1x2);
        if h.is_zero() {
            return Err(Error::Degenerate(if r.is_zero() { "T = Q" } else { "T = -Q" }));
        }
        let hh = self.fp2_sqr(&h);
        let i = self.fp2_double(&self.fp2_double(&hh));
        let j = self.fp2_mul(&h, &i);
        let v = self.fp2_mul(&t.x, &i);
        let x3 = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&r), &j), &self.fp2_double(&v));
        let y3 = self.fp2_sub(&self.fp2_mul(&r, &self.fp2_sub(&v, &x3)), &self.fp2_mul(&y1x2, &j));
        let z3 = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(&t.z, &h)), &z1z1), &hh);

        let l0 = self.fp2_mul_fp(&self.fp2_double(&z3), &p.y);
        let r2 = self.fp2_double(&r);
        let l1 = self.fp2_mul_fp(&self.fp2_neg(&r2), &p.x);
        // (y_Q + Z3)² − y_Q² − Z3² = 2·y_Q·Z3
        let yz = self.fp2_sub(&self.fp2_sub(&self.fp2_sqr(&self.fp2_add(yq, &z3)), &q.y_sq), &self.fp2_sqr(&z3));
        let l3 = self.fp2_sub(&self.fp2_mul(&r2, xq), &yz);

        Ok((G2Point { x: x3, y: y3, z: z3 }, SparseLine { a: l0, b: l1, c: l3 }))
    }
}
