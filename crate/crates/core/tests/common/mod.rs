//! Independent reference arithmetic for the integration tests: plain `BigUint`
//! residues and schoolbook polynomial products, no Montgomery form, no
//! Karatsuba, no tower shortcuts.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};

use optate::fp::{FpElement, PrimeModulus};
use optate::params::BnParams;
use optate::tower::{Fp12, Fp2, Fp6};

pub type F2 = [BigUint; 2];
/// Coefficients of `1, ω, …, ω⁵` with `ω⁶ = ξ`.
pub type F12 = [F2; 6];

#[derive(Clone, Debug)]
pub struct Oracle {
    pub p: BigUint,
    /// `u² = β`, as a residue.
    pub beta: BigUint,
    pub xi: F2,
}

impl Oracle {
    pub fn new(params: &BnParams) -> Oracle {
        let p = params.p.clone();
        let beta = residue(&p, params.beta);
        Oracle { xi: [BigUint::from(params.xi0()) % &p, BigUint::one()], beta, p }
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.p
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + &self.p - b % &self.p) % &self.p
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }

    pub fn inv(&self, a: &BigUint) -> BigUint {
        assert!(!a.is_zero());
        a.modpow(&(&self.p - 2u32), &self.p)
    }

    pub fn f2_zero(&self) -> F2 {
        [BigUint::zero(), BigUint::zero()]
    }

    pub fn f2_one(&self) -> F2 {
        [BigUint::one(), BigUint::zero()]
    }

    pub fn f2_add(&self, a: &F2, b: &F2) -> F2 {
        [self.add(&a[0], &b[0]), self.add(&a[1], &b[1])]
    }

    pub fn f2_sub(&self, a: &F2, b: &F2) -> F2 {
        [self.sub(&a[0], &b[0]), self.sub(&a[1], &b[1])]
    }

    pub fn f2_neg(&self, a: &F2) -> F2 {
        self.f2_sub(&self.f2_zero(), a)
    }

    /// `(a0 + a1 u)(b0 + b1 u)` with four products.
    pub fn f2_mul(&self, a: &F2, b: &F2) -> F2 {
        let c0 = self.add(&self.mul(&a[0], &b[0]), &self.mul(&self.beta, &self.mul(&a[1], &b[1])));
        let c1 = self.add(&self.mul(&a[0], &b[1]), &self.mul(&a[1], &b[0]));
        [c0, c1]
    }

    pub fn f2_scale(&self, a: &F2, k: u64) -> F2 {
        let k = BigUint::from(k);
        [self.mul(&a[0], &k), self.mul(&a[1], &k)]
    }

    pub fn f2_inv(&self, a: &F2) -> F2 {
        let norm = self.sub(&self.mul(&a[0], &a[0]), &self.mul(&self.beta, &self.mul(&a[1], &a[1])));
        let n = self.inv(&norm);
        [self.mul(&a[0], &n), self.mul(&self.sub(&BigUint::zero(), &a[1]), &n)]
    }

    /// Schoolbook product in `F_p2[v]/(v³ − ξ)`.
    pub fn f6_mul(&self, a: &[F2; 3], b: &[F2; 3]) -> [F2; 3] {
        let mut acc: Vec<F2> = vec![self.f2_zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                acc[i + j] = self.f2_add(&acc[i + j], &self.f2_mul(&a[i], &b[j]));
            }
        }
        for k in (3..5).rev() {
            let hi = std::mem::replace(&mut acc[k], self.f2_zero());
            acc[k - 3] = self.f2_add(&acc[k - 3], &self.f2_mul(&hi, &self.xi));
        }
        [acc[0].clone(), acc[1].clone(), acc[2].clone()]
    }

    pub fn f12_one(&self) -> F12 {
        let mut r: F12 = std::array::from_fn(|_| self.f2_zero());
        r[0] = self.f2_one();
        r
    }

    pub fn f12_from_f2(&self, a: &F2) -> F12 {
        let mut r: F12 = std::array::from_fn(|_| self.f2_zero());
        r[0] = a.clone();
        r
    }

    pub fn f12_add(&self, a: &F12, b: &F12) -> F12 {
        std::array::from_fn(|i| self.f2_add(&a[i], &b[i]))
    }

    pub fn f12_sub(&self, a: &F12, b: &F12) -> F12 {
        std::array::from_fn(|i| self.f2_sub(&a[i], &b[i]))
    }

    /// Schoolbook product in `F_p2[ω]/(ω⁶ − ξ)`.
    pub fn f12_mul(&self, a: &F12, b: &F12) -> F12 {
        let mut acc: Vec<F2> = vec![self.f2_zero(); 11];
        for i in 0..6 {
            if a[i][0].is_zero() && a[i][1].is_zero() {
                continue;
            }
            for j in 0..6 {
                acc[i + j] = self.f2_add(&acc[i + j], &self.f2_mul(&a[i], &b[j]));
            }
        }
        for k in (6..11).rev() {
            let hi = std::mem::replace(&mut acc[k], self.f2_zero());
            acc[k - 6] = self.f2_add(&acc[k - 6], &self.f2_mul(&hi, &self.xi));
        }
        std::array::from_fn(|i| acc[i].clone())
    }

    pub fn f12_pow(&self, a: &F12, e: &BigUint) -> F12 {
        let mut r = self.f12_one();
        for i in (0..e.bits()).rev() {
            r = self.f12_mul(&r, &r);
            if e.bit(i) {
                r = self.f12_mul(&r, a);
            }
        }
        r
    }

    /// Inverse by Fermat: `a^(p¹² − 2)`.
    pub fn f12_inv(&self, a: &F12) -> F12 {
        self.f12_pow(a, &(self.p.pow(12) - 2u32))
    }

    pub fn f12_is_zero(&self, a: &F12) -> bool {
        a.iter().all(|c| c[0].is_zero() && c[1].is_zero())
    }
}

pub fn residue(p: &BigUint, v: i64) -> BigUint {
    let m = BigUint::from(v.unsigned_abs()) % p;
    if v < 0 && !m.is_zero() {
        p - m
    } else {
        m
    }
}

pub fn fp(m: &PrimeModulus, a: &FpElement) -> BigUint {
    m.from_mont(a)
}

pub fn f2(m: &PrimeModulus, a: &Fp2) -> F2 {
    [fp(m, &a.c0), fp(m, &a.c1)]
}

pub fn f6(m: &PrimeModulus, a: &Fp6) -> [F2; 3] {
    [f2(m, &a.c0), f2(m, &a.c1), f2(m, &a.c2)]
}

/// Reads the tower element `(c0 + c1 v + c2 v²) + (d0 + d1 v + d2 v²) ω` with
/// `v = ω²` as a polynomial in `ω`.
pub fn f12(m: &PrimeModulus, a: &Fp12) -> F12 {
    [
        f2(m, &a.c0.c0),
        f2(m, &a.c1.c0),
        f2(m, &a.c0.c1),
        f2(m, &a.c1.c1),
        f2(m, &a.c0.c2),
        f2(m, &a.c1.c2),
    ]
}

/// Affine points over `F_p12` on `y² = x³ + b`; `None` is the identity.
pub type Pt = Option<(F12, F12)>;

impl Oracle {
    pub fn pt_neg(&self, a: &Pt) -> Pt {
        a.as_ref().map(|(x, y)| (x.clone(), self.f12_sub(&self.f12_zero(), y)))
    }

    pub fn f12_zero(&self) -> F12 {
        std::array::from_fn(|_| self.f2_zero())
    }

    /// Sum and the value at `(xp, yp)` of the line through `a` and `b`
    /// (tangent when equal, vertical when opposite).
    pub fn pt_add_line(&self, a: &Pt, b: &Pt, xp: &F12, yp: &F12) -> (Pt, F12) {
        let ((x1, y1), (x2, y2)) = match (a, b) {
            (Some(a), Some(b)) => (a, b),
            _ => panic!("line through the identity"),
        };
        let lambda = if x1 == x2 {
            if self.f12_is_zero(&self.f12_add(y1, y2)) {
                return (None, self.f12_sub(xp, x1));
            }
            let three_x2 = self.f12_mul(&self.f12_from_f2(&self.f2_scale(&self.f2_one(), 3)), &self.f12_mul(x1, x1));
            let two_y = self.f12_add(y1, y1);
            self.f12_mul(&three_x2, &self.f12_inv(&two_y))
        } else {
            self.f12_mul(&self.f12_sub(y2, y1), &self.f12_inv(&self.f12_sub(x2, x1)))
        };
        let x3 = self.f12_sub(&self.f12_sub(&self.f12_mul(&lambda, &lambda), x1), x2);
        let y3 = self.f12_sub(&self.f12_mul(&lambda, &self.f12_sub(x1, &x3)), y1);
        let line = self.f12_sub(&self.f12_sub(yp, y1), &self.f12_mul(&lambda, &self.f12_sub(xp, x1)));
        (Some((x3, y3)), line)
    }

    /// `ω^k` as an element.
    pub fn omega(&self, k: usize) -> F12 {
        let mut r = self.f12_zero();
        r[k] = self.f2_one();
        r
    }

    /// Untwists `(x, y)` on `y² = x³ + b/ξ` to `(x ω², y ω³)` on `y² = x³ + b`.
    pub fn untwist(&self, x: &F2, y: &F2) -> (F12, F12) {
        let mut ux = self.f12_zero();
        ux[2] = x.clone();
        let mut uy = self.f12_zero();
        uy[3] = y.clone();
        (ux, uy)
    }

    pub fn frobenius_pt(&self, a: &Pt) -> Pt {
        a.as_ref().map(|(x, y)| (self.f12_pow(x, &self.p), self.f12_pow(y, &self.p)))
    }
}

/// The reduced optimal Ate pairing computed directly from its definition with
/// affine lines over `F_p12`: `(f_{s,Q}(P) · l_{sQ,πQ}(P) · l_{sQ+πQ,−π²Q}(P))^((p¹²−1)/r)`
/// with `s = 6t + 2 > 0`. Only practical for tiny fields.
pub fn reference_pairing(o: &Oracle, params: &BnParams, p: (&BigUint, &BigUint), q: (&F2, &F2)) -> F12 {
    assert!(params.t > 0);
    let s = BigUint::from((6 * params.t + 2) as u64);
    let xp = o.f12_from_f2(&[p.0.clone(), BigUint::zero()]);
    let yp = o.f12_from_f2(&[p.1.clone(), BigUint::zero()]);
    let q12: Pt = Some(o.untwist(q.0, q.1));
    let mut f = o.f12_one();
    let mut t = q12.clone();
    for i in (0..s.bits() - 1).rev() {
        let (t2, l) = o.pt_add_line(&t, &t, &xp, &yp);
        f = o.f12_mul(&o.f12_mul(&f, &f), &l);
        t = t2;
        if s.bit(i) {
            let (t2, l) = o.pt_add_line(&t, &q12, &xp, &yp);
            f = o.f12_mul(&f, &l);
            t = t2;
        }
    }
    let q1 = o.frobenius_pt(&q12);
    let q2 = o.pt_neg(&o.frobenius_pt(&q1));
    let (t2, l) = o.pt_add_line(&t, &q1, &xp, &yp);
    f = o.f12_mul(&f, &l);
    let (_, l) = o.pt_add_line(&t2, &q2, &xp, &yp);
    f = o.f12_mul(&f, &l);
    let e = (o.p.pow(12) - 1u32) / &params.r;
    o.f12_pow(&f, &e)
}
