//! The extension tower
//!
//! ```text
//! F_p2  = F_p[μ]  / (μ² − β)
//! F_p6  = F_p2[ν] / (ν³ − ξ),   ξ = ξ₀ + μ
//! F_p12 = F_p6[ω] / (ω² − ν)
//! ```
//!
//! For the 254-bit curve `β = −5` and `ξ₀ = 0`, so `ξ = μ`. When `p ≡ 3 mod 4`
//! the element `μ` is always a square in F_p2 and a nonzero `ξ₀` is required.
//!
//! All arithmetic goes through a [`Ctx`], which carries the tower constants and
//! an optional [`OpCounter`].

mod fp12;
mod fp2;
mod fp6;

use num_bigint::BigUint;

use crate::costmodel::counter::{Op, OpCounter, OpCounts, OpGuard};
use crate::error::{Error, Result};
use crate::fp::{FpElement, PrimeModulus};

pub use fp12::{Fp12, SparseLine};
pub use fp2::Fp2;
pub use fp6::Fp6;

/// Field constants shared by every element of one tower.
#[derive(Clone, Debug)]
pub struct Tower {
    modulus: PrimeModulus,
    beta: i64,
    beta_fe: FpElement,
    xi0: u64,
    xi0_fe: FpElement,
    xi: Fp2,
    /// `frob[k-1][i] = ξ^(i·(p^k − 1)/6)` for `k = 1, 2, 3`.
    frob: [[Fp2; 6]; 3],
}

impl Tower {
    /// Builds the tower for `μ² = β` and `ξ = ξ₀ + μ`.
    ///
    /// Fails unless β is a non-square in F_p and ξ is neither a square nor a
    /// cube in F_p2, which is what makes each step of the tower irreducible.
    pub fn new(modulus: PrimeModulus, beta: i64, xi0: u64) -> Result<Tower> {
        let beta_fe = modulus.from_i64(beta);
        if beta_fe.is_zero() || modulus.is_square(&beta_fe) {
            return Err(Error::Validation(vec![format!("beta = {beta} is a square mod p")]));
        }
        let xi0_fe = modulus.from_u64(xi0);
        let xi = Fp2 { c0: xi0_fe, c1: modulus.one() };
        let mut tower = Tower {
            modulus,
            beta,
            beta_fe,
            xi0,
            xi0_fe,
            xi,
            frob: [[Fp2::zero(); 6]; 3],
        };
        let ctx = tower.ctx();
        let p = tower.modulus.value().clone();
        let q1 = &p * &p - 1u32;
        let one = Fp2::one(&tower);
        if ctx.fp2_pow(&xi, &(&q1 >> 1)) == one {
            return Err(Error::Validation(vec![format!("xi = {xi0} + mu is a square in F_p2")]));
        }
        if ctx.fp2_pow(&xi, &(&q1 / 3u32)) == one {
            return Err(Error::Validation(vec![format!("xi = {xi0} + mu is a cube in F_p2")]));
        }
        let mut frob = [[one; 6]; 3];
        let mut pk = BigUint::from(1u32);
        for row in frob.iter_mut() {
            pk *= &p;
            let base = ctx.fp2_pow(&xi, &((&pk - 1u32) / 6u32));
            for i in 1..6 {
                row[i] = ctx.fp2_mul(&row[i - 1], &base);
            }
        }
        tower.frob = frob;
        Ok(tower)
    }

    /// Smallest `ξ₀ ≥ 0` for which `ξ₀ + μ` is a sextic non-residue.
    pub fn search(modulus: PrimeModulus, beta: i64) -> Result<Tower> {
        let mut last = None;
        for xi0 in 0..64 {
            match Tower::new(modulus.clone(), beta, xi0) {
                Ok(t) => return Ok(t),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or(Error::SearchExhausted(64)))
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn beta_fe(&self) -> FpElement {
        self.beta_fe
    }

    pub fn xi0(&self) -> u64 {
        self.xi0
    }

    pub fn xi(&self) -> Fp2 {
        self.xi
    }

    /// `ξ^(i·(p^k − 1)/6)`.
    pub fn frobenius_constant(&self, k: usize, i: usize) -> Fp2 {
        assert!((1..=3).contains(&k) && i < 6, "frobenius constant index out of range");
        self.frob[k - 1][i]
    }

    /// An uncounted context.
    pub fn ctx(&self) -> Ctx<'_> {
        Ctx { tower: self, counter: None }
    }

    /// A context that records into `counter`.
    pub fn counting_ctx<'a>(&'a self, counter: &'a OpCounter<'a>) -> Ctx<'a> {
        Ctx { tower: self, counter: Some(counter) }
    }
}

/// Arithmetic context: tower constants plus an optional operation counter.
///
/// Cheap to copy. A counting context must stay on one thread.
#[derive(Clone, Copy)]
pub struct Ctx<'a> {
    pub tower: &'a Tower,
    counter: Option<&'a OpCounter<'a>>,
}

impl<'a> Ctx<'a> {
    pub fn modulus(&self) -> &'a PrimeModulus {
        &self.tower.modulus
    }

    pub fn is_counting(&self) -> bool {
        self.counter.is_some()
    }

    /// Runs `f` in a fresh counting scope and returns what it recorded.
    /// If `self` is itself counting, the events are also forwarded to it.
    pub fn counted<R>(&self, f: impl FnOnce(Ctx<'_>) -> R) -> (R, OpCounts) {
        let scope = match self.counter {
            Some(parent) => OpCounter::child(parent),
            None => OpCounter::new(),
        };
        let r = f(Ctx { tower: self.tower, counter: Some(&scope) });
        (r, scope.snapshot())
    }

    /// Same context without counting.
    pub fn uncounted(&self) -> Ctx<'a> {
        Ctx { tower: self.tower, counter: None }
    }

    #[inline]
    pub(crate) fn bump(&self, op: Op) {
        if let Some(c) = self.counter {
            c.bump(op);
        }
    }

    #[inline]
    pub(crate) fn guard(&self, op: Op) -> OpGuard<'a> {
        OpGuard::new(self.counter, op)
    }

    // Base-field leaves. Each one is a single counted event.

    pub fn fp_add(&self, a: &FpElement, b: &FpElement) -> FpElement {
        self.bump(Op::FpAdd);
        self.modulus().add(a, b)
    }

    pub fn fp_sub(&self, a: &FpElement, b: &FpElement) -> FpElement {
        self.bump(Op::FpAdd);
        self.modulus().sub(a, b)
    }

    pub fn fp_neg(&self, a: &FpElement) -> FpElement {
        self.bump(Op::FpAdd);
        self.modulus().neg(a)
    }

    pub fn fp_double(&self, a: &FpElement) -> FpElement {
        self.bump(Op::FpAdd);
        self.modulus().double(a)
    }

    pub fn fp_mul(&self, a: &FpElement, b: &FpElement) -> FpElement {
        self.bump(Op::FpMul);
        self.modulus().mont_mul(a, b)
    }

    pub fn fp_sqr(&self, a: &FpElement) -> FpElement {
        self.bump(Op::FpSqr);
        self.modulus().square(a)
    }

    /// Multiplication by β.
    pub fn fp_mul_beta(&self, a: &FpElement) -> FpElement {
        self.bump(Op::FpMulBeta);
        self.modulus().mont_mul(a, &self.tower.beta_fe)
    }

    /// Multiplication by the small constant ξ₀ (only used when ξ₀ ≠ 0).
    fn fp_mul_xi0(&self, a: &FpElement) -> FpElement {
        self.bump(Op::FpMul);
        self.modulus().mont_mul(a, &self.tower.xi0_fe)
    }

    /// Fermat inversion. Counted as one `i`; its internal products are not
    /// counted separately.
    pub fn fp_inv(&self, a: &FpElement) -> Result<FpElement> {
        self.bump(Op::FpInv);
        self.modulus().inv(a)
    }
}

#[cfg(test)]
mod tests;
