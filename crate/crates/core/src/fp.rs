//! Prime-field arithmetic on eight 32-bit limbs.
//!
//! Elements are stored in Montgomery form `a·R mod p` with `R = 2^256`. The
//! multiplier follows the digit-serial radix-2^32 schedule: one quotient digit
//! `q_i` per outer iteration, and two carry chains in the inner loop (one for
//! the `A[i]·B[j]` partial products, one for `q_i·p[j]`). The raw result lies
//! in `[0, 2p)` and a single conditional subtraction makes it canonical.
//!
//! Nothing here is constant time.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::primes::is_probable_prime;

pub const LIMBS: usize = 8;
pub const HEX_LEN: usize = LIMBS * 8;

/// A residue in Montgomery form. Limbs are little-endian.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FpElement {
    limbs: [u32; LIMBS],
}

impl FpElement {
    pub const ZERO: FpElement = FpElement { limbs: [0; LIMBS] };

    pub fn limbs(&self) -> &[u32; LIMBS] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpElement(0x")?;
        for l in self.limbs.iter().rev() {
            write!(f, "{l:08x}")?;
        }
        write!(f, ")")
    }
}

/// One outer iteration of the Montgomery multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MontStep {
    /// Quotient digit `q_i = (S[0] + A[i]·B[0])·p' mod 2^32`.
    pub q: u32,
    /// Low digit of `S + A[i]·B + q_i·p`, which the shift discards. Always zero.
    pub dropped_digit: u32,
    /// Running value `S` after the iteration, including the extra top digit.
    pub s: [u32; LIMBS + 1],
}

/// Odd prime modulus together with its Montgomery constants.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeModulus {
    limbs: [u32; LIMBS],
    bitlen: u32,
    p_prime_inv: u32,
    r_mod_p: FpElement,
    r2_mod_p: FpElement,
    value: BigUint,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeModulus")
            .field("p", &format_args!("0x{}", self.value.to_str_radix(16)))
            .field("bitlen", &self.bitlen)
            .finish()
    }
}

fn biguint_to_limbs(x: &BigUint) -> Option<[u32; LIMBS]> {
    let digits = x.to_u32_digits();
    if digits.len() > LIMBS {
        return None;
    }
    let mut limbs = [0u32; LIMBS];
    limbs[..digits.len()].copy_from_slice(&digits);
    Some(limbs)
}

fn limbs_to_biguint(limbs: &[u32; LIMBS]) -> BigUint {
    BigUint::from_slice(limbs)
}

fn cmp_limbs(a: &[u32; LIMBS], b: &[u32; LIMBS]) -> Ordering {
    for i in (0..LIMBS).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// `a - b`, returning the borrow.
fn sub_limbs(a: &[u32; LIMBS], b: &[u32; LIMBS]) -> ([u32; LIMBS], bool) {
    let mut out = [0u32; LIMBS];
    let mut borrow = 0u64;
    for i in 0..LIMBS {
        let t = (a[i] as u64).wrapping_sub(b[i] as u64).wrapping_sub(borrow);
        out[i] = t as u32;
        borrow = (t >> 63) & 1;
    }
    (out, borrow != 0)
}

/// `a + b`, returning the carry.
fn add_limbs(a: &[u32; LIMBS], b: &[u32; LIMBS]) -> ([u32; LIMBS], bool) {
    let mut out = [0u32; LIMBS];
    let mut carry = 0u64;
    for i in 0..LIMBS {
        let t = a[i] as u64 + b[i] as u64 + carry;
        out[i] = t as u32;
        carry = t >> 32;
    }
    (out, carry != 0)
}

impl PrimeModulus {
    /// Validates `p` (odd, prime, at most 254 bits) and precomputes the
    /// Montgomery constants.
    pub fn new(p: &BigUint) -> Result<Self> {
        if p.bits() < 2 || !p.bit(0) {
            return Err(Error::InvalidModulus("modulus must be odd and > 2".into()));
        }
        if p.bits() > (LIMBS as u64) * 32 - 2 {
            return Err(Error::InvalidModulus(format!(
                "modulus has {} bits, at most {} supported",
                p.bits(),
                LIMBS * 32 - 2
            )));
        }
        if !is_probable_prime(p, 64) {
            return Err(Error::InvalidModulus("modulus is not prime".into()));
        }
        let limbs = biguint_to_limbs(p).expect("bit length checked");
        // Newton iteration for p[0]^-1 mod 2^32.
        let p0 = limbs[0];
        let mut inv = 1u32;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p0.wrapping_mul(inv)));
        }
        let p_prime_inv = inv.wrapping_neg();
        let r = BigUint::one() << (LIMBS * 32);
        let r_mod_p = biguint_to_limbs(&(&r % p)).unwrap();
        let r2_mod_p = biguint_to_limbs(&((&r * &r) % p)).unwrap();
        Ok(PrimeModulus {
            limbs,
            bitlen: p.bits() as u32,
            p_prime_inv,
            r_mod_p: FpElement { limbs: r_mod_p },
            r2_mod_p: FpElement { limbs: r2_mod_p },
            value: p.clone(),
        })
    }

    pub fn limbs(&self) -> &[u32; LIMBS] {
        &self.limbs
    }

    pub fn bitlen(&self) -> u32 {
        self.bitlen
    }

    pub fn p_prime_inv(&self) -> u32 {
        self.p_prime_inv
    }

    /// `R mod p`, which is also the Montgomery form of 1.
    pub fn r_mod_p(&self) -> FpElement {
        self.r_mod_p
    }

    pub fn r2_mod_p(&self) -> FpElement {
        self.r2_mod_p
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn zero(&self) -> FpElement {
        FpElement::ZERO
    }

    pub fn one(&self) -> FpElement {
        self.r_mod_p
    }

    fn is_canonical(&self, a: &FpElement) -> bool {
        cmp_limbs(&a.limbs, &self.limbs) == Ordering::Less
    }

    pub fn add(&self, a: &FpElement, b: &FpElement) -> FpElement {
        let (s, carry) = add_limbs(&a.limbs, &b.limbs);
        if carry || cmp_limbs(&s, &self.limbs) != Ordering::Less {
            FpElement { limbs: sub_limbs(&s, &self.limbs).0 }
        } else {
            FpElement { limbs: s }
        }
    }

    pub fn sub(&self, a: &FpElement, b: &FpElement) -> FpElement {
        let (d, borrow) = sub_limbs(&a.limbs, &b.limbs);
        if borrow {
            FpElement { limbs: add_limbs(&d, &self.limbs).0 }
        } else {
            FpElement { limbs: d }
        }
    }

    pub fn neg(&self, a: &FpElement) -> FpElement {
        if a.is_zero() {
            *a
        } else {
            FpElement { limbs: sub_limbs(&self.limbs, &a.limbs).0 }
        }
    }

    pub fn double(&self, a: &FpElement) -> FpElement {
        self.add(a, a)
    }

    fn mont_core(&self, a: &[u32; LIMBS], b: &[u32; LIMBS], mut trace: Option<&mut Vec<MontStep>>) -> FpElement {
        let p = &self.limbs;
        let mut s = [0u32; LIMBS + 1];
        for &ai in a.iter() {
            let ai = ai as u64;
            let h0 = s[0] as u64 + ai * b[0] as u64;
            let q = (h0 as u32).wrapping_mul(self.p_prime_inv);
            let q64 = q as u64;
            let mut c1 = 0u64;
            let mut c2 = 0u64;
            let mut dropped = 0u32;
            for j in 0..LIMBS {
                // (C1, H[j]) = S[j] + A[i]·B[j] + C1
                let t = s[j] as u64 + ai * b[j] as u64 + c1;
                c1 = t >> 32;
                // (C2, S[j-1]) = H[j] + q·p[j] + C2
                let u = (t & 0xffff_ffff) + q64 * p[j] as u64 + c2;
                c2 = u >> 32;
                if j == 0 {
                    dropped = u as u32;
                } else {
                    s[j - 1] = u as u32;
                }
            }
            let top = s[LIMBS] as u64 + c1 + c2;
            s[LIMBS - 1] = top as u32;
            s[LIMBS] = (top >> 32) as u32;
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(MontStep { q, dropped_digit: dropped, s });
            }
        }
        let mut low = [0u32; LIMBS];
        low.copy_from_slice(&s[..LIMBS]);
        if s[LIMBS] != 0 || cmp_limbs(&low, p) != Ordering::Less {
            low = sub_limbs(&low, p).0;
        }
        FpElement { limbs: low }
    }

    /// `a·b·R^-1 mod p`.
    pub fn mont_mul(&self, a: &FpElement, b: &FpElement) -> FpElement {
        self.mont_core(&a.limbs, &b.limbs, None)
    }

    /// Same as [`Self::mont_mul`] but records every outer iteration.
    pub fn mont_mul_traced(&self, a: &FpElement, b: &FpElement) -> (FpElement, Vec<MontStep>) {
        let mut trace = Vec::with_capacity(LIMBS);
        let out = self.mont_core(&a.limbs, &b.limbs, Some(&mut trace));
        (out, trace)
    }

    pub fn square(&self, a: &FpElement) -> FpElement {
        self.mont_mul(a, a)
    }

    pub fn to_mont(&self, x: &BigUint) -> Result<FpElement> {
        if x >= &self.value {
            return Err(Error::OutOfRange);
        }
        let limbs = biguint_to_limbs(x).ok_or(Error::OutOfRange)?;
        Ok(self.mont_mul(&FpElement { limbs }, &self.r2_mod_p))
    }

    /// Reduces an arbitrary integer and converts it.
    pub fn from_biguint_reduced(&self, x: &BigUint) -> FpElement {
        self.to_mont(&(x % &self.value)).expect("reduced")
    }

    pub fn from_u64(&self, x: u64) -> FpElement {
        self.from_biguint_reduced(&BigUint::from(x))
    }

    pub fn from_i64(&self, x: i64) -> FpElement {
        let mag = self.from_u64(x.unsigned_abs());
        if x < 0 {
            self.neg(&mag)
        } else {
            mag
        }
    }

    pub fn from_mont(&self, a: &FpElement) -> BigUint {
        let mut one = [0u32; LIMBS];
        one[0] = 1;
        let plain = self.mont_core(&a.limbs, &one, None);
        limbs_to_biguint(&plain.limbs)
    }

    /// Left-to-right square-and-multiply.
    pub fn pow(&self, a: &FpElement, e: &BigUint) -> FpElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mont_mul(&acc, a);
            }
        }
        acc
    }

    /// Fermat inversion `a^(p-2)`.
    pub fn inv(&self, a: &FpElement) -> Result<FpElement> {
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(a, &(&self.value - 2u32)))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, a: &FpElement) -> bool {
        if a.is_zero() {
            return true;
        }
        let e = (&self.value - 1u32) >> 1;
        self.pow(a, &e) == self.one()
    }

    /// Square root by `(p+1)/4` when `p ≡ 3 mod 4`, Tonelli-Shanks otherwise.
    /// Returns the root whose integer value is smaller.
    pub fn sqrt(&self, a: &FpElement) -> Option<FpElement> {
        if a.is_zero() {
            return Some(*a);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = &self.value;
        let root = if p.bit(1) {
            self.pow(a, &((p + 1u32) >> 2))
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.square(&root), *a);
        let other = self.neg(&root);
        Some(if self.from_mont(&other) < self.from_mont(&root) { other } else { root })
    }

    fn tonelli_shanks(&self, a: &FpElement) -> FpElement {
        let p = &self.value;
        let pm1 = p - 1u32;
        let s = pm1.trailing_zeros().unwrap_or(0);
        let q = &pm1 >> s;
        let mut z = self.from_u64(2);
        while self.is_square(&z) {
            z = self.add(&z, &self.one());
        }
        let mut m = s;
        let mut c = self.pow(&z, &q);
        let mut t = self.pow(a, &q);
        let mut r = self.pow(a, &((&q + 1u32) >> 1));
        let one = self.one();
        while t != one {
            let mut i = 0u64;
            let mut t2 = t;
            while t2 != one {
                t2 = self.square(&t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            t = self.mont_mul(&t, &c);
            r = self.mont_mul(&r, &b);
        }
        r
    }

    /// Orders by integer value (not by Montgomery representation).
    pub fn cmp(&self, a: &FpElement, b: &FpElement) -> Ordering {
        self.from_mont(a).cmp(&self.from_mont(b))
    }

    /// Big-endian, fixed-width hex of the integer value.
    pub fn encode_hex(&self, a: &FpElement) -> String {
        let v = self.from_mont(a);
        format!("{:0>width$}", v.to_str_radix(16), width = HEX_LEN)
    }

    pub fn decode_hex(&self, s: &str) -> Result<FpElement> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.is_empty() || s.len() > HEX_LEN || !s.bytes().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::MalformedHex(s.to_string()));
        }
        let v = BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| Error::MalformedHex(s.to_string()))?;
        self.to_mont(&v)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FpElement {
        use num_bigint::RandBigInt;
        let v = rng.gen_biguint_below(&self.value);
        self.to_mont(&v).expect("below modulus")
    }

    /// Debug check that every limb array handed out is canonical.
    pub fn check_canonical(&self, a: &FpElement) -> bool {
        self.is_canonical(a)
    }

    pub fn hex_modulus(&self) -> String {
        format!("{:0>width$}", self.value.to_str_radix(16), width = HEX_LEN)
    }
}
