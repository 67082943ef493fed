//! The optimal Ate pairing `e: G2 × G1 → μ_r ⊂ F_p12`.

use num_bigint::BigUint;
use num_traits::Signed;

use crate::curve::{g1_is_on_curve, g1_mul, G1Point, G2Affine};
use crate::error::{Error, Result};
use crate::params::BnParams;
use crate::tower::{Ctx, Fp12};

/// A pairing value. Always an `r`-th root of unity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PairingResult {
    pub value: Fp12,
}

/// Rejects points that are off-curve, at infinity or outside the order-`r`
/// subgroup.
pub fn check_inputs(params: &BnParams, p: &G1Point, q: &G2Affine) -> Result<()> {
    let m = params.modulus();
    if p.infinity || q.infinity {
        return Err(Error::Infinity);
    }
    if !g1_is_on_curve(m, p, &params.b_fe()) {
        return Err(Error::NotOnCurve);
    }
    let c = params.ctx();
    if !c.g2_affine_is_on_curve(q, &params.b_twist) {
        return Err(Error::NotOnCurve);
    }
    if !g1_mul(m, p, &params.r).infinity || !c.g2_mul(&c.g2_from_affine(q), &params.r).is_infinity() {
        return Err(Error::WrongSubgroup);
    }
    Ok(())
}

/// Miller loop over the signed digits of `6t + 2`, followed by the two
/// Frobenius correction steps with `ψ(Q)` and `−ψ²(Q)`.
///
/// Inputs are assumed valid; see [`check_inputs`].
pub fn miller_loop(ctx: &Ctx, params: &BnParams, p: &G1Point, q: &G2Affine) -> Result<Fp12> {
    if p.infinity || q.infinity {
        return Err(Error::Infinity);
    }
    let digits = &params.loop_digits;
    let q_add = ctx.mixed_addend(q);
    let q_neg = ctx.mixed_addend(&ctx.g2_affine_neg(q));

    let mut t = ctx.g2_from_affine(q);
    let mut f = Fp12::one(ctx.tower);
    for i in (0..digits.len() - 1).rev() {
        if i != digits.len() - 2 {
            f = ctx.fp12_sqr(&f);
        }
        let (t2, line) = ctx.doubling_step(&t, p)?;
        t = t2;
        f = ctx.sparse_mul(&f, &line);
        let addend = match digits[i] {
            1 => &q_add,
            -1 => &q_neg,
            _ => continue,
        };
        let (t2, line) = ctx.addition_step(&t, addend, p)?;
        t = t2;
        f = ctx.sparse_mul(&f, &line);
    }
    if params.s.is_negative() {
        f = ctx.fp12_conj(&f);
        t = ctx.g2_neg(&t);
    }

    let q1 = ctx.g2_frobenius_psi(q, 1);
    let q2 = ctx.g2_affine_neg(&ctx.g2_frobenius_psi(q, 2));
    let (t2, line) = ctx.addition_step(&t, &ctx.mixed_addend(&q1), p)?;
    f = ctx.sparse_mul(&f, &line);
    let (_, line) = ctx.addition_step(&t2, &ctx.mixed_addend(&q2), p)?;
    f = ctx.sparse_mul(&f, &line);
    Ok(f)
}

/// `f^((p⁶ − 1)(p² + 1))`: lands in the cyclotomic subgroup.
pub fn easy_part(ctx: &Ctx, f: &Fp12) -> Result<Fp12> {
    if f.is_zero() {
        return Err(Error::NotInvertible);
    }
    let m = ctx.fp12_mul(&ctx.fp12_conj(f), &ctx.fp12_inv(f)?);
    Ok(ctx.fp12_mul(&ctx.frobenius_p2(&m), &m))
}

/// `m^t` on the cyclotomic subgroup.
pub fn exp_by_t(ctx: &Ctx, params: &BnParams, m: &Fp12) -> Fp12 {
    ctx.cyclotomic_pow(m, params.t)
}

/// `m^((p⁴ − p² + 1)/r)` for cyclotomic `m`.
///
/// The exponent is written in base `p` with coefficients that are
/// polynomials in `t`; the seven factors below are combined with a fixed
/// chain of nine multiplications and four squarings:
///
/// ```text
/// y0 = m^p · m^p² · m^p³    y1 = m⁻¹            y2 = (m^t²)^p²
/// y3 = ((m^t)^p)⁻¹          y4 = (m^t · (m^t²)^p)⁻¹
/// y5 = (m^t²)⁻¹             y6 = (m^t³ · (m^t³)^p)⁻¹
/// result = y0 · y1² · y2⁶ · y3¹² · y4¹⁸ · y5³⁰ · y6³⁶
/// ```
pub fn hard_part(ctx: &Ctx, params: &BnParams, m: &Fp12) -> Fp12 {
    let ft = exp_by_t(ctx, params, m);
    let ft2 = exp_by_t(ctx, params, &ft);
    let ft3 = exp_by_t(ctx, params, &ft2);

    let y0 = ctx.fp12_mul(&ctx.fp12_mul(&ctx.frobenius_p(m), &ctx.frobenius_p2(m)), &ctx.frobenius_p3(m));
    let y1 = ctx.fp12_conj(m);
    let y2 = ctx.frobenius_p2(&ft2);
    let y3 = ctx.fp12_conj(&ctx.frobenius_p(&ft));
    let y4 = ctx.fp12_conj(&ctx.fp12_mul(&ft, &ctx.frobenius_p(&ft2)));
    let y5 = ctx.fp12_conj(&ft2);
    let y6 = ctx.fp12_conj(&ctx.fp12_mul(&ft3, &ctx.frobenius_p(&ft3)));

    let mut t0 = ctx.cyclotomic_sqr(&y6);
    t0 = ctx.fp12_mul(&t0, &y4);
    t0 = ctx.fp12_mul(&t0, &y5);
    let mut t1 = ctx.fp12_mul(&y3, &y5);
    t1 = ctx.fp12_mul(&t1, &t0);
    t0 = ctx.fp12_mul(&t0, &y2);
    t1 = ctx.cyclotomic_sqr(&t1);
    t1 = ctx.fp12_mul(&t1, &t0);
    t1 = ctx.cyclotomic_sqr(&t1);
    t0 = ctx.fp12_mul(&t1, &y1);
    t1 = ctx.fp12_mul(&t1, &y0);
    t0 = ctx.cyclotomic_sqr(&t0);
    ctx.fp12_mul(&t0, &t1)
}

/// `f^((p¹² − 1)/r)`.
pub fn final_exponentiation(ctx: &Ctx, params: &BnParams, f: &Fp12) -> Result<Fp12> {
    let m = easy_part(ctx, f)?;
    Ok(hard_part(ctx, params, &m))
}

/// Validates the inputs, then runs the Miller loop and final exponentiation.
pub fn optimal_ate(params: &BnParams, p: &G1Point, q: &G2Affine) -> Result<PairingResult> {
    check_inputs(params, p, q)?;
    optimal_ate_unchecked(&params.ctx(), params, p, q)
}

/// The pairing without subgroup checks, through an explicit context so the
/// work can be counted.
pub fn optimal_ate_unchecked(ctx: &Ctx, params: &BnParams, p: &G1Point, q: &G2Affine) -> Result<PairingResult> {
    let f = miller_loop(ctx, params, p, q)?;
    Ok(PairingResult { value: final_exponentiation(ctx, params, &f)? })
}

/// `(p¹² − 1)/r`.
pub fn final_exponent(params: &BnParams) -> BigUint {
    (params.p.pow(12) - 1u32) / &params.r
}

/// `(p⁴ − p² + 1)/r`.
pub fn hard_exponent(params: &BnParams) -> BigUint {
    (params.p.pow(4) - params.p.pow(2) + 1u32) / &params.r
}

#[cfg(test)]
mod tests;
