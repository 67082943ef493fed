//! BN curve parameters: the polynomial family, tower and twist selection,
//! loop recodings and canonical generators.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{g1_is_on_curve, g1_mul, G1Point, G2Affine};
use crate::error::{Error, Result};
use crate::fp::PrimeModulus;
use crate::primes::is_probable_prime;
use crate::tower::{Ctx, Fp2, Tower};

/// `2^62 − 2^54 + 2^44`.
pub const REFERENCE_T: i64 = (1 << 62) - (1 << 54) + (1 << 44);
pub const REFERENCE_B: i64 = 5;
pub const REFERENCE_BETA: i64 = -5;

pub const SCHEMA_VERSION: u32 = 1;

const MR_ROUNDS: u32 = 64;
const SCAN_LIMIT: u64 = 10_000;

/// Which sextic twist carries G2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistType {
    /// `y² = x³ + b/ξ`
    D,
    /// `y² = x³ + b·ξ`
    M,
}

/// Everything needed to compute pairings on one BN curve.
#[derive(Clone, Debug)]
pub struct BnParams {
    pub t: i64,
    pub p: BigUint,
    pub r: BigUint,
    /// Frobenius trace `6t² + 1`.
    pub t_r: BigUint,
    pub b: i64,
    /// Miller loop parameter `6t + 2`.
    pub s: BigInt,
    /// Canonical NAF of `|s|`, least significant digit first.
    pub s_naf: Vec<i8>,
    /// Digits actually driven by the Miller loop (see [`miller_digits`]).
    pub loop_digits: Vec<i8>,
    pub beta: i64,
    pub tower: Tower,
    pub twist: TwistType,
    /// Twist coefficient `b/ξ`.
    pub b_twist: Fp2,
    pub g1_gen: G1Point,
    pub g2_gen: G2Affine,
    /// `2p − r`.
    pub g2_cofactor: BigUint,
    /// Non-fatal findings, e.g. the curve being below a recommended size.
    pub warnings: Vec<String>,
}

/// Knobs for [`derive_params_with`]. `None` means search.
#[derive(Clone, Copy, Debug, Default)]
pub struct DeriveOptions {
    pub b: Option<i64>,
    pub beta: Option<i64>,
    pub xi0: Option<u64>,
}

/// `(p, r, t_r)` for a given `t`.
pub fn bn_polynomials(t: i64) -> (BigInt, BigInt, BigInt) {
    let t = BigInt::from(t);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    let t4 = &t3 * &t;
    let common = 36 * &t4 + 36 * &t3 + 6 * &t + 1;
    let p = &common + 24 * &t2;
    let r = &common + 18 * &t2;
    let tr = 6 * &t2 + 1;
    (p, r, tr)
}

/// Canonical non-adjacent form of `s > 0`, least significant digit first.
pub fn naf_recode(s: &BigUint) -> Vec<i8> {
    let mut v = s.clone();
    let mut out = Vec::new();
    let three = BigUint::from(3u32);
    while !v.is_zero() {
        let d: i8 = if !v.bit(0) {
            0
        } else if (&v & &three) == BigUint::one() {
            1
        } else {
            -1
        };
        match d {
            1 => v -= 1u32,
            -1 => v += 1u32,
            _ => {}
        }
        v >>= 1;
        out.push(d);
    }
    out
}

/// Loop digits for the Miller loop: the NAF, with a leading `1 0 −1` folded
/// into `1 1` so the loop is one doubling shorter. The result still sums to
/// `s` but is no longer non-adjacent at the top.
pub fn miller_digits(s: &BigUint) -> Vec<i8> {
    let mut d = naf_recode(s);
    let n = d.len();
    if n >= 3 && d[n - 1] == 1 && d[n - 2] == 0 && d[n - 3] == -1 {
        d.truncate(n - 3);
        d.push(1);
        d.push(1);
    }
    d
}

pub fn digits_value(d: &[i8]) -> BigInt {
    d.iter().rev().fold(BigInt::zero(), |acc, &x| acc * 2 + x)
}

pub fn derive_params(t: i64, b: i64) -> Result<BnParams> {
    derive_params_with(t, DeriveOptions { b: Some(b), ..Default::default() })
}

/// The 254-bit curve `t = 2^62 − 2^54 + 2^44`, `b = 5`, `β = −5`, `ξ = μ`.
pub fn reference_params() -> Result<BnParams> {
    derive_params_with(REFERENCE_T, DeriveOptions { b: Some(REFERENCE_B), beta: Some(REFERENCE_BETA), xi0: Some(0) })
}

pub fn derive_params_with(t: i64, opts: DeriveOptions) -> Result<BnParams> {
    if t == 0 {
        return Err(Error::Validation(vec!["t must be nonzero".into()]));
    }
    let (p, r, t_r) = bn_polynomials(t);
    let to_u = |x: &BigInt| x.to_biguint().expect("BN polynomials are positive for t != 0");
    let (p, r, t_r) = (to_u(&p), to_u(&r), to_u(&t_r));

    let mut failures = Vec::new();
    if !is_probable_prime(&p, MR_ROUNDS) {
        failures.push(format!("p = {p} is not prime"));
    }
    if !is_probable_prime(&r, MR_ROUNDS) {
        failures.push(format!("r = {r} is not prime"));
    }
    if &p + 1u32 != &r + &t_r {
        failures.push("p + 1 - t_r != r".into());
    }
    if p.bits() > 254 {
        failures.push(format!("p has {} bits; at most 254 are supported", p.bits()));
    }
    if !failures.is_empty() {
        return Err(Error::Validation(failures));
    }
    let modulus = PrimeModulus::new(&p)?;

    let b = match opts.b {
        Some(b) => {
            if !curve_order_is_r(&modulus, b, &r) {
                return Err(Error::Validation(vec![format!("#E(F_p) != r for b = {b}")]));
            }
            b
        }
        None => find_b(&modulus, &r)?,
    };

    let betas: Vec<i64> = match opts.beta {
        Some(beta) => vec![beta],
        None => (1..=64).map(|k| -k).collect(),
    };
    let xi0s: Vec<u64> = match opts.xi0 {
        Some(x) => vec![x],
        None => (0..64).collect(),
    };
    let g2_cofactor = 2u32 * &p - &r;
    let mut last_err = None;
    for &beta in &betas {
        for &xi0 in &xi0s {
            let tower = match Tower::new(modulus.clone(), beta, xi0) {
                Ok(tw) => tw,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            let ctx = tower.ctx();
            let b_fe = modulus.from_i64(b);
            let b_d = ctx.fp2_mul(&Fp2::from_fp(b_fe), &ctx.fp2_inv(&tower.xi())?);
            match twist_generator(&ctx, &b_d, &r, &g2_cofactor) {
                Some(g2) => {
                    return finish(t, p, r, t_r, b, beta, tower, b_d, g2, g2_cofactor);
                }
                None => {
                    let b_m = ctx.fp2_mul(&Fp2::from_fp(b_fe), &tower.xi());
                    let m_ok = twist_generator(&ctx, &b_m, &r, &g2_cofactor).is_some();
                    last_err = Some(Error::Validation(vec![format!(
                        "beta = {beta}, xi0 = {xi0}: D-type twist order != r(2p - r){}",
                        if m_ok { " (M-type matches; only D-type is supported)" } else { "" }
                    )]));
                }
            }
        }
    }
    Err(last_err.unwrap_or(Error::SearchExhausted(betas.len() as u64)))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    t: i64,
    p: BigUint,
    r: BigUint,
    t_r: BigUint,
    b: i64,
    beta: i64,
    tower: Tower,
    b_twist: Fp2,
    g2_gen: G2Affine,
    g2_cofactor: BigUint,
) -> Result<BnParams> {
    let g1_gen = find_g1(&tower, b)?;
    let s: BigInt = BigInt::from(t) * 6 + 2;
    let s_abs = s.abs().to_biguint().expect("abs");
    let s_naf = naf_recode(&s_abs);
    let loop_digits = miller_digits(&s_abs);

    let mut warnings = Vec::new();
    if r.bits() < 256 {
        warnings.push(format!(
            "r has {} bits; the 128-bit security recommendation asks for log2(r) >= 256",
            r.bits()
        ));
    }
    let k_log_p = 12.0 * p_log2(&p);
    if !(3000.0..=5000.0).contains(&k_log_p) {
        warnings.push(format!("12 * log2(p) = {k_log_p:.0} is outside [3000, 5000]"));
    }

    let params = BnParams {
        t,
        p,
        r,
        t_r,
        b,
        s,
        s_naf,
        loop_digits,
        beta,
        tower,
        twist: TwistType::D,
        b_twist,
        g1_gen,
        g2_gen,
        g2_cofactor,
        warnings,
    };
    let problems = params.validate();
    if problems.is_empty() {
        Ok(params)
    } else {
        Err(Error::Validation(problems))
    }
}

fn p_log2(p: &BigUint) -> f64 {
    let bits = p.bits();
    let shift = bits.saturating_sub(53);
    let top = (p >> shift).to_string().parse::<f64>().unwrap_or(0.0);
    top.log2() + shift as f64
}

/// `#E(F_p) = r`, tested by checking that a point has order exactly `r`.
/// Since `r` is prime and lies in the Hasse interval, that pins the order.
fn curve_order_is_r(m: &PrimeModulus, b: i64, r: &BigUint) -> bool {
    let bf = m.from_i64(b);
    if bf.is_zero() {
        return false;
    }
    let point = (0..SCAN_LIMIT).find_map(|x| {
        let xf = m.from_u64(x);
        let rhs = m.add(&m.mont_mul(&m.square(&xf), &xf), &bf);
        m.sqrt(&rhs).map(|y| G1Point::new(xf, y))
    });
    point.is_some_and(|pt| g1_mul(m, &pt, r).infinity)
}

/// Smallest `b ≥ 1` with `#E(F_p) = r`.
pub fn find_b_for(t: i64) -> Result<i64> {
    let (p, r, _) = bn_polynomials(t);
    let m = PrimeModulus::new(&p.to_biguint().ok_or_else(|| Error::InvalidArgument("p <= 0".into()))?)?;
    find_b(&m, &r.to_biguint().expect("positive"))
}

fn find_b(m: &PrimeModulus, r: &BigUint) -> Result<i64> {
    (1..1000).find(|&b| curve_order_is_r(m, b, r)).ok_or(Error::SearchExhausted(1000))
}

/// Smallest `x ≥ 1` with `x³ + b` a square; `y` is the smaller root.
fn find_g1(tower: &Tower, b: i64) -> Result<G1Point> {
    let m = tower.modulus();
    let bf = m.from_i64(b);
    for x in 1..SCAN_LIMIT {
        let xf = m.from_u64(x);
        let rhs = m.add(&m.mont_mul(&m.square(&xf), &xf), &bf);
        if rhs.is_zero() {
            continue;
        }
        if let Some(y) = m.sqrt(&rhs) {
            return Ok(G1Point::new(xf, y));
        }
    }
    Err(Error::SearchExhausted(SCAN_LIMIT))
}

/// Scans `x = k + μ` for a twist point `Q'` and returns `h₂·Q'` if it is a
/// nonzero point killed by `r`. Returns `None` when the twist has the wrong
/// order.
fn twist_generator(ctx: &Ctx, b2: &Fp2, r: &BigUint, h2: &BigUint) -> Option<G2Affine> {
    let m = ctx.modulus();
    for k in 0..SCAN_LIMIT {
        let x = Fp2::new(m.from_u64(k), m.one());
        let rhs = ctx.fp2_add(&ctx.fp2_mul(&ctx.fp2_sqr(&x), &x), b2);
        let Some(y) = ctx.fp2_sqrt(&rhs) else { continue };
        let q = ctx.g2_from_affine(&G2Affine::new(x, y));
        let g = ctx.g2_mul(&q, h2);
        if g.is_infinity() {
            continue;
        }
        if !ctx.g2_mul(&g, r).is_infinity() {
            return None;
        }
        return Some(ctx.g2_to_affine(&g));
    }
    None
}

impl BnParams {
    pub fn ctx(&self) -> Ctx<'_> {
        self.tower.ctx()
    }

    pub fn modulus(&self) -> &PrimeModulus {
        self.tower.modulus()
    }

    pub fn b_fe(&self) -> crate::fp::FpElement {
        self.modulus().from_i64(self.b)
    }

    pub fn xi0(&self) -> u64 {
        self.tower.xi0()
    }

    /// Short identifier used in vector files.
    pub fn id(&self) -> String {
        format!("bn-t{}-b{}-beta{}-xi{}", self.t, self.b, self.beta, self.xi0())
    }

    pub fn is_reference_curve(&self) -> bool {
        self.t == REFERENCE_T && self.b == REFERENCE_B && self.beta == REFERENCE_BETA && self.xi0() == 0
    }

    /// Re-checks every invariant and lists the failures.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (p, r, tr) = bn_polynomials(self.t);
        if BigInt::from(self.p.clone()) != p || BigInt::from(self.r.clone()) != r || BigInt::from(self.t_r.clone()) != tr {
            out.push("p, r, t_r do not match the BN polynomials".into());
        }
        if &self.p + 1u32 != &self.r + &self.t_r {
            out.push("p + 1 - t_r != r".into());
        }
        let m = self.modulus();
        if m.is_square(&m.from_i64(self.beta)) {
            out.push(format!("beta = {} is a square mod p", self.beta));
        }
        if self.s != BigInt::from(self.t) * 6 + 2 {
            out.push("s != 6t + 2".into());
        }
        let s_abs = BigInt::from_biguint(Sign::Plus, self.s.abs().to_biguint().unwrap_or_default());
        if digits_value(&self.s_naf) != s_abs {
            out.push("NAF digits do not sum to |s|".into());
        }
        if self.s_naf.windows(2).any(|w| w[0] != 0 && w[1] != 0) {
            out.push("NAF digits are adjacent".into());
        }
        if digits_value(&self.loop_digits) != s_abs {
            out.push("loop digits do not sum to |s|".into());
        }
        let c = self.ctx();
        if self.g1_gen.infinity || !g1_is_on_curve(m, &self.g1_gen, &self.b_fe()) {
            out.push("G1 generator is not a finite curve point".into());
        } else if !g1_mul(m, &self.g1_gen, &self.r).infinity {
            out.push("r * G1 != O".into());
        }
        if self.g2_gen.infinity || !c.g2_affine_is_on_curve(&self.g2_gen, &self.b_twist) {
            out.push("G2 generator is not a finite twist point".into());
        } else if !c.g2_mul(&c.g2_from_affine(&self.g2_gen), &self.r).is_infinity() {
            out.push("r * G2 != O".into());
        }
        out
    }

    pub fn to_json(&self) -> ParamsJson {
        let m = self.modulus();
        let hex_int = |x: &BigUint| format!("{:0>64}", x.to_str_radix(16));
        let fp2 = |x: &Fp2| [m.encode_hex(&x.c0), m.encode_hex(&x.c1)];
        let frob = (1..=3)
            .map(|k| (0..6).map(|i| fp2(&self.tower.frobenius_constant(k, i))).collect())
            .collect();
        ParamsJson {
            schema_version: SCHEMA_VERSION,
            id: self.id(),
            t: self.t.to_string(),
            b: self.b,
            beta: self.beta,
            xi0: self.xi0(),
            twist: self.twist,
            p: hex_int(&self.p),
            r: hex_int(&self.r),
            t_r: self.t_r.to_str_radix(16),
            s: self.s.to_string(),
            s_naf: self.s_naf.clone(),
            p_bits: self.p.bits(),
            r_bits: self.r.bits(),
            montgomery: MontgomeryJson {
                limbs: 8,
                p_prime_inv: format!("{:08x}", m.p_prime_inv()),
                r_mod_p: raw_hex(&m.r_mod_p()),
                r2_mod_p: raw_hex(&m.r2_mod_p()),
            },
            frobenius_constants: frob,
            g1: PointJson::g1(self, &self.g1_gen),
            g2: PointJson::g2(self, &self.g2_gen),
            g2_cofactor: self.g2_cofactor.to_str_radix(16),
            warnings: self.warnings.clone(),
        }
    }

    /// Rebuilds parameters from an exported file and checks that every
    /// constant in it agrees with a fresh derivation.
    pub fn from_json(j: &ParamsJson) -> Result<BnParams> {
        if j.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(vec![format!("unsupported schema_version {}", j.schema_version)]));
        }
        let t: i64 = j.t.parse().map_err(|_| Error::InvalidArgument(format!("bad t: {}", j.t)))?;
        let params = derive_params_with(t, DeriveOptions { b: Some(j.b), beta: Some(j.beta), xi0: Some(j.xi0) })?;
        let fresh = params.to_json();
        let mut diffs = Vec::new();
        if fresh.p != j.p {
            diffs.push("p");
        }
        if fresh.r != j.r {
            diffs.push("r");
        }
        if fresh.frobenius_constants != j.frobenius_constants {
            diffs.push("frobenius_constants");
        }
        if fresh.g1 != j.g1 {
            diffs.push("g1");
        }
        if fresh.g2 != j.g2 {
            diffs.push("g2");
        }
        if fresh.twist != j.twist {
            diffs.push("twist");
        }
        if !diffs.is_empty() {
            return Err(Error::Validation(diffs.iter().map(|d| format!("{d} does not match derivation")).collect()));
        }
        Ok(params)
    }
}

/// Hex of the stored limbs, without leaving the Montgomery domain.
fn raw_hex(a: &crate::fp::FpElement) -> String {
    a.limbs().iter().rev().map(|l| format!("{l:08x}")).collect()
}

/// Raw limb values, not field elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontgomeryJson {
    pub limbs: u32,
    pub p_prime_inv: String,
    pub r_mod_p: String,
    pub r2_mod_p: String,
}

/// Hex coordinates. G1 uses `x`, `y` with one element each; G2 uses two
/// elements (`c0`, `c1`) per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub infinity: bool,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl PointJson {
    pub fn g1(params: &BnParams, p: &G1Point) -> PointJson {
        let m = params.modulus();
        if p.infinity {
            return PointJson { infinity: true, x: vec![], y: vec![] };
        }
        PointJson { infinity: false, x: vec![m.encode_hex(&p.x)], y: vec![m.encode_hex(&p.y)] }
    }

    pub fn g2(params: &BnParams, q: &G2Affine) -> PointJson {
        let m = params.modulus();
        if q.infinity {
            return PointJson { infinity: true, x: vec![], y: vec![] };
        }
        PointJson {
            infinity: false,
            x: vec![m.encode_hex(&q.x.c0), m.encode_hex(&q.x.c1)],
            y: vec![m.encode_hex(&q.y.c0), m.encode_hex(&q.y.c1)],
        }
    }

    /// Decodes without any curve or subgroup check.
    pub fn to_g1(&self, params: &BnParams) -> Result<G1Point> {
        if self.infinity {
            return Ok(G1Point::INFINITY);
        }
        let m = params.modulus();
        match (self.x.as_slice(), self.y.as_slice()) {
            ([x], [y]) => Ok(G1Point::new(m.decode_hex(x)?, m.decode_hex(y)?)),
            _ => Err(Error::InvalidArgument("G1 point needs one x and one y element".into())),
        }
    }

    pub fn to_g2(&self, params: &BnParams) -> Result<G2Affine> {
        if self.infinity {
            return Ok(G2Affine::INFINITY);
        }
        let m = params.modulus();
        match (self.x.as_slice(), self.y.as_slice()) {
            ([x0, x1], [y0, y1]) => Ok(G2Affine::new(
                Fp2::new(m.decode_hex(x0)?, m.decode_hex(x1)?),
                Fp2::new(m.decode_hex(y0)?, m.decode_hex(y1)?),
            )),
            _ => Err(Error::InvalidArgument("G2 point needs two x and two y elements".into())),
        }
    }
}

/// On-disk form of [`BnParams`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub schema_version: u32,
    pub id: String,
    /// Decimal, since it may not fit a JSON number exactly.
    pub t: String,
    pub b: i64,
    pub beta: i64,
    pub xi0: u64,
    pub twist: TwistType,
    pub p: String,
    pub r: String,
    pub t_r: String,
    pub s: String,
    pub s_naf: Vec<i8>,
    pub p_bits: u64,
    pub r_bits: u64,
    pub montgomery: MontgomeryJson,
    /// `[k−1][i] = ξ^(i·(p^k − 1)/6)` as `[c0, c1]` hex pairs.
    pub frobenius_constants: Vec<Vec<[String; 2]>>,
    pub g1: PointJson,
    pub g2: PointJson,
    pub g2_cofactor: String,
    pub warnings: Vec<String>,
}
