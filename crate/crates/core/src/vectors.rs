//! Seeded test-vector files: generation and replay.

use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{g1_mul, G1Point, G2Affine};
use crate::error::{Error, Result};
use crate::fp::PrimeModulus;
use crate::pairing::{final_exponentiation, miller_loop, optimal_ate};
use crate::params::{BnParams, PointJson};
use crate::tower::Fp12;

pub const VECTOR_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorEntry {
    #[serde(rename = "P")]
    pub p: PointJson,
    #[serde(rename = "Q")]
    pub q: PointJson,
    /// `P = a·G1`, hex.
    pub a: String,
    /// `Q = b·G2`, hex.
    pub b: String,
    pub miller_output: Vec<String>,
    pub pairing_output: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFile {
    pub schema_version: u32,
    pub params_id: String,
    pub entries: Vec<VectorEntry>,
}

/// The twelve base-field coefficients, in storage order.
pub fn fp12_to_hex(m: &PrimeModulus, f: &Fp12) -> Vec<String> {
    f.to_fp_array().iter().map(|x| m.encode_hex(x)).collect()
}

pub fn fp12_from_hex(m: &PrimeModulus, hex: &[String]) -> Result<Fp12> {
    if hex.len() != 12 {
        return Err(Error::InvalidArgument(format!("F_p12 element needs 12 coefficients, got {}", hex.len())));
    }
    let mut a = [crate::fp::FpElement::ZERO; 12];
    for (slot, h) in a.iter_mut().zip(hex) {
        *slot = m.decode_hex(h)?;
    }
    Ok(Fp12::from_fp_array(&a))
}

fn parse_scalar(s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| Error::MalformedHex(s.to_string()))
}

fn points(params: &BnParams, a: &BigUint, b: &BigUint) -> (G1Point, G2Affine) {
    let c = params.ctx();
    let p = g1_mul(params.modulus(), &params.g1_gen, a);
    let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&params.g2_gen), b));
    (p, q)
}

/// `count` entries from scalars drawn with `seed`.
pub fn generate(params: &BnParams, count: usize, seed: u64) -> Result<VectorFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = params.modulus();
    let c = params.ctx();
    let one = BigUint::from(1u32);
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let a = rng.gen_biguint_range(&one, &params.r);
        let b = rng.gen_biguint_range(&one, &params.r);
        let (p, q) = points(params, &a, &b);
        let f = miller_loop(&c, params, &p, &q)?;
        let e = final_exponentiation(&c, params, &f)?;
        entries.push(VectorEntry {
            p: PointJson::g1(params, &p),
            q: PointJson::g2(params, &q),
            a: a.to_str_radix(16),
            b: b.to_str_radix(16),
            miller_output: fp12_to_hex(m, &f),
            pairing_output: fp12_to_hex(m, &e),
        });
    }
    Ok(VectorFile { schema_version: VECTOR_SCHEMA_VERSION, params_id: params.id(), entries })
}

/// Recomputes every entry. Returns one message per mismatch.
pub fn verify(params: &BnParams, file: &VectorFile) -> Result<Vec<String>> {
    if file.schema_version != VECTOR_SCHEMA_VERSION {
        return Err(Error::InvalidArgument(format!("unsupported vector schema {}", file.schema_version)));
    }
    if file.params_id != params.id() {
        return Err(Error::InvalidArgument(format!(
            "vectors were made for {}, not {}",
            file.params_id,
            params.id()
        )));
    }
    let m = params.modulus();
    let c = params.ctx();
    let base = optimal_ate(params, &params.g1_gen, &params.g2_gen)?.value;
    let mut problems = Vec::new();
    for (i, e) in file.entries.iter().enumerate() {
        let p = e.p.to_g1(params)?;
        let q = e.q.to_g2(params)?;
        let (a, b) = (parse_scalar(&e.a)?, parse_scalar(&e.b)?);
        if (p, q) != points(params, &a, &b) {
            problems.push(format!("entry {i}: points do not match the scalars"));
        }
        let f = miller_loop(&c, params, &p, &q)?;
        if fp12_to_hex(m, &f) != e.miller_output {
            problems.push(format!("entry {i}: Miller output differs"));
        }
        let v = optimal_ate(params, &p, &q)?.value;
        if fp12_to_hex(m, &v) != e.pairing_output {
            problems.push(format!("entry {i}: pairing output differs"));
        }
        if v != c.fp12_pow(&base, &(&a * &b)) {
            problems.push(format!("entry {i}: e(aG1, bG2) != e(G1, G2)^(ab)"));
        }
    }
    Ok(problems)
}
