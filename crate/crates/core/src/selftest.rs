//! Built-in consistency checks, run by `optate selftest`.

use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::costmodel::cycles::{predict_cycles, CycleModel, Profile};
use crate::costmodel::schedule::{simulate_dual_schedule, Processor};
use crate::costmodel::{measure, Op, OpCounts};
use crate::curve::g1_mul;
use crate::error::{Error, Result};
use crate::pairing::{easy_part, hard_exponent, hard_part, optimal_ate};
use crate::params::{derive_params, digits_value, reference_params, BnParams};
use crate::tower::{Fp12, Fp2, Fp6, SparseLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Level> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::Unknown { kind: "selftest level", name: s.to_string() }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Outcome = Result<std::result::Result<String, String>>;

fn ensure(ok: bool, fail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(fail())
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn parameters(tiny: &BnParams, reference: &BnParams) -> Outcome {
    Ok((|| {
        ensure(tiny.p == BigUint::from(103u32) && tiny.r == BigUint::from(97u32), || "t = 1 gives wrong p, r".into())?;
        for p in [tiny, reference] {
            let v = p.validate();
            ensure(v.is_empty(), || format!("{}: {}", p.id(), v.join("; ")))?;
        }
        Ok("t = 1 and reference curve validate".into())
    })())
}

fn montgomery(reference: &BnParams, n: usize) -> Outcome {
    let m = reference.modulus();
    let p = &reference.p;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let edge: Vec<BigUint> = [0u32, 1, 2].iter().map(|&v| BigUint::from(v)).chain([p - 2u32, p - 1u32]).collect();
    let mut pairs: Vec<(BigUint, BigUint)> =
        edge.iter().flat_map(|a| edge.iter().map(move |b| (a.clone(), b.clone()))).collect();
    pairs.extend((0..n).map(|_| (rng.gen_biguint_below(p), rng.gen_biguint_below(p))));
    for (a, b) in &pairs {
        let got = m.from_mont(&m.mont_mul(&m.to_mont(a)?, &m.to_mont(b)?));
        if got != (a * b) % p {
            return Ok(Err(format!("mont_mul({a:x}, {b:x}) = {got:x}")));
        }
    }
    Ok(Ok(format!("{} products agree with integer arithmetic", pairs.len())))
}

fn tower(params: &BnParams, n: usize) -> Outcome {
    let t = &params.tower;
    let c = params.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..n {
        let (a, b, d) = (Fp2::random(t, &mut rng), Fp2::random(t, &mut rng), Fp2::random(t, &mut rng));
        let lhs = c.fp2_mul(&a, &c.fp2_add(&b, &d));
        if lhs != c.fp2_add(&c.fp2_mul(&a, &b), &c.fp2_mul(&a, &d)) || c.fp2_sqr(&a) != c.fp2_mul(&a, &a) {
            return Ok(Err("F_p2 arithmetic inconsistent".into()));
        }
        let (x, y) = (Fp6::random(t, &mut rng), Fp6::random(t, &mut rng));
        if c.fp6_sqr(&x) != c.fp6_mul(&x, &x) || c.fp6_mul(&x, &y) != c.fp6_mul(&y, &x) {
            return Ok(Err("F_p6 arithmetic inconsistent".into()));
        }
        let f = Fp12::random(t, &mut rng);
        if !f.is_zero() && c.fp12_mul(&f, &c.fp12_inv(&f)?) != Fp12::one(t) {
            return Ok(Err("F_p12 inverse wrong".into()));
        }
        if c.fp12_sqr(&f) != c.fp12_mul(&f, &f) {
            return Ok(Err("F_p12 squaring wrong".into()));
        }
        let l = SparseLine { a, b, c: d };
        if c.sparse_mul(&f, &l) != c.fp12_mul(&f, &l.embed()) {
            return Ok(Err("sparse multiplication wrong".into()));
        }
        if c.frobenius_p(&f) != c.fp12_pow(&f, &params.p) {
            return Ok(Err("Frobenius wrong".into()));
        }
        let m = easy_part(&c, &f)?;
        if c.cyclotomic_sqr(&m) != c.fp12_sqr(&m) {
            return Ok(Err("cyclotomic squaring wrong".into()));
        }
    }
    Ok(Ok(format!("{n} random cases on {}", params.id())))
}

/// Table of expected `(m2, s2, m_xi, a2)` per call, or Fp-level for F_p2.
fn operation_counts(reference: &BnParams) -> Outcome {
    let k = |f: &str| measure(reference, f, 1);
    let fp = |c: &OpCounts| (c.get(Op::FpMul), c.get(Op::FpMulBeta), c.get(Op::FpAdd));
    let fp2 = |c: &OpCounts| (c.get(Op::Fp2Mul) + c.get(Op::Fp2Sqr), c.get(Op::Fp2MulXi), c.get(Op::Fp2Add));
    type Triple = (u64, u64, u64);
    let checks: Vec<(&str, Triple, Triple)> = vec![
        ("fp2_mul", fp(&k("fp2_mul")?), (3, 1, 5)),
        ("fp2_sqr", fp(&k("fp2_sqr")?), (2, 2, 5)),
        ("fp6_mul", fp2(&k("fp6_mul")?), (6, 2, 15)),
        ("fp12_mul", fp2(&k("fp12_mul")?), (18, 7, 60)),
        ("fp12_sqr", fp2(&k("fp12_sqr")?), (12, 6, 45)),
        ("cyclotomic_sqr", fp2(&k("cyclotomic_sqr")?), (6, 6, 39)),
    ];
    for (name, got, want) in checks {
        if got != want {
            return Ok(Err(format!("{name}: counted {got:?}, expected {want:?}")));
        }
    }
    Ok(Ok("per-call counts match the reference table".into()))
}

fn bilinearity(params: &BnParams, n: usize, seed: u64) -> Outcome {
    let c = params.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::from(1u32);
    let base = optimal_ate(params, &params.g1_gen, &params.g2_gen)?.value;
    if base == Fp12::one(&params.tower) || c.fp12_pow(&base, &params.r) != Fp12::one(&params.tower) {
        return Ok(Err("e(G1, G2) is not a nontrivial r-th root of unity".into()));
    }
    for _ in 0..n {
        let a = rng.gen_biguint_range(&one, &params.r);
        let b = rng.gen_biguint_range(&one, &params.r);
        let p = g1_mul(params.modulus(), &params.g1_gen, &a);
        let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&params.g2_gen), &b));
        if optimal_ate(params, &p, &q)?.value != c.fp12_pow(&base, &(&a * &b)) {
            return Ok(Err(format!("e(aP, bQ) != e(P, Q)^(ab) for a = {a:x}, b = {b:x}")));
        }
    }
    Ok(Ok(format!("{n} scalar pairs on {}", params.id())))
}

fn final_exponent_chain(reference: &BnParams, n: usize) -> Outcome {
    let c = reference.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let e = hard_exponent(reference);
    for _ in 0..n {
        let m = easy_part(&c, &Fp12::random(&reference.tower, &mut rng))?;
        if hard_part(&c, reference, &m) != c.fp12_pow(&m, &e) {
            return Ok(Err("hard part differs from direct exponentiation".into()));
        }
    }
    Ok(Ok(format!("{n} cyclotomic inputs")))
}

fn cost_model() -> Outcome {
    let model = CycleModel::default();
    model.validate()?;
    let tr = simulate_dual_schedule("fp6_mul", &model.constants)?;
    let shape = (tr.karatsuba_tasks(Processor::Slave), tr.add_tasks(Processor::Master), tr.transfer_words());
    if shape != (6, 14, 21) {
        return Ok(Err(format!("fp6_mul schedule has shape {shape:?}")));
    }
    let mut one = OpCounts::new();
    one.record(Op::Fp2Mul, 0, 1);
    let kara = predict_cycles(&one, &model, Profile::Karatsuba)?;
    if kara != 1240 {
        return Ok(Err(format!("F_p2 product costs {kara} cycles")));
    }
    Ok(Ok(format!(
        "fp6_mul utilization {:.2}% / {:.2}%",
        tr.master_utilization, tr.slave_utilization
    )))
}

fn loop_recoding(reference: &BnParams) -> Outcome {
    let d = &reference.s_naf;
    let ok_value = digits_value(d) == reference.s.abs();
    let ok_adjacent = d.windows(2).all(|w| w[0] == 0 || w[1] == 0);
    Ok(if ok_value && ok_adjacent {
        Ok(format!("NAF of 6t + 2 has {} digits, {} nonzero", d.len(), d.iter().filter(|&&x| x != 0).count()))
    } else {
        Err("NAF of 6t + 2 is wrong".into())
    })
}

pub fn run_selftest(level: Level) -> Result<Report> {
    let tiny = derive_params(1, 5)?;
    let reference = reference_params()?;
    let (mont, tower_n, pairs, chains) = match level {
        Level::Quick => (1_000, 20, 2, 1),
        Level::Full => (10_000, 1_000, 20, 5),
    };
    let checks = vec![
        run("parameters", || parameters(&tiny, &reference)),
        run("montgomery", || montgomery(&reference, mont)),
        run("tower (t = 1)", || tower(&tiny, tower_n)),
        run("tower", || tower(&reference, tower_n)),
        run("loop recoding", || loop_recoding(&reference)),
        run("operation counts", || operation_counts(&reference)),
        run("bilinearity (t = 1)", || bilinearity(&tiny, 20, 10)),
        run("bilinearity", || bilinearity(&reference, pairs, 11)),
        run("final exponentiation", || final_exponent_chain(&reference, chains)),
        run("cost model", cost_model),
    ];
    Ok(Report { level, checks })
}
