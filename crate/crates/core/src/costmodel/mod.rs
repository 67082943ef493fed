//! Operation counting and cycle prediction for the reference designs.

pub mod counter;
pub mod cycles;
pub mod efficiency;
pub mod report;
pub mod schedule;
pub mod symbolic;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use counter::{Level, Op, OpCounter, OpCounts};
pub use cycles::{predict_cycles, CycleModel, Profile};
pub use efficiency::efficiency;
pub use schedule::{simulate_dual_schedule, ScheduleTrace};
pub use symbolic::{compose_symbolic, Design};

use crate::curve::g1_mul;
use crate::error::{Error, Result};
use crate::pairing;
use crate::params::BnParams;
use crate::tower::{Ctx, Fp12, Fp2, Fp6, SparseLine, Tower};

/// Runs `f` with a fresh counting context and returns what it executed.
pub fn with_counting<R>(tower: &Tower, f: impl FnOnce(&Ctx) -> R) -> (R, OpCounts) {
    tower.ctx().counted(|c| f(&c))
}

fn checked<R>((r, counts): (Result<R>, OpCounts)) -> Result<OpCounts> {
    r.map(|_| counts)
}

/// Functions the cost command can measure.
pub const FUNCTIONS: &[&str] = &[
    "fp2_mul",
    "fp2_sqr",
    "fp2_inv",
    "fp6_mul",
    "fp6_sqr",
    "fp6_inv",
    "fp12_mul",
    "fp12_sqr",
    "fp12_inv",
    "cyclotomic_sqr",
    "sparse_mul",
    "doubling_step",
    "addition_step",
    "miller_loop",
    "final_exponentiation",
    "pairing",
];

/// Counts one call of `function_id` on seeded random inputs. Counts do not
/// depend on the inputs.
pub fn measure(params: &BnParams, function_id: &str, seed: u64) -> Result<OpCounts> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = &params.tower;
    let c = params.ctx();
    let fp2 = |rng: &mut ChaCha8Rng| Fp2::random(t, rng);
    let fp6 = |rng: &mut ChaCha8Rng| Fp6::random(t, rng);
    let fp12 = |rng: &mut ChaCha8Rng| Fp12::random(t, rng);
    let nonzero12 = |rng: &mut ChaCha8Rng| loop {
        let f = Fp12::random(t, rng);
        if !f.is_zero() {
            break f;
        }
    };
    let g2 = c.g2_from_affine(&params.g2_gen);
    let p = params.g1_gen;
    let q = params.g2_gen;

    let counts = match function_id {
        "fp2_mul" => {
            let (a, b) = (fp2(&mut rng), fp2(&mut rng));
            with_counting(t, |c| c.fp2_mul(&a, &b)).1
        }
        "fp2_sqr" => {
            let a = fp2(&mut rng);
            with_counting(t, |c| c.fp2_sqr(&a)).1
        }
        "fp2_inv" => {
            let a = loop {
                let a = fp2(&mut rng);
                if !a.is_zero() {
                    break a;
                }
            };
            checked(with_counting(t, |c| c.fp2_inv(&a)))?
        }
        "fp6_mul" => {
            let (a, b) = (fp6(&mut rng), fp6(&mut rng));
            with_counting(t, |c| c.fp6_mul(&a, &b)).1
        }
        "fp6_sqr" => {
            let a = fp6(&mut rng);
            with_counting(t, |c| c.fp6_sqr(&a)).1
        }
        "fp6_inv" => {
            let a = loop {
                let a = fp6(&mut rng);
                if !a.is_zero() {
                    break a;
                }
            };
            checked(with_counting(t, |c| c.fp6_inv(&a)))?
        }
        "fp12_mul" => {
            let (a, b) = (fp12(&mut rng), fp12(&mut rng));
            with_counting(t, |c| c.fp12_mul(&a, &b)).1
        }
        "fp12_sqr" => {
            let a = fp12(&mut rng);
            with_counting(t, |c| c.fp12_sqr(&a)).1
        }
        "fp12_inv" => {
            let a = nonzero12(&mut rng);
            checked(with_counting(t, |c| c.fp12_inv(&a)))?
        }
        "cyclotomic_sqr" => {
            let m = pairing::easy_part(&c, &nonzero12(&mut rng))?;
            with_counting(t, |c| c.cyclotomic_sqr(&m)).1
        }
        "sparse_mul" => {
            let f = fp12(&mut rng);
            let l = SparseLine { a: fp2(&mut rng), b: fp2(&mut rng), c: fp2(&mut rng) };
            with_counting(t, |c| c.sparse_mul(&f, &l)).1
        }
        "doubling_step" => {
            let tp = c.g2_double(&g2);
            checked(with_counting(t, |c| c.doubling_step(&tp, &p)))?
        }
        "addition_step" => {
            let tp = c.g2_double(&g2);
            let addend = c.mixed_addend(&q);
            checked(with_counting(t, |c| c.addition_step(&tp, &addend, &p)))?
        }
        "miller_loop" | "final_exponentiation" | "pairing" => {
            let k = num_bigint::BigUint::from(rand::Rng::gen_range(&mut rng, 1u64..u64::MAX)) % &params.r;
            let k = if k == num_bigint::BigUint::from(0u32) { num_bigint::BigUint::from(1u32) } else { k };
            let p = g1_mul(params.modulus(), &p, &k);
            match function_id {
                "miller_loop" => checked(with_counting(t, |c| pairing::miller_loop(c, params, &p, &q)))?,
                "final_exponentiation" => {
                    let f = pairing::miller_loop(&c, params, &p, &q)?;
                    checked(with_counting(t, |c| pairing::final_exponentiation(c, params, &f)))?
                }
                _ => checked(with_counting(t, |c| pairing::optimal_ate_unchecked(c, params, &p, &q)))?,
            }
        }
        other => return Err(Error::Unknown { kind: "function", name: other.to_string() }),
    };
    Ok(counts)
}
