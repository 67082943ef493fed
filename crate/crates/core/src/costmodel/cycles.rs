//! Cycle prediction for the four hardware/software designs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::counter::{Level, Op, OpCounts};
use super::symbolic::{recipe, Design, KERNELS};
use crate::error::{Error, Result};
use crate::params::{bn_polynomials, REFERENCE_T};

pub const CONFIG_VERSION: u32 = 1;

/// Target architectures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Profile {
    #[serde(rename = "sw")]
    Sw,
    #[serde(rename = "mmm")]
    Mmm,
    #[serde(rename = "karatsuba")]
    Karatsuba,
    #[serde(rename = "2mb")]
    TwoMb,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::Sw, Profile::Mmm, Profile::Karatsuba, Profile::TwoMb];

    pub fn id(self) -> &'static str {
        match self {
            Profile::Sw => "sw",
            Profile::Mmm => "mmm",
            Profile::Karatsuba => "karatsuba",
            Profile::TwoMb => "2mb",
        }
    }

    pub fn design_name(self) -> &'static str {
        match self {
            Profile::Sw => "SW Mb",
            Profile::Mmm => "SW/HW Mb/MMM",
            Profile::Karatsuba => "SW/HW Mb/KARATSUBA",
            Profile::TwoMb => "SW/HW 2Mb/KARATSUBA",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Profile> {
        Profile::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::Unknown { kind: "architecture", name: s.to_string() })
    }
}

/// FPGA resources of a complete design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Area {
    pub slices: u32,
    pub dsp: u32,
    pub bram: u32,
}

/// Cost table for one architecture.
///
/// `level` is the coarsest operation the design executes as a unit. Work
/// nested inside a priced operation is covered by that operation's cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileModel {
    pub freq_mhz: f64,
    pub area: Area,
    pub level: Level,
    pub costs: BTreeMap<String, u64>,
}

impl ProfileModel {
    pub fn cost(&self, op: Op) -> Option<u64> {
        self.costs.get(op.symbol()).copied()
    }

    /// Operations this profile must price.
    pub fn priced_ops(&self) -> impl Iterator<Item = Op> + '_ {
        Op::ALL.iter().copied().filter(move |op| op.level() <= self.level)
    }
}

/// Measured building-block costs, in cycles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// ADD/SUB IP core, processing only.
    pub addsub_ip: u64,
    /// MMM IP core, processing only.
    pub mmm_ip: u64,
    /// KARATSUBA IP core, processing only.
    pub karatsuba_ip: u64,
    /// Bus transfers around one KARATSUBA call.
    pub karatsuba_transfer: u64,
    /// One F_p² multiplication through the KARATSUBA IP.
    pub karatsuba_with_transfer: u64,
    pub fp2_add_soft: u64,
    /// F_p² reduction (multiplication by ξ) through the KARATSUBA IP.
    pub fp2_red: u64,
    pub fp_mul_soft: u64,
    pub fp_mul_mmm_ip: u64,
    pub fp2_mul_soft: u64,
    /// One FSL word sent by the master.
    pub fsl_t: u64,
    /// One FSL word received by the master.
    pub fsl_r: u64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            addsub_ip: 10,
            mmm_ip: 130,
            karatsuba_ip: 550,
            karatsuba_transfer: 690,
            karatsuba_with_transfer: 1240,
            fp2_add_soft: 636,
            fp2_red: 590,
            fp_mul_soft: 12968,
            fp_mul_mmm_ip: 475,
            fp2_mul_soft: 53942,
            fsl_t: super::schedule::DEFAULT_FSL_COST,
            fsl_r: super::schedule::DEFAULT_FSL_COST,
        }
    }
}

/// Versioned cost configuration for all profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleModel {
    pub version: u32,
    pub constants: Constants,
    pub profiles: BTreeMap<Profile, ProfileModel>,
}

/// Squarings plus multiplications in the Fermat inversion `a^(p-2)` for the
/// reference modulus.
fn fermat_steps() -> u64 {
    let (p, _, _) = bn_polynomials(REFERENCE_T);
    let e: num_bigint::BigInt = p - 2;
    let bits = e.bits();
    let ones: u64 = e.iter_u64_digits().map(|d| d.count_ones() as u64).sum();
    (bits - 1) + (ones - 1)
}

fn costs(entries: &[(Op, u64)]) -> BTreeMap<String, u64> {
    entries.iter().map(|(op, c)| (op.symbol().to_string(), *c)).collect()
}

impl Default for CycleModel {
    fn default() -> Self {
        CycleModel::from_constants(Constants::default())
    }
}

impl CycleModel {
    /// Derives every profile's cost table from the building-block constants.
    pub fn from_constants(k: Constants) -> CycleModel {
        let inv_steps = fermat_steps();
        let a_soft = k.fp2_add_soft / 2;

        // software: the constant multiplication absorbs what remains of a
        // measured F_p² product after its three products and five additions
        let m_beta_soft = k.fp2_mul_soft - 3 * k.fp_mul_soft - 5 * a_soft;
        let sw = costs(&[
            (Op::FpAdd, a_soft),
            (Op::FpMul, k.fp_mul_soft),
            (Op::FpSqr, k.fp_mul_soft),
            (Op::FpMulBeta, m_beta_soft),
            (Op::FpInv, inv_steps * k.fp_mul_soft),
        ]);

        let mmm = costs(&[
            (Op::FpAdd, a_soft),
            (Op::FpMul, k.fp_mul_mmm_ip),
            (Op::FpSqr, k.fp_mul_mmm_ip),
            (Op::FpMulBeta, k.fp_mul_mmm_ip),
            (Op::FpInv, inv_steps * k.fp_mul_mmm_ip),
        ]);

        // one IP call multiplies an F_p² element by an F_p scalar, which the
        // counter records as two base-field products
        let fp_ip = k.karatsuba_with_transfer / 2;
        let mut kara = costs(&[
            (Op::FpAdd, a_soft),
            (Op::FpMul, fp_ip),
            (Op::FpSqr, fp_ip),
            (Op::FpMulBeta, fp_ip),
            (Op::FpInv, inv_steps * fp_ip),
            (Op::Fp2Add, k.fp2_add_soft),
            (Op::Fp2Mul, k.karatsuba_with_transfer),
            (Op::Fp2Sqr, k.karatsuba_with_transfer),
            (Op::Fp2MulXi, k.fp2_red),
        ]);
        // 4m + m_beta + 2a + i around the IP
        let i2 = 5 * fp_ip + 2 * a_soft + inv_steps * fp_ip;
        kara.insert(Op::Fp2Inv.symbol().to_string(), i2);

        let mut two_mb = kara.clone();
        for &op in KERNELS {
            let r = recipe(op, Design::TwoMb).expect("every kernel has a dual-processor recipe");
            two_mb.insert(op.symbol().to_string(), r.cycles(&k));
        }

        let profile = |freq_mhz, slices, dsp, bram, level, costs| ProfileModel {
            freq_mhz,
            area: Area { slices, dsp, bram },
            level,
            costs,
        };
        let mut profiles = BTreeMap::new();
        profiles.insert(Profile::Sw, profile(125.0, 1063, 3, 32, Level::Fp, sw));
        profiles.insert(Profile::Mmm, profile(100.0, 1558, 11, 35, Level::Fp, mmm));
        profiles.insert(Profile::Karatsuba, profile(100.0, 2045, 17, 38, Level::Fp2, kara));
        profiles.insert(Profile::TwoMb, profile(100.0, 3108, 20, 42, Level::Kernel, two_mb));
        CycleModel { version: CONFIG_VERSION, constants: k, profiles }
    }

    pub fn profile(&self, p: Profile) -> Result<&ProfileModel> {
        self.profiles.get(&p).ok_or_else(|| Error::Unknown { kind: "profile", name: p.to_string() })
    }

    /// Checks the version and that every profile prices every operation it
    /// needs with a positive cost.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::InvalidArgument(format!(
                "cycle model version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        for (p, pm) in &self.profiles {
            if pm.level == Level::Composite {
                return Err(Error::InvalidArgument(format!("profile {p}: composite operations cannot be priced")));
            }
            if pm.freq_mhz.is_nan() || pm.freq_mhz <= 0.0 {
                return Err(Error::InvalidArgument(format!("profile {p}: frequency must be positive")));
            }
            for op in pm.priced_ops() {
                match pm.cost(op) {
                    None => return Err(Error::MissingCost { profile: p.to_string(), op: op.symbol().to_string() }),
                    Some(0) => {
                        return Err(Error::InvalidArgument(format!("profile {p}: zero cost for {}", op.symbol())))
                    }
                    Some(_) => {}
                }
            }
            for name in pm.costs.keys() {
                if Op::from_symbol(name).is_none() {
                    return Err(Error::Unknown { kind: "operation", name: name.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<CycleModel> {
        let m: CycleModel = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle model serializes")
    }
}

/// Cycles for `counts` under `profile`: a dot product of the counts the
/// profile prices with its per-operation costs.
pub fn predict_cycles(counts: &OpCounts, model: &CycleModel, profile: Profile) -> Result<u64> {
    let pm = model.profile(profile)?;
    let mut total = 0u64;
    for op in pm.priced_ops() {
        let n = counts.priced(op, pm.level);
        if n == 0 {
            continue;
        }
        let cost = pm
            .cost(op)
            .ok_or_else(|| Error::MissingCost { profile: profile.to_string(), op: op.symbol().to_string() })?;
        total += n * cost;
    }
    Ok(total)
}

/// Milliseconds at the profile's clock.
pub fn cycles_to_ms(cycles: u64, pm: &ProfileModel) -> f64 {
    cycles as f64 / (pm.freq_mhz * 1e3)
}
