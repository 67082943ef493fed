//! Symbolic costs of the kernels a hardware design executes as a unit.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::counter::Op;
use super::cycles::Constants;
use crate::error::{Error, Result};

/// The two KARATSUBA-based designs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Design {
    /// One MicroBlaze driving the KARATSUBA IP.
    #[serde(rename = "Mb/KARATSUBA")]
    Mb,
    /// Master and slave MicroBlaze linked by FSL, slave driving the IP.
    #[serde(rename = "2Mb/KARATSUBA")]
    TwoMb,
}

impl Design {
    pub const ALL: [Design; 2] = [Design::Mb, Design::TwoMb];

    pub fn name(self) -> &'static str {
        match self {
            Design::Mb => "Mb/KARATSUBA",
            Design::TwoMb => "2Mb/KARATSUBA",
        }
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Design {
    type Err = Error;
    fn from_str(s: &str) -> Result<Design> {
        match s {
            "Mb/KARATSUBA" | "mb" | "karatsuba" => Ok(Design::Mb),
            "2Mb/KARATSUBA" | "2mb" => Ok(Design::TwoMb),
            _ => Err(Error::Unknown { kind: "design", name: s.to_string() }),
        }
    }
}

/// Kernels with a fixed decomposition, in listing order.
pub const KERNELS: &[Op] = &[Op::Fp6Mul, Op::Fp12Mul, Op::CyclotomicSqr, Op::SparseMul, Op::DoublingStep];

/// Cost terms on the critical path of one kernel call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Recipe {
    pub karatsuba: u32,
    pub add: u32,
    pub red: u32,
    pub transfers: u32,
}

impl Recipe {
    const fn new(karatsuba: u32, add: u32, red: u32, transfers: u32) -> Recipe {
        Recipe { karatsuba, add, red, transfers }
    }

    pub fn cycles(&self, k: &Constants) -> u64 {
        self.karatsuba as u64 * k.karatsuba_with_transfer
            + self.add as u64 * k.fp2_add_soft
            + self.red as u64 * k.fp2_red
            + self.transfers as u64 * k.fsl_t
    }

    pub fn expression(&self) -> String {
        let mut terms = Vec::new();
        match self.karatsuba {
            0 => {}
            1 => terms.push("Karatsuba".to_string()),
            n => terms.push(format!("{n} Karatsuba")),
        }
        if self.add > 0 {
            terms.push(format!("{} add soft F_{{p^2}}", self.add));
        }
        if self.red > 0 {
            terms.push(format!("{} red F_{{p^2}}", self.red));
        }
        if self.transfers > 0 {
            terms.push(format!("{} transfert FSL", self.transfers));
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expression())
    }
}

// On the dual design the Karatsuba term counts only the products the master
// has to wait for; the rest overlap with its additions.
const RECIPES: &[(Op, Recipe, Recipe)] = &[
    (Op::Fp6Mul, Recipe::new(6, 15, 2, 0), Recipe::new(1, 14, 0, 21)),
    (Op::Fp12Mul, Recipe::new(18, 60, 7, 0), Recipe::new(1, 51, 0, 68)),
    (Op::CyclotomicSqr, Recipe::new(6, 39, 6, 0), Recipe::new(1, 27, 0, 27)),
    (Op::SparseMul, Recipe::new(14, 28, 3, 0), Recipe::new(8, 20, 0, 34)),
    (Op::DoublingStep, Recipe::new(13, 24, 0, 0), Recipe::new(1, 24, 0, 25)),
];

pub fn recipe(op: Op, design: Design) -> Result<Recipe> {
    RECIPES
        .iter()
        .find(|(o, _, _)| *o == op)
        .map(|(_, mb, two)| match design {
            Design::Mb => *mb,
            Design::TwoMb => *two,
        })
        .ok_or_else(|| Error::Unknown { kind: "kernel", name: op.symbol().to_string() })
}

/// The cost expression of `function_id` on `design`, e.g.
/// `"Karatsuba + 14 add soft F_{p^2} + 21 transfert FSL"` for `fp6_mul` on
/// the dual design.
pub fn compose_symbolic(function_id: &str, design: Design) -> Result<String> {
    let op = Op::from_symbol(function_id)
        .filter(|op| KERNELS.contains(op))
        .ok_or_else(|| Error::Unknown { kind: "kernel", name: function_id.to_string() })?;
    Ok(recipe(op, design)?.expression())
}
