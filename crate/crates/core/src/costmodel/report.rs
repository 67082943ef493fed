//! Cost reports for the command line.

use serde::Serialize;

use super::counter::{Level, Op, OpCounts};
use super::cycles::{cycles_to_ms, predict_cycles, CycleModel, Profile};
use super::efficiency::efficiency;
use super::symbolic::{recipe, Design, KERNELS};
use super::measure;
use crate::error::Result;
use crate::params::BnParams;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Width of the operands the designs process, in bits.
pub const DATAPATH_BITS: u32 = 256;

#[derive(Clone, Debug, Serialize)]
pub struct CostReport {
    pub schema_version: u32,
    pub params_id: String,
    pub profile: Profile,
    pub design: &'static str,
    pub function: String,
    pub symbolic: Option<String>,
    pub counts: OpCounts,
    pub predicted_cycles: u64,
    pub freq_mhz: f64,
    pub predicted_ms: f64,
    pub fsl_transfers: Option<u64>,
    pub efficiency: Option<f64>,
}

fn design_of(profile: Profile) -> Option<Design> {
    match profile {
        Profile::Karatsuba => Some(Design::Mb),
        Profile::TwoMb => Some(Design::TwoMb),
        Profile::Sw | Profile::Mmm => None,
    }
}

/// FSL words the dual design moves for `counts`.
pub fn fsl_transfers(counts: &OpCounts) -> u64 {
    KERNELS
        .iter()
        .map(|&op| counts.priced(op, Level::Kernel) * recipe(op, Design::TwoMb).map_or(0, |r| r.transfers as u64))
        .sum()
}

pub fn cost_report(
    params: &BnParams,
    model: &CycleModel,
    profile: Profile,
    function_id: &str,
    seed: u64,
) -> Result<CostReport> {
    let counts = measure(params, function_id, seed)?;
    let pm = model.profile(profile)?;
    let predicted_cycles = predict_cycles(&counts, model, profile)?;
    let predicted_ms = cycles_to_ms(predicted_cycles, pm);
    let symbolic = match (design_of(profile), Op::from_symbol(function_id)) {
        (Some(d), Some(op)) if KERNELS.contains(&op) => Some(recipe(op, d)?.expression()),
        _ => None,
    };
    let efficiency = if function_id == "pairing" {
        Some(efficiency(DATAPATH_BITS, &pm.area, predicted_ms / 1e3)?)
    } else {
        None
    };
    Ok(CostReport {
        schema_version: REPORT_SCHEMA_VERSION,
        params_id: params.id(),
        profile,
        design: profile.design_name(),
        function: function_id.to_string(),
        symbolic,
        counts,
        predicted_cycles,
        freq_mhz: pm.freq_mhz,
        predicted_ms,
        fsl_transfers: (profile == Profile::TwoMb).then(|| fsl_transfers(&counts)),
        efficiency,
    })
}

impl CostReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header plus one row; one column per operation symbol.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "profile",
            "design",
            "function",
            "predicted_cycles",
            "freq_mhz",
            "predicted_ms",
            "efficiency",
            "fsl_transfers",
            "symbolic",
        ];
        header.extend(Op::ALL.iter().map(|op| op.symbol()));
        w.write_record(&header).map_err(csv_err)?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut row = vec![
            self.profile.to_string(),
            self.design.to_string(),
            self.function.clone(),
            self.predicted_cycles.to_string(),
            self.freq_mhz.to_string(),
            format!("{:.3}", self.predicted_ms),
            opt(self.efficiency.map(|e| format!("{e:.4}"))),
            opt(self.fsl_transfers.map(|t| t.to_string())),
            opt(self.symbolic.clone()),
        ];
        row.extend(Op::ALL.iter().map(|&op| self.counts.get(op).to_string()));
        w.write_record(&row).map_err(csv_err)?;
        let bytes = w.into_inner().map_err(|e| crate::error::Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::InvalidArgument(e.to_string())
}
