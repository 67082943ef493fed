//! Area-time efficiency: datapath bits per equivalent slice-second.

use super::cycles::Area;
use crate::error::{Error, Result};

/// A DSP48E block spans the height of five CLBs of four slices each, and a
/// block RAM the same.
pub const SLICES_PER_DSP: u64 = 5 * 4;
pub const SLICES_PER_BRAM: u64 = 5 * 4;

pub fn equivalent_slices(area: &Area) -> u64 {
    area.slices as u64 + area.dsp as u64 * SLICES_PER_DSP + area.bram as u64 * SLICES_PER_BRAM
}

/// `datapath / (equivalent_slices × time)`.
pub fn efficiency(datapath_bits: u32, area: &Area, time_s: f64) -> Result<f64> {
    if datapath_bits == 0 || area.slices == 0 {
        return Err(Error::InvalidArgument("datapath and slice count must be positive".into()));
    }
    if !(time_s > 0.0 && time_s.is_finite()) {
        return Err(Error::InvalidArgument(format!("execution time must be positive, got {time_s}")));
    }
    Ok(datapath_bits as f64 / (equivalent_slices(area) as f64 * time_s))
}
