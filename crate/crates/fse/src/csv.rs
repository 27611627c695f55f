//! Sweep CSV: `iteration,psnr_db,weighted_error`, `inf` for infinite PSNR.

use std::io::{self, Write};

use fse_core::SweepRecord;

pub const HEADER: &str = "iteration,psnr_db,weighted_error";

pub fn write_sweep<W: Write>(mut out: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{}", r.iteration, format_db(r.psnr, 4), r.weighted_error)?;
    }
    Ok(())
}

/// Fixed-point dB with `inf` for the identical-image sentinel.
pub fn format_db(db: f64, decimals: usize) -> String {
    if db == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{db:.decimals$}")
    }
}
