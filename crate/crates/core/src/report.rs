//! Machine-readable verification records.
//!
//! Two sibling formats over the same measurements: JSON Lines (one
//! object per cell, nested `exponent` / `t_h` / `concentration` blocks)
//! for tooling, and a flat CSV summary (cell id, γ', ω, α*, I, t_H,
//! residual) for plots. Serialization is deterministic — identical
//! inputs produce bit-identical bytes — because field order follows
//! struct order and floats print in shortest round-trip form.
//!
//! Every number in a record is copied from an upstream measurement; the
//! only arithmetic performed here is the band-median aggregation for ω
//! trend scans.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::cell::ExtremalCell;
use crate::error::Result;
use crate::theorem::{ExponentSolution, OmegaEstimate, VerificationReport};

/// The per-cell JSON wire schema.
#[derive(Serialize)]
struct JsonRecord<'a> {
    cell_id: usize,
    generator: &'a str,
    cell: &'a ExtremalCell,
    hat: HatBlock,
    exponent: &'a ExponentSolution,
    t_h: THBlock,
    unit_check: f64,
    concentration: &'a [(f64, f64)],
}

#[derive(Serialize)]
struct HatBlock {
    gamma_lo_hat: f64,
    gamma_hi_hat: f64,
    t0_hat: f64,
}

#[derive(Serialize)]
struct THBlock {
    value: f64,
    residual: f64,
    i_integral: f64,
}

/// Append-only, single-writer collector of per-cell verification
/// records.
#[derive(Debug, Default)]
pub struct ReportCollector {
    records: Vec<(usize, VerificationReport)>,
}

impl ReportCollector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, cell_id: usize, report: VerificationReport) {
        self.records.push((cell_id, report));
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[(usize, VerificationReport)] {
        &self.records
    }

    /// One JSON object per line, in insertion order.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for (cell_id, report) in &self.records {
            let record = JsonRecord {
                cell_id: *cell_id,
                generator: &report.generator,
                cell: &report.hat_cell.cell,
                hat: HatBlock {
                    gamma_lo_hat: report.hat_cell.gamma_lo_hat,
                    gamma_hi_hat: report.hat_cell.gamma_hi_hat,
                    t0_hat: report.hat_cell.t0_hat,
                },
                exponent: &report.exponent,
                t_h: THBlock {
                    value: report.t_h,
                    residual: report.t_h_residual,
                    i_integral: report.i_integral,
                },
                unit_check: report.unit_check,
                concentration: &report.concentration,
            };
            out.push_str(&serde_json::to_string(&record).map_err(std::io::Error::other)?);
            out.push('\n');
        }
        Ok(out)
    }

    /// Flat summary: one row per cell, shortest round-trip floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_id,gamma_lo,omega,alpha_star,i_integral,t_h,t_h_residual\n");
        for (cell_id, r) in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                cell_id,
                r.hat_cell.cell.gamma_lo,
                r.exponent.omega_star,
                r.exponent.alpha_star,
                r.i_integral,
                r.t_h,
                r.t_h_residual,
            ));
        }
        out
    }

    pub fn save_json_lines(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_lines()?)?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Median of a slice (mean of the two middle values for even length);
/// `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    })
}

/// ω statistics over one γ' band.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaBand {
    pub lo: f64,
    pub hi: f64,
    /// Cells whose γ' fell in `[lo, hi)`.
    pub count: usize,
    pub median_omega: Option<f64>,
    /// Median of `|ω − 1|`: the trend statistic.
    pub median_abs_deviation: Option<f64>,
}

/// Group ω estimates into γ' bands and take medians. Empty bands are
/// reported with `count = 0` and absent medians, never dropped.
pub fn omega_bands(estimates: &[OmegaEstimate], edges: &[(f64, f64)]) -> Vec<OmegaBand> {
    edges
        .iter()
        .map(|&(lo, hi)| {
            let omegas: Vec<f64> = estimates
                .iter()
                .filter(|e| e.cell.gamma_lo >= lo && e.cell.gamma_lo < hi)
                .map(|e| e.omega)
                .collect();
            let deviations: Vec<f64> = omegas.iter().map(|w| (w - 1.0).abs()).collect();
            OmegaBand {
                lo,
                hi,
                count: omegas.len(),
                median_omega: median(&omegas),
                median_abs_deviation: median(&deviations),
            }
        })
        .collect()
}

/// Flat CSV of band statistics; absent medians print as empty fields.
pub fn omega_bands_csv(bands: &[OmegaBand]) -> String {
    let mut out = String::from("lo,hi,count,median_omega,median_abs_deviation\n");
    let field = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for b in bands {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            b.lo,
            b.hi,
            b.count,
            field(b.median_omega),
            field(b.median_abs_deviation),
        ));
    }
    out
}
