//! The cumulative second moment `hl(T) = ∫₀ᵀ |ζ(1/2 + it)|² dt`.
//!
//! This integral is the right-hand side of the ladder's defining equation,
//! so it is evaluated once per unit of `T` into a checkpoint table and then
//! served by checkpoint-plus-partial-panel lookups. Unit panels are
//! integrated independently (and in parallel); the prefix accumulation is
//! compensated so the table's error stays at the per-panel tolerance even
//! after ten thousand panels.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write as _};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{adaptive_integrate, KahanSum};
use crate::persist;
use crate::zeta::zeros::ZZeroTable;
use crate::zeta::zeta_mod_sq;

/// Checkpoint spacing in `T`.
pub const SECOND_MOMENT_STEP: f64 = 1.0;

/// Per-panel relative quadrature tolerance.
pub const SECOND_MOMENT_REL_TOL: f64 = 1e-10;

/// File magic for persisted checkpoint tables.
pub const SECOND_MOMENT_MAGIC: [u8; 4] = *b"HLCP";

/// Layout version for persisted checkpoint tables.
pub const SECOND_MOMENT_VERSION: u32 = 1;

/// Upper bound on persisted checkpoint counts, to reject corrupted
/// headers before allocating.
const MAX_PERSISTED_CHECKPOINTS: u64 = 100_000_000;

/// Checkpointed cumulative second moment on `[t_min, t_max]`.
#[derive(Debug, Clone)]
pub struct SecondMomentTable {
    t_min: f64,
    /// `checkpoints[i] = hl(t_min + i)`, including the head `hl(t_min)`.
    checkpoints: Vec<f64>,
    /// Zero/extremum ordinates available as quadrature hints for partial
    /// panels. Empty for tables restored from disk; hints only speed the
    /// adaptive integrator up, they never change its contract.
    hints: Vec<f64>,
}

impl SecondMomentTable {
    /// Integrate the second moment up to `t_max` with fresh zero tables.
    ///
    /// `t_max − t_min` is rounded up to a whole number of unit panels.
    pub fn build(t_min: f64, t_max: f64) -> Result<Self> {
        if !(t_min >= 10.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::Domain(format!(
                "second-moment table requires 10 <= t_min < t_max (finite), got [{t_min}, {t_max}]"
            )));
        }
        let zeros = ZZeroTable::build(10.0, t_max + 1.0)?;
        Self::with_zero_table(t_min, t_max, &zeros)
    }

    /// As [`build`](Self::build), but reusing an existing zero table
    /// (which must cover `[10, t_max]`).
    pub fn with_zero_table(t_min: f64, t_max: f64, zeros: &ZZeroTable) -> Result<Self> {
        if !(t_min >= 10.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::Domain(format!(
                "second-moment table requires 10 <= t_min < t_max (finite), got [{t_min}, {t_max}]"
            )));
        }
        let n_panels = (t_max - t_min).ceil() as usize;
        let hints = zeros.hints_in(0.0, t_min + n_panels as f64 + 1.0);

        // Head: ∫₀^{t_min}, integrated in two pieces because the integrand
        // is analytic but the zero hints only start at the first ordinate.
        let head_hints: Vec<f64> = hints.iter().copied().filter(|&z| z < t_min).collect();
        let head = adaptive_integrate(zeta_mod_sq, 0.0, t_min, SECOND_MOMENT_REL_TOL, &head_hints)?;

        let panels = unit_panel_values(t_min, n_panels, &hints)?;

        let mut checkpoints = Vec::with_capacity(n_panels + 1);
        let mut acc = KahanSum::new();
        acc.add(head.value);
        checkpoints.push(acc.value());
        for value in panels {
            acc.add(value);
            checkpoints.push(acc.value());
        }
        Ok(Self { t_min, checkpoints, hints })
    }

    /// Append unit panels until the table covers `t_max`, reusing every
    /// stored checkpoint verbatim.
    ///
    /// Restart semantics: the existing prefix is preserved exactly; new
    /// checkpoints continue the compensated accumulation from the last
    /// stored value. (A from-scratch build of the same range agrees with
    /// the extension to within a few ulps — the compensation state is not
    /// persisted — and both satisfy the per-panel tolerance.)
    pub fn extend_to(&mut self, t_max: f64) -> Result<()> {
        let start = self.t_max();
        if t_max <= start {
            return Ok(());
        }
        let n_panels = (t_max - start).ceil() as usize;
        let end = start + n_panels as f64;
        let zeros = ZZeroTable::build((start - 2.0).max(10.0), end + 1.0)?;
        let new_hints = zeros.hints_in(start, end + 1.0);

        let panels = unit_panel_values(start, n_panels, &new_hints)?;
        let mut acc = KahanSum::new();
        acc.add(*self.checkpoints.last().expect("tables hold at least two checkpoints"));
        for value in panels {
            acc.add(value);
            self.checkpoints.push(acc.value());
        }
        let tail_start = self.hints.last().copied().unwrap_or(f64::NEG_INFINITY);
        self.hints.extend(new_hints.into_iter().filter(|&h| h > tail_start));
        Ok(())
    }

    /// Reassemble a table from persisted checkpoints (no hints).
    pub(crate) fn from_checkpoints(t_min: f64, checkpoints: Vec<f64>) -> Result<Self> {
        if checkpoints.len() < 2 {
            return Err(Error::TableFormat(
                "second-moment table needs at least two checkpoints".into(),
            ));
        }
        if !checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::TableFormat(
                "second-moment checkpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { t_min, checkpoints, hints: Vec::new() })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_min + (self.checkpoints.len() - 1) as f64 * SECOND_MOMENT_STEP
    }

    /// `hl(t_min + i)` for checkpoint index `i`.
    pub fn checkpoint(&self, i: usize) -> f64 {
        self.checkpoints[i]
    }

    pub fn num_checkpoints(&self) -> usize {
        self.checkpoints.len()
    }

    /// `hl(t)` for `t ∈ [t_min, t_max]`: nearest checkpoint below plus a
    /// partial-panel integral.
    pub fn hl(&self, t: f64) -> Result<f64> {
        if !(t >= self.t_min && t <= self.t_max()) {
            return Err(Error::OutOfRange { value: t, lo: self.t_min, hi: self.t_max() });
        }
        let offset = (t - self.t_min) / SECOND_MOMENT_STEP;
        let index = (offset.floor() as usize).min(self.checkpoints.len() - 1);
        let t_floor = self.t_min + index as f64 * SECOND_MOMENT_STEP;
        if t == t_floor {
            return Ok(self.checkpoints[index]);
        }
        let partial = adaptive_integrate(
            zeta_mod_sq,
            t_floor,
            t,
            SECOND_MOMENT_REL_TOL,
            slice_hints(&self.hints, t_floor, t),
        )?;
        Ok(self.checkpoints[index] + partial.value)
    }

    /// Persist the checkpoints (versioned little-endian binary; see
    /// [`SECOND_MOMENT_MAGIC`]). Zero hints are not persisted — they only
    /// accelerate partial-panel quadrature — so a restored table answers
    /// the same queries, slightly slower between checkpoints.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&SECOND_MOMENT_MAGIC)?;
        persist::write_u32(&mut w, SECOND_MOMENT_VERSION)?;
        persist::write_f64(&mut w, self.t_min)?;
        persist::write_u64(&mut w, self.checkpoints.len() as u64)?;
        for &c in &self.checkpoints {
            persist::write_f64(&mut w, c)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Restore a table persisted by [`save`](Self::save), re-validating
    /// the monotonicity invariant.
    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        if persist::read_magic(&mut r)? != SECOND_MOMENT_MAGIC {
            return Err(Error::TableFormat("second-moment table: bad magic".into()));
        }
        let version = persist::read_u32(&mut r)?;
        if version != SECOND_MOMENT_VERSION {
            return Err(Error::TableFormat(format!(
                "second-moment table: unsupported version {version}"
            )));
        }
        let t_min = persist::read_f64(&mut r)?;
        if !(t_min >= 10.0 && t_min.is_finite()) {
            return Err(Error::TableFormat(format!("second-moment table: bad t_min {t_min}")));
        }
        let count = persist::read_u64(&mut r)?;
        if !(2..=MAX_PERSISTED_CHECKPOINTS).contains(&count) {
            return Err(Error::TableFormat(format!(
                "second-moment table: implausible checkpoint count {count}"
            )));
        }
        let mut checkpoints = Vec::with_capacity(count as usize);
        for _ in 0..count {
            checkpoints.push(persist::read_f64(&mut r)?);
        }
        Self::from_checkpoints(t_min, checkpoints)
    }

    /// Serve `[t_min, t_max]` from the cache at `path`: reuse a covering
    /// table verbatim, extend a matching-but-short one from its stored
    /// end, and rebuild from scratch otherwise (including on any parse
    /// failure). The result is saved back whenever it changed.
    pub fn load_or_extend(path: &Path, t_min: f64, t_max: f64) -> Result<Self> {
        if path.exists() {
            if let Ok(mut table) = Self::load(path) {
                if table.t_min == t_min {
                    if table.t_max() >= t_max {
                        return Ok(table);
                    }
                    table.extend_to(t_max)?;
                    table.save(path)?;
                    return Ok(table);
                }
            }
        }
        let table = Self::build(t_min, t_max)?;
        table.save(path)?;
        Ok(table)
    }
}

/// Integrate the `n_panels` unit panels starting at `t_start`, in
/// parallel; each panel must come out strictly positive (`|ζ|²` has only
/// isolated zeros).
fn unit_panel_values(t_start: f64, n_panels: usize, hints: &[f64]) -> Result<Vec<f64>> {
    let panels = crate::exec::map_indexed(n_panels, |i| {
        let lo = t_start + i as f64;
        let hi = lo + SECOND_MOMENT_STEP;
        let panel_hints = slice_hints(hints, lo, hi);
        adaptive_integrate(zeta_mod_sq, lo, hi, SECOND_MOMENT_REL_TOL, panel_hints)
            .map(|q| q.value)
    });
    let mut values = Vec::with_capacity(n_panels);
    for (i, panel) in panels.into_iter().enumerate() {
        let value = panel?;
        assert!(
            value > 0.0,
            "second-moment panel [{}, {}] integrated to {value}; |ζ|² has only isolated zeros",
            t_start + i as f64,
            t_start + (i + 1) as f64
        );
        values.push(value);
    }
    Ok(values)
}

/// The sub-slice of ascending `hints` that lies strictly inside `(lo, hi)`.
fn slice_hints(hints: &[f64], lo: f64, hi: f64) -> &[f64] {
    let start = hints.partition_point(|&h| h <= lo);
    let end = hints.partition_point(|&h| h < hi);
    &hints[start..end]
}
