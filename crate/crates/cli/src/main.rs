//! `jladder`: batch driver for the Jacob's-ladder verification
//! laboratory.
//!
//! Four subcommands cover the workflow:
//!
//! * `ladder build` — build (or reuse) the persisted second-moment and
//!   ladder tables,
//! * `cells` — list and validate the extremal cells of a generator
//!   family over a range,
//! * `verify` — run the full mean-value pipeline over selected cells and
//!   emit JSON/CSV records,
//! * `omega-scan` — measure the weighted mean value ω across γ' bands.
//!
//! A line-oriented `key=value` config file (keys mirror the long flags)
//! supplies defaults; explicit flags win. Exit codes: `0` success, `1`
//! residual-gate failure, `2` configuration error, `3` numerical
//! non-convergence.

// `!(x > 0.0)` rather than `x <= 0.0`: the negated form sends NaN from the
// config file down the rejection branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jacobs_ladder::exec;
use jacobs_ladder::generators::{
    make_bessel_generator, make_cn_generator, make_hardy_z_generator, make_sn_generator,
    validate_cell, Generator,
};
use jacobs_ladder::ladder::{LadderConfig, LadderTable, WeightSource};
use jacobs_ladder::report::{self, ReportCollector};
use jacobs_ladder::theorem::{self, VerificationReport, VerifyOptions};
use jacobs_ladder::zeta::{SecondMomentTable, ZZeroTable};
use jacobs_ladder::ExtremalCell;

use config::{ConfigMap, Failure};

/// Fallback ladder extent: `1.5·hi + 30` covers the hat preimage of any
/// cell endpoint `hi` with a comfortable margin (the preimage of `x`
/// sits near `x·(ln x + 0.74)/ln x̂ < 1.4·x` for `x ≥ 30`).
fn default_t_max(hi: f64) -> f64 {
    1.5 * hi + 30.0
}

/// Anchor of the persisted second-moment table, below every supported
/// ladder `t_min`.
const SECOND_MOMENT_T_MIN: f64 = 10.0;

/// Samples per cell in `--emit plot` profiles.
const PLOT_SAMPLES: usize = 256;

#[derive(Parser)]
#[command(
    name = "jladder",
    version,
    about = "Jacob's ladders and |zeta|^-2 mean-value verification",
    after_help = "Exit codes: 0 success, 1 residual-gate failure, \
                  2 configuration error, 3 numerical non-convergence."
)]
struct Cli {
    /// Line-oriented key=value file supplying defaults for long flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for data-parallel stages (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persisted-table management.
    Ladder {
        #[command(subcommand)]
        action: LadderAction,
    },
    /// List and validate extremal cells of a generator family.
    Cells(CellsArgs),
    /// Run the full mean-value pipeline over selected cells.
    Verify(VerifyArgs),
    /// Measure the weighted mean value across γ' bands.
    OmegaScan(OmegaScanArgs),
}

#[derive(Subcommand)]
enum LadderAction {
    /// Build (or reuse) the second-moment and ladder tables.
    Build(LadderBuildArgs),
}

#[derive(Args)]
struct LadderBuildArgs {
    /// Upper end of the ladder grid.
    #[arg(long)]
    t_max: Option<f64>,
    /// Lower end of the ladder grid (default 30).
    #[arg(long)]
    t_min: Option<f64>,
    /// Titchmarsh–Kober–Atkinson constant c0 (default 0).
    #[arg(long)]
    c0: Option<f64>,
    /// Directory holding the persisted tables (default jladder-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Export the grid as CSV after building.
    #[arg(long, value_name = "PATH")]
    export_csv: Option<PathBuf>,
    /// Ingest an external Hardy-Z zero table (one ordinate per line) as
    /// quadrature hints; forces a fresh second-moment build.
    #[arg(long, value_name = "PATH")]
    zeros: Option<PathBuf>,
    /// Print the decade-by-decade defining-equation residual report
    /// (needs t-max ≥ 10·t-min).
    #[arg(long)]
    asymptotics: bool,
}

#[derive(Args)]
struct CellsArgs {
    /// Generator family.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Elliptic modulus k² for sn/cn (default 0.5).
    #[arg(long)]
    k2: Option<f64>,
    /// Bessel order ν (default 0).
    #[arg(long)]
    nu: Option<f64>,
    /// Cell search range in the generator's argument.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    range: Option<Vec<f64>>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Cell search range in the generator's argument.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    range: Option<Vec<f64>>,
    /// Verify only the cell at this listing index.
    #[arg(long)]
    cell_index: Option<usize>,
    /// Verify only the cell whose γ' is nearest this value.
    #[arg(long)]
    gamma_target: Option<f64>,
    /// Ladder extent (default 1.5·HI + 30, covering hat preimages).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Run cells wider than the admissibility bound anyway.
    #[arg(long)]
    allow_inadmissible: bool,
    /// Gate applied to the t_H residual and |unit integral − 1|
    /// (default 1e-4); any verified cell beyond it exits 1.
    #[arg(long)]
    residual_gate: Option<f64>,
    /// Write JSON Lines records here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the flat CSV summary here.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Extra artifacts: `plot` = per-cell integrand-profile CSV.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Directory for --emit plot files (default current directory).
    #[arg(long)]
    plot_dir: Option<PathBuf>,
}

#[derive(Args)]
struct OmegaScanArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// γ' bands as lo:hi[,lo:hi...].
    #[arg(long)]
    bands: Option<String>,
    /// Fixed exponent for the ω integrand (default 2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Ladder extent (default 1.5·(max band edge) + 30).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Write band statistics as CSV here.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Sn,
    Cn,
    Bessel,
    Z,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sn" => Ok(Self::Sn),
            "cn" => Ok(Self::Cn),
            "bessel" => Ok(Self::Bessel),
            "z" => Ok(Self::Z),
            other => Err(format!("unknown family {other:?} (sn|cn|bessel|z)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Plot,
}

impl FromStr for Emit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plot" => Ok(Self::Plot),
            other => Err(format!("unknown emit kind {other:?} (plot)")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    if let Some(jobs) = cli.jobs.or(cfg.get::<usize>("jobs")?) {
        // A pool that someone already pinned keeps its size; that is not
        // a user-visible failure.
        let _ = exec::configure_workers(jobs);
    }
    match cli.command {
        Command::Ladder { action: LadderAction::Build(args) } => cmd_ladder_build(args, &cfg),
        Command::Cells(args) => cmd_cells(args, &cfg),
        Command::Verify(args) => cmd_verify(args, &cfg),
        Command::OmegaScan(args) => cmd_omega_scan(args, &cfg),
    }
}

// ---------------------------------------------------------------------
// Shared resolution helpers (flag > config file > default).

fn resolve<T: FromStr + Copy>(flag: Option<T>, cfg: &ConfigMap, key: &str) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get::<T>(key),
    }
}

fn resolve_family(flag: Option<Family>, cfg: &ConfigMap) -> Result<Family, Failure> {
    resolve(flag, cfg, "family")?
        .ok_or_else(|| Failure::config("--family (or config family=) is required"))
}

fn resolve_range(flag: &Option<Vec<f64>>, cfg: &ConfigMap) -> Result<(f64, f64), Failure> {
    if let Some(values) = flag {
        let (lo, hi) = (values[0], values[1]);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Failure::config(format!("need finite LO < HI, got {lo} {hi}")));
        }
        return Ok((lo, hi));
    }
    cfg.get_pair("range")?
        .ok_or_else(|| Failure::config("--range LO HI (or config range=lo:hi) is required"))
}

fn resolve_path(flag: Option<PathBuf>, cfg: &ConfigMap, key: &str) -> Option<PathBuf> {
    flag.or_else(|| cfg.raw(key).map(PathBuf::from))
}

fn build_generator(family: Family, k2: f64, nu: f64) -> Result<Arc<dyn Generator>, Failure> {
    Ok(match family {
        Family::Sn => Arc::new(make_sn_generator(k2)?),
        Family::Cn => Arc::new(make_cn_generator(k2)?),
        Family::Bessel => Arc::new(make_bessel_generator(nu)?),
        Family::Z => Arc::new(make_hardy_z_generator()),
    })
}

struct LadderRequest<'a> {
    cache_dir: PathBuf,
    t_min: f64,
    t_max: f64,
    c0: f64,
    zeros: Option<&'a Path>,
}

/// Build or reuse the persisted second-moment + ladder tables.
fn load_weighted_ladder(req: &LadderRequest) -> Result<(LadderTable, bool), Failure> {
    fs::create_dir_all(&req.cache_dir).map_err(|e| {
        Failure::config(format!("cannot create cache dir {}: {e}", req.cache_dir.display()))
    })?;
    let moment_path = req.cache_dir.join("second-moment.bin");
    let hl_t_max = req.t_max + 1.0;
    let moments = match req.zeros {
        Some(path) => {
            let zeros = ZZeroTable::ingest(path)?;
            let table = SecondMomentTable::with_zero_table(SECOND_MOMENT_T_MIN, hl_t_max, &zeros)?;
            table.save(&moment_path)?;
            table
        }
        None => SecondMomentTable::load_or_extend(&moment_path, SECOND_MOMENT_T_MIN, hl_t_max)?,
    };
    let ladder_config = LadderConfig {
        tka_c0: req.c0,
        t_min: req.t_min,
        ..LadderConfig::default()
    };
    let (table, reused) = LadderTable::load_or_build(
        &req.cache_dir.join("ladder.bin"),
        ladder_config,
        WeightSource::Zeta(moments),
        req.t_max,
    )?;
    Ok((table, reused))
}

// ---------------------------------------------------------------------
// ladder build

fn cmd_ladder_build(args: LadderBuildArgs, cfg: &ConfigMap) -> Result<(), Failure> {
    let t_max = resolve(args.t_max, cfg, "t-max")?
        .ok_or_else(|| Failure::config("--t-max (or config t-max=) is required"))?;
    let t_min = resolve(args.t_min, cfg, "t-min")?.unwrap_or(30.0);
    let c0 = resolve(args.c0, cfg, "c0")?.unwrap_or(0.0);
    let cache_dir = resolve_path(args.cache_dir, cfg, "cache-dir")
        .unwrap_or_else(|| PathBuf::from("jladder-cache"));
    let zeros = resolve_path(args.zeros, cfg, "zeros");
    let asymptotics = args.asymptotics || cfg.get::<bool>("asymptotics")?.unwrap_or(false);

    let request = LadderRequest { cache_dir, t_min, t_max, c0, zeros: zeros.as_deref() };
    let (table, reused) = load_weighted_ladder(&request)?;

    let state = if reused { "reused from cache" } else { "built" };
    println!(
        "ladder table: {} grid points over [{}, {}] ({state})",
        table.grid().len(),
        table.t_min(),
        table.t_max()
    );
    let phi_at_top = table.phi1(t_max)?;
    let c = table.config().euler_c;
    let ratio = (t_max - phi_at_top) / ((1.0 - c) * t_max / t_max.ln());
    println!("phi1({t_max}) = {phi_at_top}  gap ratio (T-phi1)/((1-c)T/lnT) = {ratio:.6}");

    if asymptotics {
        let report = table.check_ladder_asymptotics()?;
        println!("defining-equation residual by decade (scaled by lnT/T):");
        for (decade_start, max_residual) in &report.decade_maxima {
            println!("  [{decade_start:>12.2}, 10x): max {max_residual:.6e}");
        }
        println!(
            "  top/bottom decade ratio: {:.3e} (decay {})",
            report.top_decade_max / report.bottom_decade_max,
            if report.decay_ok { "ok" } else { "VIOLATED" }
        );
    }
    if let Some(path) = resolve_path(args.export_csv, cfg, "export-csv") {
        table.export_csv(&path)?;
        println!("grid exported to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------
// cells

fn cmd_cells(args: CellsArgs, cfg: &ConfigMap) -> Result<(), Failure> {
    let family = resolve_family(args.family, cfg)?;
    let k2 = resolve(args.k2, cfg, "k2")?.unwrap_or(0.5);
    let nu = resolve(args.nu, cfg, "nu")?.unwrap_or(0.0);
    let (lo, hi) = resolve_range(&args.range, cfg)?;

    let generator = build_generator(family, k2, nu)?;
    let cells = generator.cells(lo, hi)?;
    if cells.is_empty() {
        println!("no cells for {} in [{lo}, {hi}]", generator.label());
        return Ok(());
    }
    println!(
        "{:>4}  {:>14}  {:>14}  {:>14}  {:>9}  {:>12}  {:>12}  {:>6}",
        "idx", "gamma_lo", "gamma_hi", "t0", "width", "G(t0)", "admissible", "valid"
    );
    let mut inadmissible = 0usize;
    for (idx, cell) in cells.iter().enumerate() {
        let admissible = cell.is_admissible();
        if !admissible {
            inadmissible += 1;
        }
        let validation = validate_cell(generator.as_ref(), cell);
        println!(
            "{:>4}  {:>14.6}  {:>14.6}  {:>14.6}  {:>9.4}  {:>12.6e}  {:>12}  {:>6}",
            idx,
            cell.gamma_lo,
            cell.gamma_hi,
            cell.t0,
            cell.width(),
            cell.g_at_t0,
            if admissible { "yes" } else { "NO" },
            if validation.passed() { "ok" } else { "FAIL" },
        );
    }
    println!(
        "{} cells for {} in [{lo}, {hi}] ({inadmissible} inadmissible)",
        cells.len(),
        generator.label()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs, cfg: &ConfigMap) -> Result<(), Failure> {
    let family = resolve_family(args.family, cfg)?;
    let k2 = resolve(args.k2, cfg, "k2")?.unwrap_or(0.5);
    let nu = resolve(args.nu, cfg, "nu")?.unwrap_or(0.0);
    let (lo, hi) = resolve_range(&args.range, cfg)?;
    let cell_index = resolve(args.cell_index, cfg, "cell-index")?;
    let gamma_target = resolve(args.gamma_target, cfg, "gamma-target")?;
    let allow_inadmissible =
        args.allow_inadmissible || cfg.get::<bool>("allow-inadmissible")?.unwrap_or(false);
    let residual_gate = resolve(args.residual_gate, cfg, "residual-gate")?.unwrap_or(1e-4);
    if !(residual_gate > 0.0) {
        return Err(Failure::config(format!("residual gate must be positive: {residual_gate}")));
    }

    let generator = build_generator(family, k2, nu)?;
    let all_cells = generator.cells(lo, hi)?;
    if all_cells.is_empty() {
        println!("no cells for {} in [{lo}, {hi}]", generator.label());
        return Ok(());
    }

    // Selection: an explicit index, a γ' target, or everything in range.
    let selected: Vec<(usize, ExtremalCell)> = if let Some(index) = cell_index {
        let cell = *all_cells.get(index).ok_or_else(|| {
            Failure::config(format!(
                "cell index {index} out of range: {} cells in [{lo}, {hi}]",
                all_cells.len()
            ))
        })?;
        vec![(index, cell)]
    } else if let Some(target) = gamma_target {
        let (index, cell) = all_cells
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (a.gamma_lo - target).abs().total_cmp(&(b.gamma_lo - target).abs())
            })
            .expect("cells are nonempty");
        vec![(index, *cell)]
    } else {
        all_cells.iter().copied().enumerate().collect()
    };

    if !allow_inadmissible {
        let offenders: Vec<String> = selected
            .iter()
            .filter(|(_, c)| !c.is_admissible())
            .map(|(i, c)| {
                format!(
                    "  cell {i}: [{}, {}] width {:.4} > bound {:.4}",
                    c.gamma_lo,
                    c.gamma_hi,
                    c.width(),
                    c.admissibility_bound()
                )
            })
            .collect();
        if !offenders.is_empty() {
            return Err(Failure::config(format!(
                "{} selected cell(s) exceed the admissibility bound gamma'/ln gamma'; \
                 the mean-value hypotheses do not apply. Pass --allow-inadmissible to \
                 run them anyway.\n{}",
                offenders.len(),
                offenders.join("\n")
            )));
        }
    }

    let t_max = resolve(args.t_max, cfg, "t-max")?.unwrap_or_else(|| default_t_max(hi));
    let t_min = resolve(args.t_min, cfg, "t-min")?.unwrap_or(30.0);
    let c0 = resolve(args.c0, cfg, "c0")?.unwrap_or(0.0);
    let cache_dir = resolve_path(args.cache_dir, cfg, "cache-dir")
        .unwrap_or_else(|| PathBuf::from("jladder-cache"));
    let request = LadderRequest { cache_dir, t_min, t_max, c0, zeros: None };
    let (table, reused) = load_weighted_ladder(&request)?;
    println!(
        "ladder table over [{}, {}] ({})",
        table.t_min(),
        table.t_max(),
        if reused { "cached" } else { "built" }
    );

    let options = VerifyOptions { allow_inadmissible, ..VerifyOptions::default() };
    let cells_only: Vec<ExtremalCell> = selected.iter().map(|(_, c)| *c).collect();
    let outcomes = theorem::verify_cells(&table, generator.as_ref(), &cells_only, &options);

    let mut collector = ReportCollector::new();
    let mut numerical_failures = 0usize;
    let mut gate_failures = Vec::new();
    for ((index, _), outcome) in selected.iter().zip(outcomes) {
        match outcome {
            Ok(report) => {
                println!(
                    "cell {index} [{}] gamma'={:.6}: omega*={:.6} alpha*={:.4} ({} iters) \
                     I={:.6e} t_H={:.6} (residual {:.3e}) unit={:.8}",
                    report.generator,
                    report.hat_cell.cell.gamma_lo,
                    report.exponent.omega_star,
                    report.exponent.alpha_star,
                    report.exponent.iterations,
                    report.i_integral,
                    report.t_h,
                    report.t_h_residual,
                    report.unit_check,
                );
                if report.t_h_residual > residual_gate
                    || (report.unit_check - 1.0).abs() > residual_gate
                {
                    gate_failures.push(format!(
                        "cell {index}: t_H residual {:.3e}, |unit-1| {:.3e} (gate {residual_gate:.1e})",
                        report.t_h_residual,
                        (report.unit_check - 1.0).abs()
                    ));
                }
                collector.push(*index, report);
            }
            Err(e) => {
                numerical_failures += 1;
                eprintln!("cell {index}: {e}");
            }
        }
    }

    if let Some(path) = resolve_path(args.json, cfg, "json") {
        collector.save_json_lines(&path)?;
        println!("JSON records written to {}", path.display());
    }
    if let Some(path) = resolve_path(args.csv, cfg, "csv") {
        collector.save_csv(&path)?;
        println!("CSV summary written to {}", path.display());
    }
    let emit = match args.emit {
        Some(e) => Some(e),
        None => cfg
            .raw("emit")
            .map(<Emit as FromStr>::from_str)
            .transpose()
            .map_err(Failure::config)?,
    };
    if emit == Some(Emit::Plot) {
        let plot_dir = resolve_path(args.plot_dir, cfg, "plot-dir")
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&plot_dir).map_err(|e| {
            Failure::config(format!("cannot create plot dir {}: {e}", plot_dir.display()))
        })?;
        for (index, report) in collector.records() {
            let path = plot_dir.join(format!("cell-{index}-profile.csv"));
            write_profile(&path, &table, generator.as_ref(), report)?;
            println!("integrand profile written to {}", path.display());
        }
    }

    println!(
        "verified {}/{} cells",
        collector.len(),
        selected.len()
    );
    if numerical_failures > 0 {
        return Err(Failure::numerical(format!(
            "{numerical_failures} cell(s) failed to converge"
        )));
    }
    if !gate_failures.is_empty() {
        return Err(Failure::gate(format!(
            "{} cell(s) beyond the residual gate:\n{}",
            gate_failures.len(),
            gate_failures.join("\n")
        )));
    }
    Ok(())
}

/// Dump the weighted integrand of one verified cell for external
/// plotting: `t, phi1, weight, integrand` at uniform t-samples over the
/// hat cell.
fn write_profile(
    path: &Path,
    table: &LadderTable,
    generator: &dyn Generator,
    report: &VerificationReport,
) -> Result<(), Failure> {
    let hat = &report.hat_cell;
    let alpha = report.exponent.alpha_star;
    let scale = hat.cell.g_at_t0.abs();
    let mut out = String::from("t,phi1,weight,integrand\n");
    for i in 0..=PLOT_SAMPLES {
        let t = hat.gamma_lo_hat + hat.width() * i as f64 / PLOT_SAMPLES as f64;
        let x = table.phi1(t)?;
        let weight = table.source().weight(t);
        let integrand = (generator.value(x) / scale).abs().powf(alpha)
            * (generator.derivative(x) / scale).abs()
            * weight;
        out.push_str(&format!("{t},{x},{weight},{integrand}\n"));
    }
    fs::write(path, out).map_err(|e| {
        Failure::config(format!("cannot write profile {}: {e}", path.display()))
    })
}

// ---------------------------------------------------------------------
// omega-scan

fn cmd_omega_scan(args: OmegaScanArgs, cfg: &ConfigMap) -> Result<(), Failure> {
    let family = resolve_family(args.family, cfg)?;
    let k2 = resolve(args.k2, cfg, "k2")?.unwrap_or(0.5);
    let nu = resolve(args.nu, cfg, "nu")?.unwrap_or(0.0);
    let alpha = resolve(args.alpha, cfg, "alpha")?.unwrap_or(2.0);
    let bands_text = match &args.bands {
        Some(b) => b.clone(),
        None => cfg
            .raw("bands")
            .map(str::to_string)
            .ok_or_else(|| Failure::config("--bands lo:hi[,lo:hi...] is required"))?,
    };
    let bands = config::parse_bands(&bands_text).map_err(Failure::config)?;
    if bands.is_empty() {
        return Err(Failure::config("at least one band is required"));
    }
    let scan_lo = bands.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let scan_hi = bands.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);

    let generator = build_generator(family, k2, nu)?;
    let all_cells = generator.cells(scan_lo, scan_hi)?;
    let in_some_band = |c: &ExtremalCell| {
        bands.iter().any(|&(lo, hi)| c.gamma_lo >= lo && c.gamma_lo < hi)
    };
    let cells: Vec<ExtremalCell> = all_cells
        .into_iter()
        .filter(|c| c.is_admissible() && in_some_band(c))
        .collect();
    println!(
        "{} admissible cells of {} across {} band(s)",
        cells.len(),
        generator.label(),
        bands.len()
    );

    let t_max = resolve(args.t_max, cfg, "t-max")?.unwrap_or_else(|| default_t_max(scan_hi));
    let t_min = resolve(args.t_min, cfg, "t-min")?.unwrap_or(30.0);
    let c0 = resolve(args.c0, cfg, "c0")?.unwrap_or(0.0);
    let cache_dir = resolve_path(args.cache_dir, cfg, "cache-dir")
        .unwrap_or_else(|| PathBuf::from("jladder-cache"));
    let request = LadderRequest { cache_dir, t_min, t_max, c0, zeros: None };
    let (table, _) = load_weighted_ladder(&request)?;

    let outcomes = exec::map_slice(&cells, |cell| {
        theorem::omega_estimate(&table, generator.as_ref(), cell, alpha)
    });
    let mut estimates = Vec::new();
    for (cell, outcome) in cells.iter().zip(outcomes) {
        match outcome {
            Ok(est) => estimates.push(est),
            Err(e) => eprintln!("cell at gamma'={}: {e}", cell.gamma_lo),
        }
    }

    let stats = report::omega_bands(&estimates, &bands);
    for band in &stats {
        match (band.median_omega, band.median_abs_deviation) {
            (Some(median), Some(deviation)) => println!(
                "band [{}, {}): n={} median omega={:.6} median |omega-1|={:.6}",
                band.lo, band.hi, band.count, median, deviation
            ),
            _ => println!("band [{}, {}): absent (no cells)", band.lo, band.hi),
        }
    }
    if let Some(path) = resolve_path(args.csv, cfg, "csv") {
        fs::write(&path, report::omega_bands_csv(&stats)).map_err(|e| {
            Failure::config(format!("cannot write {}: {e}", path.display()))
        })?;
        println!("band statistics written to {}", path.display());
    }
    Ok(())
}
