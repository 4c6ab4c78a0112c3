//! Command-line front end behind the `planewave` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 positivity or vacuum, 4 time beyond breaking.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::burgers::riemann_shock;
use crate::directions::{build_directions, max_wave_count};
use crate::error::{Error, Result};
use crate::export::{write_contours_csv, write_snapshot_csv, write_snapshot_vtk};
use crate::fv::FvState;
use crate::gas::GasParams;
use crate::grid::GridSpec;
use crate::scenario::{Format, Scenario};
use crate::verify::{
    decoupling_check, jump_mismatch_demo, mismatch_spread, observed_order, primitive_residual,
    sample_points, ShockData, SymmetricForm, DEFAULT_POINTS, DEFAULT_SEED,
};

/// Residuals at or below this count as exactly satisfied.
pub const RESIDUAL_FLOOR: f64 = 1e-12;
/// Accepted band for observed second-order decay.
pub const ORDER_BAND: (f64, f64) = (1.7, 2.3);
/// Minimum mismatch spread that demonstrates non-constancy.
pub const SPREAD_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "planewave", version, about = "Exact multi-wave solutions of the isentropic Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equiangular direction set for a gas and dimension
    Directions {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        dim: usize,
        /// Number of directions (default: the maximum)
        #[arg(long)]
        n: Option<usize>,
        /// Print JSON instead of the table
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Write exact-field snapshots for every scenario time
    Field {
        scenario: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Check the Euler residuals of a scenario by finite differences
    Verify {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        points: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Finite-volume convergence against the exact field (2-D)
    Fv {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        grids: Vec<usize>,
        /// Final time (default: the last scenario time)
        #[arg(long)]
        t_end: Option<f64>,
        /// Pressure levels to contour at the final time
        #[arg(long, value_delimiter = ',')]
        contours: Option<Vec<f64>>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Density jump mismatch across a shock in one wave
    JumpDemo {
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        f1_left: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        f1_right: f64,
        /// Shock speed (default: the Burgers shock speed of wave 1)
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        f3: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.75,1,1.25,1.5", allow_negative_numbers = true)]
        f2: Vec<f64>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Success,
    Failed(String),
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e, out, err),
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Failed(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            1
        }
        Err(CliError::Usage(e)) => clap_exit(*e, out, err),
        Err(CliError::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    let _ = if e.use_stderr() {
        write!(err, "{text}")
    } else {
        write!(out, "{text}")
    };
    e.exit_code()
}

enum CliError {
    Usage(Box<clap::Error>),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

fn usage(msg: String) -> CliError {
    CliError::Usage(Box::new(Cli::command().error(ErrorKind::ValueValidation, msg)))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> std::result::Result<Outcome, CliError> {
    match cmd {
        Command::Directions { gamma, dim, n, json, output_dir } => {
            cmd_directions(gamma, dim, n, json, output_dir.as_deref(), out)
        }
        Command::Field { scenario, output_dir } => cmd_field(&scenario, output_dir.as_deref(), out),
        Command::Verify { scenario, h, points, seed, output_dir } => {
            if !(h > 0.0 && h.is_finite()) {
                return Err(usage(format!("--h must be positive, got {h}")));
            }
            cmd_verify(&scenario, h, points as usize, seed, output_dir.as_deref(), out)
        }
        Command::Fv { scenario, grids, t_end, contours, output_dir } => {
            if grids.is_empty() || grids.contains(&0) {
                return Err(usage("--grids needs positive resolutions".into()));
            }
            cmd_fv(&scenario, &grids, t_end, contours.as_deref(), output_dir.as_deref(), out)
        }
        Command::JumpDemo { gamma, k, dim, f1_left, f1_right, sigma, f3, f2, output_dir } => {
            if f2.len() < 3 {
                return Err(usage(format!(
                    "--f2 needs at least 3 values to assess non-constancy, got {}",
                    f2.len()
                )));
            }
            let args = JumpArgs { gamma, k, dim, f1_left, f1_right, sigma, f3, f2 };
            cmd_jump_demo(&args, output_dir.as_deref(), out)
        }
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn output_dir(flag: Option<&Path>, sc: &Scenario) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| sc.outputs.directory.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

#[derive(Serialize)]
struct DirectionsReport {
    gamma: f64,
    a: f64,
    dim: usize,
    n: usize,
    max_wave_count: usize,
    vectors: Vec<Vec<f64>>,
    gram_residual: f64,
    transverse_direction: Option<Vec<f64>>,
}

fn cmd_directions(
    gamma: f64,
    dim: usize,
    n: Option<usize>,
    json: bool,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> std::result::Result<Outcome, CliError> {
    let gas = GasParams::new(gamma, 1.0)?;
    let max = max_wave_count(&gas, dim)?;
    let ds = build_directions(&gas, dim, n.unwrap_or(max))?;
    let report = DirectionsReport {
        gamma,
        a: gas.a(),
        dim,
        n: ds.n(),
        max_wave_count: max,
        vectors: ds.vectors().to_vec(),
        gram_residual: ds.gram_residual(),
        transverse_direction: ds.transverse_direction(),
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
    } else {
        writeln!(out, "gamma = {gamma}, a = {}, d = {dim}", gas.a())?;
        writeln!(out, "N = {} (max {max})", ds.n())?;
        for (k, v) in ds.vectors().iter().enumerate() {
            let comps: Vec<String> = v.iter().map(|c| format!("{c:>20.16}")).collect();
            writeln!(out, "v{} = [{}]", k + 1, comps.join(", "))?;
        }
        writeln!(out, "gram residual = {:.3e}", report.gram_residual)?;
        match &report.transverse_direction {
            Some(v) => writeln!(out, "transverse direction = {v:?}")?,
            None => writeln!(out, "transverse direction: none")?,
        }
    }
    if let Some(dir) = dir {
        write_json(dir, "directions.json", &report)?;
    }
    Ok(Outcome::Success)
}

fn cmd_field(path: &Path, flag: Option<&Path>, out: &mut dyn Write) -> std::result::Result<Outcome, CliError> {
    let sc = Scenario::load(path)?;
    let ef = sc.field()?;
    for &t in &sc.times {
        ef.check_time(t)?;
    }
    let dir = output_dir(flag, &sc);
    fs::create_dir_all(&dir)?;
    let mut invalid = 0;
    for (i, &t) in sc.times.iter().enumerate() {
        let snap = ef.sample_grid(&sc.grid, t)?;
        invalid += snap.invalid;
        for format in &sc.outputs.formats {
            let (ext, write): (&str, fn(&mut BufWriter<File>, &_) -> std::io::Result<()>) = match format {
                Format::Csv => ("csv", write_snapshot_csv),
                Format::Vtk => ("vtk", write_snapshot_vtk),
            };
            let file = dir.join(format!("field_t{i:03}.{ext}"));
            let mut w = BufWriter::new(File::create(&file)?);
            write(&mut w, &snap)?;
            w.flush()?;
            writeln!(out, "t = {t}: wrote {} ({} invalid)", file.display(), snap.invalid)?;
        }
    }
    if invalid > 0 {
        return Err(Error::Positivity {
            count: invalid,
            first: Vec::new(),
        }
        .into());
    }
    Ok(Outcome::Success)
}

/// Flat JSON report of `verify`; per-step arrays are indexed by `h`,
/// `h/2`, `h/4`.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub points_requested: usize,
    pub points_used: usize,
    pub times: Vec<f64>,
    pub h: [f64; 3],
    pub momentum_residual: [f64; 3],
    pub continuity_residual: [f64; 3],
    pub symmetric_residual: [f64; 3],
    /// `None` where both residuals are at the floor.
    pub momentum_order: [Option<f64>; 2],
    pub continuity_order: [Option<f64>; 2],
    pub symmetric_order: [Option<f64>; 2],
    pub gram_residual: f64,
    pub decoupling: f64,
    pub eigen_residual: f64,
    pub passed: bool,
    pub failed_check: Option<String>,
}

fn orders(r: &[f64; 3]) -> [Option<f64>; 2] {
    std::array::from_fn(|i| {
        (r[i] > RESIDUAL_FLOOR || r[i + 1] > RESIDUAL_FLOOR).then(|| observed_order(r[i], r[i + 1], 2.0))
    })
}

/// Residuals either sit at the floor or decay at second order.
pub fn decays(r: &[f64; 3]) -> bool {
    r.iter().all(|&x| x <= RESIDUAL_FLOOR)
        || orders(r)
            .iter()
            .all(|o| o.is_some_and(|o| (ORDER_BAND.0..=ORDER_BAND.1).contains(&o)))
}

/// Runs the three-step residual study behind `verify`.
pub fn verify_scenario(sc: &Scenario, h: f64, points: usize, seed: u64) -> Result<VerifyReport> {
    let ef = sc.field()?;
    let hs = [h, h / 2.0, h / 4.0];
    let times: Vec<f64> = sc.times.iter().copied().filter(|&t| t >= h).collect();
    if times.is_empty() {
        return Err(Error::Scenario(format!("verify needs a scenario time t >= h = {h}")));
    }
    let mut report = VerifyReport {
        seed,
        points_requested: points,
        points_used: 0,
        times: times.clone(),
        h: hs,
        momentum_residual: [0.0; 3],
        continuity_residual: [0.0; 3],
        symmetric_residual: [0.0; 3],
        momentum_order: [None; 2],
        continuity_order: [None; 2],
        symmetric_order: [None; 2],
        gram_residual: ef.directions().gram_residual(),
        decoupling: decoupling_check(ef.directions(), ef.gas()),
        eigen_residual: SymmetricForm::new(*ef.gas(), ef.dim()).eigen_residual(ef.directions()),
        passed: false,
        failed_check: None,
    };
    for &t in &times {
        ef.check_time(t + h)?;
        let pts = sample_points(&ef, &sc.grid.lower, &sc.grid.upper, points, seed, t, h);
        if pts.is_empty() {
            return Err(Error::Positivity {
                count: points,
                first: Vec::new(),
            });
        }
        report.points_used += pts.len();
        for (k, &hk) in hs.iter().enumerate() {
            let r = primitive_residual(&ef, &pts, t, hk)?;
            report.momentum_residual[k] = report.momentum_residual[k].max(r.max_momentum_residual);
            report.continuity_residual[k] = report.continuity_residual[k].max(r.max_continuity_residual);
            report.symmetric_residual[k] = report.symmetric_residual[k].max(r.max_symmetric_residual);
        }
    }
    report.momentum_order = orders(&report.momentum_residual);
    report.continuity_order = orders(&report.continuity_residual);
    report.symmetric_order = orders(&report.symmetric_residual);
    report.failed_check = if !(decays(&report.momentum_residual) && decays(&report.continuity_residual)) {
        Some("primitive residual not decaying".into())
    } else if !decays(&report.symmetric_residual) {
        Some("symmetric residual not decaying".into())
    } else {
        None
    };
    report.passed = report.failed_check.is_none();
    Ok(report)
}

fn cmd_verify(
    path: &Path,
    h: f64,
    points: usize,
    seed: u64,
    flag: Option<&Path>,
    out: &mut dyn Write,
) -> std::result::Result<Outcome, CliError> {
    let sc = Scenario::load(path)?;
    let report = verify_scenario(&sc, h, points, seed)?;
    let dir = output_dir(flag, &sc);
    let file = write_json(&dir, "verify_report.json", &report)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
    writeln!(out, "report written to {}", file.display())?;
    Ok(match report.failed_check {
        Some(msg) => Outcome::Failed(msg),
        None => Outcome::Success,
    })
}

#[derive(Debug, Serialize)]
pub struct FvRow {
    pub n: usize,
    pub steps: usize,
    /// L1 errors of `(ρ, ρu₁, ρu₂)`; absent past breaking.
    pub l1: Option<[f64; 3]>,
    /// Observed order of the density error against the previous grid.
    pub order: Option<f64>,
    pub mass_drift: f64,
}

#[derive(Debug, Serialize)]
pub struct FvReport {
    pub t_end: f64,
    pub t_max: f64,
    pub rows: Vec<FvRow>,
}

/// Runs the exact-field initial data to `t_end` on `n × n` grids over the
/// scenario box. Errors are computed only before breaking.
pub fn fv_convergence(
    sc: &Scenario,
    grids: &[usize],
    t_end: f64,
    mut on_state: impl FnMut(&FvState) -> Result<()>,
) -> Result<FvReport> {
    if sc.dimension != 2 {
        return Err(Error::Scenario("the finite-volume solver needs a 2-D scenario".into()));
    }
    let ef = sc.field()?;
    let smooth = t_end < ef.t_max();
    let mut rows: Vec<FvRow> = Vec::new();
    for &n in grids {
        let grid = GridSpec::new(sc.grid.lower.clone(), sc.grid.upper.clone(), vec![n, n])?;
        let mut st = FvState::init_from_exact(&ef, grid)?;
        let m0 = st.total_mass();
        let steps = st.run_until(t_end)?;
        let l1 = if smooth { Some(st.l1_error(&ef)?) } else { None };
        let order = match (rows.last().and_then(|r| r.l1), l1) {
            (Some(prev), Some(cur)) if prev[0] > RESIDUAL_FLOOR && cur[0] > RESIDUAL_FLOOR => {
                Some(observed_order(prev[0], cur[0], n as f64 / rows.last().map_or(1, |r| r.n) as f64))
            }
            _ => None,
        };
        rows.push(FvRow {
            n,
            steps,
            l1,
            order,
            mass_drift: (st.total_mass() - m0) / m0,
        });
        on_state(&st)?;
    }
    Ok(FvReport {
        t_end,
        t_max: ef.t_max(),
        rows,
    })
}

fn cmd_fv(
    path: &Path,
    grids: &[usize],
    t_end: Option<f64>,
    contours: Option<&[f64]>,
    flag: Option<&Path>,
    out: &mut dyn Write,
) -> std::result::Result<Outcome, CliError> {
    let sc = Scenario::load(path)?;
    let t_end = match t_end.or_else(|| sc.times.last().copied()) {
        Some(t) if t >= 0.0 && t.is_finite() => t,
        Some(t) => return Err(usage(format!("--t-end must be non-negative, got {t}"))),
        None => return Err(usage("no --t-end given and the scenario lists no times".into())),
    };
    let ef = sc.field()?;
    if contours.is_none() && t_end >= ef.t_max() {
        writeln!(
            out,
            "convergence mode needs a smooth exact solution; pass --contours to run past breaking"
        )?;
        return Err(Error::TimeDomain {
            t: t_end,
            t_break: ef.t_max(),
            wave: ef.breaking_wave(),
        }
        .into());
    }
    if sc.dimension != 2 {
        return Err(usage(format!("fv needs a 2-D scenario, got dimension {}", sc.dimension)));
    }
    let dir = output_dir(flag, &sc);
    fs::create_dir_all(&dir)?;
    let report = fv_convergence(&sc, grids, t_end, |st| {
        if let Some(levels) = contours {
            let file = dir.join(format!("contours_n{}.csv", st.nx()));
            let mut w = BufWriter::new(File::create(&file)?);
            write_contours_csv(&mut w, &st.pressure_contours(levels))?;
            w.flush()?;
        }
        Ok(())
    })?;

    let fmt = |v: Option<f64>, prec: usize| v.map_or("n/a".to_string(), |x| format!("{x:.prec$e}"));
    writeln!(out, "t_end = {t_end}, t_max = {}", report.t_max)?;
    writeln!(
        out,
        "{:>6} {:>7} {:>12} {:>12} {:>12} {:>8}",
        "n", "steps", "L1(rho)", "L1(rho u1)", "L1(rho u2)", "order"
    )?;
    for row in &report.rows {
        let e = |m: usize| fmt(row.l1.map(|l| l[m]), 4);
        let order = row.order.map_or("n/a".to_string(), |o| format!("{o:.3}"));
        writeln!(
            out,
            "{:>6} {:>7} {:>12} {:>12} {:>12} {:>8}",
            row.n,
            row.steps,
            e(0),
            e(1),
            e(2),
            order
        )?;
    }
    write_json(&dir, "fv_convergence.json", &report)?;
    Ok(Outcome::Success)
}

struct JumpArgs {
    gamma: f64,
    k: f64,
    dim: usize,
    f1_left: f64,
    f1_right: f64,
    sigma: Option<f64>,
    f3: f64,
    f2: Vec<f64>,
}

#[derive(Serialize)]
struct JumpReport {
    gamma: f64,
    shock: ShockData,
    f3: f64,
    rows: Vec<crate::verify::JumpMismatch>,
    spread: f64,
}

fn cmd_jump_demo(args: &JumpArgs, dir: Option<&Path>, out: &mut dyn Write) -> std::result::Result<Outcome, CliError> {
    let gas = GasParams::new(args.gamma, args.k)?;
    let ds = build_directions(&gas, args.dim, 3)?;
    let sigma = match args.sigma {
        Some(s) => s,
        None if args.f1_left > args.f1_right => riemann_shock(gas.a(), args.f1_left, args.f1_right)?,
        None => gas.speed_factor() * args.f1_left,
    };
    let shock = ShockData {
        f1_left: args.f1_left,
        f1_right: args.f1_right,
        sigma,
    };
    let rows = jump_mismatch_demo(&gas, &ds, shock, args.f3, &args.f2)?;
    let spread = mismatch_spread(&rows);
    writeln!(out, "gamma = {}, f1: {} -> {}, sigma = {sigma}, f3 = {}", args.gamma, args.f1_left, args.f1_right, args.f3)?;
    writeln!(out, "{:>10} {:>24} {:>24} {:>24}", "f2", "[rho] sigma", "[rho u].v1", "mismatch")?;
    for r in &rows {
        writeln!(out, "{:>10} {:>24.16e} {:>24.16e} {:>24.16e}", r.f2, r.lhs, r.rhs, r.mismatch)?;
    }
    writeln!(out, "spread = {spread:.6e}")?;
    if let Some(dir) = dir {
        let report = JumpReport {
            gamma: args.gamma,
            shock,
            f3: args.f3,
            rows: rows.clone(),
            spread,
        };
        write_json(dir, "jump_demo.json", &report)?;
    }
    Ok(if spread > SPREAD_THRESHOLD {
        Outcome::Success
    } else {
        Outcome::Failed("mismatch identically zero (degenerate)".into())
    })
}
