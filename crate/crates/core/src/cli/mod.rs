//! The `tavis-ent` command line: time scans along the cavity dynamics,
//! single family-state reports, and checks of user-supplied states.
//!
//! Exit statuses: 0 success, 2 numeric or validation failure, 64 usage
//! error, 65 unreadable input.

mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::criteria::{
    family_report, min_pt_eigenvalue, negativity, ppt_entangled, spin_moments, xi2_fixed_frame,
    xi_squared, FramePolicy,
};
use crate::dynamics::{closed_form_coeffs, Evolver, ModelConfig};
use crate::error::Error;
use crate::numfmt::sig;
use crate::qstate::{family_density, BasisMap, DensityMatrix, FamilyCoeffs, StateFile};

pub use output::{Cell, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATAERR: u8 = 65;

/// Largest closed-form vs. exact-evolution deviation accepted by `--verify`.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "tavis-ent", version, about = "Entanglement diagnostics for two atoms in a cavity")]
pub struct RunConfig {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate populations and both criteria along gt for a Fock-state field.
    ScanTime(ScanTimeArgs),
    /// Report both criteria for one member of the symmetric state family.
    Family(FamilyArgs),
    /// Validate a two-atom density matrix file and report both criteria.
    CheckState(CheckStateArgs),
}

#[derive(Debug, Args)]
pub struct ScanTimeArgs {
    /// Initial photon number n (>= 1).
    #[arg(long)]
    pub photons: u32,
    /// Last time point, in units of 1/g (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub gt_max: f64,
    /// Number of equally spaced time points, including 0 and gt-max (>= 2).
    #[arg(long, default_value_t = 301)]
    pub steps: usize,
    /// Cross-check every row against exact numerical evolution.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x2: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x3: f64,
    /// Real coherence between |ee> and |gg>.
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct CheckStateArgs {
    /// JSON file with `dims` and `rows` of [re, im] pairs.
    pub file: PathBuf,
}

/// A failed command: exit status plus a diagnostic line.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATAERR,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::numeric(e.to_string())
    }
}

/// What a command produced: the document to write, extra diagnostics for
/// the error stream, and the exit status.
struct Outcome {
    document: String,
    notes: Vec<String>,
    code: u8,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    execute(&cfg, stdout, stderr)
}

pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let result = match &cfg.command {
        Command::ScanTime(a) => scan_time(a, cfg.format),
        Command::Family(a) => family(a, cfg.format),
        Command::CheckState(a) => check_state(a, cfg.format),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &outcome.document),
        None => stdout.write_all(outcome.document.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_FAILURE;
    }
    for note in &outcome.notes {
        let _ = writeln!(stderr, "{note}");
    }
    outcome.code
}

/// One time point of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub gt: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub xi2_optimized: f64,
    pub xi2_fixed_frame: f64,
    pub negativity: f64,
    pub ppt_entangled: bool,
    pub xi2_flags_entangled: bool,
}

pub const SCAN_COLUMNS: [&str; 9] = [
    "gt",
    "x1",
    "x2",
    "x3",
    "xi2_optimized",
    "xi2_fixed_frame",
    "negativity",
    "ppt_entangled",
    "xi2_flags_entangled",
];

impl ScanRow {
    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Num(self.gt),
            Cell::Num(self.x1),
            Cell::Num(self.x2),
            Cell::Num(self.x3),
            Cell::Num(self.xi2_optimized),
            Cell::Num(self.xi2_fixed_frame),
            Cell::Num(self.negativity),
            Cell::Bool(self.ppt_entangled),
            Cell::Bool(self.xi2_flags_entangled),
        ]
    }
}

/// Evaluates both criteria on the closed-form state at `gt`. An undefined
/// optimised ξ² (vanishing mean spin) is reported as infinite.
pub fn scan_row(n: u32, gt: f64) -> crate::Result<ScanRow> {
    let c = closed_form_coeffs(n, gt)?;
    let rho = family_density(&c)?;
    let xi2_optimized = match xi_squared(&rho, FramePolicy::PerpOptimal) {
        Ok(r) => r.value,
        Err(Error::ZeroMeanSpin(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(ScanRow {
        gt,
        x1: c.x1,
        x2: c.x2,
        x3: c.x3,
        xi2_optimized,
        xi2_fixed_frame: xi2_fixed_frame(&rho)?,
        negativity: negativity(&rho)?,
        ppt_entangled: ppt_entangled(&rho)?,
        xi2_flags_entangled: xi2_optimized < 1.0,
    })
}

/// `steps` equally spaced points on `[0, gt_max]`.
pub fn time_grid(gt_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| gt_max * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Largest deviation between exact evolution and the closed form over the
/// grid, counting every population and any leakage into the antisymmetric
/// state or off-diagonal Dicke-basis elements.
pub fn verify_closed_form(n: u32, grid: &[f64]) -> crate::Result<f64> {
    let evolver = Evolver::new(&ModelConfig::new(n, 0.0)?)?;
    let map = BasisMap::new();
    let mut worst = 0.0_f64;
    for &gt in grid {
        let rho = evolver.atomic_state(gt)?;
        let p = map.populations(&rho);
        let c = closed_form_coeffs(n, gt)?;
        let devs = [
            (p[0] - c.x1).abs(),
            (p[1] - c.x2).abs(),
            (p[2] - c.x3).abs(),
            p[3].abs(),
            map.off_family_residual(&rho),
            map.read_family(&rho).y.norm(),
        ];
        worst = devs.into_iter().fold(worst, f64::max);
    }
    Ok(worst)
}

fn scan_time(a: &ScanTimeArgs, format: Format) -> Result<Outcome, Failure> {
    if a.photons < 1 {
        return Err(Failure::usage("--photons must be at least 1"));
    }
    if !(a.gt_max.is_finite() && a.gt_max > 0.0) {
        return Err(Failure::usage(format!(
            "--gt-max must be a positive number, got {}",
            a.gt_max
        )));
    }
    if a.steps < 2 {
        return Err(Failure::usage(format!(
            "--steps must be at least 2, got {}",
            a.steps
        )));
    }
    let grid = time_grid(a.gt_max, a.steps);
    let rows = grid
        .iter()
        .map(|&gt| scan_row(a.photons, gt))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut notes = Vec::new();
    let mut code = EXIT_OK;
    let deviation = if a.verify {
        let dev = verify_closed_form(a.photons, &grid)?;
        notes.push(format!(
            "verify: max |exact - closed form| = {} (tolerance {})",
            sig(dev),
            sig(VERIFY_TOL)
        ));
        if dev > VERIFY_TOL {
            notes.push("error: closed-form populations disagree with exact evolution".into());
            code = EXIT_FAILURE;
        }
        Some(dev)
    } else {
        None
    };

    let mut table = Table::new(&SCAN_COLUMNS);
    for r in &rows {
        table.push(r.cells());
    }
    let document = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let meta = [
                ("command", Cell::Text("scan-time".into())),
                ("photons", Cell::Int(a.photons as i64)),
                ("gt_max", Cell::Num(a.gt_max)),
                ("steps", Cell::Int(a.steps as i64)),
                (
                    "verify_max_deviation",
                    deviation.map_or(Cell::Null, Cell::Num),
                ),
            ];
            table.to_json(&meta)
        }
    };
    Ok(Outcome {
        document,
        notes,
        code,
    })
}

pub const FAMILY_COLUMNS: [&str; 10] = [
    "x1",
    "x2",
    "x3",
    "y",
    "xi2_family",
    "squeezing_condition",
    "xi2_optimized",
    "negativity",
    "ppt_entangled",
    "xi2_flags_entangled",
];

fn xi2_cell(r: &crate::Result<f64>) -> Result<Cell, Failure> {
    match r {
        Ok(v) => Ok(Cell::Num(*v)),
        Err(Error::ZeroMeanSpin(_)) => Ok(Cell::Text("ZeroMeanSpin".into())),
        Err(e) => Err(e.clone().into()),
    }
}

fn family(a: &FamilyArgs, format: Format) -> Result<Outcome, Failure> {
    let c = FamilyCoeffs::new(a.x1, a.x2, a.x3, Complex64::new(a.y, 0.0))?;
    let report = family_report(&c, FramePolicy::PerpOptimal)?;
    let optimized = report.xi2_optimized.as_ref().map(|r| r.value).map_err(Clone::clone);
    let flags = optimized.as_ref().is_ok_and(|&v| v < 1.0);
    let mut table = Table::new(&FAMILY_COLUMNS);
    table.push(vec![
        Cell::Num(c.x1),
        Cell::Num(c.x2),
        Cell::Num(c.x3),
        Cell::Num(c.y.re),
        xi2_cell(&report.xi2_family)?,
        Cell::Bool(report.squeezing_condition),
        xi2_cell(&optimized)?,
        Cell::Num(report.negativity),
        Cell::Bool(report.ppt_entangled),
        Cell::Bool(flags),
    ]);
    Ok(Outcome {
        document: table.render(format, "family"),
        notes: Vec::new(),
        code: EXIT_OK,
    })
}

pub const STATE_COLUMNS: [&str; 14] = [
    "negativity",
    "min_pt_eigenvalue",
    "ppt_entangled",
    "xi2_optimized",
    "xi2_flags_entangled",
    "mean_x",
    "mean_y",
    "mean_z",
    "second_xx",
    "second_yy",
    "second_zz",
    "second_xy",
    "second_xz",
    "second_yz",
];

fn check_state(a: &CheckStateArgs, format: Format) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(&a.file)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", a.file.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("cannot parse {}: {e}", a.file.display())))?;
    let mat = file
        .to_matrix()
        .map_err(|e| Failure::input(format!("{}: {e}", a.file.display())))?;
    if file.dims != [2, 2] {
        return Err(Failure::numeric(format!(
            "dims must be [2, 2] for a two-atom state, got {:?}",
            file.dims
        )));
    }
    let rho = DensityMatrix::new(mat, file.dims.clone())
        .map_err(|e| Failure::numeric(format!("invalid density matrix: {e}")))?;

    let m = spin_moments(&rho)?;
    let optimized = xi_squared(&rho, FramePolicy::PerpOptimal).map(|r| r.value);
    let flags = optimized.as_ref().is_ok_and(|&v| v < 1.0);
    let mut table = Table::new(&STATE_COLUMNS);
    table.push(vec![
        Cell::Num(negativity(&rho)?),
        Cell::Num(min_pt_eigenvalue(&rho)?),
        Cell::Bool(ppt_entangled(&rho)?),
        xi2_cell(&optimized)?,
        Cell::Bool(flags),
        Cell::Num(m.mean[0]),
        Cell::Num(m.mean[1]),
        Cell::Num(m.mean[2]),
        Cell::Num(m.second[0][0]),
        Cell::Num(m.second[1][1]),
        Cell::Num(m.second[2][2]),
        Cell::Num(m.second[0][1]),
        Cell::Num(m.second[0][2]),
        Cell::Num(m.second[1][2]),
    ]);
    let mut notes = Vec::new();
    if let Err(e) = &optimized {
        notes.push(format!("note: {e}"));
    }
    Ok(Outcome {
        document: table.render(format, "check-state"),
        notes,
        code: EXIT_OK,
    })
}
