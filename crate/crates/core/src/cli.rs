//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::deformed::DeformationParameter;
use crate::error::Error;
use crate::lattice::{build_lattice, LatticeSpec};
use crate::operators::{hamiltonian_free, PhysicalParams};
use crate::spectral::{
    case_energy, case_level, case_required_psi1, case_wavefunction, diagonalize, energy_bound,
    xi_from_energy, CaseKind, QuantizationCase, RecurrenceInit,
};
use crate::verification::{
    default_grid, grid_product, run_all_checks, GridPoint, VerificationReport, DEFAULT_GRID_ALPHA,
    DEFAULT_GRID_D,
};

/// Directory used for output files when `--out` is not given.
pub const OUT_DIR_ENV: &str = "ALPHA_RING_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "alpha-ring",
    version,
    about = "Quantum mechanics on a ring of α-uniformly distributed points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the lattice angles and spacing.
    #[command(allow_negative_numbers = true)]
    Lattice(LatticeArgs),
    /// Emit energy levels of a quantization case or of the oracle.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Sample a closed-form wavefunction on the lattice.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Run the verification catalogue over a (d, α) grid.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Text table (verify only).
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseSelector {
    Full,
    Quarter,
    Half,
    Threequarter,
    Oracle,
}

impl CaseSelector {
    fn kind(self) -> Option<CaseKind> {
        match self {
            CaseSelector::Full => Some(CaseKind::FullPeriod),
            CaseSelector::Quarter => Some(CaseKind::QuarterPeriod),
            CaseSelector::Half => Some(CaseKind::HalfPeriod),
            CaseSelector::Threequarter => Some(CaseKind::ThreeQuarterPeriod),
            CaseSelector::Oracle => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// Number of lattice points, 2..=4096.
    #[arg(long)]
    pub d: usize,
    /// Deformation parameter α > 0.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Number of lattice points, 2..=4096.
    #[arg(long)]
    pub d: usize,
    /// Deformation parameter α > 0.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum, default_value_t = CaseSelector::Full)]
    pub case: CaseSelector,
    /// Single quantum number; all of 0..d when omitted.
    #[arg(long = "N")]
    pub n: Option<i64>,
    /// Emit the full-period ladder next to the oracle spectrum.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    /// Number of lattice points, 2..=4096.
    #[arg(long)]
    pub d: usize,
    /// Deformation parameter α > 0.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum)]
    pub case: CaseSelector,
    /// Quantum number.
    #[arg(long = "N", default_value_t = 0)]
    pub n: i64,
    #[arg(long = "psi0-re")]
    pub psi0_re: Option<f64>,
    #[arg(long = "psi0-im")]
    pub psi0_im: Option<f64>,
    #[arg(long = "psi1-re")]
    pub psi1_re: Option<f64>,
    #[arg(long = "psi1-im")]
    pub psi1_im: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Single grid point (with --alpha).
    #[arg(long, requires = "alpha")]
    pub d: Option<usize>,
    #[arg(long, requires = "d")]
    pub alpha: Option<f64>,
    /// Comma-separated lattice sizes.
    #[arg(long = "grid-d", value_delimiter = ',', conflicts_with = "d")]
    pub grid_d: Option<Vec<usize>>,
    /// Comma-separated deformation parameters.
    #[arg(long = "grid-alpha", value_delimiter = ',', conflicts_with = "alpha")]
    pub grid_alpha: Option<Vec<f64>>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Toolkit(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Successful command outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

/// Exit code for errors: all are usage, domain or I/O failures.
pub const ERROR_EXIT_CODE: u8 = 2;

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn lattice_from(d: usize, alpha: f64) -> Result<LatticeSpec, CliError> {
    Ok(build_lattice(d, DeformationParameter::new(alpha)?)?)
}

fn params_from(p: &PhysicsArgs) -> Result<PhysicalParams, CliError> {
    Ok(PhysicalParams::new(p.hbar, p.mass, p.radius)?)
}

fn reject_text(format: Format) -> Result<(), CliError> {
    if format == Format::Text {
        Err(usage("--format text is only available for verify"))
    } else {
        Ok(())
    }
}

/// Output sink resolved from `--out` and [`OUT_DIR_ENV`].
fn open_sink<'a>(
    output: &OutputArgs,
    command: &str,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, CliError> {
    let path = match &output.out {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(format!("{command}.{}", output.format.extension()))),
    };
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn write_json<T: Serialize>(sink: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *sink, value)?;
    writeln!(sink)?;
    Ok(())
}

fn write_csv(
    sink: &mut dyn Write,
    header: &[&str],
    rows: Vec<Vec<String>>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Lattice(args) => cmd_lattice(args, stdout),
        Command::Spectrum(args) => cmd_spectrum(args, stdout),
        Command::Wavefunction(args) => cmd_wavefunction(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
    }
}

pub fn cmd_lattice(args: &LatticeArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    reject_text(args.output.format)?;
    let lattice = lattice_from(args.d, args.alpha)?;
    let mut sink = open_sink(&args.output, "lattice", stdout)?;
    match args.output.format {
        Format::Json => write_json(&mut *sink, &lattice)?,
        _ => {
            let rows = lattice
                .angles()
                .iter()
                .enumerate()
                .map(|(n, &th)| {
                    vec![
                        lattice.d().to_string(),
                        fmt_f64(lattice.alpha().value()),
                        fmt_f64(lattice.sigma()),
                        n.to_string(),
                        fmt_f64(th),
                    ]
                })
                .collect();
            write_csv(&mut *sink, &["d", "alpha", "sigma", "n", "theta"], rows)?;
        }
    }
    sink.flush()?;
    Ok(Outcome::Success)
}

/// One emitted energy level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub d: usize,
    pub alpha: f64,
    pub case: String,
    #[serde(rename = "N")]
    pub n: Option<i64>,
    pub xi: f64,
    pub energy: f64,
    pub bound: f64,
    pub provenance: String,
    pub folded: bool,
}

impl LevelRecord {
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            fmt_f64(self.alpha),
            self.case.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            fmt_f64(self.xi),
            fmt_f64(self.energy),
            fmt_f64(self.bound),
            self.provenance.clone(),
            self.folded.to_string(),
        ]
    }
}

const LEVEL_HEADER: [&str; 9] = [
    "d",
    "alpha",
    "case",
    "N",
    "xi",
    "energy",
    "bound",
    "provenance",
    "folded",
];

/// One row of `spectrum --compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRecord {
    pub index: usize,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub d: usize,
    pub alpha: f64,
    pub bound: f64,
    pub levels: Vec<CompareRecord>,
    pub max_abs_diff: f64,
}

fn oracle_levels(
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Result<Vec<LevelRecord>, CliError> {
    let bound = energy_bound(lattice, params);
    let h = hamiltonian_free(lattice, params);
    Ok(diagonalize(&h)?
        .into_iter()
        .map(|sol| {
            // rounding can push the edge eigenvalues just outside the band
            let xi = xi_from_energy(sol.energy.clamp(0.0, bound), lattice, params)
                .map(|x| x.value())
                .unwrap_or(f64::NAN);
            LevelRecord {
                d: lattice.d(),
                alpha: lattice.alpha().value(),
                case: "oracle".into(),
                n: None,
                xi,
                energy: sol.energy,
                bound,
                provenance: "oracle".into(),
                folded: false,
            }
        })
        .collect())
}

fn case_levels(
    kind: CaseKind,
    ns: impl Iterator<Item = i64>,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Vec<LevelRecord> {
    let bound = energy_bound(lattice, params);
    ns.map(|n| {
        let lvl = case_level(QuantizationCase::new(kind, n), lattice, params);
        LevelRecord {
            d: lattice.d(),
            alpha: lattice.alpha().value(),
            case: kind.name().into(),
            n: Some(n),
            xi: lvl.xi.value(),
            energy: lvl.energy,
            bound,
            provenance: "closed_form".into(),
            folded: lvl.folded,
        }
    })
    .collect()
}

pub fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    reject_text(args.output.format)?;
    if args.case == CaseSelector::Oracle && args.n.is_some() {
        return Err(usage("--N does not apply to --case oracle"));
    }
    if args.compare && !matches!(args.case, CaseSelector::Full | CaseSelector::Oracle) {
        return Err(usage(
            "--compare compares the full-period ladder with the oracle; use --case full or oracle",
        ));
    }
    if args.compare && args.n.is_some() {
        return Err(usage("--compare covers the whole spectrum; drop --N"));
    }
    let lattice = lattice_from(args.d, args.alpha)?;
    let params = params_from(&args.physics)?;
    let mut sink = open_sink(&args.output, "spectrum", stdout)?;

    if args.compare {
        let mut closed: Vec<f64> = case_levels(
            CaseKind::FullPeriod,
            0..lattice.d() as i64,
            &lattice,
            &params,
        )
        .into_iter()
        .map(|l| l.energy)
        .collect();
        closed.sort_by(f64::total_cmp);
        let oracle = oracle_levels(&lattice, &params)?;
        let levels: Vec<CompareRecord> = closed
            .iter()
            .zip(&oracle)
            .enumerate()
            .map(|(index, (&c, o))| CompareRecord {
                index,
                closed_form: c,
                oracle: o.energy,
                abs_diff: (c - o.energy).abs(),
            })
            .collect();
        let report = CompareReport {
            d: lattice.d(),
            alpha: lattice.alpha().value(),
            bound: energy_bound(&lattice, &params),
            max_abs_diff: levels.iter().map(|l| l.abs_diff).fold(0.0, f64::max),
            levels,
        };
        match args.output.format {
            Format::Json => write_json(&mut *sink, &report)?,
            _ => {
                let rows = report
                    .levels
                    .iter()
                    .map(|l| {
                        vec![
                            report.d.to_string(),
                            fmt_f64(report.alpha),
                            l.index.to_string(),
                            fmt_f64(l.closed_form),
                            fmt_f64(l.oracle),
                            fmt_f64(l.abs_diff),
                        ]
                    })
                    .collect();
                write_csv(
                    &mut *sink,
                    &["d", "alpha", "index", "closed_form", "oracle", "abs_diff"],
                    rows,
                )?;
            }
        }
        sink.flush()?;
        return Ok(Outcome::Success);
    }

    let records = match args.case.kind() {
        None => oracle_levels(&lattice, &params)?,
        Some(kind) => match args.n {
            Some(n) => case_levels(kind, std::iter::once(n), &lattice, &params),
            None => case_levels(kind, 0..lattice.d() as i64, &lattice, &params),
        },
    };
    match args.output.format {
        Format::Json => write_json(&mut *sink, &records)?,
        _ => write_csv(
            &mut *sink,
            &LEVEL_HEADER,
            records.iter().map(LevelRecord::csv_row).collect(),
        )?,
    }
    sink.flush()?;
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub n: usize,
    pub theta: f64,
    pub psi: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionRecord {
    pub d: usize,
    pub alpha: f64,
    pub case: String,
    #[serde(rename = "N")]
    pub n: i64,
    pub xi: f64,
    pub energy: f64,
    pub psi0: Complex64,
    pub psi1: Complex64,
    pub samples: Vec<Sample>,
}

/// Initial data from flags, filling gaps from the case's constraint.
fn resolve_init(
    args: &WavefunctionArgs,
    case: QuantizationCase,
    d: usize,
) -> Result<RecurrenceInit, CliError> {
    let given0 = args.psi0_re.is_some() || args.psi0_im.is_some();
    let given1 = args.psi1_re.is_some() || args.psi1_im.is_some();
    let psi0 = if given0 {
        Complex64::new(args.psi0_re.unwrap_or(0.0), args.psi0_im.unwrap_or(0.0))
    } else if case.kind == CaseKind::HalfPeriod {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let psi1 = if given1 {
        Complex64::new(args.psi1_re.unwrap_or(0.0), args.psi1_im.unwrap_or(0.0))
    } else if case.kind == CaseKind::HalfPeriod {
        Complex64::new(1.0, 0.0)
    } else {
        case_required_psi1(case, d, psi0).unwrap_or_else(|| psi0 * case.phase(d).cos())
    };
    Ok(RecurrenceInit::new(psi0, psi1)?)
}

pub fn cmd_wavefunction(
    args: &WavefunctionArgs,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    reject_text(args.output.format)?;
    let kind = args.case.kind().ok_or_else(|| {
        usage("wavefunction needs a closed-form case: full, quarter, half or threequarter")
    })?;
    let lattice = lattice_from(args.d, args.alpha)?;
    let params = params_from(&args.physics)?;
    let case = QuantizationCase::new(kind, args.n);
    let init = resolve_init(args, case, lattice.d())?;
    let psi = case_wavefunction(case, &lattice, init)?;
    let record = WavefunctionRecord {
        d: lattice.d(),
        alpha: lattice.alpha().value(),
        case: kind.name().into(),
        n: args.n,
        xi: case.xi(lattice.d()).value(),
        energy: case_energy(case, &lattice, &params),
        psi0: init.psi0,
        psi1: init.psi1,
        samples: psi
            .iter()
            .zip(lattice.angles())
            .enumerate()
            .map(|(n, (&psi, &theta))| Sample { n, theta, psi })
            .collect(),
    };
    let mut sink = open_sink(&args.output, "wavefunction", stdout)?;
    match args.output.format {
        Format::Json => write_json(&mut *sink, &record)?,
        _ => {
            let rows = record
                .samples
                .iter()
                .map(|s| {
                    vec![
                        s.n.to_string(),
                        fmt_f64(s.theta),
                        fmt_f64(s.psi.re),
                        fmt_f64(s.psi.im),
                    ]
                })
                .collect();
            write_csv(&mut *sink, &["n", "theta", "re_psi", "im_psi"], rows)?;
        }
    }
    sink.flush()?;
    Ok(Outcome::Success)
}

fn verify_grid(args: &VerifyArgs) -> Result<Vec<GridPoint>, CliError> {
    if let (Some(d), Some(alpha)) = (args.d, args.alpha) {
        return Ok(vec![GridPoint { d, alpha }]);
    }
    if args.grid_d.is_none() && args.grid_alpha.is_none() {
        return Ok(default_grid());
    }
    Ok(grid_product(
        args.grid_d.as_deref().unwrap_or(&DEFAULT_GRID_D),
        args.grid_alpha.as_deref().unwrap_or(&DEFAULT_GRID_ALPHA),
    ))
}

fn write_report(
    report: &VerificationReport,
    format: Format,
    sink: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(sink, report),
        Format::Text => {
            sink.write_all(report.to_text_table().as_bytes())?;
            Ok(())
        }
        Format::Csv => {
            let rows = report
                .checks
                .iter()
                .map(|c| {
                    let status = serde_json::to_value(c.status)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .unwrap_or_default();
                    vec![
                        c.name.clone(),
                        c.relation.clone(),
                        fmt_f64(c.max_residual),
                        fmt_f64(c.tolerance),
                        status,
                        c.worst_point.map(|p| p.d.to_string()).unwrap_or_default(),
                        c.worst_point.map(|p| fmt_f64(p.alpha)).unwrap_or_default(),
                    ]
                })
                .collect();
            write_csv(
                sink,
                &[
                    "name",
                    "relation",
                    "max_residual",
                    "tolerance",
                    "status",
                    "worst_d",
                    "worst_alpha",
                ],
                rows,
            )
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    for &a in args.alpha.iter().chain(args.grid_alpha.iter().flatten()) {
        DeformationParameter::new(a)?;
    }
    let grid = verify_grid(args)?;
    let params = params_from(&args.physics)?;
    let report = run_all_checks(&grid, &params)?;
    let mut sink = open_sink(&args.output, "verify", stdout)?;
    write_report(&report, args.output.format, &mut *sink)?;
    sink.flush()?;
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
