//! Command-line front end. `run` parses arguments, writes data to the given
//! output stream and messages to the error stream, and returns the exit code.

pub mod grid;
pub mod range;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperdelta::model::{self, PotentialParams};
use hyperdelta::observables::Extended;
use hyperdelta::{bound, scatter, zeromode, Error};
use serde::Serialize;

use grid::{fmt_float, Axis, Fixed, Quantity, ScanError, ScanGrid};
use range::Range;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperdelta", version, about = "Spectra, phase shifts and zero modes of the hyperspherical delta-delta' potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Potential {
    /// Spatial dimension (>= 2)
    #[arg(long)]
    pub d: u32,
    /// delta strength
    #[arg(long, allow_negative_numbers = true)]
    pub w0: f64,
    /// delta' strength
    #[arg(long, allow_negative_numbers = true)]
    pub w1: f64,
    /// Radius of the hypersphere
    #[arg(long)]
    pub x0: f64,
}

impl Potential {
    fn params(&self) -> hyperdelta::Result<PotentialParams> {
        PotentialParams::new(self.d, self.w0, self.w1, self.x0)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound states of every channel
    Spectrum {
        #[command(flatten)]
        potential: Potential,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Phase shift of one channel over a momentum grid
    PhaseShift {
        #[command(flatten)]
        potential: Potential,
        #[arg(long)]
        l: u32,
        /// Linear grid START:STOP:STEP
        #[arg(long, conflicts_with = "k_log", required_unless_present = "k_log")]
        k: Option<Range>,
        /// Logarithmic grid START:STOP, see --points
        #[arg(long, value_parser = parse_log_span)]
        k_log: Option<(f64, f64)>,
        /// Points of the logarithmic grid
        #[arg(long, default_value_t = 500, requires = "k_log")]
        points: usize,
        /// Remove the jumps of pi so the curve is continuous in k
        #[arg(long)]
        unwrap: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// The w0 at which channel l carries a zero-energy state
    ZeroMode {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_negative_numbers = true)]
        w1: f64,
        #[arg(long)]
        x0: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Mean radius of the channel-l bound state over x0
    MeanRadius {
        #[command(flatten)]
        potential: Potential,
        #[arg(long)]
        l: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// One quantity over a one- or two-parameter grid
    Scan {
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, allow_negative_numbers = true)]
        w0: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        w1: Option<f64>,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// NAME=START:STOP:STEP with NAME one of w0, w1, x0, k; the first is the row axis
        #[arg(long = "sweep", required = true, allow_hyphen_values = true)]
        sweeps: Vec<Axis>,
        /// Worker threads (default: one per core)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: ScanFormat,
    },
    /// Cross-check the analytic paths against the numerical oracle
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn parse_log_span(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected START:STOP")?;
    let a: f64 = a.parse().map_err(|_| format!("`{a}` is not a number"))?;
    let b: f64 = b.parse().map_err(|_| format!("`{b}` is not a number"))?;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err("need 0 < START < STOP".into());
    }
    Ok((a, b))
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Usage(m) => Failure::Usage(m),
            e @ ScanError::Numerical { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let help = matches!(e.kind(), DisplayHelp | DisplayVersion);
            let _ = if help { write!(out, "{e}") } else { write!(err, "{e}") };
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        // the reader went away (`| head`); nothing left to report to
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn extended(v: Extended) -> String {
    match v {
        Extended::Finite(x) => fmt_float(x),
        Extended::Infinite => "INF".into(),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Spectrum { potential, format } => spectrum(&potential.params()?, format, out),
        Command::PhaseShift {
            potential,
            l,
            k,
            k_log,
            points,
            unwrap,
            format,
        } => {
            let p = potential.params()?;
            let ks = match (k, k_log) {
                (Some(r), _) => r.values(),
                (None, Some((a, b))) => range::log_points(a, b, points.max(1)),
                (None, None) => return Err(Failure::Usage("give --k or --k-log".into())),
            };
            phase_shift(&p, l, &ks, unwrap, format, out)
        }
        Command::ZeroMode { d, l, w1, x0, format } => zero_mode(d, l, w1, x0, format, out),
        Command::MeanRadius { potential, l, format } => mean_radius(&potential.params()?, l, format, out),
        Command::Scan {
            quantity,
            d,
            l,
            w0,
            w1,
            x0,
            k,
            sweeps,
            jobs,
            format,
        } => {
            let fixed = Fixed { d, ell: l, w0, w1, x0, k };
            let grid = ScanGrid::compute(quantity, fixed, sweeps, jobs)?;
            match format {
                ScanFormat::Csv => out.write_all(grid.to_csv().as_bytes())?,
                ScanFormat::Json => json(out, &grid)?,
            }
            Ok(())
        }
        Command::Verify { trials, seed, format } => verify(trials, seed, format, out),
    }
}

fn spectrum(p: &PotentialParams, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let s = bound::spectrum(p)?;
    match format {
        Format::Json => return json(out, &s),
        Format::Csv => {
            writeln!(out, "# params: d={} w0={:?} w1={:?} x0={:?} lmax={} N={}", p.d, p.w0, p.w1, p.x0, fmt_float(s.l_max.value), s.total_count)?;
            writeln!(out, "l,kappa,lambda,deg,N")?;
        }
        Format::Table => {
            writeln!(out, "L_max = {:.6}", s.l_max.value)?;
            writeln!(out, "{:>4} {:>24} {:>24} {:>10} {:>10}", "l", "kappa", "lambda", "deg", "N")?;
        }
    }
    let mut running = 0u128;
    for st in &s.states {
        running += st.degeneracy;
        match format {
            Format::Csv => writeln!(out, "{},{},{},{},{}", st.ell, fmt_float(st.kappa), fmt_float(st.lambda), st.degeneracy, running)?,
            _ => writeln!(out, "{:>4} {:>24} {:>24} {:>10} {:>10}", st.ell, fmt_float(st.kappa), fmt_float(st.lambda), st.degeneracy, running)?,
        }
    }
    if format == Format::Table {
        writeln!(out, "N = {}", s.total_count)?;
        if let Some(l) = s.boundary_channel {
            writeln!(out, "channel l = {l} is at threshold (zero-energy solution)")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PhaseRow {
    k: f64,
    delta: f64,
    re_s: f64,
    im_s: f64,
}

fn phase_shift(p: &PotentialParams, ell: u32, ks: &[f64], unwrap: bool, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let shifts = ks.iter().map(|&k| scatter::phase_shift(p, ell, k)).collect::<Result<Vec<_>, _>>()?;
    let mut deltas: Vec<f64> = shifts.iter().map(|s| s.delta).collect();
    if unwrap {
        deltas = scatter::unwrap_phases(&deltas);
    }
    let rows: Vec<PhaseRow> = shifts
        .iter()
        .zip(&deltas)
        .map(|(s, &delta)| PhaseRow {
            k: s.k,
            delta,
            re_s: s.s_eigenvalue.re,
            im_s: s.s_eigenvalue.im,
        })
        .collect();
    match format {
        Format::Json => json(out, &rows),
        Format::Csv | Format::Table => {
            if format == Format::Csv {
                writeln!(out, "# params: d={} l={ell} w0={:?} w1={:?} x0={:?} unwrap={unwrap}", p.d, p.w0, p.w1, p.x0)?;
                writeln!(out, "k,delta,re_s,im_s")?;
            } else {
                writeln!(out, "{:>24} {:>24} {:>24} {:>24}", "k", "delta", "Re S", "Im S")?;
            }
            for r in &rows {
                let f = [r.k, r.delta, r.re_s, r.im_s].map(fmt_float);
                if format == Format::Csv {
                    writeln!(out, "{}", f.join(","))?;
                } else {
                    writeln!(out, "{:>24} {:>24} {:>24} {:>24}", f[0], f[1], f[2], f[3])?;
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ZeroModeRecord {
    d: u32,
    ell: u32,
    eta: i64,
    w1: f64,
    x0: f64,
    /// None when eta > 0.
    w0: Option<f64>,
}

fn zero_mode(d: u32, ell: u32, w1: f64, x0: f64, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let eta = model::eta(d, ell);
    if d < 2 {
        return Err(Failure::Usage(format!("dimension must be at least 2, got {d}")));
    }
    let w0 = match zeromode::surface_w0(d, ell, w1, x0) {
        Ok(w) => Some(w),
        Err(Error::NoZeroMode { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let shown = w0.map_or_else(|| "none (η>0)".to_string(), fmt_float);
    match format {
        Format::Json => json(out, &ZeroModeRecord { d, ell, eta, w1, x0, w0 }),
        Format::Csv => {
            writeln!(out, "d,l,eta,w1,x0,w0")?;
            let w = w0.map_or_else(|| "NOSTATE".to_string(), fmt_float);
            writeln!(out, "{d},{ell},{eta},{},{},{w}", fmt_float(w1), fmt_float(x0))?;
            Ok(())
        }
        Format::Table => {
            writeln!(out, "{shown}")?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct MeanRadiusRecord {
    params: PotentialParams,
    ell: u32,
    /// None: no bound state (and not at threshold).
    kappa: Option<f64>,
    ratio: Option<Extended>,
}

fn mean_radius(p: &PotentialParams, ell: u32, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let found = grid::mean_radius_ratio(p, ell)?;
    let (kappa, ratio) = (found.map(|f| f.0), found.map(|f| f.1));
    let shown = ratio.map_or_else(|| "NOSTATE".to_string(), extended);
    match format {
        Format::Json => json(out, &MeanRadiusRecord { params: *p, ell, kappa, ratio }),
        Format::Csv => {
            writeln!(out, "# params: d={} l={ell} w0={:?} w1={:?} x0={:?}", p.d, p.w0, p.w1, p.x0)?;
            writeln!(out, "l,kappa,mean_radius_ratio")?;
            let k = kappa.map_or_else(|| "NOSTATE".to_string(), fmt_float);
            writeln!(out, "{ell},{k},{shown}")?;
            Ok(())
        }
        Format::Table => {
            writeln!(out, "{shown}")?;
            Ok(())
        }
    }
}

fn verify(trials: usize, seed: u64, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let checks = verify::run(trials, seed);
    match format {
        Format::Json => json(out, &checks)?,
        Format::Csv => {
            writeln!(out, "check,trials,worst,tolerance,failures")?;
            for c in &checks {
                writeln!(out, "{},{},{},{},{}", c.name, c.trials, fmt_float(c.worst), fmt_float(c.tolerance), c.failures)?;
            }
        }
        Format::Table => {
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {:<46} trials={:<5} worst={:.3e} tol={:.0e}", c.name, c.trials, c.worst, c.tolerance)?;
                if !c.note.is_empty() {
                    writeln!(out, "     first failure: {}", c.note)?;
                }
            }
        }
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed.join("; ")))
    }
}
