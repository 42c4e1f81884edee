//! `lsys` command-line front end.
//!
//! Exit codes: 0 success, 1 regression mismatch, 2 input or validation
//! error, 3 evaluation point in the spectrum.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cmatrix::{CMatrix, C64, I};
use crate::coupling::couple;
use crate::entropy::{self, entropy_surface, ExtendedReal, DEFAULT_SURFACE};
use crate::error::{Error, Result};
use crate::io::{format_complex, parse_complex, read_json, to_json, write_json};
use crate::lsystem::{LSystem, SystemFile};
use crate::models::{ModelKind, ModelSpec};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SPECTRUM: i32 = 3;

/// Tolerance of `lsys example` against the published values.
pub const EXAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "lsys", version, about = "Livšic L-systems: transfer functions, c-entropy and couplings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    D,
    M,
    A,
    General,
}

impl From<KindArg> for ModelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::D => ModelKind::Dissipative,
            KindArg::M => ModelKind::Mixed,
            KindArg::A => ModelKind::Accumulative,
            KindArg::General => ModelKind::General,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    D,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum What {
    Transfer,
    Impedance,
}

fn complex_arg(s: &str) -> std::result::Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a model system and write it as JSON.
    Model {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        lambda0: Option<C64>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        lambda: Option<C64>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        mu: Option<C64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the transfer or impedance function of a system at z.
    Eval {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_enum, default_value = "transfer")]
        what: What,
    },
    /// Print the entropy report of a system.
    Entropy {
        #[arg(long)]
        system: PathBuf,
    },
    /// Couple two systems (left factor first).
    Couple {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the entropy surface of a model family as CSV.
    Surface {
        #[arg(long, value_enum)]
        kind: SurfaceKind,
        #[arg(long, default_value_t = DEFAULT_SURFACE.0 .0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = DEFAULT_SURFACE.0 .1, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = DEFAULT_SURFACE.1 .0, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = DEFAULT_SURFACE.1 .1, allow_hyphen_values = true)]
        y_max: f64,
        #[arg(long, default_value_t = DEFAULT_SURFACE.2)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property suites.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
    },
    /// Reproduce the worked examples at λ₀ = i (1) or λ₀ = 1+i (2).
    Example {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        n: u8,
    },
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<A, T>(args: A) -> i32
where
    A: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let mut stdout = String::new();
    let outcome = dispatch(cli.command, &mut stdout);
    print!("{stdout}");
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SpectrumHit { .. } | Error::PoleHit { .. } => EXIT_SPECTRUM,
        _ => EXIT_INPUT,
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Parse(format!("{} is not a readable file", path.display())))
    }
}

fn require_writable(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if parent.is_dir() && !path.is_dir() {
        Ok(())
    } else {
        Err(Error::Parse(format!("cannot write to {}", path.display())))
    }
}

fn emit(out: &mut String, path: Option<&Path>, payload: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, payload)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            out.push_str(payload);
            Ok(())
        }
    }
}

fn dispatch(command: Command, out: &mut String) -> Result<i32> {
    match command {
        Command::Model {
            kind,
            lambda0,
            lambda,
            mu,
            out: path,
        } => {
            if let Some(p) = &path {
                require_writable(p)?;
            }
            let spec = model_spec(kind.into(), lambda0, lambda, mu)?;
            let sys = spec.build()?;
            let mut text = to_json(&sys)?;
            text.push('\n');
            emit(out, path.as_deref(), &text)?;
            eprintln!(
                "{:?} model valid: ||Im T - K J K*||_F = {:.3e}",
                spec.kind(),
                sys.imbalance_residual()
            );
            Ok(EXIT_OK)
        }
        Command::Eval { system, z, what } => {
            require_file(&system)?;
            let sys: LSystem = read_json(&system)?;
            let value = match what {
                What::Transfer => sys.transfer(z)?,
                What::Impedance => sys.impedance(z)?,
            };
            let payload = EvalOutput {
                z,
                what,
                value: value.to_rows(),
            };
            out.push_str(&to_json(&payload)?);
            out.push('\n');
            Ok(EXIT_OK)
        }
        Command::Entropy { system } => {
            require_file(&system)?;
            let sys: LSystem = read_json(&system)?;
            let report = entropy::report(&sys)?;
            out.push_str(&to_json(&report)?);
            out.push('\n');
            Ok(EXIT_OK)
        }
        Command::Couple { left, right, out: path } => {
            require_file(&left)?;
            require_file(&right)?;
            if let Some(p) = &path {
                require_writable(p)?;
            }
            let l: LSystem = read_json(&left)?;
            let r: LSystem = read_json(&right)?;
            let result = couple(&l, &r)?;
            let file = CoupledFile {
                system: SystemFile::from(&result.coupled),
                provenance: Provenance {
                    left: left.display().to_string(),
                    right: right.display().to_string(),
                },
            };
            match &path {
                Some(p) => write_json(p, &file)?,
                None => {
                    out.push_str(&to_json(&file)?);
                    out.push('\n');
                }
            }
            eprintln!(
                "coupled n = {} + {}: ||Im T - K J K*||_F = {:.3e}",
                l.state_dim(),
                r.state_dim(),
                result.coupled.imbalance_residual()
            );
            Ok(EXIT_OK)
        }
        Command::Surface {
            kind,
            x_min,
            x_max,
            y_min,
            y_max,
            step,
            out: path,
        } => {
            if let Some(p) = &path {
                require_writable(p)?;
            }
            let kind = match kind {
                SurfaceKind::D => ModelKind::Dissipative,
                SurfaceKind::A => ModelKind::Accumulative,
            };
            let grid = entropy_surface(kind, (x_min, x_max), (y_min, y_max), step)?;
            emit(out, path.as_deref(), &grid.to_csv())?;
            let (i, j) = grid.nearest_to_singularity();
            eprintln!(
                "{} x {} grid; value at ({}, {}) = {}",
                grid.x_axis.len(),
                grid.y_axis.len(),
                grid.x_axis[i],
                grid.y_axis[j],
                grid.values[i][j]
            );
            Ok(EXIT_OK)
        }
        Command::Verify { seed, cases } => {
            let report = verify::run_all(seed, cases as usize)?;
            eprintln!("{report}");
            out.push_str(&to_json(&report)?);
            out.push('\n');
            Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Example { n } => {
            let table = example_table(n)?;
            out.push_str(&table.to_csv());
            eprintln!("{}", table.summary);
            Ok(if table.passed() { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

fn model_spec(kind: ModelKind, lambda0: Option<C64>, lambda: Option<C64>, mu: Option<C64>) -> Result<ModelSpec> {
    let missing = |what: &str| Error::Domain(format!("--{what} is required for this kind"));
    let unused = |what: &str| Error::Domain(format!("--{what} does not apply to this kind"));
    match kind {
        ModelKind::General => {
            if lambda0.is_some() {
                return Err(unused("lambda0"));
            }
            Ok(ModelSpec::General {
                lambda: lambda.ok_or_else(|| missing("lambda"))?,
                mu: mu.ok_or_else(|| missing("mu"))?,
            })
        }
        _ => {
            if lambda.is_some() || mu.is_some() {
                return Err(unused("lambda/--mu"));
            }
            let lambda0 = lambda0.ok_or_else(|| missing("lambda0"))?;
            Ok(match kind {
                ModelKind::Dissipative => ModelSpec::Dissipative { lambda0 },
                ModelKind::Mixed => ModelSpec::Mixed { lambda0 },
                _ => ModelSpec::Accumulative { lambda0 },
            })
        }
    }
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    z: C64,
    what: What,
    value: Vec<Vec<C64>>,
}

#[derive(Debug, Serialize)]
struct Provenance {
    left: String,
    right: String,
}

#[derive(Debug, Serialize)]
struct CoupledFile {
    #[serde(flatten)]
    system: SystemFile,
    provenance: Provenance,
}

/// One checked row of the example table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleRow {
    pub system: &'static str,
    pub quantity: String,
    pub value: String,
    pub target: String,
    pub residual: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleTable {
    pub rows: Vec<ExampleRow>,
    pub summary: String,
}

impl ExampleTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("system,quantity,value,target,residual,status\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{:e},{}",
                r.system,
                r.quantity,
                r.value,
                r.target,
                r.residual,
                if r.ok { "ok" } else { "MISMATCH" }
            );
        }
        s
    }
}

fn matrix_rows(rows: &mut Vec<ExampleRow>, system: &'static str, label: &str, z: C64, got: &CMatrix, want: &CMatrix) {
    for r in 0..got.rows() {
        for c in 0..got.cols() {
            let residual = (got[(r, c)] - want[(r, c)]).norm();
            rows.push(ExampleRow {
                system,
                quantity: format!("{label}({})[{r}{c}]", format_complex(z)),
                value: format_complex(got[(r, c)]),
                target: format_complex(want[(r, c)]),
                residual,
                ok: residual <= EXAMPLE_TOL,
            });
        }
    }
}

fn scalar_row(rows: &mut Vec<ExampleRow>, system: &'static str, quantity: &str, got: ExtendedReal, want: ExtendedReal) {
    let (residual, ok) = match (got, want) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ((a - b).abs(), (a - b).abs() <= EXAMPLE_TOL),
        _ => (if got == want { 0.0 } else { f64::INFINITY }, got == want),
    };
    rows.push(ExampleRow {
        system,
        quantity: quantity.to_string(),
        value: got.to_string(),
        target: want.to_string(),
        residual,
        ok,
    });
}

/// The worked examples: `n = 1` at `λ₀ = i`, `n = 2` at `λ₀ = 1 + i`.
pub fn example_table(n: u8) -> Result<ExampleTable> {
    let (lambda0, spots) = match n {
        1 => (I, [C64::new(0.0, 2.0), C64::new(0.5, -2.0), C64::new(3.0, 0.0)]),
        2 => (C64::new(1.0, 1.0), [C64::new(0.0, 2.0), C64::new(0.5, -2.0), C64::new(3.0, 0.0)]),
        _ => return Err(Error::Domain(format!("example {n} does not exist; use 1 or 2"))),
    };
    let ln5 = 5f64.ln();
    let (s_targets, c_targets) = if n == 1 {
        (
            [ExtendedReal::PlusInfinity, ExtendedReal::Finite(0.0), ExtendedReal::MinusInfinity],
            [1.0, 0.0, 1.0],
        )
    } else {
        (
            [ExtendedReal::Finite(ln5), ExtendedReal::Finite(0.0), ExtendedReal::Finite(-ln5)],
            [24.0 / 25.0, 0.0, 24.0 / 25.0],
        )
    };
    let specs = [
        ("d", ModelSpec::Dissipative { lambda0 }),
        ("m", ModelSpec::Mixed { lambda0 }),
        ("a", ModelSpec::Accumulative { lambda0 }),
    ];
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (idx, (name, spec)) in specs.iter().enumerate() {
        let sys = spec.build()?;
        for &z in &spots {
            matrix_rows(&mut rows, name, "W", z, &sys.transfer(z)?, &spec.closed_transfer(z)?);
        }
        for &z in &spots {
            let want = if n == 1 {
                CMatrix::identity(2).scale(-1.0 / z)
            } else {
                spec.closed_impedance(z)?
            };
            matrix_rows(&mut rows, name, "V", z, &sys.impedance(z)?, &want);
        }
        let report = entropy::report(&sys)?;
        scalar_row(&mut rows, name, "S", report.entropy, s_targets[idx]);
        scalar_row(
            &mut rows,
            name,
            "coefficient",
            ExtendedReal::Finite(report.coefficient),
            ExtendedReal::Finite(c_targets[idx]),
        );
        reports.push(report);
    }
    let summary = if n == 1 {
        format!(
            "S_d={}, D_d={}, S_m={}, D_m={}, S_a={}, A_a={}",
            reports[0].entropy,
            reports[0].coefficient,
            zero_or(reports[1].entropy),
            reports[1].coefficient,
            reports[2].entropy,
            reports[2].coefficient
        )
    } else {
        format!(
            "S_d=ln5={:.6}, D_d={:.6}, S_m={}, S_a=-ln5, A_a={:.6}",
            reports[0].entropy.to_f64(),
            reports[0].coefficient,
            zero_or(reports[1].entropy),
            reports[2].coefficient
        )
    };
    Ok(ExampleTable { rows, summary })
}

fn zero_or(s: ExtendedReal) -> String {
    match s {
        ExtendedReal::Finite(0.0) => "0".to_string(),
        other => other.to_string(),
    }
}
