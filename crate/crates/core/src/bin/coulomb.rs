use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use coulomb_starlike::admissibility::{constant_checks, extremize, ConstantCheck, ExtremumReport, FunctionTag};
use coulomb_starlike::analytic::eval_p_value;
use coulomb_starlike::series::{eval_f, eval_g, make_coefficients};
use coulomb_starlike::starlike::{certify, parameter_scan, write_scan_csv, ParamRange, ScanGrid, StarlikeClass};
use coulomb_starlike::zeros::find_zeros;
use coulomb_starlike::{output, CoefficientTable, CoulombParams, Error, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "coulomb", version, about = "Normalized Coulomb wave functions: evaluation, zeros and starlikeness checks")]
struct Cli {
    /// Target absolute tolerance (overrides COULOMB_TOL)
    #[arg(long, global = true, env = "COULOMB_TOL", default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f, g or P at one point
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, value_enum, default_value = "g")]
        function: Function,
    },
    /// Print the truncated Taylor coefficients of g(z)/z
    Coeffs {
        #[command(flatten)]
        params: ParamArgs,
        /// Radius at which the tail bound is stated
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Fixed truncation order; chosen from --tol when omitted
        #[arg(long)]
        order: Option<usize>,
    },
    /// List the zeros of g in a disk
    Zeros {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// Check a starlikeness class on a polar grid
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        class: StarlikeClass,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Certify a class over a real (L, eta) lattice; CSV on stdout
    Scan {
        #[arg(long = "L-min", allow_hyphen_values = true)]
        l_min: f64,
        #[arg(long = "L-max", allow_hyphen_values = true)]
        l_max: f64,
        #[arg(long = "L-step")]
        l_step: f64,
        #[arg(long = "eta-min", allow_hyphen_values = true)]
        eta_min: f64,
        #[arg(long = "eta-max", allow_hyphen_values = true)]
        eta_max: f64,
        #[arg(long = "eta-step")]
        eta_step: f64,
        #[arg(long)]
        class: StarlikeClass,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Recompute the extremal values behind the two class constants
    VerifyLemmas {
        #[arg(long, value_delimiter = ',', default_value = "1,2,5", value_parser = parse_m)]
        m: Vec<f64>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "L", allow_hyphen_values = true, value_parser = parse_complex)]
    l: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    eta: Complex64,
}

impl ParamArgs {
    fn params(&self) -> Result<CoulombParams, Error> {
        CoulombParams::new(self.l, self.eta)
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 40)]
    rings: usize,
    #[arg(long, default_value_t = 720)]
    angles: usize,
    #[arg(long = "r-max", default_value_t = 0.999)]
    r_max: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<ScanGrid, Error> {
        ScanGrid::uniform(self.r_max, self.rings, self.angles)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    F,
    G,
    #[value(name = "P")]
    P,
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, with `i` alone meaning `1i`.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    let bad = || format!("'{text}' is not a complex number of the form a+bi");
    if t.is_empty() {
        return Err(bad());
    }
    let imag = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn parse_tol(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got '{text}'")),
    }
}

fn parse_m(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(m) if m >= 1.0 && m.is_finite() => Ok(m),
        _ => Err(format!("m must be a number ≥ 1, got '{text}'")),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Precondition(_) | Error::Domain(_) => 2,
        Error::InvalidParams(_) => 3,
        Error::WindingMismatch { .. } => 5,
        Error::NoConvergence(_)
        | Error::Pole(_)
        | Error::BranchPoint(_)
        | Error::NearZeroOfG { .. }
        | Error::ZeroInDisk(_) => 4,
    }
}

#[derive(Serialize)]
struct LemmaReport {
    extrema: Vec<ExtremumReport>,
    constants: Vec<ConstantCheck>,
    pass: bool,
}

enum Payload {
    Json(String),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(value: &T) -> Payload {
    Payload::Json(output::to_json(value).expect("report types serialize"))
}

fn run(cli: &Cli) -> Result<(Payload, u8), Error> {
    let tol = cli.tol;
    match &cli.command {
        Command::Eval { params, z, function } => {
            let p = params.params()?;
            let value = match function {
                Function::F => eval_f(&p, *z, tol)?,
                Function::G => eval_g(&p, *z, tol)?,
                Function::P => eval_p_value(&p, *z, tol)?,
            };
            Ok((json(&value), 0))
        }
        Command::Coeffs { params, radius, order } => {
            let p = params.params()?;
            let table = match order {
                Some(n) => make_coefficients(&p, *n, *radius)?,
                None => CoefficientTable::to_tolerance(&p, *radius, tol, 0)?,
            };
            Ok((json(&table), 0))
        }
        Command::Zeros { params, radius } => {
            let p = params.params()?;
            Ok((json(&find_zeros(&p, *radius, tol)?), 0))
        }
        Command::Certify { params, class, grid } => {
            let p = params.params()?;
            let report = certify(&p, *class, &grid.grid()?, tol)?;
            let code = if report.certified { 0 } else { 1 };
            Ok((json(&report), code))
        }
        Command::Scan {
            l_min,
            l_max,
            l_step,
            eta_min,
            eta_max,
            eta_step,
            class,
            grid,
        } => {
            let ls = ParamRange::new(*l_min, *l_max, *l_step)?;
            let etas = ParamRange::new(*eta_min, *eta_max, *eta_step)?;
            let rows = parameter_scan(&ls, &etas, *class, &grid.grid()?, tol);
            let mut buf = Vec::new();
            write_scan_csv(&rows, &mut buf).expect("writing to memory");
            Ok((Payload::Csv(buf), 0))
        }
        Command::VerifyLemmas { m } => {
            let mut extrema = Vec::with_capacity(4 * m.len());
            for &mi in m {
                for tag in FunctionTag::ALL {
                    extrema.push(extremize(tag, mi, tag.expected_mode())?);
                }
            }
            let constants = constant_checks();
            let pass = extrema.iter().all(|r| r.pass) && constants.iter().all(|c| c.pass);
            let report = LemmaReport {
                extrema,
                constants,
                pass,
            };
            Ok((json(&report), if pass { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (payload, code) = match run(&cli) {
        Ok(out) => out,
        Err(err) => {
            eprintln!("error: {err}");
            if let Error::ZeroInDisk(report) = &err {
                (json(report.as_ref()), exit_code(&err))
            } else {
                return ExitCode::from(exit_code(&err));
            }
        }
    };
    let mut stdout = io::stdout().lock();
    let written = match payload {
        Payload::Json(text) => writeln!(stdout, "{text}"),
        Payload::Csv(bytes) => stdout.write_all(&bytes),
    };
    if written.and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(4);
    }
    ExitCode::from(code)
}
