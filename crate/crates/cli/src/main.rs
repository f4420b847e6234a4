use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cartan_core::ising::{self, IsingParams};
use cartan_core::rootsys::{self, Color, RootSystemId};
use cartan_core::verify::{self, Selection};
use cartan_core::{qdeform, spectral, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cartan", version, about = "Cartan matrices, Coxeter elements and their spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, Coxeter number, exponents and bipartite coloring.
    Catalog {
        system: RootSystemId,
        #[arg(long)]
        json: bool,
    },
    /// Run a named verification, or `all`.
    Verify {
        /// steinberg, e8-factorization, e6-factorization, gamma-alpha, root-image,
        /// e8-eigvecs, e6-eigvecs, pf-zamolodchikov, q-spectrum, q-certificate,
        /// ising-symmetry or all
        name: Selection,
        #[arg(long)]
        json: bool,
        /// Replace every check's default tolerance.
        #[arg(long, value_parser = nonnegative)]
        tolerance: Option<f64>,
    },
    /// Cartan spectrum, or the q-deformed spectrum with `--q`.
    Eigen {
        system: RootSystemId,
        #[arg(long, value_parser = positive)]
        q: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Momentum-resolved spectrum of the periodic Ising chain as `p,epsilon` CSV.
    Ising {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long = "j", alias = "J", default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 0.5)]
        hx: f64,
        #[arg(long, default_value_t = 0.0)]
        hz: f64,
        /// Fit this many bands to the lattice dispersion (exploratory).
        #[arg(long, default_value_t = 0)]
        bands: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON destination for band fits; stderr when absent.
        #[arg(long)]
        fits: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn positive(s: &str) -> Result<f64, String> {
    let q: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if q > 0.0 && q.is_finite() {
        Ok(q)
    } else {
        Err(format!("must be positive and finite, got {q}"))
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t >= 0.0 {
        Ok(t)
    } else {
        Err(format!("must be nonnegative, got {t}"))
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::InvalidRootSystem(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Catalog { system, json } => catalog(system, json).map(|_| true),
        Command::Verify { name, json, tolerance } => {
            let reports = verify::run_selection(name, tolerance)?;
            if json {
                print_json(&reports)?;
            } else {
                for r in &reports {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    println!("{status} {:<18} deviation {:e} (tol {:e})  {}", r.name, r.deviation, r.tolerance, r.details);
                }
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Eigen { system, q, format } => eigen(system, q, format).map(|_| true),
        Command::Ising { n, j, hx, hz, bands, out, fits } => {
            let params = IsingParams::new(n, j, hz, hx)?;
            ising_cmd(params, bands, out, fits).map(|_| true)
        }
    }
}

fn catalog(id: RootSystemId, json: bool) -> Result<(), Failure> {
    let d = rootsys::data(id);
    if json {
        return print_json(&d);
    }
    println!("{id}  rank {}  h = {}", d.rank, d.h);
    print!("{}", d.cartan);
    let exps: Vec<String> = d.exponents.iter().map(u32::to_string).collect();
    println!("exponents {}", exps.join(" "));
    let colors: String = d.coloring.0.iter().map(|c| if *c == Color::Black { 'B' } else { 'W' }).collect();
    println!("coloring  {colors}");
    Ok(())
}

#[derive(Serialize)]
struct QOutput {
    system: RootSystemId,
    undeformed: Vec<f64>,
    #[serde(flatten)]
    report: qdeform::QReport,
}

fn eigen(id: RootSystemId, q: Option<f64>, format: Format) -> Result<(), Failure> {
    let spec = spectral::cartan_spectrum(id)?;
    match q {
        None => match format {
            Format::Json => print_json(&spec)?,
            Format::Csv => {
                println!("k,lambda,residual");
                for p in &spec.pairs {
                    println!("{},{},{}", p.k, p.lambda, p.residual);
                }
            }
            Format::Text => {
                println!("{id}  h = {}", spec.pairs.first().map_or(0, |p| p.h));
                for p in &spec.pairs {
                    println!("k = {:>2}  lambda = {:.12}  residual {:.1e}", p.k, p.lambda, p.residual);
                }
            }
        },
        Some(q) => {
            let d = qdeform::deform(&rootsys::cartan_matrix(id))?;
            let report = d.report(q)?;
            let out = QOutput { system: id, undeformed: spec.lambdas(), report };
            match format {
                Format::Json => print_json(&out)?,
                Format::Csv => {
                    println!("lambda,lambda_q");
                    for (l, lq) in out.undeformed.iter().zip(&out.report.eigenvalues) {
                        println!("{l},{lq}");
                    }
                }
                Format::Text => {
                    let ev: Vec<String> = out.report.exponent_vector.iter().map(i64::to_string).collect();
                    println!("{id}  q = {q}  exponent vector ({})", ev.join(", "));
                    for (l, lq) in out.undeformed.iter().zip(&out.report.eigenvalues) {
                        println!("lambda = {l:.12}  lambda(q) = {lq:.12}");
                    }
                    println!("certificate deviation {:.1e}", out.report.certificate_deviation);
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FitOutput {
    exploratory: bool,
    params: IsingParams,
    ground_energy: f64,
    ground_k: i64,
    /// `m₂/m₁` when at least two bands were fitted.
    mass_ratio: Option<f64>,
    bands: Vec<ising::BandFit>,
}

fn ising_cmd(params: IsingParams, bands: usize, out: Option<PathBuf>, fits: Option<PathBuf>) -> Result<(), Failure> {
    let spec = ising::momentum_spectrum(params, false)?;
    match out {
        Some(path) => ising::write_csv(&spec.levels, BufWriter::new(File::create(path)?))?,
        None => ising::write_csv(&spec.levels, io::stdout().lock())?,
    }
    if bands > 0 {
        let fitted = ising::dispersion_probe(&spec, bands)?;
        let mass_ratio = (fitted.len() >= 2 && fitted[0].mass > 0.0).then(|| fitted[1].mass / fitted[0].mass);
        let payload = FitOutput {
            exploratory: true,
            params,
            ground_energy: spec.ground_energy,
            ground_k: spec.ground_k,
            mass_ratio,
            bands: fitted,
        };
        match fits {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                serde_json::to_writer_pretty(&mut w, &payload)?;
                writeln!(w)?;
            }
            None => {
                let mut e = io::stderr().lock();
                serde_json::to_writer_pretty(&mut e, &payload)?;
                writeln!(e)?;
            }
        }
    }
    Ok(())
}
