use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mgesc::closed_form::{energy_breakdown, ground_state_wavefunction_on, GroundStatePath};
use mgesc::moderated::WavefunctionDomain;
use mgesc::numerov::{solve_state, GridChoice};
use mgesc::quadrature::moderated_wavefunction_quad;
use mgesc::tables::{self, CsvRow, Precision, TABLE1_BETAS};
use mgesc::verify::{all_pass, verify, VerifyGrid, VerifyRecord};
use mgesc::{Error, PotentialParams, QuadratureSpec, QuantumNumbers, SolverConfig, TruncationOrder};

/// Energies and wavefunctions of the screened Coulomb potential
/// V(r) = -(a/r)[1 + (1 + b r) exp(-2 b r)], with β = b/a.
#[derive(Parser, Debug)]
#[command(name = "mgesc", version)]
struct Cli {
    /// Full-precision JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series energy of one state at a given truncation order.
    Energy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Truncation order in β: 0, 1, 3, 4 or 6 (2 and 5 are aliases).
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Series energies of 1s, 2s, 3s with reference values.
    Table1 {
        /// Comma list or start:stop:step.
        #[arg(long)]
        betas: Option<String>,
        /// Add the eigensolver column.
        #[arg(long)]
        numerov: bool,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Energies of 1s, 2s, 3s at every truncation order.
    Table2 {
        #[arg(long)]
        betas: Option<String>,
    },
    /// Eigenvalue of the full potential by shooting.
    Numerov {
        /// "1s", "2p", … or "n,l" with n the number of radial nodes.
        #[arg(long)]
        state: QuantumNumbers,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = mgesc::numerov::DEFAULT_POINTS)]
        points: usize,
    },
    /// Cross-checks between the three routes.
    Verify {
        /// Informational records count as failures too.
        #[arg(long)]
        strict: bool,
    },
    /// Perturbed wavefunction χ·exp(-∫W) sampled on [0, rmax].
    Wavefunction {
        #[arg(long)]
        state: QuantumNumbers,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Ground states only: integrate W numerically or use the closed
        /// polynomial exponent.
        #[arg(long, value_enum, default_value_t = PathArg::Numeric)]
        path: PathArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    Numeric,
    Closed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParameter(_)
                | Error::Domain { .. }
                | Error::UnsupportedState { .. }
                | Error::UnsupportedOrder(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn emit(text: &str) -> mgesc::Result<()> {
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| Error::NumericalFailure(format!("cannot write output: {e}")))
}

fn emit_json<T: Serialize>(value: &T) -> mgesc::Result<()> {
    emit(&(tables::to_json(value) + "\n"))
}

fn csv_lines(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

#[derive(Serialize)]
struct EnergyReport {
    n: u32,
    l: u32,
    beta: f64,
    a: f64,
    order: u32,
    energy: f64,
    energy_over_a2: f64,
    breakdown: mgesc::EnergyBreakdown,
}

#[derive(Serialize)]
struct NumerovReport {
    state: String,
    beta: f64,
    a: f64,
    energy: f64,
    energy_over_a2: f64,
    bracket: f64,
    bisections: usize,
    log_derivative_mismatch: f64,
}

#[derive(Serialize)]
struct Sample {
    r: f64,
    psi: f64,
}

fn run(cli: &Cli) -> mgesc::Result<ExitCode> {
    match &cli.command {
        Command::Energy { n, l, beta, a, order } => {
            let order = TruncationOrder::try_from(*order)?;
            let params = PotentialParams::from_beta(*a, *beta)?;
            let qn = QuantumNumbers::new(*n, *l);
            let breakdown = energy_breakdown(&params, qn)?;
            let energy = breakdown.total(order);
            let report = EnergyReport {
                n: *n,
                l: *l,
                beta: *beta,
                a: *a,
                order: order.power(),
                energy,
                energy_over_a2: energy / (a * a),
                breakdown,
            };
            if cli.json {
                emit_json(&report)?;
            } else {
                emit(&csv_lines(
                    &["n", "l", "beta", "a", "order", "energy", "energy_over_a2"],
                    [vec![
                        n.to_string(),
                        l.to_string(),
                        beta.to_string(),
                        a.to_string(),
                        report.order.to_string(),
                        format!("{energy:.7}"),
                        format!("{:.7}", report.energy_over_a2),
                    ]],
                ))?;
            }
        }
        Command::Table1 { betas, numerov, a } => {
            let betas = match betas {
                Some(spec) => tables::parse_betas(spec)?,
                None => TABLE1_BETAS.to_vec(),
            };
            let rows = tables::table1(&betas, *a, *numerov)?;
            emit_rows(cli.json, &rows)?;
        }
        Command::Table2 { betas } => {
            let rows = match betas {
                Some(spec) => tables::table2(&tables::parse_betas(spec)?)?,
                None => tables::table2_published()?,
            };
            emit_rows(cli.json, &rows)?;
        }
        Command::Numerov { state, beta, a, tol, points } => {
            let params = PotentialParams::from_beta(*a, *beta)?;
            let config = SolverConfig { grid: GridChoice::Auto { points: *points }, energy_tol: *tol, ..Default::default() };
            let s = solve_state(&params, *state, &config)?;
            let report = NumerovReport {
                state: state.label(),
                beta: *beta,
                a: *a,
                energy: s.energy,
                energy_over_a2: s.energy / (a * a),
                bracket: s.bracket,
                bisections: s.bisections,
                log_derivative_mismatch: s.shot.log_derivative_mismatch,
            };
            if cli.json {
                emit_json(&report)?;
            } else {
                emit(&csv_lines(
                    &["state", "beta", "a", "energy", "energy_over_a2", "bisections"],
                    [vec![
                        report.state.clone(),
                        beta.to_string(),
                        a.to_string(),
                        format!("{:.7}", report.energy),
                        format!("{:.7}", report.energy_over_a2),
                        report.bisections.to_string(),
                    ]],
                ))?;
            }
        }
        Command::Verify { strict } => {
            let records = verify(&VerifyGrid::default());
            if cli.json {
                emit_json(&records)?;
            } else {
                emit(&verify_csv(&records))?;
            }
            let failed = records.iter().filter(|r| !r.pass && (*strict || !r.informational)).count();
            eprintln!("{} checks, {} counted failures", records.len(), failed);
            if !all_pass(&records, *strict) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Wavefunction { state, beta, rmax, samples, a, path } => {
            if !(*rmax > 0.0 && rmax.is_finite()) || *samples < 2 {
                return Err(Error::InvalidParameter("need rmax > 0 and at least 2 samples".into()));
            }
            let params = PotentialParams::from_beta(*a, *beta)?;
            let domain = WavefunctionDomain { r_max: *rmax, ..WavefunctionDomain::for_state(&params, *state) };
            let eval: Box<dyn Fn(f64) -> f64> = if state.n == 0 {
                let path = match path {
                    PathArg::Numeric => GroundStatePath::NumericIntegral,
                    PathArg::Closed => GroundStatePath::ClosedFormExponent,
                };
                let w = ground_state_wavefunction_on(&params, state.l, path, domain)?;
                Box::new(move |r| w.eval(r))
            } else {
                if matches!(path, PathArg::Closed) {
                    return Err(Error::InvalidParameter("the closed exponent exists for ground states only".into()));
                }
                let w = moderated_wavefunction_quad(&params, *state, &QuadratureSpec::default())?;
                Box::new(move |r| w.eval(r))
            };
            let points: Vec<Sample> = (0..*samples)
                .map(|i| {
                    let r = rmax * i as f64 / (*samples - 1) as f64;
                    Sample { r, psi: eval(r) }
                })
                .collect();
            if cli.json {
                emit_json(&points)?;
            } else {
                emit(&csv_lines(
                    &["r", "psi"],
                    points.iter().map(|s| vec![format!("{:.7}", s.r), format!("{:.7e}", s.psi)]),
                ))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_rows<R: CsvRow + Serialize>(json: bool, rows: &[R]) -> mgesc::Result<()> {
    if json {
        emit_json(&rows)
    } else {
        emit(&tables::to_csv(rows, Precision::Fixed7))
    }
}

fn verify_csv(records: &[VerifyRecord]) -> String {
    csv_lines(
        &["check", "status", "lhs", "rhs", "rel_err", "tolerance", "informational"],
        records.iter().map(|r| {
            vec![
                r.check_name.clone(),
                r.status().to_string(),
                format!("{:.10e}", r.lhs),
                format!("{:.10e}", r.rhs),
                format!("{:.3e}", r.rel_err),
                format!("{:.1e}", r.tolerance),
                r.informational.to_string(),
            ]
        }),
    )
}
