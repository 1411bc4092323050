mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use simulroots::certify::{
    certificate_from_e, phi_sequence_monotonicity, remark_b_of_a, solve_threshold_equation,
    Certificate, CertificateKind, L1Equation,
};
use simulroots::compare::threshold_table;
use simulroots::fmt::{f64_str, sig_digits};
use simulroots::localize::{inclusion_disks, InclusionDisk};
use simulroots::simul::step_quantities;
use simulroots::solve::{default_start, run, IterationTrace, RunConfig, Status, StopRule};
use simulroots::{Error, Method, NormParameter};

/// Exit codes.
const EXIT_OK: u8 = 0;
const EXIT_NOT_DONE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CERTIFICATE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "simulroots",
    version,
    about = "Simultaneous polynomial root finding with convergence certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct ProblemArgs {
    /// Polynomial file `{"degree", "coeffs"}` or a corpus instance.
    polynomial: PathBuf,
    /// Initial point file: `[[re, im], ...]` or `{"points": ...}`.
    initial: Option<PathBuf>,
    /// Named initial point of a corpus instance.
    #[arg(long)]
    point: Option<String>,
    #[arg(long, default_value = "ehrlich")]
    method: Method,
    /// Norm parameter: a number >= 1 or `inf`.
    #[arg(long, default_value = "inf")]
    p: NormParameter,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate from an initial point and print the trace.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        /// `aposteriori` or `wnorm`.
        #[arg(long, default_value = "aposteriori")]
        stop: StopRule,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Refuse to iterate unless the method's initial condition holds.
        #[arg(long)]
        require_certificate: bool,
        /// Attach true errors from extended-precision reference roots.
        #[arg(long)]
        oracle: bool,
        /// Seed for the default start when no initial point is given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the method's initial condition at a point.
    Certify {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Add the inclusion disks (requires the localization condition).
        #[arg(long)]
        disks: bool,
        /// Decide boundary cases against the certificate.
        #[arg(long)]
        pessimistic: bool,
    },
    /// Table of admissible radii per degree.
    Compare {
        /// Degree range `lo..hi` (inclusive).
        #[arg(long, default_value = "3..30")]
        n_range: String,
        #[arg(long, default_value = "inf")]
        p: NormParameter,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Derived constants: the p = 1 radii, peak values and B(A) samples.
    Constants,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            problem,
            tol,
            max_iters,
            stop,
            format,
            require_certificate,
            oracle,
            seed,
        } => {
            let config = RunConfig {
                method: problem.method,
                p: problem.p,
                max_iters,
                stop,
                tol,
                seed,
                oracle,
            };
            cmd_solve(&problem, &config, format, require_certificate)
        }
        Command::Certify {
            problem,
            disks,
            pessimistic,
        } => cmd_certify(&problem, disks, pessimistic),
        Command::Compare { n_range, p, format } => cmd_compare(&n_range, p, format),
        Command::Constants => cmd_constants(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::DegreeTooSmall(_)
        | Error::CoefficientCount { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidNorm(_)
        | Error::NonFinite
        | Error::DistinctnessViolation { .. } => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Parse(e.to_string())),
        _ => Ok(()),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(f64_str).unwrap_or_default()
}

fn write_trace_csv(trace: &IterationTrace) -> Result<(), Error> {
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let mut header: Vec<String> = [
        "k",
        "w_norm",
        "e",
        "a_posteriori",
        "a_posteriori_guarded",
        "a_priori",
        "true_error",
        "order_ratio",
        "stop_measure",
        "stop_value",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for i in 0..trace.degree {
        header.push(format!("z{i}_re"));
        header.push(format!("z{i}_im"));
    }
    w.write_record(&header).map_err(csv_err)?;
    for row in &trace.rows {
        let mut rec = vec![
            row.k.to_string(),
            f64_str(row.w_norm),
            f64_str(row.e),
            opt(row.a_posteriori),
            opt(row.a_posteriori_guarded),
            opt(row.a_priori),
            opt(row.true_error),
            opt(row.order_ratio),
            serde_json::to_value(row.stop_measure)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            f64_str(row.stop_value),
        ];
        for z in &row.z {
            rec.push(f64_str(z.re));
            rec.push(f64_str(z.im));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

fn cmd_solve(
    problem: &ProblemArgs,
    config: &RunConfig,
    format: Format,
    require: bool,
) -> Result<u8, Error> {
    config.validate()?;
    let loaded = input::load_problem(&problem.polynomial)?;
    let f = &loaded.polynomial;
    let z0 = match input::load_point(
        &loaded,
        problem.initial.as_deref(),
        problem.point.as_deref(),
    )? {
        Some(z) => z,
        None => default_start(f, config.seed)?,
    };
    if require {
        let q = step_quantities(f, &z0, config.p)?;
        let cert = certificate_from_e(
            CertificateKind::for_method(config.method),
            f.degree(),
            config.p,
            q.e,
            false,
        )?;
        if !cert.satisfied {
            print_json(&cert)?;
            eprintln!(
                "error: initial condition not satisfied (E = {})",
                f64_str(cert.e0)
            );
            return Ok(EXIT_CERTIFICATE);
        }
    }
    let trace = run(f, &z0, config)?;
    match format {
        Format::Json => print_json(&trace)?,
        Format::Csv => write_trace_csv(&trace)?,
    }
    Ok(match trace.status {
        Status::Converged => EXIT_OK,
        Status::BudgetExhausted => {
            eprintln!("iteration budget of {} steps exhausted", config.max_iters);
            EXIT_NOT_DONE
        }
        Status::Error => {
            if let Some(e) = &trace.failure {
                eprintln!("error: {e}");
            }
            EXIT_NUMERICAL
        }
    })
}

#[derive(Serialize)]
struct CertifyOutput {
    #[serde(flatten)]
    certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    disks: Option<Vec<InclusionDisk>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    disks_error: Option<String>,
}

fn cmd_certify(problem: &ProblemArgs, want_disks: bool, pessimistic: bool) -> Result<u8, Error> {
    let loaded = input::load_problem(&problem.polynomial)?;
    let f = &loaded.polynomial;
    let z0 = input::load_point(
        &loaded,
        problem.initial.as_deref(),
        problem.point.as_deref(),
    )?
    .ok_or_else(|| Error::Parse("certify needs an initial point".into()))?;
    let q = step_quantities(f, &z0, problem.p)?;
    let kind = CertificateKind::for_method(problem.method);
    let certificate = certificate_from_e(kind, f.degree(), problem.p, q.e, pessimistic)?;
    let (disks, disks_error) = if want_disks {
        match inclusion_disks(f, &z0, problem.p) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let code = if certificate.satisfied {
        EXIT_OK
    } else {
        EXIT_NOT_DONE
    };
    print_json(&CertifyOutput {
        certificate,
        disks,
        disks_error,
    })?;
    Ok(code)
}

fn parse_range(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Parse(format!("bad degree range {s:?}; expected lo..hi"));
    let (lo, hi) = s
        .split_once("..")
        .or_else(|| s.split_once('-'))
        .ok_or_else(bad)?;
    let hi = hi.trim_start_matches('=');
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn cmd_compare(n_range: &str, p: NormParameter, format: Format) -> Result<u8, Error> {
    let (lo, hi) = parse_range(n_range)?;
    let rows = threshold_table(lo..=hi, p)?;
    match format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            for row in &rows {
                w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
            }
            w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Peak {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct BSample {
    a: String,
    p: NormParameter,
    b: String,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Constants {
    EhrlichL1_R: String,
    NoureinL1_R: String,
    ehrlich_inf_peak: Peak,
    nourein_inf_peak: Peak,
    B_of_A: Vec<BSample>,
}

fn cmd_constants() -> Result<u8, Error> {
    let digits = |x: f64| sig_digits(x, 10);
    let peak = |kind| -> Result<Peak, Error> {
        let r = phi_sequence_monotonicity(kind, 500)?;
        Ok(Peak {
            n: r.peak_n,
            value: digits(r.peak_value),
        })
    };
    let mut samples = Vec::new();
    for p in [NormParameter::ONE, NormParameter::TWO, NormParameter::INF] {
        for a in [1.5, 2.0, 3.0] {
            samples.push(BSample {
                a: digits(a),
                p,
                b: digits(remark_b_of_a(a, p)?),
            });
        }
    }
    let out = Constants {
        EhrlichL1_R: digits(solve_threshold_equation(L1Equation::Ehrlich)?),
        NoureinL1_R: digits(solve_threshold_equation(L1Equation::Nourein)?),
        ehrlich_inf_peak: peak(CertificateKind::Ehrlich)?,
        nourein_inf_peak: peak(CertificateKind::Nourein)?,
        B_of_A: samples,
    };
    print_json(&out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..30").unwrap(), (3, 30));
        assert_eq!(parse_range("3..=30").unwrap(), (3, 30));
        assert_eq!(parse_range("2-9").unwrap(), (2, 9));
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), EXIT_INPUT);
        assert_eq!(
            exit_code_for(&Error::DistinctnessViolation {
                i: 0,
                j: 1,
                distance: 0.0
            }),
            EXIT_INPUT
        );
        assert_eq!(
            exit_code_for(&Error::SingularDenominator(0)),
            EXIT_NUMERICAL
        );
    }
}
