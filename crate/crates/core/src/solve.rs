//! Iteration driver: runs a method from an initial point, records a trace
//! and applies the stopping rule.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bounds::{aposteriori_from, aposteriori_guarded, apriori};
use crate::certify::{certificate_from_e, Certificate, CertificateKind, MethodParams};
use crate::error::{Error, Result};
use crate::norm::NormParameter;
use crate::oracle::{error_floor, reference_roots, true_errors, FLOOR_MARGIN};
use crate::poly::MonicPolynomial;
use crate::simul::{step_quantities, ApproximationVector, Method, StepQuantities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// A posteriori bound when defined at the iterate, else the `||W||` rule.
    Aposteriori,
    /// `||W(z^k)||_p <= tol (1 + max|c_i|)`.
    Wnorm,
}

impl std::str::FromStr for StopRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aposteriori" => Ok(StopRule::Aposteriori),
            "wnorm" => Ok(StopRule::Wnorm),
            _ => Err(Error::Parse(format!("unknown stop rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub p: NormParameter,
    pub max_iters: usize,
    pub stop: StopRule,
    #[serde(with = "crate::fmt::float")]
    pub tol: f64,
    pub seed: u64,
    /// Attach true errors from extended-precision reference roots.
    pub oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Ehrlich,
            p: NormParameter::INF,
            max_iters: 100,
            stop: StopRule::Aposteriori,
            tol: 1e-12,
            seed: 0,
            oracle: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Parse(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Parse("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which quantity the stopping test compared against the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopMeasure {
    Aposteriori,
    Wnorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    #[serde(with = "crate::fmt::complex_vec")]
    pub z: Vec<Complex64>,
    #[serde(with = "crate::fmt::float")]
    pub w_norm: f64,
    #[serde(with = "crate::fmt::float")]
    pub e: f64,
    /// Present while `E(z^k)` is inside the method's certified region.
    #[serde(with = "crate::fmt::opt_float")]
    pub a_posteriori: Option<f64>,
    /// The a posteriori bound with rounding errors of `W` absorbed.
    #[serde(with = "crate::fmt::opt_float")]
    pub a_posteriori_guarded: Option<f64>,
    /// Present for `k >= 1` when the initial certificate holds.
    #[serde(with = "crate::fmt::opt_float")]
    pub a_priori: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub true_error: Option<f64>,
    /// `ln(e_k/e_{k-1}) / ln(e_{k-1}/e_{k-2})` from true errors above the noise floor.
    #[serde(with = "crate::fmt::opt_float")]
    pub order_ratio: Option<f64>,
    pub stop_measure: StopMeasure,
    #[serde(with = "crate::fmt::float")]
    pub stop_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    BudgetExhausted,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub config: RunConfig,
    pub degree: usize,
    pub certificate: Certificate,
    pub rows: Vec<TraceRow>,
    pub status: Status,
    pub error: Option<String>,
    #[serde(with = "crate::fmt::opt_float")]
    pub noise_floor: Option<f64>,
    #[serde(skip)]
    pub failure: Option<Error>,
}

impl IterationTrace {
    pub fn last(&self) -> &TraceRow {
        self.rows
            .last()
            .expect("a trace has at least the initial row")
    }

    pub fn iterates(&self) -> Vec<Vec<Complex64>> {
        self.rows.iter().map(|r| r.z.clone()).collect()
    }

    pub fn steps(&self) -> usize {
        self.last().k
    }
}

fn bound_kind(method: Method) -> Option<CertificateKind> {
    match CertificateKind::for_method(method) {
        CertificateKind::Localization => None,
        kind => Some(kind),
    }
}

struct RowContext<'a> {
    config: &'a RunConfig,
    params: MethodParams,
    wnorm_scale: f64,
    kind: Option<CertificateKind>,
    /// `(E0, ||W(z0)||)` when the initial certificate holds.
    initial: Option<(f64, f64)>,
}

impl RowContext<'_> {
    fn row(&self, k: usize, z: &ApproximationVector, q: &StepQuantities) -> TraceRow {
        let a_posteriori = self
            .kind
            .and_then(|kind| aposteriori_from(kind, q.e, q.w_norm, &self.params).ok());
        let a_posteriori_guarded = self
            .kind
            .and_then(|kind| aposteriori_guarded(kind, q, &self.params).ok());
        let a_priori = match (self.kind, self.initial) {
            (Some(kind), Some((e0, w0))) if k >= 1 => {
                apriori(kind, k as u32, e0, w0, &self.params).ok()
            }
            _ => None,
        };
        let (stop_measure, stop_value) = match (self.config.stop, a_posteriori) {
            (StopRule::Aposteriori, Some(b)) => (StopMeasure::Aposteriori, b),
            _ => (StopMeasure::Wnorm, q.w_norm / self.wnorm_scale),
        };
        TraceRow {
            k,
            z: z.points().to_vec(),
            w_norm: q.w_norm,
            e: q.e,
            a_posteriori,
            a_posteriori_guarded,
            a_priori,
            true_error: None,
            order_ratio: None,
            stop_measure,
            stop_value,
        }
    }
}

/// Runs `config.method` from `z0` until the stop rule holds or the budget is spent.
///
/// Invalid input (dimension, configuration) is returned as `Err`; failures
/// during the iteration end the trace with [`Status::Error`] and the error in
/// [`IterationTrace::failure`].
pub fn run(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    config: &RunConfig,
) -> Result<IterationTrace> {
    config.validate()?;
    let norm = config.p;
    let n = f.degree();
    let params = MethodParams::new(n, norm)?;
    let q0 = step_quantities(f, z0, norm)?;
    let kind = bound_kind(config.method);
    let certificate = certificate_from_e(
        CertificateKind::for_method(config.method),
        n,
        norm,
        q0.e,
        false,
    )?;
    let ctx = RowContext {
        config,
        params,
        wnorm_scale: 1.0 + f.max_coeff_modulus(),
        kind,
        initial: (kind.is_some() && certificate.satisfied).then_some((q0.e, q0.w_norm)),
    };

    let mut rows = vec![ctx.row(0, z0, &q0)];
    let mut status = Status::BudgetExhausted;
    let mut failure = None;
    let mut z = z0.clone();
    if rows[0].stop_value <= config.tol {
        status = Status::Converged;
    } else {
        for k in 1..=config.max_iters {
            let next = config
                .method
                .step(f, &z)
                .and_then(|s| s.into_vector())
                .and_then(|v| step_quantities(f, &v, norm).map(|q| (v, q)));
            match next {
                Ok((v, q)) => {
                    let row = ctx.row(k, &v, &q);
                    let done = row.stop_value <= config.tol;
                    rows.push(row);
                    z = v;
                    if done {
                        status = Status::Converged;
                        break;
                    }
                }
                Err(e) => {
                    status = Status::Error;
                    failure = Some(e);
                    break;
                }
            }
        }
    }

    let mut trace = IterationTrace {
        config: config.clone(),
        degree: n,
        certificate,
        rows,
        status,
        error: failure.as_ref().map(|e| e.to_string()),
        noise_floor: None,
        failure,
    };
    if config.oracle {
        attach_true_errors(f, &mut trace)?;
    }
    Ok(trace)
}

/// Fills `true_error` and `order_ratio` from reference roots.
pub fn attach_true_errors(f: &MonicPolynomial, trace: &mut IterationTrace) -> Result<()> {
    let roots = reference_roots(f)?;
    let norm = trace.config.p;
    let errors = true_errors(&trace.iterates(), &roots, norm)?;
    let floor = error_floor(f, &roots, norm);
    let signal = |e: f64| e > FLOOR_MARGIN * floor;
    for (k, row) in trace.rows.iter_mut().enumerate() {
        row.true_error = Some(errors[k]);
        if k >= 2 && (k - 2..=k).all(|j| signal(errors[j])) {
            row.order_ratio =
                Some((errors[k] / errors[k - 1]).ln() / (errors[k - 1] / errors[k - 2]).ln());
        }
    }
    trace.noise_floor = Some(floor);
    Ok(())
}

/// Equally spaced start on the Cauchy-bound circle, rotated by a
/// seed-dependent angle.
pub fn default_start(f: &MonicPolynomial, seed: u64) -> Result<ApproximationVector> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let rotation = rng.random_range(0.0..std::f64::consts::TAU / f.degree() as f64);
    ApproximationVector::new(crate::oracle::circle_start(f, rotation, 1.0))
}

/// `roots[i] + eps * u_i` with `u_i` uniform in the unit disk.
pub fn perturbed_start(roots: &[Complex64], eps: f64, seed: u64) -> Result<ApproximationVector> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    ApproximationVector::new(
        roots
            .iter()
            .map(|r| {
                let radius = eps * rng.random::<f64>().sqrt();
                r + Complex64::from_polar(radius, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect(),
    )
}
