//! A priori and a posteriori error bounds for the Ehrlich and Nourein
//! iterations.
//!
//! Powers `lambda^(c^k)` are handled through logarithms, so large `k` makes
//! the a priori bounds underflow cleanly to zero instead of overflowing the
//! exponent.

use serde::{Deserialize, Serialize};

use crate::certify::{
    phi_ehrlich, phi_nourein, psi_mu_ehrlich, psi_mu_nourein, CertificateKind, MethodParams,
};
use crate::error::{Error, Result};
use crate::norm::NormParameter;
use crate::poly::MonicPolynomial;
use crate::simul::{step_quantities, ApproximationVector, StepQuantities};

/// `(lambda, theta, mu) = (phi(x), psi(x), mu(x))` for a convergence theorem.
pub fn lambda_theta_mu(
    kind: CertificateKind,
    x: f64,
    params: &MethodParams,
) -> Result<(f64, f64, f64)> {
    match kind {
        CertificateKind::Ehrlich => {
            let (theta, mu) = psi_mu_ehrlich(x, params)?;
            Ok((phi_ehrlich(x, params)?, theta, mu))
        }
        CertificateKind::Nourein => {
            let (theta, mu) = psi_mu_nourein(x, params)?;
            Ok((phi_nourein(x, params)?, theta, mu))
        }
        CertificateKind::Localization => Err(Error::Inapplicable(
            "no error bounds are stated for Weierstrass' iteration".into(),
        )),
    }
}

fn mu_only(kind: CertificateKind, x: f64, params: &MethodParams) -> Result<f64> {
    match kind {
        CertificateKind::Ehrlich => Ok(psi_mu_ehrlich(x, params)?.1),
        CertificateKind::Nourein => Ok(psi_mu_nourein(x, params)?.1),
        CertificateKind::Localization => lambda_theta_mu(kind, x, params).map(|t| t.2),
    }
}

/// `(base, divisor)` of the exponent `(base^k - 1)/divisor`.
fn exponent_base(kind: CertificateKind) -> Result<(u32, u32)> {
    match kind {
        CertificateKind::Ehrlich => Ok((3, 2)),
        CertificateKind::Nourein => Ok((4, 3)),
        CertificateKind::Localization => Err(Error::Inapplicable(
            "no error bounds are stated for Weierstrass' iteration".into(),
        )),
    }
}

/// `(base^k, (base^k - 1)/divisor)` as floats; exact integers for `k <= 40`.
fn exponents(base: u32, divisor: u32, k: u32) -> (f64, f64) {
    if k <= 40 {
        let p = (base as u128).pow(k);
        (p as f64, ((p - 1) / divisor as u128) as f64)
    } else {
        let p = (base as f64).powi(k as i32);
        (p, (p - 1.0) / divisor as f64)
    }
}

/// `exp(e ln x)` with `x = 0` giving `0` for positive `e`.
fn pow_log(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        if e == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (e * x.ln()).exp()
    }
}

/// A priori bound on `||z^k - xi||_p` from initial data:
/// `mu(E0 lambda^s) theta^k lambda^s / (1 - theta lambda^(c^k)) ||W(z0)||_p`
/// with `c = 3`, `s = (3^k - 1)/2` (Ehrlich) or `c = 4`, `s = (4^k - 1)/3` (Nourein).
///
/// Returns `+inf` when the denominator is not positive (vacuous bound).
pub fn apriori(
    kind: CertificateKind,
    k: u32,
    e0: f64,
    w0_norm: f64,
    params: &MethodParams,
) -> Result<f64> {
    let (base, divisor) = exponent_base(kind)?;
    let (lambda, theta, _) = lambda_theta_mu(kind, e0, params)?;
    let (full, s) = exponents(base, divisor, k);
    let lambda_s = pow_log(lambda, s);
    let denom = 1.0 - theta * pow_log(lambda, full);
    if !(denom > 0.0) {
        return Ok(f64::INFINITY);
    }
    let mu = mu_only(kind, e0 * lambda_s, params)?;
    Ok(mu * theta.powi(k as i32) * lambda_s / denom * w0_norm)
}

/// Natural log of [`apriori`]; finite where the bound itself underflows.
pub fn ln_apriori(
    kind: CertificateKind,
    k: u32,
    e0: f64,
    w0_norm: f64,
    params: &MethodParams,
) -> Result<f64> {
    let (base, divisor) = exponent_base(kind)?;
    let (lambda, theta, _) = lambda_theta_mu(kind, e0, params)?;
    if lambda == 0.0 || w0_norm == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let (full, s) = exponents(base, divisor, k);
    let ln_lambda = lambda.ln();
    let tail = theta * (full * ln_lambda).exp();
    if !(tail < 1.0) {
        return Ok(f64::INFINITY);
    }
    let mu = mu_only(kind, e0 * (s * ln_lambda).exp(), params)?;
    Ok(mu.ln() + k as f64 * theta.ln() + s * ln_lambda - (-tail).ln_1p() + w0_norm.ln())
}

pub fn apriori_ehrlich(k: u32, e0: f64, w0_norm: f64, params: &MethodParams) -> Result<f64> {
    apriori(CertificateKind::Ehrlich, k, e0, w0_norm, params)
}

pub fn apriori_nourein(k: u32, e0: f64, w0_norm: f64, params: &MethodParams) -> Result<f64> {
    apriori(CertificateKind::Nourein, k, e0, w0_norm, params)
}

/// `mu(E) / (1 - psi(E) phi(E)) * ||W||_p` from the scalars of an iterate.
pub fn aposteriori_from(
    kind: CertificateKind,
    e: f64,
    w_norm: f64,
    params: &MethodParams,
) -> Result<f64> {
    let (lambda, theta, mu) = lambda_theta_mu(kind, e, params)?;
    let tl = theta * lambda;
    if !(tl < 1.0) {
        return Err(Error::DegenerateBound(tl));
    }
    Ok(mu / (1.0 - tl) * w_norm)
}

/// A posteriori bound on `||z^k - xi||_p` computed at the iterate `zk`.
pub fn aposteriori(
    kind: CertificateKind,
    f: &MonicPolynomial,
    zk: &ApproximationVector,
    norm: NormParameter,
) -> Result<f64> {
    let q = step_quantities(f, zk, norm)?;
    let params = MethodParams::new(f.degree(), norm)?;
    aposteriori_from(kind, q.e, q.w_norm, &params)
}

/// The a posteriori bound with `E` and `||W||_p` replaced by upper bounds that
/// absorb the rounding error of the computed corrections. Unlike the nominal
/// bound it stays valid once `W` is dominated by rounding noise.
pub fn aposteriori_guarded(
    kind: CertificateKind,
    q: &StepQuantities,
    params: &MethodParams,
) -> Result<f64> {
    aposteriori_from(
        kind,
        q.e_upper(params.norm),
        q.w_norm_upper(params.norm),
        params,
    )
}

/// Bounds and, when known, the true error at step `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: u32,
    #[serde(with = "crate::fmt::opt_float")]
    pub a_priori: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub a_posteriori: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub true_error: Option<f64>,
    pub a_priori_valid: Option<bool>,
    pub a_posteriori_valid: Option<bool>,
    /// Some bound exceeds `||W(z0)||_p` scaled by `mu`, i.e. says nothing useful.
    pub vacuous: bool,
}

impl BoundReport {
    pub fn new(
        k: u32,
        a_priori: Option<f64>,
        a_posteriori: Option<f64>,
        true_error: Option<f64>,
        scale: f64,
    ) -> Self {
        let valid = |b: Option<f64>| Some(b? >= true_error?);
        let vacuous = [a_priori, a_posteriori]
            .iter()
            .flatten()
            .any(|&b| !b.is_finite() || b > scale);
        BoundReport {
            k,
            a_priori,
            a_posteriori,
            true_error,
            a_priori_valid: valid(a_priori),
            a_posteriori_valid: valid(a_posteriori),
            vacuous,
        }
    }
}
