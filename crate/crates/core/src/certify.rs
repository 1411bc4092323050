//! Certificate functions and initial-condition checks.
//!
//! Each iteration has a real function `phi` of `E(z0)`: the iteration is
//! certified when `E(z0)` lies in the function's domain and `phi(E(z0)) <= 1`
//! (`< 1` for the localization test). The companion functions `psi` and `mu`
//! enter the error bounds in [`crate::bounds`].
//!
//! Corollary thresholds, the threshold equations for `p = 1`, and the
//! convergence conditions of earlier work used for comparison tables also live
//! here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormParameter;
use crate::poly::MonicPolynomial;
use crate::simul::{step_quantities, ApproximationVector, Method};

/// Exponent above which `(1 + t)^k` is evaluated as `exp(k ln(1 + t))`.
const DIRECT_POWER_MAX: usize = 30;

/// Degree-dependent constants of the certificate functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodParams {
    pub n: usize,
    pub norm: NormParameter,
    /// `(n - 1)^(1/q)`
    pub a: f64,
    /// `2^(1/q)`
    pub b: f64,
    /// `a + b + 1`
    pub m: f64,
    /// `(n - 1)^(1/p)`, used by the localization function.
    pub a_dual: f64,
}

impl MethodParams {
    pub fn new(n: usize, norm: NormParameter) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        let k = (n - 1) as f64;
        let a = norm.pow_inv_q(k);
        let b = norm.pow_inv_q(2.0);
        Ok(MethodParams {
            n,
            norm,
            a,
            b,
            m: a + b + 1.0,
            a_dual: norm.pow_inv_p(k),
        })
    }

    fn k(&self) -> usize {
        self.n - 1
    }
}

/// `prefactor * (1 + t)^k`, kept apart so callers can work in log space.
#[derive(Debug, Clone, Copy)]
struct PhiParts {
    prefactor: f64,
    t: f64,
    k: usize,
}

impl PhiParts {
    fn value(self) -> f64 {
        if self.prefactor == 0.0 {
            return 0.0;
        }
        self.prefactor * power_one_plus(self.t, self.k)
    }

    fn ln(self) -> f64 {
        self.prefactor.ln() + self.k as f64 * self.t.ln_1p()
    }
}

/// `(1 + t)^k`, switching to `exp(k ln(1 + t))` for large `k`.
pub fn power_one_plus(t: f64, k: usize) -> f64 {
    if k <= DIRECT_POWER_MAX {
        (1.0 + t).powi(k as i32)
    } else {
        (k as f64 * t.ln_1p()).exp()
    }
}

fn check_domain(what: &'static str, x: f64, bound: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 && x < bound {
        Ok(())
    } else {
        Err(Error::Domain { what, x, bound })
    }
}

// ---------------------------------------------------------------------------
// localization

/// Right end of the localization function's domain, `1 / 2^(1/q)`.
pub fn localization_domain(params: &MethodParams) -> f64 {
    1.0 / params.b
}

fn phi_localization_parts(x: f64, params: &MethodParams) -> Result<PhiParts> {
    check_domain("phi_localization", x, localization_domain(params))?;
    let shrink = 1.0 - params.b * x;
    let prefactor = params.a * x / ((1.0 - x) * shrink);
    let t = x / (params.a_dual * shrink);
    Ok(PhiParts {
        prefactor,
        t,
        k: params.k(),
    })
}

/// `phi(x) = a x / ((1 - x)(1 - b x)) * (1 + x / ((n-1)^(1/p) (1 - b x)))^(n-1)`.
pub fn phi_localization(x: f64, params: &MethodParams) -> Result<f64> {
    Ok(phi_localization_parts(x, params)?.value())
}

// ---------------------------------------------------------------------------
// Ehrlich

/// Right end of the Ehrlich domain: `1/(a + b)`, tightened by every
/// denominator (`1/(a + 1)` for `phi`, `1/a` for `psi`, `mu`).
pub fn ehrlich_domain(params: &MethodParams) -> f64 {
    let nominal = 1.0 / (params.a + params.b);
    nominal.min(1.0 / (params.a + 1.0)).min(1.0 / params.a)
}

fn phi_ehrlich_parts(x: f64, params: &MethodParams) -> Result<PhiParts> {
    check_domain("phi_ehrlich", x, ehrlich_domain(params))?;
    let a = params.a;
    let outer = 1.0 - (a + 1.0) * x;
    let inner = 1.0 - (a + params.b) * x;
    let prefactor = a * x * x / (outer * inner);
    let t = a * x / (inner * params.k() as f64);
    Ok(PhiParts {
        prefactor,
        t,
        k: params.k(),
    })
}

/// `phi(x) = a x^2 / ((1 - (a+1)x)(1 - (a+b)x)) * (1 + a x / ((n-1)(1 - (a+b)x)))^(n-1)`.
pub fn phi_ehrlich(x: f64, params: &MethodParams) -> Result<f64> {
    Ok(phi_ehrlich_parts(x, params)?.value())
}

/// `(psi(x), mu(x)) = ((1 - (a+b)x)/(1 - a x), 1/(1 - a x))`.
pub fn psi_mu_ehrlich(x: f64, params: &MethodParams) -> Result<(f64, f64)> {
    check_domain("psi_mu_ehrlich", x, ehrlich_domain(params))?;
    let denom = 1.0 - params.a * x;
    Ok(((1.0 - (params.a + params.b) * x) / denom, 1.0 / denom))
}

// ---------------------------------------------------------------------------
// Nourein

/// Smaller positive root of `1 - m x + b x^2`.
pub fn nourein_nominal_domain(params: &MethodParams) -> f64 {
    let (m, b) = (params.m, params.b);
    2.0 / (m + (m * m - 4.0 * b).sqrt())
}

/// Right end of the Nourein domain, tightened by the smaller root of
/// `1 - (a+2)x + x^2` and by `1/(a + 1)` (the `psi`, `mu` denominator).
pub fn nourein_domain(params: &MethodParams) -> f64 {
    let s = params.a + 2.0;
    let second = 2.0 / (s + (s * s - 4.0).sqrt());
    nourein_nominal_domain(params)
        .min(second)
        .min(1.0 / (params.a + 1.0))
}

fn nourein_quadratics(x: f64, params: &MethodParams) -> (f64, f64) {
    (
        1.0 - params.m * x + params.b * x * x,
        1.0 - (params.a + 2.0) * x + x * x,
    )
}

fn phi_nourein_parts(x: f64, params: &MethodParams) -> Result<PhiParts> {
    check_domain("phi_nourein", x, nourein_domain(params))?;
    let (q1, q2) = nourein_quadratics(x, params);
    if !(q1 > 0.0 && q2 > 0.0) {
        return Err(Error::NegativeDenominator {
            what: "phi_nourein",
            x,
        });
    }
    let a = params.a;
    let prefactor = a * a * x * x * x / (q1 * q2);
    let t = a * (x - x * x) / (q1 * params.k() as f64);
    Ok(PhiParts {
        prefactor,
        t,
        k: params.k(),
    })
}

/// `phi(x) = a^2 x^3 / ((1 - m x + b x^2)(1 - (a+2)x + x^2))
///   * (1 + a (x - x^2) / ((n-1)(1 - m x + b x^2)))^(n-1)`.
pub fn phi_nourein(x: f64, params: &MethodParams) -> Result<f64> {
    Ok(phi_nourein_parts(x, params)?.value())
}

/// `(psi(x), mu(x)) = ((1 - m x + b x^2)/(1 - (a+1)x), (1 - x)/(1 - (a+1)x))`.
pub fn psi_mu_nourein(x: f64, params: &MethodParams) -> Result<(f64, f64)> {
    check_domain("psi_mu_nourein", x, nourein_domain(params))?;
    let (q1, _) = nourein_quadratics(x, params);
    let denom = 1.0 - (params.a + 1.0) * x;
    Ok((q1 / denom, (1.0 - x) / denom))
}

// ---------------------------------------------------------------------------
// certificates

/// Which theorem a certificate evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Simple-zero localization; also gates the quadratic convergence of
    /// Weierstrass' iteration.
    Localization,
    Ehrlich,
    Nourein,
}

impl CertificateKind {
    pub fn for_method(method: Method) -> Self {
        match method {
            Method::Weierstrass => CertificateKind::Localization,
            Method::Ehrlich | Method::EhrlichDerivative => CertificateKind::Ehrlich,
            Method::Nourein => CertificateKind::Nourein,
        }
    }

    pub fn domain_bound(self, params: &MethodParams) -> f64 {
        match self {
            CertificateKind::Localization => localization_domain(params),
            CertificateKind::Ehrlich => ehrlich_domain(params),
            CertificateKind::Nourein => nourein_domain(params),
        }
    }

    pub fn phi(self, x: f64, params: &MethodParams) -> Result<f64> {
        match self {
            CertificateKind::Localization => phi_localization(x, params),
            CertificateKind::Ehrlich => phi_ehrlich(x, params),
            CertificateKind::Nourein => phi_nourein(x, params),
        }
    }

    fn ln_phi(self, x: f64, params: &MethodParams) -> Result<f64> {
        Ok(match self {
            CertificateKind::Localization => phi_localization_parts(x, params)?.ln(),
            CertificateKind::Ehrlich => phi_ehrlich_parts(x, params)?.ln(),
            CertificateKind::Nourein => phi_nourein_parts(x, params)?.ln(),
        })
    }

    /// Order of convergence guaranteed by a strict certificate.
    pub fn order(self) -> u32 {
        match self {
            CertificateKind::Localization => 2,
            CertificateKind::Ehrlich => 3,
            CertificateKind::Nourein => 4,
        }
    }
}

/// Verdict of one theorem's initial condition at a given `E(z0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: CertificateKind,
    pub n: usize,
    pub p: NormParameter,
    #[serde(with = "crate::fmt::float")]
    pub a: f64,
    #[serde(with = "crate::fmt::float")]
    pub b: f64,
    #[serde(with = "crate::fmt::float")]
    pub m: f64,
    /// `E(z0)` as measured (before any pessimistic adjustment).
    #[serde(with = "crate::fmt::float")]
    pub e0: f64,
    /// Open right end of the interval `E(z0)` must lie in.
    #[serde(with = "crate::fmt::float")]
    pub domain_bound: f64,
    /// `phi(E(z0))`; absent outside the domain.
    #[serde(with = "crate::fmt::opt_float")]
    pub lambda: Option<f64>,
    /// `psi(E(z0))`, or `1 - 2^(1/q) E(z0)` for localization.
    #[serde(with = "crate::fmt::opt_float")]
    pub theta: Option<f64>,
    /// `mu(E(z0))`; absent for localization.
    #[serde(with = "crate::fmt::opt_float")]
    pub mu0: Option<f64>,
    pub satisfied: bool,
    pub strict: bool,
    pub guaranteed_order: Option<u32>,
    pub pessimistic: bool,
}

impl Certificate {
    pub fn params(&self) -> MethodParams {
        MethodParams::new(self.n, self.p).expect("certificate holds a valid degree")
    }
}

/// Relative bump applied to `E` under pessimistic evaluation.
const PESSIMISTIC_BUMP: f64 = 4.0 * f64::EPSILON;

/// Evaluates the certificate of `kind` for a measured `E(z0) = e0`.
///
/// With `pessimistic`, `e0` is raised by a few ulps before every comparison so
/// boundary cases are decided against the certificate.
pub fn certificate_from_e(
    kind: CertificateKind,
    n: usize,
    norm: NormParameter,
    e0: f64,
    pessimistic: bool,
) -> Result<Certificate> {
    let params = MethodParams::new(n, norm)?;
    let e = if pessimistic {
        e0 * (1.0 + PESSIMISTIC_BUMP)
    } else {
        e0
    };
    let domain_bound = kind.domain_bound(&params);
    let in_domain = e.is_finite() && e >= 0.0 && e < domain_bound;

    let (lambda, theta, mu0) = if in_domain {
        let lambda = kind.phi(e, &params)?;
        match kind {
            CertificateKind::Localization => (Some(lambda), Some(1.0 - params.b * e), None),
            CertificateKind::Ehrlich => {
                let (theta, mu) = psi_mu_ehrlich(e, &params)?;
                (Some(lambda), Some(theta), Some(mu))
            }
            CertificateKind::Nourein => {
                let (theta, mu) = psi_mu_nourein(e, &params)?;
                (Some(lambda), Some(theta), Some(mu))
            }
        }
    } else {
        (None, None, None)
    };

    let (satisfied, strict) = match (kind, lambda) {
        (_, None) => (false, false),
        (CertificateKind::Localization, Some(l)) => (l < 1.0, l < 1.0),
        (_, Some(l)) => (l <= 1.0, l < 1.0),
    };

    Ok(Certificate {
        method: kind,
        n,
        p: norm,
        a: params.a,
        b: params.b,
        m: params.m,
        e0,
        domain_bound,
        lambda,
        theta,
        mu0,
        satisfied,
        strict,
        guaranteed_order: strict.then(|| kind.order()),
        pessimistic,
    })
}

pub fn certify(
    kind: CertificateKind,
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<Certificate> {
    let q = step_quantities(f, z0, norm)?;
    certificate_from_e(kind, f.degree(), norm, q.e, false)
}

/// Simple zeros and inclusion disks: `E(z0) < 1/2^(1/q)` and `phi(E(z0)) < 1`.
pub fn certify_localization(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<Certificate> {
    certify(CertificateKind::Localization, f, z0, norm)
}

/// Ehrlich convergence: `E(z0) < 1/(a + b)` and `phi(E(z0)) <= 1`.
pub fn certify_ehrlich(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<Certificate> {
    certify(CertificateKind::Ehrlich, f, z0, norm)
}

/// Nourein convergence: `E(z0) < 2/(m + sqrt(m^2 - 4b))` and `phi(E(z0)) <= 1`.
pub fn certify_nourein(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<Certificate> {
    certify(CertificateKind::Nourein, f, z0, norm)
}

// ---------------------------------------------------------------------------
// scalar root finding

/// Bisection for a sign change of `g` on `[lo, hi]` with `g(lo) <= 0 < g(hi)`.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo <= 0.0 && ghi > 0.0) {
        return Err(Error::BracketFailure { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest `E` the theorem of `kind` certifies: `sup { x in domain : phi(x) <= 1 }`.
///
/// At `p = inf` this is the largest `C` admitted by the corresponding
/// `C`-form corollary.
pub fn sup_certified_radius(kind: CertificateKind, params: &MethodParams) -> Result<f64> {
    let bound = kind.domain_bound(params);
    let hi = bound * (1.0 - 1e-15);
    let g = |x: f64| match kind.phi(x, params) {
        Ok(v) if v.is_finite() => v - 1.0,
        _ => f64::INFINITY,
    };
    if g(hi) <= 0.0 {
        return Ok(bound);
    }
    bisect(g, 0.0, hi, 1e-15 * bound)
}

// ---------------------------------------------------------------------------
// corollary thresholds

/// Corollaries that turn the theorems into explicit radii `E(z0) <= R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corollary {
    /// Ehrlich, any p, n >= 3: `R = 1/(2 (n-1)^(1/q) + 2)`.
    EhrlichLp,
    /// Ehrlich, p = inf: `R = 1/(1.5 n + 1.8)`.
    EhrlichInf,
    /// Ehrlich, p = 1: root of `(x/(1-2x))^2 exp(x/(1-2x)) = 1`.
    EhrlichL1,
    /// Nourein, any p, n >= 3: same radius as [`Corollary::EhrlichLp`].
    NoureinLp,
    /// Nourein, p = inf: `R = 1/(1.4 n + 2.8)`.
    NoureinInf,
    /// Nourein, p = 1: root of `x^3/(1-3x+x^2)^2 exp((x-x^2)/(1-3x+x^2)) = 1`.
    NoureinL1,
}

impl Corollary {
    pub const ALL: [Corollary; 6] = [
        Corollary::EhrlichLp,
        Corollary::EhrlichInf,
        Corollary::EhrlichL1,
        Corollary::NoureinLp,
        Corollary::NoureinInf,
        Corollary::NoureinL1,
    ];

    pub fn kind(self) -> CertificateKind {
        match self {
            Corollary::EhrlichLp | Corollary::EhrlichInf | Corollary::EhrlichL1 => {
                CertificateKind::Ehrlich
            }
            _ => CertificateKind::Nourein,
        }
    }
}

/// Radius `R` such that `E(z0) <= R` certifies convergence under `corollary`.
pub fn threshold_corollary(corollary: Corollary, n: usize, norm: NormParameter) -> Result<f64> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let nf = n as f64;
    match corollary {
        Corollary::EhrlichLp | Corollary::NoureinLp => {
            if n < 3 {
                return Err(Error::Inapplicable("the L^p radius requires n >= 3".into()));
            }
            Ok(1.0 / (2.0 * norm.pow_inv_q(nf - 1.0) + 2.0))
        }
        Corollary::EhrlichInf | Corollary::NoureinInf => {
            if !norm.is_inf() {
                return Err(Error::Inapplicable(format!(
                    "{corollary:?} is stated for p = inf"
                )));
            }
            Ok(if corollary == Corollary::EhrlichInf {
                1.0 / (1.5 * nf + 1.8)
            } else {
                1.0 / (1.4 * nf + 2.8)
            })
        }
        Corollary::EhrlichL1 | Corollary::NoureinL1 => {
            if !norm.is_one() {
                return Err(Error::Inapplicable(format!(
                    "{corollary:?} is stated for p = 1"
                )));
            }
            solve_threshold_equation(if corollary == Corollary::EhrlichL1 {
                L1Equation::Ehrlich
            } else {
                L1Equation::Nourein
            })
        }
    }
}

/// `B(A) = 2^(1/q) + exp(1/(A-1)) / (4 (A-1))`: the constant making
/// `E(z0) <= 1/(A (n-1)^(1/q) + B)` a valid Ehrlich radius for `A > 1`.
pub fn remark_b_of_a(a_coef: f64, norm: NormParameter) -> Result<f64> {
    if !(a_coef > 1.0) || !a_coef.is_finite() {
        return Err(Error::Domain {
            what: "remark_b_of_a",
            x: a_coef,
            bound: f64::INFINITY,
        });
    }
    let s = a_coef - 1.0;
    Ok(norm.pow_inv_q(2.0) + (1.0 / s).exp() / (4.0 * s))
}

/// The two scalar equations whose roots are the `p = 1` radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L1Equation {
    Ehrlich,
    Nourein,
}

impl L1Equation {
    /// Open interval `(0, end)` on which the left-hand side is increasing.
    pub fn interval_end(self) -> f64 {
        match self {
            L1Equation::Ehrlich => 0.5,
            L1Equation::Nourein => 2.0 / (3.0 + 5f64.sqrt()),
        }
    }

    /// Left-hand side `g(x)`.
    pub fn lhs(self, x: f64) -> f64 {
        self.ln_lhs(x).exp()
    }

    /// `ln g(x)`; `-inf` at `x = 0`.
    pub fn ln_lhs(self, x: f64) -> f64 {
        match self {
            L1Equation::Ehrlich => {
                let t = x / (1.0 - 2.0 * x);
                2.0 * t.ln() + t
            }
            L1Equation::Nourein => {
                let q = 1.0 - 3.0 * x + x * x;
                3.0 * x.ln() - 2.0 * q.ln() + (x - x * x) / q
            }
        }
    }
}

/// Root of the `p = 1` threshold equation by bisection (absolute 1e-14).
pub fn solve_threshold_equation(which: L1Equation) -> Result<f64> {
    let end = which.interval_end();
    bisect(|x| which.ln_lhs(x), 0.0, end * (1.0 - 1e-12), 1e-14)
}

/// Result of checking `phi_{p=1}(x) < g(x)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub which: L1Equation,
    pub holds: bool,
    pub points_checked: usize,
    /// First `(n, x, ln phi, ln g)` where the inequality failed.
    pub first_violation: Option<(usize, f64, f64, f64)>,
}

/// Checks that the `p = 1` certificate function stays strictly below the
/// majorant `g` on a `grid`-point grid of the open interval, for every `n` in
/// `n_range`. Comparison is done on logarithms so that neither side overflows
/// near the right end.
pub fn dominance_majorant_check(
    which: L1Equation,
    n_range: std::ops::RangeInclusive<usize>,
    grid: usize,
) -> Result<DominanceReport> {
    let kind = match which {
        L1Equation::Ehrlich => CertificateKind::Ehrlich,
        L1Equation::Nourein => CertificateKind::Nourein,
    };
    let end = which.interval_end();
    let xs: Vec<f64> = (1..=grid)
        .map(|i| end * i as f64 / (grid + 1) as f64)
        .collect();
    let ln_g: Vec<f64> = xs.iter().map(|&x| which.ln_lhs(x)).collect();
    let mut checked = 0;
    for n in n_range {
        let params = MethodParams::new(n, NormParameter::ONE)?;
        for (&x, &lg) in xs.iter().zip(&ln_g) {
            let lp = kind.ln_phi(x, &params)?;
            checked += 1;
            if !(lp < lg) {
                return Ok(DominanceReport {
                    which,
                    holds: false,
                    points_checked: checked,
                    first_violation: Some((n, x, lp, lg)),
                });
            }
        }
    }
    Ok(DominanceReport {
        which,
        holds: true,
        points_checked: checked,
        first_violation: None,
    })
}

/// Sequence `phi_n = phi(R_n)` at `p = inf` along a corollary radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub corollary: Corollary,
    pub peak_n: usize,
    pub peak_value: f64,
    /// `(n, phi_n)` for `n = 2 ..= n_max`.
    pub values: Vec<(usize, f64)>,
    /// Strictly increasing up to the peak and strictly decreasing after it.
    pub unimodal: bool,
}

/// Locates the maximum of `phi(1/(1.5n + 1.8))` (Ehrlich) or
/// `phi(1/(1.4n + 2.8))` (Nourein) over `n = 2 ..= n_max`.
pub fn phi_sequence_monotonicity(kind: CertificateKind, n_max: usize) -> Result<PeakReport> {
    let corollary = match kind {
        CertificateKind::Ehrlich => Corollary::EhrlichInf,
        CertificateKind::Nourein => Corollary::NoureinInf,
        CertificateKind::Localization => {
            return Err(Error::Inapplicable(
                "no radius sequence for localization".into(),
            ))
        }
    };
    let mut values = Vec::with_capacity(n_max.saturating_sub(1));
    for n in 2..=n_max {
        let params = MethodParams::new(n, NormParameter::INF)?;
        let r = threshold_corollary(corollary, n, NormParameter::INF)?;
        values.push((n, kind.phi(r, &params)?));
    }
    let (peak_idx, &(peak_n, peak_value)) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .ok_or_else(|| Error::InsufficientData("n_max < 2".into()))?;
    let unimodal = values[..=peak_idx].windows(2).all(|w| w[0].1 < w[1].1)
        && values[peak_idx..].windows(2).all(|w| w[0].1 > w[1].1);
    Ok(PeakReport {
        corollary,
        peak_n,
        peak_value,
        values,
        unimodal,
    })
}

// ---------------------------------------------------------------------------
// C-form corollaries and earlier conditions

/// Left side of the `p = inf` Ehrlich condition on `C`:
/// `(n-1)C^2/((1-nC)(1-(n+1)C)) * ((1-nC)/(1-(n+1)C))^(n-1)`, for `0 <= C < 1/(n+1)`.
pub fn ehrlich_c_condition_lhs(n: usize, c: f64) -> Result<f64> {
    let nf = n as f64;
    check_domain("ehrlich_c_condition", c, 1.0 / (nf + 1.0))?;
    let (u, v) = (1.0 - nf * c, 1.0 - (nf + 1.0) * c);
    Ok((nf - 1.0) * c * c / (u * v) * (u / v).powi(n as i32 - 1))
}

pub fn ehrlich_c_condition_holds(n: usize, c: f64) -> bool {
    matches!(ehrlich_c_condition_lhs(n, c), Ok(v) if v < 1.0)
}

/// Upper limit on `C` in the `p = inf` Nourein condition as printed:
/// `2/(n + 2 + sqrt(n^2 + 4n - 8))`.
pub fn nourein_c_limit(n: usize) -> f64 {
    let nf = n as f64;
    2.0 / (nf + 2.0 + (nf * nf + 4.0 * nf - 8.0).sqrt())
}

/// Left side of the `p = inf` Nourein condition on `C`:
/// `(n-1)^2 C^3/((1-(n+1)C+C^2)(1-(n+2)C+2C^2)) * ((1-(n+1)C+C^2)/(1-(n+2)C+2C^2))^(n-1)`.
pub fn nourein_c_condition_lhs(n: usize, c: f64) -> Result<f64> {
    let nf = n as f64;
    check_domain("nourein_c_condition", c, nourein_c_limit(n))?;
    let u = 1.0 - (nf + 1.0) * c + c * c;
    let v = 1.0 - (nf + 2.0) * c + 2.0 * c * c;
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::NegativeDenominator {
            what: "nourein_c_condition",
            x: c,
        });
    }
    Ok((nf - 1.0).powi(2) * c.powi(3) / (u * v) * (u / v).powi(n as i32 - 1))
}

pub fn nourein_c_condition_holds(n: usize, c: f64) -> bool {
    matches!(nourein_c_condition_lhs(n, c), Ok(v) if v < 1.0)
}

/// Convergence conditions from earlier work that the comparison tables cite.
/// All of them bound `||W(z0)||_inf <= C delta(z0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorWork {
    /// Ehrlich: the `C`-condition plus `beta < 1` and `g(beta) < (1-(n-1)C)/(2C)`.
    PetkovicHerceg41,
    /// Ehrlich: `C(n) = 1/(n + 4.5)` for n = 3, 4 and `1/(1.545 n + 5)` for n >= 5.
    PetkovicHerceg42,
    /// Cited but not reproduced, so it cannot be evaluated.
    ZhengHuang,
    /// Nourein: `0 < C < 2/(n+4+sqrt(n^2+8n))` and `beta < (1-nC)/(1+(n-2)C)`.
    Nedic2,
    /// Nourein: `C(n) = 1/(1.64 n + 1.944)` for 3 <= n <= 23, `1/(1.42 n + 8.7)` beyond.
    Nedic3,
}

/// `beta` of the first Petković-Herceg condition.
pub fn petkovic_herceg_beta(n: usize, c: f64) -> Result<f64> {
    let nf = n as f64;
    check_domain("petkovic_herceg_beta", c, 1.0 / (nf + 1.0))?;
    let (u, v) = (1.0 - nf * c, 1.0 - (nf + 1.0) * c);
    let w = 1.0 - (nf - 1.0) * c;
    Ok((nf - 1.0) * c * c * (1.0 + (nf - 1.0) * c) / (u * w) * (u / v).powi(n as i32 - 1))
}

/// Piecewise `g`: `1 + 2x` on `(0, 1/2]`, `1/(1 - x)` on `(1/2, 1)`.
pub fn petkovic_herceg_g(x: f64) -> f64 {
    if x <= 0.5 {
        1.0 + 2.0 * x
    } else if x < 1.0 {
        1.0 / (1.0 - x)
    } else {
        f64::INFINITY
    }
}

fn petkovic_herceg_41_holds(n: usize, c: f64) -> bool {
    if !(c > 0.0) || !ehrlich_c_condition_holds(n, c) {
        return false;
    }
    let Ok(beta) = petkovic_herceg_beta(n, c) else {
        return false;
    };
    let rhs = (1.0 - (n as f64 - 1.0) * c) / (2.0 * c);
    beta < 1.0 && petkovic_herceg_g(beta) < rhs
}

fn nedic_2_holds(n: usize, c: f64) -> bool {
    let nf = n as f64;
    let limit = 2.0 / (nf + 4.0 + (nf * nf + 8.0 * nf).sqrt());
    if !(c > 0.0 && c < limit) {
        return false;
    }
    let Ok(beta) = nourein_c_condition_lhs(n, c) else {
        return false;
    };
    beta < (1.0 - nf * c) / (1.0 + (nf - 2.0) * c)
}

impl PriorWork {
    pub fn method(self) -> CertificateKind {
        match self {
            PriorWork::Nedic2 | PriorWork::Nedic3 => CertificateKind::Nourein,
            _ => CertificateKind::Ehrlich,
        }
    }

    /// Whether `||W(z0)||_inf <= c delta(z0)` is an admissible initial condition.
    pub fn condition(self, n: usize, c: f64) -> Result<bool> {
        match self {
            PriorWork::PetkovicHerceg41 => Ok(petkovic_herceg_41_holds(n, c)),
            PriorWork::Nedic2 => Ok(nedic_2_holds(n, c)),
            PriorWork::PetkovicHerceg42 | PriorWork::Nedic3 => {
                Ok(c >= 0.0 && c <= self.threshold(n)?)
            }
            PriorWork::ZhengHuang => Err(Error::Inapplicable(
                "the Zheng-Huang condition is cited but not stated".into(),
            )),
        }
    }

    /// Largest admissible `C` for degree `n`.
    pub fn threshold(self, n: usize) -> Result<f64> {
        let nf = n as f64;
        match self {
            PriorWork::PetkovicHerceg42 => match n {
                0..=2 => Err(Error::Inapplicable("stated for n >= 3".into())),
                3 | 4 => Ok(1.0 / (nf + 4.5)),
                _ => Ok(1.0 / (1.545 * nf + 5.0)),
            },
            PriorWork::Nedic3 => match n {
                0..=2 => Err(Error::Inapplicable("stated for n >= 3".into())),
                3..=23 => Ok(1.0 / (1.64 * nf + 1.944)),
                _ => Ok(1.0 / (1.42 * nf + 8.7)),
            },
            PriorWork::PetkovicHerceg41 | PriorWork::Nedic2 => {
                if n < 2 {
                    return Err(Error::DegreeTooSmall(n));
                }
                // admissible sets are intervals [0, C*): every left side is
                // increasing in C and every right side decreasing
                let hi = match self {
                    PriorWork::PetkovicHerceg41 => 1.0 / (nf + 1.0),
                    _ => 2.0 / (nf + 4.0 + (nf * nf + 8.0 * nf).sqrt()),
                };
                let tiny = hi * 1e-9;
                if !self.condition(n, tiny)? {
                    return Err(Error::Inapplicable("no admissible C".into()));
                }
                let top = hi * (1.0 - 1e-15);
                if self.condition(n, top)? {
                    return Ok(hi);
                }
                bisect(
                    |c| {
                        if self.condition(n, c).unwrap_or(false) {
                            -1.0
                        } else {
                            1.0
                        }
                    },
                    tiny,
                    top,
                    1e-15,
                )
            }
            PriorWork::ZhengHuang => self.condition(n, 0.0).map(|_| 0.0),
        }
    }
}
