//! Extended-precision ground truth: reference roots, true errors and
//! empirical convergence orders.
//!
//! Reference roots come from a self-contained Weierstrass iteration on
//! [`BigComplex`] values, started on a Cauchy-bound circle and refined while
//! the working precision is doubled up to the target. Only this module pays
//! for multiprecision arithmetic.

use std::f64::consts::{LN_2, PI};
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::match_roots;
use crate::norm::NormParameter;
use crate::poly::MonicPolynomial;
use crate::scalar::ComplexScalar;
use crate::simul::{ApproximationVector, Method};

/// Binary multiprecision float with round-half-even.
pub type BigFloat = FBig<HalfEven, 2>;

/// Working precision when `SIMULROOTS_PRECISION_BITS` is unset.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Environment variable overriding [`DEFAULT_PRECISION_BITS`].
pub const PRECISION_ENV: &str = "SIMULROOTS_PRECISION_BITS";

/// Reference roots closer than this are rejected as too clustered.
pub const MIN_ROOT_SEPARATION: f64 = 1e-6;

const GLOBAL_ITERATIONS: usize = 5000;
const STAGNATION_WINDOW: usize = 300;
const RESTARTS: usize = 8;
const POLISH_ITERATIONS: usize = 60;

/// Precision from the environment, falling back to the default.
pub fn precision_bits_from_env() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

fn big(x: f64, bits: usize) -> BigFloat {
    BigFloat::try_from(x)
        .expect("finite constant")
        .with_precision(bits)
        .value()
}

fn is_zero(x: &BigFloat) -> bool {
    x.repr().significand().is_zero()
}

/// Complex number with [`BigFloat`] parts sharing one precision.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn from_c64(z: Complex64, bits: usize) -> Self {
        BigComplex {
            re: big(z.re, bits),
            im: big(z.im, bits),
        }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        BigComplex {
            re: self.re.clone().with_precision(bits).value(),
            im: self.im.clone().with_precision(bits).value(),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for BigComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        BigComplex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for BigComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        BigComplex {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for BigComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        BigComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for BigComplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        BigComplex {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
}

impl Neg for BigComplex {
    type Output = Self;
    fn neg(self) -> Self {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl ComplexScalar for BigComplex {
    fn lift(&self, c: Complex64) -> Self {
        BigComplex::from_c64(c, self.precision())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn is_zero(&self) -> bool {
        is_zero(&self.re) && is_zero(&self.im)
    }

    fn modulus(&self) -> f64 {
        self.norm_sqr().sqrt().to_f64().value()
    }

    fn ln_modulus(&self) -> f64 {
        let sq = self.norm_sqr();
        if is_zero(&sq) {
            return f64::NEG_INFINITY;
        }
        0.5 * sq.with_precision(64).value().ln().to_f64().value()
    }
}

/// Roots of a polynomial at extended precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceRoots {
    #[serde(with = "crate::fmt::complex_vec")]
    pub roots: Vec<Complex64>,
    /// `|f(xi_i)|` evaluated at the working precision, rounded to `f64`.
    #[serde(with = "crate::fmt::float_vec")]
    pub residuals: Vec<f64>,
    /// `max_i ln(|f(xi_i)| / sum_k |c_k| |xi_i|^k)`.
    #[serde(with = "crate::fmt::float")]
    pub ln_relative_residual: f64,
    pub precision_bits: usize,
    #[serde(skip)]
    pub extended: Vec<BigComplex>,
}

/// Cauchy-circle start: `1 + max|c_i|` radius, angles `2 pi k/n + rotation`.
pub fn circle_start(f: &MonicPolynomial, rotation: f64, radius_scale: f64) -> Vec<Complex64> {
    let n = f.degree();
    let r = (1.0 + f.max_coeff_modulus()) * radius_scale;
    (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64 + rotation))
        .collect()
}

/// Default rotation of the start circle; an irrational fraction of a turn.
pub fn default_rotation() -> f64 {
    (2f64.sqrt() - 1.0) * 0.5
}

fn weierstrass_sweep(f: &MonicPolynomial, z: &[BigComplex]) -> Vec<BigComplex> {
    let one = z[0].lift(Complex64::new(1.0, 0.0));
    (0..z.len())
        .map(|i| {
            let mut denom = one.clone();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    denom = denom * (z[i].clone() - zj.clone());
                }
            }
            let value = f.eval(&z[i]);
            if value.is_zero() || denom.is_zero() {
                value
            } else {
                value / denom
            }
        })
        .collect()
}

fn max_ln_relative_residual(f: &MonicPolynomial, z: &[BigComplex]) -> f64 {
    z.iter()
        .map(|zi| f.eval(zi).ln_modulus() - f.abs_eval(zi.to_c64()).ln())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Relative residual level a converged root reaches at `bits` of precision.
fn ln_residual_target(bits: usize) -> f64 {
    -((bits as f64) - 24.0) * LN_2
}

/// Runs Weierstrass' iteration at fixed precision until the corrections stop
/// shrinking; `true` when the residual target was reached.
fn converge_at(f: &MonicPolynomial, z: &mut [BigComplex], bits: usize, budget: usize) -> bool {
    let target = ln_residual_target(bits);
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    let mut reached = false;
    let mut extra = 0;
    for _ in 0..budget {
        let w = weierstrass_sweep(f, z);
        let size = w
            .iter()
            .map(ComplexScalar::ln_modulus)
            .fold(f64::NEG_INFINITY, f64::max);
        for (zi, wi) in z.iter_mut().zip(w) {
            *zi = zi.clone() - wi;
        }
        if size < best - 1e-3 {
            best = size;
            since_best = 0;
        } else {
            since_best += 1;
        }
        if !reached && max_ln_relative_residual(f, z) <= target {
            reached = true;
        }
        if reached {
            // a couple of polishing sweeps after the residual target
            extra += 1;
            if extra >= 2 || since_best > 0 {
                return true;
            }
        } else if since_best > STAGNATION_WINDOW {
            return false;
        }
    }
    reached
}

/// Reference roots at the precision from [`precision_bits_from_env`].
pub fn reference_roots(f: &MonicPolynomial) -> Result<ReferenceRoots> {
    reference_roots_with(f, precision_bits_from_env(), default_rotation())
}

/// Reference roots at `bits` of precision starting from a circle rotated by `rotation`.
pub fn reference_roots_with(
    f: &MonicPolynomial,
    bits: usize,
    rotation: f64,
) -> Result<ReferenceRoots> {
    let bits = bits.max(64);
    let start_bits = bits.min(DEFAULT_PRECISION_BITS);
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x005e_ed0f_2007);
    let mut found = None;
    for attempt in 0..=RESTARTS {
        let (rot, scale) = if attempt == 0 {
            (rotation, 1.0)
        } else {
            (rng.random_range(0.0..2.0 * PI), rng.random_range(1.0..1.5))
        };
        let mut z: Vec<BigComplex> = circle_start(f, rot, scale)
            .into_iter()
            .map(|c| BigComplex::from_c64(c, start_bits))
            .collect();
        if converge_at(f, &mut z, start_bits, GLOBAL_ITERATIONS) {
            found = Some(z);
            break;
        }
    }
    let mut z = found.ok_or_else(|| {
        Error::OracleFailure(format!(
            "no convergence at {start_bits} bits after {RESTARTS} restarts"
        ))
    })?;

    let mut level = start_bits;
    while level < bits {
        level = (level * 2).min(bits);
        z = z.iter().map(|zi| zi.with_precision(level)).collect();
        if !converge_at(f, &mut z, level, POLISH_ITERATIONS) {
            return Err(Error::OracleFailure(format!(
                "refinement stalled at {level} bits"
            )));
        }
    }

    let roots: Vec<Complex64> = z.iter().map(ComplexScalar::to_c64).collect();
    let ln_relative_residual = max_ln_relative_residual(f, &z);
    if ln_relative_residual > ln_residual_target(bits) {
        return Err(Error::OracleFailure(format!(
            "relative residual e^{ln_relative_residual:.1} above target"
        )));
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i].clone() - z[j].clone()).modulus();
            if !(d > MIN_ROOT_SEPARATION) {
                return Err(Error::OracleFailure(format!(
                    "roots {i} and {j} are {d:e} apart; zeros must be simple and separated"
                )));
            }
        }
    }
    Ok(ReferenceRoots {
        residuals: z.iter().map(|zi| f.eval(zi).modulus()).collect(),
        roots,
        ln_relative_residual,
        precision_bits: bits,
        extended: z,
    })
}

/// `ln ||v||_p` from the logs of the nonnegative entries of `v`.
pub fn ln_norm(ln_values: &[f64], norm: NormParameter) -> f64 {
    let top = ln_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if norm.is_inf() || top == f64::NEG_INFINITY {
        return top;
    }
    let p = norm.p();
    let sum: f64 = ln_values.iter().map(|l| (p * (l - top)).exp()).sum();
    top + sum.ln() / p
}

/// `||z^k - xi||_p` for each iterate of a double-precision trace.
pub fn true_errors(
    trace: &[Vec<Complex64>],
    roots: &ReferenceRoots,
    norm: NormParameter,
) -> Result<Vec<f64>> {
    trace
        .iter()
        .map(|z| {
            let perm = match_roots(z, &roots.roots)?;
            Ok(norm.norm(z.iter().zip(&perm).map(|(zi, &j)| {
                (BigComplex::from_c64(*zi, roots.precision_bits) - roots.extended[j].clone())
                    .modulus()
            })))
        })
        .collect()
}

/// `ln ||z^k - xi||_p` for each iterate of an extended-precision trace.
pub fn ln_true_errors(
    trace: &[Vec<BigComplex>],
    roots: &ReferenceRoots,
    norm: NormParameter,
) -> Result<Vec<f64>> {
    trace
        .iter()
        .map(|z| {
            let approx: Vec<Complex64> = z.iter().map(ComplexScalar::to_c64).collect();
            let perm = match_roots(&approx, &roots.roots)?;
            let logs: Vec<f64> = z
                .iter()
                .zip(&perm)
                .map(|(zi, &j)| (zi.clone() - roots.extended[j].clone()).ln_modulus())
                .collect();
            Ok(ln_norm(&logs, norm))
        })
        .collect()
}

/// `ln` of the smallest error resolvable at `bits` of precision:
/// `(4n + 2) 2^-bits ||(sum_k |c_k||xi_i|^k / |f'(xi_i)|)_i||_p`.
pub fn ln_error_floor(
    f: &MonicPolynomial,
    roots: &ReferenceRoots,
    norm: NormParameter,
    bits: usize,
) -> f64 {
    let cond: Vec<f64> = roots
        .roots
        .iter()
        .map(|&xi| f.abs_eval(xi) / f.eval_derivative(&xi).norm())
        .collect();
    ((4 * f.degree() + 2) as f64).ln() - bits as f64 * LN_2 + norm.norm(cond).ln()
}

/// [`ln_error_floor`] for double precision, as a plain value.
pub fn error_floor(f: &MonicPolynomial, roots: &ReferenceRoots, norm: NormParameter) -> f64 {
    ln_error_floor(f, roots, norm, f64::MANTISSA_DIGITS as usize).exp()
}

/// Factor above the floor an error must have to count as signal.
pub const FLOOR_MARGIN: f64 = 100.0;

/// Iterates of `method` run at `bits` of precision from `z0`, including `z0`,
/// stopping once every correction is below the precision's resolution or
/// after `max_steps`.
pub fn extended_trace(
    method: Method,
    f: &MonicPolynomial,
    z0: &[Complex64],
    bits: usize,
    max_steps: usize,
) -> Result<Vec<Vec<BigComplex>>> {
    let mut z =
        ApproximationVector::new(z0.iter().map(|&c| BigComplex::from_c64(c, bits)).collect())?;
    let mut trace = vec![z.points().to_vec()];
    let resolution = -(bits as f64 - 16.0) * LN_2;
    for _ in 0..max_steps {
        let next = method.step(f, &z)?.into_vector()?;
        let moved = next
            .points()
            .iter()
            .zip(z.points())
            .map(|(a, b)| (a.clone() - b.clone()).ln_modulus())
            .fold(f64::NEG_INFINITY, f64::max);
        trace.push(next.points().to_vec());
        z = next;
        if moved < resolution {
            break;
        }
    }
    Ok(trace)
}

/// Ratios `rho_k = ln(e_{k+1}/e_k) / ln(e_k/e_{k-1})` and their plateau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    #[serde(with = "crate::fmt::float_vec")]
    pub ratios: Vec<f64>,
    /// Median of the last (up to three) ratios.
    #[serde(with = "crate::fmt::float")]
    pub plateau: f64,
    /// Number of leading errors above the noise threshold.
    pub used: usize,
}

/// Order estimate from plain errors with no noise floor.
pub fn empirical_order(errors: &[f64]) -> Result<OrderEstimate> {
    empirical_order_with_floor(errors, 0.0)
}

/// Order estimate using only errors above [`FLOOR_MARGIN`] times `floor`.
pub fn empirical_order_with_floor(errors: &[f64], floor: f64) -> Result<OrderEstimate> {
    let logs: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    empirical_order_ln(&logs, floor.ln())
}

/// Order estimate from `ln e_k`, using the leading run of strictly decreasing
/// values above `ln_floor + ln(FLOOR_MARGIN)`.
pub fn empirical_order_ln(ln_errors: &[f64], ln_floor: f64) -> Result<OrderEstimate> {
    let threshold = ln_floor + FLOOR_MARGIN.ln();
    let mut used = 0;
    for (k, &l) in ln_errors.iter().enumerate() {
        if !(l.is_finite() && l > threshold) || (k > 0 && !(l < ln_errors[k - 1])) {
            break;
        }
        used += 1;
    }
    if used < 3 {
        return Err(Error::InsufficientData(format!(
            "{used} errors above the noise floor; at least 3 are needed"
        )));
    }
    let e = &ln_errors[..used];
    let ratios: Vec<f64> = (1..used - 1)
        .map(|k| (e[k + 1] - e[k]) / (e[k] - e[k - 1]))
        .collect();
    let mut tail: Vec<f64> = ratios[ratios.len().saturating_sub(3)..].to_vec();
    tail.sort_by(f64::total_cmp);
    let mid = tail.len() / 2;
    let plateau = if tail.len() % 2 == 1 {
        tail[mid]
    } else {
        0.5 * (tail[mid - 1] + tail[mid])
    };
    Ok(OrderEstimate {
        ratios,
        plateau,
        used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Coefficients of `prod (x - k)` in exact integer arithmetic.
    fn integer_roots_poly(roots: &[i64]) -> MonicPolynomial {
        let mut full: Vec<i128> = vec![1];
        for &r in roots {
            let mut next = vec![0i128; full.len() + 1];
            for (k, &a) in full.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r as i128;
            }
            full = next;
        }
        full.pop();
        MonicPolynomial::new(full.into_iter().map(|a| c(a as f64, 0.0)).collect()).unwrap()
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn big_complex_arithmetic() {
        let a = BigComplex::from_c64(c(1.0, 2.0), 128);
        let b = BigComplex::from_c64(c(3.0, -1.0), 128);
        assert_eq!((a.clone() * b.clone()).to_c64(), c(5.0, 5.0));
        assert_eq!((a.clone() / b.clone()).to_c64(), c(0.1, 0.7));
        assert!((a.clone() - a.clone()).is_zero());
        assert!((a.ln_modulus() - 5f64.sqrt().ln()).abs() < 1e-15);
        let tiny = BigComplex::from_c64(c(1e-300, 0.0), 256);
        let tinier = tiny.clone() * tiny.clone() * tiny;
        assert_eq!(tinier.modulus(), 0.0);
        assert!((tinier.ln_modulus() - 3.0 * 1e-300f64.ln()).abs() < 1e-9);
        assert_eq!(a.lift(c(0.5, 0.0)).precision(), 128);
    }

    #[test]
    fn quadratic_and_cubic() {
        let f = MonicPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = reference_roots_with(&f, 128, default_rotation()).unwrap();
        assert_eq!(sorted(r.roots), vec![c(-1.0, 0.0), c(1.0, 0.0)]);

        let f = MonicPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = reference_roots_with(&f, 128, default_rotation()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let want = sorted(vec![c(1.0, 0.0), c(-0.5, h), c(-0.5, -h)]);
        for (got, want) in sorted(r.roots).iter().zip(&want) {
            assert!((got - want).norm() < 1e-15);
        }
        assert!(r.ln_relative_residual < (1e-30f64).ln());
    }

    #[test]
    fn wilkinson_eight_to_twenty_digits() {
        let f = integer_roots_poly(&[1, 2, 3, 4, 5, 6, 7, 8]);
        let r = reference_roots_with(&f, 128, default_rotation()).unwrap();
        let mut big: Vec<_> = r.extended.clone();
        big.sort_by(|a, b| a.to_c64().re.total_cmp(&b.to_c64().re));
        for (k, xi) in big.iter().enumerate() {
            let exact = BigComplex::from_c64(c((k + 1) as f64, 0.0), 128);
            assert!(
                (xi.clone() - exact).ln_modulus() < (1e-20f64).ln(),
                "root {k}"
            );
        }
    }

    #[test]
    fn independent_of_start_rotation() {
        let f =
            MonicPolynomial::from_roots(&[c(0.5, 1.0), c(-2.0, 0.25), c(1.5, -0.75), c(0.0, -1.0)])
                .unwrap();
        let a = reference_roots_with(&f, 192, default_rotation()).unwrap();
        let b = reference_roots_with(&f, 192, 1.0).unwrap();
        let perm = match_roots(&a.roots, &b.roots).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            let diff = (a.extended[i].clone() - b.extended[j].clone()).ln_modulus();
            let scale = a.extended[i].ln_modulus();
            assert!(diff - scale < (1e-25f64).ln());
        }
    }

    #[test]
    fn precision_doubling_reaches_target() {
        let f = integer_roots_poly(&[-2, 1, 3]);
        let r = reference_roots_with(&f, 1024, default_rotation()).unwrap();
        assert_eq!(r.precision_bits, 1024);
        assert!(r.ln_relative_residual < -900.0 * LN_2);
    }

    #[test]
    fn clustered_roots_are_refused() {
        let f = MonicPolynomial::new(vec![c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert!(matches!(
            reference_roots_with(&f, 128, default_rotation()),
            Err(Error::OracleFailure(_))
        ));
    }

    #[test]
    fn true_error_examples() {
        let f = MonicPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = reference_roots_with(&f, 128, default_rotation()).unwrap();
        let trace = vec![
            vec![c(1.1, 0.0), c(-0.9, 0.0)],
            vec![c(-1.0, 0.0), c(1.0, 0.0)],
        ];
        let inf = true_errors(&trace, &r, NormParameter::INF).unwrap();
        assert!((inf[0] - 0.1).abs() < 1e-15 && inf[1] == 0.0);
        let one = true_errors(&trace, &r, NormParameter::ONE).unwrap();
        assert!((one[0] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn ln_norm_matches_plain_norm() {
        let v = [0.3, 1e-3, 2.0];
        let logs: Vec<f64> = v.iter().map(|x: &f64| x.ln()).collect();
        for norm in [NormParameter::ONE, NormParameter::TWO, NormParameter::INF] {
            assert!((ln_norm(&logs, norm) - norm.norm(v).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn order_of_exact_sequences() {
        let est = empirical_order(&[1e-1, 1e-2, 1e-4, 1e-8]).unwrap();
        assert_eq!(est.ratios.len(), 2);
        assert!(est.ratios.iter().all(|r| (r - 2.0).abs() < 1e-12));
        assert!((est.plateau - 2.0).abs() < 1e-12);
        let est = empirical_order(&[1e-1, 1e-3, 1e-9]).unwrap();
        assert!((est.ratios[0] - 3.0).abs() < 1e-12);
        assert!(empirical_order(&[1e-1, 1e-3]).is_err());
        // values at the floor are ignored
        let est =
            empirical_order_with_floor(&[1e-1, 1e-2, 1e-4, 1e-8, 1e-14, 2e-14], 1e-15).unwrap();
        assert_eq!(est.used, 4);
    }

    #[test]
    fn extended_trace_shows_order_four() {
        let roots = [c(1.0, 0.0), c(-1.0, 0.5), c(0.25, -1.5)];
        let f = MonicPolynomial::from_roots(&roots).unwrap();
        let r = reference_roots_with(&f, 2048, default_rotation()).unwrap();
        let z0: Vec<_> = roots.iter().map(|x| x + c(0.02, -0.01)).collect();
        let trace = extended_trace(Method::Nourein, &f, &z0, 2048, 10).unwrap();
        let errs = ln_true_errors(&trace, &r, NormParameter::INF).unwrap();
        let floor = ln_error_floor(&f, &r, NormParameter::INF, 2048);
        let est = empirical_order_ln(&errs, floor).unwrap();
        assert!((est.plateau - 4.0).abs() < 0.3, "{est:?}");
    }
}
