//! Simultaneous-iteration kernel: Weierstrass corrections, separations, the
//! quality measure `E(z) = ||W(z)/d(z)||_p`, and the total-step maps of the
//! Weierstrass, Ehrlich (two algebraically equal forms) and Nourein methods.
//!
//! Every step reads only the previous iterate; no component sees a partially
//! updated vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormParameter;
use crate::poly::MonicPolynomial;
use crate::scalar::ComplexScalar;

/// Absolute floor on component separation and on shifted differences.
pub const DISTINCTNESS_FLOOR: f64 = 1e-30;

/// Update denominators with modulus below this are rejected.
pub const DENOMINATOR_TOLERANCE: f64 = 1e-30;

/// Separation below which two components count as coincident.
///
/// A few units in the last place of the largest component, never below
/// [`DISTINCTNESS_FLOOR`].
pub fn distinctness_tolerance<T: ComplexScalar>(points: &[T]) -> f64 {
    let scale = points
        .iter()
        .map(ComplexScalar::modulus)
        .fold(0.0, f64::max);
    (16.0 * f64::EPSILON * scale).max(DISTINCTNESS_FLOOR)
}

fn first_collision<T: ComplexScalar>(points: &[T]) -> Option<(usize, usize, f64)> {
    let tol = distinctness_tolerance(points);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dist = (points[i].clone() - points[j].clone()).modulus();
            if !(dist > tol) {
                return Some((i, j, dist));
            }
        }
    }
    None
}

/// A point of `C^n` with pairwise-distinct components.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationVector<T = Complex64> {
    points: Vec<T>,
}

impl<T: ComplexScalar> ApproximationVector<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegreeTooSmall(points.len()));
        }
        if let Some((i, j, distance)) = first_collision(&points) {
            return Err(Error::DistinctnessViolation { i, j, distance });
        }
        Ok(ApproximationVector { points })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn into_points(self) -> Vec<T> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_c64(&self) -> ApproximationVector<Complex64> {
        ApproximationVector {
            points: self.points.iter().map(ComplexScalar::to_c64).collect(),
        }
    }
}

impl ApproximationVector<Complex64> {
    pub fn from_c64(points: &[Complex64]) -> Result<Self> {
        Self::new(points.to_vec())
    }
}

/// `d_i(z) = min_{j != i} |z_i - z_j|` and `delta(z) = min_i d_i(z)`.
pub fn separations<T: ComplexScalar>(z: &[T]) -> (Vec<f64>, f64) {
    let n = z.len();
    let mut d = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = (z[i].clone() - z[j].clone()).modulus();
            d[i] = d[i].min(dist);
            d[j] = d[j].min(dist);
        }
    }
    let delta = d.iter().copied().fold(f64::INFINITY, f64::min);
    (d, delta)
}

fn check_dimension(f: &MonicPolynomial, n: usize) -> Result<()> {
    if f.degree() != n {
        return Err(Error::DimensionMismatch {
            expected: f.degree(),
            got: n,
        });
    }
    Ok(())
}

/// `W_i(z) = f(z_i) / prod_{j != i} (z_i - z_j)`.
pub fn weierstrass_corrections<T: ComplexScalar>(
    f: &MonicPolynomial,
    z: &ApproximationVector<T>,
) -> Result<Vec<T>> {
    check_dimension(f, z.len())?;
    Ok(corrections_unchecked(f, z.points()))
}

fn corrections_unchecked<T: ComplexScalar>(f: &MonicPolynomial, z: &[T]) -> Vec<T> {
    (0..z.len())
        .map(|i| {
            let value = f.eval(&z[i]);
            if value.is_zero() {
                return value;
            }
            let mut denom = z[i].lift(Complex64::new(1.0, 0.0));
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    denom = denom * (z[i].clone() - zj.clone());
                }
            }
            value / denom
        })
        .collect()
}

/// Per-iterate quantities shared by certificates, bounds and stopping rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepQuantities {
    #[serde(with = "crate::fmt::complex_vec")]
    pub w: Vec<Complex64>,
    #[serde(with = "crate::fmt::float_vec")]
    pub d: Vec<f64>,
    #[serde(with = "crate::fmt::float")]
    pub delta: f64,
    /// `E(z) = ||W(z)/d(z)||_p`.
    #[serde(with = "crate::fmt::float")]
    pub e: f64,
    /// `||W(z)||_p`.
    #[serde(with = "crate::fmt::float")]
    pub w_norm: f64,
    /// Upper bounds on the rounding error of each computed `|W_i|`.
    #[serde(with = "crate::fmt::float_vec")]
    pub w_err: Vec<f64>,
}

impl StepQuantities {
    /// `E` with every `|W_i|` raised by its rounding-error bound.
    pub fn e_upper(&self, norm: NormParameter) -> f64 {
        norm.norm(
            self.w
                .iter()
                .zip(&self.w_err)
                .zip(&self.d)
                .map(|((w, err), d)| (w.norm() + err) / d),
        )
    }

    /// `||W||_p` with every `|W_i|` raised by its rounding-error bound.
    pub fn w_norm_upper(&self, norm: NormParameter) -> f64 {
        norm.norm(
            self.w
                .iter()
                .zip(&self.w_err)
                .map(|(w, err)| w.norm() + err),
        )
    }
}

pub fn step_quantities(
    f: &MonicPolynomial,
    z: &ApproximationVector,
    norm: NormParameter,
) -> Result<StepQuantities> {
    check_dimension(f, z.len())?;
    let points = z.points();
    let n = points.len();
    let (d, delta) = separations(points);
    let mut w = Vec::with_capacity(n);
    let mut w_err = Vec::with_capacity(n);
    // relative rounding of the difference product and the final division
    let product_rel = (3 * n + 2) as f64 * f64::EPSILON;
    for i in 0..n {
        let (value, value_err) = f.eval_with_error_bound(points[i]);
        let denom: Complex64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| points[i] - points[j])
            .product();
        let wi = if value.is_zero() {
            value
        } else {
            value / denom
        };
        let err = value_err / denom.norm() + wi.norm() * product_rel;
        w.push(wi);
        w_err.push(err * (1.0 + product_rel));
    }
    let e = norm.norm(w.iter().zip(&d).map(|(wi, di)| wi.norm() / di));
    let w_norm = norm.norm(w.iter().map(|wi| wi.norm()));
    Ok(StepQuantities {
        w,
        d,
        delta,
        e,
        w_norm,
        w_err,
    })
}

/// `E(z) = ||(|W_1|/d_1, ..., |W_n|/d_n)||_p`.
pub fn quality_e(f: &MonicPolynomial, z: &ApproximationVector, norm: NormParameter) -> Result<f64> {
    Ok(step_quantities(f, z, norm)?.e)
}

/// Output of one step. `collision` flags a result whose components are no
/// longer distinct; the raw points are still returned for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult<T = Complex64> {
    pub next: Vec<T>,
    pub collision: Option<(usize, usize)>,
}

impl<T: ComplexScalar> StepResult<T> {
    fn from_points(next: Vec<T>) -> Self {
        let collision = first_collision(&next).map(|(i, j, _)| (i, j));
        StepResult { next, collision }
    }

    /// The new iterate, or `PostStepCollision` if it lost distinctness.
    pub fn into_vector(self) -> Result<ApproximationVector<T>> {
        match self.collision {
            Some((i, j)) => Err(Error::PostStepCollision { i, j }),
            None => Ok(ApproximationVector { points: self.next }),
        }
    }
}

fn check_denominator<T: ComplexScalar>(den: &T, i: usize) -> Result<()> {
    if den.modulus() < DENOMINATOR_TOLERANCE {
        Err(Error::SingularDenominator(i))
    } else {
        Ok(())
    }
}

/// Weierstrass (Durand-Kerner) step `z' = z - W(z)`.
pub fn step_weierstrass<T: ComplexScalar>(
    f: &MonicPolynomial,
    z: &ApproximationVector<T>,
) -> Result<StepResult<T>> {
    let w = weierstrass_corrections(f, z)?;
    let next = z
        .points()
        .iter()
        .zip(w)
        .map(|(zi, wi)| zi.clone() - wi)
        .collect();
    Ok(StepResult::from_points(next))
}

/// Ehrlich step in derivative form:
/// `z_i' = z_i - f(z_i) / (f'(z_i) - f(z_i) sum_{j != i} 1/(z_i - z_j))`.
pub fn step_ehrlich_derivative_form<T: ComplexScalar>(
    f: &MonicPolynomial,
    z: &ApproximationVector<T>,
) -> Result<StepResult<T>> {
    check_dimension(f, z.len())?;
    let points = z.points();
    let one = points[0].lift(Complex64::new(1.0, 0.0));
    let mut next = Vec::with_capacity(points.len());
    for (i, zi) in points.iter().enumerate() {
        let value = f.eval(zi);
        if value.is_zero() {
            next.push(zi.clone());
            continue;
        }
        let mut sum = zi.lift(Complex64::new(0.0, 0.0));
        for (j, zj) in points.iter().enumerate() {
            if j != i {
                sum = sum + one.clone() / (zi.clone() - zj.clone());
            }
        }
        let den = f.eval_derivative(zi) - value.clone() * sum;
        check_denominator(&den, i)?;
        next.push(zi.clone() - value / den);
    }
    Ok(StepResult::from_points(next))
}

/// Ehrlich step in Börsch-Supan form:
/// `z_i' = z_i - W_i / (1 + sum_{j != i} W_j / (z_i - z_j))`.
pub fn step_ehrlich_bs_form<T: ComplexScalar>(
    f: &MonicPolynomial,
    z: &ApproximationVector<T>,
) -> Result<StepResult<T>> {
    let w = weierstrass_corrections(f, z)?;
    let points = z.points();
    let mut next = Vec::with_capacity(points.len());
    for (i, zi) in points.iter().enumerate() {
        if w[i].is_zero() {
            next.push(zi.clone());
            continue;
        }
        let mut den = zi.lift(Complex64::new(1.0, 0.0));
        for (j, zj) in points.iter().enumerate() {
            if j != i {
                den = den + w[j].clone() / (zi.clone() - zj.clone());
            }
        }
        check_denominator(&den, i)?;
        next.push(zi.clone() - w[i].clone() / den);
    }
    Ok(StepResult::from_points(next))
}

/// Nourein step (Börsch-Supan with Weierstrass' correction):
/// `z_i' = z_i - W_i / (1 + sum_{j != i} W_j / (z_i - z_j - W_i))`.
pub fn step_nourein<T: ComplexScalar>(
    f: &MonicPolynomial,
    z: &ApproximationVector<T>,
) -> Result<StepResult<T>> {
    let w = weierstrass_corrections(f, z)?;
    let points = z.points();
    let tol = distinctness_tolerance(points);
    let mut next = Vec::with_capacity(points.len());
    for (i, zi) in points.iter().enumerate() {
        if w[i].is_zero() {
            next.push(zi.clone());
            continue;
        }
        let mut den = zi.lift(Complex64::new(1.0, 0.0));
        for (j, zj) in points.iter().enumerate() {
            if j != i {
                let shifted = zi.clone() - zj.clone() - w[i].clone();
                if !(shifted.modulus() > tol) {
                    return Err(Error::ShiftedCollision { i, j });
                }
                den = den + w[j].clone() / shifted;
            }
        }
        check_denominator(&den, i)?;
        next.push(zi.clone() - w[i].clone() / den);
    }
    Ok(StepResult::from_points(next))
}

/// The simultaneous iterations provided by the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Weierstrass,
    /// Ehrlich in Börsch-Supan form.
    Ehrlich,
    /// Ehrlich in derivative form.
    EhrlichDerivative,
    Nourein,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Weierstrass,
        Method::Ehrlich,
        Method::EhrlichDerivative,
        Method::Nourein,
    ];

    pub fn step<T: ComplexScalar>(
        self,
        f: &MonicPolynomial,
        z: &ApproximationVector<T>,
    ) -> Result<StepResult<T>> {
        match self {
            Method::Weierstrass => step_weierstrass(f, z),
            Method::Ehrlich => step_ehrlich_bs_form(f, z),
            Method::EhrlichDerivative => step_ehrlich_derivative_form(f, z),
            Method::Nourein => step_nourein(f, z),
        }
    }

    /// Convergence order under the method's certificate.
    pub fn order(self) -> u32 {
        match self {
            Method::Weierstrass => 2,
            Method::Ehrlich | Method::EhrlichDerivative => 3,
            Method::Nourein => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Weierstrass => "weierstrass",
            Method::Ehrlich => "ehrlich",
            Method::EhrlichDerivative => "ehrlich-derivative",
            Method::Nourein => "nourein",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}
