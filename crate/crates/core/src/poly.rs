//! Monic complex polynomials and their evaluation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ComplexScalar;

/// `f(x) = x^n + c[n-1] x^(n-1) + ... + c[0]`, stored low-to-high without the
/// implicit leading one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialFile", into = "PolynomialFile")]
pub struct MonicPolynomial {
    coeffs: Vec<Complex64>,
}

/// On-disk form: `{"degree": n, "coeffs": [[re, im], ...]}`, low-to-high, length n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub degree: usize,
    #[serde(with = "crate::fmt::complex_vec")]
    pub coeffs: Vec<Complex64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooSmall(coeffs.len()));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(MonicPolynomial { coeffs })
    }

    /// Builds from all `n + 1` coefficients (low-to-high), dividing by the leading one.
    pub fn from_full_coefficients(all: &[Complex64]) -> Result<Self> {
        let (lead, rest) = all.split_last().ok_or(Error::DegreeTooSmall(0))?;
        if lead.norm() == 0.0 {
            return Err(Error::Parse("leading coefficient is zero".into()));
        }
        Self::new(rest.iter().map(|c| c / lead).collect())
    }

    /// Expands `prod (x - r)` in double precision.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        // full[k] is the coefficient of x^k
        let mut full = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); full.len() + 1];
            for (k, &c) in full.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            full = next;
        }
        full.pop();
        Self::new(full)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c[0] .. c[n-1]`; the leading one is implicit.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation of `f(x)`.
    pub fn eval<T: ComplexScalar>(&self, x: &T) -> T {
        let mut acc = x.lift(Complex64::new(1.0, 0.0));
        for &c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + x.lift(c);
        }
        acc
    }

    /// Horner evaluation of `f'(x)`.
    pub fn eval_derivative<T: ComplexScalar>(&self, x: &T) -> T {
        let n = self.degree();
        let mut acc = x.lift(Complex64::new(n as f64, 0.0));
        for k in (1..n).rev() {
            acc = acc * x.clone() + x.lift(self.coeffs[k] * k as f64);
        }
        acc
    }

    /// `sum |c_k| |x|^k` including the leading term; the scale of rounding
    /// errors in Horner's scheme at `x`.
    pub fn abs_eval(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(1.0, |acc, c| acc * r + c.norm())
    }

    /// `f(x)` together with an upper bound on the rounding error of the
    /// computed value.
    pub fn eval_with_error_bound(&self, x: Complex64) -> (Complex64, f64) {
        let value = self.eval(&x);
        let gamma = (4 * self.degree() + 2) as f64 * f64::EPSILON;
        (value, gamma * self.abs_eval(x))
    }

    /// Polynomial as a plain expression string, e.g. `x^2 + (-1+0i)`.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("x^{}", self.degree())];
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() != 0.0 {
                let term = match k {
                    0 => format!("({c})"),
                    1 => format!("({c})x"),
                    _ => format!("({c})x^{k}"),
                };
                parts.push(term);
            }
        }
        parts.join(" + ")
    }
}

impl TryFrom<PolynomialFile> for MonicPolynomial {
    type Error = Error;

    fn try_from(file: PolynomialFile) -> Result<Self> {
        if file.coeffs.len() != file.degree {
            return Err(Error::CoefficientCount {
                expected: file.degree,
                got: file.coeffs.len(),
            });
        }
        Self::new(file.coeffs)
    }
}

impl From<MonicPolynomial> for PolynomialFile {
    fn from(p: MonicPolynomial) -> Self {
        PolynomialFile {
            degree: p.degree(),
            coeffs: p.coeffs,
        }
    }
}

/// Zeros of a polynomial, ordered to match an approximation vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector {
    #[serde(with = "crate::fmt::complex_vec")]
    pub roots: Vec<Complex64>,
}

impl RootVector {
    pub fn new(roots: Vec<Complex64>) -> Self {
        RootVector { roots }
    }

    pub fn max_residual(&self, f: &MonicPolynomial) -> f64 {
        self.roots
            .iter()
            .map(|r| f.eval(r).norm())
            .fold(0.0, f64::max)
    }
}
