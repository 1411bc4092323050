//! The p-norm parameter and its dual exponent.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `p` in `[1, inf]` with the dual `q` (`1/p + 1/q = 1`).
///
/// The exponents `1/p` and `1/q` are stored directly so that the degenerate
/// cases `p = 1` (`1/q = 0`) and `p = inf` (`1/p = 0`) are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormParameter {
    p: f64,
    inv_p: f64,
    inv_q: f64,
}

impl NormParameter {
    pub const ONE: NormParameter = NormParameter {
        p: 1.0,
        inv_p: 1.0,
        inv_q: 0.0,
    };
    pub const TWO: NormParameter = NormParameter {
        p: 2.0,
        inv_p: 0.5,
        inv_q: 0.5,
    };
    pub const INF: NormParameter = NormParameter {
        p: f64::INFINITY,
        inv_p: 0.0,
        inv_q: 1.0,
    };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidNorm(p));
        }
        if p == 1.0 {
            Ok(Self::ONE)
        } else if p.is_infinite() {
            Ok(Self::INF)
        } else {
            let inv_p = 1.0 / p;
            Ok(NormParameter {
                p,
                inv_p,
                inv_q: 1.0 - inv_p,
            })
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Dual exponent `q`, infinite for `p = 1`.
    pub fn q(&self) -> f64 {
        if self.inv_q == 0.0 {
            f64::INFINITY
        } else if self.inv_p == 0.0 {
            1.0
        } else {
            self.p / (self.p - 1.0)
        }
    }

    pub fn inv_p(&self) -> f64 {
        self.inv_p
    }

    pub fn inv_q(&self) -> f64 {
        self.inv_q
    }

    /// `x^(1/q)`, equal to 1 for every `x > 0` when `p = 1`.
    pub fn pow_inv_q(&self, x: f64) -> f64 {
        pow_exponent(x, self.inv_q)
    }

    /// `x^(1/p)`, equal to 1 for every `x > 0` when `p = inf`.
    pub fn pow_inv_p(&self, x: f64) -> f64 {
        pow_exponent(x, self.inv_p)
    }

    pub fn is_one(&self) -> bool {
        self.inv_q == 0.0
    }

    pub fn is_inf(&self) -> bool {
        self.inv_p == 0.0
    }

    /// p-norm of a vector of nonnegative magnitudes.
    pub fn norm<I>(&self, values: I) -> f64
    where
        I: IntoIterator<Item = f64>,
    {
        let values: Vec<f64> = values.into_iter().map(f64::abs).collect();
        if self.is_inf() {
            return values.iter().copied().fold(0.0, f64::max);
        }
        if self.is_one() {
            return values.iter().sum();
        }
        // scale by the max entry so large p neither overflows nor underflows
        let scale = values.iter().copied().fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let sum: f64 = values.iter().map(|v| (v / scale).powf(self.p)).sum();
        scale * sum.powf(self.inv_p)
    }

    /// Parses `"inf"`, `"infinity"` or a number `>= 1`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::INF),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad norm parameter {s:?}")))
                .and_then(Self::new),
        }
    }
}

fn pow_exponent(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        x
    } else {
        x.powf(e)
    }
}

impl TryFrom<f64> for NormParameter {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<NormParameter> for f64 {
    fn from(n: NormParameter) -> f64 {
        n.p
    }
}

impl std::fmt::Display for NormParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_inf() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

/// Serialized as a string (`"inf"`, `"2"`); numbers are accepted on input.
impl Serialize for NormParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormParameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(p) => Self::new(p),
            Repr::Str(s) => Self::parse(&s),
        }
        .map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for NormParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_exponents() {
        let one = NormParameter::new(1.0).unwrap();
        assert_eq!(one.q(), f64::INFINITY);
        assert_eq!(one.pow_inv_q(7.0), 1.0);
        assert_eq!(one.pow_inv_p(7.0), 7.0);

        let inf = NormParameter::parse("inf").unwrap();
        assert_eq!(inf.q(), 1.0);
        assert_eq!(inf.pow_inv_q(7.0), 7.0);
        assert_eq!(inf.pow_inv_p(7.0), 1.0);

        let three = NormParameter::new(3.0).unwrap();
        assert!((three.q() - 1.5).abs() < 1e-15);
        assert!((three.inv_p() + three.inv_q() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn serde_as_string() {
        assert_eq!(
            serde_json::to_string(&NormParameter::INF).unwrap(),
            "\"inf\""
        );
        let p: NormParameter = serde_json::from_str("2").unwrap();
        assert_eq!(p, NormParameter::TWO);
        let p: NormParameter = serde_json::from_str("\"inf\"").unwrap();
        assert!(p.is_inf());
    }

    #[test]
    fn rejects_bad_p() {
        assert!(NormParameter::new(0.5).is_err());
        assert!(NormParameter::new(f64::NAN).is_err());
        assert!(NormParameter::parse("abc").is_err());
    }

    #[test]
    fn norms() {
        let v = [3.0, 4.0];
        assert_eq!(NormParameter::ONE.norm(v), 7.0);
        assert_eq!(NormParameter::INF.norm(v), 4.0);
        assert!((NormParameter::TWO.norm(v) - 5.0).abs() < 1e-15);
        assert_eq!(NormParameter::TWO.norm([0.0, 0.0]), 0.0);
        // no overflow for huge entries
        assert!((NormParameter::TWO.norm([3e300, 4e300]) - 5e300).abs() < 1e286);
    }
}
