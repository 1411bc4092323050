//! Float formatting and serde adapters for the JSON file formats.
//!
//! Floats are written as decimal strings with 17 significant digits so that
//! every value round-trips bit-exactly. Readers accept either JSON numbers or
//! such strings.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::Deserialize;

/// 17 significant digits in scientific notation (`"1.2500000000000000e-1"`).
pub fn f64_str(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Positional notation with `digits` significant digits.
pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return f64_str(x);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .map_err(|e| format!("bad float {s:?}: {e}")),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(f64),
    Str(String),
}

impl NumOrStr {
    fn into_f64<E: de::Error>(self) -> Result<f64, E> {
        match self {
            NumOrStr::Num(x) => Ok(x),
            NumOrStr::Str(s) => parse_f64(&s).map_err(E::custom),
        }
    }
}

pub mod float {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&f64_str(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        NumOrStr::deserialize(d)?.into_f64()
    }
}

pub mod opt_float {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&f64_str(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<NumOrStr>::deserialize(d)?
            .map(NumOrStr::into_f64)
            .transpose()
    }
}

pub mod float_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&f64_str(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<NumOrStr>::deserialize(d)?
            .into_iter()
            .map(NumOrStr::into_f64)
            .collect()
    }
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&f64_str(z.re))?;
        seq.serialize_element(&f64_str(z.im))?;
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[NumOrStr; 2]>::deserialize(d)?;
        Ok(Complex64::new(re.into_f64()?, im.into_f64()?))
    }
}

pub mod complex_vec {
    use super::*;

    #[derive(Deserialize)]
    struct Pair(#[serde(with = "super::complex")] Complex64);

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(zs.len()))?;
        for z in zs {
            seq.serialize_element(&[f64_str(z.re), f64_str(z.im)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<Pair>::deserialize(d)?
            .into_iter()
            .map(|p| p.0)
            .collect())
    }
}

pub mod opt_complex_vec {
    use super::*;

    #[derive(Deserialize)]
    struct Wrapped(#[serde(with = "super::complex_vec")] Vec<Complex64>);

    pub fn serialize<S: Serializer>(zs: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match zs {
            Some(v) => super::complex_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = f64_str(x);
            assert_eq!(parse_f64(&s).unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(f64_str(0.125), "1.2500000000000000e-1");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig_digits(0.29221977, 4), "0.2922");
        assert_eq!(sig_digits(2.679_570_457_114_761, 7), "2.679570");
        assert_eq!(sig_digits(123.456, 4), "123.5");
    }
}
