use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dense::{QPoly, ZPoly};
use crate::error::{Error, Result};

/// Monic polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonicIntPolynomial(ZPoly);

/// Monic polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonicRatPolynomial(QPoly);

impl MonicIntPolynomial {
    pub fn new(p: ZPoly) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::InvalidInput(format!("{p} is not monic")));
        }
        Ok(MonicIntPolynomial(p))
    }

    /// Panics unless the last coefficient is 1.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(ZPoly::from_i64(coeffs)).expect("monic coefficients")
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    pub fn poly(&self) -> &ZPoly {
        &self.0
    }

    pub fn into_poly(self) -> ZPoly {
        self.0
    }

    pub fn to_rat(&self) -> MonicRatPolynomial {
        MonicRatPolynomial(QPoly::from_int(&self.0))
    }

    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.coeffs().iter().map(|c| c.to_i64()).collect()
    }
}

impl MonicRatPolynomial {
    pub fn new(p: QPoly) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::InvalidInput(format!("{p} is not monic")));
        }
        Ok(MonicRatPolynomial(p))
    }

    /// Build from `(numerator, denominator)` pairs.
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Result<Self> {
        Self::new(QPoly::new(
            coeffs
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        ))
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    pub fn poly(&self) -> &QPoly {
        &self.0
    }

    pub fn into_poly(self) -> QPoly {
        self.0
    }

    pub fn to_int(&self) -> Option<MonicIntPolynomial> {
        self.0.to_int().map(MonicIntPolynomial)
    }
}

impl Deref for MonicIntPolynomial {
    type Target = ZPoly;
    fn deref(&self) -> &ZPoly {
        &self.0
    }
}

impl Deref for MonicRatPolynomial {
    type Target = QPoly;
    fn deref(&self) -> &QPoly {
        &self.0
    }
}

/// Parse a rational from `"p/q"`, an integer, or a plain decimal such as `"-1.9"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num = BigInt::from_str(&digits)
            .map_err(|_| Error::InvalidInput(format!("bad decimal {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let v = BigRational::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    BigRational::from_str(s).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))
}

pub fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Serde adapter writing a rational as a `"p/q"` string; accepts the forms
/// understood by [`parse_rational`] and plain JSON integers.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => super::parse_rational(&t).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(BigRational::from_integer(i.into())),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffsJson {
    coeffs: Vec<String>,
}

impl QPoly {
    pub fn to_json_coeffs(&self) -> Vec<String> {
        self.coeffs().iter().map(format_rational).collect()
    }

    pub fn from_json_coeffs(c: &[String]) -> Result<QPoly> {
        Ok(QPoly::new(
            c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?,
        ))
    }
}

impl Serialize for MonicRatPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsJson { coeffs: self.0.to_json_coeffs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonicRatPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffsJson::deserialize(d)?;
        let p = QPoly::from_json_coeffs(&raw.coeffs).map_err(serde::de::Error::custom)?;
        MonicRatPolynomial::new(p).map_err(serde::de::Error::custom)
    }
}

impl Serialize for MonicIntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsJson {
            coeffs: self.0.coeffs().iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonicIntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rat = MonicRatPolynomial::deserialize(d)?;
        rat.to_int()
            .ok_or_else(|| serde::de::Error::custom("coefficients are not integers"))
    }
}

impl Default for MonicIntPolynomial {
    fn default() -> Self {
        MonicIntPolynomial(ZPoly::constant(BigInt::one()))
    }
}

impl MonicRatPolynomial {
    /// `X^d + gamma/n` split: returns `(n, gamma)` with `n` the least common
    /// denominator and `gamma` the integer lower part.
    pub fn split_denominator(&self) -> (BigInt, ZPoly) {
        let n = self.0.common_denominator();
        let d = self.degree();
        let gamma: Vec<BigInt> = self.0.coeffs()[..d]
            .iter()
            .map(|c| (c * BigRational::from_integer(n.clone())).to_integer())
            .collect();
        (n, ZPoly::new(gamma))
    }

    pub fn is_integral(&self) -> bool {
        self.0.coeffs().iter().all(|c| c.is_integer())
    }

    pub fn x() -> Self {
        MonicRatPolynomial(QPoly::x())
    }

    pub fn zero_const_shift(c: BigRational) -> Self {
        // x - c
        MonicRatPolynomial(QPoly::new(vec![-c, BigRational::one()]))
    }
}

impl Default for MonicRatPolynomial {
    fn default() -> Self {
        MonicRatPolynomial(QPoly::constant(BigRational::one()))
    }
}

impl QPoly {
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> QPoly {
        QPoly::new(
            coeffs
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }
}
