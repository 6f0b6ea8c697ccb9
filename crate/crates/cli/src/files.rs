//! JSON documents read and written by the tool: coefficient tables of
//! vector-valued forms and exponent lists for products.

use borcherds_core::algebra::{format_rational, parse_rational, rat, Rational};
use borcherds_core::vvforms::VvCoeffs;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: String,
    pub h: i64,
    pub c: String,
}

/// `{level, sigma, weight, entries: [{n, h, c}]}` with rationals as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffTableFile {
    pub level: i64,
    pub sigma: i64,
    pub weight: String,
    pub entries: Vec<TableEntry>,
}

fn parse(field: &str, s: &str) -> Result<Rational, FileError> {
    parse_rational(s).map_err(|_| FileError::Invalid(format!("{field}: {s:?} is not a rational number")))
}

impl CoeffTableFile {
    pub fn from_coeffs(t: &VvCoeffs) -> Self {
        let four_n = rat(4 * t.level);
        CoeffTableFile {
            level: t.level,
            sigma: t.sigma,
            weight: format_rational(&t.weight),
            entries: t
                .entries
                .iter()
                .map(|(&(n4, h), c)| TableEntry { n: format_rational(&(rat(n4) / &four_n)), h, c: format_rational(c) })
                .collect(),
        }
    }

    pub fn to_coeffs(&self) -> Result<VvCoeffs, FileError> {
        if self.level < 1 || self.sigma.abs() != 1 {
            return Err(FileError::Invalid(format!("level {} / sigma {} out of range", self.level, self.sigma)));
        }
        let mut t = VvCoeffs::new(self.level, self.sigma, parse("weight", &self.weight)?);
        for e in &self.entries {
            let n4 = parse("n", &e.n)? * rat(4 * self.level);
            if !n4.is_integer() {
                return Err(FileError::Invalid(format!("n = {} is not in (1/4N)Z", e.n)));
            }
            let n4 = i64::try_from(n4.to_integer()).map_err(|_| FileError::Invalid(format!("n = {} too large", e.n)))?;
            t.add(n4, e.h, parse("c", &e.c)?);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|source| FileError::Json { path: path.to_string(), source })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentEntry {
    pub n: i64,
    pub c: String,
}

/// `{weyl?, exponents: [{n, c}]}` listing `c(n) = c⁺(|Δ|n²/4N, rn/2N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<String>,
    pub exponents: Vec<ExponentEntry>,
}

impl ExponentsFile {
    pub fn c_plus(&self) -> Result<BTreeMap<i64, Rational>, FileError> {
        let mut out = BTreeMap::new();
        for e in &self.exponents {
            if out.insert(e.n, parse("c", &e.c)?).is_some() {
                return Err(FileError::Invalid(format!("n = {} listed twice", e.n)));
            }
        }
        Ok(out)
    }

    pub fn weyl(&self) -> Result<Rational, FileError> {
        self.weyl.as_deref().map_or(Ok(rat(0)), |w| parse("weyl", w))
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|source| FileError::Json { path: path.to_string(), source })
    }
}

pub fn read(path: &str) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.to_string(), source })
}
