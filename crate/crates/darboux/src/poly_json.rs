//! Exact JSON encoding of [`Poly`].
//!
//! A polynomial is stored as `{"nsites", "trunc", "terms"}` where `terms` is
//! an array of `{"exps", "t", "params", "num", "den"}` objects in graded
//! lexicographic order. `exps` lists the `x` exponents of every site followed
//! by the `y` exponents; `params` holds the `(nu, gamma, eps)` exponents.
//! Numerators and denominators are decimal strings so that big rationals
//! survive the trip.

use std::str::FromStr;

use darboux_core::{MIndex, Poly, Rat};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub t: u32,
    pub params: [u32; 3],
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub nsites: usize,
    pub trunc: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Error)]
pub enum PolyJsonError {
    #[error("term {index}: expected {expected} exponents, found {found}")]
    ExponentCount { index: usize, expected: usize, found: usize },
    #[error("term {index}: cannot parse {field} {value:?}")]
    BadInteger { index: usize, field: &'static str, value: String },
    #[error("term {index}: zero denominator")]
    ZeroDenominator { index: usize },
    #[error("term {index}: phase degree {degree} exceeds truncation {trunc}")]
    AboveTruncation { index: usize, degree: u32, trunc: u32 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(idx, c)| TermJson {
                exps: idx.phase().to_vec(),
                t: idx.t(),
                params: idx.params(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        PolyJson { nsites: p.nsites(), trunc: p.trunc(), terms }
    }
}

impl TryFrom<&PolyJson> for Poly {
    type Error = PolyJsonError;

    fn try_from(doc: &PolyJson) -> Result<Poly, PolyJsonError> {
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (index, term) in doc.terms.iter().enumerate() {
            if term.exps.len() != 2 * doc.nsites {
                return Err(PolyJsonError::ExponentCount {
                    index,
                    expected: 2 * doc.nsites,
                    found: term.exps.len(),
                });
            }
            let degree: u32 = term.exps.iter().sum();
            if degree > doc.trunc {
                return Err(PolyJsonError::AboveTruncation { index, degree, trunc: doc.trunc });
            }
            let parse = |field: &'static str, value: &str| {
                BigInt::from_str(value).map_err(|_| PolyJsonError::BadInteger {
                    index,
                    field,
                    value: value.to_owned(),
                })
            };
            let num = parse("num", &term.num)?;
            let den = parse("den", &term.den)?;
            if den == BigInt::from(0) {
                return Err(PolyJsonError::ZeroDenominator { index });
            }
            terms.push((MIndex::new(term.exps.clone(), term.t, term.params), Rat::new(num, den)));
        }
        Ok(Poly::from_terms(doc.nsites, doc.trunc, terms))
    }
}

pub fn to_value(p: &Poly) -> serde_json::Value {
    serde_json::to_value(PolyJson::from(p)).expect("poly document is always serializable")
}

pub fn to_string(p: &Poly) -> String {
    serde_json::to_string_pretty(&PolyJson::from(p)).expect("poly document is always serializable")
}

pub fn from_str(s: &str) -> Result<Poly, PolyJsonError> {
    let doc: PolyJson = serde_json::from_str(s)?;
    Poly::try_from(&doc)
}
