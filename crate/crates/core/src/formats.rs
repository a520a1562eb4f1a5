//! On-disk forms: function files (JSON), reports (JSON with fields in
//! declaration order) and CSV.
//!
//! A function file carries the field (`n` and the modulus as a check), the
//! sparse terms with coefficients as element text, optionally the full table
//! for table-backed functions, and optionally the family parameters it was
//! built from.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::FamilyParams;
use crate::gf2n::{make_field, Elem, FieldError, FieldSpec};
use crate::vbf::{FunctionSpec, VbfError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("modulus {found} does not match the canonical modulus {expected} for n = {n}")]
    Modulus { n: u32, found: String, expected: String },
    #[error("file has neither terms nor a table")]
    Empty,
    #[error("terms and table disagree at x = {0:#x}")]
    Inconsistent(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Function(#[from] VbfError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermText {
    pub coeff: String,
    pub exp: u64,
}

/// Family parameters with elements as text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyText {
    pub family: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<String>,
}

impl FamilyText {
    pub fn from_params(field: &FieldSpec, p: &FamilyParams) -> Self {
        let t = |e: Option<Elem>| e.map(|e| field.format_power(e));
        FamilyText {
            family: p.family,
            k: p.k,
            s: p.s,
            i: p.i,
            m: p.m,
            u: t(p.u),
            t: t(p.t),
            alpha: t(p.alpha),
            beta: t(p.beta),
            v: t(p.v),
            w: t(p.w),
            gamma: p.gamma.iter().map(|&e| field.format_power(e)).collect(),
        }
    }

    pub fn to_params(&self, n: u32) -> Result<FamilyParams, FieldError> {
        let field = make_field(n)?;
        let e = |s: &Option<String>| s.as_deref().map(|s| field.parse_elem(s)).transpose();
        Ok(FamilyParams {
            family: self.family,
            n,
            k: self.k,
            s: self.s,
            i: self.i,
            m: self.m,
            u: e(&self.u)?,
            t: e(&self.t)?,
            alpha: e(&self.alpha)?,
            beta: e(&self.beta)?,
            v: e(&self.v)?,
            w: e(&self.w)?,
            gamma: self.gamma.iter().map(|s| field.parse_elem(s)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub n: u32,
    pub modulus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermText>>,
    /// Values `f(x)` as coordinate masks, `x` in mask order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyText>,
    /// Built with parameter validation bypassed.
    #[serde(default)]
    pub unchecked: bool,
}

impl FunctionFile {
    /// Sparse functions are stored by their terms only; table-backed ones
    /// by their table.
    pub fn from_function(f: &FunctionSpec, family: Option<&FamilyParams>, unchecked: bool) -> Self {
        let field = f.field();
        let terms = f
            .terms()
            .map(|ts| ts.iter().map(|t| TermText { coeff: field.format_power(t.coeff), exp: t.exp }).collect());
        let table = if terms.is_none() { Some(f.table().iter().map(|e| e.0).collect()) } else { None };
        FunctionFile {
            n: f.n(),
            modulus: format!("{:#x}", field.modulus()),
            terms,
            table,
            family: family.map(|p| FamilyText::from_params(field, p)),
            unchecked,
        }
    }

    pub fn to_function(&self) -> Result<FunctionSpec, FormatError> {
        let field = make_field(self.n)?;
        let expected = format!("{:#x}", field.modulus());
        let found = u64::from_str_radix(self.modulus.trim().trim_start_matches("0x"), 16).ok();
        if found != Some(field.modulus() as u64) {
            return Err(FormatError::Modulus { n: self.n, found: self.modulus.clone(), expected });
        }
        let from_table = match &self.table {
            Some(t) => Some(FunctionSpec::from_table(&field, t.iter().map(|&v| Elem(v)).collect())?),
            None => None,
        };
        match (&self.terms, from_table) {
            (Some(terms), table) => {
                let pairs: Vec<(&str, u64)> = terms.iter().map(|t| (t.coeff.as_str(), t.exp)).collect();
                let f = FunctionSpec::from_terms(&field, &pairs)?;
                if let Some(t) = table {
                    if let Some(x) = (0..f.table().len()).find(|&x| f.table()[x] != t.table()[x]) {
                        return Err(FormatError::Inconsistent(x as u32));
                    }
                }
                Ok(f)
            }
            (None, Some(t)) => Ok(t.into_table_backed()),
            (None, None) => Err(FormatError::Empty),
        }
    }

    pub fn family_params(&self) -> Result<Option<FamilyParams>, FieldError> {
        self.family.as_ref().map(|f| f.to_params(self.n)).transpose()
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        let text =
            fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        write_json(path, self)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut s = to_json(value);
    s.push('\n');
    fs::write(path, s).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text =
        fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, example_table_n12};
    use crate::invariants::ea_transform;

    #[test]
    fn sparse_round_trip() {
        for f in example_table_n12() {
            let file = FunctionFile::from_function(&f, None, false);
            assert!(file.table.is_none());
            let json = to_json(&file);
            let back: FunctionFile = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_function().unwrap(), f);
        }
    }

    #[test]
    fn table_round_trip() {
        let field = make_field(6).unwrap();
        let f = ea_transform(&FunctionSpec::monomial(&field, 3).unwrap(), 11);
        let file = FunctionFile::from_function(&f, None, false);
        let back: FunctionFile = serde_json::from_str(&to_json(&file)).unwrap();
        assert_eq!(back.to_function().unwrap().table(), f.table());
    }

    #[test]
    fn family_round_trip() {
        let field = make_field(12).unwrap();
        let p = FamilyParams::family7(4, 5, field.generator(), Elem::ONE, field.gen_pow(273));
        let f = build_family(&p).unwrap();
        let file = FunctionFile::from_function(&f, Some(&p), false);
        let back: FunctionFile = serde_json::from_str(&to_json(&file)).unwrap();
        assert_eq!(back.family_params().unwrap(), Some(p));
    }

    #[test]
    fn wrong_modulus_rejected() {
        let field = make_field(6).unwrap();
        let mut file = FunctionFile::from_function(&FunctionSpec::monomial(&field, 3).unwrap(), None, false);
        file.modulus = "0x49".into();
        assert!(matches!(file.to_function(), Err(FormatError::Modulus { .. })));
        file.modulus = "0x43".into();
        file.terms = None;
        assert!(matches!(file.to_function(), Err(FormatError::Empty)));
    }

    #[test]
    fn inconsistent_table_rejected() {
        let field = make_field(4).unwrap();
        let f = FunctionSpec::monomial(&field, 3).unwrap();
        let mut file = FunctionFile::from_function(&f, None, false);
        let mut t: Vec<u32> = f.table().iter().map(|e| e.0).collect();
        t[5] ^= 1;
        file.table = Some(t);
        assert!(matches!(file.to_function(), Err(FormatError::Inconsistent(5))));
    }
}
