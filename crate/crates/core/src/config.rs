//! JSON configuration files for fields and vector fields.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse, ParseError, ScalarExpr};
use crate::maxwell::EMField3;
use crate::symmetry::VectorField4;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("component {component}: {source}")]
    Expr {
        component: String,
        #[source]
        source: ParseError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Solution,
    Nonsolution,
}

/// `{"E": [..3], "B": [..3], "name"?, "expect"?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(rename = "E")]
    pub e: [String; 3],
    #[serde(rename = "B")]
    pub b: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

fn parse_all<const N: usize>(
    label: &str,
    src: &[String; N],
) -> Result<[ScalarExpr; N], ConfigError> {
    let mut out = Vec::with_capacity(N);
    for (i, s) in src.iter().enumerate() {
        let e = parse(s).map_err(|source| ConfigError::Expr {
            component: format!("{label}[{i}]"),
            source,
        })?;
        out.push(e);
    }
    Ok(out
        .try_into()
        .unwrap_or_else(|_| unreachable!("length is N")))
}

impl FieldConfig {
    pub fn from_json(src: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn field(&self) -> Result<EMField3, ConfigError> {
        Ok(EMField3::new(
            parse_all("E", &self.e)?,
            parse_all("B", &self.b)?,
        ))
    }

    pub fn from_field(f: &EMField3, name: Option<&str>, expect: Option<Expectation>) -> Self {
        FieldConfig {
            e: f.e.clone().map(|c| c.to_string()),
            b: f.b.clone().map(|c| c.to_string()),
            name: name.map(str::to_string),
            expect,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryExpectation {
    Symmetry,
    Nonsymmetry,
}

/// `{"X": [..4], "name"?, "expect"?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFieldConfig {
    #[serde(rename = "X")]
    pub x: [String; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<SymmetryExpectation>,
}

impl VectorFieldConfig {
    pub fn from_json(src: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn field(&self) -> Result<VectorField4, ConfigError> {
        Ok(VectorField4::new(parse_all("X", &self.x)?))
    }
}
