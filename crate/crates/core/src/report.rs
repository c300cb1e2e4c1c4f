//! Verification reports and their exit-code semantics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::expr::ZeroVerdict;

pub const SCHEMA: &str = "1";

/// Exit code when every residual vanishes.
pub const EXIT_OK: i32 = 0;
/// Exit code when some residual is nonzero.
pub const EXIT_NONZERO: i32 = 1;
/// Exit code for unreadable input or bad arguments.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code when no residual is nonzero but some verdict is indeterminate.
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    /// Suite the residual belongs to, e.g. `check-maxwell`.
    pub check: String,
    /// Residual name within the suite.
    pub residual: String,
    /// Rendering of the residual after normalization.
    pub value: String,
    pub verdict: ZeroVerdict,
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub version: String,
    /// Hex SHA-256 of the input bytes, empty when there is no input file.
    pub input_digest: String,
    pub entries: Vec<Entry>,
    /// Informational quantities that carry no verdict.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

impl Report {
    pub fn new(tool: &str, version: &str, input_digest: &str) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            tool: tool.to_string(),
            version: version.to_string(),
            input_digest: input_digest.to_string(),
            entries: Vec::new(),
            values: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, entry: Entry) {
        self.entries.push(entry);
    }

    /// Orders entries by check and residual name; the sort is stable so
    /// reports assembled in any order serialize identically.
    pub fn sort(&mut self) {
        self.entries
            .sort_by(|a, b| (&a.check, &a.residual).cmp(&(&b.check, &b.residual)));
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &ZeroVerdict> {
        self.entries.iter().map(|e| &e.verdict)
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.verdicts())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(src)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .entries
            .iter()
            .map(|e| e.check.len() + e.residual.len() + 1)
            .max()
            .unwrap_or(0);
        for e in &self.entries {
            let name = format!("{}/{}", e.check, e.residual);
            let _ = writeln!(out, "{name:<width$}  {}", e.verdict);
            if !e.verdict.is_zero() {
                let _ = writeln!(out, "{:width$}  residual: {}", "", e.value);
            }
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k} = {v}");
        }
        let _ = writeln!(out, "exit {}", self.exit_code());
        out
    }
}

/// Any nonzero verdict gives 1, otherwise any indeterminate gives 3,
/// otherwise 0.
pub fn exit_code<'a, I: IntoIterator<Item = &'a ZeroVerdict>>(verdicts: I) -> i32 {
    let mut indeterminate = false;
    for v in verdicts {
        match v {
            ZeroVerdict::NonZero { .. } => return EXIT_NONZERO,
            ZeroVerdict::Indeterminate => indeterminate = true,
            _ => {}
        }
    }
    if indeterminate {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    }
}
