use serde::Serialize;
use serde_json::Value as Json;

use crate::gspec::Diagnostic;

pub const SCHEMA: &str = "orbikit-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// the command ran; a negative answer such as "not Morita equivalent" is still `ok`
    Ok,
    /// the input or the computation failed a mathematical check (exit 1)
    Invalid,
    /// usage, lexical, syntax or reference error (exit 2)
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Error => 2,
        }
    }
}

/// What `--json` prints. Field order is fixed, and object keys inside
/// `result` keep insertion order, so identical inputs give identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// plain-text rendering for the terminal
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub json: bool,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON with `--json`, the plain-text form otherwise.
    pub fn render(&self) -> String {
        if self.json {
            self.to_json()
        } else {
            self.text.clone()
        }
    }
}
