use std::fmt;

use serde::Serialize;

/// 1-based line and column (columns count characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, col: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Unresolved,
    Semantic,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Unresolved => "unresolved reference",
            DiagnosticKind::Semantic => "semantic error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub pos: Pos,
    /// offending token as written
    pub token: String,
    /// what the parser would have accepted, for syntax errors
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<String>,
    pub message: String,
    /// violated axiom, for semantic errors raised by a validator
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
}

impl Diagnostic {
    fn new(kind: DiagnosticKind, pos: Pos, token: &str, message: String) -> Self {
        Self {
            kind,
            pos,
            token: token.to_string(),
            expected: Vec::new(),
            message,
            axiom: None,
        }
    }

    pub fn lexical(pos: Pos, token: &str, message: String) -> Self {
        Self::new(DiagnosticKind::Lexical, pos, token, message)
    }

    pub fn syntax(pos: Pos, token: &str, expected: Vec<String>) -> Self {
        let message = format!("expected {}", expected.join(", "));
        Self {
            expected,
            ..Self::new(DiagnosticKind::Syntax, pos, token, message)
        }
    }

    pub fn syntax_msg(pos: Pos, token: &str, message: String) -> Self {
        Self::new(DiagnosticKind::Syntax, pos, token, message)
    }

    pub fn unresolved(pos: Pos, token: &str, message: String) -> Self {
        Self::new(DiagnosticKind::Unresolved, pos, token, message)
    }

    pub fn semantic(pos: Pos, token: &str, message: String) -> Self {
        Self::new(DiagnosticKind::Semantic, pos, token, message)
    }

    pub fn with_axiom(mut self, axiom: &str) -> Self {
        self.axiom = Some(axiom.to_string());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.kind.as_str(), self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        if let Some(a) = &self.axiom {
            write!(f, " [axiom: {a}]")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}
