//! The GSPEC text format: lexer, parser, resolution into core structures
//! and serialization.

pub mod ast;
pub mod diag;
pub mod lexer;
pub mod parser;
pub mod resolve;
pub mod serialize;

use ast::{Decl, Kind};
pub use diag::{Diagnostic, DiagnosticKind, Pos};
pub use resolve::{as_groupoid, Value};

/// A parsed and validated document. Equality compares declarations only.
#[derive(Debug, Clone)]
pub struct GspecDocument {
    decls: Vec<Decl>,
    values: Vec<Value>,
}

impl PartialEq for GspecDocument {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl GspecDocument {
    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.decls.iter().position(|d| d.name.node == name).map(|i| &self.values[i])
    }

    /// `(name, kind, value)` in declaration order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, Kind, &Value)> {
        self.decls
            .iter()
            .zip(&self.values)
            .map(|(d, v)| (d.name.node.as_str(), d.body.kind(), v))
    }
}

/// Syntax only: no name resolution or validation.
pub fn parse_syntax(text: &str) -> Result<Vec<Decl>, Diagnostic> {
    parser::parse_tokens(lexer::tokenize(text)?)
}

pub fn parse_gspec(text: &str) -> Result<GspecDocument, Diagnostic> {
    let decls = parse_syntax(text)?;
    let mut env = resolve::Env::new();
    for d in &decls {
        env.define(d)?;
    }
    Ok(GspecDocument {
        decls,
        values: env.values,
    })
}

/// As [`parse_gspec`], rejecting invalid UTF-8 with a positioned
/// lexical diagnostic.
pub fn parse_gspec_bytes(bytes: &[u8]) -> Result<GspecDocument, Diagnostic> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_gspec(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = 1 + valid.matches('\n').count() as u32;
            let col = 1 + valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32;
            let bad = bytes[e.valid_up_to()];
            Err(Diagnostic::lexical(Pos { line, col }, &format!("\\x{bad:02x}"), "invalid UTF-8".into()))
        }
    }
}

pub fn serialize_gspec(doc: &GspecDocument) -> String {
    serialize::write_decls(&doc.decls)
}

pub fn serialize_decls(decls: &[Decl]) -> String {
    serialize::write_decls(decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn corpus() -> Vec<(String, String)> {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gspec");
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "gspec"))
            .collect();
        files.sort();
        files
            .into_iter()
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
            .collect()
    }

    #[test]
    fn empty_document() {
        let doc = parse_gspec("").unwrap();
        assert!(doc.is_empty());
        assert_eq!(serialize_gspec(&doc), "");
        assert!(parse_gspec("  # only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn negation_action_block() {
        let doc = parse_gspec(
            "group Z2 { elements: e, s; table: s*s = e; }\n\
             action Neg { group: Z2; set: -1, 0, 1; act: s.-1 = 1, s.0 = 0; }",
        )
        .unwrap();
        let g = as_groupoid(doc.get("Neg").unwrap()).unwrap();
        assert_eq!(g.num_arrows(), 6);
        assert_eq!(g.num_orbits(), 2);
    }

    #[test]
    fn missing_composite_is_named() {
        let e = parse_gspec(
            "groupoid G { objects: x; arrows: a: x -> x, b: x -> x; compose: a*a = b, a*b = id_x; }",
        )
        .unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Semantic);
        assert!(e.message.contains("b*b"), "{e}");
        assert_eq!(e.pos.line, 1);
    }

    #[test]
    fn corpus_round_trips() {
        for (name, text) in corpus() {
            let Ok(doc) = parse_gspec(&text) else { continue };
            let out = serialize_gspec(&doc);
            assert_eq!(out, serialize_gspec(&doc), "{name}");
            let back = parse_gspec(&out).unwrap_or_else(|e| panic!("{name}: {e}\n{out}"));
            assert_eq!(back, doc, "{name}");
            assert_eq!(serialize_gspec(&back), out, "{name}");
        }
    }

    #[test]
    fn pair_groupoid_reparses_isomorphic() {
        let g = orbikit::constructors::pair_groupoid(3);
        let text = serialize_decls(&[serialize::groupoid_decl("P", &g)]);
        let doc = parse_gspec(&text).unwrap();
        let h = as_groupoid(doc.get("P").unwrap()).unwrap();
        assert_eq!(h.objects(), g.objects());
        assert_eq!(h.num_arrows(), g.num_arrows());
        // same names, same composition
        let by_name = |a: usize| g.arrow_index(h.arrow_name(a)).unwrap();
        for a in 0..h.num_arrows() {
            for b in 0..h.num_arrows() {
                assert_eq!(h.compose(a, b).map(by_name), g.compose(by_name(a), by_name(b)));
            }
        }
    }

    #[test]
    fn corpus_parses() {
        for (name, text) in corpus() {
            let r = parse_gspec(&text);
            if name == "broken.gspec" {
                assert!(r.is_err());
            } else {
                assert!(r.is_ok(), "{name}: {}", r.unwrap_err());
            }
        }
    }
}
