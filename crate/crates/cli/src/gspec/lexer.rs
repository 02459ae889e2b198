use super::diag::{Diagnostic, Pos};

/// Upper bound on accepted input, in bytes.
pub const MAX_INPUT_BYTES: usize = 1 << 20;
pub const MAX_NAME_CHARS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// bare identifier or integer literal
    Word(String),
    /// quoted name
    Quoted(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Eq,
    Star,
    Dot,
    Arrow,
    Lt,
    Plus,
    Caret,
    Slash,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Quoted(q) => format!("{q:?}"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Star => "*",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::Lt => "<",
            Tok::Plus => "+",
            Tok::Caret => "^",
            Tok::Slash => "/",
            Tok::Word(_) | Tok::Quoted(_) => "name",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether `s` can be written without quotes.
pub fn is_bare(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.chars().all(word_char) {
        return false;
    }
    // a leading minus only introduces numbers
    s.len() == body.len() || body.starts_with(|c: char| c.is_ascii_digit())
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    if src.len() > MAX_INPUT_BYTES {
        return Err(Diagnostic::lexical(
            Pos::START,
            "",
            format!("input exceeds {MAX_INPUT_BYTES} bytes"),
        ));
    }
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut pos = Pos::START;
    let advance = |pos: &mut Pos, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(&mut pos, c);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(&mut pos, c);
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '*' => Some(Tok::Star),
            '.' => Some(Tok::Dot),
            '<' => Some(Tok::Lt),
            '+' => Some(Tok::Plus),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            advance(&mut pos, c);
            out.push(Token { tok, pos: start });
            continue;
        }
        if c == '-' {
            chars.next();
            advance(&mut pos, c);
            match chars.peek().copied() {
                Some('>') => {
                    chars.next();
                    advance(&mut pos, '>');
                    out.push(Token { tok: Tok::Arrow, pos: start });
                }
                Some(d) if d.is_ascii_digit() => {
                    let mut w = String::from("-");
                    while let Some(&c) = chars.peek() {
                        if !word_char(c) {
                            break;
                        }
                        w.push(c);
                        chars.next();
                        advance(&mut pos, c);
                    }
                    check_len(&w, start)?;
                    out.push(Token { tok: Tok::Word(w), pos: start });
                }
                other => {
                    let found = other.map(|c| format!("-{c}")).unwrap_or_else(|| "-".into());
                    return Err(Diagnostic::lexical(start, &found, "`-` must start `->` or a negative number".into()));
                }
            }
            continue;
        }
        if c == '"' {
            chars.next();
            advance(&mut pos, c);
            let mut s = String::new();
            loop {
                match chars.next() {
                    None | Some('\n') => {
                        return Err(Diagnostic::lexical(start, "\"", "unterminated quoted name".into()));
                    }
                    Some('"') => {
                        advance(&mut pos, '"');
                        break;
                    }
                    Some('\\') => {
                        advance(&mut pos, '\\');
                        let here = pos;
                        match chars.next() {
                            Some(e @ ('"' | '\\')) => {
                                advance(&mut pos, e);
                                s.push(e);
                            }
                            other => {
                                let found = other.map(|c| format!("\\{c}")).unwrap_or_else(|| "\\".into());
                                return Err(Diagnostic::lexical(here, &found, "unknown escape in quoted name".into()));
                            }
                        }
                    }
                    Some(c) => {
                        advance(&mut pos, c);
                        s.push(c);
                    }
                }
            }
            if s.is_empty() {
                return Err(Diagnostic::lexical(start, "\"\"", "empty quoted name".into()));
            }
            check_len(&s, start)?;
            out.push(Token { tok: Tok::Quoted(s), pos: start });
            continue;
        }
        if word_char(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if !word_char(c) {
                    break;
                }
                w.push(c);
                chars.next();
                advance(&mut pos, c);
            }
            check_len(&w, start)?;
            out.push(Token { tok: Tok::Word(w), pos: start });
            continue;
        }
        return Err(Diagnostic::lexical(start, &c.to_string(), "unexpected character".into()));
    }
    out.push(Token { tok: Tok::Eof, pos });
    Ok(out)
}

fn check_len(s: &str, pos: Pos) -> Result<(), Diagnostic> {
    if s.chars().count() > MAX_NAME_CHARS {
        let head: String = s.chars().take(16).collect();
        return Err(Diagnostic::lexical(pos, &head, format!("name longer than {MAX_NAME_CHARS} characters")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn words_numbers_and_arrows() {
        assert_eq!(
            toks("f: a -> -1; # note\n\"(1 2)\""),
            vec![
                Tok::Word("f".into()),
                Tok::Colon,
                Tok::Word("a".into()),
                Tok::Arrow,
                Tok::Word("-1".into()),
                Tok::Semi,
                Tok::Quoted("(1 2)".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!((t[1].pos.line, t[1].pos.col), (2, 3));
    }

    #[test]
    fn lexical_errors_carry_positions() {
        let e = tokenize("group G {\n  $").unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (2, 3));
        assert_eq!(e.token, "$");
        assert!(tokenize("\"open").is_err());
        assert!(tokenize("- x").is_err());
        assert!(tokenize("\"a\\q\"").is_err());
    }

    #[test]
    fn bare_names() {
        for s in ["a", "id_x", "-12", "0", "x'"] {
            assert!(is_bare(s), "{s}");
        }
        for s in ["", "-", "-a", "(1 2)", "a>b", "é"] {
            assert!(!is_bare(s), "{s}");
        }
    }
}
