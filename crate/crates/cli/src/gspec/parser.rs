//! Recursive-descent parser over the token stream.

use super::ast::*;
use super::diag::{Diagnostic, Pos};
use super::lexer::{Tok, Token};

pub struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn quote(s: &str) -> String {
    format!("`{s}`")
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Self { toks, at: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at.min(self.toks.len() - 1)]
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        let mut d = Diagnostic::syntax(
            t.pos,
            &token_text(&t.tok),
            expected.iter().map(|s| s.to_string()).collect(),
        );
        d.message = format!("{}, found {}", d.message, t.tok.describe());
        Err(d)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            self.error(&[&quote(tok.symbol())])
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn name(&mut self) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Word(w) | Tok::Quoted(w) => {
                let w = w.clone();
                let pos = self.bump().pos;
                Ok(At::new(pos, w))
            }
            _ => self.error(&["name"]),
        }
    }

    fn integer<T: std::str::FromStr>(&mut self) -> PResult<T> {
        match &self.peek().tok {
            Tok::Word(w) => match w.parse::<T>() {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => {
                    let t = self.peek();
                    Err(Diagnostic::syntax_msg(
                        t.pos,
                        w,
                        "expected an integer in range".into(),
                    ))
                }
            },
            _ => self.error(&["integer"]),
        }
    }

    /// `item ("," item)*`, possibly empty, up to (not including) `;`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.peek().tok == Tok::Semi {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if self.peek().tok != Tok::Semi {
            return self.error(&["`,`", "`;`"]);
        }
        Ok(out)
    }

    fn triple(&mut self, op: Tok) -> PResult<Triple> {
        let a = self.name()?;
        self.expect(op)?;
        let b = self.name()?;
        self.expect(Tok::Eq)?;
        let c = self.name()?;
        Ok((a, b, c))
    }

    fn pair(&mut self) -> PResult<Pair> {
        let a = self.name()?;
        self.expect(Tok::Arrow)?;
        let b = self.name()?;
        Ok((a, b))
    }

    pub fn document(&mut self) -> PResult<Vec<Decl>> {
        let mut decls = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(decls),
                Tok::Word(w) if Kind::from_keyword(w).is_some() => {
                    let kind = Kind::from_keyword(w).expect("checked");
                    self.bump();
                    decls.push(self.decl(kind)?);
                }
                _ => {
                    let mut exp: Vec<&str> = vec!["`group`", "`action`", "`groupoid`", "`gspace`", "`gmodule`", "`complex`", "`hom`"];
                    exp.push("end of input");
                    return self.error(&exp);
                }
            }
        }
    }

    fn decl(&mut self, kind: Kind) -> PResult<Decl> {
        let name = self.name()?;
        if self.eat(&Tok::Eq) {
            let b = self.builtin()?;
            self.expect(Tok::Semi)?;
            return Ok(Decl {
                name,
                body: Body::Builtin(kind, b),
            });
        }
        if self.peek().tok != Tok::LBrace {
            return self.error(&["`=`", "`{`"]);
        }
        self.bump();
        let body = match kind {
            Kind::Group => Body::Group(self.fields(&["elements", "table", "points", "generators"], Self::group_field)?),
            Kind::Action => Body::Action(self.fields(&["group", "set", "act"], Self::action_field)?),
            Kind::Groupoid => Body::Groupoid(self.fields(&["objects", "arrows", "compose"], Self::groupoid_field)?),
            Kind::GSpace => Body::GSpace(self.fields(&["base", "points", "act"], Self::gspace_field)?),
            Kind::GModule => Body::GModule(self.fields(&["base", "fiber", "act"], Self::gmodule_field)?),
            Kind::Complex => Body::Complex(self.fields(&["index", "group", "hom", "twist"], Self::complex_field)?),
            Kind::Hom => Body::Hom(self.fields(&["from", "to", "objects", "arrows"], Self::hom_field)?),
        };
        Ok(Decl { name, body })
    }

    /// Fields up to the closing brace. Each field starts with one of
    /// `keywords` and ends with `;`.
    fn fields<F>(&mut self, keywords: &[&str], field: fn(&mut Self, &str) -> PResult<F>) -> PResult<Vec<At<F>>> {
        let mut out = Vec::new();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            let kw = match &self.peek().tok {
                Tok::Word(w) if keywords.contains(&w.as_str()) => w.clone(),
                _ => {
                    let mut exp: Vec<String> = keywords.iter().map(|k| quote(k)).collect();
                    exp.push("`}`".into());
                    let refs: Vec<&str> = exp.iter().map(String::as_str).collect();
                    return self.error(&refs);
                }
            };
            let pos = self.bump().pos;
            let f = field(self, &kw)?;
            self.expect(Tok::Semi)?;
            out.push(At::new(pos, f));
        }
    }

    fn builtin(&mut self) -> PResult<Builtin> {
        let func = match &self.peek().tok {
            Tok::Word(_) => self.name()?,
            _ => return self.error(&["constructor name"]),
        };
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.arg()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.error(&["`,`", "`)`"]);
                }
            }
        }
        Ok(Builtin { func, args })
    }

    fn arg(&mut self) -> PResult<Arg> {
        if self.is_word("Z") && matches!(self.peek2(), Tok::Caret | Tok::Slash | Tok::Plus) {
            let pos = self.peek().pos;
            return Ok(Arg::Fiber(At::new(pos, self.fiber()?)));
        }
        Ok(Arg::Name(self.name()?))
    }

    fn fiber(&mut self) -> PResult<FiberExpr> {
        if self.is_word("0") {
            self.bump();
            return Ok(FiberExpr { terms: Vec::new() });
        }
        let mut terms = Vec::new();
        loop {
            if !self.is_word("Z") {
                return self.error(&["`Z`", "`0`"]);
            }
            self.bump();
            let term = if self.eat(&Tok::Caret) {
                FiberTerm::Free(Some(self.integer()?))
            } else if self.eat(&Tok::Slash) {
                FiberTerm::Cyclic(self.integer()?)
            } else {
                FiberTerm::Free(None)
            };
            terms.push(term);
            if !self.eat(&Tok::Plus) {
                return Ok(FiberExpr { terms });
            }
        }
    }

    fn group_field(&mut self, kw: &str) -> PResult<GroupField> {
        self.expect(Tok::Colon)?;
        Ok(match kw {
            "elements" => GroupField::Elements(self.list(Self::name)?),
            "table" => GroupField::Table(self.list(|p| p.triple(Tok::Star))?),
            "points" => GroupField::Points(self.list(Self::name)?),
            _ => GroupField::Generators(self.list(Self::permutation)?),
        })
    }

    fn permutation(&mut self) -> PResult<Vec<Vec<Ident>>> {
        let mut cycles = Vec::new();
        if self.peek().tok != Tok::LParen {
            return self.error(&["`(`"]);
        }
        while self.eat(&Tok::LParen) {
            let mut c = Vec::new();
            while !self.eat(&Tok::RParen) {
                match self.peek().tok {
                    Tok::Word(_) | Tok::Quoted(_) => c.push(self.name()?),
                    _ => return self.error(&["name", "`)`"]),
                }
            }
            cycles.push(c);
        }
        Ok(cycles)
    }

    fn action_field(&mut self, kw: &str) -> PResult<ActionField> {
        self.expect(Tok::Colon)?;
        Ok(match kw {
            "group" => ActionField::Group(self.name()?),
            "set" => ActionField::Set(self.list(Self::name)?),
            _ => ActionField::Act(self.list(|p| p.triple(Tok::Dot))?),
        })
    }

    fn groupoid_field(&mut self, kw: &str) -> PResult<GroupoidField> {
        self.expect(Tok::Colon)?;
        Ok(match kw {
            "objects" => GroupoidField::Objects(self.list(Self::name)?),
            "arrows" => GroupoidField::Arrows(self.list(|p| {
                let f = p.name()?;
                p.expect(Tok::Colon)?;
                let (a, b) = p.pair()?;
                Ok((f, a, b))
            })?),
            _ => GroupoidField::Compose(self.list(|p| p.triple(Tok::Star))?),
        })
    }

    fn gspace_field(&mut self, kw: &str) -> PResult<GSpaceField> {
        self.expect(Tok::Colon)?;
        Ok(match kw {
            "base" => GSpaceField::Base(self.name()?),
            "points" => GSpaceField::Points(self.list(Self::pair)?),
            _ => GSpaceField::Act(self.list(|p| p.triple(Tok::Dot))?),
        })
    }

    fn gmodule_field(&mut self, kw: &str) -> PResult<GModuleField> {
        Ok(match kw {
            "base" => {
                self.expect(Tok::Colon)?;
                GModuleField::Base(self.name()?)
            }
            "fiber" => {
                let at = if self.peek().tok == Tok::Colon { None } else { Some(self.name()?) };
                self.expect(Tok::Colon)?;
                GModuleField::Fiber(at, self.fiber()?)
            }
            _ => {
                let g = self.name()?;
                self.expect(Tok::Colon)?;
                GModuleField::Act(g, self.matrix()?)
            }
        })
    }

    fn matrix(&mut self) -> PResult<Vec<Vec<i64>>> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(rows);
        }
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = Vec::new();
            if !self.eat(&Tok::RBracket) {
                loop {
                    row.push(self.integer()?);
                    if self.eat(&Tok::RBracket) {
                        break;
                    }
                    if !self.eat(&Tok::Comma) {
                        return self.error(&["`,`", "`]`"]);
                    }
                }
            }
            rows.push(row);
            if self.eat(&Tok::RBracket) {
                return Ok(rows);
            }
            if !self.eat(&Tok::Comma) {
                return self.error(&["`,`", "`]`"]);
            }
        }
    }

    fn arrow_ref(&mut self) -> PResult<ArrowRef> {
        let a = self.name()?;
        // `a < b` and `a -> b` both name the unique arrow of a poset index
        if self.eat(&Tok::Lt) || self.eat(&Tok::Arrow) {
            let b = self.name()?;
            return Ok(ArrowRef::Less(a, b));
        }
        Ok(ArrowRef::Named(a))
    }

    fn complex_field(&mut self, kw: &str) -> PResult<ComplexField> {
        Ok(match kw {
            "index" => {
                self.expect(Tok::Colon)?;
                if self.is_word("poset") {
                    self.bump();
                    ComplexField::Index(IndexSpec::Poset(self.list(|p| {
                        let mut chain = vec![p.name()?];
                        while p.eat(&Tok::Lt) {
                            chain.push(p.name()?);
                        }
                        Ok(chain)
                    })?))
                } else if self.is_word("groupoid") {
                    self.bump();
                    ComplexField::Index(IndexSpec::Groupoid(self.name()?))
                } else {
                    return self.error(&["`poset`", "`groupoid`"]);
                }
            }
            "group" => {
                let x = self.name()?;
                self.expect(Tok::Colon)?;
                ComplexField::Group(x, self.name()?)
            }
            "hom" => {
                let r = self.arrow_ref()?;
                self.expect(Tok::Colon)?;
                ComplexField::Hom(r, self.list(Self::pair)?)
            }
            _ => {
                self.expect(Tok::LParen)?;
                let t = self.arrow_ref()?;
                self.expect(Tok::Comma)?;
                let s = self.arrow_ref()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Colon)?;
                ComplexField::Twist(t, s, self.name()?)
            }
        })
    }

    fn hom_field(&mut self, kw: &str) -> PResult<HomField> {
        self.expect(Tok::Colon)?;
        Ok(match kw {
            "from" => HomField::From(self.name()?),
            "to" => HomField::To(self.name()?),
            "objects" => HomField::Objects(self.list(Self::pair)?),
            _ => HomField::Arrows(self.list(Self::pair)?),
        })
    }
}

fn token_text(t: &Tok) -> String {
    match t {
        Tok::Word(w) => w.clone(),
        Tok::Quoted(q) => format!("\"{q}\""),
        Tok::Eof => String::new(),
        other => other.symbol().to_string(),
    }
}

/// Token stream to syntax tree.
pub fn parse_tokens(toks: Vec<Token>) -> Result<Vec<Decl>, Diagnostic> {
    Parser::new(toks).document()
}
