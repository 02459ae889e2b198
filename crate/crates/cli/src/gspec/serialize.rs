//! Canonical text form: one declaration per block, one field per line,
//! names quoted only when they are not bare words.

use std::fmt::Write;

use super::ast::*;
use orbikit::groupoid::FiniteGroupoid;

use super::diag::Pos;
use super::lexer::is_bare;

fn name(s: &str) -> String {
    if is_bare(s) {
        s.to_string()
    } else {
        let mut q = String::from("\"");
        for c in s.chars() {
            if c == '"' || c == '\\' {
                q.push('\\');
            }
            q.push(c);
        }
        q.push('"');
        q
    }
}

fn names(ids: &[Ident]) -> String {
    ids.iter().map(|i| name(&i.node)).collect::<Vec<_>>().join(", ")
}

fn triples(ts: &[Triple], op: &str) -> String {
    ts.iter()
        .map(|(a, b, c)| format!("{}{op}{} = {}", name(&a.node), name(&b.node), name(&c.node)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn pairs(ps: &[Pair]) -> String {
    ps.iter()
        .map(|(a, b)| format!("{} -> {}", name(&a.node), name(&b.node)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn fiber(f: &FiberExpr) -> String {
    if f.terms.is_empty() {
        return "0".into();
    }
    f.terms
        .iter()
        .map(|t| match t {
            FiberTerm::Free(None) => "Z".to_string(),
            FiberTerm::Free(Some(n)) => format!("Z^{n}"),
            FiberTerm::Cyclic(n) => format!("Z/{n}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn arrow_ref(r: &ArrowRef) -> String {
    match r {
        ArrowRef::Named(a) => name(&a.node),
        ArrowRef::Less(a, b) => format!("{} < {}", name(&a.node), name(&b.node)),
    }
}

fn matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn field_lines(body: &Body) -> Vec<String> {
    match body {
        Body::Builtin(..) => Vec::new(),
        Body::Group(fs) => fs
            .iter()
            .map(|f| match &f.node {
                GroupField::Elements(v) => format!("elements: {}", names(v)),
                GroupField::Table(t) => format!("table: {}", triples(t, " * ")),
                GroupField::Points(v) => format!("points: {}", names(v)),
                GroupField::Generators(gs) => {
                    let perms: Vec<String> = gs
                        .iter()
                        .map(|cycles| cycles.iter().map(|c| format!("({})", c.iter().map(|p| name(&p.node)).collect::<Vec<_>>().join(" "))).collect())
                        .collect();
                    format!("generators: {}", perms.join(", "))
                }
            })
            .collect(),
        Body::Action(fs) => fs
            .iter()
            .map(|f| match &f.node {
                ActionField::Group(g) => format!("group: {}", name(&g.node)),
                ActionField::Set(v) => format!("set: {}", names(v)),
                ActionField::Act(t) => format!("act: {}", triples(t, ".")),
            })
            .collect(),
        Body::Groupoid(fs) => fs
            .iter()
            .map(|f| match &f.node {
                GroupoidField::Objects(v) => format!("objects: {}", names(v)),
                GroupoidField::Arrows(t) => {
                    let a: Vec<String> = t
                        .iter()
                        .map(|(f, a, b)| format!("{}: {} -> {}", name(&f.node), name(&a.node), name(&b.node)))
                        .collect();
                    format!("arrows: {}", a.join(", "))
                }
                GroupoidField::Compose(t) => format!("compose: {}", triples(t, " * ")),
            })
            .collect(),
        Body::GSpace(fs) => fs
            .iter()
            .map(|f| match &f.node {
                GSpaceField::Base(b) => format!("base: {}", name(&b.node)),
                GSpaceField::Points(p) => format!("points: {}", pairs(p)),
                GSpaceField::Act(t) => format!("act: {}", triples(t, ".")),
            })
            .collect(),
        Body::GModule(fs) => fs
            .iter()
            .map(|f| match &f.node {
                GModuleField::Base(b) => format!("base: {}", name(&b.node)),
                GModuleField::Fiber(None, e) => format!("fiber: {}", fiber(e)),
                GModuleField::Fiber(Some(x), e) => format!("fiber {}: {}", name(&x.node), fiber(e)),
                GModuleField::Act(g, m) => format!("act {}: {}", name(&g.node), matrix(m)),
            })
            .collect(),
        Body::Complex(fs) => fs
            .iter()
            .map(|f| match &f.node {
                ComplexField::Index(IndexSpec::Poset(chains)) => {
                    let c: Vec<String> = chains
                        .iter()
                        .map(|ch| ch.iter().map(|x| name(&x.node)).collect::<Vec<_>>().join(" < "))
                        .collect();
                    format!("index: poset {}", c.join(", "))
                }
                ComplexField::Index(IndexSpec::Groupoid(g)) => format!("index: groupoid {}", name(&g.node)),
                ComplexField::Group(x, k) => format!("group {}: {}", name(&x.node), name(&k.node)),
                ComplexField::Hom(r, p) => format!("hom {}: {}", arrow_ref(r), pairs(p)),
                ComplexField::Twist(t, s, g) => format!("twist ({}, {}): {}", arrow_ref(t), arrow_ref(s), name(&g.node)),
            })
            .collect(),
        Body::Hom(fs) => fs
            .iter()
            .map(|f| match &f.node {
                HomField::From(g) => format!("from: {}", name(&g.node)),
                HomField::To(g) => format!("to: {}", name(&g.node)),
                HomField::Objects(p) => format!("objects: {}", pairs(p)),
                HomField::Arrows(p) => format!("arrows: {}", pairs(p)),
            })
            .collect(),
    }
}

pub fn write_decls(decls: &[Decl]) -> String {
    let mut out = String::new();
    for (i, d) in decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let kw = d.body.kind().keyword();
        match &d.body {
            Body::Builtin(_, b) => {
                let args: Vec<String> = b
                    .args
                    .iter()
                    .map(|a| match a {
                        Arg::Name(n) => name(&n.node),
                        Arg::Fiber(f) => fiber(&f.node),
                    })
                    .collect();
                let _ = writeln!(out, "{kw} {} = {}({});", name(&d.name.node), name(&b.func.node), args.join(", "));
            }
            body => {
                let _ = writeln!(out, "{kw} {} {{", name(&d.name.node));
                for line in field_lines(body) {
                    let _ = writeln!(out, "  {line};");
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

/// An explicit `groupoid` block with every non-unit arrow and every
/// composite of non-unit arrows. Units become `id_<object>`.
pub fn groupoid_decl(name: &str, g: &FiniteGroupoid) -> Decl {
    let id = |s: String| At::new(Pos::START, s);
    let label = |a: usize| {
        if g.is_unit(a) {
            format!("id_{}", g.object_name(g.src(a)))
        } else {
            g.arrow_name(a).to_string()
        }
    };
    let arrows: Vec<usize> = (0..g.num_arrows()).filter(|&a| !g.is_unit(a)).collect();
    let mut compose = Vec::new();
    for &f in &arrows {
        for &h in g.outgoing(g.tgt(f)) {
            if !g.is_unit(h) {
                compose.push((id(label(h)), id(label(f)), id(label(g.comp(h, f)))));
            }
        }
    }
    let fields = vec![
        GroupoidField::Objects(g.objects().iter().cloned().map(id).collect()),
        GroupoidField::Arrows(
            arrows
                .iter()
                .map(|&a| (id(label(a)), id(g.object_name(g.src(a)).to_string()), id(g.object_name(g.tgt(a)).to_string())))
                .collect(),
        ),
        GroupoidField::Compose(compose),
    ];
    Decl {
        name: id(name.to_string()),
        body: Body::Groupoid(fields.into_iter().map(|f| At::new(Pos::START, f)).collect()),
    }
}
