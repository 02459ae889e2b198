//! Syntax tree of a GSPEC document. Positions are carried for diagnostics
//! only; they do not take part in equality.

use super::diag::Pos;

#[derive(Debug, Clone)]
pub struct At<T> {
    pub pos: Pos,
    pub node: T,
}

impl<T: PartialEq> PartialEq for At<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T: Eq> Eq for At<T> {}

impl<T> At<T> {
    pub fn new(pos: Pos, node: T) -> Self {
        Self { pos, node }
    }
}

pub type Ident = At<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: Ident,
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Group,
    Action,
    Groupoid,
    GSpace,
    GModule,
    Complex,
    Hom,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Group,
        Kind::Action,
        Kind::Groupoid,
        Kind::GSpace,
        Kind::GModule,
        Kind::Complex,
        Kind::Hom,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Action => "action",
            Kind::Groupoid => "groupoid",
            Kind::GSpace => "gspace",
            Kind::GModule => "gmodule",
            Kind::Complex => "complex",
            Kind::Hom => "hom",
        }
    }

    pub fn from_keyword(w: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.keyword() == w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Builtin(Kind, Builtin),
    Group(Vec<At<GroupField>>),
    Action(Vec<At<ActionField>>),
    Groupoid(Vec<At<GroupoidField>>),
    GSpace(Vec<At<GSpaceField>>),
    GModule(Vec<At<GModuleField>>),
    Complex(Vec<At<ComplexField>>),
    Hom(Vec<At<HomField>>),
}

impl Body {
    pub fn kind(&self) -> Kind {
        match self {
            Body::Builtin(k, _) => *k,
            Body::Group(_) => Kind::Group,
            Body::Action(_) => Kind::Action,
            Body::Groupoid(_) => Kind::Groupoid,
            Body::GSpace(_) => Kind::GSpace,
            Body::GModule(_) => Kind::GModule,
            Body::Complex(_) => Kind::Complex,
            Body::Hom(_) => Kind::Hom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Builtin {
    pub func: Ident,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Name(Ident),
    Fiber(At<FiberExpr>),
}

impl Arg {
    pub fn pos(&self) -> Pos {
        match self {
            Arg::Name(i) => i.pos,
            Arg::Fiber(f) => f.pos,
        }
    }
}

/// `a * b = c`, `k . x = y`, `h * g = k`
pub type Triple = (Ident, Ident, Ident);
/// `x -> y`
pub type Pair = (Ident, Ident);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupField {
    Elements(Vec<Ident>),
    Table(Vec<Triple>),
    Points(Vec<Ident>),
    /// each generator is a product of cycles; `()` is the identity
    Generators(Vec<Vec<Vec<Ident>>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionField {
    Group(Ident),
    Set(Vec<Ident>),
    Act(Vec<Triple>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupoidField {
    Objects(Vec<Ident>),
    /// `f: a -> b`
    Arrows(Vec<Triple>),
    Compose(Vec<Triple>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GSpaceField {
    Base(Ident),
    /// `p -> x`, point over object
    Points(Vec<Pair>),
    /// `p . g = q`
    Act(Vec<Triple>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberTerm {
    /// `Z` (exponent `None`) or `Z^n`
    Free(Option<u32>),
    /// `Z/n`
    Cyclic(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberExpr {
    /// empty for `0`
    pub terms: Vec<FiberTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GModuleField {
    Base(Ident),
    /// `fiber: F` for every object, `fiber x: F` for one
    Fiber(Option<Ident>, FiberExpr),
    Act(Ident, Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSpec {
    /// chains `a < b < c`, separated by commas
    Poset(Vec<Vec<Ident>>),
    Groupoid(Ident),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowRef {
    Named(Ident),
    Less(Ident, Ident),
}

impl ArrowRef {
    pub fn pos(&self) -> Pos {
        match self {
            ArrowRef::Named(i) | ArrowRef::Less(i, _) => i.pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexField {
    Index(IndexSpec),
    Group(Ident, Ident),
    Hom(ArrowRef, Vec<Pair>),
    Twist(ArrowRef, ArrowRef, Ident),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomField {
    From(Ident),
    To(Ident),
    Objects(Vec<Pair>),
    Arrows(Vec<Pair>),
}
