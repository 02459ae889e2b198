//! Turns declarations into validated core structures. Each declaration may
//! refer to earlier ones only.

use std::collections::{HashMap, HashSet};
use std::fmt::Display;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use orbikit::category::{FiniteCategory, Violation};
use orbikit::complexes::{grothendieck, poset_category, try_into_groupoid, validate_complex, ComplexOfGroups};
use orbikit::constructors::{action_groupoid, group_as_groupoid, pair_groupoid, unit_groupoid, GroupAction};
use orbikit::group::{GroupDesc, GroupError};
use orbikit::groupoid::{validate_groupoid, FiniteGroupoid};
use orbikit::gspaces::{translation_groupoid, validate_gmodule, validate_gspace, FiberGroup, FiniteGSpace, GModule};
use orbikit::inertia::inertia_groupoid;
use orbikit::linalg::IntMatrix;
use orbikit::morphisms::{skeleton, validate_hom, GroupoidHom};
use orbikit::{Integer, Rational};

use super::ast::*;
use super::diag::{Diagnostic, Pos};

pub const MAX_GROUP_ORDER: usize = 1000;
pub const MAX_TABLE_ORDER: usize = 256;
pub const MAX_SET: usize = 10_000;
pub const MAX_PERM_POINTS: usize = 64;
pub const MAX_GENERATORS: usize = 256;
pub const MAX_ARROWS: usize = 20_000;
pub const MAX_COMPOSABLE: usize = 1_000_000;
pub const MAX_FIBER_DIM: usize = 8;
pub const MAX_ENTRY: i64 = 1 << 31;

#[derive(Debug, Clone)]
pub enum Value {
    Group(GroupDesc),
    Action(GroupAction),
    Groupoid(Arc<FiniteGroupoid>),
    GSpace(FiniteGSpace),
    GModule(GModule),
    Complex(ComplexOfGroups),
    Hom(GroupoidHom),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Group(_) => Kind::Group,
            Value::Action(_) => Kind::Action,
            Value::Groupoid(_) => Kind::Groupoid,
            Value::GSpace(_) => Kind::GSpace,
            Value::GModule(_) => Kind::GModule,
            Value::Complex(_) => Kind::Complex,
            Value::Hom(_) => Kind::Hom,
        }
    }
}

type R<T> = Result<T, Diagnostic>;

fn sem(pos: Pos, token: &str, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::semantic(pos, token, msg.into())
}

fn unres(id: &Ident, what: &str) -> Diagnostic {
    Diagnostic::unresolved(id.pos, &id.node, format!("unknown {what} `{}`", id.node))
}

/// First violation in a stable order, as a diagnostic naming its axiom.
fn first_violation<V: Display>(pos: Pos, token: &str, what: &str, vs: &[V], axiom: impl Fn(&V) -> &'static str) -> Diagnostic {
    let mut v: Vec<(String, &'static str)> = vs.iter().map(|v| (v.to_string(), axiom(v))).collect();
    v.sort();
    let (msg, ax) = v.into_iter().next().expect("nonempty report");
    sem(pos, token, format!("{what} violates `{ax}`: {msg}")).with_axiom(ax)
}

fn distinct<I: IntoIterator<Item = String>>(names: I) -> bool {
    let mut seen = HashSet::new();
    names.into_iter().all(|n| seen.insert(n))
}

fn index_list(items: &[Ident], what: &str) -> R<HashMap<String, usize>> {
    let mut m = HashMap::new();
    for (i, id) in items.iter().enumerate() {
        if m.insert(id.node.clone(), i).is_some() {
            return Err(sem(id.pos, &id.node, format!("duplicate {what} `{}`", id.node)));
        }
    }
    Ok(m)
}

fn find(map: &HashMap<String, usize>, id: &Ident, what: &str) -> R<usize> {
    map.get(&id.node).copied().ok_or_else(|| unres(id, what))
}

fn check_size(pos: Pos, token: &str, arrows: usize, composable: usize) -> R<()> {
    if arrows > MAX_ARROWS || composable > MAX_COMPOSABLE {
        return Err(sem(
            pos,
            token,
            format!("result too large: {arrows} arrows and {composable} composable pairs (caps {MAX_ARROWS}, {MAX_COMPOSABLE})"),
        ));
    }
    Ok(())
}

/// Single-assignment table with conflict detection.
struct Table<K> {
    map: HashMap<K, usize>,
}

impl<K: std::hash::Hash + Eq + Copy> Table<K> {
    fn new() -> Self {
        Self { map: HashMap::new() }
    }

    /// Returns false on a conflicting entry.
    fn set(&mut self, k: K, v: usize) -> bool {
        match self.map.get(&k) {
            Some(&old) => old == v,
            None => {
                self.map.insert(k, v);
                true
            }
        }
    }

    fn get(&self, k: &K) -> Option<usize> {
        self.map.get(k).copied()
    }
}

pub struct Env {
    names: HashMap<String, usize>,
    pub values: Vec<Value>,
}

impl Env {
    pub fn new() -> Self {
        Self {
            names: HashMap::new(),
            values: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.names.get(name).map(|&i| &self.values[i])
    }

    fn lookup(&self, id: &Ident) -> R<&Value> {
        self.get(&id.node).ok_or_else(|| unres(id, "declaration"))
    }

    fn wrong_kind(id: &Ident, v: &Value, want: &str) -> Diagnostic {
        sem(id.pos, &id.node, format!("`{}` is a {}, expected {want}", id.node, v.kind().keyword()))
    }

    fn group(&self, id: &Ident) -> R<&GroupDesc> {
        match self.lookup(id)? {
            Value::Group(g) => Ok(g),
            v => Err(Self::wrong_kind(id, v, "a group")),
        }
    }

    fn action(&self, id: &Ident) -> R<&GroupAction> {
        match self.lookup(id)? {
            Value::Action(a) => Ok(a),
            v => Err(Self::wrong_kind(id, v, "an action")),
        }
    }

    fn gspace(&self, id: &Ident) -> R<&FiniteGSpace> {
        match self.lookup(id)? {
            Value::GSpace(e) => Ok(e),
            v => Err(Self::wrong_kind(id, v, "a gspace")),
        }
    }

    fn complex(&self, id: &Ident) -> R<&ComplexOfGroups> {
        match self.lookup(id)? {
            Value::Complex(c) => Ok(c),
            v => Err(Self::wrong_kind(id, v, "a complex")),
        }
    }

    /// Anything with an underlying groupoid: groups, actions, groupoids,
    /// gspaces (translation groupoid) and complexes whose total category
    /// is a groupoid.
    pub fn groupoid(&self, id: &Ident) -> R<Arc<FiniteGroupoid>> {
        let v = self.lookup(id)?;
        as_groupoid(v).map_err(|msg| sem(id.pos, &id.node, format!("`{}`: {msg}", id.node)))
    }

    pub fn define(&mut self, decl: &Decl) -> R<()> {
        let name = &decl.name;
        if self.names.contains_key(&name.node) {
            return Err(sem(name.pos, &name.node, format!("duplicate declaration `{}`", name.node)));
        }
        let v = match &decl.body {
            Body::Builtin(kind, b) => self.builtin(*kind, b)?,
            Body::Group(f) => Value::Group(self.group_block(name, f)?),
            Body::Action(f) => Value::Action(self.action_block(name, f)?),
            Body::Groupoid(f) => Value::Groupoid(Arc::new(self.groupoid_block(name, f)?)),
            Body::GSpace(f) => Value::GSpace(self.gspace_block(name, f)?),
            Body::GModule(f) => Value::GModule(self.gmodule_block(name, f)?),
            Body::Complex(f) => Value::Complex(self.complex_block(name, f)?),
            Body::Hom(f) => Value::Hom(self.hom_block(name, f)?),
        };
        self.names.insert(name.node.clone(), self.values.len());
        self.values.push(v);
        Ok(())
    }
}

impl Default for Env {
    fn default() -> Self {
        Self::new()
    }
}

/// The groupoid underlying a value, if it has one.
pub fn as_groupoid(v: &Value) -> Result<Arc<FiniteGroupoid>, String> {
    match v {
        Value::Groupoid(g) => Ok(g.clone()),
        Value::Group(k) => Ok(Arc::new(group_as_groupoid(k))),
        Value::Action(a) if !action_names_distinct(a) => Err("arrow names `(k,x)` of the action groupoid collide".into()),
        Value::Action(a) => Ok(Arc::new(action_groupoid(a))),
        Value::GSpace(e) => translation_groupoid(e).map(|(t, _)| t).map_err(|e| e.to_string()),
        Value::Complex(c) => {
            let total = grothendieck(c).map_err(|e| e.to_string())?;
            try_into_groupoid(total)
                .map(Arc::new)
                .ok_or_else(|| "its Grothendieck category is not a groupoid".to_string())
        }
        Value::GModule(_) | Value::Hom(_) => Err(format!("a {} has no underlying groupoid", v.kind().keyword())),
    }
}

/// Fields that may appear at most once.
fn once<'a, T>(slot: &mut Option<&'a T>, pos: Pos, kw: &str, v: &'a T) -> R<()> {
    if slot.is_some() {
        return Err(sem(pos, kw, format!("field `{kw}` given twice")));
    }
    *slot = Some(v);
    Ok(())
}

fn required<'a, T>(slot: Option<&'a T>, decl: &Ident, kw: &str) -> R<&'a T> {
    slot.ok_or_else(|| sem(decl.pos, &decl.node, format!("`{}` needs a `{kw}` field", decl.node)))
}

fn group_axiom(e: &GroupError) -> &'static str {
    match e {
        GroupError::IdentityLaw(_) => "identity",
        GroupError::NoInverse(_) => "inverse",
        GroupError::NotAssociative(..) => "associativity",
        GroupError::NotClosed(..) => "closure",
        _ => "group",
    }
}

impl Env {
    fn group_block(&self, decl: &Ident, fields: &[At<GroupField>]) -> R<GroupDesc> {
        let mut elements = None;
        let mut points = None;
        let mut table = Vec::new();
        let mut gens = Vec::new();
        for f in fields {
            match &f.node {
                GroupField::Elements(e) => once(&mut elements, f.pos, "elements", e)?,
                GroupField::Points(p) => once(&mut points, f.pos, "points", p)?,
                GroupField::Table(t) => table.extend(t.iter()),
                GroupField::Generators(g) => gens.extend(g.iter()),
            }
        }
        if let Some(points) = points {
            if elements.is_some() || !table.is_empty() {
                return Err(sem(decl.pos, &decl.node, "a group is given by a table or by generators, not both"));
            }
            if points.len() > MAX_PERM_POINTS || gens.len() > MAX_GENERATORS {
                return Err(sem(
                    decl.pos,
                    &decl.node,
                    format!("permutation groups are limited to {MAX_PERM_POINTS} points and {MAX_GENERATORS} generators"),
                ));
            }
            let idx = index_list(points, "point")?;
            let mut perms = Vec::new();
            for cycles in gens {
                let mut perm: Vec<usize> = (0..points.len()).collect();
                let mut moved = HashSet::new();
                for c in cycles {
                    let pts = c.iter().map(|p| find(&idx, p, "point")).collect::<R<Vec<_>>>()?;
                    for (i, &p) in pts.iter().enumerate() {
                        if !moved.insert(p) {
                            return Err(sem(c[i].pos, &c[i].node, format!("point `{}` appears twice in one generator", c[i].node)));
                        }
                        perm[p] = pts[(i + 1) % pts.len()];
                    }
                }
                perms.push(perm);
            }
            let names: Vec<String> = points.iter().map(|p| p.node.clone()).collect();
            return GroupDesc::from_permutations(&names, &perms, MAX_GROUP_ORDER)
                .map_err(|e| sem(decl.pos, &decl.node, e.to_string()));
        }
        if !gens.is_empty() {
            return Err(sem(decl.pos, &decl.node, "`generators` needs a `points` field"));
        }
        let elements = required(elements, decl, "elements")?;
        let n = elements.len();
        if n == 0 {
            return Err(sem(decl.pos, &decl.node, "a group needs at least one element"));
        }
        if n > MAX_TABLE_ORDER {
            return Err(sem(decl.pos, &decl.node, format!("explicit tables are limited to {MAX_TABLE_ORDER} elements")));
        }
        let idx = index_list(elements, "element")?;
        let mut t = Table::new();
        for (a, b, c) in &table {
            let (x, y, z) = (find(&idx, a, "element")?, find(&idx, b, "element")?, find(&idx, c, "element")?);
            if !t.set((x, y), z) {
                return Err(sem(a.pos, &a.node, format!("conflicting products for {}*{}", a.node, b.node)));
            }
        }
        // the first element is the identity
        for x in 0..n {
            for key in [(0, x), (x, 0)] {
                if !t.set(key, x) {
                    return Err(sem(decl.pos, &elements[0].node, format!("table contradicts `{}` being the identity", elements[0].node))
                        .with_axiom("identity"));
                }
            }
        }
        let given: Vec<((usize, usize), usize)> = t.map.iter().map(|(&k, &v)| (k, v)).collect();
        for ((a, b), c) in given {
            if c == 0 && !t.set((b, a), 0) {
                return Err(sem(decl.pos, &decl.node, format!("{}*{} is the identity but {}*{} is not", elements[a].node, elements[b].node, elements[b].node, elements[a].node))
                    .with_axiom("inverse"));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                match t.get(&(a, b)) {
                    Some(c) => flat.push(c),
                    None => {
                        return Err(sem(decl.pos, &decl.node, format!("missing product {}*{}", elements[a].node, elements[b].node))
                            .with_axiom("totality"))
                    }
                }
            }
        }
        let names = elements.iter().map(|e| e.node.clone()).collect();
        GroupDesc::from_table(names, 0, flat).map_err(|e| {
            let ax = group_axiom(&e);
            sem(decl.pos, &decl.node, format!("group `{}` violates `{ax}`: {e}", decl.node)).with_axiom(ax)
        })
    }

    fn action_block(&self, decl: &Ident, fields: &[At<ActionField>]) -> R<GroupAction> {
        let mut group = None;
        let mut set = None;
        let mut entries = Vec::new();
        for f in fields {
            match &f.node {
                ActionField::Group(g) => once(&mut group, f.pos, "group", g)?,
                ActionField::Set(s) => once(&mut set, f.pos, "set", s)?,
                ActionField::Act(a) => entries.extend(a.iter()),
            }
        }
        let k = self.group(required(group, decl, "group")?)?.clone();
        let set = required(set, decl, "set")?;
        let m = set.len();
        if m > MAX_SET || k.order().saturating_mul(k.order()).saturating_mul(m) > MAX_COMPOSABLE {
            return Err(sem(decl.pos, &decl.node, "action too large"));
        }
        let idx = index_list(set, "point")?;
        let elems: HashMap<String, usize> = k.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut t = Table::new();
        for (g, x, y) in &entries {
            let (a, p, q) = (find(&elems, g, "group element")?, find(&idx, x, "point")?, find(&idx, y, "point")?);
            if !t.set((a, p), q) {
                return Err(sem(g.pos, &g.node, format!("conflicting entries for {}.{}", g.node, x.node)));
            }
        }
        let e = k.identity();
        for p in 0..m {
            if !t.set((e, p), p) {
                return Err(sem(decl.pos, &decl.node, format!("the identity moves `{}`", set[p].node)).with_axiom("identity"));
            }
        }
        let given: Vec<((usize, usize), usize)> = t.map.iter().map(|(&k, &v)| (k, v)).collect();
        for ((a, p), q) in given {
            if !t.set((k.inv(a), q), p) {
                return Err(sem(decl.pos, &decl.node, format!("{}.{} contradicts the inverse entry", k.name(a), set[p].node))
                    .with_axiom("compatibility"));
            }
        }
        let mut act = Vec::with_capacity(k.order() * m);
        for a in 0..k.order() {
            for p in 0..m {
                match t.get(&(a, p)) {
                    Some(q) => act.push(q),
                    None => {
                        return Err(sem(decl.pos, &decl.node, format!("missing action entry {}.{}", k.name(a), set[p].node))
                            .with_axiom("totality"))
                    }
                }
            }
        }
        let names = set.iter().map(|s| s.node.clone()).collect();
        GroupAction::new(k, names, act).map_err(|e| {
            sem(decl.pos, &decl.node, format!("action `{}` violates `compatibility`: {e}", decl.node)).with_axiom("compatibility")
        })
    }

    fn groupoid_block(&self, decl: &Ident, fields: &[At<GroupoidField>]) -> R<FiniteGroupoid> {
        let mut objects = None;
        let mut arrows = Vec::new();
        let mut compose = Vec::new();
        for f in fields {
            match &f.node {
                GroupoidField::Objects(o) => once(&mut objects, f.pos, "objects", o)?,
                GroupoidField::Arrows(a) => arrows.extend(a.iter()),
                GroupoidField::Compose(c) => compose.extend(c.iter()),
            }
        }
        let objects = required(objects, decl, "objects")?;
        if objects.len() + arrows.len() > MAX_ARROWS {
            return Err(sem(decl.pos, &decl.node, "groupoid too large"));
        }
        let oidx = index_list(objects, "object")?;
        let mut names: Vec<String> = objects.iter().map(|o| format!("id_{}", o.node)).collect();
        let mut src: Vec<usize> = (0..objects.len()).collect();
        let mut tgt = src.clone();
        let mut aidx: HashMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        if aidx.len() != names.len() {
            return Err(sem(decl.pos, &decl.node, "unit names `id_x` collide"));
        }
        for (f, a, b) in &arrows {
            if aidx.contains_key(&f.node) {
                let why = if f.node.starts_with("id_") { "is reserved for a unit" } else { "is declared twice" };
                return Err(sem(f.pos, &f.node, format!("arrow name `{}` {why}", f.node)));
            }
            aidx.insert(f.node.clone(), names.len());
            names.push(f.node.clone());
            src.push(find(&oidx, a, "object")?);
            tgt.push(find(&oidx, b, "object")?);
        }
        let n = names.len();
        let unit: Vec<usize> = (0..objects.len()).collect();
        let mut t = Table::new();
        for (h, g, k) in &compose {
            let (x, y, z) = (find(&aidx, h, "arrow")?, find(&aidx, g, "arrow")?, find(&aidx, k, "arrow")?);
            if src[x] != tgt[y] {
                return Err(sem(h.pos, &h.node, format!("{}*{} is not composable", h.node, g.node)).with_axiom("composition-domain"));
            }
            if !t.set((x, y), z) {
                return Err(sem(h.pos, &h.node, format!("conflicting composites for {}*{}", h.node, g.node)));
            }
        }
        for a in 0..n {
            if !t.set((unit[tgt[a]], a), a) || !t.set((a, unit[src[a]]), a) {
                return Err(sem(decl.pos, &names[a], format!("composite with a unit changes `{}`", names[a])).with_axiom("unit"));
            }
        }
        let given: Vec<((usize, usize), usize)> = t.map.iter().map(|(&k, &v)| (k, v)).collect();
        for ((h, g), k) in given {
            if k == unit[src[g]] && !t.set((g, h), unit[tgt[g]]) {
                return Err(sem(decl.pos, &names[g], format!("{}*{} is a unit but {}*{} is not", names[h], names[g], names[g], names[h]))
                    .with_axiom("inverse"));
            }
        }
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        let mut between: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for a in 0..n {
            ins[tgt[a]].push(a);
            outs[src[a]].push(a);
            between.entry((src[a], tgt[a])).or_default().push(a);
        }
        let pairs = (0..objects.len())
            .map(|x| ins[x].len().saturating_mul(outs[x].len()))
            .fold(0usize, usize::saturating_add);
        check_size(decl.pos, &decl.node, n, pairs)?;
        let mut table = HashMap::with_capacity(pairs);
        for x in 0..objects.len() {
            for &g in &ins[x] {
                for &h in &outs[x] {
                    match t.get(&(h, g)) {
                        Some(k) => {
                            table.insert((h, g), k);
                        }
                        None => {
                            return Err(sem(decl.pos, &decl.node, format!("missing composite {}*{}", names[h], names[g]))
                                .with_axiom("composition-total"))
                        }
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for f in 0..n {
            let back = between.get(&(tgt[f], src[f])).map(Vec::as_slice).unwrap_or(&[]);
            let found = back
                .iter()
                .copied()
                .find(|&g| table.get(&(g, f)) == Some(&unit[src[f]]) && table.get(&(f, g)) == Some(&unit[tgt[f]]));
            match found {
                Some(g) => inv.push(g),
                None => {
                    return Err(sem(decl.pos, &names[f], format!("arrow `{}` has no inverse", names[f])).with_axiom("inverse"))
                }
            }
        }
        let objs = objects.iter().map(|o| o.node.clone()).collect();
        let cat = FiniteCategory::from_parts(objs, names, src, tgt, unit, table).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let g = FiniteGroupoid::from_parts(cat, inv).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let report = validate_groupoid(&g);
        if !report.is_valid() {
            return Err(first_violation(decl.pos, &decl.node, &format!("groupoid `{}`", decl.node), report.violations(), Violation::axiom));
        }
        Ok(g)
    }

    fn gspace_block(&self, decl: &Ident, fields: &[At<GSpaceField>]) -> R<FiniteGSpace> {
        let mut base = None;
        let mut points = Vec::new();
        let mut entries = Vec::new();
        for f in fields {
            match &f.node {
                GSpaceField::Base(b) => once(&mut base, f.pos, "base", b)?,
                GSpaceField::Points(p) => points.extend(p.iter()),
                GSpaceField::Act(a) => entries.extend(a.iter()),
            }
        }
        let g = self.groupoid(required(base, decl, "base")?)?;
        if points.len() > MAX_SET {
            return Err(sem(decl.pos, &decl.node, "too many points"));
        }
        let oidx: HashMap<String, usize> = g.objects().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let aidx: HashMap<String, usize> = g.arrows().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let pnames: Vec<Ident> = points.iter().map(|(p, _)| p.clone()).collect();
        let pidx = index_list(&pnames, "point")?;
        let proj = points.iter().map(|(_, x)| find(&oidx, x, "object")).collect::<R<Vec<_>>>()?;
        let work: usize = proj.iter().map(|&x| g.incoming(x).len()).fold(0, usize::saturating_add);
        check_size(decl.pos, &decl.node, work, 0)?;
        let mut t = Table::new();
        for (p, a, q) in &entries {
            let (e, h, r) = (find(&pidx, p, "point")?, find(&aidx, a, "arrow")?, find(&pidx, q, "point")?);
            if proj[e] != g.tgt(h) {
                return Err(sem(p.pos, &p.node, format!("{}.{} is not defined: `{}` does not lie over the target of `{}`", p.node, a.node, p.node, a.node))
                    .with_axiom("projection"));
            }
            if !t.set((e, h), r) {
                return Err(sem(p.pos, &p.node, format!("conflicting entries for {}.{}", p.node, a.node)));
            }
        }
        for e in 0..points.len() {
            if !t.set((e, g.unit(proj[e])), e) {
                return Err(sem(decl.pos, &pnames[e].node, format!("the unit moves `{}`", pnames[e].node)).with_axiom("unit"));
            }
        }
        let given: Vec<((usize, usize), usize)> = t.map.iter().map(|(&k, &v)| (k, v)).collect();
        for ((e, h), r) in given {
            if proj[r] == g.src(h) && !t.set((r, g.inv(h)), e) {
                return Err(sem(decl.pos, &pnames[e].node, format!("{}.{} contradicts the inverse entry", pnames[e].node, g.arrow_name(h)))
                    .with_axiom("compatibility"));
            }
        }
        let mut action = Vec::new();
        for (e, &x) in proj.iter().enumerate() {
            for &h in g.incoming(x) {
                match t.get(&(e, h)) {
                    Some(r) => action.push((e, h, r)),
                    None => {
                        return Err(sem(decl.pos, &decl.node, format!("missing action entry {}.{}", pnames[e].node, g.arrow_name(h)))
                            .with_axiom("totality"))
                    }
                }
            }
        }
        let names = pnames.iter().map(|p| p.node.clone()).collect();
        let space = FiniteGSpace::new(g, names, proj, &action).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let report = validate_gspace(&space);
        if !report.is_valid() {
            return Err(first_violation(decl.pos, &decl.node, &format!("gspace `{}`", decl.node), report.violations(), |v| v.axiom()));
        }
        Ok(space)
    }

    fn fiber(&self, pos: Pos, f: &FiberExpr) -> R<FiberGroup> {
        let mut rank = 0usize;
        let mut torsion = Vec::new();
        for t in &f.terms {
            match *t {
                FiberTerm::Free(e) => rank = rank.saturating_add(e.unwrap_or(1) as usize),
                FiberTerm::Cyclic(n) => torsion.push(n),
            }
        }
        if rank.saturating_add(torsion.len()) > MAX_FIBER_DIM {
            return Err(sem(pos, "", format!("fibers are limited to {MAX_FIBER_DIM} summands")));
        }
        FiberGroup::new(rank, torsion).map_err(|e| sem(pos, "", e.to_string()))
    }

    fn gmodule_block(&self, decl: &Ident, fields: &[At<GModuleField>]) -> R<GModule> {
        let mut base = None;
        let mut default = None;
        let mut fibers: Vec<(&Ident, Pos, &FiberExpr)> = Vec::new();
        let mut acts = Vec::new();
        for f in fields {
            match &f.node {
                GModuleField::Base(b) => once(&mut base, f.pos, "base", b)?,
                GModuleField::Fiber(None, e) => once(&mut default, f.pos, "fiber", e)?,
                GModuleField::Fiber(Some(x), e) => fibers.push((x, f.pos, e)),
                GModuleField::Act(a, m) => acts.push((a, m)),
            }
        }
        let g = self.groupoid(required(base, decl, "base")?)?;
        let oidx: HashMap<String, usize> = g.objects().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let aidx: HashMap<String, usize> = g.arrows().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut fib: Vec<Option<FiberGroup>> = vec![None; g.num_objects()];
        if let Some(d) = default {
            let fg = self.fiber(decl.pos, d)?;
            fib.iter_mut().for_each(|s| *s = Some(fg.clone()));
        }
        let mut explicit = HashSet::new();
        for (x, pos, e) in fibers {
            let i = find(&oidx, x, "object")?;
            if !explicit.insert(i) {
                return Err(sem(x.pos, &x.node, format!("fiber over `{}` given twice", x.node)));
            }
            fib[i] = Some(self.fiber(pos, e)?);
        }
        let fib = fib
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| sem(decl.pos, &decl.node, format!("no fiber over `{}`", g.object_name(i)))))
            .collect::<R<Vec<_>>>()?;
        let mut mats: Vec<Option<IntMatrix<i64>>> = vec![None; g.num_arrows()];
        for (a, m) in acts {
            let h = find(&aidx, a, "arrow")?;
            let (rows, cols) = (fib[g.src(h)].dim(), fib[g.tgt(h)].dim());
            let shape_ok = m.len() == rows && m.iter().all(|r| r.len() == cols);
            if !shape_ok {
                return Err(sem(a.pos, &a.node, format!("act {} must be a {rows}x{cols} matrix", a.node)));
            }
            if m.iter().flatten().any(|v| v.abs() > MAX_ENTRY) {
                return Err(sem(a.pos, &a.node, format!("matrix entries are limited to ±{MAX_ENTRY}")));
            }
            if mats[h].is_some() {
                return Err(sem(a.pos, &a.node, format!("act {} given twice", a.node)));
            }
            let mut mat = IntMatrix::zeros(rows, cols);
            for (i, r) in m.iter().enumerate() {
                for (j, &v) in r.iter().enumerate() {
                    mat.set(i, j, v);
                }
            }
            mats[h] = Some(mat);
        }
        for x in 0..g.num_objects() {
            let u = g.unit(x);
            if mats[u].is_none() {
                mats[u] = Some(IntMatrix::identity(fib[x].dim()));
            }
        }
        for h in 0..g.num_arrows() {
            let back = g.inv(h);
            if mats[back].is_none() {
                if let Some(m) = mats[h].as_ref().and_then(unimodular_inverse) {
                    mats[back] = Some(m);
                }
            }
        }
        let mats = mats
            .into_iter()
            .enumerate()
            .map(|(h, m)| {
                m.ok_or_else(|| {
                    sem(decl.pos, &decl.node, format!("missing act {}", g.arrow_name(h))).with_axiom("totality")
                })
            })
            .collect::<R<Vec<_>>>()?;
        let module = GModule::new(g, fib, mats).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let report = validate_gmodule(&module);
        if !report.is_valid() {
            return Err(first_violation(decl.pos, &decl.node, &format!("gmodule `{}`", decl.node), report.violations(), |v| v.axiom()));
        }
        Ok(module)
    }

    fn complex_block(&self, decl: &Ident, fields: &[At<ComplexField>]) -> R<ComplexOfGroups> {
        let mut index = None;
        let mut groups = Vec::new();
        let mut homs = Vec::new();
        let mut twists = Vec::new();
        for f in fields {
            match &f.node {
                ComplexField::Index(i) => once(&mut index, f.pos, "index", i)?,
                ComplexField::Group(x, k) => groups.push((x, k)),
                ComplexField::Hom(r, m) => homs.push((r, m)),
                ComplexField::Twist(t, s, g) => twists.push((t, s, g)),
            }
        }
        let (cat, poset) = match required(index, decl, "index")? {
            IndexSpec::Poset(chains) => {
                let mut names: Vec<&Ident> = Vec::new();
                let mut pos: HashMap<&str, usize> = HashMap::new();
                let mut less = Vec::new();
                for chain in chains {
                    let mut prev = None;
                    for x in chain {
                        let i = *pos.entry(x.node.as_str()).or_insert_with(|| {
                            names.push(x);
                            names.len() - 1
                        });
                        if let Some(p) = prev {
                            less.push((p, i));
                        }
                        prev = Some(i);
                    }
                }
                if names.len() > 64 {
                    return Err(sem(decl.pos, &decl.node, "index posets are limited to 64 elements"));
                }
                let refs: Vec<&str> = names.iter().map(|n| n.node.as_str()).collect();
                let c = poset_category(&refs, &less).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
                (c, true)
            }
            IndexSpec::Groupoid(id) => (self.groupoid(id)?.category().clone(), false),
        };
        let cat = Arc::new(cat);
        let oidx: HashMap<String, usize> = cat.objects().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut fgroups: Vec<Option<GroupDesc>> = vec![None; cat.num_objects()];
        for (x, k) in groups {
            let i = find(&oidx, x, "index object")?;
            if fgroups[i].is_some() {
                return Err(sem(x.pos, &x.node, format!("group over `{}` given twice", x.node)));
            }
            fgroups[i] = Some(self.group(k)?.clone());
        }
        let fgroups = fgroups
            .into_iter()
            .enumerate()
            .map(|(i, k)| k.ok_or_else(|| sem(decl.pos, &decl.node, format!("no group over `{}`", cat.object_name(i)))))
            .collect::<R<Vec<_>>>()?;
        let arrow = |r: &ArrowRef| -> R<usize> {
            match r {
                ArrowRef::Named(a) => cat.arrow_index(&a.node).ok_or_else(|| unres(a, "index arrow")),
                ArrowRef::Less(a, b) => {
                    if !poset {
                        return Err(sem(a.pos, &a.node, "`a < b` arrows need a poset index"));
                    }
                    let (x, y) = (find(&oidx, a, "index object")?, find(&oidx, b, "index object")?);
                    let below = if x == y { None } else { cat.hom(x, y).next() };
                    below.ok_or_else(|| sem(a.pos, &a.node, format!("`{}` is not below `{}`", a.node, b.node)))
                }
            }
        };
        let work: usize = (0..cat.num_arrows())
            .map(|s| fgroups[cat.tgt(s)].order())
            .fold(0, usize::saturating_add);
        // composable pairs of the Grothendieck category, counted through the middle object
        let pairs: usize = (0..cat.num_objects())
            .map(|y| {
                let into = cat.incoming(y).len().saturating_mul(fgroups[y].order());
                let out: usize = cat.outgoing(y).iter().map(|&t| fgroups[cat.tgt(t)].order()).sum();
                into.saturating_mul(out)
            })
            .fold(0, usize::saturating_add);
        check_size(decl.pos, &decl.node, work, pairs)?;
        let mut maps: Vec<Option<Table<usize>>> = (0..cat.num_arrows()).map(|_| None).collect();
        for (r, entries) in homs {
            let s = arrow(r)?;
            if maps[s].is_some() {
                return Err(sem(r.pos(), "hom", format!("hom on `{}` given twice", cat.arrow_name(s))));
            }
            let (gi, gj) = (&fgroups[cat.src(s)], &fgroups[cat.tgt(s)]);
            let ei: HashMap<String, usize> = gi.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
            let ej: HashMap<String, usize> = gj.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
            let mut t = Table::new();
            for (a, b) in entries.iter() {
                let (x, y) = (find(&ei, a, "group element")?, find(&ej, b, "group element")?);
                if !t.set(x, y) {
                    return Err(sem(a.pos, &a.node, format!("conflicting images of `{}`", a.node)));
                }
            }
            maps[s] = Some(t);
        }
        let mut hom_tables = Vec::with_capacity(cat.num_arrows());
        for (s, slot) in maps.into_iter().enumerate() {
            let (gi, gj) = (&fgroups[cat.src(s)], &fgroups[cat.tgt(s)]);
            let mut t = slot.unwrap_or_else(|| {
                let mut t = Table::new();
                if cat.is_unit(s) {
                    for x in 0..gi.order() {
                        t.set(x, x);
                    }
                }
                t
            });
            if !t.set(gi.identity(), gj.identity()) {
                return Err(sem(decl.pos, cat.arrow_name(s), format!("hom on `{}` moves the identity", cat.arrow_name(s))).with_axiom("homomorphism"));
            }
            let given: Vec<(usize, usize)> = t.map.iter().map(|(&k, &v)| (k, v)).collect();
            for (x, y) in given {
                if !t.set(gi.inv(x), gj.inv(y)) {
                    return Err(sem(decl.pos, cat.arrow_name(s), format!("hom on `{}` does not respect inverses", cat.arrow_name(s))).with_axiom("homomorphism"));
                }
            }
            let mut h = Vec::with_capacity(gi.order());
            for x in 0..gi.order() {
                match t.get(&x) {
                    Some(y) => h.push(y),
                    None => {
                        return Err(sem(decl.pos, &decl.node, format!("hom on `{}` does not say where `{}` goes", cat.arrow_name(s), gi.name(x)))
                            .with_axiom("totality"))
                    }
                }
            }
            hom_tables.push(h);
        }
        let mut tw = HashMap::new();
        for (t, s, g) in twists {
            let (ti, si) = (arrow(t)?, arrow(s)?);
            if cat.src(ti) != cat.tgt(si) {
                return Err(sem(t.pos(), "twist", "twist on a non-composable pair"));
            }
            let k = &fgroups[cat.tgt(ti)];
            let e = k.index_of(&g.node).ok_or_else(|| unres(g, "group element"))?;
            if tw.insert((ti, si), e).is_some() {
                return Err(sem(t.pos(), "twist", "twist given twice"));
            }
        }
        let cx = ComplexOfGroups::new(cat, fgroups, hom_tables, tw).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let report = validate_complex(&cx);
        if !report.is_valid() {
            return Err(first_violation(decl.pos, &decl.node, &format!("complex `{}`", decl.node), report.violations(), |v| v.axiom()));
        }
        Ok(cx)
    }

    fn hom_block(&self, decl: &Ident, fields: &[At<HomField>]) -> R<GroupoidHom> {
        let mut from = None;
        let mut to = None;
        let mut objs = Vec::new();
        let mut arrs = Vec::new();
        for f in fields {
            match &f.node {
                HomField::From(x) => once(&mut from, f.pos, "from", x)?,
                HomField::To(x) => once(&mut to, f.pos, "to", x)?,
                HomField::Objects(p) => objs.extend(p.iter()),
                HomField::Arrows(p) => arrs.extend(p.iter()),
            }
        }
        let src = self.groupoid(required(from, decl, "from")?)?;
        let dst = self.groupoid(required(to, decl, "to")?)?;
        let so: HashMap<String, usize> = src.objects().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let sa: HashMap<String, usize> = src.arrows().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let to_: HashMap<String, usize> = dst.objects().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let ta: HashMap<String, usize> = dst.arrows().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut om = Table::new();
        for (a, b) in objs {
            if !om.set(find(&so, a, "object")?, find(&to_, b, "object")?) {
                return Err(sem(a.pos, &a.node, format!("conflicting images of `{}`", a.node)));
            }
        }
        let mut obj_map = Vec::with_capacity(src.num_objects());
        for x in 0..src.num_objects() {
            obj_map.push(om.get(&x).ok_or_else(|| {
                sem(decl.pos, &decl.node, format!("object `{}` has no image", src.object_name(x))).with_axiom("totality")
            })?);
        }
        let mut am = Table::new();
        for (a, b) in arrs {
            if !am.set(find(&sa, a, "arrow")?, find(&ta, b, "arrow")?) {
                return Err(sem(a.pos, &a.node, format!("conflicting images of `{}`", a.node)));
            }
        }
        for x in 0..src.num_objects() {
            if !am.set(src.unit(x), dst.unit(obj_map[x])) {
                return Err(sem(decl.pos, &decl.node, format!("unit at `{}` is not sent to a unit", src.object_name(x))).with_axiom("preserves-units"));
            }
        }
        let given: Vec<(usize, usize)> = am.map.iter().map(|(&k, &v)| (k, v)).collect();
        for (a, b) in given {
            if !am.set(src.inv(a), dst.inv(b)) {
                return Err(sem(decl.pos, &decl.node, format!("images of `{}` and its inverse disagree", src.arrow_name(a))).with_axiom("preserves-composition"));
            }
        }
        let mut arr_map = Vec::with_capacity(src.num_arrows());
        for a in 0..src.num_arrows() {
            arr_map.push(am.get(&a).ok_or_else(|| {
                sem(decl.pos, &decl.node, format!("arrow `{}` has no image", src.arrow_name(a))).with_axiom("totality")
            })?);
        }
        let phi = GroupoidHom::new(src, dst, obj_map, arr_map).map_err(|e| sem(decl.pos, &decl.node, e.to_string()))?;
        let report = validate_hom(&phi);
        if !report.is_valid() {
            return Err(first_violation(decl.pos, &decl.node, &format!("hom `{}`", decl.node), report.violations(), |v| v.axiom()));
        }
        Ok(phi)
    }
}

/// Integer inverse of a square matrix with determinant ±1.
fn unimodular_inverse(m: &IntMatrix<i64>) -> Option<IntMatrix<i64>> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| Rational::from_integer(Integer::from(*m.get(i, j)))).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v /= piv.clone();
        }
        let row_c = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, w) in row.iter_mut().zip(&row_c) {
                    *v -= f.clone() * w;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(n, n);
    for (i, row) in a.iter().enumerate() {
        for j in 0..n {
            let v = &row[n + j];
            if !v.is_integer() {
                return None;
            }
            let x = v.numer().to_i64().filter(|x| x.abs() <= MAX_ENTRY)?;
            out.set(i, j, x);
        }
    }
    Some(out)
}

fn action_names_distinct(a: &GroupAction) -> bool {
    let k = a.group();
    distinct((0..k.order()).flat_map(|g| a.carrier().iter().map(move |x| format!("({},{x})", k.name(g)))))
}

struct Args<'a> {
    b: &'a Builtin,
}

impl<'a> Args<'a> {
    fn arity(&self, n: usize) -> R<()> {
        if self.b.args.len() != n {
            let f = &self.b.func;
            return Err(sem(f.pos, &f.node, format!("`{}` takes {n} argument(s), got {}", f.node, self.b.args.len())));
        }
        Ok(())
    }

    fn at_least(&self, n: usize) -> R<()> {
        if self.b.args.len() < n {
            let f = &self.b.func;
            return Err(sem(f.pos, &f.node, format!("`{}` takes at least {n} argument(s)", f.node)));
        }
        Ok(())
    }

    fn name(&self, i: usize) -> R<&'a Ident> {
        match &self.b.args[i] {
            Arg::Name(id) => Ok(id),
            Arg::Fiber(f) => Err(sem(f.pos, "", "expected a name")),
        }
    }

    fn int(&self, i: usize, lo: usize, hi: usize) -> R<usize> {
        let id = self.name(i)?;
        match id.node.parse::<usize>() {
            Ok(v) if (lo..=hi).contains(&v) => Ok(v),
            _ => Err(sem(id.pos, &id.node, format!("expected an integer in {lo}..={hi}"))),
        }
    }

    fn fiber(&self, i: usize) -> R<(Pos, FiberExpr)> {
        match &self.b.args[i] {
            Arg::Fiber(f) => Ok((f.pos, f.node.clone())),
            Arg::Name(id) => {
                let terms = match id.node.as_str() {
                    "0" => vec![],
                    "Z" => vec![FiberTerm::Free(None)],
                    _ => return Err(sem(id.pos, &id.node, "expected a fiber such as `Z`, `Z/2` or `0`")),
                };
                Ok((id.pos, FiberExpr { terms }))
            }
        }
    }
}

impl Env {
    fn builtin(&self, kind: Kind, b: &Builtin) -> R<Value> {
        let a = Args { b };
        let f = &b.func;
        let unknown = || sem(f.pos, &f.node, format!("unknown {} constructor `{}`", kind.keyword(), f.node));
        let here = |msg: String| sem(f.pos, &f.node, msg);
        Ok(match kind {
            Kind::Group => Value::Group(match f.node.as_str() {
                "trivial" => {
                    a.arity(0)?;
                    GroupDesc::trivial()
                }
                "cyclic" => {
                    a.arity(1)?;
                    GroupDesc::cyclic(a.int(0, 1, MAX_GROUP_ORDER)?)
                }
                "symmetric" => {
                    a.arity(1)?;
                    GroupDesc::symmetric(a.int(0, 1, 6)?)
                }
                "dihedral" => {
                    a.arity(1)?;
                    GroupDesc::dihedral(a.int(0, 3, 100)?)
                }
                "quaternion" => {
                    a.arity(0)?;
                    GroupDesc::quaternion()
                }
                "product" => {
                    a.arity(2)?;
                    let (x, y) = (self.group(a.name(0)?)?, self.group(a.name(1)?)?);
                    if x.order() * y.order() > MAX_GROUP_ORDER {
                        return Err(here(format!("product exceeds order {MAX_GROUP_ORDER}")));
                    }
                    let names = x.names().iter().flat_map(|p| y.names().iter().map(move |q| format!("({p},{q})")));
                    if !distinct(names) {
                        return Err(here("element names of the product collide".into()));
                    }
                    GroupDesc::direct_product(x, y)
                }
                _ => return Err(unknown()),
            }),
            Kind::Action => {
                let act = match f.node.as_str() {
                    "regular" => {
                        a.arity(1)?;
                        GroupAction::regular(self.group(a.name(0)?)?.clone())
                    }
                    "conjugation" => {
                        a.arity(1)?;
                        let k = self.group(a.name(0)?)?.clone();
                        let n = k.order();
                        let table = (0..n * n).map(|i| k.mul(k.mul(i / n, i % n), k.inv(i / n))).collect();
                        GroupAction::new(k.clone(), k.names().to_vec(), table).map_err(|e| here(e.to_string()))?
                    }
                    "trivial" => {
                        a.at_least(2)?;
                        let k = self.group(a.name(0)?)?.clone();
                        let pts: Vec<Ident> = (1..b.args.len()).map(|i| a.name(i).cloned()).collect::<R<_>>()?;
                        index_list(&pts, "point")?;
                        if pts.len() > MAX_SET {
                            return Err(here("too many points".into()));
                        }
                        GroupAction::trivial(k, pts.into_iter().map(|p| p.node).collect())
                    }
                    _ => return Err(unknown()),
                };
                let k = act.group().order();
                if k.saturating_mul(k).saturating_mul(act.carrier().len()) > MAX_COMPOSABLE {
                    return Err(here("action too large".into()));
                }
                Value::Action(act)
            }
            Kind::Groupoid => Value::Groupoid(Arc::new(match f.node.as_str() {
                "unit" => {
                    a.arity(1)?;
                    unit_groupoid(a.int(0, 1, MAX_SET)?)
                }
                "pair" => {
                    a.arity(1)?;
                    pair_groupoid(a.int(0, 1, 60)?)
                }
                "group" => {
                    a.arity(1)?;
                    group_as_groupoid(self.group(a.name(0)?)?)
                }
                "action" => {
                    a.arity(1)?;
                    let act = self.action(a.name(0)?)?;
                    if !action_names_distinct(act) {
                        return Err(here("arrow names `(k,x)` of the action groupoid collide".into()));
                    }
                    action_groupoid(act)
                }
                "restrict" => {
                    a.at_least(2)?;
                    let g = self.groupoid(a.name(0)?)?;
                    let mut objs = Vec::new();
                    for i in 1..b.args.len() {
                        let id = a.name(i)?;
                        objs.push(g.object_index(&id.node).ok_or_else(|| unres(id, "object"))?);
                    }
                    g.restrict(&objs).map_err(|e| here(e.to_string()))?
                }
                "inertia" => {
                    a.arity(1)?;
                    let g = self.groupoid(a.name(0)?)?;
                    check_inertia_size(&g).map_err(here)?;
                    let (lam, _) = inertia_groupoid(&g).map_err(|e| here(e.to_string()))?;
                    Arc::unwrap_or_clone(lam)
                }
                "translation" => {
                    a.arity(1)?;
                    let (t, _) = translation_groupoid(self.gspace(a.name(0)?)?).map_err(|e| here(e.to_string()))?;
                    Arc::unwrap_or_clone(t)
                }
                "skeleton" => {
                    a.arity(1)?;
                    let (sk, _) = skeleton(&self.groupoid(a.name(0)?)?);
                    Arc::unwrap_or_clone(sk)
                }
                "groth" => {
                    a.arity(1)?;
                    let c = self.complex(a.name(0)?)?;
                    let total = grothendieck(c).map_err(|e| here(e.to_string()))?;
                    try_into_groupoid(total).ok_or_else(|| here("the Grothendieck category is not a groupoid".into()))?
                }
                _ => return Err(unknown()),
            })),
            Kind::GSpace => Value::GSpace(match f.node.as_str() {
                "representable" => {
                    a.arity(2)?;
                    let g = self.groupoid(a.name(0)?)?;
                    let id = a.name(1)?;
                    let x = g.object_index(&id.node).ok_or_else(|| unres(id, "object"))?;
                    FiniteGSpace::representable(g, x)
                }
                "terminal" => {
                    a.arity(1)?;
                    FiniteGSpace::one_point_per_object(self.groupoid(a.name(0)?)?)
                }
                _ => return Err(unknown()),
            }),
            Kind::GModule => Value::GModule(match f.node.as_str() {
                "constant" => {
                    a.arity(2)?;
                    let g = self.groupoid(a.name(0)?)?;
                    let (pos, e) = a.fiber(1)?;
                    GModule::constant(g, self.fiber(pos, &e)?)
                }
                _ => return Err(unknown()),
            }),
            Kind::Complex => Value::Complex(match f.node.as_str() {
                "mirror" => {
                    a.arity(0)?;
                    orbikit::complexes::mirror_interval_complex()
                }
                _ => return Err(unknown()),
            }),
            Kind::Hom => Value::Hom(match f.node.as_str() {
                "skeleton" => {
                    a.arity(1)?;
                    skeleton(&self.groupoid(a.name(0)?)?).1
                }
                "inertia" => {
                    a.arity(1)?;
                    let g = self.groupoid(a.name(0)?)?;
                    check_inertia_size(&g).map_err(here)?;
                    inertia_groupoid(&g).map_err(|e| here(e.to_string()))?.1
                }
                "translation" => {
                    a.arity(1)?;
                    translation_groupoid(self.gspace(a.name(0)?)?).map_err(|e| here(e.to_string()))?.1
                }
                _ => return Err(unknown()),
            }),
        })
    }
}

/// `Λ(G)` has one arrow per loop `ℓ` at `x` and arrow into `x`.
fn check_inertia_size(g: &FiniteGroupoid) -> Result<(), String> {
    let mut arrows = 0usize;
    let mut pairs = 0usize;
    for x in 0..g.num_objects() {
        let loops = g.hom(x, x).count();
        let into = g.incoming(x).len();
        arrows = arrows.saturating_add(loops.saturating_mul(into));
        // each arrow (ℓ, h) composes with every arrow into src(h)
        for &h in g.incoming(x) {
            pairs = pairs.saturating_add(loops.saturating_mul(g.incoming(g.src(h)).len()));
        }
    }
    if arrows > MAX_ARROWS || pairs > MAX_COMPOSABLE {
        return Err(format!("inertia groupoid too large: {arrows} arrows, {pairs} composable pairs"));
    }
    Ok(())
}
