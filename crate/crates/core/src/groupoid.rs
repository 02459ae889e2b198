//! Finite groupoids: objects, arrows and the five structure maps
//! (source, target, composition, unit, inverse) as explicit tables.
//!
//! Every finite groupoid is proper and étale in the discrete sense, so
//! neither property is represented separately.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::category::{validate_category, FiniteCategory, StructureError, Violation};
use crate::group::{GroupDesc, GroupError};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("object subset is empty")]
    EmptySubset,
    #[error("object `{0}` listed twice")]
    DuplicateObject(String),
    #[error("groupoid is not connected ({0} orbits)")]
    NotConnected(usize),
    #[error("isotropy at `{object}` is not a group: {source}")]
    Isotropy { object: String, source: GroupError },
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    cat: FiniteCategory,
    inv: Vec<usize>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.cat.objects())
            .field("arrows", &self.cat.num_arrows())
            .finish()
    }
}

impl Deref for FiniteGroupoid {
    type Target = FiniteCategory;
    fn deref(&self) -> &FiniteCategory {
        &self.cat
    }
}

/// Name-based description of a groupoid, the shape produced by parsers
/// and hand-written fixtures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupoidTables {
    pub objects: Vec<String>,
    /// `(name, source, target)`
    pub arrows: Vec<(String, String, String)>,
    /// object -> unit arrow
    pub units: Vec<(String, String)>,
    /// `(h, g, h∘g)`
    pub compose: Vec<(String, String, String)>,
    /// arrow -> inverse
    pub inverses: Vec<(String, String)>,
}

impl FiniteGroupoid {
    pub fn from_parts(cat: FiniteCategory, inv: Vec<usize>) -> Result<Self, StructureError> {
        if inv.len() != cat.num_arrows() {
            return Err(StructureError::LengthMismatch {
                what: "inverse map",
                expected: cat.num_arrows(),
                found: inv.len(),
            });
        }
        if let Some(&index) = inv.iter().find(|&&i| i >= cat.num_arrows()) {
            return Err(StructureError::IndexOutOfRange {
                what: "inverse map",
                index,
            });
        }
        Ok(Self { cat, inv })
    }

    /// Resolves a name-based description; dangling names are structural
    /// errors. Axioms are not checked.
    pub fn from_tables(t: &GroupoidTables) -> Result<Self, StructureError> {
        let obj: HashMap<&str, usize> = t
            .objects
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let arr: HashMap<&str, usize> = t
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.0.as_str(), i))
            .collect();
        let find_obj = |ctx: &str, n: &str| {
            obj.get(n).copied().ok_or_else(|| StructureError::UnknownObject {
                context: ctx.to_string(),
                name: n.to_string(),
            })
        };
        let find_arr = |ctx: &str, n: &str| {
            arr.get(n).copied().ok_or_else(|| StructureError::UnknownArrow {
                context: ctx.to_string(),
                name: n.to_string(),
            })
        };
        let mut src = Vec::with_capacity(t.arrows.len());
        let mut tgt = Vec::with_capacity(t.arrows.len());
        for (name, s, d) in &t.arrows {
            src.push(find_obj(&format!("arrow {name}"), s)?);
            tgt.push(find_obj(&format!("arrow {name}"), d)?);
        }
        let mut unit = vec![usize::MAX; t.objects.len()];
        for (o, u) in &t.units {
            let x = find_obj("units", o)?;
            unit[x] = find_arr("units", u)?;
        }
        if let Some(x) = unit.iter().position(|&u| u == usize::MAX) {
            return Err(StructureError::Other(format!(
                "object `{}` has no unit",
                t.objects[x]
            )));
        }
        let mut compose = HashMap::with_capacity(t.compose.len());
        for (h, g, k) in &t.compose {
            let key = (find_arr("compose", h)?, find_arr("compose", g)?);
            let val = find_arr("compose", k)?;
            if compose.insert(key, val).is_some() {
                return Err(StructureError::Other(format!("composite {h}*{g} given twice")));
            }
        }
        let mut inv = vec![usize::MAX; t.arrows.len()];
        for (a, b) in &t.inverses {
            inv[find_arr("inverses", a)?] = find_arr("inverses", b)?;
        }
        if let Some(a) = inv.iter().position(|&i| i == usize::MAX) {
            return Err(StructureError::Other(format!(
                "arrow `{}` has no inverse",
                t.arrows[a].0
            )));
        }
        let cat = FiniteCategory::from_parts(
            t.objects.clone(),
            t.arrows.iter().map(|a| a.0.clone()).collect(),
            src,
            tgt,
            unit,
            compose,
        )?;
        Self::from_parts(cat, inv)
    }

    /// The name-based description of this groupoid (inverse of
    /// [`FiniteGroupoid::from_tables`]).
    pub fn to_tables(&self) -> GroupoidTables {
        let c = &self.cat;
        let mut compose: Vec<_> = c.composition_table().iter().map(|(&(h, g), &k)| (h, g, k)).collect();
        compose.sort_unstable();
        GroupoidTables {
            objects: c.objects().to_vec(),
            arrows: (0..c.num_arrows())
                .map(|a| {
                    (
                        c.arrow_name(a).to_string(),
                        c.object_name(c.src(a)).to_string(),
                        c.object_name(c.tgt(a)).to_string(),
                    )
                })
                .collect(),
            units: (0..c.num_objects())
                .map(|x| (c.object_name(x).to_string(), c.arrow_name(c.unit(x)).to_string()))
                .collect(),
            compose: compose
                .into_iter()
                .map(|(h, g, k)| {
                    (
                        c.arrow_name(h).to_string(),
                        c.arrow_name(g).to_string(),
                        c.arrow_name(k).to_string(),
                    )
                })
                .collect(),
            inverses: (0..c.num_arrows())
                .map(|a| (c.arrow_name(a).to_string(), c.arrow_name(self.inv[a]).to_string()))
                .collect(),
        }
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.cat
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Orbit index of every object; orbits are numbered by least object.
    pub fn orbit_labels(&self) -> Vec<usize> {
        let n = self.num_objects();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in 0..self.num_arrows() {
            let (s, t) = (find(&mut parent, self.src(a)), find(&mut parent, self.tgt(a)));
            if s != t {
                parent[s.max(t)] = s.min(t);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut root_label = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            label[x] = *root_label.entry(r).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        label
    }

    /// Classes of the relation "connected by an arrow"; each class is
    /// ascending and classes are ordered by their least object.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let labels = self.orbit_labels();
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_orbits() == 1
    }

    /// Loops at `x`, ascending, unit first.
    pub fn loops_at(&self, x: usize) -> Vec<usize> {
        let u = self.unit(x);
        let mut v = vec![u];
        v.extend(self.hom(x, x).filter(|&a| a != u));
        v
    }

    /// The isotropy group at `x`: loops under composition.
    pub fn isotropy(&self, x: usize) -> Result<GroupDesc, GroupoidError> {
        if x >= self.num_objects() {
            return Err(GroupoidError::UnknownObject(x.to_string()));
        }
        let loops = self.loops_at(x);
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let err = |source| GroupoidError::Isotropy {
            object: self.object_name(x).to_string(),
            source,
        };
        let mut table = Vec::with_capacity(loops.len() * loops.len());
        for &h in &loops {
            for &g in &loops {
                let k = self
                    .compose(h, g)
                    .and_then(|k| pos.get(&k).copied())
                    .ok_or_else(|| {
                        err(GroupError::NotClosed(
                            self.arrow_name(h).into(),
                            self.arrow_name(g).into(),
                        ))
                    })?;
                table.push(k);
            }
        }
        let names = loops.iter().map(|&a| self.arrow_name(a).to_string()).collect();
        GroupDesc::from_table(names, 0, table).map_err(err)
    }

    pub fn isotropy_named(&self, x: &str) -> Result<GroupDesc, GroupoidError> {
        let i = self
            .object_index(x)
            .ok_or_else(|| GroupoidError::UnknownObject(x.to_string()))?;
        self.isotropy(i)
    }

    /// Some arrow `x -> y`, if any.
    pub fn arrow_between(&self, x: usize, y: usize) -> Option<usize> {
        self.hom(x, y).next()
    }

    /// Full subgroupoid on `objects`, keeping the ambient order.
    pub fn restrict(&self, objects: &[usize]) -> Result<FiniteGroupoid, GroupoidError> {
        if objects.is_empty() {
            return Err(GroupoidError::EmptySubset);
        }
        let mut keep = vec![false; self.num_objects()];
        for &x in objects {
            if x >= self.num_objects() {
                return Err(GroupoidError::UnknownObject(x.to_string()));
            }
            if std::mem::replace(&mut keep[x], true) {
                return Err(GroupoidError::DuplicateObject(self.object_name(x).to_string()));
            }
        }
        let obj_old: Vec<usize> = (0..self.num_objects()).filter(|&x| keep[x]).collect();
        let mut obj_new = vec![usize::MAX; self.num_objects()];
        for (i, &x) in obj_old.iter().enumerate() {
            obj_new[x] = i;
        }
        let arr_old: Vec<usize> = (0..self.num_arrows())
            .filter(|&a| keep[self.src(a)] && keep[self.tgt(a)])
            .collect();
        let mut arr_new = vec![usize::MAX; self.num_arrows()];
        for (i, &a) in arr_old.iter().enumerate() {
            arr_new[a] = i;
        }
        let mut compose = HashMap::new();
        for (&(h, g), &k) in self.composition_table() {
            if arr_new[h] != usize::MAX && arr_new[g] != usize::MAX && arr_new[k] != usize::MAX {
                compose.insert((arr_new[h], arr_new[g]), arr_new[k]);
            }
        }
        let cat = FiniteCategory::from_parts(
            obj_old.iter().map(|&x| self.object_name(x).to_string()).collect(),
            arr_old.iter().map(|&a| self.arrow_name(a).to_string()).collect(),
            arr_old.iter().map(|&a| obj_new[self.src(a)]).collect(),
            arr_old.iter().map(|&a| obj_new[self.tgt(a)]).collect(),
            obj_old.iter().map(|&x| arr_new[self.unit(x)]).collect(),
            compose,
        )?;
        let inv = arr_old.iter().map(|&a| arr_new[self.inv(a)]).collect();
        Ok(FiniteGroupoid::from_parts(cat, inv)?)
    }

    pub fn restrict_named<S: AsRef<str>>(&self, objects: &[S]) -> Result<FiniteGroupoid, GroupoidError> {
        let idx = objects
            .iter()
            .map(|n| {
                self.object_index(n.as_ref())
                    .ok_or_else(|| GroupoidError::UnknownObject(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.restrict(&idx)
    }
}

/// Exhaustive check of every groupoid axiom. Empty report iff `g` is a
/// groupoid.
pub fn validate_groupoid(g: &FiniteGroupoid) -> ValidationReport<Violation> {
    let mut report = validate_category(g.category());
    let name = |a: usize| g.arrow_name(a).to_string();
    for a in 0..g.num_arrows() {
        let i = g.inv(a);
        if g.src(i) != g.tgt(a) || g.tgt(i) != g.src(a) {
            report.push(Violation::InverseEndpoints {
                arrow: name(a),
                inverse: name(i),
            });
            continue;
        }
        if g.compose(i, a) != Some(g.unit(g.src(a))) {
            report.push(Violation::LeftInverse { arrow: name(a) });
        }
        if g.compose(a, i) != Some(g.unit(g.tgt(a))) {
            report.push(Violation::RightInverse { arrow: name(a) });
        }
    }
    report
}
