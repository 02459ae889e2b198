//! Finite categories: the part of a groupoid that does not involve inverses.
//! Nerves and Grothendieck constructions live here.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::report::ValidationReport;

/// Malformed input: dangling identifiers, duplicate names, tables of the
/// wrong length. Reported separately from axiom violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown object `{name}` in {context}")]
    UnknownObject { context: String, name: String },
    #[error("unknown arrow `{name}` in {context}")]
    UnknownArrow { context: String, name: String },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} refers to index {index}, out of range")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("{0}")]
    Other(String),
}

/// A violated category or groupoid axiom together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    CompositeMissing { h: String, g: String },
    CompositeNotComposable { h: String, g: String },
    CompositeEndpoints { h: String, g: String, composite: String },
    UnitEndpoints { object: String, unit: String },
    LeftUnit { arrow: String },
    RightUnit { arrow: String },
    Associativity { h: String, g: String, f: String },
    InverseEndpoints { arrow: String, inverse: String },
    LeftInverse { arrow: String },
    RightInverse { arrow: String },
}

impl Violation {
    /// Short name of the violated axiom.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::CompositeMissing { .. } => "composition-total",
            Violation::CompositeNotComposable { .. } => "composition-domain",
            Violation::CompositeEndpoints { .. } => "composition-endpoints",
            Violation::UnitEndpoints { .. } => "unit-endpoints",
            Violation::LeftUnit { .. } => "left-unit",
            Violation::RightUnit { .. } => "right-unit",
            Violation::Associativity { .. } => "associativity",
            Violation::InverseEndpoints { .. } => "inverse-endpoints",
            Violation::LeftInverse { .. } => "left-inverse",
            Violation::RightInverse { .. } => "right-inverse",
        }
    }

    /// The witness tuple as a list of identifiers.
    pub fn witness(&self) -> Vec<&str> {
        match self {
            Violation::CompositeMissing { h, g } | Violation::CompositeNotComposable { h, g } => {
                vec![h, g]
            }
            Violation::CompositeEndpoints { h, g, composite } => vec![h, g, composite],
            Violation::UnitEndpoints { object, unit } => vec![object, unit],
            Violation::LeftUnit { arrow }
            | Violation::RightUnit { arrow }
            | Violation::LeftInverse { arrow }
            | Violation::RightInverse { arrow } => vec![arrow],
            Violation::Associativity { h, g, f } => vec![h, g, f],
            Violation::InverseEndpoints { arrow, inverse } => vec![arrow, inverse],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CompositeMissing { h, g } => {
                write!(f, "composition-total: composable pair {h}*{g} has no composite")
            }
            Violation::CompositeNotComposable { h, g } => {
                write!(f, "composition-domain: {h}*{g} is defined but s({h}) != t({g})")
            }
            Violation::CompositeEndpoints { h, g, composite } => write!(
                f,
                "composition-endpoints: {h}*{g} = {composite} has the wrong source or target"
            ),
            Violation::UnitEndpoints { object, unit } => {
                write!(f, "unit-endpoints: unit {unit} of {object} is not a loop at {object}")
            }
            Violation::LeftUnit { arrow } => write!(f, "left-unit: 1*{arrow} != {arrow}"),
            Violation::RightUnit { arrow } => write!(f, "right-unit: {arrow}*1 != {arrow}"),
            Violation::Associativity { h, g, f: k } => {
                write!(f, "associativity: ({h}*{g})*{k} != {h}*({g}*{k})")
            }
            Violation::InverseEndpoints { arrow, inverse } => {
                write!(f, "inverse-endpoints: {inverse} does not reverse {arrow}")
            }
            Violation::LeftInverse { arrow } => {
                write!(f, "left-inverse: inv({arrow})*{arrow} is not the source unit")
            }
            Violation::RightInverse { arrow } => {
                write!(f, "right-inverse: {arrow}*inv({arrow}) is not the target unit")
            }
        }
    }
}

/// A finite category with explicit tables. `compose` is keyed by pairs
/// `(h, g)` meaning `h ∘ g` (first `g`, then `h`), defined when
/// `src(h) == tgt(g)`.
#[derive(Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    /// dense copy of the composable part of `compose`: `h ∘ g` sits at
    /// `row[g] + slot[h]`, `usize::MAX` when absent
    dense: Vec<usize>,
    row: Vec<usize>,
    slot: Vec<usize>,
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.src == other.src
            && self.tgt == other.tgt
            && self.unit == other.unit
            && self.compose == other.compose
    }
}

impl Eq for FiniteCategory {}

impl fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("objects", &self.objects)
            .field("arrows", &self.arrows.len())
            .finish()
    }
}

fn index_names(names: &[String], dup: fn(String) -> StructureError) -> Result<HashMap<String, usize>, StructureError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(dup(n.clone()));
        }
    }
    Ok(map)
}

impl FiniteCategory {
    /// Assembles a category from index tables. Only structural
    /// well-formedness is checked here; axioms are checked by
    /// [`validate_category`].
    pub fn from_parts(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, StructureError> {
        let object_index = index_names(&objects, StructureError::DuplicateObject)?;
        let arrow_index = index_names(&arrows, StructureError::DuplicateArrow)?;
        let (no, na) = (objects.len(), arrows.len());
        for (what, table, len, bound) in [
            ("source map", &src, na, no),
            ("target map", &tgt, na, no),
            ("unit map", &unit, no, na),
        ] {
            if table.len() != len {
                return Err(StructureError::LengthMismatch {
                    what,
                    expected: len,
                    found: table.len(),
                });
            }
            if let Some(&index) = table.iter().find(|&&i| i >= bound) {
                return Err(StructureError::IndexOutOfRange { what, index });
            }
        }
        for (&(h, g), &c) in &compose {
            if let Some(index) = [h, g, c].into_iter().find(|&i| i >= na) {
                return Err(StructureError::IndexOutOfRange {
                    what: "composition table",
                    index,
                });
            }
        }
        let mut outgoing = vec![Vec::new(); no];
        let mut incoming = vec![Vec::new(); no];
        let mut slot = vec![0; na];
        for a in 0..na {
            slot[a] = outgoing[src[a]].len();
            outgoing[src[a]].push(a);
            incoming[tgt[a]].push(a);
        }
        let mut row = Vec::with_capacity(na);
        let mut width = 0;
        for &t in &tgt {
            row.push(width);
            width += outgoing[t].len();
        }
        let mut dense = vec![usize::MAX; width];
        for (&(h, g), &c) in &compose {
            if src[h] == tgt[g] {
                dense[row[g] + slot[h]] = c;
            }
        }
        Ok(Self {
            objects,
            arrows,
            src,
            tgt,
            unit,
            compose,
            object_index,
            arrow_index,
            outgoing,
            incoming,
            dense,
            row,
            slot,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    #[inline]
    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    #[inline]
    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    #[inline]
    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.src[a] == self.tgt[a] && self.unit[self.src[a]] == a
    }

    /// `h ∘ g`, if present in the table.
    #[inline]
    pub fn compose(&self, h: usize, g: usize) -> Option<usize> {
        if self.src[h] == self.tgt[g] {
            let c = self.dense[self.row[g] + self.slot[h]];
            (c != usize::MAX).then_some(c)
        } else {
            self.compose.get(&(h, g)).copied()
        }
    }

    /// `h ∘ g` for a pair known to be composable in a valid category.
    ///
    /// Panics when the pair is not in the table.
    #[inline]
    pub fn comp(&self, h: usize, g: usize) -> usize {
        match self.compose(h, g) {
            Some(c) => c,
            None => panic!(
                "composite {}*{} is not defined",
                self.arrows[h], self.arrows[g]
            ),
        }
    }

    pub fn composition_table(&self) -> &HashMap<(usize, usize), usize> {
        &self.compose
    }

    /// Arrows with source `x`, ascending.
    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    /// Arrows with target `x`, ascending.
    pub fn incoming(&self, x: usize) -> &[usize] {
        &self.incoming[x]
    }

    /// Arrows `x -> y`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.outgoing[x].iter().copied().filter(move |&a| self.tgt[a] == y)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrows[a]
    }

    #[cfg(test)]
    pub(crate) fn src_table(&self) -> &[usize] {
        &self.src
    }

    #[cfg(test)]
    pub(crate) fn tgt_table(&self) -> &[usize] {
        &self.tgt
    }

    #[cfg(test)]
    pub(crate) fn unit_table(&self) -> &[usize] {
        &self.unit
    }
}

/// Exhaustive check of the category axioms: composition defined exactly on
/// composable pairs with the right endpoints, unit laws and associativity
/// on every composable triple.
pub fn validate_category(c: &FiniteCategory) -> ValidationReport<Violation> {
    let mut report = ValidationReport::new();
    let name = |a: usize| c.arrows[a].clone();
    for (&(h, g), &k) in c.compose.iter().collect::<std::collections::BTreeMap<_, _>>() {
        if c.src[h] != c.tgt[g] {
            report.push(Violation::CompositeNotComposable { h: name(h), g: name(g) });
        } else if c.src[k] != c.src[g] || c.tgt[k] != c.tgt[h] {
            report.push(Violation::CompositeEndpoints {
                h: name(h),
                g: name(g),
                composite: name(k),
            });
        }
    }
    for x in 0..c.num_objects() {
        for &g in c.incoming(x) {
            for &h in c.outgoing(x) {
                if !c.compose.contains_key(&(h, g)) {
                    report.push(Violation::CompositeMissing { h: name(h), g: name(g) });
                }
            }
        }
    }
    for (x, &u) in c.unit.iter().enumerate() {
        if c.src[u] != x || c.tgt[u] != x {
            report.push(Violation::UnitEndpoints {
                object: c.objects[x].clone(),
                unit: name(u),
            });
        }
    }
    for a in 0..c.num_arrows() {
        if c.compose(c.unit[c.tgt[a]], a) != Some(a) {
            report.push(Violation::LeftUnit { arrow: name(a) });
        }
        if c.compose(a, c.unit[c.src[a]]) != Some(a) {
            report.push(Violation::RightUnit { arrow: name(a) });
        }
    }
    // (h g) f = h (g f) for f: w -> x, g: x -> y, h: y -> z
    for g in 0..c.num_arrows() {
        for &f in c.incoming(c.src[g]) {
            let Some(gf) = c.compose(g, f) else { continue };
            for &h in c.outgoing(c.tgt[g]) {
                let Some(hg) = c.compose(h, g) else { continue };
                // a missing outer composite is already a totality violation
                if let (Some(left), Some(right)) = (c.compose(hg, f), c.compose(h, gf)) {
                    if left != right {
                        report.push(Violation::Associativity {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
    }
    report
}
