use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::category::StructureError;
use crate::groupoid::FiniteGroupoid;
use crate::report::ValidationReport;

/// A functor between finite groupoids, given by its object and arrow maps.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupoidHom {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    obj_map: Vec<usize>,
    arr_map: Vec<usize>,
}

impl fmt::Debug for GroupoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupoidHom")
            .field("obj_map", &self.obj_map)
            .field("arr_map", &self.arr_map)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    Source { arrow: String },
    Target { arrow: String },
    Unit { object: String },
    Inverse { arrow: String },
    Composition { h: String, g: String },
}

impl HomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            HomViolation::Source { .. } => "preserves-source",
            HomViolation::Target { .. } => "preserves-target",
            HomViolation::Unit { .. } => "preserves-unit",
            HomViolation::Inverse { .. } => "preserves-inverse",
            HomViolation::Composition { .. } => "preserves-composition",
        }
    }
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::Source { arrow } => write!(f, "preserves-source: s(φ({arrow})) != φ(s({arrow}))"),
            HomViolation::Target { arrow } => write!(f, "preserves-target: t(φ({arrow})) != φ(t({arrow}))"),
            HomViolation::Unit { object } => write!(f, "preserves-unit: φ(1_{object}) != 1_φ({object})"),
            HomViolation::Inverse { arrow } => write!(f, "preserves-inverse: φ(inv {arrow}) != inv φ({arrow})"),
            HomViolation::Composition { h, g } => write!(f, "preserves-composition: φ({h}*{g}) != φ({h})*φ({g})"),
        }
    }
}

impl GroupoidHom {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<usize>,
        arr_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        for (what, map, len, bound) in [
            ("object map", &obj_map, source.num_objects(), target.num_objects()),
            ("arrow map", &arr_map, source.num_arrows(), target.num_arrows()),
        ] {
            if map.len() != len {
                return Err(StructureError::LengthMismatch {
                    what,
                    expected: len,
                    found: map.len(),
                });
            }
            if let Some(&index) = map.iter().find(|&&i| i >= bound) {
                return Err(StructureError::IndexOutOfRange { what, index });
            }
        }
        Ok(Self {
            source,
            target,
            obj_map,
            arr_map,
        })
    }

    /// Builds a homomorphism from name pairs. Units whose image is not
    /// listed are sent to the unit of the image object.
    pub fn from_names(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: &[(String, String)],
        arrows: &[(String, String)],
    ) -> Result<Self, StructureError> {
        let mut obj_map = vec![usize::MAX; source.num_objects()];
        for (a, b) in objects {
            let x = source.object_index(a).ok_or_else(|| StructureError::UnknownObject {
                context: "homomorphism source".into(),
                name: a.clone(),
            })?;
            obj_map[x] = target.object_index(b).ok_or_else(|| StructureError::UnknownObject {
                context: "homomorphism target".into(),
                name: b.clone(),
            })?;
        }
        if let Some(x) = obj_map.iter().position(|&y| y == usize::MAX) {
            return Err(StructureError::Other(format!(
                "object `{}` has no image",
                source.object_name(x)
            )));
        }
        let mut arr_map = vec![usize::MAX; source.num_arrows()];
        for (a, b) in arrows {
            let g = source.arrow_index(a).ok_or_else(|| StructureError::UnknownArrow {
                context: "homomorphism source".into(),
                name: a.clone(),
            })?;
            arr_map[g] = target.arrow_index(b).ok_or_else(|| StructureError::UnknownArrow {
                context: "homomorphism target".into(),
                name: b.clone(),
            })?;
        }
        for x in 0..source.num_objects() {
            let u = source.unit(x);
            if arr_map[u] == usize::MAX {
                arr_map[u] = target.unit(obj_map[x]);
            }
        }
        if let Some(a) = arr_map.iter().position(|&b| b == usize::MAX) {
            return Err(StructureError::Other(format!(
                "arrow `{}` has no image",
                source.arrow_name(a)
            )));
        }
        Self::new(source, target, obj_map, arr_map)
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let obj_map = (0..g.num_objects()).collect();
        let arr_map = (0..g.num_arrows()).collect();
        Self {
            source: g.clone(),
            target: g,
            obj_map,
            arr_map,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupoidHom) -> Result<GroupoidHom, StructureError> {
        if *self.target != *other.source {
            return Err(StructureError::Other("homomorphisms are not composable".into()));
        }
        Self::new(
            self.source.clone(),
            other.target.clone(),
            self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            self.arr_map.iter().map(|&a| other.arr_map[a]).collect(),
        )
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    #[inline]
    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    #[inline]
    pub fn arr(&self, a: usize) -> usize {
        self.arr_map[a]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &[usize] {
        &self.arr_map
    }
}

/// Exhaustive functoriality check.
pub fn validate_hom(phi: &GroupoidHom) -> ValidationReport<HomViolation> {
    let (h, g) = (&*phi.source, &*phi.target);
    let mut report = ValidationReport::new();
    let name = |a: usize| h.arrow_name(a).to_string();
    for a in 0..h.num_arrows() {
        let b = phi.arr(a);
        if g.src(b) != phi.obj(h.src(a)) {
            report.push(HomViolation::Source { arrow: name(a) });
        }
        if g.tgt(b) != phi.obj(h.tgt(a)) {
            report.push(HomViolation::Target { arrow: name(a) });
        }
        if phi.arr(h.inv(a)) != g.inv(b) {
            report.push(HomViolation::Inverse { arrow: name(a) });
        }
    }
    for x in 0..h.num_objects() {
        if phi.arr(h.unit(x)) != g.unit(phi.obj(x)) {
            report.push(HomViolation::Unit {
                object: h.object_name(x).to_string(),
            });
        }
    }
    let mut pairs: Vec<(&(usize, usize), &usize)> = h.composition_table().iter().collect();
    pairs.sort_unstable();
    for (&(p, q), &r) in pairs {
        if g.compose(phi.arr(p), phi.arr(q)) != Some(phi.arr(r)) {
            report.push(HomViolation::Composition { h: name(p), g: name(q) });
        }
    }
    report
}

/// A natural transformation `φ ⇒ ψ`: for each object `x` an arrow
/// `α(x): φ(x) -> ψ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    phi: GroupoidHom,
    psi: GroupoidHom,
    components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatViolation {
    ComponentEndpoints { object: String },
    Naturality { arrow: String },
}

impl fmt::Display for NatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatViolation::ComponentEndpoints { object } => {
                write!(f, "component-endpoints: α({object}) is not an arrow φ({object}) -> ψ({object})")
            }
            NatViolation::Naturality { arrow } => {
                write!(f, "naturality: ψ({arrow})α(x) != α(x')φ({arrow})")
            }
        }
    }
}

impl NatTrans {
    pub fn new(phi: GroupoidHom, psi: GroupoidHom, components: Vec<usize>) -> Result<Self, StructureError> {
        if *phi.source != *psi.source || *phi.target != *psi.target {
            return Err(StructureError::Other(
                "natural transformation between non-parallel homomorphisms".into(),
            ));
        }
        if components.len() != phi.source.num_objects() {
            return Err(StructureError::LengthMismatch {
                what: "components",
                expected: phi.source.num_objects(),
                found: components.len(),
            });
        }
        if let Some(&index) = components.iter().find(|&&a| a >= phi.target.num_arrows()) {
            return Err(StructureError::IndexOutOfRange {
                what: "components",
                index,
            });
        }
        Ok(Self { phi, psi, components })
    }

    pub fn from_names(phi: GroupoidHom, psi: GroupoidHom, components: &[(String, String)]) -> Result<Self, StructureError> {
        let mut comp = vec![usize::MAX; phi.source.num_objects()];
        for (x, a) in components {
            let i = phi.source.object_index(x).ok_or_else(|| StructureError::UnknownObject {
                context: "natural transformation".into(),
                name: x.clone(),
            })?;
            comp[i] = phi.target.arrow_index(a).ok_or_else(|| StructureError::UnknownArrow {
                context: "natural transformation".into(),
                name: a.clone(),
            })?;
        }
        if comp.contains(&usize::MAX) {
            return Err(StructureError::Other("missing component".into()));
        }
        Self::new(phi, psi, comp)
    }

    /// The identity transformation `φ ⇒ φ`.
    pub fn identity(phi: GroupoidHom) -> Self {
        let components = (0..phi.source.num_objects())
            .map(|x| phi.target.unit(phi.obj(x)))
            .collect();
        Self {
            psi: phi.clone(),
            phi,
            components,
        }
    }

    pub fn phi(&self) -> &GroupoidHom {
        &self.phi
    }

    pub fn psi(&self) -> &GroupoidHom {
        &self.psi
    }

    pub fn component(&self, x: usize) -> usize {
        self.components[x]
    }
}

pub fn validate_nat_trans(alpha: &NatTrans) -> ValidationReport<NatViolation> {
    let (h, g) = (&*alpha.phi.source, &*alpha.phi.target);
    let mut report = ValidationReport::new();
    let mut typed = vec![true; h.num_objects()];
    for x in 0..h.num_objects() {
        let a = alpha.components[x];
        if g.src(a) != alpha.phi.obj(x) || g.tgt(a) != alpha.psi.obj(x) {
            typed[x] = false;
            report.push(NatViolation::ComponentEndpoints {
                object: h.object_name(x).to_string(),
            });
        }
    }
    for f in 0..h.num_arrows() {
        let (x, y) = (h.src(f), h.tgt(f));
        if !typed[x] || !typed[y] {
            continue;
        }
        // ψ(f) α(x) = α(y) φ(f)
        let left = g.compose(alpha.psi.arr(f), alpha.components[x]);
        let right = g.compose(alpha.components[y], alpha.phi.arr(f));
        if left.is_none() || left != right {
            report.push(NatViolation::Naturality {
                arrow: h.arrow_name(f).to_string(),
            });
        }
    }
    report
}

/// Number of arrows `x -> y` for every pair with at least one arrow.
pub(crate) fn hom_counts(g: &FiniteGroupoid) -> HashMap<(usize, usize), usize> {
    let mut m = HashMap::new();
    for a in 0..g.num_arrows() {
        *m.entry((g.src(a), g.tgt(a))).or_insert(0) += 1;
    }
    m
}
