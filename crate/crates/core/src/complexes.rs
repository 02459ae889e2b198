//! Complexes of groups over a finite index category and their
//! Grothendieck construction.
//!
//! For `σ: i -> j` and `τ: j -> k` the twist `g_{τ,σ} ∈ F(k)` satisfies
//! `g F(τσ)(x) g⁻¹ = F(τ)(F(σ)(x))`, and for `ρ: k -> l`
//! `F(ρ)(g_{τ,σ}) g_{ρ,τσ} = g_{ρ,τ} g_{ρτ,σ}`. The total category has
//! arrows `(σ, g)` with `g ∈ F(j)` and
//! `(τ, h) ∘ (σ, g) = (τσ, h F(τ)(g) g_{τ,σ})`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::category::{FiniteCategory, StructureError};
use crate::group::GroupDesc;
use crate::groupoid::FiniteGroupoid;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("invalid complex of groups: {0}")]
    Invalid(String),
    #[error("index relation has a cycle through `{0}`")]
    NotAPoset(String),
}

#[derive(Debug, Clone)]
pub struct ComplexOfGroups {
    index: Arc<FiniteCategory>,
    groups: Vec<GroupDesc>,
    /// per arrow `σ: i -> j`, the images in `F(j)` of the elements of `F(i)`
    homs: Vec<Vec<usize>>,
    /// `(τ, σ) -> g_{τ,σ}`; absent pairs carry the identity
    twists: HashMap<(usize, usize), usize>,
}

impl ComplexOfGroups {
    /// Structural checks only; the axioms are checked by [`validate_complex`].
    pub fn new(
        index: Arc<FiniteCategory>,
        groups: Vec<GroupDesc>,
        homs: Vec<Vec<usize>>,
        twists: HashMap<(usize, usize), usize>,
    ) -> Result<Self, ComplexError> {
        if groups.len() != index.num_objects() {
            return Err(StructureError::LengthMismatch {
                what: "groups",
                expected: index.num_objects(),
                found: groups.len(),
            }
            .into());
        }
        if homs.len() != index.num_arrows() {
            return Err(StructureError::LengthMismatch {
                what: "homomorphisms",
                expected: index.num_arrows(),
                found: homs.len(),
            }
            .into());
        }
        for (s, h) in homs.iter().enumerate() {
            let (i, j) = (index.src(s), index.tgt(s));
            if h.len() != groups[i].order() {
                return Err(StructureError::LengthMismatch {
                    what: "homomorphism",
                    expected: groups[i].order(),
                    found: h.len(),
                }
                .into());
            }
            if let Some(&index) = h.iter().find(|&&y| y >= groups[j].order()) {
                return Err(StructureError::IndexOutOfRange {
                    what: "homomorphism",
                    index,
                }
                .into());
            }
        }
        for (&(t, s), &g) in &twists {
            if t >= index.num_arrows() || s >= index.num_arrows() || index.src(t) != index.tgt(s) {
                return Err(StructureError::Other(format!("twist on a non-composable pair ({t}, {s})")).into());
            }
            if g >= groups[index.tgt(t)].order() {
                return Err(StructureError::IndexOutOfRange { what: "twist", index: g }.into());
            }
        }
        Ok(Self {
            index,
            groups,
            homs,
            twists,
        })
    }

    /// Inclusions `F(i) ⊆ F(j)` for each `σ: i -> j`, given as subsets of
    /// one ambient group; identity twists.
    pub fn from_subgroups(
        index: Arc<FiniteCategory>,
        ambient: &GroupDesc,
        subgroups: &[Vec<usize>],
    ) -> Result<Self, ComplexError> {
        let groups = subgroups
            .iter()
            .map(|s| ambient.subgroup(s).map_err(|e| ComplexError::Invalid(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut homs = Vec::with_capacity(index.num_arrows());
        for s in 0..index.num_arrows() {
            let (i, j) = (index.src(s), index.tgt(s));
            let pos: HashMap<usize, usize> = subgroups[j].iter().enumerate().map(|(p, &a)| (a, p)).collect();
            let h = subgroups[i]
                .iter()
                .map(|a| {
                    pos.get(a).copied().ok_or_else(|| {
                        ComplexError::Invalid(format!(
                            "F({}) is not contained in F({})",
                            index.object_name(i),
                            index.object_name(j)
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            homs.push(h);
        }
        Self::new(index, groups, homs, HashMap::new())
    }

    pub fn index(&self) -> &Arc<FiniteCategory> {
        &self.index
    }

    pub fn group(&self, i: usize) -> &GroupDesc {
        &self.groups[i]
    }

    pub fn hom(&self, s: usize) -> &[usize] {
        &self.homs[s]
    }

    /// `g_{τ,σ}`.
    pub fn twist(&self, t: usize, s: usize) -> usize {
        self.twists
            .get(&(t, s))
            .copied()
            .unwrap_or_else(|| self.groups[self.index.tgt(t)].identity())
    }

    /// Explicitly stored twists.
    pub fn twists(&self) -> &HashMap<(usize, usize), usize> {
        &self.twists
    }

    /// Copy with `g_{τ,σ}` replaced.
    pub fn with_twist(&self, t: usize, s: usize, g: usize) -> Result<Self, ComplexError> {
        let mut twists = self.twists.clone();
        twists.insert((t, s), g);
        Self::new(self.index.clone(), self.groups.clone(), self.homs.clone(), twists)
    }

    /// Composable pairs `(τ, σ)`, in index order.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let c = &self.index;
        let mut out = Vec::new();
        for s in 0..c.num_arrows() {
            for &t in c.outgoing(c.tgt(s)) {
                out.push((t, s));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexOptions {
    pub require_injective: bool,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        Self {
            require_injective: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexViolation {
    Homomorphism { arrow: String, a: String, b: String },
    NotInjective { arrow: String },
    /// `F(id_i)` is not the identity
    UnitHom { object: String },
    /// a twist involving an identity arrow is not the identity
    UnitTwist { tau: String, sigma: String },
    Twisting { tau: String, sigma: String, element: String },
    Cocycle { rho: String, tau: String, sigma: String },
}

impl ComplexViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            ComplexViolation::Homomorphism { .. } => "homomorphism",
            ComplexViolation::NotInjective { .. } => "injective",
            ComplexViolation::UnitHom { .. } | ComplexViolation::UnitTwist { .. } => "normal",
            ComplexViolation::Twisting { .. } => "twisting",
            ComplexViolation::Cocycle { .. } => "cocycle",
        }
    }

    pub fn witness(&self) -> Vec<&str> {
        match self {
            ComplexViolation::Homomorphism { arrow, a, b } => vec![arrow, a, b],
            ComplexViolation::NotInjective { arrow } => vec![arrow],
            ComplexViolation::UnitHom { object } => vec![object],
            ComplexViolation::UnitTwist { tau, sigma } => vec![tau, sigma],
            ComplexViolation::Twisting { tau, sigma, element } => vec![tau, sigma, element],
            ComplexViolation::Cocycle { rho, tau, sigma } => vec![rho, tau, sigma],
        }
    }
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexViolation::Homomorphism { arrow, a, b } => {
                write!(f, "F({arrow}) does not preserve the product {a}·{b}")
            }
            ComplexViolation::NotInjective { arrow } => write!(f, "F({arrow}) is not injective"),
            ComplexViolation::UnitHom { object } => write!(f, "F(id) at {object} is not the identity"),
            ComplexViolation::UnitTwist { tau, sigma } => write!(f, "twist g({tau},{sigma}) on an identity is not trivial"),
            ComplexViolation::Twisting { tau, sigma, element } => {
                write!(f, "g({tau},{sigma}) F({tau}∘{sigma}) ≠ F({tau}) F({sigma}) at {element}")
            }
            ComplexViolation::Cocycle { rho, tau, sigma } => write!(f, "cocycle fails on ({rho}, {tau}, {sigma})"),
        }
    }
}

pub fn validate_complex(f: &ComplexOfGroups) -> ValidationReport<ComplexViolation> {
    validate_complex_with(f, ComplexOptions::default())
}

/// Exhaustive check of the complex axioms; witnesses are named by arrow
/// and element names.
pub fn validate_complex_with(f: &ComplexOfGroups, opts: ComplexOptions) -> ValidationReport<ComplexViolation> {
    let c = &f.index;
    let an = |a: usize| c.arrow_name(a).to_string();
    let mut report = ValidationReport::new();
    for s in 0..c.num_arrows() {
        let (gi, gj) = (&f.groups[c.src(s)], &f.groups[c.tgt(s)]);
        let h = &f.homs[s];
        'hom: for a in 0..gi.order() {
            for b in 0..gi.order() {
                if h[gi.mul(a, b)] != gj.mul(h[a], h[b]) {
                    report.push(ComplexViolation::Homomorphism {
                        arrow: an(s),
                        a: gi.name(a).to_string(),
                        b: gi.name(b).to_string(),
                    });
                    break 'hom;
                }
            }
        }
        if opts.require_injective {
            let mut img = h.clone();
            img.sort_unstable();
            img.dedup();
            if img.len() != h.len() {
                report.push(ComplexViolation::NotInjective { arrow: an(s) });
            }
        }
    }
    for x in 0..c.num_objects() {
        let u = c.unit(x);
        if f.homs[u].iter().enumerate().any(|(a, &b)| a != b) {
            report.push(ComplexViolation::UnitHom {
                object: c.object_name(x).to_string(),
            });
        }
    }
    let pairs = f.composable_pairs();
    for &(t, s) in &pairs {
        let gk = &f.groups[c.tgt(t)];
        let g = f.twist(t, s);
        if (c.is_unit(t) || c.is_unit(s)) && g != gk.identity() {
            report.push(ComplexViolation::UnitTwist { tau: an(t), sigma: an(s) });
        }
        let ts = c.comp(t, s);
        let gi = &f.groups[c.src(s)];
        for x in 0..gi.order() {
            let left = gk.mul(gk.mul(g, f.homs[ts][x]), gk.inv(g));
            let right = f.homs[t][f.homs[s][x]];
            if left != right {
                report.push(ComplexViolation::Twisting {
                    tau: an(t),
                    sigma: an(s),
                    element: gi.name(x).to_string(),
                });
                break;
            }
        }
    }
    for &(t, s) in &pairs {
        for &r in c.outgoing(c.tgt(t)) {
            let gl = &f.groups[c.tgt(r)];
            let left = gl.mul(f.homs[r][f.twist(t, s)], f.twist(r, c.comp(t, s)));
            let right = gl.mul(f.twist(r, t), f.twist(c.comp(r, t), s));
            if left != right {
                report.push(ComplexViolation::Cocycle {
                    rho: an(r),
                    tau: an(t),
                    sigma: an(s),
                });
            }
        }
    }
    report
}

/// Whether the report contains a violation the Grothendieck construction
/// can see; injectivity is not used by it.
pub fn has_structural_violation(report: &ValidationReport<ComplexViolation>) -> bool {
    report.iter().any(|v| v.axiom() != "injective")
}

/// The total category, after validating the complex.
pub fn grothendieck(f: &ComplexOfGroups) -> Result<FiniteCategory, ComplexError> {
    let report = validate_complex(f);
    if !report.is_valid() {
        return Err(ComplexError::Invalid(report.to_string()));
    }
    grothendieck_unchecked(f)
}

/// The total category built from the composition formula without checking
/// the complex first. The result need not satisfy the category axioms;
/// construction fails only if generated arrow names collide.
pub fn grothendieck_unchecked(f: &ComplexOfGroups) -> Result<FiniteCategory, ComplexError> {
    let c = &f.index;
    let mut first = Vec::with_capacity(c.num_arrows());
    let mut names = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for s in 0..c.num_arrows() {
        first.push(names.len());
        let gj = &f.groups[c.tgt(s)];
        for g in 0..gj.order() {
            names.push(format!("({},{})", c.arrow_name(s), gj.name(g)));
            src.push(c.src(s));
            tgt.push(c.tgt(s));
        }
    }
    let arrow = |s: usize, g: usize| first[s] + g;
    let unit = (0..c.num_objects())
        .map(|x| arrow(c.unit(x), f.groups[x].identity()))
        .collect();
    let mut compose = HashMap::new();
    for (t, s) in f.composable_pairs() {
        let (gj, gk) = (&f.groups[c.tgt(s)], &f.groups[c.tgt(t)]);
        let ts = c.comp(t, s);
        let tw = f.twist(t, s);
        for g in 0..gj.order() {
            let fg = f.homs[t][g];
            for h in 0..gk.order() {
                let k = gk.mul(gk.mul(h, fg), tw);
                compose.insert((arrow(t, h), arrow(s, g)), arrow(ts, k));
            }
        }
    }
    Ok(FiniteCategory::from_parts(c.objects().to_vec(), names, src, tgt, unit, compose)?)
}

/// Finds two-sided inverses for every arrow, if they exist.
pub fn try_into_groupoid(c: FiniteCategory) -> Option<FiniteGroupoid> {
    let mut inv = Vec::with_capacity(c.num_arrows());
    for a in 0..c.num_arrows() {
        let (x, y) = (c.src(a), c.tgt(a));
        let b = c
            .hom(y, x)
            .find(|&b| c.compose(b, a) == Some(c.unit(x)) && c.compose(a, b) == Some(c.unit(y)))?;
        inv.push(b);
    }
    FiniteGroupoid::from_parts(c, inv).ok()
}

/// The category of a finite poset: objects `names`, arrows `id_x` and
/// `x<y` for every strict relation in the transitive closure of `less`.
pub fn poset_category(names: &[&str], less: &[(usize, usize)]) -> Result<FiniteCategory, ComplexError> {
    let n = names.len();
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in less {
        if a >= n || b >= n {
            return Err(StructureError::IndexOutOfRange {
                what: "poset relation",
                index: a.max(b),
            }
            .into());
        }
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return Err(ComplexError::NotAPoset(names[i].to_string()));
            }
        }
    }
    let mut arrows = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut id = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                id.insert((i, j), arrows.len());
                arrows.push(if i == j {
                    format!("id_{}", names[i])
                } else {
                    format!("{}<{}", names[i], names[j])
                });
                src.push(i);
                tgt.push(j);
            }
        }
    }
    let unit = (0..n).map(|i| id[&(i, i)]).collect();
    let mut compose = HashMap::new();
    for (&(i, j), &a) in &id {
        for k in 0..n {
            if let Some(&b) = id.get(&(j, k)) {
                compose.insert((b, a), id[&(i, k)]);
            }
        }
    }
    let objects = names.iter().map(|s| s.to_string()).collect();
    Ok(FiniteCategory::from_parts(objects, arrows, src, tgt, unit, compose)?)
}

/// Two charts of the interval with reflection: `free` with the trivial
/// group, included into `fixed` with `Z/2`; trivial twists.
pub fn mirror_interval_complex() -> ComplexOfGroups {
    let index = Arc::new(poset_category(&["free", "fixed"], &[(0, 1)]).expect("two-element poset"));
    let z2 = GroupDesc::cyclic(2);
    let subgroups = vec![vec![z2.identity()], vec![0, 1]];
    ComplexOfGroups::from_subgroups(index, &z2, &subgroups).expect("trivial group sits in Z/2")
}
