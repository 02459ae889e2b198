//! G-spaces over finite groupoids, translation groupoids, and the
//! correspondence between coverings and isotropy sets.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::category::{FiniteCategory, StructureError};
use crate::group::GroupDesc;
use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::morphisms::GroupoidHom;
use crate::report::ValidationReport;

use super::GSpaceError;

/// A finite set `E` over the objects of `G` with a right action:
/// `e·g` is defined when `proj(e) = tgt(g)`.
#[derive(Clone)]
pub struct FiniteGSpace {
    base: Arc<FiniteGroupoid>,
    points: Vec<String>,
    proj: Vec<usize>,
    /// `act[e * arrows + g]`, `None` where undefined
    act: Vec<Option<usize>>,
}

impl fmt::Debug for FiniteGSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGSpace")
            .field("points", &self.points)
            .field("base_objects", &self.base.objects())
            .finish()
    }
}

impl FiniteGSpace {
    /// From an explicit action list `(e, g, e·g)`. Every composable pair
    /// must be listed exactly once.
    pub fn new(
        base: Arc<FiniteGroupoid>,
        points: Vec<String>,
        proj: Vec<usize>,
        action: &[(usize, usize, usize)],
    ) -> Result<Self, GSpaceError> {
        let (np, na) = (points.len(), base.num_arrows());
        if proj.len() != np {
            return Err(StructureError::LengthMismatch {
                what: "projection",
                expected: np,
                found: proj.len(),
            }
            .into());
        }
        if let Some(&index) = proj.iter().find(|&&x| x >= base.num_objects()) {
            return Err(StructureError::IndexOutOfRange {
                what: "projection",
                index,
            }
            .into());
        }
        let mut seen = std::collections::HashSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(StructureError::DuplicateObject(p.clone()).into());
            }
        }
        let mut act = vec![None; np * na];
        for &(e, g, r) in action {
            if e >= np || r >= np {
                return Err(StructureError::IndexOutOfRange {
                    what: "action",
                    index: e.max(r),
                }
                .into());
            }
            if g >= na {
                return Err(StructureError::IndexOutOfRange { what: "action", index: g }.into());
            }
            if proj[e] != base.tgt(g) {
                return Err(GSpaceError::NotComposable {
                    point: points[e].clone(),
                    arrow: base.arrow_name(g).to_string(),
                });
            }
            if act[e * na + g].replace(r).is_some() {
                return Err(GSpaceError::DuplicateAction {
                    point: points[e].clone(),
                    arrow: base.arrow_name(g).to_string(),
                });
            }
        }
        for e in 0..np {
            for &g in base.incoming(proj[e]) {
                if act[e * na + g].is_none() {
                    return Err(GSpaceError::MissingAction {
                        point: points[e].clone(),
                        arrow: base.arrow_name(g).to_string(),
                    });
                }
            }
        }
        Ok(Self {
            base,
            points,
            proj,
            act,
        })
    }

    /// From an action function, called on every composable pair.
    pub fn from_fn(
        base: Arc<FiniteGroupoid>,
        points: Vec<String>,
        proj: Vec<usize>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GSpaceError> {
        let mut action = Vec::new();
        for (e, &x) in proj.iter().enumerate() {
            if x < base.num_objects() {
                for &g in base.incoming(x) {
                    action.push((e, g, f(e, g)));
                }
            }
        }
        Self::new(base, points, proj, &action)
    }

    /// One point over each object; `x·g = src(g)`.
    pub fn one_point_per_object(base: Arc<FiniteGroupoid>) -> Self {
        let points = base.objects().to_vec();
        let proj = (0..points.len()).collect();
        let b = base.clone();
        Self::from_fn(base, points, proj, move |_, g| b.src(g)).expect("canonical space")
    }

    /// Arrows into `x`, acted on by precomposition: `a·g = a ∘ g`.
    pub fn representable(base: Arc<FiniteGroupoid>, x: usize) -> Self {
        let arrows: Vec<usize> = base.incoming(x).to_vec();
        let pos: HashMap<usize, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let points = arrows.iter().map(|&a| base.arrow_name(a).to_string()).collect();
        let proj = arrows.iter().map(|&a| base.src(a)).collect();
        let b = base.clone();
        Self::from_fn(base, points, proj, move |e, g| pos[&b.comp(arrows[e], g)]).expect("representable")
    }

    /// Disjoint union; points are prefixed with `0:` and `1:`.
    pub fn disjoint_union(&self, other: &FiniteGSpace) -> Result<Self, GSpaceError> {
        if !Arc::ptr_eq(&self.base, &other.base) && self.base.category() != other.base.category() {
            return Err(GSpaceError::BaseMismatch);
        }
        let n = self.points.len();
        let points = self
            .points
            .iter()
            .map(|p| format!("0:{p}"))
            .chain(other.points.iter().map(|p| format!("1:{p}")))
            .collect();
        let proj = self.proj.iter().chain(&other.proj).copied().collect();
        Self::from_fn(self.base.clone(), points, proj, |e, g| {
            if e < n {
                self.apply(e, g).expect("composable")
            } else {
                n + other.apply(e - n, g).expect("composable")
            }
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn proj(&self, e: usize) -> usize {
        self.proj[e]
    }

    /// `e·g`, if `proj(e) = tgt(g)`.
    pub fn apply(&self, e: usize, g: usize) -> Option<usize> {
        self.act[e * self.base.num_arrows() + g]
    }

    /// Points over `x`, ascending.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&e| self.proj[e] == x).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GSpaceViolation {
    /// `proj(e·g) ≠ src(g)`
    Projection { point: String, arrow: String },
    /// `e·unit ≠ e`
    Unit { point: String },
    /// `(e·g)·h ≠ e·(g∘h)`
    Compatibility { point: String, g: String, h: String },
}

impl GSpaceViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            GSpaceViolation::Projection { .. } => "projection",
            GSpaceViolation::Unit { .. } => "unit",
            GSpaceViolation::Compatibility { .. } => "compatibility",
        }
    }
}

impl fmt::Display for GSpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpaceViolation::Projection { point, arrow } => {
                write!(f, "proj({point}·{arrow}) is not the source of {arrow}")
            }
            GSpaceViolation::Unit { point } => write!(f, "{point}·unit ≠ {point}"),
            GSpaceViolation::Compatibility { point, g, h } => {
                write!(f, "({point}·{g})·{h} ≠ {point}·({g}∘{h})")
            }
        }
    }
}

/// Exhaustive check of the action identities.
pub fn validate_gspace(e: &FiniteGSpace) -> ValidationReport<GSpaceViolation> {
    let c: &FiniteCategory = e.base.category();
    let mut report = ValidationReport::new();
    for p in 0..e.len() {
        let x = e.proj[p];
        let pname = || e.points[p].clone();
        if e.apply(p, c.unit(x)) != Some(p) {
            report.push(GSpaceViolation::Unit { point: pname() });
        }
        for &g in c.incoming(x) {
            let pg = e.apply(p, g).expect("total on composables");
            if e.proj[pg] != c.src(g) {
                report.push(GSpaceViolation::Projection {
                    point: pname(),
                    arrow: c.arrow_name(g).to_string(),
                });
                continue;
            }
            for &h in c.incoming(c.src(g)) {
                let left = e.apply(pg, h);
                let right = e.apply(p, c.comp(g, h));
                if left != right {
                    report.push(GSpaceViolation::Compatibility {
                        point: pname(),
                        g: c.arrow_name(g).to_string(),
                        h: c.arrow_name(h).to_string(),
                    });
                }
            }
        }
    }
    report
}

/// `E ⋊ G`: objects are points, arrows `(e, g): e·g -> e`, with
/// `(e, g) ∘ (e·g, h) = (e, g∘h)`. Returns the projection to `G` too.
pub fn translation_groupoid(e: &FiniteGSpace) -> Result<(Arc<FiniteGroupoid>, GroupoidHom), GSpaceError> {
    let report = validate_gspace(e);
    if !report.is_valid() {
        return Err(GSpaceError::Invalid(report.to_string()));
    }
    let c = e.base.category();
    let mut arrows = Vec::new();
    let mut names = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for p in 0..e.len() {
        for &g in c.incoming(e.proj[p]) {
            index.insert((p, g), arrows.len());
            arrows.push((p, g));
            names.push(format!("({},{})", e.points[p], c.arrow_name(g)));
        }
    }
    let src: Vec<usize> = arrows.iter().map(|&(p, g)| e.apply(p, g).expect("composable")).collect();
    let tgt: Vec<usize> = arrows.iter().map(|&(p, _)| p).collect();
    let unit: Vec<usize> = (0..e.len()).map(|p| index[&(p, c.unit(e.proj[p]))]).collect();
    let mut compose = HashMap::new();
    for (i, &(p, g)) in arrows.iter().enumerate() {
        let q = src[i];
        for &h in c.incoming(c.src(g)) {
            compose.insert((i, index[&(q, h)]), index[&(p, c.comp(g, h))]);
        }
    }
    let inv: Vec<usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, &(_, g))| index[&(src[i], e.base.inv(g))])
        .collect();
    let cat = FiniteCategory::from_parts(e.points.clone(), names, src, tgt, unit, compose)?;
    let total = Arc::new(FiniteGroupoid::from_parts(cat, inv)?);
    let pi = GroupoidHom::new(
        total.clone(),
        e.base.clone(),
        e.proj.clone(),
        arrows.iter().map(|&(_, g)| g).collect(),
    )?;
    Ok((total, pi))
}

/// A finite set with a right action of a group: `(s·a)·b = s·(a b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GxSet {
    group: GroupDesc,
    points: Vec<String>,
    /// `act[s * |K| + k]`
    act: Vec<usize>,
}

impl GxSet {
    /// Checks the action axioms.
    pub fn new(group: GroupDesc, points: Vec<String>, act: Vec<usize>) -> Result<Self, GSpaceError> {
        let (n, k) = (points.len(), group.order());
        if act.len() != n * k {
            return Err(StructureError::LengthMismatch {
                what: "set action",
                expected: n * k,
                found: act.len(),
            }
            .into());
        }
        if let Some(&index) = act.iter().find(|&&s| s >= n) {
            return Err(StructureError::IndexOutOfRange { what: "set action", index }.into());
        }
        for s in 0..n {
            if act[s * k + group.identity()] != s {
                return Err(GSpaceError::SetAction(format!("{}·e ≠ {}", points[s], points[s])));
            }
            for a in 0..k {
                for b in 0..k {
                    if act[act[s * k + a] * k + b] != act[s * k + group.mul(a, b)] {
                        return Err(GSpaceError::SetAction(format!(
                            "({}·{})·{} ≠ {}·({}{})",
                            points[s],
                            group.name(a),
                            group.name(b),
                            points[s],
                            group.name(a),
                            group.name(b)
                        )));
                    }
                }
            }
        }
        Ok(Self { group, points, act })
    }

    /// The group acting on itself by right multiplication.
    pub fn regular(group: GroupDesc) -> Self {
        let k = group.order();
        let act = (0..k).flat_map(|s| (0..k).map(move |a| (s, a))).map(|(s, a)| group.mul(s, a)).collect();
        Self {
            points: group.names().to_vec(),
            group,
            act,
        }
    }

    pub fn trivial(group: GroupDesc, n: usize) -> Self {
        let k = group.order();
        Self {
            points: (0..n).map(|i| format!("p{i}")).collect(),
            act: (0..n).flat_map(|s| std::iter::repeat(s).take(k)).collect(),
            group,
        }
    }

    /// Right cosets `H g` of a subgroup, acted on by right multiplication.
    pub fn cosets(group: GroupDesc, subgroup: &[usize]) -> Result<Self, GSpaceError> {
        let k = group.order();
        let mut coset_of = vec![usize::MAX; k];
        let mut reps = Vec::new();
        for g in 0..k {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &h in subgroup {
                coset_of[group.mul(h, g)] = reps.len();
            }
            reps.push(g);
        }
        if reps.len() * subgroup.len() != k {
            return Err(GSpaceError::SetAction("not a subgroup".into()));
        }
        let points = reps.iter().map(|&g| format!("H{}", group.name(g))).collect();
        let act = reps
            .iter()
            .flat_map(|&g| (0..k).map(move |a| (g, a)))
            .map(|(g, a)| coset_of[group.mul(g, a)])
            .collect();
        Self::new(group, points, act)
    }

    /// Disjoint union of sets over the same group.
    pub fn sum(parts: &[GxSet]) -> Result<Self, GSpaceError> {
        let Some(first) = parts.first() else {
            return Err(GSpaceError::SetAction("empty sum".into()));
        };
        let group = first.group.clone();
        let k = group.order();
        let mut points = Vec::new();
        let mut act = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            if p.group != group {
                return Err(GSpaceError::BaseMismatch);
            }
            let off = points.len();
            points.extend(p.points.iter().map(|s| format!("{i}:{s}")));
            act.extend(p.act.iter().map(|&t| t + off));
            debug_assert_eq!(act.len(), points.len() * k);
        }
        Self::new(group, points, act)
    }

    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn apply(&self, s: usize, a: usize) -> usize {
        self.act[s * self.group.order() + a]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut orb: Vec<usize> = (0..self.group.order()).map(|a| self.apply(s, a)).collect();
            orb.sort_unstable();
            orb.dedup();
            for &t in &orb {
                seen[t] = true;
            }
            out.push(orb);
        }
        out
    }

    /// Elements fixing `s`, ascending.
    pub fn stabilizer(&self, s: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&a| self.apply(s, a) == s).collect()
    }
}

/// An equivariant bijection `a -> b`, if any. Both sets must be over the
/// same group table.
pub fn gxset_isomorphism(a: &GxSet, b: &GxSet) -> Option<Vec<usize>> {
    if a.group != b.group || a.len() != b.len() {
        return None;
    }
    let reps: Vec<usize> = a.orbits().iter().map(|o| o[0]).collect();
    let k = a.group.order();
    fn go(a: &GxSet, b: &GxSet, reps: &[usize], k: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let Some((&r, rest)) = reps.split_first() else {
            return true;
        };
        let stab = a.stabilizer(r);
        for t in 0..b.len() {
            if used[t] || b.stabilizer(t) != stab {
                continue;
            }
            // f(r·g) = t·g
            let mut assigned = Vec::new();
            let mut ok = true;
            for g in 0..k {
                let (x, y) = (a.apply(r, g), b.apply(t, g));
                if map[x] == usize::MAX {
                    if used[y] {
                        ok = false;
                        break;
                    }
                    map[x] = y;
                    used[y] = true;
                    assigned.push(x);
                } else if map[x] != y {
                    ok = false;
                    break;
                }
            }
            if ok && go(a, b, rest, k, map, used) {
                return true;
            }
            for x in assigned {
                used[map[x]] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    go(a, b, &reps, k, &mut map, &mut used).then_some(map)
}

fn require_connected(g: &FiniteGroupoid) -> Result<(), GSpaceError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(GSpaceError::Groupoid(GroupoidError::NotConnected(g.num_orbits())))
    }
}

/// The fiber over `x` as a right `isotropy(x)`-set.
pub fn fiber_functor(e: &FiniteGSpace, x: usize) -> Result<GxSet, GSpaceError> {
    require_connected(&e.base)?;
    let group = e.base.isotropy(x)?;
    let loops = e.base.loops_at(x);
    let fiber = e.fiber(x);
    let pos: HashMap<usize, usize> = fiber.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut act = Vec::with_capacity(fiber.len() * loops.len());
    for &p in &fiber {
        for &l in &loops {
            act.push(pos[&e.apply(p, l).expect("loop at x")]);
        }
    }
    let points = fiber.iter().map(|&p| e.points[p].clone()).collect();
    GxSet::new(group, points, act)
}

/// Chosen arrows `τ_y: x -> y` along a breadth-first tree, `τ_x` the unit.
fn transport_arrows(g: &FiniteGroupoid, x: usize) -> Vec<usize> {
    let mut tau = vec![usize::MAX; g.num_objects()];
    tau[x] = g.unit(x);
    let mut queue = std::collections::VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for &a in g.outgoing(y) {
            let z = g.tgt(a);
            if tau[z] == usize::MAX {
                tau[z] = g.comp(a, tau[y]);
                queue.push_back(z);
            }
        }
    }
    tau
}

/// The covering whose fiber over `x` is `s`: points `s@y` for each object
/// `y`, with `(s, y)·g = (s·(τ_y⁻¹ g τ_z), z)` for `g: z -> y`.
pub fn covering_from_gxset(g: &Arc<FiniteGroupoid>, x: usize, s: &GxSet) -> Result<FiniteGSpace, GSpaceError> {
    require_connected(g)?;
    let iso = g.isotropy(x)?;
    if iso != s.group {
        return Err(GSpaceError::BaseMismatch);
    }
    let loops = g.loops_at(x);
    let loop_pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let tau = transport_arrows(g, x);
    let no = g.num_objects();
    let n = s.len();
    let mut points = Vec::with_capacity(n * no);
    let mut proj = Vec::with_capacity(n * no);
    for y in 0..no {
        for p in s.points() {
            points.push(format!("{p}@{}", g.object_name(y)));
            proj.push(y);
        }
    }
    let gg = g.clone();
    FiniteGSpace::from_fn(g.clone(), points, proj, move |e, a| {
        let (y, i) = (e / n, e % n);
        let z = gg.src(a);
        let l = gg.comp(gg.inv(tau[y]), gg.comp(a, tau[z]));
        z * n + s.apply(i, loop_pos[&l])
    })
}

/// The fundamental group at `x`: the isotropy group.
pub fn pi1(g: &FiniteGroupoid, x: usize) -> Result<GroupDesc, GSpaceError> {
    require_connected(g)?;
    Ok(g.isotropy(x)?)
}
