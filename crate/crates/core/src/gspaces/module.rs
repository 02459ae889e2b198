//! Abelian G-modules: invariant sections and group cohomology of stalks.
//!
//! A fiber is `Z^rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk`; elements are coefficient
//! vectors and morphisms are integer matrices read modulo the torsion.
//! An arrow `g: x -> y` acts contravariantly, `A_y -> A_x`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::group::GroupDesc;
use crate::groupoid::FiniteGroupoid;
use crate::linalg::abelian::diagonal_relations;
use crate::linalg::{subquotient, AbelianGroup, IntMatrix, SparseEchelon};
use crate::report::ValidationReport;
use crate::Rational;

use super::GSpaceError;

/// `Z^rank ⊕ Z/t1 ⊕ ...`; the torsion orders need not divide each other.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiberGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FiberGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self, GSpaceError> {
        if let Some(&t) = torsion.iter().find(|&&t| t < 2 || t > i32::MAX as u64) {
            return Err(GSpaceError::Module(format!("torsion order {t} must lie in 2..2^31")));
        }
        Ok(Self { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(0, vec![n]).expect("order >= 2")
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Modulus of coordinate `i`, 0 for free coordinates.
    pub fn modulus(&self, i: usize) -> i64 {
        if i < self.rank {
            0
        } else {
            self.torsion[i - self.rank] as i64
        }
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (i, x) in v.iter_mut().enumerate() {
            let m = self.modulus(i);
            if m != 0 {
                *x = x.rem_euclid(m);
            }
        }
    }

    fn reduce_matrix(&self, m: &mut IntMatrix<i64>) {
        for i in 0..m.rows() {
            let t = self.modulus(i);
            if t != 0 {
                for j in 0..m.cols() {
                    m.set(i, j, m.get(i, j).rem_euclid(t));
                }
            }
        }
    }

    /// Whether two matrices into this group agree modulo its relations.
    pub fn same_map(&self, a: &IntMatrix<i64>, b: &IntMatrix<i64>) -> bool {
        (0..a.rows()).all(|i| {
            let t = self.modulus(i);
            (0..a.cols()).all(|j| {
                let d = a.get(i, j) - b.get(i, j);
                if t == 0 {
                    d == 0
                } else {
                    d.rem_euclid(t) == 0
                }
            })
        })
    }

    /// Whether `m: from -> self` sends relations of `from` to zero.
    pub fn well_defined_from(&self, from: &FiberGroup, m: &IntMatrix<i64>) -> bool {
        (from.rank..from.dim()).all(|j| {
            let tj = from.modulus(j);
            (0..self.dim()).all(|i| {
                let v = m.get(i, j).saturating_mul(tj);
                let ti = self.modulus(i);
                if ti == 0 {
                    v == 0
                } else {
                    v.rem_euclid(ti) == 0
                }
            })
        })
    }
}

impl fmt::Display for FiberGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn checked_product(a: &IntMatrix<i64>, b: &IntMatrix<i64>) -> Result<IntMatrix<i64>, GSpaceError> {
    a.checked_mul(b)
        .map_err(|_| GSpaceError::Module("coefficient overflow in action matrices".into()))
}

/// A G-module: a fiber over every object and a contravariant action.
#[derive(Debug, Clone)]
pub struct GModule {
    base: Arc<FiniteGroupoid>,
    fibers: Vec<FiberGroup>,
    act: Vec<IntMatrix<i64>>,
}

impl GModule {
    /// `act[g]` is a `dim(A_src g) × dim(A_tgt g)` matrix. Only shapes are
    /// checked here; see [`validate_gmodule`].
    pub fn new(base: Arc<FiniteGroupoid>, fibers: Vec<FiberGroup>, act: Vec<IntMatrix<i64>>) -> Result<Self, GSpaceError> {
        if fibers.len() != base.num_objects() || act.len() != base.num_arrows() {
            return Err(GSpaceError::Module(format!(
                "expected {} fibers and {} action matrices",
                base.num_objects(),
                base.num_arrows()
            )));
        }
        for (g, m) in act.iter().enumerate() {
            let (x, y) = (base.src(g), base.tgt(g));
            if m.rows() != fibers[x].dim() || m.cols() != fibers[y].dim() {
                return Err(GSpaceError::Module(format!(
                    "action of `{}` is {}x{}, expected {}x{}",
                    base.arrow_name(g),
                    m.rows(),
                    m.cols(),
                    fibers[x].dim(),
                    fibers[y].dim()
                )));
            }
        }
        let mut act = act;
        for (g, m) in act.iter_mut().enumerate() {
            fibers[base.src(g)].reduce_matrix(m);
        }
        Ok(Self { base, fibers, act })
    }

    pub fn from_fn(
        base: Arc<FiniteGroupoid>,
        fibers: Vec<FiberGroup>,
        f: impl Fn(usize) -> IntMatrix<i64>,
    ) -> Result<Self, GSpaceError> {
        let act = (0..base.num_arrows()).map(f).collect();
        Self::new(base, fibers, act)
    }

    /// Same fiber everywhere, every arrow acting as the identity.
    pub fn constant(base: Arc<FiniteGroupoid>, fiber: FiberGroup) -> Self {
        let d = fiber.dim();
        let fibers = vec![fiber; base.num_objects()];
        Self::from_fn(base, fibers, |_| IntMatrix::identity(d)).expect("constant module")
    }

    /// A module over a group, seen over the one-object groupoid.
    pub fn from_group_module(m: &KModule) -> Self {
        let base = Arc::new(crate::constructors::group_as_groupoid(&m.group));
        Self::new(base, vec![m.fiber.clone()], m.act.clone()).expect("shapes agree")
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn fiber(&self, x: usize) -> &FiberGroup {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[FiberGroup] {
        &self.fibers
    }

    pub fn action(&self, g: usize) -> &IntMatrix<i64> {
        &self.act[g]
    }

    /// `A_x` as a module over `isotropy(x)`, loops in `loops_at` order.
    pub fn stalk(&self, x: usize) -> Result<KModule, GSpaceError> {
        let group = self.base.isotropy(x)?;
        let act = self.base.loops_at(x).into_iter().map(|l| self.act[l].clone()).collect();
        KModule::new(group, self.fibers[x].clone(), act)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolation {
    NotWellDefined { arrow: String },
    Unit { object: String },
    Composition { g: String, h: String },
    Inverse { arrow: String },
}

impl ModuleViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            ModuleViolation::NotWellDefined { .. } => "well-defined",
            ModuleViolation::Unit { .. } => "unit",
            ModuleViolation::Composition { .. } => "composition",
            ModuleViolation::Inverse { .. } => "inverse",
        }
    }
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::NotWellDefined { arrow } => write!(f, "action of {arrow} does not respect torsion"),
            ModuleViolation::Unit { object } => write!(f, "unit at {object} does not act as the identity"),
            ModuleViolation::Composition { g, h } => write!(f, "act({g}∘{h}) ≠ act({h})·act({g})"),
            ModuleViolation::Inverse { arrow } => write!(f, "act({arrow}⁻¹) is not inverse to act({arrow})"),
        }
    }
}

/// Exhaustive check of the module axioms.
pub fn validate_gmodule(a: &GModule) -> ValidationReport<ModuleViolation> {
    let g = &a.base;
    let mut report = ValidationReport::new();
    let name = |x: usize| g.arrow_name(x).to_string();
    for arr in 0..g.num_arrows() {
        let (x, y) = (g.src(arr), g.tgt(arr));
        if !a.fibers[x].well_defined_from(&a.fibers[y], &a.act[arr]) {
            report.push(ModuleViolation::NotWellDefined { arrow: name(arr) });
        }
    }
    for x in 0..g.num_objects() {
        let id = IntMatrix::identity(a.fibers[x].dim());
        if !a.fibers[x].same_map(&a.act[g.unit(x)], &id) {
            report.push(ModuleViolation::Unit {
                object: g.object_name(x).to_string(),
            });
        }
    }
    for (&(h, k), &c) in g.composition_table() {
        // c = h ∘ k, k: w -> x, h: x -> y; act(c) = act(k)·act(h)
        match checked_product(&a.act[k], &a.act[h]) {
            Ok(p) if a.fibers[g.src(k)].same_map(&a.act[c], &p) => {}
            _ => report.push(ModuleViolation::Composition { g: name(h), h: name(k) }),
        }
    }
    for arr in 0..g.num_arrows() {
        let back = g.inv(arr);
        let id = IntMatrix::identity(a.fibers[g.tgt(arr)].dim());
        match checked_product(&a.act[back], &a.act[arr]) {
            Ok(p) if a.fibers[g.tgt(arr)].same_map(&p, &id) => {}
            _ => report.push(ModuleViolation::Inverse { arrow: name(arr) }),
        }
    }
    report
}

/// A module over a finite group with the same right convention:
/// `act(a b) = act(b)·act(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KModule {
    pub group: GroupDesc,
    pub fiber: FiberGroup,
    pub act: Vec<IntMatrix<i64>>,
}

impl KModule {
    pub fn new(group: GroupDesc, fiber: FiberGroup, act: Vec<IntMatrix<i64>>) -> Result<Self, GSpaceError> {
        let d = fiber.dim();
        if act.len() != group.order() || act.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(GSpaceError::Module(format!(
                "expected {} action matrices of size {d}x{d}",
                group.order()
            )));
        }
        let mut act = act;
        for m in act.iter_mut() {
            fiber.reduce_matrix(m);
        }
        Ok(Self { group, fiber, act })
    }

    pub fn trivial(group: GroupDesc, fiber: FiberGroup) -> Self {
        let d = fiber.dim();
        let act = vec![IntMatrix::identity(d); group.order()];
        Self { group, fiber, act }
    }

    /// `Z` (or `Z/n`) with the elements outside `kernel` acting by `-1`.
    pub fn sign(group: GroupDesc, kernel: &[usize], fiber: FiberGroup) -> Result<Self, GSpaceError> {
        if fiber.dim() != 1 {
            return Err(GSpaceError::Module("sign modules are cyclic".into()));
        }
        let act = (0..group.order())
            .map(|a| IntMatrix::from_rows(vec![vec![if kernel.contains(&a) { 1 } else { -1 }]]))
            .collect();
        let m = Self::new(group, fiber, act)?;
        let report = validate_gmodule(&GModule::from_group_module(&m));
        if !report.is_valid() {
            return Err(GSpaceError::Module(format!("not a module: {report}")));
        }
        Ok(m)
    }
}

/// Families `(a_x)` with `act(g)(a_y) = a_x` for every `g: x -> y`.
pub fn invariant_sections(a: &GModule) -> Result<AbelianGroup, GSpaceError> {
    let g = &a.base;
    let mut offset = Vec::with_capacity(g.num_objects());
    let mut total = 0;
    for f in &a.fibers {
        offset.push(total);
        total += f.dim();
    }
    let arrows: Vec<usize> = (0..g.num_arrows()).filter(|&x| !g.is_unit(x)).collect();
    let rows: usize = arrows.iter().map(|&x| a.fibers[g.src(x)].dim()).sum();
    let mut f = IntMatrix::zeros(rows, total);
    let mut cod_rel_cols: Vec<Vec<i64>> = Vec::new();
    let mut r0 = 0;
    for &arr in &arrows {
        let (x, y) = (g.src(arr), g.tgt(arr));
        let fx = &a.fibers[x];
        let m = &a.act[arr];
        for i in 0..fx.dim() {
            for j in 0..m.cols() {
                let v = f.get(r0 + i, offset[y] + j) + m.get(i, j);
                f.set(r0 + i, offset[y] + j, v);
            }
            let v = f.get(r0 + i, offset[x] + i) - 1;
            f.set(r0 + i, offset[x] + i, v);
            let t = fx.modulus(i);
            if t != 0 {
                let mut col = vec![0; rows];
                col[r0 + i] = t;
                cod_rel_cols.push(col);
            }
        }
        r0 += fx.dim();
    }
    let cod_rel = IntMatrix::from_columns(rows, &cod_rel_cols);
    let mut dom_rel_cols: Vec<Vec<i64>> = Vec::new();
    for (x, fx) in a.fibers.iter().enumerate() {
        for i in fx.rank..fx.dim() {
            let mut col = vec![0; total];
            col[offset[x] + i] = fx.modulus(i);
            dom_rel_cols.push(col);
        }
    }
    let dom_rel = IntMatrix::from_columns(total, &dom_rel_cols);
    Ok(subquotient(&f, &cod_rel, &IntMatrix::zeros(total, 0), &dom_rel)?)
}

/// `⊕` over orbit representatives of `H⁰(isotropy(x), A_x)`.
pub fn invariant_sections_by_orbits(a: &GModule) -> Result<AbelianGroup, GSpaceError> {
    let mut acc = AbelianGroup::zero();
    for orbit in a.base.orbits() {
        let h0 = group_cohomology(&a.stalk(orbit[0])?, 0, CohomologyOptions::default())?;
        acc = acc.direct_sum(&h0);
    }
    Ok(acc)
}

pub const DEFAULT_COCHAIN_BUDGET: usize = 20_000;
pub const MAX_COHOMOLOGY_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyOptions {
    /// Largest number of integer coordinates in a cochain group.
    pub budget: usize,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_COCHAIN_BUDGET,
        }
    }
}

/// Nonidentity elements, the alphabet of normalized cochains.
fn alphabet(k: &GroupDesc) -> Vec<usize> {
    (0..k.order()).filter(|&a| a != k.identity()).collect()
}

fn tuple_count(m: usize, n: usize, d: usize, budget: usize) -> Result<usize, GSpaceError> {
    let needed = (m as u128).saturating_pow(n as u32).saturating_mul(d as u128);
    if needed > budget as u128 {
        return Err(GSpaceError::BudgetExceeded { needed, budget });
    }
    Ok((needed as usize) / d.max(1))
}

/// Entries `(row, col, value)` of the normalized coboundary
/// `C^n -> C^{n+1}` for the left action `g·a = act(g⁻¹) a`, restricted to
/// the first `d` coordinates of the fiber.
fn coboundary_entries(m: &KModule, n: usize, d: usize, budget: usize) -> Result<(usize, usize, Vec<(usize, usize, i64)>), GSpaceError> {
    let k = &m.group;
    let alpha = alphabet(k);
    let ma = alpha.len();
    let mut pos = vec![usize::MAX; k.order()];
    for (i, &a) in alpha.iter().enumerate() {
        pos[a] = i;
    }
    let rows_t = tuple_count(ma, n + 1, d, budget)?;
    let cols_t = tuple_count(ma, n, d, budget)?;
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &a| acc * ma + pos[a]);
    let mut out = Vec::new();
    let mut tuple = vec![0usize; n + 1];
    for r in 0..rows_t {
        let mut code = r;
        for slot in tuple.iter_mut().rev() {
            *slot = alpha[code % ma];
            code /= ma;
        }
        let rb = r * d;
        // g1 · f(g2, ..., g_{n+1})
        let rho = &m.act[k.inv(tuple[0])];
        let cb = encode(&tuple[1..]) * d;
        for i in 0..d {
            for j in 0..d {
                let v = *rho.get(i, j);
                if v != 0 {
                    out.push((rb + i, cb + j, v));
                }
            }
        }
        let mut merged = Vec::with_capacity(n);
        for i in 1..=n {
            let p = k.mul(tuple[i - 1], tuple[i]);
            if p == k.identity() {
                continue;
            }
            merged.clear();
            merged.extend_from_slice(&tuple[..i - 1]);
            merged.push(p);
            merged.extend_from_slice(&tuple[i + 1..]);
            let cb = encode(&merged) * d;
            let s = if i % 2 == 0 { 1 } else { -1 };
            for c in 0..d {
                out.push((rb + c, cb + c, s));
            }
        }
        let cb = encode(&tuple[..n]) * d;
        let s = if (n + 1) % 2 == 0 { 1 } else { -1 };
        for c in 0..d {
            out.push((rb + c, cb + c, s));
        }
    }
    Ok((rows_t * d, cols_t * d, out))
}

fn coboundary(m: &KModule, n: usize, budget: usize) -> Result<IntMatrix<i64>, GSpaceError> {
    let d = m.fiber.dim();
    let (rows, cols, entries) = coboundary_entries(m, n, d, budget)?;
    let mut out = IntMatrix::<i64>::zeros(rows, cols);
    for (i, j, v) in entries {
        let s = out
            .get(i, j)
            .checked_add(v)
            .ok_or_else(|| GSpaceError::Module("coefficient overflow".into()))?;
        out.set(i, j, s);
    }
    Ok(out)
}

fn check_degree(n: usize) -> Result<(), GSpaceError> {
    if n > MAX_COHOMOLOGY_DEGREE {
        Err(GSpaceError::DegreeTooLarge)
    } else {
        Ok(())
    }
}

/// `H^n(K, M)` from normalized inhomogeneous cochains.
pub fn group_cohomology(m: &KModule, n: usize, opts: CohomologyOptions) -> Result<AbelianGroup, GSpaceError> {
    check_degree(n)?;
    let d = m.fiber.dim();
    let ma = m.group.order() - 1;
    let delta = coboundary(m, n, opts.budget)?;
    let incoming = if n == 0 {
        IntMatrix::zeros(d, 0)
    } else {
        coboundary(m, n - 1, opts.budget)?
    };
    let copies = |deg: usize| ma.pow(deg as u32);
    let dom_rel = diagonal_relations(m.fiber.rank, &m.fiber.torsion, copies(n));
    let cod_rel = diagonal_relations(m.fiber.rank, &m.fiber.torsion, copies(n + 1));
    Ok(subquotient(&delta, &cod_rel, &incoming, &dom_rel)?)
}

/// `dim_Q H^n(K, M ⊗ Q)`; torsion in the fiber disappears.
pub fn group_cohomology_rational(m: &KModule, n: usize, opts: CohomologyOptions) -> Result<usize, GSpaceError> {
    check_degree(n)?;
    let r = m.fiber.rank;
    if r == 0 {
        return Ok(0);
    }
    let rank_of = |deg: usize| -> Result<(usize, usize), GSpaceError> {
        let (rows, cols, entries) = coboundary_entries(m, deg, r, opts.budget)?;
        let mut by_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            by_row[i].push((j, Rational::from_integer(v.into())));
        }
        let mut e = SparseEchelon::new();
        for row in by_row {
            e.insert(row);
        }
        Ok((cols, e.rank()))
    };
    let (cols, rank_n) = rank_of(n)?;
    let rank_prev = if n == 0 { 0 } else { rank_of(n - 1)?.1 };
    Ok(cols - rank_n - rank_prev)
}

/// The stalk at `x` of the `i`-th derived direct image to the orbit space:
/// `H^i(isotropy(x), A_x)`.
pub fn stalk_derived_q(a: &GModule, x: usize, i: usize, opts: CohomologyOptions) -> Result<AbelianGroup, GSpaceError> {
    group_cohomology(&a.stalk(x)?, i, opts)
}

/// Rational version of [`stalk_derived_q`], as a dimension.
pub fn stalk_derived_q_rational(a: &GModule, x: usize, i: usize, opts: CohomologyOptions) -> Result<usize, GSpaceError> {
    group_cohomology_rational(&a.stalk(x)?, i, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{action_groupoid, group_as_groupoid, swap_action, unit_groupoid};

    fn z2() -> GroupDesc {
        GroupDesc::cyclic(2)
    }

    fn sign_z() -> KModule {
        KModule::sign(z2(), &[0], FiberGroup::free(1)).unwrap()
    }

    fn h(m: &KModule, n: usize) -> AbelianGroup {
        group_cohomology(m, n, CohomologyOptions::default()).unwrap()
    }

    #[test]
    fn invariant_sections_examples() {
        let u = GModule::constant(Arc::new(unit_groupoid(2)), FiberGroup::free(1));
        assert_eq!(invariant_sections(&u).unwrap(), AbelianGroup::free(2));
        // swap on {a, b}, fibers Z exchanged: the diagonal
        let s = GModule::constant(Arc::new(action_groupoid(&swap_action())), FiberGroup::free(1));
        assert!(validate_gmodule(&s).is_valid());
        assert_eq!(invariant_sections(&s).unwrap(), AbelianGroup::free(1));
        let sign = GModule::from_group_module(&sign_z());
        assert!(validate_gmodule(&sign).is_valid());
        assert_eq!(invariant_sections(&sign).unwrap(), AbelianGroup::zero());
    }

    #[test]
    fn cohomology_of_z2() {
        let tz = KModule::trivial(z2(), FiberGroup::free(1));
        assert_eq!(h(&tz, 0), AbelianGroup::free(1));
        assert_eq!(h(&tz, 1), AbelianGroup::zero());
        assert_eq!(h(&tz, 2), AbelianGroup::cyclic(2));
        assert_eq!(h(&tz, 3), AbelianGroup::zero());
        let t2 = KModule::trivial(z2(), FiberGroup::cyclic(2));
        for n in 0..=3 {
            assert_eq!(h(&t2, n), AbelianGroup::cyclic(2));
        }
        let s = sign_z();
        assert_eq!(h(&s, 0), AbelianGroup::zero());
        assert_eq!(h(&s, 1), AbelianGroup::cyclic(2));
        assert_eq!(h(&s, 2), AbelianGroup::zero());
    }

    #[test]
    fn stalks_and_rational_vanishing() {
        let a = GModule::from_group_module(&sign_z());
        let opts = CohomologyOptions::default();
        assert_eq!(stalk_derived_q(&a, 0, 1, opts).unwrap(), AbelianGroup::cyclic(2));
        for i in 1..=3 {
            assert_eq!(stalk_derived_q_rational(&a, 0, i, opts).unwrap(), 0);
        }
        let t = GModule::constant(Arc::new(group_as_groupoid(&GroupDesc::symmetric(3))), FiberGroup::free(2));
        assert_eq!(stalk_derived_q_rational(&t, 0, 0, opts).unwrap(), 2);
        assert_eq!(stalk_derived_q_rational(&t, 0, 2, opts).unwrap(), 0);
    }

    #[test]
    fn orbit_decomposition_matches() {
        let g = Arc::new(action_groupoid(&crate::constructors::negation_action()));
        let fibers = vec![FiberGroup::free(1); 3];
        let a = GModule::from_fn(g.clone(), fibers, |arr| {
            // the flip acts by -1 everywhere
            IntMatrix::from_rows(vec![vec![if g.is_unit(arr) { 1 } else { -1 }]])
        })
        .unwrap();
        assert!(validate_gmodule(&a).is_valid());
        assert_eq!(invariant_sections(&a).unwrap(), invariant_sections_by_orbits(&a).unwrap());
        assert_eq!(invariant_sections(&a).unwrap(), AbelianGroup::free(1));
    }

    #[test]
    fn bad_modules_are_reported() {
        let base = Arc::new(group_as_groupoid(&z2()));
        // the flip acting by 2 on Z is not invertible
        let a = GModule::from_fn(base.clone(), vec![FiberGroup::free(1)], |g| {
            IntMatrix::from_rows(vec![vec![if g == 0 { 1 } else { 2 }]])
        })
        .unwrap();
        let report = validate_gmodule(&a);
        assert!(report.iter().any(|v| v.axiom() == "inverse"));
        // Z/2 -> Z sending the generator to 1 is not well defined
        let g = Arc::new(crate::constructors::pair_groupoid(2));
        let b = GModule::from_fn(g, vec![FiberGroup::cyclic(2), FiberGroup::free(1)], |_| {
            IntMatrix::from_rows(vec![vec![1]])
        })
        .unwrap();
        assert!(validate_gmodule(&b).iter().any(|v| v.axiom() == "well-defined"));
    }

    #[test]
    fn budget_and_degree_caps() {
        let s3 = KModule::trivial(GroupDesc::symmetric(3), FiberGroup::free(1));
        let tight = CohomologyOptions { budget: 100 };
        assert!(matches!(group_cohomology(&s3, 3, tight), Err(GSpaceError::BudgetExceeded { .. })));
        assert!(matches!(group_cohomology(&s3, 4, CohomologyOptions::default()), Err(GSpaceError::DegreeTooLarge)));
    }
}
