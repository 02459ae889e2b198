//! Standard groupoids: unit, pair, groups and action groupoids.
//!
//! Naming scheme for generated identifiers: the unit at `x` is `id_x`
//! (unit and pair groupoids), the pair arrow `x -> y` is `x>y`, and the
//! action arrow `(k, x): x -> k·x` is `(k,x)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::category::FiniteCategory;
use crate::group::GroupDesc;
use crate::groupoid::FiniteGroupoid;

/// A left action of a finite group on a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: GroupDesc,
    carrier: Vec<String>,
    act: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("action entry {0} is out of range")]
    OutOfRange(usize),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("identity moves `{0}`")]
    Identity(String),
    #[error("k·(l·x) != (kl)·x for k = {k}, l = {l}, x = {x}")]
    Compatibility { k: String, l: String, x: String },
}

impl GroupAction {
    /// `act[k * |carrier| + x]` is the index of `k·x`.
    pub fn new(group: GroupDesc, carrier: Vec<String>, act: Vec<usize>) -> Result<Self, ActionError> {
        let (n, m) = (group.order(), carrier.len());
        if act.len() != n * m {
            return Err(ActionError::TableSize {
                expected: n * m,
                found: act.len(),
            });
        }
        if let Some(&p) = act.iter().find(|&&p| p >= m) {
            return Err(ActionError::OutOfRange(p));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &carrier {
            if !seen.insert(p) {
                return Err(ActionError::DuplicatePoint(p.clone()));
            }
        }
        let a = GroupAction { group, carrier, act };
        let e = a.group.identity();
        for x in 0..m {
            if a.apply(e, x) != x {
                return Err(ActionError::Identity(a.carrier[x].clone()));
            }
        }
        for k in 0..n {
            for l in 0..n {
                let kl = a.group.mul(k, l);
                for x in 0..m {
                    if a.apply(k, a.apply(l, x)) != a.apply(kl, x) {
                        return Err(ActionError::Compatibility {
                            k: a.group.name(k).into(),
                            l: a.group.name(l).into(),
                            x: a.carrier[x].clone(),
                        });
                    }
                }
            }
        }
        Ok(a)
    }

    /// The trivial action of `group` on `carrier`.
    pub fn trivial(group: GroupDesc, carrier: Vec<String>) -> Self {
        let m = carrier.len();
        let act = (0..group.order() * m).map(|i| i % m).collect();
        Self::new(group, carrier, act).expect("trivial action")
    }

    /// The action of a group on itself by left multiplication.
    pub fn regular(group: GroupDesc) -> Self {
        let n = group.order();
        let carrier = group.names().to_vec();
        let act = (0..n * n).map(|i| group.mul(i / n, i % n)).collect();
        Self::new(group, carrier, act).expect("regular action")
    }

    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    #[inline]
    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.act[k * self.carrier.len() + x]
    }

    /// `{k | k·x = x}`, ascending.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&k| self.apply(k, x) == x).collect()
    }
}

fn pair_on(objects: Vec<String>, only_units: bool) -> FiniteGroupoid {
    let n = objects.len();
    let mut arrows = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut id = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if only_units && x != y {
                continue;
            }
            id.insert((x, y), arrows.len());
            arrows.push(if x == y {
                format!("id_{}", objects[x])
            } else {
                format!("{}>{}", objects[x], objects[y])
            });
            src.push(x);
            tgt.push(y);
        }
    }
    let mut compose = HashMap::new();
    for (&(x, y), &g) in &id {
        for z in 0..n {
            if let Some(&h) = id.get(&(y, z)) {
                compose.insert((h, g), id[&(x, z)]);
            }
        }
    }
    let unit = (0..n).map(|x| id[&(x, x)]).collect();
    let inv = (0..arrows.len()).map(|a| id[&(tgt[a], src[a])]).collect();
    let cat = FiniteCategory::from_parts(objects, arrows, src, tgt, unit, compose)
        .expect("pair groupoid tables");
    FiniteGroupoid::from_parts(cat, inv).expect("pair groupoid inverse")
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// `n` objects named `1..=n`, only unit arrows.
pub fn unit_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n >= 1, "unit groupoid needs n >= 1");
    pair_on(numbered(n), true)
}

pub fn unit_groupoid_on(objects: Vec<String>) -> FiniteGroupoid {
    pair_on(objects, true)
}

/// `n` objects named `1..=n`, exactly one arrow between any ordered pair.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n >= 1, "pair groupoid needs n >= 1");
    pair_on(numbered(n), false)
}

pub fn pair_groupoid_on(objects: Vec<String>) -> FiniteGroupoid {
    pair_on(objects, false)
}

/// A group as a one-object groupoid; the object is `*` and arrows carry
/// the element names.
pub fn group_as_groupoid(k: &GroupDesc) -> FiniteGroupoid {
    let n = k.order();
    let mut compose = HashMap::with_capacity(n * n);
    for h in 0..n {
        for g in 0..n {
            compose.insert((h, g), k.mul(h, g));
        }
    }
    let cat = FiniteCategory::from_parts(
        vec!["*".into()],
        k.names().to_vec(),
        vec![0; n],
        vec![0; n],
        vec![k.identity()],
        compose,
    )
    .expect("group tables");
    FiniteGroupoid::from_parts(cat, (0..n).map(|a| k.inv(a)).collect()).expect("group inverse")
}

/// The translation groupoid `K ⋉ M`: arrows `(k, x): x -> k·x`.
pub fn action_groupoid(a: &GroupAction) -> FiniteGroupoid {
    let k = a.group();
    let m = a.carrier().len();
    let arrow = |g: usize, x: usize| g * m + x;
    let mut arrows = Vec::with_capacity(k.order() * m);
    let mut src = Vec::with_capacity(k.order() * m);
    let mut tgt = Vec::with_capacity(k.order() * m);
    for g in 0..k.order() {
        for x in 0..m {
            arrows.push(format!("({},{})", k.name(g), a.carrier()[x]));
            src.push(x);
            tgt.push(a.apply(g, x));
        }
    }
    let mut compose = HashMap::with_capacity(k.order() * k.order() * m);
    // (h, g·x) ∘ (g, x) = (hg, x)
    for g in 0..k.order() {
        for x in 0..m {
            let y = a.apply(g, x);
            for h in 0..k.order() {
                compose.insert((arrow(h, y), arrow(g, x)), arrow(k.mul(h, g), x));
            }
        }
    }
    let unit = (0..m).map(|x| arrow(k.identity(), x)).collect();
    let inv = (0..k.order() * m)
        .map(|i| {
            let (g, x) = (i / m, i % m);
            arrow(k.inv(g), a.apply(g, x))
        })
        .collect();
    let cat = FiniteCategory::from_parts(a.carrier().to_vec(), arrows, src, tgt, unit, compose)
        .expect("action groupoid tables");
    FiniteGroupoid::from_parts(cat, inv).expect("action groupoid inverse")
}

/// Z/2 acting on `{-1, 0, 1}` by negation.
pub fn negation_action() -> GroupAction {
    let carrier = vec!["-1".to_string(), "0".to_string(), "1".to_string()];
    // element 0 = identity, 1 = flip
    GroupAction::new(GroupDesc::cyclic(2), carrier, vec![0, 1, 2, 2, 1, 0]).expect("negation")
}

/// Z/2 swapping `{a, b}`.
pub fn swap_action() -> GroupAction {
    GroupAction::new(GroupDesc::cyclic(2), vec!["a".into(), "b".into()], vec![0, 1, 1, 0])
        .expect("swap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_groupoid;

    #[test]
    fn unit_groupoid_shapes() {
        let g = unit_groupoid(1);
        assert_eq!((g.num_objects(), g.num_arrows()), (1, 1));
        let g3 = unit_groupoid(3);
        assert_eq!(g3.orbits(), vec![vec![0], vec![1], vec![2]]);
        for x in 0..3 {
            assert_eq!(g3.isotropy(x).unwrap().order(), 1);
        }
        assert!(validate_groupoid(&unit_groupoid(5)).is_valid());
    }

    #[test]
    fn pair_groupoid_shapes() {
        assert_eq!(pair_groupoid(1), unit_groupoid(1));
        let g = pair_groupoid(3);
        assert_eq!(g.num_arrows(), 9);
        assert_eq!(g.num_orbits(), 1);
        assert!((0..3).all(|x| g.isotropy(x).unwrap().order() == 1));
        assert_eq!(pair_groupoid(5).num_orbits(), 1);
        assert!(pair_groupoid(4).isotropy(2).unwrap().order() == 1);
    }

    #[test]
    fn pair_composition_table() {
        // brute force: (z,y)(y,x) = (z,x)
        let g = pair_groupoid(2);
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let f = g.arrow_between(x, y).unwrap();
                    let h = g.arrow_between(y, z).unwrap();
                    assert_eq!(g.compose(h, f), g.arrow_between(x, z));
                }
            }
        }
    }

    #[test]
    fn group_as_groupoid_shapes() {
        assert_eq!(group_as_groupoid(&GroupDesc::trivial()).num_arrows(), 1);
        let z2 = group_as_groupoid(&GroupDesc::cyclic(2));
        assert_eq!(z2.num_arrows(), 2);
        assert_eq!(z2.isotropy(0).unwrap().order(), 2);
        let s3 = group_as_groupoid(&GroupDesc::symmetric(3));
        assert_eq!(s3.num_arrows(), 6);
        assert!(validate_groupoid(&s3).is_valid());
    }

    #[test]
    fn swap_action_groupoid() {
        let g = action_groupoid(&swap_action());
        assert_eq!(g.num_arrows(), 4);
        assert_eq!(g.num_orbits(), 1);
        assert_eq!(g.isotropy(0).unwrap().order(), 1);
        assert_eq!(g.isotropy(1).unwrap().order(), 1);
        assert!(validate_groupoid(&g).is_valid());
    }

    #[test]
    fn negation_action_groupoid() {
        let g = action_groupoid(&negation_action());
        assert!(validate_groupoid(&g).is_valid());
        assert_eq!(g.orbits(), vec![vec![0, 2], vec![1]]);
        assert_eq!(g.isotropy_named("0").unwrap().order(), 2);
        assert_eq!(g.isotropy_named("1").unwrap().order(), 1);
        assert_eq!(g.isotropy_named("-1").unwrap().order(), 1);
        let at_zero = g.restrict_named(&["0"]).unwrap();
        assert_eq!(at_zero.num_arrows(), 2);
        assert_eq!(at_zero.isotropy(0).unwrap().order(), 2);
    }

    #[test]
    fn trivial_group_action_is_unit_groupoid() {
        let a = GroupAction::trivial(GroupDesc::trivial(), vec!["p".into(), "q".into()]);
        let g = action_groupoid(&a);
        assert_eq!(g.num_arrows(), 2);
        assert_eq!(g.num_orbits(), 2);
        assert!((0..2).all(|a| g.is_unit(a)));
    }

    #[test]
    fn invalid_actions_rejected() {
        let z2 = GroupDesc::cyclic(2);
        assert!(matches!(
            GroupAction::new(z2.clone(), vec!["a".into()], vec![0]),
            Err(ActionError::TableSize { .. })
        ));
        // identity swapping points
        assert!(matches!(
            GroupAction::new(z2, vec!["a".into(), "b".into()], vec![1, 0, 1, 0]),
            Err(ActionError::Identity(_))
        ));
    }
}
