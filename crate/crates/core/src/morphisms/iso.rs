//! Isomorphism search between small finite groups.
//!
//! Candidates are enumerated as images of a fixed generating set, pruned by
//! element orders, and each partial assignment is extended along the Cayley
//! graph of the subgroup it generates. The first witness in lexicographic
//! order of generator images is returned.

use crate::group::GroupDesc;

/// A bijection between the elements of two groups preserving products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupIso {
    forward: Vec<usize>,
}

impl GroupIso {
    /// Wraps `forward` if it really is an isomorphism `a -> b`.
    pub fn new(a: &GroupDesc, b: &GroupDesc, forward: Vec<usize>) -> Option<Self> {
        let n = a.order();
        if forward.len() != n || b.order() != n {
            return None;
        }
        let mut hit = vec![false; n];
        for &y in &forward {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return None;
            }
        }
        for x in 0..n {
            for y in 0..n {
                if forward[a.mul(x, y)] != b.mul(forward[x], forward[y]) {
                    return None;
                }
            }
        }
        Some(Self { forward })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> GroupIso {
        let mut back = vec![0; self.forward.len()];
        for (x, &y) in self.forward.iter().enumerate() {
            back[y] = x;
        }
        GroupIso { forward: back }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupIso) -> GroupIso {
        GroupIso {
            forward: self.forward.iter().map(|&y| other.forward[y]).collect(),
        }
    }

    /// Name pairs `(a-element, b-element)` in `a`'s element order.
    pub fn named_pairs(&self, a: &GroupDesc, b: &GroupDesc) -> Vec<(String, String)> {
        self.forward
            .iter()
            .enumerate()
            .map(|(x, &y)| (a.name(x).to_string(), b.name(y).to_string()))
            .collect()
    }
}

/// Extends the images of `gens[..k]` to the subgroup they generate.
/// Returns `None` on an inconsistency or a collision (non-injective).
fn extend(a: &GroupDesc, b: &GroupDesc, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = a.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.identity()] = b.identity();
    used[b.identity()] = true;
    let mut frontier = vec![a.identity()];
    let mut i = 0;
    while i < frontier.len() {
        let x = frontier[i];
        for (&s, &t) in gens.iter().zip(images) {
            let xs = a.mul(x, s);
            let want = b.mul(map[x], t);
            if map[xs] == usize::MAX {
                if used[want] {
                    return None;
                }
                map[xs] = want;
                used[want] = true;
                frontier.push(xs);
            } else if map[xs] != want {
                return None;
            }
        }
        i += 1;
    }
    Some(map)
}

fn search(
    a: &GroupDesc,
    b: &GroupDesc,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    if k == gens.len() {
        let map = extend(a, b, gens, images)?;
        return (!map.contains(&usize::MAX)).then_some(map);
    }
    for &c in &candidates[k] {
        images.push(c);
        // prune on the partial subgroup before going deeper
        if extend(a, b, &gens[..=k], images).is_some() {
            if let Some(found) = search(a, b, gens, candidates, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// An isomorphism `a -> b` if one exists.
pub fn groups_isomorphic(a: &GroupDesc, b: &GroupDesc) -> Option<GroupIso> {
    if a.order() != b.order()
        || a.order_profile() != b.order_profile()
        || a.is_abelian() != b.is_abelian()
        || a.conjugacy_classes().len() != b.conjugacy_classes().len()
    {
        return None;
    }
    let gens = a.generators();
    let b_orders: Vec<usize> = (0..b.order()).map(|y| b.element_order(y)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = a.element_order(s);
            (0..b.order()).filter(|&y| b_orders[y] == o).collect()
        })
        .collect();
    let map = search(a, b, &gens, &candidates, &mut Vec::with_capacity(gens.len()))?;
    GroupIso::new(a, b, map)
}
