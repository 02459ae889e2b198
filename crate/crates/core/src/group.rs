//! Finite groups given by explicit multiplication tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("table entry {0} is out of range")]
    EntryOutOfRange(usize),
    #[error("`{0}` is not a two-sided identity")]
    IdentityLaw(String),
    #[error("`{0}` has no inverse")]
    NoInverse(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("subset is not closed under multiplication: {0} * {1}")]
    NotClosed(String, String),
    #[error("permutation on {points} points is malformed")]
    BadPermutation { points: usize },
    #[error("generated group exceeds the size cap of {0}")]
    TooLarge(usize),
}

/// A finite group: element names, a total multiplication table and the
/// identity. Values of this type always satisfy the group axioms.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupDesc {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl fmt::Debug for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupDesc")
            .field("order", &self.order())
            .field("elements", &self.names)
            .finish()
    }
}

impl GroupDesc {
    /// Builds a group from a row-major table (`table[a * n + b] = a * b`).
    pub fn from_table(
        names: Vec<String>,
        identity: usize,
        table: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(GroupError::DuplicateElement(name.clone()));
            }
        }
        if table.len() != n * n {
            return Err(GroupError::TableSize {
                expected: n * n,
                found: table.len(),
            });
        }
        if identity >= n {
            return Err(GroupError::EntryOutOfRange(identity));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= n) {
            return Err(GroupError::EntryOutOfRange(bad));
        }
        for a in 0..n {
            if table[identity * n + a] != a || table[a * n + identity] != a {
                return Err(GroupError::IdentityLaw(names[identity].clone()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            match row.iter().position(|&c| c == identity) {
                Some(b) if table[b * n + a] == identity => inverse[a] = b,
                _ => return Err(GroupError::NoInverse(names[a].clone())),
            }
        }
        let group = GroupDesc {
            names,
            table,
            identity,
            inverse,
        };
        group.check_associative()?;
        Ok(group)
    }

    /// Light's test: associativity on all (x, s, y) with s ranging over a
    /// generating set implies associativity everywhere.
    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order();
        for s in self.magma_generators() {
            for x in 0..n {
                let xs = self.mul(x, s);
                for y in 0..n {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Err(GroupError::NotAssociative(
                            self.names[x].clone(),
                            self.names[s].clone(),
                            self.names[y].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedy generating set for the table viewed as a magma: every element
    /// is a product (in some bracketing) of the returned elements.
    fn magma_generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut reached = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let mut gens = Vec::new();
        for candidate in 0..n {
            if reached[candidate] {
                continue;
            }
            gens.push(candidate);
            reached[candidate] = true;
            members.push(candidate);
            // close under products with everything reached so far
            let mut i = 0;
            while i < members.len() {
                let a = members[i];
                let mut j = 0;
                while j <= i {
                    let b = members[j];
                    for c in [self.mul(a, b), self.mul(b, a)] {
                        if !reached[c] {
                            reached[c] = true;
                            members.push(c);
                        }
                    }
                    j += 1;
                }
                i += 1;
            }
        }
        gens
    }

    /// The group of permutations of `points` generated by `generators`
    /// (each generator lists the image index of every point). Elements are
    /// named in cycle notation over the point names; the identity is `e`.
    pub fn from_permutations(
        points: &[String],
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        let m = points.len();
        for g in generators {
            let mut hit = vec![false; m];
            if g.len() != m || g.iter().any(|&p| p >= m || std::mem::replace(&mut hit[p], true)) {
                return Err(GroupError::BadPermutation { points: m });
            }
        }
        let id: Vec<usize> = (0..m).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                // apply elems[i] first, then g
                let next: Vec<usize> = elems[i].iter().map(|&p| g[p]).collect();
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    index.insert(next.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                // a * b is "a after b", so points carry a left action
                let ab: Vec<usize> = (0..m).map(|p| a[b[p]]).collect();
                table.push(index[&ab]);
            }
        }
        let names = elems.iter().map(|p| cycle_notation(p, points)).collect();
        Self::from_table(names, 0, table)
    }

    pub fn trivial() -> Self {
        Self::from_table(vec!["e".into()], 0, vec![0]).expect("trivial group")
    }

    /// Z/n with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_table(names, 0, table).expect("cyclic group")
    }

    /// Symmetric group on `1..=n`, generated by (1 2) and (1 2 ... n).
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1, "symmetric group needs n >= 1");
        let points: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(&points, &gens, usize::MAX).expect("symmetric group")
    }

    /// Dihedral group of order 2n acting on the vertices `1..=n` of an n-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let points: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let rot = (0..n).map(|i| (i + 1) % n).collect();
        let refl = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&points, &[rot, refl], usize::MAX).expect("dihedral group")
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // unit index u in {1,i,j,k} and sign bit; element = sign * unit
        const UNITS: [&str; 4] = ["1", "i", "j", "k"];
        // product of units: (sign, unit)
        const MUL: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut names = Vec::new();
        for u in UNITS {
            names.push(u.to_string());
            names.push(format!("-{u}"));
        }
        let idx = |neg: bool, u: usize| 2 * u + usize::from(neg);
        let mut table = vec![0; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (s, u) = MUL[a / 2][b / 2];
                let neg = s ^ (a % 2 == 1) ^ (b % 2 == 1);
                table[a * 8 + b] = idx(neg, u);
            }
        }
        Self::from_table(names, 0, table).expect("quaternion group")
    }

    pub fn direct_product(a: &GroupDesc, b: &GroupDesc) -> Self {
        let (n, m) = (a.order(), b.order());
        let names = (0..n * m)
            .map(|k| format!("({},{})", a.name(k / m), b.name(k % m)))
            .collect();
        let mut table = Vec::with_capacity(n * n * m * m);
        for x in 0..n * m {
            for y in 0..n * m {
                table.push(a.mul(x / m, y / m) * m + b.mul(x % m, y % m));
            }
        }
        Self::from_table(names, a.identity() * m + b.identity(), table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut p = a;
        while p != self.identity {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    /// Sorted list of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `b^{-1} a b`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// Elements of the subgroup generated by `gens`, in discovery order.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.identity];
        seen[self.identity] = true;
        let mut i = 0;
        while i < out.len() {
            let a = out[i];
            for &g in gens {
                let c = self.mul(a, g);
                if !seen[c] {
                    seen[c] = true;
                    out.push(c);
                }
            }
            i += 1;
        }
        out
    }

    /// A small generating set chosen greedily, preferring elements of
    /// large order. Deterministic.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.order()).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        for a in by_order {
            if inside[a] {
                continue;
            }
            gens.push(a);
            for b in self.generated_subgroup(&gens) {
                inside[b] = true;
            }
        }
        gens
    }

    /// Orbits of the conjugation action, each sorted, ordered by least
    /// element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|b| self.conjugate(a, b)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    /// Elements commuting with `g`, ascending.
    pub fn centralizer_elements(&self, g: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect()
    }

    /// Number of ordered commuting pairs `(a, b)`.
    pub fn commuting_pairs(&self) -> usize {
        let n = self.order();
        (0..n)
            .map(|a| (0..n).filter(|&b| self.mul(a, b) == self.mul(b, a)).count())
            .sum()
    }

    /// The subgroup on `elements` (indices into this group) with the
    /// induced table; element names are kept.
    pub fn subgroup(&self, elements: &[usize]) -> Result<GroupDesc, GroupError> {
        let mut pos = HashMap::with_capacity(elements.len());
        for (i, &a) in elements.iter().enumerate() {
            pos.insert(a, i);
        }
        let identity = *pos
            .get(&self.identity)
            .ok_or_else(|| GroupError::NotClosed(self.name(self.identity).into(), "".into()))?;
        let mut table = Vec::with_capacity(elements.len() * elements.len());
        for &a in elements {
            for &b in elements {
                let c = self.mul(a, b);
                match pos.get(&c) {
                    Some(&i) => table.push(i),
                    None => {
                        return Err(GroupError::NotClosed(
                            self.name(a).into(),
                            self.name(b).into(),
                        ))
                    }
                }
            }
        }
        let names = elements.iter().map(|&a| self.names[a].clone()).collect();
        GroupDesc::from_table(names, identity, table)
    }

    /// Every subgroup as a sorted element list, smallest first. Built as
    /// joins of cyclic subgroups until nothing new appears.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        let mut all: Vec<Vec<usize>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in 0..self.order() {
            let h = sorted(self.generated_subgroup(&[a]));
            if seen.insert(h.clone()) {
                all.push(h);
            }
        }
        let cyclic = all.clone();
        let mut i = 0;
        while i < all.len() {
            for c in &cyclic {
                let mut gens = all[i].clone();
                gens.extend_from_slice(c);
                let h = sorted(self.generated_subgroup(&gens));
                if seen.insert(h.clone()) {
                    all.push(h);
                }
            }
            i += 1;
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Same group with every element renamed through `rename`.
    pub fn relabeled(&self, rename: impl Fn(usize, &str) -> String) -> Result<GroupDesc, GroupError> {
        let names = self.names.iter().enumerate().map(|(i, n)| rename(i, n)).collect();
        GroupDesc::from_table(names, self.identity, self.table.clone())
    }
}

/// Cycle notation for a permutation given as an image list, e.g. `(1 2 3)`.
pub fn cycle_notation(perm: &[usize], points: &[String]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut p = start;
        let mut first = true;
        while !seen[p] {
            seen[p] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&points[p]);
            first = false;
            p = perm[p];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}
