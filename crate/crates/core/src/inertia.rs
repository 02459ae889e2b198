//! Loops, the inertia groupoid, convolution algebras, and the degree-0
//! rank counts attached to a finite groupoid.

use std::collections::HashMap;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_traits::Zero;

use crate::group::GroupDesc;
use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::gspaces::{translation_groupoid, FiniteGSpace, GSpaceError};
use crate::linalg::SparseEchelon;
use crate::morphisms::GroupoidHom;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InertiaError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    GSpace(#[from] GSpaceError),
    #[error("convolution is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
}

/// Self-arrows of `G` as a G-space under conjugation: for a loop `e` at
/// `y` and `h: x -> y`, `e·h = h⁻¹ e h`, a loop at `x`.
#[derive(Debug, Clone)]
pub struct LoopSpace {
    space: FiniteGSpace,
    /// arrow index of each point
    loops: Vec<usize>,
}

impl LoopSpace {
    pub fn space(&self) -> &FiniteGSpace {
        &self.space
    }

    /// Arrow indices of the loops, ascending.
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// The object a loop is based at.
    pub fn base_point(&self, i: usize) -> usize {
        self.space.proj(i)
    }

    /// Index of `h⁻¹ e h` where `e` is the `i`-th loop.
    pub fn conjugate(&self, i: usize, h: usize) -> Option<usize> {
        self.space.apply(i, h)
    }
}

pub fn loop_space(g: &Arc<FiniteGroupoid>) -> LoopSpace {
    let loops: Vec<usize> = (0..g.num_arrows()).filter(|&a| g.src(a) == g.tgt(a)).collect();
    let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let points = loops.iter().map(|&a| g.arrow_name(a).to_string()).collect();
    let proj = loops.iter().map(|&a| g.src(a)).collect();
    let gg = g.clone();
    let lp = loops.clone();
    let space = FiniteGSpace::from_fn(g.clone(), points, proj, move |i, h| {
        pos[&gg.comp(gg.inv(h), gg.comp(lp[i], h))]
    })
    .expect("conjugation is defined on every composable pair");
    LoopSpace { space, loops }
}

/// `Λ(G)`, the translation groupoid of the loop space, with the map to `G`
/// sending an arrow `(e, h)` to `h`.
pub fn inertia_groupoid(g: &Arc<FiniteGroupoid>) -> Result<(Arc<FiniteGroupoid>, GroupoidHom), InertiaError> {
    Ok(translation_groupoid(loop_space(g).space())?)
}

pub fn conjugacy_classes(k: &GroupDesc) -> Vec<Vec<usize>> {
    k.conjugacy_classes()
}

/// `Z(g) = {h | hg = gh}` as a group, with the names of `k`.
pub fn centralizer(k: &GroupDesc, g: &str) -> Result<GroupDesc, InertiaError> {
    let a = k.index_of(g).ok_or_else(|| InertiaError::UnknownElement(g.to_string()))?;
    Ok(k.subgroup(&k.centralizer_elements(a)).expect("centralizers are subgroups"))
}

/// Functions on arrows with `(α·β)(g) = Σ_{g = h∘k} α(h) β(k)`.
#[derive(Debug, Clone)]
pub struct ConvolutionAlgebra {
    basis: Vec<String>,
    /// for each arrow `g`, all `(h, k)` with `h ∘ k = g`
    factorizations: Vec<Vec<(usize, usize)>>,
    /// `e_h · e_k = e_{h∘k}` when composable
    product: HashMap<(usize, usize), usize>,
}

impl ConvolutionAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn factorizations(&self, g: usize) -> &[(usize, usize)] {
        &self.factorizations[g]
    }

    /// `e_a · e_b` as a basis index, or `None` for zero.
    pub fn basis_product(&self, a: usize, b: usize) -> Option<usize> {
        self.product.get(&(a, b)).copied()
    }

    /// Convolution of coefficient vectors over any ring.
    pub fn multiply<T>(&self, a: &[T], b: &[T]) -> Vec<T>
    where
        T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
    {
        assert_eq!(a.len(), self.dim(), "coefficient vector length");
        assert_eq!(b.len(), self.dim(), "coefficient vector length");
        self.factorizations
            .iter()
            .map(|fs| {
                fs.iter()
                    .fold(T::zero(), |acc, &(h, k)| acc + a[h].clone() * b[k].clone())
            })
            .collect()
    }

    /// First basis triple where `(e_a e_b) e_c ≠ e_a (e_b e_c)`.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = self.basis_product(a, b);
                for c in 0..n {
                    let left = ab.and_then(|ab| self.basis_product(ab, c));
                    let right = self.basis_product(b, c).and_then(|bc| self.basis_product(a, bc));
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// Structure constants of the convolution algebra; associativity is
/// checked on all basis triples.
pub fn convolution_algebra(g: &FiniteGroupoid) -> Result<ConvolutionAlgebra, InertiaError> {
    let n = g.num_arrows();
    let mut factorizations = vec![Vec::new(); n];
    let mut pairs: Vec<(&(usize, usize), &usize)> = g.composition_table().iter().collect();
    pairs.sort();
    let mut product = HashMap::with_capacity(pairs.len());
    for (&(h, k), &c) in pairs {
        factorizations[c].push((h, k));
        product.insert((h, k), c);
    }
    let alg = ConvolutionAlgebra {
        basis: g.arrows().to_vec(),
        factorizations,
        product,
    };
    if let Some((a, b, c)) = alg.associativity_failure() {
        return Err(InertiaError::NotAssociative(
            alg.basis[a].clone(),
            alg.basis[b].clone(),
            alg.basis[c].clone(),
        ));
    }
    Ok(alg)
}

/// Dimension over the rationals of the center, from the commutation
/// equations `z e_b = e_b z`.
pub fn center_dimension(a: &ConvolutionAlgebra) -> usize {
    let n = a.dim();
    let mut by_left: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut by_right: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (&(h, k), &c) in &a.product {
        by_left[k].push((h, c)); // e_h e_k = e_c: coefficient of z_h in (z e_k)_c
        by_right[h].push((k, c)); // e_h e_k = e_c: coefficient of z_k in (e_h z)_c
    }
    let mut ech = SparseEchelon::<Rational>::new();
    let one = Rational::from_integer(1.into());
    for b in 0..n {
        let mut rows: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
        for &(g, c) in &by_left[b] {
            rows.entry(c).or_default().push((g, one.clone()));
        }
        for &(g, c) in &by_right[b] {
            rows.entry(c).or_default().push((g, -one.clone()));
        }
        let mut keys: Vec<usize> = rows.keys().copied().collect();
        keys.sort_unstable();
        for c in keys {
            ech.insert(rows.remove(&c).expect("key"));
        }
    }
    n - ech.rank()
}

/// `Σ` over orbits of the number of conjugacy classes of the isotropy group.
pub fn bredon_h0(g: &FiniteGroupoid) -> Result<usize, InertiaError> {
    let mut total = 0;
    for orbit in g.orbits() {
        total += g.isotropy(orbit[0])?.conjugacy_classes().len();
    }
    Ok(total)
}

/// Rank of `K⁰(G) ⊗ C`: per orbit, the number of irreducible
/// representations of the isotropy group, counted as
/// `#{commuting pairs} / |K|`.
pub fn k0_rank(g: &FiniteGroupoid) -> Result<usize, InertiaError> {
    let mut total = 0;
    for orbit in g.orbits() {
        let k = g.isotropy(orbit[0])?;
        let pairs = k.commuting_pairs();
        debug_assert_eq!(pairs % k.order(), 0);
        total += pairs / k.order();
    }
    Ok(total)
}
