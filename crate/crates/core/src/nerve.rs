//! Nerves of finite categories and the homology of their classifying spaces.
//!
//! An `n`-simplex is a string `(g1, ..., gn)` with `src(g_i) = tgt(g_{i+1})`,
//! i.e. `x0 <-g1- x1 <-g2- ... <-gn- xn`. The face `d_i` deletes `x_i`:
//! `d0` drops `g1`, `dn` drops `gn`, and the middle faces compose
//! `g_i ∘ g_{i+1}`. On 1-simplices `d0(g) = src(g)` and `d1(g) = tgt(g)`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::category::FiniteCategory;
use crate::linalg::{homology_from_boundaries, AbelianGroup, LinalgError, Overflow, SparseIntMatrix};

pub const DEFAULT_NERVE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NerveError {
    #[error("nerve level {degree} has {count} simplices, over the cap of {cap}")]
    CapExceeded { degree: usize, count: u128, cap: usize },
    #[error("face index {index} out of range for degree {degree}")]
    FaceIndex { degree: usize, index: usize },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("homology needs max_degree >= 1")]
    DegreeTooSmall,
    #[error("boundary composite is nonzero in degree {0}")]
    BoundarySquare(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("boundary coefficient overflow")]
    Overflow,
}

impl From<Overflow> for NerveError {
    fn from(_: Overflow) -> Self {
        NerveError::Overflow
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NerveOptions {
    /// Largest nerve level that will be enumerated.
    pub cap: usize,
}

impl Default for NerveOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_NERVE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Simplex {
    Vertex(usize),
    Chain(Vec<usize>),
}

impl Simplex {
    pub fn degree(&self) -> usize {
        match self {
            Simplex::Vertex(_) => 0,
            Simplex::Chain(gs) => gs.len(),
        }
    }

    /// Whether some arrow of the string is a unit.
    pub fn is_degenerate(&self, c: &FiniteCategory) -> bool {
        match self {
            Simplex::Vertex(_) => false,
            Simplex::Chain(gs) => gs.iter().any(|&g| c.is_unit(g)),
        }
    }

    pub fn display<'a>(&'a self, c: &'a FiniteCategory) -> SimplexDisplay<'a> {
        SimplexDisplay { s: self, c }
    }
}

pub struct SimplexDisplay<'a> {
    s: &'a Simplex,
    c: &'a FiniteCategory,
}

impl fmt::Display for SimplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s {
            Simplex::Vertex(x) => write!(f, "{}", self.c.object_name(*x)),
            Simplex::Chain(gs) => {
                let names: Vec<&str> = gs.iter().map(|&g| self.c.arrow_name(g)).collect();
                write!(f, "({})", names.join(", "))
            }
        }
    }
}

/// Arrows into each object, in name order; optionally without units.
fn incoming_sorted(c: &FiniteCategory, skip_units: bool) -> Vec<Vec<usize>> {
    (0..c.num_objects())
        .map(|x| {
            let mut v: Vec<usize> = c
                .incoming(x)
                .iter()
                .copied()
                .filter(|&g| !(skip_units && c.is_unit(g)))
                .collect();
            v.sort_by(|&a, &b| c.arrow_name(a).cmp(c.arrow_name(b)));
            v
        })
        .collect()
}

/// Number of strings of length `n` (saturating).
fn count_level(c: &FiniteCategory, n: usize, skip_units: bool) -> u128 {
    if n == 0 {
        return c.num_objects() as u128;
    }
    let inc = incoming_sorted(c, skip_units);
    // f[x]: strings (g_k, ..., g_n) with tgt(g_k) = x
    let mut f: Vec<u128> = inc.iter().map(|v| v.len() as u128).collect();
    for _ in 1..n {
        f = inc
            .iter()
            .map(|v| {
                v.iter()
                    .fold(0u128, |acc, &g| acc.saturating_add(f[c.src(g)]))
            })
            .collect();
    }
    f.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn enumerate(c: &FiniteCategory, n: usize, skip_units: bool, cap: usize) -> Result<Vec<Simplex>, NerveError> {
    let count = count_level(c, n, skip_units);
    if count > cap as u128 {
        return Err(NerveError::CapExceeded { degree: n, count, cap });
    }
    if n == 0 {
        let mut xs: Vec<usize> = (0..c.num_objects()).collect();
        xs.sort_by(|&a, &b| c.object_name(a).cmp(c.object_name(b)));
        return Ok(xs.into_iter().map(Simplex::Vertex).collect());
    }
    let inc = incoming_sorted(c, skip_units);
    let mut firsts: Vec<usize> = (0..c.num_arrows())
        .filter(|&g| !(skip_units && c.is_unit(g)))
        .collect();
    firsts.sort_by(|&a, &b| c.arrow_name(a).cmp(c.arrow_name(b)));
    let mut out = Vec::with_capacity(count as usize);
    let mut stack = Vec::with_capacity(n);
    fn go(
        c: &FiniteCategory,
        inc: &[Vec<usize>],
        n: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Simplex>,
    ) {
        if stack.len() == n {
            out.push(Simplex::Chain(stack.clone()));
            return;
        }
        let last = *stack.last().expect("nonempty");
        for &g in &inc[c.src(last)] {
            stack.push(g);
            go(c, inc, n, stack, out);
            stack.pop();
        }
    }
    for g in firsts {
        stack.push(g);
        go(c, &inc, n, &mut stack, &mut out);
        stack.pop();
    }
    Ok(out)
}

/// All `n`-simplices of the nerve (degenerate ones included), in
/// lexicographic order of arrow names.
pub fn nerve_level(c: &FiniteCategory, n: usize) -> Result<Vec<Simplex>, NerveError> {
    nerve_level_with(c, n, NerveOptions::default())
}

pub fn nerve_level_with(c: &FiniteCategory, n: usize, opts: NerveOptions) -> Result<Vec<Simplex>, NerveError> {
    enumerate(c, n, false, opts.cap)
}

fn check_simplex(c: &FiniteCategory, n: usize, s: &Simplex) -> Result<(), NerveError> {
    match s {
        Simplex::Vertex(x) if n == 0 && *x < c.num_objects() => Ok(()),
        Simplex::Chain(gs) if gs.len() == n && n > 0 => {
            if let Some(&g) = gs.iter().find(|&&g| g >= c.num_arrows()) {
                return Err(NerveError::InvalidSimplex(format!("arrow index {g}")));
            }
            for w in gs.windows(2) {
                if c.src(w[0]) != c.tgt(w[1]) {
                    return Err(NerveError::InvalidSimplex(format!(
                        "{} and {} are not composable",
                        c.arrow_name(w[0]),
                        c.arrow_name(w[1])
                    )));
                }
            }
            Ok(())
        }
        _ => Err(NerveError::InvalidSimplex(format!("expected a simplex of degree {n}"))),
    }
}

/// The face `d_i` of an `n`-simplex.
pub fn face_map(c: &FiniteCategory, n: usize, i: usize, s: &Simplex) -> Result<Simplex, NerveError> {
    if n == 0 || i > n {
        return Err(NerveError::FaceIndex { degree: n, index: i });
    }
    check_simplex(c, n, s)?;
    let Simplex::Chain(gs) = s else { unreachable!() };
    Ok(face_unchecked(c, gs, i))
}

fn face_unchecked(c: &FiniteCategory, gs: &[usize], i: usize) -> Simplex {
    let n = gs.len();
    if n == 1 {
        return Simplex::Vertex(if i == 0 { c.src(gs[0]) } else { c.tgt(gs[0]) });
    }
    let mut out = Vec::with_capacity(n - 1);
    if i == 0 {
        out.extend_from_slice(&gs[1..]);
    } else if i == n {
        out.extend_from_slice(&gs[..n - 1]);
    } else {
        out.extend_from_slice(&gs[..i - 1]);
        out.push(c.comp(gs[i - 1], gs[i]));
        out.extend_from_slice(&gs[i + 1..]);
    }
    Simplex::Chain(out)
}

/// Normalized chain complex: degree `n` is free on the nondegenerate
/// `n`-simplices and `∂_n = Σ (-1)^i d_i` with degenerate faces dropped.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    bases: Vec<Vec<Simplex>>,
    /// `boundaries[n]`: `C_n -> C_{n-1}`; `boundaries[0]` has no rows.
    boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &[Simplex] {
        &self.bases[n]
    }

    pub fn boundary(&self, n: usize) -> &SparseIntMatrix {
        &self.boundaries[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// First degree `n` with `∂_{n-1} ∂_n ≠ 0`, if any.
    pub fn square_zero_failure(&self) -> Result<Option<usize>, Overflow> {
        for n in 2..self.boundaries.len() {
            if !self.boundaries[n - 1].mul(&self.boundaries[n])?.is_zero() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

pub fn chain_complex(c: &FiniteCategory, max_degree: usize) -> Result<ChainComplex, NerveError> {
    chain_complex_with(c, max_degree, NerveOptions::default())
}

pub fn chain_complex_with(c: &FiniteCategory, max_degree: usize, opts: NerveOptions) -> Result<ChainComplex, NerveError> {
    let mut bases = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        bases.push(enumerate(c, n, true, opts.cap)?);
    }
    let mut boundaries = vec![SparseIntMatrix::zeros(0, bases[0].len())];
    for n in 1..=max_degree {
        let index: HashMap<&Simplex, usize> = bases[n - 1].iter().enumerate().map(|(k, s)| (s, k)).collect();
        let mut cols = Vec::with_capacity(bases[n].len());
        for s in &bases[n] {
            let Simplex::Chain(gs) = s else { unreachable!() };
            let mut col = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let f = face_unchecked(c, gs, i);
                if f.is_degenerate(c) {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                col.push((index[&f], sign));
            }
            cols.push(col);
        }
        boundaries.push(SparseIntMatrix::from_columns(bases[n - 1].len(), cols)?);
    }
    let cx = ChainComplex { bases, boundaries };
    if let Some(n) = cx.square_zero_failure()? {
        return Err(NerveError::BoundarySquare(n));
    }
    Ok(cx)
}

/// Integral homology in degrees `0..max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HomologyResult {
    pub groups: Vec<AbelianGroup>,
}

impl HomologyResult {
    pub fn degree(&self, n: usize) -> &AbelianGroup {
        &self.groups[n]
    }

    pub fn betti(&self, n: usize) -> usize {
        self.groups[n].rank
    }

    pub fn torsion(&self, n: usize) -> &[u64] {
        &self.groups[n].torsion
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, g) in self.groups.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "H{n} = {g}")?;
        }
        Ok(())
    }
}

/// Homology of a chain complex in degrees `0..cx.max_degree()`, one thread
/// per degree.
pub fn homology_of(cx: &ChainComplex) -> Result<HomologyResult, NerveError> {
    let top = cx.max_degree();
    let groups = std::thread::scope(|s| {
        let handles: Vec<_> = (0..top)
            .map(|n| s.spawn(move || homology_from_boundaries(&cx.boundaries[n], &cx.boundaries[n + 1])))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("homology worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(HomologyResult { groups })
}

/// `H_n(BC; Z)` for `n < max_degree`.
pub fn homology(c: &FiniteCategory, max_degree: usize) -> Result<HomologyResult, NerveError> {
    homology_with(c, max_degree, NerveOptions::default())
}

pub fn homology_with(c: &FiniteCategory, max_degree: usize, opts: NerveOptions) -> Result<HomologyResult, NerveError> {
    if max_degree == 0 {
        return Err(NerveError::DegreeTooSmall);
    }
    homology_of(&chain_complex_with(c, max_degree, opts)?)
}
