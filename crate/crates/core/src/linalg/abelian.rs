//! Finitely generated abelian groups as kernels modulo images.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::int::{ExactInt, IntMatrix};
use super::smith::{smith_in, Track};
use super::sparse::{sparse_invariants, SparseIntMatrix};
use super::{LinalgError, Overflow};

/// `Z^rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk` with `t1 | t2 | ... | tk`, all `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::zero(),
            _ => Self {
                rank: 0,
                torsion: vec![n],
            },
        }
    }

    /// From Smith invariants: units are dropped, the rest must fit in `u64`.
    pub fn from_invariants(rank: usize, invariants: &[BigInt]) -> Result<Self, LinalgError> {
        let torsion = invariants
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().ok_or_else(|| LinalgError::CoefficientTooLarge(d.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rank, torsion })
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `self ⊕ other`, renormalized to invariant factors.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let t: Vec<i64> = self
            .torsion
            .iter()
            .chain(&other.torsion)
            .map(|&x| i64::try_from(x).expect("torsion coefficient fits i64"))
            .collect();
        let mut m = IntMatrix::zeros(t.len(), t.len());
        for (i, &x) in t.iter().enumerate() {
            m.set(i, i, x);
        }
        let (_, inv) = super::smith::smith_invariants(&m);
        Self::from_invariants(self.rank + other.rank, &inv).expect("factors of u64 values fit u64")
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().map(|&t| BigInt::from(t)).product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// `ker ∂_n / im ∂_{n+1}` for a chain complex of free modules.
///
/// `d_n` is `dim C_{n-1} × dim C_n` (zero rows in degree 0) and `d_next` is
/// `dim C_n × dim C_{n+1}`.
pub fn homology_from_boundaries(
    d_n: &SparseIntMatrix,
    d_next: &SparseIntMatrix,
) -> Result<AbelianGroup, LinalgError> {
    if d_next.rows() != d_n.cols() {
        return Err(LinalgError::Dimension(format!(
            "boundary into a {}-dimensional chain group has {} rows",
            d_n.cols(),
            d_next.rows()
        )));
    }
    let (r_n, _) = sparse_invariants(d_n);
    let (r_next, inv) = sparse_invariants(d_next);
    AbelianGroup::from_invariants(d_n.cols() - r_n - r_next, &inv)
}

/// Invariants of `{x : f x ∈ im codomain_rel} / (im incoming + im domain_rel)`
/// computed in `T`.
fn subquotient_in<T: ExactInt>(
    f: &IntMatrix<T>,
    codomain_rel: &IntMatrix<T>,
    gens: &IntMatrix<T>,
) -> Result<Result<(usize, Vec<BigInt>), LinalgError>, Overflow> {
    let a = f.cols();
    // kernel of [f | rel]: trailing columns of the right transform
    let m = f.hconcat(codomain_rel);
    let s = smith_in(&m, Track::RIGHT)?;
    let r = s.right.expect("tracked");
    let kcols: Vec<Vec<T>> = (s.rank..m.cols())
        .map(|j| (0..a).map(|i| r.get(i, j).clone()).collect())
        .collect();
    let kgen = IntMatrix::from_columns(a, &kcols);
    // basis of the lattice spanned by kgen: L kgen R = D
    let sk = smith_in(&kgen, Track::LEFT)?;
    let l = sk.left.expect("tracked");
    let k = sk.rank;
    let d = &sk.diagonal[..k];
    let mut coords: Vec<Vec<T>> = Vec::with_capacity(gens.cols());
    for j in 0..gens.cols() {
        let lv = l.mul_vec(&gens.column(j))?;
        if lv[k..].iter().any(|x| !x.is_zero()) {
            return Ok(Err(LinalgError::NotInLattice));
        }
        let mut c = Vec::with_capacity(k);
        for i in 0..k {
            let (q, rem) = lv[i].div_rem(&d[i]);
            if !rem.is_zero() {
                return Ok(Err(LinalgError::NotInLattice));
            }
            c.push(q);
        }
        coords.push(c);
    }
    let c = IntMatrix::from_columns(k, &coords);
    let sc = smith_in(&c, Track::NONE)?;
    let inv = sc.invariants().iter().map(|x| x.clone().into()).collect();
    Ok(Ok((k - sc.rank, inv)))
}

/// The subquotient `{x ∈ Z^a : f x ∈ im codomain_rel} / (im incoming + im domain_rel)`.
///
/// With `domain_rel` and `codomain_rel` presenting finitely generated
/// groups `A = Z^a / domain_rel` and `B = Z^b / codomain_rel`, and `f` a lift
/// of a homomorphism `A -> B`, this is `ker(A -> B) / image(incoming)`.
/// Runs in `i64` and retries in `BigInt` on overflow.
pub fn subquotient(
    f: &IntMatrix<i64>,
    codomain_rel: &IntMatrix<i64>,
    incoming: &IntMatrix<i64>,
    domain_rel: &IntMatrix<i64>,
) -> Result<AbelianGroup, LinalgError> {
    let a = f.cols();
    if codomain_rel.rows() != f.rows() || incoming.rows() != a || domain_rel.rows() != a {
        return Err(LinalgError::Dimension(format!(
            "f is {}x{}, codomain relations have {} rows, incoming {} rows, domain relations {} rows",
            f.rows(),
            a,
            codomain_rel.rows(),
            incoming.rows(),
            domain_rel.rows()
        )));
    }
    let gens = incoming.hconcat(domain_rel);
    let (rank, inv) = match subquotient_in(f, codomain_rel, &gens) {
        Ok(res) => res?,
        Err(Overflow) => {
            let big = |m: &IntMatrix<i64>| m.map(|&x| BigInt::from(x));
            subquotient_in(&big(f), &big(codomain_rel), &big(&gens))
                .expect("BigInt arithmetic does not overflow")?
        }
    };
    AbelianGroup::from_invariants(rank, &inv)
}

/// Presentation matrix (one column per relation) of `Z^r ⊕ Z/t1 ⊕ ...`
/// repeated `copies` times.
pub fn diagonal_relations(rank: usize, torsion: &[u64], copies: usize) -> IntMatrix<i64> {
    let width = rank + torsion.len();
    let mut m = IntMatrix::zeros(width * copies, torsion.len() * copies);
    for c in 0..copies {
        for (t, &d) in torsion.iter().enumerate() {
            m.set(c * width + rank + t, c * torsion.len() + t, d as i64);
        }
    }
    m
}

/// gcd of a list, 0 for the empty list.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| g.gcd(&x))
}
