//! Rank over a field by incremental sparse elimination.

use std::collections::HashMap;
use std::ops::Neg;

use num_traits::Num;

/// Exact field arithmetic. `Rational` (big rationals) is the usual choice;
/// floats satisfy the bound but are not exact.
pub trait Field: Num + Clone + Neg<Output = Self> + PartialEq {}

impl<T: Num + Clone + Neg<Output = T> + PartialEq> Field for T {}

/// Sparse row, sorted by column, no explicit zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

/// Row echelon form built one row at a time.
#[derive(Debug, Clone)]
pub struct SparseEchelon<F> {
    /// pivot column -> row whose leading entry (1) sits there
    pivots: HashMap<usize, SparseRow<F>>,
}

impl<F: Field> Default for SparseEchelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

/// `a - c*b` on sorted sparse rows.
fn axpy<F: Field>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let v = a[i].1.clone() - c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> SparseEchelon<F> {
    pub fn new() -> Self {
        Self {
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row given as `(column, value)` pairs in any order; repeated
    /// columns are summed. Returns whether the rank went up.
    pub fn insert(&mut self, entries: impl IntoIterator<Item = (usize, F)>) -> bool {
        let mut row: SparseRow<F> = Vec::new();
        let mut raw: Vec<(usize, F)> = entries.into_iter().collect();
        raw.sort_by_key(|e| e.0);
        for (c, v) in raw {
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = last.1.clone() + v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        while let Some((lead, val)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &val, p),
                None => {
                    let inv = F::one() / val;
                    for e in row.iter_mut() {
                        e.1 = e.1.clone() * inv.clone();
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }
}

/// Rank of a matrix given as sparse rows.
pub fn rank_over<F: Field>(rows: impl IntoIterator<Item = Vec<(usize, F)>>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn dense(rows: &[Vec<i64>]) -> Vec<Vec<(usize, Rational)>> {
        rows.iter()
            .map(|r| r.iter().enumerate().map(|(j, &v)| (j, q(v))).collect())
            .collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_over(dense(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank_over(dense(&[vec![2, 0], vec![0, 3]])), 2);
        assert_eq!(rank_over(dense(&[vec![0, 0]])), 0);
        // invertible over Q though not over Z
        assert_eq!(rank_over(dense(&[vec![2, 0], vec![0, 2]])), 2);
    }

    #[test]
    fn repeated_columns_accumulate() {
        let mut e = SparseEchelon::new();
        assert!(!e.insert(vec![(0, q(1)), (0, q(-1))]));
        assert!(e.insert(vec![(3, q(1)), (1, q(1))]));
        assert!(!e.insert(vec![(1, q(2)), (3, q(2))]));
        assert_eq!(e.rank(), 1);
    }

    proptest! {
        /// Rank over Q equals the number of nonzero Smith invariants.
        #[test]
        fn agrees_with_smith(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-4i64..5, 25)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let (r, _) = crate::linalg::smith_invariants(&crate::linalg::IntMatrix::from_rows(m.clone()));
            prop_assert_eq!(rank_over(dense(&m)), r);
        }
    }
}
