//! Sparse integer matrices and Smith invariants via unit-pivot elimination.
//!
//! Boundary matrices of nerves are very sparse and mostly reduce through
//! ±1 pivots. Those are eliminated in place; whatever survives is handed to
//! the dense Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::int::{ExactInt, IntMatrix};
use super::smith::{smith_in, Track};
use super::Overflow;

/// Column-major sparse matrix over `i64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    /// per column, `(row, value)` sorted by row, no zeros
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from columns of `(row, value)` pairs; repeated rows are summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Result<Self, Overflow> {
        let mut out = Vec::with_capacity(columns.len());
        for col in columns {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (r, v) in col {
                assert!(r < rows, "row {r} out of range");
                let e = acc.entry(r).or_insert(0);
                *e = e.checked_add(v).ok_or(Overflow)?;
            }
            out.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Ok(Self { rows, columns: out })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j]
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |k| self.columns[j][k].1)
    }

    pub fn to_dense(&self) -> IntMatrix<i64> {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix<i64>) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| *m.get(i, j) != 0)
                    .map(|i| (i, *m.get(i, j)))
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows(),
            columns,
        }
    }

    /// `self · other`, with the product computed in `BigInt` and checked
    /// back into `i64`.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix, Overflow> {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut cols = Vec::with_capacity(other.cols());
        for col in &other.columns {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    *acc.entry(i).or_default() += BigInt::from(a) * b;
                }
            }
            let c = acc
                .into_iter()
                .filter(|(_, v)| *v != BigInt::from(0))
                .map(|(i, v)| super::big_to::<i64>(&v).map(|v| (i, v)))
                .collect::<Result<Vec<_>, _>>()?;
            cols.push(c);
        }
        Ok(SparseIntMatrix {
            rows: self.rows,
            columns: cols,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

impl From<&IntMatrix<i64>> for SparseIntMatrix {
    fn from(m: &IntMatrix<i64>) -> Self {
        Self::from_dense(m)
    }
}

/// Rank and nonzero Smith invariants (ascending divisibility chain).
fn invariants_in<T: ExactInt>(m: &SparseIntMatrix) -> Result<(usize, Vec<BigInt>), Overflow> {
    let mut cols: Vec<Option<BTreeMap<usize, T>>> = m
        .columns
        .iter()
        .map(|c| Some(c.iter().map(|&(i, v)| (i, T::from_i64(v).expect("i64 fits"))).collect()))
        .collect();
    let mut row_index: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.rows];
    for (j, c) in m.columns.iter().enumerate() {
        for &(i, _) in c {
            row_index[i].insert(j);
        }
    }
    let mut unit_pivots = 0usize;
    loop {
        let mut progress = false;
        let mut order: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].is_some()).collect();
        order.sort_by_key(|&j| cols[j].as_ref().map_or(0, BTreeMap::len));
        for j in order {
            let Some(col) = cols[j].as_ref() else { continue };
            if col.is_empty() {
                cols[j] = None;
                continue;
            }
            let pivot = col
                .iter()
                .filter(|(_, v)| v.is_one() || (-(*v).clone()).is_one())
                .map(|(&i, _)| i)
                .min_by_key(|&i| row_index[i].len());
            let Some(r) = pivot else { continue };
            let pcol = cols[j].take().expect("alive");
            let pval = pcol[&r].clone();
            for &i in pcol.keys() {
                row_index[i].remove(&j);
            }
            let others: Vec<usize> = row_index[r].iter().copied().collect();
            for k in others {
                let target = cols[k].as_mut().expect("indexed column is alive");
                // pval is ±1, so a_rk / a_rj = a_rk * a_rj
                let factor = target[&r].mul_c(&pval)?;
                for (&i, v) in &pcol {
                    let cur = target.get(&i).cloned().unwrap_or_else(T::zero);
                    let next = cur.sub_c(&factor.mul_c(v)?)?;
                    if next.is_zero() {
                        target.remove(&i);
                        row_index[i].remove(&k);
                    } else {
                        if !target.contains_key(&i) {
                            row_index[i].insert(k);
                        }
                        target.insert(i, next);
                    }
                }
            }
            debug_assert!(row_index[r].is_empty());
            unit_pivots += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    // dense remainder
    let live_cols: Vec<usize> = (0..cols.len())
        .filter(|&j| cols[j].as_ref().is_some_and(|c| !c.is_empty()))
        .collect();
    let live_rows: Vec<usize> = (0..m.rows).filter(|&i| !row_index[i].is_empty()).collect();
    let mut inv: Vec<BigInt> = vec![BigInt::from(1); unit_pivots];
    if !live_cols.is_empty() {
        let pos: BTreeMap<usize, usize> = live_rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut dense = IntMatrix::<T>::zeros(live_rows.len(), live_cols.len());
        for (c, &j) in live_cols.iter().enumerate() {
            for (i, v) in cols[j].as_ref().expect("alive") {
                dense.set(pos[i], c, v.clone());
            }
        }
        let s = smith_in(&dense, Track::NONE)?;
        inv.extend(s.invariants().iter().map(|x| x.clone().into()));
    }
    Ok((inv.len(), inv))
}

/// Rank and nonzero Smith invariants of a sparse matrix. Runs in `i64`,
/// retrying in `BigInt` on overflow.
pub fn sparse_invariants(m: &SparseIntMatrix) -> (usize, Vec<BigInt>) {
    match invariants_in::<i64>(m) {
        Ok(r) => r,
        Err(Overflow) => invariants_in::<BigInt>(m).expect("BigInt arithmetic does not overflow"),
    }
}
