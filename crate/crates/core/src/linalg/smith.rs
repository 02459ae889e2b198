//! Smith normal form over the integers.
//!
//! Pivot strategy: smallest nonzero absolute value in the remaining block,
//! Euclidean reduction of its row and column, then a divisibility sweep.
//! Arithmetic is checked; [`smith_normal_form`] retries in `BigInt` when
//! the fixed-width pass overflows.

use num_bigint::BigInt;

use super::int::{ExactInt, IntMatrix};
use super::Overflow;

/// Which unimodular transforms to record alongside the diagonal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const NONE: Track = Track { left: false, right: false };
    pub const BOTH: Track = Track { left: true, right: true };
    pub const LEFT: Track = Track { left: true, right: false };
    pub const RIGHT: Track = Track { left: false, right: true };
}

/// `left · M · right = D` with `D` diagonal, nonnegative, and each
/// nonzero entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// The first `min(rows, cols)` diagonal entries of `D`.
    pub diagonal: Vec<T>,
    pub rank: usize,
    pub left: Option<IntMatrix<T>>,
    pub right: Option<IntMatrix<T>>,
}

impl<T: ExactInt> SmithForm<T> {
    /// Nonzero diagonal entries.
    pub fn invariants(&self) -> &[T] {
        &self.diagonal[..self.rank]
    }

    pub fn to_big(&self) -> SmithForm<BigInt> {
        SmithForm {
            diagonal: self.diagonal.iter().map(|x| x.clone().into()).collect(),
            rank: self.rank,
            left: self.left.as_ref().map(|m| m.map(|x| x.clone().into())),
            right: self.right.as_ref().map(|m| m.map(|x| x.clone().into())),
        }
    }
}

struct Work<T> {
    a: IntMatrix<T>,
    left: Option<IntMatrix<T>>,
    right: Option<IntMatrix<T>>,
}

impl<T: ExactInt> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(l) = &mut self.left {
            l.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(r) = &mut self.right {
            r.swap_cols(i, j);
        }
    }

    /// row[i] -= q * row[t]
    fn row_axpy(&mut self, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
        axpy_rows(&mut self.a, i, t, q)?;
        if let Some(l) = &mut self.left {
            axpy_rows(l, i, t, q)?;
        }
        Ok(())
    }

    /// col[j] -= q * col[t]
    fn col_axpy(&mut self, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
        axpy_cols(&mut self.a, j, t, q)?;
        if let Some(r) = &mut self.right {
            axpy_cols(r, j, t, q)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) -> Result<(), Overflow> {
        negate_row(&mut self.a, t)?;
        if let Some(l) = &mut self.left {
            negate_row(l, t)?;
        }
        Ok(())
    }
}

fn axpy_rows<T: ExactInt>(m: &mut IntMatrix<T>, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
    let cols = m.cols();
    let data = m.data_mut();
    for j in 0..cols {
        let src = &data[t * cols + j];
        if src.is_zero() {
            continue;
        }
        let v = data[i * cols + j].sub_c(&q.mul_c(src)?)?;
        data[i * cols + j] = v;
    }
    Ok(())
}

fn axpy_cols<T: ExactInt>(m: &mut IntMatrix<T>, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
    let (rows, cols) = (m.rows(), m.cols());
    let data = m.data_mut();
    for i in 0..rows {
        let src = &data[i * cols + t];
        if src.is_zero() {
            continue;
        }
        let v = data[i * cols + j].sub_c(&q.mul_c(src)?)?;
        data[i * cols + j] = v;
    }
    Ok(())
}

fn negate_row<T: ExactInt>(m: &mut IntMatrix<T>, t: usize) -> Result<(), Overflow> {
    let cols = m.cols();
    let data = m.data_mut();
    for j in 0..cols {
        data[t * cols + j] = data[t * cols + j].neg_c()?;
    }
    Ok(())
}

/// Position of the smallest nonzero |entry| in the block `[t.., t..]`.
fn min_pivot<T: ExactInt>(a: &IntMatrix<T>, t: usize) -> Result<Option<(usize, usize)>, Overflow> {
    let mut best: Option<(T, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let m = v.abs_c()?;
            if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
                let done = m.is_one();
                best = Some((m, i, j));
                if done {
                    return Ok(best.map(|(_, i, j)| (i, j)));
                }
            }
        }
    }
    Ok(best.map(|(_, i, j)| (i, j)))
}

/// Smith normal form in the arithmetic of `T`; `Err(Overflow)` if a
/// fixed-width intermediate does not fit.
pub fn smith_in<T: ExactInt>(m: &IntMatrix<T>, track: Track) -> Result<SmithForm<T>, Overflow> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        left: track.left.then(|| IntMatrix::identity(rows)),
        right: track.right.then(|| IntMatrix::identity(cols)),
    };
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        let Some((pi, pj)) = min_pivot(&w.a, t)? else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = w.a.get(i, t).div_floor(w.a.get(t, t));
                w.row_axpy(i, t, &q)?;
                if !w.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = w.a.get(t, j).div_floor(w.a.get(t, t));
                w.col_axpy(j, t, &q)?;
                if !w.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot: bring it in
                let p = w.a.get(t, t).abs_c()?;
                let mut best = (p, t, t);
                for i in t + 1..rows {
                    let v = w.a.get(i, t);
                    if !v.is_zero() && v.abs_c()? < best.0 {
                        best = (v.abs_c()?, i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = w.a.get(t, j);
                    if !v.is_zero() && v.abs_c()? < best.0 {
                        best = (v.abs_c()?, t, j);
                    }
                }
                w.swap_rows(t, best.1);
                w.swap_cols(t, best.2);
                continue;
            }
            // row and column cleared; enforce divisibility of the block
            let p = w.a.get(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !w.a.get(i, j).mod_floor(&p).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => w.row_axpy(t, i, &T::from(-1))?,
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t)?;
        }
        rank = t + 1;
    }
    let diagonal = (0..n).map(|k| w.a.get(k, k).clone()).collect();
    Ok(SmithForm {
        diagonal,
        rank,
        left: w.left,
        right: w.right,
    })
}

/// Smith normal form of an `i64` matrix. Runs in `i64`, escalating to
/// `BigInt` if any intermediate overflows.
pub fn smith_normal_form(m: &IntMatrix<i64>, track: Track) -> SmithForm<BigInt> {
    match smith_in(m, track) {
        Ok(s) => s.to_big(),
        Err(Overflow) => {
            let big: IntMatrix<BigInt> = m.map(|&x| BigInt::from(x));
            smith_in(&big, track).expect("BigInt arithmetic does not overflow")
        }
    }
}

/// Just the rank and nonzero invariants.
pub fn smith_invariants(m: &IntMatrix<i64>) -> (usize, Vec<BigInt>) {
    let s = smith_normal_form(m, Track::NONE);
    let inv = s.invariants().to_vec();
    (s.rank, inv)
}

/// True when every nonzero invariant divides the next and all are positive.
pub fn is_divisibility_chain<T: ExactInt>(d: &[T]) -> bool {
    d.iter().all(|x| x.is_positive())
        && d.windows(2).all(|w| w[1].mod_floor(&w[0]).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn check_form(m: &IntMatrix<i64>) -> SmithForm<BigInt> {
        let s = smith_normal_form(m, Track::BOTH);
        let big = m.map(|&x| BigInt::from(x));
        let l = s.left.as_ref().unwrap();
        let r = s.right.as_ref().unwrap();
        let d = l.checked_mul(&big).unwrap().checked_mul(r).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*d.get(i, j), want, "L·M·R at ({i},{j})");
            }
        }
        assert!(is_divisibility_chain(s.invariants()));
        assert!(s.diagonal[s.rank..].iter().all(Zero::is_zero));
        s
    }

    #[test]
    fn zero_matrix() {
        let s = check_form(&IntMatrix::zeros(3, 2));
        assert_eq!(s.rank, 0);
        assert!(s.diagonal.iter().all(Zero::is_zero));
    }

    #[test]
    fn coprime_diagonal() {
        let s = check_form(&IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rank_one() {
        let s = check_form(&IntMatrix::from_rows(vec![vec![1, 1], vec![1, 1]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn overflow_escalates_to_bigint() {
        let m = IntMatrix::from_rows(vec![vec![i64::MAX, 1], vec![1, i64::MAX]]);
        assert!(smith_in(&m, Track::NONE).is_err());
        let s = check_form(&m);
        let det = BigInt::from(i64::MAX) * BigInt::from(i64::MAX) - 1;
        assert_eq!(s.diagonal, vec![BigInt::one(), det]);
    }

    /// Independent oracle for 2x2: d1 = gcd of entries, d1*d2 = |det|.
    fn oracle_2x2(m: [[i64; 2]; 2]) -> (i64, i64) {
        use num_integer::Integer;
        let g = m[0][0].gcd(&m[0][1]).gcd(&m[1][0]).gcd(&m[1][1]);
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
        if g == 0 {
            (0, 0)
        } else {
            (g, det / g)
        }
    }

    proptest! {
        #[test]
        fn transforms_diagonalize(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let m = IntMatrix::from_rows(
                (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect(),
            );
            check_form(&m);
        }

        #[test]
        fn two_by_two_matches_gcd_oracle(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let s = smith_normal_form(&IntMatrix::from_rows(vec![vec![a, b], vec![c, d]]), Track::NONE);
            let (d1, d2) = oracle_2x2([[a, b], [c, d]]);
            prop_assert_eq!(s.diagonal, vec![BigInt::from(d1), BigInt::from(d2)]);
        }
    }
}
