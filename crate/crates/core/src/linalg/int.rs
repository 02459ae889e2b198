use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

use super::Overflow;

/// Exact integers with overflow-checked arithmetic. Fixed-width types
/// report overflow; `BigInt` never does.
pub trait ExactInt:
    Clone
    + Debug
    + Display
    + Ord
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Into<BigInt>
    + From<i32>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Option<Self>;

    fn add_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_add(o).ok_or(Overflow)
    }

    fn sub_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(o).ok_or(Overflow)
    }

    fn mul_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(o).ok_or(Overflow)
    }

    fn neg_c(&self) -> Result<Self, Overflow>;

    fn abs_c(&self) -> Result<Self, Overflow> {
        if self.is_negative() {
            self.neg_c()
        } else {
            Ok(self.clone())
        }
    }
}

impl ExactInt for i64 {
    fn from_i64(v: i64) -> Option<Self> {
        Some(v)
    }

    fn neg_c(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Option<Self> {
        Some(v as i128)
    }

    fn neg_c(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Option<Self> {
        Some(BigInt::from(v))
    }

    fn neg_c(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Debug> Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<T: Clone + Zero + One> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }
}

impl<T> IntMatrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add_c(&a.mul_c(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, Overflow> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = vec![T::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !x.is_zero() {
                    *o = o.add_c(&a.mul_c(x)?)?;
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Converts entries to another exact integer type; fails if an entry
    /// does not fit.
    pub fn convert<U: ExactInt>(&self) -> Result<IntMatrix<U>, Overflow> {
        let data = self
            .data
            .iter()
            .map(|x| {
                let b: BigInt = x.clone().into();
                big_to::<U>(&b)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

/// Narrowing conversion from `BigInt`.
pub fn big_to<U: ExactInt>(b: &BigInt) -> Result<U, Overflow> {
    use num_traits::ToPrimitive;
    // every ExactInt holds at least i64; go through i64 when possible
    if let Some(v) = b.to_i64() {
        return U::from_i64(v).ok_or(Overflow);
    }
    // wider values: build by repeated doubling in the target type
    let mut acc = U::zero();
    let base = U::from_i64(1 << 32).ok_or(Overflow)?;
    let (sign, digits) = b.to_u32_digits();
    for d in digits.iter().rev() {
        acc = acc.mul_c(&base)?.add_c(&U::from_i64(i64::from(*d)).ok_or(Overflow)?)?;
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg_c()?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_ops_detect_overflow() {
        assert_eq!(i64::MAX.add_c(&1), Err(Overflow));
        assert_eq!(i64::MIN.abs_c(), Err(Overflow));
        let big = BigInt::from(i64::MAX);
        assert!(big.add_c(&BigInt::from(1)).is_ok());
    }

    #[test]
    fn narrowing_conversions() {
        let b = BigInt::from(i64::MAX) * 4;
        assert_eq!(big_to::<i64>(&b), Err(Overflow));
        let v: i128 = big_to(&b).unwrap();
        assert_eq!(v, i64::MAX as i128 * 4);
        let n: i128 = big_to(&-b.clone()).unwrap();
        assert_eq!(n, -(i64::MAX as i128) * 4);
    }

    #[test]
    fn products() {
        let a = IntMatrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(vec![vec![0i64, 1], vec![1, 0]]);
        assert_eq!(
            a.checked_mul(&b).unwrap(),
            IntMatrix::from_rows(vec![vec![2, 1], vec![4, 3]])
        );
        assert_eq!(a.mul_vec(&[1, 1]).unwrap(), vec![3, 7]);
        assert_eq!(a.transpose().get(0, 1), &3);
    }
}
