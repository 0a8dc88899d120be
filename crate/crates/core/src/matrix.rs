//! Dense row-major square matrix.

use alloc::vec;
use alloc::vec::Vec;

/// An `n × n` matrix of `f64` stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// All-zero matrix.
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Build from nested rows. Returns `None` if the rows are ragged.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Option<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return None;
            }
            data.extend_from_slice(r);
        }
        Some(Self { n, data })
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Overwrite entry `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    /// Mutable reference to entry `(i, j)`.
    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Whether `m[i][j] == m[j][i]` holds bit-for-bit.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Keep only the rows/columns whose flag is set, preserving order.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let idx: Vec<usize> = (0..self.n).filter(|&i| keep[i]).collect();
        let mut out = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }
}

/// Number of unordered pairs `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Linear index of the pair `(i, j)`, `i < j`, in row-major upper-triangle order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Iterate `(i, j)` with `i < j` in upper-triangle order.
pub fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 0..9 {
            let pairs: Vec<_> = upper_pairs(n).collect();
            assert_eq!(pairs.len(), pair_count(n));
            for (k, &(i, j)) in pairs.iter().enumerate() {
                assert_eq!(pair_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn restrict_keeps_order() {
        let m = SquareMatrix::from_rows(&[[0.0, 1.0, 2.0], [3.0, 0.0, 5.0], [6.0, 7.0, 0.0]]).unwrap();
        let r = m.restrict(&[true, false, true]);
        assert_eq!(r, SquareMatrix::from_rows(&[[0.0, 2.0], [6.0, 0.0]]).unwrap());
    }
}
