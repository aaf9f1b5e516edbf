//! Dense linear algebra over F₂ for matrices of dimension at most 64.
//!
//! Rows are stored as `u64` bitmasks (bit `j` of `bits[i]` is the entry in
//! row `i`, column `j`), which makes row reduction a handful of XORs. That is
//! all the partition-counting layer needs: Laplacian ranks and kernels of
//! digraphs whose vertex sets are the prime divisors of a desk-sized integer.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// Kernel extraction is defined here for square matrices only.
    #[error("kernel basis requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
}

/// A rows×cols matrix over F₂, each dimension at most 64.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixF2 {
    rows: usize,
    cols: usize,
    bits: Vec<u64>,
}

impl MatrixF2 {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows <= 64 && cols <= 64, "MatrixF2 supports dimensions up to 64");
        MatrixF2 { rows, cols, bits: vec![0; rows] }
    }

    /// Build from row bitmasks; bits at column indices ≥ `cols` must be clear.
    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Self {
        assert!(rows.len() <= 64 && cols <= 64, "MatrixF2 supports dimensions up to 64");
        let mask = mask_of(cols);
        for &r in &rows {
            assert_eq!(r & !mask, 0, "row has bits outside the column range");
        }
        MatrixF2 { rows: rows.len(), cols, bits: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.bits[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        if value {
            self.bits[i] |= 1 << j;
        } else {
            self.bits[i] &= !(1 << j);
        }
    }

    /// Row `i` as a bitmask.
    pub fn row(&self, i: usize) -> u64 {
        self.bits[i]
    }

    /// Add (XOR) `value` into entry (i, j).
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols);
        self.bits[i] ^= 1 << j;
    }

    /// Matrix–vector product over F₂; bit `i` of the result is the parity of
    /// the overlap between row `i` and `x`.
    pub fn mul_vec(&self, x: u64) -> u64 {
        debug_assert_eq!(x & !mask_of(self.cols), 0);
        let mut out = 0u64;
        for (i, &row) in self.bits.iter().enumerate() {
            out |= (((row & x).count_ones() as u64) & 1) << i;
        }
        out
    }

    pub fn transpose(&self) -> MatrixF2 {
        let mut t = MatrixF2::zero(self.cols, self.rows);
        for i in 0..self.rows {
            let mut row = self.bits[i];
            while row != 0 {
                let j = row.trailing_zeros() as usize;
                t.bits[j] |= 1 << i;
                row &= row - 1;
            }
        }
        t
    }

    /// Rank over F₂ by Gaussian elimination on a copy.
    pub fn rank_f2(&self) -> usize {
        self.reduce().1.len()
    }

    /// A basis of the right kernel {x : Mx = 0} of a square matrix, each
    /// vector as a bitmask. The basis has exactly `cols − rank` elements.
    pub fn kernel_basis_f2(&self) -> Result<Vec<u64>, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let (reduced, pivots) = self.reduce();
        let pivot_set: u64 = pivots.iter().fold(0, |acc, &c| acc | (1 << c));
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for f in 0..self.cols {
            if (pivot_set >> f) & 1 == 1 {
                continue;
            }
            // Free column f: set x_f = 1 and solve each pivot row for its
            // pivot variable (rows are fully reduced, so the row reads
            // x_pivot = Σ coefficients over free columns).
            let mut v = 1u64 << f;
            for (i, &c) in pivots.iter().enumerate() {
                if (reduced[i] >> f) & 1 == 1 {
                    v |= 1 << c;
                }
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Reduced row-echelon form: returns (nonzero reduced rows, pivot column
    /// of each, in order).
    fn reduce(&self) -> (Vec<u64>, Vec<usize>) {
        let mut rows = self.bits.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(i) = (r..rows.len()).find(|&i| (rows[i] >> c) & 1 == 1) else {
                continue;
            };
            rows.swap(r, i);
            for k in 0..rows.len() {
                if k != r && (rows[k] >> c) & 1 == 1 {
                    rows[k] ^= rows[r];
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }
}

fn mask_of(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        let id = MatrixF2::from_rows(3, vec![0b001, 0b010, 0b100]);
        assert_eq!(id.rank_f2(), 3);
        assert_eq!(MatrixF2::zero(3, 3).rank_f2(), 0);
        let m = MatrixF2::from_rows(3, vec![0b110, 0b011, 0b101]);
        assert_eq!(m.rank_f2(), 2);
    }

    #[test]
    fn kernel_examples() {
        let m = MatrixF2::from_rows(3, vec![0b110, 0b011, 0b101]);
        assert_eq!(m.kernel_basis_f2().unwrap(), vec![0b111]);
        let id = MatrixF2::from_rows(2, vec![0b01, 0b10]);
        assert!(id.kernel_basis_f2().unwrap().is_empty());
        let rect = MatrixF2::zero(2, 3);
        assert_eq!(
            rect.kernel_basis_f2(),
            Err(Gf2Error::NonSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = MatrixF2::from_rows(4, vec![0b1100, 0b0110, 0b0011, 0b1001]);
        let basis = m.kernel_basis_f2().unwrap();
        assert_eq!(basis.len(), 4 - m.rank_f2());
        for v in basis {
            assert_eq!(m.mul_vec(v), 0);
        }
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = MatrixF2> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u64..(1 << c), r)
                .prop_map(move |rows| MatrixF2::from_rows(c, rows))
        })
    }

    fn arb_square(max_dim: usize) -> impl Strategy<Value = MatrixF2> {
        (1..=max_dim).prop_flat_map(|n| {
            proptest::collection::vec(0u64..(1 << n), n)
                .prop_map(move |rows| MatrixF2::from_rows(n, rows))
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix(16)) {
            prop_assert_eq!(m.rank_f2(), m.transpose().rank_f2());
        }

        #[test]
        fn kernel_counts_match_exhaustive(m in arb_square(12)) {
            let n = m.cols();
            let exhaustive = (0u64..(1 << n)).filter(|&x| m.mul_vec(x) == 0).count();
            let basis = m.kernel_basis_f2().unwrap();
            prop_assert_eq!(exhaustive, 1usize << basis.len());
            // The basis really is independent: stacking it loses no rank.
            let basis_rank = MatrixF2::from_rows(n, basis.clone()).rank_f2();
            prop_assert_eq!(basis_rank, basis.len());
        }

        #[test]
        fn transpose_is_involutive(m in arb_matrix(16)) {
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
