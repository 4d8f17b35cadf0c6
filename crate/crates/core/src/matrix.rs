//! Sparse exact matrices over F₂ and over ℤ.
//!
//! Both types keep sorted row-major and column-major views side by side:
//! sparsity bounds are stated on rows and on columns, and most algorithms
//! walk one or the other.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bits::{Bits, Echelon};
use crate::error::{Error, Result};

/// Sparse matrix over the two-element field, stored as the set of positions holding 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    by_row: Vec<Vec<usize>>,
    by_col: Vec<Vec<usize>>,
}

impl BinMatrix {
    /// Build from a list of positions. Out-of-range and duplicate positions are errors.
    pub fn new(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut by_row = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            by_row[r].push(c);
        }
        for (r, row) in by_row.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEntry { row: r, col: w[0] });
            }
        }
        Ok(Self::from_sorted_rows(rows, cols, by_row))
    }

    /// Build from positions where repeated positions cancel in pairs.
    ///
    /// This is the natural constructor for boundaries written as sums of cells.
    pub fn from_parity(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut by_row = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            by_row[r].push(c);
        }
        for row in by_row.iter_mut() {
            row.sort_unstable();
            let mut out: Vec<usize> = Vec::with_capacity(row.len());
            for &c in row.iter() {
                if out.last() == Some(&c) {
                    out.pop();
                } else {
                    out.push(c);
                }
            }
            *row = out;
        }
        Ok(Self::from_sorted_rows(rows, cols, by_row))
    }

    fn from_sorted_rows(rows: usize, cols: usize, by_row: Vec<Vec<usize>>) -> Self {
        let mut by_col = vec![Vec::new(); cols];
        for (r, row) in by_row.iter().enumerate() {
            for &c in row {
                by_col[c].push(r);
            }
        }
        Self {
            rows,
            cols,
            by_row,
            by_col,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sorted_rows(rows, cols, vec![Vec::new(); rows])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sorted_rows(n, n, (0..n).map(|i| vec![i]).collect())
    }

    /// Build from dense rows of bits.
    pub fn from_bit_rows(cols: usize, rows: &[Bits]) -> Self {
        let by_row = rows
            .iter()
            .map(|b| {
                debug_assert_eq!(b.len(), cols);
                b.ones().collect()
            })
            .collect();
        Self::from_sorted_rows(rows.len(), cols, by_row)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.by_row.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.by_row[r].binary_search(&c).is_ok()
    }

    /// Sorted column indices of the ones in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.by_row[r]
    }

    /// Sorted row indices of the ones in column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.by_col[c]
    }

    /// Positions in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_row
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.by_row.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> BinMatrix {
        BinMatrix {
            rows: self.cols,
            cols: self.rows,
            by_row: self.by_col.clone(),
            by_col: self.by_row.clone(),
        }
    }

    /// Product over F₂. Panics on incompatible shapes.
    pub fn mul(&self, other: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut acc = Bits::zeros(other.cols);
        let mut by_row = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            for &k in &self.by_row[r] {
                for &c in &other.by_row[k] {
                    acc.flip(c);
                }
            }
            let row: Vec<usize> = acc.ones().collect();
            for &c in &row {
                acc.flip(c);
            }
            by_row.push(row);
        }
        Self::from_sorted_rows(self.rows, other.cols, by_row)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &Bits) -> Bits {
        assert_eq!(v.len(), self.cols);
        let mut out = Bits::zeros(self.rows);
        for c in v.ones() {
            for &r in &self.by_col[c] {
                out.flip(r);
            }
        }
        out
    }

    /// Dense copy of the rows.
    pub fn to_bit_rows(&self) -> Vec<Bits> {
        self.by_row
            .iter()
            .map(|row| Bits::from_indices(self.cols, row.iter().copied()))
            .collect()
    }

    /// Dense copy of the columns.
    pub fn to_bit_cols(&self) -> Vec<Bits> {
        self.by_col
            .iter()
            .map(|col| Bits::from_indices(self.rows, col.iter().copied()))
            .collect()
    }

    /// Rank over F₂ by elimination.
    pub fn rank(&self) -> usize {
        // Eliminate along the shorter dimension.
        let vectors = if self.rows <= self.cols {
            self.to_bit_rows()
        } else {
            self.to_bit_cols()
        };
        let mut ech = Echelon::new(self.rows.max(self.cols));
        for v in vectors {
            ech.insert(v);
        }
        ech.rank()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Bits> {
        // Reduced row echelon form of M, then one basis vector per free column.
        let mut rows = self.to_bit_rows();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push((next, c));
            next += 1;
        }
        let mut is_pivot = vec![false; self.cols];
        for &(_, c) in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = Bits::zeros(self.cols);
                v.set(f);
                for &(r, c) in &pivots {
                    if rows[r].get(f) {
                        v.set(c);
                    }
                }
                v
            })
            .collect()
    }

    /// Largest number of ones in any row or column.
    pub fn max_weight(&self) -> usize {
        let r = self.by_row.iter().map(Vec::len).max().unwrap_or(0);
        let c = self.by_col.iter().map(Vec::len).max().unwrap_or(0);
        r.max(c)
    }

    /// Entrywise 0 ↦ 0, 1 ↦ 1.
    pub fn naive_lift(&self) -> IntMatrix {
        IntMatrix::from_sorted_rows(
            self.rows,
            self.cols,
            self.by_row
                .iter()
                .map(|row| row.iter().map(|&c| (c, BigInt::one())).collect())
                .collect(),
        )
    }
}

impl std::fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.by_row {
            let mut line = vec!['.'; self.cols];
            for &c in row {
                line[c] = '1';
            }
            writeln!(f, "  {}", line.into_iter().collect::<String>())?;
        }
        Ok(())
    }
}

/// Sparse matrix over ℤ with arbitrary-precision entries. Stored values are never zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    by_row: Vec<Vec<(usize, BigInt)>>,
    by_col: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    /// Build from `(row, col, value)` triplets. Zero values are dropped;
    /// out-of-range and duplicate positions are errors.
    pub fn new(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut by_row: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            by_row[r].push((c, v));
        }
        for (r, row) in by_row.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: r, col: w[0].0 });
            }
            row.retain(|e| !e.1.is_zero());
        }
        Ok(Self::from_sorted_rows(rows, cols, by_row))
    }

    /// Build from triplets, summing repeated positions.
    pub fn from_sum(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut by_row: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            by_row[r].push((c, v));
        }
        for row in by_row.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match out.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|e| !e.1.is_zero());
            *row = out;
        }
        Ok(Self::from_sorted_rows(rows, cols, by_row))
    }

    /// Convenience constructor from small machine integers, row-major.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| BigInt::from(v)).collect()
            })
            .collect();
        Self::from_dense(rows.len(), cols, &dense)
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<BigInt>]) -> Self {
        assert_eq!(dense.len(), rows);
        let by_row = dense
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols);
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(rows, cols, by_row)
    }

    fn from_sorted_rows(rows: usize, cols: usize, by_row: Vec<Vec<(usize, BigInt)>>) -> Self {
        let mut by_col = vec![Vec::new(); cols];
        for (r, row) in by_row.iter().enumerate() {
            for (c, v) in row {
                by_col[*c].push((r, v.clone()));
            }
        }
        Self {
            rows,
            cols,
            by_row,
            by_col,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sorted_rows(rows, cols, vec![Vec::new(); rows])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sorted_rows(n, n, (0..n).map(|i| vec![(i, BigInt::one())]).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.by_row.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.by_row[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.by_row[r][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.by_row[r]
    }

    pub fn col(&self, c: usize) -> &[(usize, BigInt)] {
        &self.by_col[c]
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.by_row
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.by_row.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            by_row: self.by_col.clone(),
            by_col: self.by_row.clone(),
        }
    }

    /// Product over ℤ. Panics on incompatible shapes.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut by_row = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            for (k, a) in &self.by_row[r] {
                for (c, b) in &other.by_row[*k] {
                    if acc[*c].is_zero() {
                        touched.push(*c);
                    }
                    acc[*c] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut row = Vec::new();
            for &c in &touched {
                let v = std::mem::take(&mut acc[c]);
                if !v.is_zero() {
                    row.push((c, v));
                }
            }
            touched.clear();
            by_row.push(row);
        }
        Self::from_sorted_rows(self.rows, other.cols, by_row)
    }

    /// Apply to an integer column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        self.by_row
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect()
    }

    /// Entrywise reduction mod 2.
    pub fn mod2(&self) -> BinMatrix {
        let two = BigInt::from(2);
        BinMatrix::from_sorted_rows(
            self.rows,
            self.cols,
            self.by_row
                .iter()
                .map(|row| {
                    row.iter()
                        .filter(|(_, v)| !(v % &two).is_zero())
                        .map(|(c, _)| *c)
                        .collect()
                })
                .collect(),
        )
    }

    /// Largest ℓ₁ norm over all rows and columns.
    pub fn max_l1(&self) -> BigInt {
        let l1 = |line: &Vec<(usize, BigInt)>| line.iter().map(|(_, v)| v.abs()).sum::<BigInt>();
        self.by_row
            .iter()
            .chain(self.by_col.iter())
            .map(l1)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// ℓ₁ norm of column `c`.
    pub fn col_l1(&self, c: usize) -> BigInt {
        self.by_col[c].iter().map(|(_, v)| v.abs()).sum()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut col_pos = std::collections::HashMap::new();
        for (j, &c) in cols.iter().enumerate() {
            col_pos.insert(c, j);
        }
        let by_row = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, BigInt)> = self.by_row[r]
                    .iter()
                    .filter_map(|(c, v)| col_pos.get(c).map(|&j| (j, v.clone())))
                    .collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        Self::from_sorted_rows(rows.len(), cols.len(), by_row)
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
