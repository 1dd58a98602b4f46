//! Dense matrices over a prime field `F_p` with small `p`.

use std::fmt;

use serde::Serialize;

use crate::arith::pow_mod;

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Serialize for FpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[u64]> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.serialize(s)
    }
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = v % p;
            }
        }
        m
    }

    /// Builds a `len × columns.len()` matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(p: u64, len: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len, "column length");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v % p;
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(orow) {
                    *x += a * b;
                }
                // keep accumulators bounded for larger p
                if k % 64 == 63 {
                    acc.iter_mut().for_each(|x| *x %= p);
                }
            }
            for (c, x) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = x % p;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, k: u64) -> FpMatrix {
        let k = k % self.p;
        let data = self.data.iter().map(|a| a * k % self.p).collect();
        FpMatrix { data, ..*self }
    }

    pub fn pow(&self, mut k: u64) -> FpMatrix {
        assert!(self.is_square());
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(p: u64, blocks: &[&FpMatrix]) -> FpMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(p, n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.data[(off + r) * n + off + c] = b.get(r, c);
                }
            }
            off += b.rows;
        }
        out
    }

    /// Square sub-block starting at `(off, off)` of size `len`.
    pub fn diagonal_block(&self, off: usize, len: usize) -> FpMatrix {
        let mut out = Self::zeros(self.p, len, len);
        for r in 0..len {
            for c in 0..len {
                out.data[r * len + c] = self.get(off + r, off + c);
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if sel != prow {
                for k in 0..self.cols {
                    self.data.swap(sel * self.cols + k, prow * self.cols + k);
                }
            }
            let inv = inv_mod(self.get(prow, c), p);
            for k in c..self.cols {
                let i = prow * self.cols + k;
                self.data[i] = self.data[i] * inv % p;
            }
            for r in 0..self.rows {
                if r == prow {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                let m = p - factor;
                for k in c..self.cols {
                    let src = self.data[prow * self.cols + k];
                    if src != 0 {
                        let i = r * self.cols + k;
                        self.data[i] = (self.data[i] + m * src) % p;
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        kernel_from_rref(&m, &pivots)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1 % self.p;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = aug.get(r, n + c);
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Solves `A x = b` for one particular solution.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % self.p;
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

fn kernel_from_rref(m: &FpMatrix, pivots: &[usize]) -> Vec<Vec<u64>> {
    let p = m.p;
    let mut is_pivot = vec![false; m.cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; m.cols];
        v[free] = 1 % p;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = (p - m.get(r, free)) % p;
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained reduced echelon basis of a row space.
///
/// Rows are fed one at a time; only independent rows are stored, so memory
/// is `rank × width` regardless of how many equations are generated.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(p: u64, width: usize) -> Self {
        EchelonBasis {
            p,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            let m = p - f;
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = (*x + m * y) % p;
                }
            }
        }
    }

    /// Whether `v` lies in the current span.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width);
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc], p);
        w.iter_mut().for_each(|x| *x = *x * inv % p);
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                let m = p - f;
                for (x, &y) in row.iter_mut().zip(&w) {
                    if y != 0 {
                        *x = (*x + m * y) % p;
                    }
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    /// Basis of the annihilator `{x : r·x = 0 for all stored rows r}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut is_pivot = vec![false; self.width];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.width).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.width];
            v[free] = 1 % p;
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                v[c] = (p - row[free]) % p;
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of a list of vectors over `F_p`.
pub fn rank_of_vectors(p: u64, vectors: &[Vec<u64>]) -> usize {
    let width = vectors.first().map_or(0, |v| v.len());
    let mut basis = EchelonBasis::new(p, width);
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

impl FpMatrix {
    /// SHA-256 over `(p, rows, cols, entries)`, hex encoded.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for x in [self.p, self.rows as u64, self.cols as u64] {
            h.update(x.to_le_bytes());
        }
        for &x in &self.data {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = FpMatrix::from_rows(5, &[vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]]);
        let inv = a.inverse().expect("invertible");
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
    }

    #[test]
    fn singular_has_kernel() {
        let a = FpMatrix::from_rows(3, &[vec![1, 2], vec![2, 1]]);
        // rows are proportional mod 3
        assert_eq!(a.rank(), 1);
        assert!(a.inverse().is_none());
        let ker = a.kernel();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn echelon_kernel_matches_rref_kernel() {
        let a = FpMatrix::from_rows(2, &[vec![1, 1, 0, 1], vec![0, 1, 1, 1], vec![1, 0, 1, 0]]);
        let mut eb = EchelonBasis::new(2, 4);
        for r in 0..a.rows() {
            eb.insert(a.row(r));
        }
        assert_eq!(eb.rank(), a.rank());
        assert_eq!(eb.kernel().len(), a.kernel().len());
        for v in eb.kernel() {
            assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_particular() {
        let a = FpMatrix::from_rows(7, &[vec![2, 3], vec![1, 6]]);
        let x = a.solve(&[4, 5]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![4, 5]);
    }
}
