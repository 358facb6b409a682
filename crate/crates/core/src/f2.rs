//! Dense bit-packed matrices over F_2.

use std::fmt;

const W: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(W)
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Entries are read mod 2.
    pub fn from_rows<T: AsRef<[u8]>>(rows: &[T], cols: usize) -> Self {
        let mut m = F2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, &v) in r.iter().enumerate() {
                if v % 2 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<u8>], rows: usize) -> Self {
        let mut m = F2Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                if v % 2 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / W] >> (j % W)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / W];
        if v {
            *w |= 1 << (j % W);
        } else {
            *w &= !(1 << (j % W));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / W] ^= 1 << (j % W);
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.cols).map(|j| self.get(i, j) as u8).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for k in 0..self.stride {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (s, d) = (k * other.stride, i * out.stride);
                    for w in 0..other.stride {
                        out.data[d + w] ^= other.data[s + w];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| v[j] % 2 == 1 && self.get(i, j)).count() as u8 % 2)
            .collect()
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = F2Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = F2Matrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// Block diagonal [[self, 0], [0, other]].
    pub fn block_diag(&self, other: &F2Matrix) -> F2Matrix {
        let top = self.hstack(&F2Matrix::zeros(self.rows, other.cols));
        let bottom = F2Matrix::zeros(other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    m.rref().1.len()
}

/// Basis of {v : m v = 0}.
pub fn kernel_basis(m: &F2Matrix) -> Vec<Vec<u8>> {
    let (r, pivots) = m.rref();
    let mut basis = Vec::new();
    for f in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; m.cols];
        v[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            if r.get(i, f) {
                v[pc] = 1;
            }
        }
        basis.push(v);
    }
    basis
}

pub fn cokernel_dim(m: &F2Matrix) -> usize {
    m.rows - rank(m)
}

/// Some x with m x = rhs, if one exists.
pub fn solve(m: &F2Matrix, rhs: &[u8]) -> Option<Vec<u8>> {
    assert_eq!(rhs.len(), m.rows);
    let aug = m.hstack(&F2Matrix::from_columns(&[rhs.to_vec()], m.rows));
    let (r, pivots) = aug.rref();
    if pivots.contains(&m.cols) {
        return None;
    }
    let mut x = vec![0u8; m.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(i, m.cols) as u8;
    }
    Some(x)
}

/// Greedy choice of columns of `cands` extending span(base) to span(base + cands);
/// returns the indices of the chosen candidate columns.
pub fn complement_columns(base: &F2Matrix, cands: &F2Matrix) -> Vec<usize> {
    let mut acc = base.clone();
    let mut r = rank(&acc);
    let mut chosen = Vec::new();
    for j in 0..cands.cols() {
        let trial = acc.hstack(&F2Matrix::from_columns(&[cands.column(j)], cands.rows()));
        let rt = rank(&trial);
        if rt > r {
            acc = trial;
            r = rt;
            chosen.push(j);
        }
    }
    chosen
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}
