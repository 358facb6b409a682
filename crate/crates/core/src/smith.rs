//! Integer matrices and Smith normal form with tracked unimodular transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    /// Shape-explicit constructor so empty matrices keep their column count.
    pub fn from_rows_shaped(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination (Bareiss); square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, src: usize, dst: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + f * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, src: usize, dst: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + f * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries d1 | d2 | ...
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    /// Free rank of the cokernel Z^rows / image.
    pub free_rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
}

impl SmithForm {
    /// Elementary divisors of the cokernel: non-unit divisors, then None for each free factor.
    pub fn cokernel_invariants(&self) -> Vec<Option<BigInt>> {
        let mut out: Vec<Option<BigInt>> =
            self.divisors.iter().filter(|d| !d.is_one()).cloned().map(Some).collect();
        out.extend(std::iter::repeat_n(None, self.free_rank));
        out
    }

    /// dim_F2 of cokernel tensor F2: even divisors plus free rank.
    pub fn f2_corank(&self) -> usize {
        self.divisors.iter().filter(|d| d.is_even()).count() + self.free_rank
    }
}

fn min_nonzero(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// P * m * Q = D with P, Q unimodular; the product is re-checked before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut p = IntMatrix::identity(m.rows);
    let mut q = IntMatrix::identity(m.cols);
    let mut t = 0;
    while t < d.rows.min(d.cols) {
        let Some((pi, pj)) = min_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let f = -(d.get(i, t).div_floor(d.get(t, t)));
                d.add_row(t, i, &f);
                p.add_row(t, i, &f);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let f = -(d.get(t, j).div_floor(d.get(t, t)));
                d.add_col(t, j, &f);
                q.add_col(t, j, &f);
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder exists in row t or column t; move it to the pivot
                let (pi, pj) = min_in_cross(&d, t);
                d.swap_rows(t, pi);
                p.swap_rows(t, pi);
                d.swap_cols(t, pj);
                q.swap_cols(t, pj);
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..d.rows)
                .flat_map(|i| (t + 1..d.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(d.get(t, t)));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(i, t, &one);
                    p.add_row(i, t, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    let divisors: Vec<BigInt> = (0..d.rows.min(d.cols))
        .map(|i| d.get(i, i).clone())
        .filter(|v| !v.is_zero())
        .collect();
    let rank = divisors.len();
    assert_eq!(p.mul(m).mul(&q), d, "Smith transforms do not reproduce the diagonal");
    assert!(p.det().abs().is_one() && q.det().abs().is_one(), "Smith transforms not unimodular");
    SmithForm { free_rank: m.rows - rank, divisors, rank, left: p, right: q, diagonal: d }
}

fn min_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..d.rows {
        let v = d.get(i, t);
        if !v.is_zero() && v.abs() < d.get(best.0, best.1).abs() {
            best = (i, t);
        }
    }
    for j in t..d.cols {
        let v = d.get(t, j);
        if !v.is_zero() && v.abs() < d.get(best.0, best.1).abs() {
            best = (t, j);
        }
    }
    best
}
