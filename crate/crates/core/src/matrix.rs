//! Dense matrices over a [`Ring`], with elimination over local rings and
//! kernels over chain rings.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = RingElem;
    fn index(&self, (i, j): (usize, usize)) -> &RingElem {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RingElem {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![RingElem::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = RingElem::one(ring);
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    /// Integer entries, rows given as slices.
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(ring, rows.len(), cols, |i, j| RingElem::from_int(ring, rows[i][j]))
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { ring: ring.clone(), rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(ring: &Ring, rows: usize, columns: &[Vec<RingElem>]) -> Self {
        Self::from_fn(ring, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(ring: &Ring, entries: &[RingElem]) -> Self {
        let mut m = Self::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
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

    pub fn row(&self, i: usize) -> Vec<RingElem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, ring: &Ring, mut f: impl FnMut(&RingElem) -> RingElem) -> Self {
        Matrix { ring: ring.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn try_map(&self, ring: &Ring, mut f: impl FnMut(&RingElem) -> Result<RingElem>) -> Result<Self> {
        let data = self.data.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { ring: ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Entrywise reduction to a lower level (or the residue field).
    pub fn reduce_to(&self, target: &Ring) -> Result<Self> {
        self.try_map(target, |e| e.reduce_to(target))
    }

    /// Entrywise canonical lift.
    pub fn lift_to(&self, target: &Ring) -> Result<Self> {
        self.try_map(target, |e| target.lift_from(e))
    }

    pub fn residue(&self) -> Self {
        let k = self.ring.residue_field();
        self.map(&k, RingElem::residue)
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        self.map(&self.ring, |e| e * c)
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix shape mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Product; zero entries on the left are skipped, so permutation and
    /// sparse factors are cheap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RingElem]) -> Vec<RingElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = RingElem::zero(&self.ring);
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product: entry `((i,k),(j,l)) = a[i,j] b[k,l]` at row `i*b.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(&self.ring, self.rows * other.rows, self.cols * other.cols, |r, c| {
            let a = &self[(r / other.rows, c / other.cols)];
            if a.is_zero() {
                return RingElem::zero(&self.ring);
            }
            a * &other[(r % other.rows, c % other.cols)]
        })
    }

    /// `out[i][j] = self[rows[i]][cols[j]]`.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation.
    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
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

    /// `row[dst] -= c * row[src]`, restricted to columns `from..`.
    fn row_axpy(&mut self, dst: usize, src: usize, c: &RingElem, from: usize) {
        if c.is_zero() {
            return;
        }
        for j in from..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = c * s;
                self.data[dst * self.cols + j] -= v;
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = c * s;
                self.data[i * self.cols + dst] -= v;
            }
        }
    }

    /// Inverse over a local ring: each column of an invertible matrix has a
    /// unit among its remaining rows, so unit pivots always suffice.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.concat(&Self::identity(&self.ring, n));
        for c in 0..n {
            let piv = (c..n).find(|&r| a[(r, c)].is_unit()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(c, piv);
            let inv = a[(c, c)].inv().expect("unit pivot");
            for j in c..a.cols {
                let v = &a[(c, j)] * &inv;
                a[(c, j)] = v;
            }
            for r in 0..n {
                if r != c {
                    let factor = a[(r, c)].clone();
                    a.row_axpy(r, c, &factor, c);
                }
            }
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(a.select(&rows, &cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.residue().rank() == self.rows
    }

    /// Reduced row echelon form over a field, and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        debug_assert!(self.ring.is_field());
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(r, piv);
            let inv = a[(r, c)].inv().expect("nonzero field element");
            for j in c..a.cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i != r {
                    let factor = a[(i, c)].clone();
                    a.row_axpy(i, r, &factor, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Rank over a field.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel over a field, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<RingElem>> {
        let (a, pivots) = self.rref();
        let zero = RingElem::zero(&self.ring);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![zero.clone(); self.cols];
            v[free] = RingElem::one(&self.ring);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[(r, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// A solution of `self · x = b` over a field with all free variables
    /// zero, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[RingElem]) -> Option<Vec<RingElem>> {
        assert_eq!(b.len(), self.rows);
        let bcol = Self::from_fn(&self.ring, self.rows, 1, |i, _| b[i].clone());
        let (a, pivots) = self.concat(&bcol).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![RingElem::zero(&self.ring); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Generators of the right kernel over a chain ring, via a Smith-form
    /// reduction that records column operations. Over a field this is a basis.
    pub fn kernel_generators(&self) -> Vec<Vec<RingElem>> {
        let ring = &self.ring;
        let level = ring.level();
        let mut b = self.clone();
        let mut q = Self::identity(ring, self.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < b.rows.min(b.cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..b.rows {
                for j in t..b.cols {
                    let v = b[(i, j)].valuation();
                    if v < level && best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            let Some((v, i, j)) = best else { break };
            b.swap_rows(t, i);
            b.swap_cols(t, j);
            q.swap_cols(t, j);
            let pivot = b[(t, t)].clone();
            for r in t + 1..b.rows {
                if let Some(factor) = b[(r, t)].div_exact(&pivot) {
                    b.row_axpy(r, t, &factor, t);
                }
            }
            for c in t + 1..b.cols {
                if let Some(factor) = b[(t, c)].div_exact(&pivot) {
                    b.col_axpy(c, t, &factor);
                    q.col_axpy(c, t, &factor);
                }
            }
            diag.push(v);
            t += 1;
        }
        let mut gens = Vec::new();
        for (c, &v) in diag.iter().enumerate() {
            if v > 0 {
                let s = RingElem::pi_pow(ring, level - v);
                gens.push(q.column(c).iter().map(|e| e * &s).collect());
            }
        }
        for c in diag.len()..self.cols {
            gens.push(q.column(c));
        }
        gens
    }
}

/// `C^T G C`, the Gram matrix of a bilinear form after the basis change `C`.
pub fn gram_transform(g: &Matrix, c: &Matrix) -> Result<Matrix> {
    if !c.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    Ok(c.transpose().mul(g).mul(c))
}
