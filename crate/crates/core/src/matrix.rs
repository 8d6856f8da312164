//! Dense matrices over GF(2^8).
//!
//! Codewords are column vectors throughout: a stripe is `y = G * x` with `G`
//! of shape `n x k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{self, Gf};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GfMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(r) {
                write!(f, "{v} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl GfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> GfMatrix {
        GfMatrix { rows, cols, data: vec![Gf::ZERO; rows * cols] }
    }

    pub fn identity(order: usize) -> GfMatrix {
        let mut m = GfMatrix::zeros(order, order);
        for i in 0..order {
            m[(i, i)] = Gf::ONE;
        }
        m
    }

    pub fn from_rows<R: AsRef<[Gf]>>(rows: &[R]) -> Result<GfMatrix> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Contract("ragged rows".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(GfMatrix { rows: rows.len(), cols, data })
    }

    /// Convenience for tests and literals.
    pub fn from_bytes(rows: &[&[u8]]) -> Result<GfMatrix> {
        let rows: Vec<Vec<Gf>> = rows.iter().map(|r| r.iter().copied().map(Gf).collect()).collect();
        GfMatrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Gf] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Gf] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| self.row(r).iter().enumerate().all(|(c, v)| *v == if r == c { Gf::ONE } else { Gf::ZERO }))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Stacks the given rows of `self` into a new matrix.
    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        GfMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> GfMatrix {
        let mut m = GfMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m[(r, j)] = self[(r, c)];
            }
        }
        m
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::Contract("vstack column mismatch".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GfMatrix { rows: self.rows + other.rows, cols, data })
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut t = GfMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &GfMatrix) -> Result<GfMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Contract(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = GfMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for (i, &a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(i, c)];
                }
            }
        }
        Ok(out)
    }

    /// Applies `self` to a vector of equal-length byte blocks: `out[r] = sum_c m[r][c] * blocks[c]`.
    pub fn mul_blocks<B: AsRef<[u8]>>(&self, blocks: &[B]) -> Result<Vec<Vec<u8>>> {
        if blocks.len() != self.cols {
            return Err(Error::Contract(format!("expected {} blocks, got {}", self.cols, blocks.len())));
        }
        let len = blocks.first().map_or(0, |b| b.as_ref().len());
        let mut out = vec![vec![0u8; len]; self.rows];
        for (r, dst) in out.iter_mut().enumerate() {
            for (c, src) in blocks.iter().enumerate() {
                gf::mul_block_acc(dst, self[(r, c)], src.as_ref())?;
            }
        }
        Ok(out)
    }

    /// Entry `(i, j) = points[j]^(start_power + i)`.
    pub fn vandermonde(points: &[Gf], num_rows: usize, start_power: usize) -> Result<GfMatrix> {
        if num_rows == 0 {
            return Err(Error::Parameter("vandermonde needs at least one row".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Parameter(format!("duplicate evaluation point {p:?}")));
            }
            if start_power >= 1 && p.is_zero() {
                return Err(Error::Parameter("zero evaluation point with positive powers".into()));
            }
        }
        let mut m = GfMatrix::zeros(num_rows, points.len());
        for (j, &p) in points.iter().enumerate() {
            for i in 0..num_rows {
                m[(i, j)] = p.pow(start_power + i);
            }
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate()
    }

    /// Forward elimination in place; returns the rank.
    fn eliminate(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(rank, p);
            let inv = self[(rank, col)].inv().expect("nonzero pivot");
            for r in rank + 1..self.rows {
                let f = self[(r, col)];
                if f.is_zero() {
                    continue;
                }
                let f = f * inv;
                for c in col..self.cols {
                    let v = self[(rank, c)];
                    self[(r, c)] += f * v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn invert(&self) -> Result<GfMatrix> {
        if self.rows != self.cols {
            return Err(Error::Contract(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = GfMatrix::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::Decode(format!("singular matrix (column {col})")))?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let s = a[(col, col)].inv()?;
            for c in 0..n {
                a[(col, c)] *= s;
                inv[(col, c)] *= s;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let (av, iv) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] += f * av;
                    inv[(r, c)] += f * iv;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = rhs` where each unknown and each right-hand side is a byte block.
    pub fn solve<B: AsRef<[u8]>>(&self, rhs: &[B]) -> Result<Vec<Vec<u8>>> {
        if rhs.len() != self.rows {
            return Err(Error::Contract(format!("{} right-hand sides for {} equations", rhs.len(), self.rows)));
        }
        if let Some(first) = rhs.first() {
            let len = first.as_ref().len();
            if rhs.iter().any(|b| b.as_ref().len() != len) {
                return Err(Error::Contract("unequal block sizes".into()));
            }
        }
        self.invert()?.mul_blocks(rhs)
    }

    /// Parity-check matrix of a systematic generator `G = [I_k ; A]`: `H = [A | I_{n-k}]`.
    pub fn derive_parity_check(&self) -> Result<GfMatrix> {
        let (n, k) = (self.rows, self.cols);
        if n < k || !self.select_rows(&(0..k).collect::<Vec<_>>()).is_identity() {
            return Err(Error::Contract("generator is not systematic".into()));
        }
        let m = n - k;
        let mut h = GfMatrix::zeros(m, n);
        for r in 0..m {
            for c in 0..k {
                h[(r, c)] = self[(k + r, c)];
            }
            h[(r, k + r)] = Gf::ONE;
        }
        Ok(h)
    }
}

impl std::ops::Index<(usize, usize)> for GfMatrix {
    type Output = Gf;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Gf {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GfMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Gf {
        &mut self.data[r * self.cols + c]
    }
}

/// Incrementally built row basis in reduced form, for picking independent rows greedily.
#[derive(Clone, Debug)]
pub struct RowBasis {
    cols: usize,
    // (pivot column, row normalised so that the pivot is one)
    rows: Vec<(usize, Vec<Gf>)>,
}

impl RowBasis {
    pub fn new(cols: usize) -> RowBasis {
        RowBasis { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Gf]) {
        for (p, b) in &self.rows {
            let f = v[*p];
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += f * *y;
                }
            }
        }
    }

    /// Adds `row` if it is independent of the current basis. Returns whether it was added.
    pub fn insert(&mut self, row: &[Gf]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let mut v = row.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = v[p].inv().expect("nonzero");
        for x in v.iter_mut() {
            *x *= s;
        }
        // keep existing rows reduced against the new pivot
        for (_, b) in self.rows.iter_mut() {
            let f = b[p];
            if !f.is_zero() {
                for (x, y) in b.iter_mut().zip(&v) {
                    *x += f * *y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, row: &[Gf]) -> bool {
        let mut v = row.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| x.is_zero())
    }
}
