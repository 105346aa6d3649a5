//! Row-module linear algebra over the chain ring `Z/p^N`.
//!
//! Matrices act on row vectors: a matrix with `m` rows and `n` columns is the
//! map `x -> x * M` from `(Z/p^N)^m` to `(Z/p^N)^n`, and its row module is the
//! image. The workhorse is the Howell form, whose defining property is that
//! for every `k` the rows vanishing in the first `k` columns span exactly the
//! elements of the row module vanishing there. Kernels, preimages and
//! subquotients are all read off Howell forms of stacked matrices.

use std::fmt;

use super::ResidueRing;

#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    ring: ResidueRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(ring: ResidueRing, rows: usize, cols: usize) -> Self {
        Self {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: ResidueRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1 % ring.modulus());
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced into the ring.
    pub fn from_rows(ring: ResidueRing, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().map(|&x| ring.reduce_u64(x)));
        }
        Self {
            ring,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64_rows(ring: ResidueRing, cols: usize, rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.reduce_i64(x)).collect())
            .collect();
        Self::from_rows(ring, cols, &rows)
    }

    #[inline]
    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.ring.reduce_u64(v);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data
            .extend(row.iter().map(|&x| self.ring.reduce_u64(x)));
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let r = self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    axpy(r, dst, other.row(k), a, 0);
                }
            }
        }
        out
    }

    /// `x * self` for a row vector `x`.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        let mut out = vec![0; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a != 0 {
                axpy(self.ring, &mut out, self.row(k), a, 0);
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = Self::zeros(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * out.cols..(i + 1) * out.cols];
            dst[..self.cols].copy_from_slice(self.row(i));
            dst[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Columns `start..end` of every row.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        let rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| self.row(i)[start..end].to_vec())
            .collect();
        Self::from_rows(self.ring, end - start, &rows)
    }

    /// The same integer entries read in another ring (reduction or lift).
    pub fn recast(&self, ring: ResidueRing) -> Self {
        Self {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| ring.reduce_u64(x)).collect(),
        }
    }

    fn from_row_vecs(ring: ResidueRing, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            data.extend(r);
        }
        Self {
            ring,
            rows: n,
            cols,
            data,
        }
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// `dst -= q * src` on entries `start..`.
#[inline]
fn axpy_neg(r: ResidueRing, dst: &mut [u64], src: &[u64], q: u64, start: usize) {
    let nq = r.neg(r.reduce_u64(q));
    axpy(r, dst, src, nq, start);
}

/// `dst += q * src` on entries `start..`.
#[inline]
fn axpy(r: ResidueRing, dst: &mut [u64], src: &[u64], q: u64, start: usize) {
    if q == 0 {
        return;
    }
    for (d, &s) in dst[start..].iter_mut().zip(&src[start..]) {
        if s != 0 {
            *d = r.add(*d, r.mul(q, s));
        }
    }
}

fn scale_row(r: ResidueRing, row: &mut [u64], c: u64) {
    for x in row.iter_mut() {
        *x = r.mul(*x, c);
    }
}

struct Echelon {
    rows: Vec<Vec<u64>>,
    transform: Option<Vec<Vec<u64>>>,
    pivots: Vec<(usize, u32)>,
}

/// Howell reduction of `rows` in place. With `track`, a transform is kept
/// with one row per working row; rows appended for the Howell closure count
/// as extra zero rows of the input.
fn howell_reduce(ring: ResidueRing, cols: usize, rows: Vec<Vec<u64>>, track: bool) -> Echelon {
    let n_in = rows.len();
    let mut a = rows;
    let mut u: Option<Vec<Vec<u64>>> = track.then(|| {
        (0..n_in)
            .map(|i| {
                let mut e = vec![0; n_in];
                e[i] = 1 % ring.modulus();
                e
            })
            .collect()
    });
    let p = ring.p();
    let prec = ring.precision();
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let mut best: Option<(usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            let x = row[c];
            if x != 0 {
                let v = ring.valuation(x);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        a.swap(r, bi);
        if let Some(u) = u.as_mut() {
            u.swap(r, bi);
        }
        let pv = p.pow(v);
        let unit = a[r][c] / pv;
        if unit != 1 {
            let inv = ring.inv(unit).expect("unit part is invertible");
            scale_row(ring, &mut a[r][c..], inv);
            if let Some(u) = u.as_mut() {
                scale_row(ring, &mut u[r], inv);
            }
        }
        let pivot_row = a[r].clone();
        let pivot_u = u.as_ref().map(|u| u[r].clone());
        for i in r + 1..a.len() {
            let x = a[i][c];
            if x == 0 {
                continue;
            }
            let q = x / pv;
            axpy_neg(ring, &mut a[i], &pivot_row, q, c);
            if let (Some(u), Some(pu)) = (u.as_mut(), pivot_u.as_ref()) {
                axpy_neg(ring, &mut u[i], pu, q, 0);
            }
        }
        if v > 0 {
            // The annihilator multiple p^(N-v) * pivot row must join the rows below.
            let mult = p.pow(prec - v);
            let z = match (r + 1..a.len()).find(|&i| a[i].iter().all(|&x| x == 0)) {
                Some(z) => z,
                None => {
                    a.push(vec![0; cols]);
                    if let Some(u) = u.as_mut() {
                        let width = u.len() + 1;
                        for row in u.iter_mut() {
                            row.push(0);
                        }
                        let mut e = vec![0; width];
                        e[width - 1] = 1 % ring.modulus();
                        u.push(e);
                    }
                    a.len() - 1
                }
            };
            axpy(ring, &mut a[z], &pivot_row, mult, c);
            if let (Some(u), Some(pu)) = (u.as_mut(), pivot_u.as_ref()) {
                let width = u[z].len();
                let mut pu = pu.clone();
                pu.resize(width, 0);
                axpy(ring, &mut u[z], &pu, mult, 0);
            }
        }
        pivots.push((c, v));
        r += 1;
        if r == a.len() {
            break;
        }
    }
    // Reduce entries above each pivot modulo the pivot, top to bottom.
    for (k, &(c, v)) in pivots.iter().enumerate() {
        let pv = p.pow(v);
        let pivot_row = a[k].clone();
        let pivot_u = u.as_ref().map(|u| u[k].clone());
        for i in 0..k {
            let q = a[i][c] / pv;
            if q == 0 {
                continue;
            }
            axpy_neg(ring, &mut a[i], &pivot_row, q, c);
            if let (Some(u), Some(pu)) = (u.as_mut(), pivot_u.as_ref()) {
                let mut pu = pu.clone();
                pu.resize(u[i].len(), 0);
                axpy_neg(ring, &mut u[i], &pu, q, 0);
            }
        }
    }
    Echelon {
        rows: a,
        transform: u,
        pivots,
    }
}

/// Howell form `H` of `m` together with an invertible `U` such that
/// `U * [m; 0] = H`, where `[m; 0]` is `m` padded with zero rows up to the
/// row count of `H`. Nonzero rows of `H` come first.
pub fn howell_form(m: &ModMatrix) -> (ModMatrix, ModMatrix) {
    let ring = m.ring();
    let e = howell_reduce(ring, m.cols(), m.to_rows(), true);
    let n = e.rows.len();
    let u = e.transform.expect("tracked");
    let u_rows: Vec<Vec<u64>> = u
        .into_iter()
        .map(|mut row| {
            row.resize(n, 0);
            row
        })
        .collect();
    (
        ModMatrix::from_row_vecs(ring, m.cols(), e.rows),
        ModMatrix::from_row_vecs(ring, n, u_rows),
    )
}

/// The nonzero rows of the Howell form: a canonical generating set of the row module.
pub fn howell_basis(m: &ModMatrix) -> ModMatrix {
    let ring = m.ring();
    let e = howell_reduce(ring, m.cols(), m.to_rows(), false);
    let k = e.pivots.len();
    ModMatrix::from_row_vecs(ring, m.cols(), e.rows.into_iter().take(k).collect())
}

/// `log_p` of the size of the row module.
pub fn row_module_log_size(m: &ModMatrix) -> u64 {
    let ring = m.ring();
    let e = howell_reduce(ring, m.cols(), m.to_rows(), false);
    e.pivots
        .iter()
        .map(|&(_, v)| (ring.precision() - v) as u64)
        .sum()
}

/// True when the two matrices have the same row module.
pub fn same_row_module(a: &ModMatrix, b: &ModMatrix) -> bool {
    howell_basis(a) == howell_basis(b)
}

/// Generators of `{ x : x * a = 0 }`.
pub fn left_kernel(a: &ModMatrix) -> ModMatrix {
    let ring = a.ring();
    let aug = a.hstack(&ModMatrix::identity(ring, a.rows()));
    tail_block(&aug, a.cols())
}

/// Generators of `{ y : y * a` lies in the row module of `s` `}`.
pub fn preimage(a: &ModMatrix, s: &ModMatrix) -> ModMatrix {
    let ring = a.ring();
    let top = a.hstack(&ModMatrix::identity(ring, a.rows()));
    let bottom = s.hstack(&ModMatrix::zeros(ring, s.rows(), a.rows()));
    tail_block(&top.vstack(&bottom), a.cols())
}

/// Rows of the Howell form of `aug` vanishing on the first `split` columns,
/// restricted to the remaining columns.
fn tail_block(aug: &ModMatrix, split: usize) -> ModMatrix {
    let ring = aug.ring();
    let e = howell_reduce(ring, aug.cols(), aug.to_rows(), false);
    let rows: Vec<Vec<u64>> = e
        .pivots
        .iter()
        .enumerate()
        .filter(|(_, &(c, _))| c >= split)
        .map(|(k, _)| e.rows[k][split..].to_vec())
        .collect();
    ModMatrix::from_row_vecs(ring, aug.cols() - split, rows)
}

/// Valuations of the Smith diagonal of `m`, one per column, ascending; a zero
/// diagonal entry is reported as `N`. The cokernel `(Z/p^N)^cols / rows(m)`
/// is the sum of `Z/p^v` over these valuations.
pub fn local_smith(m: &ModMatrix) -> Vec<u32> {
    let ring = m.ring();
    let prec = ring.precision();
    let mut a = m.to_rows();
    let rows = a.len();
    let cols = m.cols();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut diag = Vec::with_capacity(cols);
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for &j in &col_perm[t..] {
                let x = row[j];
                if x != 0 {
                    let v = ring.valuation(x);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(t, bi);
        let pos = col_perm
            .iter()
            .position(|&j| j == bj)
            .expect("column present");
        col_perm.swap(t, pos);
        let pv = ring.p().pow(v);
        let pivot_row = a[t].clone();
        for row in a.iter_mut().skip(t + 1) {
            let x = row[bj];
            if x != 0 {
                let unit_inv = ring.inv(pivot_row[bj] / pv).expect("unit");
                let q = ring.mul(x / pv, unit_inv);
                axpy_neg(ring, row, &pivot_row, q, 0);
            }
        }
        // Column operations only touch row t now; the pivot absorbs them.
        diag.push(v);
    }
    diag.resize(cols, prec);
    diag.sort_unstable();
    diag
}

/// Exponents `e` (ascending) of the invariant factors `p^e` of the cokernel
/// `(Z/p^N)^cols / rows(m)`, trivial factors omitted.
pub fn coker_exponents(m: &ModMatrix) -> Vec<u32> {
    local_smith(m).into_iter().filter(|&v| v > 0).collect()
}

/// Invariant factor exponents of `span(z) / (span(z) ∩ span(b))`.
pub fn subquotient_exponents(z: &ModMatrix, b: &ModMatrix) -> Vec<u32> {
    let p = preimage(z, b);
    if p.rows() == 0 {
        return vec![z.ring().precision(); z.rows()];
    }
    coker_exponents(&p)
}
