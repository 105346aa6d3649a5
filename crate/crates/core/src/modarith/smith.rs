//! Smith normal form of integer matrices, with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `M = a * diag(d) * b` with `a`, `b` unimodular and `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<Vec<BigInt>>,
}

impl SmithForm {
    /// The `rows x cols` diagonal matrix.
    pub fn diagonal_matrix(&self) -> Vec<Vec<BigInt>> {
        let rows = self.a.len();
        let cols = self.b.len();
        let mut d = vec![vec![BigInt::zero(); cols]; rows];
        for (i, x) in self.diag.iter().enumerate() {
            d[i][i] = x.clone();
        }
        d
    }
}

pub fn smith_form(m: &[Vec<i64>]) -> SmithForm {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    smith_form_big(&big)
}

pub fn smith_form_big(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut s: Vec<Vec<BigInt>> = m.to_vec();
    // Invariant: input = a * s * b.
    let mut a = identity(rows);
    let mut b = identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = smallest_nonzero(&s, t) {
            swap_rows(&mut s, &mut a, t, pi);
            swap_cols(&mut s, &mut b, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[i][t].div_floor(&s[t][t]);
                if !q.is_zero() {
                    add_row(&mut s, &mut a, i, t, &(-&q));
                }
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = s[t][j].div_floor(&s[t][t]);
                if !q.is_zero() {
                    add_col(&mut s, &mut b, j, t, &(-&q));
                }
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&s[i][j] % &s[t][t]).is_zero()));
            match bad {
                Some(i) => add_row(&mut s, &mut a, t, i, &BigInt::one()),
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -&*x;
            }
            for row in a.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }
    let diag = (0..rows.min(cols)).map(|i| s[i][i].clone()).collect();
    SmithForm { diag, a, b }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn smallest_nonzero(s: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in s.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// Row operations on s are compensated by the inverse column operation on a,
// column operations on s by the inverse row operation on b.

fn swap_rows(s: &mut [Vec<BigInt>], a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        s.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn swap_cols(s: &mut [Vec<BigInt>], b: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in s.iter_mut() {
            row.swap(i, j);
        }
        b.swap(i, j);
    }
}

/// `row_i += q * row_j` on s.
fn add_row(s: &mut [Vec<BigInt>], a: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    let src = s[j].clone();
    for (x, y) in s[i].iter_mut().zip(&src) {
        *x += q * y;
    }
    for row in a.iter_mut() {
        let delta = q * &row[i];
        row[j] -= delta;
    }
}

/// `col_i += q * col_j` on s.
fn add_col(s: &mut [Vec<BigInt>], b: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    for row in s.iter_mut() {
        let delta = q * &row[j];
        row[i] += delta;
    }
    let src = b[i].clone();
    for (x, y) in b[j].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over `Q` by fraction-free row echelon form.
pub fn rank(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            for j in col + 1..cols {
                a[i][j] = (&a[i][j] * &a[r][col] - &a[i][col] * &a[r][j]) / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[r][col].clone();
        r += 1;
    }
    r
}

pub fn matmul(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = y.len();
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &y[k][j]))
                .collect()
        })
        .collect()
}
