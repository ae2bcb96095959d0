//! Dense exact vectors and matrices, and Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    /// An empty matrix with a fixed column count.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[F]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vec<F>) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols, "mul_vec dimension");
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "mul dimension");
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols, "vstack dimension");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<F> {
        let mut m = Matrix::empty(self.cols);
        for &i in idx {
            m.push_row(self.row(i).to_vec());
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self.to_rows(), self.cols).pivots.len()
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .data
            .chunks(self.cols.max(1))
            .map(|r| r.iter().map(|v| format!("{v:?}")).collect())
            .collect();
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, rows)
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut s = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s = s + x.clone() * y.clone();
        }
    }
    s
}

pub fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<F: Field>(s: &F, a: &[F]) -> Vec<F> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn neg<F: Field>(a: &[F]) -> Vec<F> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// `(1 - t) a + t b`.
pub fn lerp<F: Field>(a: &[F], b: &[F], t: &F) -> Vec<F> {
    let s = F::one() - t.clone();
    a.iter()
        .zip(b)
        .map(|(x, y)| s.clone() * x.clone() + t.clone() * y.clone())
        .collect()
}

/// Scales `v` so that its first nonzero entry is `±1`.
pub fn normalize_direction<F: Field>(v: &[F]) -> Vec<F> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs();
            v.iter().map(|x| x.clone() / s.clone()).collect()
        }
        None => v.to_vec(),
    }
}

/// `(a, b, …)`.
pub fn fmt_vec<F: fmt::Display>(v: &[F]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn zeros<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = zeros(n);
    v[i] = F::one();
    v
}

/// Reduced row echelon form of an augmented or plain system.
pub(crate) struct Rref<F> {
    pub rows: Vec<Vec<F>>,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
}

/// Row-reduces `rows` (each of length `width`), considering only the first
/// `pivot_cols` columns for pivots.
pub(crate) fn rref_partial<F: Field>(mut rows: Vec<Vec<F>>, pivot_cols: usize) -> Rref<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Rref { rows, pivots }
}

pub(crate) fn rref<F: Field>(rows: Vec<Vec<F>>, cols: usize) -> Rref<F> {
    rref_partial(rows, cols)
}

/// Result of an exact linear solve `E x = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution<F> {
    /// Particular solution with all free variables at zero, when consistent.
    pub solution: Option<Vec<F>>,
    /// Basis of `ker E`, each vector scaled so its first nonzero entry is
    /// positive.
    pub nullspace: Vec<Vec<F>>,
    pub rank: usize,
}

pub fn solve_linear<F: Field>(e: &Matrix<F>, d: &[F]) -> Result<LinearSolution<F>> {
    if d.len() != e.rows() {
        return Err(Error::DimensionMismatch {
            expected: e.rows(),
            found: d.len(),
        });
    }
    let n = e.cols();
    let aug: Vec<Vec<F>> = e
        .row_iter()
        .zip(d)
        .map(|(r, b)| {
            let mut v = r.to_vec();
            v.push(b.clone());
            v
        })
        .collect();
    let red = rref_partial(aug, n);
    let rank = red.pivots.len();
    // Rows past the pivots are zero in the coefficient part.
    let consistent = red.rows[rank..].iter().all(|r| r[n].is_zero());
    let solution = consistent.then(|| {
        let mut x = zeros(n);
        for (row, &c) in red.rows.iter().zip(&red.pivots) {
            x[c] = row[n].clone();
        }
        x
    });
    let nullspace = kernel_from_rref(&red.rows[..rank], &red.pivots, n);
    Ok(LinearSolution {
        solution,
        nullspace,
        rank,
    })
}

fn kernel_from_rref<F: Field>(rows: &[Vec<F>], pivots: &[usize], n: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = zeros(n);
        v[free] = F::one();
        for (row, &p) in rows.iter().zip(pivots) {
            v[p] = -row[free].clone();
        }
        let v = match v.iter().find(|x| !x.is_zero()) {
            Some(first) if first.is_negative() => neg(&v),
            _ => v,
        };
        basis.push(v);
    }
    basis
}

/// Basis of the kernel of the matrix whose rows are `rows`.
pub fn nullspace<F: Field>(rows: &[Vec<F>], n: usize) -> Vec<Vec<F>> {
    let red = rref(rows.to_vec(), n);
    let rank = red.pivots.len();
    kernel_from_rref(&red.rows[..rank], &red.pivots, n)
}

/// Canonical basis (reduced row echelon rows) of a row space.
pub fn row_space_basis<F: Field>(rows: &[Vec<F>], n: usize) -> Vec<Vec<F>> {
    let red = rref(rows.to_vec(), n);
    let rank = red.pivots.len();
    red.rows.into_iter().take(rank).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn q(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    #[test]
    fn underdetermined_system() {
        let e = Matrix::<Rat>::from_i64(&[&[1, 1]]);
        let s = solve_linear(&e, &[q(1)]).unwrap();
        assert_eq!(s.solution, Some(vec![q(1), q(0)]));
        assert_eq!(s.nullspace, vec![vec![q(1), q(-1)]]);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn overdetermined_consistent() {
        let e = Matrix::<Rat>::from_i64(&[&[1], &[2]]);
        let s = solve_linear(&e, &[q(1), q(2)]).unwrap();
        assert_eq!(s.solution, Some(vec![q(1)]));
        assert!(s.nullspace.is_empty());
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn inconsistent() {
        let e = Matrix::<Rat>::from_i64(&[&[1], &[1]]);
        let s = solve_linear(&e, &[q(0), q(1)]).unwrap();
        assert_eq!(s.solution, None);
    }

    #[test]
    fn dimension_check() {
        let e = Matrix::<Rat>::from_i64(&[&[1], &[1]]);
        assert!(matches!(
            solve_linear(&e, &[q(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let e = Matrix::<Rat>::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 9]]);
        let s = solve_linear(&e, &[q(1), q(1)]).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.nullspace.len(), 2);
        for k in &s.nullspace {
            assert!(is_zero_vec(&e.mul_vec(k)));
        }
        let x = s.solution.unwrap();
        assert_eq!(e.mul_vec(&x), vec![q(1), q(1)]);
    }
}
