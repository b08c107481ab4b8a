//! Dense matrices over [`Scalar`] with exact elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Poly, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Counts of positive, negative and zero directions of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc + a * b })
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// The matrix with row `r` and column `c` removed.
    pub fn minor_matrix(&self, r: usize, c: usize) -> Self {
        let rs: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.submatrix(&rs, &cs)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Scalar {
        self.det_bareiss(usize::MAX)
            .expect("exact Bareiss division failed without a term budget")
    }

    /// Bareiss elimination whose polynomial divisions give up once an
    /// intermediate remainder exceeds `term_budget` terms.
    pub fn det_bareiss(&self, term_budget: usize) -> Option<Scalar> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Scalar::one());
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = Scalar::one();
        for k in 0..n - 1 {
            let pivot = (k..n)
                .filter(|&i| !a[(i, k)].is_zero())
                .min_by_key(|&i| pivot_cost(&a[(i, k)]));
            let Some(p) = pivot else {
                return Some(Scalar::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                sign = !sign;
            }
            let akk = a[(k, k)].clone();
            for i in k + 1..n {
                let aik = a[(i, k)].clone();
                for j in k + 1..n {
                    let num = &(&akk * &a[(i, j)]) - &(&aik * &a[(k, j)]);
                    a[(i, j)] = exact_div(&num, &prev, term_budget)?;
                }
                a[(i, k)] = Scalar::zero();
            }
            prev = akk;
        }
        let d = a[(n - 1, n - 1)].clone();
        Some(if sign { -d } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Transposed cofactor matrix; available over every scalar ring.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let d = self.minor_matrix(j, i).det();
            if (i + j) % 2 == 1 {
                -d
            } else {
                d
            }
        })
    }

    /// Inverse by Gauss–Jordan elimination (field scalars only).
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let mut chosen = None;
            for i in k..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                if let Ok(r) = a[(i, k)].inv() {
                    chosen = Some((i, r));
                    break;
                }
            }
            let Some((p, r)) = chosen else {
                return Err(Error::SingularMatrix);
            };
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] * &r;
                inv[(k, j)] = &inv[(k, j)] * &r;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    if !a[(k, j)].is_zero() {
                        a[(i, j)] = &a[(i, j)] - &(&f * &a[(k, j)]);
                    }
                    if !inv[(k, j)].is_zero() {
                        inv[(i, j)] = &inv[(i, j)] - &(&f * &inv[(k, j)]);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form and pivot columns (field scalars only).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].inv().expect("rref needs invertible pivots");
            for j in c..self.cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..self.cols {
                    if !a[(r, j)].is_zero() {
                        a[(i, j)] = &a[(i, j)] - &(&f * &a[(r, j)]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Some solution of `self · x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Inertia of a symmetric matrix by exact congruence diagonalisation.
    /// Panics on polynomial entries (their sign is undefined).
    pub fn inertia(&self) -> Inertia {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let mut a = self.clone();
        let mut n = a.rows;
        let mut out = Inertia {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        while n > 0 {
            // Bring a nonzero diagonal entry to position 0 of the active block.
            if a[(0, 0)].is_zero() {
                if let Some(k) = (1..n).find(|&k| !a[(k, k)].is_zero()) {
                    a.swap_sym(0, k);
                } else if let Some(k) = (1..n).find(|&k| !a[(0, k)].is_zero()) {
                    // a00 = akk = 0, a0k ≠ 0: replace e0 by e0 + ek.
                    a.add_sym(0, k);
                } else {
                    out.zero += 1;
                    a = a.minor_matrix(0, 0);
                    n -= 1;
                    continue;
                }
            }
            let p = a[(0, 0)].clone();
            match p.sign().expect("sign of a polynomial entry") {
                Ordering::Greater => out.positive += 1,
                Ordering::Less => out.negative += 1,
                Ordering::Equal => unreachable!(),
            }
            let pinv = p.inv().expect("nonzero pivot must be invertible");
            let mut next = Self::zeros(n - 1, n - 1);
            for i in 1..n {
                for j in 1..n {
                    next[(i - 1, j - 1)] = &a[(i, j)] - &(&(&a[(i, 0)] * &a[(0, j)]) * &pinv);
                }
            }
            a = next;
            n -= 1;
        }
        out
    }

    fn swap_sym(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Congruence by the elementary matrix that adds basis vector `k` to `t`.
    fn add_sym(&mut self, t: usize, k: usize) {
        for j in 0..self.cols {
            self[(t, j)] = &self[(t, j)] + &self[(k, j)];
        }
        for i in 0..self.rows {
            self[(i, t)] = &self[(i, t)] + &self[(i, k)];
        }
    }
}

fn pivot_cost(s: &Scalar) -> usize {
    match s {
        Scalar::Rational(_) => 0,
        Scalar::NinthRoot(_) => 1,
        Scalar::Polynomial(p) => p.len(),
    }
}

fn exact_div(num: &Scalar, den: &Scalar, term_budget: usize) -> Option<Scalar> {
    if den.is_one() {
        return Some(num.clone());
    }
    match (num, den) {
        (_, Scalar::Polynomial(d)) => {
            let n = num.as_poly();
            Poly::div_exact(&n, d, term_budget).map(Scalar::from_poly)
        }
        _ => num.div(den).ok(),
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{NinthRoot, Q};
    use num_traits::One;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), Scalar::int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        let adj = a.adjugate();
        assert_eq!(adj, inv.scale(&Scalar::int(18)));
    }

    #[test]
    fn det_needs_row_swap() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.det(), Scalar::int(-1));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn polynomial_det_matches_cofactor_expansion() {
        let x = Scalar::var(0);
        let y = Scalar::var(1);
        let a = Matrix::from_rows(vec![
            vec![x.clone(), y.clone(), Scalar::int(1)],
            vec![y.clone(), x.clone(), y.clone()],
            vec![Scalar::int(2), y.clone(), x.clone()],
        ]);
        let cof = &(&x * &(&(&x * &x) - &(&y * &y))) - &(&y * &(&(&y * &x) - &(&y * &Scalar::int(2))))
            + (&(&y * &y) - &(&x * &Scalar::int(2)));
        assert_eq!(a.det(), cof);
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).iter().all(Scalar::is_zero));
        }
        assert!(a.solve(&[Scalar::int(1), Scalar::int(3)]).is_none());
        let x = a.solve(&[Scalar::int(1), Scalar::int(2)]).unwrap();
        assert_eq!(a.apply(&x), vec![Scalar::int(1), Scalar::int(2)]);
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let i = a.inertia();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let b = m(&[&[0, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        let i = b.inertia();
        assert_eq!((i.positive, i.negative, i.zero), (0, 1, 2));
    }

    #[test]
    fn inertia_over_ninth_roots() {
        let d = Scalar::from_ninth(NinthRoot::generator(Q::one() + Q::one()));
        let a = Matrix::diagonal(&[d.clone(), -d.clone(), d.pow(2)]);
        let i = a.inertia();
        assert_eq!((i.positive, i.negative), (2, 1));
    }
}
