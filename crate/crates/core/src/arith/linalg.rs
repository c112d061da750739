//! Dense exact linear algebra over [`Scalar`].
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a
//! minor of the input, so integer inputs stay integral until the final
//! back-substitution.

use std::fmt;

use super::scalar::Scalar;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// `particular` solves the system; adding any combination of `nullspace`
    /// vectors gives every other solution.
    Consistent { particular: Vec<Scalar>, nullspace: Vec<Vec<Scalar>> },
    /// `witness` satisfies `witnessᵀ·A = 0` and `witnessᵀ·b ≠ 0`.
    Inconsistent { witness: Vec<Scalar> },
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
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

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("ragged integer matrix")
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns vs vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Fraction-free forward elimination restricted to the first `pivot_cols`
    /// columns. Returns the pivot `(row, col)` positions and the sign of the
    /// row permutation.
    fn bareiss(&mut self, pivot_cols: usize) -> (Vec<(usize, usize)>, bool) {
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut row = 0;
        let mut negated = false;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
                negated = !negated;
            }
            let piv = self.get(row, col).clone();
            for r in row + 1..self.rows {
                let factor = self.get(r, col).clone();
                for j in 0..self.cols {
                    let v = &(&(&piv * self.get(r, j)) - &(&factor * self.get(row, j))) / &prev;
                    self.set(r, j, v);
                }
            }
            // rows above keep their entries; only rows below are rescaled
            prev = piv;
            pivots.push((row, col));
            row += 1;
        }
        (pivots, negated)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut m = self.clone();
        let (pivots, negated) = m.bareiss(n);
        if pivots.len() < n {
            return Scalar::zero();
        }
        let d = m.get(n - 1, n - 1).clone();
        if negated {
            -d
        } else {
            d
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.bareiss(self.cols).0.len()
    }

    /// Solve `A·x = b` exactly.
    pub fn solve(&self, b: &[Scalar]) -> Result<LinearSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("{} rows vs right-hand side of {}", self.rows, b.len())));
        }
        let n = self.cols;
        let m = self.rows;
        // augmented [A | b | I] so inconsistent rows carry their combination
        let mut aug = Matrix::from_fn(m, n + 1 + m, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j == n {
                b[i].clone()
            } else if j - n - 1 == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (pivots, _) = aug.bareiss(n);
        for r in pivots.len()..m {
            if !aug.get(r, n).is_zero() {
                let witness = (0..m).map(|i| aug.get(r, n + 1 + i).clone()).collect();
                return Ok(LinearSolution::Inconsistent { witness });
            }
        }
        // back substitution to reduced echelon form
        for &(r, c) in pivots.iter().rev() {
            let inv = aug.get(r, c).inv();
            for j in 0..=n {
                let v = aug.get(r, j) * &inv;
                aug.set(r, j, v);
            }
            for r2 in 0..r {
                let f = aug.get(r2, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..=n {
                    let v = aug.get(r2, j) - &(&f * aug.get(r, j));
                    aug.set(r2, j, v);
                }
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut particular = vec![Scalar::zero(); n];
        for &(r, c) in &pivots {
            particular[c] = aug.get(r, n).clone();
        }
        let mut nullspace = Vec::new();
        for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            for &(r, c) in &pivots {
                v[c] = -aug.get(r, free);
            }
            nullspace.push(v);
        }
        Ok(LinearSolution::Consistent { particular, nullspace })
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        match self.solve(&vec![Scalar::zero(); self.rows]) {
            Ok(LinearSolution::Consistent { nullspace, .. }) => nullspace,
            _ => unreachable!("homogeneous systems are consistent"),
        }
    }

    /// Characteristic polynomial `det(x·I - A)` via Hessenberg reduction.
    pub fn charpoly(&self) -> UniPoly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for j in 0..n {
                    h.data.swap(j * n + i, j * n + m);
                }
            }
            let piv_inv = h.get(m, m - 1).inv();
            for i in m + 1..n {
                let u = h.get(i, m - 1) * &piv_inv;
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = h.get(i, j) - &(&u * h.get(m, j));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = h.get(j, m) + &(&u * h.get(j, i));
                    h.set(j, m, v);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - Σ_{i<k} h_{i,k} (Π_{j=i+1..k} h_{j,j-1}) p_{i-1}
        let mut polys: Vec<UniPoly> = vec![UniPoly::one()];
        for k in 0..n {
            let mut pk = UniPoly::linear_root(h.get(k, k).clone()).mul(&polys[k]);
            let mut t = Scalar::one();
            for i in (0..k).rev() {
                t = &t * h.get(i + 1, i);
                if t.is_zero() {
                    break;
                }
                let c = &t * h.get(i, k);
                pk = pk.sub(&polys[i].scale(&c));
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn identity_solve() {
        let a = Matrix::identity(3);
        let b = ints(&[4, -1, 7]);
        assert_eq!(
            a.solve(&b).unwrap(),
            LinearSolution::Consistent { particular: b.clone(), nullspace: vec![] }
        );
    }

    #[test]
    fn rank_one_consistent() {
        let a = Matrix::from_ints(&[&[1, 1], &[2, 2]]);
        match a.solve(&ints(&[1, 2])).unwrap() {
            LinearSolution::Consistent { particular, nullspace } => {
                assert_eq!(particular, ints(&[1, 0]));
                assert_eq!(nullspace, vec![ints(&[-1, 1])]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rank_one_inconsistent() {
        let a = Matrix::from_ints(&[&[1, 1], &[2, 2]]);
        let b = ints(&[1, 3]);
        match a.solve(&b).unwrap() {
            LinearSolution::Inconsistent { witness } => {
                let at = a.transpose().mul_vec(&witness).unwrap();
                assert!(at.iter().all(Scalar::is_zero));
                let wb = witness.iter().zip(&b).fold(Scalar::zero(), |acc, (w, x)| &acc + &(w * x));
                assert!(!wb.is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::identity(2);
        assert!(matches!(a.solve(&ints(&[1])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn determinant_and_charpoly() {
        let a = Matrix::from_ints(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // det by cofactor expansion: 2(3·-2 - 20) + 1(1·-2 - 0) = -52 - 2
        assert_eq!(a.det(), Scalar::from_int(-54));
        let chi = a.charpoly();
        assert_eq!(chi.degree(), Some(3));
        // χ(0) = (-1)^3 det
        assert_eq!(chi.coeff(0), Scalar::from_int(54));
        // trace
        assert_eq!(chi.coeff(2), Scalar::from_int(-3));
        // Cayley-Hamilton
        let mut acc = Matrix::zeros(3, 3);
        let mut power = Matrix::identity(3);
        for i in 0..=3 {
            let c = chi.coeff(i);
            acc = Matrix::from_fn(3, 3, |r, s| acc.get(r, s) + &(&c * power.get(r, s)));
            power = power.mul(&a).unwrap();
        }
        assert!(acc.entries().iter().all(Scalar::is_zero));
    }

    #[test]
    fn charpoly_needs_pivoting() {
        let a = Matrix::from_ints(&[&[0, 0, 1], &[0, 0, 0], &[1, 1, 0]]);
        // det(xI - A) = x^3 - x
        assert_eq!(a.charpoly(), UniPoly::from_ints(&[0, -1, 0, 1]));
    }
}
