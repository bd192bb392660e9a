//! Dense matrices over ℚ(ζ_N) with exact Gaussian elimination.

use crate::cyclotomic::{Coeff, CycloField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Coeff::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Input("ragged matrix".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Coeff] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, field: &CycloField) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
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
                        let v = out.get(i, j).add(&field.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Coeff], field: &CycloField) -> Vec<Coeff> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Coeff::zero(), |acc, j| acc.add(&field.mul(self.get(i, j), &v[j]))))
            .collect()
    }

    /// Reduced row echelon form (pivots scaled to 1) and pivot columns.
    pub fn rref(&self, field: &CycloField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = field.inv(m.get(r, c)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = field.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&field.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &CycloField) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the right null space {x : M x = 0}.
    pub fn kernel(&self, field: &CycloField) -> Vec<Vec<Coeff>> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Coeff::zero(); self.cols];
                v[f] = Coeff::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, field: &CycloField) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Coeff::one());
        }
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Block diagonal extension by an identity block of size `extra`.
    pub fn extend_identity(&self, extra: usize) -> Matrix {
        let n = self.rows + extra;
        let mut m = Matrix::identity(n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: &CycloField, rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| field.parse(s).unwrap().value).collect()).collect()).unwrap()
    }

    #[test]
    fn inverse_and_kernel() {
        let f = CycloField::new(8).unwrap();
        let a = m(&f, &[&["1", "z"], &["0", "2"]]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&inv, &f), Matrix::identity(2));
        let s = m(&f, &[&["1", "1"], &["1", "1"]]);
        assert!(matches!(s.inverse(&f), Err(Error::SingularMatrix)));
        let k = s.kernel(&f);
        assert_eq!(k.len(), 1);
        assert!(s.apply(&k[0], &f).iter().all(Coeff::is_zero));
    }

    #[test]
    fn rref_normalizes_pivots() {
        let f = CycloField::new(1).unwrap();
        let a = m(&f, &[&["0", "2", "4"], &["3", "0", "3"]]);
        let (r, piv) = a.rref(&f);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, m(&f, &[&["1", "0", "1"], &["0", "1", "2"]]));
    }
}
