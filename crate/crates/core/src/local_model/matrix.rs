//! Small square matrices over [`Ring`] entries, and the JSON form of polynomial matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::field::{ExactField, Scalar};
use super::poly::{Poly, RatFunc, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    field: ExactField,
    rows: Vec<Vec<T>>,
}

pub type PolyMat = Matrix<Poly>;
pub type RatMat = Matrix<RatFunc>;

impl<T: Ring> Matrix<T> {
    pub fn from_rows(field: ExactField, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return invalid("matrix must be square and nonempty");
        }
        Ok(Matrix { field, rows })
    }

    pub fn from_fn(field: ExactField, n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        Matrix { field, rows: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn identity(field: ExactField, n: usize) -> Self {
        Self::from_fn(field, n, |i, j| if i == j { T::one_in(field) } else { T::zero_in(field) })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.rows[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { field: self.field, rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.n(), |i, j| self.rows[j][i].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n();
        Self::from_fn(self.field, n, |i, j| {
            (0..n).fold(T::zero_in(self.field), |acc, k| acc.add_r(&self.rows[i][k].mul_r(&o.rows[k][j])))
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.field, self.n(), |i, j| self.rows[i][j].add_r(&o.rows[i][j]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.field, self.n(), |i, j| self.rows[i][j].sub_r(&o.rows[i][j]))
    }

    pub fn scale(&self, x: &T) -> Self {
        Self::from_fn(self.field, self.n(), |i, j| self.rows[i][j].mul_r(x))
    }

    /// Determinant of the submatrix on the given rows and columns, by cofactor expansion.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> T {
        match rows.len() {
            0 => T::one_in(self.field),
            1 => self.rows[rows[0]][cols[0]].clone(),
            _ => {
                let r0 = rows[0];
                let rest = &rows[1..];
                let mut acc = T::zero_in(self.field);
                for (k, &c) in cols.iter().enumerate() {
                    let x = &self.rows[r0][c];
                    if x.is_zero_elt() {
                        continue;
                    }
                    let sub: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
                    let term = x.mul_r(&self.minor(rest, &sub));
                    acc = if k % 2 == 0 { acc.add_r(&term) } else { acc.sub_r(&term) };
                }
                acc
            }
        }
    }

    pub fn det(&self) -> T {
        let all: Vec<usize> = (0..self.n()).collect();
        self.minor(&all, &all)
    }

    /// The classical adjugate, so that A·adj(A) = det(A)·I.
    pub fn adjugate(&self) -> Self {
        let n = self.n();
        Self::from_fn(self.field, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.minor(&rows, &cols);
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg_r()
            }
        })
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n()).all(|i| (0..i).all(|j| self.rows[i][j].is_zero_elt()))
    }
}

impl PolyMat {
    pub fn to_rat(&self) -> RatMat {
        self.map(|p| RatFunc::from(p.clone()))
    }

    /// Signed permutation matrix with the given integer entries.
    pub fn from_ints(field: ExactField, m: &[[i64; 4]; 4]) -> PolyMat {
        Matrix::from_fn(field, 4, |i, j| Poly::constant(field.int(m[i][j])))
    }

    /// diag(v^e_i).
    pub fn v_diagonal(field: ExactField, e: &[i64]) -> PolyMat {
        Matrix::from_fn(
            field,
            e.len(),
            |i, j| {
                if i == j {
                    Poly::monomial(field.one(), e[i])
                } else {
                    Poly::zero(field)
                }
            },
        )
    }
}

impl RatMat {
    pub fn inverse(&self) -> Result<RatMat> {
        let d = self.det().inv()?;
        Ok(self.adjugate().scale(&d))
    }

    /// Entrywise value at v = 0.
    pub fn at_zero(&self) -> Result<Vec<Vec<Scalar>>> {
        self.rows.iter().map(|r| r.iter().map(RatFunc::at_zero).collect()).collect()
    }
}

/// The standard symplectic form, antidiagonal (1, 1, −1, −1).
pub fn j_matrix(field: ExactField) -> PolyMat {
    PolyMat::from_ints(field, &[[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
}

/// One matrix entry on the wire.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryJson {
    pub coeffs: BTreeMap<i64, String>,
}

impl PolyMat {
    pub fn to_json(&self) -> Vec<Vec<EntryJson>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter().map(|p| EntryJson { coeffs: p.terms().map(|(k, s)| (k, s.to_string())).collect() }).collect()
            })
            .collect()
    }

    pub fn from_json(field: ExactField, rows: &[Vec<EntryJson>]) -> Result<PolyMat> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        let terms =
                            e.coeffs.iter().map(|(k, s)| Ok((*k, field.parse(s)?))).collect::<Result<Vec<_>>>()?;
                        Ok(Poly::from_terms(field, terms))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_identity() {
        let f = ExactField::Rational;
        let v = Poly::v(f);
        let a = PolyMat::from_fn(f, 4, |i, j| {
            let base = Poly::constant(f.int((i * 4 + j) as i64 % 7 - 3));
            if i >= j {
                &base + &v.pow((i - j) as u32)
            } else {
                base
            }
        });
        let lhs = a.mul(&a.adjugate());
        assert_eq!(lhs, PolyMat::identity(f, 4).scale(&a.det()));
    }

    #[test]
    fn json_roundtrip() {
        let f = ExactField::Rational;
        let a = PolyMat::from_fn(f, 4, |i, j| Poly::monomial(f.ratio(i as i64 - 1, 2).unwrap(), j as i64 - 1));
        let s = serde_json::to_string(&a.to_json()).unwrap();
        let back: Vec<Vec<EntryJson>> = serde_json::from_str(&s).unwrap();
        assert_eq!(PolyMat::from_json(f, &back).unwrap(), a);
    }
}
