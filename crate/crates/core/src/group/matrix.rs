//! Square integer matrices with overflow-checked exact arithmetic.

use num::{BigInt, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Input("matrix rows must form a square".into()));
        }
        Self::new(dim, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        IntMatrix { dim, entries }
    }

    /// `I + sign·E_{ij}`.
    pub fn elementary(dim: usize, i: usize, j: usize, sign: i64) -> Self {
        let mut m = Self::identity(dim);
        m.entries[i * dim + j] += sign;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::ContextMismatch("matrix dimensions differ".into()));
        }
        let n = self.dim;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let p = a
                        .checked_mul(other.entries[k * n + j])
                        .ok_or(Error::Overflow("matrix product"))?;
                    out[i * n + j] = out[i * n + j]
                        .checked_add(p)
                        .ok_or(Error::Overflow("matrix product"))?;
                }
            }
        }
        Ok(IntMatrix { dim: n, entries: out })
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        IntMatrix { dim: n, entries }
    }

    /// Determinant by Bareiss elimination (exact, fraction-free).
    pub fn determinant(&self) -> BigInt {
        let n = self.dim;
        let mut a: Vec<Vec<BigInt>> = self.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::from(1);
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if sign < 0 {
            -prev
        } else {
            prev
        }
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.dim;
        let entries = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[i * n + j])
            .collect();
        IntMatrix { dim: n - 1, entries }
    }

    /// Inverse of a unimodular matrix via the adjugate.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let n = self.dim;
        let det = self.determinant();
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(Error::Input(format!("matrix has determinant {det}, not ±1")));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).determinant();
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                let v = cof * &det;
                entries[i * n + j] = v.to_i64().ok_or(Error::Overflow("matrix inverse"))?;
            }
        }
        Ok(IntMatrix { dim: n, entries })
    }

    /// Coefficients of `det(xI - A)`, constant term first, monic.
    ///
    /// Faddeev–LeVerrier over the rationals; the result is integral.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        let n = self.dim;
        let a: Vec<Vec<Rational>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| Rational::from_integer(x.into())).collect())
            .collect();
        let matmul = |x: &Vec<Vec<Rational>>, y: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                        .collect()
                })
                .collect()
        };
        // coefficients c[n] = 1, c[n-k] = -tr(A M_k)/k with M_1 = I, M_{k+1} = A M_k + c[n-k] I
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::from_integer(1.into());
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
            .collect();
        for k in 1..=n {
            let am = matmul(&a, &m);
            let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
            let c = -tr / Rational::from_integer(BigInt::from(k));
            coeffs[n - k] = c.clone();
            m = am;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c;
            }
        }
        coeffs.into_iter().map(|c| c.to_integer()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let g = IntMatrix::from_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]).unwrap();
        assert_eq!(g.determinant(), BigInt::from(1));
        let inv = g.inverse_unimodular().unwrap();
        assert!(g.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&g).unwrap().is_identity());
    }

    #[test]
    fn char_poly_matches_cofactor_expansion() {
        let g = IntMatrix::from_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]).unwrap();
        // x^3 - x - 1
        assert_eq!(g.characteristic_polynomial(), big(&[-1, -1, 0, 1]));
        let h = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]).unwrap();
        assert_eq!(h.characteristic_polynomial(), big(&[1, -3, 1]));
    }

    #[test]
    fn overflow_is_reported() {
        let m = IntMatrix::from_rows(&[&[i64::MAX, 0], &[0, 1]]).unwrap();
        assert_eq!(m.mul(&m), Err(Error::Overflow("matrix product")));
    }
}
