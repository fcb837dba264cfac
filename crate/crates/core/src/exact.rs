//! Exact rational scalars, small rational matrices, and integer kernels.
//!
//! Public values are arbitrary-precision rationals. The hot loops (Weyl
//! group actions, descent walks, orbit scans) run on `i64` vectors after
//! clearing denominators; every integer operation is overflow-checked, so
//! results are either exact or the computation aborts loudly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("[{}]", parts.join(","))
}

pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| c * x).collect()
}

pub(crate) fn checked_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer kernel overflow: value exceeds i64")
}

/// A rational vector written as an integer numerator vector over a common
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scaled {
    pub num: Vec<i64>,
    pub den: i64,
}

impl Scaled {
    pub fn from_rationals(v: &[Rational]) -> Self {
        let den = v
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = v
            .iter()
            .map(|q| checked_i64(&(q.numer() * (&den / q.denom()))))
            .collect();
        Scaled {
            num,
            den: checked_i64(&den),
        }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Scaled {
            num: v.to_vec(),
            den: 1,
        }
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.num.iter().map(|&n| frac(n, self.den)).collect()
    }

    /// Returns the integer vector when the denominator is one.
    pub fn integral(&self) -> Option<&[i64]> {
        (self.den == 1).then_some(self.num.as_slice())
    }
}

/// Returns the coordinates as integers, or `None` if any is fractional.
pub fn as_integers(v: &[Rational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten())
        .collect()
}

/// Dense square-or-rectangular rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: rows.iter().map(Vec::len).find(|&l| l != c).unwrap_or(0),
            });
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| rat_vec(r)).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Evaluates `uᵀ M v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.mul_vec(v))
    }

    pub fn scaled(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &f * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - &f * inv.get(col, j));
                }
            }
        }
        Some(inv)
    }

    /// Integer entries over a common denominator, for use in integer kernels.
    pub fn to_scaled(&self) -> (IMatrix, i64) {
        let s = Scaled::from_rationals(&self.data);
        (
            IMatrix {
                rows: self.rows,
                cols: self.cols,
                data: s.num,
            },
            s.den,
        )
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", fmt_vec(self.row(i)))?;
        }
        Ok(())
    }
}

/// Dense integer matrix, row-major. Used for Weyl group elements acting on
/// fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        IMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IMatrix) -> IMatrix {
        assert_eq!(self.cols, other.rows);
        let mut data = vec![0i64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    data[idx] = a
                        .checked_mul(other.get(k, j))
                        .and_then(|p| data[idx].checked_add(p))
                        .expect("integer kernel overflow in matrix product");
                }
            }
        }
        IMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| idot(self.row(i), v)).collect()
    }

    pub fn transpose(&self) -> IMatrix {
        let mut data = vec![0; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        IMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| rat(x)).collect(),
        }
    }
}

pub fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).fold(0i64, |acc, (&x, &y)| {
        x.checked_mul(y)
            .and_then(|p| acc.checked_add(p))
            .expect("integer kernel overflow in dot product")
    })
}

/// `uᵀ M v / den` as an exact rational, for an integer-scaled Gram matrix.
pub fn scaled_quadratic(m: &IMatrix, den: i64, u: &[i64], v: &[i64]) -> Rational {
    let mv = m.mul_vec(v);
    frac(idot(u, &mv), den)
}

pub fn is_nonneg(q: &Rational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rat("7/2"), Some(frac(7, 2)));
        assert_eq!(parse_rat("-3"), Some(rat(-3)));
        assert_eq!(parse_rat(" 4/2 "), Some(rat(2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
        assert_eq!(fmt_rat(&frac(-3, 2)), "-3/2");
        assert_eq!(fmt_vec(&[rat(1), frac(1, 2)]), "[1,1/2]");
    }

    #[test]
    fn inverse_of_a2_cartan() {
        let a = QMatrix::from_int_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &frac(2, 3));
        assert_eq!(inv.get(0, 1), &frac(1, 3));
        assert!(a.mul(&inv).is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(a.inverse().is_none());
    }

    #[test]
    fn scaled_round_trip() {
        let v = vec![frac(1, 2), frac(-2, 3), rat(4)];
        let s = Scaled::from_rationals(&v);
        assert_eq!(s.den, 6);
        assert_eq!(s.num, vec![3, -4, 24]);
        assert_eq!(s.to_rationals(), v);
        assert!(s.integral().is_none());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(QMatrix::from_int_rows(&[vec![1, 2], vec![3]]).is_err());
    }
}
