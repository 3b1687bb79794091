//! Exact rational linear algebra.
//!
//! Determinants go through fraction-free (Bareiss) elimination on a
//! denominator-cleared integer matrix, which keeps intermediate entries at
//! single-minor bit growth instead of letting gcd reduction churn. Linear
//! systems reuse the same elimination with exact back-substitution.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> RatMatrix {
        assert!(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> RatMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> RatMatrix {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational::one();
        }
        RatMatrix::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut data = vec![Rational::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.at(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += lhs * other.at(k, j);
                }
            }
        }
        RatMatrix::new(self.rows, other.cols, data)
    }

    /// Copy without row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> RatMatrix {
        assert!(self.rows > 1 && self.cols > 1);
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in 0..self.rows {
            if r == i {
                continue;
            }
            for c in 0..self.cols {
                if c == j {
                    continue;
                }
                data.push(self.at(r, c).clone());
            }
        }
        RatMatrix::new(self.rows - 1, self.cols - 1, data)
    }

    /// Sub-matrix restricted to the given row and column indices.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &r in row_idx {
            for &c in col_idx {
                data.push(self.at(r, c).clone());
            }
        }
        RatMatrix::new(row_idx.len(), col_idx.len(), data)
    }
}

/// Clears denominators row by row. Returns the integer matrix and the product
/// of the row scaling factors.
fn clear_denominators(m: &RatMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let mut out = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut lcm = BigInt::one();
        for j in 0..m.cols {
            lcm = lcm.lcm(m.at(i, j).denom());
        }
        let row = (0..m.cols)
            .map(|j| {
                let q = m.at(i, j);
                q.numer() * (&lcm / q.denom())
            })
            .collect();
        scale *= &lcm;
        out.push(row);
    }
    (out, scale)
}

/// Fraction-free elimination in place. Returns the determinant of the integer
/// matrix, accounting for row swaps.
fn bareiss_int_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // Exact by the Bareiss identity: prev divides t.
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of a square rational matrix.
pub fn bareiss_det(m: &RatMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let (int_matrix, scale) = clear_denominators(m);
    let det = bareiss_int_det(int_matrix);
    Ok(Rational::new(det, scale))
}

/// Signed sum of all minors, i.e. the sum of the adjugate's entries.
///
/// Uses the rank-one update identity `det(M + t*J) = det(M) + t*S(M)` with
/// `t = 1` and `J` the all-ones matrix, so singular inputs are fine.
pub fn signed_minor_sum(m: &RatMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let mut shifted = m.clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            shifted.set(i, j, m.at(i, j) + Rational::one());
        }
    }
    Ok(bareiss_det(&shifted)? - bareiss_det(m)?)
}

/// Exact solution of `m * x = rhs` for nonsingular square `m`, via
/// fraction-free forward elimination and exact back-substitution.
pub fn solve_linear(m: &RatMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if rhs.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "rhs has {} entries, matrix is {n}x{n}",
            rhs.len()
        )));
    }
    // Augmented rational matrix, denominators cleared per row.
    let mut aug = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = rhs[i].denom().clone();
        for j in 0..n {
            lcm = lcm.lcm(m.at(i, j).denom());
        }
        let mut row: Vec<BigInt> = (0..n)
            .map(|j| {
                let q = m.at(i, j);
                q.numer() * (&lcm / q.denom())
            })
            .collect();
        row.push(rhs[i].numer() * (&lcm / rhs[i].denom()));
        aug.push(row);
    }
    // Fraction-free forward elimination over the n+1 wide augmented rows.
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if aug[k][k].is_zero() {
            match (k + 1..n).find(|&r| !aug[r][k].is_zero()) {
                Some(r) => aug.swap(k, r),
                None => return Err(Error::Singular),
            }
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = &aug[i][j] * &aug[k][k] - &aug[i][k] * &aug[k][j];
                aug[i][j] = t / &prev;
            }
            aug[i][k] = BigInt::zero();
        }
        prev = aug[k][k].clone();
    }
    if aug[n - 1][n - 1].is_zero() {
        return Err(Error::Singular);
    }
    // Back-substitution in exact rationals.
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(aug[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(aug[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(aug[i][i].clone());
    }
    Ok(x)
}

/// `bit(k) = ceil(log2(k + 1))` for a positive integer.
pub fn bit_size_int(k: &BigInt) -> Result<u64> {
    if !k.is_positive() {
        return Err(Error::BitSizeDomain);
    }
    Ok(bit_size_uint(&k.magnitude().clone()))
}

/// `bit` on non-negative integers; `bit(0) = 0`.
pub fn bit_size_uint(k: &BigUint) -> u64 {
    let succ = k + BigUint::one();
    // ceil(log2(succ)): exact power of two loses one bit.
    if succ.count_ones() == 1 {
        succ.bits() - 1
    } else {
        succ.bits()
    }
}

/// `bit` of a rational in lowest terms: `bit(|p|) + bit(q)`.
pub fn bit_size(q: &Rational) -> Result<u64> {
    if q.is_negative() {
        return Err(Error::BitSizeDomain);
    }
    Ok(bit_size_uint(q.numer().magnitude()) + bit_size_uint(q.denom().magnitude()))
}
