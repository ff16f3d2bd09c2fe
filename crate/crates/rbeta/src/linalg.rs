//! Small dense linear solves, generic over the scalar so the same routine
//! serves f64, exact rationals and elements of Q(beta).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::FieldElement;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("singular linear system")]
    SingularSolve,
}

/// What Gaussian elimination needs. Identities are derived from an existing
/// value because field elements carry their context.
pub trait Scalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_val(&self) -> bool;
    fn add_s(&self, other: &Self) -> Self;
    fn sub_s(&self, other: &Self) -> Self;
    fn mul_s(&self, other: &Self) -> Self;
    fn div_s(&self, other: &Self) -> Self;
    /// Rough magnitude for pivot selection only; exactness is not required.
    fn pivot_mag(&self) -> f64;
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn is_zero_val(&self) -> bool {
        *self == 0.0
    }
    fn add_s(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_s(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_s(&self, other: &Self) -> Self {
        self * other
    }
    fn div_s(&self, other: &Self) -> Self {
        self / other
    }
    fn pivot_mag(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_s(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_s(&self, other: &Self) -> Self {
        self * other
    }
    fn div_s(&self, other: &Self) -> Self {
        self / other
    }
    fn pivot_mag(&self) -> f64 {
        self.abs().to_f64().unwrap_or(if self.is_zero() { 0.0 } else { 1.0 })
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }
    fn one_like(&self) -> Self {
        self.ctx().one()
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero_value()
    }
    fn add_s(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_s(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_s(&self, other: &Self) -> Self {
        self * other
    }
    fn div_s(&self, other: &Self) -> Self {
        self / other
    }
    fn pivot_mag(&self) -> f64 {
        if self.is_zero_value() {
            0.0
        } else {
            self.rough_f64().abs().max(f64::MIN_POSITIVE)
        }
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>, LinalgError> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let zero = b[0].zero_like();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .pivot_mag()
                    .partial_cmp(&a[j][col].pivot_mag())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot_row][col].is_zero_val() {
            return Err(LinalgError::SingularSolve);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            if a[row][col].is_zero_val() {
                continue;
            }
            let factor = a[row][col].div_s(&a[col][col]);
            for k in col..n {
                let delta = factor.mul_s(&a[col][k]);
                a[row][k] = a[row][k].sub_s(&delta);
            }
            let delta = factor.mul_s(&b[col]);
            b[row] = b[row].sub_s(&delta);
        }
    }
    let mut x = vec![zero; n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            let delta = a[row][k].mul_s(&x[k]);
            acc = acc.sub_s(&delta);
        }
        x[row] = acc.div_s(&a[row][row]);
    }
    Ok(x)
}

/// Right fixed vector of `w` at eigenvalue 1, normalized to sum 1:
/// solves (W - I) m = 0 with the last equation replaced by sum(m) = 1.
/// The replaced equation is redundant whenever the columns of W sum to 1.
pub fn unit_eigenvector_right<T: Scalar>(w: &[Vec<T>]) -> Result<Vec<T>, LinalgError> {
    let n = w.len();
    assert!(n > 0);
    let zero = w[0][0].zero_like();
    let one = w[0][0].one_like();
    let mut a: Vec<Vec<T>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = w[i][j].clone();
            if i == j {
                v = v.sub_s(&one);
            }
            row.push(v);
        }
        a.push(row);
    }
    a[n - 1] = vec![one.clone(); n];
    let mut b = vec![zero; n];
    b[n - 1] = one;
    solve(a, b)
}

/// Left fixed vector of row-stochastic `p`, normalized to sum 1.
pub fn stationary_left<T: Scalar>(p: &[Vec<T>]) -> Result<Vec<T>, LinalgError> {
    let n = p.len();
    let transposed: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| p[j][i].clone()).collect())
        .collect();
    unit_eigenvector_right(&transposed)
}
