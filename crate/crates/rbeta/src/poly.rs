//! Dense univariate polynomials over the rationals.
//!
//! Small-degree workhorse for the field layer: reduction modulo the defining
//! polynomial, extended gcd for inverses, Sturm chains for root counting and
//! interval evaluation for sign determination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation over an interval [lo, hi]; returns an enclosure of
    /// the image of the interval.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut acc_lo = BigRational::zero();
        let mut acc_hi = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            let (mlo, mhi) = mul_interval(&acc_lo, &acc_hi, lo, hi);
            acc_lo = mlo + c;
            acc_hi = mhi + c;
        }
        (acc_lo, acc_hi)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            out.push(a - b);
        }
        QPoly::new(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn divrem(&self, other: &QPoly) -> (QPoly, QPoly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let dlead = other.leading().unwrap().clone();
        let dd = other.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let factor = rem[k].clone() / dlead.clone();
            if !factor.is_zero() {
                quot[k - dd] = factor.clone();
                for (i, c) in other.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    rem[idx] = rem[idx].clone() - &factor * c;
                }
            }
            rem.pop();
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, other: &QPoly) -> QPoly {
        self.divrem(other).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, other: &QPoly) -> QPoly {
        let (q, r) = self.divrem(other);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic rescaling (leading coefficient 1). Zero is returned unchanged.
    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = BigRational::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Rescaling by a positive constant so the leading coefficient has
    /// absolute value 1. Preserves signs everywhere, which Sturm chains need.
    fn unit_leading_abs(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = BigRational::one() / l.abs();
                self.scale(&inv)
            }
        }
    }
}

fn mul_interval(
    al: &BigRational,
    ah: &BigRational,
    bl: &BigRational,
    bh: &BigRational,
) -> (BigRational, BigRational) {
    let p1 = al * bl;
    let p2 = al * bh;
    let p3 = ah * bl;
    let p4 = ah * bh;
    let mut lo = p1.clone();
    let mut hi = p1;
    for p in [p2, p3, p4] {
        if p < lo {
            lo = p.clone();
        }
        if p > hi {
            hi = p;
        }
    }
    (lo, hi)
}

/// Monic gcd via the Euclidean algorithm.
pub(crate) fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let r2 = r0.rem(&r1);
        r0 = r1;
        r1 = r2.monic();
        if !r1.is_zero() {
            r1 = r1.monic();
        }
    }
    r0.monic()
}

/// Extended gcd tracking only the cofactor of `a`:
/// returns (g, s) with s*a = g (mod m), g monic.
pub(crate) fn egcd_partial(a: &QPoly, m: &QPoly) -> (QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = m.clone();
    let mut s0 = QPoly::constant(BigRational::one());
    let mut s1 = QPoly::zero();
    while !r1.is_zero() {
        let (q, r2) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    // normalize so the gcd is monic
    match r0.leading() {
        None => (r0, s0),
        Some(l) => {
            let inv = BigRational::one() / l.clone();
            (r0.scale(&inv), s0.scale(&inv))
        }
    }
}

/// p with repeated factors removed: p / gcd(p, p').
pub(crate) fn squarefree_part(p: &QPoly) -> QPoly {
    let g = gcd(p, &p.derivative());
    if g.degree() == 0 {
        return p.monic();
    }
    p.div_exact(&g).monic()
}

/// Sturm chain of a squarefree polynomial.
pub(crate) fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = Vec::new();
    let p0 = p.unit_leading_abs();
    if p0.is_zero() {
        return chain;
    }
    chain.push(p0.clone());
    let p1 = p0.derivative().unit_leading_abs();
    if p1.is_zero() {
        return chain;
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().unit_leading_abs());
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0usize;
    let mut last: Option<bool> = None; // sign as is_positive
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of the chain's polynomial in (lo, hi].
/// Callers arrange for the endpoints not to be roots, making this the count
/// on the open interval.
pub(crate) fn count_roots(chain: &[QPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_variations(chain, lo).saturating_sub(sign_variations(chain, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = poly(&[1, 2, 0, 3, 5]);
        let b = poly(&[-1, 0, 2]);
        let (qt, r) = a.divrem(&b);
        assert_eq!(a.sub(&qt.mul(&b)), r);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn sturm_counts_roots_of_quadratic() {
        // x^2 - x - 1: roots at golden ratio and its conjugate
        let p = poly(&[-1, -1, 1]);
        let chain = sturm_chain(&squarefree_part(&p));
        assert_eq!(count_roots(&chain, &q(1, 1), &q(2, 1)), 1);
        assert_eq!(count_roots(&chain, &q(-1, 1), &q(0, 1)), 1);
        assert_eq!(count_roots(&chain, &q(-10, 1), &q(10, 1)), 2);
        assert_eq!(count_roots(&chain, &q(3, 1), &q(4, 1)), 0);
    }

    #[test]
    fn sturm_counts_roots_of_quartic() {
        // x^4 - 3x^3 - x^2 - 2x - 3 has two real roots
        let p = poly(&[-3, -2, -1, -3, 1]);
        let chain = sturm_chain(&squarefree_part(&p));
        assert_eq!(count_roots(&chain, &q(7, 2), &q(18, 5)), 1);
        assert_eq!(count_roots(&chain, &q(-100, 1), &q(100, 1)), 2);
    }

    #[test]
    fn squarefree_strips_multiplicity() {
        // (x-1)^2 (x+2)
        let p = poly(&[2, -3, 0, 1]);
        let sf = squarefree_part(&p);
        assert_eq!(sf.degree(), 2);
        assert!(sf.eval(&q(1, 1)).is_zero());
        assert!(sf.eval(&q(-2, 1)).is_zero());
    }

    #[test]
    fn egcd_gives_inverse_mod_minpoly() {
        // invert x modulo x^2 - x - 1: x^{-1} = x - 1
        let m = poly(&[-1, -1, 1]);
        let a = poly(&[0, 1]);
        let (g, s) = egcd_partial(&a, &m);
        assert_eq!(g.degree(), 0);
        let inv = s.scale(&(BigRational::one() / g.coeffs()[0].clone()));
        assert_eq!(inv.mul(&a).rem(&m), poly(&[1]));
    }

    #[test]
    fn interval_eval_encloses_point_values() {
        let p = poly(&[-1, -1, 1]);
        let (lo, hi) = p.eval_interval(&q(3, 2), &q(2, 1));
        for x in [q(3, 2), q(7, 4), q(2, 1)] {
            let v = p.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }
}
