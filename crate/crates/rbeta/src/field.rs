//! Exact arithmetic and ordering in the real algebraic field Q(beta).
//!
//! A `FieldContext` fixes a defining polynomial together with an isolating
//! interval selecting a single real root beta > 1, beta not an integer.
//! Elements are stored in the power basis with rational coefficients, reduced
//! modulo the defining polynomial, so equality and order are decided exactly.
//! No floating point enters any comparison; floats appear only in the
//! reporting conversions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

use crate::poly::{self, QPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("defining polynomial must have degree >= 1")]
    InvalidPolynomial,
    #[error("interval must satisfy lo < hi")]
    InvalidInterval,
    #[error("an interval endpoint is a root of the defining polynomial")]
    RootOnBoundary,
    #[error("no root of the defining polynomial in the interval")]
    NoRootInInterval,
    #[error("more than one root of the defining polynomial in the interval")]
    MultipleRootsInInterval,
    #[error("the selected root is an integer; beta must be a non-integer")]
    IntegerRoot,
    #[error("the selected root is not greater than 1")]
    RootNotAboveOne,
    #[error("division by zero field element")]
    DivisionByZero,
}

/// Immutable description of Q(beta). Shared behind `Arc`; every refinement
/// below works on local copies of the isolating interval.
pub struct FieldContext {
    minpoly: Vec<BigInt>,
    degree: usize,
    monic: QPoly,
    squarefree: QPoly,
    interval: (BigRational, BigRational),
    floor_beta: u32,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("minpoly", &self.minpoly)
            .field("interval", &self.interval)
            .field("floor_beta", &self.floor_beta)
            .finish()
    }
}

enum Bisect {
    Left(BigRational),
    Right(BigRational),
    /// The midpoint is the root itself (beta is rational).
    Exact(BigRational),
}

impl FieldContext {
    /// Builds the field from integer coefficients in ascending degree and a
    /// bracketing interval for beta.
    pub fn new(
        minpoly: &[i64],
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Arc<FieldContext>, FieldError> {
        let coeffs: Vec<BigInt> = minpoly.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_bigints(coeffs, lo, hi)
    }

    pub fn from_bigints(
        mut coeffs: Vec<BigInt>,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Arc<FieldContext>, FieldError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(FieldError::InvalidPolynomial);
        }
        if lo >= hi {
            return Err(FieldError::InvalidInterval);
        }
        let full = QPoly::from_bigints(&coeffs);
        let squarefree = poly::squarefree_part(&full);
        if squarefree.eval(&lo).is_zero() || squarefree.eval(&hi).is_zero() {
            return Err(FieldError::RootOnBoundary);
        }
        let sturm = poly::sturm_chain(&squarefree);
        match poly::count_roots(&sturm, &lo, &hi) {
            0 => return Err(FieldError::NoRootInInterval),
            1 => {}
            _ => return Err(FieldError::MultipleRootsInInterval),
        }

        // The unique root equals an integer exactly when the polynomial
        // vanishes at some integer inside the interval.
        let mut n = lo.ceil().to_integer();
        let top = hi.floor().to_integer();
        while n <= top {
            if full.eval(&BigRational::from_integer(n.clone())).is_zero() {
                return Err(FieldError::IntegerRoot);
            }
            n += 1;
        }

        let mut ctx = FieldContext {
            degree: coeffs.len() - 1,
            minpoly: coeffs,
            monic: full.monic(),
            squarefree,
            interval: (lo, hi),
            floor_beta: 0,
        };

        // beta > 1
        loop {
            if ctx.interval.1 <= BigRational::one() {
                return Err(FieldError::RootNotAboveOne);
            }
            if ctx.interval.0 > BigRational::one() {
                break;
            }
            ctx.interval = ctx.bisect_interval(&ctx.interval);
        }
        // exclude integers from the closed interval, then pin the floor
        loop {
            let (lo, hi) = &ctx.interval;
            if lo.ceil() > hi.floor() {
                break;
            }
            ctx.interval = ctx.bisect_interval(&ctx.interval);
        }
        while ctx.interval.0.floor() != ctx.interval.1.floor() {
            ctx.interval = ctx.bisect_interval(&ctx.interval);
        }
        ctx.floor_beta = ctx
            .interval
            .0
            .floor()
            .to_integer()
            .to_u32()
            .expect("floor of beta fits in u32");

        // pre-refine so that routine sign evaluations rarely need to bisect
        for _ in 0..24 {
            ctx.interval = ctx.bisect_interval(&ctx.interval);
        }
        Ok(Arc::new(ctx))
    }

    fn bisect(&self, interval: &(BigRational, BigRational)) -> Bisect {
        let mid = (&interval.0 + &interval.1) / BigRational::from_integer(BigInt::from(2));
        let v = self.squarefree.eval(&mid);
        if v.is_zero() {
            return Bisect::Exact(mid);
        }
        let at_lo = self.squarefree.eval(&interval.0);
        if at_lo.is_positive() != v.is_positive() {
            Bisect::Left(mid)
        } else {
            Bisect::Right(mid)
        }
    }

    /// One bisection step keeping the root inside. If the midpoint is the
    /// root itself, shrink to a tight rational interval around it that
    /// contains no integer.
    fn bisect_interval(&self, interval: &(BigRational, BigRational)) -> (BigRational, BigRational) {
        match self.bisect(interval) {
            Bisect::Left(mid) => (interval.0.clone(), mid),
            Bisect::Right(mid) => (mid, interval.1.clone()),
            Bisect::Exact(mid) => {
                let below = &mid - mid.floor();
                let above = mid.ceil() - &mid;
                let two = BigRational::from_integer(BigInt::from(2));
                let width = (&interval.1 - &interval.0) / &two / &two;
                let mut delta = below.min(above) / two;
                if delta.is_zero() || delta > width {
                    delta = width;
                }
                (&mid - &delta, mid + delta)
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Current isolating interval (already refined past integers and 1).
    pub fn interval(&self) -> &(BigRational, BigRational) {
        &self.interval
    }

    pub fn floor_beta(&self) -> u32 {
        self.floor_beta
    }

    /// Several refinement steps, producing a fresh interval; the context
    /// itself is never mutated.
    pub fn refined_interval(&self, steps: u32) -> (BigRational, BigRational) {
        let mut iv = self.interval.clone();
        for _ in 0..steps {
            iv = self.bisect_interval(&iv);
        }
        iv
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_poly(self.clone(), QPoly::zero())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn beta(self: &Arc<Self>) -> FieldElement {
        let x = QPoly::new(vec![BigRational::zero(), BigRational::one()]);
        FieldElement::from_poly(self.clone(), x)
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        FieldElement::from_poly(self.clone(), QPoly::constant(q))
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Right endpoint of I_beta: floor(beta) / (beta - 1).
    pub fn i_beta_right(self: &Arc<Self>) -> FieldElement {
        let b = self.from_int(self.floor_beta as i64);
        &b / &(&self.beta() - &self.one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .minpoly
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(c.to_string()),
            })
            .collect();
        json!({
            "minpoly": coeffs,
            "interval": [rational_string(&self.interval.0), rational_string(&self.interval.1)],
            "degree": self.degree,
            "floor_beta": self.floor_beta,
        })
    }
}

pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses "a/b" or "a" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("invalid integer: {t:?}"))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

/// An element of Q(beta) in the power basis 1, beta, ..., beta^(d-1).
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>, // length == ctx.degree
}

impl FieldElement {
    fn from_poly(ctx: Arc<FieldContext>, p: QPoly) -> FieldElement {
        let reduced = if p.degree() >= ctx.degree && !p.is_zero() {
            p.rem(&ctx.monic)
        } else {
            p
        };
        let mut coeffs = reduced.coeffs().to_vec();
        coeffs.resize(ctx.degree, BigRational::zero());
        FieldElement { ctx, coeffs }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn as_poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    fn assert_same_ctx(&self, other: &FieldElement) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.minpoly == other.ctx.minpoly,
            "field elements from different contexts"
        );
    }

    /// Exact test for the element being zero as a real number. The canonical
    /// form being zero is the common case; when the defining polynomial is
    /// reducible a nonzero canonical form can still vanish at beta, which the
    /// gcd + root-count branch detects.
    pub fn is_zero_value(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        let g = poly::gcd(&self.as_poly(), &self.ctx.squarefree);
        if g.degree() == 0 {
            return false;
        }
        let chain = poly::sturm_chain(&g);
        let (lo, hi) = &self.ctx.interval;
        poly::count_roots(&chain, lo, hi) > 0
    }

    /// Exact sign of the real number this element represents.
    pub fn sign(&self) -> i8 {
        if self.is_zero_value() {
            return 0;
        }
        let p = self.as_poly();
        if p.degree() == 0 {
            return if p.coeffs()[0].is_positive() { 1 } else { -1 };
        }
        let mut iv = self.ctx.interval.clone();
        loop {
            let (lo, hi) = p.eval_interval(&iv.0, &iv.1);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            match self.ctx.bisect(&iv) {
                Bisect::Left(mid) => iv = (iv.0, mid),
                Bisect::Right(mid) => iv = (mid, iv.1),
                Bisect::Exact(mid) => {
                    let v = p.eval(&mid);
                    return if v.is_zero() {
                        0
                    } else if v.is_positive() {
                        1
                    } else {
                        -1
                    };
                }
            }
        }
    }

    pub fn is_positive_value(&self) -> bool {
        self.sign() > 0
    }

    pub fn cmp_exact(&self, other: &FieldElement) -> Ordering {
        self.assert_same_ctx(other);
        match (self - other).sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Float rendering via interval refinement: the enclosure of the value is
    /// shrunk below 2^width_log2 and the midpoint returned.
    pub fn to_f64_with(&self, width_log2: i32) -> f64 {
        let p = self.as_poly();
        if p.degree() == 0 {
            return p
                .coeffs()
                .first()
                .map(|c| c.to_f64().unwrap_or(0.0))
                .unwrap_or(0.0);
        }
        let target = BigRational::new(
            BigInt::one(),
            BigInt::from(2u8).pow(width_log2.unsigned_abs()),
        );
        let mut iv = self.ctx.interval.clone();
        let mut enclosure = p.eval_interval(&iv.0, &iv.1);
        let mut guard = 0;
        while &enclosure.1 - &enclosure.0 > target && guard < 4096 {
            match self.ctx.bisect(&iv) {
                Bisect::Left(mid) => iv = (iv.0, mid),
                Bisect::Right(mid) => iv = (mid, iv.1),
                Bisect::Exact(mid) => {
                    return p.eval(&mid).to_f64().unwrap_or(f64::NAN);
                }
            }
            enclosure = p.eval_interval(&iv.0, &iv.1);
            guard += 1;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        ((enclosure.0 + enclosure.1) / two).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_with(-64)
    }

    /// Cheap float estimate from the stored interval, used only for pivot
    /// selection in exact linear solves.
    pub(crate) fn rough_f64(&self) -> f64 {
        let p = self.as_poly();
        let (lo, hi) = p.eval_interval(&self.ctx.interval.0, &self.ctx.interval.1);
        let two = BigRational::from_integer(BigInt::from(2));
        ((lo + hi) / two).to_f64().unwrap_or(0.0)
    }

    pub fn mul_rational(&self, q: &BigRational) -> FieldElement {
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero_value() {
            return Err(FieldError::DivisionByZero);
        }
        let inv = invert_mod(&self.as_poly(), &self.ctx.monic, &self.ctx);
        Ok(FieldElement::from_poly(self.ctx.clone(), inv))
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

/// Inverse of `a` modulo `m`, valid at beta. With a reducible modulus the
/// extended gcd can surface a common factor; a factor not vanishing at beta
/// is divided out of the modulus and the inversion retried.
fn invert_mod(a: &QPoly, m: &QPoly, ctx: &FieldContext) -> QPoly {
    let (g, s) = poly::egcd_partial(a, m);
    if g.degree() == 0 {
        let c = BigRational::one() / g.coeffs()[0].clone();
        return s.scale(&c).rem(m);
    }
    // g(beta) != 0 here because a(beta) != 0; beta remains a root of m / g.
    let reduced = m.div_exact(&g);
    debug_assert!(ctx.squarefree.degree() > 0);
    invert_mod(&a.rem(&reduced), &reduced, ctx)
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.assert_same_ctx(other);
        if self.coeffs == other.coeffs {
            return true;
        }
        (self - other).is_zero_value()
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_ctx(rhs);
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_ctx(rhs);
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_ctx(rhs);
        FieldElement::from_poly(self.ctx.clone(), self.as_poly().mul(&rhs.as_poly()))
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is mul by inverse
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inverse().expect("division by zero field element");
        self * &inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden() -> Arc<FieldContext> {
        FieldContext::new(
            &[-1, -1, 1],
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        )
        .unwrap()
    }

    fn quartic() -> Arc<FieldContext> {
        FieldContext::new(
            &[-3, -2, -1, -3, 1],
            BigRational::new(BigInt::from(7), BigInt::from(2)),
            BigRational::new(BigInt::from(18), BigInt::from(5)),
        )
        .unwrap()
    }

    #[test]
    fn golden_field_has_floor_one() {
        let ctx = golden();
        assert_eq!(ctx.floor_beta(), 1);
        assert!(ctx.interval().0 > BigRational::one());
    }

    #[test]
    fn quartic_field_has_floor_three() {
        let ctx = quartic();
        assert_eq!(ctx.floor_beta(), 3);
    }

    #[test]
    fn integer_root_rejected() {
        let err = FieldContext::new(
            &[-4, 0, 1],
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap_err();
        assert_eq!(err, FieldError::IntegerRoot);
    }

    #[test]
    fn no_root_and_multiple_roots_rejected() {
        let err = FieldContext::new(
            &[-1, -1, 1],
            BigRational::from_integer(BigInt::from(3)),
            BigRational::from_integer(BigInt::from(4)),
        )
        .unwrap_err();
        assert_eq!(err, FieldError::NoRootInInterval);

        let err = FieldContext::new(
            &[-1, -1, 1],
            BigRational::from_integer(BigInt::from(-10)),
            BigRational::from_integer(BigInt::from(10)),
        )
        .unwrap_err();
        assert_eq!(err, FieldError::MultipleRootsInInterval);
    }

    #[test]
    fn beta_squared_is_beta_plus_one() {
        let ctx = golden();
        let b = ctx.beta();
        let lhs = &b * &b;
        let rhs = &b + &ctx.one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn golden_inverse_of_beta_minus_one_is_beta() {
        let ctx = golden();
        let b = ctx.beta();
        let inv = (&b - &ctx.one()).inverse().unwrap();
        assert_eq!(inv, b);
        // multiply back
        assert_eq!(&(&b - &ctx.one()) * &inv, ctx.one());
    }

    #[test]
    fn subtraction_gives_zero() {
        let ctx = quartic();
        let x = &ctx.beta() * &ctx.from_int(5);
        assert!((&x - &x).is_zero_value());
    }

    #[test]
    fn division_by_zero_reported() {
        let ctx = golden();
        assert_eq!(ctx.zero().inverse().unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn signs_match_known_inequalities() {
        let ctx = golden();
        let b = ctx.beta();
        assert_eq!((&b - &ctx.one()).sign(), 1);
        let minpoly_value = &(&b * &b) - &(&b + &ctx.one());
        assert_eq!(minpoly_value.sign(), 0);

        let q = quartic();
        let seven_halves = q.from_rational(BigRational::new(BigInt::from(7), BigInt::from(2)));
        assert_eq!((&q.beta() - &seven_halves).sign(), 1);
    }

    #[test]
    fn to_f64_accuracy() {
        let ctx = golden();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((ctx.beta().to_f64() - phi).abs() < 1e-12);
        let q = quartic();
        assert!((q.beta().to_f64() - 3.5153642410069245).abs() < 1e-9);
    }

    #[test]
    fn reducible_modulus_stays_exact() {
        // (x^2 - x - 1)(x - 3), golden root isolated
        let ctx = FieldContext::new(
            &[3, 2, -4, 1],
            BigRational::new(BigInt::from(3), BigInt::from(2)),
            BigRational::new(BigInt::from(17), BigInt::from(10)),
        )
        .unwrap();
        let b = ctx.beta();
        // beta^2 - beta - 1 is nonzero in canonical form but vanishes at beta
        let v = &(&b * &b) - &(&b + &ctx.one());
        assert!(v.is_zero_value());
        assert_eq!(v.sign(), 0);
        // arithmetic still inverts correctly
        let inv = (&b - &ctx.one()).inverse().unwrap();
        assert_eq!(&(&b - &ctx.one()) * &inv, ctx.one());
    }

    #[test]
    fn interval_refinement_halves_width() {
        let ctx = golden();
        let (lo0, hi0) = ctx.interval().clone();
        let (lo1, hi1) = ctx.refined_interval(3);
        let w0 = hi0 - lo0;
        let w1 = hi1 - lo1;
        let eight = BigRational::from_integer(BigInt::from(8));
        assert!(w1 <= w0 / eight);
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-6i64..=6, 1i64..=4)
            .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn element_of(ctx: Arc<FieldContext>) -> impl Strategy<Value = FieldElement> {
        let d = ctx.degree();
        proptest::collection::vec(small_rational(), d).prop_map(move |cs| {
            FieldElement::from_poly(ctx.clone(), QPoly::new(cs))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_is_ring_homomorphism(cs_a in proptest::collection::vec(small_rational(), 2),
                                     cs_b in proptest::collection::vec(small_rational(), 2)) {
            // canonical(p) * canonical(q) agrees with reducing p*q directly
            let ctx = golden();
            let a = FieldElement::from_poly(ctx.clone(), QPoly::new(cs_a.clone()));
            let b = FieldElement::from_poly(ctx.clone(), QPoly::new(cs_b.clone()));
            let direct = QPoly::new(cs_a).mul(&QPoly::new(cs_b));
            let reduced = FieldElement::from_poly(ctx, direct);
            prop_assert_eq!(&a * &b, reduced);
        }

        #[test]
        fn sign_is_multiplicative(a in element_of(quartic()), b in element_of(quartic())) {
            let sa = a.sign();
            let sb = b.sign();
            if sa != 0 && sb != 0 {
                prop_assert_eq!((&a * &b).sign(), sa * sb);
            }
        }
    }
}
