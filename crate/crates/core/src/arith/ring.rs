use std::fmt::Debug;

use super::RationalFunction;

/// A commutative ring whose scalars include the rational functions in `q`.
///
/// Determinant-style sums are written once against this trait and run over
/// plain coefficients, multivariate Laurent polynomials, and symmetric
/// functions alike.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(c: &RationalFunction) -> Self;

    /// Multiplicative inverse, when one exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn scale(&self, c: &RationalFunction) -> Self {
        self.mul(&Self::from_scalar(c))
    }

    /// Exact quotient `self / rhs`, when `rhs` is a unit.
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        rhs.try_inv().map(|inv| self.mul(&inv))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(c: &RationalFunction) -> Self {
        c.clone()
    }
    fn scale(&self, c: &RationalFunction) -> Self {
        self * c
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
    fn pow(&self, exp: u32) -> Self {
        RationalFunction::pow(self, exp as i64).expect("nonnegative power")
    }
}
