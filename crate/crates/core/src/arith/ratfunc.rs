//! Reduced rational functions in a single indeterminate `q`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::QPoly;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
///
/// Every value has exactly one representation, so `==` is structural and a
/// removable singularity (such as `(1 - q^2)/(1 - q)` at `q = 1`) is already
/// cancelled when the value is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: QPoly,
    den: QPoly,
}

impl Hash for RationalFunction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::from_poly(QPoly::q())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(QPoly::from_int(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn from_poly(num: QPoly) -> Self {
        RationalFunction { num, den: QPoly::one() }
    }

    /// Build and reduce `num / den`.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.coeff(0).recip();
            return RationalFunction {
                num: num.scale(&inv),
                den: QPoly::one(),
            };
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        let m = QPoly::monomial(BigRational::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction {
                num: QPoly::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a rational constant, if it does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &Self::reduce(rhs.den.clone(), rhs.num.clone()))
    }

    /// Integer power; negative exponents invert (and fail on zero).
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Substitute `q = at`. Poles of the reduced form are reported, so a
    /// removable singularity evaluates to its limit.
    pub fn eval(&self, at: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::Pole {
                point: format!("q = {at}"),
            });
        }
        Ok(self.num.eval(at) / d)
    }

    /// Canonical integer-coefficient numerator and denominator: the
    /// denominator has a positive leading coefficient and the pair shares no
    /// integer content.
    pub fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lcm = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let to_int = |p: &QPoly| -> Vec<BigInt> { p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect() };
        let mut n = to_int(&self.num);
        let mut d = to_int(&self.den);
        let g = n.iter().chain(d.iter()).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            n.iter_mut().for_each(|c| *c /= &g);
            d.iter_mut().for_each(|c| *c /= &g);
        }
        (n, d)
    }

    /// Render using `var` for the indeterminate.
    pub fn to_string_with(&self, var: &str) -> String {
        let (n, d) = self.integer_parts();
        let num_s = QPoly::fmt_integer(&n, var);
        if d.len() == 1 && d[0].is_one() {
            return num_s;
        }
        let terms = |v: &[BigInt]| v.iter().filter(|c| !c.is_zero()).count();
        let num_s = if terms(&n) > 1 { format!("({num_s})") } else { num_s };
        let den_s = QPoly::fmt_integer(&d, var);
        let bare_den = d.len() == 1 || (terms(&d) == 1 && d.last().is_some_and(|c| c.is_one()));
        if bare_den {
            format!("{num_s}/{den_s}")
        } else {
            format!("{num_s}/({den_s})")
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("q"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_rational_function(s)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunction {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return RationalFunction {
                num: &(&self.num * &rhs.den) + &rhs.num,
                den: rhs.den.clone(),
            };
        }
        // a/b + c/d with g = gcd(b, d): (a·d/g + c·b/g) / (b·d/g)
        let g = QPoly::gcd(&self.den, &rhs.den);
        let (bg, dg) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g), rhs.den.div_exact(&g))
        };
        let num = &(&self.num * &dg) + &(&rhs.num * &bg);
        let den = &self.den * &dg;
        RationalFunction::reduce(num, den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel: (a/b)(c/d) with g1 = gcd(a, d), g2 = gcd(c, b)
        let g1 = QPoly::gcd(&self.num, &rhs.den);
        let g2 = QPoly::gcd(&rhs.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (c, b) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading().expect("nonzero").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`] for
    /// a fallible version.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("rational function division by zero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + &x)
    }
}

impl std::iter::Product for RationalFunction {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| &acc * &x)
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_int_coeffs(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn common_factor_cancels() {
        assert_eq!(rf(&[1, -1], &[1, 0, -1]), rf(&[1], &[1, 1]));
    }

    #[test]
    fn negative_power_normalizes() {
        let one = RationalFunction::one();
        let x = &one - &RationalFunction::q_pow(-1);
        assert_eq!(x.to_string(), "(q - 1)/q");
        assert_eq!(&x * &RationalFunction::q(), rf(&[-1, 1], &[1]));
    }

    #[test]
    fn identity_and_division() {
        let a = rf(&[2, 0, 3], &[1, 5]);
        assert_eq!(&a * &RationalFunction::one(), a);
        assert_eq!(&(&a / &a), &RationalFunction::one());
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn specialization_and_poles() {
        let f = rf(&[1, 0, -1], &[1, -1]);
        assert_eq!(
            f.eval(&BigRational::one()).unwrap(),
            BigRational::from_integer(2.into())
        );
        let g = rf(&[1], &[1, -1]);
        assert!(matches!(g.eval(&BigRational::one()), Err(Error::Pole { .. })));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(rf(&[1, 0, 0, -1], &[1, 1]).to_string(), "(-q^3 + 1)/(q + 1)");
        assert_eq!(rf(&[1], &[1, 2]).to_string(), "1/(2*q + 1)");
        assert_eq!(rf(&[3], &[2]).to_string(), "3/2");
        assert_eq!(rf(&[0, -1], &[2]).to_string(), "-q/2");
        assert_eq!(rf(&[3], &[0, 0, 1]).to_string(), "3/q^2");
        assert_eq!(RationalFunction::zero().to_string(), "0");
    }
}
