//! q-Pochhammer symbols and q-factorials.

use super::{QPoly, RationalFunction};
use crate::error::Result;

/// `(q^a; q)_n = (1 - q^a)(1 - q^{a+1}) ... (1 - q^{a+n-1})`.
///
/// Negative `a` is allowed; those factors are rational functions.
pub fn qpochhammer(a_power: i64, n: usize) -> RationalFunction {
    let one = RationalFunction::one();
    (0..n as i64)
        .map(|i| &one - &RationalFunction::q_pow(a_power + i))
        .product()
}

/// `(a; base)_n` for arbitrary rational-function arguments.
pub fn pochhammer_at(a: &RationalFunction, base: &RationalFunction, n: usize) -> RationalFunction {
    let one = RationalFunction::one();
    let mut acc = RationalFunction::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc = &acc * &(&one - &term);
        term = &term * base;
    }
    acc
}

/// `[n]_q = 1 + q + ... + q^{n-1}`.
pub fn q_integer(n: usize) -> QPoly {
    QPoly::from_int_coeffs(&vec![1; n])
}

/// `[n]_q! = (q; q)_n / (1 - q)^n`, kept in cancelled polynomial form so it
/// can be evaluated at `q = 1`.
pub fn lambda_factorial(n: usize) -> RationalFunction {
    let mut acc = QPoly::one();
    for i in 1..=n {
        acc = &acc * &q_integer(i);
    }
    RationalFunction::from_poly(acc)
}

/// `[n]_λ!` evaluated at a given `λ` (symbolic `q` or a constant).
pub fn lambda_factorial_at(n: usize, lambda: &RationalFunction) -> RationalFunction {
    let mut acc = RationalFunction::one();
    for i in 1..=n {
        let mut s = RationalFunction::zero();
        let mut pw = RationalFunction::one();
        for _ in 0..i {
            s = &s + &pw;
            pw = &pw * lambda;
        }
        acc = &acc * &s;
    }
    acc
}

/// Evaluate any rational function at `q = at`.
pub fn specialize(f: &RationalFunction, at: &num_rational::BigRational) -> Result<num_rational::BigRational> {
    f.eval(at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn pochhammer_examples() {
        assert!(qpochhammer(1, 0).is_one());
        let expected = RationalFunction::from_poly(QPoly::from_int_coeffs(&[1, -1]))
            * RationalFunction::from_poly(QPoly::from_int_coeffs(&[1, 0, -1]));
        assert_eq!(qpochhammer(1, 2), expected);
        assert!(qpochhammer(0, 3).is_zero());
        for n in 1..6 {
            assert!(qpochhammer(0, n).is_zero());
        }
    }

    #[test]
    fn negative_base_power() {
        // (q^{-1}; q)_2 = (1 - 1/q)(1 - 1) = 0
        assert!(qpochhammer(-1, 2).is_zero());
        // (q^{-1}; q)_1 = (q - 1)/q
        assert_eq!(qpochhammer(-1, 1).to_string(), "(q - 1)/q");
    }

    #[test]
    fn factorial_forms() {
        assert!(lambda_factorial(0).is_one());
        let three = RationalFunction::from_poly(&QPoly::from_int_coeffs(&[1, 1]) * &QPoly::from_int_coeffs(&[1, 1, 1]));
        assert_eq!(lambda_factorial(3), three);
        // (λ;λ)_3 / (1-λ)^3 matches the cancelled product
        let one_minus = RationalFunction::from_poly(QPoly::from_int_coeffs(&[1, -1]));
        let literal = qpochhammer(1, 3).checked_div(&one_minus.pow(3).unwrap()).unwrap();
        assert_eq!(literal, three);
        assert_eq!(specialize(&literal, &BigRational::one()).unwrap(), big(6));
        let mut fact = 1i64;
        for n in 0..=8 {
            if n > 0 {
                fact *= n;
            }
            assert_eq!(
                lambda_factorial(n as usize).eval(&BigRational::one()).unwrap(),
                big(fact)
            );
        }
    }

    #[test]
    fn factorial_at_matches_symbolic() {
        for n in 0..6 {
            assert_eq!(lambda_factorial_at(n, &RationalFunction::q()), lambda_factorial(n));
        }
        assert_eq!(
            lambda_factorial_at(4, &RationalFunction::one()),
            RationalFunction::from_int(24)
        );
    }
}
