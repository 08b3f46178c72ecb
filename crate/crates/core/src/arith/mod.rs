//! Exact coefficient arithmetic: rationals, polynomials and rational
//! functions in `q`, q-analogs, and the string form shared by every output.

pub mod parse;
mod qanalog;
mod qpoly;
mod ratfunc;
mod ring;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use qanalog::{lambda_factorial, lambda_factorial_at, pochhammer_at, q_integer, qpochhammer, specialize};
pub use qpoly::QPoly;
pub use ratfunc::RationalFunction;
pub use ring::Ring;

/// Parse `"3/2"`, `"-4"` and friends into a rational.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let f: RationalFunction = s.parse()?;
    f.as_constant()
        .ok_or_else(|| crate::Error::Input(format!("`{s}` is not a rational constant")))
}
