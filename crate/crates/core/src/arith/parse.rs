//! Reader for the textual form of coefficients and Laurent expressions.
//!
//! Grammar (usual precedence, `^` binds tightest, `*` and `/` left-assoc):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" "-"? integer)?
//! atom  := integer | identifier | "(" expr ")"
//! ```
//!
//! The identifier `q` is the coefficient indeterminate; any other identifier
//! must be one of the caller's variable names.

use crate::arith::{RationalFunction, Ring};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    end = p + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let n = s[pos..end].parse().map_err(|_| Error::Parse {
                pos,
                message: "bad integer".into(),
            })?;
            out.push((pos, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(p, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    end = p + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(s[pos..end].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            chars.next();
        } else {
            return Err(Error::Parse {
                pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Distinct identifiers other than `q`, in order of first appearance.
pub fn collect_identifiers(s: &str) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for (_, t) in tokenize(s)? {
        if let Tok::Ident(name) = t {
            if name != "q" && !seen.contains(&name) {
                seen.push(name);
            }
        }
    }
    Ok(seen)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    names: &'a [String],
    len: usize,
}

type Value = LaurentPoly<RationalFunction>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse {
                        pos,
                        message: "division by zero".into(),
                    });
                }
                match d.try_inv() {
                    Some(inv) => acc = acc.mul(&inv),
                    None => {
                        return Err(Error::Parse {
                            pos,
                            message: "divisor must be a single term".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let pos = self.pos();
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return self.err("expected integer exponent");
        };
        self.at += 1;
        let e: u32 = e.try_into().map_err(|_| Error::Parse {
            pos,
            message: "exponent too large".into(),
        })?;
        let base = if neg {
            base.try_inv().ok_or(Error::Parse {
                pos,
                message: "negative power of a non-monomial".into(),
            })?
        } else {
            base
        };
        Ok(Ring::pow(&base, e))
    }

    fn atom(&mut self) -> Result<Value> {
        let nvars = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Value::constant_in(nvars, RationalFunction::from_bigint(n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == "q" {
                    return Ok(Value::constant_in(nvars, RationalFunction::q()));
                }
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Value::var(i, nvars)),
                    None => self.err(format!("unknown variable `{name}`")),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(v)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

/// Parse an expression over the named Laurent variables with coefficients in
/// the rational functions of `q`.
pub fn parse_laurent(s: &str, names: &[String]) -> Result<LaurentPoly<RationalFunction>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        names,
        len: s.len(),
    };
    let v = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v.with_nvars(names.len()))
}

/// Parse a rational function of `q`, e.g. `"(-q^3 + 1)/(q + 1)"` or `"3/2"`.
pub fn parse_rational_function(s: &str) -> Result<RationalFunction> {
    let v = parse_laurent(s, &[])?;
    Ok(v.coeff(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QPoly;

    #[test]
    fn reads_canonical_forms() {
        let f: RationalFunction = "(-q^3 + 1)/(q + 1)".parse().unwrap();
        let expected =
            RationalFunction::new(QPoly::from_int_coeffs(&[1, 0, 0, -1]), QPoly::from_int_coeffs(&[1, 1])).unwrap();
        assert_eq!(f, expected);
        assert_eq!("3/2".parse::<RationalFunction>().unwrap().to_string(), "3/2");
        assert_eq!("-q/2".parse::<RationalFunction>().unwrap().to_string(), "-q/2");
        assert_eq!(
            "1/(2*q + 1)".parse::<RationalFunction>().unwrap().to_string(),
            "1/(2*q + 1)"
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            "1 - 2^3".parse::<RationalFunction>().unwrap(),
            RationalFunction::from_int(-7)
        );
        assert_eq!("2*q^-1".parse::<RationalFunction>().unwrap().to_string(), "2/q");
        assert_eq!(
            "-(q - 1)*(q + 1)".parse::<RationalFunction>().unwrap().to_string(),
            "-q^2 + 1"
        );
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!("q +".parse::<RationalFunction>(), Err(Error::Parse { .. })));
        assert!(matches!("x1".parse::<RationalFunction>(), Err(Error::Parse { .. })));
        assert!(matches!("1/0".parse::<RationalFunction>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "1/(q - q)".parse::<RationalFunction>(),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn laurent_variables() {
        let names = vec!["a12".to_string(), "a22".to_string()];
        let v = parse_laurent("q*a12^2/a22", &names).unwrap();
        assert_eq!(v.coeff(&[2, -1]), RationalFunction::q());
        assert_eq!(collect_identifiers("x1*q + x2 - x1").unwrap(), vec!["x1", "x2"]);
    }
}
