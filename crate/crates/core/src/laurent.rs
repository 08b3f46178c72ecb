//! Sparse multivariate Laurent polynomials over any coefficient [`Ring`].

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{RationalFunction, Ring};

/// `Σ c_e z^e` over integer exponent vectors `e` (entries may be negative).
///
/// Exponent keys are stored with trailing zeros trimmed, so polynomials built
/// with different declared variable counts still compare and combine
/// correctly; `nvars` only records how many variables the value declares.
#[derive(Clone)]
pub struct LaurentPoly<C = RationalFunction> {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

fn trim(mut e: Vec<i32>) -> Vec<i32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl<C: Ring> LaurentPoly<C> {
    pub fn zero_in(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_in(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i32>, c: C) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `z_i` (zero-based) among `nvars` variables.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars.max(i + 1)];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = self.nvars.max(nvars);
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with exponent vectors padded to `nvars`, in ascending exponent
    /// order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<i32>, &C)> + '_ {
        self.terms.iter().map(move |(e, c)| {
            let mut full = e.clone();
            full.resize(self.nvars.max(e.len()), 0);
            (full, c)
        })
    }

    pub fn coeff(&self, exps: &[i32]) -> C {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: C) {
        if c.is_zero() {
            return;
        }
        self.nvars = self.nvars.max(exps.len());
        let key = trim(exps);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Substitute `z_i -> z_i^{-1}` for every variable.
    pub fn invert_variables(&self) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.iter().map(|x| -x).collect(), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero_in(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Render with the given variable names (falls back to `z1, z2, ...`).
    pub fn render(&self, names: &[String]) -> String
    where
        C: fmt::Display,
    {
        self.render_by(names, |c| c.to_string())
    }

    /// Render with a custom coefficient formatter.
    pub fn render_by(&self, names: &[String], coeff: impl Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("z{}", i + 1));
                mono.push(if x == 1 { name } else { format!("{name}^{x}") });
            }
            let cs = coeff(c);
            let term = if mono.is_empty() {
                format!("({cs})")
            } else if cs == "1" {
                mono.join("*")
            } else {
                format!("({cs})*{}", mono.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<C: Ring> PartialEq for LaurentPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Ring> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Ring> Ring for LaurentPoly<C> {
    fn zero() -> Self {
        Self::zero_in(0)
    }

    fn one() -> Self {
        Self::constant_in(0, C::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.nvars = self.nvars.max(rhs.nvars);
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero_in(self.nvars.max(rhs.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let len = ea.len().max(eb.len());
                let e: Vec<i32> = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    fn from_scalar(c: &RationalFunction) -> Self {
        Self::constant_in(0, C::from_scalar(c))
    }

    fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.scale(c));
        }
        out
    }

    /// Only single-term polynomials with invertible coefficient are units.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let inv = c.try_inv()?;
        Some(LaurentPoly {
            nvars: self.nvars,
            terms: std::iter::once((e.iter().map(|x| -x).collect(), inv)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LaurentPoly<RationalFunction>;

    #[test]
    fn zero_exponents_are_canonical() {
        let a = L::constant_in(3, RationalFunction::from_int(2));
        let b = L::constant_in(0, RationalFunction::from_int(2));
        assert_eq!(a, b);
        assert_eq!(a.coeff(&[0, 0, 0]), RationalFunction::from_int(2));
    }

    #[test]
    fn monomials_invert() {
        let z = L::var(1, 2).scale(&RationalFunction::q());
        let inv = z.try_inv().unwrap();
        assert_eq!(z.mul(&inv), L::one());
        let two_terms = L::var(0, 2).add(&L::var(1, 2));
        assert!(two_terms.try_inv().is_none());
    }

    #[test]
    fn cancellation_removes_terms() {
        let z = L::var(0, 1);
        assert!(z.sub(&z).is_zero());
        assert_eq!(z.sub(&z).len(), 0);
    }
}
