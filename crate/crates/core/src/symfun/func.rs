use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::partition::{partitions, Partition};
use crate::arith::{RationalFunction, Ring};
use crate::error::{Error, Result};

/// Basis a [`SymFun`] stores its coefficients in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Power sums `p_λ`.
    #[serde(rename = "p")]
    Power,
    /// Monomial symmetric functions `m_λ`.
    #[serde(rename = "m")]
    Monomial,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Power => "p",
            Basis::Monomial => "m",
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(Basis::Power),
            "m" => Ok(Basis::Monomial),
            _ => Err(Error::Input(format!("unknown basis `{s}` (expected p|m)"))),
        }
    }
}

/// Change-of-basis data at one weight. `to_m[a][b]` is the coefficient of
/// `m_{parts[b]}` in `p_{parts[a]}`; `to_p` is its inverse.
struct Transition {
    index: HashMap<Partition, usize>,
    parts: Vec<Partition>,
    to_m: Vec<Vec<BigRational>>,
    to_p: Vec<Vec<BigRational>>,
}

static TRANSITIONS: Lazy<Mutex<HashMap<usize, Arc<Transition>>>> = Lazy::new(Default::default);

fn transition(n: usize) -> Arc<Transition> {
    if let Some(t) = TRANSITIONS.lock().unwrap().get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_transition(n));
    TRANSITIONS.lock().unwrap().entry(n).or_insert(t).clone()
}

/// Number of ways to drop the (distinguishable) parts of `mu` into bins
/// with the given remaining capacities so every bin ends exactly full.
fn fillings(mu: &[usize], bins: &mut [usize]) -> u64 {
    let Some((&first, rest)) = mu.split_first() else {
        return bins.iter().all(|&b| b == 0) as u64;
    };
    let mut total = 0;
    for j in 0..bins.len() {
        if bins[j] >= first {
            bins[j] -= first;
            total += fillings(rest, bins);
            bins[j] += first;
        }
    }
    total
}

fn build_transition(n: usize) -> Transition {
    let parts = partitions(n);
    let size = parts.len();
    let to_m: Vec<Vec<BigRational>> = parts
        .iter()
        .map(|mu| {
            parts
                .iter()
                .map(|lam| {
                    let mut bins = lam.parts().to_vec();
                    BigRational::from_integer(fillings(mu.parts(), &mut bins).into())
                })
                .collect()
        })
        .collect();
    let to_p = invert(&to_m);
    debug_assert_eq!(to_p.len(), size);
    let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Transition {
        index,
        parts,
        to_m,
        to_p,
    }
}

/// Gauss–Jordan inverse of an invertible rational matrix.
fn invert(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut left: Vec<Vec<BigRational>> = a.to_vec();
    let mut right: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !left[r][col].is_zero())
            .expect("transition matrix is invertible");
        left.swap(col, pivot);
        right.swap(col, pivot);
        let inv = left[col][col].recip();
        for x in left[col].iter_mut().chain(right[col].iter_mut()) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || left[r][col].is_zero() {
                continue;
            }
            let f = left[r][col].clone();
            for c in 0..n {
                let dl = &f * &left[col][c];
                left[r][c] -= dl;
                let dr = &f * &right[col][c];
                right[r][c] -= dr;
            }
        }
    }
    right
}

/// A symmetric function with rational-function coefficients in one of two
/// bases. Values need not be homogeneous, so sums of different degrees (as
/// met in generating functions) stay representable.
#[derive(Clone)]
pub struct SymFun {
    basis: Basis,
    coeffs: BTreeMap<Partition, RationalFunction>,
}

impl SymFun {
    pub fn zero_in(basis: Basis) -> Self {
        SymFun {
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: RationalFunction) -> Self {
        Self::from_terms(Basis::Power, [(Partition::empty(), c)])
    }

    pub fn power_sum(lambda: Partition) -> Self {
        Self::from_terms(Basis::Power, [(lambda, RationalFunction::one())])
    }

    pub fn monomial(lambda: Partition) -> Self {
        Self::from_terms(Basis::Monomial, [(lambda, RationalFunction::one())])
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Partition, RationalFunction)>) -> Self {
        let mut out = Self::zero_in(basis);
        for (p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    fn add_term(&mut self, p: Partition, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&p) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.coeffs.remove(&p);
                }
            }
            None => {
                self.coeffs.insert(p, c);
            }
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Nonzero coefficients in increasing partition order.
    pub fn coeffs(&self) -> &BTreeMap<Partition, RationalFunction> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &Partition) -> RationalFunction {
        self.coeffs.get(p).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// The common weight of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<usize> {
        let mut weights = self.coeffs.keys().map(Partition::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs.is_empty() || self.degree().is_some()
    }

    /// Change of basis, exact and degree by degree.
    pub fn to_basis(&self, target: Basis) -> SymFun {
        if target == self.basis {
            return self.clone();
        }
        let mut out = SymFun::zero_in(target);
        let mut by_weight: BTreeMap<usize, Vec<(&Partition, &RationalFunction)>> = BTreeMap::new();
        for (p, c) in &self.coeffs {
            by_weight.entry(p.weight()).or_default().push((p, c));
        }
        for (w, terms) in by_weight {
            let t = transition(w);
            let matrix = match target {
                Basis::Monomial => &t.to_m,
                Basis::Power => &t.to_p,
            };
            for (p, c) in terms {
                let row = &matrix[t.index[p]];
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out.add_term(t.parts[j].clone(), c.scale(x));
                    }
                }
            }
        }
        out
    }

    /// Product, computed in the power-sum basis.
    pub fn multiply(&self, other: &SymFun) -> SymFun {
        let a = self.to_basis(Basis::Power);
        let b = other.to_basis(Basis::Power);
        let mut out = SymFun::zero_in(Basis::Power);
        for (pa, ca) in &a.coeffs {
            for (pb, cb) in &b.coeffs {
                out.add_term(pa.union(pb), ca * cb);
            }
        }
        out
    }

    pub fn scale_by(&self, c: &RationalFunction) -> SymFun {
        let mut out = SymFun::zero_in(self.basis);
        for (p, x) in &self.coeffs {
            out.add_term(p.clone(), x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<SymFun> {
        let mut out = SymFun::zero_in(self.basis);
        for (p, x) in &self.coeffs {
            out.add_term(p.clone(), f(x)?);
        }
        Ok(out)
    }

    /// Evaluate every coefficient at `q = at`.
    pub fn specialize(&self, at: &BigRational) -> Result<SymFun> {
        self.map_coeffs(|c| Ok(RationalFunction::from_rational(c.eval(at)?)))
    }

    /// Text form such as `(1/2)*p[1,1] + (-1/2)*p[2]`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let b = self.basis.as_str();
        self.coeffs
            .iter()
            .map(|(p, c)| {
                let cs = c.to_string();
                match (p.is_empty(), cs.as_str()) {
                    (true, _) => format!("({cs})"),
                    (false, "1") => format!("{b}{p}"),
                    (false, "-1") => format!("-{b}{p}"),
                    _ => format!("({cs})*{b}{p}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for SymFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for SymFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymFun({})", self.render())
    }
}

impl PartialEq for SymFun {
    fn eq(&self, other: &Self) -> bool {
        if self.basis == other.basis {
            self.coeffs == other.coeffs
        } else {
            self.coeffs == other.to_basis(self.basis).coeffs
        }
    }
}

impl Ring for SymFun {
    fn zero() -> Self {
        SymFun::zero_in(Basis::Power)
    }

    fn one() -> Self {
        SymFun::constant(RationalFunction::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let rhs = rhs.to_basis(self.basis);
        let mut out = self.clone();
        for (p, c) in rhs.coeffs {
            out.add_term(p, c);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn neg(&self) -> Self {
        SymFun {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    fn from_scalar(c: &RationalFunction) -> Self {
        SymFun::constant(c.clone())
    }

    fn scale(&self, c: &RationalFunction) -> Self {
        self.scale_by(c)
    }

    /// Only nonzero constants are units.
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (p, c) = self.coeffs.iter().next()?;
        if !p.is_empty() {
            return None;
        }
        Some(SymFun::constant(c.inv().ok()?))
    }
}

#[derive(Serialize, Deserialize)]
struct SymFunJson {
    basis: Basis,
    degree: Option<usize>,
    coeffs: BTreeMap<String, RationalFunction>,
}

impl SymFun {
    /// Coefficients keyed by partition strings such as `"[2,1]"`.
    pub fn string_coeffs(&self) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .map(|(p, c)| (p.to_string(), c.to_string()))
            .collect()
    }

    pub fn from_string_coeffs(basis: Basis, coeffs: &BTreeMap<String, String>) -> Result<SymFun> {
        let mut out = SymFun::zero_in(basis);
        for (p, c) in coeffs {
            out.add_term(p.parse()?, c.parse()?);
        }
        Ok(out)
    }
}

impl Serialize for SymFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymFunJson {
            basis: self.basis,
            degree: self.degree(),
            coeffs: self.coeffs.iter().map(|(p, c)| (p.to_string(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymFun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SymFunJson::deserialize(d)?;
        let mut out = SymFun::zero_in(raw.basis);
        for (p, c) in raw.coeffs {
            out.add_term(p.parse().map_err(serde::de::Error::custom)?, c);
        }
        Ok(out)
    }
}

/// `⟨p_λ, p_λ⟩ = z_λ Π_i (1 - q^{λ_i}) / (1 - q^{m λ_i})`.
pub fn power_norm(lambda: &Partition, m: usize) -> RationalFunction {
    let one = RationalFunction::one();
    let mut acc = RationalFunction::from_bigint(lambda.z());
    for &part in lambda.parts() {
        let num = &one - &RationalFunction::q_pow(part as i64);
        let den = &one - &RationalFunction::q_pow((m * part) as i64);
        acc = &acc * &(&num / &den);
    }
    acc
}

/// The Macdonald scalar product at `t = q^m`.
pub fn scalar_product_qt(f: &SymFun, g: &SymFun, m: usize) -> Result<RationalFunction> {
    if m == 0 {
        return Err(Error::Input("m must be positive".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::Input("scalar product needs homogeneous arguments".into()));
    };
    if df != dg {
        return Err(Error::DegreeMismatch { left: df, right: dg });
    }
    let a = f.to_basis(Basis::Power);
    let b = g.to_basis(Basis::Power);
    let mut acc = RationalFunction::zero();
    for (p, c) in &a.coeffs {
        if let Some(d) = b.coeffs.get(p) {
            acc = &acc + &(&(c * d) * &power_norm(p, m));
        }
    }
    Ok(acc)
}

/// `1/z_λ` as a rational-function coefficient.
pub(crate) fn inv_z(lambda: &Partition) -> RationalFunction {
    RationalFunction::from_rational(BigRational::new(1.into(), lambda.z()))
}

/// `h_j = Σ_{λ ⊢ j} p_λ / z_λ`; zero for negative `j`.
pub fn complete_h(j: i64) -> SymFun {
    if j < 0 {
        return SymFun::zero();
    }
    SymFun::from_terms(
        Basis::Power,
        partitions(j as usize).into_iter().map(|p| {
            let c = inv_z(&p);
            (p, c)
        }),
    )
}

/// `e_j = Σ_{λ ⊢ j} ε_λ p_λ / z_λ`; zero for negative `j`.
pub fn elementary_e(j: i64) -> SymFun {
    if j < 0 {
        return SymFun::zero();
    }
    SymFun::from_terms(
        Basis::Power,
        partitions(j as usize).into_iter().map(|p| {
            let c = inv_z(&p);
            let odd = (p.weight() - p.len()) % 2 == 1;
            (p, if odd { -c } else { c })
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn small_transitions() {
        assert_eq!(
            SymFun::power_sum(p("1")).to_basis(Basis::Monomial),
            SymFun::monomial(p("1"))
        );
        let p11 = SymFun::power_sum(p("1,1")).to_basis(Basis::Monomial);
        assert_eq!(p11.coeff(&p("2")), rf("1"));
        assert_eq!(p11.coeff(&p("1,1")), rf("2"));
        let p2 = SymFun::power_sum(p("2")).to_basis(Basis::Monomial);
        assert_eq!(p2.render(), "m[2]");
    }

    #[test]
    fn product_of_power_sums() {
        let p1 = SymFun::power_sum(p("1"));
        assert_eq!(p1.multiply(&p1), SymFun::power_sum(p("1,1")));
        assert_eq!(p1.multiply(&SymFun::one()), p1);
        let e2 = elementary_e(2);
        assert_eq!(e2.render(), "(1/2)*p[1,1] + (-1/2)*p[2]");
        assert_eq!(e2.to_basis(Basis::Monomial), SymFun::monomial(p("1,1")));
        let h2 = complete_h(2);
        assert_eq!(h2.add(&e2), p1.multiply(&p1));
    }

    #[test]
    fn scalar_product_examples() {
        let p1 = SymFun::power_sum(p("1"));
        assert_eq!(scalar_product_qt(&p1, &p1, 3).unwrap(), rf("(-q + 1)/(-q^3 + 1)"));
        let p2 = SymFun::power_sum(p("2"));
        let p11 = SymFun::power_sum(p("1,1"));
        assert!(scalar_product_qt(&p2, &p11, 2).unwrap().is_zero());
        assert_eq!(scalar_product_qt(&p11, &p11, 1).unwrap(), rf("2"));
        assert!(matches!(
            scalar_product_qt(&p1, &p11, 1),
            Err(Error::DegreeMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = elementary_e(3).scale_by(&rf("q/(q + 1)"));
        let s = serde_json::to_string(&f).unwrap();
        let back: SymFun = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(s.contains("\"degree\":3"));
    }
}
