//! Coefficient extraction from the q-Dyson product: expand
//! `F = Π_{i<j} (z_i/z_j; q)_m (q z_j/z_i; q)_m`, multiply by
//! `G = Π_i Σ_j Q_j(q, q^m) z_i^j`, and read off the coefficient of
//! `(z_1 ... z_s)^k`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{qpochhammer, RationalFunction, Ring};
use crate::config::Limits;
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::symfun::{one_row_g, SymFun};

/// Laurent polynomial whose coefficients are symmetric functions.
pub type SymCoeffPoly = LaurentPoly<SymFun>;

/// Every exponent of `z_i` in `F` lies in `[-m(s-1), m(s-1)]`, so the
/// coefficient of `z_i^k` in `FG` only sees `G`-degrees up to
/// `k + m(s-1)`. Truncating `G` there loses nothing.
pub fn truncation_bound(k: usize, s: usize, m: usize) -> usize {
    k + m * s.saturating_sub(1)
}

/// `(q; q)_{sm} / (q; q)_m^s`.
pub fn dyson_prefactor(s: usize, m: usize) -> RationalFunction {
    let den = qpochhammer(1, m);
    let mut out = qpochhammer(1, s * m);
    for _ in 0..s {
        out = &out / &den;
    }
    out
}

fn binomial(s: usize, i: usize, j: usize, coeff: RationalFunction) -> LaurentPoly<RationalFunction> {
    let mut e = vec![0; s];
    e[i] = 1;
    e[j] = -1;
    let mut out = LaurentPoly::constant_in(s, RationalFunction::one());
    out.add_term(e, -coeff);
    out
}

/// Fully expanded `F` in `z_1..z_s`.
pub fn expand_f(s: usize, m: usize, limits: &Limits) -> Result<LaurentPoly<RationalFunction>> {
    let pairs = s * s.saturating_sub(1) / 2;
    let support = (2 * m * s.saturating_sub(1) + 1) as u128;
    let estimate = (2 * m * pairs) as u128 * support.saturating_pow(s.saturating_sub(1) as u32);
    limits.check("q-Dyson expansion", estimate)?;
    let mut f = LaurentPoly::constant_in(s, RationalFunction::one());
    for i in 0..s {
        for j in i + 1..s {
            for r in 1..=m as i64 {
                f = f.mul(&binomial(s, i, j, RationalFunction::q_pow(r - 1)));
                f = f.mul(&binomial(s, j, i, RationalFunction::q_pow(r)));
            }
        }
    }
    Ok(f)
}

/// `G` truncated to degree `dmax` in every variable.
pub fn truncated_g(s: usize, m: usize, dmax: usize) -> SymCoeffPoly {
    let mut g = SymCoeffPoly::constant_in(s, SymFun::one());
    for i in 0..s {
        let mut factor = SymCoeffPoly::zero_in(s);
        for j in 0..=dmax {
            let mut e = vec![0; s];
            e[i] = j as i32;
            factor.add_term(e, one_row_g(j as i64, m));
        }
        g = g.mul(&factor);
    }
    g
}

/// Coefficient of `z^target` in `f * g` without forming the product.
pub fn extract_coefficient(f: &LaurentPoly<RationalFunction>, g: &SymCoeffPoly, target: &[i32]) -> SymFun {
    let mut acc = SymFun::zero();
    for (e, c) in f.terms() {
        let need: Vec<i32> = target.iter().zip(&e).map(|(t, x)| t - x).collect();
        let gc = g.coeff(&need);
        if !gc.is_zero() {
            acc = acc.add(&gc.scale(c));
        }
    }
    acc
}

/// Coefficient of `(z_1 ... z_s)^k` in `F G`.
///
/// Each term `c z^e` of `F` pairs with the `G` coefficient
/// `Π_i Q_{k - e_i}`, which depends only on the multiset of `k - e_i`. Terms
/// are grouped by that multiset so each product of one-row functions is
/// formed once.
pub fn dyson_coefficient(k: usize, s: usize, m: usize, limits: &Limits) -> Result<SymFun> {
    let f = expand_f(s, m, limits)?;
    let mut groups: BTreeMap<Vec<i64>, RationalFunction> = BTreeMap::new();
    for (e, c) in f.terms() {
        let mut need: Vec<i64> = e.iter().map(|&x| k as i64 - x as i64).collect();
        if need.iter().any(|&j| j < 0) {
            continue;
        }
        need.sort_unstable();
        let slot = groups.entry(need).or_insert_with(RationalFunction::zero);
        *slot = &*slot + c;
    }
    let parts: Vec<SymFun> = groups
        .into_par_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(need, c)| {
            let prod = need.iter().fold(SymFun::one(), |acc, &j| acc.mul(&one_row_g(j, m)));
            prod.scale(&c)
        })
        .collect();
    Ok(parts.iter().fold(SymFun::zero(), |acc, x| acc.add(x)))
}
