//! Determinants: the classical one, the λ-determinant summed over
//! alternating sign matrices, the λ-Vandermonde product, and the Pfaffian.

use std::collections::HashMap;

use crate::arith::{RationalFunction, Ring};
use crate::asm::{self, Asm};
use crate::error::{Error, Result};

/// Largest side accepted by [`det_lambda`] (|Alt_6| = 7436 terms).
pub const MAX_LAMBDA_DET_SIDE: usize = 6;

/// Square matrix over a commutative ring, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<R> {
    n: usize,
    entries: Vec<R>,
}

impl<R: Ring> SquareMatrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
        }
        Ok(SquareMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            (0..n).fold(R::zero(), |acc, k| acc.add(&self.get(i, k).mul(rhs.get(k, j))))
        })
    }
}

/// The matrix `(x_i^{j-1})`.
pub fn vandermonde_matrix<R: Ring>(xs: &[R]) -> SquareMatrix<R> {
    SquareMatrix::from_fn(xs.len(), |i, j| xs[i].pow(j as u32))
}

/// Exact determinant: cofactor expansion up to side 4, fraction-free
/// (Bareiss) elimination above, and a division-free minor expansion when the
/// ring cannot divide by a pivot.
pub fn det_classical<R: Ring>(a: &SquareMatrix<R>) -> R {
    if a.n <= 4 {
        let cols: Vec<usize> = (0..a.n).collect();
        return laplace(a, 0, &cols);
    }
    bareiss(a).unwrap_or_else(|| minor_expansion(a))
}

fn laplace<R: Ring>(a: &SquareMatrix<R>, row: usize, cols: &[usize]) -> R {
    if cols.is_empty() {
        return R::one();
    }
    let mut acc = R::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = a.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&laplace(a, row + 1, &rest));
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn bareiss<R: Ring>(a: &SquareMatrix<R>) -> Option<R> {
    let n = a.n;
    let mut m = a.rows();
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Some(R::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.try_div(&prev)?;
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign_flip { det.neg() } else { det })
}

/// Division-free expansion over column subsets, `O(n 2^n)` ring operations.
fn minor_expansion<R: Ring>(a: &SquareMatrix<R>) -> R {
    let n = a.n;
    // minors[mask] = det of rows 0..popcount(mask) against columns in mask
    let mut minors: HashMap<u32, R> = HashMap::new();
    minors.insert(0, R::one());
    for row in 0..n {
        let mut next = HashMap::new();
        for (mask, val) in &minors {
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let entry = a.get(row, c);
                if entry.is_zero() {
                    continue;
                }
                // sign from columns in mask lying to the right of c
                let after = (mask >> (c + 1)).count_ones();
                let mut term = val.mul(entry);
                if after % 2 == 1 {
                    term = term.neg();
                }
                let key = mask | (1 << c);
                let slot: &mut R = next.entry(key).or_insert_with(R::zero);
                *slot = slot.add(&term);
            }
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(R::zero)
}

/// Weight of one ASM in the λ-determinant: `(-λ)^{i(X)} (1 - λ^{-1})^{n(X)}`.
pub fn asm_weight(lambda: &RationalFunction, inversions: i64, negatives: usize) -> Result<RationalFunction> {
    let one = RationalFunction::one();
    let base = -lambda;
    let sign_part = base.pow(inversions)?;
    if negatives == 0 {
        return Ok(sign_part);
    }
    let defect = &one - &lambda.inv()?;
    Ok(&sign_part * &defect.pow(negatives as i64)?)
}

/// `det_λ(A) = Σ_{X ∈ Alt_n} (-λ)^{i(X)} (1 - λ^{-1})^{n(X)} A^X`.
///
/// Terms whose weight is exactly zero are dropped before `A^X` is formed, so
/// `λ = 1` works on matrices with zero entries. A zero (or otherwise
/// non-invertible) entry raised to `-1` in a surviving term is an error.
pub fn det_lambda<R: Ring>(a: &SquareMatrix<R>, lambda: &RationalFunction) -> Result<R> {
    let n = a.n;
    if n == 0 {
        return Ok(R::one());
    }
    if n > MAX_LAMBDA_DET_SIDE {
        return Err(Error::SideCeiling {
            what: "the λ-determinant",
            n,
            ceiling: MAX_LAMBDA_DET_SIDE,
        });
    }
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut weights: HashMap<(i64, usize), RationalFunction> = HashMap::new();
    let mut inverses: HashMap<(usize, usize), R> = HashMap::new();
    let mut acc = R::zero();
    for x in asm::enumerate(n)? {
        let key = (x.inversion_number(), x.negative_count());
        let w = match weights.get(&key) {
            Some(w) => w.clone(),
            None => {
                let w = asm_weight(lambda, key.0, key.1)?;
                weights.insert(key, w.clone());
                w
            }
        };
        if w.is_zero() {
            continue;
        }
        let term = monomial_power(a, &x, &mut inverses)?;
        acc = acc.add(&term.scale(&w));
    }
    Ok(acc)
}

/// `A^X = Π a_ij^{x_ij}`.
fn monomial_power<R: Ring>(a: &SquareMatrix<R>, x: &Asm, inverses: &mut HashMap<(usize, usize), R>) -> Result<R> {
    let mut acc = R::one();
    for (i, j, e) in x.nonzeros() {
        let factor = if e > 0 {
            a.get(i, j).clone()
        } else if let Some(inv) = inverses.get(&(i, j)) {
            inv.clone()
        } else {
            let inv = a.get(i, j).try_inv().ok_or_else(|| Error::SingularEntry {
                asm: x.to_string(),
                row: i + 1,
                col: j + 1,
            })?;
            inverses.insert((i, j), inv.clone());
            inv
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// `Π_{1 ≤ i < j ≤ n} (x_j - λ x_i)`.
pub fn lambda_vandermonde<R: Ring>(xs: &[R], lambda: &RationalFunction) -> R {
    let mut acc = R::one();
    for j in 0..xs.len() {
        for i in 0..j {
            acc = acc.mul(&xs[j].sub(&xs[i].scale(lambda)));
        }
    }
    acc
}

/// Pfaffian of an antisymmetric matrix of even side, as the signed sum over
/// perfect matchings (expansion along the first remaining index).
pub fn pfaffian<R: Ring>(m: &SquareMatrix<R>) -> Result<R> {
    let n = m.n;
    if n % 2 == 1 {
        return Err(Error::OddSide(n));
    }
    for i in 0..n {
        for j in i..n {
            if *m.get(i, j) != m.get(j, i).neg() {
                return Err(Error::NotAntisymmetric { row: i + 1, col: j + 1 });
            }
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(m, &idx))
}

fn pfaffian_rec<R: Ring>(m: &SquareMatrix<R>, idx: &[usize]) -> R {
    if idx.is_empty() {
        return R::one();
    }
    let first = idx[0];
    let mut acc = R::zero();
    for k in 1..idx.len() {
        let entry = m.get(first, idx[k]);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
        let term = entry.mul(&pfaffian_rec(m, &rest));
        acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
