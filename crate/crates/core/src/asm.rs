//! Alternating sign matrices: validation, enumeration, inversion and
//! negative-entry statistics, and generalized permutations.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest side for which [`enumerate`] will run (|Alt_7| = 218348).
pub const MAX_ENUMERATION_SIDE: usize = 7;

/// An `n × n` alternating sign matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Asm {
    n: usize,
    entries: Vec<i8>,
}

/// The vector `(X(1), ..., X(n))` with `X(i) = Σ_j j·x_ij`; one-based, and
/// every component lies in `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenPerm(pub Vec<usize>);

/// Check the alternating-sign conditions on an arbitrary integer matrix.
///
/// Errors only when the input is not square.
pub fn validate(rows: &[Vec<i64>]) -> Result<bool> {
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
    if rows.iter().flatten().any(|&x| !(-1..=1).contains(&x)) {
        return Ok(false);
    }
    let line_ok = |it: &mut dyn Iterator<Item = i64>| {
        let mut partial = 0;
        for x in it {
            partial += x;
            if !(0..=1).contains(&partial) {
                return false;
            }
        }
        partial == 1
    };
    for (i, row) in rows.iter().enumerate() {
        if !line_ok(&mut row.iter().copied()) || !line_ok(&mut rows.iter().map(|r| r[i])) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Asm {
    /// Build from rows, rejecting anything that is not an ASM.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidAsm("empty matrix".into()));
        }
        if !validate(rows)? {
            return Err(Error::InvalidAsm(format!("{rows:?}")));
        }
        Ok(Asm {
            n: rows.len(),
            entries: rows.iter().flatten().map(|&x| x as i8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation(&(0..n).collect::<Vec<_>>())
    }

    /// Permutation matrix with a one at `(i, perm[i])`, zero-based.
    pub fn from_permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut entries = vec![0; n * n];
        for (i, &p) in perm.iter().enumerate() {
            entries[i * n + p] = 1;
        }
        Asm { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(move |(k, &x)| (k / self.n, k % self.n, x))
    }

    pub fn is_permutation(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0)
    }

    /// The zero-based permutation when this is a permutation matrix.
    pub fn to_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_permutation() {
            return None;
        }
        Some(
            self.entries
                .chunks(self.n)
                .map(|r| r.iter().position(|&x| x == 1).unwrap())
                .collect(),
        )
    }

    /// `i(X) = Σ_{r > i, s < j} x_ij x_rs`.
    pub fn inversion_number(&self) -> i64 {
        let nz: Vec<_> = self.nonzeros().collect();
        let mut total = 0i64;
        for &(i, j, a) in &nz {
            for &(r, s, b) in &nz {
                if r > i && s < j {
                    total += (a as i64) * (b as i64);
                }
            }
        }
        total
    }

    /// Number of `-1` entries.
    pub fn negative_count(&self) -> usize {
        self.entries.iter().filter(|&&x| x < 0).count()
    }

    pub fn generalized_permutation(&self) -> GenPerm {
        GenPerm(
            self.entries
                .chunks(self.n)
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| (j as i64 + 1) * x as i64)
                        .sum::<i64>() as usize
                })
                .collect(),
        )
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Asm { n, entries }
    }
}

impl fmt::Debug for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

#[derive(Serialize, Deserialize)]
struct AsmJson {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for Asm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AsmJson {
            n: self.n,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Asm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AsmJson::deserialize(d)?;
        if j.rows.len() != j.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but {} rows",
                j.n,
                j.rows.len()
            )));
        }
        Asm::from_rows(&j.rows).map_err(serde::de::Error::custom)
    }
}

/// All length-`n` rows whose prefix sums stay in {0, 1} and end at 1, in
/// lexicographic order with `-1 < 0 < 1`.
fn alternating_rows(n: usize) -> Vec<Vec<i8>> {
    fn go(n: usize, partial: i8, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        if cur.len() == n {
            if partial == 1 {
                out.push(cur.clone());
            }
            return;
        }
        for x in [-1i8, 0, 1] {
            let p = partial + x;
            if (0..=1).contains(&p) {
                cur.push(x);
                go(n, p, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Depth-first row-by-row generator over `Alt_n`.
///
/// Column partial sums are kept in {0, 1} after every row, and the last row
/// must bring every column to exactly 1. Rows are tried in lexicographic
/// order, so matrices come out in lexicographic order of their flattened
/// entries.
pub struct AsmIter {
    n: usize,
    rows: Vec<Vec<i8>>,
    chosen: Vec<usize>,
    cursor: Vec<usize>,
    cols: Vec<Vec<i8>>,
    done: bool,
}

impl Iterator for AsmIter {
    type Item = Asm;

    fn next(&mut self) -> Option<Asm> {
        while !self.done {
            let level = self.chosen.len();
            let last = level + 1 == self.n;
            let found = (self.cursor[level]..self.rows.len()).find(|&k| {
                self.cols[level].iter().zip(&self.rows[k]).all(|(c, r)| {
                    let s = c + r;
                    if last {
                        s == 1
                    } else {
                        (0..=1).contains(&s)
                    }
                })
            });
            match found {
                Some(k) => {
                    self.cursor[level] = k + 1;
                    if last {
                        let mut entries = Vec::with_capacity(self.n * self.n);
                        for &c in &self.chosen {
                            entries.extend_from_slice(&self.rows[c]);
                        }
                        entries.extend_from_slice(&self.rows[k]);
                        return Some(Asm { n: self.n, entries });
                    }
                    let next: Vec<i8> = self.cols[level].iter().zip(&self.rows[k]).map(|(c, r)| c + r).collect();
                    self.chosen.push(k);
                    self.cols[level + 1] = next;
                    self.cursor[level + 1] = 0;
                }
                None => {
                    if level == 0 {
                        self.done = true;
                    } else {
                        self.chosen.pop();
                    }
                }
            }
        }
        None
    }
}

/// Stream every element of `Alt_n` exactly once in a deterministic order.
pub fn enumerate(n: usize) -> Result<AsmIter> {
    if n == 0 {
        return Err(Error::InvalidAsm("side must be at least 1".into()));
    }
    if n > MAX_ENUMERATION_SIDE {
        return Err(Error::EnumerationCeiling {
            n,
            ceiling: MAX_ENUMERATION_SIDE,
        });
    }
    Ok(AsmIter {
        n,
        rows: alternating_rows(n),
        chosen: Vec::with_capacity(n),
        cursor: vec![0; n],
        cols: vec![vec![0; n]; n],
        done: false,
    })
}

/// `|Alt_n| = Π_{i=0}^{n-1} (3i+1)! / (n+i)!`.
pub fn count_formula(n: usize) -> BigInt {
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |acc, x| acc * BigInt::from(x));
    let mut acc = BigRational::one();
    for i in 0..n {
        acc *= BigRational::new(fact(3 * i + 1), fact(n + i));
    }
    debug_assert!(acc.is_integer());
    acc.to_integer()
}

/// An ASM with its statistics precomputed, as consumed by the weighted sums.
#[derive(Clone, Debug)]
pub struct AsmRecord {
    pub asm: Asm,
    pub inversions: i64,
    pub negatives: usize,
    pub genperm: Vec<usize>,
}

impl From<Asm> for AsmRecord {
    fn from(asm: Asm) -> Self {
        AsmRecord {
            inversions: asm.inversion_number(),
            negatives: asm.negative_count(),
            genperm: asm.generalized_permutation().0,
            asm,
        }
    }
}

/// `Alt_n` with statistics, in enumeration order.
pub fn table(n: usize) -> Result<Vec<AsmRecord>> {
    Ok(enumerate(n)?.map(AsmRecord::from).collect())
}
