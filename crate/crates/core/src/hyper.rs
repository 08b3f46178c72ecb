//! Hypermatrices, Cayley's second hyperdeterminant, the generalized sign
//! factor φ_λ, and the λ-hyperdeterminant summed over tuples of alternating
//! sign matrices.
//!
//! Both hyperdeterminants are evaluated by the same tuple engine: every tuple
//! contributes a weight that is a signed monomial in `λ` and the factors
//! `(1 - λ^j)`, plus a multiset of hypermatrix indices (one index per row).
//! Tuples are bucketed by that multiset and by their weight monomial, so the
//! coefficient arithmetic and the entry products run once per bucket rather
//! than once per tuple.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{lambda_factorial_at, RationalFunction, Ring};
use crate::asm::{self, Asm, AsmRecord};
use crate::config::Limits;
use crate::detlib::SquareMatrix;
use crate::error::{Error, Result};

/// Above this many entries a hypermatrix built by [`HyperMatrix::from_fn`]
/// keeps its index function instead of materializing.
pub const DENSE_ENTRY_LIMIT: usize = 10_000;

/// Which exponent signs the `(1 - λ^·)^{n(X)}` factors of φ_λ carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhiConvention {
    /// `(1 - λ^{r-1})^{n(X_r)} (1 - λ^r)^{n(X_{m+r})}`.
    #[serde(rename = "paper")]
    PaperLiteral,
    /// `(1 - λ^{1-r})^{n(X_r)} (1 - λ^{-r})^{n(X_{m+r})}`, the factors that
    /// come out of expanding λ-determinants at `λ = q^{r-1}` and `λ = q^r`.
    #[serde(rename = "proof")]
    ProofConsistent,
}

impl PhiConvention {
    pub const ALL: [PhiConvention; 2] = [PhiConvention::PaperLiteral, PhiConvention::ProofConsistent];

    pub fn as_str(self) -> &'static str {
        match self {
            PhiConvention::PaperLiteral => "paper",
            PhiConvention::ProofConsistent => "proof",
        }
    }

    /// Power `j` in the defect factor `(1 - λ^j)` used by slot `slot`
    /// (zero-based, `0..2m`).
    fn defect_power(self, slot: usize, m: usize) -> i64 {
        let (r, second_half) = if slot < m {
            (slot as i64 + 1, false)
        } else {
            ((slot - m) as i64 + 1, true)
        };
        match (self, second_half) {
            (PhiConvention::PaperLiteral, false) => r - 1,
            (PhiConvention::PaperLiteral, true) => r,
            (PhiConvention::ProofConsistent, false) => 1 - r,
            (PhiConvention::ProofConsistent, true) => -r,
        }
    }
}

impl fmt::Display for PhiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhiConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(PhiConvention::PaperLiteral),
            "proof" => Ok(PhiConvention::ProofConsistent),
            _ => Err(Error::Input(format!("unknown convention `{s}` (expected paper|proof)"))),
        }
    }
}

/// Power of `λ` carried by slot `slot`: `λ^{r-1}` in the first half and
/// `λ^r` in the second.
fn slot_power(slot: usize, m: usize) -> i64 {
    if slot < m {
        slot as i64
    } else {
        (slot - m) as i64 + 1
    }
}

type EntryFn<R> = Arc<dyn Fn(&[usize]) -> std::result::Result<R, String> + Send + Sync>;

#[derive(Clone)]
enum Backing<R> {
    Dense(Vec<R>),
    Function(EntryFn<R>),
}

/// A `2m`-dimensional array of side `n`, indexed one-based.
#[derive(Clone)]
pub struct HyperMatrix<R> {
    n: usize,
    dim: usize,
    backing: Backing<R>,
}

impl<R: Ring> fmt::Debug for HyperMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.backing {
            Backing::Dense(_) => "dense",
            Backing::Function(_) => "function",
        };
        write!(f, "HyperMatrix {{ n: {}, dim: {}, backing: {kind} }}", self.n, self.dim)
    }
}

fn check_shape(n: usize, dim: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidHyperMatrix("side must be at least 1".into()));
    }
    if dim < 2 || dim % 2 == 1 {
        return Err(Error::InvalidHyperMatrix(format!(
            "dimension {dim} is not even and at least 2"
        )));
    }
    Ok(())
}

impl<R: Ring> HyperMatrix<R> {
    /// Dense storage in row-major order of the index tuple (last index
    /// fastest).
    pub fn dense(n: usize, dim: usize, entries: Vec<R>) -> Result<Self> {
        check_shape(n, dim)?;
        let expected = n
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::InvalidHyperMatrix("too many entries".into()))?;
        if entries.len() != expected {
            return Err(Error::InvalidHyperMatrix(format!(
                "expected {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(HyperMatrix {
            n,
            dim,
            backing: Backing::Dense(entries),
        })
    }

    /// Entries computed on demand by a pure index function.
    pub fn function(
        n: usize,
        dim: usize,
        f: impl Fn(&[usize]) -> std::result::Result<R, String> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_shape(n, dim)?;
        Ok(HyperMatrix {
            n,
            dim,
            backing: Backing::Function(Arc::new(f)),
        })
    }

    /// Dense when small enough, function-backed otherwise.
    pub fn from_fn(n: usize, dim: usize, f: impl Fn(&[usize]) -> R + Send + Sync + 'static) -> Result<Self> {
        check_shape(n, dim)?;
        match n.checked_pow(dim as u32) {
            Some(total) if total <= DENSE_ENTRY_LIMIT => {
                let entries = all_indices(n, dim).map(|ix| f(&ix)).collect();
                Self::dense(n, dim, entries)
            }
            _ => Self::function(n, dim, move |ix| Ok(f(ix))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backing, Backing::Dense(_))
    }

    /// Entry at a one-based index tuple.
    pub fn entry(&self, index: &[usize]) -> Result<R> {
        if index.len() != self.dim || index.iter().any(|&i| i == 0 || i > self.n) {
            return Err(Error::InvalidHyperMatrix(format!(
                "index {index:?} out of range for side {}",
                self.n
            )));
        }
        match &self.backing {
            Backing::Dense(v) => {
                let flat = index.iter().fold(0usize, |acc, &i| acc * self.n + (i - 1));
                Ok(v[flat].clone())
            }
            Backing::Function(f) => f(index).map_err(|message| Error::EntryFunction {
                index: index.to_vec(),
                message,
            }),
        }
    }

    /// Materialize into dense storage.
    pub fn to_dense(&self) -> Result<Self> {
        let entries = all_indices(self.n, self.dim)
            .map(|ix| self.entry(&ix))
            .collect::<Result<Vec<_>>>()?;
        Self::dense(self.n, self.dim, entries)
    }

    /// `(B ∘_k A)(i_1, ..., i_{2m}) = Σ_j B[i_k, j] A(i_1, ..., j, ..., i_{2m})`,
    /// contracting `B` against the zero-based slot `slot`.
    pub fn contract(&self, b: &SquareMatrix<R>, slot: usize) -> Result<Self> {
        if b.n() != self.n || slot >= self.dim {
            return Err(Error::InvalidHyperMatrix("contraction shape mismatch".into()));
        }
        let mut entries = Vec::new();
        for ix in all_indices(self.n, self.dim) {
            let mut acc = R::zero();
            let mut jx = ix.clone();
            for j in 1..=self.n {
                jx[slot] = j;
                acc = acc.add(&b.get(ix[slot] - 1, j - 1).mul(&self.entry(&jx)?));
            }
            entries.push(acc);
        }
        Self::dense(self.n, self.dim, entries)
    }
}

/// Every one-based index tuple in `[1, n]^dim`, last index fastest.
pub fn all_indices(n: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(dim as u32);
    (0..total).map(move |mut code| {
        let mut ix = vec![0; dim];
        for slot in (0..dim).rev() {
            ix[slot] = code % n + 1;
            code /= n;
        }
        ix
    })
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    index: Vec<usize>,
    value: RationalFunction,
}

#[derive(Serialize, Deserialize)]
struct HyperJson {
    n: usize,
    dim: usize,
    entries: Vec<EntryJson>,
}

impl HyperMatrix<RationalFunction> {
    /// `{"n":2,"dim":4,"entries":[{"index":[1,1,1,1],"value":"3/2"}, ...]}`;
    /// absent indices are zero.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: HyperJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        check_shape(j.n, j.dim)?;
        let total = j.n.pow(j.dim as u32);
        if total > 10 * DENSE_ENTRY_LIMIT {
            return Err(Error::InvalidHyperMatrix(format!(
                "{total} entries is too large for JSON input"
            )));
        }
        let mut entries = vec![RationalFunction::zero(); total];
        for e in j.entries {
            if e.index.len() != j.dim || e.index.iter().any(|&i| i == 0 || i > j.n) {
                return Err(Error::InvalidHyperMatrix(format!("index {:?} out of range", e.index)));
            }
            let flat = e.index.iter().fold(0usize, |acc, &i| acc * j.n + (i - 1));
            entries[flat] = e.value;
        }
        Self::dense(j.n, j.dim, entries)
    }

    /// Nonzero entries in index order.
    pub fn to_json(&self) -> Result<String> {
        let mut entries = Vec::new();
        for ix in all_indices(self.n, self.dim) {
            let value = self.entry(&ix)?;
            if !value.is_zero() {
                entries.push(EntryJson { index: ix, value });
            }
        }
        let j = HyperJson {
            n: self.n,
            dim: self.dim,
            entries,
        };
        Ok(serde_json::to_string(&j).expect("serializable"))
    }
}

/// φ_λ(X_1, ..., X_{2m}) evaluated directly from its product form.
pub fn phi(xs: &[Asm], lambda: &RationalFunction, convention: PhiConvention) -> Result<RationalFunction> {
    if xs.is_empty() || xs.len() % 2 == 1 {
        return Err(Error::InvalidHyperMatrix(format!(
            "φ needs an even, nonzero number of ASMs, got {}",
            xs.len()
        )));
    }
    let n = xs[0].n();
    if xs.iter().any(|x| x.n() != n) {
        return Err(Error::InvalidHyperMatrix("ASMs of unequal side".into()));
    }
    let m = xs.len() / 2;
    let one = RationalFunction::one();
    let mut acc = RationalFunction::one();
    for (slot, x) in xs.iter().enumerate() {
        let base = -&lambda.pow(slot_power(slot, m))?;
        let defect = &one - &lambda.pow(convention.defect_power(slot, m))?;
        acc = &acc * &base.pow(x.inversion_number())?;
        acc = &acc * &defect.pow(x.negative_count() as i64)?;
    }
    Ok(acc)
}

/// Weight monomial `(-1)^parity λ^lam_exp Π_j (1 - λ^j)^{counts[j + offset]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Sig {
    parity: u8,
    lam_exp: i64,
    counts: Vec<u16>,
}

#[derive(Clone)]
struct Choice {
    /// packed per-row index contribution, already shifted into its slot
    codes: Vec<u64>,
    parity: u8,
    lam_exp: i64,
    factor: Option<(usize, u16)>,
}

type Buckets = HashMap<Vec<u64>, HashMap<Sig, i64>>;

struct Engine {
    n: usize,
    bits: u32,
    nfactors: usize,
    slots: Vec<Vec<Choice>>,
}

impl Engine {
    fn new(n: usize, dim: usize, nfactors: usize) -> Result<Self> {
        let bits = usize::BITS - (n.max(2) - 1).leading_zeros();
        if bits as usize * dim > 64 {
            return Err(Error::InvalidHyperMatrix(format!(
                "side {n} with dimension {dim} is too large to index"
            )));
        }
        Ok(Engine {
            n,
            bits,
            nfactors,
            slots: Vec::with_capacity(dim),
        })
    }

    fn push_slot(&mut self, choices: impl IntoIterator<Item = (Vec<usize>, u8, i64, Option<(usize, u16)>)>) {
        let shift = self.bits * self.slots.len() as u32;
        let slot = choices
            .into_iter()
            .map(|(genperm, parity, lam_exp, factor)| Choice {
                codes: genperm.iter().map(|&g| ((g - 1) as u64) << shift).collect(),
                parity,
                lam_exp,
                factor,
            })
            .collect();
        self.slots.push(slot);
    }

    fn decode(&self, code: u64) -> Vec<usize> {
        let mask = (1u64 << self.bits) - 1;
        (0..self.slots.len())
            .map(|s| ((code >> (self.bits * s as u32)) & mask) as usize + 1)
            .collect()
    }

    fn accumulate(&self) -> Buckets {
        let n = self.n;
        let empty = Sig {
            parity: 0,
            lam_exp: 0,
            counts: vec![0; self.nfactors],
        };
        if self.slots.iter().any(|s| s.is_empty()) {
            return Buckets::new();
        }
        let first = &self.slots[0];
        first
            .par_iter()
            .fold(Buckets::new, |mut acc, c| {
                let mut codes = vec![0u64; n];
                let mut sig = empty.clone();
                apply(&mut codes, &mut sig, c);
                self.descend(1, &mut codes, &mut sig, &mut acc);
                acc
            })
            .reduce(Buckets::new, merge)
    }

    fn descend(&self, depth: usize, codes: &mut Vec<u64>, sig: &mut Sig, acc: &mut Buckets) {
        if depth == self.slots.len() {
            let mut key = codes.clone();
            key.sort_unstable();
            *acc.entry(key).or_default().entry(sig.clone()).or_insert(0) += 1;
            return;
        }
        for c in &self.slots[depth] {
            apply(codes, sig, c);
            self.descend(depth + 1, codes, sig, acc);
            unapply(codes, sig, c);
        }
    }

    /// Evaluate the bucketed sum for given entries and `λ`.
    fn evaluate<R: Ring>(
        &self,
        buckets: Buckets,
        a: &HyperMatrix<R>,
        lambda: &RationalFunction,
        offset: i64,
    ) -> Result<R> {
        let mut sig_cache: HashMap<Sig, RationalFunction> = HashMap::new();
        let one = RationalFunction::one();
        let mut eval_sig = |sig: &Sig| -> Result<RationalFunction> {
            if let Some(v) = sig_cache.get(sig) {
                return Ok(v.clone());
            }
            let mut v = lambda.pow(sig.lam_exp)?;
            if sig.parity == 1 {
                v = -v;
            }
            for (k, &c) in sig.counts.iter().enumerate() {
                if c > 0 {
                    let defect = &one - &lambda.pow(k as i64 - offset)?;
                    v = &v * &defect.pow(c as i64)?;
                }
            }
            sig_cache.insert(sig.clone(), v.clone());
            Ok(v)
        };

        // Distinct entry values get small ids so buckets sharing the same
        // multiset of values are multiplied out once.
        let mut values: Vec<R> = Vec::new();
        let mut code_ids: HashMap<u64, usize> = HashMap::new();
        let mut by_values: HashMap<Vec<usize>, RationalFunction> = HashMap::new();
        let mut keys: Vec<_> = buckets.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        for (key, sigs) in keys {
            let mut sigs: Vec<_> = sigs.into_iter().collect();
            sigs.sort_by(|a, b| (a.0.parity, a.0.lam_exp, &a.0.counts).cmp(&(b.0.parity, b.0.lam_exp, &b.0.counts)));
            let mut weight = RationalFunction::zero();
            for (sig, count) in sigs {
                if count != 0 {
                    weight = &weight + &eval_sig(&sig)?.scale(&num_rational::BigRational::from_integer(count.into()));
                }
            }
            if weight.is_zero() {
                continue;
            }
            let mut ids = Vec::with_capacity(key.len());
            for &code in &key {
                let id = match code_ids.get(&code) {
                    Some(&id) => id,
                    None => {
                        let v = a.entry(&self.decode(code))?;
                        let id = match values.iter().position(|x| *x == v) {
                            Some(id) => id,
                            None => {
                                values.push(v);
                                values.len() - 1
                            }
                        };
                        code_ids.insert(code, id);
                        id
                    }
                };
                ids.push(id);
            }
            ids.sort_unstable();
            let slot = by_values.entry(ids).or_insert_with(RationalFunction::zero);
            *slot = &*slot + &weight;
        }
        let mut groups: Vec<_> = by_values.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        let mut total = R::zero();
        for (ids, weight) in groups {
            if ids.iter().any(|&i| values[i].is_zero()) {
                continue;
            }
            let prod = ids.iter().fold(R::one(), |acc, &i| acc.mul(&values[i]));
            total = total.add(&prod.scale(&weight));
        }
        Ok(total)
    }
}

fn apply(codes: &mut [u64], sig: &mut Sig, c: &Choice) {
    for (x, y) in codes.iter_mut().zip(&c.codes) {
        *x |= y;
    }
    sig.parity ^= c.parity;
    sig.lam_exp += c.lam_exp;
    if let Some((k, e)) = c.factor {
        sig.counts[k] += e;
    }
}

fn unapply(codes: &mut [u64], sig: &mut Sig, c: &Choice) {
    for (x, y) in codes.iter_mut().zip(&c.codes) {
        *x &= !y;
    }
    sig.parity ^= c.parity;
    sig.lam_exp -= c.lam_exp;
    if let Some((k, e)) = c.factor {
        sig.counts[k] -= e;
    }
}

fn merge(mut a: Buckets, b: Buckets) -> Buckets {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, sigs) in b {
        let slot = a.entry(k).or_default();
        for (s, c) in sigs {
            *slot.entry(s).or_insert(0) += c;
        }
    }
    a
}

/// All permutations of `0..n` (lexicographic) with their inversion counts.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, usize)> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, usize)>) {
        if cur.len() == n {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| cur[i] > cur[j])
                .count();
            out.push((cur.clone(), inv));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Cayley's second hyperdeterminant
/// `(1/n!) Σ_{σ_1..σ_{2m}} Π sgn(σ_r) Π_i A(σ_1(i), ..., σ_{2m}(i))`.
///
/// The summand is invariant under relabelling `i` by a common permutation,
/// so `σ_1` is fixed to the identity and the `1/n!` dropped.
pub fn cayley_hyperdet<R: Ring>(a: &HyperMatrix<R>, limits: &Limits) -> Result<R> {
    cayley_impl(a, limits, false)
}

/// The literal `(1/n!)`-weighted sum over all `2m` permutations, kept for
/// validating the reduced form.
pub fn cayley_hyperdet_full<R: Ring>(a: &HyperMatrix<R>, limits: &Limits) -> Result<R> {
    cayley_impl(a, limits, true)
}

fn cayley_impl<R: Ring>(a: &HyperMatrix<R>, limits: &Limits, full: bool) -> Result<R> {
    let n = a.n;
    let free_slots = if full { a.dim } else { a.dim - 1 };
    limits.check(
        "Cayley hyperdeterminant",
        factorial(n).saturating_pow(free_slots as u32),
    )?;
    let perms = permutations(n);
    let mut engine = Engine::new(n, a.dim, 0)?;
    for slot in 0..a.dim {
        if slot == 0 && !full {
            engine.push_slot(std::iter::once(((1..=n).collect(), 0u8, 0i64, None)));
        } else {
            engine.push_slot(
                perms
                    .iter()
                    .map(|(p, inv)| (p.iter().map(|x| x + 1).collect(), (inv % 2) as u8, 0, None)),
            );
        }
    }
    let total = engine.evaluate(engine.accumulate(), a, &RationalFunction::one(), 0)?;
    if full {
        let inv_fact =
            RationalFunction::from_int(1).checked_div(&RationalFunction::from_bigint(factorial(n).into()))?;
        return Ok(total.scale(&inv_fact));
    }
    Ok(total)
}

/// The λ-hyperdeterminant
/// `(1/[n]_λ!) Σ_{X_1..X_{2m} ∈ Alt_n} φ_λ(X) Π_i M(X_1(i), ..., X_{2m}(i))`.
///
/// `X_1` runs over permutation matrices only: any `X_1` with a `-1` entry
/// carries the factor `(1 - λ^0) = 0`.
pub fn lambda_hyperdet<R: Ring>(
    a: &HyperMatrix<R>,
    lambda: &RationalFunction,
    convention: PhiConvention,
    limits: &Limits,
) -> Result<R> {
    lambda_hyperdet_with(a, lambda, convention, limits, false)
}

/// As [`lambda_hyperdet`]; `full_first_slot` lets `X_1` range over all of
/// `Alt_n`, which must not change the result.
pub fn lambda_hyperdet_with<R: Ring>(
    a: &HyperMatrix<R>,
    lambda: &RationalFunction,
    convention: PhiConvention,
    limits: &Limits,
    full_first_slot: bool,
) -> Result<R> {
    let sum = lambda_sum(a, lambda, convention, limits, full_first_slot)?;
    let fact = lambda_factorial_at(a.n, lambda);
    let inv = fact.inv()?;
    Ok(sum.scale(&inv))
}

/// The bare φ-weighted tuple sum, without the `1/[n]_λ!` prefactor.
pub fn lambda_tuple_sum<R: Ring>(
    a: &HyperMatrix<R>,
    lambda: &RationalFunction,
    convention: PhiConvention,
    limits: &Limits,
) -> Result<R> {
    lambda_sum(a, lambda, convention, limits, false)
}

fn lambda_sum<R: Ring>(
    a: &HyperMatrix<R>,
    lambda: &RationalFunction,
    convention: PhiConvention,
    limits: &Limits,
    full_first_slot: bool,
) -> Result<R> {
    let n = a.n;
    let m = a.dim / 2;
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let alt: Vec<AsmRecord> = asm::table(n)?;
    let perms: Vec<&AsmRecord> = alt.iter().filter(|r| r.negatives == 0).collect();
    let first_len = if full_first_slot { alt.len() } else { perms.len() };
    let estimate = (first_len as u128).saturating_mul((alt.len() as u128).saturating_pow(a.dim as u32 - 1));
    limits.check("λ-hyperdeterminant", estimate)?;

    // defect powers span -m..=m
    let offset = m as i64;
    let one = RationalFunction::one();
    let mut engine = Engine::new(n, a.dim, 2 * m + 1)?;
    for slot in 0..a.dim {
        let power = slot_power(slot, m);
        let j = convention.defect_power(slot, m);
        let defect_zero = (&one - &lambda.pow(j)?).is_zero();
        let records: Vec<&AsmRecord> = if slot == 0 && !full_first_slot {
            perms.clone()
        } else {
            alt.iter().collect()
        };
        let choices: Vec<_> = records
            .into_iter()
            .filter(|r| !(r.negatives > 0 && defect_zero))
            .map(|r| {
                let factor = (r.negatives > 0).then(|| ((j + offset) as usize, r.negatives as u16));
                (
                    r.genperm.clone(),
                    (r.inversions.rem_euclid(2)) as u8,
                    power * r.inversions,
                    factor,
                )
            })
            .collect();
        engine.push_slot(choices);
    }
    engine.evaluate(engine.accumulate(), a, lambda, offset)
}
