use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive parts. The empty partition has
/// weight zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

/// Result of comparing two partitions in dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Equal,
    Dominates,
    DominatedBy,
    Incomparable,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        parts.shrink_to_fit();
        Ok(Partition(parts))
    }

    /// Sort arbitrary positive parts into a partition.
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The rectangle `(k^s)`.
    pub fn rectangle(k: usize, s: usize) -> Self {
        if k == 0 {
            return Self::empty();
        }
        Partition(vec![k; s])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Multiset union (the index of `p_λ p_μ`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend_from_slice(&self.0);
        parts.extend_from_slice(&other.0);
        Partition::from_parts(parts)
    }

    /// Multiplicities `m_i` of each part size `i`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = Π_i i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (part, mult) in self.multiplicities() {
            for k in 1..=mult {
                acc *= BigInt::from(part) * BigInt::from(k);
            }
        }
        acc
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((0..first).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect())
    }

    /// Cells `(row, col)`, zero-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// Arm and leg of every cell, in [`Partition::cells`] order.
    pub fn arms_legs(&self) -> Vec<((usize, usize), usize, usize)> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| ((i, j), self.0[i] - j - 1, conj.0[j] - i - 1))
            .collect()
    }

    pub fn dominance(&self, other: &Partition) -> Dominance {
        if self == other {
            return Dominance::Equal;
        }
        if self.weight() != other.weight() {
            return Dominance::Incomparable;
        }
        let len = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        let (mut ge, mut le) = (true, true);
        for i in 0..len {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            ge &= a >= b;
            le &= a <= b;
        }
        match (ge, le) {
            (true, _) => Dominance::Dominates,
            (_, true) => Dominance::DominatedBy,
            _ => Dominance::Incomparable,
        }
    }

    /// `self ⊴ other`.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        matches!(self.dominance(other), Dominance::Equal | Dominance::DominatedBy)
    }
}

/// Every partition of `n`, in increasing lexicographic order, so `(1^n)`
/// comes first and `(n)` last. This order refines dominance.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            go(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"2,1"`, `"[2,1]"`, `"[]"` and the empty string.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = body
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn stats_of_small_partitions() {
        assert_eq!(p("1,1").z(), BigInt::from(2));
        assert_eq!(p("1,1").conjugate(), p("2"));
        assert_eq!(p("2,1").z(), BigInt::from(2));
        assert_eq!(p("3,1,1,1").z(), BigInt::from(18));
        let al = p("2,1").arms_legs();
        assert_eq!(al, vec![((0, 0), 1, 1), ((0, 1), 0, 0), ((1, 0), 0, 0)]);
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(p("2").dominance(&p("1,1")), Dominance::Dominates);
        assert_eq!(p("1,1").dominance(&p("2")), Dominance::DominatedBy);
        assert_eq!(p("3,1,1,1").dominance(&p("2,2,2")), Dominance::Incomparable);
        assert_eq!(p("3,3").dominance(&p("3,3")), Dominance::Equal);
    }

    #[test]
    fn partition_counts_and_order() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        let four = partitions(4);
        assert_eq!(four.first().unwrap(), &p("1,1,1,1"));
        assert_eq!(four.last().unwrap(), &p("4"));
        // lexicographic order refines dominance
        for (i, a) in four.iter().enumerate() {
            for b in &four[..i] {
                assert!(!a.dominated_by(b) || a == b);
            }
        }
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!(p("[2,1]").to_string(), "[2,1]");
        assert_eq!(p("").to_string(), "[]");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }
}
