//! Finite strictly increasing sequences and (possibly infinite) ground sets.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite strictly increasing sequence of naturals, identified with the
/// finite set it enumerates. The derived order is the lexicographic order
/// with a strict prefix comparing less.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Seq(Vec<u64>);

impl Seq {
    pub fn new(elems: Vec<u64>) -> Result<Self> {
        if elems.windows(2).all(|w| w[0] < w[1]) {
            Ok(Seq(elems))
        } else {
            Err(Error::NotIncreasing(elems))
        }
    }

    pub fn empty() -> Self {
        Seq(Vec::new())
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut elems: Vec<u64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Seq(elems)
    }

    pub(crate) fn from_sorted_unchecked(elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Seq(elems)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn contains_elem(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn prefix(&self, len: usize) -> Seq {
        Seq(self.0[..len].to_vec())
    }

    /// The sequence enumerating `self ∪ {k}`.
    pub fn insert(&self, k: u64) -> Seq {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&k) {
            v.insert(pos, k);
        }
        Seq(v)
    }

    /// `s ⌢ (m)`; requires `m > max(s)`.
    pub fn push(&self, m: u64) -> Result<Seq> {
        let mut v = self.0.clone();
        v.push(m);
        Seq::new(v)
    }

    /// Set inclusion (not prefix).
    pub fn is_subset_of(&self, other: &[u64]) -> bool {
        let mut it = other.iter();
        self.0.iter().all(|x| it.by_ref().any(|y| y == x))
    }

    /// `s⁺ = {x + 1 : x ∈ s}`.
    pub fn plus(&self) -> Seq {
        Seq(self.0.iter().map(|x| x + 1).collect())
    }

    /// Drops the last coordinate and decrements the rest:
    /// `(s₀ − 1, …, s_{n−1} − 1)` for `s = (s₀, …, s_n)`.
    pub fn minus(&self) -> Result<Seq> {
        let Some((_, init)) = self.0.split_last() else {
            return Err(Error::SeqShift("cannot shift down the empty sequence".into()));
        };
        if self.0[0] == 0 {
            return Err(Error::SeqShift(format!("{self} contains 0")));
        }
        Ok(Seq(init.iter().map(|x| x - 1).collect()))
    }

    /// Position-wise bitmask against a ground slice; `None` if some element
    /// is not in `ground` or `ground` has more than 64 elements.
    pub fn mask_in(&self, ground: &[u64]) -> Option<u64> {
        if ground.len() > 64 {
            return None;
        }
        let mut mask = 0u64;
        for x in &self.0 {
            let idx = ground.binary_search(x).ok()?;
            mask |= 1 << idx;
        }
        Some(mask)
    }
}

impl Deref for Seq {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl TryFrom<Vec<u64>> for Seq {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Seq::new(v)
    }
}

impl From<Seq> for Vec<u64> {
    fn from(s: Seq) -> Self {
        s.0
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Arithmetic progression `{start, start + step, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
}

impl Progression {
    pub fn contains(&self, x: u64) -> bool {
        x >= self.start && (x - self.start).is_multiple_of(self.step)
    }
}

/// A decidable subset of ℕ: an explicit finite prefix together with an
/// optional arithmetic-progression tail. Without a tail the set is finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroundSetRepr", into = "GroundSetRepr")]
pub struct GroundSet {
    prefix: Vec<u64>,
    tail: Option<Progression>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroundSetRepr {
    #[serde(default)]
    prefix: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Progression>,
}

impl TryFrom<GroundSetRepr> for GroundSet {
    type Error = Error;

    fn try_from(r: GroundSetRepr) -> Result<Self> {
        GroundSet::new(r.prefix, r.tail)
    }
}

impl From<GroundSet> for GroundSetRepr {
    fn from(g: GroundSet) -> Self {
        GroundSetRepr {
            prefix: g.prefix,
            tail: g.tail,
        }
    }
}

impl GroundSet {
    pub fn new(prefix: Vec<u64>, tail: Option<Progression>) -> Result<Self> {
        if !prefix.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidGround(format!(
                "prefix {prefix:?} is not strictly increasing"
            )));
        }
        if let Some(p) = tail {
            if p.step == 0 {
                return Err(Error::InvalidGround("tail step must be positive".into()));
            }
        }
        Ok(GroundSet { prefix, tail })
    }

    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Self {
        let mut prefix: Vec<u64> = elems.into_iter().collect();
        prefix.sort_unstable();
        prefix.dedup();
        GroundSet { prefix, tail: None }
    }

    pub fn progression(start: u64, step: u64) -> Result<Self> {
        GroundSet::new(Vec::new(), Some(Progression { start, step }))
    }

    pub fn evens() -> Self {
        GroundSet::progression(0, 2).expect("step 2 is valid")
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<Progression> {
        self.tail
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.prefix.binary_search(&x).is_ok() || self.tail.is_some_and(|t| t.contains(x))
    }

    /// Elements in increasing order; infinite when there is a tail.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let tail = self
            .tail
            .into_iter()
            .flat_map(|t| (0u64..).map_while(move |i| t.step.checked_mul(i)?.checked_add(t.start)));
        merge_sorted(self.prefix.iter().copied(), tail)
    }

    /// Elements `x < bound`, ascending.
    pub fn below(&self, bound: u64) -> Vec<u64> {
        self.iter().take_while(|&x| x < bound).collect()
    }

    /// Elements `x >= from`, ascending.
    pub fn iter_from(&self, from: u64) -> impl Iterator<Item = u64> + '_ {
        self.iter().skip_while(move |&x| x < from)
    }
}

fn merge_sorted(
    a: impl Iterator<Item = u64>,
    b: impl Iterator<Item = u64>,
) -> impl Iterator<Item = u64> {
    let mut a = a.peekable();
    let mut b = b.peekable();
    std::iter::from_fn(move || match (a.peek().copied(), b.peek().copied()) {
        (Some(x), Some(y)) if x < y => a.next(),
        (Some(x), Some(y)) if x > y => b.next(),
        (Some(_), Some(_)) => {
            b.next();
            a.next()
        }
        (Some(_), None) => a.next(),
        (None, _) => b.next(),
    })
}
