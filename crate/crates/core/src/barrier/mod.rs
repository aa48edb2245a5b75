//! Barriers given intensionally by a stop rule.
//!
//! A [`BarrierSpec`] never lists its elements. Instead it decides, for any
//! finite increasing sequence, whether the sequence is an element, a proper
//! prefix of one, or already extends one. Every constructor below denotes a
//! barrier, so for a sequence over the base the prefixes that are elements
//! form a chain under `⊑` of length at most one: two elements that are both
//! prefixes of one sequence are `⊆`-comparable, which Sperner forbids. All
//! structural rules (products in particular) lean on that uniqueness.

mod probe;
mod repr;

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::seq::{GroundSet, Seq};

pub use probe::{check_sperner, density_probe, DensityReport, DensityViolation};

/// Outcome of classifying a finite sequence against a barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Element,
    ProperPrefix,
    Overrun,
    NotInBase,
}

/// Outcome of streaming a sequence through a barrier's stop rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Element(Seq),
    Inconclusive,
}

/// Structural stop decision: the length of the unique prefix that is an
/// element, or `Open` when no prefix is (yet).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scan {
    Stop(usize),
    Open,
}

impl Scan {
    fn offset(self, by: usize) -> Scan {
        match self {
            Scan::Stop(p) => Scan::Stop(p + by),
            Scan::Open => Scan::Open,
        }
    }
}

/// Base of a barrier, as a decidable subset of ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Base {
    Naturals,
    /// `X⁺ = {x + 1 : x ∈ X}`.
    Shifted(Box<Base>),
    /// `X/n = {x ∈ X : x > n}`.
    Tail(Box<Base>, u64),
    Restricted(Box<Base>, GroundSet),
}

impl Base {
    pub fn contains(&self, x: u64) -> bool {
        match self {
            Base::Naturals => true,
            Base::Shifted(inner) => x >= 1 && inner.contains(x - 1),
            Base::Tail(inner, n) => x > *n && inner.contains(x),
            Base::Restricted(inner, set) => set.contains(x) && inner.contains(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// `{()}`, the unit of the product. Admitted only as a degenerate case.
    Unit,
    /// `[ℕ]^n`.
    ExactSize(usize),
    /// `{s : |s| = min(s) + 1}`.
    Schreier,
    /// Clote's canonical barrier of order type `ω^α`.
    Canonical(Ordinal),
    /// `A * B = {s ∪ t : s ∈ A, t ∈ B, max(s) < min(t)}`.
    Product(Box<BarrierSpec>, Box<BarrierSpec>),
    /// `B⁺ = {s⁺ ∪ {m} : s ∈ B, m ∈ X⁺, m > max(s⁺)}`.
    Plus(Box<BarrierSpec>),
    /// `B_n = {s : min(s) > n, {n} ∪ s ∈ B}`.
    Derived(Box<BarrierSpec>, u64),
    /// `B|X = {s ∈ B : s ⊆ X}`.
    Restrict(Box<BarrierSpec>, GroundSet),
}

/// A barrier described by its constructor tree. Build through the `make_*`
/// functions (or JSON/shorthand parsing), which validate their arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarrierSpec {
    node: Node,
}

/// Symbolic order type; `exact` is false when only an upper bound is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderType {
    pub ordinal: Ordinal,
    pub exact: bool,
}

impl BarrierSpec {
    pub fn unit() -> Self {
        BarrierSpec { node: Node::Unit }
    }

    pub fn exact(n: usize) -> Self {
        BarrierSpec {
            node: Node::ExactSize(n),
        }
    }

    pub fn schreier() -> Self {
        BarrierSpec {
            node: Node::Schreier,
        }
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn base(&self) -> Base {
        match &self.node {
            Node::Unit | Node::ExactSize(_) | Node::Schreier | Node::Canonical(_) => Base::Naturals,
            Node::Product(a, b) => {
                if a.is_unit() {
                    b.base()
                } else {
                    a.base()
                }
            }
            Node::Plus(inner) => Base::Shifted(Box::new(inner.base())),
            Node::Derived(inner, n) => Base::Tail(Box::new(inner.base()), *n),
            Node::Restrict(inner, set) => Base::Restricted(Box::new(inner.base()), set.clone()),
        }
    }

    /// True when the empty sequence is an element, i.e. the spec is `{()}`.
    pub fn is_unit(&self) -> bool {
        self.scan(&[]) == Scan::Stop(0)
    }

    fn scan(&self, s: &[u64]) -> Scan {
        match &self.node {
            Node::Unit => Scan::Stop(0),
            Node::ExactSize(n) => {
                if s.len() >= *n {
                    Scan::Stop(*n)
                } else {
                    Scan::Open
                }
            }
            Node::Schreier => match s.first() {
                Some(&m) if (s.len() as u64) > m => Scan::Stop(m as usize + 1),
                _ => Scan::Open,
            },
            Node::Canonical(alpha) => scan_canonical(alpha, s),
            Node::Product(a, b) => match a.scan(s) {
                Scan::Stop(p) => b.scan(&s[p..]).offset(p),
                Scan::Open => Scan::Open,
            },
            Node::Plus(inner) => {
                let shifted: Vec<u64> = s.iter().map(|x| x.saturating_sub(1)).collect();
                match inner.scan(&shifted) {
                    Scan::Stop(p) if s.len() > p => Scan::Stop(p + 1),
                    _ => Scan::Open,
                }
            }
            Node::Derived(inner, n) => {
                let mut with_n = Vec::with_capacity(s.len() + 1);
                with_n.push(*n);
                with_n.extend_from_slice(s);
                match inner.scan(&with_n) {
                    Scan::Stop(p) => Scan::Stop(p.saturating_sub(1)),
                    Scan::Open => Scan::Open,
                }
            }
            Node::Restrict(inner, _) => inner.scan(s),
        }
    }

    fn base_violation(&self, s: &[u64]) -> Option<u64> {
        let base = self.base();
        s.iter().copied().find(|&x| !base.contains(x))
    }

    pub fn classify(&self, s: &Seq) -> Classification {
        self.classify_slice(s)
    }

    /// `s` must be strictly increasing.
    pub(crate) fn classify_slice(&self, s: &[u64]) -> Classification {
        if self.base_violation(s).is_some() {
            return Classification::NotInBase;
        }
        match self.scan(s) {
            Scan::Stop(p) if p == s.len() => Classification::Element,
            Scan::Stop(_) => Classification::Overrun,
            Scan::Open => Classification::ProperPrefix,
        }
    }

    pub fn is_element(&self, s: &Seq) -> bool {
        self.classify(s) == Classification::Element
    }

    /// The shortest prefix of `stream` that is an element, or
    /// `Inconclusive` if the stream runs out first.
    pub fn step(&self, stream: &[u64]) -> Result<StepOutcome> {
        let stream = Seq::new(stream.to_vec())?;
        let scan = self.scan(&stream);
        let consumed = match scan {
            Scan::Stop(p) => p,
            Scan::Open => stream.len(),
        };
        if let Some(value) = self.base_violation(&stream[..consumed]) {
            return Err(Error::NotInBase {
                value,
                spec: self.to_string(),
            });
        }
        Ok(match scan {
            Scan::Stop(p) => StepOutcome::Element(stream.prefix(p)),
            Scan::Open => StepOutcome::Inconclusive,
        })
    }

    /// All elements `s ⊆ ground`, in lexicographic order.
    pub fn front(&self, ground: &[u64]) -> Vec<Seq> {
        let mut ground: Vec<u64> = ground.to_vec();
        ground.sort_unstable();
        ground.dedup();
        let base = self.base();
        ground.retain(|&x| base.contains(x));
        let mut out = Vec::new();
        let mut cur = Vec::new();
        match self.scan(&cur) {
            Scan::Stop(_) => out.push(Seq::empty()),
            Scan::Open => self.front_dfs(&ground, 0, &mut cur, &mut out),
        }
        out
    }

    fn front_dfs(&self, ground: &[u64], start: usize, cur: &mut Vec<u64>, out: &mut Vec<Seq>) {
        for idx in start..ground.len() {
            cur.push(ground[idx]);
            match self.scan(cur) {
                Scan::Stop(p) if p == cur.len() => out.push(Seq::from_sorted_unchecked(cur.clone())),
                Scan::Open => self.front_dfs(ground, idx + 1, cur, out),
                // unreachable from an open parent
                Scan::Stop(_) => {}
            }
            cur.pop();
        }
    }

    /// The `k`-variant `s[k]`: the unique element of the form
    /// `(s₀, …, s_i, k, s_{i+1}, …, s_j)` with `j < n`, for `k < max(s)`.
    /// It is always lexicographically below `s`.
    pub fn variant(&self, s: &Seq, k: u64) -> Result<Seq> {
        let verr = |reason: &str| Error::Variant {
            seq: s.to_string(),
            k,
            reason: reason.to_string(),
        };
        if !self.is_element(s) {
            return Err(Error::NotAnElement {
                seq: s.to_string(),
                spec: self.to_string(),
            });
        }
        if !self.base().contains(k) {
            return Err(Error::NotInBase {
                value: k,
                spec: self.to_string(),
            });
        }
        if s.contains_elem(k) {
            return Err(verr("k already occurs in the sequence"));
        }
        match s.last() {
            Some(&max) if k < max => {}
            _ => return Err(verr("k must be below max(s); see append_variant")),
        }
        let inserted = s.insert(k);
        match self.step(&inserted)? {
            StepOutcome::Element(t) if t < *s && t.contains_elem(k) && t.len() < inserted.len() => {
                Ok(t)
            }
            other => Err(Error::Bug(format!(
                "variant of {s} at {k} in {self} produced {other:?}"
            ))),
        }
    }

    /// The trailing case: for `s_{n−1} < k < s_n`, `(s₀, …, s_{n−1}, k)` is
    /// itself an element.
    pub fn append_variant(&self, s: &Seq, k: u64) -> Result<Seq> {
        let Some((&last, init)) = s.split_last() else {
            return Err(Error::Variant {
                seq: s.to_string(),
                k,
                reason: "empty sequence".into(),
            });
        };
        let lower_ok = init.last().is_none_or(|&prev| prev < k);
        if !(lower_ok && k < last) {
            return Err(Error::Variant {
                seq: s.to_string(),
                k,
                reason: "k must lie strictly between the last two coordinates".into(),
            });
        }
        let mut v = init.to_vec();
        v.push(k);
        let t = Seq::new(v)?;
        let variant = self.variant(s, k)?;
        if variant != t {
            return Err(Error::Bug(format!(
                "append variant of {s} at {k} is {variant}, expected {t}"
            )));
        }
        Ok(t)
    }

    pub fn order_type(&self) -> Result<OrderType> {
        let exact = |ordinal| Ok(OrderType { ordinal, exact: true });
        match &self.node {
            Node::Unit => exact(Ordinal::one()),
            Node::ExactSize(n) => exact(Ordinal::omega_pow(Ordinal::nat(*n as u64))),
            Node::Schreier => exact(Ordinal::omega_pow(Ordinal::omega())),
            Node::Canonical(alpha) => exact(Ordinal::omega_pow(alpha.clone())),
            Node::Plus(inner) => {
                let t = inner.order_type()?;
                Ok(OrderType {
                    ordinal: Ordinal::omega().mul(&t.ordinal),
                    exact: t.exact,
                })
            }
            Node::Product(a, b) => {
                let (ta, tb) = (a.order_type()?, b.order_type()?);
                Ok(OrderType {
                    ordinal: tb.ordinal.mul(&ta.ordinal),
                    exact: ta.exact && tb.exact,
                })
            }
            Node::Restrict(inner, _) => Ok(OrderType {
                ordinal: inner.order_type()?.ordinal,
                exact: false,
            }),
            Node::Derived(..) => Err(Error::Unsupported(format!(
                "order type of derived barrier {self}"
            ))),
        }
    }
}

fn scan_canonical(alpha: &Ordinal, s: &[u64]) -> Scan {
    if alpha.is_zero() {
        return Scan::Stop(0);
    }
    let Some(&n) = s.first() else {
        return Scan::Open;
    };
    if alpha.is_successor() {
        let pred = alpha.predecessor().expect("successor");
        return scan_canonical(&pred, &s[1..]).offset(1);
    }
    // (n) * CB(α[n]) * CB(α[n-1]) * … * CB(α[0]); every block but the last
    // consumes at least one element, so this stops within |s| + 1 rounds.
    let mut pos = 1;
    for j in (0..=n).rev() {
        let beta = alpha.fund_seq(j).expect("limit");
        match scan_canonical(&beta, &s[pos..]) {
            Scan::Stop(p) => pos += p,
            Scan::Open => return Scan::Open,
        }
    }
    Scan::Stop(pos)
}

pub fn make_canonical(alpha: Ordinal) -> BarrierSpec {
    BarrierSpec {
        node: Node::Canonical(alpha),
    }
}

/// `A * B`. Both factors must share a base unless one of them is `{()}`.
pub fn make_product(a: BarrierSpec, b: BarrierSpec) -> Result<BarrierSpec> {
    if !a.is_unit() && !b.is_unit() && a.base() != b.base() {
        return Err(Error::InvalidSpec(format!(
            "product factors {a} and {b} have different bases"
        )));
    }
    Ok(BarrierSpec {
        node: Node::Product(Box::new(a), Box::new(b)),
    })
}

pub fn make_plus(inner: BarrierSpec) -> BarrierSpec {
    BarrierSpec {
        node: Node::Plus(Box::new(inner)),
    }
}

/// `B_n`; `n` must be in the base and `(n)` must be a proper prefix.
pub fn make_derived(inner: BarrierSpec, n: u64) -> Result<BarrierSpec> {
    match inner.classify_slice(&[n]) {
        Classification::ProperPrefix => Ok(BarrierSpec {
            node: Node::Derived(Box::new(inner), n),
        }),
        Classification::NotInBase => Err(Error::InvalidSpec(format!(
            "{n} is not in the base of {inner}"
        ))),
        other => Err(Error::InvalidSpec(format!(
            "({n}) is {other:?} in {inner}, so the derived barrier would be trivial"
        ))),
    }
}

/// `B|X`; `X` must meet the base infinitely often, so it needs a tail.
pub fn make_restrict(inner: BarrierSpec, set: GroundSet) -> Result<BarrierSpec> {
    if set.is_finite() {
        return Err(Error::InvalidSpec(
            "restriction set must be infinite (give it a tail)".into(),
        ));
    }
    Ok(BarrierSpec {
        node: Node::Restrict(Box::new(inner), set),
    })
}

/// `s⁺`.
pub fn seq_plus(s: &Seq) -> Seq {
    s.plus()
}

/// `s ⊖ 1`.
pub fn seq_minus(s: &Seq) -> Result<Seq> {
    s.minus()
}

/// First-difference order; a strict prefix compares less.
pub fn lex_cmp(s: &Seq, t: &Seq) -> std::cmp::Ordering {
    s.cmp(t)
}

impl fmt::Display for BarrierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Unit => write!(f, "unit"),
            Node::ExactSize(n) => write!(f, "exact:{n}"),
            Node::Schreier => write!(f, "schreier"),
            Node::Canonical(alpha) => write!(f, "canonical:{alpha}"),
            _ => write!(f, "{}", self.to_json()),
        }
    }
}
