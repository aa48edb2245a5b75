//! Exhaustive search for homogeneous-type sets on finite fronts.
//!
//! The four solution notions are all hereditary: if `H` is monochromatic,
//! free, thin (for a fixed color universe) or a rainbow, so is every subset
//! of `H`, because `front(B, H') ⊆ front(B, H)` for `H' ⊆ H`. The search
//! exploits this by never extending a failing set.
//!
//! An infinite solution is out of reach, so a witness here is a finite `H`
//! of at least the requested size whose front passes the check.

mod coloring;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

pub use coloring::{Builtin, Color, Coloring, ColoringSpec, Rule, RuleColoring};

use crate::error::{Error, Result};
use crate::seq::Seq;

/// Largest ground set the search accepts.
pub const MAX_SEARCH_GROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    Mono,
    Free,
    /// Thin relative to a finite color universe: some color of the
    /// universe is missing from the image.
    Thin(BTreeSet<Color>),
    Rainbow,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Mono => "mono",
            Property::Free => "free",
            Property::Thin(_) => "thin",
            Property::Rainbow => "rainbow",
        }
    }
}

/// What a witness certifies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Monochromatic; `None` when the front inside `H` is empty.
    Mono(Option<Color>),
    Free,
    /// Thin, with the least omitted color of the universe.
    Thin(Color),
    Rainbow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub set: Seq,
    pub property: WitnessKind,
}

fn colored_front(f: &dyn Coloring, h: &[u64]) -> Result<Vec<(Seq, Color)>> {
    f.barrier()
        .front(h)
        .into_iter()
        .map(|s| {
            let c = f.color(&s)?;
            Ok((s, c))
        })
        .collect()
}

/// `f` is constant on `front(B, H)`.
pub fn verify_mono(f: &dyn Coloring, h: &[u64]) -> Result<bool> {
    let colors: BTreeSet<Color> = colored_front(f, h)?.into_iter().map(|(_, c)| c).collect();
    Ok(colors.len() <= 1)
}

/// For every `s` in `front(B, H)`, `f(s) ∈ H` implies `f(s) ∈ s`.
pub fn verify_free(f: &dyn Coloring, h: &[u64]) -> Result<bool> {
    let hs = Seq::from_unsorted(h.to_vec());
    Ok(colored_front(f, h)?
        .iter()
        .all(|(s, c)| !hs.contains_elem(*c) || s.contains_elem(*c)))
}

/// The image of `f` on `front(B, H)` misses some color of `universe`.
pub fn verify_thin(f: &dyn Coloring, h: &[u64], universe: &BTreeSet<Color>) -> Result<bool> {
    let image: BTreeSet<Color> = colored_front(f, h)?.into_iter().map(|(_, c)| c).collect();
    Ok(universe.iter().any(|c| !image.contains(c)))
}

/// `f` is injective on `front(B, H)`.
pub fn verify_rainbow(f: &dyn Coloring, h: &[u64]) -> Result<bool> {
    let mut seen = HashSet::new();
    Ok(colored_front(f, h)?.into_iter().all(|(_, c)| seen.insert(c)))
}

/// Color universe for thin checks: colors used on `front(B, G)` plus `extra`.
pub fn thin_universe(
    f: &dyn Coloring,
    ground: &[u64],
    extra: impl IntoIterator<Item = Color>,
) -> Result<BTreeSet<Color>> {
    let mut u: BTreeSet<Color> = colored_front(f, ground)?.into_iter().map(|(_, c)| c).collect();
    u.extend(extra);
    Ok(u)
}

/// Fails if some color occurs more than `k` times on `front(B, G)`.
pub fn check_bounded(f: &dyn Coloring, ground: &[u64], k: usize) -> Result<()> {
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for (_, c) in colored_front(f, ground)? {
        let n = counts.entry(c).or_default();
        *n += 1;
        if *n > k {
            return Err(Error::BoundExceeded {
                color: c,
                bound: k,
                count: *n,
            });
        }
    }
    Ok(())
}

/// A front over a ground set of at most 64 points with every element
/// colored once, so that repeated checks on subsets are bitmask filters.
#[derive(Debug, Clone)]
pub struct ColoredFront {
    ground: Vec<u64>,
    elems: Vec<FrontElem>,
}

#[derive(Debug, Clone)]
struct FrontElem {
    seq: Seq,
    mask: u64,
    color: Color,
    /// Bit of the color inside the ground set, if the color is a ground point.
    color_bit: Option<u64>,
}

impl ColoredFront {
    pub fn new(f: &dyn Coloring, ground: &[u64]) -> Result<Self> {
        let mut ground = ground.to_vec();
        ground.sort_unstable();
        ground.dedup();
        if ground.len() > MAX_SEARCH_GROUND {
            return Err(Error::TooLarge(format!(
                "search ground has {} points (limit {MAX_SEARCH_GROUND})",
                ground.len()
            )));
        }
        let mut elems = Vec::new();
        for (seq, color) in colored_front(f, &ground)? {
            let mask = seq.mask_in(&ground).expect("front elements lie in the ground");
            let color_bit = ground.binary_search(&color).ok().map(|i| 1u64 << i);
            elems.push(FrontElem {
                seq,
                mask,
                color,
                color_bit,
            });
        }
        Ok(ColoredFront { ground, elems })
    }

    pub fn ground(&self) -> &[u64] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `(element, color)` pairs in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Seq, Color)> {
        self.elems.iter().map(|e| (&e.seq, e.color))
    }

    /// Bitmask of `set` relative to the ground; `None` if `set` leaves it.
    pub fn mask_of(&self, set: &[u64]) -> Option<u64> {
        Seq::from_unsorted(set.to_vec()).mask_in(&self.ground)
    }

    pub fn set_of(&self, mask: u64) -> Seq {
        Seq::from_sorted_unchecked(
            self.ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect(),
        )
    }

    fn inside(&self, h: u64) -> impl Iterator<Item = &FrontElem> {
        self.elems.iter().filter(move |e| e.mask & !h == 0)
    }

    /// Checks `property` on the subset with bitmask `h`.
    pub fn check(&self, property: &Property, h: u64) -> Option<WitnessKind> {
        match property {
            Property::Mono => {
                let mut it = self.inside(h);
                match it.next() {
                    None => Some(WitnessKind::Mono(None)),
                    Some(first) => it
                        .all(|e| e.color == first.color)
                        .then_some(WitnessKind::Mono(Some(first.color))),
                }
            }
            Property::Free => self
                .inside(h)
                .all(|e| match e.color_bit {
                    Some(bit) if bit & h != 0 => bit & e.mask != 0,
                    _ => true,
                })
                .then_some(WitnessKind::Free),
            Property::Thin(universe) => {
                let image: BTreeSet<Color> = self.inside(h).map(|e| e.color).collect();
                universe
                    .iter()
                    .find(|c| !image.contains(c))
                    .map(|&c| WitnessKind::Thin(c))
            }
            Property::Rainbow => {
                let mut seen = HashSet::new();
                self.inside(h)
                    .all(|e| seen.insert(e.color))
                    .then_some(WitnessKind::Rainbow)
            }
        }
    }

    /// Every passing subset with at least `min_size` points, ordered by
    /// size and then lexicographically.
    pub fn find_all(&self, property: &Property, min_size: usize) -> Vec<Witness> {
        let mut found = Vec::new();
        self.dfs(property, 0, 0, 0, min_size, &mut found);
        found.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
        found
    }

    fn dfs(
        &self,
        property: &Property,
        start: usize,
        h: u64,
        size: usize,
        min_size: usize,
        out: &mut Vec<Witness>,
    ) {
        for i in start..self.ground.len() {
            let next = h | 1 << i;
            // hereditary: a failing set has no passing superset
            let Some(kind) = self.check(property, next) else {
                continue;
            };
            if size + 1 >= min_size {
                out.push(Witness {
                    set: self.set_of(next),
                    property: kind,
                });
            }
            self.dfs(property, i + 1, next, size + 1, min_size, out);
        }
    }

    /// The first passing subset in (size, lex) order with at least
    /// `min_size` points. Only size `min_size` needs scanning: any larger
    /// passing set has passing subsets of that size.
    pub fn find(&self, property: &Property, min_size: usize) -> Option<Witness> {
        let n = self.ground.len();
        if min_size > n {
            return None;
        }
        if min_size == 0 {
            return self.check(property, 0).map(|kind| Witness {
                set: Seq::empty(),
                property: kind,
            });
        }
        let mut idx: Vec<usize> = (0..min_size).collect();
        loop {
            let h = idx.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if let Some(kind) = self.check(property, h) {
                return Some(Witness {
                    set: self.set_of(h),
                    property: kind,
                });
            }
            // next combination in lex order
            let mut pos = min_size;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                if idx[pos] < n - min_size + pos {
                    break;
                }
            }
            idx[pos] += 1;
            for j in pos + 1..min_size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

/// Smallest (size, then lex) `H ⊆ G` with `|H| ≥ min_size` having `property`.
pub fn find(
    property: &Property,
    f: &dyn Coloring,
    ground: &[u64],
    min_size: usize,
) -> Result<Option<Witness>> {
    Ok(ColoredFront::new(f, ground)?.find(property, min_size))
}

/// All `H ⊆ G` with `|H| ≥ min_size` having `property`.
pub fn find_all(
    property: &Property,
    f: &dyn Coloring,
    ground: &[u64],
    min_size: usize,
) -> Result<Vec<Witness>> {
    Ok(ColoredFront::new(f, ground)?.find_all(property, min_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barrier::BarrierSpec;

    fn range(a: u64, b: u64) -> Vec<u64> {
        (a..=b).collect()
    }

    fn s(v: &[u64]) -> Seq {
        Seq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn verify_mono_examples() {
        let c = ColoringSpec::builtin(Builtin::Constant(4)).on(BarrierSpec::schreier());
        assert!(verify_mono(&c, &range(0, 8)).unwrap());
        let parity = ColoringSpec::builtin(Builtin::MinParity).on(BarrierSpec::schreier());
        let evens: Vec<u64> = (0..=10).step_by(2).collect();
        assert!(verify_mono(&parity, &evens).unwrap());
        let two = ColoringSpec::table([(s(&[0]), 0), (s(&[1]), 1)]).on(BarrierSpec::exact(1));
        assert!(!verify_mono(&two, &[0, 1]).unwrap());
    }

    #[test]
    fn verify_free_examples() {
        let min = ColoringSpec::builtin(Builtin::Min).on(BarrierSpec::exact(2));
        assert!(verify_free(&min, &range(0, 7)).unwrap());
        let succ = ColoringSpec::builtin(Builtin::MaxPlusOne).on(BarrierSpec::exact(1));
        assert!(!verify_free(&succ, &range(0, 4)).unwrap());
        let zero = ColoringSpec::builtin(Builtin::Constant(0)).on(BarrierSpec::schreier());
        assert!(verify_free(&zero, &range(1, 9)).unwrap());
    }

    #[test]
    fn verify_thin_and_rainbow_examples() {
        let u: BTreeSet<Color> = [0, 1].into();
        let two = ColoringSpec::table([(s(&[0]), 0), (s(&[1]), 1)]).on(BarrierSpec::exact(1));
        assert!(verify_thin(&two, &[], &u).unwrap());
        assert!(!verify_thin(&two, &[0, 1], &u).unwrap());
        assert!(verify_thin(&two, &[1], &u).unwrap());
        let rank = ColoringSpec::builtin(Builtin::Rank).on(BarrierSpec::schreier());
        assert!(verify_rainbow(&rank, &range(0, 6)).unwrap());
        let c = ColoringSpec::builtin(Builtin::Constant(1)).on(BarrierSpec::exact(1));
        assert!(!verify_rainbow(&c, &[3, 5]).unwrap());
    }

    #[test]
    fn partial_coloring_is_an_error() {
        let t = ColoringSpec::table([(s(&[0]), 0)]).on(BarrierSpec::exact(1));
        assert!(matches!(verify_mono(&t, &[0, 1]), Err(Error::ColoringUndefined(_))));
    }

    #[test]
    fn find_examples() {
        let two = ColoringSpec::builtin(Builtin::MinParity).on(BarrierSpec::exact(1));
        let w = find(&Property::Mono, &two, &range(0, 5), 3).unwrap().unwrap();
        assert_eq!(w.set, s(&[0, 2, 4]));
        assert_eq!(w.property, WitnessKind::Mono(Some(0)));

        let c = ColoringSpec::builtin(Builtin::Constant(7)).on(BarrierSpec::exact(1));
        assert_eq!(find(&Property::Rainbow, &c, &range(0, 5), 2).unwrap(), None);

        let succ = ColoringSpec::builtin(Builtin::MaxPlusOne).on(BarrierSpec::exact(1));
        let w = find(&Property::Free, &succ, &range(0, 8), 4).unwrap().unwrap();
        assert_eq!(w.set, s(&[0, 2, 4, 6]));
        assert!(verify_free(&succ, &w.set).unwrap());
    }

    #[test]
    fn bounded_check() {
        let t = ColoringSpec::table([(s(&[0]), 5), (s(&[1]), 5), (s(&[2]), 5)]).on(BarrierSpec::exact(1));
        assert!(check_bounded(&t, &[0, 1, 2], 3).is_ok());
        assert!(matches!(
            check_bounded(&t, &[0, 1, 2], 2),
            Err(Error::BoundExceeded { color: 5, .. })
        ));
    }

    #[test]
    fn coloring_json() {
        let text = r#"{"table": [[[0], 3], [[1, 2], 4]], "bound": 2}"#;
        let spec = ColoringSpec::from_json_str(text).unwrap();
        assert_eq!(spec.declared_bound, Some(2));
        let back = ColoringSpec::from_json_str(&spec.to_json().to_string()).unwrap();
        assert_eq!(spec, back);
        let b = ColoringSpec::from_json_str(r#"{"builtin": "sum_mod", "params": {"modulus": 3}}"#).unwrap();
        assert_eq!(b.rule, Rule::Builtin(Builtin::SumMod(3)));
        assert!(ColoringSpec::from_json_str(r#"{"builtin": "nope"}"#).is_err());
        assert!(ColoringSpec::from_json_str(r#"{"table": [[[0], 1], [[0], 2]]}"#).is_err());
        assert!(ColoringSpec::from_json_str(r#"{}"#).is_err());
    }
}
