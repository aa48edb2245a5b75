//! Finite checks of the defeat arguments.
//!
//! A search ranges over stages `s ⊆ X_e` whose least element `s₁` is below
//! the bound. Under the delay model the labels of stage `s` depend only on
//! `s₁`, so one stage per `s₁` suffices: the canonical completion, obtained
//! by streaming `X_e` from `s₁` upward until the stop rule fires.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::barrier::{BarrierSpec, StepOutcome};
use crate::coding::{code_seq, pair};
use crate::error::{Error, Result};
use crate::seq::{GroundSet, Seq};
use crate::solver::{Color, Coloring};

use super::{DefeaterKind, OracleFamily, StagedColoring};

/// Longest stream fed to the stop rule when completing a stage.
pub const STREAM_CAP: usize = 1 << 16;

/// The element of `stages` that starts at `first` and continues along
/// `set`. `None` when a finite `set` runs out first.
pub fn complete_stage(stages: &BarrierSpec, set: &GroundSet, first: u64) -> Result<Option<Seq>> {
    if !set.contains(first) {
        return Err(Error::InvalidInput(format!("{first} is not in the stage set")));
    }
    let mut len = 16;
    loop {
        let stream: Vec<u64> = set.iter_from(first).take(len).collect();
        let exhausted = stream.len() < len;
        match stages.step(&stream)? {
            StepOutcome::Element(s) => return Ok(Some(s)),
            StepOutcome::Inconclusive if exhausted => return Ok(None),
            StepOutcome::Inconclusive if len >= STREAM_CAP => {
                return Err(Error::TooLarge(format!(
                    "stage from {first} in {stages} needs more than {STREAM_CAP} points"
                )))
            }
            StepOutcome::Inconclusive => len *= 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defeat {
    /// `m ∈ X_e` with `f(m, s) = i`.
    Thin { m: u64, stage: Seq, color: Color },
    /// `m < ℓ` in `X_e` with `f(m, s) = f(ℓ, s)`. The color is omitted when
    /// the stage is too long to code.
    Rainbow {
        m: u64,
        l: u64,
        stage: Seq,
        color: Option<Color>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum Diagnostic {
    NotInFamily,
    WrongKind,
    BoundTooSmall(String),
    /// The argument guarantees a witness in range, yet none was found.
    Bug(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefeatReport {
    pub kind: DefeaterKind,
    pub alpha: String,
    pub e: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u64>,
    pub bound: u64,
    pub stages_searched: usize,
    pub found: Option<Defeat>,
    pub diagnostic: Option<Diagnostic>,
}

impl DefeatReport {
    pub fn is_bug(&self) -> bool {
        matches!(self.diagnostic, Some(Diagnostic::Bug(_)))
    }
}

struct Search {
    set: GroundSet,
    delay: u64,
}

impl Search {
    fn start(col: &StagedColoring, e: u64, want: DefeaterKind, report: &mut DefeatReport) -> Option<Self> {
        if col.kind() != want {
            report.diagnostic = Some(Diagnostic::WrongKind);
            return None;
        }
        let Some(entry) = col.family().entry(e) else {
            report.diagnostic = Some(Diagnostic::NotInFamily);
            return None;
        };
        Some(Search {
            set: entry.set.clone(),
            delay: entry.delay,
        })
    }

    /// Candidate least elements below `bound` that clear the delay.
    fn firsts(&self, bound: u64) -> Vec<u64> {
        self.set
            .below(bound)
            .into_iter()
            .filter(|&x| x > self.delay && x > 0)
            .collect()
    }
}

fn report(col: &StagedColoring, e: u64, i: Option<u64>, bound: u64) -> DefeatReport {
    DefeatReport {
        kind: col.kind(),
        alpha: col.alpha().to_string(),
        e,
        i,
        bound,
        stages_searched: 0,
        found: None,
        diagnostic: None,
    }
}

/// Searches for `m ∈ X_e` and a stage `s ⊆ X_e` with `f(m, s) = i`.
///
/// Substage `⟨e,i⟩` is guaranteed to act on `X_e` at any stage with
/// `s₁ > ⟨e,i⟩` and more than `⟨e,i⟩` points of `X_e` below `s₁`.
pub fn verify_defeat_thin(col: &StagedColoring, e: u64, i: u64, bound: u64) -> Result<DefeatReport> {
    let mut rep = report(col, e, Some(i), bound);
    let Some(search) = Search::start(col, e, DefeaterKind::Thin, &mut rep) else {
        return Ok(rep);
    };
    let j = pair(e, i)?;
    let mut guaranteed = None;
    for s1 in search.firsts(bound) {
        let Some(stage) = complete_stage(col.stages(), &search.set, s1)? else {
            continue;
        };
        rep.stages_searched += 1;
        let below = search.set.below(s1);
        if guaranteed.is_none() && j < s1 && below.len() as u64 > j {
            guaranteed = Some(s1);
        }
        let table = col.stage(&stage)?;
        if let Some(&m) = below.iter().find(|&&m| table.labels[m as usize] == i) {
            rep.found = Some(Defeat::Thin {
                m,
                stage,
                color: i,
            });
            return Ok(rep);
        }
    }
    rep.diagnostic = Some(match guaranteed {
        Some(s1) => Diagnostic::Bug(format!(
            "substage {j} should have colored a point of X_{e} with {i} at the stage starting {s1}"
        )),
        None => Diagnostic::BoundTooSmall(format!(
            "no stage below {bound} has more than {j} points of X_{e} under its least element"
        )),
    });
    Ok(rep)
}

/// Searches for `m < ℓ` in `X_e` and a stage `s ⊆ X_e` with
/// `f(m, s) = f(ℓ, s)`.
///
/// Substage `e` is guaranteed to pair two points of `X_e` at any stage with
/// `s₁ > e` and at least `2e + 2` points of `X_e` below `s₁`.
pub fn verify_defeat_rainbow(col: &StagedColoring, e: u64, bound: u64) -> Result<DefeatReport> {
    let mut rep = report(col, e, None, bound);
    let Some(search) = Search::start(col, e, DefeaterKind::Rainbow, &mut rep) else {
        return Ok(rep);
    };
    let need = 2 * e + 2;
    let mut guaranteed = None;
    for s1 in search.firsts(bound) {
        let Some(stage) = complete_stage(col.stages(), &search.set, s1)? else {
            continue;
        };
        rep.stages_searched += 1;
        let below = search.set.below(s1);
        if guaranteed.is_none() && e < s1 && below.len() as u64 >= need {
            guaranteed = Some(s1);
        }
        let table = col.stage(&stage)?;
        let mut first_with: BTreeMap<u64, u64> = BTreeMap::new();
        for &x in &below {
            let label = table.labels[x as usize];
            if let Some(&m) = first_with.get(&label) {
                let color = code_seq(&stage).and_then(|c| pair(label, c)).ok();
                rep.found = Some(Defeat::Rainbow {
                    m,
                    l: x,
                    stage,
                    color,
                });
                return Ok(rep);
            }
            first_with.insert(label, x);
        }
    }
    rep.diagnostic = Some(match guaranteed {
        Some(s1) => Diagnostic::Bug(format!(
            "substage {e} should have paired two points of X_{e} at the stage starting {s1}"
        )),
        None => Diagnostic::BoundTooSmall(format!(
            "no stage below {bound} has {need} points of X_{e} under its least element"
        )),
    });
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploreReport {
    pub kind: DefeaterKind,
    pub alpha: String,
    pub ground: Vec<u64>,
    pub stages: usize,
    pub elements: usize,
    /// Every stage assigns a value to every `m < s₁`.
    pub total: bool,
    pub max_multiplicity: usize,
    /// Colors used more than twice (meaningful for the rainbow construction).
    pub over_two: Vec<Color>,
}

impl ExploreReport {
    pub fn two_bounded(&self) -> bool {
        self.over_two.is_empty()
    }
}

/// Colors the whole front of `B₂ * B_α` over `ground` and tallies colors.
pub fn explore(col: &StagedColoring, ground: &[u64]) -> Result<ExploreReport> {
    let stages = col.stages().front(ground);
    let mut total = true;
    for s in &stages {
        total &= col.stage(s)?.labels.len() as u64 == s[0];
    }
    let elements = col.barrier().front(ground);
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for t in &elements {
        *counts.entry(col.color(t)?).or_default() += 1;
    }
    let mut sorted_ground = ground.to_vec();
    sorted_ground.sort_unstable();
    sorted_ground.dedup();
    Ok(ExploreReport {
        kind: col.kind(),
        alpha: col.alpha().to_string(),
        ground: sorted_ground,
        stages: stages.len(),
        elements: elements.len(),
        total,
        max_multiplicity: counts.values().copied().max().unwrap_or(0),
        over_two: counts.iter().filter(|(_, &n)| n > 2).map(|(&c, _)| c).collect(),
    })
}

/// A stage `s ⊆ X_e` with `min(s) > k` at which `g(e, x, s)` agrees with
/// `X_e` for every `x ≤ k`, searching least elements below `bound`.
pub fn correct_stage(
    stages: &BarrierSpec,
    fam: &OracleFamily,
    e: u64,
    k: u64,
    bound: u64,
) -> Result<Option<Seq>> {
    let Some(entry) = fam.entry(e) else {
        return Ok(None);
    };
    for s1 in entry.set.below(bound).into_iter().filter(|&x| x > k) {
        let Some(s) = complete_stage(stages, &entry.set, s1)? else {
            continue;
        };
        if (0..=k).all(|x| fam.g(e, x, &s) == entry.set.contains(x)) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barrier::make_canonical;
    use crate::diag::{rainbow_defeater, thin_defeater, OracleEntry};
    use crate::ordinal::Ordinal;

    fn family(entries: &[(u64, GroundSet, u64)]) -> OracleFamily {
        OracleFamily::new(
            entries
                .iter()
                .map(|(e, set, delay)| OracleEntry {
                    e: *e,
                    set: set.clone(),
                    delay: *delay,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn completion_follows_the_set() {
        let w = make_canonical(Ordinal::omega());
        let s = complete_stage(&w, &GroundSet::evens(), 2).unwrap().unwrap();
        assert_eq!(s.as_slice(), &[2, 4, 6, 8]);
        let finite = GroundSet::finite([3, 5]);
        assert_eq!(complete_stage(&w, &finite, 3).unwrap(), None);
    }

    #[test]
    fn thin_examples() {
        let fam = family(&[(0, GroundSet::evens(), 0)]);
        let col = thin_defeater(Ordinal::one(), fam).unwrap();
        let r = verify_defeat_thin(&col, 0, 0, 12).unwrap();
        assert!(matches!(r.found, Some(Defeat::Thin { m: 0, .. })), "{r:?}");
        let r = verify_defeat_thin(&col, 0, 1, 12).unwrap();
        assert!(matches!(r.found, Some(Defeat::Thin { color: 1, .. })), "{r:?}");
        let r = verify_defeat_thin(&col, 0, 0, 1).unwrap();
        assert!(matches!(r.diagnostic, Some(Diagnostic::BoundTooSmall(_))));
        let r = verify_defeat_thin(&col, 5, 0, 12).unwrap();
        assert_eq!(r.diagnostic, Some(Diagnostic::NotInFamily));
    }

    #[test]
    fn rainbow_examples() {
        let fam = family(&[(0, GroundSet::evens(), 0), (1, GroundSet::finite([4]), 0)]);
        let col = rainbow_defeater(Ordinal::one(), fam).unwrap();
        let r = verify_defeat_rainbow(&col, 0, 12).unwrap();
        assert!(matches!(r.found, Some(Defeat::Rainbow { m: 0, l: 2, .. })), "{r:?}");
        let r = verify_defeat_rainbow(&col, 1, 12).unwrap();
        assert!(matches!(r.diagnostic, Some(Diagnostic::BoundTooSmall(_))), "{r:?}");
        let r = verify_defeat_rainbow(&col, 2, 12).unwrap();
        assert_eq!(r.diagnostic, Some(Diagnostic::NotInFamily));
    }

    #[test]
    fn rainbow_is_two_bounded_on_small_fronts() {
        let fam = family(&[(0, GroundSet::evens(), 0), (1, GroundSet::progression(1, 3).unwrap(), 2)]);
        let ground: Vec<u64> = (0..=10).collect();
        for alpha in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let col = rainbow_defeater(alpha, fam.clone()).unwrap();
            let rep = explore(&col, &ground).unwrap();
            assert!(rep.total && rep.two_bounded(), "{rep:?}");
        }
    }

    #[test]
    fn delayed_oracle_has_correct_stages() {
        let fam = family(&[(0, GroundSet::evens(), 5)]);
        let w = make_canonical(Ordinal::omega());
        for k in 0..=8 {
            let s = correct_stage(&w, &fam, 0, k, 64).unwrap().unwrap();
            assert!(s[0] > k.max(5));
        }
    }
}
