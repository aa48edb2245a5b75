//! Staged colorings of `B₂ * B_α` that defeat thin sets and rainbows
//! against a mock limit-lemma oracle.
//!
//! The oracle is a finite family of sets `X_e` with delays `d_e`:
//! `g(e, x, s) = [x ∈ X_e]` once `min(s) > d_e`, and 0 before. So every
//! stage whose least element clears the delay is correct for all `x`, which
//! is all the constructions ever ask of the real approximation.
//!
//! A coloring is evaluated by replaying its stage: for an element
//! `(m) ⌢ s` of `B₂ * B_α`, the substages of stage `s` are run from scratch
//! and `f(m, s)` is read off. Claims never leak between stages.

mod defeat;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::barrier::{make_canonical, make_product, BarrierSpec};
use crate::coding::{code_seq, pair, unpair};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::seq::{GroundSet, Seq};
use crate::solver::{Color, Coloring};

pub use defeat::{
    complete_stage, correct_stage, explore, verify_defeat_rainbow, verify_defeat_thin, Defeat,
    DefeatReport, Diagnostic, ExploreReport, STREAM_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleEntry {
    pub e: u64,
    pub set: GroundSet,
    #[serde(default)]
    pub delay: u64,
}

/// Mock approximations `g(e, x, s)`, one entry per index `e`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<OracleEntry>", into = "Vec<OracleEntry>")]
pub struct OracleFamily {
    entries: Vec<OracleEntry>,
}

impl TryFrom<Vec<OracleEntry>> for OracleFamily {
    type Error = Error;

    fn try_from(entries: Vec<OracleEntry>) -> Result<Self> {
        OracleFamily::new(entries)
    }
}

impl From<OracleFamily> for Vec<OracleEntry> {
    fn from(f: OracleFamily) -> Self {
        f.entries
    }
}

impl OracleFamily {
    pub fn new(mut entries: Vec<OracleEntry>) -> Result<Self> {
        entries.sort_by_key(|en| en.e);
        if let Some(w) = entries.windows(2).find(|w| w[0].e == w[1].e) {
            return Err(Error::InvalidInput(format!("index e={} listed twice", w[0].e)));
        }
        Ok(OracleFamily { entries })
    }

    pub fn empty() -> Self {
        OracleFamily::default()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed family JSON: {e}")))
    }

    pub fn entries(&self) -> &[OracleEntry] {
        &self.entries
    }

    pub fn entry(&self, e: u64) -> Option<&OracleEntry> {
        self.entries
            .binary_search_by_key(&e, |en| en.e)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// The approximation at stage `s`. Indices outside the family, and
    /// stages not past the delay, answer 0.
    pub fn g(&self, e: u64, x: u64, s: &[u64]) -> bool {
        match (self.entry(e), s.first()) {
            (Some(en), Some(&min)) => min > en.delay && en.set.contains(x),
            _ => false,
        }
    }
}

/// `F_{e,i,s}`: the first `⟨e,i⟩ + 1` numbers `x < s₁` with `g(e, x, s) = 1`,
/// or `None` if there are fewer.
pub fn f_approx(fam: &OracleFamily, e: u64, i: u64, s: &[u64]) -> Result<Option<Vec<u64>>> {
    let want = pair(e, i)?.saturating_add(1);
    Ok(approx_first(fam, e, want, s))
}

fn approx_first(fam: &OracleFamily, e: u64, want: u64, s: &[u64]) -> Option<Vec<u64>> {
    let s1 = *s.first()?;
    let hits: Vec<u64> = (0..s1).filter(|&x| fam.g(e, x, s)).take(want as usize).collect();
    (hits.len() as u64 == want).then_some(hits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefeaterKind {
    Thin,
    Rainbow,
}

impl fmt::Display for DefeaterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefeaterKind::Thin => "thin",
            DefeaterKind::Rainbow => "rainbow",
        })
    }
}

/// What one substage did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstageEvent {
    pub substage: u64,
    pub e: u64,
    /// Color index `i` (thin construction only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u64>,
    pub claimed: Vec<u64>,
}

/// The outcome of one stage `s`: a label for every `m < s₁`.
///
/// For the thin construction the label is the color. For the rainbow
/// construction it is the `m` of the color `⟨m, s⟩`, so two labels agree
/// exactly when the colors do.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageTable {
    pub stage: Seq,
    pub labels: Vec<u64>,
    pub events: Vec<SubstageEvent>,
}

pub struct StagedColoring {
    alpha: Ordinal,
    family: OracleFamily,
    kind: DefeaterKind,
    stages: BarrierSpec,
    barrier: BarrierSpec,
    cache: Mutex<HashMap<Seq, Arc<StageTable>>>,
}

impl fmt::Debug for StagedColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StagedColoring")
            .field("alpha", &self.alpha)
            .field("kind", &self.kind)
            .field("family", &self.family)
            .finish()
    }
}

pub fn thin_defeater(alpha: Ordinal, family: OracleFamily) -> Result<StagedColoring> {
    StagedColoring::new(alpha, family, DefeaterKind::Thin)
}

pub fn rainbow_defeater(alpha: Ordinal, family: OracleFamily) -> Result<StagedColoring> {
    StagedColoring::new(alpha, family, DefeaterKind::Rainbow)
}

impl StagedColoring {
    pub fn new(alpha: Ordinal, family: OracleFamily, kind: DefeaterKind) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidInput(
                "stages need alpha > 0; B_0 = {()} has no least element".into(),
            ));
        }
        let stages = make_canonical(alpha.clone());
        let barrier = make_product(BarrierSpec::exact(1), stages.clone())?;
        Ok(StagedColoring {
            alpha,
            family,
            kind,
            stages,
            barrier,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn family(&self) -> &OracleFamily {
        &self.family
    }

    pub fn kind(&self) -> DefeaterKind {
        self.kind
    }

    /// `B_α`, whose elements are the stages.
    pub fn stages(&self) -> &BarrierSpec {
        &self.stages
    }

    /// Replays stage `s`, which must be an element of `B_α`.
    pub fn stage(&self, s: &Seq) -> Result<Arc<StageTable>> {
        if let Some(t) = self.cache.lock().expect("stage cache").get(s) {
            return Ok(Arc::clone(t));
        }
        if !self.stages.is_element(s) {
            return Err(Error::NotAnElement {
                seq: s.to_string(),
                spec: self.stages.to_string(),
            });
        }
        let table = Arc::new(match self.kind {
            DefeaterKind::Thin => self.replay_thin(s),
            DefeaterKind::Rainbow => self.replay_rainbow(s),
        });
        let mut cache = self.cache.lock().expect("stage cache");
        Ok(Arc::clone(cache.entry(s.clone()).or_insert(table)))
    }

    fn replay_thin(&self, s: &Seq) -> StageTable {
        let s1 = s[0];
        let mut labels: Vec<Option<u64>> = vec![None; s1 as usize];
        let mut events = Vec::new();
        for j in 0..s1 {
            let (e, i) = unpair(j);
            // ⟨e,i⟩ = j, so F_{e,i,s} is the first j + 1 hits
            let Some(f) = approx_first(&self.family, e, j + 1, s) else {
                continue;
            };
            if let Some(&m) = f.iter().find(|&&m| labels[m as usize].is_none()) {
                labels[m as usize] = Some(i);
                events.push(SubstageEvent {
                    substage: j,
                    e,
                    i: Some(i),
                    claimed: vec![m],
                });
            }
        }
        StageTable {
            stage: s.clone(),
            labels: labels.into_iter().map(|l| l.unwrap_or(1)).collect(),
            events,
        }
    }

    fn replay_rainbow(&self, s: &Seq) -> StageTable {
        let s1 = s[0];
        let mut labels: Vec<Option<u64>> = vec![None; s1 as usize];
        let mut events = Vec::new();
        for e in 0..s1 {
            let mut free = (0..s1).filter(|&x| labels[x as usize].is_none() && self.family.g(e, x, s));
            if let (Some(m), Some(l)) = (free.next(), free.next()) {
                labels[m as usize] = Some(m);
                labels[l as usize] = Some(m);
                events.push(SubstageEvent {
                    substage: e,
                    e,
                    i: None,
                    claimed: vec![m, l],
                });
            }
        }
        StageTable {
            stage: s.clone(),
            labels: labels
                .into_iter()
                .enumerate()
                .map(|(l, lab)| lab.unwrap_or(l as u64))
                .collect(),
            events,
        }
    }

    /// `f(m, s)`, for `m < min(s)`.
    pub fn value(&self, m: u64, s: &Seq) -> Result<Color> {
        let table = self.stage(s)?;
        let label = *table.labels.get(m as usize).ok_or_else(|| {
            Error::InvalidInput(format!("{m} is not below the least element of stage {s}"))
        })?;
        match self.kind {
            DefeaterKind::Thin => Ok(label),
            DefeaterKind::Rainbow => pair(label, code_seq(s)?),
        }
    }

    /// Distinct labels used at stage `s`.
    pub fn labels_at(&self, s: &Seq) -> Result<BTreeSet<u64>> {
        Ok(self.stage(s)?.labels.iter().copied().collect())
    }
}

impl Coloring for StagedColoring {
    fn barrier(&self) -> &BarrierSpec {
        &self.barrier
    }

    fn color(&self, t: &Seq) -> Result<Color> {
        if !self.barrier.is_element(t) {
            return Err(Error::NotAnElement {
                seq: t.to_string(),
                spec: self.barrier.to_string(),
            });
        }
        let s = Seq::new(t[1..].to_vec())?;
        self.value(t[0], &s)
    }

    fn declared_bound(&self) -> Option<usize> {
        match self.kind {
            DefeaterKind::Thin => None,
            DefeaterKind::Rainbow => Some(2),
        }
    }
}
