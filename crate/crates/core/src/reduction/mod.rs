//! The five reductions between Ramsey-type problems on barriers, each a
//! forward map on colorings and a backward map on solutions, together with
//! an exhaustive finite checker.
//!
//! | reduction   | target problem   | forward                  | backward          |
//! |-------------|------------------|--------------------------|-------------------|
//! | `FS_to_RT`  | RT₂ on `B⁺`      | recursion on `<_lex`     | `x ↦ x − 1`       |
//! | `TS_to_RT`  | RT₂ on `B`       | `0 ↦ 0`, else 1          | identity          |
//! | `TS_to_FS`  | FS on `B`        | identity                 | drop `min X`      |
//! | `RRT_to_RT` | RT_k on `B`      | count of earlier twins   | identity          |
//! | `RRT2_to_FS`| FS on `B`        | `min(t ∖ s)` of the twin | identity          |
//!
//! On a finite `H` the free-set reduction loses its top point: an element
//! of `B` whose last coordinate is `max H − 1` has no extension inside `H`,
//! so the checker maps `H ∖ {max H}` back, never `H` itself.

mod forward;
pub mod instances;
mod rank;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::barrier::{make_plus, BarrierSpec};
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::solver::{check_bounded, thin_universe, ColoredFront, Coloring, Property};

pub use forward::{Forward, FsColoring, GalvinColoring, Rrt2FsColoring, TsRtColoring, CHAIN_GUARD};
pub use rank::EnumRank;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reduction {
    FsToRt,
    TsToRt,
    TsToFs,
    RrtToRt { k: usize },
    Rrt2ToFs,
}

impl Reduction {
    /// All five, with `RRT_to_RT` at the given `k`.
    pub fn all(k: usize) -> [Reduction; 5] {
        [
            Reduction::FsToRt,
            Reduction::TsToRt,
            Reduction::TsToFs,
            Reduction::RrtToRt { k },
            Reduction::Rrt2ToFs,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reduction::FsToRt => "FS_to_RT",
            Reduction::TsToRt => "TS_to_RT",
            Reduction::TsToFs => "TS_to_FS",
            Reduction::RrtToRt { .. } => "RRT_to_RT",
            Reduction::Rrt2ToFs => "RRT2_to_FS",
        }
    }

    /// Parses `fs-to-rt`, `FS_to_RT` and the like. `k` is used by `rrt-to-rt`.
    pub fn parse(name: &str, k: Option<usize>) -> Result<Self> {
        let norm = name.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "fs-to-rt" => Reduction::FsToRt,
            "ts-to-rt" => Reduction::TsToRt,
            "ts-to-fs" => Reduction::TsToFs,
            "rrt-to-rt" => Reduction::RrtToRt {
                k: k.ok_or_else(|| Error::InvalidInput("rrt-to-rt needs a bound k".into()))?,
            },
            "rrt2-to-fs" => Reduction::Rrt2ToFs,
            _ => return Err(Error::InvalidInput(format!("unknown reduction {name:?}"))),
        })
    }

    /// Bound the source coloring must respect, if any.
    pub fn source_bound(&self) -> Option<usize> {
        match self {
            Reduction::RrtToRt { k } => Some(*k),
            Reduction::Rrt2ToFs => Some(2),
            _ => None,
        }
    }

    /// Solution notion of the source problem.
    pub fn source_property(&self) -> &'static str {
        match self {
            Reduction::FsToRt => "free",
            Reduction::TsToRt | Reduction::TsToFs => "thin",
            Reduction::RrtToRt { .. } | Reduction::Rrt2ToFs => "rainbow",
        }
    }

    /// Solution notion of the target problem.
    pub fn target_property(&self) -> Property {
        match self {
            Reduction::FsToRt | Reduction::TsToRt | Reduction::RrtToRt { .. } => Property::Mono,
            Reduction::TsToFs | Reduction::Rrt2ToFs => Property::Free,
        }
    }

    pub fn barrier_map(&self, b: &BarrierSpec) -> BarrierSpec {
        match self {
            Reduction::FsToRt => make_plus(b.clone()),
            _ => b.clone(),
        }
    }

    pub fn forward(&self, f: Arc<dyn Coloring>) -> Result<Forward> {
        Ok(match self {
            Reduction::FsToRt => Forward::Fs(FsColoring::new(f)?),
            Reduction::TsToRt => Forward::TsRt(TsRtColoring::new(f)),
            Reduction::TsToFs => Forward::Identity(f),
            Reduction::RrtToRt { k } => Forward::Galvin(GalvinColoring::new(f, *k)?),
            Reduction::Rrt2ToFs => Forward::Rrt2Fs(Rrt2FsColoring::new(f)),
        })
    }

    pub fn backward(&self, h: &Seq) -> Result<Seq> {
        match self {
            Reduction::FsToRt => fs_backward(h),
            Reduction::TsToFs => ts_fs_backward(h),
            _ => Ok(h.clone()),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::RrtToRt { k } => write!(f, "RRT_to_RT(k={k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Reduction::parse(s, None)
    }
}

/// `H⁻ = {x − 1 : x ∈ H}`.
pub fn fs_backward(h: &Seq) -> Result<Seq> {
    if h.contains_elem(0) {
        return Err(Error::InvalidInput(format!("{h} contains 0, which has no predecessor")));
    }
    Ok(Seq::from_sorted_unchecked(h.iter().map(|x| x - 1).collect()))
}

/// `X ∖ {min X}`.
pub fn ts_fs_backward(x: &Seq) -> Result<Seq> {
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!("{x} needs at least two points")));
    }
    Ok(Seq::from_sorted_unchecked(x[1..].to_vec()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Solution of the target instance.
    pub target_set: Seq,
    /// What the backward map made of it.
    pub source_set: Seq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub barrier: String,
    pub target_barrier: String,
    pub ground: Vec<u64>,
    pub min_size: usize,
    /// Target elements colored by the forward map.
    pub queried: usize,
    pub checked_witnesses: usize,
    /// Target solutions too small for the backward map.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
    pub max_recursion_chain: Option<usize>,
    /// Forward colors outside `0..k` (Galvin reduction only).
    pub range_violations: usize,
}

impl ReductionReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty() && self.range_violations == 0
    }
}

/// Maps every target solution `H ⊆ G` with `|H| ≥ min_size` back and checks
/// the source property on the result.
///
/// Thin checks use the universe of colors seen on `front(B, G)` together with
/// `G` itself and `{0, 1}`.
pub fn check_reduction(
    r: &Reduction,
    f: Arc<dyn Coloring>,
    ground: &[u64],
    min_size: usize,
) -> Result<ReductionReport> {
    let source_barrier = f.barrier().clone();
    let mut ground = ground.to_vec();
    ground.sort_unstable();
    ground.dedup();
    if let Some(k) = r.source_bound() {
        let domain: Vec<u64> = match ground.last() {
            Some(&m) => (0..=m).collect(),
            None => Vec::new(),
        };
        check_bounded(f.as_ref(), &domain, k)?;
    }

    let g = r.forward(Arc::clone(&f))?;
    let target_base = g.barrier().base();
    let target_ground: Vec<u64> = ground.iter().copied().filter(|&x| target_base.contains(x)).collect();
    let target = ColoredFront::new(&g, &target_ground)?;

    let range_violations = match r {
        Reduction::RrtToRt { k } => target.entries().filter(|(_, c)| *c >= *k as u64).count(),
        _ => 0,
    };

    let source_ground: Vec<u64> = match r {
        Reduction::FsToRt => fs_backward(&Seq::from_sorted_unchecked(target_ground.clone()))?.into_vec(),
        _ => target_ground.clone(),
    };
    let source = ColoredFront::new(f.as_ref(), &source_ground)?;
    let source_property = match r {
        Reduction::FsToRt => Property::Free,
        Reduction::TsToRt | Reduction::TsToFs => {
            let universe: BTreeSet<u64> = thin_universe(f.as_ref(), &ground, ground.iter().copied())?
                .into_iter()
                .chain([0, 1])
                .collect();
            Property::Thin(universe)
        }
        Reduction::RrtToRt { .. } | Reduction::Rrt2ToFs => Property::Rainbow,
    };

    let mut report = ReductionReport {
        reduction: r.to_string(),
        barrier: source_barrier.to_string(),
        target_barrier: g.barrier().to_string(),
        ground: ground.clone(),
        min_size,
        queried: target.len(),
        checked_witnesses: 0,
        skipped: 0,
        counterexamples: Vec::new(),
        max_recursion_chain: None,
        range_violations,
    };

    for w in target.find_all(&r.target_property(), min_size) {
        let pulled = match r {
            Reduction::FsToRt => match w.set.split_last() {
                Some((_, rest)) => fs_backward(&Seq::from_sorted_unchecked(rest.to_vec()))?,
                None => Seq::empty(),
            },
            Reduction::TsToFs if w.set.len() < 2 => {
                report.skipped += 1;
                continue;
            }
            _ => r.backward(&w.set)?,
        };
        report.checked_witnesses += 1;
        let mask = source
            .mask_of(&pulled)
            .ok_or_else(|| Error::Bug(format!("backward image {pulled} leaves the source ground")))?;
        if source.check(&source_property, mask).is_none() {
            report.counterexamples.push(Counterexample {
                target_set: w.set,
                source_set: pulled,
            });
        }
    }
    report.max_recursion_chain = g.max_chain();
    Ok(report)
}

/// Runs [`check_reduction`] over many instances in parallel; results come
/// back in input order.
pub fn check_many(
    r: &Reduction,
    instances: &[Arc<dyn Coloring>],
    ground: &[u64],
    min_size: usize,
) -> Vec<Result<ReductionReport>> {
    instances
        .par_iter()
        .map(|f| check_reduction(r, Arc::clone(f), ground, min_size))
        .collect()
}
