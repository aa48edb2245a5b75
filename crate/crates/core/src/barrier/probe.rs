//! Finite checks of the barrier axioms.

use serde::Serialize;

use super::{BarrierSpec, Classification, StepOutcome};
use crate::error::{Error, Result};
use crate::seq::Seq;

/// Largest ground set `density_probe` will stream all subsets of.
pub const MAX_PROBE_GROUND: usize = 22;

/// True iff no member of `front` is a strict subset of another.
pub fn check_sperner(front: &[Seq]) -> bool {
    let mut by_len: Vec<&Seq> = front.iter().collect();
    by_len.sort_by_key(|s| s.len());
    for (i, small) in by_len.iter().enumerate() {
        for big in &by_len[i + 1..] {
            if big.len() > small.len() && small.is_subset_of(big) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityViolation {
    pub stream: Seq,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub hit: usize,
    pub inconclusive: usize,
    pub violations: Vec<DensityViolation>,
}

/// Streams every nonempty `Y ⊆ ground ∩ base` (ascending) through the stop
/// rule and cross-checks it against prefix-by-prefix classification.
pub fn density_probe(spec: &BarrierSpec, ground: &[u64]) -> Result<DensityReport> {
    let base = spec.base();
    let mut ground: Vec<u64> = ground.iter().copied().filter(|&x| base.contains(x)).collect();
    ground.sort_unstable();
    ground.dedup();
    if ground.len() > MAX_PROBE_GROUND {
        return Err(Error::TooLarge(format!(
            "density probe over {} points (limit {MAX_PROBE_GROUND})",
            ground.len()
        )));
    }
    let mut report = DensityReport {
        hit: 0,
        inconclusive: 0,
        violations: Vec::new(),
    };
    let mut stream = Vec::with_capacity(ground.len());
    for mask in 1u64..(1u64 << ground.len()) {
        stream.clear();
        stream.extend(
            ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x),
        );
        probe_stream(spec, &stream, &mut report)?;
    }
    Ok(report)
}

fn probe_stream(spec: &BarrierSpec, stream: &[u64], report: &mut DensityReport) -> Result<()> {
    let mut violation = |detail: String| {
        report.violations.push(DensityViolation {
            stream: Seq::from_sorted_unchecked(stream.to_vec()),
            detail,
        })
    };
    let mut found = None;
    for len in 0..=stream.len() {
        let class = spec.classify_slice(&stream[..len]);
        match (found, class) {
            (None, Classification::ProperPrefix) => {}
            (None, Classification::Element) => found = Some(len),
            (Some(_), Classification::Overrun) => {}
            (None, Classification::Overrun) => {
                violation(format!("prefix of length {len} overruns with no element prefix"));
                return Ok(());
            }
            (_, other) => {
                violation(format!("prefix of length {len} classified {other:?}"));
                return Ok(());
            }
        }
    }
    let stepped = spec.step(stream)?;
    match (found, stepped) {
        (Some(len), StepOutcome::Element(t)) if t.len() == len => {
            report.hit += 1;
        }
        (None, StepOutcome::Inconclusive) => report.inconclusive += 1,
        (found, stepped) => violation(format!(
            "step returned {stepped:?} but prefix classification found {found:?}"
        )),
    }
    Ok(())
}
