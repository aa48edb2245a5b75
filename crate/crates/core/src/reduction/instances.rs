//! Seeded instance generators for [`check_reduction`](super::check_reduction).
//!
//! Instances are tables over `front(B, [0, max G])`. Every query the forward
//! maps make stays inside that interval: variants insert points below
//! `max(s)`, rank predecessors live in `[0, max(s)]`, and `s ⊖ 1` only
//! shrinks coordinates.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::barrier::BarrierSpec;
use crate::error::Result;
use crate::seq::Seq;
use crate::solver::{Builtin, Color, Coloring, ColoringSpec};

use super::rank::EnumRank;
use super::Reduction;

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub spec: ColoringSpec,
}

impl Instance {
    pub fn coloring(&self, barrier: &BarrierSpec) -> Arc<dyn Coloring> {
        Arc::new(self.spec.clone().on(barrier.clone()))
    }
}

/// `front(B, [0, max G])` in enumeration order.
pub fn domain(barrier: &BarrierSpec, ground: &[u64]) -> Vec<Seq> {
    let top = ground.iter().copied().max().unwrap_or(0);
    let interval: Vec<u64> = (0..=top).collect();
    EnumRank::sorted(barrier.front(&interval))
}

/// Uniform colors in `0..colors`.
pub fn random_table(domain: &[Seq], colors: Color, rng: &mut impl Rng) -> ColoringSpec {
    ColoringSpec::table(domain.iter().map(|s| (s.clone(), rng.gen_range(0..colors.max(1)))))
}

/// A `k`-bounded table: the domain is shuffled and cut into runs of random
/// length at most `k`, one fresh color per run.
pub fn random_bounded_table(domain: &[Seq], k: usize, rng: &mut impl Rng) -> ColoringSpec {
    let mut order: Vec<&Seq> = domain.iter().collect();
    order.shuffle(rng);
    let offset: Color = rng.gen_range(0..4);
    let mut entries = Vec::with_capacity(order.len());
    let mut color = offset;
    let mut left = 0usize;
    for s in order {
        if left == 0 {
            color += 1;
            left = rng.gen_range(1..=k.max(1));
        }
        entries.push((s.clone(), color));
        left -= 1;
    }
    ColoringSpec::table(entries).with_bound(k)
}

fn table_from(domain: &[Seq], rule: impl Fn(usize, &Seq) -> Color) -> ColoringSpec {
    ColoringSpec::table(domain.iter().enumerate().map(|(i, s)| (s.clone(), rule(i, s))))
}

/// Hand-made instances aimed at the edge cases of each reduction.
pub fn adversarial(r: &Reduction, barrier: &BarrierSpec, ground: &[u64]) -> Vec<Instance> {
    let dom = domain(barrier, ground);
    let top = ground.iter().copied().max().unwrap_or(0);
    let mut out: Vec<(String, ColoringSpec)> = Vec::new();
    match r.source_bound() {
        None => {
            for b in [
                Builtin::MaxPlusOne,
                Builtin::MinMinusOne,
                Builtin::Min,
                Builtin::Max,
                Builtin::Constant(0),
                Builtin::Constant(1),
                Builtin::Constant(top),
                Builtin::SumMod(top + 1),
                Builtin::MinParity,
            ] {
                out.push((format!("builtin:{}", ColoringSpec::builtin(b.clone())), ColoringSpec::builtin(b)));
            }
            out.push((
                "second_minus_one".into(),
                table_from(&dom, |_, s| s.get(1).map_or(0, |x| x.saturating_sub(1))),
            ));
            out.push((
                "last_gap".into(),
                table_from(&dom, |_, s| s.last().map_or(0, |x| x + 1)),
            ));
            out.push(("rank_mod_ground".into(), table_from(&dom, |i, _| i as Color % (top + 1))));
        }
        Some(k) => {
            let n = dom.len().max(1);
            let blocks = n.div_ceil(k) as Color;
            out.push(("injective_code".into(), ColoringSpec::builtin(Builtin::Code)));
            out.push(("injective_rank".into(), ColoringSpec::builtin(Builtin::Rank)));
            out.push((
                "consecutive_twins".into(),
                table_from(&dom, |i, _| (i / k) as Color).with_bound(k),
            ));
            out.push((
                "spread_twins".into(),
                table_from(&dom, |i, _| i as Color % blocks).with_bound(k),
            ));
            out.push((
                "reversed_twins".into(),
                table_from(&dom, |i, _| ((n - 1 - i) / k) as Color).with_bound(k),
            ));
        }
    }
    out.into_iter()
        .map(|(label, spec)| Instance {
            label: format!("adversarial:{label}"),
            spec,
        })
        .collect()
}

/// The adversarial instances followed by `random` seeded ones.
pub fn suite(
    r: &Reduction,
    barrier: &BarrierSpec,
    ground: &[u64],
    random: usize,
    seed: u64,
) -> Result<Vec<Instance>> {
    let dom = domain(barrier, ground);
    let top = ground.iter().copied().max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = adversarial(r, barrier, ground);
    for i in 0..random {
        let spec = match r.source_bound() {
            Some(k) => random_bounded_table(&dom, k, &mut rng),
            None => random_table(&dom, top + 3, &mut rng),
        };
        out.push(Instance {
            label: format!("random:{seed}:{i}"),
            spec,
        });
    }
    Ok(out)
}
