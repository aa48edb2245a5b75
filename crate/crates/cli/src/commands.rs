//! One function per subcommand. Each returns both renderings of its report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Result};
use barriers::barrier::{check_sperner, density_probe};
use barriers::diag::{explore, verify_defeat_rainbow, verify_defeat_thin, DefeaterKind, OracleFamily, StagedColoring};
use barriers::reduction::instances::{suite, Instance};
use barriers::reduction::{check_many, Reduction, ReductionReport};
use barriers::solver::{find, find_all, thin_universe, Coloring, ColoringSpec, Property};
use barriers::{BarrierSpec, Ordinal, Seq};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check ran and found violations or counterexamples.
    Failed,
    /// An internal invariant broke.
    Bug,
}

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub status: Status,
}

fn describe_ground(ground: &[u64]) -> String {
    match (ground.first(), ground.last()) {
        (Some(&lo), Some(&hi)) if hi - lo + 1 == ground.len() as u64 => {
            format!("{lo}..={hi} ({} points)", ground.len())
        }
        (Some(_), Some(_)) => format!("{ground:?} ({} points)", ground.len()),
        _ => "empty".into(),
    }
}

pub fn front(b: &BarrierSpec, ground: &[u64]) -> Outcome {
    let elems = b.front(ground);
    let mut text = format!(
        "barrier: {b}\nground: {}\nelements: {}\n",
        describe_ground(ground),
        elems.len()
    );
    for s in &elems {
        let _ = writeln!(text, "{s}");
    }
    Outcome {
        text,
        json: json!({
            "barrier": b.to_json(),
            "ground": ground,
            "count": elems.len(),
            "elements": elems,
        }),
        status: Status::Ok,
    }
}

pub fn check(b: &BarrierSpec, ground: &[u64]) -> Result<Outcome> {
    let elems = b.front(ground);
    let sperner = check_sperner(&elems);
    let density = density_probe(b, ground)?;
    let ok = sperner && density.violations.is_empty();
    let mut text = format!(
        "barrier: {b}\nground: {}\nfront: {} elements\nsperner={}\ndensity hits={} inconclusive={} violations={}\n",
        describe_ground(ground),
        elems.len(),
        if sperner { "ok" } else { "FAILED" },
        density.hit,
        density.inconclusive,
        density.violations.len(),
    );
    for v in &density.violations {
        let _ = writeln!(text, "violation on {}: {}", v.stream, v.detail);
    }
    Ok(Outcome {
        text,
        json: json!({
            "barrier": b.to_json(),
            "ground": ground,
            "front_size": elems.len(),
            "sperner": sperner,
            "density": density,
        }),
        status: if ok { Status::Ok } else { Status::Failed },
    })
}

pub fn variant(b: &BarrierSpec, s: &Seq, k: u64) -> Result<Outcome> {
    let v = b.variant(s, k)?;
    Ok(Outcome {
        text: format!("{v}\n"),
        json: json!({ "barrier": b.to_json(), "seq": s, "k": k, "variant": v }),
        status: Status::Ok,
    })
}

pub fn ordertype(b: &BarrierSpec) -> Result<Outcome> {
    let ot = b.order_type()?;
    let text = if ot.exact {
        format!("{}\n", ot.ordinal)
    } else {
        format!("{} (upper bound)\n", ot.ordinal)
    };
    Ok(Outcome {
        text,
        json: json!({ "barrier": b.to_json(), "order_type": ot.ordinal, "exact": ot.exact }),
        status: Status::Ok,
    })
}

pub struct ReduceArgs<'a> {
    pub reduction: Reduction,
    pub barrier: &'a BarrierSpec,
    pub coloring: Option<ColoringSpec>,
    pub ground: &'a [u64],
    pub check: bool,
    pub min_size: usize,
    pub random: usize,
    pub seed: u64,
}

pub fn reduce(a: ReduceArgs<'_>) -> Result<Outcome> {
    if a.check {
        return reduce_check(a);
    }
    let Some(spec) = a.coloring else {
        bail!("reduce without --check needs --coloring");
    };
    let f: Arc<dyn Coloring> = Arc::new(spec.on(a.barrier.clone()));
    let g = a.reduction.forward(f)?;
    let target = g.barrier().clone();
    let base = target.base();
    let target_ground: Vec<u64> = a.ground.iter().copied().filter(|&x| base.contains(x)).collect();
    let mut text = format!("reduction: {}\ntarget barrier: {target}\n", a.reduction);
    let mut values = Vec::new();
    for s in target.front(&target_ground) {
        let c = g.color(&s)?;
        let _ = writeln!(text, "{s} -> {c}");
        values.push(json!({ "seq": s, "color": c }));
    }
    let chain = g.max_chain();
    if let Some(d) = chain {
        let _ = writeln!(text, "max recursion chain: {d}");
    }
    Ok(Outcome {
        text,
        json: json!({
            "reduction": a.reduction.to_string(),
            "barrier": a.barrier.to_json(),
            "target_barrier": target.to_json(),
            "ground": a.ground,
            "values": values,
            "max_recursion_chain": chain,
        }),
        status: Status::Ok,
    })
}

fn reduce_check(a: ReduceArgs<'_>) -> Result<Outcome> {
    let mut instances: Vec<Instance> = Vec::new();
    if let Some(spec) = a.coloring {
        instances.push(Instance {
            label: "given".into(),
            spec,
        });
    }
    if a.random > 0 || instances.is_empty() {
        instances.extend(suite(&a.reduction, a.barrier, a.ground, a.random, a.seed)?);
    }
    let colorings: Vec<Arc<dyn Coloring>> = instances.iter().map(|i| i.coloring(a.barrier)).collect();
    let results = check_many(&a.reduction, &colorings, a.ground, a.min_size);

    let mut status = Status::Ok;
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    let mut checked = 0usize;
    let mut range_violations = 0usize;
    let mut max_chain: Option<usize> = None;
    let mut failures = String::new();
    for (inst, res) in instances.iter().zip(results) {
        let rep: ReductionReport = match res {
            Ok(rep) => rep,
            Err(e) if e.is_bug() => {
                status = Status::Bug;
                let _ = writeln!(failures, "BUG in {}: {e}", inst.label);
                rows.push(json!({ "label": inst.label, "error": e.to_string() }));
                continue;
            }
            Err(e) => bail!("instance {}: {e}", inst.label),
        };
        checked += rep.checked_witnesses;
        range_violations += rep.range_violations;
        max_chain = max_chain.max(rep.max_recursion_chain);
        if !rep.is_clean() && status == Status::Ok {
            status = Status::Failed;
        }
        for c in &rep.counterexamples {
            let _ = writeln!(
                failures,
                "counterexample in {}: target {} pulls back to {}",
                inst.label, c.target_set, c.source_set
            );
            counterexamples.push(json!({
                "instance": inst.label,
                "target_set": c.target_set,
                "source_set": c.source_set,
            }));
        }
        if rep.range_violations > 0 {
            let _ = writeln!(failures, "range violations in {}: {}", inst.label, rep.range_violations);
        }
        rows.push(json!({
            "label": inst.label,
            "queried": rep.queried,
            "checked_witnesses": rep.checked_witnesses,
            "skipped": rep.skipped,
            "counterexamples": rep.counterexamples.len(),
            "max_recursion_chain": rep.max_recursion_chain,
            "range_violations": rep.range_violations,
        }));
    }
    let mut text = format!(
        "reduction: {}\nbarrier: {}\nground: {}\nmin size: {}\ninstances: {}\nchecked witnesses: {checked}\ncounterexamples: {}\n",
        a.reduction,
        a.barrier,
        describe_ground(a.ground),
        a.min_size,
        instances.len(),
        counterexamples.len(),
    );
    if let Some(d) = max_chain {
        let _ = writeln!(text, "max recursion chain: {d}");
    }
    if matches!(a.reduction, Reduction::RrtToRt { .. }) {
        let _ = writeln!(text, "range violations: {range_violations}");
    }
    text.push_str(&failures);
    Ok(Outcome {
        text,
        json: json!({
            "reduction": a.reduction.to_string(),
            "barrier": a.barrier.to_json(),
            "ground": a.ground,
            "min_size": a.min_size,
            "seed": a.seed,
            "random": a.random,
            "checked_witnesses": checked,
            "counterexamples": counterexamples,
            "range_violations": range_violations,
            "max_recursion_chain": max_chain,
            "instances": rows,
        }),
        status,
    })
}

pub struct SolveArgs<'a> {
    pub property: &'a str,
    pub barrier: &'a BarrierSpec,
    pub coloring: ColoringSpec,
    pub ground: &'a [u64],
    pub universe: Option<Vec<u64>>,
    pub min_size: usize,
    pub all: bool,
}

pub fn solve(a: SolveArgs<'_>) -> Result<Outcome> {
    let f = a.coloring.on(a.barrier.clone());
    let property = match a.property {
        "mono" => Property::Mono,
        "free" => Property::Free,
        "rainbow" => Property::Rainbow,
        "thin" => Property::Thin(match a.universe {
            Some(u) => u.into_iter().collect(),
            None => thin_universe(&f, a.ground, [0, 1])?,
        }),
        other => bail!("unknown property {other:?}"),
    };
    let universe: Option<&BTreeSet<u64>> = match &property {
        Property::Thin(u) => Some(u),
        _ => None,
    };
    let mut text = format!(
        "property: {}\nbarrier: {}\nground: {}\nmin size: {}\n",
        property.name(),
        a.barrier,
        describe_ground(a.ground),
        a.min_size
    );
    if let Some(u) = universe {
        let _ = writeln!(text, "universe: {u:?}");
    }
    let json = if a.all {
        let all = find_all(&property, &f, a.ground, a.min_size)?;
        let _ = writeln!(text, "witnesses: {}", all.len());
        for w in &all {
            let _ = writeln!(text, "{}", w.set);
        }
        json!({ "property": property.name(), "min_size": a.min_size, "universe": universe, "count": all.len(), "witnesses": all })
    } else {
        let w = find(&property, &f, a.ground, a.min_size)?;
        match &w {
            Some(w) => {
                let _ = writeln!(text, "witness: {}", w.set);
            }
            None => text.push_str("witness: none\n"),
        }
        json!({ "property": property.name(), "min_size": a.min_size, "universe": universe, "witness": w })
    };
    Ok(Outcome {
        text,
        json,
        status: Status::Ok,
    })
}

pub struct DiagArgs<'a> {
    pub kind: DefeaterKind,
    pub alpha: Ordinal,
    pub family: OracleFamily,
    pub verify: Option<(u64, Option<u64>)>,
    pub bound: u64,
    pub ground: &'a [u64],
}

pub fn diag(a: DiagArgs<'_>) -> Result<Outcome> {
    let col = StagedColoring::new(a.alpha, a.family, a.kind)?;
    let Some((e, i)) = a.verify else {
        let rep = explore(&col, a.ground)?;
        let ok = rep.total && (a.kind == DefeaterKind::Thin || rep.two_bounded());
        let text = format!(
            "kind: {}\nalpha: {}\nground: {}\nstages: {}\nelements: {}\ntotal: {}\nmax multiplicity: {}\ncolors used more than twice: {}\n",
            rep.kind,
            rep.alpha,
            describe_ground(a.ground),
            rep.stages,
            rep.elements,
            rep.total,
            rep.max_multiplicity,
            rep.over_two.len()
        );
        return Ok(Outcome {
            text,
            json: serde_json::to_value(&rep)?,
            status: if ok { Status::Ok } else { Status::Failed },
        });
    };
    let rep = match a.kind {
        DefeaterKind::Thin => {
            let Some(i) = i else {
                bail!("thin verification needs i, as in --verify e=0,i=1");
            };
            verify_defeat_thin(&col, e, i, a.bound)?
        }
        DefeaterKind::Rainbow => verify_defeat_rainbow(&col, e, a.bound)?,
    };
    let mut text = format!(
        "kind: {}\nalpha: {}\ne: {e}\n{}bound: {}\nstages searched: {}\n",
        rep.kind,
        rep.alpha,
        rep.i.map(|i| format!("i: {i}\n")).unwrap_or_default(),
        rep.bound,
        rep.stages_searched
    );
    match &rep.found {
        Some(found) => {
            let _ = writeln!(text, "found: {}", serde_json::to_string(found)?);
        }
        None => text.push_str("found: none\n"),
    }
    if let Some(d) = &rep.diagnostic {
        let _ = writeln!(text, "diagnostic: {}", serde_json::to_string(d)?);
    }
    Ok(Outcome {
        text,
        json: serde_json::to_value(&rep)?,
        status: if rep.is_bug() { Status::Bug } else { Status::Ok },
    })
}
