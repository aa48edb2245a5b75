//! Staged colorings against a straight-line replay of the substage loops.

use std::collections::BTreeMap;
use std::sync::Arc;

use barriers::barrier::make_canonical;
use barriers::coding::pair;
use barriers::diag::{
    correct_stage, explore, f_approx, rainbow_defeater, thin_defeater, verify_defeat_rainbow, verify_defeat_thin,
    Defeat, DefeaterKind, Diagnostic, OracleEntry, OracleFamily, StagedColoring,
};
use barriers::solver::Coloring;
use barriers::{GroundSet, Ordinal, Seq};
use rayon::prelude::*;

fn s(v: &[u64]) -> Seq {
    Seq::new(v.to_vec()).unwrap()
}

fn o(text: &str) -> Ordinal {
    text.parse().unwrap()
}

/// `(e, membership, delay)`.
type Mock = Vec<(u64, fn(u64) -> bool, u64)>;

fn mock() -> Mock {
    vec![
        (0, |x| x % 2 == 0, 0),
        (1, |x| x % 2 == 1, 2),
        (2, |x| x % 3 == 0, 1),
        (3, |x| [1, 4, 5, 9].contains(&x), 0),
        (5, |_| true, 4),
    ]
}

fn family_of(m: &Mock) -> OracleFamily {
    let set = |e: u64| match e {
        0 => GroundSet::evens(),
        1 => GroundSet::progression(1, 2).unwrap(),
        2 => GroundSet::progression(0, 3).unwrap(),
        3 => GroundSet::finite([1, 4, 5, 9]),
        _ => GroundSet::progression(0, 1).unwrap(),
    };
    OracleFamily::new(
        m.iter()
            .map(|&(e, _, delay)| OracleEntry { e, set: set(e), delay })
            .collect(),
    )
    .unwrap()
}

fn g(m: &Mock, e: u64, x: u64, stage: &[u64]) -> bool {
    m.iter()
        .find(|t| t.0 == e)
        .is_some_and(|&(_, member, delay)| stage[0] > delay && member(x))
}

/// `j ↦ (e, i)` with `(e + i)(e + i + 1)/2 + i = j`, by walking diagonals.
fn unpair(j: u64) -> (u64, u64) {
    let mut d = 0;
    while (d + 1) * (d + 2) / 2 <= j {
        d += 1;
    }
    let i = j - d * (d + 1) / 2;
    (d - i, i)
}

fn thin_labels(m: &Mock, stage: &[u64]) -> Vec<u64> {
    let s1 = stage[0];
    let mut f: Vec<Option<u64>> = vec![None; s1 as usize];
    for j in 0..s1 {
        let (e, i) = unpair(j);
        let approx: Vec<u64> = (0..s1).filter(|&x| g(m, e, x, stage)).take(j as usize + 1).collect();
        if approx.len() as u64 != j + 1 {
            continue;
        }
        for x in approx {
            if f[x as usize].is_none() {
                f[x as usize] = Some(i);
                break;
            }
        }
    }
    f.into_iter().map(|v| v.unwrap_or(1)).collect()
}

/// Rainbow labels: the `m` of the color `⟨m, s⟩`.
fn rainbow_labels(m: &Mock, stage: &[u64]) -> Vec<u64> {
    let s1 = stage[0];
    let mut f: Vec<Option<u64>> = vec![None; s1 as usize];
    for e in 0..s1 {
        let free: Vec<u64> = (0..s1)
            .filter(|&x| f[x as usize].is_none() && g(m, e, x, stage))
            .take(2)
            .collect();
        if let [a, b] = free[..] {
            f[a as usize] = Some(a);
            f[b as usize] = Some(a);
        }
    }
    f.into_iter().enumerate().map(|(l, v)| v.unwrap_or(l as u64)).collect()
}

fn code(stage: &[u64]) -> u64 {
    stage.iter().map(|&x| 1u64 << x).sum()
}

fn alphas() -> Vec<Ordinal> {
    ["1", "2", "3", "w", "w + 1", "w*2"].iter().map(|a| o(a)).collect()
}

#[test]
fn thin_matches_straight_line_replay() {
    let m = mock();
    let ground: Vec<u64> = (0..=12).collect();
    for alpha in alphas() {
        let col = thin_defeater(alpha.clone(), family_of(&m)).unwrap();
        for stage in make_canonical(alpha.clone()).front(&ground) {
            let expected = thin_labels(&m, &stage);
            let got: Vec<u64> = (0..stage[0]).map(|x| col.value(x, &stage).unwrap()).collect();
            assert_eq!(got, expected, "alpha {alpha}, stage {stage}");
        }
    }
}

#[test]
fn rainbow_matches_straight_line_replay() {
    let m = mock();
    let ground: Vec<u64> = (0..=12).collect();
    for alpha in alphas() {
        let col = rainbow_defeater(alpha.clone(), family_of(&m)).unwrap();
        for stage in make_canonical(alpha.clone()).front(&ground) {
            let labels = rainbow_labels(&m, &stage);
            for (x, &label) in labels.iter().enumerate() {
                let expected = pair(label, code(&stage)).unwrap();
                assert_eq!(col.value(x as u64, &stage).unwrap(), expected, "alpha {alpha}, stage {stage}");
            }
        }
    }
}

#[test]
fn documented_stage_traces() {
    let evens = OracleFamily::new(vec![OracleEntry {
        e: 0,
        set: GroundSet::evens(),
        delay: 0,
    }])
    .unwrap();
    assert_eq!(f_approx(&evens, 0, 0, &[5]).unwrap(), Some(vec![0]));
    assert_eq!(f_approx(&evens, 0, 0, &[1]).unwrap(), Some(vec![0]));
    assert_eq!(f_approx(&evens, 0, 1, &[1]).unwrap(), None);
    assert_eq!(f_approx(&OracleFamily::empty(), 0, 0, &[9]).unwrap(), None);

    let thin = thin_defeater(Ordinal::one(), evens.clone()).unwrap();
    assert_eq!(thin.value(0, &s(&[5])).unwrap(), 0);
    let rainbow = rainbow_defeater(Ordinal::one(), evens).unwrap();
    let c = pair(0, code(&[5])).unwrap();
    assert_eq!(rainbow.value(0, &s(&[5])).unwrap(), c);
    assert_eq!(rainbow.value(2, &s(&[5])).unwrap(), c);
    assert_ne!(rainbow.value(1, &s(&[5])).unwrap(), c);

    let empty_thin = thin_defeater(o("w"), OracleFamily::empty()).unwrap();
    let empty_rainbow = rainbow_defeater(o("w"), OracleFamily::empty()).unwrap();
    for stage in make_canonical(o("w")).front(&(0..=9).collect::<Vec<_>>()) {
        let values: Vec<u64> = (0..stage[0]).map(|x| empty_rainbow.value(x, &stage).unwrap()).collect();
        let mut distinct = values.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), values.len());
        assert!((0..stage[0]).all(|x| empty_thin.value(x, &stage).unwrap() == 1));
    }
}

#[test]
fn stages_are_total_and_rainbow_is_two_bounded() {
    let ground: Vec<u64> = (0..=12).collect();
    for alpha in [o("1"), o("2"), o("w")] {
        let thin = thin_defeater(alpha.clone(), family_of(&mock())).unwrap();
        assert!(explore(&thin, &ground).unwrap().total);
        let rainbow = rainbow_defeater(alpha.clone(), family_of(&mock())).unwrap();
        let rep = explore(&rainbow, &ground).unwrap();
        assert!(rep.total && rep.two_bounded(), "{rep:?}");

        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for t in rainbow.barrier().front(&ground) {
            *counts.entry(rainbow.color(&t).unwrap()).or_default() += 1;
        }
        assert!(counts.values().all(|&n| n <= 2));
        assert_eq!(rep.max_multiplicity, counts.values().copied().max().unwrap());
    }
}

fn query_all(col: &StagedColoring, elems: &[Seq], reverse: bool) -> Vec<u64> {
    let mut out = vec![0; elems.len()];
    let order: Vec<usize> = if reverse {
        (0..elems.len()).rev().collect()
    } else {
        (0..elems.len()).collect()
    };
    for i in order {
        out[i] = col.color(&elems[i]).unwrap();
    }
    out
}

#[test]
fn evaluation_is_order_and_thread_independent() {
    let ground: Vec<u64> = (0..=11).collect();
    for kind in [DefeaterKind::Thin, DefeaterKind::Rainbow] {
        let fresh = || Arc::new(StagedColoring::new(o("w"), family_of(&mock()), kind).unwrap());
        let elems = fresh().barrier().front(&ground);
        let forward = query_all(&fresh(), &elems, false);
        let backward = query_all(&fresh(), &elems, true);
        let shared = fresh();
        let parallel: Vec<u64> = elems.par_iter().map(|t| shared.color(t).unwrap()).collect();
        let again: Vec<u64> = elems.par_iter().rev().map(|t| shared.color(t).unwrap()).collect();
        assert_eq!(forward, backward);
        assert_eq!(forward, parallel);
        assert_eq!(forward.iter().rev().copied().collect::<Vec<_>>(), again);
    }
}

fn check_thin_witness(m: &Mock, col: &StagedColoring, e: u64, i: u64, found: &Defeat) {
    let Defeat::Thin { m: x, stage, color } = found else {
        panic!("expected a thin witness");
    };
    let member = m.iter().find(|t| t.0 == e).unwrap().1;
    assert!(member(*x) && stage.iter().all(|&y| member(y)));
    assert!(*x < stage[0]);
    assert_eq!(*color, i);
    assert_eq!(col.value(*x, stage).unwrap(), i);
    assert_eq!(thin_labels(m, stage)[*x as usize], i);
}

#[test]
fn thin_defeat_is_found_and_correct() {
    let m = mock();
    for alpha in [o("1"), o("w")] {
        let col = thin_defeater(alpha, family_of(&m)).unwrap();
        for (e, i) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (2, 3), (5, 1)] {
            let rep = verify_defeat_thin(&col, e, i, 40).unwrap();
            let found = rep.found.as_ref().unwrap_or_else(|| panic!("e={e} i={i}: {rep:?}"));
            check_thin_witness(&m, &col, e, i, found);
        }
        let rep = verify_defeat_thin(&col, 0, 0, 1).unwrap();
        assert!(matches!(rep.diagnostic, Some(Diagnostic::BoundTooSmall(_))), "{rep:?}");
        let rep = verify_defeat_thin(&col, 4, 0, 40).unwrap();
        assert_eq!(rep.diagnostic, Some(Diagnostic::NotInFamily));
    }
}

#[test]
fn rainbow_defeat_is_found_and_correct() {
    let m = mock();
    for alpha in [o("1"), o("2"), o("w")] {
        let col = rainbow_defeater(alpha, family_of(&m)).unwrap();
        for e in [0, 1, 2, 5] {
            let rep = verify_defeat_rainbow(&col, e, 40).unwrap();
            let Some(Defeat::Rainbow { m: a, l: b, stage, .. }) = &rep.found else {
                panic!("e={e}: {rep:?}");
            };
            let member = m.iter().find(|t| t.0 == e).unwrap().1;
            assert!(a < b && member(*a) && member(*b));
            assert!(stage.iter().all(|&y| member(y)));
            let labels = rainbow_labels(&m, stage);
            assert_eq!(labels[*a as usize], labels[*b as usize]);
            let table = col.stage(stage).unwrap();
            assert_eq!(table.labels, labels);
            if let (Ok(x), Ok(y)) = (col.value(*a, stage), col.value(*b, stage)) {
                assert_eq!(x, y);
            }
        }
        let rep = verify_defeat_rainbow(&col, 3, 40).unwrap();
        assert!(rep.found.is_some() || !rep.is_bug(), "{rep:?}");
        let rep = verify_defeat_rainbow(&col, 7, 40).unwrap();
        assert_eq!(rep.diagnostic, Some(Diagnostic::NotInFamily));
    }
    let singleton = OracleFamily::new(vec![OracleEntry {
        e: 0,
        set: GroundSet::finite([6]),
        delay: 0,
    }])
    .unwrap();
    let col = rainbow_defeater(Ordinal::one(), singleton).unwrap();
    let rep = verify_defeat_rainbow(&col, 0, 12).unwrap();
    assert!(rep.found.is_none());
    assert!(matches!(rep.diagnostic, Some(Diagnostic::BoundTooSmall(_))), "{rep:?}");
}

#[test]
fn wrong_kind_is_reported() {
    let thin = thin_defeater(Ordinal::one(), family_of(&mock())).unwrap();
    assert_eq!(verify_defeat_rainbow(&thin, 0, 12).unwrap().diagnostic, Some(Diagnostic::WrongKind));
}

#[test]
fn oracle_is_correct_along_the_barrier() {
    let m = mock();
    let fam = family_of(&m);
    for alpha in [o("1"), o("w")] {
        let stages = make_canonical(alpha);
        for &(e, member, _) in m.iter().filter(|t| t.0 != 3) {
            for k in 0..=8 {
                let st = correct_stage(&stages, &fam, e, k, 64).unwrap().unwrap_or_else(|| panic!("e={e} k={k}"));
                assert!(st[0] > k && st.iter().all(|&y| member(y)));
                assert!((0..=k).all(|x| g(&m, e, x, &st) == member(x)));
            }
        }
    }
}
