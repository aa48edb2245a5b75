//! Forward functionals: each wraps a source coloring and answers queries
//! on demand, looking only at the queried element, the spec and `f`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::barrier::{lex_cmp, make_plus, Base, BarrierSpec};
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::solver::{Color, Coloring};

use super::rank::EnumRank;

/// Longest `<_lex`-descending chain the free-set recursion may follow
/// before it is declared broken.
pub const CHAIN_GUARD: usize = 1 << 20;

fn require_element(b: &BarrierSpec, s: &Seq) -> Result<()> {
    if b.is_element(s) {
        Ok(())
    } else {
        Err(Error::NotAnElement {
            seq: s.to_string(),
            spec: b.to_string(),
        })
    }
}

/// The 2-coloring `g` of `B⁺` built from an instance `f` of the free set
/// problem on `B`, by recursion on `<_lex`.
pub struct FsColoring {
    source: Arc<dyn Coloring>,
    plus: BarrierSpec,
    /// `s ↦ (g(s), length of the recursion chain below s)`.
    memo: Mutex<HashMap<Seq, (Color, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FsCase {
    Zero,
    One,
    /// `1 − g(s[k])`.
    Flip(u64),
}

impl FsColoring {
    pub fn new(source: Arc<dyn Coloring>) -> Result<Self> {
        let b = source.barrier();
        if b.base() != Base::Naturals {
            return Err(Error::InvalidInput(format!(
                "the free set reduction needs a barrier with base N, got {b}"
            )));
        }
        if b.is_unit() {
            return Err(Error::InvalidInput("the free set reduction needs a nontrivial barrier".into()));
        }
        let plus = make_plus(b.clone());
        Ok(FsColoring {
            source,
            plus,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Deepest recursion chain among all values computed so far.
    pub fn max_chain(&self) -> usize {
        let memo = self.memo.lock().expect("memo lock");
        memo.values().map(|&(_, d)| d).max().unwrap_or(0)
    }

    fn case(&self, s: &Seq) -> Result<FsCase> {
        let n = s.len() - 1;
        let v = self.source.color(&s.minus()?)?;
        let Some(w) = v.checked_add(1) else {
            return Ok(FsCase::One);
        };
        if s[..n].contains(&w) {
            return Ok(FsCase::Zero);
        }
        if w < s[n - 1] {
            return Ok(FsCase::Flip(w));
        }
        if w > s[n - 1] && w < s[n] {
            return Ok(FsCase::Zero);
        }
        // includes w = s_n: the literal case split sends it to "otherwise"
        Ok(FsCase::One)
    }

    fn eval(&self, s: &Seq) -> Result<Color> {
        require_element(&self.plus, s)?;
        let mut chain: Vec<Seq> = Vec::new();
        let mut cur = s.clone();
        let (mut value, mut depth) = loop {
            if let Some(&hit) = self.memo.lock().expect("memo lock").get(&cur) {
                break hit;
            }
            match self.case(&cur)? {
                FsCase::Zero => break (0, 0),
                FsCase::One => break (1, 0),
                FsCase::Flip(k) => {
                    let next = self.plus.variant(&cur, k)?;
                    if lex_cmp(&next, &cur) != Ordering::Less {
                        return Err(Error::Bug(format!("variant {next} of {cur} is not lex smaller")));
                    }
                    if chain.len() >= CHAIN_GUARD {
                        return Err(Error::Bug(format!(
                            "recursion from {s} exceeded {CHAIN_GUARD} steps"
                        )));
                    }
                    chain.push(std::mem::replace(&mut cur, next));
                }
            }
        };
        let mut memo = self.memo.lock().expect("memo lock");
        memo.insert(cur, (value, depth));
        for t in chain.into_iter().rev() {
            value = 1 - value;
            depth += 1;
            memo.insert(t, (value, depth));
        }
        Ok(value)
    }
}

impl Coloring for FsColoring {
    fn barrier(&self) -> &BarrierSpec {
        &self.plus
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        self.eval(s)
    }
}

/// `g(s) = 0` if `f(s) = 0`, else 1.
pub struct TsRtColoring {
    source: Arc<dyn Coloring>,
}

impl TsRtColoring {
    pub fn new(source: Arc<dyn Coloring>) -> Self {
        TsRtColoring { source }
    }
}

impl Coloring for TsRtColoring {
    fn barrier(&self) -> &BarrierSpec {
        self.source.barrier()
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        Ok(match self.source.color(s)? {
            0 => 0,
            _ => 1,
        })
    }
}

fn twins(source: &dyn Coloring, rank: &EnumRank, s: &Seq) -> Result<(Color, Vec<Seq>)> {
    let c = source.color(s)?;
    let mut found = Vec::new();
    for t in rank.predecessors(s)? {
        if source.color(&t)? == c {
            found.push(t);
        }
    }
    Ok((c, found))
}

/// Galvin's coloring: the number of earlier elements sharing the color of `s`.
pub struct GalvinColoring {
    source: Arc<dyn Coloring>,
    rank: EnumRank,
    k: usize,
}

impl GalvinColoring {
    pub fn new(source: Arc<dyn Coloring>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("bound k must be positive".into()));
        }
        let rank = EnumRank::new(source.barrier().clone());
        Ok(GalvinColoring { source, rank, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Coloring for GalvinColoring {
    fn barrier(&self) -> &BarrierSpec {
        self.source.barrier()
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        let (c, earlier) = twins(self.source.as_ref(), &self.rank, s)?;
        if earlier.len() >= self.k {
            return Err(Error::BoundExceeded {
                color: c,
                bound: self.k,
                count: earlier.len() + 1,
            });
        }
        Ok(earlier.len() as Color)
    }
}

/// `g(s) = min(t ∖ s)` for the unique earlier `t` with `f(t) = f(s)`, else 0.
pub struct Rrt2FsColoring {
    source: Arc<dyn Coloring>,
    rank: EnumRank,
}

impl Rrt2FsColoring {
    pub fn new(source: Arc<dyn Coloring>) -> Self {
        let rank = EnumRank::new(source.barrier().clone());
        Rrt2FsColoring { source, rank }
    }
}

impl Coloring for Rrt2FsColoring {
    fn barrier(&self) -> &BarrierSpec {
        self.source.barrier()
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        let (c, earlier) = twins(self.source.as_ref(), &self.rank, s)?;
        match earlier.as_slice() {
            [] => Ok(0),
            [t] => t
                .iter()
                .copied()
                .find(|x| !s.contains_elem(*x))
                .ok_or_else(|| Error::Bug(format!("{t} is contained in {s}"))),
            _ => Err(Error::BoundExceeded {
                color: c,
                bound: 2,
                count: earlier.len() + 1,
            }),
        }
    }
}

/// The image of an instance under a reduction's forward map.
pub enum Forward {
    Fs(FsColoring),
    TsRt(TsRtColoring),
    Identity(Arc<dyn Coloring>),
    Galvin(GalvinColoring),
    Rrt2Fs(Rrt2FsColoring),
}

impl Forward {
    fn inner(&self) -> &dyn Coloring {
        match self {
            Forward::Fs(g) => g,
            Forward::TsRt(g) => g,
            Forward::Identity(g) => g.as_ref(),
            Forward::Galvin(g) => g,
            Forward::Rrt2Fs(g) => g,
        }
    }

    pub fn max_chain(&self) -> Option<usize> {
        match self {
            Forward::Fs(g) => Some(g.max_chain()),
            _ => None,
        }
    }
}

impl Coloring for Forward {
    fn barrier(&self) -> &BarrierSpec {
        self.inner().barrier()
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        self.inner().color(s)
    }
}
