use std::cmp::Ordering;

use crate::barrier::BarrierSpec;
use crate::error::{Error, Result};
use crate::seq::Seq;

/// The enumeration of a barrier by `(max, then lex)`.
///
/// Every element with a smaller key lies inside `[0, max(s)]`, so the set of
/// predecessors of `s` is the finite front of that interval cut at `s`.
#[derive(Debug, Clone)]
pub struct EnumRank {
    barrier: BarrierSpec,
}

impl EnumRank {
    pub fn new(barrier: BarrierSpec) -> Self {
        EnumRank { barrier }
    }

    pub fn barrier(&self) -> &BarrierSpec {
        &self.barrier
    }

    pub fn cmp(s: &Seq, t: &Seq) -> Ordering {
        (s.last(), s).cmp(&(t.last(), t))
    }

    fn require_element(&self, s: &Seq) -> Result<()> {
        if self.barrier.is_element(s) {
            Ok(())
        } else {
            Err(Error::NotAnElement {
                seq: s.to_string(),
                spec: self.barrier.to_string(),
            })
        }
    }

    /// Elements enumerated before `s`, in enumeration order.
    pub fn predecessors(&self, s: &Seq) -> Result<Vec<Seq>> {
        self.require_element(s)?;
        let Some(&max) = s.last() else {
            return Ok(Vec::new());
        };
        let ground: Vec<u64> = (0..=max).collect();
        let mut before: Vec<Seq> = self
            .barrier
            .front(&ground)
            .into_iter()
            .filter(|t| Self::cmp(t, s) == Ordering::Less)
            .collect();
        before.sort_by(Self::cmp);
        Ok(before)
    }

    pub fn rank(&self, s: &Seq) -> Result<usize> {
        self.require_element(s)?;
        let Some(&max) = s.last() else {
            return Ok(0);
        };
        let ground: Vec<u64> = (0..=max).collect();
        Ok(self
            .barrier
            .front(&ground)
            .iter()
            .filter(|t| Self::cmp(t, s) == Ordering::Less)
            .count())
    }

    /// `items` sorted into enumeration order.
    pub fn sorted(mut items: Vec<Seq>) -> Vec<Seq> {
        items.sort_by(Self::cmp);
        items
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u64]) -> Seq {
        Seq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn singletons_rank_naturally() {
        let r = EnumRank::new(BarrierSpec::exact(1));
        for n in 0..6 {
            assert_eq!(r.rank(&s(&[n])).unwrap(), n as usize);
        }
    }

    #[test]
    fn pairs_rank_by_max_then_lex() {
        let r = EnumRank::new(BarrierSpec::exact(2));
        let order = [[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 3]];
        for (i, p) in order.iter().enumerate() {
            assert_eq!(r.rank(&s(p)).unwrap(), i);
        }
        assert_eq!(
            r.predecessors(&s(&[1, 3])).unwrap(),
            vec![s(&[0, 1]), s(&[0, 2]), s(&[1, 2]), s(&[0, 3])]
        );
    }

    #[test]
    fn rank_is_injective_on_schreier() {
        let r = EnumRank::new(BarrierSpec::schreier());
        let front = BarrierSpec::schreier().front(&(0..9).collect::<Vec<_>>());
        let mut ranks: Vec<usize> = front.iter().map(|t| r.rank(t).unwrap()).collect();
        ranks.sort_unstable();
        ranks.dedup();
        assert_eq!(ranks.len(), front.len());
        assert!(r.rank(&s(&[1, 2, 3])).is_err());
    }
}
