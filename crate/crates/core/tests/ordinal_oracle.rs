//! Ordinal arithmetic against a second, textbook implementation that keeps
//! a plain non-increasing list of exponents (`ω^a₁ + ω^a₂ + …`, no
//! coefficients).

use std::cmp::Ordering;

use barriers::Ordinal;
use proptest::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Cnf(Vec<Cnf>);

impl Cnf {
    fn zero() -> Self {
        Cnf(Vec::new())
    }

    fn nat(n: usize) -> Self {
        Cnf(vec![Cnf::zero(); n])
    }

    fn cmp(&self, other: &Cnf) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    fn add(&self, other: &Cnf) -> Cnf {
        let Some(lead) = other.0.first() else {
            return self.clone();
        };
        let mut out: Vec<Cnf> = self
            .0
            .iter()
            .filter(|a| a.cmp(lead) != Ordering::Less)
            .cloned()
            .collect();
        out.extend(other.0.iter().cloned());
        Cnf(out)
    }

    fn mul(&self, other: &Cnf) -> Cnf {
        let Some(lead) = self.0.first() else {
            return Cnf::zero();
        };
        let mut out = Cnf::zero();
        for b in &other.0 {
            let piece = if b.0.is_empty() {
                self.clone()
            } else {
                Cnf(vec![lead.add(b)])
            };
            out = out.add(&piece);
        }
        out
    }

    fn is_limit(&self) -> bool {
        self.0.last().is_some_and(|e| !e.0.is_empty())
    }

    fn fund(&self, n: usize) -> Cnf {
        let (last, init) = self.0.split_last().expect("limit");
        let base = Cnf(init.to_vec());
        if last.is_limit() {
            base.add(&Cnf(vec![last.fund(n)]))
        } else {
            let pred = Cnf(last.0[..last.0.len() - 1].to_vec());
            base.add(&Cnf(vec![pred; n]))
        }
    }

    fn from_ordinal(o: &Ordinal) -> Cnf {
        let mut out = Vec::new();
        for t in o.terms() {
            let e = Cnf::from_ordinal(t.exponent());
            for _ in 0..t.coefficient() {
                out.push(e.clone());
            }
        }
        Cnf(out)
    }
}

fn p(text: &str) -> Ordinal {
    text.parse().unwrap()
}

fn agree(o: &Ordinal, c: &Cnf) -> bool {
    Cnf::from_ordinal(o) == *c
}

/// Ordinals below `ω^ω·3`: up to two `ω^ω` terms, then finite exponents.
fn small_ordinal() -> impl Strategy<Value = Ordinal> {
    (0u64..3, proptest::collection::vec((0u64..5, 1u64..4), 0..4)).prop_map(|(top, rest)| {
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        if top > 0 {
            terms.push((Ordinal::omega(), top));
        }
        let mut rest = rest;
        rest.sort_by_key(|t| std::cmp::Reverse(t.0));
        rest.dedup_by_key(|t| t.0);
        for (e, c) in rest {
            terms.push((Ordinal::nat(e), c));
        }
        Ordinal::from_terms(terms).unwrap()
    })
}

#[test]
fn documented_examples() {
    assert_eq!(p("w").cmp(&p("w")), Ordering::Equal);
    assert_eq!(p("w^2").cmp(&p("w*3")), Ordering::Greater);
    assert_eq!(p("w^w").cmp(&p("w^3*5")), Ordering::Greater);
    assert_eq!(p("w").mul(&p("w^w")), p("w^w"));
    assert_eq!(p("w").mul(&p("w^2")), p("w^3"));
    assert_eq!(p("w^2").add(&p("w^2*2")), p("w^2*3"));
    assert_eq!(p("w").fund_seq(3).unwrap(), p("3"));
    assert_eq!(p("w^2").fund_seq(2).unwrap(), p("w*2"));
    assert_eq!(p("w^w").fund_seq(2).unwrap(), p("w^2"));
    assert!(p("w + 1").fund_seq(0).is_err());
    assert!(Ordinal::zero().fund_seq(0).is_err());
}

#[test]
fn oracle_agrees_on_examples() {
    let w = Cnf(vec![Cnf::nat(1)]);
    let ww = Cnf(vec![w.clone()]);
    assert_eq!(w.mul(&ww), ww);
    assert!(agree(&p("w^w"), &w.mul(&ww)));
    assert!(agree(&p("w^2").fund_seq(2).unwrap(), &Cnf(vec![Cnf::nat(2)]).fund(2)));
}

#[test]
fn pool_trichotomy() {
    let mut pool = Vec::new();
    for top in 0..3u64 {
        for a in 0..4u64 {
            for b in 0..3u64 {
                for c in 0..6u64 {
                    let mut terms = Vec::new();
                    if top > 0 {
                        terms.push((Ordinal::omega(), top));
                    }
                    if a > 0 {
                        terms.push((Ordinal::nat(2), a));
                    }
                    if b > 0 {
                        terms.push((Ordinal::one(), b));
                    }
                    if c > 0 {
                        terms.push((Ordinal::zero(), c));
                    }
                    pool.push(Ordinal::from_terms(terms).unwrap());
                }
            }
        }
    }
    assert!(pool.len() >= 200);
    for x in &pool {
        for y in &pool {
            let o = x.cmp(y);
            assert_eq!(o, Cnf::from_ordinal(x).cmp(&Cnf::from_ordinal(y)), "{x} vs {y}");
            assert_eq!(o.reverse(), y.cmp(x));
            assert_eq!(o == Ordering::Equal, x == y);
        }
    }
}

#[test]
fn render_parse_round_trip() {
    for text in ["0", "7", "w", "w^w + w^2*3 + 5", "w^(w + 1)*2 + w", "w^w^w"] {
        let o = p(text);
        assert_eq!(p(&o.to_string()), o);
    }
    assert_eq!(p("ω^2").to_string(), "w^2");
    assert!("w^".parse::<Ordinal>().is_err());
    assert!("w +".parse::<Ordinal>().is_err());
}

proptest! {
    #[test]
    fn add_matches_oracle(a in small_ordinal(), b in small_ordinal()) {
        prop_assert!(agree(&a.add(&b), &Cnf::from_ordinal(&a).add(&Cnf::from_ordinal(&b))));
    }

    #[test]
    fn mul_matches_oracle(a in small_ordinal(), b in small_ordinal()) {
        prop_assert!(agree(&a.mul(&b), &Cnf::from_ordinal(&a).mul(&Cnf::from_ordinal(&b))));
    }

    #[test]
    fn associativity(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn left_distributivity(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn fundamental_sequences(a in small_ordinal(), n in 0u64..10) {
        let l = a.add(&Ordinal::omega());
        let x = l.fund_seq(n).unwrap();
        let y = l.fund_seq(n + 1).unwrap();
        prop_assert!(x < y && y < l);
        prop_assert!(agree(&x, &Cnf::from_ordinal(&l).fund(n as usize)));
        if a.is_limit() {
            prop_assert!(agree(&a.fund_seq(n).unwrap(), &Cnf::from_ordinal(&a).fund(n as usize)));
        }
    }
}
