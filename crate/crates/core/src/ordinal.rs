//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^α₀·c₀ + ω^α₁·c₁ + …` with strictly
//! decreasing exponents and positive coefficients. The representation is
//! canonical, so structural equality is ordinal equality.
//!
//! Text form, used by the CLI and the JSON schemas:
//!
//! ```text
//! sum     := product ('+' product)*
//! product := power ('*' power)*
//! power   := atom ('^' power)?          (right associative, base must be w)
//! atom    := natural | 'w' | 'ω' | '(' sum ')'
//! ```
//!
//! so `w^w + w^2*3 + 5` and `w^(w+1)` both parse. Rendering produces the
//! same grammar with the minimum number of parentheses.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
    #[error("terms are not in Cantor normal form: {0}")]
    NotCanonical(String),
    #[error("cannot parse ordinal {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// One `ω^exponent · coefficient` summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: Ordinal::zero(),
                    coefficient: n,
                }],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient: 1,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        for (i, (exp, coeff)) in terms.iter().enumerate() {
            if *coeff == 0 {
                return Err(OrdinalError::NotCanonical(format!(
                    "zero coefficient on w^{exp}"
                )));
            }
            if i > 0 && terms[i - 1].0 <= *exp {
                return Err(OrdinalError::NotCanonical(format!(
                    "exponent {exp} does not decrease"
                )));
            }
        }
        Ok(Ordinal {
            terms: terms
                .into_iter()
                .map(|(exponent, coefficient)| Term {
                    exponent,
                    coefficient,
                })
                .collect(),
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    /// The finite value, if this ordinal is below ω.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// The leading exponent; `None` for zero.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// `β` for `self = β + 1`.
    pub fn predecessor(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a term");
        if last.coefficient == 1 {
            terms.pop();
        } else {
            last.coefficient -= 1;
        }
        Ok(Ordinal { terms })
    }

    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(same) = self.terms.get(terms.len()) {
            if same.exponent == lead.exponent {
                rest.next();
                terms.push(Term {
                    exponent: lead.exponent.clone(),
                    coefficient: same
                        .coefficient
                        .checked_add(lead.coefficient)
                        .expect("ordinal coefficient overflow"),
                });
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut out = Ordinal::zero();
        for t in &rhs.terms {
            let piece = if t.exponent.is_zero() {
                // self · c scales only the leading coefficient
                let mut terms = self.terms.clone();
                terms[0].coefficient = lead
                    .coefficient
                    .checked_mul(t.coefficient)
                    .expect("ordinal coefficient overflow");
                Ordinal { terms }
            } else {
                Ordinal {
                    terms: vec![Term {
                        exponent: lead.exponent.add(&t.exponent),
                        coefficient: t.coefficient,
                    }],
                }
            };
            out = out.add(&piece);
        }
        out
    }

    /// The `n`-th member of the standard fundamental sequence of a limit
    /// ordinal, with `ω[n] = n`, `(δ + ω^(β+1))[n] = δ + ω^β·n` and
    /// `(δ + ω^λ)[n] = δ + ω^(λ[n])`.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let (last, init) = self.terms.split_last().expect("limit has a term");
        let mut head = init.to_vec();
        if last.coefficient > 1 {
            head.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let head = Ordinal { terms: head };
        let tail = if last.exponent.is_successor() {
            Ordinal::omega_pow(last.exponent.predecessor()?).mul(&Ordinal::nat(n))
        } else {
            Ordinal::omega_pow(last.exponent.fund_seq(n)?)
        };
        Ok(head.add(&tail))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

fn fmt_exponent(exp: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match exp.terms.as_slice() {
        _ if exp.as_nat().is_some() => write!(f, "{exp}"),
        [t] if t.coefficient == 1 => write!(f, "{exp}"),
        _ => write!(f, "({exp})"),
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            write!(f, "w")?;
            if t.exponent != Ordinal::one() {
                write!(f, "^")?;
                fmt_exponent(&t.exponent, f)?;
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> OrdinalError {
        OrdinalError::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.product()?;
        while self.eat('+') {
            acc = acc.add(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal, OrdinalError> {
        let start = self.pos;
        let base = self.atom()?;
        if self.eat('^') {
            if base != Ordinal::omega() {
                self.pos = start;
                return Err(self.error("only w may be raised to a power"));
            }
            let exp = self.power()?;
            return Ok(Ordinal::omega_pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('w') | Some('ω') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                digits
                    .parse::<u64>()
                    .map(Ordinal::nat)
                    .map_err(|e| self.error(e.to_string()))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            input: s,
            chars: s.chars().collect(),
            pos: 0,
        };
        let value = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error(format!("trailing input at offset {}", p.pos)));
        }
        Ok(value)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct OrdinalVisitor;

        impl Visitor<'_> for OrdinalVisitor {
            type Value = Ordinal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a Cantor normal form string such as \"w^2 + 3\" or a natural number")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Ordinal, E> {
                Ok(Ordinal::nat(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Ordinal, E> {
                u64::try_from(v)
                    .map(Ordinal::nat)
                    .map_err(|_| E::custom("negative ordinal"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Ordinal, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(OrdinalVisitor)
    }
}
