use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::barrier::BarrierSpec;
use crate::coding::code_seq;
use crate::error::{Error, Result};
use crate::reduction::EnumRank;
use crate::seq::Seq;

pub type Color = u64;

/// A total map from barrier elements to colors, queried one element at a
/// time. Forward reductions wrap one coloring in another, so everything
/// downstream works against this trait.
pub trait Coloring: Send + Sync {
    fn barrier(&self) -> &BarrierSpec;

    fn color(&self, s: &Seq) -> Result<Color>;

    /// Claimed `k` for a `k`-bounded coloring. Checked, never trusted.
    fn declared_bound(&self) -> Option<usize> {
        None
    }
}

impl<C: Coloring + ?Sized> Coloring for Arc<C> {
    fn barrier(&self) -> &BarrierSpec {
        (**self).barrier()
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        (**self).color(s)
    }

    fn declared_bound(&self) -> Option<usize> {
        (**self).declared_bound()
    }
}

/// Named coloring rules that are total on every barrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Constant(Color),
    Min,
    Max,
    /// `max(s) + 1`.
    MaxPlusOne,
    /// `min(s) − 1`, clamped at 0.
    MinMinusOne,
    /// `min(s) mod 2`.
    MinParity,
    Length,
    /// Canonical finite-set index of `s`; injective.
    Code,
    /// Position in the (max, lex) enumeration of the barrier; injective.
    Rank,
    SumMod(u64),
    /// Pseudo-random color in `0..colors`, a fixed function of `(seed, s)`.
    Hash { seed: u64, colors: u64 },
}

impl Builtin {
    fn name(&self) -> &'static str {
        match self {
            Builtin::Constant(_) => "constant",
            Builtin::Min => "min",
            Builtin::Max => "max",
            Builtin::MaxPlusOne => "max_plus_one",
            Builtin::MinMinusOne => "min_minus_one",
            Builtin::MinParity => "min_parity",
            Builtin::Length => "length",
            Builtin::Code => "code",
            Builtin::Rank => "rank",
            Builtin::SumMod(_) => "sum_mod",
            Builtin::Hash { .. } => "hash",
        }
    }

    fn params(&self) -> Option<Value> {
        match self {
            Builtin::Constant(c) => Some(json!({ "color": c })),
            Builtin::SumMod(m) => Some(json!({ "modulus": m })),
            Builtin::Hash { seed, colors } => Some(json!({ "seed": seed, "colors": colors })),
            _ => None,
        }
    }

    fn from_parts(name: &str, params: &Value) -> Result<Self> {
        let param = |key: &str| {
            params.get(key).and_then(Value::as_u64).ok_or_else(|| {
                Error::InvalidColoring(format!("builtin {name:?} needs integer param {key:?}"))
            })
        };
        Ok(match name {
            "constant" => Builtin::Constant(param("color")?),
            "min" => Builtin::Min,
            "max" => Builtin::Max,
            "max_plus_one" => Builtin::MaxPlusOne,
            "min_minus_one" => Builtin::MinMinusOne,
            "min_parity" => Builtin::MinParity,
            "length" => Builtin::Length,
            "code" => Builtin::Code,
            "rank" => Builtin::Rank,
            "sum_mod" => {
                let m = param("modulus")?;
                if m == 0 {
                    return Err(Error::InvalidColoring("sum_mod modulus must be positive".into()));
                }
                Builtin::SumMod(m)
            }
            "hash" => {
                let colors = param("colors")?;
                if colors == 0 {
                    return Err(Error::InvalidColoring("hash needs at least one color".into()));
                }
                Builtin::Hash {
                    seed: param("seed")?,
                    colors,
                }
            }
            other => return Err(Error::InvalidColoring(format!("unknown builtin {other:?}"))),
        })
    }

    fn apply(&self, barrier: &BarrierSpec, s: &Seq) -> Result<Color> {
        let first = s.first().copied().unwrap_or(0);
        let last = s.last().copied().unwrap_or(0);
        Ok(match self {
            Builtin::Constant(c) => *c,
            Builtin::Min => first,
            Builtin::Max => last,
            Builtin::MaxPlusOne => last + 1,
            Builtin::MinMinusOne => first.saturating_sub(1),
            Builtin::MinParity => first % 2,
            Builtin::Length => s.len() as u64,
            Builtin::Code => code_seq(s)?,
            Builtin::Rank => EnumRank::new(barrier.clone()).rank(s)? as u64,
            Builtin::SumMod(m) => s.iter().fold(0u64, |acc, &x| (acc + x % m) % m),
            Builtin::Hash { seed, colors } => {
                let h = s.iter().fold(splitmix(*seed), |acc, &x| splitmix(acc ^ x));
                splitmix(h ^ s.len() as u64) % colors
            }
        })
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Table(BTreeMap<Seq, Color>),
    Builtin(Builtin),
}

/// The serializable coloring format:
/// `{"table": [[seq, color], …]}` or `{"builtin": name, "params": {…}}`,
/// either with an optional `"bound": k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSpec {
    pub rule: Rule,
    pub declared_bound: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<(Seq, Color)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<usize>,
}

impl ColoringSpec {
    pub fn builtin(b: Builtin) -> Self {
        ColoringSpec {
            rule: Rule::Builtin(b),
            declared_bound: None,
        }
    }

    pub fn table(entries: impl IntoIterator<Item = (Seq, Color)>) -> Self {
        ColoringSpec {
            rule: Rule::Table(entries.into_iter().collect()),
            declared_bound: None,
        }
    }

    pub fn with_bound(mut self, k: usize) -> Self {
        self.declared_bound = Some(k);
        self
    }

    pub fn on(self, barrier: BarrierSpec) -> RuleColoring {
        RuleColoring {
            barrier,
            spec: self,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: ColoringJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidColoring(format!("malformed coloring JSON: {e}")))?;
        let rule = match (raw.table, raw.builtin) {
            (Some(rows), None) => {
                let mut table = BTreeMap::new();
                for (s, c) in rows {
                    if let Some(prev) = table.insert(s.clone(), c) {
                        if prev != c {
                            return Err(Error::InvalidColoring(format!(
                                "table assigns {s} both {prev} and {c}"
                            )));
                        }
                    }
                }
                Rule::Table(table)
            }
            (None, Some(name)) => {
                Rule::Builtin(Builtin::from_parts(&name, raw.params.as_ref().unwrap_or(&Value::Null))?)
            }
            _ => {
                return Err(Error::InvalidColoring(
                    "give exactly one of \"table\" or \"builtin\"".into(),
                ))
            }
        };
        Ok(ColoringSpec {
            rule,
            declared_bound: raw.bound,
        })
    }

    pub fn to_json(&self) -> Value {
        let raw = match &self.rule {
            Rule::Table(t) => ColoringJson {
                table: Some(t.iter().map(|(s, c)| (s.clone(), *c)).collect()),
                builtin: None,
                params: None,
                bound: self.declared_bound,
            },
            Rule::Builtin(b) => ColoringJson {
                table: None,
                builtin: Some(b.name().to_string()),
                params: b.params(),
                bound: self.declared_bound,
            },
        };
        serde_json::to_value(raw).expect("coloring JSON is always serializable")
    }
}

/// A [`ColoringSpec`] attached to a barrier.
#[derive(Debug, Clone)]
pub struct RuleColoring {
    barrier: BarrierSpec,
    spec: ColoringSpec,
}

impl RuleColoring {
    pub fn spec(&self) -> &ColoringSpec {
        &self.spec
    }
}

impl Coloring for RuleColoring {
    fn barrier(&self) -> &BarrierSpec {
        &self.barrier
    }

    fn color(&self, s: &Seq) -> Result<Color> {
        if !self.barrier.is_element(s) {
            return Err(Error::NotAnElement {
                seq: s.to_string(),
                spec: self.barrier.to_string(),
            });
        }
        match &self.spec.rule {
            Rule::Table(t) => t
                .get(s)
                .copied()
                .ok_or_else(|| Error::ColoringUndefined(s.to_string())),
            Rule::Builtin(b) => b.apply(&self.barrier, s),
        }
    }

    fn declared_bound(&self) -> Option<usize> {
        self.spec.declared_bound
    }
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}
