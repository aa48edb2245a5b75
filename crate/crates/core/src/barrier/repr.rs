//! JSON and shorthand forms of [`BarrierSpec`].
//!
//! JSON is an externally tagged constructor tree:
//!
//! ```json
//! {"product": ["exact:1", {"plus": "schreier"}]}
//! {"derived": {"inner": "schreier", "n": 2}}
//! {"restrict": {"inner": {"canonical": "w"}, "set": {"prefix": [], "tail": {"start": 0, "step": 2}}}}
//! ```
//!
//! Any subtree may be a shorthand string: `unit`, `schreier`, `exact:<n>` or
//! `canonical:<ordinal>`.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{make_canonical, make_derived, make_plus, make_product, make_restrict, BarrierSpec, Node};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::seq::GroundSet;

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecJson {
    Short(String),
    Tree(Box<TreeJson>),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TreeJson {
    Exact(usize),
    Canonical(Ordinal),
    Product(SpecJson, SpecJson),
    Plus(SpecJson),
    Derived { inner: SpecJson, n: u64 },
    Restrict { inner: SpecJson, set: GroundSet },
}

impl SpecJson {
    fn build(self) -> Result<BarrierSpec> {
        match self {
            SpecJson::Short(s) => s.parse(),
            SpecJson::Tree(tree) => match *tree {
                TreeJson::Exact(n) => Ok(BarrierSpec::exact(n)),
                TreeJson::Canonical(alpha) => Ok(make_canonical(alpha)),
                TreeJson::Product(a, b) => make_product(a.build()?, b.build()?),
                TreeJson::Plus(inner) => Ok(make_plus(inner.build()?)),
                TreeJson::Derived { inner, n } => make_derived(inner.build()?, n),
                TreeJson::Restrict { inner, set } => make_restrict(inner.build()?, set),
            },
        }
    }
}

impl BarrierSpec {
    /// Canonical JSON form (full constructor tree, ordinals as strings).
    pub fn to_json(&self) -> Value {
        match self.node() {
            Node::Unit => json!("unit"),
            Node::ExactSize(n) => json!({ "exact": n }),
            Node::Schreier => json!("schreier"),
            Node::Canonical(alpha) => json!({ "canonical": alpha.to_string() }),
            Node::Product(a, b) => json!({ "product": [a.to_json(), b.to_json()] }),
            Node::Plus(inner) => json!({ "plus": inner.to_json() }),
            Node::Derived(inner, n) => json!({ "derived": { "inner": inner.to_json(), "n": n } }),
            Node::Restrict(inner, set) => {
                json!({ "restrict": { "inner": inner.to_json(), "set": set } })
            }
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: SpecJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("malformed barrier JSON: {e}")))?;
        raw.build()
    }

    /// JSON if the text looks like JSON, shorthand otherwise.
    pub fn parse_any(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') || t.starts_with('"') {
            BarrierSpec::from_json_str(t)
        } else {
            t.parse()
        }
    }
}

impl FromStr for BarrierSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpec(format!("unknown barrier shorthand {s:?}"));
        match s {
            "unit" | "singleton" => return Ok(BarrierSpec::unit()),
            "schreier" => return Ok(BarrierSpec::schreier()),
            _ => {}
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        match name {
            "exact" => arg
                .trim()
                .parse()
                .map(BarrierSpec::exact)
                .map_err(|_| Error::InvalidSpec(format!("bad size in {s:?}"))),
            "canonical" => Ok(make_canonical(arg.parse()?)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for BarrierSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BarrierSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        SpecJson::deserialize(deserializer)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Seq;

    #[test]
    fn shorthand() {
        assert_eq!("schreier".parse::<BarrierSpec>().unwrap(), BarrierSpec::schreier());
        assert_eq!("exact:3".parse::<BarrierSpec>().unwrap(), BarrierSpec::exact(3));
        assert_eq!(
            "canonical:w^2".parse::<BarrierSpec>().unwrap(),
            make_canonical("w^2".parse().unwrap())
        );
        assert!("nonsense".parse::<BarrierSpec>().is_err());
        assert!("exact:x".parse::<BarrierSpec>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let texts = [
            r#"{"plus":"schreier"}"#,
            r#"{"product":[{"exact":1},{"canonical":"w"}]}"#,
            r#"{"derived":{"inner":"schreier","n":2}}"#,
            r#"{"restrict":{"inner":"schreier","set":{"prefix":[1],"tail":{"start":0,"step":2}}}}"#,
        ];
        for t in texts {
            let spec = BarrierSpec::parse_any(t).unwrap();
            let back = BarrierSpec::from_json_str(&spec.to_json().to_string()).unwrap();
            assert_eq!(spec, back, "{t}");
        }
        let shorthand_inside = BarrierSpec::parse_any(r#"{"product":["exact:1","canonical:w"]}"#).unwrap();
        assert_eq!(shorthand_inside, BarrierSpec::parse_any(texts[1]).unwrap());
    }

    #[test]
    fn json_validates_constructors() {
        assert!(BarrierSpec::parse_any(r#"{"derived":{"inner":"exact:1","n":4}}"#).is_err());
        assert!(BarrierSpec::parse_any(r#"{"restrict":{"inner":"schreier","set":{"prefix":[1,2]}}}"#).is_err());
        assert!(BarrierSpec::parse_any(r#"{"plus":"schreier","extra":1}"#).is_err());
    }

    #[test]
    fn restrict_classifies_outside_set_as_not_in_base() {
        let spec = BarrierSpec::parse_any(
            r#"{"restrict":{"inner":"schreier","set":{"tail":{"start":0,"step":2}}}}"#,
        )
        .unwrap();
        let s = Seq::new(vec![1, 2]).unwrap();
        assert_eq!(spec.classify(&s), crate::barrier::Classification::NotInBase);
    }
}
