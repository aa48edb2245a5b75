//! Flag values: ground sets, sequences, and specs given inline or as files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use barriers::diag::OracleFamily;
use barriers::solver::ColoringSpec;
use barriers::{BarrierSpec, Seq};

/// Largest range accepted on the command line.
const MAX_RANGE: u64 = 1 << 16;

/// Inline text, or the contents of the file it names.
fn inline_or_file(text: &str) -> Result<String> {
    let t = text.trim();
    if !t.starts_with('{') && !t.starts_with('[') && Path::new(t).is_file() {
        return std::fs::read_to_string(t).with_context(|| format!("reading {t}"));
    }
    Ok(t.to_string())
}

pub fn barrier(text: &str) -> Result<BarrierSpec> {
    let body = inline_or_file(text)?;
    Ok(BarrierSpec::parse_any(&body)?)
}

/// JSON, a file holding JSON, or a bare builtin name such as `max`.
pub fn coloring(text: &str) -> Result<ColoringSpec> {
    let body = inline_or_file(text)?;
    if body.starts_with('{') {
        return Ok(ColoringSpec::from_json_str(&body)?);
    }
    let json = serde_json::json!({ "builtin": body }).to_string();
    Ok(ColoringSpec::from_json_str(&json)?)
}

pub fn family(text: &str) -> Result<OracleFamily> {
    let body = inline_or_file(text)?;
    Ok(OracleFamily::from_json_str(&body)?)
}

fn number(text: &str) -> Result<u64> {
    text.trim()
        .parse()
        .with_context(|| format!("{text:?} is not a natural number"))
}

/// `a..b` (half-open), `a..=b`, or a comma list, sorted and deduplicated.
pub fn ground(text: &str) -> Result<Vec<u64>> {
    let t = text.trim();
    let mut out: Vec<u64> = if let Some((lo, hi)) = t.split_once("..=") {
        let (lo, hi) = (number(lo)?, number(hi)?);
        if hi >= lo && hi - lo >= MAX_RANGE {
            bail!("range {t} is too large");
        }
        (lo..=hi).collect()
    } else if let Some((lo, hi)) = t.split_once("..") {
        let (lo, hi) = (number(lo)?, number(hi)?);
        if hi.saturating_sub(lo) > MAX_RANGE {
            bail!("range {t} is too large");
        }
        (lo..hi).collect()
    } else if t.is_empty() {
        Vec::new()
    } else {
        t.split(',').map(number).collect::<Result<_>>()?
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `2,4,5`, optionally wrapped in `()` or `[]`; must be increasing.
pub fn seq(text: &str) -> Result<Seq> {
    let t = text
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    let elems: Vec<u64> = if t.trim().is_empty() {
        Vec::new()
    } else {
        t.split(',').map(number).collect::<Result<_>>()?
    };
    Ok(Seq::new(elems)?)
}

/// `e=0,i=2` (the `i` part may be omitted).
pub fn verify_target(text: &str) -> Result<(u64, Option<u64>)> {
    let mut e = None;
    let mut i = None;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .with_context(|| format!("expected key=value in {text:?}"))?;
        match key.trim() {
            "e" => e = Some(number(value)?),
            "i" => i = Some(number(value)?),
            other => bail!("unknown key {other:?} in {text:?}"),
        }
    }
    let e = e.with_context(|| format!("{text:?} does not name an index e"))?;
    Ok((e, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_forms() {
        assert_eq!(ground("0..4").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(ground("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(ground("5, 1,3,3").unwrap(), vec![1, 3, 5]);
        assert_eq!(ground("").unwrap(), Vec::<u64>::new());
        assert!(ground("0..x").is_err());
        assert!(ground("0..100000000").is_err());
    }

    #[test]
    fn seq_forms() {
        assert_eq!(seq("(2,4,5)").unwrap().as_slice(), &[2, 4, 5]);
        assert_eq!(seq("[1]").unwrap().as_slice(), &[1]);
        assert!(seq("()").unwrap().is_empty());
        assert!(seq("3,1").is_err());
    }

    #[test]
    fn verify_forms() {
        assert_eq!(verify_target("e=0,i=2").unwrap(), (0, Some(2)));
        assert_eq!(verify_target("e=3").unwrap(), (3, None));
        assert!(verify_target("i=2").is_err());
        assert!(verify_target("e=1,j=2").is_err());
    }

    #[test]
    fn coloring_shorthand() {
        assert!(coloring("max").is_ok());
        assert!(coloring(r#"{"builtin":"constant","params":{"color":3}}"#).is_ok());
        assert!(coloring("nonsense").is_err());
    }
}
