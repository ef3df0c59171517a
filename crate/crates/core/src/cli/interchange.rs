//! JSON encoding of ECC derivations.
//!
//! Every term is stored in surface syntax, so decoding re-parses the whole
//! tree and nothing from the encoder is trusted by the verifier.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{EccDerivation, EccRule, EccSide};
use crate::syntax::{parse_term, print_term, ParseError};
use crate::term::{Context, Judgment, Name};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed derivation file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("in `{text}`: {source}")]
    Term { text: String, source: ParseError },
    #[error("`{0}` is not an identifier")]
    BadName(String),
    #[error("side object must be empty, a level, or a lower/upper pair")]
    BadSide,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    name: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Side {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Node {
    rule: String,
    ctx: Vec<Entry>,
    term: String,
    #[serde(rename = "type")]
    ty: String,
    side: Side,
    premises: Vec<Node>,
}

fn encode_node(d: &EccDerivation) -> Node {
    let j = &d.conclusion;
    Node {
        rule: d.rule.name().to_string(),
        ctx: j
            .ctx
            .entries()
            .iter()
            .map(|(x, a)| Entry {
                name: x.to_string(),
                ty: print_term(a),
            })
            .collect(),
        term: print_term(&j.subject),
        ty: print_term(&j.ty),
        side: match &d.side {
            EccSide::None => Side::default(),
            EccSide::Level(l) => Side {
                level: Some(*l),
                ..Side::default()
            },
            EccSide::Cum { lower, upper } => Side {
                lower: Some(print_term(lower)),
                upper: Some(print_term(upper)),
                ..Side::default()
            },
        },
        premises: d.premises.iter().map(encode_node).collect(),
    }
}

fn term(text: &str) -> Result<crate::term::Term, DecodeError> {
    parse_term(text).map_err(|source| DecodeError::Term {
        text: text.to_string(),
        source,
    })
}

fn decode_node(n: Node) -> Result<EccDerivation, DecodeError> {
    stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
        let rule = EccRule::from_name(&n.rule).ok_or_else(|| DecodeError::UnknownRule(n.rule.clone()))?;
        let mut entries: Vec<(Name, crate::term::Term)> = Vec::with_capacity(n.ctx.len());
        for e in &n.ctx {
            if !crate::syntax::is_identifier(&e.name) {
                return Err(DecodeError::BadName(e.name.clone()));
            }
            entries.push((Name::from(e.name.as_str()), term(&e.ty)?));
        }
        let side = match (n.side.level, n.side.lower, n.side.upper) {
            (None, None, None) => EccSide::None,
            (Some(l), None, None) => EccSide::Level(l),
            (None, Some(lo), Some(up)) => EccSide::Cum {
                lower: term(&lo)?,
                upper: term(&up)?,
            },
            _ => return Err(DecodeError::BadSide),
        };
        let conclusion = Judgment::new(Context::from_entries(entries), term(&n.term)?, term(&n.ty)?);
        let premises = n.premises.into_iter().map(decode_node).collect::<Result<_, _>>()?;
        Ok(EccDerivation {
            rule,
            conclusion,
            side,
            premises,
        })
    })
}

pub fn encode(d: &EccDerivation) -> String {
    let mut out = serde_json::to_string_pretty(&encode_node(d)).expect("derivations serialize");
    out.push('\n');
    out
}

pub fn decode(text: &str) -> Result<EccDerivation, DecodeError> {
    // Deeply nested files are parsed on a dedicated stack instead of being
    // cut off by a recursion limit.
    stacker::grow(64 * 1024 * 1024, || {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let node = Node::deserialize(&mut de)?;
        de.end()?;
        decode_node(node)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::principal_of;
    use crate::reduce::Fuel;
    use crate::syntax::{parse_context, parse_term};

    #[test]
    fn round_trip() {
        let g = parse_context("A : Type0\nf : Pi x : Type1 . Prop").unwrap();
        let m = parse_term("f A").unwrap();
        let d = principal_of(&g, &m, &mut Fuel::new(100_000)).unwrap();
        let back = decode(&encode(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rejects_unknown_rules_and_fields() {
        let text = r#"{"rule":"Axe","ctx":[],"term":"Prop","type":"Type0","side":{},"premises":[]}"#;
        assert!(matches!(decode(text), Err(DecodeError::UnknownRule(_))));
        let text = r#"{"rule":"Ax","ctx":[],"term":"Prop","type":"Type0","side":{"level":1,"upper":"Prop"},"premises":[]}"#;
        assert!(matches!(decode(text), Err(DecodeError::BadSide)));
        let text = r#"{"rule":"Ax","ctx":[],"term":"Prop","type":"Type0","side":{},"premises":[],"x":1}"#;
        assert!(matches!(decode(text), Err(DecodeError::Json(_))));
    }
}
