//! Line-oriented net text format.
//!
//! ```text
//! # comment
//! net <name>
//! place <id> [tokens=<n>]
//! trans <id>
//! arc <src> <dst> [weight=<n>]
//! ```
//!
//! Ids are any whitespace-free words. Arcs must connect a place and a
//! transition; repeated arcs add up.

use std::collections::HashMap;
use std::fmt::Write;

use petri_causal_core::net::NetError;
use petri_causal_core::{Net, NetBuilder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Parses `key=value` options with numeric values, returning `default` when
/// the option is absent.
fn option(line: usize, words: &[&str], key: &str, default: u32) -> Result<u32, ParseError> {
    let mut value = default;
    for w in words {
        let Some((k, v)) = w.split_once('=') else {
            return Err(err(line, format!("unexpected `{w}`")));
        };
        if k != key {
            return Err(err(line, format!("unknown option `{k}`")));
        }
        value = v.parse().map_err(|_| err(line, format!("`{v}` is not a non-negative integer")))?;
    }
    Ok(value)
}

pub fn parse_net(text: &str) -> Result<Net, ParseError> {
    let mut name: Option<String> = None;
    let mut builder = NetBuilder::new("");
    let mut trans_lines: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = words.split_first() else {
            continue;
        };
        let build = |e: NetError| err(line, e.to_string());
        match (kw, rest) {
            ("net", [n]) => {
                if name.is_some() {
                    return Err(err(line, "net name given twice"));
                }
                name = Some((*n).to_string());
            }
            ("place", [id, opts @ ..]) => {
                let tokens = option(line, opts, "tokens", 0)?;
                builder.place(*id, tokens).map_err(build)?;
            }
            ("trans", [id]) => {
                builder.transition(*id).map_err(build)?;
                trans_lines.insert((*id).to_string(), line);
            }
            ("arc", [src, dst, opts @ ..]) => {
                let weight = option(line, opts, "weight", 1)?;
                builder.arc(*src, *dst, weight).map_err(build)?;
            }
            ("net" | "place" | "trans" | "arc", _) => {
                return Err(err(line, format!("malformed `{kw}` statement")));
            }
            _ => return Err(err(line, format!("unknown statement `{kw}`"))),
        }
    }
    builder.set_name(name.unwrap_or_else(|| "unnamed".to_string()));
    builder.build().map_err(|e| {
        let line = match &e {
            NetError::EmptyPreset(t) => trans_lines.get(t).copied().unwrap_or(0),
            _ => 0,
        };
        err(line, e.to_string())
    })
}

/// Renders `net` in the text format; `parse_net` reads it back unchanged.
pub fn write_net(net: &Net) -> String {
    let mut out = String::new();
    writeln!(out, "net {}", net.name()).unwrap();
    for s in net.places() {
        match net.initial_marking().count(&s) {
            0 => writeln!(out, "place {}", net.place_name(s)).unwrap(),
            k => writeln!(out, "place {} tokens={k}", net.place_name(s)).unwrap(),
        }
    }
    for t in net.transitions() {
        writeln!(out, "trans {}", net.transition_name(t)).unwrap();
    }
    let weight = |w: u32| if w == 1 { String::new() } else { format!(" weight={w}") };
    for t in net.transitions() {
        for (s, w) in net.preset(t).iter() {
            writeln!(out, "arc {} {}{}", net.place_name(*s), net.transition_name(t), weight(w)).unwrap();
        }
        for (s, w) in net.postset(t).iter() {
            writeln!(out, "arc {} {}{}", net.transition_name(t), net.place_name(*s), weight(w)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_net() {
        let net = parse_net("# comment\nnet n\nplace s tokens=2 # trailing\ntrans t\narc s t weight=2\narc t s\n").unwrap();
        assert_eq!(net.name(), "n");
        assert_eq!((net.place_count(), net.transition_count()), (1, 1));
        let s = net.place_id("s").unwrap();
        let t = net.transition_id("t").unwrap();
        assert_eq!(net.weight_in(s, t), 2);
        assert_eq!(net.weight_out(t, s), 1);
        assert_eq!(net.initial_marking().count(&s), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("place s\nplace s\n", 2, "duplicate"),
            ("place s\ntrans t\narc s u\n", 3, "unknown node"),
            ("place s\nplace r\narc s r\n", 3, "two places"),
            ("place s tokens=x\n", 1, "not a non-negative integer"),
            ("place s colour=3\n", 1, "unknown option"),
            ("bogus\n", 1, "unknown statement"),
            ("arc s\n", 1, "malformed"),
            ("place s\ntrans t\narc t s\n", 2, "empty preset"),
            ("net a\nnet b\n", 2, "twice"),
            ("place s\ntrans t\narc s t weight=0\n", 3, "weight 0"),
        ];
        for (text, line, needle) in cases {
            let e = parse_net(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn write_then_parse_round_trips() {
        let text = "net w\nplace a tokens=1\nplace b\ntrans t\narc a t weight=2\narc t b\n";
        let net = parse_net(text).unwrap();
        assert_eq!(write_net(&net), text);
    }
}
