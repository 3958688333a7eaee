//! Text form: `boxes: [m#0, u#0]; wires: [(src, dst), ...]; in: q; out: p`
//! with an optional trailing `; loops: n`.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use super::{Diagram, Signature, Sink, Source};
use crate::error::{Error, Result};

impl Diagram {
    fn box_names(&self) -> Vec<String> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        self.boxes
            .iter()
            .map(|&g| {
                let k = counts.entry(g).or_insert(0);
                let s = format!("{}#{}", self.sig.generator(g).name, k);
                *k += 1;
                s
            })
            .collect()
    }

    pub fn to_literal(&self) -> String {
        let names = self.box_names();
        let src = |s: Source| match s {
            Source::Input(j) => format!("bnd.in[{j}]"),
            Source::BoxOut(b, k) => format!("{}.out[{k}]", names[b]),
        };
        let mut out = String::from("boxes: [");
        out.push_str(&names.join(", "));
        out.push_str("]; wires: [");
        for (idx, &s) in self.wires.iter().enumerate() {
            if idx > 0 {
                out.push_str(", ");
            }
            let dst = match self.sink_at(idx) {
                Sink::Output(i) => format!("bnd.out[{i}]"),
                Sink::BoxIn(b, k) => format!("{}.in[{k}]", names[b]),
            };
            let _ = write!(out, "({}, {})", src(s), dst);
        }
        let _ = write!(out, "]; in: {}; out: {}", self.inputs, self.outputs);
        if self.loops > 0 {
            let _ = write!(out, "; loops: {}", self.loops);
        }
        out
    }

    /// Parses the literal format against a signature.
    pub fn parse(sig: &Arc<Signature>, text: &str) -> Result<Diagram> {
        let mut boxes_txt = None;
        let mut wires_txt = None;
        let (mut inputs, mut outputs, mut loops) = (None, None, 0usize);
        for field in text.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, val) = field
                .split_once(':')
                .ok_or_else(|| perr(format!("field without ':' in {field:?}")))?;
            let val = val.trim();
            match key.trim() {
                "boxes" => boxes_txt = Some(bracketed(val)?),
                "wires" => wires_txt = Some(bracketed(val)?),
                "in" => inputs = Some(parse_usize(val)?),
                "out" => outputs = Some(parse_usize(val)?),
                "loops" => loops = parse_usize(val)?,
                other => return Err(perr(format!("unknown field {other:?}"))),
            }
        }
        let inputs = inputs.ok_or_else(|| perr("missing 'in'".into()))?;
        let outputs = outputs.ok_or_else(|| perr("missing 'out'".into()))?;
        let boxes_txt = boxes_txt.ok_or_else(|| perr("missing 'boxes'".into()))?;
        let wires_txt = wires_txt.ok_or_else(|| perr("missing 'wires'".into()))?;

        let mut boxes = Vec::new();
        let mut by_name: HashMap<String, usize> = HashMap::new();
        for item in boxes_txt.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, _) = item
                .split_once('#')
                .ok_or_else(|| perr(format!("box {item:?} lacks '#k'")))?;
            let g = sig
                .index_of(name)
                .ok_or_else(|| perr(format!("unknown generator {name:?}")))?;
            if by_name.insert(item.to_string(), boxes.len()).is_some() {
                return Err(perr(format!("box {item:?} listed twice")));
            }
            boxes.push(g);
        }

        let port = |p: &str| -> Result<(Option<usize>, bool, usize)> {
            let p = p.trim();
            let (owner, rest) = p
                .rsplit_once('.')
                .ok_or_else(|| perr(format!("bad port {p:?}")))?;
            let (dir, idx) = rest
                .strip_suffix(']')
                .and_then(|r| r.split_once('['))
                .ok_or_else(|| perr(format!("bad port {p:?}")))?;
            let idx = parse_usize(idx)?;
            let is_out = match dir {
                "out" => true,
                "in" => false,
                _ => return Err(perr(format!("bad port direction in {p:?}"))),
            };
            let owner = if owner == "bnd" {
                None
            } else {
                Some(
                    *by_name
                        .get(owner)
                        .ok_or_else(|| perr(format!("unknown box {owner:?}")))?,
                )
            };
            Ok((owner, is_out, idx))
        };

        let (in_offset, _, n_in, _) = super::offsets(sig, &boxes);
        let mut wires: Vec<Option<Source>> = vec![None; outputs + n_in];
        let mut rest = wires_txt.trim();
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| perr(format!("expected '(' in {rest:?}")))?;
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| perr("unbalanced '(' in wires".into()))?
                + open;
            let pair = &rest[open + 1..close];
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| perr(format!("wire {pair:?} needs two ports")))?;
            let src = match port(a)? {
                (None, false, j) if j < inputs => Source::Input(j),
                (Some(b), true, k) if k < sig.generator(boxes[b]).outputs => Source::BoxOut(b, k),
                _ => return Err(perr(format!("{} is not a source port", a.trim()))),
            };
            let dst = match port(b)? {
                (None, true, i) if i < outputs => i,
                (Some(bx), false, k) if k < sig.generator(boxes[bx]).inputs => outputs + in_offset[bx] + k,
                _ => return Err(perr(format!("{} is not a sink port", b.trim()))),
            };
            if wires[dst].replace(src).is_some() {
                return Err(perr(format!("sink {} wired twice", b.trim())));
            }
            rest = rest[close + 1..].trim_start_matches([',', ' ', '\n', '\t']);
        }
        let wires = wires
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| perr(format!("sink #{i} is not wired"))))
            .collect::<Result<Vec<_>>>()?;
        Diagram::from_parts(sig.clone(), outputs, inputs, boxes, wires, loops)
    }
}

fn perr(msg: String) -> Error {
    Error::Parse(msg)
}

fn bracketed(s: &str) -> Result<&str> {
    s.strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected [...], got {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| perr(format!("expected a nonnegative integer, got {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let sig = Signature::from_arities(&[("m", 1, 2), ("u", 1, 0)], &[]).unwrap();
        let m = Diagram::generator(&sig, "m").unwrap();
        let u = Diagram::generator(&sig, "u").unwrap();
        let d = m
            .compose(&u.tensor(&Diagram::identity(&sig, 1)).unwrap())
            .unwrap()
            .tensor(&Diagram::loop_diagram(&sig))
            .unwrap();
        let text = d.to_literal();
        assert_eq!(Diagram::parse(&sig, &text).unwrap(), d);
        assert!(text.ends_with("; loops: 1"));
    }

    #[test]
    fn explicit_literal() {
        let sig = Signature::from_arities(&[("T", 1, 1)], &[]).unwrap();
        let d = Diagram::parse(
            &sig,
            "boxes: [T#0]; wires: [(T#0.out[0], bnd.out[0]), (bnd.in[0], T#0.in[0])]; in: 1; out: 1",
        )
        .unwrap();
        assert_eq!(d, Diagram::generator(&sig, "T").unwrap());
        let closed = Diagram::parse(&sig, "boxes: [T#0]; wires: [(T#0.out[0], T#0.in[0])]; in: 0; out: 0").unwrap();
        assert_eq!(closed, d.trace_close().unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let sig = Signature::from_arities(&[("T", 1, 1)], &[]).unwrap();
        for bad in [
            "boxes: [T#0]; wires: []; in: 0; out: 0",
            "boxes: [X#0]; wires: []; in: 0; out: 0",
            "boxes: []; wires: [(bnd.out[0], bnd.in[0])]; in: 1; out: 1",
            "boxes: []; wires: []; in: 1",
        ] {
            assert!(Diagram::parse(&sig, bad).is_err(), "{bad}");
        }
    }
}
