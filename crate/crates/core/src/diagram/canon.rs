//! Canonical labelling of port-wired box graphs.
//!
//! Boxes reachable from the boundary are numbered by a port-ordered BFS from
//! the pinned boundary. Each closed component is numbered by BFS from a root
//! chosen among the smallest colour-refinement cell, keeping the
//! lexicographically least encoding. Because every port is ordered, fixing
//! one root determines the whole labelling of a connected component.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Diagram, Sink, Source};
use crate::error::{Error, Result};

/// Isomorphism class of a closed diagram, as its canonical literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosedDiagramKey(String);

impl ClosedDiagramKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClosedDiagramKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const UNSET: usize = usize::MAX;

impl Diagram {
    /// BFS over boxes following output ports then input ports, in port order.
    fn bfs(&self, feeds: &[Sink], seeds: &[usize], label: &mut [usize], order: &mut Vec<usize>) {
        let base = order.len();
        for &s in seeds {
            if label[s] == UNSET {
                label[s] = order.len() - base;
                order.push(s);
            }
        }
        let mut head = base;
        while head < order.len() {
            let b = order[head];
            head += 1;
            let gen = self.sig.generator(self.boxes[b]);
            for k in 0..gen.outputs {
                if let Sink::BoxIn(b2, _) = feeds[self.source_index(Source::BoxOut(b, k))] {
                    if label[b2] == UNSET {
                        label[b2] = order.len() - base;
                        order.push(b2);
                    }
                }
            }
            for j in 0..gen.inputs {
                if let Source::BoxOut(b2, _) = self.source(Sink::BoxIn(b, j)) {
                    if label[b2] == UNSET {
                        label[b2] = order.len() - base;
                        order.push(b2);
                    }
                }
            }
        }
    }

    fn encode(&self, order: &[usize], label: &[usize]) -> Vec<usize> {
        let mut enc = Vec::new();
        for &b in order {
            enc.push(self.boxes[b]);
            for j in 0..self.sig.generator(self.boxes[b]).inputs {
                match self.source(Sink::BoxIn(b, j)) {
                    Source::BoxOut(b2, k) => {
                        enc.push(label[b2] + 1);
                        enc.push(k);
                    }
                    Source::Input(i) => {
                        enc.push(0);
                        enc.push(i);
                    }
                }
            }
        }
        enc
    }

    /// Colour refinement restricted to one component; returns a colour per box of `group`.
    fn refine(&self, feeds: &[Sink], group: &[usize], local: &[usize]) -> Vec<usize> {
        let mut colour: Vec<usize> = group.iter().map(|&b| self.boxes[b]).collect();
        let mut ncol = 0;
        loop {
            let sigs: Vec<Vec<usize>> = group
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let gen = self.sig.generator(self.boxes[b]);
                    let mut s = vec![colour[i]];
                    for k in 0..gen.outputs {
                        if let Sink::BoxIn(b2, j) = feeds[self.source_index(Source::BoxOut(b, k))] {
                            s.push(colour[local[b2]]);
                            s.push(j);
                        }
                    }
                    for j in 0..gen.inputs {
                        if let Source::BoxOut(b2, k) = self.source(Sink::BoxIn(b, j)) {
                            s.push(colour[local[b2]]);
                            s.push(k);
                        }
                    }
                    s
                })
                .collect();
            let ranks: BTreeMap<&Vec<usize>, usize> = {
                let mut m = BTreeMap::new();
                for s in &sigs {
                    m.insert(s, 0);
                }
                for (r, v) in m.values_mut().enumerate() {
                    *v = r;
                }
                m
            };
            let next: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
            if ranks.len() == ncol {
                return next;
            }
            ncol = ranks.len();
            colour = next;
        }
    }

    /// Least encoding and box order of a closed connected component.
    fn canon_component(&self, feeds: &[Sink], group: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut local = vec![UNSET; self.boxes.len()];
        for (i, &b) in group.iter().enumerate() {
            local[b] = i;
        }
        let colour = self.refine(feeds, group, &local);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in colour.iter().enumerate() {
            cells.entry(c).or_default().push(group[i]);
        }
        let roots = cells
            .into_iter()
            .min_by_key(|(c, bs)| (bs.len(), *c))
            .map(|(_, bs)| bs)
            .expect("component has at least one box");
        let mut label = vec![UNSET; self.boxes.len()];
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for r in roots {
            for &b in group {
                label[b] = UNSET;
            }
            let mut order = Vec::with_capacity(group.len());
            self.bfs(feeds, &[r], &mut label, &mut order);
            let enc = self.encode(&order, &label);
            if best.as_ref().map_or(true, |(e, _)| enc < *e) {
                best = Some((enc, order));
            }
        }
        best.unwrap()
    }

    /// Canonical representative: equal for two diagrams iff they are isomorphic
    /// with the boundary held fixed.
    pub fn canonical(&self) -> Diagram {
        let feeds = self.feeds();
        let n = self.boxes.len();
        let mut label = vec![UNSET; n];
        let mut order = Vec::with_capacity(n);
        let mut seeds = Vec::new();
        for i in 0..self.outputs {
            if let Source::BoxOut(b, _) = self.wires[i] {
                seeds.push(b);
            }
        }
        for j in 0..self.inputs {
            if let Sink::BoxIn(b, _) = feeds[j] {
                seeds.push(b);
            }
        }
        self.bfs(&feeds, &seeds, &mut label, &mut order);
        if order.len() < n {
            let mut comps: Vec<(Vec<usize>, Vec<usize>)> = self
                .component_groups()
                .into_iter()
                .filter(|g| label[g[0]] == UNSET)
                .map(|g| self.canon_component(&feeds, &g))
                .collect();
            comps.sort();
            for (_, ord) in comps {
                for b in ord {
                    label[b] = order.len();
                    order.push(b);
                }
            }
        }
        let relabel = |s: Source| match s {
            Source::Input(j) => Source::Input(j),
            Source::BoxOut(b, k) => Source::BoxOut(label[b], k),
        };
        let mut wires: Vec<Source> = self.wires[..self.outputs].iter().map(|&s| relabel(s)).collect();
        for &b in &order {
            for j in 0..self.sig.generator(self.boxes[b]).inputs {
                wires.push(relabel(self.source(Sink::BoxIn(b, j))));
            }
        }
        let boxes = order.iter().map(|&b| self.boxes[b]).collect();
        Diagram::from_parts_unchecked(self.sig.clone(), self.outputs, self.inputs, boxes, wires, self.loops)
    }

    /// True when the stored wiring is already canonical.
    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Isomorphism-class key of a closed diagram.
    pub fn closed_key(&self) -> Result<ClosedDiagramKey> {
        if !self.is_closed() {
            return Err(Error::NotClosed {
                outputs: self.outputs,
                inputs: self.inputs,
            });
        }
        Ok(ClosedDiagramKey(self.canonical().to_literal()))
    }

    /// Keys of the connected components of a closed diagram, sorted.
    pub fn component_keys(&self) -> Result<Vec<ClosedDiagramKey>> {
        let mut keys = self
            .connected_components()?
            .iter()
            .map(|c| ClosedDiagramKey(c.canonical().to_literal()))
            .collect::<Vec<_>>();
        keys.sort();
        Ok(keys)
    }
}

#[cfg(test)]
mod tests {
    use super::super::Signature;
    use super::*;

    #[test]
    fn insertion_order_does_not_matter() {
        let sig = Signature::from_arities(&[("m", 1, 2), ("u", 1, 0)], &[]).unwrap();
        let m = Diagram::generator(&sig, "m").unwrap();
        let u = Diagram::generator(&sig, "u").unwrap();
        let a = m.tensor(&u).unwrap();
        // same wiring, boxes listed u first
        let b = Diagram::from_parts(
            sig.clone(),
            2,
            2,
            vec![1, 0],
            vec![Source::BoxOut(1, 0), Source::BoxOut(0, 0), Source::Input(0), Source::Input(1)],
            0,
        )
        .unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn separability_sides_differ() {
        let sig = Signature::from_arities(&[("m", 1, 2), ("u", 1, 0), ("c", 2, 0)], &[]).unwrap();
        let m = Diagram::generator(&sig, "m").unwrap();
        let c = Diagram::generator(&sig, "c").unwrap();
        let mc = m.compose(&c).unwrap();
        let u = Diagram::generator(&sig, "u").unwrap();
        assert_ne!(mc.canonical(), u.canonical());
    }

    #[test]
    fn closed_components_are_sorted() {
        let sig = Signature::from_arities(&[("c", 0, 2), ("d", 2, 0)], &[]).unwrap();
        let c = Diagram::generator(&sig, "c").unwrap();
        let d = Diagram::generator(&sig, "d").unwrap();
        let lp = c.compose(&d).unwrap();
        let two = lp.tensor(&Diagram::loop_diagram(&sig)).unwrap();
        let two_rev = Diagram::loop_diagram(&sig).tensor(&lp).unwrap();
        assert_eq!(two.closed_key().unwrap(), two_rev.closed_key().unwrap());
        assert_eq!(two.component_keys().unwrap().len(), 2);
    }

    #[test]
    fn cyclic_trace_keys_agree() {
        let sig = Signature::from_arities(&[("m", 1, 2), ("c", 2, 0)], &[]).unwrap();
        let m = Diagram::generator(&sig, "m").unwrap();
        let c = Diagram::generator(&sig, "c").unwrap();
        let f = m.tensor(&Diagram::identity(&sig, 1)).unwrap(); // (2,3)
        let g2 = c.tensor(&Diagram::identity(&sig, 1)).unwrap().compose(&m).unwrap(); // (3,2)
        let fg = f.compose(&g2).unwrap().trace_close().unwrap();
        let gf = g2.compose(&f).unwrap().trace_close().unwrap();
        assert_eq!(fg.closed_key().unwrap(), gf.closed_key().unwrap());
    }
}
