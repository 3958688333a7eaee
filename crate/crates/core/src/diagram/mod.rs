//! String diagrams over a signature, modelled as perfect matchings between
//! sources (box outputs and open inputs) and sinks (box inputs and open outputs).

mod canon;
mod lincombo;
mod literal;
pub mod sample;
mod signature;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use canon::ClosedDiagramKey;
pub use lincombo::LinCombo;
pub use signature::{Generator, Signature};

use crate::error::{Error, Result};

/// Where a wire starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// Open input `j` of the diagram.
    Input(usize),
    /// Output port `k` of box `b`.
    BoxOut(usize, usize),
}

/// Where a wire ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sink {
    /// Open output `i` of the diagram.
    Output(usize),
    /// Input port `k` of box `b`.
    BoxIn(usize, usize),
}

/// One spanning element of Con^{p,q}: `p` open outputs, `q` open inputs.
#[derive(Clone)]
pub struct Diagram {
    sig: Arc<Signature>,
    outputs: usize,
    inputs: usize,
    boxes: Vec<usize>,
    in_offset: Vec<usize>,
    out_offset: Vec<usize>,
    /// Indexed by sink: open outputs first, then box inputs in box order.
    wires: Vec<Source>,
    /// Closed loops containing no boxes.
    loops: usize,
}

fn offsets(sig: &Signature, boxes: &[usize]) -> (Vec<usize>, Vec<usize>, usize, usize) {
    let mut ins = Vec::with_capacity(boxes.len());
    let mut outs = Vec::with_capacity(boxes.len());
    let (mut ni, mut no) = (0, 0);
    for &b in boxes {
        ins.push(ni);
        outs.push(no);
        ni += sig.generator(b).inputs;
        no += sig.generator(b).outputs;
    }
    (ins, outs, ni, no)
}

impl Diagram {
    /// Builds a diagram from raw parts, checking that the wiring is a bijection.
    pub fn from_parts(
        sig: Arc<Signature>,
        outputs: usize,
        inputs: usize,
        boxes: Vec<usize>,
        wires: Vec<Source>,
        loops: usize,
    ) -> Result<Self> {
        if let Some(&b) = boxes.iter().find(|&&b| b >= sig.generators().len()) {
            return Err(Error::InvalidDiagram(format!("unknown generator index {b}")));
        }
        let (in_offset, out_offset, n_in, n_out) = offsets(&sig, &boxes);
        if wires.len() != outputs + n_in {
            return Err(Error::InvalidDiagram(format!(
                "{} wires for {} sinks",
                wires.len(),
                outputs + n_in
            )));
        }
        if inputs + n_out != wires.len() {
            return Err(Error::InvalidDiagram(format!(
                "{} sources but {} sinks",
                inputs + n_out,
                wires.len()
            )));
        }
        let mut seen = vec![false; inputs + n_out];
        for s in &wires {
            let idx = match *s {
                Source::Input(j) if j < inputs => j,
                Source::BoxOut(b, k) if b < boxes.len() && k < sig.generator(boxes[b]).outputs => {
                    inputs + out_offset[b] + k
                }
                _ => return Err(Error::InvalidDiagram(format!("dangling source {s:?}"))),
            };
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidDiagram(format!("source {s:?} used twice")));
            }
        }
        Ok(Diagram {
            sig,
            outputs,
            inputs,
            boxes,
            in_offset,
            out_offset,
            wires,
            loops,
        })
    }

    pub(crate) fn from_parts_unchecked(
        sig: Arc<Signature>,
        outputs: usize,
        inputs: usize,
        boxes: Vec<usize>,
        wires: Vec<Source>,
        loops: usize,
    ) -> Self {
        let (in_offset, out_offset, _, _) = offsets(&sig, &boxes);
        let d = Diagram {
            sig,
            outputs,
            inputs,
            boxes,
            in_offset,
            out_offset,
            wires,
            loops,
        };
        debug_assert!(
            Diagram::from_parts(
                d.sig.clone(),
                d.outputs,
                d.inputs,
                d.boxes.clone(),
                d.wires.clone(),
                d.loops
            )
            .is_ok(),
            "internal construction produced an invalid diagram"
        );
        d
    }

    pub fn identity(sig: &Arc<Signature>, n: usize) -> Self {
        Self::from_parts_unchecked(sig.clone(), n, n, Vec::new(), (0..n).map(Source::Input).collect(), 0)
    }

    /// The empty closed diagram (the unit of Con^{0,0}).
    pub fn empty(sig: &Arc<Signature>) -> Self {
        Self::identity(sig, 0)
    }

    /// A single box-free loop: the dimension invariant.
    pub fn loop_diagram(sig: &Arc<Signature>) -> Self {
        Self::from_parts_unchecked(sig.clone(), 0, 0, Vec::new(), Vec::new(), 1)
    }

    /// Box-free permutation wiring input `i` to output `sigma[i]` (0-based).
    pub fn permutation(sig: &Arc<Signature>, sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut wires = vec![None; n];
        for (i, &s) in sigma.iter().enumerate() {
            if s >= n || wires[s].is_some() {
                return Err(Error::InvalidDiagram(format!("{sigma:?} is not a permutation")));
            }
            wires[s] = Some(Source::Input(i));
        }
        Ok(Self::from_parts_unchecked(
            sig.clone(),
            n,
            n,
            Vec::new(),
            wires.into_iter().map(Option::unwrap).collect(),
            0,
        ))
    }

    /// A single box with its ports exposed in order.
    pub fn generator(sig: &Arc<Signature>, name: &str) -> Result<Self> {
        let g = sig
            .index_of(name)
            .ok_or_else(|| Error::InvalidDiagram(format!("no generator named {name}")))?;
        let gen = sig.generator(g);
        let mut wires: Vec<Source> = (0..gen.outputs).map(|k| Source::BoxOut(0, k)).collect();
        wires.extend((0..gen.inputs).map(Source::Input));
        Ok(Self::from_parts_unchecked(sig.clone(), gen.outputs, gen.inputs, vec![g], wires, 0))
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// `(p, q)`: open outputs and open inputs.
    pub fn arity(&self) -> (usize, usize) {
        (self.outputs, self.inputs)
    }

    pub fn boxes(&self) -> &[usize] {
        &self.boxes
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    /// Number of wires, counting each box-free loop as one.
    pub fn num_wires(&self) -> usize {
        self.wires.len() + self.loops
    }

    pub fn is_closed(&self) -> bool {
        self.outputs == 0 && self.inputs == 0
    }

    pub fn wires(&self) -> &[Source] {
        &self.wires
    }

    pub fn sink_index(&self, s: Sink) -> usize {
        match s {
            Sink::Output(i) => i,
            Sink::BoxIn(b, k) => self.outputs + self.in_offset[b] + k,
        }
    }

    pub fn sink_at(&self, idx: usize) -> Sink {
        if idx < self.outputs {
            return Sink::Output(idx);
        }
        let r = idx - self.outputs;
        let b = self.in_offset.partition_point(|&o| o <= r) - 1;
        // boxes with zero inputs share offsets; pick the last one that actually has inputs
        let mut b = b;
        while self.sig.generator(self.boxes[b]).inputs <= r - self.in_offset[b] {
            b += 1;
        }
        Sink::BoxIn(b, r - self.in_offset[b])
    }

    pub fn source(&self, s: Sink) -> Source {
        self.wires[self.sink_index(s)]
    }

    pub(crate) fn source_index(&self, s: Source) -> usize {
        match s {
            Source::Input(j) => j,
            Source::BoxOut(b, k) => self.inputs + self.out_offset[b] + k,
        }
    }

    /// For every source (indexed as in `source_index`) the sink it feeds.
    pub fn feeds(&self) -> Vec<Sink> {
        let n = self.wires.len();
        let mut out = vec![Sink::Output(usize::MAX); n];
        for (idx, s) in self.wires.iter().enumerate() {
            out[self.source_index(*s)] = self.sink_at(idx);
        }
        out
    }

    fn check_sig(&self, other: &Diagram) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig.same_generators(&other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// `self ∘ f`: glue the open outputs of `f` to the open inputs of `self`.
    pub fn compose(&self, f: &Diagram) -> Result<Diagram> {
        self.check_sig(f)?;
        if self.inputs != f.outputs {
            return Err(Error::Arity(format!(
                "cannot compose g:({},{}) after f:({},{})",
                self.outputs, self.inputs, f.outputs, f.inputs
            )));
        }
        let nf = f.boxes.len();
        let map_g = |s: Source| match s {
            Source::Input(j) => f.wires[j],
            Source::BoxOut(b, k) => Source::BoxOut(b + nf, k),
        };
        let mut wires = Vec::with_capacity(self.outputs + f.wires.len() + self.wires.len());
        wires.extend(self.wires[..self.outputs].iter().map(|&s| map_g(s)));
        wires.extend_from_slice(&f.wires[f.outputs..]);
        wires.extend(self.wires[self.outputs..].iter().map(|&s| map_g(s)));
        let mut boxes = f.boxes.clone();
        boxes.extend_from_slice(&self.boxes);
        Ok(Self::from_parts_unchecked(
            self.sig.clone(),
            self.outputs,
            f.inputs,
            boxes,
            wires,
            self.loops + f.loops,
        ))
    }

    /// Side-by-side juxtaposition; boundary orders are concatenated.
    pub fn tensor(&self, g: &Diagram) -> Result<Diagram> {
        self.check_sig(g)?;
        let nf = self.boxes.len();
        let map_g = |s: Source| match s {
            Source::Input(j) => Source::Input(j + self.inputs),
            Source::BoxOut(b, k) => Source::BoxOut(b + nf, k),
        };
        let mut wires = Vec::with_capacity(self.wires.len() + g.wires.len());
        wires.extend_from_slice(&self.wires[..self.outputs]);
        wires.extend(g.wires[..g.outputs].iter().map(|&s| map_g(s)));
        wires.extend_from_slice(&self.wires[self.outputs..]);
        wires.extend(g.wires[g.outputs..].iter().map(|&s| map_g(s)));
        let mut boxes = self.boxes.clone();
        boxes.extend_from_slice(&g.boxes);
        Ok(Self::from_parts_unchecked(
            self.sig.clone(),
            self.outputs + g.outputs,
            self.inputs + g.inputs,
            boxes,
            wires,
            self.loops + g.loops,
        ))
    }

    /// n-fold composite `self ∘ ... ∘ self` (identity for n = 0).
    pub fn power(&self, n: usize) -> Result<Diagram> {
        if self.outputs != self.inputs {
            return Err(Error::Arity(format!(
                "power of non-endomorphism ({},{})",
                self.outputs, self.inputs
            )));
        }
        let mut acc = Diagram::identity(&self.sig, self.outputs);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Wires open output `i` back to open input `i` for every `i`.
    pub fn trace_close(&self) -> Result<Diagram> {
        let n = self.outputs;
        if n != self.inputs {
            return Err(Error::Arity(format!(
                "trace of non-square diagram ({},{})",
                self.outputs, self.inputs
            )));
        }
        let resolve = |mut j: usize| -> Source {
            loop {
                match self.wires[j] {
                    Source::Input(k) => j = k,
                    s => return s,
                }
            }
        };
        let wires: Vec<Source> = self.wires[n..]
            .iter()
            .map(|&s| match s {
                Source::Input(j) => resolve(j),
                s => s,
            })
            .collect();
        // cycles of the boundary-only map j -> k (output j fed by input k)
        let mut state = vec![0u8; n]; // 0 unseen, 1 on current walk, 2 done
        let mut loops = 0;
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut j = start;
            loop {
                if state[j] == 1 {
                    loops += 1;
                    break;
                }
                if state[j] == 2 {
                    break;
                }
                state[j] = 1;
                path.push(j);
                match self.wires[j] {
                    Source::Input(k) => j = k,
                    Source::BoxOut(..) => break,
                }
            }
            for p in path {
                state[p] = 2;
            }
        }
        Ok(Self::from_parts_unchecked(
            self.sig.clone(),
            0,
            0,
            self.boxes.clone(),
            wires,
            self.loops + loops,
        ))
    }

    /// Union-find labels of boxes by wiring connectivity.
    fn box_components(&self) -> Vec<usize> {
        let n = self.boxes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (idx, s) in self.wires.iter().enumerate().skip(self.outputs) {
            if let (Sink::BoxIn(b, _), Source::BoxOut(b2, _)) = (self.sink_at(idx), *s) {
                let (ra, rb) = (find(&mut parent, b), find(&mut parent, b2));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        (0..n).map(|b| find(&mut parent, b)).collect()
    }

    /// Boxes grouped by connected component, each group sorted, groups ordered by first box.
    pub(crate) fn component_groups(&self) -> Vec<Vec<usize>> {
        let comp = self.box_components();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_to_group = std::collections::HashMap::new();
        for (b, r) in comp.into_iter().enumerate() {
            let g = *root_to_group.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(b);
        }
        groups
    }

    /// Sub-diagram on a set of boxes forming a closed component.
    pub(crate) fn restrict_closed(&self, group: &[usize]) -> Diagram {
        let mut pos = vec![usize::MAX; self.boxes.len()];
        for (i, &b) in group.iter().enumerate() {
            pos[b] = i;
        }
        let boxes: Vec<usize> = group.iter().map(|&b| self.boxes[b]).collect();
        let mut wires = Vec::new();
        for &b in group {
            let nin = self.sig.generator(self.boxes[b]).inputs;
            for k in 0..nin {
                match self.source(Sink::BoxIn(b, k)) {
                    Source::BoxOut(b2, k2) => wires.push(Source::BoxOut(pos[b2], k2)),
                    Source::Input(_) => unreachable!("closed component touches the boundary"),
                }
            }
        }
        Self::from_parts_unchecked(self.sig.clone(), 0, 0, boxes, wires, 0)
    }

    /// Splits a closed diagram into its connected components; each box-free
    /// loop is its own component.
    pub fn connected_components(&self) -> Result<Vec<Diagram>> {
        if !self.is_closed() {
            return Err(Error::NotClosed {
                outputs: self.outputs,
                inputs: self.inputs,
            });
        }
        let mut out: Vec<Diagram> = self
            .component_groups()
            .iter()
            .map(|g| self.restrict_closed(g))
            .collect();
        out.extend((0..self.loops).map(|_| Diagram::loop_diagram(&self.sig)));
        Ok(out)
    }

    /// True when some component (or loop) does not reach the open boundary.
    pub fn has_closed_components(&self) -> bool {
        if self.loops > 0 {
            return true;
        }
        let comp = self.box_components();
        let mut touches = vec![false; self.boxes.len()];
        for (idx, s) in self.wires.iter().enumerate() {
            match (self.sink_at(idx), *s) {
                (Sink::Output(_), Source::BoxOut(b, _)) => touches[comp[b]] = true,
                (Sink::BoxIn(b, _), Source::Input(_)) => touches[comp[b]] = true,
                _ => {}
            }
        }
        (0..self.boxes.len()).any(|b| comp[b] == b && !touches[b])
    }

    /// Count of connected components of a closed diagram.
    pub fn component_count(&self) -> Result<usize> {
        if !self.is_closed() {
            return Err(Error::NotClosed {
                outputs: self.outputs,
                inputs: self.inputs,
            });
        }
        Ok(self.component_groups().len() + self.loops)
    }

    /// Number of boxes of the named generator.
    pub fn count_generator(&self, name: &str) -> usize {
        match self.sig.index_of(name) {
            Some(g) => self.boxes.iter().filter(|&&b| b == g).count(),
            None => 0,
        }
    }

    fn cmp_key(&self) -> (usize, usize, &[usize], &[Source], usize) {
        (self.outputs, self.inputs, &self.boxes, &self.wires, self.loops)
    }
}

/// Incremental construction of a diagram by naming boxes and connecting ports.
pub struct Builder {
    sig: Arc<Signature>,
    outputs: usize,
    inputs: usize,
    boxes: Vec<usize>,
    out_sinks: Vec<Option<Source>>,
    box_sinks: Vec<Vec<Option<Source>>>,
}

impl Builder {
    pub fn new(sig: &Arc<Signature>, outputs: usize, inputs: usize) -> Self {
        Builder {
            sig: sig.clone(),
            outputs,
            inputs,
            boxes: Vec::new(),
            out_sinks: vec![None; outputs],
            box_sinks: Vec::new(),
        }
    }

    /// Adds a box of the named generator and returns its index.
    pub fn add(&mut self, name: &str) -> Result<usize> {
        let g = self
            .sig
            .index_of(name)
            .ok_or_else(|| Error::InvalidDiagram(format!("no generator named {name}")))?;
        self.boxes.push(g);
        self.box_sinks.push(vec![None; self.sig.generator(g).inputs]);
        Ok(self.boxes.len() - 1)
    }

    pub fn connect(&mut self, src: Source, dst: Sink) -> Result<()> {
        let slot = match dst {
            Sink::Output(i) => self.out_sinks.get_mut(i),
            Sink::BoxIn(b, k) => self.box_sinks.get_mut(b).and_then(|v| v.get_mut(k)),
        }
        .ok_or_else(|| Error::InvalidDiagram(format!("no sink {dst:?}")))?;
        if slot.replace(src).is_some() {
            return Err(Error::InvalidDiagram(format!("sink {dst:?} wired twice")));
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Diagram> {
        let wires = self
            .out_sinks
            .into_iter()
            .chain(self.box_sinks.into_iter().flatten())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidDiagram("unwired sink".into()))?;
        Diagram::from_parts(self.sig, self.outputs, self.inputs, self.boxes, wires, 0)
    }
}

/// Structural equality of the stored wiring; use `canonical()` first to compare
/// up to isomorphism.
impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_key() == other.cmp_key()
    }
}

impl Eq for Diagram {}

impl Hash for Diagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cmp_key().hash(state)
    }
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.boxes
            .len()
            .cmp(&other.boxes.len())
            .then_with(|| self.cmp_key().cmp(&other.cmp_key()))
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({})", self.to_literal())
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}
