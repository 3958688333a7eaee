//! Finite spanning sets of Con^{p,q}.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{Builder, Diagram, Signature, Sink, Source};
use crate::error::{Error, Result};

/// Default hard cap on candidate wirings for the generic walker.
pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DedupStats {
    /// Wirings generated before deduplication.
    pub candidates: u64,
    /// Wirings whose canonical form had already been seen.
    pub duplicates: u64,
    /// Wirings dropped because they contain closed components.
    pub discarded: u64,
}

/// Which spanning-set strategy to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Enumerator {
    Generic,
    Permutation,
    Brauer,
    Partition,
    Cobordism,
    Wreath,
}

impl FromStr for Enumerator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "generic" => Enumerator::Generic,
            "permutation" => Enumerator::Permutation,
            "brauer" => Enumerator::Brauer,
            "partition" => Enumerator::Partition,
            "cobordism" => Enumerator::Cobordism,
            "wreath" => Enumerator::Wreath,
            _ => return Err(Error::Parse(format!("unknown enumerator {s:?}"))),
        })
    }
}

impl fmt::Display for Enumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Enumerator::Generic => "generic",
            Enumerator::Permutation => "permutation",
            Enumerator::Brauer => "brauer",
            Enumerator::Partition => "partition",
            Enumerator::Cobordism => "cobordism",
            Enumerator::Wreath => "wreath",
        };
        f.write_str(s)
    }
}

/// Canonical, duplicate-free diagrams of one boundary arity.
#[derive(Clone, Debug)]
pub struct SpanningSet {
    pub signature: Arc<Signature>,
    pub outputs: usize,
    pub inputs: usize,
    /// Box cutoff (generic) or genus cutoff (cobordism), where applicable.
    pub cutoff: Option<usize>,
    pub enumerator: Enumerator,
    pub diagrams: Vec<Diagram>,
    pub stats: DedupStats,
}

impl SpanningSet {
    fn from_candidates(
        sig: &Arc<Signature>,
        outputs: usize,
        inputs: usize,
        cutoff: Option<usize>,
        enumerator: Enumerator,
        cands: impl IntoIterator<Item = Diagram>,
    ) -> Self {
        let mut stats = DedupStats::default();
        let mut set = BTreeSet::new();
        for d in cands {
            stats.candidates += 1;
            if !set.insert(d.canonical()) {
                stats.duplicates += 1;
            }
        }
        SpanningSet {
            signature: sig.clone(),
            outputs,
            inputs,
            cutoff,
            enumerator,
            diagrams: set.into_iter().collect(),
            stats,
        }
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.outputs, self.inputs)
    }
}

fn saturating_factorial(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |a, k| a.saturating_mul(k))
}

fn multisets(ngen: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(ngen: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for g in start..ngen {
            cur.push(g);
            rec(ngen, size, g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(ngen, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Every wiring of every box multiset with at most `max_boxes` boxes, up to
/// canonical form. Open diagrams with a component not reaching the boundary
/// are dropped (they are scalar multiples of smaller diagrams), as are free loops.
pub fn enumerate_generic(
    sig: &Arc<Signature>,
    outputs: usize,
    inputs: usize,
    max_boxes: usize,
    cap: u64,
) -> Result<SpanningSet> {
    let ngen = sig.generators().len();
    let mut plans = Vec::new();
    let mut total: u64 = 0;
    for size in 0..=max_boxes {
        if ngen == 0 && size > 0 {
            break;
        }
        for boxes in multisets(ngen, size) {
            let n_out: usize = boxes.iter().map(|&g| sig.generator(g).outputs).sum();
            let n_in: usize = boxes.iter().map(|&g| sig.generator(g).inputs).sum();
            if inputs + n_out != outputs + n_in {
                continue;
            }
            total = total.saturating_add(saturating_factorial(inputs + n_out));
            if total > cap {
                return Err(Error::Budget(format!(
                    "more than {cap} candidate wirings for ({outputs},{inputs}) with max_boxes={max_boxes}"
                )));
            }
            plans.push(boxes);
        }
    }
    let closed = outputs == 0 && inputs == 0;
    let mut stats = DedupStats::default();
    let mut set = BTreeSet::new();
    for boxes in plans {
        let mut sources: Vec<Source> = (0..inputs).map(Source::Input).collect();
        for (b, &g) in boxes.iter().enumerate() {
            sources.extend((0..sig.generator(g).outputs).map(|k| Source::BoxOut(b, k)));
        }
        let mut used = vec![false; sources.len()];
        let mut wires = Vec::with_capacity(sources.len());
        walk(&sources, &mut used, &mut wires, &mut |w: &[Source]| {
            stats.candidates += 1;
            let d = Diagram::from_parts_unchecked(sig.clone(), outputs, inputs, boxes.clone(), w.to_vec(), 0);
            if !closed && d.has_closed_components() {
                stats.discarded += 1;
                return;
            }
            if !set.insert(d.canonical()) {
                stats.duplicates += 1;
            }
        });
    }
    Ok(SpanningSet {
        signature: sig.clone(),
        outputs,
        inputs,
        cutoff: Some(max_boxes),
        enumerator: Enumerator::Generic,
        diagrams: set.into_iter().collect(),
        stats,
    })
}

fn walk(sources: &[Source], used: &mut [bool], wires: &mut Vec<Source>, leaf: &mut impl FnMut(&[Source])) {
    if wires.len() == sources.len() {
        leaf(wires);
        return;
    }
    for i in 0..sources.len() {
        if !used[i] {
            used[i] = true;
            wires.push(sources[i]);
            walk(sources, used, wires, leaf);
            wires.pop();
            used[i] = false;
        }
    }
}

/// All permutations of `n` strands, in lexicographic order of `sigma`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// The p! box-free permutation diagrams.
pub fn enumerate_permutations(sig: &Arc<Signature>, p: usize) -> SpanningSet {
    let cands = permutations(p)
        .into_iter()
        .map(|s| Diagram::permutation(sig, &s).expect("valid permutation"));
    SpanningSet::from_candidates(sig, p, p, None, Enumerator::Permutation, cands)
}

fn require(sig: &Signature, name: &str, outputs: usize, inputs: usize) -> Result<()> {
    match sig.index_of(name).map(|g| sig.generator(g)) {
        Some(g) if g.outputs == outputs && g.inputs == inputs => Ok(()),
        _ => Err(Error::InvalidSignature(format!(
            "enumerator needs generator {name} of arity ({outputs},{inputs})"
        ))),
    }
}

/// All perfect matchings of a list of points.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = rest[0];
        for i in 1..rest.len() {
            cur.push((a, rest[i]));
            let mut r: Vec<usize> = rest[1..].to_vec();
            r.remove(i - 1);
            rec(&r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    }
    out
}

/// Brauer diagrams: perfect matchings of the p+q boundary points built from
/// strands, cups `d:(2,0)` and caps `c:(0,2)`.
pub fn enumerate_brauer(sig: &Arc<Signature>, p: usize, q: usize) -> Result<SpanningSet> {
    require(sig, "c", 0, 2)?;
    require(sig, "d", 2, 0)?;
    let mut cands = Vec::new();
    // points 0..p are open outputs, p..p+q open inputs
    for m in perfect_matchings(p + q) {
        let mut b = Builder::new(sig, p, q);
        for (x, y) in m {
            match (x < p, y < p) {
                (true, true) => {
                    let d = b.add("d")?;
                    b.connect(Source::BoxOut(d, 0), Sink::Output(x))?;
                    b.connect(Source::BoxOut(d, 1), Sink::Output(y))?;
                }
                (false, false) => {
                    let c = b.add("c")?;
                    b.connect(Source::Input(x - p), Sink::BoxIn(c, 0))?;
                    b.connect(Source::Input(y - p), Sink::BoxIn(c, 1))?;
                }
                (true, false) => b.connect(Source::Input(y - p), Sink::Output(x))?,
                (false, true) => unreachable!("matching pairs are ordered"),
            }
        }
        cands.push(b.finish()?);
    }
    Ok(SpanningSet::from_candidates(sig, p, q, None, Enumerator::Brauer, cands))
}

/// Set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// How a block of a partition is realized.
struct BlockShape<'a> {
    genus: usize,
    marker: Option<&'a str>,
    counit: Option<&'a str>,
}

/// One block: merge its inputs with a left comb of `m` (or start from `u`),
/// optionally pass through the marker box, add `genus` handles `m∘Δ`, then fan
/// out with splits `Δ = m∘(1⊗c)` (or close with the counit, or an `m` self-loop).
fn realize_block(b: &mut Builder, ins: &[usize], outs: &[usize], shape: &BlockShape) -> Result<()> {
    let mut s = match ins.first() {
        Some(&j) => Source::Input(j),
        None => Source::BoxOut(b.add("u")?, 0),
    };
    for &j in ins.iter().skip(1) {
        let m = b.add("m")?;
        b.connect(s, Sink::BoxIn(m, 0))?;
        b.connect(Source::Input(j), Sink::BoxIn(m, 1))?;
        s = Source::BoxOut(m, 0);
    }
    if let Some(name) = shape.marker {
        let x = b.add(name)?;
        b.connect(s, Sink::BoxIn(x, 0))?;
        s = Source::BoxOut(x, 0);
    }
    let split = |b: &mut Builder, s: Source| -> Result<(Source, Source)> {
        let c = b.add("c")?;
        let m = b.add("m")?;
        b.connect(s, Sink::BoxIn(m, 0))?;
        b.connect(Source::BoxOut(c, 0), Sink::BoxIn(m, 1))?;
        Ok((Source::BoxOut(m, 0), Source::BoxOut(c, 1)))
    };
    for _ in 0..shape.genus {
        let (x, y) = split(b, s)?;
        let m = b.add("m")?;
        b.connect(x, Sink::BoxIn(m, 0))?;
        b.connect(y, Sink::BoxIn(m, 1))?;
        s = Source::BoxOut(m, 0);
    }
    match outs.split_last() {
        None => match shape.counit {
            Some(name) => {
                let e = b.add(name)?;
                b.connect(s, Sink::BoxIn(e, 0))?;
            }
            None => {
                let m = b.add("m")?;
                b.connect(s, Sink::BoxIn(m, 0))?;
                b.connect(Source::BoxOut(m, 0), Sink::BoxIn(m, 1))?;
            }
        },
        Some((&last, init)) => {
            for &i in init {
                let (o, rest) = split(b, s)?;
                b.connect(o, Sink::Output(i))?;
                s = rest;
            }
            b.connect(s, Sink::Output(last))?;
        }
    }
    Ok(())
}

fn partition_diagram(
    sig: &Arc<Signature>,
    p: usize,
    q: usize,
    blocks: &[Vec<usize>],
    shapes: &[BlockShape],
) -> Result<Diagram> {
    let mut b = Builder::new(sig, p, q);
    for (blk, shape) in blocks.iter().zip(shapes) {
        let outs: Vec<usize> = blk.iter().copied().filter(|&x| x < p).collect();
        let ins: Vec<usize> = blk.iter().filter(|&&x| x >= p).map(|&x| x - p).collect();
        realize_block(&mut b, &ins, &outs, shape)?;
    }
    b.finish()
}

fn counit_of(sig: &Signature) -> Option<&'static str> {
    match sig.index_of("eps").map(|g| sig.generator(g)) {
        Some(g) if g.outputs == 0 && g.inputs == 1 => Some("eps"),
        _ => None,
    }
}

/// Partition diagrams over `m:(1,2), u:(1,0), c:(2,0)`: one per set partition
/// of the p+q boundary points (outputs first, then inputs).
pub fn enumerate_partition(sig: &Arc<Signature>, p: usize, q: usize) -> Result<SpanningSet> {
    require(sig, "m", 1, 2)?;
    require(sig, "u", 1, 0)?;
    require(sig, "c", 2, 0)?;
    let counit = counit_of(sig);
    let mut cands = Vec::new();
    for blocks in set_partitions(p + q) {
        let shapes: Vec<BlockShape> = blocks
            .iter()
            .map(|_| BlockShape {
                genus: 0,
                marker: None,
                counit,
            })
            .collect();
        cands.push(partition_diagram(sig, p, q, &blocks, &shapes)?);
    }
    Ok(SpanningSet::from_candidates(sig, p, q, None, Enumerator::Partition, cands))
}

/// Partition diagrams in which every block may additionally carry the
/// projection `P:(1,1)`.
pub fn enumerate_wreath(sig: &Arc<Signature>, p: usize, q: usize) -> Result<SpanningSet> {
    require(sig, "m", 1, 2)?;
    require(sig, "u", 1, 0)?;
    require(sig, "c", 2, 0)?;
    require(sig, "P", 1, 1)?;
    let counit = counit_of(sig);
    let mut cands = Vec::new();
    for blocks in set_partitions(p + q) {
        let k = blocks.len();
        for mask in 0..(1u64 << k) {
            let shapes: Vec<BlockShape> = (0..k)
                .map(|i| BlockShape {
                    genus: 0,
                    marker: (mask >> i & 1 == 1).then_some("P"),
                    counit,
                })
                .collect();
            cands.push(partition_diagram(sig, p, q, &blocks, &shapes)?);
        }
    }
    Ok(SpanningSet::from_candidates(sig, p, q, None, Enumerator::Wreath, cands))
}

/// Cobordism classes over `m, u, eps, c`: a partition of the boundary circles
/// into connected pieces, each labelled by a genus in `0..=genus_cutoff`.
/// For (0,0) this is the empty surface plus one closed surface per genus.
pub fn enumerate_cobordism(sig: &Arc<Signature>, p: usize, q: usize, genus_cutoff: usize) -> Result<SpanningSet> {
    require(sig, "m", 1, 2)?;
    require(sig, "u", 1, 0)?;
    require(sig, "c", 2, 0)?;
    require(sig, "eps", 0, 1)?;
    let mut cands = Vec::new();
    if p + q == 0 {
        cands.push(Diagram::empty(sig));
        for g in 0..=genus_cutoff {
            cands.push(closed_surface(sig, g)?);
        }
    }
    for blocks in set_partitions(p + q).into_iter().filter(|b| !b.is_empty()) {
        let k = blocks.len();
        let mut labels = vec![0usize; k];
        loop {
            let shapes: Vec<BlockShape> = labels
                .iter()
                .map(|&g| BlockShape {
                    genus: g,
                    marker: None,
                    counit: Some("eps"),
                })
                .collect();
            cands.push(partition_diagram(sig, p, q, &blocks, &shapes)?);
            // odometer over genus labels
            let Some(i) = (0..k).find(|&i| labels[i] < genus_cutoff) else {
                break;
            };
            labels[i] += 1;
            for l in labels.iter_mut().take(i) {
                *l = 0;
            }
        }
    }
    Ok(SpanningSet::from_candidates(
        sig,
        p,
        q,
        Some(genus_cutoff),
        Enumerator::Cobordism,
        cands,
    ))
}

/// The connected closed surface of genus `g`: `eps ∘ (m∘Δ)^g ∘ u`.
pub fn closed_surface(sig: &Arc<Signature>, g: usize) -> Result<Diagram> {
    let mut b = Builder::new(sig, 0, 0);
    realize_block(
        &mut b,
        &[],
        &[],
        &BlockShape {
            genus: g,
            marker: None,
            counit: Some("eps"),
        },
    )?;
    b.finish()
}

/// The handle endomorphism `m∘Δ` as a (1,1) diagram, with `Δ = m∘(1⊗c)`.
pub fn handle(sig: &Arc<Signature>) -> Result<Diagram> {
    let mut b = Builder::new(sig, 1, 1);
    realize_block(
        &mut b,
        &[0],
        &[0],
        &BlockShape {
            genus: 1,
            marker: None,
            counit: None,
        },
    )?;
    b.finish()
}

/// Dispatches by enumerator name. `cutoff` is the box cutoff for the generic
/// walker and the genus cutoff for cobordisms.
pub fn enumerate(kind: Enumerator, sig: &Arc<Signature>, p: usize, q: usize, cutoff: usize) -> Result<SpanningSet> {
    match kind {
        Enumerator::Generic => enumerate_generic(sig, p, q, cutoff, DEFAULT_CANDIDATE_CAP),
        Enumerator::Permutation => {
            if p == q {
                Ok(enumerate_permutations(sig, p))
            } else {
                Ok(SpanningSet::from_candidates(sig, p, q, None, kind, Vec::new()))
            }
        }
        Enumerator::Brauer => enumerate_brauer(sig, p, q),
        Enumerator::Partition => enumerate_partition(sig, p, q),
        Enumerator::Cobordism => enumerate_cobordism(sig, p, q, cutoff),
        Enumerator::Wreath => enumerate_wreath(sig, p, q),
    }
}
