//! Seeded random diagrams for property tests and character sampling.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ClosedDiagramKey, Diagram, Signature, Source};

/// A random diagram with the given boundary and at most `max_boxes` boxes,
/// or `None` if no balanced box multiset was hit within the attempt budget.
pub fn random_diagram<R: Rng>(
    sig: &Arc<Signature>,
    outputs: usize,
    inputs: usize,
    max_boxes: usize,
    rng: &mut R,
) -> Option<Diagram> {
    let ngen = sig.generators().len();
    for _ in 0..2000 {
        let nb = if ngen == 0 { 0 } else { rng.gen_range(0..=max_boxes) };
        let boxes: Vec<usize> = (0..nb).map(|_| rng.gen_range(0..ngen)).collect();
        let n_out: usize = boxes.iter().map(|&g| sig.generator(g).outputs).sum();
        let n_in: usize = boxes.iter().map(|&g| sig.generator(g).inputs).sum();
        if inputs + n_out != outputs + n_in {
            continue;
        }
        let mut sources: Vec<Source> = (0..inputs).map(Source::Input).collect();
        for (b, &g) in boxes.iter().enumerate() {
            sources.extend((0..sig.generator(g).outputs).map(|k| Source::BoxOut(b, k)));
        }
        sources.shuffle(rng);
        return Some(Diagram::from_parts_unchecked(sig.clone(), outputs, inputs, boxes, sources, 0));
    }
    None
}

/// A random closed connected diagram with 1..=max_boxes boxes.
pub fn random_connected_closed<R: Rng>(sig: &Arc<Signature>, max_boxes: usize, rng: &mut R) -> Option<Diagram> {
    for _ in 0..2000 {
        let d = random_diagram(sig, 0, 0, max_boxes, rng)?;
        if d.num_boxes() > 0 && d.component_count().ok() == Some(1) {
            return Some(d.canonical());
        }
    }
    None
}

/// Up to `count` pairwise non-isomorphic closed connected diagrams, the
/// box-free loop first.
pub fn sample_connected<R: Rng>(sig: &Arc<Signature>, count: usize, max_boxes: usize, rng: &mut R) -> Vec<Diagram> {
    let mut seen: BTreeSet<ClosedDiagramKey> = BTreeSet::new();
    let mut out = Vec::new();
    let lp = Diagram::loop_diagram(sig);
    seen.insert(lp.closed_key().expect("closed"));
    out.push(lp);
    let mut misses = 0;
    while out.len() < count && misses < 500 {
        match random_connected_closed(sig, max_boxes, rng) {
            Some(d) if seen.insert(d.closed_key().expect("closed")) => {
                out.push(d);
                misses = 0;
            }
            _ => misses += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_distinct_and_connected() {
        let sig = Signature::from_arities(&[("m", 1, 2), ("u", 1, 0), ("c", 2, 0)], &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = sample_connected(&sig, 20, 5, &mut rng);
        assert_eq!(s.len(), 20);
        for d in &s {
            assert_eq!(d.component_count().unwrap(), 1);
        }
    }
}
