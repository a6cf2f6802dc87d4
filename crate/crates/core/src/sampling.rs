//! Seeded generators for the randomized checks.
//!
//! Everything draws from a ChaCha stream so a seed fixes the sample on every
//! platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::braidrep::{BraidWord, Letter};
use crate::diagrams::{Diagram, DiagramSum};
use crate::recoupling::VirtualBraidedTree;
use crate::scalars::Scalar;
use crate::trees::{enumerate_labelings, FusionMode, ParticleLabel, TreeShape};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly chosen generator or inverse on `strands` strands.
pub fn letter(rng: &mut SampleRng, strands: usize) -> Letter {
    let i = rng.gen_range(1..strands);
    match rng.gen_range(0..3) {
        0 => Letter::sigma(i),
        1 => Letter::sigma_inv(i),
        _ => Letter::virt(i),
    }
}

/// Letters of a word of length at most `max_len`, before free reduction.
pub fn letters(rng: &mut SampleRng, strands: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| letter(rng, strands)).collect()
}

pub fn word(rng: &mut SampleRng, strands: usize, max_len: usize) -> BraidWord {
    BraidWord::new(strands, letters(rng, strands, max_len)).expect("indices are in range")
}

/// A uniformly random perfect matching on the boundary.
pub fn diagram(rng: &mut SampleRng, bottom: usize, top: usize) -> Diagram {
    let mut points: Vec<usize> = (0..bottom + top).collect();
    points.shuffle(rng);
    let pairs: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
    Diagram::from_pairs(bottom, top, &pairs).expect("even boundary")
}

/// A short combination of random diagrams with monomial coefficients.
pub fn diagram_sum(rng: &mut SampleRng, bottom: usize, top: usize) -> DiagramSum {
    let mut out = DiagramSum::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c = Scalar::monomial(rng.gen_range(-3..=3), rng.gen_range(-4..=4));
        out = out.add(&DiagramSum::term(diagram(rng, bottom, top), c));
    }
    out
}

/// A random binary tree shape with `leaves` leaves.
pub fn shape(rng: &mut SampleRng, leaves: usize) -> TreeShape {
    if leaves == 1 {
        return TreeShape::Leaf;
    }
    let k = rng.gen_range(1..leaves);
    TreeShape::node(shape(rng, k), shape(rng, leaves - k))
}

/// A braid of length at most `max_len` over a random admissible tree with
/// between two and `max_leaves` leaves.
pub fn virtual_braided_tree(rng: &mut SampleRng, max_leaves: usize, max_len: usize) -> VirtualBraidedTree {
    let leaves = rng.gen_range(2..=max_leaves);
    let s = shape(rng, leaves);
    let trees: Vec<_> = enumerate_labelings(&s, FusionMode::Virtual, ParticleLabel::P, None)
        .into_iter()
        .filter(|t| !t.vanishes())
        .collect();
    let tree = trees.choose(rng).expect("a cable tree always exists").clone();
    VirtualBraidedTree::new(word(rng, leaves, max_len), tree).expect("sampled input is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sample() {
        let a: Vec<_> = (0..5)
            .map(|_| virtual_braided_tree(&mut rng(3), 5, 4).to_string())
            .collect();
        let b: Vec<_> = (0..5)
            .map(|_| virtual_braided_tree(&mut rng(3), 5, 4).to_string())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn diagrams_respect_the_boundary() {
        let mut r = rng(0);
        for _ in 0..20 {
            let d = diagram(&mut r, 3, 5);
            assert_eq!((d.bottom_count(), d.top_count()), (3, 5));
        }
    }
}
