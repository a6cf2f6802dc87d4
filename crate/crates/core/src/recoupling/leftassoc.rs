use std::fmt;

use crate::braidrep::BraidWord;
use crate::diagrams::DiagramSum;
use crate::error::{Error, Result};
use crate::trees::{
    enumerate_labelings, expand_unchecked, FusionMode, LabeledTree, ParticleLabel, TreeShape, TreeVector,
};

use super::channels::{vector_from_channels, vector_to_channels, World};
use super::engine::{Engine, MoveStats};

/// A braid word stacked on top of the leaves of a labeled tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualBraidedTree {
    braid: BraidWord,
    tree: LabeledTree,
}

impl VirtualBraidedTree {
    /// Leaves must carry `P`; the braid must have one strand per leaf.
    pub fn new(braid: BraidWord, tree: LabeledTree) -> Result<Self> {
        if braid.strands() != tree.leaf_count() {
            return Err(Error::ShapeMismatch(format!(
                "{}-strand braid on a {}-leaf tree",
                braid.strands(),
                tree.leaf_count()
            )));
        }
        if tree.leaf_labels().iter().any(|&l| l != ParticleLabel::P) {
            return Err(Error::InadmissibleTree(format!("leaves of {tree} must be P")));
        }
        if !tree.is_admissible(FusionMode::Virtual) {
            return Err(Error::InadmissibleTree(tree.to_string()));
        }
        Ok(VirtualBraidedTree { braid, tree })
    }

    /// One input per admissible classical labeling of `shape`.
    pub fn labelings(braid: &BraidWord, shape: &TreeShape) -> Result<Vec<Self>> {
        enumerate_labelings(shape, FusionMode::Classical, ParticleLabel::P, None)
            .into_iter()
            .map(|t| VirtualBraidedTree::new(braid.clone(), t))
            .collect()
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    /// The input as a diagram: tree expansion with the cabled braid above.
    pub fn expand(&self) -> DiagramSum {
        expand_unchecked(&self.tree)
            .compose(&self.braid.cable_diagram())
            .expect("braid has one cable per leaf")
    }
}

impl fmt::Display for VirtualBraidedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.braid, self.tree)
    }
}

/// Result of left association with a record of the moves used.
#[derive(Clone, Debug)]
pub struct Association {
    pub vector: TreeVector,
    pub world: World,
    pub stats: MoveStats,
}

impl Association {
    /// True when every associativity move used was exact, so the output
    /// expands to the same diagram as the input.
    pub fn is_exact(&self) -> bool {
        self.stats.is_exact()
    }
}

/// Left-associates `input`; the result is supported on left combs labeled
/// from `{P, *, ~P}`.
pub fn left_associate(input: &VirtualBraidedTree) -> TreeVector {
    left_associate_detailed(input).vector
}

pub fn left_associate_detailed(input: &VirtualBraidedTree) -> Association {
    act_on_vector(&input.braid, &TreeVector::basis(input.tree.clone())).expect("validated inputs are well formed")
}

/// The world a computation needs: classical labels suffice exactly when the
/// trees are classical and the word has no virtual letters.
pub fn world_for(word: &BraidWord, v: &TreeVector) -> World {
    if word.is_classical() && v.iter().all(|(t, _)| t.is_classical()) {
        World::Classical
    } else {
        World::Extended
    }
}

/// Stacks `word` above every tree of `v` and left-associates.
pub fn act_on_vector(word: &BraidWord, v: &TreeVector) -> Result<Association> {
    act_in_world(word, v, world_for(word, v))
}

/// As [`act_on_vector`], with the label world fixed by the caller.
pub fn act_in_world(word: &BraidWord, v: &TreeVector, world: World) -> Result<Association> {
    Associator::new().act_in_world(word, v, world)
}

/// Left association with move caches kept across calls.
pub struct Associator {
    classical: Engine,
    extended: Engine,
}

impl Default for Associator {
    fn default() -> Self {
        Self::new()
    }
}

impl Associator {
    pub fn new() -> Self {
        Associator {
            classical: Engine::new(World::Classical),
            extended: Engine::new(World::Extended),
        }
    }

    pub fn left_associate(&mut self, input: &VirtualBraidedTree) -> Association {
        self.act(&input.braid, &TreeVector::basis(input.tree.clone()))
            .expect("validated inputs are well formed")
    }

    pub fn act(&mut self, word: &BraidWord, v: &TreeVector) -> Result<Association> {
        self.act_in_world(word, v, world_for(word, v))
    }

    pub fn act_in_world(&mut self, word: &BraidWord, v: &TreeVector, world: World) -> Result<Association> {
        let engine = match world {
            World::Classical => &mut self.classical,
            World::Extended => &mut self.extended,
        };
        let before = engine.stats();
        let channels = vector_to_channels(&v.normalized(), world)?;
        let out = engine.act(&channels, word)?;
        Ok(Association {
            vector: vector_from_channels(&out),
            world,
            stats: engine.stats().since(before),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(word: &str, tree: &str) -> VirtualBraidedTree {
        VirtualBraidedTree::new(word.parse().unwrap(), tree.parse().unwrap()).unwrap()
    }

    fn expand_vector(v: &TreeVector) -> DiagramSum {
        v.iter()
            .fold(DiagramSum::zero(), |acc, (t, c)| acc.add(&expand_unchecked(t).scale(c)))
    }

    #[test]
    fn identity_passes_through() {
        let i = input("n=3;", "((L:P L:P):* L:P):P");
        let out = left_associate(&i);
        assert_eq!(out, TreeVector::basis(i.tree().clone()));
    }

    #[test]
    fn two_leaf_words_are_exact() {
        for w in ["n=2; s1", "n=2; v1", "n=2; s1^-1 v1 s1", "n=2; v1 s1"] {
            for t in ["(L:P L:P):P", "(L:P L:P):*"] {
                let i = input(w, t);
                let a = left_associate_detailed(&i);
                assert!(a.is_exact());
                assert_eq!(expand_vector(&a.vector), i.expand(), "{w} on {t}");
            }
        }
    }

    #[test]
    fn virtual_square_is_identity() {
        let i = input("n=2; v1 v1", "(L:P L:P):P");
        assert_eq!(left_associate(&i), TreeVector::basis(i.tree().clone()));
        let once = left_associate(&input("n=2; v1", "(L:P L:P):P"));
        let twice = act_on_vector(&"n=2; v1".parse().unwrap(), &once).unwrap().vector;
        assert_eq!(twice, TreeVector::basis(i.tree().clone()));
    }

    #[test]
    fn cherry_letters_on_left_combs_are_exact() {
        let i = input("n=3; s1 v1", "((L:P L:P):P L:P):P");
        let a = left_associate_detailed(&i);
        assert_eq!(a.stats.f_moves, 0);
        assert_eq!(expand_vector(&a.vector), i.expand());
    }
}
