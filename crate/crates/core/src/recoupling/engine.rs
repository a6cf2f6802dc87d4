//! Rewriting channel trees: reshaping by associativity moves and resolving
//! braid letters at cherries.

use std::collections::HashMap;
use std::rc::Rc;

use crate::braidrep::{BraidWord, Letter};
use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::trees::{Branch, TreeShape};

use super::channels::{accumulate, ChannelTree, ChannelVector, World};
use super::rulebook::{Crossing, FKey, Rotation, RuleBook};

type Terms = Vec<(ChannelTree, Scalar)>;

/// Counts of the local moves an engine applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MoveStats {
    pub f_moves: usize,
    /// Associativity moves whose source was not in the span of the targets.
    pub inexact_f_moves: usize,
    pub crossings: usize,
}

impl MoveStats {
    pub fn is_exact(&self) -> bool {
        self.inexact_f_moves == 0
    }

    /// Moves applied after `earlier` was taken.
    pub fn since(&self, earlier: MoveStats) -> MoveStats {
        MoveStats {
            f_moves: self.f_moves - earlier.f_moves,
            inexact_f_moves: self.inexact_f_moves - earlier.inexact_f_moves,
            crossings: self.crossings - earlier.crossings,
        }
    }

    fn absorb(&mut self, other: MoveStats) {
        self.f_moves += other.f_moves;
        self.inexact_f_moves += other.inexact_f_moves;
        self.crossings += other.crossings;
    }
}

pub struct Engine {
    book: &'static RuleBook,
    world: World,
    stats: MoveStats,
    cache: HashMap<(ChannelTree, TreeShape), (Rc<Terms>, MoveStats)>,
}

impl Engine {
    pub fn new(world: World) -> Self {
        Engine {
            book: RuleBook::standard(),
            world,
            stats: MoveStats::default(),
            cache: HashMap::new(),
        }
    }

    pub fn world(&self) -> World {
        self.world
    }

    pub fn stats(&self) -> MoveStats {
        self.stats
    }

    /// One associativity move at the root of `t`.
    pub fn rotate(&mut self, t: &ChannelTree, rotation: Rotation) -> Result<Terms> {
        let (a, b, c, x, y, rebuild): (_, _, _, _, _, fn(_, _, _, _, _) -> _) = match (rotation, t) {
            (Rotation::Right, ChannelTree::Node(l, c, y)) => match &**l {
                ChannelTree::Node(a, b, x) => (a, b, c, *x, *y, |a, b, c, x, y| {
                    ChannelTree::node(a, ChannelTree::node(b, c, x), y)
                }),
                ChannelTree::Leaf(_) => return Err(Error::BadPosition(format!("no left subtree to rotate in {t}"))),
            },
            (Rotation::Left, ChannelTree::Node(a, r, y)) => match &**r {
                ChannelTree::Node(b, c, x) => (a, b, c, *x, *y, |a, b, c, x, y| {
                    ChannelTree::node(ChannelTree::node(a, b, x), c, y)
                }),
                ChannelTree::Leaf(_) => return Err(Error::BadPosition(format!("no right subtree to rotate in {t}"))),
            },
            (_, ChannelTree::Leaf(_)) => return Err(Error::BadPosition("cannot rotate a leaf".into())),
        };
        let key = FKey {
            a: a.label(),
            b: b.label(),
            c: c.label(),
            x,
            y,
            rotation,
        };
        let entry = self
            .book
            .f(&key)
            .ok_or_else(|| Error::InadmissibleTree(format!("no associativity rule for {}", key.source())))?;
        self.stats.f_moves += 1;
        if !entry.exact {
            self.stats.inexact_f_moves += 1;
        }
        Ok(entry
            .terms
            .iter()
            .map(|(x2, coeff)| {
                (
                    rebuild((**a).clone(), (**b).clone(), (**c).clone(), *x2, y),
                    coeff.clone(),
                )
            })
            .collect())
    }

    /// Rewrites `t` as a combination of trees of the given shape.
    pub fn reshape(&mut self, t: &ChannelTree, target: &TreeShape) -> Result<Rc<Terms>> {
        if t.leaves() != target.leaves() {
            return Err(Error::ShapeMismatch(format!(
                "{} leaves cannot take shape {target}",
                t.leaves()
            )));
        }
        let key = (t.clone(), target.clone());
        if let Some((terms, stats)) = self.cache.get(&key) {
            let (terms, stats) = (terms.clone(), *stats);
            self.stats.absorb(stats);
            return Ok(terms);
        }
        let before = self.stats;
        let terms = Rc::new(self.reshape_uncached(t, target)?);
        let spent = self.stats.since(before);
        self.cache.insert(key, (terms.clone(), spent));
        Ok(terms)
    }

    fn reshape_uncached(&mut self, t: &ChannelTree, target: &TreeShape) -> Result<Terms> {
        let (ChannelTree::Node(l, r, y), TreeShape::Node(ls, rs)) = (t, target) else {
            return Ok(vec![(t.clone(), Scalar::one())]);
        };
        let k = ls.leaves();
        let mut out = ChannelVector::new();
        if l.leaves() == k {
            let lefts = self.reshape(l, ls)?;
            let rights = self.reshape(r, rs)?;
            for (lt, lc) in lefts.iter() {
                for (rt, rc) in rights.iter() {
                    accumulate(&mut out, ChannelTree::node(lt.clone(), rt.clone(), *y), lc * rc);
                }
            }
        } else {
            // Bring the right number of leaves to the left child with one
            // rotation at the root, after preparing the child it draws from.
            let (prepared, rotation) = if l.leaves() > k {
                let inner = TreeShape::node((**ls).clone(), TreeShape::left_comb(l.leaves() - k));
                (self.reshape(l, &inner)?, Rotation::Right)
            } else {
                let inner = TreeShape::node(TreeShape::left_comb(k - l.leaves()), (**rs).clone());
                (self.reshape(r, &inner)?, Rotation::Left)
            };
            for (sub, c) in prepared.iter() {
                let whole = match rotation {
                    Rotation::Right => ChannelTree::node(sub.clone(), (**r).clone(), *y),
                    Rotation::Left => ChannelTree::node((**l).clone(), sub.clone(), *y),
                };
                for (rotated, c2) in self.rotate(&whole, rotation)? {
                    for (done, c3) in self.reshape(&rotated, target)?.iter() {
                        accumulate(&mut out, done.clone(), c * &c2 * c3);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn reshape_vector(&mut self, v: &ChannelVector, target: &TreeShape) -> Result<ChannelVector> {
        let mut out = ChannelVector::new();
        for (t, c) in v {
            for (t2, c2) in self.reshape(t, target)?.iter() {
                accumulate(&mut out, t2.clone(), c * c2);
            }
        }
        Ok(out)
    }

    /// Resolves a crossing placed directly above the two leaves of the
    /// cherry at `path`.
    pub fn cross_cherry(&mut self, t: &ChannelTree, path: &[Branch], crossing: Crossing) -> Result<Terms> {
        let Some(ChannelTree::Node(a, b, v)) = t.subtree(path) else {
            return Err(Error::BadPosition(format!("no vertex at {path:?} in {t}")));
        };
        let (ChannelTree::Leaf(a), ChannelTree::Leaf(b)) = (&**a, &**b) else {
            return Err(Error::BadPosition(format!("vertex at {path:?} is not a cherry")));
        };
        if self.world == World::Classical && crossing == Crossing::Virtual {
            return Err(Error::PatternMismatch(
                "virtual crossings need the extended label set".into(),
            ));
        }
        let entry = self
            .book
            .crossing(*a, *b, *v, crossing)
            .ok_or_else(|| Error::InadmissibleTree(format!("no crossing rule at {t}")))?;
        self.stats.crossings += 1;
        entry
            .terms
            .iter()
            .map(|((a2, b2), c)| {
                let cherry = ChannelTree::node(ChannelTree::Leaf(*a2), ChannelTree::Leaf(*b2), *v);
                let replaced = t.replace(path, cherry).expect("path was just resolved");
                Ok((replaced, c.clone()))
            })
            .collect()
    }

    /// Stacks the braid letter on top of every tree in `v`.
    pub fn apply_letter(&mut self, v: &ChannelVector, letter: Letter, leaves: usize) -> Result<ChannelVector> {
        let i = letter.index();
        if i == 0 || i >= leaves {
            return Err(Error::IndexOutOfRange {
                index: i,
                strands: leaves,
            });
        }
        let shape = cherry_shape(leaves, i);
        let path = cherry_path(leaves, i);
        let crossing = Crossing::from_letter(letter);
        let mut out = ChannelVector::new();
        for (t, c) in v {
            for (shaped, c2) in self.reshape(t, &shape)?.iter() {
                for (crossed, c3) in self.cross_cherry(shaped, &path, crossing)? {
                    accumulate(&mut out, crossed, c * c2 * c3);
                }
            }
        }
        Ok(out)
    }

    /// Stacks the word on top of `v` one letter at a time, starting next to
    /// the leaves, returning to the left comb after each letter.
    pub fn act(&mut self, v: &ChannelVector, word: &BraidWord) -> Result<ChannelVector> {
        let n = word.strands();
        if let Some(t) = v.keys().find(|t| t.leaves() != n) {
            return Err(Error::ShapeMismatch(format!(
                "{} leaves under a {n}-strand braid",
                t.leaves()
            )));
        }
        let comb = TreeShape::left_comb(n);
        let mut state = self.reshape_vector(v, &comb)?;
        for &letter in word.letters().iter().rev() {
            let crossed = self.apply_letter(&state, letter, n)?;
            state = self.reshape_vector(&crossed, &comb)?;
        }
        Ok(state)
    }
}

/// Left comb over the units `1, .., i-1, (i i+1), i+2, .., n`.
pub fn cherry_shape(leaves: usize, i: usize) -> TreeShape {
    let mut units = vec![TreeShape::Leaf; leaves - 1];
    units[i - 1] = TreeShape::node(TreeShape::Leaf, TreeShape::Leaf);
    let mut it = units.into_iter();
    let first = it.next().expect("at least one unit");
    it.fold(first, TreeShape::node)
}

/// Path from the root of [`cherry_shape`] to its cherry.
pub fn cherry_path(leaves: usize, i: usize) -> Vec<Branch> {
    let m = leaves - 1;
    let u = i - 1;
    if u == 0 {
        vec![Branch::Left; m - 1]
    } else {
        let mut p = vec![Branch::Left; m - 1 - u];
        p.push(Branch::Right);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recoupling::channels::Channel;

    #[test]
    fn vacuum_internal_line_is_not_closed() {
        use Channel::*;
        let leaf = ChannelTree::Leaf;
        let t = ChannelTree::node(ChannelTree::node(leaf(Sym), leaf(Sym), Vac), leaf(Anti), Anti);
        let mut e = Engine::new(World::Extended);
        e.reshape(&t, &"(L (L L))".parse().unwrap()).unwrap();
        assert_eq!(e.stats().inexact_f_moves, 1);
    }

    #[test]
    fn cherry_paths_land_on_cherries() {
        for n in 2..6 {
            for i in 1..n {
                let shape = cherry_shape(n, i);
                assert_eq!(shape.leaves(), n);
                let mut s = &shape;
                for b in cherry_path(n, i) {
                    let TreeShape::Node(l, r) = s else { panic!() };
                    s = if b == Branch::Left { l } else { r };
                }
                assert_eq!(*s, TreeShape::node(TreeShape::Leaf, TreeShape::Leaf), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn reshape_round_trip_through_a_vacuum_leaf() {
        use Channel::*;
        let leaf = ChannelTree::Leaf;
        let t = ChannelTree::node(ChannelTree::node(leaf(Sym), leaf(Vac), Sym), leaf(Anti), Anti);
        let mut e = Engine::new(World::Extended);
        let target: TreeShape = "(L (L L))".parse().unwrap();
        let out = e.reshape(&t, &target).unwrap();
        assert!(e.stats().is_exact());
        let mut back = ChannelVector::new();
        for (t2, c) in out.iter() {
            for (t3, c3) in e.reshape(t2, &TreeShape::left_comb(3)).unwrap().iter() {
                accumulate(&mut back, t3.clone(), c * c3);
            }
        }
        assert_eq!(back, ChannelVector::from([(t, Scalar::one())]));
    }
}
