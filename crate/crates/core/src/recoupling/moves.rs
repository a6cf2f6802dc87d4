//! Position-based moves on tree vectors, local fragment reductions, and the
//! composite rules synthesized from the oracle.

use crate::braidrep::BraidWord;
use crate::diagrams::{CrossingSign, DiagramSum};
use crate::error::{Error, Result};
use crate::scalars::{constants, Scalar};
use crate::trees::{
    expand_unchecked, fusion_allowed, junction_vanishes, Branch, FusionMode, LabeledTree, ParticleLabel, RootSector,
    TreeVector,
};

use super::channels::{
    accumulate, expand, label_to_channels, to_channels, vector_from_channels, vector_to_channels, vertex_allowed,
    Channel, ChannelTree, ChannelVector, World,
};
use super::engine::Engine;
use super::leftassoc::world_for;
use super::rulebook::{Crossing, Rotation, RuleBook};

/// Which way an associativity move rebrackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(a (b c)x)y -> ((a b)x' c)y`, towards the left comb.
    Forward,
    /// `((a b)x c)y -> (a (b c)x')y`
    Backward,
}

impl Direction {
    pub fn rotation(self) -> Rotation {
        match self {
            Direction::Forward => Rotation::Left,
            Direction::Backward => Rotation::Right,
        }
    }
}

/// Source of associativity coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FMode {
    /// The published 2x2 matrix on classical fragments, in the order `(*, P)`;
    /// one-dimensional cases get coefficient 1.
    Paper,
    /// Coefficients computed from the diagram algebra.
    Oracle,
}

fn split_fragment(t: &LabeledTree, rotation: Rotation) -> Result<[LabeledTree; 3]> {
    let bad = || Error::BadPosition(format!("no rebracketable pair of vertices at the root of {t}"));
    let LabeledTree::Node(l, r, _) = t else {
        return Err(bad());
    };
    match (rotation, &**l, &**r) {
        (Rotation::Right, LabeledTree::Node(a, b, _), c) => Ok([(**a).clone(), (**b).clone(), c.clone()]),
        (Rotation::Left, a, LabeledTree::Node(b, c, _)) => Ok([a.clone(), (**b).clone(), (**c).clone()]),
        _ => Err(bad()),
    }
}

fn inner_label(t: &LabeledTree, rotation: Rotation) -> ParticleLabel {
    match (rotation, t) {
        (Rotation::Right, LabeledTree::Node(l, _, _)) => l.label(),
        (Rotation::Left, LabeledTree::Node(_, r, _)) => r.label(),
        _ => unreachable!("checked by split_fragment"),
    }
}

fn rebracket(parts: [LabeledTree; 3], x: ParticleLabel, y: ParticleLabel, rotation: Rotation) -> LabeledTree {
    let [a, b, c] = parts;
    match rotation {
        Rotation::Right => LabeledTree::node(a, LabeledTree::node(b, c, x), y),
        Rotation::Left => LabeledTree::node(LabeledTree::node(a, b, x), c, y),
    }
}

fn paper_f(t: &LabeledTree, rotation: Rotation) -> Result<Vec<(LabeledTree, Scalar)>> {
    use ParticleLabel::{Star, P};
    let parts = split_fragment(t, rotation)?;
    if !t.is_classical() {
        return Err(Error::PatternMismatch(format!("{t} is not a classical fragment")));
    }
    let x = inner_label(t, rotation);
    let y = t.label();
    let [la, lb, lc] = [parts[0].label(), parts[1].label(), parts[2].label()];
    let ok = |p, q, o| fusion_allowed(p, q, o, FusionMode::Classical) && !junction_vanishes(p, q, o);
    let candidates: Vec<ParticleLabel> = [Star, P]
        .into_iter()
        .filter(|&x2| match rotation {
            Rotation::Right => ok(lb, lc, x2) && ok(la, x2, y),
            Rotation::Left => ok(la, lb, x2) && ok(x2, lc, y),
        })
        .collect();
    let k = constants();
    let index = |l: ParticleLabel| usize::from(l == P);
    let matrix = [[k.a.clone(), k.b.clone()], [k.g.clone(), k.h.clone()]];
    Ok(candidates
        .iter()
        .map(|&x2| {
            let coeff = if candidates.len() == 1 {
                Scalar::one()
            } else {
                matrix[index(x2)][index(x)].clone()
            };
            (rebracket(parts.clone(), x2, y, rotation), coeff)
        })
        .collect())
}

fn at_position(
    v: &TreeVector,
    position: &[Branch],
    f: &mut dyn FnMut(&LabeledTree) -> Result<Vec<(LabeledTree, Scalar)>>,
) -> Result<TreeVector> {
    let mut out = TreeVector::zero();
    for (t, c) in v.iter() {
        let sub = t
            .subtree(position)
            .ok_or_else(|| Error::BadPosition(format!("{position:?} does not address a vertex of {t}")))?;
        for (s2, c2) in f(sub)? {
            out.add_term(t.replace(position, s2).expect("position exists"), c * &c2);
        }
    }
    Ok(out.normalized())
}

fn channel_world(v: &TreeVector) -> World {
    world_for(&BraidWord::identity(1), v)
}

fn channels_at_position(
    v: &TreeVector,
    world: World,
    position: &[Branch],
    f: &mut dyn FnMut(&ChannelTree) -> Result<Vec<(ChannelTree, Scalar)>>,
) -> Result<TreeVector> {
    let mut out = ChannelVector::new();
    for (t, c) in vector_to_channels(&v.normalized(), world)? {
        let sub = t
            .subtree(position)
            .ok_or_else(|| Error::BadPosition(format!("{position:?} does not address a vertex of {t}")))?;
        for (s2, c2) in f(sub)? {
            accumulate(&mut out, t.replace(position, s2).expect("position exists"), &c * &c2);
        }
    }
    Ok(vector_from_channels(&out))
}

/// Rebrackets the two vertices rooted at `position` in every term.
pub fn f_move(v: &TreeVector, position: &[Branch], direction: Direction, mode: FMode) -> Result<TreeVector> {
    let rotation = direction.rotation();
    match mode {
        FMode::Paper => at_position(v, position, &mut |t| paper_f(t, rotation)),
        FMode::Oracle => {
            let world = channel_world(v);
            let mut engine = Engine::new(world);
            channels_at_position(v, world, position, &mut |t| engine.rotate(t, rotation))
        }
    }
}

fn label_weight(label: ParticleLabel, c: Channel, world: World) -> Scalar {
    label_to_channels(label, world)
        .expect("world admits the label")
        .into_iter()
        .find(|(c2, _)| *c2 == c)
        .map_or_else(Scalar::zero, |(_, w)| w)
}

fn resolve_crossing(v: &TreeVector, position: &[Branch], crossing: Crossing, world: World) -> Result<TreeVector> {
    let book = RuleBook::standard();
    let mut out = ChannelVector::new();
    for (t, c) in v.normalized().iter() {
        let Some(LabeledTree::Node(t1, t2, _)) = t.subtree(position) else {
            return Err(Error::BadPosition(format!(
                "{position:?} does not address a vertex of {t}"
            )));
        };
        let (l1, l2) = (t1.label(), t2.label());
        let lower1 = label_to_channels(l1, world)?;
        let lower2 = label_to_channels(l2, world)?;
        for (ct, tc) in to_channels(t, world)? {
            let Some(ChannelTree::Node(c1, c2, nu)) = ct.subtree(position) else {
                unreachable!("channel trees share the shape of their source");
            };
            let target = (c1.label(), c2.label());
            let mut factor = Scalar::zero();
            for (m1, w1) in &lower1 {
                for (m2, w2) in &lower2 {
                    let Some(entry) = book.crossing(*m2, *m1, *nu, crossing) else {
                        continue;
                    };
                    for (pair, x) in &entry.terms {
                        if *pair == target {
                            factor += &(w1 * w2) * x;
                        }
                    }
                }
            }
            // The upper operators of the two branches now sit below the
            // crossing, so their weights are divided back out.
            let upper = label_weight(l1, target.0, world) * label_weight(l2, target.1, world);
            let coeff = &(c * &tc) * &factor.checked_div(&upper)?;
            accumulate(&mut out, ct, coeff);
        }
    }
    Ok(vector_from_channels(&out))
}

/// Removes a classical crossing of the given sign between the two upper
/// branches of the vertex at `position`.
///
/// Each upper branch keeps its edge operator below the crossing, next to the
/// vertex. With classical labels the result is diagonal in the root label.
pub fn r_move(v: &TreeVector, position: &[Branch], sign: CrossingSign) -> Result<TreeVector> {
    let crossing = match sign {
        CrossingSign::Positive => Crossing::Positive,
        CrossingSign::Negative => Crossing::Negative,
    };
    resolve_crossing(v, position, crossing, channel_world(v))
}

/// Removes a virtual crossing between the two upper branches of the vertex
/// at `position`.
pub fn swap_move(v: &TreeVector, position: &[Branch]) -> Result<TreeVector> {
    resolve_crossing(v, position, Crossing::Virtual, World::Extended)
}

/// The cherry `(b, a -> v)` with a crossing above its leaves, so that the
/// top ends come in the order `a`, `b`.
pub fn crossed_cherry(a: ParticleLabel, b: ParticleLabel, v: ParticleLabel, crossing: Crossing) -> DiagramSum {
    let cherry = LabeledTree::node(LabeledTree::Leaf(b), LabeledTree::Leaf(a), v);
    expand_unchecked(&cherry)
        .compose(&crossing.cable_diagram(b.strands(), a.strands()))
        .expect("cable boundaries match")
}

/// A vertex fusing `a`, `b` into `edge` followed by its mirror image splitting
/// `edge` back, optionally with a crossing between them; returns the multiple
/// of the straight edge (its operator and the mirror stacked) it equals.
pub fn bubble_value(
    a: ParticleLabel,
    b: ParticleLabel,
    edge: ParticleLabel,
    decoration: Option<Crossing>,
) -> Result<Scalar> {
    let vertex = |p, q| expand_unchecked(&LabeledTree::node(LabeledTree::Leaf(p), LabeledTree::Leaf(q), edge));
    let up = vertex(a, b);
    let bubble = match decoration {
        None => up.compose(&up.mirror())?,
        Some(x) => up
            .compose(&x.cable_diagram(a.strands(), b.strands()))?
            .compose(&vertex(b, a).mirror())?,
    };
    let op = edge.edge_operator();
    let e = op.compose(&op.mirror())?;
    let value = e.pairing(&bubble)?.checked_div(&e.pairing(&e)?)?;
    if bubble == e.scale(&value) {
        Ok(value)
    } else {
        Err(Error::PatternMismatch(format!(
            "({a} {b} -> {edge}) bubble is not a multiple of the edge"
        )))
    }
}

/// A projected cable turning back: `edge ∘ cup`, which vanishes for every
/// two-strand label.
pub fn turnback(edge: ParticleLabel) -> Result<DiagramSum> {
    if edge.strands() != 2 {
        return Err(Error::BadPosition(format!("a {edge} edge has no strands to turn back")));
    }
    edge.edge_operator().compose(&crate::diagrams::Diagram::cupcap().into())
}

/// A diagram written in the left-comb basis.
#[derive(Clone, Debug)]
pub struct Projection {
    pub vector: TreeVector,
    /// True when the diagram lies in the span, so `vector` expands back to it.
    pub exact: bool,
}

fn channel_left_combs(leaves: usize, world: World, sector: RootSector) -> Vec<ChannelTree> {
    let leaf_channels: &[Channel] = match world {
        World::Classical => &[Channel::P],
        World::Extended => &[Channel::Sym, Channel::Anti],
    };
    let mut trees: Vec<ChannelTree> = leaf_channels.iter().map(|&c| ChannelTree::Leaf(c)).collect();
    for _ in 1..leaves {
        let mut next = Vec::new();
        for t in &trees {
            for &b in leaf_channels {
                for &o in world.alphabet() {
                    if vertex_allowed(t.label(), b, o) {
                        next.push(ChannelTree::node(t.clone(), ChannelTree::Leaf(b), o));
                    }
                }
            }
        }
        trees = next;
    }
    let want = match sector {
        RootSector::Cable => 2,
        RootSector::Vacuum => 0,
    };
    trees.into_iter().filter(|t| t.label().strands() == want).collect()
}

/// Orthogonal projection of `lhs` onto the left combs with `leaves` two-strand
/// leaves, computed in the channel basis where those trees are orthogonal.
pub fn project_onto_left_combs(
    lhs: &DiagramSum,
    leaves: usize,
    sector: RootSector,
    world: World,
) -> Result<Projection> {
    let mut channels = ChannelVector::new();
    for t in channel_left_combs(leaves, world, sector) {
        let e = expand(&t).to_diagram_sum();
        let overlap = e.pairing(lhs)?;
        if !overlap.is_zero() {
            accumulate(&mut channels, t, overlap.checked_div(&e.pairing(&e)?)?);
        }
    }
    let vector = vector_from_channels(&channels);
    let exact = expand_vector(&vector)? == *lhs;
    Ok(Projection { vector, exact })
}

pub fn expand_vector(v: &TreeVector) -> Result<DiagramSum> {
    let mut acc: Option<DiagramSum> = None;
    for (t, c) in v.iter() {
        let e = expand_unchecked(t).scale(c);
        acc = Some(match acc {
            None => e,
            Some(a) => a.add(&e),
        });
    }
    Ok(acc.unwrap_or_else(DiagramSum::zero))
}

/// Left-associates the three-leaf fragment with a `~P` internal edge.
pub fn lemma1_rule(t: &LabeledTree) -> Result<Projection> {
    let mismatch = || Error::PatternMismatch(format!("{t} is not a 3-leaf P tree with a ~P internal edge"));
    let LabeledTree::Node(l, r, root) = t else {
        return Err(mismatch());
    };
    let internal = match (&**l, &**r) {
        (LabeledTree::Node(..), LabeledTree::Leaf(_)) => l.label(),
        (LabeledTree::Leaf(_), LabeledTree::Node(..)) => r.label(),
        _ => return Err(mismatch()),
    };
    if internal != ParticleLabel::PTilde || t.leaf_labels() != [ParticleLabel::P; 3] || t.vanishes() {
        return Err(mismatch());
    }
    project_onto_left_combs(&expand_unchecked(t), 3, RootSector::of(*root), World::Extended)
}

/// The cherry `(P P -> root)` under a virtual crossing stacked on a
/// classical one.
pub fn lemma2_rule(root: ParticleLabel, sign: CrossingSign) -> Result<Projection> {
    let cherry = LabeledTree::node(
        LabeledTree::Leaf(ParticleLabel::P),
        LabeledTree::Leaf(ParticleLabel::P),
        root,
    );
    let letter = match sign {
        CrossingSign::Positive => "s1",
        CrossingSign::Negative => "s1^-1",
    };
    let word: BraidWord = format!("n=2; v1 {letter}").parse()?;
    word_on_cherry(&cherry, &word)
}

/// A cherry with a `~P` leaf under a classical crossing.
pub fn lemma3_rule(cherry: &LabeledTree, sign: CrossingSign) -> Result<Projection> {
    let is_cherry = matches!(cherry, LabeledTree::Node(l, r, _)
        if matches!(**l, LabeledTree::Leaf(_)) && matches!(**r, LabeledTree::Leaf(_)));
    let leaves = cherry.leaf_labels();
    if !is_cherry
        || !leaves.contains(&ParticleLabel::PTilde)
        || leaves.iter().any(|l| l.strands() != 2)
        || cherry.vanishes()
    {
        return Err(Error::PatternMismatch(format!(
            "{cherry} is not a cherry with a ~P leaf and a P or ~P leaf"
        )));
    }
    let word = BraidWord::new(2, vec![crate::braidrep::Letter::Sigma { index: 1, sign }])?;
    word_on_cherry(cherry, &word)
}

fn word_on_cherry(cherry: &LabeledTree, word: &BraidWord) -> Result<Projection> {
    let lhs = expand_unchecked(cherry).compose(&word.cable_diagram())?;
    project_onto_left_combs(&lhs, 2, RootSector::of(cherry.label()), World::Extended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ParticleLabel::*;

    fn tv(s: &str) -> TreeVector {
        TreeVector::basis(s.parse().unwrap())
    }

    #[test]
    fn paper_f_squares_to_scaled_identity() {
        let k = constants();
        let factor = (&k.delta + &Scalar::one()) * (&k.a * &k.a);
        for src in ["(L:P (L:P L:P):P):P", "(L:P (L:P L:P):*):P"] {
            let v = tv(src);
            let once = f_move(&v, &[], Direction::Forward, FMode::Paper).unwrap();
            assert_eq!(once.len(), 2);
            let back = f_move(&once, &[], Direction::Backward, FMode::Paper).unwrap();
            assert_eq!(back, v.scale(&factor), "{src}");
        }
    }

    #[test]
    fn bad_positions_are_reported() {
        let v = tv("((L:P L:P):P L:P):P");
        assert!(matches!(
            f_move(&v, &[], Direction::Forward, FMode::Paper),
            Err(Error::BadPosition(_))
        ));
        assert!(matches!(
            r_move(&v, &[Branch::Right], CrossingSign::Positive),
            Err(Error::BadPosition(_))
        ));
    }

    #[test]
    fn r_move_is_diagonal_and_invertible() {
        for root in ["P", "*"] {
            let v = tv(&format!("(L:P L:P):{root}"));
            let up = r_move(&v, &[], CrossingSign::Positive).unwrap();
            assert_eq!(up.len(), 1);
            let down = r_move(&up, &[], CrossingSign::Negative).unwrap();
            assert_eq!(down, v);
        }
    }

    #[test]
    fn swap_is_an_involution() {
        for s in ["(L:P L:P):P", "(L:P L:~P):*", "(L:P L:*):P", "((L:P L:P):~P L:P):P"] {
            let v = tv(s);
            let once = swap_move(&v, &[]).unwrap();
            assert_eq!(swap_move(&once, &[]).unwrap(), v.normalized(), "{s}");
        }
        let v = tv("(L:P L:*):P");
        assert_eq!(swap_move(&v, &[]).unwrap(), v);
    }

    #[test]
    fn moves_match_the_diagrams() {
        for (a, b, v) in [(P, P, P), (P, P, Star), (PTilde, P, P), (P, Star, P), (P, PTilde, Star)] {
            let t = LabeledTree::node(LabeledTree::Leaf(a), LabeledTree::Leaf(b), v);
            for (crossing, moved) in [
                (
                    Crossing::Positive,
                    r_move(&TreeVector::basis(t.clone()), &[], CrossingSign::Positive),
                ),
                (Crossing::Virtual, swap_move(&TreeVector::basis(t.clone()), &[])),
            ] {
                let lhs = crossed_cherry(a, b, v, crossing);
                assert_eq!(expand_vector(&moved.unwrap()).unwrap(), lhs, "{t} {crossing:?}");
            }
        }
    }

    #[test]
    fn classical_bubble_is_theta_over_delta() {
        let k = constants();
        let value = bubble_value(P, P, P, None).unwrap();
        assert_eq!(value, k.theta.checked_div(&k.delta).unwrap());
        assert!(bubble_value(P, PTilde, P, Some(Crossing::Virtual)).is_ok());
    }

    #[test]
    fn turnbacks_vanish() {
        assert!(turnback(P).unwrap().is_zero());
        assert!(turnback(PTilde).unwrap().is_zero());
        assert!(turnback(Star).is_err());
    }

    #[test]
    fn two_leaf_lemmas_are_exact() {
        for root in [P, Star] {
            let p = lemma2_rule(root, CrossingSign::Positive).unwrap();
            assert!(p.exact);
        }
        let p = lemma3_rule(&"(L:P L:~P):P".parse().unwrap(), CrossingSign::Positive).unwrap();
        assert!(p.exact);
        assert!(lemma3_rule(&"(L:P L:P):P".parse().unwrap(), CrossingSign::Positive).is_err());
    }
}
