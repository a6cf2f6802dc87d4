//! The orthogonal channel basis used internally by the rewrite engine.
//!
//! In the diagram algebra the projected cable splits as `P = Sym + Anti`
//! (its symmetric-traceless and antisymmetric parts), and `~P = Sym - Anti`.
//! Trees labeled by `Sym`, `Anti` and `Vac` have one-dimensional vertex
//! spaces and are pairwise orthogonal, which turns every local move into a
//! ratio of two pairings. Classical trees are handled in the planar world,
//! where `P` itself is irreducible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::diagrams::Diagram;
use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::trees::{junction, Branch, LabeledTree, ParticleLabel, TreeShape, TreeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    /// The whole projected cable (classical world only).
    P,
    Sym,
    Anti,
    Vac,
}

impl Channel {
    pub fn strands(self) -> usize {
        if self == Channel::Vac {
            0
        } else {
            2
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Channel::P => "P",
            Channel::Sym => "S",
            Channel::Anti => "A",
            Channel::Vac => "0",
        }
    }
}

/// Planar trees with `P`/`*` labels, or the full virtual calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum World {
    Classical,
    Extended,
}

impl World {
    pub fn alphabet(self) -> &'static [Channel] {
        match self {
            World::Classical => &[Channel::P, Channel::Vac],
            World::Extended => &[Channel::Sym, Channel::Anti, Channel::Vac],
        }
    }

    pub fn cable_channels(self) -> &'static [Channel] {
        match self {
            World::Classical => &[Channel::P],
            World::Extended => &[Channel::Sym, Channel::Anti],
        }
    }
}

/// Whether the vertex `(a, b -> c)` is nonzero in the channel basis.
pub fn vertex_allowed(a: Channel, b: Channel, c: Channel) -> bool {
    match (a.strands(), b.strands(), c.strands()) {
        (0, 0, 0) => true,
        (2, 0, 2) => a == c,
        (0, 2, 2) => b == c,
        (2, 2, 0) => a == b,
        (2, 2, 2) => true,
        _ => false,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelTree {
    Leaf(Channel),
    Node(Box<ChannelTree>, Box<ChannelTree>, Channel),
}

impl ChannelTree {
    pub fn node(l: ChannelTree, r: ChannelTree, c: Channel) -> Self {
        ChannelTree::Node(Box::new(l), Box::new(r), c)
    }

    pub fn label(&self) -> Channel {
        match self {
            ChannelTree::Leaf(c) | ChannelTree::Node(_, _, c) => *c,
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ChannelTree::Leaf(_) => 1,
            ChannelTree::Node(l, r, _) => l.leaves() + r.leaves(),
        }
    }

    pub fn leaf_labels(&self) -> Vec<Channel> {
        match self {
            ChannelTree::Leaf(c) => vec![*c],
            ChannelTree::Node(l, r, _) => {
                let mut v = l.leaf_labels();
                v.extend(r.leaf_labels());
                v
            }
        }
    }

    pub fn is_allowed(&self) -> bool {
        match self {
            ChannelTree::Leaf(_) => true,
            ChannelTree::Node(l, r, c) => vertex_allowed(l.label(), r.label(), *c) && l.is_allowed() && r.is_allowed(),
        }
    }

    pub fn is_left_comb(&self) -> bool {
        match self {
            ChannelTree::Leaf(_) => true,
            ChannelTree::Node(l, r, _) => matches!(**r, ChannelTree::Leaf(_)) && l.is_left_comb(),
        }
    }

    pub fn shape(&self) -> TreeShape {
        match self {
            ChannelTree::Leaf(_) => TreeShape::Leaf,
            ChannelTree::Node(l, r, _) => TreeShape::node(l.shape(), r.shape()),
        }
    }

    pub fn subtree(&self, path: &[Branch]) -> Option<&ChannelTree> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((Branch::Left, rest)), ChannelTree::Node(l, _, _)) => l.subtree(rest),
            (Some((Branch::Right, rest)), ChannelTree::Node(_, r, _)) => r.subtree(rest),
            _ => None,
        }
    }

    pub fn replace(&self, path: &[Branch], with: ChannelTree) -> Option<ChannelTree> {
        match (path.split_first(), self) {
            (None, _) => Some(with),
            (Some((Branch::Left, rest)), ChannelTree::Node(l, r, c)) => {
                Some(ChannelTree::Node(Box::new(l.replace(rest, with)?), r.clone(), *c))
            }
            (Some((Branch::Right, rest)), ChannelTree::Node(l, r, c)) => {
                Some(ChannelTree::Node(l.clone(), Box::new(r.replace(rest, with)?), *c))
            }
            _ => None,
        }
    }
}

impl fmt::Display for ChannelTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelTree::Leaf(c) => write!(f, "L:{}", c.symbol()),
            ChannelTree::Node(l, r, c) => write!(f, "({l} {r}):{}", c.symbol()),
        }
    }
}

impl fmt::Debug for ChannelTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type ChannelVector = BTreeMap<ChannelTree, Scalar>;

pub fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn half() -> Scalar {
    Scalar::from_int(1) / Scalar::from_int(2)
}

pub(crate) fn label_to_channels(label: ParticleLabel, world: World) -> Result<Vec<(Channel, Scalar)>> {
    use ParticleLabel::*;
    Ok(match (world, label) {
        (_, Star) => vec![(Channel::Vac, Scalar::one())],
        (World::Classical, P) => vec![(Channel::P, Scalar::one())],
        (World::Classical, PTilde) => return Err(Error::PatternMismatch("~P label in a classical tree".into())),
        (World::Extended, P) => vec![(Channel::Sym, Scalar::one()), (Channel::Anti, Scalar::one())],
        (World::Extended, PTilde) => {
            vec![(Channel::Sym, Scalar::one()), (Channel::Anti, -Scalar::one())]
        }
    })
}

fn channel_to_labels(c: Channel) -> Vec<(ParticleLabel, Scalar)> {
    match c {
        Channel::P => vec![(ParticleLabel::P, Scalar::one())],
        Channel::Vac => vec![(ParticleLabel::Star, Scalar::one())],
        Channel::Sym => vec![(ParticleLabel::P, half()), (ParticleLabel::PTilde, half())],
        Channel::Anti => vec![(ParticleLabel::P, half()), (ParticleLabel::PTilde, -half())],
    }
}

/// Rewrites a labeled tree in the channel basis of `world`.
pub fn to_channels(t: &LabeledTree, world: World) -> Result<ChannelVector> {
    fn go(t: &LabeledTree, world: World) -> Result<Vec<(ChannelTree, Scalar)>> {
        let own = label_to_channels(t.label(), world)?;
        match t {
            LabeledTree::Leaf(_) => Ok(own.into_iter().map(|(c, x)| (ChannelTree::Leaf(c), x)).collect()),
            LabeledTree::Node(l, r, _) => {
                let left = go(l, world)?;
                let right = go(r, world)?;
                let mut out = Vec::new();
                for (a, ca) in &left {
                    for (b, cb) in &right {
                        for (c, cc) in &own {
                            if vertex_allowed(a.label(), b.label(), *c) {
                                out.push((ChannelTree::node(a.clone(), b.clone(), *c), &(ca * cb) * cc));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }
    let mut v = ChannelVector::new();
    for (t, c) in go(t, world)? {
        accumulate(&mut v, t, c);
    }
    Ok(v)
}

pub fn vector_to_channels(v: &TreeVector, world: World) -> Result<ChannelVector> {
    let mut out = ChannelVector::new();
    for (t, c) in v.iter() {
        for (u, x) in to_channels(t, world)? {
            accumulate(&mut out, u, &x * c);
        }
    }
    Ok(out)
}

/// Rewrites a channel tree with `P`, `*`, `~P` labels, twist-normalized.
pub fn from_channels(t: &ChannelTree) -> TreeVector {
    fn go(t: &ChannelTree) -> Vec<(LabeledTree, Scalar)> {
        let own = channel_to_labels(t.label());
        match t {
            ChannelTree::Leaf(_) => own.into_iter().map(|(l, x)| (LabeledTree::Leaf(l), x)).collect(),
            ChannelTree::Node(l, r, _) => {
                let left = go(l);
                let right = go(r);
                let mut out = Vec::new();
                for (a, ca) in &left {
                    for (b, cb) in &right {
                        for (o, co) in &own {
                            out.push((LabeledTree::node(a.clone(), b.clone(), *o), &(ca * cb) * co));
                        }
                    }
                }
                out
            }
        }
    }
    go(t).into_iter().collect::<TreeVector>().normalized()
}

/// A label slot during [`vector_from_channels`]; converted labels remember
/// whether they came from a split cable channel, which carries a factor 1/2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Channel(Channel),
    Label(ParticleLabel, bool),
}

fn flatten(t: &ChannelTree, out: &mut Vec<Slot>) {
    out.push(Slot::Channel(t.label()));
    if let ChannelTree::Node(l, r, _) = t {
        flatten(l, out);
        flatten(r, out);
    }
}

fn rebuild(shape: &TreeShape, slots: &mut impl Iterator<Item = Slot>) -> LabeledTree {
    let Some(Slot::Label(label, _)) = slots.next() else {
        unreachable!("every slot is converted")
    };
    match shape {
        TreeShape::Leaf => LabeledTree::Leaf(label),
        TreeShape::Node(l, r) => {
            let left = rebuild(l, slots);
            let right = rebuild(r, slots);
            LabeledTree::node(left, right, label)
        }
    }
}

/// [`from_channels`] extended linearly. Labels are converted one position at
/// a time, so each step costs two additions per tree.
pub fn vector_from_channels(v: &ChannelVector) -> TreeVector {
    let mut state: BTreeMap<(TreeShape, Vec<Slot>), Scalar> = BTreeMap::new();
    let mut width = 0;
    for (t, c) in v {
        let mut slots = Vec::new();
        flatten(t, &mut slots);
        width = width.max(slots.len());
        accumulate(&mut state, (t.shape(), slots), c.clone());
    }
    for pos in 0..width {
        let mut next = BTreeMap::new();
        for ((shape, slots), c) in state {
            let Some(&Slot::Channel(ch)) = slots.get(pos) else {
                accumulate(&mut next, (shape, slots), c);
                continue;
            };
            let mut put = |label, halved, c| {
                let mut s = slots.clone();
                s[pos] = Slot::Label(label, halved);
                accumulate(&mut next, (shape.clone(), s), c);
            };
            match ch {
                Channel::P => put(ParticleLabel::P, false, c),
                Channel::Vac => put(ParticleLabel::Star, false, c),
                Channel::Sym => {
                    put(ParticleLabel::P, true, c.clone());
                    put(ParticleLabel::PTilde, true, c);
                }
                Channel::Anti => {
                    put(ParticleLabel::P, true, c.clone());
                    put(ParticleLabel::PTilde, true, -c);
                }
            }
        }
        state = next;
    }
    let mut out = TreeVector::zero();
    for ((shape, slots), c) in state {
        let halves = slots.iter().filter(|s| matches!(s, Slot::Label(_, true))).count();
        let t = rebuild(&shape, &mut slots.into_iter());
        if t.vanishes() {
            continue;
        }
        let scale = Scalar::one() / Scalar::from_int(BigInt::one() << halves);
        out.add_term(t.normalize_twists(), &c * &scale);
    }
    out
}

/// Laurent polynomial in the loop value `d` with rational coefficients.
///
/// Channel expansions only ever involve `1/2`, `1/d` and loop factors, so the
/// pairings that define the local moves live in `Q[d, 1/d]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DPoly(BTreeMap<i64, BigRational>);

impl DPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut p = DPoly::default();
        p.add_monomial(0, c);
        p
    }

    pub fn monomial(k: i64, c: BigRational) -> Self {
        let mut p = DPoly::default();
        p.add_monomial(k, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_monomial(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add_assign(&mut self, rhs: &DPoly) {
        for (k, c) in &rhs.0 {
            self.add_monomial(*k, c.clone());
        }
    }

    pub fn mul(&self, rhs: &DPoly) -> DPoly {
        let mut out = DPoly::default();
        for (i, a) in &self.0 {
            for (j, b) in &rhs.0 {
                out.add_monomial(i + j, a * b);
            }
        }
        out
    }

    pub fn shift(&self, k: i64) -> DPoly {
        DPoly(self.0.iter().map(|(i, c)| (i + k, c.clone())).collect())
    }

    pub fn to_scalar(&self) -> Scalar {
        let d = crate::scalars::constants().d;
        let mut acc = Scalar::zero();
        for (k, c) in &self.0 {
            let c = rational_scalar(c);
            acc += &c * &d.pow(*k as i32);
        }
        acc
    }
}

pub fn rational_scalar(c: &BigRational) -> Scalar {
    Scalar::from_int(c.numer().clone()) / Scalar::from_int(c.denom().clone())
}

fn q(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

/// A diagram sum with coefficients in `Q[d, 1/d]`.
#[derive(Clone, Debug, Default)]
pub struct DSum(BTreeMap<Diagram, DPoly>);

impl DSum {
    fn add_term(&mut self, d: Diagram, c: DPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(d.clone()).or_default();
        e.add_assign(&c);
        if e.is_zero() {
            self.0.remove(&d);
        }
    }

    pub fn from_diagram(d: Diagram) -> Self {
        let mut s = DSum::default();
        s.add_term(d, DPoly::constant(BigRational::one()));
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn compose(&self, upper: &DSum) -> DSum {
        let mut out = DSum::default();
        for (dl, cl) in &self.0 {
            for (du, cu) in &upper.0 {
                let (d, loops) = dl.compose(du).expect("channel boundaries match");
                out.add_term(d, cl.mul(cu).shift(loops as i64));
            }
        }
        out
    }

    pub fn tensor(&self, right: &DSum) -> DSum {
        let mut out = DSum::default();
        for (dl, cl) in &self.0 {
            for (dr, cr) in &right.0 {
                out.add_term(dl.tensor(dr), cl.mul(cr));
            }
        }
        out
    }

    /// `close(mirror(self) . other)`.
    pub fn pairing(&self, other: &DSum) -> DPoly {
        let mut out = DPoly::default();
        for (dl, cl) in &self.0 {
            let m = dl.mirror();
            for (dr, cr) in &other.0 {
                let (d, loops) = m.compose(dr).expect("pairing boundaries match");
                let total = loops + d.closure_loops().expect("closed pairing");
                out.add_assign(&cl.mul(cr).shift(total as i64));
            }
        }
        out
    }

    pub fn to_diagram_sum(&self) -> crate::diagrams::DiagramSum {
        let mut out = crate::diagrams::DiagramSum::zero();
        for (d, c) in &self.0 {
            out.add_term(d.clone(), c.to_scalar());
        }
        out
    }
}

/// The cable operator of a channel.
pub fn edge_operator(c: Channel) -> DSum {
    let id = Diagram::identity(2);
    let t = Diagram::transposition();
    let e = Diagram::cupcap();
    let mut s = DSum::default();
    match c {
        Channel::Vac => return DSum::from_diagram(Diagram::empty()),
        Channel::P => {
            s.add_term(id, DPoly::constant(q(1, 1)));
            s.add_term(e, DPoly::monomial(-1, q(-1, 1)));
        }
        Channel::Sym => {
            s.add_term(id, DPoly::constant(q(1, 2)));
            s.add_term(t, DPoly::constant(q(1, 2)));
            s.add_term(e, DPoly::monomial(-1, q(-1, 1)));
        }
        Channel::Anti => {
            s.add_term(id, DPoly::constant(q(1, 2)));
            s.add_term(t, DPoly::constant(q(-1, 2)));
        }
    }
    s
}

/// Full expansion of a channel tree.
pub fn expand(t: &ChannelTree) -> DSum {
    expand_with(t, true)
}

/// Expansion with or without the operators on the leaf and root edges.
///
/// Those operators are idempotent and invariant under mirroring, so one side
/// of a pairing may omit them.
pub fn expand_with(t: &ChannelTree, outer: bool) -> DSum {
    fn go(t: &ChannelTree, outer: bool, is_root: bool) -> DSum {
        match t {
            ChannelTree::Leaf(c) => {
                if outer {
                    edge_operator(*c)
                } else {
                    DSum::from_diagram(Diagram::identity(c.strands()))
                }
            }
            ChannelTree::Node(a, b, c) => {
                let top = go(a, outer, false).tensor(&go(b, outer, false));
                if top.is_zero() {
                    return DSum::default();
                }
                let j = DSum::from_diagram(junction(a.label().strands(), b.label().strands(), c.strands()));
                let lowered = j.compose(&top);
                if outer || !is_root {
                    edge_operator(*c).compose(&lowered)
                } else {
                    lowered
                }
            }
        }
    }
    go(t, outer, true)
}

/// `<x, y>`; when both trees carry the same leaf and root labels the outer
/// operators of `y` are skipped.
pub fn pairing(x: &ChannelTree, y: &ChannelTree) -> DPoly {
    let same_outer = x.label() == y.label() && x.leaf_labels() == y.leaf_labels();
    expand(x).pairing(&expand_with(y, !same_outer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::expand_unchecked;
    use Channel::*;

    fn leaf(c: Channel) -> ChannelTree {
        ChannelTree::Leaf(c)
    }

    #[test]
    fn vertex_rule_matches_oracle() {
        let all = [P, Sym, Anti, Vac];
        for a in all {
            for b in all {
                for c in all {
                    let mixed = [a, b, c].contains(&P) && [a, b, c].iter().any(|x| matches!(x, Sym | Anti));
                    if mixed {
                        continue;
                    }
                    let t = ChannelTree::node(leaf(a), leaf(b), c);
                    assert_eq!(!expand(&t).is_zero(), vertex_allowed(a, b, c), "{t}");
                }
            }
        }
    }

    #[test]
    fn channel_split_reproduces_labeled_expansion() {
        for s in ["((L:P L:P):P L:P):P", "((L:P L:~P):* L:P):~P", "((L:P L:P):~P L:~P):*"] {
            let t: LabeledTree = s.parse().unwrap();
            let mut sum = crate::diagrams::DiagramSum::zero();
            for (u, c) in to_channels(&t, World::Extended).unwrap() {
                sum = sum.add(&expand(&u).to_diagram_sum().scale(&c));
            }
            assert_eq!(sum, expand_unchecked(&t), "{s}");
        }
    }

    #[test]
    fn channel_roundtrip() {
        let t: LabeledTree = "((L:P L:~P):P L:P):*".parse().unwrap();
        let back = vector_from_channels(&to_channels(&t, World::Extended).unwrap());
        assert_eq!(back, TreeVector::basis(t));
    }

    #[test]
    fn distinct_channel_trees_are_orthogonal() {
        let trees = [
            ChannelTree::node(leaf(Sym), leaf(Sym), Sym),
            ChannelTree::node(leaf(Sym), leaf(Sym), Anti),
            ChannelTree::node(leaf(Sym), leaf(Anti), Sym),
            ChannelTree::node(leaf(Anti), leaf(Anti), Anti),
        ];
        for (i, x) in trees.iter().enumerate() {
            for (j, y) in trees.iter().enumerate() {
                assert_eq!(pairing(x, y).is_zero(), i != j, "{x} {y}");
            }
        }
    }

    #[test]
    fn reduced_pairing_matches_full() {
        let x = ChannelTree::node(ChannelTree::node(leaf(Sym), leaf(Anti), Anti), leaf(Sym), Sym);
        let full = expand(&x).pairing(&expand(&x));
        assert_eq!(pairing(&x, &x), full);
    }
}
