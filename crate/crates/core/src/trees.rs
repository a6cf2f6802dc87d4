//! Fusion trees: binary shapes, edge labels `P`, `*`, `~P`, and their
//! expansion into projected two-strand cables.
//!
//! A `P` edge is a two-strand cable carrying the projector, a `*` edge has no
//! strands, and a `~P` edge is a two-strand cable whose strands cross
//! virtually before the projector. Trees are read with leaves on top and the
//! root at the bottom, so an expansion has `2 * (#two-strand leaves)` top
//! points and the root's strand count of bottom points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::diagrams::{projector2, virtual_transposition, Diagram, DiagramSum};
use crate::error::{Error, Result};
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParticleLabel {
    P,
    Star,
    PTilde,
}

impl ParticleLabel {
    pub const ALL: [ParticleLabel; 3] = [ParticleLabel::P, ParticleLabel::Star, ParticleLabel::PTilde];
    pub const CLASSICAL: [ParticleLabel; 2] = [ParticleLabel::P, ParticleLabel::Star];

    pub fn strands(self) -> usize {
        match self {
            ParticleLabel::Star => 0,
            _ => 2,
        }
    }

    /// Swaps `P` and `~P`; `*` is fixed.
    pub fn toggle_twist(self) -> Self {
        match self {
            ParticleLabel::P => ParticleLabel::PTilde,
            ParticleLabel::PTilde => ParticleLabel::P,
            ParticleLabel::Star => ParticleLabel::Star,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ParticleLabel::P => "P",
            ParticleLabel::Star => "*",
            ParticleLabel::PTilde => "~P",
        }
    }

    /// The cable operator carried by an edge with this label.
    pub fn edge_operator(self) -> DiagramSum {
        match self {
            ParticleLabel::P => projector2(),
            ParticleLabel::Star => DiagramSum::from_diagram(Diagram::empty()),
            ParticleLabel::PTilde => projector2()
                .compose(&virtual_transposition().into())
                .expect("two-strand boundaries"),
        }
    }
}

impl fmt::Display for ParticleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ParticleLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(ParticleLabel::P),
            "*" => Ok(ParticleLabel::Star),
            "~P" => Ok(ParticleLabel::PTilde),
            _ => Err(Error::Syntax {
                position: 0,
                message: format!("unknown label {s:?}"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FusionMode {
    Classical,
    Virtual,
}

/// Interaction rules for a vertex with upper inputs `a`, `b` and output `out`.
///
/// Classical: `PP -> P`, `PP -> *`, `*P -> P` and its mirror. Virtual adds
/// `PP -> ~P`, `P~P -> {P, *, ~P}`, `P* -> ~P`, `~P* -> {~P, P}` and mirrors;
/// `~P~P -> {P, *, ~P}` is admitted because those junctions expand to nonzero
/// diagrams.
pub fn fusion_allowed(a: ParticleLabel, b: ParticleLabel, out: ParticleLabel, mode: FusionMode) -> bool {
    use ParticleLabel::*;
    match mode {
        FusionMode::Classical => matches!((a, b, out), (P, P, P) | (P, P, Star) | (Star, P, P) | (P, Star, P)),
        FusionMode::Virtual => match (a, b) {
            (Star, Star) => false,
            (Star, _) | (_, Star) => out != Star,
            _ => true,
        },
    }
}

/// True when the junction with these strand counts expands to zero once the
/// projectors are attached (a projected cable capped off or cupped in).
pub fn junction_vanishes(a: ParticleLabel, b: ParticleLabel, out: ParticleLabel) -> bool {
    matches!(
        (a.strands(), b.strands(), out.strands()),
        (2, 0, 0) | (0, 2, 0) | (0, 0, 2)
    )
}

/// The bare junction from `a ⊗ b` (top) to `out` (bottom).
pub(crate) fn junction(a: usize, b: usize, out: usize) -> Diagram {
    let pairs: &[(usize, usize)] = match (a, b, out) {
        (2, 2, 2) => &[(0, 2), (1, 5), (3, 4)],
        (2, 2, 0) => &[(0, 3), (1, 2)],
        (2, 0, 2) | (0, 2, 2) => &[(0, 2), (1, 3)],
        (0, 0, 0) => &[],
        (2, 0, 0) | (0, 2, 0) | (0, 0, 2) => &[(0, 1)],
        _ => unreachable!("labels carry 0 or 2 strands"),
    };
    Diagram::from_pairs(out, a + b, pairs).expect("junction tables are valid")
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    pub fn node(l: TreeShape, r: TreeShape) -> Self {
        TreeShape::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// `((..(L L) L) .. L)` with `n` leaves.
    pub fn left_comb(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one leaf");
        (1..n).fold(TreeShape::Leaf, |acc, _| TreeShape::node(acc, TreeShape::Leaf))
    }

    pub fn is_left_comb(&self) -> bool {
        match self {
            TreeShape::Leaf => true,
            TreeShape::Node(l, r) => **r == TreeShape::Leaf && l.is_left_comb(),
        }
    }

    /// Number of internal vertices whose right child is not a leaf.
    pub fn right_depth(&self) -> usize {
        match self {
            TreeShape::Leaf => 0,
            TreeShape::Node(l, r) => usize::from(**r != TreeShape::Leaf) + l.right_depth() + r.right_depth(),
        }
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeShape::Leaf => write!(f, "L"),
            TreeShape::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

impl fmt::Debug for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Leaf,
    Label(ParticleLabel),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            b'L' => {
                out.push((i, Token::Leaf));
                i += 1;
            }
            b':' => {
                let rest = &s[i + 1..];
                let (label, len) = if rest.starts_with("~P") {
                    (ParticleLabel::PTilde, 2)
                } else if rest.starts_with('P') {
                    (ParticleLabel::P, 1)
                } else if rest.starts_with('*') {
                    (ParticleLabel::Star, 1)
                } else {
                    return Err(Error::Syntax {
                        position: i,
                        message: "expected P, * or ~P after ':'".into(),
                    });
                };
                out.push((i, Token::Label(label)));
                i += 1 + len;
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(s)?,
            pos: 0,
            end: s.len(),
        })
    }

    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.here(),
            message: message.into(),
        }
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn shape(&mut self) -> Result<TreeShape> {
        match self.peek() {
            Some(Token::Leaf) => {
                self.pos += 1;
                Ok(TreeShape::Leaf)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let l = self.shape()?;
                let r = self.shape()?;
                self.expect(Token::Close, "')'")?;
                Ok(TreeShape::node(l, r))
            }
            _ => Err(self.err("expected 'L' or '('")),
        }
    }

    fn label(&mut self) -> Result<ParticleLabel> {
        match self.peek() {
            Some(Token::Label(l)) => {
                self.pos += 1;
                Ok(l)
            }
            _ => Err(self.err("expected an edge label")),
        }
    }

    fn labeled(&mut self) -> Result<LabeledTree> {
        match self.peek() {
            Some(Token::Leaf) => {
                self.pos += 1;
                Ok(LabeledTree::Leaf(self.label()?))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let l = self.labeled()?;
                let r = self.labeled()?;
                self.expect(Token::Close, "')'")?;
                Ok(LabeledTree::node(l, r, self.label()?))
            }
            _ => Err(self.err("expected 'L' or '('")),
        }
    }
}

impl FromStr for TreeShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s)?;
        let t = p.shape()?;
        p.finish()?;
        Ok(t)
    }
}

/// Which way to step from a vertex towards one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Left,
    Right,
}

/// A binary tree with a label on every edge, the root edge included.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabeledTree {
    Leaf(ParticleLabel),
    Node(Box<LabeledTree>, Box<LabeledTree>, ParticleLabel),
}

impl LabeledTree {
    pub fn node(l: LabeledTree, r: LabeledTree, out: ParticleLabel) -> Self {
        LabeledTree::Node(Box::new(l), Box::new(r), out)
    }

    /// Label of the edge leaving this subtree downwards.
    pub fn label(&self) -> ParticleLabel {
        match self {
            LabeledTree::Leaf(l) | LabeledTree::Node(_, _, l) => *l,
        }
    }

    pub fn with_label(&self, label: ParticleLabel) -> Self {
        match self {
            LabeledTree::Leaf(_) => LabeledTree::Leaf(label),
            LabeledTree::Node(l, r, _) => LabeledTree::Node(l.clone(), r.clone(), label),
        }
    }

    pub fn shape(&self) -> TreeShape {
        match self {
            LabeledTree::Leaf(_) => TreeShape::Leaf,
            LabeledTree::Node(l, r, _) => TreeShape::node(l.shape(), r.shape()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            LabeledTree::Leaf(_) => 1,
            LabeledTree::Node(l, r, _) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Leaf labels left to right.
    pub fn leaf_labels(&self) -> Vec<ParticleLabel> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ParticleLabel>) {
        match self {
            LabeledTree::Leaf(l) => out.push(*l),
            LabeledTree::Node(l, r, _) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Every label, in serialization order (children before their output edge).
    pub fn labels(&self) -> Vec<ParticleLabel> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<ParticleLabel>) {
        if let LabeledTree::Node(l, r, _) = self {
            l.collect_labels(out);
            r.collect_labels(out);
        }
        out.push(self.label());
    }

    /// `(a, b, out)` for every vertex, in post-order.
    pub fn vertices(&self) -> Vec<(ParticleLabel, ParticleLabel, ParticleLabel)> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<(ParticleLabel, ParticleLabel, ParticleLabel)>) {
        if let LabeledTree::Node(l, r, o) = self {
            l.collect_vertices(out);
            r.collect_vertices(out);
            out.push((l.label(), r.label(), *o));
        }
    }

    pub fn is_classical(&self) -> bool {
        self.labels().iter().all(|l| *l != ParticleLabel::PTilde)
    }

    pub fn is_admissible(&self, mode: FusionMode) -> bool {
        self.vertices()
            .into_iter()
            .all(|(a, b, o)| fusion_allowed(a, b, o, mode))
    }

    /// True when some junction is a capped or cupped projected cable.
    pub fn vanishes(&self) -> bool {
        self.vertices().into_iter().any(|(a, b, o)| junction_vanishes(a, b, o))
    }

    pub fn subtree(&self, path: &[Branch]) -> Option<&LabeledTree> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((Branch::Left, rest)), LabeledTree::Node(l, _, _)) => l.subtree(rest),
            (Some((Branch::Right, rest)), LabeledTree::Node(_, r, _)) => r.subtree(rest),
            _ => None,
        }
    }

    /// Replaces the subtree at `path`.
    pub fn replace(&self, path: &[Branch], with: LabeledTree) -> Option<LabeledTree> {
        match (path.split_first(), self) {
            (None, _) => Some(with),
            (Some((Branch::Left, rest)), LabeledTree::Node(l, r, o)) => {
                Some(LabeledTree::Node(Box::new(l.replace(rest, with)?), r.clone(), *o))
            }
            (Some((Branch::Right, rest)), LabeledTree::Node(l, r, o)) => {
                Some(LabeledTree::Node(l.clone(), Box::new(r.replace(rest, with)?), *o))
            }
            _ => None,
        }
    }

    /// Moves every virtual twist off `*`-junction outputs and off the right
    /// input of a `(~, ~ -> *)` vertex. The result expands to the same diagram.
    pub fn normalize_twists(&self) -> LabeledTree {
        use ParticleLabel::*;
        match self {
            LabeledTree::Leaf(_) => self.clone(),
            LabeledTree::Node(l, r, o) => {
                let (mut l, mut r, mut o) = ((**l).clone(), (**r).clone(), *o);
                match (l.label().strands(), r.label().strands(), o.strands()) {
                    (2, 0, 2) if o == PTilde => {
                        o = P;
                        l = l.with_label(l.label().toggle_twist());
                    }
                    (0, 2, 2) if o == PTilde => {
                        o = P;
                        r = r.with_label(r.label().toggle_twist());
                    }
                    (2, 2, 0) if r.label() == PTilde => {
                        l = l.with_label(l.label().toggle_twist());
                        r = r.with_label(P);
                    }
                    _ => {}
                }
                LabeledTree::node(l.normalize_twists(), r.normalize_twists(), o)
            }
        }
    }

    pub fn is_twist_normal(&self) -> bool {
        self.normalize_twists() == *self
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledTree::Leaf(l) => write!(f, "L:{l}"),
            LabeledTree::Node(a, b, o) => write!(f, "({a} {b}):{o}"),
        }
    }
}

impl fmt::Debug for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LabeledTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s)?;
        let t = p.labeled()?;
        p.finish()?;
        Ok(t)
    }
}

/// Expansion without any admissibility check; vanishing junctions give zero.
pub fn expand_unchecked(t: &LabeledTree) -> DiagramSum {
    match t {
        LabeledTree::Leaf(l) => l.edge_operator(),
        LabeledTree::Node(a, b, o) => {
            let top = expand_unchecked(a).tensor(&expand_unchecked(b));
            if top.is_zero() {
                return DiagramSum::zero();
            }
            let j = DiagramSum::from_diagram(junction(a.label().strands(), b.label().strands(), o.strands()));
            let lowered = j.compose(&top).expect("junction matches the cables above");
            o.edge_operator()
                .compose(&lowered)
                .expect("edge operator matches the junction")
        }
    }
}

/// Expands an admissible tree into the diagram algebra.
///
/// A tree is admissible here when no junction caps or cups a projected cable;
/// those trees expand to zero and are rejected.
pub fn expand_to_diagram(t: &LabeledTree) -> Result<DiagramSum> {
    if let Some((a, b, o)) = t.vertices().into_iter().find(|&(a, b, o)| junction_vanishes(a, b, o)) {
        return Err(Error::InadmissibleTree(format!("vertex ({a},{b}->{o}) in {t}")));
    }
    Ok(expand_unchecked(t))
}

/// Pairings `close(mirror(expand t_i) . expand t_j)`.
///
/// All trees must share a shape and root label.
pub fn gram_matrix(basis: &[LabeledTree]) -> Result<Vec<Vec<Scalar>>> {
    if let Some(first) = basis.first() {
        let shape = first.shape();
        for t in basis {
            if t.shape() != shape || t.label() != first.label() {
                return Err(Error::ShapeMismatch(format!("{t} vs {first}")));
            }
        }
    }
    let expansions = basis.iter().map(expand_to_diagram).collect::<Result<Vec<_>>>()?;
    gram_of(&expansions)
}

/// Symmetric Gram matrix of already-expanded elements.
pub fn gram_of(expansions: &[DiagramSum]) -> Result<Vec<Vec<Scalar>>> {
    let n = expansions.len();
    let mut g = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = expansions[i].pairing(&expansions[j])?;
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// All labelings of `shape` with every leaf labeled `leaf_label` and every
/// vertex admissible in `mode`, in lexicographic order of the label sequence
/// (serialization order, `P < * < ~P`).
pub fn enumerate_labelings(
    shape: &TreeShape,
    mode: FusionMode,
    leaf_label: ParticleLabel,
    root_filter: Option<ParticleLabel>,
) -> Vec<LabeledTree> {
    let alphabet: &[ParticleLabel] = match mode {
        FusionMode::Classical => &ParticleLabel::CLASSICAL,
        FusionMode::Virtual => &ParticleLabel::ALL,
    };
    let all = enumerate_with(shape, &|_| vec![leaf_label], alphabet, &|a, b, o| {
        fusion_allowed(a, b, o, mode)
    });
    match root_filter {
        Some(r) => all.into_iter().filter(|t| t.label() == r).collect(),
        None => all,
    }
}

pub(crate) fn enumerate_with(
    shape: &TreeShape,
    leaf_labels: &dyn Fn(usize) -> Vec<ParticleLabel>,
    alphabet: &[ParticleLabel],
    allowed: &dyn Fn(ParticleLabel, ParticleLabel, ParticleLabel) -> bool,
) -> Vec<LabeledTree> {
    fn go(
        shape: &TreeShape,
        first_leaf: usize,
        leaf_labels: &dyn Fn(usize) -> Vec<ParticleLabel>,
        alphabet: &[ParticleLabel],
        allowed: &dyn Fn(ParticleLabel, ParticleLabel, ParticleLabel) -> bool,
    ) -> Vec<LabeledTree> {
        match shape {
            TreeShape::Leaf => leaf_labels(first_leaf).into_iter().map(LabeledTree::Leaf).collect(),
            TreeShape::Node(l, r) => {
                let left = go(l, first_leaf, leaf_labels, alphabet, allowed);
                let right = go(r, first_leaf + l.leaves(), leaf_labels, alphabet, allowed);
                let mut out = Vec::new();
                for a in &left {
                    for b in &right {
                        for &o in alphabet {
                            if allowed(a.label(), b.label(), o) {
                                out.push(LabeledTree::node(a.clone(), b.clone(), o));
                            }
                        }
                    }
                }
                out
            }
        }
    }
    go(shape, 0, leaf_labels, alphabet, allowed)
}

/// Counts of admissible labelings by root label, without materializing them.
pub fn count_labelings(
    shape: &TreeShape,
    mode: FusionMode,
    leaf_label: ParticleLabel,
) -> BTreeMap<ParticleLabel, u128> {
    match shape {
        TreeShape::Leaf => BTreeMap::from([(leaf_label, 1)]),
        TreeShape::Node(l, r) => {
            let left = count_labelings(l, mode, leaf_label);
            let right = count_labelings(r, mode, leaf_label);
            let alphabet: &[ParticleLabel] = match mode {
                FusionMode::Classical => &ParticleLabel::CLASSICAL,
                FusionMode::Virtual => &ParticleLabel::ALL,
            };
            let mut out = BTreeMap::new();
            for (&a, &ca) in &left {
                for (&b, &cb) in &right {
                    for &o in alphabet {
                        if fusion_allowed(a, b, o, mode) {
                            *out.entry(o).or_insert(0) += ca * cb;
                        }
                    }
                }
            }
            out
        }
    }
}

/// Root strand sector of a tree space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootSector {
    /// Root labeled `P` or `~P`.
    Cable,
    /// Root labeled `*`.
    Vacuum,
}

impl RootSector {
    pub fn of(label: ParticleLabel) -> Self {
        if label.strands() == 0 {
            RootSector::Vacuum
        } else {
            RootSector::Cable
        }
    }
}

/// The twist-normal left-comb trees with leaves in `{P, ~P}`, internal and
/// root labels in `{P, *, ~P}`, no vanishing junction, and root in `sector`.
///
/// Every left-comb tree with two-strand leaves reduces to a combination of
/// these (see [`LabeledTree::normalize_twists`]).
pub fn extended_basis(leaves: usize, sector: RootSector) -> Vec<LabeledTree> {
    let shape = TreeShape::left_comb(leaves);
    let roots: &[ParticleLabel] = match sector {
        RootSector::Cable => &[ParticleLabel::P, ParticleLabel::PTilde],
        RootSector::Vacuum => &[ParticleLabel::Star],
    };
    enumerate_with(
        &shape,
        &|_| vec![ParticleLabel::P, ParticleLabel::PTilde],
        &ParticleLabel::ALL,
        &|a, b, o| !junction_vanishes(a, b, o),
    )
    .into_iter()
    .filter(|t| roots.contains(&t.label()) && t.is_twist_normal())
    .collect()
}

/// Classical left-comb basis: leaves `P`, labels `P`/`*`, fixed root label.
pub fn classical_basis(leaves: usize, root: ParticleLabel) -> Vec<LabeledTree> {
    enumerate_labelings(
        &TreeShape::left_comb(leaves),
        FusionMode::Classical,
        ParticleLabel::P,
        Some(root),
    )
}

/// A formal combination of labeled trees.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TreeVector {
    terms: BTreeMap<LabeledTree, Scalar>,
}

impl TreeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(t: LabeledTree) -> Self {
        Self::term(t, Scalar::one())
    }

    pub fn term(t: LabeledTree, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(t, c);
        v
    }

    pub fn add_term(&mut self, t: LabeledTree, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
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

    pub fn add(&self, other: &TreeVector) -> TreeVector {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TreeVector {
        if c.is_zero() {
            return TreeVector::zero();
        }
        TreeVector {
            terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LabeledTree, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &LabeledTree) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// Terms sorted by their serialized form.
    pub fn sorted_terms(&self) -> Vec<(&LabeledTree, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(t, _)| t.to_string());
        v
    }

    /// Applies a linear map given on basis trees.
    pub fn flat_map(&self, mut f: impl FnMut(&LabeledTree) -> Result<TreeVector>) -> Result<TreeVector> {
        let mut out = TreeVector::zero();
        for (t, c) in &self.terms {
            for (u, x) in f(t)?.terms {
                out.add_term(u, &x * c);
            }
        }
        Ok(out)
    }

    /// Rewrites every term to its twist-normal form and drops vanishing terms.
    pub fn normalized(&self) -> TreeVector {
        let mut out = TreeVector::zero();
        for (t, c) in &self.terms {
            if t.vanishes() {
                continue;
            }
            out.add_term(t.normalize_twists(), c.clone());
        }
        out
    }

    pub fn expand(&self) -> DiagramSum {
        let mut out = DiagramSum::zero();
        for (t, c) in &self.terms {
            out = out.add(&expand_unchecked(t).scale(c));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(t, c)| serde_json::json!({ "tree": t.to_string(), "coeff": c.to_json() }))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TreeVector> {
        let bad = |m: &str| Error::Syntax {
            position: 0,
            message: format!("tree vector json: {m}"),
        };
        let mut out = TreeVector::zero();
        for item in v.as_array().ok_or_else(|| bad("array expected"))? {
            let t: LabeledTree = item
                .get("tree")
                .and_then(|x| x.as_str())
                .ok_or_else(|| bad("missing tree"))?
                .parse()?;
            let c = Scalar::from_json(item.get("coeff").ok_or_else(|| bad("missing coeff"))?)?;
            out.add_term(t, c);
        }
        Ok(out)
    }
}

impl FromIterator<(LabeledTree, Scalar)> for TreeVector {
    fn from_iter<I: IntoIterator<Item = (LabeledTree, Scalar)>>(iter: I) -> Self {
        let mut v = TreeVector::zero();
        for (t, c) in iter {
            v.add_term(t, c);
        }
        v
    }
}

impl fmt::Debug for TreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {t}")?;
        }
        Ok(())
    }
}
