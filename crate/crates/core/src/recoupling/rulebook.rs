//! Local move coefficients derived from the diagram oracle, computed once.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::diagrams::{CrossingSign, DiagramSum};
use crate::scalars::Scalar;

use super::channels::{expand, pairing, Channel, ChannelTree, World};
use crate::braidrep::Letter;

/// What sits above a vertex's two input edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Crossing {
    Positive,
    Negative,
    Virtual,
}

impl Crossing {
    pub const ALL: [Crossing; 3] = [Crossing::Positive, Crossing::Negative, Crossing::Virtual];

    pub fn from_letter(l: Letter) -> Crossing {
        match l {
            Letter::Sigma {
                sign: CrossingSign::Positive,
                ..
            } => Crossing::Positive,
            Letter::Sigma { .. } => Crossing::Negative,
            Letter::Virtual { .. } => Crossing::Virtual,
        }
    }

    fn letter(self) -> Letter {
        match self {
            Crossing::Positive => Letter::sigma(1),
            Crossing::Negative => Letter::sigma_inv(1),
            Crossing::Virtual => Letter::virt(1),
        }
    }

    /// The crossing of a `left`-strand cable with a `right`-strand cable,
    /// as a diagram from `left + right` bottom points to the same number on top.
    pub fn cable_diagram(self, left: usize, right: usize) -> DiagramSum {
        if left == 0 || right == 0 {
            return DiagramSum::identity(left + right);
        }
        self.letter().cable_diagram(2)
    }
}

/// Direction of an associativity move at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rotation {
    /// `((a b)x c)y -> (a (b c)x')y`
    Right,
    /// `(a (b c)x)y -> ((a b)x' c)y`
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FKey {
    pub a: Channel,
    pub b: Channel,
    pub c: Channel,
    pub x: Channel,
    pub y: Channel,
    pub rotation: Rotation,
}

impl FKey {
    /// The fragment being rewritten.
    pub fn source(&self) -> ChannelTree {
        fragment(self.a, self.b, self.c, self.x, self.y, self.rotation)
    }

    /// The fragment in the other bracketing with internal label `x`.
    pub fn target(&self, x: Channel) -> ChannelTree {
        let other = match self.rotation {
            Rotation::Right => Rotation::Left,
            Rotation::Left => Rotation::Right,
        };
        fragment(self.a, self.b, self.c, x, self.y, other)
    }
}

fn fragment(a: Channel, b: Channel, c: Channel, x: Channel, y: Channel, rotation: Rotation) -> ChannelTree {
    use ChannelTree::Leaf;
    match rotation {
        Rotation::Right => ChannelTree::node(ChannelTree::node(Leaf(a), Leaf(b), x), Leaf(c), y),
        Rotation::Left => ChannelTree::node(Leaf(a), ChannelTree::node(Leaf(b), Leaf(c), x), y),
    }
}

/// Coefficients of an associativity move.
#[derive(Clone, Debug)]
pub struct FEntry {
    pub terms: Vec<(Channel, Scalar)>,
    /// False when the source fragment is not in the span of the targets; the
    /// terms are then its orthogonal projection.
    pub exact: bool,
}

/// A crossing above the two leaves of a cherry `(a, b -> v)`, resolved into
/// cherries `(a', b' -> v)` with the leaves exchanged.
#[derive(Clone, Debug)]
pub struct CrossEntry {
    pub terms: Vec<((Channel, Channel), Scalar)>,
    pub exact: bool,
}

#[derive(Debug)]
pub struct RuleBook {
    f: HashMap<FKey, FEntry>,
    cross: HashMap<(Channel, Channel, Channel, Crossing), CrossEntry>,
}

static STANDARD: OnceLock<RuleBook> = OnceLock::new();

impl RuleBook {
    /// The shared rule book; built on first use.
    pub fn standard() -> &'static RuleBook {
        STANDARD.get_or_init(RuleBook::build)
    }

    fn build() -> RuleBook {
        let mut f_keys = Vec::new();
        let mut cross_keys = Vec::new();
        for world in [World::Classical, World::Extended] {
            let al = world.alphabet();
            for &a in al {
                for &b in al {
                    for &c in al {
                        for &x in al {
                            for &y in al {
                                for rotation in [Rotation::Right, Rotation::Left] {
                                    let key = FKey {
                                        a,
                                        b,
                                        c,
                                        x,
                                        y,
                                        rotation,
                                    };
                                    if key.source().is_allowed() {
                                        f_keys.push(key);
                                    }
                                }
                            }
                        }
                        for crossing in Crossing::ALL {
                            let planar = world == World::Classical && crossing == Crossing::Virtual;
                            if !planar && super::channels::vertex_allowed(a, b, c) {
                                cross_keys.push((a, b, c, crossing));
                            }
                        }
                    }
                }
            }
        }
        let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(16);
        let f = parallel_map(&f_keys, workers, f_entry);
        let cross = parallel_map(&cross_keys, workers, |&(a, b, c, x)| crossing_coefficient(a, b, c, x));
        RuleBook {
            f: f_keys.into_iter().zip(f).collect(),
            cross: cross_keys.into_iter().zip(cross).collect(),
        }
    }

    pub fn f(&self, key: &FKey) -> Option<&FEntry> {
        self.f.get(key)
    }

    pub fn f_entries(&self) -> impl Iterator<Item = (&FKey, &FEntry)> {
        self.f.iter()
    }

    pub fn crossing(&self, a: Channel, b: Channel, v: Channel, crossing: Crossing) -> Option<&CrossEntry> {
        self.cross.get(&(a, b, v, crossing))
    }

    pub fn cross_entries(&self) -> impl Iterator<Item = (&(Channel, Channel, Channel, Crossing), &CrossEntry)> {
        self.cross.iter()
    }
}

fn parallel_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let chunk = items.len().div_ceil(workers.max(1)).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("rule worker panicked"))
            .collect()
    })
}

fn f_entry(key: &FKey) -> FEntry {
    let source = key.source();
    let world_alphabet: &[Channel] = if [key.a, key.b, key.c, key.x, key.y].contains(&Channel::P) {
        World::Classical.alphabet()
    } else {
        World::Extended.alphabet()
    };
    let mut terms = Vec::new();
    let mut captured = Scalar::zero();
    for &x in world_alphabet {
        let target = key.target(x);
        if !target.is_allowed() {
            continue;
        }
        let overlap = pairing(&target, &source).to_scalar();
        if overlap.is_zero() {
            continue;
        }
        let norm = pairing(&target, &target).to_scalar();
        let coeff = overlap
            .checked_div(&norm)
            .expect("allowed channel trees have nonzero norm");
        captured += &coeff * &overlap;
        terms.push((x, coeff));
    }
    let exact = pairing(&source, &source).to_scalar() == captured;
    FEntry { terms, exact }
}

fn crossing_coefficient(a: Channel, b: Channel, v: Channel, crossing: Crossing) -> CrossEntry {
    use ChannelTree::Leaf;
    let lhs_tree = ChannelTree::node(Leaf(a), Leaf(b), v);
    let lhs = expand(&lhs_tree)
        .to_diagram_sum()
        .compose(&crossing.cable_diagram(a.strands(), b.strands()))
        .expect("cable boundaries match");
    let alphabet: &[Channel] = if [a, b, v].contains(&Channel::P) {
        World::Classical.alphabet()
    } else {
        World::Extended.alphabet()
    };
    let mut terms = Vec::new();
    let mut residual = lhs.clone();
    for &a2 in alphabet.iter().filter(|c| c.strands() == b.strands()) {
        for &b2 in alphabet.iter().filter(|c| c.strands() == a.strands()) {
            let t = ChannelTree::node(Leaf(a2), Leaf(b2), v);
            if !t.is_allowed() {
                continue;
            }
            let e = expand(&t).to_diagram_sum();
            let c = e
                .pairing(&lhs)
                .expect("same boundary")
                .checked_div(&e.pairing(&e).expect("same boundary"))
                .expect("allowed channel trees have nonzero norm");
            if !c.is_zero() {
                residual = residual.sub(&e.scale(&c));
                terms.push(((a2, b2), c));
            }
        }
    }
    CrossEntry {
        terms,
        exact: residual.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::constants;
    use Channel::*;

    #[test]
    fn classical_r_eigenvalues() {
        let book = RuleBook::standard();
        let diag = |v, x| {
            let e = book.crossing(P, P, v, x).unwrap();
            assert!(e.exact);
            assert_eq!(e.terms.len(), 1);
            e.terms[0].1.clone()
        };
        let r_vac = diag(Vac, Crossing::Positive);
        let r_p = diag(P, Crossing::Positive);
        assert_eq!(r_p.checked_div(&r_vac).unwrap(), -Scalar::monomial(1, 4));
        assert!((r_p * diag(P, Crossing::Negative)).is_one());
    }

    #[test]
    fn virtual_crossing_is_a_sign() {
        let book = RuleBook::standard();
        for (a, b, v) in [(Sym, Sym, Sym), (Sym, Anti, Anti), (Anti, Anti, Vac), (Anti, Sym, Sym)] {
            let e = book.crossing(a, b, v, Crossing::Virtual).unwrap();
            assert!(e.exact);
            assert_eq!(e.terms.len(), 1);
            assert_eq!(e.terms[0].0, (b, a));
            let c = &e.terms[0].1;
            assert!((c * c).is_one(), "{a:?} {b:?} {v:?}: {c}");
        }
    }

    #[test]
    fn every_crossing_rule_is_exact() {
        for (k, e) in RuleBook::standard().cross_entries() {
            assert!(e.exact, "{k:?}");
        }
    }

    #[test]
    fn classical_f_move_is_projection() {
        let book = RuleBook::standard();
        let key = FKey {
            a: P,
            b: P,
            c: P,
            x: P,
            y: P,
            rotation: Rotation::Right,
        };
        let e = book.f(&key).unwrap();
        assert!(!e.exact);
        assert_eq!(e.terms.len(), 2);
        let _ = constants();
    }

    #[test]
    fn vacuum_legs_move_exactly() {
        let book = RuleBook::standard();
        let key = FKey {
            a: Sym,
            b: Vac,
            c: Anti,
            x: Sym,
            y: Sym,
            rotation: Rotation::Right,
        };
        let e = book.f(&key).unwrap();
        assert!(e.exact);
        assert_eq!(e.terms.len(), 1);
        assert!(e.terms[0].1.is_one());
    }
}
