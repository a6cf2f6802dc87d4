//! Matching diagrams with loop value `d`: the Temperley-Lieb algebra widened to
//! non-planar pairings, so that virtual crossings are plain transpositions.
//!
//! A [`Diagram`] has `bottom` points indexed `0..bottom` and `top` points
//! indexed `bottom..bottom + top`, both left to right. Composition stacks an
//! `upper` diagram on a `lower` one, identifying `lower`'s top points with
//! `upper`'s bottom points; closed loops cost a factor `d` each.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalars::{loop_poly, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    bottom: usize,
    top: usize,
    pairing: Vec<u32>,
}

/// Sign of a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn inverse(self) -> Self {
        match self {
            CrossingSign::Positive => CrossingSign::Negative,
            CrossingSign::Negative => CrossingSign::Positive,
        }
    }
}

impl Diagram {
    /// Builds a diagram from its pairing; `pairing[i]` is the partner of point `i`.
    pub fn new(bottom: usize, top: usize, pairing: Vec<usize>) -> Result<Self> {
        let n = bottom + top;
        if pairing.len() != n {
            return Err(Error::BoundaryMismatch(format!(
                "pairing has {} entries for {} points",
                pairing.len(),
                n
            )));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j >= n || j == i || pairing[j] != i {
                return Err(Error::BoundaryMismatch(format!(
                    "pairing is not a fixed-point-free involution at point {i}"
                )));
            }
        }
        Ok(Diagram {
            bottom,
            top,
            pairing: pairing.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds from an explicit list of pairs.
    pub fn from_pairs(bottom: usize, top: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = bottom + top;
        let mut pairing = vec![usize::MAX; n];
        for &(i, j) in pairs {
            if i >= n || j >= n || pairing[i] != usize::MAX || pairing[j] != usize::MAX {
                return Err(Error::BoundaryMismatch(format!("bad pair {i}-{j}")));
            }
            pairing[i] = j;
            pairing[j] = i;
        }
        if pairing.contains(&usize::MAX) {
            return Err(Error::BoundaryMismatch("unpaired boundary point".into()));
        }
        Self::new(bottom, top, pairing)
    }

    pub fn identity(n: usize) -> Self {
        Self::permutation(&(0..n).collect::<Vec<_>>())
    }

    /// The diagram sending bottom strand `i` to top position `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut pairing = vec![0u32; 2 * n];
        for (i, &p) in perm.iter().enumerate() {
            pairing[i] = (n + p) as u32;
            pairing[n + p] = i as u32;
        }
        Diagram {
            bottom: n,
            top: n,
            pairing,
        }
    }

    /// Two strands: bottom points paired together, top points paired together.
    pub fn cupcap() -> Self {
        Self::from_pairs(2, 2, &[(0, 1), (2, 3)]).expect("valid")
    }

    /// Two strands crossing virtually.
    pub fn transposition() -> Self {
        Self::permutation(&[1, 0])
    }

    /// The empty diagram (no points), the unit for tensoring.
    pub fn empty() -> Self {
        Diagram {
            bottom: 0,
            top: 0,
            pairing: Vec::new(),
        }
    }

    /// Cup-cap `e_i` on `n` strands acting on positions `i, i+1` (0-based).
    pub fn cupcap_at(n: usize, i: usize) -> Self {
        Self::identity(i)
            .tensor(&Self::cupcap())
            .tensor(&Self::identity(n - i - 2))
    }

    /// Transposition of positions `i, i+1` (0-based) on `n` strands.
    pub fn transposition_at(n: usize, i: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        Self::permutation(&perm)
    }

    pub fn bottom_count(&self) -> usize {
        self.bottom
    }

    pub fn top_count(&self) -> usize {
        self.top
    }

    pub fn partner(&self, point: usize) -> usize {
        self.pairing[point] as usize
    }

    /// Pairs `(i, j)` with `i < j`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.pairing
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i < j as usize)
            .map(|(i, &j)| (i, j as usize))
            .collect()
    }

    /// True when no two arcs cross in the standard rectangle picture.
    pub fn is_planar(&self) -> bool {
        // Walk the boundary counterclockwise: bottom left-to-right, then top right-to-left.
        let n = self.bottom + self.top;
        let pos = |p: usize| {
            if p < self.bottom {
                p
            } else {
                n - 1 - (p - self.bottom)
            }
        };
        let arcs: Vec<(usize, usize)> = self
            .pairs()
            .into_iter()
            .map(|(i, j)| {
                let (a, b) = (pos(i), pos(j));
                (a.min(b), a.max(b))
            })
            .collect();
        for (k, &(a, b)) in arcs.iter().enumerate() {
            for &(c, e) in &arcs[k + 1..] {
                if (a < c && c < b && b < e) || (c < a && a < e && e < b) {
                    return false;
                }
            }
        }
        true
    }

    /// Stacks `upper` on top of `self`; returns the result and the number of
    /// closed loops formed in the middle.
    pub fn compose(&self, upper: &Diagram) -> Result<(Diagram, usize)> {
        if self.top != upper.bottom {
            return Err(Error::BoundaryMismatch(format!(
                "lower has {} top points, upper has {} bottom points",
                self.top, upper.bottom
            )));
        }
        let lb = self.bottom;
        let mid = self.top;
        let ut = upper.top;
        let mut pairing = vec![u32::MAX; lb + ut];
        let mut seen = vec![false; mid];

        // Follow a path entering the middle layer at middle index `m`, coming
        // from below (`from_lower`) or from above.
        let walk = |mut m: usize, mut from_lower: bool, seen: &mut Vec<bool>| -> usize {
            loop {
                seen[m] = true;
                if from_lower {
                    // continue into upper, which sees m as bottom point m
                    let q = upper.partner(m);
                    if q >= mid {
                        return lb + (q - mid);
                    }
                    m = q;
                    from_lower = false;
                } else {
                    let p = self.partner(lb + m);
                    if p < lb {
                        return p;
                    }
                    m = p - lb;
                    from_lower = true;
                }
            }
        };

        for start in 0..lb {
            if pairing[start] != u32::MAX {
                continue;
            }
            let p = self.partner(start);
            let end = if p < lb { p } else { walk(p - lb, true, &mut seen) };
            pairing[start] = end as u32;
            pairing[end] = start as u32;
        }
        for t in 0..ut {
            let start = lb + t;
            if pairing[start] != u32::MAX {
                continue;
            }
            let q = upper.partner(mid + t);
            let end = if q >= mid {
                lb + (q - mid)
            } else {
                walk(q, false, &mut seen)
            };
            pairing[start] = end as u32;
            pairing[end] = start as u32;
        }

        let mut loops = 0;
        for m in 0..mid {
            if seen[m] {
                continue;
            }
            loops += 1;
            let mut cur = m;
            loop {
                seen[cur] = true;
                let q = upper.partner(cur);
                let next = self.partner(lb + q) - lb;
                seen[q] = true;
                if next == m {
                    break;
                }
                cur = next;
            }
        }
        Ok((
            Diagram {
                bottom: lb,
                top: ut,
                pairing,
            },
            loops,
        ))
    }

    /// Places `right` to the right of `self`.
    pub fn tensor(&self, right: &Diagram) -> Diagram {
        let (lb, lt, rb, rt) = (self.bottom, self.top, right.bottom, right.top);
        let nb = lb + rb;
        let map_left = |p: usize| if p < lb { p } else { nb + (p - lb) };
        let map_right = |p: usize| if p < rb { lb + p } else { nb + lt + (p - rb) };
        let mut pairing = vec![0u32; nb + lt + rt];
        for p in 0..lb + lt {
            pairing[map_left(p)] = map_left(self.partner(p)) as u32;
        }
        for p in 0..rb + rt {
            pairing[map_right(p)] = map_right(right.partner(p)) as u32;
        }
        Diagram {
            bottom: nb,
            top: lt + rt,
            pairing,
        }
    }

    /// Reflects top to bottom.
    pub fn mirror(&self) -> Diagram {
        let (b, t) = (self.bottom, self.top);
        let map = |p: usize| if p < b { t + p } else { p - b };
        let mut pairing = vec![0u32; b + t];
        for p in 0..b + t {
            pairing[map(p)] = map(self.partner(p)) as u32;
        }
        Diagram {
            bottom: t,
            top: b,
            pairing,
        }
    }

    /// Number of loops formed when top point `i` is joined to bottom point `i`.
    pub fn closure_loops(&self) -> Result<usize> {
        if self.bottom != self.top {
            return Err(Error::BoundaryMismatch(format!(
                "closure needs equal counts, got {}/{}",
                self.bottom, self.top
            )));
        }
        let n = self.bottom;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut cur = s;
            loop {
                seen[cur] = true;
                let q = self.partner(cur);
                seen[q] = true;
                // hop across the closure arc
                let next = if q < n { q + n } else { q - n };
                if next == s {
                    break;
                }
                cur = next;
            }
        }
        Ok(loops)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}:", self.bottom, self.top)?;
        let pairs = self.pairs();
        for (k, (i, j)) in pairs.iter().enumerate() {
            write!(f, "{}{}-{}", if k == 0 { " " } else { ", " }, i, j)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Diagram {
    type Err = Error;

    /// Parses `n_bot/n_top: i-j, k-l, ...`.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = |position: usize, message: &str| Error::Syntax {
            position,
            message: message.to_string(),
        };
        let (head, body) = s.split_once(':').ok_or_else(|| syntax(0, "missing ':'"))?;
        let (b, t) = head.split_once('/').ok_or_else(|| syntax(0, "missing '/'"))?;
        let bottom: usize = b.trim().parse().map_err(|_| syntax(0, "bad bottom count"))?;
        let top: usize = t.trim().parse().map_err(|_| syntax(0, "bad top count"))?;
        let mut pairs = Vec::new();
        let offset = head.len() + 1;
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (i, j) = part.split_once('-').ok_or_else(|| syntax(offset, "pair must be i-j"))?;
            let i: usize = i.trim().parse().map_err(|_| syntax(offset, "bad index"))?;
            let j: usize = j.trim().parse().map_err(|_| syntax(offset, "bad index"))?;
            pairs.push((i, j));
        }
        Diagram::from_pairs(bottom, top, &pairs)
    }
}

/// Powers of the loop value, cached per call site.
struct LoopPowers(Vec<Scalar>);

impl LoopPowers {
    fn new() -> Self {
        LoopPowers(vec![Scalar::one()])
    }

    fn get(&mut self, k: usize) -> &Scalar {
        while self.0.len() <= k {
            let next = self.0.last().expect("nonempty") * Scalar::from_laurent(loop_poly());
            self.0.push(next);
        }
        &self.0[k]
    }
}

/// A formal linear combination of diagrams with [`Scalar`] coefficients.
///
/// Distinct pairings are linearly independent, so equality of sums is
/// coefficient-wise equality of the maps.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiagramSum {
    terms: BTreeMap<Diagram, Scalar>,
}

impl DiagramSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_diagram(d: Diagram) -> Self {
        Self::term(d, Scalar::one())
    }

    pub fn term(d: Diagram, c: Scalar) -> Self {
        let mut s = Self::zero();
        s.add_term(d, c);
        s
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(Diagram::identity(n))
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

    pub fn iter(&self) -> impl Iterator<Item = (&Diagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &Diagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, d: Diagram, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
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

    /// Boundary counts shared by all terms, or `None` for the zero sum.
    pub fn boundary(&self) -> Option<(usize, usize)> {
        self.terms.keys().next().map(|d| (d.bottom_count(), d.top_count()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiagramSum {
            terms: self.terms.iter().map(|(d, x)| (d.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &DiagramSum) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiagramSum) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Bilinear stacking: `upper` on top of `self`.
    pub fn compose(&self, upper: &DiagramSum) -> Result<DiagramSum> {
        let mut powers = LoopPowers::new();
        let mut grouped: BTreeMap<(Diagram, usize), Scalar> = BTreeMap::new();
        for (dl, cl) in &self.terms {
            for (du, cu) in &upper.terms {
                let (d, loops) = dl.compose(du)?;
                let c = cl * cu;
                let slot = grouped.entry((d, loops)).or_default();
                *slot += c;
            }
        }
        let mut out = DiagramSum::zero();
        for ((d, loops), c) in grouped {
            if c.is_zero() {
                continue;
            }
            let c = if loops == 0 { c } else { &c * powers.get(loops) };
            out.add_term(d, c);
        }
        Ok(out)
    }

    pub fn tensor(&self, right: &DiagramSum) -> DiagramSum {
        let mut out = DiagramSum::zero();
        for (dl, cl) in &self.terms {
            for (dr, cr) in &right.terms {
                out.add_term(dl.tensor(dr), cl * cr);
            }
        }
        out
    }

    pub fn mirror(&self) -> DiagramSum {
        DiagramSum {
            terms: self.terms.iter().map(|(d, c)| (d.mirror(), c.clone())).collect(),
        }
    }

    /// Markov closure: `sum coeff * d^loops`.
    pub fn close(&self) -> Result<Scalar> {
        let mut powers = LoopPowers::new();
        let mut by_loops: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (d, c) in &self.terms {
            *by_loops.entry(d.closure_loops()?).or_default() += c;
        }
        Ok(by_loops.into_iter().map(|(k, c)| &c * powers.get(k)).sum())
    }

    /// Trace pairing `close(mirror(self) . other)`; symmetric and bilinear.
    pub fn pairing(&self, other: &DiagramSum) -> Result<Scalar> {
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero());
        }
        self.mirror().compose(other)?.close()
    }
}

impl fmt::Debug for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "({c}) * [{d}]")?;
        }
        Ok(())
    }
}

impl From<Diagram> for DiagramSum {
    fn from(d: Diagram) -> Self {
        DiagramSum::from_diagram(d)
    }
}

/// `A * id + A^-1 * cupcap` for a positive crossing, mirrored for negative.
pub fn smooth_crossing(sign: CrossingSign) -> DiagramSum {
    let (id_exp, cc_exp) = match sign {
        CrossingSign::Positive => (1, -1),
        CrossingSign::Negative => (-1, 1),
    };
    let mut s = DiagramSum::term(Diagram::identity(2), Scalar::monomial(1, id_exp));
    s.add_term(Diagram::cupcap(), Scalar::monomial(1, cc_exp));
    s
}

/// Smoothed classical crossing of positions `i, i+1` (0-based) on `n` strands.
pub fn crossing_at(n: usize, i: usize, sign: CrossingSign) -> DiagramSum {
    let left = DiagramSum::identity(i);
    let right = DiagramSum::identity(n - i - 2);
    left.tensor(&smooth_crossing(sign)).tensor(&right)
}

pub fn virtual_transposition() -> Diagram {
    Diagram::transposition()
}

/// The two-strand Jones-Wenzl projector `id - (1/d) cupcap`.
pub fn projector2() -> DiagramSum {
    let inv_d = Scalar::from_laurent(loop_poly()).inv().expect("loop value is nonzero");
    let mut s = DiagramSum::identity(2);
    s.add_term(Diagram::cupcap(), -inv_d);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::constants;
    use num_rational::BigRational;
    use num_traits::One;

    fn cupcap() -> DiagramSum {
        Diagram::cupcap().into()
    }

    #[test]
    fn identity_composition() {
        let id = DiagramSum::identity(2);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn cupcap_squared_is_d_cupcap() {
        let d = constants().d;
        assert_eq!(cupcap().compose(&cupcap()).unwrap(), cupcap().scale(&d));
    }

    #[test]
    fn transposition_is_an_involution() {
        let t: DiagramSum = virtual_transposition().into();
        assert_eq!(t.compose(&t).unwrap(), DiagramSum::identity(2));
    }

    #[test]
    fn identity_tensor_identity() {
        let one = DiagramSum::identity(1);
        assert_eq!(one.tensor(&one), DiagramSum::identity(2));
    }

    #[test]
    fn cupcap_tensor_identity() {
        let got = cupcap().tensor(&DiagramSum::identity(1));
        let want = Diagram::from_pairs(3, 3, &[(0, 1), (3, 4), (2, 5)]).unwrap();
        assert_eq!(got, want.into());
    }

    #[test]
    fn reidemeister_two_on_smoothings() {
        let pos = smooth_crossing(CrossingSign::Positive);
        let neg = smooth_crossing(CrossingSign::Negative);
        assert_eq!(pos.compose(&neg).unwrap(), DiagramSum::identity(2));
        assert_eq!(neg.compose(&pos).unwrap(), DiagramSum::identity(2));
    }

    #[test]
    fn closure_of_positive_crossing() {
        let c = constants();
        let got = smooth_crossing(CrossingSign::Positive).close().unwrap();
        let want = &(&Scalar::a() * &(&c.d * &c.d)) + &(&Scalar::monomial(1, -1) * &c.d);
        assert_eq!(got, want);
        let (p, q) = got.eval_parts_rational(&BigRational::one()).unwrap();
        assert_eq!(p, BigRational::from_integer(2.into()));
        assert!(q == BigRational::from_integer(0.into()));
    }

    #[test]
    fn positive_crossing_at_one_has_unit_coefficients() {
        let s = smooth_crossing(CrossingSign::Positive);
        for (_, c) in s.iter() {
            let (p, _) = c.eval_parts_rational(&BigRational::one()).unwrap();
            assert!(p.is_one());
        }
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn closures_of_basic_elements() {
        let c = constants();
        assert_eq!(DiagramSum::identity(2).close().unwrap(), &c.d * &c.d);
        let t: DiagramSum = virtual_transposition().into();
        assert_eq!(t.close().unwrap(), c.d);
        assert_eq!(projector2().close().unwrap(), c.delta);
    }

    #[test]
    fn projector_is_idempotent_and_kills_turnbacks() {
        let p = projector2();
        assert_eq!(p.compose(&p).unwrap(), p);
        assert!(p.compose(&cupcap()).unwrap().is_zero());
        assert!(cupcap().compose(&p).unwrap().is_zero());
    }

    #[test]
    fn virtual_braid_relation_on_three_strands() {
        let v1: DiagramSum = Diagram::transposition_at(3, 0).into();
        let v2: DiagramSum = Diagram::transposition_at(3, 1).into();
        let lhs = v1.compose(&v2).unwrap().compose(&v1).unwrap();
        let rhs = v2.compose(&v1).unwrap().compose(&v2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_mismatch_is_reported() {
        let a = DiagramSum::identity(2);
        let b = DiagramSum::identity(3);
        assert!(matches!(a.compose(&b), Err(Error::BoundaryMismatch(_))));
        let cap = Diagram::from_pairs(0, 2, &[(0, 1)]).unwrap();
        assert!(matches!(DiagramSum::from(cap).close(), Err(Error::BoundaryMismatch(_))));
    }

    #[test]
    fn text_form_roundtrip() {
        let d = Diagram::from_pairs(3, 3, &[(0, 1), (3, 4), (2, 5)]).unwrap();
        assert_eq!(d.to_string(), "3/3: 0-1, 2-5, 3-4");
        assert_eq!(d.to_string().parse::<Diagram>().unwrap(), d);
    }

    #[test]
    fn planarity_detection() {
        assert!(Diagram::cupcap().is_planar());
        assert!(Diagram::identity(3).is_planar());
        assert!(!Diagram::transposition().is_planar());
    }
}
