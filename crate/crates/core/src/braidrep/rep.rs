use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, IntegralPoint, PointValue, Ring};
use crate::recoupling::channels::{accumulate, to_channels, vector_from_channels, ChannelTree, ChannelVector, World};
use crate::recoupling::engine::Engine;
use crate::scalars::{delta_poly, poly_lcm, LaurentPoly, Scalar};
use crate::trees::{classical_basis, extended_basis, gram_matrix, LabeledTree, ParticleLabel, RootSector, TreeVector};

use super::{BraidWord, Letter};

/// The action of a word on a left-comb tree space; column `j` is the image
/// of `basis[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub basis: Vec<LabeledTree>,
    pub entries: Vec<Vec<Scalar>>,
    /// False when some associativity move along the way was a projection.
    pub exact: bool,
}

impl RepMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries == linalg::identity(self.dim())
    }

    /// `self · other`, the action of `other` followed by `self`'s word
    /// stacked on top.
    pub fn mul(&self, other: &RepMatrix) -> Result<RepMatrix> {
        if self.basis != other.basis {
            return Err(Error::ShapeMismatch("matrices act on different bases".into()));
        }
        Ok(RepMatrix {
            basis: self.basis.clone(),
            entries: linalg::mat_mul(&self.entries, &other.entries),
            exact: self.exact && other.exact,
        })
    }

    /// First basis element whose image differs between the two matrices.
    pub fn first_difference(&self, other: &RepMatrix) -> Option<&LabeledTree> {
        (0..self.dim())
            .find(|&j| (0..self.dim()).any(|i| self.entries[i][j] != other.entries[i][j]))
            .map(|j| &self.basis[j])
    }

    pub fn eval(&self, a: Complex64) -> Result<Vec<Vec<Complex64>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.eval(a)).collect())
            .collect()
    }

    /// Basis first, then the rows.
    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "rows": self.entries.iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "exact": self.exact,
        })
    }
}

fn column(v: &TreeVector, basis: &[LabeledTree]) -> Result<Vec<Scalar>> {
    if let Some((t, _)) = v.iter().find(|(t, _)| !basis.contains(t)) {
        return Err(Error::BasisDeficiency(format!("{t} is outside the basis")));
    }
    Ok(basis.iter().map(|t| v.coefficient(t)).collect())
}

fn add_to<F: Ring>(map: &mut BTreeMap<ChannelTree, F>, key: ChannelTree, x: F) {
    use std::collections::btree_map::Entry;
    if x.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(x);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&x);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// A matrix on the channel left combs of one sector, stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMatrix<F = Scalar> {
    keys: Rc<Vec<ChannelTree>>,
    columns: Vec<BTreeMap<ChannelTree, F>>,
    pub exact: bool,
}

impl<F: Ring + PartialEq> ChannelMatrix<F> {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[ChannelTree] {
        &self.keys
    }

    pub fn column(&self, j: usize) -> &BTreeMap<ChannelTree, F> {
        &self.columns[j]
    }

    pub fn is_identity(&self) -> bool {
        self.columns
            .iter()
            .zip(self.keys.iter())
            .all(|(c, k)| c.len() == 1 && c.get(k).is_some_and(|x| x.sub(&x.one_like()).is_zero()))
    }

    /// The image of a combination of channel left combs.
    pub fn apply(&self, v: &BTreeMap<ChannelTree, F>) -> Result<BTreeMap<ChannelTree, F>> {
        let mut out = BTreeMap::new();
        for (t, c) in v {
            let j = self
                .keys
                .binary_search(t)
                .map_err(|_| Error::BasisDeficiency(format!("{t} is outside the sector")))?;
            for (u, x) in &self.columns[j] {
                add_to(&mut out, u.clone(), c.mul(x));
            }
        }
        Ok(out)
    }

    /// `self · other`: `other` acts first.
    pub fn mul(&self, other: &ChannelMatrix<F>) -> Result<ChannelMatrix<F>> {
        if self.keys != other.keys {
            return Err(Error::ShapeMismatch("matrices act on different sectors".into()));
        }
        Ok(ChannelMatrix {
            keys: self.keys.clone(),
            columns: other.columns.iter().map(|c| self.apply(c)).collect::<Result<_>>()?,
            exact: self.exact && other.exact,
        })
    }
}

impl ChannelMatrix {
    /// The matrix specialized at `A = a`.
    pub fn at(&self, a: &BigRational) -> Result<ChannelMatrix<PointValue>> {
        Ok(ChannelMatrix {
            keys: self.keys.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(t, x)| Ok((t.clone(), linalg::point_value(x, a)?)))
                        .collect()
                })
                .collect::<Result<_>>()?,
            exact: self.exact,
        })
    }
}

/// The action of braid words on the left combs of one root sector.
///
/// Letters act on the orthogonal channel left combs, where their images are
/// sparse; single-letter images are cached and words are applied one letter
/// at a time, so a word's matrix is the product of its letters' matrices.
pub struct SectorAction {
    strands: usize,
    basis: Vec<LabeledTree>,
    keys: Rc<Vec<ChannelTree>>,
    engine: Engine,
    images: HashMap<(Letter, usize), (Rc<ChannelVector>, bool)>,
    letters: HashMap<Letter, Rc<ChannelMatrix>>,
    bounds: HashMap<Letter, Rc<DegreeBound>>,
}

/// A common denominator of a matrix's entries and the range of exponents of
/// the numerators over it, rational and `√Δ` parts alike.
#[derive(Clone, Debug)]
struct DegreeBound {
    den: LaurentPoly,
    low: i64,
    high: i64,
}

impl DegreeBound {
    fn of(m: &ChannelMatrix) -> DegreeBound {
        let parts: Vec<_> = m
            .columns
            .iter()
            .flat_map(|c| c.values())
            .flat_map(|x| [x.rational_part(), x.root_part()])
            .filter(|p| !p.is_zero())
            .collect();
        let den = parts.iter().fold(LaurentPoly::one(), |d, p| poly_lcm(&d, p.den()));
        let (mut low, mut high) = (0, 0);
        for p in parts {
            low = low.min(p.num().low());
            high = high.max(p.num().high() + den.high() - p.den().high());
        }
        DegreeBound { den, low, high }
    }

    /// A bound for the product of matrices with bounds `factors`.
    fn product(factors: &[Rc<DegreeBound>]) -> DegreeBound {
        let delta = delta_poly();
        let mut out = DegreeBound {
            den: LaurentPoly::one(),
            low: 0,
            high: 0,
        };
        for (i, f) in factors.iter().enumerate() {
            out.den = &out.den * &f.den;
            out.low += f.low;
            out.high += f.high;
            if i > 0 {
                out.low += delta.low().min(0);
                out.high += delta.high().max(0);
            }
        }
        out
    }
}

impl ChannelMatrix<PointValue> {
    /// `(s, N)` with `self = N / s` and `N` over `Z[√r]`.
    fn integral(&self) -> (BigInt, ChannelMatrix<IntegralPoint>) {
        let s = self
            .columns
            .iter()
            .flat_map(|c| c.values())
            .fold(BigInt::one(), |s, x| s.lcm(&x.denominator()));
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(k, x)| (k.clone(), x.scaled(&s))).collect())
            .collect();
        let m = ChannelMatrix {
            keys: self.keys.clone(),
            columns,
            exact: self.exact,
        };
        (s, m)
    }
}

/// Whether `x / sx = y / sy`.
fn same_up_to_scale(
    x: &ChannelMatrix<IntegralPoint>,
    sx: &BigInt,
    y: &ChannelMatrix<IntegralPoint>,
    sy: &BigInt,
) -> bool {
    x.columns.iter().zip(&y.columns).all(|(cx, cy)| {
        cx.len() == cy.len()
            && cx
                .iter()
                .all(|(k, u)| cy.get(k).is_some_and(|v| u.scale(sy) == v.scale(sx)))
    })
}

/// Nonzero rationals of small height: `7/5`, then `±p/q` by increasing
/// `max(p, q)`.
fn sample_points() -> impl Iterator<Item = BigRational> {
    let first = linalg::sample_point();
    let rest = (1i64..).flat_map(|m| {
        (1..=m)
            .filter(move |&q| m.gcd(&q) == 1)
            .flat_map(move |q| {
                let mut v = vec![(m, q)];
                if q != m {
                    v.push((q, m));
                }
                v
            })
            .flat_map(|(p, q)| {
                [
                    BigRational::new(p.into(), q.into()),
                    BigRational::new((-p).into(), q.into()),
                ]
            })
    });
    std::iter::once(first.clone()).chain(rest.filter(move |a| *a != first))
}

impl SectorAction {
    /// The extended left combs with root in `sector`.
    pub fn extended(strands: usize, sector: RootSector) -> Result<Self> {
        SectorAction::new(strands, extended_basis(strands, sector), World::Extended)
    }

    /// The classical left combs with root `root`.
    pub fn classical(strands: usize, root: ParticleLabel) -> Result<Self> {
        if root == ParticleLabel::PTilde {
            return Err(Error::InadmissibleTree("classical trees have no ~P root".into()));
        }
        SectorAction::new(strands, classical_basis(strands, root), World::Classical)
    }

    fn new(strands: usize, basis: Vec<LabeledTree>, world: World) -> Result<Self> {
        let keys = check_independent(&basis, world)?;
        Ok(SectorAction {
            strands,
            basis,
            keys: Rc::new(keys),
            engine: Engine::new(world),
            images: HashMap::new(),
            letters: HashMap::new(),
            bounds: HashMap::new(),
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn world(&self) -> World {
        self.engine.world()
    }

    pub fn basis(&self) -> &[LabeledTree] {
        &self.basis
    }

    pub fn keys(&self) -> &[ChannelTree] {
        &self.keys
    }

    fn image(&mut self, letter: Letter, j: usize) -> Result<(Rc<ChannelVector>, bool)> {
        if let Some(hit) = self.images.get(&(letter, j)) {
            return Ok(hit.clone());
        }
        let before = self.engine.stats().inexact_f_moves;
        let unit = ChannelVector::from([(self.keys[j].clone(), Scalar::one())]);
        let word = BraidWord::new(self.strands, vec![letter])?;
        let out = Rc::new(self.engine.act(&unit, &word)?);
        let exact = self.engine.stats().inexact_f_moves == before;
        self.images.insert((letter, j), (out.clone(), exact));
        Ok((out, exact))
    }

    fn letter_matrix(&mut self, letter: Letter) -> Result<Rc<ChannelMatrix>> {
        if let Some(m) = self.letters.get(&letter) {
            return Ok(m.clone());
        }
        let mut columns = Vec::with_capacity(self.keys.len());
        let mut exact = true;
        for j in 0..self.keys.len() {
            let (img, ex) = self.image(letter, j)?;
            columns.push((*img).clone());
            exact &= ex;
        }
        let m = Rc::new(ChannelMatrix {
            keys: self.keys.clone(),
            columns,
            exact,
        });
        self.letters.insert(letter, m.clone());
        Ok(m)
    }

    fn letter_bound(&mut self, letter: Letter) -> Result<Rc<DegreeBound>> {
        if let Some(b) = self.bounds.get(&letter) {
            return Ok(b.clone());
        }
        let b = Rc::new(DegreeBound::of(&*self.letter_matrix(letter)?));
        self.bounds.insert(letter, b.clone());
        Ok(b)
    }

    fn identity(&self) -> ChannelMatrix {
        ChannelMatrix {
            keys: self.keys.clone(),
            columns: self
                .keys
                .iter()
                .map(|k| ChannelVector::from([(k.clone(), Scalar::one())]))
                .collect(),
            exact: true,
        }
    }

    /// Stacks `word` above `v`, one letter at a time from the bottom.
    pub fn apply(&mut self, word: &BraidWord, v: &ChannelVector) -> Result<(ChannelVector, bool)> {
        self.check_strands(word)?;
        let mut state = v.clone();
        let mut exact = true;
        for &letter in word.letters().iter().rev() {
            let mut next = ChannelVector::new();
            for (t, c) in &state {
                let j = self
                    .keys
                    .binary_search(t)
                    .map_err(|_| Error::BasisDeficiency(format!("{t} is outside the sector")))?;
                let (img, ex) = self.image(letter, j)?;
                exact &= ex;
                for (u, x) in img.iter() {
                    accumulate(&mut next, u.clone(), c * x);
                }
            }
            state = next;
        }
        Ok((state, exact))
    }

    /// The matrix of `word` on the channel left combs.
    pub fn channel_matrix(&mut self, word: &BraidWord) -> Result<ChannelMatrix> {
        self.check_strands(word)?;
        self.letters_matrix(word.letters())
    }

    /// The product of the letter matrices, without free reduction.
    pub fn letters_matrix(&mut self, letters: &[Letter]) -> Result<ChannelMatrix> {
        let mut out = self.identity();
        for &letter in letters.iter().rev() {
            out = self.letter_matrix(letter)?.mul(&out)?;
        }
        Ok(out)
    }

    /// The matrix of `word` in the basis of labeled left combs.
    pub fn rep_matrix(&mut self, word: &BraidWord) -> Result<RepMatrix> {
        let world = self.world();
        let mut columns = Vec::with_capacity(self.basis.len());
        let mut exact = true;
        for t in self.basis.clone() {
            let (out, ex) = self.apply(word, &to_channels(&t, world)?)?;
            exact &= ex;
            columns.push(column(&vector_from_channels(&out), &self.basis)?);
        }
        let n = self.basis.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
            .collect();
        Ok(RepMatrix {
            basis: self.basis.clone(),
            entries,
            exact,
        })
    }

    /// The matrix of `word` at `A = a`, from the specialized letter matrices.
    pub fn point_matrix(&mut self, word: &BraidWord, a: &BigRational) -> Result<ChannelMatrix<PointValue>> {
        self.check_strands(word)?;
        self.point_letters_matrix(word.letters(), a)
    }

    pub fn point_letters_matrix(&mut self, letters: &[Letter], a: &BigRational) -> Result<ChannelMatrix<PointValue>> {
        let mut at_point: HashMap<Letter, ChannelMatrix<PointValue>> = HashMap::new();
        let mut out = self.identity().at(a)?;
        for &letter in letters.iter().rev() {
            if let Entry::Vacant(slot) = at_point.entry(letter) {
                slot.insert(self.letter_matrix(letter)?.at(a)?);
            }
            out = at_point[&letter].mul(&out)?;
        }
        Ok(out)
    }

    /// `(s, N)` with `N / s` the product of the letter matrices at `A = a`.
    fn integral_letters_matrix(
        &mut self,
        letters: &[Letter],
        a: &BigRational,
    ) -> Result<(BigInt, ChannelMatrix<IntegralPoint>)> {
        let mut at_point: HashMap<Letter, (BigInt, ChannelMatrix<IntegralPoint>)> = HashMap::new();
        let (mut scale, mut out) = self.identity().at(a)?.integral();
        for &letter in letters.iter().rev() {
            if let Entry::Vacant(slot) = at_point.entry(letter) {
                slot.insert(self.letter_matrix(letter)?.at(a)?.integral());
            }
            let (s, m) = &at_point[&letter];
            out = m.mul(&out)?;
            scale *= s;
        }
        Ok((scale, out))
    }

    /// First basis tree on which the two letter sequences act differently,
    /// decided exactly from specializations at rational points.
    ///
    /// Over the product `D` of the letters' common denominators, the entries
    /// of either product are `(P + Q√Δ)/D` with the exponents of `P` and `Q`
    /// in a range known from the letters. The difference of the two sides
    /// is zero once its numerators vanish at more nonzero points than that
    /// range is wide.
    pub fn letters_difference(&mut self, lhs: &[Letter], rhs: &[Letter]) -> Result<Option<LabeledTree>> {
        if lhs == rhs {
            return Ok(None);
        }
        let bound = |action: &mut Self, letters: &[Letter]| -> Result<DegreeBound> {
            let factors = letters
                .iter()
                .map(|&l| action.letter_bound(l))
                .collect::<Result<Vec<_>>>()?;
            Ok(DegreeBound::product(&factors))
        };
        let (l, r) = (bound(self, lhs)?, bound(self, rhs)?);
        let low = l.low.min(r.low);
        let high = (l.high + r.den.high()).max(r.high + l.den.high());
        let needed = (high - low + 1) as usize;

        let world = self.world();
        let mut agreeing = 0;
        for a in sample_points() {
            if l.den.eval_rational(&a).is_zero() || r.den.eval_rational(&a).is_zero() {
                continue;
            }
            let (sx, x) = self.integral_letters_matrix(lhs, &a)?;
            let (sy, y) = self.integral_letters_matrix(rhs, &a)?;
            if !same_up_to_scale(&x, &sx, &y, &sy) {
                let (x, y) = (self.point_letters_matrix(lhs, &a)?, self.point_letters_matrix(rhs, &a)?);
                let expand = |t: &LabeledTree| -> Result<BTreeMap<ChannelTree, PointValue>> {
                    to_channels(t, world)?
                        .iter()
                        .map(|(u, c)| Ok((u.clone(), linalg::point_value(c, &a)?)))
                        .collect()
                };
                return self.first_difference(&x, &y, expand);
            }
            agreeing += 1;
            if agreeing == needed {
                return Ok(None);
            }
        }
        unreachable!("the sample points are infinite")
    }

    /// First labeled basis tree on which the two channel matrices differ;
    /// `expand` writes a labeled tree in the channel basis.
    pub fn first_difference<F: Ring + PartialEq>(
        &self,
        x: &ChannelMatrix<F>,
        y: &ChannelMatrix<F>,
        expand: impl Fn(&LabeledTree) -> Result<BTreeMap<ChannelTree, F>>,
    ) -> Result<Option<LabeledTree>> {
        if x.columns == y.columns {
            return Ok(None);
        }
        for t in &self.basis {
            let v = expand(t)?;
            if x.apply(&v)? != y.apply(&v)? {
                return Ok(Some(t.clone()));
            }
        }
        unreachable!("the channel expansion of the basis is invertible")
    }

    /// [`Self::first_difference`] for symbolic matrices.
    pub fn first_symbolic_difference(&self, x: &ChannelMatrix, y: &ChannelMatrix) -> Result<Option<LabeledTree>> {
        let world = self.world();
        self.first_difference(x, y, |t| to_channels(t, world))
    }

    fn check_strands(&self, word: &BraidWord) -> Result<()> {
        if word.strands() != self.strands {
            return Err(Error::ShapeMismatch(format!(
                "{}-strand word on {} leaves",
                word.strands(),
                self.strands
            )));
        }
        Ok(())
    }
}

/// Checks that the basis is independent and returns the channel left combs
/// it spans. Channel trees are mutually orthogonal, so it suffices that the
/// channel expansion inverts and the counts agree.
fn check_independent(basis: &[LabeledTree], world: World) -> Result<Vec<ChannelTree>> {
    let mut keys = Vec::new();
    for t in basis {
        let v = to_channels(t, world)?;
        if vector_from_channels(&v) != TreeVector::basis(t.clone()) {
            return Err(Error::BasisDeficiency(format!(
                "{t} is not recovered from its channels"
            )));
        }
        keys.extend(v.into_keys());
    }
    keys.sort();
    keys.dedup();
    if keys.len() != basis.len() {
        return Err(Error::BasisDeficiency(format!(
            "{} trees span {} channel trees",
            basis.len(),
            keys.len()
        )));
    }
    Ok(keys)
}

/// The matrix of `w` on the left combs with `P`/`~P` leaves and root in the
/// sector of `root`.
pub fn rep_matrix(w: &BraidWord, leaves: usize, root: ParticleLabel) -> Result<RepMatrix> {
    if leaves != w.strands() {
        return Err(Error::ShapeMismatch(format!(
            "{leaves} leaves for a {}-strand word",
            w.strands()
        )));
    }
    SectorAction::extended(leaves, RootSector::of(root))?.rep_matrix(w)
}

/// The matrix of a classical word on the classical left combs with the given
/// root label.
pub fn classical_rep_matrix(w: &BraidWord, leaves: usize, root: ParticleLabel) -> Result<RepMatrix> {
    if leaves != w.strands() {
        return Err(Error::ShapeMismatch(format!(
            "{leaves} leaves for a {}-strand word",
            w.strands()
        )));
    }
    if !w.is_classical() {
        return Err(Error::NotClassicalCrossing);
    }
    SectorAction::classical(leaves, root)?.rep_matrix(w)
}

/// Rescales a classical matrix to the basis normalized by the trees' self
/// pairings, evaluated at `a`. The classical left combs are mutually
/// orthogonal, so the normalization is diagonal.
pub fn normalized_numeric(m: &RepMatrix, a: Complex64) -> Result<Vec<Vec<Complex64>>> {
    let gram = gram_matrix(&m.basis)?;
    let norms = (0..m.dim())
        .map(|i| gram[i][i].eval(a).map(|g| g.sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let raw = m.eval(a)?;
    Ok((0..m.dim())
        .map(|i| (0..m.dim()).map(|j| raw[i][j] * norms[i] / norms[j]).collect())
        .collect())
}

/// `max |(M* M - I)_ij|`.
pub fn unitarity_residual(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = (0..n).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

/// The Fibonacci value `A = exp(3πi/5)`.
pub fn fibonacci_a() -> Complex64 {
    Complex64::from_polar(1.0, 3.0 * std::f64::consts::PI / 5.0)
}

/// One defining relation of the virtual braid group, checked on one sector.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: String,
    pub sector: RootSector,
    pub holds: bool,
    /// False when some associativity move behind either side was a
    /// projection.
    pub exact: bool,
    /// A basis tree on which the two sides act differently.
    pub witness: Option<LabeledTree>,
}

impl RelationCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "relation": self.relation,
            "sector": format!("{:?}", self.sector).to_lowercase(),
            "holds": self.holds,
            "exact": self.exact,
            "witness": self.witness.as_ref().map(|t| t.to_string()),
        })
    }
}

fn show(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// The defining relations of `VB_n` as pairs of unreduced letter sequences.
fn relations(n: usize) -> Vec<(String, Vec<Letter>, Vec<Letter>)> {
    use Letter as L;
    let mut out = Vec::new();
    let mut eq = |lhs: Vec<Letter>, rhs: Vec<Letter>| {
        let name = if rhs.is_empty() {
            format!("{} = 1", show(&lhs))
        } else {
            format!("{} = {}", show(&lhs), show(&rhs))
        };
        out.push((name, lhs, rhs));
    };
    for i in 1..n.saturating_sub(1) {
        let (s, t) = (L::sigma(i), L::sigma(i + 1));
        let (u, w) = (L::virt(i), L::virt(i + 1));
        eq(vec![s, t, s], vec![t, s, t]);
        eq(vec![u, w, u], vec![w, u, w]);
        eq(vec![w, u, t], vec![s, w, u]);
    }
    for i in 1..n {
        for j in i + 2..n {
            eq(vec![L::sigma(i), L::sigma(j)], vec![L::sigma(j), L::sigma(i)]);
            eq(vec![L::virt(i), L::virt(j)], vec![L::virt(j), L::virt(i)]);
            eq(vec![L::sigma(i), L::virt(j)], vec![L::virt(j), L::sigma(i)]);
            eq(vec![L::virt(i), L::sigma(j)], vec![L::sigma(j), L::virt(i)]);
        }
    }
    for i in 1..n {
        eq(vec![L::virt(i), L::virt(i)], vec![]);
        eq(vec![L::sigma(i), L::sigma_inv(i)], vec![]);
    }
    out
}

/// Checks every defining relation of `VB_n` on both root sectors.
pub fn check_relations(n: usize) -> Result<Vec<RelationCheck>> {
    if !(2..=5).contains(&n) {
        return Err(Error::IndexOutOfRange { index: n, strands: 5 });
    }
    let mut out = Vec::new();
    for sector in [RootSector::Cable, RootSector::Vacuum] {
        let mut action = SectorAction::extended(n, sector)?;
        for (name, lhs, rhs) in relations(n) {
            let witness = action.letters_difference(&lhs, &rhs)?;
            let mut exact = true;
            for &l in lhs.iter().chain(&rhs) {
                exact &= action.letter_matrix(l)?.exact;
            }
            out.push(RelationCheck {
                relation: name,
                sector,
                holds: witness.is_none(),
                exact,
                witness,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let m = rep_matrix(&word("n=3;"), 3, ParticleLabel::P).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn virtual_generator_is_an_involution() {
        for root in [ParticleLabel::P, ParticleLabel::Star] {
            let m = rep_matrix(&word("n=2; v1"), 2, root).unwrap();
            assert!(m.mul(&m).unwrap().is_identity());
        }
    }

    #[test]
    fn two_strand_sigma_is_diagonal() {
        let m = classical_rep_matrix(&word("n=2; s1"), 2, ParticleLabel::P).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.entries[0][0], -Scalar::monomial(1, -4));
    }

    #[test]
    fn three_strand_basis_sizes() {
        assert_eq!(rep_matrix(&word("n=3;"), 3, ParticleLabel::P).unwrap().dim(), 36);
        assert_eq!(rep_matrix(&word("n=3;"), 3, ParticleLabel::Star).unwrap().dim(), 8);
    }

    #[test]
    fn classical_generators_are_unitary_at_the_fibonacci_value() {
        for w in ["n=3; s1", "n=3; s2", "n=3; s2^-1"] {
            let m = classical_rep_matrix(&word(w), 3, ParticleLabel::P).unwrap();
            let num = normalized_numeric(&m, fibonacci_a()).unwrap();
            assert!(unitarity_residual(&num) < 1e-10, "{w}: {}", unitarity_residual(&num));
        }
    }
}
