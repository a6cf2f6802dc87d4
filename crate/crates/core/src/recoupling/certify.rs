//! Oracle certificates for every registered rule.

use serde_json::{json, Value};

use crate::diagrams::{CrossingSign, DiagramSum};
use crate::error::Result;
use crate::scalars::{constants, Scalar};
use crate::trees::{expand_unchecked, junction_vanishes, LabeledTree, ParticleLabel, TreeVector};

use super::channels::expand;
use super::moves::{
    bubble_value, crossed_cherry, expand_vector, f_move, lemma1_rule, lemma2_rule, lemma3_rule, r_move, swap_move,
    turnback, Direction, FMode, Projection,
};
use super::rulebook::{Crossing, RuleBook};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    PaperStated,
    OracleDerived,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::PaperStated => "paper-stated",
            Provenance::OracleDerived => "oracle-derived",
        }
    }
}

/// Outcome of checking one rule on all of its local labelings.
#[derive(Clone, Debug)]
pub struct RuleCertificate {
    pub name: &'static str,
    pub provenance: Provenance,
    pub cases: usize,
    pub passed: usize,
    /// Labelings where the two sides differ, in enumeration order.
    pub failures: Vec<String>,
    /// Derived values worth recording, as `(label, value)`.
    pub values: Vec<(String, String)>,
}

impl RuleCertificate {
    fn new(name: &'static str, provenance: Provenance) -> Self {
        RuleCertificate {
            name,
            provenance,
            cases: 0,
            passed: 0,
            failures: Vec::new(),
            values: Vec::new(),
        }
    }

    fn record(&mut self, case: impl FnOnce() -> String, ok: bool) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(case());
        }
    }

    pub fn certified(&self) -> bool {
        self.cases > 0 && self.passed == self.cases
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "provenance": self.provenance.name(),
            "cases": self.cases,
            "passed": self.passed,
            "certified": self.certified(),
            "failures": self.failures,
            "values": self.values.iter().map(|(k, v)| json!({"case": k, "value": v})).collect::<Vec<_>>(),
        })
    }
}

fn cherries() -> Vec<LabeledTree> {
    let mut out = Vec::new();
    for a in ParticleLabel::ALL {
        for b in ParticleLabel::ALL {
            for v in ParticleLabel::ALL {
                if !junction_vanishes(a, b, v) {
                    out.push(LabeledTree::node(LabeledTree::Leaf(a), LabeledTree::Leaf(b), v));
                }
            }
        }
    }
    out
}

fn three_leaf_fragments(right_comb: bool, leaves: &[ParticleLabel], inner: &[ParticleLabel]) -> Vec<LabeledTree> {
    let mut out = Vec::new();
    for &a in leaves {
        for &b in leaves {
            for &c in leaves {
                for &x in inner {
                    for &y in inner {
                        let (l, r) = (LabeledTree::Leaf(a), LabeledTree::Leaf(b));
                        let t = if right_comb {
                            LabeledTree::node(l, LabeledTree::node(r, LabeledTree::Leaf(c), x), y)
                        } else {
                            LabeledTree::node(LabeledTree::node(l, r, x), LabeledTree::Leaf(c), y)
                        };
                        if !t.vanishes() && t.is_twist_normal() {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out
}

fn sound(lhs: &DiagramSum, rhs: &TreeVector) -> bool {
    expand_vector(rhs).is_ok_and(|e| e == *lhs)
}

fn published_f() -> RuleCertificate {
    use ParticleLabel::{Star, P};
    let mut cert = RuleCertificate::new("F (published matrix)", Provenance::PaperStated);
    for (right_comb, direction) in [(true, Direction::Forward), (false, Direction::Backward)] {
        for t in three_leaf_fragments(right_comb, &[P], &[P, Star]) {
            let rhs = f_move(&TreeVector::basis(t.clone()), &[], direction, FMode::Paper);
            let ok = rhs.is_ok_and(|r| sound(&expand_unchecked(&t), &r));
            cert.record(|| t.to_string(), ok);
        }
    }
    cert
}

fn oracle_f() -> RuleCertificate {
    let mut cert = RuleCertificate::new("F (oracle projection)", Provenance::OracleDerived);
    let mut entries: Vec<_> = RuleBook::standard().f_entries().collect();
    entries.sort_by_key(|(k, _)| **k);
    for (key, entry) in entries {
        let source = key.source();
        let lhs = expand(&source).to_diagram_sum();
        let rhs = entry.terms.iter().fold(DiagramSum::zero(), |acc, (x, c)| {
            acc.add(&expand(&key.target(*x)).to_diagram_sum().scale(c))
        });
        let ok = lhs == rhs;
        debug_assert_eq!(ok, entry.exact, "{source}");
        cert.record(|| format!("{source} ({:?})", key.rotation), ok);
    }
    cert
}

fn crossing_rules(name: &'static str, crossings: &[Crossing], keep: fn(&LabeledTree) -> bool) -> RuleCertificate {
    let mut cert = RuleCertificate::new(name, Provenance::OracleDerived);
    for t in cherries().into_iter().filter(keep) {
        let LabeledTree::Node(l, r, v) = &t else { unreachable!() };
        let (a, b) = (l.label(), r.label());
        for &crossing in crossings {
            let v_in = TreeVector::basis(t.clone());
            let moved = match crossing {
                Crossing::Positive => r_move(&v_in, &[], CrossingSign::Positive),
                Crossing::Negative => r_move(&v_in, &[], CrossingSign::Negative),
                Crossing::Virtual => swap_move(&v_in, &[]),
            };
            let lhs = crossed_cherry(a, b, *v, crossing);
            let ok = moved.is_ok_and(|m| sound(&lhs, &m));
            cert.record(|| format!("{t} {crossing:?}"), ok);
        }
    }
    cert
}

fn r_values(cert: &mut RuleCertificate) {
    for root in [ParticleLabel::Star, ParticleLabel::P] {
        let t: LabeledTree = format!("(L:P L:P):{root}").parse().expect("valid tree");
        if let Ok(m) = r_move(&TreeVector::basis(t.clone()), &[], CrossingSign::Positive) {
            cert.values.push((format!("R+ on {t}"), m.coefficient(&t).to_string()));
        }
    }
}

fn swap_involution() -> RuleCertificate {
    let mut cert = RuleCertificate::new("swap involution", Provenance::PaperStated);
    for t in cherries()
        .into_iter()
        .chain(three_leaf_fragments(false, &ParticleLabel::ALL, &ParticleLabel::ALL))
    {
        let v = TreeVector::basis(t.clone());
        let ok = swap_move(&v, &[])
            .and_then(|once| swap_move(&once, &[]))
            .is_ok_and(|twice| twice == v.normalized());
        cert.record(|| t.to_string(), ok);
    }
    cert
}

fn bubbles() -> RuleCertificate {
    use ParticleLabel::P;
    let k = constants();
    let mut cert = RuleCertificate::new("bubble", Provenance::OracleDerived);
    let classical = bubble_value(P, P, P, None);
    let expected = k.theta.checked_div(&k.delta).expect("Δ is nonzero");
    cert.record(
        || "(P P -> P) equals Θ/Δ".into(),
        classical.as_ref().is_ok_and(|v| *v == expected),
    );
    for t in cherries() {
        let LabeledTree::Node(l, r, e) = &t else { unreachable!() };
        for decoration in [None, Some(Crossing::Virtual)] {
            let value = bubble_value(l.label(), r.label(), *e, decoration);
            let name = match decoration {
                None => t.to_string(),
                Some(_) => format!("{t} with virtual crossing"),
            };
            if let Ok(v) = &value {
                cert.values.push((name.clone(), v.to_string()));
            }
            cert.record(|| name, value.is_ok());
        }
    }
    cert
}

fn turnbacks() -> RuleCertificate {
    let mut cert = RuleCertificate::new("turnback", Provenance::PaperStated);
    for label in [ParticleLabel::P, ParticleLabel::PTilde] {
        cert.record(|| label.to_string(), turnback(label).is_ok_and(|d| d.is_zero()));
    }
    cert
}

/// How the oracle's left association of the lemma 1 fragment compares with
/// the published four-term sum.
#[derive(Clone, Debug)]
pub struct Lemma1Report {
    pub fragment: LabeledTree,
    pub projection: Projection,
    /// For each of `c1..c4`, whether some output coefficient equals it.
    pub found: [bool; 4],
}

impl Lemma1Report {
    pub fn matches(&self) -> bool {
        self.projection.exact && self.projection.vector.len() == 4 && self.found.iter().all(|&f| f)
    }
}

pub fn lemma1_report(root: ParticleLabel) -> Result<Lemma1Report> {
    let fragment: LabeledTree = format!("(L:P (L:P L:P):~P):{root}").parse()?;
    let projection = lemma1_rule(&fragment)?;
    let k = constants();
    let coeffs: Vec<&Scalar> = projection.vector.iter().map(|(_, c)| c).collect();
    let found = [&k.c1, &k.c2, &k.c3, &k.c4].map(|c| coeffs.contains(&c));
    Ok(Lemma1Report {
        fragment,
        projection,
        found,
    })
}

fn lemma1() -> RuleCertificate {
    let mut cert = RuleCertificate::new("lemma 1 (published coefficients)", Provenance::PaperStated);
    for root in [ParticleLabel::P, ParticleLabel::Star, ParticleLabel::PTilde] {
        let Ok(report) = lemma1_report(root) else { continue };
        cert.values.push((
            format!("{} exact / terms", report.fragment),
            format!("{} / {}", report.projection.exact, report.projection.vector.len()),
        ));
        cert.record(|| report.fragment.to_string(), report.matches());
    }
    cert
}

fn lemma2() -> RuleCertificate {
    let mut cert = RuleCertificate::new("lemma 2 (virtual over classical)", Provenance::OracleDerived);
    for root in [ParticleLabel::P, ParticleLabel::Star] {
        for sign in [CrossingSign::Positive, CrossingSign::Negative] {
            let p = lemma2_rule(root, sign);
            let case = format!("(L:P L:P):{root} {sign:?}");
            if let Ok(p) = &p {
                cert.values.push((case.clone(), format!("{} terms", p.vector.len())));
            }
            cert.record(|| case, p.is_ok_and(|p| p.exact));
        }
    }
    cert
}

fn lemma3() -> RuleCertificate {
    let mut cert = RuleCertificate::new(
        "lemma 3 (~P branch under a classical crossing)",
        Provenance::OracleDerived,
    );
    for t in cherries() {
        let leaves = t.leaf_labels();
        if !leaves.contains(&ParticleLabel::PTilde) || leaves.contains(&ParticleLabel::Star) || !t.is_twist_normal() {
            continue;
        }
        for sign in [CrossingSign::Positive, CrossingSign::Negative] {
            let p = lemma3_rule(&t, sign);
            cert.record(|| format!("{t} {sign:?}"), p.is_ok_and(|p| p.exact));
        }
    }
    cert
}

fn f_round_trip() -> RuleCertificate {
    use ParticleLabel::{Star, P};
    let mut cert = RuleCertificate::new("F forward then backward", Provenance::PaperStated);
    let k = constants();
    let factor = (&k.delta + &Scalar::one()) * (&k.a * &k.a);
    for t in three_leaf_fragments(true, &[P], &[P, Star]) {
        if t.leaf_labels() != [P; 3] || t.label() != P {
            continue;
        }
        let v = TreeVector::basis(t.clone());
        let ok = f_move(&v, &[], Direction::Forward, FMode::Paper)
            .and_then(|w| f_move(&w, &[], Direction::Backward, FMode::Paper))
            .is_ok_and(|w| w == v.scale(&factor));
        cert.record(|| t.to_string(), ok);
    }
    cert
}

const SIGNS: [Crossing; 2] = [Crossing::Positive, Crossing::Negative];

/// Certifies every rule; independent rules run on separate threads.
pub fn certify_all() -> Vec<RuleCertificate> {
    let jobs: Vec<fn() -> RuleCertificate> = vec![
        published_f,
        f_round_trip,
        oracle_f,
        || {
            let mut c = crossing_rules("R (classical labels)", &SIGNS, LabeledTree::is_classical);
            r_values(&mut c);
            c
        },
        || crossing_rules("R (extended labels)", &SIGNS, |t| !t.is_classical()),
        || crossing_rules("swap", &[Crossing::Virtual], |_| true),
        swap_involution,
        bubbles,
        turnbacks,
        lemma1,
        lemma2,
        lemma3,
    ];
    RuleBook::standard();
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("certificate worker panicked"))
            .collect()
    })
}
