//! Simple contrapositive assumption-based frameworks over classical logic:
//! validation, the subset attack relation, and attack diagrams.
//!
//! The contrary of an assumption `ψ` is always `!ψ`. A set `Δ ⊆ Ab` attacks
//! `Θ ⊆ Ab` when `Γ ∪ Δ` entails `!ψ` for some `ψ ∈ Θ`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::af::{AbstractAF, NodeLabel};
use crate::entailment::{entails_refs, LogicError, PremiseSet, MAX_ATOMS};
use crate::error::{Error, Result};
use crate::formula::Formula;

/// Largest assumption set a [`Subset`] can index.
pub const MAX_ASSUMPTIONS: usize = 32;
/// Largest assumption set for the full powerset diagram.
pub const POWERSET_LIMIT: usize = 12;

/// A subset of the assumptions of an [`Abf`], as a bitmask over their
/// positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(index: usize) -> Subset {
        Subset(1 << index)
    }

    pub fn full(len: usize) -> Subset {
        if len >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << len) - 1)
        }
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize) -> Subset {
        Subset(self.0 | 1 << index)
    }

    pub fn without(self, index: usize) -> Subset {
        Subset(self.0 & !(1 << index))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.contains(*i))
    }

    /// Every subset of a universe of `len` assumptions.
    pub fn all(len: usize) -> impl Iterator<Item = Subset> {
        (0..=Subset::full(len).0).map(Subset)
    }

    /// Nonempty subsets of `self`.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let current = next?;
            if current == 0 {
                return None;
            }
            next = Some((current - 1) & full);
            Some(Subset(current))
        })
    }
}

/// A validated assumption-based framework `⟨CL, Γ, Ab, ¬⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abf {
    gamma: PremiseSet,
    ab: Vec<Formula>,
}

/// Checks the framework conditions and builds an [`Abf`].
pub fn validate_abf(gamma: PremiseSet, ab: Vec<Formula>) -> Result<Abf> {
    if ab.is_empty() {
        return Err(Error::EmptyAssumptions);
    }
    if ab.len() > MAX_ASSUMPTIONS {
        return Err(Error::SizeLimitExceeded {
            what: "assumption set",
            size: ab.len(),
            limit: MAX_ASSUMPTIONS,
        });
    }
    for (i, f) in ab.iter().enumerate() {
        if gamma.contains(f) {
            return Err(Error::GammaAbOverlap(f.render()));
        }
        if ab[..i].contains(f) {
            return Err(Error::DuplicateAssumption(f.render()));
        }
    }
    let mut atoms = BTreeSet::new();
    for f in gamma.iter().chain(&ab) {
        f.collect_atoms(&mut atoms);
    }
    if atoms.len() > MAX_ATOMS {
        return Err(LogicError::AtomLimitExceeded {
            count: atoms.len(),
            limit: MAX_ATOMS,
        }
        .into());
    }
    let gamma_refs: Vec<&Formula> = gamma.iter().collect();
    if entails_refs(&gamma_refs, &Formula::Falsity)? {
        return Err(Error::StrictPremisesInconsistent);
    }
    if cfg!(debug_assertions) {
        for psi in &ab {
            let neg = Formula::not(psi.clone());
            let consistent = !entails_refs(&[psi], &Formula::Falsity)?;
            let theorem = entails_refs(&[], psi)?;
            if consistent && !theorem {
                debug_assert!(!entails_refs(&[psi], &neg)?);
                debug_assert!(!entails_refs(&[&neg], psi)?);
            }
        }
    }
    Ok(Abf { gamma, ab })
}

impl Abf {
    pub fn new(gamma: PremiseSet, ab: Vec<Formula>) -> Result<Abf> {
        validate_abf(gamma, ab)
    }

    pub fn gamma(&self) -> &PremiseSet {
        &self.gamma
    }

    pub fn ab(&self) -> &[Formula] {
        &self.ab
    }

    pub fn len(&self) -> usize {
        self.ab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ab.is_empty()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.ab.len())
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.ab.iter().position(|a| a == f)
    }

    /// Subset containing exactly `formulas`, if all of them are assumptions.
    pub fn subset_of<'a, I: IntoIterator<Item = &'a Formula>>(&self, formulas: I) -> Option<Subset> {
        formulas
            .into_iter()
            .try_fold(Subset::EMPTY, |acc, f| Some(acc.with(self.index_of(f)?)))
    }

    /// Members of `s`, canonically sorted.
    pub fn formulas(&self, s: Subset) -> Vec<Formula> {
        let mut out: Vec<Formula> = s.indices().map(|i| self.ab[i].clone()).collect();
        out.sort();
        out
    }

    pub fn label(&self, s: Subset) -> NodeLabel {
        NodeLabel::Assumptions(self.formulas(s))
    }

    /// `Γ ∪ s` as references.
    pub fn premises(&self, s: Subset) -> Vec<&Formula> {
        self.gamma
            .iter()
            .chain(s.indices().map(|i| &self.ab[i]))
            .collect()
    }

    /// `Γ ∪ s ⊢ phi`.
    pub fn derives(&self, s: Subset, phi: &Formula) -> Result<bool> {
        Ok(entails_refs(&self.premises(s), phi)?)
    }

    pub fn is_consistent(&self, s: Subset) -> Result<bool> {
        Ok(!self.derives(s, &Formula::Falsity)?)
    }

    /// Assumptions whose contrary `Γ ∪ delta` derives.
    pub fn attacked_by(&self, delta: Subset) -> Result<Subset> {
        if !self.is_consistent(delta)? {
            return Ok(self.full());
        }
        let premises = self.premises(delta);
        let mut hit = Subset::EMPTY;
        for (i, psi) in self.ab.iter().enumerate() {
            if entails_refs(&premises, &Formula::not(psi.clone()))? {
                hit = hit.with(i);
            }
        }
        Ok(hit)
    }

    /// Does `delta` attack `theta`?
    pub fn attacks(&self, delta: Subset, theta: Subset) -> Result<bool> {
        if theta.is_empty() {
            return Ok(false);
        }
        let premises = self.premises(delta);
        for i in theta.indices() {
            if entails_refs(&premises, &Formula::not(self.ab[i].clone()))? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Abf {
    /// KB-file rendering; assumptions in their given order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "logic classical")?;
        for g in &self.gamma {
            writeln!(f, "strict: {g}")?;
        }
        for a in &self.ab {
            writeln!(f, "assume: {a}")?;
        }
        Ok(())
    }
}

/// Which assumption subsets become nodes of the attack diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NodePolicy {
    /// Every subset of `Ab`, including the empty set.
    #[default]
    Powerset,
    /// The empty set, every singleton, and `Ab` itself.
    SingletonsTop,
}

impl NodePolicy {
    pub fn id(self) -> &'static str {
        match self {
            NodePolicy::Powerset => "powerset",
            NodePolicy::SingletonsTop => "singletons-top",
        }
    }
}

impl std::str::FromStr for NodePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "powerset" => Ok(NodePolicy::Powerset),
            "singletons-top" => Ok(NodePolicy::SingletonsTop),
            other => Err(Error::InvalidParameter(format!("unknown node policy `{other}`"))),
        }
    }
}

/// An attack diagram together with the subset behind each node.
#[derive(Debug, Clone)]
pub struct AttackDiagram {
    policy: NodePolicy,
    af: AbstractAF,
    subsets: Vec<Subset>,
}

impl AttackDiagram {
    pub fn policy(&self) -> NodePolicy {
        self.policy
    }

    pub fn af(&self) -> &AbstractAF {
        &self.af
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    pub fn subset(&self, node: usize) -> Subset {
        self.subsets[node]
    }

    pub fn node_of(&self, s: Subset) -> Option<usize> {
        self.subsets.iter().position(|x| *x == s)
    }
}

pub fn build_attack_diagram(abf: &Abf, policy: NodePolicy) -> Result<AttackDiagram> {
    let n = abf.len();
    let mut subsets: Vec<Subset> = match policy {
        NodePolicy::Powerset => {
            if n > POWERSET_LIMIT {
                return Err(Error::SizeLimitExceeded {
                    what: "powerset attack diagram",
                    size: n,
                    limit: POWERSET_LIMIT,
                });
            }
            Subset::all(n).collect()
        }
        NodePolicy::SingletonsTop => {
            let mut v = vec![Subset::EMPTY];
            v.extend((0..n).map(Subset::singleton));
            if n > 1 {
                v.push(abf.full());
            }
            v
        }
    };
    // Node order depends on the subsets' contents, not on assumption positions.
    let mut keyed: Vec<(usize, Vec<Formula>, Subset)> = subsets
        .iter()
        .map(|s| (s.len(), abf.formulas(*s), *s))
        .collect();
    keyed.sort();
    subsets = keyed.iter().map(|(_, _, s)| *s).collect();
    let labels: Vec<NodeLabel> = keyed
        .into_iter()
        .map(|(_, f, _)| NodeLabel::Assumptions(f))
        .collect();

    let hits: Vec<Subset> = subsets
        .par_iter()
        .map(|s| abf.attacked_by(*s))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (from, hit) in hits.iter().enumerate() {
        for (to, target) in subsets.iter().enumerate() {
            if hit.intersects(*target) {
                edges.push((from, to));
            }
        }
    }
    let af = AbstractAF::new(labels, edges)?;
    Ok(AttackDiagram {
        policy,
        af,
        subsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn abf(gamma: &[&str], ab: &[&str]) -> Result<Abf> {
        validate_abf(
            gamma.iter().map(|s| f(s)).collect(),
            ab.iter().map(|s| f(s)).collect(),
        )
    }

    fn set(a: &Abf, items: &[&str]) -> Subset {
        let fs: Vec<Formula> = items.iter().map(|s| f(s)).collect();
        a.subset_of(&fs).unwrap()
    }

    #[test]
    fn validation() {
        assert!(abf(&[], &["p", "!p", "q"]).is_ok());
        assert!(matches!(abf(&["p", "!p"], &["q"]), Err(Error::StrictPremisesInconsistent)));
        assert!(matches!(abf(&[], &[]), Err(Error::EmptyAssumptions)));
        assert!(matches!(abf(&["p"], &["p", "q"]), Err(Error::GammaAbOverlap(_))));
        assert!(matches!(abf(&[], &["p", "q", "p"]), Err(Error::DuplicateAssumption(_))));
    }

    #[test]
    fn subset_attacks() {
        let a = abf(&[], &["p", "!p", "q"]).unwrap();
        assert!(a.attacks(set(&a, &["p", "!p", "q"]), set(&a, &["q"])).unwrap());
        assert!(!a.attacks(set(&a, &["q"]), set(&a, &["p"])).unwrap());
        assert!(!a.attacks(a.full(), Subset::EMPTY).unwrap());

        let g = abf(&["!p"], &["p", "q"]).unwrap();
        assert!(g.attacks(Subset::EMPTY, set(&g, &["p"])).unwrap());
    }

    #[test]
    fn subset_helpers() {
        let s = Subset(0b101);
        assert_eq!(s.indices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(s.nonempty_subsets().count(), 3);
        assert_eq!(Subset::EMPTY.nonempty_subsets().count(), 0);
        assert_eq!(Subset::all(3).count(), 8);
        assert!(Subset(0b001).is_subset_of(s));
        assert!(!Subset(0b010).is_subset_of(s));
        assert_eq!(Subset::full(32), Subset(u32::MAX));
    }

    #[test]
    fn powerset_diagram_of_the_running_example() {
        let a = abf(&[], &["p", "!p", "q"]).unwrap();
        let d = build_attack_diagram(&a, NodePolicy::Powerset).unwrap();
        let af = d.af();
        assert_eq!(af.len(), 8);
        let node = |items: &[&str]| d.node_of(set(&a, items)).unwrap();
        let empty = d.node_of(Subset::EMPTY).unwrap();
        assert!(!af.is_attacked(empty));
        for bad in [node(&["p", "!p"]), node(&["p", "!p", "q"])] {
            assert!(af.has_attack(bad, bad));
            for target in 0..af.len() {
                assert_eq!(af.has_attack(bad, target), target != empty);
            }
        }
        // 2 inconsistent sets x 7 nonempty targets, plus 4 consistent sets
        // each hitting the 4 sets holding the opposite literal.
        assert_eq!(af.attacks().len(), 30);
    }

    #[test]
    fn singletons_top_diagram_of_the_running_example() {
        let a = abf(&[], &["p", "!p", "q"]).unwrap();
        let d = build_attack_diagram(&a, NodePolicy::SingletonsTop).unwrap();
        let af = d.af();
        assert_eq!(af.len(), 5);
        let node = |items: &[&str]| d.node_of(set(&a, items)).unwrap();
        let (p, np, q, top) = (node(&["p"]), node(&["!p"]), node(&["q"]), node(&["p", "!p", "q"]));
        let mut expected = vec![(p, np), (np, p), (p, top), (np, top), (top, p), (top, np), (top, q), (top, top)];
        expected.sort();
        assert_eq!(af.attacks(), expected.as_slice());
    }

    #[test]
    fn consistent_powerset_has_no_edges() {
        let a = abf(&[], &["p", "q"]).unwrap();
        let d = build_attack_diagram(&a, NodePolicy::Powerset).unwrap();
        assert_eq!(d.af().len(), 4);
        assert!(d.af().attacks().is_empty());
    }

    #[test]
    fn powerset_size_limit() {
        let ab: Vec<String> = (0..13).map(|i| format!("a{i}")).collect();
        let refs: Vec<&str> = ab.iter().map(String::as_str).collect();
        let a = abf(&[], &refs).unwrap();
        assert!(matches!(
            build_attack_diagram(&a, NodePolicy::Powerset),
            Err(Error::SizeLimitExceeded { limit: 12, .. })
        ));
        assert_eq!(build_attack_diagram(&a, NodePolicy::SingletonsTop).unwrap().af().len(), 15);
    }

    #[test]
    fn diagram_ignores_assumption_order() {
        let a = abf(&["r -> !q"], &["p", "!p", "q", "r"]).unwrap();
        let b = abf(&["r -> !q"], &["r", "q", "!p", "p"]).unwrap();
        let da = build_attack_diagram(&a, NodePolicy::Powerset).unwrap();
        let db = build_attack_diagram(&b, NodePolicy::Powerset).unwrap();
        assert_eq!(da.af(), db.af());
    }
}
