//! Executable postulates for ranking-based semantics.
//!
//! Every checker quantifies exhaustively over the nodes of the framework it
//! is given. A failing verdict carries the first violated [`Requirement`],
//! which can be replayed against any ranking of the same framework.

mod generator;
mod suite;

pub use generator::{random_abf, GeneratorParams};
pub use suite::{check_abf, run_suite, run_suite_with, InstanceReport, SuiteReport};

use std::fmt;

use sha2::{Digest, Sha256};

use crate::abf::{Abf, AttackDiagram, Subset};
use crate::af::AbstractAF;
use crate::error::{Error, Result};
use crate::gradual::{group_compare, Ranking};

/// Slack for comparisons between real-valued scores.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PostulateId {
    VoidPrecedence,
    Monotony,
    CounterTransitivity,
    VoidBestRank,
    LogicalVoidPrecedence,
    Falsity,
    Freeness,
    Dominance,
    Blame,
    Consistency,
    /// Arguments with the same support get the same score.
    EqualSupport,
}

impl PostulateId {
    /// The postulates evaluated on assumption-based attack diagrams.
    pub const ABF: [PostulateId; 10] = [
        PostulateId::VoidPrecedence,
        PostulateId::Monotony,
        PostulateId::CounterTransitivity,
        PostulateId::VoidBestRank,
        PostulateId::LogicalVoidPrecedence,
        PostulateId::Falsity,
        PostulateId::Freeness,
        PostulateId::Dominance,
        PostulateId::Blame,
        PostulateId::Consistency,
    ];

    /// The properties evaluated on support/conclusion frameworks.
    pub const SEQUENT: [PostulateId; 5] = [
        PostulateId::Freeness,
        PostulateId::Dominance,
        PostulateId::Blame,
        PostulateId::Consistency,
        PostulateId::EqualSupport,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PostulateId::VoidPrecedence => "void-precedence",
            PostulateId::Monotony => "monotony",
            PostulateId::CounterTransitivity => "counter-transitivity",
            PostulateId::VoidBestRank => "void-best-rank",
            PostulateId::LogicalVoidPrecedence => "logical-void-precedence",
            PostulateId::Falsity => "falsity",
            PostulateId::Freeness => "freeness",
            PostulateId::Dominance => "dominance",
            PostulateId::Blame => "blame",
            PostulateId::Consistency => "consistency",
            PostulateId::EqualSupport => "equal-support",
        }
    }
}

impl fmt::Display for PostulateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for PostulateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PostulateId::ABF
            .iter()
            .chain(&[PostulateId::EqualSupport])
            .copied()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown postulate `{s}`")))
    }
}

/// A single comparison a postulate demands of a ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Requirement {
    /// `σ(higher) ≥ σ(lower)`.
    AtLeast { higher: usize, lower: usize },
    /// `σ(higher) > σ(lower)`.
    StrictlyAbove { higher: usize, lower: usize },
    /// `σ(node) = value`.
    Equals { node: usize, value: f64 },
    /// `σ(node) < value`.
    Below { node: usize, value: f64 },
}

impl Requirement {
    pub fn holds(&self, r: &Ranking) -> bool {
        match *self {
            Requirement::AtLeast { higher, lower } => r.score(higher) >= r.score(lower) - TOLERANCE,
            Requirement::StrictlyAbove { higher, lower } => {
                r.score(higher) > r.score(lower) + TOLERANCE
            }
            Requirement::Equals { node, value } => (r.score(node) - value).abs() <= TOLERANCE,
            Requirement::Below { node, value } => r.score(node) < value - TOLERANCE,
        }
    }

    pub fn nodes(&self) -> Vec<usize> {
        match *self {
            Requirement::AtLeast { higher, lower } | Requirement::StrictlyAbove { higher, lower } => {
                vec![higher, lower]
            }
            Requirement::Equals { node, .. } | Requirement::Below { node, .. } => vec![node],
        }
    }
}

/// A violated requirement with the labels and scores that witnessed it.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub requirement: Requirement,
    /// `(node, label, score)` for every node the requirement mentions.
    pub witnesses: Vec<(usize, String, f64)>,
    /// Why the requirement applied.
    pub reason: String,
}

impl Counterexample {
    fn new(requirement: Requirement, af: &AbstractAF, r: &Ranking, reason: String) -> Self {
        let witnesses = requirement
            .nodes()
            .into_iter()
            .map(|n| (n, af.label(n).to_string(), r.score(n)))
            .collect();
        Self {
            requirement,
            witnesses,
            reason,
        }
    }

    /// True when the violation still shows up under `r`.
    pub fn replay(&self, r: &Ranking) -> bool {
        !self.requirement.holds(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// The premise applies to formulas that have no node in the framework.
    Inapplicable,
}

impl Status {
    pub fn id(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostulateVerdict {
    pub postulate: PostulateId,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub instance_fingerprint: String,
    pub note: Option<String>,
}

impl PostulateVerdict {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn with_instance(mut self, fingerprint: &str) -> Self {
        self.instance_fingerprint = fingerprint.to_string();
        self
    }
}

/// Walks requirements in order and stops at the first violation. `reason`
/// says why the requirements apply.
pub(crate) fn evaluate<I>(
    postulate: PostulateId,
    af: &AbstractAF,
    r: &Ranking,
    reason: &str,
    requirements: I,
) -> PostulateVerdict
where
    I: IntoIterator<Item = Requirement>,
{
    let counterexample = requirements
        .into_iter()
        .find(|req| !req.holds(r))
        .map(|req| Counterexample::new(req, af, r, reason.to_string()));
    PostulateVerdict {
        postulate,
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        counterexample,
        instance_fingerprint: String::new(),
        note: None,
    }
}

pub(crate) fn inapplicable(postulate: PostulateId, note: String) -> PostulateVerdict {
    PostulateVerdict {
        postulate,
        status: Status::Inapplicable,
        counterexample: None,
        instance_fingerprint: String::new(),
        note: Some(note),
    }
}

/// Hex SHA-256 prefix of `text`; used for instance fingerprints.
pub fn fingerprint(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn abf_fingerprint(abf: &Abf) -> String {
    fingerprint(&abf.to_string())
}

/// Attacker sets as bitsets, for fast inclusion tests.
struct AttackerSets {
    words: usize,
    bits: Vec<u64>,
}

impl AttackerSets {
    fn new(af: &AbstractAF) -> Self {
        let words = af.len().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * af.len()];
        for a in 0..af.len() {
            for &b in af.attackers(a) {
                bits[a * words + b / 64] |= 1 << (b % 64);
            }
        }
        Self { words, bits }
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    fn is_subset(&self, a: usize, b: usize) -> bool {
        self.row(a).iter().zip(self.row(b)).all(|(x, y)| x & !y == 0)
    }
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b)
}

/// Attacked nodes rank strictly below unattacked ones.
pub fn check_void_precedence(af: &AbstractAF, r: &Ranking) -> PostulateVerdict {
    let (unattacked, attacked): (Vec<usize>, Vec<usize>) =
        (0..af.len()).partition(|&a| !af.is_attacked(a));
    let reqs = attacked.iter().flat_map(|&a| {
        unattacked
            .iter()
            .map(move |&b| Requirement::StrictlyAbove { higher: b, lower: a })
    });
    evaluate(
        PostulateId::VoidPrecedence,
        af,
        r,
        "the lower node is attacked, the higher node is not",
        reqs,
    )
}

/// `a⁻ ⊆ b⁻` implies `σ(a) ≥ σ(b)`.
pub fn check_monotony(af: &AbstractAF, r: &Ranking) -> PostulateVerdict {
    let sets = AttackerSets::new(af);
    let reqs = ordered_pairs(af.len())
        .filter(|&(a, b)| sets.is_subset(a, b))
        .map(|(a, b)| Requirement::AtLeast { higher: a, lower: b });
    evaluate(
        PostulateId::Monotony,
        af,
        r,
        "attackers of the higher node are a subset of those of the lower node",
        reqs,
    )
}

/// `b⁻ ⪰ a⁻` implies `σ(a) ≥ σ(b)`.
pub fn check_counter_transitivity(af: &AbstractAF, r: &Ranking) -> PostulateVerdict {
    let reqs = ordered_pairs(af.len())
        .filter(|&(a, b)| group_compare(af.attackers(b), af.attackers(a), r))
        .map(|(a, b)| Requirement::AtLeast { higher: a, lower: b });
    evaluate(
        PostulateId::CounterTransitivity,
        af,
        r,
        "attackers of the lower node group-dominate those of the higher node",
        reqs,
    )
}

/// Every unattacked node scores exactly `expected`.
pub fn check_void_best_rank(af: &AbstractAF, r: &Ranking, expected: f64) -> PostulateVerdict {
    let reqs = (0..af.len())
        .filter(|&a| !af.is_attacked(a))
        .map(|a| Requirement::Equals { node: a, value: expected });
    evaluate(PostulateId::VoidBestRank, af, r, "node is unattacked", reqs)
}

/// An attack diagram, a ranking over it, and what the postulates need to
/// know about the underlying framework.
pub struct DiagramContext<'a> {
    pub abf: &'a Abf,
    pub diagram: &'a AttackDiagram,
    pub ranking: &'a Ranking,
    pub free: Subset,
    pub blamed: Subset,
    /// Assumptions `φ` with `Γ ∪ {φ}` inconsistent.
    pub self_inconsistent: Subset,
    pub globally_consistent: bool,
}

impl<'a> DiagramContext<'a> {
    pub fn new(abf: &'a Abf, diagram: &'a AttackDiagram, ranking: &'a Ranking) -> Result<Self> {
        let mic = crate::kb::enumerate_mic(abf)?;
        let blamed = mic.union();
        let self_inconsistent = mic
            .sets()
            .iter()
            .filter(|s| s.len() == 1)
            .fold(Subset::EMPTY, |acc, s| acc.union(*s));
        Ok(Self {
            abf,
            diagram,
            ranking,
            free: abf.full().difference(blamed),
            blamed,
            self_inconsistent,
            globally_consistent: mic.is_empty(),
        })
    }

    fn af(&self) -> &AbstractAF {
        self.diagram.af()
    }

    fn singleton(&self, i: usize) -> Option<usize> {
        self.diagram.node_of(Subset::singleton(i))
    }

    fn free_vs_nonempty(&self) -> impl Iterator<Item = Requirement> + '_ {
        let subsets = self.diagram.subsets();
        let free = self.free;
        ordered_pairs(subsets.len())
            .filter(move |&(theta, delta)| {
                subsets[theta].is_subset_of(free) && !subsets[delta].is_empty()
            })
            .map(|(theta, delta)| Requirement::AtLeast {
                higher: theta,
                lower: delta,
            })
    }
}

const FREE_REASON: &str = "the higher node consists of free assumptions, the lower node is nonempty";

/// Sets of free assumptions rank at least as high as any nonempty set.
pub fn check_logical_void_precedence(ctx: &DiagramContext<'_>) -> PostulateVerdict {
    evaluate(
        PostulateId::LogicalVoidPrecedence,
        ctx.af(),
        ctx.ranking,
        FREE_REASON,
        ctx.free_vs_nonempty(),
    )
}

/// The freeness property quantifies like logical void precedence, with the
/// empty set included among the free sets.
pub fn check_freeness(ctx: &DiagramContext<'_>) -> PostulateVerdict {
    evaluate(
        PostulateId::Freeness,
        ctx.af(),
        ctx.ranking,
        FREE_REASON,
        ctx.free_vs_nonempty(),
    )
}

/// A self-inconsistent assumption ranks no higher than any assumption.
pub fn check_falsity(ctx: &DiagramContext<'_>) -> PostulateVerdict {
    let n = ctx.abf.len();
    let mut reqs = Vec::new();
    for phi in ctx.self_inconsistent.indices() {
        let Some(phi_node) = ctx.singleton(phi) else { continue };
        for psi in (0..n).filter(|&psi| psi != phi) {
            if let Some(psi_node) = ctx.singleton(psi) {
                reqs.push(Requirement::AtLeast {
                    higher: psi_node,
                    lower: phi_node,
                });
            }
        }
    }
    evaluate(
        PostulateId::Falsity,
        ctx.af(),
        ctx.ranking,
        "the lower assumption is inconsistent with the strict premises",
        reqs,
    )
}

/// `Γ ∪ {φ} ⊢ ψ` with `Γ ∪ {φ}` consistent implies `σ({ψ}) ≥ σ({φ})`.
pub fn check_dominance(ctx: &DiagramContext<'_>) -> Result<PostulateVerdict> {
    let n = ctx.abf.len();
    let mut reqs = Vec::new();
    for phi in 0..n {
        if ctx.self_inconsistent.contains(phi) {
            continue;
        }
        let Some(phi_node) = ctx.singleton(phi) else { continue };
        for psi in (0..n).filter(|&psi| psi != phi) {
            let Some(psi_node) = ctx.singleton(psi) else { continue };
            if ctx.abf.derives(Subset::singleton(phi), &ctx.abf.ab()[psi])? {
                reqs.push(Requirement::AtLeast {
                    higher: psi_node,
                    lower: phi_node,
                });
            }
        }
    }
    Ok(evaluate(
        PostulateId::Dominance,
        ctx.af(),
        ctx.ranking,
        "the lower assumption is consistent and entails the higher one",
        reqs,
    ))
}

/// Assumptions in some minimal inconsistent subset rank below the best score.
pub fn check_blame(ctx: &DiagramContext<'_>) -> PostulateVerdict {
    let best = ctx.ranking.best_score();
    let reqs = ctx
        .blamed
        .indices()
        .filter_map(|phi| ctx.singleton(phi))
        .map(|node| Requirement::Below { node, value: best });
    evaluate(
        PostulateId::Blame,
        ctx.af(),
        ctx.ranking,
        "assumption occurs in a minimal inconsistent subset",
        reqs,
    )
}

/// With `Γ ∪ Ab` consistent, every node gets the best score.
pub fn check_consistency(ctx: &DiagramContext<'_>) -> PostulateVerdict {
    let best = ctx.ranking.best_score();
    let nodes = if ctx.globally_consistent { ctx.af().len() } else { 0 };
    let reqs = (0..nodes).map(|node| Requirement::Equals { node, value: best });
    evaluate(
        PostulateId::Consistency,
        ctx.af(),
        ctx.ranking,
        "strict premises and assumptions are jointly consistent",
        reqs,
    )
}
