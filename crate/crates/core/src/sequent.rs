//! Support/conclusion arguments `⟨Δ, c⟩` with `Γ ∪ Δ ⊢ c`, attacks keyed
//! on the support of the attacked argument, and the properties rankings
//! are expected to have on the resulting frameworks.
//!
//! All such arguments form an infinite set, so conclusions are drawn from a
//! finite pool: `⋀Θ` and `¬⋀Θ` for nonempty `Θ ⊆ Ab`, `θ` and `¬θ` for
//! `θ ∈ Ab`, and `¬F`, keeping the least formula (in canonical order) of
//! each `Γ`-equivalence class. Every attack rule asks whether the attacker's
//! conclusion entails, or is equivalent to, `¬⋀S` for some nonempty
//! `S ⊆ Ab`. The pool holds `⋀Δ`, the strongest conclusion of support `Δ`,
//! and a representative of every `¬⋀S`, so whenever some conclusion of `Δ`
//! fires a rule against a support, a pool conclusion of `Δ` fires it too.
//! The restriction changes how many arguments share a support, but not which
//! supports attack which.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::abf::{Abf, Subset};
use crate::af::{AbstractAF, NodeLabel};
use crate::entailment::{entails_refs, models_and, models_empty, models_subset, Models, TruthTables};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::gradual::{categoriser, Ranking};
use crate::kb::enumerate_mic;
use crate::postulates::{
    evaluate, fingerprint, inapplicable, PostulateId, PostulateVerdict, Requirement,
};

/// Largest assumption set for which arguments are generated.
pub const SEQUENT_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackRule {
    /// `Γ ∪ {c₁} ⊢ ¬⋀Δ₂`.
    Def,
    /// `Γ ∪ {c₁} ⊢ ¬δ` for some `δ ∈ Δ₂`.
    DirDef,
    /// `c₁ ≡_Γ ¬⋀Δ′` for some nonempty `Δ′ ⊆ Δ₂`.
    Ucut,
    /// `c₁ ≡_Γ ¬⋀Δ₂`.
    CanUcut,
    /// `c₁ ≡_Γ ¬δ` for some `δ ∈ Δ₂`.
    DirUcut,
}

impl AttackRule {
    pub const ALL: [AttackRule; 5] = [
        AttackRule::Def,
        AttackRule::DirDef,
        AttackRule::Ucut,
        AttackRule::CanUcut,
        AttackRule::DirUcut,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AttackRule::Def => "def",
            AttackRule::DirDef => "dirdef",
            AttackRule::Ucut => "ucut",
            AttackRule::CanUcut => "canucut",
            AttackRule::DirUcut => "dirucut",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl std::str::FromStr for AttackRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackRule::ALL
            .into_iter()
            .find(|r| r.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown attack rule `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AttackRuleSet(u8);

impl AttackRuleSet {
    pub fn all() -> Self {
        AttackRule::ALL.into_iter().collect()
    }

    pub fn single(rule: AttackRule) -> Self {
        Self(rule.bit())
    }

    pub fn contains(self, rule: AttackRule) -> bool {
        self.0 & rule.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = AttackRule> {
        AttackRule::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl FromIterator<AttackRule> for AttackRuleSet {
    fn from_iter<I: IntoIterator<Item = AttackRule>>(iter: I) -> Self {
        Self(iter.into_iter().fold(0, |acc, r| acc | r.bit()))
    }
}

/// Comma-separated rule ids; `all` selects every rule.
impl std::str::FromStr for AttackRuleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(Self::all());
        }
        let set = s
            .split(',')
            .map(|part| part.trim().parse::<AttackRule>())
            .collect::<Result<AttackRuleSet>>()?;
        if set.is_empty() {
            return Err(Error::InvalidParameter("no attack rules given".into()));
        }
        Ok(set)
    }
}

impl fmt::Display for AttackRuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<&str> = self.iter().map(AttackRule::id).collect();
        f.write_str(&ids.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SupportConsistency {
    #[default]
    AllowInconsistent,
    ConsistentOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SupportMinimality {
    #[default]
    AllSupports,
    /// Keep `⟨Δ, c⟩` only if no proper subset of `Δ` also yields `c`.
    MinimalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Filters {
    pub consistency: SupportConsistency,
    pub minimality: SupportMinimality,
}

/// Comma-separated: `consistent-only`, `minimal-only`, and the defaults
/// `allow-inconsistent`, `all-supports`. An empty string means defaults.
impl std::str::FromStr for Filters {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut filters = Filters::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "consistent-only" => filters.consistency = SupportConsistency::ConsistentOnly,
                "allow-inconsistent" => filters.consistency = SupportConsistency::AllowInconsistent,
                "minimal-only" => filters.minimality = SupportMinimality::MinimalOnly,
                "all-supports" => filters.minimality = SupportMinimality::AllSupports,
                other => return Err(Error::InvalidParameter(format!("unknown filter `{other}`"))),
            }
        }
        Ok(filters)
    }
}

impl fmt::Display for Filters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.consistency {
            SupportConsistency::AllowInconsistent => "allow-inconsistent",
            SupportConsistency::ConsistentOnly => "consistent-only",
        };
        let m = match self.minimality {
            SupportMinimality::AllSupports => "all-supports",
            SupportMinimality::MinimalOnly => "minimal-only",
        };
        write!(f, "{c},{m}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequentArgument {
    pub support: Subset,
    pub conclusion: Formula,
}

impl SequentArgument {
    pub fn label(&self, abf: &Abf) -> NodeLabel {
        NodeLabel::Argument {
            support: abf.formulas(self.support),
            conclusion: self.conclusion.clone(),
        }
    }
}

fn check_size(abf: &Abf) -> Result<()> {
    if abf.len() > SEQUENT_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "argument generation",
            size: abf.len(),
            limit: SEQUENT_LIMIT,
        });
    }
    Ok(())
}

/// Model sets of everything the construction touches, restricted to the
/// models of `Γ`.
struct Semantics {
    /// `conj[S]`: models of `Γ ∪ S`, indexed by subset bits.
    conj: Vec<Models>,
    pool: Vec<Formula>,
    /// Models of `Γ ∪ {c}` per pool conclusion.
    pool_models: Vec<Models>,
}

impl Semantics {
    fn new(abf: &Abf) -> Result<Self> {
        check_size(abf)?;
        let n = abf.len();
        let tables = TruthTables::new(abf.gamma().iter().chain(abf.ab()))?;
        let gamma = abf
            .gamma()
            .iter()
            .try_fold(tables.all(), |acc, f| Ok::<_, Error>(models_and(&acc, &tables.models(f)?)))?;
        let singles = abf
            .ab()
            .iter()
            .map(|f| tables.models(f))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut conj = vec![gamma.clone(); 1 << n];
        for bits in 1u32..(1 << n) {
            let low = bits.trailing_zeros() as usize;
            conj[bits as usize] = models_and(&conj[(bits & (bits - 1)) as usize], &singles[low]);
        }

        let mut candidates = vec![Formula::not(Formula::Falsity)];
        for theta in abf.ab() {
            candidates.push(theta.clone());
            candidates.push(Formula::not(theta.clone()));
        }
        for s in abf.full().nonempty_subsets() {
            let c = Formula::conjoin(&abf.formulas(s)).expect("nonempty subset");
            candidates.push(Formula::not(c.clone()));
            candidates.push(c);
        }
        candidates.sort();
        candidates.dedup();

        let mut seen: HashMap<Models, ()> = HashMap::new();
        let mut pool = Vec::new();
        let mut pool_models = Vec::new();
        for c in candidates {
            let m = models_and(&gamma, &tables.models(&c)?);
            if seen.insert(m.clone(), ()).is_none() {
                pool.push(c);
                pool_models.push(m);
            }
        }
        Ok(Self {
            conj,
            pool,
            pool_models,
        })
    }

    fn derives(&self, support: Subset, k: usize) -> bool {
        models_subset(&self.conj[support.0 as usize], &self.pool_models[k])
    }

    /// `attacks[k][S]`: pool conclusion `k` attacks every argument with
    /// support `S` under `rules`.
    fn attack_table(&self, n: usize, rules: AttackRuleSet) -> Vec<Vec<bool>> {
        let subsets = 1usize << n;
        let gamma = &self.conj[0];
        let negated: Vec<Models> = self
            .conj
            .iter()
            .map(|m| gamma.iter().zip(m).map(|(g, x)| g & !x).collect())
            .collect();
        self.pool_models
            .par_iter()
            .map(|c| {
                let entails: Vec<bool> = (0..subsets)
                    .map(|s| models_empty(&models_and(c, &self.conj[s])))
                    .collect();
                let equiv: Vec<bool> = (0..subsets).map(|s| *c == negated[s]).collect();
                (0..subsets)
                    .map(|s| {
                        let support = Subset(s as u32);
                        if support.is_empty() {
                            return false;
                        }
                        let singles = || support.indices().map(|i| 1usize << i);
                        rules.iter().any(|rule| match rule {
                            AttackRule::Def => entails[s],
                            AttackRule::DirDef => singles().any(|t| entails[t]),
                            AttackRule::Ucut => support.nonempty_subsets().any(|t| equiv[t.0 as usize]),
                            AttackRule::CanUcut => equiv[s],
                            AttackRule::DirUcut => singles().any(|t| equiv[t]),
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Arguments as `(support, pool index)`, in node order.
    fn arguments(&self, abf: &Abf, filters: Filters) -> Vec<(Subset, usize)> {
        let mut supports: Vec<Subset> = Subset::all(abf.len()).collect();
        supports.sort_by_cached_key(|s| (s.len(), abf.formulas(*s)));
        let mut out = Vec::new();
        for s in supports {
            if filters.consistency == SupportConsistency::ConsistentOnly
                && models_empty(&self.conj[s.0 as usize])
            {
                continue;
            }
            for k in 0..self.pool.len() {
                if !self.derives(s, k) {
                    continue;
                }
                // Entailment is monotone, so a smaller support exists iff
                // one obtained by dropping a single assumption exists.
                if filters.minimality == SupportMinimality::MinimalOnly
                    && s.indices().any(|i| self.derives(s.without(i), k))
                {
                    continue;
                }
                out.push((s, k));
            }
        }
        out.sort_by(|(s1, k1), (s2, k2)| {
            (s1.len(), abf.formulas(*s1), &self.pool[*k1]).cmp(&(s2.len(), abf.formulas(*s2), &self.pool[*k2]))
        });
        out
    }
}

/// Class representatives of the conclusion pool, canonically sorted.
pub fn canonical_pool(abf: &Abf) -> Result<Vec<Formula>> {
    Ok(Semantics::new(abf)?.pool)
}

pub fn build_arguments(abf: &Abf, filters: Filters) -> Result<Vec<SequentArgument>> {
    let sem = Semantics::new(abf)?;
    Ok(sem
        .arguments(abf, filters)
        .into_iter()
        .map(|(support, k)| SequentArgument {
            support,
            conclusion: sem.pool[k].clone(),
        })
        .collect())
}

/// Evaluates one rule straight from its definition. Used as the reference
/// the precomputed tables of [`build_sequent_af`] are tested against.
pub fn rule_attacks(
    rule: AttackRule,
    abf: &Abf,
    attacker: &SequentArgument,
    attacked: &SequentArgument,
) -> Result<bool> {
    if attacked.support.is_empty() {
        return Ok(false);
    }
    let gamma: Vec<&Formula> = abf.gamma().iter().collect();
    let c = &attacker.conclusion;
    fn with<'a>(gamma: &[&'a Formula], extra: &'a Formula) -> Vec<&'a Formula> {
        let mut premises = gamma.to_vec();
        premises.push(extra);
        premises
    }
    let neg_conj = |s: Subset| Formula::not(Formula::conjoin(&abf.formulas(s)).expect("nonempty"));
    let entails = |goal: &Formula| entails_refs(&with(&gamma, c), goal);
    let equiv = |other: &Formula| -> Result<bool> {
        Ok(entails_refs(&with(&gamma, c), other)? && entails_refs(&with(&gamma, other), c)?)
    };
    let support = attacked.support;
    Ok(match rule {
        AttackRule::Def => entails(&neg_conj(support))?,
        AttackRule::CanUcut => equiv(&neg_conj(support))?,
        AttackRule::DirDef | AttackRule::DirUcut => {
            let mut hit = false;
            for i in support.indices() {
                let neg = Formula::not(abf.ab()[i].clone());
                hit = if rule == AttackRule::DirDef { entails(&neg)? } else { equiv(&neg)? };
                if hit {
                    break;
                }
            }
            hit
        }
        AttackRule::Ucut => {
            let mut hit = false;
            for t in support.nonempty_subsets() {
                if equiv(&neg_conj(t))? {
                    hit = true;
                    break;
                }
            }
            hit
        }
    })
}

#[derive(Debug, Clone)]
pub struct SequentFramework {
    pub rules: AttackRuleSet,
    pub filters: Filters,
    pub pool: Vec<Formula>,
    pub arguments: Vec<SequentArgument>,
    pub af: AbstractAF,
}

impl SequentFramework {
    /// Nodes grouped by support, in node order.
    pub fn support_groups(&self) -> Vec<(Subset, Vec<usize>)> {
        let mut groups: Vec<(Subset, Vec<usize>)> = Vec::new();
        for (i, a) in self.arguments.iter().enumerate() {
            match groups.iter_mut().find(|(s, _)| *s == a.support) {
                Some((_, nodes)) => nodes.push(i),
                None => groups.push((a.support, vec![i])),
            }
        }
        groups
    }

    pub fn nodes_with_support(&self, support: Subset) -> Vec<usize> {
        (0..self.arguments.len())
            .filter(|&i| self.arguments[i].support == support)
            .collect()
    }
}

pub fn build_sequent_af(abf: &Abf, rules: AttackRuleSet, filters: Filters) -> Result<SequentFramework> {
    if rules.is_empty() {
        return Err(Error::InvalidParameter("no attack rules given".into()));
    }
    let sem = Semantics::new(abf)?;
    let args = sem.arguments(abf, filters);
    let table = sem.attack_table(abf.len(), rules);
    let attacks: Vec<(usize, usize)> = args
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &(_, k))| {
            let row = &table[k];
            args.iter()
                .enumerate()
                .filter(move |(_, (s, _))| row[s.0 as usize])
                .map(move |(j, _)| (i, j))
        })
        .collect();
    let arguments: Vec<SequentArgument> = args
        .iter()
        .map(|&(support, k)| SequentArgument {
            support,
            conclusion: sem.pool[k].clone(),
        })
        .collect();
    let labels = arguments.iter().map(|a| a.label(abf)).collect();
    let af = AbstractAF::new(labels, attacks)?;
    Ok(SequentFramework {
        rules,
        filters,
        pool: sem.pool,
        arguments,
        af,
    })
}

#[derive(Debug, Clone)]
pub struct SequentReport {
    pub framework: SequentFramework,
    pub ranking: Ranking,
    pub verdicts: Vec<PostulateVerdict>,
}

/// Ranks the framework with the categoriser and checks freeness,
/// dominance, blame, consistency, and equal scores for equal supports.
pub fn sequent_postulate_suite(
    abf: &Abf,
    rules: AttackRuleSet,
    filters: Filters,
    epsilon: f64,
    max_iter: usize,
) -> Result<SequentReport> {
    let framework = build_sequent_af(abf, rules, filters)?;
    let ranking = categoriser(&framework.af, epsilon, max_iter)?;
    let verdicts = check_sequent(abf, &framework, &ranking)?;
    Ok(SequentReport {
        framework,
        ranking,
        verdicts,
    })
}

pub fn check_sequent(
    abf: &Abf,
    framework: &SequentFramework,
    ranking: &Ranking,
) -> Result<Vec<PostulateVerdict>> {
    let af = &framework.af;
    if ranking.len() != af.len() {
        return Err(Error::InvalidParameter(format!(
            "ranking has {} scores for {} nodes",
            ranking.len(),
            af.len()
        )));
    }
    let mic = enumerate_mic(abf)?;
    let blamed = mic.union();
    let free = abf.full().difference(blamed);
    let best = ranking.best_score();
    let args = &framework.arguments;
    let n = args.len();
    let singleton_nodes = |i: usize| framework.nodes_with_support(Subset::singleton(i));

    let freeness = evaluate(
        PostulateId::Freeness,
        af,
        ranking,
        "the higher argument has a free support, the lower one a nonempty support",
        (0..n)
            .filter(|&a| args[a].support.is_subset_of(free))
            .flat_map(|a| {
                (0..n)
                    .filter(move |&b| b != a && !args[b].support.is_empty())
                    .map(move |b| Requirement::AtLeast { higher: a, lower: b })
            }),
    );

    let mut dominance_reqs = Vec::new();
    for psi in 0..abf.len() {
        let psi_set = Subset::singleton(psi);
        if !abf.is_consistent(psi_set)? {
            continue;
        }
        for phi in (0..abf.len()).filter(|&phi| phi != psi) {
            if !abf.derives(psi_set, &abf.ab()[phi])? {
                continue;
            }
            for &higher in &singleton_nodes(phi) {
                for &lower in &singleton_nodes(psi) {
                    dominance_reqs.push(Requirement::AtLeast { higher, lower });
                }
            }
        }
    }
    let dominance = evaluate(
        PostulateId::Dominance,
        af,
        ranking,
        "the lower argument's support is consistent and entails the higher one's",
        dominance_reqs,
    );

    let missing: Vec<String> = blamed
        .indices()
        .filter(|&i| singleton_nodes(i).is_empty())
        .map(|i| abf.ab()[i].render())
        .collect();
    let blame = if missing.is_empty() {
        evaluate(
            PostulateId::Blame,
            af,
            ranking,
            "the support is an assumption in a minimal inconsistent subset",
            blamed
                .indices()
                .flat_map(singleton_nodes)
                .map(|node| Requirement::Below { node, value: best }),
        )
    } else {
        inapplicable(
            PostulateId::Blame,
            format!("no argument is supported by {{{}}} alone", missing.join("}, {")),
        )
    };

    let consistent_nodes = if mic.is_empty() { n } else { 0 };
    let consistency = evaluate(
        PostulateId::Consistency,
        af,
        ranking,
        "strict premises and assumptions are jointly consistent",
        (0..consistent_nodes).map(|node| Requirement::Equals { node, value: best }),
    );

    let groups = framework.support_groups();
    let equal_support = evaluate(
        PostulateId::EqualSupport,
        af,
        ranking,
        "both arguments have the same support",
        groups.iter().flat_map(|(_, nodes)| {
            let first = ranking.score(nodes[0]);
            nodes[1..]
                .iter()
                .map(move |&node| Requirement::Equals { node, value: first })
        }),
    );

    let fp = fingerprint(&format!("{abf}\nrules {}\nfilters {}", framework.rules, framework.filters));
    Ok([freeness, dominance, blame, consistency, equal_support]
        .into_iter()
        .map(|v| v.with_instance(&fp))
        .collect())
}
