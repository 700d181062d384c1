//! Maximal consistent subsets, minimal inconsistent subsets and free
//! assumptions, all relative to the strict premises.

use crate::abf::{Abf, Subset};
use crate::error::{Error, Result};
use crate::formula::Formula;

pub const ENUMERATION_LIMIT: usize = 16;

/// An antichain of assumption subsets of one framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily<'a> {
    abf: &'a Abf,
    sets: Vec<Subset>,
}

impl<'a> SubsetFamily<'a> {
    fn new(abf: &'a Abf, mut sets: Vec<Subset>) -> Self {
        sets.sort_by_cached_key(|s| (s.len(), abf.formulas(*s)));
        Self { abf, sets }
    }

    pub fn abf(&self) -> &'a Abf {
        self.abf
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Members as canonically sorted formula lists.
    pub fn formula_sets(&self) -> Vec<Vec<Formula>> {
        self.sets.iter().map(|s| self.abf.formulas(*s)).collect()
    }

    pub fn union(&self) -> Subset {
        self.sets.iter().fold(Subset::EMPTY, |acc, s| acc.union(*s))
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.sets.contains(&s)
    }
}

fn check_size(abf: &Abf) -> Result<()> {
    if abf.len() > ENUMERATION_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "subset enumeration",
            size: abf.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn by_cardinality(n: usize) -> Vec<Subset> {
    let mut all: Vec<Subset> = Subset::all(n).collect();
    all.sort_by_key(|s| (s.len(), s.0));
    all
}

/// ⊆-minimal `Δ ⊆ Ab` with `Γ ∪ Δ` inconsistent.
pub fn enumerate_mic(abf: &Abf) -> Result<SubsetFamily<'_>> {
    check_size(abf)?;
    let mut found: Vec<Subset> = Vec::new();
    for s in by_cardinality(abf.len()) {
        if found.iter().any(|m| m.is_subset_of(s)) {
            continue;
        }
        if !abf.is_consistent(s)? {
            found.push(s);
        }
    }
    Ok(SubsetFamily::new(abf, found))
}

/// ⊆-maximal `Δ ⊆ Ab` with `Γ ∪ Δ` consistent.
pub fn enumerate_mcs(abf: &Abf) -> Result<SubsetFamily<'_>> {
    check_size(abf)?;
    let mut found: Vec<Subset> = Vec::new();
    for s in by_cardinality(abf.len()).into_iter().rev() {
        if found.iter().any(|m| s.is_subset_of(*m)) {
            continue;
        }
        if abf.is_consistent(s)? {
            found.push(s);
        }
    }
    Ok(SubsetFamily::new(abf, found))
}

/// Assumptions that occur in no minimal inconsistent subset.
pub fn free_subset(abf: &Abf) -> Result<Subset> {
    let mic = enumerate_mic(abf)?;
    Ok(abf.full().difference(mic.union()))
}

pub fn free_formulas(abf: &Abf) -> Result<Vec<Formula>> {
    Ok(abf.formulas(free_subset(abf)?))
}
