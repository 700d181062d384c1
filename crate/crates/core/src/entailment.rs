//! Classical consequence by exhaustive valuation enumeration.
//!
//! Formulas are compiled to a postfix program and evaluated on 64
//! valuations at a time: atom `i < 6` takes a fixed bit pattern inside each
//! 64-bit word, atom `i >= 6` is constant across a word and selected by the
//! word index.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::RwLock;

use thiserror::Error;

use crate::formula::Formula;

pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("query mentions {count} atoms, the limit is {limit}")]
    AtomLimitExceeded { count: usize, limit: usize },
    #[error("atom `{0}` is outside the table's atom universe")]
    UnknownAtom(String),
}

/// Ordered, duplicate-free premises (insertion order).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PremiseSet {
    formulas: Vec<Formula>,
}

impl PremiseSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `f` unless a structurally equal formula is present.
    pub fn insert(&mut self, f: Formula) -> bool {
        if self.formulas.contains(&f) {
            return false;
        }
        self.formulas.push(f);
        true
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.formulas.iter()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.formulas
    }

    /// Copy of this set extended with `extra`.
    pub fn with<'a, I: IntoIterator<Item = &'a Formula>>(&self, extra: I) -> PremiseSet {
        let mut out = self.clone();
        for f in extra {
            out.insert(f.clone());
        }
        out
    }
}

impl FromIterator<Formula> for PremiseSet {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        let mut set = PremiseSet::new();
        for f in iter {
            set.insert(f);
        }
        set
    }
}

impl<'a> IntoIterator for &'a PremiseSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.formulas.iter()
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Const(bool),
    Not,
    And,
    Or,
    Imp,
    Iff,
}

fn compile(f: &Formula, index: &BTreeMap<&str, usize>, out: &mut Vec<Op>) {
    match f {
        Formula::Atom(name) => out.push(Op::Atom(index[name.as_str()])),
        Formula::Falsity => out.push(Op::Const(false)),
        Formula::Truth => out.push(Op::Const(true)),
        Formula::Neg(a) => {
            compile(a, index, out);
            out.push(Op::Not);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            compile(a, index, out);
            compile(b, index, out);
            out.push(match f {
                Formula::And(..) => Op::And,
                Formula::Or(..) => Op::Or,
                Formula::Imp(..) => Op::Imp,
                _ => Op::Iff,
            });
        }
    }
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn eval(program: &[Op], word: usize, stack: &mut Vec<u64>) -> u64 {
    stack.clear();
    for op in program {
        let v = match *op {
            Op::Atom(i) if i < 6 => LOW_PATTERNS[i],
            Op::Atom(i) => {
                if (word >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            }
            Op::Const(b) => {
                if b {
                    u64::MAX
                } else {
                    0
                }
            }
            Op::Not => !stack.pop().unwrap(),
            binary => {
                let b = stack.pop().unwrap();
                let a = stack.pop().unwrap();
                match binary {
                    Op::And => a & b,
                    Op::Or => a | b,
                    Op::Imp => !a | b,
                    _ => !(a ^ b),
                }
            }
        };
        stack.push(v);
    }
    stack.pop().unwrap()
}

/// `premises ⊢ phi` in classical logic.
pub fn entails_refs(premises: &[&Formula], phi: &Formula) -> Result<bool, LogicError> {
    let mut atoms = BTreeSet::new();
    for f in premises {
        f.collect_atoms(&mut atoms);
    }
    phi.collect_atoms(&mut atoms);
    if atoms.len() > MAX_ATOMS {
        return Err(LogicError::AtomLimitExceeded {
            count: atoms.len(),
            limit: MAX_ATOMS,
        });
    }
    let index: BTreeMap<&str, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let programs: Vec<Vec<Op>> = premises
        .iter()
        .map(|f| {
            let mut prog = Vec::new();
            compile(f, &index, &mut prog);
            prog
        })
        .collect();
    let mut goal = Vec::new();
    compile(phi, &index, &mut goal);

    let words = 1usize << atoms.len().saturating_sub(6);
    let mut stack = Vec::with_capacity(16);
    for word in 0..words {
        let mut models = u64::MAX;
        for prog in &programs {
            models &= eval(prog, word, &mut stack);
            if models == 0 {
                break;
            }
        }
        if models == 0 {
            continue;
        }
        if models & !eval(&goal, word, &mut stack) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn entails(gamma: &PremiseSet, phi: &Formula) -> Result<bool, LogicError> {
    let refs: Vec<&Formula> = gamma.iter().collect();
    entails_refs(&refs, phi)
}

pub fn is_consistent(gamma: &PremiseSet) -> Result<bool, LogicError> {
    entails(gamma, &Formula::Falsity).map(|e| !e)
}

/// `phi ≡_Γ psi`: each entails the other in the presence of `gamma`.
pub fn equiv_under(gamma: &PremiseSet, phi: &Formula, psi: &Formula) -> Result<bool, LogicError> {
    let mut refs: Vec<&Formula> = gamma.iter().collect();
    refs.push(phi);
    if !entails_refs(&refs, psi)? {
        return Ok(false);
    }
    refs.pop();
    refs.push(psi);
    entails_refs(&refs, phi)
}

/// Model sets over a fixed atom universe. Every formula becomes the bit
/// vector of valuations satisfying it, so consequence and equivalence
/// questions reduce to bitwise operations on those vectors.
#[derive(Debug, Clone)]
pub struct TruthTables {
    index: BTreeMap<String, usize>,
    words: usize,
}

/// The satisfying valuations of one formula.
pub type Models = Vec<u64>;

impl TruthTables {
    pub fn new<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Result<Self, LogicError> {
        let mut atoms = BTreeSet::new();
        for f in formulas {
            f.collect_atoms(&mut atoms);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(LogicError::AtomLimitExceeded {
                count: atoms.len(),
                limit: MAX_ATOMS,
            });
        }
        let words = 1usize << atoms.len().saturating_sub(6);
        let index = atoms.iter().enumerate().map(|(i, a)| (a.to_string(), i)).collect();
        Ok(Self { index, words })
    }

    pub fn models(&self, f: &Formula) -> Result<Models, LogicError> {
        let mut atoms = BTreeSet::new();
        f.collect_atoms(&mut atoms);
        if let Some(unknown) = atoms.iter().find(|a| !self.index.contains_key(**a)) {
            return Err(LogicError::UnknownAtom(unknown.to_string()));
        }
        let index: BTreeMap<&str, usize> = self.index.iter().map(|(a, i)| (a.as_str(), *i)).collect();
        let mut program = Vec::new();
        compile(f, &index, &mut program);
        let mut stack = Vec::with_capacity(16);
        Ok((0..self.words).map(|w| eval(&program, w, &mut stack)).collect())
    }

    pub fn all(&self) -> Models {
        vec![u64::MAX; self.words]
    }
}

/// `a ⊆ b` as model sets, i.e. `a ⊢ b`.
pub fn models_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub fn models_and(a: &[u64], b: &[u64]) -> Models {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

pub fn models_empty(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

type CacheKey = (Vec<Formula>, Formula);

/// Memoizing front end to [`entails_refs`]. Premises are keyed as a
/// canonically sorted, deduplicated set, so argument order does not matter.
/// Concurrent callers may race on insertion; both compute the same value.
#[derive(Debug, Default)]
pub struct Oracle {
    cache: RwLock<HashMap<CacheKey, bool>>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entails(&self, premises: &[&Formula], phi: &Formula) -> Result<bool, LogicError> {
        let mut key_premises: Vec<Formula> = premises.iter().map(|f| (*f).clone()).collect();
        key_premises.sort();
        key_premises.dedup();
        let key = (key_premises, phi.clone());
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return Ok(*hit);
        }
        let value = entails_refs(premises, phi)?;
        self.cache.write().unwrap().insert(key, value);
        Ok(value)
    }

    pub fn is_consistent(&self, premises: &[&Formula]) -> Result<bool, LogicError> {
        self.entails(premises, &Formula::Falsity).map(|e| !e)
    }

    pub fn equiv_under(
        &self,
        gamma: &[&Formula],
        phi: &Formula,
        psi: &Formula,
    ) -> Result<bool, LogicError> {
        let mut refs = gamma.to_vec();
        refs.push(phi);
        if !self.entails(&refs, psi)? {
            return Ok(false);
        }
        refs.pop();
        refs.push(psi);
        self.entails(&refs, phi)
    }

    pub fn cached_queries(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}
