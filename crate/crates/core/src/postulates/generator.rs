//! Seeded random frameworks for postulate sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abf::{validate_abf, Abf};
use crate::entailment::PremiseSet;
use crate::error::{Error, Result};
use crate::formula::Formula;

const ATOMS: [&str; 4] = ["p", "q", "r", "s"];
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    /// Atoms are drawn from the first `max_atoms` of `p, q, r, s`.
    pub max_atoms: usize,
    /// `|Ab|` is uniform in `1..=ab_size`.
    pub ab_size: usize,
    /// `|Γ|` is uniform in `0..=gamma_size`.
    pub gamma_size: usize,
    pub max_depth: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            seed: 42,
            max_atoms: 4,
            ab_size: 5,
            gamma_size: 2,
            max_depth: 2,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(1..=ATOMS.len()).contains(&self.max_atoms) {
            return bad(format!("max_atoms must be in 1..=4, got {}", self.max_atoms));
        }
        if !(1..=5).contains(&self.ab_size) {
            return bad(format!("ab_size must be in 1..=5, got {}", self.ab_size));
        }
        if self.gamma_size > 2 {
            return bad(format!("gamma_size must be at most 2, got {}", self.gamma_size));
        }
        if self.max_depth > 2 {
            return bad(format!("max_depth must be at most 2, got {}", self.max_depth));
        }
        Ok(())
    }
}

fn random_formula(rng: &mut ChaCha8Rng, atoms: usize, depth: usize) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| Formula::Atom(ATOMS[rng.gen_range(0..atoms)].to_string());
    if depth == 0 {
        return atom(rng);
    }
    let roll: f64 = rng.gen();
    if roll < 0.40 {
        atom(rng)
    } else if roll < 0.65 {
        Formula::not(random_formula(rng, atoms, depth - 1))
    } else {
        let a = random_formula(rng, atoms, depth - 1);
        let b = random_formula(rng, atoms, depth - 1);
        match rng.gen_range(0..4) {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::imp(a, b),
            _ => Formula::iff(a, b),
        }
    }
}

fn sample(rng: &mut ChaCha8Rng, params: &GeneratorParams) -> Result<Abf> {
    let ab_len = rng.gen_range(1..=params.ab_size);
    let gamma_len = rng.gen_range(0..=params.gamma_size);
    let gamma: PremiseSet = (0..gamma_len)
        .map(|_| random_formula(rng, params.max_atoms, params.max_depth))
        .collect();
    let ab = (0..ab_len)
        .map(|_| random_formula(rng, params.max_atoms, params.max_depth))
        .collect();
    validate_abf(gamma, ab)
}

/// The `index`-th framework of the stream selected by `params.seed`.
/// Instances are independent of each other, so any index can be
/// regenerated on its own.
pub fn random_abf(params: &GeneratorParams, index: u64) -> Result<Abf> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    for _ in 0..MAX_REJECTIONS {
        match sample(&mut rng, params) {
            Ok(abf) => return Ok(abf),
            Err(Error::Logic(e)) => return Err(e.into()),
            Err(_) => continue,
        }
    }
    Err(Error::GenerationExhausted(MAX_REJECTIONS))
}
