//! Ranking-based semantics over abstract frameworks.
//!
//! The categoriser gives every node the limit of
//! `cat₀(a) = 1`, `catᵢ₊₁(a) = 1 / (1 + Σ_{b ∈ a⁻} catᵢ(b))`.
//! Updates are synchronous: every node reads the previous full iterate.

use crate::af::AbstractAF;
use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    Categoriser,
}

impl Semantics {
    pub fn id(self) -> &'static str {
        match self {
            Semantics::Categoriser => "categoriser",
        }
    }

    pub fn from_id(id: &str) -> Result<Semantics> {
        match id {
            "categoriser" => Ok(Semantics::Categoriser),
            other => Err(Error::UnknownSemantics(other.to_string())),
        }
    }

    /// Score of every unattacked node.
    pub fn best_score(self) -> f64 {
        match self {
            Semantics::Categoriser => 1.0,
        }
    }
}

pub fn best_score(semantics_id: &str) -> Result<f64> {
    Semantics::from_id(semantics_id).map(Semantics::best_score)
}

/// Scores per node index, higher is more acceptable.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub scores: Vec<f64>,
    pub semantics: Semantics,
    pub epsilon: f64,
    pub iterations: usize,
    /// Max-norm change of each update, in order.
    pub residuals: Vec<f64>,
}

impl Ranking {
    /// A ranking with externally supplied scores, e.g. for checking
    /// postulates against a hand-made assignment.
    pub fn from_scores(scores: Vec<f64>, semantics: Semantics) -> Ranking {
        Ranking {
            scores,
            semantics,
            epsilon: 0.0,
            iterations: 0,
            residuals: Vec::new(),
        }
    }

    pub fn score(&self, node: usize) -> f64 {
        self.scores[node]
    }

    pub fn best_score(&self) -> f64 {
        self.semantics.best_score()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoriserConfig {
    pub epsilon: f64,
    pub max_iter: usize,
}

impl Default for CategoriserConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Iterates from the all-ones assignment until the max-norm change drops
/// below `epsilon`.
pub fn categoriser(af: &AbstractAF, epsilon: f64, max_iter: usize) -> Result<Ranking> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let n = af.len();
    let mut current = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut residuals = Vec::new();
    for _ in 0..max_iter {
        let mut residual: f64 = 0.0;
        for (a, slot) in next.iter_mut().enumerate() {
            let pressure: f64 = af.attackers(a).iter().map(|&b| current[b]).sum();
            *slot = 1.0 / (1.0 + pressure);
            residual = residual.max((*slot - current[a]).abs());
        }
        std::mem::swap(&mut current, &mut next);
        residuals.push(residual);
        if residual < epsilon {
            return Ok(Ranking {
                scores: current,
                semantics: Semantics::Categoriser,
                epsilon,
                iterations: residuals.len(),
                residuals,
            });
        }
    }
    let residual = residuals.last().copied().unwrap_or(0.0);
    Err(Error::NoConvergence {
        last: Box::new(Ranking {
            scores: current,
            semantics: Semantics::Categoriser,
            epsilon,
            iterations: residuals.len(),
            residuals,
        }),
        residual,
    })
}

pub fn categoriser_default(af: &AbstractAF) -> Result<Ranking> {
    let cfg = CategoriserConfig::default();
    categoriser(af, cfg.epsilon, cfg.max_iter)
}

/// `s1 ⪰ s2`: some injection `f: s2 → s1` has `σ(f(a)) ≥ σ(a)` for all `a`.
pub fn group_compare(s1: &[usize], s2: &[usize], r: &Ranking) -> bool {
    let a: Vec<f64> = s1.iter().map(|&i| r.score(i)).collect();
    let b: Vec<f64> = s2.iter().map(|&i| r.score(i)).collect();
    dominates(&a, &b)
}

/// Score-level group comparison. Pairing both lists sorted descending is
/// exact: the candidates for each element of `s2` form a prefix of the
/// sorted `s1`.
pub fn dominates(s1: &[f64], s2: &[f64]) -> bool {
    if s2.len() > s1.len() {
        return false;
    }
    let mut a = s1.to_vec();
    let mut b = s2.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    a.iter().zip(&b).all(|(x, y)| x >= y)
}
