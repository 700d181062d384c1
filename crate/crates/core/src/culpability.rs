//! Culpability measures: three computed from minimal inconsistent subsets
//! with exact rationals, and one induced by a ranking over the attack
//! diagram (`best_score − σ({φ})`, left unnormalized).

use std::fmt;

use num_rational::Rational64;

use crate::abf::{build_attack_diagram, Abf, NodePolicy, Subset};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::gradual::categoriser;
use crate::kb::enumerate_mic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// 1 for assumptions in some minimal inconsistent subset, else 0.
    Drastic,
    /// Share of minimal inconsistent subsets containing the assumption.
    Star,
    /// Size-weighted share; see [`culp_c`].
    Combined,
    /// Best score minus the categoriser score of the singleton node.
    Induced,
}

impl Measure {
    pub fn id(self) -> &'static str {
        match self {
            Measure::Drastic => "d",
            Measure::Star => "star",
            Measure::Combined => "c",
            Measure::Induced => "induced",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(Measure::Drastic),
            "star" => Ok(Measure::Star),
            "c" => Ok(Measure::Combined),
            "induced" => Ok(Measure::Induced),
            other => Err(Error::InvalidParameter(format!("unknown measure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CulpabilityValue {
    Exact(Rational64),
    Real(f64),
}

impl CulpabilityValue {
    pub fn to_f64(self) -> f64 {
        match self {
            CulpabilityValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            CulpabilityValue::Real(x) => x,
        }
    }

    pub fn exact(self) -> Option<Rational64> {
        match self {
            CulpabilityValue::Exact(r) => Some(r),
            CulpabilityValue::Real(_) => None,
        }
    }
}

impl fmt::Display for CulpabilityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CulpabilityValue::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            CulpabilityValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            CulpabilityValue::Real(x) => write!(f, "{x:.6}"),
        }
    }
}

/// One value per assumption, aligned with `Abf::ab()`.
#[derive(Debug, Clone, PartialEq)]
pub struct CulpabilityReport {
    pub measure: Measure,
    pub assumptions: Vec<Formula>,
    pub values: Vec<CulpabilityValue>,
}

impl CulpabilityReport {
    pub fn get(&self, f: &Formula) -> Option<CulpabilityValue> {
        let i = self.assumptions.iter().position(|a| a == f)?;
        Some(self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, CulpabilityValue)> {
        self.assumptions.iter().zip(self.values.iter().copied())
    }
}

fn exact_report(abf: &Abf, measure: Measure, values: Vec<Rational64>) -> CulpabilityReport {
    CulpabilityReport {
        measure,
        assumptions: abf.ab().to_vec(),
        values: values.into_iter().map(CulpabilityValue::Exact).collect(),
    }
}

pub fn culp_d(abf: &Abf) -> Result<CulpabilityReport> {
    let blamed = enumerate_mic(abf)?.union();
    let values = (0..abf.len())
        .map(|i| Rational64::from_integer(blamed.contains(i) as i64))
        .collect();
    Ok(exact_report(abf, Measure::Drastic, values))
}

pub fn culp_star(abf: &Abf) -> Result<CulpabilityReport> {
    let mic = enumerate_mic(abf)?;
    let total = mic.len() as i64;
    let values = (0..abf.len())
        .map(|i| {
            if total == 0 {
                return Rational64::from_integer(0);
            }
            let hits = mic.sets().iter().filter(|s| s.contains(i)).count() as i64;
            Rational64::new(hits, total)
        })
        .collect();
    Ok(exact_report(abf, Measure::Star, values))
}

/// `(Σ_{Δ ∋ φ} 1/|Δ|) / Σ_Δ |Δ|` over minimal inconsistent subsets `Δ`;
/// an empty sum is 0.
pub fn culp_c(abf: &Abf) -> Result<CulpabilityReport> {
    let mic = enumerate_mic(abf)?;
    let total: i64 = mic.sets().iter().map(|s| s.len() as i64).sum();
    let values = (0..abf.len())
        .map(|i| {
            let share: Rational64 = mic
                .sets()
                .iter()
                .filter(|s| s.contains(i))
                .map(|s| Rational64::new(1, s.len() as i64))
                .sum();
            if total == 0 {
                share
            } else {
                share / Rational64::from_integer(total)
            }
        })
        .collect();
    Ok(exact_report(abf, Measure::Combined, values))
}

pub fn induced_culpability(
    abf: &Abf,
    policy: NodePolicy,
    epsilon: f64,
    max_iter: usize,
) -> Result<CulpabilityReport> {
    let diagram = build_attack_diagram(abf, policy)?;
    let ranking = categoriser(diagram.af(), epsilon, max_iter)?;
    let best = ranking.best_score();
    let values = (0..abf.len())
        .map(|i| {
            let node = diagram
                .node_of(Subset::singleton(i))
                .expect("every policy has singleton nodes");
            CulpabilityValue::Real(best - ranking.score(node))
        })
        .collect();
    Ok(CulpabilityReport {
        measure: Measure::Induced,
        assumptions: abf.ab().to_vec(),
        values,
    })
}

/// Dispatches on `measure`; `policy`, `epsilon` and `max_iter` only matter
/// for the induced measure.
pub fn culpability(
    abf: &Abf,
    measure: Measure,
    policy: NodePolicy,
    epsilon: f64,
    max_iter: usize,
) -> Result<CulpabilityReport> {
    match measure {
        Measure::Drastic => culp_d(abf),
        Measure::Star => culp_star(abf),
        Measure::Combined => culp_c(abf),
        Measure::Induced => induced_culpability(abf, policy, epsilon, max_iter),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abf::validate_abf;
    use crate::formula::parse_formula;
    use crate::gradual::{DEFAULT_EPSILON, DEFAULT_MAX_ITER};

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn abf(ab: &[&str]) -> Abf {
        validate_abf(Default::default(), ab.iter().map(|s| f(s)).collect()).unwrap()
    }

    fn r(n: i64, d: i64) -> CulpabilityValue {
        CulpabilityValue::Exact(Rational64::new(n, d))
    }

    #[test]
    fn consistent_kb_is_blameless() {
        let a = abf(&["p", "q"]);
        for report in [culp_d(&a), culp_star(&a), culp_c(&a)] {
            assert!(report.unwrap().values.iter().all(|v| *v == r(0, 1)));
        }
        let induced = induced_culpability(&a, NodePolicy::Powerset, DEFAULT_EPSILON, DEFAULT_MAX_ITER).unwrap();
        assert!(induced.values.iter().all(|v| v.to_f64() == 0.0));
    }

    #[test]
    fn drastic_on_the_two_kbs() {
        let a = abf(&["p & !p", "q", "r", "!q | !r", "s"]);
        let d = culp_d(&a).unwrap();
        assert_eq!(d.get(&f("s")), Some(r(0, 1)));
        for x in ["p & !p", "q", "r", "!q | !r"] {
            assert_eq!(d.get(&f(x)), Some(r(1, 1)));
        }
        let b = abf(&["p & !p", "q", "!q & r", "!q & s"]);
        let d = culp_d(&b).unwrap();
        assert_eq!(d.get(&f("p & !p")), Some(r(1, 1)));
        assert_eq!(d.get(&f("q")), Some(r(1, 1)));
    }

    #[test]
    fn star_and_combined() {
        let a = abf(&["p & !p", "q", "r", "!q | !r", "s"]);
        let star = culp_star(&a).unwrap();
        let c = culp_c(&a).unwrap();
        assert_eq!(star.get(&f("s")), Some(r(0, 1)));
        assert_eq!(c.get(&f("s")), Some(r(0, 1)));
        assert_eq!(c.get(&f("p & !p")), Some(r(1, 4)));
        for x in ["q", "r", "!q | !r"] {
            assert_eq!(star.get(&f(x)), Some(r(1, 2)));
            assert_eq!(c.get(&f(x)), Some(r(1, 12)));
        }

        let b = abf(&["p & !p", "q", "!q & r", "!q & s"]);
        let star = culp_star(&b).unwrap();
        let c = culp_c(&b).unwrap();
        assert_eq!(star.get(&f("p & !p")), Some(r(1, 3)));
        assert_eq!(star.get(&f("q")), Some(r(2, 3)));
        assert_eq!(c.get(&f("p & !p")), Some(r(1, 5)));
        assert_eq!(c.get(&f("q")), Some(r(1, 5)));
    }

    #[test]
    fn induced_measure_puts_contradiction_first() {
        let b = abf(&["p & !p", "q", "!q & r", "!q & s"]);
        let induced = induced_culpability(&b, NodePolicy::Powerset, DEFAULT_EPSILON, DEFAULT_MAX_ITER).unwrap();
        let worst = induced.get(&f("p & !p")).unwrap().to_f64();
        for (_, v) in induced.iter() {
            assert!(worst >= v.to_f64());
            assert!(v.to_f64() >= 0.0);
        }
    }

    #[test]
    fn induced_measure_on_the_running_example() {
        let a = abf(&["p", "!p", "q"]);
        let induced = induced_culpability(&a, NodePolicy::Powerset, 1e-12, DEFAULT_MAX_ITER).unwrap();
        let q = induced.get(&f("q")).unwrap().to_f64();
        let p = induced.get(&f("p")).unwrap().to_f64();
        assert!(q < p);
        assert!((q - (1.0 - 0.619_526)).abs() < 1e-6);
    }

    #[test]
    fn display() {
        assert_eq!(r(1, 12).to_string(), "1/12");
        assert_eq!(r(0, 1).to_string(), "0");
        assert_eq!(CulpabilityValue::Real(0.25).to_string(), "0.250000");
    }
}
