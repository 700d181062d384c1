use rayon::prelude::*;

use super::*;
use crate::abf::{build_attack_diagram, NodePolicy};
use crate::gradual::{categoriser, DEFAULT_MAX_ITER};

/// Evaluates every framework-level postulate on one ranked diagram.
pub fn check_abf(
    abf: &Abf,
    diagram: &AttackDiagram,
    ranking: &Ranking,
) -> Result<Vec<PostulateVerdict>> {
    if ranking.len() != diagram.af().len() {
        return Err(Error::InvalidParameter(format!(
            "ranking has {} scores for {} nodes",
            ranking.len(),
            diagram.af().len()
        )));
    }
    let fp = abf_fingerprint(abf);
    let af = diagram.af();
    let ctx = DiagramContext::new(abf, diagram, ranking)?;
    let verdicts = vec![
        check_void_precedence(af, ranking),
        check_monotony(af, ranking),
        check_counter_transitivity(af, ranking),
        check_void_best_rank(af, ranking, ranking.best_score()),
        check_logical_void_precedence(&ctx),
        check_falsity(&ctx),
        check_freeness(&ctx),
        check_dominance(&ctx)?,
        check_blame(&ctx),
        check_consistency(&ctx),
    ];
    Ok(verdicts.into_iter().map(|v| v.with_instance(&fp)).collect())
}

#[derive(Debug)]
pub struct InstanceReport {
    pub index: u64,
    pub abf: Abf,
    pub fingerprint: String,
    /// Per-instance failures (say, non-convergence) are kept here rather
    /// than aborting the whole sweep.
    pub outcome: Result<Vec<PostulateVerdict>>,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub params: GeneratorParams,
    pub instances: Vec<InstanceReport>,
}

impl SuiteReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &PostulateVerdict> {
        self.instances
            .iter()
            .filter_map(|i| i.outcome.as_ref().ok())
            .flatten()
    }

    pub fn failures(&self) -> impl Iterator<Item = &PostulateVerdict> {
        self.verdicts().filter(|v| !v.passed())
    }

    pub fn errors(&self) -> impl Iterator<Item = (&InstanceReport, &Error)> {
        self.instances
            .iter()
            .filter_map(|i| i.outcome.as_ref().err().map(|e| (i, e)))
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none() && self.errors().next().is_none()
    }
}

/// Generates `count` frameworks, ranks their powerset diagrams with the
/// categoriser and checks every postulate.
pub fn run_suite(params: &GeneratorParams, count: usize) -> Result<SuiteReport> {
    // A tight threshold keeps tolerance-level comparisons away from the
    // truncation error of the iteration.
    run_suite_with(params, count, |_, d| categoriser(d.af(), 1e-12, DEFAULT_MAX_ITER))
}

/// As [`run_suite`] with a caller-supplied ranking, which is how the
/// checkers themselves are tested against deliberately wrong scores.
pub fn run_suite_with<F>(params: &GeneratorParams, count: usize, rank: F) -> Result<SuiteReport>
where
    F: Fn(&Abf, &AttackDiagram) -> Result<Ranking> + Sync,
{
    params.validate()?;
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let abfs = (0..count as u64)
        .map(|i| random_abf(params, i).map(|a| (i, a)))
        .collect::<Result<Vec<_>>>()?;
    let instances = abfs
        .into_par_iter()
        .map(|(index, abf)| {
            let outcome = build_attack_diagram(&abf, NodePolicy::Powerset)
                .and_then(|d| rank(&abf, &d).and_then(|r| check_abf(&abf, &d, &r)));
            InstanceReport {
                index,
                fingerprint: abf_fingerprint(&abf),
                abf,
                outcome,
            }
        })
        .collect();
    Ok(SuiteReport {
        params: *params,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradual::Semantics;

    #[test]
    fn small_sweep_is_clean() {
        let report = run_suite(&GeneratorParams::default(), 25).unwrap();
        assert_eq!(report.instances.len(), 25);
        assert!(report.instances.iter().enumerate().all(|(i, r)| r.index == i as u64));
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(report.errors().next().is_none());
        assert_eq!(report.verdicts().count(), 250);
    }

    #[test]
    fn flat_ranking_is_caught() {
        let report = run_suite_with(&GeneratorParams::default(), 25, |_, d| {
            Ok(Ranking::from_scores(vec![0.5; d.af().len()], Semantics::Categoriser))
        })
        .unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().any(|v| v.postulate == PostulateId::VoidBestRank));
        for v in failed {
            assert!(!v.instance_fingerprint.is_empty());
            assert!(v.counterexample.is_some());
        }
    }

    #[test]
    fn zero_count_is_rejected() {
        assert!(run_suite(&GeneratorParams::default(), 0).is_err());
    }

    #[test]
    fn mismatched_ranking_length_is_rejected() {
        let a = random_abf(&GeneratorParams::default(), 0).unwrap();
        let d = build_attack_diagram(&a, NodePolicy::Powerset).unwrap();
        let r = Ranking::from_scores(vec![1.0], Semantics::Categoriser);
        if d.af().len() != 1 {
            assert!(check_abf(&a, &d, &r).is_err());
        }
    }
}
