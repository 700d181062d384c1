//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use argrank::abf::{build_attack_diagram, validate_abf, Abf, NodePolicy, Subset};
use argrank::af::AbstractAF;
use argrank::culpability::{culp_c, culp_d, culp_star, induced_culpability, CulpabilityReport};
use argrank::formula::{parse_formula, Formula};
use argrank::gradual::{categoriser, group_compare, DEFAULT_EPSILON, DEFAULT_MAX_ITER};
use argrank::kb::{enumerate_mcs, enumerate_mic};
use argrank::postulates::{random_abf, run_suite, GeneratorParams, PostulateId, Status};
use argrank::sequent::{
    build_sequent_af, sequent_postulate_suite, AttackRule, AttackRuleSet, Filters,
};
use num_rational::Rational64;

type Check = Result<String, String>;

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap()
}

fn abf(ab: &[&str]) -> Abf {
    validate_abf(Default::default(), ab.iter().map(|s| f(s)).collect()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn node(a: &Abf, d: &argrank::abf::AttackDiagram, members: &[&str]) -> usize {
    let fs: Vec<Formula> = members.iter().map(|s| f(s)).collect();
    d.node_of(a.subset_of(&fs).unwrap()).unwrap()
}

fn singletons_top_example() -> Check {
    let start = Instant::now();
    let a = abf(&["p", "!p", "q"]);
    let d = build_attack_diagram(&a, NodePolicy::SingletonsTop).map_err(|e| e.to_string())?;
    let r = categoriser(d.af(), DEFAULT_EPSILON, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let expected: [(&[&str], f64); 5] = [
        (&[], 1.00),
        (&["q"], 0.71),
        (&["p"], 0.52),
        (&["!p"], 0.52),
        (&["p", "!p", "q"], 0.41),
    ];
    let mut got = Vec::new();
    for (members, want) in expected {
        let s = r.score(node(&a, &d, members));
        ensure((s - want).abs() <= 0.005, || format!("{members:?}: {s:.6} vs {want}"))?;
        got.push(format!("{s:.4}"));
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("scores {}", got.join(" ")))
}

/// The eight-node diagram has three score classes besides the unattacked
/// empty set: `x` for {p}, {!p}, {p,q}, {!p,q}; `y` for the two
/// inconsistent sets; `z` for {q}. Reading attackers off the attack
/// relation gives `x = 1/(1+2x+2y)`, `y = 1/(1+4x+2y)`, `z = 1/(1+2y)`.
fn scalar_oracle() -> (f64, f64, f64) {
    let (mut x, mut y, mut z) = (1.0f64, 1.0f64, 1.0f64);
    for _ in 0..10_000 {
        let nx = 1.0 / (1.0 + 2.0 * x + 2.0 * y);
        let ny = 1.0 / (1.0 + 4.0 * x + 2.0 * y);
        let nz = 1.0 / (1.0 + 2.0 * y);
        let delta = (nx - x).abs().max((ny - y).abs()).max((nz - z).abs());
        (x, y, z) = (nx, ny, nz);
        if delta < 1e-15 {
            break;
        }
    }
    (x, y, z)
}

fn powerset_oracle() -> Check {
    let a = abf(&["p", "!p", "q"]);
    let d = build_attack_diagram(&a, NodePolicy::Powerset).map_err(|e| e.to_string())?;
    let r = categoriser(d.af(), DEFAULT_EPSILON, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let (x, y, z) = scalar_oracle();
    let expected: [(&[&str], f64); 8] = [
        (&[], 1.0),
        (&["p"], x),
        (&["!p"], x),
        (&["p", "q"], x),
        (&["!p", "q"], x),
        (&["p", "!p"], y),
        (&["p", "!p", "q"], y),
        (&["q"], z),
    ];
    let mut worst: f64 = 0.0;
    for (members, want) in expected {
        let s = r.score(node(&a, &d, members));
        worst = worst.max((s - want).abs());
        ensure((s - want).abs() <= 1e-6, || format!("{members:?}: {s} vs oracle {want}"))?;
    }
    Ok(format!("x={x:.6} y={y:.6} z={z:.6}, max deviation {worst:.1e}"))
}

fn exact(report: &CulpabilityReport, formula: &str) -> Rational64 {
    report.get(&f(formula)).unwrap().exact().unwrap()
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn culpability_example() -> Check {
    let a = abf(&["p & !p", "q", "r", "!q | !r", "s"]);
    let d = culp_d(&a).map_err(|e| e.to_string())?;
    let star = culp_star(&a).map_err(|e| e.to_string())?;
    let c = culp_c(&a).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for formula in ["p & !p", "q", "r", "!q | !r", "s"] {
        let free = formula == "s";
        let (want_d, want_star, want_c) = match formula {
            "s" => (r(0, 1), r(0, 1), r(0, 1)),
            "p & !p" => (r(1, 1), r(1, 2), r(1, 4)),
            _ => (r(1, 1), r(1, 2), r(1, 12)),
        };
        let got = (exact(&d, formula), exact(&star, formula), exact(&c, formula));
        ensure(got == (want_d, want_star, want_c), || {
            format!("{formula}: got {got:?}, want {:?} (free: {free})", (want_d, want_star, want_c))
        })?;
        rows.push(format!("{formula}: {}/{}/{}", got.0, got.1, got.2));
    }
    Ok(rows.join("; "))
}

fn discriminating_example() -> Check {
    let a = abf(&["p & !p", "q", "!q & r", "!q & s"]);
    let star = culp_star(&a).map_err(|e| e.to_string())?;
    let d = culp_d(&a).map_err(|e| e.to_string())?;
    let c = culp_c(&a).map_err(|e| e.to_string())?;
    ensure(exact(&star, "p & !p") == r(1, 3) && exact(&star, "q") == r(2, 3), || {
        format!("star: {} and {}", exact(&star, "p & !p"), exact(&star, "q"))
    })?;
    ensure(exact(&d, "p & !p") == r(1, 1) && exact(&d, "q") == r(1, 1), || "drastic".into())?;
    ensure(exact(&c, "p & !p") == r(1, 5) && exact(&c, "q") == r(1, 5), || {
        format!("combined: {} and {}", exact(&c, "p & !p"), exact(&c, "q"))
    })?;
    let induced = induced_culpability(&a, NodePolicy::Powerset, DEFAULT_EPSILON, DEFAULT_MAX_ITER)
        .map_err(|e| e.to_string())?;
    let falsum = induced.get(&f("p & !p")).unwrap().to_f64();
    let q = induced.get(&f("q")).unwrap().to_f64();
    ensure(falsum >= q, || format!("induced: {falsum} < {q}"))?;
    Ok(format!("star 1/3 < 2/3, d 1 = 1, c 1/5 = 1/5, induced {falsum:.6} >= {q:.6}"))
}

fn golden_fixed_point() -> Check {
    let af = AbstractAF::unlabeled(1, [(0, 0)]).unwrap();
    let r = categoriser(&af, 1e-6, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let s = r.score(0);
    ensure((s - 0.618_033_988_7).abs() <= 1e-6, || format!("score {s}"))?;
    ensure(r.iterations <= 60, || format!("{} iterations", r.iterations))?;
    Ok(format!("{s:.10} after {} iterations", r.iterations))
}

fn abf_property_suite() -> Check {
    let start = Instant::now();
    let params = GeneratorParams {
        seed: 42,
        max_atoms: 4,
        ab_size: 5,
        ..Default::default()
    };
    let report = run_suite(&params, 200).map_err(|e| e.to_string())?;
    if let Some((instance, e)) = report.errors().next() {
        return Err(format!("instance {}: {e}", instance.index));
    }
    let failures: Vec<String> = report
        .failures()
        .map(|v| format!("{} on {}", v.postulate, v.instance_fingerprint))
        .collect();
    ensure(failures.is_empty(), || format!("{} violations: {}", failures.len(), failures.join(", ")))?;
    let checked = report.verdicts().count();
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{checked} verdicts, 0 violations, {:.2?}", start.elapsed()))
}

fn sequent_suite() -> Check {
    let start = Instant::now();
    let params = GeneratorParams {
        seed: 42,
        ab_size: 4,
        ..Default::default()
    };
    let abfs: Vec<Abf> = (0..100)
        .map(|i| random_abf(&params, i))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut rule_sets: Vec<AttackRuleSet> = AttackRule::ALL.into_iter().map(AttackRuleSet::single).collect();
    rule_sets.push(AttackRuleSet::all());

    let mut summary = Vec::new();
    let mut clean = true;
    for rules in rule_sets {
        let mut violations: BTreeMap<PostulateId, usize> = BTreeMap::new();
        let mut inapplicable = 0;
        let mut example = None;
        for a in &abfs {
            let report = sequent_postulate_suite(a, rules, Filters::default(), 1e-12, DEFAULT_MAX_ITER)
                .map_err(|e| format!("{rules}: {e}"))?;
            for v in report.verdicts {
                match v.status {
                    Status::Fail => {
                        *violations.entry(v.postulate).or_default() += 1;
                        example.get_or_insert_with(|| {
                            let cx = v.counterexample.as_ref().unwrap();
                            let w: Vec<String> = cx
                                .witnesses
                                .iter()
                                .map(|(_, label, score)| format!("{label}={score:.4}"))
                                .collect();
                            format!("{} on [{}]: {}", v.postulate, a.ab().iter().map(|x| x.render()).collect::<Vec<_>>().join("; "), w.join(" vs "))
                        });
                    }
                    Status::Inapplicable => inapplicable += 1,
                    Status::Pass => {}
                }
            }
        }
        if violations.is_empty() {
            summary.push(format!("{{{rules}}} clean"));
        } else {
            clean = false;
            let counts: Vec<String> = violations.iter().map(|(p, n)| format!("{p} x{n}")).collect();
            summary.push(format!(
                "{{{rules}}} {} (e.g. {})",
                counts.join(", "),
                example.unwrap_or_default()
            ));
        }
        if inapplicable > 0 {
            summary.push(format!("{{{rules}}} {inapplicable} inapplicable"));
        }
    }
    let elapsed = start.elapsed();
    let text = format!("{}; {elapsed:.2?}", summary.join("; "));
    within(elapsed, Duration::from_secs(120)).map_err(|e| format!("{text}; {e}"))?;
    if clean {
        Ok(text)
    } else {
        Err(text)
    }
}

fn matching_exists(a: &[f64], b: &[f64], used: &mut [bool]) -> bool {
    let Some((first, rest)) = b.split_first() else { return true };
    for j in 0..a.len() {
        if !used[j] && a[j] >= *first {
            used[j] = true;
            let found = matching_exists(a, rest, used);
            used[j] = false;
            if found {
                return true;
            }
        }
    }
    false
}

fn duality_and_matching() -> Check {
    let params = GeneratorParams::default();
    let mut pairs = 0usize;
    for i in 0..100 {
        let a = random_abf(&params, i).map_err(|e| e.to_string())?;
        let mic = enumerate_mic(&a).map_err(|e| e.to_string())?;
        let mcs = enumerate_mcs(&a).map_err(|e| e.to_string())?;
        let hits = |h: Subset| mic.sets().iter().all(|m| m.intersects(h));
        let mut minimal_hitting: Vec<Subset> = Subset::all(a.len())
            .filter(|h| hits(*h) && h.indices().all(|k| !hits(h.without(k))))
            .collect();
        let mut complements: Vec<Subset> = mcs.sets().iter().map(|m| a.full().difference(*m)).collect();
        minimal_hitting.sort();
        complements.sort();
        ensure(minimal_hitting == complements, || format!("duality fails on instance {i}"))?;

        let d = build_attack_diagram(&a, NodePolicy::Powerset).map_err(|e| e.to_string())?;
        let r = categoriser(d.af(), 1e-12, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        let af = d.af();
        for x in 0..af.len() {
            for y in 0..af.len() {
                let (sx, sy) = (af.attackers(x), af.attackers(y));
                if sx.len() > 5 || sy.len() > 5 {
                    continue;
                }
                let ax: Vec<f64> = sx.iter().map(|&n| r.score(n)).collect();
                let ay: Vec<f64> = sy.iter().map(|&n| r.score(n)).collect();
                let brute = matching_exists(&ax, &ay, &mut vec![false; ax.len()]);
                ensure(group_compare(sx, sy, &r) == brute, || {
                    format!("group comparison disagrees on instance {i}, nodes {x}/{y}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("100 KBs dual, {pairs} attacker-set pairs agree"))
}

fn direct_defeat_cross_check() -> Check {
    let params = GeneratorParams::default();
    let mut compared = 0usize;
    for i in 0..50 {
        let a = random_abf(&params, i).map_err(|e| e.to_string())?;
        let fw = build_sequent_af(&a, AttackRuleSet::single(AttackRule::DirDef), Filters::default())
            .map_err(|e| e.to_string())?;
        let n = a.len();
        let mut sequent = vec![false; 1 << (2 * n)];
        for &(x, y) in fw.af.attacks() {
            let (s, t) = (fw.arguments[x].support.0 as usize, fw.arguments[y].support.0 as usize);
            sequent[(s << n) | t] = true;
        }
        for delta in Subset::all(n) {
            for theta in Subset::all(n) {
                let direct = a.attacks(delta, theta).map_err(|e| e.to_string())?;
                let via_arguments = sequent[((delta.0 as usize) << n) | theta.0 as usize];
                ensure(direct == via_arguments, || {
                    format!("instance {i}: {:?} vs {:?}", a.formulas(delta), a.formulas(theta))
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} subset pairs agree on 50 KBs"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 categoriser on the singletons-top example", singletons_top_example),
        ("2 powerset diagram vs scalar oracle", powerset_oracle),
        ("3 culpability exactness", culpability_example),
        ("4 discriminating example", discriminating_example),
        ("5 golden fixed point", golden_fixed_point),
        ("6 postulate suite on 200 random frameworks", abf_property_suite),
        ("7 sequent suite on 100 random frameworks", sequent_suite),
        ("8 duality and group comparison", duality_and_matching),
        ("9 direct defeat cross-check", direct_defeat_cross_check),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
