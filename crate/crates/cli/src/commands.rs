use std::fs;
use std::path::Path;

use argrank::abf::{build_attack_diagram, Abf, NodePolicy};
use argrank::af::{AbstractAF, NodeLabel};
use argrank::culpability::{culpability, CulpabilityValue};
use argrank::gradual::{categoriser, Ranking, Semantics, DEFAULT_EPSILON};
use argrank::kb::{enumerate_mcs, enumerate_mic, free_formulas};
use argrank::postulates::{
    check_abf, run_suite_with, GeneratorParams, PostulateId, PostulateVerdict, Status,
};
use argrank::sequent::{build_sequent_af, check_sequent};
use argrank::{parse_kb, Error, KbFileError};
use serde_json::{json, Map, Value};

use crate::report::{dot, rational, real, score_table, to_json_text, verdict_json};
use crate::{Command, Format, Iteration};

/// Threshold used whenever scores feed postulate checks.
const CHECK_EPSILON: f64 = 1e-12;

pub enum Failure {
    Usage(String),
    Invalid(String),
    /// Details have already been printed with the report.
    Violation,
    NoConvergence(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Violation => 3,
            Failure::NoConvergence(_) => 4,
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::NoConvergence(m) => Some(m),
            Failure::Violation => None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::UnknownSemantics(_) => {
                Failure::Usage(message)
            }
            Error::NoConvergence { .. } => Failure::NoConvergence(message),
            _ => Failure::Invalid(message),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<Abf, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e: KbFileError| {
        let message = format!("{}: {e}", path.display());
        if e.is_validation() {
            Failure::Invalid(message)
        } else {
            Failure::Usage(message)
        }
    })
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn rank_af(af: &AbstractAF, iteration: &Iteration, default_eps: f64) -> Result<Ranking, Failure> {
    Ok(categoriser(af, iteration.eps.unwrap_or(default_eps), iteration.max_iter)?)
}

fn strings(label: &NodeLabel) -> Vec<String> {
    label.support().iter().map(|f| f.render()).collect()
}

fn scores_json(r: &Ranking) -> Value {
    let map: Map<String, Value> = r
        .scores
        .iter()
        .enumerate()
        .map(|(i, s)| (i.to_string(), real(*s)))
        .collect();
    Value::Object(map)
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Analyze { file, format } => analyze(&file, format),
        Command::Rank {
            file,
            policy,
            iteration,
            format,
            dot,
        } => rank(&file, policy, &iteration, format, dot.as_deref()),
        Command::Culp {
            file,
            measure,
            policy,
            iteration,
            format,
        } => {
            let abf = load(&file)?;
            let eps = iteration.eps.unwrap_or(DEFAULT_EPSILON);
            let report = culpability(&abf, measure, policy, eps, iteration.max_iter)?;
            let value_json = |v: CulpabilityValue| match v {
                CulpabilityValue::Exact(r) => rational(r),
                CulpabilityValue::Real(x) => real(x),
            };
            match format {
                Format::Table => {
                    let mut out = String::from("assumption  value\n");
                    for (f, v) in report.iter() {
                        out.push_str(&format!("{f}  {v}\n"));
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let values: Map<String, Value> =
                        report.iter().map(|(f, v)| (f.render(), value_json(v))).collect();
                    let mut obj = Map::new();
                    obj.insert("measure".into(), measure.id().into());
                    obj.insert("values".into(), Value::Object(values));
                    if measure == argrank::culpability::Measure::Induced {
                        obj.insert("policy".into(), policy.id().into());
                    }
                    print!("{}", to_json_text(&Value::Object(obj)));
                }
            }
            Ok(())
        }
        Command::Check {
            file,
            random,
            seed,
            count,
            postulate,
            policy,
            ranking,
            iteration,
        } => {
            let wanted = match postulate.as_str() {
                "all" => None,
                name => {
                    let id: PostulateId = name.parse()?;
                    if !PostulateId::ABF.contains(&id) {
                        return Err(Failure::Usage(format!(
                            "`{name}` applies to support/conclusion frameworks; use `sequent --check`"
                        )));
                    }
                    Some(id)
                }
            };
            if random {
                check_random(seed, count, wanted, &iteration)
            } else {
                let file = file.expect("clap requires a file without --random");
                check_file(&file, policy, ranking.as_deref(), wanted, &iteration)
            }
        }
        Command::Sequent {
            file,
            rules,
            filters,
            dot: dot_path,
            check,
            iteration,
            format,
        } => {
            let abf = load(&file)?;
            let framework = build_sequent_af(&abf, rules, filters)?;
            let default_eps = if check { CHECK_EPSILON } else { DEFAULT_EPSILON };
            let ranking = rank_af(&framework.af, &iteration, default_eps)?;
            let verdicts = if check {
                check_sequent(&abf, &framework, &ranking)?
            } else {
                Vec::new()
            };
            if let Some(path) = dot_path {
                write_file(&path, &dot(&framework.af))?;
            }
            match format {
                Format::Table => {
                    let mut out = format!("rules: {rules}\nfilters: {filters}\narguments\n");
                    for (i, label) in framework.af.nodes().iter().enumerate() {
                        out.push_str(&format!("  {i:>4}  {:.6}  {label}\n", ranking.score(i)));
                    }
                    out.push_str("attacks\n");
                    for (from, to) in framework.af.attacks() {
                        out.push_str(&format!("  {from} -> {to}\n"));
                    }
                    out.push_str(&format!("iterations: {}\n", ranking.iterations));
                    if check {
                        out.push_str("checks\n");
                        for v in &verdicts {
                            out.push_str(&verdict_line(v));
                        }
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let arguments: Vec<Value> = framework
                        .arguments
                        .iter()
                        .enumerate()
                        .map(|(i, a)| {
                            json!({
                                "id": i,
                                "support": strings(&a.label(&abf)),
                                "conclusion": a.conclusion.render(),
                            })
                        })
                        .collect();
                    let mut obj = Map::new();
                    obj.insert("rules".into(), rules.to_string().into());
                    obj.insert("filters".into(), filters.to_string().into());
                    obj.insert("arguments".into(), arguments.into());
                    obj.insert("attacks".into(), json!(framework.af.attacks()));
                    obj.insert("scores".into(), scores_json(&ranking));
                    obj.insert("iterations".into(), ranking.iterations.into());
                    if check {
                        obj.insert("verdicts".into(), verdicts.iter().map(verdict_json).collect());
                    }
                    print!("{}", to_json_text(&Value::Object(obj)));
                }
            }
            report_verdicts(&verdicts)
        }
    }
}

fn analyze(file: &Path, format: Format) -> Outcome {
    let abf = load(file)?;
    let mcs = enumerate_mcs(&abf)?.formula_sets();
    let mic = enumerate_mic(&abf)?.formula_sets();
    let free = free_formulas(&abf)?;
    match format {
        Format::Table => {
            let mut out = String::new();
            for (title, family) in [("MCS", &mcs), ("MIC", &mic)] {
                out.push_str(title);
                out.push('\n');
                for set in family {
                    out.push_str(&format!("  {}\n", NodeLabel::Assumptions(set.clone())));
                }
            }
            out.push_str(&format!("FREE\n  {}\n", NodeLabel::Assumptions(free)));
            print!("{out}");
        }
        Format::Json => {
            let render = |sets: &Vec<Vec<argrank::Formula>>| -> Value {
                sets.iter()
                    .map(|s| s.iter().map(|f| f.render()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .into()
            };
            let value = json!({
                "mcs": render(&mcs),
                "mic": render(&mic),
                "free": free.iter().map(|f| f.render()).collect::<Vec<_>>(),
            });
            print!("{}", to_json_text(&value));
        }
    }
    Ok(())
}

fn rank(file: &Path, policy: NodePolicy, iteration: &Iteration, format: Format, dot_path: Option<&Path>) -> Outcome {
    let abf = load(file)?;
    let diagram = build_attack_diagram(&abf, policy)?;
    let af = diagram.af();
    let ranking = rank_af(af, iteration, DEFAULT_EPSILON)?;
    if let Some(path) = dot_path {
        write_file(path, &dot(af))?;
    }
    match format {
        Format::Table => {
            let mut rows: Vec<(f64, String)> = af
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, l)| (ranking.score(i), l.to_string()))
                .collect();
            print!("{}", score_table(&mut rows));
            println!("iterations: {}", ranking.iterations);
        }
        Format::Json => {
            let nodes: Vec<Value> = af
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, l)| json!({ "id": i, "support": strings(l) }))
                .collect();
            let value = json!({
                "policy": policy.id(),
                "nodes": nodes,
                "attacks": af.attacks(),
                "scores": scores_json(&ranking),
                "iterations": ranking.iterations,
            });
            print!("{}", to_json_text(&value));
        }
    }
    Ok(())
}

fn read_scores(path: &Path, nodes: usize) -> Result<Ranking, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let scores = value
        .get("scores")
        .and_then(Value::as_object)
        .ok_or_else(|| Failure::Usage(format!("{}: missing \"scores\" object", path.display())))?;
    let mut out = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let score = scores
            .get(&i.to_string())
            .and_then(Value::as_f64)
            .ok_or_else(|| Failure::Invalid(format!("{}: no score for node {i}", path.display())))?;
        out.push(score);
    }
    if scores.len() != nodes {
        return Err(Failure::Invalid(format!(
            "{}: {} scores for {nodes} nodes",
            path.display(),
            scores.len()
        )));
    }
    Ok(Ranking::from_scores(out, Semantics::Categoriser))
}

fn selected(verdicts: Vec<PostulateVerdict>, wanted: Option<PostulateId>) -> Vec<PostulateVerdict> {
    verdicts
        .into_iter()
        .filter(|v| wanted.is_none_or(|w| v.postulate == w))
        .collect()
}

fn check_file(
    file: &Path,
    policy: NodePolicy,
    ranking: Option<&Path>,
    wanted: Option<PostulateId>,
    iteration: &Iteration,
) -> Outcome {
    let abf = load(file)?;
    let diagram = build_attack_diagram(&abf, policy)?;
    let ranking = match ranking {
        Some(path) => read_scores(path, diagram.af().len())?,
        None => rank_af(diagram.af(), iteration, CHECK_EPSILON)?,
    };
    let verdicts = selected(check_abf(&abf, &diagram, &ranking)?, wanted);
    let array: Vec<Value> = verdicts.iter().map(verdict_json).collect();
    print!("{}", to_json_text(&Value::Array(array)));
    report_verdicts(&verdicts)
}

fn check_random(seed: u64, count: usize, wanted: Option<PostulateId>, iteration: &Iteration) -> Outcome {
    let params = GeneratorParams {
        seed,
        ..Default::default()
    };
    let eps = iteration.eps.unwrap_or(CHECK_EPSILON);
    let report = run_suite_with(&params, count, |_, d| categoriser(d.af(), eps, iteration.max_iter))?;
    let mut array = Vec::new();
    let mut verdicts = Vec::new();
    for instance in &report.instances {
        let Ok(vs) = &instance.outcome else { continue };
        for v in vs.iter().filter(|v| wanted.is_none_or(|w| v.postulate == w)) {
            let mut obj = verdict_json(v);
            obj["index"] = instance.index.into();
            array.push(obj);
            verdicts.push(v.clone());
        }
    }
    print!("{}", to_json_text(&Value::Array(array)));
    if let Some((instance, e)) = report.errors().next() {
        let message = format!("instance {} ({}): {e}", instance.index, instance.fingerprint);
        return Err(match e {
            Error::NoConvergence { .. } => Failure::NoConvergence(message),
            _ => Failure::Invalid(message),
        });
    }
    report_verdicts(&verdicts)
}

fn verdict_line(v: &PostulateVerdict) -> String {
    let mut line = format!("  {}: {}", v.postulate, v.status.id());
    if let Some(note) = &v.note {
        line.push_str(&format!(" ({note})"));
    }
    if let Some(cx) = &v.counterexample {
        let witnesses: Vec<String> = cx
            .witnesses
            .iter()
            .map(|(_, label, score)| format!("{label} = {score:.6}"))
            .collect();
        line.push_str(&format!(" [{}; {}]", cx.reason, witnesses.join(", ")));
    }
    line.push('\n');
    line
}

fn report_verdicts(verdicts: &[PostulateVerdict]) -> Outcome {
    for v in verdicts.iter().filter(|v| v.status == Status::Inapplicable) {
        eprintln!(
            "warning: {} is inapplicable: {}",
            v.postulate,
            v.note.as_deref().unwrap_or("premise has no nodes")
        );
    }
    if verdicts.iter().any(|v| v.status == Status::Fail) {
        return Err(Failure::Violation);
    }
    Ok(())
}
