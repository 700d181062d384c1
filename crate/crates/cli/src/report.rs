//! Output helpers shared by the subcommands.

use std::fmt::Write as _;

use argrank::af::AbstractAF;
use argrank::postulates::{PostulateVerdict, Requirement};
use num_rational::Rational64;
use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

/// Reals always go out with six decimals so output is byte-stable.
pub fn real(x: f64) -> Value {
    let text = format!("{x:.6}");
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn rational(r: Rational64) -> Value {
    json!({ "num": r.numer(), "den": r.denom() })
}

pub fn to_json_text(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    text
}

pub fn dot_id(label: &str) -> String {
    let digest = Sha256::digest(label.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("n{}", &hex[..12])
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn dot(af: &AbstractAF) -> String {
    let mut out = String::from("digraph attacks {\n");
    let ids: Vec<String> = af.nodes().iter().map(|l| dot_id(&l.to_string())).collect();
    for (id, label) in ids.iter().zip(af.nodes()) {
        let _ = writeln!(out, "  {id} [label=\"{}\"];", dot_escape(&label.to_string()));
    }
    for &(from, to) in af.attacks() {
        let _ = writeln!(out, "  {} -> {};", ids[from], ids[to]);
    }
    out.push_str("}\n");
    out
}

fn requirement_json(req: &Requirement) -> Value {
    match *req {
        Requirement::AtLeast { higher, lower } => {
            json!({ "kind": "at-least", "higher": higher, "lower": lower })
        }
        Requirement::StrictlyAbove { higher, lower } => {
            json!({ "kind": "strictly-above", "higher": higher, "lower": lower })
        }
        Requirement::Equals { node, value } => {
            json!({ "kind": "equals", "node": node, "value": real(value) })
        }
        Requirement::Below { node, value } => {
            json!({ "kind": "below", "node": node, "value": real(value) })
        }
    }
}

pub fn verdict_json(v: &PostulateVerdict) -> Value {
    let mut obj = Map::new();
    obj.insert("postulate".into(), v.postulate.id().into());
    obj.insert("status".into(), v.status.id().into());
    obj.insert("instance".into(), v.instance_fingerprint.clone().into());
    if let Some(note) = &v.note {
        obj.insert("note".into(), note.clone().into());
    }
    let cx = v.counterexample.as_ref().map(|cx| {
        let witnesses: Vec<Value> = cx
            .witnesses
            .iter()
            .map(|(node, label, score)| json!({ "id": node, "label": label, "score": real(*score) }))
            .collect();
        json!({
            "requirement": requirement_json(&cx.requirement),
            "reason": cx.reason,
            "witnesses": witnesses,
        })
    });
    obj.insert("counterexample".into(), cx.unwrap_or(Value::Null));
    Value::Object(obj)
}

/// Rows `(score, label)` sorted by score descending, then label.
pub fn score_table(rows: &mut [(f64, String)]) -> String {
    rows.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut out = String::from("score     node\n");
    for (score, label) in rows.iter() {
        let _ = writeln!(out, "{score:.6}  {label}");
    }
    out
}
