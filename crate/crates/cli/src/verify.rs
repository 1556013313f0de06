//! Certificate recognition and checking for `dipath verify`.

use dipath::diblockage::{admissability_violation, diblockage_violation, DualityCertificate};
use dipath::linked::{linked_violation, property_two_violation};
use dipath::minors::{check_embedding, ModelMap};
use dipath::{BagDecomposition, Digraph, Limits, PartialOrientation, SPath, WidthResult};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::Failure;

pub struct Report {
    pub kind: &'static str,
    pub valid: bool,
    pub reason: Option<String>,
}

impl Report {
    fn new(kind: &'static str, problem: Option<String>) -> Self {
        Report { kind, valid: problem.is_none(), reason: problem }
    }

    pub fn to_json(&self) -> Value {
        match &self.reason {
            None => json!({"valid": true, "kind": self.kind}),
            Some(why) => json!({"valid": false, "kind": self.kind, "reason": why}),
        }
    }
}

fn decode<T: DeserializeOwned>(kind: &'static str, value: &Value) -> Result<T, Report> {
    T::deserialize(value).map_err(|e| Report::new(kind, Some(format!("malformed certificate: {e}"))))
}

fn decomposition_problem(d: &Digraph, b: &BagDecomposition) -> Option<String> {
    b.validate(d).err().map(|e| e.to_string())
}

fn path_problem(d: &Digraph, p: &SPath, k: usize, omega: usize) -> Option<String> {
    admissability_violation(d, p, &PartialOrientation::empty(k, omega))
}

/// Recognises the certificate by its `kind` tag, or by its fields when untagged.
pub fn check(d: &Digraph, value: &Value, limits: &Limits) -> Result<Report, Failure> {
    let kind = value.get("kind").and_then(Value::as_str);
    let has = |field: &str| value.get(field).is_some();
    let report = match kind {
        Some("path") | Some("diblockage") => match decode::<DualityCertificate>("duality", value) {
            Err(r) => r,
            Ok(DualityCertificate::Path { k, omega, path }) => Report::new("path", path_problem(d, &path, k, omega)),
            Ok(DualityCertificate::Diblockage(o)) => Report::new("diblockage", diblockage_violation(d, &o, limits)?),
        },
        Some("model") => match decode::<ModelMap>("model", value) {
            Err(r) => r,
            Ok(m) => Report::new("model", check_embedding(d, &m).err().map(|why| format!("{}: {why}", why.code()))),
        },
        Some("linked") => {
            let k = value.get("k").and_then(Value::as_u64);
            let omega = value.get("omega").and_then(Value::as_u64);
            match (k, omega, decode::<SPath>("linked", value)) {
                (_, _, Err(r)) => r,
                (Some(k), Some(omega), Ok(p)) => {
                    let problem = path_problem(d, &p, k as usize, omega as usize).or_else(|| {
                        match linked_violation(d, &p) {
                            Ok(None) => None,
                            Ok(Some((i, j))) => Some(format!("not linked between positions {i} and {j}")),
                            Err(e) => Some(e.to_string()),
                        }
                    });
                    Report::new("linked", problem)
                }
                _ => Report::new("linked", Some("missing k or omega".into())),
            }
        }
        Some("subdivided") => match decode::<BagDecomposition>("subdivided", value) {
            Err(r) => r,
            Ok(b) => {
                let problem = decomposition_problem(d, &b).or_else(|| {
                    property_two_violation(d, &b)
                        .map(|(i, j, t)| format!("fewer than {t} disjoint paths from bag {j} to bag {i}"))
                });
                Report::new("subdivided", problem)
            }
        },
        Some(other) => Report::new("unknown", Some(format!("unknown certificate kind `{other}`"))),
        None if has("dpw") => match decode::<WidthResult>("decomposition", value) {
            Err(r) => r,
            Ok(w) => {
                let problem = decomposition_problem(d, &w.witness).or_else(|| {
                    (w.witness.width() != w.dpw)
                        .then(|| format!("bags have width {} but dpw {} is claimed", w.witness.width(), w.dpw))
                });
                Report::new("decomposition", problem)
            }
        },
        None if has("bags") => match decode::<BagDecomposition>("decomposition", value) {
            Err(r) => r,
            Ok(b) => Report::new("decomposition", decomposition_problem(d, &b)),
        },
        None if has("chain") => match decode::<SPath>("spath", value) {
            Err(r) => r,
            Ok(p) => Report::new("spath", p.validate(d).err().map(|e| e.to_string())),
        },
        None => Report::new("unknown", Some("no kind, dpw, bags or chain field".into())),
    };
    Ok(report)
}
