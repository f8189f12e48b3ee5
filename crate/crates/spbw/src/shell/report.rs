//! JSON report documents. Keys are sorted and numbers are integers, so
//! identical inputs and seeds give byte-identical `results`.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::ShellError;
use crate::assocprimes::{is_right_ideal, right_ideal_generators};
use crate::finring::{ElemSet, FiniteRing};

pub const SCHEMA_VERSION: u32 = 1;

/// Element sets of rings above this size are described by generators.
pub const FULL_DUMP_LIMIT: u32 = 64;

const SAMPLE: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub input_digest: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub mode: String,
    pub results: Vec<Value>,
    pub wall_time_ms: u64,
}

impl ReportDoc {
    pub fn new(command: Vec<String>, input: &str, seed: u64, mode: &str) -> Self {
        ReportDoc {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: digest(input),
            command,
            seed,
            mode: mode.to_string(),
            results: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        canonical(&serde_json::to_value(self).expect("report serializes"))
    }

    /// The `results` array alone, the part covered by the determinism contract.
    pub fn results_json(&self) -> String {
        canonical(&Value::Array(self.results.clone()))
    }
}

/// Pretty JSON with sorted keys (the default `serde_json` map is ordered).
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

pub fn digest(text: &str) -> String {
    format!("sha256:{:x}", Sha256::digest(text.as_bytes()))
}

pub fn emit_report(doc: &ReportDoc, path: &Path) -> Result<(), ShellError> {
    std::fs::write(path, doc.to_json()).map_err(|e| ShellError::Io(format!("{}: {e}", path.display())))
}

/// An element set: every element for small rings, otherwise right-ideal
/// generators when the set is a right ideal, else a leading sample.
pub fn elem_set(ring: &FiniteRing, set: &ElemSet) -> Value {
    let show = |v: Vec<crate::finring::Elem>| v.into_iter().map(|e| ring.format(e)).collect::<Vec<_>>();
    if ring.card() <= FULL_DUMP_LIMIT {
        return json!({ "size": set.len(), "elements": show(set.to_vec()) });
    }
    if is_right_ideal(ring, set) {
        return json!({ "size": set.len(), "right_ideal_generators": show(right_ideal_generators(ring, set)) });
    }
    json!({
        "size": set.len(),
        "sample": show(set.iter().take(SAMPLE).collect()),
        "truncated": set.len() > SAMPLE,
    })
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("result serializes")
}
