use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}, expected json or text")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub caps: BTreeMap<String, u64>,
}

impl Provenance {
    pub fn new(seed: u64) -> Self {
        let caps = [
            ("holonomy_order", crate::crystal::DEFAULT_HOLONOMY_CAP as u64),
            ("ghw_candidates", crate::ghw::DEFAULT_GHW_CAP),
            ("scan_candidates", crate::dynamics::DEFAULT_SCAN_CAP as u64),
            ("certify_word_length", crate::ghw::DEFAULT_CERTIFY_BOUND as u64),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self { version: env!("CARGO_PKG_VERSION").to_string(), seed, caps }
    }
}

/// A command's structured output. Sections are the fixed top-level keys
/// `invariants`, `predicates`, `cohomology`, `dynamics`, `spin`, `results`;
/// empty ones are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    pub sections: BTreeMap<&'static str, Map<String, Value>>,
    pub provenance: Provenance,
}

pub const SECTIONS: [&str; 6] = ["invariants", "predicates", "cohomology", "dynamics", "spin", "results"];

impl Report {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        Self { command, sections: BTreeMap::new(), provenance: Provenance::new(seed) }
    }

    pub fn set(&mut self, section: &'static str, key: &str, value: Value) {
        assert!(SECTIONS.contains(&section), "unknown section {section}");
        self.sections.entry(section).or_default().insert(key.to_string(), value);
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.sections.get(section)?.get(key)
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), json!(self.command));
        for s in SECTIONS {
            if let Some(m) = self.sections.get(s) {
                root.insert(s.into(), Value::Object(m.clone()));
            }
        }
        root.insert(
            "provenance".into(),
            json!({
                "tool": "crystalkit",
                "version": self.provenance.version,
                "seed": self.provenance.seed,
                "caps": self.provenance.caps,
            }),
        );
        Value::Object(root)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut rows = Vec::new();
                flatten("", &self.to_json(), &mut rows);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
            }
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn ints_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}
