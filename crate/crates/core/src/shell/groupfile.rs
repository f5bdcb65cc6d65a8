//! The `.grp` group-file format: JSON with a fixed schema, rationals as
//! "p/q" strings, matrices row-major.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::crystal::{build_crystal, CrystalError, CrystalGroup, DEFAULT_HOLONOMY_CAP};
use crate::exactmath::{IntMatrix, RatVector};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("semantic error: {0}")]
    Semantic(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    matrix: Vec<Vec<i64>>,
    vector: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: String,
    dimension: usize,
    generators: Vec<RawGenerator>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub matrix: IntMatrix,
    pub vector: RatVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<Generator>,
    pub metadata: Map<String, Value>,
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Semantic(format!("vector entry {s:?} is not a rational number"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(ParseError::Semantic(format!("vector entry {s:?} has zero denominator")));
    }
    Ok(BigRational::new(p, q))
}

fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_group_file(text: &str) -> Result<GroupFile, ParseError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => ParseError::Schema(e.to_string()),
        _ => ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
    })?;
    let n = raw.dimension;
    let mut generators = Vec::with_capacity(raw.generators.len());
    for (i, g) in raw.generators.into_iter().enumerate() {
        let rows = g.matrix.len();
        if g.matrix.iter().any(|r| r.len() != rows) {
            return Err(ParseError::Schema(format!("generator {i}: matrix is not square")));
        }
        if rows != n {
            return Err(ParseError::Semantic(format!("generator {i}: matrix is {rows}x{rows}, dimension is {n}")));
        }
        if g.vector.len() != n {
            return Err(ParseError::Semantic(format!(
                "generator {i}: vector has {} entries, dimension is {n}",
                g.vector.len()
            )));
        }
        let matrix = IntMatrix::from_rows(g.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let vector = g.vector.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        generators.push(Generator { matrix, vector });
    }
    Ok(GroupFile { name: raw.name, dimension: n, generators, metadata: raw.metadata })
}

impl GroupFile {
    pub fn from_crystal(g: &CrystalGroup, metadata: Map<String, Value>) -> Self {
        Self {
            name: g.name().to_string(),
            dimension: g.dim(),
            generators: g
                .generator_matrices()
                .iter()
                .zip(g.generator_vectors())
                .map(|(m, v)| Generator { matrix: m.clone(), vector: v.clone() })
                .collect(),
            metadata,
        }
    }

    pub fn build(&self) -> Result<CrystalGroup, CrystalError> {
        let mats: Vec<IntMatrix> = self.generators.iter().map(|g| g.matrix.clone()).collect();
        let vecs: Vec<RatVector> = self.generators.iter().map(|g| g.vector.clone()).collect();
        build_crystal(&self.name, self.dimension, &mats, &vecs, DEFAULT_HOLONOMY_CAP)
    }

    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let rows: Vec<String> = g
                    .matrix
                    .to_rows()
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
                    .collect();
                let vec: Vec<String> = g.vector.iter().map(|x| format!("\"{}\"", format_rational(x))).collect();
                format!("    {{\"matrix\": [{}], \"vector\": [{}]}}", rows.join(", "), vec.join(", "))
            })
            .collect();
        let gens = if gens.is_empty() { "[]".to_string() } else { format!("[\n{}\n  ]", gens.join(",\n")) };
        format!(
            "{{\n  \"name\": {},\n  \"dimension\": {},\n  \"generators\": {},\n  \"metadata\": {}\n}}\n",
            Value::String(self.name.clone()),
            self.dimension,
            gens,
            Value::Object(self.metadata.clone())
        )
    }

    pub fn to_json(&self) -> Value {
        serde_json::from_str(&self.to_text()).expect("group file text is valid JSON")
    }

    /// Stored expectations that the built group does not meet.
    pub fn metadata_mismatches(&self, g: &CrystalGroup) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |key: &str, actual: Value| {
            if let Some(want) = self.metadata.get(key) {
                if want != &actual {
                    out.push(format!("{key}: expected {want}, found {actual}"));
                }
            }
        };
        check("abelianization", Value::String(g.abelianization().to_string()));
        check("betti1", Value::from(g.betti1()));
        check("holonomy_order", Value::from(g.holonomy_order()));
        check("orientable", Value::Bool(g.is_orientable()));
        check("torsion_free", Value::Bool(g.is_torsion_free()));
        check("dimension", Value::from(g.dim()));
        out
    }
}

/// Matrix in the compact `a,b;c,d` notation used on the command line.
pub fn parse_matrix_arg(s: &str) -> Result<IntMatrix, ParseError> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| ParseError::Semantic(format!("bad matrix entry {x:?}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ParseError::Schema(format!("matrix {s:?} is not square")));
    }
    Ok(IntMatrix::from_rows(rows))
}

pub fn parse_vector_arg(s: &str) -> Result<RatVector, ParseError> {
    s.split(',').map(parse_rational).collect()
}

pub fn int_matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| x.to_i64().map_or(Value::String(x.to_string()), Value::from)).collect()))
            .collect(),
    )
}

pub fn rat_vector_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}
