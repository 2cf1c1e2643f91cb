//! File formats read by the subcommands. Every reader has a matching writer,
//! and reading what a writer produced gives back the same value.

use std::collections::BTreeMap;

use gmetric::equiv::Partition;
use gmetric::gms::SpaceDoc;
use gmetric::semirigid::{EquivSystem, PlaneSet};
use gmetric::zcong::affine::GridDoc;
use gmetric::zcong::{AbelianGroup, GridMap};
use gmetric::zigzag::GraphDoc;
use gmetric::{Alphabet, Error, FinalSegment, FiniteGms, IntPoly, ReflexiveDigraph};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

fn from_str<T: for<'de> Deserialize<'de>>(what: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// `{"vertices": [..], "edges": [[a, b], ..]}`; loops are implied. Posets use
/// the same shape with `[a, b]` meaning `a ≤ b`.
pub fn read_graph(s: &str) -> Result<ReflexiveDigraph, CliError> {
    let doc: GraphDoc = from_str("graph", s)?;
    Ok(ReflexiveDigraph::from_doc(&doc)?)
}

pub fn write_graph(g: &ReflexiveDigraph) -> Value {
    serde_json::to_value(g.to_doc()).expect("graph document")
}

/// `{"monoid": {..}, "points": [..], "dist": [[..], ..]}`.
pub fn read_space(s: &str) -> Result<FiniteGms, CliError> {
    let doc: SpaceDoc = from_str("space", s)?;
    Ok(FiniteGms::from_doc(&doc)?)
}

pub fn write_space(g: &FiniteGms) -> Value {
    serde_json::to_value(g.to_doc()).expect("space document")
}

/// A list of partitions, or `{"n": .., "relations": [..]}`.
pub fn read_system(s: &str) -> Result<EquivSystem, CliError> {
    Ok(EquivSystem::from_json(s)?)
}

pub fn write_system(sys: &EquivSystem) -> Value {
    serde_json::to_value(&sys.relations).expect("system document")
}

/// Either `["+-", "-+"]` over the signed alphabet or
/// `{"alphabet": ["a", "b"], "words": [..]}`.
pub fn read_antichain(s: &str) -> Result<FinalSegment, CliError> {
    let v: Value = from_str("antichain", s)?;
    match &v {
        Value::Array(_) => Ok(FinalSegment::from_json(Alphabet::signed(), &v)?),
        Value::Object(o) => {
            let names: Vec<String> = serde_json::from_value(o.get("alphabet").cloned().unwrap_or(Value::Null))
                .map_err(|e| CliError::Input(format!("alphabet: {e}")))?;
            let words = o.get("words").ok_or_else(|| CliError::Input("antichain: missing \"words\"".into()))?;
            Ok(FinalSegment::from_json(Alphabet::plain(names)?, words)?)
        }
        _ => Err(CliError::Input("antichain must be an array or an object".into())),
    }
}

pub fn write_antichain(f: &FinalSegment) -> Value {
    if f.alphabet().is_signed() {
        f.to_json()
    } else {
        json!({ "alphabet": f.alphabet().names(), "words": f.to_json() })
    }
}

/// A polynomial as an expression (`x^2/2 - x/2`, `3*C(x,2) + 1`) or as
/// `{"binomial": ["0", "0", "1"]}`.
pub fn read_poly(s: &str) -> Result<IntPoly, CliError> {
    if s.trim_start().starts_with('{') {
        from_str("polynomial", s)
    } else {
        Ok(IntPoly::parse(s)?)
    }
}

pub fn write_poly(p: &IntPoly) -> Value {
    serde_json::to_value(p).expect("polynomial document")
}

/// `{"lo": [..], "hi": [..], "values": [[point, image], ..]}`.
pub fn read_grid(s: &str) -> Result<GridMap, CliError> {
    let doc: GridDoc = from_str("grid map", s)?;
    Ok(GridMap::from_doc(&doc)?)
}

pub fn write_grid(g: &GridMap) -> Value {
    serde_json::to_value(g.to_doc()).expect("grid document")
}

/// A JSON array of `[x, y]` points with integer or `"a/b"` coordinates.
pub fn read_plane(s: &str) -> Result<PlaneSet, CliError> {
    Ok(PlaneSet::from_json(s)?)
}

pub fn write_plane(c: &PlaneSet) -> Value {
    c.to_json()
}

fn big(v: &Value) -> Result<BigInt, CliError> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(CliError::Input(format!("not an integer: {other}"))),
    };
    s.trim().parse().map_err(|_| CliError::Input(format!("not an integer: {s}")))
}

/// `[[a, f(a)], ..]` with integers or decimal strings.
pub fn read_pairs(s: &str) -> Result<BTreeMap<BigInt, BigInt>, CliError> {
    let raw: Vec<(Value, Value)> = from_str("pairs", s)?;
    let mut out = BTreeMap::new();
    for (a, b) in &raw {
        let a = big(a)?;
        if out.insert(a.clone(), big(b)?).is_some() {
            return Err(CliError::Input(format!("{a} is mapped twice")));
        }
    }
    Ok(out)
}

pub fn write_pairs(f: &BTreeMap<BigInt, BigInt>) -> Value {
    Value::Array(f.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect())
}

/// Input of `eqv crt`. Without `lattice`, the sublattice generated by the
/// constraint partitions is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Partition>>,
    pub constraints: Vec<(usize, Partition)>,
}

/// Input of `eqv extend`: a partial map on the carrier and the new point `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendDoc {
    pub lattice: Vec<Partition>,
    pub map: Vec<(usize, usize)>,
    pub z: usize,
}

/// Input of `zcong square`: a group table and the images of `A × A` in
/// row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub group: AbelianGroup,
    pub map: Vec<(usize, usize)>,
}

pub fn read_doc<T: for<'de> Deserialize<'de>>(what: &str, s: &str) -> Result<T, CliError> {
    from_str(what, s)
}

pub fn write_doc<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("serializable document")
}

/// Partition lists are accepted in either system form.
pub fn read_lattice(s: &str) -> Result<Vec<Partition>, CliError> {
    Ok(read_system(s)?.relations)
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Input(e.to_string())
    }
}
